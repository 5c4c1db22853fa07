import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException

from lleb.data import export
from lleb.errors import ConfigError, LLEBifError, ReportedFailure
from lleb.models.continuation import ContinuationConfig, locate_secondary, trace_from_primary
from lleb.models.primary import all_primary_points, compute_kmax, primary_points_by_k
from lleb.models.spectral import index_table
from lleb.models.symmetry import certify, scan_certificates
from lleb.models.trivial import Params, sample_trivial
from lleb.modules.counterexample import (CounterexampleConfig, default_lambda_grid, make_cex_params,
                                         verify_counterexample)
from lleb.util import instantiate_from_config

COMMANDS = ("trivial", "primary", "index", "certify", "branch", "secondary", "counterexample", "diagram")
OUTDIR_ENV = "LLEB_OUTDIR"

logger = logging.getLogger("lleb")


@dataclass
class RunConfig:
    d: float = 0.1
    f: float = 1.6
    q: Optional[int] = None
    p_div: Optional[int] = None
    slot: int = 1
    sign: int = 1
    n_trivial: int = 2001
    n_proc: int = 1
    out: Optional[str] = None
    continuation: ContinuationConfig = field(default_factory=ContinuationConfig)
    counterexample: CounterexampleConfig = field(default_factory=CounterexampleConfig)

    def __post_init__(self):
        if self.q is not None and self.q < 1 or self.p_div is not None and self.p_div < 1:
            raise ConfigError("q and p must be positive", q=self.q, p_div=self.p_div)
        if self.q is not None and self.p_div is not None and self.q % self.p_div:
            raise ConfigError("p must divide q", q=self.q, p_div=self.p_div)
        if self.slot not in (1, 2) or self.sign not in (1, -1):
            raise ConfigError("slot must be 1 or 2 and sign +-1", slot=self.slot, sign=self.sign)
        if self.n_proc < 1 or self.n_trivial < 2:
            raise ConfigError("n_proc and n_trivial must be positive", n_proc=self.n_proc, n_trivial=self.n_trivial)

    @property
    def params(self):
        return Params(d=self.d, f=self.f)

    @property
    def outdir(self):
        return self.out or os.environ.get(OUTDIR_ENV) or "outputs"


def get_parser(**parser_kwargs):
    parser = argparse.ArgumentParser(**parser_kwargs)
    parser.add_argument(
        "command",
        choices=COMMANDS,
        help="what to compute",
    )
    parser.add_argument(
        "-b",
        "--base",
        nargs="*",
        metavar="base_config.yaml",
        help="paths to base configs (YAML or JSON). Loaded from left-to-right. "
             "Parameters can be overwritten or added with command-line options of the form `key=value`.",
        default=list(),
    )
    parser.add_argument("--d", type=float, help="dispersion coefficient")
    parser.add_argument("--f", type=float, help="forcing amplitude")
    parser.add_argument("--q", type=int, help="period divisor of the symmetric subspace / bifurcating mode")
    parser.add_argument("--p", type=int, dest="p_div", help="period divisor of the ambient space")
    parser.add_argument("--L", type=int, help="Galerkin truncation order")
    parser.add_argument("--N", type=int, help="number of collocation intervals (N >= 3L)")
    parser.add_argument("--budget", type=int, help="continuation step budget")
    parser.add_argument("--out", type=str, help=f"output directory (default: ${OUTDIR_ENV} or outputs/)")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--no-progress", action="store_true", help="disable progress bars")
    return parser


def flag_overrides(opt):
    """Explicit flags as a dotlist; these win over base configs and dotlist overrides."""
    mapping = {"d": "d", "f": "f", "q": "q", "p_div": "p_div", "out": "out", "L": "continuation.L",
               "N": "continuation.N", "budget": "continuation.budget"}
    dotlist = [f"{key}={getattr(opt, name)}" for name, key in mapping.items() if getattr(opt, name) is not None]
    if opt.no_progress:
        dotlist.append("continuation.progress=false")
    return dotlist


def load_config(opt, unknown):
    try:
        schema = OmegaConf.structured(RunConfig)
        configs = [OmegaConf.load(cfg) for cfg in opt.base]
        cli = OmegaConf.from_dotlist(unknown)
        flags = OmegaConf.from_dotlist(flag_overrides(opt))
        config = OmegaConf.merge(schema, *configs, cli, flags)
        return OmegaConf.to_object(config), config
    except OmegaConfBaseException as e:
        raise ConfigError(f"invalid configuration: {e}") from e


def _out(config, name):
    return os.path.join(config.outdir, name)


def _primary_branch_origin(config, p):
    if config.q is None:
        raise ConfigError("--q is required for this command")
    pair = primary_points_by_k(p).get(config.q, ())
    if len(pair) < config.slot:
        raise ConfigError("no primary point for this mode and slot", q=config.q, slot=config.slot)
    return pair[config.slot - 1]


def run_trivial(config, p):
    points = sample_trivial(p, n=config.n_trivial)
    return [export.write_csv(_out(config, "trivial.csv"), export.TRIVIAL_HEADER, export.trivial_rows(points))]


def run_primary(config, p):
    points = all_primary_points(p, n_proc=config.n_proc)
    for bp in points:
        print(f"{bp.label:>8s}  t={bp.t: .5f}  zeta={bp.zeta: .5f}  a={bp.point.a.real:.5f}{bp.point.a.imag:+.5f}i")
    payload = {"d": p.d, "f": p.f, "kmax": compute_kmax(p), "points": [export.primary_to_dict(bp) for bp in points]}
    header, rows = export.primary_table(points)
    return [export.write_csv(_out(config, "primary.csv"), export.PRIMARY_HEADER, export.primary_rows(points)),
            export.write_csv(_out(config, "primary_table.csv"), header, rows),
            export.write_json(_out(config, "primary.json"), "primary", payload)]


def run_index(config, p):
    p_div = config.p_div or 1
    jumps = index_table(p, p_div)
    for j in jumps:
        print(f"delta*({j.at.label}; p={p_div}) = {j.delta_star:+d}")
    payload = {"d": p.d, "f": p.f, "p_div": p_div, "jumps": [export.jump_to_dict(j) for j in jumps]}
    return [export.write_json(_out(config, f"index_p{p_div}.json"), "index", payload)]


def run_certify(config, p):
    if config.q is None:
        certs = scan_certificates(p, n_proc=config.n_proc)
        for c in certs:
            print(f"q={c.q} p={c.p_div}: total={c.total:+d} certified={c.certified} ({c.kind})")
        payload = {"d": p.d, "f": p.f, "certificates": [export.certificate_to_dict(c) for c in certs]}
        return [export.write_json(_out(config, "certificates.json"), "certificates", payload)]
    cert = certify(config.q, config.p_div or 1, p)
    print(f"q={cert.q} p={cert.p_div}: total={cert.total:+d} certified={cert.certified} ({cert.kind})")
    payload = {"d": p.d, "f": p.f, "certificate": export.certificate_to_dict(cert)}
    return [export.write_json(_out(config, f"certificate_q{cert.q}_p{cert.p_div}.json"), "certificate", payload)]


def _trace(config, p):
    bp = _primary_branch_origin(config, p)
    ambient = config.p_div or bp.k
    start = time.time()
    branch = trace_from_primary(bp, config.sign, ambient, p, config.continuation)
    print(f"branch from {bp.label} (ambient p={ambient}): {len(branch)} points, terminus={branch.terminus}, "
          f"end={getattr(branch.end_point, 'label', None)} [{time.time() - start:.1f} sec.]")
    return bp, ambient, branch


def run_branch(config, p):
    bp, ambient, branch = _trace(config, p)
    name = f"branch_q{bp.k}_{bp.slot}_p{ambient}"
    return [export.write_csv(_out(config, name + ".csv"), export.BRANCH_HEADER, export.branch_rows(branch))]


def run_secondary(config, p):
    bp, ambient, branch = _trace(config, p)
    pairs = locate_secondary(branch, ambient)
    for lo, hi in pairs:
        print(f"index change between zeta={lo.zeta:.6f} and zeta={hi.zeta:.6f} (amplitude {lo.amplitude:.4f})")
    name = f"secondary_q{bp.k}_{bp.slot}_p{ambient}.json"
    return [export.write_json(_out(config, name), "secondary", export.secondary_to_dict(branch, pairs))]


def run_counterexample(config, p):
    cc = config.counterexample
    c = instantiate_from_config({"target": "lleb.modules.counterexample.make_cex_params",
                                 "params": {"a_cut": cc.a_cut, "bump": cc.bump}})
    path = _out(config, f"counterexample_a{cc.a_cut:g}.json")
    try:
        report = verify_counterexample(cc.n_max, c, n_samples=cc.n_samples, seed=cc.seed,
                                       lam_grid=default_lambda_grid(cc.n_max, cc.n_grid))
    except ReportedFailure as e:
        export.write_json(path, "counterexample", {"report": export.report_to_dict(e.report)})
        raise
    for claim in report.claims:
        print(f"claim ({claim.name}) {'passed' if claim.passed else 'FAILED'}: {claim.description} "
              f"[{claim.checked} checks, worst {claim.worst:.3e}]")
    return [export.write_json(path, "counterexample", {"report": export.report_to_dict(report)})]


def run_diagram(config, p):
    by_k = primary_points_by_k(p, n_proc=config.n_proc)
    ks = [config.q] if config.q is not None else sorted(by_k)
    branches, secondary = [], []
    for k in ks:
        if k > config.continuation.L or k not in by_k:
            continue
        bp = by_k[k][config.slot - 1]
        ambient = config.p_div if config.p_div and k % config.p_div == 0 else k
        branch = trace_from_primary(bp, config.sign, ambient, p, config.continuation)
        branches.append(branch)
        if ambient != k:
            secondary.extend(locate_secondary(branch, ambient))
    title = f"d={p.d:g}, f={p.f:g}"
    return [export.plot_diagram(_out(config, "diagram.svg"), sample_trivial(p, n=config.n_trivial), branches,
                                all_primary_points(p), secondary, title=title)]


RUNNERS = {
    "trivial": run_trivial,
    "primary": run_primary,
    "index": run_index,
    "certify": run_certify,
    "branch": run_branch,
    "secondary": run_secondary,
    "counterexample": run_counterexample,
    "diagram": run_diagram,
}


def run(config, command):
    """Dispatch one command; returns the written paths."""
    if command not in RUNNERS:
        raise ConfigError("unknown command", command=command)
    return RUNNERS[command](config, config.params)


def write_error(outdir, err):
    doc = err.to_dict()
    path = os.path.join(outdir, "error.json")
    try:
        export.write_json(path, "error", doc)
    except OSError:
        pass
    print(json.dumps(doc), file=sys.stderr)


def main(argv=None):
    parser = get_parser()
    opt, unknown = parser.parse_known_args(argv)
    logging.basicConfig(level=logging.DEBUG if opt.verbose else logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s: %(message)s")

    outdir = opt.out or os.environ.get(OUTDIR_ENV) or "outputs"
    try:
        config, raw = load_config(opt, unknown)
        outdir = config.outdir
        os.makedirs(outdir, exist_ok=True)
        OmegaConf.save(raw, os.path.join(outdir, f"{opt.command}-config.yaml"))
        paths = run(config, opt.command)
    except LLEBifError as e:
        write_error(outdir, e)
        return 1
    for path in paths:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
