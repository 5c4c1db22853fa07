"""Certificates, symmetric branches and their symmetry-breaking points in one run."""
import argparse
import os
import sys

from omegaconf import OmegaConf
from tqdm import tqdm

sys.path.append(os.getcwd())

from lleb.data import export  # noqa: E402
from lleb.models.continuation import ContinuationConfig, locate_secondary, trace_from_primary  # noqa: E402
from lleb.models.primary import all_primary_points, primary_points_by_k  # noqa: E402
from lleb.models.symmetry import certify  # noqa: E402
from lleb.models.trivial import Params, sample_trivial  # noqa: E402

# (q, p_div) pairs with a nonzero certificate for d=0.1, f=1.6
PAIRS = [(7, 1), (6, 3), (6, 2), (4, 2)]


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument(
        "--config",
        type=str,
        default="configs/lle/f1.6-d0.1.yaml",
        help="path to config which specifies d, f and the continuation settings",
    )
    parser.add_argument(
        "--outdir",
        type=str,
        nargs="?",
        help="dir to write results to",
        default=os.environ.get("LLEB_OUTDIR", "outputs/secondary"),
    )
    parser.add_argument(
        "--pairs",
        type=str,
        nargs="*",
        default=[f"{q}:{p}" for q, p in PAIRS],
        help="q:p pairs to certify and trace",
    )
    opt = parser.parse_args()

    config = OmegaConf.load(opt.config)
    p = Params(d=config.d, f=config.f)
    cfg = OmegaConf.to_object(OmegaConf.merge(OmegaConf.structured(ContinuationConfig),
                                              config.get("continuation", {}), {"progress": False}))
    pairs = [tuple(int(v) for v in s.split(":")) for s in opt.pairs]
    os.makedirs(opt.outdir, exist_ok=True)

    by_k = primary_points_by_k(p)
    branches, brackets = [], []
    for q, p_div in tqdm(pairs, desc="pairs"):
        cert = certify(q, p_div, p)
        export.write_json(os.path.join(opt.outdir, f"certificate_q{q}_p{p_div}.json"), "certificate",
                          {"d": p.d, "f": p.f, "certificate": export.certificate_to_dict(cert)})
        branch = trace_from_primary(by_k[q][0], 1, p_div, p, cfg)
        pairs_found = locate_secondary(branch, p_div)
        branches.append(branch)
        brackets.extend(pairs_found)
        export.write_csv(os.path.join(opt.outdir, f"branch_q{q}_p{p_div}.csv"), export.BRANCH_HEADER,
                         export.branch_rows(branch))
        export.write_json(os.path.join(opt.outdir, f"secondary_q{q}_p{p_div}.json"), "secondary",
                          export.secondary_to_dict(branch, pairs_found))
        print(f"q={q} p={p_div}: total={cert.total:+d} ({cert.kind}), branch terminus={branch.terminus}, "
              f"{len(pairs_found)} symmetry-breaking point(s)")
        for lo, hi in pairs_found:
            print(f"    zeta in [{lo.zeta:.6f}, {hi.zeta:.6f}]")

    export.plot_diagram(os.path.join(opt.outdir, "diagram.svg"), sample_trivial(p), branches, all_primary_points(p),
                        brackets, title=f"d={p.d:g}, f={p.f:g}")
    print(f"Your results are ready and waiting for you here: \n{opt.outdir} \nEnjoy.")
