"""CSV/JSON/SVG export of tables, certificates, branches and reports.

Numbers are written with 12 significant digits so that repeated runs produce
byte-identical files. JSON files carry a `schema` tag; `load_json` rebuilds
the in-memory objects from it.
"""
import csv
import json
import logging
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from lleb.models.primary import PrimaryBifPoint  # noqa: E402
from lleb.models.spectral import IndexJump  # noqa: E402
from lleb.models.symmetry import Certificate  # noqa: E402
from lleb.models.trivial import TrivialPoint  # noqa: E402
from lleb.modules.counterexample import ClaimResult, CounterexampleReport  # noqa: E402

logger = logging.getLogger(__name__)

DIGITS = 12
SCHEMA_PREFIX = "lleb."

PRIMARY_HEADER = ["k", "slot", "t", "zeta", "a_re", "a_im"]
TRIVIAL_HEADER = ["t", "zeta", "a_re", "a_im", "zeta_prime"]
BRANCH_HEADER = ["s", "zeta", "c0_re", "c0_im", "amplitude", "morse_in_ambient", "morse_in_symmetric",
                 "sym_residual"]


def fmt(x):
    if isinstance(x, (bool, int, str)):
        return str(x)
    return f"{float(x):.{DIGITS}g}"


def _round(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    try:
        return float(fmt(obj))
    except (TypeError, ValueError):
        return str(obj)


def write_csv(path, header, rows):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    logger.info(f"wrote {path}")
    return path


def write_json(path, schema, payload):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    doc = {"schema": SCHEMA_PREFIX + schema}
    doc.update(_round(payload))
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    logger.info(f"wrote {path}")
    return path


# trivial curve / primary points

def trivial_rows(points):
    return [[pt.t, pt.zeta, pt.a.real, pt.a.imag, pt.zeta_prime] for pt in points]


def primary_rows(points):
    return [[bp.k, bp.slot, bp.t, bp.zeta, bp.point.a.real, bp.point.a.imag] for bp in points]


def primary_table(points):
    """One column per k, one row per quantity, ordered like the published table."""
    by_k = {}
    for bp in points:
        by_k.setdefault(bp.k, {})[bp.slot] = bp
    ks = sorted(k for k, slots in by_k.items() if set(slots) == {1, 2})
    header = ["quantity"] + [f"k={k}" for k in ks]
    quantities = [("t_1", lambda b: b[1].t), ("t_2", lambda b: b[2].t),
                  ("zeta_1", lambda b: b[1].zeta), ("zeta_2", lambda b: b[2].zeta),
                  ("a_1_re", lambda b: b[1].point.a.real), ("a_1_im", lambda b: b[1].point.a.imag),
                  ("a_2_re", lambda b: b[2].point.a.real), ("a_2_im", lambda b: b[2].point.a.imag)]
    rows = [[name] + [get(by_k[k]) for k in ks] for name, get in quantities]
    return header, rows


def trivial_point_to_dict(pt):
    return {"t": pt.t, "a": pt.a, "zeta": pt.zeta, "a_prime": pt.a_prime, "zeta_prime": pt.zeta_prime}


def trivial_point_from_dict(d):
    return TrivialPoint(t=d["t"], a=complex(*d["a"]), zeta=d["zeta"], a_prime=complex(*d["a_prime"]),
                        zeta_prime=d["zeta_prime"])


def primary_to_dict(bp):
    return {"k": bp.k, "slot": bp.slot, "label": bp.label, "t": bp.t, "point": trivial_point_to_dict(bp.point)}


def primary_from_dict(d):
    return PrimaryBifPoint(k=d["k"], slot=d["slot"], t=d["t"], point=trivial_point_from_dict(d["point"]))


def jump_to_dict(j):
    return {"at": primary_to_dict(j.at), "p_div": j.p_div, "eps": j.eps, "iota_left": j.iota_left,
            "iota_right": j.iota_right, "sign_zeta_prime": j.sign_zeta_prime, "delta_star": j.delta_star}


def jump_from_dict(d):
    return IndexJump(at=primary_from_dict(d["at"]), p_div=d["p_div"], eps=d["eps"], iota_left=d["iota_left"],
                     iota_right=d["iota_right"], sign_zeta_prime=d["sign_zeta_prime"], delta_star=d["delta_star"])


def certificate_to_dict(cert):
    return {"q": cert.q, "p_div": cert.p_div, "kind": cert.kind, "total": cert.total, "certified": cert.certified,
            "points": [primary_to_dict(bp) for bp in cert.points], "jumps": [jump_to_dict(j) for j in cert.jumps]}


def certificate_from_dict(d):
    return Certificate(q=d["q"], p_div=d["p_div"], points=tuple(primary_from_dict(x) for x in d["points"]),
                       jumps=tuple(jump_from_dict(x) for x in d["jumps"]), total=d["total"],
                       certified=d["certified"], kind=d["kind"])


def report_to_dict(report):
    return {"a_cut": report.a_cut, "n_max": report.n_max, "z_star": report.z_star, "M": report.M,
            "passed": report.passed, "claims": [vars(c).copy() for c in report.claims]}


def report_from_dict(d):
    return CounterexampleReport(a_cut=d["a_cut"], n_max=d["n_max"], z_star=d["z_star"], M=d["M"],
                                claims=[ClaimResult(**c) for c in d["claims"]])


# branches

def branch_rows(branch):
    return [[pt.s, pt.zeta, pt.state.coeffs[0].real, pt.state.coeffs[0].imag, pt.amplitude, pt.morse_in_ambient,
             pt.morse_in_symmetric, pt.sym_residual] for pt in branch.points]


def branch_summary(branch):
    return {"origin": branch.origin.label if branch.origin is not None else None,
            "ambient_div": branch.ambient_div, "terminus": branch.terminus, "n_points": len(branch.points),
            "end_point": branch.end_point.label if branch.end_point is not None else None,
            "end_zeta": branch.end_zeta}


def secondary_to_dict(branch, pairs):
    return {"branch": branch_summary(branch),
            "brackets": [{"zeta": [lo.zeta, hi.zeta], "s": [lo.s, hi.s],
                          "complement_count": [lo.complement_count, hi.complement_count],
                          "sym_residual": [lo.sym_residual, hi.sym_residual],
                          "amplitude": [lo.amplitude, hi.amplitude]} for lo, hi in pairs]}


_LOADERS = {
    "primary": lambda d: [primary_from_dict(x) for x in d["points"]],
    "index": lambda d: [jump_from_dict(x) for x in d["jumps"]],
    "certificate": lambda d: certificate_from_dict(d["certificate"]),
    "certificates": lambda d: [certificate_from_dict(x) for x in d["certificates"]],
    "counterexample": lambda d: report_from_dict(d["report"]),
    "secondary": lambda d: d,
    "error": lambda d: d,
}


def load_json(path):
    with open(path) as fh:
        doc = json.load(fh)
    schema = doc.get("schema", "")
    if not schema.startswith(SCHEMA_PREFIX) or schema[len(SCHEMA_PREFIX):] not in _LOADERS:
        raise ValueError(f"unknown schema {schema!r} in {path}")
    return _LOADERS[schema[len(SCHEMA_PREFIX):]](doc)


# diagram

def plot_diagram(path, trivial_points, branches=(), primary_points=(), secondary=(), title=None):
    """zeta against max|a - c_0|: T black, branches blue, index changes red."""
    plt.rcParams["svg.hashsalt"] = "lleb"
    fig, ax = plt.subplots(figsize=(8, 5))
    zetas = [pt.zeta for pt in trivial_points]
    ax.plot(zetas, [0.0] * len(zetas), color="black", lw=1.5, label="T")
    for i, branch in enumerate(branches):
        ax.plot([pt.zeta for pt in branch.points], [pt.amplitude for pt in branch.points], color="tab:blue", lw=1.0,
                label="primary branches" if i == 0 else None)
    if primary_points:
        ax.plot([bp.zeta for bp in primary_points], [0.0] * len(primary_points), "o", color="black", ms=3)
        for bp in primary_points:
            ax.annotate(bp.label, (bp.zeta, 0.0), textcoords="offset points", xytext=(0, -12), ha="center",
                        fontsize=6)
    if secondary:
        pts = [lo for lo, _ in secondary]
        ax.plot([pt.zeta for pt in pts], [pt.amplitude for pt in pts], "x", color="tab:red", ms=7,
                label="index change")
    ax.set_xlabel(r"$\zeta$")
    ax.set_ylabel(r"$\max_x |a(x) - c_0|$")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper left", fontsize=8)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info(f"wrote {path}")
    return path
