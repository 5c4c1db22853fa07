"""Symmetry-breaking certificates.

X = H^1_per(2pi/p_div), Y = H^1_per(2pi/q) with p_div | q. For
k_max/2 < q <= k_max the continuum C_Y meets T exactly in the pair
z_{q,1}, z_{q,2}; a nonzero sum of the X-index jumps over that pair forces a
secondary bifurcation out of Y.
"""
import logging
from dataclasses import dataclass

from lleb.errors import InvalidSubspace, MissingPair, OutOfWindow
from lleb.models.primary import compute_kmax, primary_points_by_k
from lleb.models.spectral import index_jump
from lleb.util import parallel_map

logger = logging.getLogger(__name__)

_MULTIPLES = {2: "doubling", 3: "tripling", 4: "quadrupling", 5: "quintupling", 6: "sextupling",
              7: "septupling", 8: "octupling"}


@dataclass(frozen=True)
class Certificate:
    q: int
    p_div: int
    points: tuple
    jumps: tuple
    total: int
    certified: bool
    kind: str


def validate_subspace(q, p_div):
    if q < 1 or p_div < 1 or q % p_div != 0 or p_div >= q:
        raise InvalidSubspace("p_div must be a proper divisor of q", q=q, p_div=p_div)


def breaking_kind(q, p_div):
    n = q // p_div
    if n in _MULTIPLES:
        return f"period-{_MULTIPLES[n]}"
    return f"period-{n}-fold"


def primary_pair(q, p):
    kmax = compute_kmax(p)
    if not kmax / 2 < q <= kmax:
        raise OutOfWindow("q outside k_max/2 < q <= k_max", q=q, kmax=kmax)
    pair = primary_points_by_k(p).get(q, ())
    if len(pair) != 2:
        raise MissingPair("expected exactly two primary points for k=q", q=q, found=len(pair))
    return list(pair)


def dancer_balance(points, p_div, p):
    return sum(index_jump(bp, p_div, p).delta_star for bp in points)


def certify(q, p_div, p):
    validate_subspace(q, p_div)
    points = primary_pair(q, p)
    jumps = tuple(index_jump(bp, p_div, p) for bp in points)
    total = sum(j.delta_star for j in jumps)
    cert = Certificate(q=q, p_div=p_div, points=tuple(points), jumps=jumps, total=total,
                       certified=total != 0, kind=breaking_kind(q, p_div))
    logger.info(f"certificate (q={q}, p={p_div}): total={total}, certified={cert.certified}")
    return cert


def admissible_pairs(p):
    kmax = compute_kmax(p)
    return [(q, p_div) for q in range(kmax // 2 + 1, kmax + 1) if q > kmax / 2
            for p_div in range(1, q) if q % p_div == 0]


def scan_certificates(p, n_proc=1):
    return parallel_map(lambda pair: certify(*pair, p), admissible_pairs(p), n_proc=n_proc)
