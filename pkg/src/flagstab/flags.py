"""Full flag spaces f(n) = su(n) summand models, classic metric families,
the five explicitly constructed f5 Einstein metrics, and the reduced f(n)
formulas used as a cross-check of the generic ones.

Summands are indexed by pairs (i, j), 1 <= i < j <= n, in lexicographic
order (12), (13), ..., (1n), (23), ..., ((n-1)n); every 3-subset {i, j, k}
contributes one triple constant [(ij)(jk)(ik)] = 1/n and all summands are
2-dimensional.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curvature import einstein_residual
from .errors import ConstructionFailed, FamilyUnavailable, UnsupportedN
from .roots import Polynomial, real_roots
from .spaces import InvariantMetric, SpaceModel
from .solver import Ansatz

__all__ = [
    "PairIndex", "build_fn", "classic_metric", "f5_new_metrics",
    "negreiros_candidates", "ricci_reduced", "lp_reduced",
    "fn_formula_crosscheck",
]

MAX_N = 12


@dataclass(frozen=True)
class PairIndex:
    """Bijection between lexicographically ordered pairs and summand indices."""
    n: int

    @property
    def pairs(self) -> tuple:
        return tuple((i, j) for i in range(1, self.n + 1)
                     for j in range(i + 1, self.n + 1))

    def index(self, i: int, j: int) -> int:
        """1-based summand index of the pair {i, j}."""
        if i > j:
            i, j = j, i
        if not 1 <= i < j <= self.n:
            raise ValueError(f"({i},{j}) is not a pair in 1..{self.n}")
        return self.pairs.index((i, j)) + 1

    def metric(self, value_of) -> tuple:
        """Coordinate tuple from a function of the pair (i, j)."""
        return tuple(value_of(p) for p in self.pairs)


def _fn_model(n: int) -> SpaceModel:
    px = PairIndex(n)
    triples = {}
    for a, b, c in itertools.combinations(range(1, n + 1), 3):
        key = tuple(sorted((px.index(a, b), px.index(b, c), px.index(a, c))))
        triples[key] = Fraction(1, n)
    return SpaceModel(f"f{n}", [2] * len(px.pairs), triples)


def build_fn(n: int) -> SpaceModel:
    """Flag model for su(n): r = n(n-1)/2 summands, C(n,3) triples of 1/n."""
    if not 3 <= int(n) <= MAX_N:
        raise UnsupportedN(f"n must satisfy 3 <= n <= {MAX_N}, got {n}")
    return _fn_model(int(n))


# ---------------------------------------------------------------------------
# classic families
# ---------------------------------------------------------------------------

def classic_metric(n: int, family: str) -> InvariantMetric:
    """Named Einstein families on f(n).

    standard: all coordinates 1.          arvanitoyeorgos: x_1k = n-1, else n+1.
    senda (n = 2m, m >= 3): m+2 inside the two m-blocks, 3m-2 across.
    kahler: x_ij = j - i.
    """
    space = build_fn(n)
    px = PairIndex(n)
    fam = family.strip().lower()
    if fam == "standard":
        coords = px.metric(lambda p: 1)
    elif fam == "arvanitoyeorgos":
        coords = px.metric(lambda p: n - 1 if p[0] == 1 else n + 1)
    elif fam == "senda":
        if n % 2 != 0 or n < 6:
            raise FamilyUnavailable("senda requires n = 2m with m >= 3")
        m = n // 2
        coords = px.metric(lambda p: m + 2 if (p[1] <= m or p[0] > m) else 3 * m - 2)
    elif fam == "kahler":
        coords = px.metric(lambda p: p[1] - p[0])
    else:
        raise FamilyUnavailable(f"unknown family {family!r}")
    return InvariantMetric(space, coords)


# ---------------------------------------------------------------------------
# the five constructed f5 metrics
# ---------------------------------------------------------------------------

_QUARTIC = Polynomial((1129, -1700, 1008, -270, 27))
_CUBIC = Polynomial((-3967, 1819, -277, 14))
_SEXTIC = Polynomial((48503, -225550, 447800, -490500, 316325, -113750, 17500))


def _g12_coords(C: float, px: PairIndex) -> tuple:
    X = -10 / 3 * C ** 3 + 250 / 9 * C ** 2 - 2110 / 27 * C + 2258 / 27
    Y = 20 / 3 * C ** 3 - 4516 / 27 + 4760 / 27 * C - 536 / 9 * C ** 2
    return px.metric(lambda p: 2 * C if 3 in p else (Y if p in ((1, 2), (4, 5)) else X))


def _g3_coords(K: float, px: PairIndex) -> tuple:
    W = -3967 / 5 + 237 * K - 87 / 5 * K ** 2
    Z = 41 / 5 * K ** 2 - 227 / 2 * K + 3967 / 10
    return px.metric(lambda p: W if p == (2, 3)
                     else (Z if set(p) <= {1, 4, 5} else K))


def _g45_coords(c: float, px: PairIndex) -> tuple:
    M = (8971375 / 1666862 * c ** 5 - 98032375 / 3333724 * c ** 4
         + 446084445 / 6667448 * c ** 3 - 68439950 / 833431 * c ** 2
         + 357123741 / 6667448 * c - 109792137 / 8334310)
    N = (268587215 / 13334896 - 930186785 / 13334896 * c
         + 1387293825 / 13334896 * c ** 2 - 1110422865 / 13334896 * c ** 3
         + 239341375 / 6667448 * c ** 4 - 21499625 / 3333724 * c ** 5)
    L = (10670625 / 3333724 * c ** 5 - 129829875 / 6667448 * c ** 4
         + 654761925 / 13334896 * c ** 3 - 876763875 / 13334896 * c ** 2
         + 627815565 / 13334896 * c - 183414881 / 13334896)

    def value(p):
        a, b = p
        if set(p) <= {2, 3, 4}:
            return M
        if a == 1 and b in (2, 3, 4):
            return c / 2
        if b == 5 and a in (2, 3, 4):
            return N
        return L

    return px.metric(value)


def f5_new_metrics() -> list:
    """The five non-classic f5 Einstein metrics (g1..g5) built from the
    defining polynomial roots; every metric is certified to relative
    Einstein residual < 1e-12 (ConstructionFailed otherwise).

    g1/g2 come from the two positive quartic roots (g1 the larger), g3 from
    the positive cubic root, g4/g5 from the two real sextic roots; g4 and g5
    are isometric (one class under canonicalization).
    """
    space = build_fn(5)
    px = PairIndex(5)

    quartic_roots = real_roots(_QUARTIC, (0.0, math.inf))
    cubic_roots = real_roots(_CUBIC, (0.0, math.inf))
    sextic_roots = real_roots(_SEXTIC)
    if len(quartic_roots) != 2 or len(cubic_roots) != 1 or len(sextic_roots) != 2:
        raise ConstructionFailed(
            f"root counts {len(quartic_roots)}/{len(cubic_roots)}/{len(sextic_roots)}"
            " differ from the expected 2/1/2")

    out = [
        ("g1", _g12_coords(quartic_roots[1], px)),
        ("g2", _g12_coords(quartic_roots[0], px)),
        ("g3", _g3_coords(cubic_roots[0], px)),
        ("g4", _g45_coords(sextic_roots[0], px)),
        ("g5", _g45_coords(sextic_roots[1], px)),
    ]
    metrics = []
    for name, coords in out:
        metric = InvariantMetric(space, tuple(float(v) for v in coords))
        resid = einstein_residual(metric)
        if resid >= 1e-12:
            raise ConstructionFailed(f"{name}: residual {resid:.2e} >= 1e-12")
        metrics.append((name, metric))
    return metrics


# ---------------------------------------------------------------------------
# claimed-but-not-Einstein candidates
# ---------------------------------------------------------------------------

def negreiros_candidates(kind: str, m: int):
    """Families once claimed to solve the Einstein equations.

    even (m >= 6): the fully specified metric on f(2m) with m+5 inside the
    two m-blocks and 3m-5 across; it fails the Einstein equations (relative
    residual above 1e-3, checkable exactly for rational input).
    odd (m >= 6): the values were never published, so this returns the
    two-class ansatz on f(2m+1) (both block interiors share one value, all
    cross pairs the other) for use with solve_with_ansatz.
    """
    kind = kind.strip().lower()
    if m < 6:
        raise FamilyUnavailable("negreiros candidates need m >= 6")
    if kind == "even":
        n = 2 * m
        if n > MAX_N:
            # residual evaluation is safe beyond the validated eigen regime
            space = _fn_model(n)
        else:
            space = build_fn(n)
        px = PairIndex(n)
        coords = px.metric(lambda p: m + 5 if (p[1] <= m or p[0] > m) else 3 * m - 5)
        return InvariantMetric(space, coords)
    if kind == "odd":
        n = 2 * m + 1
        px = PairIndex(n)
        block, cross = [], []
        for idx, (i, j) in enumerate(px.pairs, start=1):
            if j <= m + 1 or i > m + 1:
                block.append(idx)
            else:
                cross.append(idx)
        return Ansatz((tuple(block), tuple(cross)))
    raise FamilyUnavailable(f"kind must be 'even' or 'odd', got {kind!r}")


# ---------------------------------------------------------------------------
# reduced f(n) formulas (independent of the generic triple machinery)
# ---------------------------------------------------------------------------

def _coords_by_pair(n: int, x):
    px = PairIndex(n)
    return px, {p: float(v) for p, v in zip(px.pairs, x)}


def ricci_reduced(n: int, x) -> np.ndarray:
    """2*rho per summand from the pairwise form
    2 rho_ij = 1/x_ij + 1/(2n) sum_{k != i,j} (x_ij^2 - x_ik^2 - x_jk^2)
                                              / (x_ij x_ik x_jk)."""
    px, val = _coords_by_pair(n, x)
    out = []
    for (i, j) in px.pairs:
        xij = val[(i, j)]
        acc = 0.0
        for k in range(1, n + 1):
            if k in (i, j):
                continue
            xik = val[tuple(sorted((i, k)))]
            xjk = val[tuple(sorted((j, k)))]
            acc += (xij ** 2 - xik ** 2 - xjk ** 2) / (xij * xik * xjk)
        out.append(1.0 / xij + acc / (2 * n))
    return np.asarray(out)


def lp_reduced(n: int, x) -> np.ndarray:
    """Stability operator from the pairwise form: diagonal
    1/n sum_k x_ij/(x_ik x_jk); entry between pairs sharing an index s,
    with remaining vertices u, w: 1/(2n) (x_uw^2 - x_su^2 - x_sw^2)
    / (x_su x_sw x_uw); zero for disjoint pairs."""
    px, val = _coords_by_pair(n, x)
    pairs = px.pairs
    r = len(pairs)
    L = np.zeros((r, r))
    for a, (i, j) in enumerate(pairs):
        xij = val[(i, j)]
        L[a, a] = sum(xij / (val[tuple(sorted((i, k)))] * val[tuple(sorted((j, k)))])
                      for k in range(1, n + 1) if k not in (i, j)) / n
        for b in range(a + 1, r):
            p, q = pairs[b]
            shared = set((i, j)) & set((p, q))
            if len(shared) != 1:
                continue
            s = shared.pop()
            u = i + j - s
            w = p + q - s
            xsu, xsw = val[tuple(sorted((s, u)))], val[tuple(sorted((s, w)))]
            xuw = val[tuple(sorted((u, w)))]
            L[a, b] = L[b, a] = (xuw ** 2 - xsu ** 2 - xsw ** 2) / (xsu * xsw * xuw) / (2 * n)
    return L


def fn_formula_crosscheck(n: int, metric: InvariantMetric) -> float:
    """Max absolute deviation between the generic evaluation of the Ricci
    eigenvalues / stability operator and the reduced pairwise formulas."""
    from .curvature import ricci_kernel
    from .stability import assemble_lp
    x = metric.as_array()
    dev_rho = np.max(np.abs(ricci_kernel(metric.space).two_rho(x) - ricci_reduced(n, x)))
    dev_lp = np.max(np.abs(assemble_lp(metric).entries - lp_reduced(n, x)))
    return float(max(dev_rho, dev_lp))
