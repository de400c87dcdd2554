"""Homogeneous-space data: summand dimensions, structural constants, catalog,
symmetry detection and canonical representatives of metrics.

A space is described by the number r of irreducible isotropy summands, their
real dimensions d_i, and the symmetric triple constants [ijk] (stored once per
unordered triple, zeros omitted).  An invariant metric is a positive
coordinate vector (x_1, ..., x_r) over that decomposition.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import (ConflictingTriple, IndexOutOfRange, NonPositiveValue,
                     SearchBudgetExceeded, UnknownSpace)

__all__ = [
    "SpaceModel", "InvariantMetric", "SymmetryGroup",
    "build_space", "catalog_space", "catalog_ids", "detect_symmetries",
    "canonicalize_metric", "scale_normalize", "apply_permutation",
    "space_to_json", "space_from_json", "load_space",
]


class SpaceModel:
    """A multiplicity-free homogeneous space.

    Attributes:
        name: identifier string.
        dims: tuple of r positive summand dimensions d_i.
        triples: dict mapping sorted 1-based index triples (repeats allowed)
            to positive Fraction values [ijk].
    """

    def __init__(self, name: str, dims, triples):
        self.name = str(name)
        self.dims = tuple(int(d) for d in dims)
        self.triples = dict(triples)

    @property
    def r(self) -> int:
        return len(self.dims)

    @property
    def n(self) -> int:
        return sum(self.dims)

    @cached_property
    def ordered_triples(self):
        """All distinct ordered arrangements (i, j, k, value), 0-based.

        Formulas in the literature sum over ordered indices while constants
        are stored once per unordered triple; this expansion supplies the
        ordered occurrences (6 for distinct entries, 3 for one repeat, 1 for
        a triple repeat).
        """
        out = []
        for t, v in sorted(self.triples.items()):
            for (i, j, k) in sorted(set(itertools.permutations(t))):
                out.append((i - 1, j - 1, k - 1, v))
        return tuple(out)

    def same_structure(self, other: "SpaceModel") -> bool:
        return self.dims == other.dims and self.triples == other.triples

    def __repr__(self):
        return f"SpaceModel({self.name!r}, r={self.r}, n={self.n}, triples={len(self.triples)})"


@dataclass(frozen=True)
class InvariantMetric:
    """Positive coordinates (x_1, ..., x_r) relative to Q on each summand.

    Coordinates may be floats or Fractions; the exact-rational evaluation
    path keeps Fractions intact.
    """
    space: SpaceModel
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        if len(self.x) != self.space.r:
            raise IndexOutOfRange(
                f"metric has {len(self.x)} coordinates, space has r={self.space.r}")
        if any(not xi > 0 for xi in self.x):
            raise NonPositiveValue("metric coordinates must be strictly positive")

    def as_array(self) -> np.ndarray:
        return np.asarray([float(v) for v in self.x])

    def scaled(self, c) -> "InvariantMetric":
        return InvariantMetric(self.space, tuple(xi * c for xi in self.x))


@dataclass(frozen=True)
class SymmetryGroup:
    """Permutations of {1..r} preserving dims and all triple constants.

    ``generators`` holds the full enumerated element list (a valid, if
    redundant, generating set); ``order`` is its size.
    """
    generators: tuple
    order: int

    def __iter__(self):
        return iter(self.generators)


def identity_group(r: int) -> SymmetryGroup:
    return SymmetryGroup((tuple(range(1, r + 1)),), 1)


def compose(p, q):
    """Permutation composition (p after q), 1-based tuples."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def apply_permutation(perm, x):
    """Move coordinate x_i to position perm(i)."""
    y = [None] * len(x)
    for i, xi in enumerate(x):
        y[perm[i] - 1] = xi
    return tuple(y)


# ---------------------------------------------------------------------------
# construction and catalog
# ---------------------------------------------------------------------------

def build_space(name: str, dims, triples) -> SpaceModel:
    """Build a validated, canonicalized SpaceModel.

    ``triples`` is an iterable of (i, j, k, value) with 1-based indices;
    values accept ints, floats, Fractions or fraction strings like "1/4".
    Duplicate unordered triples must agree in value.
    """
    dims = [int(d) for d in dims]
    if not dims or any(d <= 0 for d in dims):
        raise NonPositiveValue("summand dimensions must be positive")
    r = len(dims)
    canon = {}
    for (i, j, k, value) in triples:
        for idx in (i, j, k):
            if not 1 <= int(idx) <= r:
                raise IndexOutOfRange(f"index {idx} outside 1..{r}")
        v = Fraction(value)
        if v <= 0:
            raise NonPositiveValue(f"[{i} {j} {k}] = {value} is not positive")
        key = tuple(sorted((int(i), int(j), int(k))))
        if key in canon and canon[key] != v:
            raise ConflictingTriple(f"triple {key} given both {canon[key]} and {v}")
        canon[key] = v
    return SpaceModel(name, dims, canon)


def _catalog_defs():
    quarter, third, eighth = Fraction(1, 4), Fraction(1, 3), Fraction(1, 8)
    return {
        "g2-t2": ([2] * 6, {(1, 2, 3): quarter, (2, 4, 5): quarter, (3, 4, 6): quarter,
                            (1, 5, 6): quarter, (2, 3, 4): third}),
        "so5-t2": ([2] * 4, {(1, 3, 4): third, (2, 3, 4): third}),
        "so6-t3": ([2] * 6, {(1, 2, 3): quarter, (1, 5, 6): quarter,
                             (2, 4, 6): quarter, (3, 4, 5): quarter}),
        "sp3-t3": ([2] * 9, {(1, 2, 4): quarter, (2, 4, 5): quarter, (1, 6, 7): quarter,
                             (3, 5, 8): quarter, (3, 8, 9): quarter, (6, 7, 9): quarter,
                             (2, 3, 6): eighth, (3, 4, 7): eighth, (4, 6, 8): eighth,
                             (2, 7, 8): eighth}),
    }


def catalog_ids() -> list:
    """Identifiers accepted by catalog_space."""
    return sorted(_catalog_defs()) + [f"f{n}" for n in range(3, 13)]


def catalog_space(space_id: str) -> SpaceModel:
    """Return a built-in model: g2-t2, so5-t2, so6-t3, sp3-t3 or f3..f12."""
    key = space_id.strip().lower()
    defs = _catalog_defs()
    if key in defs:
        dims, triples = defs[key]
        return SpaceModel(key, dims, triples)
    if key.startswith("f") and key[1:].isdigit():
        n = int(key[1:])
        if 3 <= n <= 12:
            from .flags import build_fn
            return build_fn(n)
    raise UnknownSpace(f"unknown space id {space_id!r}; known: {', '.join(catalog_ids())}")


# ---------------------------------------------------------------------------
# symmetry detection
# ---------------------------------------------------------------------------

def _refine_colors(space: SpaceModel):
    """Iterated vertex signatures: (dimension, incident triple structure)."""
    r = space.r
    incident = [[] for _ in range(r)]
    for t, v in space.triples.items():
        t0 = [a - 1 for a in t]
        for pos, vert in enumerate(t0):
            others = t0[:pos] + t0[pos + 1:]
            incident[vert].append((v, others))
    colors = list(space.dims)
    for _ in range(r):
        sigs = []
        for i in range(r):
            inc = sorted((v, tuple(sorted(colors[o] for o in others)))
                         for v, others in incident[i])
            sigs.append((colors[i], tuple(inc)))
        remap = {s: c for c, s in enumerate(sorted(set(sigs)))}
        new = [remap[s] for s in sigs]
        if new == colors:
            break
        colors = new
    return colors, incident


def detect_symmetries(space: SpaceModel, node_limit: int = 2_000_000) -> SymmetryGroup:
    """Enumerate the full group of summand permutations preserving dims and
    all triple constants, by backtracking with signature pruning.

    Raises SearchBudgetExceeded when the search tree passes ``node_limit``
    nodes (large f(n) models; the catalog cases stay far below it).
    """
    if space.r > 70:
        raise IndexOutOfRange("symmetry search supports r <= 70")
    r = space.r
    colors, _ = _refine_colors(space)
    base = dict(space.triples)
    by_vertex = [[] for _ in range(r)]
    for t in base:
        for vert in set(t):
            by_vertex[vert - 1].append(t)
    candidates = {i: [j for j in range(r) if colors[j] == colors[i]] for i in range(r)}
    # connectivity-greedy order: each new vertex closes as many triples with
    # already-placed vertices as possible, so pruning bites immediately
    order = []
    placed = set()
    while len(order) < r:
        def gain(i):
            closed = sum(1 for t in by_vertex[i]
                         if all((a - 1) in placed for a in set(t) if a - 1 != i))
            return (closed, -len(candidates[i]), len(by_vertex[i]), -i)
        nxt = max((i for i in range(r) if i not in placed), key=gain)
        order.append(nxt)
        placed.add(nxt)

    found = []
    image = [0] * r  # 1-based images, 0 = unassigned
    used = [False] * r
    nodes = 0

    def consistent(vert):
        # check triples at `vert` whose members are all assigned
        for t in by_vertex[vert]:
            img = []
            for a in t:
                ia = image[a - 1]
                if ia == 0:
                    break
                img.append(ia)
            else:
                if base.get(tuple(sorted(img))) != base[t]:
                    return False
        return True

    def dfs(depth):
        nonlocal nodes
        if depth == r:
            found.append(tuple(image))
            return
        vert = order[depth]
        for cand in candidates[vert]:
            if used[cand]:
                continue
            nodes += 1
            if nodes > node_limit:
                raise SearchBudgetExceeded(
                    f"symmetry search exceeded {node_limit} nodes on {space.name}")
            image[vert] = cand + 1
            used[cand] = True
            if consistent(vert):
                dfs(depth + 1)
            image[vert] = 0
            used[cand] = False

    dfs(0)
    found.sort()
    return SymmetryGroup(tuple(found), len(found))


# ---------------------------------------------------------------------------
# canonical representatives
# ---------------------------------------------------------------------------

def scale_normalize(metric: InvariantMetric) -> InvariantMetric:
    """Rescale so the d_i-weighted geometric mean of the coordinates is 1."""
    x = metric.as_array()
    d = np.asarray(metric.space.dims, dtype=float)
    log_scale = float(np.dot(d, np.log(x)) / d.sum())
    return InvariantMetric(metric.space, tuple(x * np.exp(-log_scale)))


def _tol_lex_less(a, b, tol: float) -> bool:
    for u, v in zip(a, b):
        gap = tol * max(1.0, abs(u), abs(v))
        if u < v - gap:
            return True
        if u > v + gap:
            return False
    return False


def canonicalize_metric(metric: InvariantMetric, group: SymmetryGroup,
                        tol: float = 1e-9) -> InvariantMetric:
    """Scale-normalized, lexicographically minimal representative of the
    {scaling x orbit} class of ``metric``.  Idempotent.

    Coordinates closer than ``tol`` compare as equal during the orbit
    minimization (raw tuple order breaks such ties), so representatives of
    numerically perturbed copies of one metric agree to the perturbation
    size instead of jumping between orbit patterns.
    """
    normed = scale_normalize(metric)
    best = None
    for perm in group:
        cand = apply_permutation(perm, normed.x)
        if best is None or _tol_lex_less(cand, best, tol) or \
                (not _tol_lex_less(best, cand, tol) and cand < best):
            best = cand
    return InvariantMetric(metric.space, best)


# ---------------------------------------------------------------------------
# space definition files
# ---------------------------------------------------------------------------

def space_to_json(space: SpaceModel) -> dict:
    """Serializable form; triple values are exact fraction strings."""
    return {
        "name": space.name,
        "dims": list(space.dims),
        "triples": [{"i": t[0], "j": t[1], "k": t[2], "value": str(v)}
                    for t, v in sorted(space.triples.items())],
    }


def space_from_json(data: dict) -> SpaceModel:
    triples = [(e["i"], e["j"], e["k"], Fraction(e["value"])) for e in data["triples"]]
    return build_space(data["name"], data["dims"], triples)


def load_space(path_or_id: str) -> SpaceModel:
    """Resolve a catalog id, or read a space definition JSON file."""
    try:
        return catalog_space(path_or_id)
    except UnknownSpace:
        pass
    with open(path_or_id, "r", encoding="utf-8") as fh:
        return space_from_json(json.load(fh))
