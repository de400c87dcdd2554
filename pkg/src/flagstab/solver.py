"""Numerical Einstein solving: Newton multistart in log-coordinates with
symmetry/scale deduplication, ansatz reduction and high-precision refinement.

Unknowns are y_i = ln x_i (positivity built in).  The square system is

    G_k = 2 rho_k - 2 rho_r = 0,   k = 1..r-1,
    G_r = sum_i d_i y_i = 0        (volume gauge while solving),

with the analytic Jacobian of the Ricci eigenvalues.  Converged points are
certified by the relative Einstein residual (independently of the Newton
path), canonicalized under the detected symmetry group and merged into
homothety classes.  Reported representatives are rescaled so their first
coordinate is 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import einstein_residual, ricci_kernel
from .errors import DivergedFromBasin, IndexOutOfRange
from .roots import Polynomial, real_roots  # re-exported solver surface
from .spaces import (InvariantMetric, SpaceModel, SymmetryGroup,
                     canonicalize_metric, detect_symmetries)
from .stability import SpectralReport, stability_report

__all__ = [
    "Ansatz", "Solution", "SolutionSet", "Polynomial", "real_roots",
    "solve_einstein", "solve_with_ansatz", "refine", "default_starts",
]

DEDUP_TOL = 1e-5
CERT_TOL = 1e-12
DEFAULT_BOX = float(np.log(6.0))


@dataclass(frozen=True)
class Ansatz:
    """Partition of the summand indices; each class shares one unknown."""
    partition: tuple

    def __post_init__(self):
        part = tuple(tuple(sorted(int(i) for i in cls)) for cls in self.partition)
        object.__setattr__(self, "partition", part)
        seen = set()
        for cls in part:
            for i in cls:
                if i in seen:
                    raise IndexOutOfRange(f"index {i} appears in two ansatz classes")
                seen.add(i)
        if seen != set(range(1, max(seen) + 1)):
            raise IndexOutOfRange("ansatz classes must cover 1..r without gaps")

    @property
    def r(self) -> int:
        return max(max(cls) for cls in self.partition)

    @staticmethod
    def trivial(r: int) -> "Ansatz":
        return Ansatz(tuple((i,) for i in range(1, r + 1)))


@dataclass(frozen=True)
class Solution:
    metric: InvariantMetric
    residual: float
    report: SpectralReport


@dataclass(frozen=True)
class SolutionSet:
    """Scale-normalized, symmetry-deduplicated Einstein metrics."""
    space: SpaceModel
    solutions: tuple
    dedup_group: SymmetryGroup
    normalization: str = "first coordinate 1"

    def __len__(self):
        return len(self.solutions)

    def coordinates(self):
        return [s.metric.as_array() for s in self.solutions]


def default_starts(dim: int) -> int:
    """Multistart budget 10 * 3^dim, capped at 10^6."""
    return int(min(10 * 3 ** dim, 1_000_000))


def _latin_hypercube(rng, n: int, dim: int, box: float) -> np.ndarray:
    u = (rng.permuted(np.tile(np.arange(n), (dim, 1)), axis=1).T
         + rng.random((n, dim))) / n
    return (2.0 * u - 1.0) * box


def _newton_batch(kernel, d, Y, steps: int = 60, tol: float = 1e-13,
                  gauge_row=None, gauge_target=0.0, clip: float = 12.0):
    """Vectorized Newton on the Einstein system; returns (Y, converged mask).

    ``gauge_row`` is the last-row linear gauge in y (defaults to the volume
    gauge d . y = 0); starts that blow up or hit singular Jacobians are
    simply marked unconverged and discarded by the callers.
    """
    r = Y.shape[1]
    d = np.asarray(d, dtype=float)
    row = d if gauge_row is None else np.asarray(gauge_row, dtype=float)
    alive = np.ones(len(Y), dtype=bool)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(steps):
            np.clip(Y, -clip, clip, out=Y)
            val, jac = kernel.two_rho_and_jacobian(Y)
            bad = ~np.all(np.isfinite(val), axis=1)
            if bad.any():
                alive &= ~bad
                val = np.nan_to_num(val)
                jac = np.nan_to_num(jac)
            F = np.empty_like(Y)
            F[:, :-1] = val[:, :-1] - val[:, -1:]
            F[:, -1] = Y @ row - gauge_target
            scale = np.maximum(np.abs(val).max(axis=1), 1e-30)
            done = (np.abs(F[:, :-1]).max(axis=1) < tol * scale) & \
                   (np.abs(F[:, -1]) < 1e-12)
            if np.all(done | ~alive):
                break
            J = np.empty((len(Y), r, r))
            J[:, :-1, :] = jac[:, :-1, :] - jac[:, -1:, :]
            J[:, -1, :] = row
            try:
                step = np.linalg.solve(J, -F[..., None])[..., 0]
            except np.linalg.LinAlgError:
                step = np.zeros_like(F)
                for b in range(len(Y)):
                    if not alive[b] or done[b]:
                        continue
                    try:
                        step[b] = np.linalg.solve(J[b], -F[b])
                    except np.linalg.LinAlgError:
                        alive[b] = False
            step = np.nan_to_num(step)
            move = ~done & alive
            Y[move] += step[move]
            alive &= np.abs(Y).max(axis=1) <= clip
        val, _ = kernel.two_rho_and_jacobian(Y)
        F1 = np.abs(val[:, :-1] - val[:, -1:]).max(axis=1)
        scale = np.maximum(np.abs(val).max(axis=1), 1e-30)
        converged = alive & (F1 < 1e-11 * scale)
    return Y, converged


def _collect_classes(space, points, group, tol_resid):
    """Certify, refine, canonicalize and merge converged points into
    homothety classes.  Refinement precedes deduplication because Newton
    stalls ~sqrt(eps) away from degenerate solutions (e.g. the standard
    metric on f4), which would otherwise scatter canonical forms."""
    reps = []
    for x in points:
        metric = InvariantMetric(space, tuple(x))
        resid = einstein_residual(metric)
        if not resid < tol_resid:
            continue
        try:
            metric = refine(metric, tol=3e-13)
        except DivergedFromBasin:
            continue
        cx = canonicalize_metric(metric, group).as_array()
        for rep in reps:
            if np.max(np.abs(rep - cx)) < DEDUP_TOL:
                break
        else:
            reps.append(cx)
    reps.sort(key=lambda a: tuple(a))
    solutions = []
    for rep in reps:
        refined = refine(InvariantMetric(space, tuple(rep / rep[0])), tol=3e-13)
        resid = einstein_residual(refined)
        # eigenvalue error scales like the coordinate error, which is
        # sqrt(residual) at degenerate solutions; widen clustering to match
        rel_tol = max(1e-8, 30.0 * float(np.sqrt(resid)))
        solutions.append(Solution(refined, resid,
                                  stability_report(refined, rel_tol=rel_tol)))
    return solutions


def solve_einstein(space: SpaceModel, starts: int | None = None, seed: int = 0,
                   box: float = DEFAULT_BOX, tol: float = CERT_TOL,
                   group: SymmetryGroup | None = None) -> SolutionSet:
    """Find Einstein metrics by Newton multistart; returns homothety classes.

    An empty solution list is a reported outcome, not an error.  No
    completeness claim is attached: classes found, never "exactly".
    """
    if starts is None:
        starts = default_starts(space.r)
    if starts < 1:
        raise ValueError("starts must be >= 1")
    if group is None:
        group = detect_symmetries(space)
    kernel = ricci_kernel(space)
    rng = np.random.default_rng(seed)
    Y = _latin_hypercube(rng, starts, space.r, box)
    Y, ok = _newton_batch(kernel, space.dims, Y)
    points = np.exp(Y[ok])
    solutions = _collect_classes(space, points, group, tol_resid=max(tol, 1e-12))
    return SolutionSet(space, tuple(solutions), group)


def solve_with_ansatz(space: SpaceModel, ansatz: Ansatz, starts: int | None = None,
                      seed: int = 0, box: float = DEFAULT_BOX,
                      tol: float = CERT_TOL,
                      group: SymmetryGroup | None = None) -> SolutionSet:
    """Einstein system restricted to ansatz classes (one unknown per class),
    solved by the same multistart in the reduced dimension; solutions are
    lifted to full coordinates and certified before deduplication."""
    if ansatz.r != space.r:
        raise IndexOutOfRange(f"ansatz covers 1..{ansatz.r}, space has r={space.r}")
    classes = ansatz.partition
    nc = len(classes)
    if starts is None:
        starts = default_starts(nc)
    if group is None:
        group = detect_symmetries(space)
    kernel = ricci_kernel(space)
    d = np.asarray(space.dims, dtype=float)
    reps = [cls[0] - 1 for cls in classes]
    lift = np.zeros((nc, space.r))
    for c, cls in enumerate(classes):
        for i in cls:
            lift[c, i - 1] = 1.0

    class _Reduced:
        def two_rho_and_jacobian(self, Z):
            val, jac = kernel.two_rho_and_jacobian(Z @ lift)
            red_val = val[:, reps]
            red_jac = np.einsum("bkm,cm->bkc", jac[:, reps, :], lift)
            return red_val, red_jac

    d_red = lift @ d
    rng = np.random.default_rng(seed)
    Z = _latin_hypercube(rng, starts, nc, box)
    Z, ok = _newton_batch(_Reduced(), d_red, Z)
    points = np.exp(Z[ok] @ lift)
    solutions = _collect_classes(space, points, group, tol_resid=max(tol, 1e-12))
    return SolutionSet(space, tuple(solutions), group)


def refine(metric: InvariantMetric, tol: float = 1e-13,
           max_iter: int = 60) -> InvariantMetric:
    """Newton-polish a near-Einstein metric to residual < tol, preserving the
    scale of the first coordinate.  Raises DivergedFromBasin on failure."""
    space = metric.space
    kernel = ricci_kernel(space)
    x0 = metric.as_array()
    y = np.log(x0)[None, :]
    gauge = np.zeros(space.r)
    gauge[0] = 1.0
    y, ok = _newton_batch(kernel, space.dims, y, steps=max_iter, tol=tol,
                          gauge_row=gauge, gauge_target=float(np.log(x0[0])))
    refined = InvariantMetric(space, tuple(np.exp(y[0])))
    if not ok[0] or einstein_residual(refined) > max(tol, 1e-13):
        raise DivergedFromBasin(
            f"refinement did not reach residual {tol:.0e} from the given start")
    return refined
