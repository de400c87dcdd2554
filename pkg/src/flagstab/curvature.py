"""Ricci eigenvalues, Einstein residuals, scalar curvature and derivatives of
the normalized scalar curvature along curves of metrics.

For a metric (x_1, ..., x_r) the Ricci eigenvalues are

    rho_k = 1/(2 x_k) + 1/(4 d_k) * sum_{i,j} (x_k^2 - x_i^2 - x_j^2)
                                               / (x_i x_j x_k) * [ijk],

the sums running over ordered index pairs.  The scalar curvature is
Sc = 1/2 sum d_k/x_k - 1/4 sum_{i,j,k} x_k/(x_i x_j) [ijk], and the
volume-normalized scalar curvature Sc_N = (prod x_k^{d_k})^{1/n} * Sc is a
homothety invariant.

Everything here evaluates in binary64; an exact Fraction path (``*_exact``)
exists for rational coordinates and backs the cross-check tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import StepTooLarge
from .spaces import InvariantMetric, SpaceModel, catalog_space

__all__ = [
    "RicciData", "CurveSpec",
    "ricci_eigenvalues", "ricci_eigenvalues_exact", "einstein_residual",
    "einstein_residual_exact", "scalar_curvature", "scalar_curvature_exact",
    "normalized_scalar_curvature", "ricci_tensor_components",
    "affine_curve", "saddle_curve_f4", "prescribed_ricci_curve_f5",
    "scn_derivative_along_curve", "ricci_kernel",
]


# ---------------------------------------------------------------------------
# batched evaluation kernel
# ---------------------------------------------------------------------------

class RicciKernel:
    """Precomputed monomial expansion of 2*rho for one space.

    Each ordered occurrence (i, j, k) of a triple constant v contributes
    three monomials to 2 rho_k; together with the 1/x_k terms this gives
    2 rho as a sum of signed monomials x^e, which evaluates and
    differentiates cheaply for whole batches of metrics in log-coordinates.
    """

    def __init__(self, space: SpaceModel):
        self.space = space
        r = space.r
        d = space.dims
        coeffs, exps, targets = [], [], []

        def add(k, c, e):
            targets.append(k)
            coeffs.append(float(c))
            exps.append(e)

        for k in range(r):
            e = np.zeros(r)
            e[k] = -1.0
            add(k, 1.0, e)
        for (i, j, k, v) in space.ordered_triples:
            c = float(v) / (2 * d[k])
            for sign, (a, b1, b2) in ((+1, (k, i, j)), (-1, (i, j, k)), (-1, (j, i, k))):
                e = np.zeros(r)
                e[a] += 1.0
                e[b1] -= 1.0
                e[b2] -= 1.0
                add(k, sign * c, e)

        self.coeffs = np.asarray(coeffs)
        self.exps = np.asarray(exps)               # (T, r)
        self.targets = np.asarray(targets)
        self.r = r
        self._by_target = [np.flatnonzero(self.targets == k) for k in range(r)]

    def two_rho(self, x: np.ndarray) -> np.ndarray:
        """2*rho for x of shape (r,) or a batch (B, r)."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        y = np.log(np.atleast_2d(x))
        w = self.coeffs * np.exp(y @ self.exps.T)   # (B, T)
        out = np.empty((y.shape[0], self.r))
        for k, idx in enumerate(self._by_target):
            out[:, k] = w[:, idx].sum(axis=1)
        return out[0] if single else out

    def two_rho_and_jacobian(self, y: np.ndarray):
        """2*rho and d(2 rho_k)/d y_m at log-coordinates y of shape (B, r)."""
        y = np.atleast_2d(np.asarray(y, dtype=float))
        w = self.coeffs * np.exp(y @ self.exps.T)
        B = y.shape[0]
        val = np.empty((B, self.r))
        jac = np.empty((B, self.r, self.r))
        for k, idx in enumerate(self._by_target):
            wk = w[:, idx]
            val[:, k] = wk.sum(axis=1)
            jac[:, k, :] = wk @ self.exps[idx]
        return val, jac


@lru_cache(maxsize=64)
def _kernel_by_id(space_id: int, _space_ref) -> RicciKernel:
    return RicciKernel(_space_ref)


def ricci_kernel(space: SpaceModel) -> RicciKernel:
    """Cached evaluation kernel for ``space`` (keyed by identity)."""
    return _kernel_by_id(id(space), space)


# ---------------------------------------------------------------------------
# Ricci data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RicciData:
    """Ricci eigenvalues with the relative Einstein residual.

    residual = max_k |2 rho_k - mean(2 rho)| / |mean(2 rho)|; it vanishes
    exactly when the metric is Einstein.
    """
    rho: tuple
    two_rho_mean: float
    residual: float


def ricci_eigenvalues(metric: InvariantMetric) -> RicciData:
    """Ricci eigenvalues rho_k of an invariant metric."""
    two_rho = ricci_kernel(metric.space).two_rho(metric.as_array())
    mean = float(np.mean(two_rho))
    residual = float(np.max(np.abs(two_rho - mean)) / abs(mean))
    return RicciData(tuple(v / 2 for v in two_rho.tolist()), mean, residual)


def einstein_residual(metric: InvariantMetric) -> float:
    """0 iff the metric is Einstein to working precision."""
    return ricci_eigenvalues(metric).residual


def ricci_tensor_components(metric: InvariantMetric) -> tuple:
    """Ricci tensor relative to Q on each summand: component_k = rho_k * x_k."""
    data = ricci_eigenvalues(metric)
    return tuple(r * x for r, x in zip(data.rho, metric.as_array().tolist()))


def scalar_curvature(metric: InvariantMetric) -> float:
    x = metric.as_array()
    d = np.asarray(metric.space.dims, dtype=float)
    s = 0.5 * float(np.sum(d / x))
    for (i, j, k, v) in metric.space.ordered_triples:
        s -= 0.25 * float(v) * x[k] / (x[i] * x[j])
    return s


def normalized_scalar_curvature(metric: InvariantMetric) -> float:
    """(det_Q g)^(1/n) * Sc; invariant under x -> c x."""
    x = metric.as_array()
    d = np.asarray(metric.space.dims, dtype=float)
    log_det = float(np.dot(d, np.log(x)))
    return float(np.exp(log_det / metric.space.n)) * scalar_curvature(metric)


# ---------------------------------------------------------------------------
# exact-rational path (oracle for the float implementation)
# ---------------------------------------------------------------------------

def _exact_coords(metric: InvariantMetric):
    return [Fraction(xi) if not isinstance(xi, Fraction) else xi for xi in metric.x]


def ricci_eigenvalues_exact(metric: InvariantMetric) -> list:
    """rho_k as exact Fractions (coordinates must be rational)."""
    sp = metric.space
    x = _exact_coords(metric)
    out = [Fraction(1, 2) / xi for xi in x]
    for (i, j, k, v) in sp.ordered_triples:
        out[k] += v * (x[k] ** 2 - x[i] ** 2 - x[j] ** 2) / (x[i] * x[j] * x[k]) \
            / (4 * sp.dims[k])
    return out


def einstein_residual_exact(metric: InvariantMetric) -> Fraction:
    rho = ricci_eigenvalues_exact(metric)
    two = [2 * v for v in rho]
    mean = sum(two) / len(two)
    return max(abs(v - mean) for v in two) / abs(mean)


def scalar_curvature_exact(metric: InvariantMetric) -> Fraction:
    sp = metric.space
    x = _exact_coords(metric)
    s = sum(Fraction(d, 1) / xi for d, xi in zip(sp.dims, x)) / 2
    for (i, j, k, v) in sp.ordered_triples:
        s -= v * x[k] / (x[i] * x[j]) / 4
    return s


# ---------------------------------------------------------------------------
# curves of metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveSpec:
    """A curve t -> metric coordinates on a fixed space."""
    space: SpaceModel
    base: InvariantMetric
    parametrization: Callable[[float], np.ndarray]
    name: str = ""

    def at(self, t: float) -> np.ndarray:
        x = np.asarray(self.parametrization(t), dtype=float)
        if np.any(x <= 0):
            raise StepTooLarge(f"curve {self.name or '<anon>'} leaves the positive cone at t={t}")
        return x

    def metric_at(self, t: float) -> InvariantMetric:
        return InvariantMetric(self.space, tuple(self.at(t)))


def affine_curve(space: SpaceModel, base, direction, name: str = "") -> CurveSpec:
    base_arr = np.asarray([float(v) for v in base])
    dir_arr = np.asarray([float(v) for v in direction])

    def param(t):
        return base_arr + t * dir_arr

    return CurveSpec(space, InvariantMetric(space, tuple(base_arr)), param, name)


def saddle_curve_f4():
    """Curve through the standard metric of f4 along which the third
    derivative of Sc_N detects the saddle: coordinates
    (X, X, t, t, Z, Z) with X = (3 - t)/2 and Z = 1/(X t)."""
    space = catalog_space("f4")

    def param(t):
        X = (3.0 - t) / 2.0
        Z = 1.0 / (X * t)
        return np.array([X, X, t, t, Z, Z])

    return CurveSpec(space, InvariantMetric(space, tuple(param(1.0))), param, "f4-saddle")


def prescribed_ricci_curve_f5():
    """Curve of f5 metrics through the Kähler metric with constant Ricci
    tensor (lex pair ordering)."""
    space = catalog_space("f5")
    return affine_curve(space,
                        base=(1, 2, 3, 4, 1, 2, 3, 1, 2, 1),
                        direction=(0, -1, 0, 0, -1, 0, 0, 1, 1, 0),
                        name="f5-ricci")


# central stencils on t0 + k h, k = -3..3; at least O(h^2), in practice much
# better (the wide stencils behave like Richardson-extrapolated differences)
_STENCILS = {
    1: ([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0], 60.0, 1),
    2: ([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0], 180.0, 2),
    3: ([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0], 8.0, 3),
}


def scn_derivative_along_curve(curve: CurveSpec, t0: float, order: int,
                               h: float = 1e-3) -> float:
    """Finite-difference derivative of t -> Sc_N(curve(t)) at t0, order 1-3.

    The curve must stay in the positive cone on [t0 - 3h, t0 + 3h];
    otherwise StepTooLarge is raised.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if order not in _STENCILS:
        raise ValueError("order must be 1, 2 or 3")
    weights, denom, power = _STENCILS[order]
    vals = [normalized_scalar_curvature(curve.metric_at(t0 + k * h)) for k in range(-3, 4)]
    return float(sum(w * v for w, v in zip(weights, vals)) / (denom * h ** power))
