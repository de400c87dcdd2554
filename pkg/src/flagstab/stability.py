"""Stability operator, spectrum, coindex and homothety fingerprints.

The operator is represented in the orthonormal basis {I_k / sqrt(d_k)} of
invariant symmetric tensors:

    [L]_kk = 1/d_k sum_{i,j != k} x_k/(x_i x_j) [ijk]
             + 1/d_k sum_{i != k} x_i/x_k^2 [ikk],
    [L]_km = 1/sqrt(d_k d_m) sum_i (x_i^2 - x_k^2 - x_m^2)/(x_i x_k x_m) [ikm].

The trace direction u = (sqrt d_1, ..., sqrt d_r) is an exact 0-eigenvector
(the Ricci tensor does not change under rescaling of the metric).  Stability
is decided on the orthogonal complement of u, the trace-free (TT) tensors:
lambda_p and lambda_p_max below are the extremal eigenvalues there, while the
reported spectrum and the coindex count use the full matrix, the coindex rule
subtracting 1 for the trace direction.

For an Einstein metric with constant 2*rho:
  * stable            iff 2 rho < lambda_p,
  * unstable          iff lambda_p < 2 rho,
  * degenerate        iff 2 rho lies in the spectrum (within tolerance),
  * local minimum     iff lambda_p_max < 2 rho,
  * coindex = (sum of multiplicities of eigenvalues < 2 rho) - 1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curvature import einstein_residual, ricci_eigenvalues
from .errors import NoConvergence, NotEinstein
from .spaces import InvariantMetric, SpaceModel

__all__ = [
    "StabilityMatrix", "SpectralReport",
    "assemble_lp", "assemble_lp_exact", "sym_eigen", "cluster_spectrum",
    "stability_report", "homothety_fingerprint", "distinguish",
    "distinguishing_reason", "tt_extremes",
]

ZERO_RATIO = 1e-7          # |lambda_p| / 2rho below this counts as a zero eigenvalue
RATIO_TOL = 1e-6           # fingerprint comparison tolerance on eigenvalue ratios


@dataclass(frozen=True)
class StabilityMatrix:
    """Symmetric r x r matrix of the stability operator for one metric."""
    space: SpaceModel
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=float))


def _lp_terms(space: SpaceModel):
    """Per-triple assembly plan shared by the float and exact paths."""
    diag, offdiag, repeat = [], [], []
    for (i, j, k, v) in space.ordered_triples:
        if i != k and j != k:
            diag.append((k, i, j, v))
    for t, v in space.triples.items():
        t0 = [a - 1 for a in t]
        for k in set(t0):
            if t0.count(k) == 2:
                i = next(a for a in t0 if a != k)
                repeat.append((k, i, v))
        for k, m in itertools.combinations(sorted(set(t0)), 2):
            rest = list(t0)
            rest.remove(k)
            rest.remove(m)
            offdiag.append((k, m, rest[0], v))
    return diag, offdiag, repeat


def assemble_lp(metric: InvariantMetric) -> StabilityMatrix:
    """Stability operator matrix at ``metric``."""
    sp = metric.space
    x = metric.as_array()
    d = np.asarray(sp.dims, dtype=float)
    L = np.zeros((sp.r, sp.r))
    diag, offdiag, repeat = _lp_terms(sp)
    for (k, i, j, v) in diag:
        L[k, k] += float(v) * x[k] / (x[i] * x[j]) / d[k]
    for (k, i, v) in repeat:
        L[k, k] += float(v) * x[i] / x[k] ** 2 / d[k]
    for (k, m, i, v) in offdiag:
        val = float(v) * (x[i] ** 2 - x[k] ** 2 - x[m] ** 2) / (x[i] * x[k] * x[m])
        val /= math.sqrt(d[k] * d[m])
        L[k, m] += val
        L[m, k] += val
    return StabilityMatrix(sp, L)


def assemble_lp_exact(metric: InvariantMetric):
    """Exact Fraction matrix (requires rational coordinates and square
    summand dimensions, which all catalog spaces have since d_i = 2...
    non-square sqrt(d_k d_m) factors fall back to the float path)."""
    sp = metric.space
    x = [Fraction(xi) for xi in metric.x]
    L = [[Fraction(0)] * sp.r for _ in range(sp.r)]
    diag, offdiag, repeat = _lp_terms(sp)
    for (k, i, j, v) in diag:
        L[k][k] += v * x[k] / (x[i] * x[j]) / sp.dims[k]
    for (k, i, v) in repeat:
        L[k][k] += v * x[i] / x[k] ** 2 / sp.dims[k]
    for (k, m, i, v) in offdiag:
        prod = sp.dims[k] * sp.dims[m]
        root = math.isqrt(prod)
        if root * root != prod:
            raise ValueError("exact path needs sqrt(d_k d_m) rational")
        val = v * (x[i] ** 2 - x[k] ** 2 - x[m] ** 2) / (x[i] * x[k] * x[m]) / root
        L[k][m] += val
        L[m][k] += val
    return L


# ---------------------------------------------------------------------------
# eigensolver: cyclic Jacobi rotations
# ---------------------------------------------------------------------------

def sym_eigen(matrix, tol: float = 1e-12, max_sweeps: int = 64):
    """Full spectrum of a symmetric matrix by cyclic Jacobi rotations.

    Returns [(eigenvalue, eigenvector), ...] sorted ascending; every pair is
    certified to satisfy ||L v - lambda v|| <= tol * ||L||.  Raises
    NoConvergence if the sweep limit is hit or a certificate fails.
    """
    A0 = matrix.entries if isinstance(matrix, StabilityMatrix) else np.asarray(matrix, dtype=float)
    if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
        raise ValueError("square matrix required")
    if not np.allclose(A0, A0.T, atol=1e-15 * max(1.0, float(np.abs(A0).max()))):
        raise ValueError("matrix is not symmetric")
    n = A0.shape[0]
    A = np.array(A0, dtype=float)
    V = np.eye(n)
    norm = float(np.linalg.norm(A0))
    if n == 1:
        return [(float(A0[0, 0]), np.array([1.0]))]
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(A, -1) ** 2)) * 2.0)
        if off <= max(norm, 1e-300) * 1e-16 * n:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-18 * max(norm, 1e-300):
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise NoConvergence(f"Jacobi sweeps exceeded {max_sweeps}")
    vals = np.diag(A).copy()
    order = np.argsort(vals)
    pairs = []
    for idx in order:
        lam, vec = float(vals[idx]), V[:, idx]
        resid = float(np.linalg.norm(A0 @ vec - lam * vec))
        if resid > tol * max(norm, 1e-300):
            raise NoConvergence(f"eigenpair residual {resid:.2e} above tol*||L||")
        pairs.append((lam, vec))
    return pairs


def cluster_spectrum(eigenvalues, rel_tol: float):
    """Greedy merge of sorted eigenvalues into (value, multiplicity) clusters;
    neighbours closer than rel_tol * max(1, |value|) join one cluster whose
    value is the member mean."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    clusters = []
    for v in eigenvalues:
        v = float(v)
        if clusters and abs(v - clusters[-1][0]) <= rel_tol * max(1.0, abs(v)):
            val, m = clusters[-1]
            clusters[-1] = ((val * m + v) / (m + 1), m + 1)
        else:
            clusters.append((v, 1))
    return [(v, m) for v, m in clusters]


def tt_extremes(matrix: StabilityMatrix, tol: float = 1e-12):
    """Extremal eigenvalues of the operator restricted to trace-free tensors
    (the orthogonal complement of u = (sqrt d_k), deflated by a Householder
    reflection)."""
    L = matrix.entries
    r = L.shape[0]
    d = np.asarray(matrix.space.dims, dtype=float)
    u = np.sqrt(d)
    u /= np.linalg.norm(u)
    v = u.copy()
    v[0] -= 1.0
    nv = np.linalg.norm(v)
    if nv > 1e-14:
        v /= nv
        H = np.eye(r) - 2.0 * np.outer(v, v)
    else:
        H = np.eye(r)
    B = H[:, 1:]
    Ltt = B.T @ L @ B
    Ltt = 0.5 * (Ltt + Ltt.T)
    vals = [lam for lam, _ in sym_eigen(Ltt, tol=tol)]
    return vals[0], vals[-1], vals


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralReport:
    """Spectral stability data of one Einstein metric.

    ``eigenvalues`` is the clustered full spectrum of [L]; ``lambda_p`` and
    ``lambda_p_max`` are the trace-free extremes; ``fingerprint`` holds only
    scale-invariant data and is the basis for homothety comparisons.
    """
    metric: InvariantMetric
    eigenvalues: tuple
    two_rho: float
    lambda_p: float
    lambda_p_max: float
    coindex: int
    flags: dict
    fingerprint: tuple

    @property
    def extremal_ratio(self) -> float:
        """lambda_p_max / lambda_p; infinite when lambda_p is (numerically) 0."""
        if abs(self.lambda_p) <= ZERO_RATIO * abs(self.two_rho):
            return math.inf
        return self.lambda_p_max / self.lambda_p


def _auto_rel_tol(residual: float) -> float:
    # refined inputs carry ~14 digits, printed 4-decimal inputs ~4
    return 1e-8 if residual < 1e-10 else 1e-4


def stability_report(metric: InvariantMetric, einstein_tol: float = 1e-2,
                     rel_tol: float | None = None) -> SpectralReport:
    """Classify an Einstein metric per the spectrum of its stability operator.

    Raises NotEinstein when the relative Einstein residual exceeds
    ``einstein_tol`` (refine first for printed approximate metrics).
    """
    data = ricci_eigenvalues(metric)
    if data.residual > einstein_tol:
        raise NotEinstein(
            f"relative Einstein residual {data.residual:.2e} exceeds {einstein_tol:.0e}")
    if rel_tol is None:
        rel_tol = _auto_rel_tol(data.residual)
    two_rho = data.two_rho_mean
    L = assemble_lp(metric)
    full = [lam for lam, _ in sym_eigen(L)]
    clusters = cluster_spectrum(full, rel_tol)
    lam_p, lam_max, _ = tt_extremes(L)

    margin = rel_tol * max(1.0, abs(two_rho))
    below = sum(m for v, m in clusters if v < two_rho - margin)
    coindex = below - 1
    degenerate = any(abs(v - two_rho) <= margin for v, _ in clusters)
    flags = {
        "stable": lam_p > two_rho + margin,
        "unstable": lam_p < two_rho - margin,
        "degenerate": degenerate,
        "local_minimum": lam_max < two_rho - margin,
    }
    mult_pattern = tuple(m for _, m in clusters)
    ratios = tuple(v / two_rho for v, _ in clusters)
    zero_flag = abs(lam_p) <= ZERO_RATIO * abs(two_rho)
    fingerprint = (coindex, mult_pattern, ratios, zero_flag, degenerate)
    return SpectralReport(metric, tuple(clusters), two_rho, lam_p, lam_max,
                          coindex, flags, fingerprint)


def homothety_fingerprint(report: SpectralReport) -> tuple:
    """Scale-invariant fingerprint (coindex, multiplicity pattern,
    eigenvalue/2rho multiset, zero-eigenvalue flag, degeneracy flag)."""
    return report.fingerprint


def distinguishing_reason(a: SpectralReport, b: SpectralReport) -> str | None:
    """First scale-invariant discriminator of two reports, or None."""
    ca, pa, ra, za, da = a.fingerprint
    cb, pb, rb, zb, db = b.fingerprint
    if ca != cb:
        return "coindex"
    if da != db:
        return "degenerate-flag"
    if za != zb:
        return "zero-eigenvalue"
    if pa != pb:
        return "multiplicity-pattern"
    if len(ra) != len(rb) or any(abs(x - y) > RATIO_TOL * max(1.0, abs(x))
                                 for x, y in zip(ra, rb)):
        return "eigenvalue-ratio"
    return None


def distinguish(a: SpectralReport, b: SpectralReport) -> str:
    """'distinct' when the scale-invariant fingerprints differ beyond
    tolerance, else 'indistinguishable' (homothetic metrics always compare
    indistinguishable)."""
    return "distinct" if distinguishing_reason(a, b) else "indistinguishable"
