"""Real-root isolation for rational polynomials: Sturm sequences with exact
arithmetic, bisection to isolating intervals, Newton polish in binary64."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Polynomial", "real_roots", "sturm_chain", "count_roots"]


@dataclass(frozen=True)
class Polynomial:
    """Rational coefficients, ascending degree; leading coefficient nonzero."""
    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs or coeffs[-1] == 0:
            raise ValueError("zero polynomial")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, Fraction) else 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + (c if isinstance(x, Fraction) else float(c))
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            raise ValueError("derivative of a constant is the zero polynomial")
        return Polynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i > 0))


def _poly_div(num, den):
    """Polynomial division on ascending Fraction tuples; returns remainder."""
    num = list(num)
    dn, dd = len(num) - 1, len(den) - 1
    while dn >= dd and any(c != 0 for c in num):
        lead = num[dn] / den[dd]
        shift = dn - dd
        for i, c in enumerate(den):
            num[i + shift] -= lead * c
        num[dn] = Fraction(0)
        while dn > 0 and num[dn] == 0:
            dn -= 1
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


def sturm_chain(p: Polynomial):
    """Sturm sequence of the square-free part of p (ascending tuples)."""
    c0 = p.coefficients
    c1 = tuple(i * c for i, c in enumerate(c0) if i > 0)
    # square-free reduction: divide by gcd(p, p')
    g = _poly_gcd(c0, c1)
    if len(g) > 1:
        c0 = _poly_quotient(c0, g)
        c1 = tuple(i * c for i, c in enumerate(c0) if i > 0)
    chain = [c0, c1]
    while len(chain[-1]) > 1:
        rem = _poly_div(chain[-2], chain[-1])
        if all(c == 0 for c in rem):
            break
        chain.append(tuple(-c for c in rem))
    return chain


def _poly_gcd(a, b):
    a, b = tuple(a), tuple(b)
    while any(c != 0 for c in b):
        a, b = b, _poly_div(a, b)
        if all(c == 0 for c in b):
            break
    lead = a[-1]
    return tuple(c / lead for c in a)


def _poly_quotient(num, den):
    num = list(num)
    dd = len(den) - 1
    out = [Fraction(0)] * (len(num) - dd)
    for dn in range(len(num) - 1, dd - 1, -1):
        if num[dn] == 0:
            continue
        lead = num[dn] / den[dd]
        out[dn - dd] = lead
        for i, c in enumerate(den):
            num[i + (dn - dd)] -= lead * c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _eval(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign_changes(chain, x: Fraction) -> int:
    signs = []
    for coeffs in chain:
        v = _eval(coeffs, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Polynomial, lo: Fraction, hi: Fraction, chain=None) -> int:
    """Number of distinct real roots in (lo, hi]."""
    chain = chain or sturm_chain(p)
    return _sign_changes(chain, Fraction(lo)) - _sign_changes(chain, Fraction(hi))


def _cauchy_bound(p: Polynomial) -> Fraction:
    lead = abs(p.coefficients[-1])
    return 1 + max(abs(c) for c in p.coefficients[:-1]) / lead if p.degree > 0 else Fraction(1)


def real_roots(p, interval=(-math.inf, math.inf), rel_tol: float = 1e-14) -> list:
    """All distinct real roots of ``p`` inside ``interval``, sorted ascending.

    ``p`` may be a Polynomial or an ascending coefficient sequence.  Roots
    are isolated by Sturm-count bisection in exact arithmetic and polished
    by bracketed Newton iteration to ``rel_tol`` relative accuracy.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(tuple(p))
    if p.degree < 1:
        return []
    chain = sturm_chain(p)
    bound = _cauchy_bound(p)
    lo = Fraction(interval[0]) if math.isfinite(interval[0]) else -bound
    hi = Fraction(interval[1]) if math.isfinite(interval[1]) else bound
    if lo >= hi:
        return []
    # open at lo per Sturm counting on (lo, hi]; nudge if lo itself is a root
    if _eval(chain[0], lo) == 0:
        lo -= Fraction(1, 10 ** 9)

    total = count_roots(p, lo, hi, chain)
    isolating = []

    def isolate(a, b, k):
        if k == 0:
            return
        if k == 1:
            isolating.append((a, b))
            return
        mid = (a + b) / 2
        while _eval(chain[0], mid) == 0:
            mid = (a + 2 * b) / 3
        left = count_roots(p, a, mid, chain)
        isolate(a, mid, left)
        isolate(mid, b, k - left)

    isolate(lo, hi, total)

    sq = Polynomial(chain[0])
    dsq = Polynomial(tuple(i * c for i, c in enumerate(chain[0]) if i > 0)) \
        if len(chain[0]) > 1 else None
    roots = []
    for a, b in isolating:
        # exact bisection until the bracket is tight enough for float Newton
        fa = _eval(chain[0], a)
        for _ in range(80):
            if float(b - a) <= 1e-12 * max(1.0, abs(float(a))):
                break
            mid = (a + b) / 2
            fm = _eval(chain[0], mid)
            if fm == 0:
                a = b = mid
                break
            if (fa > 0) == (fm > 0):
                a, fa = mid, fm
            else:
                b = mid
        x = float(a + b) / 2.0
        if dsq is not None:
            for _ in range(4):
                dv = dsq(x)
                if dv == 0:
                    break
                step = sq(x) / dv
                if not math.isfinite(step):
                    break
                x -= step
        roots.append(x)
    roots.sort()
    return roots
