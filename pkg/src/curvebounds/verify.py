"""Independent oracles for the exact bound machinery.

Two substrates, deliberately separate from the exact modules under test:

* 100-decimal-digit floating point (mpmath) for numeric cross-checks of the
  closed-form geometry and for reported minima;
* rational-coefficient Sturm sequences with exact sign evaluation at the
  irrational interval ends for the rigorous part of positivity certification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .classical import CurveParams, g2_threshold, require_order2_range
from .errors import DegreeTooHigh
from .qext import Quad
from .refine2 import AffineCut, RefineMatrix2, matrix_bound2

ORACLE_DPS = 100
# a certified minimum this close to zero is declared Boundary, not a pass
BOUNDARY_MARGIN = mp.mpf(10) ** -30
MAX_CUT_ORDER = 8


def to_mpf(value) -> mp.mpf:
    """Evaluate an exact value at the oracle precision."""
    with mp.workdps(ORACLE_DPS + 15):
        if isinstance(value, Quad):
            return (mp.mpf(value.x.numerator) / value.x.denominator
                    + mp.mpf(value.y.numerator) / value.y.denominator
                    * mp.sqrt(mp.mpf(value.d.numerator) / value.d.denominator))
        if isinstance(value, Fraction):
            return mp.mpf(value.numerator) / value.denominator
        return mp.mpf(value)


def weil_domain_min2(params: CurveParams) -> mp.mpf:
    """Minimal t1 over the order-2 trace region, solved numerically.

    Case analysis: below the order-2 genus threshold the minimum sits on the
    parabola/horizontal boundary at -2g*sqrt(q); at or above it, at the
    smaller root of the parabola-line intersection.
    """
    q, g = params.q, params.g
    with mp.workdps(ORACLE_DPS + 15):
        if params.g < g2_threshold(q).integer:
            return -2 * g * mp.sqrt(q)
        roots = mp.polyroots([mp.mpf(1) / g, -1, -(2 * q * g + q * q - q)])
        return min(mp.mpf(r.real) for r in roots)


# -- polynomials over Q (ascending coefficient lists) ----------------------


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_add(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return _poly_trim(out)


def _poly_scale(p: Sequence[Fraction], c: Fraction) -> list[Fraction]:
    return _poly_trim([c * a for a in p])


def _poly_shift_up(p: Sequence[Fraction]) -> list[Fraction]:
    """Multiply by the variable."""
    return [Fraction(0)] + list(p)


def _poly_derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return _poly_trim([Fraction(i) * c for i, c in enumerate(p)][1:])


def _poly_divmod(
    num: Sequence[Fraction], den: Sequence[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    den = list(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while len(num) >= len(den) and num:
        c = num[-1] / den[-1]
        k = len(num) - len(den)
        quot[k] = c
        for i, d in enumerate(den):
            num[k + i] -= c * d
        _poly_trim(num)
    return _poly_trim(quot), num


def _poly_gcd(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    a, b = list(p), list(q)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_eval_fraction(p: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def _poly_eval_quad(p: Sequence[Fraction], t: Quad) -> Quad:
    acc = Quad(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def _sturm_chain(p: Sequence[Fraction]) -> list[list[Fraction]]:
    """Sturm chain of the square-free part of p."""
    sqf = list(p)
    dp = _poly_derivative(sqf)
    common = _poly_gcd(sqf, dp)
    if len(common) > 1:
        sqf, _ = _poly_divmod(sqf, common)
    chain = [list(sqf), _poly_derivative(sqf)]
    while chain[-1]:
        _, rem = _poly_divmod(chain[-2], chain[-1])
        chain.append(_poly_scale(rem, Fraction(-1)))
    chain.pop()
    return chain


def _sign_variations(signs: Sequence[int]) -> int:
    nonzero = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


def _roots_in_open_interval(p: Sequence[Fraction], lo: Quad, hi: Quad) -> int:
    """Number of distinct real roots of p in (lo, hi), endpoints exact."""
    chain = _sturm_chain(p)
    if len(chain[0]) <= 1:
        return 0
    va = _sign_variations([_poly_eval_quad(f, lo).sign() for f in chain])
    vb = _sign_variations([_poly_eval_quad(f, hi).sign() for f in chain])
    count = va - vb  # roots in (lo, hi]
    if _poly_eval_quad(chain[0], hi).sign() == 0:
        count -= 1
    return count


def tau_polynomial(k: int, q: int) -> list[Fraction]:
    """tau_k as a polynomial in u = tau_1, via tau_{k+1} = u*tau_k - q*tau_{k-1}."""
    if k < 0:
        raise DegreeTooHigh("k must be nonnegative")
    prev = [Fraction(2)]
    cur = [Fraction(0), Fraction(1)]
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, _poly_add(_poly_shift_up(cur), _poly_scale(prev, Fraction(-q)))
    return cur


def cut_polynomial(q: int, coeffs: Sequence[int]) -> list[Fraction]:
    """a0 + sum a_k tau_k(u) as a polynomial in u = tau_1."""
    poly = [Fraction(coeffs[0])]
    for k, a in enumerate(coeffs[1:], start=1):
        if a:
            poly = _poly_add(poly, _poly_scale(tau_polynomial(k, q), Fraction(a)))
    return poly


@dataclass(frozen=True)
class IneqCheck:
    """Outcome of positivity certification on the Frobenius circle."""

    holds: bool
    boundary: bool
    min_value: mp.mpf
    argmin: mp.mpf


def check_affine_ineq(q: int, coeffs: Sequence[int]) -> IneqCheck:
    """Certify strict positivity of a trace cut for |w| = sqrt(q).

    Expresses the traces as polynomials in u = tau_1 and decides whether the
    resulting polynomial is strictly positive on [-2*sqrt(q), 2*sqrt(q)].
    The decision is exact (Sturm count of interior roots plus exact endpoint
    signs); the reported minimum and argmin are oracle-precision floats.
    Minima within the boundary margin of zero are flagged ``boundary`` and do
    not count as holding.
    """
    if len(coeffs) - 1 > MAX_CUT_ORDER:
        raise DegreeTooHigh(f"cut order {len(coeffs) - 1} exceeds {MAX_CUT_ORDER}")
    poly = cut_polynomial(q, coeffs)
    lo = Quad(0, -2, q)
    hi = Quad(0, 2, q)

    if len(poly) <= 1:
        value = poly[0] if poly else Fraction(0)
        v = to_mpf(value)
        return IneqCheck(value > 0 and v > BOUNDARY_MARGIN, abs(v) <= BOUNDARY_MARGIN, v, mp.mpf(0))

    end_lo = _poly_eval_quad(poly, lo)
    end_hi = _poly_eval_quad(poly, hi)
    interior_roots = _roots_in_open_interval(poly, lo, hi)
    certified = (
        end_lo.sign() > 0 and end_hi.sign() > 0 and interior_roots == 0
    )

    with mp.workdps(ORACLE_DPS + 15):
        sq = mp.sqrt(q)
        candidates = [(-2 * sq, to_mpf(end_lo)), (2 * sq, to_mpf(end_hi))]
        dpoly = _poly_derivative(poly)
        if len(dpoly) > 1:
            dcoeffs = [to_mpf(c) for c in reversed(dpoly)]
            try:
                roots = mp.polyroots(dcoeffs, maxsteps=200, extraprec=120)
            except mp.libmp.NoConvergence:  # pragma: no cover - defensive
                roots = []
            for r in roots:
                if abs(mp.im(r)) < mp.mpf(10) ** -50:
                    u = mp.re(r)
                    if -2 * sq <= u <= 2 * sq:
                        pu = mp.polyval([to_mpf(c) for c in reversed(poly)], u)
                        candidates.append((u, pu))
        argmin, min_value = min(candidates, key=lambda c: c[1])

    boundary = abs(min_value) <= BOUNDARY_MARGIN or end_lo.sign() == 0 or end_hi.sign() == 0
    holds = certified and not boundary
    return IneqCheck(holds, boundary, min_value, argmin)


def certify_cut(q: int, cut: AffineCut) -> AffineCut:
    """Return a certified copy of the cut, or raise if positivity fails."""
    check = check_affine_ineq(q, cut.coeffs)
    if not check.holds:
        from .errors import InvalidCut

        raise InvalidCut(
            f"cut {cut.coeffs} is not strictly positive on the circle "
            f"(min ~ {mp.nstr(check.min_value, 10)})"
        )
    return cut.certify()


@dataclass(frozen=True)
class WeilDomainPoint:
    """A candidate trace vector (t1, ..., tn) with exact rational entries."""

    t: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(Fraction(v) for v in self.t))

    def order2_member(self, params: CurveParams) -> bool:
        """Exact membership test for the order-2 trace region."""
        if len(self.t) < 2:
            return False
        t1, t2 = self.t[0], self.t[1]
        q, g = params.q, params.g
        return (
            t2 <= 2 * q * g
            and t2 >= t1 * t1 / g - 2 * q * g
            and t2 <= t1 + q * q - q
        )


def gram_point(params: CurveParams, thetas: Sequence[float]) -> WeilDomainPoint:
    """Trace vector of an angle multiset, rationalized at oracle precision."""
    q, g = params.q, params.g
    if len(thetas) != g:
        raise ValueError(f"need g = {g} angles, got {len(thetas)}")
    with mp.workdps(ORACLE_DPS + 15):
        values = []
        for k in (1, 2, 3):
            s = mp.mpf(0)
            for theta in thetas:
                s += 2 * mp.power(q, mp.mpf(k) / 2) * mp.cos(k * mp.mpf(theta))
            values.append(_rationalize(s))
    return WeilDomainPoint(tuple(values))


def _rationalize(x: mp.mpf, bits: int = 320) -> Fraction:
    scaled = mp.floor(x * mp.mpf(2) ** bits)
    return Fraction(int(scaled), 2**bits)


def psd4_feasible_point(params: CurveParams, point: WeilDomainPoint) -> bool:
    """PSD check of both order-3 Gram blocks at (t1, t2, t3), with margin.

    Evaluates at oracle precision and accepts determinants and diagonals
    down to the boundary margin below zero, so exact Gram points of real
    angle multisets pass despite rationalization error.
    """
    if len(point.t) < 3:
        raise ValueError("need a trace vector of order 3")
    q, g = params.q, params.g
    t1, t2, t3 = (to_mpf(v) for v in point.t[:3])
    with mp.workdps(ORACLE_DPS + 15):
        sq = mp.sqrt(q)
        q32 = q * sq
        # block-diagonalized order-3 Gram: the second block's off-diagonal
        # carries -t2 (sign forced by the basis change; rank-1 points make
        # both block determinants vanish)
        blocks = [
            (2 * g * q32 + t3, 2 * g * sq + t1, sq * t1 + t2),
            (2 * g * sq - t1, 2 * g * q32 - t3, sq * t1 - t2),
        ]
        for d1, d2, off in blocks:
            det = d1 * d2 - off * off
            if d1 < -BOUNDARY_MARGIN or d2 < -BOUNDARY_MARGIN or det < -BOUNDARY_MARGIN:
                return False
    return True


def scan_halfinteger(params: CurveParams, a_max: Fraction) -> Fraction:
    """Brute-force argmax of the refined order-2 bound over half-integers.

    Scans a in {1/2, 1, 3/2, ..., a_max} with d = 1, b = floor(a^2) + 1 and
    returns the a maximizing the bound; ties resolve to the smallest a.
    """
    require_order2_range(params)
    a_max = Fraction(a_max)
    best_a: Fraction | None = None
    best_bound: Fraction | None = None
    a = Fraction(1, 2)
    while a <= a_max:
        b = (a * a).numerator // (a * a).denominator + 1
        bound = matrix_bound2(params, RefineMatrix2(1, a, b))
        if best_bound is None or bound > best_bound:
            best_a, best_bound = a, bound
        a += Fraction(1, 2)
    if best_a is None:
        raise ValueError("empty scan: a_max < 1/2")
    return best_a
