"""Integral refinements of the order-2 trace bound.

The machinery: an integer-coefficient affine inequality that is strictly
positive on the Frobenius circle |w| = sqrt(q) forces, by Galois invariance
and the AM-GM inequality, a slack of one full unit of genus in the summed
inequality.  Pairing the rank-1 trace matrix with a positive definite integer
matrix produces such inequalities, and the optimal half-integer choice of the
off-diagonal entry yields a closed-form sharpening of the order-2 bound with
an explicit gain.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .classical import CurveParams, ihara_radicand, require_order2_range
from .errors import InvalidCut, NotPositiveDefinite, OutOfIharaRange, UncertifiedCut
from .qext import Quad


@dataclass(frozen=True)
class AffineCut:
    """Integer coefficients (a0, a1, ..., an) of an affine trace inequality.

    Represents ``sum_{k>=1} a_k * tau_k(w) + a0 > 0`` on |w| = sqrt(q).
    ``certified`` records that strict positivity on the circle has been
    established, either structurally (PSD pairing) or by the verifier.
    """

    coeffs: tuple[int, ...]
    certified: bool = field(default=False, compare=False)

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise InvalidCut("need a constant term and at least one trace coefficient")
        if any(not isinstance(c, int) for c in self.coeffs):
            raise InvalidCut("cut coefficients must be integers")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def a0(self) -> int:
        return self.coeffs[0]

    def certify(self) -> "AffineCut":
        return replace(self, certified=True)


def serre_cut(q: int) -> AffineCut:
    """The order-1 cut tau_1(w) + floor(2*sqrt(q)) + 1 > 0, always valid."""
    from math import isqrt

    return AffineCut((isqrt(4 * q) + 1, 1), certified=True)


def general_bound(params: CurveParams, cut: AffineCut) -> Fraction:
    """Trace bound from a certified affine cut.

    Returns the exact rational lower bound
    ``(g(1 - a0) - sum_{k>=1} a_k (q^k - q)) / sum_{k>=1} a_k``.
    """
    tail = cut.coeffs[1:]
    if any(a < 0 for a in tail):
        raise InvalidCut("trace coefficients a_k (k >= 1) must be nonnegative")
    denom = sum(tail)
    if denom == 0:
        raise InvalidCut("at least one trace coefficient must be positive")
    if not cut.certified:
        raise UncertifiedCut(
            "cut lacks a positivity certificate; run verify.check_affine_ineq first"
        )
    q, g = params.q, params.g
    num = g * (1 - cut.a0) - sum(a * (q**k - q) for k, a in enumerate(tail, start=1))
    return Fraction(num, denom)


@dataclass(frozen=True)
class RefineMatrix2:
    """Positive definite 2x2 matrix [[d, a], [a, b]] with d, b natural, 2a natural."""

    d: int
    a: Fraction
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        if self.d < 1 or self.b < 1:
            raise NotPositiveDefinite(f"d and b must be natural integers: d={self.d}, b={self.b}")
        if (2 * self.a).denominator != 1 or self.a < 0:
            raise NotPositiveDefinite(f"2a must be a natural integer: a={self.a}")
        if self.d * self.b - self.a * self.a <= 0:
            raise NotPositiveDefinite(
                f"determinant {self.d * self.b - self.a * self.a} is not positive"
            )


def cut_from_matrix2(q: int, mat: RefineMatrix2) -> AffineCut:
    """The cut d*tau_2 + 2a*tau_1 + (2qd + b) > 0 induced by a definite matrix.

    Positivity on the circle follows from pairing against the rank-1 trace
    matrix, so the cut is certified by construction.
    """
    return AffineCut((2 * q * mat.d + mat.b, int(2 * mat.a), mat.d), certified=True)


def matrix_bound2(params: CurveParams, mat: RefineMatrix2) -> Fraction:
    """Trace bound (g(1 - 2qd - b) - d(q^2 - q)) / (d + 2a), exact."""
    q, g = params.q, params.g
    num = g * (1 - 2 * q * mat.d - mat.b) - mat.d * (q * q - q)
    return Fraction(num) / (mat.d + 2 * mat.a)


def ihara_alpha(params: CurveParams) -> Quad:
    """The positive ratio -t/g of the order-2 trace bound, exact.

    Equals (sqrt(r) - 1)/2 with r = 1 + 8q + 4(q^2 - q)/g and satisfies
    alpha*(alpha + 1) == 2q + (q^2 - q)/g, which is asserted here.
    """
    require_order2_range(params)
    q, g = params.q, params.g
    r = ihara_radicand(params)
    alpha = Quad(Fraction(-1, 2), Fraction(1, 2), r)
    assert alpha * (alpha + 1) == 2 * q + Fraction(q * q - q, g)
    return alpha


def ihara_serre_trace(params: CurveParams) -> Fraction:
    """The integrality-refined order-2 trace bound, an exact rational.

    With k = floor(alpha), equals -(g*k*(k+1) + 2qg + q^2 - q) / (2(k+1)),
    the value of :func:`matrix_bound2` at d=1, a=k+1/2, b=k(k+1)+1.
    """
    require_order2_range(params)
    q, g = params.q, params.g
    k = ihara_alpha(params).floor()
    return -Fraction(g * k * (k + 1) + 2 * q * g + q * q - q, 2 * (k + 1))


def optimal_matrix2(params: CurveParams) -> RefineMatrix2:
    """The half-integer matrix realizing :func:`ihara_serre_trace`."""
    k = ihara_alpha(params).floor()
    return RefineMatrix2(1, Fraction(2 * k + 1, 2), k * (k + 1) + 1)


def serre_gain(params: CurveParams) -> Quad:
    """Exact gain of the refined bound over the order-2 bound.

    Equals g*(alpha - floor(alpha))*(ceil(alpha) - alpha) / (2*ceil(alpha)),
    which is zero exactly when alpha is an integer.
    """
    alpha = ihara_alpha(params)
    k = alpha.floor()
    if alpha == k:
        return Quad(0)
    g = params.g
    return g * (alpha - k) * (k + 1 - alpha) / (2 * (k + 1))


@dataclass(frozen=True)
class GainAsymptote:
    """Large-genus behavior of the gain for a fixed field size.

    ``gain(g) -> slope*g + const_term`` as g grows; ``aq_upper`` is the
    resulting upper bound on the asymptotic point-count rate
    limsup (N1 - q - 1)/g.
    """

    alpha_inf: Quad
    aq_upper: Quad
    slope: Quad
    const_term: Quad


def gain_asymptote(q: int) -> GainAsymptote:
    """All four asymptotic quantities, exact over the radicand 1 + 8q."""
    if q < 2:
        raise OutOfIharaRange(f"q must be >= 2, got {q}")
    alpha_inf = Quad(Fraction(-1, 2), Fraction(1, 2), 1 + 8 * q)
    k = alpha_inf.floor()
    if alpha_inf == k:
        slope = Quad(0)
    else:
        slope = (alpha_inf - k) * (k + 1 - alpha_inf) / (2 * (k + 1))
    const_term = (
        (k - alpha_inf + Fraction(1, 2))
        * (q * q - q)
        / ((k + 1) * Quad.sqrt(8 * q + 1))
    )
    return GainAsymptote(alpha_inf, alpha_inf - slope, slope, const_term)


def gain_at_4q(q: int) -> Quad:
    """Gain of the refined bound at genus g = 4q, via the specialized formula.

    Valid for q >= 34, where 4q lies between the order-2 and order-3 genus
    thresholds; there alpha = (3*sqrt(q) - 1)/2 and the gain simplifies to
    2q/ceil(alpha) * (alpha - floor(alpha)) * (ceil(alpha) - alpha).
    """
    if q < 34:
        raise OutOfIharaRange(f"g = 4q is outside the order-2 range for q = {q} < 34")
    alpha = Quad(Fraction(-1, 2), Fraction(3, 2), q)
    k = alpha.floor()
    if alpha == k:
        return Quad(0)
    return Fraction(2 * q, k + 1) * (alpha - k) * (k + 1 - alpha)


def gain_cap_at_4q(q: int) -> Fraction:
    """The best gain attainable at g = 4q: q / (2*ceil((3*sqrt(q) - 1)/2))."""
    c = Quad(Fraction(-1, 2), Fraction(3, 2), q).ceil()
    return Fraction(q, 2 * c)
