"""Classical trace bounds: Weil, Weil-Serre and the order-2 (Ihara) bound.

Every bound is expressed as an exact lower bound on the trace
``t1 = q + 1 - N1``, so the derived integer ``N1`` upper bound is a certified
floor.  The genus thresholds delimiting where each order of the hierarchy is
optimal are computed exactly as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import NamedTuple, Union

from .errors import BelowIharaRange, DomainError
from .qext import Quad

MAX_GENUS = 2**63 - 1


def is_prime_power(n: int) -> bool:
    """True iff n = p**k for a prime p and k >= 1, by trial factorization."""
    if n < 2:
        return False
    m = n
    p = 0
    for d in range(2, isqrt(n) + 1):
        if m % d == 0:
            p = d
            break
    if p == 0:
        return True
    while m % p == 0:
        m //= p
    return m == 1


def prime_powers(lo: int, hi: int) -> list[int]:
    """All prime powers q with lo <= q <= hi, ascending."""
    return [q for q in range(max(lo, 2), hi + 1) if is_prime_power(q)]


@dataclass(frozen=True)
class CurveParams:
    """Field size and genus of the curves under consideration."""

    q: int
    g: int
    check_prime_power: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.q < 2:
            raise DomainError(f"q must be >= 2, got {self.q}")
        if self.g < 1:
            raise DomainError(f"g must be >= 1, got {self.g}")
        if self.g > MAX_GENUS:
            raise DomainError(f"g exceeds the supported range: {self.g}")
        if self.check_prime_power and not is_prime_power(self.q):
            raise DomainError(f"q = {self.q} is not a prime power")

    @classmethod
    def unchecked(cls, q: int, g: int) -> "CurveParams":
        """Skip the prime-power test (exploratory queries only)."""
        return cls(q, g, check_prime_power=False)


class Threshold(NamedTuple):
    """An exact genus threshold together with its integer rounding."""

    exact: Quad
    integer: int


def g2_threshold(q: int) -> Threshold:
    """Genus threshold sqrt(q)(sqrt(q)-1)/2 above which order 2 applies.

    Returns the exact value (q - sqrt(q))/2 and its ceiling.
    """
    exact = Quad(Fraction(q, 2), Fraction(-1, 2), q)
    return Threshold(exact, exact.ceil())


def g3_threshold(q: int) -> Threshold:
    """Genus threshold sqrt(q)(q-1)/sqrt(2) above which order 3 improves.

    Returns the exact value ((q-1)/2)*sqrt(2q) and its floor.
    """
    exact = Quad(0, Fraction(q - 1, 2), 2 * q)
    return Threshold(exact, exact.floor())


def weil_trace(params: CurveParams) -> Quad:
    """Weil lower bound on t1: -2g*sqrt(q)."""
    return Quad(0, -2 * params.g, params.q)


def weil_serre_trace(params: CurveParams) -> Fraction:
    """Weil-Serre lower bound on t1: -g*floor(2*sqrt(q))."""
    return Fraction(-params.g * isqrt(4 * params.q))


def ihara_radicand(params: CurveParams) -> Fraction:
    """The rational radicand 1 + 8q + 4(q^2 - q)/g of the order-2 bound."""
    q, g = params.q, params.g
    return 1 + 8 * q + Fraction(4 * (q * q - q), g)


def ihara_trace(params: CurveParams) -> Quad:
    """Order-2 lower bound on t1: the smaller root of t^2/g - t - 2qg - q^2 + q.

    Requires g >= ceil((q - sqrt(q))/2); below that the order-2 region is not
    cut by the point-count constraint and the Weil bounds apply instead.
    """
    require_order2_range(params)
    g = params.g
    r = ihara_radicand(params)
    return Quad(Fraction(g, 2), Fraction(-g, 2), r)


def require_order2_range(params: CurveParams) -> None:
    threshold = g2_threshold(params.q).integer
    if params.g < threshold:
        raise BelowIharaRange(params.q, params.g, threshold)


RootInterval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class BoundReport:
    """One computed bound: method tag, exact trace bound, integer N1 bound."""

    method: str
    t1_lower: Union[Quad, Fraction, RootInterval]
    n1_upper: int
    in_validity_range: bool
    notes: str = ""

    @classmethod
    def from_trace(
        cls,
        method: str,
        params: CurveParams,
        t1_lower: Union[Quad, Fraction],
        in_validity_range: bool = True,
        notes: str = "",
    ) -> "BoundReport":
        bound = Quad(t1_lower) if isinstance(t1_lower, Fraction) else t1_lower
        n1 = (Quad(params.q + 1) - bound).floor()
        if n1 < 0:
            n1 = 0
            notes = (notes + "; " if notes else "") + "trace bound exceeds q+1; N1 clamped to 0"
        return cls(method, t1_lower, n1, in_validity_range, notes)


def weil_report(params: CurveParams) -> BoundReport:
    return BoundReport.from_trace("weil", params, weil_trace(params))


def weil_serre_report(params: CurveParams) -> BoundReport:
    notes = ""
    if isqrt(params.q) ** 2 == params.q:
        notes = "q is a square; coincides with the Weil bound"
    return BoundReport.from_trace("weil-serre", params, weil_serre_trace(params), notes=notes)


def ihara_report(params: CurveParams) -> BoundReport:
    in_range = params.g <= g3_threshold(params.q).integer
    notes = "" if in_range else "beyond the order-2 optimality range; order 3 is sharper"
    return BoundReport.from_trace("ihara", params, ihara_trace(params), in_range, notes)
