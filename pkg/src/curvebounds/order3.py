"""Order-3 machinery: baseline bound, integral refinement, matrix search.

The order-3 baseline trace is the smallest root of the quadratic obtained by
substituting the extension-count constraints ``t2 = t1 + q^2 - q`` and
``t3 = t1 + q^3 - q`` into the determinant of the first 2x2 block of the
block-diagonalized order-3 Gram matrix.  The root is isolated by bisection
with exact sign evaluation in Q(sqrt(q)), so the enclosure is rigorous.

The integral refinement pairs that block with a PSD matrix carrying an
integrality certificate; the resulting bound is an exact rational.  A
kernel-seeded search enumerates certifiable matrices near the rank-1
direction of the block at the baseline point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .classical import BoundReport, CurveParams, g3_threshold
from .errors import EmptySearch, IntegralityViolation, NoRealRoot, NotPSD
from .qext import Quad

DEFAULT_PRECISION_BITS = 60
_REFINE_LIMIT_BITS = 240


@dataclass(frozen=True)
class RefineMatrix3:
    """2x2 PSD matrix [[d, a], [a, b]] with the order-3 integrality certificate.

    Requires d and 2a natural and ``2a*sqrt(q) + b`` a natural integer; for
    non-square q this forces b = b_x - 2a*sqrt(q) with b_x natural.
    """

    q: int
    d: int
    a: Fraction
    b: Quad

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        if not isinstance(self.b, Quad):
            object.__setattr__(self, "b", Quad(self.b))
        if self.d < 0:
            raise NotPSD(f"d must be nonnegative: {self.d}")
        if (2 * self.a).denominator != 1 or self.a < 0:
            raise IntegralityViolation(f"2a must be a natural integer: a={self.a}")
        cert = 2 * self.a * Quad.sqrt(self.q) + self.b
        if not cert.is_integer() or cert.as_fraction() < 0:
            raise IntegralityViolation(
                f"2a*sqrt(q) + b = {cert} is not a natural integer"
            )
        det = self.d * self.b - self.a * self.a
        if det.sign() < 0:
            raise NotPSD(f"determinant {det} is negative")
        if self.b.sign() < 0:
            raise NotPSD(f"b = {self.b} is negative")

    @property
    def certificate(self) -> int:
        """The natural integer 2a*sqrt(q) + b."""
        return int((2 * self.a * Quad.sqrt(self.q) + self.b).as_fraction())

    def literal(self) -> dict[str, int]:
        """Wire form {d, two_a, b_x, b_y} with b = b_x + b_y*sqrt(q)."""
        two_a = int(2 * self.a)
        b_x = self.certificate
        sq = isqrt(self.q)
        if sq * sq == self.q:
            # b is rational; report it directly with no sqrt(q) part
            return {"d": self.d, "two_a": two_a,
                    "b_x": int(self.b.as_fraction()), "b_y": 0}
        return {"d": self.d, "two_a": two_a, "b_x": b_x, "b_y": -two_a}

    @classmethod
    def from_literal(cls, q: int, lit: dict[str, int]) -> "RefineMatrix3":
        b = Quad(lit["b_x"], lit["b_y"], q)
        return cls(q, lit["d"], Fraction(lit["two_a"], 2), b)


@dataclass(frozen=True)
class RootEnclosure:
    """Certified enclosure [lo, hi] of the smallest root of the boundary quadratic."""

    lo: Fraction
    hi: Fraction
    width_bound: Fraction
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("lo must not exceed hi")
        if self.hi - self.lo > self.width_bound:
            raise ValueError("enclosure wider than its width bound")

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def boundary_quadratic(params: CurveParams) -> tuple[Quad, Quad, Quad]:
    """Coefficients (A, B, C) in Q(sqrt(q)) of det(first block) on the line.

    det as a polynomial in t1 after substituting t2 = t1 + q^2 - q and
    t3 = t1 + q^3 - q.
    """
    q, g = params.q, params.g
    a = Quad(-q, -2, q)
    b = Quad((q**3 - q) - 2 * (q * q - q), 2 * (g * (1 + q) - (q * q - q)), q)
    c = Quad(4 * g * g * q * q - (q * q - q) ** 2, 2 * g * (q**3 - q), q)
    return a, b, c


def _eval_quadratic(coeffs: tuple[Quad, Quad, Quad], t: Fraction) -> Quad:
    a, b, c = coeffs
    return (a * t + b) * t + c


def _dyadic_below(u: Quad, bits: int) -> Fraction:
    """A rational within 2**-bits below u (exact floor of a scaled copy)."""
    scale = 1 << bits
    return Fraction((u * scale).floor(), scale)


def wo3_trace_enclosure(
    params: CurveParams,
    precision: Fraction = Fraction(1, 2**DEFAULT_PRECISION_BITS),
) -> RootEnclosure:
    """Isolate the smallest root of the boundary quadratic to the given width.

    The endpoints carry an exact sign change of the quadratic, so the
    enclosure is certified.  A note records whether the second 2x2 block of
    the order-3 Gram matrix is PSD at the midpoint (it is not enforced).
    """
    if precision <= 0:
        raise ValueError("precision must be positive")
    coeffs = boundary_quadratic(params)
    a, b, c = coeffs
    disc = b * b - 4 * a * c
    sd = disc.sign()
    if sd < 0:
        raise NoRealRoot(f"no real boundary point for q={params.q}, g={params.g}")
    vertex = -b / (2 * a)
    if sd == 0:
        # double root exactly at the vertex; enclose it dyadically
        bits = max(4, (1 / precision).bit_length())
        lo = _dyadic_below(vertex, bits)
        hi = lo + Fraction(2, 1 << bits)
        enc = RootEnclosure(lo, hi, max(precision, hi - lo),
                            note=_second_block_note(params, (lo + hi) / 2))
        return enc

    # hi: a rational with det(hi) >= 0; points at or below the vertex stay
    # strictly left of the larger root
    hi = None
    cand = Fraction(vertex.floor())
    if _eval_quadratic(coeffs, cand).sign() >= 0:
        hi = cand
    bits = 1
    while hi is None:
        cand = _dyadic_below(vertex, bits)
        if _eval_quadratic(coeffs, cand).sign() >= 0:
            hi = cand
        bits += 1
        if bits > 4096:  # pragma: no cover - defensive
            raise NoRealRoot("failed to locate the positive window")

    # lo: walk left until the quadratic is strictly negative
    step = Fraction(1)
    lo = hi - step
    while _eval_quadratic(coeffs, lo).sign() >= 0:
        step *= 2
        lo = hi - step

    lo, hi = _bisect(coeffs, lo, hi, precision)
    return RootEnclosure(lo, hi, precision,
                         note=_second_block_note(params, (lo + hi) / 2))


def _bisect(
    coeffs: tuple[Quad, Quad, Quad], lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[Fraction, Fraction]:
    """Shrink [lo, hi] keeping det(lo) < 0 <= det(hi)."""
    while hi - lo > width:
        mid = (lo + hi) / 2
        if _eval_quadratic(coeffs, mid).sign() >= 0:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _second_block_note(params: CurveParams, t1: Fraction) -> str:
    """PSD status of the second Gram block at a rational trial point.

    The block is [[2g*sqrt(q) - t1, sqrt(q)*t1 - t2], [., 2g*q^(3/2) - t3]];
    the -t2 sign is forced by the diagonalizing basis change.
    """
    q, g = params.q, params.g
    t2 = t1 + q * q - q
    t3 = t1 + q**3 - q
    m11 = 2 * g * Quad.sqrt(q) - t1
    m22 = 2 * q * g * Quad.sqrt(q) - t3
    m12 = Quad.sqrt(q) * t1 - t2
    det = m11 * m22 - m12 * m12
    if m11.sign() >= 0 and m22.sign() >= 0 and det.sign() >= 0:
        return ""
    return "second Gram block is not PSD at the baseline point"


def wo3_report(
    params: CurveParams,
    precision: Fraction = Fraction(1, 2**DEFAULT_PRECISION_BITS),
) -> BoundReport:
    """Baseline order-3 bound with the N1 floor certified by refinement.

    If the N1 enclosure straddles an integer, the root enclosure is refined
    automatically; exact rational roots are detected and used directly.
    """
    enc = wo3_trace_enclosure(params, precision)
    coeffs = boundary_quadratic(params)
    q = params.q
    lo, hi = enc.lo, enc.hi
    n_lo = _frac_floor(q + 1 - hi)
    n_hi = _frac_floor(q + 1 - lo)
    width = enc.width_bound
    while n_lo != n_hi and width > Fraction(1, 2**_REFINE_LIMIT_BITS):
        width /= 2**16
        lo, hi = _bisect(coeffs, lo, hi, width)
        n_lo = _frac_floor(q + 1 - hi)
        n_hi = _frac_floor(q + 1 - lo)
    if n_lo != n_hi:
        # the root may sit exactly on an integer boundary q + 1 - n
        for n in range(n_lo + 1, n_hi + 1):
            v = Fraction(q + 1 - n)
            if lo < v <= hi and _eval_quadratic(coeffs, v).sign() == 0:
                lo = hi = v
                n_lo = n_hi = n
                break
    if n_lo != n_hi:  # pragma: no cover - defensive
        raise NoRealRoot("could not certify the N1 floor across the enclosure")
    enc = RootEnclosure(lo, hi, max(width, hi - lo), note=enc.note)
    in_range = params.g >= g3_threshold(q).integer
    notes = enc.note
    if not in_range:
        extra = "below the order-3 optimality threshold; value is not a certified bound"
        notes = f"{notes}; {extra}" if notes else extra
    n1 = max(n_lo, 0)
    return BoundReport("wo3", (enc.lo, enc.hi), n1, in_range, notes)


def _frac_floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def matrix_bound3(params: CurveParams, mat: RefineMatrix3) -> Quad:
    """Refined order-3 trace bound for a certified matrix, an exact value.

    Equals (-g*floor(2*q^(3/2)*d + 2*b*sqrt(q)) - d(q^3 - q) - 2a(q^2 - q))
    divided by (d + 2a + (2a*sqrt(q) + b)); the denominator is a positive
    integer by the integrality certificate.
    """
    if mat.q != params.q:
        raise IntegralityViolation(
            f"matrix certified for q={mat.q}, queried with q={params.q}"
        )
    q, g = params.q, params.g
    sq = Quad.sqrt(q)
    floor_term = (2 * q * mat.d * sq + 2 * mat.b * sq).floor()
    num = -g * floor_term - mat.d * (q**3 - q) - 2 * mat.a * (q * q - q)
    denom = mat.d + 2 * mat.a + mat.certificate
    if denom <= 0:
        raise NotPSD("degenerate matrix: zero denominator")
    return Quad(Fraction(num) / denom)


@dataclass(frozen=True)
class SearchBudget:
    """Enumeration budget for the kernel-seeded matrix search."""

    scale_grid: int = 32
    d_max: int = 4
    neighborhood: int = 2

    def __post_init__(self):
        if min(self.scale_grid, self.d_max, self.neighborhood) < 1:
            raise ValueError("budget fields must be >= 1")


@dataclass(frozen=True)
class SearchResult:
    matrix: RefineMatrix3
    t1_lower: Quad


def _kernel_ratio(params: CurveParams, t1: Fraction) -> Quad:
    """Second component of the kernel direction (1, v) of the first block."""
    q, g = params.q, params.g
    t2 = t1 + q * q - q
    t3 = t1 + q**3 - q
    m11 = 2 * q * g * Quad.sqrt(q) + t3
    m12 = Quad.sqrt(q) * t1 + t2
    if m12.sign() == 0:
        raise EmptySearch("degenerate kernel direction at the baseline point")
    return -m11 / m12


def _min_bx_matrix(q: int, d: int, two_a: int) -> RefineMatrix3:
    """The PSD matrix with given d, 2a and the smallest natural b_x."""
    a = Fraction(two_a, 2)
    v = a * a / d + 2 * a * Quad.sqrt(q)
    c = v.floor()
    if not (v == c):
        c += 1
    b = Quad(c) - 2 * a * Quad.sqrt(q)
    return RefineMatrix3(q, d, a, b)


def search_matrix3(
    params: CurveParams, budget: SearchBudget = SearchBudget()
) -> SearchResult:
    """Enumerate certifiable matrices near the rank-1 kernel direction.

    For every d up to d_max the overall scale of the kernel matrix sweeps the
    unit interval below d on the scale grid; the rounded off-diagonal targets,
    widened by the neighborhood, generate (d, 2a) candidates.  Each candidate
    is completed with the smallest certifiable b_x and scored through
    :func:`matrix_bound3`.  Deterministic: ties resolve to the smallest
    (d, 2a, b_x) lexicographically.
    """
    enc = wo3_trace_enclosure(params)
    ratio = _kernel_ratio(params, enc.midpoint())
    if ratio.sign() <= 0:
        raise EmptySearch("kernel direction has no positive off-diagonal part")

    best: tuple[Quad, tuple[int, int, int], RefineMatrix3] | None = None
    for d in range(1, budget.d_max + 1):
        targets: set[int] = set()
        for s in range(1, budget.scale_grid + 1):
            lam = d - 1 + Fraction(s, budget.scale_grid)
            target = (2 * lam * ratio + Fraction(1, 2)).floor()
            for j in range(-budget.neighborhood, budget.neighborhood + 1):
                if target + j >= 1:
                    targets.add(target + j)
        for two_a in sorted(targets):
            try:
                mat = _min_bx_matrix(params.q, d, two_a)
            except (NotPSD, IntegralityViolation):  # pragma: no cover - defensive
                continue
            bound = matrix_bound3(params, mat)
            key = (d, two_a, mat.certificate)
            if best is None or bound > best[0] or (bound == best[0] and key < best[1]):
                best = (bound, key, mat)
    if best is None:
        raise EmptySearch("no certifiable candidate within the search budget")
    return SearchResult(best[2], best[0])


# matrices realizing the four order-3 records, one per (q, g)
RECORD3_MATRICES: tuple[tuple[int, int, dict[str, int]], ...] = (
    (5, 19, {"d": 1, "two_a": 7, "b_x": 28, "b_y": -7}),
    (7, 21, {"d": 3, "two_a": 29, "b_x": 147, "b_y": -29}),
    (8, 36, {"d": 3, "two_a": 30, "b_x": 160, "b_y": -30}),
    (11, 35, {"d": 2, "two_a": 28, "b_x": 191, "b_y": -28}),
)


def record_table3() -> list[BoundReport]:
    """The four order-3 record bounds, computed through the refinement."""
    reports = []
    for q, g, lit in RECORD3_MATRICES:
        params = CurveParams(q, g)
        mat = RefineMatrix3.from_literal(q, lit)
        bound = matrix_bound3(params, mat)
        report = BoundReport.from_trace(
            "wo3-serre", params, bound,
            in_validity_range=g >= g3_threshold(q).integer,
        )
        reports.append(report)
    return reports
