"""Specialization to the square-free family y^2 = x^3 - N^2 x.

Everything O(N)-flavored lives here: the 2-adic obstruction to integral
doubling, valuation profiles of the division-value sequence, multiplier caps
with their explicit N-dependence, the threshold search that closes the range
of admissible N, and the bounded integral-point search that rebuilds the
point table for square-free N up to 75.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from . import analytic, bounds
from ._precision import context
from .curves import Curve, RatPoint, make_curve, rational_point
from .divpoly import psi_value_binary
from .errors import ParityMismatch, TorsionInput
from .factorization import is_square_free, valuation
from .heights import canonical_height, naive_height
from .reports import BoundReport

N_CAP_SMALL = 3.6e27
N_CAP_COEFF = 9.196e23
TABLE_N_VALUES = (5, 6, 7, 14, 15, 21, 22, 29, 30, 34, 39, 41, 46, 65, 69, 70)
HEIGHT_RATIO_LIMIT = 121

# largest x whose cube, and N^2 x alongside it, stays inside int64
_VECTOR_X_CAP = 2_000_000

DOUBLE_CITATION = "x(2P) = (x^2 + N^2)^2 / (4 (x^3 - N^2 x)) has ord_2 < 0 for integral non-torsion P"
BINARY_FORM_CITATION = "psi_n(t x, t N) = t^((n^2 - 1)/2) psi_n(x, N); psi_n(1, 0) = n; psi_n(0, 1) = +-1"
NONIDENTITY_CITATION = "n^2 < 8 (log(N)/2 + log(N^2 + 1)/4 + log(2)/12) / (log N + log(2)/2) <= 8 forces n = 1"
GROWTH_RATIO_CITATION = (
    "g(log N) <= 3 for N >= 56, g(x) = (x + log 2 + 1/(2e))(x + log 2 + 1/3)^3 (x + 2 log 2 / 9)(x + log 2) / x^6"
)
HDIFF_WINDOW_CITATION = (
    "-(1/2) log N - (1/4) log 2 <= hhat(P) - h(x_P)/2 <= (1/4) log(N^2 + 1) + (1/12) log 2"
)
FLOOR_WINDOW_CITATION = "hhat(P) >= (1/16) log(2 N^2) for non-torsion P"
UPPER_WINDOW_CITATION = (
    "hhat(P) <= h(x_P)/2 + (1/3) log 2 for integral P on the unbounded real component (x >= N)"
)


@dataclass(frozen=True)
class CongruentCurve:
    """The pair (N, curve) with N square-free and the curve y^2 = x^3 - N^2 x."""

    N: int
    curve: Curve


def congruent_curve(N: int) -> CongruentCurve:
    """Validate N and build its curve; discriminant is 64 N^6 and j = 1728."""
    if N < 1 or not is_square_free(N):
        raise ValueError(f"N must be a square-free positive integer, got {N}")
    return CongruentCurve(N, make_curve(-N * N, 0))


class Ord2Prediction(NamedTuple):
    """Predicted 2-adic valuation; exact=False means a lower bound only."""

    value: int
    exact: bool


@dataclass(frozen=True)
class TableRow:
    """One N with its non-torsion integral points (y > 0, x ascending)."""

    N: int
    points: Tuple[RatPoint, ...]
    heights: Tuple[float, ...]
    ratio_ok: bool


@dataclass(frozen=True)
class IntegralPointTable:
    """Bounded-search table; exhaustiveness above x_max is not claimed."""

    rows: Tuple[TableRow, ...]
    N_max: int
    x_max: int
    certified: bool = False

    def to_json(self) -> dict:
        return {
            "N_max": self.N_max,
            "x_max": self.x_max,
            "certified": self.certified,
            "rows": [
                {
                    "N": row.N,
                    "points": [
                        {"x": int(P.x), "y": int(P.y), "hhat": float(h)}
                        for P, h in zip(row.points, row.heights)
                    ],
                    "ratio_ok": row.ratio_ok,
                }
                for row in self.rows
            ],
        }


def table_csv(table: IntegralPointTable) -> str:
    """CSV rendering with columns N,x,y,hhat; heights at 12 significant digits."""
    lines = ["N,x,y,hhat"]
    for row in table.rows:
        for P, h in zip(row.points, row.heights):
            lines.append(f"{row.N},{int(P.x)},{int(P.y)},{float(h):.12g}")
    return "\n".join(lines) + "\n"


def double_x(x: int, N: int) -> Fraction:
    """Exact abscissa of 2P for the integral point with abscissa x."""
    if x in (0, N, -N):
        raise TorsionInput(f"x = {x} is 2-torsion on y^2 = x^3 - {N}^2 x")
    return Fraction((x * x + N * N) ** 2, 4 * (x**3 - N * N * x))


def verify_double_not_integral(N: int, P: RatPoint) -> BoundReport:
    """Check ord_2(x(2P)) < 0, recording the parity case and its floor.

    Both-odd coordinates force ord_2 <= -2, both-even force ord_2 <= -1, and
    mixed parity forces ord_2 <= -2; any of them keeps 2P away from the
    integers.
    """
    x = int(P.x)
    value = double_x(x, N)
    ord2 = valuation(value.numerator, 2) - valuation(value.denominator, 2)
    if x % 2 == 0 and N % 2 == 0:
        floor = -1
    else:
        floor = -2
    return BoundReport(
        name="double-not-integral",
        inputs={
            "N": N,
            "x": x,
            "ord2": ord2,
            "x_parity": x % 2,
            "N_parity": N % 2,
            "case_floor": floor,
        },
        threshold=float(floor),
        holds=ord2 <= floor,
        citation=DOUBLE_CITATION,
    )


def _integral_ordinate(a: int, N: int) -> int:
    v = a**3 - N * N * a
    if v == 0:
        raise TorsionInput(f"abscissa {a} is 2-torsion on y^2 = x^3 - {N}^2 x")
    if v < 0:
        raise ValueError(f"no real point with abscissa {a}")
    b = math.isqrt(v)
    if b * b != v:
        raise ValueError(f"abscissa {a} carries no integral point on y^2 = x^3 - {N}^2 x")
    return b


def ord2_profile(a: int, N: int, n: int) -> Ord2Prediction:
    """Predicted ord_2 of the n-th division value at an integral point (a, b).

    Odd n is fully covered: 0 for mixed parity, (n^2-1)/4 for a, N odd,
    3(n^2-1)/4 for a = 2 mod 4 with N even, (n^2-1)/2 for a = 0 mod 4 with N
    even.  Even n is guaranteed only in the both-odd case, as the lower bound
    n^2/4 + ord_2(b); the remaining even-n parity classes raise, since no
    displayed bound covers them (spot checks show the both-even analogue with
    the curve ordinate in place of b is false).
    """
    if n < 1:
        raise ValueError("n must be positive")
    b = _integral_ordinate(a, N)
    if n == 1:
        return Ord2Prediction(0, True)
    if n % 2 == 1:
        if a % 2 != N % 2:
            return Ord2Prediction(0, True)
        if a % 2 == 1:
            return Ord2Prediction((n * n - 1) // 4, True)
        if a % 4 == 2:
            return Ord2Prediction(3 * (n * n - 1) // 4, True)
        return Ord2Prediction((n * n - 1) // 2, True)
    if a % 2 == 1 and N % 2 == 1:
        return Ord2Prediction(n * n // 4 + valuation(b, 2), False)
    raise ParityMismatch(
        f"even n = {n} with parities (a, N) = ({a % 2}, {N % 2}) is outside the guaranteed cases"
    )


def binary_form_checks(N: int, n: int) -> BoundReport:
    """Sampled homogeneity and endpoint values of the two-variable division form."""
    if n % 2 == 0 or not 3 <= n <= 13:
        raise ValueError("n must be odd with 3 <= n <= 13")
    weight = (n * n - 1) // 2
    pairs = ((2, 1), (3, 2), (-1, 3), (5, 4), (-3, 7), (1, N))
    scales = (2, 3, -2, 5)
    homogeneous = all(
        psi_value_binary(n, t * x, t * m) == t**weight * psi_value_binary(n, x, m)
        for x, m in pairs
        for t in scales
    )
    at_10 = psi_value_binary(n, 1, 0)
    at_01 = psi_value_binary(n, 0, 1)
    holds = homogeneous and at_10 == n and abs(at_01) == 1
    return BoundReport(
        name="binary-form",
        inputs={
            "N": N,
            "n": n,
            "weight": weight,
            "samples": len(pairs) * len(scales),
            "value_10": at_10,
            "value_01": at_01,
        },
        threshold=None,
        holds=holds,
        citation=BINARY_FORM_CITATION,
    )


def hn_cap(N: int, n: int) -> int:
    """Size cap (2N)^((n^2-1)/2) on the n-th division value when nP is integral."""
    if n % 2 == 0:
        raise ValueError("cap stated for odd n")
    return (2 * N) ** ((n * n - 1) // 2)


def multiplier_height_cap(n: int, N: int) -> float:
    """Cap log n + log(N)/2 + log(2)/3 on hhat(P) when nP is integral."""
    if n < 2:
        raise ValueError("need n >= 2")
    return math.log(n) + math.log(N) / 2 + math.log(2) / 3


def _growth_factors(ctx) -> Tuple[object, ...]:
    log2 = ctx.ln(2)
    third = ctx.mpf(1) / 3
    return (
        log2 + 1 / (2 * ctx.e),
        log2 + third,
        log2 + third,
        log2 + third,
        2 * log2 / 9,
        log2,
    )


def growth_poly(precision_bits: int = bounds.EVAL_BITS) -> Tuple[object, ...]:
    """Degree-6 comparison polynomial of the large-n branch, lowest degree first.

    P(x) = (2592 e C / log 56) (x + log 2 + 1/(2e)) (x + log 2 + 1/3)^3
    (x + 2 log 2 / 9) (x + log 2) with C the linear-form floor constant.
    """
    ctx = context(precision_bits)
    prefactor = 2592 * ctx.e * bounds.DAVID_C / ctx.ln(56)
    poly = [ctx.mpf(1)]
    for root in _growth_factors(ctx):
        widened = [ctx.mpf(0)] * (len(poly) + 1)
        for i, coeff in enumerate(poly):
            widened[i] += root * coeff
            widened[i + 1] += coeff
        poly = widened
    return tuple(prefactor * coeff for coeff in poly)


def growth_ratio(x, precision_bits: int = bounds.EVAL_BITS):
    """g(x): the growth polynomial without its prefactor, divided by x^6."""
    ctx = context(precision_bits)
    xv = ctx.mpf(x)
    product = ctx.mpf(1)
    for root in _growth_factors(ctx):
        product *= xv + root
    return product / xv**6


def growth_ratio_check(N: int, precision_bits: int = bounds.EVAL_BITS) -> BoundReport:
    """Check g(log N) <= 3, the step that turns the degree-6 cap into a (log N)^{5/2} cap."""
    if N < 56:
        raise ValueError("stated for N >= 56")
    ctx = context(precision_bits)
    value = growth_ratio(ctx.ln(N), precision_bits)
    return BoundReport(
        name="growth-ratio",
        inputs={"N": N, "g": float(value)},
        threshold=3.0,
        holds=bool(value <= 3),
        citation=GROWTH_RATIO_CITATION,
    )


def n_cap(N: int) -> float:
    """Cap max{3.6e27, 9.196e23 (log N)^{5/2}} on multipliers with nP integral, N >= 56."""
    if N < 56:
        raise ValueError("smaller N is handled by the table search")
    return float(max(N_CAP_SMALL, N_CAP_COEFF * math.log(N) ** 2.5))


@lru_cache(maxsize=None)
def _omega_one(precision_bits: int = 128):
    return analytic.real_period(make_curve(-1, 0), precision_bits)


def gap_floor(n1: int, N: int) -> float:
    """Floor (n1^2/8) log N - log(N)/2 + log(omega1/2) on log n2 for a second multiple."""
    if n1 < 2:
        raise ValueError("need n1 >= 2")
    ctx = context(128)
    logn = ctx.ln(N)
    return float(ctx.mpf(n1) ** 2 / 8 * logn - logn / 2 + ctx.ln(_omega_one() / 2))


def resolve_N_threshold(scan_max: int = 5000) -> Tuple[int, int]:
    """Largest N compatible with each branch of the multiplier cap at n1 = 11.

    Branch one compares the gap floor against log(3.6e27), branch two against
    log(9.196e23 (log N)^{5/2}); both margins are monotone in N, so the last
    satisfied N in an increasing scan is the threshold.
    """
    ctx = context(128)
    cap_small = ctx.ln(ctx.mpf(N_CAP_SMALL))
    branch1 = branch2 = None
    for N in range(2, scan_max):
        floor = gap_floor(11, N)
        if floor <= cap_small:
            branch1 = N
        if floor <= ctx.ln(ctx.mpf(N_CAP_COEFF) * ctx.ln(N) ** ctx.mpf("2.5")):
            branch2 = N
    return branch1, branch2


def nonidentity_multiplier(N: int, P: RatPoint, n: int) -> BoundReport:
    """Integral multiples on the bounded real component force multiplier 1."""
    bound = (
        8
        * (math.log(N) / 2 + math.log(N * N + 1) / 4 + math.log(2) / 12)
        / (math.log(N) + math.log(2) / 2)
    )
    return BoundReport(
        name="nonidentity-multiplier",
        inputs={"N": N, "x": float(P.x), "n": n, "n_squared": n * n, "chain_bound": bound},
        threshold=bound,
        holds=n == 1,
        citation=NONIDENTITY_CITATION,
    )


def height_windows(
    N: int, P: RatPoint, hhat: Optional[float] = None
) -> Tuple[BoundReport, BoundReport, BoundReport]:
    """Three explicit windows pinning hhat against the naive height on y^2 = x^3 - N^2 x.

    The difference window bounds hhat(P) - h(x_P)/2 on both sides, the floor
    window keeps non-torsion heights above (1/16) log(2 N^2), and the upper
    window caps hhat by h(x_P)/2 + (1/3) log 2.  The upper window applies only
    to integral abscissas x >= N: the bounded oval genuinely violates it.
    """
    cc = congruent_curve(N)
    if P.x in (0, N, -N):
        raise TorsionInput(f"x = {P.x} is 2-torsion on y^2 = x^3 - {N}^2 x")
    if hhat is None:
        hhat = float(canonical_height(cc.curve, P))
    half_naive = naive_height(P.x) / 2
    diff = hhat - half_naive
    lower = -math.log(N) / 2 - math.log(2) / 4
    upper = math.log(N * N + 1) / 4 + math.log(2) / 12
    hdiff = BoundReport(
        name="height-difference-window",
        inputs={"N": N, "hhat": hhat, "difference": diff, "lower": lower, "upper": upper},
        threshold=upper,
        holds=lower <= diff <= upper,
        citation=HDIFF_WINDOW_CITATION,
    )
    floor_value = math.log(2 * N * N) / 16
    floor = BoundReport(
        name="height-floor-window",
        inputs={"N": N, "hhat": hhat, "floor": floor_value},
        threshold=floor_value,
        holds=hhat >= floor_value,
        citation=FLOOR_WINDOW_CITATION,
    )
    cap_value = half_naive + math.log(2) / 3
    on_unbounded = P.x.denominator == 1 and P.x >= N
    cap = BoundReport(
        name="height-upper-window",
        inputs={"N": N, "hhat": hhat, "cap": cap_value},
        threshold=cap_value,
        holds=hhat <= cap_value if on_unbounded else None,
        citation=UPPER_WINDOW_CITATION,
        applicable=on_unbounded,
    )
    return hdiff, floor, cap


def _vector_square_abscissas(N: int, lo: int, hi: int) -> List[int]:
    """int64 scan of x in [lo, hi] for x^3 - N^2 x a positive perfect square."""
    xs = np.arange(lo, hi + 1, dtype=np.int64)
    v = xs * xs * xs - np.int64(N * N) * xs
    keep = v > 0
    xs, v = xs[keep], v[keep]
    if xs.size == 0:
        return []
    base = np.floor(np.sqrt(v.astype(np.float64))).astype(np.int64)
    hits: List[int] = []
    for shift in (-1, 0, 1):
        root = base + shift
        mask = (root > 0) & (root * root == v)
        hits.extend(int(t) for t in xs[mask])
    return hits


def _python_square_abscissas(N: int, lo: int, hi: int) -> List[int]:
    N2 = N * N
    out = []
    for x in range(lo, hi + 1):
        v = x * x * x - N2 * x
        if v > 0:
            s = math.isqrt(v)
            if s * s == v:
                out.append(x)
    return out


def search_integral_points(N: int, x_max: int) -> List[RatPoint]:
    """All integral non-torsion (x, y), y > 0, with -N <= x <= x_max, x ascending.

    The vectorized scan only proposes candidates; every candidate is
    re-verified with exact integer arithmetic before being returned.
    """
    if N < 1 or not is_square_free(N):
        raise ValueError(f"N must be a square-free positive integer, got {N}")
    if x_max < N:
        raise ValueError("x_max must be at least N")
    candidates: List[int] = []
    vector_ok = N <= _VECTOR_X_CAP
    vec_lo = max(-N, -_VECTOR_X_CAP) if vector_ok else 1
    vec_hi = min(x_max, _VECTOR_X_CAP) if vector_ok else 0
    if not vector_ok:
        candidates.extend(_python_square_abscissas(N, -N, x_max))
    else:
        start = vec_lo
        chunk = 1 << 20
        while start <= vec_hi:
            stop = min(start + chunk - 1, vec_hi)
            candidates.extend(_vector_square_abscissas(N, start, stop))
            start = stop + 1
        if x_max > vec_hi:
            candidates.extend(_python_square_abscissas(N, vec_hi + 1, x_max))
    points = []
    N2 = N * N
    for x in sorted(set(candidates)):
        if x in (0, N, -N):
            continue
        v = x**3 - N2 * x
        y = math.isqrt(v) if v > 0 else 0
        if v > 0 and y * y == v:
            points.append(rational_point(x, y))
    return points


def reproduce_table(N_max: int = 75, x_max: int = 10**6, height_tol: float = 1e-10) -> IntegralPointTable:
    """Rebuild the integral-point table for square-free N <= N_max.

    Rows appear only for N with non-torsion integral points; each row carries
    canonical heights and the pairwise check that no height reaches 121 times
    another (which would allow one point to be a multiple of another).
    """
    rows = []
    for N in range(1, N_max + 1):
        if not is_square_free(N):
            continue
        points = search_integral_points(N, x_max)
        if not points:
            continue
        cc = congruent_curve(N)
        heights = tuple(float(canonical_height(cc.curve, P, tol=height_tol)) for P in points)
        ratio_ok = all(hp < HEIGHT_RATIO_LIMIT * hq for hp in heights for hq in heights)
        rows.append(TableRow(N, tuple(points), heights, ratio_ok))
    return IntegralPointTable(tuple(rows), N_max, x_max)
