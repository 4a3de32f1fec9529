"""Exact-rational evaluation of every closed formula and bound: orders,
q-binomials, coprime-pair counts, centralizer and class sizes, the upper
and lower bound chains, the main density sandwich, and the limiting-series
reference tables.

Everything here is integer or Fraction arithmetic; floating point appears
only in the decimal rendering helpers at the output boundary.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import NamedTuple


def rational_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def decimal_str(x: Fraction, sig: int = 12) -> str:
    """Decimal rendering at `sig` significant digits, bit-exact across
    platforms (integer-only Decimal division)."""
    with localcontext() as ctx:
        ctx.prec = sig
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def omega(n: int, q: int) -> Fraction:
    """prod_{i=1..n} (1 - q^-i); omega(0, q) = 1."""
    if n < 0 or q < 2:
        raise ValueError("need n >= 0 and q >= 2")
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= 1 - Fraction(1, q) ** i
    return out


def gl_order(n: int, q: int) -> int:
    v = Fraction(q) ** (n * n) * omega(n, q)
    assert v.denominator == 1
    return v.numerator


class Orders(NamedTuple):
    m_order: int     # |M(V)_U| = q^(n^2 - nr + r^2)
    glu_order: int   # |GL(V)_U| = |M(V)_U| omega(r, q) omega(n-r, q)
    gl_order: int    # |GL(n, q)| = q^(n^2) omega(n, q)


def orders(n: int, r: int, q: int) -> Orders:
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    m = q ** (n * n - n * r + r * r)
    glu = Fraction(m) * omega(r, q) * omega(n - r, q)
    assert glu.denominator == 1
    return Orders(m, glu.numerator, gl_order(n, q))


def qbinom(r: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^r."""
    if not 0 <= d <= r:
        raise ValueError(f"need 0 <= d <= r, got d={d}, r={r}")
    v = Fraction(1)
    for i in range(d):
        v *= Fraction(q ** r - q ** i, q ** d - q ** i)
    assert v.denominator == 1
    return v.numerator


def coprime_count(r: int, s: int, q: int) -> int:
    """Coprime ordered pairs of monic polynomials of degrees exactly (r, s):
    q^(r+s)(1 - 1/q) when rs > 0, q^(r+s) when rs = 0."""
    if r < 0 or s < 0:
        raise ValueError("degrees must be >= 0")
    if r == 0 or s == 0:
        return q ** (r + s)
    return q ** (r + s) - q ** (r + s - 1)


def coprime_count_recurrence(r: int, s: int, q: int) -> int:
    """Same count via the recurrence c(r,s) = q^(r+s) - sum_k q^k c(r-k, s-k)."""
    if r < 0 or s < 0:
        raise ValueError("degrees must be >= 0")

    @functools.lru_cache(maxsize=None)
    def c(a: int, b: int) -> int:
        if a == 0 or b == 0:
            return q ** (a + b)
        return q ** (a + b) - sum(q ** k * c(a - k, b - k)
                                  for k in range(1, min(a, b) + 1))

    return c(r, s)


def coprime_avoiding_lower(r: int, s: int, d: int, q: int) -> int:
    """Lower bound q^(r+s)(1 - q^-1 - 2q^-d + 2q^-2d) for the number of
    coprime monic pairs (a, b) with gcd(f, ab) = 1, any f irreducible of
    degree d; floored and clamped at 0 (it is a bound on a count)."""
    if not 1 <= d <= min(r, s):
        raise ValueError(f"need 1 <= d <= min(r, s), got d={d}, r={r}, s={s}")
    qi = Fraction(1, q)
    val = Fraction(q) ** (r + s) * (1 - qi - 2 * qi ** d + 2 * qi ** (2 * d))
    return max(0, math.floor(val))


def centralizer_double_companion(d: int, q: int) -> int:
    """Order (q^d - 1)^2 q^d of the centralizer of diag(C(f), C(f)), f
    irreducible of degree d, in the unit group of the stabilizer of U_0."""
    if d < 1 or q < 2:
        raise ValueError("need d >= 1 and q >= 2")
    return (q ** d - 1) ** 2 * q ** d


def class_size_double_companion(d: int, q: int) -> int:
    """Conjugacy class size q^(3(d^2-d)) omega(d,q)^2 / (1 - q^-d)^2."""
    if d < 1 or q < 2:
        raise ValueError("need d >= 1 and q >= 2")
    v = (Fraction(q) ** (3 * (d * d - d)) * omega(d, q) ** 2
         / (1 - Fraction(1, q) ** d) ** 2)
    assert v.denominator == 1
    return v.numerator


def np_bounds(d: int, q: int) -> tuple[Fraction, Fraction]:
    """Bounds on the non-cyclic density in the full algebra M(d, q):
    q^-3/(1+q^-1) < P < q^-3/((1-q^-1)(1-q^-2)) for d >= 2; P = 0 for d = 1."""
    if d < 1 or q < 2:
        raise ValueError("need d >= 1 and q >= 2")
    if d == 1:
        return Fraction(0), Fraction(0)
    qi = Fraction(1, q)
    return qi ** 3 / (1 + qi), qi ** 3 / ((1 - qi) * (1 - qi ** 2))


def np_bounds_simple(d: int, q: int) -> tuple[Fraction, Fraction]:
    """The simplified sandwich (2/3) q^-3 <= P <= (8/3) q^-3 (0 for d = 1)."""
    if d < 1 or q < 2:
        raise ValueError("need d >= 1 and q >= 2")
    if d == 1:
        return Fraction(0), Fraction(0)
    qi3 = Fraction(1, q) ** 3
    return Fraction(2, 3) * qi3, Fraction(8, 3) * qi3


class Pi3Upper(NamedTuple):
    finite_sum: Fraction
    closed_form: Fraction


def pi3_upper(n: int, r: int, q: int) -> Pi3Upper:
    """Upper bounds for n_3/|M(V)_U|: the finite sum
    q^-2/(1-q^-1)^2 + sum_{d=2..min(r,n-r)} ((q^d - q)/d) q^-3d/(1-q^-d)^2
    and the closed form q^-2 (1 + 58 q^-1 / 9)."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    qi = Fraction(1, q)
    finite = qi ** 2 / (1 - qi) ** 2
    for d in range(2, min(r, n - r) + 1):
        finite += Fraction(q ** d - q, d) * qi ** (3 * d) / (1 - qi ** d) ** 2
    closed = qi ** 2 * (1 + Fraction(58, 9) * qi)
    return Pi3Upper(finite, closed)


def pi3_lower(n: int, r: int, q: int) -> Fraction:
    """Lower bound for n_3/|M(V)_U|, after the r <-> n-r symmetry:
    exactly q^-2 for n = 2; q^-2 (1-q^-2-q^-3-q^-4)^2 (1-q^-1) when
    min(r, n-r) = 1; q^-2 (1 - 3q^-1 + 4q^-3) when min(r, n-r) >= 2."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    qi = Fraction(1, q)
    m = min(r, n - r)
    if n == 2:
        return qi ** 2
    if m == 1:
        return qi ** 2 * (1 - qi ** 2 - qi ** 3 - qi ** 4) ** 2 * (1 - qi)
    return qi ** 2 * (1 - 3 * qi + 4 * qi ** 3)


class TheoremBounds(NamedTuple):
    lower: Fraction
    upper: Fraction
    upper_vacuous: bool


def theorem_bounds(n: int, r: int, q: int) -> TheoremBounds:
    """The density sandwich q^-2(1 - (4/3)q^-1) <= pi <= q^-2(1 + (35/3)q^-1);
    the upper bound is flagged vacuous when it reaches 1 (q = 2)."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    qi = Fraction(1, q)
    lower = qi ** 2 * (1 - Fraction(4, 3) * qi)
    upper = qi ** 2 * (1 + Fraction(35, 3) * qi)
    return TheoremBounds(lower, upper, upper >= 1)


def pentagonal_check(q: int, n_max: int) -> bool:
    """Check omega(n, q) > 1 - q^-1 - q^-2 + q^-5 for all n <= n_max,
    in exact rational arithmetic."""
    if q < 2:
        raise ValueError("need q >= 2")
    qi = Fraction(1, q)
    rhs = 1 - qi - qi ** 2 + qi ** 5
    w = Fraction(1)
    for i in range(1, n_max + 1):
        w *= 1 - qi ** i
        if w <= rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# limiting proportions of cyclic matrices as dim(V) -> infinity, truncated
# at q^-7; hard-coded reference data, never recomputed (coefficient i
# multiplies q^-i)

_TABLE_ALGEBRA = {
    1: (1, 0, -1, -2, -1, 0, 2, 3),
    2: (1, 0, -1, -4, -1, 4, 5, 4),
    3: (1, 0, -1, -4, -3, 4, 11, 8),
    4: (1, 0, -1, -4, -3, 2, 11, 14),
    5: (1, 0, -1, -4, -3, 2, 9, 14),
    6: (1, 0, -1, -4, -3, 2, 9, 12),
    7: (1, 0, -1, -4, -3, 2, 9, 12),
}

_TABLE_GROUP = {
    1: (1, 0, -1, -2, 0, 1, 3, 1),
    2: (1, 0, -1, -3, 1, 3, 4, -2),
    3: (1, 0, -1, -3, 1, 4, 4, -5),
    4: (1, 0, -1, -3, 1, 4, 4, -6),
    5: (1, 0, -1, -3, 1, 4, 4, -6),
    6: (1, 0, -1, -3, 1, 4, 4, -6),
    7: (1, 0, -1, -3, 1, 4, 4, -6),
}


@dataclass(frozen=True)
class TableSeries:
    """Truncated power series in q^-1 for the limiting cyclic proportion."""

    r: int
    kind: str                 # "algebra" or "group"
    coeffs: tuple[int, ...]   # coeffs[i] multiplies q^-i
    order: int = 7            # truncation order marker

    def eval(self, q: int) -> Fraction:
        qi = Fraction(1, q)
        return sum((c * qi ** i for i, c in enumerate(self.coeffs)), Fraction(0))


def table_series(r: int, kind: str) -> TableSeries:
    if kind not in ("algebra", "group"):
        raise ValueError(f"kind must be 'algebra' or 'group', got {kind!r}")
    table = _TABLE_ALGEBRA if kind == "algebra" else _TABLE_GROUP
    if r not in table:
        raise ValueError(f"table rows cover 1 <= r <= 7, got r={r}")
    return TableSeries(r, kind, table[r])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundsReport:
    """Every bound for one (n, r, q) instance, exact."""

    n: int
    r: int
    q: int
    theorem_lower: Fraction
    theorem_upper: Fraction
    theorem_upper_vacuous: bool
    pi3_lower: Fraction
    pi3_upper: Fraction          # finite-sum form (the sharper checkable one)
    pi3_upper_closed: Fraction
    np_lower: Fraction           # Eq-style bounds for the ambient M(n, q)
    np_upper: Fraction
    m_order: int
    glu_order: int
    gl_order: int

    def to_json_dict(self) -> dict:
        def rat(x: Fraction) -> dict:
            return {"rational": rational_str(x), "decimal": decimal_str(x)}

        return {
            "n": self.n,
            "r": self.r,
            "q": self.q,
            "theorem_lower": rat(self.theorem_lower),
            "theorem_upper": rat(self.theorem_upper),
            "theorem_upper_vacuous": self.theorem_upper_vacuous,
            "pi3_lower": rat(self.pi3_lower),
            "pi3_upper": rat(self.pi3_upper),
            "pi3_upper_closed": rat(self.pi3_upper_closed),
            "np_lower": rat(self.np_lower),
            "np_upper": rat(self.np_upper),
            "orders": {
                "M(V)_U": str(self.m_order),
                "GL(V)_U": str(self.glu_order),
                "GL(n,q)": str(self.gl_order),
            },
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> BoundsReport:
        def rat(entry: dict) -> Fraction:
            return rational_from_str(entry["rational"])

        return cls(
            n=d["n"], r=d["r"], q=d["q"],
            theorem_lower=rat(d["theorem_lower"]),
            theorem_upper=rat(d["theorem_upper"]),
            theorem_upper_vacuous=d["theorem_upper_vacuous"],
            pi3_lower=rat(d["pi3_lower"]),
            pi3_upper=rat(d["pi3_upper"]),
            pi3_upper_closed=rat(d["pi3_upper_closed"]),
            np_lower=rat(d["np_lower"]),
            np_upper=rat(d["np_upper"]),
            m_order=int(d["orders"]["M(V)_U"]),
            glu_order=int(d["orders"]["GL(V)_U"]),
            gl_order=int(d["orders"]["GL(n,q)"]),
        )


def bounds_report(n: int, r: int, q: int) -> BoundsReport:
    tb = theorem_bounds(n, r, q)
    p3u = pi3_upper(n, r, q)
    np_lo, np_up = np_bounds(n, q)
    ords = orders(n, r, q)
    return BoundsReport(
        n=n, r=r, q=q,
        theorem_lower=tb.lower,
        theorem_upper=tb.upper,
        theorem_upper_vacuous=tb.upper_vacuous,
        pi3_lower=pi3_lower(n, r, q),
        pi3_upper=p3u.finite_sum,
        pi3_upper_closed=p3u.closed_form,
        np_lower=np_lo,
        np_upper=np_up,
        m_order=ords.m_order,
        glu_order=ords.glu_order,
        gl_order=ords.gl_order,
    )
