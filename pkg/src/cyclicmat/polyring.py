"""Polynomials over F_q: arithmetic, gcd, irreducibility, enumeration of
monic irreducibles, and companion matrices.

Coefficients are stored constant-term first as canonical element indices,
with no trailing zeros; the zero polynomial has an empty coefficient tuple
and degree -1 (kept distinct from constants via is_zero).
"""

from __future__ import annotations

import functools
from typing import Iterator, Sequence

from .gf import FieldElement, FieldSpec

ENUM_CAP = 1 << 16  # default cap on q^d for exhaustive enumerations


class Poly:
    """Immutable polynomial over a fixed finite field."""

    __slots__ = ("field", "_ci")

    def __init__(self, field: FieldSpec, coeffs: Sequence = ()):
        ci = []
        for c in coeffs:
            ci.append(field.element(c).index)
        while ci and ci[-1] == 0:
            ci.pop()
        self.field = field
        self._ci = tuple(ci)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec) -> Poly:
        return cls(field, ())

    @classmethod
    def one(cls, field: FieldSpec) -> Poly:
        return cls(field, (1,))

    @classmethod
    def t(cls, field: FieldSpec) -> Poly:
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, c=1) -> Poly:
        return cls(field, (0,) * degree + (c,))

    @classmethod
    def from_index_tuple(cls, field: FieldSpec, ci: tuple[int, ...]) -> Poly:
        p = cls.__new__(cls)
        p.field = field
        p._ci = ci
        return p

    @classmethod
    def from_string(cls, field: FieldSpec, text: str) -> Poly:
        return _poly_from_string(field, text)

    # -- basic structure ----------------------------------------------------

    @property
    def index_coeffs(self) -> tuple[int, ...]:
        return self._ci

    @property
    def coeffs(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, c) for c in self._ci)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial (see is_zero)."""
        return len(self._ci) - 1

    @property
    def is_zero(self) -> bool:
        return not self._ci

    @property
    def is_monic(self) -> bool:
        return bool(self._ci) and self._ci[-1] == 1

    @property
    def lc(self) -> FieldElement:
        if not self._ci:
            raise ValueError("zero polynomial has no leading coefficient")
        return FieldElement(self.field, self._ci[-1])

    def coeff_index(self, i: int) -> int:
        return self._ci[i] if 0 <= i < len(self._ci) else 0

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.field == self.field
                and other._ci == self._ci)

    def __hash__(self):
        return hash((self.field, self._ci))

    def __bool__(self):
        return bool(self._ci)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        return Poly(self.field, (other,))

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self._ci, other._ci
        n = max(len(a), len(b))
        out = [F.add_idx(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
               for i in range(n)]
        while out and out[-1] == 0:
            out.pop()
        return Poly.from_index_tuple(F, tuple(out))

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly.from_index_tuple(F, tuple(F.neg_idx(c) for c in self._ci))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self._ci, other._ci
        if not a or not b:
            return Poly.zero(F)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = F.add_idx(out[i + j], F.mul_idx(ai, bj))
        while out and out[-1] == 0:
            out.pop()
        return Poly.from_index_tuple(F, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self._ci)
        div = other._ci
        db = len(div) - 1
        inv_lead = F.inv_idx(div[-1])
        quo = [0] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            c = F.mul_idx(rem[-1], inv_lead)
            shift = len(rem) - 1 - db
            quo[shift] = c
            for j, dj in enumerate(div):
                if dj:
                    rem[shift + j] = F.sub_idx(rem[shift + j], F.mul_idx(c, dj))
            while rem and rem[-1] == 0:
                rem.pop()
        return (Poly.from_index_tuple(F, tuple(quo)),
                Poly.from_index_tuple(F, tuple(rem)))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        if self.is_zero or self._ci[-1] == 1:
            return self
        F = self.field
        inv = F.inv_idx(self._ci[-1])
        return Poly.from_index_tuple(F, tuple(F.mul_idx(c, inv) for c in self._ci))

    def eval(self, x) -> FieldElement:
        F = self.field
        xi = F.element(x).index
        acc = 0
        for c in reversed(self._ci):
            acc = F.add_idx(F.mul_idx(acc, xi), c)
        return FieldElement(F, acc)

    def divides(self, other: Poly) -> bool:
        return (other % self).is_zero

    def __str__(self):
        return _poly_to_string(self)

    def __repr__(self):
        return f"Poly({self.field!r}, {self})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    if a.field != b.field:
        raise ValueError("polynomials over different fields")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Returns (g, u, v) with u*a + v*b = g and g the monic gcd."""
    F = a.field
    r0, r1 = a, b
    u0, u1 = Poly.one(F), Poly.zero(F)
    v0, v1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if not r0.is_zero and r0._ci[-1] != 1:
        lead_inv = Poly(F, (F.inv_idx(r0._ci[-1]),))
        r0, u0, v0 = r0 * lead_inv, u0 * lead_inv, v0 * lead_inv
    return r0, u0, v0


def poly_powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(base.field) % mod
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def monic_polys(d: int, field: FieldSpec, cap: int = ENUM_CAP) -> Iterator[Poly]:
    """All monic degree-d polynomials, ascending by coefficient index encoding."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    if field.q ** d > cap:
        raise ValueError(f"enumeration cap exceeded: q^d = {field.q ** d} > {cap}")
    q = field.q
    for idx in range(q ** d):
        ci = []
        rest = idx
        for _ in range(d):
            ci.append(rest % q)
            rest //= q
        ci.append(1)
        yield Poly.from_index_tuple(field, tuple(ci))


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible_trial(f: Poly) -> bool:
    """Trial division against enumerated monic irreducibles of degree <= deg/2."""
    d = f.degree
    for e in range(1, d // 2 + 1):
        for g in irr_enumerate(e, f.field):
            if (f % g).is_zero:
                return False
    return True


def _is_irreducible_rabin(f: Poly) -> bool:
    """Rabin's distinct-degree criterion: t^(q^d) = t mod f and, for every
    prime divisor l of d, gcd(t^(q^(d/l)) - t, f) = 1."""
    F = f.field
    d = f.degree
    t = Poly.t(F)
    for ell in _prime_factors(d):
        h = poly_powmod(t, F.q ** (d // ell), f) - (t % f)
        if poly_gcd(h, f).degree != 0:
            return False
    return poly_powmod(t, F.q ** d, f) == t % f


def is_irreducible(f: Poly) -> bool:
    """True iff the monic polynomial f (degree >= 1) is irreducible."""
    if not f.is_monic:
        raise ValueError("irreducibility test requires a monic polynomial")
    if f.degree < 1:
        raise ValueError("irreducibility test requires degree >= 1")
    if f.degree == 1:
        return True
    # trial division is the ground-truth route on small inputs; Rabin's test
    # covers the rest and must agree on the overlap (enforced by tests)
    if f.degree <= 8 and f.field.q ** ((f.degree // 2) or 1) <= ENUM_CAP:
        return _is_irreducible_trial(f)
    return _is_irreducible_rabin(f)


@functools.lru_cache(maxsize=None)
def _irr_list(field: FieldSpec, d: int) -> tuple[Poly, ...]:
    return tuple(f for f in monic_polys(d, field) if is_irreducible(f))


def irr_enumerate(d: int, field: FieldSpec, cap: int = ENUM_CAP) -> tuple[Poly, ...]:
    """All monic irreducibles of degree d, ascending by coefficient encoding."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    if field.q ** d > cap:
        raise ValueError(f"enumeration cap exceeded: q^d = {field.q ** d} > {cap}")
    return _irr_list(field, d)


def irreducible_count(d: int, q: int) -> int:
    """Number of monic irreducibles of degree d over F_q (Moebius necklace count)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    total = 0
    for e in range(1, d + 1):
        if d % e:
            continue
        mu = _moebius(e)
        if mu:
            total += mu * q ** (d // e)
    assert total % d == 0
    return total // d


def _moebius(n: int) -> int:
    mu = 1
    for p in _prime_factors(n):
        if n % (p * p) == 0:
            return 0
        mu = -mu
    return mu


def companion(a: Poly):
    """The (row) companion matrix of monic a: superdiagonal ones, last row
    the negated coefficients of a."""
    from . import matspace  # deferred: matspace imports this module

    if not a.is_monic:
        raise ValueError("companion matrix requires a monic polynomial")
    r = a.degree
    if r < 1:
        raise ValueError("companion matrix requires degree >= 1")
    F = a.field
    rows = [[0] * r for _ in range(r)]
    for i in range(r - 1):
        rows[i][i + 1] = 1
    for j in range(r):
        rows[r - 1][j] = F.neg_idx(a.coeff_index(j))
    return matspace.Mat(F, rows)


# -- brute-force oracles for the coprime-pair counts ------------------------

def count_coprime_pairs(field: FieldSpec, r: int, s: int) -> int:
    """Brute-force count of coprime ordered pairs of monic polynomials of
    degrees exactly (r, s)."""
    total = 0
    bs = list(monic_polys(s, field))
    for a in monic_polys(r, field):
        for b in bs:
            if poly_gcd(a, b).degree == 0:
                total += 1
    return total


def count_coprime_pairs_avoiding(field: FieldSpec, r: int, s: int, f: Poly) -> int:
    """Brute-force count of coprime monic pairs (a, b) with gcd(f, ab) = 1."""
    total = 0
    bs = [b for b in monic_polys(s, field) if not (b % f).is_zero]
    for a in monic_polys(r, field):
        if (a % f).is_zero:
            continue
        for b in bs:
            if poly_gcd(a, b).degree == 0:
                total += 1
    return total


# -- text form ---------------------------------------------------------------

def _coeff_text(F: FieldSpec, idx: int) -> str:
    s = F.format_element(idx)
    return f"({s})" if "+" in s or "*" in s else s


def _poly_to_string(f: Poly) -> str:
    if f.is_zero:
        return "0"
    F = f.field
    terms = []
    for i, c in enumerate(f._ci):
        if c == 0:
            continue
        if i == 0:
            terms.append(_coeff_text(F, c))
        else:
            base = "t" if i == 1 else f"t^{i}"
            terms.append(base if c == 1 else f"{_coeff_text(F, c)}*{base}")
    return "+".join(terms)


def _poly_from_string(field: FieldSpec, text: str) -> Poly:
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return Poly.zero(field)
    # split on '+' at paren depth 0
    terms, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parens in {text!r}")
        if ch == "+" and depth == 0:
            terms.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced parens in {text!r}")
    terms.append("".join(cur))

    coeffs: dict[int, int] = {}
    for term in terms:
        term = term.strip()
        if not term:
            raise ValueError(f"bad polynomial text {text!r}")
        if "t" not in term:
            c, e = term, 0
        else:
            cpart, _, tpart = term.partition("t")
            cpart = cpart.rstrip("*").strip()
            c = cpart if cpart else "1"
            if tpart.startswith("^"):
                e = int(tpart[1:])
            elif not tpart:
                e = 1
            else:
                raise ValueError(f"bad polynomial text {text!r}")
        c = c.strip()
        if c.startswith("(") and c.endswith(")"):
            c = c[1:-1]
        idx = field.parse_element(c)
        coeffs[e] = field.add_idx(coeffs.get(e, 0), idx)
    deg = max(coeffs)
    ci = [coeffs.get(i, 0) for i in range(deg + 1)]
    while ci and ci[-1] == 0:
        ci.pop()
    return Poly.from_index_tuple(field, tuple(ci))
