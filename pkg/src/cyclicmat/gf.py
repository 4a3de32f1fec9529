"""Exact arithmetic in finite fields F_q with q = p^k.

Elements are canonical: an integer in [0, p) for prime fields, a reduced
coefficient vector over F_p (constant term first) for extension fields.
Every element also has a stable integer *index* in [0, q), the base-p
encoding of its coefficient vector with the constant term as the least
significant digit.  Indices are what the matrix kernels and all
enumeration orders use; index 0 is zero and index 1 is one in every field.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

FIELD_ORDER_CAP = 1 << 16   # largest supported q; desk-scale guard
ENUM_CAP = 1 << 16          # default cap for element enumeration
TABLE_CAP = 256             # largest q given full Cayley tables


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def parse_prime_power(text) -> tuple[int, int]:
    """Parse "p^k" or a plain prime-power integer into (p, k)."""
    if isinstance(text, int):
        q = text
    else:
        s = str(text).strip()
        if "^" in s:
            base, _, exp = s.partition("^")
            p, k = int(base), int(exp)
            if not is_prime(p) or k < 1:
                raise ValueError(f"not a prime power: {text!r}")
            return p, k
        q = int(s)
    if q < 2:
        raise ValueError(f"not a prime power: {text!r}")
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1 or not is_prime(p):
                raise ValueError(f"not a prime power: {text!r}")
            return p, k
    raise ValueError(f"not a prime power: {text!r}")


# ---------------------------------------------------------------------------
# Dense polynomial helpers over F_p, used to bootstrap extension fields.
# Coefficient lists are constant-term first with no trailing zeros.

def _fp_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    quo = [0] * max(len(rem) - db, 0)
    while len(rem) - 1 >= db and rem:
        c = (rem[-1] * inv_lead) % p
        shift = len(rem) - 1 - db
        quo[shift] = c
        for j, bj in enumerate(b):
            rem[shift + j] = (rem[shift + j] - c * bj) % p
        _fp_trim(rem)
    return _fp_trim(quo), rem


def _fp_xgcd(a: Sequence[int], b: Sequence[int], p: int):
    """Extended Euclid: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = list(a), list(b)
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = _fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, _fp_trim([(x - y) % p for x, y in
                               _zip_longest(u0, _fp_mul(q, u1, p))])
        v0, v1 = v1, _fp_trim([(x - y) % p for x, y in
                               _zip_longest(v0, _fp_mul(q, v1, p))])
    if r0:
        inv = pow(r0[-1], p - 2, p)
        r0 = [(c * inv) % p for c in r0]
        u0 = [(c * inv) % p for c in u0]
        v0 = [(c * inv) % p for c in v0]
    return r0, u0, v0


def _zip_longest(a: Sequence[int], b: Sequence[int]):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def _fp_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg(f)/2."""
    d = len(f) - 1
    if d < 1:
        return False
    for e in range(1, d // 2 + 1):
        for idx in range(p ** e):
            div = _digits(idx, p, e) + [1]
            _, rem = _fp_divmod(f, div, p)
            if not rem:
                return False
    return True


def _digits(idx: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(idx % p)
        idx //= p
    return out


def _undigits(coeffs: Iterable[int], p: int) -> int:
    idx = 0
    for c in reversed(list(coeffs)):
        idx = idx * p + c
    return idx


def _least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k in ascending index order."""
    for idx in range(p ** k):
        f = _digits(idx, p, k) + [1]
        if _fp_is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q, q = p^k, with an explicit modulus for k > 1."""

    p: int
    k: int
    modulus: tuple[int, ...] | None = None  # length k+1, constant first, monic
    q: int = dc_field(init=False, compare=False, default=0)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise ValueError(f"extension degree must be >= 1, got {self.k}")
        q = self.p ** self.k
        if q > FIELD_ORDER_CAP:
            raise ValueError(f"field order {q} exceeds cap {FIELD_ORDER_CAP}")
        if self.k == 1:
            if self.modulus is not None:
                raise ValueError("prime field takes no modulus")
        else:
            if self.modulus is None:
                object.__setattr__(self, "modulus", _least_irreducible(self.p, self.k))
            else:
                m = tuple(int(c) % self.p for c in self.modulus)
                if len(m) != self.k + 1 or m[-1] != 1:
                    raise ValueError("modulus must be monic of degree k")
                if not _fp_is_irreducible(list(m), self.p):
                    raise ValueError("modulus is reducible over F_p")
                object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "q", q)

    def __repr__(self):
        if self.k == 1:
            return f"F{self.p}"
        return f"F{self.q}({self.modulus_str()})"

    def modulus_str(self) -> str:
        """The modulus as a polynomial in t, e.g. "1+t+t^2"."""
        if self.modulus is None:
            return ""
        terms = []
        for i, c in enumerate(self.modulus):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                base = "t" if i == 1 else f"t^{i}"
                terms.append(base if c == 1 else f"{c}*{base}")
        return "+".join(terms) if terms else "0"

    # -- element construction and conversion -------------------------------

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def element(self, v) -> FieldElement:
        """Coerce v (index, value, coefficient sequence, or element) into the field."""
        if isinstance(v, FieldElement):
            if v.field != self:
                raise ValueError(f"element of {v.field!r} used in {self!r}")
            return v
        if isinstance(v, (tuple, list)):
            return FieldElement(self, self.from_coeffs(v))
        idx = int(v)
        if self.k == 1:
            return FieldElement(self, idx % self.p)
        if not 0 <= idx < self.q:
            raise ValueError(f"index {idx} out of range for {self!r}")
        return FieldElement(self, idx)

    def elements(self, cap: int = ENUM_CAP) -> list[FieldElement]:
        """All q elements, by ascending canonical index."""
        if self.q > cap:
            raise ValueError(f"enumeration cap exceeded: q={self.q} > {cap}")
        return [FieldElement(self, i) for i in range(self.q)]

    def to_coeffs(self, idx: int) -> tuple[int, ...]:
        return tuple(_digits(idx, self.p, self.k))

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        cs = [int(c) % self.p for c in coeffs]
        if len(cs) > self.k:
            raise ValueError("coefficient vector longer than extension degree")
        cs += [0] * (self.k - len(cs))
        return _undigits(cs, self.p)

    # -- index-level arithmetic --------------------------------------------

    def add_idx(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        t = _tables(self)
        if t is not None:
            return t[0][a][b]
        p = self.p
        return _undigits([(x + y) % p for x, y in
                          zip(_digits(a, p, self.k), _digits(b, p, self.k))], p)

    def sub_idx(self, a: int, b: int) -> int:
        return self.add_idx(a, self.neg_idx(b))

    def neg_idx(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        return _undigits([(-x) % p for x in _digits(a, p, self.k)], p)

    def mul_idx(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        t = _tables(self)
        if t is not None:
            return t[1][a][b]
        return self._mul_slow(a, b)

    def _mul_slow(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        prod = _fp_mul(_fp_trim(_digits(a, p, k)), _fp_trim(_digits(b, p, k)), p)
        _, rem = _fp_divmod(prod, list(self.modulus), p)
        return _undigits(rem + [0] * (k - len(rem)), p)

    def inv_idx(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self!r}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        t = _tables(self)
        if t is not None:
            return t[2][a]
        p, k = self.p, self.k
        g, u, _ = _fp_xgcd(_fp_trim(_digits(a, p, k)), list(self.modulus), p)
        assert g == [1]
        return _undigits(u + [0] * (k - len(u)), p)

    def div_idx(self, a: int, b: int) -> int:
        return self.mul_idx(a, self.inv_idx(b))

    def pow_idx(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow_idx(self.inv_idx(a), -e)
        r = 1
        base = a
        while e:
            if e & 1:
                r = self.mul_idx(r, base)
            base = self.mul_idx(base, base)
            e >>= 1
        return r

    # -- element text form ("a" is the residue of t mod the modulus) -------

    def format_element(self, idx: int) -> str:
        if self.k == 1:
            return str(idx % self.p)
        coeffs = self.to_coeffs(idx)
        terms = []
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                base = "a" if i == 1 else f"a^{i}"
                terms.append(base if c == 1 else f"{c}*{base}")
        return "+".join(terms) if terms else "0"

    def parse_element(self, text: str) -> int:
        s = text.strip()
        if not s:
            raise ValueError("empty element text")
        if self.k == 1:
            return int(s) % self.p
        coeffs = [0] * self.k
        for term in s.split("+"):
            term = term.strip()
            if not term:
                raise ValueError(f"bad element text {text!r}")
            if "a" not in term:
                coeffs[0] = (coeffs[0] + int(term)) % self.p
                continue
            cpart, _, apart = term.partition("a")
            cpart = cpart.rstrip("*").strip()
            c = int(cpart) if cpart else 1
            e = 1
            if apart.startswith("^"):
                e = int(apart[1:])
            elif apart:
                raise ValueError(f"bad element text {text!r}")
            if not 0 <= e < self.k:
                raise ValueError(f"generator power {e} out of range in {text!r}")
            coeffs[e] = (coeffs[e] + c) % self.p
        return _undigits(coeffs, self.p)


@functools.lru_cache(maxsize=None)
def _tables(fld: FieldSpec):
    """Cayley tables (add, mul, inv) over indices, for small extension fields."""
    if fld.q > TABLE_CAP:
        return None
    q = fld.q
    add = [[0] * q for _ in range(q)]
    mul = [[0] * q for _ in range(q)]
    inv = [0] * q
    p, k = fld.p, fld.k
    for a in range(q):
        da = _digits(a, p, k)
        for b in range(a, q):
            db = _digits(b, p, k)
            s = _undigits([(x + y) % p for x, y in zip(da, db)], p)
            add[a][b] = add[b][a] = s
            m = fld._mul_slow(a, b)
            mul[a][b] = mul[b][a] = m
            if m == 1:
                inv[a], inv[b] = b, a
    return add, mul, inv


@dataclass(frozen=True)
class FieldElement:
    """A field element in canonical form; index is the base-p encoding."""

    field: FieldSpec
    index: int

    @property
    def value(self):
        """Canonical representative: int for k=1, coefficient tuple for k>1."""
        if self.field.k == 1:
            return self.index
        return self.field.to_coeffs(self.index)

    def __bool__(self):
        return self.index != 0

    def _check(self, other) -> FieldElement:
        if not isinstance(other, FieldElement):
            return self.field.element(other)
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.add_idx(self.index, other.index))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.sub_idx(self.index, other.index))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_idx(self.index))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.mul_idx(self.index, other.index))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElement(self.field, self.field.div_idx(self.index, other.index))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_idx(self.index, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv_idx(self.index))

    def __str__(self):
        return self.field.format_element(self.index)

    def __repr__(self):
        return f"{self.field!r}:{self}"


def field_new(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build F_{p^k}; generates the least irreducible modulus when absent."""
    return FieldSpec(p, k, tuple(int(c) for c in modulus) if modulus is not None else None)


def field_from_order(q) -> FieldSpec:
    """Build F_q from a prime power given as int or "p^k" text."""
    p, k = parse_prime_power(q)
    return FieldSpec(p, k)
