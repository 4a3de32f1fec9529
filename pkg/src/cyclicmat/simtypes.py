"""Similarity (conjugacy) types of k x k matrices over F_q with exact class
sizes.

A type assigns a partition to each monic irreducible polynomial, with total
weight sum(deg(f) * |lambda_f|) = k; its matrices are those with primary
rational canonical form diag(C(f^e) for each part e).  Class sizes come from
the classical unit-centralizer order

    c_lambda(Q) = Q^(sum of squared conjugate parts) * prod_i omega(m_i, Q)

per irreducible factor (Q = q^deg f, m_i = multiplicity of part i), so the
class of a type has |GL(k, q)| / prod_f c_lambda(q^deg f) members.  The
totals are identity-checked against q^(k^2) and |GL(k, q)| in tests.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .counting import gl_order, omega
from .gf import FieldSpec
from .matspace import Mat, block_diag, companion
from .polyring import Poly, irr_enumerate


@functools.lru_cache(maxsize=None)
def partitions(m: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of m as descending tuples, deterministic order."""
    if m == 0:
        return ((),)
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, maxpart: int, acc: list[int]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(remaining, maxpart), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(m, m, [])
    return tuple(out)


def conjugate_partition(lam: tuple[int, ...]) -> tuple[int, ...]:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


def unit_centralizer_order(lam: tuple[int, ...], Q: int) -> int:
    """Order of the unit group of the centralizer of a single-factor type
    with partition lam over the degree-d extension (Q = q^d)."""
    conj = conjugate_partition(lam)
    exp = sum(c * c for c in conj)
    mults: dict[int, int] = {}
    for part in lam:
        mults[part] = mults.get(part, 0) + 1
    v = Fraction(Q) ** exp
    for m in mults.values():
        v *= omega(m, Q)
    assert v.denominator == 1
    return v.numerator


@dataclass(frozen=True)
class SimType:
    """One GL(k, q)-conjugacy class of M(k, q)."""

    field: FieldSpec
    k: int
    factors: tuple[tuple[Poly, tuple[int, ...]], ...]

    @property
    def is_cyclic(self) -> bool:
        return all(len(lam) == 1 for _, lam in self.factors)

    @property
    def is_invertible(self) -> bool:
        # t divides the characteristic polynomial iff some f has zero
        # constant term, i.e. f = t
        return all(f.coeff_index(0) != 0 for f, _ in self.factors)

    @property
    def char_poly(self) -> Poly:
        out = Poly.one(self.field)
        for f, lam in self.factors:
            out = out * f ** sum(lam)
        return out

    @property
    def min_poly(self) -> Poly:
        out = Poly.one(self.field)
        for f, lam in self.factors:
            out = out * f ** lam[0]
        return out

    @property
    def class_size(self) -> int:
        return _class_size(self)

    def rep(self) -> Mat:
        """Representative matrix: block diagonal of C(f^e) over all parts."""
        blocks = [companion(f ** e) for f, lam in self.factors for e in lam]
        return block_diag(self.field, blocks)


@functools.lru_cache(maxsize=None)
def _class_size(tp: SimType) -> int:
    denom = 1
    for f, lam in tp.factors:
        denom *= unit_centralizer_order(lam, tp.field.q ** f.degree)
    gl = gl_order(tp.k, tp.field.q)
    assert gl % denom == 0
    return gl // denom


@functools.lru_cache(maxsize=None)
def matrix_types(k: int, field: FieldSpec) -> tuple[SimType, ...]:
    """All similarity types of k x k matrices over the field."""
    if k < 1:
        raise ValueError("need k >= 1")
    irr_by_deg = {d: irr_enumerate(d, field) for d in range(1, k + 1)}
    results: list[SimType] = []
    acc: list[tuple[Poly, tuple[int, ...]]] = []

    def rec(d: int, i: int, remaining: int):
        if remaining == 0:
            results.append(SimType(field, k, tuple(acc)))
            return
        if d > remaining:
            return
        polys = irr_by_deg[d]
        if i == len(polys):
            rec(d + 1, 0, remaining)
            return
        rec(d, i + 1, remaining)
        for s in range(1, remaining // d + 1):
            for lam in partitions(s):
                acc.append((polys[i], lam))
                rec(d, i + 1, remaining - d * s)
                acc.pop()

    rec(1, 0, k)
    return tuple(results)


def noncyclic_matrix_count(k: int, field: FieldSpec, invertible: bool = False) -> int:
    """Number of non-cyclic matrices in M(k, q) (or GL(k, q))."""
    return sum(tp.class_size for tp in matrix_types(k, field)
               if not tp.is_cyclic and (tp.is_invertible or not invertible))
