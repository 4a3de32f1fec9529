"""Matrices over F_q, the stabilizer algebra M(V)_U, characteristic and
minimal polynomials, the cyclic test, Krylov spans, polynomial kernels,
and uniform sampling.

Vectors are rows and act on the left (v -> vX); U is always the span of
the first r standard basis rows.  Entries are exchanged as canonical
element indices; FieldElement values are accepted on input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _linalg as la
from .gf import FieldElement, FieldSpec
from .polyring import Poly, companion, is_irreducible, poly_gcd

Row = tuple[int, ...]


def _coerce_entry(field: FieldSpec, v) -> int:
    if isinstance(v, FieldElement):
        if v.field != field:
            raise ValueError("entry from a different field")
        return v.index
    if isinstance(v, (int, np.integer)):
        iv = int(v)
        if field.k == 1:
            return iv % field.p
        if not 0 <= iv < field.q:
            raise ValueError(f"index {iv} out of range for {field!r}")
        return iv
    raise TypeError(f"cannot use {type(v).__name__} as a matrix entry")


def _coerce_vector(field: FieldSpec, v) -> Row:
    return tuple(_coerce_entry(field, x) for x in v)


class Mat:
    """Immutable square matrix over a fixed finite field."""

    __slots__ = ("field", "n", "_a")

    def __init__(self, field: FieldSpec, rows):
        if isinstance(rows, np.ndarray) and field.k == 1:
            a = (rows.astype(np.int64) % field.p)
        else:
            data = [[_coerce_entry(field, v) for v in row] for row in rows]
            a = np.array(data, dtype=np.int64) if data else np.zeros((0, 0), np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"matrix must be square, got shape {a.shape}")
        a.setflags(write=False)
        self.field = field
        self.n = int(a.shape[0])
        self._a = a

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Mat:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, n: int) -> Mat:
        return cls(field, np.zeros((n, n), dtype=np.int64))

    @classmethod
    def from_string(cls, field: FieldSpec, text: str) -> Mat:
        return mat_from_string(field, text)

    @property
    def array(self) -> np.ndarray:
        """Read-only int64 array of canonical indices."""
        return self._a

    def rows(self) -> tuple[Row, ...]:
        return tuple(tuple(int(x) for x in row) for row in self._a)

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.field, int(self._a[i, j]))

    def __eq__(self, other):
        return (isinstance(other, Mat) and other.field == self.field
                and other.n == self.n and bool(np.array_equal(other._a, self._a)))

    def __hash__(self):
        return hash((self.field, self.rows()))

    def _check(self, other: Mat):
        if not isinstance(other, Mat):
            raise TypeError("expected a Mat")
        if other.field != self.field:
            raise ValueError("matrices over different fields")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: Mat) -> Mat:
        self._check(other)
        F = self.field
        if F.k == 1:
            return Mat(F, (self._a + other._a) % F.p)
        add = F.add_idx
        return Mat(F, [[add(int(a), int(b)) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self._a, other._a)])

    def __sub__(self, other: Mat) -> Mat:
        self._check(other)
        F = self.field
        if F.k == 1:
            return Mat(F, (self._a - other._a) % F.p)
        sub = F.sub_idx
        return Mat(F, [[sub(int(a), int(b)) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self._a, other._a)])

    def __matmul__(self, other: Mat) -> Mat:
        self._check(other)
        F = self.field
        if F.k == 1:
            return Mat(F, la.matmul_p(self._a, other._a, F.p))
        return Mat(F, la.matmul_g(self._a, other._a, F))

    def __pow__(self, e: int) -> Mat:
        if e < 0:
            raise ValueError("negative matrix power")
        F = self.field
        if F.k == 1:
            return Mat(F, la.mat_pow_p(self._a, e, F.p))
        out = Mat.identity(F, self.n)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def scale(self, c) -> Mat:
        F = self.field
        ci = _coerce_entry(F, c)
        if F.k == 1:
            return Mat(F, (self._a * ci) % F.p)
        mul = F.mul_idx
        return Mat(F, [[mul(ci, int(x)) for x in row] for row in self._a])

    def __mul__(self, c) -> Mat:
        return self.scale(c)

    __rmul__ = __mul__

    def transpose(self) -> Mat:
        return Mat(self.field, self._a.T)

    def __str__(self):
        return mat_to_string(self)

    def __repr__(self):
        return f"Mat({self.field!r}, {self})"


def identity(field: FieldSpec, n: int) -> Mat:
    return Mat.identity(field, n)


def vec_mat(v, X: Mat) -> Row:
    """Row vector times matrix."""
    F = X.field
    vi = _coerce_vector(F, v)
    if len(vi) != X.n:
        raise ValueError("vector length does not match matrix dimension")
    if F.k == 1:
        return tuple(int(x) for x in
                     (np.asarray(vi, dtype=np.int64) @ X._a) % F.p)
    return tuple(la.matvec_g(list(vi), X._a, F))


def det(X: Mat) -> FieldElement:
    F = X.field
    if F.k == 1:
        return FieldElement(F, la.det_p(X._a, F.p))
    return FieldElement(F, la.det_g(X._a, F))


def inverse(X: Mat) -> Mat:
    F = X.field
    if F.k == 1:
        return Mat(F, la.inv_p(X._a, F.p))
    return Mat(F, la.inv_g(X._a, F))


def row_reduce(field: FieldSpec, rows: Iterable[Sequence]) -> tuple[Row, ...]:
    """Reduced row echelon basis of the span, zero rows dropped."""
    data = [list(_coerce_vector(field, r)) for r in rows]
    if not data:
        return ()
    if field.k == 1:
        R, pivots = la.rref_p(np.array(data, dtype=np.int64), field.p)
        return tuple(tuple(int(x) for x in R[i]) for i in range(len(pivots)))
    R, pivots = la.rref_g(data, field)
    return tuple(tuple(row) for row in R[: len(pivots)])


def rank(field: FieldSpec, rows: Iterable[Sequence]) -> int:
    return len(row_reduce(field, rows))


# ---------------------------------------------------------------------------
# characteristic / minimal polynomials and cyclicity


def char_poly(X: Mat) -> Poly:
    """det(tI - X), computed by Hessenberg reduction (exact, any characteristic)."""
    return Poly.from_index_tuple(X.field, la.charpoly_hessenberg(X._a, X.field))


def char_poly_cofactor(X: Mat) -> Poly:
    """Cofactor-expansion oracle for char_poly, n <= 4 only."""
    n = X.n
    if n > 4:
        raise ValueError("cofactor oracle is limited to n <= 4")
    F = X.field
    t = Poly.t(F)
    entries = [[t - int(X._a[i, j]) if i == j else Poly(F, (F.neg_idx(int(X._a[i, j])),))
                for j in range(n)] for i in range(n)]

    def pdet(rows, cols):
        if len(cols) == 1:
            return entries[rows[0]][cols[0]]
        acc = Poly.zero(F)
        for k, c in enumerate(cols):
            minor = pdet(rows[1:], cols[:k] + cols[k + 1:])
            term = entries[rows[0]][c] * minor
            acc = acc + term if k % 2 == 0 else acc - term
        return acc

    return pdet(tuple(range(n)), tuple(range(n)))


def min_poly(X: Mat) -> Poly:
    """Least monic m with m(X) = 0: the lcm of the order polynomials of the
    standard basis vectors."""
    F = X.field
    if F.k == 1:
        return Poly.from_index_tuple(F, la.minpoly_p(X._a, F.p))
    return Poly.from_index_tuple(F, la.minpoly_g(X._a, F))


def is_cyclic(X: Mat) -> bool:
    """True iff the minimal polynomial has full degree n."""
    if X.n == 0:
        return True
    F = X.field
    if F.k == 1:
        return len(la.minpoly_p(X._a, F.p)) - 1 == X.n
    return len(la.minpoly_g(X._a, F)) - 1 == X.n


def order_poly(v, X: Mat) -> Poly:
    """Least monic g with v g(X) = 0 (the order polynomial of v)."""
    F = X.field
    vi = _coerce_vector(F, v)
    if len(vi) != X.n:
        raise ValueError("vector length does not match matrix dimension")
    if not any(vi):
        return Poly.one(F)
    if F.k == 1:
        return Poly.from_index_tuple(
            F, la.order_poly_p(np.asarray(vi, dtype=np.int64), X._a, F.p))
    return Poly.from_index_tuple(F, la.order_poly_g(list(vi), X._a, F))


def krylov_span(v, X: Mat) -> tuple[Row, ...]:
    """Row-reduced basis of the cyclic submodule <v, vX, vX^2, ...>."""
    F = X.field
    vi = _coerce_vector(F, v)
    if len(vi) != X.n:
        raise ValueError("vector length does not match matrix dimension")
    if not any(vi):
        return ()
    d = order_poly(vi, X).degree
    rows = []
    w = vi
    for _ in range(d):
        rows.append(w)
        w = vec_mat(w, X)
    return row_reduce(F, rows)


def eval_poly_at_mat(f: Poly, X: Mat) -> Mat:
    """f(X) by Horner's rule."""
    if f.field != X.field:
        raise ValueError("polynomial and matrix over different fields")
    F = X.field
    n = X.n
    acc = Mat.zeros(F, n)
    ident = Mat.identity(F, n)
    for c in reversed(f.index_coeffs):
        acc = acc @ X
        if c:
            acc = acc + ident.scale(c)
    return acc


def kernel_of_poly(f: Poly, X: Mat) -> tuple[Row, ...]:
    """Row-reduced basis of ker f(X) = {v : v f(X) = 0}; always X-invariant."""
    M = eval_poly_at_mat(f, X)
    F = X.field
    if F.k == 1:
        rows = la.left_nullspace_p(M._a, F.p)
        return tuple(tuple(int(x) for x in r) for r in rows)
    return tuple(tuple(r) for r in la.left_nullspace_g(M._a, F))


# ---------------------------------------------------------------------------
# the stabilizer algebra M(V)_U


@dataclass(frozen=True)
class StabMat:
    """Block form (A 0 / C B) of a matrix stabilizing U = <e_1, ..., e_r>."""

    A: Mat
    B: Mat
    C: tuple[Row, ...]

    def __post_init__(self):
        if self.A.field != self.B.field:
            raise ValueError("blocks over different fields")
        r, s = self.A.n, self.B.n
        if r < 1 or s < 1:
            raise ValueError("StabMat requires 0 < r < n")
        C = tuple(_coerce_vector(self.A.field, row) for row in self.C)
        if len(C) != s or any(len(row) != r for row in C):
            raise ValueError(f"C block must be {s}x{r}")
        object.__setattr__(self, "C", C)

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    @property
    def r(self) -> int:
        return self.A.n

    @property
    def n(self) -> int:
        return self.A.n + self.B.n

    def embed(self) -> Mat:
        return stab_embed(self)


def stab_embed(S: StabMat) -> Mat:
    """The n x n matrix (A 0 / C B)."""
    n, r = S.n, S.r
    a = np.zeros((n, n), dtype=np.int64)
    a[:r, :r] = S.A._a
    a[r:, r:] = S.B._a
    if S.C:
        a[r:, :r] = np.array(S.C, dtype=np.int64)
    return Mat(S.field, a) if S.field.k > 1 else Mat(S.field, a % S.field.p)


def stab_project(X: Mat, r: int) -> StabMat:
    """Inverse of stab_embed; rejects matrices that do not stabilize U."""
    n = X.n
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    if np.any(X._a[:r, r:]):
        raise ValueError("matrix does not stabilize U: top-right block is nonzero")
    F = X.field
    A = Mat(F, X._a[:r, :r])
    B = Mat(F, X._a[r:, r:])
    C = tuple(tuple(int(x) for x in row) for row in X._a[r:, :r])
    return StabMat(A, B, C)


def stab_sample(n: int, r: int, field: FieldSpec, rng, mode: str = "algebra") -> StabMat:
    """Uniform StabMat from M(V)_U (algebra) or GL(V)_U (group, by rejection
    until det(A) and det(B) are both nonzero).  Draw order is A, B, C."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    if mode not in ("algebra", "group"):
        raise ValueError(f"unknown mode {mode!r}")
    q = field.q
    s = n - r
    while True:
        a = rng.integers(0, q, size=(r, r), dtype=np.int64)
        b = rng.integers(0, q, size=(s, s), dtype=np.int64)
        c = rng.integers(0, q, size=(s, r), dtype=np.int64)
        if mode == "group":
            if field.k == 1:
                ok = la.det_p(a, field.p) != 0 and la.det_p(b, field.p) != 0
            else:
                ok = la.det_g(a, field) != 0 and la.det_g(b, field) != 0
            if not ok:
                continue
        A = Mat(field, a) if field.k > 1 else Mat(field, a % field.p)
        B = Mat(field, b) if field.k > 1 else Mat(field, b % field.p)
        return StabMat(A, B, tuple(tuple(int(x) for x in row) for row in c))


def rand_mat(field: FieldSpec, n: int, rng) -> Mat:
    a = rng.integers(0, field.q, size=(n, n), dtype=np.int64)
    return Mat(field, a if field.k > 1 else a % field.p)


def rand_invertible(field: FieldSpec, n: int, rng) -> Mat:
    while True:
        X = rand_mat(field, n, rng)
        if det(X).index != 0:
            return X


def block_diag(field: FieldSpec, blocks: Sequence[Mat]) -> Mat:
    n = sum(b.n for b in blocks)
    a = np.zeros((n, n), dtype=np.int64)
    at = 0
    for b in blocks:
        if b.field != field:
            raise ValueError("block over a different field")
        a[at: at + b.n, at: at + b.n] = b._a
        at += b.n
    return Mat(field, a)


def build_xfgh(f: Poly, g: Poly, h: Poly) -> StabMat:
    """The non-cyclic witness diag(C(g), C(f), C(f), C(h)) with A, B cyclic.

    Requires f irreducible, g and h monic, gcd(f, gh) = gcd(g, h) = 1.
    Degenerate deg g = 0 or deg h = 0 inputs are accepted; all postconditions
    (A, B cyclic, X non-cyclic, min poly fgh, char poly f^2gh) are re-verified
    by direct computation.
    """
    F = f.field
    if g.field != F or h.field != F:
        raise ValueError("polynomials over different fields")
    if not is_irreducible(f):
        raise ValueError("f must be irreducible")
    if not g.is_monic or not h.is_monic:
        raise ValueError("g and h must be monic")
    if poly_gcd(f, g * h).degree != 0:
        raise ValueError("gcd(f, gh) must be 1")
    if poly_gcd(g, h).degree != 0:
        raise ValueError("gcd(g, h) must be 1")
    a_blocks = [companion(x) for x in (g, f) if x.degree >= 1]
    b_blocks = [companion(x) for x in (f, h) if x.degree >= 1]
    A = block_diag(F, a_blocks)
    B = block_diag(F, b_blocks)
    S = StabMat(A, B, tuple((0,) * A.n for _ in range(B.n)))
    X = stab_embed(S)
    fgh = f * g * h
    if not is_cyclic(A) or not is_cyclic(B):
        raise ValueError("postcondition failed: a diagonal block is not cyclic")
    if is_cyclic(X) or min_poly(X) != fgh or char_poly(X) != f * fgh:
        raise ValueError("postcondition failed: X_{f,g,h} is not a valid witness")
    return S


# ---------------------------------------------------------------------------
# text interchange format: rows separated by ';', entries by ','


def mat_to_string(X: Mat) -> str:
    F = X.field
    return ";".join(",".join(F.format_element(int(x)) for x in row)
                    for row in X._a)


def mat_from_string(field: FieldSpec, text: str) -> Mat:
    rows = []
    for rtext in text.strip().split(";"):
        entries = [field.parse_element(e) for e in rtext.split(",")]
        rows.append(entries)
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix text is not square")
    return Mat(field, rows)
