"""Randomized search for cyclic pairs in a matrix algebra given by
generators, plus spinning to exhibit proper invariant subspaces.

The probe never certifies irreducibility: a run that finds neither a
witness nor a cyclic pair is inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .gf import FieldSpec, field_new, parse_prime_power
from .matspace import (Mat, Row, is_cyclic, kernel_of_poly, krylov_span,
                       mat_from_string, mat_to_string, min_poly, order_poly,
                       row_reduce, vec_mat)
from .polyring import irr_enumerate


@dataclass(frozen=True)
class GeneratedAlgebra:
    """A matrix algebra given by a nonempty set of n x n generators."""

    n: int
    generators: tuple[Mat, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("at least one generator is required")
        field = self.generators[0].field
        for g in self.generators:
            if g.field != field:
                raise ValueError("generators over different fields")
            if g.n != self.n:
                raise ValueError(f"generator is {g.n}x{g.n}, expected {self.n}")

    @property
    def field(self) -> FieldSpec:
        return self.generators[0].field


@dataclass(frozen=True)
class ProbeReport:
    verdict: str                       # reducible_with_witness |
                                       # cyclic_pair_found | inconclusive
    witness: tuple[Row, ...] | None    # proper invariant subspace basis
    pair: tuple[Row, Mat] | None       # (cyclic vector, cyclic matrix)
    tries_used: int
    seed: int


def random_element(alg: GeneratedAlgebra, rng, length: int) -> Mat:
    """Random walk of `length` steps: start from a random generator, then at
    each step multiply by or add a random generator (uniform choice).  The
    result lies in the algebra by construction."""
    if length < 1:
        raise ValueError("walk length must be >= 1")
    gens = alg.generators
    x = gens[int(rng.integers(0, len(gens)))]
    for _ in range(length - 1):
        g = gens[int(rng.integers(0, len(gens)))]
        if int(rng.integers(0, 2)):
            x = x @ g
        else:
            x = x + g
    return x


def spin(v, alg: GeneratedAlgebra) -> tuple[Row, ...]:
    """Row-reduced basis of the smallest subspace containing v and closed
    under right multiplication by every generator."""
    field = alg.field
    basis: list[Row] = []
    queue = [tuple(field.element(x).index if not isinstance(x, (int, np.integer))
                   else int(x) for x in v)]
    while queue:
        w = queue.pop()
        new_basis = row_reduce(field, basis + [w])
        if len(new_basis) == len(basis):
            continue
        basis = list(new_basis)
        for g in alg.generators:
            queue.append(vec_mat(w, g))
    return tuple(basis)


def find_cyclic_vector(X: Mat, exhaustive_cap: int = 1 << 16) -> Row | None:
    """Deterministic scan for a cyclic vector: standard basis vectors, then
    sums of pairs, then (within the cap) the whole space."""
    n = X.n
    F = X.field

    def full_order(v) -> bool:
        return any(v) and order_poly(v, X).degree == n

    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        if full_order(e):
            return e
    for i in range(n):
        for j in range(i + 1, n):
            e = tuple(1 if t in (i, j) else 0 for t in range(n))
            if full_order(e):
                return e
    if F.q ** n <= exhaustive_cap:
        for idx in range(1, F.q ** n):
            v = []
            rest = idx
            for _ in range(n):
                v.append(rest % F.q)
                rest //= F.q
            if full_order(tuple(v)):
                return tuple(v)
    return None


def _witness_from(X: Mat, alg: GeneratedAlgebra) -> tuple[Row, ...] | None:
    """Spin kernel vectors of low-degree (d <= 2) irreducible factors of m_X,
    looking for a proper invariant subspace."""
    n = alg.n
    m = min_poly(X)
    for d in (1, 2):
        if d > m.degree:
            break
        for f in irr_enumerate(d, alg.field):
            if not (m % f).is_zero:
                continue
            for w in kernel_of_poly(f, X):
                span = spin(w, alg)
                if 0 < len(span) < n:
                    return span
    return None


def probe(alg: GeneratedAlgebra, max_tries: int, seed: int = 0,
          walk_length: int | None = None) -> ProbeReport:
    """Draw random algebra elements; on each cyclic draw, look first for a
    proper invariant subspace by spinning kernel vectors of the low-degree
    irreducible factors of its minimal polynomial, then for a cyclic pair."""
    if max_tries < 1:
        raise ValueError("max_tries must be >= 1")
    n = alg.n
    seed = int(seed) % (1 << 64)
    rng = Generator(Philox(key=np.array([seed, 0], dtype=np.uint64)))
    length = walk_length if walk_length is not None else 2 * n
    for tries in range(1, max_tries + 1):
        X = random_element(alg, rng, length)
        if not is_cyclic(X):
            continue
        witness = _witness_from(X, alg)
        if witness is not None:
            assert _is_invariant(witness, alg)
            return ProbeReport("reducible_with_witness", witness, None, tries, seed)
        v = find_cyclic_vector(X)
        if v is not None:
            assert len(krylov_span(v, X)) == n
            return ProbeReport("cyclic_pair_found", None, (v, X), tries, seed)
    return ProbeReport("inconclusive", None, None, max_tries, seed)


def _is_invariant(basis: tuple[Row, ...], alg: GeneratedAlgebra) -> bool:
    span = row_reduce(alg.field, basis)
    for g in alg.generators:
        for w in basis:
            if len(row_reduce(alg.field, list(span) + [vec_mat(w, g)])) != len(span):
                return False
    return True


# ---------------------------------------------------------------------------
# generator file format: first line "n q" (q as p^k or integer), then one
# matrix per line in the matspace text format


class GeneratorFileError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def parse_generator_file(text: str) -> GeneratedAlgebra:
    lines = text.splitlines()
    header_at = None
    for i, line in enumerate(lines):
        if line.strip() and not line.lstrip().startswith("#"):
            header_at = i
            break
    if header_at is None:
        raise GeneratorFileError(1, "missing header line 'n q'")
    parts = lines[header_at].split()
    if len(parts) != 2:
        raise GeneratorFileError(header_at + 1, "header must be 'n q'")
    try:
        n = int(parts[0])
        p, k = parse_prime_power(parts[1])
    except ValueError as exc:
        raise GeneratorFileError(header_at + 1, str(exc)) from None
    if n < 1:
        raise GeneratorFileError(header_at + 1, f"bad dimension {n}")
    field = field_new(p, k)
    gens = []
    for i in range(header_at + 1, len(lines)):
        line = lines[i].strip()
        if not line or line.startswith("#"):
            continue
        try:
            g = mat_from_string(field, line)
        except ValueError as exc:
            raise GeneratorFileError(i + 1, str(exc)) from None
        if g.n != n:
            raise GeneratorFileError(i + 1, f"matrix is {g.n}x{g.n}, expected {n}x{n}")
        gens.append(g)
    if not gens:
        raise GeneratorFileError(len(lines), "no generator matrices found")
    return GeneratedAlgebra(n, tuple(gens))


def format_generator_file(alg: GeneratedAlgebra) -> str:
    field = alg.field
    q = str(field.p) if field.k == 1 else f"{field.p}^{field.k}"
    lines = [f"{alg.n} {q}"]
    lines.extend(mat_to_string(g) for g in alg.generators)
    return "\n".join(lines) + "\n"
