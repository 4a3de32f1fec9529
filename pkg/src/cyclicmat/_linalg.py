"""Low-level linear algebra kernels over canonical element indices.

Two families with identical observable behavior (enforced by tests):

* ``*_p`` functions: numpy kernels for prime fields, entries are int64
  residues mod p.  These carry the hot loops (Monte Carlo, exhaustive
  C-block scans).
* ``*_g`` functions: pure-Python kernels for any field, entries are
  canonical indices, arithmetic goes through the FieldSpec index ops.

Pivoting is deterministic everywhere (first nonzero), so the two families
agree bit for bit on prime fields.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldSpec

# ---------------------------------------------------------------------------
# prime-field numpy kernels


def modinv_vec(v: np.ndarray, p: int) -> np.ndarray:
    """Elementwise v^(p-2) mod p by square and multiply."""
    e = p - 2
    out = np.ones_like(v)
    base = v % p
    while e:
        if e & 1:
            out = (out * base) % p
        base = (base * base) % p
        e >>= 1
    return out


def matmul_p(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def mat_pow_p(a: np.ndarray, e: int, p: int) -> np.ndarray:
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = a % p
    while e:
        if e & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        e >>= 1
    return out


def rref_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = (a % p).astype(np.int64).copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        sub = R[r:, col]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, col]), p - 2, p)
        if inv != 1:
            R[r] = (R[r] * inv) % p
        others = np.nonzero(R[:, col])[0]
        for i2 in others:
            if i2 != r:
                R[i2] = (R[i2] - R[i2, col] * R[r]) % p
        pivots.append(col)
        r += 1
    return R, pivots


def rank_p(a: np.ndarray, p: int) -> int:
    return len(rref_p(a, p)[1])


def det_p(a: np.ndarray, p: int) -> int:
    A = (a % p).astype(np.int64).copy()
    n = A.shape[0]
    det = 1
    for col in range(n):
        nz = np.nonzero(A[col:, col])[0]
        if nz.size == 0:
            return 0
        i = col + int(nz[0])
        if i != col:
            A[[col, i]] = A[[i, col]]
            det = (-det) % p
        piv = int(A[col, col])
        det = (det * piv) % p
        inv = pow(piv, p - 2, p)
        below = np.nonzero(A[col + 1:, col])[0]
        for i2 in col + 1 + below:
            f = (int(A[i2, col]) * inv) % p
            A[i2] = (A[i2] - f * A[col]) % p
    return det


def inv_p(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    aug = np.concatenate([a % p, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = rref_p(aug, p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def left_nullspace_p(a: np.ndarray, p: int) -> np.ndarray:
    """Row-reduced basis of {v : v a = 0}, as rows of the returned array."""
    m, n = a.shape
    aug = np.concatenate([a % p, np.eye(m, dtype=np.int64)], axis=1)
    R = aug.astype(np.int64).copy()
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, col])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, col]), p - 2, p)
        if inv != 1:
            R[r] = (R[r] * inv) % p
        for i2 in np.nonzero(R[:, col])[0]:
            if i2 != r:
                R[i2] = (R[i2] - R[i2, col] * R[r]) % p
        r += 1
    tails = R[r:, n:]
    if tails.shape[0] == 0:
        return np.zeros((0, m), dtype=np.int64)
    basis, _ = rref_p(tails, p)
    return basis


def order_poly_p(w: np.ndarray, X: np.ndarray, p: int) -> tuple[int, ...]:
    """Least monic g with w g(X) = 0, for nonzero w; coefficients constant first."""
    n = X.shape[0]
    store: list[np.ndarray] = []
    cfs: list[np.ndarray] = []
    pivcols: list[int] = []
    chain = w % p
    k = 0
    while True:
        cur = chain.copy()
        cf = np.zeros(n + 1, dtype=np.int64)
        cf[k] = 1
        for col, srow, scf in zip(pivcols, store, cfs):
            f = cur[col]
            if f:
                cur = (cur - f * srow) % p
                cf = (cf - f * scf) % p
        nz = np.nonzero(cur)[0]
        if nz.size == 0:
            return tuple(int(c) for c in cf[: k + 1])
        col = int(nz[0])
        inv = pow(int(cur[col]), p - 2, p)
        if inv != 1:
            cur = (cur * inv) % p
            cf = (cf * inv) % p
        pivcols.append(col)
        store.append(cur)
        cfs.append(cf)
        k += 1
        chain = (chain @ X) % p


def minpoly_p(X: np.ndarray, p: int) -> tuple[int, ...]:
    """Minimal polynomial as the running lcm of basis-vector order
    polynomials; returns monic coefficients, constant term first."""
    n = X.shape[0]
    m = [1]
    for i in range(n):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        w = np.zeros(n, dtype=np.int64)
        cur = v
        for j, c in enumerate(m):
            if c:
                w = (w + c * cur) % p
            if j + 1 < len(m):
                cur = (cur @ X) % p
        if not w.any():
            continue
        g = order_poly_p(w, X, p)
        mp = np.zeros(len(m) + len(g) - 1, dtype=np.int64)
        for j, c in enumerate(m):
            if c:
                mp[j: j + len(g)] = (mp[j: j + len(g)] + c * np.asarray(g)) % p
        m = [int(x) for x in mp]
        if len(m) - 1 == n:
            break
    return tuple(m)


# -- batched kernels (hot loops) --------------------------------------------


def krylov_batch_p(X: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Rows [v, vX, ..., vX^(n-1)] per batch member; X (T,n,n), v (T,n)."""
    T, n, _ = X.shape
    dt = _batch_dtype(p, n)
    Xd = X.astype(dt)
    K = np.empty((T, n, n), dtype=dt)
    w = (v % p).astype(dt)
    K[:, 0, :] = w
    for i in range(1, n):
        w = np.einsum("bi,bij->bj", w, Xd) % p
        K[:, i, :] = w
    return K


def _batch_dtype(p: int, width: int):
    # products stay below 2^31: entries < p, inner sums of `width` products
    return np.int32 if width * (p - 1) * (p - 1) < (1 << 31) else np.int64


def _inv_table(p: int) -> np.ndarray:
    vals = np.arange(p, dtype=np.int64)
    vals[0] = 1
    return modinv_vec(vals, p)


def power_krylov_batch_p(X: np.ndarray, p: int) -> np.ndarray:
    """Flattened powers [vec(I), vec(X), ..., vec(X^(n-1))] per batch member,
    transposed to shape (T, n^2, n).  The rank of member b equals
    deg(minpoly(X[b])), since the powers span F[X] as a vector space."""
    T, n, _ = X.shape
    dt = _batch_dtype(p, n)
    Xd = X.astype(dt)
    P = np.empty((T, n, n * n), dtype=dt)
    w = np.broadcast_to(np.eye(n, dtype=dt), (T, n, n)).copy()
    P[:, 0, :] = w.reshape(T, n * n)
    for i in range(1, n):
        w = np.einsum("bij,bjk->bik", w, Xd) % p
        P[:, i, :] = w.reshape(T, n * n)
    return P.transpose(0, 2, 1)


def rank_batch_p(M: np.ndarray, p: int) -> np.ndarray:
    """Per-batch rank of M (T, rows, cols); eliminates column by column, so
    keep cols <= rows (transpose first if needed)."""
    M = (M % p).astype(_batch_dtype(p, 1))
    T, _, cols = M.shape
    ranks = np.zeros(T, dtype=np.int64)
    inv_t = _inv_table(p).astype(M.dtype)
    for j in range(cols):
        col = M[:, :, j]
        nzmask = col != 0
        found = nzmask.any(axis=1)
        ranks += found
        piv = np.argmax(nzmask, axis=1)
        sub = M[:, :, j:]
        pivrow = np.take_along_axis(sub, piv[:, None, None], axis=1)[:, 0, :]
        pivval = pivrow[:, 0].copy()
        pivval[~found] = 1
        pivrow = (pivrow * inv_t[pivval][:, None]) % p
        pivrow[~found] = 0
        tmp = col[:, :, None] * pivrow[:, None, :]
        np.subtract(sub, tmp, out=sub)
        np.remainder(sub, p, out=sub)
    return ranks


def cyclic_batch_p(X: np.ndarray, p: int) -> np.ndarray:
    """Exact per-batch cyclicity: deg(minpoly) = n iff the first n powers
    are linearly independent."""
    n = X.shape[1]
    if n == 1:
        return np.ones(X.shape[0], dtype=bool)
    return rank_batch_p(power_krylov_batch_p(X, p), p) == n


def nonsingular_batch_p(K: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask: K[b] invertible mod p.  Destroys no input."""
    K = (K % p).astype(_batch_dtype(p, 1))
    T, n, _ = K.shape
    ok = np.ones(T, dtype=bool)
    inv_t = _inv_table(p).astype(K.dtype)
    for j in range(n):
        col = K[:, :, j]
        nzmask = col != 0
        found = nzmask.any(axis=1)
        ok &= found
        piv = np.argmax(nzmask, axis=1)
        sub = K[:, :, j:]
        pivrow = np.take_along_axis(sub, piv[:, None, None], axis=1)[:, 0, :]
        pivval = pivrow[:, 0].copy()
        pivval[~found] = 1
        pivrow = (pivrow * inv_t[pivval][:, None]) % p
        pivrow[~found] = 0
        # subtracting factor*pivrow zeroes column j everywhere, including the
        # pivot row itself, which retires it from later pivot searches
        tmp = col[:, :, None] * pivrow[:, None, :]
        np.subtract(sub, tmp, out=sub)
        np.remainder(sub, p, out=sub)
    return ok


# ---------------------------------------------------------------------------
# generic kernels (any field), entries are canonical indices


def _rows_of(a) -> list[list[int]]:
    if isinstance(a, np.ndarray):
        return [[int(x) for x in row] for row in a]
    return [list(row) for row in a]


def matmul_g(a, b, F: FieldSpec) -> list[list[int]]:
    A, B = _rows_of(a), _rows_of(b)
    n, k, m = len(A), len(B), len(B[0])
    add, mul = F.add_idx, F.mul_idx
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            c = Ai[t]
            if c:
                Bt = B[t]
                for j in range(m):
                    if Bt[j]:
                        Oi[j] = add(Oi[j], mul(c, Bt[j]))
    return out


def matvec_g(v, a, F: FieldSpec) -> list[int]:
    A = _rows_of(a)
    n = len(A)
    m = len(A[0])
    add, mul = F.add_idx, F.mul_idx
    out = [0] * m
    for i in range(n):
        c = v[i]
        if c:
            Ai = A[i]
            for j in range(m):
                if Ai[j]:
                    out[j] = add(out[j], mul(c, Ai[j]))
    return out


def rref_g(a, F: FieldSpec) -> tuple[list[list[int]], list[int]]:
    R = _rows_of(a)
    m = len(R)
    n = len(R[0]) if m else 0
    add, mul, neg, inv = F.add_idx, F.mul_idx, F.neg_idx, F.inv_idx
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        i = next((i for i in range(r, m) if R[i][col]), None)
        if i is None:
            continue
        if i != r:
            R[r], R[i] = R[i], R[r]
        pivinv = inv(R[r][col])
        if pivinv != 1:
            R[r] = [mul(x, pivinv) for x in R[r]]
        for i2 in range(m):
            if i2 != r and R[i2][col]:
                f = neg(R[i2][col])
                row, prow = R[i2], R[r]
                R[i2] = [add(row[j], mul(f, prow[j])) for j in range(n)]
        pivots.append(col)
        r += 1
    return R, pivots


def det_g(a, F: FieldSpec) -> int:
    A = _rows_of(a)
    n = len(A)
    add, mul, neg, inv = F.add_idx, F.mul_idx, F.neg_idx, F.inv_idx
    det = 1
    for col in range(n):
        i = next((i for i in range(col, n) if A[i][col]), None)
        if i is None:
            return 0
        if i != col:
            A[col], A[i] = A[i], A[col]
            det = neg(det)
        piv = A[col][col]
        det = mul(det, piv)
        pivinv = inv(piv)
        for i2 in range(col + 1, n):
            if A[i2][col]:
                f = neg(mul(A[i2][col], pivinv))
                row, prow = A[i2], A[col]
                A[i2] = [add(row[j], mul(f, prow[j])) for j in range(n)]
    return det


def inv_g(a, F: FieldSpec) -> list[list[int]]:
    A = _rows_of(a)
    n = len(A)
    aug = [A[i] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    R, pivots = rref_g(aug, F)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def left_nullspace_g(a, F: FieldSpec) -> list[list[int]]:
    A = _rows_of(a)
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [A[i] + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    add, mul, neg, inv = F.add_idx, F.mul_idx, F.neg_idx, F.inv_idx
    r = 0
    for col in range(n):
        if r == m:
            break
        i = next((i for i in range(r, m) if aug[i][col]), None)
        if i is None:
            continue
        if i != r:
            aug[r], aug[i] = aug[i], aug[r]
        pivinv = inv(aug[r][col])
        if pivinv != 1:
            aug[r] = [mul(x, pivinv) for x in aug[r]]
        for i2 in range(m):
            if i2 != r and aug[i2][col]:
                f = neg(aug[i2][col])
                row, prow = aug[i2], aug[r]
                aug[i2] = [add(row[j], mul(f, prow[j])) for j in range(n + m)]
        r += 1
    tails = [row[n:] for row in aug[r:]]
    if not tails:
        return []
    basis, _ = rref_g(tails, F)
    return basis


def order_poly_g(w, X, F: FieldSpec) -> tuple[int, ...]:
    rows = _rows_of(X)
    n = len(rows)
    add, mul, neg, inv = F.add_idx, F.mul_idx, F.neg_idx, F.inv_idx
    store: list[list[int]] = []
    cfs: list[list[int]] = []
    pivcols: list[int] = []
    chain = list(w)
    k = 0
    while True:
        cur = list(chain)
        cf = [0] * (n + 1)
        cf[k] = 1
        for col, srow, scf in zip(pivcols, store, cfs):
            f = cur[col]
            if f:
                f = neg(f)
                cur = [add(cur[j], mul(f, srow[j])) for j in range(n)]
                cf = [add(cf[j], mul(f, scf[j])) for j in range(n + 1)]
        col = next((j for j in range(n) if cur[j]), None)
        if col is None:
            return tuple(cf[: k + 1])
        pivinv = inv(cur[col])
        if pivinv != 1:
            cur = [mul(x, pivinv) for x in cur]
            cf = [mul(x, pivinv) for x in cf]
        pivcols.append(col)
        store.append(cur)
        cfs.append(cf)
        k += 1
        chain = matvec_g(chain, rows, F)


def minpoly_g(X, F: FieldSpec) -> tuple[int, ...]:
    rows = _rows_of(X)
    n = len(rows)
    add, mul = F.add_idx, F.mul_idx
    m = [1]
    for i in range(n):
        cur = [0] * n
        cur[i] = 1
        w = [0] * n
        for j, c in enumerate(m):
            if c:
                w = [add(w[t], mul(c, cur[t])) for t in range(n)]
            if j + 1 < len(m):
                cur = matvec_g(cur, rows, F)
        if not any(w):
            continue
        g = order_poly_g(w, rows, F)
        mp = [0] * (len(m) + len(g) - 1)
        for j, c in enumerate(m):
            if c:
                for t, gt in enumerate(g):
                    if gt:
                        mp[j + t] = add(mp[j + t], mul(c, gt))
        m = mp
        if len(m) - 1 == n:
            break
    return tuple(m)


# ---------------------------------------------------------------------------
# characteristic polynomial by Hessenberg reduction (any field)


def charpoly_hessenberg(X, F: FieldSpec) -> tuple[int, ...]:
    """det(tI - X) as monic coefficients, constant term first.  Similarity
    reduction to upper Hessenberg form, then the principal-minor recurrence;
    exact in every characteristic."""
    H = _rows_of(X)
    n = len(H)
    add, mul, neg, inv = F.add_idx, F.mul_idx, F.neg_idx, F.inv_idx

    for j in range(n - 2):
        i = next((i for i in range(j + 1, n) if H[i][j]), None)
        if i is None:
            continue
        if i != j + 1:
            H[j + 1], H[i] = H[i], H[j + 1]
            for row in H:
                row[j + 1], row[i] = row[i], row[j + 1]
        pivinv = inv(H[j + 1][j])
        for i2 in range(j + 2, n):
            if H[i2][j]:
                c = mul(H[i2][j], pivinv)
                nc = neg(c)
                prow = H[j + 1]
                H[i2] = [add(H[i2][t], mul(nc, prow[t])) for t in range(n)]
                for row in H:
                    row[j + 1] = add(row[j + 1], mul(c, row[i2]))

    # p_m = (t - H[m-1][m-1]) p_{m-1} - sum_i H[i-1][m-1] (prod of
    # subdiagonals between i and m-1) p_{i-1}
    polys: list[list[int]] = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        d = neg(H[m - 1][m - 1])
        cur = [0] * (len(prev) + 1)
        for t, c in enumerate(prev):
            if c:
                cur[t + 1] = add(cur[t + 1], c)
                cur[t] = add(cur[t], mul(d, c))
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = mul(prod, H[i][i - 1])
            if not prod:
                break
            h = H[i - 1][m - 1]
            if h:
                s = neg(mul(h, prod))
                pi = polys[i - 1]
                for t, c in enumerate(pi):
                    if c:
                        cur[t] = add(cur[t], mul(s, c))
        polys.append(cur)
    return tuple(polys[n])
