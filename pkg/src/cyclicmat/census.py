"""Exact exhaustive enumeration of M(V)_U and GL(V)_U, case classification,
and seeded parallel Monte Carlo density estimation with Wilson confidence
intervals, all checked against the closed-form bounds.

Non-cyclic matrices split into three mutually exclusive cases:
case_i (A non-cyclic), case_ii (A cyclic, B non-cyclic), case_iii (A and B
cyclic, X non-cyclic); n1, n2, n3 count them.

Reproducibility: Monte Carlo trials are processed in fixed chunks of
CHUNK_TRIALS; chunk c draws from Philox keyed (seed, c), so reports are
byte-identical for a fixed seed regardless of the worker count.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import sqrt
from statistics import NormalDist
from typing import Iterable, Iterator

import numpy as np
from numpy.random import Generator, Philox

from . import _linalg as la
from .counting import (BoundsReport, bounds_report, decimal_str, np_bounds,
                       orders, rational_from_str, rational_str)
from .gf import FieldSpec, field_from_order
from .matspace import Mat, StabMat, is_cyclic, stab_embed, stab_sample
from .polyring import poly_gcd
from .simtypes import matrix_types

DEFAULT_BUDGET = 1 << 24
DIRECT_CUTOFF = 1 << 14   # largest state space enumerated matrix by matrix
CHUNK_TRIALS = 1024       # fixed MC chunk size; part of the stream contract
CASES = ("cyclic", "case_i", "case_ii", "case_iii")


class BudgetExceededError(Exception):
    """Raised when the nominal state space exceeds the enumeration budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"state space {required} exceeds budget {budget}; "
            f"rerun with budget >= {required}")


def classify(S: StabMat) -> str:
    """One of cyclic / case_i / case_ii / case_iii; a partition of all inputs."""
    X = stab_embed(S)
    if is_cyclic(X):
        return "cyclic"
    if not is_cyclic(S.A):
        return "case_i"
    if not is_cyclic(S.B):
        return "case_ii"
    return "case_iii"


def wilson_interval(successes: int, trials: int, ci_level: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if not 0 < ci_level < 1:
        raise ValueError("ci_level must be in (0, 1)")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    z = NormalDist().inv_cdf((1 + ci_level) / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


# ---------------------------------------------------------------------------


@dataclass
class DensityReport:
    """Result of one exact enumeration or Monte Carlo run."""

    n: int
    r: int
    q: int
    p: int
    k: int
    modulus: str | None
    mode: str                    # "algebra" | "group"
    method: str                  # "exact" | "monte_carlo"
    total: int                   # state-space size (exact) or trial count (MC)
    n1: int
    n2: int
    n3: int
    pi: Fraction | float
    pi1: Fraction | float
    pi2: Fraction | float
    pi3: Fraction | float
    pi_ci: tuple[float, float] | None = None
    pi1_ci: tuple[float, float] | None = None
    pi2_ci: tuple[float, float] | None = None
    pi3_ci: tuple[float, float] | None = None
    seed: int | None = None
    trials: int | None = None
    ci_level: float | None = None
    bounds: BoundsReport | None = None
    verdicts: dict = dc_field(default_factory=dict)

    @property
    def noncyclic(self) -> int:
        return self.n1 + self.n2 + self.n3

    def _pi_json(self, value, ci):
        if self.method == "exact":
            return {"rational": rational_str(value), "decimal": decimal_str(value)}
        return {"estimate": value, "ci": [ci[0], ci[1]]}

    def to_json_dict(self) -> dict:
        d = {
            "n": self.n,
            "r": self.r,
            "q": self.q,
            "p": self.p,
            "k": self.k,
            "modulus": self.modulus,
            "mode": self.mode,
            "method": self.method,
            "total": self.total,
            "n1": self.n1,
            "n2": self.n2,
            "n3": self.n3,
            "pi": self._pi_json(self.pi, self.pi_ci),
            "pi1": self._pi_json(self.pi1, self.pi1_ci),
            "pi2": self._pi_json(self.pi2, self.pi2_ci),
            "pi3": self._pi_json(self.pi3, self.pi3_ci),
            "seed": self.seed,
            "trials": self.trials,
            "ci_level": self.ci_level,
            "bounds": self.bounds.to_json_dict() if self.bounds else None,
            "verdicts": dict(self.verdicts),
        }
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> DensityReport:
        method = d["method"]

        def pi_val(entry):
            if method == "exact":
                return rational_from_str(entry["rational"])
            return entry["estimate"]

        def pi_ci(entry):
            if method == "exact":
                return None
            return (entry["ci"][0], entry["ci"][1])

        return cls(
            n=d["n"], r=d["r"], q=d["q"], p=d["p"], k=d["k"],
            modulus=d["modulus"], mode=d["mode"], method=method,
            total=d["total"], n1=d["n1"], n2=d["n2"], n3=d["n3"],
            pi=pi_val(d["pi"]), pi1=pi_val(d["pi1"]),
            pi2=pi_val(d["pi2"]), pi3=pi_val(d["pi3"]),
            pi_ci=pi_ci(d["pi"]), pi1_ci=pi_ci(d["pi1"]),
            pi2_ci=pi_ci(d["pi2"]), pi3_ci=pi_ci(d["pi3"]),
            seed=d["seed"], trials=d["trials"], ci_level=d["ci_level"],
            bounds=BoundsReport.from_json_dict(d["bounds"]) if d["bounds"] else None,
            verdicts=dict(d["verdicts"]),
        )

    CSV_HEADER = ("n,r,q,mode,method,pi,pi1,pi2,pi3,lower,upper,verdicts,"
                  "seed,trials")

    def to_csv_row(self) -> str:
        def dec(v):
            return decimal_str(v) if isinstance(v, Fraction) else repr(v)

        verdicts = "|".join(f"{k}={v}" for k, v in self.verdicts.items())
        lower = decimal_str(self.bounds.theorem_lower) if self.bounds else ""
        upper = decimal_str(self.bounds.theorem_upper) if self.bounds else ""
        seed = "" if self.seed is None else str(self.seed)
        trials = "" if self.trials is None else str(self.trials)
        return ",".join([str(self.n), str(self.r), str(self.q), self.mode,
                         self.method, dec(self.pi), dec(self.pi1),
                         dec(self.pi2), dec(self.pi3), lower, upper,
                         verdicts, seed, trials])


# ---------------------------------------------------------------------------
# bound verdicts


def check_bounds(report: DensityReport) -> dict:
    """Per-bound verdicts: pass / fail / vacuous.  Exact reports compare
    rationals; Monte Carlo reports fail a bound only when the whole Wilson
    interval violates it.  Group-mode densities have no proven bounds (the
    group is covered empirically only), so no verdicts are issued."""
    verdicts: dict[str, str] = {}
    if report.mode == "group" or report.bounds is None:
        report.verdicts = verdicts
        return verdicts
    b = report.bounds
    exact = report.method == "exact"

    def against_lower(value, ci, bound) -> bool:
        # holds unless the evidence is entirely below the bound
        if exact:
            return value >= bound
        return not ci[1] < float(bound)

    def against_upper(value, ci, bound) -> bool:
        if exact:
            return value <= bound
        return not ci[0] > float(bound)

    verdicts["theorem_lower"] = (
        "pass" if against_lower(report.pi, report.pi_ci, b.theorem_lower) else "fail")
    if b.theorem_upper_vacuous:
        verdicts["theorem_upper"] = "vacuous"
    else:
        verdicts["theorem_upper"] = (
            "pass" if against_upper(report.pi, report.pi_ci, b.theorem_upper) else "fail")

    verdicts["pi3_lower"] = (
        "pass" if against_lower(report.pi3, report.pi3_ci, b.pi3_lower) else "fail")
    if b.pi3_upper >= 1:
        verdicts["pi3_upper"] = "vacuous"
    else:
        verdicts["pi3_upper"] = (
            "pass" if against_upper(report.pi3, report.pi3_ci, b.pi3_upper) else "fail")

    # pi1 is exactly the non-cyclic density of M(r, q); pi2 factors as
    # P(A cyclic) P(B non-cyclic)
    lo_r, up_r = np_bounds(report.r, report.q)
    lo_s, up_s = np_bounds(report.n - report.r, report.q)
    if report.r == 1:
        ok1 = report.pi1 == 0 if exact else report.n1 == 0
    else:
        ok1 = (lo_r < report.pi1 < up_r if exact else
               not (report.pi1_ci[1] < float(lo_r) or report.pi1_ci[0] > float(up_r)))
    verdicts["pi1_np"] = "pass" if ok1 else "fail"

    if report.n - report.r == 1:
        ok2 = report.pi2 == 0 if exact else report.n2 == 0
    else:
        p2_lo = (1 - up_r) * lo_s
        p2_up = (1 - lo_r) * up_s
        ok2 = (p2_lo < report.pi2 < p2_up if exact else
               not (report.pi2_ci[1] < float(p2_lo) or report.pi2_ci[0] > float(p2_up)))
    verdicts["pi2_np"] = "pass" if ok2 else "fail"

    report.verdicts = verdicts
    return verdicts


# ---------------------------------------------------------------------------
# exact enumeration


def _as_field(q) -> FieldSpec:
    if isinstance(q, FieldSpec):
        return q
    return field_from_order(q)


def _all_mats(field: FieldSpec, k: int) -> list[Mat]:
    q = field.q
    out = []
    for flat in itertools.product(range(q), repeat=k * k):
        rows = [flat[i * k:(i + 1) * k] for i in range(k)]
        out.append(Mat(field, rows))
    return out


def _iter_c_blocks(field: FieldSpec, s: int, r: int) -> Iterator[tuple]:
    for flat in itertools.product(range(field.q), repeat=s * r):
        yield tuple(flat[i * r:(i + 1) * r] for i in range(s))


def _count_noncyclic_c(A: Mat, B: Mat, field: FieldSpec) -> int:
    """Number of C blocks making (A 0 / C B) non-cyclic, A and B cyclic."""
    n, r = A.n + B.n, A.n
    s = B.n
    total = field.q ** (s * r)
    if field.k != 1:
        bad = 0
        for c in _iter_c_blocks(field, s, r):
            if not is_cyclic(stab_embed(StabMat(A, B, c))):
                bad += 1
        return bad
    p = field.p
    base = np.zeros((n, n), dtype=np.int64)
    base[:r, :r] = A.array
    base[r:, r:] = B.array
    cyclic_found = 0
    powers = p ** np.arange(s * r, dtype=np.int64)
    for start in range(0, total, 4096):
        stop = min(start + 4096, total)
        idx = np.arange(start, stop, dtype=np.int64)
        T = stop - start
        X = np.broadcast_to(base, (T, n, n)).copy()
        X[:, r:, :r] = ((idx[:, None] // powers) % p).reshape(T, s, r)
        cyclic_found += int(_cyclic_mask_batched(X, p).sum())
    return total - cyclic_found


def _cyclic_mask_batched(X: np.ndarray, p: int, probes=None) -> np.ndarray:
    """Exact cyclicity for a batch: cheap Krylov-rank certificates (a full
    Krylov matrix of any probe vector being nonsingular proves cyclicity)
    settle most members; the remainder gets the exact power-span rank test."""
    T, n, _ = X.shape
    if probes is None:
        v1 = np.zeros((T, n), dtype=np.int64)
        v1[:, n - 1] = 1
        v2 = np.ones((T, n), dtype=np.int64)
        probes = (v1, v2)
    cyc = np.zeros(T, dtype=bool)
    rest = np.arange(T)
    for v in probes:
        got = la.nonsingular_batch_p(la.krylov_batch_p(X[rest], v[rest], p), p)
        cyc[rest[got]] = True
        rest = rest[~got]
        if rest.size == 0:
            return cyc
    cyc[rest] = la.cyclic_batch_p(X[rest], p)
    return cyc


def _enumerate_direct(n, r, field, mode):
    """Matrix-by-matrix scan: C innermost, cyclicity cached per A and per B,
    C-loop skipped when A or B is already non-cyclic."""
    s = n - r
    q = field.q
    qrs = q ** (r * s)
    a_list = [(M, is_cyclic(M)) for M in _all_mats(field, r)]
    b_list = [(M, is_cyclic(M)) for M in _all_mats(field, s)]
    if mode == "group":
        from .matspace import det
        a_list = [(M, c) for M, c in a_list if det(M).index != 0]
        b_list = [(M, c) for M, c in b_list if det(M).index != 0]
    n1 = n2 = n3 = 0
    for A, cyc_a in a_list:
        for B, cyc_b in b_list:
            if not cyc_a:
                n1 += qrs
            elif not cyc_b:
                n2 += qrs
            else:
                for c in _iter_c_blocks(field, s, r):
                    if not is_cyclic(stab_embed(StabMat(A, B, c))):
                        n3 += 1
    total = len(a_list) * len(b_list) * qrs
    return total, n1, n2, n3


def _enumerate_types(n, r, field, mode):
    """Conjugacy-type scan: class sizes from the centralizer formula; the C
    block is only iterated per cyclic type pair with non-coprime
    characteristic polynomials (coprime pairs are always cyclic)."""
    s = n - r
    q = field.q
    qrs = q ** (r * s)
    invertible = mode == "group"

    def side(k):
        types = [tp for tp in matrix_types(k, field)
                 if tp.is_invertible or not invertible]
        total = sum(tp.class_size for tp in types)
        noncyc = sum(tp.class_size for tp in types if not tp.is_cyclic)
        cyc = [(tp.char_poly, tp.class_size, tp.rep()) for tp in types if tp.is_cyclic]
        return total, noncyc, cyc

    a_total, a_noncyc, a_cyc = side(r)
    b_total, b_noncyc, b_cyc = side(s)
    n1 = a_noncyc * b_total * qrs
    n2 = (a_total - a_noncyc) * b_noncyc * qrs
    n3 = 0
    for ca, size_a, rep_a in a_cyc:
        for cb, size_b, rep_b in b_cyc:
            if poly_gcd(ca, cb).degree == 0:
                continue
            n3 += size_a * size_b * _count_noncyclic_c(rep_a, rep_b, field)
    total = a_total * b_total * qrs
    return total, n1, n2, n3


def enumerate_exact(n: int, r: int, q, mode: str = "algebra",
                    budget: int = DEFAULT_BUDGET,
                    strategy: str = "auto") -> DensityReport:
    """Exact case counts over all of M(V)_U (or GL(V)_U in group mode)."""
    field = _as_field(q)
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    if mode not in ("algebra", "group"):
        raise ValueError(f"unknown mode {mode!r}")
    if strategy not in ("auto", "direct", "types"):
        raise ValueError(f"unknown strategy {strategy!r}")
    state_space = field.q ** (n * n - n * r + r * r)
    if state_space > budget:
        raise BudgetExceededError(state_space, budget)
    if strategy == "auto":
        strategy = "direct" if state_space <= DIRECT_CUTOFF else "types"
    run = _enumerate_direct if strategy == "direct" else _enumerate_types
    total, n1, n2, n3 = run(n, r, field, mode)

    expect = orders(n, r, field.q)
    assert total == (expect.m_order if mode == "algebra" else expect.glu_order)
    report = DensityReport(
        n=n, r=r, q=field.q, p=field.p, k=field.k,
        modulus=field.modulus_str() if field.k > 1 else None,
        mode=mode, method="exact", total=total,
        n1=n1, n2=n2, n3=n3,
        pi=Fraction(n1 + n2 + n3, total),
        pi1=Fraction(n1, total),
        pi2=Fraction(n2, total),
        pi3=Fraction(n3, total),
        bounds=bounds_report(n, r, field.q),
    )
    check_bounds(report)
    return report


# ---------------------------------------------------------------------------
# Monte Carlo


def _mc_chunk_scalar(field, n, r, mode, rng, count):
    counts = dict.fromkeys(CASES, 0)
    for _ in range(count):
        counts[classify(stab_sample(n, r, field, rng, mode))] += 1
    return counts


def _mc_chunk_batched(field, n, r, mode, rng, count):
    """Prime-field chunk: bulk draws, a batched Krylov certificate with a
    random per-trial probe vector, then the exact power-span test for the
    remainder; case classification is batched as well."""
    p = field.p
    s = n - r
    m = r * r + s * s + s * r
    vals = rng.integers(0, p, size=(count, m), dtype=np.int64)
    if mode == "group":
        def invertible(rows):
            a = vals[rows, : r * r].reshape(-1, r, r)
            b = vals[rows, r * r: r * r + s * s].reshape(-1, s, s)
            return la.nonsingular_batch_p(a, p) & la.nonsingular_batch_p(b, p)

        pending = np.nonzero(~invertible(np.arange(count)))[0]
        while pending.size:
            vals[pending] = rng.integers(0, p, size=(pending.size, m),
                                         dtype=np.int64)
            pending = pending[~invertible(pending)]
    v1 = rng.integers(0, p, size=(count, n), dtype=np.int64)
    v2 = rng.integers(0, p, size=(count, n), dtype=np.int64)

    A = vals[:, : r * r].reshape(count, r, r)
    B = vals[:, r * r: r * r + s * s].reshape(count, s, s)
    C = vals[:, r * r + s * s:].reshape(count, s, r)
    X = np.zeros((count, n, n), dtype=np.int64)
    X[:, :r, :r] = A
    X[:, r:, r:] = B
    X[:, r:, :r] = C

    cyc = _cyclic_mask_batched(X, p, probes=(v1, v2))

    counts = dict.fromkeys(CASES, 0)
    counts["cyclic"] = int(cyc.sum())
    bad = np.nonzero(~cyc)[0]
    if bad.size:
        a_cyc = la.cyclic_batch_p(A[bad], p)
        counts["case_i"] = int((~a_cyc).sum())
        sub = bad[a_cyc]
        if sub.size:
            b_cyc = la.cyclic_batch_p(B[sub], p)
            counts["case_ii"] = int((~b_cyc).sum())
            counts["case_iii"] = int(b_cyc.sum())
    return counts


def _mc_worker(args) -> tuple[int, int, int, int]:
    (p, k, modulus, n, r, mode, seed, first_chunk, n_chunks, trials) = args
    field = FieldSpec(p, k, modulus)
    totals = dict.fromkeys(CASES, 0)
    for c in range(first_chunk, first_chunk + n_chunks):
        start = c * CHUNK_TRIALS
        count = min(CHUNK_TRIALS, trials - start)
        if count <= 0:
            break
        rng = Generator(Philox(key=np.array([seed, c], dtype=np.uint64)))
        if field.k == 1:
            counts = _mc_chunk_batched(field, n, r, mode, rng, count)
        else:
            counts = _mc_chunk_scalar(field, n, r, mode, rng, count)
        for key in CASES:
            totals[key] += counts[key]
    return tuple(totals[key] for key in CASES)


def monte_carlo(n: int, r: int, q, mode: str = "algebra", trials: int = 100000,
                seed: int = 0, ci_level: float = 0.99,
                workers: int = 1) -> DensityReport:
    """Seeded Monte Carlo density estimate; byte-identical output for a fixed
    seed regardless of the worker count."""
    field = _as_field(q)
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    if mode not in ("algebra", "group"):
        raise ValueError(f"unknown mode {mode!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    seed = int(seed) % (1 << 64)

    n_chunks = (trials + CHUNK_TRIALS - 1) // CHUNK_TRIALS
    base_args = (field.p, field.k, field.modulus, n, r, mode, seed)
    if workers == 1 or n_chunks == 1:
        parts = [_mc_worker(base_args + (0, n_chunks, trials))]
    else:
        per = (n_chunks + workers - 1) // workers
        jobs = [base_args + (w * per, per, trials)
                for w in range(workers) if w * per < n_chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_mc_worker, jobs))
    ncyc, n1, n2, n3 = (sum(part[i] for part in parts) for i in range(4))
    assert ncyc + n1 + n2 + n3 == trials

    noncyc = n1 + n2 + n3
    report = DensityReport(
        n=n, r=r, q=field.q, p=field.p, k=field.k,
        modulus=field.modulus_str() if field.k > 1 else None,
        mode=mode, method="monte_carlo", total=trials,
        n1=n1, n2=n2, n3=n3,
        pi=noncyc / trials, pi1=n1 / trials, pi2=n2 / trials, pi3=n3 / trials,
        pi_ci=wilson_interval(noncyc, trials, ci_level),
        pi1_ci=wilson_interval(n1, trials, ci_level),
        pi2_ci=wilson_interval(n2, trials, ci_level),
        pi3_ci=wilson_interval(n3, trials, ci_level),
        seed=seed, trials=trials, ci_level=ci_level,
        bounds=bounds_report(n, r, field.q),
    )
    check_bounds(report)
    return report


# ---------------------------------------------------------------------------
# grid sweeps


@dataclass
class SweepItem:
    n: int
    r: int
    q: int
    report: DensityReport | None = None
    error: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n, "r": self.r, "q": self.q,
            "report": self.report.to_json_dict() if self.report else None,
            "error": self.error,
        }


def sweep(points: Iterable[tuple[int, int, object]], mode: str = "algebra",
          method: str = "exact", budget: int = DEFAULT_BUDGET,
          trials: int = 100000, seed: int = 0, ci_level: float = 0.99,
          workers: int = 1) -> Iterator[SweepItem]:
    """Run every grid point, isolating per-point failures.  Monte Carlo
    points use the derived seed (seed + point index) mod 2^64, embedded in
    the report."""
    if method not in ("exact", "monte_carlo"):
        raise ValueError(f"unknown method {method!r}")
    for i, (n, r, q) in enumerate(points):
        field = _as_field(q)
        try:
            if method == "exact":
                report = enumerate_exact(n, r, field, mode=mode, budget=budget)
            else:
                report = monte_carlo(n, r, field, mode=mode, trials=trials,
                                     seed=(seed + i) % (1 << 64),
                                     ci_level=ci_level, workers=workers)
            yield SweepItem(n, r, field.q, report=report)
        except Exception as exc:  # per-point isolation by contract
            yield SweepItem(n, r, field.q, error=f"{type(exc).__name__}: {exc}")
