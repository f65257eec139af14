"""Seeded, reproducible experiments around the random product construction.

A trial draws B (n x c*log2(n)) and C (c*log2(n) x n) with i.i.d. uniform
entries, forms A = B*C over GF(2), and measures: the density of A, the
absence of large all-ones/all-zeros submatrices (budgeted evidence), rank
statistics of random square submatrices of the factors with the exact
Sylvester rank inequality checked on every sampled pair, and the size of
the composed product circuit (fan-in-2 and depth-4), which is verified
exactly.  The ratio of the k-freeness density quantity to the composed
gate count is the per-trial proxy for the OR-vs-XOR separation.

Everything is a pure function of (config, trial index): sub-streams are
derived per trial and per stage, so trials are order-independent and can
run in parallel.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .rng import SplitMix64, derive_seed, words_np
from .matrices import (
    BitMatrix,
    Submatrix,
    complement,
    find_allones_submatrix,
    gen_random,
    mul_gf2,
    popcount,
    rank_gf2,
)
from .bounds import KFreeStatus, kfree_quantity
from .circuits import depth_layered
from .synthesis import paar_greedy, product_circuit


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one separation experiment; serialized into every
    report so trials are reconstructible bit-exactly."""

    n: int
    master_seed: int
    c: int = 14
    trials: int = 8
    submatrix_budget: int = 50_000
    rank_samples: int = 50

    @property
    def inner_dim(self) -> int:
        """c * log2(n), rounded up for non-powers of two."""
        return max(1, math.ceil(self.c * math.log2(self.n)))

    @property
    def freeness_k(self) -> int:
        return max(1, math.ceil(2 * math.log2(self.n)))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "master_seed": self.master_seed,
            "c": self.c,
            "trials": self.trials,
            "submatrix_budget": self.submatrix_budget,
            "rank_samples": self.rank_samples,
            "inner_dim": self.inner_dim,
            "freeness_k": self.freeness_k,
        }


@dataclass(frozen=True)
class RankStats:
    """Min/mean GF(2) rank over sampled k x k submatrices."""

    k: int
    clipped: bool
    samples: int
    min_rank: int
    mean_rank: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "clipped": self.clipped,
            "samples": self.samples,
            "min_rank": self.min_rank,
            "mean_rank": self.mean_rank,
        }


def _sample_indices(rng: SplitMix64, population: int, k: int) -> list[int]:
    idx = list(range(population))
    for i in range(k):
        j = i + rng.randrange(population - i)
        idx[i], idx[j] = idx[j], idx[i]
    return sorted(idx[:k])


def _submatrix(a: BitMatrix, row_idx: list[int], col_idx: list[int]) -> BitMatrix:
    rows = []
    for i in row_idx:
        r = a.row(i)
        rows.append(sum(((r >> c) & 1) << t for t, c in enumerate(col_idx)))
    return BitMatrix(len(row_idx), len(col_idx), rows)


def submatrix_rank_stats(
    b: BitMatrix, k: int, samples: int, seed: int, clipped: bool = False
) -> RankStats:
    """Rank distribution over ``samples`` random k x k submatrices."""
    if k > min(b.rows, b.cols):
        raise ValueError(f"k={k} exceeds min dimension of {b.rows}x{b.cols}")
    rng = SplitMix64(seed)
    ranks = []
    for _ in range(samples):
        rows = _sample_indices(rng, b.rows, k)
        cols = _sample_indices(rng, b.cols, k)
        ranks.append(rank_gf2(_submatrix(b, rows, cols)))
    return RankStats(
        k, clipped, samples, min(ranks), sum(ranks) / len(ranks)
    )


@dataclass(frozen=True)
class RamseyOutcome:
    t: int
    status: str  # "evidence-ramsey" | "refuted"
    refuted_side: Optional[str] = None  # "ones" | "zeros"
    witness: Optional[Submatrix] = None
    budget: int = 0
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "status": self.status,
            "refuted_side": self.refuted_side,
            "witness": None
            if self.witness is None
            else {"rows": list(self.witness.row_idx), "cols": list(self.witness.col_idx)},
            "budget": self.budget,
            "seed": self.seed,
        }


def ramsey_check(a: BitMatrix, t: int, budget: int, seed: int) -> RamseyOutcome:
    """Evidence that both the matrix and its complement are (t-1)-free,
    i.e. neither has a t x t monochromatic block."""
    w = find_allones_submatrix(a, t - 1, budget=budget, seed=derive_seed(seed, 0))
    if w is not None:
        return RamseyOutcome(t, "refuted", "ones", w, budget, seed)
    w = find_allones_submatrix(
        complement(a), t - 1, budget=budget, seed=derive_seed(seed, 1)
    )
    if w is not None:
        return RamseyOutcome(t, "refuted", "zeros", w, budget, seed)
    return RamseyOutcome(t, "evidence-ramsey", None, None, budget, seed)


@dataclass(frozen=True)
class TrialReport:
    """Everything measured in one seeded trial of the product experiment."""

    trial_index: int
    seed: int
    n: int
    inner_dim: int
    popcount: int
    density: float
    freeness_k: int
    kfree: KFreeStatus
    allones_witness: Optional[Submatrix]
    allzeros_witness: Optional[Submatrix]
    rank_stats_b: RankStats
    rank_stats_c: RankStats
    sylvester_ok: bool
    composed_gates: int
    composed_wires: int
    composed_depth: int
    ratio_proxy: Optional[float]

    def to_dict(self) -> dict:
        return {
            "trial_index": self.trial_index,
            "seed": self.seed,
            "n": self.n,
            "inner_dim": self.inner_dim,
            "popcount": self.popcount,
            "density": self.density,
            "freeness_k": self.freeness_k,
            "kfree": self.kfree.to_dict(),
            "allones_witness": None
            if self.allones_witness is None
            else {
                "rows": list(self.allones_witness.row_idx),
                "cols": list(self.allones_witness.col_idx),
            },
            "allzeros_witness": None
            if self.allzeros_witness is None
            else {
                "rows": list(self.allzeros_witness.row_idx),
                "cols": list(self.allzeros_witness.col_idx),
            },
            "rank_stats_b": self.rank_stats_b.to_dict(),
            "rank_stats_c": self.rank_stats_c.to_dict(),
            "sylvester_ok": self.sylvester_ok,
            "composed_gates": self.composed_gates,
            "composed_wires": self.composed_wires,
            "composed_depth": self.composed_depth,
            "ratio_proxy": self.ratio_proxy,
        }


def trial_matrices(config: ExperimentConfig, trial_index: int) -> tuple[BitMatrix, BitMatrix, BitMatrix]:
    """The (B, C, A) triple of a trial, bit-exact from (config, index)."""
    seed = derive_seed(config.master_seed, trial_index)
    b = gen_random(config.n, config.inner_dim, derive_seed(seed, 1))
    c = gen_random(config.inner_dim, config.n, derive_seed(seed, 2))
    return b, c, mul_gf2(b, c)


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialReport:
    n = config.n
    inner = config.inner_dim
    seed = derive_seed(config.master_seed, trial_index)
    b, c, a = trial_matrices(config, trial_index)
    pc = popcount(a)
    k = config.freeness_k

    kstatus = kfree_quantity(
        a, k, evidence_budget=config.submatrix_budget, seed=derive_seed(seed, 3)
    )
    ones_w = find_allones_submatrix(
        a, k, budget=config.submatrix_budget, seed=derive_seed(seed, 4)
    )
    zeros_w = find_allones_submatrix(
        complement(a), k, budget=config.submatrix_budget, seed=derive_seed(seed, 5)
    )

    krank = min(5 * max(1, math.ceil(math.log2(n))), inner, n)
    clipped = krank < 5 * math.ceil(math.log2(n))
    stats_b = submatrix_rank_stats(
        b, krank, config.rank_samples, derive_seed(seed, 6), clipped=clipped
    )
    stats_c = submatrix_rank_stats(
        c, krank, config.rank_samples, derive_seed(seed, 7), clipped=clipped
    )

    sylvester_ok = True
    rng = SplitMix64(derive_seed(seed, 8))
    for _ in range(config.rank_samples):
        rows = _sample_indices(rng, n, krank)
        cols = _sample_indices(rng, n, krank)
        b_sub = _submatrix(b, rows, list(range(inner)))
        c_sub = _submatrix(c, list(range(inner)), cols)
        if rank_gf2(mul_gf2(b_sub, c_sub)) < rank_gf2(b_sub) + rank_gf2(c_sub) - inner:
            sylvester_ok = False  # would contradict exact linear algebra

    fan2 = product_circuit(b, c, "fanin2")
    layered = product_circuit(b, c, "depth4")
    ratio = None if kstatus.quantity is None else kstatus.quantity / fan2.cost
    return TrialReport(
        trial_index=trial_index,
        seed=seed,
        n=n,
        inner_dim=inner,
        popcount=pc,
        density=pc / (n * n),
        freeness_k=k,
        kfree=kstatus,
        allones_witness=ones_w,
        allzeros_witness=zeros_w,
        rank_stats_b=stats_b,
        rank_stats_c=stats_c,
        sylvester_ok=sylvester_ok,
        composed_gates=fan2.cost,
        composed_wires=layered.cost,
        composed_depth=depth_layered(layered.circuit),
        ratio_proxy=ratio,
    )


def _trial_worker(args: tuple[ExperimentConfig, int]) -> TrialReport:
    return run_trial(*args)


@dataclass(frozen=True)
class SeparationReport:
    config: ExperimentConfig
    trials: tuple[TrialReport, ...]

    @property
    def min_density(self) -> float:
        return min(t.density for t in self.trials)

    @property
    def median_ratio_proxy(self) -> Optional[float]:
        vals = [t.ratio_proxy for t in self.trials if t.ratio_proxy is not None]
        return statistics.median(vals) if vals else None

    @property
    def max_composed_gates(self) -> int:
        return max(t.composed_gates for t in self.trials)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "trials": [t.to_dict() for t in self.trials],
            "min_density": self.min_density,
            "median_ratio_proxy": self.median_ratio_proxy,
            "max_composed_gates": self.max_composed_gates,
        }


def run_experiment(config: ExperimentConfig, threads: int = 1) -> SeparationReport:
    """All trials of a config; aggregation is sorted by trial index, so
    the report is independent of the execution schedule."""
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            reports = list(
                pool.map(_trial_worker, [(config, t) for t in range(config.trials)])
            )
    else:
        reports = [run_trial(config, t) for t in range(config.trials)]
    reports.sort(key=lambda r: r.trial_index)
    return SeparationReport(config, tuple(reports))


# ---------------------------------------------------------------------------
# Conditional-bias estimate (rejection sampling at tiny m)


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval (by default); well behaved near 1/2 and
    for small accepted counts."""
    if n == 0:
        return 0.0, 1.0
    phat = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = phat + z2 / (2 * n)
    half = z * math.sqrt(phat * (1 - phat) / n + z2 / (4 * n * n))
    return (centre - half) / denom, (centre + half) / denom


@dataclass(frozen=True)
class BiasReport:
    m: int
    inner: int
    undefined_cell: tuple[int, int]
    samples: int
    accepted: int
    ones: int
    estimate: Optional[float]
    wilson_low: Optional[float]
    wilson_high: Optional[float]
    status: str  # "ok" | "insufficient-samples"
    seed: int
    min_accepted: int

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "inner": self.inner,
            "undefined_cell": list(self.undefined_cell),
            "samples": self.samples,
            "accepted": self.accepted,
            "ones": self.ones,
            "estimate": self.estimate,
            "wilson_low": self.wilson_low,
            "wilson_high": self.wilson_high,
            "status": self.status,
            "seed": self.seed,
            "min_accepted": self.min_accepted,
        }


def _parse_mask(mask_pattern) -> tuple[int, tuple[int, int], list[tuple[int, int, int]]]:
    m = len(mask_pattern)
    undefined = None
    defined = []
    for i, row in enumerate(mask_pattern):
        if len(row) != m:
            raise ValueError("mask must be square")
        for j, v in enumerate(row):
            if v is None:
                if undefined is not None:
                    raise ValueError("mask must leave exactly one entry undefined")
                undefined = (i, j)
            elif v in (0, 1):
                defined.append((i, j, v))
            else:
                raise ValueError(f"mask entry {v!r} is not 0, 1 or None")
    if undefined is None:
        raise ValueError("mask must leave exactly one entry undefined")
    return m, undefined, defined


def estimate_conditional_bias(
    m: int,
    mask_pattern,
    samples: int,
    seed: int,
    min_accepted: int = 100,
    batch: int = 1 << 18,
) -> BiasReport:
    """Monte Carlo estimate of P(undefined product entry = 1 | the other
    entries match the mask), for uniform B (m x 7m) and C (7m x m).

    Rejection sampling, vectorized: raw sample ``s`` consumes stream
    words ``[2m*s, 2m*(s+1))`` (B rows first, then C columns, each
    masked to 7m bits), so results are independent of batching.  Only
    feasible for m <= 4, where the acceptance rate is at worst ~2^-15.
    """
    msize, (p, q), defined = _parse_mask(mask_pattern)
    if msize != m:
        raise ValueError(f"mask is {msize}x{msize}, expected {m}x{m}")
    if m > 4:
        raise ValueError("rejection sampling is only feasible for m <= 4")
    inner = 7 * m
    lanes = 2 * m
    mask_bits = np.uint64((1 << inner) - 1)
    one = np.uint64(1)
    accepted = 0
    ones = 0
    pos = 0
    while pos < samples:
        cnt = min(batch, samples - pos)
        w = words_np(seed, pos * lanes, cnt * lanes).reshape(cnt, lanes) & mask_bits
        bcols = w[:, :m]
        ccols = w[:, m:]
        ok = np.ones(cnt, dtype=bool)
        for i, j, v in defined:
            e = np.bitwise_count(bcols[:, i] & ccols[:, j]) & one
            ok &= e == v
        target = (np.bitwise_count(bcols[:, p] & ccols[:, q]) & one)[ok]
        accepted += int(target.size)
        ones += int(target.sum())
        pos += cnt
    if accepted < min_accepted:
        return BiasReport(
            m, inner, (p, q), samples, accepted, ones,
            None, None, None, "insufficient-samples", seed, min_accepted,
        )
    lo, hi = wilson_interval(ones, accepted)
    return BiasReport(
        m, inner, (p, q), samples, accepted, ones,
        ones / accepted, lo, hi, "ok", seed, min_accepted,
    )


def exact_conditional_bias(mask_pattern, inner: Optional[int] = None) -> Fraction:
    """Exact conditional probability for m = 2 by dependence-class
    counting (exponentially faster than enumerating all (B, C) pairs and
    bit-identical to it; the tests cross-check small inner widths).

    For fixed rows (b1, b2) of B, the two product entries fed by one
    column of C are (i) both zero, (ii) one free uniform bit, or (iii)
    two bits that are equal, or independent -- depending only on whether
    b1, b2 are zero or coincide.  Columns of C are independent, so the
    joint law of the four entries is a mixture over the five (b1, b2)
    classes with Fraction-exact weights.
    """
    m, (p, q), defined = _parse_mask(mask_pattern)
    if m != 2:
        raise ValueError("the exact oracle is implemented for m = 2")
    if inner is None:
        inner = 7 * m
    size = 1 << inner
    # class weights over (b1, b2): both zero / b1 zero / b2 zero / equal / free
    w_zz = Fraction(1, size * size)
    w_z1 = Fraction(size - 1, size * size)  # b1 = 0, b2 != 0
    w_1z = Fraction(size - 1, size * size)
    w_eq = Fraction(size - 1, size * size)
    w_free = Fraction(size * size - 3 * (size - 1) - 1, size * size)

    def column_law(cls: str, e1: int, e2: int) -> Fraction:
        # P[(b1.c, b2.c) = (e1, e2)] for one uniform column c
        if cls == "zz":
            return Fraction(int(e1 == 0 and e2 == 0))
        if cls == "z1":
            return Fraction(int(e1 == 0), 2)
        if cls == "1z":
            return Fraction(int(e2 == 0), 2)
        if cls == "eq":
            return Fraction(int(e1 == e2), 2)
        return Fraction(1, 4)

    weights = {"zz": w_zz, "z1": w_z1, "1z": w_1z, "eq": w_eq, "free": w_free}
    num = Fraction(0)
    den = Fraction(0)
    for target_val in (0, 1):
        entries = {(i, j): v for i, j, v in defined}
        entries[(p, q)] = target_val
        prob = Fraction(0)
        for cls, wt in weights.items():
            col0 = column_law(cls, entries[(0, 0)], entries[(1, 0)])
            col1 = column_law(cls, entries[(0, 1)], entries[(1, 1)])
            prob += wt * col0 * col1
        den += prob
        if target_val == 1:
            num += prob
    if den == 0:
        raise ValueError("mask has zero acceptance probability")
    return num / den


# ---------------------------------------------------------------------------
# Ratio sweep


@dataclass(frozen=True)
class SweepPoint:
    n: int
    median_ratio_proxy: Optional[float]
    median_heuristic_ratio: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "median_ratio_proxy": self.median_ratio_proxy,
            "median_heuristic_ratio": self.median_heuristic_ratio,
        }


@dataclass(frozen=True)
class SweepReport:
    points: tuple[SweepPoint, ...]
    ratio_proxy_nondecreasing: Optional[bool]
    heuristic_ratio_nondecreasing: Optional[bool]
    configs: tuple[ExperimentConfig, ...]

    def to_dict(self) -> dict:
        return {
            "points": [p.to_dict() for p in self.points],
            "ratio_proxy_nondecreasing": self.ratio_proxy_nondecreasing,
            "heuristic_ratio_nondecreasing": self.heuristic_ratio_nondecreasing,
            "configs": [c.to_dict() for c in self.configs],
        }


def ratio_sweep(ns: list[int], base: ExperimentConfig, threads: int = 1) -> SweepReport:
    """Medians of the separation proxies across a size sweep.

    Per n: the median ratio_proxy over the trials, and the median of
    (greedy-heuristic gate count) / (composed product gate count) -- the
    measured counterpart of the heuristic approximation gap.  With more
    than one n, the report asserts both medians are nondecreasing (a
    trend check, not an asymptotic claim).
    """
    points = []
    configs = []
    for n in ns:
        cfg = ExperimentConfig(
            n=n,
            master_seed=base.master_seed,
            c=base.c,
            trials=base.trials,
            submatrix_budget=base.submatrix_budget,
            rank_samples=base.rank_samples,
        )
        configs.append(cfg)
        report = run_experiment(cfg, threads=threads)
        proxies = [
            t.ratio_proxy for t in report.trials if t.ratio_proxy is not None
        ]
        heuristic = []
        for t in report.trials:
            _, _, a = trial_matrices(cfg, t.trial_index)
            heuristic.append(paar_greedy(a).cost / t.composed_gates)
        points.append(
            SweepPoint(
                n,
                statistics.median(proxies) if proxies else None,
                statistics.median(heuristic),
            )
        )
    trend_proxy = None
    trend_heur = None
    if len(points) > 1:
        proxy_vals = [p.median_ratio_proxy for p in points]
        trend_proxy = all(
            a is not None and b is not None and a <= b
            for a, b in zip(proxy_vals, proxy_vals[1:])
        )
        heur_vals = [p.median_heuristic_ratio for p in points]
        trend_heur = all(a <= b for a, b in zip(heur_vals, heur_vals[1:]))
    return SweepReport(tuple(points), trend_proxy, trend_heur, tuple(configs))
