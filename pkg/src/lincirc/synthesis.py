"""Circuit construction procedures.

Heuristics (`naive_rowwise`, `paar_greedy`, `boyar_peralta`) build
cancellation-free circuits by design: they only ever combine signals with
disjoint supports.  The block constructions (`lupanov`, `lupanov_depth2`)
give the generic size guarantees; the explicit families
(`sierpinski_circuit`, `setintersection_or_circuit`, `hadamard_circuit`)
and the transforms (`complement_transform`, `product_circuit`) give the
structured circuits the rest of the package studies.  Every result is
verified exactly against its target matrix before it is returned.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

from .matrices import (
    BitMatrix,
    DimensionError,
    gen_setintersection,
    gen_sierpinski,
    gen_hadamard,
    mul_gf2,
    rank_factorize_gf2,
)
from .circuits import (
    XOR,
    OR,
    AnyCircuit,
    Circuit,
    LayeredCircuit,
    compose,
    compose_layered,
    flatten,
    is_cancellation_free,
    size_wires,
    verify,
)


@dataclass(frozen=True)
class SynthesisResult:
    """A verified circuit plus provenance: method name, measured cost
    (gates, or wires for layered circuits) and cancellation-freeness."""

    circuit: AnyCircuit
    method: str
    cost: int
    cancellation_free: bool
    params: dict = field(default_factory=dict)


class _Builder:
    __slots__ = ("n", "connective", "gates")

    def __init__(self, n: int, connective: str):
        self.n = n
        self.connective = connective
        self.gates: list[tuple[int, int]] = []

    def gate(self, a: int, b: int) -> int:
        self.gates.append((a, b))
        return self.n + len(self.gates) - 1

    def circuit(self, outputs) -> Circuit:
        return Circuit(self.n, self.connective, tuple(self.gates), tuple(outputs))


def _cancellation_flag(c: AnyCircuit) -> bool:
    """OR circuits admit no cancellation (absorption is not the GF(2)
    identity), so they report True; XOR circuits get the support test."""
    flat = flatten(c) if isinstance(c, LayeredCircuit) else c
    if flat.connective == OR:
        return True
    return is_cancellation_free(flat)


def _result(circuit: AnyCircuit, method: str, target: BitMatrix, **params) -> SynthesisResult:
    flat = flatten(circuit) if isinstance(circuit, LayeredCircuit) else circuit
    if not verify(flat, target):
        raise RuntimeError(f"synthesis bug: {method} output does not verify")
    cost = size_wires(circuit) if isinstance(circuit, LayeredCircuit) else len(circuit.gates)
    return SynthesisResult(circuit, method, cost, _cancellation_flag(circuit), params)


def _row_bits(r: int) -> list[int]:
    out = []
    while r:
        out.append((r & -r).bit_length() - 1)
        r &= r - 1
    return out


# ---------------------------------------------------------------------------
# Row-by-row and greedy heuristics


def naive_rowwise(a: BitMatrix, connective: str = XOR) -> SynthesisResult:
    """Compute each row independently: a weight-w row costs w - 1 gates.

    Zero rows become constant-zero output markers, not gates.
    """
    b = _Builder(a.cols, connective)
    outputs: list[Optional[int]] = []
    for i in range(a.rows):
        bits = _row_bits(a.row(i))
        if not bits:
            outputs.append(None)
            continue
        sig = bits[0]
        for nxt in bits[1:]:
            sig = b.gate(sig, nxt)
        outputs.append(sig)
    return _result(b.circuit(outputs), "naive", a)


def paar_greedy(a: BitMatrix) -> SynthesisResult:
    """Greedy pair sharing: repeatedly replace the pair of signals that
    co-occurs in the most rows by a fresh gate.

    Ties break on the lexicographically smallest signal-index pair.  The
    invariant that each row is a disjoint partition of its support makes
    the output cancellation-free.
    """
    m, n = a.rows, a.cols
    b = _Builder(n, XOR)
    rowsets: list[set[int]] = []
    usage: dict[int, int] = {}  # signal -> bitmask of rows containing it
    for i in range(m):
        bits = set(_row_bits(a.row(i)))
        rowsets.append(bits)
        for j in bits:
            usage[j] = usage.get(j, 0) | (1 << i)

    heap: list[tuple[int, int, int]] = []
    live = sorted(usage)
    for ai in range(len(live)):
        ua = usage[live[ai]]
        for bi in range(ai + 1, len(live)):
            cnt = (ua & usage[live[bi]]).bit_count()
            if cnt:
                heap.append((-cnt, live[ai], live[bi]))
    heapq.heapify(heap)

    while heap:
        negcnt, si, sj = heapq.heappop(heap)
        ui = usage.get(si, 0)
        uj = usage.get(sj, 0)
        cur = (ui & uj).bit_count()
        if cur == 0:
            continue
        if cur != -negcnt:
            heapq.heappush(heap, (-cur, si, sj))  # counts only ever shrink
            continue
        snew = b.gate(si, sj)
        both = ui & uj
        usage[snew] = both
        for s, u in ((si, ui & ~both), (sj, uj & ~both)):
            if u:
                usage[s] = u
            else:
                del usage[s]
        rows = both
        while rows:
            r = (rows & -rows).bit_length() - 1
            rows &= rows - 1
            rowsets[r].discard(si)
            rowsets[r].discard(sj)
            rowsets[r].add(snew)
        unew = usage[snew]
        for t, ut in usage.items():
            if t == snew:
                continue
            cnt = (unew & ut).bit_count()
            if cnt:
                heapq.heappush(heap, (-cnt, min(snew, t), max(snew, t)))

    outputs = [next(iter(rs)) if rs else None for rs in rowsets]
    return _result(b.circuit(outputs), "paar", a, tie_break="lexicographic pair")


def _min_disjoint_cover(
    target: int, base_values: list[int], node_budget: int
) -> tuple[list[int], bool]:
    """Smallest set of pairwise-disjoint base signals whose union is
    exactly ``target``.

    Exact branch-and-bound on the lowest uncovered bit, falling back to
    the best cover found once ``node_budget`` nodes are spent (the flag
    reports whether the search stayed exact).  Unit signals are assumed
    present, so a cover always exists.
    """
    by_bit: dict[int, list[int]] = {}
    for v in base_values:
        if v and v & ~target == 0:
            bit = (v & -v).bit_length() - 1
            by_bit.setdefault(bit, []).append(v)
    for vs in by_bit.values():
        vs.sort(key=lambda v: (-v.bit_count(), v))
    max_w = max(v.bit_count() for vs in by_bit.values() for v in vs)

    best: list[int] = []
    best_size = target.bit_count() + 1
    nodes = 0
    exact = True

    def rec(remaining: int, used: list[int]) -> None:
        nonlocal best, best_size, nodes, exact
        if not remaining:
            if len(used) < best_size:
                best_size = len(used)
                best = used[:]
            return
        if len(used) + (remaining.bit_count() + max_w - 1) // max_w >= best_size:
            return
        if nodes >= node_budget:
            exact = False
            return
        nodes += 1
        bit = (remaining & -remaining).bit_length() - 1
        for v in by_bit.get(bit, ()):
            if v & ~remaining == 0:
                used.append(v)
                rec(remaining & ~v, used)
                used.pop()

    rec(target, [])
    return best, exact


def boyar_peralta(a: BitMatrix, cover_node_budget: int = 20_000) -> SynthesisResult:
    """Distance-guided greedy signal creation.

    The distance of a row is the minimum number of additional gates
    needed to reach it from the current base by disjoint combination.
    Each step adds the disjoint pair that minimizes the total distance;
    ties maximize the Euclidean norm of the distance vector, then take
    the lowest signal-index pair.  Output is cancellation-free.
    """
    n = a.cols
    b = _Builder(n, XOR)
    base: list[int] = [1 << i for i in range(n)]
    in_base = set(base)
    pending = sorted({r for r in (a.row(i) for i in range(a.rows)) if r and r not in in_base})
    exact_all = True

    def dist_of(t: int, values: list[int]) -> int:
        nonlocal exact_all
        cover, exact = _min_disjoint_cover(t, values, cover_node_budget)
        exact_all = exact_all and exact
        return len(cover) - 1

    dist = {t: dist_of(t, base) for t in pending}
    max_steps = 2 * sum(dist.values()) + 16  # ample; exact distances drop by >= 1 per step
    steps = 0
    while pending:
        steps += 1
        if steps > max_steps:
            raise RuntimeError(
                "distance-guided greedy stalled; raise cover_node_budget"
            )
        total = sum(dist.values())
        cands: list[tuple[int, float, tuple[int, int], int]] = []
        seen_vals = set()
        for i in range(len(base)):
            vi = base[i]
            for j in range(i + 1, len(base)):
                vj = base[j]
                if vi & vj:
                    continue
                v = vi | vj
                if v in in_base or v in seen_vals:
                    continue
                if not any(v & ~t == 0 for t in pending):
                    continue  # useless for every remaining disjoint cover
                seen_vals.add(v)
                trial = base + [v]
                newd = {t: dist_of(t, trial) for t in pending}
                s = sum(newd.values())
                norm2 = sum(d * d for d in newd.values())
                cands.append((s, -norm2, (i, j), v))
        if not cands:
            # no candidate value fits under any pending row; chain the
            # smallest pending row directly from its current cover
            t = pending[0]
            cover, _ = _min_disjoint_cover(t, base, cover_node_budget)
            v = cover[0] | cover[1]
            idx = {val: k for k, val in enumerate(base)}
            cands.append((total - 1, 0.0, tuple(sorted((idx[cover[0]], idx[cover[1]]))), v))
        s, _, (i, j), v = min(cands)
        sig = b.gate(i, j)
        assert sig == n + len(b.gates) - 1 and len(base) == sig
        base.append(v)
        in_base.add(v)
        pending = [t for t in pending if t != v]
        dist = {t: dist_of(t, base) for t in pending}

    value_sig = {}
    for k, v in enumerate(base):
        value_sig.setdefault(v, k)
    outputs = [None if a.row(i) == 0 else value_sig[a.row(i)] for i in range(a.rows)]
    return _result(
        b.circuit(outputs),
        "bp",
        a,
        cover_node_budget=cover_node_budget,
        distances_exact=exact_all,
    )


# ---------------------------------------------------------------------------
# Block constructions


def _blocks(n: int, width: int) -> list[int]:
    """Column masks of consecutive blocks of the given width."""
    out = []
    for lo in range(0, n, width):
        w = min(width, n - lo)
        out.append(((1 << w) - 1) << lo)
    return out


def lupanov(a: BitMatrix, connective: str = XOR) -> SynthesisResult:
    """Shared block-pattern construction, block width floor(log2 m).

    Each block pattern that occurs among the rows is built once (weight-w
    pattern: at most w - 1 gates, prefixes shared), then every row
    combines its nonzero block signals.  Cancellation-free; gate count is
    at most ``(#blocks) * min(2^b, m) * (b - 1) + m * (#blocks - 1)``.
    """
    m, n = a.rows, a.cols
    width = max(1, m.bit_length() - 1)
    b = _Builder(n, connective)
    sig_of: dict[int, int] = {}

    def build(mask: int) -> int:
        got = sig_of.get(mask)
        if got is not None:
            return got
        if mask.bit_count() == 1:
            sig = mask.bit_length() - 1
        else:
            high = mask.bit_length() - 1
            sub = build(mask ^ (1 << high))
            sig = b.gate(sub, high)
        sig_of[mask] = sig
        return sig

    masks = _blocks(n, width) if n else []
    outputs: list[Optional[int]] = []
    for i in range(m):
        row = a.row(i)
        parts = [build(row & bm) for bm in masks if row & bm]
        if not parts:
            outputs.append(None)
            continue
        acc = parts[0]
        for p in parts[1:]:
            acc = b.gate(acc, p)
        outputs.append(acc)
    return _result(b.circuit(outputs), "lupanov", a, block_width=width)


def lupanov_depth2(a: BitMatrix, connective: str = XOR) -> SynthesisResult:
    """Depth-2 wire construction, block width ceil(log2(n)/2).

    The middle layer holds the block patterns worth sharing (used by at
    least two rows and of weight at least two); every other pattern is
    wired directly into the row's output gate.
    """
    m, n = a.rows, a.cols
    width = max(1, math.ceil(math.log2(n) / 2)) if n > 1 else 1
    masks = _blocks(n, width) if n else []

    use_count: dict[int, int] = {}
    row_parts: list[list[int]] = []
    for i in range(m):
        row = a.row(i)
        parts = [row & bm for bm in masks if row & bm]
        row_parts.append(parts)
        for p in parts:
            use_count[p] = use_count.get(p, 0) + 1

    shared = sorted(
        p for p, cnt in use_count.items() if cnt >= 2 and p.bit_count() >= 2
    )
    middle_id = {p: n + k for k, p in enumerate(shared)}
    middle_layer = tuple(tuple(_row_bits(p)) for p in shared)

    out_layer: list[tuple[int, ...]] = []
    outputs: list[Optional[int]] = []
    next_id = n + len(shared)
    for parts in row_parts:
        if not parts:
            outputs.append(None)
            continue
        ops: list[int] = []
        for p in parts:
            if p in middle_id:
                ops.append(middle_id[p])
            else:
                ops.extend(_row_bits(p))
        out_layer.append(tuple(ops))
        outputs.append(next_id)
        next_id += 1

    layered = LayeredCircuit(
        n, connective, (middle_layer, tuple(out_layer)), tuple(outputs)
    )
    return _result(layered, "lupanov2", a, block_width=width)


# ---------------------------------------------------------------------------
# Explicit families and transforms


def sierpinski_circuit(n: int) -> SynthesisResult:
    """Divide-and-conquer circuit for the Sierpinski matrix: exactly
    (n/2) * log2(n) gates, cancellation-free."""
    target = gen_sierpinski(n)
    b = _Builder(n, XOR)

    def build(lo: int, size: int) -> list[int]:
        if size == 1:
            return [lo]
        half = size // 2
        top = build(lo, half)
        bottom = build(lo + half, half)
        return top + [b.gate(top[i], bottom[i]) for i in range(half)]

    outputs = build(0, n)
    res = _result(b.circuit(outputs), "sierpinski", target)
    assert res.cost == n * (n.bit_length() - 1) // 2
    return res


def setintersection_or_circuit(n: int) -> SynthesisResult:
    """Linear-size OR circuit for the set-intersection matrix via its
    Boolean factorization K_n = B (Bᵀ), B the n x log2(n) matrix whose
    row i is the binary representation of i."""
    target = gen_setintersection(n)
    logn = n.bit_length() - 1
    bmat = BitMatrix(n, logn, list(range(n)))
    outer = lupanov(bmat, OR)
    inner = lupanov(bmat.transpose(), OR)
    circuit = compose(outer.circuit, inner.circuit)
    return _result(
        circuit,
        "setint",
        target,
        factor_gates=(len(outer.circuit.gates), len(inner.circuit.gates)),
    )


def hadamard_circuit(n: int) -> SynthesisResult:
    """Linear-size XOR circuit for the Boolean Sylvester-Hadamard matrix
    via its GF(2) rank factorization (rank log2(n) + 1); the composition
    cancels heavily, so the result is generally not cancellation-free."""
    target = gen_hadamard(n)
    fac = rank_factorize_gf2(target)
    outer = lupanov(fac.left)
    inner = lupanov(fac.right)
    circuit = compose(outer.circuit, inner.circuit)
    return _result(circuit, "hadamard", target, rank=fac.rank)


def complement_transform(c: Circuit) -> Circuit:
    """Circuit for the complement matrix: one parity chain over all
    inputs (n - 1 gates) plus one gate per output, 2n - 1 extra gates in
    total for square targets.  Cancels heavily by design."""
    if c.connective != XOR:
        raise ValueError("complement transform is defined for XOR circuits")
    gates = list(c.gates)
    n = c.n_inputs

    def emit(a: int, bb: int) -> int:
        gates.append((a, bb))
        return n + len(gates) - 1

    parity = 0
    for i in range(1, n):
        parity = emit(parity, i)
    outputs = tuple(parity if o is None else emit(o, parity) for o in c.outputs)
    return Circuit(n, XOR, tuple(gates), outputs)


def product_circuit(
    b: BitMatrix, c: BitMatrix, depth_mode: str = "fanin2"
) -> SynthesisResult:
    """Circuit for the GF(2) product B·C by feeding a circuit for C into
    a circuit for B; the composition introduces cancellations.

    ``fanin2`` composes two fan-in-2 block constructions (gate counts
    add); ``depth4`` stacks two depth-2 wire constructions into an exact
    depth-4 layered circuit.
    """
    if b.cols != c.rows:
        raise DimensionError(f"{b.rows}x{b.cols} @ {c.rows}x{c.cols}")
    target = mul_gf2(b, c)
    if depth_mode == "fanin2":
        outer = lupanov(b)
        inner = lupanov(c)
        circuit: AnyCircuit = compose(outer.circuit, inner.circuit)
    elif depth_mode == "depth4":
        outer2 = lupanov_depth2(b)
        inner2 = lupanov_depth2(c)
        circuit = compose_layered(outer2.circuit, inner2.circuit)
    else:
        raise ValueError(f"unknown depth mode {depth_mode!r}")
    return _result(circuit, "product", target, depth_mode=depth_mode)
