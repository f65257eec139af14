"""Circuit intermediate representations and their exact semantics.

Two IRs:

* :class:`Circuit` -- a straight-line program of fan-in-2 gates over a
  single connective (XOR or OR).  Signals are numbered ``0..n-1`` for the
  inputs and ``n+k`` for gate ``k``; gates may only reference earlier
  signals, so acyclicity holds by construction.  An output may be ``None``,
  which marks a constant-zero row (the gate model has no constants).
* :class:`LayeredCircuit` -- a depth-d circuit with unbounded fan-in
  gates, costed by wire count.

Semantics are exact: the value vector of a signal is the bitmask of input
variables feeding it, computed in one forward pass, and verification
compares value vectors against the target matrix -- no sampling.

Text formats: the fan-in-2 SLP format is one ``t<k> = <ref> + <ref>``
line per gate under an ``inputs <n> connective <XOR|OR>`` header, with a
trailing ``outputs: y1=<ref> ...`` block ('0' marks a constant-zero
output).  Layered circuits use the same shape with a ``layered`` header
word, ``layer <d>`` section markers and two-or-more operands per gate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .matrices import BitMatrix, DimensionError

XOR = "XOR"
OR = "OR"
_CONNECTIVES = (XOR, OR)


class ParseError(ValueError):
    """SLP text rejected; carries 1-indexed line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _check_connective(connective: str) -> None:
    if connective not in _CONNECTIVES:
        raise ValueError(f"unknown connective {connective!r}")


@dataclass(frozen=True)
class Circuit:
    """Straight-line program of fan-in-2 gates with designated outputs."""

    n_inputs: int
    connective: str
    gates: tuple[tuple[int, int], ...]
    outputs: tuple[Optional[int], ...]

    def __post_init__(self):
        _check_connective(self.connective)
        if self.n_inputs < 0:
            raise ValueError("negative input count")
        for k, (a, b) in enumerate(self.gates):
            bound = self.n_inputs + k
            if not (0 <= a < bound and 0 <= b < bound):
                raise ValueError(f"gate t{k + 1} references a later signal")
        n_signals = self.n_inputs + len(self.gates)
        for i, o in enumerate(self.outputs):
            if o is not None and not 0 <= o < n_signals:
                raise ValueError(f"output y{i + 1} references unknown signal {o}")

    @property
    def n_signals(self) -> int:
        return self.n_inputs + len(self.gates)


@dataclass(frozen=True)
class LayeredCircuit:
    """Bounded-depth circuit with unbounded fan-in; cost = wire count.

    Gates are numbered globally (inputs first, then layer by layer) and
    may only reference inputs or gates in strictly earlier layers.
    """

    n_inputs: int
    connective: str
    layers: tuple[tuple[tuple[int, ...], ...], ...]
    outputs: tuple[Optional[int], ...]

    def __post_init__(self):
        _check_connective(self.connective)
        gid = self.n_inputs
        for d, layer in enumerate(self.layers):
            start = gid
            for ops in layer:
                if len(ops) < 1:
                    raise ValueError(f"empty gate in layer {d + 1}")
                for ref in ops:
                    if not 0 <= ref < start:
                        raise ValueError(
                            f"gate t{gid - self.n_inputs + 1} references signal {ref} "
                            f"not strictly below layer {d + 1}"
                        )
                gid += 1
        for i, o in enumerate(self.outputs):
            if o is not None and not 0 <= o < gid:
                raise ValueError(f"output y{i + 1} references unknown signal {o}")

    @property
    def n_gates(self) -> int:
        return sum(len(layer) for layer in self.layers)


AnyCircuit = Union[Circuit, LayeredCircuit]


# ---------------------------------------------------------------------------
# Semantics


def value_vectors(c: Circuit) -> list[int]:
    """Value vector of every signal as a bitmask over the inputs.

    ``vv[i] = 1 << i`` for inputs; at a gate the children's vectors
    combine with the circuit's connective.
    """
    vv = [1 << i for i in range(c.n_inputs)]
    if c.connective == XOR:
        for a, b in c.gates:
            vv.append(vv[a] ^ vv[b])
    else:
        for a, b in c.gates:
            vv.append(vv[a] | vv[b])
    return vv


def matrix_of(c: Circuit) -> BitMatrix:
    """The matrix the circuit computes: row i is the value vector of
    output i (zero for constant-zero outputs)."""
    vv = value_vectors(c)
    return BitMatrix(
        len(c.outputs), c.n_inputs, [0 if o is None else vv[o] for o in c.outputs]
    )


def eval_circuit(c: Circuit, x: Sequence[int]) -> list[int]:
    """Run the circuit on a Boolean input vector."""
    if len(x) != c.n_inputs:
        raise DimensionError(f"expected {c.n_inputs} inputs, got {len(x)}")
    vals = [1 if v else 0 for v in x]
    if c.connective == XOR:
        for a, b in c.gates:
            vals.append(vals[a] ^ vals[b])
    else:
        for a, b in c.gates:
            vals.append(vals[a] | vals[b])
    return [0 if o is None else vals[o] for o in c.outputs]


def verify(c: Circuit, a: BitMatrix) -> bool:
    """Exact check that the circuit computes ``a`` (via value vectors)."""
    if len(c.outputs) != a.rows or c.n_inputs != a.cols:
        raise DimensionError(
            f"circuit computes a {len(c.outputs)}x{c.n_inputs} map, "
            f"target is {a.rows}x{a.cols}"
        )
    return matrix_of(c) == a


def is_cancellation_free(c: Circuit) -> bool:
    """True iff the two children of every gate have disjoint supports.

    Defined for XOR circuits.  Disjoint children supports are equivalent
    to the ancestor form of the property (every gate's value vector
    dominates each of its gate descendants' coordinatewise): supports
    only grow along edges when children never overlap, and an overlap at
    a gate erases coordinates of the child it descends from.
    """
    if c.connective != XOR:
        raise ValueError("cancellation-freeness is an XOR-circuit property")
    return supports_disjoint(c)


def supports_disjoint(c: Circuit) -> bool:
    """Children supports disjoint at every gate (any connective).

    For an OR circuit this says the same DAG read with XOR semantics
    computes the same matrix.
    """
    vv = [1 << i for i in range(c.n_inputs)]
    combine_or = c.connective == OR
    for a, b in c.gates:
        if vv[a] & vv[b]:
            return False
        vv.append(vv[a] | vv[b] if combine_or else vv[a] ^ vv[b])
    return True


def size_gates(c: Circuit) -> int:
    return len(c.gates)


def depth(c: Circuit) -> int:
    """Gates on a longest input-to-output path."""
    d = [0] * c.n_inputs
    for a, b in c.gates:
        d.append(1 + max(d[a], d[b]))
    return max((d[o] for o in c.outputs if o is not None), default=0)


def size_wires(layered: LayeredCircuit) -> int:
    return sum(len(ops) for layer in layered.layers for ops in layer)


def depth_layered(layered: LayeredCircuit) -> int:
    return len(layered.layers)


# ---------------------------------------------------------------------------
# Transformations


@dataclass(frozen=True)
class EliminationResult:
    """Outcome of restricting inputs to zero and cascading gate removal."""

    reduced: Circuit
    eliminated: frozenset[int]
    forwarded_outputs: dict[int, Optional[int]] = field(hash=False)


def restrict_zero(c: Circuit, zero_inputs: set[int]) -> EliminationResult:
    """Set the given inputs to constant 0 and eliminate trivial gates.

    A gate with one constant-zero child forwards its other child; a gate
    with two constant-zero children becomes constant zero itself, and the
    effect cascades.  The reduced circuit keeps the input arity, so its
    matrix is the original with the restricted columns zeroed; outputs
    that collapse to constant zero become ``None``.
    """
    for z in zero_inputs:
        if not 0 <= z < c.n_inputs:
            raise ValueError(f"unknown input x{z + 1}")
    sigmap: list[Optional[int]] = [
        None if i in zero_inputs else i for i in range(c.n_inputs)
    ]
    new_gates: list[tuple[int, int]] = []
    eliminated = []
    for k, (a, b) in enumerate(c.gates):
        ma, mb = sigmap[a], sigmap[b]
        if ma is None and mb is None:
            sigmap.append(None)
            eliminated.append(k)
        elif ma is None:
            sigmap.append(mb)
            eliminated.append(k)
        elif mb is None:
            sigmap.append(ma)
            eliminated.append(k)
        else:
            sigmap.append(c.n_inputs + len(new_gates))
            new_gates.append((ma, mb))
    outputs = tuple(None if o is None else sigmap[o] for o in c.outputs)
    reduced = Circuit(c.n_inputs, c.connective, tuple(new_gates), outputs)
    forwarded = {i: outputs[i] for i in range(len(c.outputs))}
    return EliminationResult(reduced, frozenset(eliminated), forwarded)


def compose(outer: Circuit, inner: Circuit) -> Circuit:
    """Feed the inner circuit's outputs into the outer circuit's inputs.

    The result computes the product of the two matrices (GF(2) product
    for XOR circuits, Boolean product for OR circuits) on the inner
    circuit's inputs.  Gate counts add; constant-zero inner outputs are
    handled by restricting the outer circuit first.
    """
    if outer.connective != inner.connective:
        raise ValueError("connective mismatch in composition")
    if outer.n_inputs != len(inner.outputs):
        raise DimensionError(
            f"outer arity {outer.n_inputs} != inner output count {len(inner.outputs)}"
        )
    zero_ins = {i for i, o in enumerate(inner.outputs) if o is None}
    if zero_ins:
        outer = restrict_zero(outer, zero_ins).reduced
    offset = len(inner.gates)

    def tr(ref: Optional[int]) -> Optional[int]:
        if ref is None:
            return None
        if ref < outer.n_inputs:
            return inner.outputs[ref]
        return inner.n_inputs + offset + (ref - outer.n_inputs)

    gates = list(inner.gates)
    for a, b in outer.gates:
        gates.append((tr(a), tr(b)))
    outputs = tuple(tr(o) for o in outer.outputs)
    return Circuit(inner.n_inputs, inner.connective, tuple(gates), outputs)


def compose_layered(outer: LayeredCircuit, inner: LayeredCircuit) -> LayeredCircuit:
    """Stack two layered circuits; depth and wire counts add."""
    if outer.connective != inner.connective:
        raise ValueError("connective mismatch in composition")
    if outer.n_inputs != len(inner.outputs):
        raise DimensionError(
            f"outer arity {outer.n_inputs} != inner output count {len(inner.outputs)}"
        )
    layers = [tuple(layer) for layer in inner.layers]
    # Signal map for outer-circuit signals; constant-zero operands drop
    # out (zero is the identity of both connectives), and a gate losing
    # all operands becomes constant zero itself.
    sigmap: list[Optional[int]] = [inner.outputs[i] for i in range(outer.n_inputs)]
    next_id = inner.n_inputs + inner.n_gates
    for layer in outer.layers:
        new_layer = []
        for ops in layer:
            mapped = [m for m in (sigmap[r] for r in ops) if m is not None]
            if not mapped:
                sigmap.append(None)
            else:
                sigmap.append(next_id)
                next_id += 1
                new_layer.append(tuple(mapped))
        layers.append(tuple(new_layer))
    outputs = tuple(None if o is None else sigmap[o] for o in outer.outputs)
    return LayeredCircuit(inner.n_inputs, inner.connective, tuple(layers), outputs)


def flatten(layered: LayeredCircuit) -> Circuit:
    """Expand fan-in-k gates into k-1 fan-in-2 gates (balanced,
    left-to-right pairwise rounds); fan-in-1 gates become forwarding."""
    n = layered.n_inputs
    sigmap: list[int] = list(range(n))
    gates: list[tuple[int, int]] = []

    def emit(a: int, b: int) -> int:
        gates.append((a, b))
        return n + len(gates) - 1

    for layer in layered.layers:
        for ops in layer:
            level = [sigmap[r] for r in ops]
            while len(level) > 1:
                nxt = [
                    emit(level[i], level[i + 1]) if i + 1 < len(level) else level[i]
                    for i in range(0, len(level), 2)
                ]
                level = nxt
            sigmap.append(level[0])
    outputs = tuple(None if o is None else sigmap[o] for o in layered.outputs)
    return Circuit(n, layered.connective, tuple(gates), outputs)


# ---------------------------------------------------------------------------
# SLP text format


def _ref_name(ref: Optional[int], n_inputs: int) -> str:
    if ref is None:
        return "0"
    if ref < n_inputs:
        return f"x{ref + 1}"
    return f"t{ref - n_inputs + 1}"


def slp_dumps(c: Circuit) -> str:
    lines = [f"inputs {c.n_inputs} connective {c.connective}"]
    for k, (a, b) in enumerate(c.gates):
        lines.append(
            f"t{k + 1} = {_ref_name(a, c.n_inputs)} + {_ref_name(b, c.n_inputs)}"
        )
    outs = " ".join(
        f"y{i + 1}={_ref_name(o, c.n_inputs)}" for i, o in enumerate(c.outputs)
    )
    lines.append(f"outputs: {outs}")
    return "\n".join(lines) + "\n"


def layered_dumps(layered: LayeredCircuit) -> str:
    lines = [f"inputs {layered.n_inputs} connective {layered.connective} layered"]
    gid = 0
    for d, layer in enumerate(layered.layers):
        lines.append(f"layer {d + 1}")
        for ops in layer:
            gid += 1
            rhs = " + ".join(_ref_name(r, layered.n_inputs) for r in ops)
            lines.append(f"t{gid} = {rhs}")
    outs = " ".join(
        f"y{i + 1}={_ref_name(o, layered.n_inputs)}"
        for i, o in enumerate(layered.outputs)
    )
    lines.append(f"outputs: {outs}")
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"inputs\s+(\d+)\s+connective\s+(XOR|OR)(\s+layered)?\s*$")
_GATE_RE = re.compile(r"(t\d+)\s*=\s*(.+)$")
_REF_RE = re.compile(r"[xt]\d+$")


def _parse_ref(tok: str, n_inputs: int, n_gates: int, lineno: int, col: int) -> int:
    if not _REF_RE.match(tok):
        raise ParseError(f"bad signal reference {tok!r}", lineno, col)
    ix = int(tok[1:])
    if tok[0] == "x":
        if not 1 <= ix <= n_inputs:
            raise ParseError(f"input {tok} out of range", lineno, col)
        return ix - 1
    if not 1 <= ix <= n_gates:
        raise ParseError(f"gate {tok} not yet defined", lineno, col)
    return n_inputs + ix - 1


def _parse_outputs(
    line: str, n_inputs: int, n_gates: int, lineno: int
) -> tuple[Optional[int], ...]:
    body = line[len("outputs:"):].strip()
    outs: list[Optional[int]] = []
    if body:
        for tok in body.split():
            m = re.match(r"y(\d+)=(\S+)$", tok)
            if not m:
                raise ParseError(f"bad output assignment {tok!r}", lineno, line.find(tok) + 1)
            if int(m.group(1)) != len(outs) + 1:
                raise ParseError(
                    f"outputs must appear in order; expected y{len(outs) + 1}", lineno,
                    line.find(tok) + 1,
                )
            ref = m.group(2)
            if ref == "0":
                outs.append(None)
            else:
                outs.append(_parse_ref(ref, n_inputs, n_gates, lineno, line.find(ref) + 1))
    return tuple(outs)


def slp_loads(text: str) -> AnyCircuit:
    """Parse the SLP text format; dispatches on the ``layered`` header."""
    raw = text.splitlines()
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(raw) if ln.strip()]
    if not lines:
        raise ParseError("empty circuit text", 1)
    lineno, header = lines[0]
    m = _HEADER_RE.match(header)
    if not m:
        raise ParseError("expected 'inputs <n> connective <XOR|OR>'", lineno)
    n_inputs = int(m.group(1))
    connective = m.group(2)
    layered = bool(m.group(3))
    if layered:
        return _parse_layered(lines[1:], n_inputs, connective)
    gates: list[tuple[int, int]] = []
    outputs = None
    for lineno, ln in lines[1:]:
        if ln.startswith("outputs:"):
            if outputs is not None:
                raise ParseError("duplicate outputs block", lineno)
            outputs = _parse_outputs(ln, n_inputs, len(gates), lineno)
            continue
        if outputs is not None:
            raise ParseError("content after outputs block", lineno)
        gm = _GATE_RE.match(ln)
        if not gm:
            raise ParseError(f"bad gate line {ln!r}", lineno)
        if int(gm.group(1)[1:]) != len(gates) + 1:
            raise ParseError(f"expected gate t{len(gates) + 1}", lineno)
        operands = [tok.strip() for tok in gm.group(2).split("+")]
        if len(operands) != 2:
            raise ParseError("fan-in-2 SLP gates take exactly two operands", lineno,
                             ln.find("=") + 2)
        a = _parse_ref(operands[0], n_inputs, len(gates), lineno, ln.find(operands[0]) + 1)
        b = _parse_ref(operands[1], n_inputs, len(gates), lineno, ln.rfind(operands[1]) + 1)
        gates.append((a, b))
    if outputs is None:
        raise ParseError("missing outputs block", lines[-1][0])
    return Circuit(n_inputs, connective, tuple(gates), outputs)


def _parse_layered(
    lines: list[tuple[int, str]], n_inputs: int, connective: str
) -> LayeredCircuit:
    layers: list[list[tuple[int, ...]]] = []
    n_gates = 0
    gates_before_layer = 0
    outputs = None
    for lineno, ln in lines:
        if ln.startswith("outputs:"):
            outputs = _parse_outputs(ln, n_inputs, n_gates, lineno)
            continue
        if outputs is not None:
            raise ParseError("content after outputs block", lineno)
        lm = re.match(r"layer\s+(\d+)$", ln)
        if lm:
            if int(lm.group(1)) != len(layers) + 1:
                raise ParseError(f"expected 'layer {len(layers) + 1}'", lineno)
            gates_before_layer = n_inputs + n_gates
            layers.append([])
            continue
        gm = _GATE_RE.match(ln)
        if not gm:
            raise ParseError(f"bad gate line {ln!r}", lineno)
        if not layers:
            raise ParseError("gate before any 'layer' marker", lineno)
        if int(gm.group(1)[1:]) != n_gates + 1:
            raise ParseError(f"expected gate t{n_gates + 1}", lineno)
        ops = []
        for tok in (t.strip() for t in gm.group(2).split("+")):
            ref = _parse_ref(tok, n_inputs, n_gates, lineno, ln.find(tok) + 1)
            if ref >= gates_before_layer:
                raise ParseError(
                    f"{tok} is not strictly below layer {len(layers)}", lineno,
                    ln.find(tok) + 1,
                )
            ops.append(ref)
        layers[-1].append(tuple(ops))
        n_gates += 1
    if outputs is None:
        raise ParseError("missing outputs block", lines[-1][0] if lines else 1)
    return LayeredCircuit(
        n_inputs, connective, tuple(tuple(layer) for layer in layers), outputs
    )


def dumps_circuit(c: AnyCircuit) -> str:
    if isinstance(c, LayeredCircuit):
        return layered_dumps(c)
    return slp_dumps(c)
