"""Circuit model, wire-to-node mappings, and the circuit text format.

Format, one gate per line after a ``qubits <n>`` header::

    # comment
    qubits 4
    cnot 0 2
    swap 1 3
    1q H 0

Wire indices are 0-based.  One-qubit gates are opaque: the label is
carried through routing untouched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

CNOT = "cnot"
SWAP = "swap"
ONEQ = "1q"


class CircuitFormatError(ValueError):
    """Raised for malformed circuit or mapping files."""


@dataclass(frozen=True)
class Gate:
    """CNOT(a=control, b=target), SWAP(a, b), or 1q(label, a=wire)."""

    kind: str
    a: int
    b: int = -1
    label: str = ""

    def wires(self) -> Tuple[int, ...]:
        return (self.a,) if self.kind == ONEQ else (self.a, self.b)


def cnot(control: int, target: int) -> Gate:
    if control == target:
        raise ValueError("a CNOT cannot target its own control")
    return Gate(CNOT, control, target)


def swap_gate(a: int, b: int) -> Gate:
    if a == b:
        raise ValueError("a SWAP needs two distinct wires")
    return Gate(SWAP, a, b)


def one_qubit(label: str, wire: int) -> Gate:
    if not label:
        raise ValueError("one-qubit gates need a label")
    return Gate(ONEQ, wire, -1, label)


@dataclass
class Circuit:
    n_wires: int
    gates: List[Gate] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            for w in g.wires():
                if not 0 <= w < self.n_wires:
                    raise ValueError(f"gate {g} uses wire {w} outside 0..{self.n_wires - 1}")

    def is_cnot_only(self) -> bool:
        return all(g.kind == CNOT for g in self.gates)

    def __len__(self) -> int:
        return len(self.gates)


class Mapping:
    """Bijection from circuit wires to architecture nodes."""

    __slots__ = ("nodes",)

    def __init__(self, nodes: Sequence[int]):
        n = len(nodes)
        if sorted(nodes) != list(range(n)):
            raise ValueError("mapping must be a bijection onto 0..n-1")
        self.nodes = tuple(nodes)

    @classmethod
    def identity(cls, n: int) -> "Mapping":
        return cls(range(n))

    def __getitem__(self, wire: int) -> int:
        return self.nodes[wire]

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mapping) and self.nodes == other.nodes

    def __hash__(self):
        return hash(self.nodes)

    def __repr__(self) -> str:
        return f"Mapping({list(self.nodes)})"

    def wire_of(self, node: int) -> int:
        return self.nodes.index(node)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.nodes))

    def to_pairs(self, names: Optional[Sequence[str]] = None) -> List[List[str]]:
        """[["w1", "Q1"], ...] rows for reports and mapping files."""
        out = []
        for w, node in enumerate(self.nodes):
            label = names[node] if names is not None else str(node)
            out.append([f"w{w + 1}", label])
        return out


def parse_circuit(text: str, source: str = "<circuit>") -> Circuit:
    """Parse the line-based circuit format; strict about wire ranges."""
    n_wires = None
    gates: List[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        where = f"{source}:{lineno}"
        if n_wires is None:
            if parts[0] != "qubits" or len(parts) != 2:
                raise CircuitFormatError(f"{where}: expected 'qubits <n>' header")
            try:
                n_wires = int(parts[1])
            except ValueError:
                raise CircuitFormatError(f"{where}: bad qubit count {parts[1]!r}")
            if n_wires < 1:
                raise CircuitFormatError(f"{where}: qubit count must be positive")
            continue
        try:
            if parts[0] == CNOT and len(parts) == 3:
                g = cnot(int(parts[1]), int(parts[2]))
            elif parts[0] == SWAP and len(parts) == 3:
                g = swap_gate(int(parts[1]), int(parts[2]))
            elif parts[0] == ONEQ and len(parts) == 3:
                g = one_qubit(parts[1], int(parts[2]))
            else:
                raise CircuitFormatError(f"{where}: unrecognized gate line {line!r}")
        except ValueError as exc:
            raise CircuitFormatError(f"{where}: {exc}") from exc
        for w in g.wires():
            if not 0 <= w < n_wires:
                raise CircuitFormatError(f"{where}: wire {w} outside 0..{n_wires - 1}")
        gates.append(g)
    if n_wires is None:
        raise CircuitFormatError(f"{source}: missing 'qubits <n>' header")
    return Circuit(n_wires, gates)


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_wires}"]
    for g in c.gates:
        if g.kind == ONEQ:
            lines.append(f"1q {g.label} {g.a}")
        else:
            lines.append(f"{g.kind} {g.a} {g.b}")
    return "\n".join(lines) + "\n"


def parse_mapping_json(text: str, names: Sequence[str],
                       source: str = "<mapping>") -> Mapping:
    """Mapping file: JSON list of [wire, node-name] pairs, wires 'w1'..'wn'."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"{source}: not valid JSON: {exc}") from exc
    n = len(names)
    index = {nm: i for i, nm in enumerate(names)}
    nodes = [-1] * n
    if not isinstance(data, list) or len(data) != n:
        raise CircuitFormatError(f"{source}: expected {n} [wire, node] pairs")
    for pair in data:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise CircuitFormatError(f"{source}: malformed entry {pair!r}")
        wire, node = pair
        if not (isinstance(wire, str) and wire.startswith("w")):
            raise CircuitFormatError(f"{source}: wire label {wire!r} must look like 'w3'")
        try:
            w = int(wire[1:]) - 1
        except ValueError:
            raise CircuitFormatError(f"{source}: wire label {wire!r} must look like 'w3'")
        if not 0 <= w < n:
            raise CircuitFormatError(f"{source}: wire {wire!r} out of range")
        if node not in index:
            raise CircuitFormatError(f"{source}: unknown node {node!r}")
        if nodes[w] != -1:
            raise CircuitFormatError(f"{source}: wire {wire!r} mapped twice")
        nodes[w] = index[node]
    try:
        return Mapping(nodes)
    except ValueError as exc:
        raise CircuitFormatError(f"{source}: {exc}") from exc


def format_mapping_json(mapping: Mapping, names: Sequence[str]) -> str:
    return json.dumps(mapping.to_pairs(names), indent=2) + "\n"
