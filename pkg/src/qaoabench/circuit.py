"""QAOA logical circuits over the {H, ZZPhase, RX, SWAP} gate set.

Angle conventions are fixed once here and everywhere else in the package:

  ZZPhase(gamma) = exp(-i gamma Z(x)Z / 2)   diagonal two-qubit phase
  RX(beta)       = exp(-i beta X)            full-angle mixer rotation

RX deliberately takes the full angle: the mixer layer at parameter beta is
exactly exp(-i beta X) per qubit, and callers must not halve angles to fit
the more common half-angle convention.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

from .graphs import Graph


class GateKind(str, Enum):
    H = "h"
    ZZPHASE = "zzphase"
    RX = "rx"
    SWAP = "swap"


_ARITY = {GateKind.H: 1, GateKind.RX: 1, GateKind.ZZPHASE: 2, GateKind.SWAP: 2}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        if len(self.qubits) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind.value} takes {_ARITY[self.kind]} qubits, got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.qubits}")
        if not math.isfinite(self.angle):
            raise ValueError(f"non-finite angle {self.angle}")

    @property
    def arity(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class QaoaParams:
    """Variational angles: p phase-layer gammas and p mixer-layer betas."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        if len(self.gammas) != len(self.betas) or len(self.gammas) < 1:
            raise ValueError("gammas and betas must have equal length p >= 1")
        if any(not math.isfinite(x) for x in self.gammas + self.betas):
            raise ValueError("angles must be finite")

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_vector(cls, x) -> "QaoaParams":
        """Split a flat length-2p vector laid out as (gammas..., betas...)."""
        if len(x) % 2 != 0:
            raise ValueError("parameter vector length must be 2p")
        p = len(x) // 2
        return cls(tuple(float(v) for v in x[:p]), tuple(float(v) for v in x[p:]))

    def to_vector(self) -> list[float]:
        return list(self.gammas) + list(self.betas)


@dataclass(frozen=True)
class LogicalCircuit:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for g in self.gates:
            if any(q >= self.n_qubits or q < 0 for q in g.qubits):
                raise ValueError(f"gate {g} out of range for n_qubits={self.n_qubits}")

    @property
    def n_gates(self) -> int:
        return len(self.gates)

    def prep_layer_size(self) -> int:
        """Length of the leading all-qubit H prefix (0 if absent).

        A circuit that opens with one H per qubit is preparing |+...+>; the
        scheduler hoists that prefix out of the clock-cycle table and the
        cost model charges it to the state-preparation time instead of to
        circuit depth.
        """
        head = self.gates[: self.n_qubits]
        if len(head) == self.n_qubits and all(g.kind == GateKind.H for g in head):
            if {g.qubits[0] for g in head} == set(range(self.n_qubits)):
                return self.n_qubits
        return 0


def build_qaoa_circuit(g: Graph, params: QaoaParams) -> LogicalCircuit:
    """H on every qubit, then p alternating phase/mixer layers.

    Layer l applies ZZPhase(gamma_l) per edge in edge-list order, then
    RX(beta_l) per qubit in index order. Total gate count is
    n + p * (|E| + n).
    """
    gates: list[Gate] = [Gate(GateKind.H, (q,)) for q in range(g.n)]
    for l in range(params.p):
        for (i, j) in g.edges:
            gates.append(Gate(GateKind.ZZPHASE, (i, j), params.gammas[l]))
        for q in range(g.n):
            gates.append(Gate(GateKind.RX, (q,), params.betas[l]))
    return LogicalCircuit(g.n, tuple(gates))


def gates_commute(a: Gate, b: Gate) -> bool:
    """Whether two gates commute as unitaries.

    Disjoint supports always commute. On shared qubits only the safe cases
    are recognized: diagonal ZZ phases commute with each other, and
    same-axis single-qubit rotations (RX with RX, H with H) commute on the
    same qubit. Everything else is treated as ordered.
    """
    if not set(a.qubits) & set(b.qubits):
        return True
    if a.kind == GateKind.ZZPHASE and b.kind == GateKind.ZZPHASE:
        return True
    if a.kind == b.kind and a.qubits == b.qubits and a.kind in (GateKind.RX, GateKind.H):
        return True
    return False


def dependency_edges(c: LogicalCircuit) -> list[tuple[int, int]]:
    """Pairs (a, b), a < b, where gate b must execute after gate a.

    A dependency is any same-qubit pair that does not commute; commuting
    gates (notably the ZZ phases within one cost layer) may be freely
    reordered by a scheduler.
    """
    by_qubit: dict[int, list[int]] = {}
    for idx, gate in enumerate(c.gates):
        for q in gate.qubits:
            by_qubit.setdefault(q, []).append(idx)
    deps: set[tuple[int, int]] = set()
    for indices in by_qubit.values():
        for pos_b, b in enumerate(indices):
            for a in indices[:pos_b]:
                if not gates_commute(c.gates[a], c.gates[b]):
                    deps.add((a, b))
    return sorted(deps)


def logical_depth(c: LogicalCircuit) -> int:
    """Greedy ASAP layer count under qubit exclusivity alone.

    Each gate lands one layer after the latest gate it shares a qubit with,
    ignoring hardware connectivity. Commuting reorders are not exploited:
    this is the plain layered reading of the gate list.
    """
    ready_at = [0] * c.n_qubits
    depth = 0
    for gate in c.gates:
        layer = max(ready_at[q] for q in gate.qubits) + 1
        for q in gate.qubits:
            ready_at[q] = layer
        depth = max(depth, layer)
    return depth


def circuit_to_json(c: LogicalCircuit) -> str:
    payload = {
        "n_qubits": c.n_qubits,
        "gates": [
            {"kind": g.kind.value, "qubits": list(g.qubits), "angle": g.angle}
            for g in c.gates
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def circuit_from_json(text: str) -> LogicalCircuit:
    payload = json.loads(text)
    gates = tuple(
        Gate(GateKind(item["kind"]), tuple(item["qubits"]), float(item.get("angle", 0.0)))
        for item in payload["gates"]
    )
    return LogicalCircuit(int(payload["n_qubits"]), gates)
