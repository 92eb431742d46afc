"""Gate-level Riemannian circuit: controlled-H, diagonal phase layer, controlled-H.

Qubit masks use bit i for qubit i; qubit 0 is the most significant bit of
an amplitude index, so qubit q toggles index bit (n - 1 - q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .state import StateVector, eigenbasis, qubits_for

MAX_DENSE_QUBITS = 12
N_PROBES = 64
PROBE_SEED = 20130410


@dataclass(frozen=True)
class Hadamard:
    target: int


@dataclass(frozen=True)
class MultiControlledH:
    controls: int  # mask; every control must read 1
    target: int


@dataclass(frozen=True)
class MultiControlledPhase:
    """Phase e^{i phase} on basis states whose ``controls`` bits equal ``control_values``."""

    controls: int
    control_values: int
    phase: float


@dataclass(frozen=True)
class DiagonalLayer:
    phases: tuple[float, ...]  # one per basis state, canonical order


Gate = Union[Hadamard, MultiControlledH, MultiControlledPhase, DiagonalLayer]


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        full = (1 << self.n_qubits) - 1
        for g in self.gates:
            if isinstance(g, (Hadamard, MultiControlledH)):
                if not 0 <= g.target < self.n_qubits:
                    raise ValueError(f"target {g.target} out of range")
            if isinstance(g, MultiControlledH):
                if g.controls & ~full or g.controls >> g.target & 1:
                    raise ValueError("bad control mask")
            elif isinstance(g, MultiControlledPhase):
                if g.controls & ~full or g.control_values & ~g.controls:
                    raise ValueError("control values must lie inside the control mask")
                if not math.isfinite(g.phase):
                    raise ValueError("phase must be finite")
            elif isinstance(g, DiagonalLayer):
                if len(g.phases) != 1 << self.n_qubits:
                    raise ValueError("diagonal layer needs 2^n phases")
                if not all(math.isfinite(p) for p in g.phases):
                    raise ValueError("phases must be finite")

    def __len__(self) -> int:
        return len(self.gates)


def _index_bits(n: int, qmask: int) -> int:
    return sum(1 << (n - 1 - q) for q in range(n) if qmask >> q & 1)


def _apply_gate(gate, amp: np.ndarray, n: int) -> None:
    """In-place application on amplitudes of shape (2^n, ...)."""
    idx = np.arange(1 << n)
    if isinstance(gate, (Hadamard, MultiControlledH)):
        cm = _index_bits(n, getattr(gate, "controls", 0))
        tb = 1 << (n - 1 - gate.target)
        lo = idx[(idx & (cm | tb)) == cm]
        a0, a1 = amp[lo], amp[lo | tb]
        amp[lo] = (a0 + a1) / math.sqrt(2)
        amp[lo | tb] = (a0 - a1) / math.sqrt(2)
    elif isinstance(gate, MultiControlledPhase):
        cm = _index_bits(n, gate.controls)
        vm = _index_bits(n, gate.control_values)
        sel = idx[(idx & cm) == vm]
        amp[sel] *= np.exp(1j * gate.phase)
    elif isinstance(gate, DiagonalLayer):
        phase = np.exp(1j * np.asarray(gate.phases))
        amp *= phase.reshape((-1,) + (1,) * (amp.ndim - 1))
    else:
        raise TypeError(f"unknown gate {gate!r}")


def apply_circuit(circuit: Circuit, state) -> StateVector:
    amp = np.array(state.amplitudes if isinstance(state, StateVector) else state, dtype=complex)
    if amp.shape != (1 << circuit.n_qubits,):
        raise ValueError("dimension mismatch")
    for g in circuit.gates:
        _apply_gate(g, amp, circuit.n_qubits)
    return StateVector(amp)


def apply_circuit_batch(circuit: Circuit, columns: np.ndarray) -> np.ndarray:
    """Apply to every column of a (2^n, m) array, unnormalized allowed."""
    amp = np.array(columns, dtype=complex)
    if amp.shape[0] != 1 << circuit.n_qubits:
        raise ValueError("dimension mismatch")
    for g in circuit.gates:
        _apply_gate(g, amp, circuit.n_qubits)
    return amp


def circuit_to_unitary(circuit: Circuit, force: bool = False) -> np.ndarray:
    if circuit.n_qubits > MAX_DENSE_QUBITS and not force:
        raise ValueError(f"dense unitary limited to {MAX_DENSE_QUBITS} qubits")
    return apply_circuit_batch(circuit, np.eye(1 << circuit.n_qubits, dtype=complex))


def synthesize(zeros) -> Circuit:
    """V D V with V the controlled-H on the last qubit (controls: all others)."""
    emap = eigenbasis(zeros)
    n = qubits_for(emap.k)
    phases = np.empty(emap.k)
    phases[:-2] = emap.thetas[:1:-1]  # |psi_j> = e_{k-j}
    phases[-2] = emap.plus_phase
    phases[-1] = emap.minus_phase
    v = MultiControlledH((1 << (n - 1)) - 1, n - 1)
    return Circuit(n, (v, DiagonalLayer(tuple(phases.tolist())), v))


def expand_diagonal(circuit: Circuit) -> Circuit:
    """Replace each diagonal layer by fully controlled phase gates (zeros skipped)."""
    n = circuit.n_qubits
    full = (1 << n) - 1
    out = []
    for g in circuit.gates:
        if not isinstance(g, DiagonalLayer):
            out.append(g)
            continue
        for x, phase in enumerate(g.phases):
            if phase == 0.0:
                continue
            values = sum(1 << q for q in range(n) if x >> (n - 1 - q) & 1)
            out.append(MultiControlledPhase(full, values, phase))
    return Circuit(n, tuple(out))


class CircuitCheck(NamedTuple):
    deviation: float
    mode: str
    passed: bool


def probe_states(n: int, count: int = N_PROBES) -> np.ndarray:
    """Deterministic random unit vectors as columns of a (2^n, count) array."""
    rng = np.random.default_rng(PROBE_SEED + n)
    cols = rng.normal(size=(1 << n, count)) + 1j * rng.normal(size=(1 << n, count))
    return cols / np.linalg.norm(cols, axis=0)


def verify_against_unitary(circuit: Circuit, zeros, tol: float = 1e-10, mode: str = "auto") -> CircuitCheck:
    """Largest deviation between the circuit and the structured U_R.

    ``dense`` compares full matrices entrywise after removing the phase of
    the (0, 0) entry from each; ``sampled`` compares images of 64 fixed
    probe states.  ``auto`` picks dense up to 12 qubits.
    """
    emap = eigenbasis(zeros)
    if qubits_for(emap.k) != circuit.n_qubits:
        raise ValueError("circuit size does not match the zero count")
    if mode == "auto":
        mode = "dense" if circuit.n_qubits <= MAX_DENSE_QUBITS else "sampled"
    if mode == "dense":
        uc = circuit_to_unitary(circuit)
        ur = emap.unitary.dense()
        uc = uc * np.exp(-1j * np.angle(uc[0, 0]))
        ur = ur * np.exp(-1j * np.angle(ur[0, 0]))
        dev = float(np.max(np.abs(uc - ur)))
    elif mode == "sampled":
        probes = probe_states(circuit.n_qubits)
        dev = float(np.max(np.abs(apply_circuit_batch(circuit, probes) - emap.unitary.apply(probes))))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return CircuitCheck(dev, mode, dev <= tol)


def gate_to_text(g) -> list[str]:
    if isinstance(g, Hadamard):
        return [f"H {g.target}"]
    if isinstance(g, MultiControlledH):
        return [f"MCH {g.controls} {g.target}"]
    if isinstance(g, MultiControlledPhase):
        return [f"MCP {g.controls} {g.control_values} {g.phase!r}"]
    if isinstance(g, DiagonalLayer):
        return ["DIAG"] + [repr(float(p)) for p in g.phases]
    raise TypeError(f"unknown gate {g!r}")


def to_text(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.n_qubits}"]
    for g in circuit.gates:
        lines.extend(gate_to_text(g))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("qubits "):
        raise ValueError("circuit text must start with 'qubits N'")
    n = int(lines[0].split()[1])
    gates = []
    i = 1
    while i < len(lines):
        parts = lines[i].split()
        op = parts[0]
        if op == "H":
            gates.append(Hadamard(int(parts[1])))
        elif op == "MCH":
            gates.append(MultiControlledH(int(parts[1]), int(parts[2])))
        elif op == "MCP":
            gates.append(MultiControlledPhase(int(parts[1]), int(parts[2]), float(parts[3])))
        elif op == "DIAG":
            count = 1 << n
            gates.append(DiagonalLayer(tuple(float(x) for x in lines[i + 1 : i + 1 + count])))
            i += count
        else:
            raise ValueError(f"line {i + 1}: unknown gate {op!r}")
        i += 1
    return Circuit(n, tuple(gates))
