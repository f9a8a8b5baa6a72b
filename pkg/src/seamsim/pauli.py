"""First-order Pauli error propagation through small Clifford circuits.

Every noisy element is modelled as the perfect operation followed by an
error: two-qubit operations (local CNOTs, Bell-pair preparation) by one of
the 15 non-identity two-qubit Paulis with probability eps/15 each, and
readouts by a classical outcome flip with probability eps_m.  To obtain
the per-cycle flip probability of a tracked qubit (or tracked readout),
each single error insertion is propagated through the rest of the circuit
and the probabilities of all insertions that flip the tracked quantity
are summed linearly, i.e. to first order.

Teleported CNOTs expand into their Bell-pair circuit: the Bell pair is
consumed by a CNOT off the control and a CNOT into the target, and the
two Bell-half measurements feed classical corrections.  A flipped
measurement therefore lands a wrong correction on the far qubit, which
is how Bell-pair and readout noise reaches the code qubits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

EPS_BELL = "eps_bell"
EPS_CX = "eps_cx"
EPS_M = "eps_m"

_PAULI_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_PAULI = {v: k for k, v in _PAULI_BITS.items()}

# All 15 non-identity two-qubit Paulis, as ((x1, z1), (x2, z2)).
_TWO_QUBIT_PAULIS = [
    (_PAULI_BITS[a], _PAULI_BITS[b])
    for a, b in product("IXYZ", repeat=2)
    if (a, b) != ("I", "I")
]


class UnsupportedCircuitError(ValueError):
    """Circuit contains an element outside the supported Clifford set."""


@dataclass(frozen=True)
class Op:
    kind: str                       # "cnot" | "bellprep" | "meas"
    qubits: tuple[int, ...]
    noise: str | None = None        # eps symbol of the attached error source
    basis: str = "z"                # for "meas"
    correction: tuple[str, int] | None = None  # wrong-outcome Pauli kickback
    tracked: bool = False           # for "meas": this outcome is the target


@dataclass
class PauliCircuit:
    """Ordered Clifford elements with one tracked qubit or readout."""

    ops: list[Op] = field(default_factory=list)
    tracked_qubit: int | None = None
    _next: int = 0

    def qubit(self) -> int:
        q = self._next
        self._next += 1
        return q

    def cnot(self, control: int, target: int, noisy: bool = True) -> None:
        self.ops.append(Op("cnot", (control, target),
                           noise=EPS_CX if noisy else None))

    def bellprep(self, a: int, b: int) -> None:
        self.ops.append(Op("bellprep", (a, b), noise=EPS_BELL))

    def measure(self, q: int, basis: str = "z", noisy: bool = True,
                correction: tuple[str, int] | None = None,
                tracked: bool = False) -> None:
        self.ops.append(Op("meas", (q,), noise=EPS_M if noisy else None,
                           basis=basis, correction=correction,
                           tracked=tracked))

    def teleported_cnot(self, control: int, target: int) -> None:
        """Teleported CNOT consuming one distributed Bell pair."""
        b1, b2 = self.qubit(), self.qubit()
        self.bellprep(b1, b2)
        self.cnot(control, b1)
        self.cnot(b2, target)
        self.measure(b1, basis="z", correction=("X", target))
        self.measure(b2, basis="x", correction=("Z", control))

    def validate(self) -> None:
        for op in self.ops:
            if op.kind not in ("cnot", "bellprep", "meas"):
                raise UnsupportedCircuitError(f"unsupported element {op.kind!r}")
            if op.kind == "meas" and op.basis not in ("z", "x"):
                raise UnsupportedCircuitError(f"unsupported basis {op.basis!r}")


class _Frame:
    """Pauli frame plus classical outcome-flip state during propagation."""

    def __init__(self) -> None:
        self.x: dict[int, int] = {}
        self.z: dict[int, int] = {}
        self.tracked_flip = 0

    def apply(self, pauli: str, q: int) -> None:
        xb, zb = _PAULI_BITS[pauli]
        if xb:
            self.x[q] = self.x.get(q, 0) ^ 1
        if zb:
            self.z[q] = self.z.get(q, 0) ^ 1

    def pauli_on(self, q: int) -> str:
        return _BITS_PAULI[(self.x.get(q, 0), self.z.get(q, 0))]


def _step(frame: _Frame, op: Op, outcome_flip: bool = False) -> None:
    """Propagate the frame through one ideal op.

    ``outcome_flip`` injects a classical flip on this op's measurement
    (the direct eps_m error source).
    """
    if op.kind == "cnot":
        c, t = op.qubits
        if frame.x.get(c, 0):
            frame.x[t] = frame.x.get(t, 0) ^ 1
        if frame.z.get(t, 0):
            frame.z[c] = frame.z.get(c, 0) ^ 1
    elif op.kind == "bellprep":
        for q in op.qubits:
            frame.x.pop(q, None)
            frame.z.pop(q, None)
    elif op.kind == "meas":
        (q,) = op.qubits
        flipped = outcome_flip
        if op.basis == "z":
            flipped ^= bool(frame.x.get(q, 0))
        else:
            flipped ^= bool(frame.z.get(q, 0))
        frame.x.pop(q, None)
        frame.z.pop(q, None)
        if flipped and op.correction is not None:
            frame.apply(*op.correction)
        if op.tracked and flipped:
            frame.tracked_flip ^= 1


def _propagate(circuit: PauliCircuit, start: int, frame: _Frame,
               flip_start_meas: bool = False) -> _Frame:
    for i in range(start, len(circuit.ops)):
        _step(frame, circuit.ops[i],
              outcome_flip=(flip_start_meas and i == start))
    return frame


def _flips_target(circuit: PauliCircuit, frame: _Frame) -> bool:
    """Does the propagated frame flip the tracked quantity (X-type)?"""
    if frame.tracked_flip:
        return True
    q = circuit.tracked_qubit
    return q is not None and bool(frame.x.get(q, 0))


def derive_flip_rates(circuit: PauliCircuit) -> dict[str, Fraction]:
    """Exact first-order flip coefficients of (eps_bell, eps_cx, eps_m).

    Inserts every possible single error (each of the 15 two-qubit Paulis
    after every noisy two-qubit element; an outcome flip at every noisy
    readout), propagates it, and sums the probabilities of insertions
    that flip the tracked qubit / tracked readout.
    """
    circuit.validate()
    coeffs = {EPS_BELL: Fraction(0), EPS_CX: Fraction(0), EPS_M: Fraction(0)}
    for i, op in enumerate(circuit.ops):
        if op.noise is None:
            continue
        if op.kind == "meas":
            frame = _Frame()
            _propagate(circuit, i, frame, flip_start_meas=True)
            if _flips_target(circuit, frame):
                coeffs[EPS_M] += 1
        else:
            a, b = op.qubits
            for (bits_a, bits_b) in _TWO_QUBIT_PAULIS:
                frame = _Frame()
                frame.apply(_BITS_PAULI[bits_a], a)
                frame.apply(_BITS_PAULI[bits_b], b)
                _propagate(circuit, i + 1, frame)
                if _flips_target(circuit, frame):
                    coeffs[op.noise] += Fraction(1, 15)
    return coeffs


def teleported_gate_propagation(error: str, bell_qubit: int = 1
                                ) -> tuple[str, str]:
    """Propagate a Pauli on either Bell-pair half of a teleported CNOT.

    Returns the resulting (control, target) Paulis.  X-type errors land
    exclusively on the target, Z-type exclusively on the control, and the
    result is identical for either Bell half.
    """
    if error not in _PAULI_BITS:
        raise ValueError(f"error must be one of I, X, Y, Z, got {error!r}")
    if bell_qubit not in (1, 2):
        raise ValueError("bell_qubit must be 1 or 2")
    circ = PauliCircuit()
    control, target = circ.qubit(), circ.qubit()
    b1, b2 = circ.qubit(), circ.qubit()
    circ.ops.append(Op("bellprep", (b1, b2), noise=None))
    circ.cnot(control, b1, noisy=False)
    circ.cnot(b2, target, noisy=False)
    circ.measure(b1, basis="z", noisy=False, correction=("X", target))
    circ.measure(b2, basis="x", noisy=False, correction=("Z", control))

    frame = _Frame()
    frame.apply(error, b1 if bell_qubit == 1 else b2)
    _propagate(circ, 1, frame)  # insert right after the Bell prep
    return frame.pauli_on(control), frame.pauli_on(target)


# Per-cycle circuits behind the bulk / seam / small-modules flip rates.

def bulk_data_circuit() -> PauliCircuit:
    """Data qubit touched by its four local parity checks per cycle."""
    circ = PauliCircuit()
    data = circ.qubit()
    for _ in range(2):
        circ.cnot(data, circ.qubit())
    for _ in range(2):
        circ.cnot(circ.qubit(), data)
    circ.tracked_qubit = data
    return circ


def bulk_syndrome_circuit() -> PauliCircuit:
    """Syndrome qubit: target of four local CNOTs, then read out."""
    circ = PauliCircuit()
    anc = circ.qubit()
    for _ in range(4):
        circ.cnot(circ.qubit(), anc)
    circ.measure(anc, tracked=True)
    circ.tracked_qubit = anc
    return circ


def seam_syndrome_circuit() -> PauliCircuit:
    """Seam syndrome qubit: three local CNOTs, one teleported CNOT, readout."""
    circ = PauliCircuit()
    anc = circ.qubit()
    for _ in range(3):
        circ.cnot(circ.qubit(), anc)
    circ.teleported_cnot(circ.qubit(), anc)
    circ.measure(anc, tracked=True)
    circ.tracked_qubit = anc
    return circ


def seam_data_circuit() -> PauliCircuit:
    """Seam data qubit: like the seam syndrome qubit, less the readout."""
    circ = PauliCircuit()
    data = circ.qubit()
    for _ in range(3):
        circ.cnot(data, circ.qubit())
    circ.teleported_cnot(circ.qubit(), data)
    circ.tracked_qubit = data
    return circ


def small_modules_data_circuit() -> PauliCircuit:
    """All-teleported lattice: data is target of 2 and control of 2."""
    circ = PauliCircuit()
    data = circ.qubit()
    for _ in range(2):
        circ.teleported_cnot(circ.qubit(), data)
    for _ in range(2):
        circ.teleported_cnot(data, circ.qubit())
    circ.tracked_qubit = data
    return circ


def small_modules_syndrome_circuit() -> PauliCircuit:
    """All-teleported lattice: syndrome is target of 4, then read out."""
    circ = PauliCircuit()
    anc = circ.qubit()
    for _ in range(4):
        circ.teleported_cnot(circ.qubit(), anc)
    circ.measure(anc, tracked=True)
    circ.tracked_qubit = anc
    return circ
