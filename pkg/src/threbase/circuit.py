"""Circuits and their unitaries.

A circuit is a gate list in application order.  The circuit unitary is the
product embed(g_t) @ ... @ embed(g_1): appending a gate multiplies on the
left.  Qubit 0 is the most significant bit of a basis-state index, so on
two qubits |01> is index 1 and embed(X on qubit 1) maps |00> to |01>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, ValidationError
from .gates import Gate, gate_matrix

MAX_QUBITS = 12


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1:
            raise ValidationError(f"circuit needs at least one qubit, got {self.n_qubits}")
        for i, g in enumerate(self.gates):
            if not isinstance(g, Gate):
                raise ValidationError(f"gates[{i}] is not a Gate")
            bad = [q for q in g.qubits if q >= self.n_qubits]
            if bad:
                raise ValidationError(
                    f"gates[{i}] ({g.kind.value}) touches qubit {bad[0]} "
                    f"but the circuit has {self.n_qubits} qubits"
                )

    def __len__(self) -> int:
        return len(self.gates)


def _check_cap(n_qubits: int, max_qubits: int):
    if n_qubits > max_qubits:
        raise CapExceeded(
            f"{n_qubits} qubits exceeds the dense-matrix cap of {max_qubits}"
        )


def embed(gate: Gate, n_qubits: int, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Full 2**n matrix of a gate acting on its operands, identity elsewhere."""
    _check_cap(n_qubits, max_qubits)
    if any(q >= n_qubits for q in gate.qubits):
        raise ValidationError(
            f"gate on {gate.qubits} does not fit in {n_qubits} qubits"
        )
    m = gate_matrix(gate)
    k = len(gate.qubits)
    dim = 2**n_qubits
    idx = np.arange(dim)
    shifts = [n_qubits - 1 - q for q in gate.qubits]
    local = np.zeros(dim, dtype=np.int64)
    for j, s in enumerate(shifts):
        local |= ((idx >> s) & 1) << (k - 1 - j)
    cleared = idx & ~sum(1 << s for s in shifts)
    out = np.zeros((dim, dim), dtype=complex)
    for lout in range(2**k):
        rows = cleared + sum(((lout >> (k - 1 - j)) & 1) << s for j, s in enumerate(shifts))
        out[rows, idx] = m[lout, local]
    return out


def circuit_unitary(c: Circuit, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    _check_cap(c.n_qubits, max_qubits)
    u = np.eye(2**c.n_qubits, dtype=complex)
    for g in c.gates:
        u = embed(g, c.n_qubits, max_qubits) @ u
    return u
