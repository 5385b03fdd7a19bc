"""Statevector simulation and circuit equivalence checks.

The simulator applies each gate as a local update on the amplitude tensor
(axis permutation plus a small matmul), never forming the 2^n x 2^n
embedded matrix.  That keeps it an independent oracle against
circuit_unitary: the two routes share no matrix-building code, so their
agreement is a real check rather than a tautology.

Realified circuits carry the ancilla as the last (least significant)
qubit, so a complex map U on n qubits is validated against
|i>|0> -> (Re U|i>)|0> + (Im U|i>)|1> basis state by basis state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import MAX_QUBITS, Circuit, _check_cap, circuit_unitary
from .errors import ValidationError
from .gates import gate_matrix
from .linalg import dist
from .passes import TranspileReport

NORM_ATOL = 1e-10
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (2**self.n_qubits,):
            raise ValidationError(
                f"expected {2**self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValidationError(f"state norm {norm} is not 1 within {NORM_ATOL}")

    def probability(self, index: int) -> float:
        return float(np.abs(self.amplitudes[index]) ** 2)


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of one equivalence check.

    kind is one of "exact-unitary", "realified", "measurement-stats".
    deviations has one entry per basis input (a single entry for the
    exact-unitary mode, which has no per-input structure), worst_input is
    the argmax, and passed holds exactly when max_deviation <= tolerance.
    """

    kind: str
    max_deviation: float
    deviations: tuple[float, ...]
    tolerance: float
    worst_input: int | None
    passed: bool

    def __post_init__(self):
        object.__setattr__(self, "deviations", tuple(self.deviations))
        expected = self.max_deviation <= self.tolerance
        if self.passed != expected:
            raise ValidationError("passed flag contradicts max_deviation vs tolerance")


def _report(kind: str, deviations, tol: float, worst: int | None) -> EquivalenceReport:
    mx = float(max(deviations))
    return EquivalenceReport(kind, mx, tuple(deviations), tol, worst, mx <= tol)


def run(c: Circuit, basis_index: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    """Apply the circuit to a computational basis state."""
    _check_cap(c.n_qubits, max_qubits)
    n = c.n_qubits
    if not 0 <= basis_index < 2**n:
        raise ValidationError(
            f"basis index {basis_index} out of range for {n} qubits"
        )
    psi = np.zeros((2,) * n, dtype=complex)
    psi[np.unravel_index(basis_index, (2,) * n)] = 1.0
    for g in c.gates:
        m = gate_matrix(g)
        k = len(g.qubits)
        moved = np.moveaxis(psi, g.qubits, range(k))
        shape = moved.shape
        moved = m @ moved.reshape(2**k, -1)
        psi = np.moveaxis(moved.reshape(shape), range(k), g.qubits)
    return StateVector(n, psi.reshape(-1))


def check_exact(
    a: Circuit, b: Circuit, tol: float = DEFAULT_TOL, max_qubits: int = MAX_QUBITS
) -> EquivalenceReport:
    """Phase-insensitive unitary distance between two circuits."""
    if a.n_qubits != b.n_qubits:
        raise ValidationError(
            f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}"
        )
    d = dist(circuit_unitary(a, max_qubits), circuit_unitary(b, max_qubits))
    return _report("exact-unitary", [d], tol, None)


def _realified_pair(original: Circuit, realified: Circuit, max_qubits: int):
    if realified.n_qubits != original.n_qubits + 1:
        raise ValidationError(
            f"realified circuit must have exactly one extra qubit: "
            f"{original.n_qubits} -> {realified.n_qubits}"
        )
    return circuit_unitary(original, max_qubits)


def check_realified(
    original: Circuit,
    realified: Circuit,
    tol: float = DEFAULT_TOL,
    max_qubits: int = MAX_QUBITS,
) -> EquivalenceReport:
    """Basis-by-basis check of |i>|0> -> (Re U|i>)|0> + (Im U|i>)|1>."""
    u = _realified_pair(original, realified, max_qubits)
    dim = 2**original.n_qubits
    deviations = []
    for i in range(dim):
        got = run(realified, 2 * i, max_qubits).amplitudes
        expected = np.zeros(2 * dim, dtype=complex)
        expected[0::2] = u[:, i].real
        expected[1::2] = u[:, i].imag
        deviations.append(float(np.linalg.norm(got - expected)))
    worst = int(np.argmax(deviations))
    return _report("realified", deviations, tol, worst)


def check_measurement_stats(
    original: Circuit,
    realified: Circuit,
    tol: float = DEFAULT_TOL,
    max_qubits: int = MAX_QUBITS,
) -> EquivalenceReport:
    """Outcome distributions on the original qubits, flag qubit marginalized."""
    u = _realified_pair(original, realified, max_qubits)
    dim = 2**original.n_qubits
    p_orig = np.abs(u) ** 2
    deviations = []
    for i in range(dim):
        amps = run(realified, 2 * i, max_qubits).amplitudes
        p_real = np.abs(amps[0::2]) ** 2 + np.abs(amps[1::2]) ** 2
        deviations.append(float(np.max(np.abs(p_real - p_orig[:, i]))))
    worst = int(np.argmax(deviations))
    return _report("measurement-stats", deviations, tol, worst)


def overhead_stats(report: TranspileReport) -> bool:
    """Gate-count and qubit-count bounds for the realify pass."""
    return (
        report.output_gates <= 4 * report.input_gates
        and report.output_qubits == report.input_qubits + 1
    )
