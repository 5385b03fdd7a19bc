"""Gate kinds, their matrices, and generating gate sets.

Conventions, used consistently across the package:
  - qubit 0 is the most significant bit of a basis-state index
  - a gate's operand list orders controls first, target last, and the first
    operand is the most significant bit of the gate's own matrix index
  - CS = controlled-S = diag(1, 1, 1, i); CCX swaps |110> and |111>

Matrix identities relied on elsewhere:
  CS @ CS = CZ        CS^3 = CS^-1        X @ Z = [[0, -1], [1, 0]]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import linalg
from .errors import ValidationError

_SQ2 = 1.0 / np.sqrt(2.0)

_MATRICES = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "CS": np.diag([1, 1, 1, 1j]).astype(complex),
    "CSDG": np.diag([1, 1, 1, -1j]).astype(complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CCX": np.eye(8, dtype=complex)[:, [0, 1, 2, 3, 4, 5, 7, 6]],
}
for _m in _MATRICES.values():
    _m.setflags(write=False)


class GateKind(str, Enum):
    H = "H"
    X = "X"
    Z = "Z"
    S = "S"
    SDG = "SDG"
    CS = "CS"
    CSDG = "CSDG"
    CZ = "CZ"
    CNOT = "CNOT"
    CCX = "CCX"
    GENERIC = "GENERIC"


ARITY = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.Z: 1,
    GateKind.S: 1,
    GateKind.SDG: 1,
    GateKind.CS: 2,
    GateKind.CSDG: 2,
    GateKind.CZ: 2,
    GateKind.CNOT: 2,
    GateKind.CCX: 3,
}

GENERIC_MAX_QUBITS = 3
GENERIC_ATOL = 1e-10


@dataclass(frozen=True)
class Gate:
    """One gate application: a kind plus the qubits it acts on.

    `matrix` is set only for GENERIC gates and is validated to be unitary.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    matrix: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if any(q < 0 for q in self.qubits):
            raise ValidationError(f"negative qubit index in {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValidationError(f"repeated operand in {self.qubits}")
        if kind is GateKind.GENERIC:
            if self.matrix is None:
                raise ValidationError("GENERIC gate requires a matrix")
            m = linalg.as_matrix(self.matrix)
            k = len(self.qubits)
            if not 1 <= k <= GENERIC_MAX_QUBITS:
                raise ValidationError(
                    f"GENERIC gate supports 1..{GENERIC_MAX_QUBITS} qubits, got {k}"
                )
            if m.shape[0] != 2**k:
                raise ValidationError(
                    f"matrix of shape {m.shape} does not act on {k} qubits"
                )
            if not linalg.is_unitary(m, GENERIC_ATOL):
                raise ValidationError("GENERIC matrix is not unitary")
            m = m.copy()
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)
        else:
            if self.matrix is not None:
                raise ValidationError(f"{kind.value} gate does not take a matrix")
            if len(self.qubits) != ARITY[kind]:
                raise ValidationError(
                    f"{kind.value} acts on {ARITY[kind]} qubits, got {self.qubits}"
                )

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        if (self.kind, self.qubits) != (other.kind, other.qubits):
            return False
        if self.matrix is None or other.matrix is None:
            return self.matrix is other.matrix
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        m = None if self.matrix is None else self.matrix.tobytes()
        return hash((self.kind, self.qubits, m))


def gate_matrix(gate: Gate | GateKind | str) -> np.ndarray:
    """Matrix of a gate on its own operands (dimension 2**arity)."""
    if isinstance(gate, Gate):
        if gate.kind is GateKind.GENERIC:
            return gate.matrix
        return _MATRICES[gate.kind.value]
    kind = GateKind(gate)
    if kind is GateKind.GENERIC:
        raise ValidationError("GENERIC has no fixed matrix")
    return _MATRICES[kind.value]


_MAX_GENERATOR_ORDER = 16


@dataclass(frozen=True)
class GateSet:
    """Named generators over a fixed-width qubit domain.

    When the set is not closed under inverse, each generator must have a
    finite order so inverses can be synthesized by powering (CS^-1 = CS^3).
    """

    name: str
    n_qubits: int
    generators: tuple[tuple[str, Gate], ...]
    closed_under_inverse: bool = False
    _matrices: dict = field(default_factory=dict, repr=False, compare=False)
    _inv_powers: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        from .circuit import embed  # local import to avoid a cycle

        labels = [lab for lab, _ in self.generators]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate generator labels in {labels}")
        for lab, g in self.generators:
            if any(q >= self.n_qubits for q in g.qubits):
                raise ValidationError(
                    f"generator {lab} uses qubits outside a {self.n_qubits}-qubit domain"
                )
            m = embed(g, self.n_qubits)
            if not linalg.is_unitary(m):
                raise ValidationError(f"generator {lab} is not unitary")
            m.setflags(write=False)
            self._matrices[lab] = m
            if not self.closed_under_inverse:
                self._inv_powers[lab] = _finite_order(m, lab) - 1

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.generators)

    def matrix(self, label: str) -> np.ndarray:
        try:
            return self._matrices[label]
        except KeyError:
            raise ValidationError(f"unknown generator {label!r}") from None

    def gate(self, label: str) -> Gate:
        for lab, g in self.generators:
            if lab == label:
                return g
        raise ValidationError(f"unknown generator {label!r}")

    def inverse_labels(self, label: str) -> tuple[str, ...]:
        """Label sequence (application order) realizing the exact inverse."""
        if self.closed_under_inverse:
            target = self.matrix(label).conj().T
            for lab in self.labels:
                if np.allclose(self.matrix(lab), target, atol=1e-12):
                    return (lab,)
            raise ValidationError(f"no inverse generator found for {label!r}")
        return (label,) * self._inv_powers[label]

    def evaluate(self, seq) -> np.ndarray:
        """Product of a label sequence given in application order."""
        u = np.eye(self.dim, dtype=complex)
        for lab in seq:
            u = self.matrix(lab) @ u
        return u

    def fingerprint(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(f"{self.name}/{self.n_qubits}".encode())
        for lab in self.labels:
            h.update(lab.encode())
            h.update(np.ascontiguousarray(self.matrix(lab)).tobytes())
        return h.hexdigest()


def _finite_order(m: np.ndarray, label: str) -> int:
    p = m.copy()
    for order in range(1, _MAX_GENERATOR_ORDER + 1):
        if np.max(np.abs(p - np.eye(m.shape[0]))) <= 1e-12:
            return order
        p = p @ m
    raise ValidationError(
        f"generator {label} has no order <= {_MAX_GENERATOR_ORDER}; "
        "cannot synthesize its inverse by powering"
    )


def kitaev_gate_set() -> GateSet:
    """{H on each qubit, CS} on two qubits."""
    return GateSet(
        name="kitaev",
        n_qubits=2,
        generators=(
            ("H0", Gate(GateKind.H, (0,))),
            ("H1", Gate(GateKind.H, (1,))),
            ("CS", Gate(GateKind.CS, (0, 1))),
        ),
    )


def demo_1q_gate_set() -> GateSet:
    """The dense single-qubit pair {H, diag(1, e^{i pi/4})}, inverse-closed.

    The explicit inverse label keeps approximation sequences from inflating:
    synthesizing it by powering would cost seven letters per occurrence and
    the recursion inverts half of everything it emits.
    """
    t = np.diag([1.0, np.exp(1j * np.pi / 4)])
    return GateSet(
        name="ht",
        n_qubits=1,
        generators=(
            ("H", Gate(GateKind.H, (0,))),
            ("T", Gate(GateKind.GENERIC, (0,), matrix=t)),
            ("TDG", Gate(GateKind.GENERIC, (0,), matrix=t.conj().T)),
        ),
        closed_under_inverse=True,
    )


BUILTIN_GATE_SETS = {"kitaev": kitaev_gate_set, "ht": demo_1q_gate_set}
