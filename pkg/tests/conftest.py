from __future__ import annotations

import numpy as np
import pytest

from threbase import Circuit, Gate, GateKind, build_net, demo_1q_gate_set, kitaev_gate_set

CORPUS_SEED = 20250825


def random_kitaev_circuit(rng: np.random.Generator) -> Circuit:
    """Random circuit over the {H, CS} alphabet, n in 2..4, up to 30 gates."""
    n = int(rng.integers(2, 5))
    gates = []
    for _ in range(int(rng.integers(1, 31))):
        if rng.random() < 0.5:
            gates.append(Gate(GateKind.H, (int(rng.integers(n)),)))
        else:
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(Gate(GateKind.CS, (int(a), int(b))))
    return Circuit(n, gates)


@pytest.fixture(scope="session")
def corpus() -> list[Circuit]:
    rng = np.random.default_rng(CORPUS_SEED)
    return [random_kitaev_circuit(rng) for _ in range(100)]


@pytest.fixture(scope="session")
def kitaev8():
    return build_net(kitaev_gate_set(), 8)


@pytest.fixture(scope="session")
def demo12():
    return build_net(demo_1q_gate_set(), 12)


@pytest.fixture(scope="session")
def demo22():
    # Shared by the slower approximation checks; one build per session.
    return build_net(demo_1q_gate_set(), 22)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log() -> list[str]:
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance summary")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
