import numpy as np
import pytest

from threbase import (
    BudgetNotMet,
    Gate,
    GateKind,
    GateSet,
    Net,
    SKConfig,
    build_net,
    covering_radius_sample,
    demo_1q_gate_set,
    dist,
    gc_decompose,
    haar_unitary,
    kitaev_gate_set,
    nearest,
    net_search_2q,
    sk_approx,
    sk_trace,
    truncate,
)
from threbase.errors import CapExceeded, ValidationError
from threbase.sk import NetEntry, _angle_axis, _nearest, _to_su2

CS4 = np.diag([1, 1, 1, 1j])


def naive_net(gateset, max_length, tol):
    """Quadratic reference build: same BFS and keep-first rule, no index."""
    entries = [NetEntry((), np.eye(gateset.dim, dtype=complex))]
    frontier = list(entries)
    for _ in range(max_length):
        nxt = []
        for e in frontier:
            for lab in gateset.labels:
                m = gateset.matrix(lab) @ e.matrix
                if any(dist(a.matrix, m) < tol for a in entries):
                    continue
                new = NetEntry(e.seq + (lab,), m)
                entries.append(new)
                nxt.append(new)
        frontier = nxt
    return entries


def test_length_one_net_contents():
    net = build_net(kitaev_gate_set(), 1)
    seqs = [e.seq for e in net.entries]
    assert seqs == [(), ("H0",), ("H1",), ("CS",)]
    assert np.array_equal(net.entries[0].matrix, np.eye(4))
    assert np.array_equal(net.entries[3].matrix, CS4)


def test_controlled_z_and_inverse_appear_exactly():
    net = build_net(kitaev_gate_set(), 3)
    cz = np.diag([1, 1, 1, -1]).astype(complex)
    seq, achieved = net_search_2q(cz, net)
    assert seq == ("CS", "CS")
    assert achieved < 1e-12
    seq, achieved = net_search_2q(CS4.conj().T, net)
    assert seq == ("CS", "CS", "CS")
    assert achieved < 1e-12


def test_entry_counts_monotone_in_length():
    counts = [len(build_net(kitaev_gate_set(), L)) for L in (1, 2, 3, 4)]
    assert counts == sorted(counts)
    assert counts[0] == 4


def test_truncate_equals_fresh_build():
    full = build_net(kitaev_gate_set(), 4)
    cut = truncate(full, 2)
    fresh = build_net(kitaev_gate_set(), 2)
    assert [e.seq for e in cut.entries] == [e.seq for e in fresh.entries]
    with pytest.raises(ValidationError):
        truncate(full, 5)


def test_build_is_deterministic():
    a = build_net(demo_1q_gate_set(), 7)
    b = build_net(demo_1q_gate_set(), 7)
    assert [e.seq for e in a.entries] == [e.seq for e in b.entries]
    assert all(np.array_equal(x.matrix, y.matrix) for x, y in zip(a.entries, b.entries))


def test_bucketed_dedupe_matches_naive_reference():
    gs = demo_1q_gate_set()
    got = build_net(gs, 8)
    want = naive_net(gs, 8, got.dedupe_tol)
    assert [e.seq for e in got.entries] == [e.seq for e in want]


def test_net_entries_respect_dedupe_gap():
    net = build_net(kitaev_gate_set(), 3)
    ms = [e.matrix for e in net.entries]
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            assert dist(ms[i], ms[j]) >= net.dedupe_tol


def test_net_entries_reevaluate_from_sequences(demo12):
    gs = demo12.gateset
    idx = np.linspace(0, len(demo12) - 1, 60).astype(int)
    for i in idx:
        e = demo12.entries[i]
        assert np.max(np.abs(gs.evaluate(e.seq) - e.matrix)) < 1e-10


def test_entry_cap():
    with pytest.raises(CapExceeded):
        build_net(demo_1q_gate_set(), 8, max_entries=50)


def test_nearest_finds_generators_and_validates():
    net = build_net(kitaev_gate_set(), 2)
    h0 = net.gateset.matrix("H0")
    e = nearest(net, h0)
    assert e.seq == ("H0",)
    with pytest.raises(ValidationError):
        nearest(net, np.eye(2))
    with pytest.raises(ValidationError):
        nearest(Net(net.gateset, 0, 1e-4, []), np.eye(4))


@pytest.mark.parametrize("dim_fixture", ["demo12", "kitaev_small"])
def test_nearest_matches_linear_scan_oracle(request, dim_fixture, kitaev8):
    net = request.getfixturevalue("demo12") if dim_fixture == "demo12" else truncate(kitaev8, 4)
    rng = np.random.default_rng(20)
    for _ in range(15):
        u = haar_unitary(net.gateset.dim, rng)
        entry, achieved = _nearest(net, u)
        brute = min(dist(e.matrix, u) for e in net.entries)
        assert achieved == pytest.approx(brute, abs=1e-9)
        assert dist(entry.matrix, u) == pytest.approx(brute, abs=1e-9)


def test_covering_radius_shrinks_with_length(demo12):
    rng = np.random.default_rng(21)
    probes = [haar_unitary(2, rng) for _ in range(40)]
    r8 = covering_radius_sample(truncate(demo12, 8), probes)
    r12 = covering_radius_sample(demo12, probes)
    assert 0 < r12 <= r8 < 2.0


# --- balanced group commutator -------------------------------------------

def rotation(axis, angle):
    sig = [
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
    axis = np.asarray(axis) / np.linalg.norm(axis)
    na = sum(a * s for a, s in zip(axis, sig))
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * na


def random_small_rotation(rng, max_dist):
    axis = rng.normal(size=3)
    angle = rng.uniform(0, 4 * np.arcsin(max_dist / 2))
    return rotation(axis, angle)


def test_commutator_identity_input():
    v, w = gc_decompose(np.eye(2))
    assert np.array_equal(v, np.eye(2))
    assert np.array_equal(w, np.eye(2))


def test_commutator_residuals_on_random_rotations():
    rng = np.random.default_rng(22)
    for _ in range(100):
        delta = random_small_rotation(rng, 0.3)
        v, w = gc_decompose(delta)
        residual = dist(delta, v @ w @ v.conj().T @ w.conj().T)
        assert residual <= 1e-10


def test_commutator_halves_are_balanced_and_orthogonal():
    rng = np.random.default_rng(23)
    for _ in range(25):
        delta = random_small_rotation(rng, 0.3)
        v, w = gc_decompose(delta)
        tv, av = _angle_axis(_to_su2(v))
        tw, aw = _angle_axis(_to_su2(w))
        assert tv == pytest.approx(tw, abs=1e-9)
        assert abs(float(np.dot(av, aw))) < 1e-8


def test_commutator_halves_scale_like_square_root():
    rng = np.random.default_rng(24)
    for _ in range(100):
        delta = random_small_rotation(rng, 0.04)
        gap = dist(delta, np.eye(2))
        v, w = gc_decompose(delta)
        for half in (v, w):
            assert dist(half, np.eye(2)) <= 4.0 * np.sqrt(gap) + 1e-12


def test_commutator_preconditions():
    with pytest.raises(ValidationError):
        gc_decompose(rotation([0, 0, 1], 2.5))
    with pytest.raises(ValidationError):
        gc_decompose(np.eye(4))
    with pytest.raises(ValidationError):
        gc_decompose(np.array([[1, 1], [0, 1]], dtype=complex))


# --- recursion ------------------------------------------------------------

def test_config_validation(demo12):
    with pytest.raises(ValidationError):
        SKConfig(net=demo12, eps=0.0)
    with pytest.raises(ValidationError):
        SKConfig(net=demo12, depth=-1)


def test_generator_target_is_a_single_label(demo12):
    h = demo12.gateset.matrix("H")
    seq, achieved = sk_approx(h, SKConfig(net=demo12, eps=1e-6, depth=0))
    assert seq == ("H",)
    assert achieved < 1e-12


def test_trace_is_monotone_and_self_consistent(demo12):
    rng = np.random.default_rng(25)
    cfg = SKConfig(net=demo12, eps=1e-12, depth=3)
    for _ in range(8):
        u = haar_unitary(2, rng)
        trace = sk_trace(u, cfg)
        assert len(trace) == 4
        ds = [d for _, d in trace]
        assert all(ds[k + 1] <= ds[k] for k in range(3))
        for seq, achieved in trace:
            m = demo12.gateset.evaluate(seq)
            assert dist(m, u) <= achieved + 1e-9
            assert len(seq) <= demo12.max_length * 5 ** 3


def test_depth_zero_trace_is_net_lookup(demo12):
    u = haar_unitary(2, np.random.default_rng(26))
    entry, d0 = _nearest(demo12, u)
    trace = sk_trace(u, SKConfig(net=demo12, eps=1.0, depth=0))
    assert trace == [(entry.seq, d0)]


def test_budget_failure_carries_best(demo12):
    u = haar_unitary(2, np.random.default_rng(27))
    with pytest.raises(BudgetNotMet) as e:
        sk_approx(u, SKConfig(net=demo12, eps=1e-9, depth=0))
    assert e.value.best_seq is not None
    assert e.value.achieved > 1e-9


def test_trace_rejects_wrong_dimension(kitaev8):
    with pytest.raises(ValidationError):
        sk_trace(np.eye(4), SKConfig(net=kitaev8, eps=0.1, depth=1))


def test_hadamard_phase_pair_saturates():
    # {H, S} on one qubit generates a finite group: 24 classes up to phase.
    gs = GateSet(
        name="hs1",
        n_qubits=1,
        generators=(
            ("H", Gate(GateKind.H, (0,))),
            ("S", Gate(GateKind.S, (0,))),
        ),
    )
    n10 = build_net(gs, 10)
    n13 = build_net(gs, 13)
    assert len(n10) == len(n13) == 24
