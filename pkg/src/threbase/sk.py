"""Solovay-Kitaev approximation over finite gate sets.

A net is a deduplicated table of all products of at most L generators,
with each entry carrying its label sequence (application order) and its
matrix.  Dedup keeps the first sequence found in breadth-first order, so
entries are shortest-first and net construction is fully deterministic.

The recursion refines a depth-(k-1) approximation u' of u by factoring the
residual u @ u'^dagger into a balanced group commutator V W V^dag W^dag,
recursing on V and W, and prepending u'.  Refinement keeps whichever of
the refined and unrefined candidates is closer, so achieved distance is
monotone non-increasing in depth.  Only dimension 2 is refined; dimension 4
gets the depth-0 net lookup with an honestly reported distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import CapExceeded, CompileError, ValidationError
from .gates import GateSet
from .linalg import as_matrix, dist, is_unitary

DEFAULT_DEDUPE_TOL = 1e-4
DEFAULT_EPS = 1e-2
DEFAULT_MAX_ENTRIES = 5_000_000
GC_MAX_DIST = 0.5
_BISECT_XTOL = 1e-12

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class NetEntry:
    seq: tuple[str, ...]
    matrix: np.ndarray

    @property
    def length(self) -> int:
        return len(self.seq)


class Net:
    """Immutable entry table over a gate set, with cached matrix stacks."""

    def __init__(self, gateset: GateSet, max_length: int, dedupe_tol: float, entries):
        self.gateset = gateset
        self.max_length = max_length
        self.dedupe_tol = dedupe_tol
        self.entries = tuple(entries)
        self._conj_stack: np.ndarray | None = None
        self._absdet_stack: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int:
        return self.gateset.dim

    def conj_stack(self) -> np.ndarray:
        if self._conj_stack is None:
            self._conj_stack = np.conj(np.stack([e.matrix for e in self.entries]))
        return self._conj_stack

    def absdet_stack(self) -> np.ndarray:
        if self._absdet_stack is None:
            c = self.conj_stack()
            self._absdet_stack = np.abs(c[:, 0, 0] * c[:, 1, 1] - c[:, 0, 1] * c[:, 1, 0])
        return self._absdet_stack


def build_net(
    gateset: GateSet,
    max_length: int,
    dedupe_tol: float = DEFAULT_DEDUPE_TOL,
    max_entries: int = DEFAULT_MAX_ENTRIES,
) -> Net:
    """All products of <= max_length generators, deduplicated at dedupe_tol."""
    if max_length < 0:
        raise ValidationError(f"max_length must be >= 0, got {max_length}")
    if dedupe_tol <= 0:
        raise ValidationError(f"dedupe_tol must be positive, got {dedupe_tol}")
    dim = gateset.dim
    root = NetEntry((), np.eye(dim, dtype=complex))
    accepted = [root]
    index = _DedupeIndex(dim, dedupe_tol)
    index.add(root.matrix, 0)
    frontier = [root]
    for _ in range(max_length):
        next_frontier = []
        for entry in frontier:
            for label in gateset.labels:
                cand = gateset.matrix(label) @ entry.matrix
                if index.has_duplicate(accepted, cand):
                    continue
                new = NetEntry(entry.seq + (label,), cand)
                accepted.append(new)
                index.add(cand, len(accepted) - 1)
                next_frontier.append(new)
                if len(accepted) > max_entries:
                    raise CapExceeded(
                        f"net exceeded {max_entries} entries at length {new.length}"
                    )
        frontier = next_frontier
    return Net(gateset, max_length, dedupe_tol, accepted)


class _DedupeIndex:
    """Exact duplicate test (dist < tol against any accepted entry).

    Entry moduli are phase-invariant and each is 1-Lipschitz under dist, so
    bucketing the modulus vector on a tol-grid gives a complete candidate
    list from the 3**(d*d) neighbouring buckets.  That is only viable at
    dimension 2; larger dimensions fall back to a vectorized linear scan.
    """

    def __init__(self, dim: int, tol: float):
        self.dim = dim
        self.tol = tol
        self.bucketed = dim == 2
        self.buckets: dict[tuple, list[int]] = {}
        self.conj: list[np.ndarray] = []

    def _key(self, m: np.ndarray) -> np.ndarray:
        return np.floor(np.abs(m).ravel() / self.tol).astype(np.int64)

    def add(self, m: np.ndarray, idx: int):
        if self.bucketed:
            self.buckets.setdefault(tuple(self._key(m)), []).append(idx)
        else:
            self.conj.append(np.conj(m))

    def has_duplicate(self, accepted, cand: np.ndarray) -> bool:
        d = self.dim
        if self.bucketed:
            base = self._key(cand)
            hits: list[int] = []
            for off in _NEIGHBOR_OFFSETS:
                hits.extend(self.buckets.get(tuple(base + off), ()))
            if not hits:
                return False
            stack = np.stack([np.conj(accepted[i].matrix) for i in hits])
            overlap = np.abs(np.einsum("nij,ij->n", stack, cand))
        else:
            hits = list(range(len(self.conj)))
            overlap = np.abs(np.einsum("nij,ij->n", np.asarray(self.conj), cand))
        frob = np.sqrt(np.maximum(2.0 * d - 2.0 * overlap, 0.0))
        if np.any(frob < self.tol):
            return True
        border = np.nonzero(frob < self.tol * np.sqrt(d))[0]
        return any(dist(accepted[hits[i]].matrix, cand) < self.tol for i in border)


_NEIGHBOR_OFFSETS = np.array(
    [[(i // 27) % 3 - 1, (i // 9) % 3 - 1, (i // 3) % 3 - 1, i % 3 - 1] for i in range(81)],
    dtype=np.int64,
)


def truncate(net: Net, max_length: int) -> Net:
    """Sub-net of sequences not longer than max_length.

    Identical to a fresh build at the smaller bound: dedup decisions for a
    length-l candidate only ever consult entries of length <= l.
    """
    if max_length > net.max_length:
        raise ValidationError(
            f"cannot extend a net of max_length {net.max_length} to {max_length}"
        )
    kept = [e for e in net.entries if e.length <= max_length]
    return Net(net.gateset, max_length, net.dedupe_tol, kept)


def _nearest(net: Net, u: np.ndarray) -> tuple[NetEntry, float]:
    if not net.entries:
        raise ValidationError("net has no entries")
    u = as_matrix(u)
    if u.shape[0] != net.dim:
        raise ValidationError(
            f"target dimension {u.shape[0]} does not match net dimension {net.dim}"
        )
    d = net.dim
    if d == 2:
        # Same closed form as dist() on unitary 2x2 pairs, over all entries
        # at once: tr(e^dag u) and |det| give the folded eigenphase gap.
        tr = np.einsum("nij,ij->n", net.conj_stack(), u)
        absdet_u = abs(u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0])
        folded = np.minimum(1.0, np.abs(tr) / (2.0 * np.sqrt(net.absdet_stack() * absdet_u)))
        dists = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * folded))
        ties = np.flatnonzero(dists == dists.min())
        best = min(ties, key=lambda i: (net.entries[i].length, net.entries[i].seq))
        entry = net.entries[best]
        if dists[best] < 1e-5:
            # Near-exact hits sit in the closed form's cancellation regime;
            # report the achieved distance at full absolute accuracy.
            return entry, dist(entry.matrix, u)
        return entry, float(dists[best])
    overlap = np.abs(np.einsum("nij,ij->n", net.conj_stack(), u))
    frob = np.sqrt(np.maximum(2.0 * d - 2.0 * overlap, 0.0))
    lower = frob / np.sqrt(d)
    order = np.lexsort((np.arange(len(frob)), frob))
    best_entry, best_dist, best_key = None, np.inf, None
    for i in order:
        if lower[i] > best_dist:
            break
        entry = net.entries[i]
        di = dist(entry.matrix, u)
        key = (di, entry.length, entry.seq)
        if best_key is None or key < best_key:
            best_entry, best_dist, best_key = entry, di, key
    return best_entry, best_dist


def nearest(net: Net, u) -> NetEntry:
    """Closest entry under dist; ties go to shorter, then lexicographic, seq."""
    return _nearest(net, u)[0]


def net_search_2q(u, net: Net) -> tuple[tuple[str, ...], float]:
    """Depth-0 lookup for a two-qubit target; no recursion at dimension 4."""
    if net.gateset.n_qubits != 2:
        raise ValidationError("net_search_2q needs a net over a two-qubit gate set")
    entry, achieved = _nearest(net, u)
    return entry.seq, achieved


def covering_radius_sample(net: Net, targets) -> float:
    """Max nearest-entry distance over a target sample."""
    return max(_nearest(net, t)[1] for t in targets)


# --- balanced group commutator -------------------------------------------

def _to_su2(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    out = m / np.sqrt(det)
    if out[0, 0].real + out[1, 1].real < 0:
        out = -out
    return out


def _angle_axis(m_su2: np.ndarray) -> tuple[float, np.ndarray | None]:
    """Rotation angle in [0, pi] and unit axis; axis is None near identity."""
    c = np.clip((m_su2[0, 0].real + m_su2[1, 1].real) / 2.0, -1.0, 1.0)
    theta = 2.0 * np.arccos(c)
    s = np.sin(theta / 2.0)
    if s < 1e-12:
        return float(theta), None
    n = np.array([(1j * np.trace(p @ m_su2) / 2.0).real / s for p in _SIGMA])
    norm = np.linalg.norm(n)
    if norm < 1e-12:
        return float(theta), None
    return float(theta), n / norm


def _rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    na = axis[0] * _SIGMA[0] + axis[1] * _SIGMA[1] + axis[2] * _SIGMA[2]
    return np.cos(angle / 2.0) * np.eye(2) - 1j * np.sin(angle / 2.0) * na


_EX = np.array([1.0, 0.0, 0.0])
_EY = np.array([0.0, 1.0, 0.0])


def _commutator_of(phi: float) -> np.ndarray:
    v = _rotation(_EX, phi)
    w = _rotation(_EY, phi)
    return v @ w @ v.conj().T @ w.conj().T


def _commutator_angle(phi: float) -> float:
    return _angle_axis(_to_su2(_commutator_of(phi)))[0]


def _axis_aligner(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """SU(2) conjugator whose Bloch rotation takes axis src to axis dst."""
    cross = np.cross(src, dst)
    norm = np.linalg.norm(cross)
    cos = float(np.dot(src, dst))
    if norm < 1e-14:
        if cos > 0:
            return np.eye(2, dtype=complex)
        # Antiparallel: rotate by pi about any axis orthogonal to src.
        probe = np.zeros(3)
        probe[int(np.argmin(np.abs(src)))] = 1.0
        ortho = probe - np.dot(probe, src) * src
        return _rotation(ortho / np.linalg.norm(ortho), np.pi)
    angle = np.arctan2(norm, cos)
    return _rotation(cross / norm, angle)


def gc_decompose(delta, commutator_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Factor a near-identity 2x2 unitary as a balanced group commutator.

    Returns equal-angle rotations (V, W) about orthogonal axes with
    dist(delta, V W V^dag W^dag) <= commutator_tol.  The rotation angle is
    found by bisecting the numerically measured commutator angle, and the
    commutator axis is then conjugated onto delta's axis.
    """
    delta = as_matrix(delta)
    if delta.shape[0] != 2:
        raise ValidationError("gc_decompose handles dimension 2 only")
    if not is_unitary(delta):
        raise ValidationError("gc_decompose requires a unitary input")
    gap = dist(delta, np.eye(2))
    if gap > GC_MAX_DIST:
        raise ValidationError(
            f"gc_decompose needs dist(delta, I) <= {GC_MAX_DIST}, got {gap:.3f}"
        )
    eye = np.eye(2, dtype=complex)
    theta, axis = _angle_axis(_to_su2(delta))
    if axis is None or theta <= 2e-10:
        return eye, eye

    # Bracket the angle equation on a coarse grid; the measured commutator
    # angle grows monotonically from 0 to pi over this range.
    lo, hi = 0.0, None
    for phi in np.arange(0.1, 2.2, 0.1):
        if _commutator_angle(phi) >= theta:
            hi = phi
            break
        lo = phi
    if hi is None:
        raise CompileError(f"no commutator angle bracket for theta={theta:.3f}")
    phi = bisect(lambda p: _commutator_angle(p) - theta, lo, hi, xtol=_BISECT_XTOL)

    v = _rotation(_EX, phi)
    w = _rotation(_EY, phi)
    _, caxis = _angle_axis(_to_su2(_commutator_of(phi)))
    if caxis is None:
        raise CompileError("degenerate commutator axis")
    s = _axis_aligner(caxis, axis)
    v = s @ v @ s.conj().T
    w = s @ w @ s.conj().T
    residual = dist(delta, v @ w @ v.conj().T @ w.conj().T)
    if residual > commutator_tol:
        raise CompileError(
            f"group commutator residual {residual:.3e} above {commutator_tol:.1e}"
        )
    return v, w


# --- recursion ------------------------------------------------------------

@dataclass(frozen=True)
class SKConfig:
    net: Net
    eps: float = DEFAULT_EPS
    depth: int = 3
    commutator_tol: float = 1e-10

    def __post_init__(self):
        if self.eps <= 0:
            raise ValidationError(f"eps must be positive, got {self.eps}")
        if self.depth < 0:
            raise ValidationError(f"depth must be >= 0, got {self.depth}")


@dataclass(frozen=True)
class _Approx:
    seq: tuple[str, ...]
    matrix: np.ndarray
    achieved: float


def _invert_seq(seq, gateset: GateSet) -> tuple[str, ...]:
    out: list[str] = []
    for label in reversed(seq):
        out.extend(gateset.inverse_labels(label))
    return tuple(out)


def _refine(u: np.ndarray, prev: _Approx, sub_depth: int, net: Net, ctol: float) -> _Approx:
    # dist is unitary-invariant, so dist(residual, I) is exactly prev.achieved
    # and the group-commutator precondition reduces to a threshold on it.
    if prev.achieved < 1e-12 or prev.achieved > GC_MAX_DIST:
        return prev
    delta = u @ prev.matrix.conj().T
    v_t, w_t = gc_decompose(delta, ctol)
    av = _sk(v_t, sub_depth, net, ctol)
    aw = _sk(w_t, sub_depth, net, ctol)
    m = av.matrix @ aw.matrix @ av.matrix.conj().T @ aw.matrix.conj().T @ prev.matrix
    gs = net.gateset
    seq = (
        prev.seq
        + _invert_seq(aw.seq, gs)
        + _invert_seq(av.seq, gs)
        + aw.seq
        + av.seq
    )
    achieved = dist(m, u)
    if achieved < prev.achieved:
        return _Approx(seq, m, achieved)
    return prev


def _sk(u: np.ndarray, depth: int, net: Net, ctol: float) -> _Approx:
    entry, d0 = _nearest(net, u)
    approx = _Approx(entry.seq, entry.matrix, d0)
    for k in range(depth):
        approx = _refine(u, approx, k, net, ctol)
    return approx


def sk_trace(u, cfg: SKConfig) -> list[tuple[tuple[str, ...], float]]:
    """Approximations of u at every depth 0..cfg.depth (shared recursion)."""
    u = as_matrix(u)
    if u.shape[0] != 2:
        raise ValidationError("the recursion refines single-qubit targets only")
    if not is_unitary(u):
        raise ValidationError("target must be unitary")
    entry, d0 = _nearest(cfg.net, u)
    approx = _Approx(entry.seq, entry.matrix, d0)
    trace = [(approx.seq, approx.achieved)]
    for k in range(cfg.depth):
        approx = _refine(u, approx, k, cfg.net, cfg.commutator_tol)
        trace.append((approx.seq, approx.achieved))
    return trace


def sk_approx(u, cfg: SKConfig) -> tuple[tuple[str, ...], float]:
    """Label sequence approximating u within cfg.eps, or BudgetNotMet."""
    from .errors import BudgetNotMet

    seq, achieved = sk_trace(u, cfg)[-1]
    if achieved > cfg.eps:
        raise BudgetNotMet(
            f"achieved {achieved:.3e} at depth {cfg.depth}, budget {cfg.eps:.3e}",
            best_seq=seq,
            achieved=achieved,
        )
    return seq, achieved
