"""JSON serialization for circuits and net caches.

Both formats are versioned and canonical: fixed field order, compact
separators, floats printed with %.17g so a document re-emitted from a
parse is byte-identical.  Circuit files carry gates by name with an
optional row-major matrix (as [re, im] pairs) for generic gates.  Net
caches store label sequences together with their matrices, plus a
fingerprint of the generating set so a stale cache cannot be reused
against different generators.
"""

from __future__ import annotations

import json

import numpy as np

from .circuit import Circuit
from .errors import ValidationError
from .gates import BUILTIN_GATE_SETS, Gate, GateKind, GateSet
from .sk import Net, NetEntry

FORMAT_VERSION = 1


def _fmt(x: float) -> str:
    # -0.0 would print as "-0", which JSON reads back as integer 0; fold it.
    return format(float(x) + 0.0, ".17g")


def _fmt_matrix(m: np.ndarray) -> str:
    pairs = ",".join(f"[{_fmt(z.real)},{_fmt(z.imag)}]" for z in m.reshape(-1))
    return f"[{pairs}]"


def _parse_matrix(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise ValidationError(f"{where}: matrix must be a non-empty list")
    flat = []
    for j, pair in enumerate(raw):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) for v in pair)
        ):
            raise ValidationError(f"{where}: matrix[{j}] must be a [re, im] pair")
        flat.append(complex(pair[0], pair[1]))
    dim = int(round(len(flat) ** 0.5))
    if dim * dim != len(flat):
        raise ValidationError(f"{where}: matrix has {len(flat)} entries, not a square")
    return np.array(flat, dtype=complex).reshape(dim, dim)


def _load_json(text: str, what: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(
            f"malformed {what} at line {e.lineno} column {e.colno}: {e.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise ValidationError(f"{what} must be a JSON object")
    if doc.get("version") != FORMAT_VERSION:
        raise ValidationError(
            f"unsupported {what} version {doc.get('version')!r}, expected {FORMAT_VERSION}"
        )
    return doc


# --- circuits -------------------------------------------------------------

def emit_circuit(c: Circuit) -> str:
    parts = []
    for g in c.gates:
        qubits = ",".join(str(q) for q in g.qubits)
        fields = f'"name":"{g.kind.value}","qubits":[{qubits}]'
        if g.matrix is not None:
            fields += f',"matrix":{_fmt_matrix(g.matrix)}'
        parts.append("{" + fields + "}")
    gates = ",".join(parts)
    return (
        f'{{"version":{FORMAT_VERSION},"qubits":{c.n_qubits},"gates":[{gates}]}}\n'
    )


def parse_circuit(text: str) -> Circuit:
    doc = _load_json(text, "circuit file")
    qubits = doc.get("qubits")
    if not isinstance(qubits, int) or qubits < 1:
        raise ValidationError(f"qubits must be a positive integer, got {qubits!r}")
    raw_gates = doc.get("gates")
    if not isinstance(raw_gates, list):
        raise ValidationError("gates must be a list")
    gates = []
    for i, raw in enumerate(raw_gates):
        where = f"gates[{i}]"
        if not isinstance(raw, dict):
            raise ValidationError(f"{where}: expected an object")
        unknown = set(raw) - {"name", "qubits", "matrix"}
        if unknown:
            raise ValidationError(f"{where}: unknown field {sorted(unknown)[0]!r}")
        name = raw.get("name")
        try:
            kind = GateKind(name)
        except ValueError:
            raise ValidationError(f"{where}: unknown gate name {name!r}") from None
        qs = raw.get("qubits")
        if not isinstance(qs, list) or not all(isinstance(q, int) for q in qs):
            raise ValidationError(f"{where}: qubits must be a list of integers")
        matrix = None
        if "matrix" in raw:
            if kind is not GateKind.GENERIC:
                raise ValidationError(
                    f"{where}: only generic gates may carry a matrix"
                )
            matrix = _parse_matrix(raw["matrix"], where)
        try:
            gates.append(Gate(kind, tuple(qs), matrix))
        except ValidationError as e:
            raise ValidationError(f"{where}: {e}") from None
    try:
        return Circuit(qubits, gates)
    except ValidationError as e:
        raise ValidationError(str(e)) from None


# --- net caches -----------------------------------------------------------

def emit_net(net: Net) -> str:
    head = (
        f'{{"version":{FORMAT_VERSION},'
        f'"gateset":"{net.gateset.name}",'
        f'"fingerprint":"{net.gateset.fingerprint()}",'
        f'"max_len":{net.max_length},'
        f'"dedupe_tol":{_fmt(net.dedupe_tol)},'
        f'"entries":['
    )
    rows = []
    for e in net.entries:
        seq = ",".join(f'"{label}"' for label in e.seq)
        rows.append(f'{{"seq":[{seq}],"matrix":{_fmt_matrix(e.matrix)}}}')
    return head + ",".join(rows) + "]}\n"


def parse_net(text: str, gateset: GateSet | None = None) -> Net:
    doc = _load_json(text, "net cache")
    name = doc.get("gateset")
    if gateset is None:
        factory = BUILTIN_GATE_SETS.get(name)
        if factory is None:
            raise ValidationError(
                f"unknown gate set {name!r}; pass one explicitly to load this cache"
            )
        gateset = factory()
    fingerprint = doc.get("fingerprint")
    if fingerprint != gateset.fingerprint():
        raise ValidationError(
            f"net cache fingerprint {fingerprint!r} does not match gate set "
            f"{gateset.name!r}; rebuild the cache"
        )
    max_len = doc.get("max_len")
    tol = doc.get("dedupe_tol")
    if not isinstance(max_len, int) or max_len < 0:
        raise ValidationError(f"bad max_len {max_len!r}")
    if not isinstance(tol, (int, float)) or tol <= 0:
        raise ValidationError(f"bad dedupe_tol {tol!r}")
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, list) or not raw_entries:
        raise ValidationError("entries must be a non-empty list")
    dim = gateset.dim
    entries = []
    for i, raw in enumerate(raw_entries):
        where = f"entries[{i}]"
        if not isinstance(raw, dict):
            raise ValidationError(f"{where}: expected an object")
        seq = raw.get("seq")
        if not isinstance(seq, list) or not all(isinstance(s, str) for s in seq):
            raise ValidationError(f"{where}: seq must be a list of labels")
        bad = [s for s in seq if s not in gateset.labels]
        if bad:
            raise ValidationError(f"{where}: unknown label {bad[0]!r}")
        if len(seq) > max_len:
            raise ValidationError(f"{where}: sequence longer than max_len")
        m = _parse_matrix(raw.get("matrix"), where)
        if m.shape != (dim, dim):
            raise ValidationError(
                f"{where}: matrix is {m.shape[0]}x{m.shape[1]}, net dimension is {dim}"
            )
        entries.append(NetEntry(tuple(seq), m))
    net = Net(gateset, max_len, float(tol), entries)
    _spot_check(net)
    return net


def _spot_check(net: Net, samples: int = 16, tol: float = 1e-10):
    # Full re-evaluation of every entry is a test-suite job; loading only
    # guards against a corrupted or hand-edited cache.
    n = len(net.entries)
    for i in sorted({0, n - 1, *range(0, n, max(1, n // samples))}):
        e = net.entries[i]
        if np.max(np.abs(net.gateset.evaluate(e.seq) - e.matrix)) > tol:
            raise ValidationError(
                f"entries[{i}]: stored matrix does not match its sequence"
            )
