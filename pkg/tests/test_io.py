import json
from pathlib import Path

import numpy as np
import pytest

from threbase import (
    Circuit,
    Gate,
    GateKind,
    build_net,
    demo_1q_gate_set,
    emit_circuit,
    emit_net,
    kitaev_gate_set,
    parse_circuit,
    parse_net,
)
from threbase.errors import ValidationError

DATA = Path(__file__).parent / "data"


def golden(name: str) -> str:
    return (DATA / name).read_text()


def test_circuit_golden_bytes_are_stable():
    text = golden("golden_circuit.json")
    c = parse_circuit(text)
    assert c.n_qubits == 3
    assert [g.kind for g in c.gates] == [
        GateKind.H, GateKind.CS, GateKind.CCX, GateKind.GENERIC, GateKind.CNOT,
    ]
    assert emit_circuit(c) == text


def test_circuit_roundtrip_is_byte_identical(corpus):
    for c in corpus[:20]:
        text = emit_circuit(c)
        again = emit_circuit(parse_circuit(text))
        assert again == text
        assert text.endswith("]}\n")


def test_generic_matrix_survives_roundtrip():
    rng = np.random.default_rng(30)
    from threbase import haar_unitary

    u = haar_unitary(4, rng)
    c = Circuit(3, [Gate(GateKind.GENERIC, (2, 0), u)])
    back = parse_circuit(emit_circuit(c))
    assert np.max(np.abs(back.gates[0].matrix - u)) < 1e-15
    assert emit_circuit(back) == emit_circuit(c)


def test_empty_circuit_roundtrip():
    c = Circuit(2, [])
    assert parse_circuit(emit_circuit(c)).gates == ()


def test_malformed_json_reports_position():
    with pytest.raises(ValidationError, match=r"line 2 column 13"):
        parse_circuit('{"version":1,\n  "qubits": }')


def test_circuit_version_and_shape_errors():
    with pytest.raises(ValidationError, match="version"):
        parse_circuit('{"version":2,"qubits":1,"gates":[]}')
    with pytest.raises(ValidationError, match="JSON object"):
        parse_circuit("[1,2]")
    with pytest.raises(ValidationError, match="positive integer"):
        parse_circuit('{"version":1,"qubits":0,"gates":[]}')
    with pytest.raises(ValidationError, match="gates must be a list"):
        parse_circuit('{"version":1,"qubits":1,"gates":{}}')


def test_circuit_gate_level_errors():
    head = '{"version":1,"qubits":2,"gates":['
    with pytest.raises(ValidationError, match=r"gates\[0\]: unknown gate name 'CQ'"):
        parse_circuit(head + '{"name":"CQ","qubits":[0]}]}')
    with pytest.raises(ValidationError, match=r"gates\[1\].*repeated"):
        parse_circuit(
            head + '{"name":"H","qubits":[0]},{"name":"CS","qubits":[1,1]}]}'
        )
    with pytest.raises(ValidationError, match=r"gates\[0\]: only generic"):
        parse_circuit(head + '{"name":"H","qubits":[0],"matrix":[[1,0]]}]}')
    with pytest.raises(ValidationError, match=r"gates\[0\]: unknown field"):
        parse_circuit(head + '{"name":"H","qubits":[0],"extra":1}]}')
    with pytest.raises(ValidationError, match="list of integers"):
        parse_circuit(head + '{"name":"H","qubits":"0"}]}')
    with pytest.raises(ValidationError, match="not a square"):
        parse_circuit(
            head + '{"name":"GENERIC","qubits":[0],"matrix":[[1,0],[0,0],[1,0]]}]}'
        )
    with pytest.raises(ValidationError, match=r"matrix\[0\]"):
        parse_circuit(head + '{"name":"GENERIC","qubits":[0],"matrix":[[1]]}]}')


def test_circuit_qubit_range_error():
    with pytest.raises(ValidationError):
        parse_circuit('{"version":1,"qubits":1,"gates":[{"name":"H","qubits":[1]}]}')


def test_net_golden_bytes_are_stable():
    text = golden("golden_net.json")
    net = parse_net(text)
    assert net.gateset.name == "kitaev"
    assert net.max_length == 2
    assert len(net) == 10
    assert emit_net(net) == text


def test_net_roundtrip_preserves_entries():
    net = build_net(demo_1q_gate_set(), 6)
    back = parse_net(emit_net(net), demo_1q_gate_set())
    assert [e.seq for e in back.entries] == [e.seq for e in net.entries]
    worst = max(
        float(np.max(np.abs(a.matrix - b.matrix)))
        for a, b in zip(net.entries, back.entries)
    )
    assert worst < 1e-15
    assert emit_net(back) == emit_net(net)


def test_net_rejects_wrong_fingerprint():
    text = emit_net(build_net(kitaev_gate_set(), 1))
    doc = json.loads(text)
    doc["fingerprint"] = "0" * 64
    with pytest.raises(ValidationError, match="fingerprint.*rebuild"):
        parse_net(json.dumps(doc))
    with pytest.raises(ValidationError, match="does not match gate set"):
        parse_net(text, demo_1q_gate_set())


def test_net_rejects_unknown_gateset_name():
    text = emit_net(build_net(kitaev_gate_set(), 1))
    doc = json.loads(text)
    doc["gateset"] = "mystery"
    with pytest.raises(ValidationError, match="unknown gate set 'mystery'"):
        parse_net(json.dumps(doc))


def test_net_entry_validation():
    base = json.loads(emit_net(build_net(kitaev_gate_set(), 1)))

    def broken(**patch):
        doc = json.loads(json.dumps(base))
        doc.update(patch)
        return json.dumps(doc)

    with pytest.raises(ValidationError, match="bad max_len"):
        parse_net(broken(max_len=-1))
    with pytest.raises(ValidationError, match="bad dedupe_tol"):
        parse_net(broken(dedupe_tol=0))
    with pytest.raises(ValidationError, match="non-empty list"):
        parse_net(broken(entries=[]))

    doc = json.loads(json.dumps(base))
    doc["entries"][1]["seq"] = ["NOPE"]
    with pytest.raises(ValidationError, match=r"entries\[1\]: unknown label"):
        parse_net(json.dumps(doc))

    doc = json.loads(json.dumps(base))
    doc["entries"][2]["seq"] = ["H0", "H0"]
    with pytest.raises(ValidationError, match="longer than max_len"):
        parse_net(json.dumps(doc))

    doc = json.loads(json.dumps(base))
    doc["entries"][0]["matrix"] = [[1, 0], [0, 0], [0, 0], [1, 0]]
    with pytest.raises(ValidationError, match="net dimension is 4"):
        parse_net(json.dumps(doc))


def test_net_spot_check_catches_corruption():
    doc = json.loads(emit_net(build_net(kitaev_gate_set(), 2)))
    doc["entries"][3]["matrix"][0] = [0.5, 0.5]
    with pytest.raises(ValidationError, match="stored matrix does not match"):
        parse_net(json.dumps(doc))
