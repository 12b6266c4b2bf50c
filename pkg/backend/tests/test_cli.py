from __future__ import annotations

import json
import warnings
from pathlib import Path

import numpy as np
import pytest

from qudecide.decider_service import decide
from qudecide.errors import GateValidationError, ParseError
from qudecide.main import (
    HADAMARD,
    exit_code_for,
    load_gateset,
    main,
    parse_gateset,
    phase_gate,
    serialize_gateset,
    verdict_to_document,
)
from qudecide.models import DeciderConfig, VerdictDocument


def _write(path: Path, payload: dict) -> Path:
    path.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
    return path


def _h_and_phase(phi: float) -> dict:
    return {"d": 2, "gates": [{"name": "H", "builtin": "H"}, {"name": "T", "builtin": "phase", "phi": phi}]}


EXAMPLE_ONE = {
    "d": 2,
    "gates": [
        {"name": "U1", "axis_angle": {"phi": 1.0, "k": [0.0, 0.0, 1.0]}},
        {"name": "U2", "axis_angle": {"phi": 1.5707963267948966, "k": [1.0, 0.0, 0.0]}},
    ],
}


def test_parse_builtin_hadamard() -> None:
    s = parse_gateset('{"d":2,"gates":[{"name":"H","builtin":"H"}]}')
    assert s.names == ["H"]
    assert np.allclose(s.gates[0].matrix, HADAMARD)


def test_parse_builtin_phase() -> None:
    s = parse_gateset('{"d":2,"gates":[{"name":"T","builtin":"phase","phi":0.7853981633974483}]}')
    assert np.allclose(s.gates[0].matrix, phase_gate(np.pi / 4))


def test_parse_axis_angle_and_matrix() -> None:
    s = parse_gateset(json.dumps(EXAMPLE_ONE))
    assert np.allclose(s.gates[1].matrix, [[0, 1], [-1, 0]])

    identity = {"d": 3, "gates": [{"name": "I", "matrix": [[[1.0 if i == j else 0.0, 0.0] for j in range(3)]
                                                             for i in range(3)]}]}
    assert np.allclose(parse_gateset(json.dumps(identity)).gates[0].matrix, np.eye(3))


def test_non_unitary_matrix_is_rejected() -> None:
    doc = {"d": 2, "gates": [{"name": "M", "matrix": [[[1.1, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}]}
    with pytest.raises(GateValidationError) as info:
        parse_gateset(json.dumps(doc))
    assert info.value.gate == "M"
    assert info.value.invariant == "unitarity"


def test_project_repairs_near_unitary_matrix() -> None:
    doc = {"d": 2, "gates": [{"name": "M", "matrix": [[[1.05, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.95, 0.0]]]}]}
    s, warnings = load_gateset(json.dumps(doc), project=True)
    assert np.allclose(s.gates[0].matrix, np.eye(2))
    assert len(warnings) == 1 and "projected" in warnings[0]


def test_non_unit_axis_is_rejected() -> None:
    doc = {"d": 2, "gates": [{"name": "A", "axis_angle": {"phi": 1.0, "k": [1.0, 1.0, 0.0]}}]}
    with pytest.raises(GateValidationError) as info:
        parse_gateset(json.dumps(doc))
    assert info.value.invariant == "unit axis"


def test_malformed_json_reports_line() -> None:
    with pytest.raises(ParseError) as info:
        parse_gateset('{\n  "d": 2,\n  "gates": [}\n')
    assert info.value.line == 3


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"d": 2, "gates": [{"name": "H"}]}, "gates[0]"),
        ({"d": 2, "gates": [{"name": "H", "builtin": "H", "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}]},
         "gates[0]"),
        ({"d": 3, "gates": [{"name": "H", "builtin": "H"}]}, "gates[0]"),
        ({"d": 2, "gates": [{"name": "T", "builtin": "phase"}]}, "gates[0].phi"),
        ({"d": 2, "gates": [{"name": "M", "matrix": [[[1, 0]]]}]}, "gates[0].matrix"),
        ({"d": 2, "gates": [{"name": "M", "matrix": [[[1, 0], [0, 0]], [[0, 0]]]}]}, "gates[0].matrix"),
        ({"d": 2, "gates": [{"name": "X", "builtin": "X"}]}, "gates.0.builtin"),
        ({"d": 2, "gates": []}, "gates"),
    ],
)
def test_structural_errors(doc: dict, field: str) -> None:
    with pytest.raises(ParseError) as info:
        parse_gateset(json.dumps(doc))
    assert info.value.field == field


def test_duplicate_names_are_rejected() -> None:
    doc = {"d": 2, "gates": [{"name": "H", "builtin": "H"}, {"name": "H", "builtin": "phase", "phi": 0.3}]}
    with pytest.raises(ParseError):
        parse_gateset(json.dumps(doc))


def test_serialize_round_trip(rng: np.random.Generator) -> None:
    s = parse_gateset(json.dumps(EXAMPLE_ONE))
    again = parse_gateset(serialize_gateset(s))
    assert again.d == s.d
    assert again.names == s.names
    for a, b in zip(s.gates, again.gates):
        assert np.array_equal(a.matrix, b.matrix)


def test_exit_code_depends_only_on_verdict() -> None:
    for verdict, code in [("universal", 0), ("finite_group", 10), ("not_universal_commutant", 11), ("inconclusive", 12)]:
        assert exit_code_for(VerdictDocument(verdict=verdict, kernel_dim=1)) == code


def test_check_universal(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = _write(tmp_path / "gates.json", _h_and_phase(0.6))
    assert main(["check", str(path), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "universal"
    assert doc["terminating_l"] == 1
    assert doc["witness_word"] == ["T"]


def test_check_finite(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = _write(tmp_path / "gates.json", _h_and_phase(np.pi / 4))
    assert main(["check", str(path), "--json"]) == 10
    doc = json.loads(capsys.readouterr().out)
    assert doc["order"] == 48
    assert doc["terminating_l"] == 8


def test_check_example_one(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = _write(tmp_path / "gates.json", EXAMPLE_ONE)
    assert main(["check", str(path), "--json"]) == 11
    assert json.loads(capsys.readouterr().out)["kernel_dim"] >= 2


def test_check_inconclusive(tmp_path: Path) -> None:
    path = _write(tmp_path / "gates.json", _h_and_phase(np.pi / 4))
    assert main(["check", str(path), "--max-word-len", "3"]) == 12


def test_check_human_output_suggests_fix(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = _write(tmp_path / "gates.json", _h_and_phase(np.pi / 4))
    main(["check", str(path)])
    out = capsys.readouterr().out
    assert "verdict: finite_group" in out
    assert "non-exceptional" in out


def test_input_errors_exit_64(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["check", str(tmp_path / "missing.json")]) == 64
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["check", str(bad)]) == 64
    ragged = _write(tmp_path / "ragged.json", {"d": 2, "gates": [{"name": "M", "matrix": [[[1, 0], [0, 0]], [[0, 0]]]}]})
    assert main(["check", str(ragged)]) == 64
    path = _write(tmp_path / "gates.json", _h_and_phase(0.6))
    assert main(["check", str(path), "--tol-eq", "-1"]) == 64
    assert "error:" in capsys.readouterr().err


def test_json_schema_is_stable(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    keys = []
    for phi in (0.6, np.pi / 4, np.pi / 2):
        path = _write(tmp_path / f"gates{phi}.json", _h_and_phase(phi))
        main(["check", str(path), "--json"])
        keys.append(set(json.loads(capsys.readouterr().out)))
    assert keys[0] == keys[1] == keys[2]


def test_json_is_identical_across_thread_counts(
    tmp_path: Path, capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
) -> None:
    outputs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("QUDECIDE_THREADS", threads)
        for payload in (_h_and_phase(np.pi / 4), _h_and_phase(np.pi / 5), EXAMPLE_ONE):
            path = _write(tmp_path / "gates.json", payload)
            main(["check", str(path), "--json"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_invalid_thread_env_is_input_error(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("QUDECIDE_THREADS", "zero")
    path = _write(tmp_path / "gates.json", _h_and_phase(0.6))
    assert main(["check", str(path)]) == 64


@pytest.mark.parametrize("command", ["adjoint", "spectrum", "closure"])
def test_diagnostic_subcommands(tmp_path: Path, capsys: pytest.CaptureFixture[str], command: str) -> None:
    path = _write(tmp_path / "gates.json", _h_and_phase(np.pi / 4))
    assert main([command, str(path), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    if command == "closure":
        assert doc["order"] == 48
    elif command == "adjoint":
        assert np.array(doc["adjoint"]["T"]).shape == (3, 3)
    else:
        assert [g["exceptional"] for g in doc["gates"]] == [True, True]


def test_netcov_subcommand(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = _write(tmp_path / "gates.json", _h_and_phase(0.6))
    args = ["netcov", str(path), "--json", "--word-len", "3", "--samples", "10", "--seed", "5"]
    assert main(args) == 0
    first = json.loads(capsys.readouterr().out)
    main(args)
    assert json.loads(capsys.readouterr().out) == first
    assert first["seed"] == 5


@pytest.mark.parametrize("payload", [_h_and_phase(0.6), _h_and_phase(np.pi / 4), EXAMPLE_ONE])
def test_verdict_document_round_trip(tmp_path: Path, capsys: pytest.CaptureFixture[str], payload: dict) -> None:
    path = _write(tmp_path / "gates.json", payload)
    main(["check", str(path), "--json"])
    doc = json.loads(capsys.readouterr().out)
    again = VerdictDocument.model_validate(doc)
    assert again.model_dump() == doc
    assert VerdictDocument.model_validate_json(again.model_dump_json()) == again


def test_document_models_use_current_pydantic_api() -> None:
    with warnings.catch_warnings():
        warnings.simplefilter("error", DeprecationWarning)
        s, _ = load_gateset(json.dumps(_h_and_phase(0.6)))
        cfg = DeciderConfig().resolved(s.d)
        doc = verdict_to_document(decide(s, cfg), cfg)
        assert doc.model_dump()["config"]["max_word_len"] == 13
