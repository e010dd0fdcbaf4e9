from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from retwist.cli import InputError, main, parse_rmatrix_file, rmatrix_from_json, rmatrix_to_json
from retwist.corpus import jordanian_r
from retwist.report import CHECK_ORDER, SuiteOptions, emit, parse_structured, run_suite
from retwist.rmatrix import standard_r
from retwist.scalars import encode_rational, q
from retwist.tensor import TensorOperator

GOLDEN = Path(__file__).parent / "golden"


def run(capsysbinary, *argv: str) -> tuple[int, bytes, str]:
    code = main(list(argv))
    out = capsysbinary.readouterr()
    return code, out.out, out.err.decode()


def _write(tmp_path: Path, data, name: str = "r.json") -> Path:
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return p


@pytest.mark.parametrize(
    "golden,argv",
    [
        ("hilbert_sl2.jsonl", ["hilbert", "--standard", "sl2", "--max-degree", "4"]),
        ("present_frt_sl2.jsonl", ["present", "--type", "frt", "--standard", "sl2"]),
    ],
)
def test_structured_output_matches_golden(capsysbinary, golden, argv):
    code, out, _ = run(capsysbinary, *argv, "--format", "structured")
    assert code == 0
    assert out == (GOLDEN / golden).read_bytes()


@pytest.mark.parametrize("golden", ["hilbert_sl2.jsonl", "present_frt_sl2.jsonl"])
def test_golden_round_trips_through_schema(golden):
    blob = (GOLDEN / golden).read_bytes()
    report = parse_structured(blob)
    assert emit(report, "structured") == blob
    lines = [json.loads(x) for x in blob.decode().splitlines()]
    assert [x["record"] for x in lines] == ["header", "check", "summary"]
    assert set(lines[0]["conventions"]) == {"h_scaling", "monomial_order", "r_matrix", "indices", "coactions"}


def test_golden_hilbert_values():
    check = json.loads((GOLDEN / "hilbert_sl2.jsonl").read_text().splitlines()[1])
    assert check["data"]["frt"] == check["data"]["re"] == [1, 4, 10, 20, 35]


def test_structured_is_deterministic():
    spec = standard_r(2)
    first = emit(run_suite(spec, CHECK_ORDER), "structured")
    second = emit(run_suite(standard_r(2), CHECK_ORDER), "structured")
    assert first == second


def test_parse_structured_rejects_malformed():
    with pytest.raises(ValueError):
        parse_structured("")
    blob = (GOLDEN / "hilbert_sl2.jsonl").read_text()
    with pytest.raises(ValueError):
        parse_structured(blob.replace('"status":"pass"}', '"status":"fail"}', 1))
    with pytest.raises(ValueError):
        parse_structured(blob.replace('"status":"pass"', '"status":"maybe"', 1))


def test_full_suite_sl2_passes(capsysbinary):
    code, out, _ = run(capsysbinary, "all", "--standard", "sl2")
    assert code == 0
    text = out.decode()
    for name in CHECK_ORDER:
        assert f"[PASS] {name}:" in text
    assert "a·b - q b·a = 0" in text
    assert "{a, d} = 2bc" in text
    assert text.rstrip().endswith("status: pass")


def test_full_suite_sl3_skips_only_large_hilbert(capsysbinary):
    code, out, _ = run(capsysbinary, "all", "--standard", "sl3", "--format", "structured")
    assert code == 0
    report = parse_structured(out)
    status = {c.name: c.status for c in report.checks}
    assert all(status[n] == "pass" for n in CHECK_ORDER)
    code, out, _ = run(capsysbinary, "hilbert", "--standard", "sl3", "--max-degree", "9", "--format", "structured")
    assert code == 0
    assert parse_structured(out).checks[0].status == "skipped"


def test_empty_selection_passes():
    report = run_suite(standard_r(2), ())
    assert report.checks == () and report.status == "pass" and report.exit_code == 0
    with pytest.raises(ValueError):
        run_suite(standard_r(2), ("nonsense",))


def test_failing_check_sets_exit_code(tmp_path, capsysbinary):
    # Diagonal R is a Yang-Baxter solution without Hecke relation or flat algebras.
    rows = {"dim": 2, "entries": [
        {"row": [1, 1], "col": [1, 1], "coeff": encode_rational(q)},
        {"row": [1, 2], "col": [1, 2], "coeff": 1},
        {"row": [2, 1], "col": [2, 1], "coeff": 1},
        {"row": [2, 2], "col": [2, 2], "coeff": encode_rational(q * q)},
    ]}
    path = _write(tmp_path, rows)
    code, out, _ = run(capsysbinary, "verify-ybe", "--rmatrix", str(path))
    assert code == 1
    assert "[PASS] ybe" in out.decode() and "[FAIL] hecke" in out.decode()
    code, _, _ = run(capsysbinary, "hilbert", "--rmatrix", str(path), "--max-degree", "3")
    assert code == 1


def test_file_round_trip_equals_builtin(tmp_path):
    for spec in (standard_r(2), standard_r(3), jordanian_r()):
        path = _write(tmp_path, rmatrix_to_json(spec.R))
        assert parse_rmatrix_file(path) == spec


def test_file_with_integer_and_rational_coefficients():
    data = {"dim": 2, "entries": [{"row": [i, j], "col": [i, j], "coeff": 1} for i in (1, 2) for j in (1, 2)]}
    assert rmatrix_from_json(data) == TensorOperator.identity(2, 2)


def test_duplicate_entry_exits_2(tmp_path, capsysbinary):
    entry = {"row": [1, 1], "col": [1, 1], "coeff": 1}
    path = _write(tmp_path, {"dim": 2, "entries": [entry, entry]})
    code, _, err = run(capsysbinary, "verify-ybe", "--rmatrix", str(path))
    assert code == 2
    assert "entries[1]" in err and "duplicate" in err


def test_non_ybe_file_exits_1_unless_unchecked(tmp_path, capsysbinary):
    R = standard_r(2).R + TensorOperator(2, 2, {((0, 0), (0, 1)): 1})
    path = _write(tmp_path, rmatrix_to_json(R))
    code, _, err = run(capsysbinary, "verify-ybe", "--rmatrix", str(path))
    assert code == 1
    assert "Yang-Baxter" in err and "first residual at row (" in err
    code, out, _ = run(capsysbinary, "verify-ybe", "--rmatrix", str(path), "--unchecked")
    assert code == 1
    assert "[FAIL] ybe" in out.decode()


@pytest.mark.parametrize(
    "content,fragment",
    [
        ('{"dim": 2, "entries": [}', "line 1, column"),
        ({"dim": 0, "entries": []}, "dim"),
        ({"dim": 2}, "entries"),
        ({"dim": 2, "entries": [], "extra": 1}, "unknown fields"),
        ({"dim": 2, "entries": [{"row": [1, 3], "col": [1, 1], "coeff": 1}]}, "entries[0].row"),
        ({"dim": 2, "entries": [{"row": [1, 1], "col": [1, 1]}]}, "entries[0]"),
        ({"dim": 2, "entries": [{"row": [1, 1], "col": [1, 1], "coeff": "q"}]}, "entries[0].coeff"),
        ({"dim": 2, "entries": [{"row": [1, 1], "col": [1, 1], "coeff": True}]}, "boolean"),
        ([1, 2], "top level"),
    ],
)
def test_malformed_files_exit_2(tmp_path, capsysbinary, content, fragment):
    path = _write(tmp_path, content)
    code, _, err = run(capsysbinary, "verify-ybe", "--rmatrix", str(path))
    assert code == 2
    assert fragment in err


def test_missing_file_exits_2(tmp_path, capsysbinary):
    code, _, err = run(capsysbinary, "verify-ybe", "--rmatrix", str(tmp_path / "absent.json"))
    assert code == 2 and "absent.json" in err
    with pytest.raises(InputError):
        parse_rmatrix_file(tmp_path / "absent.json")


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-ybe", "--standard", "sl1"],
        ["verify-ybe", "--standard", "gl2"],
        ["verify-ybe"],
        ["present", "--standard", "sl2"],
        ["verify-ybe", "--standard", "sl2", "--rmatrix", "x.json"],
    ],
)
def test_bad_arguments_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_bad_numeric_options_exit_2(capsysbinary):
    assert run(capsysbinary, "hilbert", "--standard", "sl2", "--max-degree", "-1")[0] == 2
    assert run(capsysbinary, "semiclassical", "--standard", "sl2", "--h-order", "0")[0] == 2


def test_h_order_does_not_change_first_order_result(capsysbinary):
    a = run(capsysbinary, "semiclassical", "--standard", "sl2", "--format", "structured")
    b = run(capsysbinary, "semiclassical", "--standard", "sl2", "--h-order", "3", "--format", "structured")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]


def test_suite_options_default_degrees():
    assert SuiteOptions().degree_for(2) == 4
    assert SuiteOptions().degree_for(3) == 2
    assert SuiteOptions(max_degree=1).degree_for(3) == 1


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "retwist.cli", "qmap", "--standard", "sl2", "--format", "structured"],
        capture_output=True,
        check=False,
    )
    assert proc.returncode == 0
    assert parse_structured(proc.stdout).checks[0].name == "qmap"
