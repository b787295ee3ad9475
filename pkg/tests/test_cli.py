import json
import subprocess
import sys

import pytest

from golden import E7_ORDER
from qiblocks.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_quasi_isolated_g2(capsys):
    code, out, _ = run(capsys, "quasi-isolated", "G2")
    assert code == 0
    rows = [ln for ln in out.splitlines() if ln.strip()[:1].isdigit()]
    assert len(rows) == 2


def test_quasi_isolated_f4_structured(capsys):
    code, out, _ = run(capsys, "quasi-isolated", "F4", "--format", "structured")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "qiblocks-cli/1"
    rows = data["groups"]["F4"]
    assert len(rows) == 4 and all(r["A_s"] == 1 for r in rows)


def test_unknown_group_is_usage_error(capsys):
    code, _, err = run(capsys, "quasi-isolated", "X9")
    assert code == 2 and "unknown" in err


def test_e8_needs_opt_in(capsys):
    code, _, err = run(capsys, "quasi-isolated", "E8")
    assert code == 2 and "--allow-e8" in err and "budget" in err
    code, out, _ = run(capsys, "quasi-isolated", "E8", "--allow-e8")
    assert code == 0 and "A4+A4" in out


def test_order_e7(capsys):
    code, out, _ = run(capsys, "order", "E7", "--ell", "3", "--e", "1")
    assert code == 0
    assert E7_ORDER in out and "3^4.|Φ1|_3^7" in out
    code, out, _ = run(capsys, "order", "A1")
    assert "q.Φ1.Φ2" in out


def test_ell_part_numeric(capsys):
    code, out, _ = run(capsys, "ell-part", "E7", "--ell", "3", "--q", "4", "--q", "7", "--q", "13")
    assert code == 0 and out.count("symbolic 177147, exact 177147") == 3


def test_ell_divides_q_is_usage_error(capsys):
    code, _, err = run(capsys, "ell-part", "E7", "--ell", "3", "--q", "9")
    assert code == 2


def test_series_size(capsys):
    assert run(capsys, "series-size", "A4+A4")[1].strip().endswith("49")
    code, _, err = run(capsys, "series-size", "D4", "--components", "3")
    assert code == 2 and "convention" in err


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "F4", "--ell", "2")
    assert code == 0 and "|E(B4)|" in out and "|E(C3+A1)|" in out


def test_check_shipped(capsys):
    code, out, _ = run(capsys, "check")
    assert code == 0 and "failures: 0  undecided: 2" in out
    code, out, _ = run(capsys, "check", "--format", "structured")
    assert json.loads(out)["undecided"] == ["E8:3u", "E8:8u"]


def test_check_empty_and_corrupt(tmp_path, capsys):
    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert run(capsys, "check", str(empty))[0] == 0
    bad = tmp_path / "bad.yaml"
    bad.write_text("blocks:\n  - {block_id: 'x'\n", encoding="utf-8")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "line" in err


def test_check_failure_exit(tmp_path, capsys):
    path = tmp_path / "fail.yaml"
    path.write_text(
        "blocks:\n  - {block_id: 'E8:1', group: E8, ell: 2, e: 1, levi_center_shape: 'Φ1^2', "
        "c_terms: [{series: 'E8', count: 6}], expect: holds}\n",
        encoding="utf-8",
    )
    assert run(capsys, "check", str(path))[0] == 1


def test_defect_table(capsys):
    code, out, _ = run(capsys, "defect-table-e7", "--q", "7")
    assert code == 0 and "3^4.|Φ1|_3^6" in out
    assert run(capsys, "defect-table-e7", "--q", "5")[0] == 2


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["order"])
    assert exc.value.code == 2


def test_output_is_deterministic(capsys):
    first = run(capsys, "check", "--format", "structured")[1]
    second = run(capsys, "check", "--format", "structured")[1]
    assert first == second


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qiblocks.cli", "order", "A1"], capture_output=True, text=True, encoding="utf-8")
    assert proc.returncode == 0 and "q.Φ1.Φ2" in proc.stdout
