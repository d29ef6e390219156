import json

import pytest

from bogomolov.cli import run_cli
from bogomolov.verifier import data_dir


def run(capsys, *args):
    code = run_cli(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_b0_json(capsys):
    code, out, _ = run(capsys, "--json", "b0", "g128_1544.pcg")
    assert code == 0
    rec = json.loads(out)
    assert rec["b0_invariants"] == [2, 2] and rec["order"] == 128
    assert rec["group_id"] == "g128_1544"
    assert set(rec) >= {"h2_qz_invariants", "bicyclic_count", "elapsed", "n"}


def test_flags_after_subcommand(capsys):
    code, out, _ = run(capsys, "b0", "g128_227.pcg", "--json", "--threads", "2")
    assert code == 0 and json.loads(out)["b0"] == [2]


def test_b0_text_and_path(capsys):
    code, out, _ = run(capsys, "b0", str(data_dir() / "g128_227.pcg"))
    assert code == 0 and "B0 = [2]" in out


def test_mem_cap_exit_code(capsys):
    code, _, err = run(capsys, "b0", "--mem-cap", "1000", "g128_227.pcg")
    assert code == 2 and "resource limit" in err


def test_info(capsys):
    code, out, _ = run(capsys, "--json", "info", "g128_227.pcg")
    rec = json.loads(out)
    assert code == 0 and rec["center"] == 8 and rec["order"] == 128 and rec["exponent"] == 8


def test_h2(capsys):
    code, out, _ = run(capsys, "--json", "h2", "g128_227.pcg")
    assert code == 0 and isinstance(json.loads(out)["h2_qz_invariants"], list)


def test_iso_exit_codes(capsys):
    code, out, _ = run(capsys, "--json", "iso", "g128_227.pcg", "g128_227.pcg")
    assert code == 0 and json.loads(out)["verdict"] == "isoclinic"
    code, _, _ = run(capsys, "iso", "g128_227.pcg", "g128_1345.pcg")
    assert code == 1
    code, out, _ = run(capsys, "iso", "--budget", "2", "g128_242.pcg", "g128_1924.pcg")
    assert code == 2 and "undecided" in out


def test_verify_pass_and_fail(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "case1.act", "case11.act", "--threads", "2")
    assert code == 0 and out.count("PASS") >= 2
    bad = tmp_path / "bad.act"
    text = (data_dir() / "case1.act").read_text().replace("det=4", "det=-4")
    bad.write_text(text.replace("group g128_227.pcg", f"group {data_dir() / 'g128_227.pcg'}"))
    code, out, _ = run(capsys, "--json", "verify", str(bad))
    assert code == 1
    rec = json.loads(out)
    assert rec["passed"] is False
    assert any(s["verdict"] == "fail" and s["kind"] == "monomial-fixed-field" for s in rec["steps"])


def test_verify_json_steps(capsys):
    code, out, _ = run(capsys, "--json", "verify", "case9.act")
    rec = json.loads(out)
    assert code == 0 and rec["passed"] and rec["steps"][-1]["details"]["target"] == "L2.act"


def test_det(capsys):
    code, out, _ = run(capsys, "det", "case3.act", "--step", "6")
    assert code == 0 and out.strip() == "-8"
    code, _, _ = run(capsys, "det", "case3.act", "--step", "1")
    assert code == 2


def test_missing_files(capsys):
    assert run(capsys, "b0", "nope.pcg")[0] == 2
    assert run(capsys, "verify", "nope.act")[0] == 2


def test_usage_error(capsys):
    assert run(capsys, "b0")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_data_env(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("BOGOMOLOV_DATA", str(tmp_path))
    assert run(capsys, "b0", "g128_227.pcg")[0] == 2
    (tmp_path / "c2.pcg").write_text("pcgroup 1\norders 2\n")
    code, out, _ = run(capsys, "--json", "b0", "c2.pcg")
    assert code == 0 and json.loads(out)["b0"] == []


@pytest.mark.parametrize("threads", ["1", "4"])
def test_results_independent_of_threads(capsys, threads):
    code, out, _ = run(capsys, "--json", "--threads", threads, "verify", "case1.act", "case2.act")
    recs = json.loads(out)
    assert code == 0 and [r["passed"] for r in recs] == [True, True]
