import csv
import io
import json
import math
import subprocess
import sys

import pytest

from hwbounds.cli import SWEEP_COLUMNS, fmt, main
from hwbounds.network import diamond_network


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def parse_text(text):
    rows = {}
    for line in text.splitlines():
        key, _, value = line.partition("  ")
        rows[key.strip()] = value.strip()
    return rows


@pytest.fixture
def diamond_file(tmp_path):
    path = tmp_path / "diamond.json"
    path.write_text(json.dumps(diamond_network([-1] * 5, 4).to_json()))
    return str(path)


def test_fmt():
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(math.log2(1.5)) == "0.5849625007"
    assert fmt(-0.0) == "0"
    assert fmt(math.inf) == "inf"


def test_bounds_eta_minus_one():
    code, out = run("bounds", "--eta", "-1", "--d", "4")
    assert code == 0
    rows = parse_text(out)
    assert rows["k_bound"] == "0.5849625007"
    assert rows["k_source"] == "Esq_star"
    assert rows["E_R2"] == fmt(0.5 * math.log2(8 / 3))


def test_bounds_separable_all_zero():
    code, out = run("bounds", "--eta", "0.5", "--d", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert all(data[c] == 0 for c in SWEEP_COLUMNS[2:] if c != "k_source")


def test_bounds_out_of_range(capsys):
    code, _ = run("bounds", "--eta", "-2", "--d", "4")
    assert code == 2
    assert "eta out of range" in capsys.readouterr().err


def test_bad_arguments_exit_2():
    assert run("bounds", "--eta", "x", "--d", "4")[0] == 2
    assert run("nosuchcommand")[0] == 2


def test_sweep_csv_header_and_ordering():
    code, out = run("sweep", "--d", "5", "--eta-start", "-1", "--eta-end", "0", "--eta-step", "0.05")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "eta,d,E_R,E_R2,E_P_inf,Esq_tilde,Esq_star,k_bound,k_source,q2_bound"
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 21
    for r in rows:
        assert float(r["E_P_inf"]) <= float(r["E_R2"]) <= float(r["E_R"])


def test_sweep_multi_d_columns():
    code, out = run("sweep", "--d", "3", "4", "5", "6", "7", "8", "--eta-step", "0.1", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    by_eta = {}
    for r in rows:
        by_eta.setdefault(r["eta"], []).append(r)
    for eta, group in by_eta.items():
        assert len({r["E_R"] for r in group}) == 1
        er2 = [r["E_R2"] for r in sorted(group, key=lambda r: r["d"]) if eta < -2 / r["d"]]
        assert all(b < a for a, b in zip(er2, er2[1:]))


def test_sweep_single_point_equals_bounds():
    _, sweep = run("sweep", "--d", "4", "--eta-start", "-0.7", "--eta-end", "-0.65", "--eta-step", "0.1")
    _, bounds = run("bounds", "--eta", "-0.7", "--d", "4", "--format", "csv")
    assert sweep == bounds


def test_sweep_measure_subset_and_errors():
    code, out = run("sweep", "--d", "3", "--eta-step", "0.5", "--measures", "E_R", "q2_bound")
    assert code == 0
    assert out.splitlines()[0] == "eta,d,E_R,q2_bound"
    assert run("sweep", "--d", "3", "--measures", "nope")[0] == 2
    assert run("sweep", "--d", "3", "--eta-step", "0")[0] == 2
    assert run("sweep", "--d", "3", "--eta-start", "-3")[0] == 2


def test_chain():
    code, out = run("chain", "--etas", "-1", "-0.5", "-0.8", "--d", "3")
    assert code == 0
    rows = parse_text(out)
    assert rows["bottleneck_index"] == "1"
    assert rows["k_bound"] == "0.1887218755"
    code, out = run("chain", "--etas", "-1", "0.2", "--d", "3")
    assert parse_text(out)["k_bound"] == "0"


def test_chain_single_edge_equals_bounds():
    _, chain = run("chain", "--etas", "-0.9", "--d", "5", "--format", "json")
    _, bounds = run("bounds", "--eta", "-0.9", "--d", "5", "--format", "json")
    c, b = json.loads(chain), json.loads(bounds)
    assert (c["k_bound"], c["q2_bound"]) == (b["k_bound"], b["q2_bound"])


def test_network_multi_q2(diamond_file):
    code, out = run("network", diamond_file, "--routing", "multi", "--target", "q2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["bound"] == pytest.approx(2 * math.log2(1.5), abs=1e-9)
    assert data["partition_A"] == ["A"]
    assert data["certificate_agrees"] is True


def test_network_single_er2(diamond_file):
    code, out = run("network", diamond_file, "--routing", "single", "--measure", "E_R2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["bound"] == pytest.approx(0.5 * math.log2(8 / 3), abs=1e-9)
    assert "note" in data


def test_network_unknown_node(tmp_path, capsys):
    doc = {"nodes": ["A", "B"], "edges": [{"u": "A", "v": "Q", "eta": -1, "d": 3}], "terminals": {"A": "A", "B": "B"}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _ = run("network", str(path))
    assert code == 2
    err = capsys.readouterr().err
    assert "edges[0]" in err and "Q" in err


def test_network_missing_file(tmp_path):
    assert run("network", str(tmp_path / "absent.json"))[0] == 2


def test_network_disconnected(tmp_path):
    doc = {"nodes": ["A", "r", "B"], "edges": [{"u": "A", "v": "r", "eta": -1, "d": 3}], "terminals": {"A": "A", "B": "B"}}
    path = tmp_path / "split.json"
    path.write_text(json.dumps(doc))
    code, out = run("network", str(path), "--format", "json")
    assert code == 3
    assert json.loads(out)["bound"] == 0


def test_finite():
    code, out = run("finite", "--epsilon", "0.01", "--d", "4", "--n", "100", "--eta", "-1")
    assert code == 0
    rate = float(parse_text(out)["rate_bound"])
    assert math.log2(1.5) < rate <= 1.03 * math.log2(1.5)


def test_finite_eps_zero_is_ncopy_rate():
    code, out = run("finite", "--epsilon", "0", "--d", "3", "--n", "2", "--eta", "-1")
    rows = parse_text(out)
    assert rows["rate_bound"] == rows["rate_eps0"] == fmt(0.5 * math.log2(3))


def test_finite_denominator_contract():
    assert run("finite", "--epsilon", "1.0", "--d", "4", "--n", "10", "--eta", "-1")[0] == 2


def test_output_deterministic():
    args = ("sweep", "--d", "4", "--eta-step", "0.1")
    assert run(*args) == run(*args)


def test_selftest():
    code, out = run("selftest")
    assert code == 0
    assert out.count("PASS") == 4


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hwbounds", "bounds", "--eta", "-1", "--d", "3", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["E_R2"] == pytest.approx(0.5 * math.log2(3), abs=1e-9)
