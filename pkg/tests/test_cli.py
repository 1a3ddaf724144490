import json

from diagsync.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_scheme_subcommand(capsys):
    code, out = run_cli(capsys, "scheme", "--q", "13")
    assert code == 0
    data = json.loads(out)
    assert data["relations"] == ["1", "2", "3", "6", "7", "13"]
    assert data["sizes"] == [1, 91, 182, 182, 468, 168]
    assert sorted(map(int, data["multiplicities"])) == [1, 98, 169, 196, 196, 432]


def test_scheme_unfused_diagnostic(capsys):
    code, out = run_cli(capsys, "scheme", "--q", "13", "--unfused")
    data = json.loads(out)
    assert code == 0 and data["Q"] is None and "irrational" in data["diagnostic"]


def test_feasibility_subcommand(capsys):
    code, out = run_cli(capsys, "feasibility", "--q", "13", "--classes", "3,7")
    assert code == 0
    data = json.loads(out)
    fam = data["families"][0]
    assert fam["clique"]["size"] == 42 and fam["coclique"]["size"] == 26
    assert fam["coclique"]["entry_range"] == ["0", "13"]


def test_feasibility_table(capsys):
    code, out = run_cli(capsys, "feasibility", "--q", "13")
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) == 8
    assert sum(1 for r in data["rows"] if r["novel"]) == 6


def test_search_subcommand(capsys):
    code, out = run_cli(capsys, "search", "--q", "13", "--classes", "13",
                        "--mode", "clique", "--budget-secs", "60")
    assert code == 0
    data = json.loads(out)
    assert data["size"] == 13 and data["exhaustive"]
    assert "digest" in data


def test_search_decide_requires_size(capsys):
    code = main(["search", "--q", "13", "--classes", "13", "--mode", "decide"])
    assert code == 1


def test_graph_subcommand(capsys, tmp_path):
    path = tmp_path / "g.dimacs"
    code, out = run_cli(capsys, "graph", "--q", "13", "--classes", "13",
                        "--dimacs", str(path))
    assert code == 0
    data = json.loads(out)
    assert data["degree"] == 168 and data["complement"] == ["2", "3", "6", "7"]
    assert path.read_bytes().splitlines()[1] == b"p edge 1092 91728"


def test_witness_subcommand(capsys):
    code, out = run_cli(capsys, "witness", "--q", "7", "--kind", "factorisation")
    data = json.loads(out)
    assert code == 0 and data["verified"]
    code, out = run_cli(capsys, "witness", "--q", "13", "--kind", "spreading")
    data = json.loads(out)
    assert code == 0 and data["lambda"] == 78


def test_certify_lp_export(capsys, tmp_path):
    path = tmp_path / "model.lp"
    code, out = run_cli(capsys, "certify", "--q", "13", "--classes", "13",
                        "--base-clique", "sylow", "--sense", "atmost",
                        "--export-lp", str(path))
    assert code == 0
    text = path.read_text()
    assert text.count("<= 1") == 1176
    assert json.loads(out)["rows"] == 1176


def test_analyze_and_verify_roundtrip(capsys, tmp_path):
    report_path = tmp_path / "report9.json"
    code = main(["analyze", "--q", "9", "--out", str(report_path)])
    assert code == 0
    capsys.readouterr()
    code, out = run_cli(capsys, "verify", str(report_path))
    assert code == 0 and json.loads(out)["ok"]
    # tamper with the stored report: replay must reject it
    report = json.loads(report_path.read_text())
    report["witnesses"][0]["elements"][0] ^= 1
    report_path.write_text(json.dumps(report))
    code, out = run_cli(capsys, "verify", str(report_path))
    assert code == 1 and not json.loads(out)["ok"]
