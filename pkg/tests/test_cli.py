import json

import pytest

import spanlab as sl
from spanlab.cli import main


def run_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_count_exact_k4(capsys):
    code, report = run_json(
        capsys, "count-exact", "--gen", "complete:4", "--seed", "1"
    )
    assert code == 0
    results = report["results"]
    assert results["spanningTrees"] == "16"
    assert results["kostochkaUpperBoundHolds"] is True
    assert results["degreeProduct"] == "81"
    assert report["config"]["seed"] == 1


def test_count_exact_from_file(tmp_path, capsys):
    path = tmp_path / "c5.txt"
    sl.write_graph_file(sl.cycle_graph(5), path)
    code, report = run_json(capsys, "count-exact", "--graph", str(path), "--seed", "2")
    assert code == 0
    assert report["results"]["spanningTrees"] == "5"


def test_enumerate_triangle(capsys):
    code, report = run_json(
        capsys, "enumerate", "--gen", "complete:3", "--cap", "10", "--seed", "3"
    )
    assert code == 0
    assert report["results"]["count"] == 3
    assert len(report["results"]["trees"]) == 3


def test_enumerate_cap_exceeded_is_domain_error(capsys):
    code = main(["enumerate", "--gen", "complete:4", "--cap", "10", "--seed", "4"])
    captured = capsys.readouterr()
    assert code == 1
    err = json.loads(captured.err)
    assert err["error"] == "CapExceeded"


def test_sample_reject_reports_attempts(capsys):
    code, report = run_json(
        capsys,
        "sample", "--gen", "bipartite:2,3", "--sampler", "reject",
        "--trials", "50", "--seed", "5",
    )
    assert code == 0
    results = report["results"]
    assert len(results["leafCounts"]) == 50
    assert len(results["attempts"]) == 50
    assert results["acceptanceRate"] > 0


def test_sample_csv_rows(capsys):
    code = main(
        ["sample", "--gen", "complete:4", "--trials", "5", "--seed", "6",
         "--format", "csv"]
    )
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "trial,leaves"
    assert len(lines) == 6


def test_reconfigure_reports_no_violations(capsys):
    code, report = run_json(
        capsys,
        "reconfigure", "--gen", "bipartite:3,30", "--trials", "20", "--seed", "7",
    )
    assert code == 0
    results = report["results"]
    assert results["violations"] == 0
    assert len(results["perTrial"]) == 20
    row = results["perTrial"][0]
    assert set(row) >= {"branch", "selectionSize", "minParents", "medianParents", "violations"}


def test_reconfigure_dump_selections(capsys):
    code, report = run_json(
        capsys,
        "reconfigure", "--gen", "complete:6", "--trials", "3", "--seed", "8",
        "--dump-selections",
    )
    assert code == 0
    assert all("selection" in row for row in report["results"]["perTrial"])


def test_count_noniso_exact(capsys):
    code, report = run_json(
        capsys, "count-noniso", "--gen", "complete:4", "--mode", "exact",
        "--budget", "100", "--seed", "9",
    )
    assert code == 0
    assert report["results"]["distinct"] == 2
    assert report["results"]["spanningTrees"] == "16"


def test_experiment_uniformity(capsys):
    code, report = run_json(
        capsys, "experiment", "uniformity", "--gen", "complete:4",
        "--trials", "2000", "--seed", "10",
    )
    assert code == 0
    results = report["results"]
    assert results["support"] == 16
    assert results["rejectedAt1e3"] == []


def test_experiment_pipeline_schema(capsys):
    code, report = run_json(
        capsys, "experiment", "pipeline", "--gen", "bipartite:3,30",
        "--trials", "300", "--seed", "11",
    )
    assert code == 0
    results = report["results"]
    assert {"seed", "trials", "estimates"} <= set(results)
    assert {"collision", "maxMassBound", "ci95"} <= set(results["estimates"])
    assert len(results["estimates"]["ci95"]) == 2


def test_experiment_pipeline_digests_flag(capsys):
    code, report = run_json(
        capsys, "experiment", "pipeline", "--gen", "complete:5",
        "--trials", "10", "--seed", "12", "--per-trial",
    )
    assert code == 0
    digests = report["results"]["perTrialDigests"]
    assert len(digests) == 10
    assert {"histogram", "code", "branch"} <= set(digests[0])


def test_experiment_leaves(capsys):
    code, report = run_json(
        capsys, "experiment", "leaves", "--gen", "complete:8",
        "--trials", "100", "--seed", "13",
    )
    assert code == 0
    results = report["results"]
    assert results["expectedAtLeastQuarterN"] is True
    assert len(results["leafProbabilities"]) == 8


def test_experiment_lemma35(capsys):
    code, report = run_json(
        capsys, "experiment", "lemma35", "--gen", "bipartite:3,40",
        "--trials", "500", "--seed", "14",
    )
    assert code == 0
    results = report["results"]
    assert results["instance"]["aSize"] >= 1
    assert 0 <= results["estimates"]["collision"] <= 1


def test_experiment_conjecture_small(capsys):
    code, report = run_json(
        capsys, "experiment", "conjecture", "--d", "3", "--sizes", "30,60",
        "--trials", "200", "--seed", "15",
    )
    assert code == 0
    results = report["results"]
    assert results["exploratory"] is True
    assert len(results["rows"]) == 2
    assert "baseline" in results and "codeSlope" in results


def test_payload_determinism(capsys):
    argv = ["experiment", "pipeline", "--gen", "bipartite:3,20",
            "--trials", "200", "--seed", "42"]
    code1, rep1 = run_json(capsys, *argv)
    code2, rep2 = run_json(capsys, *argv)
    code3, rep3 = run_json(capsys, *argv, "--jobs", "2")
    assert code1 == code2 == code3 == 0
    assert rep1["results"] == rep2["results"] == rep3["results"]


def test_auto_seed_is_echoed(capsys):
    code, report = run_json(capsys, "count-exact", "--gen", "complete:3")
    assert code == 0
    assert isinstance(report["config"]["seed"], int)


def test_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["count-exact", "--gen", "complete:4", "--seed", "1",
                 "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["results"]["spanningTrees"] == "16"


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--gen", "regular:3,5", "--seed", "1"])  # parity
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["count-exact"])  # no graph at all
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["count-exact", "--gen", "complete:4", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["count-exact", "--gen", "complete:4", "--graph", "x.txt"])
    assert exc.value.code == 2


def test_missing_file_is_domain_error(capsys):
    code = main(["count-exact", "--graph", "/nonexistent/g.txt"])
    assert code == 1
