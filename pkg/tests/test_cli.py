import json

import pytest

from monoclt.cli import run


def run_cli(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_pyramid(capsys, tmp_path):
    out = tmp_path / "g.txt"
    code, _, _ = run_cli(capsys, "generate", "--family", "pyramid", "--n", "10", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert text.startswith("# vertices=12 edges=21\n")
    assert len(text.strip().splitlines()) == 22


def test_generate_to_stdout_parses_back(capsys):
    code, out, _ = run_cli(capsys, "generate", "--family", "complete", "--n", "4")
    assert code == 0
    from monoclt.graph import parse_edge_list

    assert parse_edge_list(out).graph.edge_count == 6


def test_census_report(capsys):
    code, out, _ = run_cli(capsys, "census", "--family", "pyramid", "--n", "10")
    assert code == 0
    report = json.loads(out)
    body = report["report"]
    assert body["pyramids"] == {"1": "10", "2": "45", "3": "120", "4": "210"}
    assert body["b_statistic"] == "45"
    assert report["input"]["vertices"] == 12


def test_fourth_moment_report(capsys, tmp_path):
    k4 = tmp_path / "k4.txt"
    run_cli(capsys, "generate", "--family", "complete", "--n", "4", "--out", str(k4))
    code, out, _ = run_cli(capsys, "fourth-moment", "--input", str(k4), "--c", "2")
    assert code == 0
    report = json.loads(out)
    assert report["report"]["excess4"]["num"] == "5"
    assert report["report"]["excess4"]["den"] == "3"


def test_bounds_report(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--family", "pyramid", "--n", "10", "--c", "2")
    assert code == 0
    body = json.loads(out)["report"]
    assert body["T3"]["r1"] == {"num": "211", "den": "3025", "float": pytest.approx(211 / 3025)}
    assert body["T3"]["r2"]["num"] == "9" and body["T3"]["r2"]["den"] == "605"


def test_simulate_deterministic_across_threads(capsys):
    argv = [
        "simulate",
        "--family", "pyramid", "--n", "50",
        "--c", "2", "--reps", "4000", "--seed", "7", "--statistic", "T3",
    ]
    outputs = []
    for threads in ("1", "4", "8"):
        code, out, _ = run_cli(capsys, *argv, "--threads", threads)
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1] == outputs[2]


def test_simulate_reports_embed_config(capsys):
    code, out, _ = run_cli(
        capsys,
        "simulate", "--family", "complete", "--n", "4",
        "--c", "3", "--reps", "100", "--seed", "1",
    )
    assert code == 0
    report = json.loads(out)
    assert report["config"]["seed"] == 1
    assert report["config"]["source"] == {"family": "complete", "n": 4, "c": 3}
    assert report["version"]
    assert report["input"]["digest"]


def test_usage_error_two_sources(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    with pytest.raises(SystemExit) as exc:
        run_cli(
            capsys,
            "census", "--family", "pyramid", "--n", "3",
            "--input", "nope.txt", "--out", str(out_file),
        )
    assert exc.value.code == 2
    assert not out_file.exists()


def test_usage_error_no_source(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli(capsys, "moments", "--c", "2")
    assert exc.value.code == 2


def test_domain_error_exit_code(capsys, tmp_path):
    # triangle-free input: fourth moment is a domain error, exit 1,
    # and no output file is created
    c4 = tmp_path / "c4.txt"
    run_cli(capsys, "generate", "--family", "cycle", "--n", "4", "--out", str(c4))
    out_file = tmp_path / "r.json"
    code, _, err = run_cli(
        capsys, "fourth-moment", "--input", str(c4), "--c", "2", "--out", str(out_file)
    )
    assert code == 1
    assert not out_file.exists()
    error = json.loads(err)
    assert error["error"] == "NoTrianglesError"
    assert error["operation"] == "fourth-moment"


def test_gnp_generation_deterministic(capsys):
    argv = ["generate", "--family", "gnp", "--n", "30", "--p", "0.5", "--graph-seed", "3"]
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2


def test_disjoint_union_parts(capsys):
    code, out, _ = run_cli(
        capsys,
        "generate", "--family", "disjoint_union",
        "--parts", "pyramid:8", "bipyramid_chain:17",
    )
    assert code == 0
    assert out.startswith(f"# vertices={10 + 53} edges={17 + 102}\n")


def test_composite_generation(capsys):
    code, out, _ = run_cli(capsys, "generate", "--family", "composite", "--n", "8", "--c", "2")
    assert code == 0
    assert out.startswith("# vertices=63 edges=119\n")


def test_moments_and_bounds_on_triangle_free_graph(capsys):
    # T3 sections are omitted instead of erroring when no triangle exists
    code, out, _ = run_cli(capsys, "moments", "--family", "cycle", "--n", "4", "--c", "2")
    assert code == 0
    body = json.loads(out)["report"]
    assert "T2" in body and "T3" not in body
    code, out, _ = run_cli(capsys, "bounds", "--family", "cycle", "--n", "4", "--c", "2")
    assert code == 0
    body = json.loads(out)["report"]
    assert "T2" in body and "T3" not in body


def test_simulate_raw_out(capsys, tmp_path):
    import numpy as np

    base = tmp_path / "raw"
    code, out, _ = run_cli(
        capsys,
        "simulate", "--family", "complete", "--n", "4",
        "--c", "2", "--reps", "2000", "--seed", "5", "--statistic", "T3",
        "--raw-out", str(base),
    )
    assert code == 0
    raw = np.frombuffer((tmp_path / "raw.t3.bin").read_bytes(), dtype="<i8")
    assert len(raw) == 2000
    report = json.loads(out)
    dist = {v: n for v, n in report["report"][0]["distribution"]}
    counts = {int(v): int(n) for v, n in zip(*np.unique(raw, return_counts=True))}
    assert counts == dist
    assert not (tmp_path / "raw.t2.bin").exists()
