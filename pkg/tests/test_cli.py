import csv

import pytest

from fqwalk.cli import EXIT_INPUT, EXIT_OK, run


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _csv_sections(out):
    """Parse blank-line separated CSV sections; every row must match its header."""
    sections = []
    for chunk in out.strip("\n").split("\n\n"):
        rows = list(csv.reader(chunk.splitlines()))
        assert rows and all(len(r) == len(rows[0]) for r in rows), chunk
        sections.append(rows)
    return sections


def test_faces(capsys):
    code, out, _ = _run(capsys, "faces", "--graph", "tetrahedron")
    assert code == EXIT_OK
    assert "faces: 4\n" in out
    assert "genus: 0\n" in out
    assert "|V|=4 |A|=12 |boundary|=3" in out


def test_single_face_embedding(capsys):
    code, out, _ = _run(capsys, "faces", "--graph", "k33-18")
    assert code == EXIT_OK
    assert "faces: 1\n" in out
    assert "genus: 2\n" in out


def test_genus(capsys):
    code, out, _ = _run(capsys, "genus", "--graph", "k33-6-6-6")
    assert code == EXIT_OK
    assert out.startswith("genus: 1\nb1: 4\nfaces: 3\n")


def test_blowup(capsys):
    code, out, _ = _run(capsys, "blowup", "--graph", "tetrahedron")
    assert code == EXIT_OK
    assert "vertices: 15\n" in out
    assert "degree audit: ok\n" in out


@pytest.mark.parametrize(
    "graph, n, verdict",
    [("k33-10-4-4", 4, "[10,4,4]"), ("k33-6-6-6", 2, "[6,6,6]"), ("k33-18", 6, "[18]")],
)
def test_detect(capsys, graph, n, verdict):
    code, out, _ = _run(
        capsys, "detect", "--graph", graph, "--coin", "d=0.5,omega=1", "--source", "1"
    )
    assert code == EXIT_OK
    assert f"N = {n}\n" in out
    assert f"embedding: {verdict}\n" in out


def test_scatter_with_detection(capsys):
    code, out, _ = _run(
        capsys, "scatter", "--graph", "k33-6-6-6", "--coin", "d=0.5", "--detect", "1"
    )
    assert code == EXIT_OK
    assert out.count("block f") == 3
    assert "N = 2\n" in out
    assert "vanishing outflow on the source's face at: 1\n" in out


def test_simulate_csv(capsys):
    code, out, err = _run(
        capsys,
        "simulate",
        "--graph",
        "tetrahedron",
        "--coin",
        "d=0.5,omega=1",
        "--format",
        "csv",
        "--tol",
        "1e-10",
    )
    assert code == EXIT_OK
    history, amplitudes = _csv_sections(out)
    assert history[0] == ["step", "sup_diff", "outflow_norm"]
    assert history[1][0] == "1"
    assert amplitudes[0] == ["arc_kind", "arc_index", "re", "im"]
    assert len(amplitudes) == 1 + 27
    assert "converged: true\n" in err
    assert "converged" not in out


@pytest.mark.parametrize("method", ["gram", "project", "solve", "evolve"])
def test_stationary_methods(capsys, method):
    code, out, _ = _run(
        capsys,
        "stationary",
        "--graph",
        "tetrahedron",
        "--coin",
        "d=0.5,omega=1",
        "--method",
        method,
    )
    assert code == EXIT_OK
    assert "luminous faces: f0 f1 f2 f3\n" in out
    assert "0.0833333333333" in out
    residual = next(l for l in out.splitlines() if l.startswith("agreement residual"))
    assert float(residual.split(":")[1]) < 1e-6


def test_oracle(capsys):
    code, out, _ = _run(
        capsys, "oracle", "--graph", "tetrahedron", "--coin", "d=0.5", "--list"
    )
    assert code == EXIT_OK
    assert "iota_1: 200\n" in out
    assert "0.175 -0.025 -0.025\n" in out
    assert out.count("H2 members") == 6
    discrepancy = next(l for l in out.splitlines() if l.startswith("max discrepancy"))
    assert float(discrepancy.split(":")[1]) < 1e-12


def test_output_is_reproducible(capsys):
    argv = ["stationary", "--graph", "k33-10-4-4", "--coin", "random:3", "--inflow", "unit:2"]
    first = _run(capsys, *argv)
    second = _run(capsys, *argv)
    assert first[:2] == second[:2]
    assert first[0] == EXIT_OK


def test_output_file(capsys, tmp_path):
    target = tmp_path / "faces.txt"
    code, out, _ = _run(capsys, "faces", "--graph", "tetrahedron", "-o", str(target))
    assert code == EXIT_OK
    assert out == f"wrote {target}\n"
    assert "genus: 0" in target.read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["faces", "--graph", "no-such-graph"], "neither a built-in"),
        (["scatter", "--graph", "tetrahedron"], "needs --coin"),
        (["scatter", "--graph", "tetrahedron", "--coin", "d=2"], "0 < |d| < 1"),
        (["frobnicate"], "usage error"),
        (["stationary", "--graph", "tetrahedron", "--coin", "d=0.5", "--inflow", "1,2"], "2 values"),
        (["detect", "--graph", "tetrahedron", "--coin", "d=0.5", "--source", "3"], "tail"),
        (["oracle", "--graph", "k33-6-6-6", "--coin", "d=0.5"], "exactly one external face"),
    ],
)
def test_bad_input_exits_with_one(capsys, argv, fragment):
    code, _, err = _run(capsys, *argv)
    assert code == EXIT_INPUT
    assert fragment in err


def test_bad_environment(capsys, monkeypatch):
    monkeypatch.setenv("FQW_MAX_STEPS", "many")
    code, _, err = _run(capsys, "faces", "--graph", "tetrahedron")
    assert code == EXIT_INPUT
    assert "FQW_MAX_STEPS" in err


def test_help(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "fqwalk" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv, tables",
    [
        (["faces", "--graph", "tetrahedron"], 1),
        (["genus", "--graph", "k33-6-6-6"], 1),
        (["blowup", "--graph", "tetrahedron"], 1),
        (["scatter", "--graph", "k33-6-6-6", "--coin", "d=0.5", "--detect", "1"], 2),
        (["stationary", "--graph", "tetrahedron", "--coin", "d=0.5"], 2),
        (["oracle", "--graph", "tetrahedron", "--coin", "d=0.5"], 1),
        (["detect", "--graph", "k33-18", "--coin", "d=0.5", "--source", "1"], 1),
    ],
)
def test_csv_output_holds_only_tables(capsys, argv, tables):
    code, out, err = _run(capsys, *argv, "--format", "csv")
    assert code == EXIT_OK
    assert len(_csv_sections(out)) == tables
    assert ": " not in out
    assert err


def test_csv_genus_row(capsys):
    _, out, _ = _run(capsys, "genus", "--graph", "k33-6-6-6", "--format", "csv")
    ((header, row),) = _csv_sections(out)
    assert header == ["genus", "b1", "faces", "face_lengths"]
    assert row[:3] == ["1", "4", "3"]


def test_tiny_amplitudes_are_marked(capsys):
    _, out, _ = _run(
        capsys, "simulate", "--graph", "tetrahedron", "--coin", "d=0.5",
        "--inflow", "zeros", "--format", "csv",
    )
    amplitudes = _csv_sections(out)[1]
    assert all(r[2:] == ["0~", "0~"] for r in amplitudes[1:])


def test_csv_output_file_has_no_summary(capsys, tmp_path):
    target = tmp_path / "faces.csv"
    code, out, err = _run(
        capsys, "faces", "--graph", "tetrahedron", "--format", "csv", "-o", str(target)
    )
    assert code == EXIT_OK
    assert out == f"wrote {target}\n"
    assert "genus: 0\n" in err
    rows = _csv_sections(target.read_text(encoding="utf-8"))[0]
    assert rows[0] == ["face", "kind", "length", "quays", "gaps", "vertices"]
    assert len(rows) == 1 + 4
