import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from extcorr.cli import build_parser, fmt, main

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"

# (output name, argv) in pipeline order; {dir} is the working directory
PIPELINE = [
    ("fc.csv", ["gen", "fc", "--vars", "3", "--rows", "50", "--pattern", "++-", "--seed", "7"]),
    ("fu.csv", ["gen", "fu", "--vars", "3", "--rows", "50", "--seed", "7"]),
    ("labeled.csv", ["gen", "fc", "--vars", "3", "--rows", "40", "--seed", "11",
                     "--noise", "30", "--noise-columns", "A"]),
    ("wide.csv", ["gen", "fc", "--vars", "5", "--rows", "30", "--pattern", "+-+-+", "--seed", "3",
                  "--noise", "4"]),
    ("corr_fc.json", ["corr", "{dir}/fc.csv", "--mode", "instant"]),
    ("corr_fu.json", ["corr", "{dir}/fu.csv"]),
    ("corr_labeled_rolling.csv", ["corr", "{dir}/labeled.csv", "--mode", "rolling", "--format", "csv"]),
    ("trace_fc.csv", ["eigen-trace", "{dir}/fc.csv"]),
    ("trace_labeled.json", ["eigen-trace", "{dir}/labeled.csv", "--format", "json"]),
    ("noise_labeled.json", ["noise", "{dir}/labeled.csv", "--target", "A"]),
    ("noise_fc.csv", ["noise", "{dir}/fc.csv", "--target", "A", "--format", "csv"]),
    ("rank_wide.csv", ["rank", "{dir}/wide.csv", "--target", "A", "--k", "2"]),
    ("rank_wide.json", ["rank", "{dir}/wide.csv", "--target", "A", "--k", "3", "--format", "json"]),
]


def run_pipeline(workdir):
    outputs = {}
    for name, argv in PIPELINE:
        argv = [a.format(dir=workdir) for a in argv] + ["--out", str(workdir / name)]
        assert main(argv) == 0, name
        outputs[name] = (workdir / name).read_bytes()
    return outputs


def check_golden(name, data):
    path = GOLDEN / name
    if UPDATE:
        path.write_bytes(data)
    assert path.exists(), f"missing golden file {name}; run with UPDATE_GOLDEN=1"
    assert data == path.read_bytes(), name


@pytest.fixture(scope="module")
def pipeline_outputs(tmp_path_factory):
    return run_pipeline(tmp_path_factory.mktemp("run1"))


def test_pipeline_byte_identical_across_runs(pipeline_outputs, tmp_path):
    again = run_pipeline(tmp_path)
    assert again == pipeline_outputs


@pytest.mark.parametrize("name", [name for name, _ in PIPELINE])
def test_pipeline_golden(pipeline_outputs, name):
    check_golden(name, pipeline_outputs[name])


def _help(argv):
    env = dict(os.environ, COLUMNS="80")
    proc = subprocess.run(
        [sys.executable, "-m", "extcorr", *argv, "--help"],
        capture_output=True, env=env, check=True,
    )
    return proc.stdout


@pytest.mark.parametrize("command", ["", "gen", "corr", "eigen-trace", "noise", "rank"])
def test_help_golden(command):
    argv = [command] if command else []
    check_golden(f"help_{command or 'main'}.txt", _help(argv))


def test_fc_corr_values(pipeline_outputs):
    doc = json.loads(pipeline_outputs["corr_fc.json"])
    assert doc["schema_version"] == "1"
    assert doc["rho_eig"] == pytest.approx(1, abs=1e-9)
    assert doc["rho_frob"] == pytest.approx(1, abs=1e-9)
    assert doc["mode"] == "instant"


def test_fu_corr_values(pipeline_outputs):
    doc = json.loads(pipeline_outputs["corr_fu.json"])
    assert doc["rho_eig"] == pytest.approx(0, abs=1e-9)
    assert doc["rho_frob"] == pytest.approx(0, abs=1e-9)


def test_fc_matrix_from_generated_csv(tmp_path):
    from extcorr import corr_matrix, read_csv

    out = tmp_path / "fc.csv"
    assert main(["gen", "fc", "--vars", "3", "--rows", "50", "--pattern", "++-", "--seed", "7",
                 "--out", str(out)]) == 0
    import numpy as np

    np.testing.assert_allclose(
        np.asarray(corr_matrix(read_csv(out))), [[1, 1, -1], [1, 1, -1], [-1, -1, 1]], atol=1e-12
    )


def test_trace_rows(pipeline_outputs):
    lines = pipeline_outputs["trace_fc.csv"].decode().splitlines()
    assert lines[0] == "prefix_length,lambda_max,degenerate"
    assert lines[1] == "4,3,false"
    assert lines[-1] == "# summary: mean=3 count=47"
    assert len(lines) == 49


def test_noisy_trace_inside_interval(pipeline_outputs):
    doc = json.loads(pipeline_outputs["trace_labeled.json"])
    lams = [e["lambda_max"] for e in doc["entries"]]
    assert all(1 < v < 3 for v in lams)
    assert 1 < doc["summary"]["mean"] < 3
    assert doc["summary"]["count"] == len(lams)


def test_noise_report_pattern(pipeline_outputs):
    doc = json.loads(pipeline_outputs["noise_labeled.json"])
    assert doc["labeling_noise"] > 0.01
    assert abs(doc["predictor_noise"]) < 1e-9


def test_clean_noise_zero(pipeline_outputs):
    header, row = pipeline_outputs["noise_fc.csv"].decode().splitlines()
    assert header == "total_noise,predictor_noise,labeling_noise"
    assert all(abs(float(v)) < 1e-9 for v in row.split(","))


def test_json_and_csv_agree(tmp_path, pipeline_outputs):
    src = tmp_path / "labeled.csv"
    src.write_bytes(pipeline_outputs["labeled.csv"])
    for cmd in (["corr", str(src), "--mode", "rolling"], ["noise", str(src), "--target", "A"]):
        main(cmd + ["--format", "json", "--out", str(tmp_path / "a.json")])
        main(cmd + ["--format", "csv", "--out", str(tmp_path / "a.csv")])
        doc = json.loads((tmp_path / "a.json").read_text())
        header, row = (tmp_path / "a.csv").read_text().splitlines()
        for key, text in zip(header.split(","), row.split(",")):
            if isinstance(doc[key], float):
                assert float(text) == doc[key]
            else:
                assert text == str(doc[key])


def test_rank_duplicate_first(tmp_path):
    from extcorr import DataMatrix, gen_fu, write_csv
    import numpy as np

    fu = gen_fu(2, 30, 3)
    a, b = fu.values.T
    path = tmp_path / "dup.csv"
    with open(path, "w", newline="") as fh:
        write_csv(DataMatrix(("B", "A", "T"), np.column_stack([b, a, a])), fh)
    out = tmp_path / "rank.csv"
    assert main(["rank", str(path), "--target", "T", "--k", "1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[1].startswith("A,1,")
    assert lines[2].startswith("B,")


def test_rank_fc_lexicographic(tmp_path):
    path = tmp_path / "fc.csv"
    main(["gen", "fc", "--vars", "4", "--rows", "20", "--seed", "1", "--out", str(path)])
    out = tmp_path / "r.csv"
    assert main(["rank", str(path), "--target", "D", "--k", "2", "--out", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    assert [r[0] for r in rows] == ["A|B", "A|C", "B|C"]
    assert all(float(r[1]) == 1.0 for r in rows)


def test_fmt():
    assert fmt(1.0) == "1"
    assert fmt(0.28495925646098946) == "0.284959256461"
    assert fmt(float("nan")) == "nan"
    assert fmt(True) == "true"
    assert fmt(47) == "47"


class TestExitStatus:
    @pytest.fixture
    def fc_file(self, tmp_path):
        path = tmp_path / "fc.csv"
        main(["gen", "fc", "--vars", "3", "--rows", "10", "--seed", "1", "--out", str(path)])
        return path

    @pytest.fixture
    def flat_file(self, tmp_path):
        path = tmp_path / "flat.csv"
        path.write_text("A,B,C\n1,5,2\n2,5,1\n3,5,7\n4,5,3\n")
        return path

    @pytest.mark.parametrize(
        "argv",
        [
            ["gen", "fc", "--vars", "3", "--rows", "10", "--pattern=-+-", "--seed", "7"],
            ["gen", "fc", "--vars", "3", "--rows", "10", "--pattern", "++", "--seed", "7"],
            ["gen", "fc", "--vars", "3", "--rows", "10", "--pattern", "+x+", "--seed", "7"],
            ["gen", "fc", "--vars", "3", "--rows", "10"],
            ["gen", "fu", "--vars", "3", "--rows", "3", "--seed", "1"],
            ["gen", "fu", "--vars", "3", "--rows", "9", "--seed", "-1"],
            ["gen", "fc", "--vars", "1", "--rows", "9", "--seed", "1"],
            ["gen", "fc", "--vars", "3", "--rows", "9", "--seed", "1", "--noise", "-2"],
            ["bogus"],
            [],
        ],
    )
    def test_usage_errors(self, argv, capsys):
        assert main(argv) == 2
        assert capsys.readouterr().err

    def test_unknown_target(self, fc_file, capsys):
        assert main(["noise", str(fc_file), "--target", "NoSuchCol"]) == 2
        assert "NoSuchCol" in capsys.readouterr().err

    @pytest.mark.parametrize("k", ["0", "3", "4"])
    def test_rank_k_range(self, fc_file, k):
        assert main(["rank", str(fc_file), "--target", "A", "--k", k]) == 2

    def test_rank_unknown_target(self, fc_file):
        assert main(["rank", str(fc_file), "--target", "Q", "--k", "1"]) == 2

    def test_bad_min_prefix(self, fc_file):
        assert main(["corr", str(fc_file), "--mode", "rolling", "--min-prefix", "2"]) == 2

    def test_bad_mode(self, fc_file):
        assert main(["corr", str(fc_file), "--mode", "sideways"]) == 2

    def test_degenerate_column(self, flat_file, capsys):
        assert main(["corr", str(flat_file)]) == 1
        assert "'B'" in capsys.readouterr().err

    def test_degenerate_fail_rule(self, flat_file):
        assert main(["eigen-trace", str(flat_file), "--min-prefix", "3", "--degenerate", "fail"]) == 1

    def test_degenerate_skip_rule(self, flat_file, capsys):
        assert main(["eigen-trace", str(flat_file), "--min-prefix", "3"]) == 0
        out = capsys.readouterr().out
        assert "3,nan,true" in out
        assert out.endswith("# summary: mean=nan count=0\n")

    def test_trace_too_short(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("A,B,C\n1,2,3\n2,1,5\n3,3,1\n")
        assert main(["eigen-trace", str(path)]) == 1

    def test_missing_input(self, tmp_path):
        assert main(["corr", str(tmp_path / "missing.csv")]) == 1

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("A,B\n1,x\n2,3\n")
        assert main(["corr", str(path)]) == 1
        assert "row 2, column 'B'" in capsys.readouterr().err

    def test_too_few_predictors(self, tmp_path):
        path = tmp_path / "two.csv"
        main(["gen", "fc", "--vars", "2", "--rows", "10", "--seed", "1", "--out", str(path)])
        assert main(["noise", str(path), "--target", "A"]) == 2

    def test_console_script_exit_codes(self, fc_file):
        ok = subprocess.run([sys.executable, "-m", "extcorr", "corr", str(fc_file)], capture_output=True)
        assert ok.returncode == 0
        bad = subprocess.run([sys.executable, "-m", "extcorr", "gen", "fc", "--vars", "3"], capture_output=True)
        assert bad.returncode == 2

    def test_stdout_default(self, fc_file, capsys):
        assert main(["corr", str(fc_file), "--format", "csv"]) == 0
        assert capsys.readouterr().out.startswith("rho_eig,rho_frob,n_vars,mode,trace_length\n")


def test_parser_flags_frozen():
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    assert sorted(sub.choices) == ["corr", "eigen-trace", "gen", "noise", "rank"]
