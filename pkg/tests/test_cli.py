"""Command-line contract: exit codes, report schema, determinism."""

import json
import pathlib

import jsonschema
import pytest

from ndslab import cli

SCHEMA = json.loads(
    (pathlib.Path(__file__).resolve().parents[1] / "docs" / "report-schema.json").read_text()
)

EX36 = """space shift(2);
system F {
  at odd(k): sigma^k;
  at even(k): sigma^-k;
}
"""

EX36_WITH_DIRECTIVE = EX36 + "check F syndetically-transitive horizon 100 basis 1;\n"


@pytest.fixture
def ndsl_file(tmp_path):
    def write(text, name="input.ndsl"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheckCommand:
    def test_witnessed_exit_zero(self, ndsl_file, capsys):
        code, out, _ = run(capsys, [
            "check", ndsl_file(EX36), "--property", "syndetically-transitive",
            "--horizon", "100", "--basis", "1",
        ])
        assert code == 0 and "witnessed" in out

    def test_refuted_exit_one(self, ndsl_file, capsys):
        code, out, _ = run(capsys, [
            "check", ndsl_file(EX36), "--property", "multi-transitive:2",
            "--horizon", "64",
        ])
        assert code == 1 and "refuted" in out

    def test_inconclusive_exit_two(self, ndsl_file, capsys):
        # unpaired one-shot powers admit no law; after they cancel the tail is
        # silent and nothing can refute within the horizon
        source = "space shift(2);\nsystem F { at 1: sigma^2; at 4: sigma^-2; }\n"
        code, out, _ = run(capsys, [
            "check", ndsl_file(source), "--property", "mixing", "--horizon", "8",
            "--basis", "1",
        ])
        assert code == 2

    def test_missing_file_exit_three(self, capsys):
        code, _, err = run(capsys, ["check", "does-not-exist.ndsl"])
        assert code == 3 and "cannot read" in err

    def test_parse_error_exit_three(self, ndsl_file, capsys):
        code, _, err = run(capsys, ["check", ndsl_file("space shift(2); system H { at 1: }")])
        assert code == 3 and "syntax" in err

    def test_diagnostics_json_lines(self, ndsl_file, capsys):
        code, _, err = run(capsys, [
            "check", ndsl_file("space shift(2); system H { at 1: }"),
            "--diagnostics-json",
        ])
        assert code == 3
        line = json.loads(err.strip().splitlines()[0])
        assert line["kind"] == "syntax" and line["line"] == 1

    def test_directives_drive_default_run(self, ndsl_file, capsys):
        code, out, _ = run(capsys, ["check", ndsl_file(EX36_WITH_DIRECTIVE)])
        assert code == 0 and "syndetically-transitive" in out

    def test_system_flag_selects_target(self, ndsl_file, capsys):
        source = EX36 + "system T = tail(F, 2);\n"
        code, out, _ = run(capsys, [
            "check", ndsl_file(source), "--system", "T",
            "--property", "multi-transitive:2", "--horizon", "256", "--basis", "1",
        ])
        assert code == 0 and "witnessed" in out

    def test_unknown_system_exit_three(self, ndsl_file, capsys):
        code, _, err = run(capsys, [
            "check", ndsl_file(EX36), "--system", "NOPE", "--property", "transitive",
        ])
        assert code == 3 and "no system named" in err

    def test_json_report_validates_and_reproduces(self, ndsl_file, capsys):
        path = ndsl_file(EX36)
        argv = ["check", path, "--property", "weakly-mixing:2", "--horizon", "64",
                "--format", "json"]
        code1, out1, _ = run(capsys, argv)
        code2, out2, _ = run(capsys, argv)
        assert code1 == code2 == 0
        rep1, rep2 = json.loads(out1), json.loads(out2)
        jsonschema.validate(rep1, SCHEMA)
        for rep in (rep1, rep2):
            for chk in rep["checks"]:
                chk.pop("timing_ms", None)
            rep.pop("timing_ms", None)
        assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)


class TestCorpusCommand:
    def test_filtered_corpus_json_validates(self, capsys):
        code, out, _ = run(capsys, [
            "corpus", "--filter", "example-3.5", "--format", "json",
        ])
        assert code == 0
        report = json.loads(out)
        jsonschema.validate(report, SCHEMA)
        assert report["scenarios"][0]["name"] == "example-3.5"
        assert all(r["passed"] for r in report["scenarios"][0]["results"])

    def test_table_format(self, capsys):
        code, out, _ = run(capsys, ["corpus", "--filter", "example-3.3"])
        assert code == 0
        assert all(line.startswith("PASS") for line in out.strip().splitlines())

    def test_empty_filter_warns_and_exits_zero(self, capsys):
        code, out, err = run(capsys, ["corpus", "--filter", "nonexistent"])
        assert code == 0 and "no scenario matches" in err
