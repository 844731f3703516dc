"""End to end runs of the command line front end.

Every case runs twice and must print identical bytes, since reports carry
no timestamps and all randomness is seeded.
"""

import contextlib
import io
import json

import pytest

from coarsekit import cli


def run_cli(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


# (argv, expected exit code)
CASES = [
    (["ball", "--group", "Z", "--radius", "6"], 0),
    (["ball", "--group", "DihInf", "--radius", "5", "--list"], 0),
    (["ball", "--group", "Zmod(6)", "--radius", "8"], 0),
    (["fc", "--group", "Z"], 0),
    (["fc", "--group", "DihInf", "--radius", "8"], 1),
    (["fc", "--group", "F(2)", "--radius", "6"], 1),
    (["compare-lr", "--group", "Z"], 0),
    (["compare-lr", "--group", "DihInf"], 1),
    (["mult-born", "--group", "Zmod(6)"], 0),
    (["mult-born", "--group", "DihInf"], 1),
    (["witness", "--group", "DihInf", "--family", "edge-left:t",
      "--structure", "left"], 1),
    (["witness", "--group", "DihInf", "--family", "edge-left:t",
      "--structure", "right"], 0),
    (["witness", "--group", "DihInf", "--family", "shape-left:1;t;x",
      "--structure", "left", "--radius", "6"], 0),
    (["map-check", "--group", "Z", "--map", "identity", "--equivalence"], 0),
    (["map-check", "--group", "Z", "--map", "floor-div:2", "--radius", "12",
      "--equivalence"], 0),
    (["map-check", "--group", "Z", "--map", "square"], 1),
    (["map-check", "--group", "Z", "--map", "identity",
      "--close-to", "translate-left:5"], 0),
    (["map-check", "--group", "Z", "--target", "Zmod(6)", "--map", "mod:6",
      "--equivalence"], 1),
    (["map-check", "--group", "Z", "--target", "DihInf", "--map", "inclusion",
      "--equivalence", "--cover-distance", "1", "--radius", "10"], 0),
    (["action-check", "--action", "left(Z)", "--set", "0"], 0),
    (["action-check", "--action", "left(Z->DihInf via x^n)",
      "--set", "1,t", "--radius", "8"], 0),
    (["action-check", "--action", "trivial(Z on Z)", "--radius", "6"], 1),
    (["svarc-milnor", "--action", "left(Z)", "--radius", "8"], 0),
    (["svarc-milnor", "--action", "left(Z->DihInf via x^n)", "--radius", "10"], 0),
    (["commuting", "--radius", "8"], 0),
    (["gromov", "--radius", "8", "--enum-radius", "2"], 0),
    (["demo-dihedral", "--radius", "8"], 0),
]


class TestBattery:
    @pytest.mark.parametrize(
        "argv,expected", CASES, ids=[" ".join(c[0]) for c in CASES]
    )
    def test_exit_code_and_reproducibility(self, argv, expected):
        code, out = run_cli(argv)
        assert code == expected
        report = json.loads(out)
        assert report["tool"]["name"] == "coarsekit"
        assert set(report) == {"tool", "command", "config", "checks", "notes"}
        assert report["command"] == argv[0]

        code2, out2 = run_cli(argv)
        assert code2 == code
        assert out2 == out

    def test_verdicts_drive_exit_code(self):
        code, out = run_cli(["fc", "--group", "DihInf"])
        verdicts = [c["verdict"] for c in json.loads(out)["checks"]]
        assert code == 1 and "FAIL" in verdicts

        code, out = run_cli(["compare-lr", "--group", "DihInf"])
        verdicts = [c["verdict"] for c in json.loads(out)["checks"]]
        assert code == 1 and "DIFFER" in verdicts


class TestErrors:
    def test_unknown_group_exits_2(self):
        code, out = run_cli(["fc", "--group", "Sym(3)"])
        assert code == 2
        report = json.loads(out)
        assert report["error"]["code"] == "parse-error"
        assert "checks" not in report

    def test_uncovered_equivalence_exits_2(self):
        code, out = run_cli(
            ["map-check", "--group", "Z", "--target", "DihInf",
             "--map", "inclusion", "--equivalence"]
        )
        assert code == 2
        assert json.loads(out)["error"]["code"] == "surjectivity-violation"

    def test_malformed_element_exits_2(self):
        code, out = run_cli(
            ["witness", "--group", "Z", "--family", "edge-left:banana"]
        )
        assert code == 2

    def test_unknown_flag_is_usage_error(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with pytest.raises(SystemExit) as exc:
                cli.main(["ball", "--group", "Z", "--frobnicate"])
        assert exc.value.code == 2

    def test_missing_subcommand_is_usage_error(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with pytest.raises(SystemExit) as exc:
                cli.main([])
        assert exc.value.code == 2


class TestFormats:
    def test_table_format(self):
        code, out = run_cli(["fc", "--group", "Z", "--format", "table"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("coarsekit ") and "command=fc" in lines[0]
        assert any("PASS" in line for line in lines[1:])

    def test_table_format_error(self):
        code, out = run_cli(["fc", "--group", "Sym(3)", "--format", "table"])
        assert code == 2
        assert "error [parse-error]:" in out

    def test_version(self):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            with pytest.raises(SystemExit) as exc:
                cli.main(["--version"])
        assert exc.value.code == 0
        assert buf.getvalue().startswith("coarsekit ")

    def test_ball_window_listing(self):
        code, out = run_cli(["ball", "--group", "Z", "--radius", "2"])
        data = json.loads(out)["checks"][0]["data"]
        assert data["sizes"] == {"0": 1, "1": 3, "2": 5}
        assert sorted(data["window"]) == ["-1", "-2", "0", "1", "2"]
