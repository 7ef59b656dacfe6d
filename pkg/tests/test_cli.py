"""Tests for the brmult command line."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from brmult import __version__
from brmult.cli import HANDLERS, main
from brmult.errors import ExitCode, Indeterminate
from brmult.icmod import MixedMultReport
from tests.fixture_loader import fixture_path


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _json(output: str) -> object:
    return json.loads(output)


class TestCommands:
    """Tests for single commands on instance files."""

    def test_koszul_chi(self, runner: CliRunner) -> None:
        """The worked example has h0 = det colength = 2."""
        result = runner.invoke(main, ["koszul-chi", str(fixture_path("koszul_example.inst"))])
        assert result.exit_code == ExitCode.OK
        payload = _json(result.stdout)
        assert isinstance(payload, dict)
        assert payload["h0"] == 2
        assert payload["det_colength"] == 2
        assert payload["equal"] is True
        assert payload["endos"] == ["P", "Q"]

    def test_brtable_csv(self, runner: CliRunner) -> None:
        """A 0..3 x 0..3 window gives a header and sixteen rows."""
        result = runner.invoke(
            main, ["--window", "3,3", "--csv", "brtable", str(fixture_path("pair_mm.inst"))]
        )
        assert result.exit_code == ExitCode.OK
        lines = result.stdout.splitlines()
        assert lines[0] == "n1,n2,length"
        assert len(lines) == 17
        assert lines[1] == "0,0,0"
        assert lines[-1] == "3,3,21"

    def test_verify_jrn0(self, runner: CliRunner) -> None:
        """(m, m) has joint reduction number 0."""
        result = runner.invoke(
            main, ["--seed", "7", "verify-jrn0", str(fixture_path("pair_mm.inst"))]
        )
        assert result.exit_code == ExitCode.OK
        payload = _json(result.stdout)
        assert isinstance(payload, dict)
        assert payload["theorem"] == "jrn0"
        assert payload["lhs"] == 0
        assert payload["seed"] == 7

    def test_colength(self, runner: CliRunner) -> None:
        """The task's modules are measured in order."""
        result = runner.invoke(main, ["colength", str(fixture_path("objects.inst"))])
        assert result.exit_code == ExitCode.OK
        payload = _json(result.stdout)
        assert isinstance(payload, list)
        assert [(r["name"], r["colength"]) for r in payload] == [("I", 4), ("M", 3), ("N", 3)]
        assert payload[1]["certificates"]["s"]["M"]["detail"] == "search"

    def test_colength_over_rationals(self, runner: CliRunner) -> None:
        """--field q gives the same lengths."""
        args = ["--field", "q", "colength", str(fixture_path("objects.inst"))]
        result = runner.invoke(main, args)
        assert result.exit_code == ExitCode.OK
        payload = _json(result.stdout)
        assert isinstance(payload, list)
        assert [r["colength"] for r in payload] == [4, 3, 3]

    def test_not_primary_is_indeterminate(self, runner: CliRunner) -> None:
        """(x) has no certificate; the colength is null and the exit code 3."""
        result = runner.invoke(
            main, ["--s-max", "4", "colength", str(fixture_path("not_primary.inst"))]
        )
        assert result.exit_code == ExitCode.INDETERMINATE
        payload = _json(result.stdout)
        assert isinstance(payload, list)
        assert payload[0]["colength"] is None

    def test_library_error_is_indeterminate(self, runner: CliRunner) -> None:
        """A failed certificate inside a table exits with 3."""
        args = ["--s-max", "4", "--window", "1", "brtable", str(fixture_path("not_primary.inst"))]
        result = runner.invoke(main, args)
        assert result.exit_code == ExitCode.INDETERMINATE
        assert "Error" in result.output

    def test_csv_unavailable(self, runner: CliRunner) -> None:
        """Commands without a CSV form are input errors."""
        result = runner.invoke(
            main, ["--csv", "koszul-chi", str(fixture_path("koszul_example.inst"))]
        )
        assert result.exit_code == ExitCode.INPUT_ERROR

    def test_every_command_is_registered(self) -> None:
        """Each handler has a subcommand."""
        assert set(HANDLERS) <= set(main.commands)


class TestInputErrors:
    """Tests for malformed input and flags."""

    def test_bad_syntax(self, runner: CliRunner) -> None:
        """A parse error exits with 2 and names the position."""
        result = runner.invoke(main, ["colength", str(fixture_path("bad_syntax.inst"))])
        assert result.exit_code == ExitCode.INPUT_ERROR
        assert "Error" in result.output

    def test_bad_rank(self, runner: CliRunner) -> None:
        """Shape errors are input errors."""
        result = runner.invoke(main, ["check", str(fixture_path("bad_rank.inst"))])
        assert result.exit_code == ExitCode.INPUT_ERROR

    def test_bad_field(self, runner: CliRunner) -> None:
        """An unknown field spec is a usage error."""
        result = runner.invoke(
            main, ["--field", "gf4", "check", str(fixture_path("objects.inst"))]
        )
        assert result.exit_code == 2

    def test_bad_window(self, runner: CliRunner) -> None:
        """Windows are comma separated non-negative integers."""
        result = runner.invoke(
            main, ["--window", "3;3", "brtable", str(fixture_path("pair_mm.inst"))]
        )
        assert result.exit_code == 2

    def test_missing_file(self, runner: CliRunner, tmp_path: Path) -> None:
        """Paths must exist."""
        result = runner.invoke(main, ["colength", str(tmp_path / "absent.inst")])
        assert result.exit_code == 2

    def test_wrong_module_count(self, runner: CliRunner, tmp_path: Path) -> None:
        """Pair verifiers need two modules."""
        path = tmp_path / "one.inst"
        path.write_text("ring\n  vars x y\nend\nicmodule A\n  ideal 1,0 0,1\nend\n")
        result = runner.invoke(main, ["verify-local", str(path)])
        assert result.exit_code == ExitCode.INPUT_ERROR


class TestCheckAndRun:
    """Tests for check, run and suite."""

    def test_check_json(self, runner: CliRunner) -> None:
        """check summarizes ring, objects and tasks."""
        result = runner.invoke(main, ["check", str(fixture_path("objects.inst"))])
        assert result.exit_code == ExitCode.OK
        payload = _json(result.stdout)
        assert isinstance(payload, dict)
        assert payload["ring"] == {"vars": ["x", "y"], "field": "fp:32003"}
        assert [o["kind"] for o in payload["objects"]] == ["ideal", "module", "icmodule", "endo"]
        assert payload["tasks"] == ["colength"]

    def test_check_text(self, runner: CliRunner) -> None:
        """--text prints a table."""
        result = runner.invoke(main, ["--text", "check", str(fixture_path("objects.inst"))])
        assert result.exit_code == ExitCode.OK
        assert "icmodule" in result.stdout
        assert "Kind" in result.stdout

    def test_run(self, runner: CliRunner) -> None:
        """run executes every task block in order."""
        result = runner.invoke(main, ["run", str(fixture_path("pair_mm.inst"))])
        assert result.exit_code == ExitCode.OK
        payload = _json(result.stdout)
        assert isinstance(payload, list)
        assert payload[0]["theorem"] == "jrn0"
        assert payload[0]["seed"] == 7
        assert payload[1]["values"][-1] == 21

    def test_run_is_deterministic(self, runner: CliRunner) -> None:
        """Same file, same flags, same bytes."""
        args = ["run", str(fixture_path("pair_mm.inst"))]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.stdout == second.stdout

    def test_run_unknown_command(self, runner: CliRunner, tmp_path: Path) -> None:
        """Unknown task commands are input errors."""
        path = tmp_path / "task.inst"
        path.write_text("ring\n  vars x y\nend\ntask frobnicate\nend\n")
        result = runner.invoke(main, ["run", str(path)])
        assert result.exit_code == ExitCode.INPUT_ERROR

    def test_suite(self, runner: CliRunner) -> None:
        """A short comparison suite holds."""
        result = runner.invoke(main, ["--seed", "3", "suite", "comparison", "--count", "2"])
        assert result.exit_code == ExitCode.OK
        payload = _json(result.stdout)
        assert isinstance(payload, list)
        assert [r["seed"] for r in payload] == [3, 4]
        assert all(r["equal"] for r in payload)

    def test_suite_csv(self, runner: CliRunner) -> None:
        """Suite reports render as CSV rows."""
        result = runner.invoke(main, ["--csv", "suite", "ideal-case", "--count", "1"])
        assert result.exit_code == ExitCode.OK
        lines = result.stdout.splitlines()
        assert lines[0] == "theorem,instance,seed,lhs,rhs,equal,status"
        assert len(lines) == 3

    def test_suite_fails_on_wrong_e(
        self, runner: CliRunner, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """A chain instance whose e(I1|I2) disagrees exits with a verification failure."""
        monkeypatch.setattr(
            "brmult.icmod.suites.mixed_mult_ideals",
            lambda *args, **kwargs: MixedMultReport(1, 999, True, (3, 3), 5, 5),
        )
        result = runner.invoke(main, ["--seed", "1", "suite", "chain", "--count", "1"])
        assert result.exit_code == ExitCode.VERIFICATION_FAILED
        payload = _json(result.stdout)
        assert isinstance(payload, list)
        assert payload[0]["checks"] == {"e = h0": False, "e routes agree": False}

    def test_suite_generator_exhausted(
        self, runner: CliRunner, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """No usable endomorphism pair is indeterminate, not a crash."""
        monkeypatch.setattr(
            "brmult.icmod.suites.mprimary_exponent", lambda ideal, s_max: Indeterminate(s_max)
        )
        result = runner.invoke(main, ["suite", "comparison", "--count", "1"])
        assert result.exit_code == ExitCode.INDETERMINATE
        assert "draws" in result.output

    def test_suite_size_override(self, runner: CliRunner) -> None:
        """--max-rank 1 keeps jrn0 instances to ideal pairs."""
        result = runner.invoke(main, ["suite", "jrn0", "--count", "2", "--max-rank", "1"])
        assert result.exit_code == ExitCode.OK
        payload = _json(result.stdout)
        assert isinstance(payload, list)
        assert all(" + " not in r["instance"] for r in payload)

    def test_version(self, runner: CliRunner) -> None:
        """--version prints the package version."""
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output
