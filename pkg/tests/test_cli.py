import math

import pytest

from e91sim import bell, cli, entanglement, states
from e91sim.channels import ChannelFamily
from e91sim.cli import (
    CRITICAL_HEADER,
    EXIT_BELL_FAILED,
    EXIT_INSUFFICIENT,
    EXIT_OK,
    EXIT_USAGE,
    PROTOCOL_HEADER,
    SWEEP_HEADER,
    SweepSpec,
    fmt,
    run_protocol,
    run_sweep,
)


class TestFmt:
    def test_nine_significant_digits(self):
        assert fmt(2.0 * math.sqrt(2.0)) == "2.82842712"
        assert fmt(0.146446609406726) == "0.146446609"

    def test_negative_zero_normalized(self):
        assert fmt(-0.0) == "0"
        assert fmt(0.0) == "0"

    def test_plain_values(self):
        assert fmt(0.5) == "0.5"
        assert fmt(1.0) == "1"


class TestSweepSpec:
    def test_grid_divisible_step_reaches_edge(self):
        spec = SweepSpec(family=ChannelFamily.DEPOLARIZING, d_step=0.1)
        assert [fmt(d) for d in spec.grid()] == ["0", "0.1", "0.2", "0.3", "0.4", "0.5"]

    def test_grid_clamps_float_overshoot(self):
        spec = SweepSpec(family=ChannelFamily.DEPOLARIZING, d_step=0.1)
        assert spec.grid()[-1] == 0.5

    def test_grid_respects_bounds(self):
        spec = SweepSpec(
            family=ChannelFamily.BIT_FLIP, d_min=0.25, d_max=0.75, d_step=0.25
        )
        assert [fmt(d) for d in spec.grid()] == ["0.25", "0.5", "0.75"]

    def test_rejects_inverted_bounds(self):
        with pytest.raises(ValueError, match="d-min"):
            SweepSpec(family=ChannelFamily.DEPOLARIZING, d_min=0.4, d_max=0.2)

    def test_rejects_out_of_domain_max(self):
        with pytest.raises(ValueError, match="d-min"):
            SweepSpec(family=ChannelFamily.DEPOLARIZING, d_max=0.7)

    def test_gad_needs_p(self):
        with pytest.raises(ValueError, match="needs --p"):
            SweepSpec(family=ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING)

    def test_depolarizing_rejects_p(self):
        with pytest.raises(ValueError, match="not a parameter"):
            SweepSpec(family=ChannelFamily.DEPOLARIZING, p=0.5)

    def test_unknown_quantity(self):
        with pytest.raises(ValueError, match="unknown quantities"):
            SweepSpec(family=ChannelFamily.DEPOLARIZING, quantities=("entropy",))


class TestRunSweep:
    def test_gad_rows_match_library(self):
        spec = SweepSpec(
            family=ChannelFamily.GENERALIZED_AMPLITUDE_DAMPING,
            p=0.5,
            d_max=0.1,
            d_step=0.05,
        )
        lines = run_sweep(spec).splitlines()
        assert lines[0] == SWEEP_HEADER
        assert len(lines) == 4
        for line, d in zip(lines[1:], spec.grid()):
            state = states.noisy_singlet_gad(0.5, d)
            expected = ",".join(
                [
                    "gad",
                    "0.5",
                    fmt(d),
                    fmt(entanglement.concurrence(state).concurrence),
                    fmt(abs(bell.chsh_s(state))),
                    fmt(bell.optimal_s(state)),
                    fmt(states.key_statistics(state).error_rate),
                ]
            )
            assert line == expected

    def test_unrequested_columns_stay_empty(self):
        spec = SweepSpec(
            family=ChannelFamily.DEPOLARIZING,
            d_max=0.0,
            d_step=0.1,
            quantities=("concurrence",),
        )
        lines = run_sweep(spec).splitlines()
        assert lines[1] == "depolarizing,,0,1,,,"

    def test_p_column_empty_outside_gad(self):
        spec = SweepSpec(family=ChannelFamily.BIT_FLIP, d_max=0.0, d_step=0.1)
        row = run_sweep(spec).splitlines()[1]
        assert row.startswith("bitflip,,0,")

    def test_byte_stable(self):
        spec = SweepSpec(family=ChannelFamily.DEPOLARIZING, d_step=0.05)
        assert run_sweep(spec) == run_sweep(spec)

    def test_ends_with_newline(self):
        spec = SweepSpec(family=ChannelFamily.DEPOLARIZING, d_max=0.0, d_step=0.1)
        assert run_sweep(spec).endswith("\n")


class TestMainSweep:
    def test_stdout(self, capsys):
        code = cli.main(
            ["sweep", "--family", "depolarizing", "--d-max", "0.1", "--d-step", "0.05"]
        )
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert out.splitlines()[0] == SWEEP_HEADER
        assert len(out.splitlines()) == 4

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "sweep.csv"
        code = cli.main(
            [
                "sweep",
                "--family",
                "gad",
                "--p",
                "0.5",
                "--d-max",
                "0.1",
                "--d-step",
                "0.05",
                "--out",
                str(target),
            ]
        )
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        data = target.read_bytes()
        assert b"\r" not in data
        assert data.decode().splitlines()[0] == SWEEP_HEADER

    def test_quantity_subset(self, capsys):
        code = cli.main(
            [
                "sweep",
                "--family",
                "bitflip",
                "--d-max",
                "0",
                "--quantities",
                "qber,s_plane",
            ]
        )
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert out.splitlines()[1] == "bitflip,,0,,2.82842712,,0"

    def test_gad_without_p_is_usage_error(self, capsys):
        code = cli.main(["sweep", "--family", "gad"])
        err = capsys.readouterr().err
        assert code == EXIT_USAGE
        assert "e91sim: error:" in err
        assert "--p" in err

    def test_unknown_family_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["sweep", "--family", "phaseflip"])
        assert exc.value.code == 2

    def test_missing_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 2


class TestMainCritical:
    def _row(self, capsys, *argv):
        code = cli.main(["critical", *argv])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == CRITICAL_HEADER
        return lines[1].split(",")

    def test_depolarizing(self, capsys):
        family, p, d_c, c = self._row(capsys, "--family", "depolarizing")
        assert family == "depolarizing" and p == ""
        assert abs(float(d_c) - (1.0 - math.sqrt(2.0) / 2.0) / 2.0) < 1e-7
        assert abs(float(c) - (3.0 * math.sqrt(2.0) - 2.0) / 4.0) < 1e-7

    def test_bitflip(self, capsys):
        _, _, d_c, _ = self._row(capsys, "--family", "bitflip")
        assert abs(float(d_c) - (1.0 - math.sqrt(2.0) / 2.0)) < 1e-7

    def test_gad(self, capsys):
        family, p, d_c, c = self._row(capsys, "--family", "gad", "--p", "0.5")
        assert p == "0.5"
        assert abs(float(d_c) - 0.25) < 1e-7
        assert abs(float(c) - (math.sqrt(0.5) - 0.25)) < 1e-7

    def test_gad_without_p(self, capsys):
        assert cli.main(["critical", "--family", "gad"]) == EXIT_USAGE
        assert "mixing weight" in capsys.readouterr().err


class TestMainProtocol:
    def test_identity_secure(self, capsys):
        code = cli.main(
            ["protocol", "--channel", "identity", "--pairs", "5000", "--seed", "1"]
        )
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "verdict: Secure" in out
        assert "qber estimate: 0 " in out

    def test_depolarizing_fails_bell(self, capsys):
        code = cli.main(
            [
                "protocol",
                "--channel",
                "depolarizing",
                "--d",
                "0.2",
                "--pairs",
                "20000",
            ]
        )
        out = capsys.readouterr().out
        assert code == EXIT_BELL_FAILED
        assert "verdict: BellViolationFailed" in out

    def test_single_pair_insufficient(self, capsys):
        code = cli.main(["protocol", "--channel", "identity", "--pairs", "1"])
        out = capsys.readouterr().out
        assert code == EXIT_INSUFFICIENT
        assert "verdict: InsufficientSamples" in out

    def test_csv_row_matches_run_protocol(self, tmp_path, capsys):
        target = tmp_path / "session.csv"
        code = cli.main(
            [
                "protocol",
                "--channel",
                "gad",
                "--p",
                "0.5",
                "--d",
                "0.1",
                "--pairs",
                "20000",
                "--seed",
                "9",
                "--out",
                str(target),
            ]
        )
        capsys.readouterr()
        assert code == EXIT_OK
        _, expected_csv = run_protocol("gad", 0.1, 0.5, 20000, 9, 2.0)
        assert target.read_text() == expected_csv
        assert expected_csv.splitlines()[0] == PROTOCOL_HEADER

    def test_identity_rejects_d(self, capsys):
        code = cli.main(["protocol", "--channel", "identity", "--d", "0.1"])
        assert code == EXIT_USAGE
        assert "identity" in capsys.readouterr().err

    def test_gad_needs_both_parameters(self, capsys):
        code = cli.main(["protocol", "--channel", "gad", "--d", "0.1"])
        assert code == EXIT_USAGE
        assert "--d and --p" in capsys.readouterr().err

    def test_out_of_domain_d(self, capsys):
        code = cli.main(["protocol", "--channel", "depolarizing", "--d", "0.6"])
        assert code == EXIT_USAGE
        assert "[0, 0.5]" in capsys.readouterr().err


class TestMainState:
    def test_depolarizing_state(self, capsys):
        code = cli.main(["state", "--family", "depolarizing", "--d", "0.2"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "family: depolarizing"
        assert "d: 0.2" in lines
        values = {
            line.split(":")[0]: line.split(":", 1)[1].strip()
            for line in lines
            if ":" in line and not line.startswith(" ")
        }
        assert abs(float(values["concurrence"]) - 0.4) < 1e-7
        assert abs(float(values["qber"]) - 0.2) < 1e-9
        assert abs(abs(float(values["S (canonical angles)"])) - 2.0 * math.sqrt(2.0) * 0.6) < 1e-7

    def test_gad_requires_p(self, capsys):
        code = cli.main(["state", "--family", "gad", "--d", "0.1"])
        assert code == EXIT_USAGE
        assert "needs --p" in capsys.readouterr().err

    def test_bitflip_rejects_p(self, capsys):
        code = cli.main(["state", "--family", "bitflip", "--d", "0.1", "--p", "0.5"])
        assert code == EXIT_USAGE


class TestRunProtocolMapping:
    def test_unknown_channel(self):
        with pytest.raises(ValueError, match="unknown channel"):
            run_protocol("amplitude", 0.1, None, 100, 0, 2.0)

    def test_identity_equals_depolarizing_zero(self):
        report_id, _ = run_protocol("identity", None, None, 4000, 5, 2.0)
        report_dp, _ = run_protocol("depolarizing", 0.0, None, 4000, 5, 2.0)
        assert report_id == report_dp

    def test_qber_expected_equals_d(self):
        report, _ = run_protocol("bitflip", 0.3, None, 100, 0, 2.0)
        assert abs(report.qber_expected - 0.3) < 1e-12
