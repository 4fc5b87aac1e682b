"""Command-line surface: outputs, exit codes, reproducibility, figures."""

import json
import math

import pytest

from kfrontier.cli import main


@pytest.fixture
def kfile(tmp_path):
    path = tmp_path / "knowledge.json"
    path.write_text(json.dumps({"points": [{"x": 0.0, "y": 42.0}]}))
    return str(path)


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValue:
    def test_single_point_total(self, capsys, kfile):
        code, out, _ = run_cli(capsys, "value", "--knowledge-file", kfile, "--q", "1")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("# kfrontier v")
        assert lines[1] == "component,kind,lo,hi,length,value"
        assert lines[-1].split(",")[0] == "total"
        assert float(lines[-1].split(",")[-1]) == pytest.approx(1.0)

    def test_missing_file_exit_two(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "value", "--knowledge-file",
                               str(tmp_path / "nope.json"))
        assert code == 2
        assert "error" in err

    def test_malformed_file_exit_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"points": [{"x": 0}]}')
        code, _, err = run_cli(capsys, "value", "--knowledge-file", str(bad))
        assert code == 2


class TestBenefit:
    def test_expanding_curve_matches_closed_form(self, capsys):
        code, out, _ = run_cli(capsys, "benefit", "--X", "inf", "--n", "25",
                               "--d-max", "12")
        assert code == 0
        rows = [line.split(",") for line in out.strip().split("\n")[2:]]
        for d_s, v_s in rows:
            d = float(d_s)
            expected = d - d * d / 6.0
            if d > 4.0:
                expected += (d - 4.0) / 6.0 * math.sqrt(d) * math.sqrt(d - 4.0)
            assert float(v_s) == pytest.approx(expected, rel=1e-12)

    def test_finite_curve_stops_at_midpoint(self, capsys):
        code, out, _ = run_cli(capsys, "benefit", "--X", "6", "--n", "13",
                               "--d-max", "6")
        rows = [line.split(",") for line in out.strip().split("\n")[2:]]
        for d_s, v_s in rows:
            assert (v_s == "") == (float(d_s) > 3.0)

    def test_byte_reproducible(self, capsys, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for path in (a, b):
            code, _, _ = run_cli(capsys, "benefit", "--X", "inf", "--n", "50",
                                 "--out", str(path))
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_figure_written(self, capsys, tmp_path):
        fig = tmp_path / "curves.png"
        code, _, _ = run_cli(capsys, "benefit", "--X", "inf", "--X", "6",
                             "--n", "40", "--out", str(tmp_path / "b.csv"),
                             "--figure", str(fig))
        assert code == 0
        assert fig.stat().st_size > 1000


class TestChoose:
    def test_expand_result(self, capsys, kfile):
        code, out, _ = run_cli(capsys, "choose", "--knowledge-file", kfile,
                               "--eta", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["kind"] == "expand"
        assert payload["x"] == pytest.approx(payload["d"])

    def test_costless_choice(self, capsys, kfile):
        code, out, _ = run_cli(capsys, "choose", "--knowledge-file", kfile,
                               "--eta", "0")
        payload = json.loads(out)
        assert payload["d"] == pytest.approx(3.0)
        assert payload["rho"] == 1.0

    def test_curves_and_figure(self, capsys, tmp_path, kfile):
        curves = tmp_path / "curves.csv"
        fig = tmp_path / "curves.png"
        code, _, _ = run_cli(capsys, "choose", "--knowledge-file", kfile,
                             "--curves", str(curves), "--figure", str(fig),
                             "--n", "30")
        assert code == 0
        header = curves.read_text().strip().split("\n")[1]
        assert header == "X,payoff,d,rho"
        assert fig.exists()


class TestCutoffs:
    def test_known_values(self, capsys):
        code, out, _ = run_cli(capsys, "cutoffs", "--q", "1", "--eta", "1")
        payload = json.loads(out)
        assert payload["x_dot"] == pytest.approx(4.5486, abs=1e-4)
        assert payload["x_check0"] == pytest.approx(6.2044, abs=1e-3)
        assert payload["d0_inf"] == 3.0


class TestSimulate:
    def test_deterministic_trace_files(self, capsys, tmp_path, kfile):
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        for path in (a, b):
            code, out, _ = run_cli(capsys, "simulate", "--knowledge-file", kfile,
                                   "--periods", "50", "--seed", "11",
                                   "--out", str(path))
            assert code == 0
            summary = json.loads(out)
            assert summary["summary"] is True
        assert a.read_bytes() == b.read_bytes()

    def test_bridging_pattern_after_wide_first_discovery(self, capsys, tmp_path):
        """From knowledge {0, 6q} the forced-success path bridges at the
        midpoint 3q and then expands beyond 6q."""
        kpath = tmp_path / "k.json"
        kpath.write_text(json.dumps(
            {"points": [{"x": 0.0, "y": 0.0}, {"x": 6.0, "y": 1.0}]}))
        code, out, _ = run_cli(capsys, "simulate", "--knowledge-file", str(kpath),
                               "--periods", "3", "--seed", "1", "--force-success")
        assert code == 0
        lines = out.strip().split("\n")
        recs = [json.loads(x) for x in lines[:-1]]
        assert recs[0]["x"] == pytest.approx(3.0)
        assert recs[1]["x"] > 6.0
        assert recs[2]["x"] > recs[1]["x"]

    def test_zero_periods_rejected(self, capsys, kfile):
        code, _, err = run_cli(capsys, "simulate", "--knowledge-file", kfile,
                               "--periods", "0")
        assert code == 2


class TestMoonshot:
    def test_closed_form_reference_stats(self, capsys):
        code, out, _ = run_cli(capsys, "moonshot", "--mode", "closed-form",
                               "--eta", "1", "--report", "stats")
        assert code == 0
        payload = json.loads(out)
        assert payload["d_inf"] == pytest.approx(2.74272, abs=1e-4)
        assert payload["rho_inf"] == pytest.approx(0.31075, abs=1e-4)
        assert payload["rho_6q"] == pytest.approx(0.453226, abs=1e-5)
        assert payload["benefit_delta1"] == pytest.approx(0.0283413, abs=1e-5)

    def test_chain_stats_with_horizon(self, capsys):
        code, out, _ = run_cli(capsys, "moonshot", "--eta", "1", "--delta", "0.9",
                               "--horizon", "10", "--report", "stats")
        payload = json.loads(out)
        assert payload["benefit"] > 0.0
        assert payload["critical_delta"] == pytest.approx(0.5966, abs=1e-3)

    def test_delta_curve(self, capsys, tmp_path):
        path = tmp_path / "d.csv"
        fig = tmp_path / "d.png"
        code, _, _ = run_cli(capsys, "moonshot", "--eta", "1", "--report", "delta",
                             "--n", "12", "--out", str(path), "--figure", str(fig))
        assert code == 0
        lines = path.read_text().strip().split("\n")
        assert lines[1] == "delta,benefit"
        assert len(lines) == 14
        assert fig.exists()


class TestFunding:
    def test_myopic_json_and_csv(self, capsys, tmp_path):
        path = tmp_path / "line.csv"
        code, out, _ = run_cli(capsys, "funding", "--K", "3", "--kappa", "16",
                               "--s", "6", "--eta0", "1", "--n", "21",
                               "--out", str(path))
        assert code == 0
        payload = json.loads(out)
        assert payload["myopic"]["kind"] == "mix"
        assert 3.0 < payload["myopic"]["d"] < 6.0
        header = path.read_text().split("\n")[1]
        assert header == "zeta,h,eta,rho,d,at_kink,objective_myopic"

    def test_forward_included_with_delta(self, capsys, tmp_path):
        fig = tmp_path / "front.png"
        ind = tmp_path / "indiff.csv"
        code, out, _ = run_cli(capsys, "funding", "--K", "3", "--kappa", "16",
                               "--s", "6", "--eta0", "1", "--delta", "0.9",
                               "--n", "15", "--figure", str(fig),
                               "--indifference", str(ind))
        payload = json.loads(out)
        assert payload["forward"]["kind"] == "rewards-only"
        assert fig.exists()
        lines = ind.read_text().strip().split("\n")
        assert lines[1] == "d,rho_iso_myopic,rho_iso_forward"
        # The myopic indifference curve passes through the myopic optimum.
        d_my, rho_my = payload["myopic"]["d"], payload["myopic"]["rho"]
        import math as _math

        from kfrontier.valuation import benefit as _benefit

        rho_iso = payload["myopic"]["objective"] / _benefit(d_my, _math.inf, 1.0)
        assert rho_iso == pytest.approx(rho_my, rel=1e-9)

    def test_invalid_budget_exit_two(self, capsys):
        code, _, err = run_cli(capsys, "funding", "--K", "10", "--kappa", "2",
                               "--s", "6", "--eta0", "1")
        assert code == 2


class TestConfigPrecedence:
    def test_flag_overrides_config_overrides_default(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"eta": 2.0}))
        _, out, _ = run_cli(capsys, "--config", str(cfg), "cutoffs")
        assert json.loads(out)["eta"] == 2.0
        _, out, _ = run_cli(capsys, "--config", str(cfg), "cutoffs", "--eta", "0.5")
        assert json.loads(out)["eta"] == 0.5
        _, out, _ = run_cli(capsys, "cutoffs")
        assert json.loads(out)["eta"] == 1.0
