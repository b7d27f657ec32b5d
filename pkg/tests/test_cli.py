"""End-to-end command-line behavior, file formats, and exit codes."""

import json
from fractions import Fraction

import pytest

from fairdiv import Allocation, efx_ratio, parse_instance
from fairdiv.cli import main, parse_tie_profile
from fairdiv.envy_graph import TiePolicy


@pytest.fixture
def inst_file(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text('{"agents": 2, "goods": 5, '
                    '"values": [["2","5","5","2","3"], ["5","4","6","5","1"]]}')
    return path


def run(*argv):
    return main([str(a) for a in argv])


class TestGamma:
    def test_prints_stats(self, inst_file, capsys):
        assert run("gamma", "--input", inst_file) == 0
        out = capsys.readouterr().out
        assert "range parameter gamma = 1/3" in out
        assert "good 4: gamma_g=1/3 base_sq=3" in out

    def test_missing_file(self, tmp_path, capsys):
        assert run("gamma", "--input", tmp_path / "nope.json") == 2
        assert "error:" in capsys.readouterr().err


class TestSolve:
    @pytest.mark.parametrize("notion", ["efx", "tefx", "pmms"])
    def test_solve_meets_guarantee(self, inst_file, tmp_path, notion, capsys):
        report_path = tmp_path / "report.json"
        assert run("solve", notion, "--input", inst_file,
                   "--report", report_path) == 0
        assert "guarantee met" in capsys.readouterr().out
        doc = json.loads(report_path.read_text())
        assert doc["algorithm"] == f"solve-{notion}"
        assert doc["gamma"] == "1/3"

    def test_report_round_trips_through_verify(self, inst_file, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        run("solve", "efx", "--input", inst_file, "--report", report_path)
        doc = json.loads(report_path.read_text())
        alloc_path = tmp_path / "alloc.json"
        alloc_path.write_text(json.dumps(doc["allocation"]))
        measured = doc["measured_alpha"]
        assert run("verify", "--input", inst_file, "--allocation", alloc_path,
                   "--notion", "efx", "--alpha", measured) == 0
        inst = parse_instance(inst_file.read_text())
        alloc = Allocation.from_bundles(doc["allocation"]["bundles"])
        assert str(efx_ratio(inst, alloc).alpha) == measured

    def test_trace_recorded(self, inst_file, tmp_path):
        report_path = tmp_path / "report.json"
        run("solve", "efx", "--input", inst_file, "--trace", "--report", report_path)
        doc = json.loads(report_path.read_text())
        assert len(doc["trace"]) == 5
        assert {r["branch"] for r in doc["trace"]} <= {"first-good", "source"}

    def test_explicit_eta(self, inst_file):
        assert run("solve", "efx", "--input", inst_file, "--eta", "9/16") == 0

    def test_tefx_variant_requires_low_gamma(self, inst_file, capsys):
        # gamma = 1/3 <= 1/2: the variant must run
        assert run("solve", "tefx", "--input", inst_file,
                   "--variant", "labase-eta") == 0

    def test_pmms_reports_both_layers(self, inst_file, tmp_path):
        report_path = tmp_path / "report.json"
        run("solve", "pmms", "--input", inst_file, "--report", report_path)
        doc = json.loads(report_path.read_text())
        assert doc["reduced_instance"]["theoretical_alpha"] == "5/6"
        assert doc["reduced_instance"]["arithmetic"].startswith("real:106")
        assert doc["precision_bits"] == 106

    def test_report_reproduces_the_run(self, inst_file, tmp_path):
        report_path = tmp_path / "report.json"
        run("solve", "efx", "--input", inst_file, "--eta", "default",
            "--tie-break", "good=highest,source=highest", "--report", report_path)
        doc = json.loads(report_path.read_text())
        # everything needed to replay is in the report
        from fairdiv import Instance, LaBaseConfig, run_labase
        from fairdiv.labase import EtaMode
        inst = Instance(doc["instance"]["values"])
        config = LaBaseConfig(eta=EtaMode.parse(doc["eta"]),
                              ties=TiePolicy(**doc["tie_break"]))
        replay = run_labase(inst, config)
        assert [list(b) for b in replay.bundles] == doc["allocation"]["bundles"]


class TestVerify:
    def test_threshold_exit_codes(self, inst_file, tmp_path):
        alloc_path = tmp_path / "alloc.json"
        alloc_path.write_text('{"bundles": [[1, 0, 4], [2, 3]]}')
        assert run("verify", "--input", inst_file, "--allocation", alloc_path,
                   "--notion", "efx", "--alpha", "11/9") == 0
        assert run("verify", "--input", inst_file, "--allocation", alloc_path,
                   "--notion", "efx", "--alpha", "5/4") == 1

    def test_no_threshold_is_informational(self, inst_file, tmp_path, capsys):
        alloc_path = tmp_path / "alloc.json"
        alloc_path.write_text('{"bundles": [[], []]}')
        assert run("verify", "--input", inst_file, "--allocation", alloc_path,
                   "--notion", "pmms") == 0
        assert "inf" in capsys.readouterr().out

    def test_overlapping_bundles_rejected(self, inst_file, tmp_path, capsys):
        alloc_path = tmp_path / "alloc.json"
        alloc_path.write_text('{"bundles": [[0, 1], [1]]}')
        assert run("verify", "--input", inst_file, "--allocation", alloc_path,
                   "--notion", "efx") == 2


class TestScale:
    def test_emit_scaled_instance(self, tmp_path, capsys):
        src = tmp_path / "inst.csv"
        src.write_text("1,2\n2,1\n")
        out = tmp_path / "scaled.json"
        assert run("scale", "--input", src, "--epsilon", "1/1000000",
                   "--emit-scaled", out) == 0
        text = capsys.readouterr().out
        assert "achieved gamma >= 1/2" in text
        scaled = parse_instance(out.read_text())
        assert scaled.range_parameter() >= Fraction(1, 2)

    def test_trace_prints_certificate(self, tmp_path, capsys):
        src = tmp_path / "inst.csv"
        src.write_text("1,2\n2,1\n")
        assert run("scale", "--input", src, "--epsilon", "1/1024", "--trace") == 0
        text = capsys.readouterr().out
        assert "infeasibility certificate" in text
        assert "< 1" in text


class TestGen:
    def test_deterministic_and_seed_override(self, tmp_path, capsys, monkeypatch):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        run("gen", "-n", 3, "-m", 4, "--seed", 5, "--out", a)
        run("gen", "-n", 3, "-m", 4, "--seed", 5, "--out", b)
        assert a.read_text() == b.read_text()
        monkeypatch.setenv("FAIRDIV_SEED", "6")
        c = tmp_path / "c.json"
        run("gen", "-n", 3, "-m", 4, "--seed", 5, "--out", c)
        assert c.read_text() != a.read_text()
        assert "seed 6" in capsys.readouterr().out

    def test_csv_format(self, capsys):
        assert run("gen", "-n", 2, "-m", 3, "--format", "csv", "--seed", 1) == 0
        out = capsys.readouterr().out.strip()
        assert len(out.splitlines()) == 2
        parse_instance(out)

    def test_model_flag(self, capsys):
        assert run("gen", "-n", 2, "-m", 4, "--model", "two-valued:1,2,0.2",
                   "--seed", 2) == 0
        inst = parse_instance(capsys.readouterr().out)
        assert {v for row in inst.values for v in row} <= {0, 1, 2}


class TestOracle:
    def test_best_alpha(self, tmp_path, capsys):
        src = tmp_path / "inst.csv"
        src.write_text("6,6,4,4,4\n6,6,4,4,4\n")
        assert run("oracle", "best-alpha", "--input", src, "--notion", "pmms") == 0
        assert "best achievable pmms alpha = 1" in capsys.readouterr().out


class TestTightExample:
    def test_labase_quarter(self, tmp_path, capsys):
        report_path = tmp_path / "r.json"
        assert run("tight-example", "labase-appendix-a", "--gamma", "1/4",
                   "--report", report_path) == 0
        assert "guarantee met with equality" in capsys.readouterr().out
        doc = json.loads(report_path.read_text())
        assert doc["witness_pair"] == [1, 2]
        assert doc["witness_good"] == 2

    def test_pmms_example(self, capsys):
        assert run("tight-example", "pmms-appendix-b") == 0
        out = capsys.readouterr().out
        assert "PMMS ratio = 5/6" in out

    def test_labase_without_gamma_fails(self, capsys):
        assert run("tight-example", "labase-appendix-a") == 2


class TestCurve:
    def test_csv_and_figure(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        assert run("curve", "efx", "--steps", 20, "--out", out) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "gamma,factor"
        assert len(lines) == 21
        last_gamma, last_factor = lines[-1].split(",")
        assert float(last_gamma) == 1.0 and float(last_factor) == 1.0
        assert (tmp_path / "curve.png").exists()

    def test_explicit_plot_path(self, tmp_path):
        png = tmp_path / "fig.png"
        assert run("curve", "pmms", "--steps", 6, "--out", tmp_path / "c.csv",
                   "--plot", png) == 0
        assert png.exists()

    def test_stdout_mode(self, capsys):
        assert run("curve", "tefx", "--steps", 4) == 0
        out = capsys.readouterr().out
        assert out.startswith("gamma,factor")


def test_tie_profile_parsing():
    assert parse_tie_profile("appendix-a") == TiePolicy(good="lowest", agent="lowest",
                                                        source="highest")
    assert parse_tie_profile("good=highest,source=highest") == \
        TiePolicy(good="highest", agent="lowest", source="highest")
    import argparse
    with pytest.raises(argparse.ArgumentTypeError):
        parse_tie_profile("good=middle")
