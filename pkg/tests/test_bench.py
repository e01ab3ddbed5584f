"""Benchmark metrics, accounting, and the suite runner's artifacts."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from netpricing import (
    BMNPP,
    ConfigError,
    GenParams,
    PmStats,
    cross_model_gap,
    gain_over_sp,
    generate,
    ladder_exact,
    load_config,
    opt_gap,
    pm_accounting,
    read_runs_csv,
    records_from_csv,
    run_suite,
    save_instance,
    summarise,
)


class TestGapMetrics:
    def test_opt_gap_basic(self):
        assert opt_gap(90, 100) == pytest.approx(10.0)
        assert opt_gap(100, 100) == 0.0

    def test_opt_gap_undefined_for_nonpositive_reference(self):
        assert opt_gap(0, 0) is None
        assert opt_gap(5, -1) is None

    def test_gain_over_sp_oracle_pair(self):
        assert gain_over_sp(Fraction(1600), Fraction(1400)) == pytest.approx(
            14.29, abs=0.005
        )

    def test_gain_over_sp_same_is_zero(self):
        assert gain_over_sp(1400, 1400) == 0.0

    def test_gain_over_sp_undefined_at_zero(self):
        assert gain_over_sp(100, 0) is None


class TestPmAccounting:
    def test_all_war(self, tiny_disjoint):
        stats = pm_accounting(tiny_disjoint, (900, 700))
        assert (stats.pm_count, stats.pw_count) == (0, 2)
        assert stats.d_pw == Fraction(200)
        assert stats.r_pw == Fraction(1600)
        assert stats.d_pm_pct == 0.0

    def test_mixed_regimes(self, tiny_disjoint):
        stats = pm_accounting(tiny_disjoint, (1000, 700))
        assert (stats.pm_count, stats.pw_count) == (1, 1)
        assert stats.d_pm == Fraction(50)
        assert stats.r_pm == Fraction(500)
        assert stats.r_pm_pct + stats.r_pw_pct == pytest.approx(100.0)

    def test_empty_when_nothing_sold(self, tiny_disjoint):
        stats = pm_accounting(tiny_disjoint, (2500, 2500))
        assert stats == PmStats(0, 0, Fraction(0), Fraction(0), Fraction(0), Fraction(0))
        assert stats.r_pm_pct == 0.0


class TestCrossModelGap:
    def test_nonnegative_on_twin_prices(self):
        # Price the fixed-fraction twin optimally, then measure how much
        # logit revenue those prices leave on the table.
        kwargs = dict(
            n_outlets=3,
            n_demands=5,
            density=0.7,
            seed=11,
            grid_min="0",
            grid_max="10",
            grid_step="1",
        )
        logit = generate(GenParams(model=BMNPP, **kwargs))
        twin = generate(GenParams(model="mnpp", **kwargs))
        twin_prices = ladder_exact(twin)[2]
        gap = cross_model_gap(logit, twin_prices)
        assert gap is not None and gap >= -1e-9

    def test_zero_at_own_optimum(self):
        from netpricing import brute_force

        inst = generate(
            GenParams(
                model=BMNPP,
                n_outlets=2,
                n_demands=3,
                density=1.0,
                seed=2,
                grid_min="0",
                grid_max="10",
                grid_step="1",
            )
        )
        best, prices = brute_force(inst)
        gap = cross_model_gap(inst, prices, best_revenue=best)
        assert gap == pytest.approx(0.0, abs=1e-12)


def suite_config(**overrides):
    config = {
        "suite_id": "t",
        "algorithms": ["sp", "order", "fi"],
        "exact": "brute",
        "instances": {
            "generate": [
                {
                    "model": "mnpp",
                    "outlets": 3,
                    "demands": 4,
                    "density": 0.7,
                    "seeds": [0, 1],
                    "grid_max": "10",
                    "grid_step": "1",
                }
            ]
        },
    }
    config.update(overrides)
    return config


class TestLoadConfig:
    def test_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"algorithms": ["sp"], "surprise": 1}))
        with pytest.raises(ConfigError) as err:
            load_config(path)
        assert "surprise" in str(err.value)

    def test_rejects_non_object(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_rejects_bad_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{nope")
        with pytest.raises(ConfigError):
            load_config(path)


class TestRunSuite:
    def test_artifacts_and_statuses(self, tmp_path):
        paths = run_suite(suite_config(), tmp_path / "out")
        records = records_from_csv(paths["runs"])
        assert len(records) == 6
        assert all(r.status == "ok" for r in records)
        assert Path(paths["summary"]).read_text().startswith("suite t:")

    def test_gap_invariants(self, tmp_path):
        paths = run_suite(suite_config(), tmp_path / "out")
        for rec in records_from_csv(paths["runs"]):
            assert rec.opt_gap_pct is None or rec.opt_gap_pct >= -1e-9
            if rec.pm is not None and (float(rec.pm.r_pm) + float(rec.pm.r_pw)) > 0:
                assert rec.pm.r_pm_pct + rec.pm.r_pw_pct == pytest.approx(100.0)

    def test_deterministic_artifacts(self, tmp_path):
        p1 = run_suite(suite_config(), tmp_path / "a")
        p2 = run_suite(suite_config(), tmp_path / "b")
        for key in ("runs", "summary", "long"):
            assert Path(p1[key]).read_bytes() == Path(p2[key]).read_bytes()

    def test_parallel_matches_serial(self, tmp_path):
        p1 = run_suite(suite_config(), tmp_path / "a", jobs=1)
        p2 = run_suite(suite_config(), tmp_path / "b", jobs=2)
        assert Path(p1["runs"]).read_bytes() == Path(p2["runs"]).read_bytes()

    def test_wall_time_column_is_opt_in(self, tmp_path):
        cold = run_suite(suite_config(), tmp_path / "a")
        hot = run_suite(suite_config(record_times=True), tmp_path / "b")
        cold_header = Path(cold["runs"]).read_text().splitlines()[1]
        hot_header = Path(hot["runs"]).read_text().splitlines()[1]
        assert "wall_time" not in cold_header
        assert "wall_time" in hot_header

    def test_missing_algorithms_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            run_suite(suite_config(algorithms=[]), tmp_path / "out")

    def test_unknown_algorithm_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            run_suite(suite_config(algorithms=["anneal"]), tmp_path / "out")

    def test_no_instances_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            run_suite(suite_config(instances={"generate": []}), tmp_path / "out")

    def test_instance_files_mode(self, tmp_path, tiny_disjoint):
        inst_path = tmp_path / "tiny.json"
        save_instance(tiny_disjoint, inst_path)
        config = suite_config(instances={"files": ["tiny.json"]})
        paths = run_suite(config, tmp_path / "out", base_dir=tmp_path)
        records = records_from_csv(paths["runs"])
        assert {r.instance_id for r in records} == {"tiny"}
        fi = next(r for r in records if r.algorithm == "fi")
        assert float(fi.revenue) == 1600.0

    def test_mip_without_solver_marked_unavailable(self, tmp_path, monkeypatch):
        monkeypatch.delenv("NETPRICING_SOLVER_CMD", raising=False)
        config = suite_config(algorithms=["ip2"])
        paths = run_suite(config, tmp_path / "out")
        records = records_from_csv(paths["runs"])
        assert all(r.status == "unavailable" for r in records)


class TestCsvRoundTrip:
    def test_records_survive_the_csv(self, tmp_path):
        paths = run_suite(suite_config(), tmp_path / "out")
        records = records_from_csv(paths["runs"])
        rows = read_runs_csv(paths["runs"])
        assert len(rows) == len(records)
        assert summarise(records)  # grouping works on rebuilt records

    def test_summary_means_recomputable(self, tmp_path):
        paths = run_suite(suite_config(), tmp_path / "out")
        records = records_from_csv(paths["runs"])
        rows = summarise(records)
        assert rows
        for row in rows:
            group = [
                r
                for r in records
                if (r.model, r.n_demands, r.n_outlets, round(r.density, 4), r.algorithm)
                == (
                    row["model"],
                    row["n_demands"],
                    row["n_outlets"],
                    row["density"],
                    row["algorithm"],
                )
                and r.status == "ok"
            ]
            assert len(group) == row["ok"]
            gaps = [r.opt_gap_pct for r in group if r.opt_gap_pct is not None]
            if gaps:
                assert row["mean_opt_gap_pct"] == pytest.approx(sum(gaps) / len(gaps))
