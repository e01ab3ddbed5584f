"""Benchmark orchestration, gap metrics, and price-match accounting.

run_suite executes a config-driven grid of (instance, algorithm) runs and
writes three artifacts into an output directory:

* <suite>.runs.csv     one row per run, full metric set
* <suite>.summary.txt  group means in the (nodes, outlets, density) grid
* <suite>.long.csv     tidy (run, metric, value) rows for plotting

Outputs are deterministic for a fixed config: rows follow config order,
numbers are rendered canonically, and wall times are only recorded when
the config opts in (timing is measurement noise, not a result).
Failures are isolated per run; a run that times out or errors is recorded
with its status and the suite continues.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import exact as exact_mod
from .heuristics import ALGORITHMS, HeuristicTimeout, run_algorithm, single_price
from .instgen import GenParams, generate, instance_label, load_instance
from .model import (
    BMNPP,
    PM,
    Instance,
    demand_at,
    evaluate_prices,
    zero_revenue,
)
from .money import (
    MONEY_SCALE,
    Money,
    MoneyError,
    money_str,
    money_unit,
    number_str,
    parse_money,
)

RUNS_SCHEMA = "netpricing-runs-v1"
LONG_SCHEMA = "netpricing-long-v1"

MIP_ALGORITHMS = ("ip1", "ip2")

STATUS_OK = "ok"
STATUS_TIMEOUT = "timeout"
STATUS_ERROR = "error"
STATUS_UNAVAILABLE = "unavailable"


class ConfigError(ValueError):
    """Malformed benchmark configuration."""


def opt_gap(revenue, best) -> Optional[float]:
    """Percent left on the table against a reference optimum.

    100 * (best - revenue) / best; None when the reference is not positive
    (the ratio would be meaningless).
    """
    best = float(best)
    if best <= 0:
        return None
    return 100.0 * (best - float(revenue)) / best


def gain_over_sp(revenue, sp_revenue) -> Optional[float]:
    """Percent improvement over the uniform-price score, None at zero."""
    sp_revenue = float(sp_revenue)
    if sp_revenue == 0:
        return None
    return 100.0 * (float(revenue) - sp_revenue) / sp_revenue


@dataclass(frozen=True)
class PmStats:
    """Captured-demand split between price matches and price wars."""

    pm_count: int
    pw_count: int
    d_pm: object
    d_pw: object
    r_pm: object
    r_pw: object

    @property
    def d_pm_pct(self) -> float:
        total = float(self.d_pm) + float(self.d_pw)
        return 100.0 * float(self.d_pm) / total if total > 0 else 0.0

    @property
    def d_pw_pct(self) -> float:
        total = float(self.d_pm) + float(self.d_pw)
        return 100.0 * float(self.d_pw) / total if total > 0 else 0.0

    @property
    def r_pm_pct(self) -> float:
        total = float(self.r_pm) + float(self.r_pw)
        return 100.0 * float(self.r_pm) / total if total > 0 else 0.0

    @property
    def r_pw_pct(self) -> float:
        total = float(self.r_pm) + float(self.r_pw)
        return 100.0 * float(self.r_pw) / total if total > 0 else 0.0


def pm_accounting(
    inst: Instance,
    prices,
    model_override: Optional[str] = None,
) -> PmStats:
    """Classify each served demand node as a price match or a price war."""
    model = model_override or inst.model
    _, assignment, labels = evaluate_prices(inst, prices, model_override)
    zero = zero_revenue(model)
    d_pm = d_pw = zero
    r_pm = r_pw = zero
    pm_count = pw_count = 0
    for e, f in assignment.items():
        price = prices[f]
        volume = demand_at(inst, e, f, price, model)
        if model == BMNPP:
            money = (price / MONEY_SCALE) * volume
        else:
            money = money_unit(price) * volume
        if labels[e] == PM:
            pm_count += 1
            d_pm += volume
            r_pm += money
        else:
            pw_count += 1
            d_pw += volume
            r_pw += money
    return PmStats(pm_count, pw_count, d_pm, d_pw, r_pm, r_pw)


def cross_model_gap(
    inst: Instance,
    prices,
    best_revenue=None,
) -> Optional[float]:
    """Logit revenue lost by using prices tuned for fixed-fraction demand.

    inst must carry logit coefficients; prices come from solving its
    fixed-fraction twin. best_revenue defaults to the ordering-enumeration
    optimum of the logit instance.
    """
    achieved, _, _ = evaluate_prices(inst, prices, model_override=BMNPP)
    if best_revenue is None:
        best_revenue, _, _ = exact_mod.ladder_exact(inst)
    best_revenue = float(best_revenue)
    if best_revenue <= 0:
        return None
    return 100.0 * (best_revenue - float(achieved)) / best_revenue


@dataclass
class RunRecord:
    instance_id: str
    model: str
    n_outlets: int
    n_demands: int
    density: float
    algorithm: str
    status: str
    revenue: object = None
    prices: Optional[tuple[Money, ...]] = None
    wall_time: Optional[float] = None
    pm: Optional[PmStats] = None
    r_opt: object = None
    r_sp: object = None
    message: str = ""

    @property
    def opt_gap_pct(self) -> Optional[float]:
        if self.revenue is None or self.r_opt is None:
            return None
        return opt_gap(self.revenue, self.r_opt)

    @property
    def gain_over_sp_pct(self) -> Optional[float]:
        if self.revenue is None or self.r_sp is None:
            return None
        return gain_over_sp(self.revenue, self.r_sp)


_CONFIG_KEYS = (
    "suite_id",
    "instances",
    "algorithms",
    "exact",
    "time_limit",
    "solver_cmd",
    "solver_time_limit",
    "record_times",
    "pi",
    "sp_include_match",
    "order_prefer_max",
)


def load_config(path) -> dict:
    path = Path(path)
    try:
        config = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    for key in config:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}: unknown config field {key!r}")
    return config


def _config_instances(config: dict, base_dir: Path) -> list[tuple[str, Instance]]:
    spec = config.get("instances")
    if not isinstance(spec, dict):
        raise ConfigError("config needs an 'instances' object")
    for key in spec:
        if key not in ("files", "generate"):
            raise ConfigError(f"instances: unknown field {key!r}")
    out: list[tuple[str, Instance]] = []
    for entry in spec.get("files", []):
        path = Path(entry)
        if not path.is_absolute():
            path = base_dir / path
        inst = load_instance(path)
        out.append((path.stem, inst))
    for block in spec.get("generate", []):
        if not isinstance(block, dict):
            raise ConfigError("instances.generate entries must be objects")
        allowed = {
            "model",
            "outlets",
            "demands",
            "density",
            "seeds",
            "grid_min",
            "grid_max",
            "grid_step",
            "pi",
            "beta",
            "gamma",
        }
        for key in block:
            if key not in allowed:
                raise ConfigError(f"instances.generate: unknown field {key!r}")
        seeds = block.get("seeds", [0])
        for seed in seeds:
            params = GenParams(
                model=block.get("model", "mnpp"),
                n_outlets=block.get("outlets", 5),
                n_demands=block.get("demands", 15),
                density=block.get("density", 0.5),
                seed=seed,
                grid_min=str(block.get("grid_min", "0")),
                grid_max=str(block.get("grid_max", "25")),
                grid_step=str(block.get("grid_step", "0.5")),
                beta=str(block.get("beta", "0.5")),
                gamma=str(block.get("gamma", "1")),
                pi=block.get("pi"),
            )
            inst = generate(params)
            out.append((instance_label(inst), inst))
    if not out:
        raise ConfigError("config selects no instances")
    return out


def _run_one(
    inst: Instance,
    algorithm: str,
    solver_cmd: Optional[str],
    time_limit: Optional[float],
    solver_time_limit: Optional[float],
    pi: Optional[Money],
    sp_include_match: bool,
    order_prefer_max: bool,
) -> dict:
    """One (instance, algorithm) execution; returns plain fields."""
    import time as _time

    from .mip import (
        FEASIBLE_TIMEOUT,
        OPTIMAL,
        SolverUnavailable,
        resolve_adapter,
        solve_ip,
    )

    t0 = _time.perf_counter()
    try:
        if algorithm in MIP_ALGORITHMS:
            adapter = resolve_adapter(solver_cmd)
            if adapter is None:
                raise SolverUnavailable("mip algorithms need a solver adapter")
            outcome, prices = solve_ip(
                inst, algorithm, adapter, time_limit=solver_time_limit or time_limit
            )
            wall = _time.perf_counter() - t0
            if outcome.status == OPTIMAL:
                status = STATUS_OK
            elif outcome.status == FEASIBLE_TIMEOUT:
                status = STATUS_TIMEOUT
            else:
                return {
                    "status": STATUS_ERROR,
                    "message": f"{outcome.status}: {outcome.message}",
                    "wall_time": wall,
                }
            return {
                "status": status,
                "revenue": outcome.objective,
                "prices": prices,
                "wall_time": wall,
            }
        adapter = resolve_adapter(solver_cmd)
        result = run_algorithm(
            inst,
            algorithm,
            pi=pi,
            time_limit=time_limit,
            adapter=adapter,
            solver_time_limit=solver_time_limit,
            sp_include_match=sp_include_match,
            order_prefer_max=order_prefer_max,
        )
        return {
            "status": STATUS_OK,
            "revenue": result.revenue,
            "prices": result.prices,
            "wall_time": result.wall_time,
        }
    except HeuristicTimeout as exc:
        return {
            "status": STATUS_TIMEOUT,
            "message": str(exc),
            "wall_time": _time.perf_counter() - t0,
        }
    except SolverUnavailable as exc:
        return {"status": STATUS_UNAVAILABLE, "message": str(exc)}
    except Exception as exc:  # isolate per-run failures
        return {"status": STATUS_ERROR, "message": f"{type(exc).__name__}: {exc}"}


def _pool_task(args):
    return _run_one(*args)


def run_suite(config: dict, out_dir, jobs: int = 1, base_dir=None) -> dict:
    """Execute a benchmark config; returns paths of the written artifacts."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
    suite_id = str(config.get("suite_id", "suite"))
    algorithms = config.get("algorithms")
    if not isinstance(algorithms, list) or not algorithms:
        raise ConfigError("config needs a non-empty 'algorithms' list")
    for alg in algorithms:
        if alg not in ALGORITHMS and alg not in MIP_ALGORITHMS:
            raise ConfigError(f"unknown algorithm {alg!r}")
    exact_method = config.get("exact")
    if exact_method not in (None, "ladder", "brute"):
        raise ConfigError("config 'exact' must be 'ladder', 'brute', or null")
    record_times = bool(config.get("record_times", False))
    time_limit = config.get("time_limit")
    solver_time_limit = config.get("solver_time_limit")
    solver_cmd = config.get("solver_cmd")
    try:
        pi = None if config.get("pi") is None else parse_money(config["pi"])
    except MoneyError as exc:
        raise ConfigError(f"config 'pi': {exc}") from exc
    sp_include_match = bool(config.get("sp_include_match", False))
    order_prefer_max = bool(config.get("order_prefer_max", False))

    instances = _config_instances(config, base_dir)

    # Reference scores are computed once per instance, in config order.
    references: dict[str, dict] = {}
    for iid, inst in instances:
        _, sp_rev = single_price(inst, include_match=sp_include_match)
        ref = {"r_sp": sp_rev, "r_opt": None}
        if exact_method == "ladder":
            ref["r_opt"], _, _ = exact_mod.ladder_exact(inst)
        elif exact_method == "brute":
            ref["r_opt"], _ = exact_mod.brute_force(inst)
        references[iid] = ref

    tasks = [
        (
            inst,
            alg,
            solver_cmd,
            time_limit,
            solver_time_limit,
            pi,
            sp_include_match,
            order_prefer_max,
        )
        for _, inst in instances
        for alg in algorithms
    ]
    keys = [(iid, alg) for iid, _ in instances for alg in algorithms]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_pool_task, tasks))
    else:
        raw = [_run_one(*task) for task in tasks]

    by_id = {iid: inst for iid, inst in instances}
    records: list[RunRecord] = []
    for (iid, alg), fields in zip(keys, raw):
        inst = by_id[iid]
        rec = RunRecord(
            instance_id=iid,
            model=inst.model,
            n_outlets=inst.n_outlets,
            n_demands=inst.n_demands,
            density=inst.density,
            algorithm=alg,
            status=fields["status"],
            revenue=fields.get("revenue"),
            prices=fields.get("prices"),
            wall_time=fields.get("wall_time"),
            message=fields.get("message", ""),
            r_opt=references[iid]["r_opt"],
            r_sp=references[iid]["r_sp"],
        )
        if rec.prices is not None:
            rec.pm = pm_accounting(inst, rec.prices)
        records.append(rec)

    paths = {
        "runs": out_dir / f"{suite_id}.runs.csv",
        "summary": out_dir / f"{suite_id}.summary.txt",
        "long": out_dir / f"{suite_id}.long.csv",
    }
    write_runs_csv(paths["runs"], records, record_times=record_times)
    write_summary(paths["summary"], f"suite {suite_id}", records)
    write_long_csv(paths["long"], records)
    return paths


_RUNS_COLUMNS = (
    "instance",
    "model",
    "n_outlets",
    "n_demands",
    "density",
    "algorithm",
    "status",
    "revenue",
    "r_opt",
    "r_sp",
    "opt_gap_pct",
    "gain_over_sp_pct",
    "pm_count",
    "pw_count",
    "d_pm",
    "d_pw",
    "d_pm_pct",
    "r_pm",
    "r_pw",
    "r_pm_pct",
    "prices",
    "message",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return number_str(value)


def write_runs_csv(path, records, record_times: bool = False):
    path = Path(path)
    columns = _RUNS_COLUMNS + (("wall_time",) if record_times else ())
    with open(path, "w", encoding="utf-8", newline="") as out:
        out.write(f"# {RUNS_SCHEMA}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            row = [
                rec.instance_id,
                rec.model,
                rec.n_outlets,
                rec.n_demands,
                f"{rec.density:.4f}",
                rec.algorithm,
                rec.status,
                _fmt(rec.revenue),
                _fmt(rec.r_opt),
                _fmt(rec.r_sp),
                _fmt(rec.opt_gap_pct),
                _fmt(rec.gain_over_sp_pct),
                rec.pm.pm_count if rec.pm else "",
                rec.pm.pw_count if rec.pm else "",
                _fmt(rec.pm.d_pm) if rec.pm else "",
                _fmt(rec.pm.d_pw) if rec.pm else "",
                _fmt(rec.pm.d_pm_pct) if rec.pm else "",
                _fmt(rec.pm.r_pm) if rec.pm else "",
                _fmt(rec.pm.r_pw) if rec.pm else "",
                _fmt(rec.pm.r_pm_pct) if rec.pm else "",
                " ".join(money_str(p) for p in rec.prices) if rec.prices else "",
                rec.message,
            ]
            if record_times:
                row.append(_fmt(rec.wall_time))
            writer.writerow(row)


def write_long_csv(path, records):
    path = Path(path)
    metrics = (
        ("revenue", lambda r: r.revenue),
        ("opt_gap_pct", lambda r: r.opt_gap_pct),
        ("gain_over_sp_pct", lambda r: r.gain_over_sp_pct),
        ("pm_count", lambda r: r.pm.pm_count if r.pm else None),
        ("d_pm_pct", lambda r: r.pm.d_pm_pct if r.pm else None),
        ("r_pm_pct", lambda r: r.pm.r_pm_pct if r.pm else None),
    )
    with open(path, "w", encoding="utf-8", newline="") as out:
        out.write(f"# {LONG_SCHEMA}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            (
                "instance",
                "model",
                "n_outlets",
                "n_demands",
                "density",
                "algorithm",
                "metric",
                "value",
            )
        )
        for rec in records:
            for name, getter in metrics:
                value = getter(rec)
                if value is None:
                    continue
                writer.writerow(
                    (
                        rec.instance_id,
                        rec.model,
                        rec.n_outlets,
                        rec.n_demands,
                        f"{rec.density:.4f}",
                        rec.algorithm,
                        name,
                        _fmt(value),
                    )
                )


def _mean(values) -> Optional[float]:
    values = [float(v) for v in values if v is not None]
    return float(np.mean(values)) if values else None


def summarise(records) -> list[dict]:
    """Group means in the (model, nodes, outlets, density) grid."""
    groups: dict[tuple, list[RunRecord]] = {}
    for rec in records:
        key = (rec.model, rec.n_demands, rec.n_outlets, round(rec.density, 4))
        groups.setdefault(key, []).append(rec)
    rows = []
    for key in sorted(groups):
        model, n_demands, n_outlets, density = key
        by_alg: dict[str, list[RunRecord]] = {}
        for rec in groups[key]:
            by_alg.setdefault(rec.algorithm, []).append(rec)
        for alg in sorted(by_alg):
            recs = by_alg[alg]
            done = [r for r in recs if r.status == STATUS_OK]
            rows.append(
                {
                    "model": model,
                    "n_demands": n_demands,
                    "n_outlets": n_outlets,
                    "density": density,
                    "algorithm": alg,
                    "runs": len(recs),
                    "ok": len(done),
                    "timeouts": sum(1 for r in recs if r.status == STATUS_TIMEOUT),
                    "mean_opt_gap_pct": _mean(r.opt_gap_pct for r in done),
                    "mean_gain_over_sp_pct": _mean(
                        r.gain_over_sp_pct for r in done
                    ),
                    "mean_pm_count": _mean(
                        r.pm.pm_count for r in done if r.pm is not None
                    ),
                    "mean_d_pm_pct": _mean(
                        r.pm.d_pm_pct for r in done if r.pm is not None
                    ),
                    "mean_r_pm_pct": _mean(
                        r.pm.r_pm_pct for r in done if r.pm is not None
                    ),
                }
            )
    return rows


def write_summary(path, title: str, records):
    path = Path(path)
    rows = summarise(records)
    col = (
        f"{'model':<6} {'N':>3} {'O':>3} {'dens':>6} {'alg':<8} {'runs':>4} "
        f"{'ok':>3} {'t/o':>3} {'gap%':>9} {'gainSP%':>9} {'PM#':>7} "
        f"{'dPM%':>7} {'rPM%':>7}"
    )
    lines = [f"{title}: {len(records)} runs", col, "-" * len(col)]

    def cell(value, width, digits=2):
        return f"{'':>{width}}" if value is None else f"{value:>{width}.{digits}f}"

    for row in rows:
        lines.append(
            f"{row['model']:<6} {row['n_demands']:>3} {row['n_outlets']:>3} "
            f"{row['density']:>6.2f} {row['algorithm']:<8} {row['runs']:>4} "
            f"{row['ok']:>3} {row['timeouts']:>3} "
            f"{cell(row['mean_opt_gap_pct'], 9)} "
            f"{cell(row['mean_gain_over_sp_pct'], 9)} "
            f"{cell(row['mean_pm_count'], 7)} "
            f"{cell(row['mean_d_pm_pct'], 7)} "
            f"{cell(row['mean_r_pm_pct'], 7)}"
        )
    if any(r.model == BMNPP and r.algorithm == "sp" for r in records):
        lines.append(
            "note: sp scores undercut revenue with the best outlet per node; "
            "under logit demand an equal-priced tie may serve a different "
            "outlet than the lowest-id rule used everywhere else."
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_runs_csv(path) -> list[dict]:
    """Read a runs CSV back into dict rows (strings as written)."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as handle:
        first = handle.readline()
        if not first.startswith("#"):
            raise ConfigError(f"{path}: missing schema comment line")
        if RUNS_SCHEMA not in first:
            raise ConfigError(f"{path}: unsupported schema {first.strip()!r}")
        return list(csv.DictReader(handle))


def _csv_number(text: str):
    from .money import parse_fraction

    if text is None or text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return float(parse_fraction(text))


def records_from_csv(path) -> list[RunRecord]:
    """Rebuild summarisable records from a runs CSV."""
    records = []
    for row in read_runs_csv(path):
        rec = RunRecord(
            instance_id=row["instance"],
            model=row["model"],
            n_outlets=int(row["n_outlets"]),
            n_demands=int(row["n_demands"]),
            density=float(row["density"]),
            algorithm=row["algorithm"],
            status=row["status"],
            revenue=_csv_number(row["revenue"]),
            r_opt=_csv_number(row["r_opt"]),
            r_sp=_csv_number(row["r_sp"]),
            message=row.get("message", ""),
        )
        if row["pm_count"] != "":
            rec.pm = PmStats(
                pm_count=int(row["pm_count"]),
                pw_count=int(row["pw_count"]),
                d_pm=_csv_number(row["d_pm"]),
                d_pw=_csv_number(row["d_pw"]),
                r_pm=_csv_number(row["r_pm"]),
                r_pw=_csv_number(row["r_pw"]),
            )
        records.append(rec)
    return records
