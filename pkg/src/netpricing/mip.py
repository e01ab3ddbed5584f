"""Mixed-integer formulations, LP text export, and external solving.

Two formulations of the same pricing problem:

* build_ip1: continuous outlet prices with big-M regime indicators per
  demand node. Fixed-fraction demand only; its revenue linearisation has
  no finite-coefficient counterpart for logit shares.
* build_ip2: one binary per (outlet, grid price) level plus purchase
  binaries per (node, outlet, price). Works for both demand models since
  demand enters only through coefficients.

Models are held in a small solver-agnostic IR (LinearModel) that can be
written as LP text and read back by this module's own reader; the writer
output is byte-stable for fixed inputs.

External solving goes through a SolverAdapter holding a command template
with {model}, {solution}, and {seconds} placeholders. The command must
write a solution file of "name value" lines (absent variables read as 0)
and exit 0 when optimal, 2 on a time limit, and 3 when infeasible. The
builtin adapter runs the bundled scipy/HiGHS backend (netpricing.lpsolve).
"""

from __future__ import annotations

import os
import re
import shlex
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .model import (
    MNPP,
    Instance,
    adjacency,
    demand_at,
    price_below,
)
from .money import MONEY_SCALE, Money, money_float

CONTINUOUS = "continuous"
BINARY = "binary"

OPTIMAL = "optimal"
FEASIBLE_TIMEOUT = "feasible-timeout"
INFEASIBLE = "infeasible"
ERROR = "error"

BUILTIN_SOLVER = "builtin"
SOLVER_ENV_VAR = "NETPRICING_SOLVER_CMD"

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]{0,254}$")


class ModelError(ValueError):
    """Malformed linear model construction."""


class SolverUnavailable(RuntimeError):
    """An operation needed an external solver and none was configured."""


class SolutionParseError(ValueError):
    """A solution file did not follow the "name value" line format."""


class LpParseError(ValueError):
    """LP text did not follow the dialect this module writes."""


@dataclass
class Variable:
    name: str
    lb: Optional[float]
    ub: Optional[float]
    kind: str = CONTINUOUS


@dataclass
class Row:
    name: str
    terms: tuple[tuple[str, float], ...]
    sense: str  # "<=", ">=", "="
    rhs: float


@dataclass
class LinearModel:
    """Maximisation model over named variables.

    meta carries builder bookkeeping (variable roles keyed by name) and is
    excluded from equality so written-then-read models compare equal.
    """

    variables: list[Variable] = field(default_factory=list)
    constraints: list[Row] = field(default_factory=list)
    objective: tuple[tuple[str, float], ...] = ()
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._by_name = {v.name: v for v in self.variables}
        self._row_names = {r.name for r in self.constraints}

    def add_var(
        self,
        name: str,
        lb: Optional[float] = 0.0,
        ub: Optional[float] = None,
        kind: str = CONTINUOUS,
        role: Optional[tuple] = None,
    ) -> str:
        if not _NAME_RE.match(name):
            raise ModelError(f"bad variable name {name!r}")
        if name in self._by_name:
            raise ModelError(f"duplicate variable {name!r}")
        if kind not in (CONTINUOUS, BINARY):
            raise ModelError(f"unknown variable kind {kind!r}")
        if kind == BINARY:
            lb, ub = 0.0, 1.0
        var = Variable(name, lb, ub, kind)
        self.variables.append(var)
        self._by_name[name] = var
        if role is not None:
            self.meta[name] = role
        return name

    def add_constr(
        self,
        name: str,
        terms: Sequence[tuple[str, float]],
        sense: str,
        rhs: float,
    ):
        if not _NAME_RE.match(name):
            raise ModelError(f"bad constraint name {name!r}")
        if name in self._row_names:
            raise ModelError(f"duplicate constraint {name!r}")
        if sense not in ("<=", ">=", "="):
            raise ModelError(f"unknown sense {sense!r}")
        kept = []
        for var, coef in terms:
            if var not in self._by_name:
                raise ModelError(f"constraint {name!r} references unknown {var!r}")
            coef = float(coef)
            if coef != 0.0:
                kept.append((var, coef))
        self.constraints.append(Row(name, tuple(kept), sense, float(rhs)))
        self._row_names.add(name)

    def set_objective(self, terms: Sequence[tuple[str, float]]):
        kept = []
        for var, coef in terms:
            if var not in self._by_name:
                raise ModelError(f"objective references unknown {var!r}")
            coef = float(coef)
            if coef != 0.0:
                kept.append((var, coef))
        self.objective = tuple(kept)

    def variable(self, name: str) -> Variable:
        return self._by_name[name]

    def objective_value(self, values: dict[str, float]) -> float:
        return sum(coef * values.get(name, 0.0) for name, coef in self.objective)


def _big_m(inst: Instance) -> float:
    return money_float(inst.grid.max) + 1.0


def build_ip1(inst: Instance) -> LinearModel:
    """Continuous-price formulation with per-node regime indicators.

    Demand node e carries a price copy x_e tied to its assigned outlet, a
    match revenue y_e active only when x_e equals the competitor price,
    and an undercut revenue z_e active only when x_e is at most the grid
    price just below it. Assigned outlets must be cheapest among the
    node's connections. Rejects logit instances.
    """
    if inst.model != MNPP:
        raise ModelError("the continuous-price formulation needs fixed-fraction demand")
    o_e, _, _ = adjacency(inst)
    m = LinearModel()
    big = _big_m(inst)
    pi_c = None if inst.pi is None else money_float(inst.pi)
    link = big if pi_c is None else pi_c

    for f in inst.outlets():
        m.add_var(f"x_f{f}", 0.0, big, role=("price", f))
    for node in inst.demands:
        e = node.id
        m.add_var(f"x_e{e}", 0.0, big, role=("node_price", e))
        for f in o_e[e]:
            m.add_var(f"mu_{e}_{f}", kind=BINARY, role=("assign", e, f))
        m.add_var(f"y_{e}", 0.0, None, role=("match_rev", e))
        m.add_var(f"z_{e}", 0.0, None, role=("war_rev", e))
        for k in range(1, 6):
            m.add_var(f"w{k}_{e}", kind=BINARY, role=("regime", e, k))

    m.set_objective(
        [(f"y_{node.id}", 1.0) for node in inst.demands]
        + [(f"z_{node.id}", 1.0) for node in inst.demands]
    )

    if pi_c is not None:
        # Spread cap applies to every posted price and every node's copy.
        entities = [(f"f{f}", f"x_f{f}") for f in inst.outlets()]
        entities += [(f"e{node.id}", f"x_e{node.id}") for node in inst.demands]
        for i in range(len(entities)):
            for j in range(i + 1, len(entities)):
                (tag_a, var_a), (tag_b, var_b) = entities[i], entities[j]
                m.add_constr(
                    f"diff_{tag_a}_{tag_b}_p",
                    [(var_a, 1.0), (var_b, -1.0)],
                    "<=",
                    pi_c,
                )
                m.add_constr(
                    f"diff_{tag_a}_{tag_b}_m",
                    [(var_b, 1.0), (var_a, -1.0)],
                    "<=",
                    pi_c,
                )

    for node in inst.demands:
        e = node.id
        outlets = o_e[e]
        mu = [f"mu_{e}_{f}" for f in outlets]
        if outlets:
            m.add_constr(f"assign_{e}", [(v, 1.0) for v in mu], "<=", 1.0)
            for f in outlets:
                # At most one assignment, and the assigned outlet carries
                # the node's price copy.
                m.add_constr(
                    f"link_lo_{e}_{f}",
                    [(f"x_e{e}", 1.0), (f"x_f{f}", -1.0), (f"mu_{e}_{f}", link)],
                    "<=",
                    link,
                )
                m.add_constr(
                    f"link_hi_{e}_{f}",
                    [(f"x_f{f}", 1.0), (f"x_e{e}", -1.0), (f"mu_{e}_{f}", link)],
                    "<=",
                    link,
                )
                for g in outlets:
                    if g == f:
                        continue
                    # Assignment only to a cheapest connected outlet.
                    m.add_constr(
                        f"cheapest_{e}_{f}_{g}",
                        [(f"x_f{f}", 1.0), (f"x_f{g}", -1.0), (f"mu_{e}_{f}", link)],
                        "<=",
                        link,
                    )

        c_e = money_float(node.c)
        cap_match = float(node.d * node.beta) * c_e
        m.add_constr(
            f"w1def_{e}",
            [(f"x_e{e}", -1.0), (f"w1_{e}", -big)],
            "<=",
            -c_e,
        )
        m.add_constr(
            f"w2def_{e}",
            [(f"x_e{e}", 1.0), (f"w2_{e}", -big)],
            "<=",
            c_e,
        )
        m.add_constr(
            f"match_cap_{e}",
            [(f"y_{e}", 1.0), (f"w3_{e}", -cap_match)],
            "<=",
            0.0,
        )
        m.add_constr(
            f"match_price_{e}",
            [(f"y_{e}", 1.0), (f"x_e{e}", -float(node.d * node.beta))],
            "<=",
            0.0,
        )
        m.add_constr(
            f"match_assigned_{e}",
            [(f"w3_{e}", 1.0)] + [(v, -1.0) for v in mu],
            "<=",
            0.0,
        )
        m.add_constr(
            f"regime_match_{e}",
            [(f"w1_{e}", 1.0), (f"w2_{e}", 1.0), (f"w3_{e}", 1.0)],
            "=",
            1.0,
        )

        below = price_below(inst.grid, node.c)
        if below is None:
            # No grid price undercuts this competitor; undercut revenue
            # stays at zero and the w4/w5 pair is forced to the idle side.
            m.variable(f"z_{e}").ub = 0.0
            m.add_constr(f"war_off_{e}", [(f"w5_{e}", 1.0)], "<=", 0.0)
        else:
            below_c = money_float(below)
            m.add_constr(
                f"w4def_{e}",
                [(f"x_e{e}", 1.0), (f"w4_{e}", -big)],
                "<=",
                below_c,
            )
            m.add_constr(
                f"war_cap_{e}",
                [(f"z_{e}", 1.0), (f"w5_{e}", -float(node.d * node.gamma) * below_c)],
                "<=",
                0.0,
            )
            m.add_constr(
                f"war_price_{e}",
                [(f"z_{e}", 1.0), (f"x_e{e}", -float(node.d * node.gamma))],
                "<=",
                0.0,
            )
        m.add_constr(
            f"war_assigned_{e}",
            [(f"w5_{e}", 1.0)] + [(v, -1.0) for v in mu],
            "<=",
            0.0,
        )
        m.add_constr(
            f"regime_war_{e}",
            [(f"w4_{e}", 1.0), (f"w5_{e}", 1.0)],
            "=",
            1.0,
        )
    return m


def build_ip2(inst: Instance, price_factor: bool = True) -> LinearModel:
    """Grid-indexed formulation: one binary per outlet price level.

    v_{f}_{m} picks outlet f's grid price; y_{e}_{f}_{m} marks node e
    buying from f at level m and exists only where the captured volume is
    positive. A purchase requires the chosen level and forbids any other
    connected outlet from sitting strictly cheaper. With price_factor the
    objective weighs captured volume by the price actually paid; without
    it the objective sums volumes alone (a historical scoring, kept
    selectable for comparison).
    """
    o_e, _, _ = adjacency(inst)
    m = LinearModel()
    grid = inst.grid.prices
    n_prices = len(grid)
    pi = inst.pi

    for f in inst.outlets():
        for level in range(n_prices):
            m.add_var(f"v_{f}_{level}", kind=BINARY, role=("price_level", f, level))
    obj = []
    purchases: dict[int, list[tuple[int, int]]] = {node.id: [] for node in inst.demands}
    for node in inst.demands:
        e = node.id
        for f in o_e[e]:
            for level in range(n_prices):
                vol = demand_at(inst, e, f, grid[level], inst.model)
                if vol <= 0:
                    continue
                name = m.add_var(
                    f"y_{e}_{f}_{level}", kind=BINARY, role=("buy", e, f, level)
                )
                weight = float(vol)
                if price_factor:
                    weight *= money_float(grid[level])
                obj.append((name, weight))
                purchases[e].append((f, level))
    m.set_objective(obj)

    for f in inst.outlets():
        m.add_constr(
            f"one_level_{f}",
            [(f"v_{f}_{level}", 1.0) for level in range(n_prices)],
            "=",
            1.0,
        )

    for node in inst.demands:
        e = node.id
        buys = purchases[e]
        if not buys:
            continue
        m.add_constr(
            f"one_buy_{e}",
            [(f"y_{e}_{f}_{level}", 1.0) for f, level in buys],
            "<=",
            1.0,
        )
        k = len(o_e[e])
        for f, level in buys:
            terms = [(f"v_{f}_{level}", 1.0)]
            for g in o_e[e]:
                if g == f:
                    continue
                for lower in range(n_prices):
                    if grid[lower] < grid[level]:
                        terms.append((f"v_{g}_{lower}", 1.0))
            # Buying forces the level on and no rival strictly cheaper.
            terms.append((f"y_{e}_{f}_{level}", float(k - 1)))
            m.add_constr(f"cheapest_{e}_{f}_{level}", terms, "<=", float(k))
            m.add_constr(
                f"uses_level_{e}_{f}_{level}",
                [(f"y_{e}_{f}_{level}", 1.0), (f"v_{f}_{level}", -1.0)],
                "<=",
                0.0,
            )

    if pi is not None:
        for f in inst.outlets():
            for g in range(f + 1, inst.n_outlets):
                for a in range(n_prices):
                    for b in range(n_prices):
                        if abs(grid[a] - grid[b]) > pi:
                            m.add_constr(
                                f"spread_{f}_{a}_{g}_{b}",
                                [(f"v_{f}_{a}", 1.0), (f"v_{g}_{b}", 1.0)],
                                "<=",
                                1.0,
                            )
    return m


def relax(model: LinearModel) -> LinearModel:
    """Continuous relaxation: binaries become [0, 1] continuous."""
    out = LinearModel(meta=dict(model.meta))
    for var in model.variables:
        if var.kind == BINARY:
            out.add_var(var.name, 0.0, 1.0, CONTINUOUS)
        else:
            out.add_var(var.name, var.lb, var.ub, var.kind)
    for row in model.constraints:
        out.add_constr(row.name, list(row.terms), row.sense, row.rhs)
    out.set_objective(list(model.objective))
    return out


def _num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _terms_text(terms: Sequence[tuple[str, float]]) -> str:
    parts = []
    for i, (name, coef) in enumerate(terms):
        mag = _num(abs(coef))
        if i == 0:
            parts.append(f"- {mag} {name}" if coef < 0 else f"{mag} {name}")
        else:
            parts.append(f"{'-' if coef < 0 else '+'} {mag} {name}")
    return " ".join(parts)


def lp_text(model: LinearModel) -> str:
    """Render the model in LP text form, deterministically."""
    lines = ["\\ netpricing linear model, lp dialect v1"]
    lines.append("Maximize")
    lines.append(f" obj: {_terms_text(model.objective)}".rstrip())
    lines.append("Subject To")
    for row in model.constraints:
        lines.append(f" {row.name}: {_terms_text(row.terms)} {row.sense} {_num(row.rhs)}")
    lines.append("Bounds")
    for var in model.variables:
        if var.lb is None and var.ub is None:
            lines.append(f" {var.name} free")
        elif var.lb is None:
            lines.append(f" {var.name} <= {_num(var.ub)}")
        elif var.ub is None:
            lines.append(f" {var.name} >= {_num(var.lb)}")
        elif var.lb == var.ub:
            lines.append(f" {var.name} = {_num(var.lb)}")
        else:
            lines.append(f" {_num(var.lb)} <= {var.name} <= {_num(var.ub)}")
    binaries = [v.name for v in model.variables if v.kind == BINARY]
    if binaries:
        lines.append("Binary")
        for name in binaries:
            lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(model: LinearModel, path) -> Path:
    path = Path(path)
    path.write_text(lp_text(model), encoding="utf-8", newline="\n")
    return path


_TOKEN_RE = re.compile(
    r"(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[A-Za-z_][A-Za-z0-9_]*|<=|>=|=|\+|-|:"
)


_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?$")


def _signed_number(tokens: list[str], where: str) -> float:
    """A number possibly split into a sign token and a magnitude token."""
    if len(tokens) == 1 and _NUMBER_RE.match(tokens[0]):
        return float(tokens[0])
    if (
        len(tokens) == 2
        and tokens[0] in ("+", "-")
        and _NUMBER_RE.match(tokens[1])
    ):
        return float(tokens[0] + tokens[1])
    raise LpParseError(f"{where}: expected a number, got {' '.join(tokens)!r}")


def _merge_signed(tokens: list[str]) -> list[str]:
    """Join a sign token onto a following number token (bounds lines only)."""
    out: list[str] = []
    i = 0
    while i < len(tokens):
        if (
            tokens[i] in ("+", "-")
            and i + 1 < len(tokens)
            and _NUMBER_RE.match(tokens[i + 1])
        ):
            out.append(tokens[i] + tokens[i + 1])
            i += 2
        else:
            out.append(tokens[i])
            i += 1
    return out


def _parse_terms(tokens: list[str], where: str) -> list[tuple[str, float]]:
    terms = []
    sign = 1.0
    coef = None
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "+":
            sign, coef = 1.0, None
        elif tok == "-":
            sign, coef = -1.0, None
        elif _NAME_RE.match(tok):
            terms.append((tok, sign * (1.0 if coef is None else coef)))
            sign, coef = 1.0, None
        else:
            try:
                coef = float(tok)
            except ValueError as exc:
                raise LpParseError(f"{where}: unexpected token {tok!r}") from exc
        i += 1
    return terms


def read_lp(source) -> LinearModel:
    """Parse the LP dialect written by lp_text back into a LinearModel."""
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = str(source)
    section = None
    objective: list[tuple[str, float]] = []
    rows: list[tuple[str, list, str, float]] = []
    bounds: list[tuple[str, Optional[float], Optional[float]]] = []
    binaries: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low == "maximize":
            section = "obj"
            continue
        if low == "subject to":
            section = "rows"
            continue
        if low == "bounds":
            section = "bounds"
            continue
        if low == "binary":
            section = "binary"
            continue
        if low == "end":
            section = "end"
            continue
        where = f"line {lineno}"
        if section == "obj":
            tokens = _TOKEN_RE.findall(line)
            if len(tokens) >= 2 and tokens[1] == ":":
                tokens = tokens[2:]
            objective = _parse_terms(tokens, where)
        elif section == "rows":
            tokens = _TOKEN_RE.findall(line)
            if len(tokens) < 2 or tokens[1] != ":":
                raise LpParseError(f"{where}: constraint without a name")
            name = tokens[0]
            tokens = tokens[2:]
            sense_at = next(
                (i for i, t in enumerate(tokens) if t in ("<=", ">=", "=")), None
            )
            if sense_at is None or sense_at >= len(tokens) - 1:
                raise LpParseError(f"{where}: expected 'terms sense rhs'")
            terms = _parse_terms(tokens[:sense_at], where)
            rhs = _signed_number(tokens[sense_at + 1 :], where)
            rows.append((name, terms, tokens[sense_at], rhs))
        elif section == "bounds":
            tokens = _merge_signed(_TOKEN_RE.findall(line))
            if len(tokens) == 2 and tokens[1] == "free":
                bounds.append((tokens[0], None, None))
            elif len(tokens) == 3 and tokens[1] == "<=":
                bounds.append((tokens[0], None, float(tokens[2])))
            elif len(tokens) == 3 and tokens[1] == ">=":
                bounds.append((tokens[0], float(tokens[2]), None))
            elif len(tokens) == 3 and tokens[1] == "=":
                v = float(tokens[2])
                bounds.append((tokens[0], v, v))
            elif len(tokens) == 5 and tokens[1] == "<=" and tokens[3] == "<=":
                bounds.append((tokens[2], float(tokens[0]), float(tokens[4])))
            else:
                raise LpParseError(f"{where}: unrecognised bounds line {line!r}")
        elif section == "binary":
            if not _NAME_RE.match(line):
                raise LpParseError(f"{where}: bad binary name {line!r}")
            binaries.append(line)
        elif section == "end":
            raise LpParseError(f"{where}: content after End")
        else:
            raise LpParseError(f"{where}: content before any section")
    model = LinearModel()
    binary_set = set(binaries)
    seen = set()
    ordered: list[tuple[str, Optional[float], Optional[float]]] = []
    for name, lb, ub in bounds:
        if name in seen:
            raise LpParseError(f"duplicate bounds for {name!r}")
        seen.add(name)
        ordered.append((name, lb, ub))
    mentioned = [name for name, _ in objective]
    for _, terms, _, _ in rows:
        mentioned.extend(name for name, _ in terms)
    for name in mentioned + binaries:
        if name not in seen:
            seen.add(name)
            ordered.append((name, 0.0, None))
    for name, lb, ub in ordered:
        kind = BINARY if name in binary_set else CONTINUOUS
        if kind == BINARY:
            model.add_var(name, kind=BINARY)
        else:
            model.add_var(name, lb, ub, kind)
    for name, terms, sense, rhs in rows:
        model.add_constr(name, terms, sense, rhs)
    model.set_objective(objective)
    return model


@dataclass(frozen=True)
class SolverAdapter:
    """External solver invocation: a shell-style command template.

    The template is split with shlex and each token formatted with the
    model path, solution path, and time limit in seconds. Example:

        cbc-wrapper.sh {model} {solution} {seconds}
    """

    command: str


def builtin_adapter() -> SolverAdapter:
    exe = shlex.quote(sys.executable)
    return SolverAdapter(f"{exe} -m netpricing.lpsolve {{model}} {{solution}} {{seconds}}")


def resolve_adapter(spec: Optional[str]) -> Optional[SolverAdapter]:
    """Map a command template, the builtin alias, or None to an adapter."""
    if spec is None:
        spec = os.environ.get(SOLVER_ENV_VAR)
    if spec is None or not str(spec).strip():
        return None
    if str(spec).strip() == BUILTIN_SOLVER:
        return builtin_adapter()
    return SolverAdapter(str(spec))


@dataclass
class SolveOutcome:
    status: str
    objective: Optional[float]
    values: dict[str, float]
    message: str = ""


def parse_solution(text: str, known: Optional[set] = None) -> dict[str, float]:
    """Parse "name value" lines; unknown names are dropped when known given."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionParseError(
                f"solution line {lineno}: expected 'name value', got {raw!r}"
            )
        name, value = parts
        try:
            parsed = float(value)
        except ValueError as exc:
            raise SolutionParseError(
                f"solution line {lineno}: bad value {value!r}"
            ) from exc
        if known is None or name in known:
            values[name] = parsed
    return values


def solve_external(
    model: LinearModel,
    adapter: Optional[SolverAdapter],
    time_limit: Optional[float] = None,
    workdir=None,
) -> SolveOutcome:
    """Solve a model through an adapter command; never fabricates results.

    The objective is always recomputed from the returned variable values,
    so a timeout without an incumbent reports no objective at all.
    """
    if adapter is None:
        raise SolverUnavailable(
            "no solver configured; pass --solver-cmd, set "
            f"{SOLVER_ENV_VAR}, or use '{BUILTIN_SOLVER}'"
        )
    own_dir = None
    if workdir is None:
        own_dir = tempfile.TemporaryDirectory(prefix="netpricing-mip-")
        workdir = own_dir.name
    try:
        model_path = Path(workdir) / "model.lp"
        solution_path = Path(workdir) / "model.sol"
        write_lp(model, model_path)
        seconds = 1_000_000_000.0 if time_limit is None else float(time_limit)
        cmd = [
            tok.format(model=str(model_path), solution=str(solution_path), seconds=_num(seconds))
            for tok in shlex.split(adapter.command)
        ]
        hard_timeout = None if time_limit is None else max(time_limit * 2, time_limit + 30)
        try:
            proc = subprocess.run(
                cmd,
                cwd=workdir,
                capture_output=True,
                text=True,
                timeout=hard_timeout,
            )
        except FileNotFoundError as exc:
            return SolveOutcome(ERROR, None, {}, f"solver command not found: {exc}")
        except subprocess.TimeoutExpired:
            return SolveOutcome(
                FEASIBLE_TIMEOUT, None, {}, "solver killed at the hard time limit"
            )
        known = {v.name for v in model.variables}
        values: dict[str, float] = {}
        have_solution = solution_path.exists()
        if have_solution:
            try:
                values = parse_solution(
                    solution_path.read_text(encoding="utf-8"), known
                )
            except SolutionParseError as exc:
                return SolveOutcome(ERROR, None, {}, str(exc))
        if proc.returncode == 0:
            if not have_solution:
                return SolveOutcome(
                    ERROR, None, {}, "solver exited 0 but wrote no solution file"
                )
            return SolveOutcome(OPTIMAL, model.objective_value(values), values)
        if proc.returncode == 2:
            objective = model.objective_value(values) if have_solution else None
            return SolveOutcome(FEASIBLE_TIMEOUT, objective, values, "time limit")
        if proc.returncode == 3:
            return SolveOutcome(INFEASIBLE, None, {}, "reported infeasible")
        tail = (proc.stderr or proc.stdout or "").strip().splitlines()[-5:]
        return SolveOutcome(
            ERROR, None, {}, f"solver exited {proc.returncode}: " + " | ".join(tail)
        )
    finally:
        if own_dir is not None:
            own_dir.cleanup()


def decode_prices_ip2(inst: Instance, values: dict[str, float]) -> tuple[Money, ...]:
    """Posted prices from the grid-indexed solution's level binaries."""
    prices = []
    grid = inst.grid.prices
    for f in inst.outlets():
        chosen = None
        best_val = 0.5
        for level in range(len(grid)):
            val = values.get(f"v_{f}_{level}", 0.0)
            if val > best_val:
                best_val = val
                chosen = level
        if chosen is None:
            raise SolutionParseError(f"no price level chosen for outlet {f}")
        prices.append(grid[chosen])
    return tuple(prices)


def decode_prices_ip1(inst: Instance, values: dict[str, float]) -> tuple[Money, ...]:
    """Posted prices from the continuous solution, snapped to the grid.

    Outlets that serve nobody take the top grid price: their continuous
    value is arbitrary and must not undercut the real assignments.
    """
    o_e, n_f, _ = adjacency(inst)
    prices = []
    for f in inst.outlets():
        assigned = any(
            values.get(f"mu_{e}_{f}", 0.0) > 0.5 for e in n_f[f]
        )
        if not assigned:
            prices.append(inst.grid.max)
            continue
        x = values.get(f"x_f{f}", 0.0) * MONEY_SCALE
        nearest = min(
            inst.grid.prices, key=lambda p: (abs(p - x), p)
        )
        prices.append(nearest)
    return tuple(prices)


def order_by_fractional_price(prices: dict[int, float]) -> tuple[int, ...]:
    """Outlets sorted by fractional price, ascending, ties by id."""
    return tuple(sorted(prices, key=lambda f: (prices[f], f)))


def relax_order(
    inst: Instance,
    which: str,
    adapter: Optional[SolverAdapter],
    time_limit: Optional[float] = None,
) -> tuple[int, ...]:
    """Selection order from a relaxation's fractional prices.

    which is "ip1" (per-outlet continuous price) or "ip2" (expected grid
    price, i.e. the level-weighted sum). Requires a solver adapter.
    """
    if which == "ip1":
        model = relax(build_ip1(inst))
    elif which == "ip2":
        model = relax(build_ip2(inst))
    else:
        raise ValueError(f"unknown relaxation {which!r}")
    outcome = solve_external(model, adapter, time_limit=time_limit)
    if outcome.status not in (OPTIMAL, FEASIBLE_TIMEOUT) or not outcome.values:
        raise SolverUnavailable(
            f"relaxation solve failed: {outcome.status} {outcome.message}".strip()
        )
    fractional: dict[int, float] = {}
    if which == "ip1":
        for f in inst.outlets():
            fractional[f] = outcome.values.get(f"x_f{f}", 0.0)
    else:
        grid = inst.grid.prices
        for f in inst.outlets():
            fractional[f] = sum(
                money_float(grid[level]) * outcome.values.get(f"v_{f}_{level}", 0.0)
                for level in range(len(grid))
            )
    return order_by_fractional_price(fractional)


def build_model(inst: Instance, which: str, price_factor: bool = True) -> LinearModel:
    if which == "ip1":
        return build_ip1(inst)
    if which == "ip2":
        return build_ip2(inst, price_factor=price_factor)
    raise ValueError(f"unknown formulation {which!r}")


def solve_ip(
    inst: Instance,
    which: str,
    adapter: Optional[SolverAdapter],
    time_limit: Optional[float] = None,
):
    """Build and solve a formulation. Returns (outcome, prices or None)."""
    model = build_model(inst, which)
    outcome = solve_external(model, adapter, time_limit=time_limit)
    prices = None
    if outcome.values and outcome.status in (OPTIMAL, FEASIBLE_TIMEOUT):
        decode = decode_prices_ip1 if which == "ip1" else decode_prices_ip2
        try:
            prices = decode(inst, outcome.values)
        except SolutionParseError:
            prices = None
    return outcome, prices
