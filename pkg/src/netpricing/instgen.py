"""Reproducible instance generation and the canonical instance file format.

Generation is fully determined by (parameters, seed) through the pinned
PRNG in rng.py. One seeded stream drives three phases in a fixed order,
so files regenerate byte-identically anywhere:

1. Edges: the |O| * |N| cells are numbered e * n_outlets + f; a partial
   Fisher-Yates pass picks the required count without replacement and the
   chosen pairs are sorted by (e, f).
2. Demand nodes, in id order: competitor price drawn uniformly on
   [c_lo, c_hi] and snapped to the nearest grid price (ties snap down),
   then the volume drawn on a hundredth lattice over [d_lo, d_hi].
3. Logit coefficients, in sorted edge order: a_hat, b_hat, a_bar, b_bar
   drawn uniformly in that sequence. They are drawn for both demand
   models, which keeps the stream aligned so the same seed yields twin
   instances that differ only in the model tag.

The benchmark collection (paper_grid) crosses outlet counts, node counts,
and densities into 45 graph shapes with 10 value draws each. The edge set
is fixed per graph: it comes from a per-graph child seed, while each draw
redraws node values and logit coefficients from a per-draw child seed.

Files are JSON with decimal strings for money and volumes; load rejects
unknown fields and load(save(x)) reproduces x exactly.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .model import MNPP, MODELS, DemandNode, Edge, Instance, PriceGrid
from .money import (
    Money,
    MoneyError,
    fraction_str,
    money_str,
    parse_fraction,
    parse_money,
)
from .rng import Rng, derive_seed

FORMAT_MARKER = "netpricing-instance-v1"

PAPER_OUTLETS = (5, 10, 15)
PAPER_DEMANDS = (15, 30, 50)
PAPER_DENSITIES = (0.9, 0.75, 0.5, 0.25, 0.1)
PAPER_DRAWS = 10


class InstanceFormatError(ValueError):
    """An instance file violates the canonical format."""


@dataclass(frozen=True)
class GenParams:
    """Generator knobs; defaults mirror the benchmark collection."""

    model: str = MNPP
    n_outlets: int = 5
    n_demands: int = 15
    density: float = 0.5
    seed: int = 0
    grid_min: str = "0"
    grid_max: str = "25"
    grid_step: str = "0.5"
    c_lo: float = 0.0
    c_hi: float = 25.0
    d_lo: int = 50
    d_hi: int = 150
    beta: str = "0.5"
    gamma: str = "1"
    a_lo: float = 200.0
    a_hi: float = 400.0
    b_lo: float = 0.0
    b_hi: float = 20.0
    pi: Optional[str] = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown demand model {self.model!r}")
        if self.n_outlets <= 0 or self.n_demands <= 0:
            raise ValueError("instance shape must be positive")
        if not (0.0 < self.density <= 1.0):
            raise ValueError("edge density must lie in (0, 1]")
        if self.d_lo <= 0 or self.d_hi < self.d_lo:
            raise ValueError("volume range must be positive and ordered")
        if self.c_hi < self.c_lo:
            raise ValueError("competitor price range must be ordered")


def make_grid(grid_min: str, grid_max: str, grid_step: str) -> PriceGrid:
    """Arithmetic price grid from decimal endpoints and step."""
    lo, hi, step = parse_money(grid_min), parse_money(grid_max), parse_money(grid_step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    if hi < lo:
        raise ValueError("grid endpoints must be ordered")
    return PriceGrid(tuple(range(lo, hi + 1, step)))


def edge_count(n_outlets: int, n_demands: int, density: float) -> int:
    """Number of edges: density * cells, rounded half up."""
    cells = n_outlets * n_demands
    count = int(density * cells + 0.5)
    return max(0, min(cells, count))


def snap_to_grid(grid: PriceGrid, value: float) -> Money:
    """Nearest grid price to a currency amount; exact ties snap down."""
    cents = value * 100.0
    prices = grid.prices
    i = bisect_left(prices, cents)
    if i <= 0:
        return prices[0]
    if i >= len(prices):
        return prices[-1]
    lo, hi = prices[i - 1], prices[i]
    return lo if cents - lo <= hi - cents else hi


def _sample_edges(rng: Rng, n_outlets: int, n_demands: int, density: float):
    cells = n_outlets * n_demands
    count = edge_count(n_outlets, n_demands, density)
    slots = list(range(cells))
    for i in range(count):
        j = i + rng.randbelow(cells - i)
        slots[i], slots[j] = slots[j], slots[i]
    pairs = sorted((slot // n_outlets, slot % n_outlets) for slot in slots[:count])
    return pairs


def _sample_nodes(rng: Rng, params: GenParams, grid: PriceGrid):
    beta = parse_fraction(params.beta)
    gamma = parse_fraction(params.gamma)
    nodes = []
    for e in range(params.n_demands):
        c = snap_to_grid(grid, rng.uniform(params.c_lo, params.c_hi))
        span = (params.d_hi - params.d_lo) * 100
        d = Fraction(params.d_lo * 100 + rng.randbelow(span + 1), 100)
        nodes.append(
            DemandNode(id=e, c=c, c_bar=grid.min, d=d, beta=beta, gamma=gamma)
        )
    return nodes


def _sample_logit(rng: Rng, pairs, params: GenParams):
    edges = []
    for e, f in pairs:
        a_hat = rng.uniform(params.a_lo, params.a_hi)
        b_hat = rng.uniform(params.b_lo, params.b_hi)
        a_bar = rng.uniform(params.a_lo, params.a_hi)
        b_bar = rng.uniform(params.b_lo, params.b_hi)
        edges.append(Edge(e, f, a_hat, b_hat, a_bar, b_bar))
    return edges


def generate(params: GenParams) -> Instance:
    """Generate one instance from a single seeded stream."""
    grid = make_grid(params.grid_min, params.grid_max, params.grid_step)
    rng = Rng(params.seed)
    pairs = _sample_edges(rng, params.n_outlets, params.n_demands, params.density)
    nodes = _sample_nodes(rng, params, grid)
    edges = _sample_logit(rng, pairs, params)
    return Instance(
        n_outlets=params.n_outlets,
        demands=tuple(nodes),
        edges=tuple(edges),
        grid=grid,
        model=params.model,
        pi=None if params.pi is None else parse_money(params.pi),
        seed=params.seed,
    )


def paper_grid(model: str, master_seed: int, draws: int = PAPER_DRAWS):
    """The full benchmark collection: 45 graphs x draws instances.

    Yields (graph_index, draw_index, params, instance). Child seeds come
    from derive_seed: stream 1 fixes each graph's edges, stream 2 redraws
    values per (graph, draw).
    """
    graph_index = 0
    for n_outlets in PAPER_OUTLETS:
        for n_demands in PAPER_DEMANDS:
            for density in PAPER_DENSITIES:
                graph_seed = derive_seed(master_seed, 1, graph_index)
                base = GenParams(
                    model=model,
                    n_outlets=n_outlets,
                    n_demands=n_demands,
                    density=density,
                    seed=graph_seed,
                )
                grid = make_grid(base.grid_min, base.grid_max, base.grid_step)
                pairs = _sample_edges(
                    Rng(graph_seed), n_outlets, n_demands, density
                )
                for draw in range(draws):
                    draw_seed = derive_seed(master_seed, 2, graph_index, draw)
                    rng = Rng(draw_seed)
                    params = replace(base, seed=draw_seed)
                    nodes = _sample_nodes(rng, params, grid)
                    edges = _sample_logit(rng, pairs, params)
                    inst = Instance(
                        n_outlets=n_outlets,
                        demands=tuple(nodes),
                        edges=tuple(edges),
                        grid=grid,
                        model=model,
                        pi=None,
                        seed=draw_seed,
                    )
                    yield graph_index, draw, params, inst
                graph_index += 1


def instance_to_doc(inst: Instance) -> dict:
    return {
        "format": FORMAT_MARKER,
        "meta": {
            "model": inst.model,
            "pi": "inf" if inst.pi is None else money_str(inst.pi),
            "seed": inst.seed,
            "grid": [money_str(p) for p in inst.grid.prices],
        },
        "outlets": list(range(inst.n_outlets)),
        "demands": [
            {
                "id": node.id,
                "c": money_str(node.c),
                "c_bar": money_str(node.c_bar),
                "d": fraction_str(node.d),
                "beta": fraction_str(node.beta),
                "gamma": fraction_str(node.gamma),
            }
            for node in inst.demands
        ],
        "edges": [
            {
                "e": edge.e,
                "f": edge.f,
                "a_hat": edge.a_hat,
                "b_hat": edge.b_hat,
                "a_bar": edge.a_bar,
                "b_bar": edge.b_bar,
            }
            for edge in inst.edges
        ],
    }


def save_instance(inst: Instance, path) -> Path:
    path = Path(path)
    path.write_text(
        json.dumps(instance_to_doc(inst), indent=2) + "\n", encoding="utf-8"
    )
    return path


def _expect_keys(obj: dict, required: tuple, where: str, optional: tuple = ()):
    if not isinstance(obj, dict):
        raise InstanceFormatError(f"{where}: expected an object")
    for key in obj:
        if key not in required and key not in optional:
            raise InstanceFormatError(f"{where}: unknown field {key!r}")
    for key in required:
        if key not in obj:
            raise InstanceFormatError(f"{where}: missing field {key!r}")


def _int_field(obj, key, where) -> int:
    value = obj[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise InstanceFormatError(f"{where}: field {key!r} must be an integer")
    return value


def _float_field(obj, key, where) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceFormatError(f"{where}: field {key!r} must be a number")
    return float(value)


def instance_from_doc(doc: dict) -> Instance:
    _expect_keys(doc, ("format", "meta", "outlets", "demands", "edges"), "document")
    if doc["format"] != FORMAT_MARKER:
        raise InstanceFormatError(f"unsupported format {doc['format']!r}")
    meta = doc["meta"]
    _expect_keys(meta, ("model", "pi", "seed", "grid"), "meta")
    model = meta["model"]
    if model not in MODELS:
        raise InstanceFormatError(f"meta: unknown model {model!r}")
    if meta["seed"] is not None and (
        not isinstance(meta["seed"], int) or isinstance(meta["seed"], bool)
    ):
        raise InstanceFormatError("meta: field 'seed' must be an integer or null")
    try:
        pi = None if meta["pi"] == "inf" else parse_money(meta["pi"])
        grid = PriceGrid(tuple(parse_money(p) for p in meta["grid"]))
    except (MoneyError, TypeError) as exc:
        raise InstanceFormatError(f"meta: {exc}") from exc

    outlets = doc["outlets"]
    if not isinstance(outlets, list) or outlets != list(range(len(outlets))):
        raise InstanceFormatError("outlets: expected the list 0..n-1")

    nodes = []
    for i, entry in enumerate(doc["demands"]):
        where = f"demands[{i}]"
        _expect_keys(entry, ("id", "c", "c_bar", "d", "beta", "gamma"), where)
        try:
            nodes.append(
                DemandNode(
                    id=_int_field(entry, "id", where),
                    c=parse_money(entry["c"]),
                    c_bar=parse_money(entry["c_bar"]),
                    d=parse_fraction(entry["d"]),
                    beta=parse_fraction(entry["beta"]),
                    gamma=parse_fraction(entry["gamma"]),
                )
            )
        except MoneyError as exc:
            raise InstanceFormatError(f"{where}: {exc}") from exc

    edges = []
    for i, entry in enumerate(doc["edges"]):
        where = f"edges[{i}]"
        _expect_keys(entry, ("e", "f", "a_hat", "b_hat", "a_bar", "b_bar"), where)
        edges.append(
            Edge(
                e=_int_field(entry, "e", where),
                f=_int_field(entry, "f", where),
                a_hat=_float_field(entry, "a_hat", where),
                b_hat=_float_field(entry, "b_hat", where),
                a_bar=_float_field(entry, "a_bar", where),
                b_bar=_float_field(entry, "b_bar", where),
            )
        )
    return Instance(
        n_outlets=len(outlets),
        demands=tuple(nodes),
        edges=tuple(edges),
        grid=grid,
        model=model,
        pi=pi,
        seed=meta["seed"],
    )


def load_instance(path) -> Instance:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: not valid JSON: {exc}") from exc
    try:
        return instance_from_doc(doc)
    except InstanceFormatError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc


def instance_label(inst: Instance) -> str:
    """Short deterministic identifier used in reports and file names."""
    density = round(inst.density * 100)
    seed = "x" if inst.seed is None else inst.seed
    return (
        f"{inst.model}_o{inst.n_outlets:02d}_n{inst.n_demands:02d}"
        f"_p{density:03d}_s{seed}"
    )
