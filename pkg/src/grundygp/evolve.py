"""Tree-based genetic programming against exact Grundy-value datasets."""

from __future__ import annotations

import csv
import enum
import itertools
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

import numpy as np

from grundygp import formula as F
from grundygp.formula import Call, Const, Expr, Var
from grundygp.games import Heaps, Ruleset
from grundygp.solver import GrundyCache, grundy

OVERFLOW_PENALTY = 10**6
# above this magnitude row sums are accumulated with Python ints
_EXACT_SUM_GUARD = 2**40


class Metric(str, enum.Enum):
    ABS_DIFF = "abs_diff"
    NIM_DIST = "nim_dist"
    # fitness from mex-consistency of predicted values over options; declared only
    MEX_CONSISTENCY = "mex_consistency"


class Termination(str, enum.Enum):
    EXACT = "EXACT"
    GENERATION_LIMIT = "GENERATION_LIMIT"


# ---------------------------------------------------------------------------
# Datasets


@dataclass
class Dataset:
    names: tuple[str, ...]
    inputs: list[tuple[int, ...]]
    targets: list[int]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.names = tuple(self.names)
        w = len(self.names)
        if any(len(x) != w for x in self.inputs):
            raise ValueError("all rows must have the dataset width")
        if len(self.inputs) != len(self.targets):
            raise ValueError("inputs and targets differ in length")
        self.X = np.asarray(self.inputs, dtype=np.int64).reshape(len(self.inputs), w)
        self.y = np.asarray(self.targets, dtype=np.int64)

    @property
    def width(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.targets)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(list(self.names) + ["g"])
            for x, g in zip(self.inputs, self.targets):
                w.writerow(list(x) + [g])

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0][-1].strip() != "g":
            raise ValueError(f"{path}: header must end with a 'g' column")
        names = tuple(h.strip() for h in rows[0][:-1])
        inputs, targets = [], []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            try:
                vals = [int(v) for v in row]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-integer field") from exc
            if len(vals) != len(names) + 1:
                raise ValueError(f"{path}:{lineno}: expected {len(names) + 1} fields")
            inputs.append(tuple(vals[:-1]))
            targets.append(vals[-1])
        return cls(names, inputs, targets, {"source": str(path)})


def generate_dataset(
    r: Ruleset,
    max_heaps: int,
    max_size: int,
    count_primed: bool = False,
    cache: Optional[GrundyCache] = None,
) -> Dataset:
    """One row per heap multiset with exactly max_heaps heaps.

    GA1 rows use sizes 2..max_size (size-1 heaps are inert); other heap
    games use 1..max_size.  With count_primed the heap count is input 0.
    """
    r = Ruleset(r)
    if r not in (Ruleset.GA1, Ruleset.GA2, Ruleset.KAYLES):
        raise ValueError(f"{r.value} has no heap representation")
    if max_heaps < 1 or max_size < 1:
        raise ValueError("max_heaps and max_size must be positive")
    lo = 2 if r is Ruleset.GA1 else 1
    cache = cache if cache is not None else GrundyCache()
    inputs, targets = [], []
    for row in itertools.combinations_with_replacement(range(lo, max_size + 1), max_heaps):
        g = grundy(Heaps(row), r, cache)
        inputs.append(((max_heaps,) + row) if count_primed else row)
        targets.append(g)
    prov = {
        "ruleset": r.value,
        "heaps": max_heaps,
        "max_size": max_size,
        "count_primed": count_primed,
    }
    return Dataset(F.default_names(max_heaps, count_primed), inputs, targets, prov)


# ---------------------------------------------------------------------------
# Fitness


def _row_sum(values: np.ndarray) -> int:
    if values.size and int(np.abs(values).max()) > _EXACT_SUM_GUARD:
        return sum(abs(int(v)) for v in values)
    return int(np.abs(values).sum())


def _max_index(e: Expr) -> int:
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Call):
        return max(_max_index(c) for c in e.args)
    return -1


def error(
    e: Expr, d: Dataset, metric: Metric = Metric.ABS_DIFF, overflow_penalty: int = OVERFLOW_PENALTY
) -> int:
    """Total error of e over the dataset, without the parsimony term."""
    metric = Metric(metric)
    if _max_index(e) >= d.width:
        raise ValueError(f"expression uses more than {d.width} inputs")
    vals, bad = F.evaluate_batch(e, d.X)
    good = ~bad
    v, g = vals[good], d.y[good]
    if metric is Metric.ABS_DIFF:
        if v.size and int(np.abs(v).max()) > _EXACT_SUM_GUARD:
            total = sum(abs(int(a) - int(b)) for a, b in zip(v, g))
        else:
            total = int(np.abs(v - g).sum())
    elif metric is Metric.NIM_DIST:
        total = _row_sum(np.maximum(v, 0) ^ g)
    else:
        raise NotImplementedError(f"metric {metric.value} is reserved")
    return total + overflow_penalty * int(bad.sum())


def fitness(
    e: Expr,
    d: Dataset,
    metric: Metric = Metric.ABS_DIFF,
    parsimony: float = 0.0,
    overflow_penalty: int = OVERFLOW_PENALTY,
):
    """Lower is better; 0 under ABS_DIFF with no parsimony means an exact fit."""
    total = error(e, d, metric, overflow_penalty)
    if parsimony:
        return total + parsimony * F.size(e)
    return total


# ---------------------------------------------------------------------------
# Selection and variation


def tournament(fitnesses: Sequence, sizes: Sequence[int], k: int, rng: random.Random) -> int:
    """Index of the tournament winner; ties go to the smaller tree, then the earlier index."""
    n = len(fitnesses)
    if n == 0:
        raise ValueError("empty population")
    contenders = [rng.randrange(n) for _ in range(k)]
    return min(contenders, key=lambda i: (fitnesses[i], sizes[i], i))


def select(pop: Sequence[Expr], fitnesses: Sequence, tournament_size: int, rng: random.Random) -> Expr:
    sizes = [F.size(e) for e in pop]
    return pop[tournament(fitnesses, sizes, tournament_size, rng)]


def crossover(a: Expr, b: Expr, rng: random.Random, max_depth: int = F.MAX_DEPTH) -> Expr:
    """Graft a random subtree of b over a random node of a."""
    at = rng.choice(F.paths(a))
    donor = F.subtree(b, rng.choice(F.paths(b)))
    child = F.replace(a, at, donor)
    return a if F.depth(child) > max_depth else child


def _all_leaves(names: Sequence[str], constants: Sequence[int]) -> list[Expr]:
    return [Var(i, n) for i, n in enumerate(names)] + [Const(c) for c in constants]


def mutate(
    e: Expr,
    kind: str,
    rng: random.Random,
    names: Sequence[str] = ("h",),
    constants: Sequence[int] = F.CONSTANTS,
    max_depth: int = F.MAX_DEPTH,
) -> Expr:
    """Subtree, point, or hoist mutation."""
    at = rng.choice(F.paths(e))
    node = F.subtree(e, at)
    if kind == "subtree":
        fresh = F.random_tree(names, (1, 4), "grow", rng, constants)
        child = F.replace(e, at, fresh)
        return e if F.depth(child) > max_depth else child
    if kind == "point":
        if isinstance(node, Call):
            arity = F.ARITY[node.name]
            pool = [p for p in F.PRIMITIVES if F.ARITY[p] == arity and p != node.name]
            return F.replace(e, at, Call(rng.choice(pool), node.args))
        pool = [x for x in _all_leaves(names, constants) if x != node]
        return F.replace(e, at, rng.choice(pool))
    if kind == "hoist":
        return node
    raise ValueError(f"unknown mutation kind {kind!r}")


# ---------------------------------------------------------------------------
# Configuration and reports


@dataclass
class EvolutionConfig:
    population_size: int = 1000
    generations: int = 20
    tournament_size: int = 20
    elite_count: int = 10
    p_crossover: float = 0.65
    p_subtree_mutation: float = 0.15
    p_point_mutation: float = 0.10
    p_hoist_mutation: float = 0.05
    p_reproduction: float = 0.05
    init_depth: tuple[int, int] = (2, 6)
    metric: str = Metric.ABS_DIFF.value
    parsimony: float = 0.0
    overflow_penalty: int = OVERFLOW_PENALTY
    max_depth: int = F.MAX_DEPTH
    seed: int = 0
    debug: bool = False

    def __post_init__(self):
        self.init_depth = tuple(self.init_depth)
        self.metric = Metric(self.metric).value

    def validate(self) -> None:
        probs = self.operator_probs()
        if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError("operator probabilities must be non-negative and sum to 1")
        if self.population_size < 1 or self.generations < 1 or self.tournament_size < 1:
            raise ValueError("population, generations and tournament size must be positive")
        if not 0 <= self.elite_count <= self.population_size:
            raise ValueError("elite count must lie in [0, population size]")
        lo, hi = self.init_depth
        if not 1 <= lo <= hi <= self.max_depth:
            raise ValueError(f"bad init depth range {self.init_depth}")
        if self.metric == Metric.MEX_CONSISTENCY.value:
            raise NotImplementedError("mex-consistency fitness is reserved, not implemented")

    def operator_probs(self) -> tuple[float, ...]:
        return (
            self.p_crossover,
            self.p_subtree_mutation,
            self.p_point_mutation,
            self.p_hoist_mutation,
            self.p_reproduction,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["init_depth"] = list(self.init_depth)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EvolutionConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)


_OPERATORS = ("crossover", "subtree", "point", "hoist", "reproduction")


@dataclass
class RunReport:
    best_expression: str
    best_fitness: float
    termination: str
    generations: list[dict]
    evaluations: int
    seed: int
    config: dict
    dataset: dict
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# The generational loop


def ramped_half_and_half(
    n: int, names: Sequence[str], depth_range: tuple[int, int], rng: random.Random
) -> list[Expr]:
    depths = list(range(depth_range[0], depth_range[1] + 1))
    pop = []
    for i in range(n):
        d = depths[i % len(depths)]
        method = "full" if (i // len(depths)) % 2 == 0 else "grow"
        pop.append(F.random_tree(names, (d, d), method, rng))
    return pop


def _evaluate_all(exprs, d: Dataset, cfg: EvolutionConfig, threads: int) -> list:
    def one(e):
        return fitness(e, d, cfg.metric, cfg.parsimony, cfg.overflow_penalty)

    if threads <= 1 or len(exprs) < 2:
        return [one(e) for e in exprs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, exprs, chunksize=max(1, len(exprs) // (4 * threads))))


def run(config: EvolutionConfig, d: Dataset, threads: Optional[int] = None) -> RunReport:
    """Evolve formulas for dataset d; the trajectory depends only on (config, d)."""
    config.validate()
    start = time.perf_counter()
    threads = 1 if threads is None else max(1, int(threads))
    rng = random.Random(config.seed)
    names = d.names
    probs = list(itertools.accumulate(config.operator_probs()))

    pop = ramped_half_and_half(config.population_size, names, config.init_depth, rng)
    known: list = [None] * len(pop)
    trace: list[dict] = []
    evaluations = 0

    for gen in range(config.generations):
        todo = [i for i, f in enumerate(known) if f is None]
        for i, f in zip(todo, _evaluate_all([pop[i] for i in todo], d, config, threads)):
            known[i] = f
        evaluations += len(todo)
        fits = known
        sizes = [F.size(e) for e in pop]
        if config.debug:
            for e in pop:
                F.validate(e, d.width, config.max_depth)
        order = sorted(range(len(pop)), key=lambda i: (fits[i], sizes[i], i))
        best = order[0]
        trace.append(
            {
                "generation": gen,
                "best_fitness": fits[best],
                "mean_fitness": sum(fits) / len(fits),
                "best_size": sizes[best],
                "best_expression": F.to_text(pop[best]),
            }
        )
        if fits[best] == 0:
            termination = Termination.EXACT
            break
        if gen == config.generations - 1:
            termination = Termination.GENERATION_LIMIT
            break

        nxt = [pop[i] for i in order[: config.elite_count]]
        nxt_known = [fits[i] for i in order[: config.elite_count]]
        while len(nxt) < config.population_size:
            u = rng.random()
            op = next((name for name, c in zip(_OPERATORS, probs) if u < c), _OPERATORS[-1])
            pi = tournament(fits, sizes, config.tournament_size, rng)
            parent = pop[pi]
            if op == "reproduction":
                nxt.append(parent)
                nxt_known.append(fits[pi])
                continue
            if op == "crossover":
                donor = pop[tournament(fits, sizes, config.tournament_size, rng)]
                child = crossover(parent, donor, rng, config.max_depth)
            else:
                child = mutate(parent, op, rng, names, F.CONSTANTS, config.max_depth)
            nxt.append(child)
            nxt_known.append(None)
        pop, known = nxt, nxt_known

    return RunReport(
        best_expression=trace[-1]["best_expression"],
        best_fitness=trace[-1]["best_fitness"],
        termination=termination.value,
        generations=trace,
        evaluations=evaluations,
        seed=config.seed,
        config=config.to_dict(),
        dataset={**d.provenance, "names": list(d.names), "rows": len(d)},
        wall_time=time.perf_counter() - start,
    )
