"""Exact Sprague-Grundy evaluation with memoization on canonical keys."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import reduce
from operator import xor
from typing import Iterable, Optional

from grundygp import games
from grundygp.games import BitString, CMPosition, Graph, Heaps, PositionError, Ruleset


class ResourceLimitError(RuntimeError):
    """Position exceeds a configured solver bound."""


@dataclass(frozen=True)
class Limits:
    max_bits: int = 20
    max_graph_edges: int = 24


DEFAULT_LIMITS = Limits()


class GrundyCache:
    """Thread-safe map from (ruleset, canonical key) to Grundy value.

    Values are exact, so racing writers store identical values.
    """

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        value = self._data.get(key)
        with self._lock:
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
        return value

    def put(self, key, value: int) -> None:
        self._data[key] = value

    def __len__(self):
        return len(self._data)

    def __contains__(self, key):
        return key in self._data


def mex(values: Iterable[int]) -> int:
    s = set(values)
    g = 0
    while g in s:
        g += 1
    return g


def nim_sum(values: Iterable[int]) -> int:
    return reduce(xor, values, 0)


# ---------------------------------------------------------------------------
# Engines.  Each works on raw hashable states and memoizes on canonical keys.


class _Engine:
    def __init__(self, cache: GrundyCache, limits: Limits):
        self.cache = cache
        self.limits = limits

    def _memo(self, key, compute):
        if key is not None:
            v = self.cache.get(key)
            if v is not None:
                return v
        v = compute()
        if key is not None:
            self.cache.put(key, v)
        return v

    def word(self, bits: str, r: Ruleset) -> int:
        moves = games.ga1_word_moves if r is Ruleset.GA1 else games.ga2_word_moves
        key = (r.value, "bits", games._word_key(bits))
        return self._memo(key, lambda: mex(self.word(c, r) for c in moves(bits)))

    def cm(self, b1: str, b2: str) -> int:
        key = ("cm", games._cm_key(b1, b2))
        return self._memo(key, lambda: mex(self.cm(a, b) for a, b in games.cm_moves(b1, b2)))

    def single_heap(self, h: int, r: Ruleset) -> int:
        """GA1 / KAYLES single heap; multisets decompose into nim-sums."""
        moves = games.ga1_heap_moves if r is Ruleset.GA1 else games.kayles_heap_moves
        key = (r.value, "heap", h)
        return self._memo(
            key, lambda: mex(self.heap_sum(o, r) for o in moves((h,)))
        )

    def heap_sum(self, heaps: tuple[int, ...], r: Ruleset) -> int:
        return nim_sum(self.single_heap(h, r) for h in heaps)

    def ga2_heaps(self, heaps: tuple[int, ...]) -> int:
        # size-1 heaps never take part in a GA2 move
        core = tuple(h for h in heaps if h > 1)
        key = ("ga2", "heaps", core)
        return self._memo(
            key, lambda: mex(self.ga2_heaps(o) for o in games.ga2_heap_moves(core))
        )

    def graph(self, edges: frozenset) -> int:
        adj = games.adjacency(edges)
        total = 0
        for comp in games.components(adj):
            vs = set(comp)
            total ^= self._component(frozenset(e for e in edges if e[0] in vs))
        return total

    def _component(self, edges: frozenset) -> int:
        key = games.graph_key(edges)
        key = None if key is None else ("arc_kayles", key)
        return self._memo(
            key, lambda: mex(self.graph(o) for o in games.arc_kayles_moves(edges))
        )


def _simple_edges(g: Graph) -> frozenset:
    # parallel edges are interchangeable moves with identical results
    return frozenset((u, v) for u, v, _ in g.edges)


def grundy(
    p: games.Position,
    r: Ruleset,
    cache: Optional[GrundyCache] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> int:
    """Exact Grundy value of p under ruleset r."""
    r = Ruleset(r)
    eng = _Engine(cache if cache is not None else GrundyCache(), limits)
    if isinstance(p, BitString) and r in (Ruleset.GA1, Ruleset.GA2):
        if len(p) > limits.max_bits:
            raise ResourceLimitError(f"bit string longer than {limits.max_bits}")
        return eng.word(p.bits, r)
    if isinstance(p, Heaps):
        if r is Ruleset.GA1:
            if 1 in p.heaps:
                p = Heaps(tuple(h for h in p.heaps if h > 1))
            return eng.heap_sum(p.heaps, r)
        if r is Ruleset.KAYLES:
            return eng.heap_sum(p.heaps, r)
        if r is Ruleset.GA2:
            return eng.ga2_heaps(p.heaps)
    if isinstance(p, CMPosition) and r is Ruleset.CM:
        if len(p) > limits.max_bits:
            raise ResourceLimitError(f"CM strings longer than {limits.max_bits}")
        return eng.cm(p.b1, p.b2)
    if isinstance(p, Graph) and r is Ruleset.ARC_KAYLES:
        if len(p.edges) > limits.max_graph_edges:
            raise ResourceLimitError(f"graph has more than {limits.max_graph_edges} edges")
        return eng.graph(_simple_edges(p))
    raise PositionError(f"{type(p).__name__} is not a {r.value} position")


def kayles_reference(n: int) -> int:
    """Single KAYLES heap value by direct table fill, independent of the engines."""
    table = kayles_table(n)
    return table[n]


def kayles_table(n: int) -> list[int]:
    g = [0] * (n + 1)
    for m in range(1, n + 1):
        seen = set()
        for take in (1, 2):
            rest = m - take
            if rest < 0:
                continue
            for a in range(0, rest // 2 + 1):
                seen.add(g[a] ^ g[rest - a])
        v = 0
        while v in seen:
            v += 1
        g[m] = v
    return g


def ga2_formula(h: Heaps) -> int:
    """Closed-form GA2 value: (t + sum of heaps) mod 3 with n + t = 0 mod 3."""
    n = len(h.heaps)
    if n == 0:
        raise ValueError("ga2_formula needs at least one heap")
    t = (-n) % 3
    return (t + sum(h.heaps)) % 3


def extreme_cm(n: int) -> CMPosition:
    return CMPosition("1" * n, "0" * n)


def grundy_sequence(
    r: Ruleset,
    family: str,
    max_n: int,
    cache: Optional[GrundyCache] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> list[int]:
    """Values for n = 1..max_n of a one-parameter family.

    family is "single-heap" (GA1, GA2, KAYLES) or "extreme-cm" (CM).
    """
    r = Ruleset(r)
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    cache = cache if cache is not None else GrundyCache()
    fam = family.lower().replace("_", "-")
    if fam == "single-heap" and r in (Ruleset.GA1, Ruleset.GA2, Ruleset.KAYLES):
        return [grundy(Heaps((n,)), r, cache, limits) for n in range(1, max_n + 1)]
    if fam == "extreme-cm" and r is Ruleset.CM:
        return [grundy(extreme_cm(n), r, cache, limits) for n in range(1, max_n + 1)]
    raise ValueError(f"family {family!r} is not defined for {r.value}")


@dataclass(frozen=True)
class PeriodReport:
    preperiod: int
    period: int
    verified_through: int


def detect_period(seq: list[int]) -> Optional[PeriodReport]:
    """Smallest (preperiod, period) with seq[i] == seq[i + period] for i >= preperiod.

    At least two full periods must be observed after the preperiod, so a
    coincidence at the tail of the data is not reported.  Returns None when
    nothing qualifies.
    """
    n = len(seq)
    if n < 2:
        raise ValueError("need at least two values")
    for pre in range(n):
        for p in range(1, (n - pre) // 2 + 1):
            if all(seq[i] == seq[i + p] for i in range(pre, n - p)):
                return PeriodReport(pre, p, n - 1)
    return None
