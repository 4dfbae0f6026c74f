"""Positions and move generation for the entropy games and their relatives.

Three bit-string games (GA1, GA2, crossover-mutation) share one legality
rule: a move is legal only if the number of adjacent unequal bit pairs
strictly increases.  KAYLES (octal 0.77) and ARC KAYLES are included as the
classical games the bit-string games reduce to.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Union

from grundygp._graphcanon import adjacency, canonical_form, components

CANON_EDGE_CAP = 24


class Ruleset(str, enum.Enum):
    GA1 = "ga1"
    GA2 = "ga2"
    CM = "cm"
    KAYLES = "kayles"
    ARC_KAYLES = "arc_kayles"

    @classmethod
    def parse(cls, text: str) -> "Ruleset":
        key = text.strip().lower().replace("-", "_").replace(" ", "_")
        for r in cls:
            if r.value == key or r.name.lower() == key:
                return r
        raise ValueError(f"unknown ruleset {text!r}")


class PositionError(ValueError):
    """Malformed position or a position that does not fit the ruleset."""


# ---------------------------------------------------------------------------
# Position types


def _check_word(bits: str) -> None:
    if not bits or set(bits) - {"0", "1"}:
        raise PositionError(f"bit string must be a non-empty 0/1 word, got {bits!r}")


@dataclass(frozen=True)
class BitString:
    bits: str

    def __post_init__(self):
        _check_word(self.bits)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return self.bits


@dataclass(frozen=True)
class Heaps:
    """Multiset of positive heap sizes, stored sorted non-increasing."""

    heaps: tuple[int, ...] = ()

    def __post_init__(self):
        hs = tuple(sorted((int(h) for h in self.heaps), reverse=True))
        if any(h < 1 for h in hs):
            raise PositionError(f"heap sizes must be positive, got {self.heaps!r}")
        object.__setattr__(self, "heaps", hs)

    def __len__(self):
        return len(self.heaps)

    def __str__(self):
        return ",".join(map(str, self.heaps))


@dataclass(frozen=True)
class CMPosition:
    b1: str
    b2: str

    def __post_init__(self):
        _check_word(self.b1)
        _check_word(self.b2)
        if len(self.b1) != len(self.b2):
            raise PositionError("CM strings must have equal length")

    def __len__(self):
        return len(self.b1)

    def __str__(self):
        return f"{self.b1}/{self.b2}"


Edge = tuple[str, str, str]


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph as a sorted tuple of (u, v, label) edges.

    Isolated vertices are not stored; they never affect play.
    """

    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        norm = []
        for e in self.edges:
            u, v = str(e[0]), str(e[1])
            label = str(e[2]) if len(e) > 2 else ""
            if u == v:
                raise PositionError(f"self-loop at vertex {u!r}")
            if v < u:
                u, v = v, u
            norm.append((u, v, label))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(x for u, v, _ in self.edges for x in (u, v))

    def __len__(self):
        return len(self.edges)

    def components(self) -> list["Graph"]:
        adj = adjacency((u, v) for u, v, _ in self.edges)
        out = []
        for comp in components(adj):
            vs = set(comp)
            out.append(Graph(tuple(e for e in self.edges if e[0] in vs)))
        return out

    def __str__(self):
        return ",".join(f"{u}-{v}" for u, v, _ in self.edges)


Position = Union[BitString, Heaps, CMPosition, Graph]


# ---------------------------------------------------------------------------
# Entropy and run-length reduction


def word_entropy(bits: str) -> int:
    return sum(1 for a, b in zip(bits, bits[1:]) if a != b)


def entropy(p: BitString | CMPosition | str) -> int:
    """Number of adjacent unequal bit pairs; summed over both strings for CM."""
    if isinstance(p, CMPosition):
        return word_entropy(p.b1) + word_entropy(p.b2)
    if isinstance(p, BitString):
        return word_entropy(p.bits)
    return word_entropy(p)


def run_lengths(bits: str) -> list[int]:
    return [len(list(g)) for _, g in itertools.groupby(bits)]


def to_heaps(p: BitString | str, drop_ones: bool = False) -> Heaps:
    bits = p.bits if isinstance(p, BitString) else p
    runs = run_lengths(bits)
    if drop_ones:
        runs = [r for r in runs if r != 1]
    return Heaps(tuple(runs))


# ---------------------------------------------------------------------------
# Raw move generators on plain strings / tuples (shared with the solver)


def _flip(bits: str, lo: int, hi: int) -> str:
    """Flip bits[lo:hi]."""
    mid = bits[lo:hi].translate(_FLIP)
    return bits[:lo] + mid + bits[hi:]


_FLIP = str.maketrans("01", "10")


def ga1_word_moves(bits: str) -> set[str]:
    n = len(bits)
    e = word_entropy(bits)
    cands = [_flip(bits, i, i + 1) for i in range(n)]
    cands += [_flip(bits, 0, k) for k in range(1, n)]
    return {c for c in cands if word_entropy(c) > e}


def ga2_word_moves(bits: str) -> set[str]:
    # positions x..y-1 (1-indexed) with 1 <= x < y <= n; the last bit is never flipped
    n = len(bits)
    e = word_entropy(bits)
    out = set()
    for x in range(1, n):
        for y in range(x + 1, n + 1):
            c = _flip(bits, x - 1, y - 1)
            if word_entropy(c) > e:
                out.add(c)
    return out


def _gap_gain(word: str, i: int) -> int:
    """Entropy change from flipping word[i]: each equal neighbour pair becomes unequal."""
    gain = 0
    if i > 0:
        gain += 1 if word[i - 1] == word[i] else -1
    if i + 1 < len(word):
        gain += 1 if word[i + 1] == word[i] else -1
    return gain


def cm_moves(b1: str, b2: str) -> set[tuple[str, str]]:
    # only the gaps touching a flipped bit, or gap k for a crossover at k, change
    n = len(b1)
    out = set()
    for i in range(n):
        if _gap_gain(b1, i) > 0:
            out.add((_flip(b1, i, i + 1), b2))
        if _gap_gain(b2, i) > 0:
            out.add((b1, _flip(b2, i, i + 1)))
    for k in range(1, n):
        before = (b1[k - 1] != b1[k]) + (b2[k - 1] != b2[k])
        after = (b2[k - 1] != b1[k]) + (b1[k - 1] != b2[k])
        if after > before:
            out.add((b2[:k] + b1[k:], b1[:k] + b2[k:]))
    return out


def _sorted_heaps(parts) -> tuple[int, ...]:
    return tuple(sorted(parts, reverse=True))


def _two_parts(h: int):
    return [(a, h - a) for a in range(1, h // 2 + 1)]


def _three_parts(h: int):
    return [(a, b, h - a - b) for a in range(1, h) for b in range(a, h) if h - a - b >= b]


def _ga1_heap_results(h: int) -> set[tuple[int, ...]]:
    """Heaps left by one GA1 move inside a run of size h, size-1 heaps dropped.

    A crossover point inside the run splits it in two; an entropy-raising
    mutation isolates one interior bit, splitting it into (a, 1, b).
    """
    out = set()
    for a, b in _two_parts(h):
        out.add(_sorted_heaps(x for x in (a, b) if x > 1))
    for a in range(1, h - 1):
        b = h - 1 - a
        out.add(_sorted_heaps(x for x in (a, b) if x > 1))
    return out


def _replace(heaps: tuple[int, ...], idx: tuple[int, ...], parts) -> tuple[int, ...]:
    rest = [h for i, h in enumerate(heaps) if i not in idx]
    return _sorted_heaps(rest + list(parts))


def _distinct_indices(heaps: tuple[int, ...]):
    seen = set()
    for i, h in enumerate(heaps):
        if h not in seen:
            seen.add(h)
            yield i, h


def ga1_heap_moves(heaps: tuple[int, ...]) -> set[tuple[int, ...]]:
    if any(h == 1 for h in heaps):
        raise PositionError("GA1 heap engine expects size-1 heaps already removed")
    out = set()
    for i, h in _distinct_indices(heaps):
        for parts in _ga1_heap_results(h):
            out.add(_replace(heaps, (i,), parts))
    return out


def ga2_heap_moves(heaps: tuple[int, ...]) -> set[tuple[int, ...]]:
    out = set()
    for i, h in _distinct_indices(heaps):
        for parts in _two_parts(h) + _three_parts(h):
            out.add(_replace(heaps, (i,), parts))
    done = set()
    for i, j in itertools.combinations(range(len(heaps)), 2):
        hi, hj = heaps[i], heaps[j]
        if hi < 2 or hj < 2 or (hi, hj) in done:
            continue
        done.add((hi, hj))
        for pi in _two_parts(hi):
            for pj in _two_parts(hj):
                out.add(_replace(heaps, (i, j), pi + pj))
    return out


def kayles_heap_moves(heaps: tuple[int, ...]) -> set[tuple[int, ...]]:
    out = set()
    for i, h in _distinct_indices(heaps):
        for take in (1, 2):
            r = h - take
            if r < 0:
                continue
            out.add(_replace(heaps, (i,), (r,) if r else ()))
            for a in range(1, r // 2 + 1):
                out.add(_replace(heaps, (i,), (a, r - a)))
    return out


def arc_kayles_moves(edges: frozenset) -> set[frozenset]:
    """Edges given as a frozenset of 2-tuples; removing (u, v) deletes u and v."""
    out = set()
    for u, v in edges:
        out.add(frozenset(e for e in edges if u not in e and v not in e))
    return out


# ---------------------------------------------------------------------------
# Public move generation


def _mismatch(p, r):
    raise PositionError(f"{type(p).__name__} is not a {r.value} position")


def options(p: Position, r: Ruleset) -> set:
    """The exact set of legal successor positions of p under ruleset r."""
    r = Ruleset(r)
    if isinstance(p, BitString):
        if r is Ruleset.GA1:
            return {BitString(c) for c in ga1_word_moves(p.bits)}
        if r is Ruleset.GA2:
            return {BitString(c) for c in ga2_word_moves(p.bits)}
    elif isinstance(p, Heaps):
        if r in (Ruleset.GA1, Ruleset.GA2):
            return heap_options(p, r)
        if r is Ruleset.KAYLES:
            return {Heaps(h) for h in kayles_heap_moves(p.heaps)}
    elif isinstance(p, CMPosition):
        if r is Ruleset.CM:
            return {CMPosition(a, b) for a, b in cm_moves(p.b1, p.b2)}
    elif isinstance(p, Graph):
        if r is Ruleset.ARC_KAYLES:
            out = set()
            for u, v, _ in p.edges:
                out.add(Graph(tuple(e for e in p.edges if not {u, v} & {e[0], e[1]})))
            return out
    _mismatch(p, r)


def heap_options(p: Heaps, r: Ruleset) -> set[Heaps]:
    r = Ruleset(r)
    if r is Ruleset.GA1:
        return {Heaps(h) for h in ga1_heap_moves(p.heaps)}
    if r is Ruleset.GA2:
        return {Heaps(h) for h in ga2_heap_moves(p.heaps)}
    raise PositionError(f"no heap engine for {r.value}")


# ---------------------------------------------------------------------------
# CM -> ARC KAYLES


def cm_to_arc_kayles(p: CMPosition) -> Graph:
    """ARC KAYLES graph with one edge per legal CM move.

    Vertex ``A{g}`` / ``B{g}`` sits at gap g (0..n) of the first / second
    string.  Mutating bit i is the edge between gaps i-1 and i; crossover at
    k joins the two gap-k vertices.  Edges conflict exactly when the moves
    they stand for disable each other.
    """
    n = len(p)
    edges = []
    for tag, word in (("a", p.b1), ("b", p.b2)):
        side = tag.upper()
        for i in range(1, n + 1):
            if word_entropy(_flip(word, i - 1, i)) > word_entropy(word):
                edges.append((f"{side}{i - 1}", f"{side}{i}", f"{tag}{i}"))
    e = entropy(p)
    for k in range(1, n):
        a = p.b2[:k] + p.b1[k:]
        b = p.b1[:k] + p.b2[k:]
        if word_entropy(a) + word_entropy(b) > e:
            edges.append((f"A{k}", f"B{k}", f"x{k}"))
    return Graph(tuple(edges))


# ---------------------------------------------------------------------------
# Canonical keys


def _word_key(bits: str) -> str:
    comp = bits.translate(_FLIP)
    return min(bits, bits[::-1], comp, comp[::-1])


def _cm_key(b1: str, b2: str) -> tuple[str, str]:
    cands = []
    for x, y in ((b1, b2), (b2, b1)):
        for xx, yy in ((x, y), (x[::-1], y[::-1])):
            cands.append((xx, yy))
            cands.append((xx.translate(_FLIP), yy.translate(_FLIP)))
    return min(cands)


def graph_key(edges, cap: int = CANON_EDGE_CAP):
    """Canonical key of an edge collection of (u, v) pairs; None beyond the cap."""
    edges = list(edges)
    adj = adjacency(edges)
    comps = components(adj)
    forms = []
    for comp in comps:
        sub = {v: adj[v] for v in comp}
        if sum(sum(nb.values()) for nb in sub.values()) // 2 > cap:
            return None
        forms.append(canonical_form(sub))
    return tuple(sorted(forms))


def canonical(p: Position, r: Ruleset):
    """Key equal for positions related by a value-preserving symmetry.

    Returns None for graphs too large to canonicalize exactly.
    """
    r = Ruleset(r)
    if isinstance(p, BitString):
        return ("bits", _word_key(p.bits))
    if isinstance(p, Heaps):
        hs = p.heaps
        if r in (Ruleset.GA1, Ruleset.GA2):
            # size-1 heaps are inert in both entropy games
            hs = tuple(h for h in hs if h > 1)
        return ("heaps", hs)
    if isinstance(p, CMPosition):
        return ("cm", _cm_key(p.b1, p.b2))
    if isinstance(p, Graph):
        key = graph_key((u, v) for u, v, _ in p.edges)
        return None if key is None else ("graph", key)
    _mismatch(p, r)


# ---------------------------------------------------------------------------
# Position literals

_WORD = re.compile(r"^[01]+$")


def parse_position(text: str, r: Ruleset) -> Position:
    """Parse a textual position literal for ruleset r.

    Bit strings are raw 0/1 words, CM positions two words joined by "/",
    heaps comma-separated integers, graphs comma-separated ``u-v`` edges.
    For GA1/GA2 a pure 0/1 word without commas is read as a bit string;
    write a single heap as ``10,`` to force the heap reading.
    """
    r = Ruleset(r)
    s = text.strip()
    if r is Ruleset.CM:
        parts = s.split("/")
        if len(parts) != 2:
            raise PositionError(f"CM literal needs exactly one '/', got {text!r}")
        return CMPosition(parts[0].strip(), parts[1].strip())
    if r is Ruleset.ARC_KAYLES:
        edges = []
        for item in filter(None, (t.strip() for t in s.split(","))):
            uv = item.split("-")
            if len(uv) != 2 or not all(uv):
                raise PositionError(f"bad edge literal {item!r}")
            edges.append((uv[0].strip(), uv[1].strip(), ""))
        return Graph(tuple(edges))
    if r in (Ruleset.GA1, Ruleset.GA2) and _WORD.match(s):
        return BitString(s)
    return _parse_heaps(s, text)


def _parse_heaps(s: str, text: str) -> Heaps:
    items = [t.strip() for t in s.split(",")]
    items = [t for t in items if t]
    try:
        return Heaps(tuple(int(t) for t in items))
    except ValueError as exc:
        raise PositionError(f"bad heap literal {text!r}") from exc


def format_position(p: Position) -> str:
    return str(p)
