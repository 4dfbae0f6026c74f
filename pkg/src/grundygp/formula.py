"""Expression trees over a discrete primitive set.

Formulas are written in call syntax, ``MOD(SUB(h,1),PLUS1(PLUS1(1)))``, and
the parser also accepts infix ``+ - *`` so hand-written formulas such as
``MOD(1+h,3) - 1`` can be read.  Printing always produces call syntax.

Every primitive is total: division and modulus by zero and ``LOG2(0)`` have
fixed conventions.  Values are signed 64-bit; a result outside that range is
an overflow.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

INT64_MIN = -(2**63)
INT64_LIMIT = 2**63
NOT_MASK = 0xFFFF
CONSTANTS = tuple(range(11))
MAX_DEPTH = 17


# ---------------------------------------------------------------------------
# Tree nodes


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    index: int
    name: str


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]


Expr = Union[Const, Var, Call]


def default_names(n_heaps: int, count_primed: bool = False) -> tuple[str, ...]:
    if n_heaps == 1 and not count_primed:
        return ("h",)
    names = tuple(f"h{i}" for i in range(1, n_heaps + 1))
    return ("nh",) + names if count_primed else names


# ---------------------------------------------------------------------------
# Primitive semantics (scalar, Python ints)


def _div(a: int, b: int) -> int:
    if b == 0:
        return 1
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def _mod(a: int, b: int) -> int:
    return 0 if b == 0 else a % abs(b)


def _log2(a: int) -> int:
    return 0 if a == 0 else abs(a).bit_length() - 1


SCALAR: dict[str, Callable[..., int]] = {
    "ADD": lambda a, b: a + b,
    "SUB": lambda a, b: a - b,
    "TIMES": lambda a, b: a * b,
    "DIVIDE": _div,
    "MOD": _mod,
    "XOR": lambda a, b: a ^ b,
    "AND": lambda a, b: a & b,
    "OR": lambda a, b: a | b,
    "NOT": lambda a: abs(a) ^ NOT_MASK,
    "LOG2": _log2,
    "PLUS1": lambda a: a + 1,
    "EQUAL": lambda a, b: int(a == b),
    "LESS": lambda a, b: int(a < b),
    "GREATER": lambda a, b: int(a > b),
}

ARITY = {name: fn.__code__.co_argcount for name, fn in SCALAR.items()}
PRIMITIVES = tuple(SCALAR)


class EvalOverflow(ArithmeticError):
    def __init__(self, path: tuple[int, ...], value: int):
        super().__init__(f"overflow at node {path}: {value}")
        self.path = path
        self.value = value


def evaluate(e: Expr, x: Sequence[int], _path: tuple[int, ...] = ()) -> int:
    """Evaluate e on one input vector with Python integers."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return int(x[e.index])
    args = [evaluate(c, x, _path + (i,)) for i, c in enumerate(e.args)]
    v = SCALAR[e.name](*args)
    if not -INT64_LIMIT < v < INT64_LIMIT:
        raise EvalOverflow(_path, v)
    return v


# ---------------------------------------------------------------------------
# Vectorised semantics (numpy int64 with overflow masks)


def _bit_length(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    bl = np.zeros_like(v)
    for shift in (32, 16, 8, 4, 2, 1):
        big = v >= (np.int64(1) << shift)
        v = np.where(big, v >> shift, v)
        bl += big * shift
    return bl + (v >= 1)


def _vec(name: str, a: np.ndarray, b: Optional[np.ndarray]):
    """Returns (result, overflow mask) for one primitive application."""
    ov = None
    if name == "ADD":
        r = a + b
        ov = ((a ^ r) & (b ^ r)) < 0
    elif name == "SUB":
        r = a - b
        ov = ((a ^ b) & (a ^ r)) < 0
    elif name == "TIMES":
        r = a * b
        a1 = np.where(a == 0, 1, a)
        ov = (a != 0) & ((r // a1 != b) | (r % a1 != 0))
    elif name == "DIVIDE":
        b1 = np.where(b == 0, 1, b)
        q = np.abs(a) // np.abs(b1)
        r = np.where(b == 0, 1, np.where((a < 0) != (b < 0), -q, q))
    elif name == "MOD":
        m = np.abs(b)
        r = np.where(m == 0, 0, np.mod(a, np.where(m == 0, 1, m)))
    elif name == "XOR":
        r = a ^ b
    elif name == "AND":
        r = a & b
    elif name == "OR":
        r = a | b
    elif name == "NOT":
        r = np.abs(a) ^ NOT_MASK
    elif name == "LOG2":
        r = np.where(a == 0, 0, _bit_length(np.abs(a)) - 1)
    elif name == "PLUS1":
        r = a + 1
    elif name == "EQUAL":
        r = (a == b).astype(np.int64)
    elif name == "LESS":
        r = (a < b).astype(np.int64)
    elif name == "GREATER":
        r = (a > b).astype(np.int64)
    else:
        raise KeyError(name)
    hit = r == INT64_MIN
    if ov is not None:
        hit |= ov
    return r.astype(np.int64, copy=False), hit


def evaluate_batch(e: Expr, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate e on every row of X (int64, shape rows x width).

    Returns the values and a boolean mask of rows that overflowed somewhere
    in the tree; masked rows carry no meaningful value.
    """
    with np.errstate(all="ignore"):
        return _batch(e, X)


def _batch(e: Expr, X: np.ndarray):
    rows = X.shape[0]
    if isinstance(e, Const):
        return np.full(rows, e.value, dtype=np.int64), np.zeros(rows, dtype=bool)
    if isinstance(e, Var):
        return X[:, e.index].astype(np.int64), np.zeros(rows, dtype=bool)
    vals, masks = zip(*(_batch(c, X) for c in e.args))
    bad = masks[0] if len(masks) == 1 else masks[0] | masks[1]
    r, hit = _vec(e.name, vals[0], vals[1] if len(vals) > 1 else None)
    bad = bad | hit
    if bad.any():
        r = np.where(bad, 0, r)
    return r, bad


# ---------------------------------------------------------------------------
# Tree utilities


def size(e: Expr) -> int:
    if isinstance(e, Call):
        return 1 + sum(size(c) for c in e.args)
    return 1


def depth(e: Expr) -> int:
    if isinstance(e, Call):
        return 1 + max(depth(c) for c in e.args)
    return 1


def paths(e: Expr, prefix: tuple[int, ...] = ()) -> list[tuple[int, ...]]:
    """Preorder list of node addresses (child-index tuples)."""
    out = [prefix]
    if isinstance(e, Call):
        for i, c in enumerate(e.args):
            out += paths(c, prefix + (i,))
    return out


def subtree(e: Expr, path: tuple[int, ...]) -> Expr:
    for i in path:
        e = e.args[i]
    return e


def replace(e: Expr, path: tuple[int, ...], new: Expr) -> Expr:
    if not path:
        return new
    i = path[0]
    args = list(e.args)
    args[i] = replace(args[i], path[1:], new)
    return Call(e.name, tuple(args))


def validate(e: Expr, width: int, max_depth: int = MAX_DEPTH) -> None:
    """Raise ValueError if e has an arity or variable-index defect or is too deep."""
    if depth(e) > max_depth:
        raise ValueError(f"tree depth {depth(e)} exceeds {max_depth}")
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, Var) and not 0 <= n.index < width:
            raise ValueError(f"variable {n.name} index {n.index} out of range")
        if isinstance(n, Call):
            if ARITY.get(n.name) != len(n.args):
                raise ValueError(f"{n.name} with {len(n.args)} arguments")
            stack.extend(n.args)


# ---------------------------------------------------------------------------
# Text format


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def to_text(e: Expr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    return f"{e.name}({','.join(to_text(c) for c in e.args)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "(),+-*":
                raise FormulaSyntaxError(f"unexpected character {ch!r}", m.start(3))
            toks.append((ch, ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = {n: k for k, n in enumerate(names)}

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: Optional[str] = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {want}, got {got}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            left = Call("ADD" if op == "+" else "SUB", (left, self.term()))
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[0] == "*":
            self.take()
            left = Call("TIMES", (left, self.unary()))
        return left

    def unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.take()
            if self.peek()[0] == "int":
                return self._const(self.take(), sign=-1)
            return Call("SUB", (Const(0), self.unary()))
        return self.atom()

    def _const(self, tok, sign: int = 1) -> Const:
        v = sign * int(tok[1])
        if not -INT64_LIMIT < v < INT64_LIMIT:
            raise FormulaSyntaxError("integer literal out of 64-bit range", tok[2])
        return Const(v)

    def atom(self) -> Expr:
        tok = self.peek()
        kind, text, off = tok
        if kind == "int":
            return self._const(self.take())
        if kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if kind == "ident":
            self.take()
            if self.peek()[0] == "(":
                return self.call(text, off)
            if text in self.names:
                return Var(self.names[text], text)
            if text.upper() in ARITY:
                raise FormulaSyntaxError(f"primitive {text} used without arguments", off)
            raise FormulaSyntaxError(f"unknown identifier {text!r}", off)
        if kind == "end":
            raise FormulaSyntaxError("unexpected end of input", off)
        raise FormulaSyntaxError(f"unexpected {text!r}", off)

    def call(self, name: str, off: int) -> Expr:
        prim = name.upper()
        if prim not in ARITY:
            raise FormulaSyntaxError(f"unknown primitive {name!r}", off)
        self.take("(")
        args = [self.expr()]
        while self.peek()[0] == ",":
            self.take()
            args.append(self.expr())
        self.take(")")
        if len(args) != ARITY[prim]:
            raise FormulaSyntaxError(
                f"{prim} takes {ARITY[prim]} argument(s), got {len(args)}", off
            )
        return Call(prim, tuple(args))


def parse(text: str, names: Sequence[str] = ("h",)) -> Expr:
    """Parse formula text; ``names`` binds identifiers to input positions."""
    p = _Parser(text, names)
    e = p.expr()
    p.take("end")
    return e


# ---------------------------------------------------------------------------
# Random trees


def random_leaf(names: Sequence[str], rng: random.Random, constants=CONSTANTS) -> Expr:
    k = rng.randrange(len(names) + len(constants))
    if k < len(names):
        return Var(k, names[k])
    return Const(constants[k - len(names)])


def random_tree(
    names: Union[int, Sequence[str]],
    depth_range: tuple[int, int],
    method: str,
    rng: random.Random,
    constants: Sequence[int] = CONSTANTS,
) -> Expr:
    """Random tree of depth drawn from depth_range by the full or grow method.

    A bare leaf has depth 1.  ``names`` may be an input width instead of a
    list of variable names.
    """
    if isinstance(names, int):
        names = default_names(names)
    lo, hi = depth_range
    if not 1 <= lo <= hi:
        raise ValueError(f"bad depth range {depth_range}")
    if method not in ("full", "grow"):
        raise ValueError(f"unknown init method {method!r}")
    d = rng.randint(lo, hi)
    n_terms = len(names) + len(constants)

    def build(level: int) -> Expr:
        if level == d:
            return random_leaf(names, rng, constants)
        if method == "grow":
            k = rng.randrange(len(PRIMITIVES) + n_terms)
            if k >= len(PRIMITIVES):
                return random_leaf(names, rng, constants)
            prim = PRIMITIVES[k]
        else:
            prim = rng.choice(PRIMITIVES)
        return Call(prim, tuple(build(level + 1) for _ in range(ARITY[prim])))

    return build(1)
