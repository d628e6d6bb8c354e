"""Problem model for the axial three-index assignment problem (AP3).

An instance is a dense ``n x n x n`` integer cost array. A solution is a pair
of permutations ``(p, q)`` selecting the triples ``(i, p[i], q[i])``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import IO, Union

import numpy as np


class ParseError(ValueError):
    """Raised when an instance or solution file is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _as_permutation(values, n: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64).reshape(-1)
    if arr.shape[0] != n:
        raise ValueError(f"{name} has length {arr.shape[0]}, expected {n}")
    if n and (arr.min() < 0 or arr.max() >= n or np.bincount(arr, minlength=n).max() != 1):
        raise ValueError(f"{name} is not a permutation of 0..{n - 1}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ap3Instance:
    cost: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.cost)
        if arr.ndim != 3 or arr.shape[0] == 0 or len(set(arr.shape)) != 1:
            raise ValueError(f"cost must be a non-empty n x n x n array, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
                raise ValueError("costs must be finite integers")
        arr = np.array(arr, dtype=np.int64, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "cost", arr)

    @property
    def n(self) -> int:
        return self.cost.shape[0]

    @property
    def dead_bound(self) -> int:
        # Strictly above every achievable bound/solution cost.
        return self.n * int(self.cost.max()) + 1

    def __eq__(self, other):
        if not isinstance(other, Ap3Instance):
            return NotImplemented
        return np.array_equal(self.cost, other.cost)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Assignment:
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.p).size
        object.__setattr__(self, "p", _as_permutation(self.p, n, "p"))
        object.__setattr__(self, "q", _as_permutation(self.q, n, "q"))

    @property
    def n(self) -> int:
        return self.p.shape[0]

    @classmethod
    def identity(cls, n: int) -> Assignment:
        return cls(np.arange(n), np.arange(n))

    def triples(self) -> list[tuple[int, int, int]]:
        return [(i, int(j), int(k)) for i, (j, k) in enumerate(zip(self.p, self.q))]

    def key(self) -> tuple:
        return tuple(self.p.tolist()), tuple(self.q.tolist())

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        return np.array_equal(self.p, other.p) and np.array_equal(self.q, other.q)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Assignment(p={self.p.tolist()}, q={self.q.tolist()})"


@dataclass(frozen=True)
class SolveResult:
    assignment: Assignment
    cost: int
    elapsed: float = 0.0
    metadata: dict[str, str] = field(default_factory=dict)


def evaluate(instance: Ap3Instance, a: Assignment) -> int:
    """Total cost ``sum_i c[i, p[i], q[i]]``."""
    if a.n != instance.n:
        raise ValueError(f"assignment has size {a.n}, instance has size {instance.n}")
    return int(instance.cost[np.arange(a.n), a.p, a.q].sum())


def make_result(instance: Ap3Instance, a: Assignment, elapsed: float = 0.0,
                metadata: dict[str, str] | None = None) -> SolveResult:
    return SolveResult(a, evaluate(instance, a), elapsed, dict(metadata or {}))


def random_instance(n: int, lo: int, hi: int, seed: int) -> Ap3Instance:
    """Uniform integer costs in ``[lo, hi]`` drawn from a PCG64 stream."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if lo > hi:
        raise ValueError(f"empty cost range: lo={lo} > hi={hi}")
    rng = np.random.default_rng(seed)
    return Ap3Instance(rng.integers(lo, hi, size=(n, n, n), dtype=np.int64, endpoint=True))


# -- text I/O -------------------------------------------------------------

Source = Union[str, bytes, IO]


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in line.split():
            yield lineno, tok


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def read_instance(source: Source) -> Ap3Instance:
    """Parse the whitespace-separated instance format (``n`` then ``n**3`` costs)."""
    toks = list(_tokens(_read_text(source)))
    if not toks:
        raise ParseError("empty input: missing header", 1)
    lineno, head = toks[0]
    n = _parse_int(head, lineno)
    if n < 1:
        raise ParseError(f"n must be positive, got {n}", lineno)
    body = toks[1:]
    expected = n ** 3
    if len(body) != expected:
        last = body[-1][0] if body else lineno
        raise ParseError(f"expected {expected} cost entries for n={n}, found {len(body)}", last)
    values = [_parse_int(tok, ln) for ln, tok in body]
    return Ap3Instance(np.array(values, dtype=np.int64).reshape(n, n, n))


def format_instance(instance: Ap3Instance) -> str:
    n = instance.n
    lines = [str(n)]
    for row in instance.cost.reshape(n * n, n):
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_instance(instance: Ap3Instance, sink: IO) -> None:
    text = format_instance(instance)
    if isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


def format_solution(result: SolveResult) -> str:
    a = result.assignment
    return "\n".join([
        str(a.n),
        " ".join(map(str, a.p.tolist())),
        " ".join(map(str, a.q.tolist())),
        str(result.cost),
    ]) + "\n"


def read_solution(source: Source) -> tuple[Assignment, int]:
    lines = [ln for ln in _read_text(source).splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 4:
        raise ParseError(f"solution needs 4 lines, found {len(lines)}")
    n = _parse_int(lines[0].strip(), 1)
    p = [_parse_int(t, 2) for t in lines[1].split()]
    q = [_parse_int(t, 3) for t in lines[2].split()]
    if len(p) != n or len(q) != n:
        raise ParseError(f"permutation length does not match n={n}")
    try:
        a = Assignment(p, q)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return a, _parse_int(lines[3].strip(), 4)
