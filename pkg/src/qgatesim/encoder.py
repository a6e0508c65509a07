"""Encoding of classical Boolean functions as unitary permutation operators.

A function f: {0,1}^n -> {0,1}^m is given as an exhaustive truth table.
It is made reversible by the injective extension

    F(x, y) = (x, f(x) XOR y)       x n bits, y m bits

which is a bijection on {0,1}^(n+m) (and an involution, since XOR-ing f(x)
twice cancels).  Reading input and output bit strings as basis labels then
yields a permutation operator U with U|s> = |F(s)>, i.e. the matrix with
[U]_ij = 1 exactly when column j maps to row i.

Bit strings follow the package convention: leftmost character is the most
significant bit, so x = "011" is basis index 3.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .linalg import PermutationOperator, basis_state


def _check_bits(bits: str, width: int, what: str) -> str:
    if not isinstance(bits, str) or len(bits) != width or set(bits) - {"0", "1"}:
        raise ValueError(f"{what} must be a {width}-bit string, got {bits!r}")
    return bits


def _xor(a: str, b: str) -> str:
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


@dataclass(frozen=True)
class MarkedSet:
    """Nonempty proper subset of {0,1}^n designating search targets."""

    n: int
    elements: frozenset[str]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        elements = frozenset(self.elements)
        if not 1 <= len(elements) < 2**self.n:
            raise ValueError(
                f"marked set must contain between 1 and 2^{self.n}-1 elements, "
                f"got {len(elements)}"
            )
        for x in elements:
            _check_bits(x, self.n, "marked element")
        object.__setattr__(self, "elements", elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def indices(self) -> frozenset[int]:
        return frozenset(int(x, 2) for x in self.elements)


@dataclass(frozen=True)
class TruthTable:
    """Exhaustive table for f: {0,1}^n -> {0,1}^m."""

    n: int
    m: int
    rows: Mapping[str, str]

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n} m={self.m}")
        rows = dict(self.rows)
        expected = {format(i, f"0{self.n}b") for i in range(2**self.n)}
        if set(rows) != expected:
            missing = sorted(expected - set(rows))[:4]
            extra = sorted(set(rows) - expected)[:4]
            raise ValueError(
                f"table must cover every {self.n}-bit input exactly once"
                + (f"; missing {missing}" if missing else "")
                + (f"; unexpected {extra}" if extra else "")
            )
        for x, fx in rows.items():
            if not isinstance(fx, str) or len(fx) != self.m or set(fx) - {"0", "1"}:
                raise ValueError(f"row {x!r}: value must be an {self.m}-bit string, got {fx!r}")
        object.__setattr__(self, "rows", rows)

    def __call__(self, x: str) -> str:
        return self.rows[x]


@dataclass(frozen=True)
class InjectiveTable:
    """Bijection on {0,1}^width produced by injective_extension."""

    width: int
    rows: Mapping[str, str]

    def __post_init__(self):
        rows = dict(self.rows)
        expected = {format(i, f"0{self.width}b") for i in range(2**self.width)}
        if set(rows) != expected:
            raise ValueError(f"table must cover every {self.width}-bit input exactly once")
        for s, t in rows.items():
            _check_bits(t, self.width, f"row {s!r} output")
        if len(set(rows.values())) != len(rows):
            seen: dict[str, str] = {}
            for s, t in sorted(rows.items()):
                if t in seen:
                    raise ValueError(
                        f"extension is not injective: rows {seen[t]!r} and {s!r} "
                        f"both map to {t!r}"
                    )
                seen[t] = s
        object.__setattr__(self, "rows", rows)

    def __call__(self, s: str) -> str:
        return self.rows[s]


def truth_table_from_marked(marked: MarkedSet) -> TruthTable:
    """Indicator table: f(x) = 1 exactly on the marked elements (m = 1)."""
    rows = {
        format(i, f"0{marked.n}b"): "1" if format(i, f"0{marked.n}b") in marked.elements else "0"
        for i in range(2**marked.n)
    }
    return TruthTable(n=marked.n, m=1, rows=rows)


def injective_extension(table: TruthTable) -> InjectiveTable:
    """Extend f to the bijection F(x, y) = (x, f(x) XOR y) on n+m bits."""
    width = table.n + table.m
    rows: dict[str, str] = {}
    for x, fx in table.rows.items():
        for j in range(2**table.m):
            y = format(j, f"0{table.m}b")
            rows[x + y] = x + _xor(fx, y)
    return InjectiveTable(width=width, rows=rows)


def code_map(bits: str) -> np.ndarray:
    """Basis vector for a bit string: |x0...x_{k-1}> at index int(x, 2).

    Single bits code as tau(0) = (1, 0) and tau(1) = (0, 1); longer strings
    are the tensor product of their bit codes, which is exactly the basis
    vector picked out here.
    """
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"expected a nonempty bit string, got {bits!r}")
    return basis_state(int(bits, 2), 2 ** len(bits))


def permutation_operator(table: InjectiveTable) -> PermutationOperator:
    """Permutation U with U|s> = |F(s)| for every basis label s."""
    dim = 2**table.width
    targets = np.empty(dim, dtype=np.int64)
    for s, t in table.rows.items():
        targets[int(s, 2)] = int(t, 2)
    return PermutationOperator(targets)


def oracle_from_marked(marked: MarkedSet) -> PermutationOperator:
    """Shorthand: marked set -> indicator table -> extension -> permutation."""
    return permutation_operator(injective_extension(truth_table_from_marked(marked)))


def truth_table_from_json(text_or_obj) -> TruthTable:
    """Parse a truth table from JSON.

    Two layouts are accepted:
      {"n": 3, "m": 1, "rows": {"000": "0", ...}}   exhaustive rows
      {"n": 3, "marked": ["011", "101"]}            indicator shorthand, m = 1
    """
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, (str, bytes)) else text_or_obj
    if not isinstance(obj, dict):
        raise ValueError("truth table JSON must be an object")
    if "n" not in obj or not isinstance(obj["n"], int):
        raise ValueError('truth table JSON needs an integer "n" field')
    n = obj["n"]
    if "rows" in obj:
        m = obj.get("m")
        if not isinstance(m, int):
            raise ValueError('rows layout needs an integer "m" field')
        rows = obj["rows"]
        if not isinstance(rows, dict):
            raise ValueError('"rows" must be an object mapping inputs to outputs')
        return TruthTable(n=n, m=m, rows=rows)
    if "marked" in obj:
        marked = obj["marked"]
        if not isinstance(marked, list) or not all(isinstance(x, str) for x in marked):
            raise ValueError('"marked" must be a list of bit strings')
        return truth_table_from_marked(MarkedSet(n=n, elements=frozenset(marked)))
    raise ValueError('truth table JSON needs either a "rows" or a "marked" field')


def marked_set_from_table(table: TruthTable) -> MarkedSet:
    """Recover the marked set from a single-output indicator table."""
    if table.m != 1:
        raise ValueError(f"marked set requires m = 1, table has m = {table.m}")
    elements = frozenset(x for x, fx in table.rows.items() if fx == "1")
    return MarkedSet(n=table.n, elements=elements)
