"""Snapshot Nmatrices for M, MK, MKT, MKT4 and the bimodal M2.

A snapshot ``(z1, z2)`` records the truth of A and of #A; bimodal snapshots
``(z1, z2, z3)`` record A, #1A and #2A.  A cell written ``(b,*)`` denotes every
value of the matrix whose first coordinate is ``b``, so in the three-valued
matrices ``(0,*)`` is just ``{(0,0)}``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Mapping, Sequence, Tuple

from .formula import BIMODAL, UNIMODAL, Formula, Imp, Mod, Neg

Snapshot = Tuple[int, ...]
Cell = FrozenSet[Snapshot]

NEG, IMP, BOX, BOX1, BOX2 = "~", "->", "#", "#1", "#2"
SYSTEMS = ("M", "MK", "MKT", "MKT4", "M2")


class UnknownSystem(ValueError):
    pass


def connective_of(f: Formula) -> str:
    if isinstance(f, Neg):
        return NEG
    if isinstance(f, Imp):
        return IMP
    if isinstance(f, Mod):
        return BOX if f.index is None else f"#{f.index}"
    raise TypeError(f"{f!r} has no main connective")


@dataclass(frozen=True, eq=False)
class MatrixSpec:
    name: str
    arity: int
    values: Tuple[Snapshot, ...]
    tables: Mapping[str, Mapping[Tuple[Snapshot, ...], Cell]]

    @property
    def signature(self) -> str:
        return BIMODAL if self.arity == 3 else UNIMODAL

    @property
    def connectives(self) -> Tuple[str, ...]:
        return tuple(self.tables)

    def designated(self, z: Snapshot) -> bool:
        return z[0] == 1

    def fiber(self, first: int) -> Cell:
        return frozenset(z for z in self.values if z[0] == first)

    def apply(self, connective: str, *args: Snapshot) -> Cell:
        try:
            table = self.tables[connective]
        except KeyError:
            raise ValueError(f"{self.name} has no connective {connective!r}") from None
        for z in args:
            if z not in self.values:
                raise ValueError(f"{z} is not a truth value of {self.name}")
        try:
            return table[tuple(args)]
        except KeyError:
            raise ValueError(f"wrong number of arguments for {connective!r}") from None

    def __repr__(self):
        return f"MatrixSpec({self.name!r})"


def apply_multiop(m: MatrixSpec, connective: str, args: Sequence[Snapshot]) -> Cell:
    return m.apply(connective, *args)


def designated(m: MatrixSpec, z: Snapshot) -> bool:
    if z not in m.values:
        raise ValueError(f"{z} is not a truth value of {m.name}")
    return m.designated(z)


# --------------------------------------------------------------- tables
# Rows and columns run (1,1), (1,0), (0,1), (0,0): the display order.

V4 = ((1, 1), (1, 0), (0, 1), (0, 0))
V3 = tuple(z for z in V4 if z[0] >= z[1])
V8 = tuple(itertools.product((1, 0), repeat=3))

_M_IMP = """
(1,*) (1,*) (0,*) (0,*)
(1,*) (1,*) (0,*) (0,*)
(1,*) (1,*) (1,*) (1,*)
(1,*) (1,*) (1,*) (1,*)
"""
_M_UNARY = """
(0,*) (1,*)
(0,*) (0,*)
(1,*) (1,*)
(1,*) (0,*)
"""
_MK_IMP = """
(1,*) (1,0) (0,*) (0,0)
(1,*) (1,*) (0,*) (0,*)
(1,*) (1,0) (1,*) (1,0)
(1,*) (1,*) (1,*) (1,*)
"""
_MKT_IMP = """
(1,*) (1,0) (0,0)
(1,*) (1,*) (0,*)
(1,*) (1,*) (1,*)
"""
_MKT_UNARY = """
(0,*) (1,*)
(0,*) (0,*)
(1,*) (0,*)
"""
_MKT4_UNARY = """
(0,*) (1,1)
(0,*) (0,*)
(1,*) (0,*)
"""
# #1 row over (1,1,1), (1,1,0), ..., (0,0,0)
_M2_BOX1 = "(1,*,*) (1,*,*) (0,*,*) (0,*,*) (1,*,*) (1,*,*) (0,*,*) (0,*,*)"


def _cell(text: str, values: Sequence[Snapshot]) -> Cell:
    parts = text.strip("()").split(",")
    out = frozenset(
        z for z in values
        if all(p == "*" or int(p) == b for p, b in zip(parts, z))
    )
    if not out:
        raise ValueError(f"cell {text} is empty over {values}")
    return out


def _rows(text: str) -> list:
    return [line.split() for line in text.strip().splitlines()]


def _binary(text: str, values) -> Dict[Tuple[Snapshot, ...], Cell]:
    rows = _rows(text)
    return {
        (z, w): _cell(cell, values)
        for z, row in zip(values, rows)
        for w, cell in zip(values, row)
    }


def _unary(text: str, values, column: int) -> Dict[Tuple[Snapshot, ...], Cell]:
    return {(z,): _cell(row[column], values) for z, row in zip(values, _rows(text))}


def _build(name: str, values, imp: str, unary: str) -> MatrixSpec:
    return MatrixSpec(
        name=name,
        arity=2,
        values=tuple(values),
        tables={
            NEG: _unary(unary, values, 0),
            IMP: _binary(imp, values),
            BOX: _unary(unary, values, 1),
        },
    )


def _m2() -> MatrixSpec:
    fiber = {b: _cell(f"({b},*,*)", V8) for b in (0, 1)}
    box1 = dict(((z,), _cell(cell, V8)) for z, cell in zip(V8, _M2_BOX1.split()))
    return MatrixSpec(
        name="M2",
        arity=3,
        values=V8,
        tables={
            NEG: {(z,): fiber[1 - z[0]] for z in V8},
            IMP: {(z, w): fiber[max(1 - z[0], w[0])] for z in V8 for w in V8},
            BOX1: box1,
            # #2 reads the third coordinate: (z3,*,*)
            BOX2: {(z,): fiber[z[2]] for z in V8},
        },
    )


@lru_cache(maxsize=None)
def matrix_for(name: str) -> MatrixSpec:
    if name == "M":
        return _build("M", V4, _M_IMP, _M_UNARY)
    if name == "MK":
        return _build("MK", V4, _MK_IMP, _M_UNARY)
    if name == "MKT":
        return _build("MKT", V3, _MKT_IMP, _MKT_UNARY)
    if name == "MKT4":
        return _build("MKT4", V3, _MKT_IMP, _MKT4_UNARY)
    if name == "M2":
        return _m2()
    raise UnknownSystem(f"unknown system {name!r}; expected one of {', '.join(SYSTEMS)}")


# ------------------------------------------------- algebraic side conditions

def implies(a: int, b: int) -> int:
    return int(a <= b)


def mk_implication_condition(z: Snapshot, w: Snapshot, x: Snapshot) -> bool:
    """x may be a value of z -> w in MK."""
    return x[0] == implies(z[0], w[0]) and x[1] <= implies(z[1], w[1])


def mkt4_modality_condition(z: Snapshot, x: Snapshot) -> bool:
    """x may be a value of #z in MKT4."""
    return x[0] == z[1] and x[1] >= z[1]


# --------------------------------------------------------------- rendering

def snapshot_text(z: Snapshot) -> str:
    return "(" + ",".join(map(str, z)) + ")"


def cell_text(m: MatrixSpec, cell: Cell) -> str:
    for b in (0, 1):
        full = m.fiber(b)
        if cell == full and len(full) > 1:
            return "(" + ",".join([str(b)] + ["*"] * (m.arity - 1)) + ")"
    ordered = [z for z in m.values if z in cell]
    if len(ordered) == 1:
        return snapshot_text(ordered[0])
    return "{" + " ".join(map(snapshot_text, ordered)) + "}"


def render_table(m: MatrixSpec) -> str:
    lines = [f"{m.name}: values {' '.join(map(snapshot_text, m.values))}"]
    lines.append("")
    lines.append(f"{IMP} | " + " ".join(map(snapshot_text, m.values)))
    for z in m.values:
        cells = (cell_text(m, m.tables[IMP][z, w]) for w in m.values)
        lines.append(f"{snapshot_text(z)} | " + " ".join(cells))
    unary = [c for c in m.connectives if c != IMP]
    lines.append("")
    lines.append("A | " + " ".join(f"{c}A" for c in unary))
    for z in m.values:
        cells = (cell_text(m, m.tables[c][(z,)]) for c in unary)
        lines.append(f"{snapshot_text(z)} | " + " ".join(cells))
    return "\n".join(lines)


def table_json(m: MatrixSpec) -> str:
    tables = {}
    for c, table in m.tables.items():
        tables[c] = {
            " ".join(map(snapshot_text, args)): [list(z) for z in m.values if z in cell]
            for args, cell in table.items()
        }
    return json.dumps(
        {"name": m.name, "values": [list(z) for z in m.values], "tables": tables},
        indent=2,
    )
