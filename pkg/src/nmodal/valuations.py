"""Legal valuations of an Nmatrix over a finite closure, and the verdicts built on them.

A valuation is enumerated along the closure order: variables range over the
whole value set, every compound ranges over the table cell selected by the
values already given to its children.  First coordinates of compounds are
therefore never guessed, they fall out of the tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import (
    Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple,
)

from .config import DEFAULT, BudgetExceeded
from .formula import Closure, Formula, Var, closure, subformulas, to_text
from .matrices import MatrixSpec, Snapshot, connective_of, snapshot_text

VALID = "Valid"
COUNTERMODEL = "Countermodel"
NO_COUNTERMODEL = "NoCountermodelUpToBound"

# A constraint is a tuple of closure members plus a predicate over their snapshots.
Constraint = Tuple[Tuple[Formula, ...], Callable[..., bool]]


@dataclass(frozen=True)
class Valuation:
    closure: Closure
    snapshots: Tuple[Snapshot, ...]
    _index: Dict[Formula, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {f: i for i, f in enumerate(self.closure)})

    def __getitem__(self, f: Formula) -> Snapshot:
        return self.snapshots[self._index[f]]

    def __contains__(self, f: Formula) -> bool:
        return f in self._index

    def __len__(self):
        return len(self.closure)

    def get(self, f: Formula, default=None):
        i = self._index.get(f)
        return default if i is None else self.snapshots[i]

    def coord(self, f: Formula, k: int) -> int:
        """The k-th coordinate (1-based) of v(f): v1, v2 or v3."""
        return self[f][k - 1]

    def items(self):
        return zip(self.closure, self.snapshots)

    def as_dict(self) -> Dict[Formula, Snapshot]:
        return dict(self.items())

    def to_json(self) -> List[dict]:
        return [{"formula": to_text(f), "snapshot": list(z)} for f, z in self.items()]

    def __str__(self):
        return ", ".join(f"v({to_text(f)})={snapshot_text(z)}" for f, z in self.items())


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: object = None
    info: Mapping = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.status == VALID

    def to_json(self) -> dict:
        out = {"status": self.status}
        out["witness"] = None if self.witness is None else self.witness.to_json()
        out.update(self.info)
        return out


# ------------------------------------------------------------------ budget

def free_bits(m: MatrixSpec, c: Closure) -> float:
    """log2 of an upper bound on the number of valuations over ``c``."""
    widest = _widest_cells(m)
    bits = 0.0
    for f in c:
        if isinstance(f, Var):
            n = len(m.values)
        elif connective_of(f) in widest:
            n = widest[connective_of(f)]
        else:
            raise ValueError(f"{m.name} has no table for {connective_of(f)!r}")
        bits += math.log2(n)
    return bits


@lru_cache(maxsize=None)
def _widest_cells(m: MatrixSpec) -> Dict[str, int]:
    return {conn: max(map(len, table.values())) for conn, table in m.tables.items()}


def check_budget(m: MatrixSpec, c: Closure, max_free_bits: Optional[int]) -> None:
    limit = DEFAULT.max_free_bits if max_free_bits is None else max_free_bits
    bits = free_bits(m, c)
    if bits > limit + 1e-9:
        raise BudgetExceeded(
            f"closure of {len(c)} formulas has {bits:.1f} free bits, cap is {limit}"
        )


# ------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _sorted_tables(m: MatrixSpec):
    # ascending snapshot order: the "0 before 1" enumeration order
    return {
        conn: {args: tuple(sorted(cell)) for args, cell in table.items()}
        for conn, table in m.tables.items()
    }


def search(
    m: MatrixSpec,
    c: Closure,
    constraints: Sequence[Constraint] = (),
    allowed: Optional[Mapping[Formula, Iterable[Snapshot]]] = None,
    rng=None,
) -> Iterator[Tuple[Snapshot, ...]]:
    """Depth-first enumeration of snapshot vectors over ``c``.

    Each constraint is tested as soon as its last member has a value, and
    ``allowed`` narrows the candidates of individual formulas.  Order is
    lexicographic in closure order with snapshots ascending, unless ``rng``
    is given, in which case candidates are shuffled at every step.
    """
    index = {f: i for i, f in enumerate(c)}
    tables = _sorted_tables(m)
    values = tuple(sorted(m.values))
    plan = []
    for f in c:
        if isinstance(f, Var):
            plan.append((None, ()))
        else:
            kids = tuple(index[g] for g in f.children())
            plan.append((tables[connective_of(f)], kids))
    checks: List[list] = [[] for _ in c]
    for members, pred in constraints:
        idx = tuple(index[g] for g in members)
        checks[max(idx)].append((idx, pred))
    narrowed = {}
    for f, zs in (allowed or {}).items():
        if f in index:
            narrowed[index[f]] = frozenset(zs)

    n = len(c)
    vals: List[Optional[Snapshot]] = [None] * n

    def rec(i: int):
        if i == n:
            yield tuple(vals)
            return
        table, kids = plan[i]
        if table is None:
            cands = values
        else:
            cands = table[tuple(vals[k] for k in kids)]
        keep = narrowed.get(i)
        if rng is not None:
            cands = rng.sample(cands, len(cands))
        for z in cands:
            if keep is not None and z not in keep:
                continue
            vals[i] = z
            if all(pred(*(vals[k] for k in idx)) for idx, pred in checks[i]):
                yield from rec(i + 1)
        vals[i] = None

    return rec(0)


def enumerate_valuations(
    m: MatrixSpec, c: Closure, max_free_bits: Optional[int] = None
) -> Iterator[Valuation]:
    check_budget(m, c, max_free_bits)
    c = tuple(c)
    return (Valuation(c, zs) for zs in search(m, c))


def find_valuation(
    m: MatrixSpec,
    c: Closure,
    fixed: Optional[Mapping[Formula, Snapshot]] = None,
    refute: Optional[Formula] = None,
    constraints: Sequence[Constraint] = (),
) -> Optional[Valuation]:
    """First legal valuation over ``c`` extending ``fixed`` (and refuting ``refute``), or None."""
    allowed: Dict[Formula, set] = {}
    for f, z in (fixed or {}).items():
        if f not in c:
            raise ValueError(f"{to_text(f)} is not in the closure")
        allowed[f] = {tuple(z)}
    if refute is not None:
        bad = {z for z in m.values if not m.designated(z)}
        allowed[refute] = allowed.get(refute, set(m.values)) & bad
    c = tuple(c)
    for zs in search(m, c, constraints, allowed):
        return Valuation(c, zs)
    return None


# ----------------------------------------------------------------- verdicts

def decide(
    m: MatrixSpec,
    c: Closure,
    premises: Sequence[Formula],
    goal: Formula,
    constraints: Sequence[Constraint] = (),
    max_free_bits: Optional[int] = None,
) -> Verdict:
    check_budget(m, c, max_free_bits)
    c = tuple(c)
    at = {f: i for i, f in enumerate(c)}
    p_idx = [at[p] for p in premises]
    g = at[goal]
    for zs in search(m, c, constraints):
        if zs[g][0] == 0 and all(zs[i][0] == 1 for i in p_idx):
            return Verdict(COUNTERMODEL, Valuation(c, zs))
    return Verdict(VALID)


def check_validity(m: MatrixSpec, goal: Formula, max_free_bits: Optional[int] = None) -> Verdict:
    return decide(m, subformulas(goal), (), goal, max_free_bits=max_free_bits)


def check_consequence_local(
    m: MatrixSpec,
    premises: Iterable[Formula],
    goal: Formula,
    max_free_bits: Optional[int] = None,
) -> Verdict:
    premises = list(premises)
    c = closure(premises + [goal])
    return decide(m, c, premises, goal, max_free_bits=max_free_bits)


# ------------------------------------------------------------ re-checking

def table_violations(m: MatrixSpec, v: Valuation) -> List[str]:
    """Closure conditions ``v`` breaks; empty for a legal valuation."""
    problems = []
    for f, z in v.items():
        if z not in m.values:
            problems.append(f"v({to_text(f)})={snapshot_text(z)} is not a value of {m.name}")
            continue
        if isinstance(f, Var):
            continue
        args = tuple(v[g] for g in f.children())
        if any(a not in m.values for a in args):
            continue
        if z not in m.apply(connective_of(f), *args):
            problems.append(f"v({to_text(f)})={snapshot_text(z)} outside its table cell")
    return problems
