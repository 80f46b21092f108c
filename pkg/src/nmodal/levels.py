"""Level valuations for the necessitation rule over a finite fragment.

``F^0`` is the set of (restricted) valuations over the fragment and
``F^{m+1}`` keeps the members of ``F^m`` that give second coordinate 1 to
every fragment formula designated by all of ``F^m``.  Because every level is
``F^0`` plus "v2(B) = 1" for a growing set of formulas B, a level is stored
as that set, and membership questions go to a SAT solver over a CNF
encoding of the fragment's valuation space.

Quantifying over a finite fragment instead of all formulas can only leave
extra valuations in place, so a Valid verdict carries over to the full
construction while a countermodel may be an artefact of the fragment.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from pysat.solvers import Solver

from .config import DEFAULT, Budgets, BudgetExceeded
from .formula import (
    UNIMODAL, Closure, Formula, Imp, Mod, Var, closure, to_text,
)
from .matrices import connective_of
from .restrictions import RNSystem, as_system
from .valuations import (
    COUNTERMODEL, VALID, Valuation, Verdict, check_budget, search,
)


class GoalOutsideFragment(ValueError):
    pass


@dataclass(frozen=True)
class Fragment:
    formulas: Closure
    provenance: str = "user-supplied"

    def __post_init__(self):
        present = set(self.formulas)
        for f in self.formulas:
            for g in f.children():
                if g not in present:
                    raise ValueError(f"fragment is not subformula-closed: {to_text(g)} missing")

    @classmethod
    def of(cls, formulas: Iterable[Formula], provenance: str = "user-supplied") -> "Fragment":
        return cls(closure(formulas), provenance)

    def __contains__(self, f):
        return f in set(self.formulas)

    def __len__(self):
        return len(self.formulas)

    def to_json(self) -> dict:
        return {"provenance": self.provenance, "formulas": [to_text(f) for f in self.formulas]}


# ------------------------------------------------------------ CNF encoding

class _Space:
    """CNF for the legal valuations of ``sys`` over closure ``c``.

    Boolean variable ``i * arity + k + 1`` is coordinate k of v(c[i]).
    """

    def __init__(self, sys: RNSystem, c: Closure):
        self.sys = sys
        self.c = tuple(c)
        self.at = {f: i for i, f in enumerate(self.c)}
        m = sys.base
        self.arity = m.arity
        self.values = tuple(sorted(m.values))
        everything = list(itertools.product((0, 1), repeat=self.arity))
        clauses: List[List[int]] = []
        for i, f in enumerate(self.c):
            if isinstance(f, Var):
                for x in everything:
                    if x not in m.values:
                        clauses.append(self._block([(i, x)]))
                continue
            kids = [self.at[g] for g in f.children()]
            table = m.tables[connective_of(f)]
            for args in itertools.product(self.values, repeat=len(kids)):
                cell = table[args]
                for x in everything:
                    if x not in cell:
                        clauses.append(self._block(list(zip(kids, args)) + [(i, x)]))
        for members, pred in sys.constraints(self.c):
            idx = [self.at[g] for g in members]
            distinct = sorted(set(idx))
            for combo in itertools.product(self.values, repeat=len(distinct)):
                val = dict(zip(distinct, combo))
                if not pred(*(val[j] for j in idx)):
                    clauses.append(self._block(list(val.items())))
        self.solver = Solver(name="g3", bootstrap_with=clauses)

    def var(self, f: Formula, k: int) -> int:
        """Boolean variable for coordinate k (1-based) of v(f)."""
        return self.at[f] * self.arity + k

    def _lits(self, i: int, z) -> List[int]:
        return [(i * self.arity + k + 1) * (1 if b else -1) for k, b in enumerate(z)]

    def _block(self, pairs) -> List[int]:
        return [-lit for i, z in pairs for lit in self._lits(i, z)]

    def solve(self, assumptions: Sequence[int]) -> Optional[List[int]]:
        if self.solver.solve(assumptions=list(assumptions)):
            return self.solver.get_model()
        return None

    def snapshot(self, model: Sequence[int], i: int) -> Tuple[int, ...]:
        base = i * self.arity
        return tuple(int(model[base + k] > 0) for k in range(self.arity))

    def first(self, assumptions: Sequence[int]) -> Optional[Valuation]:
        """Least model in enumeration order (closure order, snapshots ascending)."""
        fixed = list(assumptions)
        if self.solve(fixed) is None:
            return None
        snaps = []
        for i in range(len(self.c)):
            for z in self.values:
                trial = fixed + self._lits(i, z)
                if self.solve(trial) is not None:
                    fixed = trial
                    snaps.append(z)
                    break
        return Valuation(self.c, tuple(snaps))

    def close(self):
        self.solver.delete()


# ------------------------------------------------------------ level traces

@dataclass
class Level:
    necessitated: Tuple[Formula, ...]
    designated: Tuple[Formula, ...]
    size: Optional[int] = None


@dataclass
class LevelTrace:
    """``levels[m]`` describes ``F^m``.

    ``necessitated`` lists the formulas whose second coordinate is newly
    pinned to 1 on the way into level m; ``designated`` lists the formulas
    newly designated by every member of level m.  The last level is the
    fixpoint.
    """

    system: RNSystem
    fragment: Fragment
    levels: List[Level] = field(default_factory=list)

    @property
    def fixpoint(self) -> int:
        return len(self.levels) - 1

    def required(self, m: int) -> FrozenSet[Formula]:
        return frozenset(f for lv in self.levels[: m + 1] for f in lv.necessitated)

    def designated_by_all(self, m: int) -> FrozenSet[Formula]:
        return frozenset(f for lv in self.levels[: m + 1] for f in lv.designated)

    def valuations(self, m: int, max_free_bits: Optional[int] = None) -> Iterator[Valuation]:
        """Enumerate ``F^m`` explicitly."""
        c = self.fragment.formulas
        check_budget(self.system.base, c, max_free_bits)
        return _enumerate_level(self.system, c, self.required(m))

    def summary(self) -> str:
        lines = [f"{self.system.name} over {len(self.fragment)} formulas ({self.fragment.provenance})"]
        for m, lv in enumerate(self.levels):
            size = "?" if lv.size is None else str(lv.size)
            nec = ", ".join(map(to_text, lv.necessitated)) or "-"
            des = ", ".join(map(to_text, lv.designated)) or "-"
            lines.append(f"F^{m}: {size} valuations; v2=1 imposed: {nec}; designated by all: {des}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "system": self.system.name,
            "fragment": self.fragment.to_json(),
            "fixpoint": self.fixpoint,
            "levels": [
                {
                    "size": lv.size,
                    "necessitated": [to_text(f) for f in lv.necessitated],
                    "designated": [to_text(f) for f in lv.designated],
                }
                for lv in self.levels
            ],
        }


def _enumerate_level(sys: RNSystem, c: Closure, required) -> Iterator[Valuation]:
    up = {f: [z for z in sys.base.values if z[1] == 1] for f in required}
    return (Valuation(c, zs) for zs in search(sys.base, c, sys.constraints(c), up))


def _require_unimodal(sys: RNSystem):
    if sys.signature != UNIMODAL:
        raise ValueError("level valuations are implemented for the unimodal signature only")


def _run_levels(space: _Space, frag: Closure, max_levels: Optional[int]):
    """Yield (necessitated, designated, required) for F^0, F^1, ... up to the fixpoint."""
    required: List[Formula] = []
    designated: set = set()
    necessitated: Tuple[Formula, ...] = ()
    m = 0
    while True:
        assume = [space.var(f, 2) for f in required]
        newly = _designated_by_all(space, frag, assume, designated)
        designated |= set(newly)
        yield necessitated, newly, tuple(required)
        done = set(required)
        pending = [f for f in frag if f in designated and f not in done]
        if not pending or (max_levels is not None and m >= max_levels):
            return
        # F^{m+1} differs from F^m only if some member still gives v2 = 0 to a pending formula
        if all(space.solve(assume + [-space.var(f, 2)]) is None for f in pending):
            return
        required.extend(pending)
        necessitated = tuple(pending)
        m += 1


def _designated_by_all(space: _Space, frag: Closure, assume, known) -> Tuple[Formula, ...]:
    candidates = [f for f in frag if f not in known]
    refuted = set()
    out = []
    for f in candidates:
        if f in refuted:
            continue
        model = space.solve(assume + [-space.var(f, 1)])
        if model is None:
            out.append(f)
            continue
        for g in candidates:
            if model[space.var(g, 1) - 1] < 0:
                refuted.add(g)
    return tuple(out)


def compute_levels(
    sys,
    frag: Fragment,
    max_levels: Optional[int] = None,
    count: bool = True,
    max_free_bits: Optional[int] = None,
) -> LevelTrace:
    """Level hierarchy of ``sys`` over ``frag`` up to its fixpoint.

    With ``count`` the size of each level is computed by enumeration when
    the fragment fits the free-bit budget, otherwise sizes stay None.
    """
    sys = as_system(sys)
    _require_unimodal(sys)
    trace = LevelTrace(sys, frag)
    space = _Space(sys, frag.formulas)
    try:
        for necessitated, newly, required in _run_levels(space, frag.formulas, max_levels):
            trace.levels.append(Level(necessitated, newly))
    finally:
        space.close()
    if count:
        try:
            check_budget(sys.base, frag.formulas, max_free_bits)
        except BudgetExceeded:
            return trace
        for m, lv in enumerate(trace.levels):
            lv.size = sum(1 for _ in _enumerate_level(sys, frag.formulas, trace.required(m)))
    return trace


# ---------------------------------------------------------------- fragments

def _modal_atoms(c: Closure) -> List[Formula]:
    atoms = {f.arg for f in c if isinstance(f, Mod)} | {f for f in c if isinstance(f, Mod)}
    return sorted(atoms, key=lambda f: (f.size, to_text(f)))


def chain(premises: Sequence[Formula], goal: Formula) -> Formula:
    """``B1 -> (B2 -> (... -> (Bk -> goal)))``."""
    out = goal
    for b in reversed(premises):
        out = Imp(b, out)
    return out


def bridges(c: Closure, width: int) -> List[Formula]:
    """Implications between modal atoms of ``c`` with up to ``width`` antecedents.

    A modal atom is a formula under a modality, or a modal formula itself.
    Once such an implication is necessitated, the K condition on it carries
    second coordinates from antecedents to the consequent, which is how
    theorems like #(p & q) -> #p become reachable inside a finite fragment.
    """
    atoms = _modal_atoms(c)
    out = []
    for target in atoms:
        rest = [a for a in atoms if a != target]
        for k in range(1, width + 1):
            for combo in itertools.combinations(rest, k):
                out.append(chain(combo, target))
    return out


def default_fragment(sys, goal: Formula, budgets: Budgets = DEFAULT) -> Fragment:
    """Goal closure plus bridges, then necessitated copies of designated goal subformulas.

    The necessitation step adds #B for every B of the growing goal part that
    every fixpoint valuation designates, ``budgets.fragment_depth`` times.
    """
    sys = as_system(sys)
    _require_unimodal(sys)
    core = list(sys.extended_closure([goal]))
    extra = bridges(tuple(core), budgets.bridge_width)
    frontier = list(core)
    for _ in range(budgets.fragment_depth):
        frag = closure(core + extra)
        space = _Space(sys, frag)
        try:
            designated: set = set()
            for _, newly, _ in _run_levels(space, frag, None):
                designated |= set(newly)
        finally:
            space.close()
        present = set(frag)
        new = [Mod(f) for f in frontier if f in designated and Mod(f) not in present]
        if not new:
            break
        core.extend(new)
        frontier = new
    return Fragment(closure(core + extra), "default")


# ----------------------------------------------------------------- verdicts

def _level_verdict(sys: RNSystem, goal: Formula, frag: Fragment, max_levels) -> Verdict:
    if goal not in set(frag.formulas):
        raise GoalOutsideFragment(f"{to_text(goal)} is not in the fragment")
    missing = [g for g in closure([goal]) if g not in set(frag.formulas)]
    if missing:
        raise GoalOutsideFragment(f"fragment lacks {to_text(missing[0])}")
    space = _Space(sys, frag.formulas)
    try:
        required: Tuple[Formula, ...] = ()
        level = 0
        for level, (_, _, required) in enumerate(_run_levels(space, frag.formulas, max_levels)):
            pass
        assume = [space.var(f, 2) for f in required] + [-space.var(goal, 1)]
        witness = space.first(assume)
    finally:
        space.close()
    info = {"fragment": frag.to_json(), "levels": level}
    if witness is None:
        return Verdict(VALID, None, info)
    return Verdict(COUNTERMODEL, witness, info)


def check_validity_n(
    sys,
    goal: Formula,
    frag: Optional[Fragment] = None,
    max_levels: Optional[int] = None,
    budgets: Budgets = DEFAULT,
) -> Verdict:
    """Validity over the level fixpoint; ``max_levels=0`` stops at ``F^0``."""
    sys = as_system(sys)
    _require_unimodal(sys)
    if frag is None:
        frag = default_fragment(sys, goal, budgets)
    return _level_verdict(sys, goal, frag, max_levels)


def check_consequence_n(
    sys,
    premises: Iterable[Formula],
    goal: Formula,
    frag: Optional[Fragment] = None,
    max_levels: Optional[int] = None,
    budgets: Budgets = DEFAULT,
) -> Verdict:
    """Goal follows if it is valid, or some unfolded premise implication is.

    Premise subsets are tried by size, each in printed-form order.
    """
    sys = as_system(sys)
    premises = sorted(set(premises), key=to_text)
    candidates = [goal]
    for k in range(1, len(premises) + 1):
        candidates.extend(chain(combo, goal) for combo in itertools.combinations(premises, k))
    verdict = None
    for target in candidates:
        if frag is None:
            used = default_fragment(sys, target, budgets)
        else:
            used = Fragment(closure(list(frag.formulas) + [target]), frag.provenance)
        verdict = _level_verdict(sys, target, used, max_levels)
        if verdict.valid:
            return Verdict(VALID, None, dict(verdict.info, unfolded=to_text(target)))
    return Verdict(COUNTERMODEL, verdict.witness, dict(verdict.info, unfolded=to_text(candidates[-1])))
