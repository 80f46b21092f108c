"""Bounded Kripke model checking used as a reference for the necessitation engines.

For a fixed world count every frame of the class is paired with every
assignment.  Truth sets are bit-packed over assignments and vectorised over
frames, so one pass per subformula covers a whole chunk of models.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT, BudgetExceeded
from .formula import Formula, Imp, Mod, Neg, Var, closure, to_text
from .valuations import COUNTERMODEL, NO_COUNTERMODEL, Verdict

FRAME_CLASSES = ("all", "reflexive", "reflexive-transitive")
_FRAME_ALIASES = {"K": "all", "T": "reflexive", "KT": "reflexive", "S4": "reflexive-transitive",
                  "KT4": "reflexive-transitive"}

# per-chunk working set, in bytes of packed truth values
_CHUNK_BYTES = 1 << 23


def frame_class(name: str) -> str:
    name = _FRAME_ALIASES.get(name, name)
    if name not in FRAME_CLASSES:
        raise ValueError(f"unknown frame class {name!r}; known: {', '.join(FRAME_CLASSES)}")
    return name


def is_reflexive(r: np.ndarray) -> bool:
    return bool(np.all(np.diagonal(r)))


def is_transitive(r: np.ndarray) -> bool:
    ri = r.astype(np.int64)
    return bool(np.all((ri @ ri > 0) <= r))


def satisfies_class(r: np.ndarray, cls: str) -> bool:
    cls = frame_class(cls)
    if cls == "all":
        return True
    if cls == "reflexive":
        return is_reflexive(r)
    return is_reflexive(r) and is_transitive(r)


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    relation: Tuple[Tuple[bool, ...], ...]
    assignment: Dict[str, Tuple[bool, ...]]
    world: int = 0

    def successors(self, w: int) -> List[int]:
        return [u for u in range(self.worlds) if self.relation[w][u]]

    def forces(self, f: Formula, w: Optional[int] = None) -> bool:
        w = self.world if w is None else w
        if isinstance(f, Var):
            return self.assignment[f.name][w]
        if isinstance(f, Neg):
            return not self.forces(f.arg, w)
        if isinstance(f, Imp):
            return not self.forces(f.left, w) or self.forces(f.right, w)
        if isinstance(f, Mod):
            return all(self.forces(f.arg, u) for u in self.successors(w))
        raise TypeError(f"not a formula: {f!r}")

    def to_json(self) -> dict:
        return {
            "worlds": self.worlds,
            "relation": [[int(b) for b in row] for row in self.relation],
            "assignment": {k: [int(b) for b in v] for k, v in self.assignment.items()},
            "world": self.world,
        }

    def __str__(self):
        edges = ", ".join(f"{w}->{u}" for w in range(self.worlds) for u in self.successors(w))
        vals = "; ".join(
            f"{k} true at {{{', '.join(str(w) for w in range(self.worlds) if v[w])}}}"
            for k, v in self.assignment.items()
        )
        noun = "world" if self.worlds == 1 else "worlds"
        return f"{self.worlds} {noun}, R = {{{edges}}}, {vals}; refuted at world {self.world}"


@lru_cache(maxsize=None)
def frames(n: int, cls: str) -> np.ndarray:
    """Every relation on ``n`` worlds in the class, as an array of shape (frames, n, n)."""
    cls = frame_class(cls)
    codes = np.arange(1 << (n * n), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n * n)) & 1
    rel = bits.reshape(-1, n, n).astype(bool)
    if cls in ("reflexive", "reflexive-transitive"):
        rel = rel[np.all(rel[:, np.arange(n), np.arange(n)], axis=1)]
    if cls == "reflexive-transitive":
        ri = rel.astype(np.int64)
        comp = np.einsum("fij,fjk->fik", ri, ri) > 0
        rel = rel[np.all(comp <= rel, axis=(1, 2))]
    rel.setflags(write=False)
    return rel


def _assignment_bits(n: int, n_vars: int) -> np.ndarray:
    """Packed truth of variable j at world w over all assignments: shape (n_vars, n, bytes)."""
    count = 1 << (n * n_vars)
    a = np.arange(count, dtype=np.int64)
    out = np.empty((n_vars, n, max(1, (count + 7) // 8)), dtype=np.uint8)
    for j in range(n_vars):
        for w in range(n):
            out[j, w] = np.packbits(((a >> (j * n + w)) & 1).astype(bool))
    return out


def _refuting(goal: Formula, variables: Sequence[str], rel: np.ndarray, atoms: np.ndarray):
    """Packed "goal false" bits, shape (frames, n, bytes)."""
    chunk = rel.shape[0]
    n = rel.shape[1]
    nbytes = atoms.shape[2]
    truth: Dict[Formula, np.ndarray] = {}
    for f in closure([goal]):
        if isinstance(f, Var):
            t = np.broadcast_to(atoms[variables.index(f.name)], (chunk, n, nbytes))
        elif isinstance(f, Neg):
            t = ~truth[f.arg]
        elif isinstance(f, Imp):
            t = ~truth[f.left] | truth[f.right]
        else:
            # t[f, w] = AND over u of (val[f, u] | not R[f, w, u])
            blocked = np.where(rel[:, :, :, None], 0, 0xFF).astype(np.uint8)
            t = np.bitwise_and.reduce(truth[f.arg][:, None, :, :] | blocked, axis=2)
        truth[f] = t
    return ~truth[goal]


def kripke_check(
    cls: str, goal: Formula, max_worlds: int = DEFAULT.max_worlds, cap: Optional[int] = None
) -> Verdict:
    """First countermodel by world count, then frame code, world and assignment.

    Without one up to ``max_worlds`` worlds the verdict is NoCountermodelUpToBound.
    """
    cls = frame_class(cls)
    cap = DEFAULT.max_worlds if cap is None else cap
    if max_worlds > cap:
        raise BudgetExceeded(f"max_worlds {max_worlds} exceeds the cap {cap}")
    if goal.modalities() - {None}:
        raise ValueError("the Kripke oracle handles the unimodal signature only")
    variables = goal.variables()
    for n in range(1, max_worlds + 1):
        rel_all = frames(n, cls)
        atoms = _assignment_bits(n, len(variables))
        count = 1 << (n * len(variables))
        step = max(1, _CHUNK_BYTES // (n * atoms.shape[2]))
        for start in range(0, rel_all.shape[0], step):
            rel = rel_all[start:start + step]
            bad = np.unpackbits(_refuting(goal, variables, rel, atoms), axis=2, count=count)
            hits = np.argwhere(bad)
            if hits.size:
                f, w, a = (int(x) for x in hits[0])
                model = _model(rel[f], variables, a, w)
                return Verdict(COUNTERMODEL, model, {"frames": cls, "worlds": n})
    return Verdict(NO_COUNTERMODEL, None, {"frames": cls, "max_worlds": max_worlds})


def _model(r: np.ndarray, variables, a: int, w: int) -> KripkeModel:
    n = r.shape[0]
    assignment = {
        v: tuple(bool((a >> (j * n + u)) & 1) for u in range(n)) for j, v in enumerate(variables)
    }
    relation = tuple(tuple(bool(x) for x in row) for row in r)
    return KripkeModel(n, relation, assignment, w)


# --------------------------------------------------------- cross-validation

SYSTEM_FRAMES = {"MK": "all", "MKT": "reflexive", "MKT4": "reflexive-transitive"}


@dataclass(frozen=True)
class CrossRow:
    formula: Formula
    level: str
    kripke: str

    @property
    def agrees(self) -> bool:
        return (self.level == "Valid") == (self.kripke == NO_COUNTERMODEL)

    def to_json(self) -> dict:
        return {"formula": to_text(self.formula), "level": self.level, "kripke": self.kripke,
                "agrees": self.agrees}


@dataclass(frozen=True)
class CrossReport:
    system: str
    rows: Tuple[CrossRow, ...]

    @property
    def disagreements(self) -> List[CrossRow]:
        return [r for r in self.rows if not r.agrees]

    def to_json(self) -> dict:
        return {"system": self.system, "rows": [r.to_json() for r in self.rows],
                "disagreements": [to_text(r.formula) for r in self.disagreements]}


def cross_validate(system_name: str, corpus: Sequence[Formula], max_worlds: int = DEFAULT.max_worlds,
                   budgets=DEFAULT) -> CrossReport:
    """Level-valuation verdicts of ``system_name`` + N against the matching frame class."""
    from .levels import check_validity_n
    from .matrices import matrix_for

    if system_name not in SYSTEM_FRAMES:
        raise ValueError(f"no frame class for {system_name!r}; known: {', '.join(SYSTEM_FRAMES)}")
    m = matrix_for(system_name)
    cls = SYSTEM_FRAMES[system_name]
    rows = []
    for f in corpus:
        level = check_validity_n(m, f, budgets=budgets).status
        kripke = kripke_check(cls, f, max_worlds).status
        rows.append(CrossRow(f, level, kripke))
    return CrossReport(system_name, tuple(rows))


# Ten theorems and ten non-theorems of K, KT and S4 over {p, q}.
CURATED: Dict[str, Tuple[List[str], List[str]]] = {
    "MK": (
        ["#(p -> q) -> (#p -> #q)", "#(p -> p)", "#(p & q) -> #p", "#p & #q -> #(p & q)",
         "#(p & q) <-> #p & #q", "#p | #q -> #(p | q)", "##(p -> p)", "#(p -> q) -> #(~q -> ~p)",
         "#~~p -> #p", "#p -> #(q -> p)"],
        ["#p -> p", "#p -> ##p", "p -> #p", "#(p | q) -> #p | #q", "#p", "~#p -> #~#p",
         "#q -> #p", "p -> #~#~p", "#(p -> q) -> (p -> q)", "~#(p & ~p)"],
    ),
    "MKT": (
        ["#p -> p", "#(p -> q) -> (#p -> #q)", "p -> ~#~p", "#(p & q) -> p", "##p -> #p",
         "#(p -> p)", "#(p -> q) -> (p -> q)", "#p & #q -> q", "~#(p & ~p)", "#p -> ~#~p"],
        ["#p -> ##p", "p -> #p", "~#p -> #~#p", "#(p | q) -> #p | #q", "p -> #~#~p",
         "#p", "#q -> #p", "~#~p -> #~#~p", "#(p -> q) -> #p", "p -> ##p"],
    ),
    "MKT4": (
        ["#p -> ##p", "#p -> p", "##p <-> #p", "#(p -> q) -> (#p -> #q)", "~#~~#~p -> ~#~p",
         "#p -> ###p", "#(#p -> q) -> (#p -> #q)", "#(p -> p)", "#p & #q -> ##(p & q)",
         "#(p -> q) -> (p -> q)"],
        ["p -> #p", "~#p -> #~#p", "p -> #~#~p", "#(p | q) -> #p | #q", "#p",
         "~#~p -> #~#~p", "#(#p -> q) | #(#q -> p)", "#q -> #p", "#~#p -> #p", "#(#(p -> #p) -> p) -> p"],
    ),
}
