"""Hilbert calculi H, HK, HKT, HKT4 and their necessitation extensions.

Proof lines are numbered from 1.  In the N-systems a derivation may not use
premises at all: a consequence from premises B1..Bk is established by
deriving B1 -> (... -> (Bk -> A)) outright.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .config import DEFAULT
from .formula import (
    UNIMODAL, Formula, Imp, Mod, Neg, Var, parse, subformulas, to_text,
)

_A, _B, _C = Var("A"), Var("B"), Var("C")


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    template: Formula

    @property
    def metavariables(self) -> List[str]:
        return self.template.variables()

    def __str__(self):
        return f"{self.name}: {to_text(self.template)}"


SCHEMAS: Dict[str, AxiomSchema] = {
    s.name: s
    for s in (
        AxiomSchema("Ax1", Imp(_A, Imp(_B, _A))),
        AxiomSchema("Ax2", Imp(Imp(_A, Imp(_B, _C)), Imp(Imp(_A, _B), Imp(_A, _C)))),
        AxiomSchema("Ax3", Imp(Imp(Neg(_B), Neg(_A)), Imp(_A, _B))),
        AxiomSchema("K", Imp(Mod(Imp(_A, _B)), Imp(Mod(_A), Mod(_B)))),
        AxiomSchema("T", Imp(Mod(_A), _A)),
        AxiomSchema("4", Imp(Mod(_A), Mod(Mod(_A)))),
        AxiomSchema("GL", Imp(Mod(Imp(Mod(_A), _A)), Mod(_A))),
    )
}


@dataclass(frozen=True)
class HilbertSystem:
    name: str
    axioms: Tuple[str, ...]
    necessitation: bool = False

    @property
    def schemas(self) -> List[AxiomSchema]:
        return [SCHEMAS[a] for a in self.axioms]


_CLASSICAL = ("Ax1", "Ax2", "Ax3")
HILBERT_SYSTEMS: Dict[str, HilbertSystem] = {
    "H": HilbertSystem("H", _CLASSICAL),
    "HK": HilbertSystem("HK", _CLASSICAL + ("K",)),
    "HKT": HilbertSystem("HKT", _CLASSICAL + ("K", "T")),
    "HKT4": HilbertSystem("HKT4", _CLASSICAL + ("K", "T", "4")),
    "HKN": HilbertSystem("HKN", _CLASSICAL + ("K",), True),
    "HKTN": HilbertSystem("HKTN", _CLASSICAL + ("K", "T"), True),
    "HKT4N": HilbertSystem("HKT4N", _CLASSICAL + ("K", "T", "4"), True),
}


def hilbert_system(name) -> HilbertSystem:
    if isinstance(name, HilbertSystem):
        return name
    try:
        return HILBERT_SYSTEMS[name]
    except KeyError:
        raise ValueError(
            f"unknown Hilbert system {name!r}; known: {', '.join(HILBERT_SYSTEMS)}"
        ) from None


# ---------------------------------------------------------------- matching

def match_axiom(f: Formula, schema: AxiomSchema) -> Optional[Dict[str, Formula]]:
    """Substitution sending the schema's template to ``f``, or None."""
    return _match(schema.template, f)


def _match(template: Formula, f: Formula) -> Optional[Dict[str, Formula]]:
    binding: Dict[str, Formula] = {}
    stack = [(template, f)]
    while stack:
        t, g = stack.pop()
        if isinstance(t, Var):
            bound = binding.setdefault(t.name, g)
            if bound != g:
                return None
        elif type(t) is not type(g):
            return None
        elif isinstance(t, Mod):
            if t.index != g.index:
                return None
            stack.append((t.arg, g.arg))
        else:
            stack.extend(zip(t.children(), g.children()))
    return binding


def which_axiom(f: Formula, system: HilbertSystem) -> Optional[Tuple[str, Dict[str, Formula]]]:
    for schema in system.schemas:
        sigma = match_axiom(f, schema)
        if sigma is not None:
            return schema.name, sigma
    return None


# ------------------------------------------------------------------ proofs

PREMISE, AXIOM, MP, NEC = "premise", "axiom", "MP", "N"


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    rule: str
    refs: Tuple[int, ...] = ()
    axiom: Optional[str] = None

    def to_json(self) -> dict:
        rule = self.axiom if self.rule == AXIOM else self.rule
        return {"formula": to_text(self.formula), "rule": rule, "refs": list(self.refs)}


@dataclass(frozen=True)
class Proof:
    lines: Tuple[ProofLine, ...]

    def __len__(self):
        return len(self.lines)

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def to_json(self) -> list:
        return [line.to_json() for line in self.lines]

    def __str__(self):
        out = []
        for n, line in enumerate(self.lines, 1):
            why = line.axiom if line.rule == AXIOM else line.rule
            if line.refs:
                why += " " + ",".join(map(str, line.refs))
            out.append(f"{n:>3}. {to_text(line.formula):<40} {why}")
        return "\n".join(out)


def proof_from_json(data, signature: str = UNIMODAL) -> Proof:
    if isinstance(data, str):
        data = json.loads(data)
    lines = []
    for item in data:
        rule = item["rule"]
        refs = tuple(int(r) for r in item.get("refs", ()))
        formula = parse(item["formula"], signature)
        if rule in SCHEMAS:
            lines.append(ProofLine(formula, AXIOM, refs, rule))
        elif rule in (PREMISE, MP, NEC):
            lines.append(ProofLine(formula, rule, refs))
        else:
            raise ValueError(f"unknown rule {rule!r}")
    return Proof(tuple(lines))


@dataclass(frozen=True)
class ProofCheck:
    ok: bool
    line: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"line {self.line}: {self.reason}"


def unfold_premises(final: Formula, premises: Iterable[Formula], goal: Formula) -> Optional[List[Formula]]:
    """Premises peeled off ``final = B1 -> (... -> (Bk -> goal))``, or None if it has another shape."""
    available = set(premises)
    used: List[Formula] = []
    current = final
    while True:
        if current == goal:
            return used
        if isinstance(current, Imp) and current.left in available and current.left not in used:
            used.append(current.left)
            current = current.right
            continue
        return None


def check_proof(system, proof: Proof, premises: Iterable[Formula] = (), goal: Optional[Formula] = None) -> ProofCheck:
    system = hilbert_system(system)
    premises = list(premises)
    premise_set = set(premises)
    for n, line in enumerate(proof.lines, 1):
        bad = _check_line(system, proof, n, line, premise_set)
        if bad:
            return ProofCheck(False, n, bad)
    if not proof.lines:
        return ProofCheck(False, 0, "empty proof")
    if goal is not None:
        final = proof.conclusion
        if system.necessitation:
            peeled = unfold_premises(final, premises, goal)
            if peeled is None:
                return ProofCheck(
                    False, len(proof), "last line is neither the goal nor an unfolded premise implication"
                )
        elif final != goal:
            return ProofCheck(False, len(proof), "last line is not the goal")
    return ProofCheck(True)


def _check_line(system, proof, n, line, premise_set) -> str:
    for r in line.refs:
        if not 1 <= r < n:
            return f"reference {r} does not point to an earlier line"
    f = line.formula
    if line.rule == PREMISE:
        if system.necessitation:
            return "premises are not used in N-systems; derive the unfolded implication instead"
        return "" if f in premise_set else "not among the premises"
    if line.rule == AXIOM:
        if line.axiom not in system.axioms:
            return f"axiom {line.axiom} is not part of {system.name}"
        if match_axiom(f, SCHEMAS[line.axiom]) is None:
            return f"not an instance of {line.axiom}"
        return ""
    if line.rule == MP:
        if len(line.refs) != 2:
            return "MP needs two references"
        a, b = (proof.lines[r - 1].formula for r in line.refs)
        if Imp(a, f) == b or Imp(b, f) == a:
            return ""
        return "MP does not apply to the referenced lines"
    if line.rule == NEC:
        if not system.necessitation:
            return "rule N not available"
        if len(line.refs) != 1:
            return "N needs one reference"
        if Mod(proof.lines[line.refs[0] - 1].formula) != f:
            return "N must box the referenced line"
        return ""
    return f"unknown rule {line.rule!r}"


# ------------------------------------------------------------------ search

class _Store:
    """Hash-consed formula nodes addressed by small integers, local to one search."""

    def __init__(self):
        self.nodes: List[tuple] = []
        self.ids: Dict[tuple, int] = {}
        self.formulas: Dict[int, Formula] = {}

    def node(self, key: tuple) -> int:
        i = self.ids.get(key)
        if i is None:
            i = self.ids[key] = len(self.nodes)
            self.nodes.append(key)
        return i

    def intern(self, f: Formula) -> int:
        if isinstance(f, Var):
            i = self.node(("v", f.name))
        elif isinstance(f, Neg):
            i = self.node(("~", self.intern(f.arg)))
        elif isinstance(f, Imp):
            i = self.node(("->", self.intern(f.left), self.intern(f.right)))
        else:
            i = self.node(("#", f.index, self.intern(f.arg)))
        self.formulas.setdefault(i, f)
        return i

    def build(self, template: Formula, binding: Dict[str, int]) -> int:
        if isinstance(template, Var):
            return binding[template.name]
        if isinstance(template, Imp):
            return self.node(("->", self.build(template.left, binding), self.build(template.right, binding)))
        if isinstance(template, Neg):
            return self.node(("~", self.build(template.arg, binding)))
        return self.node(("#", template.index, self.build(template.arg, binding)))

    def formula(self, i: int) -> Formula:
        f = self.formulas.get(i)
        if f is None:
            key = self.nodes[i]
            if key[0] == "->":
                f = Imp(self.formula(key[1]), self.formula(key[2]))
            elif key[0] == "~":
                f = Neg(self.formula(key[1]))
            else:
                f = Mod(self.formula(key[2]), key[1])
            self.formulas[i] = f
        return f


@dataclass
class _Entry:
    deps: int  # bitmask over store ids
    rule: str
    parents: Tuple[int, ...] = ()
    axiom: Optional[str] = None


def search_proof(system, goal: Formula, depth: int = DEFAULT.proof_depth) -> Optional[Proof]:
    """Bounded forward search; None only means nothing was found within ``depth`` lines.

    Axiom metavariables range over the goal's subformulas.  Derivations are
    grown by MP (and N in the N-systems) and kept only while their number of
    distinct lines stays within ``depth``.  Ties go to the derivation found
    first, with instances generated schema by schema in subformula order.
    """
    system = hilbert_system(system)
    if depth < 1:
        return None
    store = _Store()
    pool = [store.intern(f) for f in subformulas(goal)]
    target = store.intern(goal)
    known: Dict[int, _Entry] = {}
    for schema in system.schemas:
        names = schema.metavariables
        for combo in itertools.product(pool, repeat=len(names)):
            inst = store.build(schema.template, dict(zip(names, combo)))
            if inst not in known:
                known[inst] = _Entry(1 << inst, AXIOM, (), schema.name)
    nodes, ids = store.nodes, store.ids
    universe = len(nodes)
    # implications indexed by antecedent, for MP with a changed minor premise
    by_left: Dict[int, List[int]] = {}
    for i in known:
        if nodes[i][0] == "->":
            by_left.setdefault(nodes[i][1], []).append(i)
    changed = sorted(known)
    while changed:
        if target in known and known[target].rule == AXIOM:
            break
        updates: Dict[int, _Entry] = {}
        for i in changed:
            majors = list(by_left.get(i, ()))
            if nodes[i][0] == "->" and nodes[i][1] in known:
                majors.append(i)
            for imp in majors:
                _, left, right = nodes[imp]
                if imp not in known or left not in known:
                    continue
                deps = known[imp].deps | known[left].deps | (1 << right)
                _offer(updates, known, right, deps, _Entry(deps, MP, (left, imp)), depth)
            if system.necessitation:
                boxed = ids.get(("#", None, i))
                if boxed is not None and boxed < universe:
                    deps = known[i].deps | (1 << boxed)
                    _offer(updates, known, boxed, deps, _Entry(deps, NEC, (i,)), depth)
        for i in updates:
            if i not in known and nodes[i][0] == "->":
                by_left.setdefault(nodes[i][1], []).append(i)
        known.update(updates)
        changed = sorted(updates)
    if target not in known:
        return None
    return _linearize(store, known, target)


def _offer(updates, known, i, deps, entry, depth):
    cost = bin(deps).count("1")
    if cost > depth:
        return
    best = updates.get(i) or known.get(i)
    if best is None or cost < bin(best.deps).count("1"):
        updates[i] = entry


def _linearize(store: _Store, known: Dict[int, _Entry], target: int) -> Proof:
    order: List[int] = []
    seen = set()

    def visit(i):
        if i in seen:
            return
        seen.add(i)
        for j in known[i].parents:
            visit(j)
        order.append(i)

    visit(target)
    number = {i: n for n, i in enumerate(order, 1)}
    lines = []
    for i in order:
        e = known[i]
        lines.append(ProofLine(store.formula(i), e.rule, tuple(number[j] for j in e.parents), e.axiom))
    return Proof(tuple(lines))
