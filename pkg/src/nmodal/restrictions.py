"""Restricted Nmatrices: the base valuations of M (or M2) cut down by per-axiom predicates.

A universally quantified restriction ("for every A, B") is applied to every
instance that occurs in the closure under consideration.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .formula import Closure, Formula, Imp, Mod, Neg, closure, substitute, to_text
from .matrices import MatrixSpec, implies, matrix_for
from .valuations import (
    Constraint, Valuation, Verdict, check_budget, decide, search,
)

InstanceFinder = Callable[[Closure], Iterable[Tuple[Formula, ...]]]


class UnknownAxiom(ValueError):
    pass


@dataclass(frozen=True)
class RestrictionPredicate:
    """A named condition on valuations.

    ``instances`` lists, for a closure, the tuples of formulas the condition
    talks about; ``condition`` receives their snapshots in the same order.
    ``extend`` optionally names formulas a decision procedure should add to
    the closure so the condition has instances to act on.
    """

    name: str
    text: str
    instances: InstanceFinder
    condition: Callable[..., bool]
    coordinates: int = 2
    extend: Optional[Callable[[Closure], Iterable[Formula]]] = None

    def constraints(self, c: Closure) -> List[Constraint]:
        return [(tuple(inst), self.condition) for inst in self.instances(c)]

    def violations(self, v: Valuation) -> List[Tuple[Formula, ...]]:
        return [
            inst for inst in self.instances(v.closure)
            if not self.condition(*(v[f] for f in inst))
        ]

    def holds(self, v: Valuation) -> bool:
        return not self.violations(v)

    def __repr__(self):
        return f"RestrictionPredicate({self.name!r}: {self.text})"


# --------------------------------------------------------- instance finders

def _imps(c):
    return ((f, f.left, f.right) for f in c if isinstance(f, Imp))


def _every(c):
    return ((f,) for f in c)


def _boxed(index):
    return lambda c: ((f.arg, f) for f in c if isinstance(f, Mod) and f.index == index)


def _negs(c):
    return ((f, f.arg) for f in c if isinstance(f, Neg))


def _gl_instances(c):
    for f in c:
        if isinstance(f, Imp) and isinstance(f.left, Mod) and f.left.index is None \
                and f.left.arg == f.right:
            yield (f, f.right)


def _gl_extend(c):
    return [Imp(f, f.arg) for f in c if isinstance(f, Mod) and f.index is None]


def _swap_instances(c):
    present = set(c)
    for f in c:
        if isinstance(f, Mod) and f.index == 1:
            other = Mod(f.arg, 2)
            if other in present:
                yield (f, other)


_BUILTIN = {
    "K": RestrictionPredicate(
        "K", "v2(A->B) <= v2(A) => v2(B)", _imps,
        lambda x, a, b: x[1] <= implies(a[1], b[1]),
    ),
    "T": RestrictionPredicate("T", "v2(A) <= v1(A)", _every, lambda a: a[1] <= a[0]),
    "4": RestrictionPredicate(
        "4", "v2(A) <= v2(#A)", _boxed(None), lambda a, ma: a[1] <= ma[1],
    ),
    "GL": RestrictionPredicate(
        "GL", "v2(#A->A) <= v2(A)", _gl_instances, lambda x, a: x[1] <= a[1],
        extend=_gl_extend,
    ),
    "bimodal-duality-21": RestrictionPredicate(
        "bimodal-duality-21", "v2(~A) = ~v3(A)", _negs,
        lambda n, a: n[1] == 1 - a[2], coordinates=3,
    ),
    "bimodal-duality-12": RestrictionPredicate(
        "bimodal-duality-12", "v3(~A) = ~v2(A)", _negs,
        lambda n, a: n[2] == 1 - a[1], coordinates=3,
    ),
    "bimodal-mono": RestrictionPredicate(
        "bimodal-mono", "v2(A) <= v3(A)", _every, lambda a: a[1] <= a[2], coordinates=3,
    ),
    "bimodal-A1⊖1⊖2": RestrictionPredicate(
        "bimodal-A1⊖1⊖2", "v1(A) <= v2(#2A)", _boxed(2),
        lambda a, m2: a[0] <= m2[1], coordinates=3,
    ),
    "bimodal-⊖2-⊖1⊖2": RestrictionPredicate(
        "bimodal-⊖2-⊖1⊖2", "v3(A) <= v2(#2A)", _boxed(2),
        lambda a, m2: a[2] <= m2[1], coordinates=3,
    ),
    "bimodal-swap": RestrictionPredicate(
        "bimodal-swap", "v3(#1A) <= v2(#2A)", _swap_instances,
        lambda m1, m2: m1[2] <= m2[1], coordinates=3,
    ),
}

_ALIASES = {
    "bimodal-A-#1#2": "bimodal-A1⊖1⊖2",
    "bimodal-#2-#1#2": "bimodal-⊖2-⊖1⊖2",
}

AXIOM_NAMES = tuple(_BUILTIN)


def restriction_for(name: str) -> RestrictionPredicate:
    try:
        return _BUILTIN[_ALIASES.get(name, name)]
    except KeyError:
        raise UnknownAxiom(f"unknown axiom {name!r}; known: {', '.join(AXIOM_NAMES)}") from None


# ------------------------------------------------------------------ systems

@dataclass(frozen=True)
class RNSystem:
    base: MatrixSpec
    restrictions: Tuple[RestrictionPredicate, ...] = ()
    name: str = ""

    def __post_init__(self):
        for r in self.restrictions:
            if r.coordinates > self.base.arity:
                raise ValueError(
                    f"restriction {r.name} reads coordinate {r.coordinates}, "
                    f"but {self.base.name} snapshots have {self.base.arity}"
                )
        if not self.name:
            label = ",".join(r.name for r in self.restrictions)
            object.__setattr__(self, "name", f"RN[{self.base.name}; {label}]")

    @property
    def signature(self) -> str:
        return self.base.signature

    def constraints(self, c: Closure) -> List[Constraint]:
        out: List[Constraint] = []
        for r in self.restrictions:
            out.extend(r.constraints(c))
        return out

    def extended_closure(self, formulas: Iterable[Formula]) -> Closure:
        c = closure(formulas)
        extra = [g for r in self.restrictions if r.extend for g in r.extend(c)]
        return closure(list(c) + extra) if extra else c

    def satisfies(self, v: Valuation) -> bool:
        return all(r.holds(v) for r in self.restrictions)

    def __repr__(self):
        return f"RNSystem({self.name!r})"


_PRESETS = {"K": ("K",), "KT": ("K", "T"), "KT4": ("K", "T", "4"), "GL": ("K", "GL")}


def rn_system(axioms: Sequence[str] | str, base: Optional[MatrixSpec] = None) -> RNSystem:
    """RNmatrix over M (or M2 for bimodal restrictions).

    ``axioms`` is a list of restriction names, or one of the presets
    "K", "KT", "KT4", "GL" (each cumulative, GL on top of K).
    """
    if isinstance(axioms, str):
        if axioms in _PRESETS:
            name = f"RN_{axioms}"
            axioms = _PRESETS[axioms]
        else:
            name = ""
            axioms = [a for a in axioms.split(",") if a]
    else:
        name = ""
    preds = tuple(restriction_for(a) for a in axioms)
    if base is None:
        base = matrix_for("M2" if any(p.coordinates == 3 for p in preds) else "M")
    return RNSystem(base, preds, name)


def as_system(sys) -> RNSystem:
    """Treat a plain Nmatrix as an RNmatrix without restrictions."""
    if isinstance(sys, RNSystem):
        return sys
    if isinstance(sys, MatrixSpec):
        return RNSystem(sys, (), sys.name)
    raise TypeError(f"expected MatrixSpec or RNSystem, got {type(sys).__name__}")


# ---------------------------------------------------------------- engines

def enumerate_restricted(
    sys: RNSystem, c: Closure, max_free_bits: Optional[int] = None
) -> Iterator[Valuation]:
    check_budget(sys.base, c, max_free_bits)
    c = tuple(c)
    return (Valuation(c, zs) for zs in search(sys.base, c, sys.constraints(c)))


def random_valuation(sys: RNSystem, c: Closure, rng) -> Optional[Valuation]:
    """A legal restricted valuation found by randomized depth-first search."""
    c = tuple(c)
    for zs in search(sys.base, c, sys.constraints(c), rng=rng):
        return Valuation(c, zs)
    return None


def check_validity_rn(sys: RNSystem, goal: Formula, max_free_bits: Optional[int] = None) -> Verdict:
    c = sys.extended_closure([goal])
    return decide(sys.base, c, (), goal, sys.constraints(c), max_free_bits)


def check_consequence_rn(
    sys: RNSystem,
    premises: Iterable[Formula],
    goal: Formula,
    max_free_bits: Optional[int] = None,
) -> Verdict:
    premises = list(premises)
    c = sys.extended_closure(premises + [goal])
    return decide(sys.base, c, premises, goal, sys.constraints(c), max_free_bits)


def check_structurality(sys: RNSystem, v: Valuation, sigma, c: Closure) -> bool:
    """Whether ``A -> v(sigma(A))`` satisfies the restrictions of ``sys`` on ``c``."""
    try:
        composed = Valuation(tuple(c), tuple(v[substitute(f, sigma)] for f in c))
    except KeyError as exc:
        raise ValueError(
            f"valuation is not defined on the instance {to_text(exc.args[0])}"
        ) from None
    return sys.satisfies(composed)


def instance_closure(c: Closure, sigma) -> Closure:
    """Subformula closure of every substitution instance of members of ``c``."""
    return closure(substitute(f, sigma) for f in c)
