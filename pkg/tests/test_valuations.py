import itertools
import random

import pytest
from hypothesis import given, settings

from nmodal.config import BudgetExceeded
from nmodal.formula import Mod, Var, closure, enumerate_corpus, parse, subformulas
from nmodal.matrices import connective_of, matrix_for
from nmodal.valuations import (
    COUNTERMODEL, VALID, check_consequence_local, check_validity, enumerate_valuations,
    find_valuation, free_bits, table_violations,
)
from strategies import formulas


def brute_force(m, c):
    """Every legal valuation, by filtering the full product of value assignments."""
    out = []
    for zs in itertools.product(m.values, repeat=len(c)):
        v = dict(zip(c, zs))
        if all(
            isinstance(f, Var) or v[f] in m.apply(connective_of(f), *(v[g] for g in f.children()))
            for f in c
        ):
            out.append(zs)
    return out


@pytest.mark.parametrize(
    "system, text, count", [("M", "p", 4), ("MKT", "p", 3), ("M", "p -> p", 8)]
)
def test_valuation_counts(system, text, count):
    c = subformulas(parse(text))
    assert sum(1 for _ in enumerate_valuations(matrix_for(system), c)) == count


@pytest.mark.parametrize("system", ["M", "MK", "MKT", "MKT4"])
@pytest.mark.parametrize("text", ["#p -> p", "#(p -> q) -> #p", "~#~p", "#p -> ##p"])
def test_enumeration_matches_brute_force(system, text):
    m = matrix_for(system)
    c = subformulas(parse(text))
    got = [v.snapshots for v in enumerate_valuations(m, c)]
    expected = brute_force(m, c)
    assert len(got) == len(set(got))
    assert set(got) == set(expected)
    # lexicographic in closure order, 0 before 1
    assert got == sorted(got)


def test_enumeration_matches_brute_force_bimodal():
    m = matrix_for("M2")
    c = subformulas(parse("#1p -> #2p", "bimodal"))
    assert {v.snapshots for v in enumerate_valuations(m, c)} == set(brute_force(m, c))


@settings(max_examples=40, deadline=None)
@given(formulas(variables=("p", "q"), max_leaves=4))
def test_enumeration_matches_brute_force_random(f):
    m = matrix_for("MK")
    c = subformulas(f)
    if len(c) > 6:
        return
    got = {v.snapshots for v in enumerate_valuations(m, c)}
    assert got == set(brute_force(m, c))


@settings(max_examples=60, deadline=None)
@given(formulas(max_leaves=6))
def test_emitted_valuations_are_legal(f):
    m = matrix_for("M")
    c = subformulas(f)
    for k, v in enumerate(enumerate_valuations(m, c)):
        assert table_violations(m, v) == []
        for g in c:
            if isinstance(g, Mod):
                assert v.coord(g, 1) == v.coord(g.arg, 2)
        if k > 50:
            break


def test_validity_examples():
    m = matrix_for("M")
    k = check_validity(m, parse("#(p -> q) -> (#p -> #q)"))
    assert k.status == COUNTERMODEL and not m.designated(k.witness[parse("#(p -> q) -> (#p -> #q)")])
    t = check_validity(m, parse("#p -> p"))
    assert t.status == COUNTERMODEL
    assert t.witness[parse("p")] == (0, 1)
    assert check_validity(matrix_for("MKT"), parse("#p -> p")).status == VALID
    assert check_validity(m, parse("p -> p")).valid


def test_k_refutation_admits_given_assignment():
    m = matrix_for("M")
    goal = parse("#(p -> q) -> (#p -> #q)")
    fixed = {parse("p"): (1, 1), parse("q"): (1, 0), parse("p -> q"): (1, 1)}
    assert find_valuation(m, subformulas(goal), fixed, refute=goal) is not None


def test_countermodel_is_first_in_enumeration_order():
    m = matrix_for("M")
    goal = parse("#p -> ##p")
    c = subformulas(goal)
    first = next(v for v in enumerate_valuations(m, c) if not m.designated(v[goal]))
    assert check_validity(m, goal).witness == first


def test_consequence_examples():
    m = matrix_for("M")
    p, q = parse("p"), parse("q")
    assert check_consequence_local(m, [p, parse("p -> q")], q).valid
    v = check_consequence_local(m, [p], parse("#p"))
    assert v.status == COUNTERMODEL and v.witness[p] == (1, 0)


def test_empty_premises_coincide_with_validity():
    m = matrix_for("MK")
    for f in itertools.islice(enumerate_corpus(["p", "q"], 2), 0, None, 3):
        assert check_consequence_local(m, [], f).status == check_validity(m, f).status


def test_refuted_axioms_in_m():
    m = matrix_for("M")
    for text in ["#(p -> q) -> (#p -> #q)", "#p -> p", "#p -> ##p"]:
        assert check_validity(m, parse(text)).status == COUNTERMODEL


def test_budget_exceeded():
    f = parse("#(p -> q) -> (#p -> #q) -> (#r -> #s) -> ~#~(p -> r)")
    assert free_bits(matrix_for("M"), subformulas(f)) > 4
    with pytest.raises(BudgetExceeded):
        check_validity(matrix_for("M"), f, max_free_bits=4)


def test_theory_inclusion_sample():
    systems = [matrix_for(n) for n in ("M", "MK", "MKT", "MKT4")]
    for f in enumerate_corpus(["p", "q"], 3):
        verdicts = [check_validity(m, f).valid for m in systems]
        for weaker, stronger in zip(verdicts, verdicts[1:]):
            assert not weaker or stronger


def test_modus_ponens_preserved_by_random_valuations():
    rng = random.Random(7)
    m = matrix_for("M")
    corpus = list(enumerate_corpus(["p", "q"], 2))
    for _ in range(300):
        a, b = rng.choice(corpus), rng.choice(corpus)
        imp = parse(f"({a}) -> ({b})")
        c = closure([imp])
        vals = list(enumerate_valuations(m, c))
        v = rng.choice(vals)
        if m.designated(v[a]) and m.designated(v[imp]):
            assert m.designated(v[b])
