import itertools
import random

import pytest
from hypothesis import given, settings

from nmodal.formula import BIMODAL, Var, enumerate_corpus, parse, subformulas, substitute
from nmodal.matrices import matrix_for
from nmodal.restrictions import (
    RestrictionPredicate, RNSystem, UnknownAxiom, check_structurality, check_validity_rn,
    enumerate_restricted, instance_closure, random_valuation, restriction_for, rn_system,
)
from nmodal.valuations import COUNTERMODEL, VALID, check_validity, enumerate_valuations
from strategies import formulas


def test_restriction_texts():
    assert restriction_for("K").text == "v2(A->B) <= v2(A) => v2(B)"
    assert restriction_for("4").text == "v2(A) <= v2(#A)"
    assert restriction_for("GL").text == "v2(#A->A) <= v2(A)"


def test_foreign_connective_rejected():
    with pytest.raises(ValueError):
        check_validity_rn(rn_system([]), parse("#1p -> #2p", BIMODAL))


def test_unknown_axiom():
    with pytest.raises(UnknownAxiom):
        restriction_for("B")


def test_bimodal_restriction_needs_three_coordinates():
    with pytest.raises(ValueError):
        RNSystem(matrix_for("M"), (restriction_for("bimodal-mono"),))
    assert rn_system(["bimodal-mono"]).base.name == "M2"


def test_rn_k_count_equals_mk_count_on_k_axiom():
    c = subformulas(parse("#(p -> q) -> (#p -> #q)"))
    rn = sum(1 for _ in enumerate_restricted(rn_system("K"), c))
    nm = sum(1 for _ in enumerate_valuations(matrix_for("MK"), c))
    assert rn == nm


def test_small_counts():
    c = subformulas(parse("p"))
    assert sum(1 for _ in enumerate_restricted(rn_system([]), c)) == 4
    assert sum(1 for _ in enumerate_restricted(rn_system("KT"), c)) == 3


def test_restricted_stream_is_filtered_base_stream():
    sys = rn_system("KT4")
    c = subformulas(parse("#(p -> #p) -> ~#p"))
    base = [v for v in enumerate_valuations(sys.base, c) if sys.satisfies(v)]
    assert [v.snapshots for v in enumerate_restricted(sys, c)] == [v.snapshots for v in base]


def test_validity_examples():
    assert check_validity_rn(rn_system("K"), parse("#(p -> q) -> (#p -> #q)")).status == VALID
    assert check_validity_rn(rn_system("K"), parse("#p -> p")).status == COUNTERMODEL
    assert check_validity_rn(rn_system("KT4"), parse("#p -> ##p")).status == VALID


def test_gl():
    f = parse("#(#p -> p) -> #p")
    assert check_validity_rn(rn_system("GL"), f).valid
    assert check_validity_rn(rn_system("K"), f).status == COUNTERMODEL


def test_gl_extends_closure():
    c = rn_system("GL").extended_closure([parse("#q")])
    assert parse("#q -> q") in c


@pytest.mark.parametrize("preset, system", [("K", "MK"), ("KT", "MKT"), ("KT4", "MKT4")])
def test_engine_equivalence_small_corpus(preset, system):
    sys, m = rn_system(preset), matrix_for(system)
    for f in enumerate_corpus(["p", "q"], 3):
        assert check_validity_rn(sys, f).status == check_validity(m, f).status, str(f)


@pytest.mark.parametrize("fewer, more", [([], ["K"]), (["K"], ["K", "T"]), (["K", "T"], ["K", "T", "4"]),
                                         (["K"], ["K", "GL"])])
def test_adding_restrictions_never_enlarges(fewer, more):
    for text in ["#(p -> q) -> #p", "##p -> ~#p", "#(#p -> p)"]:
        c = rn_system(more).extended_closure([parse(text)])
        small = {v.snapshots for v in enumerate_restricted(rn_system(more), c)}
        large = {v.snapshots for v in enumerate_restricted(rn_system(fewer), c)}
        assert small <= large


def _random_substitution(rng, variables, pool):
    return {x: rng.choice(pool) for x in variables}


@pytest.mark.parametrize("preset", ["K", "KT", "KT4"])
def test_structurality_random(preset):
    rng = random.Random(preset)
    sys = rn_system(preset)
    pool = list(enumerate_corpus(["p", "q"], 2))
    corpus = list(enumerate_corpus(["p", "q"], 3))
    for _ in range(150):
        c = subformulas(rng.choice(corpus))
        sigma = _random_substitution(rng, ["p", "q"], pool)
        inst = instance_closure(c, sigma)
        v = random_valuation(sys, inst, rng)
        assert v is not None
        assert check_structurality(sys, v, sigma, c)


def test_identity_substitution_is_structural():
    sys = rn_system("K")
    c = subformulas(parse("#(p -> q) -> #p"))
    for v in itertools.islice(enumerate_restricted(sys, c), 20):
        assert check_structurality(sys, v, {}, c)


def test_non_structural_restriction_detected():
    pinned = RestrictionPredicate(
        "pin-p", "v2(p) = 1",
        lambda c: [(f,) for f in c if f == Var("p")],
        lambda a: a[1] == 1,
    )
    sys = RNSystem(matrix_for("M"), (pinned,))
    sigma = {"p": parse("~p")}
    c = subformulas(parse("p"))
    inst = instance_closure(c, sigma)
    failing = [v for v in enumerate_restricted(sys, inst) if not check_structurality(sys, v, sigma, c)]
    assert failing
    assert failing[0][parse("~p")][1] == 0


def test_structurality_domain_mismatch():
    sys = rn_system("K")
    v = next(enumerate_restricted(sys, subformulas(parse("p"))))
    with pytest.raises(ValueError):
        check_structurality(sys, v, {"p": parse("#q")}, subformulas(parse("p")))


@settings(max_examples=40, deadline=None)
@given(formulas(variables=("p", "q"), max_leaves=4), formulas(variables=("p", "q"), max_leaves=3))
def test_structurality_property(f, s):
    sys = rn_system("KT4")
    c = subformulas(f)
    sigma = {"p": s, "q": substitute(s, {"p": Var("q"), "q": Var("p")})}
    inst = instance_closure(c, sigma)
    v = random_valuation(sys, inst, random.Random(0))
    assert check_structurality(sys, v, sigma, c)


def _valid_bimodal(axioms, text):
    return check_validity_rn(rn_system(axioms, matrix_for("M2")), parse(text, BIMODAL)).valid


def test_bimodal_duality():
    both = ["bimodal-duality-21", "bimodal-duality-12"]
    assert _valid_bimodal(both, "#2p <-> ~#1~p")
    assert _valid_bimodal(both, "#1p <-> ~#2~p")
    assert not _valid_bimodal([], "#2p <-> ~#1~p")


def test_bimodal_rows():
    assert _valid_bimodal(["bimodal-mono"], "#1p -> #2p")
    assert _valid_bimodal(["bimodal-A-#1#2"], "p -> #1#2p")
    assert _valid_bimodal(["bimodal-#2-#1#2"], "#2p -> #1#2p")
    assert _valid_bimodal(["bimodal-swap"], "#2#1p -> #1#2p")
    assert not _valid_bimodal([], "#2#1p -> #1#2p")
