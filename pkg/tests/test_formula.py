
import pytest
from hypothesis import given, settings

from nmodal.formula import (
    BIMODAL, CorpusTooLarge, Imp, Mod, Neg, ParseError, Var, closure, corpus_size,
    enumerate_corpus, parse, substitute, subformulas, to_text,
)
from strategies import bimodal_formulas, formulas

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_k_axiom():
    assert parse("#(p -> q) -> (#p -> #q)") == Imp(Mod(Imp(p, q)), Imp(Mod(p), Mod(q)))


def test_conjunction_is_expanded():
    assert parse("p & q") == Neg(Imp(p, Neg(q)))


def test_disjunction_and_biconditional_expansion():
    assert parse("p | q") == Imp(Neg(p), q)
    pq, qp = Imp(p, q), Imp(q, p)
    assert parse("p <-> q") == Neg(Imp(pq, Neg(qp)))


def test_precedence_and_associativity():
    assert parse("p -> q -> r") == Imp(p, Imp(q, r))
    assert parse("~p & q | r") == parse("((~p) & q) | r")
    assert parse("p | q -> r") == Imp(parse("p | q"), r)
    assert parse("p -> q <-> r") == parse("(p -> q) <-> r")


def test_syntax_error_reports_token():
    with pytest.raises(ParseError) as exc:
        parse("p -> -> q")
    assert exc.value.token == 3


@pytest.mark.parametrize("text", ["", "(p", "p q", "p -> ", "P", "#"])
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse(text)


def test_modality_index_checks():
    with pytest.raises(ParseError):
        parse("#2p")
    with pytest.raises(ParseError):
        parse("#p", BIMODAL)
    assert parse("#1#2p", BIMODAL) == Mod(Mod(p, 2), 1)


@pytest.mark.parametrize(
    "f, text",
    [(Mod(p), "#p"), (Imp(Mod(p), p), "#p -> p"), (Neg(Imp(p, Neg(q))), "~(p -> ~q)"),
     (Imp(Imp(p, q), r), "(p -> q) -> r"), (Imp(p, Imp(q, r)), "p -> q -> r")],
)
def test_printing(f, text):
    assert to_text(f) == text


@given(formulas())
def test_round_trip_unimodal(f):
    assert parse(to_text(f)) == f


@given(bimodal_formulas())
def test_round_trip_bimodal(f):
    assert parse(to_text(f), BIMODAL) == f


def _nodes(f):
    # independent traversal: every node occurrence, deduplicated by printed form
    out = {to_text(f)}
    for g in f.children():
        out |= _nodes(g)
    return out


def test_subformula_examples():
    assert subformulas(parse("#p -> p")) == (p, Mod(p), Imp(Mod(p), p))
    assert subformulas(p) == (p,)
    assert len(subformulas(parse("#(p -> q) -> (#p -> #q)"))) == 8


@given(formulas())
def test_closure_is_closed_and_ordered(f):
    c = subformulas(f)
    assert c[-1] == f
    assert len(set(c)) == len(c)
    assert {to_text(g) for g in c} == _nodes(f)
    position = {g: i for i, g in enumerate(c)}
    for g in c:
        for child in g.children():
            assert position[child] < position[g]


@given(formulas(), formulas())
def test_closure_order_is_deterministic(f, g):
    assert closure([f, g]) == closure([g, f])


def test_substitution_examples():
    assert substitute(Mod(p), {"p": Imp(q, q)}) == Mod(Imp(q, q))
    assert substitute(Imp(p, q), {}) == Imp(p, q)
    assert substitute(Neg(Mod(p)), {"p": Mod(p)}) == Neg(Mod(Mod(p)))


@given(formulas(), formulas(), formulas())
def test_substitution_is_homomorphic(a, b, s):
    sigma = {"p": s, "q": Neg(s)}
    for op in (Neg, Mod):
        assert substitute(op(a), sigma) == op(substitute(a, sigma))
    assert substitute(Imp(a, b), sigma) == Imp(substitute(a, sigma), substitute(b, sigma))


def test_corpus_examples():
    assert list(enumerate_corpus(["p"], 0)) == [p]
    assert list(enumerate_corpus(["p"], 1)) == [p, Neg(p), Mod(p), Imp(p, p)]
    one = list(enumerate_corpus(["p", "q"], 1))
    assert Imp(p, q) in one and Imp(q, p) in one


def _brute_force_corpus(variables, n, indices):
    # independent oracle: grow by applying every constructor to every pair, then filter by size
    level = {Var(v) for v in variables}
    for _ in range(n):
        new = set(level)
        for a in level:
            new.add(Neg(a))
            new.update(Mod(a, i) for i in indices)
            for b in level:
                new.add(Imp(a, b))
        level = {f for f in new if f.size <= n}
    return level


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_corpus_matches_oracle(n):
    got = list(enumerate_corpus(["p", "q"], n))
    assert len(got) == len(set(got)) == corpus_size(2, n)
    assert set(got) == _brute_force_corpus(["p", "q"], n, (None,))


def test_bimodal_corpus_matches_oracle():
    got = list(enumerate_corpus(["p"], 2, BIMODAL))
    assert len(got) == len(set(got))
    assert set(got) == _brute_force_corpus(["p"], 2, (1, 2))


def test_corpus_counts():
    assert [corpus_size(2, n) - corpus_size(2, n - 1) for n in range(1, 5)] == [8, 48, 352, 2880]
    assert corpus_size(2, 4) == 3290


def test_corpus_cap():
    with pytest.raises(CorpusTooLarge):
        enumerate_corpus(["p", "q"], 6, cap=1000)


@settings(max_examples=50)
@given(formulas())
def test_variables_in_order_of_occurrence(f):
    names = f.variables()
    assert len(names) == len(set(names))
    assert set(names) == {g.name for g in subformulas(f) if isinstance(g, Var)}
