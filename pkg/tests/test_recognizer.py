import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import all_words, random_lasso
from omegasep.algebra import StructureError, validate_wilke_algebra
from omegasep.corpus import infa
from omegasep.recognizer import (
    BuchiAutomaton,
    LassoWord,
    buchi_to_algebra,
    eval_lasso,
    infinite_image,
    lasso_accepted_by_automaton,
    parse_lasso,
    ramsey_factorize,
)

lassos = st.builds(LassoWord, st.text("ab", max_size=5), st.text("ab", min_size=1, max_size=5))


def small_lassos(n=4):
    for prefix in all_words(n, empty=True):
        for loop in all_words(n):
            yield LassoWord(prefix, loop)


# -- lasso words --------------------------------------------------------------------


def test_parse_roundtrip():
    w = parse_lasso("ab(ba)^w")
    assert (w.prefix, w.loop) == ("ab", "ba")
    assert str(w) == "ab(ba)^w"
    assert parse_lasso("(a)^w") == LassoWord("", "a")


@pytest.mark.parametrize("bad", ["ab", "a()^w", "a(b)", "(a)(b)^w", "a(c)^w"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_lasso(bad, "ab")


def test_normalization_examples():
    assert LassoWord("abab", "ab").normalized() == LassoWord("", "ab")
    assert LassoWord("a", "bb").normalized() == LassoWord("a", "b")
    assert LassoWord("ab", "aab").normalized() == LassoWord("", "aba")


@given(lassos)
def test_normalized_is_same_infinite_word(w):
    n = w.normalized()
    horizon = 2 * (len(w.prefix) + len(w.loop) + len(n.prefix) + len(n.loop))
    assert w.take(horizon) == n.take(horizon)
    assert n.normalized() == n


@given(lassos, st.integers(0, 12))
def test_drop_prepend(w, k):
    assert w.drop(k).prepend(w.take(k)).same_word(w)


# -- automaton conversion ---------------------------------------------------------------


def test_automaton_validation():
    with pytest.raises(StructureError):
        BuchiAutomaton(("p",), ("a",), "q", frozenset(), frozenset())
    with pytest.raises(StructureError):
        BuchiAutomaton(("p",), ("a",), "p", frozenset(), frozenset({("p", "b", "p")}))


@pytest.mark.parametrize("name", ["infa", "evena"])
def test_converted_algebra_is_valid(automata, name):
    m, _ = buchi_to_algebra(automata[name])
    assert validate_wilke_algebra(m.algebra) == []


@pytest.mark.parametrize("name", ["infa", "evena"])
def test_agreement_exhaustive(automata, name):
    aut = automata[name]
    _, lang = buchi_to_algebra(aut)
    bad = [w for w in small_lassos() if lang.accepts_lasso(w.prefix, w.loop) != lasso_accepted_by_automaton(aut, w)]
    assert bad == []


def test_universal_automaton():
    aut = BuchiAutomaton(("p",), ("a", "b"), "p", frozenset({"p"}), frozenset({("p", "a", "p"), ("p", "b", "p")}))
    m, lang = buchi_to_algebra(aut)
    assert len(m.reachable_inf) == 1
    assert all(lang.accepts_lasso(w.prefix, w.loop) for w in small_lassos(3))


def test_empty_accepting_set():
    aut = BuchiAutomaton(("p",), ("a", "b"), "p", frozenset(), frozenset({("p", "a", "p"), ("p", "b", "p")}))
    m, lang = buchi_to_algebra(aut)
    assert lang.accept == frozenset()
    assert all(not lasso_accepted_by_automaton(aut, w) for w in small_lassos(3))
    assert all(set(m.inf_id(x)[1:]) == {"0"} for x in m.reachable_inf)


def test_infinitely_many_a_examples(automata):
    aut = automata["infa"]
    assert lasso_accepted_by_automaton(aut, parse_lasso("b(ab)^w"))
    assert not lasso_accepted_by_automaton(aut, parse_lasso("aaa(b)^w"))


def test_evena_examples(automata):
    aut = automata["evena"]
    yes = ["aa(b)^w", "aaaa(b)^w", "aaaaaa(bb)^w"]
    no = ["a(b)^w", "aaa(b)^w", "(b)^w", "aa(ab)^w", "(a)^w"]
    assert [lasso_accepted_by_automaton(aut, parse_lasso(w)) for w in yes] == [True] * 3
    assert [lasso_accepted_by_automaton(aut, parse_lasso(w)) for w in no] == [False] * 5


# -- ramsey and images ---------------------------------------------------------------------


@given(lassos)
def test_ramsey_factorization_evaluates_consistently(w):
    m, _ = infa()
    r = ramsey_factorize(m, w)
    assert m.algebra.splus.is_idempotent(r.idempotent)
    assert m.eval_word(r.block_word) == r.idempotent
    assert len(r.block_word) % len(w.loop) == 0
    direct = m.algebra.mix(r.prefix_image, m.algebra.omega[r.idempotent])
    assert direct == eval_lasso(m, w)


def test_infinite_image_covers_all_lassos(automata):
    m, _ = buchi_to_algebra(automata["evena"])
    img = infinite_image(m)
    seen = {eval_lasso(m, w) for w in small_lassos()}
    assert seen <= img
    rng = random.Random(0)
    for _ in range(300):
        assert eval_lasso(m, random_lasso(rng, 10, 10)) in img


def test_infinite_image_of_infa():
    m, _ = infa()
    assert {m.inf_id(x) for x in infinite_image(m)} == {"FIN", "INF"}


def test_eval_agrees_with_table_arithmetic():
    m, _ = infa()
    for u, v in product(["", "a", "b", "ab"], ["a", "b", "ba"]):
        expect = "INF" if "a" in v else "FIN"
        assert m.inf_id(m.eval_lasso(u, v)) == expect
