import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import all_words, random_lasso, random_word
from omegasep.algebra import alphabet_completion
from omegasep.corpus import evena, infa, universal
from omegasep.ef import (
    CapError,
    Caps,
    bsigma_equiv,
    certify_lasso_leq,
    chains_at_rank,
    derivation_rules,
    estimate_chains,
    estimate_mixed_chains,
    mixed_chains_at_rank,
    pattern_is_chain,
    pebble_game_leq,
    preorders_for,
    sigma_leq,
)
from omegasep.recognizer import LassoWord, parse_lasso

words = st.text("ab", min_size=1, max_size=6)
levels = st.integers(1, 3)
ranks = st.integers(1, 3)


def is_subword(x, y):
    it = iter(y)
    return all(c in it for c in x)


def short_subwords(u, k):
    return {"".join(c) for n in range(1, k + 1) for c in product("ab", repeat=n) if is_subword("".join(c), u)}


# -- preorder basics -------------------------------------------------------------------


def test_examples():
    assert sigma_leq(1, 1, "ab", "b") is False
    assert sigma_leq(1, 3, "b", "ab") is True
    assert sigma_leq(2, 2, "abba", "abba") is True
    assert sigma_leq(3, 0, "a", "bbbb") is True


def test_bsigma_equiv_is_both_directions():
    assert bsigma_equiv(1, 1, "ab", "ba")
    assert not bsigma_equiv(1, 1, "ab", "b")


@pytest.mark.parametrize(
    "args",
    [(1, 5, "a", "a"), (4, 1, "a", "b"), (1, 1, "a" * 11, "a"), (0, 1, "a", "b")],
)
def test_cap_errors(args):
    with pytest.raises(CapError):
        sigma_leq(*args)


def test_custom_caps():
    with pytest.raises(CapError):
        sigma_leq(1, 3, "ab", "ba", Caps(rank=2))


def test_empty_word_rejected():
    with pytest.raises(ValueError):
        sigma_leq(1, 1, "", "a")


@pytest.mark.parametrize("i", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_engine_matches_naive_game(i, k):
    ws = all_words(3)
    bad = [(u, v) for u in ws for v in ws if sigma_leq(i, k, u, v) != pebble_game_leq(i, k, u, v)]
    assert bad == []


@given(st.text("ab", min_size=1, max_size=4), st.text("ab", min_size=1, max_size=4), levels, st.integers(1, 2))
def test_engine_matches_naive_game_sampled(u, v, i, k):
    assert sigma_leq(i, k, u, v) == pebble_game_leq(i, k, u, v)


def test_sigma1_rank1_is_letter_inclusion():
    ws = all_words(6)
    assert all(sigma_leq(1, 1, u, v) == (set(u) <= set(v)) for u in ws[:40] for v in ws)


def test_sigma1_implies_short_subword_inclusion():
    ws = all_words(5)
    for k in (1, 2, 3):
        for u, v in product(ws, repeat=2):
            if sigma_leq(1, k, u, v):
                assert short_subwords(u, k) <= short_subwords(v, k)


def _nested_sentence(w):
    # exists x (exists y y<x and exists z x<z): rank 2 by nesting depth
    return any(0 < x < len(w) - 1 for x in range(len(w)))


def test_depth_two_sigma1_sentence_separates_aaa_from_aa():
    # "aa" and "aaa" share all subwords of length <= 2, yet a nested
    # existential sentence of depth 2 tells them apart
    assert short_subwords("aaa", 2) == short_subwords("aa", 2)
    assert _nested_sentence("aaa") and not _nested_sentence("aa")
    assert sigma_leq(1, 2, "aaa", "aa") is False
    assert pebble_game_leq(1, 2, "aaa", "aa") is False


# -- lemma properties ------------------------------------------------------------------


@given(words, words, words, levels, ranks)
def test_preorder(u, v, w, i, k):
    assert sigma_leq(i, k, u, u)
    if sigma_leq(i, k, u, v) and sigma_leq(i, k, v, w):
        assert sigma_leq(i, k, u, w)


@given(words, words, levels, ranks)
def test_rank_monotonicity(u, v, i, k):
    if sigma_leq(i, k + 1, u, v):
        assert sigma_leq(i, k, u, v)
    if i < 3 and sigma_leq(i + 1, k, u, v):
        assert bsigma_equiv(i, k, u, v)


@given(st.text("ab", min_size=1, max_size=5), st.text("ab", min_size=1, max_size=5), levels, ranks, st.data())
def test_composition(u1, v1, i, k, data):
    u2 = data.draw(st.text("ab", min_size=1, max_size=5))
    v2 = data.draw(st.text("ab", min_size=1, max_size=5))
    if sigma_leq(i, k, u1, v1) and sigma_leq(i, k, u2, v2):
        assert sigma_leq(i, k, u1 + u2, v1 + v2)


def _decomposes(i, k, u, v):
    for a in range(1, len(u)):
        u1, u2 = u[:a], u[a:]
        if not any(
            sigma_leq(i, k - 1, u1, v[:b]) and sigma_leq(i, k - 1, u2, v[b:]) for b in range(1, len(v))
        ):
            return False
    return True


@given(words, words, levels, ranks)
def test_decomposition(u, v, i, k):
    if sigma_leq(i, k, u, v) and len(v) > 1:
        assert _decomposes(i, k, u, v)


def test_lemma_properties_bulk():
    """Deterministic 10^4-instance sweep of composition, decomposition and monotonicity."""
    rng = random.Random(7)
    for _ in range(10_000):
        i, k = rng.randint(1, 3), rng.randint(1, 3)
        u, v = random_word(rng, 1, 5), random_word(rng, 1, 5)
        le = sigma_leq(i, k, u, v)
        if le and k > 1:
            assert sigma_leq(i, k - 1, u, v)
        if i < 3 and sigma_leq(i + 1, k, u, v):
            assert bsigma_equiv(i, k, u, v)
        if le and len(v) > 1:
            assert _decomposes(i, k, u, v)
        x, y = random_word(rng, 1, 4), random_word(rng, 1, 4)
        if le and sigma_leq(i, k, x, y):
            assert sigma_leq(i, k, u + x, v + y)


def test_preorder_tables_are_shared():
    assert preorders_for("ab", 4) is preorders_for("ab", 3)


# -- chains -----------------------------------------------------------------------------


def ids(m, t):
    return tuple(m.plus_id(x) for x in t)


def test_single_element_chains_are_images(infa_completed):
    m = infa_completed
    cs = chains_at_rank(2, 1, 2, m, 4)
    assert {t[0] for t in cs.tuples} == set(m.reachable_plus)


def test_infa_sigma1_pair_example(infa_completed):
    m = infa_completed
    cs = chains_at_rank(1, 2, 1, m, 3)
    assert ("(0,{b})", "(1,{a,b})") in {ids(m, t) for t in cs}


def test_infa_sigma2_rank2_keeps_content(infa_completed):
    m = infa_completed
    for t in chains_at_rank(2, 2, 2, m, 4):
        assert m.content(t[0]) == m.content(t[1])


def test_infa_pairs_stabilize_to_content_diagonal(infa_completed):
    m = infa_completed
    cs = estimate_chains(2, 2, m)
    assert cs.status.kind == "stabilized"
    assert cs.status.first_stable_rank <= 2
    assert set(cs.tuples) == {(s, s) for s in m.reachable_plus}


def test_one_element_algebra_stabilizes_immediately():
    m, _ = universal()
    cs = estimate_chains(2, 3, m)
    assert cs.tuples == {(0, 0, 0)}
    assert cs.status.kind == "stabilized" and cs.status.first_stable_rank == 1


def test_evena_has_parity_pair():
    m = alphabet_completion(evena()[0])
    cs = chains_at_rank(2, 2, 2, m, 8)
    aa, a = m.eval_word("a" * 8), m.eval_word("a" * 7)
    assert aa != a and (aa, a) in cs


@pytest.mark.parametrize("i", [1, 2, 3])
def test_rank_nesting_and_length_growth(i):
    m = alphabet_completion(evena()[0])
    for k in (1, 2):
        assert chains_at_rank(i, 2, k + 1, m, 6).tuples <= chains_at_rank(i, 2, k, m, 6).tuples
    assert chains_at_rank(i, 2, 2, m, 5).tuples <= chains_at_rank(i, 2, 2, m, 6).tuples


def test_witnesses_realize_tuples():
    m = alphabet_completion(evena()[0])
    cs = chains_at_rank(2, 3, 2, m, 6)
    for t, ws in cs.witnesses.items():
        assert tuple(m.eval_word(w) for w in ws) == t
        assert all(sigma_leq(2, 2, x, y) for x, y in zip(ws, ws[1:]))


@pytest.mark.parametrize("build", [infa, evena, universal])
def test_stabilized_sets_are_closed(build):
    m = alphabet_completion(build()[0])
    for n in (2, 3):
        cs = estimate_chains(2, n, m)
        if cs.status.kind == "stabilized":
            assert cs.closure_violations() == []


def test_pattern_is_chain_matches_enumeration():
    m = alphabet_completion(evena()[0])
    cs = chains_at_rank(2, 3, 2, m, 6)
    for t in product(m.reachable_plus, repeat=3):
        assert pattern_is_chain(m, 2, t, 2, 6) == (t in cs)


def test_mixed_chains(infa_completed):
    m = infa_completed
    mixed = estimate_mixed_chains(m)
    assert {(s, s, s) for s in m.reachable_plus} <= set(mixed.tuples)
    assert all(m.content(a) == m.content(b) == m.content(c) for a, b, c in mixed)
    ev = alphabet_completion(evena()[0])
    mx = mixed_chains_at_rank(2, ev, 6)
    p3 = chains_at_rank(3, 2, 2, ev, 6)
    assert all((b, c) in p3 for _, b, c in mx)


# -- lasso certificates -----------------------------------------------------------------


def test_certificate_examples():
    assert certify_lasso_leq(2, 2, parse_lasso("(ab)^w"), parse_lasso("(ab)^w")).proved
    c = certify_lasso_leq(2, 2, parse_lasso("(ab)^w"), parse_lasso("ababababa(b)^w"))
    assert c.proved and "alph" in derivation_rules(c.derivation)
    assert not certify_lasso_leq(2, 2, parse_lasso("(a)^w"), parse_lasso("(b)^w")).proved


def test_certificate_level3_pumping():
    c = certify_lasso_leq(3, 1, parse_lasso("(ab)^w"), parse_lasso("ababaab(ab)^w"))
    assert c.proved and "pump" in derivation_rules(c.derivation)


def test_certificate_level_checked():
    with pytest.raises(CapError):
        certify_lasso_leq(1, 1, LassoWord("", "a"), LassoWord("", "a"))


def _first_letter(w):
    return w.letter(0)


def _recurring(w):
    return frozenset(w.normalized().loop)


def test_certifier_respects_definable_properties():
    # Sigma2 sentences of rank <= 2: "c occurs", "c does not occur",
    # "finitely many c" and "first letter is c"
    rng = random.Random(11)
    proved = 0
    for _ in range(400):
        w1 = random_lasso(rng, 3, 3)
        w2 = random_lasso(rng, 10, 3) if rng.random() < 0.5 else w1.prepend(rng.choice(["", "a", "b", "ab"]))
        c = certify_lasso_leq(2, 2, w1, w2)
        if not c.proved:
            continue
        proved += 1
        assert w1.content == w2.content
        assert _recurring(w2) <= _recurring(w1)
        assert _first_letter(w1) == _first_letter(w2)
    assert proved > 20
