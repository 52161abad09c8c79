import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import random_lasso, random_word
from omegasep.algebra import (
    FiniteSemigroup,
    OmegaMorphism,
    RecognizedLanguage,
    StructureError,
    UsageError,
    WilkeAlgebra,
    alphabet_completion,
    content_of,
    idempotent_exponent,
    morphisms_isomorphic,
    pair_product_morphism,
    restrict_to_reachable,
    syntactic_quotient,
    validate_wilke_algebra,
    with_content,
)
from omegasep.corpus import allb, evena, infa, universal
from omegasep.randalg import random_small_languages


def one_element(omega_target="T", mixed_target="T"):
    return WilkeAlgebra.from_tables(
        ["e"], ["T", "F"], {("e", "e"): "e"}, {("e", "T"): mixed_target, ("e", "F"): "F"}, {"e": omega_target}
    )


def cyclic(n):
    els = [str(j) for j in range(n)]
    return FiniteSemigroup(tuple(els), tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


# -- validation ---------------------------------------------------------------------


def test_one_element_algebra_is_valid():
    assert validate_wilke_algebra(one_element()) == []


def test_absorption_violation_is_reported_with_witness():
    viol = validate_wilke_algebra(one_element(mixed_target="F"))
    assert [v.axiom for v in viol if v.axiom == "omega-power absorption"] == ["omega-power absorption"]
    assert ("e",) in [v.witness for v in viol]


@pytest.mark.parametrize("build", [infa, allb, universal, evena])
def test_corpus_algebras_are_valid(build):
    m, _ = build()
    assert validate_wilke_algebra(m.algebra) == []


def test_nonassociative_table_is_reported():
    # left projection fixed on one element, right projection elsewhere
    sg = FiniteSemigroup(("x", "y"), ((0, 0), (0, 1)))
    assert sg.associativity_violations() == []
    bad = FiniteSemigroup(("x", "y"), ((1, 0), (0, 0)))
    assert bad.associativity_violations()


def test_missing_entry_is_a_structural_error():
    with pytest.raises(StructureError, match="missing mult"):
        WilkeAlgebra.from_tables(["e"], ["T"], {}, {("e", "T"): "T"}, {"e": "T"})


def test_unknown_id_is_a_structural_error():
    with pytest.raises(StructureError):
        WilkeAlgebra.from_tables(["e"], ["T"], {("e", "e"): "z"}, {("e", "T"): "T"}, {"e": "T"})


def test_empty_alphabet_rejected():
    m, _ = universal()
    with pytest.raises(StructureError):
        OmegaMorphism((), m.algebra, {})


# -- idempotent exponent ---------------------------------------------------------------------


def test_idempotent_exponent_examples():
    assert idempotent_exponent(FiniteSemigroup(("e",), ((0,),))) == 1
    assert idempotent_exponent(cyclic(3)) == 3
    assert idempotent_exponent(infa()[0].algebra.splus) == 1


def _min_exponent_brute(sg):
    n = 1
    while not all(sg.is_idempotent(sg.power(s, n)) for s in range(len(sg))):
        n += 1
    return n


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_idempotent_exponent_minimal_on_cyclic_groups(n):
    assert idempotent_exponent(cyclic(n)) == _min_exponent_brute(cyclic(n)) == n


def test_idempotent_exponent_minimal_on_random_algebras():
    for lang in random_small_languages(3, 25, max_plus=6):
        sg = lang.morphism.algebra.splus
        e = idempotent_exponent(sg)
        assert all(sg.is_idempotent(sg.power(s, e)) for s in range(len(sg)))
        assert e == _min_exponent_brute(sg)


# -- pairing ------------------------------------------------------------------------------


def test_pairing_with_itself_is_diagonal(infa_pair):
    m, _ = infa_pair
    assert morphisms_isomorphic(pair_product_morphism(m, m), restrict_to_reachable(m))


def test_pairing_size_and_componentwise_evaluation():
    m0, _ = infa()
    m1, _ = allb()
    p = pair_product_morphism(m0, m1)
    assert len(p.algebra.splus) <= len(m0.algebra.splus) * len(m1.algebra.splus)
    assert validate_wilke_algebra(p.algebra) == []
    rng = random.Random(0)
    for _ in range(100):
        w = random_lasso(rng)
        got = p.algebra.sinf[p.eval_lasso(w.prefix, w.loop)]
        want = f"({m0.inf_id(m0.eval_lasso(w.prefix, w.loop))},{m1.inf_id(m1.eval_lasso(w.prefix, w.loop))})"
        assert got == want


def test_pairing_rejects_alphabet_mismatch():
    m0, _ = infa()
    m1, _ = universal(("a", "b", "c"))
    with pytest.raises(StructureError):
        pair_product_morphism(m0, m1)


def test_pairing_recognizes_both_languages():
    m0, l0 = infa()
    m1, l1 = allb()
    p = pair_product_morphism(m0, m1)
    rng = random.Random(1)
    for lang in (l0["INF"], l1["ALLB"]):
        moved = lang.transport(p)
        for _ in range(200):
            w = random_lasso(rng)
            assert moved.accepts_lasso(w.prefix, w.loop) == lang.accepts_lasso(w.prefix, w.loop)


# -- alphabet completion --------------------------------------------------------------------


def test_completion_of_infa(infa_completed):
    c = infa_completed
    assert set(c.algebra.splus.elements) == {"(0,{b})", "(1,{a})", "(1,{a,b})"}
    assert set(c.algebra.sinf) == {"(FIN,{b})", "(FIN,{a,b})", "(INF,{a})", "(INF,{a,b})"}
    assert c.alphabet_compatible
    assert validate_wilke_algebra(c.algebra) == []


def test_completion_is_identity_on_compatible(infa_completed):
    assert alphabet_completion(infa_completed) is infa_completed


def test_single_letter_completion_matches_reachable_part():
    alg = WilkeAlgebra.from_tables(
        ["0", "1"],
        ["E", "O"],
        {(s, t): str((int(s) + int(t)) % 2) for s in "01" for t in "01"},
        {(s, w): w for s in "01" for w in "EO"},
        {"0": "E", "1": "E"},
    )
    m = OmegaMorphism(("a",), alg, {"a": 1})
    c = alphabet_completion(m)
    assert len(c.algebra.splus) == len(restrict_to_reachable(m).algebra.splus)
    assert morphisms_isomorphic(c, m)


@pytest.mark.parametrize("build", [infa, allb, evena])
def test_completion_content_matches_letters(build):
    m, _ = build()
    c = alphabet_completion(m)
    rng = random.Random(2)
    for _ in range(1000):
        u = random_word(rng, 1, 8)
        assert c.content(c.eval_word(u)) == frozenset(u)
        w = random_lasso(rng)
        assert c.content(c.eval_lasso(w.prefix, w.loop), inf=True) == w.content


def test_content_is_multiplicative(infa_completed):
    c = infa_completed
    alg = c.algebra
    for s, t in product(c.reachable_plus, repeat=2):
        assert c.content(alg.mul(s, t)) == c.content(s) | c.content(t)
    for s in c.reachable_plus:
        assert c.content(alg.omega[s], inf=True) == c.content(s)
        for w in c.reachable_inf:
            assert c.content(alg.mixed[s][w], inf=True) == c.content(s) | c.content(w, inf=True)


def test_content_of_examples(infa_completed):
    assert content_of(infa_completed, "(1,{a,b})") == {"a", "b"}
    assert content_of(infa_completed, "(0,{b})") == {"b"}


def test_content_of_unreachable_is_empty():
    alg = WilkeAlgebra.from_tables(
        ["x", "z"],
        ["X"],
        {("x", "x"): "x", ("x", "z"): "z", ("z", "x"): "z", ("z", "z"): "z"},
        {("x", "X"): "X", ("z", "X"): "X"},
        {"x": "X", "z": "X"},
    )
    raw = OmegaMorphism(("a",), alg, {"a": 0})
    # a-words all map to x; z has no preimage
    assert alphabet_completion(raw).alphabet_compatible
    assert 1 not in raw.reachable_plus
    declared = with_content(raw, {"x": ["a"], "X": ["a"]})
    assert content_of(declared, "z") == frozenset()


def test_content_of_requires_compatible(infa_pair):
    with pytest.raises(UsageError):
        content_of(infa_pair[0], "1")


# -- syntactic quotient -------------------------------------------------------------------------


def test_quotient_forgets_content_of_completed_infa(infa_completed, infa_pair):
    lang = RecognizedLanguage.by_ids(infa_completed, ["(INF,{a})", "(INF,{a,b})"])
    q = syntactic_quotient(lang)
    assert morphisms_isomorphic(q.morphism, restrict_to_reachable(infa_pair[0]))


def test_quotient_of_diagonal_pairing(infa_pair):
    m, langs = infa_pair
    p = pair_product_morphism(m, m)
    lp = langs["INF"].transport(p)
    assert morphisms_isomorphic(syntactic_quotient(lp).morphism, syntactic_quotient(langs["INF"]).morphism)


@pytest.mark.parametrize("build", [infa, allb, universal, evena])
def test_quotient_is_idempotent_and_valid(build):
    _, langs = build()
    for lang in langs.values():
        q1 = syntactic_quotient(lang)
        q2 = syntactic_quotient(q1.language)
        assert validate_wilke_algebra(q1.morphism.algebra) == []
        assert morphisms_isomorphic(q1.morphism, q2.morphism)


@pytest.mark.parametrize("build", [infa, allb, evena])
def test_quotient_recognizes_same_language(build):
    _, langs = build()
    rng = random.Random(4)
    for lang in langs.values():
        q = syntactic_quotient(lang).language
        for _ in range(1000):
            w = random_lasso(rng)
            assert q.accepts_lasso(w.prefix, w.loop) == lang.accepts_lasso(w.prefix, w.loop)


def test_evena_syntactic_algebra_is_smaller():
    _, langs = evena()
    q = syntactic_quotient(langs["EVENA"])
    assert len(q.morphism.algebra.splus) <= len(langs["EVENA"].morphism.algebra.splus)


def test_accept_set_with_unknown_id_rejected(infa_pair):
    with pytest.raises(StructureError):
        RecognizedLanguage.by_ids(infa_pair[0], ["NOPE"])


@given(st.integers(min_value=0, max_value=10_000))
def test_random_algebras_pass_validation(seed):
    lang = next(random_small_languages(seed, 1, max_plus=6))
    m = lang.morphism
    assert validate_wilke_algebra(m.algebra) == []
    assert validate_wilke_algebra(alphabet_completion(m).algebra) == []
