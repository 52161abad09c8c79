"""Small hand-specified algebras and automata used throughout the tests."""
from __future__ import annotations

from .algebra import OmegaMorphism, RecognizedLanguage, WilkeAlgebra
from .recognizer import BuchiAutomaton, buchi_to_algebra


def infa() -> tuple[OmegaMorphism, dict[str, RecognizedLanguage]]:
    """{0,1} under max; a -> 1, b -> 0; tracks whether a occurs infinitely often."""
    P, I = ["0", "1"], ["FIN", "INF"]
    mult = {(s, t): str(max(int(s), int(t))) for s in P for t in P}
    mixed = {(s, w): w for s in P for w in I}
    omega = {"0": "FIN", "1": "INF"}
    alg = WilkeAlgebra.from_tables(P, I, mult, mixed, omega)
    m = OmegaMorphism(("a", "b"), alg, {"a": 1, "b": 0}, name="INFA")
    return m, {
        "INF": RecognizedLanguage.by_ids(m, ["INF"], "INF"),
        "FIN": RecognizedLanguage.by_ids(m, ["FIN"], "FIN"),
    }


def allb() -> tuple[OmegaMorphism, dict[str, RecognizedLanguage]]:
    """Recognizes b^inf: B for b-only words, X otherwise."""
    P, I = ["B", "X"], ["Binf", "Xinf"]
    mult = {(s, t): "B" if s == t == "B" else "X" for s in P for t in P}
    mixed = {(s, w): w if s == "B" else "Xinf" for s in P for w in I}
    omega = {"B": "Binf", "X": "Xinf"}
    alg = WilkeAlgebra.from_tables(P, I, mult, mixed, omega)
    m = OmegaMorphism(("a", "b"), alg, {"a": 1, "b": 0}, name="ALLB")
    return m, {"ALLB": RecognizedLanguage.by_ids(m, ["Binf"], "ALLB")}


def universal(alphabet=("a", "b")) -> tuple[OmegaMorphism, dict[str, RecognizedLanguage]]:
    alg = WilkeAlgebra.from_tables(["e"], ["T"], {("e", "e"): "e"}, {("e", "T"): "T"}, {"e": "T"})
    m = OmegaMorphism(tuple(alphabet), alg, {a: 0 for a in alphabet}, name="UNIV")
    return m, {"ALL": RecognizedLanguage.by_ids(m, ["T"], "ALL")}


def evena_automaton() -> BuchiAutomaton:
    """a^{2n} b^inf, n >= 1."""
    return BuchiAutomaton(
        states=("0", "1", "2", "3"),
        alphabet=("a", "b"),
        initial="0",
        accepting=frozenset({"3"}),
        transitions=frozenset(
            {("0", "a", "1"), ("1", "a", "2"), ("2", "a", "1"), ("2", "b", "3"), ("3", "b", "3")}
        ),
    )


def infinitely_many_a_automaton() -> BuchiAutomaton:
    return BuchiAutomaton(
        states=("p", "q"),
        alphabet=("a", "b"),
        initial="p",
        accepting=frozenset({"q"}),
        transitions=frozenset({("p", "b", "p"), ("p", "a", "q"), ("q", "a", "q"), ("q", "b", "p")}),
    )


def evena() -> tuple[OmegaMorphism, dict[str, RecognizedLanguage]]:
    m, lang = buchi_to_algebra(evena_automaton(), "EVENA")
    return m, {"EVENA": lang}


def all_algebras() -> dict[str, tuple[OmegaMorphism, dict[str, RecognizedLanguage]]]:
    return {"infa": infa(), "allb": allb(), "universal": universal(), "evena": evena()}
