"""Random small automata and Wilke algebras for property checks."""
from __future__ import annotations

import random
from typing import Iterator

from .algebra import RecognizedLanguage, syntactic_quotient
from .recognizer import BuchiAutomaton, buchi_to_algebra


def random_automaton(rng: random.Random, n_states: int, alphabet=("a", "b"), density: float = 0.4) -> BuchiAutomaton:
    states = tuple(str(j) for j in range(n_states))
    trans = frozenset((p, a, q) for p in states for a in alphabet for q in states if rng.random() < density)
    accepting = frozenset(q for q in states if rng.random() < 0.5)
    return BuchiAutomaton(states, tuple(alphabet), "0", accepting, trans)


def random_small_languages(
    seed: int, count: int, max_plus: int = 4, alphabet=("a", "b")
) -> Iterator[RecognizedLanguage]:
    """Syntactic images of random automata with at most ``max_plus`` S+ elements."""
    rng = random.Random(seed)
    produced = 0
    attempts = 0
    while produced < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("could not find enough small algebras")
        aut = random_automaton(rng, rng.randint(2, 4), alphabet)
        raw, lang = buchi_to_algebra(aut, f"R{attempts}")
        if len(raw.algebra.splus) > 3 * max_plus:
            continue
        quo = syntactic_quotient(lang)
        m = quo.morphism
        if len(m.algebra.splus) > max_plus:
            continue
        if len(m.algebra.splus) == 1 and rng.random() < 0.9:
            continue
        produced += 1
        yield quo.language
