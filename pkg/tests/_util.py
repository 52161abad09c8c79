import random

from omegasep.recognizer import LassoWord


def random_word(rng: random.Random, lo: int, hi: int, alphabet: str = "ab") -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def random_lasso(rng: random.Random, max_prefix: int = 6, max_loop: int = 6, alphabet: str = "ab") -> LassoWord:
    return LassoWord(random_word(rng, 0, max_prefix, alphabet), random_word(rng, 1, max_loop, alphabet))


def all_words(n: int, alphabet: str = "ab", empty: bool = False) -> list[str]:
    out = [""] if empty else []
    layer = [""]
    for _ in range(n):
        layer = [w + a for w in layer for a in alphabet]
        out.extend(layer)
    return out
