"""Decision statistics on random small Wilke algebras."""
import argparse
from collections import Counter

from omegasep.decide import DecisionConfig, membership_bsigma2, separability_sigma2
from omegasep.randalg import random_small_languages


def main(seed: int, count: int, max_plus: int) -> None:
    cfg = DecisionConfig(witness_ranks=(1,))
    stats = Counter()
    for lang in random_small_languages(seed, count, max_plus):
        mem = membership_bsigma2(lang, cfg)
        sep = separability_sigma2(lang, lang.complement(), cfg)
        stats[(mem.answer, mem.confidence, "sigma2" if sep.answer == "separable" else "not-sigma2")] += 1
        if sep.answer == "separable" and mem.answer != "member":
            print(f"inconsistent: {lang.name}")
    for key, n in sorted(stats.items()):
        print(f"{n:4d}  membership={key[0]:<10s} confidence={key[1]:<9s} {key[2]}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--max-plus", type=int, default=4)
    a = ap.parse_args()
    main(a.seed, a.count, a.max_plus)
