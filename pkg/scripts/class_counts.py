"""Number of rank-k Sigma_i classes among all words up to a length."""
import argparse
import time

from omegasep.ef import RankedPreorders, words_up_to


def main(length: int, max_rank: int, alphabet: str) -> None:
    t0 = time.perf_counter()
    pre = RankedPreorders(words_up_to(alphabet, length))
    print(f"words of length <= {length} over {{{','.join(alphabet)}}}: {len(pre.words) - 1}")
    print("level  " + "  ".join(f"k={k:<4d}" for k in range(1, max_rank + 1)))
    for i in (1, 2, 3):
        sizes = [pre.level(i, k).size for k in range(1, max_rank + 1)]
        print(f"{i:5d}  " + "  ".join(f"{s:<6d}" for s in sizes))
    print(f"{time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--length", type=int, default=8)
    ap.add_argument("--max-rank", type=int, default=4)
    ap.add_argument("--alphabet", default="ab")
    a = ap.parse_args()
    main(a.length, a.max_rank, a.alphabet)
