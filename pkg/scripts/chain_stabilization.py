"""Chain-set sizes along the default schedule for every corpus algebra."""
import argparse

from omegasep.algebra import alphabet_completion
from omegasep.corpus import all_algebras
from omegasep.ef import DEFAULT_CAPS, estimate_chains, estimate_mixed_chains


def main(lengths) -> None:
    for name, (m, _) in sorted(all_algebras().items()):
        c = alphabet_completion(m)
        print(f"{name}: |S+| = {len(c.algebra.splus)}")
        for i in (1, 2, 3):
            for n in lengths:
                cs = estimate_chains(i, n, c)
                sizes = " ".join(f"(k={k},L={L}):{s}" for k, L, s in cs.history)
                print(f"  level {i} n={n}  {sizes}  -> {cs.status}")
        mx = estimate_mixed_chains(c)
        print(f"  mixed       {' '.join(f'(k={k},L={L}):{s}' for k, L, s in mx.history)}  -> {mx.status}")
    print(f"schedule {DEFAULT_CAPS.schedule}, window {DEFAULT_CAPS.window}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lengths", type=int, nargs="+", default=[2, 3])
    main(ap.parse_args().lengths)
