"""Write the corpus algebra and automaton files into corpus/."""
from __future__ import annotations

import argparse
from pathlib import Path

from omegasep import io
from omegasep.corpus import all_algebras, evena_automaton, infinitely_many_a_automaton


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name, (m, langs) in all_algebras().items():
        io.save(io.algebra_to_dict(m, langs), out / f"{name}.alg")
    io.save(io.automaton_to_dict(evena_automaton(), "EVENA"), out / "evena.buchi")
    io.save(io.automaton_to_dict(infinitely_many_a_automaton(), "INF"), out / "infa.buchi")
    broken = io.algebra_to_dict(*all_algebras()["infa"])
    del broken["mult"]["1,0"]
    io.save(broken, out / "broken.alg")
    print(f"wrote corpus to {out}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "corpus")
    main(ap.parse_args().out)
