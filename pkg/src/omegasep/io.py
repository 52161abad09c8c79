"""JSON file formats for algebras, automata and reports."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import OmegaMorphism, RecognizedLanguage, StructureError, WilkeAlgebra, with_content
from .recognizer import BuchiAutomaton

SCHEMA_VERSION = 1


def _need(doc: dict, key: str, kind):
    if key not in doc:
        raise StructureError(f"missing field {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise StructureError(f"field {key!r} has the wrong type")
    return val


def _pair_table(raw: dict, what: str) -> dict[tuple[str, str], str]:
    out = {}
    for key, val in raw.items():
        parts = key.split(",")
        if len(parts) != 2:
            raise StructureError(f"{what} key {key!r} is not of the form 's,t'")
        out[(parts[0].strip(), parts[1].strip())] = val
    return out


def algebra_from_dict(doc: dict) -> tuple[OmegaMorphism, dict[str, RecognizedLanguage]]:
    alphabet = _need(doc, "alphabet", list)
    splus = _need(doc, "splus", list)
    sinf = _need(doc, "sinf", list)
    alg = WilkeAlgebra.from_tables(
        splus,
        sinf,
        _pair_table(_need(doc, "mult", dict), "mult"),
        _pair_table(_need(doc, "mixed", dict), "mixed"),
        _need(doc, "omega", dict),
    )
    letters = _need(doc, "letters", dict)
    for a, s in letters.items():
        if s not in alg.splus.index:
            raise StructureError(f"letter {a!r} maps to unknown id {s!r}")
    m = OmegaMorphism(
        tuple(alphabet),
        alg,
        {a: alg.splus.index[s] for a, s in letters.items()},
        name=str(doc.get("name", "")),
    )
    if "content" in doc:
        m = with_content(m, _need(doc, "content", dict))
    langs = {}
    for name, spec in sorted(doc.get("languages", {}).items()):
        if not isinstance(spec, dict) or "accept" not in spec:
            raise StructureError(f"language {name!r} needs an accept list")
        langs[name] = RecognizedLanguage.by_ids(m, spec["accept"], name)
    return m, langs


def algebra_to_dict(m: OmegaMorphism, languages: dict[str, RecognizedLanguage]) -> dict:
    alg = m.algebra
    P, I = alg.splus.elements, alg.sinf
    doc: dict[str, Any] = {
        "alphabet": list(m.alphabet),
        "splus": list(P),
        "sinf": list(I),
        "mult": {f"{P[s]},{P[t]}": P[alg.mul(s, t)] for s in range(len(P)) for t in range(len(P))},
        "mixed": {f"{P[s]},{I[w]}": I[alg.mixed[s][w]] for s in range(len(P)) for w in range(len(I))},
        "omega": {P[s]: I[alg.omega[s]] for s in range(len(P))},
        "letters": {a: P[s] for a, s in sorted(m.letter_image.items())},
        "languages": {n: {"accept": sorted(I[w] for w in l.accept)} for n, l in sorted(languages.items())},
    }
    if m.name:
        doc["name"] = m.name
    if m.alphabet_compatible:
        content = {P[s]: sorted(c) for s, c in enumerate(m.content_plus)}
        content.update({I[w]: sorted(c) for w, c in enumerate(m.content_inf)})
        doc["content"] = content
    return doc


def automaton_from_dict(doc: dict) -> BuchiAutomaton:
    trans = []
    for t in _need(doc, "transitions", list):
        if not isinstance(t, list) or len(t) != 3:
            raise StructureError(f"transition {t!r} is not [src, letter, dst]")
        trans.append(tuple(t))
    letters = _need(doc, "alphabet", list)
    for a in letters:
        if not isinstance(a, str) or len(a) != 1:
            raise StructureError(f"letter {a!r} is not a single character")
    return BuchiAutomaton(
        states=tuple(_need(doc, "states", list)),
        alphabet=tuple(letters),
        initial=_need(doc, "initial", str),
        accepting=frozenset(_need(doc, "accepting", list)),
        transitions=frozenset(trans),
    )


def automaton_to_dict(aut: BuchiAutomaton, name: str = "L") -> dict:
    return {
        "name": name,
        "states": list(aut.states),
        "alphabet": list(aut.alphabet),
        "initial": aut.initial,
        "accepting": sorted(aut.accepting),
        "transitions": [list(t) for t in sorted(aut.transitions)],
    }


def _read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StructureError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise StructureError(f"{path}: top level must be an object")
    return doc


def load_algebra(path) -> tuple[OmegaMorphism, dict[str, RecognizedLanguage]]:
    return algebra_from_dict(_read_json(path))


def load_automaton(path) -> tuple[BuchiAutomaton, str]:
    doc = _read_json(path)
    return automaton_from_dict(doc), str(doc.get("name", "L"))


def dumps(doc: dict) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save(doc: dict, path) -> None:
    Path(path).write_text(dumps(doc))


def report(command: str, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **body}
