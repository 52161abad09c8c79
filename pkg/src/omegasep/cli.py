"""Command line front end.

Exit codes: 0 when a report was produced from certified or stabilized
estimates, 2 when it was produced but rests on unstable estimates or is
inconclusive, 1 on any error.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import io
from .algebra import UsageError, alphabet_completion, syntactic_quotient, validate_wilke_algebra
from .decide import DecisionConfig, membership_bsigma2, separability_sigma2, separability_sigma3
from .ef import Caps, estimate_chains, estimate_mixed_chains
from .omega_chains import build_alternation_graph, is_recursive, to_dot, transitivity_violations
from .recognizer import buchi_to_algebra, parse_lasso

OK, ERROR, UNSETTLED = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str] = None
    rank_cap: int = 3
    len_cap: int = 8
    window: int = 2
    n_cap: int = 3
    fmt: str = "text"
    timing: bool = False

    def __post_init__(self):
        if min(self.rank_cap, self.len_cap, self.window, self.n_cap) < 1:
            raise UsageError("caps must be positive")
        limits = Caps()
        if self.rank_cap > limits.rank:
            raise UsageError(f"rank cap {self.rank_cap} exceeds the supported maximum {limits.rank}")
        if self.len_cap > limits.length:
            raise UsageError(f"length cap {self.len_cap} exceeds the supported maximum {limits.length}")

    @property
    def schedule(self) -> tuple[tuple[int, int], ...]:
        return tuple((k, min(2 * k + 2, self.len_cap)) for k in range(1, self.rank_cap + 1))

    @property
    def caps(self) -> Caps:
        return Caps(schedule=self.schedule, window=self.window)


def _config(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        rank_cap=getattr(args, "rank_cap", 3),
        len_cap=getattr(args, "len_cap", 8),
        window=getattr(args, "window", 2),
        n_cap=getattr(args, "n_cap", 3),
        fmt=getattr(args, "format", "text"),
        timing=getattr(args, "timing", False),
    )


def _has_dict(val) -> bool:
    if isinstance(val, dict):
        return True
    return isinstance(val, list) and any(_has_dict(v) for v in val)


def _text(doc, prefix="") -> list[str]:
    """One ``dotted.key: value`` line per leaf; scalar lists stay inline."""
    items = sorted(doc.items()) if isinstance(doc, dict) else enumerate(doc)
    lines = []
    for key, val in items:
        name = f"{prefix}{key}"
        if _has_dict(val) and val:
            lines.extend(_text(val, name + "."))
        else:
            lines.append(f"{name}: {_flat(val)}")
    return lines


def _flat(val) -> str:
    if isinstance(val, dict):
        return "{" + ", ".join(f"{k}: {_flat(v)}" for k, v in sorted(val.items())) + "}"
    if isinstance(val, list):
        return "[" + ", ".join(_flat(v) for v in val) + "]"
    if isinstance(val, bool):
        return "true" if val else "false"
    return str(val)


def _emit(cfg: RunConfig, body: dict, started: float) -> None:
    doc = io.report(cfg.command, body)
    if cfg.timing:
        doc["timing_seconds"] = round(time.perf_counter() - started, 3)
    if cfg.fmt == "json":
        sys.stdout.write(io.dumps(doc))
    else:
        sys.stdout.write("\n".join(_text(doc)) + "\n")


def _lang(langs, name):
    if name not in langs:
        raise UsageError(f"unknown language {name!r}; file defines {sorted(langs)}")
    return langs[name]


def cmd_separate(args, cfg, t0):
    m, langs = io.load_algebra(args.input)
    l1, l2 = _lang(langs, args.l1), _lang(langs, args.l2)
    ranks = (args.witness_rank,) if args.witness_rank else tuple(range(1, min(3, cfg.rank_cap) + 1))
    dc = DecisionConfig(cfg.caps, cfg.n_cap, ranks)
    fn = separability_sigma2 if args.logic == "sigma2" else separability_sigma3
    v = fn(l1, l2, dc)
    _emit(cfg, {"verdict": v.as_dict(), "caps": _caps(cfg)}, t0)
    return OK if v.settled else UNSETTLED


def cmd_member(args, cfg, t0):
    m, langs = io.load_algebra(args.input)
    v = membership_bsigma2(_lang(langs, args.lang), DecisionConfig(cfg.caps, cfg.n_cap, (1,)))
    _emit(cfg, {"verdict": v.as_dict(), "caps": _caps(cfg)}, t0)
    return OK if v.settled else UNSETTLED


def _caps(cfg):
    return {"schedule": [list(p) for p in cfg.schedule], "window": cfg.window, "n_cap": cfg.n_cap}


def _chain_body(m, cs):
    return {
        "levels": list(cs.levels),
        "length": cs.length,
        "status": cs.status.as_dict(),
        "history": [list(h) for h in cs.history],
        "tuples": [
            {"elements": [m.plus_id(x) for x in t], "words": list(cs.witnesses[t])} for t in sorted(cs.tuples)
        ],
    }


def cmd_chains(args, cfg, t0):
    m, _ = io.load_algebra(args.input)
    if args.complete:
        m = alphabet_completion(m)
    if args.length < 1:
        raise UsageError("chain length must be >= 1")
    cs = estimate_chains(args.level, args.length, m, cfg.schedule, cfg.window)
    _emit(cfg, {"chains": _chain_body(m, cs)}, t0)
    return OK if cs.status.kind == "stabilized" else UNSETTLED


def cmd_mixed(args, cfg, t0):
    m, _ = io.load_algebra(args.input)
    if args.complete:
        m = alphabet_completion(m)
    cs = estimate_mixed_chains(m, cfg.schedule, cfg.window)
    _emit(cfg, {"chains": _chain_body(m, cs)}, t0)
    return OK if cs.status.kind == "stabilized" else UNSETTLED


def cmd_graph(args, cfg, t0):
    _, langs = io.load_algebra(args.input)
    quo = syntactic_quotient(_lang(langs, args.lang))
    m = alphabet_completion(quo.morphism)
    pairs = estimate_chains(2, 2, m, cfg.schedule, cfg.window)
    g = build_alternation_graph(m, pairs)
    rec = is_recursive(g)
    Path(args.dot).write_text(to_dot(g))
    body = {
        "graph": {
            "nodes": len(g.nodes),
            "labels": ["{" + ",".join(sorted(b)) + "}" for b in g.labels],
            "recursive": rec.recursive,
            "transitivity_violations": len(transitivity_violations(g)),
            "dot": str(args.dot),
        },
        "estimate": pairs.status.as_dict(),
    }
    if rec.recursive:
        body["graph"]["cycle"] = [g.node_label(n) for n in rec.nodes]
    _emit(cfg, body, t0)
    return OK if pairs.status.kind == "stabilized" else UNSETTLED


def cmd_eval(args, cfg, t0):
    m, langs = io.load_algebra(args.input)
    if args.word is not None:
        bad = sorted(set(args.word) - set(m.alphabet))
        if bad:
            raise UsageError(f"unknown letters {bad}")
        body = {"word": args.word, "image": m.plus_id(m.eval_word(args.word))}
    else:
        w = parse_lasso(args.lasso, m.alphabet)
        x = m.eval_lasso(w.prefix, w.loop)
        body = {
            "lasso": str(w),
            "image": m.inf_id(x),
            "accepted_by": sorted(n for n, l in langs.items() if x in l.accept),
        }
    _emit(cfg, body, t0)
    return OK


def cmd_convert(args, cfg, t0):
    aut, name = io.load_automaton(args.buchi)
    m, lang = buchi_to_algebra(aut, name)
    io.save(io.algebra_to_dict(m, {name: lang}), args.out)
    _emit(cfg, {"out": str(args.out), "splus": len(m.algebra.splus), "sinf": len(m.algebra.sinf), "language": name}, t0)
    return OK


def cmd_validate(args, cfg, t0):
    m, langs = io.load_algebra(args.input)
    viol = validate_wilke_algebra(m.algebra)
    _emit(
        cfg,
        {
            "valid": not viol,
            "violations": [{"axiom": v.axiom, "witness": list(map(str, v.witness))} for v in viol],
            "splus": len(m.algebra.splus),
            "sinf": len(m.algebra.sinf),
            "languages": sorted(langs),
        },
        t0,
    )
    return OK if not viol else ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omegasep", description="Decision procedures for quantifier alternation over infinite words.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, caps=True):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--timing", action="store_true", help="append wall-clock time (breaks byte reproducibility)")
        if caps:
            sp.add_argument("--rank-cap", type=int, default=3)
            sp.add_argument("--len-cap", type=int, default=8)
            sp.add_argument("--window", type=int, default=2)

    sp = sub.add_parser("separate", help="Sigma2 / Sigma3 separation")
    sp.add_argument("--logic", choices=("sigma2", "sigma3"), required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--l1", required=True)
    sp.add_argument("--l2", required=True)
    sp.add_argument("--witness-rank", type=int)
    common(sp)

    sp = sub.add_parser("member", help="BSigma2 membership")
    sp.add_argument("--logic", choices=("bsigma2",), required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--lang", required=True)
    sp.add_argument("--n-cap", type=int, default=3)
    common(sp)

    sp = sub.add_parser("chains", help="estimate finite-word chain sets")
    sp.add_argument("--level", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--complete", action="store_true", help="use the alphabet completion")
    common(sp)

    sp = sub.add_parser("mixed-chains", help="estimate mixed Sigma2/Sigma3 chains")
    sp.add_argument("--input", required=True)
    sp.add_argument("--complete", action="store_true")
    common(sp)

    sp = sub.add_parser("graph", help="alternation graph as DOT")
    sp.add_argument("--input", required=True)
    sp.add_argument("--lang", required=True)
    sp.add_argument("--dot", required=True)
    common(sp)

    sp = sub.add_parser("eval", help="evaluate a word or lasso")
    sp.add_argument("--input", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--word")
    g.add_argument("--lasso")
    common(sp, caps=False)

    sp = sub.add_parser("convert", help="Buchi automaton to algebra file")
    sp.add_argument("--buchi", required=True)
    sp.add_argument("--out", required=True)
    common(sp, caps=False)

    sp = sub.add_parser("validate", help="check the Wilke algebra axioms")
    sp.add_argument("--input", required=True)
    common(sp, caps=False)
    return p


COMMANDS = {
    "separate": cmd_separate,
    "member": cmd_member,
    "chains": cmd_chains,
    "mixed-chains": cmd_mixed,
    "graph": cmd_graph,
    "eval": cmd_eval,
    "convert": cmd_convert,
    "validate": cmd_validate,
}


def run(argv=None) -> int:
    t0 = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else ERROR
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg, t0)
    except ValueError as exc:  # StructureError, UsageError, CapError, parse errors
        sys.stderr.write(f"error: {exc}\n")
        return ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
