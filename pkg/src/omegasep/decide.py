"""Decision procedures: Sigma2/Sigma3 separation and BSigma2 membership."""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    OmegaMorphism,
    RecognizedLanguage,
    StructureError,
    alphabet_completion,
    idempotent_exponent,
    pair_product_morphism,
    syntactic_quotient,
)
from .ef import DEFAULT_CAPS, Caps, ChainSet, certify_lasso_leq, estimate_chains, estimate_mixed_chains
from .omega_chains import (
    ChainSupplier,
    build_alternation_graph,
    check_bsigma2_equation,
    is_recursive,
    probe_alternation,
    sat_sigma2_pairs,
    sat_sigma3_pairs,
)
from .recognizer import LassoWord, infinite_image


@dataclass(frozen=True)
class DecisionConfig:
    caps: Caps = DEFAULT_CAPS
    n_cap: int = 3
    witness_ranks: tuple[int, ...] = (1, 2, 3)

    def __post_init__(self):
        if self.n_cap < 1:
            raise ValueError("n_cap must be >= 1")
        for k in self.witness_ranks:
            if not 1 <= k <= self.caps.rank:
                raise ValueError(f"witness rank {k} outside 1..{self.caps.rank}")


@dataclass
class Verdict:
    problem: str
    answer: str
    certificate: dict = field(default_factory=dict)
    confidence: str = "empirical"
    statuses: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)

    @property
    def settled(self) -> bool:
        """Certified, or empirical on stabilized estimates."""
        return self.answer != "inconclusive" and (
            self.confidence == "certified" or all(s.kind == "stabilized" for s in self.statuses)
        )

    def as_dict(self) -> dict:
        return {
            "problem": self.problem,
            "answer": self.answer,
            "confidence": self.confidence,
            "inputs": self.inputs,
            "estimates": [s.as_dict() for s in self.statuses],
            "certificate": self.certificate,
            "diagnostics": self.diagnostics,
        }


def common_morphism(l1: RecognizedLanguage, l2: RecognizedLanguage):
    """Alphabet compatible morphism recognizing both languages, plus their transports."""
    m1, m2 = l1.morphism, l2.morphism
    if sorted(m1.alphabet) != sorted(m2.alphabet):
        raise StructureError("languages are over different alphabets")
    base = m1 if m1 is m2 else pair_product_morphism(m1, m2)
    m = alphabet_completion(base)
    return m, l1.transport(m), l2.transport(m)


# -- witnesses ---------------------------------------------------------------------


def _preimage(chains: ChainSet, pair, coord: int) -> str:
    if pair[coord] is None:
        return ""
    wit = chains.witnesses.get(tuple(pair))
    if wit is None:
        raise StructureError(f"no realizing words stored for chain {pair}")
    return wit[coord]


@dataclass
class WitnessPair:
    w1: LassoWord
    w2: LassoWord
    rank: int
    certificate: object

    @property
    def proved(self) -> bool:
        return self.certificate.proved


def make_sigma2_witnesses(
    m: OmegaMorphism, decomposition: dict, chains: ChainSet, k: int, caps: Caps = DEFAULT_CAPS
) -> WitnessPair:
    """w1 = x1 (y1)^inf and w2 = x2 (y2)^(2^k w) v for a saturation decomposition."""
    r, s, (t2,) = decomposition["r"], decomposition["s"], decomposition["t"]
    x1, x2 = _preimage(chains, r, 0), _preimage(chains, r, 1)
    y1, y2 = _preimage(chains, s, 0), _preimage(chains, s, 1)
    if t2 not in m.inf_witnesses:
        raise StructureError(f"no lasso preimage for {m.inf_id(t2)}")
    vp, vl = m.inf_witnesses[t2]
    e = 2**k * idempotent_exponent(m.algebra.splus)
    w1 = LassoWord(x1, y1)
    w2 = LassoWord(x2 + y2 * e + vp, vl)
    return WitnessPair(w1, w2, k, certify_lasso_leq(2, k, w1, w2, m, caps))


def make_sigma3_witnesses(
    m: OmegaMorphism, decomposition: dict, pairs3: ChainSet, mixed: ChainSet, k: int, caps: Caps = DEFAULT_CAPS
) -> WitnessPair:
    """w2 = x2 (y2 z2^(2^k w))^inf and w3 = x3 (y3 z3^(2^k w))^(2^k w) y1 z1^inf."""
    r, s, t = decomposition["r"], decomposition["s"], decomposition["t"]
    x2, x3 = _preimage(pairs3, r, 0), _preimage(pairs3, r, 1)
    ys = mixed.witnesses[tuple(s)]
    zs = mixed.witnesses[tuple(t)]
    e = 2**k * idempotent_exponent(m.algebra.splus)
    loop2 = ys[1] + zs[1] * e
    block3 = ys[2] + zs[2] * e
    w2 = LassoWord(x2, loop2)
    w3 = LassoWord(x3 + block3 * e + ys[0], zs[0])
    return WitnessPair(w2, w3, k, certify_lasso_leq(3, k, w2, w3, m, caps))


def _ids(m: OmegaMorphism, tup, inf=False):
    return [m.inf_id(x) if inf else m.plus_id(x) for x in tup]


# -- separation -------------------------------------------------------------------------


def _separation(problem, l1, l2, config, build):
    m, t1, t2 = common_morphism(l1, l2)
    sat, witness, statuses = build(m)
    hits = sorted(p for p in sat.tuples if p[0] in t1.accept and p[1] in t2.accept)
    inputs = {"l1": l1.name, "l2": l2.name, "algebra_size": [len(m.algebra.splus), len(m.algebra.sinf)]}
    stable = all(s.kind == "stabilized" for s in statuses)
    if not hits:
        return Verdict(
            problem,
            "separable",
            {"note": "no obstruction found at caps", "saturation_size": len(sat)},
            "certified" if stable else "empirical",
            statuses,
            inputs=inputs,
        )
    pair = hits[0]
    dec = sat.decompositions[pair]
    wits = [witness(m, dec, k) for k in config.witness_ranks]
    cert = {
        "pair": _ids(m, pair, inf=True),
        "decomposition": {key: _ids(m, val, inf=(key == "t" and problem == "sigma2-separation")) for key, val in dec.items()},
        "witnesses": [
            {"rank": w.rank, "w1": str(w.w1), "w2": str(w.w2), "status": w.certificate.status}
            for w in wits
        ],
    }
    proved = all(w.proved for w in wits)
    return Verdict(
        problem,
        "not-separable",
        cert,
        "certified" if stable and proved else "empirical",
        statuses,
        inputs=inputs,
    )


def separability_sigma2(
    l1: RecognizedLanguage, l2: RecognizedLanguage, config: DecisionConfig = DecisionConfig()
) -> Verdict:
    """Whether some Sigma2-definable language contains l1 and misses l2."""
    caps = config.caps
    holder = {}

    def build(m):
        chains = estimate_chains(2, 2, m, caps.schedule, caps.window)
        holder["chains"] = chains
        sat = sat_sigma2_pairs(m, chains, infinite_image(m))
        return sat, lambda mm, dec, k: make_sigma2_witnesses(mm, dec, chains, k, caps), [chains.status]

    return _separation("sigma2-separation", l1, l2, config, build)


def separability_sigma3(
    l1: RecognizedLanguage, l2: RecognizedLanguage, config: DecisionConfig = DecisionConfig()
) -> Verdict:
    caps = config.caps

    def build(m):
        pairs3 = estimate_chains(3, 2, m, caps.schedule, caps.window)
        mixed = estimate_mixed_chains(m, caps.schedule, caps.window)
        sat = sat_sigma3_pairs(m, pairs3, mixed)
        return (
            sat,
            lambda mm, dec, k: make_sigma3_witnesses(mm, dec, pairs3, mixed, k, caps),
            [pairs3.status, mixed.status],
        )

    return _separation("sigma3-separation", l1, l2, config, build)


# -- membership ------------------------------------------------------------------------------


def membership_bsigma2(lang: RecognizedLanguage, config: DecisionConfig = DecisionConfig()) -> Verdict:
    """BSigma2 membership via bounded alternation of alpha_+ and the omega equation."""
    caps = config.caps
    quo = syntactic_quotient(lang)
    m = alphabet_completion(quo.morphism)
    pairs = estimate_chains(2, 2, m, caps.schedule, caps.window)
    eq = check_bsigma2_equation(m, pairs)
    probe = probe_alternation(m, "finite", config.n_cap, caps.schedule, caps.window)
    statuses = [pairs.status, *probe.statuses]

    cert = {
        "equation": {"holds": eq.holds, "checked": eq.checked},
        "finite_probe": {
            "n_cap": probe.n_cap,
            "depth": probe.depth,
            "pairs": [_ids(m, p) for p in probe.pairs],
        },
    }
    if eq.counterexample is not None:
        cert["equation"]["counterexample"] = dict(zip(("s1", "s2", "t1", "t2"), _ids(m, eq.counterexample)))

    member = eq.holds and not probe.found
    # graph diagnostics: equation => not recursive; bounded + not recursive => no omega alternation
    g = build_alternation_graph(m, pairs)
    rec = is_recursive(g)
    diag = {"recursive": rec.recursive}
    if rec.recursive:
        diag["cycle"] = {"label": sorted(rec.label), "nodes": [g.node_label(n) for n in rec.nodes]}
    consistent = True
    if eq.holds and rec.recursive:
        consistent = False
        diag["violation"] = "equation holds but the graph is recursive"
    if not probe.found and not rec.recursive:
        oprobe = probe_alternation(m, "omega", config.n_cap, caps.schedule, caps.window, ChainSupplier(m, 2, caps.schedule, caps.window))
        diag["omega_probe"] = {"depth": oprobe.depth, "pairs": [_ids(m, p, inf=True) for p in oprobe.pairs]}
        if oprobe.found:
            consistent = False
            diag["violation"] = "bounded finite alternation and non-recursive graph, yet omega alternation found"
    diag["consistent"] = consistent

    stable = all(s.kind == "stabilized" for s in statuses)
    confidence = "certified" if stable and consistent else "empirical"
    return Verdict(
        "bsigma2-membership",
        "member" if member else "non-member",
        cert,
        confidence,
        statuses,
        diag,
        {"lang": lang.name, "algebra_size": [len(m.algebra.splus), len(m.algebra.sinf)]},
    )
