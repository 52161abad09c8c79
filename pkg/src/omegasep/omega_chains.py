"""Saturation sets over S_inf, the BSigma2 equation and the alternation graph."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Optional

import networkx as nx

from .algebra import OmegaMorphism, UsageError, fmt_letters, idempotent_exponent
from .ef import DEFAULT_CAPS, ChainSet, Status, estimate_chains, pattern_is_chain
from .recognizer import infinite_image

Unit = None  # the adjoined neutral element of S+


def _require_compatible(m: OmegaMorphism):
    if not m.alphabet_compatible:
        raise UsageError("this construction needs an alphabet compatible morphism")


@dataclass
class SaturationSet:
    level: str  # "sigma2" or "sigma3"
    length: int
    tuples: frozenset
    decompositions: dict = field(default_factory=dict)
    inputs_status: list = field(default_factory=list)

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(sorted(self.tuples))

    @property
    def stabilized(self) -> bool:
        return all(s.kind == "stabilized" for s in self.inputs_status)


class _Ops:
    """Shorthands over a morphism's algebra."""

    def __init__(self, m: OmegaMorphism):
        self.m = m
        self.alg = m.algebra
        self.w = idempotent_exponent(m.algebra.splus)

    def pw(self, s):  # s^omega in S+
        return self.alg.splus.power(s, self.w)

    def mul(self, s, t):
        return self.alg.mul(s, t)

    def mix(self, s, x):
        return self.alg.mix(s, x)

    def inf(self, s):
        return self.alg.omega[s]

    def cp(self, s):
        return self.m.content_plus[s]

    def ci(self, x):
        return self.m.content_inf[x]


def _with_units(chains: Iterable, n: int) -> list:
    return [(Unit,) * n] + sorted(chains)


def sat_sigma2_pairs(
    m: OmegaMorphism, pairs_plus: ChainSet, image_inf: Optional[frozenset] = None
) -> SaturationSet:
    """Pairs (r1 s1^inf, r2 s2^w t2) over chain pairs (r1,r2), (s1,s2) and t2 with content(s1) = content(t2)."""
    _require_compatible(m)
    op = _Ops(m)
    image = sorted(image_inf if image_inf is not None else infinite_image(m))
    core: dict[tuple, dict] = {}
    for s1, s2 in sorted(pairs_plus.tuples):
        c = op.cp(s1)
        x1 = op.inf(s1)
        p2 = op.pw(s2)
        for t2 in image:
            if op.ci(t2) != c:
                continue
            key = (x1, op.mix(p2, t2))
            core.setdefault(key, {"s": (s1, s2), "t": (t2,)})
    out: dict[tuple, dict] = {}
    for r1, r2 in _with_units(pairs_plus.tuples, 2):
        for (x1, y2), dec in core.items():
            key = (op.mix(r1, x1), op.mix(r2, y2))
            if key not in out:
                out[key] = {"r": (r1, r2), **dec}
    return SaturationSet("sigma2", 2, frozenset(out), out, [pairs_plus.status])


def sat_sigma2_n(
    m: OmegaMorphism, n: int, chain_supplier: Callable[[int], ChainSet], _memo: Optional[dict] = None
) -> SaturationSet:
    """Length-n omega-chain tuples, built recursively from length-n finite chains."""
    _require_compatible(m)
    if n < 1:
        raise ValueError("n must be >= 1")
    memo = _memo if _memo is not None else {}
    if n in memo:
        return memo[n]
    if n == 1:
        img = infinite_image(m)
        res = SaturationSet("sigma2", 1, frozenset((x,) for x in img), {(x,): {} for x in sorted(img)}, [])
        memo[1] = res
        return res
    op = _Ops(m)
    prev = sat_sigma2_n(m, n - 1, chain_supplier, memo)
    chains = chain_supplier(n)
    by_content: dict[frozenset, list] = {}
    for t in sorted(prev.tuples):
        by_content.setdefault(op.ci(t[0]), []).append(t)
    core: dict[tuple, dict] = {}
    for s in sorted(chains.tuples):
        tails = by_content.get(op.cp(s[0]), ())
        if not tails:
            continue
        head = op.inf(s[0])
        pows = [op.pw(x) for x in s[1:]]
        for t in tails:
            key = (head,) + tuple(op.mix(p, x) for p, x in zip(pows, t))
            core.setdefault(key, {"s": s, "t": t})
    out: dict[tuple, dict] = {}
    for r in _with_units(chains.tuples, n):
        for key, dec in core.items():
            val = tuple(op.mix(a, x) for a, x in zip(r, key))
            if val not in out:
                out[val] = {"r": r, **dec}
    res = SaturationSet("sigma2", n, frozenset(out), out, [chains.status, *prev.inputs_status])
    memo[n] = res
    return res


def sat_sigma3_pairs(m: OmegaMorphism, pairs3_plus: ChainSet, mixed: ChainSet) -> SaturationSet:
    """Pairs (r2 (s2 t2^w)^inf, r3 (s3 t3^w)^w s1 t1^inf) over mixed triples s, t with content(s1) = content(t1)."""
    _require_compatible(m)
    op = _Ops(m)
    triples = sorted(mixed.tuples)
    core: dict[tuple, dict] = {}
    for s1, s2, s3 in triples:
        c = op.cp(s1)
        for t1, t2, t3 in triples:
            if op.cp(t1) != c:
                continue
            first = op.inf(op.mul(s2, op.pw(t2)))
            second = op.mix(op.pw(op.mul(s3, op.pw(t3))), op.mix(s1, op.inf(t1)))
            core.setdefault((first, second), {"s": (s1, s2, s3), "t": (t1, t2, t3)})
    out: dict[tuple, dict] = {}
    for r2, r3 in _with_units(pairs3_plus.tuples, 2):
        for (x, y), dec in core.items():
            key = (op.mix(r2, x), op.mix(r3, y))
            if key not in out:
                out[key] = {"r": (r2, r3), **dec}
    return SaturationSet("sigma3", 2, frozenset(out), out, [pairs3_plus.status, mixed.status])


# -- the BSigma2 equation ----------------------------------------------------------------


@dataclass
class EquationResult:
    holds: bool
    counterexample: Optional[tuple] = None  # (s1, s2, t1, t2)
    checked: int = 0


def check_bsigma2_equation(m: OmegaMorphism, pairs_plus: ChainSet) -> EquationResult:
    """(s2 t2^w)^inf = (s2 t2^w)^w s1 t1^inf for chain pairs (s1,s2), (t1,t2) with content(s1) = content(t1)."""
    _require_compatible(m)
    op = _Ops(m)
    pairs = sorted(pairs_plus.tuples)
    checked = 0
    for s1, s2 in pairs:
        for t1, t2 in pairs:
            if op.cp(s1) != op.cp(t1):
                continue
            checked += 1
            x = op.mul(s2, op.pw(t2))
            if op.inf(x) != op.mix(op.pw(x), op.mix(s1, op.inf(t1))):
                return EquationResult(False, (s1, s2, t1, t2), checked)
    return EquationResult(True, None, checked)


def naive_bsigma2_equation(m: OmegaMorphism, pairs: Iterable[tuple[int, int]]) -> EquationResult:
    """Reference check by brute force over all 4-tuples of S+ elements."""
    sp = m.algebra.splus
    alg = m.algebra
    pair_set = set(pairs)
    checked = 0
    for s1, s2, t1, t2 in product(range(len(sp)), repeat=4):
        if (s1, s2) not in pair_set or (t1, t2) not in pair_set:
            continue
        if m.content_plus[s1] != m.content_plus[t1]:
            continue
        checked += 1
        x = sp.mul(s2, sp.omega_power(t2))
        lhs = alg.omega[x]
        rhs = alg.mixed[sp.omega_power(x)][alg.mixed[s1][alg.omega[t1]]]
        if lhs != rhs:
            return EquationResult(False, (s1, s2, t1, t2), checked)
    return EquationResult(True, None, checked)


# -- alternation graph ------------------------------------------------------------------


@dataclass
class AlternationGraph:
    """Nodes (s+, s_inf) with s+ in S+ or the unit (None); edges labelled by contents.

    ``edges[B][src][t_plus]`` holds the witness ((p1,p2),(q1,q2),q) of an
    edge from ``src`` to every node whose S+ coordinate is ``t_plus``.
    """

    morphism: OmegaMorphism
    plus_nodes: tuple
    inf_nodes: tuple
    edges: dict = field(default_factory=dict)

    @property
    def nodes(self) -> list[tuple]:
        return [(s, x) for s in self.plus_nodes for x in self.inf_nodes]

    @property
    def labels(self) -> list[frozenset]:
        return sorted(self.edges, key=lambda b: (len(b), sorted(b)))

    def has_edge(self, label, src, dst) -> bool:
        return dst[0] in self.edges.get(label, {}).get(src, {})

    def successors(self, label, src) -> list[tuple]:
        return [(t, x) for t in sorted(self.edges.get(label, {}).get(src, {})) for x in self.inf_nodes]

    def to_networkx(self, label) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        for src, targets in self.edges.get(label, {}).items():
            for t in targets:
                for x in self.inf_nodes:
                    g.add_edge(src, (t, x))
        return g

    def node_label(self, node) -> str:
        return f"{self.morphism.plus_id(node[0])}|{self.morphism.inf_id(node[1])}"


def _node_key(node):
    s, x = node
    return (-1 if s is None else s, x)


def build_alternation_graph(m: OmegaMorphism, pairs_plus: ChainSet) -> AlternationGraph:
    _require_compatible(m)
    op = _Ops(m)
    P = m.reachable_plus
    I = m.reachable_inf
    pairs = sorted(pairs_plus.tuples)
    # per label B: (p1 q1^inf, p2 q2^w q) -> first witness
    gadgets: dict[frozenset, dict] = {}
    for (p1, p2), (q1, q2) in product(pairs, repeat=2):
        b = op.cp(p1)
        if op.cp(q1) != b:
            continue
        u = op.mix(p1, op.inf(q1))
        z0 = op.mul(p2, op.pw(q2))
        for q in P:
            if op.cp(q) != b:
                continue
            gadgets.setdefault(b, {}).setdefault((u, op.mul(z0, q)), ((p1, p2), (q1, q2), q))
    g = AlternationGraph(m, (None, *P), I)
    for b, gad in gadgets.items():
        table: dict = {}
        for s in g.plus_nodes:
            for (u, z), wit in gad.items():
                src = (s, op.mix(s, u))
                t = op.alg.mul1(s, z)
                table.setdefault(src, {}).setdefault(t, wit)
        g.edges[b] = table
    return g


@dataclass
class RecursionResult:
    recursive: bool
    label: Optional[frozenset] = None
    nodes: tuple = ()


def is_recursive(g: AlternationGraph) -> RecursionResult:
    """Some single-label cycle passing through two distinct S_inf values."""
    for b in g.labels:
        h = g.to_networkx(b)
        comps = sorted((sorted(c, key=_node_key) for c in nx.strongly_connected_components(h)), key=lambda c: _node_key(c[0]))
        for comp in comps:
            if len(comp) == 1 and not h.has_edge(comp[0], comp[0]):
                continue
            if len({x for _, x in comp}) > 1:
                return RecursionResult(True, b, tuple(comp))
    return RecursionResult(False)


def transitivity_violations(g: AlternationGraph) -> list[tuple]:
    """Triples a -B-> b -B-> c without a -B-> c."""
    bad = []
    for b in g.labels:
        table = g.edges[b]
        for src in sorted(table, key=_node_key):
            for mid_plus in sorted(table[src]):
                for x in g.inf_nodes:
                    mid = (mid_plus, x)
                    for t in table.get(mid, {}):
                        if t not in table[src]:
                            bad.append((b, src, mid, t))
    return bad


def to_dot(g: AlternationGraph, name: str = "alternation") -> str:
    nodes = sorted(g.nodes, key=_node_key)
    ids = {n: f"n{j}" for j, n in enumerate(nodes)}
    lines = [f"digraph {name} {{"]
    for n in nodes:
        lines.append(f'  {ids[n]} [label="{g.node_label(n)}"];')
    for b in g.labels:
        lab = fmt_letters(b)
        for src in sorted(g.edges[b], key=_node_key):
            for dst in g.successors(b, src):
                lines.append(f'  {ids[src]} -> {ids[dst]} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- alternation probes -----------------------------------------------------------------


@dataclass
class ProbeResult:
    target: str  # "finite" or "omega"
    n_cap: int
    pairs: list  # surviving (s, t) pairs, s != t
    depth: int  # largest n reached with surviving pairs
    statuses: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.pairs)


class ChainSupplier:
    """Caches chain estimates of a fixed level for one morphism."""

    def __init__(self, m: OmegaMorphism, level: int = 2, schedule=None, window=None):
        self.m = m
        self.level = level
        self.schedule = tuple(schedule or DEFAULT_CAPS.schedule)
        self.window = window or DEFAULT_CAPS.window
        self._cache: dict[int, ChainSet] = {}

    def __call__(self, n: int) -> ChainSet:
        if n not in self._cache:
            self._cache[n] = estimate_chains(self.level, n, self.m, self.schedule, self.window)
        return self._cache[n]


def probe_alternation(
    m: OmegaMorphism,
    target: str = "finite",
    n_cap: int = 3,
    schedule=None,
    window=None,
    supplier: Optional[ChainSupplier] = None,
) -> ProbeResult:
    """Pairs (s, t), s != t, whose alternation (s,t)^n survives for every n <= n_cap."""
    if n_cap < 1:
        raise ValueError("n_cap must be >= 1")
    schedule = tuple(schedule or DEFAULT_CAPS.schedule)
    window = window or DEFAULT_CAPS.window
    if target == "finite":
        elems = m.reachable_plus
        alive = [(s, t) for s in elems for t in elems if s != t]
        statuses = []
        depth = 0
        k_last, L_last = schedule[-1]
        for n in range(1, n_cap + 1):
            nxt = []
            stable = len(schedule) >= window
            first = 0
            for s, t in alive:
                pat = (s, t) * n
                hist = [pattern_is_chain(m, 2, pat, k, L) for k, L in schedule]
                j = len(hist) - 1
                while j > 0 and hist[j - 1] == hist[-1]:
                    j -= 1
                if len(hist) - j < window:
                    stable = False
                first = max(first, j)
                if hist[-1]:
                    nxt.append((s, t))
            alive = nxt
            if stable:
                statuses.append(Status("stabilized", k_last, L_last, schedule[first][0], window))
            else:
                statuses.append(Status("unstable", k_last, L_last))
            if not alive:
                break
            depth = n
        return ProbeResult("finite", n_cap, alive, depth, statuses)
    if target == "omega":
        _require_compatible(m)
        supplier = supplier or ChainSupplier(m, 2, schedule, window)
        memo: dict = {}
        elems = m.reachable_inf
        alive = [(s, t) for s in elems for t in elems if s != t]
        depth = 0
        sat = None
        for n in range(1, n_cap + 1):
            sat = sat_sigma2_n(m, 2 * n, supplier, memo)
            alive = [(s, t) for s, t in alive if (s, t) * n in sat.tuples]
            if not alive:
                break
            depth = n
        return ProbeResult("omega", n_cap, alive, depth, list(sat.inputs_status) if sat else [])
    raise ValueError(f"unknown probe target {target!r}")
