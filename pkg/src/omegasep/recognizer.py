"""Lasso words, Buchi automata and their conversion to Wilke algebras."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

import networkx as nx

from .algebra import OmegaMorphism, RecognizedLanguage, StructureError, _close


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word prefix . loop . loop . ..."""

    prefix: str
    loop: str

    def __post_init__(self):
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")

    def __str__(self):
        return f"{self.prefix}({self.loop})^w"

    @property
    def content(self) -> frozenset:
        return frozenset(self.loop) | frozenset(self.prefix)

    @property
    def loop_content(self) -> frozenset:
        return frozenset(self.loop)

    def letter(self, n: int) -> str:
        p = len(self.prefix)
        return self.prefix[n] if n < p else self.loop[(n - p) % len(self.loop)]

    def take(self, n: int) -> str:
        return "".join(self.letter(j) for j in range(n))

    def drop(self, n: int) -> "LassoWord":
        p = len(self.prefix)
        if n <= p:
            return LassoWord(self.prefix[n:], self.loop)
        r = (n - p) % len(self.loop)
        return LassoWord("", self.loop[r:] + self.loop[:r])

    def prepend(self, word: str) -> "LassoWord":
        return LassoWord(word + self.prefix, self.loop)

    def normalized(self) -> "LassoWord":
        """Canonical representative: primitive loop, shortest prefix."""
        loop = self.loop
        n = len(loop)
        for d in range(1, n + 1):
            if n % d == 0 and loop[:d] * (n // d) == loop:
                loop = loop[:d]
                break
        prefix = self.prefix
        while prefix and prefix[-1] == loop[-1]:
            prefix = prefix[:-1]
            loop = loop[-1] + loop[:-1]
        return LassoWord(prefix, loop)

    def same_word(self, other: "LassoWord") -> bool:
        return self.normalized() == other.normalized()


_LASSO = re.compile(r"^([^()^]*)\(([^()^]*)\)\^w$")


def parse_lasso(text: str, alphabet: Optional[Iterable[str]] = None) -> LassoWord:
    """Parse ``u(v)^w``."""
    m = _LASSO.match(text.strip())
    if not m:
        raise ValueError(f"malformed lasso {text!r}; expected u(v)^w")
    prefix, loop = m.groups()
    if not loop:
        raise ValueError(f"empty loop in {text!r}")
    if alphabet is not None:
        allowed = set(alphabet)
        bad = sorted(set(prefix + loop) - allowed)
        if bad:
            raise ValueError(f"unknown letters {bad} in {text!r}")
    return LassoWord(prefix, loop)


def eval_word(m: OmegaMorphism, word: str) -> int:
    return m.eval_word(word)


def eval_lasso(m: OmegaMorphism, w: LassoWord) -> int:
    return m.eval_lasso(w.prefix, w.loop)


# -- Buchi automata -------------------------------------------------------------


@dataclass(frozen=True)
class BuchiAutomaton:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: str
    accepting: frozenset
    transitions: frozenset  # of (src, letter, dst)

    def __post_init__(self):
        st = set(self.states)
        if len(st) != len(self.states):
            raise StructureError("duplicate states")
        if not self.alphabet:
            raise StructureError("empty alphabet")
        if self.initial not in st:
            raise StructureError(f"initial state {self.initial!r} is not declared")
        bad = set(self.accepting) - st
        if bad:
            raise StructureError(f"accepting states {sorted(bad)} are not declared")
        for p, a, q in self.transitions:
            if p not in st or q not in st:
                raise StructureError(f"transition ({p},{a},{q}) uses an undeclared state")
            if a not in self.alphabet:
                raise StructureError(f"transition ({p},{a},{q}) uses an undeclared letter")

    def successors(self, p: str, a: str) -> list[str]:
        return sorted(q for (x, b, q) in self.transitions if x == p and b == a)


# Matrix entries: 0 no path, 1 path, 2 path through an accepting state
# (accepting states are counted when entered, i.e. after each letter).


def _compose(M, N):
    n = len(M)
    out = []
    for p in range(n):
        row = []
        for r in range(n):
            best = 0
            for q in range(n):
                a, b = M[p][q], N[q][r]
                if a and b:
                    v = 2 if a == 2 or b == 2 else 1
                    if v > best:
                        best = v
                        if best == 2:
                            break
            row.append(best)
        out.append(tuple(row))
    return tuple(out)


def _mix_vec(M, v):
    n = len(M)
    return tuple(int(any(M[p][q] and v[q] for q in range(n))) for p in range(n))


def _omega_vec(M):
    """Acceptance vector of s^inf for the transition matrix s."""
    n = len(M)
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from((p, q) for p in range(n) for q in range(n) if M[p][q])
    good = set()
    for comp in nx.strongly_connected_components(g):
        if any(M[p][q] == 2 for p in comp for q in comp):
            good |= comp
    ok = set()
    for p in range(n):
        if good & (nx.descendants(g, p) | {p}):
            ok.add(p)
    return tuple(int(p in ok) for p in range(n))


def buchi_to_algebra(aut: BuchiAutomaton, lang_name: str = "L") -> tuple[OmegaMorphism, RecognizedLanguage]:
    """Transition-matrix Wilke algebra of a Buchi automaton."""
    Q = aut.states
    qi = {q: i for i, q in enumerate(Q)}
    n = len(Q)
    A = tuple(sorted(aut.alphabet))
    letters = {}
    for a in A:
        M = [[0] * n for _ in range(n)]
        for p, b, q in aut.transitions:
            if b == a:
                M[qi[p]][qi[q]] = max(M[qi[p]][qi[q]], 2 if q in aut.accepting else 1)
        letters[a] = tuple(tuple(r) for r in M)

    def fmt_m(M):
        return "m" + "".join("".join(map(str, r)) for r in M)

    def fmt_v(v):
        return "v" + "".join(map(str, v))

    alg, plus, inf, limg = _close(A, letters, _compose, _mix_vec, _omega_vec, fmt_m, fmt_v)
    morph = OmegaMorphism(A, alg, limg, name=lang_name)
    init = qi[aut.initial]
    accept = frozenset(j for j, v in enumerate(inf) if v[init])
    return morph, RecognizedLanguage(morph, accept, lang_name)


def lasso_accepted_by_automaton(aut: BuchiAutomaton, w: LassoWord) -> bool:
    """Direct acceptance test on the (state, loop position) graph."""
    current = {aut.initial}
    for c in w.prefix:
        current = {q for p in current for q in aut.successors(p, c)}
    k = len(w.loop)

    def succ(node):
        p, i = node
        return [(q, (i + 1) % k) for q in aut.successors(p, w.loop[i])]

    reach = set()
    queue = deque((p, 0) for p in current)
    reach.update(queue)
    while queue:
        x = queue.popleft()
        for y in succ(x):
            if y not in reach:
                reach.add(y)
                queue.append(y)
    for node in sorted(reach):
        if node[0] not in aut.accepting:
            continue
        # accepting node on a cycle through itself
        seen, queue = set(), deque(succ(node))
        while queue:
            y = queue.popleft()
            if y == node:
                return True
            if y not in seen:
                seen.add(y)
                queue.extend(succ(y))
    return False


# -- Ramsey factorization and the omega image --------------------------------------


@dataclass(frozen=True)
class RamseyFactorization:
    prefix_word: str
    block_word: str
    prefix_image: Optional[int]
    idempotent: int


def ramsey_factorize(m: OmegaMorphism, w: LassoWord) -> RamseyFactorization:
    """Split u(v)^w as u . (v^n)(v^n)... with v^n mapped to an idempotent."""
    sp = m.algebra.splus
    s = m.eval_word(w.loop)
    x, n = s, 1
    while not sp.is_idempotent(x):
        x = sp.mul(x, s)
        n += 1
    pre = m.eval_word(w.prefix) if w.prefix else None
    return RamseyFactorization(w.prefix, w.loop * n, pre, x)


def infinite_image(m: OmegaMorphism) -> frozenset:
    """alpha(A^inf): all s . e^inf with e a reachable idempotent."""
    alg = m.algebra
    out = set()
    for e in m.idempotents:
        out.add(alg.omega[e])
        for s in m.reachable_plus:
            out.add(alg.mixed[s][alg.omega[e]])
    return frozenset(out)
