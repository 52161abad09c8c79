"""Rank-bounded Sigma_i preorders on finite words and the chain sets they induce.

The preorder u <=^k_{Sigma_i} v is decided by the alternating
Ehrenfeucht-Fraisse game: Spoiler owns i blocks, the first played on u, and
may switch sides (at the price of a block) at any time; Duplicator answers
on the other word and must keep labels and order.  Once a pebble is placed
on u = x c y and answered on v = x' c y', the rest of the game splits into
independent games on (x, x') and (y, y').  That decomposition is exact, so
the relation is computed bottom-up over a factor-closed set of words, one
equivalence class at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import OmegaMorphism
from .recognizer import LassoWord


class CapError(ValueError):
    """A query exceeds the configured rank or length caps."""


@dataclass(frozen=True)
class Caps:
    rank: int = 4
    length: int = 10
    window: int = 2
    schedule: tuple[tuple[int, int], ...] = ((1, 4), (2, 6), (3, 8))
    cert_depth: int = 6

    def __post_init__(self):
        if self.rank < 1 or self.length < 1 or self.window < 1 or self.cert_depth < 1:
            raise ValueError("caps must be positive")
        if not self.schedule:
            raise ValueError("schedule must be nonempty")
        for (k0, l0), (k1, l1) in zip(self.schedule, self.schedule[1:]):
            if k1 < k0 or l1 < l0:
                raise ValueError("schedule must be increasing in rank and length")


DEFAULT_CAPS = Caps()


def words_up_to(alphabet: Sequence[str], n: int) -> list[str]:
    """All words of length <= n (the empty word first), length-then-lex."""
    out = [""]
    layer = [""]
    letters = sorted(alphabet)
    for _ in range(n):
        layer = [w + a for w in layer for a in letters]
        out.extend(layer)
    return out


def factors(*words: str) -> list[str]:
    fs = {""}
    for w in words:
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                fs.add(w[i:j])
    return sorted(fs, key=lambda x: (len(x), x))


@dataclass
class Level:
    """Classes of <=^k_{Sigma_i} on a universe of words and the order between them."""

    i: int
    k: int
    cls: dict[str, int]
    leq: np.ndarray  # leq[a, b]: class a <= class b

    @property
    def size(self) -> int:
        return self.leq.shape[0]


class RankedPreorders:
    """Memoized Sigma_i / rank-k preorders on a factor-closed set of words."""

    def __init__(self, words: Iterable[str]):
        ws = sorted(set(words) | {""}, key=lambda x: (len(x), x))
        present = set(ws)
        for w in ws:
            if w and (w[1:] not in present or w[:-1] not in present):
                raise ValueError("word universe must be closed under factors")
        self.words = ws
        self._levels: dict[tuple[int, int], Level] = {}

    def level(self, i: int, k: int) -> Level:
        if i < 1:
            raise ValueError("level must be >= 1")
        key = (i, k)
        if key not in self._levels:
            if k == 0:
                self._levels[key] = Level(i, 0, {w: 0 for w in self.words}, np.ones((1, 1), dtype=bool))
            else:
                # build the prerequisites iteratively to keep recursion shallow
                for kk in range(1, k):
                    self.level(i, kk)
                self._levels[key] = self._build(i, k)
        return self._levels[key]

    def _build(self, i: int, k: int) -> Level:
        prev = self.level(i, k - 1)
        lower = self.level(i - 1, k) if i >= 2 else None
        pc = prev.cls
        triple_ids: dict[tuple[int, str, int], int] = {}
        keys: dict[tuple, int] = {}
        key_sigs: list[tuple[int, ...]] = []
        key_low: list[int] = []
        word_key: dict[str, int] = {}
        for w in self.words:
            sig = set()
            for p, c in enumerate(w):
                t = (pc[w[:p]], c, pc[w[p + 1:]])
                sig.add(triple_ids.setdefault(t, len(triple_ids)))
            low = lower.cls[w] if lower is not None else -1
            kk = (frozenset(sig), low)
            if kk not in keys:
                keys[kk] = len(keys)
                key_sigs.append(tuple(sorted(sig)))
                key_low.append(low)
            word_key[w] = keys[kk]

        T, K = len(triple_ids), len(keys)
        trip = sorted(triple_ids.items(), key=lambda kv: kv[1])
        letters = sorted({t[1] for t, _ in trip})
        lidx = {a: j for j, a in enumerate(letters)}
        tX = np.array([t[0] for t, _ in trip], dtype=np.int64)
        tC = np.array([lidx[t[1]] for t, _ in trip], dtype=np.int64)
        tY = np.array([t[2] for t, _ in trip], dtype=np.int64)
        P = prev.leq
        # dom[t, b]: some split of key b dominates triple t
        dom = np.zeros((T, K), dtype=bool)
        for b, sig in enumerate(key_sigs):
            col = np.zeros(T, dtype=bool)
            for t in sig:
                col |= (tC == tC[t]) & P[tX, tX[t]] & P[tY, tY[t]]
            dom[:, b] = col
        leq = np.empty((K, K), dtype=bool)
        for a, sig in enumerate(key_sigs):
            leq[a] = dom[list(sig)].all(axis=0) if sig else True
        if lower is not None:
            low = np.array(key_low, dtype=np.int64)
            # switching blocks: v <=^k_{Sigma_{i-1}} u
            leq &= lower.leq[np.ix_(low, low)].T
        # merge keys that are equivalent
        eq = leq & leq.T
        rep = np.argmax(eq, axis=1)
        reps = sorted(set(rep.tolist()))
        ridx = {r: j for j, r in enumerate(reps)}
        cls = {w: ridx[int(rep[word_key[w]])] for w in self.words}
        return Level(i, k, cls, leq[np.ix_(reps, reps)])

    def leq(self, i: int, k: int, u: str, v: str) -> bool:
        lv = self.level(i, k)
        return bool(lv.leq[lv.cls[u], lv.cls[v]])


_UNIVERSES: dict[tuple[str, ...], RankedPreorders] = {}
_UNIVERSE_LEN: dict[tuple[str, ...], int] = {}


def preorders_for(alphabet: Sequence[str], length: int) -> RankedPreorders:
    """Shared preorder tables over all words of length <= ``length``."""
    key = tuple(sorted(alphabet))
    if _UNIVERSE_LEN.get(key, -1) < length:
        _UNIVERSES[key] = RankedPreorders(words_up_to(key, length))
        _UNIVERSE_LEN[key] = length
    return _UNIVERSES[key]


def _check_query(i: int, k: int, u: str, v: str, caps: Caps):
    if i not in (1, 2, 3):
        raise CapError(f"level {i} outside 1..3")
    if k < 0 or k > caps.rank:
        raise CapError(f"rank {k} exceeds cap {caps.rank}")
    if not u or not v:
        raise ValueError("words must be nonempty")
    if len(u) > caps.length or len(v) > caps.length:
        raise CapError(f"word length exceeds cap {caps.length}")


@lru_cache(maxsize=200_000)
def _sigma_leq(i: int, k: int, u: str, v: str) -> bool:
    return RankedPreorders(factors(u, v)).leq(i, k, u, v)


def sigma_leq(i: int, k: int, u: str, v: str, caps: Caps = DEFAULT_CAPS) -> bool:
    """u <=^k_{Sigma_i} v on finite words."""
    _check_query(i, k, u, v, caps)
    if k == 0 or u == v:
        return True
    return _sigma_leq(i, k, u, v)


def bsigma_equiv(i: int, k: int, u: str, v: str, caps: Caps = DEFAULT_CAPS) -> bool:
    return sigma_leq(i, k, u, v, caps) and sigma_leq(i, k, v, u, caps)


def pebble_game_leq(i: int, k: int, u: str, v: str) -> bool:
    """Reference solver: plain positional EF game, no decomposition.

    Exponential; intended for cross-checking ``sigma_leq`` on short words.
    """

    def consistent(pu, pv):
        for a in range(len(pu)):
            if u[pu[a]] != v[pv[a]]:
                return False
            for b in range(a):
                if (pu[a] < pu[b]) != (pv[a] < pv[b]) or (pu[a] == pu[b]) != (pv[a] == pv[b]):
                    return False
        return True

    @lru_cache(maxsize=None)
    def win(side, blocks, moves, pu, pv):
        # side 0: Spoiler plays on u
        if moves == 0:
            return True
        src, dst = (u, v) if side == 0 else (v, u)
        for x in range(len(src)):
            ok = False
            for y in range(len(dst)):
                nu, nv = (pu + (x,), pv + (y,)) if side == 0 else (pu + (y,), pv + (x,))
                if consistent(nu, nv) and win(side, blocks, moves - 1, nu, nv):
                    ok = True
                    break
            if not ok:
                return False
        if blocks > 1 and not win(1 - side, blocks - 1, moves, pu, pv):
            return False
        return True

    return win(0, i, k, (), ())


# -- chain sets ----------------------------------------------------------------


@dataclass(frozen=True)
class Status:
    kind: str  # "exact", "stabilized" or "unstable"
    rank: int
    length: int
    first_stable_rank: Optional[int] = None
    window: Optional[int] = None

    def __str__(self):
        if self.kind == "exact":
            return f"exact-at-rank({self.rank}, length-cap {self.length})"
        if self.kind == "stabilized":
            return f"stabilized(k0={self.first_stable_rank}, window={self.window})"
        return f"unstable(rank {self.rank}, length-cap {self.length})"

    @property
    def settled(self) -> bool:
        return self.kind == "stabilized"

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "rank": self.rank, "length_cap": self.length}
        if self.kind == "stabilized":
            d["first_stable_rank"] = self.first_stable_rank
            d["window"] = self.window
        return d


@dataclass
class ChainSet:
    """Tuples of S+ elements realized by <=-chains of words.

    ``levels`` lists the logic level of each consecutive step: (i,)*(n-1) for
    ordinary chains, (2, 3) for mixed chains.
    """

    levels: tuple[int, ...]
    length: int
    tuples: frozenset
    witnesses: dict = field(default_factory=dict)
    status: Status = None
    history: list = field(default_factory=list)

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __iter__(self):
        return iter(sorted(self.tuples))

    def __len__(self):
        return len(self.tuples)

    def closure_violations(self) -> list[tuple]:
        """Monotone reindexings (deletion + duplication at fixed length) missing from the set."""
        n = self.length
        maps = [f for f in product(range(n), repeat=n) if all(f[j] <= f[j + 1] for j in range(n - 1))]
        bad = []
        for t in sorted(self.tuples):
            for f in maps:
                # only level-uniform chains are closed under arbitrary reindexing
                if len(set(self.levels)) > 1:
                    continue
                s = tuple(t[j] for j in f)
                if s not in self.tuples:
                    bad.append((t, s))
        return bad


class _ChainEngine:
    """Joint classes of words for a tuple of levels at one rank and length cap."""

    def __init__(self, m: OmegaMorphism, levels: tuple[int, ...], k: int, length: int):
        self.m = m
        pre = preorders_for(m.alphabet, length)
        self.lvls = sorted(set(levels))
        tables = {i: pre.level(i, k) for i in self.lvls}
        joint: dict[tuple, int] = {}
        self.images: list[dict[int, str]] = []
        self.cls_at: dict[int, list[int]] = {i: [] for i in self.lvls}
        for w in pre.words:
            if not w or len(w) > length:
                continue
            key = tuple(tables[i].cls[w] for i in self.lvls)
            if key not in joint:
                joint[key] = len(joint)
                self.images.append({})
                for i in self.lvls:
                    self.cls_at[i].append(tables[i].cls[w])
            img = self.images[joint[key]]
            s = m.eval_word(w)
            if s not in img:
                img[s] = w  # words arrive shortest-first, then lexicographic
        J = len(joint)
        self.J = J
        self.rel = {}
        for i in self.lvls:
            c = np.array(self.cls_at[i], dtype=np.int64)
            self.rel[i] = tables[i].leq[np.ix_(c, c)]
        nS = len(m.algebra.splus)
        self.has = np.zeros((nS, J), dtype=bool)
        for j, img in enumerate(self.images):
            for s in img:
                self.has[s, j] = True

    def _order(self):
        if not hasattr(self, "_rank"):
            words = sorted({w for img in self.images for w in img.values()}, key=lambda x: (len(x), x))
            pos = {w: r for r, w in enumerate(words)}
            big = len(words) + 1
            rank = np.full(self.has.shape, big, dtype=np.int64)
            for j, img in enumerate(self.images):
                for s, w in img.items():
                    rank[s, j] = pos[w]
            self._rank = rank
        return self._rank

    def witness(self, levels: tuple[int, ...], pattern: Sequence[int]) -> Optional[tuple[str, ...]]:
        """Coordinate-wise least realizing chain (shortest, then lexicographic words)."""
        n = len(pattern)
        back = [None] * n
        back[-1] = self.has[pattern[-1]]
        for m in range(n - 2, -1, -1):
            back[m] = self.has[pattern[m]] & self.rel[levels[m]][:, back[m + 1]].any(axis=1)
        if not back[0].any():
            return None
        rank = self._order()
        out = []
        allowed = back[0]
        for m in range(n):
            cand = np.where(allowed, rank[pattern[m]], np.iinfo(np.int64).max)
            j = int(np.argmin(cand))
            out.append(self.images[j][pattern[m]])
            if m + 1 < n:
                allowed = self.rel[levels[m]][j] & back[m + 1]
        return tuple(out)

    def tuples(self, levels: tuple[int, ...]):
        """All realized tuples with a least witness per tuple."""
        nS = self.has.shape[0]
        fronts = {(s,): self.has[s] for s in range(nS) if self.has[s].any()}
        for i in levels:
            rel = self.rel[i]
            nxt = {}
            for t, front in fronts.items():
                up = rel[front].any(axis=0)
                for s in range(nS):
                    f = up & self.has[s]
                    if f.any():
                        nxt[t + (s,)] = f
            fronts = nxt
        return {t: self.witness(levels, t) for t in sorted(fronts)}

    def has_pattern(self, levels: tuple[int, ...], pattern: Sequence[int]) -> bool:
        front = self.has[pattern[0]].copy()
        for i, s in zip(levels, pattern[1:]):
            if not front.any():
                return False
            front = self.rel[i][front].any(axis=0) & self.has[s]
        return bool(front.any())


@lru_cache(maxsize=256)
def _engine(m: OmegaMorphism, levels: tuple[int, ...], k: int, length: int) -> _ChainEngine:
    return _ChainEngine(m, levels, k, length)


def _chain_tuples(m: OmegaMorphism, levels: tuple[int, ...], k: int, length: int):
    if k == 0:
        # every pair of words is related at rank 0
        return _engine(m, (), 0, length).tuples(()) if not levels else _rank0(m, levels, length)
    return _engine(m, levels, k, length).tuples(levels)


def _rank0(m, levels, length):
    eng = _engine(m, (), 0, length)
    imgs = {}
    for img in eng.images:
        for s, w in img.items():
            if s not in imgs or (len(w), w) < (len(imgs[s]), imgs[s]):
                imgs[s] = w
    out = {}
    for t in product(sorted(imgs), repeat=len(levels) + 1):
        out[t] = tuple(imgs[s] for s in t)
    return out


def chains_at_rank(i: int, n: int, k: int, m: OmegaMorphism, length: int) -> ChainSet:
    """Image tuples of chains w1 <= ... <= wn of words of length <= ``length``."""
    if n < 1:
        raise ValueError("chain length must be >= 1")
    if i not in (1, 2, 3):
        raise CapError(f"level {i} outside 1..3")
    levels = (i,) * (n - 1)
    wit = _chain_tuples(m, levels, k, length)
    return ChainSet(levels, n, frozenset(wit), wit, Status("exact", k, length))


def mixed_chains_at_rank(k: int, m: OmegaMorphism, length: int) -> ChainSet:
    wit = _chain_tuples(m, (2, 3), k, length)
    return ChainSet((2, 3), 3, frozenset(wit), wit, Status("exact", k, length))


def _estimate(compute, schedule, window) -> ChainSet:
    runs = [compute(k, L) for k, L in schedule]
    history = [(k, L, len(cs)) for (k, L), cs in zip(schedule, runs)]
    last = runs[-1]
    j = len(runs) - 1
    while j > 0 and runs[j - 1].tuples == last.tuples:
        j -= 1
    stable_len = len(runs) - j
    k_last, L_last = schedule[-1]
    if stable_len >= window:
        status = Status("stabilized", k_last, L_last, schedule[j][0], window)
    else:
        status = Status("unstable", k_last, L_last)
    if status.kind == "stabilized" and last.closure_violations():
        status = Status("unstable", k_last, L_last)
    last.status = status
    last.history = history
    return last


def estimate_chains(i: int, n: int, m: OmegaMorphism, schedule=None, window: Optional[int] = None) -> ChainSet:
    """Run ``chains_at_rank`` along a (rank, length) schedule and report stabilization."""
    schedule = tuple(schedule or DEFAULT_CAPS.schedule)
    window = window or DEFAULT_CAPS.window
    Caps(schedule=schedule, window=window)  # validates the schedule
    return _estimate(lambda k, L: chains_at_rank(i, n, k, m, L), schedule, window)


def estimate_mixed_chains(m: OmegaMorphism, schedule=None, window: Optional[int] = None) -> ChainSet:
    schedule = tuple(schedule or DEFAULT_CAPS.schedule)
    window = window or DEFAULT_CAPS.window
    Caps(schedule=schedule, window=window)
    return _estimate(lambda k, L: mixed_chains_at_rank(k, m, L), schedule, window)


def pattern_is_chain(m: OmegaMorphism, i: int, pattern: Sequence[int], k: int, length: int) -> bool:
    """Whether the tuple ``pattern`` lies in the rank-k, length-capped chain set."""
    levels = (i,) * (len(pattern) - 1)
    if k == 0:
        reach = set(m.plus_witnesses)
        return all(s in reach for s in pattern)
    return _engine(m, (i,), k, length).has_pattern(levels, pattern)


# -- lasso certificates ------------------------------------------------------------


@dataclass
class Certificate:
    status: str  # "proved" or "unknown"
    derivation: Optional[tuple] = None

    @property
    def proved(self) -> bool:
        return self.status == "proved"


def _content(word) -> frozenset:
    return word.content if isinstance(word, LassoWord) else frozenset(word)


class _Prover:
    def __init__(self, i: int, k: int, caps: Caps):
        self.k = k
        self.caps = caps
        self.ell = 2 ** k
        self.memo: dict = {}

    def fin(self, i, u, v):
        if len(u) > self.caps.length or len(v) > self.caps.length:
            return False
        return sigma_leq(i, self.k, u, v, self.caps)

    def prove(self, i: int, w1: LassoWord, w2: LassoWord, depth: int):
        key = (i, w1.normalized(), w2.normalized(), depth)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None  # cuts cycles
        res = self._prove(i, key[1], key[2], depth)
        self.memo[key] = res
        return res

    def _prove(self, i, w1: LassoWord, w2: LassoWord, depth):
        if w1 == w2:
            return ("refl", str(w1))
        if depth <= 0:
            return None
        ell = self.ell
        if not w1.prefix:
            u = w1.loop
            # u^inf <= u^l v  (content rule at level 2, pumping above)
            if w2.take(ell * len(u)) == u * ell:
                v = w2.drop(ell * len(u))
                sub = self._pump(i, u, v, depth)
                if sub is not None:
                    return sub
            for mlen in range(1, self.caps.length + 1):
                z = w2.take(mlen)
                # u^inf <= z^inf when u <= z
                if not w2.prefix and LassoWord("", z).same_word(w2) and self.fin(i, u, z):
                    return ("comp-inf", u, z, ("fin", i, u, z))
                # u^inf <= u^l v <= z^l v
                if z == u or w2.take(ell * mlen) != z * ell:
                    continue
                if not self.fin(i, u, z):
                    continue
                v = w2.drop(ell * mlen)
                sub = self._pump(i, u, v, depth - 1)
                if sub is not None:
                    mid = LassoWord(u * ell + v.prefix, v.loop)
                    return (
                        "trans",
                        str(mid),
                        sub,
                        ("comp", ("fin", i, u, z), f"x{ell}", ("refl", str(v))),
                    )
        # prefix split: p1 w1' <= p2 w2'
        amax = max(len(w1.prefix) + len(w1.loop), 1)
        bmax = max(len(w2.prefix) + len(w2.loop), 1)
        for a in range(1, min(amax, self.caps.length) + 1):
            p1 = w1.take(a)
            for b in range(1, min(bmax, self.caps.length) + 1):
                p2 = w2.take(b)
                if not self.fin(i, p1, p2):
                    continue
                sub = self.prove(i, w1.drop(a), w2.drop(b), depth - 1)
                if sub is not None:
                    return ("comp", ("fin", i, p1, p2), sub)
        return None

    def _pump(self, i, u, v: LassoWord, depth):
        if i == 2 and frozenset(u) == v.content:
            return ("alph", u, self.ell, str(v))
        if i >= 3:
            sub = self.prove(i - 1, v, LassoWord("", u), depth - 1)
            if sub is not None:
                return ("pump", u, self.ell, str(v), sub)
        return None


def certify_lasso_leq(
    i: int,
    k: int,
    w1: LassoWord,
    w2: LassoWord,
    m: Optional[OmegaMorphism] = None,
    caps: Caps = DEFAULT_CAPS,
) -> Certificate:
    """Try to prove w1 <=^k_{Sigma_i} w2 from the composition and pumping lemmas.

    Sound but incomplete: ``unknown`` says nothing about the inequality.
    ``m`` is accepted for interface symmetry; contents are read off the words.
    """
    if i not in (2, 3):
        raise CapError("lasso certificates are available for levels 2 and 3")
    if k < 0 or k > caps.rank:
        raise CapError(f"rank {k} exceeds cap {caps.rank}")
    if k == 0:
        return Certificate("proved", ("rank0",))
    d = _Prover(i, k, caps).prove(i, w1, w2, caps.cert_depth)
    return Certificate("proved", d) if d is not None else Certificate("unknown")


def derivation_rules(d) -> list[str]:
    """Rule names used in a derivation tree, in preorder."""
    if not isinstance(d, tuple):
        return []
    out = [d[0]] if isinstance(d[0], str) else []
    for x in d[1:]:
        if isinstance(x, tuple):
            out.extend(derivation_rules(x))
    return out
