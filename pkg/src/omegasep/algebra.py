"""Finite semigroups, Wilke algebras and morphisms from (A+, A^inf).

Elements are addressed by dense integer indices; the string ids are kept
only for display and file round-trips.  Every construction that generates
new elements walks its worklist in first-seen order, so ids are stable
from run to run.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence


class StructureError(ValueError):
    """Malformed tables: missing entries, unknown ids, bad alphabet."""


class UsageError(ValueError):
    pass


def fmt_letters(letters: Iterable[str]) -> str:
    return "{" + ",".join(sorted(letters)) + "}"


@dataclass(frozen=True)
class FiniteSemigroup:
    elements: tuple[str, ...]
    mult: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise StructureError("duplicate semigroup element ids")
        if len(self.mult) != n or any(len(row) != n for row in self.mult):
            raise StructureError("multiplication table is not total")
        for row in self.mult:
            for x in row:
                if not 0 <= x < n:
                    raise StructureError(f"product index {x} out of range")

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def mul(self, s: int, t: int) -> int:
        return self.mult[s][t]

    def power(self, s: int, n: int) -> int:
        if n < 1:
            raise ValueError("power must be >= 1")
        r = s
        for _ in range(n - 1):
            r = self.mult[r][s]
        return r

    def is_idempotent(self, s: int) -> bool:
        return self.mult[s][s] == s

    def index_and_period(self, s: int) -> tuple[int, int]:
        """Smallest i, p with s^(i+p) = s^i."""
        seen = {}
        x, n = s, 1
        while x not in seen:
            seen[x] = n
            x = self.mult[x][s]
            n += 1
        return seen[x], n - seen[x]

    def omega_power(self, s: int) -> int:
        """The unique idempotent power of s."""
        x = s
        while self.mult[x][x] != x:
            x = self.mult[x][s]
        return x

    def associativity_violations(self) -> list[tuple[int, int, int]]:
        m = self.mult
        n = len(self)
        return [
            (a, b, c)
            for a in range(n)
            for b in range(n)
            for c in range(n)
            if m[m[a][b]][c] != m[a][m[b][c]]
        ]


def idempotent_exponent(sg: FiniteSemigroup) -> int:
    """Least n >= 1 such that s^n is idempotent for every s."""
    # s^n is idempotent iff n >= index(s) and period(s) divides n
    from math import lcm

    bound, period = 1, 1
    for s in range(len(sg)):
        i, p = sg.index_and_period(s)
        bound = max(bound, i)
        period = lcm(period, p)
    n = period
    while n < bound:
        n += period
    return n


@dataclass(frozen=True)
class WilkeAlgebra:
    splus: FiniteSemigroup
    sinf: tuple[str, ...]
    mixed: tuple[tuple[int, ...], ...]
    omega: tuple[int, ...]

    def __post_init__(self):
        n, m = len(self.splus), len(self.sinf)
        if len(set(self.sinf)) != m:
            raise StructureError("duplicate S_inf ids")
        if len(self.mixed) != n or any(len(row) != m for row in self.mixed):
            raise StructureError("mixed product table is not total")
        if len(self.omega) != n:
            raise StructureError("omega-power map is not total")
        for row in self.mixed:
            for x in row:
                if not 0 <= x < m:
                    raise StructureError(f"mixed product index {x} out of range")
        for x in self.omega:
            if not 0 <= x < m:
                raise StructureError(f"omega-power index {x} out of range")

    @classmethod
    def from_tables(
        cls,
        splus: Sequence[str],
        sinf: Sequence[str],
        mult: dict[tuple[str, str], str],
        mixed: dict[tuple[str, str], str],
        omega: dict[str, str],
    ) -> "WilkeAlgebra":
        pi = {e: i for i, e in enumerate(splus)}
        ii = {e: i for i, e in enumerate(sinf)}
        if not splus:
            raise StructureError("S+ must be nonempty")

        def look(table, key, target, what):
            if key not in table:
                raise StructureError(f"missing {what} entry for {','.join(key) if isinstance(key, tuple) else key}")
            val = table[key]
            if val not in target:
                raise StructureError(f"{what} entry {key} refers to unknown id {val!r}")
            return target[val]

        for table, what, (left, right) in (
            (mult, "mult", (pi, pi)),
            (mixed, "mixed", (pi, ii)),
        ):
            for a, b in table:
                if a not in left or b not in right:
                    raise StructureError(f"{what} key ({a},{b}) uses an unknown id")
        for a in omega:
            if a not in pi:
                raise StructureError(f"omega key {a!r} is not an S+ id")

        mt = tuple(tuple(look(mult, (a, b), pi, "mult") for b in splus) for a in splus)
        xt = tuple(tuple(look(mixed, (a, w), ii, "mixed") for w in sinf) for a in splus)
        ot = tuple(look(omega, a, ii, "omega") for a in splus)
        return cls(FiniteSemigroup(tuple(splus), mt), tuple(sinf), xt, ot)

    @cached_property
    def inf_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.sinf)}

    def mul(self, s: int, t: int) -> int:
        return self.splus.mult[s][t]

    def mix(self, s: Optional[int], w: int) -> int:
        """Mixed product; ``None`` stands for the adjoined unit."""
        return w if s is None else self.mixed[s][w]

    def inf(self, s: int) -> int:
        return self.omega[s]

    def mul1(self, s: Optional[int], t: Optional[int]) -> Optional[int]:
        """Product in S+ with an adjoined unit ``None``."""
        if s is None:
            return t
        if t is None:
            return s
        return self.splus.mult[s][t]

    def idem(self, s: int) -> int:
        return self.splus.omega_power(s)


@dataclass
class Violation:
    axiom: str
    witness: tuple

    def __str__(self):
        return f"{self.axiom}: {self.witness}"


def validate_wilke_algebra(alg: WilkeAlgebra) -> list[Violation]:
    """Exhaustively check the semigroup and Wilke axioms.

    Structural problems cannot reach this point: the dataclass constructors
    raise ``StructureError`` instead.
    """
    sp = alg.splus
    P, I = sp.elements, alg.sinf
    out = [Violation("associativity", (P[a], P[b], P[c])) for a, b, c in sp.associativity_violations()]
    n, m = len(sp), len(I)
    for s in range(n):
        for t in range(n):
            st = sp.mult[s][t]
            for w in range(m):
                if alg.mixed[st][w] != alg.mixed[s][alg.mixed[t][w]]:
                    out.append(Violation("mixed associativity", (P[s], P[t], I[w])))
    for s in range(n):
        if alg.omega[s] != alg.mixed[s][alg.omega[s]]:
            out.append(Violation("omega-power absorption", (P[s],)))
    for s in range(n):
        i, p = sp.index_and_period(s)
        x = s
        for k in range(1, i + p + 1):
            if alg.omega[x] != alg.omega[s]:
                out.append(Violation("power coherence", (P[s], k)))
                break
            x = sp.mult[x][s]
    for s in range(n):
        for t in range(n):
            if alg.mixed[s][alg.omega[sp.mult[t][s]]] != alg.omega[sp.mult[s][t]]:
                out.append(Violation("rotation", (P[s], P[t])))
    return out


@dataclass(frozen=True, eq=False)
class OmegaMorphism:
    """A morphism (A+, A^inf) -> (S+, S_inf) given by its letter images.

    ``content_plus``/``content_inf`` hold a letter set per element when the
    morphism is alphabet compatible (empty set for unreachable elements).
    """

    alphabet: tuple[str, ...]
    algebra: WilkeAlgebra
    letter_image: dict[str, int]
    content_plus: Optional[tuple[frozenset, ...]] = None
    content_inf: Optional[tuple[frozenset, ...]] = None
    alphabet_compatible: bool = False
    name: str = ""

    def __post_init__(self):
        if not self.alphabet:
            raise StructureError("empty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise StructureError("duplicate letters in alphabet")
        for a in self.alphabet:
            if a not in self.letter_image:
                raise StructureError(f"letter {a!r} has no image")
            if not 0 <= self.letter_image[a] < len(self.algebra.splus):
                raise StructureError(f"image of {a!r} out of range")
        extra = set(self.letter_image) - set(self.alphabet)
        if extra:
            raise StructureError(f"images given for letters outside the alphabet: {sorted(extra)}")
        if self.alphabet_compatible and (self.content_plus is None or self.content_inf is None):
            raise StructureError("alphabet compatible morphism needs a content map")

    # -- evaluation ---------------------------------------------------------

    def eval_word(self, word: Sequence[str]) -> int:
        if not word:
            raise ValueError("cannot evaluate the empty word in S+")
        mult = self.algebra.splus.mult
        try:
            x = self.letter_image[word[0]]
            for c in word[1:]:
                x = mult[x][self.letter_image[c]]
        except KeyError as exc:
            raise ValueError(f"letter {exc.args[0]!r} not in alphabet") from None
        return x

    def eval_lasso(self, prefix: Sequence[str], loop: Sequence[str]) -> int:
        if not loop:
            raise ValueError("lasso loop must be nonempty")
        w = self.algebra.omega[self.eval_word(loop)]
        if prefix:
            w = self.algebra.mixed[self.eval_word(prefix)][w]
        return w

    # -- reachability -------------------------------------------------------

    @cached_property
    def plus_witnesses(self) -> dict[int, str]:
        """Shortest (then lexicographically least) preimage of each reachable S+ element."""
        mult = self.algebra.splus.mult
        found: dict[int, str] = {}
        queue = deque()
        for a in sorted(self.alphabet):
            s = self.letter_image[a]
            if s not in found:
                found[s] = a
                queue.append(s)
        while queue:
            s = queue.popleft()
            for a in sorted(self.alphabet):
                t = mult[s][self.letter_image[a]]
                if t not in found:
                    found[t] = found[s] + a
                    queue.append(t)
        return found

    @cached_property
    def reachable_plus(self) -> tuple[int, ...]:
        return tuple(sorted(self.plus_witnesses))

    @cached_property
    def inf_witnesses(self) -> dict[int, tuple[str, str]]:
        """A short lasso (prefix, loop) for each element of alpha(A^inf)."""
        alg = self.algebra
        wit = self.plus_witnesses
        best: dict[int, tuple[str, str]] = {}

        def key(pl):
            return (len(pl[0]) + len(pl[1]), len(pl[0]), pl[0], pl[1])

        for t in self.reachable_plus:
            cands = [("", wit[t])] + [(wit[s], wit[t]) for s in self.reachable_plus]
            for pre, loop in cands:
                w = alg.omega[t] if not pre else alg.mixed[self.eval_word(pre)][alg.omega[t]]
                if w not in best or key((pre, loop)) < key(best[w]):
                    best[w] = (pre, loop)
        return best

    @cached_property
    def reachable_inf(self) -> tuple[int, ...]:
        return tuple(sorted(self.inf_witnesses))

    @cached_property
    def idempotents(self) -> tuple[int, ...]:
        sp = self.algebra.splus
        return tuple(s for s in self.reachable_plus if sp.is_idempotent(s))

    # -- content ------------------------------------------------------------

    def content(self, e: int, inf: bool = False) -> frozenset:
        if not self.alphabet_compatible:
            raise UsageError("content is only defined for alphabet compatible morphisms")
        return (self.content_inf if inf else self.content_plus)[e]

    def plus_id(self, s: Optional[int]) -> str:
        return "1" if s is None else self.algebra.splus.elements[s]

    def inf_id(self, w: int) -> str:
        return self.algebra.sinf[w]


def content_of(m: OmegaMorphism, element: str) -> frozenset:
    """Letter set of an element, looked up by id in S+ first, then S_inf."""
    if not m.alphabet_compatible:
        raise UsageError("content_of needs an alphabet compatible morphism")
    alg = m.algebra
    if element in alg.splus.index:
        return m.content_plus[alg.splus.index[element]]
    if element in alg.inf_index:
        return m.content_inf[alg.inf_index[element]]
    raise UsageError(f"unknown element {element!r}")


@dataclass(frozen=True)
class RecognizedLanguage:
    morphism: OmegaMorphism
    accept: frozenset  # indices into S_inf
    name: str = ""

    def __post_init__(self):
        m = len(self.morphism.algebra.sinf)
        for w in self.accept:
            if not 0 <= w < m:
                raise StructureError(f"accept index {w} out of range")

    @classmethod
    def by_ids(cls, morphism: OmegaMorphism, ids: Iterable[str], name: str = "") -> "RecognizedLanguage":
        idx = morphism.algebra.inf_index
        bad = [x for x in ids if x not in idx]
        if bad:
            raise StructureError(f"accept set refers to unknown ids {bad}")
        return cls(morphism, frozenset(idx[x] for x in ids), name)

    def accepts_lasso(self, prefix: str, loop: str) -> bool:
        return self.morphism.eval_lasso(prefix, loop) in self.accept

    def complement(self, name: Optional[str] = None) -> "RecognizedLanguage":
        rest = frozenset(range(len(self.morphism.algebra.sinf))) - self.accept
        return RecognizedLanguage(self.morphism, rest, name if name is not None else f"co{self.name}")

    def transport(self, target: OmegaMorphism) -> "RecognizedLanguage":
        """The same language over a morphism that refines ours.

        Each reachable element of ``target`` is classified through one of its
        lasso preimages; this is sound whenever ``target`` factors through
        ``self.morphism`` (pairings, completions).
        """
        acc = frozenset(
            w
            for w, (pre, loop) in target.inf_witnesses.items()
            if self.morphism.eval_lasso(pre, loop) in self.accept
        )
        return RecognizedLanguage(target, acc, self.name)


# -- generate-and-close constructions ------------------------------------------


def _close(alphabet, letter_vals, mul, mix, omg, fmt_plus, fmt_inf):
    """Generate the subalgebra spanned by ``letter_vals`` over abstract operations.

    Values are hashable; ``fmt_*`` turn them into ids.  Returns tables ready
    for ``WilkeAlgebra`` plus the value lists in index order.
    """
    plus: list = []
    pidx: dict = {}

    def add_plus(v):
        if v not in pidx:
            pidx[v] = len(plus)
            plus.append(v)

    for a in alphabet:
        add_plus(letter_vals[a])
    i = 0
    while i < len(plus):
        s = plus[i]
        for a in alphabet:
            add_plus(mul(s, letter_vals[a]))
        i += 1
    # the closure under right multiplication by letters is the whole subsemigroup
    inf: list = []
    iidx: dict = {}

    def add_inf(v):
        if v not in iidx:
            iidx[v] = len(inf)
            inf.append(v)

    for s in plus:
        add_inf(omg(s))
    j = 0
    while j < len(inf):
        w = inf[j]
        for s in plus:
            add_inf(mix(s, w))
        j += 1
    mt = tuple(tuple(pidx[mul(s, t)] for t in plus) for s in plus)
    xt = tuple(tuple(iidx[mix(s, w)] for w in inf) for s in plus)
    ot = tuple(iidx[omg(s)] for s in plus)
    alg = WilkeAlgebra(
        FiniteSemigroup(tuple(fmt_plus(v) for v in plus), mt),
        tuple(fmt_inf(v) for v in inf),
        xt,
        ot,
    )
    return alg, plus, inf, {a: pidx[letter_vals[a]] for a in alphabet}


def pair_product_morphism(m0: OmegaMorphism, m1: OmegaMorphism) -> OmegaMorphism:
    """Reachable part of the componentwise product of two morphisms."""
    if tuple(sorted(m0.alphabet)) != tuple(sorted(m1.alphabet)):
        raise StructureError("pairing needs morphisms over the same alphabet")
    A = tuple(sorted(m0.alphabet))
    a0, a1 = m0.algebra, m1.algebra
    alg, plus, inf, letters = _close(
        A,
        {a: (m0.letter_image[a], m1.letter_image[a]) for a in A},
        lambda s, t: (a0.mul(s[0], t[0]), a1.mul(s[1], t[1])),
        lambda s, w: (a0.mixed[s[0]][w[0]], a1.mixed[s[1]][w[1]]),
        lambda s: (a0.omega[s[0]], a1.omega[s[1]]),
        lambda v: f"({a0.splus.elements[v[0]]},{a1.splus.elements[v[1]]})",
        lambda v: f"({a0.sinf[v[0]]},{a1.sinf[v[1]]})",
    )
    return OmegaMorphism(A, alg, letters, name=f"{m0.name}*{m1.name}")


def _completion_tables(m: OmegaMorphism):
    A = tuple(sorted(m.alphabet))
    alg = m.algebra
    return _close(
        A,
        {a: (m.letter_image[a], frozenset(a)) for a in A},
        lambda s, t: (alg.mul(s[0], t[0]), s[1] | t[1]),
        lambda s, w: (alg.mixed[s[0]][w[0]], s[1] | w[1]),
        lambda s: (alg.omega[s[0]], s[1]),
        lambda v: f"({alg.splus.elements[v[0]]},{fmt_letters(v[1])})",
        lambda v: f"({alg.sinf[v[0]]},{fmt_letters(v[1])})",
    )


def alphabet_completion(m: OmegaMorphism) -> OmegaMorphism:
    """Alphabet compatible morphism recognizing everything ``m`` recognizes.

    If ``m`` is already compatible it is returned unchanged; if it is
    compatible but lacks a content map, the map is attached to a copy.
    """
    if m.alphabet_compatible:
        return m
    alg, plus, inf, letters = _completion_tables(m)
    seen_p: dict[int, set] = {}
    seen_i: dict[int, set] = {}
    for s, c in plus:
        seen_p.setdefault(s, set()).add(c)
    for w, c in inf:
        seen_i.setdefault(w, set()).add(c)
    if all(len(v) == 1 for v in seen_p.values()) and all(len(v) == 1 for v in seen_i.values()):
        cp = tuple(frozenset(next(iter(seen_p[s]))) if s in seen_p else frozenset() for s in range(len(m.algebra.splus)))
        ci = tuple(frozenset(next(iter(seen_i[w]))) if w in seen_i else frozenset() for w in range(len(m.algebra.sinf)))
        return replace(m, content_plus=cp, content_inf=ci, alphabet_compatible=True)
    return OmegaMorphism(
        tuple(sorted(m.alphabet)),
        alg,
        letters,
        content_plus=tuple(v[1] for v in plus),
        content_inf=tuple(v[1] for v in inf),
        alphabet_compatible=True,
        name=f"{m.name}+content" if m.name else "completion",
    )


def with_content(m: OmegaMorphism, content: dict[str, Iterable[str]]) -> OmegaMorphism:
    """Attach a declared content map, checking it against the real contents."""
    completed = _completion_tables(m)
    plus, inf = completed[1], completed[2]
    alg = m.algebra
    lookup = {}
    for e, letters in content.items():
        lookup[e] = frozenset(letters)
    cp, ci = [], []
    for s, e in enumerate(alg.splus.elements):
        cp.append(lookup.get(e, frozenset()))
    for w, e in enumerate(alg.sinf):
        ci.append(lookup.get(e, frozenset()))
    for s, c in plus:
        if cp[s] != c:
            raise StructureError(f"declared content of {alg.splus.elements[s]} does not match its preimages")
    for w, c in inf:
        if ci[w] != c:
            raise StructureError(f"declared content of {alg.sinf[w]} does not match its preimages")
    return replace(m, content_plus=tuple(cp), content_inf=tuple(ci), alphabet_compatible=True)


# -- syntactic quotient ------------------------------------------------------------


def restrict_to_reachable(m: OmegaMorphism) -> OmegaMorphism:
    alg = m.algebra
    P, I = m.reachable_plus, m.reachable_inf
    if len(P) == len(alg.splus) and len(I) == len(alg.sinf):
        return m
    pmap = {s: i for i, s in enumerate(P)}
    imap = {w: i for i, w in enumerate(I)}
    new = WilkeAlgebra(
        FiniteSemigroup(
            tuple(alg.splus.elements[s] for s in P),
            tuple(tuple(pmap[alg.mul(s, t)] for t in P) for s in P),
        ),
        tuple(alg.sinf[w] for w in I),
        tuple(tuple(imap[alg.mixed[s][w]] for w in I) for s in P),
        tuple(imap[alg.omega[s]] for s in P),
    )
    cp = tuple(m.content_plus[s] for s in P) if m.content_plus else None
    ci = tuple(m.content_inf[w] for w in I) if m.content_inf else None
    return OmegaMorphism(
        m.alphabet,
        new,
        {a: pmap[s] for a, s in m.letter_image.items()},
        cp,
        ci,
        m.alphabet_compatible,
        m.name,
    )


@dataclass
class Quotient:
    morphism: OmegaMorphism
    language: RecognizedLanguage
    plus_class: dict[int, int] = field(default_factory=dict)
    inf_class: dict[int, int] = field(default_factory=dict)


def syntactic_quotient(lang: RecognizedLanguage) -> Quotient:
    """Quotient of the reachable part of ``lang``'s morphism by the context congruence."""
    src = lang.morphism
    violations = validate_wilke_algebra(src.algebra)
    if violations:
        raise StructureError(f"invalid algebra: {violations[0]}")
    alg = src.algebra
    P, I = src.reachable_plus, src.reachable_inf
    F = lang.accept
    units = [None, *P]

    inf_sig = {w: tuple(alg.mix(x, w) in F for x in units) for w in I}
    plus_sig = {}
    for s in P:
        bits = []
        for x in units:
            for y in units:
                sy = alg.mul1(s, y)
                xsy = alg.mul1(x, sy)
                bits.extend(alg.mixed[xsy][w] in F for w in I)
                bits.append(alg.mix(x, alg.omega[sy]) in F)
        plus_sig[s] = tuple(bits)

    def classes(items, sig):
        rep: dict = {}
        cls = {}
        for e in items:
            cls[e] = rep.setdefault(sig[e], len(rep))
        return cls, len(rep)

    pc, np_ = classes(P, plus_sig)
    ic, ni = classes(I, inf_sig)
    prep = [None] * np_
    irep = [None] * ni
    for s in P:
        if prep[pc[s]] is None:
            prep[pc[s]] = s
    for w in I:
        if irep[ic[w]] is None:
            irep[ic[w]] = w
    new = WilkeAlgebra(
        FiniteSemigroup(
            tuple(alg.splus.elements[s] for s in prep),
            tuple(tuple(pc[alg.mul(s, t)] for t in prep) for s in prep),
        ),
        tuple(alg.sinf[w] for w in irep),
        tuple(tuple(ic[alg.mixed[s][w]] for w in irep) for s in prep),
        tuple(ic[alg.omega[s]] for s in prep),
    )
    morph = OmegaMorphism(
        tuple(sorted(src.alphabet)),
        new,
        {a: pc[s] for a, s in src.letter_image.items()},
        name=f"syn({lang.name})" if lang.name else "syntactic",
    )
    acc = frozenset(ic[w] for w in I if w in F)
    return Quotient(morph, RecognizedLanguage(morph, acc, lang.name), pc, ic)


def morphisms_isomorphic(m0: OmegaMorphism, m1: OmegaMorphism) -> bool:
    """Isomorphism of the reachable parts, compatible with the letter images."""
    if sorted(m0.alphabet) != sorted(m1.alphabet):
        return False
    w0, w1 = m0.plus_witnesses, m1.plus_witnesses
    if len(w0) != len(w1):
        return False
    f = {s: m1.eval_word(w) for s, w in w0.items()}
    if len(set(f.values())) != len(f):
        return False
    a0, a1 = m0.algebra, m1.algebra
    for s, t in product(f, repeat=2):
        if f[a0.mul(s, t)] != a1.mul(f[s], f[t]):
            return False
    i0, i1 = m0.inf_witnesses, m1.inf_witnesses
    if len(i0) != len(i1):
        return False
    g = {w: m1.eval_lasso(*pl) for w, pl in i0.items()}
    if len(set(g.values())) != len(g):
        return False
    for s in f:
        if g[a0.omega[s]] != a1.omega[f[s]]:
            return False
        for w in g:
            if g[a0.mixed[s][w]] != a1.mixed[f[s]][g[w]]:
                return False
    return True
