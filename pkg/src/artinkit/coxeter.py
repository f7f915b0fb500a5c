"""Exact computation in Coxeter groups presented by Dynkin diagrams.

Elements are canonical ShortLex-minimal reduced words (tuples of generator
names); the generator order is the diagram's vertex declaration order.  The
word problem is solved by Tits rewriting: a word is shortened by scanning its
braid-move closure for an adjacent equal pair, and a reduced word is
canonicalized as the ShortLex minimum of its closure.  Exponential in the
worst case, exact always; fine at the ranks this package targets.

Engines (memo tables) are cached per diagram and grow monotonically; writes
are idempotent, so concurrent readers in one process observe serial behavior.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .dynkin import DynkinDiagram, INFINITY, is_spherical
from .errors import CapExceeded, NotSpherical, UnknownGenerator


@dataclass(frozen=True)
class CoxeterElement:
    group: DynkinDiagram
    word: tuple

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))

    @property
    def length(self):
        return len(self.word)

    def __str__(self):
        return "".join(self.word) if self.word else "e"


@dataclass(frozen=True)
class GateResult:
    gate: CoxeterElement
    tail: CoxeterElement
    distance: int


class _Engine:
    """Per-diagram rewriting engine with memoized right multiplication."""

    def __init__(self, diagram):
        self.d = diagram
        self.rank = {s: i for i, s in enumerate(diagram.vertices)}
        self._rmult = {}

    def key(self, word):
        return tuple(self.rank[s] for s in word)

    # braid moves: replace an alternating (s,t,...) run of length m(s,t)
    # by the (t,s,...) run; these preserve length and generate all reduced
    # expressions of an element.
    def _moves(self, word):
        d = self.d
        n = len(word)
        for i in range(n - 1):
            s, t = word[i], word[i + 1]
            if s == t:
                continue
            m = d.label(s, t)
            if m == INFINITY or i + m > n:
                continue
            run = word[i:i + m]
            ok = all(run[j] == (s if j % 2 == 0 else t) for j in range(m))
            if ok:
                rep = tuple(t if j % 2 == 0 else s for j in range(m))
                yield word[:i] + rep + word[i + m:]

    def _closure(self, word):
        seen = {word}
        frontier = [word]
        while frontier:
            nxt = []
            for w in frontier:
                for v in self._moves(w):
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return seen

    def canonical(self, word):
        """ShortLex canonical form of an arbitrary word."""
        out = ()
        for s in word:
            if s not in self.rank:
                raise UnknownGenerator(f"{s!r} is not a generator")
            out = self.rmult(out, s)
        return out

    def rmult(self, word, s):
        """Canonical form of (canonical word) * s."""
        memo = self._rmult
        hit = memo.get((word, s))
        if hit is not None:
            return hit
        candidate = word + (s,)
        closure = self._closure(candidate)
        result = None
        for w in closure:
            for i in range(len(w) - 1):
                if w[i] == w[i + 1]:
                    result = self.canonical(w[:i] + w[i + 2:])
                    break
            if result is not None:
                break
        if result is None:
            result = min(closure, key=self.key)
        memo[(word, s)] = result
        return result

    def lmult(self, s, word):
        return self.canonical((s,) + word)

    def mult(self, u, v):
        out = u
        for s in v:
            out = self.rmult(out, s)
        return out

    def inv(self, word):
        return self.canonical(tuple(reversed(word)))

    def is_right_descent(self, word, s):
        return len(self.rmult(word, s)) < len(word)

    def is_left_descent(self, s, word):
        return len(self.lmult(s, word)) < len(word)

    def right_descents(self, word):
        return frozenset(
            s for s in self.d.vertices if self.is_right_descent(word, s)
        )

    def left_descents(self, word):
        return frozenset(
            s for s in self.d.vertices if self.is_left_descent(s, word)
        )

    def enumerate(self, cap):
        """All canonical words in ShortLex order; CapExceeded if |W| > cap."""
        seen = {()}
        order = [()]
        layer = [()]
        while layer:
            found = set()
            for w in layer:
                for s in self.d.vertices:
                    u = self.rmult(w, s)
                    if len(u) > len(w) and u not in seen:
                        seen.add(u)
                        found.add(u)
                        if len(seen) > cap:
                            raise CapExceeded(cap)
            layer = sorted(found, key=self.key)
            order.extend(layer)
        return order

    def longest(self):
        """Greedy ascent to the maximal element (assumes finiteness)."""
        w = ()
        while True:
            for s in self.d.vertices:
                u = self.rmult(w, s)
                if len(u) > len(w):
                    w = u
                    break
            else:
                return w

    def longest_parabolic(self, T):
        """Longest element of W_T by greedy ascent inside the parabolic."""
        w = ()
        while True:
            for s in T:
                u = self.rmult(w, s)
                if len(u) > len(w):
                    w = u
                    break
            else:
                return w


_ENGINES = {}


def engine(d):
    eng = _ENGINES.get(d)
    if eng is None:
        eng = _Engine(d)
        _ENGINES[d] = eng
    return eng


# -- public operations -------------------------------------------------------


def normal_form(d, word):
    """Canonical ShortLex reduced form of a word (iterable of generators)."""
    return CoxeterElement(d, engine(d).canonical(tuple(word)))


def multiply(x, y):
    if x.group != y.group:
        raise ValueError("elements of different groups")
    return CoxeterElement(x.group, engine(x.group).mult(x.word, y.word))


def inverse(x):
    return CoxeterElement(x.group, engine(x.group).inv(x.word))


def enumerate_group(d, cap):
    """All elements in ShortLex order; CapExceeded when |W| > cap."""
    return [CoxeterElement(d, w) for w in engine(d).enumerate(cap)]


def longest_element(d):
    if not is_spherical(d):
        raise NotSpherical("longest element requires a spherical diagram")
    return CoxeterElement(d, engine(d).longest())


def support(x):
    return frozenset(x.word)


def gate_projection(x, T, side="right"):
    """Unique shortest element of the coset x*W_T (side=right) or W_T*x (left).

    Returns gate, tail with x = gate*tail (right) or x = tail*gate (left) and
    length(x) = length(gate) + length(tail); tail lies in W_T.
    """
    eng = engine(x.group)
    T = frozenset(T)
    for s in T:
        if s not in eng.rank:
            raise UnknownGenerator(f"{s!r} is not a generator")
    w = x.word
    stripped = []
    if side == "right":
        while True:
            for s in sorted(T, key=lambda t: eng.rank[t]):
                if eng.is_right_descent(w, s):
                    w = eng.rmult(w, s)
                    stripped.append(s)
                    break
            else:
                break
        tail = eng.canonical(tuple(reversed(stripped)))
    elif side == "left":
        while True:
            for s in sorted(T, key=lambda t: eng.rank[t]):
                if eng.is_left_descent(s, w):
                    w = eng.lmult(s, w)
                    stripped.append(s)
                    break
            else:
                break
        tail = eng.canonical(tuple(stripped))
    else:
        raise ValueError("side must be 'right' or 'left'")
    gate = CoxeterElement(x.group, w)
    tail_el = CoxeterElement(x.group, tail)
    assert gate.length + tail_el.length == x.length
    return GateResult(gate, tail_el, tail_el.length)


def coset_elements(g, T, side="right"):
    """Materialize the coset g*W_T (or W_T*g) in a spherical group."""
    eng = engine(g.group)
    seen = {g.word}
    frontier = [g.word]
    while frontier:
        nxt = []
        for w in frontier:
            for s in T:
                u = eng.rmult(w, s) if side == "right" else eng.lmult(s, w)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return [CoxeterElement(g.group, w) for w in sorted(seen, key=eng.key)]


def pair_gate(d, T1, g1, T2, g2):
    """Mutual nearest-point sets between two standard-parabolic cosets.

    Returns (X, Y, pairs): X ⊆ g1*W_T1 and Y ⊆ g2*W_T2 realize the minimal
    word-metric distance between the cosets, pairs is the graph of the
    nearest-point bijection X -> Y. Verifies that the nearest-point maps are
    single-valued inverse bijections and that X and Y are translated cosets
    of standard parabolic subgroups.
    """
    if not is_spherical(d):
        raise NotSpherical("pair_gate requires a spherical diagram")
    eng = engine(d)
    C1 = coset_elements(g1, T1)
    C2 = coset_elements(g2, T2)

    def dist(x, y):
        return len(eng.mult(eng.inv(x.word), y.word))

    best = min(dist(x, y) for x in C1 for y in C2)
    X = [x for x in C1 if min(dist(x, y) for y in C2) == best]
    Y = [y for y in C2 if min(dist(x, y) for x in C1) == best]
    pairs = []
    back = {}
    for x in X:
        nearest = [y for y in C2 if dist(x, y) == best]
        assert len(nearest) == 1, "nearest point must be unique"
        assert nearest[0] in Y
        pairs.append((x, nearest[0]))
    for y in Y:
        nearest = [x for x in C1 if dist(x, y) == best]
        assert len(nearest) == 1, "nearest point must be unique"
        back[y] = nearest[0]
    for x, y in pairs:
        assert back[y] == x, "nearest-point maps must be inverse bijections"
    for part, whole in ((X, C1), (Y, C2)):
        assert _is_translated_parabolic(eng, part), (
            "gate set must be a translated standard parabolic coset"
        )
    return X, Y, pairs


def _is_translated_parabolic(eng, elems):
    words = {x.word for x in elems}
    base = min(words, key=lambda w: (len(w), eng.key(w)))
    gens = list(eng.d.vertices)
    for r in range(len(gens) + 1):
        for T in combinations(gens, r):
            coset = {base}
            frontier = [base]
            while frontier and len(coset) <= len(words):
                nxt = []
                for w in frontier:
                    for s in T:
                        u = eng.rmult(w, s)
                        if u not in coset:
                            coset.add(u)
                            nxt.append(u)
                frontier = nxt
            if coset == words:
                return True
    return False
