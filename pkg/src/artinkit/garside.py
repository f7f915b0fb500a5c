"""Exact arithmetic in spherical Artin groups via Garside normal forms.

An element is Δ^k · f_1 ⋯ f_l where the f_i are simples (positive lifts of
Coxeter group elements), no factor is trivial or Δ, and each consecutive
pair is left-weighted.  All lattice/divisibility computations reduce to
finite Coxeter-group tables built once per diagram: multiplication, descent
masks, and brute-force meets over divisor bitsets.

Conventions: inf(x) = delta_power, sup(x) = delta_power + number of factors,
size(x) = |delta_power| + number of factors (the canonical size used for
ball enumeration radii).  τ is conjugation by Δ; τ² = id holds in every
spherical type, which the table asserts at build time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import coxeter as cx
from .dynkin import DynkinDiagram, is_spherical
from .errors import (
    GroupMismatch,
    NotPositive,
    NotSpherical,
    ParseError,
    PreconditionFailed,
    UnknownGenerator,
)


# Largest Coxeter group materialized as full tables; big enough for F(4),
# far too small for H(4)/E(n) whose W×W tables would not be desk scale.
MAX_TABLE = 1300


class GarsideTable:
    """Finite Coxeter tables backing Garside arithmetic for one diagram.

    Elements of W are integers indexing the ShortLex enumeration; index 0 is
    the identity. Built lazily once per diagram and then read-only.
    """

    def __init__(self, d):
        if not is_spherical(d):
            raise NotSpherical(f"not a spherical diagram: {d.vertices}")
        self.d = d
        eng = cx.engine(d)
        self.eng = eng
        words = eng.enumerate(cap=MAX_TABLE)
        self.words = words
        self.idx = {w: i for i, w in enumerate(words)}
        self.n = len(words)
        self.length = [len(w) for w in words]
        self.gen = {s: self.idx[(s,)] for s in d.vertices}
        self.gens = [self.gen[s] for s in d.vertices]
        self.mul = [
            [self.idx[eng.mult(u, v)] for v in words] for u in words
        ]
        self.inv = [self.idx[eng.inv(w)] for w in words]
        self.w0i = max(range(self.n), key=lambda i: self.length[i])
        w0 = self.w0i
        self.tau = [self.mul[self.mul[w0][x]][w0] for x in range(self.n)]
        assert all(self.tau[self.tau[x]] == x for x in range(self.n))
        # descent masks over the generator declaration order
        gi = {s: i for i, s in enumerate(d.vertices)}
        self.ldesc = [0] * self.n
        self.rdesc = [0] * self.n
        for x in range(self.n):
            for s, i in gi.items():
                if self.length[self.mul[self.gen[s]][x]] < self.length[x]:
                    self.ldesc[x] |= 1 << i
                if self.length[self.mul[x][self.gen[s]]] < self.length[x]:
                    self.rdesc[x] |= 1 << i
        # support masks (letters of the canonical word)
        self.supp = [
            sum(1 << gi[s] for s in set(w)) for w in words
        ]
        # left/right divisor bitsets for brute meets
        self.ldivs = [0] * self.n
        self.rdivs = [0] * self.n
        for w in range(self.n):
            lw = self.length[w]
            for u in range(self.n):
                if self.length[u] + self.length[self.mul[self.inv[u]][w]] == lw:
                    self.ldivs[w] |= 1 << u
                if self.length[self.mul[w][self.inv[u]]] + self.length[u] == lw:
                    self.rdivs[w] |= 1 << u
        self.by_length_desc = sorted(
            range(self.n), key=lambda i: -self.length[i]
        )
        self.rcomp = [self.mul[self.inv[x]][w0] for x in range(self.n)]  # x·rcomp = w0
        self.lcomp = [self.mul[w0][self.inv[x]] for x in range(self.n)]  # lcomp·x = w0
        self._meet_l = {}
        self._meet_r = {}
        self._w0_parabolic = {}
        # normal successor lists for ball enumeration: t follows s iff
        # every left descent of t is a right descent of s
        self.follows = None

    def meet_l(self, u, v):
        """Longest common left-divisor (weak-order meet)."""
        if u == v:
            return u
        key = (u, v) if u < v else (v, u)
        hit = self._meet_l.get(key)
        if hit is None:
            both = self.ldivs[u] & self.ldivs[v]
            for i in self.by_length_desc:
                if both >> i & 1:
                    hit = i
                    break
            self._meet_l[key] = hit
        return hit

    def meet_r(self, u, v):
        if u == v:
            return u
        key = (u, v) if u < v else (v, u)
        hit = self._meet_r.get(key)
        if hit is None:
            both = self.rdivs[u] & self.rdivs[v]
            for i in self.by_length_desc:
                if both >> i & 1:
                    hit = i
                    break
            self._meet_r[key] = hit
        return hit

    def simple_head(self, s, t):
        """Max simple left-divisor of the product of simples s·t."""
        return self.mul[s][self.meet_l(self.rcomp[s], t)]

    def simple_tail(self, s, t):
        """Max simple right-divisor of the product of simples s·t."""
        return self.mul[self.meet_r(s, self.lcomp[t])][t]

    def join_r(self, u, v):
        """Least common left-multiple of simples: smallest j with u,v ≼_R j."""
        m = self.meet_l(self.lcomp[u], self.lcomp[v])
        return self.mul[self.inv[m]][self.w0i]

    def is_normal(self, s, t):
        return self.ldesc[t] & ~self.rdesc[s] == 0

    def build_follows(self):
        if self.follows is None:
            proper = [
                x for x in range(self.n) if x != 0 and x != self.w0i
            ]
            self.follows = {
                s: [t for t in proper if self.is_normal(s, t)] for s in proper
            }
            self.proper = proper
        return self.follows

    def w0_parabolic(self, X):
        """Index of the longest element of W_X."""
        X = frozenset(X)
        hit = self._w0_parabolic.get(X)
        if hit is None:
            hit = self.idx[self.eng.longest_parabolic(sorted(X, key=self.d.vertices.index))]
            self._w0_parabolic[X] = hit
        return hit

    # -- normal form over raw (delta_power, factor index tuple) ----------

    def normalize(self, d, fs):
        fs = [f for f in fs if f != 0]
        passes = 0
        limit = (len(fs) + 2) ** 2
        changed = True
        while changed:
            changed = False
            passes += 1
            assert passes <= limit, "normalization failed to stabilize"
            for i in range(len(fs) - 1):
                u, v = fs[i], fs[i + 1]
                if u == 0 or v == 0 or self.is_normal(u, v):
                    continue
                c = self.meet_l(self.rcomp[u], v)
                fs[i] = self.mul[u][c]
                fs[i + 1] = self.mul[self.inv[c]][v]
                changed = True
            fs = [f for f in fs if f != 0]
        while fs and fs[0] == self.w0i:
            # leading factor is already to the left of the others, so the
            # absorbed delta does not twist the remainder
            d += 1
            fs = fs[1:]
        return d, tuple(fs)

    def raw_multiply(self, a, b):
        d1, f1 = a
        d2, f2 = b
        if d2 % 2:
            f1 = tuple(self.tau[f] for f in f1)
        return self.normalize(d1 + d2, f1 + f2)

    def raw_inverse(self, a):
        d, fs = a
        out = (0, ())
        for f in reversed(fs):
            out = self.raw_multiply(out, (-1, (self.mul[self.w0i][self.inv[f]],)))
        return self.raw_multiply(out, (-d, ()))

    def head(self, a):
        """Max simple left-divisor of a positive element."""
        d, fs = a
        if d > 0:
            return self.w0i
        return fs[0] if fs else 0

    def tail_simple(self, a):
        """Max simple right-divisor of a positive element."""
        d, fs = a
        if d > 0:
            return self.w0i
        if not fs:
            return 0
        t = fs[0]
        for f in fs[1:]:
            t = self.simple_tail(t, f)
        return t

    def coset_key(self, a, X, shift):
        """Canonical token of the left coset a·A_X, comparable for a fixed shift.

        Requires Δ^(2·shift)·a positive. The token is the normal form of the
        unique minimal positive representative of the shifted coset, obtained
        by stripping the maximal right-divisor lying in the positive monoid
        of A_X. Works on a plain factor sequence and normalizes once at the
        end, so each strip is linear in the sequence length.
        """
        d, fs = a
        d += 2 * shift
        if d < 0:
            raise NotPositive("shift too small for coset key")
        seq = [self.w0i] * d + list(fs)
        w0x = self.w0_parabolic(X)
        mul, inv = self.mul, self.inv
        while seq:
            beta = seq[0]
            for f in seq[1:]:
                beta = self.simple_tail(beta, f)
            c = self.meet_r(beta, w0x)
            if c == 0:
                break
            # divide the sequence by c on the right: walk right-to-left,
            # transporting the pending divisor through each factor via the
            # right-divisibility join (g·c⁻¹ = (j·g⁻¹)⁻¹·(j·c⁻¹), j = c ∨ g)
            for i in range(len(seq) - 1, -1, -1):
                if c == 0:
                    break
                g = seq[i]
                j = self.join_r(c, g)
                seq[i] = mul[j][inv[c]]
                c = mul[j][inv[g]]
            assert c == 0, "divisor did not divide out"
            seq = [f for f in seq if f != 0]
        return self.normalize(0, tuple(seq))

    def support_mask(self, a):
        d, fs = a
        if d != 0:
            return (1 << len(self.d.vertices)) - 1
        mask = 0
        for f in fs:
            mask |= self.supp[f]
        return mask


_TABLES = {}


def table(d):
    t = _TABLES.get(d)
    if t is None:
        t = GarsideTable(d)
        _TABLES[d] = t
    return t


@dataclass(frozen=True)
class Simple:
    underlying: cx.CoxeterElement


@dataclass(frozen=True)
class GarsideElement:
    group: DynkinDiagram
    delta_power: int
    factors: tuple  # of Simple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def inf(self):
        return self.delta_power

    @property
    def sup(self):
        return self.delta_power + len(self.factors)

    @property
    def size(self):
        """Canonical size: |delta_power| + number of factors."""
        return abs(self.delta_power) + len(self.factors)

    def is_positive(self):
        return self.delta_power >= 0

    def is_identity(self):
        return self.delta_power == 0 and not self.factors

    def __str__(self):
        return serialize(self)


@dataclass(frozen=True)
class NpForm:
    neg: GarsideElement
    pos: GarsideElement
    side: str  # "np": g = neg^-1 · pos ; "pn": g = pos · neg^-1


def _wrap(t, raw):
    d, fs = raw
    return GarsideElement(
        t.d, d, tuple(Simple(cx.CoxeterElement(t.d, t.words[f])) for f in fs)
    )


def _raw(t, g):
    return (g.delta_power, tuple(t.idx[s.underlying.word] for s in g.factors))


def identity(d):
    table(d)
    return GarsideElement(d, 0, ())


def generator(d, s):
    t = table(d)
    if s not in t.gen:
        raise UnknownGenerator(f"{s!r} is not a generator")
    return _wrap(t, t.normalize(0, (t.gen[s],)))


def from_letters(d, letters):
    """Build an element from signed letters: iterable of (generator, ±1).

    A plain string is accepted as all-positive letters.
    """
    t = table(d)
    if isinstance(letters, str):
        letters = [(s, 1) for s in letters if not s.isspace()]
    raw = (0, ())
    for (s, sign) in letters:
        if s not in t.gen:
            raise UnknownGenerator(f"{s!r} is not a generator")
        g = t.gen[s]
        if sign > 0:
            raw = t.raw_multiply(raw, (0, (g,)))
        else:
            raw = t.raw_multiply(raw, (-1, (t.mul[t.w0i][g],)))
    return _wrap(t, raw)


def _common_table(x, y):
    if x.group != y.group:
        raise GroupMismatch("elements of different groups")
    return table(x.group)


def multiply(x, y):
    t = _common_table(x, y)
    return _wrap(t, t.raw_multiply(_raw(t, x), _raw(t, y)))


def inverse(x):
    t = table(x.group)
    return _wrap(t, t.raw_inverse(_raw(t, x)))


def power(x, k):
    t = table(x.group)
    out = (0, ())
    raw = _raw(t, x) if k >= 0 else t.raw_inverse(_raw(t, x))
    for _ in range(abs(k)):
        out = t.raw_multiply(out, raw)
    return _wrap(t, out)


def delta(d, k=1):
    table(d)
    return GarsideElement(d, k, ())


def left_gcd(x, y):
    """Greatest common left-divisor of two positive elements."""
    t = _common_table(x, y)
    if not (x.is_positive() and y.is_positive()):
        raise NotPositive("left_gcd requires positive elements")
    a, b = _raw(t, x), _raw(t, y)
    out = (0, ())
    while True:
        c = t.meet_l(t.head(a), t.head(b))
        if c == 0:
            return _wrap(t, out)
        step = (0, (c,))
        inv_step = t.raw_inverse(step)
        out = t.raw_multiply(out, step)
        a = t.raw_multiply(inv_step, a)
        b = t.raw_multiply(inv_step, b)


def rev(x):
    """The word-reversal anti-automorphism: rev(xy) = rev(y)·rev(x)."""
    t = table(x.group)
    d, fs = _raw(t, x)
    flipped = tuple(t.inv[f] for f in reversed(fs))
    if d % 2:
        flipped = tuple(t.tau[f] for f in flipped)
    return _wrap(t, t.normalize(d, flipped))


def right_gcd(x, y):
    t = _common_table(x, y)
    if not (x.is_positive() and y.is_positive()):
        raise NotPositive("right_gcd requires positive elements")
    return rev(left_gcd(rev(x), rev(y)))


def left_lcm(x, y):
    """Least common right-multiple of two positive elements under prefix order."""
    t = _common_table(x, y)
    if not (x.is_positive() and y.is_positive()):
        raise NotPositive("left_lcm requires positive elements")
    n = max(x.sup, y.sup)
    dn = delta(x.group, n)
    phi_x = multiply(inverse(x), dn)
    phi_y = multiply(inverse(y), dn)
    return multiply(dn, inverse(right_gcd(phi_x, phi_y)))


def right_lcm(x, y):
    return rev(left_lcm(rev(x), rev(y)))


def np_form(g, side="np"):
    """Coprime factorization g = neg⁻¹·pos (np) or pos·neg⁻¹ (pn)."""
    t = table(g.group)
    shift = max(0, -g.inf)
    dn = delta(g.group, shift)
    if side == "np":
        b0 = multiply(dn, g)
        c = left_gcd(dn, b0)
        ci = inverse(c)
        return NpForm(neg=multiply(ci, dn), pos=multiply(ci, b0), side="np")
    if side == "pn":
        b0 = multiply(g, dn)
        c = right_gcd(dn, b0)
        ci = inverse(c)
        return NpForm(neg=multiply(dn, ci), pos=multiply(b0, ci), side="pn")
    raise ValueError("side must be 'np' or 'pn'")


def np_reconstruct(form):
    if form.side == "np":
        return multiply(inverse(form.neg), form.pos)
    return multiply(form.pos, inverse(form.neg))


def support(g):
    """Generators occurring in either np-half (= letters of any expression)."""
    t = table(g.group)
    form = np_form(g)
    mask = t.support_mask(_raw(t, form.neg)) | t.support_mask(_raw(t, form.pos))
    return frozenset(
        s for i, s in enumerate(g.group.vertices) if mask >> i & 1
    )


def in_parabolic(g, X):
    """Exact membership of g in the standard parabolic subgroup on X."""
    X = frozenset(X)
    for s in X:
        if s not in g.group.vertices:
            raise UnknownGenerator(f"{s!r} is not a generator")
    return support(g) <= X


def letters_of(g):
    """A signed-letter expression of g from its np-form (not length-minimal)."""
    form = np_form(g)
    out = [
        (s, -1)
        for s in reversed(_positive_letters(form.neg))
    ]
    out.extend((s, 1) for s in _positive_letters(form.pos))
    return out


def _positive_letters(p):
    assert p.is_positive()
    letters = []
    for _ in range(p.delta_power):
        letters.extend(cx.engine(p.group).longest())
    for f in p.factors:
        letters.extend(f.underlying.word)
    return letters


def restrict(g, X):
    """Re-express g ∈ A_X as an element of the induced subdiagram's group."""
    if not in_parabolic(g, X):
        raise ValueError("element does not lie in the parabolic subgroup")
    sub = g.group.induced(X)
    return from_letters(sub, letters_of(g))


def embed(g, ambient):
    """Image of g under the inclusion of its (induced sub)diagram's group."""
    for s in g.group.vertices:
        if not ambient.has_vertex(s):
            raise UnknownGenerator(f"{s!r} is not a generator of the ambient diagram")
    return from_letters(ambient, letters_of(g))


def delta_of(d, X):
    """Garside element Δ_X: positive lift of the longest element of W_X."""
    t = table(d)
    X = frozenset(X)
    for s in X:
        if s not in t.gen:
            raise UnknownGenerator(f"{s!r} is not a generator")
    if not is_spherical(d.induced(X)):
        raise NotSpherical(f"parabolic on {sorted(X)} is not spherical")
    return _wrap(t, t.normalize(0, (t.w0_parabolic(X),)))


def center_of(d, X):
    """c_X = Δ_X^e, e ∈ {1,2} minimal with c_X commuting with A_X."""
    t = table(d)
    dx = delta_of(d, X)
    w0x = t.w0_parabolic(frozenset(X))
    central = all(
        t.mul[t.mul[w0x][t.gen[s]]][w0x] == t.gen[s] for s in X
    )
    return dx if central else multiply(dx, dx)


def elementary_conjugator(d, X, tgen):
    """Ribbon r = Δ_{X∪{t}}·Δ_X⁻¹ with the target parabolic X'.

    Returns (r, X') where r·A_X·r⁻¹ = A_{X'}; verified generator by
    generator at the Artin level.
    """
    X = frozenset(X)
    if tgen in X:
        raise ValueError("t must not lie in X")
    Y = X | {tgen}
    r = multiply(delta_of(d, Y), inverse(delta_of(d, X)))
    ri = inverse(r)
    gens = {s: generator(d, s) for s in d.vertices}
    X2 = set()
    for s in X:
        conj = multiply(multiply(r, gens[s]), ri)
        image = [u for u, el in gens.items() if el == conj]
        assert len(image) == 1, "ribbon conjugate of a generator must be a generator"
        X2.add(image[0])
    return r, frozenset(X2)


def ribbon_decompose(g, X, depth=6):
    """Bounded search for g = u_1⋯u_k·tail with tail ∈ A_X and each u_i an
    elementary conjugator along a chain of parabolic subsets ending at X.

    Returns (chain, tail) with chain = [(u_i, X_from_i, X_to_i)] meaning
    u_i·A_{X_from_i}·u_i⁻¹ = A_{X_to_i}; consecutive entries satisfy
    X_to_i = X_from_{i+1} read right to left, the last X_from is X itself.
    Returns None when the bounded search exhausts (which is not a disproof).
    Requires g positive and g·c_X·g⁻¹ equal to c_Y for some spherical Y
    (PreconditionFailed otherwise).
    """
    t = table(g.group)
    d = g.group
    X = frozenset(X)
    if not g.is_positive():
        raise NotPositive("ribbon_decompose requires a positive element")
    cX = center_of(d, X)
    w = multiply(multiply(g, cX), inverse(g))
    if _recognize_center(d, w) is None:
        raise PreconditionFailed(
            "g·c_X·g⁻¹ is not the center of any spherical standard parabolic"
        )
    shift = (depth + g.sup + 3) // 2 + 1
    start = _raw(t, g)
    key0 = (t.coset_key(start, X, shift), X)
    seen = {key0}
    queue = [(start, X, [])]
    for _ in range(depth):
        nxt = []
        for raw, Y, path in queue:
            if t.coset_key(raw, Y, shift) == t.coset_key((0, ()), Y, shift):
                return _ribbon_reconstruct(t, g, X, raw, Y, path)
            for tg in d.vertices:
                if tg in Y or not is_spherical(d.induced(Y | {tg})):
                    continue
                r, Yprev = elementary_conjugator(d, Y, tg)
                raw2 = t.raw_multiply(raw, t.raw_inverse(_raw(t, r)))
                key = (t.coset_key(raw2, Yprev, shift), Yprev)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((raw2, Yprev, path + [(r, Y, Yprev)]))
        queue = nxt
    for raw, Y, path in queue:
        if t.coset_key(raw, Y, shift) == t.coset_key((0, ()), Y, shift):
            return _ribbon_reconstruct(t, g, X, raw, Y, path)
    return None


def _ribbon_reconstruct(t, g, X, raw, Ytop, path):
    d = g.group
    chain = list(reversed(path))
    prod = identity(d)
    for (r, _, _) in chain:
        prod = multiply(prod, r)
    tail = multiply(inverse(prod), g)
    assert in_parabolic(tail, X), "ribbon tail must lie in the base parabolic"
    assert multiply(prod, tail) == g
    return chain, tail


def _recognize_center(d, w):
    for r in range(len(d.vertices) + 1):
        for Y in combinations(d.vertices, r):
            if not is_spherical(d.induced(Y)):
                continue
            if center_of(d, Y) == w:
                return frozenset(Y)
    return None


# -- serialization ------------------------------------------------------------


def serialize(g):
    """Render as `Δ^k · w1 | w2 | ...`; the identity is `Δ^0 ·`."""
    head = f"Δ^{g.delta_power} ·"
    if not g.factors:
        return head
    return head + " " + " | ".join(
        " ".join(s.underlying.word) if _needs_spaces(g.group)
        else "".join(s.underlying.word)
        for s in g.factors
    )


def _needs_spaces(d):
    return any(len(v) != 1 for v in d.vertices)


def parse_element(d, text):
    """Parse the serialize() grammar back into a GarsideElement."""
    t = table(d)
    text = text.strip()
    if not text.startswith("Δ^"):
        raise ParseError(1, "element must start with 'Δ^<int>'")
    rest = text[2:]
    parts = rest.split("·", 1)
    if len(parts) != 2:
        raise ParseError(1, "missing '·' separator")
    try:
        k = int(parts[0].strip())
    except ValueError:
        raise ParseError(1, f"bad Δ power {parts[0].strip()!r}")
    body = parts[1].strip()
    fs = []
    if body:
        for chunk in body.split("|"):
            chunk = chunk.strip()
            letters = chunk.split() if _needs_spaces(d) else list(chunk)
            for s in letters:
                if s not in t.gen:
                    raise ParseError(1, f"unknown generator {s!r}")
            w = cx.engine(d).canonical(tuple(letters))
            if len(w) != len(letters):
                raise ParseError(1, f"factor {chunk!r} is not a reduced word")
            fs.append(t.idx[w])
    return _wrap(t, t.normalize(k, tuple(fs)))
