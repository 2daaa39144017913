"""
Noncommutative polynomials over Q(q) and their normal-ordering rewrite systems.

Two presentations are supported:

``paper``
    Per mode ``i`` the generators ``a_i`` (annihilator), ``a_i^+`` (creator),
    ``K_i = q^{N_i}`` and its inverse.  Generators of different modes commute.
    Normal words are, per mode and with modes ascending, ``K^r a^{+p}`` or
    ``K^r a^s``; the product ``a^+ a`` never survives because it reduces to
    ``1 - K^2``.

``pw``
    The covariant oscillators ``A_i``, ``A_i^+``.  Normal words list creators
    by ascending mode, then annihilators by ascending mode.

Every rule has a left-hand side of length two, so a word is normal exactly
when no adjacent pair is a redex.
"""

import random
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import NamedTuple

from .errors import ModeOutOfRange, PresentationMismatch, StepBudgetExceeded
from .qscalar import ONE, ZERO, QRat, q

__all__ = [
    "Kind", "Gen", "Presentation", "NCPoly", "Verdict", "ConsistencyResult",
    "paper", "pw", "nc_mul", "normal_form", "adjoint_sym", "verify_identity",
    "rewrite_consistency", "random_word", "pw_to_paper", "creation_peak",
    "step_budget",
]


class Kind(IntEnum):
    ANN = 0
    CRE = 1
    K = 2
    KINV = 3
    PWANN = 4
    PWCRE = 5


_STAR = {Kind.ANN: Kind.CRE, Kind.CRE: Kind.ANN, Kind.K: Kind.K,
         Kind.KINV: Kind.KINV, Kind.PWANN: Kind.PWCRE, Kind.PWCRE: Kind.PWANN}

_PAPER_KINDS = (Kind.ANN, Kind.CRE, Kind.K, Kind.KINV)
_PW_KINDS = (Kind.PWANN, Kind.PWCRE)


class Gen(NamedTuple):
    mode: int
    kind: Kind

    def star(self):
        return Gen(self.mode, _STAR[self.kind])

    def __str__(self):
        k = self.kind
        if k is Kind.ANN:
            return f"a{self.mode}"
        if k is Kind.CRE:
            return f"a{self.mode}^+"
        if k is Kind.K:
            return f"K{self.mode}"
        if k is Kind.KINV:
            return f"K{self.mode}^-1"
        if k is Kind.PWANN:
            return f"A{self.mode}"
        return f"A{self.mode}^+"


_Q2 = q * q
_QINV = q.inverse()
_ONE_MINUS_Q2 = ONE - _Q2
_Q2_MINUS_ONE = _Q2 - ONE


@dataclass(frozen=True)
class Presentation:
    """A presentation identifier: ``paper`` or ``pw`` with a mode count."""

    name: str
    n_modes: int

    def __post_init__(self):
        if self.name not in ("paper", "pw"):
            raise ValueError(f"unknown presentation {self.name!r}")
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")

    @property
    def kinds(self):
        return _PAPER_KINDS if self.name == "paper" else _PW_KINDS

    def generators(self):
        return [Gen(m, k) for m in range(1, self.n_modes + 1) for k in self.kinds]

    def check(self, g):
        if g.kind not in self.kinds:
            raise PresentationMismatch(f"{g} is not a generator of the {self.name} presentation")
        if not 1 <= g.mode <= self.n_modes:
            raise ModeOutOfRange(f"mode {g.mode} outside 1..{self.n_modes}")

    # generator shortcuts -------------------------------------------------

    def _g(self, mode, kind):
        g = Gen(mode, kind)
        self.check(g)
        return NCPoly(self, {(g,): ONE})

    def a(self, i):
        return self._g(i, Kind.ANN)

    def ad(self, i):
        return self._g(i, Kind.CRE)

    def K(self, i):
        return self._g(i, Kind.K)

    def Kinv(self, i):
        return self._g(i, Kind.KINV)

    def A(self, i):
        return self._g(i, Kind.PWANN)

    def Ad(self, i):
        return self._g(i, Kind.PWCRE)

    def one(self):
        return NCPoly(self, {(): ONE})

    def zero(self):
        return NCPoly(self, {})

    def scalar(self, c):
        return NCPoly(self, {(): QRat.coerce(c)})

    # rewriting -----------------------------------------------------------

    def rewrite(self, x, y):
        """Right-hand side for the adjacent pair ``x y``, or None if normal."""
        if self.name == "paper":
            return _paper_rule(x, y)
        return _pw_rule(x, y)

    def __str__(self):
        return f"{self.name}({self.n_modes})"


def paper(n_modes):
    return Presentation("paper", n_modes)


def pw(n_modes):
    return Presentation("pw", n_modes)


@lru_cache(maxsize=None)
def _paper_rule(x, y):
    if x.mode != y.mode:
        return ((ONE, (y, x)),) if x.mode > y.mode else None
    m = x.mode
    kx, ky = x.kind, y.kind
    K, KI = Gen(m, Kind.K), Gen(m, Kind.KINV)
    if kx is Kind.ANN:
        if ky is Kind.CRE:
            return ((ONE, (y, x)), (_ONE_MINUS_Q2, (K, K)))
        if ky is Kind.K:
            return ((q, (y, x)),)
        if ky is Kind.KINV:
            return ((_QINV, (y, x)),)
    elif kx is Kind.CRE:
        if ky is Kind.ANN:
            return ((ONE, ()), (-ONE, (K, K)))
        if ky is Kind.K:
            return ((_QINV, (y, x)),)
        if ky is Kind.KINV:
            return ((q, (y, x)),)
    elif (kx, ky) in ((Kind.K, Kind.KINV), (Kind.KINV, Kind.K)):
        return ((ONE, ()),)
    return None


@lru_cache(maxsize=None)
def _pw_rule(x, y):
    i, j = x.mode, y.mode
    kx, ky = x.kind, y.kind
    if kx is Kind.PWANN and ky is Kind.PWANN:
        return ((_QINV, (y, x)),) if i > j else None
    if kx is Kind.PWCRE and ky is Kind.PWCRE:
        return ((q, (y, x)),) if i > j else None
    if kx is Kind.PWANN and ky is Kind.PWCRE:
        if i != j:
            return ((q, (y, x)),)
        out = [(_Q2, (y, x)), (ONE, ())]
        for k in range(1, i):
            out.append((_Q2_MINUS_ONE, (Gen(k, Kind.PWCRE), Gen(k, Kind.PWANN))))
        return tuple(out)
    return None


def _word_key(w):
    return (len(w), w)


class NCPoly:
    """Finite Q(q)-linear combination of words in one presentation.  Immutable."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms):
        self.pres = pres
        self.terms = {w: c for w, c in terms.items() if c}

    # iteration in graded lexicographic order
    def items(self):
        return sorted(self.terms.items(), key=lambda t: _word_key(t[0]))

    def words(self):
        return [w for w, _ in self.items()]

    def coeff(self, word):
        return self.terms.get(tuple(word), ZERO)

    def is_zero(self):
        return not self.terms

    def max_len(self):
        return max((len(w) for w in self.terms), default=0)

    def _same(self, other):
        if self.pres != other.pres:
            raise PresentationMismatch(f"{self.pres} vs {other.pres}")

    def _lift(self, other):
        if isinstance(other, NCPoly):
            self._same(other)
            return other
        return self.pres.scalar(other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return NCPoly(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.pres, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return nc_mul(self, other)
        try:
            c = QRat.coerce(other)
        except TypeError:
            return NotImplemented
        return NCPoly(self.pres, {w: v * c for w, v in self.terms.items()})

    def __rmul__(self, other):
        try:
            c = QRat.coerce(other)
        except TypeError:
            return NotImplemented
        return NCPoly(self.pres, {w: c * v for w, v in self.terms.items()})

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = self.pres.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.pres == other.pres and self.terms == other.terms

    def __hash__(self):
        return hash((self.pres, frozenset(self.terms.items())))

    def __str__(self):
        from .exprs import format_poly
        return format_poly(self)

    def __repr__(self):
        return f"NCPoly<{self.pres}>({self})"


def nc_mul(p1, p2):
    """Free-algebra product: concatenate words, multiply coefficients."""
    p1._same(p2)
    out = {}
    for w1, c1 in p1.terms.items():
        for w2, c2 in p2.terms.items():
            w = w1 + w2
            out[w] = out.get(w, ZERO) + c1 * c2
    return NCPoly(p1.pres, out)


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

def step_budget(length, n_modes):
    """Bound on the rewrite chain leading to any single output term.

    The termination measure drops by one at each step along a chain, so the
    chain length is what the budget bounds.  The total work of a reduction
    can still grow exponentially in the P-W presentation, where the summed
    quadratic relation branches into ``i + 1`` terms.
    """
    return (length + 1) ** 3 * n_modes


def _redexes(pres, w):
    return [k for k in range(len(w) - 1) if pres.rewrite(w[k], w[k + 1]) is not None]


def _reduce_word(pres, word, choose, budget):
    """Reduce one word; returns ``(terms, steps, depth)``.

    ``steps`` counts every rewrite, ``depth`` the longest rewrite chain.
    """
    out = {}
    stack = [(word, ONE, 0)]
    steps = depth = 0
    rewrite = pres.rewrite
    while stack:
        w, c, d = stack.pop()
        pos = None
        if choose is None:
            for k in range(len(w) - 1):
                if rewrite(w[k], w[k + 1]) is not None:
                    pos = k
                    break
        else:
            red = _redexes(pres, w)
            if red:
                pos = choose(red)
        if pos is None:
            out[w] = out.get(w, ZERO) + c
            depth = max(depth, d)
            continue
        steps += 1
        if d + 1 > budget:
            raise StepBudgetExceeded(f"reduction of {len(word)}-letter word exceeded {budget} chained steps")
        head, tail = w[:pos], w[pos + 2:]
        for cc, rhs in rewrite(w[pos], w[pos + 1]):
            stack.append((head + rhs + tail, c * cc, d + 1))
    return {w: c for w, c in out.items() if c}, steps, depth


@lru_cache(maxsize=65536)
def _nf_word(pres, word):
    terms, _, _ = _reduce_word(pres, word, None, step_budget(len(word), pres.n_modes))
    return terms


def normal_form(p, rng=None):
    """Normal form of ``p``.

    With ``rng`` (a :class:`random.Random`) each step rewrites a uniformly
    chosen redex instead of the leftmost one; the result must not depend on
    that choice.
    """
    out = {}
    for w, c in p.terms.items():
        if rng is None:
            red = _nf_word(p.pres, w)
        else:
            red, _, _ = _reduce_word(p.pres, w, rng.choice, step_budget(len(w), p.pres.n_modes))
        for w2, c2 in red.items():
            out[w2] = out.get(w2, ZERO) + c * c2
    return NCPoly(p.pres, out)


def count_steps(pres, word, rng=None):
    """``(steps, depth)``: total rewrites and longest rewrite chain for one word."""
    choose = None if rng is None else rng.choice
    _, steps, depth = _reduce_word(pres, tuple(word), choose, float("inf"))
    return steps, depth


def is_normal(pres, word):
    return not _redexes(pres, word)


def adjoint_sym(p):
    """The star involution: reverse each word and star every letter."""
    return NCPoly(p.pres, {tuple(g.star() for g in reversed(w)): c for w, c in p.terms.items()})


@dataclass(frozen=True)
class Verdict:
    proved: bool
    witness: tuple = None
    residue: NCPoly = None

    def __bool__(self):
        return self.proved

    def __str__(self):
        if self.proved:
            return "proved"
        return "refuted(" + (" * ".join(map(str, self.witness)) or "1") + ")"


def verify_identity(lhs, rhs):
    """Decide ``lhs == rhs`` in the quotient algebra by normalizing the difference."""
    lhs._same(rhs)
    diff = normal_form(lhs - rhs)
    if diff.is_zero():
        return Verdict(True)
    return Verdict(False, diff.words()[0], diff)


def random_word(pres, rng, max_len, min_len=1):
    gens = pres.generators()
    n = rng.randint(min_len, max_len)
    return tuple(rng.choice(gens) for _ in range(n))


@dataclass(frozen=True)
class ConsistencyResult:
    consistent: bool
    trials: int
    counterexample: tuple = None
    max_depth: int = 0


def rewrite_consistency(pres, seed, max_len, trials):
    """Normalize random words under two independently seeded random strategies.

    Each word is reduced three ways (leftmost-first plus two random redex
    choices); any disagreement is returned as a counterexample.
    """
    rng = random.Random(seed)
    s1 = random.Random(rng.getrandbits(64))
    s2 = random.Random(rng.getrandbits(64))
    worst = 0
    for _ in range(trials):
        w = random_word(pres, rng, max_len, min_len=0)
        p = NCPoly(pres, {w: ONE})
        budget = step_budget(len(w), pres.n_modes)
        r1, _, n1 = _reduce_word(pres, w, s1.choice, budget)
        r2, _, n2 = _reduce_word(pres, w, s2.choice, budget)
        worst = max(worst, n1, n2)
        ref = normal_form(p).terms
        if r1 != r2 or r1 != ref:
            return ConsistencyResult(False, trials, w, worst)
    return ConsistencyResult(True, trials, None, worst)


# ---------------------------------------------------------------------------
# bridges between the presentations
# ---------------------------------------------------------------------------

def _pw_image(mode):
    """Paper-presentation word for ``(1 - q^2)^{1/2} A_mode`` (= K_1...K_{m-1} a_m)."""
    return tuple(Gen(i, Kind.K) for i in range(1, mode)) + (Gen(mode, Kind.ANN),)


def pw_to_paper(p, target=None):
    """Pull a P-W expression back to the ``paper`` (mode) presentation.

    Substitutes ``A_k -> (1-q^2)^{-1/2} K_1...K_{k-1} a_k`` and its star.  The
    half-integer power of ``1 - q^2`` is only rational for even word length,
    so all words must share a parity; odd expressions come back multiplied by
    the nonzero scalar ``(1 - q^2)^{1/2}``, which leaves identities intact.
    """
    if p.pres.name != "pw":
        raise PresentationMismatch("pw_to_paper expects a pw expression")
    target = target or paper(p.pres.n_modes)
    parities = {len(w) % 2 for w in p.terms}
    if len(parities) > 1:
        raise ValueError("mixed word parities have no rational pull-back")
    parity = parities.pop() if parities else 0
    inv = _ONE_MINUS_Q2.inverse()
    out = target.zero()
    for w, c in p.terms.items():
        letters = []
        for g in w:
            img = _pw_image(g.mode)
            if g.kind is Kind.PWCRE:
                img = tuple(x.star() for x in reversed(img))
            letters.extend(img)
        out = out + NCPoly(target, {tuple(letters): c * inv ** ((len(w) - parity) // 2)})
    return out


def creation_peak(word, n_modes=None):
    """Largest net number of quanta a word ever adds to any single mode.

    Reading right to left, as the word acts on a ket.  Used to choose the
    interior margin that hides truncation effects.
    """
    net = {}
    peak = 0
    for g in reversed(word):
        if g.kind in (Kind.CRE, Kind.PWCRE):
            net[g.mode] = net.get(g.mode, 0) + 1
            peak = max(peak, net[g.mode])
        elif g.kind in (Kind.ANN, Kind.PWANN):
            net[g.mode] = net.get(g.mode, 0) - 1
    return peak
