"""
Text form of noncommutative polynomials.

Grammar (whitespace ignored)::

    expr      := ["+"|"-"] term (("+"|"-") term)*
    term      := factor ("*" factor)*
    factor    := atom ("^" signed_int)?
    atom      := "q" | rational | generator | "(" expr ")"
    generator := ("a"|"A"|"K") int ("^+")?

``^+`` marks the star of a generator.  ``K1^-1`` is the inverse of ``K1``.
:func:`format_poly` emits the same grammar, so ``parse_expr(format_poly(p))``
reproduces ``p`` exactly.
"""

import re
from fractions import Fraction

from .errors import ExprSyntaxError, ModeOutOfRange, PresentationMismatch
from .ncalg import Gen, Kind, NCPoly
from .qscalar import ONE, QRat

__all__ = ["parse_expr", "format_poly", "format_coeff"]


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<gen>[aAK])(?P<mode>\d+)(?P<star>\^\+)?
  | (?P<int>\d+)
  | (?P<q>q)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _lex(text):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        col = pos + 1
        pos = m.end()
        if m.group("ws"):
            continue
        if m.group("gen"):
            toks.append(("gen", (m.group("gen"), int(m.group("mode")), bool(m.group("star"))), col))
        elif m.group("int"):
            toks.append(("int", int(m.group("int")), col))
        elif m.group("q"):
            toks.append(("q", None, col))
        else:
            toks.append((m.group("op"), None, col))
    toks.append(("eof", None, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text, pres):
        self.toks = _lex(text)
        self.i = 0
        self.pres = pres

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            self.fail(f"expected {kind!r}")
        self.i += 1
        return tok

    def fail(self, msg):
        tok = self.peek()
        what = "end of input" if tok[0] == "eof" else f"token {tok[0]!r}"
        raise ExprSyntaxError(f"{msg}, found {what}", tok[2])

    def parse(self):
        p = self.expr()
        if self.peek()[0] != "eof":
            self.fail("unexpected trailing input")
        return p

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base, gen = self.atom()
        if self.peek()[0] != "^":
            return base
        self.take()
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        k = sign * self.take("int")[1]
        if k >= 0:
            return base ** k
        if gen is not None and gen.kind in (Kind.K, Kind.KINV):
            inv = Gen(gen.mode, Kind.KINV if gen.kind is Kind.K else Kind.K)
            return NCPoly(self.pres, {(inv,) * (-k): ONE})
        if set(base.terms) == {()}:
            return self.pres.scalar(base.terms[()] ** k)
        raise ExprSyntaxError("negative power of a non-invertible expression", self.toks[self.i - 1][2])

    def atom(self):
        kind, val, col = self.peek()
        if kind == "q":
            self.take()
            return self.pres.scalar(QRat.q_power(1)), None
        if kind == "int":
            self.take()
            num = val
            if self.peek()[0] == "/":
                self.take()
                den = self.take("int")[1]
                if den == 0:
                    raise ExprSyntaxError("zero denominator", self.toks[self.i - 1][2])
                return self.pres.scalar(Fraction(num, den)), None
            return self.pres.scalar(num), None
        if kind == "gen":
            self.take()
            letter, mode, star = val
            kind_ = {"a": Kind.ANN, "A": Kind.PWANN, "K": Kind.K}[letter]
            if star:
                if kind_ is Kind.K:
                    raise ExprSyntaxError("K is self-adjoint; '^+' not allowed", col)
                kind_ = Kind.CRE if kind_ is Kind.ANN else Kind.PWCRE
            g = Gen(mode, kind_)
            if g.kind not in self.pres.kinds:
                raise PresentationMismatch(f"{g} (column {col}) is not in the {self.pres.name} presentation")
            if not 1 <= mode <= self.pres.n_modes:
                raise ModeOutOfRange(f"mode {mode} at column {col} outside 1..{self.pres.n_modes}")
            return NCPoly(self.pres, {(g,): ONE}), g
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner, None
        self.fail("expected an operand")


def parse_expr(text, presentation):
    """Parse ``text`` into an :class:`NCPoly` of ``presentation`` (no reduction)."""
    return _Parser(text, presentation).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _qpow(k):
    return "" if k == 0 else ("q" if k == 1 else f"q^{k}")


def _poly_expr(c):
    parts = []
    for k, v in enumerate(c):
        if not v:
            continue
        mag = abs(v)
        body = " * ".join(x for x in (str(mag) if (mag != 1 or k == 0) else "", _qpow(k)) if x)
        if not parts:
            parts.append(body if v > 0 else f"-{body}")
        else:
            parts.append(("+ " if v > 0 else "- ") + body)
    return " ".join(parts)


def format_coeff(c):
    """Return ``(negative, factors)`` for a nonzero QRat; factors may be empty."""
    mono = c.monomial()
    if mono is not None:
        v, k = mono
        factors = [str(abs(v))] if abs(v) != 1 else []
        if k:
            factors.append(_qpow(k))
        return v < 0, factors
    nz = [(k, v) for k, v in enumerate(c.num) if v]
    negative = False
    factors = []
    den = c.den
    den_shift = 0
    if len(den) > 1 and all(v == 0 for v in den[:-1]):
        den_shift, den = len(den) - 1, None
    if len(nz) == 1:
        k, v = nz[0]
        negative = v < 0
        if abs(v) != 1:
            factors.append(str(abs(v)))
        if k - den_shift:
            factors.append(_qpow(k - den_shift))
    else:
        factors.append(f"({_poly_expr(c.num)})")
        if den_shift:
            factors.append(_qpow(-den_shift))
    if den is not None and den != (1,):
        factors.append(f"({_poly_expr(den)})^-1")
    return negative, factors


def _format_word(w):
    out = []
    k = 0
    while k < len(w):
        g = w[k]
        run = 1
        while k + run < len(w) and w[k + run] == g:
            run += 1
        if g.kind is Kind.KINV:
            out.append(f"K{g.mode}^-{run}")
        else:
            out.append(str(g) if run == 1 else f"{g}^{run}")
        k += run
    return out


def format_poly(p):
    if p.is_zero():
        return "0"
    pieces = []
    for w, c in p.items():
        negative, factors = format_coeff(c)
        body = " * ".join(factors + _format_word(w)) or "1"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(("- " if negative else "+ ") + body)
    return " ".join(pieces)
