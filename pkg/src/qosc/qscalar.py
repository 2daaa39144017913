"""
Exact rational functions of the deformation parameter ``q``.

A :class:`QRat` is stored as a pair of univariate polynomials with
``fractions.Fraction`` coefficients, kept in canonical form: coprime
numerator and denominator, monic denominator.  Canonical form is unique, so
``==`` and ``hash`` decide equality in the field Q(q).

Polynomials are plain tuples of coefficients in ascending powers of ``q``
with no trailing zeros; the zero polynomial is the empty tuple.
"""

from fractions import Fraction

from .errors import DivisionByZero, EvaluationPole

__all__ = ["QRat", "q", "ONE", "ZERO", "qr_arith", "qr_inverse", "qr_eval", "qr_normalize"]


# ---------------------------------------------------------------------------
# polynomial helpers (tuples of Fraction, ascending powers)
# ---------------------------------------------------------------------------

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return _trim(out)


def _pneg(a):
    return tuple(-v for v in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        return tuple(a[0] * v for v in b)
    if len(b) == 1:
        return tuple(b[0] * v for v in a)
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pscale(a, s):
    return tuple(v * s for v in a) if s else ()


def _valuation(a):
    for i, v in enumerate(a):
        if v:
            return i
    return None


def _pdivmod(a, b):
    """Euclidean division over Q."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    rem = list(a)
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    db = len(b) - 1
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c:
            f = c / lead
            quot[k - db] = f
            for j, v in enumerate(b):
                rem[k - db + j] -= f * v
    return _trim(quot), _trim(rem[:db])


def _monic(a):
    lead = a[-1]
    return a if lead == 1 else tuple(v / lead for v in a)


def _pgcd(a, b):
    # q^k factors are by far the most common denominators; peel them first.
    va, vb = _valuation(a), _valuation(b)
    if va is None:
        return _monic(b) if b else ()
    if vb is None:
        return _monic(a)
    shift = min(va, vb)
    a, b = a[va:], b[vb:]
    if len(a) == 1 or len(b) == 1:
        g = (Fraction(1),)
    else:
        while b:
            a, b = b, _pdivmod(a, b)[1]
        g = _monic(a)
    return (Fraction(0),) * shift + g if shift else g


def _peval(a, x):
    acc = Fraction(0)
    for v in reversed(a):
        acc = acc * x + v
    return acc


_P_ONE = (Fraction(1),)


# ---------------------------------------------------------------------------
# QRat
# ---------------------------------------------------------------------------

class QRat:
    """An element of Q(q) in canonical form.  Immutable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=(), den=_P_ONE, _canonical=False):
        if not _canonical:
            num, den = _canonicalize(_trim(Fraction(v) for v in num),
                                     _trim(Fraction(v) for v in den))
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls((c,) if c else (), _P_ONE, _canonical=True)

    @classmethod
    def q_power(cls, k, coeff=1):
        """``coeff * q**k`` for any integer ``k``."""
        c = Fraction(coeff)
        if not c:
            return ZERO
        if k >= 0:
            return cls((Fraction(0),) * k + (c,), _P_ONE, _canonical=True)
        return cls((c,), (Fraction(0),) * (-k) + (Fraction(1),), _canonical=True)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, QRat):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QRat")

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == _P_ONE and self.den == _P_ONE

    def is_polynomial(self):
        return self.den == _P_ONE

    def monomial(self):
        """Return ``(coeff, k)`` if self is ``coeff * q**k``, else None."""
        if len(self.den) == 1 or _valuation(self.den) == len(self.den) - 1:
            nz = [(i, v) for i, v in enumerate(self.num) if v]
            if len(nz) == 1:
                i, v = nz[0]
                return v, i - (len(self.den) - 1)
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = QRat.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return QRat(_padd(self.num, other.num), self.den)
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return QRat(num, _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return QRat(_pneg(self.num), self.den, _canonical=True)

    def __sub__(self, other):
        try:
            other = QRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QRat.coerce(other) + (-self)

    def __mul__(self, other):
        try:
            other = QRat.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.den == _P_ONE and other.den == _P_ONE:
            return QRat(_pmul(self.num, other.num), _P_ONE, _canonical=True)
        # cross-cancel before multiplying keeps intermediate degrees low
        g1 = _pgcd(self.num, other.den)
        g2 = _pgcd(other.num, self.den)
        n1, d2 = _pdivmod(self.num, g1)[0], _pdivmod(other.den, g1)[0]
        n2, d1 = _pdivmod(other.num, g2)[0], _pdivmod(self.den, g2)[0]
        num, den = _pmul(n1, n2), _pmul(d1, d2)
        lead = den[-1]
        if lead != 1:
            num, den = _pscale(num, 1 / lead), _pscale(den, 1 / lead)
        return QRat(num, den, _canonical=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero in Q(q)")
        lead = self.num[-1]
        return QRat(_pscale(self.den, 1 / lead), _pscale(self.num, 1 / lead), _canonical=True)

    def __truediv__(self, other):
        try:
            other = QRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QRat.coerce(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- evaluation ---------------------------------------------------------

    def eval(self, q0):
        """Evaluate at a real ``q0``; correctly rounded for float input."""
        x = Fraction(q0)
        d = _peval(self.den, x)
        if d == 0:
            raise EvaluationPole(f"{self} has a pole at q = {q0!r}")
        return float(_peval(self.num, x) / d)

    # -- comparison / hashing -----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QRat):
            try:
                other = QRat.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    # -- text ---------------------------------------------------------------

    def __str__(self):
        return f"({poly_str(self.num)})/({poly_str(self.den)})"

    def __repr__(self):
        return f"QRat{self}"


def _canonicalize(num, den):
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return (), _P_ONE
    g = _pgcd(num, den)
    if g != _P_ONE:
        num, den = _pdivmod(num, g)[0], _pdivmod(den, g)[0]
    lead = den[-1]
    if lead != 1:
        num, den = _pscale(num, 1 / lead), _pscale(den, 1 / lead)
    return num, den


def poly_str(c):
    """Ascending-power text, e.g. ``1 - q^2``; ``0`` for the zero polynomial."""
    parts = []
    for k, v in enumerate(c):
        if not v:
            continue
        mag = abs(v)
        if k == 0:
            body = str(mag)
        else:
            pw = "q" if k == 1 else f"q^{k}"
            body = pw if mag == 1 else f"{mag}*{pw}"
        if not parts:
            parts.append(body if v > 0 else f"-{body}")
        else:
            parts.append(("+ " if v > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


ZERO = QRat((), _P_ONE, _canonical=True)
ONE = QRat(_P_ONE, _P_ONE, _canonical=True)
q = QRat.q_power(1)


# ---------------------------------------------------------------------------
# functional surface
# ---------------------------------------------------------------------------

def qr_normalize(numerator, denominator):
    """Build a canonical QRat from raw ascending coefficient sequences."""
    return QRat(numerator, denominator)


def qr_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def qr_inverse(a):
    return a.inverse()


def qr_eval(a, q0):
    return a.eval(q0)
