"""
Operator-valued constructions built from the mode oscillators.

* 2x2 oscillator blocks ``[[a, x], [-q x, a^+]]`` with ``x = (1 - a^+ a)^{1/2}``
  embedded on the diagonal of an identity matrix;
* the product ``H = M_{1,2}(a_1) M_{2,3}(a_2) ... M_{n,n+1}(a_n)``, an
  ``(n+1) x (n+1)`` operator matrix with the ``i = 1`` factor leftmost;
* the covariant modes ``A_k = (1-q^2)^{-1/2} x_1 ... x_{k-1} a_k``;
* ``X_k = (A_k A_k^+ - A_k^+ A_k)^{1/2}`` and the inverse map back to ``a_k``;
* the rescaled oscillator ``a_q = (1-q^2)^{-1/2} q^{-N/2} a``.

Each block satisfies ``B W B^+ = W`` with ``W = diag(1, q^2)``; the same
weighted identity, with ``W = diag(1, q^2, ..., q^{2n})``, then holds for H.
"""

from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .errors import BasisMismatch, ParameterOutOfRange
from .fockrep import (FockBasis, FockOp, check_q, diag_function, op_annihilator,
                      op_identity, op_K, op_number)
from .ncalg import Gen, Kind, NCPoly, adjoint_sym, paper
from .qscalar import ONE, q

__all__ = [
    "OperatorMatrix", "block_unit", "build_H", "first_row_generators", "pw_mode",
    "x_op", "x_ops", "XOps", "paper_from_pw", "bm_from_paper", "q_weight",
    "build_H_symbolic", "q_integer", "sym_matmul", "sym_dagger", "pw_image", "Realization",
]


def _zero(basis):
    return FockOp(basis, sp.csr_matrix((basis.size, basis.size)))


class OperatorMatrix:
    """Square matrix of FockOp entries on one basis."""

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        m = len(self.entries)
        if any(len(row) != m for row in self.entries):
            raise ValueError("operator matrix must be square")
        self.basis = self.entries[0][0].basis
        if any(e.basis != self.basis for row in self.entries for e in row):
            raise BasisMismatch("operator matrix entries on different bases")

    @property
    def size(self):
        return len(self.entries)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def __matmul__(self, other):
        if other.basis != self.basis or other.size != self.size:
            raise BasisMismatch("operator matrices do not match")
        m = self.size
        out = [[None] * m for _ in range(m)]
        for r in range(m):
            for c in range(m):
                acc = self.entries[r][0] @ other.entries[0][c]
                for k in range(1, m):
                    acc = acc + self.entries[r][k] @ other.entries[k][c]
                out[r][c] = acc
        return OperatorMatrix(out)

    def __sub__(self, other):
        return OperatorMatrix([[x - y for x, y in zip(r1, r2)]
                               for r1, r2 in zip(self.entries, other.entries)])

    def dagger(self):
        m = self.size
        return OperatorMatrix([[self.entries[c][r].adjoint() for c in range(m)] for r in range(m)])

    @classmethod
    def scalar_diag(cls, basis, values):
        ident = op_identity(basis)
        zero = _zero(basis)
        m = len(values)
        return cls([[ident * values[r] if r == c else zero for c in range(m)] for r in range(m)])


def x_op(a_op):
    """``(1 - a^+ a)^{1/2}`` by diagonal functional calculus."""
    return diag_function(op_identity(a_op.basis) - a_op.adjoint() @ a_op, "sqrt")


def block_unit(i, a_op, size, q0):
    """Identity matrix of ``size`` with the oscillator block at rows/cols ``i, i+1`` (1-based)."""
    check_q(q0)
    if not 1 <= i <= size - 1:
        raise ParameterOutOfRange(f"block position {i} outside 1..{size - 1}")
    basis = a_op.basis
    ident, zero = op_identity(basis), _zero(basis)
    x = x_op(a_op)
    ent = [[ident if r == c else zero for c in range(size)] for r in range(size)]
    r = i - 1
    ent[r][r] = a_op
    ent[r][r + 1] = x
    ent[r + 1][r] = -q0 * x
    ent[r + 1][r + 1] = a_op.adjoint()
    return OperatorMatrix(ent)


def build_H(n, basis, q0):
    """``(n+1) x (n+1)`` product of the ``n`` blocks, ``i = 1`` leftmost."""
    check_q(q0)
    if basis.n_modes < n:
        raise BasisMismatch(f"H with {n} oscillators needs {n} modes, basis has {basis.n_modes}")
    H = None
    for i in range(1, n + 1):
        M = block_unit(i, op_annihilator(basis, i, q0), n + 1, q0)
        H = M if H is None else H @ M
    return H


def first_row_generators(H):
    """Entries ``H[1, k]`` for ``k = 1..n`` (the last column entry is excluded)."""
    return [H[0, k] for k in range(H.size - 1)]


def q_weight(n, q0):
    """Diagonal weights ``(1, q^2, ..., q^{2n})`` of the weighted unitarity."""
    return [q0 ** (2 * r) for r in range(n + 1)]


def pw_mode(basis, k, q0):
    """``A_k = (1-q^2)^{-1/2} x_1 ... x_{k-1} a_k``."""
    check_q(q0)
    if not 1 <= k <= basis.n_modes:
        raise ParameterOutOfRange(f"mode {k} outside 1..{basis.n_modes}")
    op = op_annihilator(basis, k, q0)
    for i in range(k - 1, 0, -1):
        op = x_op(op_annihilator(basis, i, q0)) @ op
    return op * (1.0 - q0 * q0) ** -0.5


class XOps(NamedTuple):
    x: list
    X: list
    X_inv: list
    X_sq: list


def _restrict_diag(padded_op, basis):
    """Diagonal of an operator on the ``dim+1`` basis, restricted to ``basis``."""
    occ = basis.occupations
    pidx = (occ * (basis.dim + 1) ** np.arange(basis.n_modes)).sum(axis=1)
    d = padded_op.diagonal()[pidx]
    return FockOp(basis, sp.diags(d, format="csr"))


def x_ops(basis, q0):
    """``x_i``, ``X_i``, ``X_i^{-1}`` and ``X_i^2`` for every mode.

    ``X_i^2 = A_i A_i^+ - A_i^+ A_i`` needs ``A_i^+`` one level above the
    cutoff, so it is formed on a basis padded by one level per mode and the
    (diagonal) result restricted back.  The truncated boundary column is thus
    never used.
    """
    check_q(q0)
    padded = FockBasis(basis.n_modes, basis.dim + 1)
    xs, Xs, Xinv, Xsq = [], [], [], []
    for i in range(1, basis.n_modes + 1):
        xs.append(x_op(op_annihilator(basis, i, q0)))
        A = pw_mode(padded, i, q0)
        Ad = A.adjoint()
        sq = _restrict_diag(A @ Ad - Ad @ A, basis)
        Xsq.append(sq)
        Xs.append(diag_function(sq, "sqrt"))
        Xinv.append(diag_function(sq, "inverse_sqrt"))
    return XOps(xs, Xs, Xinv, Xsq)


def paper_from_pw(A_ops, k, q0, xs=None, literal_product=False):
    """Recover ``a_k`` from the covariant modes.

    ``a_1 = (1-q^2)^{1/2} A_1`` and ``a_k = (1-q^2)^{1/2} X_{k-1}^{-1} A_k``.
    Since ``X_{k-1} = x_1 ... x_{k-1}`` this inverts ``pw_mode`` exactly.
    With ``literal_product=True`` the factor is ``X_1^{-1} ... X_{k-1}^{-1}``
    instead; that agrees for ``k <= 2`` only.
    """
    check_q(q0)
    A = A_ops[k - 1]
    if xs is None:
        xs = x_ops(A.basis, q0)
    op = A
    if k >= 2:
        if literal_product:
            for i in range(k - 1, 0, -1):
                op = xs.X_inv[i - 1] @ op
        else:
            op = xs.X_inv[k - 2] @ op
    return op * (1.0 - q0 * q0) ** 0.5


def bm_from_paper(basis, i, q0):
    """``a_q = (1-q^2)^{-1/2} q^{-N_i/2} a_i``."""
    check_q(q0)
    half = diag_function(op_K(basis, i, q0), "power", -0.5)
    return (half @ op_annihilator(basis, i, q0)) * (1.0 - q0 * q0) ** -0.5


def q_integer(n, q0):
    """Symmetric q-number ``(q^n - q^-n) / (q - q^-1)``."""
    return (q0 ** n - q0 ** (-n)) / (q0 - 1.0 / q0)


# ---------------------------------------------------------------------------
# symbolic counterparts (mode presentation, x_i realised as K_i)
# ---------------------------------------------------------------------------

def build_H_symbolic(n, pres=None):
    """H as a list-of-lists of NCPoly with ``x_i -> K_i``.

    ``x_i^2 = 1 - a_i^+ a_i`` reduces to ``K_i^2`` and both are positive and
    diagonal in the Fock representation, so ``x_i = K_i``.
    """
    pres = pres or paper(n)
    m = n + 1
    one, zero = pres.one(), pres.zero()
    H = None
    for i in range(1, n + 1):
        M = [[one if r == c else zero for c in range(m)] for r in range(m)]
        r = i - 1
        M[r][r] = pres.a(i)
        M[r][r + 1] = pres.K(i)
        M[r + 1][r] = -q * pres.K(i)
        M[r + 1][r + 1] = pres.ad(i)
        H = M if H is None else sym_matmul(H, M)
    return H


def sym_matmul(L, R):
    m = len(L)
    return [[sum((L[r][k] * R[k][c] for k in range(1, m)), L[r][0] * R[0][c])
             for c in range(m)] for r in range(m)]


def sym_dagger(M):
    m = len(M)
    return [[adjoint_sym(M[c][r]) for c in range(m)] for r in range(m)]


def pw_image(k, pres):
    """Paper-presentation image of ``(1-q^2)^{1/2} A_k``: ``K_1 ... K_{k-1} a_k``."""
    word = tuple(Gen(i, Kind.K) for i in range(1, k)) + (Gen(k, Kind.ANN),)
    return NCPoly(pres, {word: ONE})


class Realization:
    """Lazily built, cached operators for one ``(basis, q0)``."""

    def __init__(self, basis, q0):
        check_q(q0)
        self.basis, self.q0 = basis, q0
        self._cache = {}

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def I(self):
        return self._get("I", lambda: op_identity(self.basis))

    def a(self, i):
        return self._get(("a", i), lambda: op_annihilator(self.basis, i, self.q0))

    def ad(self, i):
        return self._get(("ad", i), lambda: self.a(i).adjoint())

    def N(self, i):
        return self._get(("N", i), lambda: op_number(self.basis, i))

    def K(self, i):
        return self._get(("K", i), lambda: op_K(self.basis, i, self.q0))

    def x(self, i):
        return self._get(("x", i), lambda: x_op(self.a(i)))

    def A(self, k):
        return self._get(("A", k), lambda: pw_mode(self.basis, k, self.q0))

    def Ad(self, k):
        return self._get(("Ad", k), lambda: self.A(k).adjoint())

    @property
    def xs(self):
        return self._get("xs", lambda: x_ops(self.basis, self.q0))

    def X(self, k):
        return self.xs.X[k - 1]

    def X_inv(self, k):
        return self.xs.X_inv[k - 1]

    def X_sq(self, k):
        return self.xs.X_sq[k - 1]

    def rec(self, k):
        """``a_k`` reconstructed from the covariant modes."""
        A_ops = [self.A(j) for j in range(1, self.basis.n_modes + 1)]
        return self._get(("rec", k), lambda: paper_from_pw(A_ops, k, self.q0, self.xs))

    def aq(self, i):
        return self._get(("aq", i), lambda: bm_from_paper(self.basis, i, self.q0))

    def H(self, n):
        return self._get(("H", n), lambda: build_H(n, self.basis, self.q0))
