"""
Truncated multimode Fock space representation.

Basis states ``|n_1, ..., n_M>`` with ``0 <= n_i <= D-1`` are flattened with
mode 1 varying fastest: ``index = sum_i n_i * D**(i-1)``.  Operators are real
``scipy.sparse`` CSR matrices wrapped in :class:`FockOp`.

Truncation breaks ladder relations on the top occupation level, so relation
residuals are measured on the *interior*: columns whose occupations all sit
at least ``margin`` below the cutoff (see :func:`interior_residual`).
"""

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import (BasisMismatch, MarginTooLarge, NonPositiveDiagonal,
                     NotDiagonal, ParameterOutOfRange)

__all__ = [
    "FockBasis", "FockOp", "op_annihilator", "op_creator", "op_number", "op_K",
    "op_identity", "op_combine", "diag_function", "eval_poly",
    "interior_residual", "dump_op", "load_op", "check_q",
]

MAX_MODES = 4
MAX_DIM = 16
SOFT_LIMIT = 10 ** 5
DIAG_TOL = 1e-12


def check_q(q0):
    if not (0.0 < q0 < 1.0):
        raise ParameterOutOfRange(f"q must lie in (0,1), got {q0!r}")


@dataclass(frozen=True)
class FockBasis:
    n_modes: int
    dim: int

    def __post_init__(self):
        if self.n_modes < 1:
            raise ParameterOutOfRange("n_modes must be >= 1")
        if self.dim < 2:
            raise ParameterOutOfRange("dim must be >= 2")
        if self.size > SOFT_LIMIT:
            warnings.warn(f"Fock space of dimension {self.size} exceeds {SOFT_LIMIT}", stacklevel=2)

    @classmethod
    def desk(cls, n_modes, dim):
        """Construct with the desk-scale bounds enforced."""
        if not 1 <= n_modes <= MAX_MODES:
            raise ParameterOutOfRange(f"modes must be in 1..{MAX_MODES}")
        if not 2 <= dim <= MAX_DIM:
            raise ParameterOutOfRange(f"dim must be in 2..{MAX_DIM}")
        return cls(n_modes, dim)

    @property
    def size(self):
        return self.dim ** self.n_modes

    @cached_property
    def occupations(self):
        """``(size, n_modes)`` integer array; row ``k`` is the tuple of index ``k``."""
        idx = np.arange(self.size)
        return np.stack([(idx // self.dim ** i) % self.dim for i in range(self.n_modes)], axis=1)

    def index(self, occ):
        if len(occ) != self.n_modes or any(not 0 <= n < self.dim for n in occ):
            raise ValueError(f"occupation {occ!r} outside the basis")
        return sum(n * self.dim ** i for i, n in enumerate(occ))

    def occupation(self, index):
        return tuple(int(v) for v in self.occupations[index])

    def interior(self, margin):
        if margin < 0:
            raise MarginTooLarge("margin must be >= 0")
        if self.dim - margin < 1:
            raise MarginTooLarge(f"margin {margin} leaves no interior at dim {self.dim}")
        return np.flatnonzero((self.occupations <= self.dim - 1 - margin).all(axis=1))

    def embed(self, mode, single):
        """Kronecker-embed a ``dim x dim`` single-mode matrix acting on ``mode``."""
        eye = sp.identity(self.dim, format="csr")
        out = None
        # kron(A, B) makes B's index fastest, so list modes from last to first
        for m in range(self.n_modes, 0, -1):
            f = single if m == mode else eye
            out = f if out is None else sp.kron(out, f, format="csr")
        return sp.csr_matrix(out)


class FockOp:
    """Immutable real sparse operator on a :class:`FockBasis`."""

    __slots__ = ("basis", "mat")

    def __init__(self, basis, mat):
        m = sp.csr_matrix(mat, dtype=float)
        m.eliminate_zeros()
        m.sort_indices()
        m.data.flags.writeable = False
        self.basis = basis
        self.mat = m

    def _check(self, other):
        if not isinstance(other, FockOp):
            raise TypeError(f"expected FockOp, got {type(other).__name__}")
        if other.basis != self.basis:
            raise BasisMismatch(f"{self.basis} vs {other.basis}")

    def __add__(self, other):
        self._check(other)
        return FockOp(self.basis, self.mat + other.mat)

    def __sub__(self, other):
        self._check(other)
        return FockOp(self.basis, self.mat - other.mat)

    def __neg__(self):
        return FockOp(self.basis, -self.mat)

    def __matmul__(self, other):
        self._check(other)
        return FockOp(self.basis, self.mat @ other.mat)

    def __mul__(self, s):
        if isinstance(s, FockOp):
            return NotImplemented
        return FockOp(self.basis, self.mat * float(s))

    __rmul__ = __mul__

    @property
    def T(self):
        return self.adjoint()

    def adjoint(self):
        return FockOp(self.basis, self.mat.T)

    def toarray(self):
        return self.mat.toarray()

    def diagonal(self):
        return self.mat.diagonal()

    def is_diagonal(self, tol=DIAG_TOL):
        off = self.mat - sp.diags(self.mat.diagonal())
        return off.nnz == 0 or np.abs(off.data).max() <= tol

    def column_norms(self):
        return np.sqrt(np.asarray(self.mat.multiply(self.mat).sum(axis=0)).ravel())

    def __repr__(self):
        return f"FockOp(modes={self.basis.n_modes}, dim={self.basis.dim}, nnz={self.mat.nnz})"


def op_identity(basis):
    return FockOp(basis, sp.identity(basis.size, format="csr"))


def _ladder_elements(dim, q0):
    n = np.arange(1, dim)
    return np.sqrt(1.0 - q0 ** (2 * n))


def op_annihilator(basis, i, q0):
    """Lowering operator of mode ``i`` with ``<n-1|a|n> = sqrt(1 - q0**(2n))``."""
    check_q(q0)
    single = sp.diags(_ladder_elements(basis.dim, q0), 1, format="csr")
    return FockOp(basis, basis.embed(i, single))


def op_creator(basis, i, q0):
    return op_annihilator(basis, i, q0).adjoint()


def op_number(basis, i):
    return FockOp(basis, basis.embed(i, sp.diags(np.arange(basis.dim, dtype=float), format="csr")))


def op_K(basis, i, q0):
    """``q0 ** N_i`` as a diagonal operator."""
    check_q(q0)
    vals = np.array([q0 ** n for n in range(basis.dim)])
    return FockOp(basis, basis.embed(i, sp.diags(vals, format="csr")))


def op_combine(kind, *ops, scale=None):
    """Combine operators: ``add``, ``mul`` (left to right), ``scale``, ``adjoint``, ``commutator``."""
    if kind == "add":
        out = ops[0]
        for o in ops[1:]:
            out = out + o
        return out
    if kind == "mul":
        out = ops[0]
        for o in ops[1:]:
            out = out @ o
        return out
    if kind == "scale":
        (op,) = ops
        return op * scale
    if kind == "adjoint":
        (op,) = ops
        return op.adjoint()
    if kind == "commutator":
        x, y = ops
        return x @ y - y @ x
    raise ValueError(f"unknown combination {kind!r}")


def diag_function(op, f, t=None):
    """Entrywise function of a diagonal operator.

    ``f`` is one of ``sqrt``, ``inverse``, ``inverse_sqrt`` or ``power``
    (exponent ``t``).
    """
    if not op.is_diagonal():
        raise NotDiagonal("functional calculus needs a diagonal operator")
    d = op.diagonal()
    if f == "sqrt":
        if (d < 0).any():
            raise NonPositiveDiagonal(f"negative diagonal entry {d.min():.3e}")
        out = np.sqrt(d)
    elif f in ("inverse", "inverse_sqrt") or (f == "power" and t is not None and t < 0):
        if (d <= 0).any():
            raise NonPositiveDiagonal(f"non-positive diagonal entry {d.min():.3e}")
        if f == "inverse":
            out = 1.0 / d
        elif f == "inverse_sqrt":
            out = 1.0 / np.sqrt(d)
        else:
            out = d ** t
    elif f == "power":
        if t is None:
            raise ValueError("power needs an exponent")
        if (d < 0).any() and t != int(t):
            raise NonPositiveDiagonal("fractional power of a negative entry")
        out = d ** t
    else:
        raise ValueError(f"unknown function {f!r}")
    return FockOp(op.basis, sp.diags(out, format="csr"))


def interior_residual(op, margin):
    """Largest column norm of ``op`` over interior basis columns."""
    cols = op.basis.interior(margin)
    norms = op.column_norms()[cols]
    return float(norms.max()) if norms.size else 0.0


# ---------------------------------------------------------------------------
# symbolic -> numeric bridge
# ---------------------------------------------------------------------------

class _GenCache:
    def __init__(self, basis, q0):
        self.basis, self.q0 = basis, q0
        self.cache = {}

    def get(self, g):
        from .ncalg import Kind
        if g in self.cache:
            return self.cache[g]
        b, q0 = self.basis, self.q0
        k = g.kind
        if k is Kind.ANN:
            op = op_annihilator(b, g.mode, q0)
        elif k is Kind.CRE:
            op = op_creator(b, g.mode, q0)
        elif k is Kind.K:
            op = op_K(b, g.mode, q0)
        elif k is Kind.KINV:
            op = diag_function(op_K(b, g.mode, q0), "inverse")
        else:
            from .constructs import pw_mode
            op = pw_mode(b, g.mode, q0)
            if k is Kind.PWCRE:
                op = op.adjoint()
        self.cache[g] = op
        return op


_caches = {}


def eval_poly(p, basis, q0):
    """Evaluate an NCPoly on the truncated Fock space at ``q = q0``."""
    check_q(q0)
    if p.pres.n_modes > basis.n_modes:
        raise BasisMismatch(f"{p.pres} needs {p.pres.n_modes} modes, basis has {basis.n_modes}")
    key = (basis, q0)
    gens = _caches.get(key)
    if gens is None:
        gens = _caches[key] = _GenCache(basis, q0)
    acc = sp.csr_matrix((basis.size, basis.size))
    ident = sp.identity(basis.size, format="csr")
    for w, c in p.items():
        m = ident
        for g in w:
            m = m @ gens.get(g).mat
        acc = acc + c.eval(q0) * m
    return FockOp(basis, acc)


# ---------------------------------------------------------------------------
# text dump
# ---------------------------------------------------------------------------

def dump_op(op, q0, fh):
    """Write ``fockop n_modes D q0`` then ``row col value`` lines in row-major order."""
    fh.write(f"fockop {op.basis.n_modes} {op.basis.dim} {q0!r}\n")
    coo = op.mat.tocoo()
    order = np.lexsort((coo.col, coo.row))
    for k in order:
        fh.write(f"{coo.row[k]} {coo.col[k]} {float(coo.data[k])!r}\n")


def load_op(fh):
    head = fh.readline().split()
    if len(head) != 4 or head[0] != "fockop":
        raise ValueError("missing 'fockop n_modes D q0' header")
    basis = FockBasis(int(head[1]), int(head[2]))
    rows, cols, vals = [], [], []
    for line in fh:
        if line.strip():
            r, c, v = line.split()
            rows.append(int(r))
            cols.append(int(c))
            vals.append(float(v))
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(basis.size, basis.size))
    return FockOp(basis, mat), float(head[3])
