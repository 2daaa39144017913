import io
import math

import numpy as np
import pytest

from qosc.errors import (BasisMismatch, MarginTooLarge, NonPositiveDiagonal, NotDiagonal,
                         ParameterOutOfRange)
from qosc.fockrep import (FockBasis, FockOp, diag_function, dump_op, eval_poly, interior_residual,
                          load_op, op_annihilator, op_combine, op_creator, op_identity, op_K,
                          op_number)
from qosc.ncalg import paper
from qosc.qscalar import q


def q_osc_residual(basis, q0, i=1):
    a = op_annihilator(basis, i, q0)
    ad = a.adjoint()
    return a @ ad - q0 ** 2 * (ad @ a) - (1 - q0 ** 2) * op_identity(basis)


def test_basis_indexing():
    b = FockBasis(3, 4)
    assert b.size == 64
    for k in range(b.size):
        assert b.index(b.occupation(k)) == k
    assert b.index((1, 0, 0)) == 1 and b.index((0, 1, 0)) == 4
    with pytest.raises(ParameterOutOfRange):
        FockBasis.desk(5, 4)
    with pytest.raises(ParameterOutOfRange):
        FockBasis.desk(2, 17)
    with pytest.raises(MarginTooLarge):
        b.interior(4)


def test_annihilator_elements():
    b = FockBasis(1, 4)
    a = op_annihilator(b, 1, 0.5).toarray()
    # oracle: sqrt of the spectrum 1 - q^(2n) of a^+ a
    assert a[0, 1] == pytest.approx(0.8660254, abs=1e-7)
    assert a[1, 2] == pytest.approx(0.9682458, abs=1e-7)
    assert a[0, 1] == math.sqrt(0.75) and a[1, 2] == math.sqrt(0.9375)
    assert not a[:, 0].any()


@pytest.mark.parametrize("q0", [0.0, 1.0, -0.2, 1.5])
def test_q_range(q0):
    with pytest.raises(ParameterOutOfRange, match=r"q must lie in \(0,1\)"):
        op_annihilator(FockBasis(1, 3), 1, q0)


def test_number_and_K():
    b = FockBasis(1, 3)
    assert np.array_equal(op_number(b, 1).diagonal(), [0, 1, 2])
    assert np.allclose(op_K(b, 1, 0.5).diagonal(), [1, 0.5, 0.25], rtol=0, atol=0)
    b = FockBasis(2, 5)
    a, N = op_annihilator(b, 2, 0.4), op_number(b, 2)
    # [N, a] = -a; the entries (n-1) x - n x round, so agreement is to one ulp
    c = op_combine("commutator", N, a) + a
    assert np.all(np.abs(c.mat.data) <= np.spacing(1.0))


def test_combine():
    b = FockBasis(2, 4)
    a1, a2 = op_annihilator(b, 1, 0.5), op_annihilator(b, 2, 0.5)
    assert op_combine("commutator", a1, a2).mat.nnz == 0
    ad = op_combine("adjoint", a1)
    assert np.array_equal(ad.toarray(), a1.toarray().T)
    s = op_combine("scale", op_identity(b), scale=1 - 0.25)
    assert np.array_equal(s.diagonal(), np.full(b.size, 0.75))
    with pytest.raises(BasisMismatch):
        a1 + op_annihilator(FockBasis(2, 5), 1, 0.5)


def test_distinct_modes_commute_exactly():
    b = FockBasis(3, 4)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                for f in (op_annihilator, op_creator, op_K):
                    for g in (op_annihilator, op_creator, op_K):
                        x, y = f(b, i, 0.37), g(b, j, 0.37)
                        assert (x @ y - y @ x).mat.nnz == 0


def test_diag_function():
    b = FockBasis(1, 3)
    K = op_K(b, 1, 0.5)
    assert np.allclose(diag_function(K @ K, "sqrt").diagonal(), K.diagonal(), rtol=1e-15)
    a = op_annihilator(b, 1, 0.5)
    x = diag_function(op_identity(b) - a.adjoint() @ a, "sqrt")
    assert np.allclose(x.diagonal(), [1, 0.5, 0.25], rtol=1e-14)
    with pytest.raises(NotDiagonal):
        diag_function(a, "sqrt")
    with pytest.raises(NonPositiveDiagonal):
        diag_function(a.adjoint() @ a, "inverse")
    assert np.allclose(diag_function(K, "power", -0.5).diagonal(), [1, 2 ** 0.5, 2], rtol=1e-15)


def test_spectrum_of_number_like_operator():
    for q0 in (0.3, 0.5, 0.9):
        b = FockBasis(1, 10)
        a = op_annihilator(b, 1, q0)
        ev = np.linalg.eigvalsh((a.adjoint() @ a).toarray())
        assert np.allclose(np.sort(ev), 1 - q0 ** (2 * np.arange(10)), atol=1e-15)
        assert ev.min() >= 0 and ev.max() < 1


@pytest.mark.parametrize("q0", [0.3, 0.5, 0.9])
@pytest.mark.parametrize("D", [4, 8, 12])
def test_q_oscillator_relation_interior(q0, D):
    b = FockBasis(1, D)
    assert interior_residual(q_osc_residual(b, q0), 1) <= 1e-13
    a = op_annihilator(b, 1, q0)
    K = op_K(b, 1, q0)
    c = op_combine("commutator", a, a.adjoint())
    assert interior_residual(c - (1 - q0 ** 2) * (K @ K), 1) <= 1e-13
    # the interior norm of [a, a^+] is 1 - q^2, attained on the vacuum column
    norms = c.column_norms()[b.interior(1)]
    assert norms.max() == pytest.approx(1 - q0 ** 2, abs=1e-15) and norms.argmax() == 0


@pytest.mark.parametrize("q0,D", [(0.3, 4), (0.5, 8), (0.9, 12), (0.7, 6)])
def test_truncation_defect_closed_form(q0, D):
    # top column n = D-1: a^+ is cut, so a a^+ -> 0 there and the residual is
    # -q^2 (1 - q^(2D-2)) - (1 - q^2) = -(1 - q^(2D))
    b = FockBasis(1, D)
    r = q_osc_residual(b, q0)
    top = r.column_norms()[D - 1]
    assert abs(top - (1 - q0 ** (2 * D))) <= 1e-12
    assert interior_residual(r, 0) == pytest.approx(1 - q0 ** (2 * D), abs=1e-12)


def test_interior_residual_of_zero():
    b = FockBasis(2, 4)
    z = FockOp(b, op_identity(b).mat * 0)
    for m in range(4):
        assert interior_residual(z, m) == 0.0


def test_eval_poly():
    P = paper(2)
    b = FockBasis(2, 5)
    e = eval_poly(P.ad(1) * P.a(1), b, 0.5)
    occ = b.occupations[:, 0]
    assert np.allclose(e.diagonal(), 1 - 0.5 ** (2 * occ), atol=1e-15) and e.is_diagonal(0)
    assert (eval_poly(P.one(), b, 0.5) - op_identity(b)).mat.nnz == 0
    k = eval_poly(q ** -1 * P.Kinv(2), b, 0.5)
    assert np.allclose(k.diagonal(), 2.0 * 2.0 ** b.occupations[:, 1], rtol=1e-15)


def test_dump_round_trip():
    b = FockBasis(2, 3)
    op = op_annihilator(b, 2, 0.3) + 0.5 * op_K(b, 1, 0.3)
    buf = io.StringIO()
    dump_op(op, 0.3, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "fockop 2 3 0.3"
    rows = [tuple(map(int, line.split()[:2])) for line in text.splitlines()[1:]]
    assert rows == sorted(rows)
    back, q0 = load_op(io.StringIO(text))
    assert q0 == 0.3 and back.basis == b
    assert (back - op).mat.nnz == 0


def test_ops_are_immutable():
    op = op_annihilator(FockBasis(1, 3), 1, 0.5)
    with pytest.raises(ValueError):
        op.mat.data[0] = 2.0
