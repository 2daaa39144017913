import random

import pytest

from qosc.errors import PresentationMismatch, StepBudgetExceeded
from qosc.exprs import parse_expr
from qosc.ncalg import (Gen, Kind, NCPoly, adjoint_sym, count_steps, creation_peak, is_normal, nc_mul,
                        normal_form, paper, pw, pw_to_paper, random_word, rewrite_consistency,
                        step_budget, verify_identity)
from qosc.qscalar import ONE, q


@pytest.fixture(scope="module")
def P():
    return paper(3)


@pytest.fixture(scope="module")
def W():
    return pw(3)


def nf_text(text, pres):
    return str(normal_form(parse_expr(text, pres)))


def test_nc_mul_examples(P, W):
    p = nc_mul(P.a(1), P.ad(1))
    assert p.terms == {(Gen(1, Kind.ANN), Gen(1, Kind.CRE)): ONE}
    p = nc_mul(q * W.A(1), W.A(2))
    assert p.terms == {(Gen(1, Kind.PWANN), Gen(2, Kind.PWANN)): q}
    assert nc_mul(P.a(1) + P.a(2), P.one()) == P.a(1) + P.a(2)
    with pytest.raises(PresentationMismatch):
        nc_mul(P.a(1), W.A(1))


def test_normal_form_examples(P, W):
    assert normal_form(P.a(1) * P.ad(1)) == 1 - q ** 2 * P.K(1) * P.K(1)
    assert normal_form(P.ad(1) * P.a(1)) == 1 - P.K(1) * P.K(1)
    assert normal_form(W.A(2) * W.A(1)) == q ** -1 * W.A(1) * W.A(2)
    assert normal_form(W.A(2) * W.Ad(2)) == q ** 2 * W.Ad(2) * W.A(2) + 1 + (q ** 2 - 1) * W.Ad(1) * W.A(1)
    assert normal_form(W.A(1) * W.Ad(1)) == q ** 2 * W.Ad(1) * W.A(1) + 1


def test_formatted_normal_forms(P, W):
    assert nf_text("a1 * a1^+", P) == "1 - q^2 * K1^2"
    assert nf_text("A2 * A1", W) == "q^-1 * A1 * A2"


def test_critical_pair_overlap(P):
    # a a^+ a reduces to a - q^2 K^2 a whichever rule fires first
    w = P.a(1) * P.ad(1) * P.a(1)
    assert normal_form(w) == P.a(1) - q ** 2 * P.K(1) * P.K(1) * P.a(1)
    for seed in range(20):
        assert normal_form(w, random.Random(seed)) == normal_form(w)


def test_k_rules(P):
    assert normal_form(P.K(1) * P.Kinv(1)) == P.one()
    assert normal_form(P.Kinv(1) * P.K(1)) == P.one()
    assert normal_form(P.a(1) * P.K(1)) == q * P.K(1) * P.a(1)
    assert normal_form(P.ad(1) * P.K(1)) == q ** -1 * P.K(1) * P.ad(1)
    assert normal_form(P.a(1) * P.Kinv(1)) == q ** -1 * P.Kinv(1) * P.a(1)


def test_adjoint_examples(P):
    assert adjoint_sym(P.a(1)) == P.ad(1)
    assert adjoint_sym(P.a(1) * P.a(2)) == P.ad(2) * P.ad(1)
    assert adjoint_sym(q * P.K(1)) == q * P.K(1)


def test_verify_identity_examples(P, W):
    a, ad = P.a(1), P.ad(1)
    assert verify_identity(a * ad - q ** 2 * ad * a, P.scalar(1 - q ** 2)).proved
    assert verify_identity(a * ad - ad * a, (1 - q ** 2) * P.K(1) * P.K(1)).proved
    v = verify_identity(W.A(1) * W.A(2), q ** -1 * W.A(2) * W.A(1))
    assert not v.proved and v.witness == (Gen(1, Kind.PWANN), Gen(2, Kind.PWANN))
    assert str(v).startswith("refuted(")
    with pytest.raises(PresentationMismatch):
        verify_identity(P.a(1), W.A(1))


def test_pw_pair_relations(W):
    for i in range(1, 4):
        for j in range(1, 4):
            if i < j:
                assert verify_identity(W.A(i) * W.A(j), q * W.A(j) * W.A(i))
            if i != j:
                assert verify_identity(W.A(i) * W.Ad(j), q * W.Ad(j) * W.A(i))
            if i > j:
                assert verify_identity(W.Ad(i) * W.Ad(j), q * W.Ad(j) * W.Ad(i))


def test_pw_pullback_matches_paper_rules(W):
    # P-W relations remain identities after substituting A_k -> K_1..K_{k-1} a_k
    P = paper(3)
    for i in range(1, 4):
        rhs = W.one()
        for k in range(1, i):
            rhs = rhs + (q ** 2 - 1) * W.Ad(k) * W.A(k)
        lhs = W.A(i) * W.Ad(i) - q ** 2 * W.Ad(i) * W.A(i)
        assert verify_identity(pw_to_paper(lhs, P), pw_to_paper(rhs, P))
    # an extra creator in the sum term breaks the identity
    bad = W.A(2) * W.Ad(2) - q ** 2 * W.Ad(2) * W.A(2) - 1 - (q ** 2 - 1) * W.Ad(1) * W.Ad(1) * W.A(1)
    assert not normal_form(bad).is_zero()


@pytest.mark.parametrize("make", [paper, pw])
def test_rewrite_consistency(make):
    res = rewrite_consistency(make(3), seed=1, max_len=4, trials=100)
    assert res.consistent and res.counterexample is None


def test_rewrite_consistency_empty_word():
    res = rewrite_consistency(paper(1), seed=0, max_len=0, trials=5)
    assert res.consistent


@pytest.mark.parametrize("make", [paper, pw])
def test_star_compatibility(make):
    pres = make(3)
    rng = random.Random(5)
    for _ in range(200):
        p = NCPoly(pres, {random_word(pres, rng, 5): q ** rng.randint(-2, 2)})
        assert normal_form(adjoint_sym(normal_form(p))) == normal_form(adjoint_sym(p))


def test_cross_mode_freeness(P):
    gens = P.generators()
    for g in gens:
        for h in gens:
            if g.mode != h.mode:
                gh = NCPoly(P, {(g, h): ONE})
                hg = NCPoly(P, {(h, g): ONE})
                assert normal_form(gh) == normal_form(hg)


@pytest.mark.parametrize("make", [paper, pw])
def test_normal_forms_are_irreducible(make):
    pres = make(3)
    rng = random.Random(9)
    for _ in range(200):
        w = random_word(pres, rng, 6)
        for w2 in normal_form(NCPoly(pres, {w: ONE})).terms:
            assert is_normal(pres, w2)


@pytest.mark.parametrize("make", [paper, pw])
@pytest.mark.parametrize("n", [1, 3, 4])
def test_step_budget_bounds_rewrite_chains(make, n):
    # the measured chain depth stays far inside the cubic budget
    pres = make(n)
    rng = random.Random(n)
    for _ in range(300):
        w = random_word(pres, rng, 8)
        _, depth = count_steps(pres, w, random.Random(0))
        assert depth <= step_budget(len(w), n)


def test_step_budget_enforced(P):
    from qosc.ncalg import _reduce_word
    w = (P.a(1) ** 3 * P.ad(1) ** 3).words()[0]
    with pytest.raises(StepBudgetExceeded):
        _reduce_word(P, w, None, 1)


def test_pw_to_paper_parity(W):
    P = paper(3)
    assert pw_to_paper(W.A(2), P) == P.K(1) * P.a(2)
    assert pw_to_paper(W.A(2) * W.Ad(2), P) == (1 - q ** 2) ** -1 * P.K(1) * P.a(2) * P.ad(2) * P.K(1)
    with pytest.raises(ValueError):
        pw_to_paper(W.A(1) + W.one(), P)


def test_creation_peak(P):
    w = (P.ad(1) * P.ad(1) * P.a(1) * P.ad(2)).words()[0]
    assert creation_peak(w) == 1
    assert creation_peak((P.ad(1) * P.ad(1)).words()[0]) == 2
    assert creation_peak(()) == 0


def test_graded_lex_iteration(P):
    p = P.a(1) * P.a(2) + P.one() + P.K(1)
    lens = [len(w) for w, _ in p.items()]
    assert lens == sorted(lens)
