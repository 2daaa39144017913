"""
Relation suites, dual symbolic/numeric execution, reports and limit sweeps.

Each :class:`Relation` carries

* ``symbolic``: a callable returning ``(lhs, rhs)`` NCPoly pairs that must all
  be identities (None for numeric-only relations), and
* ``numeric``: a callable taking a :class:`~qosc.constructs.Realization` and
  returning the operators ``lhs - rhs`` whose interior residual is measured.

The two routes share no code beyond the generator names: the symbolic side
reduces words with the rewrite rules, the numeric side multiplies truncated
matrices built from matrix elements.
"""

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from . import __version__
from .constructs import (OperatorMatrix, Realization, build_H_symbolic, pw_image, q_integer,
                         q_weight, sym_dagger, sym_matmul)
from .errors import ParameterOutOfRange, UnknownSuite
from .fockrep import (FockBasis, FockOp, check_q, diag_function, eval_poly,
                      interior_residual)
from .ncalg import (NCPoly, adjoint_sym, creation_peak, normal_form, paper, pw, pw_to_paper,
                    random_word, verify_identity)
from .qscalar import ONE, q

__all__ = [
    "Relation", "RelationSuite", "Params", "Record", "Report", "SUITES",
    "builtin_suite", "run_suite", "limit_sweep", "cross_check", "expected_count",
    "DEFAULT_THRESHOLD",
]

DEFAULT_THRESHOLD = 1e-10
CROSS_CHECK_THRESHOLD = 1e-9


@dataclass(frozen=True)
class Relation:
    name: str
    numeric: Callable
    symbolic: Optional[Callable] = None
    margin: int = 1
    notes: str = ""


@dataclass(frozen=True)
class RelationSuite:
    id: str
    relations: tuple
    flags: tuple = ()

    def __post_init__(self):
        names = [r.name for r in self.relations]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate relation names in suite {self.id}")

    def __len__(self):
        return len(self.relations)

    def names(self):
        return [r.name for r in self.relations]


@dataclass(frozen=True)
class Params:
    q: float = 0.5
    modes: int = 2
    dim: int = 8
    margin: Optional[int] = None
    seed: int = 42
    tol: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        check_q(self.q)
        if self.tol <= 0:
            raise ParameterOutOfRange("tol must be positive")


@dataclass
class Record:
    name: str
    symbolic: str
    residual: Optional[float]
    threshold: float
    passed: bool
    notes: str = ""

    def to_dict(self):
        return {"name": self.name, "symbolic": self.symbolic, "residual": self.residual,
                "threshold": self.threshold, "pass": self.passed, "notes": self.notes}


@dataclass
class Report:
    suite: str
    params: Params
    relations: list
    flags: list = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self):
        return all(r.passed for r in self.relations)

    @property
    def max_residual(self):
        vals = [r.residual for r in self.relations if r.residual is not None]
        return max(vals, default=0.0)

    def record(self, name):
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self):
        p = self.params
        return {
            "suite": self.suite,
            "params": {"q": p.q, "modes": p.modes, "dim": p.dim, "margin": p.margin, "seed": p.seed},
            "relations": [r.to_dict() for r in sorted(self.relations, key=lambda r: r.name)],
            "flags": list(self.flags),
            "version": self.version,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self):
        p = self.params
        lines = [f"suite {self.suite}  q={p.q} modes={p.modes} dim={p.dim} "
                 f"margin={'default' if p.margin is None else p.margin} seed={p.seed}"]
        width = max((len(r.name) for r in self.relations), default=4)
        for r in sorted(self.relations, key=lambda r: r.name):
            res = "error" if r.residual is None else f"{r.residual:.3e}"
            mark = "PASS" if r.passed else "FAIL"
            line = f"  {mark}  {r.name:<{width}}  symbolic={r.symbolic:<8} residual={res}"
            if r.notes:
                line += f"  # {r.notes}"
            lines.append(line)
        for f in self.flags:
            lines.append(f"  flag: {f}")
        n_pass = sum(r.passed for r in self.relations)
        thr = sorted({r.threshold for r in self.relations}) or [p.tol]
        lines.append(f"  {n_pass}/{len(self.relations)} passed (threshold {', '.join(f'{t:g}' for t in thr)}), "
                     f"version {self.version}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# suite builders
# ---------------------------------------------------------------------------

def _comm(x, y):
    return x @ y - y @ x


def _su_q2(n):
    P = paper(1)
    a, ad, b = P.a(1), P.ad(1), P.K(1)
    note = "b realised as x = (1 - a^+ a)^(1/2); symbolically x = K1"

    def num(f):
        return lambda R: [f(R.a(1), R.ad(1), R.x(1), R.x(1).adjoint(), R.I, R.q0)]

    rels = [
        Relation("a_b_eq_q_b_a", num(lambda a, ad, b, bd, I, q0: a @ b - q0 * (b @ a)),
                 lambda: [(a * b, q * b * a)], notes=note),
        Relation("a_bstar_eq_q_bstar_a", num(lambda a, ad, b, bd, I, q0: a @ bd - q0 * (bd @ a)),
                 lambda: [(a * b, q * b * a)], notes=note),
        Relation("b_bstar_eq_bstar_b", num(lambda a, ad, b, bd, I, q0: b @ bd - bd @ b),
                 lambda: [(b * b, b * b)]),
        Relation("a_astar_plus_q2_b_bstar_eq_1",
                 num(lambda a, ad, b, bd, I, q0: a @ ad + q0 ** 2 * (b @ bd) - I),
                 lambda: [(a * ad + q ** 2 * b * b, P.one())]),
        Relation("astar_a_plus_b_bstar_eq_1", num(lambda a, ad, b, bd, I, q0: ad @ a + b @ bd - I),
                 lambda: [(ad * a + b * b, P.one())]),
        Relation("q_oscillator_commutator",
                 num(lambda a, ad, b, bd, I, q0: a @ ad - q0 ** 2 * (ad @ a) - (1 - q0 ** 2) * I),
                 lambda: [(a * ad - q ** 2 * ad * a, P.scalar(1 - q ** 2))]),
    ]
    return RelationSuite("su_q2", tuple(rels))


def _paper_modes(n):
    P = paper(n)
    rels = []
    for i in range(1, n + 1):
        rels += [
            Relation(f"number_spectrum_{i}",
                     lambda R, i=i: [R.ad(i) @ R.a(i) - (R.I - R.K(i) @ R.K(i))],
                     lambda i=i: [(P.ad(i) * P.a(i), 1 - P.K(i) * P.K(i))]),
            Relation(f"number_lowers_{i}",
                     lambda R, i=i: [_comm(R.N(i), R.a(i)) + R.a(i)],
                     lambda i=i: [(P.K(i) * P.a(i), q ** -1 * P.a(i) * P.K(i))],
                     notes="symbolic form: K a K^-1 = q^-1 a"),
            Relation(f"number_raises_{i}",
                     lambda R, i=i: [_comm(R.N(i), R.ad(i)) - R.ad(i)],
                     lambda i=i: [(P.K(i) * P.ad(i), q * P.ad(i) * P.K(i))],
                     notes="symbolic form: K a^+ K^-1 = q a^+"),
        ]
    for i, j in combinations(range(1, n + 1), 2):
        rels += [
            Relation(f"ann_commute_{i}{j}", lambda R, i=i, j=j: [_comm(R.a(i), R.a(j))],
                     lambda i=i, j=j: [(P.a(i) * P.a(j), P.a(j) * P.a(i))]),
            Relation(f"cre_commute_{i}{j}", lambda R, i=i, j=j: [_comm(R.ad(i), R.ad(j))],
                     lambda i=i, j=j: [(P.ad(i) * P.ad(j), P.ad(j) * P.ad(i))]),
        ]
    rels += _mode_relations(n, P, "", lambda R, k: R.a(k), lambda k: P.a(k))
    return RelationSuite("paper_modes", tuple(rels))


def _mode_relations(n, P, prefix, num_a, sym_a):
    """Commutators with creators and number operators, for any realisation of ``a_k``."""
    rels = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d = int(i == j)

            def ann_cre(R, i=i, j=j, d=d):
                ai, aj = num_a(R, i), num_a(R, j)
                return [_comm(ai, aj.adjoint()) - d * (1 - R.q0 ** 2) * (R.K(i) @ R.K(i))]

            def ann_cre_sym(i=i, j=j, d=d):
                ai, ajd = sym_a(i), _star(sym_a(j))
                return [(ai * ajd - ajd * ai, d * (1 - q ** 2) * P.K(i) * P.K(i))]

            def ann_num(R, i=i, j=j, d=d):
                ai = num_a(R, i)
                return [_comm(ai, R.N(j)) - d * ai]

            def ann_num_sym(i=i, j=j, d=d):
                ai = sym_a(i)
                return [(ai * P.K(j), q ** d * P.K(j) * ai)]

            def cre_num(R, i=i, j=j, d=d):
                aid = num_a(R, i).adjoint()
                return [_comm(aid, R.N(j)) + d * aid]

            def cre_num_sym(i=i, j=j, d=d):
                aid = _star(sym_a(i))
                return [(aid * P.K(j), q ** -d * P.K(j) * aid)]

            rels += [
                Relation(f"{prefix}ann_cre_{i}{j}", ann_cre, ann_cre_sym),
                Relation(f"{prefix}ann_number_{i}{j}", ann_num, ann_num_sym,
                         notes="symbolic form: a_i K_j = q^delta K_j a_i"),
                Relation(f"{prefix}cre_number_{i}{j}", cre_num, cre_num_sym,
                         notes="symbolic form: a_i^+ K_j = q^-delta K_j a_i^+"),
            ]
    return rels


def _star(p):
    return adjoint_sym(p)


def _bm(n):
    P = paper(n)
    rels = []
    for i in range(1, n + 1):
        a, ad, Ki = P.a(i), P.ad(i), P.Kinv(i)

        def comm(R, i=i):
            aq = R.aq(i)
            return [aq @ aq.adjoint() - R.q0 * (aq.adjoint() @ aq) - _diag_inv(R.K(i))]

        def spectrum(R, i=i):
            aq = R.aq(i)
            occ = R.basis.occupations[:, i - 1]
            target = _diag(R.basis, [q_integer(int(m), R.q0) for m in occ])
            return [aq.adjoint() @ aq - target]

        rels += [
            Relation(f"bm_commutation_{i}", comm,
                     lambda a=a, ad=ad, Ki=Ki: [(Ki * a * ad - q * ad * Ki * a, (1 - q ** 2) * Ki)],
                     notes="symbolic form multiplies by (1-q^2) and uses K^-1/2 (a a^+) K^-1/2 = K^-1 a a^+"),
            Relation(f"bm_spectrum_{i}", spectrum,
                     lambda a=a, ad=ad, Ki=Ki, i=i: [
                         ((1 - q ** 2).inverse() * ad * Ki * a,
                          (q - q ** -1).inverse() * (P.K(i) - Ki))],
                     notes="a_q^+ a_q = [N] with symmetric q-integers"),
        ]
    return RelationSuite("bm", tuple(rels))


def _diag(basis, values):
    return FockOp(basis, sp.diags(np.asarray(values, dtype=float), format="csr"))


def _diag_inv(op):
    return diag_function(op, "inverse")


def _pw_pairs(lhs, rhs, n):
    """Identity in the P-W presentation and its pull-back to the mode oscillators."""
    return [(lhs, rhs), (pw_to_paper(lhs, paper(n)), pw_to_paper(rhs, paper(n)))]


def _pw(n):
    W = pw(n)
    rels = []
    for i, j in combinations(range(1, n + 1), 2):
        rels += [
            Relation(f"pw_ann_ann_{i}{j}",
                     lambda R, i=i, j=j: [R.A(i) @ R.A(j) - R.q0 * (R.A(j) @ R.A(i))],
                     lambda i=i, j=j: _pw_pairs(W.A(i) * W.A(j), q * W.A(j) * W.A(i), n)),
            Relation(f"pw_ann_cre_{i}{j}",
                     lambda R, i=i, j=j: [R.A(i) @ R.Ad(j) - R.q0 * (R.Ad(j) @ R.A(i)),
                                          R.A(j) @ R.Ad(i) - R.q0 * (R.Ad(i) @ R.A(j))],
                     lambda i=i, j=j: _pw_pairs(W.A(i) * W.Ad(j), q * W.Ad(j) * W.A(i), n)
                     + _pw_pairs(W.A(j) * W.Ad(i), q * W.Ad(i) * W.A(j), n),
                     notes="both orientations i<j and j>i checked"),
            Relation(f"pw_cre_cre_{j}{i}",
                     lambda R, i=i, j=j: [R.Ad(j) @ R.Ad(i) - R.q0 * (R.Ad(i) @ R.Ad(j))],
                     lambda i=i, j=j: _pw_pairs(W.Ad(j) * W.Ad(i), q * W.Ad(i) * W.Ad(j), n)),
        ]
    for i in range(1, n + 1):
        def quad(R, i=i):
            acc = R.A(i) @ R.Ad(i) - R.q0 ** 2 * (R.Ad(i) @ R.A(i)) - R.I
            for k in range(1, i):
                acc = acc - (R.q0 ** 2 - 1) * (R.Ad(k) @ R.A(k))
            return [acc]

        def quad_sym(i=i):
            rhs = W.one()
            for k in range(1, i):
                rhs = rhs + (q ** 2 - 1) * W.Ad(k) * W.A(k)
            return _pw_pairs(W.A(i) * W.Ad(i) - q ** 2 * W.Ad(i) * W.A(i), rhs, n)

        rels.append(Relation(f"pw_quadratic_{i}", quad, quad_sym,
                             notes="sum over k < i of A_k^+ A_k"))
    flags = ("pw_quadratic_sum=A_k^+ A_k",)
    return RelationSuite("pw", tuple(rels), flags)


def _aux_X(n):
    W = pw(n)
    P = paper(n)
    X2 = W.A(1) * W.Ad(1) - W.Ad(1) * W.A(1)
    a1, a1d, K1, K1i = P.a(1), P.ad(1), P.K(1), P.Kinv(1)
    xnote = "symbolic: X realised as K1 (see X1_squared lemma), A1 as a1 up to scale"

    def r(name, num, sym, notes=""):
        return Relation(name, num, sym, notes=notes)

    rels = [
        r("aux_A1_X2", lambda R: [R.A(1) @ R.X_sq(1) - R.q0 ** 2 * (R.X_sq(1) @ R.A(1))],
          lambda: _pw_pairs(W.A(1) * X2, q ** 2 * X2 * W.A(1), n)),
        r("aux_A1d_X2", lambda R: [R.Ad(1) @ R.X_sq(1) - R.q0 ** -2 * (R.X_sq(1) @ R.Ad(1))],
          lambda: _pw_pairs(W.Ad(1) * X2, q ** -2 * X2 * W.Ad(1), n)),
        r("aux_A1_X", lambda R: [R.A(1) @ R.X(1) - R.q0 * (R.X(1) @ R.A(1))],
          lambda: [(a1 * K1, q * K1 * a1)], xnote),
        r("aux_A1_Xinv", lambda R: [R.A(1) @ R.X_inv(1) - R.q0 ** -1 * (R.X_inv(1) @ R.A(1))],
          lambda: [(a1 * K1i, q ** -1 * K1i * a1)], xnote),
        r("aux_A1d_X", lambda R: [R.Ad(1) @ R.X(1) - R.q0 ** -1 * (R.X(1) @ R.Ad(1))],
          lambda: [(a1d * K1, q ** -1 * K1 * a1d)],
          "derived form A1^+ X = q^-1 X A1^+; the form X A1^+ = q X A1^+ is vacuous"),
        r("aux_A1d_Xinv", lambda R: [R.Ad(1) @ R.X_inv(1) - R.q0 * (R.X_inv(1) @ R.Ad(1))],
          lambda: [(a1d * K1i, q * K1i * a1d)],
          "derived form A1^+ X^-1 = q X^-1 A1^+; the form X^-1 A1^+ = q^-1 X^-1 A1^+ is vacuous"),
    ]
    if n >= 2:
        rels += [
            r("aux_A2_X2", lambda R: [_comm(R.A(2), R.X_sq(1))],
              lambda: _pw_pairs(W.A(2) * X2, X2 * W.A(2), n)),
            r("aux_A2d_X2", lambda R: [_comm(R.Ad(2), R.X_sq(1))],
              lambda: _pw_pairs(W.Ad(2) * X2, X2 * W.Ad(2), n)),
        ]
    for k in range(1, n + 1):
        def lemma(R, k=k):
            occ = R.basis.occupations[:, :k].sum(axis=1)
            return [R.X_sq(k) - _diag(R.basis, R.q0 ** (2.0 * occ))]

        def lemma_sym(k=k):
            target = P.one()
            for i in range(1, k + 1):
                target = target * P.K(i) * P.K(i)
            lhs = W.A(k) * W.Ad(k) - W.Ad(k) * W.A(k)
            return [(pw_to_paper(lhs, P), target)]

        rels.append(r(f"X{k}_squared_is_q_power", lemma, lemma_sym,
                      "X_k^2 = q^(2(N_1+...+N_k)); oracle is direct diagonal assembly"))
    flags = ("aux_fourth_line=derived form A1^+ X^(+-1) = q^(-+1) X^(+-1) A1^+",
             "X_construction=commutator on a basis padded by one level, restricted")
    return RelationSuite("aux_X", tuple(rels), flags)


def _cpqn_matrix(n):
    P = paper(n)
    weights = [q ** (2 * r) for r in range(n + 1)]

    def sym_diag(vals):
        return [[P.scalar(vals[r]) if r == c else P.zero() for c in range(n + 1)] for r in range(n + 1)]

    def sym_pairs(M, T):
        return [(M[r][c], T[r][c]) for r in range(n + 1) for c in range(n + 1)]

    def unit_right(R):
        H = R.H(n)
        Wm = OperatorMatrix.scalar_diag(R.basis, q_weight(n, R.q0))
        return [e for row in (H @ Wm @ H.dagger() - Wm).entries for e in row]

    def unit_left(R):
        H = R.H(n)
        Wi = OperatorMatrix.scalar_diag(R.basis, [1 / w for w in q_weight(n, R.q0)])
        return [e for row in (H.dagger() @ Wi @ H - Wi).entries for e in row]

    def unit_right_sym():
        H = build_H_symbolic(n, P)
        Wm = sym_diag(weights)
        return sym_pairs(sym_matmul(sym_matmul(H, Wm), sym_dagger(H)), Wm)

    def unit_left_sym():
        H = build_H_symbolic(n, P)
        Wi = sym_diag([w.inverse() for w in weights])
        return sym_pairs(sym_matmul(sym_matmul(sym_dagger(H), Wi), H), Wi)

    wnote = "weighted unitarity with W = diag(1, q^2, ..., q^(2n)); reduces to the SU_q(2) relations per block"
    rels = [
        Relation("H_weighted_unitary_right", unit_right, unit_right_sym, notes=wnote),
        Relation("H_weighted_unitary_left", unit_left, unit_left_sym, notes=wnote),
    ]
    for k in range(1, n + 1):
        rels.append(Relation(
            f"first_row_{k}",
            lambda R, k=k: [R.H(n)[0, k - 1] - (1 - R.q0 ** 2) ** 0.5 * R.A(k)],
            lambda k=k: [(build_H_symbolic(n, P)[0][k - 1], pw_image(k, P))],
            notes="H[1,k] = (1-q^2)^(1/2) A_k"))

    def last(R):
        acc = R.I
        for i in range(1, n + 1):
            acc = acc @ R.x(i)
        return [R.H(n)[0, n] - acc]

    def last_sym():
        acc = P.one()
        for i in range(1, n + 1):
            acc = acc * P.K(i)
        return [(build_H_symbolic(n, P)[0][n], acc)]

    rels.append(Relation("first_row_last", last, last_sym, notes="H[1,n+1] = x_1...x_n, not a covariant mode"))
    flags = ("H_factor_order=i1_leftmost", "H_size=(n+1)x(n+1)",
             "H_unitarity=weighted, W=diag(q^(2r)), r=0..n",
             "symbolic_x=K (x_i^2 = 1 - a_i^+ a_i reduces to K_i^2)")
    return RelationSuite("cpqn_matrix", tuple(rels), flags)


def _transform_invariance(n):
    P = paper(n)

    def rec_sym(k):
        inv = P.one()
        for i in range(1, k):
            inv = inv * P.Kinv(i)
        return inv * pw_image(k, P)

    rels = []
    for k in range(1, n + 1):
        rels.append(Relation(f"round_trip_{k}", lambda R, k=k: [R.rec(k) - R.a(k)],
                             lambda k=k: [(rec_sym(k), P.a(k))],
                             notes="a_k = (1-q^2)^(1/2) X_(k-1)^-1 A_k"))
    for i, j in combinations(range(1, n + 1), 2):
        rels += [
            Relation(f"rec_ann_commute_{i}{j}", lambda R, i=i, j=j: [_comm(R.rec(i), R.rec(j))],
                     lambda i=i, j=j: [(rec_sym(i) * rec_sym(j), rec_sym(j) * rec_sym(i))]),
            Relation(f"rec_cre_commute_{i}{j}",
                     lambda R, i=i, j=j: [_comm(R.rec(i).adjoint(), R.rec(j).adjoint())],
                     lambda i=i, j=j: [(_star(rec_sym(i)) * _star(rec_sym(j)),
                                        _star(rec_sym(j)) * _star(rec_sym(i)))]),
        ]
    rels += _mode_relations(n, P, "rec_", lambda R, k: R.rec(k), rec_sym)
    flags = ("general_rescaling=X_(k-1)^-1 A_k; the product X_1^-1...X_(k-1)^-1 fails for k>=3",
             "X_construction=commutator on a basis padded by one level, restricted")
    return RelationSuite("transform_invariance", tuple(rels), flags)


SUITES = {
    "su_q2": _su_q2,
    "paper_modes": _paper_modes,
    "bm": _bm,
    "pw": _pw,
    "aux_X": _aux_X,
    "cpqn_matrix": _cpqn_matrix,
    "transform_invariance": _transform_invariance,
}


def expected_count(suite_id, n):
    """Relation-count manifest used by the coverage self-test."""
    pairs = n * (n - 1) // 2
    return {
        "su_q2": 6,
        "paper_modes": 3 * n + 2 * pairs + 3 * n * n,
        "bm": 2 * n,
        "pw": 3 * pairs + n,
        "aux_X": (8 if n >= 2 else 6) + n,
        "cpqn_matrix": 2 + n + 1,
        "transform_invariance": n + 2 * pairs + 3 * n * n,
    }[suite_id]


def builtin_suite(suite_id, n_modes=2):
    try:
        build = SUITES[suite_id]
    except KeyError:
        raise UnknownSuite(f"unknown suite {suite_id!r}; known: {', '.join(SUITES)}") from None
    return build(n_modes)


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

def _symbolic_verdict(rel):
    if rel.symbolic is None:
        return "n/a", ""
    for lhs, rhs in rel.symbolic():
        v = verify_identity(lhs, rhs)
        if not v.proved:
            return "refuted", f"witness {' * '.join(map(str, v.witness)) or '1'}"
    return "proved", ""


def run_suite(suite, params):
    """Run every relation symbolically and numerically; never aborts on one failure."""
    if isinstance(suite, str):
        suite = builtin_suite(suite, params.modes)
    basis = FockBasis.desk(params.modes, params.dim)
    R = Realization(basis, params.q)
    records = []
    for rel in suite.relations:
        notes = [rel.notes] if rel.notes else []
        try:
            sym, extra = _symbolic_verdict(rel)
            if extra:
                notes.append(extra)
            margin = rel.margin if params.margin is None else params.margin
            residual = max(interior_residual(op, margin) for op in rel.numeric(R))
            passed = sym != "refuted" and residual <= params.tol
        except Exception as exc:  # isolate failures: record and continue
            sym = locals().get("sym", "n/a")
            residual, passed = None, False
            notes.append(f"error: {type(exc).__name__}: {exc}")
        records.append(Record(rel.name, sym, residual, params.tol, passed, "; ".join(notes)))
    records.sort(key=lambda r: r.name)
    flags = list(suite.flags)
    if params.margin is not None:
        flags.append(f"margin_override={params.margin}")
    return Report(suite.id, params, records, flags)


# ---------------------------------------------------------------------------
# q -> 1 sweeps
# ---------------------------------------------------------------------------

METRICS = ("commutator_norm", "bm_defect")


def _metric(metric, R):
    if metric == "commutator_norm":
        return interior_residual(_comm(R.a(1), R.ad(1)), 1)
    if metric == "bm_defect":
        aq = R.aq(1)
        return interior_residual(aq @ aq.adjoint() - aq.adjoint() @ aq - R.I, 1)
    raise ValueError(f"unknown metric {metric!r}; known: {', '.join(METRICS)}")


def limit_sweep(metric, q_grid, modes=1, dim=8):
    """Table of ``(q0, value)`` for a limit metric over ``q_grid``."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; known: {', '.join(METRICS)}")
    basis = FockBasis.desk(modes, dim)
    rows = []
    for q0 in q_grid:
        check_q(q0)
        rows.append((float(q0), _metric(metric, Realization(basis, float(q0)))))
    return rows


# ---------------------------------------------------------------------------
# symbolic <-> numeric cross-check
# ---------------------------------------------------------------------------

def cross_check(n_words, max_len, seed, params, presentations=("paper", "pw")):
    """Compare ``eval(w)`` with ``eval(nf(w))`` for random words.

    The deviation is measured on the interior of margin ``creation_peak(w)``
    and divided by ``max(1, |eval(w)|)`` so words with large ``K^-1`` powers
    are judged at their own scale.
    """
    if max_len > 8:
        raise ParameterOutOfRange("max_len must be <= 8")
    basis = FockBasis.desk(params.modes, params.dim)
    rng = random.Random(seed)
    records = []
    for name in presentations:
        pres = paper(params.modes) if name == "paper" else pw(params.modes)
        worst, worst_word, used, skipped = 0.0, (), 0, 0
        for _ in range(n_words):
            w = random_word(pres, rng, max_len)
            margin = creation_peak(w)
            if basis.dim - margin < 1:
                skipped += 1
                continue
            p = NCPoly(pres, {w: ONE})
            raw = eval_poly(p, basis, params.q)
            red = eval_poly(normal_form(p), basis, params.q)
            scale = max(1.0, interior_residual(raw, margin))
            dev = interior_residual(raw - red, margin) / scale
            used += 1
            if dev >= worst:
                worst, worst_word = dev, w
        notes = f"{used} words"
        if skipped:
            notes += f", {skipped} skipped (no interior)"
        if worst_word:
            notes += f"; worst word {' * '.join(map(str, worst_word))}"
        records.append(Record(f"cross_check_{name}", "n/a", worst, CROSS_CHECK_THRESHOLD,
                              worst <= CROSS_CHECK_THRESHOLD, notes))
    return Report("cross_check", params, records, ["deviation=scaled by max(1, |eval(w)|)"])
