import itertools

import pytest

from operadix import perm
from operadix.barratt import (
    BarrattEccles, be_compose, be_diagonal, be_differential,
    be_homology_dims_by_elimination, homotopy_certificate, inv_chain,
    prepend_identity, rho,
)
from operadix.linalg import Field, vec_add_into
from operadix.operad import Truncation, check_operad

F2 = Field(2)
F3 = Field(3)
FQ = Field("Q")

ID2 = perm.identity(2)
TAU = (2, 1)


def test_basis_sizes():
    e = BarrattEccles(F2)
    assert len(e.basis(0, 0)) == 1
    assert len(e.basis(1, 0)) == 1
    assert len(e.basis(1, 1)) == 0
    assert len(e.basis(2, 3)) == 2
    assert len(e.basis(3, 2)) == 6 * 25


def test_differential_examples():
    # d((Id, tau)) = (tau) - (Id)
    d = be_differential(FQ, (ID2, TAU))
    assert d == {(TAU,): FQ.one, (ID2,): FQ.coerce(-1)}
    # d((Id, tau, Id)) over F_2: middle face degenerate
    d = be_differential(F2, (ID2, TAU, ID2))
    assert d == {(TAU, ID2): F2.one, (ID2, TAU): F2.one}


def test_d_squared_brute_force_small():
    e = BarrattEccles(F3)
    for n in [2, 3]:
        for deg in range(0, 5):
            for chain in e.basis(n, deg):
                assert e.diff(n, e.diff_basis(n, chain)) == {}


def test_compose_degree_zero_and_unit():
    e = BarrattEccles(F2)
    out = be_compose(F2, 2, (TAU,), 1, 2, (TAU,))
    assert out == {(perm.compose_partial(TAU, 1, TAU),): F2.one}
    for chain in e.basis(2, 2):
        assert e.compose_basis(2, chain, 1, 1, e.unit()) == {chain: F2.one}
        assert e.compose_basis(1, e.unit(), 1, 2, chain) == {chain: F2.one}


def test_rho_examples():
    assert rho(2, ()) == (ID2,)
    assert rho(2, (TAU,)) == (ID2, TAU)
    assert rho(2, (TAU, TAU)) == (ID2, TAU, ID2)
    # words with an identity letter are degenerate
    assert rho(2, (ID2,)) is None


def test_rho_spans_planar_part():
    e = BarrattEccles(F2)
    for n, kmax in [(2, 3), (3, 3)]:
        nontrivial = [s for s in perm.all_permutations(n) if not perm.is_identity(s)]
        for k in range(0, kmax + 1):
            values = set()
            for word in itertools.product(nontrivial, repeat=k):
                c = rho(n, word)
                assert c is not None
                values.add(c)
            expected = set(e.qf_gens(n, k))
            assert values == expected  # distinct chains: injective and spanning


def test_rho_composition_lemma():
    # rho(mu) o_{mu^-1(i)} rho(psi) = (-1)^{ab} sum_phi eps(phi) rho(mu o_{i,phi} psi)
    f = FQ
    for p, q in [(2, 2), (2, 3), (3, 2)]:
        nt_p = [s for s in perm.all_permutations(p) if not perm.is_identity(s)]
        nt_q = [s for s in perm.all_permutations(q) if not perm.is_identity(s)]
        for a, b in [(1, 1), (2, 1), (1, 2)]:
            for mus in itertools.product(nt_p, repeat=a):
                for psis in itertools.product(nt_q, repeat=b):
                    for i in range(1, p + 1):
                        lhs = be_compose(f, p, rho(p, mus), perm.sequence_slot(mus, i),
                                         q, rho(q, psis))
                        rhs = {}
                        for phi, eps in perm.shuffles(a, b):
                            word = perm.shuffle_compose(mus, p, i, psis, q, phi)
                            c = rho(p + q - 1, word)
                            if c is not None:
                                sgn = eps * ((-1) ** (a * b))
                                vec_add_into(f, rhs, {c: f.from_int(sgn)})
                        assert lhs == rhs, (p, q, i, mus, psis)


def test_inversion_lemma_samples():
    # inv(x) o_i inv(y) = (-1)^{ab} inv(x o_i y), sampled exhaustively at small size
    f = FQ
    e = BarrattEccles(f)
    for x in e.basis(2, 1):
        for y in e.basis(2, 1):
            for i in [1, 2]:
                lhs = be_compose(f, 2, inv_chain(x), i, 2, inv_chain(y))
                rhs0 = be_compose(f, 2, x, i, 2, y)
                rhs = {}
                for c, v in rhs0.items():
                    sgn = f.from_int(-1)  # (-1)^{1*1}
                    vec_add_into(f, rhs, {inv_chain(c): f.mul(sgn, v)})
                assert lhs == rhs


def test_diagonal_counit_and_coassociativity():
    f = F3
    e = BarrattEccles(f)
    for chain in e.basis(2, 3) + e.basis(2, 0):
        diag = be_diagonal(f, chain)
        # counit on the left factor
        left = {}
        for (c1, c2), v in diag.items():
            if len(c1) == 1:
                vec_add_into(f, left, {c2: v})
        assert left == {chain: f.one}
        # coassociativity
        lhs, rhs = {}, {}
        for (c1, c2), v in diag.items():
            for (a, b), w in be_diagonal(f, c1).items():
                vec_add_into(f, lhs, {(a, b, c2): f.mul(v, w)})
            for (b, c), w in be_diagonal(f, c2).items():
                vec_add_into(f, rhs, {(c1, b, c): f.mul(v, w)})
        assert lhs == rhs


def test_rho_monoidal_property():
    # Delta_E(rho(word)) = sum_i rho(tail_i) (x) rho(head_i)^{running product}
    f = FQ
    n = 2
    nt = [s for s in perm.all_permutations(n) if not perm.is_identity(s)]
    for k in [1, 2, 3]:
        for word in itertools.product(nt, repeat=k):
            c = rho(n, word)
            lhs = be_diagonal(f, c)
            rhs = {}
            for i in range(1, k + 2):
                tail = rho(n, word[i - 1:])
                head = rho(n, word[:i - 1])
                prod = perm.identity(n)
                for s in word[i - 1:]:
                    prod = perm.compose(s, prod)
                head_tw = tuple(perm.compose(s, prod) for s in head)
                if tail is not None and not (len(set(head_tw)) < len(head_tw) and False):
                    vec_add_into(f, rhs, {(tail, head_tw): f.one})
            assert lhs == rhs, (word,)


def test_homotopy_prepend_identity_small():
    f = FQ
    e = BarrattEccles(f)
    for n in [2, 3]:
        for deg in range(0, 3):
            for chain in e.basis(n, deg):
                lhs = {}
                for c, v in prepend_identity(f, n, chain).items():
                    vec_add_into(f, lhs, be_differential(f, c), v)
                for c, v in be_differential(f, chain).items():
                    vec_add_into(f, lhs, prepend_identity(f, n, c), v)
                expected = {chain: f.one}
                if deg == 0:
                    vec_add_into(f, expected, {(perm.identity(n),): f.coerce(-1)})
                assert lhs == expected


def test_homotopy_certificate_vectorized_matches():
    e = BarrattEccles(F2)
    assert homotopy_certificate(e, 2, 4)
    assert homotopy_certificate(e, 3, 3)


def test_homology_by_elimination_small():
    dims = be_homology_dims_by_elimination(F2, 2, 4)
    assert dims == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}
    dims = be_homology_dims_by_elimination(F3, 2, 3)
    assert dims == {0: 1, 1: 0, 2: 0, 3: 0}
    dims = be_homology_dims_by_elimination(F2, 3, 2)
    assert dims == {0: 1, 1: 0, 2: 0}


def test_check_operad_small_truncation():
    trunc = Truncation(max_arity=3, dmin=0, dmax=2)
    rep = check_operad(BarrattEccles(F2), trunc)
    assert rep.ok, rep.violations()[:5]
    assert all(c["engine"] != "generic" for c in rep.checks.values())


def test_fast_families_agree_with_generic():
    # meta-check: the vectorized/table engines agree with plain loops
    trunc = Truncation(max_arity=3, dmin=0, dmax=1)
    e = BarrattEccles(F3)
    fast = check_operad(e, trunc)

    class Plain(BarrattEccles):
        def fast_axiom_families(self, trunc):
            return {}

    slow = check_operad(Plain(F3), trunc)
    assert fast.ok and slow.ok
