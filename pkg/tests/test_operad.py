import pytest

from operadix.linalg import ChainComplex, Field, GradedSpace, LinearMap, Vector, verify_d_squared
from operadix.operad import (
    AlgebraData, EndOperad, FreeOperad, GeneratorBasis, HadamardOperad,
    IdentityOperad, Truncation, UAs, UCom, check_operad, endomorphism_algebra,
)
from operadix import perm

F2 = Field(2)
F3 = Field(3)
FQ = Field("Q")


def disk(field, n=1):
    space = GradedSpace({n - 1: ["e%d" % (n - 1)], n: ["e%d" % n]})
    d = LinearMap(space, space, -1, {"e%d" % n: {"e%d" % (n - 1): field.one}}, field)
    return ChainComplex(space, d, field)


def sphere(field, n=0):
    space = GradedSpace({n: ["s"]})
    return ChainComplex(space, LinearMap.zero(space, space, -1, field), field)


def test_ucom_passes_check():
    trunc = Truncation(max_arity=3, dmin=0, dmax=0, max_weight=3)
    for f in (F2, FQ):
        rep = check_operad(UCom(f), trunc)
        assert rep.ok, rep.violations()[:3]


def test_uas_passes_check():
    trunc = Truncation(max_arity=3, dmin=0, dmax=0, max_weight=3)
    for f in (F2, F3):
        rep = check_operad(UAs(f), trunc)
        assert rep.ok, rep.violations()[:3]


def test_identity_operad_passes():
    trunc = Truncation(max_arity=1, dmin=0, dmax=0)
    assert check_operad(IdentityOperad(F2), trunc).ok


def test_broken_fixture_fails():
    class Broken(UAs):
        def compose_basis(self, p, b1, i, q, b2):
            out = perm.compose_partial(b1, i, b2)
            if p == 2 and q == 2 and i == 1:
                out = perm.compose(out, (2, 1, 3))
            return {out: self.field.one}

    trunc = Truncation(max_arity=3, dmin=0, dmax=0)
    rep = check_operad(Broken(F2), trunc)
    assert not rep.ok
    fams = {fam for fam, _ in rep.violations()}
    assert "associativity" in fams or "equivariance" in fams or "unit" in fams


def test_end_of_point_is_ucom_like():
    trunc = Truncation(max_arity=3, dmin=-2, dmax=2)
    end = EndOperad(sphere(F2), trunc)
    for n in range(4):
        assert len(end.basis(n, 0)) == 1
        assert end.deg(n, end.basis(n, 0)[0]) == 0
    rep = check_operad(end, trunc)
    assert rep.ok, rep.violations()[:3]


def test_end_of_s1_dimension():
    # End(S^1)(2) = hom((S^1)^{x2}, S^1) is 1-dimensional in degree -1
    trunc = Truncation(max_arity=2, dmin=-2, dmax=1)
    end = EndOperad(sphere(F2, 1), trunc)
    assert len(end.basis(2, -1)) == 1
    assert len(end.basis(2, 0)) == 0


def test_end_of_disk_passes_check_and_d_squared():
    trunc = Truncation(max_arity=2, dmin=-3, dmax=3)
    for f in (F2, F3, FQ):
        end = EndOperad(disk(f), trunc)
        comp = end.component(2, trunc)
        assert verify_d_squared(comp) == []
        rep = check_operad(end, trunc)
        assert rep.ok, rep.violations()[:3]


def test_end_refuses_oversized():
    space = GradedSpace({0: ["a%d" % i for i in range(8)]})
    c = ChainComplex(space, LinearMap.zero(space, space, -1, F2), F2)
    with pytest.raises(ValueError):
        EndOperad(c, Truncation(max_arity=6, dmin=0, dmax=0), cap=1000)


def test_hadamard_unit_and_sizes():
    trunc = Truncation(max_arity=3, dmin=0, dmax=0)
    had = HadamardOperad(UCom(F3), UAs(F3))
    # uCom (x) P has the same dimensions as P
    for n in range(4):
        assert len(had.basis(n, 0)) == len(UAs(F3).basis(n, 0))
    rep = check_operad(had, trunc)
    assert rep.ok, rep.violations()[:3]


def test_hadamard_qf_split_join_roundtrip():
    had = HadamardOperad(UAs(F3), UCom(F3))
    f = F3
    for n in [2, 3]:
        for bid in had.basis(n, 0):
            split = had.qf_split(n, bid)
            back = {}
            for (gid, sigma), c in split.items():
                for b, cc in had.qf_join(n, gid, sigma).items():
                    back[b] = f.add(back.get(b, f.zero), f.mul(c, cc))
            back = {k: v for k, v in back.items() if v != 0}
            assert back == {bid: f.one}


class OneBinaryGen(GeneratorBasis):
    """A single arity-2 generator in degree 0, no differential."""

    def arities(self):
        return [2]

    def gens(self, n, d):
        return ("m",) if (n == 2 and d == 0) else ()

    def deg(self, n, gid):
        return 0


def test_free_operad_dimensions():
    trunc = Truncation(max_arity=3, dmin=0, dmax=0, max_weight=2)
    free = FreeOperad(OneBinaryGen(), F2, trunc)
    # weight-2 arity-3 planar component: the two combs
    assert len(free.pl_basis(3, 0)) == 2
    # times |S_3| in the symmetric basis
    assert len(free.basis(3, 0)) == 12
    rep = check_operad(free, trunc)
    assert rep.ok, rep.violations()[:3]


class ArityOneGen(GeneratorBasis):
    """One arity-1 generator of degree 1 with d(g) = h, |h| = 0."""

    def arities(self):
        return [1]

    def gens(self, n, d):
        if n != 1:
            return ()
        return ("g",) if d == 1 else (("h",) if d == 0 else ())

    def deg(self, n, gid):
        return 1 if gid == "g" else 0

    def diff(self, n, gid):
        if gid == "g":
            return {(("h"), (1,)): 1}
        return {}


def test_free_operad_on_arity_one_is_tensor_algebra():
    trunc = Truncation(max_arity=1, dmin=0, dmax=3, max_weight=3)
    free = FreeOperad(ArityOneGen(), FQ, trunc)
    # words in g, h of length <= 3; degree = number of g's
    assert len(free.basis(1, 0)) == 1 + 1 + 1 + 1  # trivial tree, h, hh, hhh
    assert len(free.basis(1, 1)) == 1 + 2 + 3      # g; gh, hg; ghh, hgh, hhg
    rep = check_operad(free, trunc)
    assert rep.ok, rep.violations()[:5]


def test_free_operad_composition_matches_grafting_oracle():
    import random
    rng = random.Random(3)
    trunc = Truncation(max_arity=4, dmin=0, dmax=0, max_weight=3)
    free = FreeOperad(OneBinaryGen(), F3, trunc)
    pool2 = list(free.basis(2, 0))
    pool3 = list(free.basis(3, 0))
    for _ in range(50):
        b1 = rng.choice(pool3)
        b2 = rng.choice(pool2)
        i = rng.randint(1, 3)
        out = free.compose_basis(3, b1, i, 2, b2)
        (bid, c), = out.items()
        assert c == F3.one  # degree-0 labels: no koszul signs
        code, labels, sigma = bid
        assert sum(1 for x in code if x == -1) == 4
        assert len(labels) == len(b1[1]) + len(b2[1])


def test_algebra_action_dual_numbers():
    # k[t]/(t^2) as a uAs-algebra: unit 1, t*t = 0
    f = FQ
    space = GradedSpace({0: ["one", "t"]})
    carrier = ChainComplex(space, LinearMap.zero(space, space, -1, f), f)
    uas = UAs(f)
    action = {}
    mult = {
        ("one", "one"): {"one": f.one}, ("one", "t"): {"t": f.one},
        ("t", "one"): {"t": f.one}, ("t", "t"): {},
    }
    for sigma in perm.all_permutations(2):
        # commutative product: every permutation acts the same way
        action[(2, sigma)] = {k: dict(v) for k, v in mult.items()}
    action[(1, (1,))] = {("one",): {"one": f.one}, ("t",): {"t": f.one}}
    alg = AlgebraData(uas, carrier, action)
    t = Vector(space, {"t": f.one}, f)
    one = Vector(space, {"one": f.one}, f)
    assert alg.act(2, {(1, 2): f.one}, [t, t]).is_zero()
    assert alg.act(2, {(1, 2): f.one}, [one, t]).coords == {"t": f.one}
    assert alg.act(1, {(1,): f.one}, [t]).coords == {"t": f.one}


def test_end_tautological_algebra_evaluates():
    trunc = Truncation(max_arity=2, dmin=-3, dmax=3)
    f = F3
    x = disk(f)
    end = EndOperad(x, trunc)
    alg = endomorphism_algebra(end)
    v0 = Vector(x.space, {"e0": f.one}, f)
    v1 = Vector(x.space, {"e1": f.one}, f)
    for bid in end.basis(2, -2):
        tgt, srcs = bid
        out = alg.act(2, {bid: f.one}, [v1, v1])
        if srcs == ("e1", "e1"):
            assert out.coords == {tgt: f.one}
        else:
            assert out.is_zero()
