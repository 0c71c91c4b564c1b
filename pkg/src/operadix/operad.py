"""dg operads in partial-composition form, with built-in examples and an axiom checker.

An Operad subclass exposes a distinguished basis per (arity, degree) and the
structure maps on basis elements; elements are sparse dicts id -> scalar and
the base class supplies linear extensions.  Several constructions carry a
quasi-free presentation (basis = planar generators x permutations), exposed
through the qf_* methods; the free operad stores elements in that normal form
as (tree code, labels, leaf permutation).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import perm
from .linalg import ChainComplex, Field, GradedSpace, LinearMap, vec_add_into
from .trees import (
    LEAF, LabeledTree, PlanarTree, children_starts, enumerate_trees,
    graft, leaf_positions, node_positions, subtree_span,
)


@dataclass(frozen=True)
class Truncation:
    """The finite slice every computation runs on."""
    max_arity: int
    dmin: int
    dmax: int
    max_weight: int = 4

    def degrees(self):
        return range(self.dmin, self.dmax + 1)

    def arities(self):
        return range(0, self.max_arity + 1)


class Operad:
    """Base class; subclasses provide basis-level structure maps."""

    name = "operad"

    def __init__(self, field):
        self.field = field

    # -- subclass responsibility --

    def basis(self, n, d):
        raise NotImplementedError

    def deg(self, n, bid):
        raise NotImplementedError

    def unit(self):
        """Basis id of the operadic unit (arity 1, degree 0)."""
        raise NotImplementedError

    def unit_vector(self):
        return {self.unit(): self.field.one}

    def diff_basis(self, n, bid):
        raise NotImplementedError

    def compose_basis(self, p, b1, i, q, b2):
        raise NotImplementedError

    def act_basis(self, n, bid, sigma):
        raise NotImplementedError

    # -- optional quasi-free presentation --

    def is_quasi_free(self):
        return False

    def qf_gens(self, n, d):
        raise NotImplementedError

    def qf_deg(self, n, gid):
        raise NotImplementedError

    def qf_split(self, n, bid):
        """Coordinates of a basis element over (generator, permutation) pairs."""
        raise NotImplementedError

    def qf_join(self, n, gid, sigma):
        """Basis coordinates of the element (generator tensor permutation)."""
        raise NotImplementedError

    # -- linear extensions --

    def diff(self, n, vec):
        out = {}
        for b, c in vec.items():
            vec_add_into(self.field, out, self.diff_basis(n, b), c)
        return out

    def compose(self, p, v1, i, q, v2):
        out = {}
        for b1, c1 in v1.items():
            for b2, c2 in v2.items():
                vec_add_into(self.field, out, self.compose_basis(p, b1, i, q, b2),
                             self.field.mul(c1, c2))
        return out

    def act(self, n, vec, sigma):
        out = {}
        for b, c in vec.items():
            vec_add_into(self.field, out, self.act_basis(n, b, sigma), c)
        return out

    # -- derived structure --

    def component(self, n, trunc, mode="dg"):
        """The arity-n chain complex on the truncation window, ids (n, bid)."""
        dims = {}
        for d in range(trunc.dmin, trunc.dmax + 1):
            ids = [(n, b) for b in self.basis(n, d)]
            if ids:
                dims[d] = ids
        space = GradedSpace(dims)
        cols = {}
        for d in range(trunc.dmin, trunc.dmax + 1):
            for b in self.basis(n, d):
                img = self.diff_basis(n, b)
                col = {(n, t): c for t, c in img.items() if (n, t) in space.degree_of}
                if len(col) != len(img) and d - 1 >= trunc.dmin:
                    raise ValueError("differential leaves the stored window at %r" % (b,))
                if col:
                    cols[(n, b)] = col
        dmap = LinearMap(space, space, -1, cols, self.field, check=False)
        return ChainComplex(space, dmap, self.field, mode=mode)

    def dim(self, n, d):
        return len(self.basis(n, d))


# ---------------------------------------------------------------------------
# built-in operads


class IdentityOperad(Operad):
    """The unit operad: k in arity 1, degree 0."""

    name = "I"

    def basis(self, n, d):
        return ("1",) if (n == 1 and d == 0) else ()

    def deg(self, n, bid):
        return 0

    def unit(self):
        return "1"

    def diff_basis(self, n, bid):
        return {}

    def compose_basis(self, p, b1, i, q, b2):
        return {"1": self.field.one}

    def act_basis(self, n, bid, sigma):
        return {bid: self.field.one}


class UCom(Operad):
    """Unital commutative operad: k in every arity, trivial action.

    Its distinguished basis is planar (one generator per arity); it is not
    free over the symmetric groups, so qf_* expose the planar skeleton only.
    """

    name = "uCom"

    def basis(self, n, d):
        return ("e",) if d == 0 else ()

    def deg(self, n, bid):
        return 0

    def unit(self):
        return "e"

    def diff_basis(self, n, bid):
        return {}

    def compose_basis(self, p, b1, i, q, b2):
        return {"e": self.field.one}

    def act_basis(self, n, bid, sigma):
        return {bid: self.field.one}

    def is_quasi_free(self):
        return False

    def qf_gens(self, n, d):
        return ("e",) if d == 0 else ()

    def qf_deg(self, n, gid):
        return 0

    def qf_split(self, n, bid):
        return {(bid, perm.identity(n)): self.field.one}

    def qf_join(self, n, gid, sigma):
        return {gid: self.field.one}


class UAs(Operad):
    """Unital associative operad: uAs(n) = k[S_n], composition by block substitution."""

    name = "uAs"

    def basis(self, n, d):
        return perm.all_permutations(n) if d == 0 else ()

    def deg(self, n, bid):
        return 0

    def unit(self):
        return (1,)

    def diff_basis(self, n, bid):
        return {}

    def compose_basis(self, p, b1, i, q, b2):
        return {perm.compose_partial(b1, i, b2): self.field.one}

    def act_basis(self, n, bid, sigma):
        return {perm.compose(bid, sigma): self.field.one}

    def is_quasi_free(self):
        return True

    def qf_gens(self, n, d):
        return ("e",) if d == 0 else ()

    def qf_deg(self, n, gid):
        return 0

    def qf_split(self, n, bid):
        return {("e", bid): self.field.one}

    def qf_join(self, n, gid, sigma):
        return {sigma: self.field.one}


class EndOperad(Operad):
    """Endomorphism operad of a finite chain complex.

    Basis of End(X)(n) in degree |b| - |a_1| - ... - |a_n|: pairs (b, (a_1..a_n))
    sending the basis tuple a to b and all other tuples to zero.
    """

    name = "End"

    def __init__(self, complex_, trunc, cap=200000):
        super().__init__(complex_.field)
        self.x = complex_
        self.trunc = trunc
        xdim = complex_.space.total_dim()
        if xdim ** (trunc.max_arity + 1) > cap:
            raise ValueError("endomorphism operad too large: %d^%d basis tuples"
                             % (xdim, trunc.max_arity + 1))
        self._xbasis = [b for d in complex_.space.degrees() for b in complex_.space.basis(d)]

    def _xdeg(self, b):
        return self.x.space.degree_of[b]

    @lru_cache(maxsize=None)
    def _tuples(self, n):
        return tuple(itertools.product(self._xbasis, repeat=n))

    def basis(self, n, d):
        out = []
        for b in self._xbasis:
            for srcs in self._tuples(n):
                if self._xdeg(b) - sum(self._xdeg(a) for a in srcs) == d:
                    out.append((b, srcs))
        return tuple(out)

    def deg(self, n, bid):
        b, srcs = bid
        return self._xdeg(b) - sum(self._xdeg(a) for a in srcs)

    def unit(self):
        # identity map of X is a sum, not a basis element; expose it as a vector
        raise NotImplementedError("End(X) unit is not a basis element; use unit_vector()")

    def unit_vector(self):
        return {(b, (b,)): self.field.one for b in self._xbasis}

    def diff_basis(self, n, bid):
        f = self.field
        b, srcs = bid
        out = {}
        # post-compose with d_X
        for t, c in self.x.d.column(b).items():
            vec_add_into(f, out, {(t, srcs): c})
        # pre-compose with the differential of X^{tensor n}
        sign_f = -1 if self.deg(n, bid) % 2 else 1
        for idx in range(n):
            # find sources a' with d(a')_srcs[idx] != 0
            for aprime in self._xbasis:
                c = self.x.d.column(aprime).get(srcs[idx])
                if c is None:
                    continue
                koszul = sum(self._xdeg(a) for a in srcs[:idx])
                # moving d past a'_1..a'_{idx-1}; those have the degrees of the
                # new source tuple, which differs from srcs only at idx
                sgn = -1 if koszul % 2 else 1
                coeff = f.mul(f.from_int(-sign_f * sgn), c)
                new_srcs = srcs[:idx] + (aprime,) + srcs[idx + 1:]
                vec_add_into(f, out, {(b, new_srcs): coeff})
        return out

    def compose_basis(self, p, b1, i, q, b2):
        f = self.field
        tgt1, src1 = b1
        tgt2, src2 = b2
        if src1[i - 1] != tgt2:
            return {}
        g_deg = self.deg(q, b2)
        koszul = sum(self._xdeg(a) for a in src1[:i - 1])
        sgn = -1 if (g_deg * koszul) % 2 else 1
        new_src = src1[:i - 1] + src2 + src1[i:]
        return {(tgt1, new_src): f.from_int(sgn)}

    def act_basis(self, n, bid, sigma):
        # f^sigma(a_1..a_n) = koszul(sigma, a) * f(a_{sigma(1)}, ..., a_{sigma(n)})
        b, srcs = bid
        inv = perm.inverse(sigma)
        new_srcs = tuple(srcs[inv[j] - 1] for j in range(n))
        degs = [self._xdeg(a) for a in new_srcs]
        sgn = _koszul_rearrange(degs, sigma)
        return {(b, new_srcs): self.field.from_int(sgn)}


def _koszul_rearrange(degs_after, sigma):
    """Sign of the graded rearrangement sending slot sigma(j) back to slot j."""
    n = len(sigma)
    sgn = 1
    for a in range(n):
        for b in range(a + 1, n):
            if sigma[a] > sigma[b] and degs_after[sigma[a] - 1] % 2 and degs_after[sigma[b] - 1] % 2:
                sgn = -sgn
    return sgn


class HadamardOperad(Operad):
    """Arity-wise tensor of two operads with diagonal symmetric-group action."""

    def __init__(self, left, right):
        if left.field != right.field:
            raise ValueError("Hadamard factors must share the ground field")
        super().__init__(left.field)
        self.left = left
        self.right = right
        self.name = "%s(x)%s" % (left.name, right.name)

    def basis(self, n, d):
        out = []
        for dl in self._left_degrees(n):
            for bl in self.left.basis(n, dl):
                for br in self.right.basis(n, d - dl):
                    out.append((bl, br))
        return tuple(out)

    def _left_degrees(self, n):
        # crude but safe: scan a window of degrees where the left factor lives
        return range(-16, 17)

    def deg(self, n, bid):
        bl, br = bid
        return self.left.deg(n, bl) + self.right.deg(n, br)

    def unit(self):
        return (self.left.unit(), self.right.unit())

    def diff_basis(self, n, bid):
        f = self.field
        bl, br = bid
        out = {}
        for t, c in self.left.diff_basis(n, bl).items():
            vec_add_into(f, out, {(t, br): c})
        sgn = f.from_int(-1 if self.left.deg(n, bl) % 2 else 1)
        for t, c in self.right.diff_basis(n, br).items():
            vec_add_into(f, out, {(bl, t): f.mul(sgn, c)})
        return out

    def compose_basis(self, p, b1, i, q, b2):
        f = self.field
        l1, r1 = b1
        l2, r2 = b2
        sgn = f.from_int(-1 if (self.left.deg(q, l2) * self.right.deg(p, r1)) % 2 else 1)
        out = {}
        lcomp = self.left.compose_basis(p, l1, i, q, l2)
        rcomp = self.right.compose_basis(p, r1, i, q, r2)
        for lt, lc in lcomp.items():
            for rt, rc in rcomp.items():
                vec_add_into(f, out, {(lt, rt): f.mul(sgn, f.mul(lc, rc))})
        return out

    def act_basis(self, n, bid, sigma):
        f = self.field
        bl, br = bid
        out = {}
        for lt, lc in self.left.act_basis(n, bl, sigma).items():
            for rt, rc in self.right.act_basis(n, br, sigma).items():
                vec_add_into(f, out, {(lt, rt): f.mul(lc, rc)})
        return out

    def is_quasi_free(self):
        return self.left.is_quasi_free()

    # generators: (planar generator of the left factor, full basis of the right)
    def qf_gens(self, n, d):
        out = []
        for dl in self._left_degrees(n):
            for gl in self.left.qf_gens(n, dl):
                for br in self.right.basis(n, d - dl):
                    out.append((gl, br))
        return tuple(out)

    def qf_deg(self, n, gid):
        gl, br = gid
        return self.left.qf_deg(n, gl) + self.right.deg(n, br)

    def qf_split(self, n, bid):
        f = self.field
        bl, br = bid
        out = {}
        for (gl, sigma), cl in self.left.qf_split(n, bl).items():
            inv = perm.inverse(sigma)
            for brr, cr in self.right.act_basis(n, br, inv).items():
                key = ((gl, brr), sigma)
                cur = f.add(out.get(key, f.zero), f.mul(cl, cr))
                if cur == 0:
                    out.pop(key, None)
                else:
                    out[key] = cur
        return out

    def qf_join(self, n, gid, sigma):
        f = self.field
        gl, br = gid
        out = {}
        for bl, cl in self.left.qf_join(n, gl, sigma).items():
            for brr, cr in self.right.act_basis(n, br, sigma).items():
                vec_add_into(f, out, {(bl, brr): f.mul(cl, cr)})
        return out


# ---------------------------------------------------------------------------
# the free operad in planar (x) S normal form


class GeneratorBasis:
    """Planar generators of a quasi-free S-module, with their differential.

    diff(n, gid) returns the value of d on (gid tensor Id) in coordinates
    {(gid2, sigma): coeff}; omit entries for zero.
    """

    def arities(self):
        raise NotImplementedError

    def gens(self, n, d):
        raise NotImplementedError

    def deg(self, n, gid):
        raise NotImplementedError

    def diff(self, n, gid):
        return {}


class FreeOperad(Operad):
    """Free operad on planar generators: basis (tree code, labels, leaf permutation).

    Labels are (arity, gid) pairs in preorder.  The derivation is label-wise
    by default (from the generators' differential); subclasses may override
    node_differential to add structure terms (cobar does).
    """

    name = "T"

    def __init__(self, gens, field, trunc):
        super().__init__(field)
        self.gens = gens
        self.trunc = trunc
        self._diff_cache = {}

    # -- basis enumeration --

    @lru_cache(maxsize=None)
    def _labeled_trees(self, n):
        """All labeled planar trees with n leaves within the truncation."""
        arities = sorted(set(self.gens.arities()))
        out = []
        for shape in enumerate_trees(n, self.trunc.max_weight,
                                     max_arity=max(arities, default=0)):
            node_ar = shape.arities()
            if any(a not in arities for a in node_ar):
                continue
            choices = []
            for a in node_ar:
                pool = []
                for d in range(self.trunc.dmin, self.trunc.dmax + 1):
                    pool.extend((a, g) for g in self.gens.gens(a, d))
                choices.append(pool)
            for labels in itertools.product(*choices):
                out.append((shape.code, labels))
        return tuple(out)

    def basis(self, n, d):
        out = []
        for code, labels in self._labeled_trees(n):
            if self._labels_degree(labels) == d:
                for sigma in perm.all_permutations(n):
                    out.append((code, labels, sigma))
        return tuple(out)

    def pl_basis(self, n, d):
        """Planar part: identity leaf permutation only."""
        ident = perm.identity(n)
        return tuple((code, labels, ident) for code, labels in self._labeled_trees(n)
                     if self._labels_degree(labels) == d)

    def _labels_degree(self, labels):
        return sum(self.gens.deg(a, g) for a, g in labels)

    def _label_deg(self, label):
        a, g = label
        return self.gens.deg(a, g)

    def deg(self, n, bid):
        return self._labels_degree(bid[1])

    def unit(self):
        return ((LEAF,), (), (1,))

    def act_basis(self, n, bid, sigma):
        code, labels, tau = bid
        return {(code, labels, perm.compose(tau, sigma)): self.field.one}

    def compose_basis(self, p, b1, i, q, b2):
        code1, labels1, sigma1 = b1
        code2, labels2, sigma2 = b2
        t1 = LabeledTree(PlanarTree(code1), labels1)
        t2 = LabeledTree(PlanarTree(code2), labels2)
        out, sgn = graft(t1, sigma1[i - 1], t2, self._label_deg)
        tau = perm.compose_partial(sigma1, i, sigma2)
        return {(out.tree.code, out.labels, tau): self.field.from_int(sgn)}

    # -- derivation --

    def node_differential(self, arity, gid):
        """Replacement values at a node: list of (coeff, LabeledTree, sigma).

        Default: label-wise differential of the generators (1-node trees).
        """
        out = []
        for (g2, sigma), c in self.gens.diff(arity, gid).items():
            out.append((c, LabeledTree.corolla(arity, (arity, g2)), sigma))
        return out

    def diff_basis(self, n, bid):
        code, labels, sigma = bid
        if not perm.is_identity(sigma):
            planar = self.diff_basis(n, (code, labels, perm.identity(n)))
            return self.act(n, planar, sigma)
        key = (n, code, labels)
        if key in self._diff_cache:
            return self._diff_cache[key]
        f = self.field
        out = {}
        for v, pos in enumerate(node_positions(code)):
            ctx, slot, kids, s_norm, ctx_deg = self._node_context(code, labels, pos)
            a = code[pos]
            gid = labels[v][1]
            prefix = f.from_int(s_norm * (-1 if ctx_deg % 2 else 1))
            for coeff, repl, rsigma in self.node_differential(a, gid):
                w = self._assemble(repl, rsigma, kids)
                term = {}
                for wid, wc in w.items():
                    vec_add_into(f, term,
                                 self.compose_basis(self._elt_arity(ctx), ctx, slot,
                                                    self._elt_arity(wid), wid), wc)
                vec_add_into(f, out, term, f.mul(prefix, f.coerce(coeff)))
        self._diff_cache[key] = out
        return out

    # -- assembly helpers --

    def _elt_arity(self, bid):
        return sum(1 for c in bid[0] if c == LEAF)

    def _node_context(self, code, labels, pos):
        """Split a tree at the node `pos` into context, slot, children.

        Returns (context basis id, slot, children ids, s_norm, ctx_label_degree)
        where reassembling context o_slot (corolla o children) with sign s_norm
        recovers the original basis element exactly.
        """
        end = subtree_span(code, pos)
        a = code[pos]
        nodes = node_positions(code)
        v = nodes.index(pos)
        # children subtrees of the node
        kids = []
        kid_label_ranges = []
        for cstart in children_starts(code, pos):
            cend = subtree_span(code, cstart)
            kcode = code[cstart:cend]
            nlab_before = sum(1 for c in code[:cstart] if c != LEAF)
            nlab = sum(1 for c in kcode if c != LEAF)
            kids.append((kcode, labels[nlab_before:nlab_before + nlab],
                         perm.identity(sum(1 for c in kcode if c == LEAF))))
        # context: replace the whole subtree at pos by a leaf
        ctx_code = code[:pos] + (LEAF,) + code[end:]
        n_before = sum(1 for c in code[:pos] if c != LEAF)
        n_inside = sum(1 for c in code[pos:end] if c != LEAF)
        ctx_labels = labels[:n_before] + labels[n_before + n_inside:]
        slot = sum(1 for c in code[:pos] if c == LEAF) + 1
        ctx = (ctx_code, ctx_labels, perm.identity(sum(1 for c in ctx_code if c == LEAF)))
        ctx_deg = self._labels_degree(ctx_labels)
        # normalization sign: reassemble with the original corolla
        corolla = LabeledTree.corolla(a, labels[v])
        w = self._assemble(corolla, perm.identity(a), kids)
        (wid, wc), = w.items()
        res = self.compose_basis(self._elt_arity(ctx), ctx, slot,
                                  self._elt_arity(wid), wid)
        (rid, rc), = res.items()
        assert rid == (code, labels, perm.identity(self._elt_arity((code, labels, None)))), \
            "context assembly failed to reproduce the element"
        s = self.field.mul(rc, wc)
        s_norm = 1 if s == self.field.one else -1
        return ctx, slot, kids, s_norm, ctx_deg

    def _assemble(self, repl, rsigma, kids):
        """Graft the children onto a replacement labeled tree twisted by rsigma."""
        cur = {(repl.tree.code, repl.labels, rsigma): self.field.one}
        for j in range(len(kids), 0, -1):
            nxt = {}
            for bid, c in cur.items():
                kid = kids[j - 1]
                vec_add_into(self.field, nxt,
                             self.compose_basis(self._elt_arity(bid), bid, j,
                                                self._elt_arity(kid), kid), c)
            cur = nxt
        return cur


# ---------------------------------------------------------------------------
# algebras over an operad


class AlgebraData:
    """dg algebra over an operad: carrier complex + action of operad basis elements.

    action: dict (n, opid) -> { src_tuple: {tgt: coeff} } giving the multilinear
    map carrier^n -> carrier on basis tuples.  Missing entries act as zero.
    """

    def __init__(self, operad, carrier, action):
        self.operad = operad
        self.carrier = carrier
        self.action = action
        self.field = operad.field

    def act_basis(self, n, opid, srcs):
        return dict(self.action.get((n, opid), {}).get(tuple(srcs), {}))

    def act(self, n, opvec, vectors):
        """algebra_action: apply a linear combination of operations to Vectors."""
        from .linalg import Vector
        if len(vectors) != n:
            raise ValueError("arity mismatch: expected %d arguments" % n)
        f = self.field
        out = {}
        for opid, c in opvec.items():
            for srcs in itertools.product(*[v.coords.items() for v in vectors]):
                ids = tuple(s[0] for s in srcs)
                coeff = c
                for _, sc in srcs:
                    coeff = f.mul(coeff, sc)
                vec_add_into(f, out, self.act_basis(n, opid, ids), coeff)
        return Vector(self.carrier.space, out, f)


def endomorphism_algebra(end_operad):
    """The tautological algebra of End(X) on X (action = evaluation)."""
    action = {}
    x = end_operad.x
    for n in range(end_operad.trunc.max_arity + 1):
        for d in range(end_operad.trunc.dmin, end_operad.trunc.dmax + 1):
            for bid in end_operad.basis(n, d):
                tgt, srcs = bid
                action[(n, bid)] = {srcs: {tgt: end_operad.field.one}}
    return AlgebraData(end_operad, x, action)


# ---------------------------------------------------------------------------
# axiom checking


class OperadReport:
    def __init__(self, name, trunc):
        self.name = name
        self.trunc = trunc
        self.checks = {}   # family -> {"instances": int, "violations": [...], "engine": str}

    def record(self, family, instances, violations, engine="generic"):
        self.checks[family] = {
            "instances": instances,
            "violations": violations,
            "engine": engine,
        }

    @property
    def ok(self):
        return all(not c["violations"] for c in self.checks.values())

    def violations(self):
        out = []
        for fam, c in sorted(self.checks.items()):
            for v in c["violations"]:
                out.append((fam, v))
        return out

    def to_json(self):
        return {
            "object": self.name,
            "truncation": {
                "max_arity": self.trunc.max_arity, "dmin": self.trunc.dmin,
                "dmax": self.trunc.dmax, "max_weight": self.trunc.max_weight,
            },
            "ok": self.ok,
            "checks": {
                fam: {
                    "instances": c["instances"],
                    "violations": [repr(v) for v in c["violations"][:20]],
                    "engine": c["engine"],
                }
                for fam, c in sorted(self.checks.items())
            },
        }


def _vec_repr(v):
    return sorted(v.items(), key=lambda kv: repr(kv[0]))


def check_operad(op, trunc, instance_cap=2_000_000):
    """Verify unit, equivariance, associativity, derivation and d^2 on the slice.

    Enumerates every instance whose factors and composite live inside `trunc`.
    Operads may accelerate specific families by providing fast_axiom_families();
    the report records which engine handled each family.
    """
    f = op.field
    report = OperadReport(op.name, trunc)
    fast = op.fast_axiom_families(trunc) if hasattr(op, "fast_axiom_families") else {}

    def basis_all(n):
        for d in trunc.degrees():
            for b in op.basis(n, d):
                yield b, d

    arities = list(trunc.arities())

    # d^2 = 0 and action laws
    if "d_squared" in fast:
        count, bad = fast["d_squared"]()
        report.record("d_squared", count, bad, engine="vectorized")
    else:
        bad, count = [], 0
        for n in arities:
            for b, d in basis_all(n):
                count += 1
                if op.diff(n, op.diff_basis(n, b)):
                    bad.append((n, b))
        report.record("d_squared", count, bad)

    if "action" in fast:
        count, bad = fast["action"]()
        report.record("action", count, bad, engine="vectorized")
    else:
        bad, count = [], 0
        for n in arities:
            perms = perm.all_permutations(n)
            for b, d in basis_all(n):
                for s in perms:
                    for t in perms:
                        count += 1
                        lhs = op.act(n, op.act_basis(n, b, s), t)
                        rhs = op.act_basis(n, b, perm.compose(s, t))
                        if lhs != rhs:
                            bad.append((n, b, s, t))
                count += 1
                if op.act_basis(n, b, perm.identity(n)) != {b: f.one}:
                    bad.append((n, b, "identity"))
                # d commutes with the action
                for s in perms:
                    count += 1
                    if op.act(n, op.diff_basis(n, b), s) != op.diff(n, op.act_basis(n, b, s)):
                        bad.append((n, b, s, "diff"))
        report.record("action", count, bad)

    # unit laws
    if "unit" in fast:
        count, bad = fast["unit"]()
        report.record("unit", count, bad, engine="vectorized")
    else:
        bad, count = [], 0
        one = op.unit_vector()
        for n in arities:
            for b, d in basis_all(n):
                for i in range(1, n + 1):
                    count += 1
                    if op.compose(n, {b: f.one}, i, 1, one) != {b: f.one}:
                        bad.append(("right", n, b, i))
                count += 1
                if op.compose(1, one, 1, n, {b: f.one}) != {b: f.one}:
                    bad.append(("left", n, b))
        report.record("unit", count, bad)

    # pair families: derivation and equivariance
    def pairs():
        for p in arities:
            if p < 1:
                continue
            for q in arities:
                if p + q - 1 > trunc.max_arity:
                    continue
                for b1, d1 in basis_all(p):
                    for b2, d2 in basis_all(q):
                        if not trunc.dmin <= d1 + d2 <= trunc.dmax:
                            continue
                        yield p, q, b1, b2, d1, d2

    if "derivation" in fast:
        count, bad = fast["derivation"]()
        report.record("derivation", count, bad, engine="vectorized")
    else:
        bad, count = [], 0
        for p, q, b1, b2, d1, d2 in pairs():
            for i in range(1, p + 1):
                count += 1
                if count > instance_cap:
                    raise RuntimeError("derivation family exceeds the instance cap")
                comp = op.compose_basis(p, b1, i, q, b2)
                lhs = op.diff(p + q - 1, comp)
                rhs = op.compose(p, op.diff_basis(p, b1), i, q, {b2: f.one})
                sgn = f.from_int(-1 if d1 % 2 else 1)
                rhs2 = op.compose(p, {b1: f.one}, i, q, op.diff_basis(q, b2))
                vec_add_into(f, rhs, rhs2, sgn)
                if lhs != rhs:
                    bad.append((p, q, b1, b2, i))
        report.record("derivation", count, bad)

    if "equivariance" in fast:
        count, bad = fast["equivariance"]()
        report.record("equivariance", count, bad, engine="vectorized")
    else:
        bad, count = [], 0
        for p, q, b1, b2, d1, d2 in pairs():
            for s in perm.all_permutations(p):
                for t in perm.all_permutations(q):
                    for i in range(1, p + 1):
                        count += 1
                        if count > instance_cap:
                            raise RuntimeError("equivariance family exceeds the instance cap")
                        j = perm.inverse(s)[i - 1]
                        lhs = op.compose(p, op.act_basis(p, b1, s), j, q,
                                         op.act_basis(q, b2, t))
                        comp = op.compose_basis(p, b1, i, q, b2)
                        rhs = op.act(p + q - 1, comp, perm.compose_partial(s, j, t))
                        if lhs != rhs:
                            bad.append((p, q, b1, b2, s, t, i))
        report.record("equivariance", count, bad)

    # associativity, sequential and parallel
    def triples():
        for p in arities:
            if p < 1:
                continue
            for q in arities:
                for r in arities:
                    if p + q + r - 2 > trunc.max_arity:
                        continue
                    for b1, d1 in basis_all(p):
                        for b2, d2 in basis_all(q):
                            for b3, d3 in basis_all(r):
                                if not trunc.dmin <= d1 + d2 + d3 <= trunc.dmax:
                                    continue
                                yield p, q, r, b1, b2, b3, d2, d3

    if "associativity" in fast:
        count, bad = fast["associativity"]()
        report.record("associativity", count, bad, engine="vectorized")
    else:
        bad, count = [], 0
        for p, q, r, b1, b2, b3, d2, d3 in triples():
            for i in range(1, p + 1):
                for j in range(1, q + 1):
                    count += 1
                    if count > instance_cap:
                        raise RuntimeError("associativity family exceeds the instance cap")
                    lhs = op.compose(p + q - 1, op.compose_basis(p, b1, i, q, b2),
                                     i + j - 1, r, {b3: f.one})
                    rhs = op.compose(p, {b1: f.one}, i, q + r - 1,
                                     op.compose_basis(q, b2, j, r, b3))
                    if lhs != rhs:
                        bad.append(("seq", p, q, r, b1, b2, b3, i, j))
            for i in range(1, p + 1):
                for k in range(i + 1, p + 1):
                    count += 1
                    lhs = op.compose(p + q - 1, op.compose_basis(p, b1, i, q, b2),
                                     k + q - 1, r, {b3: f.one})
                    rhs = op.compose(p + r - 1, op.compose_basis(p, b1, k, r, b3),
                                     i, q, {b2: f.one})
                    sgn = f.from_int(-1 if (d2 * d3) % 2 else 1)
                    rhs = {kk: f.mul(sgn, vv) for kk, vv in rhs.items()}
                    if lhs != rhs:
                        bad.append(("par", p, q, r, b1, b2, b3, i, k))
        report.record("associativity", count, bad)

    return report
