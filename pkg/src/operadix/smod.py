"""dg S-modules: the free functor - (x) S, the norm map, and sigma-components.

A quasi-free S-module is presented by its planar generators: a GeneratorBasis
whose diff(n, gid) lists the sigma-components of the differential, i.e.
d(g (x) Id) = sum_sigma d_sigma(g) (x) sigma.  The norm map and the
coinvariant/invariant computations work for arbitrary finite actions.
"""

from __future__ import annotations

from . import perm
from .linalg import row_reduce, solve_columns, vec_add_into


class NModule:
    """Arity-indexed chain complexes (no symmetric group action)."""

    def __init__(self, components):
        self.components = dict(components)

    def arities(self):
        return sorted(self.components)

    def __getitem__(self, n):
        return self.components[n]


class QuasiFreeSModule:
    """Free graded S-module on planar generators, with a not-necessarily-planar d.

    gens: {n: {gid: degree}}, dsig: {(n, gid): {(gid2, sigma): coeff}}.
    Basis elements are (gid, sigma) pairs; the right action is
    (g, sigma)^tau = (g, sigma tau).
    """

    def __init__(self, field, gens, dsig=None):
        self.field = field
        self.gens = {n: dict(v) for n, v in gens.items()}
        self.dsig = dict(dsig or {})

    def arities(self):
        return sorted(self.gens)

    def basis(self, n):
        out = []
        for g in sorted(self.gens.get(n, {}), key=repr):
            for sigma in perm.all_permutations(n):
                out.append((g, sigma))
        return out

    def deg(self, n, bid):
        return self.gens[n][bid[0]]

    def act_basis(self, n, bid, tau):
        g, sigma = bid
        return {(g, perm.compose(sigma, tau)): self.field.one}

    def diff_basis(self, n, bid):
        g, tau = bid
        out = {}
        for (g2, sigma), c in self.dsig.get((n, g), {}).items():
            vec_add_into(self.field, out, {(g2, perm.compose(sigma, tau)): self.field.coerce(c)})
        return out


def free_smodule(x, field=None):
    """The free S-module on a dg N-module: basis pairs (generator, permutation)."""
    gens = {}
    dsig = {}
    field = field or next(iter(x.components.values())).field
    for n in x.arities():
        comp = x[n]
        gens[n] = {b: comp.space.degree_of[b] for b in comp.space.degree_of}
        for b in comp.space.degree_of:
            col = comp.d.column(b)
            if col:
                dsig[(n, b)] = {(t, perm.identity(n)): c for t, c in col.items()}
    return QuasiFreeSModule(field, gens, dsig)


def operad_generators(op, trunc):
    """GeneratorBasis view of a quasi-free operad's planar generators.

    diff(n, gid) expands the operad differential of (gid tensor Id) back in
    (generator, permutation) coordinates.
    """
    from .operad import GeneratorBasis

    class _G(GeneratorBasis):
        def arities(self):
            return list(trunc.arities())

        def gens(self, n, d):
            return op.qf_gens(n, d)

        def deg(self, n, gid):
            return op.qf_deg(n, gid)

        def diff(self, n, gid):
            f = op.field
            out = {}
            for b, c in op.qf_join(n, gid, perm.identity(n)).items():
                for b2, c2 in op.diff_basis(n, b).items():
                    for key, c3 in op.qf_split(n, b2).items():
                        cur = f.add(out.get(key, f.zero), f.mul(c, f.mul(c2, c3)))
                        if cur == 0:
                            out.pop(key, None)
                        else:
                            out[key] = cur
            return out

    return _G()


def sigma_components(gens, n, gid):
    """Regroup d(g (x) Id) as {sigma: {gid2: coeff}}; reconstruction is exact."""
    out = {}
    for (g2, sigma), c in gens.diff(n, gid).items():
        out.setdefault(sigma, {})[g2] = c
    return out


def apply_dsigma(gens, field, n, vec, sigma):
    """d_sigma applied to a vector in generator coordinates."""
    out = {}
    for g, c in vec.items():
        comp = sigma_components(gens, n, g).get(sigma)
        if comp:
            vec_add_into(field, out, {g2: field.coerce(c2) for g2, c2 in comp.items()}, c)
    return out


def check_sigma_nilpotence(gens, field, n, gid, bound=20):
    """Smallest k <= bound with every length-k word d_{sigma_1}...d_{sigma_k} zero on gid.

    Returns (k, None) on success or (None, report) when the bound is exhausted.
    Levels track a reduced spanning set, so the search is linear in the span.
    """
    perms = perm.all_permutations(n)
    level = [{gid: field.one}]
    for k in range(bound + 1):
        if not level:
            return k, None
        nxt = []
        for v in level:
            for sigma in perms:
                w = apply_dsigma(gens, field, n, v, sigma)
                if w:
                    nxt.append(w)
        # prune to an independent set
        if nxt:
            rank, pivots, reduced, _ = row_reduce(nxt, field)
            nxt = [reduced[j] for j in sorted(set(pivots.values()))]
        level = nxt
    return None, {"bound": bound, "surviving": len(level)}


# -- norm map: coinvariants -> invariants --


class NormMapResult:
    def __init__(self, coinv_basis, inv_basis, matrix, invertible, inverse):
        self.coinv_basis = coinv_basis    # representatives (basis ids)
        self.inv_basis = inv_basis        # invariant vectors (dicts)
        self.matrix = matrix              # columns over inv_basis coordinates
        self.invertible = invertible
        self.inverse = inverse            # columns inv -> coinv coords, or None


def norm_map(basis, act, field, n):
    """The canonical map M_{S_n} -> M^{S_n}, x-bar |-> sum_sigma x^sigma.

    `basis` lists the basis ids of one degree of M(n); act(bid, sigma) returns
    the action as a sparse dict.  Returns a NormMapResult; invertibility holds
    exactly for (quasi-)free actions.
    """
    perms = perm.all_permutations(n)
    order = list(basis)
    # coinvariants: quotient by b^sigma - b
    relations = []
    for b in order:
        for sigma in perms[1:]:
            col = dict(act(b, sigma))
            col[b] = field.sub(col.get(b, field.zero), field.one)
            relations.append(col)
    rank, pivots, reduced, _ = row_reduce(relations, field, order)
    pivot_rows = set(pivots)
    coinv_basis = [b for b in order if b not in pivot_rows]

    def project(vec):
        cur = dict(vec)
        for r, k in sorted(pivots.items(), key=lambda kv: order.index(kv[0])):
            if r in cur:
                vec_add_into(field, cur, reduced[k], field.neg(cur[r]))
        return cur

    # invariants: common kernel of act(sigma) - Id over adjacent transpositions
    gens_sigma = [s for s in perms if _is_adjacent_transposition(s)] or list(perms[1:])
    stacked = []
    for b in order:
        col = {}
        for si, sigma in enumerate(gens_sigma):
            img = act(b, sigma)
            for t, c in img.items():
                key = (si, t)
                col[key] = field.add(col.get(key, field.zero), c)
            key = (si, b)
            col[key] = field.sub(col.get(key, field.zero), field.one)
        stacked.append({k: v for k, v in col.items() if v != 0})
    _, _, red, ops = row_reduce(stacked, field)
    inv_basis = []
    for j in range(len(order)):
        if not red[j]:
            vec = {order[k]: c for k, c in ops[j].items()}
            inv_basis.append(vec)

    # matrix of the norm in those bases
    inv_order = list(range(len(inv_basis)))
    # coordinates of an invariant vector: solve against inv_basis by elimination
    inv_cols = [dict(v) for v in inv_basis]
    _, inv_pivots, inv_reduced, inv_ops = row_reduce(inv_cols, field, order)

    def inv_coords(vec):
        cur = dict(vec)
        coords = {}
        while cur:
            r = min(cur, key=lambda x: order.index(x))
            if r not in inv_pivots:
                raise ValueError("vector not invariant")
            k = inv_pivots[r]
            c = cur[r]
            # reduced[k] has leading coefficient one at r
            coeff = c
            vec_add_into(field, cur, inv_reduced[k], field.neg(coeff))
            vec_add_into(field, coords, inv_ops[k], coeff)
        return coords

    matrix = []
    for b in coinv_basis:
        img = {}
        for sigma in perms:
            vec_add_into(field, img, act(b, sigma))
        matrix.append(inv_coords(img))
    # invertibility
    r = row_reduce(matrix, field)[0]
    invertible = (r == len(coinv_basis) == len(inv_basis))
    inverse = None
    if invertible:
        # solve matrix * x = e_j for each j
        inverse = _invert_columns(matrix, len(inv_basis), field)
    return NormMapResult(coinv_basis, inv_basis, matrix, invertible, inverse)


def _is_adjacent_transposition(sigma):
    n = len(sigma)
    diffs = [j for j in range(n) if sigma[j] != j + 1]
    return (len(diffs) == 2 and diffs[1] == diffs[0] + 1
            and sigma[diffs[0]] == diffs[1] + 1)


def _invert_columns(columns, nrows, field):
    """Inverse of a square matrix given column-wise, keys 0..nrows-1."""
    rows = list(range(nrows))
    out = []
    for k in range(nrows):
        sol = solve_columns(columns, {k: field.one}, field, rows)
        if sol is None:
            raise ValueError("matrix not invertible")
        out.append(sol)
    return out
