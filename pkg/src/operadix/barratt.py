"""The Barratt-Eccles dg operad: chains of permutations with shuffle compositions.

Basis of E(n) in degree m: sequences (s_0, ..., s_m) of permutations in S_n
with adjacent entries distinct; sequences violating this are identified with
zero.  Compositions sum over shuffles; the right action is entrywise right
multiplication; the differential is the alternating face sum.

Large axiom sweeps (arity 4, degree 4 has ~6.7M basis chains) run on numpy
index arrays; every family is verified exhaustively, either by literal
expansion or by an exhaustive table identity that lifts entrywise to chains.
The lift arguments live next to the code they justify.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import perm
from .linalg import vec_add_into
from .operad import Operad, Truncation


# -- permutation index tables -------------------------------------------------

@lru_cache(maxsize=16)
def perm_index(n):
    return {s: i for i, s in enumerate(perm.all_permutations(n))}


@lru_cache(maxsize=16)
def mul_table(n):
    """mul[a, b] = index of (perm_a composed with perm_b)."""
    perms = perm.all_permutations(n)
    idx = perm_index(n)
    size = len(perms)
    out = np.zeros((size, size), dtype=np.int16)
    for a, pa in enumerate(perms):
        for b, pb in enumerate(perms):
            out[a, b] = idx[perm.compose(pa, pb)]
    return out


@lru_cache(maxsize=64)
def comp_table(p, i, q):
    """Partial-composition index table S_p x S_q -> S_{p+q-1}."""
    ps = perm.all_permutations(p)
    qs = perm.all_permutations(q)
    idx = perm_index(p + q - 1)
    out = np.zeros((len(ps), len(qs)), dtype=np.int32)
    for a, mu in enumerate(ps):
        for b, psi in enumerate(qs):
            out[a, b] = idx[perm.compose_partial(mu, i, psi)]
    return out


@lru_cache(maxsize=64)
def comp_dicts(p, i, q):
    """Dict version of comp_table keyed by permutation tuples."""
    out = {}
    for mu in perm.all_permutations(p):
        row = {}
        for psi in perm.all_permutations(q):
            row[psi] = perm.compose_partial(mu, i, psi)
        out[mu] = row
    return out


# -- chains -------------------------------------------------------------------

def is_degenerate(chain):
    return any(chain[k] == chain[k + 1] for k in range(len(chain) - 1))


def be_differential(field, chain):
    """Alternating face sum with degenerate faces dropped."""
    out = {}
    m = len(chain) - 1
    if m == 0:
        return out
    for k in range(m + 1):
        face = chain[:k] + chain[k + 1:]
        if is_degenerate(face):
            continue
        vec_add_into(field, out, {face: field.from_int(-1 if k % 2 else 1)})
    return out


@lru_cache(maxsize=None)
def _shuffle_index_patterns(a, b):
    """For each (a,b)-shuffle: its sign and the (j_d, j_u) table for j = 0..a+b."""
    out = []
    for phi, eps in perm.shuffles(a, b):
        pattern = []
        for j in range(a + b + 1):
            jd = sum(1 for k in range(1, a + 1) if phi[k - 1] <= j)
            ju = sum(1 for k in range(a + 1, a + b + 1) if phi[k - 1] <= j)
            pattern.append((jd, ju))
        out.append((phi, eps, tuple(pattern)))
    return tuple(out)


def be_compose_shuffle(field, p, x, i, q, y, phi):
    """The single-shuffle composite x o_{i,phi} y (may be degenerate -> {})."""
    a, b = len(x) - 1, len(y) - 1
    table = comp_dicts(p, i, q)
    for phi2, eps, pattern in _shuffle_index_patterns(a, b):
        if phi2 == phi:
            chain = tuple(table[x[jd]][y[ju]] for jd, ju in pattern)
            if is_degenerate(chain):
                return {}
            return {chain: field.one}
    raise ValueError("not an (a,b)-shuffle")


def be_compose(field, p, x, i, q, y):
    """Partial composition in E: sum over (a,b)-shuffles with signs."""
    if not 1 <= i <= p:
        raise ValueError("slot %d out of range 1..%d" % (i, p))
    a, b = len(x) - 1, len(y) - 1
    table = comp_dicts(p, i, q)
    out = {}
    for phi, eps, pattern in _shuffle_index_patterns(a, b):
        chain = tuple(table[x[jd]][y[ju]] for jd, ju in pattern)
        if is_degenerate(chain):
            continue
        vec_add_into(field, out, {chain: field.from_int(eps)})
    return out


def rho(n, word):
    """Running-product chain (Id, s_k, s_{k-1}s_k, ..., s_1...s_k); 0 if degenerate."""
    entries = [perm.identity(n)]
    for s in reversed(word):
        entries.append(perm.compose(s, entries[-1]))
    chain = tuple(entries)
    return None if is_degenerate(chain) else chain


def inv_chain(chain):
    return tuple(reversed(chain))


def be_diagonal(field, chain):
    """Hadamard comonoid: sum of (prefix, suffix) splittings."""
    out = {}
    m = len(chain) - 1
    for k in range(m + 1):
        key = (chain[:k + 1], chain[k:])
        vec_add_into(field, out, {key: field.one})
    return out


def be_counit(field, chain):
    """Projection E -> uCom: degree-0 chains map to the canonical generator."""
    return {"e": field.one} if len(chain) == 1 else {}


def prepend_identity(field, n, chain):
    """The contracting homotopy: prepend the identity permutation."""
    ident = perm.identity(n)
    if chain and chain[0] == ident:
        return {}
    return {(ident,) + chain: field.one}


class BarrattEccles(Operad):
    """E as an Operad; heavy axiom families run vectorized (see fast_axiom_families)."""

    name = "E"
    MATERIALIZE_CAP = 400_000

    def __init__(self, field):
        super().__init__(field)

    def chain_count(self, n, d):
        size = len(perm.all_permutations(n))
        if d == 0:
            return size
        return size * (size - 1) ** d

    @lru_cache(maxsize=256)
    def basis(self, n, d):
        if d < 0:
            return ()
        if self.chain_count(n, d) > self.MATERIALIZE_CAP:
            raise ValueError("E(%d) degree %d basis too large to materialize; "
                             "use chain_array()" % (n, d))
        perms = perm.all_permutations(n)
        if d == 0:
            return tuple((s,) for s in perms)
        out = []
        for prefix in self.basis(n, d - 1):
            last = prefix[-1]
            for s in perms:
                if s != last:
                    out.append(prefix + (s,))
        return tuple(out)

    def deg(self, n, bid):
        return len(bid) - 1

    def unit(self):
        return ((1,),)

    def diff_basis(self, n, bid):
        return be_differential(self.field, bid)

    def compose_basis(self, p, b1, i, q, b2):
        return be_compose(self.field, p, b1, i, q, b2)

    def act_basis(self, n, bid, sigma):
        return {tuple(perm.compose(s, sigma) for s in bid): self.field.one}

    # quasi-free presentation: E_pl = chains starting at the identity
    def is_quasi_free(self):
        return True

    def qf_gens(self, n, d):
        ident = perm.identity(n)
        return tuple(c for c in self.basis(n, d) if c[0] == ident)

    def qf_deg(self, n, gid):
        return len(gid) - 1

    def qf_split(self, n, bid):
        s0 = bid[0]
        inv = perm.inverse(s0)
        gen = tuple(perm.compose(s, inv) for s in bid)
        return {(gen, s0): self.field.one}

    def qf_join(self, n, gid, sigma):
        return {tuple(perm.compose(s, sigma) for s in gid): self.field.one}

    # -- numpy basis arrays --

    @lru_cache(maxsize=64)
    def chain_array(self, n, d):
        """Basis chains as an index array of shape (count, d+1), ranked order.

        Row order: s_0 index, then each next entry ranked among the indices
        different from its predecessor; chain_rank() inverts it.
        """
        size = len(perm.all_permutations(n))
        if d == 0:
            return np.arange(size, dtype=np.int16).reshape(size, 1)
        prev = self.chain_array(n, d - 1)
        reps = np.repeat(prev, size - 1, axis=0)
        ranks = np.tile(np.arange(size - 1, dtype=np.int16), prev.shape[0])
        last = reps[:, -1]
        nxt = ranks + (ranks >= last)
        return np.column_stack([reps, nxt.astype(np.int16)])

    def chain_rank(self, n, arr):
        """Row indices of chains (given as index arrays) in chain_array order."""
        size = len(perm.all_permutations(n))
        d = arr.shape[1] - 1
        out = arr[:, 0].astype(np.int64)
        for j in range(1, d + 1):
            rank = arr[:, j] - (arr[:, j] > arr[:, j - 1])
            out = out * (size - 1) + rank
        return out

    def fast_axiom_families(self, trunc):
        return {
            "d_squared": lambda: _sweep_d_squared(self, trunc),
            "action": lambda: _sweep_action(self, trunc),
            "unit": lambda: _sweep_unit(self, trunc),
            "derivation": lambda: _sweep_derivation(self, trunc),
            "equivariance": lambda: _sweep_equivariance(self, trunc),
            "associativity": lambda: _sweep_associativity(self, trunc),
        }


# -- vectorized exhaustive sweeps ----------------------------------------------
#
# Chains are rows of index arrays.  A term list is (keys, signs, mask): packed
# subsequence keys per row, combined with the row id, accumulated by sorting.
# Integer sums are checked to vanish exactly (hence over every field).


def _pack(rows, width_bits=5):
    out = np.zeros(rows.shape[0], dtype=np.uint64)
    for j in range(rows.shape[1]):
        out = (out << np.uint64(width_bits)) | rows[:, j].astype(np.uint64)
    return out


def _accumulate_zero(entries):
    """entries: list of (combined_key uint64 array, sign int8 array). True if all sums vanish."""
    if not entries:
        return True
    keys = np.concatenate([k for k, s in entries])
    signs = np.concatenate([s for k, s in entries]).astype(np.int32)
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    signs = signs[order]
    boundaries = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    sums = np.add.reduceat(signs, boundaries)
    return bool(np.all(sums == 0))


def _faces(B):
    """All faces of the rows of B: list over k of (face_array, nondeg_mask, sign)."""
    m = B.shape[1] - 1
    out = []
    for k in range(m + 1):
        face = np.delete(B, k, axis=1)
        if 1 <= k <= m - 1:
            nondeg = B[:, k - 1] != B[:, k + 1]
        else:
            nondeg = np.ones(B.shape[0], dtype=bool)
        out.append((face, nondeg, (-1) ** k))
    return out


def _chunks(total, size=500_000):
    for lo in range(0, total, size):
        yield lo, min(lo + size, total)


def _sweep_d_squared(op, trunc):
    count, bad = 0, []
    for n in trunc.arities():
        for m in range(max(trunc.dmin, 0), trunc.dmax + 1):
            B_full = op.chain_array(n, m)
            count += B_full.shape[0]
            if m < 2:
                continue  # d*d lands in negative length; zero by definition
            for lo, hi in _chunks(B_full.shape[0]):
                B = B_full[lo:hi]
                rows = np.arange(B.shape[0], dtype=np.uint64) << np.uint64(40)
                entries = []
                for face, nondeg, sgn in _faces(B):
                    for face2, nondeg2, sgn2 in _faces(face):
                        mask = nondeg & nondeg2
                        keys = (rows + _pack(face2))[mask]
                        signs = np.full(keys.shape[0], sgn * sgn2, dtype=np.int8)
                        entries.append((keys, signs))
                if not _accumulate_zero(entries):
                    bad.append(("d_squared", n, m))
                    break
    return count, bad


def homotopy_certificate(op, n, dmax):
    """Verify del(h) = Id - pi_uCom basis-wise on E(n) up to degree dmax.

    h prepends the identity permutation; pi projects degree 0 onto the
    identity chain.  Exact integer cancellation, so the identity holds over
    every ground field.
    """
    ident_idx = perm_index(n)[perm.identity(n)]
    for m in range(0, dmax + 1):
        B_full = op.chain_array(n, m)
        for lo, hi in _chunks(B_full.shape[0]):
            B = B_full[lo:hi]
            rows = np.arange(B.shape[0], dtype=np.uint64) << np.uint64(40)
            entries = []
            ident_col = np.full((B.shape[0], 1), ident_idx, dtype=B.dtype)
            hB = np.column_stack([ident_col, B])
            h_ok = B[:, 0] != ident_idx
            # d(h(x))
            for face, nondeg, sgn in _faces(hB):
                mask = h_ok & nondeg
                keys = (rows + _pack(face))[mask]
                entries.append((keys, np.full(keys.shape[0], sgn, dtype=np.int8)))
            # h(d(x))
            if m >= 1:
                for face, nondeg, sgn in _faces(B):
                    hface = np.column_stack([ident_col[:, :1], face])
                    mask = nondeg & (face[:, 0] != ident_idx)
                    keys = (rows + _pack(hface))[mask]
                    entries.append((keys, np.full(keys.shape[0], sgn, dtype=np.int8)))
            # -(x - pi(x))
            keys = rows + _pack(B)
            entries.append((keys, np.full(keys.shape[0], -1, dtype=np.int8)))
            if m == 0:
                pi_keys = rows + _pack(ident_col)
                entries.append((pi_keys, np.full(B.shape[0], 1, dtype=np.int8)))
            if not _accumulate_zero(entries):
                return False
    return True


def _sweep_action(op, trunc):
    # (x^s)^t = x^{st} and d(x^s) = d(x)^s lift entrywise from the tables:
    # right multiplication by a fixed permutation is bijective, so it maps
    # chains to chains preserving adjacent-equality patterns, and faces of an
    # entrywise-mapped chain are the entrywise-mapped faces.  The tables are
    # checked exhaustively; small arities also get a literal chain sweep.
    count, bad = 0, []
    for n in trunc.arities():
        perms = perm.all_permutations(n)
        idx = perm_index(n)
        mul = mul_table(n)
        for a in range(len(perms)):
            for b in range(len(perms)):
                count += len(perms)
                if not np.array_equal(mul[mul[a, b]], mul[a][mul[b]]):
                    bad.append(("mul_assoc", n, a, b))
        e = idx[perm.identity(n)]
        count += len(perms)
        if not (np.array_equal(mul[:, e], np.arange(len(perms))) and
                np.array_equal(mul[e, :], np.arange(len(perms)))):
            bad.append(("mul_identity", n))
        if op.chain_count(n, trunc.dmax) > op.MATERIALIZE_CAP:
            continue
        f = op.field
        for m in range(max(trunc.dmin, 1), trunc.dmax + 1):
            for chain in op.basis(n, m):
                for s in perms:
                    count += 1
                    lhs = op.act(n, op.diff_basis(n, chain), s)
                    rhs = op.diff(n, op.act_basis(n, chain, s))
                    if lhs != rhs:
                        bad.append(("action_diff", n, m, chain, s))
    return count, bad


def _sweep_unit(op, trunc):
    # x o_i 1 = x and 1 o_1 x = x reduce entrywise to the composition tables
    # (degree pairing with a one-point degree-0 chain has a single shuffle);
    # the tables are checked exhaustively, and entrywise identities preserve
    # adjacency patterns, so the chain-level law follows for every basis chain.
    count, bad = 0, []
    for n in trunc.arities():
        if n < 1:
            continue
        perms = perm.all_permutations(n)
        for i in range(1, n + 1):
            tab = comp_table(n, i, 1)
            count += len(perms)
            if not np.array_equal(tab[:, 0], np.arange(len(perms))):
                bad.append(("right_unit_table", n, i))
        tab = comp_table(1, 1, n)
        count += len(perms)
        if not np.array_equal(tab[0, :], np.arange(len(perms))):
            bad.append(("left_unit_table", n))
    return count, bad


def _loop_pairs(op, trunc, p, q):
    for d1 in range(max(trunc.dmin, 0), trunc.dmax + 1):
        for b1 in op.basis(p, d1):
            for d2 in range(max(trunc.dmin, 0), trunc.dmax + 1 - d1):
                for b2 in op.basis(q, d2):
                    yield b1, b2, d1, d2


def _splits(op, trunc, arities_list):
    """Degree splits (d_1, ..., d_k) with total <= dmax, flagged big when some
    factor slice exceeds the materialization cap."""
    k = len(arities_list)
    for degs in itertools.product(range(0, trunc.dmax + 1), repeat=k):
        if sum(degs) > trunc.dmax:
            continue
        big = any(op.chain_count(n, d) > op.MATERIALIZE_CAP
                  for n, d in zip(arities_list, degs))
        yield degs, big


def _sweep_derivation(op, trunc):
    f = op.field
    count, bad = 0, []
    arities = [n for n in trunc.arities()]
    shapes = [(p, q) for p in arities for q in arities
              if p >= 1 and p + q - 1 <= trunc.max_arity]
    for p, q in shapes:
        if q == 1 or p == 1:
            continue  # composition with the 1-dim degree-0 arity-1 part is the unit law
        if q != 0:
            for (d1, d2), big in _splits(op, trunc, [p, q]):
                if not big:
                    for b1 in op.basis(p, d1):
                        for b2 in op.basis(q, d2):
                            for i in range(1, p + 1):
                                count += 1
                                comp = op.compose_basis(p, b1, i, q, b2)
                                lhs = op.diff(p + q - 1, comp)
                                rhs = op.compose(p, op.diff_basis(p, b1), i, q, {b2: f.one})
                                sgn = f.from_int(-1 if d1 % 2 else 1)
                                vec_add_into(f, rhs, op.compose(p, {b1: f.one}, i, q,
                                                                op.diff_basis(q, b2)), sgn)
                                if lhs != rhs:
                                    bad.append((p, q, b1, b2, i))
                else:
                    # big slice is the left factor with a degree-0 right factor:
                    # x o_i y is the injective entrywise map mu -> mu o_i psi of
                    # the chain x, so faces commute with it and degeneracy
                    # patterns agree; d(y) = 0.  Verify the injectivity.
                    assert d2 == 0
                    for b2 in op.basis(q, d2):
                        psi = b2[0]
                        for i in range(1, p + 1):
                            count += len(perm.all_permutations(p))
                            col = [perm.compose_partial(mu, i, psi)
                                   for mu in perm.all_permutations(p)]
                            if len(set(col)) != len(col):
                                bad.append(("derivation_inj", p, q, i, psi))
        else:
            # d(x o_i u) = d(x) o_i u literally, keyed accumulation (the
            # deletion tables are not injective, so degeneracy collisions are real)
            for m in range(max(trunc.dmin, 1), trunc.dmax + 1):
                B_full = op.chain_array(p, m)
                for i in range(1, p + 1):
                    dl = comp_table(p, i, 0)[:, 0]
                    for lo, hi in _chunks(B_full.shape[0]):
                        B = B_full[lo:hi]
                        count += B.shape[0]
                        rows = np.arange(B.shape[0], dtype=np.uint64) << np.uint64(40)
                        C = dl[B]
                        cnd = np.ones(B.shape[0], dtype=bool)
                        for k in range(m):
                            cnd &= C[:, k] != C[:, k + 1]
                        entries = []
                        for face, nd, sgn in _faces(C):
                            fn = np.ones(face.shape[0], dtype=bool)
                            for k in range(m - 1):
                                fn &= face[:, k] != face[:, k + 1]
                            keys = (rows + _pack(face))[cnd & fn]
                            entries.append((keys, np.full(keys.shape[0], sgn, dtype=np.int8)))
                        for face, nd, sgn in _faces(B):
                            mapped = dl[face]
                            fn = nd.copy()
                            for k in range(m - 1):
                                fn &= mapped[:, k] != mapped[:, k + 1]
                            keys = (rows + _pack(mapped))[fn]
                            entries.append((keys, np.full(keys.shape[0], -sgn, dtype=np.int8)))
                        if not _accumulate_zero(entries):
                            bad.append(("derivation", p, 0, m, i))
                            break
    return count, bad


def _sweep_equivariance(op, trunc):
    f = op.field
    count, bad = 0, []
    arities = list(trunc.arities())
    shapes = [(p, q) for p in arities for q in arities
              if p >= 1 and p + q - 1 <= trunc.max_arity]
    for p, q in shapes:
        if p == 1 or q == 1:
            continue  # forced by the unit law and the table identities below
        if q != 0:
            for (d1, d2), big in _splits(op, trunc, [p, q]):
                if not big:
                    for b1 in op.basis(p, d1):
                        for b2 in op.basis(q, d2):
                            for s in perm.all_permutations(p):
                                for t in perm.all_permutations(q):
                                    for i in range(1, p + 1):
                                        count += 1
                                        j = perm.inverse(s)[i - 1]
                                        lhs = op.compose(p, op.act_basis(p, b1, s), j, q,
                                                         op.act_basis(q, b2, t))
                                        rhs = op.act(p + q - 1,
                                                     op.compose_basis(p, b1, i, q, b2),
                                                     perm.compose_partial(s, j, t))
                                        if lhs != rhs:
                                            bad.append((p, q, b1, b2, s, t, i))
                else:
                    # big left slice, degree-0 right factor: both sides are
                    # the same entrywise map of the chain (checked on every
                    # permutation entry), so the chain identity lifts.
                    assert d2 == 0
                    for b2 in op.basis(q, d2):
                        psi = b2[0]
                        for s in perm.all_permutations(p):
                            for t in perm.all_permutations(q):
                                for i in range(1, p + 1):
                                    j = perm.inverse(s)[i - 1]
                                    c0 = perm.compose_partial(s, j, t)
                                    for mu in perm.all_permutations(p):
                                        count += 1
                                        lhs = perm.compose_partial(
                                            perm.compose(mu, s), j, perm.compose(psi, t))
                                        rhs = perm.compose(
                                            perm.compose_partial(mu, i, psi), c0)
                                        if lhs != rhs:
                                            bad.append(("equi_table", p, q, s, t, i, mu))
        elif q == 0:
            # literal vectorized check over every sigma and slot
            perms = perm.all_permutations(p)
            mul = mul_table(p)
            mul_low = mul_table(p - 1)
            idx_low = perm_index(p - 1)
            for m in range(max(trunc.dmin, 0), trunc.dmax + 1):
                B_full = op.chain_array(p, m)
                for lo, hi in _chunks(B_full.shape[0]):
                    B = B_full[lo:hi]
                    for si, s in enumerate(perms):
                        sinv = perm.inverse(s)
                        for i in range(1, p + 1):
                            count += B.shape[0]
                            j = sinv[i - 1]
                            lhs = comp_table(p, j, 0)[:, 0][mul[:, si][B]]
                            c0 = idx_low[perm.compose_partial(s, j, ())]
                            rhs = mul_low[:, c0][comp_table(p, i, 0)[:, 0][B]]
                            if not np.array_equal(lhs, rhs):
                                bad.append(("equivariance", p, 0, m, s, i))
                                break
    return count, bad


def _sweep_associativity(op, trunc):
    f = op.field
    count, bad = 0, []
    arities = list(trunc.arities())
    shapes = [(p, q, r) for p in arities for q in arities for r in arities
              if p >= 1 and p + q + r - 2 <= trunc.max_arity]
    for p, q, r in shapes:
        if 1 in (p, q, r):
            continue  # a unit factor reduces both sides by the (checked) unit law
        for (d1, d2, d3), big in _splits(op, trunc, [p, q, r]):
            if not big:
                for b1 in op.basis(p, d1):
                    for b2 in op.basis(q, d2):
                        for b3 in op.basis(r, d3):
                            count += _assoc_check(op, f, p, q, r, b1, b2, b3,
                                                  d2, d3, bad)
            else:
                # exactly one factor slice is big and the other two sit in
                # degree 0, where composition acts entrywise; both sides of
                # each axiom are then entrywise maps of the same big chain,
                # and verifying the maps on every permutation entry proves
                # the identity for every chain in the slice.
                degs = (d1, d2, d3)
                bigpos = max(range(3), key=lambda k: op.chain_count((p, q, r)[k], degs[k]))
                count += _assoc_tables(op, p, q, r, bigpos, bad)
    return count, bad


def _entry_maps_for_assoc(op, p, q, r, bigpos, mu, psi):
    """Sequential/parallel axiom sides as entry maps over the big factor's S_n.

    mu, psi are the degree-0 entries of the two small factors (in factor
    order, skipping the big one).  Returns a list of
    (tag, slots, lhs_map, rhs_map) with maps as index arrays.
    """
    out = []
    small = [mu, psi]
    nbig = (p, q, r)[bigpos]
    size = len(perm.all_permutations(nbig))
    idx_of = {s: k for k, s in enumerate(perm.all_permutations(nbig))}
    base = np.arange(size)

    def col_right(pp, i, qq, psi_):
        # mu -> mu o_i psi_, as a map on indices of S_pp
        t = comp_table(pp, i, qq)
        return t[:, perm_index(qq)[psi_]]

    def col_left(pp, i, qq, mu_):
        # psi -> mu_ o_i psi, as a map on indices of S_qq
        t = comp_table(pp, i, qq)
        return t[perm_index(pp)[mu_], :]

    for i in range(1, p + 1):
        for j in range(1, q + 1):
            # sequential: (x o_i y) o_{i+j-1} z == x o_i (y o_j z)
            if bigpos == 0:
                lhs = col_right(p + q - 1, i + j - 1, r, psi)[col_right(p, i, q, mu)]
                rhs = col_right(p, i, q + r - 1,
                                perm.compose_partial(mu, j, psi))
                out.append(("seq", (i, j), lhs, rhs))
            elif bigpos == 1:
                lhs = col_right(p + q - 1, i + j - 1, r, psi)[col_left(p, i, q, mu)]
                rhs = col_left(p, i, q + r - 1, mu)[col_right(q, j, r, psi)]
                out.append(("seq", (i, j), lhs, rhs))
            else:
                lhs = col_left(p + q - 1, i + j - 1, r,
                               perm.compose_partial(mu, i, psi))
                rhs = col_left(p, i, q + r - 1, mu)[col_left(q, j, r, psi)]
                out.append(("seq", (i, j), lhs, rhs))
    for i in range(1, p + 1):
        for k in range(i + 1, p + 1):
            # parallel: (x o_i y) o_{k+q-1} z == (x o_k z) o_i y (degree 0: no sign)
            if bigpos == 0:
                lhs = col_right(p + q - 1, k + q - 1, r, psi)[col_right(p, i, q, mu)]
                rhs = col_right(p + r - 1, i, q, mu)[col_right(p, k, r, psi)]
                out.append(("par", (i, k), lhs, rhs))
            elif bigpos == 1:
                lhs = col_right(p + q - 1, k + q - 1, r, psi)[col_left(p, i, q, mu)]
                rhs = col_left(p + r - 1, i, q, perm.compose_partial(mu, k, psi))
                out.append(("par", (i, k), lhs, rhs))
            else:
                lhs = col_left(p + q - 1, k + q - 1, r,
                               perm.compose_partial(mu, i, psi))
                rhs = col_right(p + r - 1, i, q, psi)[col_left(p, k, r, mu)]
                out.append(("par", (i, k), lhs, rhs))
    return out


def _assoc_tables(op, p, q, r, bigpos, bad):
    smalls = [n for k, n in enumerate((p, q, r)) if k != bigpos]
    count = 0
    for mu_chain in op.basis(smalls[0], 0):
        for psi_chain in op.basis(smalls[1], 0):
            mu, psi = mu_chain[0], psi_chain[0]
            for tag, slots, lhs, rhs in _entry_maps_for_assoc(op, p, q, r,
                                                              bigpos, mu, psi):
                count += lhs.shape[0]
                if not np.array_equal(lhs, rhs):
                    bad.append(("assoc_table", tag, p, q, r, bigpos, mu, psi, slots))
    return count


def _assoc_check(op, f, p, q, r, b1, b2, b3, d2, d3, bad):
    n = 0
    for i in range(1, p + 1):
        for j in range(1, q + 1):
            n += 1
            lhs = op.compose(p + q - 1, op.compose_basis(p, b1, i, q, b2),
                             i + j - 1, r, {b3: f.one})
            rhs = op.compose(p, {b1: f.one}, i, q + r - 1,
                             op.compose_basis(q, b2, j, r, b3))
            if lhs != rhs:
                bad.append(("seq", p, q, r, b1, b2, b3, i, j))
    for i in range(1, p + 1):
        for k in range(i + 1, p + 1):
            n += 1
            lhs = op.compose(p + q - 1, op.compose_basis(p, b1, i, q, b2),
                             k + q - 1, r, {b3: f.one})
            rhs = op.compose(p + r - 1, op.compose_basis(p, b1, k, r, b3),
                             i, q, {b2: f.one})
            sgn = f.from_int(-1 if (d2 * d3) % 2 else 1)
            rhs = {kk: f.mul(sgn, vv) for kk, vv in rhs.items()}
            if lhs != rhs:
                bad.append(("par", p, q, r, b1, b2, b3, i, k))
    return n


# -- homology of E(n) ----------------------------------------------------------


def _rank_gf2_packed(cols_rows, nrows):
    """Rank over GF(2); input is a list of row-index arrays (one per column)."""
    words = (nrows + 63) // 64
    mat = np.zeros((len(cols_rows), words), dtype=np.uint64)
    for j, rows in enumerate(cols_rows):
        for rix in rows:
            mat[j, rix >> 6] ^= np.uint64(1) << np.uint64(rix & 63)
    rank = 0
    rows_used = np.zeros(len(cols_rows), dtype=bool)
    for bit in range(nrows):
        w, b = bit >> 6, np.uint64(bit & 63)
        colbit = (mat[:, w] >> b) & np.uint64(1)
        cand = np.flatnonzero((colbit == 1) & ~rows_used)
        if cand.size == 0:
            continue
        piv = cand[0]
        rows_used[piv] = True
        rank += 1
        others = np.flatnonzero((colbit == 1) & ~rows_used)
        if others.size:
            mat[others] ^= mat[piv]
    return rank


def _rank_gfp_int8(cols_rows_signs, nrows, p):
    """Rank over GF(p), eliminating along the smaller dimension."""
    ncols = len(cols_rows_signs)
    if ncols <= nrows:
        mat = np.zeros((ncols, nrows), dtype=np.int64)
        for j, (rows, signs) in enumerate(cols_rows_signs):
            np.add.at(mat[j], rows, signs)
    else:
        mat = np.zeros((nrows, ncols), dtype=np.int64)
        for j, (rows, signs) in enumerate(cols_rows_signs):
            np.add.at(mat[:, j], rows, signs)
    mat %= p
    rank = 0
    rows_left = list(range(mat.shape[0]))
    col = 0
    ncol = mat.shape[1]
    r = 0
    while r < mat.shape[0] and col < ncol:
        cand = np.flatnonzero(mat[r:, col] != 0)
        if cand.size == 0:
            col += 1
            continue
        piv = r + cand[0]
        if piv != r:
            mat[[r, piv]] = mat[[piv, r]]
        inv = pow(int(mat[r, col]), p - 2, p)
        mat[r, col:] = (mat[r, col:] * inv) % p
        below = np.flatnonzero(mat[r + 1:, col] != 0)
        if below.size:
            idx = below + r + 1
            mat[idx, col:] = (mat[idx, col:] - np.outer(mat[idx, col], mat[r, col:])) % p
        rank += 1
        r += 1
        col += 1
    return rank


def be_boundary_columns(op, n, m):
    """Faces of every degree-m chain as (row-index arrays, sign arrays)."""
    B = op.chain_array(n, m)
    cols_rows = []
    faces = _faces(B)
    rowlists = []
    signlists = []
    for face, nondeg, sgn in faces:
        ranks = op.chain_rank(n, face)
        rowlists.append((ranks, nondeg, sgn))
    out = []
    for jrow in range(B.shape[0]):
        rows = []
        signs = []
        for ranks, nondeg, sgn in rowlists:
            if nondeg[jrow]:
                rows.append(int(ranks[jrow]))
                signs.append(sgn)
        out.append((np.array(rows, dtype=np.int64), np.array(signs, dtype=np.int16)))
    return out


def be_homology_dims_by_elimination(field, n, dmax):
    """dim H_d(E(n)) for 0 <= d <= dmax by Gaussian elimination (numpy, exact mod p)."""
    op = BarrattEccles(field)
    p = field.p
    if p is None:
        raise ValueError("elimination path expects a finite prime field")
    ranks = {0: 0}
    dims = {}
    for m in range(1, dmax + 2):
        cols = be_boundary_columns(op, n, m)
        nrows = op.chain_array(n, m - 1).shape[0]
        if p == 2:
            ranks[m] = _rank_gf2_packed([rows for rows, _ in cols], nrows)
        else:
            ranks[m] = _rank_gfp_int8(cols, nrows, p)
    for d in range(0, dmax + 1):
        dim_d = op.chain_array(n, d).shape[0]
        dims[d] = dim_d - ranks[d] - ranks[d + 1]
    return dims
