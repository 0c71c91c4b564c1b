"""Symmetric groups, shuffles, and the permutation combinatorics of sequence composition.

Permutations are tuples of 1-indexed images (one-line notation); slots are
1-indexed throughout.  Composition is (a*b)(x) = a(b(x)).
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def identity(n):
    return tuple(range(1, n + 1))


def is_identity(sigma):
    return all(v == i + 1 for i, v in enumerate(sigma))


def compose(a, b):
    """(a*b)(x) = a(b(x)); both in the same S_n."""
    return tuple(a[v - 1] for v in b)


def inverse(sigma):
    out = [0] * len(sigma)
    for i, v in enumerate(sigma):
        out[v - 1] = i + 1
    return tuple(out)


@lru_cache(maxsize=100000)
def sign(sigma):
    """Signature by inversion count."""
    inv = 0
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                inv += 1
    return -1 if inv % 2 else 1


@lru_cache(maxsize=16)
def all_permutations(n):
    """S_n in lexicographic order."""
    return tuple(itertools.permutations(range(1, n + 1)))


def compose_partial(mu, i, psi):
    """Block substitution mu o_i psi for the set-level associative operad.

    mu in S_p, psi in S_q, 1 <= i <= p; result in S_{p+q-1}.  The q-block is
    substituted at input i of mu; its outputs occupy mu(i)..mu(i)+q-1.
    Supports q = 0 (input i and output mu(i) are deleted).
    """
    p, q = len(mu), len(psi)
    if not 1 <= i <= p:
        raise ValueError("slot %d out of range 1..%d" % (i, p))
    mi = mu[i - 1]
    shift = lambda v: v if v < mi else v + q - 1
    out = []
    for j in range(1, p + q):
        if j < i:
            out.append(shift(mu[j - 1]))
        elif j <= i + q - 1:
            out.append(mi - 1 + psi[j - i])
        else:
            out.append(shift(mu[j - q]))
    return tuple(out)


def delete_slot(mu, i):
    """mu o_i () : S_p -> S_{p-1}."""
    return compose_partial(mu, i, ())


def shuffles(a, b):
    """All (a,b)-shuffles with their signs, deterministic order.

    Returns a list of (perm, sign) where perm(1)<...<perm(a) and
    perm(a+1)<...<perm(a+b).
    """
    out = []
    universe = range(1, a + b + 1)
    for first in itertools.combinations(universe, a):
        rest = [x for x in universe if x not in first]
        perm = tuple(list(first) + rest)
        out.append((perm, sign(perm)))
    return out


def opposite_shuffle(phi, a, b):
    """Reverse both blocks, apply phi, reverse the output segment."""
    out = []
    for j in range(1, a + b + 1):
        if j <= a:
            out.append(a + b + 1 - phi[a + 1 - j - 1])
        else:
            out.append(a + b + 1 - phi[2 * a + b + 1 - j - 1])
    return tuple(out)


def ltimes(mus, i, psis):
    """Twisted sequence composition: sigma_j = mu_j o_{mu_j^-1...mu_1^-1(i)} psi_j."""
    if len(mus) != len(psis):
        raise ValueError("sequence length mismatch")
    out = []
    s = i
    for mu, psi in zip(mus, psis):
        s = inverse(mu)[s - 1]
        out.append(compose_partial(mu, s, psi))
    return tuple(out)


def sequence_slot(mus, i):
    """mu_k^-1 ... mu_1^-1 (i)."""
    s = i
    for mu in mus:
        s = inverse(mu)[s - 1]
    return s


def interleave(mus, p, psis, q, phi):
    """The padded pair (phi(mus + Id_p^b), phi(Id_q^a + psis))."""
    a, b = len(mus), len(psis)
    inv = inverse(phi)
    left, right = [], []
    for j in range(1, a + b + 1):
        k = inv[j - 1]
        if k <= a:
            left.append(mus[k - 1])
            right.append(identity(q))
        else:
            left.append(identity(p))
            right.append(psis[k - a - 1])
    return tuple(left), tuple(right)


def shuffle_compose(mus, p, i, psis, q, phi):
    """mus o_{i,phi} psis; entries of mus/psis must be nontrivial."""
    for mu in mus:
        if is_identity(mu):
            raise ValueError("trivial permutation in left sequence")
    for psi in psis:
        if is_identity(psi):
            raise ValueError("trivial permutation in right sequence")
    left, right = interleave(mus, p, psis, q, phi)
    return ltimes(left, i, right)


def _segment_decode(sigma, s, p, q):
    """Decode sigma = mu o_{mu^-1(s)} psi if sigma^-1 maps [s..s+q-1] to a segment.

    Returns (mu, psi, t) with t the input-block start, or None.
    """
    n = len(sigma)
    inv = inverse(sigma)
    block = [inv[s - 1 + m] for m in range(q)]
    t = min(block)
    if sorted(block) != list(range(t, t + q)):
        return None
    psi = tuple(sigma[t - 1 + m] - (s - 1) for m in range(q))
    # collapse: inputs [t..t+q-1] become single input t; outputs [s..s+q-1] become s
    collapsed = []
    for j in range(1, n + 1):
        if t < j <= t + q - 1:
            continue
        v = s if j == t else sigma[j - 1]
        collapsed.append(v if v <= s else v - (q - 1))
    return tuple(collapsed), psi, t


def is_admissible(seq, p, q, i):
    """Admissibility test for a sequence of nontrivial permutations in S_{p+q-1}.

    Returns (True, (mus, psis, phi)) with the unique witness such that
    shuffle_compose(mus, p, i, psis, q, phi) == seq, or (False, None).
    Requires q >= 1.
    """
    if q < 1:
        raise ValueError("admissibility decode requires q >= 1")
    for sigma in seq:
        if is_identity(sigma):
            return False, None
    s = i
    mus, psis, pattern = [], [], []
    for sigma in seq:
        dec = _segment_decode(sigma, s, p, q)
        if dec is None:
            return False, None
        mu, psi, t = dec
        mu_triv, psi_triv = is_identity(mu), is_identity(psi)
        if mu_triv == psi_triv:
            return False, None
        if psi_triv:
            mus.append(mu)
            pattern.append("m")
        else:
            psis.append(psi)
            pattern.append("p")
        s = t
    a, b = len(mus), len(psis)
    phi = [0] * (a + b)
    mpos = [j + 1 for j, c in enumerate(pattern) if c == "m"]
    ppos = [j + 1 for j, c in enumerate(pattern) if c == "p"]
    for k, j in enumerate(mpos):
        phi[k] = j
    for k, j in enumerate(ppos):
        phi[a + k] = j
    return True, (tuple(mus), tuple(psis), tuple(phi))


def block_perm(sigma, sizes):
    """Inflate sigma in S_k to S_{sum(sizes)} permuting consecutive blocks.

    Equals the iterated partial composition sigma o (id_{sizes[0]}, ...).
    """
    k = len(sigma)
    assert len(sizes) == k
    out = []
    for j in range(k):
        start = sum(sizes[l] for l in range(k) if sigma[l] < sigma[j])
        out.extend(start + m + 1 for m in range(sizes[j]))
    return tuple(out)
