import random

import pytest

from operadix.trees import (
    LEAF, LabeledTree, PlanarTree, enumerate_trees, graft, graft_code,
    leaf_positions, partitions, subtree_span, two_block_cuts,
)


def test_code_validity():
    PlanarTree((LEAF,))
    PlanarTree((2, LEAF, LEAF))
    PlanarTree((2, 2, LEAF, LEAF, LEAF))
    PlanarTree((0,))
    with pytest.raises(ValueError):
        PlanarTree((2, LEAF))
    with pytest.raises(ValueError):
        PlanarTree((LEAF, LEAF))
    with pytest.raises(ValueError):
        PlanarTree(())


def test_leaf_count_formula():
    for t in enumerate_trees(3, 3, max_arity=3, min_arity=1):
        assert t.leaf_count == sum(a - 1 for a in t.arities()) + 1


def test_graft_unit_and_combs():
    s = LabeledTree.corolla(2, "x")
    out, sign = graft(LabeledTree.leaf(), 1, s)
    assert out == s and sign == 1
    c2 = LabeledTree.corolla(2, "a")
    left, _ = graft(c2, 1, LabeledTree.corolla(2, "b"))
    assert left.tree.code == (2, 2, LEAF, LEAF, LEAF)
    right, _ = graft(c2, 2, LabeledTree.corolla(2, "b"))
    assert right.tree.code == (2, LEAF, 2, LEAF, LEAF)
    assert left.leaf_count == right.leaf_count == 3


def test_graft_index_range():
    with pytest.raises(ValueError):
        graft(LabeledTree.corolla(2, "a"), 3, LabeledTree.leaf())


def test_graft_associativity_random():
    rng = random.Random(11)
    pool = [t for t in enumerate_trees(2, 3, max_arity=3, min_arity=1)] + \
           [t for t in enumerate_trees(3, 3, max_arity=3, min_arity=1)]
    pool = [t for t in pool if not t.is_trivial]
    def pick(prefix):
        shape = rng.choice(pool)
        return LabeledTree(shape, tuple("%s%d" % (prefix, k) for k in range(shape.weight)))
    for _ in range(100):
        t, s, r = pick("t"), pick("s"), pick("r")
        i = rng.randint(1, t.leaf_count)
        j = rng.randint(1, s.leaf_count)
        # graft r into the s-part of graft(t, i, s) == graft into s first
        a1, _ = graft(t, i, s)
        a2, _ = graft(a1, i - 1 + j, r)
        b1, _ = graft(s, j, r)
        b2, _ = graft(t, i, b1)
        assert a2 == b2


def test_graft_koszul_sign():
    deg = {"a": 1, "b": 1, "c": 0}.get
    t = LabeledTree(PlanarTree((2, LEAF, 2, LEAF, LEAF)), ("a", "b"))
    s = LabeledTree.corolla(2, "a")
    # grafting at the first leaf moves s past label "b" (odd x odd -> sign -1)
    _, sign = graft(t, 1, s, deg)
    assert sign == -1
    _, sign = graft(t, 3, s, deg)
    assert sign == 1


def test_partitions_counts_and_regraft():
    corolla = PlanarTree.corolla(3)
    parts = partitions(corolla)
    assert len(parts) == 1  # no inner edge: only the singleton partition
    comb = PlanarTree((2, 2, LEAF, LEAF, LEAF))
    parts = partitions(comb)
    assert len(parts) == 2
    for t in enumerate_trees(4, 4, max_arity=3, min_arity=1):
        if t.is_trivial:
            continue
        for quotient, blocks, _ in partitions(t):
            assert quotient.weight == len(blocks)
            # regraft blocks into the quotient leaves... rebuild by substituting
            # each quotient node (in preorder) by its block
            cur = LabeledTree.leaf()
            rebuilt = _substitute(quotient, blocks)
            assert rebuilt == t.code


def _substitute(quotient, blocks):
    """Blow each quotient node up into its block, preorder."""
    code = quotient.code
    out = []
    k = 0
    stack = []

    def expand(pos):
        nonlocal k
        block = blocks[k]
        k += 1
        bcode = list(block.code)
        # walk block code; at each leaf of the block, consume the next child
        # subtree of the quotient node at pos
        child = list(range(quotient.code[pos]))
        starts = []
        i = pos + 1
        for _ in range(quotient.code[pos]):
            starts.append(i)
            i = subtree_span(quotient.code, i)
        res = []
        ci = 0
        for c in bcode:
            if c == LEAF:
                s = starts[ci]
                ci += 1
                if quotient.code[s] == LEAF:
                    res.append(LEAF)
                else:
                    res.extend(expand(s))
            else:
                res.append(c)
        return res

    if code == (LEAF,):
        return (LEAF,)
    return tuple(expand(0))


def test_two_block_cuts_match_pair_partitions():
    for t in enumerate_trees(3, 3, max_arity=3, min_arity=1):
        if t.is_trivial:
            continue
        pair_count = sum(1 for _, blocks, _ in partitions(t) if len(blocks) == 2)
        assert pair_count == len(two_block_cuts(t))
    chain3 = PlanarTree((1, 1, 1, LEAF))
    assert len(two_block_cuts(chain3)) == 2


def test_enumerate_small():
    assert [t.code for t in enumerate_trees(1, 0)] == [(LEAF,)]
    # 3 leaves, <= 2 nodes, binary and higher: corolla(3) and the two combs
    ts = enumerate_trees(3, 2, max_arity=3, min_arity=2)
    codes = {t.code for t in ts if not t.is_trivial}
    assert codes == {(3, LEAF, LEAF, LEAF), (2, 2, LEAF, LEAF, LEAF), (2, LEAF, 2, LEAF, LEAF)}


def test_enumerate_cross_check_by_filtering():
    # independent generator: filter all codes of bounded length
    import itertools
    alphabet = [LEAF, 1, 2]
    want = {t.code for t in enumerate_trees(2, 3, max_arity=2, min_arity=1)}
    brute = set()
    for n in range(1, 8):
        for code in itertools.product(alphabet, repeat=n):
            try:
                t = PlanarTree(code)
            except ValueError:
                continue
            if t.leaf_count == 2 and t.weight <= 3 and all(a >= 1 for a in t.arities()):
                brute.add(code)
    assert want == brute


def test_code_roundtrip_and_spans():
    for t in enumerate_trees(3, 4, max_arity=3):
        assert PlanarTree(t.code) == t
        assert subtree_span(t.code, 0) == len(t.code)
        assert len(leaf_positions(t.code)) == t.leaf_count
