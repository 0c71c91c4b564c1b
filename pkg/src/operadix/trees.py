"""Planar rooted trees with labeled nodes: grafting, partitions, enumeration.

A tree is encoded by its preorder code: a tuple walking the tree depth-first,
emitting the arity (an int >= 0) at each node and LEAF (= -1) at each leaf.
Nullary nodes are permitted and are distinct from leaves.  The trivial tree is
(LEAF,): no nodes, one leaf.

Labels are stored in preorder (one per node).  Operations that reorder labels
report the Koszul sign (-1)^{sum |x||y| over transposed pairs}; degree lookup
is supplied by the caller.
"""

from __future__ import annotations

from functools import lru_cache

LEAF = -1


class PlanarTree:
    """Immutable planar rooted tree given by its preorder code."""

    __slots__ = ("code", "leaf_count", "weight")

    def __init__(self, code):
        code = tuple(code)
        if not _valid_code(code):
            raise ValueError("invalid preorder tree code %r" % (code,))
        self.code = code
        self.leaf_count = sum(1 for c in code if c == LEAF)
        self.weight = len(code) - self.leaf_count

    @staticmethod
    def leaf():
        return PlanarTree((LEAF,))

    @staticmethod
    def corolla(arity):
        return PlanarTree((arity,) + (LEAF,) * arity)

    @property
    def is_trivial(self):
        return self.code == (LEAF,)

    def arities(self):
        """Node arities in preorder."""
        return tuple(c for c in self.code if c != LEAF)

    def root_arity(self):
        if self.is_trivial:
            raise ValueError("trivial tree has no root node")
        return self.code[0]

    def __eq__(self, other):
        return isinstance(other, PlanarTree) and self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __repr__(self):
        return "PlanarTree(%r)" % (self.code,)


def _valid_code(code):
    open_slots = 1
    for i, c in enumerate(code):
        if open_slots <= 0:
            return False
        if c == LEAF:
            open_slots -= 1
        elif c >= 0:
            open_slots += c - 1
        else:
            return False
    return open_slots == 0


def subtree_span(code, start):
    """End index (exclusive) of the subtree whose root symbol sits at `start`."""
    open_slots = 1
    i = start
    while open_slots > 0:
        c = code[i]
        open_slots += (c - 1) if c != LEAF else -1
        i += 1
    return i


def node_positions(code):
    """Code indices of the nodes, in preorder."""
    return [i for i, c in enumerate(code) if c != LEAF]


def leaf_positions(code):
    return [i for i, c in enumerate(code) if c == LEAF]


def children_starts(code, pos):
    """Code indices where the children subtrees of the node at `pos` begin."""
    out = []
    i = pos + 1
    for _ in range(code[pos]):
        out.append(i)
        i = subtree_span(code, i)
    return out


def graft_code(tcode, i, scode):
    """Substitute scode at the i-th leaf (1-based, planar order) of tcode."""
    leaves = leaf_positions(tcode)
    if not 1 <= i <= len(leaves):
        raise ValueError("leaf index %d out of range 1..%d" % (i, len(leaves)))
    pos = leaves[i - 1]
    return tcode[:pos] + tuple(scode) + tcode[pos + 1:]


class LabeledTree:
    """Planar tree with one label per node, stored in preorder."""

    __slots__ = ("tree", "labels")

    def __init__(self, tree, labels):
        if len(labels) != tree.weight:
            raise ValueError("expected %d labels, got %d" % (tree.weight, len(labels)))
        self.tree = tree
        self.labels = tuple(labels)

    @staticmethod
    def leaf():
        return LabeledTree(PlanarTree.leaf(), ())

    @staticmethod
    def corolla(arity, label):
        return LabeledTree(PlanarTree.corolla(arity), (label,))

    @property
    def leaf_count(self):
        return self.tree.leaf_count

    @property
    def weight(self):
        return self.tree.weight

    def degree(self, deg):
        return sum(deg(x) for x in self.labels)

    def __eq__(self, other):
        return (isinstance(other, LabeledTree) and self.tree == other.tree
                and self.labels == other.labels)

    def __hash__(self):
        return hash((self.tree.code, self.labels))

    def __repr__(self):
        return "LabeledTree(%r, %r)" % (self.tree.code, self.labels)


def graft(t, i, s, deg=None):
    """Graft s at leaf i of t; returns (LabeledTree, koszul_sign).

    The sign comes from moving the labels of s past the labels of t that
    follow the insertion point in preorder; it is +1 when deg is omitted.
    """
    code = graft_code(t.tree.code, i, s.tree.code)
    leaves = leaf_positions(t.tree.code)
    pos = leaves[i - 1]
    before = sum(1 for c in t.tree.code[:pos] if c != LEAF)
    labels = t.labels[:before] + s.labels + t.labels[before:]
    sign = 1
    if deg is not None:
        moved = sum(deg(x) for x in s.labels)
        past = sum(deg(x) for x in t.labels[before:])
        if (moved * past) % 2:
            sign = -1
    return LabeledTree(PlanarTree(code), labels), sign


def _components(code, cut):
    """Connected node components after cutting the edges in `cut`.

    Edges are (parent_pos, child_pos) pairs of code indices; components are
    returned as lists of node code-indices in preorder.
    """
    nodes = node_positions(code)
    parent = {}
    for pos in nodes:
        for c in children_starts(code, pos):
            if code[c] != LEAF:
                parent[c] = pos
    comp = {}
    for pos in nodes:
        root = pos
        while root in parent and (parent[root], root) not in cut:
            root = parent[root]
        comp.setdefault(root, []).append(pos)
    return [comp[r] for r in sorted(comp)]


def _block_subtree(code, block):
    """Planar tree formed by a connected node set; exits become leaves."""
    blockset = set(block)
    root = min(block)

    def build(pos):
        out = [code[pos]]
        for c in children_starts(code, pos):
            if code[c] != LEAF and c in blockset:
                out.extend(build(c))
            else:
                out.append(LEAF)
        return out

    return PlanarTree(tuple(build(root)))


def _quotient_tree(code, blocks):
    """Contract each block to a single node; blocks listed by preorder root."""
    roots = {min(b): i for i, b in enumerate(blocks)}
    blocksets = [set(b) for b in blocks]
    owner = {}
    for i, b in enumerate(blocksets):
        for pos in b:
            owner[pos] = i

    def build(pos):
        i = owner[pos]
        exits = []

        def walk(p):
            for c in children_starts(code, p):
                if code[c] == LEAF:
                    exits.append(None)
                elif owner[c] == i:
                    walk(c)
                else:
                    exits.append(c)

        walk(pos)
        out = [len(exits)]
        for e in exits:
            if e is None:
                out.append(LEAF)
            else:
                out.extend(build(e))
        return out

    rootpos = min(roots)
    return PlanarTree(tuple(build(rootpos)))


def partitions(t):
    """All partitions of a nontrivial tree into connected blocks.

    Returns a list of (quotient: PlanarTree, blocks: list of PlanarTree),
    blocks ordered by the quotient's preorder.  One entry per subset of inner
    edges; the singleton partition (no cut) is included.
    """
    if t.is_trivial:
        raise ValueError("trivial tree admits no partition")
    code = t.code
    edges = []
    for pos in node_positions(code):
        for c in children_starts(code, pos):
            if code[c] != LEAF:
                edges.append((pos, c))
    out = []
    for mask in range(1 << len(edges)):
        cut = {edges[k] for k in range(len(edges)) if mask >> k & 1}
        blocks = _components(code, cut)
        quotient = _quotient_tree(code, blocks)
        out.append((quotient, [_block_subtree(code, b) for b in blocks], blocks))
    return out


def two_block_cuts(t):
    """Cuts of a tree into (bottom containing the root, full upper subtree).

    Yields (bottom: PlanarTree, upper: PlanarTree, slot, upper_node_indices)
    where `slot` is the 1-based leaf of the bottom tree where the upper part
    was attached and upper_node_indices are preorder node numbers (0-based,
    within t) of the upper block.
    """
    code = t.code
    nodes = node_positions(code)
    node_no = {pos: k for k, pos in enumerate(nodes)}
    out = []
    for pos in nodes[1:]:  # every non-root node roots an upper block
        end = subtree_span(code, pos)
        upper = PlanarTree(code[pos:end])
        bottom = PlanarTree(code[:pos] + (LEAF,) + code[end:])
        slot = sum(1 for c in code[:pos] if c == LEAF) + 1
        idx = [node_no[p] for p in range(pos, end) if code[p] != LEAF]
        out.append((bottom, upper, slot, idx))
    return out


@lru_cache(maxsize=None)
def _enumerate(leaves, max_nodes, max_arity, min_arity):
    """All tree codes with `leaves` leaves and at most `max_nodes` nodes."""
    out = []
    if leaves == 1:
        out.append((LEAF,))
    if max_nodes <= 0:
        return tuple(out)
    for a in range(min_arity, max_arity + 1):
        if a == 0:
            if leaves == 0:
                out.append((0,))
            continue
        for split in _forests(a, leaves, max_nodes - 1, max_arity, min_arity):
            out.append((a,) + split)
    return tuple(sorted(set(out), key=lambda c: (len(c), c)))


@lru_cache(maxsize=None)
def _forests(k, leaves, max_nodes, max_arity, min_arity):
    """Concatenated codes of ordered forests of k trees."""
    if k == 0:
        return ((),) if leaves == 0 else ()
    out = []
    for first_leaves in range(0, leaves + 1):
        for nodes_first in range(0, max_nodes + 1):
            heads = [c for c in _enumerate(first_leaves, nodes_first, max_arity, min_arity)
                     if len(c) - sum(1 for x in c if x == LEAF) == nodes_first]
            if not heads:
                continue
            for rest in _forests(k - 1, leaves - first_leaves,
                                 max_nodes - nodes_first, max_arity, min_arity):
                for h in heads:
                    out.append(h + rest)
    return tuple(out)


def enumerate_trees(leaves, max_weight, max_arity=6, min_arity=0):
    """Complete duplicate-free list of planar trees, deterministic order.

    min_arity=0 permits nullary nodes; raise it to exclude small arities.
    """
    return [PlanarTree(c) for c in
            _enumerate(leaves, max_weight, max_arity, min_arity)]


def koszul_sign_of_permutation(degrees, permutation):
    """Sign of reordering homogeneous factors by `permutation`.

    permutation is 1-indexed one-line notation: output slot j receives the
    input factor permutation^{-1}(j) ... here we use the convention that the
    k-th output factor is input factor permutation[k-1].
    """
    sign = 1
    n = len(degrees)
    taken = [degrees[permutation[k] - 1] for k in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if permutation[a] > permutation[b] and taken[a] % 2 and taken[b] % 2:
                sign = -sign
    return sign
