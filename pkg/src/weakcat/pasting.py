"""Batanin trees, labelled pasting diagrams, boundaries, gluing and the
free strict omega-category monad (eta, mu), all size-bounded.

A tree node at depth k carries childCount+1 gap labels, each a k-cell of the
base; the j-th child's root-gap labels run from gap j to gap j+1.  Cells with
tree height below their dimension are degenerate (iterated identities).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache, reduce


@dataclass(frozen=True)
class BataninTree:
    children: tuple = ()

    def __repr__(self):
        return tree_to_str(self)


LEAF = BataninTree()


def tree_height(t: BataninTree) -> int:
    if not t.children:
        return 0
    return 1 + max(tree_height(c) for c in t.children)


def tree_node_count(t: BataninTree) -> int:
    """Nodes excluding the root."""
    return sum(1 + tree_node_count(c) for c in t.children)


def tree_key(t: BataninTree):
    """Canonical order: nodeCount first, then lexicographic on child lists."""
    return (tree_node_count(t), tuple(tree_key(c) for c in t.children))


def tree_to_str(t: BataninTree) -> str:
    return "[" + ",".join(tree_to_str(c) for c in t.children) + "]"


def tree_from_str(s: str) -> BataninTree:
    def build(obj):
        return BataninTree(tuple(build(c) for c in obj))
    return build(json.loads(s))


def tree_truncate(t: BataninTree, k: int) -> BataninTree:
    """Delete all nodes at depth greater than k."""
    if k == 0:
        return LEAF
    return BataninTree(tuple(tree_truncate(c, k - 1) for c in t.children))


def chain_tree(d: int) -> BataninTree:
    """The single-d-cell scheme: a linear chain of depth d."""
    t = LEAF
    for _ in range(d):
        t = BataninTree((t,))
    return t


def subtree_at(t: BataninTree, path: tuple) -> BataninTree:
    for i in path:
        t = t.children[i]
    return t


def tree_nodes(t: BataninTree, path: tuple = ()):
    """Yield (path, subtree) in preorder."""
    yield path, t
    for i, c in enumerate(t.children):
        yield from tree_nodes(c, path + (i,))


def gap_positions(t: BataninTree):
    """All (path, gap) positions; position depth = len(path)."""
    for path, node in tree_nodes(t):
        for g in range(len(node.children) + 1):
            yield (path, g)


def enumerate_trees(n: int, max_nodes: int) -> list:
    """All trees of height <= n and nodeCount <= max_nodes, canonical order."""

    @lru_cache(maxsize=None)
    def gen(h, m):
        if h == 0 or m == 0:
            return (LEAF,)
        out = [LEAF]
        for ch in child_seqs(h, m):
            if ch:
                out.append(BataninTree(ch))
        return tuple(out)

    @lru_cache(maxsize=None)
    def child_seqs(h, budget):
        seqs = [()]
        for first in gen(h - 1, budget - 1):
            cost = 1 + tree_node_count(first)
            if cost > budget:
                continue
            for rest in child_seqs(h, budget - cost):
                seqs.append((first,) + rest)
        return tuple(seqs)

    seen = sorted(set(gen(n, max_nodes)), key=tree_key)
    return seen


@dataclass(frozen=True)
class TreeCell:
    tree: BataninTree
    dim: int

    def __post_init__(self):
        if tree_height(self.tree) > self.dim:
            raise ValueError("tree height exceeds dimension")

    def boundary(self) -> "TreeCell":
        if self.dim == 0:
            raise ValueError("0-dimensional scheme has no boundary")
        if tree_height(self.tree) < self.dim:
            return TreeCell(self.tree, self.dim - 1)
        return TreeCell(tree_truncate(self.tree, self.dim - 1), self.dim - 1)

    def key(self):
        return (self.dim, tree_key(self.tree))

    def __repr__(self):
        return f"{tree_to_str(self.tree)}@{self.dim}"


@dataclass(frozen=True)
class PastingDiagram:
    tree: BataninTree
    dim: int
    labels: tuple  # sorted tuple of ((path, gap), cell)

    @staticmethod
    def make(tree: BataninTree, dim: int, labels: dict) -> "PastingDiagram":
        return PastingDiagram(tree, dim, tuple(sorted(labels.items())))

    def label_map(self) -> dict:
        return dict(self.labels)

    def label(self, path: tuple, gap: int):
        return dict(self.labels)[(path, gap)]

    def relabel(self, fn) -> "PastingDiagram":
        """Apply fn to every label (fn receives position and label)."""
        return PastingDiagram.make(
            self.tree, self.dim, {pos: fn(pos, v) for pos, v in self.labels})

    def shape(self) -> TreeCell:
        return TreeCell(self.tree, self.dim)

    def __repr__(self):
        return f"pd({tree_to_str(self.tree)}@{self.dim}, {dict(self.labels)!r})"


class GlobOps:
    """Cell operations backed by a GlobularSet."""

    def __init__(self, X):
        self.X = X

    def dim(self, c):
        return self.X.cell_dim(c)

    def src(self, c):
        return self.X.src_of(c)

    def tgt(self, c):
        return self.X.tgt_of(c)


class DiagramOps:
    """Cell operations for cells that are themselves pasting diagrams."""

    def dim(self, d):
        return d.dim

    def src(self, d):
        return pd_boundary(d, "source")

    def tgt(self, d):
        return pd_boundary(d, "target")


class TreeCellOps:
    def dim(self, tc):
        return tc.dim

    def src(self, tc):
        return tc.boundary()

    def tgt(self, tc):
        return tc.boundary()


class DepthOps:
    """Operations for terminal-set labels encoded as their dimension."""

    def dim(self, j):
        return j

    def src(self, j):
        return j - 1

    def tgt(self, j):
        return j - 1


def pd_validate(d: PastingDiagram, ops) -> list:
    report = []
    if tree_height(d.tree) > d.dim:
        report.append("tree height exceeds diagram dimension")
        return report
    lm = d.label_map()
    expected = set(gap_positions(d.tree))
    got = set(lm)
    for pos in expected - got:
        report.append(f"missing label at {pos}")
    for pos in got - expected:
        report.append(f"stray label at {pos}")
    if report:
        return report
    for (path, gap), v in lm.items():
        if ops.dim(v) != len(path):
            report.append(f"label at {(path, gap)} has dim {ops.dim(v)}, want {len(path)}")
    if report:
        return report
    for path, node in tree_nodes(d.tree):
        for j, child in enumerate(node.children):
            lo, hi = lm[(path, j)], lm[(path, j + 1)]
            cpath = path + (j,)
            for g in range(len(child.children) + 1):
                z = lm[(cpath, g)]
                if ops.src(z) != lo:
                    report.append(f"gap mismatch: src of label at {(cpath, g)} != gap {j} of {path}")
                if ops.tgt(z) != hi:
                    report.append(f"gap mismatch: tgt of label at {(cpath, g)} != gap {j+1} of {path}")
    return report


def pd_boundary(d: PastingDiagram, side: str) -> PastingDiagram:
    if d.dim == 0:
        raise ValueError("0-dimensional diagram has no boundary")
    if tree_height(d.tree) < d.dim:
        return PastingDiagram(d.tree, d.dim - 1, d.labels)
    k = d.dim - 1
    new_tree = tree_truncate(d.tree, k)
    lm = d.label_map()
    out = {pos: v for pos, v in lm.items() if len(pos[0]) <= k - 1}
    for path, node in tree_nodes(d.tree):
        if len(path) == k:
            m = len(node.children)
            out[(path, 0)] = lm[(path, 0 if side == "source" else m)]
    return PastingDiagram.make(new_tree, k, out)


def pd_kboundary(d: PastingDiagram, side: str, target_dim: int) -> PastingDiagram:
    while d.dim > target_dim:
        d = pd_boundary(d, side)
    return d


def pd_identity(d: PastingDiagram, target_dim: int) -> PastingDiagram:
    if target_dim < d.dim:
        raise ValueError("identity cannot lower dimension")
    return PastingDiagram(d.tree, target_dim, d.labels)


def pd_compose_prov(A: PastingDiagram, B: PastingDiagram, k: int, check: bool = True):
    """Glue A then B along their shared k-boundary.

    Returns (result, mapB) where mapB sends every (path, gap) position of B
    to its position in the result; A's positions are unchanged.
    """
    n = A.dim
    if B.dim != n or k >= n:
        raise ValueError("pd_compose needs equal dimensions above k")
    if check:
        if pd_kboundary(A, "target", k) != pd_kboundary(B, "source", k):
            raise ValueError("pd_compose boundary mismatch")

    def merge(ta, tb, depth):
        if depth == k:
            return BataninTree(ta.children + tb.children)
        return BataninTree(tuple(merge(a, b, depth + 1)
                                 for a, b in zip(ta.children, tb.children)))

    new_tree = merge(A.tree, B.tree, 0)
    offs = {path: len(subtree_at(A.tree, path).children)
            for path, _ in tree_nodes(tree_truncate(A.tree, k)) if len(path) == k}

    def remap(pos):
        path, gap = pos
        if len(path) < k:
            return pos
        if len(path) == k:
            return (path, gap + offs[path])
        p = path[:k] + (path[k] + offs[path[:k]],) + path[k + 1:]
        return (p, gap)

    out = dict(A.labels)
    mapB = {}
    for pos, v in B.labels:
        pos2 = remap(pos) if len(pos[0]) >= k else pos
        mapB[pos] = pos2
        out[pos2] = v
    result = PastingDiagram.make(new_tree, n, out)
    return result, mapB


def pd_compose(A: PastingDiagram, B: PastingDiagram, k: int,
               check: bool = True) -> PastingDiagram:
    return pd_compose_prov(A, B, k, check)[0]


def pd_eval(d: PastingDiagram, compose, identity):
    """Fold a diagram in a strict omega-category.

    compose(k, a, b) composes a then b along dimension k; identity(c, dim)
    bumps a cell to the given dimension.
    """
    lm = d.label_map()

    def ev(tree, path, depth):
        if not tree.children:
            return identity(lm[(path, 0)], d.dim)
        vals = [ev(c, path + (i,), depth + 1) for i, c in enumerate(tree.children)]
        return reduce(lambda a, b: compose(depth, a, b), vals)

    return ev(d.tree, (), 0)


def monad_eta(x, ops) -> PastingDiagram:
    """The single-cell diagram on x: a chain tree of depth dim(x)."""
    d = ops.dim(x)
    labels = {}
    s, t = x, x
    for k in range(d, -1, -1):
        path = (0,) * k
        if k == d:
            labels[(path, 0)] = x
        else:
            labels[(path, 0)] = s
            labels[(path, 1)] = t
        if k > 0:
            s, t = ops.src(s), ops.tgt(t)
    if d == 0:
        labels = {((), 0): x}
    return PastingDiagram.make(chain_tree(d), d, labels)


def monad_mu(outer: PastingDiagram) -> PastingDiagram:
    """Flatten a diagram of diagrams by pasting evaluation in T(X)."""
    return pd_eval(outer,
                   compose=lambda k, a, b: pd_compose(a, b, k),
                   identity=pd_identity)


def monad_mu_prov(outer: PastingDiagram):
    """monad_mu plus provenance: for every leaf gap position g of outer,
    a map from positions of the inner diagram at g to result positions."""
    lm = outer.label_map()

    def ev(tree, path, depth):
        if not tree.children:
            inner = lm[(path, 0)]
            bumped = pd_identity(inner, outer.dim)
            return bumped, {(path, 0): {pos: pos for pos, _ in inner.labels}}
        parts = [ev(c, path + (i,), depth + 1) for i, c in enumerate(tree.children)]

        def comp(acc, nxt):
            (da, pa), (db, pb) = acc, nxt
            dc, mapB = pd_compose_prov(da, db, depth)
            prov = dict(pa)
            for g, mp in pb.items():
                prov[g] = {q: mapB[p] for q, p in mp.items()}
            return dc, prov

        return reduce(comp, parts)

    return ev(outer.tree, (), 0)


def tree_cell_diagram(tc: TreeCell) -> PastingDiagram:
    """A TreeCell as a pasting diagram over the terminal globular set,
    with the unique j-cell encoded as the integer j."""
    labels = {(path, g): len(path) for path, g in gap_positions(tc.tree)}
    return PastingDiagram.make(tc.tree, tc.dim, labels)


def diagram_tree_cell(d: PastingDiagram) -> TreeCell:
    return TreeCell(d.tree, d.dim)


def word_arity(psi: PastingDiagram, arity_fn) -> TreeCell:
    """Replace every label by its arity scheme and flatten with mu."""
    outer = psi.relabel(lambda pos, v: tree_cell_diagram(arity_fn(v)))
    return diagram_tree_cell(monad_mu(outer))


def substitute_trees(sigma: TreeCell, assign: dict):
    """Substitute a TreeCell into every gap of sigma (assign maps each gap
    position of sigma.tree to a TreeCell of the position's dimension).

    Returns (merged TreeCell, prov) with prov mapping each leaf gap position
    g of sigma to {position of assign[g].tree -> position in the result}.
    """
    outer = PastingDiagram.make(
        sigma.tree, sigma.dim,
        {pos: tree_cell_diagram(assign[pos]) for pos in gap_positions(sigma.tree)})
    merged, prov = monad_mu_prov(outer)
    return diagram_tree_cell(merged), prov
