"""Collections (globular sets with an arity scheme per cell), their
composition tensor and fibered cartesian product, the special collections,
the duoidal structure maps, internal hom fibers, and globular operads with
an algebra checker.

The internal hom is computed fiberwise: a hom cell over a scheme sigma is a
table sending every sigma-shaped labelling of the source to a cell of the
target with the substituted arity, together with boundary tables that the
top table must restrict to.  Composite arities past the node bound of an
operad come back OUT_OF_RANGE, never as an error.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .globset import GlobularSet, validate_globular
from .graded import OUT_OF_RANGE
from .pasting import (LEAF, GlobOps, PastingDiagram, TreeCell, chain_tree,
                      enumerate_trees, gap_positions, monad_eta, pd_boundary,
                      subtree_at, substitute_trees, tree_from_str,
                      tree_height, tree_node_count, tree_to_str,
                      word_arity)


@dataclass
class Collection:
    glob: GlobularSet
    arity: dict  # cell -> TreeCell, dims matching

    def arity_of(self, c) -> TreeCell:
        return self.arity[c]

    def ops(self) -> GlobOps:
        return GlobOps(self.glob)

    def to_json(self) -> str:
        base = json.loads(self.glob.to_json())
        base["arity"] = {str(c): tree_to_str(tc.tree)
                         for c, tc in self.arity.items()}
        return json.dumps(base, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Collection":
        obj = json.loads(text)
        glob = GlobularSet.from_json(json.dumps(
            {k: obj[k] for k in ("maxDim", "cells", "src", "tgt")}))
        arity = {}
        for c, s in obj.get("arity", {}).items():
            arity[c] = TreeCell(tree_from_str(s), glob.cell_dim(c))
        return cls(glob, arity)


def coll_validate(C: Collection) -> list:
    """Check the underlying globular set and that the arity map is itself
    globular: parallel cells share the boundary arity."""
    report = validate_globular(C.glob)
    if report:
        return report
    for k in range(C.glob.max_dim + 1):
        for c in C.glob.cells_at(k):
            if c not in C.arity:
                report.append(f"no arity for {c!r}")
                continue
            if C.arity[c].dim != k:
                report.append(f"arity of {c!r} has dim {C.arity[c].dim}, want {k}")
    if report:
        return report
    for k in range(1, C.glob.max_dim + 1):
        for c in C.glob.cells_at(k):
            b = C.arity[c].boundary()
            if C.arity[C.glob.src_of(c)] != b:
                report.append(f"arity of src of {c!r} is not the boundary arity")
            if C.arity[C.glob.tgt_of(c)] != b:
                report.append(f"arity of tgt of {c!r} is not the boundary arity")
    return report


def special_collection(kind: str, D: int, max_nodes: int = 3) -> Collection:
    """The four distinguished collections, dimension-truncated at D.

    "terminal" is a bounded view: its d-cells are the schemes themselves
    with at most max_nodes nodes.  "unit" has one cell per dimension with
    the chain arity; "id_tower" one cell per dimension with the bare leaf
    arity; "empty" has no cells.
    """
    if kind == "terminal":
        cells = [[TreeCell(t, d) for t in enumerate_trees(d, max_nodes)]
                 for d in range(D + 1)]
        src = [{}] + [{c: c.boundary() for c in cells[d]}
                      for d in range(1, D + 1)]
        tgt = [dict(t) for t in src]
        glob = GlobularSet(D, cells, src, tgt)
        return Collection(glob, {c: c for cs in cells for c in cs})
    if kind == "empty":
        glob = GlobularSet(D, [[] for _ in range(D + 1)],
                           [{} for _ in range(D + 1)],
                           [{} for _ in range(D + 1)])
        return Collection(glob, {})
    if kind == "unit":
        names = [f"i{d}" for d in range(D + 1)]
        arity = {names[d]: TreeCell(chain_tree(d), d) for d in range(D + 1)}
    elif kind == "id_tower":
        names = [f"t{d}" for d in range(D + 1)]
        arity = {names[d]: TreeCell(LEAF, d) for d in range(D + 1)}
    else:
        raise ValueError(f"unknown kind {kind!r}")
    cells = [[names[d]] for d in range(D + 1)]
    src = [{}] + [{names[d]: names[d - 1]} for d in range(1, D + 1)]
    tgt = [{}] + [{names[d]: names[d - 1]} for d in range(1, D + 1)]
    return Collection(GlobularSet(D, cells, src, tgt), arity)


def degenerate_collection(G: GlobularSet) -> Collection:
    """The collection whose arity map factors through the identity tower."""
    arity = {c: TreeCell(LEAF, k)
             for k in range(G.max_dim + 1) for c in G.cells_at(k)}
    return Collection(G, arity)


def enumerate_labellings(C: Collection, sigma: TreeCell) -> list:
    """All valid pasting diagrams of shape sigma over the collection's
    underlying globular set."""
    X = C.glob
    if tree_height(sigma.tree) > min(sigma.dim, X.max_dim):
        return []

    def go(node, path, lo, hi):
        depth = len(path)
        if depth == 0:
            cands = X.cells_at(0)
        else:
            cands = [c for c in X.cells_at(depth)
                     if X.src_of(c) == lo and X.tgt_of(c) == hi]
        m = len(node.children)
        out = []
        for gaps in itertools.product(cands, repeat=m + 1):
            partials = [{(path, i): gaps[i] for i in range(m + 1)}]
            for j, child in enumerate(node.children):
                subs = go(child, path + (j,), gaps[j], gaps[j + 1])
                partials = [{**p, **s} for p in partials for s in subs]
                if not partials:
                    break
            out.extend(partials)
        return out

    return [PastingDiagram.make(sigma.tree, sigma.dim, lab)
            for lab in go(sigma.tree, (), None, None)]


def complete_labelling(tree, leaf_labels: dict, ops) -> dict:
    """Extend labels given at the leaf gaps to every gap position, taking
    boundaries of child labels for the internal gaps."""
    lm = dict(leaf_labels)

    def go(node, path):
        for j, child in enumerate(node.children):
            go(child, path + (j,))
        m = len(node.children)
        if m:
            for j in range(m):
                lm[(path, j)] = ops.src(lm[(path + (j,), 0)])
            last = node.children[m - 1]
            lm[(path, m)] = ops.tgt(lm[(path + (m - 1,),
                                        len(last.children))])

    go(tree, ())
    return lm


def inner_pieces(sigma: TreeCell, trees: dict, Psi: PastingDiagram):
    """Split a labelling of the substituted scheme back into one labelled
    piece per leaf gap of sigma.  Returns (merged scheme, {gap: piece})."""
    merged, prov = substitute_trees(sigma, trees)
    lm = Psi.label_map()
    pieces = {}
    for p, mp in prov.items():
        t = trees[p]
        pieces[p] = PastingDiagram.make(
            t.tree, t.dim, {q: lm[mp[q]] for q in gap_positions(t.tree)})
    return merged, pieces


class SquareOps:
    """Cell operations for tensor cells (a, psi)."""

    def __init__(self, X: Collection):
        self.X = X

    def dim(self, c):
        return self.X.glob.cell_dim(c[0])

    def src(self, c):
        a, psi = c
        return (self.X.glob.src_of(a), pd_boundary(psi, "source"))

    def tgt(self, c):
        a, psi = c
        return (self.X.glob.tgt_of(a), pd_boundary(psi, "target"))


def square_cells(X: Collection, Y: Collection, dim: int) -> list:
    """The dim-cells of X square Y: pairs (a, psi) with psi a diagram over
    Y of shape arity(a)."""
    out = []
    for a in X.glob.cells_at(dim):
        for psi in enumerate_labellings(Y, X.arity[a]):
            out.append((a, psi))
    return out


def coll_square(X: Collection, Y: Collection) -> Collection:
    """The composition tensor, materialized (both arguments finite)."""
    D = X.glob.max_dim
    if Y.glob.max_dim != D:
        raise ValueError("coll_square requires equal truncation")
    ops = SquareOps(X)
    cells = [square_cells(X, Y, d) for d in range(D + 1)]
    src = [{} for _ in range(D + 1)]
    tgt = [{} for _ in range(D + 1)]
    arity = {}
    for d in range(D + 1):
        for c in cells[d]:
            arity[c] = word_arity(c[1], lambda v: Y.arity[v])
            if d >= 1:
                src[d][c] = ops.src(c)
                tgt[d][c] = ops.tgt(c)
    return Collection(GlobularSet(D, cells, src, tgt), arity)


def coll_product(X: Collection, Y: Collection) -> Collection:
    """The cartesian product: pairs of cells with equal arity."""
    D = X.glob.max_dim
    if Y.glob.max_dim != D:
        raise ValueError("coll_product requires equal truncation")
    cells = [[] for _ in range(D + 1)]
    src = [{} for _ in range(D + 1)]
    tgt = [{} for _ in range(D + 1)]
    arity = {}
    for d in range(D + 1):
        for a in X.glob.cells_at(d):
            for b in Y.glob.cells_at(d):
                if X.arity[a] != Y.arity[b]:
                    continue
                cells[d].append((a, b))
                arity[(a, b)] = X.arity[a]
                if d >= 1:
                    src[d][(a, b)] = (X.glob.src_of(a), Y.glob.src_of(b))
                    tgt[d][(a, b)] = (X.glob.tgt_of(a), Y.glob.tgt_of(b))
    return Collection(GlobularSet(D, cells, src, tgt), arity)


def coll_assoc(X: Collection, Y: Collection, Z: Collection) -> dict:
    """The reassociation bijection (X sq Y) sq Z -> X sq (Y sq Z), as an
    explicit cell dictionary."""
    XY = coll_square(X, Y)
    YZ = coll_square(Y, Z)
    pair_ops = SquareOps(Y)
    out = {}
    for d in range(X.glob.max_dim + 1):
        for (a, psi) in XY.glob.cells_at(d):
            sigma = X.arity[a]
            trees = {p: Y.arity[psi.label(*p)]
                     for p in gap_positions(sigma.tree)}
            for Psi in enumerate_labellings(Z, XY.arity[(a, psi)]):
                _, pieces = inner_pieces(sigma, trees, Psi)
                leaf = {p: (psi.label(*p), pieces[p]) for p in pieces}
                labels = complete_labelling(sigma.tree, leaf, pair_ops)
                phi = PastingDiagram.make(sigma.tree, sigma.dim, labels)
                out[((a, psi), Psi)] = (a, phi)
    return out


def duoidal_maps(op: str, *args):
    """The instance-level duoidal structure maps, each as a function."""
    if op == "phi":
        # flatten a scheme labelled by schemes into one scheme
        def phi(cell):
            sigma_cell, psi = cell
            return word_arity(psi, lambda t: t)
        return phi
    if op == "delta":
        return lambda c: (c, c)
    if op == "theta":
        (I,) = args
        return lambda c: I.arity[c]
    if op == "interchange":
        def inter(cell):
            (a, b), psi = cell
            psi1 = psi.relabel(lambda pos, v: v[0])
            psi2 = psi.relabel(lambda pos, v: v[1])
            return ((a, psi1), (b, psi2))
        return inter
    raise ValueError(f"unknown duoidal map {op!r}")


def _sorted_table(rows) -> tuple:
    """Deterministic table order (labellings are not orderable directly)."""
    return tuple(sorted(rows, key=lambda r: repr(r[0])))


@dataclass(frozen=True)
class HomCell:
    """A cell of the internal hom fiber over a scheme: a value table on
    all labellings of that shape, plus coherent boundary tables."""

    sigma: TreeCell
    table: tuple  # sorted ((labelling, value), ...)
    src: object = None
    tgt: object = None

    def value(self, psi):
        return dict(self.table)[psi]


def coll_internal_hom_fiber(B: Collection, A: Collection,
                            sigma: TreeCell, _memo: dict = None) -> list:
    """All hom cells from B to A over the scheme sigma.

    A hom cell assigns to every sigma-shaped labelling over B a cell of A
    whose arity is the flattened substitution of the labels' arities, with
    source and target given by chosen boundary hom cells.
    """
    if _memo is None:
        _memo = {}
    if sigma in _memo:
        return _memo[sigma]
    labellings = enumerate_labellings(B, sigma)
    out = []
    if sigma.dim == 0:
        choice = [[a for a in A.glob.cells_at(0)
                   if A.arity[a] == word_arity(psi, lambda v: B.arity[v])]
                  for psi in labellings]
        for combo in itertools.product(*choice):
            out.append(HomCell(sigma, _sorted_table(zip(labellings, combo))))
    else:
        lower = coll_internal_hom_fiber(B, A, sigma.boundary(), _memo)
        for hs, ht in itertools.product(lower, repeat=2):
            choice = []
            for psi in labellings:
                want = word_arity(psi, lambda v: B.arity[v])
                cands = [a for a in A.glob.cells_at(sigma.dim)
                         if A.arity[a] == want
                         and A.glob.src_of(a) == hs.value(pd_boundary(psi, "source"))
                         and A.glob.tgt_of(a) == ht.value(pd_boundary(psi, "target"))]
                choice.append(cands)
            for combo in itertools.product(*choice):
                out.append(HomCell(sigma, _sorted_table(zip(labellings, combo)),
                                   hs, ht))
    _memo[sigma] = out
    return out


def internal_hom_collection(B: Collection, A: Collection,
                            schemes: list) -> Collection:
    """Materialize the internal hom on the given schemes (closed under
    boundaries automatically)."""
    memo = {}
    need = set()
    for sigma in schemes:
        s = sigma
        need.add(s)
        while s.dim > 0:
            s = s.boundary()
            need.add(s)
    D = max(s.dim for s in need) if need else 0
    cells = [[] for _ in range(D + 1)]
    src = [{} for _ in range(D + 1)]
    tgt = [{} for _ in range(D + 1)]
    arity = {}
    for sigma in sorted(need, key=lambda s: s.key()):
        for h in coll_internal_hom_fiber(B, A, sigma, memo):
            cells[sigma.dim].append(h)
            arity[h] = sigma
            if sigma.dim >= 1:
                src[sigma.dim][h] = h.src
                tgt[sigma.dim][h] = h.tgt
    return Collection(GlobularSet(D, cells, src, tgt), arity)


def coll_maps(X: Collection, Y: Collection) -> list:
    """All arity-preserving globular maps X -> Y, each as a cell dict."""
    D = X.glob.max_dim
    maps = [{}]
    for d in range(D + 1):
        for c in X.glob.cells_at(d):
            cands = [y for y in Y.glob.cells_at(d)
                     if Y.arity[y] == X.arity[c]]
            nxt = []
            for f in maps:
                for y in cands:
                    if d >= 1:
                        if Y.glob.src_of(y) != f[X.glob.src_of(c)]:
                            continue
                        if Y.glob.tgt_of(y) != f[X.glob.tgt_of(c)]:
                            continue
                    nxt.append({**f, c: y})
            maps = nxt
    return maps


def gtaut_fiber(X: Collection, sigma: TreeCell) -> list:
    """The fiber of the tautological construction on X over sigma."""
    return coll_internal_hom_fiber(X, X, sigma)


def gtaut_unit(X: Collection, d: int) -> HomCell:
    """The unit hom cell: over the chain scheme, read off the top label."""
    sigma = TreeCell(chain_tree(d), d)
    table = _sorted_table((psi, psi.label((0,) * d, 0))
                          for psi in enumerate_labellings(X, sigma))
    if d == 0:
        return HomCell(sigma, table)
    lower = gtaut_unit(X, d - 1)
    return HomCell(sigma, table, lower, lower)


def hom_compose(B_in: Collection, B_mid: Collection,
                outer: HomCell, assign: dict) -> HomCell:
    """Compose hom cells: the assigned cells (sections from B_in to B_mid)
    feed the outer cell (a section out of B_mid).  The composite scheme is
    the substitution of the assigned schemes into the outer scheme."""
    sigma = outer.sigma
    trees = {p: assign[p].sigma for p in gap_positions(sigma.tree)}
    merged, _ = substitute_trees(sigma, trees)
    ops = GlobOps(B_mid.glob)
    rows = []
    for Psi in enumerate_labellings(B_in, merged):
        _, pieces = inner_pieces(sigma, trees, Psi)
        leaf = {p: assign[p].value(pieces[p]) for p in pieces}
        labels = complete_labelling(sigma.tree, leaf, ops)
        rows.append((Psi, outer.value(
            PastingDiagram.make(sigma.tree, sigma.dim, labels))))
    table = _sorted_table(rows)
    if sigma.dim == 0:
        return HomCell(merged, table)
    if tree_height(sigma.tree) < sigma.dim:
        bsrc = hom_compose(B_in, B_mid, outer.src, assign)
        btgt = hom_compose(B_in, B_mid, outer.tgt, assign)
    else:
        bsrc = hom_compose(B_in, B_mid, outer.src,
                           _boundary_assign(sigma, assign, "source"))
        btgt = hom_compose(B_in, B_mid, outer.tgt,
                           _boundary_assign(sigma, assign, "target"))
    return HomCell(merged, table, bsrc, btgt)


def gtaut_compose(X: Collection, outer: HomCell, assign: dict) -> HomCell:
    """Operadic composition of hom cells over a single collection."""
    return hom_compose(X, X, outer, assign)


def _boundary_assign(sigma: TreeCell, assign: dict, side: str) -> dict:
    """Restrict a gap assignment to the boundary scheme."""
    k = sigma.dim - 1
    bnd = sigma.boundary()
    out = {}
    for (path, g) in gap_positions(bnd.tree):
        if len(path) == k:
            node = subtree_at(sigma.tree, path)
            if node.children:
                pick = 0 if side == "source" else len(node.children)
                out[(path, 0)] = assign[(path, pick)]
                continue
        out[(path, g)] = assign[(path, g)]
    return out


@dataclass
class GlobularOperad:
    carrier: Collection
    unit: dict                      # dim -> carrier cell
    compose: object = field(repr=False)  # (cell, diagram) -> cell or OUT_OF_RANGE
    size_bound: int = 0


def terminal_operad(D: int, max_nodes: int) -> GlobularOperad:
    """The terminal collection with flattening as composition, bounded."""
    carrier = special_collection("terminal", D, max_nodes)

    def compose(c, psi):
        res = word_arity(psi, lambda t: t)
        if tree_node_count(res.tree) > max_nodes:
            return OUT_OF_RANGE
        return res

    unit = {d: TreeCell(chain_tree(d), d) for d in range(D + 1)}
    return GlobularOperad(carrier, unit, compose, max_nodes)


def unit_operad(D: int) -> GlobularOperad:
    """The unit collection as an operad: everything composes to the unique
    cell of its dimension."""
    carrier = special_collection("unit", D)
    return GlobularOperad(carrier, {d: f"i{d}" for d in range(D + 1)},
                          lambda c, psi: c, 1)


def _unit_diagram(O: GlobularOperad, sigma: TreeCell) -> PastingDiagram:
    labels = {(path, g): O.unit[len(path)]
              for path, g in gap_positions(sigma.tree)}
    return PastingDiagram.make(sigma.tree, sigma.dim, labels)


def glob_operad_validate(O: GlobularOperad, max_checks: int = 2000) -> list:
    """Check the monoid laws of the operad on in-range data: arity of
    composites, globularity, both unit laws, and associativity."""
    C = O.carrier
    report = coll_validate(C)
    if report:
        return report
    ops = GlobOps(C.glob)
    budget = max_checks
    for d in range(C.glob.max_dim + 1):
        if O.unit[d] not in C.arity or C.arity[O.unit[d]].tree != chain_tree(d):
            report.append(f"unit at dim {d} does not have the chain arity")
        for c in C.glob.cells_at(d):
            got = O.compose(O.unit[d], monad_eta(c, ops))
            if got is not OUT_OF_RANGE and got != c:
                report.append(f"left unit fails at {c!r}")
            got = O.compose(c, _unit_diagram(O, C.arity[c]))
            if got is not OUT_OF_RANGE and got != c:
                report.append(f"right unit fails at {c!r}")
    for d in range(C.glob.max_dim + 1):
        for (a, psi) in square_cells(C, C, d):
            comp = O.compose(a, psi)
            if comp is OUT_OF_RANGE:
                continue
            want = word_arity(psi, lambda v: C.arity[v])
            if C.arity[comp] != want:
                report.append(f"composite arity wrong at ({a!r}, {psi!r})")
            if d >= 1:
                lo = O.compose(C.glob.src_of(a), pd_boundary(psi, "source"))
                if lo is not OUT_OF_RANGE and lo != C.glob.src_of(comp):
                    report.append(f"composition not globular at ({a!r}, {psi!r})")
            sigma = C.arity[a]
            trees = {p: C.arity[psi.label(*p)]
                     for p in gap_positions(sigma.tree)}
            for Psi in enumerate_labellings(C, want):
                if budget <= 0:
                    return report
                budget -= 1
                one = O.compose(comp, Psi)
                _, pieces = inner_pieces(sigma, trees, Psi)
                leaf = {p: O.compose(psi.label(*p), pieces[p]) for p in pieces}
                if one is OUT_OF_RANGE or any(
                        v is OUT_OF_RANGE for v in leaf.values()):
                    continue
                labels = complete_labelling(sigma.tree, leaf, ops)
                two = O.compose(a, PastingDiagram.make(sigma.tree, sigma.dim,
                                                       labels))
                if two is not OUT_OF_RANGE and one != two:
                    report.append(
                        f"associativity fails at ({a!r}, {psi!r}, {Psi!r})")
    return report


def glob_operad_algebra_check(O: GlobularOperad, A: Collection, act,
                              max_checks: int = 2000) -> list:
    """Check an operad action on a degenerate collection, by two routes:
    the unit and substitution diagrams of the action directly, and the
    curried map into the tautological construction, which must send
    operadic composition to gtaut_compose."""
    report = []
    for c, tc in A.arity.items():
        if tc.tree != LEAF:
            report.append(f"carrier not degenerate at {c!r}")
    if report:
        return report
    aops = GlobOps(A.glob)
    C = O.carrier
    for d in range(min(C.glob.max_dim, A.glob.max_dim) + 1):
        for x in A.glob.cells_at(d):
            got = act(O.unit[d], monad_eta(x, aops))
            if got != x:
                report.append(f"unit action fails at {x!r}: got {got!r}")

    curried_memo = {}

    def curried(o):
        if o in curried_memo:
            return curried_memo[o]
        sigma = C.arity[o]
        table = _sorted_table((psi, act(o, psi))
                              for psi in enumerate_labellings(A, sigma))
        if sigma.dim == 0:
            h = HomCell(sigma, table)
        else:
            h = HomCell(sigma, table,
                        curried(C.glob.src_of(o)), curried(C.glob.tgt_of(o)))
        curried_memo[o] = h
        return h

    budget = max_checks
    for d in range(min(C.glob.max_dim, A.glob.max_dim) + 1):
        if d >= 1 and gtaut_unit(A, d) != curried(O.unit[d]):
            report.append(f"curried unit differs from the unit table at dim {d}")
        for (a, psi) in square_cells(C, C, d):
            comp = O.compose(a, psi)
            if comp is OUT_OF_RANGE:
                continue
            sigma = C.arity[a]
            trees = {p: C.arity[psi.label(*p)]
                     for p in gap_positions(sigma.tree)}
            for Psi in enumerate_labellings(A, C.arity[comp]):
                if budget <= 0:
                    return report
                budget -= 1
                one = act(comp, Psi)
                _, pieces = inner_pieces(sigma, trees, Psi)
                leaf = {p: act(psi.label(*p), pieces[p]) for p in pieces}
                labels = complete_labelling(sigma.tree, leaf, aops)
                two = act(a, PastingDiagram.make(sigma.tree, sigma.dim,
                                                 labels))
                if one != two:
                    report.append(
                        f"action square fails at ({a!r}, {psi!r}, {Psi!r}): "
                        f"{one!r} vs {two!r}")
            lhs = curried(comp)
            rhs = gtaut_compose(A, curried(a),
                                {p: curried(psi.label(*p))
                                 for p in gap_positions(sigma.tree)})
            if lhs != rhs:
                report.append(
                    f"curried map fails at ({a!r}, {psi!r})")
    return report
