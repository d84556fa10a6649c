"""Bigraded collection graphs and globular PROs.

A globular PRO has natural numbers as objects, a collection of operation
cells for every pair (n, m), composition along matching objects, a tensor
that adds object gradings, and identity cells.  Two engines are provided:
the globularization of a classical PRO (cells are pairs of a PRO morphism
and a scheme) and the tautological engine on a degenerate collection
(cells are hom sections between finite powers).  Both are checked by the
same sampled law validator.  Exponent zero uses a node-bounded view of the
terminal collection, so checks near the bound are bounded certificates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .globset import GlobularSet
from .coll import (Collection, HomCell, coll_internal_hom_fiber,
                   coll_product, coll_square, coll_validate,
                   complete_labelling, degenerate_collection,
                   enumerate_labellings, glob_operad_algebra_check,
                   gtaut_unit, hom_compose, inner_pieces, special_collection,
                   terminal_operad, _sorted_table)
from .pasting import (LEAF, GlobOps, PastingDiagram, TreeCell, chain_tree,
                      enumerate_trees, gap_positions, monad_eta, pd_boundary,
                      pd_eval, tree_node_count, word_arity)
from .pros import (eval_expr, nf_to_expr, pro_algebra_check, PresentedPro)


# ---------------------------------------------------------------------------
# bigraded graphs


@dataclass
class NCollGraph:
    max_obj: int
    max_dim: int
    hom: dict = field(default_factory=dict)  # (n, m) -> Collection

    def hom_at(self, n: int, m: int) -> Collection:
        if (n, m) in self.hom:
            return self.hom[(n, m)]
        return special_collection("empty", self.max_dim)

    def validate(self) -> list:
        report = []
        for (n, m), C in sorted(self.hom.items()):
            report += [f"hom({n},{m}): {r}" for r in coll_validate(C)]
        return report


def coll_disjoint(parts: list, max_dim: int) -> Collection:
    """Disjoint union of collections, cells tagged by the part label."""
    cells = [[] for _ in range(max_dim + 1)]
    src = [{} for _ in range(max_dim + 1)]
    tgt = [{} for _ in range(max_dim + 1)]
    arity = {}
    for tag, C in parts:
        for d in range(max_dim + 1):
            for c in C.glob.cells_at(d):
                cells[d].append((tag, c))
                arity[(tag, c)] = C.arity[c]
                if d >= 1:
                    src[d][(tag, c)] = (tag, C.glob.src_of(c))
                    tgt[d][(tag, c)] = (tag, C.glob.tgt_of(c))
    return Collection(GlobularSet(max_dim, cells, src, tgt), arity)


def graph_jay(max_obj: int, max_dim: int, max_nodes: int = 3) -> NCollGraph:
    """The unit graph: the terminal collection at grading (0,0), bounded."""
    return NCollGraph(max_obj, max_dim,
                      {(0, 0): special_collection("terminal", max_dim,
                                                  max_nodes)})


def graph_oplus(G: NCollGraph, H: NCollGraph) -> NCollGraph:
    """The bigraded tensor: at (n, m), the disjoint union over all
    splittings of cartesian products of hom collections."""
    N = G.max_obj + H.max_obj
    out = NCollGraph(N, G.max_dim, {})
    for n in range(N + 1):
        for m in range(N + 1):
            parts = []
            for i in range(n + 1):
                for l in range(m + 1):
                    if (i, l) not in G.hom or (n - i, m - l) not in H.hom:
                        continue
                    P = coll_product(G.hom[(i, l)], H.hom[(n - i, m - l)])
                    parts.append(((i, l, n - i, m - l), P))
            if parts:
                out.hom[(n, m)] = coll_disjoint(parts, G.max_dim)
    return out


def free_monoidal_graph(G: NCollGraph, max_n: int,
                        max_nodes: int = 3) -> NCollGraph:
    """Words of graph edges: at (n, m), all sequences of up to max_n edges
    with a common arity whose gradings sum to (n, m).  The empty word at
    (0, 0) contributes the bounded terminal collection.

    Cells are (grading sequence, edge sequence, scheme) triples.
    """
    D = G.max_dim
    out = NCollGraph(G.max_obj * max(max_n, 1), D, {})

    def add(n, m, cell, src_c, tgt_c, sigma, store):
        d = sigma.dim
        store.setdefault((n, m), ([[] for _ in range(D + 1)],
                                  [{} for _ in range(D + 1)],
                                  [{} for _ in range(D + 1)], {}))
        cells, src, tgt, arity = store[(n, m)]
        cells[d].append(cell)
        arity[cell] = sigma
        if d >= 1:
            src[d][cell] = src_c
            tgt[d][cell] = tgt_c

    store = {}
    T = special_collection("terminal", D, max_nodes)
    for d in range(D + 1):
        for s in T.glob.cells_at(d):
            cell = ((), (), s)
            b = None if d == 0 else ((), (), s.boundary())
            add(0, 0, cell, b, b, s, store)
    gradings = sorted(G.hom)
    for p in range(1, max_n + 1):
        for tags in itertools.product(gradings, repeat=p):
            n = sum(t[0] for t in tags)
            m = sum(t[1] for t in tags)
            homs = [G.hom[t] for t in tags]
            for d in range(D + 1):
                pools = [h.glob.cells_at(d) for h in homs]
                for parts in itertools.product(*pools):
                    arities = [homs[i].arity[parts[i]] for i in range(p)]
                    if len(set(arities)) != 1:
                        continue
                    sigma = arities[0]
                    cell = (tags, parts, sigma)
                    if d >= 1:
                        sp = tuple(homs[i].glob.src_of(parts[i])
                                   for i in range(p))
                        tp = tuple(homs[i].glob.tgt_of(parts[i])
                                   for i in range(p))
                        b = sigma.boundary()
                        add(n, m, cell, (tags, sp, b), (tags, tp, b), sigma,
                            store)
                    else:
                        add(n, m, cell, None, None, sigma, store)
    for (n, m), (cells, src, tgt, arity) in store.items():
        out.hom[(n, m)] = Collection(GlobularSet(D, cells, src, tgt), arity)
    return out


def mono_concat(u, v):
    """The word concatenation product; both words must share their arity."""
    tags_u, parts_u, s_u = u
    tags_v, parts_v, s_v = v
    if s_u != s_v:
        raise ValueError("concatenation needs a common arity")
    return (tags_u + tags_v, parts_u + parts_v, s_u)


# ---------------------------------------------------------------------------
# the free collection-enriched category on a graph


class FreeCollCategory:
    """Hom objects are coproducts over object paths of the iterated tensor
    of edge collections; every path summand carries a trailing unit factor
    so the nesting is uniform.  Composition concatenates paths, with the
    unit summand acting by the unitors."""

    def __init__(self, G: NCollGraph, max_len: int):
        self.G = G
        self.max_len = max_len
        self.D = G.max_dim
        self.unit = special_collection("unit", self.D)
        self._summand = {(): self.unit}

    def summand(self, tau: tuple) -> Collection:
        """The collection for one object path (a tuple of objects,
        empty for the identity summand)."""
        if tau not in self._summand:
            edge = self.G.hom_at(tau[0], tau[1])
            rest = self.summand(tau[1:] if len(tau) > 2 else ())
            self._summand[tau] = coll_square(edge, rest)
        return self._summand[tau]

    def paths(self, X: int, Y: int) -> list:
        out = [()] if X == Y else []
        objs = range(self.G.max_obj + 1)
        frontier = [(X,)]
        for _ in range(self.max_len):
            nxt = []
            for pre in frontier:
                for c in objs:
                    tau = pre + (c,)
                    nxt.append(tau)
                    if c == Y:
                        out.append(tau)
            frontier = nxt
        return out

    def hom(self, X: int, Y: int) -> Collection:
        parts = []
        for tau in self.paths(X, Y):
            S = self.summand(tau)
            if any(S.glob.cells_at(d) for d in range(self.D + 1)):
                parts.append((tau, S))
        return coll_disjoint(parts, self.D)

    def _compose_raw(self, tau1, u, tau2, psi):
        """Compose an untagged path cell with an untagged diagram of cells
        from the second path's summand."""
        if tau1 == ():
            return psi.label((0,) * psi.dim, 0)
        b1, psi1 = u
        rest1 = tau1[1:] if len(tau1) > 2 else ()
        S_rest = self.summand(rest1)
        sigma = self.G.hom_at(tau1[0], tau1[1]).arity[b1]
        trees = {p: S_rest.arity[psi1.label(*p)]
                 for p in gap_positions(sigma.tree)}
        _, pieces = inner_pieces(sigma, trees, psi)
        leaf = {p: self._compose_raw(rest1, psi1.label(*p), tau2, pieces[p])
                for p in pieces}
        target = self.summand(self._concat(rest1, tau2))
        labels = complete_labelling(sigma.tree, leaf, GlobOps(target.glob))
        return (b1, PastingDiagram.make(sigma.tree, sigma.dim, labels))

    @staticmethod
    def _concat(tau1, tau2):
        if tau1 == ():
            return tau2
        if tau2 == ():
            return tau1
        return tau1 + tau2[1:]

    def compose(self, u_tagged, psi_tagged):
        """Enriched composition on tagged hom cells: the first argument is
        the first path segment, the diagram supplies the second."""
        tau1, u = u_tagged
        tags = {psi_tagged.label(*p)[0]
                for p in gap_positions(psi_tagged.tree)}
        if len(tags) != 1:
            raise ValueError("composition needs a single second summand")
        (tau2,) = tags
        psi = psi_tagged.relabel(lambda pos, v: v[1])
        return (self._concat(tau1, tau2),
                self._compose_raw(tau1, u, tau2, psi))


# ---------------------------------------------------------------------------
# globular PRO engines


class GlobularizedPro:
    """The globularization of a classical PRO: a d-cell of hom(n, m) is a
    pair of a PRO morphism and a d-scheme; the scheme is the arity.

    The backend must expose id/compose/tensor/enumerate_hom with values
    that compare canonically (a normalized presentation or an exact
    model)."""

    def __init__(self, P, D: int, enum_fuel: int = 6):
        self.P = P
        self.D = D
        self.enum_fuel = enum_fuel

    def hom_cells(self, n, m, d, max_nodes) -> list:
        return [(phi, TreeCell(t, d))
                for phi in self.P.enumerate_hom(n, m, self.enum_fuel)
                for t in enumerate_trees(d, max_nodes)]

    def arity(self, cell) -> TreeCell:
        return cell[1]

    def src(self, cell):
        return (cell[0], cell[1].boundary())

    tgt = src

    def compose(self, n, m, l, outer, psi):
        labels = [psi.label(*p) for p in gap_positions(psi.tree)]
        shared = {phi for phi, _ in labels}
        if len(shared) != 1:
            raise ValueError("diagram labels carry unequal morphism parts")
        (f,) = shared
        return (self.P.compose(outer[0], f),
                word_arity(psi, lambda c: c[1]))

    def tensor(self, n1, m1, n2, m2, u, v):
        if u[1] != v[1]:
            raise ValueError("tensor needs equal schemes")
        return (self.P.tensor(u[0], v[0]), u[1])

    def j(self, n, d):
        return (self.P.id(n), TreeCell(chain_tree(d), d))

    def plus_unit(self, sigma: TreeCell):
        return (self.P.id(0), sigma)

    def has_cell(self, n, m, cell) -> bool:
        phi, sigma = cell
        return any(self.P.eq(phi, q) is True
                   for q in self.P.enumerate_hom(n, m, self.enum_fuel))


def globularize(P, D: int, enum_fuel: int = 6) -> GlobularizedPro:
    return GlobularizedPro(P, D, enum_fuel)


class GTautPro:
    """The tautological globular PRO on a degenerate collection: hom(n, m)
    fibers are the internal hom sections between the n-th and m-th powers,
    with the bounded terminal collection at exponent zero."""

    def __init__(self, A: Collection, max_nodes: int = 3):
        for c, tc in A.arity.items():
            if tc.tree != LEAF:
                raise ValueError(f"carrier not degenerate at {c!r}")
        self.A = A
        self.D = A.glob.max_dim
        self.max_nodes = max_nodes
        self._powers = {}
        self._fiber_memo = {}

    def power(self, n: int) -> Collection:
        if n not in self._powers:
            if n == 0:
                self._powers[n] = special_collection("terminal", self.D,
                                                     self.max_nodes)
            else:
                G = self.A.glob
                cells = [list(itertools.product(G.cells_at(d), repeat=n))
                         for d in range(self.D + 1)]
                src = [{} for _ in range(self.D + 1)]
                tgt = [{} for _ in range(self.D + 1)]
                for d in range(1, self.D + 1):
                    for c in cells[d]:
                        src[d][c] = tuple(G.src_of(x) for x in c)
                        tgt[d][c] = tuple(G.tgt_of(x) for x in c)
                glob = GlobularSet(self.D, cells, src, tgt)
                self._powers[n] = degenerate_collection(glob)
        return self._powers[n]

    def hom_fiber(self, n, m, sigma: TreeCell) -> list:
        memo = self._fiber_memo.setdefault((n, m), {})
        return coll_internal_hom_fiber(self.power(n), self.power(m), sigma,
                                       memo)

    def hom_cells(self, n, m, d, max_nodes) -> list:
        out = []
        for t in enumerate_trees(d, max_nodes):
            out.extend(self.hom_fiber(n, m, TreeCell(t, d)))
        return out

    def arity(self, cell: HomCell) -> TreeCell:
        return cell.sigma

    def src(self, cell: HomCell):
        return cell.src

    def tgt(self, cell: HomCell):
        return cell.tgt

    def compose(self, n, m, l, outer: HomCell, psi: PastingDiagram):
        assign = {p: psi.label(*p) for p in gap_positions(psi.tree)}
        return hom_compose(self.power(n), self.power(m), outer, assign)

    def _dim_of(self, cell) -> int:
        if isinstance(cell, TreeCell):
            return cell.dim
        return self.A.glob.cell_dim(cell[0])

    def _split(self, cell, n1, n2):
        if n1 + n2 == 0:
            return cell, cell
        d = self._dim_of(cell)
        left = TreeCell(LEAF, d) if n1 == 0 else cell[:n1]
        right = TreeCell(LEAF, d) if n2 == 0 else cell[n1:]
        return left, right

    @staticmethod
    def _concat_vals(x, m1, y, m2):
        if m1 == 0:
            return y
        if m2 == 0:
            return x
        return x + y

    def tensor(self, n1, m1, n2, m2, u: HomCell, v: HomCell):
        if u.sigma != v.sigma:
            raise ValueError("tensor needs equal schemes")
        sigma = u.sigma
        rows = []
        for Theta in enumerate_labellings(self.power(n1 + n2), sigma):
            Th1 = Theta.relabel(lambda pos, c: self._split(c, n1, n2)[0])
            Th2 = Theta.relabel(lambda pos, c: self._split(c, n1, n2)[1])
            rows.append((Theta, self._concat_vals(u.value(Th1), m1,
                                                  v.value(Th2), m2)))
        table = _sorted_table(rows)
        if sigma.dim == 0:
            return HomCell(sigma, table)
        return HomCell(sigma, table,
                       self.tensor(n1, m1, n2, m2, u.src, v.src),
                       self.tensor(n1, m1, n2, m2, u.tgt, v.tgt))

    def j(self, n, d) -> HomCell:
        return gtaut_unit(self.power(n), d)

    def plus_unit(self, sigma: TreeCell):
        """The unique hom(0,0) section over sigma, or None past the node
        bound."""
        rows = []
        for psi in enumerate_labellings(self.power(0), sigma):
            val = word_arity(psi, lambda t: t)
            if tree_node_count(val.tree) > self.max_nodes:
                return None
            rows.append((psi, val))
        table = _sorted_table(rows)
        if sigma.dim == 0:
            return HomCell(sigma, table)
        bsrc = self.plus_unit(sigma.boundary())
        if bsrc is None:
            return None
        return HomCell(sigma, table, bsrc, bsrc)


def gtaut_pro_hom(A: Collection, n: int, m: int, sigma: TreeCell,
                  max_nodes: int = 3) -> list:
    """The fiber of the tautological globular PRO over one scheme."""
    return GTautPro(A, max_nodes).hom_fiber(n, m, sigma)


# ---------------------------------------------------------------------------
# the sampled law validator


def materialize_hom(P, n: int, m: int, D: int, max_nodes: int) -> Collection:
    cells = [sorted(P.hom_cells(n, m, d, max_nodes), key=repr)
             for d in range(D + 1)]
    src = [{} for _ in range(D + 1)]
    tgt = [{} for _ in range(D + 1)]
    arity = {}
    for d in range(D + 1):
        for c in cells[d]:
            arity[c] = P.arity(c)
            if d >= 1:
                src[d][c] = P.src(c)
                tgt[d][c] = P.tgt(c)
    return Collection(GlobularSet(D, cells, src, tgt), arity)


class _ProOps:
    """Cell boundary operations backed by an engine, so that composites
    outside the materialized samples still have boundaries."""

    def __init__(self, P):
        self.P = P

    def dim(self, c):
        return self.P.arity(c).dim

    def src(self, c):
        return self.P.src(c)

    def tgt(self, c):
        return self.P.tgt(c)


def globpro_validate(P, bounds: dict) -> list:
    """Sampled check of the globular PRO laws within declared bounds: hom
    collections validate, composition is arity-correct, globular, unital
    and associative, the tensor is graded, globular, associative and
    unital, and composition and tensor interchange.  A pass is a bounded
    certificate for the sampled data only."""
    N = bounds.get("max_obj", 2)
    D = bounds.get("max_dim", 1)
    S = bounds.get("max_tree_nodes", 2)
    budget = bounds.get("max_samples", 300)
    cell_cap = bounds.get("max_cells_per_hom", 40)
    report = []
    homs = {}
    for n in range(N + 1):
        for m in range(N + 1):
            H = materialize_hom(P, n, m, D, S)
            homs[(n, m)] = H
            report += [f"hom({n},{m}): {r}" for r in coll_validate(H)]
    if report:
        return report

    def hom_sample(n, m):
        return [c for d in range(D + 1)
                for c in homs[(n, m)].glob.cells_at(d)][:cell_cap]

    ops = _ProOps(P)

    # unit laws of composition
    for n in range(N + 1):
        for l in range(N + 1):
            for u in hom_sample(n, l):
                d = P.arity(u).dim
                left = P.compose(n, l, l, P.j(l, d), monad_eta(u, ops))
                if left != u:
                    report.append(f"left identity fails at hom({n},{l}) {u!r}")
                sigma = P.arity(u)
                ud = PastingDiagram.make(
                    sigma.tree, sigma.dim,
                    {p: P.j(n, len(p[0])) for p in gap_positions(sigma.tree)})
                right = P.compose(n, n, l, u, ud)
                if right != u:
                    report.append(f"right identity fails at hom({n},{l}) {u!r}")

    class SectionDone(Exception):
        """A law section used up its sample budget."""

    def make_spend():
        left = [budget]

        def spend():
            if left[0] <= 0:
                raise SectionDone
            left[0] -= 1
        return spend

    def check_composition(spend):
        # arity, globularity, associativity
        for n in range(N + 1):
            for m in range(N + 1):
                for l in range(N + 1):
                    H_in = homs[(n, m)]
                    for outer in hom_sample(m, l):
                        sigma = P.arity(outer)
                        for psi in enumerate_labellings(H_in, sigma):
                            spend()
                            comp = P.compose(n, m, l, outer, psi)
                            want = word_arity(psi, lambda c: P.arity(c))
                            if P.arity(comp) != want:
                                report.append(
                                    f"composite arity wrong at hom({m},{l})"
                                    f" {outer!r}")
                            if sigma.dim >= 1:
                                lo = P.compose(n, m, l, P.src(outer),
                                               pd_boundary(psi, "source"))
                                if lo != P.src(comp):
                                    report.append(
                                        f"composition not globular at"
                                        f" {outer!r}")
                            for q in range(N + 1):
                                H2 = homs[(q, n)]
                                trees = {p: P.arity(psi.label(*p))
                                         for p in gap_positions(sigma.tree)}
                                for Psi in enumerate_labellings(H2, want)[:2]:
                                    spend()
                                    one = P.compose(q, n, l, comp, Psi)
                                    _, pieces = inner_pieces(sigma, trees,
                                                             Psi)
                                    leaf = {p: P.compose(q, n, m,
                                                         psi.label(*p),
                                                         pieces[p])
                                            for p in pieces}
                                    labels = complete_labelling(
                                        sigma.tree, leaf, ops)
                                    two = P.compose(
                                        q, m, l, outer,
                                        PastingDiagram.make(
                                            sigma.tree, sigma.dim, labels))
                                    if one != two:
                                        report.append(
                                            f"composition associativity fails"
                                            f" at hom({m},{l}) {outer!r}")

    pairs = [(n, m) for n in range(N + 1) for m in range(N + 1)]

    def check_tensor(spend):
        # grading, globularity, associativity, units
        for (n1, m1) in pairs:
            for (n2, m2) in pairs:
                if n1 + n2 > N or m1 + m2 > N:
                    continue
                for u in hom_sample(n1, m1)[:6]:
                    pu = P.plus_unit(P.arity(u))
                    if pu is not None:
                        if P.tensor(n1, m1, 0, 0, u, pu) != u:
                            report.append(f"tensor right unit fails at {u!r}")
                        if P.tensor(0, 0, n1, m1, pu, u) != u:
                            report.append(f"tensor left unit fails at {u!r}")
                    for v in hom_sample(n2, m2)[:6]:
                        if P.arity(u) != P.arity(v):
                            continue
                        spend()
                        w = P.tensor(n1, m1, n2, m2, u, v)
                        if P.arity(w) != P.arity(u):
                            report.append(
                                f"tensor arity wrong at ({u!r},{v!r})")
                        if P.arity(u).dim >= 1:
                            ws = P.tensor(n1, m1, n2, m2, P.src(u), P.src(v))
                            if P.src(w) != ws:
                                report.append(
                                    f"tensor not globular at ({u!r},{v!r})")
                        for (n3, m3) in pairs:
                            if n1 + n2 + n3 > N or m1 + m2 + m3 > N:
                                continue
                            for x in hom_sample(n3, m3)[:2]:
                                if P.arity(x) != P.arity(u):
                                    continue
                                lhs = P.tensor(n1 + n2, m1 + m2, n3, m3, w, x)
                                rhs = P.tensor(n1, m1, n2 + n3, m2 + m3, u,
                                               P.tensor(n2, m2, n3, m3, v, x))
                                if lhs != rhs:
                                    report.append(
                                        f"tensor associativity fails at {u!r}")

    def check_interchange(spend):
        # composition and tensor interchange on shape-matched samples
        for (m1, l1) in pairs:
            for (m2, l2) in pairs:
                if m1 + m2 > N or l1 + l2 > N:
                    continue
                for n1 in range(N + 1):
                    for n2 in range(N + 1 - n1):
                        for u in hom_sample(m1, l1)[:4]:
                            for v in hom_sample(m2, l2)[:4]:
                                if P.arity(u) != P.arity(v):
                                    continue
                                sigma = P.arity(u)
                                for psi in enumerate_labellings(
                                        homs[(n1, m1)], sigma)[:2]:
                                    for phi in enumerate_labellings(
                                            homs[(n2, m2)], sigma)[:2]:
                                        ok = all(
                                            P.arity(psi.label(*p)) ==
                                            P.arity(phi.label(*p))
                                            for p in
                                            gap_positions(sigma.tree))
                                        if not ok:
                                            continue
                                        spend()
                                        lhs = P.tensor(
                                            n1, l1, n2, l2,
                                            P.compose(n1, m1, l1, u, psi),
                                            P.compose(n2, m2, l2, v, phi))
                                        both = psi.relabel(
                                            lambda pos, a: P.tensor(
                                                n1, m1, n2, m2, a,
                                                phi.label(*pos)))
                                        rhs = P.compose(
                                            n1 + n2, m1 + m2, l1 + l2,
                                            P.tensor(m1, l1, m2, l2, u, v),
                                            both)
                                        if lhs != rhs:
                                            report.append(
                                                "interchange fails at "
                                                f"hom({m1},{l1}) {u!r}")

    for section in (check_composition, check_tensor, check_interchange):
        try:
            section(make_spend())
        except SectionDone:
            pass
    return report


# ---------------------------------------------------------------------------
# strict algebras of a globularized PRO


@dataclass
class StrictOmegaCategory:
    glob: GlobularSet
    compose: object = field(repr=False)   # (k, a, b) -> cell, a then b
    identity: object = field(repr=False)  # (c, dim) -> cell


class _CellwisePro:
    """PRO backend whose morphisms are functions on tuples of parallel
    cells, used to evaluate presentation expressions dimension-wise."""

    def id(self, n):
        return (n, n, lambda xs: xs)

    def compose(self, g, f):
        nf, mf, ff = f
        ng, mg, gg = g
        return (nf, mg, lambda xs: gg(ff(xs)))

    def tensor(self, a, b):
        na, ma, fa = a
        nb, mb, fb = b
        return (na + nb, ma + mb,
                lambda xs: fa(xs[:na]) + fb(xs[na:]))


def strict_algebra_check(GP: GlobularizedPro, A: StrictOmegaCategory,
                         interp: dict, bounds: dict = None) -> list:
    """Check that a strict globular structure with PRO-operation functors
    is an algebra of the globularized PRO.

    Prechecks: the pasting action realizes a strict structure, each
    dimension is an algebra of the underlying PRO, and every operation is
    a strict functor.  Main check: the induced sections respect the
    globular PRO's composition, tensor and identities on sampled cells.
    """
    bounds = bounds or {}
    D = min(GP.D, A.glob.max_dim)
    N = bounds.get("max_obj", 2)
    S = bounds.get("max_tree_nodes", 2)
    budget = bounds.get("max_samples", 200)
    report = []

    def act(o, psi):
        return pd_eval(psi, A.compose, A.identity)

    Acoll = degenerate_collection(A.glob)
    pre = glob_operad_algebra_check(terminal_operad(D, max(S, D)), Acoll, act)
    report += [f"strict structure: {r}" for r in pre]

    pres = GP.P.pres
    sig = pres.sig()
    for d in range(D + 1):
        cells_d = list(A.glob.cells_at(d))
        interp_d = {g: (lambda xs, g=g, d=d: interp[g](tuple(xs), d))
                    for g in sig}
        Pp = PresentedPro(pres, fuel=64)
        pre = pro_algebra_check(Pp, cells_d, interp_d, sample_fuel=3)
        report += [f"operations at dim {d}: {r}" for r in pre]

    # strict functor check: operations commute with composition/identities
    for g, (n, m) in sig.items():
        for k in range(1, D + 1):
            for zs in itertools.product(A.glob.cells_at(k - 1), repeat=n):
                lhs = interp[g](tuple(A.identity(z, k) for z in zs), k)
                rhs = tuple(A.identity(w, k)
                            for w in interp[g](zs, k - 1))
                if lhs != rhs:
                    report.append(
                        f"operation {g!r} does not preserve identities at {zs!r}")
            for xs in itertools.product(A.glob.cells_at(k), repeat=n):
                for ys in itertools.product(A.glob.cells_at(k), repeat=n):
                    if any(A.glob.tgt_of(x) != A.glob.src_of(y)
                           for x, y in zip(xs, ys)):
                        continue
                    lhs = interp[g](tuple(A.compose(k - 1, x, y)
                                          for x, y in zip(xs, ys)), k)
                    rhs = tuple(A.compose(k - 1, x, y) for x, y in
                                zip(interp[g](xs, k), interp[g](ys, k)))
                    if lhs != rhs:
                        report.append(
                            f"operation {g!r} does not preserve composition")
    if report:
        return report

    # the induced sections must form a map of globular PROs
    T = GTautPro(Acoll, max_nodes=max(S, D))
    CW = _CellwisePro()
    fn_memo = {}

    def morphism_fn(phi, d):
        if (phi, d) not in fn_memo:
            e = nf_to_expr(phi, sig) if hasattr(phi, "layers") else phi
            images = {g: (sig[g][0], sig[g][1],
                          (lambda xs, g=g, d=d: interp[g](tuple(xs), d)))
                      for g in sig}
            fn_memo[(phi, d)] = eval_expr(e, CW, images, sig)
        return fn_memo[(phi, d)]

    def power_eval(m, psi):
        comp = lambda k, a, b: tuple(A.compose(k, x, y)
                                     for x, y in zip(a, b))
        ident = lambda c, dim: tuple(A.identity(x, dim) for x in c)
        return pd_eval(psi, comp, ident)

    omega_memo = {}

    def omega(n, m, cell):
        if (n, m, cell) in omega_memo:
            return omega_memo[(n, m, cell)]
        phi, sigma = cell
        rows = []
        for Theta in enumerate_labellings(T.power(n), sigma):
            relab = Theta.relabel(
                lambda pos, c: morphism_fn(phi, len(pos[0]))[2](c))
            rows.append((Theta, power_eval(m, relab)))
        table = _sorted_table(rows)
        if sigma.dim == 0:
            h = HomCell(sigma, table)
        else:
            h = HomCell(sigma, table, omega(n, m, GP.src(cell)),
                        omega(n, m, GP.tgt(cell)))
        omega_memo[(n, m, cell)] = h
        return h

    for n in range(1, N + 1):
        for d in range(D + 1):
            if omega(n, n, GP.j(n, d)) != T.j(n, d):
                report.append(f"induced identity section wrong at ({n},{d})")
    homs = {(n, m): materialize_hom(GP, n, m, D, S)
            for n in range(1, N + 1) for m in range(1, N + 1)}
    for (n, m) in sorted(homs):
        for l in range(1, N + 1):
            for outer in [c for dd in range(D + 1)
                          for c in homs[(m, l)].glob.cells_at(dd)][:10]:
                sigma = GP.arity(outer)
                for psi in enumerate_labellings(homs[(n, m)], sigma)[:4]:
                    if budget <= 0:
                        return report
                    budget -= 1
                    comp = GP.compose(n, m, l, outer, psi)
                    lhs = omega(n, l, comp)
                    rhs = T.compose(n, m, l, omega(m, l, outer),
                                    psi.relabel(lambda pos, c:
                                                omega(n, m, c)))
                    if lhs != rhs:
                        report.append(
                            f"induced sections break composition at {outer!r}")
        for (n2, m2) in sorted(homs):
            if n + n2 > N or m + m2 > N:
                continue
            for u in [c for dd in range(D + 1)
                      for c in homs[(n, m)].glob.cells_at(dd)][:6]:
                for v in [c for dd in range(D + 1)
                          for c in homs[(n2, m2)].glob.cells_at(dd)][:6]:
                    if GP.arity(u) != GP.arity(v):
                        continue
                    if budget <= 0:
                        return report
                    budget -= 1
                    lhs = omega(n + n2, m + m2,
                                GP.tensor(n, m, n2, m2, u, v))
                    rhs = T.tensor(n, m, n2, m2, omega(n, m, u),
                                   omega(n2, m2, v))
                    if lhs != rhs:
                        report.append(
                            f"induced sections break the tensor at {u!r}")
    return report
