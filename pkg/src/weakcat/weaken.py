"""Contraction structures and the bounded weakening engine.

A contraction on a globular map chooses, for every positive-dimensional
cell of the target and every parallel pair of cells over its boundary, a
lift cell.  Weakening a presented theory starts from nothing over the
globularized theory and alternates two moves per dimension: adjoin
contraction lifts for every parallel pair of equal-image cells, and close
under composition and tensor up to an expression-size bound.  Coherence
cells (associators, unitors) arise as lifts between distinct expressions
with a common image.

All bounds (dimension, tree nodes, expression size, hom enumeration) are
explicit and stamped into the output; results are bounded fragments.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .globset import GlobularSet
from .coll import Collection, complete_labelling, inner_pieces
from .pasting import (LEAF, PastingDiagram, TreeCell, chain_tree,
                      enumerate_trees, gap_positions, pd_boundary,
                      subtree_at, tree_height, tree_to_str)
from .pros import (NormalForm, NormalizedPro, canonical_nf, eval_expr,
                   expr_to_str, nf_to_expr)
from .globpro import GlobularizedPro


# ---------------------------------------------------------------------------
# parallel pairs and contractions on globular maps


def par_over(f: dict, X: GlobularSet, Y: GlobularSet, nu) -> list:
    """All pairs of parallel cells of X one dimension below nu that map
    onto the boundary of nu."""
    d = Y.cell_dim(nu)
    if d < 1:
        raise ValueError("parallel pairs exist over positive dimensions")
    lo = [c for c in X.cells_at(d - 1) if f.get(c) == Y.src_of(nu)]
    hi = [c for c in X.cells_at(d - 1) if f.get(c) == Y.tgt_of(nu)]
    out = []
    for a in lo:
        for b in hi:
            if d - 1 == 0 or (X.src_of(a) == X.src_of(b)
                              and X.tgt_of(a) == X.tgt_of(b)):
                out.append((a, b))
    return out


@dataclass
class Contraction:
    f: dict                 # X cell -> Y cell
    X: GlobularSet
    Y: GlobularSet
    lifts: dict             # (nu, (lo, hi)) -> X cell


def check_contraction(c: Contraction) -> list:
    """The lift equations (boundary and image), plus totality over all
    parallel pairs."""
    report = []
    for (nu, (a, b)), k in sorted(c.lifts.items(), key=repr):
        if c.X.src_of(k) != a or c.X.tgt_of(k) != b:
            report.append(f"lift over {nu!r} has wrong boundary")
        if c.f.get(k) != nu:
            report.append(f"lift over {nu!r} does not map onto it")
    for d in range(1, c.Y.max_dim + 1):
        for nu in c.Y.cells_at(d):
            for pair in par_over(c.f, c.X, c.Y, nu):
                if (nu, pair) not in c.lifts:
                    report.append(f"missing lift over {nu!r} at {pair!r}")
    return report


def is_leinster_fibration(f: dict, X: GlobularSet, Y: GlobularSet):
    """Whether every parallel pair over every positive-dimensional cell
    admits some lift; returns (verdict, witness or None)."""
    for d in range(1, Y.max_dim + 1):
        for nu in Y.cells_at(d):
            for (a, b) in par_over(f, X, Y, nu):
                found = any(f.get(k) == nu and X.src_of(k) == a
                            and X.tgt_of(k) == b for k in X.cells_at(d))
                if not found:
                    return False, (nu, (a, b))
    return True, None


def free_contraction(f: dict, X: GlobularSet, Y: GlobularSet, D: int,
                     keep=None):
    """Freely adjoin lift cells dimension by dimension.

    Every 0-cell of Y without a preimage gets a fresh 0-cell; then for
    each d from 1 to D, every d-cell of Y passing the filter and every
    parallel pair over it (computed against the enlarged lower dimension)
    gets a fresh lift.  Returns (X', f', Contraction).
    """
    keep = keep or (lambda nu: True)
    cells = [list(X.cells_at(d)) if d <= X.max_dim else []
             for d in range(D + 1)]
    src = [dict(X.src[d]) if 1 <= d <= X.max_dim else {}
           for d in range(D + 1)]
    tgt = [dict(X.tgt[d]) if 1 <= d <= X.max_dim else {}
           for d in range(D + 1)]
    f2 = dict(f)
    lifts = {}
    for nu in Y.cells_at(0):
        if not any(f2.get(c) == nu for c in cells[0]):
            fresh = ("lift0", nu)
            cells[0].append(fresh)
            f2[fresh] = nu
    for d in range(1, D + 1):
        cur = GlobularSet(d, [list(cells[k]) for k in range(d + 1)],
                          [dict(src[k]) for k in range(d + 1)],
                          [dict(tgt[k]) for k in range(d + 1)])
        for nu in Y.cells_at(d):
            if not keep(nu):
                continue
            for (a, b) in par_over(f2, cur, Y, nu):
                fresh = ("lift", nu, a, b)
                cells[d].append(fresh)
                src[d][fresh] = a
                tgt[d][fresh] = b
                f2[fresh] = nu
                lifts[(nu, (a, b))] = fresh
    X2 = GlobularSet(D, cells, src, tgt)
    return X2, f2, Contraction(f2, X2, Y, lifts)


# ---------------------------------------------------------------------------
# weak cells


@dataclass(frozen=True)
class WeakCell:
    """A cell of the generated weak theory.

    Kinds: "word" (dimension-0 layered expression over the 0-lift
    generators), "ident" (hom identity), "lift" (contraction cell over a
    target cell and a parallel pair), "comp" (composite with a head and
    an argument diagram), "tens" (tensor pair)."""

    kind: str
    hom: tuple
    dim: int
    payload: tuple
    image: tuple = field(repr=False, compare=False)  # (normal form, TreeCell)
    size: int = field(repr=False, default=1, compare=False)
    src: object = field(repr=False, default=None, compare=False)
    tgt: object = field(repr=False, default=None, compare=False)


def _weakcell_hash(self):
    try:
        return self._hash_cache
    except AttributeError:
        h = hash((self.kind, self.hom, self.dim, self.payload))
        object.__setattr__(self, "_hash_cache", h)
        return h


def _weakcell_repr(self):
    try:
        return self._repr_cache
    except AttributeError:
        r = (f"WeakCell(kind={self.kind!r}, hom={self.hom!r}, "
             f"dim={self.dim!r}, payload={self.payload!r})")
        object.__setattr__(self, "_repr_cache", r)
        return r


# hashing and printing recurse through nested cells; cache both so the
# generation loop does not recompute them for every set operation
WeakCell.__hash__ = _weakcell_hash
WeakCell.__repr__ = _weakcell_repr


class _WeakOps:
    """Cell operations for weak cells, for labelling completion."""

    def dim(self, c):
        return c.dim

    def src(self, c):
        return c.src

    def tgt(self, c):
        return c.tgt


def word_size(nf: NormalForm, sig: dict) -> int:
    """Symbol occurrences of a layered word: each layer counts its
    generator plus one per nonempty identity padding block; a pure
    identity counts one."""
    if not nf.layers:
        return 1
    total = 0
    for (o, g), w in zip(nf.layers, nf.widths(sig)):
        a, _ = sig[g]
        total += 1 + (1 if o > 0 else 0) + (1 if w - o - a > 0 else 0)
    return total


def _nf_comp(f: NormalForm, g: NormalForm, sig: dict) -> NormalForm:
    """g after f on layered words."""
    return canonical_nf(NormalForm(f.n_in, f.layers + g.layers), sig)


def _nf_tensor(a: NormalForm, b: NormalForm, sig: dict) -> NormalForm:
    ml = a.n_out(sig)
    layers = a.layers + tuple((o + ml, g) for (o, g) in b.layers)
    return canonical_nf(NormalForm(a.n_in + b.n_in, layers), sig)


def _leaf_gaps(tree) -> list:
    return [(path, g) for (path, g) in gap_positions(tree)
            if not subtree_at(tree, path).children]


def _labellings(C: Collection, sigma: TreeCell) -> list:
    """Valid pasting diagrams of shape sigma over the collection, built
    bottom-up with boundary indexing (equivalent to the brute-force
    enumeration but linear in the number of results)."""
    X = C.glob
    if tree_height(sigma.tree) > min(sigma.dim, X.max_dim):
        return []

    def rec(node, path):
        """(lo, hi, labels) triples for the subtree at path; lo and hi are
        the shared source and target of the node's own gap labels (None at
        the root, where nothing constrains them)."""
        depth = len(path)
        m = len(node.children)
        if m == 0:
            out = []
            for z in X.cells_at(depth):
                lo = X.src_of(z) if depth else None
                hi = X.tgt_of(z) if depth else None
                out.append((lo, hi, {(path, 0): z}))
            return out
        idxs = []
        for j, child in enumerate(node.children):
            idx = {}
            for lo, hi, lab in rec(child, path + (j,)):
                idx.setdefault(lo, []).append((hi, lab))
            idxs.append(idx)
        chains = [([lo, hi], lab)
                  for lo, entries in idxs[0].items() for hi, lab in entries]
        for j in range(1, m):
            nxt = []
            for row, lab in chains:
                for hi, sub in idxs[j].get(row[-1], []):
                    nxt.append((row + [hi], {**lab, **sub}))
            chains = nxt
        out = []
        for row, lab in chains:
            if depth:
                if len({X.src_of(g) for g in row}) != 1:
                    continue
                if len({X.tgt_of(g) for g in row}) != 1:
                    continue
                lo, hi = X.src_of(row[0]), X.tgt_of(row[0])
            else:
                lo = hi = None
            full = dict(lab)
            for j, g in enumerate(row):
                full[(path, j)] = g
            out.append((lo, hi, full))
        return out

    return [PastingDiagram.make(sigma.tree, sigma.dim, lab)
            for _, _, lab in rec(sigma.tree, ())]


def cell_key(c: WeakCell):
    order = {"word": 0, "ident": 1, "lift": 2, "comp": 3, "tens": 4}
    return (c.dim, c.hom, order[c.kind], repr(c))


class WeakTheory:
    """Generation state: the globularized target theory, the 0-lift
    generator signature, and the cell sets per hom type and dimension."""

    def __init__(self, pres, D: int, bounds: dict):
        self.pres = pres
        self.D = D
        self.bounds = dict(bounds)
        self.hom_bound = bounds.get("hom_bound", 3)
        self.max_size = bounds.get("max_expr_size", 4)
        self.max_nodes = bounds.get("max_tree_nodes", 2)
        # expression-node limit for the generator enumeration; 1 means
        # just the presented generators and identities
        self.p_enum = bounds.get("p_enum", 1)
        self.P = NormalizedPro(pres, enum_size=max(2 * self.hom_bound - 1,
                                                   self.p_enum, 1))
        self.GP = GlobularizedPro(self.P, D)
        self.psig = pres.sig()
        # 0-lift generators: one per enumerated morphism within bounds
        self.sig0 = {}
        self.gen_phi = {}
        for n in range(self.hom_bound + 1):
            for m in range(self.hom_bound + 1):
                for phi in self.P.enumerate_hom(n, m, self.p_enum):
                    if len(phi.layers) > self.hom_bound:
                        continue
                    name = expr_to_str(nf_to_expr(phi, self.psig))
                    self.sig0[name] = (n, m)
                    self.gen_phi[name] = phi
        self.cells = {}
        for n in range(self.hom_bound + 1):
            for m in range(self.hom_bound + 1):
                self.cells[(n, m)] = [set() for _ in range(D + 1)]
        self.contraction = {}
        self._word_cache = {}
        self._done_comp = set()
        self._done_tens = set()

    # -- cell constructors (normalizing) -----------------------------------

    def word(self, nf: NormalForm) -> WeakCell:
        nf = canonical_nf(nf, self.sig0)
        if nf not in self._word_cache:
            hom = (nf.n_in, nf.n_out(self.sig0))
            phi = eval_expr(nf_to_expr(nf, self.sig0), self.P,
                            self.gen_phi, self.sig0)
            self._word_cache[nf] = WeakCell(
                "word", hom, 0, (nf,), (phi, TreeCell(LEAF, 0)),
                word_size(nf, self.sig0))
        return self._word_cache[nf]

    def lift0(self, name: str) -> WeakCell:
        return self.word(NormalForm(self.sig0[name][0], ((0, name),)))

    def ident(self, n: int, d: int) -> WeakCell:
        if d == 0:
            return self.word(NormalForm(n, ()))
        below = self.ident(n, d - 1)
        return WeakCell("ident", (n, n), d, (n,),
                        (self.P.id(n), TreeCell(chain_tree(d), d)), 1,
                        below, below)

    def _is_ident(self, c: WeakCell) -> bool:
        if c.kind == "ident":
            return True
        return c.kind == "word" and not c.payload[0].layers

    def lift(self, nu: tuple, lo: WeakCell, hi: WeakCell) -> WeakCell:
        phi, sigma = nu
        tau = sigma.boundary()
        if lo.image != (phi, tau) or hi.image != (phi, tau):
            raise ValueError("lift pair does not sit over the boundary")
        if lo.hom != hi.hom or lo.src != hi.src or lo.tgt != hi.tgt:
            raise ValueError("lift pair is not parallel")
        return WeakCell("lift", lo.hom, sigma.dim, (nu, lo, hi), nu,
                        1 + max(lo.size, hi.size), lo, hi)

    def comp(self, head: WeakCell, args: PastingDiagram) -> WeakCell:
        """Composition along the head's arity scheme.  Absorbs identity
        heads and identity argument diagrams, flattens composite heads."""
        d = head.dim
        sigma = head.image[1]
        if args.shape() != sigma:
            raise ValueError("argument diagram does not match the head")
        gaps = list(gap_positions(sigma.tree))
        if self._is_ident(head):
            return args.label((0,) * d, 0)
        if all(self._is_ident(args.label(*p)) for p in gaps):
            return head
        if d == 0:
            f = args.label((), 0)
            return self.word(_nf_comp(f.payload[0], head.payload[0],
                                      self.sig0))
        if head.kind == "comp":
            h2, args2 = head.payload
            sigma2 = h2.image[1]
            trees = {p: args2.label(*p).image[1]
                     for p in gap_positions(sigma2.tree)}
            _, pieces = inner_pieces(sigma2, trees, args)
            leaf = {p: self.comp(args2.label(*p), pieces[p])
                    for p in pieces}
            labels = complete_labelling(sigma2.tree, leaf, _WeakOps())
            return self.comp(h2, PastingDiagram.make(sigma2.tree, d,
                                                     labels))
        n = args.label(*gaps[0]).hom[0]
        image = self.GP.compose(n, head.hom[0], head.hom[1], head.image,
                                args.relabel(lambda pos, c: c.image))
        size = head.size + sum(args.label(*p).size
                               for p in _leaf_gaps(sigma.tree))
        bsrc = self.comp(head.src, pd_boundary(args, "source"))
        btgt = self.comp(head.tgt, pd_boundary(args, "target"))
        return WeakCell("comp", (n, head.hom[1]), d, (head, args), image,
                        size, bsrc, btgt)

    def tens(self, a: WeakCell, b: WeakCell) -> WeakCell:
        """Tensor of equal-scheme cells.  Absorbs the empty-type unit,
        right-flattens, merges identities, and pushes the tensor under
        composites of matching shape."""
        if a.image[1] != b.image[1]:
            raise ValueError("tensor needs equal schemes")
        if b.hom == (0, 0) and self._is_ident(b):
            return a
        if a.hom == (0, 0) and self._is_ident(a):
            return b
        if a.dim == 0:
            return self.word(_nf_tensor(a.payload[0], b.payload[0],
                                        self.sig0))
        if a.kind == "ident" and b.kind == "ident":
            return self.ident(a.hom[0] + b.hom[0], a.dim)
        if a.kind == "tens":
            a1, a2 = a.payload
            return self.tens(a1, self.tens(a2, b))
        if (a.kind == "comp" and b.kind == "comp"
                and a.payload[0].image[1] == b.payload[0].image[1]
                and a.payload[1].tree == b.payload[1].tree
                and all(a.payload[1].label(*p).image[1]
                        == b.payload[1].label(*p).image[1]
                        for p in gap_positions(a.payload[1].tree))):
            ha, pa = a.payload
            hb, pb = b.payload
            both = pa.relabel(lambda pos, c: self.tens(c, pb.label(*pos)))
            return self.comp(self.tens(ha, hb), both)
        hom = (a.hom[0] + b.hom[0], a.hom[1] + b.hom[1])
        image = self.GP.tensor(a.hom[0], a.hom[1], b.hom[0], b.hom[1],
                               a.image, b.image)
        return WeakCell("tens", hom, a.dim, (a, b), image,
                        a.size + b.size, self.tens(a.src, b.src),
                        self.tens(a.tgt, b.tgt))

    # -- state -------------------------------------------------------------

    def all_cells(self, d: int) -> list:
        out = []
        for key in sorted(self.cells):
            out.extend(self.cells[key][d])
        return sorted(out, key=cell_key)

    def add(self, c: WeakCell) -> bool:
        bucket = self.cells[c.hom][c.dim]
        if c in bucket:
            return False
        bucket.add(c)
        return True

    def has(self, c: WeakCell) -> bool:
        return c in self.cells[c.hom][c.dim]

    def hom_collection(self, hom: tuple, d: int) -> Collection:
        """The current weak cells of one hom type as a collection, for
        diagram enumeration."""
        cells = [sorted(self.cells[hom][k], key=cell_key)
                 for k in range(d + 1)]
        src = [{c: c.src for c in cells[k]} for k in range(d + 1)]
        tgt = [{c: c.tgt for c in cells[k]} for k in range(d + 1)]
        arity = {c: c.image[1] for k in range(d + 1) for c in cells[k]}
        return Collection(GlobularSet(d, cells, src, tgt), arity)


def weaken_init(pres, D: int, bounds: dict) -> WeakTheory:
    return WeakTheory(pres, D, bounds)


def weaken_lift(W: WeakTheory, d: int, rng=None) -> bool:
    """Adjoin contraction lifts at dimension d; returns whether anything
    new appeared.  At dimension 0 this adjoins one generator per
    enumerated morphism of the target theory."""
    changed = False
    if d == 0:
        names = sorted(W.sig0)
        if rng:
            rng.shuffle(names)
        for name in names:
            c = W.lift0(name)
            if c.size <= W.max_size:
                changed |= W.add(c)
        return changed
    for hom in sorted(W.cells):
        lower = sorted(W.cells[hom][d - 1], key=cell_key)
        if rng:
            rng.shuffle(lower)
        for lo in lower:
            for hi in lower:
                if lo.image != hi.image:
                    continue
                if lo.src != hi.src or lo.tgt != hi.tgt:
                    continue
                if 1 + max(lo.size, hi.size) > W.max_size:
                    continue
                phi, tau = lo.image
                for t in enumerate_trees(d, W.max_nodes):
                    sigma = TreeCell(t, d)
                    if sigma.boundary() != tau:
                        continue
                    c = W.lift((phi, sigma), lo, hi)
                    if W.add(c):
                        W.contraction[((phi, sigma), (lo, hi))] = c
                        changed = True
    return changed


def _close_words(W: WeakTheory, rng=None) -> bool:
    """Close dimension 0 by extending canonical words one layer at a
    time.  Every composite or tensor of existing words is reachable this
    way, because each padded single-generator stage is itself a tensor of
    a generator and identities, and sizes grow monotonically with
    layers."""
    changed = False
    frontier = []
    for n in range(W.hom_bound + 1):
        c = W.ident(n, 0)
        changed |= W.add(c)
        frontier.append(c)
    frontier.extend(c for hom in sorted(W.cells)
                    for c in sorted(W.cells[hom][0], key=cell_key))
    seen = set(frontier)
    while frontier:
        if rng:
            rng.shuffle(frontier)
        new = []
        for w in frontier:
            m = w.hom[1]
            for g in sorted(W.sig0):
                a, c_out = W.sig0[g]
                if a > m or m - a + c_out > W.hom_bound:
                    continue
                for o in range(m - a + 1):
                    nf = w.payload[0]
                    c = W.word(NormalForm(nf.n_in, nf.layers + ((o, g),)))
                    if c.size > W.max_size or c in seen:
                        continue
                    seen.add(c)
                    if W.add(c):
                        changed = True
                    new.append(c)
        frontier = new
    return changed


def weaken_close(W: WeakTheory, d: int, rng=None) -> bool:
    """Close dimension d under identities, composition and tensor within
    the size bound; returns whether anything new appeared.

    A composite in budget can still have a boundary whose canonical word
    is out of budget; such composites are dropped so the result stays
    closed under boundaries (the lower dimension is already at its
    fixpoint, so an in-budget boundary is already present)."""
    if d == 0:
        return _close_words(W, rng)
    changed = False
    for n in range(W.hom_bound + 1):
        changed |= W.add(W.ident(n, d))
    while True:
        found = []
        pool = W.all_cells(d)
        if rng:
            rng.shuffle(pool)
        colls = {hom: W.hom_collection(hom, d) for hom in sorted(W.cells)}
        ann_cache = {}

        def annotated(n, n_mid, sigma):
            """Labellings with their non-identity leaf count and leaf size
            sum.  All-identity labellings reproduce the head and are
            dropped; every non-identity argument adds at least one symbol
            to any composite."""
            key = (n, n_mid, sigma)
            if key not in ann_cache:
                leaves = _leaf_gaps(sigma.tree)
                out = []
                for args in _labellings(colls[(n, n_mid)], sigma):
                    lm = args.label_map()
                    labels = [lm[p] for p in leaves]
                    nonident = sum(1 for z in labels
                                   if not W._is_ident(z))
                    if nonident == 0:
                        continue
                    out.append((args, nonident,
                                sum(z.size for z in labels)))
                ann_cache[key] = out
            return ann_cache[key]

        for head in pool:
            if W._is_ident(head):
                continue
            budget = W.max_size - head.size
            if budget < 1:
                continue
            n_mid = head.hom[0]
            sigma = head.image[1]
            exact = head.kind != "comp"
            for n in range(W.hom_bound + 1):
                for args, nonident, leafsum in annotated(n, n_mid, sigma):
                    if nonident > budget:
                        continue
                    if exact and leafsum > budget:
                        continue
                    key = (head, args)
                    if key in W._done_comp:
                        continue
                    W._done_comp.add(key)
                    c = W.comp(head, args)
                    if (c.size <= W.max_size and not W.has(c)
                            and W.has(c.src) and W.has(c.tgt)):
                        found.append(c)
        by_scheme = {}
        for c in pool:
            by_scheme.setdefault(c.image[1], []).append(c)
        for group in by_scheme.values():
            for a in group:
                for b in group:
                    if a.size + b.size > W.max_size:
                        continue
                    if a.hom[0] + b.hom[0] > W.hom_bound:
                        continue
                    if a.hom[1] + b.hom[1] > W.hom_bound:
                        continue
                    if (a, b) in W._done_tens:
                        continue
                    W._done_tens.add((a, b))
                    c = W.tens(a, b)
                    if (c.size <= W.max_size and not W.has(c)
                            and W.has(c.src) and W.has(c.tgt)):
                        found.append(c)
        new = False
        for c in found:
            new |= W.add(c)
        changed |= new
        if not new:
            return changed


def weaken_generate(pres, D: int, bounds: dict, seed=None) -> WeakTheory:
    """The bounded weakening loop: per dimension, alternate lifting and
    closing until a fixpoint.  A seed shuffles the work order only; the
    resulting theory is identical."""
    W = weaken_init(pres, D, bounds)
    rng = random.Random(seed) if seed is not None else None
    for d in range(D + 1):
        while True:
            a = weaken_lift(W, d, rng)
            b = weaken_close(W, d, rng)
            if not (a or b):
                break
    return W


def weak_validate(W: WeakTheory) -> list:
    """Recompute every generated cell's image and boundary data and
    compare with the cached values: the image must be a homomorphic
    evaluation, boundaries must be parallel with the boundary image, and
    every lift must satisfy the contraction equations."""
    report = []
    for d in range(W.D + 1):
        for c in W.all_cells(d):
            phi, sigma = c.image
            if sigma.dim != d:
                report.append(f"{c!r}: image scheme dimension mismatch")
            if d >= 1:
                for side in (c.src, c.tgt):
                    if not W.has(side):
                        report.append(f"{c!r}: boundary not in the theory")
                    if side.hom != c.hom or side.dim != d - 1:
                        report.append(f"{c!r}: boundary off its hom type")
                    if side.image != (phi, sigma.boundary()):
                        report.append(f"{c!r}: boundary image mismatch")
                if d >= 2 and (c.src.src != c.tgt.src
                               or c.src.tgt != c.tgt.tgt):
                    report.append(f"{c!r}: boundaries not parallel")
            if c.kind == "word":
                again = eval_expr(nf_to_expr(c.payload[0], W.sig0), W.P,
                                  W.gen_phi, W.sig0)
                if again != phi:
                    report.append(f"{c!r}: word image not homomorphic")
            elif c.kind == "lift":
                nu, lo, hi = c.payload
                if c.image != nu or c.src != lo or c.tgt != hi:
                    report.append(f"{c!r}: contraction equations fail")
            elif c.kind == "comp":
                head, args = c.payload
                again = W.GP.compose(c.hom[0], head.hom[0], head.hom[1],
                                     head.image,
                                     args.relabel(lambda p, z: z.image))
                if again != c.image:
                    report.append(f"{c!r}: composite image not homomorphic")
            elif c.kind == "tens":
                a, b = c.payload
                again = W.GP.tensor(a.hom[0], a.hom[1], b.hom[0], b.hom[1],
                                    a.image, b.image)
                if again != c.image:
                    report.append(f"{c!r}: tensor image not homomorphic")
    for ((nu, pair), k) in W.contraction.items():
        if k.src != pair[0] or k.tgt != pair[1] or k.image != nu:
            report.append(f"lift table entry over {nu!r} inconsistent")
    return report


def find_parallel_mediators(W: WeakTheory, n: int, m: int, d: int) -> list:
    """All parallel equal-image (d-1)-cell pairs of one hom type,
    together with the d-cells mediating each pair."""
    out = []
    lower = sorted(W.cells[(n, m)][d - 1], key=cell_key)
    upper = sorted(W.cells[(n, m)][d], key=cell_key)
    for lo in lower:
        for hi in lower:
            if lo.image != hi.image or lo.src != hi.src or lo.tgt != hi.tgt:
                continue
            meds = [c for c in upper if c.src == lo and c.tgt == hi]
            out.append(((lo, hi), meds))
    return out


# ---------------------------------------------------------------------------
# canonical output


def _cell_ids(W: WeakTheory) -> dict:
    cells = []
    for d in range(W.D + 1):
        cells.extend(W.all_cells(d))
    return {c: f"c{i:04d}" for i, c in enumerate(cells)}


def _children(c: WeakCell, ids: dict) -> list:
    if c.kind == "word":
        return [f"({o} {g})" for (o, g) in c.payload[0].layers]
    if c.kind == "ident":
        return []
    if c.kind == "lift":
        return [ids[c.payload[1]], ids[c.payload[2]]]
    if c.kind == "comp":
        head, args = c.payload
        return [ids[head]] + [ids[args.label(*p)]
                              for p in _leaf_gaps(args.tree)]
    a, b = c.payload
    return [ids[a], ids[b]]


def theory_to_dict(W: WeakTheory) -> dict:
    ids = _cell_ids(W)
    cells = []
    for c, cid in ids.items():
        phi, tree = c.image
        cells.append({
            "id": cid,
            "homType": list(c.hom),
            "dim": c.dim,
            "kind": c.kind,
            "children": _children(c, ids),
            "image": {"p": expr_to_str(nf_to_expr(phi, W.psig)),
                      "tree": tree_to_str(tree.tree)},
            "src": ids[c.src] if c.dim >= 1 else None,
            "tgt": ids[c.tgt] if c.dim >= 1 else None,
        })
    contraction = []
    for ((phi, sigma), (lo, hi)), k in sorted(W.contraction.items(),
                                              key=repr):
        contraction.append({
            "nu": {"p": expr_to_str(nf_to_expr(phi, W.psig)),
                   "tree": tree_to_str(sigma.tree)},
            "pair": [ids[lo], ids[hi]],
            "lift": ids[k],
        })
    return {
        "bounds": {"maxDim": W.D, "maxTreeNodes": W.max_nodes,
                   "maxExprSize": W.max_size, "homBound": W.hom_bound},
        "cells": cells,
        "contraction": contraction,
    }


def theory_to_json(W: WeakTheory) -> str:
    return json.dumps(theory_to_dict(W), sort_keys=True,
                      separators=(",", ":"))


def theory_to_dot(W: WeakTheory) -> str:
    """The fragment of dimension at most 2 as a graph: cells are nodes,
    positive-dimensional cells also draw an edge from source to target."""
    ids = _cell_ids(W)
    lines = ["digraph weak {"]
    for c, cid in ids.items():
        if c.dim > 2:
            continue
        lines.append(f'  "{cid}" [label="{cid}:{c.kind}{c.hom}"];')
    for c, cid in ids.items():
        if c.dim == 0 or c.dim > 2:
            continue
        style = "solid" if c.dim == 1 else "dashed"
        lines.append(f'  "{ids[c.src]}" -> "{ids[c.tgt]}"'
                     f' [label="{cid}", style={style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
