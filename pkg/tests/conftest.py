"""Shared fixtures and brute-force oracles used across the test suite."""

import itertools

import pytest

from weakcat.globset import GlobularSet
from weakcat.pasting import PastingDiagram, tree_nodes


def brute_labellings(tree, dim, cells_by_dim, ops, limit=None):
    """Independent enumeration of all gap-compatible labellings of a tree.

    cells_by_dim[k] lists the available k-cells; ops provides src/tgt.
    Used as the oracle against library-level labelling enumeration.
    """
    if any(len(path) > dim for path, _ in tree_nodes(tree)):
        return []

    def fill(node, path, depth, s_req, t_req):
        m = len(node.children)
        if depth == 0:
            cands = list(cells_by_dim[0])
        else:
            cands = [c for c in cells_by_dim[depth]
                     if ops.src(c) == s_req and ops.tgt(c) == t_req]
        results = []
        for gaps in itertools.product(cands, repeat=m + 1):
            partial = [{(path, i): gaps[i] for i in range(m + 1)}]
            ok = True
            for j, child in enumerate(node.children):
                subs = fill(child, path + (j,), depth + 1, gaps[j], gaps[j + 1])
                if not subs:
                    ok = False
                    break
                partial = [{**p, **s} for p in partial for s in subs]
                if limit and len(partial) > limit:
                    partial = partial[:limit]
            if ok:
                results.extend(partial)
            if limit and len(results) >= limit:
                return results[:limit]
        return results

    return [PastingDiagram.make(tree, dim, lab)
            for lab in fill(tree, (), 0, None, None)]


@pytest.fixture
def two_gen_glob():
    """One 0-cell, two endo 1-cells, two 2-cells a => b and b => a."""
    return GlobularSet(
        3,
        [["u"], ["a", "b"], ["p", "q"], []],
        [{}, {"a": "u", "b": "u"}, {"p": "a", "q": "b"}, {}],
        [{}, {"a": "u", "b": "u"}, {"p": "b", "q": "a"}, {}],
    )


HEADLINE_BOUNDS = {"hom_bound": 3, "max_expr_size": 4,
                   "max_tree_nodes": 2, "p_enum": 1}


@pytest.fixture(scope="session")
def headline_theory():
    """Monoid theory weakened one dimension up, at the bounds every
    headline count in the suite refers to. Built once per session."""
    from weakcat.pros import monoid_presentation
    from weakcat.weaken import weaken_generate
    return weaken_generate(monoid_presentation(), 1, HEADLINE_BOUNDS)
