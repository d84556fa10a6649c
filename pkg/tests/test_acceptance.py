"""Top-level acceptance gate.

Each test covers one numbered criterion and prints a single pass/fail
line; the assertions make pytest agree with the printed verdict.  The
fine-grained evidence lives in the per-module suites; here every check
is re-run end to end against its independent oracle.
"""

import itertools
import json
import pathlib

import weakcat
from weakcat import cli
from weakcat.coll import (coll_assoc, coll_maps, coll_square,
                          internal_hom_collection, special_collection)
from weakcat.globpro import (GTautPro, globpro_validate, globularize,
                             strict_algebra_check)
from weakcat.globset import GlobularSet
from weakcat.graded import (GradedSet, grd_assoc, grd_internal_hom, grd_maps,
                            grd_square, grd_unit, operad_validate,
                            taut_operad)
from weakcat.pasting import (DiagramOps, GlobOps, enumerate_trees, monad_eta,
                             monad_mu, pd_compose, pd_identity, pd_kboundary,
                             pd_validate, tree_height)
from weakcat.pros import (NormalForm, NormalizedPro, PresentedPro,
                          builtin_monoid_pro, enumerate_expressions,
                          eval_expr, monoid_model_interp, monoid_presentation,
                          pro_algebra_check, pro_normalize_nf)
from weakcat.weaken import (check_contraction, find_parallel_mediators,
                            free_contraction, theory_to_json, weak_validate,
                            weaken_generate)

from conftest import HEADLINE_BOUNDS, brute_labellings
from test_coll import arrow2_coll, endo_coll, z2_collection
from test_globpro import (codiscrete_interp, codiscrete_monoid_strict,
                          two_point_collection)

MONOID = monoid_presentation()
MSIG = MONOID.sig()
THEORIES = pathlib.Path(weakcat.__file__).parent / "theories"
GOLDEN = pathlib.Path(__file__).parent / "golden"


def verdict(num, ok, what):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {what}")
    assert ok, f"criterion {num} failed: {what}"


def three_dim_glob():
    """One 0-cell, two endo 1-cells, two 2-cells between them, and a
    3-cell on one of the 2-cells."""
    return GlobularSet(
        3,
        [["u"], ["a", "b"], ["p", "q"], ["r"]],
        [{}, {"a": "u", "b": "u"}, {"p": "a", "q": "b"}, {"r": "p"}],
        [{}, {"a": "u", "b": "u"}, {"p": "b", "q": "a"}, {"r": "p"}],
    )


def test_criterion_1_pasting_monad_and_strict_laws():
    X = three_dim_glob()
    ops = GlobOps(X)
    dops = DiagramOps()
    ok = True
    checked = 0
    for tree in enumerate_trees(3, 5):
        if tree_height(tree) > 3:
            continue
        for d in brute_labellings(tree, 3, X.cells, ops, limit=4):
            ok &= monad_mu(monad_eta(d, dops)) == d
            blown = d.relabel(lambda pos, v: monad_eta(v, ops))
            ok &= monad_mu(blown) == d
            dd = d.relabel(lambda pos, v: monad_eta(monad_eta(v, ops), dops))
            via_outer = monad_mu(monad_mu(dd))
            via_inner = monad_mu(dd.relabel(lambda pos, v: monad_mu(v)))
            ok &= via_outer == via_inner == d
            checked += 1
    ok &= checked > 0

    pool = []
    for tree in enumerate_trees(2, 2):
        pool += brute_labellings(tree, 2, X.cells, ops, limit=6)
    pairs = {k: [] for k in range(2)}
    for A, B in itertools.product(pool, pool):
        for k in range(2):
            if pd_kboundary(A, "target", k) == pd_kboundary(B, "source", k):
                AB = pd_compose(A, B, k)
                ok &= pd_validate(AB, ops) == []
                pairs[k].append((A, B, AB))
    ok &= all(pairs[k] for k in range(2))
    for A in pool:
        for k in range(2):
            idt = pd_identity(pd_kboundary(A, "target", k), A.dim)
            ids = pd_identity(pd_kboundary(A, "source", k), A.dim)
            ok &= pd_compose(A, idt, k) == A
            ok &= pd_compose(ids, A, k) == A
    assoc = 0
    for k in range(2):
        for (A, B, AB) in pairs[k][:120]:
            for C in pool:
                if pd_kboundary(B, "target", k) != \
                        pd_kboundary(C, "source", k):
                    continue
                ok &= pd_compose(AB, C, k) == \
                    pd_compose(A, pd_compose(B, C, k), k)
                assoc += 1
    ok &= assoc > 0
    inter = 0
    eta = lambda c: monad_eta(c, ops)
    for a1, a2, b1, b2 in itertools.product(["p", "q"], repeat=4):
        if X.tgt_of(a1) != X.src_of(a2) or X.tgt_of(b1) != X.src_of(b2):
            continue
        rows = pd_compose(pd_compose(eta(a1), eta(a2), 1),
                          pd_compose(eta(b1), eta(b2), 1), 0)
        cols = pd_compose(pd_compose(eta(a1), eta(b1), 0),
                          pd_compose(eta(a2), eta(b2), 0), 1)
        ok &= rows == cols
        inter += 1
    ok &= inter > 0
    verdict(1, ok, "pasting monad laws and strict composition laws")


def test_criterion_2_monoidal_coherence():
    ok = True
    X = GradedSet({"a": 2, "b": 0})
    Y = GradedSet({"y1": 1, "y2": 2})
    Z = GradedSet({"z": 1})
    bij = grd_assoc(X, Y, Z)
    left = grd_square(grd_square(X, Y), Z)
    right = grd_square(X, grd_square(Y, Z))
    ok &= set(bij) == set(left.elements)
    ok &= set(bij.values()) == set(right.elements)
    ok &= len(set(bij.values())) == len(bij)
    ok &= all(left.elements[k] == right.elements[v] for k, v in bij.items())
    for G in (X, Y, Z):
        sq = grd_square(G, grd_unit())
        ok &= len(sq.elements) == len(G.elements)
        ok &= all(n == G.elements[a] == len(w)
                  for (a, w), n in sq.elements.items())

    W = GradedSet({"w": 1})
    XY, YZ, ZW = grd_square(X, Y), grd_square(Y, Z), grd_square(Z, W)
    aA = grd_assoc(XY, Z, W)
    aB = grd_assoc(X, Y, ZW)
    short = {k: aB[aA[k]] for k in aA}
    aXYZ = grd_assoc(X, Y, Z)
    aMID = grd_assoc(X, YZ, W)
    aYZW = grd_assoc(Y, Z, W)
    long = {}
    for (p, w) in aA:
        (a, u) = aMID[(aXYZ[p], w)]
        long[(p, w)] = (a, tuple(aYZW[letter] for letter in u))
    ok &= short == long

    cX, cY, cZ = arrow2_coll(), endo_coll(), endo_coll(2)
    cbij = coll_assoc(cX, cY, cZ)
    cleft = coll_square(coll_square(cX, cY), cZ)
    cright = coll_square(cX, coll_square(cY, cZ))
    lcells = {c for d in range(2) for c in cleft.glob.cells_at(d)}
    rcells = {c for d in range(2) for c in cright.glob.cells_at(d)}
    ok &= set(cbij) == lcells and set(cbij.values()) == rcells
    ok &= len(set(cbij.values())) == len(cbij)
    ok &= all(cleft.arity[k] == cright.arity[v] for k, v in cbij.items())
    I = special_collection("unit", 1)
    for C in (cX, cY, cZ):
        want = sorted(t.key() for t in C.arity.values())
        ok &= sorted(t.key() for t in
                     coll_square(C, I).arity.values()) == want
        ok &= sorted(t.key() for t in
                     coll_square(I, C).arity.values()) == want
    verdict(2, ok, "associator/unitor bijections and the pentagon")


def test_criterion_3_hom_tensor_adjunction():
    ok = True
    fixtures = [
        GradedSet({"a": 1}),
        GradedSet({"a": 2, "b": 0}),
        GradedSet({"a": 1, "b": 1, "c": 2}),
    ]
    for X, B, Y in itertools.product(fixtures, repeat=3):
        lhs = len(grd_maps(grd_square(X, B), Y))
        rhs = 1
        for a, n in X.elements.items():
            rhs *= len(grd_internal_hom(B, Y, n))
        ok &= lhs == rhs
    colls = [endo_coll(), endo_coll(2), arrow2_coll()]
    for X, B, Y in itertools.product(colls, repeat=3):
        lhs = len(coll_maps(coll_square(X, B), Y))
        H = internal_hom_collection(B, Y, list(X.arity.values()))
        rhs = len(coll_maps(X, H))
        ok &= lhs == rhs
    verdict(3, ok, "|Hom(X square B, Y)| = |Hom(X, [B, Y])| exactly")


def test_criterion_4_tautological_structures():
    ok = True
    for X in (GradedSet({"a": 0}), GradedSet({"a": 1}), GradedSet({"a": 2}),
              GradedSet({"a": 0, "b": 2}), GradedSet({"a": 1, "b": 1})):
        ok &= operad_validate(taut_operad(X, 2)) == []
    for A in (z2_collection(), two_point_collection()):
        T = GTautPro(A, max_nodes=2)
        ok &= globpro_validate(T, {"max_obj": 1, "max_dim": 1,
                                   "max_tree_nodes": 2,
                                   "max_samples": 150}) == []
    verdict(4, ok, "tautological operad and tautological globular PRO")


def test_criterion_5_normal_form_vs_model():
    interp = monoid_model_interp()
    model = builtin_monoid_pro()
    ok = True
    seen = {}
    for e, n, m in enumerate_expressions(MONOID, 6, max_id=2):
        nf, status = pro_normalize_nf(MONOID, e, 64)
        ok &= status == "normal"
        val = eval_expr(e, model, interp, MSIG)
        key = (n, m, nf)
        if key in seen:
            ok &= seen[key] == val
        else:
            seen[key] = val
    by_type = {}
    for (n, m, nf), val in seen.items():
        by_type.setdefault((n, m), []).append(val)
    for vals in by_type.values():
        ok &= len(set(vals)) == len(vals)
    ok &= len(seen) > 0
    verdict(5, ok, "normal-form equality matches the monotone-map model")


def test_criterion_6_strict_algebra_correspondence():
    GP = globularize(NormalizedPro(MONOID), 1)
    A = codiscrete_monoid_strict()
    interp = codiscrete_interp()
    report = strict_algebra_check(GP, A, interp,
                                  {"max_obj": 2, "max_tree_nodes": 3,
                                   "max_samples": 60})
    ok = report == []
    for d in range(2):
        cells_d = list(A.glob.cells_at(d))
        interp_d = {g: (lambda xs, g=g, d=d: interp[g](tuple(xs), d))
                    for g in MSIG}
        ok &= pro_algebra_check(PresentedPro(MONOID, fuel=64), cells_d,
                                interp_d, sample_fuel=3) == []
    verdict(6, ok, "strict monoid-in-categories example and its restriction")


def test_criterion_7_contraction_counts_and_equations():
    ok = True
    Y1 = GlobularSet(1, [["y"], ["l"]], [{}, {"l": "y"}], [{}, {"l": "y"}])
    X0 = GlobularSet(0, [["x"]], [{}], [{}])
    X2, f2, C = free_contraction({"x": "y"}, X0, Y1, 1)
    ok &= [len(X2.cells_at(d)) for d in range(2)] == [1, 1]
    ok &= check_contraction(C) == []
    Y2 = GlobularSet(1, [["a", "b"], ["g"]],
                     [{}, {"g": "a"}], [{}, {"g": "b"}])
    X3, f3, C3 = free_contraction({}, GlobularSet(0, [[]], [{}], [{}]), Y2, 1)
    ok &= [len(X3.cells_at(d)) for d in range(2)] == [2, 1]
    ok &= check_contraction(C3) == []
    for Xc, fc, Cc in ((X2, f2, C), (X3, f3, C3)):
        for (nu, (a, b)), k in Cc.lifts.items():
            ok &= Xc.src_of(k) == a
            ok &= Xc.tgt_of(k) == b
            ok &= fc[k] == nu
    verdict(7, ok, "free contraction counts and the lift equations")


def test_criterion_8_headline_weakening_run(headline_theory):
    W = headline_theory
    ok = weak_validate(W) == []
    golden = json.loads((GOLDEN / "monoid_weaken_counts.json").read_text())
    counts = {f"{n},{m},{d}": len(W.cells[(n, m)][d])
              for (n, m) in sorted(W.cells) for d in range(2)
              if len(W.cells[(n, m)][d])}
    ok &= counts == golden["cellCounts"]
    ok &= len(W.contraction) == golden["contractionLifts"]
    w1 = W.word(NormalForm(3, ((0, "m"), (0, "m"))))
    w2 = W.word(NormalForm(3, ((1, "m"), (0, "m"))))
    assoc = dict(find_parallel_mediators(W, 3, 1, 1))
    ok &= len(assoc.get((w1, w2), [])) >= 1
    u1 = W.word(NormalForm(1, ((0, "e"), (0, "m"))))
    u2 = W.word(NormalForm(1, ((0, "(id 1)"),)))
    unit = dict(find_parallel_mediators(W, 1, 1, 1))
    ok &= len(unit.get((u1, u2), [])) >= 1
    W2 = weaken_generate(MONOID, 1, HEADLINE_BOUNDS, seed=999)
    ok &= theory_to_json(W) == theory_to_json(W2)
    verdict(8, ok, "associator and unitor mediators, golden counts, "
                   "byte-identical shuffled re-run")


def test_criterion_9_cli_determinism(capsys):
    ok = True
    monoid = str(THEORIES / "monoid.json")
    commands = [
        ["validate", monoid],
        ["globularize", monoid],
        ["hom", monoid, "2", "1", "1"],
        ["weaken", monoid, "--format", "text"],
    ]
    for argv in commands:
        code1 = cli.main(argv)
        out1 = capsys.readouterr().out
        code2 = cli.main(argv)
        out2 = capsys.readouterr().out
        ok &= code1 == code2 == 0
        ok &= out1 == out2 and out1 != ""
    verdict(9, ok, "CLI output is byte-stable across runs")
