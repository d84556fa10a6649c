import json

import pytest

from weakcat.globset import GlobularSet
from weakcat.pros import NormalForm, monoid_presentation
from weakcat.weaken import (Contraction, check_contraction, find_parallel_mediators,
                            free_contraction, is_leinster_fibration, par_over,
                            theory_to_dict, theory_to_dot, theory_to_json,
                            weak_validate, weaken_close, weaken_generate,
                            weaken_init, weaken_lift, word_size)

SMALL_BOUNDS = {"hom_bound": 2, "max_expr_size": 3,
                "max_tree_nodes": 2, "p_enum": 1}


def endo_loop():
    # one 0-cell with a single 1-loop on it
    return GlobularSet(1, [["y"], ["l"]], [{}, {"l": "y"}], [{}, {"l": "y"}])


def single_arrow():
    return GlobularSet(1, [["a", "b"], ["g"]],
                       [{}, {"g": "a"}], [{}, {"g": "b"}])


@pytest.fixture(scope="module")
def small_theory():
    return weaken_generate(monoid_presentation(), 1, SMALL_BOUNDS)


# ---------------------------------------------------------------------------
# contraction structures on globular maps


def test_par_over_rejects_dimension_zero():
    Y = single_arrow()
    with pytest.raises(ValueError):
        par_over({}, Y, Y, "a")


def test_par_over_single_arrow():
    Y = single_arrow()
    X = GlobularSet(0, [["p", "q", "r"]], [{}], [{}])
    f = {"p": "a", "q": "b", "r": "a"}
    assert sorted(par_over(f, X, Y, "g")) == [("p", "q"), ("r", "q")]


def test_par_over_requires_parallel_at_higher_dims():
    # two 1-cells over the loop with different endpoints are not parallel
    Y = GlobularSet(2, [["y"], ["l"], ["w"]],
                    [{}, {"l": "y"}, {"w": "l"}],
                    [{}, {"l": "y"}, {"w": "l"}])
    X = GlobularSet(1, [["u", "v"], ["s", "t"]],
                    [{}, {"s": "u", "t": "u"}],
                    [{}, {"s": "u", "t": "v"}])
    f = {"u": "y", "v": "y", "s": "l", "t": "l"}
    assert par_over(f, X, Y, "w") == [("s", "s"), ("t", "t")]


def test_free_contraction_endo_loop_totals():
    Y = endo_loop()
    X0 = GlobularSet(0, [["x"]], [{}], [{}])
    X2, f2, C = free_contraction({"x": "y"}, X0, Y, 1)
    assert [len(X2.cells_at(d)) for d in range(2)] == [1, 1]
    assert check_contraction(C) == []
    assert is_leinster_fibration(f2, X2, Y) == (True, None)


def test_free_contraction_single_arrow_from_empty():
    Y = single_arrow()
    X2, f2, C = free_contraction({}, GlobularSet(0, [[]], [{}], [{}]), Y, 1)
    assert [len(X2.cells_at(d)) for d in range(2)] == [2, 1]
    (arrow,) = X2.cells_at(1)
    assert f2[arrow] == "g"
    assert f2[X2.src_of(arrow)] == "a" and f2[X2.tgt_of(arrow)] == "b"
    assert check_contraction(C) == []


def test_free_contraction_no_dedup_across_pairs():
    # two 0-cells over each endpoint give four parallel pairs, hence
    # four distinct lifts; none are shared
    Y = single_arrow()
    X0 = GlobularSet(0, [["p1", "p2", "q1", "q2"]], [{}], [{}])
    f = {"p1": "a", "p2": "a", "q1": "b", "q2": "b"}
    X2, f2, C = free_contraction(f, X0, Y, 1)
    assert len(X2.cells_at(1)) == 4
    assert len(C.lifts) == 4
    assert check_contraction(C) == []


def test_fibration_witness_when_lift_missing():
    Y = single_arrow()
    X = GlobularSet(1, [["p", "q"], []], [{}, {}], [{}, {}])
    verdict, witness = is_leinster_fibration({"p": "a", "q": "b"}, X, Y)
    assert verdict is False
    assert witness == ("g", ("p", "q"))


def test_check_contraction_flags_broken_boundary():
    Y = endo_loop()
    X0 = GlobularSet(0, [["x"]], [{}], [{}])
    X2, f2, C = free_contraction({"x": "y"}, X0, Y, 1)
    (k,) = X2.cells_at(1)
    bad = Contraction(f2, X2, Y, {("l", ("x", "wrong")): k})
    report = check_contraction(bad)
    assert any("wrong boundary" in line for line in report)
    assert any("missing lift" in line for line in report)


# ---------------------------------------------------------------------------
# expression size and the cell constructors


def test_word_size_counts_layers_and_padding(small_theory):
    W = small_theory
    sig = W.sig0
    assert word_size(NormalForm(1, ()), sig) == 1
    assert word_size(NormalForm(2, ((0, "m"),)), sig) == 1
    assert word_size(NormalForm(3, ((0, "m"), (0, "m"))), sig) == 3
    assert word_size(NormalForm(3, ((1, "m"), (0, "m"))), sig) == 3
    assert word_size(NormalForm(1, ((0, "e"), (0, "m"))), sig) == 3


def test_lift_size_is_one_plus_larger_side(headline_theory):
    W = headline_theory
    w1 = W.word(NormalForm(3, ((0, "m"), (0, "m"))))
    w2 = W.word(NormalForm(3, ((1, "m"), (0, "m"))))
    assert w1.image == w2.image
    ((lo, hi), meds) = next(
        p for p in find_parallel_mediators(W, 3, 1, 1)
        if p[0] == (w1, w2))
    assert meds and all(c.size == 4 for c in meds if c.kind == "lift")


def test_lift_rebuilds_recorded_cells_and_rejects_mismatches(small_theory):
    W = small_theory
    (nu, (lo, hi)), c, other = next(
        (key, cell, w)
        for key, cell in sorted(W.contraction.items(), key=repr)
        for w in W.all_cells(0)
        if w.hom == key[1][0].hom and w.image != key[1][0].image)
    assert W.lift(nu, lo, hi) == c
    with pytest.raises(ValueError):
        W.lift(nu, lo, other)


# ---------------------------------------------------------------------------
# the generation loop


def test_generation_reaches_a_fixpoint(small_theory):
    W = small_theory
    for d in range(2):
        assert weaken_lift(W, d) is False
        assert weaken_close(W, d) is False


def test_generated_cells_validate(small_theory):
    assert weak_validate(small_theory) == []


def test_small_run_counts(small_theory):
    W = small_theory
    totals = [sum(len(W.cells[h][d]) for h in W.cells) for d in range(2)]
    assert totals == [50, 345]
    assert len(W.contraction) == 294


def test_every_recorded_lift_satisfies_its_equations(small_theory):
    W = small_theory
    for (nu, (lo, hi)), c in W.contraction.items():
        assert c.kind == "lift"
        assert c.src == lo and c.tgt == hi and c.image == nu


def test_shuffled_order_gives_identical_output():
    plain = weaken_generate(monoid_presentation(), 1, SMALL_BOUNDS)
    shuffled = weaken_generate(monoid_presentation(), 1, SMALL_BOUNDS, seed=7)
    assert theory_to_json(plain) == theory_to_json(shuffled)


def test_bounds_are_respected(small_theory):
    W = small_theory
    for d in range(2):
        for c in W.all_cells(d):
            assert c.size <= 3
            assert c.hom[0] <= 2 and c.hom[1] <= 2


# ---------------------------------------------------------------------------
# the headline run: monoid theory one dimension up


def test_headline_counts(headline_theory):
    W = headline_theory
    totals = [sum(len(W.cells[h][d]) for h in W.cells) for d in range(2)]
    assert totals == [250, 4634]
    assert len(W.contraction) == 3111


def test_headline_validates(headline_theory):
    assert weak_validate(headline_theory) == []


def test_associator_mediators(headline_theory):
    W = headline_theory
    w1 = W.word(NormalForm(3, ((0, "m"), (0, "m"))))
    w2 = W.word(NormalForm(3, ((1, "m"), (0, "m"))))
    assert W.has(w1) and W.has(w2)
    assert w1 != w2 and w1.image == w2.image
    pairs = dict(find_parallel_mediators(W, 3, 1, 1))
    assert len(pairs[(w1, w2)]) >= 1
    assert len(pairs[(w2, w1)]) >= 1


def test_unitor_mediators(headline_theory):
    W = headline_theory
    u1 = W.word(NormalForm(1, ((0, "e"), (0, "m"))))
    u2 = W.word(NormalForm(1, ((0, "(id 1)"),)))
    assert W.has(u1) and W.has(u2)
    assert u1.image == u2.image
    pairs = dict(find_parallel_mediators(W, 1, 1, 1))
    assert len(pairs[(u1, u2)]) >= 1


def test_no_mediators_across_distinct_images(headline_theory):
    W = headline_theory
    w1 = W.word(NormalForm(3, ((0, "m"), (0, "m"))))
    other = W.word(NormalForm(3, ((0, "(id 3)"),)))
    assert w1.image != other.image
    upper = W.cells[(3, 1)][1]
    assert not any(c.src == w1 and c.tgt == other for c in upper)


def test_mediators_are_genuinely_parallel(headline_theory):
    W = headline_theory
    for (lo, hi), meds in find_parallel_mediators(W, 1, 1, 1):
        for c in meds:
            assert c.src == lo and c.tgt == hi
            assert c.image[0] == lo.image[0]


# ---------------------------------------------------------------------------
# serialization


def test_dict_schema_and_id_consistency(small_theory):
    data = theory_to_dict(small_theory)
    assert set(data) == {"bounds", "cells", "contraction"}
    assert data["bounds"] == {"maxDim": 1, "maxTreeNodes": 2,
                              "maxExprSize": 3, "homBound": 2}
    ids = {c["id"] for c in data["cells"]}
    assert len(ids) == len(data["cells"])
    for c in data["cells"]:
        assert set(c) == {"id", "homType", "dim", "kind", "children",
                          "image", "src", "tgt"}
        assert set(c["image"]) == {"p", "tree"}
        if c["dim"] >= 1:
            assert c["src"] in ids and c["tgt"] in ids
    for entry in data["contraction"]:
        assert entry["lift"] in ids
        assert all(p in ids for p in entry["pair"])


def test_json_is_canonical(small_theory):
    text = theory_to_json(small_theory)
    parsed = json.loads(text)
    assert json.dumps(parsed, sort_keys=True,
                      separators=(",", ":")) == text


def test_dot_export_mentions_only_low_dims(small_theory):
    dot = theory_to_dot(small_theory)
    assert dot.startswith("digraph")
    assert "->" in dot
