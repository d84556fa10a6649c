"""Graded sets, the composition tensor, the internal hom, classical
nonsymmetric operads, the tautological operad and operad algebras.

Elements are opaque hashable ids; tensor elements are (element, word) pairs
with the word length matching the arity.  Operad composition is a partial
table with an explicit arity horizon: composites past it are OUT_OF_RANGE,
never an error (laws quantify over in-range tuples only).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


OUT_OF_RANGE = object()


@dataclass
class GradedSet:
    elements: dict  # element -> arity

    def arity(self, x) -> int:
        return self.elements[x]

    def by_arity(self, n: int) -> list:
        return [x for x, a in self.elements.items() if a == n]


def grd_square(X: GradedSet, Y: GradedSet) -> GradedSet:
    """The composition tensor: pairs (a, word over Y) with len = arity(a)."""
    out = {}
    ys = list(Y.elements)
    for a, n in X.elements.items():
        for w in itertools.product(ys, repeat=n):
            out[(a, w)] = sum(Y.elements[y] for y in w)
    return GradedSet(out)


def grd_unit() -> GradedSet:
    return GradedSet({"*": 1})


def grd_assoc(X: GradedSet, Y: GradedSet, Z: GradedSet) -> dict:
    """The arity-preserving bijection (X sq Y) sq Z -> X sq (Y sq Z)."""
    left = grd_square(grd_square(X, Y), Z)
    out = {}
    for ((a, u), w) in left.elements:
        # split w into chunks sized by the arities of the letters of u
        chunks = []
        i = 0
        for y in u:
            k = Y.elements[y]
            chunks.append(w[i:i + k])
            i += k
        out[((a, u), w)] = (a, tuple(zip(u, chunks)))
    return out


def grd_words(Y: GradedSet, n: int) -> list:
    return list(itertools.product(list(Y.elements), repeat=n))


def grd_internal_hom(B: GradedSet, A: GradedSet, n: int) -> list:
    """The fiber [B,A]_n: all maps from length-n B-words to arity-matched
    A-elements.  Each section is a tuple of (word, value) pairs, sorted."""
    words = grd_words(B, n)
    choice_sets = []
    for w in words:
        total = sum(B.elements[b] for b in w)
        choice_sets.append([p for p, a in A.elements.items() if a == total])
    sections = []
    for combo in itertools.product(*choice_sets):
        sections.append(tuple(sorted(zip(words, combo))))
    return sections


def section_apply(section, word):
    return dict(section)[word]


def grd_maps(X: GradedSet, Y: GradedSet) -> list:
    """All arity-preserving maps X -> Y, each as a dict."""
    xs = list(X.elements)
    choice_sets = [[y for y, a in Y.elements.items() if a == X.elements[x]]
                   for x in xs]
    return [dict(zip(xs, combo)) for combo in itertools.product(*choice_sets)]


def grd_curry(f: dict, X: GradedSet, B: GradedSet) -> dict:
    """Curry an arity-preserving map on X sq B into X -> [B,-] sections."""
    out = {}
    for a, n in X.elements.items():
        out[a] = tuple(sorted((w, f[(a, w)]) for w in grd_words(B, n)))
    return out


def grd_uncurry(g: dict, X: GradedSet, B: GradedSet) -> dict:
    out = {}
    for a, n in X.elements.items():
        for w in grd_words(B, n):
            out[(a, w)] = section_apply(g[a], w)
    return out


@dataclass
class ClassicalOperad:
    carrier: GradedSet
    unit: object
    compose: object = field(repr=False)  # (theta0, tuple of thetas) -> element or OUT_OF_RANGE
    max_arity: int = 0


def taut_operad(X: GradedSet, max_arity: int) -> ClassicalOperad:
    """The endomorphism operad on the fibers [X,X]_n for n <= max_arity."""
    carrier = {}
    for n in range(max_arity + 1):
        for s in grd_internal_hom(X, X, n):
            carrier[(n, s)] = n
    unit = (1, tuple(sorted(((x,), x) for x in X.elements)))

    def compose(theta0, thetas):
        n0, s0 = theta0
        if len(thetas) != n0:
            raise ValueError("compose needs one argument per input slot")
        total = sum(t[0] for t in thetas)
        if total > max_arity:
            return OUT_OF_RANGE
        mapping = []
        for w in grd_words(X, total):
            i = 0
            mids = []
            for (k, s) in thetas:
                mids.append(section_apply(s, w[i:i + k]))
                i += k
            mapping.append((w, section_apply(s0, tuple(mids))))
        return (total, tuple(sorted(mapping)))

    return ClassicalOperad(GradedSet(carrier), unit, compose, max_arity)


def operad_validate(O: ClassicalOperad) -> list:
    """Check the unit and associativity equations on all in-range tuples."""
    report = []
    elems = list(O.carrier.elements)
    ar = O.carrier.elements
    if ar.get(O.unit) != 1:
        report.append("unit does not have arity 1")
        return report
    for th0 in elems:
        for ths in itertools.product(elems, repeat=ar[th0]):
            c = O.compose(th0, ths)
            if c is not OUT_OF_RANGE and ar.get(c) != sum(ar[t] for t in ths):
                report.append(f"composite arity wrong at ({th0!r}, {ths!r})")
    for th in elems:
        left = O.compose(O.unit, (th,))
        if left is not OUT_OF_RANGE and left != th:
            report.append(f"left unit fails at {th!r}")
        right = O.compose(th, tuple(O.unit for _ in range(ar[th])))
        if right is not OUT_OF_RANGE and right != th:
            report.append(f"right unit fails at {th!r}")
    # associativity on all in-range double substitutions
    for th0 in elems:
        for ths in itertools.product(elems, repeat=ar[th0]):
            mid = O.compose(th0, ths)
            if mid is OUT_OF_RANGE:
                continue
            pools = [itertools.product(elems, repeat=ar[t]) for t in ths]
            for pss in itertools.product(*pools):
                inner = [O.compose(t, ps) for t, ps in zip(ths, pss)]
                if any(x is OUT_OF_RANGE for x in inner):
                    continue
                lhs = O.compose(mid, tuple(itertools.chain.from_iterable(pss)))
                rhs = O.compose(th0, tuple(inner))
                if lhs is OUT_OF_RANGE or rhs is OUT_OF_RANGE:
                    continue
                if lhs != rhs:
                    report.append(f"associativity fails at {th0!r}")
    return report


def operad_algebra_check(O: ClassicalOperad, A: list, act) -> list:
    """Check both algebra routes: the action diagrams directly, and that the
    curried map into taut(A) is an operad homomorphism.  The two routes are
    checked jointly; a witness from either is reported."""
    report = []
    ar = O.carrier.elements
    elems = list(ar)
    # unit triangle
    for a in A:
        if act(O.unit, (a,)) != a:
            report.append(f"unit action fails at {a!r}")
    # associativity square on in-range composites
    for th0 in elems:
        for ths in itertools.product(elems, repeat=ar[th0]):
            comp = O.compose(th0, ths)
            if comp is OUT_OF_RANGE:
                continue
            total = sum(ar[t] for t in ths)
            for xs in itertools.product(A, repeat=total):
                i = 0
                mids = []
                for t in ths:
                    mids.append(act(t, xs[i:i + ar[t]]))
                    i += ar[t]
                if act(comp, xs) != act(th0, tuple(mids)):
                    report.append(f"action square fails at ({th0!r}, {ths!r}, {xs!r})")
    # curried route: O -> taut(A) must be a homomorphism
    Aset = GradedSet({a: 0 for a in A})
    tA = taut_operad(Aset, O.max_arity)

    def curried(th):
        n = ar[th]
        return (n, tuple(sorted((w, act(th, w)) for w in grd_words(Aset, n))))

    if curried(O.unit) != tA.unit:
        report.append("curried map does not preserve the unit")
    for th0 in elems:
        for ths in itertools.product(elems, repeat=ar[th0]):
            comp = O.compose(th0, ths)
            if comp is OUT_OF_RANGE:
                continue
            lhs = curried(comp)
            rhs = tA.compose(curried(th0), tuple(curried(t) for t in ths))
            if rhs is not OUT_OF_RANGE and lhs != rhs:
                report.append(f"curried map fails at ({th0!r}, {ths!r})")
    return report
