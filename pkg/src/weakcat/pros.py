"""Classical PROs: expression syntax, presentations with fuel-bounded
rewriting to a layered normal form, exact built-in models, the tautological
PRO on a finite set, and the algebra checker.

An expression denotes a morphism n -> m in a strict monoidal category with
objects the naturals.  The normal form lists one generator per layer as
(offset, name) pairs, canonically ordered leftmost-first; two expressions
with equal normal forms denote equal morphisms.  Rewriting by user rules is
fuel-bounded, so equality can come back "unknown" but never a wrong
"unequal".
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass


class ProTypeError(ValueError):
    pass


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Id:
    n: int


@dataclass(frozen=True)
class Comp:
    after: object
    before: object


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


def expr_type(e, sig: dict):
    """Return (arity, coarity) of a well-typed expression, or raise."""
    if isinstance(e, Gen):
        if e.name not in sig:
            raise ProTypeError(f"unknown generator {e.name!r}")
        return sig[e.name]
    if isinstance(e, Id):
        if e.n < 0:
            raise ProTypeError("identity width must be a natural")
        return (e.n, e.n)
    if isinstance(e, Comp):
        na, ma = expr_type(e.after, sig)
        nb, mb = expr_type(e.before, sig)
        if mb != na:
            raise ProTypeError(f"composition mismatch: {mb} vs {na}")
        return (nb, ma)
    if isinstance(e, Tensor):
        nl, ml = expr_type(e.left, sig)
        nr, mr = expr_type(e.right, sig)
        return (nl + nr, ml + mr)
    raise ProTypeError(f"not an expression: {e!r}")


def expr_size(e) -> int:
    if isinstance(e, (Gen, Id)):
        return 1
    if isinstance(e, Comp):
        return 1 + expr_size(e.after) + expr_size(e.before)
    return 1 + expr_size(e.left) + expr_size(e.right)


def expr_to_str(e) -> str:
    if isinstance(e, Gen):
        return e.name
    if isinstance(e, Id):
        return f"(id {e.n})"
    if isinstance(e, Comp):
        return f"(comp {expr_to_str(e.after)} {expr_to_str(e.before)})"
    return f"(tensor {expr_to_str(e.left)} {expr_to_str(e.right)})"


def _tokenize(s: str):
    return s.replace("(", " ( ").replace(")", " ) ").split()


def expr_from_str(s: str):
    """Parse an S-expression like "(comp m (tensor e (id 1)))"."""
    tokens = _tokenize(s)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ProTypeError("unexpected end of expression")
        tok = tokens[pos]
        pos += 1
        if tok != "(":
            if tok == ")":
                raise ProTypeError("unexpected ')'")
            return Gen(tok)
        head = tokens[pos]
        pos += 1
        if head == "id":
            arg = tokens[pos]
            pos += 1
            out = Id(int(arg))
        elif head == "comp":
            after = parse()
            before = parse()
            out = Comp(after, before)
        elif head == "tensor":
            left = parse()
            right = parse()
            out = Tensor(left, right)
        else:
            raise ProTypeError(f"unknown head {head!r}")
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ProTypeError("expected ')'")
        pos += 1
        return out

    out = parse()
    if pos != len(tokens):
        raise ProTypeError("trailing tokens")
    return out


@dataclass(frozen=True)
class NormalForm:
    """A morphism as a sequence of single-generator layers.

    Layer (o, g) acts as id(o) tensor g tensor id(rest) on the current
    width.  n_in is the input width; the output width follows from the
    generator types.
    """

    n_in: int
    layers: tuple  # of (offset, name)

    def n_out(self, sig: dict) -> int:
        w = self.n_in
        for _, g in self.layers:
            a, c = sig[g]
            w += c - a
        return w

    def widths(self, sig: dict) -> list:
        """Width before each layer, plus the final width."""
        out = [self.n_in]
        for _, g in self.layers:
            a, c = sig[g]
            out.append(out[-1] + c - a)
        return out


def nf_of_expr(e, sig: dict) -> NormalForm:
    """Structural normalization: flatten to layers, then canonical order."""
    n, _ = expr_type(e, sig)

    def build(x):
        if isinstance(x, Gen):
            return [(0, x.name)]
        if isinstance(x, Id):
            return []
        if isinstance(x, Comp):
            return build(x.before) + build(x.after)
        nl, ml = expr_type(x.left, sig)
        left = build(x.left)
        right = build(x.right)
        return left + [(o + ml, g) for (o, g) in right]

    return canonical_nf(NormalForm(n, tuple(build(e))), sig)


def canonical_nf(nf: NormalForm, sig: dict) -> NormalForm:
    """Bubble commuting layers into leftmost-first order.

    Ties (possible only for generators of equal input and output arity
    sitting at the same offset) break by generator name, so the result is
    canonical and the loop terminates."""
    layers = list(nf.layers)
    changed = True
    while changed:
        changed = False
        for i in range(len(layers) - 1):
            (o1, g1), (o2, g2) = layers[i], layers[i + 1]
            a2, c2 = sig[g2]
            if o2 + a2 <= o1 and (o2 < o1 or c2 != a2 or g2 < g1):
                layers[i] = (o2, g2)
                layers[i + 1] = (o1 + c2 - a2, g1)
                changed = True
    return NormalForm(nf.n_in, tuple(layers))


def nf_to_expr(nf: NormalForm, sig: dict):
    """Rebuild an expression (one padded generator per composition stage)."""
    widths = nf.widths(sig)
    e = Id(nf.n_in)
    for (o, g), w in zip(nf.layers, widths):
        a, _ = sig[g]
        stage = Gen(g)
        if o:
            stage = Tensor(Id(o), stage)
        if w - o - a:
            stage = Tensor(stage, Id(w - o - a))
        e = stage if isinstance(e, Id) else Comp(stage, e)
    return e


def commutation_class(layers: tuple, sig: dict, cap: int = 512) -> list:
    """All layer orders reachable by swapping adjacent disjoint layers."""
    seen = {layers}
    queue = [layers]
    while queue:
        cur = queue.pop(0)
        for i in range(len(cur) - 1):
            (o1, g1), (o2, g2) = cur[i], cur[i + 1]
            a1, c1 = sig[g1]
            a2, c2 = sig[g2]
            if o2 + a2 <= o1:
                nxt = cur[:i] + ((o2, g2), (o1 + c2 - a2, g1)) + cur[i + 2:]
            elif o2 >= o1 + c1:
                nxt = cur[:i] + ((o2 - (c1 - a1), g2), (o1, g1)) + cur[i + 2:]
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) >= cap:
                    return list(seen)
                queue.append(nxt)
    return list(seen)


@dataclass
class ProPresentation:
    signature: list  # of (name, arity, coarity)
    rules: list      # of (lhs expression, rhs expression)

    def sig(self) -> dict:
        return {name: (a, c) for name, a, c in self.signature}

    def validate(self) -> list:
        report = []
        sig = self.sig()
        for lhs, rhs in self.rules:
            try:
                tl = expr_type(lhs, sig)
                tr = expr_type(rhs, sig)
            except ProTypeError as err:
                report.append(f"rule side ill-typed: {err}")
                continue
            if tl != tr:
                report.append(
                    f"rule sides type-unequal: {expr_to_str(lhs)} is "
                    f"{tl}, {expr_to_str(rhs)} is {tr}")
        return report


def _find_rule_match(nf: NormalForm, rules_nf: list, sig: dict, cap: int):
    """Search the commutation class for a window matching a rule left side.

    Returns (new NormalForm, rule index) or None.  A window of consecutive
    layers matches when it equals the rule's left layers shifted by a common
    offset and the rule's full input width fits at that point.
    """
    orders = commutation_class(nf.layers, sig, cap)
    orders.sort()
    for order in orders:
        cur = NormalForm(nf.n_in, order)
        widths = cur.widths(sig)
        for ri, (lhs_nf, rhs_nf) in enumerate(rules_nf):
            k = len(lhs_nf.layers)
            if k == 0:
                continue
            for i in range(len(order) - k + 1):
                delta = order[i][0] - lhs_nf.layers[0][0]
                if delta < 0:
                    continue
                window = order[i:i + k]
                want = tuple((o + delta, g) for (o, g) in lhs_nf.layers)
                if window != want:
                    continue
                if delta + lhs_nf.n_in > widths[i]:
                    continue
                repl = tuple((o + delta, g) for (o, g) in rhs_nf.layers)
                new_layers = order[:i] + repl + order[i + k:]
                return NormalForm(nf.n_in, new_layers), ri
    return None


def pro_normalize_nf(pres: ProPresentation, e, fuel: int,
                     cap: int = 512):
    """Normalize to (NormalForm, status) with status "normal" or "fuel"."""
    sig = pres.sig()
    rules_nf = [(nf_of_expr(l, sig), nf_of_expr(r, sig))
                for l, r in pres.rules]
    nf = nf_of_expr(e, sig)
    while True:
        hit = _find_rule_match(nf, rules_nf, sig, cap)
        if hit is None:
            return canonical_nf(nf, sig), "normal"
        if fuel <= 0:
            return canonical_nf(nf, sig), "fuel"
        nf = canonical_nf(hit[0], sig)
        fuel -= 1


def pro_normalize(pres: ProPresentation, e, fuel: int):
    """Normalize an expression; raises if rewriting runs out of fuel."""
    nf, status = pro_normalize_nf(pres, e, fuel)
    if status == "fuel":
        raise FuelExhausted(expr_to_str(nf_to_expr(nf, pres.sig())))
    return nf_to_expr(nf, pres.sig())


class FuelExhausted(RuntimeError):
    pass


def enumerate_expressions(pres: ProPresentation, max_size: int,
                          max_id: int = 3) -> list:
    """All well-typed expressions up to the given node count.

    Returns (expression, arity, coarity) triples; identity widths range
    over 0..max_id.
    """
    sig = pres.sig()
    by_size = {1: [(Gen(name), a, c) for name, (a, c) in sig.items()]
               + [(Id(n), n, n) for n in range(max_id + 1)]}
    for s in range(2, max_size + 1):
        items = []
        for sa in range(1, s - 1):
            sb = s - 1 - sa
            for ea, na, ma in by_size[sa]:
                for eb, nb, mb in by_size[sb]:
                    if mb == na:
                        items.append((Comp(ea, eb), nb, ma))
                    items.append((Tensor(ea, eb), na + nb, ma + mb))
        by_size[s] = items
    out = []
    for s in range(1, max_size + 1):
        out.extend(by_size[s])
    return out


class PresentedPro:
    """The PRO presented by generators and rules, with rewriting equality."""

    def __init__(self, pres: ProPresentation, fuel: int = 64):
        bad = pres.validate()
        if bad:
            raise ProTypeError("; ".join(bad))
        self.pres = pres
        self.fuel = fuel
        self.signature = pres.sig()

    def id(self, n: int):
        return Id(n)

    def compose(self, g, f):
        expr_type(Comp(g, f), self.signature)
        return Comp(g, f)

    def tensor(self, a, b):
        return Tensor(a, b)

    def eq(self, e1, e2):
        """True, False, or "unknown" when fuel ran out on either side."""
        if expr_type(e1, self.signature) != expr_type(e2, self.signature):
            return False
        n1, s1 = pro_normalize_nf(self.pres, e1, self.fuel)
        n2, s2 = pro_normalize_nf(self.pres, e2, self.fuel)
        if n1 == n2:
            return True
        if s1 == "fuel" or s2 == "fuel":
            return "unknown"
        return False

    def enumerate_hom(self, n: int, m: int, fuel: int) -> list:
        """Distinct normal forms of type n -> m among expressions with at
        most fuel nodes."""
        seen = {}
        for e, a, c in enumerate_expressions(self.pres, fuel):
            if (a, c) != (n, m):
                continue
            nf, status = pro_normalize_nf(self.pres, e, self.fuel)
            if status == "normal" and nf not in seen:
                seen[nf] = nf_to_expr(nf, self.signature)
        return [seen[k] for k in sorted(seen, key=lambda x: (len(x.layers), x.layers))]


class NormalizedPro:
    """A presented PRO whose morphism values are canonical normal forms,
    so equal morphisms compare equal structurally."""

    def __init__(self, pres: ProPresentation, fuel: int = 64,
                 enum_size: int = 6):
        self.inner = PresentedPro(pres, fuel)
        self.pres = pres
        self.signature = pres.sig()
        self.enum_size = enum_size
        self._memo = {}

    def _norm(self, e) -> NormalForm:
        nf, status = pro_normalize_nf(self.pres, e, self.inner.fuel)
        if status != "normal":
            raise FuelExhausted(expr_to_str(nf_to_expr(nf, self.signature)))
        return nf

    def id(self, n: int) -> NormalForm:
        key = ("id", n)
        if key not in self._memo:
            self._memo[key] = self._norm(Id(n))
        return self._memo[key]

    def compose(self, g: NormalForm, f: NormalForm) -> NormalForm:
        key = ("comp", g, f)
        if key not in self._memo:
            self._memo[key] = self._norm(
                Comp(nf_to_expr(g, self.signature),
                     nf_to_expr(f, self.signature)))
        return self._memo[key]

    def tensor(self, a: NormalForm, b: NormalForm) -> NormalForm:
        key = ("tens", a, b)
        if key not in self._memo:
            self._memo[key] = self._norm(
                Tensor(nf_to_expr(a, self.signature),
                       nf_to_expr(b, self.signature)))
        return self._memo[key]

    def eq(self, a, b):
        return a == b

    def enumerate_hom(self, n: int, m: int, fuel: int = None) -> list:
        size = self.enum_size if fuel is None else fuel
        seen = set()
        for e, a, c in enumerate_expressions(self.pres, size):
            if (a, c) != (n, m):
                continue
            nf, status = pro_normalize_nf(self.pres, e, self.inner.fuel)
            if status == "normal":
                seen.add(nf)
        return sorted(seen, key=lambda x: (len(x.layers), x.layers))


class MonotonePro:
    """Exact model of the monoid theory: morphisms n -> m are monotone maps
    {0..n-1} -> {0..m-1}, stored as nondecreasing image tuples."""

    def id(self, n: int):
        return (n, tuple(range(n)))

    def compose(self, g, f):
        m, gi = g
        _, fi = f
        return (m, tuple(gi[x] for x in fi))

    def tensor(self, a, b):
        ma, ai = a
        mb, bi = b
        return (ma + mb, ai + tuple(x + ma for x in bi))

    def eq(self, a, b):
        return a == b

    def enumerate_hom(self, n: int, m: int, fuel: int = 0) -> list:
        if m == 0:
            return [(0, ())] if n == 0 else []
        return [(m, w) for w in
                itertools.combinations_with_replacement(range(m), n)]


def builtin_monoid_pro() -> MonotonePro:
    return MonotonePro()


def monoid_presentation() -> ProPresentation:
    m, e, i1 = Gen("m"), Gen("e"), Id(1)
    return ProPresentation(
        [("m", 2, 1), ("e", 0, 1)],
        [
            (Comp(m, Tensor(m, i1)), Comp(m, Tensor(i1, m))),
            (Comp(m, Tensor(e, i1)), i1),
            (Comp(m, Tensor(i1, e)), i1),
        ],
    )


def monoid_model_interp() -> dict:
    """Generator images of the monoid theory in the monotone-map model."""
    return {"m": (1, (0, 0)), "e": (1, ())}


def eval_expr(e, backend, interp: dict, sig: dict):
    """Evaluate an expression in any Pro backend given generator images."""
    if isinstance(e, Gen):
        return interp[e.name]
    if isinstance(e, Id):
        return backend.id(e.n)
    if isinstance(e, Comp):
        return backend.compose(eval_expr(e.after, backend, interp, sig),
                               eval_expr(e.before, backend, interp, sig))
    return backend.tensor(eval_expr(e.left, backend, interp, sig),
                          eval_expr(e.right, backend, interp, sig))


class TautPro:
    """All functions between cartesian powers of a finite set.

    A morphism n -> m is (n, m, table) where the table maps every input
    tuple of length n to an output tuple of length m.
    """

    def __init__(self, elements: list):
        self.elements = list(elements)

    def _table(self, n, fn):
        return tuple(sorted((xs, tuple(fn(xs)))
                            for xs in itertools.product(self.elements,
                                                        repeat=n)))

    def id(self, n: int):
        return (n, n, self._table(n, lambda xs: xs))

    def compose(self, g, f):
        nf, mf, tf = f
        ng, mg, tg = g
        if mf != ng:
            raise ProTypeError("composition mismatch")
        df, dg = dict(tf), dict(tg)
        return (nf, mg, self._table(nf, lambda xs: dg[df[xs]]))

    def tensor(self, a, b):
        na, ma, ta = a
        nb, mb, tb = b
        da, db = dict(ta), dict(tb)
        return (na + nb, ma + mb,
                self._table(na + nb,
                            lambda xs: da[xs[:na]] + db[xs[na:]]))

    def eq(self, a, b):
        return a == b

    def enumerate_hom(self, n: int, m: int, fuel: int = 0) -> list:
        ins = list(itertools.product(self.elements, repeat=n))
        outs = list(itertools.product(self.elements, repeat=m))
        return [(n, m, tuple(sorted(zip(ins, combo))))
                for combo in itertools.product(outs, repeat=len(ins))]

    def from_callable(self, n: int, m: int, fn):
        table = self._table(n, fn)
        for _, ys in table:
            if len(ys) != m or any(y not in self.elements for y in ys):
                raise ProTypeError("image outside the target power")
        return (n, m, table)


def pro_taut(A: list) -> TautPro:
    return TautPro(A)


def pro_algebra_check(P: PresentedPro, A: list, interp: dict,
                      sample_fuel: int = 4) -> list:
    """Check that the generator images define an algebra of the presented
    PRO on the set A.

    Two joint routes: every rule must evaluate to equal functions, and on
    a size-bounded expression sample, evaluating the rewritten form must
    agree with evaluating the original (the induced functor respects
    composition, tensor and identities by construction of the evaluator,
    and respects the rules by the first route).
    """
    report = []
    T = TautPro(A)
    sig = P.signature
    images = {}
    for name, (n, m) in sig.items():
        if name not in interp:
            report.append(f"no interpretation for generator {name!r}")
            continue
        val = interp[name]
        try:
            val = T.from_callable(n, m, val) if callable(val) else val
        except ProTypeError as err:
            report.append(f"interpretation of {name!r} is ill-typed: {err}")
            continue
        if val[0] != n or val[1] != m:
            report.append(f"interpretation of {name!r} has the wrong type")
            continue
        images[name] = val
    if report:
        return report
    for lhs, rhs in P.pres.rules:
        lv = eval_expr(lhs, T, images, sig)
        rv = eval_expr(rhs, T, images, sig)
        if lv != rv:
            dl, dr = dict(lv[2]), dict(rv[2])
            xs = next(x for x in dl if dl[x] != dr[x])
            report.append(
                f"rule {expr_to_str(lhs)} = {expr_to_str(rhs)} fails "
                f"at input {xs!r}: {dl[xs]!r} vs {dr[xs]!r}")
    for e, n, m in enumerate_expressions(P.pres, sample_fuel):
        nf, status = pro_normalize_nf(P.pres, e, P.fuel)
        if status != "normal":
            continue
        before = eval_expr(e, T, images, sig)
        after = eval_expr(nf_to_expr(nf, sig), T, images, sig)
        if before != after:
            report.append(
                f"rewriting changes the value of {expr_to_str(e)}")
    return report


def theory_from_json(text: str) -> ProPresentation:
    """Load a theory file: generators with arities plus oriented rules
    written as S-expression strings."""
    data = json.loads(text)
    signature = [(g["name"], int(g["arity"]), int(g["coarity"]))
                 for g in data["generators"]]
    rules = [(expr_from_str(l), expr_from_str(r))
             for l, r in data.get("rules", [])]
    pres = ProPresentation(signature, rules)
    bad = pres.validate()
    if bad:
        raise ProTypeError("; ".join(bad))
    return pres
