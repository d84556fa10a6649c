"""Command-line front end.

Subcommands operate on a theory file (generators with arities plus
oriented rules as S-expression strings) and emit canonical, byte-stable
output: JSON with sorted keys and cells in canonical order, DOT for the
low-dimensional fragment, or plain text summaries.

Exit codes: 0 success, 1 semantic failure (a witness is printed),
2 input error (unreadable or malformed input, out-of-range arguments).
The WEAKCAT_LOG environment variable sets the log level; nothing else
is read from the environment.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from .globpro import (GlobularizedPro, StrictOmegaCategory, globpro_validate,
                      globularize, materialize_hom, strict_algebra_check)
from .globset import GlobularSet
from .pasting import tree_to_str
from .pros import (NormalizedPro, ProTypeError, expr_to_str, nf_to_expr,
                   theory_from_json)
from .weaken import theory_to_dot, theory_to_json, weaken_generate

log = logging.getLogger("weakcat")


class InputError(Exception):
    """Unreadable or malformed input; exit code 2."""


class SemanticError(Exception):
    """A check failed; the message is the witness; exit code 1."""


@dataclass
class RunConfig:
    command: str
    theory: str
    max_dim: int = 1
    max_tree_nodes: int = 2
    max_expr_size: int = 4
    hom_bound: int = 2
    out: str = None
    format: str = "json"


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_theory(path: str):
    text = _read_file(path)
    try:
        return theory_from_json(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: malformed JSON at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}") from exc
    except ProTypeError as exc:
        raise SemanticError(f"{path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad theory file: {exc}") from exc


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {cfg.out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def _bounds(cfg: RunConfig) -> dict:
    return {"max_obj": cfg.hom_bound, "max_dim": cfg.max_dim,
            "max_tree_nodes": cfg.max_tree_nodes}


def cmd_validate(cfg: RunConfig) -> int:
    pres = _load_theory(cfg.theory)
    GP = globularize(NormalizedPro(pres), cfg.max_dim)
    report = globpro_validate(GP, _bounds(cfg))
    if report:
        raise SemanticError("\n".join(report))
    _emit(cfg, f"ok: {cfg.theory} validates at the given bounds\n")
    return 0


def _hom_listing(GP: GlobularizedPro, psig: dict, n: int, m: int,
                 D: int, max_nodes: int) -> dict:
    H = materialize_hom(GP, n, m, D, max_nodes)
    out = {}
    for d in range(D + 1):
        out[str(d)] = [{"p": expr_to_str(nf_to_expr(phi, psig)),
                        "tree": tree_to_str(sigma.tree)}
                       for (phi, sigma) in H.glob.cells_at(d)]
    return out


def cmd_globularize(cfg: RunConfig) -> int:
    pres = _load_theory(cfg.theory)
    psig = pres.sig()
    GP = globularize(NormalizedPro(pres), cfg.max_dim)
    homs = {}
    for n in range(cfg.hom_bound + 1):
        for m in range(cfg.hom_bound + 1):
            listing = _hom_listing(GP, psig, n, m, cfg.max_dim,
                                   cfg.max_tree_nodes)
            homs[f"{n},{m}"] = {d: len(cells) for d, cells in listing.items()}
    data = {"bounds": {"maxDim": cfg.max_dim, "homBound": cfg.hom_bound,
                       "maxTreeNodes": cfg.max_tree_nodes},
            "generators": [{"name": g, "arity": a, "coarity": c}
                           for g, (a, c) in sorted(psig.items())],
            "homCellCounts": homs}
    if cfg.format == "text":
        lines = [f"hom({key}): " + " ".join(f"dim{d}={k}"
                                            for d, k in sorted(v.items()))
                 for key, v in sorted(homs.items())]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, _canonical_json(data))
    return 0


def cmd_hom(cfg: RunConfig, n: int, m: int, d: int) -> int:
    if d > cfg.max_dim:
        raise InputError(f"dimension {d} exceeds --max-dim {cfg.max_dim}")
    if min(n, m, d) < 0:
        raise InputError("hom arguments must be naturals")
    pres = _load_theory(cfg.theory)
    GP = globularize(NormalizedPro(pres), cfg.max_dim)
    listing = _hom_listing(GP, pres.sig(), n, m, cfg.max_dim,
                           cfg.max_tree_nodes)
    cells = listing[str(d)]
    if cfg.format == "text":
        _emit(cfg, "".join(f"{c['p']}  {c['tree']}\n" for c in cells))
    else:
        _emit(cfg, _canonical_json({"hom": [n, m], "dim": d, "cells": cells}))
    return 0


def cmd_weaken(cfg: RunConfig) -> int:
    pres = _load_theory(cfg.theory)
    W = weaken_generate(pres, cfg.max_dim,
                        {"hom_bound": cfg.hom_bound,
                         "max_expr_size": cfg.max_expr_size,
                         "max_tree_nodes": cfg.max_tree_nodes})
    if cfg.format == "dot":
        _emit(cfg, theory_to_dot(W))
    elif cfg.format == "text":
        lines = []
        for d in range(cfg.max_dim + 1):
            total = sum(len(W.cells[h][d]) for h in W.cells)
            lines.append(f"dim {d}: {total} cells")
        lines.append(f"contraction lifts: {len(W.contraction)}")
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, theory_to_json(W) + "\n")
    return 0


def cmd_export_dot(cfg: RunConfig) -> int:
    pres = _load_theory(cfg.theory)
    W = weaken_generate(pres, cfg.max_dim,
                        {"hom_bound": cfg.hom_bound,
                         "max_expr_size": cfg.max_expr_size,
                         "max_tree_nodes": cfg.max_tree_nodes})
    _emit(cfg, theory_to_dot(W))
    return 0


class AlgebraFileError(Exception):
    """A table lookup the checker needed is missing from the algebra file."""


def _load_algebra(path: str):
    """Build a strict structure and generator tables from an algebra file.

    The file lists cells per dimension with src/tgt, a composition table
    per dimension (key "a,b"), an identity table per target dimension
    (cells absent from it are already identities), and per-generator
    interpretation tables per dimension keyed by comma-joined arguments.
    """
    try:
        data = json.loads(_read_file(path))
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: malformed JSON at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}") from exc
    try:
        cells = [list(level) for level in data["cells"]]
        D = len(cells) - 1
        for level in cells:
            for c in level:
                if "," in c:
                    raise InputError(
                        f"{path}: cell name {c!r} contains a comma")
        src = [dict(data["src"][d]) if d >= 1 else {} for d in range(D + 1)]
        tgt = [dict(data["tgt"][d]) if d >= 1 else {} for d in range(D + 1)]
        glob = GlobularSet(D, cells, src, tgt)
        comp_tab = {int(k): dict(v) for k, v in data["compose"].items()}
        id_tab = {int(k): dict(v) for k, v in data["identity"].items()}
        interp_tab = {g: {int(k): dict(v) for k, v in tabs.items()}
                      for g, tabs in data["interp"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad algebra file: {exc}") from exc

    def compose(k, a, b):
        try:
            return comp_tab[k][f"{a},{b}"]
        except KeyError:
            raise AlgebraFileError(
                f"composition table has no entry for ({a}, {b}) "
                f"along dimension {k}")

    def identity(c, dim):
        return id_tab.get(dim, {}).get(c, c)

    def make_op(g):
        def op(xs, d):
            try:
                return tuple(interp_tab[g][d][",".join(xs)])
            except KeyError:
                raise AlgebraFileError(
                    f"operation {g!r} has no entry for {xs!r} "
                    f"at dimension {d}")
        return op

    interp = {g: make_op(g) for g in interp_tab}
    return StrictOmegaCategory(glob, compose, identity), interp


def cmd_check_algebra(cfg: RunConfig, algebra_path: str) -> int:
    pres = _load_theory(cfg.theory)
    GP = globularize(NormalizedPro(pres), cfg.max_dim)
    A, interp = _load_algebra(algebra_path)
    missing = [g for g in pres.sig() if g not in interp]
    if missing:
        raise InputError(
            f"{algebra_path}: no interpretation for generators {missing}")
    try:
        report = strict_algebra_check(GP, A, interp, _bounds(cfg))
    except AlgebraFileError as exc:
        raise SemanticError(str(exc)) from exc
    if report:
        raise SemanticError("\n".join(report))
    _emit(cfg, f"ok: {algebra_path} is a strict algebra of {cfg.theory}\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakcat",
        description="bounded engine for globular PROs and weak "
                    "omega-categorification")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, extra=()):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("theory", help="path to a theory file")
        for arg, kw in extra:
            p.add_argument(arg, **kw)
        p.add_argument("--max-dim", type=int, default=1)
        p.add_argument("--max-tree-nodes", type=int, default=2)
        p.add_argument("--max-expr-size", type=int, default=4)
        p.add_argument("--hom-bound", type=int, default=2)
        p.add_argument("--format", choices=["json", "dot", "text"],
                       default="json")
        p.add_argument("--out", default=None)
        return p

    add("validate", "check the globular PRO laws at the given bounds")
    add("globularize", "emit a descriptor of the globularized theory")
    add("hom", "list the cells of one hom collection",
        [("n", {"type": int}), ("m", {"type": int}), ("d", {"type": int})])
    add("weaken", "generate the bounded weak theory")
    add("check-algebra", "check a strict algebra file against the theory",
        [("algebra", {"help": "path to an algebra file"})])
    add("export-dot", "emit the weak theory's low-dimensional fragment as DOT")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("WEAKCAT_LOG", "WARNING"))
    args = _build_parser().parse_args(argv)
    if min(args.max_dim, args.max_tree_nodes, args.max_expr_size,
           args.hom_bound) < 0:
        print("error: all bounds must be naturals", file=sys.stderr)
        return 2
    cfg = RunConfig(command=args.command, theory=args.theory,
                    max_dim=args.max_dim, max_tree_nodes=args.max_tree_nodes,
                    max_expr_size=args.max_expr_size,
                    hom_bound=args.hom_bound, out=args.out,
                    format=args.format)
    try:
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "globularize":
            return cmd_globularize(cfg)
        if args.command == "hom":
            return cmd_hom(cfg, args.n, args.m, args.d)
        if args.command == "weaken":
            return cmd_weaken(cfg)
        if args.command == "check-algebra":
            return cmd_check_algebra(cfg, args.algebra)
        return cmd_export_dot(cfg)
    except SemanticError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
