"""Finite, dimension-truncated globular sets.

Cells are opaque hashable ids kept in per-dimension lists; src/tgt are
external tables.  The truncation dimension is a hard cap: asking for cells
above ``max_dim`` raises instead of silently returning nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class DimensionError(ValueError):
    """A requested dimension exceeds the truncation bound."""


@dataclass
class GlobularSet:
    max_dim: int
    cells: list          # cells[k] = list of k-cell ids, 0 <= k <= max_dim
    src: list            # src[k] maps k-cells to (k-1)-cells, src[0] = {}
    tgt: list
    _dims: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        while len(self.cells) < self.max_dim + 1:
            self.cells.append([])
        while len(self.src) < self.max_dim + 1:
            self.src.append({})
        while len(self.tgt) < self.max_dim + 1:
            self.tgt.append({})
        self._reindex()

    def _reindex(self):
        self._dims = {}
        for k, cs in enumerate(self.cells):
            for c in cs:
                self._dims[c] = k

    def cells_at(self, k: int) -> list:
        if k > self.max_dim:
            raise DimensionError(f"dimension {k} exceeds max_dim {self.max_dim}")
        return self.cells[k]

    def has_cell(self, c) -> bool:
        return c in self._dims

    def cell_dim(self, c) -> int:
        return self._dims[c]

    def src_of(self, c):
        return self.src[self._dims[c]][c]

    def tgt_of(self, c):
        return self.tgt[self._dims[c]][c]

    def boundary(self, c, side: str, steps: int = 1):
        """Iterated source (side='source') or target boundary."""
        table = self.src if side == "source" else self.tgt
        for _ in range(steps):
            c = table[self._dims[c]][c]
        return c

    def to_json(self) -> str:
        obj = {
            "maxDim": self.max_dim,
            "cells": [list(cs) for cs in self.cells],
            "src": [{str(k): v for k, v in t.items()} for t in self.src],
            "tgt": [{str(k): v for k, v in t.items()} for t in self.tgt],
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "GlobularSet":
        obj = json.loads(text)
        return cls(
            max_dim=obj["maxDim"],
            cells=[list(cs) for cs in obj["cells"]],
            src=[dict(t) for t in obj["src"]],
            tgt=[dict(t) for t in obj["tgt"]],
        )


def validate_globular(X: GlobularSet) -> list:
    """Report every violated globe relation or dangling src/tgt entry."""
    report = []
    for k in range(1, X.max_dim + 1):
        lower = set(X.cells[k - 1])
        for c in X.cells[k]:
            if c not in X.src[k]:
                report.append(f"missing src for {c!r} at dim {k}")
                continue
            if c not in X.tgt[k]:
                report.append(f"missing tgt for {c!r} at dim {k}")
                continue
            s, t = X.src[k][c], X.tgt[k][c]
            if s not in lower:
                report.append(f"src of {c!r} not a {k-1}-cell: {s!r}")
            if t not in lower:
                report.append(f"tgt of {c!r} not a {k-1}-cell: {t!r}")
    for k in range(2, X.max_dim + 1):
        for c in X.cells[k]:
            if c not in X.src[k] or c not in X.tgt[k]:
                continue
            s, t = X.src[k][c], X.tgt[k][c]
            if s in X.src[k - 1] and t in X.src[k - 1]:
                if X.src[k - 1][s] != X.src[k - 1][t]:
                    report.append(f"ss != st at {c!r}")
                if X.tgt[k - 1][s] != X.tgt[k - 1][t]:
                    report.append(f"ts != tt at {c!r}")
    return report


def parallel_pairs(X: GlobularSet, k: int) -> list:
    """All ordered pairs of parallel k-cells; every 0-cell pair is parallel."""
    if k > X.max_dim:
        raise DimensionError(f"dimension {k} exceeds max_dim {X.max_dim}")
    cs = X.cells[k]
    if k == 0:
        return [(a, b) for a in cs for b in cs]
    out = []
    for a in cs:
        for b in cs:
            if X.src[k][a] == X.src[k][b] and X.tgt[k][a] == X.tgt[k][b]:
                out.append((a, b))
    return out


def terminal_glob(D: int) -> GlobularSet:
    cells = [[f"*{k}"] for k in range(D + 1)]
    src = [{}] + [{f"*{k}": f"*{k-1}"} for k in range(1, D + 1)]
    tgt = [{}] + [{f"*{k}": f"*{k-1}"} for k in range(1, D + 1)]
    return GlobularSet(D, cells, src, tgt)


def empty_glob(D: int) -> GlobularSet:
    return GlobularSet(D, [[] for _ in range(D + 1)], [{} for _ in range(D + 1)],
                       [{} for _ in range(D + 1)])


def glob_binary(X: GlobularSet, Y: GlobularSet, kind: str) -> GlobularSet:
    """Binary product (componentwise pairs) or coproduct (tagged union)."""
    if X.max_dim != Y.max_dim:
        raise ValueError("glob_binary requires equal max_dim")
    D = X.max_dim
    cells = [[] for _ in range(D + 1)]
    src = [{} for _ in range(D + 1)]
    tgt = [{} for _ in range(D + 1)]
    if kind == "product":
        for k in range(D + 1):
            for a in X.cells[k]:
                for b in Y.cells[k]:
                    cells[k].append((a, b))
                    if k >= 1:
                        src[k][(a, b)] = (X.src[k][a], Y.src[k][b])
                        tgt[k][(a, b)] = (X.tgt[k][a], Y.tgt[k][b])
    elif kind == "coproduct":
        for k in range(D + 1):
            for a in X.cells[k]:
                cells[k].append(("L", a))
                if k >= 1:
                    src[k][("L", a)] = ("L", X.src[k][a])
                    tgt[k][("L", a)] = ("L", X.tgt[k][a])
            for b in Y.cells[k]:
                cells[k].append(("R", b))
                if k >= 1:
                    src[k][("R", b)] = ("R", Y.src[k][b])
                    tgt[k][("R", b)] = ("R", Y.tgt[k][b])
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return GlobularSet(D, cells, src, tgt)
