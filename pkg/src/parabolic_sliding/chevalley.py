"""Chevalley structure constants for split reduced root systems.

Signs are fixed by extraspecial pairs: positive roots are ordered by height
and then lexicographically; for each non-simple positive root ξ the
extraspecial pair is (a, ξ - a) with a the smallest positive root for which
ξ - a is also a root, and N(a, ξ - a) = p + 1 > 0.  Every other constant
follows from the four-term and three-term relations of a Chevalley basis.

This module needs root lengths, so it builds a symmetrized inner product
from the Cartan matrix.  It is the only place where lengths enter.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .rootsystem import (
    DomainError,
    InternalConsistencyError,
    Root,
    RootSystem,
    add,
    is_positive,
    neg,
    sub,
)


class UnsupportedSystemError(ValueError):
    """Raised for root systems the structure-constant builder does not handle (non-reduced)."""


def squared_lengths(cartan) -> tuple[Fraction, ...]:
    """|α_i|² up to a per-component scale, from A_ij |α_i|² = A_ji |α_j|²."""
    r = len(cartan)
    norms: list[Fraction | None] = [None] * r
    for start in range(r):
        if norms[start] is not None:
            continue
        norms[start] = Fraction(1)
        todo = [start]
        while todo:
            i = todo.pop()
            for j in range(r):
                if j != i and cartan[i][j] and norms[j] is None:
                    norms[j] = Fraction(cartan[i][j]) * norms[i] / cartan[j][i]
                    todo.append(j)
    return tuple(norms)


def gram_matrix(cartan) -> tuple[tuple[Fraction, ...], ...]:
    n = squared_lengths(cartan)
    r = len(cartan)
    return tuple(tuple(Fraction(cartan[i][j]) * n[i] / 2 for j in range(r)) for i in range(r))


@dataclass
class StructureTable:
    sys: RootSystem
    N: dict[tuple[Root, Root], int] = field(default_factory=dict)
    gram: tuple = ()

    def norm2(self, x: Root) -> Fraction:
        g = self.gram
        return sum((x[i] * x[j] * g[i][j] for i in range(len(x)) for j in range(len(x)) if x[i] and x[j]),
                   Fraction(0))

    def get(self, a: Root, b: Root) -> int | None:
        """N(a, b), or None when a + b is not a root."""
        return self.N.get((tuple(a), tuple(b)))

    def pairs(self) -> list[tuple[Root, Root, int]]:
        return [(a, b, n) for (a, b), n in sorted(self.N.items())]

    def to_json(self) -> str:
        return json.dumps({"pairs": [[list(a), list(b), n] for a, b, n in self.pairs()]},
                          sort_keys=True)


def _order_key(x: Root) -> tuple:
    return (sum(x), x)


def build_structure_table(sys: RootSystem) -> StructureTable:
    if not sys.reduced:
        raise UnsupportedSystemError("structure constants are built for reduced systems only")
    tbl = StructureTable(sys, {}, gram_matrix(sys.cartan))
    pos = sorted(sys.positive_roots, key=_order_key)
    rank = {x: i for i, x in enumerate(pos)}
    Npos: dict[tuple[Root, Root], Fraction] = {}

    def n_any(x: Root, y: Root) -> Fraction:
        s = add(x, y)
        if not sys.is_root(s):
            return Fraction(0)
        if is_positive(x) and is_positive(y):
            return Npos[(x, y)]
        if not is_positive(x) and not is_positive(y):
            return -Npos[(neg(x), neg(y))]
        # mixed signs: x + y + z = 0 gives N_xy/|z|² = N_yz/|x|² = N_zx/|y|²
        z = neg(s)
        if is_positive(y) == is_positive(z):
            return tbl.norm2(z) / tbl.norm2(x) * n_any(y, z)
        return tbl.norm2(z) / tbl.norm2(y) * n_any(z, x)

    for xi in pos:
        if sum(xi) == 1:
            continue
        # extraspecial pair
        a = next(r for r in pos if rank[r] < rank[xi] and sys.is_positive_root(sub(xi, r)))
        b = sub(xi, a)
        p = 0
        while sys.is_root(sub(b, tuple((p + 1) * c for c in a))):
            p += 1
        n_ab = Fraction(p + 1)
        Npos[(a, b)] = n_ab
        Npos[(b, a)] = -n_ab
        for r in pos:
            s = sub(xi, r)
            if rank[r] >= rank[xi] or not sys.is_positive_root(s) or r == a or r == b:
                continue
            if (r, s) in Npos:
                continue
            # four-term relation on (r, s, -a, -b)
            t1 = Fraction(0)
            if sys.is_root(sub(s, a)):
                t1 = n_any(s, neg(a)) * n_any(r, neg(b)) / tbl.norm2(sub(s, a))
            t2 = Fraction(0)
            if sys.is_root(sub(r, a)):
                t2 = n_any(neg(a), r) * n_any(s, neg(b)) / tbl.norm2(sub(r, a))
            val = (t1 + t2) * tbl.norm2(xi) / n_ab
            Npos[(r, s)] = val
            Npos[(s, r)] = -val

    roots = sys.roots
    for x in roots:
        for y in roots:
            if sys.is_root(add(x, y)):
                v = n_any(x, y)
                if v.denominator != 1:
                    raise InternalConsistencyError(f"non-integral structure constant N({x},{y}) = {v}")
                tbl.N[(x, y)] = int(v)
    return tbl


def check_bracket_nondegenerate(tbl: StructureTable, alpha: Root, nu: Root) -> bool:
    """True iff [g_{-α}, g_{ν+α}] = g_ν, i.e. N(-α, ν+α) ≠ 0."""
    sys = tbl.sys
    alpha, nu = tuple(alpha), tuple(nu)
    top = add(nu, alpha)
    for x in (alpha, nu, top):
        if not sys.is_positive_root(x):
            raise DomainError(f"{x} must be a positive root")
    n = tbl.get(neg(alpha), top)
    return bool(n)


# ---------------------------------------------------------------------------
# the full split Lie algebra, for Jacobi checks

def _h_coroot(tbl: StructureTable, x: Root) -> dict:
    """Coroot h_x for positive x, written on the simple coroots h_i."""
    n = squared_lengths(tbl.sys.cartan)
    nx = tbl.norm2(x)
    return {("h", i): c * n[i] / nx for i, c in enumerate(x) if c}


def bracket_basis(tbl: StructureTable, u: tuple, v: tuple) -> dict:
    """Bracket of two basis elements ('e', root) / ('h', i) as a sparse vector."""
    sys = tbl.sys
    if u[0] == "h" and v[0] == "h":
        return {}
    if u[0] == "h":
        return {k: -c for k, c in bracket_basis(tbl, v, u).items()}
    if v[0] == "h":
        # [e_x, h_i] = -x(h_i) e_x
        i = v[1]
        val = sum(u[1][j] * sys.cartan[i][j] for j in range(sys.rank))
        return {u: Fraction(-val)} if val else {}
    x, y = u[1], v[1]
    s = add(x, y)
    if not any(s):
        h = _h_coroot(tbl, x if is_positive(x) else y)
        return h if is_positive(x) else {k: -c for k, c in h.items()}
    n = tbl.get(x, y)
    return {("e", s): Fraction(n)} if n else {}


def bracket(tbl: StructureTable, u: dict, v: dict) -> dict:
    out: dict = {}
    for bu, cu in u.items():
        for bv, cv in v.items():
            for k, c in bracket_basis(tbl, bu, bv).items():
                out[k] = out.get(k, 0) + cu * cv * c
    return {k: c for k, c in out.items() if c}


def jacobi_violations(tbl: StructureTable) -> list[tuple]:
    """Basis triples where [u,[v,w]] + [v,[w,u]] + [w,[u,v]] ≠ 0."""
    basis = [("h", i) for i in range(tbl.sys.rank)] + [("e", x) for x in tbl.sys.roots]
    bad = []
    for u, v, w in combinations(basis, 3):
        total: dict = {}
        for a, b, c in ((u, v, w), (v, w, u), (w, u, v)):
            for k, val in bracket(tbl, {a: 1}, bracket(tbl, {b: 1}, {c: 1})).items():
                total[k] = total.get(k, 0) + val
        if any(total.values()):
            bad.append((u, v, w))
    return bad
