"""Parabolic combinatorics: the sets Λ⁺ and (Λ⁺)ᶜ, and restriction to subsystems.

A parabolic is given by a proper subset Λ of the simple indices.  Λ⁺ holds
the positive roots in the span of Λ; the nilradical roots are all the other
positive roots.  Restriction either keeps the roots supported on a set Ψ of
simple indices, or keeps the multiples of a single root (a rank-one
subsystem).  Both produce a fresh context with its own standard basis plus
a :class:`SubsystemMap` back into the ambient system.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .rootsystem import (
    DomainError,
    Root,
    RootSystem,
    add,
    is_positive,
    scale,
    sub,
    support,
)


class DegenerateRestrictionError(DomainError):
    """Restriction to Ψ ⊆ Λ, which carries no nilradical roots."""


@dataclass(frozen=True)
class ParabolicContext:
    sys: RootSystem
    lam: frozenset[int]
    lambda_plus: tuple[Root, ...] = field(compare=False)
    nilradical: tuple[Root, ...] = field(compare=False)

    @property
    def rank(self) -> int:
        return self.sys.rank

    @property
    def phi_max(self) -> tuple[Root, ...]:
        return self.sys.phi_max

    def in_nilradical(self, root: Root) -> bool:
        return tuple(root) in self._nil_set

    def in_lambda_plus(self, root: Root) -> bool:
        return tuple(root) in self._lp_set

    @property
    def _nil_set(self) -> frozenset[Root]:
        cached = self.__dict__.get("_nil_cache")
        if cached is None:
            cached = frozenset(self.nilradical)
            object.__setattr__(self, "_nil_cache", cached)
        return cached

    @property
    def _lp_set(self) -> frozenset[Root]:
        cached = self.__dict__.get("_lp_cache")
        if cached is None:
            cached = frozenset(self.lambda_plus)
            object.__setattr__(self, "_lp_cache", cached)
        return cached

    @property
    def key(self) -> tuple:
        return (self.sys.cartan, self.sys.reduced, tuple(sorted(self.lam)))

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, ParabolicContext) and self.key == other.key

    def to_dict(self) -> dict:
        return {
            "cartan": [list(row) for row in self.sys.cartan],
            "reduced": self.sys.reduced,
            "lambda": sorted(self.lam),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ParabolicContext":
        sys = RootSystem.from_cartan(data["cartan"], data["reduced"])
        return make_context(sys, data["lambda"])


def make_context(sys: RootSystem, lam: Iterable[int]) -> ParabolicContext:
    lam = frozenset(int(i) for i in lam)
    if any(not 0 <= i < sys.rank for i in lam):
        raise DomainError(f"Λ indices out of range for {sys.name}: {sorted(lam)}")
    if len(lam) == sys.rank:
        raise DomainError("Λ must be a proper subset of the simple roots")
    lp = tuple(x for x in sys.positive_roots if support(x) <= lam)
    nil = tuple(x for x in sys.positive_roots if not support(x) <= lam)
    return ParabolicContext(sys, lam, lp, nil)


@dataclass(frozen=True)
class SubsystemMap:
    """Embedding of a subsystem's roots into the ambient system.

    ``basis[i]`` is the ambient root that the subsystem's i-th simple root maps to.
    ``psi`` is the set of ambient simple indices the image is supported on.
    """
    psi: frozenset[int]
    basis: tuple[Root, ...]

    def embed(self, coeffs: Root) -> Root:
        out = tuple(0 for _ in self.basis[0])
        for c, b in zip(coeffs, self.basis):
            out = add(out, scale(c, b))
        return out

    def pullback(self, root: Root) -> Root | None:
        """Inverse of :meth:`embed` on its image; None off the image."""
        if not support(root) <= self.psi:
            return None
        # basis vectors are either distinct unit vectors or a single root
        if len(self.basis) == 1:
            b = self.basis[0]
            k = next(i for i, c in enumerate(b) if c)
            if root[k] % b[k]:
                return None
            c = root[k] // b[k]
            return (c,) if scale(c, b) == tuple(root) else None
        coords = []
        for b in self.basis:
            coords.append(root[b.index(1)])
        return tuple(coords) if self.embed(tuple(coords)) == tuple(root) else None

    @property
    def embedding(self) -> dict:
        return {"psi": sorted(self.psi), "basis": [list(b) for b in self.basis]}


def _subsystem(roots: list[Root], cartan) -> RootSystem:
    present = set(roots)
    reduced = not any(scale(2, x) in present for x in roots)
    return RootSystem(cartan, roots, reduced)


def restrict(ctx: ParabolicContext, psi: Iterable[int]) -> tuple[ParabolicContext, SubsystemMap]:
    """Context on the roots supported on Ψ, relabelled to Ψ's sorted index order, with Λ' = Λ ∩ Ψ."""
    psi = frozenset(int(i) for i in psi)
    sys = ctx.sys
    if not psi or len(psi) >= sys.rank or any(not 0 <= i < sys.rank for i in psi):
        raise DomainError("Ψ must be a proper nonempty subset of the simple roots")
    if psi <= ctx.lam:
        raise DegenerateRestrictionError("Ψ ⊆ Λ: the restriction has no nilradical")
    order = sorted(psi)
    cartan = tuple(tuple(sys.cartan[i][j] for j in order) for i in order)
    roots = [tuple(x[i] for i in order) for x in sys.positive_roots if support(x) <= psi]
    basis = tuple(tuple(1 if k == i else 0 for k in range(sys.rank)) for i in order)
    sub_sys = _subsystem(roots, cartan)
    lam = [order.index(i) for i in order if i in ctx.lam]
    return make_context(sub_sys, lam), SubsystemMap(psi, basis)


def rank_one_generator(sys: RootSystem, root: Root) -> Root:
    """The indivisible root on the line through ``root``."""
    root = tuple(root)
    if all(c % 2 == 0 for c in root):
        half = tuple(c // 2 for c in root)
        if sys.is_root(half):
            return half
    return root


def root_subsystem(ctx: ParabolicContext, root: Root) -> tuple[ParabolicContext, SubsystemMap]:
    """Rank-one context on the multiples of ``root`` (type A1, or BC1 when doubles occur), Λ' = ∅."""
    root = tuple(root)
    if not ctx.sys.is_positive_root(root):
        raise DomainError(f"{root} is not a positive root")
    gen = rank_one_generator(ctx.sys, root)
    roots = [(1,)]
    if ctx.sys.is_root(scale(2, gen)):
        roots.append((2,))
    sub_sys = RootSystem(((2,),), roots, reduced=len(roots) == 1)
    return make_context(sub_sys, ()), SubsystemMap(support(gen), (gen,))


def transverse_slide_admissible(ctx: ParabolicContext, alpha: Root | int) -> bool:
    """True when sliding along -α cannot leave the nilradical from Φ⁺_max.

    Checks that every positive root λ - lα (l >= 0) on the α-string below
    a root λ of Φ⁺_max lies in the nilradical.  The walk stops when the
    string leaves the positive roots, so a rank-one system is vacuously fine.
    """
    i = ctx.sys.simple_index(alpha)
    if i in ctx.lam:
        raise DomainError("transverse slides use a simple root outside Λ")
    a = ctx.sys.simple_roots[i]
    for lam in ctx.phi_max:
        mu = lam
        while is_positive(mu) and ctx.sys.is_root(mu):
            if not ctx.in_nilradical(mu):
                return False
            mu = sub(mu, a)
    return True
