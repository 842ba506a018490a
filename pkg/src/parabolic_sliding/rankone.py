"""Rank-one chart computations in a two-step nilpotent algebra n⁺ = h̄ ⊕ z⁺.

Points of the chart are coordinate vectors in n⁺.  An element v of n⁺
acts by the truncated Baker-Campbell-Hausdorff product

    v . x = x + ½[v, x] + v

and the base point is 0.  Everything is exact rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .rootsystem import DomainError

Vec = tuple[Fraction, ...]


class DegenerateDirectionError(DomainError):
    """The half-line direction points along -ξ_∞, where the witness construction breaks down."""


def vec(xs: Iterable) -> Vec:
    return tuple(Fraction(x) for x in xs)


def norm1(x: Sequence[Fraction]) -> Fraction:
    return sum((abs(c) for c in x), Fraction(0))


@dataclass(frozen=True)
class TwoStepNilpotent:
    """A two-step nilpotent algebra given by a bracket table on basis vectors.

    ``table[(i, j)]`` for i < j is the bracket [e_i, e_j], a vector supported on
    ``center``.  Missing pairs bracket to zero.  ``center`` is the designated
    subspace z⁺ that the half-line directions live in.
    """
    dim: int
    center: tuple[int, ...]
    table: dict = field(default_factory=dict)
    names: tuple[str, ...] = ()
    model: str = "custom"

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(self.dim)))
        cen = set(self.center)
        for (i, j), v in self.table.items():
            if not 0 <= i < j < self.dim:
                raise DomainError("bracket table keys must be index pairs i < j")
            if len(v) != self.dim or any(v[k] for k in range(self.dim) if k not in cen):
                raise DomainError("brackets must land in the center")
            if i in cen or j in cen:
                if any(v):
                    raise DomainError("the center must be central")

    @property
    def center_dim(self) -> int:
        """Dimension of the derived algebra [n, n] (0 for the abelian model)."""
        span = {k for v in self.table.values() for k, c in enumerate(v) if c}
        return len(span)

    def basis(self, i: int) -> Vec:
        return tuple(Fraction(1 if k == i else 0) for k in range(self.dim))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DomainError(f"no basis vector named {name!r} in the {self.model} model") from None

    def bracket(self, x: Sequence, y: Sequence) -> Vec:
        out = [Fraction(0)] * self.dim
        for (i, j), v in self.table.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                for k in self.center:
                    if v[k]:
                        out[k] += c * v[k]
        return tuple(out)

    def split(self, x: Sequence) -> tuple[Vec, Vec]:
        """(x̄, x̃): the part off the center and the central part."""
        cen = set(self.center)
        bar = tuple(Fraction(0) if k in cen else Fraction(c) for k, c in enumerate(x))
        til = tuple(Fraction(c) if k in cen else Fraction(0) for k, c in enumerate(x))
        return bar, til

    def in_center(self, x: Sequence) -> bool:
        cen = set(self.center)
        return all(not c for k, c in enumerate(x) if k not in cen)


def _add(*vs: Sequence) -> Vec:
    return tuple(sum(cs, Fraction(0)) for cs in zip(*vs))


def _scale(c, v: Sequence) -> Vec:
    return tuple(Fraction(c) * x for x in v)


def abelian(n: int) -> TwoStepNilpotent:
    """Abelian model: every bracket vanishes and z⁺ is the whole algebra."""
    return TwoStepNilpotent(n, tuple(range(n)), {}, tuple(f"x{i + 1}" for i in range(n)), "abelian")


def heisenberg(n: int = 1) -> TwoStepNilpotent:
    """Heisenberg algebra on e_1..e_n, f_1..f_n, z with [e_i, f_i] = z."""
    dim = 2 * n + 1
    z = tuple(1 if k == dim - 1 else 0 for k in range(dim))
    table = {(i, n + i): z for i in range(n)}
    names = tuple(f"e{i + 1}" for i in range(n)) + tuple(f"f{i + 1}" for i in range(n)) + ("z",)
    return TwoStepNilpotent(dim, (dim - 1,), table, names, "heisenberg")


# quaternion units 1, i, j, k: products e_a e_b = sign * e_c
_QMUL = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternionic(m: int = 1) -> TwoStepNilpotent:
    """Quaternionic model: h̄ = H^m, z⁺ = Im H, [x, y] = Im Σ conj(x_i) y_i."""
    dim = 4 * m + 3
    center = (4 * m, 4 * m + 1, 4 * m + 2)
    table: dict = {}
    for q in range(m):
        for a in range(4):
            for b in range(4):
                i, j = 4 * q + a, 4 * q + b
                if i >= j:
                    continue
                # [e_a, e_b] = Im(conj(e_a) e_b); conj flips the imaginary units
                sign_a = 1 if a == 0 else -1
                s, c = _QMUL[(a, b)]
                if c == 0:
                    continue
                v = [0] * dim
                v[4 * m + c - 1] = sign_a * s
                table[(i, j)] = tuple(v)
    names = tuple(f"q{q + 1}{u}" for q in range(m) for u in ("r", "i", "j", "k")) + ("zi", "zj", "zk")
    return TwoStepNilpotent(dim, center, table, names, "quaternionic")


MODELS = {"abelian": abelian, "heisenberg": heisenberg, "quaternionic": quaternionic}


def chart_action(alg: TwoStepNilpotent, v: Sequence, x: Sequence) -> Vec:
    """The affine action v . x = x + ½[v, x] + v."""
    return _add(x, _scale(Fraction(1, 2), alg.bracket(v, x)), v)


def bch(alg: TwoStepNilpotent, v: Sequence, w: Sequence) -> Vec:
    """Group law in exponential coordinates: v + w + ½[v, w]."""
    return _add(v, w, _scale(Fraction(1, 2), alg.bracket(v, w)))


def solve_chart_fixpoint(alg: TwoStepNilpotent, v: Sequence) -> Vec:
    """The unique x with x + ½[v, x] + v = 0.

    Off the center the equation reads x̄ + v̄ = 0; on the center it reads
    x̃ + ½[v̄, x̄] + ṽ = 0, which is solved once x̄ is known.
    """
    v = vec(v)
    v_bar, v_til = alg.split(v)
    x_bar = _scale(-1, v_bar)
    x_til = _add(_scale(-1, v_til), _scale(Fraction(-1, 2), alg.bracket(v_bar, x_bar)))
    return _add(x_bar, x_til)


@dataclass(frozen=True)
class WitnessEntry:
    k: int
    v: Vec
    x: Vec
    norm_x: Fraction
    source: tuple[Vec, Vec]   # half-line [x_k, ξ)
    image: tuple[Vec, Vec]    # half-line [v_k . x_k, ξ)

    def to_dict(self) -> dict:
        s = lambda xs: [str(c) for c in xs]  # noqa: E731
        return {
            "k": self.k,
            "v_k": s(self.v),
            "x_k": s(self.x),
            "norm_x_k": str(self.norm_x),
            "source_halfline": {"base": s(self.source[0]), "direction": s(self.source[1])},
            "image_halfline": {"base": s(self.image[0]), "direction": s(self.image[1])},
        }


@dataclass(frozen=True)
class Witness:
    model: str
    direction: Vec
    entries: tuple[WitnessEntry, ...]
    notes: tuple[str, ...]

    @property
    def images_constant(self) -> bool:
        zero = tuple(Fraction(0) for _ in self.direction)
        return all(e.image == (zero, self.direction) for e in self.entries)

    @property
    def diverging(self) -> bool:
        norms = [e.norm_x for e in self.entries]
        return all(a < b for a, b in zip(norms, norms[1:]))

    def to_dict(self) -> dict:
        return {
            "schema": "rankone-witness",
            "schema_version": 1,
            "model": self.model,
            "direction": [str(c) for c in self.direction],
            "entries": [e.to_dict() for e in self.entries],
            "images_constant": self.images_constant,
            "norms_increasing": self.diverging,
            "notes": list(self.notes),
        }


def nonequicontinuity_witness(alg: TwoStepNilpotent, v_seq: Sequence[Sequence],
                              xi: Sequence, ks: Sequence[int] | None = None) -> Witness:
    """Half-lines [x_k, ξ) that run off to infinity while their images stay [0, ξ).

    x_k solves v_k . x_k = 0, and because ξ is central, v_k . (x_k + tξ) = tξ
    for every t.  The direction is checked against -x_k/|x_k| on the last
    supplied index only.
    """
    xi = vec(xi)
    if not any(xi) or not alg.in_center(xi):
        raise DomainError("the direction must be a nonzero vector of z⁺")
    ks = list(ks) if ks is not None else list(range(1, len(v_seq) + 1))
    entries = []
    for k, v in zip(ks, v_seq):
        v = vec(v)
        x = solve_chart_fixpoint(alg, v)
        base = chart_action(alg, v, x)
        tip = chart_action(alg, v, _add(x, xi))
        direction = _add(tip, _scale(-1, base))
        entries.append(WitnessEntry(k, v, x, norm1(x), (x, xi), (base, direction)))
    if entries:
        last = entries[-1].x
        if any(last) and _positive_multiple(xi, _scale(-1, last)):
            raise DegenerateDirectionError("direction is collinear with -ξ_∞ on the supplied prefix")
    notes = (
        "ξ_∞ is approximated by the last supplied x_k/|x_k|; direction avoidance is checked there only",
        "the a_k factor is not modeled; it acts linearly and preserves z⁺-directions",
        "|·| is the sum of absolute values of coordinates",
    )
    return Witness(alg.model, xi, tuple(entries), notes)


def _positive_multiple(a: Vec, b: Vec) -> bool:
    ratio = None
    for x, y in zip(a, b):
        if (x == 0) != (y == 0):
            return False
        if x == 0:
            continue
        r = x / y
        if r <= 0 or (ratio is not None and r != ratio):
            return False
        ratio = r
    return ratio is not None
