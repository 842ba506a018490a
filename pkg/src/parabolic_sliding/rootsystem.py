"""Root systems in simple-root coordinates, built from Cartan data.

A root is a tuple of integers giving its coefficients on the simple roots.
No inner product is stored: Cartan integers are read off root strings, so
every computation here is exact integer arithmetic.

Conventions
-----------
``cartan[i][j]`` is ``A_{a_i a_j} = 2<a_i, a_j> / <a_i, a_i>``, so the simple
reflection is ``s_i(x) = x - (sum_j x_j cartan[i][j]) a_i``.

For the B, C and BC series the distinguished end of the chain (the node
attached by the double bond) is index 0, followed by the rest of the chain.
G2 puts the short root at index 0.  A, D, E and F follow Bourbaki order.
"""
from __future__ import annotations

import json
from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

Root = tuple[int, ...]

SERIES = ("A", "B", "C", "D", "E", "F", "G", "BC")

# hard stop for the closure loop when fed a non-finite-type matrix
_MAX_ROOTS = 20000


class ClassificationError(ValueError):
    """Raised for a (series, rank) pair or Cartan matrix outside the finite classification."""


class DomainError(ValueError):
    """Raised when an argument falls outside an operation's domain."""


class InternalConsistencyError(RuntimeError):
    """Raised when an internal invariant is violated; indicates a bug."""


# ---------------------------------------------------------------------------
# vector helpers

def add(x: Root, y: Root) -> Root:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Root, y: Root) -> Root:
    return tuple(a - b for a, b in zip(x, y))


def scale(c: int, x: Root) -> Root:
    return tuple(c * a for a in x)


def neg(x: Root) -> Root:
    return tuple(-a for a in x)


def unit(rank: int, i: int) -> Root:
    return tuple(1 if j == i else 0 for j in range(rank))


def support(x: Root) -> frozenset[int]:
    return frozenset(i for i, c in enumerate(x) if c)


def is_positive(x: Root) -> bool:
    return any(x) and all(c >= 0 for c in x)


def degree(root: Root) -> int:
    """Sum of the simple-root coefficients of a positive root."""
    if not is_positive(root):
        raise DomainError(f"degree is defined on positive roots, got {root}")
    return sum(root)


def proportion(alpha: Root, lam: Root) -> Fraction | None:
    """Return c with lam == c * alpha, or None when the vectors are not proportional."""
    c = None
    for a, b in zip(alpha, lam):
        if a == 0:
            if b != 0:
                return None
            continue
        ratio = Fraction(b, a)
        if c is None:
            c = ratio
        elif ratio != c:
            return None
    return c


# ---------------------------------------------------------------------------
# Cartan matrices

def _chain(rank: int) -> list[list[int]]:
    m = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        m[i][i] = 2
        if i + 1 < rank:
            m[i][i + 1] = m[i + 1][i] = -1
    return m


def standard_cartan(series: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix of a classification entry, in the index conventions above."""
    series = series.upper()
    if series not in SERIES or not isinstance(rank, int) or rank < 1:
        raise ClassificationError(f"unknown classification entry {series}{rank}")
    if series == "A":
        m = _chain(rank)
    elif series in ("B", "BC"):
        if series == "B" and rank < 2:
            raise ClassificationError("B_r needs r >= 2")
        m = _chain(rank)
        if rank >= 2:
            m[0][1], m[1][0] = -2, -1
    elif series == "C":
        if rank < 2:
            raise ClassificationError("C_r needs r >= 2")
        m = _chain(rank)
        m[0][1], m[1][0] = -1, -2
    elif series == "D":
        if rank < 4:
            raise ClassificationError("D_r needs r >= 4")
        m = _chain(rank)
        m[rank - 2][rank - 1] = m[rank - 1][rank - 2] = 0
        m[rank - 3][rank - 1] = m[rank - 1][rank - 3] = -1
    elif series == "E":
        if rank not in (6, 7, 8):
            raise ClassificationError("E_r needs r in {6, 7, 8}")
        m = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
        edges = [(0, 2), (1, 3), (2, 3)] + [(k, k + 1) for k in range(3, rank - 1)]
        for i, j in edges:
            m[i][j] = m[j][i] = -1
    elif series == "F":
        if rank != 4:
            raise ClassificationError("F_r needs r = 4")
        m = _chain(4)
        m[1][2], m[2][1] = -1, -2
    else:  # G
        if rank != 2:
            raise ClassificationError("G_r needs r = 2")
        m = [[2, -3], [-1, 2]]
    return tuple(tuple(row) for row in m)


def validate_cartan(cartan: Sequence[Sequence[int]]) -> None:
    r = len(cartan)
    if r == 0 or any(len(row) != r for row in cartan):
        raise ClassificationError("Cartan matrix must be square and nonempty")
    for i in range(r):
        if cartan[i][i] != 2:
            raise ClassificationError("Cartan diagonal entries must be 2")
        for j in range(r):
            if i == j:
                continue
            if cartan[i][j] > 0:
                raise ClassificationError("off-diagonal Cartan entries must be <= 0")
            if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                raise ClassificationError("Cartan zero pattern must be symmetric")


def _reflect_simple(cartan, i: int, lam: Root) -> Root:
    a = sum(lam[j] * cartan[i][j] for j in range(len(lam)))
    return tuple(c - a if k == i else c for k, c in enumerate(lam))


def _close_reduced(cartan) -> set[Root]:
    """Positive roots by height, adding a_i to x whenever the a_i-string through x continues."""
    r = len(cartan)
    simple = [unit(r, i) for i in range(r)]
    known = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for lam in layer:
            for i in range(r):
                if lam == simple[i]:
                    continue
                p = 0
                mu = sub(lam, simple[i])
                while mu in known:
                    p += 1
                    mu = sub(mu, simple[i])
                a = sum(lam[j] * cartan[i][j] for j in range(r))
                if p - a > 0:
                    new = add(lam, simple[i])
                    if new not in known:
                        known.add(new)
                        nxt.append(new)
        if len(known) > _MAX_ROOTS:
            raise ClassificationError("Cartan matrix is not of finite type")
        layer = nxt
    return known


def _doubled_node(cartan) -> int:
    r = len(cartan)
    if r == 1:
        return 0
    for i in range(r):
        nbrs = [j for j in range(r) if j != i and cartan[i][j] != 0]
        if len(nbrs) == 1 and cartan[i][nbrs[0]] == -2:
            others = [cartan[a][b] for a in range(r) for b in range(r)
                      if a != b and cartan[a][b] != 0 and {a, b} != {i, nbrs[0]}]
            if all(v == -1 for v in others):
                return i
    raise ClassificationError("non-reduced systems must have a type B Cartan matrix")


def _orbit(cartan, start: Root) -> set[Root]:
    seen = {start}
    todo = deque([start])
    while todo:
        lam = todo.popleft()
        for i in range(len(cartan)):
            mu = _reflect_simple(cartan, i, lam)
            if mu not in seen:
                seen.add(mu)
                todo.append(mu)
    return seen


def identify_type(cartan: Sequence[Sequence[int]], reduced: bool = True) -> tuple[str, int]:
    """Name the connected Dynkin type of a Cartan matrix, e.g. ``("C", 2)``.

    Disconnected matrices raise :class:`ClassificationError`.  Rank-2 double
    bonds are called B when node 0 is short and C when it is long.
    """
    validate_cartan(cartan)
    r = len(cartan)
    adj = {i: [j for j in range(r) if j != i and cartan[i][j]] for i in range(r)}
    seen, todo = {0}, [0]
    while todo:
        for j in adj[todo.pop()]:
            if j not in seen:
                seen.add(j)
                todo.append(j)
    if len(seen) != r:
        raise ClassificationError("Cartan matrix is not connected")
    if not reduced:
        _doubled_node(cartan)
        return ("BC", r)
    if r == 1:
        return ("A", 1)
    bonds = {(i, j): cartan[i][j] * cartan[j][i] for i in range(r) for j in adj[i] if i < j}
    if sum(bonds.values()) > 3 * (r - 1) or len(bonds) != r - 1:
        raise ClassificationError("Cartan matrix is not of finite type")
    mult = sorted(set(bonds.values()))
    degrees = sorted(len(v) for v in adj.values())
    if mult == [3]:
        return ("G", 2)
    if mult == [1]:
        if degrees[-1] <= 2:
            return ("A", r)
        branch = next(i for i in range(r) if len(adj[i]) == 3)
        arms = []
        for start in adj[branch]:
            length, prev, cur = 1, branch, start
            while len(adj[cur]) == 2:
                prev, cur = cur, next(j for j in adj[cur] if j != prev)
                length += 1
            arms.append(length)
        arms.sort()
        if arms[:2] == [1, 1]:
            return ("D", r)
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return ("E", r)
        raise ClassificationError("Cartan matrix is not of finite type")
    (i, j), = [(a, b) for (a, b), m in bonds.items() if m == 2]
    if r == 4 and len(adj[i]) == 2 and len(adj[j]) == 2:
        return ("F", 4)
    # the double bond sits at one end of a chain; the leaf there decides B vs C
    leaf = i if len(adj[i]) == 1 else j
    if r == 2:
        leaf = 0
    other = j if leaf == i else i
    leaf_short = cartan[leaf][other] == -2
    return ("B", r) if leaf_short else ("C", r)


# ---------------------------------------------------------------------------

class RootSystem:
    """A finite (possibly non-reduced) root system with its positive roots enumerated."""

    def __init__(self, cartan: Sequence[Sequence[int]], positive_roots: Iterable[Root],
                 reduced: bool, series: str | None = None):
        validate_cartan(cartan)
        self.cartan: tuple[tuple[int, ...], ...] = tuple(tuple(int(v) for v in row) for row in cartan)
        self.rank = len(self.cartan)
        self.positive_roots: tuple[Root, ...] = tuple(sorted(tuple(r) for r in positive_roots))
        self.reduced = bool(reduced)
        if series is None:
            try:
                series = identify_type(self.cartan, self.reduced)[0]
            except ClassificationError:
                series = None
        self.series = series
        self._positive = frozenset(self.positive_roots)
        self._roots = self._positive | frozenset(neg(x) for x in self.positive_roots)
        self._cartan_cache: dict[tuple[Root, Root], int] = {}
        self._phi_max: tuple[Root, ...] | None = None

    @classmethod
    def from_cartan(cls, cartan, reduced: bool = True, series: str | None = None) -> "RootSystem":
        validate_cartan(cartan)
        roots = _close_reduced(cartan)
        if not reduced:
            d = _doubled_node(cartan)
            short = _orbit(cartan, unit(len(cartan), d))
            roots |= {scale(2, x) for x in short if is_positive(x)}
        return cls(cartan, roots, reduced, series)

    # -- basic queries
    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}" if self.series else f"rank{self.rank}"

    @property
    def roots(self) -> tuple[Root, ...]:
        return tuple(sorted(self._roots))

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(unit(self.rank, i) for i in range(self.rank))

    def is_root(self, x: Root) -> bool:
        return tuple(x) in self._roots

    def is_positive_root(self, x: Root) -> bool:
        return tuple(x) in self._positive

    def simple_index(self, alpha: Root | int) -> int:
        if isinstance(alpha, int):
            if not 0 <= alpha < self.rank:
                raise DomainError(f"simple index {alpha} out of range")
            return alpha
        alpha = tuple(alpha)
        if len(alpha) == self.rank and sum(alpha) == 1 and all(c in (0, 1) for c in alpha):
            return alpha.index(1)
        raise DomainError(f"{alpha} is not a simple root")

    @property
    def dynkin_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i in range(self.rank) for j in range(i + 1, self.rank)
                     if self.cartan[i][j] != 0)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.rank) if j != i and self.cartan[i][j] != 0)

    @property
    def phi_max(self) -> tuple[Root, ...]:
        if self._phi_max is None:
            self._phi_max = tuple(x for x in self.positive_roots if all(c >= 1 for c in x))
        return self._phi_max

    @property
    def highest_root(self) -> Root:
        return max(self.positive_roots, key=lambda x: (sum(x), x))

    @property
    def key(self) -> tuple:
        return (self.cartan, self.reduced)

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSystem) and self.key == other.key \
            and self.positive_roots == other.positive_roots

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"RootSystem({self.name}, {len(self.positive_roots)} positive roots)"

    # -- serialization
    def to_dict(self) -> dict:
        return {
            "series": self.series,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "positive_roots": [list(x) for x in self.positive_roots],
            "reduced": self.reduced,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RootSystem":
        """Rebuild from a dict and check the stored roots against a fresh enumeration."""
        built = cls.from_cartan(data["cartan"], data["reduced"], data.get("series"))
        stored = tuple(sorted(tuple(x) for x in data["positive_roots"]))
        if stored != built.positive_roots or data.get("rank", built.rank) != built.rank:
            raise ClassificationError("stored positive roots disagree with the Cartan matrix")
        return built

    @classmethod
    def from_json(cls, text: str) -> "RootSystem":
        return cls.from_dict(json.loads(text))


def build_root_system(series: str, rank: int) -> RootSystem:
    """Root system of a classification entry: A_r, B_r, C_r, D_r, E_6-8, F_4, G_2 or BC_r."""
    series = series.upper()
    cartan = standard_cartan(series, rank)
    return RootSystem.from_cartan(cartan, reduced=(series != "BC"), series=series)


# ---------------------------------------------------------------------------
# root arithmetic

def _check_root(sys: RootSystem, *xs: Root) -> None:
    for x in xs:
        if not sys.is_root(x):
            raise DomainError(f"{tuple(x)} is not a root of {sys.name}")


def root_string(sys: RootSystem, alpha: Root, lam: Root) -> tuple[int, int]:
    """Extents (p, q) of the unbroken alpha-string lam - p*alpha, ..., lam + q*alpha."""
    alpha, lam = tuple(alpha), tuple(lam)
    _check_root(sys, alpha, lam)
    if proportion(alpha, lam) is not None:
        raise DomainError("root strings are taken through roots not proportional to the pivot")
    p = 0
    while sys.is_root(sub(lam, scale(p + 1, alpha))):
        p += 1
    q = 0
    while sys.is_root(add(lam, scale(q + 1, alpha))):
        q += 1
    return p, q


def cartan_integer(sys: RootSystem, alpha: Root, lam: Root) -> int:
    """The integer A_{alpha lam} = 2<alpha, lam>/<alpha, alpha>, computed as p - q."""
    alpha, lam = tuple(alpha), tuple(lam)
    cached = sys._cartan_cache.get((alpha, lam))
    if cached is not None:
        return cached
    _check_root(sys, alpha, lam)
    c = proportion(alpha, lam)
    if c is not None:
        value = 2 * c
        if value.denominator != 1:
            raise InternalConsistencyError(f"non-integral Cartan integer for {alpha}, {lam}")
        value = int(value)
    else:
        p, q = root_string(sys, alpha, lam)
        value = p - q
    sys._cartan_cache[(alpha, lam)] = value
    return value


def weyl_reflect(sys: RootSystem, alpha: Root, lam: Root) -> Root:
    """Reflection of lam in the hyperplane of alpha: lam - A_{alpha lam} alpha."""
    alpha, lam = tuple(alpha), tuple(lam)
    out = sub(lam, scale(cartan_integer(sys, alpha, lam), alpha))
    if not sys.is_root(out):
        raise InternalConsistencyError(f"reflection of {lam} in {alpha} left the root system")
    return out


def phi_max(sys: RootSystem) -> tuple[Root, ...]:
    """Positive roots in which every simple root occurs with positive coefficient."""
    return sys.phi_max


def is_leaf(sys: RootSystem, alpha: Root | int) -> bool:
    """True when the simple root is a valence-one vertex of the Dynkin graph.

    A rank-one system has a single vertex of valence 0, so the answer there is False.
    """
    i = sys.simple_index(alpha)
    return len(sys.neighbors(i)) == 1
