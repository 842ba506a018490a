"""Human-facing root notation: ``3a+2b``, ``a1+2a2``, ``b1``.

Labels depend on the rank of the system:

* rank 1: ``a``
* rank 2: ``a`` and ``b`` (``α``/``β`` also accepted)
* rank >= 3: ``a1`` ... ``ar``; for the B, C and BC series the chain after
  the distinguished node may also be written ``b1`` ... ``b{r-1}``, with
  ``a`` naming node 0.
"""
from __future__ import annotations

import re

from .rootsystem import DomainError, Root, RootSystem

_GREEK = {"α": "a", "β": "b", "alpha": "a", "beta": "b"}
_EMPTY = {"", "∅", "none", "empty", "{}"}
_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*([A-Za-zαβ][A-Za-z]*\d*)")


def labels(sys: RootSystem) -> tuple[str, ...]:
    if sys.rank == 1:
        return ("a",)
    if sys.rank == 2:
        return ("a", "b")
    return tuple(f"a{i + 1}" for i in range(sys.rank))


def _aliases(sys: RootSystem) -> dict[str, int]:
    table = {name: i for i, name in enumerate(labels(sys))}
    if sys.rank >= 3 and sys.series in ("B", "C", "BC"):
        table["a"] = 0
        for i in range(1, sys.rank):
            table[f"b{i}"] = i
    return table


def format_root(sys: RootSystem, root: Root) -> str:
    names = labels(sys)
    parts = []
    for c, name in zip(root, names):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign}{mag}{name}")
    if not parts:
        return "0"
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def parse_root(sys: RootSystem, text: str) -> Root:
    """Parse coefficient notation into a coefficient vector and check it is a root."""
    src = text.strip()
    for g, latin in _GREEK.items():
        src = src.replace(g, latin)
    if not src:
        raise DomainError("empty root expression")
    table = _aliases(sys)
    coeffs = [0] * sys.rank
    pos = 0
    compact = src.replace(" ", "")
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if not m or m.end() == pos:
            raise DomainError(f"cannot parse root expression {text!r}")
        sign, mag, name = m.groups()
        if pos > 0 and not sign:
            raise DomainError(f"missing '+' or '-' in {text!r}")
        if name not in table:
            raise DomainError(f"unknown simple root label {name!r} for {sys.name}")
        c = int(mag) if mag else 1
        coeffs[table[name]] += -c if sign == "-" else c
        pos = m.end()
    root = tuple(coeffs)
    if not sys.is_root(root):
        raise DomainError(f"{text!r} is not a root of {sys.name}")
    return root


def parse_index_set(sys: RootSystem, text: str) -> frozenset[int]:
    """Parse a comma-separated set of simple-root labels, e.g. ``b`` or ``a1,a3`` or ``∅``."""
    src = text.strip()
    if src.lower() in _EMPTY:
        return frozenset()
    out = set()
    for item in src.strip("{}").split(","):
        root = parse_root(sys, item)
        try:
            out.add(sys.simple_index(root))
        except DomainError:
            raise DomainError(f"{item.strip()!r} is not a simple root") from None
    return frozenset(out)


def parse_root_list(sys: RootSystem, text: str) -> tuple[Root, ...]:
    return tuple(parse_root(sys, item) for item in text.split(",") if item.strip())


def format_index_set(sys: RootSystem, indices) -> str:
    names = labels(sys)
    if not indices:
        return "∅"
    return "{" + ",".join(names[i] for i in sorted(indices)) + "}"
