from __future__ import annotations

import pytest

from parabolic_sliding.notation import format_root, parse_index_set, parse_root
from parabolic_sliding.rootsystem import DomainError, build_root_system


def test_round_trip_all_roots():
    for s, r in [("G", 2), ("B", 3), ("E", 6), ("BC", 1)]:
        rs = build_root_system(s, r)
        for x in rs.roots:
            assert parse_root(rs, format_root(rs, x)) == x


def test_greek_and_aliases():
    g2 = build_root_system("G", 2)
    assert parse_root(g2, "3α+2β") == (3, 2)
    assert parse_root(g2, " 3a + 2b ") == (3, 2)
    b3 = build_root_system("B", 3)
    assert parse_root(b3, "a+b1+b2") == (1, 1, 1)
    assert parse_root(b3, "a1+a2") == (1, 1, 0)


def test_index_sets():
    g2 = build_root_system("G", 2)
    assert parse_index_set(g2, "∅") == frozenset()
    assert parse_index_set(g2, "β") == {1}
    c3 = build_root_system("C", 3)
    assert parse_index_set(c3, "b1,b2") == {1, 2}


@pytest.mark.parametrize("text", ["4a+b", "a+c", "2", "a b", ""])
def test_bad_input(text):
    with pytest.raises(DomainError):
        parse_root(build_root_system("G", 2), text)


def test_index_set_rejects_non_simple():
    with pytest.raises(DomainError):
        parse_index_set(build_root_system("G", 2), "a+b")
