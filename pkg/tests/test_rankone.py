from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parabolic_sliding.rankone import (
    DegenerateDirectionError,
    TwoStepNilpotent,
    abelian,
    bch,
    chart_action,
    heisenberg,
    nonequicontinuity_witness,
    quaternionic,
    solve_chart_fixpoint,
)
from parabolic_sliding.rootsystem import DomainError

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def vectors(dim):
    return st.lists(rationals, min_size=dim, max_size=dim).map(tuple)


ALGS = [abelian(3), heisenberg(1), heisenberg(2), quaternionic(1)]


@pytest.mark.parametrize("alg", ALGS, ids=lambda a: f"{a.model}{a.dim}")
def test_fixpoint_and_group_law(alg):
    @settings(max_examples=60, deadline=None)
    @given(vectors(alg.dim), vectors(alg.dim), vectors(alg.dim))
    def run(u, v, x):
        zero = tuple(Fraction(0) for _ in range(alg.dim))
        assert chart_action(alg, v, solve_chart_fixpoint(alg, v)) == zero
        # the action is a group action for the BCH product
        assert chart_action(alg, u, chart_action(alg, v, x)) == chart_action(alg, bch(alg, u, v), x)
        assert alg.bracket(u, v) == tuple(-c for c in alg.bracket(v, u))

    run()


def test_central_directions_are_rigid():
    alg = heisenberg(1)
    z = alg.basis(2)
    for v in [(1, 0, 0), (3, -2, 5), (Fraction(1, 3), 7, 0)]:
        x = solve_chart_fixpoint(alg, v)
        for t in (0, 1, Fraction(5, 2)):
            moved = chart_action(alg, v, tuple(a + t * b for a, b in zip(x, z)))
            assert moved == tuple(t * b for b in z)


def test_heisenberg_bracket():
    alg = heisenberg(1)
    assert alg.bracket(alg.basis(0), alg.basis(1)) == alg.basis(2)
    assert alg.center_dim == 1


def test_quaternionic_bracket():
    alg = quaternionic(1)
    assert alg.center_dim == 3
    one, i, j = alg.basis(0), alg.basis(1), alg.basis(2)
    # Im(conj(1) i) = i and Im(conj(i) j) = -k
    assert alg.bracket(one, i) == alg.basis(4)
    assert alg.bracket(i, j) == tuple(-c for c in alg.basis(6))


def test_witness_heisenberg():
    alg = heisenberg(1)
    ks = [1, 2, 4, 8, 16]
    w = nonequicontinuity_witness(alg, [(k, 0, 0) for k in ks], alg.basis(2), ks)
    assert w.images_constant and w.diverging
    assert [e.norm_x for e in w.entries] == ks
    assert w.to_dict()["entries"][0]["x_k"] == ["-1", "0", "0"]


def test_witness_rejects_bad_direction():
    alg = heisenberg(1)
    with pytest.raises(DomainError):
        nonequicontinuity_witness(alg, [(1, 0, 0)], alg.basis(0))
    with pytest.raises(DomainError):
        nonequicontinuity_witness(alg, [(1, 0, 0)], (0, 0, 0))


def test_witness_degenerate_direction():
    alg = abelian(2)
    # x_k = (-k, 0), so ξ_∞ = (-1, 0) and the forbidden direction is (1, 0)
    with pytest.raises(DegenerateDirectionError):
        nonequicontinuity_witness(alg, [(k, 0) for k in (1, 2)], (1, 0))
    w = nonequicontinuity_witness(alg, [(k, 0) for k in (1, 2)], (-1, 0))
    assert w.images_constant


def test_invalid_tables():
    with pytest.raises(DomainError):
        TwoStepNilpotent(3, (2,), {(0, 1): (1, 0, 0)})
    with pytest.raises(DomainError):
        TwoStepNilpotent(3, (2,), {(1, 0): (0, 0, 1)})
    with pytest.raises(DomainError):
        heisenberg(1).index("w")
