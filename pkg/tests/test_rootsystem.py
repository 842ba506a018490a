from __future__ import annotations

import json

import pytest

from oracles import G2_PHI_MAX, all_systems, classification_count, closure_positive_roots
from parabolic_sliding.rootsystem import (
    ClassificationError,
    DomainError,
    RootSystem,
    build_root_system,
    cartan_integer,
    degree,
    identify_type,
    is_leaf,
    phi_max,
    root_string,
    standard_cartan,
    weyl_reflect,
)


@pytest.mark.parametrize("series,rank", all_systems(6))
def test_enumeration_matches_closure_oracle(series, rank):
    rs = build_root_system(series, rank)
    doubled = 0 if series == "BC" else None
    assert set(rs.positive_roots) == closure_positive_roots(rs.cartan, doubled)
    assert len(rs.positive_roots) == classification_count(series, rank)
    assert list(rs.positive_roots) == sorted(rs.positive_roots)


def test_small_examples():
    assert build_root_system("A", 1).positive_roots == ((1,),)
    g2 = build_root_system("G", 2)
    assert set(g2.positive_roots) == {(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)}
    assert len(build_root_system("B", 2).positive_roots) == 4
    assert not build_root_system("BC", 2).reduced
    assert build_root_system("B", 2).reduced


@pytest.mark.parametrize("series,rank", [("A", 0), ("B", 1), ("C", 1), ("D", 3), ("E", 5),
                                         ("E", 9), ("F", 3), ("G", 3), ("Q", 2)])
def test_invalid_entries(series, rank):
    with pytest.raises(ClassificationError):
        build_root_system(series, rank)


def test_non_finite_cartan_rejected():
    # affine A1
    with pytest.raises(ClassificationError):
        RootSystem.from_cartan([[2, -2], [-2, 2]])
    with pytest.raises(ClassificationError):
        RootSystem.from_cartan([[2, 1], [1, 2]])


def test_cartan_integers_g2():
    g2 = build_root_system("G", 2)
    a, b = (1, 0), (0, 1)
    assert cartan_integer(g2, a, a) == 2
    assert cartan_integer(g2, a, b) == -3
    assert cartan_integer(g2, b, a) == -1


def test_cartan_integer_rejects_non_roots():
    g2 = build_root_system("G", 2)
    with pytest.raises(DomainError):
        cartan_integer(g2, (1, 0), (4, 1))


def test_weyl_examples():
    g2 = build_root_system("G", 2)
    assert weyl_reflect(g2, (1, 0), (1, 0)) == (-1, 0)
    # rank-2 maximal parabolic with a simple bond: ρ_μ'(μ' + α) = α
    a2 = build_root_system("A", 2)
    assert weyl_reflect(a2, (0, 1), (1, 1)) == (1, 0)
    c2 = build_root_system("C", 2)
    assert weyl_reflect(c2, (0, 1), (1, 2)) == (1, 0)


@pytest.mark.parametrize("r", range(3, 7))
def test_b_series_reflection_of_lambda1(r):
    rs = build_root_system("B", r)
    lam1 = (2,) + (1,) * (r - 1)
    pivot = tuple(1 if k == r - 1 else 0 for k in range(r))
    expected = (2,) + (1,) * (r - 2) + (0,)
    assert weyl_reflect(rs, pivot, lam1) == expected


@pytest.mark.parametrize("r", range(3, 7))
def test_c_series_reflection_of_lambda0(r):
    rs = build_root_system("C", r)
    pivot = tuple(1 if k == r - 1 else 0 for k in range(r))
    assert weyl_reflect(rs, pivot, (1,) * r) == (1,) * (r - 1) + (0,)


def test_root_strings():
    a2 = build_root_system("A", 2)
    assert root_string(a2, (0, 1), (1, 0)) == (0, 1)
    g2 = build_root_system("G", 2)
    assert root_string(g2, (1, 0), (0, 1)) == (0, 3)
    with pytest.raises(DomainError):
        root_string(g2, (1, 0), (1, 0))


def test_phi_max_examples():
    assert set(phi_max(build_root_system("G", 2))) == G2_PHI_MAX
    assert set(phi_max(build_root_system("C", 2))) == {(1, 1), (1, 2)}
    assert set(phi_max(build_root_system("A", 2))) == {(1, 1)}


def test_phi_max_empty_for_product():
    rs = RootSystem.from_cartan([[2, 0], [0, 2]])
    assert phi_max(rs) == ()


def test_degree():
    assert degree((0, 1)) == 1
    assert degree((3, 2)) == 5
    assert degree((1, 2)) == 3
    with pytest.raises(DomainError):
        degree((-1, 0))


def test_is_leaf():
    assert not is_leaf(build_root_system("A", 1), (1,))
    g2 = build_root_system("G", 2)
    assert is_leaf(g2, (1, 0)) and is_leaf(g2, (0, 1))
    d4 = build_root_system("D", 4)
    assert not is_leaf(d4, (0, 1, 0, 0))
    assert is_leaf(d4, (1, 0, 0, 0))
    with pytest.raises(DomainError):
        is_leaf(g2, (1, 1))


@pytest.mark.parametrize("series,rank", all_systems(8))
def test_identify_type_round_trip(series, rank):
    cartan = standard_cartan(series, rank)
    assert identify_type(cartan, series != "BC") == (series, rank)


def test_b_and_c_rank2_distinguished():
    assert identify_type(standard_cartan("B", 2)) == ("B", 2)
    assert identify_type(standard_cartan("C", 2)) == ("C", 2)


@pytest.mark.parametrize("series,rank", [("G", 2), ("BC", 3), ("E", 6), ("F", 4)])
def test_json_round_trip(series, rank):
    rs = build_root_system(series, rank)
    text = rs.to_json()
    back = RootSystem.from_json(text)
    assert back == rs
    assert back.to_json() == text
    assert json.loads(text)["reduced"] == (series != "BC")


def test_from_dict_rejects_tampered_roots():
    data = build_root_system("A", 2).to_dict()
    data["positive_roots"].append([2, 2])
    with pytest.raises(ClassificationError):
        RootSystem.from_dict(data)
