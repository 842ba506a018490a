from __future__ import annotations

import json

import pytest

from goldens import GOLDEN, shape
from parabolic_sliding.prover import (
    Budget,
    Problem,
    SearchFailure,
    certificate,
    derive,
    sweep,
    sweep_instances,
    sweep_table,
)
from parabolic_sliding.rootsystem import DomainError
from parabolic_sliding.verify import verify_certificate


@pytest.mark.parametrize("key", list(GOLDEN), ids=str)
def test_golden_shapes(key):
    der = derive(Problem(*key))
    assert not der.fallback_used
    assert shape(der.root) == GOLDEN[key]
    assert verify_certificate(certificate(Problem(*key), der))


@pytest.mark.parametrize("key", [("G", 2, (), ((3, 2),)), ("C", 2, (1,), ((1, 2),)),
                                 ("A", 2, (), ((1, 1),)), ("G", 2, (0,), ((1, 1),))], ids=str)
def test_generic_search_alone(key):
    der = derive(Problem(*key), playbook=False)
    assert der.fallback_used
    assert verify_certificate(certificate(Problem(*key), der))


def test_without_induction_uses_goal_leaves():
    p = Problem("A", 3, (0,), ((0, 1, 1),))
    der = derive(p, induction=False)
    assert der.root.judgment == {"kind": "GoalOutsidePhiMax", "root": [0, 1, 1]}
    assert verify_certificate(certificate(p, der))


def test_certificate_is_deterministic():
    p = Problem("F", 4, (1, 2), ((1, 2, 3, 2),))
    a = json.dumps(certificate(p, derive(p)), sort_keys=True)
    b = json.dumps(certificate(p, derive(p)), sort_keys=True)
    assert a == b


def test_certificate_layout():
    p = Problem("C", 2, (1,), ((1, 2),))
    cert = certificate(p, derive(p))
    assert cert["schema"] == "parabolic-sliding-certificate"
    assert cert["problem"] == {"series": "C", "rank": 2, "lambda": [1], "er": [[1, 2]]}
    assert "parabolic-subvariety-induction" in cert["ledger"]
    assert cert["metadata"]["size"] == 3 and cert["metadata"]["depth"] == 3


def test_budget_exhaustion():
    with pytest.raises(SearchFailure) as info:
        derive(Problem("G", 2, (0,), ((1, 1),)), Budget(max_steps=2))
    assert info.value.frontier


def test_empty_range_rejected():
    with pytest.raises(DomainError):
        derive(Problem("A", 2, (), ()))


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv("PARABOLIC_SLIDING_MAX_STEPS", "17")
    assert Budget.from_env().max_steps == 17
    assert Budget.from_env(max_steps=5).max_steps == 5
    with pytest.raises(ValueError):
        Budget.from_env(max_seconds=0)


def test_sweep_rank_two():
    report = sweep(2)
    s = report["summary"]
    assert s["failures"] == 0
    assert s["instances"] == len(sweep_instances(2))
    assert "G2" in sweep_table(report)


def test_problem_round_trip():
    p = Problem("BC", 2, (1,), ((2, 2),))
    assert Problem.from_dict(p.to_dict()) == p


def test_rank_one_sweep_stops_at_base_case():
    report = sweep(1)
    assert report["summary"]["failures"] == 0
    assert all(row["size"] == 1 for row in report["instances"])


def test_g2_sweep_is_playbook_only():
    report = sweep(2, series=("G",))
    assert report["summary"]["failures"] == 0
    assert not any(row["fallback_used"] for row in report["instances"])
