from __future__ import annotations

import pytest

from parabolic_sliding import holonomy as H
from parabolic_sliding.holonomy import (
    LeviSlide,
    Restrict,
    RootRestrict,
    Sign,
    SignSplit,
    Status,
    TransverseSlide,
    VerticalSlide,
    Weyl,
    apply,
    descriptor_from_dict,
    goal_reached,
    initial_descriptor,
    op_from_dict,
    op_to_dict,
)
from parabolic_sliding.parabolic import make_context
from parabolic_sliding.rootsystem import DomainError, build_root_system


def desc(series, rank, lam, er):
    return initial_descriptor(make_context(build_root_system(series, rank), lam), er)


def rejects(d, op):
    with pytest.raises(H.RejectedOp) as info:
        apply(d, op)
    return info.value.clause


def test_initial_descriptor():
    d = desc("C", 2, {1}, [(1, 1)])
    assert d.essential_range == ((1, 1),)
    assert d.get((1, 0)) is Status.TRIVIAL
    assert d.get((0, 1)) is None
    with pytest.raises(DomainError):
        desc("C", 2, {1}, [(0, 1)])


def test_weyl_c2():
    d = desc("C", 2, {1}, [(1, 2)])
    (out,) = apply(d, Weyl((0, 1)))
    assert out.essential_range == ((1, 0),)
    (back,) = apply(out, Weyl((0, 1)))
    assert back == d


def test_weyl_rejects_pivot_outside():
    d = desc("C", 2, {1}, [(1, 2)])
    assert rejects(d, Weyl((1, 0))) == H.PIVOT_NOT_IN_LAMBDA_PLUS


def test_weyl_flips_signs():
    d = desc("G", 2, {0}, [(1, 1)])
    up, down = apply(d, SignSplit((1, 0)))
    (w,) = apply(up, Weyl((1, 0)))
    assert w.sign_map == {(1, 0): Sign.ABOVE}


def test_transverse_g2_empty_lambda():
    d = desc("G", 2, (), [(3, 2)])
    (out,) = apply(d, TransverseSlide((0, 1), (3, 1)))
    assert out.get((3, 1)) is Status.UNBOUNDED
    assert out.get((3, 2)) is Status.UNBOUNDED


def test_transverse_rejections():
    g = desc("G", 2, {1}, [(3, 2)])
    assert rejects(g, TransverseSlide((1, 0), (2, 2))) in (H.TRANSVERSE_NOT_ADMISSIBLE,
                                                           H.NOT_POSITIVE_ROOT)
    assert rejects(g, TransverseSlide((0, 1), (3, 1))) == H.NOT_SIMPLE_OUTSIDE_LAMBDA
    a = desc("A", 3, (), [(1, 1, 1)])
    assert rejects(a, TransverseSlide((1, 0, 0), (1, 1, 0))) == H.SOURCE_NOT_UNBOUNDED


def test_signsplit_and_vertical():
    d = desc("G", 2, {0}, [(1, 1)])
    assert rejects(d, VerticalSlide((1, 0), "up", (0, 1))) == H.SIGN_MISSING
    up, down = apply(d, SignSplit((1, 0)))
    assert up.sign_map[(1, 0)] is Sign.BELOW and down.sign_map[(1, 0)] is Sign.ABOVE
    assert rejects(up, SignSplit((1, 0))) == H.SIGN_ALREADY_SET
    (v,) = apply(up, VerticalSlide((1, 0), "up", (0, 1)))
    assert v.get((0, 1)) is Status.UNBOUNDED
    assert rejects(up, VerticalSlide((1, 0), "down", (2, 1))) == H.SIGN_MISSING
    (w,) = apply(down, VerticalSlide((1, 0), "down", (2, 1)))
    assert w.get((2, 1)) is Status.UNBOUNDED
    assert rejects(up, VerticalSlide((1, 0), "sideways", (0, 1))) == H.BAD_DIRECTION


def test_contamination_marks_maybe():
    d = desc("G", 2, {0}, [(1, 1), (3, 2)])
    up, _ = apply(d, SignSplit((1, 0)))
    (v,) = apply(up, VerticalSlide((1, 0), "up", (0, 1)))
    # (3,2) - (1,0) = (2,2) is not a root, so nothing to contaminate from it
    assert v.get((3, 2)) is Status.UNBOUNDED
    assert v.maybe_roots == ()
    d2 = desc("G", 2, {0}, [(3, 1)])
    _, down = apply(d2, SignSplit((1, 0)))
    assert rejects(down, VerticalSlide((1, 0), "down", (2, 1))) == H.SOURCE_NOT_UNBOUNDED


def test_levi_slide():
    d = desc("G", 2, {1}, [(2, 1)])
    kids = apply(d, LeviSlide((1, 0), ((1, 0), (1, 1))))
    assert len(kids) == 2
    assert kids[0].essential_range == ((1, 0),)
    assert kids[1].essential_range == ((1, 1),)
    assert set(kids[0].maybe_roots) == set(d.ctx.nilradical) - {(1, 0)}
    assert rejects(d, LeviSlide((1, 0), ((1, 0), (2, 1)))) == H.LEVI_TARGETS
    assert rejects(desc("G", 2, {1}, [(1, 1)]), LeviSlide((1, 0), ((1, 0), (1, 1)))) \
        == H.LEVI_SOURCE_MISSING
    assert rejects(desc("G", 2, {0}, [(1, 1)]), LeviSlide((0, 1), ((0, 1), (1, 1)))) \
        == H.NOT_G2_LONG_PARABOLIC


def test_restrict():
    d = desc("C", 3, {1, 2}, [(1, 2, 0)])
    (out,) = apply(d, Restrict((0, 1)))
    assert out.ctx.rank == 2 and out.essential_range == ((1, 2),)
    assert rejects(d, Restrict((1,))) == H.PSI_INSIDE_LAMBDA
    assert rejects(d, Restrict((0, 1, 2))) == H.PSI_NOT_PROPER
    assert rejects(d, Restrict((0, 2))) == H.NO_ESSENTIAL_ROOT_ON_PSI


def test_root_restrict():
    d = desc("B", 2, {1}, [(2, 1)])
    (out,) = apply(d, RootRestrict((2, 1)))
    assert out.ctx.rank == 1 and out.essential_range
    assert rejects(d, RootRestrict((1, 1))) == H.ROOT_NOT_UNBOUNDED
    two = desc("B", 2, {1}, [(2, 1), (1, 1)])
    assert rejects(two, RootRestrict((2, 1))) == H.OTHERS_NOT_TRIVIAL


def test_malformed_params_are_rejections():
    d = desc("C", 2, {1}, [(1, 2)])
    assert rejects(d, Weyl((5, 5))) in (H.PIVOT_NOT_IN_LAMBDA_PLUS, H.NOT_POSITIVE_ROOT)
    with pytest.raises(H.RejectedOp):
        op_from_dict({"kind": "Teleport", "params": {}})
    with pytest.raises(H.RejectedOp):
        op_from_dict({"kind": "Weyl", "params": {}})


def test_goal_reached():
    # Φ⁺_max is the full-support roots, so (0,1,1) already sits below it
    assert goal_reached(desc("A", 3, {0}, [(0, 1, 1)])) == (0, 1, 1)
    assert goal_reached(desc("A", 3, {0}, [(1, 1, 1)])) is None


def test_serialization_round_trips():
    d = desc("G", 2, {0}, [(1, 1)])
    up, _ = apply(d, SignSplit((1, 0)))
    assert descriptor_from_dict(up.to_dict()) == up
    for op in (Weyl((0, 1)), SignSplit((1, 0)), LeviSlide((1, 0), ((1, 0), (1, 1))),
               VerticalSlide((1, 0), "up", (0, 1)), Restrict((0,)), RootRestrict((1, 1))):
        assert op_from_dict(op_to_dict(op)) == op


def test_judgments():
    d = desc("G", 2, {0}, [(1, 1)])
    with pytest.raises(H.RejectedOp) as info:
        H.check_judgment(d, {"kind": H.RANK_ONE})
    assert info.value.clause == H.NOT_RANK_ONE
    with pytest.raises(H.RejectedOp) as info:
        H.check_judgment(d, {"kind": H.GOAL, "root": [1, 1]})
    assert info.value.clause == H.GOAL_INSIDE_PHI_MAX
    with pytest.raises(H.RejectedOp) as info:
        H.check_judgment(d, {"kind": H.GOAL, "root": [2, 1]})
    assert info.value.clause == H.CERTAINTY_REQUIRED


def test_assumptions():
    d = desc("BC", 2, (), [(1, 1)])
    assert H.BRACKET_NONDEGENERACY in H.assumptions_for(d, TransverseSlide((1, 0), (0, 1)))
    r = desc("B", 2, (), [(1, 1)])
    assert H.BRACKET_NONDEGENERACY not in H.assumptions_for(r, TransverseSlide((1, 0), (0, 1)))
    assert H.SUBVARIETY_INDUCTION in H.assumptions_for(r, Restrict((0,)))
    assert H.RANK_ONE_NONEQUICONTINUITY in H.assumptions_for(r, None, {"kind": H.RANK_ONE})
