"""Symbolic rewrite calculus on holonomy descriptors.

A descriptor records, for each nilradical root λ, what is known about the
component sequence Y_k^λ (Trivial, Bounded, Unbounded, or Maybe when the
answer is unknown), plus sign knowledge on functionals μ(Z_k) of the
abelian part.  Admissible operations rewrite descriptors; each op checks
its own preconditions and raises :class:`RejectedOp` naming the failed
clause.

Reading of Maybe: an entry marked Maybe is bounded or unbounded.  If it is
unbounded and outside Φ⁺_max the degree-reduction goal already holds for
the underlying sequence, so ops may treat Maybe entries as bounded when
checking their hypotheses.  Goals and terminal judgments, on the other
hand, need certain Unbounded entries.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .parabolic import (
    ParabolicContext,
    make_context,
    restrict,
    root_subsystem,
    transverse_slide_admissible,
)
from .rootsystem import (
    DomainError,
    InternalConsistencyError,
    Root,
    add,
    identify_type,
    ClassificationError,
    is_positive,
    neg,
    scale,
    sub,
    support,
    weyl_reflect,
)


class Status(str, enum.Enum):
    TRIVIAL = "Trivial"
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    MAYBE = "Maybe"


class Sign(str, enum.Enum):
    BELOW = "BoundedBelow"
    ABOVE = "BoundedAbove"

    def flipped(self) -> "Sign":
        return Sign.ABOVE if self is Sign.BELOW else Sign.BELOW


class RejectedOp(ValueError):
    """An admissible operation whose precondition fails; ``clause`` names the failed check."""

    def __init__(self, clause: str, detail: str = ""):
        super().__init__(f"{clause}: {detail}" if detail else clause)
        self.clause = clause
        self.detail = detail


# clause names, shared with the certificate verifier
PIVOT_NOT_IN_LAMBDA_PLUS = "pivot not in Λ⁺"
NOT_SIMPLE_OUTSIDE_LAMBDA = "alpha not simple outside Λ"
ER_NOT_IN_PHI_MAX = "essential range not in Φ⁺_max"
TRANSVERSE_NOT_ADMISSIBLE = "transverse slide not admissible"
SOURCE_NOT_UNBOUNDED = "source not in essential range"
TARGET_NOT_IN_NILRADICAL = "target not in nilradical"
SIGN_MISSING = "sign assumption missing"
SIGN_ALREADY_SET = "sign already constrained"
NOT_POSITIVE_ROOT = "not a positive root"
BAD_DIRECTION = "bad direction"
NOT_G2_LONG_PARABOLIC = "not a G2 context with Λ = {long root}"
LEVI_TARGETS = "Levi slide targets must be (α, α+β)"
LEVI_SOURCE_MISSING = "essential range lacks 2α+β or 3α+β"
PSI_NOT_PROPER = "Ψ not proper"
PSI_INSIDE_LAMBDA = "Ψ inside Λ"
NO_ESSENTIAL_ROOT_ON_PSI = "no essential root supported on Ψ"
ROOT_NOT_UNBOUNDED = "root not unbounded"
OTHERS_NOT_TRIVIAL = "other entries not trivial"
UNKNOWN_OP = "unknown op"


@dataclass(frozen=True)
class HolonomyDescriptor:
    ctx: ParabolicContext
    status: tuple[tuple[Root, Status], ...]
    signs: tuple[tuple[Root, Sign], ...] = ()

    @classmethod
    def build(cls, ctx: ParabolicContext, status: Mapping[Root, Status],
              signs: Mapping[Root, Sign] | None = None) -> "HolonomyDescriptor":
        if set(status) != set(ctx.nilradical):
            raise InternalConsistencyError("status must be defined on exactly the nilradical")
        st = tuple(sorted((tuple(k), Status(v)) for k, v in status.items()))
        sg = tuple(sorted((tuple(k), Sign(v)) for k, v in (signs or {}).items()))
        return cls(ctx, st, sg)

    @property
    def status_map(self) -> dict[Root, Status]:
        return dict(self.status)

    @property
    def sign_map(self) -> dict[Root, Sign]:
        return dict(self.signs)

    def get(self, root: Root) -> Status | None:
        return self.status_map.get(tuple(root))

    @property
    def essential_range(self) -> tuple[Root, ...]:
        """Roots whose status is certainly Unbounded."""
        return tuple(r for r, s in self.status if s is Status.UNBOUNDED)

    @property
    def maybe_roots(self) -> tuple[Root, ...]:
        return tuple(r for r, s in self.status if s is Status.MAYBE)

    @property
    def key(self) -> tuple:
        return (self.ctx.key, self.status, self.signs)

    def to_dict(self) -> dict:
        return {
            "context": self.ctx.to_dict(),
            "status": [[list(r), s.value] for r, s in self.status],
            "signs": [[list(r), s.value] for r, s in self.signs],
        }


def descriptor_from_dict(data: dict) -> HolonomyDescriptor:
    ctx = ParabolicContext.from_dict(data["context"])
    status = {tuple(r): Status(s) for r, s in data["status"]}
    signs = {tuple(r): Sign(s) for r, s in data.get("signs", [])}
    return HolonomyDescriptor.build(ctx, status, signs)


def initial_descriptor(ctx: ParabolicContext, er: Iterable[Root]) -> HolonomyDescriptor:
    """Unbounded on ``er``, Trivial elsewhere, no sign assumptions."""
    er = {tuple(x) for x in er}
    if not er:
        raise DomainError("the initial essential range must be nonempty")
    outside = [x for x in er if not ctx.in_nilradical(x)]
    if outside:
        raise DomainError(f"essential range escapes the nilradical: {sorted(outside)}")
    status = {x: (Status.UNBOUNDED if x in er else Status.TRIVIAL) for x in ctx.nilradical}
    return HolonomyDescriptor.build(ctx, status)


# ---------------------------------------------------------------------------
# operations

@dataclass(frozen=True)
class Normalize:
    kind = "Normalize"

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class Weyl:
    pivot: Root
    kind = "Weyl"

    def params(self) -> dict:
        return {"pivot": list(self.pivot)}


@dataclass(frozen=True)
class TransverseSlide:
    alpha: Root
    target: Root
    kind = "TransverseSlide"

    def params(self) -> dict:
        return {"alpha": list(self.alpha), "target": list(self.target)}


@dataclass(frozen=True)
class VerticalSlide:
    alpha: Root
    direction: str
    target: Root
    kind = "VerticalSlide"

    def params(self) -> dict:
        return {"alpha": list(self.alpha), "direction": self.direction, "target": list(self.target)}


@dataclass(frozen=True)
class SignSplit:
    alpha: Root
    kind = "SignSplit"

    def params(self) -> dict:
        return {"alpha": list(self.alpha)}


@dataclass(frozen=True)
class LeviSlide:
    alpha: Root
    targets: tuple[Root, Root]
    kind = "LeviSlide"

    def params(self) -> dict:
        return {"alpha": list(self.alpha), "targets": [list(t) for t in self.targets]}


@dataclass(frozen=True)
class Restrict:
    psi: tuple[int, ...]
    kind = "Restrict"

    def params(self) -> dict:
        return {"psi": list(self.psi)}


@dataclass(frozen=True)
class RootRestrict:
    """Restriction to the rank-one subsystem spanned by a single root."""
    root: Root
    kind = "RootRestrict"

    def params(self) -> dict:
        return {"root": list(self.root)}


AdmissibleOp = (Normalize | Weyl | TransverseSlide | VerticalSlide | SignSplit
                | LeviSlide | Restrict | RootRestrict)

OP_KINDS = ("Normalize", "Weyl", "TransverseSlide", "VerticalSlide", "SignSplit",
            "LeviSlide", "Restrict", "RootRestrict")


def op_to_dict(op) -> dict:
    return {"kind": op.kind, "params": op.params()}


def op_from_dict(data: dict):
    kind = data.get("kind")
    p = data.get("params", {})
    t = tuple
    try:
        if kind == "Normalize":
            return Normalize()
        if kind == "Weyl":
            return Weyl(t(p["pivot"]))
        if kind == "TransverseSlide":
            return TransverseSlide(t(p["alpha"]), t(p["target"]))
        if kind == "VerticalSlide":
            return VerticalSlide(t(p["alpha"]), str(p["direction"]), t(p["target"]))
        if kind == "SignSplit":
            return SignSplit(t(p["alpha"]))
        if kind == "LeviSlide":
            a, b = p["targets"]
            return LeviSlide(t(p["alpha"]), (t(a), t(b)))
        if kind == "Restrict":
            return Restrict(t(int(i) for i in p["psi"]))
        if kind == "RootRestrict":
            return RootRestrict(t(p["root"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise RejectedOp(UNKNOWN_OP, f"malformed params for {kind}: {exc}") from None
    raise RejectedOp(UNKNOWN_OP, str(kind))


def op_sort_key(op) -> tuple:
    return (OP_KINDS.index(op.kind), repr(sorted(op.params().items())))


# ---------------------------------------------------------------------------

def _require(cond: bool, clause: str, detail: str = "") -> None:
    if not cond:
        raise RejectedOp(clause, detail)


def _contaminate(d: HolonomyDescriptor, status: dict, alpha: Root, step: int,
                 target: Root) -> None:
    """Mark entries reachable from Unbounded/Maybe sources by ±jα corrections as Maybe."""
    sys = d.ctx.sys
    sources = [r for r, s in d.status if s in (Status.UNBOUNDED, Status.MAYBE)]
    for src in sources:
        mu = src
        while True:
            mu = add(mu, scale(step, alpha))
            if not sys.is_root(mu):
                break
            if mu == target or not d.ctx.in_nilradical(mu):
                continue
            if status[mu] in (Status.TRIVIAL, Status.BOUNDED):
                status[mu] = Status.MAYBE


def _canonical_sign(root: Root, sign: Sign) -> tuple[Root, Sign]:
    # a functional -μ bounded below is μ bounded above
    if is_positive(root):
        return root, sign
    return neg(root), sign.flipped()


def _apply_weyl(d: HolonomyDescriptor, op: Weyl) -> list[HolonomyDescriptor]:
    ctx = d.ctx
    pivot = tuple(op.pivot)
    _require(ctx.in_lambda_plus(pivot), PIVOT_NOT_IN_LAMBDA_PLUS, str(pivot))
    status = {}
    for r, s in d.status:
        image = weyl_reflect(ctx.sys, pivot, r)
        if not ctx.in_nilradical(image):
            raise InternalConsistencyError(f"reflection in {pivot} moved {r} out of the nilradical")
        status[image] = s
    signs = {}
    for r, s in d.signs:
        k, v = _canonical_sign(weyl_reflect(ctx.sys, pivot, r), s)
        signs[k] = v
    return [HolonomyDescriptor.build(ctx, status, signs)]


def _apply_transverse(d: HolonomyDescriptor, op: TransverseSlide) -> list[HolonomyDescriptor]:
    ctx = d.ctx
    alpha, nu = tuple(op.alpha), tuple(op.target)
    try:
        i = ctx.sys.simple_index(alpha)
    except DomainError:
        raise RejectedOp(NOT_SIMPLE_OUTSIDE_LAMBDA, str(alpha)) from None
    _require(i not in ctx.lam, NOT_SIMPLE_OUTSIDE_LAMBDA, str(alpha))
    phi_max = set(ctx.phi_max)
    _require(all(r in phi_max for r in d.essential_range), ER_NOT_IN_PHI_MAX)
    _require(transverse_slide_admissible(ctx, alpha), TRANSVERSE_NOT_ADMISSIBLE, str(alpha))
    _require(d.get(add(nu, alpha)) is Status.UNBOUNDED, SOURCE_NOT_UNBOUNDED, str(add(nu, alpha)))
    _require(ctx.in_nilradical(nu), TARGET_NOT_IN_NILRADICAL, str(nu))
    status = d.status_map
    _contaminate(d, status, alpha, -1, nu)
    status[nu] = Status.UNBOUNDED
    return [HolonomyDescriptor.build(ctx, status, d.sign_map)]


def _apply_vertical(d: HolonomyDescriptor, op: VerticalSlide) -> list[HolonomyDescriptor]:
    ctx = d.ctx
    alpha, nu = tuple(op.alpha), tuple(op.target)
    _require(ctx.in_lambda_plus(alpha), PIVOT_NOT_IN_LAMBDA_PLUS, str(alpha))
    _require(op.direction in ("up", "down"), BAD_DIRECTION, str(op.direction))
    _require(ctx.in_nilradical(nu), TARGET_NOT_IN_NILRADICAL, str(nu))
    need = Sign.BELOW if op.direction == "up" else Sign.ABOVE
    _require(d.sign_map.get(alpha) is need, SIGN_MISSING, f"{need.value} on {alpha}")
    source = add(nu, alpha) if op.direction == "up" else sub(nu, alpha)
    _require(d.get(source) is Status.UNBOUNDED, SOURCE_NOT_UNBOUNDED, str(source))
    status = d.status_map
    _contaminate(d, status, alpha, -1 if op.direction == "up" else 1, nu)
    status[nu] = Status.UNBOUNDED
    return [HolonomyDescriptor.build(ctx, status, d.sign_map)]


def _apply_signsplit(d: HolonomyDescriptor, op: SignSplit) -> list[HolonomyDescriptor]:
    alpha = tuple(op.alpha)
    _require(d.ctx.sys.is_positive_root(alpha), NOT_POSITIVE_ROOT, str(alpha))
    _require(alpha not in d.sign_map, SIGN_ALREADY_SET, str(alpha))
    out = []
    for s in (Sign.BELOW, Sign.ABOVE):
        signs = d.sign_map
        signs[alpha] = s
        out.append(HolonomyDescriptor.build(d.ctx, d.status_map, signs))
    return out


def _g2_long_parabolic(ctx: ParabolicContext) -> tuple[Root, Root] | None:
    """(α short, β long) when ctx is G2 with Λ = {β}; None otherwise."""
    try:
        series, _ = identify_type(ctx.sys.cartan, ctx.sys.reduced)
    except ClassificationError:
        return None
    if series != "G" or len(ctx.lam) != 1:
        return None
    (b,) = ctx.lam
    a = 1 - b
    # the long root β has A_{βα} = -1
    if ctx.sys.cartan[b][a] != -1:
        return None
    return ctx.sys.simple_roots[a], ctx.sys.simple_roots[b]


def _apply_levi(d: HolonomyDescriptor, op: LeviSlide) -> list[HolonomyDescriptor]:
    pair = _g2_long_parabolic(d.ctx)
    _require(pair is not None, NOT_G2_LONG_PARABOLIC)
    a, b = pair
    _require(tuple(op.alpha) == a and tuple(map(tuple, op.targets)) == (a, add(a, b)), LEVI_TARGETS)
    sources = (add(scale(2, a), b), add(scale(3, a), b))
    _require(any(d.get(s) is Status.UNBOUNDED for s in sources), LEVI_SOURCE_MISSING)
    out = []
    for t in (a, add(a, b)):
        # the compact reabsorption scrambles every other coordinate and the signs
        status = {r: (Status.UNBOUNDED if r == t else Status.MAYBE) for r in d.ctx.nilradical}
        out.append(HolonomyDescriptor.build(d.ctx, status))
    return out


def _pull_signs(d: HolonomyDescriptor, smap) -> dict:
    signs = {}
    for r, s in d.signs:
        pulled = smap.pullback(r)
        if pulled is not None:
            signs[pulled] = s
    return signs


def _apply_restrict(d: HolonomyDescriptor, op: Restrict) -> list[HolonomyDescriptor]:
    ctx = d.ctx
    psi = frozenset(op.psi)
    _require(bool(psi) and len(psi) < ctx.rank and all(0 <= i < ctx.rank for i in psi),
             PSI_NOT_PROPER, str(sorted(psi)))
    _require(not psi <= ctx.lam, PSI_INSIDE_LAMBDA, str(sorted(psi)))
    _require(any(support(r) <= psi for r in d.essential_range), NO_ESSENTIAL_ROOT_ON_PSI)
    sub_ctx, smap = restrict(ctx, psi)
    status = {r: d.get(smap.embed(r)) for r in sub_ctx.nilradical}
    return [HolonomyDescriptor.build(sub_ctx, status, _pull_signs(d, smap))]


def _apply_root_restrict(d: HolonomyDescriptor, op: RootRestrict) -> list[HolonomyDescriptor]:
    root = tuple(op.root)
    _require(d.get(root) is Status.UNBOUNDED, ROOT_NOT_UNBOUNDED, str(root))
    sub_ctx, smap = root_subsystem(d.ctx, root)
    line = {smap.embed(r) for r in sub_ctx.nilradical}
    others = [r for r, s in d.status if r not in line and s is not Status.TRIVIAL]
    _require(not others, OTHERS_NOT_TRIVIAL, str(others))
    status = {r: d.get(smap.embed(r)) for r in sub_ctx.nilradical}
    return [HolonomyDescriptor.build(sub_ctx, status, _pull_signs(d, smap))]


def _apply_normalize(d: HolonomyDescriptor, op: Normalize) -> list[HolonomyDescriptor]:
    status = {r: (Status.TRIVIAL if s is Status.BOUNDED else s) for r, s in d.status}
    return [HolonomyDescriptor.build(d.ctx, status, d.sign_map)]


_DISPATCH = {
    "Normalize": _apply_normalize,
    "Weyl": _apply_weyl,
    "TransverseSlide": _apply_transverse,
    "VerticalSlide": _apply_vertical,
    "SignSplit": _apply_signsplit,
    "LeviSlide": _apply_levi,
    "Restrict": _apply_restrict,
    "RootRestrict": _apply_root_restrict,
}


def apply(d: HolonomyDescriptor, op) -> list[HolonomyDescriptor]:
    """Apply an admissible op; returns the branches (one, or two for SignSplit/LeviSlide)."""
    fn = _DISPATCH.get(getattr(op, "kind", None))
    if fn is None:
        raise RejectedOp(UNKNOWN_OP, repr(op))
    try:
        return fn(d, op)
    except DomainError as exc:
        # malformed parameters (non-roots etc.) surface as rejections, not crashes
        raise RejectedOp(NOT_POSITIVE_ROOT, str(exc)) from None


def goal_reached(d: HolonomyDescriptor) -> Root | None:
    """Smallest (degree, lex) certain-Unbounded nilradical root outside Φ⁺_max."""
    phi_max = set(d.ctx.phi_max)
    hits = [r for r in d.essential_range if r not in phi_max]
    if not hits:
        return None
    return min(hits, key=lambda r: (sum(r), r))


def anchor(op) -> str:
    """Short tag naming the argument an op realizes, for traces."""
    return {
        "Normalize": "trivial-or-unbounded",
        "Weyl": "weyl-reflection",
        "TransverseSlide": "transverse-sliding",
        "VerticalSlide": "vertical-sliding",
        "SignSplit": "sign-split",
        "LeviSlide": "levi-kak-slide",
        "Restrict": "parabolic-subvariety",
        "RootRestrict": "root-subvariety",
    }[op.kind]


# ---------------------------------------------------------------------------
# terminal judgments and the assumptions each step leans on

CERTAINTY_REQUIRED = "certainty required"
NOT_RANK_ONE = "not rank one"
GOAL_INSIDE_PHI_MAX = "goal inside Φ⁺_max"
UNKNOWN_JUDGMENT = "unknown judgment"

RANK_ONE = "RankOneUnbounded"
GOAL = "GoalOutsidePhiMax"


def check_judgment(d: HolonomyDescriptor, judgment: dict) -> None:
    """Raise :class:`RejectedOp` unless ``judgment`` is a valid terminal claim about ``d``."""
    kind = judgment.get("kind")
    if kind == RANK_ONE:
        _require(d.ctx.rank == 1, NOT_RANK_ONE, f"rank {d.ctx.rank}")
        _require(bool(d.essential_range), CERTAINTY_REQUIRED, "no certain Unbounded entry")
        return
    if kind == GOAL:
        root = tuple(judgment.get("root", ()))
        _require(d.get(root) is Status.UNBOUNDED, CERTAINTY_REQUIRED, str(root))
        _require(root not in set(d.ctx.phi_max), GOAL_INSIDE_PHI_MAX, str(root))
        return
    raise RejectedOp(UNKNOWN_JUDGMENT, str(kind))


HOLONOMY_STABILITY = "holonomy-stability"
TRIVIAL_OR_UNBOUNDED = "trivial-or-unbounded"
BRACKET_NONDEGENERACY = "bracket-nondegeneracy"
RANK_ONE_NONEQUICONTINUITY = "rank-one-nonequicontinuity"
SUBVARIETY_INDUCTION = "parabolic-subvariety-induction"
ROOT_SUBVARIETY = "root-subvariety"
LEVI_KAK = "levi-kak-slide"

ASSUMPTION_TEXT = {
    HOLONOMY_STABILITY: "admissible perturbations of a holonomy sequence are again holonomy sequences",
    TRIVIAL_OR_UNBOUNDED: "after vertical perturbation each component is trivial or unbounded",
    BRACKET_NONDEGENERACY: "[g_-α, g_ν+α] = g_ν in a non-reduced system (checked only for split reduced forms)",
    RANK_ONE_NONEQUICONTINUITY: "an unbounded sequence in a rank-one model does not act equicontinuously on segments",
    SUBVARIETY_INDUCTION: "restriction to a parabolic subvariety V_Ψ preserves equicontinuity on segments",
    ROOT_SUBVARIETY: "restriction to the rank-one subvariety through a single root space",
    LEVI_KAK: "the KAK slide in the Levi factor of the G2 parabolic with long-root Λ",
}


def assumptions_for(d: HolonomyDescriptor, op=None, judgment: dict | None = None) -> set[str]:
    """Analytic facts taken as axioms by one step or one leaf."""
    out = {HOLONOMY_STABILITY, TRIVIAL_OR_UNBOUNDED}
    if op is not None:
        kind = op.kind
        if kind in ("TransverseSlide", "VerticalSlide") and not d.ctx.sys.reduced:
            out.add(BRACKET_NONDEGENERACY)
        elif kind == "Restrict":
            out.add(SUBVARIETY_INDUCTION)
        elif kind == "RootRestrict":
            out.add(ROOT_SUBVARIETY)
        elif kind == "LeviSlide":
            out.add(LEVI_KAK)
    if judgment is not None and judgment.get("kind") == RANK_ONE:
        out.add(RANK_ONE_NONEQUICONTINUITY)
    return out
