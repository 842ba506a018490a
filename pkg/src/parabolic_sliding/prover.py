"""Degree-reduction proof search and certificate construction.

The searcher first follows a fixed playbook on the certain-Unbounded root λ
of least degree:

1. reflect in a simple γ ∈ Λ with A_{γλ} > 0;
2. transverse slide along a simple α ∉ Λ with A_{αλ} > 0;
3. any Λ⁺ reflection that lowers the least degree;
4. restrict to the rank-one subsystem through λ when nothing else is live;
5. split on the sign of γ(Z) and slide vertically.

G2 runs steps 1 and 2, then the rank-one restriction when λ is the highest
root, then step 3, the Levi slide (Λ = {β} only) and step 5.  Whenever a certain root leaves
Φ⁺_max the searcher restricts to its support and recurses in lower rank.
Leaves are rank-one contexts with a certain Unbounded entry.  If the
playbook stalls, a bounded iterative-deepening AND-OR search over every
applicable op takes over from that descriptor.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from . import __version__
from .holonomy import (
    GOAL,
    RANK_ONE,
    HolonomyDescriptor,
    LeviSlide,
    RejectedOp,
    Restrict,
    RootRestrict,
    Sign,
    SignSplit,
    Status,
    TransverseSlide,
    VerticalSlide,
    Weyl,
    _g2_long_parabolic,
    apply,
    assumptions_for,
    goal_reached,
    initial_descriptor,
    op_sort_key,
    op_to_dict,
)
from .parabolic import ParabolicContext, make_context, transverse_slide_admissible
from .rootsystem import (
    Root,
    add,
    build_root_system,
    cartan_integer,
    is_positive,
    sub,
    support,
)

SCHEMA = "parabolic-sliding-certificate"
SCHEMA_VERSION = 1
ENV_MAX_STEPS = "PARABOLIC_SLIDING_MAX_STEPS"
ENV_MAX_SECONDS = "PARABOLIC_SLIDING_MAX_SECONDS"


class SearchFailure(RuntimeError):
    """The search ran out of budget or moves; ``frontier`` lists the stuck descriptors."""

    def __init__(self, message: str, frontier: list[dict] | None = None):
        super().__init__(message)
        self.frontier = frontier or []


@dataclass(frozen=True)
class Budget:
    max_steps: int = 200_000
    max_seconds: float = 120.0
    max_depth: int = 14

    @classmethod
    def from_env(cls, **overrides) -> "Budget":
        kw = {}
        if os.environ.get(ENV_MAX_STEPS):
            kw["max_steps"] = int(os.environ[ENV_MAX_STEPS])
        if os.environ.get(ENV_MAX_SECONDS):
            kw["max_seconds"] = float(os.environ[ENV_MAX_SECONDS])
        kw.update({k: v for k, v in overrides.items() if v is not None})
        b = cls(**kw)
        if b.max_steps <= 0 or b.max_seconds <= 0 or b.max_depth <= 0:
            raise ValueError("budgets must be positive")
        return b


@dataclass
class Node:
    descriptor: HolonomyDescriptor
    op: object | None = None
    children: list["Node"] = field(default_factory=list)
    judgment: dict | None = None

    def to_dict(self) -> dict:
        return {
            "descriptor": self.descriptor.to_dict(),
            "op": op_to_dict(self.op) if self.op is not None else None,
            "children": [c.to_dict() for c in self.children],
            "judgment": self.judgment,
        }

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    @property
    def size(self) -> int:
        return sum(1 for _ in self.walk())

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)


@dataclass
class Derivation:
    root: Node
    fallback_used: bool = False
    notes: list[str] = field(default_factory=list)
    steps: int = 0

    def ops(self) -> list:
        return [n.op for n in self.root.walk() if n.op is not None]

    def ledger(self) -> list[str]:
        out: set[str] = set()
        for n in self.root.walk():
            out |= assumptions_for(n.descriptor, n.op, n.judgment)
        return sorted(out)


def _least(roots) -> Root | None:
    return min(roots, key=lambda r: (sum(r), r)) if roots else None


class Prover:
    def __init__(self, budget: Budget | None = None, induction: bool = True,
                 playbook: bool = True):
        self.budget = budget or Budget()
        self.induction = induction
        self.use_playbook = playbook
        self.steps = 0
        self.started = time.monotonic()
        self.notes: list[str] = []
        self.fallback_used = False
        self._fail: dict[tuple, int] = {}
        self._done: dict[tuple, Node] = {}

    # -- bookkeeping
    def _tick(self, d: HolonomyDescriptor) -> None:
        self.steps += 1
        if self.steps > self.budget.max_steps:
            raise SearchFailure("step budget exhausted", [d.to_dict()])
        if time.monotonic() - self.started > self.budget.max_seconds:
            raise SearchFailure("time budget exhausted", [d.to_dict()])

    def _note(self, text: str) -> None:
        if text not in self.notes:
            self.notes.append(text)

    def judge(self, d: HolonomyDescriptor) -> dict | None:
        if d.ctx.rank == 1 and d.essential_range:
            return {"kind": RANK_ONE}
        if not self.induction:
            goal = goal_reached(d)
            if goal is not None:
                return {"kind": GOAL, "root": list(goal)}
        return None

    # -- entry point
    def run(self, d: HolonomyDescriptor) -> Derivation:
        if not d.essential_range:
            raise SearchFailure("essential range is empty", [d.to_dict()])
        root = self.prove(d, 0)
        return Derivation(root, self.fallback_used, list(self.notes), self.steps)

    def prove(self, d: HolonomyDescriptor, depth: int) -> Node:
        self._tick(d)
        j = self.judge(d)
        if j is not None:
            return Node(d, judgment=j)
        op = self.playbook_op(d) if self.use_playbook and depth < 400 else None
        if op is None:
            return self.fallback(d)
        kids = apply(d, op)
        return Node(d, op, [self.prove(k, depth + 1) for k in kids])

    # -- playbook
    def playbook_op(self, d: HolonomyDescriptor):
        ctx = d.ctx
        sys = ctx.sys
        goal = goal_reached(d)
        if goal is not None:
            return Restrict(tuple(sorted(support(goal))))
        er = d.essential_range
        if not er:
            return None
        lam = _least(er)
        g2 = sys.series == "G"

        op = self._weyl_simple(d, lam)
        if op:
            return op
        if g2:
            op = self._transverse(d, lam)
            if op:
                return op
            if lam == sys.highest_root:
                op = self._root_restrict(d, lam)
                if op:
                    return op
            op = self._weyl_lowering(d)
            if op:
                return op
            op = self._levi(d)
            if op:
                return op
            return self._sign_vertical(d, lam)
        op = self._transverse(d, lam)
        if op:
            return op
        op = self._weyl_lowering(d)
        if op:
            return op
        op = self._root_restrict(d, lam)
        if op:
            return op
        return self._sign_vertical(d, lam)

    def _weyl_simple(self, d, lam):
        sys = d.ctx.sys
        for i in sorted(d.ctx.lam):
            g = sys.simple_roots[i]
            if cartan_integer(sys, g, lam) > 0:
                return Weyl(g)
        return None

    def _transverse(self, d, lam):
        ctx = d.ctx
        sys = ctx.sys
        for i in range(ctx.rank):
            if i in ctx.lam:
                continue
            a = sys.simple_roots[i]
            if cartan_integer(sys, a, lam) <= 0:
                continue
            nu = sub(lam, a)
            if not sys.is_positive_root(nu) or not ctx.in_nilradical(nu):
                continue
            ok = transverse_slide_admissible(ctx, a)
            maximal = len(ctx.lam) == ctx.rank - 1
            if not ok:
                if not maximal:
                    self._note(f"non-maximal parabolic Λ={sorted(ctx.lam)} of {sys.name} fails the "
                               f"literal transverse condition for α_{i}")
                else:
                    mus = [sub(r, tuple(r[i] * c for c in a)) for r in d.essential_range]
                    if not any(sys.is_root(m) for m in mus):
                        self._note(f"maximal parabolic Λ={sorted(ctx.lam)} of {sys.name} passes the "
                                   f"μ_i test but fails the literal transverse condition for α_{i}")
                continue
            op = TransverseSlide(a, nu)
            if self._applies(d, op):
                return op
        return None

    def _weyl_lowering(self, d):
        """Λ⁺ reflection that lowers the least certain degree; smallest result wins."""
        ctx = d.ctx
        sys = ctx.sys
        er = d.essential_range
        current = sum(_least(er))
        best = None
        for p in ctx.lambda_plus:
            images = []
            for r in er:
                c = cartan_integer(sys, p, r)
                images.append(tuple(x - c * y for x, y in zip(r, p)))
            low = _least(images)
            if sum(low) >= current:
                continue
            key = (sum(low), 0 if sum(p) == 1 else 1, p)
            if best is None or key < best[0]:
                best = (key, p)
        return Weyl(best[1]) if best else None

    def _root_restrict(self, d, lam):
        op = RootRestrict(lam)
        return op if self._applies(d, op) else None

    def _levi(self, d):
        pair = _g2_long_parabolic(d.ctx)
        if pair is None:
            return None
        a, b = pair
        op = LeviSlide(a, (a, add(a, b)))
        return op if self._applies(d, op) else None

    def _sign_vertical(self, d, lam):
        ctx = d.ctx
        signs = d.sign_map
        er = d.essential_range
        # continue an existing split first
        ups, downs = [], []
        for g, s in sorted(signs.items()):
            if not ctx.in_lambda_plus(g):
                continue
            for src in er:
                if s is Sign.BELOW:
                    t = sub(src, g)
                    if ctx.in_nilradical(t) and d.get(t) is not Status.UNBOUNDED:
                        ups.append(((sum(t), t, g), VerticalSlide(g, "up", t)))
                else:
                    t = add(src, g)
                    if ctx.in_nilradical(t) and d.get(t) is not Status.UNBOUNDED:
                        downs.append(((sum(src), src, g), VerticalSlide(g, "down", t)))
        if ups:
            return min(ups, key=lambda x: x[0])[1]
        if downs:
            return min(downs, key=lambda x: x[0])[1]
        # open a new split on γ ∈ Λ⁺ with λ - γ in the nilradical
        cands = [g for g in ctx.lambda_plus
                 if g not in signs and ctx.in_nilradical(sub(lam, g))]
        if not cands:
            return None
        g = min(cands, key=lambda x: (sum(x), x))
        return SignSplit(g)

    @staticmethod
    def _applies(d, op) -> bool:
        try:
            apply(d, op)
        except RejectedOp:
            return False
        return True

    # -- fallback search
    def candidate_ops(self, d: HolonomyDescriptor) -> list:
        ctx = d.ctx
        sys = ctx.sys
        er = d.essential_range
        signs = d.sign_map
        ops = set()
        for p in ctx.lambda_plus:
            ops.add(Weyl(p))
        for i in range(ctx.rank):
            if i in ctx.lam:
                continue
            a = sys.simple_roots[i]
            for s in er:
                t = sub(s, a)
                if ctx.in_nilradical(t) and d.get(t) is not Status.UNBOUNDED:
                    ops.add(TransverseSlide(a, t))
        for g in ctx.lambda_plus:
            for s in er:
                if g in signs:
                    t = sub(s, g) if signs[g] is Sign.BELOW else add(s, g)
                    direction = "up" if signs[g] is Sign.BELOW else "down"
                    if ctx.in_nilradical(t) and d.get(t) is not Status.UNBOUNDED:
                        ops.add(VerticalSlide(g, direction, t))
                elif ctx.in_nilradical(sub(s, g)) or ctx.in_nilradical(add(s, g)):
                    ops.add(SignSplit(g))
        pair = _g2_long_parabolic(ctx)
        if pair is not None:
            a, b = pair
            ops.add(LeviSlide(a, (a, add(a, b))))
        for s in er:
            ops.add(RootRestrict(s))
            psi = tuple(sorted(support(s)))
            if len(psi) < ctx.rank:
                ops.add(Restrict(psi))
        return sorted(ops, key=op_sort_key)

    def fallback(self, d: HolonomyDescriptor) -> Node:
        self.fallback_used = True
        for limit in range(1, self.budget.max_depth + 1):
            node = self._dfs(d, limit)
            if node is not None:
                return node
        raise SearchFailure(f"no derivation within depth {self.budget.max_depth}", [d.to_dict()])

    def _dfs(self, d: HolonomyDescriptor, limit: int) -> Node | None:
        key = d.key
        if key in self._done:
            return self._done[key]
        self._tick(d)
        j = self.judge(d)
        if j is not None:
            return Node(d, judgment=j)
        if self.induction and self.use_playbook and goal_reached(d) is not None:
            # lower rank: hand back to the playbook
            try:
                node = self.prove(d, 0)
            except SearchFailure:
                return None
            self._done[key] = node
            return node
        if limit == 0 or self._fail.get(key, -1) >= limit:
            return None
        for op in self.candidate_ops(d):
            try:
                kids = apply(d, op)
            except RejectedOp:
                continue
            if len(kids) == 1 and kids[0].key == key:
                continue
            subs = []
            for k in kids:
                n = self._dfs(k, limit - 1)
                if n is None:
                    break
                subs.append(n)
            else:
                node = Node(d, op, subs)
                self._done[key] = node
                return node
        self._fail[key] = max(self._fail.get(key, -1), limit)
        return None


# ---------------------------------------------------------------------------
# problems and certificates

@dataclass(frozen=True)
class Problem:
    series: str
    rank: int
    lam: tuple[int, ...]
    er: tuple[Root, ...]

    def context(self) -> ParabolicContext:
        return make_context(build_root_system(self.series, self.rank), self.lam)

    def descriptor(self) -> HolonomyDescriptor:
        return initial_descriptor(self.context(), self.er)

    def to_dict(self) -> dict:
        return {"series": self.series, "rank": self.rank, "lambda": list(self.lam),
                "er": [list(r) for r in self.er]}

    @classmethod
    def from_dict(cls, data: dict) -> "Problem":
        return cls(str(data["series"]).upper(), int(data["rank"]),
                   tuple(sorted(int(i) for i in data["lambda"])),
                   tuple(sorted(tuple(int(c) for c in r) for r in data["er"])))


def search_degree_reduction(d: HolonomyDescriptor, budget: Budget | None = None,
                            induction: bool = True, playbook: bool = True) -> Derivation:
    return Prover(budget, induction, playbook).run(d)


def derive(problem: Problem, budget: Budget | None = None, induction: bool = True,
           playbook: bool = True) -> Derivation:
    return search_degree_reduction(problem.descriptor(), budget, induction, playbook)


def certificate(problem: Problem, der: Derivation) -> dict:
    return {
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "engine_version": __version__,
        "problem": problem.to_dict(),
        "ledger": der.ledger(),
        "tree": der.root.to_dict(),
        "metadata": {"fallback_used": der.fallback_used, "notes": der.notes,
                     "size": der.root.size, "depth": der.root.depth},
    }


# ---------------------------------------------------------------------------
# sweeps

DEFAULT_SERIES = ("A", "B", "C", "D", "BC", "F", "G")
_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4, "BC": 1, "E": 6, "F": 4, "G": 2}
_MAX_RANK = {"E": 8, "F": 4, "G": 2}


def systems_up_to(max_rank: int, series=DEFAULT_SERIES) -> list[tuple[str, int]]:
    out = []
    for s in series:
        s = s.upper()
        if s not in _MIN_RANK:
            raise ValueError(f"unknown series {s!r}")
        top = min(max_rank, _MAX_RANK.get(s, max_rank))
        out.extend((s, r) for r in range(_MIN_RANK[s], top + 1))
    return out


def sweep_instances(max_rank: int, series=DEFAULT_SERIES, er_size: int = 1) -> list[Problem]:
    """Every proper Λ and every ER ⊆ nilradical ∩ Φ⁺_max of size <= er_size, in a fixed order."""
    from itertools import combinations

    problems = []
    for s, r in systems_up_to(max_rank, series):
        sys = build_root_system(s, r)
        for k in range(r):
            for lam in combinations(range(r), k):
                ctx = make_context(sys, lam)
                pool = [x for x in sys.phi_max if ctx.in_nilradical(x)]
                for size in range(1, er_size + 1):
                    for er in combinations(pool, size):
                        problems.append(Problem(s, r, lam, tuple(er)))
    return problems


def run_instance(problem: Problem, budget: Budget | None = None) -> dict:
    """Search, certify and independently replay one instance; never raises."""
    from .verify import verify_certificate

    row = {"problem": problem.to_dict(), "ok": False, "size": 0, "depth": 0,
           "fallback_used": False, "notes": [], "error": None}
    try:
        der = derive(problem, budget)
        cert = certificate(problem, der)
        res = verify_certificate(cert)
        row.update(size=der.root.size, depth=der.root.depth, fallback_used=der.fallback_used,
                   notes=der.notes, ok=res.ok)
        if not res.ok:
            row["error"] = "verification failed: " + res.message()
    except SearchFailure as exc:
        row["error"] = f"search failure: {exc}"
        row["frontier"] = exc.frontier[:5]
    return row


def _run_star(args):
    return run_instance(*args)


def sweep(max_rank: int, series=DEFAULT_SERIES, budget: Budget | None = None,
          er_size: int = 1, jobs: int = 1) -> dict:
    problems = sweep_instances(max_rank, series, er_size)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map keeps input order whatever the completion order
            rows = list(pool.map(_run_star, [(p, budget) for p in problems], chunksize=8))
    else:
        rows = [run_instance(p, budget) for p in problems]
    by_system: dict[str, dict] = {}
    for row in rows:
        p = row["problem"]
        name = f"{p['series']}{p['rank']}"
        agg = by_system.setdefault(name, {"instances": 0, "failures": 0, "max_size": 0,
                                          "total_size": 0, "fallback": 0})
        agg["instances"] += 1
        agg["failures"] += 0 if row["ok"] else 1
        agg["max_size"] = max(agg["max_size"], row["size"])
        agg["total_size"] += row["size"]
        agg["fallback"] += 1 if row["fallback_used"] else 0
    failures = sum(1 for r in rows if not r["ok"])
    return {
        "schema": "parabolic-sliding-sweep",
        "schema_version": 1,
        "engine_version": __version__,
        "max_rank": max_rank,
        "series": [s.upper() for s in series],
        "er_size": er_size,
        "summary": {"instances": len(rows), "failures": failures, "by_system": by_system},
        "instances": rows,
    }


def sweep_table(report: dict) -> str:
    lines = [f"{'system':<8}{'instances':>10}{'failures':>10}{'max size':>10}{'mean size':>11}{'fallback':>10}"]
    for name, agg in report["summary"]["by_system"].items():
        mean = agg["total_size"] / agg["instances"] if agg["instances"] else 0
        lines.append(f"{name:<8}{agg['instances']:>10}{agg['failures']:>10}{agg['max_size']:>10}"
                     f"{mean:>11.1f}{agg['fallback']:>10}")
    s = report["summary"]
    lines.append(f"total: {s['instances']} instances, {s['failures']} failures")
    return "\n".join(lines)
