"""Independent replay of derivation certificates.

Nothing here imports the searcher.  The problem statement is rebuilt from
scratch, every op is re-applied with :func:`holonomy.apply`, and each
recorded child descriptor must equal the recomputed one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .holonomy import (
    RejectedOp,
    apply,
    assumptions_for,
    check_judgment,
    initial_descriptor,
    op_from_dict,
)
from .parabolic import make_context
from .rootsystem import ClassificationError, DomainError, build_root_system

CERT_SCHEMA = "parabolic-sliding-certificate"

ROOT_MISMATCH = "root descriptor mismatch"
CHILD_MISMATCH = "child descriptor mismatch"
BRANCH_COUNT = "branch count mismatch"
LEDGER_MISSING = "ledger missing assumption"
MALFORMED = "malformed certificate"
LEAF_WITHOUT_JUDGMENT = "leaf without judgment"
BAD_PROBLEM = "invalid problem"


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    clause: str = ""
    detail: str = ""
    path: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def message(self) -> str:
        if self.ok:
            return "certificate replays"
        where = "/".join(str(i) for i in self.path) or "root"
        return f"{self.clause} at {where}: {self.detail}".rstrip(": ")


class _Fail(Exception):
    def __init__(self, clause, detail, path):
        super().__init__(clause)
        self.result = VerifyResult(False, clause, detail, tuple(path))


def verify_certificate(cert: dict) -> VerifyResult:
    try:
        _verify(cert)
    except _Fail as f:
        return f.result
    return VerifyResult(True)


def verify_file(path: str) -> VerifyResult:
    with open(path, encoding="utf-8") as fh:
        return verify_certificate(json.load(fh))


def _verify(cert: dict) -> None:
    if not isinstance(cert, dict) or cert.get("schema") != CERT_SCHEMA \
            or cert.get("schema_version") != 1 or "tree" not in cert:
        raise _Fail(MALFORMED, "unknown schema or missing tree", [])
    p = cert.get("problem", {})
    try:
        sys = build_root_system(str(p["series"]), int(p["rank"]))
        ctx = make_context(sys, p["lambda"])
        start = initial_descriptor(ctx, [tuple(r) for r in p["er"]])
    except (KeyError, TypeError, ValueError, ClassificationError, DomainError) as exc:
        raise _Fail(BAD_PROBLEM, str(exc), [])
    tree = cert["tree"]
    if not isinstance(tree, dict) or tree.get("descriptor") != start.to_dict():
        raise _Fail(ROOT_MISMATCH, "recorded root differs from the problem statement", [])
    needed: set[str] = set()
    _replay(start, tree, [], needed)
    ledger = set(cert.get("ledger") or [])
    missing = sorted(needed - ledger)
    if missing:
        raise _Fail(LEDGER_MISSING, ", ".join(missing), [])


def _replay(d, node: dict, path: list[int], needed: set[str]) -> None:
    op_data = node.get("op")
    children = node.get("children") or []
    if op_data is None:
        judgment = node.get("judgment")
        if not isinstance(judgment, dict):
            raise _Fail(LEAF_WITHOUT_JUDGMENT, "", path)
        try:
            check_judgment(d, judgment)
        except RejectedOp as exc:
            raise _Fail(exc.clause, exc.detail, path)
        needed |= assumptions_for(d, None, judgment)
        return
    try:
        op = op_from_dict(op_data)
        kids = apply(d, op)
    except RejectedOp as exc:
        raise _Fail(exc.clause, exc.detail, path)
    needed |= assumptions_for(d, op)
    if len(kids) != len(children):
        raise _Fail(BRANCH_COUNT, f"{op.kind} gives {len(kids)} branches, certificate has {len(children)}", path)
    for i, (k, child) in enumerate(zip(kids, children)):
        if not isinstance(child, dict) or child.get("descriptor") != k.to_dict():
            raise _Fail(CHILD_MISMATCH, f"after {op.kind}", path + [i])
        _replay(k, child, path + [i], needed)
