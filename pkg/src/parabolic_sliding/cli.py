"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 search failure, 4 verification failure, 5 I/O.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .holonomy import GOAL, RANK_ONE, Status, anchor
from .notation import format_index_set, format_root, labels, parse_index_set, parse_root_list
from .prover import (
    DEFAULT_SERIES,
    Budget,
    Problem,
    SearchFailure,
    certificate,
    derive,
    sweep,
    sweep_table,
)
from .rankone import MODELS, DegenerateDirectionError, nonequicontinuity_witness
from .rootsystem import ClassificationError, DomainError, build_root_system
from .verify import verify_certificate

EXIT_OK, EXIT_USAGE, EXIT_SEARCH, EXIT_VERIFY, EXIT_IO = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text + "\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def _system(series: str, rank: str | int):
    try:
        return build_root_system(series.upper(), int(rank))
    except (ClassificationError, ValueError) as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------

def cmd_roots(args) -> int:
    rs = _system(args.series, args.rank)
    if args.format == "json":
        data = rs.to_dict()
        data["phi_max"] = [list(x) for x in rs.phi_max]
        data["dynkin_edges"] = [list(e) for e in rs.dynkin_edges]
        data["labels"] = list(labels(rs))
        _write(None, _dump(data))
        return EXIT_OK
    names = labels(rs)
    print(f"{rs.name}  rank {rs.rank}  {'reduced' if rs.reduced else 'non-reduced'}")
    print(f"positive roots ({len(rs.positive_roots)}):")
    for x in sorted(rs.positive_roots, key=lambda r: (sum(r), r)):
        print(f"  {format_root(rs, x):<24} {list(x)}")
    print(f"Φ⁺_max ({len(rs.phi_max)}): " + ", ".join(format_root(rs, x) for x in rs.phi_max))
    edges = ", ".join(f"{names[i]}-{names[j]} ({rs.cartan[i][j]},{rs.cartan[j][i]})"
                      for i, j in rs.dynkin_edges)
    print(f"Dynkin edges: {edges or 'none'}")
    return EXIT_OK


def _budget(args) -> Budget:
    try:
        return Budget.from_env(max_steps=args.max_steps, max_seconds=args.max_seconds,
                               max_depth=args.max_depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _describe(d) -> str:
    rs = d.ctx.sys
    er = ", ".join(format_root(rs, r) for r in d.essential_range) or "∅"
    maybe = d.maybe_roots
    extra = f"; maybe {{{', '.join(format_root(rs, r) for r in maybe)}}}" if maybe else ""
    signs = "".join(f"; {format_root(rs, r)}(Z) {s.value}" for r, s in d.signs)
    return f"{rs.name} Λ={format_index_set(rs, d.ctx.lam)} ER={{{er}}}{extra}{signs}"


def _op_text(d, op) -> str:
    rs = d.ctx.sys
    f = lambda r: format_root(rs, r)  # noqa: E731
    k = op.kind
    if k == "Weyl":
        return f"Weyl({f(op.pivot)})"
    if k == "TransverseSlide":
        return f"TransverseSlide(α={f(op.alpha)}, ν={f(op.target)})"
    if k == "VerticalSlide":
        return f"VerticalSlide(α={f(op.alpha)}, {op.direction}, ν={f(op.target)})"
    if k == "SignSplit":
        return f"SignSplit({f(op.alpha)})"
    if k == "LeviSlide":
        return f"LeviSlide({f(op.alpha)}; {f(op.targets[0])} | {f(op.targets[1])})"
    if k == "Restrict":
        return f"Restrict(Ψ={format_index_set(rs, op.psi)})"
    if k == "RootRestrict":
        return f"RootRestrict({f(op.root)})"
    return k


def trace_lines(node, indent: int = 0) -> list[str]:
    pad = "  " * indent
    d = node.descriptor
    if node.op is None:
        j = node.judgment or {}
        if j.get("kind") == RANK_ONE:
            return [f"{pad}[rank-one-base] RankOneUnbounded  ({_describe(d)})"]
        if j.get("kind") == GOAL:
            return [f"{pad}[lower-rank] GoalOutsidePhiMax {format_root(d.ctx.sys, tuple(j['root']))}"]
        return [f"{pad}? {j}"]
    out = [f"{pad}[{anchor(node.op)}] {_op_text(d, node.op)}  on {_describe(d)}"]
    branching = len(node.children) > 1
    for i, c in enumerate(node.children):
        if branching:
            out.append(f"{pad}  branch {i + 1}:")
            out.extend(trace_lines(c, indent + 2))
        else:
            out.extend(trace_lines(c, indent))
    return out


def cmd_derive(args) -> int:
    rs = _system(args.series, args.rank)
    try:
        lam = parse_index_set(rs, args.lambda_)
        er = parse_root_list(rs, args.er)
        problem = Problem(rs.series, rs.rank, tuple(sorted(lam)), tuple(sorted(er)))
        problem.descriptor()
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    try:
        der = derive(problem, _budget(args), induction=not args.no_induction,
                     playbook=not args.no_playbook)
    except SearchFailure as exc:
        print(f"search failure: {exc}", file=sys.stderr)
        for fr in exc.frontier[:3]:
            st = [f"{r}:{s}" for r, s in fr["status"] if s != Status.TRIVIAL.value]
            print(f"  frontier: lambda={fr['context']['lambda']} {' '.join(st)}", file=sys.stderr)
        return EXIT_SEARCH
    cert = certificate(problem, der)
    res = verify_certificate(cert)
    if args.format == "json":
        _write(None, _dump(cert))
    else:
        print(f"problem: {rs.name} Λ={format_index_set(rs, lam)} ER={{"
              + ", ".join(format_root(rs, r) for r in problem.er) + "}")
        for line in trace_lines(der.root):
            print(line)
        print(f"nodes: {der.root.size}  depth: {der.root.depth}  fallback: {der.fallback_used}")
        for n in der.notes:
            print(f"note: {n}")
        print("ledger: " + ", ".join(cert["ledger"]))
        print("verified" if res.ok else f"verification FAILED: {res.message()}")
    if args.out:
        try:
            _write(args.out, _dump(cert))
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if res.ok else EXIT_VERIFY


def cmd_sweep(args) -> int:
    series = tuple(s.strip().upper() for s in args.series.split(",") if s.strip())
    try:
        report = sweep(args.max_rank, series, _budget(args), er_size=args.er_size, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        _write(None, _dump(report))
    else:
        print(sweep_table(report))
        for row in report["instances"]:
            if not row["ok"]:
                p = row["problem"]
                print(f"FAIL {p['series']}{p['rank']} Λ={p['lambda']} ER={p['er']}: {row['error']}")
        notes = sorted({n for row in report["instances"] for n in row["notes"]})
        for n in notes:
            print(f"note: {n}")
    if args.out:
        try:
            _write(args.out, _dump(report))
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    failed = [r for r in report["instances"] if not r["ok"]]
    if not failed:
        return EXIT_OK
    if any((r["error"] or "").startswith("verification") for r in failed):
        return EXIT_VERIFY
    return EXIT_SEARCH


def cmd_verify(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            cert = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        print(f"cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_IO
    res = verify_certificate(cert)
    if res.ok:
        print("OK: certificate replays")
        return EXIT_OK
    print(f"REJECTED: {res.message()}")
    return EXIT_VERIFY


def _vector(alg, text: str):
    text = text.strip()
    if "," in text or text.lstrip("-").replace("/", "").isdigit():
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != alg.dim:
            raise UsageError(f"expected {alg.dim} coordinates, got {len(parts)}")
        from fractions import Fraction
        return tuple(Fraction(p) for p in parts)
    try:
        return alg.basis(alg.index(text))
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def cmd_rankone(args) -> int:
    if args.model not in MODELS:
        raise UsageError(f"unknown model {args.model!r}; choose from {', '.join(MODELS)}")
    n = args.n if args.n is not None else (2 if args.model == "abelian" else 1)
    if n < 1:
        raise UsageError("--n must be positive")
    alg = MODELS[args.model](n)
    try:
        ks = [int(k) for k in args.k.split(",") if k.strip()]
    except ValueError:
        raise UsageError("--k takes a comma-separated list of integers") from None
    base = _vector(alg, args.v or alg.names[0])
    direction = _vector(alg, args.dir or alg.names[alg.center[-1]])
    v_seq = [tuple(k * c for c in base) for k in ks]
    try:
        w = nonequicontinuity_witness(alg, v_seq, direction, ks)
    except DegenerateDirectionError as exc:
        print(f"degenerate direction: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    data = w.to_dict()
    data["basis"] = list(alg.names)
    try:
        _write(args.out, _dump(data))
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-steps", type=int, default=None, help="search step budget")
    p.add_argument("--max-seconds", type=float, default=None, help="search time budget")
    p.add_argument("--max-depth", type=int, default=None, help="fallback search depth limit")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parabolic-sliding",
                                 description="Root systems, parabolic sliding derivations and certificates.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="enumerate a root system")
    p.add_argument("series")
    p.add_argument("rank")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("derive", help="search for a degree-reduction derivation")
    p.add_argument("series")
    p.add_argument("rank")
    p.add_argument("--lambda", dest="lambda_", default="∅",
                   help="simple roots in Λ, comma separated (default ∅)")
    p.add_argument("--er", required=True, help="initial essential range, e.g. 'a+b,a+2b'")
    p.add_argument("--out", help="write the certificate JSON here")
    p.add_argument("--format", choices=("trace", "json"), default="trace")
    p.add_argument("--no-playbook", action="store_true", help="use the generic search only")
    p.add_argument("--no-induction", action="store_true",
                   help="stop at the first root outside Φ⁺_max instead of restricting")
    _add_budget(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("sweep", help="derive and verify every instance up to a rank")
    p.add_argument("--max-rank", type=int, default=4)
    p.add_argument("--series", default=",".join(DEFAULT_SERIES))
    p.add_argument("--er-size", type=int, default=1, help="largest initial ER size")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--format", choices=("table", "json"), default="table")
    _add_budget(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="replay a certificate")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rankone", help="rank-one non-equicontinuity witness")
    p.add_argument("model", help="abelian | heisenberg | quaternionic")
    p.add_argument("--n", type=int, default=None,
                   help="model size: dimension (abelian, default 2) or number of e/f or H blocks (default 1)")
    p.add_argument("--k", default="1,2,4,8,16", help="indices k; v_k = k * v")
    p.add_argument("--v", help="base vector: a basis name or comma-separated coordinates")
    p.add_argument("--dir", help="half-line direction in z⁺: basis name or coordinates")
    p.add_argument("--out", help="write the witness JSON here")
    p.set_defaults(func=cmd_rankone)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
