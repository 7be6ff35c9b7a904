"""Command-line entry point.

Exit status: 0 success, 1 failed verification or bound violation,
2 validation error, 3 resource cap exceeded, 64 unknown subcommand.
Every flag can also be set through an environment variable
``HYPERMATCH_<FLAG>`` (e.g. ``HYPERMATCH_SEED``); explicit flags win.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bridge, feige, fraclp, hypergraph as hg, thresholds as th, verify
from .errors import BoundViolationError, ResourceLimitError, ValidationError
from .rational import as_fraction, decimal_str, fmt

ENV_PREFIX = "HYPERMATCH_"

EXIT_OK, EXIT_FAIL, EXIT_VALIDATION, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 3, 64

SUBCOMMANDS = ("degree", "matching", "fractional", "md-exact", "f0-exact", "bounds", "convolve",
               "theta-search", "damp", "reduce", "probe", "verify")


@dataclass
class RunConfig:
    subcommand: str
    args: argparse.Namespace
    seed: int = 0
    threads: int = 1
    max_enum: int = hg.DEFAULT_MAX_ENUM
    max_atoms: int = feige.DEFAULT_MAX_ATOMS
    format: str = "table"
    precision: int = 12
    out: Optional[str] = None
    inputs: list[str] = field(default_factory=list)


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    g.add_argument("--threads", type=int, default=int(_env("threads", 1)))
    g.add_argument("--format", choices=("json", "csv", "table"), default=_env("format", "table"))
    g.add_argument("--precision", type=int, default=int(_env("precision", 12)))
    g.add_argument("--max-enum", type=int, default=int(_env("max_enum", hg.DEFAULT_MAX_ENUM)))
    g.add_argument("--max-atoms", type=int, default=int(_env("max_atoms", feige.DEFAULT_MAX_ATOMS)))
    g.add_argument("--out", default=_env("out", None))
    return p


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hypermatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degree", parents=[common], help="deg_H(S) or minimum d-degree")
    p.add_argument("--graph", required=True, help="JSON file or complete:n,k")
    p.add_argument("--set", default=None, help="comma-separated vertices")
    p.add_argument("--d", type=int, default=None, help="report the minimum d-degree instead")

    p = sub.add_parser("matching", parents=[common], help="maximum matching")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("fractional", parents=[common], help="fractional matching/cover duality certificate")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("md-exact", parents=[common], help="exact m_d^s(k,n) by enumeration")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, default=None, help="matching size (default n/k)")

    p = sub.add_parser("f0-exact", parents=[common], help="exact f_0^s(l,m) by enumeration + LP")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s", type=_rational, default=None, help="fractional size (default m/l)")

    p = sub.add_parser("bounds", parents=[common], help="bound comparison reports")
    p.add_argument("kind", choices=("matching", "deviation"))
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("convolve", parents=[common], help="exact i.i.d. tail Pr[sum >= t]")
    p.add_argument("--dist", required=True, help="JSON file, extremizer:l,d or point:v")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--t", type=_rational, required=True)

    p = sub.add_parser("theta-search", parents=[common], help="lower-bound search for the tail supremum")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--d", type=_rational, required=True)
    p.add_argument("--support", type=int, default=2)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--log", default=None, help="append findings as JSON lines")

    p = sub.add_parser("damp", parents=[common], help="damping transform of a distribution")
    p.add_argument("--dist", required=True)
    p.add_argument("--delta", type=_rational, required=True)

    p = sub.add_parser("reduce", parents=[common], help="distribution -> hypergraph certificate")
    p.add_argument("--dist", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, default=1)

    p = sub.add_parser("probe", parents=[common], help="equivalence convergence table")
    p.add_argument("--dist", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", default="1,2,4,8", help="comma-separated replication factors")

    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    return parser


def load_graph(source: str) -> hg.Hypergraph:
    if source.startswith("complete:"):
        n, k = (int(x) for x in source.split(":", 1)[1].split(","))
        return hg.Hypergraph.complete(n, k)
    return hg.Hypergraph.from_json(Path(source).read_text())


def load_dist(source: str) -> feige.DiscreteDistribution:
    if source.startswith("extremizer:"):
        l, d = source.split(":", 1)[1].split(",")
        return feige.conjectured_extremizer(int(l), as_fraction(d))
    if source.startswith("point:"):
        return feige.DiscreteDistribution.point(as_fraction(source.split(":", 1)[1]))
    return feige.DiscreteDistribution.from_json(Path(source).read_text())


def _csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _flat(payload: dict) -> dict:
    return {k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
            for k, v in payload.items()}


def _render(cfg: RunConfig, payload: dict, table: str, rows: Optional[list[dict]] = None) -> str:
    if cfg.format == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if cfg.format == "csv":
        return _csv(rows if rows is not None else [_flat(payload)])
    return table if table.endswith("\n") else table + "\n"


def _dispatch(cfg: RunConfig) -> tuple[str, int]:
    a = cfg.args
    cmd = cfg.subcommand
    if cmd == "degree":
        H = load_graph(a.graph)
        if a.d is not None:
            val = hg.min_d_degree(H, a.d)
            payload = {"d": a.d, "min_degree": val}
        else:
            S = [int(x) for x in a.set.split(",")] if a.set else []
            val = hg.degree(H, S)
            payload = {"set": S, "degree": val}
        return _render(cfg, payload, str(val)), EXIT_OK
    if cmd == "matching":
        H = load_graph(a.graph)
        M = hg.max_matching(H)
        table = f"size {M.size} ({'perfect' if M.is_perfect else 'not perfect'})\n" + \
            "".join(f"{list(e)}\n" for e in M.edges)
        return _render(cfg, M.to_dict(), table), EXIT_OK
    if cmd == "fractional":
        cert = fraclp.duality_certificate(load_graph(a.graph))
        table = (f"nu* = {fmt(cert.nu)}\ntau* = {fmt(cert.tau)}\n"
                 f"matching = {json.dumps(cert.matching.to_dict()['weights'])}\n"
                 f"cover = {json.dumps(cert.cover.to_dict()['weights'])}")
        return _render(cfg, cert.to_dict(), table), EXIT_OK
    if cmd == "md-exact":
        s = a.n // a.k if a.s is None else a.s
        res = hg.exact_m_d_s(a.k, a.n, a.d, s, workers=cfg.threads, max_count=cfg.max_enum)
        payload = {"k": a.k, "n": a.n, "d": a.d, "s": s, **res.to_dict()}
        table = f"{res.value}\n"
        if res.witness is not None:
            table += f"witness: {res.witness.to_json()}\n"
        return _render(cfg, payload, table), EXIT_OK
    if cmd == "f0-exact":
        s = Fraction(a.m, a.l) if a.s is None else a.s
        res = fraclp.exact_f_0_s(a.l, a.m, s, max_count=cfg.max_enum)
        payload = {"l": a.l, "m": a.m, "s": fmt(s), **res.to_dict()}
        table = f"{res.value}\n"
        if res.witness is not None:
            table += f"witness: {res.witness.to_json()} (nu* = {fmt(res.witness_nu)})\n"
        return _render(cfg, payload, table), EXIT_OK
    if cmd == "bounds":
        if a.kind == "matching":
            if a.k is None:
                raise ValidationError("bounds matching needs --k")
            rep = th.matching_bound_report(a.k, a.d)
        else:
            if a.l is None:
                raise ValidationError("bounds deviation needs --l")
            rep = th.deviation_bound_report(a.l, a.d)
        if cfg.format == "csv":
            return rep.to_csv(cfg.precision), EXIT_OK
        if cfg.format == "json":
            return rep.to_json(cfg.precision) + "\n", EXIT_OK
        return rep.to_table(cfg.precision), EXIT_OK
    if cmd == "convolve":
        D = load_dist(a.dist)
        val = feige.iid_tail(D, a.l, a.t, cfg.max_atoms)
        payload = {"l": a.l, "t": fmt(a.t), "tail": fmt(val), "decimal": decimal_str(val, cfg.precision),
                   "distribution": D.to_dict()}
        return _render(cfg, payload, fmt(val)), EXIT_OK
    if cmd == "theta-search":
        res = feige.theta_lower_search(a.l, a.d, a.support, a.budget, cfg.seed, max_atoms=cfg.max_atoms)
        if a.log:
            with open(a.log, "a") as fh:
                fh.write(json.dumps({"seed": cfg.seed, "l": a.l, "d": fmt(a.d), "support": a.support,
                                     "budget": a.budget, "value": fmt(res.value),
                                     "best": res.best.to_dict()}, sort_keys=True) + "\n")
                for f in res.findings:
                    fh.write(json.dumps(f, sort_keys=True) + "\n")
        atoms = ", ".join(f"{fmt(v)} w.p. {fmt(p)}" for v, p in res.best.atoms)
        table = f"{fmt(res.value)}\nbest: {atoms}\n"
        if res.findings:
            table += f"findings: {len(res.findings)} conjecture counterexample candidate(s)\n"
        return _render(cfg, res.to_dict(), table), EXIT_OK
    if cmd == "damp":
        Y = feige.damping_transform(load_dist(a.dist), a.delta)
        table = "\n".join(f"{fmt(v)}\t{fmt(p)}" for v, p in Y.atoms)
        rows = [{"value": fmt(v), "prob": fmt(p)} for v, p in Y.atoms]
        return _render(cfg, Y.to_dict(), table, rows), EXIT_OK
    if cmd == "reduce":
        cert = bridge.dist_to_hypergraph(load_dist(a.dist), a.l, a.d, a.r)
        lines = [f"m = {cert.m}, |E| = {cert.hypergraph.num_edges}",
                 f"N = {cert.N}, N1 = {cert.N1}, N2 = {cert.N2}"]
        lines += [f"[{'ok' if c.passed else 'FAIL'}] {c.name}: {fmt(c.lhs)} vs {fmt(c.rhs)}"
                  for c in cert.checks]
        rows = [c.to_dict() for c in cert.checks]
        return _render(cfg, cert.to_dict(), "\n".join(lines), rows), (EXIT_OK if cert.ok else EXIT_FAIL)
    if cmd == "probe":
        r_values = [int(x) for x in a.r.split(",")]
        rows = [row.to_dict() for row in bridge.equivalence_probe(a.l, a.d, load_dist(a.dist), r_values)]
        head = list(rows[0]) if rows else []
        table = "\t".join(head) + "\n" + "".join("\t".join(str(r[h]) for h in head) + "\n" for r in rows)
        ok = all(r["dominated"] for r in rows)
        return _render(cfg, {"l": a.l, "d": a.d, "rows": rows}, table, rows), (EXIT_OK if ok else EXIT_FAIL)
    if cmd == "verify":
        outcomes = verify.run_all(cfg.seed)
        passed = sum(o.passed for o in outcomes)
        payload = {"passed": passed, "failed": len(outcomes) - passed,
                   "checks": [{"name": o.name, "pass": o.passed, "detail": o.detail} for o in outcomes]}
        table = "".join(f"[{'PASS' if o.passed else 'FAIL'}] {o.name}{' - ' + o.detail if o.detail else ''}\n"
                        for o in outcomes) + f"{passed}/{len(outcomes)} passed\n"
        rows = [{"name": o.name, "pass": o.passed, "detail": o.detail} for o in outcomes]
        return _render(cfg, payload, table, rows), (EXIT_OK if passed == len(outcomes) else EXIT_FAIL)
    raise AssertionError(cmd)


def run(cfg: RunConfig) -> int:
    try:
        text, status = _dispatch(cfg)
    except BoundViolationError as exc:
        print(f"BUG: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    first = argv[0] if argv and not argv[0].startswith("-") else None
    if first is not None and first not in SUBCOMMANDS:
        build_parser().print_usage(sys.stderr)
        print(f"hypermatch: unknown subcommand {first!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    cfg = RunConfig(args.command, args, seed=args.seed, threads=args.threads, max_enum=args.max_enum,
                    max_atoms=args.max_atoms, format=args.format, precision=args.precision, out=args.out,
                    inputs=[getattr(args, n) for n in ("graph", "dist") if getattr(args, n, None)])
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
