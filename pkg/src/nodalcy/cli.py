"""Command-line front end.

    nodalcy schoen --dim 3 --out model.json
    nodalcy analyze --input model.json --power-check --modular-primes 11,31
    nodalcy verify-nodes --input model.json --sample 200
    nodalcy bott --n 2 --p 1 --q 1 --m 0
    nodalcy quadric-table --n 5 --k 3 --jmin -4 --jmax 5 --format markdown
    nodalcy rq --n 5 --mul "eta^2,eta"

Exit status is 0 on success, 1 on any validation error and 2 when the
product budget runs out; errors are written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .cohomtab import bott, parse_rq, quadric_cohomology_table, rq_multiply
from .errors import BadPrime, NodalcyError, OutOfBudget, SchemaError, UnknownCommand
from .exactfield import is_prime
from .hypersurface import ingest, require_odps, schoen_family, serialize, verify_nodes
from .smoothing import analyze, verify_sample

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2
COMMANDS = ("schoen", "analyze", "bott", "quadric-table", "rq", "verify-nodes")


class UsageError(NodalcyError):
    code = "UsageError"


@dataclass
class Config:
    modular_primes: list[int] | None = None
    product_budget: int = 10**6
    output_format: str = "json"
    seed: int = 0
    timings: bool = True

    def validate(self, order: int | None = None) -> None:
        if self.product_budget < 1:
            raise UsageError("budget must be a positive integer")
        for p in self.modular_primes or ():
            if not is_prime(p):
                raise BadPrime(f"{p} is not prime", prime=p)
            if order is not None and (p - 1) % order:
                raise BadPrime(f"{p} is not 1 mod {order}", prime=p)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _primes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad prime list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nodalcy", description="Smoothings of nodal Calabi-Yau hypersurfaces.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("schoen", help="write Schoen's nodal hypersurface as model JSON")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--out")

    a = sub.add_parser("analyze", help="compute I, K, span dimension and smoothability")
    a.add_argument("--input", required=True)
    a.add_argument("--power-check", action="store_true")
    a.add_argument("--modular-primes", type=_primes)
    a.add_argument("--budget", type=int, default=10**6)
    a.add_argument("--mode", choices=("auto", "exact", "partial"), default="auto")
    a.add_argument("--subsample", type=int, default=120)
    a.add_argument("--verify-sample", type=int, default=200,
                   help="nodes to verify exactly in partial mode")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--format", choices=("json", "markdown"), default="json")
    a.add_argument("--no-timings", action="store_true")
    a.add_argument("--out")

    v = sub.add_parser("verify-nodes", help="check every (or a sample of) listed node is an ODP")
    v.add_argument("--input", required=True)
    v.add_argument("--sample", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")

    b = sub.add_parser("bott", help="h^q(P^n, Omega^p(m))")
    for flag in ("--n", "--p", "--q", "--m"):
        b.add_argument(flag, type=int, required=True)

    t = sub.add_parser("quadric-table", help="h^q(Omega_Q^k(j)) for q <= 2")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--jmin", type=int, required=True)
    t.add_argument("--jmax", type=int, required=True)
    t.add_argument("--format", choices=("csv", "json", "markdown"), default="csv")
    t.add_argument("--out")

    r = sub.add_parser("rq", help="multiply classes in R_Q")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--mul", required=True, help='two comma-separated expressions, e.g. "eta^2,A+B"')
    return ap


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise SchemaError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None, stdout) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def render_markdown_report(report: dict) -> str:
    model = report["model"]
    res = report["result"]
    lines = [
        f"# Smoothing analysis: {model['name']}",
        "",
        f"- dimension n = {model['n']}, m = {model['m']}, field Q(zeta_{model['cyclotomic_order']})",
        f"- nodes: {model['node_count']}",
        f"- method: {res['method']}" + (" (partial)" if res["partial"] else ""),
        "",
        "| quantity | value |",
        "|---|---|",
    ]
    for key in ("dim_I", "dim_K", "span_dimension", "smoothable", "power_map_contained", "power_map_spans"):
        lines.append(f"| {key} | {res[key]} |")
    lines += ["", "Assumptions:", ""]
    for k, val in sorted(res.get("assumptions", {}).items()):
        lines.append(f"- {k}: {val}")
    if res.get("note"):
        lines += ["", res["note"]]
    return "\n".join(lines) + "\n"


def render_markdown_table(table) -> str:
    js = list(range(table.j_range[0], table.j_range[1] + 1))
    head = f"h^q(Omega_Q^{table.k}(j)), n = {table.n}"
    lines = [f"### {head}", "", "| (p,q) \\ j | " + " | ".join(map(str, js)) + " |",
             "|---" * (len(js) + 1) + "|"]
    for q in range(table.q_range[0], table.q_range[1] + 1):
        cells = []
        for j in js:
            v = table.entries[(q, j)]
            cells.append("?" if v is None else str(v))
        lines.append(f"| ({table.k},{q}) | " + " | ".join(cells) + " |")
    lines += ["", "? = undetermined"]
    return "\n".join(lines) + "\n"


def _cmd_schoen(args, stdout):
    model = schoen_family(args.dim)
    _emit(dumps(serialize(model)), args.out, stdout)
    if args.out:
        stdout.write(dumps({"node_count": len(model.nodes), "out": args.out}))


def _cmd_analyze(args, stdout):
    cfg = Config(args.modular_primes, args.budget, args.format, args.seed, not args.no_timings)
    t_start = time.perf_counter()
    desc = _load_json(args.input)
    # huge node lists are verified on a sample instead of up front
    model = ingest(desc, verify=False)
    cfg.validate(model.field_order)
    exact = {"auto": None, "exact": True, "partial": False}[args.mode]
    t0 = time.perf_counter()
    res = analyze(model, power_check=args.power_check, primes=cfg.modular_primes or (),
                  budget=cfg.product_budget, exact=exact, subsample=args.subsample, seed=cfg.seed)
    t_analysis = time.perf_counter() - t0
    result = res.to_json()
    t0 = time.perf_counter()
    if res.partial:
        verification = verify_sample(model, args.verify_sample, cfg.seed)
        result["node_verification"] = {k: verification[k] for k in ("all_odp", "hessian_ranks", "sample_size")}
        result["node_verification"]["complete"] = verification["sample_size"] == len(model.nodes)
    else:
        recs = verify_nodes(model.f, model.nodes)
        require_odps(recs, model.n)
        result["node_verification"] = {
            "all_odp": True,
            "complete": True,
            "hessian_ranks": sorted({r.hessian_rank for r in recs}),
            "sample_size": len(recs),
        }
    t_verify = time.perf_counter() - t0
    timings = result.pop("timings", {})
    report = {
        "command": {"argv": ["analyze", "--input", args.input], "mode": args.mode,
                    "modular_primes": cfg.modular_primes, "power_check": args.power_check,
                    "budget": cfg.product_budget, "seed": cfg.seed},
        "model": model.summary(),
        "result": result,
    }
    if cfg.timings:
        timings.update({"analysis": t_analysis, "node_verification": t_verify,
                        "total": time.perf_counter() - t_start})
        report["timings"] = timings
    text = render_markdown_report(report) if cfg.output_format == "markdown" else dumps(report)
    _emit(text, args.out, stdout)


def _cmd_verify(args, stdout):
    model = ingest(_load_json(args.input), verify=False)
    if args.sample is not None:
        out = verify_sample(model, args.sample, args.seed)
        out.pop("indices")
        out["complete"] = out["sample_size"] == len(model.nodes)
    else:
        recs = verify_nodes(model.f, model.nodes)
        failures = [i for i, r in enumerate(recs) if not r.is_odp]
        out = {"all_odp": not failures, "complete": True, "failures": failures,
               "hessian_ranks": sorted({r.hessian_rank for r in recs}), "sample_size": len(recs)}
    out["node_count"] = len(model.nodes)
    _emit(dumps(out), args.out, stdout)
    if not out["all_odp"]:
        raise NodalcyError("some listed nodes are not ordinary double points")


def _cmd_bott(args, stdout):
    stdout.write(f"{bott(args.n, args.p, args.q, args.m)}\n")


def _cmd_table(args, stdout):
    table = quadric_cohomology_table(args.n, args.k, args.jmin, args.jmax)
    if args.format == "csv":
        text = table.to_csv()
    elif args.format == "json":
        text = dumps(table.to_json())
    else:
        text = render_markdown_table(table)
    _emit(text, args.out, stdout)


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return parts


def _cmd_rq(args, stdout):
    exprs = _split_top_level(args.mul)
    if len(exprs) != 2:
        raise UsageError("--mul takes exactly two comma-separated expressions")
    a, b = (parse_rq(args.n, e) for e in exprs)
    prod = rq_multiply(a, b)
    out = prod.to_json()
    out["product"] = str(prod)
    stdout.write(dumps(out))


_HANDLERS = {
    "schoen": _cmd_schoen,
    "analyze": _cmd_analyze,
    "verify-nodes": _cmd_verify,
    "bott": _cmd_bott,
    "quadric-table": _cmd_table,
    "rq": _cmd_rq,
}


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and not argv[0].startswith("-") and argv[0] not in COMMANDS:
            raise UnknownCommand(f"unknown command {argv[0]!r}; expected one of {', '.join(COMMANDS)}")
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
        _HANDLERS[args.command](args, stdout)
    except OutOfBudget as exc:
        stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return EXIT_BUDGET
    except NodalcyError as exc:
        stderr.write(json.dumps(exc.to_dict(), sort_keys=True, default=str) + "\n")
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n")
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
