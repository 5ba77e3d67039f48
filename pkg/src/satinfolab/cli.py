"""Command-line front end: ``satinfolab <command> ...``.

Exit codes: 0 success, 10 satisfiable, 20 unsatisfiable (``solve`` only),
1 usage or parse error, 2 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import __version__, metrics, trbs
from .codec import INVALID, decode_instance
from .core import DimacsError, DuplicateVariableError, parse_dimacs
from .machines import enumerate_relation, format_blocks
from .oracle import CAP_ENV, CapExceededError, oracle_cap, relation_record_count, solve_brute
from .table import (DEFAULT_DEPTH_CAP, TableCapError, build_table, deserialize, lookup, serialize,
                    table_stats)
from .trbs import (PATTERN_FAMILY, PatternExhausted, batch_size_report, census, decode_instances,
                   encode_trbs, format_pattern, parse_pattern_family, random_bits, read_batch,
                   write_batch)

EXIT_OK, EXIT_SAT, EXIT_UNSAT, EXIT_USAGE, EXIT_CAP = 0, 10, 20, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def run_report(command: str, parameters: dict, outputs: dict, timings: dict, seed=None) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "outputs": outputs,
        "timings": timings,
        "version": __version__,
        "seed": seed,
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(args, command: str, outputs: dict, text: str, timings: Optional[dict] = None, seed=None):
    if args.json:
        params = {k: v for k, v in vars(args).items() if k not in ("func", "json")}
        print(dumps(run_report(command, params, outputs, timings or {}, seed)))
    else:
        print(text)


def _read_input(path: Optional[str]) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text()


def cmd_solve(args) -> int:
    text = _read_input(args.file)
    if args.format == "dimacs":
        instance = parse_dimacs(text)
    else:
        bits = text.strip()
        instance = decode_instance(bits)
        if instance is INVALID:
            raise UsageError(f"input does not decode to an instance: {bits[:40]!r}")
    t0 = time.perf_counter()
    result = solve_brute(instance, cap=args.max_n)
    elapsed = time.perf_counter() - t0
    if result.sat:
        lits = [str(i if b else -i) for i, b in enumerate(result.model.bits, 1)]
        text_out = "s SATISFIABLE\nv " + " ".join(lits + ["0"])
    else:
        text_out = "s UNSATISFIABLE"
    outputs = {
        "n": instance.n,
        "m": instance.m,
        "verdict": result.verdict,
        "model": result.model.to_string() if result.sat else None,
    }
    _emit(args, "solve", outputs, text_out, {"solve_seconds": elapsed})
    return EXIT_SAT if result.sat else EXIT_UNSAT


def cmd_enumerate(args) -> int:
    t0 = time.perf_counter()
    records = list(enumerate_relation(args.max_n, args.max_m, args.max_records))
    blocks = list(format_blocks(records))
    elapsed = time.perf_counter() - t0
    if args.out:
        Path(args.out).write_text("".join(b + "\n" for b in blocks))
    formulas = {r.formula_key for r in records}
    outputs = {
        "records": len(records),
        "formulas": len(formulas),
        "no_records": sum(r.answer is None for r in records),
        "blocks": blocks if args.out is None else None,
    }
    if args.check:
        outputs["oracle_total"] = relation_record_count(args.max_n, args.max_m)
    text = "\n".join(blocks) if args.out is None else f"wrote {len(blocks)} blocks to {args.out}"
    text += f"\n# {len(records)} records, {len(formulas)} formulas"
    _emit(args, "enumerate", outputs, text, {"seconds": elapsed})
    return EXIT_OK


def cmd_table(args) -> int:
    path = Path(args.path) if args.path else None
    if args.action == "build":
        table = build_table(args.depth, depth_cap=args.depth_cap, cap=args.max_n, workers=args.workers)
        blob = serialize(table)
        if path:
            path.write_bytes(blob)
        stats = table_stats(table)
        _emit(args, "table build", stats.payload(), _format_stats(stats), {"build_seconds": table.build_time})
        return EXIT_OK
    if path is None or not path.exists():
        raise UsageError("table lookup/stats need --path to a built table")
    table = deserialize(path.read_bytes())
    if args.action == "stats":
        stats = table_stats(table)
        _emit(args, "table stats", stats.payload(), _format_stats(stats))
        return EXIT_OK
    if args.key is None:
        raise UsageError("table lookup needs --key")
    res = lookup(table, args.key)
    outputs = {
        "key": args.key,
        "answer": res.answer.model.to_string() if res.answer.sat else None,
        "invalid": res.invalid,
        "steps": res.steps,
        "bit_ops": res.bit_ops,
    }
    answer = outputs["answer"] if res.answer.sat else "∅"
    _emit(args, "table lookup", outputs, f"answer {answer}\nsteps {res.steps}\nbit_ops {res.bit_ops}")
    return EXIT_OK


def _format_stats(stats) -> str:
    return "\n".join(f"{k} {v}" for k, v in stats.payload().items())


def _bits_for(args, n: int) -> str:
    if args.bits:
        return args.bits
    return random_bits(1 << n, args.seed)


def cmd_trbs(args) -> int:
    family = parse_pattern_family(args.pattern_family) if args.pattern_family else PATTERN_FAMILY
    n = args.n
    if args.action == "encode":
        bits = _bits_for(args, n)
        try:
            batch = encode_trbs(bits, n, args.mode, family, cap=args.max_n)
        except PatternExhausted as exc:
            _emit(args, "trbs encode", {"bits": bits, "pattern_exhausted": exc.row}, f"PatternExhausted {exc.row}",
                  seed=args.seed)
            return EXIT_USAGE
        text = write_batch(batch)
        if args.out:
            Path(args.out).write_text(text)
        outputs = {"bits": bits, "patterns": [None if p is None else format_pattern(p) for p in batch.patterns]}
        _emit(args, "trbs encode", outputs, text if not args.out else f"wrote batch to {args.out}", seed=args.seed)
        return EXIT_OK
    if args.action == "decode":
        meta, instances = read_batch(_read_input(args.path))
        result = decode_instances(instances, meta["n"], cap=args.max_n)
        outputs = {"bits": result.bits, "mismatches": result.mismatches}
        _emit(args, "trbs decode", outputs, result.bits + ("" if result.ok else f"\nmismatches {result.mismatches}"))
        return EXIT_OK
    if args.action == "census":
        report = census(n, family, cap=args.max_n)
        if args.out:
            Path(args.out).write_text(report.to_csv())
        summary = report.summary()
        lines = [f"pattern {p}: unsat for all j = {v} ({report.unsat_counts()[p]}/{1 << n})"
                 for p, v in summary["all_unsat"].items()]
        lines.append(f"rows {summary['rows']} complete {summary['complete']} "
                     f"unsat_fraction {summary['unsat_fraction']:.4f}")
        _emit(args, "trbs census", summary, "\n".join(lines))
        return EXIT_OK
    if args.action == "size":
        report = batch_size_report(n, args.K)
        _emit(args, "trbs size", report, "\n".join(f"{k} {v}" for k, v in report.items()))
        return EXIT_OK
    # roundtrip
    outputs = trbs.roundtrip_experiment(n, args.trials, args.seed, args.mode, family, args.max_n)
    rep = census(n, family, cap=args.max_n).summary()
    outputs["census"] = rep
    text = (f"trials {args.trials} roundtrip_ok {outputs['roundtrip_ok']} "
            f"pattern_exhausted {outputs['pattern_exhausted']} mismatched {outputs['mismatched']}\n"
            f"{'PASS' if outputs['silent_failures'] == 0 else 'FAIL'} (silent failures: {outputs['silent_failures']})\n"
            f"census unsat_fraction {rep['unsat_fraction']:.4f} all_unsat {rep['all_unsat']}")
    _emit(args, "trbs roundtrip", outputs, text, seed=args.seed)
    return EXIT_OK if outputs["silent_failures"] == 0 else EXIT_USAGE


def _poly(text: str):
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise UsageError(f"--poly needs comma-separated integers, got {text!r}") from None


def metric_value(name: str, values: list, alg_bits=None, rho=None, poly=None) -> dict:
    """Evaluate one named metric; returns a JSON-friendly dict."""
    def need(k):
        if len(values) != k:
            raise UsageError(f"metric {name} takes {k} positional argument(s)")

    if name == "paper_bit_length":
        need(2)
        return {"value": metrics.paper_bit_length(int(values[0]), int(values[1]))}
    if name == "uniform_length":
        need(2)
        return {"value": metrics.uniform_length(int(values[0]), int(values[1]))}
    if name == "logarithmic_length":
        need(1)
        n = int(values[0])
        return {"value": metrics.logarithmic_length(n), "bound15": metrics.bound15(n),
                "bound_holds": metrics.bound15_holds(n)}
    if name == "lambert_w":
        need(1)
        return {"value": metrics.lambert_w(float(values[0]))}
    if name == "n_lower_bound":
        need(1)
        return {"value": metrics.n_lower_bound(int(values[0])), "d": metrics.D}
    if name == "info_production":
        need(1)
        return {"value": metrics.info_production(int(values[0]))}
    if name == "sat_content":
        need(1)
        return {"value": metrics.sat_content(int(values[0]))}
    if name == "permutation_info":
        need(1)
        v = metrics.permutation_info(int(values[0]))
        if isinstance(v, metrics.Bracket):
            return {"value": None, "low": v.low, "high": v.high}
        return {"value": v}
    if name in ("accessible_info", "crossover"):
        if alg_bits is None or rho is None or poly is None:
            raise UsageError(f"metric {name} needs --alg-bits, --rho and --poly")
        if name == "accessible_info":
            need(1)
            return {"value": metrics.accessible_info(int(values[0]), alg_bits, rho, poly)}
        need(0)
        c = metrics.crossover(alg_bits, rho, poly)
        pred = c - 1
        return {
            "value": c,
            "sat_content": metrics.sat_content(c),
            "accessible_info": metrics.accessible_info(c, alg_bits, rho, poly),
            "predecessor": pred,
            "predecessor_fails": pred < 1 or metrics.sat_content(pred) <= metrics.accessible_info(pred, alg_bits, rho, poly),
        }
    raise UsageError(f"unknown metric {name!r}")


METRIC_NAMES = ("paper_bit_length", "uniform_length", "logarithmic_length", "lambert_w", "n_lower_bound",
                "info_production", "accessible_info", "crossover", "sat_content", "permutation_info")


def cmd_metrics(args) -> int:
    poly = _poly(args.poly) if args.poly else None
    rho = args.rho
    if rho is not None and float(rho).is_integer():
        rho = int(rho)
    out = metric_value(args.name, args.values, args.alg_bits, rho, poly)
    text = " ".join(f"{k}={v}" for k, v in out.items() if k != "value")
    text = f"{out['value']}" + (f"\n{text}" if text else "")
    _emit(args, "metrics", out, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="satinfolab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, cap=True):
        sp.add_argument("--json", action="store_true", help="emit a JSON run report")
        if cap:
            sp.add_argument("--max-n", type=int, default=None,
                            help=f"oracle cap on n (default {oracle_cap()}, env {CAP_ENV})")

    sp = sub.add_parser("solve", help="solve an instance by exhaustive search")
    sp.add_argument("file", nargs="?", help="input file, stdin when omitted")
    sp.add_argument("--format", choices=("dimacs", "canonical"), default="dimacs")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("enumerate", help="stream the SAT relation in enumeration order")
    sp.add_argument("--max-n", type=int, default=1, help="largest variable count to enumerate")
    sp.add_argument("--max-m", type=int, default=1)
    sp.add_argument("--max-records", type=int, default=None)
    sp.add_argument("--out", help="write the tape-5 dump here")
    sp.add_argument("--check", action="store_true", help="also count the expected records with the oracle")
    common(sp, cap=False)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("table", help="build, query and inspect the solution table")
    sp.add_argument("action", choices=("build", "lookup", "stats"))
    sp.add_argument("--depth", type=int, default=8)
    sp.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)
    sp.add_argument("--key")
    sp.add_argument("--path")
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("trbs", help="bit-sequence embedding experiments")
    sp.add_argument("action", choices=("encode", "decode", "census", "roundtrip", "size"))
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--mode", choices=("literal", "verified"), default="verified")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--bits", help="explicit bit sequence instead of a random one")
    sp.add_argument("--pattern-family", help="comma-separated flip patterns, e.g. 23,2,3,4")
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--K", type=int, default=2, help="number bound for the uniform cost size")
    sp.add_argument("--path", help="batch file to decode")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_trbs)

    sp = sub.add_parser("metrics", help="evaluate a counting or bound formula")
    sp.add_argument("name", choices=METRIC_NAMES)
    sp.add_argument("values", nargs="*")
    sp.add_argument("--alg-bits", type=int)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--poly", help="ascending coefficients, e.g. 0,0,0,1 for x^3")
    common(sp)
    sp.set_defaults(func=cmd_metrics)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "trbs" and args.action == "roundtrip" and args.seed is None:
        args.seed = 0
    try:
        return args.func(args)
    except (CapExceededError, TableCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, DimacsError, DuplicateVariableError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
