"""Command-line front end.

Subcommands: ``gen``, ``synth``, ``check``, ``bound``, ``exact``, ``lab``
(``separation`` / ``rankstats`` / ``ramsey`` / ``bias`` / ``sweep``) and
``census``.  Matrix arguments accept either a file path (text or JSON
format) or a generator spec: ``sierpinski:8``, ``hadamard:16``,
``setint:8``, ``random:<m>:<n>:<seed>``, ``exampleA``, ``exampleB``.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 budget or search limit exceeded.  Every randomized command requires an
explicit ``--seed``.  All reports are available as JSON (``--json`` to
stdout, ``--json PATH`` to a file) and carry a schema version; the schema
ships as ``report.schema.json`` next to this module.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import bounds as bounds_mod
from . import exact as exact_mod
from . import lab as lab_mod
from . import synthesis as synth_mod
from .circuits import (
    LayeredCircuit,
    ParseError,
    depth,
    depth_layered,
    dumps_circuit,
    flatten,
    is_cancellation_free,
    size_gates,
    size_wires,
    slp_loads,
    verify,
)
from .matrices import (
    BitMatrix,
    BudgetExceededError,
    DimensionError,
    example_a,
    example_b,
    gen_hadamard,
    gen_random,
    gen_setintersection,
    gen_sierpinski,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def schema_path() -> Path:
    return Path(__file__).with_name("report.schema.json")


def fixtures_dir() -> Path:
    return Path(__file__).with_name("fixtures")


# ---------------------------------------------------------------------------
# Argument helpers


def parse_genspec(spec: str) -> Optional[BitMatrix]:
    """Generator spec to matrix, or None if it does not look like one."""
    if spec == "exampleA":
        return example_a()
    if spec == "exampleB":
        return example_b()
    head, _, rest = spec.partition(":")
    makers = {"sierpinski": gen_sierpinski, "hadamard": gen_hadamard, "setint": gen_setintersection}
    if head in makers:
        try:
            return makers[head](int(rest))
        except ValueError as exc:
            raise CliError(f"bad generator spec {spec!r}: {exc}") from exc
    if head == "random":
        parts = rest.split(":")
        if len(parts) != 3:
            raise CliError(f"random spec takes m:n:seed, got {spec!r}")
        try:
            m, n, seed = (int(p) for p in parts)
        except ValueError as exc:
            raise CliError(f"bad random spec {spec!r}") from exc
        return gen_random(m, n, seed)
    return None


def load_matrix_arg(arg: str) -> BitMatrix:
    gen = parse_genspec(arg)
    if gen is not None:
        return gen
    path = Path(arg)
    if not path.exists():
        raise CliError(f"{arg!r} is neither a generator spec nor an existing file")
    text = path.read_text()
    try:
        if text.lstrip().startswith("{"):
            return BitMatrix.from_json_dict(json.loads(text))
        return BitMatrix.from_text(text)
    except (ValueError, KeyError) as exc:
        raise CliError(f"cannot parse matrix file {arg}: {exc}") from exc


def _read_circuit(path_arg: Optional[str]):
    text = sys.stdin.read() if path_arg in (None, "-") else Path(path_arg).read_text()
    return slp_loads(text)


def _emit_report(report: dict, args, human: str) -> None:
    report = {"schema_version": SCHEMA_VERSION, **report}
    target = getattr(args, "json", None)
    if target is None:
        print(human)
    elif target == "-":
        print(json.dumps(report, indent=2))
    else:
        Path(target).write_text(json.dumps(report, indent=2) + "\n")
        print(human)


def _add_json_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--json",
        nargs="?",
        const="-",
        default=None,
        metavar="PATH",
        help="emit the JSON report (to stdout, or to PATH)",
    )


# ---------------------------------------------------------------------------
# Subcommands


def cmd_gen(args) -> int:
    mat = parse_genspec(args.spec)
    if mat is None:
        raise CliError(f"unknown generator spec {args.spec!r}")
    if args.json is not None:
        payload = {"schema_version": SCHEMA_VERSION, "type": "matrix", **mat.to_json_dict()}
        out = json.dumps(payload, indent=2) + "\n"
    else:
        out = mat.to_text()
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _input_matrix(args) -> BitMatrix:
    if args.infile:
        return load_matrix_arg(args.infile)
    return BitMatrix.from_text(sys.stdin.read())


def cmd_synth(args) -> int:
    method = args.method
    family = {
        "sierpinski": (synth_mod.sierpinski_circuit, gen_sierpinski),
        "setint": (synth_mod.setintersection_or_circuit, gen_setintersection),
        "hadamard": (synth_mod.hadamard_circuit, gen_hadamard),
    }
    if method in family:
        construct, generate = family[method]
        if args.n is not None:
            n = args.n
        else:
            mat = _input_matrix(args)
            n = mat.rows
            if mat != generate(n):
                raise CliError(f"input matrix is not the {method} matrix of size {n}")
        res = construct(n)
    elif method == "product":
        if not (args.infile and args.in2):
            raise CliError("product needs --in (left factor) and --in2 (right factor)")
        res = synth_mod.product_circuit(
            load_matrix_arg(args.infile), load_matrix_arg(args.in2), args.depth_mode
        )
    else:
        mat = _input_matrix(args)
        if method == "naive":
            res = synth_mod.naive_rowwise(mat)
        elif method == "paar":
            res = synth_mod.paar_greedy(mat)
        elif method == "bp":
            res = synth_mod.boyar_peralta(mat)
        elif method == "lupanov":
            res = synth_mod.lupanov(mat)
        elif method == "lupanov2":
            res = synth_mod.lupanov_depth2(mat)
        else:
            raise CliError(f"unknown method {method!r}")
    slp = dumps_circuit(res.circuit)
    layered = isinstance(res.circuit, LayeredCircuit)
    report = {
        "type": "synth",
        "method": res.method,
        ("wires" if layered else "gates"): res.cost,
        "depth": depth_layered(res.circuit) if layered else depth(res.circuit),
        "cancellation_free": res.cancellation_free,
        "params": {k: list(v) if isinstance(v, tuple) else v for k, v in res.params.items()},
    }
    if args.out:
        Path(args.out).write_text(slp)
        _emit_report(report, args, f"{res.cost} {'wires' if layered else 'gates'}, "
                                   f"{'cancellation-free' if res.cancellation_free else 'uses cancellation'}")
    else:
        sys.stdout.write(slp)
        # keep stdout clean for piping; the report goes to stderr or --json PATH
        target = args.json
        if target and target != "-":
            Path(target).write_text(json.dumps({"schema_version": SCHEMA_VERSION, **report}, indent=2) + "\n")
        else:
            print(json.dumps({"schema_version": SCHEMA_VERSION, **report}), file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    circuit = _read_circuit(args.infile)
    target = load_matrix_arg(args.against)
    flat = flatten(circuit) if isinstance(circuit, LayeredCircuit) else circuit
    try:
        ok = verify(flat, target)
    except DimensionError:
        ok = False  # wrong shape cannot compute the target
    cf = (
        is_cancellation_free(flat)
        if flat.connective == "XOR"
        else True  # OR circuits cannot cancel
    )
    report = {
        "type": "check",
        "verifies": ok,
        "cancellation_free": cf,
        "gates": size_gates(flat),
        "depth": depth_layered(circuit) if isinstance(circuit, LayeredCircuit) else depth(flat),
    }
    if isinstance(circuit, LayeredCircuit):
        report["wires"] = size_wires(circuit)
    cost = (
        f"{report['wires']} wires" if "wires" in report else f"{report['gates']} gates"
    )
    human = f"{cost}, {'cancellation-free' if cf else 'uses cancellation'}"
    if not ok:
        human += " -- DOES NOT COMPUTE the target matrix"
    _emit_report(report, args, human)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_exact(args) -> int:
    mat = load_matrix_arg(args.infile)
    model = args.model.upper()
    out = exact_mod.optimal_size(mat, model, limit=args.limit)
    report = {
        "type": "exact",
        "model": model,
        "optimal": out.optimal_size,
        "nodes": out.nodes_expanded,
        "limit": out.limit,
        "exceeded": out.exceeded,
    }
    if out.witness is not None and args.emit_witness:
        Path(args.emit_witness).write_text(dumps_circuit(out.witness))
    human = (
        f"optimal {model} size {out.optimal_size} ({out.nodes_expanded} nodes)"
        if not out.exceeded
        else f"no circuit within {out.limit} gates ({out.nodes_expanded} nodes)"
    )
    _emit_report(report, args, human)
    return EXIT_BUDGET if out.exceeded else EXIT_OK


def cmd_bound(args) -> int:
    mat = load_matrix_arg(args.infile)
    ks = tuple(args.kfree or ())
    if args.all and mat.rows == mat.cols and mat.rows > 1:
        auto_k = max(1, (mat.rows.bit_length() - 1) * 2)
        if auto_k not in ks:
            ks = ks + (auto_k,)
    needs_seed = any(_kfree_needs_evidence(mat, k) for k in ks)
    if needs_seed and args.seed is None:
        raise CliError("k-freeness at this size is evidence-based: --seed is required")
    report_obj = bounds_mod.bound_report(
        mat,
        kfree_ks=ks,
        kst_a=args.kst,
        evidence_budget=args.budget,
        seed=args.seed if args.seed is not None else 0,
    )
    report = {"type": "bound", **report_obj.to_dict()}
    morg = report_obj.morgenstern_log2_absdet
    human_bits = [f"rank {report_obj.rank_gf2}", f"heavy rows {report_obj.distinct_heavy_rows}"]
    if morg is not None:
        human_bits.append(f"log2|det| {morg:.3f}")
    if report_obj.sierpinski_closed_form is not None:
        human_bits.append(f"sierpinski bound {report_obj.sierpinski_closed_form}")
    _emit_report(report, args, ", ".join(human_bits))
    return EXIT_OK


def _kfree_needs_evidence(mat: BitMatrix, k: int) -> bool:
    import math as _math

    s = k + 1
    small, large = sorted((mat.rows, mat.cols))
    if small < s:
        return False
    return _math.comb(small, s) * large > 10**9


def cmd_census(args) -> int:
    rep = exact_mod.census(args.n)
    report = {"type": "census", **rep.to_dict()}
    _emit_report(
        report,
        args,
        f"census n={args.n}: max ratio CF/XOR = {rep.max_ratio_cf_over_xor:.3f} "
        f"over {rep.matrices} matrices",
    )
    return EXIT_OK


def cmd_lab(args) -> int:
    sub = args.lab_command
    if sub == "separation":
        cfg = lab_mod.ExperimentConfig(
            n=args.n,
            master_seed=args.seed,
            c=args.c,
            trials=args.trials,
            submatrix_budget=args.budget,
            rank_samples=args.rank_samples,
        )
        rep = lab_mod.run_experiment(cfg, threads=args.threads)
        report = {"type": "lab.separation", **rep.to_dict()}
        human = (
            f"n={args.n}: min density {rep.min_density:.4f}, "
            f"max composed gates {rep.max_composed_gates}, "
            f"median ratio proxy {rep.median_ratio_proxy}"
        )
        _emit_report(report, args, human)
        return EXIT_OK
    if sub == "rankstats":
        mat = load_matrix_arg(args.infile)
        stats = lab_mod.submatrix_rank_stats(mat, args.k, args.samples, args.seed)
        report = {"type": "lab.rankstats", "seed": args.seed, **stats.to_dict()}
        _emit_report(
            report, args,
            f"k={args.k}: min rank {stats.min_rank}, mean {stats.mean_rank:.2f}",
        )
        return EXIT_OK
    if sub == "ramsey":
        mat = load_matrix_arg(args.infile)
        out = lab_mod.ramsey_check(mat, args.t, args.budget, args.seed)
        report = {"type": "lab.ramsey", **out.to_dict()}
        _emit_report(report, args, f"t={args.t}: {out.status}")
        return EXIT_OK
    if sub == "bias":
        mask = _parse_mask_spec(args.mask)
        rep = lab_mod.estimate_conditional_bias(
            args.m, mask, args.samples, args.seed, min_accepted=args.min_accepted
        )
        report = {"type": "lab.bias", **rep.to_dict()}
        if rep.status != "ok":
            _emit_report(report, args, f"insufficient samples ({rep.accepted} accepted)")
            return EXIT_BUDGET
        _emit_report(
            report, args,
            f"estimate {rep.estimate:.4f} in [{rep.wilson_low:.4f}, {rep.wilson_high:.4f}] "
            f"({rep.accepted} accepted)",
        )
        return EXIT_OK
    if sub == "sweep":
        ns = [int(tok) for tok in args.ns.split(",") if tok]
        if not ns:
            raise CliError("--ns needs at least one size")
        base = lab_mod.ExperimentConfig(
            n=ns[0],
            master_seed=args.seed,
            c=args.c,
            trials=args.trials,
            submatrix_budget=args.budget,
            rank_samples=args.rank_samples,
        )
        rep = lab_mod.ratio_sweep(ns, base, threads=args.threads)
        report = {"type": "lab.sweep", **rep.to_dict()}
        human = "; ".join(
            f"n={p.n}: proxy {p.median_ratio_proxy and round(p.median_ratio_proxy, 5)}, "
            f"heuristic {p.median_heuristic_ratio:.2f}"
            for p in rep.points
        )
        _emit_report(report, args, human)
        return EXIT_OK
    raise CliError(f"unknown lab subcommand {sub!r}")


def _parse_mask_spec(spec: str):
    rows = spec.split("/")
    out = []
    for row in rows:
        vals = []
        for ch in row:
            if ch == "?":
                vals.append(None)
            elif ch in "01":
                vals.append(int(ch))
            else:
                raise CliError(f"mask characters must be 0, 1 or ?, got {ch!r}")
        out.append(vals)
    return out


# ---------------------------------------------------------------------------
# Parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def build_parser() -> _Parser:
    p = _Parser(prog="lincirc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="emit a generator matrix")
    g.add_argument("spec")
    g.add_argument("--out")
    _add_json_flag(g)
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("synth", help="synthesize a circuit for a matrix")
    s.add_argument(
        "--method",
        required=True,
        choices=[
            "naive", "paar", "bp", "lupanov", "lupanov2",
            "sierpinski", "setint", "hadamard", "product",
        ],
    )
    s.add_argument("--in", dest="infile", help="matrix file or generator spec (default: stdin)")
    s.add_argument("--in2", dest="in2", help="second factor for --method product")
    s.add_argument("--n", type=int, help="size for the family constructions")
    s.add_argument("--depth-mode", choices=["fanin2", "depth4"], default="fanin2")
    s.add_argument("--out", help="write the SLP here (default: stdout)")
    _add_json_flag(s)
    s.set_defaults(fn=cmd_synth)

    c = sub.add_parser("check", help="verify an SLP against a matrix")
    c.add_argument("--in", dest="infile", help="SLP file (default: stdin)")
    c.add_argument("--against", required=True, help="matrix file or generator spec")
    _add_json_flag(c)
    c.set_defaults(fn=cmd_check)

    e = sub.add_parser("exact", help="optimal circuit size by exhaustive search")
    e.add_argument("--in", dest="infile", required=True)
    e.add_argument("--model", required=True, choices=["xor", "cf", "or"])
    e.add_argument("--limit", type=int, default=exact_mod.DEFAULT_LIMIT)
    e.add_argument("--emit-witness", dest="emit_witness")
    _add_json_flag(e)
    e.set_defaults(fn=cmd_exact)

    b = sub.add_parser("bound", help="lower-bound certificates for a matrix")
    b.add_argument("--in", dest="infile", required=True)
    b.add_argument("--kfree", type=int, action="append", metavar="K")
    b.add_argument("--kst", type=int, metavar="A")
    b.add_argument("--all", action="store_true", help="include the default k-freeness quantity")
    b.add_argument("--seed", type=int)
    b.add_argument("--budget", type=int, default=50_000)
    _add_json_flag(b)
    b.set_defaults(fn=cmd_bound)

    n = sub.add_parser("census", help="exhaustive tiny-n optima census")
    n.add_argument("--n", type=int, required=True)
    _add_json_flag(n)
    n.set_defaults(fn=cmd_census)

    lab = sub.add_parser("lab", help="seeded experiments")
    labsub = lab.add_subparsers(dest="lab_command", required=True)

    sep = labsub.add_parser("separation")
    sep.add_argument("--n", type=int, required=True)
    sep.add_argument("--c", type=int, default=14)
    sep.add_argument("--trials", type=int, required=True)
    sep.add_argument("--seed", type=int, required=True)
    sep.add_argument("--budget", type=int, default=50_000)
    sep.add_argument("--rank-samples", dest="rank_samples", type=int, default=50)
    sep.add_argument("--threads", type=int, default=1)
    _add_json_flag(sep)
    sep.set_defaults(fn=cmd_lab)

    rk = labsub.add_parser("rankstats")
    rk.add_argument("--in", dest="infile", required=True)
    rk.add_argument("--k", type=int, required=True)
    rk.add_argument("--samples", type=int, required=True)
    rk.add_argument("--seed", type=int, required=True)
    _add_json_flag(rk)
    rk.set_defaults(fn=cmd_lab)

    rm = labsub.add_parser("ramsey")
    rm.add_argument("--in", dest="infile", required=True)
    rm.add_argument("--t", type=int, required=True)
    rm.add_argument("--budget", type=int, default=50_000)
    rm.add_argument("--seed", type=int, required=True)
    _add_json_flag(rm)
    rm.set_defaults(fn=cmd_lab)

    bi = labsub.add_parser("bias")
    bi.add_argument("--m", type=int, required=True)
    bi.add_argument("--mask", required=True, help="rows of 0/1/? separated by '/', e.g. 00/0?")
    bi.add_argument("--samples", type=int, required=True)
    bi.add_argument("--seed", type=int, required=True)
    bi.add_argument("--min-accepted", dest="min_accepted", type=int, default=100)
    _add_json_flag(bi)
    bi.set_defaults(fn=cmd_lab)

    sw = labsub.add_parser("sweep")
    sw.add_argument("--ns", required=True, help="comma-separated sizes, e.g. 64,128,256")
    sw.add_argument("--c", type=int, default=14)
    sw.add_argument("--trials", type=int, required=True)
    sw.add_argument("--seed", type=int, required=True)
    sw.add_argument("--budget", type=int, default=50_000)
    sw.add_argument("--rank-samples", dest="rank_samples", type=int, default=50)
    sw.add_argument("--threads", type=int, default=1)
    _add_json_flag(sw)
    sw.set_defaults(fn=cmd_lab)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except CliError as exc:
        print(f"lincirc: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"lincirc: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceededError as exc:
        print(f"lincirc: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DimensionError, ValueError, OSError) as exc:
        print(f"lincirc: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
