"""``etf`` command line: verify, erasure, gen, classify, simulate.

Reports go to stdout as JSON, diagnostics to stderr. Exit codes: 0 success,
2 input or configuration error, 3 domain validation failure, 4 resource guard.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import matrixfile
from .channel import MODES, SimulationConfig, simulate
from .erasure import (
    ThreeCVerdict,
    check_3c_classification,
    check_4c_exhaustive,
    classify_uniformity,
    erasure_sweep,
    standard_form_row_sums_ok,
)
from .errors import (
    BadConfig,
    BadK,
    BadPrime,
    EtfError,
    IndexOutOfRange,
    MatrixFormatError,
    NotEtf,
    NotThreeModFour,
    TooLarge,
    TooManySubsets,
    UnknownFixture,
)
from .etf import AnalysisOperator, check_etf, frame_from_seidel, gram_from_seidel
from .report import dumps, make_report
from .seidel import (
    FIXTURE_NAMES,
    RootOfUnityGrid,
    SeidelMatrix,
    fixture_grid,
    paley_conference_matrix,
    standard_form,
)

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_GUARD = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _canonical(obj: dict) -> bytes:
    return (dumps(obj) + "\n").encode("utf-8")


def fixture_file_obj(name: str) -> dict:
    obj = matrixfile.rou_obj(fixture_grid(name))
    obj["provenance"] = f"fixture:{name}"
    return obj


def trivial_file_obj(n: int, k: int) -> dict:
    if n < 2 or k not in (1, n - 1):
        raise BadK(f"trivial frames need n >= 2 and k in {{1, n-1}}, got n={n}, k={k}")
    e = 0 if k == 1 else 1  # order 2: exponent 1 is -1
    grid = RootOfUnityGrid(2, tuple(tuple(None if i == j else e for j in range(n)) for i in range(n)))
    obj = matrixfile.rou_obj(grid)
    obj["provenance"] = f"trivial:n={n},k={k}"
    return obj


def paley_file_obj(q: int) -> dict:
    a = paley_conference_matrix(q)
    n = a.shape[0]
    # iA in order 4: +1 -> i (1), -1 -> -i (3)
    grid = RootOfUnityGrid(4, tuple(tuple(None if i == j else (1 if a[i, j] > 0 else 3)
                                          for j in range(n)) for i in range(n)))
    obj = matrixfile.rou_obj(grid)
    obj["provenance"] = f"paley:q={q}"
    return obj


def _load_input(args) -> tuple[matrixfile.Loaded, str]:
    if args.fixture is not None and args.path is not None:
        raise CliError(EXIT_INPUT, "give either a path or --fixture, not both")
    if args.fixture is not None:
        try:
            obj = fixture_file_obj(args.fixture)
        except UnknownFixture as exc:
            raise CliError(EXIT_INPUT, str(exc)) from None
        return matrixfile.from_obj(obj), matrixfile.digest(_canonical(obj))
    if args.path is None:
        raise CliError(EXIT_INPUT, "no input: give a matrix file path or --fixture NAME")
    loaded, raw = matrixfile.load(args.path)
    return loaded, matrixfile.digest(raw)


def _resolve_threads(value: Optional[int]) -> int:
    if value is not None:
        if value < 1:
            raise CliError(EXIT_INPUT, "--threads must be a positive integer")
        return value
    env = os.environ.get("ETF_NUM_THREADS")
    if env:
        try:
            t = int(env)
        except ValueError:
            t = 0
        if t < 1:
            raise CliError(EXIT_INPUT, f"ETF_NUM_THREADS must be a positive integer, got {env!r}")
        return t
    return os.cpu_count() or 1


def _etf_frame(q: SeidelMatrix):
    check = check_etf(q)
    if check.params is None:
        raise NotEtf("input Seidel matrix is not an ETF; supply an analysis-operator file instead")
    return check.params, frame_from_seidel(q, check.params)


# ------------------------------------------------------------------ commands


def cmd_verify(args) -> tuple[dict, int]:
    try:
        q, dig = _load_input(args)
    except (MatrixFormatError, CliError):
        raise
    except EtfError as exc:
        # validation failure: still report it
        dig = matrixfile.digest(Path(args.path).read_bytes()) if args.path else ""
        payload = {"seidel_valid": False, "is_etf": False, "params": None,
                   "residual": None, "error": f"{type(exc).__name__}: {exc}"}
        return make_report("verify", dig, payload), EXIT_DOMAIN
    if not isinstance(q, SeidelMatrix):
        raise CliError(EXIT_INPUT, "verify expects a Seidel matrix, not an analysis operator")
    check = check_etf(q)
    payload = {
        "seidel_valid": True,
        "is_etf": check.params is not None,
        "params": check.params.as_dict() if check.params else None,
        "residual": check.residual,
    }
    return make_report("verify", dig, payload), EXIT_OK


def cmd_erasure(args) -> tuple[dict, int]:
    loaded, dig = _load_input(args)
    threads = _resolve_threads(args.threads)
    if isinstance(loaded, AnalysisOperator):
        params, gram = None, loaded.gram()
    else:
        check = check_etf(loaded)
        if check.params is None:
            raise NotEtf("input Seidel matrix is not an ETF; supply an analysis-operator file instead")
        params, gram = check.params, gram_from_seidel(loaded, check.params)
    if args.m is not None:
        reports = [erasure_sweep(gram, args.m, params, threads)]
    else:
        reports = classify_uniformity(gram, args.max_m, params, threads)
    payload = {
        "n": int(gram.shape[0]),
        "k": params.k if params else int(loaded.k),
        "reports": [r.as_dict() for r in reports],
    }
    return make_report("erasure", dig, payload), EXIT_OK


def cmd_gen(args) -> tuple[dict, int]:
    if args.kind == "trivial":
        params = {"n": args.n, "k": args.k}
        obj = trivial_file_obj(args.n, args.k)
    elif args.kind == "paley":
        params = {"q": args.q}
        obj = paley_file_obj(args.q)
    else:
        params = {"name": args.name}
        obj = fixture_file_obj(args.name)
    matrixfile.from_obj(obj)  # self-check before writing
    data = _canonical(obj)
    if args.out:
        try:
            Path(args.out).write_bytes(data)
        except OSError as exc:
            raise CliError(EXIT_INPUT, f"cannot write {args.out}: {exc}") from None
    payload = {
        "kind": args.kind,
        "parameters": params,
        "n": obj["n"],
        "provenance": obj["provenance"],
        "digest": matrixfile.digest(data),
        "out": args.out,
        "matrix": obj,
    }
    return make_report("gen", matrixfile.digest(_canonical({"kind": args.kind, **params})), payload), EXIT_OK


def cmd_classify(args) -> tuple[dict, int]:
    q, dig = _load_input(args)
    if not isinstance(q, SeidelMatrix):
        raise CliError(EXIT_INPUT, "classify expects a Seidel matrix")
    threads = _resolve_threads(args.threads)
    params = _etf_frame(q)[0]
    three = check_3c_classification(q, threads=threads)
    four = check_4c_exhaustive(q, threads=threads)
    std = standard_form(q)[0]
    payload = {
        "n": q.n,
        "k": params.k,
        "three_c_verdict": three.value,
        "four_c_verdict": four.value,
        "standard_form_digest": matrixfile.digest(_canonical(_rounded_dense(std))),
        "row_sums_ok": standard_form_row_sums_ok(q) if three is ThreeCVerdict.SKEW_CLASS else None,
    }
    return make_report("classify", dig, payload), EXIT_OK


def _rounded_dense(q) -> dict:
    obj = matrixfile.dense_obj(q)
    obj["entries"] = [[[round(x, 12) + 0.0 for x in cell] for cell in row] for row in obj["entries"]]
    return obj


def cmd_simulate(args) -> tuple[dict, int]:
    cfg = SimulationConfig(args.m, args.trials, args.seed, args.mode)
    loaded, dig = _load_input(args)
    frame = loaded if isinstance(loaded, AnalysisOperator) else _etf_frame(loaded)[1]
    cfg.check_for(frame.n)
    result = simulate(frame, cfg, threads=_resolve_threads(args.threads))
    payload = {"m": cfg.m, "seed": cfg.seed, "pattern_mode": cfg.pattern_mode, **result.as_dict()}
    return make_report("simulate", dig, payload), EXIT_OK


# -------------------------------------------------------------------- parser


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("path", nargs="?", help="matrix file (JSON)")
    p.add_argument("--fixture", metavar="NAME", help=f"built-in matrix: {', '.join(FIXTURE_NAMES)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="etf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a Seidel matrix for the two-eigenvalue ETF property")
    _add_input(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("erasure", help="worst-case erasure errors over all patterns")
    _add_input(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int, help="number of erasures")
    g.add_argument("--max-m", type=int, help="report every m from 1 to this value")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_erasure)

    p = sub.add_parser("gen", help="write a generated or built-in matrix file")
    gsub = p.add_subparsers(dest="kind", required=True)
    t = gsub.add_parser("trivial")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--k", type=int, required=True)
    t = gsub.add_parser("paley")
    t.add_argument("--q", type=int, required=True)
    t = gsub.add_parser("fixture")
    t.add_argument("--name", required=True)
    for t in gsub.choices.values():
        t.add_argument("--out", help="output path")
        t.set_defaults(func=cmd_gen)

    p = sub.add_parser("classify", help="3_c / 4_c uniformity classification")
    _add_input(p)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="Monte Carlo encode / erase / decode")
    _add_input(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=MODES, default="random")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_simulate)
    return parser


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, CliError):
        return exc.code
    if isinstance(exc, (MatrixFormatError, BadConfig, UnknownFixture, BadK, BadPrime, NotThreeModFour,
                        IndexOutOfRange)):
        return EXIT_INPUT
    if isinstance(exc, (TooManySubsets, TooLarge)):
        return EXIT_GUARD
    return EXIT_DOMAIN


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except (CliError, EtfError) as exc:
        print(f"etf {args.command}: {exc}", file=sys.stderr)
        return _exit_code(exc)
    sys.stdout.write(dumps(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
