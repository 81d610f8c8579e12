"""Command-line entry point.

Commands load modules or maps from JSON files, run exact computations, and
emit deterministic reports: identical invocations (flags, files, seed)
produce byte-identical output.  All numbers are exact rational strings.

Exit codes: 0 success or verified; 1 mathematical failure (violated
invariant, failed check other than the expected obstruction); 2 input error
(malformed file, illegal flags, window exhaustion under --window-strict).
Stdout carries reports; stderr carries diagnostics.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .chainkit import homology, module_to_complex, good_truncation, complex_to_module
from .diagmod import (
    DiagramModule,
    MAP_FORMAT,
    MODULE_FORMAT,
    canonical_json,
    check_map,
    map_from_obj,
    map_to_json,
    module_from_obj,
    module_to_json,
    module_to_obj,
    validate,
)
from .oracle import (
    REPORT_FORMAT,
    CorpusSpec,
    check_fibration,
    check_weak_equivalence,
    generate_corpus,
    run_battery,
    run_counterexample,
)
from .transport import (
    WindowError,
    augmented_chain,
    counit_map,
    induce,
    restrict,
    restrict_v,
    tor,
    unit_map,
)

OK, MATH_FAILURE, INPUT_ERROR = 0, 1, 2
MAX_TRUNC_ENV = "SEMIHOMOLOGY_MAX_TRUNC"
DEFAULT_MAX_TRUNC = 8


class CliError(Exception):
    def __init__(self, message: str, status: int = INPUT_ERROR):
        super().__init__(message)
        self.status = status


def _max_trunc() -> int:
    raw = os.environ.get(MAX_TRUNC_ENV, "")
    try:
        return int(raw) if raw else DEFAULT_MAX_TRUNC
    except ValueError:
        return DEFAULT_MAX_TRUNC


def _check_trunc(n: int) -> int:
    cap = _max_trunc()
    if n > cap:
        raise CliError(
            f"truncation {n} exceeds the cap {cap} (set {MAX_TRUNC_ENV} to raise it)"
        )
    return n


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise CliError(f"{path}: expected a JSON object")
    return obj


def _load_module(path: str) -> DiagramModule:
    obj = _load_json(path)
    try:
        module = module_from_obj(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"{path}: {exc}") from None
    report = validate(module)
    if not report:
        raise CliError(f"{path}: invalid module: {report.message}", MATH_FAILURE)
    return module


def _load_map(path: str):
    obj = _load_json(path)
    try:
        f = map_from_obj(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"{path}: {exc}") from None
    for side, m in (("source", f.source), ("target", f.target)):
        report = validate(m)
        if not report:
            raise CliError(f"{path}: invalid {side} module: {report.message}", MATH_FAILURE)
    report = check_map(f)
    if not report:
        raise CliError(f"{path}: not a module map: {report.message}", MATH_FAILURE)
    return f


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit(args, obj: dict, table: str) -> None:
    if args.format == "json":
        sys.stdout.write(canonical_json(obj))
    else:
        print(table)


def _homology_obj(report) -> dict:
    lo, hi = report.window
    return {
        "window": [lo, hi],
        "dims": {str(n): report.dim(n) for n in range(lo, hi + 1)},
    }


def _homology_table(report, title: str) -> str:
    lo, hi = report.window
    lines = [title, f"window [{lo}, {hi}]"]
    for n in range(lo, hi + 1):
        lines.append(f"  H_{n} = {report.dim(n)}")
    return "\n".join(lines)


# -- commands -----------------------------------------------------------------


def cmd_validate(args) -> int:
    module = _load_module(args.infile)  # raises with status 1 when invalid
    _emit(
        args,
        {"valid": True, "kind": module.kind, "truncation": module.truncation},
        f"valid {module.kind} module, truncation {module.truncation}",
    )
    return OK


def _detecting_homology(module: DiagramModule):
    if module.kind == "ssimp":
        return homology(restrict("u_delta", module)), "restricted complex homology"
    if module.kind == "scube":
        return homology(restrict("u_square", module)), "sign complex homology"
    if module.kind == "aug_ssimp":
        return homology(augmented_chain(module)), "augmented complex homology"
    return homology(module_to_complex(module)), "chain complex homology"


def cmd_homology(args) -> int:
    module = _load_module(args.infile)
    report, title = _detecting_homology(module)
    _emit(args, _homology_obj(report), _homology_table(report, title))
    return OK


def cmd_restrict(args) -> int:
    module = _load_module(args.infile)
    functor = args.functor
    if functor == "auto":
        functor = {"ssimp": "u_delta", "scube": "u_square"}.get(module.kind)
        if functor is None:
            raise CliError(f"no default restriction for kind {module.kind}; pass --functor")
    if functor == "v":
        out = restrict_v(module)
        text = module_to_json(out)
    else:
        try:
            complex_ = restrict(functor, module)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        text = module_to_json(complex_to_module(complex_))
    _write(args.out, text)
    return OK


def cmd_augment(args) -> int:
    module = _load_module(args.infile)
    if module.kind != "aug_ssimp":
        raise CliError(f"augment needs an aug_ssimp module, got {module.kind}")
    text = module_to_json(complex_to_module(augmented_chain(module)))
    _write(args.out, text)
    return OK


def cmd_truncate(args) -> int:
    module = _load_module(args.infile)
    if module.kind != "chain_neg1":
        raise CliError(f"truncate needs a chain_neg1 module, got {module.kind}")
    truncated = good_truncation(module_to_complex(module))
    _write(args.out, module_to_json(complex_to_module(truncated)))
    return OK


def _window_guard(args, window, wanted_top: int) -> None:
    if window is None:
        raise CliError("the validity window is empty: nothing can be certified")
    if args.window_strict and window[1] < wanted_top:
        raise CliError(
            f"window exhausted: certified up to degree {window[1]}, needed {wanted_top}"
        )


def cmd_induce(args) -> int:
    module = _load_module(args.infile)
    try:
        result = induce(args.functor, module)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _window_guard(args, result.valid_window, result.module.truncation)
    if args.out:
        Path(args.out).write_text(module_to_json(result.module))
    obj = {
        "functor": args.functor,
        "valid_window": list(result.valid_window),
        "dims": {str(n): result.module.dim(n) for n in result.module.degrees()},
        "presentation": {
            str(n): [[q, phi, i] for q, phi, i in labels]
            for n, labels in result.presentation.items()
        },
    }
    lines = [f"induced along {args.functor}: window {result.valid_window}"]
    for n in result.module.degrees():
        lines.append(f"  degree {n}: dim {result.module.dim(n)}")
    _emit(args, obj, "\n".join(lines))
    return OK


def _adjunction_report(args, adj, kind: str, label: str) -> int:
    verdict = check_weak_equivalence(kind, adj.arrow)
    obj = {
        "map": label,
        "window": list(adj.window),
        "weak_equivalence": verdict.ok,
        "witness": verdict.witness,
    }
    table = f"{label}: window {adj.window}, weak equivalence: {verdict.ok}"
    _emit(args, obj, table)
    return OK


def cmd_unit(args) -> int:
    module = _load_module(args.infile)
    try:
        adj = unit_map(args.functor, module)
    except WindowError as exc:
        raise CliError(str(exc)) from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if args.window_strict and adj.window[1] < module.truncation:
        raise CliError(
            f"window exhausted: unit certified up to degree {adj.window[1]}"
        )
    kind = {"u_delta": "chain0", "u_a": "chain_neg1", "v": "aug_ssimp"}[args.functor]
    return _adjunction_report(args, adj, kind, f"unit along {args.functor}")


def cmd_counit(args) -> int:
    module = _load_module(args.infile)
    try:
        adj = counit_map(args.functor, module)
    except WindowError as exc:
        raise CliError(str(exc)) from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if args.window_strict and adj.window[1] < module.truncation:
        raise CliError(
            f"window exhausted: counit certified up to degree {adj.window[1]}"
        )
    return _adjunction_report(args, adj, module.kind, f"counit along {args.functor}")


def cmd_tor(args) -> int:
    module = _load_module(args.infile)
    try:
        report = tor(module.kind, module, args.coeff)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _emit(args, _homology_obj(report), _homology_table(report, f"Tor against {args.coeff}"))
    return OK


def cmd_weq(args) -> int:
    f = _load_map(args.infile)
    verdict = check_weak_equivalence(f.source.kind, f)
    obj = {
        "kind": f.source.kind,
        "weak_equivalence": verdict.ok,
        "window": list(verdict.window),
        "witness": verdict.witness,
    }
    _emit(args, obj, f"weak equivalence: {verdict.ok} on window {list(verdict.window)}")
    return OK


def cmd_fib(args) -> int:
    f = _load_map(args.infile)
    verdict = check_fibration(f.source.kind, f)
    obj = {"kind": f.source.kind, "fibration": verdict.ok, "failures": verdict.failures}
    _emit(args, obj, f"fibration: {verdict.ok}" + (f" (fails at {verdict.failures})" if verdict.failures else ""))
    return OK


def cmd_counterexample(args) -> int:
    report = run_counterexample(_check_trunc(args.trunc))
    if args.format == "json":
        sys.stdout.write(report.to_json(include_timing=args.timing))
    else:
        print(report.table())
    return OK if report.ok() else MATH_FAILURE


def _spec_from_args(args) -> CorpusSpec:
    spec = CorpusSpec(
        seed=args.seed,
        truncation=_check_trunc(args.trunc),
        max_dim=args.max_dim,
        representables=args.representables,
        induced=args.induced,
        sums=args.sums,
        yoneda_maps=args.yoneda_maps,
    )
    try:
        spec.check()
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return spec


def cmd_battery(args) -> int:
    report = run_battery(_spec_from_args(args))
    text = report.to_json(include_timing=args.timing)
    if args.out:
        Path(args.out).write_text(text)
    if args.format == "json":
        sys.stdout.write(text)
    else:
        print(report.table())
        for c in report.failures():
            print(f"failed: {c.name} [{c.instance}]: {c.witness}", file=sys.stderr)
    return OK if report.ok() else MATH_FAILURE


def cmd_corpus(args) -> int:
    corpus = generate_corpus(_spec_from_args(args))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    index = []
    for name, module in corpus.modules:
        fname = name.replace(":", "_").replace("+", "_") + ".json"
        (out_dir / fname).write_text(module_to_json(module))
        index.append({"name": name, "file": fname, "kind": module.kind})
    for name, f in corpus.maps:
        fname = "map_" + name.replace(":", "_").replace("->", "_to_").replace("+", "_") + ".json"
        (out_dir / fname).write_text(map_to_json(f))
        index.append({"name": name, "file": fname, "kind": f.source.kind, "map": True})
    (out_dir / "index.json").write_text(canonical_json({"entries": index}))
    _emit(
        args,
        {"modules": len(corpus.modules), "maps": len(corpus.maps), "dir": str(out_dir)},
        f"wrote {len(corpus.modules)} modules and {len(corpus.maps)} maps to {out_dir}",
    )
    return OK


def _module_text_dump(module: DiagramModule) -> str:
    from .diagmod import generators_for

    lines = [f"kind {module.kind}, truncation {module.truncation}"]
    lines.append("dims " + " ".join(f"{n}:{module.dim(n)}" for n in module.degrees()))
    for g in generators_for(module.kind, module.truncation):
        m = module.actions[g]
        lines.append(f"[{g.token()}]  ({m.rows}x{m.cols})")
        if m.rows and m.cols:
            lines.append(m.pretty())
    return "\n".join(lines) + "\n"


def cmd_convert(args) -> int:
    obj = _load_json(args.infile)
    fmt = obj.get("format")
    if fmt == MODULE_FORMAT:
        if args.to == "module-json":
            _write(args.out, canonical_json(module_to_obj(module_from_obj(obj))))
            return OK
        if args.to == "text":
            _write(args.out, _module_text_dump(module_from_obj(obj)))
            return OK
        raise CliError(f"cannot convert a module document to {args.to!r}")
    if fmt == MAP_FORMAT:
        if args.to == "map-json":
            _write(args.out, map_to_json(map_from_obj(obj)))
            return OK
        raise CliError(f"cannot convert a map document to {args.to!r}")
    if fmt == REPORT_FORMAT:
        if args.to == "table":
            lines = []
            for c in obj.get("checks", []):
                mark = "pass" if c.get("verdict") == "pass" else "FAIL"
                lines.append(f"{mark}  {c.get('name')}  {c.get('instance')}")
            _write(args.out, "\n".join(lines) + "\n")
            return OK
        raise CliError(f"cannot convert a report document to {args.to!r}")
    raise CliError(f"unrecognized document format {fmt!r}")


# -- parser ---------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--window-strict", action="store_true",
                   help="fail instead of shrinking when a window is exceeded")
    p.add_argument("--timing", action="store_true", help="include timing in JSON reports")


def _add_corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trunc", type=int, default=5)
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--representables", type=int, default=10)
    p.add_argument("--induced", type=int, default=6)
    p.add_argument("--sums", type=int, default=3)
    p.add_argument("--yoneda-maps", type=int, default=8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semihomology",
        description="Exact homology and comparison functors for semisimplicial, "
        "augmented semisimplicial, and semicubical modules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, fn, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        _add_common(p)
        return p

    p = command("validate", cmd_validate, "check the defining identities of a module file")
    p.add_argument("--in", dest="infile", required=True)

    p = command("homology", cmd_homology, "detecting homology of a module, per kind")
    p.add_argument("--in", dest="infile", required=True)

    p = command("restrict", cmd_restrict, "restricted chain complex (or sign shadow with --functor v)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--functor", choices=("auto", "u_delta", "u_square", "v"), default="auto")

    p = command("augment", cmd_augment, "full augmented complex of an aug_ssimp module")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)

    p = command("truncate", cmd_truncate, "good truncation of a chain_neg1 module")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)

    p = command("induce", cmd_induce, "extension of scalars along a comparison functor")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--functor", choices=("u_delta", "u_a", "v"), required=True)

    p = command("unit", cmd_unit, "adjunction unit and its weak-equivalence verdict")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--functor", choices=("u_delta", "u_a", "v"), required=True)

    p = command("counit", cmd_counit, "adjunction counit and its weak-equivalence verdict")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--functor", choices=("u_delta", "u_a", "v"), required=True)

    p = command("tor", cmd_tor, "Tor against a named coefficient object")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--coeff", choices=("k_point", "k_constant", "k_constant_shifted", "k_point_neg1"),
                   required=True)

    p = command("weq", cmd_weq, "weak-equivalence verdict for a map file")
    p.add_argument("--in", dest="infile", required=True)

    p = command("fib", cmd_fib, "fibration verdict for a map file")
    p.add_argument("--in", dest="infile", required=True)

    p = command("counterexample", cmd_counterexample, "reproduce the degree -1 obstruction")
    p.add_argument("--trunc", type=int, default=5)

    p = command("battery", cmd_battery, "run the full verification battery")
    _add_corpus_flags(p)
    p.add_argument("--out", default=None, help="also write the JSON report here")

    p = command("corpus", cmd_corpus, "write a deterministic corpus to a directory")
    _add_corpus_flags(p)
    p.add_argument("--out-dir", required=True)

    p = command("convert", cmd_convert, "convert between the JSON formats and text dumps")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--to", choices=("module-json", "map-json", "text", "table"), required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"semihomology: {exc}", file=sys.stderr)
        return exc.status
    except BrokenPipeError:
        return OK


if __name__ == "__main__":
    sys.exit(main())
