"""Command line entry point.

Exit codes: 0 success; 1 domain failure (invalid configuration,
propagation conflict, module cycles, analysis bound exceeded); 2 usage
or input errors (unreadable files, parse diagnostics, malformed
reports). Results go to stdout, diagnostics and errors to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import analysis, derive, dsl, service
from .errors import (
    ExactBoundExceededError,
    InvalidConfigurationError,
    ManifestSyntaxError,
    ModelError,
    NonUtf8InputError,
    ParseFailure,
    ReportSyntaxError,
    RootRemovedError,
    UnknownFeatureError,
)
from .metrics import (
    DebtRules,
    compare,
    comparison_key_values,
    measure_directory,
    read_report,
    render_comparison,
    write_report,
)
from .model import FeatureModel


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_model(path: str, version: int | None) -> FeatureModel:
    model = dsl.parse_model(_read_text(path), filename=path)
    if version is not None:
        model = analysis.filter_by_version(model, version)
    return model


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cmd_validate(args: argparse.Namespace) -> int:
    model = _load_model(args.model, args.version)
    config = dsl.parse_configuration(_read_text(args.config), model, filename=args.config)
    result = analysis.validate(model, config)
    if result.valid:
        print("valid")
        return 0
    for violation in result.violations:
        print(f"{violation.kind}: {violation.message}")
    return 1


def _cmd_count(args: argparse.Namespace) -> int:
    model = _load_model(args.model, args.version)
    print(analysis.count_products(model))
    return 0


def _cmd_enumerate(args: argparse.Namespace) -> int:
    model = _load_model(args.model, args.version)
    for config in analysis.enumerate_products(model, limit=args.limit):
        print(",".join(sorted(config.selected)))
    return 0


def _cmd_propagate(args: argparse.Namespace) -> int:
    model = _load_model(args.model, args.version)
    partial = dsl.parse_configuration(_read_text(args.config), model, filename=args.config)
    result = analysis.propagate(model, partial)
    if result.conflict:
        print("conflict")
        return 1
    for name in sorted(result.forced_selected):
        print(f"+{name}")
    for name in sorted(result.forced_deselected):
        print(f"-{name}")
    return 0


def _cmd_derive(args: argparse.Namespace) -> int:
    model = _load_model(args.model, None)
    version = args.version if args.version is not None else model.max_version
    released = analysis.filter_by_version(model, version)
    config = dsl.parse_configuration(_read_text(args.config), released, filename=args.config)
    name = args.name if args.name else Path(args.config).stem
    manifest = derive.derive_product(model, config, name, version)
    _emit(derive.write_manifest(manifest), args.output)
    if manifest.cycle_count:
        print(f"error: module graph has {manifest.cycle_count} cycle(s)", file=sys.stderr)
        return 1
    return 0


def _cmd_measure(args: argparse.Namespace) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        print(f"error: not a directory: {args.directory}", file=sys.stderr)
        return 2
    rules = DebtRules(
        long_function_lines=args.long_fn,
        complexity_cap=args.complexity_cap,
        nesting_cap=args.nesting_cap,
    )
    report, _, _ = measure_directory(
        root, glob=args.glob, min_block=args.min_dup_block, rules=rules)
    _emit(write_report(report), args.output)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    baseline = read_report(_read_text(args.baseline))
    core = read_report(_read_text(args.spl))
    derived = read_report(_read_text(args.derived))
    result = compare(baseline, core, derived)
    if args.format == "kv":
        _emit(comparison_key_values(result), args.output)
    else:
        _emit(render_comparison(result), args.output)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    if args.model:
        model = _load_model(args.model, None)
    else:
        model = dsl.reference_model()
    port = args.port
    if port is None:
        env = os.environ.get(service.PORT_ENV_VAR)
        port = int(env) if env else service.DEFAULT_PORT
    ui_dir = Path(args.ui).resolve() if args.ui else None
    if ui_dir is not None and not ui_dir.is_dir():
        print(f"error: not a directory: {args.ui}", file=sys.stderr)
        return 2
    httpd = service.make_server(model, args.host, port, ui_dir=ui_dir)
    print(f"listening on http://{args.host}:{httpd.server_address[1]}", file=sys.stderr)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splforge",
        description="Feature-model toolchain: validate, analyze, derive, measure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a configuration against a model")
    p.add_argument("model", help=".fm model file")
    p.add_argument("config", help=".cfg configuration file")
    p.add_argument("--version", type=int, help="filter the model to a release first")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("count", help="number of valid products")
    p.add_argument("model")
    p.add_argument("--version", type=int)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("enumerate", help="list valid products, one per line")
    p.add_argument("model")
    p.add_argument("--version", type=int)
    p.add_argument("--limit", type=int)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("propagate", help="decisions forced by a partial configuration")
    p.add_argument("model")
    p.add_argument("config")
    p.add_argument("--version", type=int)
    p.set_defaults(handler=_cmd_propagate)

    p = sub.add_parser("derive", help="derive a product manifest")
    p.add_argument("model")
    p.add_argument("config")
    p.add_argument("--version", type=int, help="release version (default: highest in the model)")
    p.add_argument("--name", help="product name (default: configuration file stem)")
    p.add_argument("-o", "--output", help="write the manifest here instead of stdout")
    p.set_defaults(handler=_cmd_derive)

    p = sub.add_parser("measure", help="measure a source tree")
    p.add_argument("directory")
    p.add_argument("--glob", default="**/*.gsrc")
    p.add_argument("-o", "--output")
    p.add_argument("--min-dup-block", type=int, default=6, help="duplicate window size")
    p.add_argument("--long-fn", type=int, default=30, help="long-function line cap")
    p.add_argument("--complexity-cap", type=int, default=10)
    p.add_argument("--nesting-cap", type=int, default=4)
    p.set_defaults(handler=_cmd_measure)

    p = sub.add_parser("compare", help="compare three .metrics reports")
    p.add_argument("--baseline", required=True, help="conventional application report")
    p.add_argument("--spl", required=True, help="product-line core report")
    p.add_argument("--derived", required=True, help="derived application report")
    p.add_argument("--format", choices=("text", "kv"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("serve", help="HTTP service over the analyses")
    p.add_argument("model", nargs="?", help=".fm model file (default: packaged reference model)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, help=f"default: ${service.PORT_ENV_VAR} or {service.DEFAULT_PORT}")
    p.add_argument("--ui", help="also serve this static directory at /")
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except ParseFailure as exc:
        for diagnostic in exc.diagnostics:
            print(diagnostic, file=sys.stderr)
        return 2
    except (OSError, ManifestSyntaxError, ReportSyntaxError, NonUtf8InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidConfigurationError, ExactBoundExceededError, RootRemovedError,
            UnknownFeatureError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
