"""Command-line front end.

Exit codes: 0 success, 2 bad input (syntax, validation, unknown names),
3 unsupported operation or resource cap exceeded, 4 proof failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence, TextIO

from . import __version__
from .algebra import DEFAULT_CAP, FuzzySet
from .doctrine import CLOSURE_LAWS, check_closure_laws
from .errors import (
    FormulaSyntaxError,
    RuleViolation,
    TooLarge,
    UnknownAtom,
    UnknownSort,
    Unsupported,
    ValidationError,
)
from .formats import (
    element_pixels,
    element_to_json,
    load_derivation,
    load_model,
    require_grid,
    result_atom,
    to_dot,
    write_pgm,
)
from .logic.semantics import PATH_CAP, UNTIL_CAP, evaluate
from .logic.syntax import parse_formula, pretty
from .sequent import check_derivation, soundness_check

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_PROOF = 0, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    models: list[str] = field(default_factory=list)
    formula: str | None = None
    output_format: str = "json"
    cap: int | None = None
    path_cap: int = PATH_CAP
    seed: int = 0
    laws: list[str] | None = None

    def __post_init__(self) -> None:
        if self.cap is not None and self.cap < 1:
            raise ValidationError("cap", "caps must be positive")
        if self.path_cap < 1:
            raise ValidationError("path cap", "caps must be positive")

    def caps(self) -> dict[str, int]:
        return {"until": self.cap or UNTIL_CAP, "laws": self.cap or DEFAULT_CAP, "paths": self.path_cap}


def _env_cap() -> int | None:
    raw = os.environ.get("CLOSURIUM_CAP")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValidationError("CLOSURIUM_CAP", f"not an integer: {raw!r}") from None


def _header(cfg: RunConfig) -> dict[str, Any]:
    return {"version": __version__, "seed": cfg.seed, "caps": cfg.caps()}


def _emit(text: str | bytes, out: str | None, stdout: TextIO) -> None:
    if out is None:
        if isinstance(text, bytes):
            stdout.flush()
            getattr(stdout, "buffer", sys.stdout.buffer).write(text)
        else:
            stdout.write(text)
        return
    mode = "wb" if isinstance(text, bytes) else "w"
    with open(out, mode) as fh:
        fh.write(text)


def cmd_check(args: argparse.Namespace, cfg: RunConfig, stdout: TextIO) -> int:
    model = load_model(args.model)
    for source in args.atom or []:
        name, _, path = source.partition("=")
        if not name or not path:
            raise ValidationError("atom", f"expected NAME=PATH, got {source!r}")
        model = model.with_atoms(**{name: result_atom(model, path)})
    if args.formula_file:
        text = Path(args.formula_file).read_text(encoding="utf-8").strip()
    else:
        text = args.formula
    phi = parse_formula(text)
    value = evaluate(model, phi, until_cap=cfg.caps()["until"])
    fmt = cfg.output_format
    if fmt == "json":
        doc = _header(cfg)
        doc.update({"model": str(args.model), "formula": pretty(phi),
                    "kind": "fuzzy" if isinstance(value, FuzzySet) else "powerset",
                    "result": element_to_json(value)})
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.output, stdout)
    elif fmt == "dot":
        _emit(f"// closurium {__version__} seed={cfg.seed} formula={pretty(phi)}\n" + to_dot(model, value),
              args.output, stdout)
    elif fmt == "pgm":
        grid = require_grid(model)
        import io
        buf = io.BytesIO()
        write_pgm(buf, element_pixels(grid, value))
        _emit(buf.getvalue(), args.output, stdout)
    else:
        rows = [f"# closurium {__version__} seed={cfg.seed} formula={pretty(phi)}"]
        for i, p in enumerate(model.space.points):
            if isinstance(value, FuzzySet):
                rows.append(f"{p}\t{value.values[i]}/{value.algebra.k}")
            else:
                rows.append(f"{p}\t{(value.bits >> i) & 1}")
        _emit("\n".join(rows) + "\n", args.output, stdout)
    return EXIT_OK


def cmd_laws(args: argparse.Namespace, cfg: RunConfig, stdout: TextIO) -> int:
    model = load_model(args.model)
    report = check_closure_laws(model.space.operator(), mode=args.mode, samples=args.samples,
                                seed=cfg.seed, cap=cfg.caps()["laws"], laws=cfg.laws)
    doc = report.to_json()
    doc["seed"] = cfg.seed
    doc["caps"] = cfg.caps()
    doc["model"] = str(args.model)
    if cfg.output_format == "table":
        rows = [f"# closurium {__version__} seed={cfg.seed} operator={report.operator}"]
        for name, res in report.results.items():
            wit = "" if res.witness is None else "  witness=" + json.dumps(res.to_json()["witness"])
            rows.append(f"{name}\t{res.status}{wit}")
        _emit("\n".join(rows) + "\n", args.output, stdout)
    else:
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.output, stdout)
    return EXIT_OK


def cmd_prove(args: argparse.Namespace, cfg: RunConfig, stdout: TextIO) -> int:
    d = load_derivation(args.derivation)
    check_derivation(d, args.rules)
    models = [load_model(p) for p in args.model or []]
    verdicts = soundness_check(d, models, args.rules, check=False)
    ok = all(v.satisfied for v in verdicts)
    if cfg.output_format == "json":
        doc = _header(cfg)
        doc.update({"derivation": str(args.derivation), "valid": True, "rules": args.rules,
                    "conclusion": str(d.conclusion),
                    "models": [{"model": path, "satisfied": v.satisfied,
                                "antecedents": element_to_json(v.antecedents),
                                "consequent": element_to_json(v.consequent)}
                               for path, v in zip(args.model or [], verdicts)]})
        _emit(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n", args.output, stdout)
    else:
        rows = [f"# closurium {__version__} seed={cfg.seed}", f"valid\t{d.conclusion}"]
        rows += [f"{path}\t{'satisfied' if v.satisfied else 'VIOLATED'}"
                 for path, v in zip(args.model or [], verdicts)]
        _emit("\n".join(rows) + "\n", args.output, stdout)
    return EXIT_OK if ok else EXIT_PROOF


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="closurium", description="Spatial model checking over finite closure spaces.")
    parser.add_argument("--version", action="version", version=f"closurium {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="enumeration cap (overrides CLOSURIUM_CAP)")
    common.add_argument("--path-cap", type=int, default=PATH_CAP, help="continuous-path cap")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", default=None, help="write to a file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="evaluate a formula on a model")
    check.add_argument("-m", "--model", required=True)
    group = check.add_mutually_exclusive_group(required=True)
    group.add_argument("-f", "--formula")
    group.add_argument("--formula-file")
    check.add_argument("--format", choices=("json", "dot", "pgm", "table"), default="json")
    check.add_argument("--atom", action="append", metavar="NAME=PATH",
                       help="load an atom from a previous JSON result")
    check.set_defaults(run=cmd_check)

    laws = sub.add_parser("laws", parents=[common], help="check closure-operator laws")
    laws.add_argument("-m", "--model", required=True)
    laws.add_argument("--laws", default=None, help="comma-separated subset of " + ",".join(CLOSURE_LAWS))
    laws.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    laws.add_argument("--samples", type=int, default=256)
    laws.add_argument("--format", choices=("json", "table"), default="json")
    laws.set_defaults(run=cmd_laws)

    prove = sub.add_parser("prove", parents=[common], help="check a derivation, optionally on models")
    prove.add_argument("derivation")
    prove.add_argument("-m", "--model", action="append", help="model to test the conclusion on (repeatable)")
    prove.add_argument("--rules", choices=("sound", "verbatim"), default="sound")
    prove.add_argument("--format", choices=("json", "table"), default="table")
    prove.set_defaults(run=cmd_prove)
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cap = args.cap if args.cap is not None else _env_cap()
        laws = [s.strip() for s in args.laws.split(",")] if getattr(args, "laws", None) else None
        if laws:
            unknown = [law for law in laws if law not in CLOSURE_LAWS]
            if unknown:
                raise ValidationError("laws", f"unknown law {unknown[0]!r}")
        cfg = RunConfig(args.command, output_format=args.format, cap=cap, path_cap=args.path_cap,
                        seed=args.seed, laws=laws)
        return args.run(args, cfg, stdout)
    except FormulaSyntaxError as exc:
        print(f"syntax error: {exc}", file=stderr)
        return EXIT_INPUT
    except (ValidationError, UnknownAtom, UnknownSort) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except (Unsupported, TooLarge) as exc:
        print(f"cannot evaluate: {exc}", file=stderr)
        return EXIT_RESOURCE
    except RuleViolation as exc:
        print(f"invalid derivation: {exc}", file=stderr)
        return EXIT_PROOF
    except OSError as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
