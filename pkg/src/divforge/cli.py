"""Command line: run scripts, replay the bundled corpus, compute fundamental cycles.

Exit codes: 0 when every assert passed and nothing errored, 1 when an assert
failed or a statement errored, 2 for unreadable input (I/O or parse errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .dsl import ParseError, emit_report, parse_script
from .dsl.evaluator import Report, evaluate
from .singularities import (SingularityError, classify_singularity, fundamental_cycle,
                            is_negative_definite, laufer_sequence, pa_cycle, parse_dual_graph)

__all__ = ["main", "corpus_scripts"]


def corpus_scripts() -> list[tuple[str, str]]:
    """``(name, text)`` for every bundled script, sorted by name."""
    root = resources.files("divforge") / "corpus"
    out = [(p.name, p.read_text(encoding="utf-8")) for p in root.iterdir()
           if p.name.endswith(".srf")]
    return sorted(out)


def _write(data: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def _load(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror}") from None


class _InputError(Exception):
    pass


def _parse(text: str, name: str):
    try:
        return parse_script(text, name)
    except ParseError as exc:
        raise _InputError(f"{name}:{exc.line}:{exc.col}: {exc.message}") from None


def cmd_run(args) -> int:
    script = _parse(_load(args.script), Path(args.script).name)
    report = evaluate(script)
    _write(emit_report(report, args.format), args.out)
    return report.exit_code


def cmd_corpus(args) -> int:
    reports: list[Report] = []
    for name, text in corpus_scripts():
        reports.append(evaluate(_parse(text, name)))
    if args.format == "json":
        data = (json.dumps([r.to_json() for r in reports], indent=2) + "\n").encode()
    else:
        lines = []
        for r in reports:
            mark = "ok  " if r.exit_code == 0 else "FAIL"
            lines.append(f"{mark} {r.script:<14} pass={r.passed} fail={r.failed} "
                         f"error={r.errored}")
        data = ("\n".join(lines) + "\n").encode()
    _write(data, args.out)
    return max(r.exit_code for r in reports) if reports else 0


def cmd_fundcycle(args) -> int:
    cfg = parse_dual_graph(_load(args.graph))
    nd, witness = is_negative_definite(cfg)
    result: dict = {"curves": list(cfg.names), "negative_definite": nd}
    if not nd:
        result["witness"] = list(witness) if witness is not None else None
    elif not cfg.connected():
        result["error"] = "configuration is not connected"
    else:
        z = fundamental_cycle(cfg)
        v = z.vector(cfg)
        result.update({
            "fundamental_cycle": dict(zip(cfg.names, v)),
            "steps": len(laufer_sequence(cfg)) - 1,
            "self_intersection": cfg.dot(v, v),
            "p_a": pa_cycle(cfg, z),
            "classification": str(classify_singularity(cfg)),
        })
    if args.format == "json":
        data = json.dumps(result, indent=2) + "\n"
    else:
        data = "".join(f"{k}: {_plain(val)}\n" for k, val in result.items())
    _write(data.encode(), args.out)
    return 0 if "fundamental_cycle" in result else 1


def _plain(v) -> str:
    if isinstance(v, dict):
        return " + ".join(f"{c}*{n}" if c != 1 else n for n, c in v.items() if c)
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divforge",
                                description="Exact divisor calculus on blown-up surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a surface script")
    run.add_argument("script")
    run.add_argument("--format", choices=("json", "text"), default="json")
    run.add_argument("--out")
    run.set_defaults(fn=cmd_run)

    corpus = sub.add_parser("corpus", help="run every bundled script")
    corpus.add_argument("--format", choices=("json", "text"), default="text")
    corpus.add_argument("--out")
    corpus.set_defaults(fn=cmd_corpus)

    fc = sub.add_parser("fundcycle", help="fundamental cycle of a dual graph file")
    fc.add_argument("graph")
    fc.add_argument("--format", choices=("json", "text"), default="text")
    fc.add_argument("--out")
    fc.set_defaults(fn=cmd_fundcycle)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (_InputError, SingularityError) as exc:
        print(f"divforge: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
