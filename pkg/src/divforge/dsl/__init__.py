"""The surface-script language: parser, evaluator and report emitter."""

from .ast import Script, print_script
from .evaluator import Report, evaluate
from .parser import ParseError, parse_script
from .report import emit_report

__all__ = ["Script", "print_script", "Report", "evaluate", "ParseError", "parse_script",
           "emit_report", "run_text"]


def run_text(text: str, name: str = "<script>", full_trace: bool | None = None) -> Report:
    return evaluate(parse_script(text, name), full_trace)
