"""The NKPL query language."""
from .interp import (EXIT_ERROR, EXIT_FAIL, EXIT_OK, Interpreter, NKPLRuntimeError, Options,
                     RunReport, StatementResult, report_json, run_file, run_source)
from .syntax import NKPLSyntaxError, parse, parse_expr, tokenize
