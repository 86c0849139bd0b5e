"""Evaluation of NKPL programs."""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .. import exp as E
from .. import sp
from .. import spp
from ..analysis import backward, check_equiv, forward
from ..automaton import DEFAULT_MAX_STATES, StateLimitExceeded, build_automaton
from ..core import FIELDS, VALUES, ConfigurationError, reset
from ..exp import Exp
from . import syntax as N

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class NKPLRuntimeError(Exception):
    def __init__(self, msg: str, line: int = 0):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


@dataclass
class StatementResult:
    index: int
    kind: str
    line: int
    passed: Optional[bool] = None
    text: str = ""
    witness_packet: Optional[Dict[str, object]] = None
    witness_inputs: Optional[str] = None
    ms: float = 0.0
    states: int = 0

    def to_json(self) -> dict:
        d = {"index": self.index, "kind": self.kind, "line": self.line, "ms": round(self.ms, 3)}
        if self.passed is not None:
            d["passed"] = self.passed
        if self.text:
            d["text"] = self.text
        if self.witness_packet is not None:
            d["witness"] = self.witness_packet
            d["witness_inputs"] = self.witness_inputs
        if self.states:
            d["states"] = self.states
        return d


@dataclass
class RunReport:
    results: List[StatementResult] = field(default_factory=list)
    error: Optional[str] = None
    exit_code: int = EXIT_OK
    states_built: int = 0
    spp_nodes: int = 0
    sp_nodes: int = 0
    ms: float = 0.0

    @property
    def checks(self) -> List[StatementResult]:
        return [r for r in self.results if r.kind == "check"]

    @property
    def failed(self) -> List[StatementResult]:
        return [r for r in self.checks if not r.passed]

    def to_json(self) -> dict:
        return {
            "exit": self.exit_code,
            "error": self.error,
            "statements": [r.to_json() for r in self.results],
            "stats": {"states": self.states_built, "spp_nodes": self.spp_nodes,
                      "sp_nodes": self.sp_nodes, "ms": round(self.ms, 3)},
        }


@dataclass
class Options:
    max_states: Optional[int] = DEFAULT_MAX_STATES
    fail_fast: bool = False
    dot_dir: Optional[str] = None
    out: Optional[object] = None  # file-like for print/check lines; None keeps quiet


class _FailFast(Exception):
    pass


class Interpreter:
    def __init__(self, options: Optional[Options] = None):
        self.opts = options or Options()
        self.env: Dict[str, Exp] = {}
        self.loop: Dict[str, int] = {}
        self.report = RunReport()

    def _emit(self, text: str) -> None:
        if self.opts.out is not None:
            print(text, file=self.opts.out)

    # values and expressions
    def value(self, v: N.Value, line: int = 0) -> int:
        if isinstance(v, N.Num):
            return v.value
        if isinstance(v, N.LoopVar):
            if v.name not in self.loop:
                raise NKPLRuntimeError(f"${v.name} is not bound", line)
            return self.loop[v.name]
        return VALUES.intern(v.name)

    def eval(self, e: N.Expr, line: int = 0) -> Exp:
        if isinstance(e, N.Const):
            return {"bot": E.BOT, "top": E.TOP}.get(e.which) or E.dup()
        if isinstance(e, N.FieldOp):
            v = self.value(e.value, line)
            return {"=": E.test, "!=": E.test_ne, "<-": E.mut}[e.op](e.field, v)
        if isinstance(e, N.RangeTest):
            lo, hi = self.value(e.lo, line), self.value(e.hi, line)
            return E.union_all(E.test(e.field, v) for v in range(lo, hi + 1))
        if isinstance(e, N.Var):
            if e.name not in self.env:
                raise NKPLRuntimeError(f"unbound variable {e.name!r}", e.line or line)
            return self.env[e.name]
        if isinstance(e, N.Binary):
            a, b = self.eval(e.left, line), self.eval(e.right, line)
            if e.op == "+":
                return E.union(a, b)
            if e.op == ";":
                return E.seq(a, b)
            if e.op == "&":
                return E.intersect(a, b)
            if e.op == "^":
                return E.xor(a, b)
            return E.diff(a, b)
        if isinstance(e, N.Star):
            return E.star(self.eval(e.body, line))
        if isinstance(e, N.Not):
            body = self.eval(e.body, line)
            try:
                return E.desugar(to_test(body), 1)
            except TypeError:
                pass
            p = as_sp(body)
            if p is None:
                raise NKPLRuntimeError("'!' only applies to tests", line)
            return E.sp_lit(sp.neg(p))
        if isinstance(e, N.Flow):
            body = self.eval(e.body, line)
            f = forward if e.direction == "forward" else backward
            return E.sp_lit(f(body, self.opts.max_states))
        if isinstance(e, N.Quant):
            body = self.eval(e.body, line)
            p = as_sp(body)
            if p is None:
                raise NKPLRuntimeError(f"{e.kind} needs a packet set (a test or forward/backward result)", line)
            q = sp.exists(e.field, p) if e.kind == "exists" else sp.forall(e.field, p)
            return E.sp_lit(q)
        raise NKPLRuntimeError(f"cannot evaluate {e!r}", line)

    # statements
    def run(self, stmts: Sequence[N.Stmt]) -> RunReport:
        t0 = time.perf_counter()
        try:
            self._block(stmts)
        except _FailFast:
            pass
        except (NKPLRuntimeError, StateLimitExceeded, spp.StarDivergence, ConfigurationError,
                RecursionError, MemoryError) as exc:
            self.report.error = str(exc) or type(exc).__name__
            self.report.exit_code = EXIT_ERROR
        self.report.ms = (time.perf_counter() - t0) * 1000
        self.report.spp_nodes = spp.node_count()
        self.report.sp_nodes = sp.node_count()
        if self.report.exit_code == EXIT_OK and self.report.failed:
            self.report.exit_code = EXIT_FAIL
        return self.report

    def _block(self, stmts: Sequence[N.Stmt]) -> None:
        for st in stmts:
            self.statement(st)

    def statement(self, st: N.Stmt) -> None:
        if isinstance(st, N.Let):
            self.env[st.name] = self.eval(st.expr, st.line)
        elif isinstance(st, N.For):
            lo, hi = self.value(st.lo, st.line), self.value(st.hi, st.line)
            saved = self.loop.get(st.var)
            for i in range(lo, hi + 1):
                self.loop[st.var] = i
                self._block(st.body)
            if saved is None:
                self.loop.pop(st.var, None)
            else:
                self.loop[st.var] = saved
        elif isinstance(st, N.Import):
            self._block(st.body)
        elif isinstance(st, N.Print):
            t0 = time.perf_counter()
            v = self.eval(st.expr, st.line)
            p = as_sp(v)
            text = sp.show(p) if p is not None else E.show(v)
            res = StatementResult(len(self.report.results), "print", st.line, text=text,
                                  ms=(time.perf_counter() - t0) * 1000)
            self.report.results.append(res)
            self._emit(text)
        elif isinstance(st, N.Check):
            self.check(st)

    def check(self, st: N.Check) -> None:
        t0 = time.perf_counter()
        a = self.eval(st.left, st.line)
        b = self.eval(st.right, st.line)
        v = check_equiv(a, b, self.opts.max_states)
        passed = (not v.equal) if st.negated else v.equal
        res = StatementResult(len(self.report.results), "check", st.line, passed=passed,
                              ms=(time.perf_counter() - t0) * 1000, states=v.states)
        self.report.states_built += v.states
        op = "=/=" if st.negated else "=="
        res.text = f"{E.show(a)} {op} {E.show(b)}"
        if not passed and v.witness_packet is not None:
            res.witness_packet = {FIELDS.name(r): _show_value(x) for r, x in v.witness_packet.ranks().items()}
            res.witness_inputs = sp.show(v.witness_inputs)
        self.report.results.append(res)
        if self.opts.dot_dir:
            os.makedirs(self.opts.dot_dir, exist_ok=True)
            aut = build_automaton(E.xor(a, b), self.opts.max_states)
            path = os.path.join(self.opts.dot_dir, f"check{res.index}_line{st.line}.dot")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(aut.to_dot())
        status = "PASS" if passed else "FAIL"
        self._emit(f"{status} line {st.line}: check {op} ({res.ms:.1f} ms)")
        if not passed:
            if v.witness_packet is not None:
                self._emit(f"  counter-example packet: {v.witness_packet!r}")
                self._emit(f"  all counter-example inputs: {res.witness_inputs}")
            else:
                self._emit("  expressions are equivalent")
            if self.opts.fail_fast:
                raise _FailFast()


def _show_value(v: int):
    s = VALUES.show(v)
    return v if s == str(v) else s


def to_test(e: Exp) -> E.TestExp:
    """Read a test-fragment expression back as a test (for negation)."""
    k = e.kind
    if k == E.BOT_K:
        return E.TFalse()
    if k == E.TOP_K:
        return E.TTrue()
    if k == E.TEST:
        return E.TEq(*e.args)
    if k == E.TESTNE:
        return E.TNot(E.TEq(*e.args))
    if k == E.UNION:
        t = to_test(e.args[0])
        for a in e.args[1:]:
            t = E.TOr(t, to_test(a))
        return t
    if k in (E.SEQ, E.INTER):
        t = to_test(e.args[0])
        for a in e.args[1:]:
            t = E.TAnd(t, to_test(a))
        return t
    raise TypeError("not a test")


def as_sp(e: Exp) -> Optional[sp.SP]:
    """The packet set of a test-fragment expression, or None if ``e`` is not a test."""
    k = e.kind
    if k == E.BOT_K:
        return sp.BOT
    if k == E.TOP_K:
        return sp.TOP
    if k == E.TEST:
        return sp.test(*e.args)
    if k == E.TESTNE:
        return sp.test_ne(*e.args)
    if k == E.SPLIT:
        return e.args[0]
    if k in (E.UNION, E.SEQ, E.INTER, E.XOR, E.DIFF):
        parts = [as_sp(a) for a in e.args]
        if any(p is None for p in parts):
            return None
        if k == E.UNION:
            return sp.union_all(parts)
        if k in (E.SEQ, E.INTER):
            return sp.intersect_all(parts)
        return (sp.xor if k == E.XOR else sp.diff)(parts[0], parts[1])
    return None


def run_source(src: str, path: Optional[str] = None, options: Optional[Options] = None,
               fields: Optional[Sequence[str]] = None) -> RunReport:
    """Parse and run a program in a fresh session."""
    reset(fields)
    try:
        stmts = N.parse(src, path)
    except N.NKPLSyntaxError as exc:
        return RunReport(error=str(exc), exit_code=EXIT_ERROR)
    try:
        return Interpreter(options).run(stmts)
    except ConfigurationError as exc:
        return RunReport(error=str(exc), exit_code=EXIT_ERROR)


def run_file(path: str, options: Optional[Options] = None,
             fields: Optional[Sequence[str]] = None) -> RunReport:
    try:
        with open(path, encoding="utf-8") as fh:
            src = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        return RunReport(error=f"cannot read {path}: {exc}", exit_code=EXIT_ERROR)
    return run_source(src, path, options, fields)


def report_json(report: RunReport) -> str:
    return json.dumps(report.to_json(), indent=2)
