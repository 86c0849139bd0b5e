import json
import random

import pytest

from symkat import exp as E
from symkat.nkpl import interp as I
from symkat.nkpl import syntax as N
from symkat.oracle.randexp import random_exp


def run(src, **kw):
    return I.run_source(src, **kw)


def test_parse_examples():
    [st] = N.parse("check dup == dup")
    assert st == N.Check(N.Const("dup"), N.Const("dup"), False, 1)
    [st] = N.parse("let net = dup\nfor i in 1..3 do { check @sw=$i ; net != bot }")[1:]
    assert isinstance(st, N.For) and (st.lo, st.hi) == (N.Num(1), N.Num(3))
    assert st.body[0].negated
    [_, _, st] = N.parse("let e1 = dup\nlet e2 = top\nprint backward (e1 ^ e2)")
    assert st.expr == N.Flow("backward", N.Binary("^", N.Var("e1", 3, 17), N.Var("e2", 3, 22)))


def test_precedence():
    e = N.parse_expr("a=1 + b=2 ; c<-3 * ^ dup - top & bot")
    assert isinstance(e, N.Binary) and e.op == "+"
    right = e.right
    assert right.op == "^"
    assert isinstance(right.left, N.Binary) and right.left.op == ";"
    assert right.left.right == N.Star(N.FieldOp("<-", "c", N.Num(3)))
    assert right.right.op == "-"


def test_unicode_aliases():
    a = N.parse_expr("a←1 · b≠2 ∪ ⊥ ∩ ⊤")
    b = N.parse_expr("a<-1 ; b!=2 + bot & top")
    assert a == b


def test_syntax_errors_report_position():
    with pytest.raises(N.NKPLSyntaxError) as ei:
        N.parse("check dup ==\n  dup +")
    assert ei.value.line == 2
    with pytest.raises(N.NKPLSyntaxError):
        N.parse("check foo == dup")
    with pytest.raises(N.NKPLSyntaxError):
        N.parse("check a=4294967296 == bot")
    with pytest.raises(N.NKPLSyntaxError):
        N.parse("check a=$i == bot")


def test_exit_codes():
    assert run("").exit_code == 0
    rep = run("check dup == dup ; dup")
    assert rep.exit_code == 1
    assert len(rep.failed) == 1 and rep.failed[0].witness_packet is not None
    assert run("check dup = = dup").exit_code == 2


def test_print_forward():
    rep = run("print forward (@a<-1)")
    assert rep.results[0].text == "a=1"


def test_check_neq_and_loops():
    src = ("let net = (sw=1 ; sw<-2 + sw=2 ; sw<-3) ; dup\n"
           "for i in 1..2 do { check sw=$i ; net* ; sw=3 != bot }\n"
           "check sw=3 ; net* ; sw=1 =/= bot\n")
    rep = run(src)
    assert [r.passed for r in rep.checks] == [True, True, False]
    assert rep.exit_code == 1


def test_all_pairs_query():
    src = ("let R = sw=1 ; pt<-2 + sw=2 ; (dst=1 ; pt<-1 + dst=3 ; pt<-3) + sw=3 ; pt<-2\n"
           "let T = sw=1;pt=2;sw<-2 + sw=2;pt=1;sw<-1 + sw=2;pt=3;sw<-3 + sw=3;pt=2;sw<-2\n"
           "let net = R ; T ; dup\n"
           "for i in 1..3 do check (exists pt (exists dst (forward (sw=$i ; net*)))) == (sw in 1..3)\n")
    rep = run(src)
    assert rep.exit_code == 0 and len(rep.checks) == 3


def test_negation():
    rep = run("check !(a=1 + b=2) == a!=1 ; b!=2\n"
              "check !(forward (a<-1)) == a!=1\n")
    assert rep.exit_code == 0
    assert run("check !dup == bot").exit_code == 2


def test_named_values():
    rep = run("check sw=h1 ; sw<-h2 ; sw=h2 == sw=h1 ; sw<-h2\nprint forward (sw<-h1)")
    assert rep.exit_code == 0
    assert rep.results[1].text == "sw=h1"


def test_imports(tmp_path):
    (tmp_path / "lib.nkpl").write_text("let net = a=1 ; a<-2 ; dup\n")
    main = tmp_path / "main.nkpl"
    main.write_text('import "lib.nkpl"\ncheck net ; net == bot\n')
    assert I.run_file(str(main)).exit_code == 0
    (tmp_path / "x.nkpl").write_text('import "y.nkpl"\n')
    (tmp_path / "y.nkpl").write_text('import "x.nkpl"\n')
    rep = I.run_file(str(tmp_path / "x.nkpl"))
    assert rep.exit_code == 2 and "cycle" in rep.error
    assert I.run_file(str(tmp_path / "missing.nkpl")).exit_code == 2


def test_fail_fast_and_json(tmp_path):
    src = "check dup == top\ncheck dup == top\n"
    rep = run(src, options=I.Options(fail_fast=True, dot_dir=str(tmp_path)))
    assert len(rep.checks) == 1
    assert list(tmp_path.glob("*.dot"))
    data = json.loads(I.report_json(rep))
    assert data["exit"] == 1
    assert data["statements"][0]["passed"] is False
    assert set(data["statements"][0]["witness"]) == set()


def test_state_limit_is_an_error():
    rep = run("check (a<-1;dup;a<-2;dup)* == (a<-1;dup)*", options=I.Options(max_states=1))
    assert rep.exit_code == 2


def test_round_trip(fresh):
    rng = random.Random(7)
    for _ in range(500):
        fresh(["a", "b"])
        e = random_exp(rng, ["a", "b"], [0, 1, 2], 12)
        back = I.Interpreter().eval(N.parse_expr(E.show(e)))
        assert back is e, E.show(e)
