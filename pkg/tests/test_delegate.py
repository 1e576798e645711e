import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tsia
from tsia.delegate import Env, Value, builtin, eval_expr, execute_task
from tsia.errors import (ArithmeticOverflow, DivisionByZero, ExtentOverflow,
                         IndexOutOfExtent, UnknownRoutine)
from tsia.frontend import ast as A
from tsia.frontend.parser import Parser
from tsia.frontend.lexer import tokenize
from tsia.delegate import INT_MAX
from tsia.graph import Fresh, Region, alpha_equivalent, complete_task, render_graph
from tsia.graphtext import parse_graph

FACT = tsia.load(tsia.corpus_source("fact_main")).routines
ADD3 = tsia.load(tsia.corpus_source("add3")).routines
PUTS = tsia.load(tsia.corpus_source("puts")).routines
ARRAYS = tsia.load(tsia.corpus_source("arrays")).routines


def expr(text):
    return Parser(tokenize(text)).parse_expr()


def env(**values):
    e = Env()
    for name, v in values.items():
        e[name] = Value.of(v)
    return e


def expand(text, routines, values=None):
    """Execute the first task of ``text`` once and return the resulting graph."""
    g = parse_graph(text, routines, values)
    t = g.tasks[0]
    outcome = execute_task(t, routines, g)
    complete_task(g, t, outcome)
    return g, outcome


# -- expressions ------------------------------------------------------------

def test_midpoint():
    assert eval_expr(env(b=1, e=3), expr("(b+e)/2")) == 2


def test_comparison():
    assert eval_expr(env(b=3, e=3), expr("b>=e")) is True
    assert eval_expr(env(), expr("0 != 0")) is False


@pytest.mark.parametrize("a, b, q", [(7, 2, 3), (-7, 2, -3), (7, -2, -3), (-7, -2, 3)])
def test_division_truncates_toward_zero(a, b, q):
    assert eval_expr(env(a=a, b=b), expr("a/b")) == q


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        eval_expr(env(a=1), expr("a/0"))


def test_overflow_is_an_error():
    with pytest.raises(ArithmeticOverflow):
        eval_expr(env(a=INT_MAX), expr("a+1"))
    with pytest.raises(ArithmeticOverflow):
        eval_expr(env(a=-INT_MAX - 1), expr("a-1"))


def test_string_indexing():
    e = env(s=(65, 66, 0))
    assert eval_expr(e, expr("s[1]")) == 66
    assert eval_expr(e, expr("s[2] != 0")) is False
    with pytest.raises(IndexOutOfExtent):
        eval_expr(e, expr("s[3]"))


# -- task execution ---------------------------------------------------------

def test_fact_1_3_children():
    g, outcome = expand("fact(1,3;;k)", FACT)
    # Only the local m is written; none of the task's own items are.
    assert all(isinstance(r.root, Fresh) for r, _ in outcome.writes)
    assert alpha_equivalent(g, parse_graph("fact(1,2;;x) fact(3,3;;y) mult(x,y;;k)", FACT))
    assert render_graph(g) == "fact(1,2;;x)\nfact(3,3;;y)\nmult(x,y;;k)"


def test_add3_children():
    g, _ = expand("add3(6,9,17;;p)", ADD3)
    assert alpha_equivalent(g, parse_graph("add(6,9;;r) add(r,17;;p)", ADD3))


def test_fact_base_case_writes():
    g, outcome = expand("fact(3,3;;y)", FACT)
    assert outcome.children == []
    assert [vals for _, vals in outcome.writes] == [(3,)]
    assert g.finals == {"y": 3}


def test_mult_builtin_task():
    g, _ = expand("mult(2,3;;k)", FACT)
    assert g.finals == {"k": 6}


def test_puts_expands_one_character():
    g, _ = expand('puts("CD";;)', PUTS)
    assert render_graph(g) == "putc('C';;)(;stdout;)\nputs(\"D\";;)(;del stdout;)"


def test_puts_full_unfolding():
    g = parse_graph('puts("CD";;)', PUTS)
    while any(t.name == "puts" for t in g.tasks):
        t = next(t for t in g.tasks if t.name == "puts")
        complete_task(g, t, execute_task(t, PUTS, g))
    assert render_graph(g) == "putc('C';;)(;stdout;)\nputc('D';;)(;stdout;)"


def test_array_split_children():
    g, _ = expand("a(;;h)", ARRAYS)
    assert render_graph(g) == "b(;;h[0:4999])\nc(;;h[5000:9999])"


def test_purity():
    g = parse_graph("fact(1,3;;k)", FACT)
    t = g.tasks[0]
    assert execute_task(t, FACT, g) == execute_task(t, FACT, g)


def test_unknown_routine():
    g = parse_graph("nosuch(1;;k)")
    with pytest.raises(UnknownRoutine):
        execute_task(g.tasks[0], FACT, g)


# -- builtins ---------------------------------------------------------------

def test_builtin_plus():
    r = Region(0, 0, 0)
    assert builtin("plus", [6, 9], [r]).writes == [(r, (15,))]


def test_builtin_mult():
    r = Region(0, 0, 0)
    assert builtin("mult", [1, 2], [r]).writes == [(r, (2,))]


def test_builtin_putc_and_intprint():
    assert builtin("putc", [65]).channel_writes == [("stdout", 65)]
    assert builtin("intprint", [-12]).channel_writes == [("stdout", ord(c)) for c in "-12"]


def test_builtin_int2chars_pads():
    r = Region(0, 0, 20)
    (_, vals), = builtin("int2chars", [1234], [r]).writes
    assert vals[:5] == (49, 50, 51, 52, 0) and len(vals) == 21 and set(vals[4:]) == {0}


def test_builtin_int2chars_too_small():
    with pytest.raises(ExtentOverflow):
        builtin("int2chars", [12345], [Region(0, 0, 3)])


def test_builtin_overflow():
    with pytest.raises(ArithmeticOverflow):
        builtin("mult", [INT_MAX, 2], [Region(0, 0, 0)])


def test_builtin_fill():
    r = Region(0, 3, 6)
    assert builtin("fill", [9], [r]).writes == [(r, (9, 9, 9, 9))]


# -- oracle -----------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 6))
def test_fact_matches_product(b, span):
    e = b + span
    program = tsia.load(f"{tsia.corpus_source('fact_main').split('main')[0]} fact({b},{e};;f);")
    result = tsia.run_sequential(program)
    assert result.finals["f"] == math.prod(range(b, e + 1))
