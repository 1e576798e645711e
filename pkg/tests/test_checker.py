import pytest

import tsia
from tsia.errors import CheckFailed
from tsia.frontend import check_program, diagnose, parse_source

FACT = """
mult(int a, int b;; int c);
fact(int b, int e;; int f)
{ if (b>=e) f=b;
  else { int m=(b+e)/2;
         fact(b,m;;x); fact(m+1,e;;y);
         mult(x,y;;f); }
}
"""


def rules(src):
    return [d.rule for d in diagnose(parse_source(src))]


def test_fact_is_clean():
    assert rules(FACT) == []


def test_out_alias():
    assert "OutAlias" in rules("f(int m; int k;) { plus(m,k;;k); }")


def test_child_outcome():
    assert set(rules(tsia.corpus_source("cfact"))) == {"ChildOutcome"}


def test_del_parameter_read():
    assert "DelMisuse" in rules("g(; int x;) { } f(; del int x;) { if (x > 0) g(;x;); }")


def test_del_parameter_forward_is_fine():
    assert rules("g(; int x;) { x = x + 1; } f(; del int x;) { g(;x;); }") == []


def test_extent_overflow():
    src = """b(;; int y[0:4999]) { fill(1;;y); }
             a(;; del int y[0:9999]) { b(;;y[6000]); }"""
    assert "ExtentOverflow" in rules(src)


def test_subregion_that_fits():
    src = """b(;; int y[0:4999]) { fill(1;;y); }
             a(;; del int y[0:9999]) { b(;;y[0]); b(;;y[5000]); }"""
    assert rules(src) == []


def test_overlapping_outs_alias():
    src = """b(;; int y[0:4999]) { fill(1;;y); }
             two(;; int p[0:4999], int q[0:4999]) { fill(0;;p); fill(0;;q); }
             a(;; del int y[0:9999]) { two(;;y[0],y[100]); }"""
    assert "OutAlias" in rules(src)


@pytest.mark.parametrize("src, rule", [
    ("f(int a;;) { g(a;;); }", "UnknownRoutine"),
    ("f(;; int b) { b = z; }", "UnknownName"),
    ("f(int a;; int b) { int a = 1; b = a; }", "Redeclared"),
    ("f(boolean p;; int b) { b = p + 1; }", "TypeMismatch"),
    ("f(;;) { plus(1;;x); }", "ModeMismatch"),
])
def test_other_rules(src, rule):
    assert rule in rules(src)


def test_check_program_raises_with_positions():
    with pytest.raises(CheckFailed) as info:
        check_program(parse_source(tsia.corpus_source("outalias")))
    (d,) = info.value.diagnostics
    assert d.rule == "OutAlias" and d.routine == "bump" and d.line == 2
    assert "OutAlias" in str(d)


def test_corpus_negatives_tagged():
    expected = {"cfact": "ChildOutcome", "outalias": "OutAlias",
                "delmisuse": "DelMisuse", "extent": "ExtentOverflow"}
    for name, rule in expected.items():
        assert rule in rules(tsia.corpus_source(name)), name
