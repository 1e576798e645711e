import pytest

import tsia
from tsia.errors import CheckFailed
from tsia.frontend import parse_source, propagate_effects
from tsia.frontend.ast import NonlocalDecl


def channels(program, name):
    return [(nl.channel, nl.delegated) for nl in program.routines[name].nonlocals]


def test_puts_gains_del_stdout():
    p = tsia.load(tsia.corpus_source("puts"))
    assert channels(p, "puts") == [("stdout", True)]
    assert p.routines["puts"].nonlocals[0].origin == "inferred"
    assert channels(p, "main") == [("stdout", True)]
    assert channels(p, "putc") == [("stdout", False)]


def test_putint_gains_del_stdout():
    p = tsia.load(tsia.corpus_source("putint"))
    assert channels(p, "putint") == [("stdout", True)]


def test_declared_effect_is_kept():
    p = tsia.load(tsia.corpus_source("puts_del"))
    assert p.routines["puts"].nonlocals[0].origin == "declared"


def test_channel_free_program_unchanged():
    raw = parse_source(tsia.corpus_source("forward"))
    out = propagate_effects(raw)
    assert out.routines == raw.routines


def test_idempotent():
    once = tsia.load(tsia.corpus_source("fact_main"))
    twice = propagate_effects(once)
    assert twice.routines == once.routines


def test_transitive_chain():
    p = tsia.load("c(;;) { putc('x';;); } b(;;) { c(;;); } a(;;) { b(;;); } a(;;);")
    for name in "abc":
        assert channels(p, name) == [("stdout", True)]


def test_check_mode_reports_missing_declaration():
    with pytest.raises(CheckFailed) as info:
        tsia.load(tsia.corpus_source("puts"), effects="check")
    assert info.value.rules == ["UndeclaredEffect"]
    assert info.value.diagnostics[0].routine == "puts"


def test_check_mode_accepts_declared_program():
    p = tsia.load(tsia.corpus_source("puts_del"), effects="check")
    assert p.effects == "check"


def test_conservative_skips_inference():
    p = tsia.load(tsia.corpus_source("puts"), effects="conservative")
    assert p.effects == "conservative"
    assert channels(p, "puts") == []


def test_unknown_mode():
    with pytest.raises(ValueError):
        propagate_effects(parse_source(""), "eager")


def test_inferred_signature_text():
    from tsia.frontend.printer import format_signature
    r = tsia.load(tsia.corpus_source("puts")).routines["puts"]
    assert format_signature(r) == "puts(char s[];;)"
    assert format_signature(r, inferred=True) == "puts(char s[];;)(;del stdout;)"
