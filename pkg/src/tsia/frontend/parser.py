from __future__ import annotations

import dataclasses

from ..errors import ParseError
from . import ast as A
from .lexer import TYPE_KEYWORDS, Token, tokenize

# Lowest binding power first.
_PRECEDENCE = (A.COMPARISON, ("+", "-"), ("*", "/"))


class Parser:
    def __init__(self, tokens):
        self.tokens = list(tokens)
        self.i = 0

    # -- token plumbing ---------------------------------------------------

    def peek(self, k=0):
        j = self.i + k
        if j < len(self.tokens):
            return self.tokens[j]
        last = self.tokens[-1] if self.tokens else None
        line, col = (last.line, last.column + len(last.text)) if last else (1, 1)
        return Token("eof", "", line, col)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def at(self, text, k=0):
        tok = self.peek(k)
        return tok.kind in ("punctuation", "keyword") and tok.text == text

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text):
        tok = self.peek()
        if not self.at(text):
            self.fail(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def expect_ident(self):
        tok = self.peek()
        if tok.kind != "identifier":
            self.fail(f"expected identifier, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column)

    # -- top level --------------------------------------------------------

    def parse_top(self):
        decls, calls = [], []
        while self.peek().kind != "eof":
            tok = self.expect_ident()
            if not self.at("("):
                self.fail("expected '(' after routine name")
            if self._looks_like_decl():
                decls.append(self.parse_routine(tok))
            else:
                call = self.parse_call_tail(tok)
                self.expect(";")
                calls.append(call)
        return decls, calls

    def _looks_like_decl(self):
        # Positioned on the '(' following a name.
        k = 1
        while self.at(";", k):
            k += 1
        tok = self.peek(k)
        if tok.kind == "keyword" and tok.text in TYPE_KEYWORDS:
            return True
        if tok.is_("keyword", "del"):
            nxt = self.peek(k + 1)
            return nxt.kind == "keyword" and nxt.text in TYPE_KEYWORDS
        if tok.is_("punctuation", ")"):
            # name(;;) is a definition only when followed by a body or a
            # nonlocal clause; a bare name(;;); is a call.
            return self.at("{", k + 1) or self.at("(", k + 1)
        return False

    def parse_routine(self, name_tok):
        self.expect("(")
        params = []
        for mode in A.MODES:
            if not (self.at(";") or self.at(")")):
                params.append(self.parse_param(mode))
                while self.accept(","):
                    params.append(self.parse_param(mode))
            if mode != A.OUT:
                self.expect(";")
        self.expect(")")
        nonlocals = ()
        if self.at("("):
            nonlocals = self.parse_nonlocals()
        if self.accept(";"):
            body = None
        else:
            body = self.parse_block()
            self.accept(";")
        return A.RoutineDef(name_tok.text, tuple(params), nonlocals, body,
                            pos=(name_tok.line, name_tok.column))

    def parse_param(self, mode):
        tok = self.peek()
        delegated = bool(self.accept("del"))
        type_tok = self.next()
        if type_tok.kind != "keyword" or type_tok.text not in TYPE_KEYWORDS:
            self.fail("expected a parameter type", type_tok)
        name = self.expect_ident().text
        array, extent = False, None
        if self.accept("["):
            array = True
            if not self.at("]"):
                extent = self.parse_extent()
            self.expect("]")
        return A.ParamDecl(name, mode, type_tok.text, delegated, array, extent,
                           pos=(tok.line, tok.column))

    def parse_extent(self):
        tok = self.peek()
        lo = self.parse_signed_int()
        self.expect(":")
        hi = self.parse_signed_int()
        if lo > hi:
            self.fail(f"empty extent [{lo}:{hi}]", tok)
        return (lo, hi)

    def parse_signed_int(self):
        sign = -1 if self.accept("-") else 1
        tok = self.next()
        if tok.kind != "integer":
            self.fail("expected an integer", tok)
        return sign * tok.value

    def parse_nonlocals(self):
        self.expect("(")
        decls = []
        for mode in A.MODES:
            while not (self.at(";") or self.at(")")):
                tok = self.peek()
                delegated = bool(self.accept("del"))
                name = self.expect_ident().text
                if mode != A.INOUT:
                    self.fail("nonlocal items are declared in the inout position", tok)
                decls.append(A.NonlocalDecl(name, delegated))
                if not self.accept(","):
                    break
            if mode != A.OUT:
                self.expect(";")
        self.expect(")")
        return tuple(decls)

    # -- statements -------------------------------------------------------

    def parse_block(self):
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                self.fail("unterminated block")
            stmts.append(self.parse_stmt())
        self.expect("}")
        return tuple(stmts)

    def parse_branch(self):
        if self.at("{"):
            return self.parse_block()
        return (self.parse_stmt(),)

    def parse_stmt(self):
        tok = self.peek()
        pos = (tok.line, tok.column)
        if tok.is_("keyword", "if"):
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.parse_branch()
            orelse = self.parse_branch() if self.accept("else") else ()
            return A.If(cond, then, orelse, pos=pos)
        if tok.kind == "keyword" and tok.text in TYPE_KEYWORDS:
            self.next()
            name = self.expect_ident().text
            extent = None
            if self.accept("["):
                extent = self.parse_extent()
                self.expect("]")
            init = self.parse_expr() if self.accept("=") else None
            self.expect(";")
            return A.VarDecl(name, tok.text, extent, init, pos=pos)
        if tok.kind == "identifier":
            if self.at("(", 1):
                self.next()
                call = self.parse_call_tail(tok)
                self.expect(";")
                return call
            target = self.parse_lvalue()
            self.expect("=")
            value = self.parse_expr()
            self.expect(";")
            return A.Assign(target, value, pos=pos)
        self.fail(f"unexpected {tok.text or 'end of input'!r}")

    def parse_call_tail(self, name_tok):
        self.expect("(")
        slots = []
        for mode in A.MODES:
            args = []
            if not (self.at(";") or self.at(")")):
                args.append(self.parse_arg(mode))
                while self.accept(","):
                    args.append(self.parse_arg(mode))
            slots.append(tuple(args))
            if mode != A.OUT:
                self.expect(";")
        self.expect(")")
        return A.Call(name_tok.text, *slots, pos=(name_tok.line, name_tok.column))

    def parse_arg(self, mode):
        delegated = bool(self.accept("del"))
        if mode == A.IN:
            return A.Arg(self.parse_expr(), delegated)
        return A.Arg(self.parse_lvalue(), delegated)

    def parse_lvalue(self):
        tok = self.expect_ident()
        pos = (tok.line, tok.column)
        if self.accept("["):
            index = self.parse_expr()
            self.expect("]")
            return A.Index(tok.text, index, pos=pos)
        return A.Var(tok.text, pos=pos)

    # -- expressions ------------------------------------------------------

    def parse_expr(self, level=0):
        if level == len(_PRECEDENCE):
            return self.parse_unary()
        left = self.parse_expr(level + 1)
        while True:
            tok = self.peek()
            if tok.kind == "punctuation" and tok.text in _PRECEDENCE[level]:
                self.next()
                right = self.parse_expr(level + 1)
                left = A.Binary(tok.text, left, right, pos=(tok.line, tok.column))
            else:
                return left

    def parse_unary(self):
        tok = self.peek()
        if self.accept("-"):
            operand = self.parse_unary()
            if isinstance(operand, A.IntLit):
                return A.IntLit(-operand.value, pos=(tok.line, tok.column))
            return A.Binary("-", A.IntLit(0), operand, pos=(tok.line, tok.column))
        return self.parse_primary()

    def parse_primary(self):
        tok = self.next()
        pos = (tok.line, tok.column)
        if tok.kind == "integer":
            return A.IntLit(tok.value, pos=pos)
        if tok.kind == "char":
            return A.CharLit(tok.value, pos=pos)
        if tok.kind == "string":
            return A.StringLit(tok.value, pos=pos)
        if tok.is_("keyword", "true") or tok.is_("keyword", "false"):
            return A.BoolLit(tok.text == "true", pos=pos)
        if tok.kind == "identifier":
            if self.accept("["):
                index = self.parse_expr()
                self.expect("]")
                return A.Index(tok.text, index, pos=pos)
            return A.Var(tok.text, pos=pos)
        if tok.is_("punctuation", "("):
            e = self.parse_expr()
            self.expect(")")
            return e
        self.fail(f"unexpected {tok.text or 'end of input'!r} in expression", tok)


def parse_program(tokens):
    """Build a linked :class:`Program` from a token stream.

    Bare top-level calls become the body of an implicit ``main(;;)``.
    Prototypes stay unbound (``body is None``) unless a builtin or a later
    definition supplies the body.
    """
    decls, calls = Parser(tokens).parse_top()
    return link(decls, calls)


def parse_source(source):
    return parse_program(tokenize(source))


def link(decls, calls):
    from ..builtins import builtin_routines

    routines = dict(builtin_routines())
    defined = {}
    for d in decls:
        if d.body is not None:
            if d.name in defined:
                raise ParseError(f"routine {d.name!r} defined twice", *d.pos)
            if d.name in routines:
                raise ParseError(f"{d.name!r} is a builtin and cannot be redefined", *d.pos)
            defined[d.name] = d
    for d in decls:
        if d.body is not None:
            continue
        if d.name in defined:
            target = defined[d.name]
            if d.nonlocals and not target.nonlocals:
                # A prototype may carry the nonlocal declaration for its definition.
                defined[d.name] = dataclasses.replace(target, nonlocals=d.nonlocals)
        elif d.name not in routines:
            routines[d.name] = d
    routines.update(defined)
    if calls:
        if "main" in defined:
            raise ParseError("top-level calls given together with an explicit main",
                             *calls[0].pos)
        routines["main"] = A.RoutineDef("main", (), (), tuple(calls), implicit=True)
    elif "main" not in routines:
        routines["main"] = A.RoutineDef("main", (), (), (), implicit=True)
    return A.Program(list(decls), list(calls), routines)


def parse_signature(text):
    decls, calls = Parser(tokenize(text)).parse_top()
    assert len(decls) == 1 and not calls
    return decls[0]
