"""Syntax tree for TSIA programs.

Source positions are carried on every node but excluded from equality, so two
trees compare equal whenever they have the same structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

IN, INOUT, OUT = "in", "inout", "out"
MODES = (IN, INOUT, OUT)


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    pos: tuple = _pos()


@dataclass(frozen=True)
class CharLit:
    value: int  # code point
    pos: tuple = _pos()


@dataclass(frozen=True)
class StringLit:
    chars: tuple  # code points, terminator included
    pos: tuple = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Index:
    name: str
    index: "Expr"
    pos: tuple = _pos()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple = _pos()


Expr = Union[IntLit, BoolLit, CharLit, StringLit, Var, Index, Binary]

ARITHMETIC = ("+", "-", "*", "/")
COMPARISON = ("==", "!=", ">=", "<=", ">", "<")


@dataclass(frozen=True)
class Arg:
    expr: Expr
    delegated: bool = False


@dataclass(frozen=True)
class VarDecl:
    name: str
    base_type: str
    extent: Optional[tuple] = None  # (lo, hi) for arrays
    init: Optional[Expr] = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class Assign:
    target: Union[Var, Index]
    value: Expr
    pos: tuple = _pos()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple
    orelse: tuple = ()
    pos: tuple = _pos()


@dataclass(frozen=True)
class Call:
    name: str
    ins: tuple = ()
    inouts: tuple = ()
    outs: tuple = ()
    pos: tuple = _pos()

    def slots(self):
        return ((IN, self.ins), (INOUT, self.inouts), (OUT, self.outs))


Stmt = Union[VarDecl, Assign, If, Call]


@dataclass(frozen=True)
class ParamDecl:
    name: str
    mode: str
    base_type: str
    delegated: bool = False
    array: bool = False
    extent: Optional[tuple] = None  # None on an array means "any extent" (char s[])
    pos: tuple = _pos()

    @property
    def length(self):
        """Element count, or None for an open array."""
        if not self.array:
            return 1
        if self.extent is None:
            return None
        return self.extent[1] - self.extent[0] + 1

    @property
    def lo(self):
        return self.extent[0] if self.extent else 0


@dataclass(frozen=True)
class NonlocalDecl:
    channel: str
    delegated: bool = False
    origin: str = field(default="declared", compare=False)


@dataclass(frozen=True)
class RoutineDef:
    name: str
    params: tuple
    nonlocals: tuple = ()
    body: Optional[tuple] = None  # None marks a prototype
    builtin: bool = False
    implicit: bool = False
    pos: tuple = _pos()

    def slot(self, mode):
        return tuple(p for p in self.params if p.mode == mode)

    @property
    def is_prototype(self):
        return self.body is None and not self.builtin

    def channel(self, name):
        for nl in self.nonlocals:
            if nl.channel == name:
                return nl
        return None


@dataclass
class Program:
    decls: list  # RoutineDefs as written, in source order
    toplevel: list  # bare top-level calls
    routines: dict  # linked routine table: builtins, definitions, implicit main
    entry: str = "main"
    effects: str = "infer"  # how nonlocal declarations were completed

    @property
    def main(self):
        return self.routines[self.entry]

    def user_routines(self):
        return [r for r in self.routines.values() if not r.builtin]
