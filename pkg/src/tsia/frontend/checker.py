"""Static validation of parsed programs.

Rule tags reported:

``OutAlias``        an out argument overlaps another argument of the same call
``ChildOutcome``    a body reads or assigns an item after handing it to a child
``DelMisuse``       a ``del`` item is read or assigned instead of forwarded
``ExtentOverflow``  a sub-region argument runs past the caller's extent
``ExtentMismatch``  array/scalar shape disagreement, or an uninferable extent
``TypeMismatch``    base types disagree
``ModeMismatch``    arity disagrees, or a strict in is written
``UnknownRoutine``  a call names no routine, or only an unbound prototype
``UnknownName``     an expression names nothing in scope
``Redeclared``      a declaration reuses a name already in scope
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import CheckFailed, Diagnostic
from . import ast as A

NUMERIC = ("int", "char")


@dataclass(frozen=True)
class Sym:
    name: str
    base_type: str
    array: bool
    extent: object  # (lo, hi), or None for scalars and open arrays
    kind: str  # in | inout | out | local
    delegated: bool = False

    @property
    def by_value(self):
        return self.kind == A.IN and not self.delegated

    @property
    def span(self):
        if not self.array:
            return (0, 0)
        return self.extent


@dataclass(frozen=True)
class EType:
    base: str
    array: bool = False


def compatible(a, b):
    if a == b:
        return True
    return a in NUMERIC and b in NUMERIC


def const_int(e):
    if isinstance(e, A.IntLit):
        return e.value
    return None


class RoutineChecker:
    def __init__(self, program, routine, out):
        self.program = program
        self.routine = routine
        self.out = out

    def report(self, rule, message, pos=(0, 0)):
        self.out.append(Diagnostic(rule, message, pos[0], pos[1], self.routine.name))

    def run(self):
        scope = {}
        for p in self.routine.params:
            if p.name in scope:
                self.report("Redeclared", f"parameter {p.name!r} declared twice", p.pos)
            scope[p.name] = Sym(p.name, p.base_type, p.array, p.extent, p.mode, p.delegated)
        outs = {p.name for p in self.routine.slot(A.OUT)}
        for p in self.routine.params:
            if p.mode != A.OUT and p.name in outs:
                self.report("OutAlias", f"out parameter {p.name!r} also named as an in/inout",
                            p.pos)
        self.block(self.routine.body, scope, set())

    # -- statements -------------------------------------------------------

    def block(self, stmts, scope, touched):
        scope = dict(scope)
        touched = set(touched)
        for s in stmts:
            touched = self.stmt(s, scope, touched)
        return touched

    def stmt(self, s, scope, touched):
        if isinstance(s, A.VarDecl):
            if s.name in scope:
                self.report("Redeclared", f"{s.name!r} is already declared", s.pos)
            if s.init is not None:
                t = self.expr(s.init, scope, touched)
                self.assignable(t, EType(s.base_type, s.extent is not None), s.pos)
            scope[s.name] = Sym(s.name, s.base_type, s.extent is not None, s.extent, "local")
            touched.discard(s.name)
            return touched
        if isinstance(s, A.Assign):
            sym = self.lookup(s.target.name, scope, s.target.pos)
            value_t = self.expr(s.value, scope, touched)
            if sym is None:
                return touched
            if sym.delegated:
                self.report("DelMisuse", f"del item {sym.name!r} is assigned directly", s.pos)
            elif sym.name in touched:
                self.report("ChildOutcome",
                            f"{sym.name!r} is assigned after being passed to a child task",
                            s.pos)
            if sym.by_value:
                self.report("ModeMismatch", f"in parameter {sym.name!r} cannot be assigned",
                            s.pos)
            target_t = self.lvalue_type(s.target, sym, scope, touched)
            self.assignable(value_t, target_t, s.pos)
            return touched
        if isinstance(s, A.If):
            t = self.expr(s.cond, scope, touched)
            if t is not None and t != EType("boolean"):
                self.report("TypeMismatch", "if condition must be boolean", s.pos)
            a = self.block(s.then, scope, touched)
            b = self.block(s.orelse, scope, touched)
            return a | b
        if isinstance(s, A.Call):
            return self.call(s, scope, touched)
        raise TypeError(s)

    def call(self, c, scope, touched):
        callee = self.program.routines.get(c.name)
        if callee is None:
            self.report("UnknownRoutine", f"no routine named {c.name!r}", c.pos)
            self.loose_args(c, scope, touched)
            return touched
        if callee.is_prototype:
            self.report("UnknownRoutine", f"prototype {c.name!r} is never defined", c.pos)
        bad_arity = False
        for mode, args in c.slots():
            want = len(callee.slot(mode))
            if len(args) != want:
                self.report("ModeMismatch",
                            f"{c.name} takes {want} {mode} argument(s), got {len(args)}", c.pos)
                bad_arity = True
        if bad_arity:
            self.loose_args(c, scope, touched)
            return touched

        regions = []  # (mode, name, lo, hi) with None bounds when unknown
        written = set()
        for mode, args in c.slots():
            for arg, param in zip(args, callee.slot(mode)):
                if arg.delegated and not param.delegated:
                    self.report("DelMisuse",
                                f"argument marked del but {c.name}'s {param.name!r} is strict",
                                c.pos)
                if mode == A.IN:
                    region = self.in_arg(arg.expr, param, scope, touched, c)
                else:
                    region = self.ref_arg(arg.expr, param, scope, touched, c)
                    if region is not None:
                        written.add(region[0])
                if region is not None:
                    regions.append((mode,) + region)
        self.check_aliasing(regions, c)
        return touched | written

    def loose_args(self, c, scope, touched):
        for mode, args in c.slots():
            for arg in args:
                if mode == A.IN and not self.is_forward(arg.expr):
                    self.expr(arg.expr, scope, touched)

    @staticmethod
    def is_forward(e):
        return isinstance(e, (A.Var, A.Index))

    def in_arg(self, e, param, scope, touched, c):
        """Check one in argument; return its region when it names an item."""
        if self.is_forward(e) and e.name in scope:
            sym = scope[e.name]
            if isinstance(e, A.Index):
                self.expr(e.index, scope, touched)
            if param.array:
                if not sym.array:
                    self.report("ExtentMismatch",
                                f"scalar {sym.name!r} passed where {c.name} expects an array",
                                e.pos)
                elif not compatible(sym.base_type, param.base_type) or \
                        (sym.base_type == "boolean") != (param.base_type == "boolean"):
                    self.report("TypeMismatch", f"{sym.name!r} has type {sym.base_type}[]",
                                e.pos)
                else:
                    self.check_extent(e, sym, param, c)
            else:
                if isinstance(e, A.Index):
                    if not sym.array:
                        self.report("TypeMismatch", f"{sym.name!r} is not an array", e.pos)
                elif sym.array:
                    self.report("ExtentMismatch",
                                f"array {sym.name!r} passed where {c.name} expects a scalar",
                                e.pos)
                if not compatible(sym.base_type, param.base_type):
                    self.report("TypeMismatch",
                                f"{sym.name!r} is {sym.base_type}, "
                                f"{c.name} expects {param.base_type}", e.pos)
            if sym.by_value:
                return None
            return self.static_region(e, sym, param)
        t = self.expr(e, scope, touched)
        if t is not None:
            self.assignable(t, EType(param.base_type, param.array), e.pos, c.name)
            if isinstance(e, A.StringLit) and param.length is not None and \
                    len(e.chars) != param.length:
                self.report("ExtentMismatch",
                            f"string of {len(e.chars)} chars passed to extent "
                            f"[{param.extent[0]}:{param.extent[1]}]", e.pos)
        return None

    def ref_arg(self, e, param, scope, touched, c):
        if isinstance(e, A.Index):
            self.expr(e.index, scope, touched)
        if e.name not in scope:
            if isinstance(e, A.Var) and param.mode == A.OUT:
                if param.array and param.extent is None:
                    self.report("ExtentMismatch",
                                f"cannot infer an extent for {e.name!r} from {c.name}'s "
                                f"open array", e.pos)
                # An out argument naming nothing declares a fresh local.
                scope[e.name] = Sym(e.name, param.base_type, param.array, param.extent,
                                    "local")
                return (e.name, None, None)
            self.report("UnknownName", f"{e.name!r} is not declared", e.pos)
            return None
        sym = scope[e.name]
        if sym.by_value:
            self.report("ModeMismatch",
                        f"in parameter {sym.name!r} passed as {param.mode} of {c.name}", e.pos)
            return None
        if not compatible(sym.base_type, param.base_type) or \
                (sym.base_type == "boolean") != (param.base_type == "boolean"):
            self.report("TypeMismatch",
                        f"{sym.name!r} is {sym.base_type}, {c.name} expects {param.base_type}",
                        e.pos)
        if isinstance(e, A.Index) and not sym.array:
            self.report("TypeMismatch", f"{sym.name!r} is not an array", e.pos)
        elif isinstance(e, A.Var) and sym.array and not param.array:
            self.report("ExtentMismatch",
                        f"array {sym.name!r} passed where {c.name} expects a scalar", e.pos)
        elif param.array and not sym.array:
            if param.length not in (None, 1):
                self.report("ExtentMismatch",
                            f"scalar {sym.name!r} passed where {c.name} expects an array",
                            e.pos)
        else:
            self.check_extent(e, sym, param, c)
        return self.static_region(e, sym, param)

    def check_extent(self, e, sym, param, c):
        if not sym.array or sym.extent is None:
            return
        lo, hi = sym.extent
        start = lo if isinstance(e, A.Var) else const_int(e.index)
        if start is None:
            return
        length = param.length if param.array else 1
        end = start + (length - 1 if length is not None else 0)
        if start < lo or end > hi:
            self.report("ExtentOverflow",
                        f"{sym.name}[{start}:{end}] exceeds {sym.name}'s extent [{lo}:{hi}]",
                        e.pos)

    @staticmethod
    def static_region(e, sym, param):
        if isinstance(e, A.Var):
            if not sym.array or not param.array:
                return (e.name, None, None) if sym.array else (e.name, 0, 0)
            start = sym.extent[0] if sym.extent else None
        else:
            start = const_int(e.index)
        if start is None:
            return (e.name, None, None)
        length = param.length if param.array else 1
        if length is None:
            return (e.name, start, None)
        return (e.name, start, start + length - 1)

    def check_aliasing(self, regions, c):
        for i, (m1, n1, lo1, hi1) in enumerate(regions):
            for m2, n2, lo2, hi2 in regions[i + 1:]:
                if n1 != n2 or (m1 != A.OUT and m2 != A.OUT):
                    continue
                if lo1 is not None and lo2 is not None:
                    end1 = hi1 if hi1 is not None else float("inf")
                    end2 = hi2 if hi2 is not None else float("inf")
                    if end1 < lo2 or end2 < lo1:
                        continue
                self.report("OutAlias",
                            f"out argument {n1!r} of {c.name} aliases another argument", c.pos)
                return

    # -- expressions ------------------------------------------------------

    def lookup(self, name, scope, pos):
        sym = scope.get(name)
        if sym is None:
            self.report("UnknownName", f"{name!r} is not declared", pos)
        return sym

    def read(self, name, scope, touched, pos):
        sym = self.lookup(name, scope, pos)
        if sym is None:
            return None
        if sym.delegated:
            self.report("DelMisuse", f"del item {name!r} is read in an expression", pos)
        elif name in touched:
            self.report("ChildOutcome",
                        f"{name!r} is read after being passed to a child task", pos)
        return sym

    def lvalue_type(self, target, sym, scope, touched):
        if isinstance(target, A.Index):
            self.index(target, sym, scope, touched)
            return EType(sym.base_type)
        return EType(sym.base_type, sym.array)

    def index(self, e, sym, scope, touched):
        t = self.expr(e.index, scope, touched)
        if t is not None and t.base not in NUMERIC or (t is not None and t.array):
            self.report("TypeMismatch", "array index must be an int", e.pos)
        if not sym.array:
            self.report("TypeMismatch", f"{sym.name!r} is not an array", e.pos)

    def expr(self, e, scope, touched):
        if isinstance(e, A.IntLit):
            return EType("int")
        if isinstance(e, A.BoolLit):
            return EType("boolean")
        if isinstance(e, A.CharLit):
            return EType("char")
        if isinstance(e, A.StringLit):
            return EType("char", True)
        if isinstance(e, A.Var):
            sym = self.read(e.name, scope, touched, e.pos)
            return None if sym is None else EType(sym.base_type, sym.array)
        if isinstance(e, A.Index):
            sym = self.read(e.name, scope, touched, e.pos)
            if sym is None:
                self.expr(e.index, scope, touched)
                return None
            self.index(e, sym, scope, touched)
            return EType(sym.base_type)
        if isinstance(e, A.Binary):
            lt = self.expr(e.left, scope, touched)
            rt = self.expr(e.right, scope, touched)
            if lt is None or rt is None:
                return EType("boolean") if e.op in A.COMPARISON else EType("int")
            if lt.array or rt.array:
                self.report("TypeMismatch", f"operator {e.op} applied to an array", e.pos)
            if e.op in ("==", "!="):
                if not compatible(lt.base, rt.base):
                    self.report("TypeMismatch", f"cannot compare {lt.base} with {rt.base}",
                                e.pos)
                return EType("boolean")
            if lt.base not in NUMERIC or rt.base not in NUMERIC:
                self.report("TypeMismatch", f"operator {e.op} needs numeric operands", e.pos)
            return EType("boolean") if e.op in A.COMPARISON else EType("int")
        raise TypeError(e)

    def assignable(self, value_t, target_t, pos, callee=None):
        if value_t is None:
            return
        where = f" for {callee}" if callee else ""
        if value_t.array != target_t.array or not compatible(value_t.base, target_t.base):
            shape = lambda t: t.base + ("[]" if t.array else "")
            self.report("TypeMismatch",
                        f"{shape(value_t)} value where {shape(target_t)} is expected{where}",
                        pos)


def _signature_shape(r):
    return [(p.mode, p.base_type, p.delegated, p.array) for p in r.params]


def check_prototypes(program, out):
    for d in program.decls:
        if d.body is not None:
            continue
        bound = program.routines.get(d.name)
        if bound is None or bound is d:
            continue
        same = _signature_shape(d) == _signature_shape(bound) and all(
            p.extent is None or p.extent == q.extent for p, q in zip(d.params, bound.params))
        if not same:
            out.append(Diagnostic("TypeMismatch",
                                  f"prototype of {d.name!r} disagrees with its definition",
                                  d.pos[0], d.pos[1], d.name))
        if d.nonlocals and set(d.nonlocals) != set(bound.nonlocals):
            out.append(Diagnostic("TypeMismatch",
                                  f"prototype of {d.name!r} declares different nonlocal items",
                                  d.pos[0], d.pos[1], d.name))


def diagnose(program):
    """Return every static diagnostic for ``program`` (empty when valid)."""
    out = []
    check_prototypes(program, out)
    main = program.routines.get(program.entry)
    if main is not None and main.params:
        out.append(Diagnostic("ModeMismatch", "main takes no parameters",
                              main.pos[0], main.pos[1], main.name))
    for r in program.user_routines():
        if r.body is not None:
            RoutineChecker(program, r, out).run()
    return out


def check_program(program):
    """Validate ``program``; raise :class:`CheckFailed` listing every violation."""
    diagnostics = diagnose(program)
    if diagnostics:
        raise CheckFailed(diagnostics)
    return program
