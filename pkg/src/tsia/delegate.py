"""Execution of a single ready task by delegation.

``execute_task`` interprets a routine body against the task's items and
returns an :class:`~tsia.graph.Outcome`: the writes it made, the channel
output of builtins, and the child tasks that replace it.  A call inside a
body is never performed; it becomes a child task placed where its parent
stood, so no parent ever waits on (or reads the outcome of) a child.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import errors as E
from .frontend import ast as A
from .graph import UNSET, Binding, ChildTemplate, Fresh, Literal, Outcome, Region

INT_MIN, INT_MAX = -(2 ** 63), 2 ** 63 - 1


@dataclass
class Value:
    """A strict item held by value: scalar, or tuple indexed from ``lo``."""
    value: object
    base_type: str = "int"
    array: bool = False
    lo: int = 0

    @classmethod
    def of(cls, v):
        if isinstance(v, bool):
            return cls(v, "boolean")
        if isinstance(v, (tuple, list)):
            return cls(tuple(v), "int", True)
        return cls(v, "int")


@dataclass
class Ref:
    """An item held by reference; formal index ``lo`` maps to ``region.lo``."""
    region: Region
    base_type: str = "int"
    array: bool = False
    lo: int = 0
    delegated: bool = False


class Env:
    def __init__(self, names=None, store=None):
        self.names = {}
        for k, v in (names or {}).items():
            self.names[k] = v if isinstance(v, (Value, Ref)) else Value.of(v)
        self.store = store
        self.overlay = {}  # (root, index) -> value written by this task
        self.handed_off = set()  # roots given to a child as inout/out

    def __contains__(self, name):
        return name in self.names

    def __getitem__(self, name):
        try:
            return self.names[name]
        except KeyError:
            raise E.ModeMismatch(f"{name!r} is not bound") from None

    def __setitem__(self, name, entry):
        self.names[name] = entry

    # element access in root coordinates

    def slot(self, root, index):
        key = (root, index)
        if key in self.overlay:
            return self.overlay[key]
        if isinstance(root, Fresh) or self.store is None:
            return UNSET
        item = self.store.items[root]
        return item.slots[index - item.lo]

    def known(self, region):
        if region.root in self.handed_off:
            return False
        return all(self.slot(region.root, i) is not UNSET
                   for i in range(region.lo, region.hi + 1))

    def read_region(self, region):
        vals = tuple(self.slot(region.root, i) for i in range(region.lo, region.hi + 1))
        if any(v is UNSET for v in vals):
            raise E.ReadOfUnsetSlot(f"read of an unset element in [{region.lo}:{region.hi}]")
        return vals

    def write(self, root, index, value):
        self.overlay[(root, index)] = value


def _check_int(v):
    if not INT_MIN <= v <= INT_MAX:
        raise E.ArithmeticOverflow(f"{v} exceeds the 64-bit signed range")
    return v


def _root_index(entry, k, name):
    """Map formal index ``k`` of a Ref onto its root, checking bounds."""
    region = entry.region
    idx = region.lo + (k - entry.lo)
    if not region.lo <= idx <= region.hi:
        raise E.IndexOutOfExtent(f"{name}[{k}] is outside [{entry.lo}:{entry.lo + len(region) - 1}]")
    return idx


def _value_index(entry, k, name):
    idx = k - entry.lo
    if not entry.array or not 0 <= idx < len(entry.value):
        raise E.IndexOutOfExtent(f"{name}[{k}] is outside its extent")
    return idx


def eval_expr(env, e):
    """Evaluate ``e`` strictly; integer division truncates toward zero."""
    if isinstance(e, (A.IntLit, A.BoolLit, A.CharLit)):
        return e.value
    if isinstance(e, A.StringLit):
        return e.chars
    if isinstance(e, A.Var):
        entry = env[e.name]
        if isinstance(entry, Value):
            return entry.value
        if entry.delegated:
            raise E.ModeMismatch(f"del item {e.name!r} cannot be read")
        vals = env.read_region(entry.region)
        return vals if entry.array else vals[0]
    if isinstance(e, A.Index):
        entry = env[e.name]
        k = eval_expr(env, e.index)
        if isinstance(entry, Value):
            return entry.value[_value_index(entry, k, e.name)]
        if entry.delegated:
            raise E.ModeMismatch(f"del item {e.name!r} cannot be read")
        idx = _root_index(entry, k, e.name)
        v = env.slot(entry.region.root, idx)
        if v is UNSET:
            raise E.ReadOfUnsetSlot(f"{e.name}[{k}] is unset")
        return v
    if isinstance(e, A.Binary):
        a = eval_expr(env, e.left)
        b = eval_expr(env, e.right)
        op = e.op
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == ">=":
            return a >= b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == "<":
            return a < b
        if op == "+":
            return _check_int(a + b)
        if op == "-":
            return _check_int(a - b)
        if op == "*":
            return _check_int(a * b)
        if op == "/":
            if b == 0:
                raise E.DivisionByZero("division by zero")
            q = abs(a) // abs(b)
            return _check_int(q if (a < 0) == (b < 0) else -q)
    raise TypeError(f"cannot evaluate {e!r}")


class _Interpreter:
    def __init__(self, task, routines, store):
        self.task = task
        self.routines = routines
        self.store = store
        self.env = Env(store=store)
        self.outcome = Outcome()

    def resolve(self, name):
        r = self.routines.get(name)
        if r is None or r.is_prototype:
            raise E.UnknownRoutine(f"no definition for routine {name!r}")
        return r

    def bind(self, routine):
        t = self.task
        for mode in A.MODES:
            params, bindings = routine.slot(mode), t.slot(mode)
            if len(params) != len(bindings):
                raise E.ModeMismatch(f"{t.name} takes {len(params)} {mode} item(s), "
                                     f"task has {len(bindings)}")
            for p, b in zip(params, bindings):
                self.env[p.name] = self.entry_for(p, b)

    def entry_for(self, p, b):
        if isinstance(b.target, Literal):
            return Value(b.target.value, p.base_type, p.array, p.lo)
        if p.mode == A.IN and not p.delegated:
            if not self.store.defined(b.target):
                raise E.ReadOfUnsetSlot(f"strict in {p.name!r} of {self.task.name} is unset")
            vals = self.store.read(b.target)
            return Value(vals if p.array else vals[0], p.base_type, p.array, p.lo)
        return Ref(b.target, p.base_type, p.array, p.lo, p.delegated)

    def run(self):
        routine = self.resolve(self.task.name)
        if routine.builtin:
            ins = [b.target.value if isinstance(b.target, Literal) else
                   (self.store.read(b.target) if b.array else self.store.read(b.target)[0])
                   for b in self.task.slot(A.IN)]
            outs = [b.target for b in self.task.slot(A.OUT)]
            return builtin(self.task.name, ins, outs)
        self.bind(routine)
        self.block(routine.body)
        self.flush_writes()
        return self.outcome

    def flush_writes(self):
        runs = {}
        for (root, idx), v in self.env.overlay.items():
            runs.setdefault(root, {})[idx] = v
        for root, cells in runs.items():
            idxs = sorted(cells)
            start = prev = idxs[0]
            for i in idxs[1:] + [None]:
                if i is not None and i == prev + 1:
                    prev = i
                    continue
                vals = tuple(cells[k] for k in range(start, prev + 1))
                self.outcome.writes.append((Region(root, start, prev), vals))
                if i is not None:
                    start = prev = i

    def allocate(self, name, base_type, extent):
        ph = Fresh(len(self.outcome.allocations))
        lo, hi = extent if extent else (0, 0)
        self.outcome.allocations.append((ph, base_type, (lo, hi), name))
        return Ref(Region(ph, lo, hi), base_type, extent is not None, lo)

    # -- statements -------------------------------------------------------

    def block(self, stmts):
        for s in stmts:
            if isinstance(s, A.VarDecl):
                ref = self.allocate(s.name, s.base_type, s.extent)
                self.env[s.name] = ref
                if s.init is not None:
                    self.store_value(ref, eval_expr(self.env, s.init), s.name)
            elif isinstance(s, A.Assign):
                v = eval_expr(self.env, s.value)
                entry = self.env[s.target.name]
                if not isinstance(entry, Ref):
                    raise E.ModeMismatch(f"in parameter {s.target.name!r} cannot be assigned")
                if isinstance(s.target, A.Index):
                    k = eval_expr(self.env, s.target.index)
                    self.env.write(entry.region.root, _root_index(entry, k, s.target.name), v)
                else:
                    self.store_value(entry, v, s.target.name)
            elif isinstance(s, A.If):
                self.block(s.then if eval_expr(self.env, s.cond) else s.orelse)
            elif isinstance(s, A.Call):
                self.call(s)
            else:
                raise TypeError(s)

    def store_value(self, ref, v, name):
        region = ref.region
        if not ref.array:
            self.env.write(region.root, region.lo, v)
            return
        vals = tuple(v) + (0,) * (len(region) - len(v))
        if len(vals) != len(region):
            raise E.ExtentOverflow(f"{len(v)} elements do not fit {name}")
        for i, x in enumerate(vals):
            self.env.write(region.root, region.lo + i, x)

    def sub_region(self, entry, e, param, callee):
        region = entry.region
        if isinstance(e, A.Var):
            start = region.lo
            if entry.array and not param.array:
                raise E.ModeMismatch(f"array {e.name!r} passed to scalar {param.name!r} of {callee}")
        else:
            start = _root_index(entry, eval_expr(self.env, e.index), e.name)
        if not param.array:
            length = 1
        elif param.length is not None:
            length = param.length
        else:
            length = region.hi - start + 1
        end = start + length - 1
        if start < region.lo or end > region.hi:
            raise E.ExtentOverflow(
                f"{e.name} region [{start}:{end}] exceeds [{region.lo}:{region.hi}] "
                f"when passed to {callee}")
        return Region(region.root, start, end)

    def sub_value(self, entry, e, param, callee):
        if isinstance(e, A.Index):
            k = _value_index(entry, eval_expr(self.env, e.index), e.name)
        else:
            k = 0
        if not param.array:
            return entry.value[k] if isinstance(e, A.Index) else entry.value
        vals = entry.value[k:]
        if param.length is not None:
            if len(vals) < param.length:
                raise E.ExtentOverflow(f"{e.name} is too short for {param.name!r} of {callee}")
            vals = vals[:param.length]
        return vals

    def in_binding(self, e, param, callee):
        named = isinstance(e, (A.Var, A.Index)) and e.name in self.env
        if named:
            entry = self.env[e.name]
            if isinstance(entry, Ref):
                region = self.sub_region(entry, e, param, callee)
                if entry.delegated or param.delegated or not self.env.known(region):
                    return region
                vals = self.env.read_region(region)
                return Literal(vals if param.array else vals[0])
            return Literal(self.sub_value(entry, e, param, callee))
        v = eval_expr(self.env, e)
        if param.array:
            if not isinstance(v, tuple):
                raise E.ModeMismatch(f"scalar passed to array {param.name!r} of {callee}")
            if param.length is not None and len(v) != param.length:
                raise E.ExtentOverflow(f"{len(v)} elements passed to {param.name!r} of {callee}")
        return Literal(v)

    def call(self, c):
        callee = self.resolve(c.name)
        for mode, args in c.slots():
            if len(args) != len(callee.slot(mode)):
                raise E.ModeMismatch(f"{c.name} takes {len(callee.slot(mode))} {mode} "
                                     f"argument(s), got {len(args)}")
        bindings = []
        handed = []
        for mode, args in c.slots():
            for arg, param in zip(args, callee.slot(mode)):
                e = arg.expr
                if mode == A.IN:
                    target = self.in_binding(e, param, c.name)
                else:
                    if e.name not in self.env:
                        if mode != A.OUT or not isinstance(e, A.Var):
                            raise E.ModeMismatch(f"{e.name!r} is not bound")
                        if param.array and param.extent is None:
                            raise E.ExtentOverflow(f"cannot size {e.name!r} from an open array")
                        self.env[e.name] = self.allocate(e.name, param.base_type, param.extent)
                    entry = self.env[e.name]
                    if not isinstance(entry, Ref):
                        raise E.ModeMismatch(f"in parameter {e.name!r} passed as {mode}")
                    target = self.sub_region(entry, e, param, c.name)
                    handed.append(target.root)
                bindings.append(Binding(mode, param.delegated, target, param.name,
                                        param.base_type, param.array))
        self.env.handed_off.update(handed)
        channels = tuple((nl.channel, nl.delegated) for nl in callee.nonlocals)
        self.outcome.children.append(ChildTemplate(c.name, tuple(bindings), channels))


def execute_task(task, routines, store):
    """Run ``task`` once against ``store`` and return its :class:`Outcome`.

    The store is only read; the caller applies the outcome atomically with
    ``graph.complete_task``.
    """
    return _Interpreter(task, routines, store).run()


def _digits(i):
    return tuple(ord(ch) for ch in str(i))


def builtin(name, ins, outs=()):
    """Outcome of builtin ``name`` given strict in values and out regions."""
    out = Outcome()
    if name in ("plus", "add"):
        a, b = ins
        out.writes.append((outs[0], (_check_int(a + b),)))
    elif name == "mult":
        a, b = ins
        out.writes.append((outs[0], (_check_int(a * b),)))
    elif name == "putc":
        out.channel_writes.append(("stdout", ins[0]))
    elif name == "intprint":
        out.channel_writes.extend(("stdout", d) for d in _digits(ins[0]))
    elif name == "int2chars":
        region = outs[0]
        text = _digits(ins[0]) + (0,)
        if len(text) > len(region):
            raise E.ExtentOverflow(f"{ins[0]} does not fit {len(region)} chars")
        out.writes.append((region, text + (0,) * (len(region) - len(text))))
    elif name == "fill":
        region = outs[0]
        out.writes.append((region, (ins[0],) * len(region)))
    else:
        raise E.UnknownRoutine(f"no builtin named {name!r}")
    return out
