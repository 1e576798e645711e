"""Build a :class:`Graph` from its textual representation.

Accepts the notation produced by ``render_graph``::

    plus(u,v;;a) plus(v,w;;b) mult(a,b;;c)
    b(false;del q;)
    c(;;h[5000:9999])
    putc('C';;)(;stdout;)

Item names are arbitrary; every distinct name becomes one root item whose
extent is the hull of the sub-ranges mentioned for it.
"""

from __future__ import annotations

from .errors import ParseError
from .frontend.ast import IN, MODES, OUT
from .frontend.lexer import tokenize
from .frontend.parser import Parser
from .graph import Binding, Graph, Literal, Region, alloc_item


class _GraphParser(Parser):
    def parse_tasks(self):
        tasks = []
        while self.peek().kind != "eof":
            name = self.expect_ident().text
            self.expect("(")
            slots = []
            for mode in MODES:
                args = []
                while not (self.at(";") or self.at(")")):
                    args.append(self.parse_item())
                    if not self.accept(","):
                        break
                slots.append(args)
                if mode != OUT:
                    self.expect(";")
            self.expect(")")
            channels = None
            if self.at("(") and self.at(";", 1):
                channels = self.parse_nonlocals()
            self.accept(";")
            tasks.append((name, slots, channels))
        return tasks

    def parse_item(self):
        delegated = bool(self.accept("del"))
        tok = self.peek()
        if tok.kind == "identifier":
            self.next()
            rng = None
            if self.accept("["):
                lo = self.parse_signed_int()
                hi = lo
                if self.accept(":"):
                    hi = self.parse_signed_int()
                self.expect("]")
                rng = (lo, hi)
            return ("item", delegated, tok.text, rng)
        if self.accept("{"):
            vals = []
            while not self.at("}"):
                vals.append(self.parse_signed_int())
                if not self.accept(","):
                    break
            self.expect("}")
            return ("lit", delegated, tuple(vals), ("int", True))
        e = self.parse_unary()
        kind = type(e).__name__
        if kind == "IntLit":
            return ("lit", delegated, e.value, ("int", False))
        if kind == "BoolLit":
            return ("lit", delegated, e.value, ("boolean", False))
        if kind == "CharLit":
            return ("lit", delegated, e.value, ("char", False))
        if kind == "StringLit":
            return ("lit", delegated, e.chars, ("char", True))
        self.fail("expected an item or a literal", tok)


def parse_graph(text, routines=None, values=None, effects="infer"):
    """Parse textual graph ``text`` into a live :class:`Graph`.

    ``routines`` (name -> RoutineDef) supplies ``del`` flags, item types and
    nonlocal declarations from signatures; ``values`` presets items by name.
    Every named item is observed, so its writes show up in ``Graph.finals``.
    """
    tasks = _GraphParser(tokenize(text)).parse_tasks()
    routines = routines or {}
    values = values or {}

    spans, types = {}, {}
    for name, slots, _ in tasks:
        sig = routines.get(name)
        for mode, args in zip(MODES, slots):
            params = sig.slot(mode) if sig else ()
            for k, arg in enumerate(args):
                if arg[0] != "item":
                    continue
                _, _, iname, rng = arg
                if k < len(params):
                    types.setdefault(iname, params[k].base_type)
                    if rng is None and params[k].extent:
                        lo, hi = params[k].extent
                        rng = (0, hi - lo)
                if rng is not None:
                    lo, hi = spans.get(iname, rng)
                    spans[iname] = (min(lo, rng[0]), max(hi, rng[1]))
                else:
                    spans.setdefault(iname, None)

    g = Graph(effects)
    ids = {}
    for iname, span in spans.items():
        extent = span if span is not None else (0, 0)
        ids[iname] = alloc_item(g, types.get(iname, "int"), extent, iname, observed=True)
        if iname in values:
            v = values[iname]
            v = tuple(v) if isinstance(v, (list, tuple, str)) else (v,)
            v = tuple(ord(c) if isinstance(c, str) else c for c in v)
            g.write(g.items[ids[iname]].whole, v)
    unknown = set(values) - set(ids)
    if unknown:
        raise ParseError(f"values given for unknown items {sorted(unknown)}")

    for name, slots, channels in tasks:
        sig = routines.get(name)
        bindings = []
        for mode, args in zip(MODES, slots):
            params = sig.slot(mode) if sig else ()
            if sig is not None and len(params) != len(args):
                raise ParseError(f"{name} takes {len(params)} {mode} item(s), got {len(args)}")
            for k, arg in enumerate(args):
                param = params[k] if k < len(params) else None
                delegated = arg[1] or bool(param and param.delegated)
                formal = param.name if param else ""
                if arg[0] == "lit":
                    if mode != IN:
                        raise ParseError(f"literal given as {mode} of {name}")
                    base, array = arg[3]
                    if param is not None:
                        base, array = param.base_type, param.array
                    bindings.append(Binding(mode, delegated, Literal(arg[2]), formal, base, array))
                    continue
                _, _, iname, rng = arg
                item = g.items[ids[iname]]
                if rng is None:
                    if param is not None and param.array and param.length:
                        rng = (item.lo, item.lo + param.length - 1)
                    else:
                        rng = (item.lo, item.hi)
                array = param.array if param is not None else not item.is_scalar
                bindings.append(Binding(mode, delegated, Region(item.id, *rng), formal,
                                        item.base_type, array))
        if channels is None:
            channels = sig.nonlocals if sig else ()
        g.add_task(name, bindings, [(nl.channel, nl.delegated) for nl in channels])
    return g
