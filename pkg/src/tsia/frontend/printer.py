"""Pretty-printer producing source that parses back to an identical tree."""

from __future__ import annotations

from . import ast as A
from .lexer import quote_char, quote_string


def format_expr(e):
    if isinstance(e, A.IntLit):
        return str(e.value)
    if isinstance(e, A.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, A.CharLit):
        return quote_char(e.value)
    if isinstance(e, A.StringLit):
        return quote_string(e.chars[:-1])
    if isinstance(e, A.Var):
        return e.name
    if isinstance(e, A.Index):
        return f"{e.name}[{format_expr(e.index)}]"
    if isinstance(e, A.Binary):
        return f"({_bare(e)})"
    raise TypeError(f"not an expression: {e!r}")


def _bare(e):
    # Outermost binary without its parentheses, for conditions.
    if isinstance(e, A.Binary):
        return f"{format_expr(e.left)} {e.op} {format_expr(e.right)}"
    return format_expr(e)


def format_arg(arg):
    return ("del " if arg.delegated else "") + format_expr(arg.expr)


def format_call(c):
    slots = (",".join(format_arg(a) for a in args) for _, args in c.slots())
    return f"{c.name}({';'.join(slots)})"


def format_param(p):
    text = ("del " if p.delegated else "") + f"{p.base_type} {p.name}"
    if p.array:
        text += f"[{p.extent[0]}:{p.extent[1]}]" if p.extent else "[]"
    return text


def format_signature(r, inferred=False):
    """Header text; inferred nonlocals are shown only when asked for."""
    slots = (", ".join(format_param(p) for p in r.slot(m)) for m in A.MODES)
    text = f"{r.name}({';'.join(slots)})"
    declared = [nl for nl in r.nonlocals if inferred or nl.origin == "declared"]
    if declared:
        items = ",".join(("del " if nl.delegated else "") + nl.channel for nl in declared)
        text += f"(;{items};)"
    return text


def format_stmts(stmts, indent):
    lines = []
    pad = "    " * indent
    for s in stmts:
        if isinstance(s, A.Call):
            lines.append(f"{pad}{format_call(s)};")
        elif isinstance(s, A.Assign):
            lines.append(f"{pad}{format_expr(s.target)} = {format_expr(s.value)};")
        elif isinstance(s, A.VarDecl):
            text = f"{pad}{s.base_type} {s.name}"
            if s.extent:
                text += f"[{s.extent[0]}:{s.extent[1]}]"
            if s.init is not None:
                text += f" = {format_expr(s.init)}"
            lines.append(text + ";")
        elif isinstance(s, A.If):
            lines.append(f"{pad}if ({_bare(s.cond)}) {{")
            lines.extend(format_stmts(s.then, indent + 1))
            if s.orelse:
                lines.append(f"{pad}}} else {{")
                lines.extend(format_stmts(s.orelse, indent + 1))
            lines.append(f"{pad}}}")
        else:
            raise TypeError(f"not a statement: {s!r}")
    return lines


def format_routine(r):
    head = format_signature(r)
    if r.body is None:
        return head + ";"
    return "\n".join([head + " {", *format_stmts(r.body, 1), "}"])


def format_program(p):
    """Render a program back to source: declarations, then top-level calls."""
    parts = [format_routine(d) for d in p.decls]
    parts.extend(format_call(c) + ";" for c in p.toplevel)
    return "\n".join(parts) + ("\n" if parts else "")
