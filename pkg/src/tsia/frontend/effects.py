"""Propagation of nonlocal effect declarations up the call graph."""

from __future__ import annotations

import dataclasses

from ..errors import CheckFailed, Diagnostic
from . import ast as A

INFER, CHECK, CONSERVATIVE = "infer", "check", "conservative"


def callees(stmts):
    for s in stmts:
        if isinstance(s, A.Call):
            yield s.name
        elif isinstance(s, A.If):
            yield from callees(s.then)
            yield from callees(s.orelse)


def propagate_effects(program, mode=INFER):
    """Return a copy of ``program`` whose nonlocal declarations are complete.

    A routine calling anything that touches channel X gains ``(;del X;)``
    unless it already declares X.  In ``check`` mode a missing declaration
    raises :class:`CheckFailed` with ``UndeclaredEffect`` diagnostics instead;
    the entry routine is always inferred.  ``conservative`` leaves the
    program untouched.
    """
    if mode == CONSERVATIVE:
        return dataclasses.replace(program, effects=CONSERVATIVE)
    if mode not in (INFER, CHECK):
        raise ValueError(f"unknown effects mode {mode!r}")
    routines = dict(program.routines)
    calls = {name: sorted(set(callees(r.body or ()))) for name, r in routines.items()}
    missing = []
    changed = True
    while changed:
        changed = False
        for name in routines:
            r = routines[name]
            have = {nl.channel for nl in r.nonlocals}
            needed = set()
            for callee in calls[name]:
                if callee in routines:
                    needed.update(nl.channel for nl in routines[callee].nonlocals)
            new = sorted(needed - have)
            if not new:
                continue
            if mode == CHECK and name != program.entry:
                for ch in new:
                    if (name, ch) not in missing:
                        missing.append((name, ch))
                # Record it so callers are checked against the full effect set.
            added = tuple(A.NonlocalDecl(ch, True, "inferred") for ch in new)
            routines[name] = dataclasses.replace(r, nonlocals=r.nonlocals + added)
            changed = True
    if missing:
        raise CheckFailed([Diagnostic("UndeclaredEffect",
                                      f"{name} reaches channel {ch!r} without declaring it",
                                      *routines[name].pos, name)
                           for name, ch in missing])
    return dataclasses.replace(program, routines=routines, effects=mode)
