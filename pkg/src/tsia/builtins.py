"""Signatures of the builtin instructions.

Builtins are ordinary routines whose bodies are supplied by the runtime
(see ``delegate.builtin``); nothing in the scheduler treats them specially.
"""

from __future__ import annotations

import dataclasses
from functools import lru_cache

BUILTIN_SIGNATURES = {
    "plus": "plus(int a, int b;; int c);",
    "add": "add(int a, int b;; int c);",
    "mult": "mult(int a, int b;; int c);",
    "putc": "putc(char i;;)(;stdout;);",
    "intprint": "intprint(int i;;)(;stdout;);",
    # 20 characters hold any 64-bit value; the rest of the region is zeroed.
    "int2chars": "int2chars(int i;; char s[0:20]);",
    "fill": "fill(int v;; int y[]);",
}


@lru_cache(maxsize=None)
def builtin_routines():
    from .frontend.parser import parse_signature

    table = {}
    for name, text in BUILTIN_SIGNATURES.items():
        table[name] = dataclasses.replace(parse_signature(text), builtin=True, pos=(0, 0))
    return table
