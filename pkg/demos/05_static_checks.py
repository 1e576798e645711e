"""Programs the checker rejects before anything runs."""

import tsia
from tsia.frontend import diagnose, parse_source
from tsia.frontend.printer import format_signature

for name in ("outalias", "cfact", "delmisuse", "extent"):
    print(f"== {name}")
    print(tsia.corpus_source(name).strip())
    for d in diagnose(parse_source(tsia.corpus_source(name))):
        print("  ->", d)
    print()

# Effect inference: puts never mentions stdout, but its children do.
program = tsia.load(tsia.corpus_source("puts"))
print("inferred:", format_signature(program.routines["puts"], inferred=True))
