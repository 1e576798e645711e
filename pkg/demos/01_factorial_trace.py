"""Watch a factorial computation unfold one task at a time.

Each snapshot is the whole state of the program: the ordered list of tasks
still to run.  A task either writes its outputs or replaces itself by child
tasks that produce them on its behalf.
"""

import tsia

program = tsia.load(tsia.corpus_source("fact_main"))
result = tsia.run_sequential(program, trace=True, trace_channels=False)

for step, snapshot in enumerate(result.trace):
    print(f"after {step} step(s):")
    print("    " + (snapshot.replace("\n", "\n    ") if snapshot else "(empty)"))

print("printed:", result.stdout)
