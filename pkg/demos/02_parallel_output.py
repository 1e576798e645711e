"""Two string printers that may run side by side, yet output stays ordered.

``puts`` only forwards the output channel to its children, so both ``puts``
tasks are ready at once.  Each ``putc`` still waits for every earlier writer.
"""

import tsia

program = tsia.load(tsia.corpus_source("puts_del"))

for seed in range(4):
    result = tsia.run_parallel(program, workers=2, seed=seed)
    print(f"seed {seed}: printed {result.stdout!r} in {result.ticks} ticks")

result = tsia.run_parallel(program, workers=2, seed=7)
print("\nevent log for seed 7:")
for line in result.events:
    print("   ", line)
