"""Disjoint halves of one array are produced and consumed concurrently."""

import tsia

program = tsia.load(tsia.corpus_source("arrays"))
print(tsia.format_program(program))

result = tsia.run_parallel(program, workers=2, seed=0)
for line in result.events:
    print(line)

h = result.finals["h"]
print(f"\nh has {len(h)} elements; h[0]={h[0]}, h[5000]={h[5000]}, "
      f"h[4999]={h[4999]}, h[9999]={h[9999]}")
