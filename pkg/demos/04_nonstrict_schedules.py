"""Enumerate every legal execution order and confirm they agree.

In the first program ``b`` only forwards ``q`` (a ``del`` item), so it may run
before ``a`` has produced ``q``.  Exactly two orders exist.
"""

import tsia

for name in ("forward", "plusmult", "puts_del", "fact"):
    found = tsia.enumerate_schedules(tsia.load(tsia.corpus_source(name)))
    (finals, channels), = found.summaries
    print(f"{name:9} schedules={found.schedules:5}  states={found.states:6}  "
          f"finals={dict(finals)}  output={dict(channels)}")
