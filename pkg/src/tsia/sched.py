"""Schedulers driving a graph to completion.

* :func:`run_sequential` -- one stack, always the smallest-seq (``earliest``),
  largest-seq (``latest``) or a seeded random ready task.
* :func:`run_parallel` -- lock-step simulation of workers that each run their
  own topmost ready task and steal from the bottom of a victim's stack.
* :func:`enumerate_schedules` -- every legal completion order, used to check
  that the observable result is determinate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .delegate import execute_task
from .errors import Deadlock, StateBudgetExceeded, TaskLimitExceeded
from .graph import (Graph, complete_task, is_ready, item_names,
                    render_graph, render_task)

EARLIEST, LATEST, RANDOM = "earliest", "latest", "random"
POLICIES = (EARLIEST, LATEST, RANDOM)
DEFAULT_TASK_LIMIT = 10 ** 6


@dataclass
class RunResult:
    finals: dict = field(default_factory=dict)
    channels: dict = field(default_factory=dict)  # channel -> text
    trace: list = field(default_factory=list)  # rendered snapshots
    steps: int = 0
    steals: list = field(default_factory=list)
    events: list = field(default_factory=list)
    ticks: int = 0

    def summary(self):
        """Hashable observable outcome: final item values and channel logs."""
        return (tuple(sorted(self.finals.items())), tuple(sorted(self.channels.items())))

    @property
    def stdout(self):
        return self.channels.get("stdout", "")

    def trace_text(self):
        return format_trace(self.trace)


def format_trace(snapshots):
    parts = []
    for n, snap in enumerate(snapshots):
        parts.append(f"--- step {n} ---")
        if snap:
            parts.append(snap)
    return "\n".join(parts) + "\n"


def initial_graph(program):
    """The graph holding only the entry task, e.g. ``main(;;)``."""
    g = Graph(program.effects)
    main = program.main
    g.add_task(main.name, (), [(nl.channel, nl.delegated) for nl in main.nonlocals])
    return g


def _channels(g):
    return {name: "".join(chr(c) for c in log) for name, log in g.channels.items()}


class InvariantViolation(AssertionError):
    pass


class _Monitor:
    """Optional per-step assertions over a run."""

    def __init__(self, enabled):
        self.enabled = enabled
        self.executed = set()
        self.seen = set()

    def start(self, g):
        self.seen.update(t.id for t in g.tasks)

    def before(self, g, t):
        if not self.enabled:
            return None
        ready = {x.id for x in g.tasks if x.id != t.id and is_ready(g, x)}
        return [x.id for x in g.tasks], ready

    def after(self, g, t, outcome, snapshot):
        self.executed.add(t.id)
        if not self.enabled:
            return
        order_before, ready_before = snapshot
        ids = [x.id for x in g.tasks]
        children = [x.id for x in g.tasks if x.id not in order_before]
        pos = order_before.index(t.id)
        expected = order_before[:pos] + children + order_before[pos + 1:]
        if ids != expected:
            raise InvariantViolation("children did not take exactly their parent's position")
        seqs = [x.seq for x in g.tasks]
        if any(a >= b for a, b in zip(seqs, seqs[1:])):
            raise InvariantViolation("program order is not strictly increasing")
        for c in children:
            if c in self.seen or c in self.executed:
                raise InvariantViolation(f"task id {c} reused")
        self.seen.update(children)
        if self.executed & set(ids):
            raise InvariantViolation("an executed task is still live")
        for x in g.tasks:
            for b in x.bindings:
                if b.region is not None and b.region.root not in g.items:
                    raise InvariantViolation(f"{x.name} references a collected item")
        for tid in ready_before:
            if not is_ready(g, g.task(tid)):
                raise InvariantViolation(f"completing {t.name} un-readied task {tid}")


def _complete(g, t, routines, monitor, purity=False):
    snapshot = monitor.before(g, t)
    outcome = execute_task(t, routines, g)
    if purity and execute_task(t, routines, g) != outcome:
        raise InvariantViolation(f"re-executing {t.name} gave a different outcome")
    complete_task(g, t, outcome)
    monitor.after(g, t, outcome, snapshot)
    return outcome


def _pick(ready, policy, seed, step):
    if policy == EARLIEST:
        return ready[0]
    if policy == LATEST:
        return ready[-1]
    if policy == RANDOM:
        return random.Random(f"{seed}:{step}").choice(ready)
    raise ValueError(f"unknown policy {policy!r}")


def run_sequential(program, policy=EARLIEST, trace=False, *, seed=0, graph=None,
                   task_limit=DEFAULT_TASK_LIMIT, check_invariants=False,
                   trace_channels=True):
    """Execute ``program`` on a single stack until the graph is empty."""
    g = graph if graph is not None else initial_graph(program)
    routines = program.routines
    monitor = _Monitor(check_invariants)
    monitor.start(g)
    result = RunResult()
    if trace:
        result.trace.append(render_graph(g, trace_channels))
    while g.tasks:
        if len(g.tasks) > task_limit:
            raise TaskLimitExceeded(f"{len(g.tasks)} live tasks exceed the limit {task_limit}")
        ready = [t for t in g.tasks if is_ready(g, t)]
        if not ready:
            raise Deadlock(render_graph(g))
        t = _pick(ready, policy, seed, result.steps)
        _complete(g, t, routines, monitor, purity=check_invariants)
        result.steps += 1
        if trace:
            result.trace.append(render_graph(g, trace_channels))
    result.finals = dict(g.finals)
    result.channels = _channels(g)
    return result


def run_parallel(program, workers=2, seed=0, trace=False, *, graph=None,
                 task_limit=DEFAULT_TASK_LIMIT, check_invariants=False, trace_channels=True):
    """Deterministic lock-step simulation of ``workers`` work-stealing workers.

    Each tick, workers act in id order against the graph as it stood at the
    start of the tick.  A worker runs its smallest-seq ready task; a worker
    with none probes one victim, chosen from a generator seeded by
    ``(seed, tick, worker)``, and steals the victim's largest-seq ready task.
    Completions are then applied one at a time in worker-id order and the
    children stay with the worker that ran their parent.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    g = graph if graph is not None else initial_graph(program)
    routines = program.routines
    monitor = _Monitor(check_invariants)
    monitor.start(g)
    owner = {t.id: 0 for t in g.tasks}
    result = RunResult()
    if trace:
        result.trace.append(render_graph(g, trace_channels))
    tick = 0
    while g.tasks:
        if len(g.tasks) > task_limit:
            raise TaskLimitExceeded(f"{len(g.tasks)} live tasks exceed the limit {task_limit}")
        ready = {t.id for t in g.tasks if is_ready(g, t)}
        names = item_names(g)
        claimed = {}  # task id -> worker
        for w in range(workers):
            mine = [t for t in g.tasks if owner[t.id] == w and t.id not in claimed]
            runnable = [t for t in mine if t.id in ready]
            if runnable:
                t = runnable[0]
                claimed[t.id] = w
                result.events.append(f"tick {tick} worker {w} exec {render_task(g, t, names)}")
                continue
            victims = sorted({owner[t.id] for t in g.tasks
                              if t.id not in claimed and owner[t.id] != w})
            if not victims:
                continue
            v = random.Random(f"{seed}:{tick}:{w}").choice(victims)
            stack = [t for t in g.tasks if owner[t.id] == v and t.id not in claimed]
            for t in reversed(stack):
                if t.id in ready:
                    if check_invariants and any(x.id in ready and x.seq > t.seq for x in stack):
                        raise InvariantViolation("steal did not take the bottom-most ready task")
                    owner[t.id] = w
                    claimed[t.id] = w
                    text = render_task(g, t, names)
                    line = f"tick {tick} worker {w} steal {text} from {v}"
                    result.steals.append(line)
                    result.events.append(line)
                    result.events.append(f"tick {tick} worker {w} exec {text}")
                    break
        if not claimed:
            raise Deadlock(render_graph(g))
        for tid, w in sorted(claimed.items(), key=lambda kv: kv[1]):
            t = g.task(tid)
            if check_invariants and not is_ready(g, t):
                raise InvariantViolation(f"{t.name} stopped being ready within tick {tick}")
            before = {x.id for x in g.tasks}
            _complete(g, t, routines, monitor, purity=check_invariants)
            del owner[tid]
            for x in g.tasks:
                if x.id not in before:
                    owner[x.id] = w
            result.steps += 1
            if trace:
                result.trace.append(render_graph(g, trace_channels))
        tick += 1
    result.ticks = tick
    result.finals = dict(g.finals)
    result.channels = _channels(g)
    return result


@dataclass
class Enumeration:
    schedules: int
    summaries: set
    states: int

    @property
    def determinate(self):
        return len(self.summaries) == 1


def enumerate_schedules(program, max_states=10 ** 6, *, graph=None, check_invariants=True):
    """Explore every legal completion order depth-first.

    Returns the number of complete schedules and the set of distinct
    observable summaries (final item values, channel logs).
    """
    g0 = graph if graph is not None else initial_graph(program)
    routines = program.routines
    summaries = set()
    schedules = 0
    states = 0
    stack = [(g0, frozenset())]
    while stack:
        g, must_stay_ready = stack.pop()
        states += 1
        if states > max_states:
            raise StateBudgetExceeded(f"more than {max_states} states explored")
        ready = [t for t in g.tasks if is_ready(g, t)]
        if check_invariants:
            ready_ids = {t.id for t in ready}
            if not must_stay_ready <= ready_ids:
                raise InvariantViolation("a completion un-readied another ready task")
        if not g.tasks:
            schedules += 1
            summaries.add((tuple(sorted(g.finals.items())), tuple(sorted(_channels(g).items()))))
            continue
        if not ready:
            raise Deadlock(render_graph(g))
        for t in reversed(ready):
            child = g.clone()
            outcome = execute_task(t, routines, child)
            complete_task(child, t, outcome)
            stack.append((child, frozenset(x.id for x in ready if x.id != t.id)))
    return Enumeration(schedules, summaries, states)
