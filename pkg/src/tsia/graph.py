"""The executing-application state: items, tasks and their readiness.

A :class:`Graph` holds the live tasks in program order (lexicographic
``seq`` keys), the item store, and the channel write logs.  Scalars are
extent-1 arrays, so one overlap rule covers every dependency.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import WriteToUndeclaredRegion
from .frontend.ast import IN, INOUT, OUT
from .frontend.lexer import quote_char, quote_string

UNSET = object()

INFER, CHECK, CONSERVATIVE = "infer", "check", "conservative"


@dataclass(frozen=True)
class Fresh:
    """Placeholder root for a local allocated by an executing task."""
    index: int


@dataclass(frozen=True)
class Region:
    root: Union[int, Fresh]
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty region [{self.lo}:{self.hi}]")

    def __len__(self):
        return self.hi - self.lo + 1

    def contains(self, other):
        return self.root == other.root and self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other):
        return self.root == other.root and self.lo <= other.hi and other.lo <= self.hi


@dataclass(frozen=True)
class Literal:
    value: object  # scalar, or tuple for arrays


@dataclass(frozen=True)
class Binding:
    mode: str
    delegated: bool
    target: Union[Region, Literal]
    formal: str = ""
    base_type: str = "int"
    array: bool = False

    def __post_init__(self):
        if isinstance(self.target, Literal) and self.mode != IN:
            raise ValueError("literal targets are only allowed for ins")

    @property
    def region(self):
        return self.target if isinstance(self.target, Region) else None

    @property
    def writes(self):
        return self.mode in (INOUT, OUT)


@dataclass(frozen=True)
class Task:
    id: int
    seq: tuple
    name: str
    bindings: tuple = ()
    channels: tuple = ()  # ((channel, delegated), ...)

    def slot(self, mode):
        return tuple(b for b in self.bindings if b.mode == mode)


@dataclass(frozen=True)
class ChildTemplate:
    name: str
    bindings: tuple
    channels: tuple = ()


@dataclass
class Outcome:
    allocations: list = field(default_factory=list)  # (Fresh, base_type, (lo, hi), name)
    writes: list = field(default_factory=list)  # (Region, values tuple)
    channel_writes: list = field(default_factory=list)  # (channel, value)
    children: list = field(default_factory=list)  # ChildTemplate, program order


@dataclass
class RootItem:
    id: int
    name: str
    base_type: str
    lo: int
    hi: int
    slots: list = None
    defined: bytearray = None
    observed: bool = False

    def __post_init__(self):
        if self.slots is None:
            self.slots = [UNSET] * (self.hi - self.lo + 1)
            self.defined = bytearray(self.hi - self.lo + 1)

    @property
    def whole(self):
        return Region(self.id, self.lo, self.hi)

    @property
    def is_scalar(self):
        return self.lo == self.hi

    def copy(self):
        return dataclasses.replace(self, slots=self.slots[:], defined=bytearray(self.defined))

    def is_defined(self, lo, hi):
        return 0 not in self.defined[lo - self.lo:hi - self.lo + 1]

    def read(self, lo, hi):
        return tuple(self.slots[lo - self.lo:hi - self.lo + 1])

    def write(self, lo, values):
        start = lo - self.lo
        self.slots[start:start + len(values)] = values
        self.defined[start:start + len(values)] = b"\x01" * len(values)

    def value(self):
        """Observed value: the scalar itself, or a tuple with None for unset slots."""
        vals = tuple(None if v is UNSET else v for v in self.slots)
        return vals[0] if self.is_scalar else vals


class Graph:
    def __init__(self, effects=INFER):
        self.tasks = []
        self.items = {}
        self.channels = {}
        self.effects = effects
        self.finals = {}
        self.next_item = 0
        self.next_task = 0

    def clone(self):
        g = Graph(self.effects)
        g.tasks = list(self.tasks)
        g.items = {k: v.copy() for k, v in self.items.items()}
        g.channels = {k: list(v) for k, v in self.channels.items()}
        g.finals = dict(self.finals)
        g.next_item = self.next_item
        g.next_task = self.next_task
        return g

    def __len__(self):
        return len(self.tasks)

    def __repr__(self):
        return f"<Graph {len(self.tasks)} tasks, {len(self.items)} items>"

    def index_of(self, task):
        tid = task if isinstance(task, int) else task.id
        for i, t in enumerate(self.tasks):
            if t.id == tid:
                return i
        raise KeyError(f"task {tid} is not live")

    def task(self, tid):
        return self.tasks[self.index_of(tid)]

    def add_task(self, name, bindings=(), channels=(), seq=None):
        if seq is None:
            seq = (self.tasks[-1].seq[0] + 1,) if self.tasks else (1,)
        t = Task(self.next_task, seq, name, tuple(bindings), tuple(channels))
        self.next_task += 1
        self.tasks.append(t)
        self.tasks.sort(key=lambda x: x.seq)
        return t

    def item(self, root):
        return self.items[root]

    def defined(self, region):
        return self.items[region.root].is_defined(region.lo, region.hi)

    def read(self, region):
        return self.items[region.root].read(region.lo, region.hi)

    def write(self, region, values):
        item = self.items[region.root]
        item.write(region.lo, list(values))
        if item.observed:
            self.finals[item.name] = item.value()

    def channel_text(self, name="stdout"):
        return "".join(chr(c) for c in self.channels.get(name, []))


def alloc_item(store, base_type, extent, name, observed=False):
    """Allocate a fresh root item with every slot unset; return its id."""
    lo, hi = extent
    if hi < lo:
        raise ValueError("extent length must be at least 1")
    iid = store.next_item
    store.next_item += 1
    store.items[iid] = RootItem(iid, name, base_type, lo, hi, observed=observed)
    return iid


def regions_conflict(r1, m1, r2, m2):
    """Two accesses conflict when they overlap and at least one writes."""
    if m1 == IN and m2 == IN:
        return False
    return r1.overlaps(r2)


def _prior_conflict(prior, region, mode):
    for p in prior:
        for pb in p.bindings:
            r = pb.region
            if r is not None and regions_conflict(r, pb.mode, region, mode):
                return True
    return False


def is_ready(g, t):
    """True when every strict item of ``t`` is assembled.

    Strict in/inout regions must be fully defined, no earlier task may hold a
    conflicting access to any strict region, and no earlier task may declare
    a channel that ``t`` modifies strictly.  ``del`` items impose no wait on
    ``t`` itself.
    """
    idx = g.index_of(t)
    t = g.tasks[idx]
    prior = g.tasks[:idx]
    for b in t.bindings:
        r = b.region
        if b.delegated or r is None:
            continue
        if b.mode in (IN, INOUT) and not g.defined(r):
            return False
        if _prior_conflict(prior, r, b.mode):
            return False
    for channel, delegated in t.channels:
        if delegated:
            continue
        if g.effects == CONSERVATIVE:
            if prior:
                return False
            continue
        for p in prior:
            if any(ch == channel for ch, _ in p.channels):
                return False
    return True


def ready_tasks(g):
    return [t for t in g.tasks if is_ready(g, t)]


def _within_any(region, allowed):
    return any(a.contains(region) for a in allowed)


def complete_task(g, t, outcome):
    """Apply ``outcome`` of executing ``t`` and replace ``t`` by its children.

    Children take the keys ``t.seq + (1,)``, ``t.seq + (2,)``, ... so they
    occupy exactly the position of their parent.  Afterwards strict ins whose
    values are final are delivered as literals, and items referenced by no
    live task are removed.
    """
    idx = g.index_of(t)
    t = g.tasks[idx]

    fresh = {}
    for ph, base_type, extent, name in outcome.allocations:
        fresh[ph] = alloc_item(g, base_type, extent, name, observed=len(t.seq) == 1)

    def resolve(r):
        if isinstance(r.root, Fresh):
            return Region(fresh[r.root], r.lo, r.hi)
        return r

    local = [g.items[i].whole for i in fresh.values()]
    writable = [b.region for b in t.bindings if b.writes and b.region is not None] + local
    readable = [b.region for b in t.bindings if b.region is not None] + local
    strict_writable = [b.region for b in t.bindings
                       if b.writes and not b.delegated and b.region is not None] + local

    writes = []
    for region, values in outcome.writes:
        region = resolve(region)
        if not _within_any(region, strict_writable):
            raise WriteToUndeclaredRegion(
                f"{t.name} wrote {g.items[region.root].name}[{region.lo}:{region.hi}] "
                f"outside its strict inout/out items")
        if len(values) != len(region):
            raise ValueError("write length does not match its region")
        writes.append((region, values))

    own_channels = {ch for ch, _ in t.channels}
    for channel, _ in outcome.channel_writes:
        if channel not in own_channels:
            raise WriteToUndeclaredRegion(f"{t.name} wrote undeclared channel {channel!r}")

    children = []
    for i, tmpl in enumerate(outcome.children, start=1):
        bindings = []
        for b in tmpl.bindings:
            if b.region is not None:
                r = resolve(b.region)
                allowed = writable if b.writes else readable
                if not _within_any(r, allowed):
                    raise WriteToUndeclaredRegion(
                        f"child {tmpl.name} of {t.name} reaches "
                        f"{g.items[r.root].name}[{r.lo}:{r.hi}] outside its parent's items")
                b = dataclasses.replace(b, target=r)
            bindings.append(b)
        if g.effects != CONSERVATIVE:
            for channel, _ in tmpl.channels:
                if channel not in own_channels:
                    raise WriteToUndeclaredRegion(
                        f"child {tmpl.name} of {t.name} touches undeclared channel {channel!r}")
        children.append(Task(g.next_task, t.seq + (i,), tmpl.name, tuple(bindings),
                             tuple(tmpl.channels)))
        g.next_task += 1

    for region, values in writes:
        g.write(region, values)
    for channel, value in outcome.channel_writes:
        g.channels.setdefault(channel, []).append(value)

    g.tasks[idx:idx + 1] = children
    deliver_values(g)
    collect_garbage(g)
    return g


def deliver_values(g):
    """Replace strict in regions whose value is final by literals."""
    writers = []
    for idx, t in enumerate(g.tasks):
        changed = False
        bindings = list(t.bindings)
        for j, b in enumerate(bindings):
            r = b.region
            if b.mode != IN or b.delegated or r is None or not g.defined(r):
                continue
            if any(w.overlaps(r) for w in writers):
                continue
            vals = g.read(r)
            bindings[j] = dataclasses.replace(b, target=Literal(vals if b.array else vals[0]))
            changed = True
        if changed:
            t = dataclasses.replace(t, bindings=tuple(bindings))
            g.tasks[idx] = t
        writers.extend(b.region for b in t.bindings if b.writes and b.region is not None)


def live_roots(g):
    return {b.target.root for t in g.tasks for b in t.bindings if b.region is not None}


def collect_garbage(g):
    live = live_roots(g)
    for iid in [i for i in g.items if i not in live]:
        del g.items[iid]


# -- rendering --------------------------------------------------------------

def format_literal(value, base_type="int", array=False):
    if isinstance(value, tuple):
        if base_type == "char" and value and value[-1] == 0:
            end = value.index(0)
            if all(c == 0 for c in value[end:]):
                return quote_string(value[:end])
        return "{" + ",".join(format_literal(v, base_type) for v in value) + "}"
    if isinstance(value, bool) or base_type == "boolean":
        return "true" if value else "false"
    if base_type == "char":
        return quote_char(value)
    return str(value)


def item_names(g):
    """Unique display names for live items, assigned in program order."""
    names, taken = {}, set()
    for t in g.tasks:
        for b in t.bindings:
            r = b.region
            if r is None or r.root in names:
                continue
            base = g.items[r.root].name if r.root in g.items else f"?{r.root}"
            name, k = base, 2
            while name in taken:
                name = f"{base}_{k}"
                k += 1
            names[r.root] = name
            taken.add(name)
    return names


def _render_binding(g, b, names, canonical):
    if isinstance(b.target, Literal):
        text = format_literal(b.target.value, b.base_type, b.array)
    else:
        r = b.target
        item = g.items[r.root]
        text = names[r.root]
        if canonical:
            text += f"[{r.lo}:{r.hi}]<{item.base_type}[{item.lo}:{item.hi}]>"
        elif (r.lo, r.hi) != (item.lo, item.hi):
            text += f"[{r.lo}:{r.hi}]"
    return ("del " if b.delegated else "") + text


def render_task(g, t, names=None, channels=True, canonical=False):
    names = names if names is not None else item_names(g)
    slots = (",".join(_render_binding(g, b, names, canonical) for b in t.slot(m))
             for m in (IN, INOUT, OUT))
    text = f"{t.name}({';'.join(slots)})"
    if channels and t.channels:
        text += "(;" + ",".join(("del " if d else "") + ch for ch, d in t.channels) + ";)"
    return text


def render_graph(g, channels=True):
    """One line per live task in program order; empty graph renders as ''."""
    names = item_names(g)
    return "\n".join(render_task(g, t, names, channels) for t in g.tasks)


def canonical_form(g, channels=True):
    names = {}
    for t in g.tasks:
        for b in t.bindings:
            r = b.region
            if r is not None and r.root not in names:
                names[r.root] = f"#{len(names)}"
    return "\n".join(render_task(g, t, names, channels, canonical=True) for t in g.tasks)


def alpha_equivalent(g1, g2, channels=True):
    """True when the graphs differ only in the names of their items."""
    return canonical_form(g1, channels) == canonical_form(g2, channels)
