"""TSIA: a small imperative language executed by delegation over a task graph."""

from importlib import resources

from .delegate import builtin, eval_expr, execute_task
from .errors import CheckFailed, Deadlock, Diagnostic, TsiaError
from .frontend import (check_program, diagnose, format_program, load, parse_program,
                       parse_source, propagate_effects, tokenize)
from .graph import (Graph, Region, alloc_item, alpha_equivalent, complete_task, is_ready,
                    regions_conflict, render_graph)
from .graphtext import parse_graph
from .sched import RunResult, enumerate_schedules, run_parallel, run_sequential

__version__ = "0.1.0"


def corpus_source(name):
    """Source text of a bundled example program, e.g. ``corpus_source("fact_main")``."""
    if not name.endswith(".tsia"):
        name += ".tsia"
    return resources.files(__name__).joinpath("corpus", name).read_text(encoding="utf-8")


def corpus_names():
    return sorted(p.name[:-5] for p in resources.files(__name__).joinpath("corpus").iterdir()
                  if p.name.endswith(".tsia"))
