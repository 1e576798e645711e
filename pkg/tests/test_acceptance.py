"""Acceptance suite: one test per criterion, each with its runtime bound.

The terminal summary prints a PASS/FAIL line per criterion.
"""

import math
import time

import pytest

import tsia
from tsia.cli import main
from tsia.graph import alpha_equivalent
from tsia.graphtext import parse_graph
from tsia.sched import enumerate_schedules, run_parallel, run_sequential

POSITIVE = ["add3", "arrays", "fact", "fact_main", "forward", "plusmult", "putint", "puts", "puts_del"]
SEEDS = range(16)
WORKERS = (1, 2, 3, 4)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def exec_ticks(events):
    """Map each executed task text to the tick it ran in."""
    ticks = {}
    for line in events:
        head, sep, task = line.partition(" exec ")
        if sep:
            ticks.setdefault(task, int(head.split()[1]))
    return ticks


@pytest.mark.criterion(1, "golden trace of the factorial program, prints 6, < 1 s")
def test_golden_factorial_trace():
    expected = [
        "main(;;)",
        "fact(1,3;;k)\nintprint(k;;)",
        "fact(1,2;;x)\nfact(3,3;;y)\nmult(x,y;;k)\nintprint(k;;)",
        "fact(1,1;;a)\nfact(2,2;;b)\nmult(a,b;;x)\nfact(3,3;;y)\nmult(x,y;;k)\nintprint(k;;)",
        "mult(1,2;;x)\nfact(3,3;;y)\nmult(x,y;;k)\nintprint(k;;)",
        "mult(2,3;;k)\nintprint(k;;)",
        "intprint(6;;)",
        "",
    ]
    renamed = {3}  # this state is only equal up to item names
    with Timer() as clock:
        program = tsia.load(tsia.corpus_source("fact_main"))
        result = run_sequential(program, "earliest", trace=True, trace_channels=False)
    assert result.stdout == "6"

    routines = program.routines
    matched, pos = [], 0
    for k, state in enumerate(expected):
        want = parse_graph(state, routines)
        while pos < len(result.trace):
            got = result.trace[pos]
            pos += 1
            if alpha_equivalent(parse_graph(got, routines), want, channels=False):
                if k not in renamed:
                    assert got == state
                matched.append(pos - 1)
                break
        else:
            pytest.fail(f"state {k} not reached in order:\n{state}")
    assert matched[0] == 0 and matched[-1] == len(result.trace) - 1
    assert clock.elapsed < 1.0


@pytest.mark.criterion(2, "add3 delegates to two adds and yields 32, < 1 s")
def test_add3_delegation():
    from tsia.delegate import execute_task
    from tsia.graph import complete_task

    with Timer() as clock:
        program = tsia.load(tsia.corpus_source("add3"))
        g = parse_graph("add3(6,9,17;;p)", program.routines)
        t = g.tasks[0]
        complete_task(g, t, execute_task(t, program.routines, g))
        assert alpha_equivalent(g, parse_graph("add(6,9;;r) add(r,17;;p)", program.routines))
        result = run_sequential(program)
    assert result.finals["p"] == 6 + 9 + 17 == 32
    assert result.stdout == "32"
    assert clock.elapsed < 1.0


@pytest.mark.criterion(3, "determinacy across enumeration and 4 workers x 16 seeds, < 30 s")
def test_determinacy_suite():
    with Timer() as clock:
        for name in POSITIVE:
            program = tsia.load(tsia.corpus_source(name))
            reference = run_sequential(program).summary()
            found = enumerate_schedules(program)
            assert found.summaries == {reference}, name
            for workers in WORKERS:
                for seed in SEEDS:
                    got = run_parallel(program, workers, seed).summary()
                    assert got == reference, (name, workers, seed)
        forward = enumerate_schedules(tsia.load(tsia.corpus_source("forward")))
        assert forward.schedules == 2 and len(forward.summaries) == 1
    assert clock.elapsed < 30.0


@pytest.mark.criterion(4, "both puts variants print ABCD; variant 2 runs puts in parallel, < 5 s")
def test_channel_ordering():
    parallel_puts = []
    with Timer() as clock:
        for name in ("puts", "puts_del"):
            program = tsia.load(tsia.corpus_source(name))
            for policy in ("earliest", "latest", "random"):
                for seed in SEEDS:
                    assert run_sequential(program, policy, seed=seed).stdout == "ABCD"
            for workers in WORKERS:
                for seed in SEEDS:
                    result = run_parallel(program, workers, seed)
                    assert result.stdout == "ABCD", (name, workers, seed)
                    if name != "puts_del":
                        continue
                    ticks = exec_ticks(result.events)
                    if ticks.get('puts("AB";;)(;del stdout;)') == \
                            ticks.get('puts("CD";;)(;del stdout;)') is not None:
                        parallel_puts.append((workers, seed))
    assert parallel_puts, "no configuration ran the two puts tasks in the same tick"
    assert clock.elapsed < 5.0


@pytest.mark.criterion(5, "array halves run in the same tick on two workers, < 2 s")
def test_region_parallelism():
    with Timer() as clock:
        program = tsia.load(tsia.corpus_source("arrays"))
        result = run_parallel(program, 2, 0)
    ticks = exec_ticks(result.events)
    assert ticks["b(;;h[0:4999])"] == ticks["c(;;h[5000:9999])"]
    assert ticks["d(;h[0:4999];)"] > ticks["fill(1;;h[0:4999])"] > ticks["b(;;h[0:4999])"]
    assert ticks["d(;h[5000:9999];)"] > ticks["fill(2;;h[5000:9999])"] > \
        ticks["c(;;h[5000:9999])"]
    h = result.finals["h"]
    assert len(h) == 10000 and None not in h
    assert clock.elapsed < 2.0


@pytest.mark.criterion(6, "static rejection with exit code 1 and rule tags")
@pytest.mark.parametrize("name, rule", [("outalias", "OutAlias"), ("cfact", "ChildOutcome"),
                                        ("delmisuse", "DelMisuse"), ("extent", "ExtentOverflow")])
def test_static_rejection(name, rule, tmp_path, capsys):
    path = tmp_path / f"{name}.tsia"
    path.write_text(tsia.corpus_source(name))
    code = main(["check", str(path)])
    assert code == 1
    assert f": {rule}: " in capsys.readouterr().err


@pytest.mark.criterion(7, "fact(b,e) equals the product oracle for 1 <= b <= e <= 10, < 1 s")
def test_fact_oracle():
    program = tsia.load(tsia.corpus_source("fact"))
    cases = [(b, e) for b in range(1, 11) for e in range(b, 11)]
    assert len(cases) == 55
    with Timer() as clock:
        for b, e in cases:
            g = parse_graph(f"fact({b},{e};;f)", program.routines)
            result = run_sequential(program, graph=g)
            assert result.finals["f"] == math.prod(range(b, e + 1)), (b, e)
    assert clock.elapsed < 1.0


@pytest.mark.criterion(8, "runtime invariants hold on every corpus run")
def test_invariants():
    for name in POSITIVE:
        program = tsia.load(tsia.corpus_source(name))
        for policy in ("earliest", "latest", "random"):
            run_sequential(program, policy, seed=1, check_invariants=True)
        for workers in (2, 3):
            run_parallel(program, workers, 5, check_invariants=True)
        enumerate_schedules(program, check_invariants=True)
