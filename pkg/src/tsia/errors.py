"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass


class TsiaError(Exception):
    """Base class for all errors raised by this package."""


class LexError(TsiaError):
    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class ParseError(TsiaError):
    def __init__(self, message, line=0, column=0):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str
    line: int = 0
    column: int = 0
    routine: str = ""

    def __str__(self):
        where = f"{self.line}:{self.column}: " if self.line else ""
        inside = f" (in {self.routine})" if self.routine else ""
        return f"{where}{self.rule}: {self.message}{inside}"


class CheckFailed(TsiaError):
    """Static validation produced one or more diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))

    @property
    def rules(self):
        return [d.rule for d in self.diagnostics]


# Runtime errors.  Each one signals either a corpus bug or a scheduler bug.

class RuntimeFault(TsiaError):
    pass


class UnknownRoutine(RuntimeFault):
    pass


class ModeMismatch(RuntimeFault):
    pass


class ExtentOverflow(RuntimeFault):
    pass


class IndexOutOfExtent(RuntimeFault):
    pass


class ReadOfUnsetSlot(RuntimeFault):
    pass


class ArithmeticOverflow(RuntimeFault):
    pass


class DivisionByZero(RuntimeFault):
    pass


class WriteToUndeclaredRegion(RuntimeFault):
    pass


class Deadlock(RuntimeFault):
    def __init__(self, rendered):
        super().__init__("no task is ready; stuck graph:\n" + rendered)
        self.rendered = rendered


class TaskLimitExceeded(RuntimeFault):
    pass


class StateBudgetExceeded(RuntimeFault):
    pass
