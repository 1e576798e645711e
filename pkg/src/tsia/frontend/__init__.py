from .ast import Program, RoutineDef, ParamDecl, NonlocalDecl
from .checker import check_program, diagnose
from .effects import propagate_effects
from .lexer import Token, tokenize
from .parser import parse_program, parse_source
from .printer import format_program


def load(source, effects="infer"):
    """Parse, validate and effect-propagate TSIA source in one step."""
    program = parse_source(source)
    check_program(program)
    return propagate_effects(program, effects)
