"""Pretty-printers producing minimal-parenthesis text the parser accepts.

Free variable occurrences are printed with their type ascription ``(x : A)``
so the output is self-contained; bound occurrences are bare.
"""

from __future__ import annotations

from .syntax import (
    App, Arrow, Atom, Break, Lam, Let, Pair, Tensor, Term, TypeExpr, Var,
)
from .lambda_pair import LApp, LLam, LPair, LProj0, LProj1, LTerm, LVar

# precedence contexts
_TOP = 0      # no parens needed
_ARG_L = 1    # left of an infix / function position
_ARG_R = 2    # argument position (tightest)


def print_type(ty: TypeExpr) -> str:
    return _ptype(ty, _TOP)


def _ptype(ty: TypeExpr, ctx: int) -> str:
    match ty:
        case Atom(name):
            return name
        case Arrow(dom, cod):
            s = f"{_ptype(dom, _ARG_L)} -> {_ptype(cod, _TOP)}"
            return f"({s})" if ctx >= _ARG_L else s
        case Tensor(left, right):
            s = f"{_ptype(left, _ARG_L)} * {_ptype(right, _ARG_R)}"
            return f"({s})" if ctx >= _ARG_R else s
    raise TypeError(f"not a type: {ty!r}")


def print_term(t: Term) -> str:
    return _pterm(t, _TOP, frozenset())


def _scrutinee_str(t: Term, bound: frozenset[str]) -> str:
    # let/break/lambda scrutinees reparse fine unparenthesized, but parens
    # keep the binding structure readable
    s = _pterm(t, _TOP, bound)
    return f"({s})" if isinstance(t, (Lam, Let, Break)) else s


def _pterm(t: Term, ctx: int, bound: frozenset[str]) -> str:
    match t:
        case Var(name, ty):
            return name if name in bound else f"({name} : {print_type(ty)})"
        case Lam(b, bt, body):
            s = f"\\{b}:{print_type(bt)}. {_pterm(body, _TOP, bound | {b})}"
            return f"({s})" if ctx > _TOP else s
        case App(fun, arg):
            s = f"{_pterm(fun, _ARG_L, bound)} {_pterm(arg, _ARG_R, bound)}"
            return f"({s})" if ctx >= _ARG_R else s
        case Pair(first, second):
            return f"<{_pterm(first, _TOP, bound)}, {_pterm(second, _TOP, bound)}>"
        case Let(x, xt, y, yt, scrut, body):
            s = (f"let <{x}:{print_type(xt)}, {y}:{print_type(yt)}> = "
                 f"{_scrutinee_str(scrut, bound)} in "
                 f"{_pterm(body, _TOP, bound | {x, y})}")
            return f"({s})" if ctx > _TOP else s
        case Break(scrut, phi, f, residue, body):
            s = (f"break {_scrutinee_str(scrut, bound)} as <{phi}, {f}> @ "
                 f"{print_type(residue)} in "
                 f"{_pterm(body, _TOP, bound | {phi, f})}")
            return f"({s})" if ctx > _TOP else s
    raise TypeError(f"not a term: {t!r}")


def print_lterm(e: LTerm) -> str:
    """Display form for lambda-with-pairing terms; projections print as p0/p1."""
    return _plterm(e, _TOP)


def _plterm(e: LTerm, ctx: int) -> str:
    match e:
        case LVar(name):
            return name
        case LLam(b, bt, body):
            s = f"\\{b}:{print_type(bt)}. {_plterm(body, _TOP)}"
            return f"({s})" if ctx > _TOP else s
        case LApp(fun, arg):
            s = f"{_plterm(fun, _ARG_L)} {_plterm(arg, _ARG_R)}"
            return f"({s})" if ctx >= _ARG_R else s
        case LPair(first, second):
            return f"<{_plterm(first, _TOP)}, {_plterm(second, _TOP)}>"
        case LProj0(arg):
            return f"p0({_plterm(arg, _TOP)})"
        case LProj1(arg):
            return f"p1({_plterm(arg, _TOP)})"
    raise TypeError(f"not a lambda-pair term: {e!r}")
