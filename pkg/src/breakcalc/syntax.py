"""Abstract syntax for the break calculus: types, terms, and basic term operations.

Terms are Church style: every variable occurrence carries its type, binders are
annotated, and a break node stores its residue type.  All values are immutable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass


class IllFormedTermError(Exception):
    """Raised when a term is structurally broken (e.g. one name used at two types)."""


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

class TypeExpr:
    """Base class for type expressions."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Atom(TypeExpr):
    """A type variable."""

    name: str


@dataclass(frozen=True, slots=True)
class Arrow(TypeExpr):
    """Function type ``dom -> cod``."""

    dom: TypeExpr
    cod: TypeExpr


@dataclass(frozen=True, slots=True)
class Tensor(TypeExpr):
    """Pair type ``left * right``."""

    left: TypeExpr
    right: TypeExpr


def ks_types(scrutinee: TypeExpr, residue: TypeExpr) -> tuple[TypeExpr, TypeExpr]:
    """Types of the two functions a break binds over a value of type `scrutinee`.

    For scrutinee type A and residue B, returns ((A -> B) -> B, B -> A): a
    continuation-like higher-order function and a section back into A.
    """
    k = Arrow(Arrow(scrutinee, residue), residue)
    s = Arrow(residue, scrutinee)
    return k, s


def type_size(ty: TypeExpr) -> int:
    """Number of nodes in a type tree."""
    match ty:
        case Atom():
            return 1
        case Arrow(dom, cod):
            return 1 + type_size(dom) + type_size(cod)
        case Tensor(left, right):
            return 1 + type_size(left) + type_size(right)
    raise TypeError(f"not a type: {ty!r}")


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

class Term:
    """Base class for terms."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    type: TypeExpr


@dataclass(frozen=True, slots=True)
class Lam(Term):
    binder: str
    binder_type: TypeExpr
    body: Term


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Pair(Term):
    first: Term
    second: Term


@dataclass(frozen=True, slots=True)
class Let(Term):
    """``let <x, y> = scrutinee in body`` destructuring a pair."""

    x: str
    x_type: TypeExpr
    y: str
    y_type: TypeExpr
    scrutinee: Term
    body: Term

    def __post_init__(self) -> None:
        if self.x == self.y:
            raise IllFormedTermError(f"let binds {self.x!r} twice")


@dataclass(frozen=True, slots=True)
class Break(Term):
    """``break scrutinee as <phi, f> @ residue in body``.

    Only the residue type is stored; the types of phi and f are derived from it
    and the scrutinee's type via ks_types.
    """

    scrutinee: Term
    phi: str
    f: str
    residue: TypeExpr
    body: Term

    def __post_init__(self) -> None:
        if self.phi == self.f:
            raise IllFormedTermError(f"break binds {self.phi!r} twice")


#: Finite map from variable name to its type.
TypedVarSet = dict


# ---------------------------------------------------------------------------
# Tree navigation
# ---------------------------------------------------------------------------

def children(t: Term) -> tuple[Term, ...]:
    """Subterm children in left-to-right source order."""
    match t:
        case Var():
            return ()
        case Lam(_, _, body):
            return (body,)
        case App(fun, arg):
            return (fun, arg)
        case Pair(first, second):
            return (first, second)
        case Let(_, _, _, _, scrutinee, body):
            return (scrutinee, body)
        case Break(scrutinee, _, _, _, body):
            return (scrutinee, body)
    raise TypeError(f"not a term: {t!r}")


def subterm_at(t: Term, path: tuple[int, ...]) -> Term:
    for i in path:
        kids = children(t)
        if i >= len(kids):
            raise IndexError(f"no child {i} at {t!r}")
        t = kids[i]
    return t


def replace_at(t: Term, path: tuple[int, ...], new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match t, i:
        case Lam(b, bt, body), 0:
            return Lam(b, bt, replace_at(body, rest, new))
        case App(fun, arg), 0:
            return App(replace_at(fun, rest, new), arg)
        case App(fun, arg), 1:
            return App(fun, replace_at(arg, rest, new))
        case Pair(a, b), 0:
            return Pair(replace_at(a, rest, new), b)
        case Pair(a, b), 1:
            return Pair(a, replace_at(b, rest, new))
        case Let(x, xt, y, yt, s, body), 0:
            return Let(x, xt, y, yt, replace_at(s, rest, new), body)
        case Let(x, xt, y, yt, s, body), 1:
            return Let(x, xt, y, yt, s, replace_at(body, rest, new))
        case Break(s, phi, f, res, body), 0:
            return Break(replace_at(s, rest, new), phi, f, res, body)
        case Break(s, phi, f, res, body), 1:
            return Break(s, phi, f, res, replace_at(body, rest, new))
    raise IndexError(f"no child {i} at {t!r}")


def positions(t: Term) -> list[tuple[int, ...]]:
    """All node positions in preorder."""
    out: list[tuple[int, ...]] = []

    def walk(t: Term, path: tuple[int, ...]) -> None:
        out.append(path)
        for i, c in enumerate(children(t)):
            walk(c, path + (i,))

    walk(t, ())
    return out


# ---------------------------------------------------------------------------
# Free variables and sizes
# ---------------------------------------------------------------------------

def free_names(t: Term) -> set[str]:
    """Names occurring free in t (no type information)."""
    match t:
        case Var(name, _):
            return {name}
        case Lam(b, _, body):
            return free_names(body) - {b}
        case App(fun, arg):
            return free_names(fun) | free_names(arg)
        case Pair(a, b):
            return free_names(a) | free_names(b)
        case Let(x, _, y, _, s, body):
            return (free_names(body) - {x, y}) | free_names(s)
        case Break(s, phi, f, _, body):
            return (free_names(body) - {phi, f}) | free_names(s)
    raise TypeError(f"not a term: {t!r}")


def free_vars(t: Term) -> TypedVarSet:
    """Free variables of t with their types.

    Raises IllFormedTermError if one name occurs free at two different types.
    """
    out: dict[str, TypeExpr] = {}

    def walk(t: Term, bound: frozenset[str]) -> None:
        match t:
            case Var(name, ty):
                if name in bound:
                    return
                if name in out and out[name] != ty:
                    raise IllFormedTermError(
                        f"variable {name!r} used at two types")
                out[name] = ty
            case Lam(b, _, body):
                walk(body, bound | {b})
            case App(fun, arg):
                walk(fun, bound)
                walk(arg, bound)
            case Pair(a, b):
                walk(a, bound)
                walk(b, bound)
            case Let(x, _, y, _, s, body):
                walk(s, bound)
                walk(body, bound | {x, y})
            case Break(s, phi, f, _, body):
                walk(s, bound)
                walk(body, bound | {phi, f})
            case _:
                raise TypeError(f"not a term: {t!r}")

    walk(t, frozenset())
    return out


def term_size(t: Term) -> int:
    """Number of term nodes."""
    return 1 + sum(term_size(c) for c in children(t))


def all_names(t: Term) -> set[str]:
    """Every name appearing in t, bound or free."""
    out: set[str] = set()

    def walk(t: Term) -> None:
        match t:
            case Var(name, _):
                out.add(name)
            case Lam(b, _, body):
                out.add(b)
                walk(body)
            case Let(x, _, y, _, s, body):
                out.update((x, y))
                walk(s)
                walk(body)
            case Break(s, phi, f, _, body):
                out.update((phi, f))
                walk(s)
                walk(body)
            case _:
                for c in children(t):
                    walk(c)

    walk(t)
    return out


def fresh_name(base: str, avoid: set[str]) -> str:
    """Smallest prime-decorated variant of base not in avoid."""
    name = base
    while name in avoid:
        name += "'"
    return name


# ---------------------------------------------------------------------------
# Renaming, substitution, alpha equivalence
# ---------------------------------------------------------------------------

def _rename_free(t: Term, ren: dict[str, str]) -> Term:
    """Rename free occurrences of variables; each occurrence keeps its own type."""
    if not ren:
        return t
    match t:
        case Var(name, ty):
            return Var(ren[name], ty) if name in ren else t
        case Lam(b, bt, body):
            inner = {k: v for k, v in ren.items() if k != b}
            return Lam(b, bt, _rename_free(body, inner))
        case App(fun, arg):
            return App(_rename_free(fun, ren), _rename_free(arg, ren))
        case Pair(a, b):
            return Pair(_rename_free(a, ren), _rename_free(b, ren))
        case Let(x, xt, y, yt, s, body):
            inner = {k: v for k, v in ren.items() if k not in (x, y)}
            return Let(x, xt, y, yt, _rename_free(s, ren),
                       _rename_free(body, inner))
        case Break(s, phi, f, res, body):
            inner = {k: v for k, v in ren.items() if k not in (phi, f)}
            return Break(_rename_free(s, ren), phi, f, res,
                         _rename_free(body, inner))
    raise TypeError(f"not a term: {t!r}")


def _freshen_binders(names: tuple[str, ...], body_parts: tuple[Term, ...],
                     avoid: set[str]) -> tuple[tuple[str, ...], tuple[Term, ...]]:
    """Rename the given binders away from avoid, rewriting the bodies."""
    ren: dict[str, str] = {}
    taken = set(avoid)
    new_names = []
    for n in names:
        if n in taken:
            n2 = fresh_name(n, taken | set(names) | set(ren.values()))
            ren[n] = n2
            new_names.append(n2)
            taken.add(n2)
        else:
            new_names.append(n)
            taken.add(n)
    if ren:
        body_parts = tuple(_rename_free(p, ren) for p in body_parts)
    return tuple(new_names), body_parts


def substitute(t: Term, bindings) -> Term:
    """Simultaneous capture-avoiding substitution.

    `bindings` is a list of (name, term) pairs or an equivalent dict; bound
    variables of t are renamed whenever they would capture a free variable of
    a substituted term.
    """
    sub = dict(bindings)

    def go(t: Term, sub: dict[str, Term]) -> Term:
        if not sub:
            return t
        match t:
            case Var(name, _):
                return sub.get(name, t)
            case Lam(b, bt, body):
                inner = {k: v for k, v in sub.items()
                         if k != b and k in free_names(body)}
                if not inner:
                    return Lam(b, bt, body)
                value_fns = set().union(*(free_names(v) for v in inner.values()))
                if b in value_fns:
                    (b,), (body,) = _freshen_binders(
                        (b,), (body,), value_fns | free_names(body) | set(inner))
                return Lam(b, bt, go(body, inner))
            case App(fun, arg):
                return App(go(fun, sub), go(arg, sub))
            case Pair(a, b):
                return Pair(go(a, sub), go(b, sub))
            case Let(x, xt, y, yt, s, body):
                s2 = go(s, sub)
                inner = {k: v for k, v in sub.items()
                         if k not in (x, y) and k in free_names(body)}
                if inner:
                    value_fns = set().union(*(free_names(v) for v in inner.values()))
                    if x in value_fns or y in value_fns:
                        (x, y), (body,) = _freshen_binders(
                            (x, y), (body,),
                            value_fns | free_names(body) | set(inner))
                    body = go(body, inner)
                return Let(x, xt, y, yt, s2, body)
            case Break(s, phi, f, res, body):
                s2 = go(s, sub)
                inner = {k: v for k, v in sub.items()
                         if k not in (phi, f) and k in free_names(body)}
                if inner:
                    value_fns = set().union(*(free_names(v) for v in inner.values()))
                    if phi in value_fns or f in value_fns:
                        (phi, f), (body,) = _freshen_binders(
                            (phi, f), (body,),
                            value_fns | free_names(body) | set(inner))
                    body = go(body, inner)
                return Break(s2, phi, f, res, body)
        raise TypeError(f"not a term: {t!r}")

    return go(t, sub)


def alpha_eq(t: Term, u: Term) -> bool:
    """Equality up to renaming of bound variables; annotations must match."""

    def go(t: Term, u: Term, mt: dict[str, int], mu: dict[str, int],
           depth: int) -> bool:
        match t, u:
            case Var(n1, ty1), Var(n2, ty2):
                if ty1 != ty2:
                    return False
                b1, b2 = n1 in mt, n2 in mu
                if b1 != b2:
                    return False
                return mt[n1] == mu[n2] if b1 else n1 == n2
            case Lam(b1, ty1, body1), Lam(b2, ty2, body2):
                return ty1 == ty2 and go(body1, body2, mt | {b1: depth},
                                         mu | {b2: depth}, depth + 1)
            case App(f1, a1), App(f2, a2):
                return go(f1, f2, mt, mu, depth) and go(a1, a2, mt, mu, depth)
            case Pair(a1, b1), Pair(a2, b2):
                return go(a1, a2, mt, mu, depth) and go(b1, b2, mt, mu, depth)
            case (Let(x1, xt1, y1, yt1, s1, b1), Let(x2, xt2, y2, yt2, s2, b2)):
                return (xt1 == xt2 and yt1 == yt2
                        and go(s1, s2, mt, mu, depth)
                        and go(b1, b2, mt | {x1: depth, y1: depth + 1},
                               mu | {x2: depth, y2: depth + 1}, depth + 2))
            case (Break(s1, p1, f1, r1, b1), Break(s2, p2, f2, r2, b2)):
                return (r1 == r2 and go(s1, s2, mt, mu, depth)
                        and go(b1, b2, mt | {p1: depth, f1: depth + 1},
                               mu | {p2: depth, f2: depth + 1}, depth + 2))
            case _:
                return False

    return go(t, u, {}, {}, 0)


def alpha_key(t: Term) -> str:
    """Canonical string key identifying t's alpha-equivalence class."""
    parts: list[str] = []

    def ty(x: TypeExpr) -> str:
        match x:
            case Atom(n):
                return n
            case Arrow(d, c):
                return f"({ty(d)}>{ty(c)})"
            case Tensor(l, r):
                return f"({ty(l)}x{ty(r)})"
        raise TypeError

    def walk(t: Term, env: dict[str, int], depth: int) -> None:
        match t:
            case Var(n, vt):
                ref = f"#{env[n]}" if n in env else n
                parts.append(f"v{ref}:{ty(vt)}")
            case Lam(b, bt, body):
                parts.append(f"l:{ty(bt)}(")
                walk(body, env | {b: depth}, depth + 1)
                parts.append(")")
            case App(f, a):
                parts.append("a(")
                walk(f, env, depth)
                parts.append(",")
                walk(a, env, depth)
                parts.append(")")
            case Pair(a, b):
                parts.append("p(")
                walk(a, env, depth)
                parts.append(",")
                walk(b, env, depth)
                parts.append(")")
            case Let(x, xt, y, yt, s, body):
                parts.append(f"L:{ty(xt)}:{ty(yt)}(")
                walk(s, env, depth)
                parts.append(",")
                walk(body, env | {x: depth, y: depth + 1}, depth + 2)
                parts.append(")")
            case Break(s, phi, f, res, body):
                parts.append(f"B:{ty(res)}(")
                walk(s, env, depth)
                parts.append(",")
                walk(body, env | {phi: depth, f: depth + 1}, depth + 2)
                parts.append(")")

    walk(t, {}, 0)
    return "".join(parts)


def canonicalize(t: Term) -> Term:
    """Rename binders so all are distinct from each other and from free names.

    Original names are kept when they do not collide.
    """
    used = set(free_names(t))

    def pick(n: str) -> str:
        n2 = fresh_name(n, used)
        used.add(n2)
        return n2

    def go(t: Term, ren: dict[str, str]) -> Term:
        match t:
            case Var(n, ty):
                return Var(ren.get(n, n), ty)
            case Lam(b, bt, body):
                b2 = pick(b)
                return Lam(b2, bt, go(body, ren | {b: b2}))
            case App(fun, arg):
                return App(go(fun, ren), go(arg, ren))
            case Pair(a, b):
                return Pair(go(a, ren), go(b, ren))
            case Let(x, xt, y, yt, s, body):
                s2 = go(s, ren)
                x2, y2 = pick(x), pick(y)
                return Let(x2, xt, y2, yt, s2, go(body, ren | {x: x2, y: y2}))
            case Break(s, phi, f, res, body):
                s2 = go(s, ren)
                p2, f2 = pick(phi), pick(f)
                return Break(s2, p2, f2, res, go(body, ren | {phi: p2, f: f2}))
        raise TypeError(f"not a term: {t!r}")

    return go(t, {})


def is_canonical(t: Term) -> bool:
    """True if all binders are pairwise distinct and distinct from free names."""
    seen = set(free_names(t))

    def walk(t: Term) -> bool:
        binders: tuple[str, ...] = ()
        match t:
            case Lam(b, _, _):
                binders = (b,)
            case Let(x, _, y, _, _, _):
                binders = (x, y)
            case Break(_, phi, f, _, _):
                binders = (phi, f)
        for b in binders:
            if b in seen:
                return False
            seen.add(b)
        return all(walk(c) for c in children(t))

    return walk(t)


def affine_check(t: Term) -> bool:
    """True iff no variable occurs free more than once in any subterm.

    Weakening (unused binders) is allowed; contraction is not.  The check runs
    on a canonically renamed copy so distinct binders never share names.
    """
    if not is_canonical(t):
        t = canonicalize(t)
    ok = True

    def occ(t: Term) -> Counter:
        nonlocal ok
        match t:
            case Var(n, _):
                return Counter({n: 1})
            case Lam(b, _, body):
                c = occ(body)
                c.pop(b, None)
                return c
            case Let(x, _, y, _, s, body):
                cb = occ(body)
                cb.pop(x, None)
                cb.pop(y, None)
                c = occ(s) + cb
            case Break(s, phi, f, _, body):
                cb = occ(body)
                cb.pop(phi, None)
                cb.pop(f, None)
                c = occ(s) + cb
            case App(fun, arg):
                c = occ(fun) + occ(arg)
            case Pair(a, b):
                c = occ(a) + occ(b)
            case _:
                raise TypeError(f"not a term: {t!r}")
        if any(v > 1 for v in c.values()):
            ok = False
        return c

    occ(t)
    return ok


def annotated_type(t: Term) -> TypeExpr:
    """Type of t read off the annotations, without any validation.

    Raises IllFormedTermError if an applied subterm is not annotated at a
    function type.
    """
    match t:
        case Var(_, ty):
            return ty
        case Lam(_, bt, body):
            return Arrow(bt, annotated_type(body))
        case App(fun, _):
            ft = annotated_type(fun)
            if not isinstance(ft, Arrow):
                raise IllFormedTermError(
                    f"applied term has non-function type {ft!r}")
            return ft.cod
        case Pair(a, b):
            return Tensor(annotated_type(a), annotated_type(b))
        case Let(_, _, _, _, _, body):
            return annotated_type(body)
        case Break(_, _, _, _, body):
            return annotated_type(body)
    raise TypeError(f"not a term: {t!r}")
