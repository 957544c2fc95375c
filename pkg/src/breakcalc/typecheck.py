"""Church-style type checking, type erasure, and principal type inference.

The checking context is implicit: the free variables of a term, with their
annotations, form its context.  Two-premise rules demand disjoint used-variable
sets, which is what makes every typable term affine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (
    App, Arrow, Atom, Break, IllFormedTermError, Lam, Let, Pair, Tensor, Term,
    TypeExpr, Var, canonicalize, is_canonical, ks_types,
)

Path = tuple


class TypeCheckError(Exception):
    pass


class TypeMismatch(TypeCheckError):
    def __init__(self, expected, found, path: tuple[int, ...]):
        self.expected = expected
        self.found = found
        self.path = path
        super().__init__(
            f"type mismatch at {list(path)}: expected {expected!r}, found {found!r}")


class AffinityViolation(TypeCheckError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name!r} used more than once")


class UnboundVariable(TypeCheckError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable {name!r}")


class UnificationFailure(TypeCheckError):
    def __init__(self, left: TypeExpr, right: TypeExpr, path: tuple[int, ...]):
        self.left = left
        self.right = right
        self.path = path
        super().__init__(
            f"cannot unify {left!r} with {right!r} at {list(path)}")


class OccursCheck(TypeCheckError):
    def __init__(self, var: str, ty: TypeExpr, path: tuple[int, ...]):
        self.var = var
        self.ty = ty
        self.path = path
        super().__init__(f"occurs check: {var} in {ty!r} at {list(path)}")


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------

def check(t: Term) -> TypeExpr:
    """Unique type of t, or raise.

    Validates annotations against binders, rejects contraction (a name used in
    both premises of a two-premise rule), and rejects a free name occurring at
    two types.
    """
    if not is_canonical(t):
        t = canonicalize(t)
    free_seen: dict[str, TypeExpr] = {}
    ty, _ = _check(t, {}, (), free_seen)
    return ty


def _check(t: Term, env: dict[str, TypeExpr], path: tuple[int, ...],
           free_seen: dict[str, TypeExpr]) -> tuple[TypeExpr, set[str]]:
    match t:
        case Var(name, ty):
            if name in env:
                if env[name] != ty:
                    raise TypeMismatch(env[name], ty, path)
            else:
                seen = free_seen.get(name)
                if seen is not None and seen != ty:
                    raise IllFormedTermError(
                        f"variable {name!r} used at two types")
                free_seen[name] = ty
            return ty, {name}
        case Lam(b, bt, body):
            bty, used = _check(body, env | {b: bt}, path + (0,), free_seen)
            return Arrow(bt, bty), used - {b}
        case App(fun, arg):
            fty, fused = _check(fun, env, path + (0,), free_seen)
            aty, aused = _check(arg, env, path + (1,), free_seen)
            if not isinstance(fty, Arrow):
                raise TypeMismatch("a function type", fty, path + (0,))
            if fty.dom != aty:
                raise TypeMismatch(fty.dom, aty, path + (1,))
            _disjoint(fused, aused)
            return fty.cod, fused | aused
        case Pair(a, b):
            aty, aused = _check(a, env, path + (0,), free_seen)
            bty, bused = _check(b, env, path + (1,), free_seen)
            _disjoint(aused, bused)
            return Tensor(aty, bty), aused | bused
        case Let(x, xt, y, yt, scrut, body):
            sty, sused = _check(scrut, env, path + (0,), free_seen)
            if sty != Tensor(xt, yt):
                raise TypeMismatch(Tensor(xt, yt), sty, path + (0,))
            bty, bused = _check(body, env | {x: xt, y: yt}, path + (1,),
                                free_seen)
            bused -= {x, y}
            _disjoint(sused, bused)
            return bty, sused | bused
        case Break(scrut, phi, f, residue, body):
            sty, sused = _check(scrut, env, path + (0,), free_seen)
            k, s = ks_types(sty, residue)
            bty, bused = _check(body, env | {phi: k, f: s}, path + (1,),
                                free_seen)
            bused -= {phi, f}
            _disjoint(sused, bused)
            return bty, sused | bused
    raise TypeError(f"not a term: {t!r}")


def _disjoint(a: set[str], b: set[str]) -> None:
    shared = a & b
    if shared:
        raise AffinityViolation(min(shared))


# ---------------------------------------------------------------------------
# Untyped terms and erasure
# ---------------------------------------------------------------------------

class UntypedTerm:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class UVar(UntypedTerm):
    name: str


@dataclass(frozen=True, slots=True)
class ULam(UntypedTerm):
    binder: str
    body: UntypedTerm


@dataclass(frozen=True, slots=True)
class UApp(UntypedTerm):
    fun: UntypedTerm
    arg: UntypedTerm


@dataclass(frozen=True, slots=True)
class UPair(UntypedTerm):
    first: UntypedTerm
    second: UntypedTerm


@dataclass(frozen=True, slots=True)
class ULet(UntypedTerm):
    x: str
    y: str
    scrutinee: UntypedTerm
    body: UntypedTerm

    def __post_init__(self) -> None:
        if self.x == self.y:
            raise IllFormedTermError(f"let binds {self.x!r} twice")


@dataclass(frozen=True, slots=True)
class UBreak(UntypedTerm):
    scrutinee: UntypedTerm
    phi: str
    f: str
    body: UntypedTerm

    def __post_init__(self) -> None:
        if self.phi == self.f:
            raise IllFormedTermError(f"break binds {self.phi!r} twice")


def erase(t: Term) -> UntypedTerm:
    """Drop every annotation, keeping the term shape."""
    match t:
        case Var(name, _):
            return UVar(name)
        case Lam(b, _, body):
            return ULam(b, erase(body))
        case App(fun, arg):
            return UApp(erase(fun), erase(arg))
        case Pair(a, b):
            return UPair(erase(a), erase(b))
        case Let(x, _, y, _, scrut, body):
            return ULet(x, y, erase(scrut), erase(body))
        case Break(scrut, phi, f, _, body):
            return UBreak(erase(scrut), phi, f, erase(body))
    raise TypeError(f"not a term: {t!r}")


def untyped_affine_check(u: UntypedTerm) -> bool:
    """Affinity for untyped terms: no name occurs free twice in any subterm."""
    from collections import Counter

    ok = True
    serial = [0]

    def occ(u: UntypedTerm, env: dict[str, str]) -> Counter:
        # env maps names to unique binder ids so shadowing cannot confuse counts
        nonlocal ok
        match u:
            case UVar(name):
                return Counter({env.get(name, name): 1})
            case ULam(b, body):
                serial[0] += 1
                bid = f"\x00{serial[0]}"
                c = occ(body, env | {b: bid})
                c.pop(bid, None)
                return c
            case UApp(fun, arg):
                c = occ(fun, env) + occ(arg, env)
            case UPair(a, b):
                c = occ(a, env) + occ(b, env)
            case ULet(x, y, scrut, body):
                serial[0] += 1
                xid = f"\x00{serial[0]}"
                serial[0] += 1
                yid = f"\x00{serial[0]}"
                cb = occ(body, env | {x: xid, y: yid})
                cb.pop(xid, None)
                cb.pop(yid, None)
                c = occ(scrut, env) + cb
            case UBreak(scrut, phi, f, body):
                serial[0] += 1
                pid = f"\x00{serial[0]}"
                serial[0] += 1
                fid = f"\x00{serial[0]}"
                cb = occ(body, env | {phi: pid, f: fid})
                cb.pop(pid, None)
                cb.pop(fid, None)
                c = occ(scrut, env) + cb
            case _:
                raise TypeError(f"not an untyped term: {u!r}")
        if any(v > 1 for v in c.values()):
            ok = False
        return c

    occ(u, {})
    return ok


# ---------------------------------------------------------------------------
# Principal type inference
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TypeScheme:
    """A most general type: body plus the atoms standing for unification variables."""

    body: TypeExpr
    variables: frozenset[str] = field(default_factory=frozenset)


_SCHEME_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class _Inferencer:
    def __init__(self) -> None:
        self.counter = 0
        self.sub: dict[str, TypeExpr] = {}

    def fresh(self) -> Atom:
        self.counter += 1
        return Atom(f"?{self.counter}")

    def resolve(self, ty: TypeExpr) -> TypeExpr:
        while isinstance(ty, Atom) and ty.name in self.sub:
            ty = self.sub[ty.name]
        return ty

    def deep_resolve(self, ty: TypeExpr) -> TypeExpr:
        ty = self.resolve(ty)
        match ty:
            case Arrow(d, c):
                return Arrow(self.deep_resolve(d), self.deep_resolve(c))
            case Tensor(l, r):
                return Tensor(self.deep_resolve(l), self.deep_resolve(r))
            case _:
                return ty

    def occurs(self, name: str, ty: TypeExpr) -> bool:
        ty = self.resolve(ty)
        match ty:
            case Atom(n):
                return n == name
            case Arrow(d, c):
                return self.occurs(name, d) or self.occurs(name, c)
            case Tensor(l, r):
                return self.occurs(name, l) or self.occurs(name, r)
        return False

    def unify(self, a: TypeExpr, b: TypeExpr, path: tuple[int, ...]) -> None:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, Atom) and a.name.startswith("?"):
            if self.occurs(a.name, b):
                raise OccursCheck(a.name, b, path)
            self.sub[a.name] = b
            return
        if isinstance(b, Atom) and b.name.startswith("?"):
            if self.occurs(b.name, a):
                raise OccursCheck(b.name, a, path)
            self.sub[b.name] = a
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom, path)
            self.unify(a.cod, b.cod, path)
            return
        if isinstance(a, Tensor) and isinstance(b, Tensor):
            self.unify(a.left, b.left, path)
            self.unify(a.right, b.right, path)
            return
        raise UnificationFailure(a, b, path)

    def walk(self, u: UntypedTerm, env: dict[str, TypeExpr],
             free: dict[str, TypeExpr], path: tuple[int, ...]) -> TypeExpr:
        match u:
            case UVar(name):
                if name in env:
                    return env[name]
                return free.setdefault(name, self.fresh())
            case ULam(b, body):
                a = self.fresh()
                r = self.walk(body, env | {b: a}, free, path + (0,))
                return Arrow(a, r)
            case UApp(fun, arg):
                ft = self.walk(fun, env, free, path + (0,))
                at = self.walk(arg, env, free, path + (1,))
                res = self.fresh()
                self.unify(ft, Arrow(at, res), path)
                return res
            case UPair(a, b):
                return Tensor(self.walk(a, env, free, path + (0,)),
                              self.walk(b, env, free, path + (1,)))
            case ULet(x, y, scrut, body):
                st = self.walk(scrut, env, free, path + (0,))
                xa, yb = self.fresh(), self.fresh()
                self.unify(st, Tensor(xa, yb), path + (0,))
                return self.walk(body, env | {x: xa, y: yb}, free, path + (1,))
            case UBreak(scrut, phi, f, body):
                alpha = self.walk(scrut, env, free, path + (0,))
                beta = self.fresh()
                kty = Arrow(Arrow(alpha, beta), beta)
                sty = Arrow(beta, alpha)
                return self.walk(body, env | {phi: kty, f: sty}, free,
                                 path + (1,))
        raise TypeError(f"not an untyped term: {u!r}")


def infer_principal(u: UntypedTerm) -> TypeScheme:
    """Most general type of an affine untyped term via first-order unification.

    A break introduces fresh scrutinee and residue variables a, b with
    phi : (a -> b) -> b and f : b -> a.
    """
    if not untyped_affine_check(u):
        raise AffinityViolation(_first_duplicate(u))
    inf = _Inferencer()
    ty = inf.deep_resolve(inf.walk(u, {}, {}, ()))
    return _canonical_scheme(ty)


def _first_duplicate(u: UntypedTerm) -> str:
    # best-effort name for the error message
    from collections import Counter

    names: Counter = Counter()

    def walk(u: UntypedTerm) -> None:
        match u:
            case UVar(name):
                names[name] += 1
            case ULam(_, body):
                walk(body)
            case UApp(a, b) | UPair(a, b):
                walk(a)
                walk(b)
            case ULet(_, _, s, b) | UBreak(s, _, _, b):
                walk(s)
                walk(b)

    walk(u)
    dups = [n for n, c in names.items() if c > 1]
    return min(dups) if dups else "?"


def _canonical_scheme(ty: TypeExpr) -> TypeScheme:
    """Rename leftover unification variables to a, b, c, ... in occurrence order."""
    mapping: dict[str, Atom] = {}

    def name_for(i: int) -> str:
        if i < len(_SCHEME_LETTERS):
            return _SCHEME_LETTERS[i]
        return f"{_SCHEME_LETTERS[i % 26]}{i // 26}"

    def go(ty: TypeExpr) -> TypeExpr:
        match ty:
            case Atom(n) if n.startswith("?"):
                if n not in mapping:
                    mapping[n] = Atom(name_for(len(mapping)))
                return mapping[n]
            case Arrow(d, c):
                return Arrow(go(d), go(c))
            case Tensor(l, r):
                return Tensor(go(l), go(r))
            case _:
                return ty

    body = go(ty)
    return TypeScheme(body, frozenset(a.name for a in mapping.values()))


def scheme_admits(scheme: TypeScheme, ty: TypeExpr) -> bool:
    """True if ty is a substitution instance of the scheme."""
    binding: dict[str, TypeExpr] = {}

    def match(pat: TypeExpr, ty: TypeExpr) -> bool:
        match pat:
            case Atom(n) if n in scheme.variables:
                if n in binding:
                    return binding[n] == ty
                binding[n] = ty
                return True
            case Atom(n):
                return pat == ty
            case Arrow(d, c):
                return (isinstance(ty, Arrow) and match(d, ty.dom)
                        and match(c, ty.cod))
            case Tensor(l, r):
                return (isinstance(ty, Tensor) and match(l, ty.left)
                        and match(r, ty.right))
        return False

    return match(scheme.body, ty)
