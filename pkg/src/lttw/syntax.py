"""Core term and kind syntax with capture-avoiding substitution.

Terms are lambda-terms over named variables and declared constants; kinds are
the dependent products over them, with Type/Prop at the top and El/Prf
injecting terms back into the kind layer. Binding is Church-style: every
abstraction and product carries its domain kind.

Alpha-equivalent terms are interchangeable everywhere; structural identity of
Python objects is never significant. Nodes compare by identity (use alpha_eq),
and free-variable sets are cached on the node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union


class Term:
    __slots__ = ()


class Kind:
    __slots__ = ()


Expr = Union[Term, Kind]


@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=False)
class Const(Term):
    name: str

    def __repr__(self):
        return f"Const({self.name!r})"


@dataclass(frozen=True, eq=False)
class Lam(Term):
    var: str
    ann: "Kind"
    body: Term

    def __repr__(self):
        return f"Lam({self.var!r}, {self.ann!r}, {self.body!r})"


@dataclass(frozen=True, eq=False)
class App(Term):
    fn: Term
    arg: Term

    def __repr__(self):
        return f"App({self.fn!r}, {self.arg!r})"


@dataclass(frozen=True, eq=False)
class Meta(Term):
    """Elaboration-time unknown. Never survives into kernel checking."""

    ident: int

    def __repr__(self):
        return f"Meta({self.ident})"


@dataclass(frozen=True, eq=False)
class TypeKind(Kind):
    def __repr__(self):
        return "TypeKind()"


@dataclass(frozen=True, eq=False)
class PropKind(Kind):
    def __repr__(self):
        return "PropKind()"


@dataclass(frozen=True, eq=False)
class ElKind(Kind):
    body: Term

    def __repr__(self):
        return f"ElKind({self.body!r})"


@dataclass(frozen=True, eq=False)
class PrfKind(Kind):
    body: Term

    def __repr__(self):
        return f"PrfKind({self.body!r})"


@dataclass(frozen=True, eq=False)
class PiKind(Kind):
    var: str
    domain: "Kind"
    codomain: "Kind"

    def __repr__(self):
        return f"PiKind({self.var!r}, {self.domain!r}, {self.codomain!r})"


TYPE = TypeKind()
PROP = PropKind()


def app(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split nested applications into (head, [arg1, ..., argn])."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def free_vars(e: Expr) -> frozenset[str]:
    """Free variable names of a term or kind (cached per node)."""
    cached = getattr(e, "_fv", None)
    if cached is not None:
        return cached
    fv: frozenset[str]
    if isinstance(e, Var):
        fv = frozenset((e.name,))
    elif isinstance(e, (Const, Meta, TypeKind, PropKind)):
        fv = frozenset()
    elif isinstance(e, App):
        fv = free_vars(e.fn) | free_vars(e.arg)
    elif isinstance(e, Lam):
        fv = free_vars(e.ann) | (free_vars(e.body) - {e.var})
    elif isinstance(e, (ElKind, PrfKind)):
        fv = free_vars(e.body)
    elif isinstance(e, PiKind):
        fv = free_vars(e.domain) | (free_vars(e.codomain) - {e.var})
    else:
        raise TypeError(f"not a term or kind: {e!r}")
    object.__setattr__(e, "_fv", fv)
    return fv


_DIGITS = "0123456789"


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """A name not in avoid, formed from base plus a minimal numeric suffix.

    The digit tail of base is stripped first so renaming y1 yields y2, not
    y11. Deterministic: same inputs, same answer.
    """
    taken = set(avoid)
    if base not in taken:
        return base
    stem = base.rstrip(_DIGITS) or base
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def subst(target: Expr, var: str, replacement: Term) -> Expr:
    """Capture-avoiding substitution of replacement for free var in target."""
    if isinstance(target, Var):
        return replacement if target.name == var else target
    if isinstance(target, (Const, Meta, TypeKind, PropKind)):
        return target
    if isinstance(target, App):
        if var not in free_vars(target):
            return target
        return App(subst(target.fn, var, replacement),
                   subst(target.arg, var, replacement))
    if isinstance(target, ElKind):
        if var not in free_vars(target):
            return target
        return ElKind(subst(target.body, var, replacement))
    if isinstance(target, PrfKind):
        if var not in free_vars(target):
            return target
        return PrfKind(subst(target.body, var, replacement))
    if isinstance(target, Lam):
        if var not in free_vars(target):
            return target
        ann = subst(target.ann, var, replacement)
        x, body = _subst_under_binder(target.var, target.body, var, replacement)
        return target if (ann is target.ann and body is target.body
                          and x == target.var) else Lam(x, ann, body)
    if isinstance(target, PiKind):
        if var not in free_vars(target):
            return target
        dom = subst(target.domain, var, replacement)
        x, cod = _subst_under_binder(target.var, target.codomain, var,
                                     replacement)
        return target if (dom is target.domain and cod is target.codomain
                          and x == target.var) else PiKind(x, dom, cod)
    raise TypeError(f"not a term or kind: {target!r}")


def _subst_under_binder(x: str, body: Expr, var: str, replacement: Term):
    if x == var or var not in free_vars(body):
        return x, body
    if x in free_vars(replacement):
        # binder would capture; rename it away from everything in sight
        x2 = fresh_name(x, free_vars(body) | free_vars(replacement) | {var})
        body = subst(body, x, Var(x2))
        return x2, subst(body, var, replacement)
    return x, subst(body, var, replacement)


def subst_parallel(target: Expr, mapping: dict[str, Term]) -> Expr:
    """Simultaneous capture-avoiding substitution.

    Unlike iterated subst, names substituted in never get re-substituted:
    firing a rewrite rule whose contractum mentions several pattern variables
    must not let one binding's free names collide with another binding.
    """
    live = {v: t for v, t in mapping.items() if v in free_vars(target)}
    if not live:
        return target
    if isinstance(target, Var):
        return live.get(target.name, target)
    if isinstance(target, App):
        return App(subst_parallel(target.fn, live),
                   subst_parallel(target.arg, live))
    if isinstance(target, ElKind):
        return ElKind(subst_parallel(target.body, live))
    if isinstance(target, PrfKind):
        return PrfKind(subst_parallel(target.body, live))
    if isinstance(target, Lam):
        ann = subst_parallel(target.ann, live)
        x, body = _subst_parallel_under(target.var, target.body, live)
        return Lam(x, ann, body)
    if isinstance(target, PiKind):
        dom = subst_parallel(target.domain, live)
        x, cod = _subst_parallel_under(target.var, target.codomain, live)
        return PiKind(x, dom, cod)
    raise TypeError(f"not a term or kind: {target!r}")


def _subst_parallel_under(x: str, body: Expr, mapping: dict[str, Term]):
    live = {v: t for v, t in mapping.items()
            if v != x and v in free_vars(body)}
    if not live:
        return x, body
    incoming = frozenset().union(*(free_vars(t) for t in live.values()))
    if x in incoming:
        x2 = fresh_name(x, free_vars(body) | incoming | set(live))
        body = subst(body, x, Var(x2))
        return x2, subst_parallel(body, live)
    return x, subst_parallel(body, live)


def alpha_eq(a: Expr, b: Expr) -> bool:
    """Equality up to consistent renaming of bound variables."""
    return _aeq(a, b, {}, {}, 0)


def _aeq(a: Expr, b: Expr, ea: dict, eb: dict, depth: int) -> bool:
    if a is b and ea == eb:
        return True
    ta, tb = type(a), type(b)
    if ta is not tb:
        return False
    if ta is Var:
        la, lb = ea.get(a.name), eb.get(b.name)
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if ta is Const:
        return a.name == b.name
    if ta is Meta:
        return a.ident == b.ident
    if ta is App:
        return (_aeq(a.fn, b.fn, ea, eb, depth)
                and _aeq(a.arg, b.arg, ea, eb, depth))
    if ta is Lam:
        if not _aeq(a.ann, b.ann, ea, eb, depth):
            return False
        ea2 = dict(ea)
        eb2 = dict(eb)
        ea2[a.var] = depth
        eb2[b.var] = depth
        return _aeq(a.body, b.body, ea2, eb2, depth + 1)
    if ta is TypeKind or ta is PropKind:
        return True
    if ta is ElKind or ta is PrfKind:
        return _aeq(a.body, b.body, ea, eb, depth)
    if ta is PiKind:
        if not _aeq(a.domain, b.domain, ea, eb, depth):
            return False
        ea2 = dict(ea)
        eb2 = dict(eb)
        ea2[a.var] = depth
        eb2[b.var] = depth
        return _aeq(a.codomain, b.codomain, ea2, eb2, depth + 1)
    raise TypeError(f"not a term or kind: {a!r}")


def contains_meta(e: Expr) -> bool:
    if isinstance(e, Meta):
        return True
    if isinstance(e, (Var, Const, TypeKind, PropKind)):
        return False
    if isinstance(e, App):
        return contains_meta(e.fn) or contains_meta(e.arg)
    if isinstance(e, Lam):
        return contains_meta(e.ann) or contains_meta(e.body)
    if isinstance(e, (ElKind, PrfKind)):
        return contains_meta(e.body)
    if isinstance(e, PiKind):
        return contains_meta(e.domain) or contains_meta(e.codomain)
    raise TypeError(f"not a term or kind: {e!r}")


def metas_of(e: Expr) -> set[int]:
    out: set[int] = set()
    _collect_metas(e, out)
    return out


def _collect_metas(e: Expr, out: set[int]) -> None:
    if isinstance(e, Meta):
        out.add(e.ident)
    elif isinstance(e, App):
        _collect_metas(e.fn, out)
        _collect_metas(e.arg, out)
    elif isinstance(e, Lam):
        _collect_metas(e.ann, out)
        _collect_metas(e.body, out)
    elif isinstance(e, (ElKind, PrfKind)):
        _collect_metas(e.body, out)
    elif isinstance(e, PiKind):
        _collect_metas(e.domain, out)
        _collect_metas(e.codomain, out)
