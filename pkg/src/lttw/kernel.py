"""Kernel: reduction, convertibility, kind inference and validity.

Definitional equality is beta + eta (at product kinds) + rewrite rules +
transparent unfolding of definitions, decided by weak-head normalisation and
spine comparison directed by the kind at which two terms are compared.

Every entry point takes a fuel bound shared across all reduction the call
performs; running out raises FuelExhausted rather than looping. Rejections
raise typed errors carrying a Diagnostic with the violated rule's name.
"""

from __future__ import annotations

from typing import Optional, Union

from .errors import (
    Diagnostic, DomainMismatch, DuplicateVariable, FuelExhausted,
    IllFormedKind, IllTyped, KindMismatch, NotAProduct, UnboundVariable,
    UnknownConstant,
)
from .signature import CompiledRule, Definition, Signature
from .syntax import (
    PROP, TYPE, App, Const, ElKind, Kind, Lam, Meta, PiKind, PrfKind,
    PropKind, Term, TypeKind, Var, alpha_eq, app, free_vars, fresh_name,
    spine, subst, subst_parallel,
)

DEFAULT_FUEL = 100000


class Fuel:
    """Shared step budget. One instance flows through a whole judgement."""

    __slots__ = ("limit", "left")

    def __init__(self, limit: int = DEFAULT_FUEL):
        self.limit = limit
        self.left = limit

    def spend(self) -> None:
        if self.left <= 0:
            raise FuelExhausted(
                f"no reduction head-normalised within {self.limit} steps",
                diagnostic=Diagnostic("fuel"))
        self.left -= 1


def _fuel(f: Union[int, Fuel, None]) -> Fuel:
    if isinstance(f, Fuel):
        return f
    return Fuel(DEFAULT_FUEL if f is None else f)


class Context:
    """Ordered variable context. Names are unique; extend raises on shadowing
    (callers freshen binders first)."""

    __slots__ = ("entries", "_map")

    def __init__(self, entries: tuple = (), _map: Optional[dict] = None):
        self.entries = entries
        self._map = _map if _map is not None else dict(entries)

    def extend(self, name: str, kind: Kind) -> "Context":
        if name in self._map:
            raise DuplicateVariable(f"variable {name!r} already in context")
        m = dict(self._map)
        m[name] = kind
        return Context(self.entries + ((name, kind),), m)

    def lookup(self, name: str) -> Optional[Kind]:
        return self._map.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._map

    def names(self) -> set[str]:
        return set(self._map)

    def __len__(self) -> int:
        return len(self.entries)

    def __repr__(self) -> str:
        return "Context(" + ", ".join(n for n, _ in self.entries) + ")"


EMPTY_CONTEXT = Context()


# ------------------------------------------------------------- reduction

def whnf(sig: Signature, t: Term, fuel: Union[int, Fuel, None] = None) -> Term:
    """Weak-head normal form: reduce until the head is a binder with no
    argument, a variable, a metavariable, or a constant no rule fires on.
    Arguments in constructor positions of candidate rules are reduced (the
    result keeps that work); other arguments are untouched."""
    f = _fuel(fuel)
    head, args = spine(t)
    changed = False
    while True:
        if isinstance(head, Lam) and args:
            f.spend()
            head = subst(head.body, head.var, args[0])
            args = args[1:]
            changed = True
            head, args2 = spine(head)
            args = args2 + args
            continue
        if isinstance(head, Const):
            entry = sig.get(head.name)
            if isinstance(entry, Definition):
                f.spend()
                head, args2 = spine(entry.body)
                args = args2 + args
                changed = True
                continue
            rules = sig.rules_for(head.name)
            if rules and len(args) >= rules[0].arity:
                arity = rules[0].arity
                con_positions = sorted({
                    i for r in rules
                    for i, p in enumerate(r.patterns) if p[0] == "con"})
                for i in con_positions:
                    reduced = whnf(sig, args[i], f)
                    if reduced is not args[i]:
                        args = args[:i] + [reduced] + args[i + 1:]
                        changed = True
                fired = False
                for rule in rules:
                    binding = _match(rule, args)
                    if binding is not None:
                        f.spend()
                        contractum = subst_parallel(rule.rhs, binding)
                        head, args2 = spine(contractum)
                        args = args2 + args[arity:]
                        changed = True
                        fired = True
                        break
                if fired:
                    continue
            break
        break
    if not changed:
        return t
    return app(head, *args)


def _match(rule: CompiledRule, args: list) -> Optional[dict]:
    binding: dict[str, Term] = {}
    for pat, arg in zip(rule.patterns, args):
        tag = pat[0]
        if tag == "var":
            binding[pat[1]] = arg
        elif tag == "forced":
            pass
        else:  # constructor: arg is already in whnf
            head, sub = spine(arg)
            if not (isinstance(head, Const) and head.name == pat[1]
                    and len(sub) == len(pat[2])):
                return None
            for sp, sa in zip(pat[2], sub):
                if sp[0] == "var":
                    binding[sp[1]] = sa
    return binding


def normalize(sig: Signature, t: Term,
              fuel: Union[int, Fuel, None] = None) -> Term:
    """Full normal form: whnf at every subterm, annotations included."""
    f = _fuel(fuel)
    return _norm(sig, t, f)


def _norm(sig: Signature, t: Term, f: Fuel) -> Term:
    t = whnf(sig, t, f)
    if isinstance(t, Lam):
        return Lam(t.var, normalize_kind(sig, t.ann, f), _norm(sig, t.body, f))
    head, args = spine(t)
    if not args:
        return t
    return app(head, *[_norm(sig, a, f) for a in args])


def normalize_kind(sig: Signature, k: Kind,
                   fuel: Union[int, Fuel, None] = None) -> Kind:
    f = _fuel(fuel)
    if isinstance(k, (TypeKind, PropKind)):
        return k
    if isinstance(k, ElKind):
        return ElKind(_norm(sig, k.body, f))
    if isinstance(k, PrfKind):
        return PrfKind(_norm(sig, k.body, f))
    if isinstance(k, PiKind):
        return PiKind(k.var, normalize_kind(sig, k.domain, f),
                      normalize_kind(sig, k.codomain, f))
    raise TypeError(f"not a kind: {k!r}")


# ---------------------------------------------------------- convertibility

def convertible(sig: Signature, ctx: Context, a: Term, b: Term,
                at: Optional[Kind], fuel: Union[int, Fuel, None] = None
                ) -> bool:
    """Definitional equality of a and b at kind `at` (None = kind unknown,
    compare structurally). Kind direction matters for eta: at a product kind
    both sides are applied to a fresh variable."""
    f = _fuel(fuel)
    return _conv(sig, ctx, a, b, at, f)


def _conv(sig: Signature, ctx: Context, a: Term, b: Term,
          at: Optional[Kind], f: Fuel) -> bool:
    if alpha_eq(a, b):
        return True
    if isinstance(at, PiKind):
        x = fresh_name(at.var, ctx.names() | free_vars(a) | free_vars(b)
                       | free_vars(at))
        ctx2 = ctx.extend(x, at.domain)
        cod = at.codomain if x == at.var else subst(at.codomain, at.var,
                                                    Var(x))
        return _conv(sig, ctx2, App(a, Var(x)), App(b, Var(x)), cod, f)
    a = whnf(sig, a, f)
    b = whnf(sig, b, f)
    if alpha_eq(a, b):
        return True
    la, lb = isinstance(a, Lam), isinstance(b, Lam)
    if la or lb:
        # `at` was not a product (or unknown); fall back to untyped eta
        if la and lb:
            if not equal_kinds(sig, ctx, a.ann, b.ann, f):
                return False
            x = fresh_name(a.var, ctx.names() | free_vars(a) | free_vars(b))
            ctx2 = ctx.extend(x, a.ann)
            return _conv(sig, ctx2,
                         subst(a.body, a.var, Var(x)),
                         subst(b.body, b.var, Var(x)), None, f)
        lam, other = (a, b) if la else (b, a)
        x = fresh_name(lam.var, ctx.names() | free_vars(a) | free_vars(b))
        ctx2 = ctx.extend(x, lam.ann)
        return _conv(sig, ctx2, subst(lam.body, lam.var, Var(x)),
                     App(other, Var(x)), None, f)
    ha, sa = spine(a)
    hb, sb = spine(b)
    if type(ha) is not type(hb) or len(sa) != len(sb):
        return False
    if isinstance(ha, Var):
        if ha.name != hb.name:
            return False
        head_kind = ctx.lookup(ha.name)
    elif isinstance(ha, Const):
        if ha.name != hb.name:
            return False
        entry = sig.get(ha.name)
        head_kind = entry.kind if entry is not None else None
    elif isinstance(ha, Meta):
        if ha.ident != hb.ident:
            return False
        head_kind = None
    else:
        return False
    k = head_kind
    for u, v in zip(sa, sb):
        arg_at = None
        if isinstance(k, PiKind):
            arg_at = k.domain
            k = subst(k.codomain, k.var, u)
        else:
            k = None
        if not _conv(sig, ctx, u, v, arg_at, f):
            return False
    return True


def equal_kinds(sig: Signature, ctx: Context, k1: Kind, k2: Kind,
                fuel: Union[int, Fuel, None] = None) -> bool:
    f = _fuel(fuel)
    return _eqk(sig, ctx, k1, k2, f)


def _eqk(sig: Signature, ctx: Context, k1: Kind, k2: Kind, f: Fuel) -> bool:
    t1, t2 = type(k1), type(k2)
    if t1 is not t2:
        return False
    if t1 is TypeKind or t1 is PropKind:
        return True
    if t1 is ElKind:
        return _conv(sig, ctx, k1.body, k2.body, TYPE, f)
    if t1 is PrfKind:
        return _conv(sig, ctx, k1.body, k2.body, PROP, f)
    if t1 is PiKind:
        if not _eqk(sig, ctx, k1.domain, k2.domain, f):
            return False
        x = fresh_name(k1.var, ctx.names() | free_vars(k1) | free_vars(k2))
        ctx2 = ctx.extend(x, k1.domain)
        c1 = k1.codomain if x == k1.var else subst(k1.codomain, k1.var,
                                                   Var(x))
        c2 = k2.codomain if x == k2.var else subst(k2.codomain, k2.var,
                                                   Var(x))
        return _eqk(sig, ctx2, c1, c2, f)
    raise TypeError(f"not a kind: {k1!r}")


# ------------------------------------------------------------- inference

def infer_kind(sig: Signature, ctx: Context, t: Term,
               fuel: Union[int, Fuel, None] = None) -> Kind:
    f = _fuel(fuel)
    return _infer(sig, ctx, t, f)


def _infer(sig: Signature, ctx: Context, t: Term, f: Fuel) -> Kind:
    if isinstance(t, Var):
        k = ctx.lookup(t.name)
        if k is None:
            raise UnboundVariable(
                f"variable {t.name!r} is not in the context",
                diagnostic=Diagnostic("var", subject=t))
        return k
    if isinstance(t, Const):
        entry = sig.get(t.name)
        if entry is None:
            raise UnknownConstant(
                f"constant {t.name!r} is not declared",
                diagnostic=Diagnostic("const", subject=t))
        return entry.kind
    if isinstance(t, Meta):
        raise IllTyped(
            "term still contains an unresolved metavariable",
            diagnostic=Diagnostic("meta", subject=t))
    if isinstance(t, Lam):
        check_kind_valid(sig, ctx, t.ann, f)
        x, body = t.var, t.body
        if x in ctx:
            x2 = fresh_name(x, ctx.names() | free_vars(body))
            body = subst(body, x, Var(x2))
            x = x2
        body_kind = _infer(sig, ctx.extend(x, t.ann), body, f)
        return PiKind(x, t.ann, body_kind)
    if isinstance(t, App):
        fn_kind = _infer(sig, ctx, t.fn, f)
        if not isinstance(fn_kind, PiKind):
            raise NotAProduct(
                "application of a term whose kind is not a product",
                diagnostic=Diagnostic("app-fn", subject=t.fn,
                                      actual=fn_kind))
        arg_kind = _infer(sig, ctx, t.arg, f)
        if not _eqk(sig, ctx, arg_kind, fn_kind.domain, f):
            raise DomainMismatch(
                "argument kind does not match the function's domain",
                diagnostic=Diagnostic("app-domain", subject=t.arg,
                                      expected=fn_kind.domain,
                                      actual=arg_kind))
        return subst(fn_kind.codomain, fn_kind.var, t.arg)
    raise TypeError(f"not a term: {t!r}")


def check_kind_valid(sig: Signature, ctx: Context, k: Kind,
                     fuel: Union[int, Fuel, None] = None) -> None:
    f = _fuel(fuel)
    _check_kind(sig, ctx, k, f)


def _check_kind(sig: Signature, ctx: Context, k: Kind, f: Fuel) -> None:
    if isinstance(k, (TypeKind, PropKind)):
        return
    if isinstance(k, ElKind):
        body_kind = _infer(sig, ctx, k.body, f)
        if not isinstance(body_kind, TypeKind):
            raise IllFormedKind(
                "only a term of kind Type can be used as a type",
                diagnostic=Diagnostic("el-body", subject=k.body,
                                      expected=TYPE, actual=body_kind))
        return
    if isinstance(k, PrfKind):
        body_kind = _infer(sig, ctx, k.body, f)
        if not isinstance(body_kind, PropKind):
            raise IllFormedKind(
                "only a term of kind Prop can be used as a proposition",
                diagnostic=Diagnostic("prf-body", subject=k.body,
                                      expected=PROP, actual=body_kind))
        return
    if isinstance(k, PiKind):
        _check_kind(sig, ctx, k.domain, f)
        x, cod = k.var, k.codomain
        if x in ctx:
            x2 = fresh_name(x, ctx.names() | free_vars(cod))
            cod = subst(cod, x, Var(x2))
            x = x2
        _check_kind(sig, ctx.extend(x, k.domain), cod, f)
        return
    raise TypeError(f"not a kind: {k!r}")


def check_context(sig: Signature, entries,
                  fuel: Union[int, Fuel, None] = None) -> Context:
    """Validate a sequence of (name, kind) entries left to right and build
    the Context. Raises DuplicateVariable on repeated names."""
    f = _fuel(fuel)
    ctx = EMPTY_CONTEXT
    for name, kind in entries:
        _check_kind(sig, ctx, kind, f)
        ctx = ctx.extend(name, kind)
    return ctx


def check_term(sig: Signature, ctx: Context, t: Term, expected: Kind,
               fuel: Union[int, Fuel, None] = None) -> Kind:
    """Infer t's kind and require it equal to expected."""
    f = _fuel(fuel)
    actual = _infer(sig, ctx, t, f)
    if not _eqk(sig, ctx, actual, expected, f):
        raise KindMismatch(
            "term does not have the required kind",
            diagnostic=Diagnostic("check", subject=t, expected=expected,
                                  actual=actual))
    return actual
