"""Elaboration: resolve names, fill holes, coerce terms used as kinds.

Unification is first-order and eager: both sides are reduced to weak-head
form (metavariable heads block), then compared structurally; constraints that
are flex-headed get postponed and retried after every solution. Two bounded
extras handle the universe-style constants:

  - rule inversion: a constraint `c args ~ rhs` whose heads differ, where c
    has rewrite rules and the args still contain holes, is attempted against
    each rule (binders become fresh holes, the rule's right-hand side is
    unified with rhs, then the instantiated left-hand side with the
    constraint's own); nesting is depth-bounded and failed attempts roll
    back. This is what solves `T ?m ~ Nat` or `V ?m ~ bot` without the
    elaborator knowing any constant by name.
  - pattern solutions: `?m x1 ... xn ~ t` with distinct context variables
    x1..xn is solved by abstracting them from t.

A hole's solution may only mention variables that were in scope where the
hole was written; solutions are final once recorded; every hole of a command
must be solved by the end of it. Elaborated output is Meta-free and is
re-checked by the caller with the kernel alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import (
    Diagnostic, IllFormedKind, KindMismatch, Mismatch, NotAProduct,
    OccursCheck, ScopeEscape, SourceSpan, UnificationFailure, UnknownConstant,
    UnsolvedMeta,
)
from . import kernel
from .kernel import Context, Fuel
from .signature import Signature
from .surface import (
    SApp, SEl, SHole, SLam, SName, SPi, SProp, SPrf, SType, STermKind,
    SurfaceKind, SurfaceTerm,
)
from .syntax import (
    PROP, TYPE, App, Const, ElKind, Kind, Lam, Meta, PiKind, PrfKind,
    PropKind, Term, TypeKind, Var, alpha_eq, contains_meta, free_vars,
    fresh_name, metas_of, spine, subst, subst_parallel,
)

_INVERSION_DEPTH = 8


@dataclass
class MetaInfo:
    ident: int
    kind: Optional[Kind]
    scope: frozenset
    span: Optional[SourceSpan]


class MetaState:
    """Metavariables and pending constraints for one command."""

    def __init__(self):
        self.counter = 0
        self.info: dict[int, MetaInfo] = {}
        self.solutions: dict[int, Term] = {}
        self.queue: list[tuple] = []  # (ctx, a, b, at)

    def fresh(self, kind: Optional[Kind], ctx: Context,
              span: Optional[SourceSpan] = None) -> Meta:
        ident = self.counter
        self.counter += 1
        self.info[ident] = MetaInfo(ident, kind, frozenset(ctx.names()), span)
        return Meta(ident)

    def snapshot(self):
        return dict(self.solutions), list(self.queue), self.counter

    def restore(self, snap):
        self.solutions, self.queue, self.counter = snap
        self.solutions = dict(self.solutions)
        self.queue = list(self.queue)

    def zonk(self, e):
        """Apply current solutions throughout a term or kind."""
        if isinstance(e, Meta):
            sol = self.solutions.get(e.ident)
            return e if sol is None else self.zonk(sol)
        if isinstance(e, (Var, Const, TypeKind, PropKind)):
            return e
        if isinstance(e, App):
            return App(self.zonk(e.fn), self.zonk(e.arg))
        if isinstance(e, Lam):
            return Lam(e.var, self.zonk(e.ann), self.zonk(e.body))
        if isinstance(e, ElKind):
            return ElKind(self.zonk(e.body))
        if isinstance(e, PrfKind):
            return PrfKind(self.zonk(e.body))
        if isinstance(e, PiKind):
            return PiKind(e.var, self.zonk(e.domain), self.zonk(e.codomain))
        raise TypeError(f"not a term or kind: {e!r}")


class Elaborator:
    def __init__(self, sig: Signature, fuel: Union[int, Fuel, None] = None):
        self.sig = sig
        self.fuel = kernel._fuel(fuel)
        self.state = MetaState()

    # ----------------------------------------------------------- terms

    def term(self, ctx: Context, s: SurfaceTerm,
             expected: Optional[Kind]) -> tuple[Term, Kind]:
        if isinstance(s, SName):
            t, k = self._name(ctx, s)
            return self._against(ctx, t, k, expected, s.span)
        if isinstance(s, SHole):
            if expected is None:
                raise UnsolvedMeta(
                    "hole in a position whose kind is not determined",
                    span=s.span)
            m = self.state.fresh(expected, ctx, s.span)
            return m, expected
        if isinstance(s, SLam):
            return self._lambda(ctx, s, expected)
        if isinstance(s, SApp):
            t, k = self._application(ctx, s)
            return self._against(ctx, t, k, expected, s.span)
        raise TypeError(f"not a surface term: {s!r}")

    def _name(self, ctx: Context, s: SName) -> tuple[Term, Kind]:
        k = ctx.lookup(s.name)
        if k is not None:
            return Var(s.name), k
        entry = self.sig.get(s.name)
        if entry is not None:
            return Const(s.name), entry.kind
        raise UnknownConstant(f"unknown name {s.name!r}", span=s.span)

    def _against(self, ctx: Context, t: Term, k: Kind,
                 expected: Optional[Kind], span) -> tuple[Term, Kind]:
        if expected is not None:
            self._require_kinds_equal(ctx, k, expected, span, "check")
            return t, expected
        return t, k

    def _require_kinds_equal(self, ctx: Context, actual: Kind,
                             expected: Kind, span, rule: str) -> None:
        """Kernel equality when no holes are involved (so rejections carry
        kernel error classes); unification otherwise."""
        a = self.state.zonk(actual)
        e = self.state.zonk(expected)
        if not (contains_meta(a) or contains_meta(e)):
            if not kernel.equal_kinds(self.sig, ctx, a, e, self.fuel):
                raise KindMismatch(
                    "kind does not match what this position requires",
                    span=span,
                    diagnostic=Diagnostic(rule, expected=e, actual=a))
            return
        self.unify_kinds(ctx, a, e, span)

    def _lambda(self, ctx: Context, s: SLam,
                expected: Optional[Kind]) -> tuple[Term, Kind]:
        if expected is not None and not isinstance(expected, PiKind):
            raise KindMismatch(
                "an abstraction only has product kinds",
                span=s.span,
                diagnostic=Diagnostic("lam-kind", expected=expected))
        if s.ann is not None:
            dom = self.kind(ctx, s.ann)
            if isinstance(expected, PiKind):
                self._require_kinds_equal(ctx, dom, expected.domain, s.span,
                                          "lam-domain")
        elif isinstance(expected, PiKind):
            dom = expected.domain
        else:
            raise UnsolvedMeta(
                f"binder {s.var!r} needs an annotation here", span=s.span)
        x, body_s = s.var, s.body
        if x in ctx:
            # keep contexts duplicate-free; the surface name still resolves
            # to this binder because we rename consistently
            x2 = fresh_name(x, ctx.names())
            body_s = _rename_surface(body_s, x, x2)
            x = x2
        ctx2 = ctx.extend(x, dom)
        cod = None
        if isinstance(expected, PiKind):
            cod = expected.codomain
            if expected.var != x:
                cod = subst(cod, expected.var, Var(x))
        body, body_kind = self.term(ctx2, body_s, cod)
        result_kind = expected if expected is not None \
            else PiKind(x, dom, body_kind)
        return Lam(x, dom, body), result_kind

    def _application(self, ctx: Context, s: SApp) -> tuple[Term, Kind]:
        chain = []
        fn = s
        while isinstance(fn, SApp):
            chain.append(fn.arg)
            fn = fn.fn
        chain.reverse()
        t, k = self.term(ctx, fn, None)
        for arg_s in chain:
            k = self._force_product(ctx, k, fn, arg_s)
            if isinstance(arg_s, SHole):
                arg = self.state.fresh(k.domain, ctx, arg_s.span)
            else:
                arg, _ = self.term(ctx, arg_s, k.domain)
            t = App(t, arg)
            k = subst(k.codomain, k.var, arg)
        return t, k

    def _force_product(self, ctx: Context, k: Kind, fn, arg_s) -> PiKind:
        if isinstance(k, PiKind):
            return k
        span = getattr(arg_s, "span", None)
        raise NotAProduct(
            "too many arguments: the head's kind is not a product here",
            span=span,
            diagnostic=Diagnostic("app-fn", actual=self.state.zonk(k)))

    # ----------------------------------------------------------- kinds

    def kind(self, ctx: Context, s: SurfaceKind) -> Kind:
        if isinstance(s, SType):
            return TYPE
        if isinstance(s, SProp):
            return PROP
        if isinstance(s, SEl):
            t, _ = self.term(ctx, s.body, TYPE)
            return ElKind(t)
        if isinstance(s, SPrf):
            t, _ = self.term(ctx, s.body, PROP)
            return PrfKind(t)
        if isinstance(s, SPi):
            dom = self.kind(ctx, s.domain)
            x, cod_s = s.var, s.codomain
            if x in ctx:
                x2 = fresh_name(x, ctx.names())
                cod_s = _rename_surface_kind(cod_s, x, x2)
                x = x2
            cod = self.kind(ctx.extend(x, dom), cod_s)
            return PiKind(x, dom, cod)
        if isinstance(s, STermKind):
            t, k = self.term(ctx, s.term, None)
            k = self.state.zonk(k)
            if isinstance(k, TypeKind):
                return ElKind(t)
            if isinstance(k, PropKind):
                return PrfKind(t)
            raise IllFormedKind(
                "a term used as a kind must be a type or a proposition",
                span=s.span,
                diagnostic=Diagnostic("kind-coercion", subject=t, actual=k))
        raise TypeError(f"not a surface kind: {s!r}")

    # ----------------------------------------------------- unification

    def unify_kinds(self, ctx: Context, k1: Kind, k2: Kind, span) -> None:
        k1 = self.state.zonk(k1)
        k2 = self.state.zonk(k2)
        t1, t2 = type(k1), type(k2)
        if t1 is not t2:
            raise Mismatch(
                "kinds with different shapes cannot be made equal",
                span=span,
                diagnostic=Diagnostic("kind-unify", expected=k2, actual=k1))
        if t1 in (TypeKind, PropKind):
            return
        if t1 is ElKind:
            self.unify(ctx, k1.body, k2.body, TYPE, span)
            return
        if t1 is PrfKind:
            self.unify(ctx, k1.body, k2.body, PROP, span)
            return
        if t1 is PiKind:
            self.unify_kinds(ctx, k1.domain, k2.domain, span)
            x = fresh_name(k1.var, ctx.names() | free_vars(k1)
                           | free_vars(k2))
            c1 = subst(k1.codomain, k1.var, Var(x))
            c2 = subst(k2.codomain, k2.var, Var(x))
            self.unify_kinds(ctx.extend(x, k1.domain), c1, c2, span)
            return
        raise TypeError(f"not a kind: {k1!r}")

    def unify(self, ctx: Context, a: Term, b: Term, at: Optional[Kind],
              span=None) -> None:
        self._unify(ctx, a, b, at, span, _INVERSION_DEPTH)
        self._drain(span)

    def _unify(self, ctx: Context, a: Term, b: Term, at: Optional[Kind],
               span, depth: int) -> None:
        a = kernel.whnf(self.sig, self.state.zonk(a), self.fuel)
        b = kernel.whnf(self.sig, self.state.zonk(b), self.fuel)
        if alpha_eq(a, b):
            return
        at = self.state.zonk(at) if at is not None else None
        if isinstance(at, PiKind):
            x = fresh_name(at.var, ctx.names() | free_vars(a) | free_vars(b)
                           | free_vars(at))
            cod = subst(at.codomain, at.var, Var(x))
            self._unify(ctx.extend(x, at.domain), App(a, Var(x)),
                        App(b, Var(x)), cod, span, depth)
            return
        if isinstance(a, Meta):
            self._solve(ctx, a.ident, b, span)
            return
        if isinstance(b, Meta):
            self._solve(ctx, b.ident, a, span)
            return
        la, lb = isinstance(a, Lam), isinstance(b, Lam)
        if la or lb:
            if la and lb:
                self.unify_kinds(ctx, a.ann, b.ann, span)
                x = fresh_name(a.var, ctx.names() | free_vars(a)
                               | free_vars(b))
                self._unify(ctx.extend(x, a.ann),
                            subst(a.body, a.var, Var(x)),
                            subst(b.body, b.var, Var(x)), None, span, depth)
                return
            lam, other = (a, b) if la else (b, a)
            x = fresh_name(lam.var, ctx.names() | free_vars(a)
                           | free_vars(b))
            self._unify(ctx.extend(x, lam.ann),
                        subst(lam.body, lam.var, Var(x)),
                        App(other, Var(x)), None, span, depth)
            return
        ha, sa = spine(a)
        hb, sb = spine(b)
        if isinstance(ha, Meta) or isinstance(hb, Meta):
            if (isinstance(ha, Meta) and isinstance(hb, Meta)
                    and ha.ident == hb.ident and len(sa) == len(sb)):
                for u, v in zip(sa, sb):
                    self._unify(ctx, u, v, None, span, depth)
                return
            if isinstance(ha, Meta) and self._try_pattern(ctx, ha, sa, b,
                                                          span):
                return
            if isinstance(hb, Meta) and self._try_pattern(ctx, hb, sb, a,
                                                          span):
                return
            self.state.queue.append((ctx, a, b, at, span))
            return
        same_head = (type(ha) is type(hb)
                     and getattr(ha, "name", None) == getattr(hb, "name",
                                                              None)
                     and len(sa) == len(sb))
        if same_head:
            k = None
            if isinstance(ha, Var):
                k = ctx.lookup(ha.name)
            elif isinstance(ha, Const):
                entry = self.sig.get(ha.name)
                k = entry.kind if entry is not None else None
            for u, v in zip(sa, sb):
                arg_at = None
                if isinstance(k, PiKind):
                    arg_at = k.domain
                    k = subst(k.codomain, k.var, u)
                else:
                    k = None
                self._unify(ctx, u, v, arg_at, span, depth)
            return
        if depth > 0:
            if (isinstance(ha, Const) and self.sig.rules_for(ha.name)
                    and any(contains_meta(x) for x in sa)
                    and self._try_inversion(ctx, ha, sa, b, span, depth)):
                return
            if (isinstance(hb, Const) and self.sig.rules_for(hb.name)
                    and any(contains_meta(x) for x in sb)
                    and self._try_inversion(ctx, hb, sb, a, span, depth)):
                return
        raise Mismatch(
            "terms with different rigid heads cannot be made equal",
            span=span,
            diagnostic=Diagnostic("unify-rigid", subject=a, expected=b))

    def _try_pattern(self, ctx: Context, head: Meta, args: list, rhs: Term,
                     span) -> bool:
        """?m x1 ... xn ~ rhs with distinct context variables: abstract."""
        if not args:
            return False
        names = []
        for x in args:
            if not isinstance(x, Var) or x.name in names:
                return False
            if ctx.lookup(x.name) is None:
                return False
            names.append(x.name)
        if metas_of(rhs):
            return False
        body = rhs
        for name in reversed(names):
            body = Lam(name, ctx.lookup(name), body)
        if free_vars(body) - self.state.info[head.ident].scope:
            return False
        self._solve(ctx, head.ident, body, span)
        return True

    def _try_inversion(self, ctx: Context, head: Const, args: list,
                       rhs: Term, span, depth: int) -> bool:
        rules = self.sig.rules_for(head.name)
        if len(args) != rules[0].arity:
            return False
        for rule in rules:
            snap = self.state.snapshot()
            try:
                binding = {x: self.state.fresh(k, ctx, span)
                           for x, k in rule.binder_kinds}
                rhs_inst = subst_parallel(rule.rhs, binding)
                self._unify(ctx, rhs_inst, rhs, None, span, depth - 1)
                lhs_inst, lhs_args = spine(
                    subst_parallel(rule.source.lhs, binding))
                for u, v in zip(args, lhs_args):
                    self._unify(ctx, u, v, None, span, depth - 1)
                return True
            except UnificationFailure:
                self.state.restore(snap)
        return False

    def _solve(self, ctx: Context, ident: int, value: Term, span) -> None:
        value = self.state.zonk(value)
        if isinstance(value, Meta) and value.ident == ident:
            return
        if ident in metas_of(value):
            raise OccursCheck(
                "a hole's solution mentions the hole itself", span=span,
                diagnostic=Diagnostic("occurs", subject=value))
        info = self.state.info[ident]
        escaped = free_vars(value) - info.scope
        if escaped:
            raise ScopeEscape(
                "solution mentions variables not in scope at the hole: "
                + ", ".join(sorted(escaped)),
                span=span or info.span,
                diagnostic=Diagnostic("scope", subject=value))
        self.state.solutions[ident] = value

    def _drain(self, span) -> None:
        progress = True
        while progress and self.state.queue:
            progress = False
            pending = self.state.queue
            self.state.queue = []
            for (ctx, a, b, at, sp) in pending:
                q_before = len(self.state.queue)
                s_before = len(self.state.solutions)
                self._unify(ctx, a, b, at, sp, _INVERSION_DEPTH)
                if (len(self.state.solutions) > s_before
                        or len(self.state.queue) == q_before):
                    progress = True
            # a constraint re-queued without solving anything is only
            # retried if some other constraint made progress

    # ---------------------------------------------------------- finish

    def finish_term(self, t: Term, span=None) -> Term:
        t = self.state.zonk(t)
        left = metas_of(t)
        if left or self.state.queue:
            self._report_unsolved(left, span)
        return t

    def finish_kind(self, k: Kind, span=None) -> Kind:
        k = self.state.zonk(k)
        left = metas_of(k)
        if left or self.state.queue:
            self._report_unsolved(left, span)
        return k

    def _report_unsolved(self, left: set, span) -> None:
        if self.state.queue:
            ctx, a, b, at, sp = self.state.queue[0]
            raise UnificationFailure(
                "constraints remain that first-order unification cannot "
                "decide", span=sp or span,
                diagnostic=Diagnostic("postponed", subject=self.state.zonk(a),
                                      expected=self.state.zonk(b)))
        ident = min(left)
        info = self.state.info[ident]
        raise UnsolvedMeta("a hole was never determined",
                           span=info.span or span)


def _rename_surface(s: SurfaceTerm, old: str, new: str) -> SurfaceTerm:
    if isinstance(s, SName):
        return SName(new, s.span) if s.name == old else s
    if isinstance(s, SHole):
        return s
    if isinstance(s, SApp):
        return SApp(_rename_surface(s.fn, old, new),
                    _rename_surface(s.arg, old, new), s.span)
    if isinstance(s, SLam):
        ann = _rename_surface_kind(s.ann, old, new) if s.ann else None
        if s.var == old:
            return SLam(s.var, ann, s.body, s.span)
        return SLam(s.var, ann, _rename_surface(s.body, old, new), s.span)
    raise TypeError(f"not a surface term: {s!r}")


def _rename_surface_kind(s: SurfaceKind, old: str, new: str) -> SurfaceKind:
    if isinstance(s, (SType, SProp)):
        return s
    if isinstance(s, SEl):
        return SEl(_rename_surface(s.body, old, new), s.span)
    if isinstance(s, SPrf):
        return SPrf(_rename_surface(s.body, old, new), s.span)
    if isinstance(s, STermKind):
        return STermKind(_rename_surface(s.term, old, new), s.span)
    if isinstance(s, SPi):
        dom = _rename_surface_kind(s.domain, old, new)
        if s.var == old:
            return SPi(s.var, dom, s.codomain, s.span)
        return SPi(s.var, dom, _rename_surface_kind(s.codomain, old, new),
                   s.span)
    raise TypeError(f"not a surface kind: {s!r}")


def elaborate(sig: Signature, ctx: Context, s: SurfaceTerm,
              expected: Optional[Kind] = None,
              fuel: Union[int, Fuel, None] = None) -> Term:
    """Elaborate one surface term to a Meta-free kernel term."""
    el = Elaborator(sig, fuel)
    t, _ = el.term(ctx, s, expected)
    el._drain(getattr(s, "span", None))
    return el.finish_term(t, getattr(s, "span", None))


def elaborate_kind(sig: Signature, ctx: Context, s: SurfaceKind,
                   fuel: Union[int, Fuel, None] = None) -> Kind:
    el = Elaborator(sig, fuel)
    k = el.kind(ctx, s)
    el._drain(getattr(s, "span", None))
    return el.finish_kind(k, getattr(s, "span", None))


def unify(sig: Signature, ctx: Context, a: Term, b: Term,
          at: Optional[Kind], state: MetaState,
          fuel: Union[int, Fuel, None] = None) -> None:
    """Standalone entry point over an existing MetaState."""
    el = Elaborator(sig, fuel)
    el.state = state
    el.unify(ctx, a, b, at)
