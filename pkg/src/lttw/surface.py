"""Surface syntax produced by the parser and consumed by the elaborator.

Names are unresolved (binder or constant is decided during elaboration),
holes stand for arguments to be inferred, and binder annotations may be
missing. Every node carries its source span.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .errors import SourceSpan


class SurfaceTerm:
    __slots__ = ()


class SurfaceKind:
    __slots__ = ()


@dataclass(frozen=True)
class SName(SurfaceTerm):
    name: str
    span: SourceSpan


@dataclass(frozen=True)
class SHole(SurfaceTerm):
    span: SourceSpan


@dataclass(frozen=True)
class SLam(SurfaceTerm):
    var: str
    ann: Optional["SurfaceKind"]
    body: SurfaceTerm
    span: SourceSpan


@dataclass(frozen=True)
class SApp(SurfaceTerm):
    fn: SurfaceTerm
    arg: SurfaceTerm
    span: SourceSpan


@dataclass(frozen=True)
class SType(SurfaceKind):
    span: SourceSpan


@dataclass(frozen=True)
class SProp(SurfaceKind):
    span: SourceSpan


@dataclass(frozen=True)
class SEl(SurfaceKind):
    body: SurfaceTerm
    span: SourceSpan


@dataclass(frozen=True)
class SPrf(SurfaceKind):
    body: SurfaceTerm
    span: SourceSpan


@dataclass(frozen=True)
class SPi(SurfaceKind):
    var: str
    domain: "SurfaceKind"
    codomain: "SurfaceKind"
    span: SourceSpan


@dataclass(frozen=True)
class STermKind(SurfaceKind):
    """A term written where a kind belongs; elaboration coerces it to El or
    Prf according to its inferred kind."""

    term: SurfaceTerm
    span: SourceSpan


Binder = tuple[str, Optional[SurfaceKind], SourceSpan]


class DirectiveOp(Enum):
    CHECK = "Check"
    REDUCE = "Reduce"
    TYPEOF = "TypeOf"
    LOAD = "Load"
    SETOPTION = "SetOption"


@dataclass(frozen=True)
class Declare:
    name: str
    binders: tuple[Binder, ...]
    kind: SurfaceKind
    span: SourceSpan


@dataclass(frozen=True)
class Define:
    name: str
    binders: tuple[Binder, ...]
    body: SurfaceTerm
    kind: Optional[SurfaceKind]
    span: SourceSpan


@dataclass(frozen=True)
class DeclareRule:
    binders: tuple[Binder, ...]
    lhs: SurfaceTerm
    rhs: SurfaceTerm
    kind: SurfaceKind
    span: SourceSpan


@dataclass(frozen=True)
class Directive:
    op: DirectiveOp
    payload: tuple
    span: SourceSpan


Command = Union[Declare, Define, DeclareRule, Directive]
