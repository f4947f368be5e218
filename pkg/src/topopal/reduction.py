"""Rewriting announcement formulas into the announcement-free fragment.

Six schemes, each applied left to right at an announcement node ``[a]b``
according to the head connective of ``b``::

    ATOM     [a]p        ~>  int(a) -> p          (p an atom, true or false)
    NEG      [a]~b       ~>  int(a) -> ~[a]b
    CONJ     [a](b & c)  ~>  [a]b & [a]c
    KNOW     [a]K b      ~>  int(a) -> K [a]b
    INT      [a]int(b)   ~>  int(a) -> int([a]b)
    COMPOSE  [a][b]c     ~>  [int(a) & [a]int(b)]c

Every application strictly lowers :func:`~topopal.syntax.complexity` of the
whole formula, which bounds the number of steps.  Redexes are chosen
leftmost-outermost (first announcement node in pre-order).
"""

from __future__ import annotations

import gc
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

from .model import Evaluator, Mode, SubsetModel
from .syntax import (And, Announce, Bot, Formula, Int, Know, Not, Prop, Top,
                     complexity, fragment, Fragment, has_announcement, implies, render)

__all__ = ["SCHEMES", "RewriteStep", "ReductionTrace", "ReductionError",
           "reduce_step", "reduce", "check_step_equivalence", "apply_scheme", "format_step",
           "format_path", "subterm"]

SCHEMES = ("ATOM", "NEG", "CONJ", "KNOW", "INT", "COMPOSE")

Path = tuple[int, ...]


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteStep:
    scheme: str
    position: Path
    before: Formula
    after: Formula

    @property
    def redex(self) -> Formula:
        return subterm(self.before, self.position)

    @property
    def contractum(self) -> Formula:
        return subterm(self.after, self.position)


@dataclass(frozen=True)
class ReductionTrace:
    input: Formula
    steps: tuple[RewriteStep, ...]
    output: Formula

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[RewriteStep]:
        return iter(self.steps)


def subterm(f: Formula, path: Path) -> Formula:
    for i in path:
        f = f.children[i]
    return f


def apply_scheme(node: Announce) -> tuple[str, Formula]:
    """Rewrite one announcement node by the scheme matching its body."""
    a, b = node.announced, node.body
    if isinstance(b, (Prop, Top, Bot)):
        return "ATOM", implies(Int(a), b)
    if isinstance(b, Not):
        return "NEG", implies(Int(a), Not(Announce(a, b.sub)))
    if isinstance(b, And):
        return "CONJ", And(Announce(a, b.left), Announce(a, b.right))
    if isinstance(b, Know):
        return "KNOW", implies(Int(a), Know(Announce(a, b.sub)))
    if isinstance(b, Int):
        return "INT", implies(Int(a), Int(Announce(a, b.sub)))
    if isinstance(b, Announce):
        return "COMPOSE", Announce(And(Int(a), Announce(a, Int(b.announced))), b.body)
    raise ReductionError(f"no reduction scheme for [{render(a)}]{render(b)}")


def _check_effort_free(f: Formula) -> None:
    if fragment(f) is Fragment.PAL_EFFORT:
        raise ReductionError(f"cannot reduce a formula with the effort modality: {render(f)}")


def _first_redex(f: Formula) -> tuple[Path, Formula]:
    path: list[int] = []
    while not isinstance(f, Announce):
        for i, c in enumerate(f.children):
            if has_announcement(c):
                path.append(i)
                f = c
                break
        else:  # pragma: no cover - guarded by has_announcement
            raise AssertionError("announcement flag out of sync")
    return tuple(path), f


def _replace(f: Formula, path: Path, new: Formula) -> Formula:
    if not path:
        return new
    kids = list(f.children)
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return type(f)(*kids)


def reduce_step(f: Formula) -> RewriteStep | None:
    """One left-to-right scheme application, or ``None`` if ``f`` is announcement-free."""
    _check_effort_free(f)
    if not has_announcement(f):
        return None
    path, node = _first_redex(f)
    scheme, new = apply_scheme(node)  # type: ignore[arg-type]
    return RewriteStep(scheme, path, f, _replace(f, path, new))


@contextmanager
def _no_cyclic_gc() -> Iterator[None]:
    # traces keep every intermediate tree alive; trees are acyclic, so the
    # cyclic collector only burns time rescanning them
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def reduce(f: Formula, check_descent: bool = True) -> ReductionTrace:
    """Rewrite ``f`` to an announcement-free equivalent, recording every step."""
    _check_effort_free(f)
    with _no_cyclic_gc():
        return _reduce(f, check_descent)


def _reduce(f: Formula, check_descent: bool) -> ReductionTrace:
    steps = []
    cur = f
    while has_announcement(cur):
        path, node = _first_redex(cur)
        scheme, new = apply_scheme(node)  # type: ignore[arg-type]
        nxt = _replace(cur, path, new)
        if check_descent and complexity(nxt) >= complexity(cur):
            raise ReductionError(f"{scheme} step did not lower complexity at {render(cur)}")
        steps.append(RewriteStep(scheme, path, cur, nxt))
        cur = nxt
    return ReductionTrace(f, tuple(steps), cur)


def check_step_equivalence(m: SubsetModel, step: RewriteStep) -> bool:
    """Do the formulas before and after ``step`` agree at every scenario of ``m``?"""
    ev = Evaluator(m, Mode.INT)
    for u in m.ranges(Mode.INT):
        if ev.ext(step.before, u) != ev.ext(step.after, u):
            return False
    return True


def format_path(path: Path) -> str:
    return ".".join(map(str, path)) if path else "."


def format_step(step: RewriteStep) -> str:
    """``SCHEME @ path : before ==> after``."""
    return (f"{step.scheme} @ {format_path(step.position)} : "
            f"{render(step.before, sugar=True)} ==> {render(step.after, sugar=True)}")
