"""Interval boxes over predicates: the abstract domain of the analyses.

A :class:`Box` assigns one rational interval (with open or closed ends)
to each argument position of a predicate; the empty box is the bottom
element.  A box for a 0-ary predicate is the two-point lattice
unreached/reached, which is how the falsity predicate is tracked.  An
:class:`AbstractElement` maps every declared predicate to a box.

Per-clause transformers compute the tightest box implied by the clause
constraint together with the boxes of the occurring predicates, going
through DNF conversion and exact projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linlogic import ConjCube, RawBound, project_to_box, to_dnf
from .syntax import (
    Clause,
    Formula,
    LinConstraint,
    LinTerm,
    Rel,
    System,
    TRUE,
    FALSE,
    conj,
    disj,
    param_vars,
)


@dataclass(frozen=True)
class Bound:
    """One side of an interval; ``value None`` means unbounded."""

    value: Fraction | None
    strict: bool

    @staticmethod
    def unbounded() -> "Bound":
        return Bound(None, True)

    @staticmethod
    def at(value, strict: bool = False) -> "Bound":
        return Bound(Fraction(value), strict)

    @staticmethod
    def from_raw(raw: RawBound) -> "Bound":
        value, strict = raw
        return Bound(value, True if value is None else strict)


def _lower_covers(a: Bound, b: Bound) -> bool:
    """Does lower bound ``a`` admit everything lower bound ``b`` admits?"""
    if a.value is None:
        return True
    if b.value is None:
        return False
    if a.value != b.value:
        return a.value < b.value
    return b.strict or not a.strict


def _upper_covers(a: Bound, b: Bound) -> bool:
    if a.value is None:
        return True
    if b.value is None:
        return False
    if a.value != b.value:
        return a.value > b.value
    return b.strict or not a.strict


UNBOUNDED = Bound.unbounded()


@dataclass(frozen=True)
class Interval:
    lo: Bound
    hi: Bound

    @staticmethod
    def top() -> "Interval":
        return Interval(UNBOUNDED, UNBOUNDED)

    @staticmethod
    def point(value) -> "Interval":
        b = Bound.at(value)
        return Interval(b, b)

    @staticmethod
    def of(lo, hi, lo_strict: bool = False, hi_strict: bool = False) -> "Interval":
        lob = UNBOUNDED if lo is None else Bound.at(lo, lo_strict)
        hib = UNBOUNDED if hi is None else Bound.at(hi, hi_strict)
        return Interval(lob, hib)

    @property
    def is_empty(self) -> bool:
        if self.lo.value is None or self.hi.value is None:
            return False
        if self.lo.value > self.hi.value:
            return True
        return self.lo.value == self.hi.value and (self.lo.strict or self.hi.strict)

    def contains(self, x: Fraction) -> bool:
        if self.lo.value is not None:
            if x < self.lo.value or (x == self.lo.value and self.lo.strict):
                return False
        if self.hi.value is not None:
            if x > self.hi.value or (x == self.hi.value and self.hi.strict):
                return False
        return True

    def leq(self, other: "Interval") -> bool:
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return _lower_covers(other.lo, self.lo) and _upper_covers(other.hi, self.hi)

    def join(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        lo = self.lo if _lower_covers(self.lo, other.lo) else other.lo
        hi = self.hi if _upper_covers(self.hi, other.hi) else other.hi
        return Interval(lo, hi)

    def meet(self, other: "Interval") -> "Interval":
        lo = other.lo if _lower_covers(self.lo, other.lo) else self.lo
        hi = other.hi if _upper_covers(self.hi, other.hi) else self.hi
        return Interval(lo, hi)

    def widen(self, other: "Interval") -> "Interval":
        """Standard interval widening: unstable bounds go unbounded."""
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        lo = self.lo if _lower_covers(self.lo, other.lo) else UNBOUNDED
        hi = self.hi if _upper_covers(self.hi, other.hi) else UNBOUNDED
        return Interval(lo, hi)

    def __str__(self) -> str:
        if self.is_empty:
            return "(empty)"
        left = "(-oo" if self.lo.value is None else ("(" if self.lo.strict else "[") + str(self.lo.value)
        right = "+oo)" if self.hi.value is None else str(self.hi.value) + (")" if self.hi.strict else "]")
        return f"{left}, {right}"


@dataclass(frozen=True)
class Box:
    """Product of intervals; ``intervals is None`` encodes empty."""

    arity: int
    intervals: tuple[Interval, ...] | None

    @staticmethod
    def make(arity: int, intervals: Iterable[Interval]) -> "Box":
        ivs = tuple(intervals)
        assert len(ivs) == arity
        if any(iv.is_empty for iv in ivs):
            return Box(arity, None)
        return Box(arity, ivs)

    @staticmethod
    def empty(arity: int) -> "Box":
        return Box(arity, None)

    @staticmethod
    def top(arity: int) -> "Box":
        return Box(arity, tuple(Interval.top() for _ in range(arity)))

    @staticmethod
    def from_raw(arity: int, raw: Sequence[tuple[RawBound, RawBound]]) -> "Box":
        return Box.make(
            arity,
            (Interval(Bound.from_raw(lo), Bound.from_raw(hi)) for lo, hi in raw),
        )

    @property
    def is_empty(self) -> bool:
        return self.intervals is None

    def contains(self, args: Sequence[Fraction]) -> bool:
        if self.intervals is None:
            return False
        return all(iv.contains(x) for iv, x in zip(self.intervals, args))

    def leq(self, other: "Box") -> bool:
        if self.intervals is None:
            return True
        if other.intervals is None:
            return False
        return all(a.leq(b) for a, b in zip(self.intervals, other.intervals))

    def join(self, other: "Box") -> "Box":
        if self.intervals is None:
            return other
        if other.intervals is None:
            return self
        return Box(self.arity, tuple(a.join(b) for a, b in zip(self.intervals, other.intervals)))

    def meet(self, other: "Box") -> "Box":
        if self.intervals is None or other.intervals is None:
            return Box.empty(self.arity)
        return Box.make(
            self.arity, (a.meet(b) for a, b in zip(self.intervals, other.intervals))
        )

    def widen(self, other: "Box") -> "Box":
        if self.intervals is None:
            return other
        if other.intervals is None:
            return self
        return Box(self.arity, tuple(a.widen(b) for a, b in zip(self.intervals, other.intervals)))

    def formula(self, variables: Sequence[str]) -> Formula:
        """The box as a constraint formula over ``variables``."""
        if self.intervals is None:
            return FALSE
        parts: list[Formula] = []
        for v, iv in zip(variables, self.intervals):
            var = LinTerm.var(v)
            if iv.lo.value is not None and iv.hi.value is not None and iv.lo == iv.hi:
                parts.append(LinConstraint(var - LinTerm.constant(iv.lo.value), Rel.EQ).formula())
                continue
            if iv.lo.value is not None:
                rel = Rel.LT if iv.lo.strict else Rel.LE
                parts.append(LinConstraint(LinTerm.constant(iv.lo.value) - var, rel).formula())
            if iv.hi.value is not None:
                rel = Rel.LT if iv.hi.strict else Rel.LE
                parts.append(LinConstraint(var - LinTerm.constant(iv.hi.value), rel).formula())
        return conj(parts)

    def complement(self, variables: Sequence[str]) -> Formula:
        """Negation-free formula for the outside of the box."""
        if self.intervals is None:
            return TRUE
        parts: list[Formula] = []
        for v, iv in zip(variables, self.intervals):
            var = LinTerm.var(v)
            if iv.lo.value is not None:
                rel = Rel.LE if iv.lo.strict else Rel.LT
                parts.append(LinConstraint(var - LinTerm.constant(iv.lo.value), rel).formula())
            if iv.hi.value is not None:
                rel = Rel.LE if iv.hi.strict else Rel.LT
                parts.append(LinConstraint(LinTerm.constant(iv.hi.value) - var, rel).formula())
        return disj(parts)

    def __str__(self) -> str:
        if self.intervals is None:
            return "empty"
        if not self.intervals:
            return "reached"
        return " x ".join(str(iv) for iv in self.intervals)


@dataclass(frozen=True)
class AbstractElement:
    """A box for every declared predicate, ordered by predicate name."""

    items: tuple[tuple[str, Box], ...]

    @staticmethod
    def of(boxes: Mapping[str, Box]) -> "AbstractElement":
        return AbstractElement(tuple(sorted(boxes.items())))

    @staticmethod
    def bottom(system: System) -> "AbstractElement":
        return AbstractElement.of({d.name: Box.empty(d.arity) for d in system.decls})

    @staticmethod
    def top(system: System) -> "AbstractElement":
        return AbstractElement.of({d.name: Box.top(d.arity) for d in system.decls})

    @property
    def boxes(self) -> dict[str, Box]:
        return dict(self.items)

    def get(self, name: str) -> Box:
        for n, box in self.items:
            if n == name:
                return box
        raise KeyError(name)

    def with_box(self, name: str, box: Box) -> "AbstractElement":
        return AbstractElement(
            tuple((n, box if n == name else b) for n, b in self.items)
        )

    def leq(self, other: "AbstractElement") -> bool:
        return all(a.leq(b) for (_, a), (_, b) in zip(self.items, other.items))

    def join(self, other: "AbstractElement") -> "AbstractElement":
        return AbstractElement(
            tuple((n, a.join(b)) for (n, a), (_, b) in zip(self.items, other.items))
        )

    def meet(self, other: "AbstractElement") -> "AbstractElement":
        return AbstractElement(
            tuple((n, a.meet(b)) for (n, a), (_, b) in zip(self.items, other.items))
        )

    def widen(self, other: "AbstractElement") -> "AbstractElement":
        return AbstractElement(
            tuple((n, a.widen(b)) for (n, a), (_, b) in zip(self.items, other.items))
        )

    @property
    def is_bottom(self) -> bool:
        return all(box.is_empty for _, box in self.items)

    def gamma_contains(self, pred: str, args: Sequence[Fraction]) -> bool:
        return self.get(pred).contains(args)

    def to_formulas(self) -> dict[str, Formula]:
        return {
            name: box.formula(param_vars(box.arity)) for name, box in self.items
        }

    def __str__(self) -> str:
        return "; ".join(f"{n}: {b}" for n, b in self.items)


def formula_box(formula: Formula, variables: Sequence[str], cap: int | None = None) -> Box:
    """Tightest box over ``variables`` containing all formula solutions."""
    arity = len(variables)
    cubes = to_dnf(formula) if cap is None else to_dnf(formula, cap)
    acc = Box.empty(arity)
    for cube in cubes:
        raw = project_to_box(cube, variables)
        if raw is None:
            continue
        acc = acc.join(Box.from_raw(arity, raw))
    return acc


def clause_post(clause: Clause, elem: AbstractElement, cap: int | None = None) -> Box:
    """Tightest head box a clause derives when its body holds in ``elem``."""
    parts: list[Formula] = [clause.constraint]
    for app in clause.body:
        parts.append(elem.get(app.pred.name).formula(app.args))
    return formula_box(conj(parts), clause.head.args, cap)


def clause_pre_restricted(
    clause: Clause,
    position: int,
    restriction: AbstractElement,
    elem: AbstractElement,
    cap: int | None = None,
) -> Box:
    """Tightest box for one body atom from which the clause can reach
    a head in ``elem``, with every body atom kept inside ``restriction``."""
    head = clause.head
    parts: list[Formula] = [clause.constraint, elem.get(head.pred.name).formula(head.args)]
    for app in clause.body:
        parts.append(restriction.get(app.pred.name).formula(app.args))
    return formula_box(conj(parts), clause.body[position].args, cap)
