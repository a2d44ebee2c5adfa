"""Exact reasoning about negation-free linear rational formulas.

Formulas are converted to disjunctive normal form (lists of conjunctive
cubes) under a configurable cube cap, and cubes are decided or projected
by Fourier-Motzkin elimination with exact ``Fraction`` arithmetic.
Equalities are eliminated by substitution before inequalities are
paired, which keeps intermediate systems small.  Combining a strict
with a non-strict inequality yields a strict one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .syntax import (
    And,
    FalseF,
    Formula,
    Lin,
    LinConstraint,
    Or,
    Rel,
    TrueF,
)

DEFAULT_CUBE_CAP = 4096


class ResourceLimitError(Exception):
    """An enumeration or conversion exceeded its configured cap."""


@dataclass(frozen=True)
class ConjCube:
    """A conjunction of linear constraints, deduplicated and sorted."""

    cons: tuple[LinConstraint, ...]

    @staticmethod
    def make(cons) -> ConjCube:
        return ConjCube(tuple(sorted(set(cons), key=lambda c: c.key())))

    @property
    def vars(self) -> frozenset[str]:
        out: set[str] = set()
        for c in self.cons:
            out.update(c.vars)
        return frozenset(out)

    def __str__(self) -> str:
        if not self.cons:
            return "true"
        return ", ".join(str(c) for c in self.cons)


def to_dnf(formula: Formula, cap: int = DEFAULT_CUBE_CAP) -> list[ConjCube]:
    """Disjunctive normal form as a list of cubes.

    ``true`` yields one empty cube, ``false`` yields no cube.  Raises
    :class:`ResourceLimitError` when an intermediate cube count exceeds
    ``cap``.
    """

    def go(f: Formula) -> list[tuple[LinConstraint, ...]]:
        if isinstance(f, TrueF):
            return [()]
        if isinstance(f, FalseF):
            return []
        if isinstance(f, Lin):
            return [(f.con,)]
        if isinstance(f, And):
            acc: list[tuple[LinConstraint, ...]] = [()]
            for child in f.items:
                branches = go(child)
                nxt = [a + b for a in acc for b in branches]
                if len(nxt) > cap:
                    raise ResourceLimitError(
                        f"DNF conversion exceeded {cap} cubes"
                    )
                acc = nxt
            return acc
        if isinstance(f, Or):
            acc = []
            for child in f.items:
                acc.extend(go(child))
                if len(acc) > cap:
                    raise ResourceLimitError(
                        f"DNF conversion exceeded {cap} cubes"
                    )
            return acc
        raise TypeError(f"not a formula: {f!r}")

    return [ConjCube.make(cs) for cs in go(formula)]


def fm_eliminate(cube: ConjCube, var: str) -> ConjCube:
    """Eliminate ``var`` from ``cube``, preserving satisfiability.

    If an equality mentions ``var`` it is solved for ``var`` and
    substituted; otherwise lower/upper inequality pairs are combined.
    Ground consequences (e.g. ``3 <= 2``) are retained so infeasibility
    stays observable.
    """
    free: list[LinConstraint] = []
    eqs: list[LinConstraint] = []
    lowers: list[LinConstraint] = []
    uppers: list[LinConstraint] = []
    for c in cube.cons:
        a = c.term.coeff(var)
        if a == 0:
            free.append(c)
        elif c.rel is Rel.EQ:
            eqs.append(c)
        elif a > 0:
            uppers.append(c)
        else:
            lowers.append(c)

    if eqs:
        pivot = min(eqs, key=lambda c: c.key())
        a = pivot.term.coeff(var)
        # pivot: a*var + rest = 0  =>  var = rest / (-a)
        replacement = pivot.term.drop(var).scale(Fraction(-1) / a)
        out = []
        for c in cube.cons:
            if c is pivot:
                continue
            out.append(LinConstraint(c.term.subst(var, replacement), c.rel))
        return ConjCube.make(out)

    out = list(free)
    for lo in lowers:
        al = lo.term.coeff(var)  # negative
        for up in uppers:
            au = up.term.coeff(var)  # positive
            combined = lo.term.scale(au) + up.term.scale(-al)
            rel = Rel.LT if (lo.rel is Rel.LT or up.rel is Rel.LT) else Rel.LE
            out.append(LinConstraint(combined, rel))
    return ConjCube.make(out)


def cube_is_sat(cube: ConjCube) -> bool:
    """Exact satisfiability of a cube over the rationals."""
    current = cube
    while True:
        for c in current.cons:
            if not c.term.coeffs and not c.rel.holds(c.term.const):
                return False
        remaining = sorted(current.vars)
        if not remaining:
            return True
        current = fm_eliminate(current, remaining[0])


def is_sat(formula: Formula, cap: int = DEFAULT_CUBE_CAP) -> bool:
    return any(cube_is_sat(cube) for cube in to_dnf(formula, cap))


# A one-sided bound: (value, strict); value None means unbounded.
RawBound = tuple[Fraction | None, bool]

_UNBOUNDED: RawBound = (None, True)


def _tighten_lower(cur: RawBound, cand: RawBound) -> RawBound:
    if cand[0] is None:
        return cur
    if cur[0] is None or cand[0] > cur[0]:
        return cand
    if cand[0] == cur[0]:
        return (cur[0], cur[1] or cand[1])
    return cur


def _tighten_upper(cur: RawBound, cand: RawBound) -> RawBound:
    if cand[0] is None:
        return cur
    if cur[0] is None or cand[0] < cur[0]:
        return cand
    if cand[0] == cur[0]:
        return (cur[0], cur[1] or cand[1])
    return cur


def project_to_box(
    cube: ConjCube, variables
) -> list[tuple[RawBound, RawBound]] | None:
    """Tightest per-variable interval bounds of a cube.

    Returns ``None`` when the cube is unsatisfiable; otherwise one
    ``(lower, upper)`` pair per requested variable, where each side is a
    ``(value, strict)`` pair and ``value None`` means unbounded.
    Variables not mentioned by the cube come back unbounded.
    """
    if not cube_is_sat(cube):
        return None
    result: list[tuple[RawBound, RawBound]] = []
    for v in variables:
        current = cube
        while True:
            others = sorted(current.vars - {v})
            if not others:
                break
            current = fm_eliminate(current, others[0])
        lo: RawBound = _UNBOUNDED
        hi: RawBound = _UNBOUNDED
        for c in current.cons:
            a = c.term.coeff(v)
            if a == 0:
                # Ground consequence of a satisfiable cube: always true.
                continue
            value = -c.term.const / a
            if c.rel is Rel.EQ:
                lo = _tighten_lower(lo, (value, False))
                hi = _tighten_upper(hi, (value, False))
            elif a > 0:
                hi = _tighten_upper(hi, (value, c.rel is Rel.LT))
            else:
                lo = _tighten_lower(lo, (value, c.rel is Rel.LT))
        result.append((lo, hi))
    return result
