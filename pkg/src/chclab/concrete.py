"""Reference semantics by exhaustive enumeration over a finite universe.

Grounds every clause over the declared universe into a set of
consequences (premise set, conclusion), then computes the forward,
backward and combined collecting semantics as naive fixpoints of the
``post``/``pre`` operators.  Deliberately simple and independent of the
abstract analyses so it can act as an oracle for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping

from .linlogic import ResourceLimitError
from .syntax import (
    And,
    FalseF,
    Formula,
    GoalSpec,
    Lin,
    Or,
    System,
    TrueF,
    format_rat,
)

VALUATION_CAP = 10**6

Valuation = tuple[Fraction, ...]


@dataclass(frozen=True)
class GroundAtom:
    pred: str
    args: Valuation

    def key(self) -> tuple:
        return (self.pred, self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(format_rat(a) for a in self.args)})"


@dataclass(frozen=True)
class Consequence:
    """One ground clause instance: premises entail the conclusion."""

    premises: frozenset[GroundAtom]
    conclusion: GroundAtom


Interpretation = frozenset[GroundAtom]
GroundRelation = frozenset[Consequence]


def _compile(formula: Formula, index: Mapping[str, int]) -> Callable[[Valuation], bool]:
    """Compile a formula to a fast predicate on valuations."""
    if isinstance(formula, TrueF):
        return lambda vals: True
    if isinstance(formula, FalseF):
        return lambda vals: False
    if isinstance(formula, Lin):
        pairs = [(index[v], q) for v, q in formula.con.term.coeffs]
        const = formula.con.term.const
        holds = formula.con.rel.holds
        return lambda vals: holds(sum(q * vals[i] for i, q in pairs) + const)
    subs = [_compile(item, index) for item in formula.items]
    if isinstance(formula, And):
        return lambda vals: all(s(vals) for s in subs)
    return lambda vals: any(s(vals) for s in subs)


def ground_relation(system: System, cap: int = VALUATION_CAP) -> GroundRelation:
    if system.universe is None:
        raise ValueError("system declares no universe")
    uni = system.universe
    out: set[Consequence] = set()
    for clause in system.clauses:
        variables = sorted(clause.vars)
        index = {v: i for i, v in enumerate(variables)}
        if len(uni) ** len(variables) > cap:
            raise ResourceLimitError(
                f"grounding a clause needs more than {cap} valuations"
            )
        ok = _compile(clause.constraint, index)
        body_ix = [
            (app.pred.name, tuple(index[x] for x in app.args)) for app in clause.body
        ]
        head_name = clause.head.pred.name
        head_ix = tuple(index[x] for x in clause.head.args)
        for vals in product(uni, repeat=len(variables)):
            if not ok(vals):
                continue
            premises = frozenset(
                GroundAtom(name, tuple(vals[i] for i in ix)) for name, ix in body_ix
            )
            out.add(
                Consequence(premises, GroundAtom(head_name, tuple(vals[i] for i in head_ix)))
            )
    return frozenset(out)


def goal_atoms(system: System, goal: GoalSpec | None = None) -> Interpretation:
    """Ground instances of the goal; defaults to the falsity atom."""
    spec = goal if goal is not None else system.goal
    if spec is None:
        return frozenset([GroundAtom(system.falsity.name, ())])
    if system.universe is None:
        raise ValueError("system declares no universe")
    uni = system.universe
    out: set[GroundAtom] = set()
    for entry in spec.entries:
        variables = sorted(set(entry.app.args))
        index = {v: i for i, v in enumerate(variables)}
        ok = _compile(entry.guard, index)
        arg_ix = tuple(index[x] for x in entry.app.args)
        for vals in product(uni, repeat=len(variables)):
            if ok(vals):
                out.add(GroundAtom(entry.app.pred.name, tuple(vals[i] for i in arg_ix)))
    return frozenset(out)


def post(rel: GroundRelation, atoms: Iterable[GroundAtom]) -> Interpretation:
    xs = frozenset(atoms)
    return frozenset(c.conclusion for c in rel if c.premises <= xs)


def pre(rel: GroundRelation, atoms: Iterable[GroundAtom]) -> Interpretation:
    xs = frozenset(atoms)
    return frozenset(
        a for c in rel if c.conclusion in xs for a in c.premises
    )


def pre_restricted(
    rel: GroundRelation, restriction: Iterable[GroundAtom], atoms: Iterable[GroundAtom]
) -> Interpretation:
    """Premise atoms of instances whose premises all lie in ``restriction``."""
    xs = frozenset(atoms)
    rs = frozenset(restriction)
    return frozenset(
        a
        for c in rel
        if c.conclusion in xs and c.premises <= rs
        for a in c.premises
    )


def lfp_forward_rel(rel: GroundRelation) -> Interpretation:
    current: Interpretation = frozenset()
    while True:
        nxt = post(rel, current)
        if nxt == current:
            return current
        current = nxt


def lfp_backward_rel(rel: GroundRelation, goal: Interpretation) -> Interpretation:
    current: Interpretation = frozenset()
    while True:
        nxt = goal | pre(rel, current)
        if nxt == current:
            return current
        current = nxt


def lfp_combined_rel(rel: GroundRelation, goal: Interpretation) -> Interpretation:
    """Atoms both derivable and useful for deriving a goal atom."""
    forward = lfp_forward_rel(rel)
    current: Interpretation = frozenset()
    while True:
        nxt = (goal & forward) | pre_restricted(rel, forward, current)
        if nxt == current:
            return current
        current = nxt


def lfp_forward(system: System) -> Interpretation:
    """All derivable atoms: the least model of the system."""
    return lfp_forward_rel(ground_relation(system))


def lfp_backward(system: System, goal: Interpretation) -> Interpretation:
    """Atoms that may take part in some derivation of a goal atom."""
    return lfp_backward_rel(ground_relation(system), goal)


def lfp_combined(system: System, goal: Interpretation) -> Interpretation:
    """Derivable atoms that are also useful for deriving the goal."""
    return lfp_combined_rel(ground_relation(system), goal)


def is_model(system: System, atoms: Iterable[GroundAtom]) -> bool:
    xs = frozenset(atoms)
    return post(ground_relation(system), xs) <= xs


def check_combined_closure(system: System, goal: Interpretation | None = None) -> bool:
    """Combining the two fixpoints needs no further iteration.

    With ``M'`` the combined semantics, the least fixpoint of
    ``X -> post(X) & M'`` must already be ``M'`` itself.
    """
    rel = ground_relation(system)
    goal_set = goal if goal is not None else goal_atoms(system)
    combined = lfp_combined_rel(rel, goal_set)
    current: Interpretation = frozenset()
    while True:
        nxt = post(rel, current) & combined
        if nxt == current:
            break
        current = nxt
    return current == combined
