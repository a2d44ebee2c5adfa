"""Abstract syntax for constrained Horn clause systems.

The object model is intentionally small and immutable:

* linear terms over named variables with exact rational coefficients,
* negation-free formulas built from linear comparisons with ``and``/``or``,
* clauses ``B1, ..., Bn | phi -> H`` whose head is either a predicate
  application or the distinguished 0-ary falsity predicate,
* systems bundling declarations, clauses, an optional finite universe
  (used by the enumerating reference semantics) and an optional goal.

Everything here is hashable so clauses and formulas can live in sets.
Pretty-printers produce text that re-parses to an equal object.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union


def rat(value: int | str | Fraction) -> Fraction:
    """Coerce ``value`` to an exact rational."""
    return value if isinstance(value, Fraction) else Fraction(value)


def format_rat(value: Fraction) -> str:
    return str(value)


# ---------------------------------------------------------------------------
# Linear terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinTerm:
    """A linear expression ``sum(coeff * var) + const`` over rationals.

    ``coeffs`` is kept sorted by variable name with zero coefficients
    dropped, so structural equality coincides with mathematical equality.
    """

    coeffs: tuple[tuple[str, Fraction], ...] = ()
    const: Fraction = Fraction(0)

    @staticmethod
    def make(
        coeffs: Mapping[str, Fraction] | Iterable[tuple[str, Fraction]] = (),
        const: int | Fraction = 0,
    ) -> LinTerm:
        if isinstance(coeffs, Mapping):
            coeffs = coeffs.items()
        acc: dict[str, Fraction] = {}
        for var, c in coeffs:
            acc[var] = acc.get(var, Fraction(0)) + rat(c)
        items = tuple(sorted((v, c) for v, c in acc.items() if c != 0))
        return LinTerm(items, rat(const))

    @staticmethod
    def var(name: str) -> LinTerm:
        return LinTerm(((name, Fraction(1)),))

    @staticmethod
    def constant(value: int | Fraction) -> LinTerm:
        return LinTerm((), rat(value))

    def coeff(self, var: str) -> Fraction:
        for v, c in self.coeffs:
            if v == var:
                return c
        return Fraction(0)

    @property
    def vars(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def as_var(self) -> str | None:
        """Return the variable name if this term is a bare variable."""
        if self.const == 0 and len(self.coeffs) == 1 and self.coeffs[0][1] == 1:
            return self.coeffs[0][0]
        return None

    def drop(self, var: str) -> LinTerm:
        return LinTerm(tuple((v, c) for v, c in self.coeffs if v != var), self.const)

    def scale(self, k: int | Fraction) -> LinTerm:
        k = rat(k)
        if k == 0:
            return LinTerm()
        return LinTerm(tuple((v, c * k) for v, c in self.coeffs), self.const * k)

    def __add__(self, other: LinTerm) -> LinTerm:
        acc = dict(self.coeffs)
        for v, c in other.coeffs:
            acc[v] = acc.get(v, Fraction(0)) + c
        items = tuple(sorted((v, c) for v, c in acc.items() if c != 0))
        return LinTerm(items, self.const + other.const)

    def __sub__(self, other: LinTerm) -> LinTerm:
        return self + other.scale(-1)

    def __neg__(self) -> LinTerm:
        return self.scale(-1)

    def subst(self, var: str, replacement: LinTerm) -> LinTerm:
        """Substitute ``replacement`` for ``var``."""
        c = self.coeff(var)
        if c == 0:
            return self
        return self.drop(var) + replacement.scale(c)

    def rename(self, mapping: Mapping[str, str]) -> LinTerm:
        return LinTerm.make(
            [(mapping.get(v, v), c) for v, c in self.coeffs], self.const
        )

    def eval(self, env: Mapping[str, Fraction]) -> Fraction:
        total = self.const
        for v, c in self.coeffs:
            total += c * env[v]
        return total

    def __str__(self) -> str:
        if not self.coeffs:
            return format_rat(self.const)
        parts: list[str] = []
        for i, (v, c) in enumerate(self.coeffs):
            mag = abs(c)
            piece = v if mag == 1 else f"{format_rat(mag)}*{v}"
            if i == 0:
                parts.append(piece if c > 0 else f"-{piece}")
            else:
                parts.append(f"+ {piece}" if c > 0 else f"- {piece}")
        if self.const != 0:
            parts.append(
                f"+ {format_rat(self.const)}"
                if self.const > 0
                else f"- {format_rat(-self.const)}"
            )
        return " ".join(parts)


# ---------------------------------------------------------------------------
# Linear comparisons and formulas
# ---------------------------------------------------------------------------


class Rel(enum.Enum):
    """Comparison of a linear term against zero."""

    LE = "<="
    LT = "<"
    EQ = "="

    def holds(self, value: Fraction) -> bool:
        if self is Rel.LE:
            return value <= 0
        if self is Rel.LT:
            return value < 0
        return value == 0


@dataclass(frozen=True)
class LinConstraint:
    """The comparison ``term rel 0``."""

    term: LinTerm
    rel: Rel

    @property
    def vars(self) -> frozenset[str]:
        return self.term.vars

    def holds(self, env: Mapping[str, Fraction]) -> bool:
        return self.rel.holds(self.term.eval(env))

    def rename(self, mapping: Mapping[str, str]) -> LinConstraint:
        return LinConstraint(self.term.rename(mapping), self.rel)

    def key(self) -> tuple:
        """Deterministic sort key."""
        return (self.rel.value, self.term.coeffs, self.term.const)

    def formula(self) -> "Lin":
        return Lin(self)

    def __str__(self) -> str:
        if not self.term.coeffs:
            return f"{format_rat(self.term.const)} {self.rel.value} 0"
        lhs = str(LinTerm(self.term.coeffs))
        return f"{lhs} {self.rel.value} {format_rat(-self.term.const)}"


@dataclass(frozen=True)
class TrueF:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class FalseF:
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Lin:
    con: LinConstraint

    def __str__(self) -> str:
        return str(self.con)


@dataclass(frozen=True)
class And:
    items: tuple["Formula", ...]

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    items: tuple["Formula", ...]

    def __str__(self) -> str:
        return format_formula(self)


Formula = Union[TrueF, FalseF, Lin, And, Or]

TRUE = TrueF()
FALSE = FalseF()


def lin(term: LinTerm, rel: Rel) -> Lin:
    return Lin(LinConstraint(term, rel))


def conj(items: Iterable[Formula]) -> Formula:
    """Conjunction with flattening; drops ``true``, short-circuits ``false``."""
    flat: list[Formula] = []
    for f in items:
        if isinstance(f, TrueF):
            continue
        if isinstance(f, FalseF):
            return FALSE
        if isinstance(f, And):
            flat.extend(f.items)
        else:
            flat.append(f)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(items: Iterable[Formula]) -> Formula:
    """Disjunction with flattening; drops ``false``, short-circuits ``true``."""
    flat: list[Formula] = []
    for f in items:
        if isinstance(f, FalseF):
            continue
        if isinstance(f, TrueF):
            return TRUE
        if isinstance(f, Or):
            flat.extend(f.items)
        else:
            flat.append(f)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def formula_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, Lin):
        return f.con.vars
    return frozenset().union(*(formula_vars(g) for g in f.items))


def eval_formula(f: Formula, env: Mapping[str, Fraction]) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Lin):
        return f.con.holds(env)
    if isinstance(f, And):
        return all(eval_formula(g, env) for g in f.items)
    return any(eval_formula(g, env) for g in f.items)


def rename_formula(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Simultaneous variable renaming."""
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Lin):
        return Lin(f.con.rename(mapping))
    if isinstance(f, And):
        return And(tuple(rename_formula(g, mapping) for g in f.items))
    return Or(tuple(rename_formula(g, mapping) for g in f.items))


def negate_formula(f: Formula) -> Formula:
    """Negation-free complement (De Morgan over comparisons)."""
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Lin):
        t, r = f.con.term, f.con.rel
        if r is Rel.LE:  # not (t <= 0)  <=>  -t < 0
            return lin(-t, Rel.LT)
        if r is Rel.LT:  # not (t < 0)  <=>  -t <= 0
            return lin(-t, Rel.LE)
        # not (t = 0)  <=>  t < 0  or  -t < 0
        return disj([lin(t, Rel.LT), lin(-t, Rel.LT)])
    if isinstance(f, And):
        return disj(negate_formula(g) for g in f.items)
    return conj(negate_formula(g) for g in f.items)


# ---------------------------------------------------------------------------
# Predicates, clauses, systems
# ---------------------------------------------------------------------------

FALSITY_NAME = "false"


@dataclass(frozen=True)
class PredDecl:
    name: str
    arity: int
    is_false: bool = False

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class PredApp:
    """A predicate applied to argument *variables* (post-normalization)."""

    pred: PredDecl
    args: tuple[str, ...]

    def __str__(self) -> str:
        if not self.args:
            return self.pred.name
        return f"{self.pred.name}({', '.join(self.args)})"


@dataclass(frozen=True)
class Clause:
    """``body | constraint -> head`` with pairwise-distinct argument variables."""

    body: tuple[PredApp, ...]
    constraint: Formula
    head: PredApp

    @property
    def vars(self) -> frozenset[str]:
        vs = set(formula_vars(self.constraint))
        for app in (*self.body, self.head):
            vs.update(app.args)
        return frozenset(vs)

    def __str__(self) -> str:
        return format_clause(self)


@dataclass(frozen=True)
class GoalEntry:
    app: PredApp
    guard: Formula = TRUE


@dataclass(frozen=True)
class GoalSpec:
    entries: tuple[GoalEntry, ...]


@dataclass(frozen=True)
class System:
    """A conjunction of constrained Horn clauses.

    ``decls`` always contains the distinguished falsity declaration
    (exactly one entry has ``is_false``), even when no integrity
    constraint mentions it.  ``universe`` and ``goal`` are optional; a
    missing goal means "the falsity atom".
    """

    decls: tuple[PredDecl, ...]
    clauses: tuple[Clause, ...]
    universe: tuple[Fraction, ...] | None = None
    goal: GoalSpec | None = None

    @staticmethod
    def make(decls, clauses, universe=None, goal=None) -> "System":
        """Build a system, appending a falsity declaration if absent."""
        ds = tuple(decls)
        if not any(d.is_false for d in ds):
            name = FALSITY_NAME
            while any(d.name == name for d in ds):
                name += "_"
            ds += (PredDecl(name, 0, is_false=True),)
        return System(ds, tuple(clauses), universe, goal)

    def decl(self, name: str) -> PredDecl:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)

    @property
    def falsity(self) -> PredDecl:
        for d in self.decls:
            if d.is_false:
                return d
        raise ValueError("system lacks a falsity declaration")

    def clauses_with_head(self, name: str) -> list[Clause]:
        return [c for c in self.clauses if c.head.pred.name == name]

    def __str__(self) -> str:
        return format_system(self)


def param_vars(arity: int) -> tuple[str, ...]:
    """Canonical parameter names used for per-predicate formulas."""
    return tuple(f"X{i + 1}" for i in range(arity))


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def format_formula(f: Formula) -> str:
    """Render in full constraint syntax (commas for conjunction)."""
    if isinstance(f, (TrueF, FalseF, Lin)):
        return str(f)
    if isinstance(f, And):
        parts = [
            f"({format_formula(g)})" if isinstance(g, Or) else format_formula(g)
            for g in f.items
        ]
        return ", ".join(parts)
    parts = [
        f"({format_formula(g)})" if isinstance(g, And) else format_formula(g)
        for g in f.items
    ]
    return "; ".join(parts)


def _format_body_item(f: Formula) -> str:
    # A body item must not contain a top-level comma, and bare true/false
    # literals are only legal inside a parenthesized sub-formula.
    if isinstance(f, (And, TrueF, FalseF)):
        return f"({format_formula(f)})"
    return format_formula(f)


def format_clause(clause: Clause) -> str:
    items = [str(app) for app in clause.body]
    c = clause.constraint
    if isinstance(c, And):
        items.extend(_format_body_item(g) for g in c.items)
    elif not isinstance(c, TrueF):
        items.append(_format_body_item(c))
    head = str(clause.head)
    if items:
        return f"{head} :- {', '.join(items)}."
    return f"{head}."


def format_goal_entry(entry: GoalEntry) -> str:
    if isinstance(entry.guard, TrueF):
        return f"goal {entry.app}."
    return f"goal {entry.app} : {format_formula(entry.guard)}."


def format_system(system: System) -> str:
    lines: list[str] = []
    for d in system.decls:
        if not d.is_false:
            lines.append(f"pred {d.name}/{d.arity}.")
    if system.universe is not None:
        vals = ", ".join(format_rat(v) for v in system.universe)
        lines.append(f"universe {{{vals}}}.")
    for clause in system.clauses:
        lines.append(format_clause(clause))
    if system.goal is not None:
        for entry in system.goal.entries:
            lines.append(format_goal_entry(entry))
    return "\n".join(lines) + "\n"


def format_model(model: Mapping[str, Formula], system: System) -> str:
    """Render a per-predicate model in ``model p : <formula>.`` lines.

    Formulas range over the canonical parameters ``X1 .. Xn`` of each
    predicate.
    """
    lines = []
    for d in system.decls:
        f = model.get(d.name, FALSE)
        lines.append(f"model {d.name} : {format_formula(f)}.")
    return "\n".join(lines) + "\n"


def iter_formula_constraints(f: Formula) -> Iterator[LinConstraint]:
    if isinstance(f, Lin):
        yield f.con
    elif isinstance(f, (And, Or)):
        for g in f.items:
            yield from iter_formula_constraints(g)
