"""Alternating forward/backward interval analyses with certificates.

The forward analysis computes, per predicate, a box containing every
derivable tuple allowed by a restriction; the backward analysis
computes boxes containing every tuple from which a goal is reachable
while staying inside a restriction.  :func:`alternate` interleaves the
two, feeding each result to the next pass as the restriction, which
narrows both until the goal is proved unreachable (SAFE) or the
sequence stabilizes (UNKNOWN).

Every analysis result is re-certified by exact inclusion checks on the
final elements, so widening and iteration-order choices cannot affect
soundness, only precision.  From a full alternation trace a refined
model is composed; :func:`check_model` verifies any candidate model
independently, clause by clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .depgraph import dependency_order
from .domain import (
    AbstractElement,
    Box,
    clause_post,
    clause_pre_restricted,
    formula_box,
)
from .linlogic import is_sat, to_dnf, cube_is_sat, ConjCube
from .syntax import (
    Clause,
    Formula,
    GoalEntry,
    GoalSpec,
    PredApp,
    System,
    TRUE,
    conj,
    disj,
    format_clause,
    negate_formula,
    param_vars,
    rename_formula,
)


@dataclass(frozen=True)
class AnalysisConfig:
    max_rounds: int = 5
    widening_delay: int = 2
    descending_passes: int = 1
    start_direction: str = "forward"  # "forward" or "backward"
    coarse_first: bool = False


@dataclass(frozen=True)
class RoundCert:
    """Exact checks of one alternation round against the step laws."""

    forward_law: bool = True
    seed_law: bool = True
    backward_law: bool = True
    chain_law: bool = True

    @property
    def ok(self) -> bool:
        return self.forward_law and self.seed_law and self.backward_law and self.chain_law


@dataclass
class AlternationTrace:
    """The computed sequence d_1, b_1, d_2, ... plus the initial top."""

    ds: list[AbstractElement] = field(default_factory=list)
    bs: list[AbstractElement] = field(default_factory=list)
    certs: list[RoundCert] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return all(c.ok for c in self.certs)


@dataclass(frozen=True)
class RefinedModel:
    """The last forward element plus the earlier (d, b) layers.

    Denotes the union of the final element with everything each earlier
    forward element covers beyond the matching backward element; that
    union is a model whenever the trace satisfies the step laws.
    """

    final: AbstractElement
    layers: tuple[tuple[AbstractElement, AbstractElement], ...]

    def as_dict(self) -> dict[str, Formula]:
        """Negation-free formulas over positional variables X1, X2, ..."""
        out: dict[str, Formula] = {}
        for name, box in self.final.items:
            variables = param_vars(box.arity)
            parts: list[Formula] = [box.formula(variables)]
            for d, b in self.layers:
                parts.append(
                    conj(
                        [
                            d.get(name).formula(variables),
                            b.get(name).complement(variables),
                        ]
                    )
                )
            # Unsatisfiable layers add nothing; drop them for readability.
            out[name] = disj([p for p in parts if is_sat(p)])
        return out


@dataclass(frozen=True)
class Verdict:
    status: str  # "SAFE" or "UNKNOWN"
    witness: RefinedModel
    rounds_used: int

    @property
    def safe(self) -> bool:
        return self.status == "SAFE"


def default_goal(system: System) -> GoalSpec:
    """The declared goal, or reaching the falsity predicate."""
    if system.goal is not None:
        return system.goal
    return GoalSpec((GoalEntry(PredApp(system.falsity, ()), TRUE),))


def goal_element(system: System, goal: GoalSpec | None = None) -> AbstractElement:
    """Tightest element whose concretization covers the goal atoms."""
    spec = goal if goal is not None else default_goal(system)
    elem = AbstractElement.bottom(system)
    for entry in spec.entries:
        name = entry.app.pred.name
        box = formula_box(entry.guard, entry.app.args)
        elem = elem.with_box(name, elem.get(name).join(box))
    return elem


def _clauses_by_head(system: System) -> dict[str, list[Clause]]:
    out: dict[str, list[Clause]] = {d.name: [] for d in system.decls}
    for clause in system.clauses:
        out[clause.head.pred.name].append(clause)
    return out


def _body_positions(system: System) -> dict[str, list[tuple[Clause, int]]]:
    out: dict[str, list[tuple[Clause, int]]] = {d.name: [] for d in system.decls}
    for clause in system.clauses:
        for j, app in enumerate(clause.body):
            out[app.pred.name].append((clause, j))
    return out


def _solve_components(system, components, flow, start, restriction, config):
    """Generic chaotic iteration with delayed widening and narrowing.

    ``flow(pred, elem)`` must be monotone in ``elem`` and bounded by the
    restriction; the result satisfies ``flow(p, result) <= result[p]``
    for every predicate (checked by the callers).
    """
    elem = start
    for comp in components:
        if not comp.recursive:
            for p in comp.preds:
                elem = elem.with_box(p, flow(p, elem))
            continue
        joins = {p: 0 for p in comp.preds}
        while True:
            changed = False
            for p in comp.preds:
                new = flow(p, elem)
                cur = elem.get(p)
                if new.leq(cur):
                    continue
                grown = cur.join(new)
                joins[p] += 1
                if joins[p] > config.widening_delay:
                    # Clip widening overshoot right away; the restriction
                    # is constant, so this cannot oscillate.
                    grown = cur.widen(grown).meet(restriction.get(p))
                elem = elem.with_box(p, grown)
                changed = True
            if not changed:
                break
        for _ in range(config.descending_passes):
            for p in comp.preds:
                elem = elem.with_box(p, flow(p, elem))
    return elem


def analyze_forward(
    system: System,
    restriction: AbstractElement | None = None,
    config: AnalysisConfig = AnalysisConfig(),
) -> AbstractElement:
    """Boxes covering everything derivable within ``restriction``."""
    r = restriction if restriction is not None else AbstractElement.top(system)
    heads = _clauses_by_head(system)

    def flow(p: str, elem: AbstractElement) -> Box:
        acc = Box.empty(r.get(p).arity)
        for clause in heads[p]:
            acc = acc.join(clause_post(clause, elem))
        return acc.meet(r.get(p))

    result = _solve_components(
        system,
        dependency_order(system),
        flow,
        AbstractElement.bottom(system),
        r,
        config,
    )
    for name, _ in result.items:
        if not flow(name, result).leq(result.get(name)):
            raise AssertionError(f"forward result not inductive at {name}")
    return result


def analyze_backward(
    system: System,
    goal_elem: AbstractElement,
    restriction: AbstractElement | None = None,
    config: AnalysisConfig = AnalysisConfig(),
) -> AbstractElement:
    """Boxes covering everything inside ``restriction`` that can reach
    the goal element through body atoms also inside ``restriction``."""
    r = restriction if restriction is not None else AbstractElement.top(system)
    seed = goal_elem.meet(r)
    positions = _body_positions(system)

    def flow(p: str, elem: AbstractElement) -> Box:
        acc = seed.get(p)
        for clause, j in positions[p]:
            acc = acc.join(clause_pre_restricted(clause, j, r, elem))
        return acc

    result = _solve_components(
        system,
        list(reversed(dependency_order(system))),
        flow,
        seed,
        r,
        config,
    )
    for name, _ in result.items:
        if not flow(name, result).leq(result.get(name)):
            raise AssertionError(f"backward result not inductive at {name}")
    return result


def coarse_backward(system: System, goal: GoalSpec | None = None):
    """Predicates from which a goal predicate is reachable in the
    clause graph; a cheap predicate-level backward approximation."""
    spec = goal if goal is not None else default_goal(system)
    relevant = {entry.app.pred.name for entry in spec.entries}
    changed = True
    while changed:
        changed = False
        for clause in system.clauses:
            if clause.head.pred.name in relevant:
                for app in clause.body:
                    if app.pred.name not in relevant:
                        relevant.add(app.pred.name)
                        changed = True
    return frozenset(system.decl(name) for name in relevant)


def _coarse_element(system: System, goal: GoalSpec | None) -> AbstractElement:
    members = {d.name for d in coarse_backward(system, goal)}
    boxes = {}
    for d in system.decls:
        boxes[d.name] = Box.top(d.arity) if d.name in members else Box.empty(d.arity)
    return AbstractElement.of(boxes)


def alternate(
    system: System,
    goal: GoalSpec | None = None,
    config: AnalysisConfig = AnalysisConfig(),
) -> tuple[AlternationTrace, Verdict]:
    """Run the alternating analysis and certify the whole trace.

    SAFE means some element of the sequence became empty, which proves
    the goal unreachable; otherwise UNKNOWN is returned once the
    sequence stabilizes or the round budget runs out.  In both cases a
    refined model is composed from the trace.
    """
    spec = goal if goal is not None else default_goal(system)
    g = goal_element(system, spec)
    bottom = AbstractElement.bottom(system)
    trace = AlternationTrace(bs=[AbstractElement.top(system)])
    safe = False
    rounds = 0
    for i in range(1, config.max_rounds + 1):
        rounds = i
        backward_start = config.start_direction == "backward" or config.coarse_first
        if i == 1 and backward_start:
            d = AbstractElement.top(system)
        else:
            d = analyze_forward(system, trace.bs[-1], config)
        trace.ds.append(d)
        if d.is_bottom:
            safe = True
            break
        if i == 1 and config.coarse_first:
            b = _coarse_element(system, spec).meet(d)
        else:
            b = analyze_backward(system, g, d, config)
        trace.bs.append(b)
        if b.is_bottom:
            trace.ds.append(bottom)  # the next forward pass would be empty
            safe = True
            break
        if i >= 2 and d == trace.ds[-2] and b == trace.bs[-2]:
            break
    trace.certs = certify_trace(system, g, trace)
    model = refined_model(trace)
    return trace, Verdict("SAFE" if safe else "UNKNOWN", model, rounds)


def certify_trace(system: System, g: AbstractElement, trace: AlternationTrace) -> list[RoundCert]:
    """Exact per-round inclusion checks of the alternation laws."""
    heads = _clauses_by_head(system)
    positions = _body_positions(system)
    certs: list[RoundCert] = []
    for i, d in enumerate(trace.ds, start=1):
        b_prev = trace.bs[i - 1]
        forward_ok = True
        for name, box in d.items:
            acc = Box.empty(box.arity)
            for clause in heads[name]:
                acc = acc.join(clause_post(clause, d))
            if not acc.meet(b_prev.get(name)).leq(box):
                forward_ok = False
        b = trace.bs[i] if i < len(trace.bs) else None
        if b is None:
            certs.append(RoundCert(forward_law=forward_ok))
            continue
        seed_ok = g.meet(d).leq(b)
        backward_ok = True
        for name, box in b.items:
            acc = Box.empty(box.arity)
            for clause, j in positions[name]:
                acc = acc.join(clause_pre_restricted(clause, j, d, b))
            if not acc.leq(box):
                backward_ok = False
        chain_ok = b.leq(d) and d.leq(b_prev)
        certs.append(RoundCert(forward_ok, seed_ok, backward_ok, chain_ok))
    return certs


def refined_model(trace: AlternationTrace) -> RefinedModel:
    """Package a trace into its model: the last forward element plus,
    for every earlier round, what the forward element covered beyond
    the matching backward element (those tuples cannot reach the goal,
    so keeping all of them preserves model-ness)."""
    k = len(trace.ds)
    layers = tuple((trace.ds[i - 1], trace.bs[i]) for i in range(1, k))
    return RefinedModel(trace.ds[k - 1], layers)


@dataclass
class ModelCheckResult:
    ok: bool
    violations: list[tuple[int, str, str]] = field(default_factory=list)
    # (clause index, clause text, satisfiable witness cube)

    def __bool__(self) -> bool:
        return self.ok


def check_model(system: System, model) -> ModelCheckResult:
    """Clause-by-clause verification of a candidate model.

    For each clause, body formulas plus the constraint must entail the
    head formula: the conjunction with the negated head formula has to
    be unsatisfiable.  Violations carry a witness cube.
    """
    formulas = model.as_dict() if isinstance(model, RefinedModel) else dict(model)
    violations: list[tuple[int, str, str]] = []
    for idx, clause in enumerate(system.clauses):
        parts: list[Formula] = [clause.constraint]
        for app in clause.body:
            parts.append(_instantiate(formulas[app.pred.name], app))
        parts.append(negate_formula(_instantiate(formulas[clause.head.pred.name], clause.head)))
        for cube in to_dnf(conj(parts)):
            if cube_is_sat(cube):
                violations.append((idx, format_clause(clause), str(cube)))
                break
    return ModelCheckResult(not violations, violations)


def goal_disjoint(system: System, model, goal: GoalSpec | None = None) -> bool:
    """Is the model disjoint from every goal instance?"""
    formulas = model.as_dict() if isinstance(model, RefinedModel) else dict(model)
    spec = goal if goal is not None else default_goal(system)
    for entry in spec.entries:
        f = conj([entry.guard, _instantiate(formulas[entry.app.pred.name], entry.app)])
        if is_sat(f):
            return False
    return True


def _instantiate(formula: Formula, app: PredApp) -> Formula:
    mapping = dict(zip(param_vars(app.pred.arity), app.args))
    return rename_formula(formula, mapping)
