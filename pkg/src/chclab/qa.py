"""Query-answer transformation and the analyses built on it.

The transformation splits every predicate ``p`` into a query predicate
(tuples the goal search asks about) and an answer predicate (queried
tuples that are also derivable), so that a single forward analysis of
the transformed system simulates goal-directed propagation.  On top of
it sit the two-phase strengthened analysis and the transformation-based
emulation of the forward/backward alternation, both for comparison with
the native alternating solver.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domain import AbstractElement, Box
from .solver import (
    AlternationTrace,
    AnalysisConfig,
    RefinedModel,
    Verdict,
    analyze_forward,
    certify_trace,
    default_goal,
    goal_element,
    refined_model,
)
from .syntax import (
    Clause,
    GoalEntry,
    GoalSpec,
    PredApp,
    PredDecl,
    System,
    conj,
)


@dataclass(frozen=True)
class QAPredPair:
    orig: str
    query: str
    answer: str


@dataclass(frozen=True)
class QASystem:
    system: System
    pairs: tuple[QAPredPair, ...]

    def query_name(self, orig: str) -> str:
        return self._pair(orig).query

    def answer_name(self, orig: str) -> str:
        return self._pair(orig).answer

    def _pair(self, orig: str) -> QAPredPair:
        for p in self.pairs:
            if p.orig == orig:
                return p
        raise KeyError(orig)


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def qa_transform(system: System, goal: GoalSpec | None = None) -> QASystem:
    """Split predicates into query/answer pairs and rewrite the clauses.

    Every original clause yields one answer clause (derivable and
    queried) and one query clause per body atom (the goal search
    descends into the i-th premise once the earlier premises have
    answers).  Goal entries seed the query predicates.
    """
    spec = goal if goal is not None else default_goal(system)
    taken = {d.name for d in system.decls} | {"false"}
    pairs = []
    decls: dict[str, tuple[PredDecl, PredDecl]] = {}
    for d in system.decls:
        q = PredDecl(_fresh(f"{d.name}_q", taken), d.arity)
        a = PredDecl(_fresh(f"{d.name}_a", taken), d.arity)
        pairs.append(QAPredPair(d.name, q.name, a.name))
        decls[d.name] = (q, a)

    def q_app(app: PredApp) -> PredApp:
        return PredApp(decls[app.pred.name][0], app.args)

    def a_app(app: PredApp) -> PredApp:
        return PredApp(decls[app.pred.name][1], app.args)

    clauses: list[Clause] = []
    for clause in system.clauses:
        answers = tuple(a_app(app) for app in clause.body)
        clauses.append(
            Clause((q_app(clause.head), *answers), clause.constraint, a_app(clause.head))
        )
        for i, app in enumerate(clause.body):
            clauses.append(
                Clause(
                    (q_app(clause.head), *answers[:i]),
                    clause.constraint,
                    q_app(app),
                )
            )
    for entry in spec.entries:
        clauses.append(Clause((), entry.guard, q_app(entry.app)))

    flat = [decl for pair in decls.values() for decl in pair]
    qa_goal = GoalSpec(
        tuple(GoalEntry(a_app(entry.app), entry.guard) for entry in spec.entries)
    )
    qa_system = System.make(flat, tuple(clauses), system.universe, qa_goal)
    return QASystem(qa_system, tuple(pairs))


def _project(qa: QASystem, element: AbstractElement, system: System, which: str) -> AbstractElement:
    """Pull the query or answer boxes back onto the original predicates."""
    boxes: dict[str, Box] = {}
    for pair in qa.pairs:
        name = pair.query if which == "query" else pair.answer
        boxes[pair.orig] = element.get(name)
    # The transformed system has its own (never derived) falsity.
    for name, box in element.items:
        if name not in {p.query for p in qa.pairs} | {p.answer for p in qa.pairs}:
            assert box.is_empty
    return AbstractElement.of(boxes)


def qa_two_step(
    system: System,
    goal: GoalSpec | None = None,
    config: AnalysisConfig = AnalysisConfig(),
) -> tuple[AbstractElement, Verdict]:
    """Analyze the transformed system, then the strengthened original.

    The answer boxes of the first run are conjoined into the matching
    clause heads, and the second forward run is kept inside them; the
    returned model maps every predicate to "queried implies covered".
    """
    spec = goal if goal is not None else default_goal(system)
    qa = qa_transform(system, spec)
    qa_element = analyze_forward(qa.system, None, config)
    answers = _project(qa, qa_element, system, "answer")
    queries = _project(qa, qa_element, system, "query")

    strengthened_clauses = tuple(
        Clause(
            clause.body,
            conj(
                [
                    clause.constraint,
                    answers.get(clause.head.pred.name).formula(clause.head.args),
                ]
            ),
            clause.head,
        )
        for clause in system.clauses
    )
    strengthened = System(system.decls, strengthened_clauses, system.universe, system.goal)
    final = analyze_forward(strengthened, answers, config)

    g = goal_element(system, spec)
    safe = g.meet(final).is_bottom
    model = RefinedModel(final, ((AbstractElement.top(system), queries),))
    return final, Verdict("SAFE" if safe else "UNKNOWN", model, 2)


def _strengthen_heads(system: System, b: AbstractElement) -> System:
    clauses = tuple(
        Clause(
            clause.body,
            conj(
                [clause.constraint, b.get(clause.head.pred.name).formula(clause.head.args)]
            ),
            clause.head,
        )
        for clause in system.clauses
    )
    return System(system.decls, clauses, system.universe, system.goal)


def _reverse_system(system: System, d: AbstractElement, spec: GoalSpec) -> System:
    """The backward pass as a forward system: clauses run head-to-body
    under the current forward boxes, seeded by the goal where the
    forward analysis reaches it."""
    clauses: list[Clause] = []
    for clause in system.clauses:
        if not clause.body:
            continue
        gate = conj(
            [clause.constraint]
            + [d.get(app.pred.name).formula(app.args) for app in clause.body]
        )
        for app in clause.body:
            clauses.append(Clause((clause.head,), gate, app))
    for entry in spec.entries:
        seed = conj(
            [entry.guard, d.get(entry.app.pred.name).formula(entry.app.args)]
        )
        clauses.append(Clause((), seed, entry.app))
    return System(system.decls, tuple(clauses), system.universe, None)


def qa_iterated(
    system: System,
    goal: GoalSpec | None = None,
    config: AnalysisConfig = AnalysisConfig(),
) -> tuple[AlternationTrace, Verdict]:
    """Emulate the alternation purely by system transformations.

    Forward elements come from analyzing the original system with the
    previous backward boxes conjoined into every clause head; backward
    elements from a forward analysis of the reversed, forward-gated
    system.  Unlike the native alternation, no cross-iteration
    restriction is imposed, so widening may overshoot between rounds —
    which is the precision difference this mode exists to demonstrate.
    """
    spec = goal if goal is not None else default_goal(system)
    bottom = AbstractElement.bottom(system)
    trace = AlternationTrace(bs=[AbstractElement.top(system)])
    safe = False
    rounds = 0
    for i in range(1, config.max_rounds + 1):
        rounds = i
        d = analyze_forward(_strengthen_heads(system, trace.bs[-1]), None, config)
        trace.ds.append(d)
        if d.is_bottom:
            safe = True
            break
        b = analyze_forward(_reverse_system(system, d, spec), None, config)
        trace.bs.append(b)
        if b.is_bottom:
            trace.ds.append(bottom)
            safe = True
            break
        if i >= 2 and d == trace.ds[-2] and b == trace.bs[-2]:
            break
    trace.certs = certify_trace(system, goal_element(system, spec), trace)
    model = refined_model(trace)
    return trace, Verdict("SAFE" if safe else "UNKNOWN", model, rounds)
