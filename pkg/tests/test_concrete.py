"""Finite-universe ground semantics: frozen examples and closure laws."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chclab.concrete import (
    GroundAtom,
    check_combined_closure,
    goal_atoms,
    ground_relation,
    is_model,
    lfp_backward,
    lfp_combined,
    lfp_forward,
    post,
    pre,
    pre_restricted,
)
from chclab.randgen import random_finite_system

F = Fraction


def p(*args):
    return GroundAtom("p", tuple(F(a) for a in args))


def atom_set(*atoms):
    return frozenset(atoms)


LADDER_FWD = atom_set(p(1), p(2), p(3), p(5))
LADDER_BWD = atom_set(p(1), p(2), p(3), p(4), p(5))
LADDER_COMBINED = atom_set(p(1), p(3), p(5))


def test_ladder_relation_contains_expected_consequences(ladder):
    rel = ground_relation(ladder)
    pairs = {(c.premises, c.conclusion) for c in rel}
    assert (frozenset(), p(1)) in pairs
    assert (frozenset({p(1)}), p(2)) in pairs
    assert (frozenset({p(2), p(4)}), p(5)) in pairs


def test_ladder_goal_atoms(ladder):
    assert goal_atoms(ladder) == atom_set(p(5))


def test_post_from_empty(ladder):
    rel = ground_relation(ladder)
    assert post(rel, frozenset()) == atom_set(p(1))


def test_pre_of_goal(ladder):
    rel = ground_relation(ladder)
    assert pre(rel, atom_set(p(5))) == atom_set(p(2), p(3), p(4))


def test_pre_restricted_blocks_underivable_premise(ladder):
    # the rule via p(2), p(4) needs p(4), which forward never derives
    rel = ground_relation(ladder)
    assert pre_restricted(rel, LADDER_FWD, atom_set(p(5))) == atom_set(p(3))


def test_ladder_fixpoints(ladder):
    assert lfp_forward(ladder) == LADDER_FWD
    goal = goal_atoms(ladder)
    assert lfp_backward(ladder, goal) == LADDER_BWD
    assert lfp_combined(ladder, goal) == LADDER_COMBINED


def test_combined_strictly_below_intersection(ladder):
    goal = goal_atoms(ladder)
    inter = lfp_forward(ladder) & lfp_backward(ladder, goal)
    combined = lfp_combined(ladder, goal)
    assert combined < inter
    assert p(2) in inter - combined


def test_lockstep_forward(lockstep):
    want = {
        GroundAtom("p", (F(0), F(0))),
        GroundAtom("p", (F(1), F(1))),
        GroundAtom("p", (F(2), F(2))),
    }
    assert lfp_forward(lockstep) == frozenset(want)


def test_is_model(ladder):
    assert is_model(ladder, lfp_forward(ladder))
    assert not is_model(ladder, frozenset())  # nothing satisfies the init clause
    assert not is_model(ladder, atom_set(p(1)))  # p(2), p(3) missing


def test_combined_closure_ladder(ladder):
    assert check_combined_closure(ladder)


def test_least_model_property(ladder):
    # the forward fixpoint is a model and is contained in itself after a step
    m = lfp_forward(ladder)
    rel = ground_relation(ladder)
    assert post(rel, m) <= m


def test_no_universe_raises(addition_loops):
    with pytest.raises(ValueError):
        ground_relation(addition_loops)


@given(st.integers(0, 10**9))
@settings(max_examples=80, deadline=None)
def test_post_pre_monotone(seed):
    system = random_finite_system(seed)
    rel = ground_relation(system)
    atoms = sorted(
        {c.conclusion for c in rel} | {a for c in rel for a in c.premises},
        key=lambda a: a.key(),
    )
    small = frozenset(atoms[: len(atoms) // 2])
    large = frozenset(atoms)
    assert post(rel, small) <= post(rel, large)
    assert pre(rel, small) <= pre(rel, large)
    assert pre_restricted(rel, small, small) <= pre(rel, small)


@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_combined_between_bounds(seed):
    system = random_finite_system(seed)
    goal = goal_atoms(system)
    fwd = lfp_forward(system)
    bwd = lfp_backward(system, goal)
    combined = lfp_combined(system, goal)
    assert combined <= fwd & bwd


@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_closure_on_random_finite_systems(seed):
    assert check_combined_closure(random_finite_system(seed))
