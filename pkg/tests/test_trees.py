"""Derivation trees: growth steps, closure properties, set-semantics agreement."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from chclab.concrete import (
    GroundAtom,
    goal_atoms,
    ground_relation,
    lfp_backward,
    lfp_forward,
    post,
)
from chclab.randgen import random_acyclic_system, random_finite_system
from chclab.trees import (
    DerivTree,
    atoms_abstraction,
    backward_trees,
    check_tree_props,
    forward_trees,
    subtrees,
    tree_post,
    tree_pre,
)

F = Fraction


def p(*args):
    return GroundAtom("p", tuple(F(a) for a in args))


def leaf(atom):
    return DerivTree(atom)


def test_tree_post_from_empty(ladder):
    rel = ground_relation(ladder)
    assert tree_post(rel, frozenset()) == frozenset({leaf(p(1))})


def test_forward_depth_one(ladder):
    assert forward_trees(ladder, depth=1) == frozenset({leaf(p(1))})


def test_tree_pre_expands_goal_leaf(ladder):
    rel = ground_relation(ladder)
    got = tree_pre(rel, frozenset({leaf(p(5))}))
    want = frozenset(
        {
            DerivTree(p(5), (leaf(p(3)),)),
            DerivTree(p(5), (leaf(p(2)), leaf(p(4)))),
        }
    )
    assert got == want


def test_backward_depth_one_is_goal_leaves(ladder):
    assert backward_trees(ladder, depth=1) == frozenset({leaf(p(5))})


def test_forward_trees_ladder_stable(ladder):
    # four complete derivations: p(1); p(2); p(3); p(5) via p(3)
    trees = forward_trees(ladder, depth=6)
    assert len(trees) == 4
    assert atoms_abstraction(trees) == lfp_forward(ladder)
    # the p(5) derivation through p(2), p(4) never completes
    assert all(t.root != p(4) for t in trees)


def test_backward_trees_ladder_stable(ladder):
    trees = backward_trees(ladder, depth=6)
    assert atoms_abstraction(trees) == lfp_backward(ladder, goal_atoms(ladder))


def test_forward_trees_are_subtree_closed(ladder):
    trees = forward_trees(ladder, depth=6)
    for t in trees:
        for sub in subtrees(t):
            assert sub in trees


def test_tree_props_ladder(ladder):
    report = check_tree_props(ladder, depth_cap=6)
    assert report.all_pass
    assert report.verdicts == {
        "forward": "PASS",
        "backward": "PASS",
        "combined": "PASS",
    }


def test_tree_props_skip_when_depth_too_small(ladder):
    report = check_tree_props(ladder, depth_cap=1)
    assert not report.all_pass
    assert "SKIPPED" in report.verdicts.values()
    assert report.all_ok  # skipped is not a failure


def test_tree_props_vacuous_without_init():
    system = random_acyclic_system(3)
    report = check_tree_props(system)
    assert report.all_pass


def test_step_law_on_closed_set(ladder):
    # on a stabilized tree set, growing trees then abstracting equals
    # abstracting then applying the ground one-step operator
    rel = ground_relation(ladder)
    trees = forward_trees(ladder, depth=6)
    grown = tree_post(rel, trees)
    assert atoms_abstraction(grown | trees) == post(rel, atoms_abstraction(trees)) | atoms_abstraction(trees)


@given(st.integers(0, 10**9))
@settings(max_examples=40, deadline=None)
def test_tree_props_on_acyclic_systems(seed):
    system = random_acyclic_system(seed)
    report = check_tree_props(system)
    assert report.all_pass, report.verdicts


@given(st.integers(0, 10**9))
@settings(max_examples=25, deadline=None)
def test_forward_abstraction_never_exceeds_fixpoint(seed):
    system = random_finite_system(seed)
    fwd = lfp_forward(system)
    for depth in (1, 2, 3):
        trees = forward_trees(system, depth)
        assert atoms_abstraction(trees) <= fwd
