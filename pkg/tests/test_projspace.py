"""Exhaustive projective geometry oracles over small prime fields."""

import pytest

from projcirc.circuit import BlockSpec, CircuitBuilder
from projcirc.errors import BudgetExceeded, ShapeMismatch
from projcirc.field import GF
from projcirc.plinear import constant_component, identity_map, padding_map
from projcirc.projspace import (
    ProjPoint,
    apply_plinear,
    canonicalize,
    enumerate_points,
    exists_witness,
    n_points,
    parse_point,
    parse_point_set,
    project,
    pullback,
    segre,
    serialize_point_set,
    zero_set,
)


def test_point_canonicalization():
    p = canonicalize(5, [[2, 4], [0, 3]])
    assert p.components == ((1, 2), (0, 1))
    assert str(p) == "[1:2]x[0:1]"


def test_zero_component_rejected():
    with pytest.raises(ShapeMismatch):
        ProjPoint(3, ((0, 0), (1, 0)))


def test_enumeration_counts():
    assert len(enumerate_points([1], 3)) == n_points(1, 3) == 4
    assert len(enumerate_points([2], 2)) == 7
    assert len(enumerate_points([1, 1], 3)) == 16


def test_budget_enforced():
    with pytest.raises(BudgetExceeded):
        enumerate_points([3, 3], 5, budget=100)


def test_zero_set_of_line():
    b = CircuitBuilder(BlockSpec.of(("x", 3)), GF(3))
    b.set_outputs([b.add_sum([(1, b.var(0, 0)), (1, b.var(0, 1))])])
    S = zero_set(b.build(), 3)
    assert all(int(p.components[0][0] + p.components[0][1]) % 3 == 0 for p in S.points)
    assert len(S) == 4


def test_project_forgets_components():
    S = enumerate_points([1, 2], 2)
    P = project(S, [1])
    assert P.dims == (2,) and len(P) == 7


def test_segre_of_product_point():
    p = canonicalize(3, [[1, 2], [1, 1]])
    s = segre(p)
    assert s.dims == (3,)
    assert s.components[0] == (1, 1, 2, 2)


def test_apply_plinear_identity_and_padding():
    blocks = BlockSpec.of(("x", 2))
    p = canonicalize(5, [[1, 3]])
    assert apply_plinear(identity_map(blocks, GF(5)), p) == p
    big = apply_plinear(padding_map(GF(5), 2, 4), p)
    assert big.components[0] == (1, 3, 0, 0)


def test_pullback_of_constant_in_target_set():
    field = GF(3)
    m = padding_map(field, 2, 3)
    target = {parse_point("[1:0:0]", 3)}
    S = pullback(m, lambda q: q in target, [1], 3)
    assert [str(p) for p in S.points] == ["[1:0]"]


def test_exists_witness_det():
    b = CircuitBuilder(BlockSpec.of(("x", 2), ("y", 2)), GF(3))
    p1 = b.add_prod([(1, b.var(0, 0)), (1, b.var(1, 1))])
    p2 = b.add_prod([(1, b.var(0, 1)), (1, b.var(1, 0))])
    b.set_outputs([b.add_sum([(1, p1), (-1, p2)])])
    c = b.build()
    # det(x, y) = 0 has a witness y (y parallel to x) for every x
    for x in [(1, 0), (1, 1), (0, 1), (1, 2)]:
        assert exists_witness(c, {"x": x}, "y", 3)


def test_point_set_roundtrip():
    S = enumerate_points([1, 1], 2)
    again = parse_point_set(serialize_point_set(S))
    assert again == S
