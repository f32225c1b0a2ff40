"""Circuit IR: construction, validation, evaluation, pruning."""

import numpy as np
import pytest

from projcirc.circuit import (
    BlockSpec,
    CircuitBuilder,
    evaluate,
    evaluate_many,
    isomorphic,
    prune_dead,
    validate,
    validate_strict,
)
from projcirc.errors import InhomogeneousSum, LengthMismatch
from projcirc.field import GF, QQ


def det2(field):
    """x0*y1 - x1*y0 as a two-block circuit."""
    b = CircuitBuilder(BlockSpec.of(("x", 2), ("y", 2)), field)
    p1 = b.add_prod([(1, b.var(0, 0)), (1, b.var(1, 1))])
    p2 = b.add_prod([(1, b.var(0, 1)), (1, b.var(1, 0))])
    b.set_outputs([b.add_sum([(1, p1), (-1, p2)])])
    return b.build()


def test_block_offsets():
    blocks = BlockSpec.of(("x", 3), ("y", 2))
    assert blocks.total_vars == 5
    assert blocks.var_gate("y", 1) == 4
    assert blocks.var_of_gate(4) == (1, 1)


def test_size_is_edge_count():
    c = det2(QQ())
    assert c.size == 6
    assert validate(c).size == 6


def test_validate_degrees():
    c = det2(QQ())
    r = validate(c)
    assert r.homogeneous
    assert r.output_degrees == [(1, 1)]


def test_inhomogeneous_sum_detected():
    b = CircuitBuilder(BlockSpec.of(("x", 2)), QQ())
    p = b.add_prod([(1, b.var(0, 0)), (1, b.var(0, 1))])
    bad = b.add_sum([(1, b.var(0, 0)), (1, p)])
    b.set_outputs([bad])
    c = b.build()
    assert not validate(c).homogeneous
    with pytest.raises(InhomogeneousSum):
        validate_strict(c)


def test_evaluate_rational_and_prime_agree():
    cq = det2(QQ())
    cp = det2(GF(7))
    for x0, x1, y0, y1 in [(1, 2, 3, 4), (0, 1, 1, 0), (2, 2, 5, 6)]:
        vq = evaluate(cq, [[x0, x1], [y0, y1]])[0].value
        vp = evaluate(cp, [[x0, x1], [y0, y1]])[0].value
        assert int(vq) % 7 == vp


def test_evaluate_many_matches_single():
    c = det2(GF(11))
    pts = np.array([[1, 2], [2, 0], [3, 1], [4, 5]], dtype=np.int64)
    batch = evaluate_many(c, pts)
    for j in range(pts.shape[1]):
        single = evaluate(c, [pts[:2, j], pts[2:, j]])[0].value
        assert batch[0, j] == single


def test_evaluate_rejects_wrong_arity():
    c = det2(QQ())
    with pytest.raises(LengthMismatch):
        evaluate(c, [[1, 2, 3], [4, 5]])


def test_prune_dead_removes_unreachable():
    b = CircuitBuilder(BlockSpec.of(("x", 2)), GF(5))
    live = b.add_sum([(1, b.var(0, 0)), (2, b.var(0, 1))])
    b.add_sum([(3, b.var(0, 0))])  # dead
    b.set_outputs([live])
    c = b.build()
    pruned = prune_dead(c)
    assert pruned.ngates == c.ngates - 1
    assert evaluate(pruned, [[2, 3]])[0] == evaluate(c, [[2, 3]])[0]


def test_isomorphic_is_structural():
    a, b = det2(GF(5)), det2(GF(5))
    assert isomorphic(a, b)
    assert not isomorphic(a, det2(GF(7)))


def test_with_weights_roundtrip():
    c = det2(GF(5))
    w = list(c.weights)
    w[0] = 3
    c2 = c.with_weights(w)
    assert c2.weights[0] == 3 and c.weights[0] == 1


def test_topological_order_enforced():
    c = det2(QQ())
    assert (c.edge_src < c.edge_dst).all()
    assert (np.diff(c.edge_dst) >= 0).all()
