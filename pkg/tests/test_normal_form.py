"""Normal-form checker and rewriting pass."""

import pytest

from projcirc.circuit import BlockSpec, CircuitBuilder, evaluate
from projcirc.equivalence import pit_equal
from projcirc.errors import NotHomogeneous
from projcirc.field import GF, QQ
from projcirc.fuzz import fuzz_circuit
from projcirc.normal_form import BLOWUP_CONSTANT, check_normal_form, normalize


def small_bihom():
    b = CircuitBuilder(BlockSpec.of(("x", 2), ("y", 2)), GF(7))
    p = b.add_prod([(2, b.var(0, 0)), (3, b.var(1, 1))])
    s = b.add_sum([(1, p), (5, b.add_prod([(1, b.var(0, 1)), (1, b.var(1, 0))]))])
    b.set_outputs([s])
    return b.build()


def test_normalized_passes_all_conditions():
    n = normalize(small_bihom())
    report = check_normal_form(n)
    assert report.ok, report.offenders


def test_normalize_preserves_semantics():
    c = small_bihom()
    n = normalize(c)
    for pt in [([1, 2], [3, 4]), ([0, 1], [1, 6]), ([5, 5], [2, 0])]:
        assert evaluate(c, pt) == evaluate(n, pt)


def test_normalize_idempotent_semantics():
    c = normalize(small_bihom())
    again = normalize(c)
    assert check_normal_form(again).ok
    assert pit_equal(c, again, trials=10).equal


def test_blowup_bound():
    for seed in range(10):
        c = fuzz_circuit(seed, QQ())
        n = normalize(c)
        assert n.size <= BLOWUP_CONSTANT * c.size + BLOWUP_CONSTANT


def test_inhomogeneous_input_rejected():
    b = CircuitBuilder(BlockSpec.of(("x", 2)), QQ())
    p = b.add_prod([(1, b.var(0, 0)), (1, b.var(0, 1))])
    bad = b.add_sum([(1, b.var(0, 0)), (1, p)])
    b.set_outputs([bad])
    with pytest.raises(NotHomogeneous):
        normalize(b.build())


def test_checker_flags_leaf_into_product():
    b = CircuitBuilder(BlockSpec.of(("x", 2)), GF(5))
    p = b.add_prod([(2, b.var(0, 0)), (1, b.var(0, 1))])
    b.set_outputs([b.add_sum([(1, p)])])
    report = check_normal_form(b.build())
    assert not report.passed["ii"] and not report.passed["iv"]
