"""Universal circuit construction, control variables, audits."""

import numpy as np
import pytest

from projcirc.circuit import evaluate, isomorphic, prune_dead, validate
from projcirc.errors import BadParameters
from projcirc.field import GF
from projcirc.universal import (
    audit_layout,
    build_universal,
    build_universal_alldeg,
    controlize,
    plan_universal,
    t_degree_of_level,
    ucr_params,
)


def test_bad_parameters_rejected():
    with pytest.raises(BadParameters):
        build_universal(2, 1, 1, 1, 2)  # s below n + m
    with pytest.raises(BadParameters):
        build_universal(0, 1, 1, 1, 4)


def test_plan_matches_build():
    for n, m, r1, r2, s in [(1, 1, 1, 1, 4), (2, 2, 2, 1, 8), (2, 0, 2, 0, 6)]:
        for lean in (False, True):
            phi, _ = build_universal(n, m, r1, r2, s, lean=lean)
            gates, edges = plan_universal(n, m, s, [(r1, r2)], lean)
            assert (phi.ngates, phi.nedges) == (gates, edges)


def test_lean_is_pruned_full():
    full, _ = build_universal(2, 1, 1, 1, 4, lean=False)
    lean, _ = build_universal(2, 1, 1, 1, 4, lean=True)
    assert isomorphic(prune_dead(full), lean)


def test_audit_clean_on_grid():
    for n in (1, 2):
        for m in (0, 1):
            for r1, r2 in [(1, 1), (2, 1), (1, 2)]:
                if m == 0 and r2 > 0:
                    continue
                phi, layout = build_universal(n, m, r1, r2, 4)
                assert audit_layout(phi, layout) == []


def test_outputs_are_top_level_sums():
    phi, layout = build_universal(2, 1, 2, 1, 6)
    assert len(phi.outputs) == 2
    r = validate(phi)
    assert all(d == (2, 1) for d in r.output_degrees)


def test_alldeg_output_degree_profile():
    phi, layout = build_universal_alldeg(2, 1, 2, 6)
    degrees = set(layout.output_degrees)
    assert degrees == {(r1, r2) for r1 in range(3) for r2 in range(3)} - {(0, 0)}


def test_weights_start_zero():
    phi, _ = build_universal(1, 1, 1, 1, 4)
    assert not np.asarray(phi.weights, dtype=object).any()


def test_controlize_edge_count_and_semantics():
    phi, layout = build_universal(2, 1, 1, 1, 4, field=GF(13))
    phi_prime, table = controlize(phi, layout)
    assert table.n_controls == phi.nedges
    assert phi_prime.nedges == 3 * phi.nedges
    rng = np.random.default_rng(5)
    w = rng.integers(0, 13, size=phi.nedges)
    x = list(rng.integers(0, 13, size=2))
    y = list(rng.integers(0, 13, size=1))
    direct = evaluate(phi.with_weights(w), [x, y])
    controlled = evaluate(phi_prime, [x, y, list(w)])
    assert direct == controlled


def test_t_degree_recurrence():
    assert t_degree_of_level((1, 0)) == 1
    assert t_degree_of_level((1, 1)) == 5
    assert t_degree_of_level((2, 2)) == 13


def test_ucr_params_shapes():
    params, phi, layout, table = ucr_params(2, 1)
    assert params.n_controls == phi.nedges
    assert params.n_outputs == len(phi.outputs)
    assert params.ambient == (1, phi.nedges - 1)
    assert params.n_outputs == 2 * len(layout.copy_order)
