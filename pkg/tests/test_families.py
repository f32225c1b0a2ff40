"""Benchmark variety families, Segre machinery, pairing index."""

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from projcirc.circuit import evaluate
from projcirc.equivalence import dense_expand
from projcirc.errors import NotTGuarded
from projcirc.families import (
    gen_point_family,
    gen_resultant_incidence,
    gen_universal_poly,
    pair_index,
    segre_minors,
    segre_transform,
    unpair,
)
from projcirc.field import GF, QQ
from projcirc.projspace import enumerate_points, segre, zero_set
from projcirc.universal import build_universal, controlize


def test_point_family_size_and_metadata():
    fi = gen_point_family(3)
    assert fi.circuit.size == 3
    meta = json.loads(fi.metadata())
    assert meta["family"] == "point" and meta["params"]["n"] == 3


def test_point_family_zero_set():
    S = zero_set(gen_point_family(2).circuit, 3)
    assert [str(p) for p in S.points] == ["[1:0:0]"]


def test_universal_poly_dense_structure():
    n, d = 2, 2
    fi = gen_universal_poly(n, d)
    ncoeff = math.comb(n + d, d)
    assert fi.circuit.blocks.counts == (n + 1, ncoeff)
    polys = dense_expand(fi.circuit)
    assert len(polys) == 1
    # every monomial in x of degree d appears exactly once, with its own
    # coefficient variable
    assert len(polys[0].coeffs) == ncoeff
    coeff_vars = {exps[n + 1 :] for exps in polys[0].coeffs}
    assert all(sum(t) == 1 for t in coeff_vars) and len(coeff_vars) == ncoeff


def test_resultant_incidence_outputs():
    fi = gen_resultant_incidence(1, 1)
    c = fi.circuit
    assert c.blocks.counts == (4, 2)
    # f_i(x) = a_i x0 + b_i x1 for i = 0, 1
    vals = evaluate(c, [[1, 2, 3, 4], [1, 1]])
    assert [v.value for v in vals] == [3, 7]


def test_segre_minors_vanish_exactly_on_image():
    c = segre_minors(1, 1, field=GF(2))
    S = zero_set(c, 2)
    image = {segre(p) for p in enumerate_points([1, 1], 2).points}
    assert S.members() == image
    assert len(S) == 9 and len(enumerate_points([3], 2)) == 15


def test_segre_transform_requires_guards():
    phi, layout = build_universal(1, 1, 1, 1, 4, field=GF(5))
    with pytest.raises(NotTGuarded):
        segre_transform(phi)  # no t-block at all


def test_segre_transform_toy():
    phi, layout = build_universal(2, 1, 1, 1, 4, field=GF(2))
    phi_prime, table = controlize(phi, layout)
    out = segre_transform(phi_prime)
    n = phi.blocks.counts[0]
    N = phi.nedges
    assert out.blocks.counts == (n * N, phi.blocks.counts[1])
    # 2x2 minors of the n x N matrix come first, then one image output per
    # original output and x-copy
    nminors = math.comb(n, 2) * math.comb(N, 2)
    assert len(out.outputs) == nminors + len(phi_prime.outputs) * n


@given(st.integers(1, 60), st.integers(0, 60))
def test_pair_index_roundtrip(n, m):
    assert unpair(pair_index(n, m)) == (n, m)


@given(st.integers(1, 60), st.integers(0, 60))
def test_pair_index_growth_bound(n, m):
    k = pair_index(n, m)
    assert max(n, m) <= k + 1 <= (n + m + 1) ** 2
