"""Walk operators, the search step and simulation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk import fixtures as fx
from qwalk.graph import build_graph, complete, cycle, marked_structure, path, torus
from qwalk.walk import (
    GraphMismatchError,
    StepOperator,
    Variant,
    WalkState,
    apply_coin,
    apply_oracle,
    apply_shift,
    apply_step,
    basis_state,
    initial_state,
    inner_product,
    simulate,
)


@pytest.mark.parametrize("g, n_arcs", [(complete(3), 6), (torus(4, 3), 48), (path(2), 2)])
def test_initial_state_uniform(g, n_arcs):
    psi = initial_state(g)
    assert g.n_arcs == n_arcs
    np.testing.assert_allclose(psi.amplitudes, 1 / math.sqrt(n_arcs), rtol=0, atol=1e-15)
    assert inner_product(psi, psi) == pytest.approx(1.0, abs=1e-12)


def test_oracle():
    g = complete(3)
    psi = initial_state(g)
    assert np.array_equal(apply_oracle(psi, marked_structure(g, [])).amplitudes, psi.amplitudes)
    out = apply_oracle(psi, marked_structure(g, [0]))
    assert out[(0, 1)] < 0 and out[(0, 2)] < 0
    assert out[(1, 0)] > 0 and out[(2, 1)] > 0
    twice = apply_oracle(out, marked_structure(g, [0]))
    assert np.array_equal(twice.amplitudes, psi.amplitudes)


def test_coin_fixes_uniform_and_negates_flip():
    g = torus(3, 3)
    psi = initial_state(g)
    np.testing.assert_allclose(apply_coin(psi).amplitudes, psi.amplitudes, atol=1e-15)
    amps = np.zeros(g.n_arcs)
    amps[list(g.arcs_of(4))] = [1.0, -2.0, 0.5, 0.5]
    flip = WalkState(amps, g)
    np.testing.assert_allclose(apply_coin(flip).amplitudes, -amps, atol=1e-15)


def test_coin_degree_two_is_swap():
    g = cycle(4)
    amps = np.zeros(g.n_arcs)
    amps[list(g.arcs_of(0))] = [0.3, -1.7]
    out = apply_coin(WalkState(amps, g)).directional(0)
    # explicit 2x2 Grover coin, 2/d J - I with d=2
    coin = np.full((2, 2), 1.0) - np.eye(2)
    np.testing.assert_allclose(out, coin @ np.array([0.3, -1.7]))
    np.testing.assert_allclose(out, [-1.7, 0.3])


def test_shift_basis_state():
    g = path(3)
    out = apply_shift(basis_state(g, 0, 1))
    assert np.array_equal(out.amplitudes, basis_state(g, 1, 0).amplitudes)


def test_shift_fixes_symmetric_states(rng):
    g = fx.random_graph(rng, 9)
    vals = rng.standard_normal(g.n_arcs)
    sym = WalkState(vals + vals[g.reverse], g)
    np.testing.assert_array_equal(apply_shift(sym).amplitudes, sym.amplitudes)


def test_step_empty_marked_fixes_uniform():
    g = torus(4, 5)
    psi = initial_state(g)
    out = apply_step(psi, StepOperator(Variant.GROVER_U, marked_structure(g, [])))
    np.testing.assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-15)


def test_step_fixes_pair_state():
    g, m = fx.torus_pair(4, 3)
    st_ = fx.pair_state(g, (6, 7), 0.7)
    out = apply_step(st_, StepOperator("grover", m))
    np.testing.assert_allclose(out.amplitudes, st_.amplitudes, atol=1e-15)


def test_skw_on_marked_arc():
    g = complete(4)
    m = marked_structure(g, [2])
    out = apply_step(basis_state(g, 2, 0), StepOperator(Variant.SKW_U_PRIME, m))
    np.testing.assert_array_equal(out.amplitudes, -basis_state(g, 0, 2).amplitudes)


def test_graph_mismatch():
    with pytest.raises(GraphMismatchError):
        inner_product(initial_state(path(3)), initial_state(cycle(3)))
    with pytest.raises(GraphMismatchError):
        apply_step(initial_state(path(3)), StepOperator("grover", marked_structure(cycle(3), [0])))


def test_variant_parse():
    assert Variant.parse("SKW") is Variant.SKW_U_PRIME
    assert Variant.parse("grover_u") is Variant.GROVER_U
    with pytest.raises(ValueError):
        Variant.parse("hadamard")


def test_simulate_zero_steps():
    g = torus(4, 3)
    m = marked_structure(g, [6, 7])
    tr = simulate(g, m, Variant.GROVER_U, 0)
    assert list(tr.steps) == [0]
    assert tr.success_probability[0] == pytest.approx(8 / 48, abs=1e-15)


def test_simulate_records_every_step():
    g = complete(16)
    tr = simulate(g, marked_structure(g, [0]), "grover", 7)
    assert list(tr.steps) == list(range(8))
    np.testing.assert_allclose(tr.norm, 1.0, atol=1e-12)
    csv = tr.to_csv().splitlines()
    assert csv[0] == "step,success_probability,norm" and len(csv) == 9


def test_inner_product_ignores_flip_perturbation():
    g = torus(3, 4)
    psi = initial_state(g)
    amps = psi.amplitudes.copy()
    amps[list(g.arcs_of(5))] += [0.2, -0.1, -0.3, 0.2]
    assert inner_product(psi, WalkState(amps, g)) == pytest.approx(1.0, abs=1e-12)


def test_pair_state_overlap_direct_sum():
    g, m = fx.torus_pair(4, 3)
    ref = fx.pair_state(g, (6, 7)).normalized()
    # hand count: 46 arcs at a, 2 arcs at -3a
    a = 1 / math.sqrt(46 + 2 * 9)
    expected = (46 * a - 6 * a) / math.sqrt(48)
    assert inner_product(initial_state(g), ref) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.72169, abs=1e-5)


@given(st.integers(0, 2**32 - 1), st.sampled_from(list(Variant)))
@settings(max_examples=50, deadline=None)
def test_step_preserves_norm(seed, variant):
    rng = np.random.default_rng(seed)
    g = fx.random_graph(rng, 10)
    m = fx.random_marked(rng, g)
    s = WalkState(rng.standard_normal(g.n_arcs), g)
    out = apply_step(s, StepOperator(variant, m))
    assert out.norm() == pytest.approx(s.norm(), rel=1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_involutions(seed):
    rng = np.random.default_rng(seed)
    g = fx.random_graph(rng, 10)
    m = fx.random_marked(rng, g)
    s = WalkState(rng.standard_normal(g.n_arcs), g)
    np.testing.assert_allclose(apply_coin(apply_coin(s)).amplitudes, s.amplitudes, atol=1e-12)
    np.testing.assert_array_equal(apply_shift(apply_shift(s)).amplitudes, s.amplitudes)
    np.testing.assert_array_equal(apply_oracle(apply_oracle(s, m), m).amplitudes, s.amplitudes)


def test_wrong_length_state():
    with pytest.raises(ValueError):
        WalkState(np.zeros(3), build_graph([(0, 1)]))
