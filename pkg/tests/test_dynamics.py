import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lvbragg.dynamics import (
    Trajectory,
    conserved_drift,
    conserved_quantity,
    first_return_time,
    fixed_point,
    integrate,
    lv_rhs,
    total_population_rate,
)
from lvbragg.errors import DimensionMismatch, ModelError, NegativePopulation, NonFiniteState, NonPositivePopulation
from lvbragg.model import PopulationState, SpeciesSet

from oracles import lv_rhs_bruteforce, total_rate_exact

# classic system with a large orbit: drift stays well above round-off at step 1e-3
CLASSIC = SpeciesSet.classic(3.0, 1.0, 3.0, 1.0)
CLASSIC_START = (8.0, 0.5)


def random_system(rng, count, kappa=None):
    a = rng.normal(size=(count, count))
    alpha = a - a.T + np.diag(rng.uniform(-0.5, 0.5, count))
    return SpeciesSet(rng.normal(size=count), alpha, rng.uniform(0.5, 2.0, count), kappa)


def test_fixed_point_has_zero_rates():
    # prey loses on meeting the predator (alpha[1][0] = -1), predator gains (alpha[0][1] = +1)
    s = SpeciesSet([1.0, -1.0], [[0.0, 1.0], [-1.0, 0.0]], [1.0, 1.0])
    assert np.array_equal(lv_rhs([1.0, 1.0], s), [0.0, 0.0])


def test_extinction_is_absorbing():
    s = random_system(np.random.default_rng(0), 4)
    assert np.array_equal(lv_rhs(np.zeros(4), s), np.zeros(4))


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("kappa", [None, 1, 2])
def test_rhs_matches_bruteforce(seed, kappa):
    rng = np.random.default_rng(seed)
    s = random_system(rng, 3, kappa)
    n = rng.uniform(0, 5, 3)
    expected = lv_rhs_bruteforce(n, s.eps, s.alpha, s.beta, s.kappa)
    np.testing.assert_allclose(lv_rhs(n, s), expected, rtol=1e-12, atol=1e-14)


def test_rhs_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        lv_rhs([1.0, 2.0, 3.0], CLASSIC)


@given(st.integers(0, 2**32 - 1), st.integers(0, 3))
def test_zero_population_forces_zero_rate(seed, i):
    rng = np.random.default_rng(seed)
    s = random_system(rng, 4)
    n = rng.uniform(0, 3, 4)
    n[i] = 0.0
    assert lv_rhs(n, s)[i] == 0.0


def test_total_rate_without_interactions(no_interaction):
    assert total_population_rate(PopulationState(3.0, 1.1), no_interaction) == pytest.approx(1.3434, rel=1e-12)


def test_total_rate_of_empty_state(row3):
    assert total_population_rate(PopulationState(0.0, 0.0), row3) == 0.0


def test_total_rate_matches_second_implementation(row3):
    state = PopulationState(10.0, 31.0)
    assert total_population_rate(state, row3) == pytest.approx(total_rate_exact(10, 31, row3), rel=1e-12)


def test_total_rate_equals_summed_rhs_when_encounters_vanish(no_interaction):
    s = SpeciesSet.two_role(no_interaction)
    for n_p, n_d in [(3.0, 1.1), (10.0, 31.0), (0.5, 7.0)]:
        total = lv_rhs([n_p, n_d], s).sum()
        assert total_population_rate(PopulationState(n_p, n_d), no_interaction) == pytest.approx(total, rel=1e-12)


def test_cross_term_differs_from_antisymmetric_rhs(no_interaction):
    # the expanded total rate carries -2*alpha_pd*N_p*N_d/beta_p where the
    # antisymmetric system nets (alpha_pd/beta_d - alpha_pd/beta_p)*N_p*N_d
    p = no_interaction.replace(alpha_pd=0.05)
    n_p, n_d = 3.0, 1.1
    summed = lv_rhs([n_p, n_d], SpeciesSet.two_role(p)).sum()
    gap = total_population_rate(PopulationState(n_p, n_d), p) - summed
    expected = -2 * p.alpha_pd * n_p * n_d / p.beta_p - (p.alpha_pd / p.beta_d - p.alpha_pd / p.beta_p) * n_p * n_d
    assert gap == pytest.approx(expected, rel=1e-12)


def test_fixed_point_trajectory_is_constant():
    fp = fixed_point(CLASSIC)
    assert np.allclose(fp, [3.0, 3.0])
    traj = integrate(CLASSIC, fp, 5.0, 0.01)
    assert np.all(traj.states == fp)


def test_pure_growth_matches_exponential():
    s = SpeciesSet([0.7, -0.4, 0.1], np.zeros((3, 3)), [1.0, 1.0, 1.0])
    n0 = np.array([2.0, 5.0, 1.0])
    traj = integrate(s, n0, 1.0, 1e-3)
    assert traj.times[-1] == pytest.approx(1.0)
    exact = n0 * np.exp(s.eps * 1.0)
    np.testing.assert_allclose(traj.states[-1], exact, rtol=1e-9)


def test_one_cycle_closes():
    period = first_return_time(integrate(CLASSIC, CLASSIC_START, 5.0, 1e-3))
    traj = integrate(CLASSIC, CLASSIC_START, period, 1e-3)
    assert conserved_drift(traj, CLASSIC) < 1e-6
    # the period is located by linear interpolation, so closure is limited by that, not by the integrator
    np.testing.assert_allclose(traj.states[-1], CLASSIC_START, rtol=1e-5)


def test_fourth_order_drift_reduction():
    period = first_return_time(integrate(CLASSIC, CLASSIC_START, 5.0, 1e-3))
    coarse = conserved_drift(integrate(CLASSIC, CLASSIC_START, period, 1e-3), CLASSIC)
    fine = conserved_drift(integrate(CLASSIC, CLASSIC_START, period, 5e-4), CLASSIC)
    assert coarse < 1e-6
    assert 8 <= coarse / fine <= 32


@pytest.mark.parametrize("step, t_end", [(0.0, 1.0), (-0.1, 1.0), (0.1, 0.0)])
def test_bad_step_or_horizon(step, t_end):
    with pytest.raises(ModelError):
        integrate(CLASSIC, CLASSIC_START, t_end, step)


def test_partial_last_step():
    traj = integrate(CLASSIC, CLASSIC_START, 0.25, 0.1)
    np.testing.assert_allclose(traj.times, [0.0, 0.1, 0.2, 0.25])


def test_negative_excursion_raises():
    # quadratic self-damping N' = -N^2 with a step far too large overshoots below zero
    s = SpeciesSet([0.0], [[-1.0]], [1.0])
    with pytest.raises(NegativePopulation) as err:
        integrate(s, [10.0], 2.0, 1.0)
    assert err.value.species == 0


def test_blow_up_raises_non_finite():
    s = SpeciesSet([0.0], [[1.0]], [1.0])  # logistic blow-up N' = N^2
    with pytest.raises(NonFiniteState), np.errstate(over="ignore", invalid="ignore"):
        integrate(s, [10.0], 5.0, 0.5)


def test_conserved_quantity_minimum_at_fixed_point():
    fp = fixed_point(CLASSIC)
    v_star = conserved_quantity(fp, CLASSIC)
    rng = np.random.default_rng(3)
    for x, y in rng.uniform(0.1, 10.0, size=(200, 2)):
        assert conserved_quantity((x, y), CLASSIC) >= v_star


def test_states_on_one_orbit_share_the_invariant():
    traj = integrate(CLASSIC, CLASSIC_START, 1.3, 1e-4)
    v0 = conserved_quantity(traj.states[0], CLASSIC)
    assert conserved_quantity(traj.states[-1], CLASSIC) == pytest.approx(v0, rel=1e-10)


def test_conserved_quantity_needs_positive_state():
    with pytest.raises(NonPositivePopulation):
        conserved_quantity((0.0, 1.0), CLASSIC)


def test_trajectory_csv():
    traj = integrate(CLASSIC, CLASSIC_START, 0.002, 0.001)
    buf = io.StringIO()
    traj.write_csv(buf, labels=["N_p", "N_d", "N_T"], with_total=True)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,N_p,N_d,N_T"
    assert lines[1] == "0,8,0.5,8.5"
    assert len(lines) == 4
    buf = io.StringIO()
    traj.write_csv(buf)
    assert buf.getvalue().splitlines()[0] == "t,N_1,N_2"


def test_trajectory_invariants():
    with pytest.raises(ModelError):
        Trajectory([0.0, 0.0], [[1.0], [1.0]])
    with pytest.raises(DimensionMismatch):
        Trajectory([0.0, 1.0], [[1.0]])
