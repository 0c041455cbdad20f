import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lvbragg.errors import AntisymmetryViolation, DimensionMismatch, ParseError, RangeViolation
from lvbragg.model import (
    InteractionParams,
    PopulationState,
    SpeciesSet,
    ValidatedParams,
    bundled_constants,
    load_constants,
    load_scenario_table,
    validate_params,
)


def test_table_row3_is_valid_with_both_forms(scenarios):
    p = scenarios[2]
    assert (p.alpha_pp, p.alpha_dd, p.lambda1, p.lambda2, p.xi_p, p.xi_d) == (0.6, 0.4, 0.6, 0.4, 0.6, 0.4)
    assert (p.gamma, p.beta_p, p.alpha_pd, p.nu) == (3, 0.006456, 0.05, 0.05)
    v = validate_params(p)
    assert v.prey_form_ok and v.predator_form_ok
    assert v.singular == ()


def test_last_row_flags_prey_form_singular(scenarios):
    v = validate_params(scenarios[4])
    assert not v.prey_form_ok
    assert v.predator_form_ok
    assert v.singular == ("prey:lambda1,xi_d",)


def test_lambda_out_of_range_rejected():
    with pytest.raises(RangeViolation) as err:
        validate_params(InteractionParams(lambda1=1.5))
    assert err.value.field == "lambda1"


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"gamma": 0}, "gamma"),
        ({"beta_p": 0.0}, "beta_p"),
        ({"beta_d": -1.0}, "beta_d"),
        ({"xi_d": -0.1}, "xi_d"),
        ({"phi": 2.0}, "phi"),
        ({"nu": 1.01}, "nu"),
        ({"alpha_pp": -0.2}, "alpha_pp"),
    ],
)
def test_range_violations_name_the_field(changes, field):
    with pytest.raises(RangeViolation) as err:
        validate_params(InteractionParams(**changes))
    assert err.value.field == field


def test_first_violation_is_reported():
    with pytest.raises(RangeViolation) as err:
        validate_params(InteractionParams(beta_p=-1.0, lambda1=3.0))
    assert err.value.field == "beta_p"


def test_validation_is_idempotent(scenarios):
    for p in scenarios:
        once = validate_params(p)
        assert validate_params(once) == once
        assert isinstance(once, ValidatedParams)
        assert once.alpha_pp == p.alpha_pp  # field access passes through


def test_alpha_dp_is_always_antisymmetric(scenarios):
    for p in scenarios:
        assert p.alpha_dp == -p.alpha_pd
    assert InteractionParams.from_mapping({"alpha_pd": 0.3, "alpha_dp": -0.3}).alpha_dp == -0.3
    with pytest.raises(AntisymmetryViolation):
        InteractionParams.from_mapping({"alpha_pd": 0.3, "alpha_dp": 0.3})


def test_bundled_table_matches_shipped_rows(scenarios):
    assert [p.alpha_pp for p in scenarios] == [0, 0.2, 0.6, 0.8, 1]
    for p in scenarios:
        assert p.xi_p + p.xi_d == 1
    # lambda1 == 1 - xi_p on every shipped row except the mid-range one (0.6 vs 0.4)
    holds = [p.lambda1 == pytest.approx(1 - p.xi_p, abs=1e-15) for p in scenarios]
    assert holds == [True, True, False, True, True]
    for p in scenarios:
        assert p.beta_d == p.beta_p
        assert (p.eps_p, p.eps_d) == (0.34, 0.294)


def test_empty_stream_gives_no_scenarios():
    assert load_scenario_table(io.StringIO("")) == []


def test_short_row_is_a_parse_error():
    text = "alpha_pp,alpha_dd,lambda1,lambda2,xi_p,xi_d\n0.2,0.2,0.8,0.8,0.2\n"
    with pytest.raises(ParseError) as err:
        load_scenario_table(io.StringIO(text))
    assert err.value.line == 2


def test_missing_column_is_reported():
    with pytest.raises(ParseError, match="xi_d"):
        load_scenario_table(io.StringIO("alpha_pp,alpha_dd,lambda1,lambda2,xi_p\n"))


def test_non_numeric_cell():
    text = "alpha_pp,alpha_dd,lambda1,lambda2,xi_p,xi_d\n0.2,x,0.8,0.8,0.2,0.8\n"
    with pytest.raises(ParseError):
        load_scenario_table(io.StringIO(text))


def test_constants_file_roundtrip():
    c = load_constants(io.StringIO("beta_p = 0.01\n# comment\nalpha_pd=0.1\ngamma = 4\n"))
    assert c.beta_p == 0.01 and c.beta_d == 0.01
    assert c.alpha_pd == 0.1 and c.gamma == 4
    rows = load_scenario_table(io.StringIO("alpha_pp,alpha_dd,lambda1,lambda2,xi_p,xi_d\n0,0,1,1,1,1\n"), c)
    assert rows[0].gamma == 4 and rows[0].beta_p == 0.01


@pytest.mark.parametrize("text", ["bogus = 1\n", "beta_p 0.1\n", "beta_p = abc\n"])
def test_constants_file_errors(text):
    with pytest.raises(ParseError):
        load_constants(io.StringIO(text))


def test_bundled_constants():
    c = bundled_constants()
    assert (c.beta_p, c.alpha_pd, c.nu, c.eps_p, c.eps_d) == (0.006456, 0.05, 0.05, 0.34, 0.294)
    assert (c.n_p, c.n_d) == (3.0, 1.1)
    assert c.state.n_t == pytest.approx(4.1)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_population_total_is_sum(n_p, n_d):
    s = PopulationState(n_p, n_d)
    assert s.n_t == n_p + n_d


def test_negative_population_rejected():
    with pytest.raises(RangeViolation):
        PopulationState(-1.0, 2.0)


def test_area_factor():
    s = PopulationState(3.0, 1.1).counts(100.0)
    assert s.n_t == pytest.approx(410.0)


def test_species_set_checks():
    with pytest.raises(AntisymmetryViolation):
        SpeciesSet([1, -1], [[0, 1], [1, 0]], [1, 1])
    with pytest.raises(DimensionMismatch):
        SpeciesSet([1, -1], [[0, 1, 0], [-1, 0, 0]], [1, 1])
    with pytest.raises(RangeViolation):
        SpeciesSet([1, -1], [[0, 1], [-1, 0]], [1, 1], kappa=3)
    s = SpeciesSet([1, -1], [[0.5, 1], [-1, 0.2]], [1, 1])  # diagonal may be non-zero
    assert s.count == 2 and s.kappa == 2
    with pytest.raises(ValueError):
        s.alpha[0, 1] = 3.0


def test_two_role_mapping(row3):
    s = SpeciesSet.two_role(row3)
    assert s.alpha[1, 0] == row3.alpha_dp
    assert s.alpha[0, 1] == row3.alpha_pd
    assert np.array_equal(np.diag(s.alpha), [row3.alpha_pp, row3.alpha_dd])
