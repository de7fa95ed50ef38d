import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from pgarch.model import (
    ParameterSpace,
    PGarchSpec,
    Series,
    StandardGaussian,
    StandardizedStudentT,
    UnitConstant,
    dist_from_dict,
    param_names,
    require_non_degenerate,
    season_of,
    validate_spec,
)


def test_validate_ok():
    spec = PGarchSpec([1.0], [[0.3]], [[0.5]])
    assert validate_spec(spec) == []


def test_validate_names_offending_coordinate():
    spec = PGarchSpec([0.0, 1.0], [[0.1], [0.1]], [[0.2], [0.2]])
    assert validate_spec(spec) == ["omega[1] must be > 0"]
    spec = PGarchSpec([1.0], [[-0.1]], [[0.5]])
    assert validate_spec(spec) == ["alpha[1][1] must be ≥ 0"]
    spec = PGarchSpec([1.0, 2.0], [[0.1], [0.1]], [[0.2], [-1.0]])
    assert validate_spec(spec) == ["beta[2][1] must be ≥ 0"]


def test_validate_collects_every_violation():
    spec = PGarchSpec([-1.0, np.nan], [[-0.1], [0.0]], np.zeros((2, 0)))
    assert len(validate_spec(spec)) == 3


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        PGarchSpec([1.0, 1.0], [[0.1]], [[0.1], [0.1]])
    with pytest.raises(ValueError):
        PGarchSpec([1.0], [[0.1]], [[0.1], [0.1]])


@pytest.mark.parametrize("t, S, v", [(1, 2, 1), (2, 2, 2), (7, 4, 3), (1, 1, 1), (0, 3, 3)])
def test_season_of(t, S, v):
    assert season_of(t, S) == v


@given(st.integers(1, 10_000), st.integers(1, 24))
def test_season_of_periodic(t, S):
    v = season_of(t, S)
    assert 1 <= v <= S
    assert season_of(t + S, S) == v


@settings(max_examples=30)
@given(st.integers(1, 6), st.integers(0, 3), st.integers(0, 3), st.integers(-5, 5))
def test_accessors_are_periodic(S, q, p, k):
    rng = np.random.default_rng(S * 100 + q * 10 + p)
    spec = PGarchSpec(rng.uniform(0.1, 2, S), rng.uniform(0, 1, (S, q)),
                      rng.uniform(0, 1, (S, p)))
    for v in range(1, S + 1):
        assert spec.omega_of(v + k * S) == spec.omega_of(v)
        assert_array_equal(spec.alpha_of(v + k * S), spec.alpha_of(v))
        assert_array_equal(spec.beta_of(v + k * S), spec.beta_of(v))


@settings(max_examples=30)
@given(st.integers(1, 5), st.integers(0, 3), st.integers(0, 3))
def test_vector_round_trip(S, q, p):
    theta = np.arange(S * (1 + q + p), dtype=float) + 1.0
    spec = PGarchSpec.from_vector(theta, S, q, p)
    assert_array_equal(spec.to_vector(), theta)
    assert spec.n_params == theta.size
    assert PGarchSpec.from_dict(spec.to_dict()) == spec


def test_flattening_is_season_major():
    spec = PGarchSpec([1.0, 2.0], [[0.1, 0.2], [0.3, 0.4]], [[0.5], [0.6]])
    assert_array_equal(spec.to_vector(), [1.0, 0.1, 0.2, 0.5, 2.0, 0.3, 0.4, 0.6])
    assert spec.param_names() == [
        "omega[1]", "alpha[1][1]", "alpha[1][2]", "beta[1][1]",
        "omega[2]", "alpha[2][1]", "alpha[2][2]", "beta[2][1]",
    ]
    assert param_names(2, 2, 1) == spec.param_names()


def test_spec_is_immutable():
    spec = PGarchSpec([1.0], [[0.3]], [[0.5]])
    with pytest.raises(ValueError):
        spec.omega[0] = 2.0


def test_parameter_space_default_and_compact():
    sp = ParameterSpace.default(2, 1, 1)
    assert_allclose(sp.lower, [1e-6, 0, 0] * 2)
    assert_allclose(sp.upper, [1e6, 10, 10] * 2)
    sp = ParameterSpace.compact(1, 1, 1, 0.01, alpha_upper=2.0)
    assert_allclose(sp.lower, [0.01, 0, 0])
    assert_allclose(sp.upper, [100, 2.0, 0.99])
    assert sp.contains([1.0, 0.5, 0.5])
    assert not sp.contains([1.0, 0.5, 1.0])
    assert_allclose(sp.project([0.0, 5.0, -1.0]), [0.01, 2.0, 0.0])


def test_parameter_space_rejects_inverted_box():
    with pytest.raises(ValueError):
        ParameterSpace([1.0], [0.5], 0.1)


def test_gaussian_sampling_moments():
    x = StandardGaussian().sample(np.random.default_rng(0), 10**6)
    assert -0.005 <= x.mean() <= 0.005
    assert 0.99 <= x.var() <= 1.01


def test_student_t_is_standardized():
    d = StandardizedStudentT(6.0)
    x = d.sample(np.random.default_rng(1), 10**6)
    assert abs(x.mean()) < 0.005
    assert 0.98 <= x.var() <= 1.02
    assert d.fourth_moment == pytest.approx(6.0)
    assert StandardizedStudentT(4.0).fourth_moment == np.inf
    with pytest.raises(ValueError):
        StandardizedStudentT(2.0)


def test_unit_constant_is_degenerate():
    d = UnitConstant()
    assert_array_equal(d.sample(np.random.default_rng(0), 5), np.ones(5))
    with pytest.raises(ValueError):
        require_non_degenerate(d)
    require_non_degenerate(StandardGaussian())


def test_dist_from_dict():
    assert isinstance(dist_from_dict({"name": "gaussian"}), StandardGaussian)
    assert dist_from_dict({"name": "student_t", "dof": 5}).dof == 5
    with pytest.raises(ValueError):
        dist_from_dict({"name": "cauchy"})


def test_series_season_alignment():
    s = Series(np.arange(6.0), 3)
    assert_array_equal(s.seasons, [1, 2, 3, 1, 2, 3])
    assert_array_equal(s.by_season(2), [1.0, 4.0])
    assert s.N == 2


def test_series_incomplete_year():
    s = Series(np.ones(101), 2)
    with pytest.raises(ValueError, match="length 101 is not a multiple of period 2"):
        s.N


def test_series_h_true_checks():
    with pytest.raises(ValueError):
        Series(np.ones(4), 2, h_true=np.ones(3))
    with pytest.raises(ValueError):
        Series(np.ones(4), 2, h_true=np.array([1.0, 0.0, 1.0, 1.0]))
