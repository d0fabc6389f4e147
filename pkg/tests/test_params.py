import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stablelaw import (
    StableDomainError,
    TailCoefficients,
    beta_from_tails,
    char_fn,
    make_params,
    tail_exponent,
)

alphas = st.floats(0.05, 2.0)
betas = st.floats(-1.0, 1.0)
gammas = st.floats(1e-3, 1e3)
deltas = st.floats(-1e3, 1e3)
ks = st.floats(-1e3, 1e3)


@st.composite
def params(draw, alpha=alphas):
    return make_params(draw(alpha), draw(betas), draw(gammas), draw(deltas))


def test_make_params_accepts_table_value():
    p = make_params(1.570, -0.162, 1, 0)
    assert p.as_tuple() == (1.570, -0.162, 1.0, 0.0)


def test_make_params_gaussian_corner():
    assert make_params(2, 0, 1, 0).alpha == 2.0


@pytest.mark.parametrize(
    "args, field",
    [
        ((2.1, 0, 1, 0), "alpha"),
        ((0.0, 0, 1, 0), "alpha"),
        ((1.5, 1.01, 1, 0), "beta"),
        ((1.5, 0, 0.0, 0), "gamma"),
        ((1.5, 0, -1.0, 0), "gamma"),
        ((1.5, 0, 1, math.inf), "delta"),
        ((math.nan, 0, 1, 0), "alpha"),
    ],
)
def test_make_params_rejects(args, field):
    with pytest.raises(StableDomainError) as info:
        make_params(*args)
    assert info.value.field == field


def test_char_fn_gaussian_at_one():
    assert char_fn(make_params(2, 0, 1, 0), 1.0) == pytest.approx(math.exp(-1), abs=1e-15)


@pytest.mark.parametrize("p", [(1, 0.7, 2, 3), (0.5, -1, 1, 0), (1.5, 0.3, 0.1, -2)])
def test_char_fn_is_one_at_origin(p):
    assert char_fn(make_params(*p), 0.0) == 1 + 0j


def test_char_fn_hand_value():
    # tan(3*pi/4) = -1 gives exp(-1 - 0.5i)
    value = char_fn(make_params(1.5, -0.5, 1, 0), 1.0)
    assert value.real == pytest.approx(math.exp(-1) * math.cos(0.5), abs=1e-15)
    assert value.imag == pytest.approx(-math.exp(-1) * math.sin(0.5), abs=1e-15)


def test_char_fn_vectorised_matches_scalar():
    p = make_params(1.3, 0.4, 0.7, 0.2)
    k = np.linspace(-3, 3, 13)
    assert np.allclose(char_fn(p, k), [char_fn(p, float(v)) for v in k], rtol=0, atol=1e-15)


def test_char_fn_alpha_one_uses_log():
    p = make_params(1, 0.5, 1, 0)
    k = 2.0
    expected = np.exp(-k * (1 + 1j * 0.5 * (2 / math.pi) * math.log(k)))
    assert char_fn(p, k) == pytest.approx(expected, abs=1e-15)


@given(params(), ks)
def test_char_fn_modulus_bounded(p, k):
    assert abs(char_fn(p, k)) <= 1.0 + 1e-15


@given(params(), st.floats(1e-3, 1e2))
def test_char_fn_modulus_below_one_away_from_origin(p, k):
    # strict inequality only holds where |gamma k|**alpha is representable
    if (p.gamma * k) ** p.alpha > 1e-12:
        assert abs(char_fn(p, k)) < 1.0


@given(params(), ks)
def test_char_fn_conjugate_symmetry(p, k):
    assert char_fn(p, -k) == pytest.approx(np.conj(char_fn(p, k)), abs=1e-14)


@given(alphas, gammas, ks)
def test_char_fn_real_when_symmetric(alpha, gamma, k):
    assert char_fn(make_params(alpha, 0, gamma, 0), k).imag == 0.0


@given(betas, st.floats(1e-2, 10), st.floats(-10, 10), st.floats(-5, 5))
def test_char_fn_gaussian_ignores_beta(beta, gamma, delta, k):
    expected = np.exp(1j * delta * k - gamma**2 * k**2)
    assert char_fn(make_params(2, beta, gamma, delta), k) == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_beta_from_tails_examples():
    assert beta_from_tails(TailCoefficients(1, 1)) == 0.0
    assert beta_from_tails(TailCoefficients(2, 1e-12)) == pytest.approx(1.0, abs=1e-11)
    assert beta_from_tails(TailCoefficients(3, 1)) == 0.5


def test_tail_coefficients_must_be_positive():
    with pytest.raises(StableDomainError):
        TailCoefficients(2, 0)


positive = st.floats(1e-12, 1e12)


@given(positive, positive)
def test_beta_from_tails_range_and_antisymmetry(cp, cm):
    b = beta_from_tails(TailCoefficients(cp, cm))
    assert -1.0 <= b <= 1.0
    assert beta_from_tails(TailCoefficients(cm, cp)) == pytest.approx(-b, abs=1e-15)


def test_tail_exponent():
    assert tail_exponent(make_params(1.5, 0, 1, 0)) == 2.5
    assert tail_exponent(make_params(1.570, -0.162, 1, 0)) == pytest.approx(2.570)
    with pytest.raises(StableDomainError):
        tail_exponent(make_params(2, 0, 1, 0))


def test_params_are_immutable():
    p = make_params(1.5, 0, 1, 0)
    with pytest.raises(AttributeError):
        p.alpha = 1.0
    assert p.replace(alpha=1.2).alpha == 1.2
