"""Parameter types and the closed-form characteristic function of the
Levy alpha-stable family.

The characteristic function is implemented with the sign convention

    phi(k) = exp{ i*delta*k - |gamma*k|**alpha * [1 + i*beta*sgn(k)*omega(k, alpha)] }

with ``omega = tan(pi*alpha/2)`` for ``alpha != 1`` and ``(2/pi)*log|k|`` for
``alpha == 1``.  Note the ``+ i*beta`` term: ``beta`` here is the negation of
the skewness in the common S1 parameterisation for ``alpha != 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "StableDomainError",
    "StableParams",
    "TailCoefficients",
    "make_params",
    "char_fn",
    "beta_from_tails",
    "tail_exponent",
]


class StableDomainError(ValueError):
    """Raised when a parameter falls outside its admissible domain."""

    def __init__(self, field: str, value, reason: str):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: {reason}")


@dataclass(frozen=True)
class StableParams:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise StableDomainError(name, value, "not a real number") from None
            if not math.isfinite(value):
                raise StableDomainError(name, value, "must be finite")
            object.__setattr__(self, name, value)
        if not 0.0 < self.alpha <= 2.0:
            raise StableDomainError("alpha", self.alpha, "must satisfy 0 < alpha <= 2")
        if not -1.0 <= self.beta <= 1.0:
            raise StableDomainError("beta", self.beta, "must satisfy -1 <= beta <= 1")
        if not self.gamma > 0.0:
            raise StableDomainError("gamma", self.gamma, "must be > 0")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def replace(self, **changes) -> "StableParams":
        fields = dict(zip(("alpha", "beta", "gamma", "delta"), self.as_tuple()))
        fields.update(changes)
        return StableParams(**fields)


@dataclass(frozen=True)
class TailCoefficients:
    """Amplitudes of the power-law density tails, ``f(x) ~ c * |x|**-(1+alpha)``."""

    c_plus: float
    c_minus: float

    def __post_init__(self):
        for name in ("c_plus", "c_minus"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0.0):
                raise StableDomainError(name, value, "must be finite and > 0")
            object.__setattr__(self, name, value)


def make_params(alpha, beta, gamma, delta) -> StableParams:
    """Validate and build a :class:`StableParams`; never clamps."""
    return StableParams(alpha, beta, gamma, delta)


def char_fn(params: StableParams, k):
    """Evaluate the characteristic function at wavenumber(s) ``k``.

    Accepts a scalar or an array; returns a complex scalar or array of the same
    shape.  ``char_fn(p, 0) == 1`` exactly, including the ``alpha == 1`` case
    where ``log|k|`` diverges.
    """
    alpha, beta, gamma, delta = params.as_tuple()
    k_arr = np.asarray(k, dtype=float)
    abs_k = np.abs(k_arr)
    scaled = (gamma * abs_k) ** alpha
    if alpha == 1.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            omega = (2.0 / np.pi) * np.log(abs_k)
        omega = np.where(abs_k > 0, omega, 0.0)
    else:
        omega = math.tan(math.pi * alpha / 2.0)
    # |gamma k|^alpha * sgn(k): nonzero-safe odd part of the exponent
    odd = np.sign(k_arr) * scaled * beta * omega
    out = np.exp(-scaled + 1j * (delta * k_arr - odd))
    if out.ndim == 0:
        return complex(out)
    return out


def beta_from_tails(tails: TailCoefficients) -> float:
    """Skewness implied by the ratio of tail amplitudes."""
    c_p, c_m = tails.c_plus, tails.c_minus
    return (c_p - c_m) / (c_p + c_m)


def tail_exponent(params: StableParams) -> float:
    """Asymptotic density decay exponent ``1 + alpha``; undefined at alpha = 2."""
    if params.alpha >= 2.0:
        raise StableDomainError("alpha", params.alpha, "the Gaussian case has no power-law tail")
    return 1.0 + params.alpha
