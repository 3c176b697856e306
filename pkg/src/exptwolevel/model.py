"""Physical model definition: parameters, detuning, coupling, Hamiltonian,
the exponential variable change, and the derived hypergeometric parameters.

Detuning O(t) = (A e^{a t + b} + eps) / 2 and coupling d = (i Delta + eps)/2
make the Hamiltonian

    H(t) = [[ O(t), d ],
            [ d,  -O(t) ]]

non-Hermitian whenever Delta != 0.  The substitution x = e^{alpha t + beta}
turns the gauge-reduced second-order equation into confluent-hypergeometric
form with parameters (a, b, c) and exponents (mu1, mu2); see `analytic`.

Unit convention: all five constants are taken in mutually consistent
frequency/time units; no internal conversion is performed.  Exponents
|alpha*t + beta| > 700 are rejected rather than saturated so that silent
infinities never reach the special functions.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExponentOverflowError

_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class AxisSpec:
    """A swept parameter axis: uniformly sampled closed interval."""

    name: str
    start: float
    stop: float
    samples: int

    def __post_init__(self):
        if self.samples < 1:
            raise DomainError("axis needs at least one sample")

    def values(self) -> list[float]:
        if self.samples == 1:
            return [float(self.start)]
        step = (self.stop - self.start) / (self.samples - 1)
        return [self.start + i * step for i in range(self.samples)]


@dataclass(frozen=True)
class ModelParams:
    """The five physical constants plus the time window of interest."""

    A: float
    alpha: float
    beta: float
    epsilon: float
    Delta: float
    t0: float
    t1: float

    def __post_init__(self):
        if self.alpha == 0.0:
            raise DomainError("alpha must be nonzero (x = exp(alpha t + beta) degenerates)")
        if not self.t0 < self.t1:
            raise DomainError(f"require t0 < t1, got t0={self.t0}, t1={self.t1}")

    def to_json_dict(self) -> dict:
        return {
            "A": self.A,
            "alpha": self.alpha,
            "beta": self.beta,
            "epsilon": self.epsilon,
            "Delta": self.Delta,
            "t0": self.t0,
            "t1": self.t1,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ModelParams":
        return cls(
            A=float(d["A"]),
            alpha=float(d["alpha"]),
            beta=float(d["beta"]),
            epsilon=float(d["epsilon"]),
            Delta=float(d["Delta"]),
            t0=float(d["t0"]),
            t1=float(d["t1"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class DerivedParams:
    """Confluent-hypergeometric parameter set computed from ModelParams.

    mu1 is the minus branch of (1 - a -+ sqrt((1-a)^2 - 4c^2))/2 with the
    principal square root; gamma = 2*mu1 + a.
    """

    a: complex
    b: complex
    c: complex
    mu1: complex
    mu2: complex
    gamma: complex
    lam: complex


def _checked_exponent(p: ModelParams, t: float) -> float:
    w = p.alpha * t + p.beta
    if abs(w) > _EXP_LIMIT:
        raise ExponentOverflowError(w)
    return w


def detuning(p: ModelParams, t: float) -> float:
    """O(t) = (A exp(alpha t + beta) + epsilon) / 2."""
    return 0.5 * (p.A * math.exp(_checked_exponent(p, t)) + p.epsilon)


def coupling(p: ModelParams) -> complex:
    """d = (i Delta + epsilon) / 2."""
    return 0.5 * complex(p.epsilon, p.Delta)


def hamiltonian(p: ModelParams, t: float) -> np.ndarray:
    """2x2 traceless matrix [[O, d], [d, -O]]."""
    om = detuning(p, t)
    d = coupling(p)
    return np.array([[om, d], [d, -om]], dtype=complex)


def x_of_t(p: ModelParams, t: float) -> float:
    """x = exp(alpha t + beta), strictly monotone with the sign of alpha."""
    return math.exp(_checked_exponent(p, t))


def t_of_x(p: ModelParams, x: float) -> float:
    """Inverse of x_of_t; requires x > 0."""
    if x <= 0.0:
        raise DomainError(f"t_of_x requires x > 0, got x={x}")
    return (math.log(x) - p.beta) / p.alpha


def derived_params(p: ModelParams) -> DerivedParams:
    a = 1.0 + 1j * p.epsilon / p.alpha
    b = -1j * p.A / p.alpha
    c = complex(p.epsilon, p.Delta) / (2.0 * p.alpha)
    root = cmath.sqrt((1.0 - a) ** 2 - 4.0 * c * c)
    mu1 = 0.5 * ((1.0 - a) - root)
    mu2 = 0.5 * ((1.0 - a) + root)
    gamma = 2.0 * mu1 + a
    lam = 0.5j * p.epsilon / p.alpha
    return DerivedParams(a=a, b=b, c=c, mu1=mu1, mu2=mu2, gamma=gamma, lam=lam)


def omega_integral(p: ModelParams, ta: float, tb: float) -> float:
    """Integral of the detuning over [ta, tb] (the accumulated gauge phase
    is exp(-i * omega_integral))."""
    ea = math.exp(_checked_exponent(p, ta))
    eb = math.exp(_checked_exponent(p, tb))
    return 0.5 * p.A / p.alpha * (eb - ea) + 0.5 * p.epsilon * (tb - ta)
