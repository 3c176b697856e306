"""Constant-Hamiltonian (Rabi) limit of the exponential model.

When alpha*t + beta -> -infinity the exponential term vanishes and the
Hamiltonian freezes at H = (eps/2) sigma_z + ((eps + i Delta)/2) sigma_x.
This module provides the quoted closed-form survival probability

    P(t) = (4 eps^2 + 3 d^2) / (4 (eps^2 + d^2)) * sin^2(sqrt(eps^2 + d^2) t / 2),
    d = eps + i Delta,

evaluated literally over the complex numbers (principal square root), an
independent matrix-exponential oracle for the same constant Hamiltonian, a
convergence check quantifying how fast the exponential model approaches this
limit, and the 2-D interferogram grid over (t, epsilon).

The closed form and the oracle are deliberately kept as separate routes; any
systematic difference between them at Delta != 0 (or in the Delta = 0
coefficient) is measured by the tests rather than reconciled here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, DomainError
from .model import AxisSpec, ModelParams
from .oracle import IntegratorConfig, constant_h_propagator, integrate_tdse
from .analytic import AmplitudePair, PopulationRecord


@dataclass(frozen=True)
class RabiParams:
    epsilon: float
    Delta: float
    t: float


@dataclass(frozen=True)
class RabiSurvival:
    """Complex closed-form survival value with its reporting projections."""

    value: complex
    real_part: float
    modulus: float


@dataclass(frozen=True)
class InterferogramGrid:
    """Survival populations over a (t, epsilon) grid at fixed Delta.

    Row-major: entry [i][j] belongs to (t_axis[i], eps_axis[j]).  Three
    layers are stored: the closed form's real part and modulus (the two
    reporting conventions) and the matrix-exponential oracle's
    modulus-squared survival.
    """

    t_axis: AxisSpec
    eps_axis: AxisSpec
    Delta: float
    p_real: list
    p_modulus: list
    p_mod2_oracle: list


def _rabi_hamiltonian(epsilon: float, Delta: float) -> np.ndarray:
    om = 0.5 * epsilon
    d = 0.5 * complex(epsilon, Delta)
    return np.array([[om, d], [d, -om]], dtype=complex)


def rabi_survival_closed_form(r: RabiParams) -> RabiSurvival:
    """Literal complex evaluation of the quoted survival formula."""
    d2 = complex(r.epsilon, r.Delta) ** 2
    denom = r.epsilon ** 2 + d2
    if abs(denom) < 1e-300:
        raise DegeneracyError("degenerate frequency: eps^2 + (eps + i Delta)^2 = 0")
    freq = cmath.sqrt(denom)
    value = (4.0 * r.epsilon ** 2 + 3.0 * d2) / (4.0 * denom) * cmath.sin(
        0.5 * freq * r.t
    ) ** 2
    return RabiSurvival(value=value, real_part=value.real, modulus=abs(value))


def rabi_survival_oracle(r: RabiParams) -> PopulationRecord:
    """Constant-H propagation of the initial state (1, 0).

    The survival amplitude U11 is reported in the p22 slots (it plays the
    role the diagonal element plays elsewhere) and the transfer amplitude
    U21 in the p12 slots, under both reporting conventions.
    """
    u = constant_h_propagator(_rabi_hamiltonian(r.epsilon, r.Delta), r.t)
    surv, trans = u[0, 0], u[1, 0]
    p_surv = abs(surv) ** 2
    p_trans = abs(trans) ** 2
    return PopulationRecord(
        p12_paper=trans.real + trans.imag,
        p22_paper=surv.real + surv.imag,
        p12_mod2=p_trans,
        p22_mod2=p_surv,
        norm=p_surv + p_trans,
        t0=0.0,
        t=r.t,
    )


# exponential magnitude below which the model counts as "in the Rabi limit"
RABI_LIMIT_THRESHOLD = 1e-3


def rabi_limit_convergence(p: ModelParams, t_probe: float, n_samples: int = 33) -> float:
    """Max population deviation between the exponential model and its frozen
    limit over a two-Rabi-period window starting at t_probe.

    Requires the exponential term A e^(alpha t + beta) to be below
    RABI_LIMIT_THRESHOLD * |epsilon| at t_probe; the measured deviation
    scales linearly with that magnitude for a fixed window.
    """
    mag = abs(p.A) * math.exp(p.alpha * t_probe + p.beta)
    if p.epsilon == 0 or mag >= RABI_LIMIT_THRESHOLD * abs(p.epsilon):
        raise DomainError(
            f"exponential term magnitude {mag:.3e} is not below "
            f"{RABI_LIMIT_THRESHOLD} * |epsilon| = {RABI_LIMIT_THRESHOLD * abs(p.epsilon):.3e} "
            f"at t_probe = {t_probe}"
        )
    h = _rabi_hamiltonian(p.epsilon, p.Delta)
    rho = abs(cmath.sqrt(complex(h[0, 0]) ** 2 + complex(h[0, 1]) ** 2))
    window = 2.0 * (2.0 * math.pi / rho) if rho > 0 else 1.0
    if p.A != 0 and p.alpha > 0:
        # keep the perturbation from growing by more than 2x over the window,
        # otherwise the probe point no longer characterizes the limit
        window = min(window, math.log(2.0) / p.alpha)
    ts = np.linspace(t_probe, t_probe + window, n_samples)
    q = ModelParams(
        A=p.A, alpha=p.alpha, beta=p.beta, epsilon=p.epsilon, Delta=p.Delta,
        t0=t_probe - 1.0, t1=float(ts[-1]),
    )
    res = integrate_tdse(
        q,
        AmplitudePair(c1=1.0, c2=0.0, t=t_probe),
        IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14),
        t_eval=ts,
    )
    dev = 0.0
    for tt, sample in zip(ts, res.samples):
        u = constant_h_propagator(h, float(tt) - t_probe)
        dev = max(
            dev,
            abs(abs(sample[0]) ** 2 - abs(u[0, 0]) ** 2),
            abs(abs(sample[1]) ** 2 - abs(u[1, 0]) ** 2),
        )
    return float(dev)


def interferogram(r_template: RabiParams, t_axis: AxisSpec, eps_axis: AxisSpec) -> InterferogramGrid:
    """Survival-population grid over (t, epsilon) at Delta fixed by the template."""
    if t_axis.name != "t" or eps_axis.name != "epsilon":
        raise DomainError("interferogram axes must be named 't' and 'epsilon'")
    Delta = r_template.Delta
    p_real, p_mod, p_orc = [], [], []
    for t in t_axis.values():
        row_r, row_m, row_o = [], [], []
        for eps in eps_axis.values():
            r = RabiParams(epsilon=eps, Delta=Delta, t=t)
            cf = rabi_survival_closed_form(r)
            row_r.append(cf.real_part)
            row_m.append(cf.modulus)
            row_o.append(rabi_survival_oracle(r).p22_mod2)
        p_real.append(row_r)
        p_mod.append(row_m)
        p_orc.append(row_o)
    return InterferogramGrid(
        t_axis=t_axis,
        eps_axis=eps_axis,
        Delta=Delta,
        p_real=p_real,
        p_modulus=p_mod,
        p_mod2_oracle=p_orc,
    )
