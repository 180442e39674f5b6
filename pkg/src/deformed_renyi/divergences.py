"""Divergences built on the solved shift, plus the classical oracles.

The generalized Renyi divergence of order alpha in (0, 1) is
kappa(alpha) / (alpha (1 - alpha)), which is non-negative since kappa >= 0.
Its endpoint values at alpha in {0, 1} are limits, and both coincide with the
phi-divergence (quotient-of-integrals generalization of Kullback-Leibler):
the alpha -> 1 limit of D(p||q) and the alpha -> 0 limit of D(q||p) equal
D_phi(p||q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .families import DeformedExponential, q_logarithm
from .jsonutil import jsonable_float
from .kappa import (
    KappaSolveResult,
    SolveStatus,
    as_u0_array,
    classical_kappa,
    solve_kappa,
)
from .measures import ProbabilityPair, integrate


@dataclass
class DivergenceReport:
    alpha: float
    kappa: float
    value: float
    family: str
    u0: str
    status: SolveStatus
    solver: KappaSolveResult | None = None

    def to_json(self):
        return {
            "alpha": self.alpha,
            "kappa": jsonable_float(self.kappa),
            "value": jsonable_float(self.value),
            "family": self.family,
            "u0": self.u0,
            "status": self.status.value,
        }


def generalized_renyi(
    family: DeformedExponential,
    pair: ProbabilityPair,
    alpha: float,
    u0=1.0,
    tol: float = 1e-12,
    u0_label: str | None = None,
) -> DivergenceReport:
    """kappa(alpha) / (alpha (1 - alpha)); +inf when the solver reports no root."""
    result = solve_kappa(family, pair, alpha, u0=u0, tol=tol)
    scale = alpha * (1.0 - alpha)
    value = result.kappa / scale if math.isfinite(result.kappa) else math.inf
    label = u0_label if u0_label is not None else _u0_label(u0)
    return DivergenceReport(alpha, result.kappa, value, family.family_id, label, result.status, result)


def _u0_label(u0) -> str:
    arr = np.asarray(u0, dtype=float)
    if arr.ndim == 0:
        return f"const:{float(arr)}"
    return f"seq[{arr.size}]"


def classical_renyi(pair: ProbabilityPair, alpha: float) -> float:
    """Closed-form oracle:  -log(integral p^alpha q^(1-alpha) dmu) / (alpha (1-alpha)).

    Equals the generalized divergence for the classical exponential with u0 = 1.
    (The alpha(1-alpha) normalization keeps the value non-negative on (0, 1);
    conventions with alpha(alpha-1) differ by sign.)
    """
    return classical_kappa(pair, alpha) / (alpha * (1.0 - alpha))


class DivergentNumerator(ArithmeticError):
    """phi-divergence numerator integral is not finite."""


class DivergentDenominator(ArithmeticError):
    """phi-divergence denominator integral is not finite or not positive."""


def phi_divergence(family: DeformedExponential, pair: ProbabilityPair, u0=1.0) -> float:
    """Quotient-of-integrals divergence

        D_phi(p||q) = [int (phi^-1(p) - phi^-1(q)) / (phi^-1)'(p) dmu]
                      / [int u0 / (phi^-1)'(p) dmu].

    For the classical exponential with u0 = 1 this reduces exactly to
    Kullback-Leibler, since (phi^-1)'(p) = 1/p.
    """
    u0_arr = as_u0_array(u0, pair.measure)
    inv_p = np.asarray(family.phi_inv(pair.p))
    inv_q = np.asarray(family.phi_inv(pair.q))
    slope = np.asarray(family.phi_inv_deriv(pair.p))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        numerator = integrate(pair.measure, (inv_p - inv_q) / slope)
        denominator = integrate(pair.measure, u0_arr / slope)
    if not math.isfinite(numerator):
        raise DivergentNumerator(f"numerator integral = {numerator}")
    if not math.isfinite(denominator) or denominator <= 0:
        raise DivergentDenominator(f"denominator integral = {denominator}")
    return numerator / denominator


def kl_divergence(pair: ProbabilityPair) -> float:
    """Kullback-Leibler divergence  integral p log(p/q) dmu."""
    return integrate(pair.measure, pair.p * (np.log(pair.p) - np.log(pair.q)))


def tsallis_relative_entropy(pair: ProbabilityPair, q_param: float) -> float:
    """Tsallis relative entropy  integral p ln_q(p/q) dmu,  q_param != 1."""
    if q_param == 1.0:
        raise ValueError("q_param must differ from 1; use kl_divergence for the limit")
    return integrate(pair.measure, pair.p * q_logarithm(pair.p / pair.q, q_param))


@dataclass
class LimitEstimate:
    """Endpoint limit of the generalized divergence along an alpha sequence."""

    endpoint: int
    value: float                 # Richardson-corrected estimate
    raw_last: float              # last table entry, uncorrected
    table: list = field(default_factory=list)  # (alpha, divergence value)
    converged: bool = True       # successive differences shrink monotonically

    def to_json(self):
        return {
            "endpoint": self.endpoint,
            "value": self.value,
            "raw_last": self.raw_last,
            "converged": self.converged,
            "table": [[a, v] for a, v in self.table],
        }


def default_alpha_sequence(endpoint: int, k_min: int = 4, k_max: int = 14) -> np.ndarray:
    ks = np.arange(k_min, k_max + 1)
    dist = np.exp2(-ks.astype(float))
    return 1.0 - dist if endpoint == 1 else dist


def limit_divergence(
    family: DeformedExponential,
    pair: ProbabilityPair,
    u0=1.0,
    endpoint: int = 1,
    alpha_sequence=None,
    tol: float = 1e-12,
) -> LimitEstimate:
    """Extrapolate the endpoint limit along alphas tending to 0 or 1.

    The estimate is the final table entry plus a single Richardson step from
    the last two entries; the full table is returned so convergence can be
    judged.  A table whose successive differences fail to shrink flags the
    estimate as non-converged.
    """
    if endpoint not in (0, 1):
        raise ValueError("endpoint must be 0 or 1")
    if alpha_sequence is None:
        alpha_sequence = default_alpha_sequence(endpoint)
    alphas = np.asarray(alpha_sequence, dtype=float)
    if alphas.size < 2:
        raise ValueError("alpha_sequence needs at least 2 points")
    dist = alphas if endpoint == 0 else 1.0 - alphas
    if np.any(dist <= 0) or np.any(np.diff(dist) >= 0):
        raise ValueError("alpha_sequence must approach the endpoint strictly monotonically inside (0, 1)")

    values = []
    for a in alphas:
        report = generalized_renyi(family, pair, float(a), u0=u0, tol=tol)
        if report.status is not SolveStatus.CONVERGED:
            raise ArithmeticError(f"solver status {report.status.value} at alpha={a}")
        values.append(report.value)
    values = np.asarray(values)

    diffs = np.abs(np.diff(values))
    window = diffs[-6:]
    converged = bool(np.all(window[1:] <= window[:-1] * 1.25 + 1e-12))

    r = dist[-1] / dist[-2]
    correction = (values[-1] - values[-2]) * r / (1.0 - r)
    estimate = float(values[-1] + correction)
    return LimitEstimate(
        endpoint=endpoint,
        value=estimate,
        raw_last=float(values[-1]),
        table=[(float(a), float(v)) for a, v in zip(alphas, values)],
        converged=converged,
    )


def kappa_derivative_at_endpoint(
    family: DeformedExponential,
    pair: ProbabilityPair,
    endpoint: int,
    u0=1.0,
    h: float = 1e-5,
    tol: float = 1e-12,
) -> float:
    """One-sided finite-difference estimate of d kappa / d alpha at 0 or 1.

    kappa vanishes at both endpoints, so the derivative reduces to
    +-kappa(h')/h' one step inside the interval.  Cross-checks the identity
    that the endpoint limits of the divergence equal the phi-divergence.
    """
    if endpoint == 0:
        return solve_kappa(family, pair, h, u0=u0, tol=tol).kappa / h
    if endpoint == 1:
        return -solve_kappa(family, pair, 1.0 - h, u0=u0, tol=tol).kappa / h
    raise ValueError("endpoint must be 0 or 1")
