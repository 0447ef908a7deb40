"""Closed-form engine for single-photon subtraction at a beamsplitter.

Two squeezed two-photon superpositions enter a beamsplitter of angle
gamma; detecting exactly one photon in the second output leaves the first
in an odd quintic-times-Gaussian wavefunction

    psi_out(x) = prefactor * exp(-c x^2) * (b1 x + b3 x^3 + b5 x^5).

Everything downstream (success probability, overlap with a squeezed odd
cat, stellar rank) is evaluated from (b1, b3, b5, c) in closed form. The
second mode is internally re-parametrized with r2 -> -r2, theta2 ->
-theta2, which makes every coefficient real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError, ZeroProbability
from .states import R_MAX, CatTarget

__all__ = [
    "BeamsplitterCVConfig",
    "QuinticWavefunction",
    "StellarReport",
    "gaussian_reduction",
    "quintic_coefficients",
    "success_probability_cv",
    "fidelity_cv",
    "stellar_rank",
]

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class BeamsplitterCVConfig:
    """Input squeezing (r1, r2), angles (theta1, theta2), beamsplitter gamma.

    gamma is restricted to [0, pi/2]; cos(gamma) is the transmission of the
    monitored mode.
    """

    r1: float
    theta1: float
    r2: float
    theta2: float
    gamma: float

    def __post_init__(self):
        vals = (self.r1, self.theta1, self.r2, self.theta2, self.gamma)
        if not all(np.isfinite(v) for v in vals):
            raise DomainError("configuration values must be finite")
        if abs(self.r1) > R_MAX or abs(self.r2) > R_MAX:
            raise DomainError(f"|r| exceeds R_MAX = {R_MAX}")
        if not 0.0 <= self.gamma <= np.pi / 2.0 + 1e-12:
            raise DomainError("gamma must lie in [0, pi/2]")

    # Real-coefficient parametrization: the second mode carries r2 -> -r2,
    # theta2 -> -theta2, so s2 is exp(-r2).
    @property
    def s1(self) -> float:
        return float(np.exp(self.r1))

    @property
    def s2(self) -> float:
        return float(np.exp(-self.r2))

    @property
    def theta2_eff(self) -> float:
        return -self.theta2


@dataclass(frozen=True)
class QuinticWavefunction:
    """Unnormalized heralded output: prefactor * e^{-c x^2} (b1 x + b3 x^3 + b5 x^5)."""

    b1: float
    b3: float
    b5: float
    a: float
    b: float
    c: float
    s1: float
    s2: float
    prefactor: float

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.prefactor * np.exp(-self.c * x * x) * (
            self.b1 * x + self.b3 * x**3 + self.b5 * x**5
        )


@dataclass(frozen=True)
class StellarReport:
    rank: int
    vanished: frozenset
    tolerance: float


def gaussian_reduction(cfg: BeamsplitterCVConfig) -> tuple[float, float, float]:
    """Quadratic-form constants (a, b, c) of the heralding integral."""
    s1sq, s2sq = cfg.s1**2, cfg.s2**2
    sg, cg = np.sin(cfg.gamma), np.cos(cfg.gamma)
    a = (sg * sg / s1sq + cg * cg / s2sq + 1.0) / 2.0
    b = (1.0 / s1sq - 1.0 / s2sq) * np.sin(2.0 * cfg.gamma) / 4.0
    c = (cg * cg / s1sq + sg * sg / s2sq - 2.0 * b * b / a) / 2.0
    if a <= 0.0 or c <= 0.0:
        raise DegenerateError(f"non-normalizable reduction: a={a:g}, c={c:g}")
    return float(a), float(b), float(c)


def quintic_coefficients(cfg: BeamsplitterCVConfig) -> QuinticWavefunction:
    """Polynomial coefficients of the single-photon-heralded output."""
    a, b, c = gaussian_reduction(cfg)
    s1, s2 = cfg.s1, cfg.s2
    h1, h2 = cfg.theta1 / 2.0, cfg.theta2_eff / 2.0
    c1, s1h = np.cos(h1), np.sin(h1)
    c2, s2h = np.cos(h2), np.sin(h2)

    A = (c1 - s1h / SQRT2) * (c2 - s2h / SQRT2)
    B = SQRT2 / s1**2 * s1h * (c2 - s2h / SQRT2)
    C = SQRT2 / s2**2 * s2h * (c1 - s1h / SQRT2)
    D = 2.0 / (s1**2 * s2**2) * s1h * s2h

    sin2g, cos2g = np.sin(2 * cfg.gamma), np.cos(2 * cfg.gamma)
    sin4g, cos4g = np.sin(4 * cfg.gamma), np.cos(4 * cfg.gamma)
    sg2, cg2 = np.sin(cfg.gamma) ** 2, np.cos(cfg.gamma) ** 2
    ba = b / a

    b1 = (
        -A * b
        + (B - C) / 2.0 * sin2g
        - 1.5 * ba * (B * sg2 + C * cg2)
        + 3.0 / (8.0 * a) * D * sin4g
        - 15.0 * ba / (16.0 * a) * D * sin2g**2
    ) / a

    b3 = (
        -ba * (B * cg2 + C * sg2)
        + D * sin4g / (2.0 * a) * (3.0 * ba**2 - 0.5)
        + ba**2 * (B - C) * sin2g
        - ba**3 * (B * sg2 + C * cg2)
        - 1.5 * ba / a * D * (cos4g + sin2g**2 / 2.0)
        - 1.25 * ba**3 / a * D * sin2g**2
    )

    b5 = (
        D
        * ba
        * (
            -(ba**4 / 4.0 + ba**2 / 2.0 + 0.25) * sin2g**2
            + ba / 2.0 * (ba**2 - 1.0) * sin4g
            - ba**2 * cos4g
        )
    )

    prefactor = np.pi**-0.25 * np.sqrt(2.0 / (s1 * s2 * a))
    return QuinticWavefunction(
        b1=float(b1), b3=float(b3), b5=float(b5),
        a=a, b=b, c=c, s1=s1, s2=s2, prefactor=float(prefactor),
    )


def success_probability_cv(q: QuinticWavefunction) -> float:
    """Heralding probability: the squared norm of the quintic output."""
    c = q.c
    bracket = (
        q.b1**2 / (4 * c)
        + 3.0 * q.b1 * q.b3 / (8 * c**2)
        + 15.0 * (q.b3**2 + 2.0 * q.b1 * q.b5) / (64 * c**3)
        + 105.0 * q.b3 * q.b5 / (128 * c**4)
        + 945.0 * q.b5**2 / (1024 * c**5)
    )
    return float(np.sqrt(2.0) / (q.s1 * q.s2 * q.a * np.sqrt(c)) * bracket)


def fidelity_cv(q: QuinticWavefunction, target: CatTarget) -> float:
    """Overlap of the normalized output with a squeezed odd cat.

    The cat carries amplitude alpha and post-squeezing s = e^{r_post};
    only odd parity targets make sense for a single-photon herald.
    """
    if target.parity != "odd":
        raise DomainError("single-photon heralding targets an odd cat")
    p_suc = success_probability_cv(q)
    if p_suc == 0.0:
        raise ZeroProbability("output state has zero weight")
    alpha = target.alpha
    s = float(np.exp(target.r_post))
    # -expm1 keeps precision for vanishing cats where 1 - e^{-2a^2} ~ 2a^2
    n_cat = -2.0 * np.expm1(-2.0 * alpha**2) * np.sqrt(np.pi) * s * np.exp(2.0 * alpha**2)
    t = 2.0 * s * s * q.c + 1.0
    k = SQRT2 * alpha * s / t
    poly = (
        (q.b1 + 3.0 * s * s * q.b3 / t + 15.0 * s**4 * q.b5 / t**2) * k
        + (q.b3 + 10.0 * s * s * q.b5 / t) * k**3
        + q.b5 * k**5
    )
    pref = 16.0 * np.sqrt(np.pi) * s * s / (n_cat * p_suc * q.s1 * q.s2 * q.a * t)
    return float(pref * np.exp(2.0 * alpha**2 / t) * poly**2)


def stellar_rank(q: QuinticWavefunction, tol: float = 1e-12) -> StellarReport:
    """Degree of the output's stellar polynomial after thresholding.

    Coefficients below tol * max|b| are treated as exact zeros; the rank is
    the highest surviving odd degree (0 if none survive).
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    mags = {"b1": abs(q.b1), "b3": abs(q.b3), "b5": abs(q.b5)}
    scale = max(mags.values())
    if scale == 0.0:
        return StellarReport(rank=0, vanished=frozenset(mags), tolerance=tol)
    vanished = frozenset(k for k, v in mags.items() if v <= tol * scale)
    for label, rank in (("b5", 5), ("b3", 3), ("b1", 1)):
        if label not in vanished:
            return StellarReport(rank=rank, vanished=vanished, tolerance=tol)
    return StellarReport(rank=0, vanished=vanished, tolerance=tol)
