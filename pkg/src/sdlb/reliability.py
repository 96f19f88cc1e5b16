"""Integrated-reliability model: failure scenarios, traffic losses, score.

Three failure scenarios are weighed by the traffic they lose:

  scenario 0 - nothing is broken:
      P0 = P_lmm * P_c^n' * R_lmm^n,  L0 = 0
  scenario 1 - K1 junction lines are down:
      P1 = P_lmm * C(n', K1) * (1-P_c)^K1 * P_c^(n'-K1) * R_lmm^n
      L1 = sum of the traffic on the K1 lost lines
  scenario 2 - K2 LMMs are down:
      P2 = (1-P_lmm) * P_c^K2 * C(n, K2) * (1-R_lmm)^K2 * R_lmm^(n-K2)
      L2 = all junction-line traffic + the inventory traffic of the K2
           broken managers

with P_lmm = 1 - (1-R_lmm)^n (redundancy of the manager pool; the exponent
can be overridden, see ReliabilityParams.redundancy_exponent) and
P_c = 1 - (1-R_c)^2 (each manager reaches its backups over two lines).
n' = floor(n/3) + n % 3 + 1 junction lines exist for n managers.

The integrated score weighs the loss of each scenario by its probability,
normalised by the total carried traffic B:

      R = 1 - (P0*L0 + P1*L1 + P2*L2) / B

Binomial factors are evaluated in log space once the population exceeds
170 (where the intermediate coefficient would overflow a float). The
score is not clamped: values outside [0, 1] signal abusive parameters,
not a bug.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .topology import max_junction_lines

__all__ = [
    "ReliabilityParams",
    "ScenarioProbabilities",
    "integrated_reliability",
    "scenario_probabilities",
    "uniform_reliability_params",
]

# largest population for which C(n, k) is safely computed directly
_DIRECT_COMB_LIMIT = 170


def _log_comb(n: int, k: int) -> float:
    """log C(n, k) via lgamma; used above the direct-evaluation limit."""
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    )


def binomial_pmf(trials: int, failures: int, fail_prob: float) -> float:
    """C(trials, failures) * q^failures * (1-q)^(trials-failures).

    Direct for small populations, log space for large ones.
    """
    if not 0 <= failures <= trials:
        return 0.0
    q = fail_prob
    if trials <= _DIRECT_COMB_LIMIT:
        return math.comb(trials, failures) * q**failures * (1.0 - q) ** (trials - failures)
    if q == 0.0:
        return 1.0 if failures == 0 else 0.0
    if q == 1.0:
        return 1.0 if failures == trials else 0.0
    logp = (
        _log_comb(trials, failures)
        + failures * math.log(q)
        + (trials - failures) * math.log1p(-q)
    )
    return math.exp(logp)


@dataclass(frozen=True)
class ReliabilityParams:
    """r_lmm / r_c: per-manager and per-junction-line reliabilities;
    n: manager count; k1_lines / k2_lmms: how many lines / managers fail
    in scenarios 1 and 2; c: junction-line traffic intensities (length
    n'); b: 3 x n inventory-to-manager traffic intensities.

    redundancy_exponent overrides the exponent of the manager-pool
    redundancy term 1 - (1-r_lmm)^n (None keeps the literal n)."""

    r_lmm: float
    r_c: float
    n: int
    k1_lines: int
    k2_lmms: int
    c: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    redundancy_exponent: int | None = None

    def __post_init__(self):
        for name in ("r_lmm", "r_c"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        n_lines = max_junction_lines(self.n)
        if not 1 <= self.k1_lines <= n_lines:
            raise ValueError(
                f"k1_lines must be in 1..{n_lines} (junction lines for n={self.n}), "
                f"got {self.k1_lines}"
            )
        if not 1 <= self.k2_lmms <= self.n:
            raise ValueError(f"k2_lmms must be in 1..{self.n}, got {self.k2_lmms}")
        c = np.asarray(self.c, dtype=float)
        b = np.asarray(self.b, dtype=float)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", b)
        if c.shape != (n_lines,):
            raise ValueError(f"c must have shape ({n_lines},), got {c.shape}")
        if b.shape != (3, self.n):
            raise ValueError(f"b must have shape (3, {self.n}), got {b.shape}")
        if (c < 0).any() or (b < 0).any():
            raise ValueError("traffic intensities must be >= 0")
        if self.redundancy_exponent is not None and self.redundancy_exponent < 1:
            raise ValueError(
                f"redundancy_exponent must be >= 1, got {self.redundancy_exponent}"
            )

    @property
    def n_lines(self) -> int:
        return max_junction_lines(self.n)

    @property
    def total_traffic(self) -> float:
        return float(self.c.sum() + self.b.sum())


@dataclass(frozen=True)
class ScenarioProbabilities:
    """Scenario probabilities and their traffic losses; l0 is always 0."""

    p_lmm: float
    p_c: float
    p0: float
    p1: float
    p2: float
    l0: float
    l1: float
    l2: float


def scenario_probabilities(p: ReliabilityParams) -> ScenarioProbabilities:
    """Evaluate the three failure scenarios for one (K1, K2) choice."""
    exponent = p.n if p.redundancy_exponent is None else p.redundancy_exponent
    p_lmm = 1.0 - (1.0 - p.r_lmm) ** exponent
    p_c = 1.0 - (1.0 - p.r_c) ** 2
    r_pow_n = p.r_lmm**p.n

    p0 = p_lmm * p_c**p.n_lines * r_pow_n
    p1 = p_lmm * binomial_pmf(p.n_lines, p.k1_lines, 1.0 - p_c) * r_pow_n
    p2 = (
        (1.0 - p_lmm)
        * p_c**p.k2_lmms
        * binomial_pmf(p.n, p.k2_lmms, 1.0 - p.r_lmm)
    )

    l1 = float(p.c[: p.k1_lines].sum())
    l2 = float(p.c.sum() + p.b[:, : p.k2_lmms].sum())
    return ScenarioProbabilities(
        p_lmm=p_lmm, p_c=p_c, p0=p0, p1=p1, p2=p2, l0=0.0, l1=l1, l2=l2
    )


def integrated_reliability(p: ReliabilityParams) -> float:
    """1 minus the traffic-weighted expected loss fraction."""
    total = p.total_traffic
    if total <= 0:
        raise ValueError("zero traffic: total traffic intensity must be > 0")
    s = scenario_probabilities(p)
    return 1.0 - (s.p0 * s.l0 + s.p1 * s.l1 + s.p2 * s.l2) / total


def uniform_reliability_params(
    n: int,
    r_lmm: float,
    r_c: float,
    k1_lines: int = 1,
    k2_lmms: int = 1,
    c_value: float = 1.0,
    b_value: float = 1.0,
    redundancy_exponent: int | None = None,
) -> ReliabilityParams:
    """Params with uniform traffic: every line carries c_value, every
    inventory-manager pair b_value."""
    return ReliabilityParams(
        r_lmm=r_lmm,
        r_c=r_c,
        n=n,
        k1_lines=k1_lines,
        k2_lmms=k2_lmms,
        c=np.full(max_junction_lines(n), float(c_value)),
        b=np.full((3, n), float(b_value)),
        redundancy_exponent=redundancy_exponent,
    )
