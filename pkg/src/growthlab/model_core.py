"""Pure growth-model formulas.

Production functions (classic, human-capital augmented, dynamic), the three
technology indices, human-capital depreciation, and factor splits between
production and research. Everything here is a stateless function of its
arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Peak of the effective human-capital curve H**d(H).
HC_PEAK = math.e ** 3


class DomainError(ValueError):
    """Input outside the mathematical domain of a formula."""


@dataclass(frozen=True)
class ModelParams:
    """Shared calibration constants.

    alpha: capital income share. delta: capital depreciation per period.
    g: technology trend rate used in the (n + g + delta) regressor.
    """

    alpha: float = 0.3333
    delta: float = 0.02
    g: float = 0.03

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.g < 0.0:
            raise ValueError(f"g must be >= 0, got {self.g}")


@dataclass(frozen=True)
class FactorSplit:
    """A factor quantity divided between production and research."""

    total: float
    research_fraction: float
    production: float = field(init=False)
    research: float = field(init=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.research_fraction < 1.0:
            raise ValueError(
                f"research_fraction must be in [0, 1), got {self.research_fraction}"
            )
        if self.total < 0.0:
            raise ValueError(f"total must be >= 0, got {self.total}")
        object.__setattr__(self, "research", self.total * self.research_fraction)
        object.__setattr__(self, "production", self.total - self.research)


def split_factor(total: float, research_fraction: float) -> FactorSplit:
    """Divide a factor (labor or capital) into production and research parts."""
    return FactorSplit(total=total, research_fraction=research_fraction)


def depreciation_rate(h: float) -> float:
    """Human-capital depreciation exponent d = sqrt(ln(H) / H).

    Zero at H = 1; requires H >= 1 so the radicand stays nonnegative.
    """
    if h <= 0.0:
        raise DomainError(f"human capital must be positive, got {h}")
    if h < 1.0:
        raise DomainError(f"negative radicand: ln(H) < 0 for H = {h} < 1")
    return math.sqrt(math.log(h) / h)


def effective_human_capital(h: float) -> float:
    """H raised to its own depreciation rate, H**d(H).

    Increases on [1, e**3], peaks at H = e**3, then decreases: returns to
    schooling diminish and eventually turn negative.
    """
    d = depreciation_rate(h)
    return math.exp(d * math.log(h))


def technology_a1(population: float, incentives: float, ideas_per_hour: float) -> float:
    """Population x incentives x ideas-per-hour technology index."""
    _require_nonnegative(
        population=population, incentives=incentives, ideas_per_hour=ideas_per_hour
    )
    return population * incentives * ideas_per_hour


def technology_a2(researchers: float, incentives: float, ideas_per_capita: float) -> float:
    """1 + researchers x incentives x ideas-per-capita; always >= 1."""
    _require_nonnegative(
        researchers=researchers, incentives=incentives, ideas_per_capita=ideas_per_capita
    )
    return 1.0 + researchers * incentives * ideas_per_capita


def technology_a3(
    patents: float,
    labor_research: float,
    capital_research: float,
    human_capital: float,
    labor_total: float,
) -> float:
    """Human-capital-scaled technology index.

    A = 1 + (P * L_research * K_research) * H / L. Strictly increasing in each
    input; equals 1 when there are no patents.
    """
    _require_nonnegative(
        patents=patents,
        labor_research=labor_research,
        capital_research=capital_research,
        human_capital=human_capital,
    )
    if labor_total <= 0.0:
        raise ZeroDivisionError(f"labor_total must be > 0, got {labor_total}")
    return 1.0 + (patents * labor_research * capital_research) * human_capital / labor_total


def output_classic(a: float, labor: float, capital: float, alpha: float) -> float:
    """Y = A * L**(1-alpha) * K**alpha."""
    _require_nonnegative(a=a, labor=labor, capital=capital)
    return a * labor ** (1.0 - alpha) * capital ** alpha


def output_augmented(
    a: float, human_capital: float, labor: float, capital: float, alpha: float
) -> float:
    """Y = A * (H*L)**(1-alpha) * K**alpha; reduces to the classic form at H = 1."""
    _require_nonnegative(a=a, human_capital=human_capital, labor=labor, capital=capital)
    return a * (human_capital * labor) ** (1.0 - alpha) * capital ** alpha


def output_dynamic(
    patents: float,
    labor: float,
    capital: float,
    human_capital: float,
    phi_labor: float,
    phi_capital: float,
    alpha: float,
    mode: str = "cobb-douglas",
) -> float:
    """Output with endogenous technology and factor fractions diverted to research.

    cobb-douglas mode: Y = A3(P, phi_L*L, phi_K*K, H, L) * H**d
                           * (L - phi_L*L)**(1-alpha) * (K - phi_K*K)**alpha
    linear mode:       Y = (1 + P*(phi_L*L)*(phi_K*K)/L) * H
                           * (L - phi_L*L) * (K - phi_K*K)

    The linear form drops the exponents and the depreciation adjustment and is
    the one that matches the shipped sample-data trajectory tables.
    """
    for name, phi in (("phi_labor", phi_labor), ("phi_capital", phi_capital)):
        if not 0.0 <= phi < 1.0:
            raise ValueError(f"{name} must be in [0, 1), got {phi}")
    if labor <= 0.0:
        raise ValueError(f"labor must be > 0, got {labor}")
    labor_split = split_factor(labor, phi_labor)
    capital_split = split_factor(capital, phi_capital)
    if mode == "linear":
        a = 1.0 + patents * labor_split.research * capital_split.research / labor
        return a * human_capital * labor_split.production * capital_split.production
    if mode == "cobb-douglas":
        a = technology_a3(
            patents, labor_split.research, capital_split.research, human_capital, labor
        )
        hd = effective_human_capital(human_capital)
        return (
            a
            * hd
            * labor_split.production ** (1.0 - alpha)
            * capital_split.production ** alpha
        )
    raise ValueError(f"unknown mode {mode!r}; expected 'linear' or 'cobb-douglas'")


def _require_nonnegative(**values: float) -> None:
    for name, value in values.items():
        if value < 0.0:
            raise ValueError(f"{name} must be >= 0, got {value}")
