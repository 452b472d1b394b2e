"""Pooled OLS with the full diagnostic battery.

Coefficients, Student-t p-values, information criteria (AIC / Schwarz /
Hannan-Quinn), Durbin-Watson and first-order autocorrelation honoring panel
unit boundaries, and model comparison by the criteria.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from typing import Sequence

import numpy as np
import pandas as pd
from scipy.special import betainc

EXACT_FIT_SSR = 1e-12  # below this the design interpolates the data


class CollinearityError(ValueError):
    """Design matrix is rank deficient."""


class InsufficientDataError(ValueError):
    """Fewer observations than parameters."""


@dataclass(frozen=True)
class RegressionSpec:
    dependent: str
    regressors: tuple[str, ...]
    include_intercept: bool = True

    def __post_init__(self) -> None:
        if not self.regressors:
            raise ValueError("regressors must be nonempty")
        if len(set(self.regressors)) != len(self.regressors):
            raise ValueError("regressors must be distinct")
        if self.dependent in self.regressors:
            raise ValueError(f"dependent {self.dependent!r} is also a regressor")


@dataclass(frozen=True)
class CoefficientStat:
    name: str
    coefficient: float
    std_error: float
    t_ratio: float
    p_value: float
    stars: str


@dataclass(frozen=True)
class Diagnostics:
    n_obs: int
    n_params: int
    ssr: float
    ser: float
    r_squared: float
    adj_r_squared: float
    f_stat: float
    f_pvalue: float
    log_likelihood: float
    aic: float
    bic: float
    hannan_quinn: float
    durbin_watson: float | None
    rho: float | None
    dep_mean: float
    dep_sd: float
    exact_fit: bool = False


@dataclass(frozen=True)
class RegressionResult:
    spec: RegressionSpec
    coefficients: tuple[CoefficientStat, ...]
    diagnostics: Diagnostics
    n_units: int
    time_series_desc: str
    residuals: tuple[float, ...] = field(repr=False, default=())

    def coefficient(self, name: str) -> CoefficientStat:
        for stat in self.coefficients:
            if stat.name == name:
                return stat
        raise KeyError(name)


def significance_stars(p: float) -> str:
    if p <= 0.01:
        return "***"
    if p <= 0.05:
        return "**"
    if p <= 0.10:
        return "*"
    return ""


def student_t_pvalue(t: float, dof: int) -> float:
    """Two-tailed p-value from the Student-t distribution.

    Uses the regularized incomplete beta identity
    p = I_{dof/(dof+t^2)}(dof/2, 1/2).
    """
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    if t == 0.0:
        return 1.0
    x = dof / (dof + t * t)
    return float(betainc(dof / 2.0, 0.5, x))


def f_pvalue(f: float, dof1: int, dof2: int) -> float:
    """Upper-tail F probability via the regularized incomplete beta."""
    if f <= 0.0:
        return 1.0
    x = dof2 / (dof2 + dof1 * f)
    return float(betainc(dof2 / 2.0, dof1 / 2.0, x))


def durbin_watson_rho(
    residuals: Sequence[float], unit_starts: Sequence[int]
) -> tuple[float, float]:
    """Durbin-Watson statistic and first-order rho over within-unit pairs.

    unit_starts gives the index where each cross-sectional unit begins
    (first entry 0); pairs straddling a boundary are excluded from the sums.
    """
    e = np.asarray(residuals, dtype=float)
    n = e.size
    starts = set(unit_starts)
    if 0 not in starts:
        raise ValueError("unit_starts must begin with 0")
    pair_idx = [t for t in range(1, n) if t not in starts]
    if not pair_idx:
        raise ValueError("no consecutive within-unit residual pairs")
    curr = e[pair_idx]
    prev = e[[t - 1 for t in pair_idx]]
    denom_dw = float(np.sum(e**2))
    if denom_dw == 0.0:
        raise ValueError("all residuals are zero; statistic undefined")
    dw = float(np.sum((curr - prev) ** 2)) / denom_dw
    denom_rho = float(np.sum(prev**2))
    rho = float(np.sum(curr * prev)) / denom_rho if denom_rho > 0.0 else 0.0
    return dw, rho


def compute_diagnostics(
    n: int,
    k: int,
    ssr: float,
    dep_mean: float,
    dep_sd: float,
    residuals: Sequence[float] = (),
    unit_starts: Sequence[int] = (0,),
) -> Diagnostics:
    """All scalar diagnostics from the sufficient statistics.

    Gaussian log-likelihood LL = -(n/2) * (1 + ln(2*pi) + ln(SSR/n)); the
    criteria are AIC = 2k - 2LL, BIC = k*ln(n) - 2LL,
    HQ = 2k*ln(ln(n)) - 2LL.
    """
    if n <= k:
        raise InsufficientDataError(f"n = {n} must exceed k = {k}")
    if ssr < 0.0:
        raise ValueError(f"SSR must be >= 0, got {ssr}")
    if dep_sd <= 0.0:
        raise ValueError(f"dependent SD must be > 0, got {dep_sd}")
    exact_fit = ssr <= EXACT_FIT_SSR
    if exact_fit:
        ll = math.inf
        aic = bic = hq = -math.inf
        r2 = 1.0
        adj_r2 = 1.0
        f_stat = math.inf
        f_p = 0.0
        ser = 0.0
    else:
        ll = -(n / 2.0) * (1.0 + math.log(2.0 * math.pi) + math.log(ssr / n))
        aic = 2.0 * k - 2.0 * ll
        bic = k * math.log(n) - 2.0 * ll
        hq = 2.0 * k * math.log(math.log(n)) - 2.0 * ll
        tss = (n - 1) * dep_sd**2
        r2 = 1.0 - ssr / tss
        adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / (n - k)
        f_stat = (r2 / (k - 1)) / ((1.0 - r2) / (n - k)) if k > 1 else math.nan
        f_p = f_pvalue(f_stat, k - 1, n - k) if k > 1 else math.nan
        ser = math.sqrt(ssr / (n - k))
    dw = rho = None
    if len(residuals) >= 2:
        try:
            dw, rho = durbin_watson_rho(residuals, unit_starts)
        except ValueError:
            pass
    return Diagnostics(
        n_obs=n,
        n_params=k,
        ssr=ssr,
        ser=ser,
        r_squared=r2,
        adj_r_squared=adj_r2,
        f_stat=f_stat,
        f_pvalue=f_p,
        log_likelihood=ll,
        aic=aic,
        bic=bic,
        hannan_quinn=hq,
        durbin_watson=dw,
        rho=rho,
        dep_mean=dep_mean,
        dep_sd=dep_sd,
        exact_fit=exact_fit,
    )


def fit_pooled_ols(
    panel: pd.DataFrame,
    spec: RegressionSpec,
    unit_col: str = "country",
    time_col: str = "year",
) -> RegressionResult:
    """Pooled OLS over stacked (unit, time) observations.

    Rows are sorted by (unit, time) so that the Durbin-Watson sums respect
    unit boundaries. Raises CollinearityError naming the dependent columns on
    a rank-deficient design.
    """
    needed = [spec.dependent, *spec.regressors]
    missing = [c for c in needed if c not in panel.columns]
    if missing:
        raise KeyError(
            f"variables not in panel: {missing}; available: {sorted(panel.columns)}"
        )
    cols = list(needed)
    if unit_col in panel.columns:
        sort_cols = [unit_col] + ([time_col] if time_col in panel.columns else [])
        data = panel.sort_values(sort_cols, kind="mergesort")
        units = data[unit_col].to_numpy()
    else:
        data = panel
        units = np.zeros(len(panel))
    data = data[cols + [c for c in (unit_col, time_col) if c in data.columns]]
    values = data[cols].to_numpy(dtype=float)
    if not np.all(np.isfinite(values)):
        bad = [c for c in cols if not np.all(np.isfinite(data[c].to_numpy(dtype=float)))]
        raise ValueError(f"non-finite values in columns: {bad}")

    y = values[:, 0]
    x = values[:, 1:]
    names = list(spec.regressors)
    if spec.include_intercept:
        x = np.column_stack([np.ones(len(y)), x])
        names = ["const"] + names
    n, k = x.shape
    if n <= k:
        raise InsufficientDataError(f"{n} observations for {k} parameters")

    # Rank check at a relative singular-value threshold; name a minimal
    # culprit set via pivoted elimination before refusing to fit.
    sv = np.linalg.svd(x, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        dependent_cols = _dependent_columns(x, names)
        raise CollinearityError(f"design matrix is rank deficient: {dependent_cols}")

    beta, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ beta
    ssr = float(resid @ resid)
    dep_mean = float(np.mean(y))
    dep_sd = float(np.std(y, ddof=1))

    unique_units, first_idx = np.unique(units, return_index=True)
    unit_starts = sorted(int(i) for i in first_idx)
    diag = compute_diagnostics(n, k, ssr, dep_mean, dep_sd, resid, unit_starts)

    sigma2 = ssr / (n - k) if not diag.exact_fit else 0.0
    xtx_inv = np.linalg.inv(x.T @ x)
    se = np.sqrt(np.maximum(sigma2 * np.diag(xtx_inv), 0.0))
    stats = []
    for name, b, s in zip(names, beta, se):
        t_ratio = b / s if s > 0.0 else math.inf * np.sign(b)
        p = student_t_pvalue(t_ratio, n - k) if math.isfinite(t_ratio) else 0.0
        stats.append(
            CoefficientStat(
                name=name,
                coefficient=float(b),
                std_error=float(s),
                t_ratio=float(t_ratio),
                p_value=float(p),
                stars=significance_stars(p),
            )
        )

    counts = pd.Series(units).value_counts()
    t_min, t_max = int(counts.min()), int(counts.max())
    desc = (
        f"Time-series length = {t_max}"
        if t_min == t_max
        else f"Time-series length: varying (minimum {t_min}, maximum {t_max})"
    )
    return RegressionResult(
        spec=spec,
        coefficients=tuple(stats),
        diagnostics=diag,
        n_units=len(unique_units),
        time_series_desc=desc,
        residuals=tuple(float(e) for e in resid),
    )


def _dependent_columns(x: np.ndarray, names: list[str]) -> list[str]:
    kept: list[int] = []
    culprits = []
    for j in range(x.shape[1]):
        trial = x[:, kept + [j]]
        sv = np.linalg.svd(trial, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            culprits.append(names[j])
        else:
            kept.append(j)
    return culprits


def compare_models(
    results: Sequence[RegressionResult], names: Sequence[str] | None = None
) -> dict:
    """Rank fitted models by BIC (then AIC) ascending; lower is better."""
    if len(results) < 2:
        raise ValueError("need at least two models to compare")
    if names is None:
        names = [f"model_{i + 1}" for i in range(len(results))]
    rows = []
    for name, res in zip(names, results):
        d = res.diagnostics
        rows.append(
            {
                "name": name,
                "bic": d.bic,
                "aic": d.aic,
                "log_likelihood": d.log_likelihood,
                "ssr": d.ssr,
                "ser": d.ser,
                "r_squared": d.r_squared,
            }
        )
    ranked = sorted(rows, key=lambda r: (r["bic"], r["aic"]))
    best = ranked[0]
    tie = len(ranked) > 1 and (ranked[0]["bic"], ranked[0]["aic"]) == (
        ranked[1]["bic"],
        ranked[1]["aic"],
    )
    deltas = [
        {
            "name": r["name"],
            "delta_bic": r["bic"] - best["bic"],
            "delta_aic": r["aic"] - best["aic"],
            "delta_log_likelihood": r["log_likelihood"] - best["log_likelihood"],
            "delta_ssr": r["ssr"] - best["ssr"],
            "delta_ser": r["ser"] - best["ser"],
            "delta_r_squared": r["r_squared"] - best["r_squared"],
        }
        for r in ranked
    ]
    return {"ranking": ranked, "winner": best["name"], "tie": tie, "deltas": deltas}


def _fmt_p(p: float) -> str:
    if p < 1e-4:
        return f"{p:.3g}"
    return f"{p:.4f}"


def format_result_table(result: RegressionResult, title: str = "Pooled OLS") -> str:
    """Plain-text table: coefficient block plus the diagnostic block."""
    d = result.diagnostics
    lines = [
        f"{title}, using {d.n_obs} observations",
        f"Included {result.n_units} cross-sectional units",
        result.time_series_desc,
        f"Dependent variable: {result.spec.dependent}",
        "",
        f"  {'':30s} {'coefficient':>12s} {'std. error':>12s} {'t-ratio':>10s} {'p-value':>10s}",
    ]
    for c in result.coefficients:
        lines.append(
            f"  {c.name:30s} {c.coefficient:>12.6g} {c.std_error:>12.6g} "
            f"{c.t_ratio:>10.4g} {_fmt_p(c.p_value):>10s} {c.stars}"
        )
    lines.append("")
    pairs = [
        ("Mean dependent var", d.dep_mean, "S.D. dependent var", d.dep_sd),
        ("Sum squared resid", d.ssr, "S.E. of regression", d.ser),
        ("R-squared", d.r_squared, "Adjusted R-squared", d.adj_r_squared),
        (
            f"F({d.n_params - 1}, {d.n_obs - d.n_params})",
            d.f_stat,
            "P-value(F)",
            d.f_pvalue,
        ),
        ("Log-likelihood", d.log_likelihood, "Akaike criterion", d.aic),
        ("Schwarz criterion", d.bic, "Hannan-Quinn", d.hannan_quinn),
    ]
    if d.rho is not None and d.durbin_watson is not None:
        pairs.append(("rho", d.rho, "Durbin-Watson", d.durbin_watson))
    for l_name, l_val, r_name, r_val in pairs:
        lines.append(f"  {l_name:22s} {l_val:>12.6f}   {r_name:22s} {r_val:>12.6g}")
    return "\n".join(lines) + "\n"


def result_to_json(result: RegressionResult) -> str:
    doc = {
        "spec": {
            "dependent": result.spec.dependent,
            "regressors": list(result.spec.regressors),
            "include_intercept": result.spec.include_intercept,
        },
        "coefficients": [asdict(c) for c in result.coefficients],
        "diagnostics": asdict(result.diagnostics),
        "n_units": result.n_units,
        "time_series_desc": result.time_series_desc,
    }
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"
