"""Panel construction from local dataset snapshots.

Loads delimited snapshots of the three source kinds (national accounts,
education attainment, development indicators), merges them on (country, year)
with a complete-case rule, filters to the analysis years, and derives every
model variable including the log transforms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from .model_core import ModelParams, effective_human_capital, technology_a3

HOURS_PER_YEAR = 8760.0

DEFAULT_YEARS = [1965, 1970, 1975, 1980, 1985, 1990, 1995, 2000, 2005]

# Entities dropped before merging: duplicate series, defunct states, and
# countries present in only one source.
DEFAULT_EXCLUSIONS = [
    "China 2",
    "Zaire",
    "Reunion",
    "Myanmar",
    "Democratic Republic of the Congo",
    "Gambia",
]

# canonical column set per source kind
SOURCE_SCHEMAS = {
    "pwt": ["country", "year", "population", "labor", "output", "inv_share"],
    "education": ["country", "year", "schooling"],
    "indicators": ["country", "year", "patents", "gdp_rd_share"],
}

# default scale factors applied on load (percent points -> fractions)
DEFAULT_SCALES = {"inv_share": 0.01, "gdp_rd_share": 0.01}

RAW_COLUMNS = ["population", "labor", "output", "inv_share", "schooling", "patents", "gdp_rd_share"]
DERIVED_COLUMNS = ["YL", "n", "s_k", "Pc", "Ph", "Hd", "A"]
LN_COLUMNS = ["ln_YL", "ln_s", "ln_n_g_delta", "ln_HK", "ln_Pc", "ln_Ph", "ln_Hd", "ln_A", "ln_GDP_RD"]


class SchemaError(ValueError):
    """Snapshot file does not match the declared column mapping."""


class RowError(ValueError):
    """A data row failed to parse."""


class MergeConflictError(ValueError):
    """Two sources disagree on the same (country, year, column) value."""


def country_code_map() -> dict[str, str]:
    with resources.files("growthlab.data").joinpath("country_codes.json").open() as fh:
        return json.load(fh)


@dataclass(frozen=True)
class SourceTable:
    kind: str
    frame: pd.DataFrame = field(repr=False)


@dataclass
class PanelDataset:
    frame: pd.DataFrame
    years: list[int]
    countries: list[str]
    provenance: dict = field(default_factory=dict)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, provenance: dict | None = None) -> "PanelDataset":
        frame = frame.sort_values(["country", "year"], kind="mergesort").reset_index(drop=True)
        return cls(
            frame=frame,
            years=sorted(frame["year"].unique().tolist()),
            countries=sorted(frame["country"].unique().tolist()),
            provenance=provenance or {},
        )


def load_source(path: str, kind: str, mapping: dict | None = None) -> SourceTable:
    """Read a delimited snapshot and normalize it to the canonical schema.

    mapping maps canonical column names to the file's header names; identity
    by default. ISO alpha-3 country codes are converted to full names; codes
    outside the shipped map pass through unchanged.
    """
    if kind not in SOURCE_SCHEMAS:
        raise ValueError(f"unknown source kind {kind!r}; expected one of {sorted(SOURCE_SCHEMAS)}")
    columns = SOURCE_SCHEMAS[kind]
    colmap = {c: c for c in columns}
    scales = dict(DEFAULT_SCALES)
    if mapping:
        colmap.update(mapping.get("columns", {}))
        scales.update(mapping.get("scales", {}))
    try:
        raw = pd.read_csv(path, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path}: file has no header row")
    missing = [src for src in colmap.values() if src not in raw.columns]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}; found {list(raw.columns)}")

    codes = country_code_map()
    records = []
    for idx, row in raw.iterrows():
        line = idx + 2  # header is line 1
        rec: dict = {}
        name = str(row[colmap["country"]]).strip()
        rec["country"] = codes.get(name, name)
        try:
            rec["year"] = int(str(row[colmap["year"]]).strip())
        except ValueError:
            raise RowError(f"{path}:{line}: malformed year {row[colmap['year']]!r}")
        for canon in columns:
            if canon in ("country", "year"):
                continue
            cell = row[colmap[canon]]
            if cell is None or (isinstance(cell, float) and math.isnan(cell)) or str(cell).strip() == "":
                rec[canon] = np.nan
                continue
            try:
                rec[canon] = float(str(cell).strip()) * scales.get(canon, 1.0)
            except ValueError:
                raise RowError(f"{path}:{line}: column {canon!r} has non-numeric value {cell!r}")
        records.append(rec)
    frame = pd.DataFrame(records, columns=columns)
    if len(frame) and frame.duplicated(subset=["country", "year"]).any():
        dupes = frame[frame.duplicated(subset=["country", "year"])][["country", "year"]]
        raise SchemaError(f"{path}: duplicate (country, year) rows: {dupes.values.tolist()}")
    return SourceTable(kind=kind, frame=frame)


def apply_exclusions(table: SourceTable, excluded: Sequence[str] | None = None) -> SourceTable:
    if excluded is None:
        excluded = DEFAULT_EXCLUSIONS
    frame = table.frame[~table.frame["country"].isin(list(excluded))].reset_index(drop=True)
    return SourceTable(kind=table.kind, frame=frame)


def merge_sources(tables: Iterable[SourceTable]) -> PanelDataset:
    """Inner-join the sources on (country, year) and enforce the
    complete-case rule: a country missing any variable in any kept year is
    dropped entirely.
    """
    tables = list(tables)
    if not tables:
        raise ValueError("no source tables to merge")
    # deterministic merge regardless of argument order
    tables = sorted(tables, key=lambda t: t.kind)
    merged: pd.DataFrame | None = None
    for table in tables:
        if merged is None:
            merged = table.frame.copy()
            continue
        overlap = [
            c for c in table.frame.columns
            if c in merged.columns and c not in ("country", "year")
        ]
        if overlap:
            both = merged.merge(table.frame, on=["country", "year"], suffixes=("", "_b"))
            for c in overlap:
                bad = both[~np.isclose(both[c], both[f"{c}_b"], equal_nan=True)]
                if len(bad):
                    raise MergeConflictError(
                        f"conflicting values for {c!r} at "
                        f"{bad[['country', 'year']].values.tolist()}"
                    )
            table_frame = table.frame.drop(columns=overlap)
        else:
            table_frame = table.frame
        merged = merged.merge(table_frame, on=["country", "year"], how="inner")
    assert merged is not None
    before = set()
    for table in tables:
        before |= set(table.frame["country"].unique())
    incomplete = merged[merged.isna().any(axis=1)]["country"].unique().tolist()
    merged = merged[~merged["country"].isin(incomplete)].reset_index(drop=True)
    dropped = sorted(before - set(merged["country"].unique()))
    return PanelDataset.from_frame(
        merged, provenance={"dropped_countries": dropped, "interpolations": []}
    )


def filter_intervals(panel: PanelDataset, years: Sequence[int] | None = None) -> PanelDataset:
    if years is None:
        years = DEFAULT_YEARS
    years = sorted(years)
    if not years:
        raise ValueError("years must be nonempty")
    frame = panel.frame[panel.frame["year"].isin(years)]
    provenance = dict(panel.provenance)
    if frame.empty:
        provenance.setdefault("notes", []).append(
            f"no observations in requested years {years}"
        )
    return PanelDataset.from_frame(frame, provenance)


def interpolate_rd_share(panel: PanelDataset, max_gap: int = 2) -> PanelDataset:
    """Within-country linear interpolation of missing research-share values
    over gaps of at most max_gap intervals. Off by default in the CLI; every
    filled cell is recorded in provenance.
    """
    frame = panel.frame.copy()
    fills = []
    for country, group in frame.groupby("country"):
        series = group.sort_values("year")["gdp_rd_share"]
        filled = series.interpolate(method="linear", limit=max_gap, limit_area="inside")
        changed = series.isna() & filled.notna()
        for pos in series.index[changed]:
            fills.append(
                {"country": country, "year": int(frame.loc[pos, "year"]), "value": float(filled[pos])}
            )
            frame.loc[pos, "gdp_rd_share"] = filled[pos]
    provenance = dict(panel.provenance)
    provenance["interpolations"] = provenance.get("interpolations", []) + fills
    return PanelDataset.from_frame(frame, provenance)


def derive_variables(
    panel: PanelDataset, params: ModelParams | None = None, complete_case: bool = True
) -> PanelDataset:
    """Build every derived variable and its log transform.

    Output per worker, annualized labor growth n over the preceding interval,
    savings rate s_k as the window mean of the investment share, patents per
    worker and per hour, depreciated human capital, the technology index, and
    natural logs of each positive variable. Under complete_case, rows with any
    missing derived field are dropped and recorded in provenance.
    """
    if params is None:
        params = ModelParams()
    frame = panel.frame.copy()
    out_rows = []
    for country, group in frame.groupby("country", sort=True):
        group = group.sort_values("year")
        prev_year = prev_labor = None
        for _, row in group.iterrows():
            r = row.to_dict()
            year = int(r["year"])
            r["YL"] = r["output"] / r["labor"] if r["labor"] else np.nan
            if prev_year is not None and prev_labor and r["labor"] > 0:
                gap = year - prev_year
                r["n"] = (r["labor"] / prev_labor) ** (1.0 / gap) - 1.0
            else:
                r["n"] = np.nan
            window = group[(group["year"] > year - 5) & (group["year"] <= year)]
            r["s_k"] = float(window["inv_share"].mean())
            r["Pc"] = r["patents"] / r["labor"] if r["labor"] else np.nan
            r["Ph"] = r["patents"] / HOURS_PER_YEAR
            r["Hd"] = (
                effective_human_capital(r["schooling"]) if r["schooling"] >= 1.0 else np.nan
            )
            try:
                r["A"] = technology_a3(
                    r["patents"],
                    r["labor"] * r["gdp_rd_share"],
                    r["output"] * r["gdp_rd_share"],
                    r["schooling"],
                    r["labor"],
                )
            except (ValueError, ZeroDivisionError):
                r["A"] = np.nan
            r["ln_YL"] = _safe_log(r["YL"])
            r["ln_s"] = _safe_log(r["s_k"])
            r["ln_n_g_delta"] = _safe_log(r["n"] + params.g + params.delta)
            r["ln_HK"] = _safe_log(r["schooling"])
            r["ln_Pc"] = _safe_log(r["Pc"])
            r["ln_Ph"] = _safe_log(r["Ph"])
            r["ln_Hd"] = _safe_log(r["Hd"])
            r["ln_A"] = _safe_log(r["A"])
            r["ln_GDP_RD"] = _safe_log(r["gdp_rd_share"])
            out_rows.append(r)
            prev_year, prev_labor = year, r["labor"]
    derived = pd.DataFrame(out_rows)
    provenance = dict(panel.provenance)
    provenance["params"] = {"alpha": params.alpha, "delta": params.delta, "g": params.g}
    provenance["technology_inputs"] = (
        "L_research = labor * gdp_rd_share (proxy); K_research = output * gdp_rd_share"
    )
    if complete_case:
        check_cols = DERIVED_COLUMNS + LN_COLUMNS
        incomplete = derived[check_cols].isna().any(axis=1)
        flagged = derived[incomplete][["country", "year"]].astype({"year": int})
        provenance["dropped_rows"] = [
            {"country": c, "year": int(y)} for c, y in flagged.values.tolist()
        ]
        derived = derived[~incomplete]
    return PanelDataset.from_frame(derived, provenance)


def _safe_log(x: float) -> float:
    if x is None or not np.isfinite(x) or x <= 0.0:
        return np.nan
    return math.log(x)


def generate_sample_panel(config: dict) -> PanelDataset:
    """Synthetic panel with constant additive growth in every variable.

    config keys: countries (list), years (list), variables (name ->
    {initial, increment, country_offset?}); increments apply per year step,
    country_offset shifts the level per country index.
    """
    countries = config["countries"]
    years = config["years"]
    variables = config["variables"]
    rows = []
    for ci, country in enumerate(countries):
        for yi, year in enumerate(years):
            rec = {"country": country, "year": int(year)}
            for name, rule in variables.items():
                rec[name] = (
                    rule["initial"]
                    + rule["increment"] * yi
                    + rule.get("country_offset", 0.0) * ci
                )
            rows.append(rec)
    return PanelDataset.from_frame(pd.DataFrame(rows), provenance={"synthetic": True})


def write_panel(panel: PanelDataset, path: str, provenance_path: str | None = None) -> None:
    """Canonical panel CSV plus a JSON provenance sidecar."""
    panel.frame.to_csv(path, index=False, lineterminator="\n")
    if provenance_path is None:
        provenance_path = str(path) + ".provenance.json"
    doc = dict(panel.provenance)
    doc["countries"] = panel.countries
    doc["years"] = panel.years
    with open(provenance_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_panel(path: str) -> PanelDataset:
    frame = pd.read_csv(path)
    if "country" not in frame.columns or "year" not in frame.columns:
        raise SchemaError(f"{path}: panel must have 'country' and 'year' columns")
    return PanelDataset.from_frame(frame)
