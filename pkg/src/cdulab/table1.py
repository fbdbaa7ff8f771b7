"""Regeneration of the known-functions summary at desk scale.

The manifest (``table1_manifest.json``) pins, for every in-scope row, a
concrete field, function instance and c-selection rule, plus the claimed
uniformity.  Rows belonging to other groups' prior constructions are
carried as ``skipped(prior-work)`` so the summary stays complete without
re-implementing them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .analyzer import spectrum
from .families import Claim, build_from_params, monomial
from .gf import make_field

__all__ = ["RowResult", "load_manifest", "run_row", "run_table"]


@dataclass(frozen=True)
class RowResult:
    row_id: str
    source: str
    status: str  # "ok" | "fail" | "skipped(prior-work)"
    claimed: str
    observed: dict[str, int]  # formatted c -> delta, empty when skipped
    detail: str


def load_manifest() -> dict:
    with resources.files(__package__).joinpath("table1_manifest.json").open() as fh:
        return json.load(fh)


def _c_set(field, rule: str, construction=None) -> list[int]:
    if rule == "all":
        return [c for c in range(field.q) if c != 1]
    if rule == "valid":
        return list(construction.valid_cs.cs)
    if rule == "minus-one":
        return [field.neg(1)]
    if rule == "unit-trace-pairs":
        return [
            c
            for c in range(2, field.q)
            if field.abs_trace(c) == 1 and field.abs_trace(field.inv(c)) == 1
        ]
    raise ValueError(f"unknown c rule {rule!r}")


def run_row(row: dict, threads: int | None = None, progress=None) -> RowResult:
    if row.get("status", "").startswith("skipped"):
        return RowResult(
            row_id=row["id"],
            source=row.get("source", "prior"),
            status=row["status"],
            claimed="",
            observed={},
            detail="prior construction, out of scope here",
        )
    run = row["run"]
    claimed = Claim(row["claimed"]["op"], row["claimed"]["value"])
    if run["kind"] == "monomial":
        p, m = run["field"]
        con = monomial(make_field(p, m), run["exponent"])
    else:
        con = build_from_params(run["family"], run["params"])
    field = con.field
    cs = _c_set(field, run["c_rule"], con)
    rep = spectrum(con.table, cs, threads=threads, progress=progress)
    deltas = rep.deltas()
    ok = claimed.check(deltas)
    observed = {field.format_element(c): d for c, d in deltas.items()}
    detail = f"{len(cs)} c values over {field!r}"
    return RowResult(
        row_id=row["id"],
        source=row.get("source", ""),
        status="ok" if ok else "fail",
        claimed=claimed.describe(),
        observed=observed,
        detail=detail,
    )


def run_table(
    rows: list[str] | None = None, threads: int | None = None, progress=None
) -> list[RowResult]:
    """Run every manifest row (optionally filtered by source tag or id)."""
    manifest = load_manifest()
    results = []
    for row in manifest["rows"]:
        if rows and row.get("source") not in rows and row["id"] not in rows:
            continue
        results.append(run_row(row, threads=threads, progress=progress))
    return results
