"""Seeded synthetic firm registry with a nested region-industry structure.

Regions get a latent capability and industries a latent sophistication;
a firm lands in industry p of region s with probability rising in
(capability - sophistication), which produces the triangular pattern seen in
real data.  A handful of malformed rows exercise the reject paths.

    python -m regcomplex.synth OUTDIR
"""

from __future__ import annotations

import csv
import sys
from datetime import date, timedelta
from pathlib import Path

import numpy as np

COLUMNS = {
    "firm_id": "CIN",
    "region": "CompanyStateCode",
    "nic_full": "CompanyIndustrialClassification",
    "incorporation_date": "CompanyRegistrationdate_date",
    "status": "CompanyStatus",
    "paid_up_capital": "PaidupCapital",
}

REGIONS = ("Alpha", "Bravo", "Charlie", "Delta", "Echo", "Foxtrot", "Golf", "Hotel")
INDUSTRIES = ("01", "10", "13", "20", "24", "26", "28", "41", "46", "47", "55", "62", "64", "70", "72")


def generate(
    n_firms: int = 4000,
    regions: tuple[str, ...] = REGIONS,
    industries: tuple[str, ...] = INDUSTRIES,
    first_year: int = 2004,
    last_year: int = 2024,
    growth_rate: float = 0.11,
    seed: int = 20250710,
    n_malformed: int = 12,
):
    """Return (header, rows, income) where income maps region -> per-capita value."""
    rng = np.random.default_rng(seed)
    S, P = len(regions), len(industries)
    capability = np.linspace(2.0, -2.0, S) + rng.normal(0, 0.2, S)
    sophistication = np.linspace(-2.0, 2.0, P) + rng.normal(0, 0.2, P)
    size = np.exp(rng.normal(0, 0.5, S))
    affinity = 1 / (1 + np.exp(-2.5 * (capability[:, None] - sophistication[None, :])))
    weight = size[:, None] * affinity
    weight /= weight.sum()
    cells = rng.choice(S * P, size=n_firms, p=weight.ravel())

    # incorporation dates: exponential growth of entry between first_year and last_year
    span = last_year - first_year + 1
    u = rng.random(n_firms)
    years_float = np.log1p(u * np.expm1(growth_rate * span)) / growth_rate
    start = date(first_year, 4, 1)
    days = (years_float * 365.25).astype(int)

    capital = np.round((rng.pareto(0.8, n_firms) + 1) * 1e5, -2).astype(np.int64)
    status = rng.choice(["ACTV", "ACTV", "ACTV", "ACTV", "ACTV", "ACTV", "STOF", "AMAL", "ULQD"], size=n_firms)

    header = [COLUMNS[k] for k in ("firm_id", "region", "nic_full", "incorporation_date", "status", "paid_up_capital")]
    rows = []
    for k in range(n_firms):
        s, p = divmod(int(cells[k]), P)
        d = start + timedelta(days=int(days[k]))
        sub = int(rng.integers(0, 1000))
        rows.append(
            [
                f"U{k:07d}{regions[s][:2].upper()}",
                regions[s] if k % 7 else regions[s].upper(),
                f"{industries[p]}{sub:03d}",
                d.isoformat() if k % 5 else d.strftime("%d-%m-%Y"),
                str(status[k]),
                str(int(capital[k])),
            ]
        )
    bad = [
        ["U9900001XX", regions[0], "62011", "2019-13-45", "ACTV", "100000"],
        ["U9900002XX", regions[1], "62011", "2015-06-01", "ACTV", "-5"],
        ["U9900003XX", regions[2], "00123", "2015-06-01", "ACTV", "100000"],
        ["U9900004XX", "", "47110", "2015-06-01", "ACTV", "100000"],
        ["U9900005XX", regions[3], "47110", "2015-06-01", "ACTV", ""],
        ["U9900006XX", regions[4], "AB123", "2015-06-01", "ACTV", "5000"],
    ]
    for i in range(n_malformed):
        rows.insert(int(rng.integers(0, len(rows))), list(bad[i % len(bad)]))
    rows.insert(int(rng.integers(0, len(rows))), list(rows[0]))  # one duplicate firm_id

    log_income = 11.5 + 0.35 * capability + rng.normal(0, 0.15, S)
    income = {r: float(np.round(np.exp(v), 2)) for r, v in zip(regions, log_income)}
    return header, rows, income


def schema_ini() -> str:
    lines = ["[schema]"]
    lines += [f"{k} = {v}" for k, v in COLUMNS.items()]
    lines += ["date_formats = %Y-%m-%d; %d-%m-%Y", "", "[status]", "active = ACTV", ""]
    return "\n".join(lines)


def write(outdir: str | Path, **kwargs) -> dict[str, Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    header, rows, income = generate(**kwargs)
    paths = {
        "registry": outdir / "synthetic_registry.csv",
        "schema": outdir / "synthetic_schema.ini",
        "income": outdir / "synthetic_income.csv",
    }
    with open(paths["registry"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    paths["schema"].write_text(schema_ini(), encoding="utf-8")
    with open(paths["income"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["region", "gsdp_per_capita"])
        for region in sorted(income):
            w.writerow([region, f"{income[region]:.2f}"])
    return paths


def bundled() -> dict[str, Path]:
    """Paths of the synthetic corpus shipped with the package."""
    here = Path(__file__).parent / "data"
    return {
        "registry": here / "synthetic_registry.csv",
        "schema": here / "synthetic_schema.ini",
        "income": here / "synthetic_income.csv",
    }


if __name__ == "__main__":
    for name, path in write(sys.argv[1] if len(sys.argv) > 1 else ".").items():
        print(f"{name}: {path}")
