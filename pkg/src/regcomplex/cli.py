"""Command-line interface.

Exit codes: 0 success, 1 data error, 2 usage or schema error.
``REGCOMPLEX_CONFIG`` names an INI file whose [schema]/[status], [aliases]
and [defaults] sections apply when the matching flags are not given.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
import scipy

from . import __version__, analytics, complexity, fitness, ingest, kernels, netlab, panel
from .export import fmt, node_link, read_income, sha256_file, write_csv, write_json, write_matrix

logger = logging.getLogger("regcomplex")

CONFIG_ENV = "REGCOMPLEX_CONFIG"
EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2

DATA_ERRORS = (
    ingest.RegistryError,
    panel.PanelError,
    complexity.ComplexityError,
    fitness.FitnessError,
    fitness.NumericalUnderflow,
    analytics.FitError,
    netlab.GraphError,
)


class UsageError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage
        self.exc = exc


def parse_years(text: str | None) -> list[int]:
    if not text:
        return []
    years: set[int] = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = (int(p) for p in part.split("-"))
                if hi < lo:
                    raise ValueError
                years.update(range(lo, hi + 1))
            elif part:
                years.add(int(part))
    except ValueError:
        raise UsageError(f"bad --years value {text!r}; use e.g. 2010-2024 or 2017,2020") from None
    return sorted(years)


def parse_window(text: str | None) -> tuple[float, float] | None:
    if not text:
        return None
    try:
        lo, hi = (float(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"bad --powerlaw-window {text!r}; use LO,HI") from None
    if not 0 < lo < hi:
        raise UsageError("--powerlaw-window needs 0 < LO < HI")
    return lo, hi


# ---------------------------------------------------------------- settings


@dataclass
class Settings:
    inputs: list[Path]
    schema: ingest.Schema
    aliases: ingest.RegionAliases
    threshold: float
    cutoff: tuple[int, int]
    years: list[int]
    income: Path | None
    out: Path
    max_reject: float
    powerlaw_window: tuple[float, float] | None
    hill: bool
    max_iter: int
    window: int
    workers: int
    config_sources: dict[str, str] = field(default_factory=dict)

    def config(self) -> dict:
        return {
            "threshold": self.threshold,
            "fiscal_cutoff": f"{self.cutoff[0]:02d}-{self.cutoff[1]:02d}",
            "years": self.years,
            "max_reject": self.max_reject,
            "powerlaw_window": list(self.powerlaw_window) if self.powerlaw_window else "p10-p90",
            "hill": self.hill,
            "fitness_max_iter": self.max_iter,
            "rank_stability_window": self.window,
            "schema": self.schema.columns,
            "active_codes": list(self.schema.active_codes),
            "date_formats": list(self.schema.date_formats),
            "alias_table": bool(self.aliases.table),
            "config_sources": self.config_sources,
        }


def _env_config() -> configparser.ConfigParser | None:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return None
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ingest.SchemaError(f"{CONFIG_ENV}={path}: {exc}") from exc
    return parser


def settings_from_args(args: argparse.Namespace) -> Settings:
    env = _env_config()
    defaults = env["defaults"] if env is not None and env.has_section("defaults") else {}
    sources = {}

    def pick(name, cast, fallback):
        value = getattr(args, name, None)
        if value is not None:
            return value
        if name in defaults:
            sources[name] = CONFIG_ENV
            try:
                return cast(defaults[name])
            except ValueError:
                raise UsageError(f"{CONFIG_ENV}: bad value for {name}") from None
        return fallback

    if args.schema:
        schema = ingest.Schema.from_file(args.schema)
        sources["schema"] = str(args.schema)
    elif env is not None and env.has_section("schema"):
        schema = ingest.Schema.from_config(env)
        sources["schema"] = CONFIG_ENV
    else:
        schema = ingest.Schema.default()
    if args.aliases:
        aliases = ingest.RegionAliases.from_file(args.aliases)
        sources["aliases"] = str(args.aliases)
    elif env is not None and env.has_section("aliases"):
        aliases = ingest.RegionAliases.from_config(env)
        sources["aliases"] = CONFIG_ENV
    else:
        aliases = ingest.RegionAliases()

    threshold = pick("threshold", float, 1.0)
    if not threshold > 0:
        raise UsageError("--threshold must be positive")
    try:
        cutoff = ingest.parse_cutoff(pick("fiscal_cutoff", str, "04-01"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    max_reject = pick("max_reject", float, 1.0)
    if not 0 <= max_reject <= 1:
        raise UsageError("--max-reject must be in [0, 1]")
    income = pick("income", str, None)
    return Settings(
        inputs=[Path(p) for p in args.inputs],
        schema=schema,
        aliases=aliases,
        threshold=threshold,
        cutoff=cutoff,
        years=parse_years(pick("years", str, None)),
        income=Path(income) if income else None,
        out=Path(pick("out", str, "regcomplex-out")),
        max_reject=max_reject,
        powerlaw_window=parse_window(pick("powerlaw_window", str, None)),
        hill=bool(args.hill),
        max_iter=args.max_iter,
        window=args.stability_window,
        workers=args.workers,
        config_sources=sources,
    )


# ---------------------------------------------------------------- run state


class Run:
    """Collects outputs and stage status for the manifest."""

    def __init__(self, settings: Settings, out: Path, command: str):
        self.settings = settings
        self.out = out
        self.command = command
        self.outputs: list[Path] = []
        self.stages: list[dict] = []
        self.notes: dict = {}

    def stage(self, name: str, fn: Callable, *args, **kwargs):
        try:
            result = fn(*args, **kwargs)
        except DATA_ERRORS as exc:
            self.stages.append({"stage": name, "status": "failed", "error": str(exc)})
            raise StageError(name, exc) from exc
        self.stages.append({"stage": name, "status": "ok"})
        return result

    def optional(self, name: str, skip_on: tuple, fn: Callable, *args, **kwargs):
        """Like :meth:`stage`, but ``skip_on`` errors mark the stage skipped and return None."""
        try:
            return self.stage(name, fn, *args, **kwargs)
        except StageError as exc:
            if not isinstance(exc.exc, skip_on):
                raise
            self.stages[-1]["status"] = "skipped"
            logger.warning("skipping %s: %s", name, exc.exc)
            self.notes.setdefault("skipped", {})[name] = str(exc.exc)
            return None

    def add(self, path: Path) -> Path:
        self.outputs.append(path)
        return path

    def manifest(self, status: str = "complete") -> Path:
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        doc = {
            "tool": "regcomplex",
            "command": self.command,
            "status": status,
            "versions": {
                "regcomplex": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "kernel_backend": kernels.BACKEND,
            },
            "inputs": [{"path": str(p), "sha256": sha256_file(p)} for p in self.settings.inputs]
            + ([{"path": str(self.settings.income), "sha256": sha256_file(self.settings.income)}] if self.settings.income else []),
            "config": self.settings.config(),
            "stages": self.stages,
            "outputs": [
                {"path": p.relative_to(self.out).as_posix(), "sha256": sha256_file(p)} for p in sorted(set(self.outputs))
            ],
            "notes": self.notes,
            "timestamps": {"source_date_epoch": int(epoch) if epoch and epoch.isdigit() else None},
        }
        return write_json(self.out / "manifest.json", doc)


def _tag(year: int | None) -> str:
    return str(year) if year is not None else "current"


# ---------------------------------------------------------------- stages


def stage_ingest(run: Run) -> list[ingest.FirmRecord]:
    s = run.settings
    result = run.stage("ingest", ingest.read_registries, s.inputs, s.schema, s.aliases, s.workers)
    run.notes["ingest"] = {
        "rows_read": result.rows_read,
        "accepted": len(result.records),
        "rejected": len(result.rejects),
        "reject_counts": result.reject_counts,
        "reject_fraction": result.reject_fraction,
    }
    run.out.mkdir(parents=True, exist_ok=True)
    with open(run.add(run.out / "records.csv"), "w", newline="", encoding="utf-8") as fh:
        ingest.write_records(result.records, fh)
    with open(run.add(run.out / "rejects.csv"), "w", newline="", encoding="utf-8") as fh:
        ingest.write_rejects(result.rejects, result.header, fh)
    if result.reject_fraction > s.max_reject:
        run.notes["ingest"]["max_reject_exceeded"] = True
    run.add(write_json(run.out / "ingest.json", run.notes["ingest"]))
    active = ingest.filter_active(result.records)
    run.notes["ingest"]["active"] = len(active)
    return active


def _snapshots(run: Run, active) -> dict[int | None, list]:
    s = run.settings
    if not s.years:
        return {None: active}
    return {y: ingest.snapshot(active, ingest.SnapshotSpec(y, *s.cutoff)) for y in s.years}


def stage_panel(run: Run, active) -> dict:
    """Per year: panel, RCA, binary matrix (pruned), envelope JSON."""
    s = run.settings
    out = {}
    for year, records in _snapshots(run, active).items():
        tag = _tag(year)
        if not records:
            run.notes.setdefault("empty_snapshots", []).append(tag)
            continue
        pn = run.stage(f"panel[{tag}]", panel.aggregate, records)
        bm, ratios, trimmed, log = run.stage(f"binarize[{tag}]", panel.specialization, pn, s.threshold)
        d = run.out / "panel"
        run.add(write_matrix(d / f"weights_{tag}.csv", pn.weights, pn.regions, pn.industries))
        run.add(write_matrix(d / f"rca_{tag}.csv", ratios, trimmed.regions, trimmed.industries))
        run.add(write_matrix(d / f"binary_{tag}.csv", bm.m, bm.regions, bm.industries))
        run.add(
            write_json(
                d / f"panel_{tag}.json",
                {
                    "snapshot_year": year,
                    "fiscal_cutoff": f"{s.cutoff[0]:02d}-{s.cutoff[1]:02d}",
                    "firms": len(records),
                    "threshold": s.threshold,
                    "weights_unit": "minor currency units",
                    "shape": {"weights": list(pn.shape), "binary": list(bm.shape)},
                    "prune_log": log.to_dict(),
                    "diversification": dict(zip(bm.regions, bm.diversification.tolist())),
                    "ubiquity": dict(zip(bm.industries, bm.ubiquity.tolist())),
                },
            )
        )
        out[year] = (records, bm)
    if not out:
        raise StageError("panel", panel.PanelError("every requested snapshot is empty"))
    return out


def stage_eci(run: Run, matrices: dict) -> dict:
    results = {}
    for year, (_, bm) in matrices.items():
        tag = _tag(year)
        res = run.optional(f"eci[{tag}]", (complexity.ComplexityError,), complexity.eci, bm)
        if res is None:
            continue
        d = run.out / "eci"
        run.add(write_csv(d / f"eci_{tag}.csv", ["region", "eci"], zip(res.regions, res.eci.tolist())))
        run.add(write_csv(d / f"pci_{tag}.csv", ["industry", "pci"], zip(res.industries, res.pci.tolist())))
        run.add(write_json(d / f"eci_{tag}.json", {"snapshot_year": year, **res.diagnostics(), "prune_log": f"panel/panel_{tag}.json"}))
        results[year] = res
    if not results:
        raise StageError("eci", complexity.ComplexityError("no fiscal year admits an ECI"))
    return results


def stage_fitness(run: Run, matrices: dict) -> dict:
    s = run.settings
    results = {}
    for year, (_, bm) in matrices.items():
        tag = _tag(year)
        res = run.stage(f"fitness[{tag}]", fitness.fitness_complexity, bm, s.max_iter, s.window)
        rr, qr = fitness.ranks(res)
        d = run.out / "fitness"
        run.add(write_csv(d / f"fitness_{tag}.csv", ["region", "fitness", "rank"], ((r, v, rr[r]) for r, v in zip(res.regions, res.fitness.tolist()))))
        run.add(
            write_csv(
                d / f"complexity_{tag}.csv",
                ["industry", "complexity", "rank"],
                ((p, v, qr[p]) for p, v in zip(res.industries, res.industry_complexity.tolist())),
            )
        )
        om = run.stage(f"ordered[{tag}]", netlab.ordered_matrix, bm, res)
        run.add(write_matrix(d / f"ordered_{tag}.csv", om.matrix.m, om.matrix.regions, om.matrix.industries))
        run.add(
            write_json(
                d / f"ordered_{tag}.permutation.json",
                {
                    "row_order": om.row_order.tolist(),
                    "col_order": om.col_order.tolist(),
                    "rows": list(om.matrix.regions),
                    "columns": list(om.matrix.industries),
                },
            )
        )
        diag = res.diagnostics()
        diag["snapshot_year"] = year
        diag["triangularity"] = netlab.triangularity(om.matrix)
        diag["linear_band_triangularity"] = netlab.linear_band_triangularity(om.matrix)
        run.add(write_json(d / f"fitness_{tag}.json", diag))
        results[year] = res
    return results


def stage_mst(run: Run, matrices: dict) -> None:
    built = 0
    for year, (_, bm) in matrices.items():
        tag = _tag(year)
        g = run.stage(f"similarity[{tag}]", netlab.similarity, bm)
        d = run.out / "mst"
        run.add(write_matrix(d / f"similarity_{tag}.csv", g.weights, g.nodes, g.nodes))
        tree = run.optional(f"mst[{tag}]", (netlab.GraphError,), netlab.mst, g)
        if tree is None:
            continue
        run.add(write_csv(d / f"mst_{tag}.csv", ["u", "v", "similarity"], tree.edges))
        run.add(
            write_json(
                d / f"mst_{tag}.json",
                node_link(tree.nodes, tree.edges, snapshot_year=year, distance="1 - s / s_max", similarity="symmetrized region-region transformed matrix"),
            )
        )
        built += 1
    if not built:
        raise StageError("mst", netlab.GraphError("no fiscal year has a connected similarity graph"))


def stage_rank_evolution(run: Run, matrices: dict) -> analytics.RankTable | None:
    snaps = {y: bm for y, (_, bm) in matrices.items() if y is not None}
    if not snaps:
        return None
    table = run.stage("rank-evolution", analytics.rank_evolution, snaps)
    d = run.out / "analytics"
    run.add(write_csv(d / "fig4_rank_evolution.csv", ["year", *table.regions], ([y, *row] for y, row in table.rows())))
    run.add(write_json(d / "rank_evolution.json", {"years": table.years, "regions": table.regions, "ranks": table.ranks, "skipped": table.skipped}))
    return table


def stage_fits(run: Run, active, matrices: dict, eci_results: dict | None, fit_results: dict | None) -> dict:
    s = run.settings
    d = run.out / "analytics"
    fits: dict = {}
    if len(s.years) >= 3:
        counts = ingest.fiscal_year_counts(active, s.years, s.cutoff)
        run.add(write_csv(d / "fig1a_firm_counts.csv", ["year", "active_firms"], counts.items()))
        fits["firm_growth"] = run.stage("fit:growth", analytics.firm_growth_fit, counts).to_dict()

    latest = max(matrices, key=lambda y: (y is not None, y or 0)) if None not in matrices else None
    records, bm = matrices[latest]
    capital = np.array([r.capital_minor for r in records], dtype=np.float64) / ingest.CAPITAL_SCALE
    capital = capital[capital > 0]
    x, p = run.stage("ccdf", analytics.ccdf, capital)
    run.add(write_csv(d / "fig1b_capital_ccdf.csv", ["paid_up_capital", "ccdf"], zip(x.tolist(), p.tolist())))
    window = s.powerlaw_window or analytics.default_window(capital)
    pl = run.stage("fit:powerlaw", analytics.powerlaw_fit, x, p, window).to_dict()
    if s.hill:
        pl["hill_alpha"] = run.stage("fit:hill", analytics.hill_alpha, capital, window[0])
    fits["capital_powerlaw"] = pl

    du = run.stage("fit:diversification-ubiquity", analytics.diversification_ubiquity, bm)
    fits["diversification_ubiquity"] = du.to_dict()
    k1 = complexity.reflections(bm, 1)[1].region_values
    run.add(write_csv(d / "fig2_diversification_ubiquity.csv", ["region", "k_s0", "k_s1"], zip(bm.regions, bm.diversification.tolist(), k1.tolist())))

    if s.income is not None:
        income = read_income(s.income, s.aliases)
        if eci_results is None or latest not in eci_results:
            eci_results = {latest: run.optional("eci", (complexity.ComplexityError,), complexity.eci, bm)}
        if fit_results is None:
            fit_results = {latest: run.stage("fitness", fitness.fitness_complexity, bm, s.max_iter, s.window)}
        if eci_results[latest] is not None:
            e = eci_results[latest].eci_by_region()
            reg = run.stage("fit:eci-income", analytics.income_regression_eci, e, income)
            fits["eci_income"] = reg.to_dict()
            run.add(
                write_csv(
                    d / "fig3_eci_income.csv",
                    ["region", "eci", "log_income", "residual"],
                    ((r, e[r], float(np.log(income[r])), reg.residuals[r]) for r in sorted(reg.residuals)),
                )
            )
        f = dict(zip(fit_results[latest].regions, fit_results[latest].fitness.tolist()))
        reg = run.stage("fit:fitness-income", analytics.income_regression_fitness, f, income)
        fits["fitness_income"] = reg.to_dict()
        run.add(
            write_csv(
                d / "fig6_fitness_income.csv",
                ["region", "log_fitness", "log_income", "residual"],
                ((r, float(np.log(f[r])), float(np.log(income[r])), reg.residuals[r]) for r in sorted(reg.residuals)),
            )
        )
    fits["snapshot_year"] = latest
    run.add(write_json(d / "fits.json", fits))
    return fits


# ---------------------------------------------------------------- commands


def cmd_ingest(s: Settings) -> int:
    run = Run(s, s.out, "ingest")
    stage_ingest(run)
    run.manifest()
    if run.notes["ingest"].get("max_reject_exceeded"):
        logger.error("reject fraction %.3f exceeds --max-reject %.3f", run.notes["ingest"]["reject_fraction"], s.max_reject)
        return EXIT_DATA
    return EXIT_OK


def _analysis(command: str, s: Settings, body: Callable[[Run, list], None], out: Path | None = None) -> Run:
    run = Run(s, out or s.out, command)
    try:
        active = stage_ingest(run)
        if run.notes["ingest"].get("max_reject_exceeded"):
            raise StageError("ingest", ingest.RegistryError("reject fraction exceeds --max-reject"))
        body(run, active)
    except StageError as exc:
        # a schema error leaves nothing behind; any later failure leaves a partial manifest
        if not isinstance(exc.exc, ingest.SchemaError):
            run.manifest(status="failed")
        raise
    run.manifest()
    return run


def cmd_panel(s):
    _analysis("panel", s, lambda run, active: stage_panel(run, active))
    return EXIT_OK


def cmd_eci(s):
    _analysis("eci", s, lambda run, active: stage_eci(run, stage_panel(run, active)))
    return EXIT_OK


def cmd_fitness(s):
    _analysis("fitness", s, lambda run, active: stage_fitness(run, stage_panel(run, active)))
    return EXIT_OK


def cmd_mst(s):
    _analysis("mst", s, lambda run, active: stage_mst(run, stage_panel(run, active)))
    return EXIT_OK


def cmd_rank_evolution(s):
    if not s.years:
        raise UsageError("rank-evolution needs --years")
    _analysis("rank-evolution", s, lambda run, active: stage_rank_evolution(run, stage_panel(run, active)))
    return EXIT_OK


def cmd_fits(s):
    _analysis("fits", s, lambda run, active: stage_fits(run, active, stage_panel(run, active), None, None))
    return EXIT_OK


def run_digest(s: Settings) -> str:
    h = hashlib.sha256()
    for p in s.inputs + ([s.income] if s.income else []):
        h.update(sha256_file(p).encode())
    h.update(json.dumps(s.config(), sort_keys=True, default=str).encode())
    return h.hexdigest()[:16]


def cmd_pipeline(s: Settings) -> int:
    if not s.years:
        raise UsageError("pipeline needs --years")

    def body(run, active):
        matrices = stage_panel(run, active)
        eci_results = stage_eci(run, matrices)
        fit_results = stage_fitness(run, matrices)
        stage_mst(run, matrices)
        stage_rank_evolution(run, matrices)
        stage_fits(run, active, matrices, eci_results, fit_results)

    run = _analysis("pipeline", s, body, out=s.out / f"run-{run_digest(s)}")
    print(run.out)
    return EXIT_OK


COMMANDS = {
    "ingest": (cmd_ingest, "parse and validate registry CSVs"),
    "panel": (cmd_panel, "region x industry panel, RCA and binary matrix per fiscal year"),
    "eci": (cmd_eci, "economic / industry complexity index per fiscal year"),
    "fitness": (cmd_fitness, "fitness-complexity scores and ordered matrix per fiscal year"),
    "fits": (cmd_fits, "growth, capital power-law, diversification-ubiquity and income fits"),
    "rank-evolution": (cmd_rank_evolution, "ECI rank table across fiscal years"),
    "mst": (cmd_mst, "region similarity and maximum-similarity spanning tree"),
    "pipeline": (cmd_pipeline, "every stage into one digest-named output directory"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="+", help="registry CSV file(s)")
    common.add_argument("--schema", help="INI file with [schema] column mapping and [status] codes")
    common.add_argument("--aliases", help="INI file with an [aliases] table (alias = canonical region)")
    common.add_argument("--threshold", type=float, help="RCA threshold for M (default 1.0)")
    common.add_argument("--fiscal-cutoff", help="fiscal year start MM-DD (default 04-01)")
    common.add_argument("--years", help="fiscal years, e.g. 2010-2024 or 2017,2020")
    common.add_argument("--income", help="CSV with region,gsdp_per_capita")
    common.add_argument("--out", help="output directory (default regcomplex-out)")
    common.add_argument("--max-reject", type=float, help="fail with exit 1 when the reject fraction exceeds this")
    common.add_argument("--powerlaw-window", help="LO,HI capital window for the CCDF fit (default 10th-90th percentile)")
    common.add_argument("--hill", action="store_true", help="also report the Hill/MLE tail exponent")
    common.add_argument("--max-iter", type=int, default=1000, help="fitness iteration cap")
    common.add_argument("--stability-window", type=int, default=10, help="iterations of unchanged rankings to stop fitness")
    common.add_argument("--workers", type=int, default=1, help="parallel CSV parsing processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="regcomplex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        settings = settings_from_args(args)
        return COMMANDS[args.command][0](settings)
    except UsageError as exc:
        parser.error(str(exc))
    except ingest.SchemaError as exc:
        print(f"regcomplex: schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        if isinstance(exc.exc, ingest.SchemaError):
            print(f"regcomplex: schema error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"regcomplex: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DATA_ERRORS as exc:
        print(f"regcomplex: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"regcomplex: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
