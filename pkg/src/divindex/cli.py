"""Command line interface: ``divindex {compute,decompose,sweep,correlate}``.

Exit codes: 0 success, 2 input/parse error, 3 domain error (an index is
undefined for the given data). Errors are also written to stderr as one
JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, decomp, indexes
from .errors import DivIndexError, DomainError, InputError
from .io import (
    apply_group_spec,
    dumps_report,
    format_csv_rows,
    parse_region_csv,
    read_weight_triplets,
)
from .popcore import GroupDistribution, LogBase
from .spatial import spatially_weighted_table, uniform_kernel

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN = 0, 2, 3

INDEX_NAMES = ("entropy", "divergence", "info-theory", "dissimilarity")


@dataclass
class RunConfig:
    inputs: list[Path] = field(default_factory=list)
    base: LogBase = LogBase.BASE2
    groups: str | None = None
    index: str = "divergence"
    district_col: str = "district_id"
    radius: float | None = None
    weights: Path | None = None
    out: Path | None = None
    fmt: str | None = None
    pretty: bool = False
    overall: tuple[float, ...] | None = None
    steps: int = 101
    pair: str = "info-theory"
    jobs: int = 1

    def __post_init__(self):
        self.base = LogBase.parse(self.base)
        if self.radius is not None and self.weights is not None:
            raise InputError("--radius and --weights are mutually exclusive")


def _key(name: str) -> str:
    return name.replace("-", "_")


def _base_label(base: LogBase) -> str:
    return base.value


def _load(cfg: RunConfig, path: Path, spatial_ok: bool = True):
    rf = parse_region_csv(path, district_col=cfg.district_col)
    table = apply_group_spec(rf.table, cfg.groups)
    hierarchy = rf.hierarchy
    spatial = None
    if cfg.radius is not None or cfg.weights is not None:
        if not spatial_ok:
            raise InputError("spatial weighting is not supported for this command")
        if cfg.radius is not None:
            w = uniform_kernel(table, cfg.radius)
            spatial = {"kernel": "uniform", "radius": cfg.radius}
        else:
            w = read_weight_triplets(cfg.weights, table)
            spatial = {"kernel": "file", "weights": str(cfg.weights)}
        table = spatially_weighted_table(table, w)
    return table, hierarchy, spatial


def _local(name, table, base):
    if name == "entropy":
        return indexes.local_entropy(table, base)
    if name == "divergence":
        return indexes.divergence_local(table, base)
    if name == "info-theory":
        return indexes.info_theory_local(table, base)
    return indexes.dissimilarity_local(table)


def _overall(name, table, base):
    if name == "entropy":
        return float(indexes.overall_entropy(table, base))
    if name == "divergence":
        return float(indexes.divergence_overall(table, base))
    if name == "info-theory":
        return float(indexes.info_theory_overall(table, base))
    return float(indexes.dissimilarity_multigroup(table))


def _emit(cfg: RunConfig, command: str, report: dict, csv_rows, pretty_lines, default_fmt="json"):
    fmt = cfg.fmt or default_fmt
    text = dumps_report(report) if fmt == "json" else format_csv_rows(csv_rows)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / f"{command}.{fmt}").write_text(text, encoding="utf-8")
    if cfg.pretty:
        sys.stdout.write("\n".join(pretty_lines) + "\n")
    elif cfg.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def run_compute(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 1:
        raise InputError("compute takes exactly one input file")
    path = cfg.inputs[0]
    table, _, spatial = _load(cfg, path)
    names = INDEX_NAMES if cfg.index == "all" else (cfg.index,)
    notes = []
    overall, local = {}, {}
    for name in names:
        try:
            overall[name] = _overall(name, table, cfg.base)
            local[name] = _local(name, table, cfg.base).values
        except DomainError as exc:
            if cfg.index != "all":
                raise
            overall[name] = None
            local[name] = np.full(table.n_units, np.nan)
            notes.append(f"{name}: {exc}")
    if "dissimilarity" in names:
        notes.append("dissimilarity per-unit values are the unit terms of the multigroup index")
    zero = [u for u, ok in zip(table.unit_ids, table.populated()) if not ok]
    if zero:
        notes.append("zero-population units have null local values and zero weight")
    single = len(names) == 1
    per_unit = []
    for i, uid in enumerate(table.unit_ids):
        row = {"unit_id": uid}
        for name in names:
            row[_key(name) if not single else "value"] = local[name][i]
        per_unit.append(row)
    report = {
        "command": "compute",
        "source": str(path),
        "index": cfg.index,
        "base": _base_label(cfg.base),
        "units": cfg.base.units,
        "groups": list(table.groups.names),
        "n_units": table.n_units,
        "total_population": table.total_population,
        "spatial": spatial,
        "overall": overall[names[0]] if single else {_key(n): overall[n] for n in names},
        "per_unit": per_unit,
        "zero_population_units": zero,
        "notes": notes,
    }
    rows = [("scope", "unit_id", "index", "value")]
    rows += [("overall", "", _key(n), overall[n]) for n in names]
    rows += [("unit", uid, _key(n), float(local[n][i])) for i, uid in enumerate(table.unit_ids)
             for n in names]
    pretty = [f"{path}  base {_base_label(cfg.base)}  groups {','.join(table.groups.names)}"]
    pretty += [f"  {n:<14}{'undefined' if overall[n] is None else f'{overall[n]:.2f}':>10}" for n in names]
    return _emit(cfg, "compute", report, rows, pretty)


def _decomp_dict(r: decomp.DecompositionReport) -> dict:
    shares = r.shares() if r.total != 0 else None
    out = {
        "index_kind": r.index_kind,
        "base": _base_label(r.base),
        "total": r.total,
        "between": r.between,
        "within_total": r.within_total,
        "additivity_residual": r.additivity_residual,
        "between_share": None if shares is None else shares["between"],
        "within_share": None if shares is None else shares["within"],
        "per_district": [],
    }
    for c in r.per_district:
        d = {
            "district_id": c.district_id,
            "population_share": c.population_share,
            "raw_between_score": c.raw_between,
            "weighted_between_contribution": c.weighted_between,
            "raw_within_score": c.raw_within,
            "weighted_within_contribution": c.weighted_within,
        }
        if shares is not None:
            d["between_share"] = shares["districts"][c.district_id]["between"]
            d["within_share"] = shares["districts"][c.district_id]["within"]
        out["per_district"].append(d)
    return out


def run_decompose(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 1:
        raise InputError("decompose takes exactly one input file")
    path = cfg.inputs[0]
    table, hierarchy, _ = _load(cfg, path, spatial_ok=False)
    if hierarchy is None:
        raise InputError(f"{path}: no {cfg.district_col!r} column; decomposition needs districts")
    if cfg.index in ("divergence", "both", "all"):
        reports = [decomp.decompose_divergence(table, hierarchy, cfg.base)]
    else:
        reports = []
    if cfg.index in ("info-theory", "both", "all"):
        reports.append(decomp.decompose_info_theory(table, hierarchy, cfg.base))
    if not reports:
        raise InputError(f"decompose supports divergence, info-theory or both, not {cfg.index!r}")
    dicts = [_decomp_dict(r) for r in reports]
    report = {
        "command": "decompose",
        "source": str(path),
        "base": _base_label(cfg.base),
        "groups": list(table.groups.names),
        "district_col": cfg.district_col,
        "decompositions": dicts,
    }
    keys = ["population_share", "raw_between_score", "weighted_between_contribution",
            "raw_within_score", "weighted_within_contribution", "between_share", "within_share"]
    rows = [("index_kind", "component", *keys)]
    for d in dicts:
        rows.append((d["index_kind"], "total", 1.0, None, d["between"], None, d["within_total"],
                     d["between_share"], d["within_share"]))
        for c in d["per_district"]:
            rows.append((d["index_kind"], c["district_id"], *(c.get(k) for k in keys)))
    pretty = [f"{'':<16}" + "".join(f"{d['index_kind']:>14}" for d in dicts)]

    def line(label, get):
        vals = [get(d) for d in dicts]
        return f"{label:<16}" + "".join(f"{'' if v is None else f'{v:.2f}':>14}" for v in vals)

    pretty.append(line("Overall", lambda d: 1.0 if d["total"] else None))
    pretty.append(line("Between", lambda d: d["between_share"]))
    for k, c in enumerate(dicts[0]["per_district"]):
        pretty.append(line(f"  {c['district_id']}", lambda d, k=k: d["per_district"][k].get("between_share")))
    pretty.append(line("Within", lambda d: d["within_share"]))
    for k, c in enumerate(dicts[0]["per_district"]):
        pretty.append(line(f"  {c['district_id']}", lambda d, k=k: d["per_district"][k].get("within_share")))
    return _emit(cfg, "decompose", report, rows, pretty)


def run_sweep(cfg: RunConfig) -> int:
    if cfg.overall is None:
        raise InputError("sweep needs --overall p1,p2")
    curve = analysis.sweep_local_indexes(GroupDistribution(np.array(cfg.overall)), cfg.steps, cfg.base)
    report = {
        "command": "sweep",
        "base": _base_label(cfg.base),
        "overall": list(curve.overall.proportions),
        "steps": cfg.steps,
        "samples": [{"local_p1": p, "divergence": d, "info_theory": h} for p, d, h in curve.samples],
    }
    pretty = [f"{'local_p1':>9}{'D_i':>9}{'H_i':>9}"]
    pretty += [f"{p:>9.2f}{d:>9.2f}{h:>9.2f}" for p, d, h in curve.samples]
    return _emit(cfg, "sweep", report, curve.rows(), pretty, default_fmt="csv")


def run_correlate(cfg: RunConfig) -> int:
    if len(cfg.inputs) < 1:
        raise InputError("correlate needs at least one input file")
    pair = tuple(_key(p) for p in cfg.pair.split(":")) if ":" in cfg.pair else ("divergence", _key(cfg.pair))
    tables = [_load(cfg, p)[0] for p in cfg.inputs]
    rep = analysis.correlate_regions(tables, pair, cfg.base, region_ids=[str(p) for p in cfg.inputs],
                                     max_workers=cfg.jobs)
    report = {
        "command": "correlate",
        "base": _base_label(cfg.base),
        "pair": list(rep.pair),
        "per_region": [
            {"region_id": c.region_id, "pearson_r_local": c.pearson_r, "spearman_r_local": c.spearman_r,
             "n_units": c.n_units, "overall": list(c.overall), "flag": c.flag}
            for c in rep.per_region
        ],
        "mean_local_pearson": rep.mean_local,
        "mean_local_spearman": rep.mean_local_spearman,
        "cross_region_pearson": rep.cross_region,
        "cross_region_spearman": rep.cross_region_spearman,
        "flags": list(rep.flags),
    }
    rows = [("region_id", "pearson_r_local", "spearman_r_local", "n_units",
             f"overall_{pair[0]}", f"overall_{pair[1]}", "flag")]
    rows += [(c.region_id, c.pearson_r, c.spearman_r, c.n_units, *c.overall, c.flag or "")
             for c in rep.per_region]
    rows.append(("__mean_local__", rep.mean_local, rep.mean_local_spearman, None, None, None, ""))
    rows.append(("__cross_region__", rep.cross_region, rep.cross_region_spearman, len(tables), None, None,
                 "; ".join(rep.flags)))
    fmt2 = lambda v: "" if v is None else f"{v:.2f}"  # noqa: E731
    pretty = [f"{'region':<30}{'r_local':>9}{'n':>7}"]
    pretty += [f"{c.region_id[-30:]:<30}{fmt2(c.pearson_r):>9}{c.n_units:>7}  {c.flag or ''}"
               for c in rep.per_region]
    pretty.append(f"{'mean local r':<30}{fmt2(rep.mean_local):>9}")
    pretty.append(f"{'cross-region r':<30}{fmt2(rep.cross_region):>9}")
    return _emit(cfg, "correlate", report, rows, pretty)


COMMANDS = {
    "compute": run_compute,
    "decompose": run_decompose,
    "sweep": run_sweep,
    "correlate": run_correlate,
}


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", default="2", choices=["2", "e", "M"], help="logarithm base (default 2)")
    common.add_argument("--groups", help="group subset/merge, e.g. 'white,black' or 'white,other=black+asian'")
    common.add_argument("--district-col", default="district_id")
    common.add_argument("--out", type=Path, help="directory for report files (default: stdout)")
    common.add_argument("--format", dest="fmt", choices=["csv", "json"])
    common.add_argument("--pretty", action="store_true", help="print a rounded table to stdout")

    spatial = argparse.ArgumentParser(add_help=False)
    g = spatial.add_mutually_exclusive_group()
    g.add_argument("--radius", type=float, help="uniform kernel radius in coordinate units")
    g.add_argument("--weights", type=Path, help="weight triplet CSV (row_unit_id,col_unit_id,weight)")

    p = argparse.ArgumentParser(prog="divindex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common, spatial], help="overall and per-unit indexes")
    c.add_argument("input", type=Path)
    c.add_argument("--index", default="divergence", choices=[*INDEX_NAMES, "all"])

    d = sub.add_parser("decompose", parents=[common], help="between/within district decomposition")
    d.add_argument("input", type=Path)
    d.add_argument("--index", default="both", choices=["divergence", "info-theory", "both"])

    s = sub.add_parser("sweep", parents=[common], help="local index curves for a two-group city")
    s.add_argument("--overall", type=_floats, required=True, help="overall proportions, e.g. 0.75,0.25")
    s.add_argument("--steps", type=int, default=101)

    r = sub.add_parser("correlate", parents=[common, spatial], help="local and cross-region correlations")
    r.add_argument("inputs", type=Path, nargs="+")
    r.add_argument("--pair", default="info-theory",
                   help="index compared with divergence (info-theory, dissimilarity, entropy) or 'a:b'")
    r.add_argument("--jobs", type=int, default=1)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = getattr(ns, "inputs", None) or ([ns.input] if getattr(ns, "input", None) else [])
    return RunConfig(
        inputs=list(inputs),
        base=ns.base,
        groups=ns.groups,
        index=getattr(ns, "index", "divergence"),
        district_col=ns.district_col,
        radius=getattr(ns, "radius", None),
        weights=getattr(ns, "weights", None),
        out=ns.out,
        fmt=ns.fmt,
        pretty=ns.pretty,
        overall=getattr(ns, "overall", None),
        steps=getattr(ns, "steps", 101),
        pair=getattr(ns, "pair", "info-theory"),
        jobs=getattr(ns, "jobs", 1),
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    source = [str(p) for p in (getattr(ns, "inputs", None) or [getattr(ns, "input", None)]) if p]
    try:
        cfg = config_from_args(ns)
        return COMMANDS[ns.command](cfg)
    except DivIndexError as exc:
        code = EXIT_DOMAIN if isinstance(exc, DomainError) else EXIT_INPUT
        err = {"error": type(exc).__name__, "message": str(exc), "source": source, "exit_code": code}
        sys.stderr.write(json.dumps(err) + "\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
