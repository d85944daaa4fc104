"""Command-line entry points: analyze, cohort, uniform-compare, simulate.

Every command prints a JSON report on stdout. With ``--out DIR`` the
plot-ready CSV series and the same report (``report.json``) are also
written into DIR.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .ingest import (
    FIELDS,
    ElectionKey,
    VoteRecord,
    build_sample,
    load_vote_files,
)
from .stats import (
    BaseCurve,
    OutlierReport,
    Sample,
    cohort_outliers,
    curve_sd,
    kl_curve,
    ratio_deviation_curve,
    uniform_comparison,
)
from .synth import FraudModel, GeneratorConfig, apply_fraud, gen_benford

FRAUD_SEED_OFFSET = 1_000_000


@dataclass(frozen=True)
class AnalysisConfig:
    base_lo: int = 6
    base_hi: int = 70
    d1: int = 1
    d2: int = 2
    top_k: int = 3
    z_threshold: float = 3.0
    min_sample_size: int = 50
    leave_one_out: bool = False

    def __post_init__(self):
        if not 2 <= self.base_lo <= self.base_hi:
            raise ValueError(f"need 2 <= base_lo <= base_hi, got {self.base_lo}..{self.base_hi}")
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError("digits must be >= 1")
        if self.base_lo <= max(self.d1, self.d2):
            raise ValueError(f"base_lo must exceed max(d1, d2) = {max(self.d1, self.d2)}")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")

    @property
    def bases(self) -> range:
        return range(self.base_lo, self.base_hi + 1)


# -- simulation --------------------------------------------------------------

def simulate_samples(
    n_elections: int = 45,
    n: int = 5000,
    decades: float = 6.0,
    seed: int = 0,
    fraud: FraudModel | None = None,
    target: int | None = None,
) -> dict[int, Sample]:
    """Fair cohort keyed by 1-based election index; election ``i`` uses seed ``seed + i``.

    The fraud model, if any, is applied to election ``target`` only.
    """
    samples = {i: gen_benford(GeneratorConfig(n, decades, seed + i), label=i)
               for i in range(1, n_elections + 1)}
    if fraud is not None:
        if target not in samples:
            raise ValueError(f"--target must be in 1..{n_elections}, got {target}")
        samples[target] = apply_fraud(samples[target], fraud)
    return samples


def simulated_key(i: int, year: int = 2000, office: str = "senator") -> ElectionKey:
    return ElectionKey(f"E{i:02d}", year, office)


def samples_to_records(samples: Mapping[int, Sample], top_k: int = 3) -> list[VoteRecord]:
    """Lay each sample out as ``top_k`` candidates across municipalities.

    Entry ``j`` goes to municipality ``j // top_k`` and candidate ``j % top_k``,
    so ``build_sample`` recovers the values in their original order.
    """
    records = []
    for i in sorted(samples):
        key = simulated_key(i)
        for j, v in enumerate(samples[i].values):
            muni, cand = divmod(j, top_k)
            records.append(VoteRecord(key.state, key.year, key.office,
                                      f"M{muni + 1:05d}", f"C{cand + 1}", int(v)))
    return records


def write_votes(records: Iterable[VoteRecord], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(FIELDS)
    for r in records:
        w.writerow([r.state, r.year, r.office, r.municipality, r.candidate, r.votes])


# -- analyses ----------------------------------------------------------------

def _points(curve: BaseCurve) -> list:
    return [[b, None if math.isnan(v) else v] for b, v in curve.points.items()]


def analyze_sample(sample: Sample, cfg: AnalysisConfig) -> tuple[BaseCurve, BaseCurve, dict]:
    ratio = ratio_deviation_curve(sample, cfg.bases, cfg.d1, cfg.d2, cfg.min_sample_size)
    kl = kl_curve(sample, cfg.bases, cfg.min_sample_size)
    warnings = list(dict.fromkeys(ratio.warnings + kl.warnings + sample.notes))
    try:
        sd = curve_sd(ratio)
    except ValueError as exc:
        sd = None
        warnings.append(str(exc))
    report = {
        "election": str(sample.label),
        "sample_size": len(sample),
        "zeros_excluded": sample.zeros_excluded,
        "ratio_deviation_sd": sd,
        "missing_bases": ratio.missing,
        "warnings": warnings,
        "ratio_deviation": _points(ratio),
        "kl_benford": _points(kl),
    }
    return ratio, kl, report


def analyze_cohort(
    samples: Mapping[object, Sample], cfg: AnalysisConfig
) -> tuple[OutlierReport, dict[object, BaseCurve], dict]:
    """Per-election ratio-deviation SDs scored against the cohort.

    Elections are processed in ascending key order so results never depend
    on input order.
    """
    curves, sds, warnings = {}, {}, {}
    for key in sorted(samples):
        s = samples[key]
        c = ratio_deviation_curve(s, cfg.bases, cfg.d1, cfg.d2, cfg.min_sample_size)
        curves[key] = c
        sds[key] = curve_sd(c)
        w = list(dict.fromkeys(c.warnings + s.notes))
        if w:
            warnings[str(key)] = w
    rep = cohort_outliers(sds, cfg.z_threshold, cfg.leave_one_out)
    counts, edges = np.histogram(list(sds.values()), bins="auto")
    report = {
        "cohort_size": len(samples),
        "cohort_mean": rep.cohort_mean,
        "cohort_std": rep.cohort_std,
        "threshold": rep.threshold,
        "leave_one_out": rep.leave_one_out,
        "flagged": [str(k) for k in rep.flagged],
        "elections": [
            {
                "election": str(k),
                "sample_size": len(samples[k]),
                "zeros_excluded": samples[k].zeros_excluded,
                "sd": sc.sd,
                "z": sc.z,
                "tail_probability": sc.tail_probability,
                "flagged": sc.flagged,
            }
            for k, sc in rep.per_election.items()
        ],
        "sd_histogram": [
            {"bin_lo": float(lo), "bin_hi": float(hi), "count": int(c)}
            for lo, hi, c in zip(edges[:-1], edges[1:], counts)
        ],
        "warnings": warnings,
    }
    return rep, curves, report


def compare_uniform(samples: Sequence[Sample], cfg: AnalysisConfig) -> tuple[BaseCurve, BaseCurve, dict]:
    kb, ku = uniform_comparison(samples, cfg.bases, cfg.min_sample_size)
    report = {
        "n_samples": len(samples),
        "benford_better_at_all_bases": bool(np.all(kb.values < ku.values)),
        "warnings": list(kb.warnings),
        "curve": [[b, kb.points[b], ku.points[b]] for b in kb.bases],
    }
    return kb, ku, report


# -- argument handling -------------------------------------------------------

def _parse_bases(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")


def _parse_digits(text: str) -> tuple[int, int]:
    try:
        d1, d2 = text.split(",")
        return int(d1), int(d2)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected D1,D2, got {text!r}")


def _config(args) -> AnalysisConfig:
    return AnalysisConfig(
        base_lo=args.bases[0], base_hi=args.bases[1], d1=args.digits[0], d2=args.digits[1],
        top_k=args.top_k, z_threshold=args.z_threshold, min_sample_size=args.min_sample,
        leave_one_out=args.leave_one_out,
    )


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if isinstance(x, float) and math.isnan(x) else x for x in row])


def _emit(report: dict, out: Path | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=False)
    if out is not None:
        (out / "report.json").write_text(text + "\n", encoding="utf-8")
    print(text)


def _outdir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _samples_from_files(files, cfg: AnalysisConfig) -> dict[ElectionKey, Sample]:
    groups: dict[ElectionKey, list[VoteRecord]] = {}
    for r in load_vote_files(files):
        groups.setdefault(r.key, []).append(r)
    return {k: build_sample(groups[k], k, cfg.top_k) for k in sorted(groups)}


def _header(command: str, args, cfg: AnalysisConfig | None) -> dict:
    return {
        "command": command,
        "version": __version__,
        "inputs": [str(f) for f in getattr(args, "files", [])],
        "config": asdict(cfg) if cfg else None,
    }


def cmd_analyze(args) -> int:
    cfg = _config(args)
    records = load_vote_files(args.files)
    key = ElectionKey.parse(args.election)
    sample = build_sample(records, key, cfg.top_k)
    ratio, kl, body = analyze_sample(sample, cfg)
    out = _outdir(args)
    if out is not None:
        _write_csv(out / "ratio_deviation.csv", ["base", "ratio_deviation"], ratio.points.items())
        _write_csv(out / "kl_benford.csv", ["base", "kl_benford"], kl.points.items())
    _emit(_header("analyze", args, cfg) | body, out)
    return 0


def cmd_cohort(args) -> int:
    cfg = _config(args)
    samples = _samples_from_files(args.files, cfg)
    rep, curves, body = analyze_cohort(samples, cfg)
    out = _outdir(args)
    if out is not None:
        _write_csv(out / "elections.csv",
                   ["election", "sample_size", "zeros_excluded", "sd", "z", "tail_probability", "flagged"],
                   ([e["election"], e["sample_size"], e["zeros_excluded"], e["sd"], e["z"],
                     e["tail_probability"], int(e["flagged"])] for e in body["elections"]))
        _write_csv(out / "sd_histogram.csv", ["bin_lo", "bin_hi", "count"],
                   ([h["bin_lo"], h["bin_hi"], h["count"]] for h in body["sd_histogram"]))
        _write_csv(out / "ratio_curves.csv", ["election", "base", "ratio_deviation"],
                   ([str(k), b, v] for k, c in curves.items() for b, v in c.points.items()))
    _emit(_header("cohort", args, cfg) | body, out)
    return 0


def cmd_uniform_compare(args) -> int:
    cfg = _config(args)
    samples = _samples_from_files(args.files, cfg)
    kb, ku, body = compare_uniform(list(samples.values()), cfg)
    out = _outdir(args)
    if out is not None:
        _write_csv(out / "uniform_compare.csv", ["base", "kl_benford", "kl_uniform"], body["curve"])
    _emit(_header("uniform-compare", args, cfg) | body, out)
    return 0


def cmd_simulate(args) -> int:
    fraud = None
    if args.fraud:
        fraud = FraudModel.parse(args.fraud, seed=args.seed + FRAUD_SEED_OFFSET)
        if args.target is None:
            raise ValueError("--fraud needs --target INDEX")
    samples = simulate_samples(args.elections, args.n, args.decades, args.seed, fraud, args.target)
    records = samples_to_records(samples, args.top_k)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        write_votes(records, fh)
    report = _header("simulate", args, None) | {
        "out": str(args.out),
        "seed": args.seed,
        "elections": [str(simulated_key(i)) for i in sorted(samples)],
        "n": args.n,
        "decades": args.decades,
        "top_k": args.top_k,
        "fraud": None if fraud is None else {
            "kind": fraud.kind, "fraction": fraud.fraction, "params": list(fraud.params),
            "seed": fraud.seed, "target": str(simulated_key(args.target)),
        },
    }
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bases", type=_parse_bases, default=(6, 70), metavar="LO..HI")
    common.add_argument("--digits", type=_parse_digits, default=(1, 2), metavar="D1,D2")
    common.add_argument("--top-k", type=int, default=3)
    common.add_argument("--z-threshold", type=float, default=3.0)
    common.add_argument("--min-sample", type=int, default=50)
    common.add_argument("--leave-one-out", action="store_true")
    common.add_argument("--out", default=None, metavar="DIR")

    p = argparse.ArgumentParser(prog="benfordbase", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="ratio and KL curves for one election")
    a.add_argument("files", nargs="+")
    a.add_argument("--election", required=True, metavar="STATE:YEAR:OFFICE")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("cohort", parents=[common], help="SD z-scores across a cohort of elections")
    c.add_argument("files", nargs="+")
    c.set_defaults(func=cmd_cohort)

    u = sub.add_parser("uniform-compare", parents=[common], help="mean KL to Benford vs uniform")
    u.add_argument("files", nargs="+")
    u.set_defaults(func=cmd_uniform_compare)

    s = sub.add_parser("simulate", help="write a synthetic cohort as vote CSV")
    s.add_argument("--out", required=True, metavar="PATH")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--elections", type=int, default=45)
    s.add_argument("--n", type=int, default=5000)
    s.add_argument("--decades", type=float, default=6.0)
    s.add_argument("--top-k", type=int, default=3)
    s.add_argument("--fraud", default=None, metavar="KIND:FRACTION:P1[:P2]")
    s.add_argument("--target", type=int, default=None, metavar="INDEX")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, LookupError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, LookupError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
