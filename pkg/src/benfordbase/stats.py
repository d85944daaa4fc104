"""Empirical digit distributions and the multi-base deviation statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .digits import DEFAULT_BASES, benford_pmf, leading_digits, theoretical_ratio

DEFAULT_MIN_SAMPLE_SIZE = 50

RATIO_DEVIATION = "ratio_deviation"
KL_BENFORD = "kl_benford"
KL_UNIFORM = "kl_uniform"


class DegenerateCohortError(ValueError):
    pass


def _as_int_array(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.dtype.kind in "iu" and (arr.size == 0 or arr.max() <= np.iinfo(np.int64).max):
        return arr.astype(np.int64)
    if arr.dtype.kind == "u":
        arr = arr.astype(object)
    if arr.dtype.kind == "O" or arr.size == 0:
        if not all(isinstance(x, (int, np.integer)) and not isinstance(x, bool) for x in arr):
            raise TypeError("sample values must be integers")
        return np.array([int(x) for x in arr], dtype=object) if arr.size else arr.astype(np.int64)
    raise TypeError(f"sample values must be integers, got dtype {arr.dtype}")


@dataclass(frozen=True, eq=False)
class Sample:
    """A bag of positive vote counts for one election.

    ``zeros_excluded`` counts zero entries dropped while building the sample;
    a suspiciously low number is itself diagnostic.
    """

    values: np.ndarray
    label: Hashable = None
    zeros_excluded: int = 0
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        arr = _as_int_array(self.values)
        if arr.size and (arr < 1).any():
            raise ValueError("sample values must be >= 1; drop zeros before building a Sample")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DigitDistribution:
    base: int
    counts: np.ndarray
    total: int
    warnings: tuple[str, ...] = ()

    @property
    def freqs(self) -> np.ndarray:
        return self.counts / self.total

    def count(self, d: int) -> int:
        return int(self.counts[d - 1])

    def freq(self, d: int) -> float:
        return self.counts[d - 1] / self.total


@dataclass(frozen=True)
class BaseCurve:
    """Statistic per base, ordered by base. Missing points hold NaN."""

    points: dict[int, float]
    statistic_kind: str
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        bases = list(self.points)
        if any(a >= b for a, b in zip(bases, bases[1:])):
            raise ValueError("curve bases must be strictly increasing")

    @property
    def bases(self) -> list[int]:
        return list(self.points)

    @property
    def values(self) -> np.ndarray:
        return np.array(list(self.points.values()), dtype=float)

    @property
    def missing(self) -> list[int]:
        return [b for b, v in self.points.items() if math.isnan(v)]


@dataclass(frozen=True)
class ElectionScore:
    sd: float
    z: float
    flagged: bool
    tail_probability: float


@dataclass(frozen=True)
class OutlierReport:
    per_election: dict[Hashable, ElectionScore]
    cohort_mean: float
    cohort_std: float
    threshold: float = 3.0
    leave_one_out: bool = False

    @property
    def flagged(self) -> list:
        return [k for k, s in self.per_election.items() if s.flagged]

    def max_z(self):
        return max(self.per_election.items(), key=lambda kv: kv[1].z)


def _low_power_warning(n: int, min_sample_size: int) -> tuple[str, ...]:
    if n < min_sample_size:
        return (f"low power: sample size {n} below minimum {min_sample_size}",)
    return ()


def empirical_distribution(
    s: Sample, b: int, min_sample_size: int = DEFAULT_MIN_SAMPLE_SIZE
) -> DigitDistribution:
    if len(s) == 0:
        raise ValueError("empirical distribution of an empty sample")
    digits = leading_digits(s.values, b)
    counts = np.bincount(digits, minlength=b)[1:]
    counts.setflags(write=False)
    return DigitDistribution(int(b), counts, len(s), _low_power_warning(len(s), min_sample_size))


def _directed_kl(x: np.ndarray, y: np.ndarray) -> float:
    support = x > 0
    if (y[support] == 0).any():
        return math.inf
    xs = x[support]
    return float(np.sum(xs * np.log(xs / y[support])))


def intrinsic_discrepancy(q: Sequence[float], p: Sequence[float]) -> float:
    """min{KL(p||q), KL(q||p)} with 0*log(0/y) = 0.

    A zero in one distribution where the other is positive makes that
    direction infinite; the finite direction is returned.
    """
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.shape != p.shape:
        raise ValueError(f"alphabet mismatch: {q.shape} vs {p.shape}")
    if (q < 0).any() or (p < 0).any():
        raise ValueError("probabilities must be nonnegative")
    value = min(_directed_kl(p, q), _directed_kl(q, p))
    if math.isinf(value):
        raise ValueError("intrinsic discrepancy undefined for disjoint supports")
    # rounding can leave tiny negatives when q == p
    return max(value, 0.0)


def kl_curve(
    s: Sample,
    bases: Iterable[int] = DEFAULT_BASES,
    min_sample_size: int = DEFAULT_MIN_SAMPLE_SIZE,
) -> BaseCurve:
    points = {}
    for b in sorted(bases):
        dist = empirical_distribution(s, b, min_sample_size)
        points[int(b)] = intrinsic_discrepancy(dist.freqs, benford_pmf(b).probs)
    return BaseCurve(points, KL_BENFORD, _low_power_warning(len(s), min_sample_size))


def ratio_deviation_curve(
    s: Sample,
    bases: Iterable[int] = DEFAULT_BASES,
    d1: int = 1,
    d2: int = 2,
    min_sample_size: int = DEFAULT_MIN_SAMPLE_SIZE,
) -> BaseCurve:
    """Observed Q(d1)/Q(d2) minus the base-free Benford ratio, per base.

    Bases where ``d2`` never leads are NaN and listed in the curve warnings.
    """
    bases = sorted(bases)
    if bases and bases[0] <= max(d1, d2):
        raise ValueError(f"every base must exceed max(d1, d2) = {max(d1, d2)}")
    expected = theoretical_ratio(d1, d2)
    points = {}
    missing = []
    for b in bases:
        dist = empirical_distribution(s, b, min_sample_size)
        if dist.count(d2) == 0:
            points[int(b)] = math.nan
            missing.append(int(b))
        else:
            points[int(b)] = dist.count(d1) / dist.count(d2) - expected
    warnings = _low_power_warning(len(s), min_sample_size)
    if missing:
        warnings += (f"digit {d2} never leads in bases {missing}; points missing",)
    return BaseCurve(points, RATIO_DEVIATION, warnings)


def curve_sd(c: BaseCurve) -> float:
    """Sample standard deviation (n - 1) of the non-missing curve points."""
    v = c.values
    v = v[~np.isnan(v)]
    if len(v) < 2:
        raise ValueError(f"need at least 2 non-missing points, got {len(v)}")
    return float(np.std(v, ddof=1))


def normal_two_sided_tail(z: float) -> float:
    """P(|Z| >= |z|) for a standard normal Z."""
    return math.erfc(abs(z) / math.sqrt(2.0))


def cohort_outliers(
    sds: Mapping[Hashable, float], threshold: float = 3.0, leave_one_out: bool = False
) -> OutlierReport:
    """z-score each election's curve SD against the cohort of SDs.

    With ``leave_one_out`` each election is scored against the mean and
    std of the other elections only; the reported cohort statistics are
    still those of the full cohort.
    """
    if len(sds) < 3:
        raise DegenerateCohortError(f"cohort needs at least 3 elections, got {len(sds)}")
    keys = sorted(sds)
    x = np.array([sds[k] for k in keys], dtype=float)
    mean = float(np.mean(x))
    std = float(np.std(x, ddof=1))
    if std == 0:
        raise DegenerateCohortError("all SDs identical; cohort std is zero")

    per = {}
    for i, k in enumerate(keys):
        if leave_one_out:
            rest = np.delete(x, i)
            m, s = float(np.mean(rest)), float(np.std(rest, ddof=1))
            if s == 0:
                raise DegenerateCohortError(f"cohort std without {k!r} is zero")
        else:
            m, s = mean, std
        z = (x[i] - m) / s
        per[k] = ElectionScore(float(x[i]), float(z), bool(z > threshold), normal_two_sided_tail(z))
    return OutlierReport(per, mean, std, threshold, leave_one_out)


def uniform_comparison(
    samples: Sequence[Sample],
    bases: Iterable[int] = DEFAULT_BASES,
    min_sample_size: int = DEFAULT_MIN_SAMPLE_SIZE,
) -> tuple[BaseCurve, BaseCurve]:
    """Mean intrinsic discrepancy to Benford and to uniform digits, per base."""
    if not samples:
        raise ValueError("uniform_comparison needs at least one sample")
    benford_pts, uniform_pts = {}, {}
    for b in sorted(bases):
        pmf = benford_pmf(b).probs
        uni = np.full(b - 1, 1.0 / (b - 1))
        to_benford, to_uniform = [], []
        for s in samples:
            q = empirical_distribution(s, b, min_sample_size).freqs
            to_benford.append(intrinsic_discrepancy(q, pmf))
            to_uniform.append(intrinsic_discrepancy(q, uni))
        benford_pts[int(b)] = math.fsum(to_benford) / len(samples)
        uniform_pts[int(b)] = math.fsum(to_uniform) / len(samples)
    warnings = tuple(
        f"{s.label}: {w}" for s in samples for w in _low_power_warning(len(s), min_sample_size)
    )
    return BaseCurve(benford_pts, KL_BENFORD, warnings), BaseCurve(uniform_pts, KL_UNIFORM, warnings)
