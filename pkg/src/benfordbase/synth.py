"""Synthetic Benford-conforming samples and fraud contamination.

Randomness comes from numpy's ``default_rng`` (PCG64 bit generator seeded
through SeedSequence), so a given seed yields the same stream on every
platform numpy supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .stats import Sample

UNIFORM_REPLACEMENT = "uniform_replacement"
CONSTANT_PADDING = "constant_padding"
FRAUD_KINDS = (UNIFORM_REPLACEMENT, CONSTANT_PADDING)


@dataclass(frozen=True)
class GeneratorConfig:
    n: int = 5000
    decades: float = 6.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not self.decades > 0:
            raise ValueError(f"decades must be > 0, got {self.decades}")


@dataclass(frozen=True)
class FraudModel:
    """``params`` is ``(lo, hi)`` for uniform replacement, ``(c,)`` for padding."""

    kind: str
    fraction: float
    params: tuple = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in FRAUD_KINDS:
            raise ValueError(f"unknown fraud kind {self.kind!r}; choose from {FRAUD_KINDS}")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")
        if self.kind == UNIFORM_REPLACEMENT:
            if len(self.params) != 2:
                raise ValueError("uniform_replacement needs params (lo, hi)")
            lo, hi = self.params
            if not 1 <= lo <= hi:
                raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
        else:
            if len(self.params) != 1 or self.params[0] < 1:
                raise ValueError("constant_padding needs params (c,) with c >= 1")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "FraudModel":
        """Parse ``KIND:FRACTION:P1[:P2]``, e.g. ``uniform_replacement:0.3:400:900``."""
        kind, fraction, *params = text.split(":")
        return cls(kind, float(fraction), tuple(int(p) for p in params), seed)


def gen_benford(cfg: GeneratorConfig, label=None) -> Sample:
    """Log-uniform integers over ``cfg.decades`` orders of magnitude, all >= 1."""
    rng = np.random.default_rng(cfg.seed)
    u = rng.random(cfg.n)
    values = np.floor(np.exp(u * (cfg.decades * math.log(10.0)))).astype(np.int64)
    return Sample(values, label=label)


def apply_fraud(s: Sample, m: FraudModel) -> Sample:
    n = len(s)
    k = int(round(m.fraction * n))
    if m.fraction > 0 and n == 0:
        raise ValueError("cannot contaminate an empty sample")
    if k == 0:
        return s
    rng = np.random.default_rng(m.seed)
    idx = np.sort(rng.choice(n, size=k, replace=False))
    values = np.array(s.values, copy=True)
    if m.kind == UNIFORM_REPLACEMENT:
        lo, hi = m.params
        values[idx] = rng.integers(lo, hi, size=k, endpoint=True)
    else:
        values[idx] = values[idx] + m.params[0]
    note = f"contaminated: {m.kind} fraction={m.fraction} params={m.params} seed={m.seed}"
    return Sample(values, s.label, s.zeros_excluded, s.notes + (note,))
