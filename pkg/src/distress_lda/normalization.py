"""Z-score normalization fitted on the pooled training set."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import VARIABLES, LabeledSample, RatioVector, TrainingSet
from .errors import ZeroVarianceError


@dataclass(frozen=True)
class NormalizationStats:
    """Per-variable mean and sample standard deviation (divisor n-1).

    Fitted once on the full training set, both groups pooled, and reused
    unchanged for every out-of-sample vector.
    """

    mean: dict[str, float]
    sd: dict[str, float]

    def __post_init__(self) -> None:
        for name in VARIABLES:
            if name not in self.mean or name not in self.sd:
                raise ValueError(f"normalization stats missing variable {name!r}")
            if not self.sd[name] > 0:
                raise ValueError(f"sd for {name!r} must be positive, got {self.sd[name]!r}")


def fit_normalizer(ts: TrainingSet) -> NormalizationStats:
    """Compute pooled means and n-1 standard deviations per variable."""
    matrix = np.array([s.ratios.as_array() for s in ts.samples])
    means = matrix.mean(axis=0)
    sds = matrix.std(axis=0, ddof=1)
    for name, sd in zip(VARIABLES, sds):
        if sd == 0.0:
            raise ZeroVarianceError(f"variable {name!r} is constant across the training set")
    return NormalizationStats(
        mean={name: float(m) for name, m in zip(VARIABLES, means)},
        sd={name: float(s) for name, s in zip(VARIABLES, sds)},
    )


def apply(stats: NormalizationStats, v: RatioVector) -> RatioVector:
    """Standardize one ratio vector; returns z-values in the same six slots."""
    return RatioVector(
        **{name: (getattr(v, name) - stats.mean[name]) / stats.sd[name] for name in VARIABLES}
    )


def normalize_training_set(stats: NormalizationStats, ts: TrainingSet) -> TrainingSet:
    """Replace every sample's ratios by their z-scores; labels and order kept."""
    samples = tuple(
        LabeledSample(s.bank_id, apply(stats, s.ratios), s.label) for s in ts.samples
    )
    return TrainingSet(samples=samples, n0=ts.n0, n1=ts.n1, p=ts.p)
