"""Bootstrap summaries of repeated runs.

Two protocols: the median of resampled medians with a 5th-95th percentile
interval, and the mean of resampled means with a +-2 standard deviation
interval. Non-finite inputs (undefined KL divergences) are dropped and counted.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

DEFAULT_RESAMPLES = 10_000


@dataclass(frozen=True)
class BootstrapSummary:
    center: float
    lower: float
    upper: float
    num_resamples: int
    kind: str
    excluded_count: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def percentile(sorted_values, q: float) -> float:
    """Linear interpolation between closest ranks; ``sorted_values`` ascending."""
    if not 0 <= q <= 100:
        raise ValueError(f"percentile q={q} outside [0, 100]")
    v = np.asarray(sorted_values, dtype=float)
    if v.size == 0:
        raise ValueError("percentile of an empty sequence")
    pos = (v.size - 1) * q / 100.0
    lo = int(np.floor(pos))
    hi = min(lo + 1, v.size - 1)
    return float(v[lo] + (pos - lo) * (v[hi] - v[lo]))


def _clean(values) -> tuple[np.ndarray, int]:
    v = np.asarray(values, dtype=float).ravel()
    keep = np.isfinite(v)
    v = v[keep]
    if v.size < 2:
        raise ValueError("bootstrap needs at least two finite values")
    return v, int((~keep).sum())


def _resample(values: np.ndarray, num_resamples: int, rng_seed) -> np.ndarray:
    rng = np.random.default_rng(rng_seed)
    idx = rng.integers(0, values.size, size=(num_resamples, values.size))
    return values[idx]


def bootstrap_median_ci(values, num_resamples: int = DEFAULT_RESAMPLES, rng_seed=0) -> BootstrapSummary:
    v, excluded = _clean(values)
    meds = np.sort(np.median(_resample(v, num_resamples, rng_seed), axis=1))
    return BootstrapSummary(
        center=float(np.median(meds)),
        lower=percentile(meds, 5),
        upper=percentile(meds, 95),
        num_resamples=num_resamples,
        kind="median_90",
        excluded_count=excluded,
    )


def bootstrap_mean_ci(values, num_resamples: int = DEFAULT_RESAMPLES, rng_seed=0) -> BootstrapSummary:
    v, excluded = _clean(values)
    means = _resample(v, num_resamples, rng_seed).mean(axis=1)
    center = float(means.mean())
    spread = 2.0 * float(means.std())
    return BootstrapSummary(
        center=center,
        lower=center - spread,
        upper=center + spread,
        num_resamples=num_resamples,
        kind="mean_2sigma",
        excluded_count=excluded,
    )


def bootstrap_median_trace(traces, num_resamples: int = DEFAULT_RESAMPLES, rng_seed=0) -> list[BootstrapSummary]:
    """Per-iteration :func:`bootstrap_median_ci` for a ``(runs, iterations)`` array.

    The same resampling indices are shared across iterations.
    """
    t = np.asarray(traces, dtype=float)
    runs = t.shape[0]
    rng = np.random.default_rng(rng_seed)
    idx = rng.integers(0, runs, size=(num_resamples, runs))
    out = []
    for col in t.T:
        finite = np.isfinite(col)
        if finite.all():
            meds = np.sort(np.median(col[idx], axis=1))
            out.append(
                BootstrapSummary(
                    float(np.median(meds)),
                    percentile(meds, 5),
                    percentile(meds, 95),
                    num_resamples,
                    "median_90",
                    0,
                )
            )
        else:
            out.append(bootstrap_median_ci(col, num_resamples, rng_seed))
    return out
