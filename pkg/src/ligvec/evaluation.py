"""Clustering evaluation against family / super-family gold standards.

The score is the family-size-weighted best-match F-measure: for each gold
family the harmonic mean of precision and recall is maximized over
clusters, and the overall score averages these maxima weighted by family
size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .clustering import Clustering, transclust
from .corpus_io import GoldStandard, SimilarityMatrix

# sweep grids used by the published protocols: similarity scores in [0, 1]
# stepped by 0.001, BLAST scores in [0, 100] stepped by 0.05
SWEEP_PRESETS: dict[str, tuple[float, float, float]] = {
    "unit": (0.0, 1.0, 0.001),
    "blast": (0.0, 100.0, 0.05),
}

# absolute slack when sizing grids: (hi - lo) / step can land a hair under
# an integer in floating point
_GRID_TOL = 1e-6


class UnlabeledProteinError(ValueError):
    """A clustered protein is missing from the gold standard."""


@dataclass
class FamilyScore:
    family: str
    size: int
    best_cluster: int
    precision: float
    recall: float
    f: float


@dataclass
class FMeasureReport:
    f: float
    level: str
    n: int
    families: list[FamilyScore]


@dataclass
class SweepPoint:
    threshold: float
    f: float
    n_clusters: int


@dataclass
class SweepResult:
    best_threshold: float
    best_f: float
    curve: list[SweepPoint]


def fmeasure(clustering: Clustering, gold: GoldStandard, level: str = "family") -> FMeasureReport:
    """Weighted best-match F-measure of a clustering at the given level.

    Every clustered protein must carry a gold label; n is the number of
    clustered proteins.  Ties in the per-family maximum go to the smaller
    cluster index.
    """
    if not clustering.clusters:
        raise ValueError("empty clustering")
    labels = gold.level_labels(level)
    members = clustering.ids()
    missing = sorted(members - set(labels))
    if missing:
        raise UnlabeledProteinError(f"proteins without {level} label: {missing[:5]}" +
                                    (f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""))

    family_sizes: dict[str, int] = {}
    for pid in members:
        family_sizes[labels[pid]] = family_sizes.get(labels[pid], 0) + 1
    n = len(members)

    per_cluster_counts: list[dict[str, int]] = []
    for cluster in clustering.clusters:
        counts: dict[str, int] = {}
        for pid in cluster:
            counts[labels[pid]] = counts.get(labels[pid], 0) + 1
        per_cluster_counts.append(counts)

    scores: list[FamilyScore] = []
    weighted = 0.0
    for fam in sorted(family_sizes):
        n_f = family_sizes[fam]
        best = FamilyScore(fam, n_f, -1, 0.0, 0.0, -1.0)
        for g, counts in enumerate(per_cluster_counts):
            n_fg = counts.get(fam, 0)
            n_g = len(clustering.clusters[g])
            precision = n_fg / n_g
            recall = n_fg / n_f
            f = 0.0 if precision + recall == 0.0 else 2 * precision * recall / (precision + recall)
            if f > best.f:
                best = FamilyScore(fam, n_f, g, precision, recall, f)
        scores.append(best)
        weighted += n_f * best.f
    return FMeasureReport(weighted / n, level, n, scores)


def threshold_grid(lo: float, hi: float, step: float) -> list[float]:
    """Grid points lo, lo + step, ..., with floor((hi - lo)/step) + 1
    entries."""
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    if hi < lo:
        raise ValueError(f"degenerate range [{lo}, {hi}]")
    count = math.floor((hi - lo) / step + _GRID_TOL) + 1
    return [lo + i * step for i in range(count)]


def threshold_sweep(
    matrix: SimilarityMatrix,
    gold: GoldStandard,
    algo: Callable[[SimilarityMatrix, float], Clustering] = transclust,
    level: str = "family",
    lo: float = 0.0,
    hi: float = 1.0,
    step: float = 0.001,
) -> SweepResult:
    """Cluster at every grid threshold, score each partition, and return
    the argmax (ties to the smallest threshold) with the full curve."""
    curve: list[SweepPoint] = []
    best: SweepPoint | None = None
    for t in threshold_grid(lo, hi, step):
        try:
            clustering = algo(matrix, t)
            report = fmeasure(clustering, gold, level)
        except Exception as exc:
            raise RuntimeError(f"sweep failed at threshold {t}: {exc}") from exc
        point = SweepPoint(t, report.f, len(clustering))
        curve.append(point)
        if best is None or point.f > best.f:
            best = point
    return SweepResult(best.threshold, best.f, curve)
