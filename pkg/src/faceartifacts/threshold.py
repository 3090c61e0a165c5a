"""Per-dataset classification threshold from the index distribution.

Pipeline: Silverman-bandwidth Gaussian KDE of the face-artifact-index
sample, peak/valley extraction with height and prominence filters, then
selection of the valley whose adjacent peaks include the global maximum.
A twin-peaked distribution is not guaranteed, so "no threshold" is a
regular outcome, not an error.
"""

import csv
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from faceartifacts.errors import DegenerateSample
from faceartifacts.geometry.backend import kernels

# peak filters; local minima are deliberately unconstrained
PEAK_MIN_HEIGHT = 0.0008
PEAK_MIN_PROMINENCE = 0.00075
GRID_POINTS = 1024

VALLEY_RULE_ADJACENT = "adjacent-to-max"
VALLEY_RULE_FIRST = "first"


@dataclass(frozen=True)
class KdeCurve:
    """Density estimate on a uniform grid."""

    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))


@dataclass(frozen=True)
class Extremum:
    location: float
    height: float
    kind: str  # "peak" | "valley"
    prominence: Optional[float] = None


@dataclass(frozen=True)
class ThresholdReport:
    status: str  # "found" | "no-threshold"
    threshold: Optional[float] = None
    peaks: Tuple[Extremum, ...] = ()
    valleys: Tuple[Extremum, ...] = ()
    left_peak: Optional[Extremum] = None
    right_peak: Optional[Extremum] = None
    threshold_prominence: Optional[float] = None
    reason: Optional[str] = None
    curve: Optional[KdeCurve] = field(default=None, compare=False)

    @property
    def found(self) -> bool:
        return self.status == "found"


def silverman_bandwidth(sample: Sequence[float]) -> float:
    """Rule-of-thumb bandwidth 0.9 * min(std, IQR/1.34) * n^(-1/5).

    Standard deviation uses the n-1 denominator; quartiles are linearly
    interpolated.  A zero IQR falls back to the standard deviation.
    """
    x = np.asarray(sample, dtype=np.float64)
    n = x.size
    if n < 2:
        raise DegenerateSample(f"need at least 2 values, got {n}")
    std = float(np.std(x, ddof=1))
    if std == 0.0:
        raise DegenerateSample("sample has zero variance")
    q75, q25 = np.percentile(x, [75.0, 25.0])
    iqr = float(q75 - q25)
    spread = min(std, iqr / 1.34) if iqr > 0.0 else std
    return 0.9 * spread * n ** (-0.2)


def kde(sample: Sequence[float], bandwidth: float,
        grid_points: int = GRID_POINTS) -> KdeCurve:
    """Gaussian KDE on a uniform grid spanning [min - 3h, max + 3h]."""
    x = np.asarray(sample, dtype=np.float64)
    if x.size < 2:
        raise DegenerateSample(f"need at least 2 values, got {x.size}")
    if not bandwidth > 0.0:
        raise DegenerateSample(f"bandwidth must be positive, got {bandwidth}")
    h = float(bandwidth)
    grid = np.linspace(x.min() - 3.0 * h, x.max() + 3.0 * h, grid_points)
    density = np.asarray(kernels.gaussian_kde(x, grid, h))
    return KdeCurve(grid=grid, density=density, bandwidth=h)


def _plateau_extrema(density: np.ndarray) -> List[Tuple[int, str]]:
    """Indices of strict local extrema; plateaus report their midpoint."""
    d = density
    n = d.shape[0]
    out: List[Tuple[int, str]] = []
    idx = 0
    while idx < n:  # walk runs of equal values
        j = idx
        while j + 1 < n and d[j + 1] == d[idx]:
            j += 1
        if idx > 0 and j < n - 1:
            left = d[idx - 1]
            right = d[j + 1]
            mid = (idx + j) // 2
            if left < d[idx] and right < d[idx]:
                out.append((mid, "peak"))
            elif left > d[idx] and right > d[idx]:
                out.append((mid, "valley"))
        idx = j + 1
    return out


def _prominence(density: np.ndarray, peak_idx: int) -> float:
    """Topographic prominence; grid boundaries act as terrain ends."""
    d = density
    h = d[peak_idx]
    left_min = h
    i = peak_idx - 1
    while i >= 0 and d[i] <= h:
        if d[i] < left_min:
            left_min = d[i]
        i -= 1
    right_min = h
    i = peak_idx + 1
    n = d.shape[0]
    while i < n and d[i] <= h:
        if d[i] < right_min:
            right_min = d[i]
        i += 1
    return float(h - max(left_min, right_min))


def find_extrema(
    curve: KdeCurve,
    min_height: float = PEAK_MIN_HEIGHT,
    min_prominence: float = PEAK_MIN_PROMINENCE,
) -> Tuple[List[Extremum], List[Extremum]]:
    """Qualifying peaks and all valleys of the density curve.

    Peaks must clear the minimum height and the minimum topographic
    prominence; valleys carry no constraints.
    """
    peaks: List[Extremum] = []
    valleys: List[Extremum] = []
    d = curve.density
    g = curve.grid
    for idx, kind in _plateau_extrema(d):
        if kind == "valley":
            valleys.append(
                Extremum(location=float(g[idx]), height=float(d[idx]), kind="valley")
            )
            continue
        height = float(d[idx])
        if height < min_height:
            continue
        prom = _prominence(d, idx)
        if prom < min_prominence:
            continue
        peaks.append(
            Extremum(location=float(g[idx]), height=height, kind="peak",
                     prominence=prom)
        )
    return peaks, valleys


def select_threshold(
    peaks: Sequence[Extremum],
    valleys: Sequence[Extremum],
    curve: Optional[KdeCurve] = None,
    valley_rule: str = VALLEY_RULE_ADJACENT,
) -> ThresholdReport:
    """Pick the threshold valley between two peaks.

    Needs at least two qualifying peaks and one valley.  Valleys are
    scanned left to right; the default rule accepts the first valley
    whose adjacent peaks include the global maximum, the optional
    ``first`` rule accepts any valley flanked by peaks.
    """
    peaks = sorted(peaks, key=lambda e: e.location)
    valleys = sorted(valleys, key=lambda e: e.location)
    base = dict(peaks=tuple(peaks), valleys=tuple(valleys), curve=curve)
    if len(peaks) < 2:
        return ThresholdReport(
            status="no-threshold",
            reason=f"{len(peaks)} qualifying peak(s), need at least 2",
            **base,
        )
    if not valleys:
        return ThresholdReport(
            status="no-threshold", reason="no valley in the density curve", **base
        )
    global_max = max(peaks, key=lambda e: e.height)
    for valley in valleys:
        left = None
        right = None
        for p in peaks:
            if p.location < valley.location:
                left = p
            elif p.location > valley.location:
                right = p
                break
        if left is None or right is None:
            continue
        if valley_rule == VALLEY_RULE_ADJACENT and global_max not in (left, right):
            continue
        return ThresholdReport(
            status="found",
            threshold=valley.location,
            left_peak=left,
            right_peak=right,
            threshold_prominence=left.height - valley.height,
            **base,
        )
    return ThresholdReport(
        status="no-threshold",
        reason="no valley lies between two qualifying peaks"
        + (" including the global maximum"
           if valley_rule == VALLEY_RULE_ADJACENT else ""),
        **base,
    )


def detect(
    sample: Sequence[float],
    grid_points: int = GRID_POINTS,
    min_height: float = PEAK_MIN_HEIGHT,
    min_prominence: float = PEAK_MIN_PROMINENCE,
    valley_rule: str = VALLEY_RULE_ADJACENT,
) -> ThresholdReport:
    """Bandwidth -> KDE -> extrema -> valley selection, as one call."""
    h = silverman_bandwidth(sample)
    curve = kde(sample, h, grid_points=grid_points)
    peaks, valleys = find_extrema(curve, min_height, min_prominence)
    return select_threshold(peaks, valleys, curve, valley_rule)


def curve_to_csv(curve: KdeCurve, fp) -> None:
    """Write the curve as CSV (columns grid, density), full precision."""
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["grid", "density"])
    for g, d in zip(curve.grid.tolist(), curve.density.tolist()):
        writer.writerow([repr(g), repr(d)])


def curve_from_csv(fp, bandwidth: float = float("nan")) -> KdeCurve:
    reader = csv.reader(fp)
    header = next(reader)
    if header[:2] != ["grid", "density"]:
        raise ValueError(f"unexpected CSV header: {header!r}")
    grid = []
    dens = []
    for row in reader:
        grid.append(float(row[0]))
        dens.append(float(row[1]))
    return KdeCurve(
        grid=np.array(grid), density=np.array(dens), bandwidth=bandwidth
    )


def _extremum_dict(e: Optional[Extremum]):
    if e is None:
        return None
    d = {"location": e.location, "height": e.height, "kind": e.kind}
    if e.kind == "peak":
        d["prominence"] = e.prominence
    return d


def report_to_dict(report: ThresholdReport) -> dict:
    """JSON-ready view of a report (curve omitted; export it as CSV)."""
    return {
        "status": report.status,
        "threshold": report.threshold,
        "peaks": [_extremum_dict(p) for p in report.peaks],
        "valleys": [_extremum_dict(v) for v in report.valleys],
        "left_peak": _extremum_dict(report.left_peak),
        "right_peak": _extremum_dict(report.right_peak),
        "threshold_prominence": report.threshold_prominence,
        "reason": report.reason,
        "bandwidth": report.curve.bandwidth if report.curve is not None else None,
    }
