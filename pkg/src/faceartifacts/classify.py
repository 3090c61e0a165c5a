"""End-to-end labeling: face records -> threshold -> artifact/block.

A face is an artifact exactly when its index is strictly below the
threshold; with no detected threshold every face stays unlabeled and the
status is surfaced instead of guessed around.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from faceartifacts import threshold as th
from faceartifacts.errors import DegenerateSample
from faceartifacts.metrics import METRICS, FaceRecord

ARTIFACT = "artifact"
BLOCK = "block"
UNLABELED = "unlabeled"

DEFAULT_METRIC = "cc"


@dataclass(frozen=True)
class ClassificationResult:
    metric: str
    report: th.ThresholdReport
    labels: Tuple[str, ...]  # aligned with the input records
    counts: Dict[str, int]
    threshold_source: str = "detected"  # "detected" | "override"

    @property
    def found(self) -> bool:
        return self.report.found


def classify(
    records: Sequence[FaceRecord],
    metric: str = DEFAULT_METRIC,
    threshold_override: Optional[float] = None,
    grid_points: int = th.GRID_POINTS,
    min_height: float = th.PEAK_MIN_HEIGHT,
    min_prominence: float = th.PEAK_MIN_PROMINENCE,
    valley_rule: str = th.VALLEY_RULE_ADJACENT,
) -> ClassificationResult:
    """Label every record as artifact/block by the chosen metric.

    ``threshold_override`` skips detection and applies an externally
    computed threshold; use with care, a threshold from one dataset does
    not automatically transfer to another.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}, expected one of {METRICS}")
    values = [r.fai[metric] for r in records]
    source = "detected"
    if threshold_override is not None:
        report = th.ThresholdReport(
            status="found",
            threshold=float(threshold_override),
            reason="externally supplied threshold",
        )
        source = "override"
    else:
        try:
            report = th.detect(
                values,
                grid_points=grid_points,
                min_height=min_height,
                min_prominence=min_prominence,
                valley_rule=valley_rule,
            )
        except DegenerateSample as exc:
            report = th.ThresholdReport(status="no-threshold", reason=str(exc))

    if report.found:
        t = report.threshold
        labels = tuple(ARTIFACT if v < t else BLOCK for v in values)
    else:
        labels = tuple(UNLABELED for _ in values)
    counts = {
        "n_faces": len(labels),
        "n_artifacts": sum(1 for l in labels if l == ARTIFACT),
        "n_blocks": sum(1 for l in labels if l == BLOCK),
    }
    return ClassificationResult(
        metric=metric,
        report=report,
        labels=labels,
        counts=counts,
        threshold_source=source,
    )


def classify_all_metrics(
    records: Sequence[FaceRecord], **kwargs
) -> Dict[str, ClassificationResult]:
    """Run classify per metric; lets the caller compare detection success."""
    return {m: classify(records, metric=m, **kwargs) for m in METRICS}


def _ring_coords(ring) -> List[List[float]]:
    return [[float(x), float(y)] for x, y in zip(ring.xs.tolist(), ring.ys.tolist())]


def feature_collection(
    records: Sequence[FaceRecord], result: ClassificationResult
) -> dict:
    """GeoJSON FeatureCollection of labeled faces."""
    features = []
    for rec, label in zip(records, result.labels):
        geom = rec.face.geometry
        coords = [_ring_coords(geom.exterior)] + [_ring_coords(h) for h in geom.holes]
        props = {
            "face_id": rec.face.id,
            "area_m2": rec.area,
            **{m: rec.compactness[m] for m in METRICS},
            f"fai_{result.metric}": rec.fai[result.metric],
            "label": label,
        }
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": coords},
                "properties": props,
            }
        )
    return {
        "type": "FeatureCollection",
        "crs_note": "planar x/y meters in the caller's projection, not lon/lat",
        "features": features,
    }


def run_report(result: ClassificationResult, parameters: Optional[dict] = None) -> dict:
    """Sidecar JSON document describing one classify run."""
    return {
        "metric": result.metric,
        "status": result.report.status,
        "threshold": result.report.threshold,
        "threshold_source": result.threshold_source,
        "counts": result.counts,
        "threshold_report": th.report_to_dict(result.report),
        "parameters": parameters or {},
    }
