"""Building-footprint overlay validation.

Detected artifacts belong to the street surface, so building overlap
marks a likely false positive.  Only this corner of the confusion matrix
is computable: blocks may or may not contain buildings, so false
negatives cannot be counted from footprints, and the report says so
rather than implying otherwise.
"""

import csv
import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from faceartifacts.errors import DegenerateGeometry, InvalidGeometry
from faceartifacts.geometry import ops
from faceartifacts.geometry.types import PolygonGeom
from faceartifacts.polygonizer import FacePolygon

log = logging.getLogger(__name__)

DEFAULT_X_LEVELS = (0.0, 10.0, 50.0, 100.0)


class _GridIndex:
    """Uniform-grid bbox index for candidate pruning."""

    def __init__(self, bboxes: Sequence[Tuple[float, float, float, float]]):
        self._bboxes = list(bboxes)
        spans = [max(b[2] - b[0], b[3] - b[1]) for b in self._bboxes] or [1.0]
        spans.sort()
        self._cell = max(spans[len(spans) // 2], 1e-9)
        self._buckets: Dict[Tuple[int, int], List[int]] = {}
        for i, b in enumerate(self._bboxes):
            for key in self._cells(b):
                self._buckets.setdefault(key, []).append(i)

    def _cells(self, b):
        c = self._cell
        for ix in range(int(b[0] // c), int(b[2] // c) + 1):
            for iy in range(int(b[1] // c), int(b[3] // c) + 1):
                yield (ix, iy)

    def query(self, b) -> List[int]:
        """Indices whose bbox intersects ``b``, in insertion order."""
        hits = set()
        for key in self._cells(b):
            hits.update(self._buckets.get(key, ()))
        return sorted(
            i
            for i in hits
            if not (
                self._bboxes[i][0] > b[2]
                or self._bboxes[i][2] < b[0]
                or self._bboxes[i][1] > b[3]
                or self._bboxes[i][3] < b[1]
            )
        )


class OverlapResult(NamedTuple):
    areas: List[float]  # per artifact, summed building intersection m^2
    invalid_buildings: int


def overlap_areas(
    artifacts: Sequence[FacePolygon],
    buildings: Sequence[PolygonGeom],
    use_index: bool = True,
) -> OverlapResult:
    """Total building-footprint overlap per artifact.

    Buildings are pruned by bbox first (grid index); invalid building
    geometries are skipped and counted, never fatal.  ``use_index=False``
    forces the brute-force all-pairs path (used to cross-check the
    index).
    """
    valid: List[Optional[PolygonGeom]] = []
    invalid = 0
    for b in buildings:
        try:
            if not b.exterior.is_simple() or any(
                not h.is_simple() for h in b.holes
            ):
                raise InvalidGeometry("self-intersecting building ring")
            valid.append(b)
        except (InvalidGeometry, DegenerateGeometry) as exc:
            log.warning("building skipped: %s", exc)
            valid.append(None)
            invalid += 1

    index = None
    if use_index:
        index = _GridIndex(
            [b.bbox() if b is not None else (0.0, 0.0, 0.0, 0.0) for b in valid]
        )

    areas: List[float] = []
    for artifact in artifacts:
        bbox = artifact.geometry.bbox()
        if index is not None:
            candidates = index.query(bbox)
        else:
            candidates = range(len(valid))
        total = 0.0
        for i in candidates:
            b = valid[i]
            if b is None:
                continue
            bb = b.bbox()
            if bb[0] > bbox[2] or bb[2] < bbox[0] or bb[1] > bbox[3] or bb[3] < bbox[1]:
                continue
            total += ops.intersection_area(artifact.geometry, b)
        areas.append(total)
    return OverlapResult(areas=areas, invalid_buildings=invalid)


@dataclass(frozen=True)
class ValidationReport:
    x_levels: Tuple[float, ...]
    n_artifacts: int
    per_level: Tuple[dict, ...]  # {"x", "n_artifacts", "n_false_positive", "rate"}
    overlaps: Tuple[float, ...]
    invalid_buildings: int
    false_negatives_note: str = (
        "false negatives are not computable from building footprints: urban "
        "blocks may legitimately contain no buildings"
    )


def false_positive_rates(
    overlaps: Sequence[float],
    x_levels: Sequence[float] = DEFAULT_X_LEVELS,
    invalid_buildings: int = 0,
) -> ValidationReport:
    """Share of artifacts whose building overlap exceeds each level X.

    X = 0 means any positive overlap at all flags the artifact.  With no
    artifacts the rates are absent rather than fabricated.
    """
    levels = tuple(float(x) for x in x_levels)
    n = len(overlaps)
    per_level = []
    for x in levels:
        entry: dict = {"x": x, "n_artifacts": n}
        fp = sum(1 for o in overlaps if o > x)
        entry["n_false_positive"] = fp
        entry["rate"] = (fp / n) if n else None
        per_level.append(entry)
    return ValidationReport(
        x_levels=levels,
        n_artifacts=n,
        per_level=tuple(per_level),
        overlaps=tuple(float(o) for o in overlaps),
        invalid_buildings=invalid_buildings,
    )


def report_to_dict(report: ValidationReport) -> dict:
    return {
        "x_levels": list(report.x_levels),
        "n_artifacts": report.n_artifacts,
        "per_level": [dict(e) for e in report.per_level],
        "invalid_buildings": report.invalid_buildings,
        "false_negatives": report.false_negatives_note,
    }


def report_to_csv(report: ValidationReport, fp) -> None:
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["x", "n_artifacts", "n_false_positive", "rate"])
    for e in report.per_level:
        writer.writerow(
            [repr(e["x"]), e["n_artifacts"], e["n_false_positive"],
             "" if e["rate"] is None else repr(e["rate"])]
        )
