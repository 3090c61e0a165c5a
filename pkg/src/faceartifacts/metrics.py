"""Compactness metrics and the face-artifact index.

Five dimensionless shape ratios in (0, 1], each comparing a polygon to
an ideally compact reference shape, plus the index ln(compactness *
area) that separates artifact faces from urban blocks.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from faceartifacts.errors import DegenerateGeometry, NonPositiveInput
from faceartifacts.geometry import ops
from faceartifacts.geometry.types import PolygonGeom
from faceartifacts.polygonizer import FacePolygon

log = logging.getLogger(__name__)

METRICS = ("cc", "ipq", "iaq", "rr", "dr")

# counts ratios numerically above 1 that were clamped back (float noise
# on near-circular polygons)
_clamp_count = 0


def clamp_count() -> int:
    return _clamp_count


def _clamp(value: float) -> float:
    global _clamp_count
    if value > 1.0:
        _clamp_count += 1
        log.debug("compactness %.17g > 1 clamped", value)
        return 1.0
    return value


def circular_compactness(p: PolygonGeom) -> float:
    """Area over the area of the minimum bounding circle."""
    a = ops.area(p)
    r = ops.min_bounding_circle(p).radius
    return _clamp(a / (math.pi * r * r))


def isoperimetric_quotient(p: PolygonGeom) -> float:
    """4*pi*area / perimeter^2."""
    a = ops.area(p)
    per = ops.perimeter(p)
    return _clamp(4.0 * math.pi * a / (per * per))


def isoareal_quotient(p: PolygonGeom) -> float:
    """Perimeter of the equi-areal circle over the perimeter."""
    a = ops.area(p)
    per = ops.perimeter(p)
    return _clamp(2.0 * math.pi * math.sqrt(a / math.pi) / per)


def radii_ratio(p: PolygonGeom) -> float:
    """Radius of the equi-areal circle over the bounding-circle radius."""
    a = ops.area(p)
    r = ops.min_bounding_circle(p).radius
    return _clamp(math.sqrt(a / math.pi) / r)


def diameter_ratio(p: PolygonGeom) -> float:
    """Width over length of the minimum rotated rectangle."""
    rect = ops.min_rotated_rect(p)
    return _clamp(rect.width / rect.length)


_METRIC_FUNCS = {
    "cc": circular_compactness,
    "ipq": isoperimetric_quotient,
    "iaq": isoareal_quotient,
    "rr": radii_ratio,
    "dr": diameter_ratio,
}


@dataclass(frozen=True)
class CompactnessVector:
    cc: float
    ipq: float
    iaq: float
    rr: float
    dr: float

    def __getitem__(self, metric: str) -> float:
        return getattr(self, metric)

    def as_dict(self) -> Dict[str, float]:
        return {m: getattr(self, m) for m in METRICS}


@dataclass(frozen=True)
class FaceRecord:
    """A face with its area, compactness vector, and artifact indices."""

    face: FacePolygon
    area: float
    compactness: CompactnessVector
    fai: Dict[str, float]


def face_artifact_index(compactness: float, area: float) -> float:
    """ln(compactness * area); low for slivers and small compact faces."""
    if compactness <= 0.0 or area <= 0.0:
        raise NonPositiveInput(
            f"face_artifact_index needs positive inputs, got "
            f"compactness={compactness!r} area={area!r}"
        )
    return math.log(compactness * area)


def compactness_vector(p: PolygonGeom) -> CompactnessVector:
    return CompactnessVector(**{m: _METRIC_FUNCS[m](p) for m in METRICS})


def make_record(face: FacePolygon) -> FaceRecord:
    a = ops.area(face.geometry)
    vec = compactness_vector(face.geometry)
    fai = {m: face_artifact_index(vec[m], a) for m in METRICS}
    return FaceRecord(face=face, area=a, compactness=vec, fai=fai)


def enrich(
    faces: Sequence[FacePolygon], skipped: Optional[list] = None
) -> List[FaceRecord]:
    """FaceRecord for every face; degenerate faces are skipped, never fatal.

    ``skipped``, when given, collects (face id, reason) pairs.
    """
    records: List[FaceRecord] = []
    for face in faces:
        try:
            records.append(make_record(face))
        except (DegenerateGeometry, NonPositiveInput) as exc:
            log.warning("face %d skipped: %s", face.id, exc)
            if skipped is not None:
                skipped.append((face.id, str(exc)))
    return records
