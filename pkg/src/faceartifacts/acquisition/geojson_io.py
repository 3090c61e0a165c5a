"""GeoJSON (RFC 7946) readers and writers.

Line features become an EdgeSet, polygon features become building
polygons; a file mixing the two is ambiguous and rejected.  Outputs in
projected meters carry a ``crs_note`` member so downstream consumers do
not mistake them for lon/lat.
"""

import json
import logging
import warnings
from typing import List, Optional, Tuple, Union

from faceartifacts.errors import (
    DegenerateGeometry,
    GeographicCoordinatesWarning,
    InvalidGeometry,
    ParseError,
)
from faceartifacts.geometry.types import PolygonGeom
from faceartifacts.polygonizer import EdgeSet, FacePolygon, SHARED_ENDPOINTS

log = logging.getLogger(__name__)

CRS_NOTE = "planar x/y meters in the caller's projection, not lon/lat"


def _load(path_or_fp) -> dict:
    if hasattr(path_or_fp, "read"):
        text = path_or_fp.read()
    else:
        with open(path_or_fp, "r", encoding="utf-8") as fp:
            text = fp.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"not valid JSON: {exc.msg}", context=f"byte offset {exc.pos}"
        ) from None
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ParseError("expected a GeoJSON FeatureCollection")
    return doc


def _feature_geometries(doc):
    for i, feature in enumerate(doc.get("features", [])):
        if not isinstance(feature, dict) or feature.get("type") != "Feature":
            raise ParseError("not a Feature", context=f"feature {i}")
        geom = feature.get("geometry")
        if not isinstance(geom, dict):
            raise ParseError("missing geometry", context=f"feature {i}")
        yield i, geom, feature.get("properties") or {}


def read_geojson(
    path_or_fp, noding_mode: str = SHARED_ENDPOINTS
) -> Union[EdgeSet, List[PolygonGeom]]:
    """Read network linework or building polygons.

    LineString/MultiLineString collections produce an EdgeSet;
    Polygon/MultiPolygon collections produce a list of PolygonGeom.
    Mixed or unsupported geometry types raise ParseError naming the
    offending feature.
    """
    doc = _load(path_or_fp)
    lines: List[List[Tuple[float, float]]] = []
    polygons: List[PolygonGeom] = []
    skipped = 0
    for i, geom, _ in _feature_geometries(doc):
        gtype = geom.get("type")
        coords = geom.get("coordinates")
        if gtype == "LineString":
            lines.append([(float(x), float(y)) for x, y in coords])
        elif gtype == "MultiLineString":
            lines.extend(
                [(float(x), float(y)) for x, y in part] for part in coords
            )
        elif gtype == "Polygon":
            poly = _polygon_from_coords(coords, i)
            if poly is None:
                skipped += 1
            else:
                polygons.append(poly)
        elif gtype == "MultiPolygon":
            for part in coords:
                poly = _polygon_from_coords(part, i)
                if poly is None:
                    skipped += 1
                else:
                    polygons.append(poly)
        else:
            raise ParseError(
                f"unsupported geometry type {gtype!r}", context=f"feature {i}"
            )
        if lines and polygons:
            raise ParseError(
                "collection mixes line and polygon features", context=f"feature {i}"
            )
    if skipped:
        log.warning("%d degenerate polygon(s) skipped on read", skipped)
    if lines:
        return EdgeSet(edges=lines, noding_mode=noding_mode)
    _warn_if_geographic(polygons)
    return polygons


def _warn_if_geographic(polygons) -> None:
    if not polygons:
        return
    boxes = [p.bbox() for p in polygons]
    if (min(b[0] for b in boxes) >= -180.0 and max(b[2] for b in boxes) <= 180.0
            and min(b[1] for b in boxes) >= -90.0 and max(b[3] for b in boxes) <= 90.0):
        warnings.warn(
            "coordinates look geographic (degrees?); all measures assume a "
            "projected plane in meters",
            GeographicCoordinatesWarning,
            stacklevel=3,
        )


def _polygon_from_coords(coords, feature_idx) -> Optional[PolygonGeom]:
    if not coords:
        raise ParseError("polygon without rings", context=f"feature {feature_idx}")
    try:
        return PolygonGeom(coords[0], holes=coords[1:])
    except (InvalidGeometry, DegenerateGeometry) as exc:
        log.warning("feature %d: %s", feature_idx, exc)
        return None


def read_faces(path_or_fp) -> List[FacePolygon]:
    """Read a faces file back into FacePolygon values.

    Uses the ``face_id`` property when present, otherwise numbers the
    features in file order.
    """
    doc = _load(path_or_fp)
    faces: List[FacePolygon] = []
    for i, geom, props in _feature_geometries(doc):
        if geom.get("type") != "Polygon":
            raise ParseError(
                f"faces file must contain Polygons, found {geom.get('type')!r}",
                context=f"feature {i}",
            )
        poly = _polygon_from_coords(geom.get("coordinates"), i)
        if poly is None:
            continue
        faces.append(FacePolygon(id=int(props.get("face_id", i)), geometry=poly))
    return faces


def read_labeled_faces(path_or_fp) -> Tuple[List[FacePolygon], List[str]]:
    """Faces plus their ``label`` property (classify output round-trip)."""
    doc = _load(path_or_fp)
    faces: List[FacePolygon] = []
    labels: List[str] = []
    for i, geom, props in _feature_geometries(doc):
        if geom.get("type") != "Polygon":
            raise ParseError(
                f"labeled faces must be Polygons, found {geom.get('type')!r}",
                context=f"feature {i}",
            )
        poly = _polygon_from_coords(geom.get("coordinates"), i)
        if poly is None:
            continue
        faces.append(FacePolygon(id=int(props.get("face_id", i)), geometry=poly))
        labels.append(str(props.get("label", "unlabeled")))
    return faces, labels


def _ring_coords(ring) -> List[List[float]]:
    return [[float(x), float(y)] for x, y in zip(ring.xs.tolist(), ring.ys.tolist())]


def edge_set_to_geojson(es: EdgeSet, extra: Optional[dict] = None) -> dict:
    features = [
        {
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [[x, y] for x, y in line],
            },
            "properties": {"edge_id": i},
        }
        for i, line in enumerate(es.edges)
    ]
    doc = {
        "type": "FeatureCollection",
        "crs_note": CRS_NOTE,
        "noding_mode": es.noding_mode,
        "features": features,
    }
    if extra:
        doc.update(extra)
    return doc


def faces_to_geojson(faces) -> dict:
    features = []
    for f in faces:
        coords = [_ring_coords(f.geometry.exterior)] + [
            _ring_coords(h) for h in f.geometry.holes
        ]
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": coords},
                "properties": {
                    "face_id": f.id,
                    "area_m2": abs(f.ring.signed_area),
                },
            }
        )
    return {
        "type": "FeatureCollection",
        "crs_note": CRS_NOTE,
        "features": features,
    }


def write_json(doc: dict, path_or_fp) -> None:
    """Deterministic JSON output: sorted keys, two-space indent."""
    if hasattr(path_or_fp, "write"):
        json.dump(doc, path_or_fp, indent=2, sort_keys=True)
        path_or_fp.write("\n")
    else:
        with open(path_or_fp, "w", encoding="utf-8") as fp:
            json.dump(doc, fp, indent=2, sort_keys=True)
            fp.write("\n")
