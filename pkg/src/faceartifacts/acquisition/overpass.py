"""Overpass API client and OSM way/node graph handling.

Queries select ways carrying a highway tag in the configured class set.
``highway=service`` ways are part of the default download (matching how
such data is usually pulled) but are dropped when the graph becomes an
edge set, so polygonization never sees service roads.
"""

import json
import logging
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from faceartifacts.acquisition.projection import TransverseMercator
from faceartifacts.errors import NetworkError, ParseError
from faceartifacts.polygonizer import SHARED_ENDPOINTS, EdgeSet

log = logging.getLogger(__name__)

DEFAULT_ENDPOINT = "https://overpass-api.de/api/interpreter"
ENDPOINT_ENV_VAR = "FACEARTIFACTS_OVERPASS_URL"

DEFAULT_HIGHWAY_CLASSES = (
    "living_street",
    "motorway",
    "motorway_link",
    "pedestrian",
    "primary",
    "primary_link",
    "residential",
    "secondary",
    "secondary_link",
    "service",
    "tertiary",
    "tertiary_link",
    "trunk",
    "trunk_link",
    "unclassified",
)

MAX_RETRIES = 3
_RETRY_BASE_DELAY_S = 1.0


@dataclass(frozen=True)
class NetworkQuery:
    """What to ask an Overpass endpoint for."""

    bbox: Tuple[float, float, float, float]  # min_lon, min_lat, max_lon, max_lat
    highway_classes: Tuple[str, ...] = DEFAULT_HIGHWAY_CLASSES
    timeout_s: float = 180.0
    endpoint: str = DEFAULT_ENDPOINT

    def __post_init__(self):
        min_lon, min_lat, max_lon, max_lat = self.bbox
        if not (min_lon < max_lon and min_lat < max_lat):
            raise ValueError(f"bbox must have positive span, got {self.bbox}")
        if not (-180.0 <= min_lon <= 180.0 and -180.0 <= max_lon <= 180.0):
            raise ValueError(f"longitude out of range in {self.bbox}")
        if not (-90.0 <= min_lat <= 90.0 and -90.0 <= max_lat <= 90.0):
            raise ValueError(f"latitude out of range in {self.bbox}")
        if not self.highway_classes:
            raise ValueError("highway_classes must not be empty")
        # canonical order keeps the generated query deterministic
        object.__setattr__(
            self, "highway_classes", tuple(sorted(set(self.highway_classes)))
        )
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")


@dataclass
class RawOsmGraph:
    """Decoded Overpass payload: node coordinates plus tagged ways."""

    nodes: Dict[int, Tuple[float, float]] = field(default_factory=dict)  # lon, lat
    ways: Dict[int, Tuple[List[int], Dict[str, str]]] = field(default_factory=dict)


def build_overpass_query(q: NetworkQuery) -> str:
    """Overpass QL text for the query; identical inputs, identical text."""
    min_lon, min_lat, max_lon, max_lat = q.bbox
    regex = "|".join(q.highway_classes)
    bbox = f"{min_lat},{min_lon},{max_lat},{max_lon}"
    return (
        f"[out:json][timeout:{int(q.timeout_s)}];\n"
        f'way["highway"~"{regex}"]({bbox});\n'
        "(._;>;);\n"
        "out body;\n"
    )


def parse_overpass_json(payload: bytes) -> RawOsmGraph:
    """Decode an Overpass JSON payload into a RawOsmGraph."""
    try:
        doc = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed Overpass JSON: {exc.msg}", context=f"byte offset {exc.pos}"
        ) from None
    if not isinstance(doc, dict) or "elements" not in doc:
        raise ParseError("Overpass payload has no 'elements' array")
    graph = RawOsmGraph()
    for el in doc["elements"]:
        kind = el.get("type")
        if kind == "node":
            graph.nodes[int(el["id"])] = (float(el["lon"]), float(el["lat"]))
        elif kind == "way":
            refs = [int(r) for r in el.get("nodes", [])]
            if len(refs) < 2:
                log.warning("way %s has fewer than 2 nodes, skipped", el.get("id"))
                continue
            graph.ways[int(el["id"])] = (refs, dict(el.get("tags", {})))
    return graph


def fetch(
    q: NetworkQuery,
    opener: Optional[Callable] = None,
    sleep: Callable[[float], None] = time.sleep,
) -> RawOsmGraph:
    """POST the query and decode the response.

    HTTP failures, timeouts, and rate limits are retried with
    exponential backoff up to MAX_RETRIES times, then surfaced as
    NetworkError.  Malformed payloads raise ParseError immediately.
    """
    opener = opener or urllib.request.urlopen
    query = build_overpass_query(q)
    data = urllib.parse.urlencode({"data": query}).encode("utf-8")
    last_error: Optional[Exception] = None
    for attempt in range(MAX_RETRIES + 1):
        if attempt:
            delay = _RETRY_BASE_DELAY_S * 2 ** (attempt - 1)
            log.info("retrying Overpass request in %.1fs (attempt %d)", delay, attempt)
            sleep(delay)
        try:
            req = urllib.request.Request(
                q.endpoint, data=data,
                headers={"Content-Type": "application/x-www-form-urlencoded"},
            )
            with opener(req, timeout=q.timeout_s) as resp:
                payload = resp.read()
            return parse_overpass_json(payload)
        except (urllib.error.HTTPError, urllib.error.URLError, TimeoutError, OSError) as exc:
            last_error = exc
            log.warning("Overpass request failed: %s", exc)
    raise NetworkError(
        f"Overpass request failed after {MAX_RETRIES + 1} attempts: {last_error}"
    )


def to_edge_set(
    graph: RawOsmGraph,
    projection: TransverseMercator,
    drop_service: bool = True,
) -> EdgeSet:
    """Project ways to meters and assemble the polygonizer input.

    Service ways are dropped here, duplicate ways are deduplicated, and
    ways with unresolvable node references are skipped with a warning.
    Mode is shared-endpoints: OSM crossings without a common node are
    grade-separated and must not intersect.
    """
    polylines: List[List[Tuple[float, float]]] = []
    seen = set()
    for way_id, (refs, tags) in graph.ways.items():
        if drop_service and tags.get("highway") == "service":
            continue
        key = tuple(refs)
        key = min(key, key[::-1])
        if key in seen:
            continue
        seen.add(key)
        try:
            lonlat = [graph.nodes[r] for r in refs]
        except KeyError as exc:
            log.warning("way %d skipped: missing node %s", way_id, exc)
            continue
        polylines.append([projection.forward(lon, lat) for lon, lat in lonlat])
    return EdgeSet(edges=polylines, noding_mode=SHARED_ENDPOINTS)
