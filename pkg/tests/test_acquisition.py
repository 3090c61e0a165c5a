import io
import json
import math
import urllib.error

import pytest

from faceartifacts.acquisition import (
    DEFAULT_HIGHWAY_CLASSES,
    NetworkQuery,
    TransverseMercator,
    build_overpass_query,
    clip_edge_set,
    edge_set_to_geojson,
    faces_to_geojson,
    fetch,
    parse_overpass_json,
    read_faces,
    read_geojson,
    read_labeled_faces,
    to_edge_set,
    utm_zone_for,
    write_json,
)
from faceartifacts.errors import NetworkError, ParseError
from faceartifacts.geometry import PolygonGeom, area
from faceartifacts.polygonizer import EdgeSet, polygonize

BBOX = (12.40, 41.80, 12.60, 41.95)

CANNED = {
    "elements": [
        {"type": "node", "id": 1, "lon": 12.50, "lat": 41.90},
        {"type": "node", "id": 2, "lon": 12.51, "lat": 41.90},
        {"type": "node", "id": 3, "lon": 12.51, "lat": 41.91},
        {"type": "node", "id": 4, "lon": 12.52, "lat": 41.90},
        {"type": "node", "id": 5, "lon": 12.52, "lat": 41.91},
        {"type": "node", "id": 6, "lon": 12.53, "lat": 41.92},
        {
            "type": "way", "id": 100, "nodes": [1, 2, 3],
            "tags": {"highway": "residential"},
        },
        {
            "type": "way", "id": 101, "nodes": [4, 5, 6],
            "tags": {"highway": "primary"},
        },
    ]
}


class _FakeResponse(io.BytesIO):
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def opener_returning(payloads):
    """Fake urlopen cycling through payloads (bytes) or exceptions."""
    calls = []

    def _open(request, timeout=None):
        idx = min(len(calls), len(payloads) - 1)
        calls.append(request)
        item = payloads[idx]
        if isinstance(item, Exception):
            raise item
        return _FakeResponse(item)

    _open.calls = calls
    return _open


class TestQueryBuilding:
    def test_default_filter_text(self):
        q = NetworkQuery(bbox=BBOX)
        text = build_overpass_query(q)
        assert '["highway"~"living_street|motorway|motorway_link|pedestrian|'
        assert "living_street|motorway|motorway_link|pedestrian|primary|" in text
        assert "service|tertiary|tertiary_link|trunk|trunk_link|unclassified" in text
        assert "(41.8,12.4,41.95,12.6)" in text
        assert "[out:json]" in text

    def test_single_class(self):
        q = NetworkQuery(bbox=BBOX, highway_classes=("primary",))
        assert '["highway"~"primary"]' in build_overpass_query(q)

    def test_deterministic_for_identical_inputs(self):
        a = build_overpass_query(NetworkQuery(bbox=BBOX))
        b = build_overpass_query(NetworkQuery(bbox=BBOX))
        assert a == b

    def test_class_order_canonicalized(self):
        a = NetworkQuery(bbox=BBOX, highway_classes=("primary", "motorway"))
        b = NetworkQuery(bbox=BBOX, highway_classes=("motorway", "primary"))
        assert build_overpass_query(a) == build_overpass_query(b)

    def test_empty_bbox_rejected(self):
        with pytest.raises(ValueError):
            NetworkQuery(bbox=(12.5, 41.8, 12.5, 41.9))

    def test_empty_classes_rejected(self):
        with pytest.raises(ValueError):
            NetworkQuery(bbox=BBOX, highway_classes=())


class TestFetch:
    def test_canned_fixture(self):
        opener = opener_returning([json.dumps(CANNED).encode()])
        graph = fetch(NetworkQuery(bbox=BBOX), opener=opener, sleep=lambda s: None)
        assert len(graph.ways) == 2
        assert len(graph.nodes) == 6
        assert graph.ways[100][1]["highway"] == "residential"

    def test_truncated_body_is_parse_error(self):
        payload = json.dumps(CANNED).encode()[:40]
        opener = opener_returning([payload])
        with pytest.raises(ParseError) as exc:
            fetch(NetworkQuery(bbox=BBOX), opener=opener, sleep=lambda s: None)
        assert "byte offset" in str(exc.value)

    def test_429_retried_then_succeeds(self):
        err = urllib.error.HTTPError("url", 429, "Too Many Requests", {}, None)
        opener = opener_returning([err, json.dumps(CANNED).encode()])
        sleeps = []
        graph = fetch(NetworkQuery(bbox=BBOX), opener=opener, sleep=sleeps.append)
        assert len(graph.ways) == 2
        assert len(opener.calls) == 2
        assert sleeps == [1.0]

    def test_persistent_failure_surfaces_network_error(self):
        err = urllib.error.URLError("connection refused")
        opener = opener_returning([err])
        sleeps = []
        with pytest.raises(NetworkError):
            fetch(NetworkQuery(bbox=BBOX), opener=opener, sleep=sleeps.append)
        assert sleeps == [1.0, 2.0, 4.0]  # exponential backoff, max 3 retries

    def test_parse_is_idempotent(self):
        payload = json.dumps(CANNED).encode()
        a = parse_overpass_json(payload)
        b = parse_overpass_json(payload)
        assert a.nodes == b.nodes and a.ways == b.ways


class TestToEdgeSet:
    def _graph(self, extra_ways=()):
        g = parse_overpass_json(json.dumps(CANNED).encode())
        for wid, refs, tags in extra_ways:
            g.ways[wid] = (refs, tags)
        return g

    def test_projection_and_shape(self):
        tm = utm_zone_for(12.5, 41.9)
        es = to_edge_set(self._graph(), tm)
        assert len(es.edges) == 2
        assert es.noding_mode == "shared-endpoints"
        # roughly 830 m for 0.01 deg of longitude at 41.9N
        (x1, y1), (x2, y2) = es.edges[0][0], es.edges[0][1]
        assert math.hypot(x2 - x1, y2 - y1) == pytest.approx(831, abs=5)

    def test_service_ways_dropped(self):
        g = self._graph([(102, [1, 4], {"highway": "service"})])
        es = to_edge_set(g, utm_zone_for(12.5, 41.9))
        assert len(es.edges) == 2

    def test_only_service_dropped(self):
        g = self._graph([(102, [1, 4], {"highway": "service"}),
                         (103, [2, 5], {"highway": "track"})])
        es = to_edge_set(g, utm_zone_for(12.5, 41.9))
        assert len(es.edges) == 3

    def test_duplicate_ways_deduplicated(self):
        g = self._graph([(200, [3, 2, 1], {"highway": "primary"})])  # reversed dup
        es = to_edge_set(g, utm_zone_for(12.5, 41.9))
        assert len(es.edges) == 2

    def test_missing_node_skips_way(self):
        g = self._graph([(300, [1, 999], {"highway": "primary"})])
        es = to_edge_set(g, utm_zone_for(12.5, 41.9))
        assert len(es.edges) == 2

    def test_closed_way_stays_closed(self):
        g = self._graph([(400, [1, 2, 3, 1], {"highway": "primary"})])
        es = to_edge_set(g, utm_zone_for(12.5, 41.9))
        loop = es.edges[-1]
        assert loop[0] == loop[-1]


class TestProjection:
    def test_central_meridian_maps_to_false_easting(self):
        tm = TransverseMercator(central_meridian_deg=15.0)
        x, y = tm.forward(15.0, 0.0)
        assert x == pytest.approx(500000.0, abs=1e-6)
        assert y == pytest.approx(0.0, abs=1e-6)

    def test_round_trip(self):
        tm = utm_zone_for(12.5, 41.9)
        for lon, lat in [(12.4, 41.8), (12.6, 41.95), (11.9, 42.3)]:
            x, y = tm.forward(lon, lat)
            lon2, lat2 = tm.inverse(x, y)
            assert (lon2, lat2) == pytest.approx((lon, lat), abs=1e-9)

    def test_meridian_arc_against_quadrature(self):
        from scipy.integrate import quad

        a, f = 6378137.0, 1 / 298.257223563
        e2 = f * (2 - f)
        tm = TransverseMercator(central_meridian_deg=9.0)
        for lat in (12.0, 47.0, 71.0):
            _, y = tm.forward(9.0, lat)
            arc, _ = quad(
                lambda t: a * (1 - e2) / (1 - e2 * math.sin(t) ** 2) ** 1.5,
                0.0,
                math.radians(lat),
            )
            assert y == pytest.approx(0.9996 * arc, abs=1e-4)

    def test_utm_zone_selection(self):
        tm = utm_zone_for(12.5, 41.9)  # zone 33N
        assert tm.central_meridian_deg == 15.0
        assert tm.false_northing == 0.0
        tm_s = utm_zone_for(151.2, -33.9)  # zone 56S
        assert tm_s.central_meridian_deg == 153.0
        assert tm_s.false_northing == 10000000.0


class TestGeoJson:
    def test_linestrings_become_edge_set(self):
        doc = {
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "properties": {},
                 "geometry": {"type": "LineString",
                              "coordinates": [[0, 0], [100, 0]]}},
                {"type": "Feature", "properties": {},
                 "geometry": {"type": "MultiLineString",
                              "coordinates": [[[0, 0], [0, 100]],
                                               [[100, 0], [100, 100]]]}},
            ],
        }
        es = read_geojson(io.StringIO(json.dumps(doc)))
        assert isinstance(es, EdgeSet)
        assert len(es.edges) == 3

    def test_polygons_become_buildings(self):
        doc = {
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "properties": {},
                 "geometry": {"type": "Polygon",
                              "coordinates": [[[0, 0], [10, 0], [10, 10], [0, 10], [0, 0]]]}},
                {"type": "Feature", "properties": {},
                 "geometry": {"type": "MultiPolygon",
                              "coordinates": [[[[20, 20], [30, 20], [30, 30], [20, 30], [20, 20]]]]}},
            ],
        }
        polys = read_geojson(io.StringIO(json.dumps(doc)))
        assert len(polys) == 2
        assert all(isinstance(p, PolygonGeom) for p in polys)

    def test_point_feature_rejected_with_index(self):
        doc = {
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "properties": {},
                 "geometry": {"type": "Point", "coordinates": [0, 0]}},
            ],
        }
        with pytest.raises(ParseError) as exc:
            read_geojson(io.StringIO(json.dumps(doc)))
        assert "feature 0" in str(exc.value)

    def test_mixed_collection_rejected(self):
        doc = {
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "properties": {},
                 "geometry": {"type": "LineString", "coordinates": [[0, 0], [1, 1]]}},
                {"type": "Feature", "properties": {},
                 "geometry": {"type": "Polygon",
                              "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]]}},
            ],
        }
        with pytest.raises(ParseError):
            read_geojson(io.StringIO(json.dumps(doc)))

    def test_invalid_json_offset(self):
        with pytest.raises(ParseError) as exc:
            read_geojson(io.StringIO('{"type": "FeatureCollection", '))
        assert "byte offset" in str(exc.value)

    def test_geographic_looking_polygons_warn(self):
        from faceartifacts.errors import GeographicCoordinatesWarning

        doc = {
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "properties": {},
                 "geometry": {"type": "Polygon",
                              "coordinates": [[[12.5, 41.9], [12.6, 41.9],
                                                [12.6, 42.0], [12.5, 42.0],
                                                [12.5, 41.9]]]}},
            ],
        }
        with pytest.warns(GeographicCoordinatesWarning):
            read_geojson(io.StringIO(json.dumps(doc)))

    def test_faces_round_trip(self, tmp_path, city_faces):
        path = tmp_path / "faces.geojson"
        write_json(faces_to_geojson(city_faces[:10]), path)
        back = read_faces(path)
        assert [f.id for f in back] == [f.id for f in city_faces[:10]]
        for a, b in zip(back, city_faces[:10]):
            assert area(a.geometry) == pytest.approx(area(b.geometry), rel=1e-12)

    def test_edge_set_round_trip(self, tmp_path):
        es = EdgeSet([[(0.0, 0.0), (100.0, 0.0), (100.0, 100.0)]])
        path = tmp_path / "net.geojson"
        write_json(edge_set_to_geojson(es), path)
        back = read_geojson(path)
        assert isinstance(back, EdgeSet)
        assert back.edges == es.edges

    def test_labeled_faces_reader(self, tmp_path, city_faces):
        from faceartifacts.classify import classify, feature_collection
        from faceartifacts.metrics import enrich

        records = enrich(city_faces[:5])
        result = classify(records, threshold_override=6.0)
        path = tmp_path / "labeled.geojson"
        write_json(feature_collection(records, result), path)
        faces, labels = read_labeled_faces(path)
        assert len(faces) == 5
        assert set(labels) <= {"artifact", "block"}


class TestClipping:
    def test_clip_keeps_inside_linework(self):
        es = EdgeSet([[(-50.0, 5.0), (150.0, 5.0)], [(10.0, 10.0), (20.0, 10.0)]])
        clip = PolygonGeom([(0, 0), (100, 0), (100, 100), (0, 100)])
        out = clip_edge_set(es, clip)
        assert len(out.edges) == 2
        xs = [x for line in out.edges for x, _ in line]
        assert min(xs) >= -1e-9 and max(xs) <= 100 + 1e-9

    def test_clip_then_polygonize(self):
        # grid extends past the clip square; only inside faces survive
        lines = []
        for k in range(5):
            lines.append([(i * 10.0, k * 10.0) for i in range(5)])
            lines.append([(k * 10.0, i * 10.0) for i in range(5)])
        clip = PolygonGeom([(0, 0), (25, 0), (25, 25), (0, 25)])
        out = clip_edge_set(EdgeSet(lines), clip)
        faces = polygonize(out)
        assert len(faces) == 4  # the 2x2 fully-inside cells
