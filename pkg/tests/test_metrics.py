import math

import numpy as np
import pytest

import oracles
from conftest import random_star_polygon, rigid_motion, transform_polygon
from faceartifacts.errors import NonPositiveInput
from faceartifacts.geometry import PolygonGeom
from faceartifacts.metrics import (
    METRICS,
    circular_compactness,
    compactness_vector,
    diameter_ratio,
    enrich,
    face_artifact_index,
    isoareal_quotient,
    isoperimetric_quotient,
    make_record,
    radii_ratio,
)
from faceartifacts.polygonizer import FacePolygon

UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


class TestClosedForms:
    def test_unit_square(self):
        p = PolygonGeom(UNIT_SQUARE)
        assert circular_compactness(p) == pytest.approx(2 / math.pi, abs=1e-9)
        assert isoperimetric_quotient(p) == pytest.approx(math.pi / 4, abs=1e-9)
        assert isoareal_quotient(p) == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-9)
        assert radii_ratio(p) == pytest.approx(math.sqrt(2 / math.pi), abs=1e-9)
        assert diameter_ratio(p) == pytest.approx(1.0, abs=1e-9)

    def test_regular_256gon_near_one(self):
        p = PolygonGeom(oracles.regular_polygon(256))
        vec = compactness_vector(p)
        for m in METRICS:
            assert 0.999 <= vec[m] <= 1.0

    def test_long_rectangle(self):
        p = PolygonGeom([(0, 0), (10, 0), (10, 1), (0, 1)])
        assert isoperimetric_quotient(p) == pytest.approx(40 * math.pi / 484, abs=1e-9)
        assert diameter_ratio(p) == pytest.approx(0.1, abs=1e-9)


class TestAlgebraicIdentities:
    @pytest.mark.parametrize("seed", range(20))
    def test_iaq_is_sqrt_ipq_and_rr_is_sqrt_cc(self, seed):
        rng = np.random.default_rng(seed)
        p = random_star_polygon(rng)
        vec = compactness_vector(p)
        assert vec.iaq == pytest.approx(math.sqrt(vec.ipq), abs=1e-12)
        assert vec.rr == pytest.approx(math.sqrt(vec.cc), abs=1e-12)

    def test_all_metrics_in_unit_interval(self):
        rng = np.random.default_rng(77)
        for _ in range(30):
            vec = compactness_vector(random_star_polygon(rng))
            for m in METRICS:
                assert 0.0 < vec[m] <= 1.0

    def test_elongation_decreases_every_metric(self):
        # fixed area 10, growing aspect ratio
        prev = None
        for aspect in (1.0, 2.0, 5.0, 10.0, 25.0):
            w = math.sqrt(10.0 / aspect)
            p = PolygonGeom([(0, 0), (w * aspect, 0), (w * aspect, w), (0, w)])
            vec = compactness_vector(p)
            if prev is not None:
                for m in METRICS:
                    assert vec[m] < prev[m]
            prev = vec


class TestFaceArtifactIndex:
    def test_log_of_one(self):
        assert face_artifact_index(1.0, 1.0) == 0.0

    def test_unit_square_cc(self):
        assert face_artifact_index(2 / math.pi, 1.0) == pytest.approx(
            math.log(2 / math.pi), abs=1e-12
        )

    def test_scale_law(self):
        base = face_artifact_index(2 / math.pi, 1.0)
        scaled = face_artifact_index(2 / math.pi, 100.0)
        assert scaled - base == pytest.approx(2 * math.log(10), abs=1e-12)

    @pytest.mark.parametrize("c,a", [(0.0, 1.0), (-0.5, 1.0), (0.5, 0.0), (0.5, -2.0)])
    def test_non_positive_rejected(self, c, a):
        with pytest.raises(NonPositiveInput):
            face_artifact_index(c, a)


class TestInvariance:
    @pytest.mark.parametrize("seed", range(10))
    def test_rigid_motion(self, seed):
        rng = np.random.default_rng(300 + seed)
        p = random_star_polygon(rng)
        q = transform_polygon(p, *rigid_motion(rng))
        vp, vq = compactness_vector(p), compactness_vector(q)
        for m in ("cc", "ipq", "iaq", "rr"):
            assert vq[m] == pytest.approx(vp[m], rel=1e-9)
        assert vq.dr == pytest.approx(vp.dr, rel=1e-6)

    @pytest.mark.parametrize("scale", [0.1, 10.0])
    def test_scaling_leaves_metrics_and_shifts_fai(self, scale):
        rng = np.random.default_rng(55)
        p = random_star_polygon(rng)
        q = transform_polygon(p, (1.0, 0.0), (0.0, 0.0), scale=scale)
        rp = make_record(FacePolygon(0, p))
        rq = make_record(FacePolygon(0, q))
        for m in METRICS:
            assert rq.compactness[m] == pytest.approx(rp.compactness[m], rel=1e-9)
            assert rq.fai[m] - rp.fai[m] == pytest.approx(
                2 * math.log(scale), abs=1e-9
            )


class TestEnrich:
    def test_identical_squares(self):
        faces = [PolygonGeom(UNIT_SQUARE) for _ in range(4)]
        records = enrich([FacePolygon(i, f) for i, f in enumerate(faces)])
        assert len(records) == 4
        assert all(r.fai == records[0].fai for r in records)

    def test_empty(self):
        assert enrich([]) == []

    def test_record_fai_consistency(self):
        rng = np.random.default_rng(99)
        rec = make_record(FacePolygon(1, random_star_polygon(rng)))
        for m in METRICS:
            assert rec.fai[m] == pytest.approx(
                math.log(rec.compactness[m] * rec.area), abs=1e-12
            )

    def test_city_fixture_counts(self, city_faces):
        skipped = []
        records = enrich(city_faces, skipped=skipped)
        assert len(records) == len(city_faces) - len(skipped)
        assert not skipped
