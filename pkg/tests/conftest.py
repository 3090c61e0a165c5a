"""Shared fixtures: random polygon generators and the synthetic city."""

import math

import numpy as np
import pytest

from faceartifacts.geometry.types import PolygonGeom


def pytest_configure(config):
    # unit fixtures use tiny coordinates on purpose; the geographic-looking
    # warning is asserted explicitly where it matters
    config.addinivalue_line(
        "filterwarnings",
        "ignore::faceartifacts.errors.GeographicCoordinatesWarning",
    )


def random_convex_polygon(rng, n_points=12, scale=100.0) -> PolygonGeom:
    """Convex polygon: hull of gaussian points (guaranteed >= 3 vertices)."""
    from faceartifacts.geometry import convex_hull

    while True:
        pts = rng.normal(size=(max(n_points, 4), 2)) * scale
        try:
            ring = convex_hull([tuple(p) for p in pts])
        except Exception:
            continue
        return PolygonGeom(ring)


def random_star_polygon(rng, n_vertices=14, scale=100.0) -> PolygonGeom:
    """Simple (star-shaped) polygon: sorted angles, jittered radii."""
    n = int(n_vertices)
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
    # forbid near-duplicate angles that would make needle edges
    while np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))) < 1e-3:
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
    radii = rng.uniform(0.2, 1.0, size=n) * scale
    cx, cy = rng.uniform(-10 * scale, 10 * scale, size=2)
    pts = [
        (cx + r * math.cos(a), cy + r * math.sin(a))
        for a, r in zip(angles.tolist(), radii.tolist())
    ]
    return PolygonGeom(pts)


def rigid_motion(rng):
    """Random rotation + translation as an (R, t) pair."""
    theta = rng.uniform(0.0, 2.0 * math.pi)
    c, s = math.cos(theta), math.sin(theta)
    t = rng.uniform(-1e4, 1e4, size=2)
    return (c, s), (float(t[0]), float(t[1]))


def transform_polygon(p: PolygonGeom, rot, trans, scale=1.0) -> PolygonGeom:
    c, s = rot
    tx, ty = trans

    def tx_ring(ring):
        xs = ring.xs * scale
        ys = ring.ys * scale
        return list(zip((c * xs - s * ys + tx).tolist(), (s * xs + c * ys + ty).tolist()))

    return PolygonGeom(tx_ring(p.exterior), holes=[tx_ring(h) for h in p.holes])


@pytest.fixture(scope="session")
def city():
    import synthcity

    return synthcity.build_city()


@pytest.fixture(scope="session")
def city_faces(city):
    from faceartifacts.polygonizer import node_edges, polygonize

    return polygonize(node_edges(city["edge_set"]))
