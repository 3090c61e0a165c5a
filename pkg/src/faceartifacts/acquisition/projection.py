"""Transverse-Mercator projection (WGS84) without a CRS database.

Geometry downstream needs meter units; callers supply the projection
parameters (or let ``utm_zone_for`` pick a UTM zone from a point of
interest).  Forward/inverse follow the Krueger series in the
exponential-of-conformal-latitude form, good to sub-millimeter within a
zone.
"""

import math
from dataclasses import dataclass

# WGS84
_A = 6378137.0
_F = 1.0 / 298.257223563
_E2 = _F * (2.0 - _F)
_E = math.sqrt(_E2)
_N = _F / (2.0 - _F)

_A_BAR = _A / (1.0 + _N) * (1.0 + _N ** 2 / 4.0 + _N ** 4 / 64.0 + _N ** 6 / 256.0)

_ALPHA = (
    _N / 2.0 - 2.0 * _N ** 2 / 3.0 + 5.0 * _N ** 3 / 16.0 + 41.0 * _N ** 4 / 180.0,
    13.0 * _N ** 2 / 48.0 - 3.0 * _N ** 3 / 5.0 + 557.0 * _N ** 4 / 1440.0,
    61.0 * _N ** 3 / 240.0 - 103.0 * _N ** 4 / 140.0,
    49561.0 * _N ** 4 / 161280.0,
)
_BETA = (
    _N / 2.0 - 2.0 * _N ** 2 / 3.0 + 37.0 * _N ** 3 / 96.0 - _N ** 4 / 360.0,
    _N ** 2 / 48.0 + _N ** 3 / 15.0 - 437.0 * _N ** 4 / 1440.0,
    17.0 * _N ** 3 / 480.0 - 37.0 * _N ** 4 / 840.0,
    4397.0 * _N ** 4 / 161280.0,
)


@dataclass(frozen=True)
class TransverseMercator:
    """Projection parameters: central meridian, scale, false offsets."""

    central_meridian_deg: float
    scale: float = 0.9996
    false_easting: float = 500000.0
    false_northing: float = 0.0

    def forward(self, lon_deg: float, lat_deg: float):
        """(lon, lat) degrees -> (x, y) meters."""
        lam = math.radians(lon_deg - self.central_meridian_deg)
        phi = math.radians(lat_deg)
        s = math.sin(phi)
        t = math.sinh(math.atanh(s) - _E * math.atanh(_E * s))
        xi = math.atan2(t, math.cos(lam))
        eta = math.asinh(math.sin(lam) / math.hypot(t, math.cos(lam)))
        x = eta
        y = xi
        for j, a in enumerate(_ALPHA, start=1):
            x += a * math.cos(2 * j * xi) * math.sinh(2 * j * eta)
            y += a * math.sin(2 * j * xi) * math.cosh(2 * j * eta)
        k = self.scale * _A_BAR
        return (k * x + self.false_easting, k * y + self.false_northing)

    def inverse(self, x: float, y: float):
        """(x, y) meters -> (lon, lat) degrees."""
        k = self.scale * _A_BAR
        eta = (x - self.false_easting) / k
        xi = (y - self.false_northing) / k
        eta_p = eta
        xi_p = xi
        for j, b in enumerate(_BETA, start=1):
            eta_p -= b * math.cos(2 * j * xi) * math.sinh(2 * j * eta)
            xi_p -= b * math.sin(2 * j * xi) * math.cosh(2 * j * eta)
        she = math.sinh(eta_p)
        cxi = math.cos(xi_p)
        lam = math.atan2(she, cxi)
        tau_p = math.sin(xi_p) / math.hypot(she, cxi)
        tau = _invert_tau(tau_p)
        return (
            self.central_meridian_deg + math.degrees(lam),
            math.degrees(math.atan(tau)),
        )


def _sigma(tau: float) -> float:
    return math.sinh(_E * math.atanh(_E * tau / math.hypot(1.0, tau)))


def _invert_tau(tau_p: float) -> float:
    # Newton iteration for tau = tan(phi) from the conformal tangent
    tau = tau_p / (1.0 - _E2)
    for _ in range(8):
        sig = _sigma(tau)
        f = tau * math.hypot(1.0, sig) - sig * math.hypot(1.0, tau) - tau_p
        df = (
            (math.hypot(1.0, sig) * math.hypot(1.0, tau) - sig * tau)
            * (1.0 - _E2)
            * math.hypot(1.0, tau)
            / (1.0 + (1.0 - _E2) * tau * tau)
        )
        step = f / df
        tau -= step
        if abs(step) < 1e-15 * max(1.0, abs(tau)):
            break
    return tau


def utm_zone_for(lon_deg: float, lat_deg: float) -> TransverseMercator:
    """UTM zone parameters covering the given point."""
    zone = int(math.floor((lon_deg + 180.0) / 6.0)) + 1
    zone = min(max(zone, 1), 60)
    return TransverseMercator(
        central_meridian_deg=zone * 6.0 - 183.0,
        scale=0.9996,
        false_easting=500000.0,
        false_northing=0.0 if lat_deg >= 0.0 else 10000000.0,
    )


def describe(tm: TransverseMercator) -> dict:
    return {
        "projection": "transverse-mercator",
        "datum": "WGS84",
        "central_meridian_deg": tm.central_meridian_deg,
        "scale": tm.scale,
        "false_easting": tm.false_easting,
        "false_northing": tm.false_northing,
    }
