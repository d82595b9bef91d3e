"""Geodetic coordinate types and the WGS-84 to ECEF conversion.

Track reports carry (latitude B, longitude lambda, altitude H) triples;
geofence assignment and distance checks work on Earth-Centered Earth-Fixed
(ECEF) vectors, so this module owns the ellipsoid parameters and the forward
conversion:

    x = (C + H) cos B cos lambda
    y = (C + H) cos B sin lambda
    z = (C (1 - e^2) + H) sin B

with C the prime vertical radius of curvature, C = E_q / sqrt(1 - e^2 sin^2 B).
The z term uses the standard geodesy form; some transcriptions misplace the
altitude inside the (1 - e^2) factor, which is wrong dimensionally.

Angles cross the API boundary in degrees (the native unit of track formats)
and are converted to radians internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Defining constants of the WGS-84 ellipsoid.
WGS84_EQUATORIAL_RADIUS_M = 6378137.0
WGS84_ECCENTRICITY_SQ = 0.00669437999014


@dataclass(frozen=True)
class EllipsoidParams:
    """Reference ellipsoid: equatorial radius E_q and eccentricity e."""

    equatorial_radius_m: float
    eccentricity: float

    def __post_init__(self):
        if self.equatorial_radius_m <= 0:
            raise ValueError("equatorial radius must be positive")
        if not 0.0 <= self.eccentricity < 1.0:
            raise ValueError("eccentricity must be in [0, 1)")

    @property
    def eccentricity_sq(self) -> float:
        return self.eccentricity * self.eccentricity


WGS84 = EllipsoidParams(WGS84_EQUATORIAL_RADIUS_M, math.sqrt(WGS84_ECCENTRICITY_SQ))


@dataclass(frozen=True)
class GeodeticPosition:
    """A WGS-84 style geodetic fix: latitude/longitude in degrees, height in meters."""

    latitude_deg: float
    longitude_deg: float
    altitude_m: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise ValueError(f"latitude {self.latitude_deg} out of [-90, 90]")
        if not -180.0 <= self.longitude_deg <= 180.0:
            raise ValueError(f"longitude {self.longitude_deg} out of [-180, 180]")


@dataclass(frozen=True)
class EcefPosition:
    """Earth-Centered Earth-Fixed Cartesian coordinates in meters."""

    x_m: float
    y_m: float
    z_m: float


def prime_vertical_radius(params: EllipsoidParams, latitude_deg: float) -> float:
    """Radius of curvature in the prime vertical, C = E_q / (1 - e^2 sin^2 B)^(1/2).

    The denominator is strictly positive for any eccentricity < 1, so this is
    total over valid parameters.
    """
    sin_b = math.sin(math.radians(latitude_deg))
    return params.equatorial_radius_m / math.sqrt(1.0 - params.eccentricity_sq * sin_b * sin_b)


def geodetic_to_ecef(params: EllipsoidParams, pos: GeodeticPosition) -> EcefPosition:
    """Convert a geodetic position to ECEF meters on the given ellipsoid."""
    b = math.radians(pos.latitude_deg)
    lam = math.radians(pos.longitude_deg)
    c = prime_vertical_radius(params, pos.latitude_deg)
    cos_b = math.cos(b)
    return EcefPosition(
        x_m=(c + pos.altitude_m) * cos_b * math.cos(lam),
        y_m=(c + pos.altitude_m) * cos_b * math.sin(lam),
        z_m=(c * (1.0 - params.eccentricity_sq) + pos.altitude_m) * math.sin(b),
    )


def surface_distance(a: GeodeticPosition, b: GeodeticPosition) -> float:
    """ECEF chord distance in meters between two geodetic positions (WGS-84).

    A chord underestimates the along-surface arc, but at airport scale
    (kilometres) the two are indistinguishable, and the chord is symmetric
    and exactly zero for identical inputs.
    """
    pa = geodetic_to_ecef(WGS84, a)
    pb = geodetic_to_ecef(WGS84, b)
    return math.dist((pa.x_m, pa.y_m, pa.z_m), (pb.x_m, pb.y_m, pb.z_m))
