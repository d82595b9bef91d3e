from __future__ import annotations

import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taxiwarn.geo import (
    WGS84,
    WGS84_ECCENTRICITY_SQ,
    WGS84_EQUATORIAL_RADIUS_M,
    EllipsoidParams,
    GeodeticPosition,
    geodetic_to_ecef,
    prime_vertical_radius,
    surface_distance,
)

mpmath.mp.dps = 40


def _ref_prime_vertical(lat_deg: float) -> float:
    """High-precision oracle for the prime vertical radius."""
    b = mpmath.radians(mpmath.mpf(repr(lat_deg)))
    e2 = mpmath.mpf("0.00669437999014")
    return float(mpmath.mpf(6378137) / mpmath.sqrt(1 - e2 * mpmath.sin(b) ** 2))


def test_prime_vertical_radius_equator():
    assert prime_vertical_radius(WGS84, 0.0) == pytest.approx(6378137.0, abs=1e-9)


def test_prime_vertical_radius_pole():
    assert prime_vertical_radius(WGS84, 90.0) == pytest.approx(_ref_prime_vertical(90.0), abs=1e-2)
    assert prime_vertical_radius(WGS84, 90.0) == pytest.approx(6399593.63, abs=1e-2)


@given(st.floats(min_value=-90, max_value=90))
def test_prime_vertical_radius_sphere(lat):
    sphere = EllipsoidParams(6371000.0, 0.0)
    assert prime_vertical_radius(sphere, lat) == 6371000.0


def test_ecef_equator_prime_meridian():
    p = geodetic_to_ecef(WGS84, GeodeticPosition(0.0, 0.0, 0.0))
    assert (p.x_m, p.y_m, p.z_m) == pytest.approx((6378137.0, 0.0, 0.0), abs=1e-2)


def test_ecef_equator_lon90():
    p = geodetic_to_ecef(WGS84, GeodeticPosition(0.0, 90.0, 0.0))
    assert (p.x_m, p.y_m, p.z_m) == pytest.approx((0.0, 6378137.0, 0.0), abs=1e-2)


def test_ecef_north_pole():
    # z at the pole is C * (1 - e^2) = E_q * sqrt(1 - e^2), the polar radius.
    polar = float(mpmath.mpf(6378137) * mpmath.sqrt(1 - mpmath.mpf("0.00669437999014")))
    p = geodetic_to_ecef(WGS84, GeodeticPosition(90.0, 0.0, 0.0))
    assert (p.x_m, p.y_m, p.z_m) == pytest.approx((0.0, 0.0, polar), abs=1e-2)
    assert p.z_m == pytest.approx(6356752.31, abs=1e-2)


def test_ecef_h0_radius_between_polar_and_equatorial():
    for lat in (-88.0, -45.0, -10.0, 0.0, 23.5, 45.0, 66.6, 90.0):
        p = geodetic_to_ecef(WGS84, GeodeticPosition(lat, 30.0, 0.0))
        r = math.sqrt(p.x_m**2 + p.y_m**2 + p.z_m**2)
        assert 6356752.314 - 1.0 <= r <= 6378137.0 + 1.0


@settings(max_examples=300)
@given(
    lat=st.floats(min_value=-90, max_value=90),
    lon=st.floats(min_value=-180, max_value=180),
    h=st.floats(min_value=-100, max_value=10000),
)
def test_ecef_sphere_degenerates_to_spherical(lat, lon, h):
    sphere = EllipsoidParams(6371000.0, 0.0)
    p = geodetic_to_ecef(sphere, GeodeticPosition(lat, lon, h))
    r = math.sqrt(p.x_m**2 + p.y_m**2 + p.z_m**2)
    assert r == pytest.approx(6371000.0 + h, rel=1e-6)


@settings(max_examples=300)
@given(
    lat=st.floats(min_value=-90, max_value=90),
    lon=st.floats(min_value=-180, max_value=180),
    h=st.floats(min_value=-100, max_value=10000),
)
def test_ecef_parity_in_latitude(lat, lon, h):
    p_pos = geodetic_to_ecef(WGS84, GeodeticPosition(lat, lon, h))
    p_neg = geodetic_to_ecef(WGS84, GeodeticPosition(-lat, lon, h))
    assert p_neg.z_m == pytest.approx(-p_pos.z_m, abs=1e-6)
    assert p_neg.x_m == pytest.approx(p_pos.x_m, abs=1e-6)
    assert p_neg.y_m == pytest.approx(p_pos.y_m, abs=1e-6)


@settings(max_examples=300)
@given(
    lat=st.floats(min_value=-90, max_value=90),
    lon=st.floats(min_value=-180, max_value=179.999),
    h=st.floats(min_value=-100, max_value=10000),
)
def test_ecef_longitude_periodicity(lat, lon, h):
    base = GeodeticPosition(lat, lon, h)
    p1 = geodetic_to_ecef(WGS84, base)
    # A full turn is the same direction; compare via the wrapped equivalent angle.
    lam1 = math.radians(lon)
    lam2 = math.radians(lon) + 2 * math.pi
    c = prime_vertical_radius(WGS84, lat)
    x2 = (c + h) * math.cos(math.radians(lat)) * math.cos(lam2)
    y2 = (c + h) * math.cos(math.radians(lat)) * math.sin(lam2)
    scale = max(1.0, abs(p1.x_m), abs(p1.y_m))
    assert abs(p1.x_m - x2) / scale < 1e-9
    assert abs(p1.y_m - y2) / scale < 1e-9


def test_surface_distance_identity():
    p = GeodeticPosition(38.9, 117.35, 3.0)
    assert surface_distance(p, p) == 0.0


def test_surface_distance_antipodal_equator():
    a = GeodeticPosition(0.0, 0.0, 0.0)
    b = GeodeticPosition(0.0, 180.0, 0.0)
    assert surface_distance(a, b) == pytest.approx(2 * WGS84_EQUATORIAL_RADIUS_M, abs=1e-6)


def test_surface_distance_small_longitude_step():
    # Chord for 0.001 degree at the equator: 2 R sin(delta/2).
    delta = mpmath.radians(mpmath.mpf("0.001"))
    expected = float(2 * mpmath.mpf(6378137) * mpmath.sin(delta / 2))
    a = GeodeticPosition(0.0, 0.0, 0.0)
    b = GeodeticPosition(0.0, 0.001, 0.0)
    assert surface_distance(a, b) == pytest.approx(expected, abs=1e-6)
    assert surface_distance(a, b) == pytest.approx(111.32, abs=0.01)


@given(
    lat1=st.floats(min_value=-89, max_value=89),
    lon1=st.floats(min_value=-180, max_value=180),
    lat2=st.floats(min_value=-89, max_value=89),
    lon2=st.floats(min_value=-180, max_value=180),
)
def test_surface_distance_symmetric(lat1, lon1, lat2, lon2):
    a = GeodeticPosition(lat1, lon1, 0.0)
    b = GeodeticPosition(lat2, lon2, 0.0)
    assert surface_distance(a, b) == surface_distance(b, a)


def test_position_validation():
    with pytest.raises(ValueError):
        GeodeticPosition(91.0, 0.0)
    with pytest.raises(ValueError):
        GeodeticPosition(0.0, 181.0)
    with pytest.raises(ValueError):
        EllipsoidParams(-1.0, 0.1)
    with pytest.raises(ValueError):
        EllipsoidParams(6378137.0, 1.0)


def test_wgs84_constants():
    assert WGS84.equatorial_radius_m == WGS84_EQUATORIAL_RADIUS_M
    assert WGS84.eccentricity_sq == pytest.approx(WGS84_ECCENTRICITY_SQ, rel=1e-15)
