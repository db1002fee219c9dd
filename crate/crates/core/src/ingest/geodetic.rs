//! WGS-84 geodetic, ECEF and local East-North-Up conversions.

use nalgebra::Matrix3;

use crate::model::Point3;

/// WGS-84 semi-major axis (m).
pub const WGS84_A: f64 = 6_378_137.0;
/// WGS-84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;
/// First eccentricity squared.
pub const WGS84_E2: f64 = WGS84_F * (2.0 - WGS84_F);

/// Prime-vertical radius of curvature at latitude `lat`.
fn prime_vertical_radius(lat: f64) -> f64 {
    let s = lat.sin();
    WGS84_A / (1.0 - WGS84_E2 * s * s).sqrt()
}

/// Geodetic (radians, meters) to Earth-centered Earth-fixed coordinates.
pub fn geodetic_to_ecef(lat: f64, lon: f64, height: f64) -> Point3 {
    let n = prime_vertical_radius(lat);
    let (slat, clat) = lat.sin_cos();
    let (slon, clon) = lon.sin_cos();
    Point3::new(
        (n + height) * clat * clon,
        (n + height) * clat * slon,
        (n * (1.0 - WGS84_E2) + height) * slat,
    )
}

/// ECEF to geodetic `(lat, lon, height)`.
///
/// Fixed-point iteration on latitude; converges to machine precision in a
/// handful of steps anywhere outside the Earth's core.
pub fn ecef_to_geodetic(ecef: &Point3) -> (f64, f64, f64) {
    let (x, y, z) = (ecef.x, ecef.y, ecef.z);
    let lon = y.atan2(x);
    let p = x.hypot(y);
    let mut lat = z.atan2(p * (1.0 - WGS84_E2));
    for _ in 0..32 {
        let height = height_at(lat, p, z);
        let n = prime_vertical_radius(lat);
        let next = z.atan2(p * (1.0 - WGS84_E2 * n / (n + height)));
        let done = (next - lat).abs() < 1e-15;
        lat = next;
        if done {
            break;
        }
    }
    (lat, lon, height_at(lat, p, z))
}

fn height_at(lat: f64, p: f64, z: f64) -> f64 {
    let n = prime_vertical_radius(lat);
    let (s, c) = lat.sin_cos();
    if c.abs() > s.abs() {
        p / c - n
    } else {
        z / s - n * (1.0 - WGS84_E2)
    }
}

/// Rotation taking ECEF offsets into East-North-Up at the given latitude and longitude.
pub fn ecef_to_enu_rotation(lat: f64, lon: f64) -> Matrix3<f64> {
    let (slat, clat) = lat.sin_cos();
    let (slon, clon) = lon.sin_cos();
    Matrix3::new(
        -slon,
        clon,
        0.0,
        -slat * clon,
        -slat * slon,
        clat,
        clat * clon,
        clat * slon,
        slat,
    )
}
