use prismtrack_core::ingest::{enu_to_geodetic, geodetic_point_to_enu};
use prismtrack_core::GeodeticOrigin;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A: f64 = 6_378_137.0;
const B: f64 = A * (1.0 - 1.0 / 298.257_223_563);

// Ellipsoid written with both semi-axes instead of eccentricity.
fn ecef(lat: f64, lon: f64, h: f64) -> [f64; 3] {
    let (s, c) = lat.sin_cos();
    let n = A * A / (A * A * c * c + B * B * s * s).sqrt();
    [(n + h) * c * lon.cos(), (n + h) * c * lon.sin(), (B * B / (A * A) * n + h) * s]
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

// Up is the ellipsoid normal; east and north follow from cross products.
fn oracle_enu(lat: f64, lon: f64, h: f64, o: (f64, f64, f64)) -> [f64; 3] {
    let p = ecef(lat, lon, h);
    let q = ecef(o.0, o.1, o.2);
    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    let up = [o.0.cos() * o.1.cos(), o.0.cos() * o.1.sin(), o.0.sin()];
    let e = cross([0.0, 0.0, 1.0], up);
    let en = dot(e, e).sqrt();
    let east = [e[0] / en, e[1] / en, e[2] / en];
    let north = cross(up, east);
    [dot(d, east), dot(d, north), dot(d, up)]
}

fn origin() -> GeodeticOrigin {
    GeodeticOrigin::from_degrees(46.78, -71.27, 100.0).unwrap()
}

fn close(got: prismtrack_core::Point3, want: [f64; 3], tol: f64) {
    for i in 0..3 {
        assert!((got[i] - want[i]).abs() < tol, "axis {i}: {} vs {}", got[i], want[i]);
    }
}

#[test]
fn frozen_offsets_near_origin() {
    let o = origin();
    let (lat, lon, h) = (o.latitude, o.longitude, o.ellipsoidal_height);
    close(geodetic_point_to_enu(lat + 1e-5, lon, h, &o), [0.0, 63.694_744_128_229_395, -0.000_318_473_544_446_362_67], 1e-6);
    close(geodetic_point_to_enu(lat, lon + 1e-5, h, &o), [43.756_109_230_416_92, 0.000_159_431_550_775_579_47, -0.000_149_820_954_199_242_35], 1e-6);
    close(
        geodetic_point_to_enu(lat - 2e-4, lon + 3e-4, h - 12.5, &o),
        [1_312.959_159_704_936_8, -1_273.747_509_938_311, -12.762_256_525_706_107],
        1e-6,
    );
    close(geodetic_point_to_enu(lat, lon, h + 5.0, &o), [0.0, 0.0, 5.0], 1e-6);
}

#[test]
fn matches_cross_product_basis_within_ten_km() {
    let o = origin();
    let base = (o.latitude, o.longitude, o.ellipsoidal_height);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let lat = base.0 + rng.random_range(-1.5e-3..1.5e-3);
        let lon = base.1 + rng.random_range(-2.0e-3..2.0e-3);
        let h = base.2 + rng.random_range(-200.0..200.0);
        close(geodetic_point_to_enu(lat, lon, h, &o), oracle_enu(lat, lon, h, base), 1e-6);
    }
}

#[test]
fn inverse_recovers_geodetic_within_ten_km() {
    let o = origin();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..2000 {
        let enu = prismtrack_core::Point3::new(
            rng.random_range(-1e4..1e4),
            rng.random_range(-1e4..1e4),
            rng.random_range(-300.0..300.0),
        );
        let (lat, lon, h) = enu_to_geodetic(&enu, &o);
        assert!(((geodetic_point_to_enu(lat, lon, h, &o)) - enu).norm() < 1e-6);
        close(enu, oracle_enu(lat, lon, h, (o.latitude, o.longitude, o.ellipsoidal_height)), 1e-6);
    }
}
