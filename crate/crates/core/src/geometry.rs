//! Pixel-grid geometry: integer pixels, real points, visual angles and the
//! winding-number enclosure test.
//!
//! Coordinates follow the raster convention: x grows rightward, y grows
//! downward, pixel centers sit on integer coordinates.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Pixel {
    pub x: i64,
    pub y: i64,
}

impl Pixel {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Squared Euclidean distance, exact.
    pub fn dist2(self, other: Pixel) -> i64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn chebyshev(self, other: Pixel) -> i64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    /// Raster order key: row first, then column.
    pub fn scan_key(self) -> (i64, i64) {
        (self.y, self.x)
    }

    pub fn to_point(self) -> Point {
        Point::new(self.x as f64, self.y as f64)
    }
}

impl From<[i64; 2]> for Pixel {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Pixel> for [i64; 2] {
    fn from(p: Pixel) -> Self {
        [p.x, p.y]
    }
}

/// Real-valued image point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<Pixel> for Point {
    fn from(p: Pixel) -> Self {
        p.to_point()
    }
}

fn sub(a: Point, b: Point) -> (f64, f64) {
    (a.x - b.x, a.y - b.y)
}

/// Unsigned angle subtended at `o` by `u` and `v`, in `[0, π]`.
pub fn visual_angle(o: Point, u: Point, v: Point) -> Result<f64> {
    if u == o || v == o {
        return Err(Error::DegenerateGeometry(format!(
            "visual angle undefined: endpoint coincides with fixation ({}, {})",
            o.x, o.y
        )));
    }
    let (ux, uy) = sub(u, o);
    let (vx, vy) = sub(v, o);
    let cross = ux * vy - uy * vx;
    let dot = ux * vx + uy * vy;
    Ok(cross.abs().atan2(dot))
}

/// Direction of `u` seen from `o`, measured from the ray `o -> reference`
/// turning from +x toward +y, normalized to `[0, 2π)`.
pub fn direction_angle(o: Point, reference: Point, u: Point) -> Result<f64> {
    if u == o || reference == o {
        return Err(Error::DegenerateGeometry(format!(
            "direction undefined: point coincides with fixation ({}, {})",
            o.x, o.y
        )));
    }
    let (rx, ry) = sub(reference, o);
    let (ux, uy) = sub(u, o);
    let cross = rx * uy - ry * ux;
    let dot = rx * ux + ry * uy;
    let mut a = cross.atan2(dot);
    if a < 0.0 {
        a += TAU;
    }
    // atan2 can round a tiny negative angle up to exactly 2π.
    if a >= TAU {
        a = 0.0;
    }
    Ok(a)
}

/// Signed winding number of the closed polygon around `o`.
///
/// The polygon is implicitly closed (last vertex joins the first). Points
/// lying on a polygon edge are rejected.
pub fn winding_number(polygon: &[Point], o: Point) -> Result<i64> {
    if polygon.len() < 2 {
        return Err(Error::OpenPath("polygon needs at least two vertices".into()));
    }
    let n = polygon.len();
    let mut wn = 0i64;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        if on_segment(a, b, o) {
            return Err(Error::DegenerateGeometry(format!("point ({}, {}) lies on the polygon boundary", o.x, o.y)));
        }
        let side = (b.x - a.x) * (o.y - a.y) - (o.x - a.x) * (b.y - a.y);
        if a.y <= o.y {
            if b.y > o.y && side > 0.0 {
                wn += 1;
            }
        } else if b.y <= o.y && side < 0.0 {
            wn -= 1;
        }
    }
    Ok(wn)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    let cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    if cross != 0.0 {
        return false;
    }
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Whether the straight step from angle `from` to angle `to` (both in
/// `[0, 2π]`) wraps across the angular seam.
pub fn crosses_seam(from: f64, to: f64) -> bool {
    (to - from).abs() > PI
}
