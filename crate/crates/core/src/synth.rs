//! Seeded synthetic shapes with known optimal contours.
//!
//! Shapes are polygons rasterized with 8-connected line walks and ordered by
//! increasing angle around the fixation point. The ring is cut into
//! fragments of at most [`PIECE_LEN`] pixels; neighboring fragments share
//! their boundary pixel, so only punched gaps cost anything.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angular_graph::{build_graph, AngularGraph, ArcKind, Query, DEFAULT_THETA};
use crate::edgemap::{encode_pgm, EdgeMap, End, EndpointRef, Fragment, FragmentSet};
use crate::error::{Error, Result};
use crate::geometry::{direction_angle, Pixel, Point};
use crate::path::{Algorithm, CyclePath};

pub const PIECE_LEN: usize = 10;
const MARGIN: i64 = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// Cost of the full contour.
    pub d: i64,
    /// Fragment ids in traversal order, starting with the one holding the
    /// interest pixel.
    pub fragments: Vec<usize>,
    /// Every contour pixel in traversal order, starting at the interest
    /// pixel.
    pub polygon: Vec<Pixel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticInstance {
    pub family: String,
    pub fragments: FragmentSet,
    pub query: Query,
    pub ground_truth: GroundTruth,
    pub seed: u64,
}

/// One line of a queries file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub image: String,
    pub fixation: Point,
    pub interest: Point,
}

impl SyntheticInstance {
    /// Builds the angular graph and walks the full contour through it.
    pub fn ground_truth_path(&self) -> Result<CyclePath> {
        let g = build_graph(&self.fragments, self.query)?;
        let index_of = |id: usize| g.fragment_ids.iter().position(|&f| f == id);
        let fresh = self.fragments.fragments.iter().map(|f| f.id).max().unwrap_or(0) + 1;
        let mut order = self.ground_truth.fragments.clone();
        if index_of(fresh).is_some() {
            order.push(fresh);
        }
        let mut vertices = Vec::with_capacity(2 * order.len());
        let mut steps = Vec::with_capacity(2 * order.len());
        for id in order {
            let idx =
                index_of(id).ok_or_else(|| Error::InvalidParameter(format!("fragment {id} missing from graph")))?;
            let (head, tail) = (2 * idx, 2 * idx + 1);
            if let Some(&prev) = vertices.last() {
                let arc = g.arc_between(prev, head).ok_or_else(|| {
                    Error::DegenerateGeometry(format!("no arc joins fragment {id} to its predecessor"))
                })?;
                steps.push((arc.kind, arc.weight));
            }
            vertices.push(head);
            vertices.push(tail);
            steps.push((ArcKind::Fragment, 0));
        }
        if vertices.first() != Some(&g.start) || vertices.last() != Some(&g.closing()) {
            return Err(Error::DegenerateGeometry("ground truth does not start at the chosen start vertex".into()));
        }
        let nodes = vertices.clone();
        Ok(CyclePath::from_walk(&g, Algorithm::Oracle, nodes, vertices, &steps))
    }

    /// Adds `count` random straight fragments of 3 to 8 pixels that keep at
    /// least one pixel of clearance from everything already drawn and from
    /// the fixation point. The ground truth keeps describing the shape's
    /// contour, which clutter may undercut.
    pub fn with_clutter(mut self, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let (w, h) = self.fragments.source;
        let mut blocked: std::collections::HashSet<Pixel> = self.fragments.pixels().collect();
        let o = self.query.fixation;
        let mut next = self.fragments.fragments.iter().map(|f| f.id).max().map_or(0, |m| m + 1);
        let mut added = 0;
        let mut attempts = 0;
        while added < count && attempts < 100 * count {
            attempts += 1;
            let a = Pixel::new(rng.random_range(1..w as i64 - 1), rng.random_range(1..h as i64 - 1));
            let len = rng.random_range(2.0..7.0);
            let phi = rng.random_range(0.0..TAU);
            let b = polar(a.to_point(), len, phi);
            if b.x < 1 || b.y < 1 || b.x >= w as i64 - 1 || b.y >= h as i64 - 1 {
                continue;
            }
            let pixels = line_pixels(a, b);
            let clear = pixels.iter().all(|p| {
                p.to_point().dist2(o) > 4.0
                    && (-1..=1).all(|dy| (-1..=1).all(|dx| !blocked.contains(&Pixel::new(p.x + dx, p.y + dy))))
            });
            if !clear {
                continue;
            }
            blocked.extend(pixels.iter().copied());
            self.fragments.fragments.push(Fragment { id: next, pixels });
            next += 1;
            added += 1;
        }
        self
    }

    pub fn edge_map(&self) -> Result<EdgeMap> {
        let (w, h) = self.fragments.source;
        let pixels: Vec<Pixel> = self.fragments.pixels().collect();
        EdgeMap::from_pixels(w, h, &pixels)
    }

    /// Binary PGM rendering of the contour.
    pub fn to_pgm(&self) -> Result<Vec<u8>> {
        Ok(encode_pgm(&self.edge_map()?))
    }

    pub fn query_record(&self, image: &str) -> QueryRecord {
        QueryRecord { image: image.to_string(), fixation: self.query.fixation, interest: self.query.interest }
    }
}

/// Inclusive 8-connected pixel walk from `a` to `b`.
pub fn line_pixels(a: Pixel, b: Pixel) -> Vec<Pixel> {
    let (dx, dy) = ((b.x - a.x).abs(), -(b.y - a.y).abs());
    let (sx, sy) = ((b.x - a.x).signum(), (b.y - a.y).signum());
    let mut err = dx + dy;
    let (mut x, mut y) = (a.x, a.y);
    let mut out = vec![a];
    while (x, y) != (b.x, b.y) {
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
        out.push(Pixel::new(x, y));
    }
    out
}

/// Closed ring through the polygon corners plus the ring index of each
/// corner.
fn rasterize(corners: &[Pixel]) -> (Vec<Pixel>, Vec<usize>) {
    let mut ring = Vec::new();
    let mut offsets = Vec::with_capacity(corners.len());
    for (i, &a) in corners.iter().enumerate() {
        let b = corners[(i + 1) % corners.len()];
        offsets.push(ring.len());
        let side = line_pixels(a, b);
        ring.extend_from_slice(&side[..side.len() - 1]);
    }
    (ring, offsets)
}

fn side_point(ring_len: usize, offsets: &[usize], side: usize, frac: f64) -> usize {
    let start = offsets[side];
    let end = offsets.get(side + 1).copied().unwrap_or(ring_len);
    start + ((end - start) as f64 * frac).round() as usize
}

/// Boundaries for cutting `len` pixels into pieces of at most
/// [`PIECE_LEN`], aligned so that one boundary sits at `anchor`.
fn boundaries(len: usize, anchor: usize) -> Vec<usize> {
    let stride = PIECE_LEN - 1;
    let mut out = vec![0];
    let mut b = anchor % stride;
    if b == 0 {
        b = stride;
    }
    while b < len - 1 {
        out.push(b);
        b += stride;
    }
    out.push(len - 1);
    out
}

/// Cuts the ring into fragments and computes the ground truth.
fn assemble(
    family: &str,
    ring: Vec<Pixel>,
    gap_centers: &[usize],
    gap: i64,
    interest: usize,
    fixation: Point,
    seed: u64,
) -> Result<SyntheticInstance> {
    let n = ring.len();
    let mut seen = std::collections::HashSet::with_capacity(n);
    if !ring.iter().all(|p| seen.insert(*p)) {
        return Err(Error::DegenerateGeometry(format!("{family} contour intersects itself")));
    }

    // Each gap removes gap - 1 pixels and breaks the ring there; `cuts`
    // holds (first removed, first kept after) ring indices.
    let mut cuts: Vec<(usize, usize)> = Vec::new();
    if gap > 0 {
        let m = (gap - 1) as usize;
        for &c in gap_centers {
            let lo = (c + n - m / 2) % n;
            cuts.push((lo, (lo + m) % n));
        }
        cuts.sort_unstable();
    }
    let removed = |i: usize| cuts.iter().any(|&(lo, hi)| (i + n - lo) % n < (hi + n - lo) % n);
    let mut d = 0;
    for &(lo, hi) in &cuts {
        d += ring[(lo + n - 1) % n].dist2(ring[hi]);
    }
    let near_gap =
        cuts.iter().any(|&(lo, hi)| (interest + n - lo) % n <= (hi + n - lo) % n + 1 || (lo + n - interest) % n <= 2);
    if near_gap || removed(interest) {
        return Err(Error::InvalidParameter(format!("{family} interest point falls in a gap")));
    }

    // Runs of kept pixels in ring order, the first one holding the
    // interest pixel at run offset `anchor`.
    let mut runs: Vec<Vec<Pixel>> = Vec::new();
    let anchor;
    if cuts.is_empty() {
        let h = PIECE_LEN / 2 - 1;
        let start = (interest + n - h) % n;
        let mut run: Vec<Pixel> = (0..=n).map(|k| ring[(start + k) % n]).collect();
        run[n] = ring[start];
        runs.push(run);
        anchor = h;
    } else {
        let k = cuts.iter().rposition(|&(lo, _)| lo <= interest).unwrap_or(cuts.len() - 1);
        for j in 0..cuts.len() {
            let (_, from) = cuts[(k + j) % cuts.len()];
            let (to, _) = cuts[(k + j + 1) % cuts.len()];
            let len = (to + n - from) % n;
            runs.push((0..len).map(|q| ring[(from + q) % n]).collect());
        }
        let (_, from) = cuts[k];
        anchor = (interest + n - from) % n;
    }

    let h = PIECE_LEN / 2 - 1;
    let mut pieces: Vec<Vec<Pixel>> = Vec::new();
    let mut tail_pieces: Vec<Vec<Pixel>> = Vec::new();
    for (r, run) in runs.iter().enumerate() {
        if run.len() < 2 {
            return Err(Error::DegenerateGeometry(format!("{family} has a run shorter than 2 pixels")));
        }
        let bounds = if r == 0 { boundaries(run.len(), anchor + PIECE_LEN - 1 - h) } else { boundaries(run.len(), 0) };
        for w in bounds.windows(2) {
            let piece = run[w[0]..=w[1]].to_vec();
            if r == 0 && w[1] <= anchor {
                tail_pieces.push(piece);
            } else {
                pieces.push(piece);
            }
        }
    }
    pieces.extend(tail_pieces);

    let fragments: Vec<Fragment> = pieces.into_iter().enumerate().map(|(id, pixels)| Fragment { id, pixels }).collect();
    let order: Vec<usize> = (0..fragments.len()).collect();
    let interest_px = ring[interest];
    let mut polygon: Vec<Pixel> =
        (0..n).map(|k| (interest + k) % n).filter(|&i| !removed(i)).map(|i| ring[i]).collect();
    polygon.dedup();

    let max_x = ring.iter().map(|p| p.x).max().unwrap_or(0);
    let max_y = ring.iter().map(|p| p.y).max().unwrap_or(0);
    let source = ((max_x + MARGIN) as usize, (max_y + MARGIN) as usize);
    Ok(SyntheticInstance {
        family: family.to_string(),
        fragments: FragmentSet::new(fragments, source),
        query: Query::new(fixation, interest_px.to_point(), DEFAULT_THETA)?,
        ground_truth: GroundTruth { d, fragments: order, polygon },
        seed,
    })
}

fn polar(center: Point, r: f64, phi: f64) -> Pixel {
    Pixel::new((center.x + r * phi.cos()).round() as i64, (center.y + r * phi.sin()).round() as i64)
}

fn star_instance(
    n_rays: usize,
    r_min: f64,
    r_max: f64,
    gap: i64,
    seed: u64,
    jitter: bool,
) -> Result<SyntheticInstance> {
    if n_rays < 3 {
        return Err(Error::InvalidParameter(format!("star needs at least 3 rays, got {n_rays}")));
    }
    if !(r_min > 0.0 && r_min <= r_max) || gap < 0 {
        return Err(Error::InvalidParameter(format!(
            "star radii must satisfy 0 < r_min <= r_max and gap >= 0 (r_min={r_min}, r_max={r_max}, gap={gap})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (r_max.ceil() as i64 + MARGIN) as f64;
    let center = Point::new(c, c);
    let step = PI / n_rays as f64;
    let fixation = Point::new(c + 0.37, c + 0.21);
    // Jittered outlines that are not visible from the center, or whose first
    // side is too short to hold the interest point clear of its gap, are
    // redrawn from the same stream.
    let attempts = if jitter { 64 } else { 1 };
    let mut last_err = None;
    for _ in 0..attempts {
        let phase = if jitter { rng.random_range(0.0..TAU) } else { 0.0 };
        let corners: Vec<Pixel> = (0..2 * n_rays)
            .map(|i| {
                let wobble = if jitter { rng.random_range(-0.2..0.2) * step } else { 0.0 };
                let r = match (i % 2 == 1, jitter) {
                    (true, false) => r_max,
                    (false, false) => r_min,
                    (true, true) => rng.random_range((r_min + r_max) / 2.0..=r_max),
                    (false, true) => rng.random_range(r_min..=(r_min + r_max) / 2.0),
                };
                polar(center, r, phase + i as f64 * step + wobble)
            })
            .collect();
        let (ring, offsets) = rasterize(&corners);
        let gaps: Vec<usize> = if gap > 0 {
            (0..corners.len()).map(|s| side_point(ring.len(), &offsets, s, 0.5)).collect()
        } else {
            Vec::new()
        };
        let interest = side_point(ring.len(), &offsets, 0, 0.25);
        match check_visible(&ring, fixation, interest)
            .and_then(|()| assemble("star", ring, &gaps, gap, interest, fixation, seed))
        {
            Ok(inst) => return Ok(inst),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Fails unless every ring pixel is seen at a strictly larger angle than
/// the one before it.
fn check_visible(ring: &[Pixel], o: Point, interest: usize) -> Result<()> {
    let reference = ring[interest].to_point();
    let n = ring.len();
    let mut prev = -1.0;
    for k in 0..n {
        let a = direction_angle(o, reference, ring[(interest + k) % n].to_point())?;
        if a <= prev {
            return Err(Error::DegenerateGeometry(format!(
                "star contour is not visible from the center at {}",
                ring[(interest + k) % n]
            )));
        }
        prev = a;
    }
    Ok(())
}

/// Star-shaped polygon with `n_rays` tips between radii `r_min` and
/// `r_max`; the seed jitters radii and angles. A gap of `gap` pixels is
/// punched in the middle of every side.
pub fn gen_star(n_rays: usize, r_min: f64, r_max: f64, gap: i64, seed: u64) -> Result<SyntheticInstance> {
    star_instance(n_rays, r_min, r_max, gap, seed, true)
}

/// Unjittered star: valleys at angles `2kπ/n` on radius `r_min`, tips half
/// way between on radius `r_max`.
pub fn gen_regular_star(n_rays: usize, r_min: f64, r_max: f64, gap: i64) -> Result<SyntheticInstance> {
    star_instance(n_rays, r_min, r_max, gap, 0, false)
}

/// Comb geometry: a spine on the left with `teeth` teeth to its right.
struct Comb {
    corners: Vec<Pixel>,
    spine: i64,
    width: i64,
    /// Row ranges `(top, bottom)` of each tooth.
    rows: Vec<(i64, i64)>,
}

fn comb(teeth: usize, rng: &mut ChaCha8Rng) -> Comb {
    let x0 = MARGIN;
    let spine = rng.random_range(24..=30);
    let width = spine + rng.random_range(34..=44);
    let mut rows = Vec::with_capacity(teeth);
    let mut y = MARGIN;
    for i in 0..teeth {
        if i > 0 {
            y += rng.random_range(14..=18);
        }
        let h = rng.random_range(14..=18);
        rows.push((y, y + h));
        y += h;
    }
    let (x1, xw) = (x0 + spine, x0 + width);
    let mut corners = vec![Pixel::new(x0, rows[0].0), Pixel::new(xw, rows[0].0)];
    for (i, &(top, bottom)) in rows.iter().enumerate() {
        if i > 0 {
            corners.push(Pixel::new(x1, top));
            corners.push(Pixel::new(xw, top));
        }
        corners.push(Pixel::new(xw, bottom));
        if i + 1 < rows.len() {
            corners.push(Pixel::new(x1, bottom));
        }
    }
    corners.push(Pixel::new(x0, rows[teeth - 1].1));
    Comb { corners, spine, width, rows }
}

/// Gap centers on the left side, the bottom edge and the last tooth's end.
fn comb_gaps(c: &Comb, ring_len: usize, offsets: &[usize]) -> Vec<usize> {
    let last = c.corners.len() - 1;
    vec![
        side_point(ring_len, offsets, last, 0.3),
        side_point(ring_len, offsets, last - 1, 0.5),
        side_point(ring_len, offsets, last - 2, 0.5),
    ]
}

/// Comb fixation: inside the spine, level with the middle tooth.
fn comb_fixation(c: &Comb, rng: &mut ChaCha8Rng) -> Point {
    let (top, bottom) = c.rows[c.rows.len() / 2];
    Point::new((MARGIN + c.spine / 2) as f64 + rng.random_range(-2.0..2.0) + 0.37, ((top + bottom) / 2) as f64 + 0.21)
}

/// E-like shape (a comb with three teeth) with the fixation in the spine and
/// the interest point on the spine's outer side, so the critical line
/// crosses the contour once and the contour reverses direction four times.
pub fn gen_eshape(seed: u64) -> Result<SyntheticInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = comb(3, &mut rng);
    let fixation = comb_fixation(&c, &mut rng);
    let (ring, offsets) = rasterize(&c.corners);
    let gaps = comb_gaps(&c, ring.len(), &offsets);
    let target = Pixel::new(MARGIN, fixation.y.round() as i64 + 2);
    let interest = ring.iter().position(|&p| p == target).expect("left side holds the row");
    assemble("eshape", ring, &gaps, 2, interest, fixation, seed)
}

/// Comb whose interest point lies on the top edge of the first tooth, far
/// enough right that the critical line leaves through a slot and crosses
/// the contour three times.
pub fn gen_comb(teeth: usize, seed: u64) -> Result<SyntheticInstance> {
    if teeth < 2 {
        return Err(Error::InvalidParameter(format!("comb needs at least 2 teeth, got {teeth}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = comb(teeth, &mut rng);
    let fixation = comb_fixation(&c, &mut rng);
    let (ring, offsets) = rasterize(&c.corners);
    let gaps = comb_gaps(&c, ring.len(), &offsets);

    // The ray must pass the bottom of the first tooth right of the spine.
    let top = c.rows[0].0 as f64;
    let h1 = c.rows[0].1 as f64;
    let x1 = (MARGIN + c.spine) as f64 + 4.0;
    let t = (fixation.y - h1) / (fixation.y - top);
    let min_x = fixation.x + (x1 - fixation.x) / t;
    let max_x = (MARGIN + c.width - 4) as f64;
    if min_x >= max_x {
        return Err(Error::DegenerateGeometry("comb teeth too short for a crossing start".into()));
    }
    let xs = rng.random_range(min_x.ceil()..=max_x).round() as i64;
    let interest = ring.iter().position(|&p| p == Pixel::new(xs, c.rows[0].0)).expect("top edge holds the column");
    assemble("comb", ring, &gaps, 2, interest, fixation, seed)
}

/// Random angular graph with `2⌊n/2⌋` vertices: straight fragments in an
/// annulus around a non-integer fixation point, spread over angular slots
/// so that a contour usually exists. Half of the
/// seeds split the start fragment at the interest pixel, the rest start at
/// a fragment end.
pub fn gen_random_graph(n: usize, seed: u64) -> Result<AngularGraph> {
    if !(4..=16).contains(&n) {
        return Err(Error::InvalidParameter(format!("vertex count must be in 4..=16, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = Point::new(60.0 + rng.random_range(0.1..0.9), 60.0 + rng.random_range(0.1..0.9));
    let count = n / 2;
    let split = rng.random_bool(0.5);

    loop {
        let mut used = std::collections::HashSet::new();
        let mut fragments = Vec::with_capacity(count);
        let slots = 3.max(count.div_ceil(2));
        let width = TAU / slots as f64;
        let phi = rng.random_range(0.0..TAU);
        let r = rng.random_range(12.0..40.0);
        let p = polar(o, r, phi);
        let before = polar(o, r + rng.random_range(-3.0..3.0), phi - rng.random_range(0.2..0.45) * width);
        let after = polar(o, r + rng.random_range(-3.0..3.0), phi + rng.random_range(0.2..0.45) * width);
        let mut ok = true;
        let mut add = |pixels: Vec<Pixel>, fragments: &mut Vec<Fragment>, shared: Option<Pixel>| {
            let fresh = pixels.len() >= 2 && pixels.iter().all(|q| Some(*q) == shared || !used.contains(q));
            if fresh {
                used.extend(pixels.iter().copied());
                fragments.push(Fragment { id: fragments.len(), pixels });
            }
            fresh
        };
        let (left, right) = if split {
            ok &= add(line_pixels(before, p), &mut fragments, None);
            ok &= add(line_pixels(p, after), &mut fragments, Some(p));
            (EndpointRef { fragment: 0, end: End::Tail }, EndpointRef { fragment: 1, end: End::Head })
        } else {
            ok &= add(line_pixels(p, after), &mut fragments, None);
            let r = EndpointRef { fragment: 0, end: End::Head };
            (r, r)
        };
        let starts = fragments.len();
        let mut attempts = 0;
        while ok && fragments.len() < count && attempts < 200 {
            attempts += 1;
            let slot = (fragments.len() - starts + 1) % slots;
            let phi = phi + (slot as f64 + rng.random_range(-0.15..0.15)) * width;
            let half = rng.random_range(0.25..0.45) * width;
            let r = rng.random_range(12.0..40.0);
            let a = polar(o, r + rng.random_range(-3.0..3.0), phi - half);
            let b = polar(o, r + rng.random_range(-3.0..3.0), phi + half);
            add(line_pixels(a, b), &mut fragments, None);
        }
        if !ok || fragments.len() < count {
            continue;
        }
        let set = FragmentSet::new(fragments, (120, 120));
        let query = Query::new(o, p.to_point(), DEFAULT_THETA)?;
        return AngularGraph::from_fragments(&set, query, left, right);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_cycle;

    fn check_ground_truth(inst: &SyntheticInstance) {
        let path = inst.ground_truth_path().unwrap();
        assert_eq!(path.d, inst.ground_truth.d, "{} seed {}", inst.family, inst.seed);
        let report = verify_cycle(&path, &inst.query).unwrap();
        assert!(report.passed(), "{} seed {}: {report:?}", inst.family, inst.seed);
    }

    #[test]
    fn line_walk_is_8_connected() {
        let px = line_pixels(Pixel::new(0, 0), Pixel::new(7, -3));
        assert_eq!(px.first(), Some(&Pixel::new(0, 0)));
        assert_eq!(px.last(), Some(&Pixel::new(7, -3)));
        assert_eq!(px.len(), 8);
        assert!(px.windows(2).all(|w| w[0].chebyshev(w[1]) == 1));
    }

    #[test]
    fn regular_four_ray_star_cost() {
        let r_max = 40.0;
        for g in [1, 2, 3] {
            let inst = gen_regular_star(4, r_max * std::f64::consts::FRAC_1_SQRT_2, r_max, g).unwrap();
            assert_eq!(inst.ground_truth.d, 8 * g * g);
            check_ground_truth(&inst);
        }
    }

    #[test]
    fn closed_star_costs_nothing() {
        let inst = gen_star(5, 20.0, 30.0, 0, 3).unwrap();
        assert_eq!(inst.ground_truth.d, 0);
        check_ground_truth(&inst);
    }

    #[test]
    fn ground_truths_verify() {
        for seed in 0..10 {
            check_ground_truth(&gen_star(3 + seed as usize % 5, 20.0, 34.0, 2, seed).unwrap());
            check_ground_truth(&gen_eshape(seed).unwrap());
            check_ground_truth(&gen_comb(2 + seed as usize % 3, seed).unwrap());
        }
    }

    #[test]
    fn comb_critical_line_crosses_three_times() {
        for seed in 0..10 {
            let inst = gen_comb(3, seed).unwrap();
            let report = verify_cycle(&inst.ground_truth_path().unwrap(), &inst.query).unwrap();
            assert_eq!(report.crossings, 3, "seed {seed}");
            let e = gen_eshape(seed).unwrap();
            let report = verify_cycle(&e.ground_truth_path().unwrap(), &e.query).unwrap();
            assert_eq!(report.crossings, 1, "seed {seed}");
        }
    }

    #[test]
    fn bad_parameters_rejected() {
        assert!(gen_star(2, 10.0, 20.0, 0, 0).is_err());
        assert!(gen_star(5, 0.0, 20.0, 0, 0).is_err());
        assert!(gen_comb(1, 0).is_err());
        assert!(gen_random_graph(3, 0).is_err());
        assert!(gen_random_graph(17, 0).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(gen_star(6, 20.0, 30.0, 2, 9).unwrap(), gen_star(6, 20.0, 30.0, 2, 9).unwrap());
        assert_eq!(gen_comb(3, 4).unwrap(), gen_comb(3, 4).unwrap());
        let a = gen_random_graph(12, 77).unwrap().to_export();
        let b = gen_random_graph(12, 77).unwrap().to_export();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn random_graph_shape() {
        for seed in 0..50 {
            for n in [4, 7, 12, 16] {
                let g = gen_random_graph(n, seed).unwrap();
                assert_eq!(g.vertex_count(), 2 * (n / 2));
                if n == 4 {
                    assert!(g.arcs.len() <= 6);
                }
                for a in &g.arcs {
                    let (u, v) = (g.position(a.u).to_point(), g.position(a.v).to_point());
                    let angle = crate::geometry::visual_angle(g.query.fixation, u, v).unwrap();
                    assert!(angle < g.query.theta);
                }
            }
        }
    }

    #[test]
    fn pgm_export_renders_every_pixel() {
        let inst = gen_star(5, 20.0, 30.0, 2, 1).unwrap();
        let map = crate::edgemap::load_edge_map(&inst.to_pgm().unwrap()).unwrap();
        assert_eq!(map.edgel_count(), inst.ground_truth.polygon.len());
        let rec = inst.query_record("star.pgm");
        assert!(serde_json::to_string(&rec).unwrap().contains("\"fixation\":["));
    }
}
