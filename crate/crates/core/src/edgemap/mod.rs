//! Edge-map ingestion and contour-fragment tracing.
//!
//! An [`EdgeMap`] is a binary raster of edgels. [`extract_fragments`] traces
//! it into ordered 8-connected chains ([`Fragment`]s) that end at endpoints
//! or junctions, [`split_fragments`] caps their length, and
//! [`split_at_pixel`] cuts one fragment at the snapped interest pixel.

mod decode;
mod detect;
mod trace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Pixel;

pub use decode::{encode_pgm, encode_png, load_edge_map, load_grayscale};
pub use detect::detect_edges;
pub use trace::extract_fragments;

/// Binary edge raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    mask: Vec<bool>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize, mask: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!("edge map must be at least 1x1, got {width}x{height}")));
        }
        if mask.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "mask has {} entries, expected {}",
                mask.len(),
                width * height
            )));
        }
        Ok(Self { width, height, mask })
    }

    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Edge map with the given pixels set; pixels outside the raster are ignored.
    pub fn from_pixels(width: usize, height: usize, pixels: &[Pixel]) -> Result<Self> {
        let mut map = Self::blank(width, height)?;
        for &p in pixels {
            map.set(p, true);
        }
        Ok(map)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, p: Pixel) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height
    }

    pub fn get(&self, p: Pixel) -> bool {
        self.contains(p) && self.mask[p.y as usize * self.width + p.x as usize]
    }

    pub fn set(&mut self, p: Pixel, value: bool) {
        if self.contains(p) {
            self.mask[p.y as usize * self.width + p.x as usize] = value;
        }
    }

    pub fn edgel_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Edgels in raster order.
    pub fn edgels(&self) -> impl Iterator<Item = Pixel> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| Pixel::new((i % self.width) as i64, (i / self.width) as i64))
    }

    /// Edgel neighbors of `p` in its 8-neighborhood.
    pub fn neighbors8(&self, p: Pixel) -> impl Iterator<Item = Pixel> + '_ {
        NEIGHBORS8.iter().map(move |&(dx, dy)| Pixel::new(p.x + dx, p.y + dy)).filter(move |&q| self.get(q))
    }
}

// Raster order, so neighbor scans are deterministic.
pub(crate) const NEIGHBORS8: [(i64, i64); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

/// Ordered chain of edgels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub id: usize,
    pub pixels: Vec<Pixel>,
}

impl Fragment {
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn head(&self) -> Pixel {
        self.pixels[0]
    }

    pub fn tail(&self) -> Pixel {
        self.pixels[self.pixels.len() - 1]
    }
}

/// Which end of a fragment a vertex sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Head,
    Tail,
}

/// Reference to one endpoint of one fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndpointRef {
    pub fragment: usize,
    pub end: End,
}

/// Collection of fragments traced from one edge map.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FragmentSet {
    pub fragments: Vec<Fragment>,
    /// Raster dimensions `(width, height)` of the source map.
    pub source: (usize, usize),
}

impl FragmentSet {
    pub fn new(fragments: Vec<Fragment>, source: (usize, usize)) -> Self {
        Self { fragments, source }
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&Fragment> {
        self.fragments.iter().find(|f| f.id == id)
    }

    pub fn endpoint(&self, r: EndpointRef) -> Option<Pixel> {
        self.get(r.fragment).map(|f| match r.end {
            End::Head => f.head(),
            End::Tail => f.tail(),
        })
    }

    pub fn pixel_count(&self) -> usize {
        self.fragments.iter().map(Fragment::len).sum()
    }

    pub fn pixels(&self) -> impl Iterator<Item = Pixel> + '_ {
        self.fragments.iter().flat_map(|f| f.pixels.iter().copied())
    }

    /// JSON array of `{id, pixels: [[x, y], ...]}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.fragments)?)
    }

    pub fn from_json(json: &str, source: (usize, usize)) -> Result<Self> {
        let fragments: Vec<Fragment> = serde_json::from_str(json)?;
        Ok(Self { fragments, source })
    }
}

/// Splits every fragment longer than `max_len` into `ceil(n / max_len)`
/// contiguous pieces whose lengths differ by at most one. Ids are
/// reassigned sequentially in output order.
pub fn split_fragments(set: &FragmentSet, max_len: usize) -> Result<FragmentSet> {
    if max_len < 2 {
        return Err(Error::InvalidParameter(format!("maximum fragment length must be >= 2, got {max_len}")));
    }
    let mut out = Vec::with_capacity(set.len());
    for frag in &set.fragments {
        let n = frag.len();
        let pieces = n.div_ceil(max_len).max(1);
        let base = n / pieces;
        let extra = n % pieces;
        let mut start = 0;
        for k in 0..pieces {
            let len = base + usize::from(k < extra);
            out.push(Fragment { id: out.len(), pixels: frag.pixels[start..start + len].to_vec() });
            start += len;
        }
    }
    Ok(FragmentSet::new(out, set.source))
}

/// Splits the fragment containing `p` into two sub-fragments that share `p`
/// as an endpoint.
///
/// The sub-fragment running from `p` to the original tail keeps the original
/// id; the piece from the original head to `p` gets a fresh id. Returns the
/// new set plus the two colocated endpoints `(left_end, right_end)`, where
/// `left_end` is the `p` end of the head-side piece. If `p` is already an
/// endpoint the set is returned unchanged and both references name it.
pub fn split_at_pixel(set: &FragmentSet, p: Pixel) -> Result<(FragmentSet, EndpointRef, EndpointRef)> {
    let (frag_idx, pos) = set
        .fragments
        .iter()
        .enumerate()
        .find_map(|(i, f)| f.pixels.iter().position(|&q| q == p).map(|k| (i, k)))
        .ok_or(Error::NotOnFragment(p))?;
    let frag = &set.fragments[frag_idx];
    let last = frag.len() - 1;
    if pos == 0 || pos == last {
        let end = if pos == 0 { End::Head } else { End::Tail };
        let r = EndpointRef { fragment: frag.id, end };
        return Ok((set.clone(), r, r));
    }
    let fresh = set.fragments.iter().map(|f| f.id).max().unwrap_or(0) + 1;
    let mut fragments = set.fragments.clone();
    fragments[frag_idx] = Fragment { id: frag.id, pixels: frag.pixels[pos..].to_vec() };
    fragments.push(Fragment { id: fresh, pixels: frag.pixels[..=pos].to_vec() });
    Ok((
        FragmentSet::new(fragments, set.source),
        EndpointRef { fragment: fresh, end: End::Tail },
        EndpointRef { fragment: frag.id, end: End::Head },
    ))
}
