//! Edgel chain tracing.
//!
//! Junctions are edgels with three or more edgel 8-neighbors; they belong to
//! no fragment. Once they are removed every remaining edgel has at most two
//! neighbors, so the residual components are open chains or closed loops.

use std::collections::HashSet;

use super::{EdgeMap, Fragment, FragmentSet};
use crate::error::{Error, Result};
use crate::geometry::Pixel;

/// Traces maximal open chains between endpoints/junctions, breaks closed
/// loops at their smallest `(y, x)` pixel, and drops chains shorter than
/// `min_len`.
///
/// A broken loop starts and ends on the same pixel, giving the fragment two
/// coincident endpoints.
pub fn extract_fragments(map: &EdgeMap, min_len: usize) -> Result<FragmentSet> {
    if min_len < 2 {
        return Err(Error::InvalidParameter(format!("minimum fragment length must be >= 2, got {min_len}")));
    }
    let fragments = trace_chains(map)
        .into_iter()
        .filter(|c| c.len() >= min_len)
        .enumerate()
        .map(|(id, pixels)| Fragment { id, pixels })
        .collect();
    Ok(FragmentSet::new(fragments, (map.width(), map.height())))
}

pub(crate) fn is_junction(map: &EdgeMap, p: Pixel) -> bool {
    map.get(p) && map.neighbors8(p).count() >= 3
}

/// All chains, unfiltered, in discovery order.
pub(crate) fn trace_chains(map: &EdgeMap) -> Vec<Vec<Pixel>> {
    let residual: Vec<Pixel> = map.edgels().filter(|&p| !is_junction(map, p)).collect();
    let members: HashSet<Pixel> = residual.iter().copied().collect();
    let neighbors = |p: Pixel| map.neighbors8(p).filter(|q| members.contains(q)).collect::<Vec<_>>();

    let mut visited: HashSet<Pixel> = HashSet::with_capacity(residual.len());
    let mut chains = Vec::new();

    let walk = |start: Pixel, visited: &mut HashSet<Pixel>| {
        let mut chain = vec![start];
        visited.insert(start);
        let mut cur = start;
        while let Some(next) = neighbors(cur).into_iter().find(|q| !visited.contains(q)) {
            visited.insert(next);
            chain.push(next);
            cur = next;
        }
        chain
    };

    // Open chains start from residual endpoints, in raster order.
    for &p in &residual {
        if !visited.contains(&p) && neighbors(p).len() <= 1 {
            chains.push(walk(p, &mut visited));
        }
    }
    // Whatever is left lies on closed loops; raster order makes the first
    // unvisited pixel the loop's smallest.
    for &p in &residual {
        if !visited.contains(&p) {
            let mut chain = walk(p, &mut visited);
            if chain.len() > 2 && chain[chain.len() - 1].chebyshev(p) == 1 {
                chain.push(p);
            }
            chains.push(chain);
        }
    }
    chains
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn map_of(w: usize, h: usize, pixels: &[Pixel]) -> EdgeMap {
        EdgeMap::from_pixels(w, h, pixels).unwrap()
    }

    #[test]
    fn empty_map() {
        let set = extract_fragments(&EdgeMap::blank(4, 4).unwrap(), 5).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn straight_chain() {
        let px: Vec<_> = (0..20).map(|x| Pixel::new(x + 2, 3)).collect();
        let set = extract_fragments(&map_of(30, 8, &px), 5).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.fragments[0].pixels, px);
    }

    #[test]
    fn short_chain_removed() {
        let px: Vec<_> = (0..4).map(|x| Pixel::new(x, 0)).collect();
        assert!(extract_fragments(&map_of(10, 2, &px), 5).unwrap().is_empty());
    }

    #[test]
    fn plus_sign_excludes_junction_cluster() {
        // Two 21-pixel chains crossing at (10, 10). The center has 4 edgel
        // neighbors, and each of its 4-neighbors also touches 3 edgels from
        // the crossing chain diagonally, so 5 pixels are junctions and each
        // arm keeps 9 pixels.
        let mut px: Vec<_> = (0..21).map(|x| Pixel::new(x, 10)).collect();
        px.extend((0..21).filter(|&y| y != 10).map(|y| Pixel::new(10, y)));
        let map = map_of(21, 21, &px);
        let junctions: Vec<_> = map.edgels().filter(|&p| is_junction(&map, p)).collect();
        assert_eq!(junctions.len(), 5);
        let set = extract_fragments(&map, 5).unwrap();
        assert_eq!(set.len(), 4);
        assert!(set.fragments.iter().all(|f| f.len() == 9));
        assert!(set.pixels().all(|p| !junctions.contains(&p)));
    }

    #[test]
    fn closed_loop_breaks_at_smallest_pixel() {
        // Octagon where every pixel has exactly two 8-neighbors.
        let px: Vec<Pixel> = [(3, 2), (4, 2), (5, 2), (6, 3), (6, 4), (5, 5), (4, 5), (3, 5), (2, 4), (2, 3)]
            .iter()
            .map(|&(x, y)| Pixel::new(x, y))
            .collect();
        let set = extract_fragments(&map_of(10, 10, &px), 5).unwrap();
        assert_eq!(set.len(), 1);
        let f = &set.fragments[0];
        assert_eq!(f.head(), Pixel::new(3, 2));
        assert_eq!(f.tail(), Pixel::new(3, 2));
        assert_eq!(f.len(), px.len() + 1);
    }

    proptest! {
        #[test]
        fn chains_partition_non_junction_edgels(
            bits in proptest::collection::vec(any::<bool>(), 12 * 10),
        ) {
            let map = EdgeMap::new(12, 10, bits).unwrap();
            let chains = trace_chains(&map);
            let mut seen: HashSet<Pixel> = HashSet::new();
            for c in &chains {
                for w in c.windows(2) {
                    prop_assert_eq!(w[0].chebyshev(w[1]), 1);
                }
                let body = if c.len() > 2 && c[0] == c[c.len() - 1] { &c[..c.len() - 1] } else { &c[..] };
                for &p in body {
                    prop_assert!(seen.insert(p), "pixel {:?} in two chains", p);
                    prop_assert!(!is_junction(&map, p));
                }
            }
            let expected: HashSet<Pixel> =
                map.edgels().filter(|&p| !is_junction(&map, p)).collect();
            prop_assert_eq!(seen, expected);
        }
    }
}
