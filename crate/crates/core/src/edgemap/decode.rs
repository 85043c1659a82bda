//! PGM (P4/P5) and PNG decoding into edge maps and grayscale rasters.

use std::io::Cursor;

use image::{GrayImage, ImageFormat, Luma};

use super::EdgeMap;
use crate::error::{Error, Result};

/// Decoded grayscale samples before any thresholding.
struct Samples {
    width: usize,
    height: usize,
    values: Vec<u16>,
    max: u16,
}

/// Decodes an edge map; any nonzero sample is an edgel.
pub fn load_edge_map(bytes: &[u8]) -> Result<EdgeMap> {
    let s = decode_samples(bytes)?;
    EdgeMap::new(s.width, s.height, s.values.iter().map(|&v| v > 0).collect())
}

/// Decodes a grayscale image, rescaling 16-bit PGM samples to 8 bits.
pub fn load_grayscale(bytes: &[u8]) -> Result<GrayImage> {
    let s = decode_samples(bytes)?;
    let scale = 255.0 / f64::from(s.max.max(1));
    let data = s.values.iter().map(|&v| (f64::from(v) * scale).round().min(255.0) as u8).collect();
    GrayImage::from_raw(s.width as u32, s.height as u32, data)
        .ok_or_else(|| Error::Decode { offset: 0, message: "raster size mismatch".into() })
}

/// Binary P5 encoding of an edge map: 255 for edgels, 0 elsewhere.
pub fn encode_pgm(map: &EdgeMap) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", map.width(), map.height()).into_bytes();
    out.extend(map.mask().iter().map(|&b| if b { 255u8 } else { 0 }));
    out
}

/// PNG rendering of an edge map, edgels white on black.
pub fn encode_png(map: &EdgeMap) -> Result<Vec<u8>> {
    let img = GrayImage::from_fn(map.width() as u32, map.height() as u32, |x, y| {
        let on = map.mask()[y as usize * map.width() + x as usize];
        Luma([if on { 255 } else { 0 }])
    });
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png)
        .map_err(|e| Error::Decode { offset: 0, message: format!("png encode failed: {e}") })?;
    Ok(buf.into_inner())
}

fn decode_samples(bytes: &[u8]) -> Result<Samples> {
    match bytes {
        [b'P', b'4', ..] | [b'P', b'5', ..] => decode_pgm(bytes),
        [0x89, b'P', b'N', b'G', ..] => decode_png(bytes),
        _ => Err(Error::Decode { offset: 0, message: "unrecognized image signature (expected P4, P5 or PNG)".into() }),
    }
}

fn decode_png(bytes: &[u8]) -> Result<Samples> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| Error::Decode { offset: 0, message: format!("png: {e}") })?;
    let gray = img.to_luma16();
    let (w, h) = gray.dimensions();
    Ok(Samples { width: w as usize, height: h as usize, values: gray.into_raw(), max: u16::MAX })
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Decode { offset: self.pos, message: message.into() }
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Decode { offset: start, message: format!("bad {what}") })
    }

    fn single_whitespace(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err("expected whitespace before raster data")),
        }
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<Samples> {
    let bitmap = bytes[1] == b'4';
    let mut r = HeaderReader { bytes, pos: 2 };
    let width = r.number("width")?;
    let height = r.number("height")?;
    if width == 0 || height == 0 {
        return Err(r.err("zero image dimension"));
    }
    let max = if bitmap {
        1
    } else {
        let m = r.number("maxval")?;
        if m == 0 || m > 65535 {
            return Err(r.err(format!("maxval {m} out of range")));
        }
        m
    };
    r.single_whitespace()?;
    let data = &bytes[r.pos..];
    let values = if bitmap {
        let row_bytes = width.div_ceil(8);
        let need = row_bytes * height;
        if data.len() < need {
            return Err(Error::Decode {
                offset: bytes.len(),
                message: format!("truncated raster: need {need} bytes, have {}", data.len()),
            });
        }
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            let row = &data[y * row_bytes..(y + 1) * row_bytes];
            values.extend((0..width).map(|x| u16::from((row[x / 8] >> (7 - x % 8)) & 1)));
        }
        values
    } else {
        let wide = max > 255;
        let per = if wide { 2 } else { 1 };
        let need = width * height * per;
        if data.len() < need {
            return Err(Error::Decode {
                offset: bytes.len(),
                message: format!("truncated raster: need {need} bytes, have {}", data.len()),
            });
        }
        if wide {
            data[..need].chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
        } else {
            data[..need].iter().map(|&b| u16::from(b)).collect()
        }
    };
    Ok(Samples { width, height, values, max: max as u16 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Pixel;

    #[test]
    fn all_zero_pgm() {
        let mut bytes = b"P5\n3 3\n255\n".to_vec();
        bytes.extend([0u8; 9]);
        let map = load_edge_map(&bytes).unwrap();
        assert_eq!((map.width(), map.height()), (3, 3));
        assert_eq!(map.edgel_count(), 0);
    }

    #[test]
    fn center_pixel_pgm_with_comment() {
        let mut bytes = b"P5\n# made by hand\n3 3\n255\n".to_vec();
        bytes.extend([0, 0, 0, 0, 255, 0, 0, 0, 0]);
        let map = load_edge_map(&bytes).unwrap();
        assert_eq!(map.edgels().collect::<Vec<_>>(), vec![Pixel::new(1, 1)]);
    }

    #[test]
    fn truncated_header_reports_offset() {
        match load_edge_map(b"P5\n3") {
            Err(Error::Decode { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected decode error, got {other:?}"),
        }
    }

    #[test]
    fn truncated_raster() {
        let mut bytes = b"P5 3 3 255 ".to_vec();
        bytes.extend([0u8; 5]);
        assert!(matches!(load_edge_map(&bytes), Err(Error::Decode { .. })));
    }

    #[test]
    fn pbm_bits() {
        // 10 wide: two bytes per row, first and last columns set.
        let mut bytes = b"P4\n10 1\n".to_vec();
        bytes.extend([0b1000_0000, 0b0100_0000]);
        let map = load_edge_map(&bytes).unwrap();
        assert_eq!(map.edgels().collect::<Vec<_>>(), vec![Pixel::new(0, 0), Pixel::new(9, 0)]);
    }

    #[test]
    fn sixteen_bit_samples() {
        let mut bytes = b"P5 2 1 1000\n".to_vec();
        bytes.extend([0, 0, 0, 1]);
        let map = load_edge_map(&bytes).unwrap();
        assert_eq!(map.edgels().collect::<Vec<_>>(), vec![Pixel::new(1, 0)]);
    }

    #[test]
    fn pgm_and_png_round_trip() {
        let map = EdgeMap::from_pixels(5, 4, &[Pixel::new(1, 2), Pixel::new(4, 3)]).unwrap();
        assert_eq!(load_edge_map(&encode_pgm(&map)).unwrap(), map);
        assert_eq!(load_edge_map(&encode_png(&map).unwrap()).unwrap(), map);
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(matches!(load_edge_map(b"hello"), Err(Error::Decode { offset: 0, .. })));
        assert!(load_edge_map(b"\x89PNG\r\n\x1a\nbroken").is_err());
    }
}
