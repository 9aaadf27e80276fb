//! Greyscale raster files: PGM (ASCII `P2` and binary `P5`) and 8/16-bit
//! greyscale PNG. PGM samples are read as stored, without rescaling by
//! `maxval`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Cursor, Write};
use std::path::Path;

use crate::image::{BitDepth, GridImage};
use crate::{Error, Level, Result};

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

pub fn read_raster(path: impl AsRef<Path>) -> Result<GridImage> {
    let bytes = std::fs::read(path)?;
    decode_raster(&bytes)
}

/// Decodes PGM or PNG bytes, sniffing the format from the magic number.
pub fn decode_raster(bytes: &[u8]) -> Result<GridImage> {
    if bytes.starts_with(PNG_SIGNATURE) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else {
        Err(Error::Format("unrecognised raster format (expected PGM or PNG)".into()))
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format("unexpected end of PGM data".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| Error::Format("non-ASCII PGM token".into()))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        tok.parse().map_err(|_| Error::Format(format!("bad {what} {tok:?}")))
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<GridImage> {
    let mut h = Header { bytes, pos: 0 };
    let magic = h.token()?;
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval == 0 || maxval > u16::MAX as usize {
        return Err(Error::Format(format!("maxval {maxval} out of range")));
    }
    let depth = if maxval <= u8::MAX as usize {
        BitDepth::Eight
    } else {
        BitDepth::Sixteen
    };
    let count = width * height;
    let values: Vec<Level> = if magic == "P2" {
        (0..count)
            .map(|_| h.number("sample").map(|v| v as Level))
            .collect::<Result<_>>()?
    } else {
        // exactly one whitespace byte separates the header from the samples
        let data = bytes.get(h.pos + 1..).unwrap_or_default();
        let sample = if depth == BitDepth::Eight { 1 } else { 2 };
        if data.len() < count * sample {
            return Err(Error::Format("truncated P5 data".into()));
        }
        if sample == 1 {
            data[..count].iter().map(|&b| b as Level).collect()
        } else {
            data[..2 * count]
                .chunks_exact(2)
                .map(|c| u16::from_be_bytes([c[0], c[1]]) as Level)
                .collect()
        }
    };
    if let Some(v) = values.iter().find(|&&v| v as usize > maxval) {
        return Err(Error::Format(format!("sample {v} exceeds maxval {maxval}")));
    }
    GridImage::new(width, height, depth, values).map_err(|e| Error::Format(e.to_string()))
}

fn decode_png(bytes: &[u8]) -> Result<GridImage> {
    let decoder = png::Decoder::new(BufReader::new(Cursor::new(bytes)));
    let mut reader = decoder.read_info().map_err(|e| Error::Format(e.to_string()))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Format("PNG too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(|e| Error::Format(e.to_string()))?;
    if info.color_type != png::ColorType::Grayscale {
        return Err(Error::Format(format!(
            "expected a greyscale PNG, got {:?}",
            info.color_type
        )));
    }
    let (w, h) = (info.width as usize, info.height as usize);
    let buf = &buf[..info.buffer_size()];
    let (depth, values): (BitDepth, Vec<Level>) = match info.bit_depth {
        png::BitDepth::Eight => (
            BitDepth::Eight,
            buf.chunks_exact(info.line_size)
                .flat_map(|row| row[..w].iter().map(|&b| b as Level))
                .collect(),
        ),
        png::BitDepth::Sixteen => (
            BitDepth::Sixteen,
            buf.chunks_exact(info.line_size)
                .flat_map(|row| {
                    row[..2 * w]
                        .chunks_exact(2)
                        .map(|c| u16::from_be_bytes([c[0], c[1]]) as Level)
                })
                .collect(),
        ),
        other => return Err(Error::Format(format!("unsupported PNG bit depth {other:?}"))),
    };
    GridImage::new(w, h, depth, values).map_err(|e| Error::Format(e.to_string()))
}

/// Binary 16-bit PGM (`P5`, maxval 65535, big-endian samples).
pub fn encode_pgm16(width: usize, height: usize, samples: &[u16]) -> Vec<u8> {
    assert_eq!(samples.len(), width * height, "sample count must match dimensions");
    let mut out = format!("P5\n{width} {height}\n65535\n").into_bytes();
    out.reserve(samples.len() * 2);
    for s in samples {
        out.extend_from_slice(&s.to_be_bytes());
    }
    out
}

pub fn write_pgm16(path: impl AsRef<Path>, width: usize, height: usize, samples: &[u16]) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(&encode_pgm16(width, height, samples))?;
    f.flush()?;
    Ok(())
}

/// ASCII PGM with optional leading comment lines, as used for fixtures.
pub fn encode_pgm_ascii(image: &GridImage, comments: &[&str]) -> String {
    let mut out = String::from("P2\n");
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    let maxval = image.values().iter().copied().max().unwrap_or(0).max(1);
    out.push_str(&format!("{} {}\n{maxval}\n", image.width(), image.height()));
    for row in image.values().chunks(image.width()) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Greyscale PNG of the given bit depth.
pub fn encode_png(image: &GridImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, image.width() as u32, image.height() as u32);
        enc.set_color(png::ColorType::Grayscale);
        let data: Vec<u8> = match image.depth() {
            BitDepth::Eight => {
                enc.set_depth(png::BitDepth::Eight);
                image.values().iter().map(|&v| v as u8).collect()
            }
            BitDepth::Sixteen => {
                enc.set_depth(png::BitDepth::Sixteen);
                image.values().iter().flat_map(|&v| (v as u16).to_be_bytes()).collect()
            }
        };
        let mut writer = enc.write_header().map_err(|e| Error::Format(e.to_string()))?;
        writer
            .write_image_data(&data)
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    Ok(out)
}
