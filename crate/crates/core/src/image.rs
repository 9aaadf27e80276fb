use crate::{Error, Level, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_value(self) -> Level {
        match self {
            BitDepth::Eight => u8::MAX as Level,
            BitDepth::Sixteen => u16::MAX as Level,
        }
    }
}

/// Row-major greyscale raster with its origin at the top-left corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridImage {
    width: usize,
    height: usize,
    depth: BitDepth,
    values: Vec<Level>,
}

impl GridImage {
    pub fn new(width: usize, height: usize, depth: BitDepth, values: Vec<Level>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if values.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "expected {} values for a {width}x{height} image, got {}",
                width * height,
                values.len()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v > depth.max_value()) {
            return Err(Error::InvalidInput(format!(
                "value {v} exceeds the {depth:?} bit depth"
            )));
        }
        Ok(Self {
            width,
            height,
            depth,
            values,
        })
    }

    pub fn from_u8(width: usize, height: usize, values: &[u8]) -> Result<Self> {
        Self::new(
            width,
            height,
            BitDepth::Eight,
            values.iter().map(|&v| v as Level).collect(),
        )
    }

    pub fn from_u16(width: usize, height: usize, values: &[u16]) -> Result<Self> {
        Self::new(
            width,
            height,
            BitDepth::Sixteen,
            values.iter().map(|&v| v as Level).collect(),
        )
    }

    /// Builds an image from rows listed top to bottom.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        let values: Vec<u8> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_u8(width, rows.len(), &values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn depth(&self) -> BitDepth {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Level] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> Level {
        self.values[y * self.width + x]
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    /// In-image 4-neighbours of pixel `p`, in the order up, left, right, down.
    pub fn neighbors(&self, p: usize) -> impl Iterator<Item = usize> {
        grid_neighbors(self.width, self.height, p)
    }
}

pub(crate) fn grid_neighbors(w: usize, h: usize, p: usize) -> impl Iterator<Item = usize> {
    let (x, y) = (p % w, p / w);
    let up = (y > 0).then(|| p - w);
    let left = (x > 0).then(|| p - 1);
    let right = (x + 1 < w).then(|| p + 1);
    let down = (y + 1 < h).then(|| p + w);
    [up, left, right, down].into_iter().flatten()
}
