use core::fmt;
use core::str::FromStr;

use crate::Error;

/// How fragment positions are grouped into blocks around an anchor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BlockLayout {
    /// Blocks of `c > 1` positions each.
    Fixed(usize),
    /// Blocks of 1, 3, 5, ... positions outward from the anchor on each side.
    #[default]
    Progressing,
}

impl fmt::Display for BlockLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLayout::Fixed(c) => write!(f, "fixed:{c}"),
            BlockLayout::Progressing => f.write_str("progressing"),
        }
    }
}

impl FromStr for BlockLayout {
    type Err = Error;

    /// Parses `fixed:<c>` or `progressing`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        const MSG: &str = "block scheme must be `fixed:<c>` with c > 1, or `progressing`";
        if s == "progressing" {
            return Ok(BlockLayout::Progressing);
        }
        let c = s
            .strip_prefix("fixed:")
            .and_then(|c| c.parse::<usize>().ok())
            .ok_or(Error::InvalidParameter(MSG))?;
        if c < 2 {
            return Err(Error::InvalidParameter(MSG));
        }
        Ok(BlockLayout::Fixed(c))
    }
}

/// A [`BlockLayout`] pinned at an anchor position.
///
/// Block indices are signed: blocks `κ ≥ 0` lie at or right of the anchor,
/// blocks `κ < 0` left of it, and block `κ` is adjacent to `κ ± 1`. Every
/// position belongs to exactly one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockScheme {
    pub layout: BlockLayout,
    pub anchor: i64,
}

impl BlockScheme {
    pub fn new(layout: BlockLayout, anchor: i64) -> Self {
        BlockScheme { layout, anchor }
    }

    /// Index of the block containing `pos`.
    pub fn block_of(&self, pos: i64) -> i64 {
        let d = pos - self.anchor;
        match self.layout {
            BlockLayout::Fixed(c) => d.div_euclid(c as i64),
            BlockLayout::Progressing if d >= 0 => (d as u64).isqrt() as i64,
            BlockLayout::Progressing => -(((-d - 1) as u64).isqrt() as i64) - 1,
        }
    }

    /// Inclusive position range of block `index`.
    pub fn range(&self, index: i64) -> (i64, i64) {
        let x = self.anchor;
        match self.layout {
            BlockLayout::Fixed(c) => {
                let c = c as i64;
                (x + index * c, x + (index + 1) * c - 1)
            }
            BlockLayout::Progressing if index >= 0 => {
                (x + index * index, x + (index + 1) * (index + 1) - 1)
            }
            BlockLayout::Progressing => {
                let j = -index - 1;
                (x - (j + 1) * (j + 1), x - j * j - 1)
            }
        }
    }

    /// Number of positions in block `index`.
    pub fn len(&self, index: i64) -> usize {
        let (lo, hi) = self.range(index);
        (hi - lo + 1) as usize
    }
}
