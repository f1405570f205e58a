//! Byte layout of a block-compressed frame.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "ANSC"
//! 4       1     version (1)
//! 5       4     block length ℓ            u32 LE
//! 9       4     minimum image length      u32 LE
//! 13      4     length field width, bits  u32 LE
//! 17      4     block count m             u32 LE
//! 21      4     tail length t             u32 LE
//! 25      ...   m blocks, then t raw source bytes
//! ```
//!
//! Each block is a length delta (image length minus the minimum) stored
//! little-endian in `ceil(bits / 8)` bytes, followed by that many image
//! symbols, one byte per destination alphabet index.

use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"ANSC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported frame version {0}")]
    UnsupportedVersion(u8),
    #[error("frame truncated at offset {0}")]
    Truncated(usize),
    #[error("{0} trailing bytes after frame")]
    TrailingBytes(usize),
    #[error("length field of {0} bits is wider than 32")]
    FieldTooWide(u32),
    #[error("frame field does not fit in 32 bits")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub block_len: u32,
    pub min_len: u32,
    pub len_field_bits: u32,
    /// Per block, the image word as destination alphabet indices.
    pub blocks: Vec<Vec<u8>>,
    /// Trailing source bytes that did not fill a block.
    pub tail: Vec<u8>,
}

fn delta_width(bits: u32) -> usize {
    bits.div_ceil(8) as usize
}

impl Frame {
    pub fn to_bytes(&self) -> Result<Vec<u8>, FrameError> {
        if self.len_field_bits > 32 {
            return Err(FrameError::FieldTooWide(self.len_field_bits));
        }
        let width = delta_width(self.len_field_bits);
        let u32_of = |n: usize| u32::try_from(n).map_err(|_| FrameError::Overflow);
        let mut out = Vec::with_capacity(
            HEADER_LEN + self.blocks.iter().map(|b| b.len() + width).sum::<usize>() + self.tail.len(),
        );
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        for field in [
            self.block_len,
            self.min_len,
            self.len_field_bits,
            u32_of(self.blocks.len())?,
            u32_of(self.tail.len())?,
        ] {
            out.extend_from_slice(&field.to_le_bytes());
        }
        for block in &self.blocks {
            let delta = u32_of(block.len())?
                .checked_sub(self.min_len)
                .ok_or(FrameError::Overflow)?;
            if self.len_field_bits < 32 && delta >> self.len_field_bits != 0 {
                return Err(FrameError::Overflow);
            }
            out.extend_from_slice(&delta.to_le_bytes()[..width]);
            out.extend_from_slice(block);
        }
        out.extend_from_slice(&self.tail);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Frame, FrameError> {
        let mut reader = Reader { bytes, pos: 0 };
        if reader.take(4)? != MAGIC {
            return Err(FrameError::BadMagic);
        }
        let version = reader.take(1)?[0];
        if version != VERSION {
            return Err(FrameError::UnsupportedVersion(version));
        }
        let block_len = reader.u32()?;
        let min_len = reader.u32()?;
        let len_field_bits = reader.u32()?;
        if len_field_bits > 32 {
            return Err(FrameError::FieldTooWide(len_field_bits));
        }
        let count = reader.u32()? as usize;
        let tail_len = reader.u32()? as usize;
        let width = delta_width(len_field_bits);
        let mut blocks = Vec::with_capacity(count.min(bytes.len()));
        for _ in 0..count {
            let mut delta = [0u8; 4];
            delta[..width].copy_from_slice(reader.take(width)?);
            let len = (min_len as u64 + u32::from_le_bytes(delta) as u64) as usize;
            blocks.push(reader.take(len)?.to_vec());
        }
        let tail = reader.take(tail_len)?.to_vec();
        if reader.pos != bytes.len() {
            return Err(FrameError::TrailingBytes(bytes.len() - reader.pos));
        }
        Ok(Frame {
            block_len,
            min_len,
            len_field_bits,
            blocks,
            tail,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FrameError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or(FrameError::Truncated(self.bytes.len()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, FrameError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}
