//! Compression by base conversion between two numeration systems, and
//! block-wise conversion over a factorial source language.

mod frame;

use std::thread;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use frame::{Frame, FrameError, HEADER_LEN, MAGIC, VERSION};

use crate::ans::{Ans, AnsError};
use crate::automata::{is_factorial, AlphabetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Ans(#[from] AnsError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("input is empty")]
    EmptyInput,
    #[error("block length must be positive")]
    InvalidBlockLength,
    #[error("source language is not factorial")]
    NonFactorial,
    #[error("block {block} leaves the source language at offset {offset}")]
    BlockNotInLanguage { block: usize, offset: usize },
    #[error("frame header {field} does not match the codec configuration")]
    HeaderMismatch { field: &'static str },
    #[error("block {block} is corrupt: {reason}")]
    CorruptBlock { block: usize, reason: &'static str },
    #[error("length does not fit in memory")]
    Overflow,
}

/// `w ↦ rep_dst(val_src(w))`.
#[derive(Debug, Clone)]
pub struct Converter {
    pub src: Ans,
    pub dst: Ans,
}

impl Converter {
    pub fn new(src: Ans, dst: Ans) -> Self {
        Self { src, dst }
    }

    /// The inverse conversion; shares both counting ladders.
    pub fn reversed(&self) -> Converter {
        Converter::new(self.dst.clone(), self.src.clone())
    }

    pub fn convert(&self, word: &[u8]) -> Result<Vec<u8>, CodecError> {
        Ok(self.dst.rep(&self.src.val(word)?))
    }

    /// Image length over input length. The image is measured, not built.
    pub fn measure_cr(&self, word: &[u8]) -> Result<f64, CodecError> {
        if word.is_empty() {
            return Err(CodecError::EmptyInput);
        }
        let image_len = self.dst.rep_len(&self.src.val(word)?);
        Ok(ratio(&image_len, word.len()))
    }

    /// Compression ratio of the radix-largest source word of length `n`.
    pub fn measure_cr_at(&self, n: usize) -> Result<f64, CodecError> {
        if n == 0 {
            return Err(CodecError::EmptyInput);
        }
        let cache = self.src.cache();
        if cache.count(n).is_zero() {
            return Err(AnsError::NoWordOfLength(n).into());
        }
        let rank = cache.cum_count(n as i64) - 1u32;
        Ok(ratio(&self.dst.rep_len(&rank), n))
    }
}

fn ratio(len: &BigUint, over: usize) -> f64 {
    len.to_f64().unwrap_or(f64::INFINITY) / over as f64
}

/// Parameters shared by block compression and decompression.
#[derive(Debug, Clone)]
pub struct BlockCodecConfig {
    pub block_len: usize,
    /// Numeration system over a factorial language.
    pub src: Ans,
    pub dst: Ans,
    /// Shortest and longest image of a length-`block_len` source word.
    pub min_len: usize,
    pub max_len: usize,
    pub len_field_bits: u32,
}

impl BlockCodecConfig {
    /// Image lengths of the extreme ranks of length-`block_len` words bound
    /// every block image, since ranks of one length are contiguous and
    /// `rep` is monotone in length.
    pub fn new(src: Ans, dst: Ans, block_len: usize) -> Result<Self, CodecError> {
        if block_len == 0 {
            return Err(CodecError::InvalidBlockLength);
        }
        if !is_factorial(src.dfa()) {
            return Err(CodecError::NonFactorial);
        }
        let cache = src.cache();
        if cache.count(block_len).is_zero() {
            return Err(AnsError::NoWordOfLength(block_len).into());
        }
        let first = cache.cum_count(block_len as i64 - 1);
        let last = cache.cum_count(block_len as i64) - 1u32;
        let to_usize = |n: BigUint| n.to_usize().ok_or(CodecError::Overflow);
        let min_len = to_usize(dst.rep_len(&first))?;
        let max_len = to_usize(dst.rep_len(&last))?;
        let span = max_len - min_len;
        let len_field_bits = usize::BITS - span.leading_zeros();
        Ok(Self {
            block_len,
            src,
            dst,
            min_len,
            max_len,
            len_field_bits,
        })
    }

    fn converter(&self) -> Converter {
        Converter::new(self.src.clone(), self.dst.clone())
    }

    /// Output size in destination symbols per input symbol: image symbols,
    /// length fields converted from bits at `log2 |A'|` bits per symbol, and
    /// the raw tail.
    pub fn frame_cr(&self, frame: &Frame, input_len: usize) -> f64 {
        let images: usize = frame.blocks.iter().map(Vec::len).sum();
        let field_bits = frame.blocks.len() as f64 * self.len_field_bits as f64;
        let fields = if field_bits == 0.0 {
            0.0
        } else {
            field_bits / (self.dst.alphabet().len() as f64).log2()
        };
        (images as f64 + fields + frame.tail.len() as f64) / input_len as f64
    }
}

fn parallel_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let jobs = jobs.max(1);
    if jobs == 1 || items.len() < 2 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                let f = &f;
                scope.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(i, t)| f(c * chunk + i, t))
                        .collect::<Vec<R>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("codec worker panicked"))
            .collect()
    })
}

pub fn block_compress(cfg: &BlockCodecConfig, input: &[u8]) -> Result<Frame, CodecError> {
    block_compress_with_jobs(cfg, input, 1)
}

/// Splits `input` into `⌊|w|/ℓ⌋` blocks plus a raw tail and converts every
/// block. All blocks are validated before any conversion happens.
pub fn block_compress_with_jobs(cfg: &BlockCodecConfig, input: &[u8], jobs: usize) -> Result<Frame, CodecError> {
    let symbols = cfg.src.alphabet().encode(input)?;
    let dfa = cfg.src.dfa();
    let ell = cfg.block_len;
    for (block, chunk) in symbols.chunks(ell).enumerate() {
        let mut q = dfa.initial().expect("non-empty language");
        for (i, &s) in chunk.iter().enumerate() {
            q = dfa.next(q, s).ok_or(CodecError::BlockNotInLanguage {
                block,
                offset: block * ell + i,
            })?;
        }
        if !dfa.is_accepting(q) {
            return Err(CodecError::BlockNotInLanguage {
                block,
                offset: block * ell + chunk.len(),
            });
        }
    }

    let full = input.len() / ell * ell;
    let blocks: Vec<&[u8]> = input[..full].chunks(ell).collect();
    let converter = cfg.converter();
    let dst_alphabet = cfg.dst.alphabet();
    let images = parallel_map(&blocks, jobs, |_, block| -> Result<Vec<u8>, CodecError> {
        let image = converter.convert(block)?;
        Ok(image
            .iter()
            .map(|&b| dst_alphabet.index_of(b).expect("image symbols come from the alphabet") as u8)
            .collect())
    });
    let to_u32 = |n: usize| u32::try_from(n).map_err(|_| CodecError::Overflow);
    Ok(Frame {
        block_len: to_u32(ell)?,
        min_len: to_u32(cfg.min_len)?,
        len_field_bits: cfg.len_field_bits,
        blocks: images.into_iter().collect::<Result<_, _>>()?,
        tail: input[full..].to_vec(),
    })
}

pub fn block_decompress(cfg: &BlockCodecConfig, frame: &Frame) -> Result<Vec<u8>, CodecError> {
    block_decompress_with_jobs(cfg, frame, 1)
}

pub fn block_decompress_with_jobs(cfg: &BlockCodecConfig, frame: &Frame, jobs: usize) -> Result<Vec<u8>, CodecError> {
    if frame.block_len as usize != cfg.block_len {
        return Err(CodecError::HeaderMismatch { field: "block length" });
    }
    if frame.min_len as usize != cfg.min_len {
        return Err(CodecError::HeaderMismatch { field: "minimum length" });
    }
    if frame.len_field_bits != cfg.len_field_bits {
        return Err(CodecError::HeaderMismatch { field: "length field width" });
    }
    if frame.tail.len() >= cfg.block_len {
        return Err(CodecError::HeaderMismatch { field: "tail length" });
    }
    let dst_alphabet = cfg.dst.alphabet();
    let inverse = cfg.converter().reversed();
    let decoded = parallel_map(&frame.blocks, jobs, |block, indices| -> Result<Vec<u8>, CodecError> {
        if indices.len() < cfg.min_len || indices.len() > cfg.max_len {
            return Err(CodecError::CorruptBlock { block, reason: "image length out of range" });
        }
        if indices.iter().any(|&i| i as usize >= dst_alphabet.len()) {
            return Err(CodecError::CorruptBlock { block, reason: "symbol index out of range" });
        }
        let image: Vec<usize> = indices.iter().map(|&i| i as usize).collect();
        let image = dst_alphabet.decode(&image);
        let word = inverse
            .convert(&image)
            .map_err(|_| CodecError::CorruptBlock { block, reason: "image is not in the destination language" })?;
        if word.len() != cfg.block_len {
            return Err(CodecError::CorruptBlock { block, reason: "image decodes to the wrong block length" });
        }
        Ok(word)
    });
    let mut out = Vec::with_capacity(frame.blocks.len() * cfg.block_len + frame.tail.len());
    for word in decoded {
        out.extend_from_slice(&word?);
    }
    let tail_ok = cfg
        .src
        .alphabet()
        .encode(&frame.tail)
        .ok()
        .and_then(|s| cfg.src.dfa().run(&s))
        .is_some_and(|q| cfg.src.dfa().is_accepting(q));
    if !tail_ok {
        return Err(CodecError::CorruptBlock {
            block: frame.blocks.len(),
            reason: "tail is not in the source language",
        });
    }
    out.extend_from_slice(&frame.tail);
    Ok(out)
}
