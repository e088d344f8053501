//! Binary cache files for solved spaces.
//!
//! Layout (all integers little-endian):
//!
//! | bytes | field                                   |
//! |-------|-----------------------------------------|
//! | 7     | magic `DUKEGO\0`                        |
//! | 2     | format version                          |
//! | 1+1   | rows, cols                              |
//! | 1+1   | white budget, black budget              |
//! | 8     | indexed state count                     |
//! | 1     | flags (bit 0: distance array present)   |
//! | ⌈n/4⌉ | labels, 2 bits per state, low bits first|
//! | 2n    | distances (optional)                    |
//! | 8     | FNV-1a 64 checksum of everything above  |

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::index::StateIndexer;
use super::{SolveError, SolveResult};
use crate::geometry::Dims;

pub const CACHE_VERSION: u16 = 1;
const MAGIC: &[u8; 7] = b"DUKEGO\0";
const HEADER_LEN: usize = 7 + 2 + 4 + 8 + 1;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn write_cache(res: &SolveResult, mut out: impl Write) -> Result<(), SolveError> {
    let (w, b) = res.budgets();
    let dims = res.dims();
    let mut buf = Vec::with_capacity(HEADER_LEN + res.packed_labels().len() + 8);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&[dims.rows, dims.cols, w, b]);
    buf.extend_from_slice(&res.total_states().to_le_bytes());
    buf.push(res.distances().is_some() as u8);
    buf.extend_from_slice(res.packed_labels());
    if let Some(d) = res.distances() {
        buf.reserve(d.len() * 2);
        for v in d {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let sum = fnv1a(&buf);
    buf.extend_from_slice(&sum.to_le_bytes());
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

pub fn read_cache(mut input: impl Read) -> Result<SolveResult, SolveError> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf)?;
    let bad = |m: &str| SolveError::Cache(m.to_string());
    if buf.len() < 9 || &buf[..7] != MAGIC {
        return Err(bad("not a solver cache file (bad magic)"));
    }
    let version = u16::from_le_bytes([buf[7], buf[8]]);
    if version != CACHE_VERSION {
        return Err(SolveError::Cache(format!(
            "cache format version {version} is not supported by this reader (expects {CACHE_VERSION})"
        )));
    }
    if buf.len() < HEADER_LEN + 8 {
        return Err(bad("checksum mismatch (file truncated)"));
    }
    let (body, tail) = buf.split_at(buf.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    if fnv1a(body) != stored {
        return Err(bad("checksum mismatch"));
    }
    let dims = Dims::new(body[9], body[10]).map_err(SolveError::Rule)?;
    let (w, b) = (body[11], body[12]);
    let count = u64::from_le_bytes(body[13..21].try_into().unwrap());
    let has_dist = body[21] & 1 == 1;
    let ix = StateIndexer::new(dims, w, b);
    if ix.total_states() != count {
        return Err(bad("state count does not match the header's space"));
    }
    let label_len = (count as usize).div_ceil(4);
    let expect = HEADER_LEN + label_len + if has_dist { 2 * count as usize } else { 0 };
    if body.len() != expect {
        return Err(bad("payload length does not match the header"));
    }
    let labels = body[HEADER_LEN..HEADER_LEN + label_len].to_vec();
    let distances = has_dist.then(|| {
        body[HEADER_LEN + label_len..]
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]))
            .collect()
    });
    Ok(SolveResult::from_parts(ix, labels, distances))
}

pub fn save_cache(res: &SolveResult, path: impl AsRef<Path>) -> Result<(), SolveError> {
    let file = fs::File::create(path)?;
    write_cache(res, std::io::BufWriter::new(file))
}

pub fn load_cache(path: impl AsRef<Path>) -> Result<SolveResult, SolveError> {
    read_cache(std::io::BufReader::new(fs::File::open(path)?))
}
