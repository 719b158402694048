//! Bit-exact binary container for share sets and raw message files.
//!
//! Share container layout:
//!   magic `"SMDC"` (4 bytes), version `0x01`, scheme byte,
//!   `p` as 8-byte little-endian, `L` as one byte,
//!   `m` and `N` as length-prefixed byte arrays (one length byte, then one
//!   byte per level), then per encoder: a 4-byte little-endian symbol
//!   count followed by the symbols as minimal-width little-endian
//!   integers (width = bytes needed for `p - 1`).
//!
//! Message files are a single JSON header line `{"p": .., "m": [..]}`
//! followed by the raw message symbols of every level, in level order,
//! with the same symbol width.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{Scheme, ShareSet, SmdcCode};

pub const MAGIC: [u8; 4] = *b"SMDC";
pub const VERSION: u8 = 0x01;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("bad magic: expected \"SMDC\"")]
    BadMagic,
    #[error("unsupported version {0:#04x}")]
    BadVersion(u8),
    #[error("truncated input: {0}")]
    Truncated(&'static str),
    #[error("field does not fit the wire format: {0}")]
    Unrepresentable(String),
    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("bad symbol {value} for modulus {p}")]
    BadSymbol { value: u64, p: u64 },
    #[error("bad message header: {0}")]
    BadMessageHeader(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Bytes per symbol: enough little-endian bytes to hold `p - 1`.
pub fn symbol_width(p: u64) -> usize {
    let bits = 64 - (p - 1).leading_zeros().min(63);
    (bits as usize).div_ceil(8)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareHeader {
    pub scheme_byte: u8,
    pub p: u64,
    pub m: Vec<u64>,
    pub n: Vec<usize>,
}

fn push_symbol(out: &mut Vec<u8>, value: u64, width: usize) {
    out.extend_from_slice(&value.to_le_bytes()[..width]);
}

fn read_exact<'a>(
    input: &mut &'a [u8],
    len: usize,
    what: &'static str,
) -> Result<&'a [u8], WireError> {
    if input.len() < len {
        return Err(WireError::Truncated(what));
    }
    let (head, tail) = input.split_at(len);
    *input = tail;
    Ok(head)
}

fn read_symbol(input: &mut &[u8], width: usize, p: u64) -> Result<u64, WireError> {
    let raw = read_exact(input, width, "symbol")?;
    let mut buf = [0u8; 8];
    buf[..width].copy_from_slice(raw);
    let value = u64::from_le_bytes(buf);
    if value >= p {
        return Err(WireError::BadSymbol { value, p });
    }
    Ok(value)
}

/// Serialize a share set produced by `code`.
pub fn encode_shares(code: &SmdcCode, shares: &ShareSet) -> Result<Vec<u8>, WireError> {
    let l = code.levels();
    if l > 255 {
        return Err(WireError::Unrepresentable("more than 255 levels".into()));
    }
    for &m in &code.scaled_m {
        if m > 255 {
            return Err(WireError::Unrepresentable(format!(
                "message size {m} exceeds one byte"
            )));
        }
    }
    let width = symbol_width(code.spec.p);
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(code.scheme.id_byte());
    out.extend_from_slice(&code.spec.p.to_le_bytes());
    out.push(l as u8);
    out.push(l as u8);
    out.extend(code.scaled_m.iter().map(|&m| m as u8));
    out.push(l as u8);
    out.extend(code.spec.n.iter().map(|&n| n as u8));
    for (enc, share) in shares.shares.iter().enumerate() {
        if share.len() != code.rates[enc] {
            return Err(WireError::HeaderMismatch(format!(
                "encoder {} share length {} does not match rate {}",
                enc + 1,
                share.len(),
                code.rates[enc]
            )));
        }
        out.extend_from_slice(&(share.len() as u32).to_le_bytes());
        for &v in share {
            push_symbol(&mut out, v, width);
        }
    }
    Ok(out)
}

/// Parse a share container. The code is needed to know how many encoders
/// to expect; header fields are checked against it.
pub fn decode_shares(
    code: &SmdcCode,
    mut input: &[u8],
) -> Result<(ShareHeader, ShareSet), WireError> {
    let magic = read_exact(&mut input, 4, "magic")?;
    if magic != MAGIC {
        return Err(WireError::BadMagic);
    }
    let version = read_exact(&mut input, 1, "version")?[0];
    if version != VERSION {
        return Err(WireError::BadVersion(version));
    }
    let scheme_byte = read_exact(&mut input, 1, "scheme")?[0];
    let mut pbuf = [0u8; 8];
    pbuf.copy_from_slice(read_exact(&mut input, 8, "modulus")?);
    let p = u64::from_le_bytes(pbuf);
    let l = read_exact(&mut input, 1, "level count")?[0] as usize;
    let mlen = read_exact(&mut input, 1, "message sizes length")?[0] as usize;
    let m: Vec<u64> = read_exact(&mut input, mlen, "message sizes")?
        .iter()
        .map(|&b| b as u64)
        .collect();
    let nlen = read_exact(&mut input, 1, "security profile length")?[0] as usize;
    let n: Vec<usize> = read_exact(&mut input, nlen, "security profile")?
        .iter()
        .map(|&b| b as usize)
        .collect();
    let header = ShareHeader {
        scheme_byte,
        p,
        m,
        n,
    };

    if p != code.spec.p {
        return Err(WireError::HeaderMismatch(format!(
            "modulus {} in file, {} in descriptor",
            p, code.spec.p
        )));
    }
    if l != code.levels() || header.m != code.scaled_m || header.n != code.spec.n {
        return Err(WireError::HeaderMismatch(
            "level layout does not match the descriptor".into(),
        ));
    }
    if scheme_byte != code.scheme.id_byte() {
        return Err(WireError::HeaderMismatch(format!(
            "scheme byte {} in file, {} in descriptor",
            scheme_byte,
            code.scheme.id_byte()
        )));
    }
    let width = symbol_width(p);
    let mut shares = Vec::with_capacity(l);
    for _ in 0..l {
        let mut cbuf = [0u8; 4];
        cbuf.copy_from_slice(read_exact(&mut input, 4, "symbol count")?);
        let count = u32::from_le_bytes(cbuf) as usize;
        let mut share = Vec::with_capacity(count);
        for _ in 0..count {
            share.push(read_symbol(&mut input, width, p)?);
        }
        shares.push(share);
    }
    if !input.is_empty() {
        return Err(WireError::HeaderMismatch("trailing bytes".into()));
    }
    Ok((header, ShareSet { shares }))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MessageHeader {
    pub p: u64,
    pub m: Vec<u64>,
}

/// Write a message file: one JSON header line, then raw symbols.
pub fn encode_messages(p: u64, messages: &[Vec<u64>]) -> Result<Vec<u8>, WireError> {
    let header = MessageHeader {
        p,
        m: messages.iter().map(|v| v.len() as u64).collect(),
    };
    let mut out =
        serde_json::to_vec(&header).map_err(|e| WireError::BadMessageHeader(e.to_string()))?;
    out.push(b'\n');
    let width = symbol_width(p);
    for msg in messages {
        for &v in msg {
            if v >= p {
                return Err(WireError::BadSymbol { value: v, p });
            }
            push_symbol(&mut out, v, width);
        }
    }
    Ok(out)
}

/// Read a message file back into per-level symbol vectors.
pub fn decode_messages(input: &[u8]) -> Result<(MessageHeader, Vec<Vec<u64>>), WireError> {
    let newline = input
        .iter()
        .position(|&b| b == b'\n')
        .ok_or(WireError::Truncated("message header line"))?;
    let header: MessageHeader = serde_json::from_slice(&input[..newline])
        .map_err(|e| WireError::BadMessageHeader(e.to_string()))?;
    let mut rest = &input[newline + 1..];
    let width = symbol_width(header.p);
    let mut messages = Vec::with_capacity(header.m.len());
    for &len in &header.m {
        let mut msg = Vec::with_capacity(len as usize);
        for _ in 0..len {
            msg.push(read_symbol(&mut rest, width, header.p)?);
        }
        messages.push(msg);
    }
    if !rest.is_empty() {
        return Err(WireError::HeaderMismatch("trailing bytes".into()));
    }
    Ok((header, messages))
}

/// Scheme byte assignments of the container format.
pub fn scheme_from_byte(b: u8) -> Option<&'static str> {
    match b {
        0 => Some("superposition"),
        1 => Some("pairwise-a"),
        2 => Some("pairwise-b"),
        3 => Some("group-pairwise"),
        _ => None,
    }
}

pub fn scheme_byte(scheme: &Scheme) -> u8 {
    scheme.id_byte()
}
