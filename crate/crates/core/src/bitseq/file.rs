//! Bit-sequence text format: a `#pseudodice-bits source=<…> count=<n>` header
//! followed by `0`/`1` characters, 80 per line.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{BitSequence, BitSource};
use crate::error::{Error, Result};

const MAGIC: &str = "#pseudodice-bits";
const LINE_WIDTH: usize = 80;

pub fn save_bit_file(bits: &BitSequence, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::with_capacity(bits.len() + bits.len() / LINE_WIDTH + 100);
    writeln!(out, "{MAGIC} source={} count={}", bits.source(), bits.len()).expect("write to Vec");
    for line in bits.bits().chunks(LINE_WIDTH) {
        out.extend(line.iter().map(|b| b + b'0'));
        out.push(b'\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn load_bit_file(path: impl AsRef<Path>) -> Result<BitSequence> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_bit_file(&bytes)
}

fn parse_bit_file(bytes: &[u8]) -> Result<BitSequence> {
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::format(0, "missing header line"))?;
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| Error::format(0, "header is not UTF-8"))?;
    let mut fields = header.split_ascii_whitespace();
    if fields.next() != Some(MAGIC) {
        return Err(Error::format(0, format!("header must start with `{MAGIC}`")));
    }
    let mut source = None;
    let mut count = None;
    for field in fields {
        match field.split_once('=') {
            Some(("source", v)) => {
                source = Some(v.parse::<BitSource>().map_err(|e| Error::format(0, e.to_string()))?)
            }
            Some(("count", v)) => {
                count = Some(v.parse::<usize>().map_err(|_| Error::format(0, format!("bad count `{v}`")))?)
            }
            _ => return Err(Error::format(0, format!("unknown header field `{field}`"))),
        }
    }
    let (source, count) = match (source, count) {
        (Some(s), Some(c)) => (s, c),
        _ => return Err(Error::format(0, "header needs source= and count=")),
    };

    let mut bits = Vec::with_capacity(count);
    for (i, &c) in bytes.iter().enumerate().skip(header_end + 1) {
        match c {
            b'0' | b'1' => bits.push(c - b'0'),
            b'\n' => {}
            _ => {
                return Err(Error::format(
                    i,
                    format!("unexpected character {:?} in bit body", c as char),
                ))
            }
        }
    }
    if bits.len() != count {
        return Err(Error::format(
            bytes.len(),
            format!("count mismatch: header declares {count}, body has {}", bits.len()),
        ));
    }
    Ok(BitSequence::from_bits_unchecked(bits, source))
}
