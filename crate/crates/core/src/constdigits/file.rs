//! Digit-cache text format.
//!
//! ```text
//! #pseudodice-digits constant=pi count=100 convention=fractional
//! 14159265358979323846264338327950288419716939937510582097494459230781640628620899
//! 86280348253421170679
//! #sha256=<hex digest of the digit characters, newlines excluded>
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{Constant, DigitStream};
use crate::error::{Error, Result};

pub(crate) const LINE_WIDTH: usize = 80;
const MAGIC: &str = "#pseudodice-digits";
const SHA_PREFIX: &str = "#sha256=";

pub fn save_digit_file(stream: &DigitStream, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let ascii: Vec<u8> = stream.digits().iter().map(|d| d + b'0').collect();
    let mut out = Vec::with_capacity(ascii.len() + ascii.len() / LINE_WIDTH + 200);
    writeln!(
        out,
        "{MAGIC} constant={} count={} convention={}",
        stream.constant(),
        stream.count(),
        DigitStream::CONVENTION
    )
    .expect("write to Vec");
    for line in ascii.chunks(LINE_WIDTH) {
        out.extend_from_slice(line);
        out.push(b'\n');
    }
    writeln!(out, "{SHA_PREFIX}{}", hex::encode(Sha256::digest(&ascii))).expect("write to Vec");
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn load_digit_file(path: impl AsRef<Path>) -> Result<DigitStream> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_digit_file(&bytes)
}

pub(crate) fn parse_digit_file(bytes: &[u8]) -> Result<DigitStream> {
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::format(0, "missing header line"))?;
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| Error::format(0, "header is not UTF-8"))?;
    let (constant, count) = parse_header(header)?;

    let mut digits = Vec::with_capacity(count);
    let mut digest: Option<(usize, &[u8])> = None;
    let mut offset = header_end + 1;
    let mut short_line_seen = false;
    for line in bytes[offset..].split(|&b| b == b'\n') {
        let line_start = offset;
        offset += line.len() + 1;
        if line.is_empty() {
            continue;
        }
        if digest.is_some() {
            return Err(Error::format(line_start, "content after the sha256 trailer"));
        }
        if let Some(hex) = line.strip_prefix(SHA_PREFIX.as_bytes()) {
            digest = Some((line_start, hex));
            continue;
        }
        if short_line_seen {
            return Err(Error::format(
                line_start,
                format!("only the last digit line may be shorter than {LINE_WIDTH}"),
            ));
        }
        if line.len() > LINE_WIDTH {
            return Err(Error::format(
                line_start + LINE_WIDTH,
                format!("digit line longer than {LINE_WIDTH} characters"),
            ));
        }
        short_line_seen = line.len() < LINE_WIDTH;
        for (i, &c) in line.iter().enumerate() {
            if !c.is_ascii_digit() {
                return Err(Error::format(
                    line_start + i,
                    format!("unexpected character {:?} in digit body", c as char),
                ));
            }
            digits.push(c - b'0');
        }
    }

    if digits.len() != count {
        return Err(Error::format(
            bytes.len(),
            format!("count mismatch: header declares {count}, body has {}", digits.len()),
        ));
    }
    if let Some((at, hex)) = digest {
        let ascii: Vec<u8> = digits.iter().map(|d| d + b'0').collect();
        let actual = hex::encode(Sha256::digest(&ascii));
        if actual.as_bytes() != hex {
            return Err(Error::format(at, "sha256 mismatch"));
        }
    }
    DigitStream::new(constant, digits)
}

fn parse_header(header: &str) -> Result<(Constant, usize)> {
    let mut fields = header.split_ascii_whitespace();
    if fields.next() != Some(MAGIC) {
        return Err(Error::format(0, format!("header must start with `{MAGIC}`")));
    }
    let mut constant = None;
    let mut count = None;
    let mut convention = None;
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::format(0, format!("malformed header field `{field}`")))?;
        match key {
            "constant" => {
                constant = Some(
                    value
                        .parse::<Constant>()
                        .map_err(|_| Error::format(0, format!("unknown constant `{value}`")))?,
                )
            }
            "count" => {
                count = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| Error::format(0, format!("bad count `{value}`")))?,
                )
            }
            "convention" => convention = Some(value),
            _ => return Err(Error::format(0, format!("unknown header field `{key}`"))),
        }
    }
    if convention != Some(DigitStream::CONVENTION) {
        return Err(Error::format(0, "header must declare convention=fractional"));
    }
    match (constant, count) {
        (Some(c), Some(n)) => Ok((c, n)),
        _ => Err(Error::format(0, "header needs constant= and count=")),
    }
}
