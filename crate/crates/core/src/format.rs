//! Serialized factor streams: text, JSON lines and a compact binary form.
//!
//! Records carry no start position; it is implied by the running output
//! length. Text records are `L <byte>` or `C <src> <len>`. Binary streams
//! start with `LZF1`, then per record a tag byte (0 literal, 1 copy)
//! followed by the byte or by `src` and `len` as LEB128 varints.

use std::io::{self, BufRead, Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::factor::{Factor, FactorKind};

pub const MAGIC: &[u8; 4] = b"LZF1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Jsonl,
    Binary,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "jsonl" => Ok(OutputFormat::Jsonl),
            "binary" => Ok(OutputFormat::Binary),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Record {
    Literal { byte: u8 },
    Copy { src: u64, len: u64 },
}

impl From<&Factor> for Record {
    fn from(f: &Factor) -> Self {
        match f.kind {
            FactorKind::Literal(byte) => Record::Literal { byte },
            FactorKind::Copy { src, len } => Record::Copy { src, len },
        }
    }
}

fn write_varint(w: &mut impl Write, mut v: u64) -> io::Result<()> {
    let mut buf = [0u8; 10];
    let mut i = 0;
    loop {
        let b = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            buf[i] = b;
            i += 1;
            break;
        }
        buf[i] = b | 0x80;
        i += 1;
    }
    w.write_all(&buf[..i])
}

/// Writes factor records to a byte sink.
pub struct FactorWriter<W: Write> {
    inner: W,
    format: OutputFormat,
    started: bool,
}

impl<W: Write> FactorWriter<W> {
    pub fn new(inner: W, format: OutputFormat) -> Self {
        FactorWriter {
            inner,
            format,
            started: false,
        }
    }

    fn start(&mut self) -> io::Result<()> {
        if !self.started {
            self.started = true;
            if self.format == OutputFormat::Binary {
                self.inner.write_all(MAGIC)?;
            }
        }
        Ok(())
    }

    pub fn write(&mut self, f: &Factor) -> io::Result<()> {
        self.start()?;
        let w = &mut self.inner;
        match (self.format, f.kind) {
            (OutputFormat::Text, FactorKind::Literal(b)) => writeln!(w, "L {b}"),
            (OutputFormat::Text, FactorKind::Copy { src, len }) => writeln!(w, "C {src} {len}"),
            (OutputFormat::Jsonl, _) => {
                serde_json::to_writer(&mut *w, &Record::from(f))?;
                w.write_all(b"\n")
            }
            (OutputFormat::Binary, FactorKind::Literal(b)) => w.write_all(&[0, b]),
            (OutputFormat::Binary, FactorKind::Copy { src, len }) => {
                w.write_all(&[1])?;
                write_varint(w, src)?;
                write_varint(w, len)
            }
        }
    }

    pub fn write_all(&mut self, fs: &[Factor]) -> io::Result<()> {
        fs.iter().try_for_each(|f| self.write(f))
    }

    /// Flushes and returns the sink. A binary stream with no records still
    /// gets its magic.
    pub fn finish(mut self) -> io::Result<W> {
        self.start()?;
        self.inner.flush()?;
        Ok(self.inner)
    }
}

/// Serializes a complete factor sequence.
pub fn encode(factors: &[Factor], format: OutputFormat) -> Vec<u8> {
    let mut w = FactorWriter::new(Vec::new(), format);
    w.write_all(factors).expect("writing to a Vec");
    w.finish().expect("writing to a Vec")
}

fn replay(out: &mut Vec<u8>, rec: Record, record: usize) -> Result<Factor, FormatError> {
    let start = out.len() as u64 + 1;
    match rec {
        Record::Literal { byte } => {
            out.push(byte);
            Ok(Factor::literal(start, byte))
        }
        Record::Copy { src, len } => {
            if src == 0 || src >= start || len == 0 {
                return Err(FormatError::CopyOutOfRange {
                    record,
                    src,
                    len,
                    at: start,
                });
            }
            let from = src as usize - 1;
            out.reserve(len as usize);
            for t in 0..len as usize {
                let b = out[from + t];
                out.push(b);
            }
            Ok(Factor::copy(start, src, len))
        }
    }
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        msg: msg.into(),
    }
}

fn parse_text(line: &str, no: usize) -> Result<Record, FormatError> {
    let mut it = line.split_ascii_whitespace();
    let num = |s: Option<&str>| -> Result<u64, FormatError> {
        s.ok_or_else(|| malformed(no, "missing field"))?
            .parse::<u64>()
            .map_err(|e| malformed(no, e.to_string()))
    };
    let rec = match it.next() {
        Some("L") => {
            let b = num(it.next())?;
            let byte = u8::try_from(b).map_err(|_| malformed(no, format!("byte {b} out of range")))?;
            Record::Literal { byte }
        }
        Some("C") => Record::Copy {
            src: num(it.next())?,
            len: num(it.next())?,
        },
        Some(t) => return Err(malformed(no, format!("unknown record tag {t:?}"))),
        None => return Err(malformed(no, "empty record")),
    };
    if it.next().is_some() {
        return Err(malformed(no, "trailing fields"));
    }
    Ok(rec)
}

fn read_varint(bytes: &[u8], at: &mut usize, record: usize) -> Result<u64, FormatError> {
    let mut v = 0u64;
    for shift in (0..64).step_by(7) {
        let b = *bytes
            .get(*at)
            .ok_or_else(|| malformed(record, "truncated varint"))?;
        *at += 1;
        let part = (b & 0x7f) as u64;
        if shift == 63 && part > 1 {
            return Err(malformed(record, "varint overflows 64 bits"));
        }
        v |= part << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
    }
    Err(malformed(record, "varint overflows 64 bits"))
}

/// Decodes a factor stream of any format (detected from its first bytes)
/// and returns the factors together with the text they describe. Error
/// positions are 1-based line numbers for text and JSON lines, record
/// numbers for binary.
pub fn decode_factors(mut input: impl Read) -> Result<(Vec<Factor>, Vec<u8>), FormatError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut out = Vec::new();
    let mut factors = Vec::new();
    if bytes.starts_with(MAGIC) {
        let mut at = MAGIC.len();
        let mut record = 0;
        while at < bytes.len() {
            record += 1;
            let tag = bytes[at];
            at += 1;
            let rec = match tag {
                0 => {
                    let byte = *bytes
                        .get(at)
                        .ok_or_else(|| malformed(record, "truncated literal"))?;
                    at += 1;
                    Record::Literal { byte }
                }
                1 => {
                    let src = read_varint(&bytes, &mut at, record)?;
                    let len = read_varint(&bytes, &mut at, record)?;
                    Record::Copy { src, len }
                }
                t => return Err(malformed(record, format!("unknown record tag {t}"))),
            };
            factors.push(replay(&mut out, rec, record)?);
        }
        return Ok((factors, out));
    }
    for (i, line) in bytes.lines().enumerate() {
        let no = i + 1;
        let line = line.map_err(|_| malformed(no, "invalid UTF-8"))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rec = if line.starts_with('{') {
            serde_json::from_str::<Record>(line).map_err(|e| malformed(no, e.to_string()))?
        } else {
            parse_text(line, no)?
        };
        factors.push(replay(&mut out, rec, no)?);
    }
    Ok((factors, out))
}

/// Decodes a factor stream back into the original bytes.
pub fn decode(input: impl Read) -> Result<Vec<u8>, FormatError> {
    decode_factors(input).map(|(_, out)| out)
}
