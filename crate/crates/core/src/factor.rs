use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    /// First occurrence of a byte.
    Literal(u8),
    /// Copy of `len` bytes from 1-based position `src`; may overlap the factor itself.
    Copy { src: u64, len: u64 },
}

/// One s-factor starting at 1-based position `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub start: u64,
    pub kind: FactorKind,
}

impl Factor {
    pub fn literal(start: u64, byte: u8) -> Self {
        Factor {
            start,
            kind: FactorKind::Literal(byte),
        }
    }

    pub fn copy(start: u64, src: u64, len: u64) -> Self {
        Factor {
            start,
            kind: FactorKind::Copy { src, len },
        }
    }

    pub fn len(&self) -> u64 {
        match self.kind {
            FactorKind::Literal(_) => 1,
            FactorKind::Copy { len, .. } => len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_literal(&self) -> bool {
        matches!(self.kind, FactorKind::Literal(_))
    }

    /// 1-based position of the last byte covered.
    pub fn end(&self) -> u64 {
        self.start + self.len() - 1
    }
}

/// Appends the bytes described by `f` to `out`, which must hold exactly the
/// `f.start - 1` preceding bytes.
pub fn apply(out: &mut Vec<u8>, f: &Factor) {
    match f.kind {
        FactorKind::Literal(b) => out.push(b),
        FactorKind::Copy { src, len } => {
            let from = src as usize - 1;
            for t in 0..len as usize {
                let b = out[from + t];
                out.push(b);
            }
        }
    }
}

/// Rebuilds the text of a factor sequence.
pub fn expand(factors: &[Factor]) -> Vec<u8> {
    let mut out = Vec::new();
    for f in factors {
        apply(&mut out, f);
    }
    out
}
