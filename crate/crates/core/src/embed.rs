//! Injective, label-preserving maps between promise domains. Every target row
//! is either pinned to a constant column or copies one source row (with a
//! column shift), so restricting a target polynomial along an embedding never
//! raises its degree.

use std::collections::HashSet;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::domain::DomainPoint;
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};
use crate::zoo::{
    compose_and, make_ed, make_ed_k, make_ptp, make_surj, Family, PromiseFunction,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowSource {
    /// The row always holds its one in this (0-based) column.
    Fixed(u16),
    /// The row equals source row `row`, shifted right by `offset` columns.
    Copy { row: usize, offset: u16 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingKind {
    Identity,
    BlockDiagonal,
    DuplicateRow,
    IdentityPad,
    AddIdentityBlock,
    Composite,
}

#[derive(Clone, Debug)]
pub struct Embedding {
    source: PromiseFunction,
    target: PromiseFunction,
    wiring: Vec<RowSource>,
    kind: EmbeddingKind,
}

impl Embedding {
    /// Checks the wiring shape, then exhaustively checks that every source
    /// point lands in the target promise with its label and that no two
    /// source points collide.
    pub fn new(
        source: PromiseFunction,
        target: PromiseFunction,
        wiring: Vec<RowSource>,
        kind: EmbeddingKind,
    ) -> Result<Self> {
        if wiring.len() != target.n() {
            return Err(Error::Embedding(format!(
                "wiring has {} rows but target has {}",
                wiring.len(),
                target.n()
            )));
        }
        for (i, w) in wiring.iter().enumerate() {
            let ok = match *w {
                RowSource::Fixed(c) => (c as usize) < target.r(),
                RowSource::Copy { row, offset } => {
                    row < source.n() && source.r() + offset as usize <= target.r()
                }
            };
            if !ok {
                return Err(Error::Embedding(format!("target row {} wiring {w:?} out of range", i + 1)));
            }
        }
        let e = Embedding {
            source,
            target,
            wiring,
            kind,
        };
        let mut seen = HashSet::with_capacity(e.source.len());
        for (x, label) in e.source.iter() {
            let y = e.inject(x);
            match e.target.evaluate(&y) {
                Ok(l) if l == label => {}
                Ok(_) => {
                    return Err(Error::Embedding(format!(
                        "label of {x} changes under injection to {y}"
                    )))
                }
                Err(_) => {
                    return Err(Error::Embedding(format!(
                        "{x} maps to {y}, outside the promise of {}",
                        e.target.family()
                    )))
                }
            }
            if !seen.insert(y) {
                return Err(Error::Embedding(format!("injection is not one-to-one at {x}")));
            }
        }
        Ok(e)
    }

    pub fn identity(f: &PromiseFunction) -> Self {
        let wiring = (0..f.n()).map(|row| RowSource::Copy { row, offset: 0 }).collect();
        Embedding {
            source: f.clone(),
            target: f.clone(),
            wiring,
            kind: EmbeddingKind::Identity,
        }
    }

    pub fn inject(&self, x: &DomainPoint) -> DomainPoint {
        DomainPoint::new(
            self.wiring
                .iter()
                .map(|w| match *w {
                    RowSource::Fixed(c) => c,
                    RowSource::Copy { row, offset } => x.as_slice()[row] + offset,
                })
                .collect(),
        )
    }

    pub fn source(&self) -> &PromiseFunction {
        &self.source
    }

    pub fn target(&self) -> &PromiseFunction {
        &self.target
    }

    pub fn wiring(&self) -> &[RowSource] {
        &self.wiring
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    /// `self` followed by `next`.
    pub fn then(self, next: Embedding) -> Result<Embedding> {
        if !self.target.same_function(&next.source) {
            return Err(Error::Embedding(format!(
                "cannot chain: {} is not {}",
                self.target.family(),
                next.source.family()
            )));
        }
        let wiring = next
            .wiring
            .iter()
            .map(|w| match *w {
                RowSource::Fixed(c) => RowSource::Fixed(c),
                RowSource::Copy { row, offset } => match self.wiring[row] {
                    RowSource::Fixed(c) => RowSource::Fixed(c + offset),
                    RowSource::Copy { row: r0, offset: o0 } => RowSource::Copy {
                        row: r0,
                        offset: o0 + offset,
                    },
                },
            })
            .collect();
        let kind = match (self.kind, next.kind) {
            (EmbeddingKind::Identity, k) | (k, EmbeddingKind::Identity) => k,
            _ => EmbeddingKind::Composite,
        };
        Embedding::new(self.source, next.target, wiring, kind)
    }
}

/// Wires the `k` stacked blocks of `source` (each `m x s`) onto the diagonal
/// of `target`, followed by `pad` rows pinned to fresh diagonal columns.
pub fn block_diagonal(
    source: PromiseFunction,
    k: usize,
    pad: usize,
    target: PromiseFunction,
) -> Result<Embedding> {
    if k == 0 || !source.n().is_multiple_of(k) {
        return Err(Error::Embedding(format!(
            "{} rows do not split into {k} blocks",
            source.n()
        )));
    }
    let m = source.n() / k;
    let s = source.r();
    if target.n() != k * m + pad || target.r() != k * s + pad {
        return Err(Error::Embedding(format!(
            "block-diagonal target must be {}x{}, got {}x{}",
            k * m + pad,
            k * s + pad,
            target.n(),
            target.r()
        )));
    }
    let mut wiring: Vec<RowSource> = (0..k * m)
        .map(|row| RowSource::Copy {
            row,
            offset: ((row / m) * s) as u16,
        })
        .collect();
    wiring.extend((0..pad).map(|j| RowSource::Fixed((k * s + j) as u16)));
    let kind = if k == 1 && pad == 0 {
        EmbeddingKind::Identity
    } else {
        EmbeddingKind::BlockDiagonal
    };
    Embedding::new(source, target, wiring, kind)
}

/// `AND_k ∘ inner` into the natural larger instance of the inner family:
/// ED, ED^k and SURJ are supported.
pub fn embed_block_diagonal(inner: &PromiseFunction, k: usize, pad: usize) -> Result<Embedding> {
    let (m, s) = (inner.n(), inner.r());
    let (n, r) = (k * m + pad, k * s + pad);
    let target = match inner.family() {
        Family::Ed { .. } => make_ed(n, r)?,
        Family::EdK { k: t, .. } => make_ed_k(n, *t)?,
        Family::Surj { .. } => make_surj(n, r)?,
        other => {
            return Err(Error::Embedding(format!(
                "no natural block-diagonal target for {other}; use block_diagonal"
            )))
        }
    };
    block_diagonal(compose_and(k, inner)?, k, pad, target)
}

/// `SURJ_{n,r}` into `SURJ_{n+1,r}` by repeating the last row.
pub fn embed_surj_duplicate_row(f: &PromiseFunction) -> Result<Embedding> {
    let (n, r) = (f.n(), f.r());
    let mut wiring: Vec<RowSource> = (0..n).map(|row| RowSource::Copy { row, offset: 0 }).collect();
    wiring.push(RowSource::Copy {
        row: n - 1,
        offset: 0,
    });
    Embedding::new(f.clone(), make_surj(n + 1, r)?, wiring, EmbeddingKind::DuplicateRow)
}

/// `SURJ_{n,r}` into `SURJ_{n+1,r+1}` as the block-diagonal matrix with
/// blocks `x` and `1`.
pub fn embed_surj_identity_block(f: &PromiseFunction) -> Result<Embedding> {
    let (n, r) = (f.n(), f.r());
    let mut wiring: Vec<RowSource> = (0..n).map(|row| RowSource::Copy { row, offset: 0 }).collect();
    wiring.push(RowSource::Fixed(r as u16));
    Embedding::new(
        f.clone(),
        make_surj(n + 1, r + 1)?,
        wiring,
        EmbeddingKind::AddIdentityBlock,
    )
}

/// The promise parameter `(m/n) alpha + (n - m)/n` reached by padding a
/// `PTP_{m,alpha}` instance with fixed points up to size `n`.
pub fn ptp_pad_parameter(m: usize, n: usize, alpha: &Rational) -> Rational {
    (int(m as i64) * alpha + int((n - m) as i64)) / int(n as i64)
}

/// `PTP_{m,alpha}` into `PTP_{n,(m/n) alpha + (n-m)/n}` by fixing rows
/// `m+1..n` to the identity.
pub fn embed_ptp_pad(m: usize, n: usize, alpha: &Rational) -> Result<Embedding> {
    if m == 0 || m > n {
        return Err(Error::InvalidParameter(format!("need 1 <= m <= n, got m={m}, n={n}")));
    }
    embed_ptp_pad_into(m, alpha, n, &ptp_pad_parameter(m, n, alpha))
}

/// Identity padding from `PTP_{m,alpha}` into `PTP_{n,target_alpha}`; the
/// target promise is checked exhaustively.
pub fn embed_ptp_pad_into(
    m: usize,
    alpha: &Rational,
    n: usize,
    target_alpha: &Rational,
) -> Result<Embedding> {
    if *target_alpha >= Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "padded parameter {} is not below 1",
            format_rational(target_alpha)
        )));
    }
    let source = make_ptp(m, alpha)?;
    let target = make_ptp(n, target_alpha)?;
    let mut wiring: Vec<RowSource> = (0..m).map(|row| RowSource::Copy { row, offset: 0 }).collect();
    wiring.extend((m..n).map(|i| RowSource::Fixed(i as u16)));
    let kind = if m == n {
        EmbeddingKind::Identity
    } else {
        EmbeddingKind::IdentityPad
    };
    Embedding::new(source, target, wiring, kind)
}
