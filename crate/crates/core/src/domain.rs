//! Points of `D_{n,r}`: `n x r` Boolean matrices with exactly one 1 per row,
//! stored as the mapping `row -> column`.

use std::fmt;

use crate::error::{Error, Result};
use crate::limits::domain_limit;

/// A mapping `[n] -> [r]`. Columns are 0-based internally; every external
/// format (JSON, CLI, `Display`) uses 1-based columns.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DomainPoint(Vec<u16>);

impl DomainPoint {
    pub fn new(mapping: Vec<u16>) -> Self {
        DomainPoint(mapping)
    }

    /// Builds a point from 1-based column indices, checking `1 <= c <= r`.
    pub fn from_one_based(columns: &[usize], r: usize) -> Result<Self> {
        columns
            .iter()
            .map(|&c| {
                if c == 0 || c > r {
                    Err(Error::InvalidParameter(format!(
                        "column {c} outside 1..={r} in point {columns:?}"
                    )))
                } else {
                    Ok((c - 1) as u16)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(DomainPoint)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&c| c as usize + 1).collect()
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn column(&self, row: usize) -> usize {
        self.0[row] as usize
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u16> {
        self.0
    }

    /// Number of distinct columns hit (the image size of the mapping).
    pub fn image_size(&self) -> usize {
        let mut seen: Vec<u16> = self.0.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn is_injective(&self) -> bool {
        self.image_size() == self.0.len()
    }

    /// Number of ones in each of the `r` columns.
    pub fn column_counts(&self, r: usize) -> Vec<usize> {
        let mut counts = vec![0; r];
        for &c in &self.0 {
            counts[c as usize] += 1;
        }
        counts
    }

    /// The `n x r` one-hot matrix view.
    pub fn one_hot(&self, r: usize) -> Vec<Vec<bool>> {
        self.0
            .iter()
            .map(|&c| (0..r).map(|j| j == c as usize).collect())
            .collect()
    }

    /// Concatenates block points row-wise (the stacked encoding of a
    /// block composition).
    pub fn concat<'a>(blocks: impl IntoIterator<Item = &'a DomainPoint>) -> DomainPoint {
        DomainPoint(blocks.into_iter().flat_map(|b| b.0.iter().copied()).collect())
    }

    /// Splits a stacked point into `blocks` equal row blocks.
    pub fn split(&self, blocks: usize) -> Vec<DomainPoint> {
        let size = self.0.len() / blocks;
        self.0.chunks(size).map(|c| DomainPoint(c.to_vec())).collect()
    }
}

impl fmt::Display for DomainPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c + 1)?;
        }
        write!(f, ")")
    }
}

/// `r^n`, or `None` on overflow.
pub fn domain_size(n: usize, r: usize) -> Option<u128> {
    (r as u128).checked_pow(n as u32)
}

pub fn check_domain_size(what: &str, size: Option<u128>) -> Result<()> {
    let limit = domain_limit();
    match size {
        Some(s) if s <= limit => Ok(()),
        other => Err(Error::SizeLimit {
            what: what.to_string(),
            size: other.unwrap_or(u128::MAX),
            limit,
        }),
    }
}

/// Every point of `D_{n,r}` in lexicographic order.
pub fn enumerate(n: usize, r: usize) -> Result<Vec<DomainPoint>> {
    if r == 0 && n > 0 {
        return Ok(Vec::new());
    }
    if r > u16::MAX as usize + 1 {
        return Err(Error::InvalidParameter(format!("r = {r} too large")));
    }
    check_domain_size(&format!("D_{{{n},{r}}}"), domain_size(n, r))?;
    let total = domain_size(n, r).unwrap_or(0) as usize;
    let mut out = Vec::with_capacity(total);
    let mut current = vec![0u16; n];
    loop {
        out.push(DomainPoint(current.clone()));
        // odometer, last row fastest
        let mut row = n;
        loop {
            if row == 0 {
                return Ok(out);
            }
            row -= 1;
            if (current[row] as usize) + 1 < r {
                current[row] += 1;
                break;
            }
            current[row] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_lexicographically() {
        let pts = enumerate(2, 3).unwrap();
        assert_eq!(pts.len(), 9);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts[0].to_one_based(), vec![1, 1]);
        assert_eq!(pts[8].to_one_based(), vec![3, 3]);
    }

    #[test]
    fn one_hot_rows_sum_to_one() {
        for p in enumerate(3, 3).unwrap() {
            for row in p.one_hot(3) {
                assert_eq!(row.iter().filter(|&&b| b).count(), 1);
            }
        }
    }

    #[test]
    fn one_based_round_trip_and_range_check() {
        let p = DomainPoint::from_one_based(&[1, 2, 2, 3], 4).unwrap();
        assert_eq!(p.image_size(), 3);
        assert_eq!(p.to_one_based(), vec![1, 2, 2, 3]);
        assert!(DomainPoint::from_one_based(&[0, 1], 2).is_err());
        assert!(DomainPoint::from_one_based(&[3, 1], 2).is_err());
    }

    #[test]
    fn size_guard() {
        assert!(enumerate(9, 9).is_err());
    }
}
