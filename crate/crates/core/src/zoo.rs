//! The promise functions studied here, all encoded on `D_{n,r}`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::domain::{self, check_domain_size, DomainPoint};
use crate::error::{Error, Result};
use crate::rational::{floor_to_usize, format_rational, int, serde_str, Rational};

/// Which constructor produced a function, with its parameters. Serialized
/// into certificate traces so they can be rebuilt without an LP solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    And {
        n: usize,
    },
    AndRestricted {
        k: usize,
        #[serde(with = "serde_str")]
        alpha: Rational,
    },
    Ed {
        n: usize,
        r: usize,
    },
    EdK {
        n: usize,
        k: usize,
    },
    Surj {
        n: usize,
        r: usize,
    },
    Ptp {
        n: usize,
        #[serde(with = "serde_str")]
        alpha: Rational,
    },
    PtpStar {
        n: usize,
        #[serde(with = "serde_str")]
        delta: Rational,
    },
    /// `AND_k ∘ inner`, rows of the `k` blocks stacked.
    AndOf {
        k: usize,
        inner: Box<Family>,
    },
    /// `AND_{k,alpha} ∘ inner`, rows stacked.
    AndRestrictedOf {
        k: usize,
        #[serde(with = "serde_str")]
        alpha: Rational,
        inner: Box<Family>,
    },
    Custom {
        name: String,
    },
}

impl Family {
    /// Reconstructs the function. Fails for `Custom`.
    pub fn build(&self) -> Result<PromiseFunction> {
        match self {
            Family::And { n } => make_and(*n),
            Family::AndRestricted { k, alpha } => make_and_restricted(*k, alpha),
            Family::Ed { n, r } => make_ed(*n, *r),
            Family::EdK { n, k } => make_ed_k(*n, *k),
            Family::Surj { n, r } => make_surj(*n, *r),
            Family::Ptp { n, alpha } => make_ptp(*n, alpha),
            Family::PtpStar { n, delta } => make_ptp_star(*n, delta),
            Family::AndOf { k, inner } => compose_and(*k, &inner.build()?),
            Family::AndRestrictedOf { k, alpha, inner } => {
                compose_and_restricted(*k, alpha, &inner.build()?)
            }
            Family::Custom { name } => Err(Error::InvalidParameter(format!(
                "custom function {name:?} cannot be rebuilt from its descriptor"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::And { n } => write!(f, "AND_{n}"),
            Family::AndRestricted { k, alpha } => {
                write!(f, "AND_{{{k},{}}}", format_rational(alpha))
            }
            Family::Ed { n, r } => write!(f, "ED_{{{n},{r}}}"),
            Family::EdK { n, k } => write!(f, "ED^{k}_{n}"),
            Family::Surj { n, r } => write!(f, "SURJ_{{{n},{r}}}"),
            Family::Ptp { n, alpha } => write!(f, "PTP_{{{n},{}}}", format_rational(alpha)),
            Family::PtpStar { n, delta } => write!(f, "PTP*_{{{n},{}}}", format_rational(delta)),
            Family::AndOf { k, inner } => write!(f, "AND_{k}∘({inner})"),
            Family::AndRestrictedOf { k, alpha, inner } => {
                write!(f, "AND_{{{k},{}}}∘({inner})", format_rational(alpha))
            }
            Family::Custom { name } => write!(f, "{name}"),
        }
    }
}

/// A Boolean function on an explicit finite subset of `D_{n,r}`.
///
/// Points are kept sorted lexicographically; `labels[i]` belongs to
/// `points[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromiseFunction {
    family: Family,
    n: usize,
    r: usize,
    points: Vec<DomainPoint>,
    labels: Vec<bool>,
}

impl PromiseFunction {
    /// Validating constructor for arbitrary (custom) functions.
    pub fn from_parts(
        family: Family,
        n: usize,
        r: usize,
        mut entries: Vec<(DomainPoint, bool)>,
    ) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::Format(format!("duplicate point {}", pair[0].0)));
            }
        }
        for (p, _) in &entries {
            if p.rows() != n || p.as_slice().iter().any(|&c| c as usize >= r) {
                return Err(Error::Dimension(format!("point {p} is not in D_{{{n},{r}}}")));
            }
        }
        let (points, labels) = entries.into_iter().unzip();
        Ok(PromiseFunction {
            family,
            n,
            r,
            points,
            labels,
        })
    }

    fn from_filter(
        family: Family,
        n: usize,
        r: usize,
        mut rule: impl FnMut(&DomainPoint) -> Option<bool>,
    ) -> Result<Self> {
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for p in domain::enumerate(n, r)? {
            if let Some(label) = rule(&p) {
                points.push(p);
                labels.push(label);
            }
        }
        Ok(PromiseFunction {
            family,
            n,
            r,
            points,
            labels,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[DomainPoint] {
        &self.points
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DomainPoint, bool)> {
        self.points.iter().zip(self.labels.iter().copied())
    }

    pub fn index_of(&self, x: &DomainPoint) -> Option<usize> {
        self.points.binary_search(x).ok()
    }

    pub fn contains(&self, x: &DomainPoint) -> bool {
        self.index_of(x).is_some()
    }

    /// The label of `x`; points outside the promise are an error, never a
    /// default value.
    pub fn evaluate(&self, x: &DomainPoint) -> Result<bool> {
        self.index_of(x)
            .map(|i| self.labels[i])
            .ok_or_else(|| Error::OutOfPromise(x.to_string()))
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }

    /// Same domain and same label at every point.
    pub fn same_function(&self, other: &PromiseFunction) -> bool {
        self.n == other.n
            && self.r == other.r
            && self.points == other.points
            && self.labels == other.labels
    }

    pub fn to_json(&self) -> FunctionJson {
        FunctionJson {
            family: self.family.to_string(),
            n: self.n,
            r: self.r,
            points: self.points.iter().map(DomainPoint::to_one_based).collect(),
            labels: self.labels.iter().map(|&l| l as u8).collect(),
        }
    }

    /// Loads a function from its JSON form. The family descriptor is kept as
    /// an opaque name.
    pub fn from_json(json: &FunctionJson) -> Result<Self> {
        if json.points.len() != json.labels.len() {
            return Err(Error::Format(format!(
                "{} points but {} labels",
                json.points.len(),
                json.labels.len()
            )));
        }
        let entries = json
            .points
            .iter()
            .zip(&json.labels)
            .map(|(p, &l)| {
                if l > 1 {
                    return Err(Error::Format(format!("label {l} is not 0 or 1")));
                }
                if p.len() != json.n {
                    return Err(Error::Dimension(format!(
                        "point {p:?} has {} rows, expected {}",
                        p.len(),
                        json.n
                    )));
                }
                Ok((DomainPoint::from_one_based(p, json.r)?, l == 1))
            })
            .collect::<Result<Vec<_>>>()?;
        let f = PromiseFunction::from_parts(
            Family::Custom {
                name: json.family.clone(),
            },
            json.n,
            json.r,
            entries,
        )?;
        if f.points.iter().map(DomainPoint::to_one_based).ne(json.points.iter().cloned()) {
            return Err(Error::Format("points must be listed in lexicographic order".into()));
        }
        Ok(f)
    }
}

/// `{"family", "n", "r", "points", "labels"}` with 1-based columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub family: String,
    pub n: usize,
    pub r: usize,
    pub points: Vec<Vec<usize>>,
    pub labels: Vec<u8>,
}

fn weight(x: &DomainPoint) -> usize {
    x.as_slice().iter().filter(|&&c| c == 1).count()
}

fn check_fraction(name: &str, value: &Rational, allow_zero: bool) -> Result<()> {
    let low_ok = if allow_zero {
        *value >= Rational::zero()
    } else {
        *value > Rational::zero()
    };
    if low_ok && *value < Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {} must lie in {}0,1)",
            format_rational(value),
            if allow_zero { "[" } else { "(" }
        )))
    }
}

fn positive(name: &str, value: usize) -> Result<()> {
    if value == 0 {
        Err(Error::InvalidParameter(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

/// `AND_n` on `D_{n,2}`: bit `b` of row `i` is column `b + 1`.
pub fn make_and(n: usize) -> Result<PromiseFunction> {
    positive("n", n)?;
    PromiseFunction::from_filter(Family::And { n }, n, 2, |x| Some(weight(x) == n))
}

/// `AND_k` restricted to Hamming weight `k` or at most `floor(alpha k)`.
pub fn make_and_restricted(k: usize, alpha: &Rational) -> Result<PromiseFunction> {
    positive("k", k)?;
    check_fraction("alpha", alpha, true)?;
    let ell = floor_to_usize(&(alpha * int(k as i64)));
    let family = Family::AndRestricted {
        k,
        alpha: alpha.clone(),
    };
    PromiseFunction::from_filter(family, k, 2, |x| {
        let w = weight(x);
        (w == k || w <= ell).then_some(w == k)
    })
}

/// Element distinctness: 1 iff the mapping is one-to-one.
pub fn make_ed(n: usize, r: usize) -> Result<PromiseFunction> {
    positive("n", n)?;
    positive("r", r)?;
    PromiseFunction::from_filter(Family::Ed { n, r }, n, r, |x| Some(x.is_injective()))
}

/// `k`-element distinctness on `D_{n,n}`: 1 iff no column has `k` or more ones.
pub fn make_ed_k(n: usize, k: usize) -> Result<PromiseFunction> {
    positive("n", n)?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("ED^k needs k >= 2, got {k}")));
    }
    PromiseFunction::from_filter(Family::EdK { n, k }, n, n, |x| {
        Some(x.column_counts(n).iter().all(|&c| c < k))
    })
}

/// Surjectivity: 1 iff every column contains a one.
pub fn make_surj(n: usize, r: usize) -> Result<PromiseFunction> {
    positive("n", n)?;
    positive("r", r)?;
    PromiseFunction::from_filter(Family::Surj { n, r }, n, r, |x| {
        Some(x.image_size() == r)
    })
}

/// Permutation testing: image of size exactly `n` (label 1) or at most
/// `floor(alpha n)` (label 0).
pub fn make_ptp(n: usize, alpha: &Rational) -> Result<PromiseFunction> {
    positive("n", n)?;
    check_fraction("alpha", alpha, false)?;
    let cap = floor_to_usize(&(alpha * int(n as i64)));
    let family = Family::Ptp {
        n,
        alpha: alpha.clone(),
    };
    PromiseFunction::from_filter(family, n, n, |x| {
        let img = x.image_size();
        (img == n || img <= cap).then_some(img == n)
    })
}

/// Largest `n` for which [`make_ptp_star`] runs its brute-force distance.
pub const PTP_STAR_MAX_N: usize = 6;

/// Permutation testing in the "far from every permutation" formulation:
/// label 1 on permutation matrices, label 0 on matrices that disagree with
/// every permutation matrix in at least `delta n` rows. The distance is found
/// by brute force over all permutations.
pub fn make_ptp_star(n: usize, delta: &Rational) -> Result<PromiseFunction> {
    positive("n", n)?;
    check_fraction("delta", delta, false)?;
    if n > PTP_STAR_MAX_N {
        return Err(Error::SizeLimit {
            what: format!("brute-force permutation distance for PTP*_{n}"),
            size: n as u128,
            limit: PTP_STAR_MAX_N as u128,
        });
    }
    let perms = permutations(n);
    let threshold = delta * int(n as i64);
    let family = Family::PtpStar {
        n,
        delta: delta.clone(),
    };
    PromiseFunction::from_filter(family, n, n, |x| {
        let dist = perms
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .filter(|&(i, &c)| x.column(i) != c)
                    .count()
            })
            .min()
            .unwrap_or(0);
        if dist == 0 {
            Some(true)
        } else if int(dist as i64) >= threshold {
            Some(false)
        } else {
            None
        }
    })
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

fn compose_with(
    family: Family,
    k: usize,
    inner: &PromiseFunction,
    mut keep: impl FnMut(usize) -> Option<bool>,
) -> Result<PromiseFunction> {
    positive("k", k)?;
    let size = (inner.len() as u128).checked_pow(k as u32);
    check_domain_size(&format!("{family}"), size)?;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut idx = vec![0usize; k];
    if inner.is_empty() {
        return PromiseFunction::from_parts(family, k * inner.n, inner.r, Vec::new());
    }
    loop {
        let w = idx.iter().filter(|&&i| inner.labels[i]).count();
        if let Some(label) = keep(w) {
            points.push(DomainPoint::concat(idx.iter().map(|&i| &inner.points[i])));
            labels.push(label);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(PromiseFunction {
                    family,
                    n: k * inner.n,
                    r: inner.r,
                    points,
                    labels,
                });
            }
            pos -= 1;
            if idx[pos] + 1 < inner.len() {
                idx[pos] += 1;
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `AND_k ∘ inner` on the stacked domain `D_{k m, s}` (block `b` occupies
/// rows `b m .. (b + 1) m`).
pub fn compose_and(k: usize, inner: &PromiseFunction) -> Result<PromiseFunction> {
    let family = Family::AndOf {
        k,
        inner: Box::new(inner.family.clone()),
    };
    compose_with(family, k, inner, |w| Some(w == k))
}

/// `AND_{k,alpha} ∘ inner`: tuples whose inner-label weight is `k` or at most
/// `floor(alpha k)`.
pub fn compose_and_restricted(
    k: usize,
    alpha: &Rational,
    inner: &PromiseFunction,
) -> Result<PromiseFunction> {
    check_fraction("alpha", alpha, true)?;
    let ell = floor_to_usize(&(alpha * int(k as i64)));
    let family = Family::AndRestrictedOf {
        k,
        alpha: alpha.clone(),
        inner: Box::new(inner.family.clone()),
    };
    compose_with(family, k, inner, |w| (w == k || w <= ell).then_some(w == k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pt(cols: &[usize], r: usize) -> DomainPoint {
        DomainPoint::from_one_based(cols, r).unwrap()
    }

    #[test]
    fn and_counts() {
        let f = make_and(1).unwrap();
        assert_eq!(f.len(), 2);
        assert!(!f.evaluate(&pt(&[1], 2)).unwrap());
        assert!(f.evaluate(&pt(&[2], 2)).unwrap());
        let f = make_and(2).unwrap();
        assert_eq!((f.positives(), f.len()), (1, 4));
        assert!(f.evaluate(&pt(&[2, 2], 2)).unwrap());
        let f = make_and(3).unwrap();
        assert_eq!((f.positives(), f.negatives()), (1, 7));
    }

    #[test]
    fn restricted_and_counts() {
        let f = make_and_restricted(3, &rat(1, 2)).unwrap();
        assert_eq!(f.len(), 5);
        assert_eq!(f.positives(), 1);
        let f = make_and_restricted(1, &rat(0, 1)).unwrap();
        assert!(f.same_function(&make_and(1).unwrap()));
        let f = make_and_restricted(4, &rat(1, 2)).unwrap();
        assert_eq!(f.negatives(), 11);
        assert!(make_and_restricted(2, &rat(1, 1)).is_err());
    }

    #[test]
    fn ed_and_ed_k_counts() {
        let ed = make_ed(3, 3).unwrap();
        assert_eq!((ed.positives(), ed.len()), (6, 27));
        let ed3 = make_ed_k(3, 3).unwrap();
        assert_eq!(ed3.negatives(), 3);
        assert_eq!(make_ed(2, 1).unwrap().positives(), 0);
        for n in 1..=5 {
            let a = make_ed(n, n).unwrap();
            let b = make_ed_k(n, 2).unwrap();
            assert_eq!(a.points(), b.points());
            assert_eq!(a.labels(), b.labels());
        }
    }

    #[test]
    fn surj_counts() {
        let f = make_surj(2, 2).unwrap();
        assert_eq!(f.positives(), 2);
        assert!(f.evaluate(&pt(&[1, 2], 2)).unwrap());
        assert!(f.evaluate(&pt(&[2, 1], 2)).unwrap());
        assert_eq!(make_surj(2, 3).unwrap().positives(), 0);
    }

    #[test]
    fn surj_3_2_matches_enumeration() {
        // onto maps [3] -> [2]: every mapping except the two constant ones
        let brute = domain::enumerate(3, 2)
            .unwrap()
            .into_iter()
            .filter(|p| (0..2).all(|c| p.as_slice().contains(&(c as u16))))
            .count();
        assert_eq!(brute, 6);
        assert_eq!(make_surj(3, 2).unwrap().positives(), brute);
    }

    #[test]
    fn ptp_counts() {
        let f = make_ptp(4, &rat(1, 2)).unwrap();
        assert_eq!(f.positives(), 24);
        // C(4,1) constant maps + C(4,2) * (2^4 - 2) onto-two-values maps
        assert_eq!(f.negatives(), 4 + 6 * 14);
        assert_eq!(f.negatives(), 88);
    }

    #[test]
    fn ptp_star_matches_ptp() {
        let a = make_ptp_star(4, &rat(1, 2)).unwrap();
        let b = make_ptp(4, &rat(1, 2)).unwrap();
        assert!(a.same_function(&b));
    }

    #[test]
    fn evaluate_rejects_out_of_promise() {
        let ed = make_ed(3, 3).unwrap();
        assert!(ed.evaluate(&pt(&[1, 2, 3], 3)).unwrap());
        assert!(!ed.evaluate(&pt(&[1, 1, 2], 3)).unwrap());
        let ptp = make_ptp(4, &rat(1, 2)).unwrap();
        assert!(matches!(
            ptp.evaluate(&pt(&[1, 2, 2, 3], 4)),
            Err(Error::OutOfPromise(_))
        ));
    }

    #[test]
    fn compositions() {
        let ed2 = make_ed(2, 2).unwrap();
        let f = compose_and(2, &ed2).unwrap();
        assert_eq!((f.n(), f.r(), f.len()), (4, 2, 16));
        assert_eq!(f.positives(), 4);
        let g = compose_and(3, &make_and(1).unwrap()).unwrap();
        assert!(g.same_function(&make_and(3).unwrap()));
        let h = compose_and_restricted(3, &rat(1, 2), &make_and(1).unwrap()).unwrap();
        assert!(h.same_function(&make_and_restricted(3, &rat(1, 2)).unwrap()));
    }

    #[test]
    fn permutations_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }

    #[test]
    fn json_round_trip_and_order_check() {
        let f = make_ptp(3, &rat(1, 2)).unwrap();
        let json = serde_json::to_string(&f.to_json()).unwrap();
        let parsed: FunctionJson = serde_json::from_str(&json).unwrap();
        let g = PromiseFunction::from_json(&parsed).unwrap();
        assert!(g.same_function(&f));
        assert_eq!(g.family().to_string(), "PTP_{3,1/2}");

        let mut bad = f.to_json();
        bad.points.swap(0, 1);
        assert!(PromiseFunction::from_json(&bad).is_err());
    }

    #[test]
    fn families_rebuild() {
        let fam = Family::AndRestrictedOf {
            k: 2,
            alpha: rat(1, 8),
            inner: Box::new(Family::Ptp { n: 2, alpha: rat(1, 8) }),
        };
        let f = fam.build().unwrap();
        assert_eq!(f.family(), &fam);
        let json = serde_json::to_string(&fam).unwrap();
        let back: Family = serde_json::from_str(&json).unwrap();
        assert_eq!(back, fam);
    }
}
