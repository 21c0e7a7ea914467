//! Dual-witness verification and the three witness combiners: tensor power,
//! the restricted-AND product with its weight correction, and pushforward
//! along an embedding.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::domain::{check_domain_size, DomainPoint};
use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::poly::Monomial;
use crate::rational::{binomial, floor_to_usize, format_rational, int, pow, serde_str, Rational};
use crate::witness::{DualWitness, Orth};
use crate::zoo::PromiseFunction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// The witness is nonzero at a point outside the promise.
    SupportLeak(DomainPoint),
    /// `<f,psi> > eps ||psi||_1` fails.
    Correlation,
    /// A monomial of degree below the target has a nonzero moment.
    Orth { monomial: Monomial, moment: Rational },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::SupportLeak(x) => write!(f, "support leak at {x}"),
            Failure::Correlation => write!(f, "correlation does not exceed eps times the L1 norm"),
            Failure::Orth { monomial, moment } => {
                let pairs: Vec<String> = monomial
                    .pairs()
                    .iter()
                    .map(|&(i, j)| format!("x[{},{}]", i + 1, j + 1))
                    .collect();
                write!(
                    f,
                    "nonzero moment {} against {}",
                    format_rational(moment),
                    if pairs.is_empty() { "1".to_string() } else { pairs.join("*") }
                )
            }
        }
    }
}

/// Exact quantities behind a verification verdict.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(with = "serde_str")]
    pub correlation: Rational,
    #[serde(with = "serde_str")]
    pub l1_norm: Rational,
    #[serde(with = "serde_str")]
    pub eps: Rational,
    pub degree: usize,
    /// `None` when a support leak stopped the check early.
    #[serde(serialize_with = "ser_orth")]
    pub orth: Option<Orth>,
    #[serde(skip)]
    pub failure: Option<Failure>,
    pub passed: bool,
}

fn ser_orth<S: serde::Serializer>(o: &Option<Orth>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match o {
        Some(o) => s.serialize_str(&o.to_string()),
        None => s.serialize_none(),
    }
}

/// Checks the two conditions certifying `deg_eps(f) >= d`: strict
/// `<f,psi> > eps ||psi||_1` and `orth(psi) >= d`.
pub fn verify_witness(psi: &DualWitness, f: &PromiseFunction, eps: &Rational, d: usize) -> VerifyReport {
    let l1_norm = psi.l1_norm();
    if let Some(x) = psi.support_leak(f) {
        return VerifyReport {
            correlation: Rational::zero(),
            l1_norm,
            eps: eps.clone(),
            degree: d,
            orth: None,
            failure: Some(Failure::SupportLeak(x.clone())),
            passed: false,
        };
    }
    let correlation = psi.correlation(f).expect("support checked above");
    let orth = psi.orth();
    let failure = if correlation <= eps * &l1_norm {
        Some(Failure::Correlation)
    } else if !orth.at_least(d) {
        let (monomial, moment) = psi.orth_violation(d).expect("orth below d has a witness monomial");
        Some(Failure::Orth { monomial, moment })
    } else {
        None
    };
    VerifyReport {
        correlation,
        l1_norm,
        eps: eps.clone(),
        degree: d,
        orth: Some(orth),
        passed: failure.is_none(),
        failure,
    }
}

/// Iterates over all `k`-tuples of support points of `psi` in lexicographic
/// order, yielding the stacked point, the per-block points and the product of
/// values.
fn for_each_tuple(
    psi: &DualWitness,
    k: usize,
    mut visit: impl FnMut(DomainPoint, &[&DomainPoint], Rational),
) -> Result<()> {
    let entries: Vec<(&DomainPoint, &Rational)> = psi.values().iter().collect();
    check_domain_size(
        "tensor-power support",
        (entries.len() as u128).checked_pow(k as u32),
    )?;
    if k == 0 || entries.is_empty() {
        return Ok(());
    }
    let mut idx = vec![0usize; k];
    loop {
        let blocks: Vec<&DomainPoint> = idx.iter().map(|&i| entries[i].0).collect();
        let value = idx.iter().fold(int(1), |acc, &i| acc * entries[i].1);
        visit(DomainPoint::concat(blocks.iter().copied()), &blocks, value);
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if idx[pos] + 1 < entries.len() {
                idx[pos] += 1;
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `psi^{⊗k}` on the stacked domain of `AND_k ∘ f`, claiming
/// `(k d, base_eps^k)` where `d = psi.claimed_orth`.
pub fn tensor_power(psi: &DualWitness, k: usize, base_eps: &Rational) -> Result<DualWitness> {
    if k == 0 {
        return Err(Error::InvalidParameter("tensor power needs k >= 1".into()));
    }
    let mut values = Vec::new();
    for_each_tuple(psi, k, |x, _, v| values.push((x, v)))?;
    DualWitness::new(
        k * psi.n(),
        psi.r(),
        values,
        k * psi.claimed_orth,
        pow(base_eps, k),
    )
}

/// `ell = floor(alpha k)`.
pub fn restricted_threshold(k: usize, alpha: &Rational) -> usize {
    floor_to_usize(&(alpha * int(k as i64)))
}

/// The restricted-AND witness
/// `Psi(x_1..x_k) = prod psi(x_i) * prod_{i=ell+1}^{k-1} (f(x_1)+...+f(x_k) - i)`
/// on the stacked domain of `AND_{k,alpha} ∘ f`, claiming
/// `((ell+1) d, base_eps^k / C(k-1, ell))`.
pub fn and_restricted_combine(
    psi: &DualWitness,
    f: &PromiseFunction,
    k: usize,
    alpha: &Rational,
    base_eps: &Rational,
) -> Result<DualWitness> {
    if k == 0 {
        return Err(Error::InvalidParameter("restricted AND needs k >= 1".into()));
    }
    let ell = restricted_threshold(k, alpha);
    if ell >= k {
        return Err(Error::InvalidParameter(format!(
            "floor(alpha k) = {ell} must be below k = {k}"
        )));
    }
    if let Some(x) = psi.support_leak(f) {
        return Err(Error::OutOfPromise(format!("base witness is nonzero at {x}")));
    }
    let mut values = Vec::new();
    let mut leak = None;
    for_each_tuple(psi, k, |x, blocks, v| {
        let weight = blocks.iter().filter(|b| f.evaluate(b).unwrap_or(false)).count() as i64;
        let correction = ((ell + 1)..k).fold(int(1), |acc, i| acc * int(weight - i as i64));
        let value = v * correction;
        if !value.is_zero() {
            if !(weight as usize == k || weight as usize <= ell) && leak.is_none() {
                leak = Some(x.clone());
            }
            values.push((x, value));
        }
    })?;
    if let Some(x) = leak {
        return Err(Error::Internal(format!(
            "combined witness is nonzero off the restricted promise at {x}"
        )));
    }
    let binom = Rational::from_integer(binomial(k - 1, ell));
    DualWitness::new(
        k * psi.n(),
        psi.r(),
        values,
        (ell + 1) * psi.claimed_orth,
        pow(base_eps, k) / binom,
    )
}

/// `psi ∘ inject^{-1}` on the target domain of `e`.
pub fn pushforward(psi: &DualWitness, e: &Embedding) -> Result<DualWitness> {
    let source = e.source();
    if psi.n() != source.n() || psi.r() != source.r() {
        return Err(Error::Dimension(format!(
            "witness on D_{{{},{}}} cannot use an embedding from D_{{{},{}}}",
            psi.n(),
            psi.r(),
            source.n(),
            source.r()
        )));
    }
    if let Some(x) = psi.support_leak(source) {
        return Err(Error::Embedding(format!("witness is nonzero at {x}, outside the source promise")));
    }
    let target = e.target();
    DualWitness::new(
        target.n(),
        target.r(),
        psi.values().iter().map(|(x, v)| (e.inject(x), v.clone())),
        psi.claimed_orth,
        psi.claimed_eps.clone(),
    )
}

/// Pointwise `|Psi(x)| <= |psi^{⊗k}(x)| (k-1)!/ell!` for every point of the
/// restricted witness; used as a self-check of the combiner.
pub fn restricted_pointwise_bound_holds(
    combined: &DualWitness,
    tensor: &DualWitness,
    k: usize,
    ell: usize,
) -> bool {
    let num = Rational::from_integer(crate::rational::factorial(k - 1));
    let den = Rational::from_integer(crate::rational::factorial(ell));
    let scale = num / den;
    combined
        .values()
        .iter()
        .all(|(x, v)| v.abs() <= tensor.value(x).abs() * &scale)
}

/// `(k - ell - 1)!`, the factor relating the restricted witness's correlation
/// to `<psi,f>^k`.
pub fn restricted_correlation_factor(k: usize, ell: usize) -> BigInt {
    crate::rational::factorial(k - ell - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::embed_block_diagonal;
    use crate::lp::{extract_dual, min_error_at_degree, LpOptions, Sided};
    use crate::rational::rat;
    use crate::zoo::{compose_and, compose_and_restricted, make_and, make_ed};

    fn and1_witness() -> (PromiseFunction, DualWitness) {
        let f = make_and(1).unwrap();
        let lp = min_error_at_degree(&f, 0, Sided::Two, &LpOptions::default()).unwrap();
        let mut w = extract_dual(&lp);
        w.claimed_orth = 1;
        w.claimed_eps = rat(1, 3);
        (f, w)
    }

    #[test]
    fn verify_basic_cases() {
        let (f, w) = and1_witness();
        let rep = verify_witness(&w, &f, &rat(1, 3), 1);
        assert!(rep.passed);
        assert_eq!(rep.correlation, rat(1, 2));
        assert_eq!(rep.orth, Some(Orth::Finite(1)));
        assert!(!verify_witness(&w, &f, &rat(1, 2), 1).passed);
        assert!(matches!(verify_witness(&w, &f, &rat(1, 3), 2).failure, Some(Failure::Orth { .. })));
        let zero = DualWitness::new(1, 2, [], 0, int(0)).unwrap();
        assert_eq!(verify_witness(&zero, &f, &int(0), 0).failure, Some(Failure::Correlation));
    }

    #[test]
    fn tensor_power_is_multiplicative() {
        let (f, w) = and1_witness();
        assert_eq!(tensor_power(&w, 1, &rat(1, 3)).unwrap().values(), w.values());
        let t = tensor_power(&w, 2, &rat(1, 3)).unwrap();
        let f2 = compose_and(2, &f).unwrap();
        assert_eq!(t.correlation(&f2).unwrap(), pow(&w.correlation(&f).unwrap(), 2));
        assert_eq!(t.l1_norm(), pow(&w.l1_norm(), 2));
        assert_eq!(t.orth(), Orth::Finite(2));
        assert_eq!((t.claimed_orth, t.claimed_eps.clone()), (2, rat(1, 9)));
        assert!(verify_witness(&t, &f2, &rat(1, 9), 2).passed);
    }

    #[test]
    fn restricted_combiner_degenerate_cases() {
        let (f, w) = and1_witness();
        let same = and_restricted_combine(&w, &f, 1, &int(0), &rat(1, 3)).unwrap();
        assert_eq!(same.values(), w.values());
        for k in 2..=3 {
            let alpha = rat(k as i64 - 1, k as i64);
            let combined = and_restricted_combine(&w, &f, k, &alpha, &rat(1, 3)).unwrap();
            let tensor = tensor_power(&w, k, &rat(1, 3)).unwrap();
            assert_eq!(combined.values(), tensor.values());
            assert_eq!(combined.claimed_eps, tensor.claimed_eps);
        }
    }

    #[test]
    fn restricted_combiner_k3() {
        let (f, w) = and1_witness();
        let alpha = rat(1, 2);
        let psi = and_restricted_combine(&w, &f, 3, &alpha, &rat(1, 2)).unwrap();
        let g = compose_and_restricted(3, &alpha, &f).unwrap();
        assert!(psi.support_leak(&g).is_none());
        assert!(psi.orth_at_least(2));
        assert_eq!(psi.claimed_eps, rat(1, 16));
        assert!(verify_witness(&psi, &g, &rat(1, 16), 2).passed);
        let tensor = tensor_power(&w, 3, &rat(1, 2)).unwrap();
        assert!(restricted_pointwise_bound_holds(&psi, &tensor, 3, 1));
        let lhs = psi.correlation(&g).unwrap();
        let rhs = Rational::from_integer(restricted_correlation_factor(3, 1)) * pow(&w.correlation(&f).unwrap(), 3);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pushforward_preserves_quantities() {
        let ed2 = make_ed(2, 2).unwrap();
        let lp = min_error_at_degree(&ed2, 0, Sided::Two, &LpOptions::default()).unwrap();
        let w = tensor_power(&extract_dual(&lp), 2, &lp.eps_star).unwrap();
        let e = embed_block_diagonal(&ed2, 2, 0).unwrap();
        let pushed = pushforward(&w, &e).unwrap();
        assert_eq!(pushed.l1_norm(), w.l1_norm());
        assert_eq!(pushed.correlation(e.target()).unwrap(), w.correlation(e.source()).unwrap());
        assert!(pushed.orth().at_least(match w.orth() {
            Orth::Finite(d) => d,
            Orth::Infinite => usize::MAX,
        }));
    }
}
