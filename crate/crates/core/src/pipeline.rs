//! End-to-end lower-bound certificates. Each pipeline solves one small base
//! LP, lifts its dual through combiners and embeddings, and records every
//! step so the final witness can be rebuilt and re-verified without an LP
//! solver.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cert::{and_restricted_combine, pushforward, tensor_power, verify_witness, VerifyReport};
use crate::embed::{block_diagonal, embed_ptp_pad_into, embed_surj_duplicate_row, embed_surj_identity_block};
use crate::error::{Error, Result};
use crate::lp::{approx_degree, LpOptions, Sided};
use crate::rational::{floor_to_usize, format_rational, int, serde_str, Rational};
use crate::witness::{DualWitness, WitnessJson};
use crate::zoo::{compose_and, compose_and_restricted, Family, PromiseFunction};

/// One construction step. Steps after `Base` act on the current
/// (function, witness) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum TraceStep {
    /// Base witness for `family`, certifying `degree` at `eps`.
    Base {
        family: Family,
        #[serde(with = "serde_str")]
        eps: Rational,
        degree: usize,
        witness: WitnessJson,
    },
    TensorPower {
        k: usize,
    },
    RestrictedAnd {
        k: usize,
        #[serde(with = "serde_str")]
        alpha: Rational,
    },
    /// Stacked composition onto the diagonal of `target`, plus `pad` pinned
    /// rows.
    BlockDiagonal {
        k: usize,
        pad: usize,
        target: Family,
    },
    DuplicateRow {
        count: usize,
    },
    IdentityBlock {
        count: usize,
    },
    /// Fixed-point padding of a PTP instance into `target`.
    IdentityPad {
        target: Family,
    },
    Normalize,
}

impl TraceStep {
    pub fn name(&self) -> &'static str {
        match self {
            TraceStep::Base { .. } => "base",
            TraceStep::TensorPower { .. } => "tensor-power",
            TraceStep::RestrictedAnd { .. } => "restricted-and",
            TraceStep::BlockDiagonal { .. } => "block-diagonal",
            TraceStep::DuplicateRow { .. } => "duplicate-row",
            TraceStep::IdentityBlock { .. } => "identity-block",
            TraceStep::IdentityPad { .. } => "identity-pad",
            TraceStep::Normalize => "normalize",
        }
    }
}

/// A machine-checkable statement `deg_eps(function) >= degree_lb`.
#[derive(Clone, Debug)]
pub struct CertifiedBound {
    pub function: PromiseFunction,
    pub degree_lb: usize,
    pub eps: Rational,
    pub witness: DualWitness,
    pub trace: Vec<TraceStep>,
}

/// Serialized form of a [`CertifiedBound`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub function: Family,
    pub degree_lb: usize,
    #[serde(with = "serde_str")]
    pub eps: Rational,
    pub witness: WitnessJson,
    pub trace: Vec<TraceStep>,
}

impl CertifiedBound {
    pub fn verify(&self) -> VerifyReport {
        verify_witness(&self.witness, &self.function, &self.eps, self.degree_lb)
    }

    pub fn to_bundle(&self) -> Bundle {
        Bundle {
            function: self.function.family().clone(),
            degree_lb: self.degree_lb,
            eps: self.eps.clone(),
            witness: self.witness.to_json(),
            trace: self.trace.clone(),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_bundle())?)
    }
}

impl Bundle {
    /// Rebuilds the function from its descriptor and parses the witness.
    pub fn load(&self) -> Result<CertifiedBound> {
        let function = self.function.build()?;
        let witness = DualWitness::from_json(&self.witness)?;
        if witness.n() != function.n() || witness.r() != function.r() {
            return Err(Error::Dimension(format!(
                "witness dimensions {}x{} do not match {}",
                witness.n(),
                witness.r(),
                function.family()
            )));
        }
        Ok(CertifiedBound {
            function,
            degree_lb: self.degree_lb,
            eps: self.eps.clone(),
            witness,
            trace: self.trace.clone(),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Bundle> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Base witness for `f` at `eps`: with `d = deg_eps(f)`, the normalized dual
/// of the degree `d - 1` LP, which has `orth >= d` and ratio above `eps`. For
/// `d = 0` the uniform distribution on the positive inputs serves.
pub fn base_witness(f: &PromiseFunction, eps: &Rational, opts: &LpOptions) -> Result<(usize, DualWitness)> {
    let res = approx_degree(f, eps, Sided::Two, opts)?;
    let witness = match &res.below {
        Some(lp) => {
            let mut w = lp.dual.normalized();
            w.claimed_orth = res.degree;
            w.claimed_eps = eps.clone();
            w
        }
        None => {
            let positives: Vec<_> = f.iter().filter(|(_, l)| *l).map(|(x, _)| x.clone()).collect();
            if positives.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "{} has no positive inputs, so no witness beats eps",
                    f.family()
                )));
            }
            let mass = Rational::new(1.into(), positives.len().into());
            DualWitness::new(f.n(), f.r(), positives.into_iter().map(|x| (x, mass.clone())), 0, eps.clone())?
        }
    };
    Ok((res.degree, witness))
}

/// Replays a trace from scratch. No LP is solved: the base witness is read
/// from the trace.
pub fn replay(trace: &[TraceStep]) -> Result<(PromiseFunction, DualWitness)> {
    let mut steps = trace.iter();
    let Some(TraceStep::Base {
        family,
        eps,
        degree,
        witness,
    }) = steps.next()
    else {
        return Err(Error::Format("trace must start with a base step".into()));
    };
    let mut f = family.build()?;
    let mut w = DualWitness::from_json(witness)?;
    if w.claimed_orth != *degree || w.claimed_eps != *eps {
        return Err(Error::Format("base witness claims disagree with the base step".into()));
    }
    for step in steps {
        (f, w) = apply(step, f, w)?;
    }
    Ok((f, w))
}

fn apply(step: &TraceStep, f: PromiseFunction, w: DualWitness) -> Result<(PromiseFunction, DualWitness)> {
    Ok(match step {
        TraceStep::Base { .. } => return Err(Error::Format("base step may only appear first".into())),
        TraceStep::TensorPower { k } => {
            let eps = w.claimed_eps.clone();
            (compose_and(*k, &f)?, tensor_power(&w, *k, &eps)?)
        }
        TraceStep::RestrictedAnd { k, alpha } => {
            let eps = w.claimed_eps.clone();
            let w = and_restricted_combine(&w, &f, *k, alpha, &eps)?;
            (compose_and_restricted(*k, alpha, &f)?, w)
        }
        TraceStep::BlockDiagonal { k, pad, target } => {
            let e = block_diagonal(f, *k, *pad, target.build()?)?;
            let w = pushforward(&w, &e)?;
            (e.target().clone(), w)
        }
        TraceStep::DuplicateRow { count } => {
            let (mut f, mut w) = (f, w);
            for _ in 0..*count {
                let e = embed_surj_duplicate_row(&f)?;
                w = pushforward(&w, &e)?;
                f = e.target().clone();
            }
            (f, w)
        }
        TraceStep::IdentityBlock { count } => {
            let (mut f, mut w) = (f, w);
            for _ in 0..*count {
                let e = embed_surj_identity_block(&f)?;
                w = pushforward(&w, &e)?;
                f = e.target().clone();
            }
            (f, w)
        }
        TraceStep::IdentityPad { target } => {
            let (Family::Ptp { n: m, alpha }, Family::Ptp { n, alpha: target_alpha }) = (f.family(), target)
            else {
                return Err(Error::Format("identity padding needs PTP source and target".into()));
            };
            let e = embed_ptp_pad_into(*m, alpha, *n, target_alpha)?;
            let w = pushforward(&w, &e)?;
            (e.target().clone(), w)
        }
        TraceStep::Normalize => {
            let w = w.normalized();
            (f, w)
        }
    })
}

/// Runs `steps` after a freshly solved base and packages the result.
fn run(base: PromiseFunction, eps: &Rational, opts: &LpOptions, steps: Vec<TraceStep>) -> Result<CertifiedBound> {
    let (degree, witness) = base_witness(&base, eps, opts)?;
    let mut trace = vec![TraceStep::Base {
        family: base.family().clone(),
        eps: eps.clone(),
        degree,
        witness: witness.to_json(),
    }];
    trace.extend(steps);
    trace.push(TraceStep::Normalize);
    let (function, witness) = replay(&trace)?;
    let bound = CertifiedBound {
        function,
        degree_lb: witness.claimed_orth,
        eps: witness.claimed_eps.clone(),
        witness,
        trace,
    };
    let report = bound.verify();
    if let Some(failure) = report.failure {
        return Err(Error::Internal(format!("pipeline produced an invalid certificate: {failure}")));
    }
    Ok(bound)
}

fn check_base_eps(eps: &Rational) -> Result<()> {
    if *eps < Rational::zero() || *eps >= Rational::new(1.into(), 2.into()) {
        return Err(Error::InvalidParameter(format!(
            "base eps {} must lie in [0,1/2)",
            format_rational(eps)
        )));
    }
    Ok(())
}

fn block_size(n: usize, k: usize) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let m = n / k;
    if m < 2 {
        return Err(Error::InvalidParameter(format!("block size floor(n/k) = {m} must be at least 2")));
    }
    Ok(m)
}

/// `deg_{eps^k}(ED_n) >= k deg_eps(ED_{floor(n/k)})` via `AND_k ∘ ED_m`
/// placed block-diagonally in `ED_n`.
pub fn certify_ed(n: usize, k: usize, base_eps: &Rational, opts: &LpOptions) -> Result<CertifiedBound> {
    check_base_eps(base_eps)?;
    let m = block_size(n, k)?;
    let base = Family::Ed { n: m, r: m }.build()?;
    run(
        base,
        base_eps,
        opts,
        vec![
            TraceStep::TensorPower { k },
            TraceStep::BlockDiagonal {
                k,
                pad: n - k * m,
                target: Family::Ed { n, r: n },
            },
        ],
    )
}

/// The same chain for `ED^t_n` (no column hit `t` or more times).
pub fn certify_ed_r(n: usize, t: usize, k: usize, base_eps: &Rational, opts: &LpOptions) -> Result<CertifiedBound> {
    check_base_eps(base_eps)?;
    if t < 2 {
        return Err(Error::InvalidParameter("ED^t needs t >= 2".into()));
    }
    let m = block_size(n, k)?;
    let base = Family::EdK { n: m, k: t }.build()?;
    run(
        base,
        base_eps,
        opts,
        vec![
            TraceStep::TensorPower { k },
            TraceStep::BlockDiagonal {
                k,
                pad: n - k * m,
                target: Family::EdK { n, k: t },
            },
        ],
    )
}

/// `SURJ_{n, floor(cn)}` via `AND_k ∘ SURJ_{floor(n/k)-1, floor(cn/k)}`:
/// block-diagonal placement, then duplicated rows to reach `n - k` rows, more
/// duplicated rows, and finally identity blocks to fill the range. With
/// `k = 1` the base LP is solved on `SURJ_{n, floor(cn)}` itself.
pub fn certify_surj(n: usize, c: &Rational, k: usize, base_eps: &Rational, opts: &LpOptions) -> Result<CertifiedBound> {
    check_base_eps(base_eps)?;
    if *c <= Rational::zero() || *c >= Rational::one() {
        return Err(Error::InvalidParameter(format!("c = {} must lie in (0,1)", format_rational(c))));
    }
    let nn = int(n as i64);
    let cn = c * &nn;
    let kk = int(k as i64);
    if k == 0 || kk > cn || kk > (int(1) - c) * &nn {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= min(cn, (1-c)n), got k={k}"
        )));
    }
    let r = floor_to_usize(&cn);
    if k == 1 {
        return run(Family::Surj { n, r }.build()?, base_eps, opts, vec![]);
    }
    let q = floor_to_usize(&(&cn / &kk));
    let m = (n / k).checked_sub(1).filter(|&m| m >= 1).ok_or_else(|| {
        Error::InvalidParameter(format!("block height floor(n/k) - 1 must be at least 1 (n={n}, k={k})"))
    })?;
    if q == 0 {
        return Err(Error::InvalidParameter("block width floor(cn/k) must be at least 1".into()));
    }
    let extra_cols = r - k * q;
    let base = Family::Surj { n: m, r: q }.build()?;
    run(
        base,
        base_eps,
        opts,
        vec![
            TraceStep::TensorPower { k },
            TraceStep::BlockDiagonal {
                k,
                pad: 0,
                target: Family::Surj { n: k * m, r: k * q },
            },
            TraceStep::DuplicateRow {
                count: n - k * (n / k),
            },
            TraceStep::DuplicateRow { count: k - extra_cols },
            TraceStep::IdentityBlock { count: extra_cols },
        ],
    )
}

/// `PTP_{n,alpha}` via `AND_{k,alpha/4} ∘ PTP_{floor(n/k),alpha/4}` placed
/// block-diagonally in `PTP_{k floor(n/k), alpha/2}` and padded with fixed
/// points. With `k = 1` the base LP is solved on `PTP_{n,alpha}` itself.
pub fn certify_ptp(n: usize, alpha: &Rational, k: usize, base_eps: &Rational, opts: &LpOptions) -> Result<CertifiedBound> {
    check_base_eps(base_eps)?;
    if k == 1 {
        return run(Family::Ptp { n, alpha: alpha.clone() }.build()?, base_eps, opts, vec![]);
    }
    let b = block_size(n, k)?;
    let quarter = alpha / int(4);
    let half = alpha / int(2);
    let base = Family::Ptp { n: b, alpha: quarter.clone() }.build()?;
    run(
        base,
        base_eps,
        opts,
        vec![
            TraceStep::RestrictedAnd { k, alpha: quarter },
            TraceStep::BlockDiagonal {
                k,
                pad: 0,
                target: Family::Ptp { n: k * b, alpha: half },
            },
            TraceStep::IdentityPad {
                target: Family::Ptp { n, alpha: alpha.clone() },
            },
        ],
    )
}
