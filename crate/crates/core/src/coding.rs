//! Coding-theoretic view: Kraft-McMillan check, ideal Shannon-Fano code
//! lengths, entropy, cross-entropy, KL divergence and log-loss.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CountVector, Data, ParametricModel, ProbVector};

/// Logarithm base for information quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LogBase {
    Two,
    E,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

/// Ideal (real-valued) code lengths over a D-ary alphabet.
#[derive(Debug, Clone, Serialize)]
pub struct CodeLengthAssignment {
    pub lengths: Vec<f64>,
    pub alphabet_size: u32,
}

impl CodeLengthAssignment {
    pub fn new(lengths: Vec<f64>, alphabet_size: u32) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::Unsupported("code alphabet needs D >= 2".into()));
        }
        if lengths.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Unsupported("code lengths must be positive".into()));
        }
        let (sum, ok) = kraft_check(&lengths, alphabet_size);
        if !ok {
            return Err(Error::Unsupported(format!("Kraft sum {sum} exceeds 1")));
        }
        Ok(CodeLengthAssignment { lengths, alphabet_size })
    }
}

/// Kraft sum and whether it satisfies the inequality (<= 1 + 1e-12).
pub fn kraft_check(lengths: &[f64], alphabet_size: u32) -> (f64, bool) {
    let d = alphabet_size as f64;
    let sum: f64 = lengths.iter().map(|&l| d.powf(-l)).sum();
    (sum, sum <= 1.0 + 1e-12)
}

/// Ideal code lengths -log2 p(x); errors on zero-probability outcomes.
pub fn shannon_fano_lengths(p: &ProbVector) -> Result<CodeLengthAssignment> {
    if p.probs().iter().any(|&q| q == 0.0) {
        return Err(Error::InvalidProbVector(
            "Shannon-Fano lengths need strictly positive probabilities".into(),
        ));
    }
    CodeLengthAssignment::new(p.probs().iter().map(|&q| -q.log2()).collect(), 2)
}

/// H(p) = -sum p log p, with 0 log 0 = 0.
pub fn entropy(p: &ProbVector, base: LogBase) -> f64 {
    -p.probs().iter().filter(|&&q| q > 0.0).map(|&q| q * base.log(q)).sum::<f64>()
}

/// Cross entropy -sum p log q; infinite when q = 0 somewhere p > 0.
pub fn cross_entropy(p: &ProbVector, q: &ProbVector, base: LogBase) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), got: q.len() });
    }
    let mut total = 0.0;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        total -= pi * base.log(qi);
    }
    Ok(total)
}

/// KL(p || q) = cross entropy minus entropy; nonnegative by Gibbs.
pub fn kl_divergence(p: &ProbVector, q: &ProbVector, base: LogBase) -> Result<f64> {
    let kl = cross_entropy(p, q, base)? - entropy(p, base);
    // float dust below zero only when p = q up to rounding
    Ok(if kl < 0.0 && kl > -1e-12 { 0.0 } else { kl })
}

/// -log f(x^n | theta) in nats; n times the cross entropy between the
/// empirical pmf and the model pmf.
pub fn log_loss(model: &ParametricModel, data: &CountVector, theta: &[f64]) -> Result<f64> {
    Ok(-crate::model::loglik_iid(model, &Data::Counts(data.clone()), theta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_model;

    fn skewed() -> ProbVector {
        ProbVector::new(vec![0.25, 0.5, 0.25]).unwrap()
    }

    fn mpt_nine() -> ProbVector {
        ProbVector::new(vec![0.01, 0.18, 0.81]).unwrap()
    }

    #[test]
    fn kraft_examples() {
        assert_eq!(kraft_check(&[2.0, 1.0, 2.0], 2), (1.0, true));
        let (s, ok) = kraft_check(&[1.0, 1.0, 1.0], 2);
        assert!((s - 1.5).abs() < 1e-15 && !ok);
        assert_eq!(kraft_check(&[2.0, 2.0], 2), (0.5, true));
    }

    #[test]
    fn shannon_fano_examples() {
        let c = shannon_fano_lengths(&skewed()).unwrap();
        assert_eq!(c.lengths, vec![2.0, 1.0, 2.0]);
        let (s, ok) = kraft_check(&c.lengths, 2);
        assert!(ok && (s - 1.0).abs() < 1e-12);
        let c = shannon_fano_lengths(&mpt_nine()).unwrap();
        assert!((c.lengths[0] - 6.644).abs() < 1e-3);
        assert!((c.lengths[1] - 2.474).abs() < 1e-3);
        assert!((c.lengths[2] - 0.304).abs() < 1e-3);
        assert!(shannon_fano_lengths(&ProbVector::new(vec![0.0, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn entropy_and_cross_entropy() {
        assert!((entropy(&skewed(), LogBase::Two) - 1.5).abs() < 1e-12);
        assert_eq!(entropy(&ProbVector::new(vec![1.0, 0.0]).unwrap(), LogBase::Two), 0.0);
        let ce = cross_entropy(&skewed(), &mpt_nine(), LogBase::Two).unwrap();
        assert!((ce - 2.97).abs() < 0.01, "{ce}");
        // 8 trials at 1.5 bits each
        assert!((8.0 * entropy(&skewed(), LogBase::Two) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn kl_examples() {
        let kl = kl_divergence(&skewed(), &mpt_nine(), LogBase::Two).unwrap();
        assert!((kl - 1.47).abs() < 0.01, "{kl}");
        assert_eq!(kl_divergence(&skewed(), &skewed(), LogBase::Two).unwrap(), 0.0);
        let reverse = kl_divergence(&mpt_nine(), &skewed(), LogBase::Two).unwrap();
        assert!((kl - reverse).abs() > 0.1); // asymmetric
    }

    #[test]
    fn bases_differ_by_ln2() {
        let pairs = [(&skewed(), &mpt_nine())];
        for (p, q) in pairs {
            let bits = cross_entropy(p, q, LogBase::Two).unwrap();
            let nats = cross_entropy(p, q, LogBase::E).unwrap();
            assert!((nats - bits * 2f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn log_loss_matches_goodness_of_fit() {
        let m = builtin_model("mpt-individual-word").unwrap();
        let data = CountVector::new(vec![3, 3, 3]);
        let ll = log_loss(&m, &data, &[0.5]).unwrap();
        assert!((ll - 10.4).abs() < 0.05);
        let gof = crate::mdl::goodness_of_fit(&m, &data).unwrap();
        assert!((ll - gof).abs() < 1e-10);
    }

    #[test]
    fn fixture_code_string() {
        // Worked example: C(L)=10, C(M)=0, C(R)=11 over the sequence
        // (M,R,M,L,L,M,M,M) concatenates to 11 bits.
        let codebook = [("L", "10"), ("M", "0"), ("R", "11")];
        let encode = |seq: &[&str]| -> String {
            seq.iter()
                .map(|s| codebook.iter().find(|(k, _)| k == s).unwrap().1)
                .collect::<Vec<_>>()
                .concat()
        };
        let bits = encode(&["M", "R", "M", "L", "L", "M", "M", "M"]);
        assert_eq!(bits, "01101010000");
        assert_eq!(bits.len(), 11);
    }
}
