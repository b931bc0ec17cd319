//! Closed-form divergence measures, the relative information of type s, and
//! the p-logarithmic power mean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::sum_terms;
use crate::simplex::Distribution;

/// Tags for every named closed-form measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// B = sum sqrt(p q); equals 1 iff P = Q.
    Bhattacharya,
    /// h = (1/2) sum (sqrt p - sqrt q)^2 = 1 - B.
    Hellinger,
    /// chi^2 = sum (p - q)^2 / q.
    Chi2,
    /// Kullback-Leibler relative information, sum p ln(p/q).
    Kl,
    /// Triangular discrimination, sum (p - q)^2 / (p + q).
    Triangular,
    /// Harmonic mean divergence, sum 2 p q / (p + q); equals 1 iff P = Q.
    HarmonicMean,
    /// Symmetrized Kullback-Leibler, sum (p - q) ln(p/q).
    JDivergence,
    /// Symmetric chi-square, sum (p - q)^2 (p + q) / (p q).
    SymChi2,
    /// Gap between the triangular discrimination and its derivative bound:
    /// 2 sum q ((p - q)/(p + q))^2.
    DeltaStar,
    /// Gap between the symmetric chi-square and its derivative bound:
    /// sum (p - q)^2 (p^2 + q^2) / (p^2 q).
    PsiStar,
    /// Derivative upper bound on the triangular discrimination:
    /// sum ((p - q)/(p + q))^2 (p + 3q).
    RhoDelta,
    /// Derivative upper bound on the symmetric chi-square:
    /// sym_chi2 + psi_star.
    RhoPsi,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 12] = [
        MeasureKind::Bhattacharya,
        MeasureKind::Hellinger,
        MeasureKind::Chi2,
        MeasureKind::Kl,
        MeasureKind::Triangular,
        MeasureKind::HarmonicMean,
        MeasureKind::JDivergence,
        MeasureKind::SymChi2,
        MeasureKind::DeltaStar,
        MeasureKind::PsiStar,
        MeasureKind::RhoDelta,
        MeasureKind::RhoPsi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::Bhattacharya => "bhattacharya",
            MeasureKind::Hellinger => "hellinger",
            MeasureKind::Chi2 => "chi2",
            MeasureKind::Kl => "kl",
            MeasureKind::Triangular => "triangular",
            MeasureKind::HarmonicMean => "harmonic_mean",
            MeasureKind::JDivergence => "j_divergence",
            MeasureKind::SymChi2 => "sym_chi2",
            MeasureKind::DeltaStar => "delta_star",
            MeasureKind::PsiStar => "psi_star",
            MeasureKind::RhoDelta => "rho_delta",
            MeasureKind::RhoPsi => "rho_psi",
        }
    }

    pub fn parse(name: &str) -> Option<MeasureKind> {
        MeasureKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Value of the measure at P = Q (1 for the two similarity measures,
    /// 0 for every divergence).
    pub fn identity_value(&self) -> f64 {
        match self {
            MeasureKind::Bhattacharya | MeasureKind::HarmonicMean => 1.0,
            _ => 0.0,
        }
    }
}

fn check_pair(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(())
}

fn finite(value: f64, context: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteResult { context })
    }
}

/// Evaluate a named measure as its exact closed-form sum.
pub fn divergence(kind: MeasureKind, p: &Distribution, q: &Distribution) -> Result<f64> {
    check_pair(p, q)?;
    let a = p.probs();
    let b = q.probs();
    let value = match kind {
        MeasureKind::Bhattacharya => sum_terms(a, b, |p, q| (p * q).sqrt()),
        MeasureKind::Hellinger => 0.5 * sum_terms(a, b, |p, q| (p.sqrt() - q.sqrt()).powi(2)),
        MeasureKind::Chi2 => sum_terms(a, b, |p, q| (p - q) * (p - q) / q),
        MeasureKind::Kl => sum_terms(a, b, |p, q| p * (p / q).ln()),
        MeasureKind::Triangular => sum_terms(a, b, |p, q| (p - q) * (p - q) / (p + q)),
        MeasureKind::HarmonicMean => sum_terms(a, b, |p, q| 2.0 * p * q / (p + q)),
        MeasureKind::JDivergence => sum_terms(a, b, |p, q| (p - q) * (p / q).ln()),
        MeasureKind::SymChi2 => sum_terms(a, b, |p, q| (p - q) * (p - q) * (p + q) / (p * q)),
        MeasureKind::DeltaStar => {
            2.0 * sum_terms(a, b, |p, q| {
                let t = (p - q) / (p + q);
                q * t * t
            })
        }
        MeasureKind::PsiStar => sum_terms(a, b, |p, q| {
            (p - q) * (p - q) * (p * p + q * q) / (p * p * q)
        }),
        MeasureKind::RhoDelta => sum_terms(a, b, |p, q| {
            let t = (p - q) / (p + q);
            t * t * (p + 3.0 * q)
        }),
        MeasureKind::RhoPsi => {
            divergence(MeasureKind::SymChi2, p, q)? + divergence(MeasureKind::PsiStar, p, q)?
        }
    };
    finite(value, kind.name())
}

/// Relative information of type s.
///
/// The branches at s = 0 and s = 1 are selected by exact equality; callers
/// wanting the near-branch limit must pass the branch value itself.
pub fn phi_s(s: f64, p: &Distribution, q: &Distribution) -> Result<f64> {
    check_pair(p, q)?;
    if s == 0.0 {
        return divergence(MeasureKind::Kl, q, p);
    }
    if s == 1.0 {
        return divergence(MeasureKind::Kl, p, q);
    }
    // p^s q^(1-s) computed in the log domain to avoid premature
    // under/overflow at small probabilities.
    let sum = sum_terms(p.probs(), q.probs(), |p, q| {
        (s * p.ln() + (1.0 - s) * q.ln()).exp()
    });
    finite((sum - 1.0) / (s * (s - 1.0)), "phi_s")
}

/// Derivative upper bound on the relative information of type s:
/// `(s-1)^{-1} sum (p - q)(p/q)^{s-1}`, with the logarithmic branch at s = 1.
pub fn rho_phi_s(s: f64, p: &Distribution, q: &Distribution) -> Result<f64> {
    check_pair(p, q)?;
    if s == 1.0 {
        return divergence(MeasureKind::JDivergence, p, q);
    }
    let sum = sum_terms(p.probs(), q.probs(), |p, q| {
        (p - q) * ((s - 1.0) * (p.ln() - q.ln())).exp()
    });
    finite(sum / (s - 1.0), "rho_phi_s")
}

/// p-logarithmic power mean L_p(a, b).
///
/// Defined for a = b as the common value (the continuous limit); always lies
/// in [min(a,b), max(a,b)].
pub fn power_mean(p: f64, a: f64, b: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "power mean needs positive arguments");
    if a == b {
        return a;
    }
    if p == -1.0 {
        return (b - a) / (b.ln() - a.ln());
    }
    if p == 0.0 {
        // (1/e) (b^b / a^a)^(1/(b-a)), evaluated in the log domain.
        return ((b * b.ln() - a * a.ln()) / (b - a) - 1.0).exp();
    }
    let num = (p + 1.0) * b.ln();
    let den = (p + 1.0) * a.ln();
    (((num.exp() - den.exp()) / ((p + 1.0) * (b - a))).ln() / p).exp()
}
