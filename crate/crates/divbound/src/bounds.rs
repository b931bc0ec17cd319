//! Sandwich machinery for the triangular discrimination and the symmetric
//! chi-square: the weight function g(x) = x^(2-s) f''(x), its extrema over a
//! ratio range, and the instantiated inequality chains.

use serde::Serialize;

use crate::csiszar::{beta_phi_s, format_s};
use crate::error::{Error, Result};
use crate::measures::{divergence, phi_s, rho_phi_s, MeasureKind};
use crate::simplex::{ratio_range, Distribution, RatioRange};

/// Scale-aware tolerance factor for inequality links.
pub const LINK_TOL: f64 = 1e-9;

/// Allowed negative slack for a link with the given sides.
pub fn link_tolerance(lhs: f64, rhs: f64) -> f64 {
    LINK_TOL * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Families whose weight function g(x) = x^(2-s) f''(x) is instantiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GFamily {
    /// g(x) = 8 x^(2-s) / (x+1)^3
    Delta,
    /// g(x) = 2 x^(-1-s) (x^3 + 1)
    Psi,
    /// Sanity family: f''(x) = x^(s-2), so g is identically 1.
    PhiSBase,
}

/// Weight function value for a family at order s.
pub fn g_function(family: GFamily, s: f64, x: f64) -> f64 {
    debug_assert!(x > 0.0);
    match family {
        GFamily::Delta => 8.0 * x.powf(2.0 - s) / (x + 1.0).powi(3),
        GFamily::Psi => 2.0 * x.powf(-1.0 - s) * (x * x * x + 1.0),
        GFamily::PhiSBase => 1.0,
    }
}

/// Derivative of the weight function; used to locate interior stationary
/// points for orders where g is not monotone.
fn g_prime(family: GFamily, s: f64, x: f64) -> f64 {
    match family {
        GFamily::Delta => {
            -8.0 * x.powf(1.0 - s) * ((s + 1.0) * x + (s - 2.0)) / (x + 1.0).powi(4)
        }
        GFamily::Psi => -2.0 * x.powf(-2.0 - s) * ((s - 2.0) * x * x * x + (s + 1.0)),
        GFamily::PhiSBase => 0.0,
    }
}

/// Extrema of g over a range (or over all of (0, inf)).
///
/// `attained_at_*` is `None` when the extremum is a boundary infimum that is
/// approached but never attained; `big_m` is `None` when the supremum is
/// unbounded. Unbounded suprema never enter chain arithmetic as floats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremaPair {
    pub m: f64,
    pub attained_at_m: Option<f64>,
    /// Supremum M; `None` means unbounded above.
    pub big_m: Option<f64>,
    pub attained_at_big_m: Option<f64>,
}

pub const SUP_G_DELTA: f64 = 32.0 / 27.0;

/// 3 * 2^(1/3), the global infimum of the psi-family weight function at
/// orders 0 and 1.
pub fn inf_g_psi_cbrt() -> f64 {
    3.0 * 2.0f64.cbrt()
}

const BISECT_TOL: f64 = 1e-12;

fn bisect_g_prime(family: GFamily, s: f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = g_prime(family, s, lo);
    while hi - lo > BISECT_TOL * lo.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        let f_mid = g_prime(family, s, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_lo > 0.0) == (f_mid > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn extrema_over_candidates(family: GFamily, s: f64, candidates: &[f64]) -> ExtremaPair {
    let mut m = f64::INFINITY;
    let mut at_m = candidates[0];
    let mut big_m = f64::NEG_INFINITY;
    let mut at_big_m = candidates[0];
    for &x in candidates {
        let g = g_function(family, s, x);
        if g < m {
            m = g;
            at_m = x;
        }
        if g > big_m {
            big_m = g;
            at_big_m = x;
        }
    }
    ExtremaPair {
        m,
        attained_at_m: Some(at_m),
        big_m: Some(big_m),
        attained_at_big_m: Some(at_big_m),
    }
}

/// Extrema of the weight function for a family at order s.
///
/// Over a bounded range the monotone regimes (s <= -1, s >= 2) use the
/// closed-form endpoint values; interior orders fall back to endpoint plus
/// stationary-point evaluation (g is unimodal there, with the stationary
/// point located by bisection on g'). With `range = None` the extremum over
/// all of (0, inf) is returned, which only has finite structure at
/// s in {0, 1/2, 1}.
pub fn extrema_g(family: GFamily, s: f64, range: Option<&RatioRange>) -> Result<ExtremaPair> {
    match family {
        GFamily::PhiSBase => Ok(ExtremaPair {
            m: 1.0,
            attained_at_m: Some(1.0),
            big_m: Some(1.0),
            attained_at_big_m: Some(1.0),
        }),
        GFamily::Delta | GFamily::Psi => match range {
            Some(range) => Ok(extrema_on_range(family, s, range)),
            None => extrema_global(family, s),
        },
    }
}

fn extrema_on_range(family: GFamily, s: f64, range: &RatioRange) -> ExtremaPair {
    let (r, big_r) = (range.lower, range.upper);
    if range.is_degenerate() {
        let g = g_function(family, s, r);
        return ExtremaPair {
            m: g,
            attained_at_m: Some(r),
            big_m: Some(g),
            attained_at_big_m: Some(r),
        };
    }
    if s <= -1.0 || s >= 2.0 {
        // Monotone on (0, inf): increasing for s <= -1 in the delta family
        // and for s <= -1 in the psi family; decreasing for s >= 2 in both.
        return extrema_over_candidates(family, s, &[r, big_r]);
    }
    // Unimodal interior regime: a single stationary point where g' changes
    // sign (a maximum for delta, a minimum for psi).
    let d_lo = g_prime(family, s, r);
    let d_hi = g_prime(family, s, big_r);
    if d_lo == 0.0 || d_hi == 0.0 || (d_lo > 0.0) != (d_hi > 0.0) {
        let stationary = bisect_g_prime(family, s, r, big_r);
        extrema_over_candidates(family, s, &[r, stationary, big_r])
    } else {
        extrema_over_candidates(family, s, &[r, big_r])
    }
}

fn extrema_global(family: GFamily, s: f64) -> Result<ExtremaPair> {
    match family {
        GFamily::Delta => {
            // g -> 0 at both ends of (0, inf); the infimum is a boundary
            // value that is never attained, the supremum sits at the single
            // interior stationary point.
            let (at, sup) = if s == 0.0 {
                (2.0, SUP_G_DELTA)
            } else if s == 0.5 {
                (1.0, 1.0)
            } else if s == 1.0 {
                (0.5, SUP_G_DELTA)
            } else {
                return Err(Error::UnsupportedRegime { s });
            };
            Ok(ExtremaPair {
                m: 0.0,
                attained_at_m: None,
                big_m: Some(sup),
                attained_at_big_m: Some(at),
            })
        }
        GFamily::Psi => {
            // g -> inf at both ends of (0, inf); the supremum is unbounded,
            // the infimum sits at the single interior stationary point.
            let (at, inf) = if s == 0.0 {
                (1.0 / 2.0f64.cbrt(), inf_g_psi_cbrt())
            } else if s == 0.5 {
                (1.0, 4.0)
            } else if s == 1.0 {
                (2.0f64.cbrt(), inf_g_psi_cbrt())
            } else {
                return Err(Error::UnsupportedRegime { s });
            };
            Ok(ExtremaPair {
                m: inf,
                attained_at_m: Some(at),
                big_m: None,
                attained_at_big_m: None,
            })
        }
        GFamily::PhiSBase => unreachable!(),
    }
}

/// Secant bound on the triangular discrimination over a ratio range:
/// 2(R-1)(1-r) / ((R+1)(1+r)).
pub fn beta_delta(range: &RatioRange) -> f64 {
    let (r, big_r) = (range.lower, range.upper);
    2.0 * (big_r - 1.0) * (1.0 - r) / ((big_r + 1.0) * (1.0 + r))
}

/// Secant bound on the symmetric chi-square over a ratio range:
/// (R-1)(1-r)(1 + rR) / (rR).
pub fn beta_psi(range: &RatioRange) -> f64 {
    let (r, big_r) = (range.lower, range.upper);
    (big_r - 1.0) * (1.0 - r) * (1.0 + r * big_r) / (r * big_r)
}

/// One evaluated inequality `lhs <= rhs`.
///
/// `tol` is the allowed negative slack. It scales with the largest
/// intermediate entering either side, not just the final values: links like
/// `beta_C - C <= M*(beta_phi - phi)` cancel almost exactly on two-point
/// ranges, and the roundoff left by that cancellation is proportional to
/// the magnitudes before subtraction.
#[derive(Debug, Clone, Serialize)]
pub struct ChainLink {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
}

/// An evaluated inequality chain with per-link slack margins.
#[derive(Debug, Clone, Serialize)]
pub struct BoundChainReport {
    pub id: String,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    pub r: f64,
    pub big_r: f64,
    pub links: Vec<ChainLink>,
}

impl BoundChainReport {
    pub(crate) fn new(id: impl Into<String>, s: Option<f64>, range: &RatioRange) -> Self {
        Self {
            id: id.into(),
            applicable: true,
            note: None,
            s,
            r: range.lower,
            big_r: range.upper,
            links: Vec::new(),
        }
    }

    fn not_applicable(id: impl Into<String>, s: Option<f64>, range: &RatioRange, note: String) -> Self {
        Self {
            id: id.into(),
            applicable: false,
            note: Some(note),
            s,
            r: range.lower,
            big_r: range.upper,
            links: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, label: impl Into<String>, lhs: f64, rhs: f64) {
        self.push_scaled(label, lhs, rhs, 0.0);
    }

    /// Push a link whose sides are differences of intermediates with the
    /// given magnitude; the tolerance covers the cancellation roundoff.
    pub(crate) fn push_scaled(
        &mut self,
        label: impl Into<String>,
        lhs: f64,
        rhs: f64,
        scale: f64,
    ) {
        let slack = rhs - lhs;
        let tol = link_tolerance(lhs, rhs).max(LINK_TOL * scale.abs());
        let pass = slack >= -tol;
        self.links.push(ChainLink {
            label: label.into(),
            lhs,
            rhs,
            slack,
            tol,
            pass,
        });
    }

    pub fn passed(&self) -> bool {
        self.links.iter().all(|link| link.pass)
    }

    /// Minimum slack over the links, with the label of the tightest link.
    pub fn min_slack(&self) -> Option<(&str, f64)> {
        self.links
            .iter()
            .map(|link| (link.label.as_str(), link.slack))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Values shared by every chain over one distribution pair.
struct PairContext {
    range: RatioRange,
    chi2_pq: f64,
    chi2_qp: f64,
    kl_pq: f64,
    kl_qp: f64,
    hellinger: f64,
    delta: f64,
    delta_star: f64,
    psi: f64,
    psi_star: f64,
    harmonic: f64,
    phi3_qp: f64,
    /// rho of the type-1/2 family: 2 sum (q - p) sqrt(q/p)
    rho_phi_half: f64,
}

impl PairContext {
    fn build(p: &Distribution, q: &Distribution) -> Result<Self> {
        Ok(Self {
            range: ratio_range(p, q)?,
            chi2_pq: divergence(MeasureKind::Chi2, p, q)?,
            chi2_qp: divergence(MeasureKind::Chi2, q, p)?,
            kl_pq: divergence(MeasureKind::Kl, p, q)?,
            kl_qp: divergence(MeasureKind::Kl, q, p)?,
            hellinger: divergence(MeasureKind::Hellinger, p, q)?,
            delta: divergence(MeasureKind::Triangular, p, q)?,
            delta_star: divergence(MeasureKind::DeltaStar, p, q)?,
            psi: divergence(MeasureKind::SymChi2, p, q)?,
            psi_star: divergence(MeasureKind::PsiStar, p, q)?,
            harmonic: divergence(MeasureKind::HarmonicMean, p, q)?,
            phi3_qp: phi_s(3.0, q, p)?,
            rho_phi_half: rho_phi_s(0.5, p, q)?,
        })
    }
}

/// Two-sided sandwich chains comparing a family divergence against the
/// type-s information via the extrema of the weight function over the
/// empirical ratio range.
pub fn theorem32_chain(
    family: GFamily,
    s: f64,
    p: &Distribution,
    q: &Distribution,
) -> Result<BoundChainReport> {
    let range = ratio_range(p, q)?;
    let id = match family {
        GFamily::Delta => format!("sandwich:delta:s={}", format_s(s)),
        GFamily::Psi => format!("sandwich:psi:s={}", format_s(s)),
        GFamily::PhiSBase => format!("sandwich:type_s_base:s={}", format_s(s)),
    };
    let extrema = match extrema_g(family, s, Some(&range)) {
        Ok(extrema) => extrema,
        Err(err) => return Ok(BoundChainReport::not_applicable(id, Some(s), &range, err.to_string())),
    };
    let m = extrema.m;
    let big_m = extrema.big_m.expect("bounded range has a finite supremum");

    let phi = phi_s(s, p, q)?;
    let rho_phi = rho_phi_s(s, p, q)?;
    let beta_phi = beta_phi_s(s, &range);

    let (c, c_star, beta_c) = match family {
        GFamily::Delta => (
            divergence(MeasureKind::Triangular, p, q)?,
            divergence(MeasureKind::DeltaStar, p, q)?,
            beta_delta(&range),
        ),
        GFamily::Psi => (
            divergence(MeasureKind::SymChi2, p, q)?,
            divergence(MeasureKind::PsiStar, p, q)?,
            beta_psi(&range),
        ),
        GFamily::PhiSBase => (phi, rho_phi - phi, beta_phi),
    };

    let rho_scale = big_m * rho_phi.abs().max(phi.abs());
    let beta_scale = (big_m * beta_phi.abs().max(phi.abs()))
        .max(beta_c.abs())
        .max(c.abs());

    let mut report = BoundChainReport::new(id, Some(s), &range);
    report.push("m*phi_s <= C", m * phi, c);
    report.push("C <= M*phi_s", c, big_m * phi);
    report.push_scaled(
        "m*(rho_phi_s - phi_s) <= C_star",
        m * (rho_phi - phi),
        c_star,
        rho_scale,
    );
    report.push_scaled(
        "C_star <= M*(rho_phi_s - phi_s)",
        c_star,
        big_m * (rho_phi - phi),
        rho_scale,
    );
    report.push_scaled(
        "m*(beta_phi_s - phi_s) <= beta_C - C",
        m * (beta_phi - phi),
        beta_c - c,
        beta_scale,
    );
    report.push_scaled(
        "beta_C - C <= M*(beta_phi_s - phi_s)",
        beta_c - c,
        big_m * (beta_phi - phi),
        beta_scale,
    );
    Ok(report)
}

/// The fixed-constant bound chains: two-sided comparisons at orders -1 and
/// 2, one-sided global-constant comparisons at orders 0, 1/2 and 1, and the
/// harmonic-mean corollary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Proposition {
    /// Triangular discrimination vs chi-square of the swapped pair.
    DeltaRevChi2,
    /// Triangular discrimination vs chi-square.
    DeltaChi2,
    /// Delta <= (32/27) K(Q||P).
    DeltaRevKl,
    /// Delta <= 4 h.
    DeltaHellinger,
    /// Delta <= (32/27) K(P||Q).
    DeltaKl,
    /// Symmetric chi-square vs chi-square of the swapped pair.
    PsiRevChi2,
    /// Symmetric chi-square vs chi-square.
    PsiChi2,
    /// 3*2^(1/3) K(Q||P) <= Psi.
    PsiRevKl,
    /// 16 h <= Psi.
    PsiHellinger,
    /// 3*2^(1/3) K(P||Q) <= Psi.
    PsiKl,
    /// Bounds on 1 - W inherited through Delta = 2(1 - W).
    HarmonicMeanRemark,
}

impl Proposition {
    pub const ALL: [Proposition; 11] = [
        Proposition::DeltaRevChi2,
        Proposition::DeltaChi2,
        Proposition::DeltaRevKl,
        Proposition::DeltaHellinger,
        Proposition::DeltaKl,
        Proposition::PsiRevChi2,
        Proposition::PsiChi2,
        Proposition::PsiRevKl,
        Proposition::PsiHellinger,
        Proposition::PsiKl,
        Proposition::HarmonicMeanRemark,
    ];

    /// Short catalog label used in chain ids and the CLI.
    pub fn label(&self) -> &'static str {
        match self {
            Proposition::DeltaRevChi2 => "4.1",
            Proposition::DeltaChi2 => "4.2",
            Proposition::DeltaRevKl => "4.3",
            Proposition::DeltaHellinger => "4.4",
            Proposition::DeltaKl => "4.5",
            Proposition::PsiRevChi2 => "5.1",
            Proposition::PsiChi2 => "5.2",
            Proposition::PsiRevKl => "5.3",
            Proposition::PsiHellinger => "5.4",
            Proposition::PsiKl => "5.5",
            Proposition::HarmonicMeanRemark => "hm",
        }
    }

    pub fn parse(text: &str) -> Option<Proposition> {
        let text = text.trim().trim_start_matches('P').trim_start_matches('p');
        Proposition::ALL.iter().copied().find(|p| p.label() == text)
    }
}

/// Evaluate every inequality of the named proposition on a pair, taking the
/// ratio range from the pair itself.
pub fn proposition_chain(
    id: Proposition,
    p: &Distribution,
    q: &Distribution,
) -> Result<BoundChainReport> {
    let ctx = PairContext::build(p, q)?;
    let (r, big_r) = (ctx.range.lower, ctx.range.upper);
    let beta_d = beta_delta(&ctx.range);
    let beta_p = beta_psi(&ctx.range);
    let mut report = BoundChainReport::new(format!("prop:{}", id.label()), None, &ctx.range);

    match id {
        Proposition::DeltaRevChi2 => {
            // Order -1 sandwich: m = 8r^3/(r+1)^3, M = 8R^3/(R+1)^3.
            let cl = 4.0 * r.powi(3) / (r + 1.0).powi(3);
            let cu = 4.0 * big_r.powi(3) / (big_r + 1.0).powi(3);
            let gap3 = 3.0 * ctx.phi3_qp - ctx.chi2_qp;
            let gap3_scale = 2.0 * cu * (3.0 * ctx.phi3_qp).max(ctx.chi2_qp);
            report.push("cl*rev_chi2 <= delta", cl * ctx.chi2_qp, ctx.delta);
            report.push("delta <= cu*rev_chi2", ctx.delta, cu * ctx.chi2_qp);
            report.push_scaled("2*cl*gap3 <= delta_star", 2.0 * cl * gap3, ctx.delta_star, gap3_scale);
            report.push_scaled("delta_star <= 2*cu*gap3", ctx.delta_star, 2.0 * cu * gap3, gap3_scale);
            let secant = (big_r - 1.0) * (1.0 - r) / (r * big_r);
            let gap = secant - ctx.chi2_qp;
            let gap_scale = (cu * secant.max(ctx.chi2_qp)).max(beta_d).max(ctx.delta);
            report.push_scaled("cl*gap <= beta_delta - delta", cl * gap, beta_d - ctx.delta, gap_scale);
            report.push_scaled("beta_delta - delta <= cu*gap", beta_d - ctx.delta, cu * gap, gap_scale);
        }
        Proposition::DeltaChi2 => {
            // Order 2 sandwich: m = 8/(R+1)^3, M = 8/(r+1)^3.
            let cl = 4.0 / (big_r + 1.0).powi(3);
            let cu = 4.0 / (r + 1.0).powi(3);
            report.push("cl*chi2 <= delta", cl * ctx.chi2_pq, ctx.delta);
            report.push("delta <= cu*chi2", ctx.delta, cu * ctx.chi2_pq);
            report.push("cl*chi2 <= delta_star", cl * ctx.chi2_pq, ctx.delta_star);
            report.push("delta_star <= cu*chi2", ctx.delta_star, cu * ctx.chi2_pq);
            let secant = (big_r - 1.0) * (1.0 - r);
            let gap = secant - ctx.chi2_pq;
            let gap_scale = (cu * secant.max(ctx.chi2_pq)).max(beta_d).max(ctx.delta);
            report.push_scaled("cl*gap <= beta_delta - delta", cl * gap, beta_d - ctx.delta, gap_scale);
            report.push_scaled("beta_delta - delta <= cu*gap", beta_d - ctx.delta, cu * gap, gap_scale);
        }
        Proposition::DeltaRevKl => {
            let c = SUP_G_DELTA;
            report.push("0 <= delta", 0.0, ctx.delta);
            report.push("delta <= c*rev_kl", ctx.delta, c * ctx.kl_qp);
            report.push_scaled(
                "delta_star <= c*(rev_chi2 - rev_kl)",
                ctx.delta_star,
                c * (ctx.chi2_qp - ctx.kl_qp),
                c * ctx.chi2_qp.max(ctx.kl_qp),
            );
            report.push_scaled(
                "0 <= c*rev_kl - delta",
                0.0,
                c * ctx.kl_qp - ctx.delta,
                (c * ctx.kl_qp).max(ctx.delta),
            );
            let beta_phi = beta_phi_s(0.0, &ctx.range);
            report.push_scaled(
                "c*rev_kl - delta <= c*beta_phi0 - beta_delta",
                c * ctx.kl_qp - ctx.delta,
                c * beta_phi - beta_d,
                (c * beta_phi.max(ctx.kl_qp)).max(beta_d).max(ctx.delta),
            );
        }
        Proposition::DeltaHellinger => {
            report.push("delta <= 4h", ctx.delta, 4.0 * ctx.hellinger);
            report.push_scaled(
                "delta_star <= rho_phi_half - 4h",
                ctx.delta_star,
                ctx.rho_phi_half - 4.0 * ctx.hellinger,
                ctx.rho_phi_half.max(4.0 * ctx.hellinger),
            );
            report.push_scaled(
                "0 <= 4h - delta",
                0.0,
                4.0 * ctx.hellinger - ctx.delta,
                (4.0 * ctx.hellinger).max(ctx.delta),
            );
            let beta_phi = beta_phi_s(0.5, &ctx.range);
            report.push_scaled(
                "4h - delta <= beta_phi_half - beta_delta",
                4.0 * ctx.hellinger - ctx.delta,
                beta_phi - beta_d,
                beta_phi.max(beta_d).max(4.0 * ctx.hellinger).max(ctx.delta),
            );
        }
        Proposition::DeltaKl => {
            let c = SUP_G_DELTA;
            report.push("delta <= c*kl", ctx.delta, c * ctx.kl_pq);
            report.push("delta_star <= c*rev_kl", ctx.delta_star, c * ctx.kl_qp);
            report.push_scaled(
                "0 <= c*kl - delta",
                0.0,
                c * ctx.kl_pq - ctx.delta,
                (c * ctx.kl_pq).max(ctx.delta),
            );
            let beta_phi = beta_phi_s(1.0, &ctx.range);
            report.push_scaled(
                "c*kl - delta <= c*beta_phi1 - beta_delta",
                c * ctx.kl_pq - ctx.delta,
                c * beta_phi - beta_d,
                (c * beta_phi.max(ctx.kl_pq)).max(beta_d).max(ctx.delta),
            );
        }
        Proposition::PsiRevChi2 => {
            // Order -1 sandwich: m = 2(r^3+1), M = 2(R^3+1).
            let cl = r.powi(3) + 1.0;
            let cu = big_r.powi(3) + 1.0;
            let gap3 = 3.0 * ctx.phi3_qp - ctx.chi2_qp;
            let gap3_scale = 2.0 * cu * (3.0 * ctx.phi3_qp).max(ctx.chi2_qp);
            report.push("cl*rev_chi2 <= psi", cl * ctx.chi2_qp, ctx.psi);
            report.push("psi <= cu*rev_chi2", ctx.psi, cu * ctx.chi2_qp);
            report.push_scaled("2*cl*gap3 <= psi_star", 2.0 * cl * gap3, ctx.psi_star, gap3_scale);
            report.push_scaled("psi_star <= 2*cu*gap3", ctx.psi_star, 2.0 * cu * gap3, gap3_scale);
            let secant = (big_r - 1.0) * (1.0 - r) / (r * big_r);
            let gap = secant - ctx.chi2_qp;
            let gap_scale = (cu * secant.max(ctx.chi2_qp)).max(beta_p).max(ctx.psi);
            report.push_scaled("cl*gap <= beta_psi - psi", cl * gap, beta_p - ctx.psi, gap_scale);
            report.push_scaled("beta_psi - psi <= cu*gap", beta_p - ctx.psi, cu * gap, gap_scale);
        }
        Proposition::PsiChi2 => {
            // Order 2 sandwich: m = 2(R^3+1)/R^3, M = 2(r^3+1)/r^3.
            let cl = (big_r.powi(3) + 1.0) / big_r.powi(3);
            let cu = (r.powi(3) + 1.0) / r.powi(3);
            report.push("cl*chi2 <= psi", cl * ctx.chi2_pq, ctx.psi);
            report.push("psi <= cu*chi2", ctx.psi, cu * ctx.chi2_pq);
            report.push("cl*chi2 <= psi_star", cl * ctx.chi2_pq, ctx.psi_star);
            report.push("psi_star <= cu*chi2", ctx.psi_star, cu * ctx.chi2_pq);
            let secant = (big_r - 1.0) * (1.0 - r);
            let gap = secant - ctx.chi2_pq;
            let gap_scale = (cu * secant.max(ctx.chi2_pq)).max(beta_p).max(ctx.psi);
            report.push_scaled("cl*gap <= beta_psi - psi", cl * gap, beta_p - ctx.psi, gap_scale);
            report.push_scaled("beta_psi - psi <= cu*gap", beta_p - ctx.psi, cu * gap, gap_scale);
        }
        Proposition::PsiRevKl => {
            let m = inf_g_psi_cbrt();
            report.push("0 <= m*rev_kl", 0.0, m * ctx.kl_qp);
            report.push("m*rev_kl <= psi", m * ctx.kl_qp, ctx.psi);
            report.push_scaled(
                "m*(rev_chi2 - rev_kl) <= psi_star",
                m * (ctx.chi2_qp - ctx.kl_qp),
                ctx.psi_star,
                m * ctx.chi2_qp.max(ctx.kl_qp),
            );
            report.push_scaled(
                "0 <= psi - m*rev_kl",
                0.0,
                ctx.psi - m * ctx.kl_qp,
                ctx.psi.max(m * ctx.kl_qp),
            );
            let beta_phi = beta_phi_s(0.0, &ctx.range);
            report.push_scaled(
                "psi - m*rev_kl <= beta_psi - m*beta_phi0",
                ctx.psi - m * ctx.kl_qp,
                beta_p - m * beta_phi,
                beta_p.max(m * beta_phi.max(ctx.kl_qp)).max(ctx.psi),
            );
        }
        Proposition::PsiHellinger => {
            report.push("16h <= psi", 16.0 * ctx.hellinger, ctx.psi);
            report.push_scaled(
                "4*(rho_phi_half - 4h) <= psi_star",
                4.0 * (ctx.rho_phi_half - 4.0 * ctx.hellinger),
                ctx.psi_star,
                4.0 * ctx.rho_phi_half.max(4.0 * ctx.hellinger),
            );
            report.push_scaled(
                "0 <= psi - 16h",
                0.0,
                ctx.psi - 16.0 * ctx.hellinger,
                ctx.psi.max(16.0 * ctx.hellinger),
            );
            let beta_phi = beta_phi_s(0.5, &ctx.range);
            report.push_scaled(
                "psi - 16h <= beta_psi - 4*beta_phi_half",
                ctx.psi - 16.0 * ctx.hellinger,
                beta_p - 4.0 * beta_phi,
                beta_p.max(4.0 * beta_phi).max(ctx.psi).max(16.0 * ctx.hellinger),
            );
        }
        Proposition::PsiKl => {
            let m = inf_g_psi_cbrt();
            report.push("m*kl <= psi", m * ctx.kl_pq, ctx.psi);
            report.push("m*rev_kl <= psi_star", m * ctx.kl_qp, ctx.psi_star);
            report.push_scaled(
                "0 <= psi - m*kl",
                0.0,
                ctx.psi - m * ctx.kl_pq,
                ctx.psi.max(m * ctx.kl_pq),
            );
            let beta_phi = beta_phi_s(1.0, &ctx.range);
            report.push_scaled(
                "psi - m*kl <= beta_psi - m*beta_phi1",
                ctx.psi - m * ctx.kl_pq,
                beta_p - m * beta_phi,
                beta_p.max(m * beta_phi.max(ctx.kl_pq)).max(ctx.psi),
            );
        }
        Proposition::HarmonicMeanRemark => {
            let one_minus_w = 1.0 - ctx.harmonic;
            let cl = 2.0 * r.powi(3) / (r + 1.0).powi(3);
            let cu = 2.0 * big_r.powi(3) / (big_r + 1.0).powi(3);
            report.push("cl*rev_chi2 <= 1-W", cl * ctx.chi2_qp, one_minus_w);
            report.push("1-W <= cu*rev_chi2", one_minus_w, cu * ctx.chi2_qp);
            let cl = 2.0 / (big_r + 1.0).powi(3);
            let cu = 2.0 / (r + 1.0).powi(3);
            report.push("cl*chi2 <= 1-W", cl * ctx.chi2_pq, one_minus_w);
            report.push("1-W <= cu*chi2", one_minus_w, cu * ctx.chi2_pq);
            report.push(
                "1-W <= (16/27)*rev_kl",
                one_minus_w,
                0.5 * SUP_G_DELTA * ctx.kl_qp,
            );
            report.push("1-W <= 2h", one_minus_w, 2.0 * ctx.hellinger);
            report.push(
                "1-W <= (16/27)*kl",
                one_minus_w,
                0.5 * SUP_G_DELTA * ctx.kl_pq,
            );
        }
    }
    Ok(report)
}
