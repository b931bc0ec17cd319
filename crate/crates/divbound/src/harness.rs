//! Randomized verification: samples distribution pairs, runs every
//! registered inequality chain, aggregates violations and slack statistics,
//! and compares the as-printed variants of the flagged closed forms against
//! their theorem-derived counterparts.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    beta_psi, proposition_chain, theorem32_chain, BoundChainReport, GFamily, Proposition,
};
use crate::csiszar::{beta_phi_s, bound_set, c_f, rho_c_f, Generator};
use crate::error::Result;
use crate::measures::{divergence, phi_s, MeasureKind};
use crate::simplex::{ratio_range, Distribution};

/// Orders exercised by default: the monotone closed-form regimes plus the
/// three globally-constant interior orders.
pub const DEFAULT_S_VALUES: [f64; 9] = [-3.0, -2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0];

/// Configuration for [`fuzz`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzConfig {
    /// Simplex dimensions to sample; each must be >= 2.
    pub dims: Vec<usize>,
    /// Trials per (dimension, concentration) cell.
    pub trials_per_dim: usize,
    pub seed: u64,
    /// Symmetric Dirichlet concentrations; small values stress wide ratio
    /// ranges.
    pub concentrations: Vec<f64>,
    pub s_values: Vec<f64>,
    /// Multiplier on the link tolerance used to classify violations.
    pub tolerance_scale: f64,
    /// Cap on worker threads; `None` uses the global default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 4, 16],
            trials_per_dim: 1000,
            seed: 42,
            concentrations: vec![0.5, 1.0, 5.0],
            s_values: DEFAULT_S_VALUES.to_vec(),
            tolerance_scale: 1.0,
            threads: None,
        }
    }
}

/// Coordinates of one sampled trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialKey {
    pub dim: usize,
    pub concentration: f64,
    pub trial: usize,
}

/// A link whose slack fell below the (scaled) tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub chain: String,
    pub link: String,
    pub slack: f64,
    pub trial: TrialKey,
}

/// Tightest observed slack for one chain, with the trial that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct SlackWitness {
    pub slack: f64,
    pub link: String,
    pub trial: TrialKey,
}

/// Worst observed disagreement between an as-printed form and its derived
/// counterpart.
#[derive(Debug, Clone, Serialize)]
pub struct ErrataDiff {
    pub equation: String,
    pub item: String,
    pub as_printed: f64,
    pub derived: f64,
    pub trial: TrialKey,
}

/// Aggregate result of a fuzz run. Deterministic for a fixed config: maps
/// are ordered and tie-breaks favor the earliest trial in iteration order.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub trials_run: usize,
    pub total_links_checked: u64,
    pub violations: Vec<Violation>,
    pub min_slack_per_chain: BTreeMap<String, SlackWitness>,
    pub errata_diffs: Vec<ErrataDiff>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One evaluated as-printed vs derived comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ErrataEntry {
    pub equation: String,
    pub item: String,
    pub as_printed: f64,
    pub derived: f64,
    pub agree: bool,
}

fn errata_entry(equation: &str, item: &str, as_printed: f64, derived: f64) -> ErrataEntry {
    let agree =
        (as_printed - derived).abs() <= 1e-9 * as_printed.abs().max(derived.abs()).max(1.0);
    ErrataEntry {
        equation: equation.to_string(),
        item: item.to_string(),
        as_printed,
        derived,
        agree,
    }
}

/// Chain over the generic secant/curvature bound set: 0 <= C_f <= rho, and
/// the beta-gap sandwich against the curvature term.
fn generic_chain(
    gen: &Generator,
    s: Option<f64>,
    p: &Distribution,
    q: &Distribution,
) -> Result<BoundChainReport> {
    let range = ratio_range(p, q)?;
    let set = bound_set(gen, &range);
    let c = c_f(gen, p, q)?;
    let rho = rho_c_f(gen, p, q)?;
    let chi2 = divergence(MeasureKind::Chi2, p, q)?;
    let gap = (range.upper - 1.0) * (1.0 - range.lower) - chi2;

    let secant = (range.upper - 1.0) * (1.0 - range.lower);
    let gap_scale = (set.gamma * secant.max(chi2)).max(set.beta).max(c);

    let mut report = BoundChainReport::new(format!("generic:{}", gen.id()), s, &range);
    report.push("0 <= C_f", 0.0, c);
    report.push("C_f <= rho", c, rho);
    report.push_scaled("0 <= beta - C_f", 0.0, set.beta - c, set.beta.max(c));
    report.push_scaled("beta - C_f <= gamma*gap", set.beta - c, set.gamma * gap, gap_scale);
    report.push_scaled("gamma*gap <= alpha", set.gamma * gap, set.alpha, gap_scale.max(set.alpha));
    Ok(report)
}

/// Run every registered chain on one pair, in deterministic id order.
///
/// Inadmissible orders never occur here: the empirical ratio range is always
/// bounded, so every sandwich chain is applicable.
pub fn verify_all(
    p: &Distribution,
    q: &Distribution,
    s_values: &[f64],
) -> Result<Vec<BoundChainReport>> {
    let mut orders: Vec<f64> = Vec::new();
    for &s in s_values {
        if !orders.iter().any(|&seen| seen == s) {
            orders.push(s);
        }
    }

    let mut reports = Vec::new();
    reports.push(generic_chain(&Generator::triangular(), None, p, q)?);
    reports.push(generic_chain(&Generator::symmetric_chi_square(), None, p, q)?);
    for &s in &orders {
        reports.push(generic_chain(&Generator::type_s(s), Some(s), p, q)?);
        reports.push(theorem32_chain(GFamily::Delta, s, p, q)?);
        reports.push(theorem32_chain(GFamily::Psi, s, p, q)?);
    }
    for prop in Proposition::ALL {
        reports.push(proposition_chain(prop, p, q)?);
    }
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(reports)
}

/// Evaluate the as-printed and theorem-derived variants of each flagged
/// closed form on one pair.
///
/// Each flagged form yields realized-value entries (which collapse to
/// agreeing zeros at P = Q) and, on a non-degenerate range, raw coefficient
/// entries that witness the transcription disagreement directly.
pub fn errata_compare(p: &Distribution, q: &Distribution) -> Result<Vec<ErrataEntry>> {
    let range = ratio_range(p, q)?;
    let (r, big_r) = (range.lower, range.upper);
    let mut entries = Vec::new();

    // Flagged form 1 ("eq54"): beta-gap coefficients for the triangular
    // discrimination at order 2. Printed x^(1-s)/(x+1)^2; derived
    // 8 x^(2-s)/(x+1)^3.
    {
        let s = 2.0;
        let printed_lo = big_r.powf(1.0 - s) / (big_r + 1.0).powi(2);
        let derived_lo = 8.0 * big_r.powf(2.0 - s) / (big_r + 1.0).powi(3);
        let printed_hi = r.powf(1.0 - s) / (r + 1.0).powi(2);
        let derived_hi = 8.0 * r.powf(2.0 - s) / (r + 1.0).powi(3);
        if !range.is_degenerate() {
            entries.push(errata_entry("eq54", "lower_coefficient", printed_lo, derived_lo));
            entries.push(errata_entry("eq54", "upper_coefficient", printed_hi, derived_hi));
        }
        let bracket = beta_phi_s(s, &range) - phi_s(s, p, q)?;
        entries.push(errata_entry(
            "eq54",
            "lower_value",
            printed_lo * bracket,
            derived_lo * bracket,
        ));
        entries.push(errata_entry(
            "eq54",
            "upper_value",
            printed_hi * bracket,
            derived_hi * bracket,
        ));
    }

    // Flagged form 2 ("eq93"): secant bound on the symmetric chi-square.
    // Printed (R-1)(1-r)(R+r); derived (R-1)(1-r)(1+rR)/(rR).
    {
        let printed = (big_r - 1.0) * (1.0 - r) * (big_r + r);
        entries.push(errata_entry("eq93", "beta_psi", printed, beta_psi(&range)));
    }

    // Flagged form 3 ("eq99"): sandwich coefficients for the symmetric
    // chi-square at order 2. Printed repeats the r-side coefficient
    // 2(r^3+1)/r^(1+s) on both sides; derived lower side is
    // 2(R^3+1)/R^(1+s).
    {
        let s = 2.0;
        let printed_lo = 2.0 * (r.powi(3) + 1.0) / r.powf(1.0 + s);
        let derived_lo = 2.0 * (big_r.powi(3) + 1.0) / big_r.powf(1.0 + s);
        let coeff_hi = printed_lo;
        if !range.is_degenerate() {
            entries.push(errata_entry("eq99", "lower_coefficient", printed_lo, derived_lo));
            entries.push(errata_entry("eq99", "upper_coefficient", coeff_hi, coeff_hi));
        }
        let phi2 = phi_s(s, p, q)?;
        entries.push(errata_entry(
            "eq99",
            "lower_value",
            printed_lo * phi2,
            derived_lo * phi2,
        ));
    }

    // Flagged form 4 ("eq107"): the order -1 gap for the symmetric
    // chi-square. Printed mixes the operand order across its two sides; the
    // derived form uses the swapped-argument type-3 information throughout.
    {
        let chi2_qp = divergence(MeasureKind::Chi2, q, p)?;
        let derived_gap = 3.0 * phi_s(3.0, q, p)? - chi2_qp;
        let printed_gap = 3.0 * phi_s(3.0, p, q)? - chi2_qp;
        let coeff = 2.0 * (big_r.powi(3) + 1.0);
        entries.push(errata_entry(
            "eq107",
            "upper_value",
            coeff * printed_gap,
            coeff * derived_gap,
        ));
    }

    Ok(entries)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn trial_seed(seed: u64, key: &TrialKey) -> u64 {
    let mut h = splitmix64(seed ^ key.dim as u64);
    h = splitmix64(h ^ key.concentration.to_bits());
    splitmix64(h ^ key.trial as u64)
}

struct TrialOutcome {
    key: TrialKey,
    links_checked: u64,
    violations: Vec<Violation>,
    min_slack: Vec<(String, String, f64)>,
    errata: Vec<ErrataEntry>,
}

fn run_trial(config: &FuzzConfig, key: TrialKey) -> Result<TrialOutcome> {
    let base = trial_seed(config.seed, &key);
    let p = Distribution::sample(key.dim, splitmix64(base), key.concentration)?;
    let q = Distribution::sample(key.dim, splitmix64(base ^ 1), key.concentration)?;

    let mut links_checked = 0u64;
    let mut violations = Vec::new();
    let mut min_slack = Vec::new();
    for report in verify_all(&p, &q, &config.s_values)? {
        if !report.applicable {
            continue;
        }
        let mut tightest: Option<(&str, f64)> = None;
        for link in &report.links {
            links_checked += 1;
            if link.slack < -config.tolerance_scale * link.tol {
                violations.push(Violation {
                    chain: report.id.clone(),
                    link: link.label.clone(),
                    slack: link.slack,
                    trial: key,
                });
            }
            if tightest.map_or(true, |(_, slack)| link.slack < slack) {
                tightest = Some((&link.label, link.slack));
            }
        }
        if let Some((label, slack)) = tightest {
            min_slack.push((report.id.clone(), label.to_string(), slack));
        }
    }
    let errata = errata_compare(&p, &q)?;
    Ok(TrialOutcome {
        key,
        links_checked,
        violations,
        min_slack,
        errata,
    })
}

/// Sample pairs per the config and run every registered chain on each.
///
/// Trials execute in parallel but are folded in a fixed order, so the
/// summary is identical across schedules and thread counts.
pub fn fuzz(config: &FuzzConfig) -> Result<FuzzSummary> {
    assert!(config.trials_per_dim >= 1, "trials_per_dim must be >= 1");
    assert!(!config.dims.is_empty() && config.dims.iter().all(|&n| n >= 2));
    assert!(config.tolerance_scale > 0.0);

    let mut keys = Vec::new();
    for &dim in &config.dims {
        for &concentration in &config.concentrations {
            for trial in 0..config.trials_per_dim {
                keys.push(TrialKey {
                    dim,
                    concentration,
                    trial,
                });
            }
        }
    }

    let run = || -> Result<Vec<TrialOutcome>> {
        keys.par_iter()
            .map(|&key| run_trial(config, key))
            .collect()
    };
    let outcomes = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool construction")
            .install(run),
        None => run(),
    }?;

    let mut total_links_checked = 0u64;
    let mut violations = Vec::new();
    let mut min_slack_per_chain: BTreeMap<String, SlackWitness> = BTreeMap::new();
    let mut worst_errata: BTreeMap<(String, String), ErrataDiff> = BTreeMap::new();
    for outcome in outcomes {
        total_links_checked += outcome.links_checked;
        violations.extend(outcome.violations);
        for (chain, link, slack) in outcome.min_slack {
            let witness = SlackWitness {
                slack,
                link,
                trial: outcome.key,
            };
            match min_slack_per_chain.get_mut(&chain) {
                Some(current) if current.slack <= slack => {}
                Some(current) => *current = witness,
                None => {
                    min_slack_per_chain.insert(chain, witness);
                }
            }
        }
        for entry in outcome.errata {
            if entry.agree {
                continue;
            }
            let gap = (entry.as_printed - entry.derived).abs();
            let key = (entry.equation.clone(), entry.item.clone());
            let keep = match worst_errata.get(&key) {
                Some(current) => gap > (current.as_printed - current.derived).abs(),
                None => true,
            };
            if keep {
                worst_errata.insert(
                    key,
                    ErrataDiff {
                        equation: entry.equation,
                        item: entry.item,
                        as_printed: entry.as_printed,
                        derived: entry.derived,
                        trial: outcome.key,
                    },
                );
            }
        }
    }
    violations.sort_by(|a, b| {
        (a.trial.dim, a.trial.trial, &a.chain, &a.link).partial_cmp(&(
            b.trial.dim,
            b.trial.trial,
            &b.chain,
            &b.link,
        ))
        .expect("total order on violation keys")
    });

    Ok(FuzzSummary {
        config: config.clone(),
        trials_run: keys.len(),
        total_links_checked,
        violations,
        min_slack_per_chain,
        errata_diffs: worst_errata.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness() -> (Distribution, Distribution) {
        (
            Distribution::validate(&[0.5, 0.5]).unwrap(),
            Distribution::validate(&[0.25, 0.75]).unwrap(),
        )
    }

    #[test]
    fn verify_all_passes_on_witness_pair() {
        let (p, q) = witness();
        let reports = verify_all(&p, &q, &[-1.0, 0.0, 0.5, 1.0, 2.0]).unwrap();
        assert!(!reports.is_empty());
        for report in &reports {
            assert!(report.applicable, "{}", report.id);
            assert!(report.passed(), "{}: {:?}", report.id, report.min_slack());
        }
        // Deterministic id ordering.
        let ids: Vec<&str> = reports.iter().map(|r| r.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn verify_all_collapses_at_identity() {
        let p = Distribution::uniform(4).unwrap();
        for report in verify_all(&p, &p, &DEFAULT_S_VALUES).unwrap() {
            for link in &report.links {
                assert!(
                    link.lhs.abs() < 1e-12 && link.rhs.abs() < 1e-12,
                    "{} {}",
                    report.id,
                    link.label
                );
            }
        }
    }

    #[test]
    fn errata_flags_disagreements_on_witness_pair() {
        let (p, q) = witness();
        let entries = errata_compare(&p, &q).unwrap();
        let find = |equation: &str, item: &str| {
            entries
                .iter()
                .find(|e| e.equation == equation && e.item == item)
                .unwrap_or_else(|| panic!("missing {equation}:{item}"))
        };

        let eq54 = find("eq54", "lower_coefficient");
        assert!(!eq54.agree);
        assert!((eq54.as_printed - 1.0 / 18.0).abs() < 1e-12);
        assert!((eq54.derived - 8.0 / 27.0).abs() < 1e-12);

        let eq99 = find("eq99", "lower_coefficient");
        assert!(!eq99.agree);
        assert!((eq99.as_printed - 8.75).abs() < 1e-12);
        assert!((eq99.derived - 2.25).abs() < 1e-12);

        assert!(!find("eq93", "beta_psi").agree);
        assert!(!find("eq107", "upper_value").agree);
        assert!(find("eq99", "upper_coefficient").agree);
    }

    #[test]
    fn errata_agrees_when_distributions_coincide() {
        let p = Distribution::validate(&[0.2, 0.3, 0.5]).unwrap();
        for entry in errata_compare(&p, &p).unwrap() {
            assert!(entry.agree, "{}:{}", entry.equation, entry.item);
            assert!(entry.as_printed.abs() < 1e-15);
        }
    }

    #[test]
    fn fuzz_small_config_is_clean_and_deterministic() {
        let config = FuzzConfig {
            dims: vec![2, 3],
            trials_per_dim: 20,
            seed: 7,
            concentrations: vec![1.0],
            s_values: vec![-1.0, 0.5, 2.0],
            tolerance_scale: 1.0,
            threads: Some(2),
        };
        let a = fuzz(&config).unwrap();
        assert!(a.passed(), "{:?}", a.violations);
        assert_eq!(a.trials_run, 40);
        assert!(a.total_links_checked > 0);
        assert!(!a.errata_diffs.is_empty());

        let b = fuzz(&config).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn fuzz_link_count_scales_with_trials() {
        let base = FuzzConfig {
            dims: vec![2],
            trials_per_dim: 1,
            seed: 3,
            concentrations: vec![1.0],
            s_values: vec![2.0],
            tolerance_scale: 1.0,
            threads: Some(1),
        };
        let one = fuzz(&base).unwrap();
        let per_trial = one.total_links_checked;
        assert!(per_trial > 0);
        let three = fuzz(&FuzzConfig {
            trials_per_dim: 3,
            ..base
        })
        .unwrap();
        assert_eq!(three.total_links_checked, 3 * per_trial);
    }
}
