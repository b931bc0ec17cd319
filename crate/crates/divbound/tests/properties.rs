//! Cross-checks between the closed-form measures, the generic f-divergence
//! engine, and the bound machinery, mostly over seeded random pairs.

use divbound::bounds::{
    beta_delta, beta_psi, extrema_g, g_function, proposition_chain, GFamily, Proposition,
};
use divbound::csiszar::{beta_phi_s, bound_set, c_f, gamma_phi_s, rho_c_f, Generator};
use divbound::measures::{divergence, phi_s, power_mean, rho_phi_s, MeasureKind};
use divbound::simplex::{ratio_range, Distribution, RatioRange};
use divbound::verify_all;
use proptest::prelude::*;

fn pairs(count: usize, dims: &[usize]) -> Vec<(Distribution, Distribution)> {
    let concentrations = [0.5, 1.0, 5.0];
    (0..count)
        .map(|i| {
            let n = dims[i % dims.len()];
            let conc = concentrations[(i / dims.len()) % concentrations.len()];
            (
                Distribution::sample(n, 1000 + 2 * i as u64, conc).unwrap(),
                Distribution::sample(n, 1001 + 2 * i as u64, conc).unwrap(),
            )
        })
        .collect()
}

fn assert_rel(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol * expected.abs().max(1.0),
        "{what}: expected {expected}, got {actual}"
    );
}

#[test]
fn structural_identities_hold() {
    for (p, q) in pairs(1000, &[2, 3, 8, 32]) {
        let delta = divergence(MeasureKind::Triangular, &p, &q).unwrap();
        let w = divergence(MeasureKind::HarmonicMean, &p, &q).unwrap();
        assert_rel(delta, 2.0 * (1.0 - w), 1e-10, "delta = 2(1 - W)");

        let h = divergence(MeasureKind::Hellinger, &p, &q).unwrap();
        let b = divergence(MeasureKind::Bhattacharya, &p, &q).unwrap();
        assert_rel(h, 1.0 - b, 1e-10, "h = 1 - B");

        let psi = divergence(MeasureKind::SymChi2, &p, &q).unwrap();
        let chi_pq = divergence(MeasureKind::Chi2, &p, &q).unwrap();
        let chi_qp = divergence(MeasureKind::Chi2, &q, &p).unwrap();
        assert_rel(psi, chi_pq + chi_qp, 1e-10, "psi = chi2 + rev chi2");

        let j = divergence(MeasureKind::JDivergence, &p, &q).unwrap();
        let kl_pq = divergence(MeasureKind::Kl, &p, &q).unwrap();
        let kl_qp = divergence(MeasureKind::Kl, &q, &p).unwrap();
        assert_rel(j, kl_pq + kl_qp, 1e-10, "J = KL + rev KL");

        let rho_delta = divergence(MeasureKind::RhoDelta, &p, &q).unwrap();
        let delta_star = divergence(MeasureKind::DeltaStar, &p, &q).unwrap();
        assert_rel(rho_delta, delta + delta_star, 1e-10, "rho_delta split");

        let rho_psi = divergence(MeasureKind::RhoPsi, &p, &q).unwrap();
        let psi_star = divergence(MeasureKind::PsiStar, &p, &q).unwrap();
        assert_rel(rho_psi, psi + psi_star, 1e-10, "rho_psi split");
    }
}

#[test]
fn type_s_particular_cases() {
    for (p, q) in pairs(1000, &[2, 4, 16]) {
        let chi_pq = divergence(MeasureKind::Chi2, &p, &q).unwrap();
        let chi_qp = divergence(MeasureKind::Chi2, &q, &p).unwrap();
        let kl_pq = divergence(MeasureKind::Kl, &p, &q).unwrap();
        let kl_qp = divergence(MeasureKind::Kl, &q, &p).unwrap();
        let h = divergence(MeasureKind::Hellinger, &p, &q).unwrap();

        assert_rel(phi_s(-1.0, &p, &q).unwrap(), 0.5 * chi_qp, 1e-10, "phi_-1");
        assert_rel(phi_s(0.0, &p, &q).unwrap(), kl_qp, 1e-10, "phi_0");
        assert_rel(phi_s(0.5, &p, &q).unwrap(), 4.0 * h, 1e-10, "phi_1/2");
        assert_rel(phi_s(1.0, &p, &q).unwrap(), kl_pq, 1e-10, "phi_1");
        assert_rel(phi_s(2.0, &p, &q).unwrap(), 0.5 * chi_pq, 1e-10, "phi_2");
    }
}

#[test]
fn rho_particular_cases() {
    for (p, q) in pairs(1000, &[2, 4, 16]) {
        let chi_pq = divergence(MeasureKind::Chi2, &p, &q).unwrap();
        let chi_qp = divergence(MeasureKind::Chi2, &q, &p).unwrap();
        let j = divergence(MeasureKind::JDivergence, &p, &q).unwrap();

        assert_rel(rho_phi_s(2.0, &p, &q).unwrap(), chi_pq, 1e-10, "rho phi_2");
        assert_rel(rho_phi_s(0.0, &p, &q).unwrap(), chi_qp, 1e-10, "rho phi_0");
        assert_rel(rho_phi_s(1.0, &p, &q).unwrap(), j, 1e-10, "rho phi_1");
        // rho - phi at order -1 equals 3 Phi_3(Q||P) - chi2(Q||P).
        let gap = rho_phi_s(-1.0, &p, &q).unwrap() - phi_s(-1.0, &p, &q).unwrap();
        let expected = 3.0 * phi_s(3.0, &q, &p).unwrap() - chi_qp;
        assert_rel(gap, expected, 1e-10, "rho - phi at order -1");
    }
}

#[test]
fn generic_engine_matches_closed_forms() {
    for (p, q) in pairs(500, &[2, 4, 8]) {
        for s in [-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0] {
            let gen = Generator::type_s(s);
            assert_rel(
                c_f(&gen, &p, &q).unwrap(),
                phi_s(s, &p, &q).unwrap(),
                1e-10,
                "c_f vs phi_s",
            );
            assert_rel(
                rho_c_f(&gen, &p, &q).unwrap(),
                rho_phi_s(s, &p, &q).unwrap(),
                1e-10,
                "rho_c_f vs rho_phi_s",
            );
        }
    }
}

#[test]
fn closed_form_secants_match_bound_set() {
    for (p, q) in pairs(300, &[2, 5, 11]) {
        let range = ratio_range(&p, &q).unwrap();
        assert_rel(
            beta_delta(&range),
            bound_set(&Generator::triangular(), &range).beta,
            1e-10,
            "beta_delta",
        );
        assert_rel(
            beta_psi(&range),
            bound_set(&Generator::symmetric_chi_square(), &range).beta,
            1e-10,
            "beta_psi",
        );
        for s in [-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0] {
            let set = bound_set(&Generator::type_s(s), &range);
            assert_rel(beta_phi_s(s, &range), set.beta, 1e-10, "beta_phi_s");
            assert_rel(gamma_phi_s(s, &range), set.gamma, 1e-10, "gamma_phi_s");
        }
    }
}

#[test]
fn gamma_power_mean_identities() {
    for (p, q) in pairs(300, &[3, 7]) {
        let range = ratio_range(&p, &q).unwrap();
        if range.is_degenerate() {
            continue;
        }
        let (r, big_r) = (range.lower, range.upper);
        // gamma of the type-s family is the (s-2)-logarithmic power mean of
        // the range endpoints raised to s-2 (the s = 1, 2 corners hit the
        // special power-mean branches and are covered elsewhere).
        for s in [-3.0, -1.0, 0.0, 0.5, 3.0, 5.0] {
            let lp = power_mean(s - 2.0, r, big_r);
            assert_rel(
                gamma_phi_s(s, &range),
                lp.powf(s - 2.0),
                1e-10,
                "gamma_phi_s power-mean form",
            );
        }
        // gamma of the symmetric chi-square: 2 + (r + R)/(r^2 R^2), which is
        // 2 + 2 L_{-3}(r,R)^{-3}.
        let gamma = bound_set(&Generator::symmetric_chi_square(), &range).gamma;
        assert_rel(
            gamma,
            2.0 + (r + big_r) / (r * r * big_r * big_r),
            1e-10,
            "gamma_psi closed form",
        );
        assert_rel(
            gamma,
            2.0 + 2.0 * power_mean(-3.0, r, big_r).powi(-3),
            1e-10,
            "gamma_psi power-mean form",
        );
    }
}

#[test]
fn branch_points_are_continuous() {
    for (p, q) in pairs(50, &[2, 6]) {
        for branch in [0.0, 1.0] {
            let at = phi_s(branch, &p, &q).unwrap();
            for eps in [1e-6, -1e-6] {
                let near = phi_s(branch + eps, &p, &q).unwrap();
                assert!(
                    (near - at).abs() <= 1e-4 * at.abs().max(1.0),
                    "phi_s jump at s={branch}: {at} vs {near}"
                );
            }
        }
        let at = rho_phi_s(1.0, &p, &q).unwrap();
        for eps in [1e-6, -1e-6] {
            let near = rho_phi_s(1.0 + eps, &p, &q).unwrap();
            assert!((near - at).abs() <= 1e-4 * at.abs().max(1.0));
        }
    }
}

#[test]
fn every_registered_chain_passes_on_random_pairs() {
    let all_s = [-3.0, -2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0];
    for (p, q) in pairs(200, &[2, 4, 16]) {
        for report in verify_all(&p, &q, &all_s).unwrap() {
            assert!(report.applicable, "{}", report.id);
            assert!(
                report.passed(),
                "{} failed: {:?} on p={:?} q={:?}",
                report.id,
                report.min_slack(),
                p.probs(),
                q.probs()
            );
        }
    }
}

#[test]
fn extrema_agree_with_grid_search_on_random_ranges() {
    for i in 0..20 {
        let p = Distribution::sample(6, 500 + i, 0.7).unwrap();
        let q = Distribution::sample(6, 900 + i, 0.7).unwrap();
        let range = ratio_range(&p, &q).unwrap();
        for family in [GFamily::Delta, GFamily::Psi] {
            for s in [-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0] {
                let extrema = extrema_g(family, s, Some(&range)).unwrap();
                // Log-spaced grid: ratio ranges can span many decades, and a
                // linear grid under-resolves interior stationary points.
                let (log_lo, log_hi) = (range.lower.ln(), range.upper.ln());
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for k in 0..=20_000 {
                    let x = (log_lo + (log_hi - log_lo) * k as f64 / 20_000.0).exp();
                    let g = g_function(family, s, x);
                    lo = lo.min(g);
                    hi = hi.max(g);
                }
                assert_rel(extrema.m, lo, 1e-6, "grid min");
                assert_rel(extrema.big_m.unwrap(), hi, 1e-6, "grid max");
            }
        }
    }
}

#[test]
fn near_vertex_pairs_tighten_the_hellinger_bound() {
    // Delta <= 4h gets tight as mass concentrates near a vertex, so the
    // minimum observed slack at a small Dirichlet concentration must sit
    // below the minimum at a large one.
    let min_slack = |concentration: f64, offset: u64| {
        let mut min = f64::INFINITY;
        for i in 0..10_000u64 {
            let p = Distribution::sample(2, offset + 2 * i, concentration).unwrap();
            let q = Distribution::sample(2, offset + 2 * i + 1, concentration).unwrap();
            let report = proposition_chain(Proposition::DeltaHellinger, &p, &q).unwrap();
            let link = &report.links[0];
            assert!(link.pass);
            min = min.min(link.slack);
        }
        min
    };
    assert!(min_slack(0.3, 10_000) < min_slack(5.0, 50_000));
}

proptest! {
    #[test]
    fn validated_vectors_round_trip(raw in prop::collection::vec(1e-6f64..1.0, 2..40)) {
        let sum: f64 = raw.iter().sum();
        let normalized: Vec<f64> = raw.iter().map(|v| v / sum).collect();
        let p = Distribution::validate(&normalized).unwrap();
        prop_assert_eq!(p.probs().len(), raw.len());
    }

    #[test]
    fn ratio_range_brackets_one(
        raw_p in prop::collection::vec(1e-6f64..1.0, 4),
        raw_q in prop::collection::vec(1e-6f64..1.0, 4),
    ) {
        let sp: f64 = raw_p.iter().sum();
        let sq: f64 = raw_q.iter().sum();
        let p = Distribution::validate(&raw_p.iter().map(|v| v / sp).collect::<Vec<_>>()).unwrap();
        let q = Distribution::validate(&raw_q.iter().map(|v| v / sq).collect::<Vec<_>>()).unwrap();
        let range = ratio_range(&p, &q).unwrap();
        prop_assert!(range.lower > 0.0 && range.lower <= 1.0);
        prop_assert!(range.upper >= 1.0 && range.upper.is_finite());
        for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
            prop_assert!(pi / qi >= range.lower - 1e-15 && pi / qi <= range.upper + 1e-15);
        }
    }

    #[test]
    fn power_mean_is_monotone_and_bracketed(
        a in 0.01f64..10.0,
        b in 0.01f64..10.0,
        lo in -4.0f64..3.9,
        step in 0.1f64..2.0,
    ) {
        let hi = lo + step;
        let low_mean = power_mean(lo, a, b);
        let high_mean = power_mean(hi, a, b);
        prop_assert!(low_mean <= high_mean + 1e-9 * high_mean.abs().max(1.0));
        let (min, max) = (a.min(b), a.max(b));
        prop_assert!(low_mean >= min - 1e-12 && high_mean <= max + 1e-12);
    }

    #[test]
    fn divergences_are_nonnegative(
        raw_p in prop::collection::vec(1e-6f64..1.0, 3),
        raw_q in prop::collection::vec(1e-6f64..1.0, 3),
    ) {
        let sp: f64 = raw_p.iter().sum();
        let sq: f64 = raw_q.iter().sum();
        let p = Distribution::validate(&raw_p.iter().map(|v| v / sp).collect::<Vec<_>>()).unwrap();
        let q = Distribution::validate(&raw_q.iter().map(|v| v / sq).collect::<Vec<_>>()).unwrap();
        for kind in MeasureKind::ALL {
            let value = divergence(kind, &p, &q).unwrap();
            prop_assert!(value >= kind.identity_value() - 1.0 - 1e-12, "{}", kind.name());
            if kind.identity_value() == 0.0 {
                prop_assert!(value >= -1e-12, "{}", kind.name());
            }
        }
    }
}

#[test]
fn c_f_is_jointly_convex() {
    for i in 0..200u64 {
        let p1 = Distribution::sample(4, 4 * i, 1.0).unwrap();
        let q1 = Distribution::sample(4, 4 * i + 1, 1.0).unwrap();
        let p2 = Distribution::sample(4, 4 * i + 2, 1.0).unwrap();
        let q2 = Distribution::sample(4, 4 * i + 3, 1.0).unwrap();
        let lambda = (i as f64 + 0.5) / 200.5;
        let mix = |a: &Distribution, b: &Distribution| {
            let mixed: Vec<f64> = a
                .probs()
                .iter()
                .zip(b.probs())
                .map(|(&x, &y)| lambda * x + (1.0 - lambda) * y)
                .collect();
            Distribution::validate(&mixed).unwrap()
        };
        let pm = mix(&p1, &p2);
        let qm = mix(&q1, &q2);
        for gen in [
            Generator::triangular(),
            Generator::symmetric_chi_square(),
            Generator::type_s(0.5),
        ] {
            let mixed = c_f(&gen, &pm, &qm).unwrap();
            let split = lambda * c_f(&gen, &p1, &q1).unwrap()
                + (1.0 - lambda) * c_f(&gen, &p2, &q2).unwrap();
            assert!(
                mixed <= split + 1e-10 * split.abs().max(1.0),
                "{}: {mixed} > {split}",
                gen.id()
            );
        }
    }
}

#[test]
fn explicit_range_widening_preserves_bounds() {
    // Bounds computed on a wider hand-supplied range must dominate the ones
    // from the empirical range.
    let p = Distribution::sample(5, 71, 1.0).unwrap();
    let q = Distribution::sample(5, 72, 1.0).unwrap();
    let tight = ratio_range(&p, &q).unwrap();
    let wide = RatioRange::new(tight.lower * 0.5, tight.upper * 2.0).unwrap();
    for gen in [Generator::triangular(), Generator::symmetric_chi_square()] {
        let tight_set = bound_set(&gen, &tight);
        let wide_set = bound_set(&gen, &wide);
        let c = c_f(&gen, &p, &q).unwrap();
        assert!(c <= tight_set.beta + 1e-12);
        assert!(tight_set.beta <= wide_set.beta + 1e-12);
        assert!(tight_set.alpha <= wide_set.alpha + 1e-12);
    }
}
