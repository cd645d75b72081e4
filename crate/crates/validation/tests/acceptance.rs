//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every criterion is reported even when an earlier one fails. Pass criterion
//! ids as arguments to run a subset.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use classext::correlations::{discord, discord_alpha_analytic, MeasurementOptConfig};
use classext::extension::{ancilla_diagnostics, ancilla_diagnostics_of, bound_f, liluo_extend, table1, verify_cq};
use classext::figures::{beta_lower_discord, param_grid, scatter};
use classext::genuine::is_genuinely_quantum;
use classext::linalg::{inner, kron, Side};
use classext::mdss::{mub_family, sic_tetrahedron};
use classext::search::{anneal, assemble, ua_opt, AnnealConfig, AnsatzState};
use classext::states::{family_state, haar_state, make_density, w_set, z_set, DensityMatrix, Family, ProductEnsemble};
use classext::{CMatrix, C64};
use classext_validation::{main_with, Criterion, Outcome};

fn cfg() -> MeasurementOptConfig {
    MeasurementOptConfig::default()
}

fn c1_alpha_one_third() -> Outcome {
    let rho = family_state(Family::Alpha, Some(1.0 / 3.0)).unwrap();
    let t = Instant::now();
    let numeric = discord(&rho, Side::A, &cfg()).unwrap();
    let elapsed = t.elapsed();
    let analytic = discord_alpha_analytic(1.0 / 3.0).unwrap();
    let pass = (numeric - 1.0 / 3.0).abs() <= 1e-4
        && (analytic - 1.0 / 3.0).abs() <= 1e-12
        && elapsed < Duration::from_secs(1);
    Outcome::new(
        pass,
        format!(
            "numeric {numeric:.6}, analytic {analytic:.12}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_table_rows() -> Outcome {
    let l3_expected = 0.75 * (4.0f64 / 3.0).log2();
    let l2_expected = 2.0 - (2f64.sqrt() / 2.0) * (3.0 + 2.0 * 2f64.sqrt()).log2();
    let l3 = discord(&family_state(Family::MaxL3, None).unwrap(), Side::A, &cfg()).unwrap();
    let l2 = discord(&family_state(Family::MaxL2, None).unwrap(), Side::A, &cfg()).unwrap();
    let pass = (l3 - l3_expected).abs() <= 1e-4 && (l2 - l2_expected).abs() <= 1e-4;
    Outcome::new(
        pass,
        format!("l=3 {l3:.6} (expected {l3_expected:.6}), l=2 {l2:.6} (expected {l2_expected:.6})"),
    )
}

fn c3_alpha_grid() -> Outcome {
    let grid = param_grid(Family::Alpha, 101).unwrap();
    let mut worst = (0.0f64, 0.0f64);
    for &a in &grid {
        let rho = family_state(Family::Alpha, Some(a)).unwrap();
        let dev = (discord(&rho, Side::A, &cfg()).unwrap() - discord_alpha_analytic(a).unwrap()).abs();
        if dev > worst.0 {
            worst = (dev, a);
        }
    }
    Outcome::new(
        worst.0 <= 1e-3,
        format!("max deviation {:.2e} at alpha {:.2} over 101 points", worst.0, worst.1),
    )
}

fn c4_z_set_extension() -> Outcome {
    let ext = liluo_extend(&z_set());
    let target = family_state(Family::TildeMax, None).unwrap();
    let red = ext.reduction().matrix().max_abs_diff(target.matrix());
    let cq = verify_cq(&ext.state, &ext.projectors(), 2).unwrap();
    let d = ancilla_diagnostics(&ext);
    let pass = red < 1e-12
        && cq.residual < 1e-10
        && (d.i_anc_a - 1.0).abs() <= 1e-6
        && (d.i_anc_b - 1.0).abs() <= 1e-6
        && (d.i_anc_ab - 3f64.log2()).abs() <= 1e-6;
    Outcome::new(
        pass,
        format!(
            "reduction err {red:.1e}, cq residual {:.1e}, I(anc:a) {:.6}, I(anc:b) {:.6}, I(anc:ab) {:.6}",
            cq.residual, d.i_anc_a, d.i_anc_b, d.i_anc_ab
        ),
    )
}

fn c5_bound_table() -> Outcome {
    let expected = [(1, 1, 1, 1, 1), (2, 2, 2, 4, 4), (3, 2, 8, 9, 81), (4, 3, 13, 16, 256)];
    let rows = table1();
    let table_ok = rows.len() == expected.len()
        && rows.iter().zip(&expected).all(|(r, &(d, lo, hi, llo, lhi))| {
            (r.d, r.min_low, r.min_high, r.luo_low, r.luo_high) == (d, lo, hi, llo, lhi)
        });
    let mut violations = 0;
    for da in 1..=6 {
        for db in 1..=6 {
            for l in 1..64 {
                if bound_f(da, db, l + 1).unwrap() < bound_f(da, db, l).unwrap() - 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    let shown: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "d={}: [{},{}]/[{},{}]",
                r.d, r.min_low, r.min_high, r.luo_low, r.luo_high
            )
        })
        .collect();
    Outcome::new(
        table_ok && violations == 0,
        format!("{}; monotonicity violations {violations}", shown.join(" ")),
    )
}

fn c6_anneal() -> Outcome {
    let mut parts = vec![];
    let mut pass = true;
    for (d_ancilla, threshold) in [(2usize, 0.310), (3usize, 0.330)] {
        let cfg = AnnealConfig::desk(d_ancilla);
        let t = Instant::now();
        let r = anneal(&cfg).unwrap();
        let elapsed = t.elapsed();
        let ok = r.best_discord >= threshold
            && r.best_discord <= 1.0 / 3.0 + 1e-3
            && r.chain_best.len() == 4
            && elapsed <= Duration::from_secs(600);
        pass &= ok;
        parts.push(format!(
            "d_A={} best {:.5} (need >= {threshold}) in {:.1} s",
            cfg.d_total(),
            r.best_discord,
            elapsed.as_secs_f64()
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn c7_ua_opt_fixture() -> Outcome {
    let (sigma, rho) = assemble(&ua_opt(), 3, 2, 2).unwrap();
    let dsc = discord(&rho, Side::A, &cfg()).unwrap();
    let d = ancilla_diagnostics_of(&sigma).unwrap();
    let pass =
        (dsc - 0.3333).abs() <= 1e-3 && d.i_anc_a <= 0.02 && d.i_anc_b <= 0.02 && (d.i_anc_ab - 0.585).abs() <= 0.02;
    Outcome::new(
        pass,
        format!(
            "discord {dsc:.5}, I(anc:a) {:.4}, I(anc:b) {:.4}, I(anc:ab) {:.4}",
            d.i_anc_a, d.i_anc_b, d.i_anc_ab
        ),
    )
}

fn c8_sic_and_mubs() -> Outcome {
    let sic = sic_tetrahedron();
    let z = sic.projectors();
    let mut sum = CMatrix::zeros(2, 2);
    for p in &z {
        sum = &sum + &p.scale_real(0.5);
    }
    let completeness = sum.max_abs_diff(&CMatrix::identity(2));
    let mut overlap_dev = 0.0f64;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            overlap_dev = overlap_dev.max((z[i].matmul(&z[j]).trace().re - 1.0 / 3.0).abs());
        }
    }
    let mut mub_dev = 0.0f64;
    let mut validators = true;
    for d in [2usize, 3, 5] {
        let fam = mub_family(d).unwrap();
        validators &= fam.validate().is_ok();
        for (m, bm) in fam.bases.iter().enumerate() {
            for bn in &fam.bases[m + 1..] {
                for e in bm {
                    for f in bn {
                        mub_dev = mub_dev.max((inner(e, f).norm_sqr() - 1.0 / d as f64).abs());
                    }
                }
            }
        }
    }
    let pass = completeness <= 1e-12 && overlap_dev <= 1e-12 && validators && mub_dev <= 1e-10;
    Outcome::new(
        pass,
        format!(
            "SIC completeness {completeness:.1e}, overlap dev {overlap_dev:.1e}; MUB validators {}, cross-overlap dev {mub_dev:.1e}",
            if validators { "ok" } else { "failed" }
        ),
    )
}

/// Classical on a `d_c`-level side, arbitrary on the `d_q`-level side.
fn random_cq(d_c: usize, d_q: usize, seed: u64) -> DensityMatrix {
    let mut m = CMatrix::zeros(d_c * d_q, d_c * d_q);
    for i in 0..d_c {
        let mut e = vec![C64::new(0.0, 0.0); d_c];
        e[i] = C64::new(1.0, 0.0);
        let sigma = haar_state(d_q, d_q, seed.wrapping_add(i as u64)).unwrap();
        m = &m + &kron(&CMatrix::outer(&e), sigma.matrix()).scale_real(1.0 / d_c as f64);
    }
    make_density(m, vec![d_c, d_q]).unwrap()
}

fn c9_genuineness() -> Outcome {
    let tilde = is_genuinely_quantum(&family_state(Family::TildeMax, None).unwrap()).unwrap();
    let l2 = is_genuinely_quantum(&family_state(Family::MaxL2, None).unwrap()).unwrap();
    let named_ok = tilde.genuine && tilde.rank == 4 && !l2.genuine && l2.rank == 2;

    let flatten = |ext_state: &DensityMatrix| -> DensityMatrix {
        let dims = ext_state.dims();
        ext_state.clone().with_dims(vec![dims[0] * dims[1], dims[2]]).unwrap()
    };
    let single = ProductEnsemble::new(
        vec![1.0],
        vec![z_set().a_kets()[0].clone()],
        vec![z_set().b_kets()[0].clone()],
    )
    .unwrap();
    let cq_states: Vec<(String, DensityMatrix)> = vec![
        ("extension(Z-set)".into(), flatten(&liluo_extend(&z_set()).state)),
        ("extension(W-set)".into(), flatten(&liluo_extend(&w_set()).state)),
        ("extension(single term)".into(), flatten(&liluo_extend(&single).state)),
        (
            "ansatz sigma(optimal unitary)".into(),
            flatten(&AnsatzState::new(ua_opt(), 3, 2).unwrap().sigma()),
        ),
        ("random CQ 2|2".into(), random_cq(2, 2, 11)),
        ("random CQ 2|3".into(), random_cq(2, 3, 12)),
        ("random CQ 3|2".into(), random_cq(3, 2, 13)),
    ];
    let mut cq_ok = true;
    let mut shown = vec![];
    for (name, rho) in &cq_states {
        let g = is_genuinely_quantum(rho).unwrap();
        let ok = g.rank <= g.d_min;
        cq_ok &= ok;
        shown.push(format!(
            "{name} L_R {} vs d_min {}{}",
            g.rank,
            g.d_min,
            if ok { "" } else { " (violates)" }
        ));
    }
    Outcome::new(
        named_ok && cq_ok,
        format!(
            "tilde_max L_R {} genuine {}; max_l2 L_R {} genuine {}; CQ: {}",
            tilde.rank,
            tilde.genuine,
            l2.rank,
            l2.genuine,
            shown.join(", ")
        ),
    )
}

fn c10_scatter() -> Outcome {
    let t = Instant::now();
    let rows = scatter(5000, &[2, 3, 4], 2024, &cfg()).unwrap();
    let elapsed = t.elapsed();
    let min_discord = rows.iter().map(|r| r.discord).fold(f64::INFINITY, f64::min);
    let (worst_gap, worst_eof) = rows
        .iter()
        .map(|r| (beta_lower_discord(r.eof) - r.discord, r.eof))
        .fold((f64::NEG_INFINITY, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc });
    let pass = rows.len() == 15000 && min_discord >= -1e-6 && worst_gap <= 0.01 && elapsed <= Duration::from_secs(300);
    Outcome::new(
        pass,
        format!(
            "{} rows, min discord {min_discord:.2e}, largest shortfall below beta curve {worst_gap:.4} at EoF {worst_eof:.3}, {:.1} s",
            rows.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    main_with(&[
        Criterion {
            id: 1,
            name: "alpha discord at 1/3",
            run: c1_alpha_one_third,
        },
        Criterion {
            id: 2,
            name: "maximal-discord rows l=3, l=2",
            run: c2_table_rows,
        },
        Criterion {
            id: 3,
            name: "alpha analytic vs numeric",
            run: c3_alpha_grid,
        },
        Criterion {
            id: 4,
            name: "Z-set classical-quantum extension",
            run: c4_z_set_extension,
        },
        Criterion {
            id: 5,
            name: "ancilla bound table",
            run: c5_bound_table,
        },
        Criterion {
            id: 6,
            name: "annealed ansatz search",
            run: c6_anneal,
        },
        Criterion {
            id: 7,
            name: "optimal unitary fixture",
            run: c7_ua_opt_fixture,
        },
        Criterion {
            id: 8,
            name: "SIC and MUB structure",
            run: c8_sic_and_mubs,
        },
        Criterion {
            id: 9,
            name: "genuineness by correlation rank",
            run: c9_genuineness,
        },
        Criterion {
            id: 10,
            name: "Haar scatter above beta curve",
            run: c10_scatter,
        },
    ])
}
