use serde::Serialize;
use serde_json::json;

use typeiia_core::catalog::{self, CatalogEntry};
use typeiia_core::check::{all_pass, Check};
use typeiia_core::flow::{write_csv, SolverRegistry, SpecialFlow, Trajectory};
use typeiia_core::multilinear::standard;
use typeiia_core::su3::{build_su3, eigen_constraint, lemma1_campaign};

use crate::{Common, Failure, FlowArgs, Format, LemmaArgs, Output};

/// Residual bound for the ansatz and closed-form flow checks.
const ANSATZ_TOL: f64 = 1e-7;
/// Relative RK4 deviation bound.
const RK4_TOL: f64 = 1e-6;
const ANSATZ_SAMPLES: usize = 10;
/// Fraction of the distance to a finite interval endpoint that a requested range may reach.
const CLAMP_FRACTION: f64 = 0.8;

pub fn validate(c: &Common) -> Result<(), Failure> {
    if !(c.epsilon > 0.0) {
        return Err(Failure::Usage(format!(
            "--epsilon must be positive, got {}",
            c.epsilon
        )));
    }
    if !(c.f0 > 0.0) {
        return Err(Failure::Usage(format!(
            "--f0 must be positive, got {}",
            c.f0
        )));
    }
    if !(c.param_a > 0.0) {
        return Err(Failure::Usage(format!(
            "--param-a must be positive, got {}",
            c.param_a
        )));
    }
    if c.algebra != "all" && !catalog::NAMES.contains(&c.algebra.as_str()) {
        return Err(Failure::Usage(format!(
            "unknown algebra {:?}; expected one of {} or all",
            c.algebra,
            catalog::NAMES.join(", ")
        )));
    }
    Ok(())
}

fn selected(c: &Common) -> Vec<&'static str> {
    if c.algebra == "all" {
        catalog::NAMES.to_vec()
    } else {
        catalog::NAMES
            .iter()
            .copied()
            .filter(|n| *n == c.algebra)
            .collect()
    }
}

/// Numbers close to an integer print as integers, others with up to 9 decimals.
fn num(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        let s = format!("{x:.9}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Report {
    algebra: String,
    checks: Vec<Check>,
    regime: String,
}

fn verify_one(entry: &CatalogEntry, c: &Common) -> Result<Report, Failure> {
    let eps = c.epsilon;
    let mut checks = catalog::verify_entry(entry, eps)?.checks;
    checks.extend(catalog::invariant_checks(entry, eps)?);
    let flow = SpecialFlow::from_entry(entry, c.f0, eps)?;
    let r = flow.verify_ansatz(&flow.sample_times(-0.05, 0.05, ANSATZ_SAMPLES))?;
    checks.extend([
        Check::at_most("ansatz_rhs", r.rhs_residual, 0.0, ANSATZ_TOL),
        Check::at_most("ansatz_norm", r.f_residual, 0.0, ANSATZ_TOL),
        Check::at_most("ansatz_psi_minus", r.psi_minus_residual, 0.0, ANSATZ_TOL),
        Check::at_most(
            "ansatz_normalization",
            r.normalization_residual,
            0.0,
            ANSATZ_TOL,
        ),
        Check::at_most("ansatz_w2", r.w2_residual, 0.0, ANSATZ_TOL),
        Check::at_most("ansatz_nijenhuis", r.nijenhuis_residual, 0.0, ANSATZ_TOL),
        Check::at_most("ansatz_dF_dt", r.f_derivative_residual, 0.0, ANSATZ_TOL),
    ]);
    let regime = flow
        .solution
        .map_or("Stationary".to_string(), |s| s.regime.tag.to_string());
    Ok(Report {
        algebra: entry.name.to_string(),
        checks,
        regime,
    })
}

pub fn verify(c: &Common) -> Result<Output, Failure> {
    let names = selected(c);
    // one worker per algebra; results are collected in catalog order
    let results: Vec<Result<Report, Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names
            .iter()
            .map(|name| {
                scope.spawn(move || {
                    let entry = catalog::get(name, c.param_a)?;
                    verify_one(&entry, c)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| all_pass(&r.checks));
    let body = match c.format {
        Format::Json if reports.len() == 1 => to_json(&reports[0]),
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut s = String::from("algebra,name,pass,lhs,rhs,tol\n");
            for r in &reports {
                for k in &r.checks {
                    s += &format!(
                        "{},{},{},{},{},{}\n",
                        r.algebra, k.name, k.pass, k.lhs, k.rhs, k.tol
                    );
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let ok = r.checks.iter().filter(|k| k.pass).count();
                s += &format!(
                    "{}: {ok}/{} checks passed, regime={}\n",
                    r.algebra,
                    r.checks.len(),
                    r.regime
                );
                for k in r.checks.iter().filter(|k| !k.pass) {
                    s += &format!(
                        "  FAIL {}: lhs={} rhs={} tol={}\n",
                        k.name, k.lhs, k.rhs, k.tol
                    );
                }
            }
            s
        }
    };
    Ok(Output { body, pass })
}

#[derive(Serialize)]
struct Row {
    algebra: &'static str,
    c: f64,
    w2_norm_sq: f64,
    ratio: Option<&'static str>,
    hermitian_ricci: bool,
    regime: String,
    /// Cells that differ from the catalog, as `name: got vs expected`.
    mismatches: Vec<String>,
}

pub fn table(c: &Common) -> Result<Output, Failure> {
    let mut rows = Vec::new();
    for name in selected(c) {
        let entry = catalog::get(name, c.param_a)?;
        let (_, r) = catalog::analyze(&entry, c.epsilon)?;
        let flow = SpecialFlow::from_entry(&entry, c.f0, c.epsilon)?;
        let got_c = r.c.unwrap_or(f64::NAN);
        let e = &entry.expected;
        let tol = |x: f64| c.epsilon * x.abs().max(1.0);
        let mut mismatches = Vec::new();
        if !((got_c - e.c).abs() <= tol(e.c)) {
            mismatches.push(format!("c: {got_c} vs {}", e.c));
        }
        if !((r.w2_norm_sq - e.w2_norm_sq).abs() <= tol(e.w2_norm_sq)) {
            mismatches.push(format!("w2: {} vs {}", r.w2_norm_sq, e.w2_norm_sq));
        }
        let ratio = catalog::ratio_label(got_c, r.w2_norm_sq, 1e-6);
        if ratio.is_none() {
            mismatches.push(format!(
                "ratio: {} not in {{1, 1/2, 1/3, 1/4}}",
                got_c / r.w2_norm_sq
            ));
        }
        rows.push(Row {
            algebra: entry.name,
            c: got_c,
            w2_norm_sq: r.w2_norm_sq,
            ratio,
            hermitian_ricci: r.flags.hermitian_ricci,
            regime: flow
                .solution
                .map_or("Stationary".to_string(), |s| s.regime.tag.to_string()),
            mismatches,
        });
    }
    let pass = rows.iter().all(|r| r.mismatches.is_empty());
    let body = match c.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("algebra,c,w2_norm_sq,ratio,hermitian_ricci,regime\n");
            for r in &rows {
                s += &format!(
                    "{},{},{},{},{},{}\n",
                    r.algebra,
                    num(r.c),
                    num(r.w2_norm_sq),
                    r.ratio.unwrap_or("?"),
                    r.hermitian_ricci,
                    r.regime
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                s += &format!(
                    "{}: c={}, w²={}, ratio={}, regime={}, hermitian_ricci={}\n",
                    r.algebra,
                    num(r.c),
                    num(r.w2_norm_sq),
                    r.ratio.unwrap_or("?"),
                    r.regime,
                    r.hermitian_ricci
                );
                for m in &r.mismatches {
                    s += &format!("  MISMATCH {m}\n");
                }
            }
            s
        }
    };
    Ok(Output { body, pass })
}

fn flow_checks(traj: &Trajectory, method: &str) -> Vec<Check> {
    let mut checks = vec![Check::flag("not_truncated", traj.truncated.is_none())];
    let size = traj
        .samples
        .iter()
        .map(|s| s.phi.max_abs())
        .fold(1.0, f64::max);
    let worst = traj.samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    checks.push(match method {
        "rk4" => Check::at_most("rk4_deviation", worst / size, 0.0, RK4_TOL),
        _ => Check::at_most("closed_form_residual", worst / size, 0.0, ANSATZ_TOL),
    });
    checks
}

pub fn flow(f: &FlowArgs) -> Result<Output, Failure> {
    let c = &f.common;
    if c.algebra == "all" {
        return Err(Failure::Usage("flow needs a single --algebra".into()));
    }
    if !(f.dt > 0.0) {
        return Err(Failure::Usage(format!(
            "--dt must be positive, got {}",
            f.dt
        )));
    }
    if !(f.t1 >= f.t0) {
        return Err(Failure::Usage(format!(
            "--t1 ({}) must not be below --t0 ({})",
            f.t1, f.t0
        )));
    }
    let registry = SolverRegistry::default();
    let solver = registry.get(&f.method)?;
    let entry = catalog::get(&c.algebra, c.param_a)?;
    let flow = SpecialFlow::from_entry(&entry, c.f0, c.epsilon)?;
    let (lo, hi) = flow.interval();
    let t0 = f.t0.max(CLAMP_FRACTION * lo);
    let t1 = f.t1.min(CLAMP_FRACTION * hi);
    if t0 != f.t0 || t1 != f.t1 {
        eprintln!(
            "warning: [{}, {}] truncated to [{t0}, {t1}] inside the maximal interval ({lo}, {hi})",
            f.t0, f.t1
        );
    }
    if t1 < t0 {
        return Err(Failure::Usage(format!(
            "[{}, {}] does not meet the interval ({lo}, {hi})",
            f.t0, f.t1
        )));
    }
    let traj = solver.solve(&flow, t0, t1, f.dt)?;
    let checks = flow_checks(&traj, solver.name());
    let pass = all_pass(&checks);
    let regime = flow
        .solution
        .map_or("Stationary".to_string(), |s| s.regime.tag.to_string());
    let body = match c.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&traj, &mut buf).map_err(|e| Failure::Check(e.to_string()))?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => {
            let samples: Vec<_> = traj
                .samples
                .iter()
                .map(|s| json!({"t": s.t, "F": s.f, "a": s.a, "nijenhuis_sq": s.nijenhuis_sq, "residual": s.residual}))
                .collect();
            to_json(&json!({
                "algebra": entry.name,
                "checks": checks,
                "regime": regime,
                "solver": traj.solver,
                "interval": [t0, t1],
                "truncated": traj.truncated,
                "samples": samples,
            }))
        }
        Format::Text => {
            let mut s = format!(
                "{}: regime={}, solver={}, t in [{t0}, {t1}], {} samples\n",
                entry.name,
                regime,
                traj.solver,
                traj.samples.len()
            );
            if let Some(t) = &traj.truncated {
                s += &format!("  truncated: {t}\n");
            }
            for k in &checks {
                s += &format!(
                    "  {} {}: {:e} (tol {:e})\n",
                    if k.pass { "PASS" } else { "FAIL" },
                    k.name,
                    k.lhs,
                    k.tol
                );
            }
            s
        }
    };
    Ok(Output { body, pass })
}

#[derive(Serialize)]
struct Lemma1Row {
    structure: String,
    samples: usize,
    agreements: usize,
    commuting: usize,
    max_norm_gap: f64,
}

#[derive(Serialize)]
struct EigenRow {
    algebra: &'static str,
    a: Option<f64>,
    lhs: f64,
    rhs: f64,
    rank: usize,
    holds: bool,
}

pub fn lemmas(l: &LemmaArgs) -> Result<Output, Failure> {
    use rand::{Rng, SeedableRng};
    let c = &l.common;
    if l.samples < 2 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 2, got {}",
            l.samples
        )));
    }
    let mut structures = vec![(
        "standard".to_string(),
        build_su3(&standard::omega(), &standard::psi_plus())?,
    )];
    for name in catalog::NAMES {
        let e = catalog::get(name, c.param_a)?;
        structures.push((name.to_string(), catalog::analyze(&e, c.epsilon)?.0));
    }
    let k = structures.len();
    let mut lemma1 = Vec::new();
    for (i, (name, s)) in structures.iter().enumerate() {
        let n = l.samples / k + usize::from(i < l.samples % k);
        let seed = l
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(i as u64);
        let r = lemma1_campaign(s, n, seed, 1e-6)?;
        lemma1.push(Lemma1Row {
            structure: name.clone(),
            samples: r.samples,
            agreements: r.agreements,
            commuting: r.commuting,
            max_norm_gap: r.max_norm_gap,
        });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(l.seed);
    let mut eigen = Vec::new();
    for name in catalog::NAMES {
        let a_values: Vec<f64> = if name == "A5_17" {
            (0..8).map(|_| rng.gen_range(0.1..3.0)).collect()
        } else {
            vec![c.param_a]
        };
        for a in a_values {
            let e = catalog::get(name, a)?;
            let (_, r) = catalog::analyze(&e, c.epsilon)?;
            let ec = eigen_constraint(&r)
                .ok_or_else(|| Failure::Check(format!("{name}: c undefined")))?;
            eigen.push(EigenRow {
                algebra: name,
                a: e.a,
                lhs: ec.lhs,
                rhs: ec.rhs,
                rank: ec.rank,
                holds: ec.holds,
            });
        }
    }
    let agree: usize = lemma1.iter().map(|r| r.agreements).sum();
    let gap = lemma1.iter().map(|r| r.max_norm_gap).fold(0.0, f64::max);
    let held = eigen.iter().filter(|r| r.holds).count();
    let checks = vec![
        Check::close("lemma1_agreement", agree as f64, l.samples as f64, 0.0),
        Check::at_most("lemma1_norm_gap", gap, 0.0, 1e-8),
        Check::close("eigen_constraint", held as f64, eigen.len() as f64, 0.0),
    ];
    let pass = all_pass(&checks);
    let body = match c.format {
        Format::Json => to_json(&json!({
            "seed": l.seed,
            "samples": l.samples,
            "checks": checks,
            "lemma1": lemma1,
            "eigen_constraint": eigen,
        })),
        Format::Csv => {
            let mut s = String::from("structure,samples,agreements,commuting,max_norm_gap\n");
            for r in &lemma1 {
                s += &format!(
                    "{},{},{},{},{}\n",
                    r.structure, r.samples, r.agreements, r.commuting, r.max_norm_gap
                );
            }
            s
        }
        Format::Text => {
            let commuting: usize = lemma1.iter().map(|r| r.commuting).sum();
            format!(
                "seed={}\nlemma1: {agree}/{} agreement ({commuting} commuting pairs, max norm gap {gap:.3e})\neigen_constraint: {held}/{} hold\n",
                l.seed,
                l.samples,
                eigen.len()
            )
        }
    };
    Ok(Output { body, pass })
}
