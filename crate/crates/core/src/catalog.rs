//! Special symplectic half-flat structures on eight unimodular solvable Lie
//! algebras, with their expected torsion data.

use serde::Serialize;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::multilinear::{parse_form, split_tuple, standard, Endo, KForm, Mat6, Metric};
use crate::su3::{build_su3_eps, special_check, torsion, SU3Structure, SpecialReport};

struct Raw {
    name: &'static str,
    equations: &'static str,
    omega: &'static str,
    psi_plus: &'static str,
    g: [f64; 6],
    w2: &'static str,
    gamma: &'static str,
    gamma_erratum: Option<&'static str>,
    s: [&'static str; 6],
    c: &'static str,
    w2_norm_sq: &'static str,
    adapted_basis: Option<&'static str>,
}

const RAW: [Raw; 8] = [
    // e(1,1) ⊕ e(1,1)
    Raw {
        name: "e11e11",
        equations: "(0,-e13,-e12,0,-e46,-e45)",
        omega: "e14+e23+2e56",
        psi_plus: "e125-e126-e135-e136+e245+e246+e345-e346",
        g: [1.0, 1.0, 1.0, 1.0, 2.0, 2.0],
        w2: "2e26+2e25+2e36-2e35",
        gamma: "0",
        gamma_erratum: None,
        s: ["0", "0", "0", "0", "0", "0"],
        c: "2",
        w2_norm_sq: "8",
        adapted_basis: None,
    },
    // g_{5,1} ⊕ ℝ
    Raw {
        name: "g5_1",
        equations: "(0,0,0,0,e12,e13)",
        omega: "e14+e26+e35",
        psi_plus: "e123+e156+e245-e346",
        g: [1.0; 6],
        w2: "e26-e35",
        gamma: "3/2 e123 - 1/2 e156 - 1/2 e245 + 1/2 e346",
        gamma_erratum: None,
        s: ["-1/2", "-1/2", "-1/2", "1/2", "1/2", "1/2"],
        c: "2",
        w2_norm_sq: "2",
        adapted_basis: Some("(e1,e4,-e3,-e5,e2,e6)"),
    },
    // A_{5,7}^{-1,-1,1} ⊕ ℝ
    Raw {
        name: "A5_7",
        equations: "(e15,-e25,-e35,e45,0,0)",
        omega: "-e13+e24+e56",
        psi_plus: "-e126-e145-e235-e346",
        g: [1.0; 6],
        w2: "2e14-2e23",
        gamma: "2e126-2e145-2e235+2e346",
        gamma_erratum: None,
        s: ["0", "0", "0", "0", "-2", "2"],
        c: "4",
        w2_norm_sq: "8",
        adapted_basis: Some("(e3,e1,e2,e4,e5,e6)"),
    },
    // A_{5,17}^{a,-a,1} ⊕ ℝ, a > 0
    Raw {
        name: "A5_17",
        equations: "(a*e15+e25,-e15+a*e25,-a*e35+e45,-e35-a*e45,0,0)",
        omega: "e13+e24+e56",
        psi_plus: "e125-e146+e236-e345",
        g: [1.0; 6],
        w2: "-2*a*e12-2*a*e34",
        gamma: "2*a^2*e125+2*a^2*e146-2*a^2*e236-2*a^2*e345",
        gamma_erratum: None,
        s: ["0", "0", "0", "0", "-2*a^2", "2*a^2"],
        c: "4*a^2",
        w2_norm_sq: "8*a^2",
        adapted_basis: Some("(e1,e3,e2,e4,e5,e6)"),
    },
    // g_{6,N3}
    Raw {
        name: "g6_N3",
        equations: "(0,0,0,e12,e13,e23)",
        omega: "2e16+e25-e34",
        psi_plus: "-e123+e145-2e246-2e356",
        g: [1.0, 1.0, 1.0, 1.0, 1.0, 4.0],
        w2: "4e16-e25+e34",
        gamma: "-9/2 e123 - 3/2 e145 - 3/2 e246 - 3/2 e356",
        // the listed e246, e356 coefficients are inconsistent with the listed S
        gamma_erratum: Some("-9/2 e123 - 3/2 e145 + 3 e246 + 3 e356"),
        s: ["-3/2", "-3/2", "-3/2", "3/2", "3/2", "3/2"],
        c: "6",
        w2_norm_sq: "6",
        adapted_basis: Some("(e1,2e6,e3,-e4,e2,e5)"),
    },
    // g_{6,38}^0
    Raw {
        name: "g6_38",
        equations: "(e23,-e36,e26,e26-e56,e36+e46,0)",
        omega: "-2e16+e34-e25",
        psi_plus: "-2e135-2e124+e236-e456",
        g: [4.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        w2: "4e16-e25+e34",
        gamma: "3e124+3e135+9/2 e236+3/2 e456",
        gamma_erratum: None,
        s: ["3/2", "-3/2", "-3/2", "3/2", "3/2", "-3/2"],
        c: "6",
        w2_norm_sq: "6",
        adapted_basis: Some("(e6,2e1,e3,e4,-e2,e5)"),
    },
    // g_{6,54}^{0,-1}
    Raw {
        name: "g6_54",
        equations: "(e16+e35,-e26+e45,e36,-e46,0,0)",
        omega: "e14+e23+sqrt2*e56",
        psi_plus: "e125-sqrt2*e136+sqrt2*e246+e345",
        g: [1.0, 1.0, 1.0, 1.0, 1.0, 2.0],
        w2: "sqrt2*e13-e14+e23+sqrt2*e24",
        gamma: "-3/2 e125 - (sqrt2/2)*e136 + (sqrt2/2)*e246 + 1/2 e345",
        gamma_erratum: None,
        s: ["1/2", "1/2", "-1/2", "-1/2", "1/2", "-1/2"],
        c: "2",
        w2_norm_sq: "6",
        adapted_basis: Some("(e1,e4,e2,e3,e5,sqrt2*e6)"),
    },
    // g_{6,118}^{0,-1,-1}
    Raw {
        name: "g6_118",
        equations: "(-e16+e25,-e15-e26,e36-e45,e35+e46,0,0)",
        omega: "e14+e23-e56",
        psi_plus: "e126-e135+e245+e346",
        g: [1.0; 6],
        w2: "2e12-2e34",
        gamma: "2e126+2e135-2e245+2e346",
        gamma_erratum: None,
        s: ["0", "0", "0", "0", "2", "-2"],
        c: "4",
        w2_norm_sq: "8",
        adapted_basis: Some("(e1,e4,e3,-e2,-e5,e6)"),
    },
];

/// Catalog names in table order.
pub const NAMES: [&str; 8] = [
    "e11e11", "g5_1", "A5_7", "A5_17", "g6_N3", "g6_38", "g6_54", "g6_118",
];

/// Default value of the `A5_17` parameter.
pub const DEFAULT_A: f64 = 1.0;

#[derive(Debug, Clone, Serialize)]
pub struct Expected {
    #[serde(serialize_with = "metric_rows")]
    pub g: Metric,
    pub w2: KForm,
    pub gamma: KForm,
    pub gamma_erratum: Option<KForm>,
    #[serde(serialize_with = "diag_of")]
    pub s: Endo,
    pub c: f64,
    pub w2_norm_sq: f64,
}

impl Expected {
    /// `γ` to compare against: the corrected value when the listed one is known to be wrong.
    pub fn gamma_reference(&self) -> &KForm {
        self.gamma_erratum.as_ref().unwrap_or(&self.gamma)
    }
}

fn metric_rows<S: serde::Serializer>(g: &Metric, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&(0..6).map(|i| g.matrix()[(i, i)]).collect::<Vec<_>>(), s)
}

fn diag_of<S: serde::Serializer>(e: &Endo, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&(0..6).map(|i| e.0[(i, i)]).collect::<Vec<_>>(), s)
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub structure_equations: &'static str,
    pub omega: KForm,
    pub psi_plus: KForm,
    pub expected: Expected,
    /// Covectors `ẽ¹…ẽ⁶` of the adapted basis.
    pub adapted_basis: Option<[KForm; 6]>,
    pub a: Option<f64>,
    #[serde(skip)]
    pub algebra: LieAlgebra,
}

fn scalar(s: &str, b: &[(&str, f64)]) -> Result<f64> {
    Ok(parse_form(s, 0, b)?.coeffs()[0])
}

/// Looks up an entry; `a` is used (and must be positive) only for `A5_17`.
pub fn get(name: &str, a: f64) -> Result<CatalogEntry> {
    let raw = RAW
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))?;
    let parametric = raw.equations.contains('a');
    if parametric && !(a > 0.0) {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
            reason: "must be positive",
        });
    }
    let b: &[(&str, f64)] = &[("a", a)];
    let mut s = Mat6::zeros();
    for (i, x) in raw.s.iter().enumerate() {
        s[(i, i)] = scalar(x, b)?;
    }
    let adapted_basis = match raw.adapted_basis {
        Some(t) => {
            let parts = split_tuple(t)?;
            let mut out = [KForm::zero(1); 6];
            for (slot, p) in out.iter_mut().zip(&parts) {
                *slot = parse_form(p, 1, b)?;
            }
            Some(out)
        }
        None => None,
    };
    Ok(CatalogEntry {
        name: raw.name,
        structure_equations: raw.equations,
        omega: parse_form(raw.omega, 2, b)?,
        psi_plus: parse_form(raw.psi_plus, 3, b)?,
        expected: Expected {
            g: Metric::diag(raw.g),
            w2: parse_form(raw.w2, 2, b)?,
            gamma: parse_form(raw.gamma, 3, b)?,
            gamma_erratum: raw.gamma_erratum.map(|g| parse_form(g, 3, b)).transpose()?,
            s: Endo(s),
            c: scalar(raw.c, b)?,
            w2_norm_sq: scalar(raw.w2_norm_sq, b)?,
        },
        adapted_basis,
        a: parametric.then_some(a),
        algebra: LieAlgebra::parse(raw.equations, b)?,
    })
}

/// All eight entries, in table order.
pub fn all(a: f64) -> Result<Vec<CatalogEntry>> {
    NAMES.iter().map(|n| get(n, a)).collect()
}

/// Recomputed structure and completed torsion report of an entry.
pub fn analyze(entry: &CatalogEntry, eps: f64) -> Result<(SU3Structure, SpecialReport)> {
    let s = build_su3_eps(&entry.omega, &entry.psi_plus, eps)?;
    let r = torsion(&s, &entry.algebra)?;
    let r = special_check(&r, &entry.algebra, &s)?;
    Ok((s, r))
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
    /// Distance of the listed `γ` from the recomputed one, when the listed value is known to be wrong.
    pub listed_gamma_deviation: Option<f64>,
}

impl EntryReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Recomputes `g`, `w₂⁻`, `γ`, `S`, `c`, `|w₂⁻|²` and diffs them against the expected data.
pub fn verify_entry(entry: &CatalogEntry, eps: f64) -> Result<EntryReport> {
    let (s, r) = analyze(entry, eps)?;
    let e = &entry.expected;
    let tol = |x: f64| eps * x.abs().max(1.0);
    let c = r.c.unwrap_or(f64::NAN);
    let checks = vec![
        Check::close(
            "g",
            (s.g.matrix() - e.g.matrix()).amax(),
            0.0,
            tol(e.g.matrix().amax()),
        ),
        Check::close("w2", (r.w2 - e.w2).max_abs(), 0.0, tol(e.w2.max_abs())),
        Check::close(
            "gamma",
            (r.gamma - *e.gamma_reference()).max_abs(),
            0.0,
            tol(e.gamma_reference().max_abs()),
        ),
        Check::close("S", (r.s.0 - e.s.0).amax(), 0.0, tol(e.s.0.amax())),
        Check::close("c", c, e.c, tol(e.c)),
        Check::close("w2_norm_sq", r.w2_norm_sq, e.w2_norm_sq, tol(e.w2_norm_sq)),
    ];
    let listed_gamma_deviation = e.gamma_erratum.map(|_| (r.gamma - e.gamma).max_abs());
    Ok(EntryReport {
        name: entry.name,
        checks,
        listed_gamma_deviation,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AdaptedBasisReport {
    pub omega_standard: bool,
    pub psi_plus_standard: bool,
    pub psi_minus_standard: bool,
    /// `S` is diagonal in the adapted basis with eigenvalues paired as `(μ₁,−μ₁,μ₂,−μ₂,μ₃,−μ₃)`.
    pub s_diagonal: bool,
    /// Phase of `ψ⁺ + iψ⁻` relative to the standard forms.
    pub theta: f64,
    pub max_deviation: f64,
}

impl AdaptedBasisReport {
    pub fn pass(&self) -> bool {
        self.omega_standard && self.psi_plus_standard && self.psi_minus_standard && self.s_diagonal
    }
}

/// Expresses `ω`, `ψ⁺`, `ψ⁻` and `S` in the listed adapted basis.
pub fn check_adapted_basis(entry: &CatalogEntry, eps: f64) -> Result<Option<AdaptedBasisReport>> {
    match &entry.adapted_basis {
        Some(basis) => check_adapted_basis_with(entry, basis, eps).map(Some),
        None => Ok(None),
    }
}

pub fn check_adapted_basis_with(
    entry: &CatalogEntry,
    basis: &[KForm; 6],
    eps: f64,
) -> Result<AdaptedBasisReport> {
    let (s, r) = analyze(entry, eps)?;
    // rows of b are the new covectors; the dual vectors are the columns of b⁻¹
    let b = Mat6::from_fn(|i, k| basis[i].coeffs()[k]);
    let Some(e) = b.try_inverse() else {
        return Err(Error::InvalidParameter {
            name: "adapted_basis",
            value: b.determinant(),
            reason: "covectors are linearly dependent",
        });
    };
    let e = Endo(e);
    let om = e.act_on_form(&s.omega);
    let pp = e.act_on_form(&s.psi_plus);
    let pm = e.act_on_form(&s.psi_minus);
    let d_om = (om - standard::omega()).max_abs();
    let d_pp = (pp - standard::psi_plus()).max_abs();
    let d_pm = (pm - standard::psi_minus()).max_abs();
    let theta = pp.get(&[1, 3, 6]).atan2(pp.get(&[1, 3, 5]));
    let s_new = b * r.s.0 * e.0;
    let scale = s_new.amax().max(1.0);
    let mut off = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            if i != j {
                off = off.max(s_new[(i, j)].abs());
            }
        }
    }
    let paired = (0..3)
        .all(|k| (s_new[(2 * k, 2 * k)] + s_new[(2 * k + 1, 2 * k + 1)]).abs() <= eps * scale);
    let tol = eps * 2f64.max(s.omega.max_abs());
    Ok(AdaptedBasisReport {
        omega_standard: d_om <= tol,
        psi_plus_standard: d_pp <= tol,
        psi_minus_standard: d_pm <= tol,
        s_diagonal: off <= eps * scale && paired,
        theta,
        max_deviation: d_om.max(d_pp).max(d_pm),
    })
}

/// The structural invariants of an entry as named checks.
pub fn invariant_checks(entry: &CatalogEntry, eps: f64) -> Result<Vec<Check>> {
    let (s, r) = analyze(entry, eps)?;
    let l = &entry.algebra;
    let w = r.w2_norm_sq;
    let c = r.c.unwrap_or(f64::NAN);
    let t = |x: f64| eps * x.abs().max(1.0);
    let omega3 = s.omega.power(3)?.top_coeff();
    let pp_pm = s.psi_plus.wedge(&s.psi_minus)?.top_coeff();
    let vol = s.vol.top_coeff();
    let dw_pp = r.dw2.wedge(&s.psi_plus)?.top_coeff();
    let dw_pm = r.dw2.wedge(&s.psi_minus)?.top_coeff();
    let dwn = s.norm_sq(&r.dw2);
    let gn = s.norm_sq(&r.gamma);
    let codiff_w = s.codiff(l, &r.w2).max_abs();
    let star_pp = (s.star(&s.psi_plus) - s.psi_minus).max_abs();
    let is_e11 = entry.name == "e11e11";
    let bound_gap = c - 0.25 * w;
    let mut checks = vec![
        Check::flag("unimodular", l.is_unimodular(eps)),
        Check::close(
            "primitivity",
            s.psi_plus.wedge(&s.omega)?.max_abs(),
            0.0,
            t(1.0),
        ),
        Check::close("normalization_omega3", pp_pm, 2.0 / 3.0 * omega3, t(omega3)),
        Check::close("normalization_vol", pp_pm, 4.0 * vol, t(vol)),
        Check::close("psi_plus_norm", s.norm(&s.psi_plus), 2.0, t(2.0)),
        Check::close("psi_minus_star", star_pp, 0.0, t(2.0)),
        Check::close("w2_coclosed", codiff_w, 0.0, t(r.w2.max_abs())),
        Check::flag("w2_in_lambda2_8", r.flags.w2_in_lambda2_8),
        Check::close("dw2_wedge_psi_plus", dw_pp, 0.0, t(w * vol)),
        Check::close("dw2_wedge_psi_minus", dw_pm, w * vol, t(w * vol)),
        Check::close("scal", r.scal, -0.5 * w, t(w)),
        Check::at_most("c_lower_bound", 0.25 * w, c, t(c)),
        Check::flag(
            "c_bound_equality_iff_e11e11",
            (bound_gap.abs() <= t(c)) == is_e11,
        ),
        Check::close("dw2_norm_split", dwn, 0.25 * w * w + gn, t(dwn)),
        Check::flag("special", r.flags.is_special),
        Check::flag(
            "hermitian_ricci_iff_e11e11",
            r.flags.hermitian_ricci == is_e11,
        ),
        Check::close("nijenhuis_ratio", r.nijenhuis_norm_sq / w, 0.5, t(1.0)),
    ];
    let ec = crate::su3::eigen_constraint(&r);
    checks.push(match ec {
        Some(ec) => Check::close("eigen_constraint", ec.lhs, ec.rhs, t(ec.rhs)),
        None => Check::flag("eigen_constraint", false),
    });
    if let Some(ab) = check_adapted_basis(entry, eps)? {
        checks.push(Check::close("adapted_basis", ab.max_deviation, 0.0, t(2.0)));
        checks.push(Check::flag("adapted_basis_s_diagonal", ab.s_diagonal));
    }
    Ok(checks)
}

/// `c/|w₂⁻|²` as the nearest of 1, 1/2, 1/3, 1/4 (text form) if within `eps`.
pub fn ratio_label(c: f64, w2: f64, eps: f64) -> Option<&'static str> {
    let r = c / w2;
    [(1.0, "1"), (0.5, "1/2"), (1.0 / 3.0, "1/3"), (0.25, "1/4")]
        .into_iter()
        .find(|(v, _)| (r - v).abs() <= eps)
        .map(|(_, l)| l)
}

/// All entries at the default parameter as pretty JSON, the contents of `resources/catalog.json`.
pub fn to_json() -> Result<String> {
    let entries = all(DEFAULT_A)?;
    let mut s = serde_json::to_string_pretty(&entries).map_err(|e| Error::Parse {
        input: "catalog".into(),
        reason: e.to_string(),
    })?;
    s.push('\n');
    Ok(s)
}
