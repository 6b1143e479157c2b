use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};

use cayley_gibbs::measures::{compatibility_defect, RootRule};
use cayley_gibbs::reduce::{
    branch_eval, branch_minimum, v_cubic_root, xi_expand, Branch, BranchMinimum,
    ClassificationReport, ClassifyConfig, CriticalConfig, CriticalOutcome, Reduction, Transition,
};
use cayley_gibbs::{
    fixed_points_w, w_residual, Error, FieldIndex, FieldVector, ModelParams, Restriction,
    SearchConfig, SubgroupSpec,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    ClassifyArgs, CompatArgs, Coupling, CriticalArgs, Format, ReduceArgs, ScanArgs, SolveArgs,
};

const MEMBERSHIP_TOL: f64 = 1e-8;
const COMPAT_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Io(String),
    Verify(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Io(_) => 3,
            Failure::Verify(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(m) => write!(f, "invalid input: {m}"),
            Failure::Io(m) => write!(f, "i/o failure: {m}"),
            Failure::Verify(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonZeroRemainder | Error::NotPalindromic | Error::OddDegree(_) => {
                Failure::Verify(e.to_string())
            }
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(text: &str) -> Outcome {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_string<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}

fn params(k: usize, card_a: usize, c: &Coupling) -> Result<ModelParams<f64>, Failure> {
    match (c.alpha, c.j) {
        (Some(alpha), j) => {
            if j.is_some() {
                eprintln!("warning: both --alpha and --j given; using --alpha");
            }
            Ok(ModelParams::from_alpha(k, card_a, alpha)?)
        }
        (None, Some(j)) => Ok(ModelParams::from_coupling(k, card_a, j, c.beta)?),
        (None, None) => Err(Failure::Invalid("one of --alpha or --j is required".into())),
    }
}

fn memberships(h: &FieldVector<f64>) -> String {
    let sets = h.memberships(MEMBERSHIP_TOL);
    if sets.is_empty() {
        "-".into()
    } else {
        sets.iter()
            .map(|s| format!("{s:?}"))
            .collect::<Vec<_>>()
            .join("|")
    }
}

#[derive(Serialize)]
struct SolveRow {
    index: usize,
    h1: f64,
    h2: f64,
    h3: f64,
    h4: f64,
    residual: f64,
    memberships: String,
}

#[derive(Serialize)]
struct CosetRow {
    index: usize,
    vertex_in_h: bool,
    parent_in_h: bool,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    params: &'a ModelParams<f64>,
    restrict: &'a str,
    seed: u64,
    starts: usize,
    failed_starts: usize,
    coset_fields: Vec<CosetRow>,
    solutions: Vec<SolveRow>,
}

fn coset_rows() -> Vec<CosetRow> {
    FieldIndex::ALL
        .iter()
        .map(|&i| CosetRow {
            index: i.value(),
            vertex_in_h: matches!(i, FieldIndex::H1 | FieldIndex::H2),
            parent_in_h: matches!(i, FieldIndex::H1 | FieldIndex::H3),
        })
        .collect()
}

pub fn solve(a: SolveArgs) -> Outcome {
    let p = params(a.k, a.card_a, &a.coupling)?;
    let restrict: Restriction = a.restrict.parse()?;
    let cfg = SearchConfig {
        seed: a.seed,
        ..SearchConfig::default()
    };
    let search = fixed_points_w(&p, restrict, &cfg)?;
    let rows: Vec<SolveRow> = search
        .points
        .iter()
        .enumerate()
        .map(|(i, h)| SolveRow {
            index: i + 1,
            h1: h.h[0],
            h2: h.h[1],
            h3: h.h[2],
            h4: h.h[3],
            residual: w_residual(h, &p),
            memberships: memberships(h),
        })
        .collect();
    let text = match a.format {
        Format::Json => json(&SolveReport {
            params: &p,
            restrict: &a.restrict,
            seed: a.seed,
            starts: search.starts,
            failed_starts: search.failed,
            coset_fields: coset_rows(),
            solutions: rows,
        })?,
        Format::Csv => csv_string(&rows)?,
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "k = {}  |A| = {}  alpha = {}  theta = {}  restrict = {}",
                p.k, p.card_a, p.alpha, p.theta, a.restrict
            )
            .unwrap();
            writeln!(s, "\nfield  x in H_A  parent in H_A").unwrap();
            for c in coset_rows() {
                let yn = |b: bool| if b { "yes" } else { "no" };
                writeln!(
                    s,
                    "h{:<5} {:<9} {}",
                    c.index,
                    yn(c.vertex_in_h),
                    yn(c.parent_in_h)
                )
                .unwrap();
            }
            writeln!(
                s,
                "\n{} fixed point(s) from {} starts",
                rows.len(),
                search.starts
            )
            .unwrap();
            writeln!(
                s,
                "{:>3} {:>20} {:>20} {:>20} {:>20} {:>10}  sets",
                "#", "h1", "h2", "h3", "h4", "residual"
            )
            .unwrap();
            for r in &rows {
                writeln!(
                    s,
                    "{:>3} {:>20.12e} {:>20.12e} {:>20.12e} {:>20.12e} {:>10.2e}  {}",
                    r.index, r.h1, r.h2, r.h3, r.h4, r.residual, r.memberships
                )
                .unwrap();
            }
            s
        }
    };
    emit(&text)
}

#[derive(Serialize)]
struct ReduceReport {
    k: usize,
    poly12: String,
    poly12_antipalindromic: bool,
    quotient: String,
    quotient_palindromic: bool,
    xi_poly: String,
    xi_degree: usize,
    xi_identity: bool,
}

pub fn reduce(a: ReduceArgs) -> Outcome {
    let r = Reduction::new(a.k)?;
    let identity = xi_expand(r.xi_poly()) == *r.quotient();
    let report = ReduceReport {
        k: a.k,
        poly12: r.poly12().to_string(),
        poly12_antipalindromic: r.poly12().is_antipalindromic(),
        quotient: r.quotient().to_string(),
        quotient_palindromic: r.quotient().is_palindromic(),
        xi_poly: r.xi_poly().to_string(),
        xi_degree: r.xi_poly().degree().unwrap_or(0),
        xi_identity: identity,
    };
    let text = match a.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_string(&[&report])?,
        Format::Text => {
            let yn = |b: bool| if b { "yes" } else { "no" };
            format!(
                "k = {}\nP(u)  = {}\nantipalindromic: {}\nP(u) = (u^2 - 1) * Q(u), remainder 0\nQ(u)  = {}\npalindromic: {}\nq(xi) = {}\ndegree in xi: {}\nu^{} q(u + 1/u) = Q(u): {}\n",
                report.k,
                report.poly12,
                yn(report.poly12_antipalindromic),
                report.quotient,
                yn(report.quotient_palindromic),
                report.xi_poly,
                report.xi_degree,
                report.xi_degree,
                yn(report.xi_identity)
            )
        }
    };
    emit(&text)?;
    if !(report.poly12_antipalindromic && identity) {
        return Err(Failure::Verify("symbolic identity check".into()));
    }
    Ok(())
}

fn classify_text(rep: &ClassificationReport<f64>) -> String {
    let mut s = String::new();
    writeln!(s, "k = {}  alpha = {}", rep.k, rep.alpha).unwrap();
    writeln!(
        s,
        "n_alpha = {}  N_alpha = {}  wp_count = {}  rejected = {}  boundary_flag = {}  max_residual = {:.3e}",
        rep.n_alpha, rep.big_n_alpha, rep.wp_count, rep.rejected, rep.boundary_flag, rep.max_residual
    )
    .unwrap();
    writeln!(
        s,
        "{:>20} {:>20} {:>20} {:>20} {:>10}",
        "xi", "u", "h1", "h2", "residual"
    )
    .unwrap();
    for sol in &rep.solutions {
        let xi = sol.xi.map_or("-".to_string(), |x| format!("{x:.12e}"));
        match sol.field {
            Some(h) => writeln!(
                s,
                "{:>20} {:>20.12e} {:>20.12e} {:>20.12e} {:>10.2e}",
                xi,
                sol.u,
                h.h[0],
                h.h[1],
                sol.residual.max(sol.residual_z)
            ),
            None => writeln!(
                s,
                "{:>20} {:>20.12e} {:>20} {:>20} {:>10}",
                xi, sol.u, "rejected", "", ""
            ),
        }
        .unwrap();
    }
    s
}

pub fn classify(a: ClassifyArgs) -> Outcome {
    let rep = Reduction::new(a.k)?.classify(a.alpha, &ClassifyConfig::default())?;
    let text = match a.format {
        Format::Json => json(&rep)?,
        Format::Csv => csv_string(&[ScanRow::from(&rep)])?,
        Format::Text => classify_text(&rep),
    };
    emit(&text)
}

#[derive(Serialize)]
struct ScanRow {
    alpha: f64,
    k: usize,
    n_alpha: usize,
    #[serde(rename = "N_alpha")]
    big_n_alpha: usize,
    wp_count: usize,
    boundary_flag: bool,
    max_residual: f64,
}

impl From<&ClassificationReport<f64>> for ScanRow {
    fn from(r: &ClassificationReport<f64>) -> Self {
        ScanRow {
            alpha: r.alpha,
            k: r.k,
            n_alpha: r.n_alpha,
            big_n_alpha: r.big_n_alpha,
            wp_count: r.wp_count,
            boundary_flag: r.boundary_flag,
            max_residual: r.max_residual,
        }
    }
}

pub fn scan(a: ScanArgs) -> Outcome {
    if !(a.alpha_min > 0.0) || !a.alpha_min.is_finite() {
        return Err(Failure::Invalid("--alpha-min must be positive".into()));
    }
    if !(a.alpha_max > a.alpha_min) || !a.alpha_max.is_finite() {
        return Err(Failure::Invalid(
            "--alpha-max must exceed --alpha-min".into(),
        ));
    }
    if a.steps < 2 {
        return Err(Failure::Invalid("--steps must be at least 2".into()));
    }
    let r = Reduction::new(a.k)?;
    let cfg = ClassifyConfig::default();
    let last = (a.steps - 1) as f64;
    let rows = (0..a.steps)
        .into_par_iter()
        .map(|i| {
            let alpha = if i + 1 == a.steps {
                a.alpha_max
            } else {
                a.alpha_min + (a.alpha_max - a.alpha_min) * i as f64 / last
            };
            r.classify(alpha, &cfg).map(|rep| ScanRow::from(&rep))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let text = match a.format {
        Format::Json => json(&rows)?,
        _ => csv_string(&rows)?,
    };
    match a.out {
        Some(path) => {
            let mut f =
                File::create(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            f.write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(())
        }
        None => emit(&text),
    }
}

#[derive(Serialize)]
struct Constant {
    name: &'static str,
    value: f64,
}

#[derive(Serialize)]
struct CriticalReport {
    k: usize,
    outcome: CriticalOutcome<f64>,
    transitions: Vec<Transition<f64>>,
    constants: Vec<Constant>,
}

fn constants(k: usize) -> Result<Vec<Constant>, Failure> {
    Ok(match k {
        5 => {
            let xi0 = v_cubic_root::<f64>().sqrt();
            let BranchMinimum { xi, alpha } = branch_minimum::<f64>(5)?;
            vec![
                Constant {
                    name: "v0",
                    value: v_cubic_root(),
                },
                Constant {
                    name: "xi0",
                    value: xi0,
                },
                Constant {
                    name: "gamma2(xi0)",
                    value: branch_eval(5, Branch::Lower, xi0)?,
                },
                Constant {
                    name: "xi1",
                    value: xi,
                },
                Constant {
                    name: "min gamma2",
                    value: alpha,
                },
            ]
        }
        6 => {
            let BranchMinimum { xi, alpha } = branch_minimum::<f64>(6)?;
            vec![
                Constant {
                    name: "alpha1(2)",
                    value: branch_eval(6, Branch::Lower, 2.0)?,
                },
                Constant {
                    name: "alpha2(2)",
                    value: branch_eval(6, Branch::Upper, 2.0)?,
                },
                Constant {
                    name: "xi0",
                    value: xi,
                },
                Constant {
                    name: "min alpha1",
                    value: alpha,
                },
            ]
        }
        _ => Vec::new(),
    })
}

pub fn critical(a: CriticalArgs) -> Outcome {
    if !(a.alpha_max > 1.0) {
        return Err(Failure::Invalid("--alpha-max must exceed 1".into()));
    }
    let r = Reduction::new(a.k)?;
    let cfg = CriticalConfig {
        alpha_max: a.alpha_max,
        ..CriticalConfig::default()
    };
    let outcome = r.critical_alpha(&cfg)?;
    let transitions = if a.k <= 3 {
        Vec::new()
    } else {
        r.transitions(1.0 + cfg.step, a.alpha_max, cfg.step, cfg.tol)
    };
    let report = CriticalReport {
        k: a.k,
        outcome,
        transitions,
        constants: constants(a.k)?,
    };
    let text = match a.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_string(&report.transitions)?,
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "k = {}", report.k).unwrap();
            match &report.outcome {
                CriticalOutcome::NoTransition => writeln!(
                    s,
                    "no transition: no root xi > 2 for any alpha in (1, {}]",
                    a.alpha_max
                )
                .unwrap(),
                CriticalOutcome::Critical(c) => {
                    writeln!(s, "alpha_cr = {:.12}", c.alpha).unwrap();
                    writeln!(s, "xi at alpha_cr = {:.12}  ({:?})", c.xi, c.kind).unwrap();
                    writeln!(
                        s,
                        "count-change bracket = [{:.15}, {:.15}]",
                        c.bracket.0, c.bracket.1
                    )
                    .unwrap();
                    if let Some(b) = &c.branch_check {
                        writeln!(
                            s,
                            "branch minimum: alpha = {:.12} at xi = {:.12}  (difference {:.1e})",
                            b.alpha,
                            b.xi,
                            (b.alpha - c.alpha).abs()
                        )
                        .unwrap();
                    }
                }
            }
            if !report.transitions.is_empty() {
                writeln!(s, "count changes of roots xi > 2:").unwrap();
                for t in &report.transitions {
                    writeln!(s, "  alpha = {:.12}: {} -> {}", t.alpha, t.from, t.to).unwrap();
                }
            }
            for c in &report.constants {
                writeln!(s, "{} = {:.12}", c.name, c.value).unwrap();
            }
            s
        }
    };
    emit(&text)
}

#[derive(Serialize)]
struct CompatRow {
    h1: f64,
    h2: f64,
    h3: f64,
    h4: f64,
    residual: f64,
    defect: f64,
}

pub fn check_compat(a: CompatArgs) -> Outcome {
    let p = params(a.k, a.card_a, &a.coupling)?;
    let rule: RootRule = a.root_rule.parse()?;
    let sub = SubgroupSpec::first(a.k, a.card_a)?;
    let (vectors, solved) = match &a.h {
        Some(h) if h.len() != 4 => {
            return Err(Failure::Invalid(
                "--h takes four comma-separated values".into(),
            ))
        }
        Some(h) => (vec![FieldVector::new(h[0], h[1], h[2], h[3])], false),
        None => {
            let restrict: Restriction = a.restrict.parse()?;
            let cfg = SearchConfig {
                seed: a.seed,
                ..SearchConfig::default()
            };
            (fixed_points_w(&p, restrict, &cfg)?.points, true)
        }
    };
    let rows = vectors
        .iter()
        .map(|h| {
            Ok(CompatRow {
                h1: h.h[0],
                h2: h.h[1],
                h3: h.h[2],
                h4: h.h[3],
                residual: w_residual(h, &p),
                defect: compatibility_defect(a.n, h, &p, &sub, rule)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let text = match a.format {
        Format::Json => json(&rows)?,
        Format::Csv => csv_string(&rows)?,
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "k = {}  |A| = {}  alpha = {}  n = {}  root rule = {:?}",
                p.k, p.card_a, p.alpha, a.n, rule
            )
            .unwrap();
            writeln!(
                s,
                "{:>16} {:>16} {:>16} {:>16} {:>10} {:>10}",
                "h1", "h2", "h3", "h4", "residual", "defect"
            )
            .unwrap();
            for r in &rows {
                writeln!(
                    s,
                    "{:>16.9e} {:>16.9e} {:>16.9e} {:>16.9e} {:>10.2e} {:>10.2e}",
                    r.h1, r.h2, r.h3, r.h4, r.residual, r.defect
                )
                .unwrap();
            }
            s
        }
    };
    emit(&text)?;
    if solved {
        if let Some(r) = rows.iter().find(|r| !(r.defect < COMPAT_TOL)) {
            return Err(Failure::Verify(format!(
                "fixed point has compatibility defect {:e}",
                r.defect
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        assert_eq!(Failure::from(Error::NonZeroRemainder).code(), 4);
        assert_eq!(Failure::from(Error::NotPalindromic).code(), 4);
        assert_eq!(Failure::from(Error::InvalidOrder(0)).code(), 2);
        assert_eq!(Failure::from(io::Error::other("disk")).code(), 3);
    }
}
