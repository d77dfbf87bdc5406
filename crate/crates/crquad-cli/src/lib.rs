//! Command implementations behind the `crquad` binary.
//!
//! Every command builds a typed report (see [`reports`]) that serializes to
//! canonical JSON; `--text` renders the same data for humans. Exit codes:
//! 0 success, 1 user/input error, 2 internal inconsistency (a computation
//! contradicting a proved statement — treated as a bug alarm).

pub mod census;
pub mod reports;

use std::path::Path;

use sha2::{Digest, Sha256};

use crquad::conditions::{
    condition_i, condition_ii, ConditionVerdict, NonexceptionalVerdict,
};
use crquad::exact::{parse_rational, GaussianRational, Rational};
use crquad::quadric::Quadric;
use crquad::raq::CommAlgebra;
use crquad::solver::{
    exceptional_via_a, graded_component, nonrigid_via_a, GradedComponent,
};
use crquad::{Error, Result};

use reports::*;

/// Exit class of a finished command.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Exit {
    Ok,
    /// User or input error (also: a degenerate quadric under `validate`).
    InputError,
    /// A theorem-violating computation; never swallowed.
    Inconsistency,
}

impl Exit {
    pub fn code(self) -> i32 {
        match self {
            Exit::Ok => 0,
            Exit::InputError => 1,
            Exit::Inconsistency => 2,
        }
    }
}

/// Finished command: canonical JSON, its text rendering, exit class.
pub struct CmdOutput {
    pub json: String,
    pub text: String,
    pub exit: Exit,
}

fn finish<R: serde::Serialize + TextRender>(report: R, exit: Exit) -> CmdOutput {
    let mut json = serde_json::to_string_pretty(&report).expect("reports serialize");
    json.push('\n');
    CmdOutput { json, text: report.text(), exit }
}

fn echo(path: &Path, bytes: &[u8]) -> InputEcho {
    InputEcho { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(bytes)) }
}

fn load_quadric(path: &Path) -> Result<(Quadric, InputEcho)> {
    let bytes = std::fs::read(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Error::Parse(format!("{}: not valid UTF-8", path.display())))?;
    let q = Quadric::from_json(text)?;
    Ok((q, echo(path, &bytes)))
}

fn load_algebra(path: &Path) -> Result<(CommAlgebra, InputEcho)> {
    let bytes = std::fs::read(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Error::Parse(format!("{}: not valid UTF-8", path.display())))?;
    let a = CommAlgebra::from_json(text)?;
    Ok((a, echo(path, &bytes)))
}

/// `crquad validate <file>`.
pub fn cmd_validate(path: &Path) -> Result<CmdOutput> {
    let (q, input) = load_quadric(path)?;
    let rep = q.validate();
    let nondegenerate = rep.nondegenerate();
    let report = ValidateReport {
        command: "validate".into(),
        input,
        n: q.n(),
        k: q.k(),
        degree_bound: degree_bound(q.n(), q.k()),
        common_kernel_trivial: rep.common_kernel_trivial,
        forms_independent: rep.forms_independent,
        nondegenerate,
    };
    Ok(finish(report, if nondegenerate { Exit::Ok } else { Exit::InputError }))
}

/// Weight components up to the stop rule, the hard cap, or `max_weight`.
/// Returns the components (with bases) and whether the cap was violated.
fn components_chain(
    q: &Quadric,
    max_weight: Option<i32>,
) -> Result<Vec<GradedComponent>> {
    let cap = 2 * q.k() as i32 + 1;
    let mut out = Vec::new();
    for m in -2..=cap {
        if max_weight.is_some_and(|mw| m > mw) {
            break;
        }
        let comp = graded_component(q, m)?;
        let dim = comp.dim;
        out.push(comp);
        if m >= 1 && dim == 0 {
            break;
        }
        if m == cap && dim > 0 {
            return Err(Error::InternalInconsistency(format!(
                "dim g_{m} = {dim} > 0 violates the weight bound 2k = {}",
                2 * q.k()
            )));
        }
    }
    Ok(out)
}

fn render_field(f: &crquad::solver::VectorField) -> BasisField {
    BasisField {
        f: f.f.iter().map(|p| p.to_string()).collect(),
        g: f.g.iter().map(|p| p.to_string()).collect(),
    }
}

/// `crquad components <file> [--max-weight M] [--emit-basis]`.
pub fn cmd_components(
    path: &Path,
    max_weight: Option<i32>,
    emit_basis: bool,
) -> Result<CmdOutput> {
    let (q, input) = load_quadric(path)?;
    q.ensure_nondegenerate()?;
    let chain = components_chain(&q, max_weight)?;
    let components: Vec<ComponentEntry> =
        chain.iter().map(|c| ComponentEntry { m: c.m, dim: c.dim }).collect();
    let total_dim = components.iter().map(|c| c.dim).sum();
    let basis = emit_basis.then(|| {
        chain
            .iter()
            .filter(|c| !c.basis.is_empty())
            .map(|c| ComponentBasis {
                m: c.m,
                fields: c.basis.iter().map(render_field).collect(),
            })
            .collect()
    });
    let report = ComponentsReport {
        command: "components".into(),
        input,
        n: q.n(),
        k: q.k(),
        degree_bound: degree_bound(q.n(), q.k()),
        components,
        total_dim,
        basis,
    };
    Ok(finish(report, Exit::Ok))
}

/// Decision data shared by `decide` and `raq check`.
struct Decision {
    dim_g1: usize,
    dim_g3: usize,
    nonrigid_a: bool,
    exceptional_a: bool,
    cond_i: ConditionVerdict,
    cond_ii: ConditionVerdict,
    sufficient: NonexceptionalVerdict,
}

impl Decision {
    fn compute(q: &Quadric, trials: usize, seed: u64) -> Result<Self> {
        Ok(Decision {
            dim_g1: graded_component(q, 1)?.dim,
            dim_g3: graded_component(q, 3)?.dim,
            nonrigid_a: nonrigid_via_a(q)?,
            exceptional_a: exceptional_via_a(q)?,
            cond_i: condition_i(q, trials, seed)?,
            cond_ii: condition_ii(q, trials, seed)?,
            sufficient: crquad::conditions::sufficient_nonexceptional(q, trials, seed)?,
        })
    }

    fn rigid(&self) -> bool {
        self.dim_g1 == 0
    }

    fn exceptional(&self) -> bool {
        self.dim_g3 > 0
    }

    fn rigidity_agree(&self) -> bool {
        self.nonrigid_a == !self.rigid()
    }

    fn exceptionality_agree(&self) -> bool {
        self.exceptional_a == self.exceptional()
    }

    fn soundness_ok(&self) -> bool {
        !(self.sufficient == NonexceptionalVerdict::Nonexceptional && self.exceptional())
    }

    fn exit(&self) -> Exit {
        if self.rigidity_agree() && self.exceptionality_agree() && self.soundness_ok() {
            Exit::Ok
        } else {
            Exit::Inconsistency
        }
    }
}

/// `crquad decide <file>`.
pub fn cmd_decide(path: &Path, trials: usize, seed: u64) -> Result<CmdOutput> {
    let (q, input) = load_quadric(path)?;
    q.ensure_nondegenerate()?;
    let d = Decision::compute(&q, trials, seed)?;
    let report = DecideReport {
        command: "decide".into(),
        input,
        n: q.n(),
        k: q.k(),
        degree_bound: degree_bound(q.n(), q.k()),
        dim_g1: d.dim_g1,
        dim_g3: d.dim_g3,
        rigid: d.rigid(),
        exceptional: d.exceptional(),
        nonrigid_via_a: d.nonrigid_a,
        exceptional_via_a: d.exceptional_a,
        rigidity_paths_agree: d.rigidity_agree(),
        exceptionality_paths_agree: d.exceptionality_agree(),
        condition_i: d.cond_i.clone(),
        condition_ii: d.cond_ii.clone(),
        sufficient_nonexceptional: d.sufficient,
        soundness_ok: d.soundness_ok(),
    };
    let exit = d.exit();
    Ok(finish(report, exit))
}

/// `crquad charmod <file> [--max-degree D]`.
pub fn cmd_charmod(path: &Path, max_degree: Option<usize>) -> Result<CmdOutput> {
    let (q, input) = load_quadric(path)?;
    q.ensure_nondegenerate()?;
    let k = q.k();
    let d = max_degree.unwrap_or(k + 2).max(k + 2);
    let dims = crquad::charmod::quotient_graded_dims(&q, d)?;
    let a_at_k = crquad::charmod::a_solution_space(&q, k)?.dim;
    let a_at_k2 = crquad::charmod::a_solution_space(&q, k + 2)?.dim;
    let vanishes = dims.dims.iter().enumerate().all(|(deg, &v)| deg <= k || v == 0);
    let stable = a_at_k == a_at_k2;
    let report = CharmodReport {
        command: "charmod".into(),
        input,
        n: q.n(),
        k,
        degree_bound: degree_bound(q.n(), k),
        max_degree: d,
        quotient_total: dims.total(),
        quotient_dims: dims.dims,
        a_dim_at_k: a_at_k,
        a_dim_at_k_plus_2: a_at_k2,
        a_dims_stable: stable,
        quotient_vanishes_above_k: vanishes,
    };
    let exit = if stable && vanishes { Exit::Ok } else { Exit::Inconsistency };
    Ok(finish(report, exit))
}

/// `crquad census --n --k --samples --seed [--jobs] [--save-dir]`.
pub fn cmd_census(params: &census::CensusParams) -> Result<CmdOutput> {
    let (report, violation) = census::run_census(params)?;
    Ok(finish(report, if violation { Exit::Inconsistency } else { Exit::Ok }))
}

/// `crquad raq build --algebra <file> --out <file>`.
pub fn cmd_raq_build(algebra: &Path, out: &Path) -> Result<CmdOutput> {
    let (a, input) = load_algebra(algebra)?;
    let q = a.raq_quadric()?;
    q.save(out)?;
    let forms = (0..q.k())
        .map(|j| {
            (0..q.n())
                .map(|r| (0..q.n()).map(|c| q.form(j).matrix().at(r, c).render()).collect())
                .collect()
        })
        .collect();
    let report = RaqBuildReport {
        command: "raq build".into(),
        algebra: input,
        n: q.n(),
        k: q.k(),
        degree_bound: degree_bound(q.n(), q.k()),
        output: out.display().to_string(),
        forms,
    };
    Ok(finish(report, Exit::Ok))
}

/// `crquad raq check --algebra <file>`.
pub fn cmd_raq_check(algebra: &Path, trials: usize, seed: u64) -> Result<CmdOutput> {
    let (a, input) = load_algebra(algebra)?;
    let q = a.raq_quadric()?;
    q.ensure_nondegenerate()?;
    let chain = components_chain(&q, None)?;
    let components: Vec<ComponentEntry> =
        chain.iter().map(|c| ComponentEntry { m: c.m, dim: c.dim }).collect();
    let nonzero = components.iter().filter(|c| c.dim > 0).count();
    let dim_g3 = components.iter().find(|c| c.m == 3).map_or(0, |c| c.dim);
    let exceptional = dim_g3 > 0;
    let exceptional_a = exceptional_via_a(&q)?;
    let sufficient = crquad::conditions::sufficient_nonexceptional(&q, trials, seed)?;
    let agree = exceptional_a == exceptional;
    let sound = !(sufficient == NonexceptionalVerdict::Nonexceptional && exceptional);
    let report = RaqCheckReport {
        command: "raq check".into(),
        algebra: input,
        n: q.n(),
        k: q.k(),
        degree_bound: degree_bound(q.n(), q.k()),
        components,
        nonzero_components: nonzero,
        five_components: nonzero == 5,
        exceptional,
        exceptional_via_a: exceptional_a,
        exceptionality_paths_agree: agree,
        sufficient_nonexceptional: sufficient,
        soundness_ok: sound,
    };
    let exit = if agree && sound { Exit::Ok } else { Exit::Inconsistency };
    Ok(finish(report, exit))
}

fn parse_complex_list(s: &str, expected: usize, what: &str) -> Result<Vec<GaussianRational>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != expected {
        return Err(Error::InvalidInput(format!(
            "{what}: expected {expected} comma-separated values, found {}",
            parts.len()
        )));
    }
    parts.iter().map(|p| GaussianRational::parse(p)).collect()
}

fn parse_rational_list(s: &str, expected: usize, what: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != expected {
        return Err(Error::InvalidInput(format!(
            "{what}: expected {expected} comma-separated values, found {}",
            parts.len()
        )));
    }
    parts.iter().map(|p| parse_rational(p)).collect()
}

/// `crquad raq map --algebra <file> --a ... --r ... --z ... --w ...`.
pub fn cmd_raq_map(algebra: &Path, a: &str, r: &str, z: &str, w: &str) -> Result<CmdOutput> {
    let (alg, input) = load_algebra(algebra)?;
    let n = alg.n();
    let av = parse_complex_list(a, n, "--a")?;
    let rv = parse_rational_list(r, n, "--r")?;
    let zv = parse_complex_list(z, n, "--z")?;
    let wv = parse_complex_list(w, n, "--w")?;
    let input_on = alg.quadric_defect(&zv, &wv).iter().all(num_traits::Zero::is_zero);
    let mapped = alg.poincare_map(&av, &rv, &zv, &wv);
    let render = |v: &[GaussianRational]| v.iter().map(GaussianRational::render).collect();
    let report = match mapped {
        None => RaqMapReport {
            command: "raq map".into(),
            algebra: input,
            n,
            a: render(&av),
            r: rv.iter().map(crquad::exact::render_rational).collect(),
            z: render(&zv),
            w: render(&wv),
            input_on_quadric: input_on,
            delta_invertible: false,
            z_star: None,
            w_star: None,
            output_on_quadric: None,
        },
        Some((zs, ws)) => {
            let out_on = alg.quadric_defect(&zs, &ws).iter().all(num_traits::Zero::is_zero);
            RaqMapReport {
                command: "raq map".into(),
                algebra: input,
                n,
                a: render(&av),
                r: rv.iter().map(crquad::exact::render_rational).collect(),
                z: render(&zv),
                w: render(&wv),
                input_on_quadric: input_on,
                delta_invertible: true,
                z_star: Some(render(&zs)),
                w_star: Some(render(&ws)),
                output_on_quadric: Some(out_on),
            }
        }
    };
    Ok(finish(report, Exit::Ok))
}

/// `crquad catalog <name> [--out <file>]`.
pub fn cmd_catalog(name: &str, out: Option<&Path>) -> Result<CmdOutput> {
    let q = crquad::quadric::catalog::by_name(name)?;
    let output = match out {
        Some(path) => {
            q.save(path)?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let mut report_out = finish(
        CatalogReport {
            command: "catalog".into(),
            name: name.to_string(),
            n: q.n(),
            k: q.k(),
            degree_bound: degree_bound(q.n(), q.k()),
            output,
        },
        Exit::Ok,
    );
    if out.is_none() {
        // Without an output path the quadric itself is the payload.
        report_out.json = q.to_json();
        report_out.text = q.to_json();
    }
    Ok(report_out)
}
