use std::path::Path;

use gna_core::classify::{classify, ClassifierConfig};
use gna_core::linalg::{det, extend_to_basis, is_invertible, solve, GenMatrix, GenVector};
use gna_core::scalar::GenScalar;
use gna_core::spectra::{eigenpair_from_root, hermitian_eigentuple, is_eigenvalue, skew_eigentuple, skew_normal_form};
use gna_core::symplectic::{
    annihilator, classify_submodule, symplectic_basis, Submodule, SymplecticBasis, SymplecticForm,
};
use serde_json::{json, Value};

use crate::args::{Command, KindArg};
use crate::error::{CliError, Result};
use crate::input::{eval_expr, Context, MatrixFile};
use crate::report::{matrix, net, report, samples, vector, vectors};

/// Runs one command and returns its payload together with the resolved
/// context, which the caller echoes.
pub fn run(command: &Command, global: &crate::args::GlobalArgs) -> Result<(Value, Context)> {
    match command {
        Command::Classify { expr } => {
            let ctx = Context::resolve(global, &[])?;
            let a = eval_expr(expr, &ctx.grid, "expression")?;
            Ok((json!({ "expr": expr, "net": net(&a, &ctx.cfg) }), ctx))
        }
        Command::Det { file, shift } => {
            let (ctx, [a]) = load(global, [file])?;
            let a = match shift {
                Some(src) => a.shift(&eval_expr(src, &ctx.grid, "--shift")?).map_err(CliError::core("shift"))?,
                None => a,
            };
            let d = det(&a).map_err(CliError::core("det"))?;
            Ok((json!({ "shift": shift, "det": net(&d, &ctx.cfg) }), ctx))
        }
        Command::Invertible { file } => {
            let (ctx, [a]) = load(global, [file])?;
            let (ok, r) = is_invertible(&a, &ctx.cfg).map_err(CliError::core("invertible"))?;
            Ok((json!({ "invertible": ok, "det_report": report(&r) }), ctx))
        }
        Command::Solve { matrix: m, rhs } => {
            let (ctx, [a, b]) = load(global, [m, rhs])?;
            if b.cols() != 1 {
                return Err(CliError::Input(format!("right-hand side has {} columns, expected 1", b.cols())));
            }
            let b = b.column(0);
            let x = solve(&a, &b, &ctx.cfg).map_err(CliError::core("solve"))?;
            let resid = a.matvec(&x).and_then(|ax| ax.sub(&b)).map_err(CliError::core("residual"))?;
            Ok((json!({ "solution": vector(&x), "residual_report": report(&resid.negligibility(&ctx.cfg)) }), ctx))
        }
        Command::SymplecticBasis { form } => {
            let (ctx, [g]) = load(global, [form])?;
            let form = SymplecticForm::new(g, &ctx.cfg).map_err(CliError::core("form"))?;
            let b = symplectic_basis(&form, &ctx.cfg).map_err(CliError::core("symplectic basis"))?;
            Ok((basis_payload(&form, &b, &ctx.cfg)?, ctx))
        }
        Command::Extend { vectors: vs } => {
            let (ctx, [m]) = load(global, [vs])?;
            let given = m.columns();
            let added = extend_to_basis(&given, m.rows(), &ctx.cfg).map_err(CliError::core("extend"))?;
            let all: Vec<GenVector> = given.iter().chain(&added).cloned().collect();
            let d = det(&GenMatrix::from_columns(&ctx.grid, m.rows(), &all)?).map_err(CliError::core("det"))?;
            Ok((json!({ "added": vectors(&added), "basis_det": net(&d, &ctx.cfg) }), ctx))
        }
        Command::Annihilator { form, submodule } => {
            let (ctx, form, u) = load_submodule(global, form, submodule)?;
            let ann = annihilator(&form, &u, &ctx.cfg).map_err(CliError::core("annihilator"))?;
            let pairing = cross_pairing(&form, ann.generators(), u.generators(), &ctx.cfg)?;
            Ok((
                json!({
                    "generators": vectors(ann.generators()),
                    "rank": u.rank(),
                    "annihilator_rank": ann.rank(),
                    "pairing_report": pairing,
                }),
                ctx,
            ))
        }
        Command::ClassifySubmodule { form, submodule } => {
            let (ctx, form, u) = load_submodule(global, form, submodule)?;
            let r = classify_submodule(&form, &u, &ctx.cfg).map_err(CliError::core("classify submodule"))?;
            let m = GenMatrix::from_columns(&ctx.grid, form.rank(), u.generators())?;
            let restricted = form.restrict(&m, &m)?;
            let d = det(&restricted)?;
            Ok((
                json!({
                    "classification": serde_json::to_value(&r).expect("serializable"),
                    "restricted_gram_report": report(&restricted.negligibility(&ctx.cfg)),
                    "restricted_det": net(&d, &ctx.cfg),
                }),
                ctx,
            ))
        }
        Command::Eigen { file, kind } => {
            let (ctx, [a]) = load(global, [file])?;
            let payload = match kind {
                KindArg::Hermitian => {
                    let (t, u) = hermitian_eigentuple(&a, &ctx.cfg).map_err(CliError::core("eigen"))?;
                    json!({ "kind": t.kind, "values": nets(&t.values, &ctx.cfg), "unitary": matrix(&u) })
                }
                KindArg::Skew => {
                    let t = skew_eigentuple(&a, &ctx.cfg).map_err(CliError::core("eigen"))?;
                    json!({ "kind": t.kind, "values": nets(&t.values, &ctx.cfg) })
                }
            };
            Ok((payload, ctx))
        }
        Command::NormalForm { file } => {
            let (ctx, [a]) = load(global, [file])?;
            let nf = skew_normal_form(&a, &ctx.cfg).map_err(CliError::core("normal form"))?;
            Ok((
                json!({
                    "v": matrix(&nf.v),
                    "lambdas": nets(&nf.lambdas, &ctx.cfg),
                    "zero_block_count": nf.zero_block_count,
                    "warnings": nf.warnings,
                }),
                ctx,
            ))
        }
        Command::CheckEigenvalue { file, lambda } => {
            let (ctx, [a]) = load(global, [file])?;
            let l = eval_expr(lambda, &ctx.grid, "--lambda")?;
            let (ok, r) = is_eigenvalue(&a, &l, &ctx.cfg).map_err(CliError::core("check eigenvalue"))?;
            let d = det(&a.shift(&l)?)?;
            let mut payload = json!({
                "lambda": lambda,
                "eigenvalue": ok,
                "det": { "samples": samples(&d), "report": report(&r) },
            });
            if ok {
                let x = eigenpair_from_root(&a, &l, true, &ctx.cfg).map_err(CliError::core("eigenvector"))?;
                payload["eigenvector"] = vector(&x);
            }
            Ok((payload, ctx))
        }
    }
}

fn load<const N: usize>(global: &crate::args::GlobalArgs, paths: [&Path; N]) -> Result<(Context, [GenMatrix; N])> {
    let files = paths.map(MatrixFile::load);
    let mut loaded = Vec::with_capacity(N);
    for f in files {
        loaded.push(f?);
    }
    let pairs: Vec<(&Path, &MatrixFile)> = paths.iter().copied().zip(&loaded).collect();
    let ctx = Context::resolve(global, &pairs)?;
    let mut mats = Vec::with_capacity(N);
    for (p, f) in &pairs {
        mats.push(f.to_matrix(&ctx.grid, &p.display().to_string())?);
    }
    let mats: [GenMatrix; N] = mats.try_into().unwrap_or_else(|_| unreachable!("one matrix per path"));
    Ok((ctx, mats))
}

fn load_submodule(
    global: &crate::args::GlobalArgs,
    form: &Path,
    submodule: &Path,
) -> Result<(Context, SymplecticForm, Submodule)> {
    let (ctx, [g, u]) = load(global, [form, submodule])?;
    let form = SymplecticForm::new(g, &ctx.cfg).map_err(CliError::core("form"))?;
    if u.rows() != form.rank() {
        return Err(CliError::Input(format!(
            "submodule generators have length {}, form has rank {}",
            u.rows(),
            form.rank()
        )));
    }
    let u = Submodule::new(&ctx.grid, form.rank(), u.columns(), &ctx.cfg).map_err(CliError::core("submodule"))?;
    Ok((ctx, form, u))
}

fn nets(values: &[GenScalar], cfg: &ClassifierConfig) -> Value {
    Value::Array(values.iter().map(|v| net(v, cfg)).collect())
}

fn cross_pairing(form: &SymplecticForm, a: &[GenVector], b: &[GenVector], cfg: &ClassifierConfig) -> Result<Value> {
    if a.is_empty() || b.is_empty() {
        return Ok(Value::Null);
    }
    let grid = form.grid();
    let ma = GenMatrix::from_columns(grid, form.rank(), a)?;
    let mb = GenMatrix::from_columns(grid, form.rank(), b)?;
    Ok(report(&form.restrict(&ma, &mb)?.negligibility(cfg)))
}

/// Basis vectors plus every relation `σ(e_j, e_l)`, `σ(f_j, f_l)`,
/// `σ(f_j, e_l) − δ_jl` with its classification.
fn basis_payload(form: &SymplecticForm, b: &SymplecticBasis, cfg: &ClassifierConfig) -> Result<Value> {
    let n = b.e.len();
    let grid = form.grid();
    let mut relations = Vec::with_capacity(3 * n * n);
    let mut all_hold = true;
    for j in 0..n {
        for l in 0..n {
            let delta = GenScalar::constant(grid, if j == l { 1.0 } else { 0.0 });
            let checks = [
                (format!("σ(e_{}, e_{})", j + 1, l + 1), form.apply(&b.e[j], &b.e[l])?),
                (format!("σ(f_{}, f_{})", j + 1, l + 1), form.apply(&b.f[j], &b.f[l])?),
                (format!("σ(f_{}, e_{}) − δ", j + 1, l + 1), form.apply(&b.f[j], &b.e[l])?.sub(&delta)?),
            ];
            for (name, value) in checks {
                let r = classify(&value, cfg);
                all_hold &= r.classification.is_negligible();
                relations.push(json!({ "relation": name, "report": report(&r) }));
            }
        }
    }
    Ok(json!({
        "e": vectors(&b.e),
        "f": vectors(&b.f),
        "basis_matrix": matrix(&b.matrix()?),
        "relations": relations,
        "all_relations_hold": all_hold,
    }))
}
