//! `mvop` — exact verification of matrix-valued orthogonal polynomial
//! operator algebras from the command line.
//!
//! Every subcommand assembles a deterministic report of exact checks
//! (rational arithmetic throughout, no tolerances) and renders it as text or
//! canonical JSON. Exit codes: 0 when every check passes, 1 when at least
//! one check fails, 2 for configuration errors — bad parameters, malformed
//! input files, or unsupported weights.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use mvop_core::mat::fmt_rat_mat;
use mvop_core::*;

use std::result::Result;

// ---- Command line ----

#[derive(Parser)]
#[command(
    name = "mvop",
    version,
    about = "Exact verifier for matrix-weight operator algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the 2×2 example and run every verification suite
    VerifyJacobi(SampleArgs),
    /// Check only the two-weight link certificate of the 2×2 example
    Darboux(SampleArgs),
    /// Generators and relations of a direct-sum operator algebra
    Directsum(WeightCmdArgs),
    /// Center of a direct-sum operator algebra
    Center(WeightCmdArgs),
    /// Monic orthogonal polynomials and recursion coefficients
    Mops(MopsArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SampleArgs {
    /// Weight parameter α (repeat for several samples)
    #[arg(long, value_parser = parse_rat_arg)]
    alpha: Vec<Rat>,
    /// Weight parameter β (repeat for several samples)
    #[arg(long, value_parser = parse_rat_arg)]
    beta: Vec<Rat>,
    /// Weight parameter v (repeat for several samples)
    #[arg(long, value_parser = parse_rat_arg)]
    v: Vec<Rat>,
    /// Verification depth: identities are checked on polynomials up to this degree
    #[arg(long, default_value_t = 12)]
    nmax: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct WeightCmdArgs {
    /// JSON description of the weight (defaults to a built-in Laguerre sum)
    #[arg(long)]
    weight_file: Option<PathBuf>,
    /// Degree bound for symmetry probes
    #[arg(long, default_value_t = 6)]
    dmax: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MopsArgs {
    /// Parameter α: alone a Laguerre weight, with --beta an interval weight
    #[arg(long, value_parser = parse_rat_arg)]
    alpha: Option<Rat>,
    /// Parameter β of an interval weight
    #[arg(long, value_parser = parse_rat_arg)]
    beta: Option<Rat>,
    /// Parameter v: with --alpha and --beta, the irreducible 2×2 weight
    #[arg(long, value_parser = parse_rat_arg)]
    v: Option<Rat>,
    /// Highest polynomial degree to construct
    #[arg(long, default_value_t = 12)]
    nmax: usize,
    /// JSON description of the weight
    #[arg(long)]
    weight_file: Option<PathBuf>,
    /// JSON moment list to build from instead of a weight
    #[arg(long)]
    moments_file: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).ok_or_else(|| format!("`{s}` is not a rational number (use p/q or a decimal)"))
}

// ---- Input files ----

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum WeightFile {
    Classical {
        family: String,
        #[serde(default)]
        alpha: Option<String>,
        #[serde(default)]
        beta: Option<String>,
        #[serde(default)]
        b: Option<String>,
    },
    DirectSum {
        parts: Vec<WeightFile>,
    },
    MatrixJacobi {
        alpha: String,
        beta: String,
        v: String,
    },
    Conjugated {
        m: Vec<Vec<String>>,
        inner: Box<WeightFile>,
    },
}

fn parse_rat_field(name: &str, value: &Option<String>) -> Result<Rat, String> {
    let s = value
        .as_ref()
        .ok_or_else(|| format!("weight file is missing the `{name}` field"))?;
    parse_rat(s).ok_or_else(|| format!("bad `{name}` value: `{s}`"))
}

impl WeightFile {
    fn to_spec(&self) -> Result<WeightSpec, String> {
        match self {
            WeightFile::Classical {
                family,
                alpha,
                beta,
                b,
            } => match family.as_str() {
                "hermite" => Ok(WeightSpec::hermite(parse_rat_field("b", b)?)),
                "laguerre" => Ok(WeightSpec::laguerre(parse_rat_field("alpha", alpha)?)),
                "jacobi" => Ok(WeightSpec::jacobi(
                    parse_rat_field("alpha", alpha)?,
                    parse_rat_field("beta", beta)?,
                )),
                other => Err(format!(
                    "unknown family `{other}` (expected hermite, laguerre, or jacobi)"
                )),
            },
            WeightFile::DirectSum { parts } => {
                if parts.is_empty() {
                    return Err("a direct sum needs at least one part".to_string());
                }
                Ok(WeightSpec::direct_sum(
                    parts
                        .iter()
                        .map(|p| p.to_spec())
                        .collect::<Result<_, _>>()?,
                ))
            }
            WeightFile::MatrixJacobi { alpha, beta, v } => Ok(WeightSpec::matrix_jacobi(
                parse_rat_field("alpha", &Some(alpha.clone()))?,
                parse_rat_field("beta", &Some(beta.clone()))?,
                parse_rat_field("v", &Some(v.clone()))?,
            )),
            WeightFile::Conjugated { m, inner } => {
                let rows = m.len();
                if rows == 0 || m.iter().any(|r| r.len() != m[0].len()) {
                    return Err("conjugation matrix must be rectangular and nonempty".to_string());
                }
                let parsed: Vec<Vec<Rat>> = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| {
                                parse_rat(e)
                                    .ok_or_else(|| format!("bad matrix entry `{e}`"))
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                Ok(WeightSpec::conjugated(
                    Mat::from_rows(parsed),
                    inner.to_spec()?,
                ))
            }
        }
    }
}

fn load_weight(path: &Path) -> Result<WeightSpec, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let wf: WeightFile =
        serde_json::from_str(&text).map_err(|e| format!("malformed weight file: {e}"))?;
    let spec = wf.to_spec()?;
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentsFile {
    size: usize,
    moments: Vec<Vec<Vec<String>>>,
}

fn load_moments(path: &Path) -> Result<Vec<Mat<Rat>>, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mf: MomentsFile =
        serde_json::from_str(&text).map_err(|e| format!("malformed moments file: {e}"))?;
    if mf.size == 0 || mf.moments.is_empty() {
        return Err("moments file needs a positive size and at least one moment".to_string());
    }
    let mut out = Vec::with_capacity(mf.moments.len());
    for (k, m) in mf.moments.iter().enumerate() {
        if m.len() != mf.size || m.iter().any(|r| r.len() != mf.size) {
            return Err(format!("moment {k} is not a {0}×{0} matrix", mf.size));
        }
        let rows: Vec<Vec<Rat>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        parse_rat(e).ok_or_else(|| format!("bad entry `{e}` in moment {k}"))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        out.push(Mat::from_rows(rows));
    }
    validate_moments(&out).map_err(|e| e.to_string())?;
    Ok(out)
}

// ---- Rendering helpers ----

fn fmt_poly_matrix(m: &Mat<Poly>) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let entries: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).fmt_var("x")).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn fmt_unit_matrix(m: &Mat<UnitScalar>) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let entries: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn family_name(f: &ScalarFamily) -> String {
    match f {
        ScalarFamily::Hermite { b } => format!("hermite(b = {b})"),
        ScalarFamily::Laguerre { alpha } => format!("laguerre({alpha})"),
        ScalarFamily::Jacobi { alpha, beta } => format!("jacobi({alpha}, {beta})"),
    }
}

fn describe_weight(w: &WeightSpec) -> String {
    match w {
        WeightSpec::Classical(f) => family_name(f),
        WeightSpec::DirectSum(parts) => parts
            .iter()
            .map(describe_weight)
            .collect::<Vec<_>>()
            .join(" + "),
        WeightSpec::Conjugated { inner, .. } => format!("conjugated({})", describe_weight(inner)),
        WeightSpec::MatrixJacobi { alpha, beta, v } => {
            format!("matrix_jacobi({alpha}, {beta}, {v})")
        }
    }
}

// ---- Sample handling ----

fn samples_of(args: &SampleArgs) -> Result<Vec<(Rat, Rat, Rat)>, String> {
    if args.alpha.is_empty() && args.beta.is_empty() && args.v.is_empty() {
        return Ok(vec![
            (rat_int(0), rat_int(0), rat_int(1)),
            (rat_int(1), rat(1, 2), rat_int(2)),
            (rat_int(2), rat_int(1), rat(5, 2)),
        ]);
    }
    if args.alpha.len() != args.beta.len() || args.alpha.len() != args.v.len() {
        return Err(format!(
            "--alpha, --beta, --v must be repeated equally often (got {}, {}, {})",
            args.alpha.len(),
            args.beta.len(),
            args.v.len()
        ));
    }
    Ok(args
        .alpha
        .iter()
        .zip(&args.beta)
        .zip(&args.v)
        .map(|((a, b), v)| (a.clone(), b.clone(), v.clone()))
        .collect())
}

fn render_samples(samples: &[(Rat, Rat, Rat)]) -> String {
    samples
        .iter()
        .map(|(a, b, v)| format!("({a}, {b}, {v})"))
        .collect::<Vec<_>>()
        .join("; ")
}

// ---- Subcommands ----

fn cmd_verify_jacobi(args: &SampleArgs) -> Result<Report, String> {
    let samples = samples_of(args)?;
    let mut rep = Report::new("full verification of the 2x2 matrix-weight operator algebra");
    rep.set_config("n_max", args.nmax.to_string());
    rep.set_config("samples", render_samples(&samples));
    if args.nmax < 8 {
        rep.set_config(
            "depth_note",
            format!(
                "requested depth {} is below 8; the link certificate still verifies to depth 8",
                args.nmax
            ),
        );
    }
    for (a, b, v) in &samples {
        let bundle = build_bundle(a.clone(), b.clone(), v.clone()).map_err(|e| e.to_string())?;
        let prefix = format!("sample({a},{b},{v})");
        let err = |e: Error| e.to_string();
        rep.absorb(&prefix, verify_factorization(&bundle, args.nmax).map_err(err)?);
        rep.absorb(
            &prefix,
            verify_generators_and_relations(&bundle, args.nmax).map_err(err)?,
        );
        rep.absorb(&prefix, verify_center(&bundle).map_err(err)?);
        let (_, orep) = orthogonal_family(&bundle, args.nmax).map_err(err)?;
        rep.absorb(&prefix, orep);
    }
    Ok(rep)
}

fn cmd_darboux(args: &SampleArgs) -> Result<Report, String> {
    let samples = samples_of(args)?;
    let mut rep = Report::new("two-weight link certificates for the 2x2 example");
    rep.set_config("n_max", args.nmax.to_string());
    rep.set_config("samples", render_samples(&samples));
    for (a, b, v) in &samples {
        let bundle = build_bundle(a.clone(), b.clone(), v.clone()).map_err(|e| e.to_string())?;
        let link = darboux_verify(bundle.op("V"), &bundle.wtilde, &bundle.w, args.nmax)
            .map_err(|e| e.to_string())?;
        let mut r = Report::new("link");
        r.check(
            "degree_preserving",
            link.invertible_for_all_n,
            format!(
                "det of the link eigenvalue is {}, never zero at integers ≥ 0",
                link.certificate.det.fmt_var("n")
            ),
        );
        r.check_witnessed(
            "eigenfunction[forward_product]",
            link.vn_report.pass,
            "the source polynomials are eigenfunctions of link∘adjoint",
            link.vn_report.witness.clone(),
        );
        r.check_witnessed(
            "eigenfunction[reverse_product]",
            link.nv_report.pass,
            "the target polynomials are eigenfunctions of adjoint∘link",
            link.nv_report.witness.clone(),
        );
        r.check_witnessed(
            "intertwining",
            link.intertwining_pass,
            "applying the link to a source polynomial gives its eigenvalue times the target polynomial",
            link.intertwining_first_failure
                .map(|n| format!("first failure at n = {n}")),
        );
        r.check_witnessed(
            "norm_identity",
            link.norm_identity_pass,
            "the adjoint eigenvalue carries source norms to target norms, units included",
            link.norm_identity_first_failure
                .map(|n| format!("first failure at n = {n}")),
        );
        rep.absorb(&format!("sample({a},{b},{v})"), r);
    }
    Ok(rep)
}

fn cmd_directsum(args: &WeightCmdArgs) -> Result<Report, String> {
    let w = match &args.weight_file {
        Some(p) => load_weight(p)?,
        None => WeightSpec::direct_sum(vec![
            WeightSpec::laguerre(rat(1, 2)),
            WeightSpec::laguerre(rat(3, 2)),
        ]),
    };
    let comps = classical_components(&w).map_err(|e| e.to_string())?;
    if comps.is_empty() {
        return Err("the weight has no components".to_string());
    }
    let gens = directsum_generators(&w).map_err(|e| e.to_string())?;
    let err = |e: Error| e.to_string();

    let mut rep = Report::new("generators and relations of a direct-sum algebra");
    rep.set_config("weight", describe_weight(&w));
    rep.set_config("d_max", args.dmax.to_string());
    rep.set_config("generators", gens.labels.join(", "));

    let n = comps.len();
    let linked_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && darboux_equivalent(&comps[i], &comps[j]))
        .collect();
    rep.check(
        "generator_count",
        gens.len() == 2 * n + linked_pairs.len(),
        format!(
            "{} components with {} linked ordered pairs give {} generators",
            n,
            linked_pairs.len(),
            gens.len()
        ),
    );

    let mut symmetric_ok = true;
    for (g, label) in gens.ops.iter().zip(&gens.labels) {
        if label.starts_with("delta") || label.starts_with("E") {
            symmetric_ok &= is_symmetric(g, &w, args.dmax).map_err(err)?;
        }
    }
    rep.check(
        "diagonal_generators_symmetric",
        symmetric_ok,
        "every diagonal generator is symmetric for the weight's inner product",
    );

    for (g, label) in gens.ops.iter().zip(&gens.labels) {
        let lam = eigenvalue_poly(g).map_err(err)?;
        let rebuilt = operator_from_eigenvalue(&lam, &w).map_err(err)?;
        rep.check(
            format!("eigenvalue_roundtrip[{label}]"),
            &rebuilt == g,
            "the generator is recovered exactly from its eigenvalue matrix",
        );
    }

    for &(i, j) in &linked_pairs {
        let t = t_operator(&comps[i], &comps[j]).map_err(err)?;
        let lam = eigenvalue_poly(&t).map_err(err)?;
        rep.check(
            format!("ladder_eigenvalue[T[{i},{j}]]"),
            lam.at(0, 0) == &t_eigenvalue(&comps[i], &comps[j]).map_err(err)?,
            "the ladder operator's eigenvalue matches its closed form",
        );
    }
    for &(i, j) in &linked_pairs {
        if i > j {
            continue;
        }
        let fwd = t_operator(&comps[i], &comps[j]).map_err(err)?.embed(n, i, j);
        let back = t_operator(&comps[j], &comps[i]).map_err(err)?.embed(n, j, i);
        let prod = compose(&fwd, &back).map_err(err)?;
        let lam = eigenvalue_poly(&prod).map_err(err)?;
        let rebuilt = operator_from_eigenvalue(&lam, &w).map_err(err)?;
        rep.check(
            format!("ladder_composition[{i},{j}]"),
            rebuilt == prod,
            "the round-trip ladder product is a polynomial in the component operator",
        );
    }

    let center = directsum_center(&w).map_err(err)?;
    rep.set_config("center", center.gens.labels.join(", "));
    for (op, label) in center.gens.ops.iter().zip(&center.gens.labels) {
        rep.check(
            format!("central[{label}]"),
            center_check(op, &gens).map_err(err)?,
            "eigenvalue commutators with every generator vanish",
        );
    }
    Ok(rep)
}

fn cmd_center(args: &WeightCmdArgs) -> Result<Report, String> {
    let w = match &args.weight_file {
        Some(p) => load_weight(p)?,
        None => WeightSpec::direct_sum(vec![
            WeightSpec::laguerre(rat_int(1)),
            WeightSpec::laguerre(rat(3, 2)),
            WeightSpec::laguerre(rat_int(2)),
            WeightSpec::laguerre(rat(5, 2)),
        ]),
    };
    let err = |e: Error| e.to_string();
    let gens = directsum_generators(&w).map_err(err)?;
    let center = directsum_center(&w).map_err(err)?;

    let mut rep = Report::new("center of a direct-sum algebra");
    rep.set_config("weight", describe_weight(&w));
    rep.set_config("classes", format!("{:?}", center.classes));
    rep.set_config("permutation", format!("{:?}", center.permutation));
    rep.set_config("center", center.gens.labels.join(", "));

    for (op, label) in center.gens.ops.iter().zip(&center.gens.labels) {
        rep.check(
            format!("central[{label}]"),
            center_check(op, &gens).map_err(err)?,
            "eigenvalue commutators with every generator vanish",
        );
    }
    let delta_count = center
        .gens
        .labels
        .iter()
        .filter(|l| l.starts_with("Delta"))
        .count();
    rep.check(
        "one_delta_block_per_class",
        delta_count == center.classes.len(),
        format!(
            "{} classes and {} diagonal blocks",
            center.classes.len(),
            delta_count
        ),
    );
    let idempotents = center
        .gens
        .labels
        .iter()
        .filter(|l| l.starts_with("P["))
        .count();
    rep.check(
        "class_idempotents",
        if center.classes.len() > 1 {
            idempotents == center.classes.len()
        } else {
            idempotents == 0
        },
        "idempotents appear exactly when several classes coexist",
    );
    rep.check(
        "center_commutes",
        commutativity_probe(&center.gens).map_err(err)?,
        "the center generators commute with each other",
    );
    let mut symmetric_ok = true;
    for op in &center.gens.ops {
        symmetric_ok &= is_symmetric(op, &w, args.dmax).map_err(err)?;
    }
    rep.check(
        "center_symmetric",
        symmetric_ok,
        "every center generator is symmetric for the weight's inner product",
    );
    Ok(rep)
}

struct MopsData {
    polys: Vec<String>,
    b: Vec<String>,
    c: Vec<String>,
    norms: Vec<String>,
}

impl MopsData {
    fn to_text(&self) -> String {
        let mut s = String::from("-- data --\n");
        for (n, p) in self.polys.iter().enumerate() {
            s.push_str(&format!("P[{n}] = {p}\n"));
        }
        for (n, b) in self.b.iter().enumerate() {
            s.push_str(&format!("B[{n}] = {b}\n"));
        }
        for (n, c) in self.c.iter().enumerate().skip(1) {
            s.push_str(&format!("C[{n}] = {c}\n"));
        }
        for (n, h) in self.norms.iter().enumerate() {
            s.push_str(&format!("norm[{n}] = {h}\n"));
        }
        s
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "polys": self.polys,
            "b": self.b,
            "c": self.c,
            "norms": self.norms,
        })
    }
}

fn lift_rat_matrix(m: &Mat<Rat>) -> Mat<Poly> {
    m.map(|r| Poly::constant(r.clone()))
}

fn cmd_mops(args: &MopsArgs) -> Result<(Report, MopsData), String> {
    let mut rep = Report::new("monic orthogonal polynomials and recursion coefficients");
    rep.set_config("n_max", args.nmax.to_string());
    let err = |e: Error| e.to_string();

    // resolve the source: moments file, weight file, parameters, or default
    let (polys, norms, rc, weight): (
        Vec<Mat<Poly>>,
        Vec<Mat<UnitScalar>>,
        RecursionCoeffs,
        Option<WeightSpec>,
    ) = if let Some(mf) = &args.moments_file {
        if args.weight_file.is_some() {
            return Err("pass either --moments-file or --weight-file, not both".to_string());
        }
        let rats = load_moments(mf)?;
        let units: Vec<Mat<UnitScalar>> = rats
            .iter()
            .map(|m| m.map(|r| UnitScalar::from_rat(r.clone())))
            .collect();
        let (polys, norms) = monic_mops_from_moments(&units, args.nmax).map_err(err)?;
        let rc = recursion_from_parts(&polys, &norms, &units).map_err(err)?;
        rep.set_config(
            "source",
            format!("moment file with {} moments of size {}", rats.len(), rats[0].rows()),
        );
        (polys, norms, rc, None)
    } else {
        let w = if let Some(p) = &args.weight_file {
            load_weight(p)?
        } else {
            match (&args.alpha, &args.beta, &args.v) {
                (Some(a), Some(b), Some(v)) => {
                    WeightSpec::matrix_jacobi(a.clone(), b.clone(), v.clone())
                }
                (Some(a), Some(b), None) => WeightSpec::jacobi(a.clone(), b.clone()),
                (Some(a), None, None) => WeightSpec::laguerre(a.clone()),
                (None, None, None) => WeightSpec::jacobi(rat_int(0), rat_int(0)),
                _ => {
                    return Err(
                        "--beta needs --alpha, and --v needs both --alpha and --beta".to_string()
                    )
                }
            }
        };
        w.validate().map_err(err)?;
        rep.set_config("weight", describe_weight(&w));
        let m = monic_mops(&w, args.nmax).map_err(err)?;
        let rc = recursion_coeffs(&m).map_err(err)?;
        (m.polys, m.norms, rc, Some(w))
    };

    let size = polys[0].rows();
    let monic_ok = polys.iter().enumerate().all(|(n, p)| {
        let lead: Vec<Vec<Rat>> = (0..size)
            .map(|i| (0..size).map(|j| p.at(i, j).coeff(n)).collect())
            .collect();
        mat_degree(p) == n && Mat::from_rows(lead) == Mat::identity(size)
    });
    rep.check(
        "monic_of_correct_degree",
        monic_ok,
        "every P_n has degree n with identity leading coefficient",
    );

    let x = Poly::x();
    let mut residual_ok = true;
    for n in 0..polys.len() - 1 {
        let mut res = polys[n].map(|e| e.mul(&x)).sub(&polys[n + 1]);
        res = res.sub(&lift_rat_matrix(&rc.b[n]).mul(&polys[n]));
        if n > 0 {
            res = res.sub(&lift_rat_matrix(&rc.c[n]).mul(&polys[n - 1]));
        }
        residual_ok &= res.is_zero();
    }
    rep.check(
        "recursion_residual",
        residual_ok,
        "xP_n − P_{n+1} − B_nP_n − C_nP_{n−1} vanishes for every n",
    );

    let norms_ok = norms
        .iter()
        .all(|h| h == &h.transpose());
    rep.check(
        "norms_symmetric",
        norms_ok,
        "every square norm ⟨P_n, P_n⟩ is a symmetric matrix",
    );

    if let Some(WeightSpec::MatrixJacobi { alpha, beta, v }) = &weight {
        let bundle = build_bundle(alpha.clone(), beta.clone(), v.clone()).map_err(err)?;
        let jt = monic_mops(&bundle.wtilde, args.nmax).map_err(err)?;
        let lam_v = eigenvalue_poly(bundle.op("V")).map_err(err)?;
        let mut ok = true;
        for (n, p) in polys.iter().enumerate() {
            let q = apply(&jt.polys[n], bundle.op("V")).map_err(err)?;
            let a_n = eig_at(&lam_v, n as u64);
            let inv = match a_n.inverse() {
                Some(m) => m,
                None => {
                    ok = false;
                    break;
                }
            };
            ok &= lift_rat_matrix(&inv).mul(&q) == *p;
        }
        rep.check(
            "q_family_cross_reference",
            ok,
            "the monic family equals the link image of the diagonal family, renormalized",
        );
    }

    let data = MopsData {
        polys: polys.iter().map(fmt_poly_matrix).collect(),
        b: rc.b.iter().map(fmt_rat_mat).collect(),
        c: rc.c.iter().map(fmt_rat_mat).collect(),
        norms: norms.iter().map(fmt_unit_matrix).collect(),
    };
    Ok((rep, data))
}

// ---- Output ----

fn emit(
    report: &Report,
    data: Option<&MopsData>,
    out: &OutputArgs,
) -> Result<(), String> {
    let body = match out.format {
        Format::Text => {
            let mut s = report.to_text();
            if let Some(d) = data {
                s.push_str(&d.to_text());
            }
            s
        }
        Format::Json => match data {
            Some(d) => {
                let v = json!({"data": d.to_json(), "report": report});
                let mut s =
                    serde_json::to_string_pretty(&v).map_err(|e| e.to_string())?;
                s.push('\n');
                s
            }
            None => report.to_json(),
        },
    };
    match &out.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let (report, data, output) = match &cli.cmd {
        Cmd::VerifyJacobi(a) => (cmd_verify_jacobi(a)?, None, &a.output),
        Cmd::Darboux(a) => (cmd_darboux(a)?, None, &a.output),
        Cmd::Directsum(a) => (cmd_directsum(a)?, None, &a.output),
        Cmd::Center(a) => (cmd_center(a)?, None, &a.output),
        Cmd::Mops(a) => {
            let (rep, data) = cmd_mops(a)?;
            (rep, Some(data), &a.output)
        }
    };
    emit(&report, data.as_ref(), output)?;
    Ok(if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
