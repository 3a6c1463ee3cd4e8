//! Monic matrix orthogonal polynomials from exact moments.
//!
//! Given the moment sequence μ_k of a weight, the unique monic degree-n
//! orthogonal polynomial P_n = x^nI + Σ_{k<n} c_{n,k}x^k is determined by the
//! block-Hankel system Σ_k c_{n,k}μ_{k+j} = −μ_{n+j}, 0 ≤ j < n, solved here
//! exactly (fraction-free elimination; no pivot tolerances exist or are
//! needed). Direct sums are assembled per summand and conjugated weights by
//! exact transport — both agree with the direct moment solve, which is tested.
//!
//! Everything downstream that claims an operator has the eigenfunction
//! property, is symmetric, or satisfies a recursion, is verified against
//! these polynomials entry-by-entry over ℚ.

use crate::diffop::{apply, eig_at, eigenvalue_poly, MatDiffOp};
use crate::error::{Error, Result};
use crate::mat::{solve_exact, solve_tall_exact, Mat};
use crate::poly::Poly;
use crate::scalar::{rat_int, Rat};
use crate::unit::{unit_ratio, UnitScalar, UnitTag};
use crate::weights::WeightSpec;

// ---- Domain types ----

/// Monic orthogonal polynomials P_0..P_{n_max} of a weight, with their
/// (nonsingular, symmetric) square norms ⟨P_n, P_n⟩.
#[derive(Debug, Clone)]
pub struct MopSequence {
    pub weight: WeightSpec,
    pub polys: Vec<Mat<Poly>>,
    pub norms: Vec<Mat<UnitScalar>>,
}

impl MopSequence {
    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn size(&self) -> usize {
        self.weight.size()
    }
}

/// Coefficients of the three-term recursion xP_n = P_{n+1} + B_nP_n + C_nP_{n−1}
/// (with P_{−1} = 0, so `c[0]` is stored as the zero matrix).
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionCoeffs {
    pub b: Vec<Mat<Rat>>,
    pub c: Vec<Mat<Rat>>,
}

/// Outcome of testing the eigenfunction property P_n·D = Λ_n(D)·P_n.
#[derive(Debug, Clone)]
pub struct EigenReport {
    pub pass: bool,
    pub first_failure_n: Option<usize>,
    /// Λ_n(D) per verified n (up to the first failure).
    pub eigenvalues: Vec<Mat<Rat>>,
    /// Rendered residual at the first failure.
    pub witness: Option<String>,
}

// ---- Construction ----

/// The unique monic orthogonal sequence for a weight, up to degree `n_max`.
pub fn monic_mops(w: &WeightSpec, n_max: usize) -> Result<MopSequence> {
    w.validate()?;
    match w {
        WeightSpec::DirectSum(parts) => {
            let seqs: Vec<MopSequence> = parts
                .iter()
                .map(|p| monic_mops(p, n_max))
                .collect::<Result<_>>()?;
            let polys = (0..=n_max)
                .map(|n| {
                    let blocks: Vec<Mat<Poly>> = seqs.iter().map(|s| s.polys[n].clone()).collect();
                    Mat::block_diag(&blocks)
                })
                .collect();
            let norms = (0..=n_max)
                .map(|n| {
                    let blocks: Vec<Mat<UnitScalar>> =
                        seqs.iter().map(|s| s.norms[n].clone()).collect();
                    Mat::block_diag(&blocks)
                })
                .collect();
            Ok(MopSequence {
                weight: w.clone(),
                polys,
                norms,
            })
        }
        WeightSpec::Conjugated { m, inner } => {
            // W' = MWM* has P'_n = M·P_n·M⁻¹ (still monic) and
            // ‖P'_n‖² = M‖P_n‖²M*.
            let seq = monic_mops(inner, n_max)?;
            let m_inv = m.inverse().ok_or_else(|| {
                Error::SingularMatrix("conjugation matrix is singular".to_string())
            })?;
            let mp = lift_to_poly(m);
            let mp_inv = lift_to_poly(&m_inv);
            let mu = lift_to_units(m);
            let mu_t = mu.transpose();
            Ok(MopSequence {
                weight: w.clone(),
                polys: seq
                    .polys
                    .iter()
                    .map(|p| mp.mul(p).mul(&mp_inv))
                    .collect(),
                norms: seq.norms.iter().map(|h| mu.mul(h).mul(&mu_t)).collect(),
            })
        }
        _ => {
            let moments = w.moments(2 * n_max)?;
            let (polys, norms) = monic_mops_from_moments(&moments, n_max)?;
            Ok(MopSequence {
                weight: w.clone(),
                polys,
                norms,
            })
        }
    }
}

/// Monic orthogonal polynomials directly from a moment list μ_0..μ_{≥2·n_max}.
/// Moments may mix commensurable-unit blocks (direct sums, conjugations): the
/// Hankel system is split per unit class and solved as one stacked exact
/// system.
pub fn monic_mops_from_moments(
    moments: &[Mat<UnitScalar>],
    n_max: usize,
) -> Result<(Vec<Mat<Poly>>, Vec<Mat<UnitScalar>>)> {
    if moments.len() < 2 * n_max + 1 {
        return Err(Error::DimensionMismatch(format!(
            "degree {n_max} needs moments up to index {}, got {}",
            2 * n_max,
            moments.len().saturating_sub(1)
        )));
    }
    let size = moments[0].rows();
    if moments
        .iter()
        .any(|m| m.rows() != size || m.cols() != size)
    {
        return Err(Error::DimensionMismatch(
            "moment matrices have inconsistent sizes".to_string(),
        ));
    }
    let classes = split_unit_classes(moments)?;

    let mut polys = vec![Mat::<Poly>::identity(size)];
    let mut norms = vec![moments[0].clone()];
    for n in 1..=n_max {
        // Stack the transposed orthogonality conditions
        // Σ_k μ_{k+j}ᵀ c_{n,k}ᵀ = −μ_{n+j}ᵀ over unit classes and j < n.
        let rows = classes.len() * n * size;
        let cols = n * size;
        let mut a = Mat::<Rat>::zeros(rows, cols);
        let mut b = Mat::<Rat>::zeros(rows, size);
        for (t, (_, ms)) in classes.iter().enumerate() {
            for j in 0..n {
                let r0 = (t * n + j) * size;
                for k in 0..n {
                    copy_block_transposed(&mut a, r0, k * size, &ms[k + j]);
                }
                copy_block_transposed(&mut b, r0, 0, &ms[n + j].neg());
            }
        }
        let x = if classes.len() == 1 {
            solve_exact(&a, &b)
        } else {
            solve_tall_exact(&a, &b)
        }
        .ok_or_else(|| {
            Error::SingularHankel(format!("moment system for degree {n} is singular"))
        })?;

        // Reassemble P_n = x^nI + Σ c_{n,k}x^k from the stacked solution.
        let coeff = |k: usize, r: usize, s: usize| -> Rat {
            // x holds c_{n,k}ᵀ stacked: entry (k*size + s, r).
            x.at(k * size + s, r).clone()
        };
        let p = Mat::from_fn(size, size, |r, s| {
            let mut cs: Vec<Rat> = (0..n).map(|k| coeff(k, r, s)).collect();
            cs.push(if r == s { rat_int(1) } else { rat_int(0) });
            Poly::from_coeffs(cs)
        });

        // ‖P_n‖² = ⟨P_n, x^nI⟩ = Σ_k c_{n,k}·μ_{k+n} (orthogonality kills the rest).
        let mut h = moments[2 * n].clone();
        for k in 0..n {
            let ck = Mat::from_fn(size, size, |r, s| {
                UnitScalar::from_rat(coeff(k, r, s))
            });
            h = h.add(&ck.mul(&moments[k + n]));
        }
        polys.push(p);
        norms.push(h);
    }
    Ok((polys, norms))
}

// ---- Inner products ----

/// ⟨P, Q⟩_W = Σ_{a,b} A_a·μ_{a+b}·B_bᵀ for P = ΣA_ax^a, Q = ΣB_bx^b.
pub fn inner_product(p: &Mat<Poly>, q: &Mat<Poly>, w: &WeightSpec) -> Result<Mat<UnitScalar>> {
    if p.cols() != w.size() || q.cols() != w.size() {
        return Err(Error::DimensionMismatch(format!(
            "inner product over a size-{} weight got operands of widths {} and {}",
            w.size(),
            p.cols(),
            q.cols()
        )));
    }
    let d = mat_degree(p) + mat_degree(q);
    let moments = w.moments(d)?;
    inner_product_with_moments(p, q, &moments)
}

/// The same bilinear expansion against an explicit moment list.
pub fn inner_product_with_moments(
    p: &Mat<Poly>,
    q: &Mat<Poly>,
    moments: &[Mat<UnitScalar>],
) -> Result<Mat<UnitScalar>> {
    let size = moments[0].rows();
    if p.cols() != size || q.cols() != size {
        return Err(Error::DimensionMismatch(
            "inner-product operands do not match the moment size".to_string(),
        ));
    }
    let (dp, dq) = (mat_degree(p), mat_degree(q));
    if moments.len() <= dp + dq {
        return Err(Error::DimensionMismatch(format!(
            "inner product needs moments up to index {}, got {}",
            dp + dq,
            moments.len().saturating_sub(1)
        )));
    }
    let pas: Vec<Mat<UnitScalar>> = (0..=dp)
        .map(|a| lift_to_units(&p.map(|e| e.coeff(a))))
        .collect();
    let qbs: Vec<Mat<UnitScalar>> = (0..=dq)
        .map(|b| lift_to_units(&q.map(|e| e.coeff(b))).transpose())
        .collect();
    let mut acc = Mat::<UnitScalar>::zeros(p.rows(), q.rows());
    for (a, pa) in pas.iter().enumerate() {
        if pa.is_zero() {
            continue;
        }
        for (b, qb) in qbs.iter().enumerate() {
            if qb.is_zero() {
                continue;
            }
            acc = acc.add(&pa.mul(&moments[a + b]).mul(qb));
        }
    }
    Ok(acc)
}

// ---- Three-term recursion ----

/// B_n = ⟨xP_n, P_n⟩‖P_n‖⁻², C_n = ⟨xP_n, P_{n−1}⟩‖P_{n−1}‖⁻², solved exactly
/// (per unit class) rather than by inverting unit-tagged matrices.
pub fn recursion_coeffs(m: &MopSequence) -> Result<RecursionCoeffs> {
    let n_max = m.n_max();
    let moments = m.weight.moments(2 * n_max + 1)?;
    recursion_from_parts(&m.polys, &m.norms, &moments)
}

/// Recursion coefficients from explicit polynomials, norms, and moments.
pub fn recursion_from_parts(
    polys: &[Mat<Poly>],
    norms: &[Mat<UnitScalar>],
    moments: &[Mat<UnitScalar>],
) -> Result<RecursionCoeffs> {
    let size = polys[0].rows();
    let x = Poly::x();
    let mut b = Vec::with_capacity(polys.len());
    let mut c = vec![Mat::<Rat>::zeros(size, size)];
    for (n, pn) in polys.iter().enumerate() {
        let xpn = pn.map(|e| e.mul(&x));
        let bn_rhs = inner_product_with_moments(&xpn, pn, moments)?;
        b.push(solve_right_in_units(&norms[n], &bn_rhs)?);
        if n > 0 {
            let cn_rhs = inner_product_with_moments(&xpn, &polys[n - 1], moments)?;
            c.push(solve_right_in_units(&norms[n - 1], &cn_rhs)?);
        }
    }
    Ok(RecursionCoeffs { b, c })
}

/// xP_n − P_{n+1} − B_nP_n − C_nP_{n−1}; identically zero when the recursion
/// holds.
pub fn recursion_residual(m: &MopSequence, rc: &RecursionCoeffs, n: usize) -> Mat<Poly> {
    let x = Poly::x();
    let mut res = m.polys[n].map(|e| e.mul(&x)).sub(&m.polys[n + 1]);
    res = res.sub(&lift_to_poly(&rc.b[n]).mul(&m.polys[n]));
    if n > 0 {
        res = res.sub(&lift_to_poly(&rc.c[n]).mul(&m.polys[n - 1]));
    }
    res
}

// ---- Operator checks against the polynomials ----

/// Verify P_n·D = Λ_n(D)·P_n for every n in the sequence, with Λ_n(D) taken
/// from the eigenvalue map (the unique candidate, by monicity).
pub fn check_eigenfunction(d: &MatDiffOp, m: &MopSequence) -> Result<EigenReport> {
    if d.rows() != d.cols() || d.rows() != m.size() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}×{} against a size-{} weight",
            d.rows(),
            d.cols(),
            m.size()
        )));
    }
    let lam = eigenvalue_poly(d)?;
    let mut eigenvalues = Vec::with_capacity(m.polys.len());
    for (n, pn) in m.polys.iter().enumerate() {
        let ln = eig_at(&lam, n as u64);
        let lhs = apply(pn, d)?;
        let rhs = lift_to_poly(&ln).mul(pn);
        let residual = lhs.sub(&rhs);
        eigenvalues.push(ln);
        if !residual.is_zero() {
            return Ok(EigenReport {
                pass: false,
                first_failure_n: Some(n),
                eigenvalues,
                witness: Some(format!(
                    "P_{n}·D − Λ_{n}(D)·P_{n} = {}",
                    fmt_poly_mat(&residual)
                )),
            });
        }
    }
    Ok(EigenReport {
        pass: true,
        first_failure_n: None,
        eigenvalues,
        witness: None,
    })
}

/// Bounded symmetry test: ⟨x^aI·D, x^bI⟩ = ⟨x^aI, x^bI·D⟩ for all
/// a, b ≤ d_max. By bilinearity (constant matrices factor out of both slots)
/// this covers all matrix-polynomial pairs of degree ≤ d_max.
pub fn is_symmetric(d: &MatDiffOp, w: &WeightSpec, d_max: usize) -> Result<bool> {
    if d.rows() != d.cols() || d.rows() != w.size() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}×{} against a size-{} weight",
            d.rows(),
            d.cols(),
            w.size()
        )));
    }
    let coeff_deg = d
        .coeffs()
        .iter()
        .map(mat_degree)
        .max()
        .unwrap_or(0);
    let moments = w.moments(2 * d_max + coeff_deg)?;
    let size = w.size();
    let powers: Vec<Mat<Poly>> = (0..=d_max)
        .map(|a| Mat::<Poly>::identity(size).map(|e| e.mul(&Poly::monomial(rat_int(1), a))))
        .collect();
    let applied: Vec<Mat<Poly>> = powers
        .iter()
        .map(|p| apply(p, d))
        .collect::<Result<_>>()?;
    for a in 0..=d_max {
        for bdx in a..=d_max {
            let lhs = inner_product_with_moments(&applied[a], &powers[bdx], &moments)?;
            let rhs = inner_product_with_moments(&powers[a], &applied[bdx], &moments)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Structural validation for user-supplied moment files: square, equal sizes,
/// each μ_k symmetric.
pub fn validate_moments(moments: &[Mat<Rat>]) -> Result<()> {
    let first = moments
        .first()
        .ok_or_else(|| Error::UnsupportedWeight("empty moment list".to_string()))?;
    if first.rows() != first.cols() {
        return Err(Error::DimensionMismatch(
            "moment matrices must be square".to_string(),
        ));
    }
    for (k, m) in moments.iter().enumerate() {
        if m.rows() != first.rows() || m.cols() != first.cols() {
            return Err(Error::DimensionMismatch(format!(
                "moment {k} has a different size than moment 0"
            )));
        }
        if *m != m.transpose() {
            return Err(Error::UnsupportedWeight(format!(
                "moment {k} is not symmetric"
            )));
        }
    }
    Ok(())
}

// ---- Unit-class plumbing ----

/// Split a list of unit-tagged matrices into commensurability classes: one
/// representative tag per class plus the rational coordinate matrices of
/// every input in that class's unit.
fn split_unit_classes(mats: &[Mat<UnitScalar>]) -> Result<Vec<(UnitTag, Vec<Mat<Rat>>)>> {
    let mut classes: Vec<(UnitTag, Vec<Mat<Rat>>)> = Vec::new();
    for (k, m) in mats.iter().enumerate() {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                for (tag, coeff) in m.at(i, j).terms() {
                    let idx = match classes.iter().position(|(rep, _)| rep.commensurable(tag)) {
                        Some(idx) => idx,
                        None => {
                            classes.push((
                                tag.clone(),
                                vec![Mat::zeros(m.rows(), m.cols()); mats.len()],
                            ));
                            classes.len() - 1
                        }
                    };
                    let (rep, coords) = &mut classes[idx];
                    let converted = coeff * unit_ratio(tag, rep)?;
                    let cur = coords[k].at(i, j).clone();
                    *coords[k].at_mut(i, j) = cur + converted;
                }
            }
        }
    }
    if classes.is_empty() {
        // all-zero moments: a single dimensionless class keeps solvers honest
        classes.push((
            UnitTag::One,
            vec![Mat::zeros(mats[0].rows(), mats[0].cols()); mats.len()],
        ));
    }
    Ok(classes)
}

/// Solve X·H = R for rational X against unit-tagged H, R by stacking the
/// transposed per-class systems.
fn solve_right_in_units(h: &Mat<UnitScalar>, r: &Mat<UnitScalar>) -> Result<Mat<Rat>> {
    let size = h.rows();
    let both = [h.transpose(), r.transpose()];
    let classes = split_unit_classes(&both)?;
    let rows = classes.len() * size;
    let mut a = Mat::<Rat>::zeros(rows, size);
    let mut b = Mat::<Rat>::zeros(rows, r.rows());
    for (t, (_, ms)) in classes.iter().enumerate() {
        copy_block(&mut a, t * size, 0, &ms[0]);
        copy_block(&mut b, t * size, 0, &ms[1]);
    }
    let x = if classes.len() == 1 {
        solve_exact(&a, &b)
    } else {
        solve_tall_exact(&a, &b)
    }
    .ok_or_else(|| Error::SingularMatrix("norm matrix is singular".to_string()))?;
    Ok(x.transpose())
}

// ---- Small helpers ----

fn copy_block(dst: &mut Mat<Rat>, r0: usize, c0: usize, src: &Mat<Rat>) {
    for i in 0..src.rows() {
        for j in 0..src.cols() {
            *dst.at_mut(r0 + i, c0 + j) = src.at(i, j).clone();
        }
    }
}

fn copy_block_transposed(dst: &mut Mat<Rat>, r0: usize, c0: usize, src: &Mat<Rat>) {
    for i in 0..src.rows() {
        for j in 0..src.cols() {
            *dst.at_mut(r0 + j, c0 + i) = src.at(i, j).clone();
        }
    }
}

/// Maximum entry degree (0 for the zero matrix).
pub fn mat_degree(m: &Mat<Poly>) -> usize {
    let mut d = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if let Some(e) = m.at(i, j).degree() {
                d = d.max(e);
            }
        }
    }
    d
}

pub(crate) fn lift_to_poly(m: &Mat<Rat>) -> Mat<Poly> {
    m.map(|r| Poly::constant(r.clone()))
}

pub(crate) fn lift_to_units(m: &Mat<Rat>) -> Mat<UnitScalar> {
    m.map(|r| UnitScalar::from_rat(r.clone()))
}

pub(crate) fn fmt_poly_mat(m: &Mat<Poly>) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).fmt_var("x")).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}
