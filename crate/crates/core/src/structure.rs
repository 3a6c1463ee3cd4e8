//! Structure of the operator algebras attached to weights: commutators and
//! centers at the eigenvalue level, generator inventories for direct sums,
//! reconstruction of operators from their eigenvalue matrices, centralizing
//! cofactors, and the full Darboux-link certificate.
//!
//! The eigenvalue map Λ is an isomorphism onto its image when restricted to
//! operators with the eigenfunction property, so center and commutativity
//! questions are decided entirely in Mat(ℚ[n]) — cheap, exact polynomial
//! commutators — and every operator-level claim produced here is then
//! re-verified against the orthogonal polynomials themselves. Λ is *not*
//! injective on the whole bounded class (∂·I has Λ ≡ 0), which is why
//! reconstruction only accepts targets divisible by ladder eigenvalues.

use crate::diffop::{
    adjoint_pair, apply, compose, eig_at, eigenvalue_poly, is_degree_preserving,
    DegreeCertificate, EigMat, MatDiffOp,
};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::mops::{
    check_eigenfunction, lift_to_poly, lift_to_units, monic_mops, EigenReport,
};
use crate::poly::Poly;
use crate::ring::{Field, Ring};
use crate::scalar::{rat_int, Rat};
use crate::weights::{darboux_equivalent, t_operator, ScalarFamily, WeightSpec};

// ---- Generator sets ----

/// Named operators of a common size.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub ops: Vec<MatDiffOp>,
    pub labels: Vec<String>,
}

impl GeneratorSet {
    pub fn new(ops: Vec<MatDiffOp>, labels: Vec<String>) -> Result<Self> {
        if ops.len() != labels.len() {
            return Err(Error::DimensionMismatch(
                "generator/label count mismatch".to_string(),
            ));
        }
        if let Some(first) = ops.first() {
            if ops
                .iter()
                .any(|o| o.rows() != first.rows() || o.cols() != first.cols())
            {
                return Err(Error::DimensionMismatch(
                    "generators have mixed sizes".to_string(),
                ));
            }
        }
        let mut seen = labels.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::DimensionMismatch(
                "generator labels are not unique".to_string(),
            ));
        }
        Ok(GeneratorSet { ops, labels })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

// ---- Eigenvalue-level algebra ----

/// AB − BA over Mat(ℚ[n]).
pub fn eig_commutator(a: &EigMat, b: &EigMat) -> Result<EigMat> {
    if a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "commutator of {}×{} with {}×{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

/// Does Λ(D) commute with Λ(G) for every generator G? Equivalent to central
/// membership for operators with the eigenfunction property.
pub fn center_check(d: &MatDiffOp, gens: &GeneratorSet) -> Result<bool> {
    let ld = eigenvalue_poly(d)?;
    for g in &gens.ops {
        let lg = eigenvalue_poly(g)?;
        if !eig_commutator(&ld, &lg)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Do all pairwise eigenvalue commutators of the set vanish?
pub fn commutativity_probe(gens: &GeneratorSet) -> Result<bool> {
    let eigs: Vec<EigMat> = gens
        .ops
        .iter()
        .map(eigenvalue_poly)
        .collect::<Result<_>>()?;
    for (i, a) in eigs.iter().enumerate() {
        for b in eigs.iter().skip(i + 1) {
            if !eig_commutator(a, b)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---- Direct sums of classical weights ----

/// The classical scalar components of a weight: a single classical weight
/// counts as a one-term sum; anything else is unsupported here.
pub fn classical_components(w: &WeightSpec) -> Result<Vec<ScalarFamily>> {
    match w {
        WeightSpec::Classical(f) => Ok(vec![f.clone()]),
        WeightSpec::DirectSum(parts) => {
            let mut out = Vec::with_capacity(parts.len());
            for p in parts {
                match p {
                    WeightSpec::Classical(f) => out.push(f.clone()),
                    _ => {
                        return Err(Error::UnsupportedWeight(
                            "direct-sum structure needs classical summands".to_string(),
                        ))
                    }
                }
            }
            if out.is_empty() {
                return Err(Error::UnsupportedWeight("empty direct sum".to_string()));
            }
            Ok(out)
        }
        _ => Err(Error::UnsupportedWeight(
            "direct-sum structure needs a direct sum of classical weights".to_string(),
        )),
    }
}

/// Generating set of the operator algebra of w_1 ⊕ … ⊕ w_N: the diagonal
/// second-order operators δ_jE_jj, the idempotents E_jj, and the ladders
/// T_{w_i,w_j}E_ij for i ≠ j (zero ladders omitted).
pub fn directsum_generators(w: &WeightSpec) -> Result<GeneratorSet> {
    w.validate()?;
    let comps = classical_components(w)?;
    let n = comps.len();
    let mut ops = Vec::new();
    let mut labels = Vec::new();
    for (j, f) in comps.iter().enumerate() {
        ops.push(f.delta().embed(n, j, j));
        labels.push(format!("delta[{j}]"));
    }
    for j in 0..n {
        ops.push(MatDiffOp::identity(1).embed(n, j, j));
        labels.push(format!("E[{j}]"));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = t_operator(&comps[i], &comps[j])?;
            if t.is_zero() {
                continue;
            }
            ops.push(t.embed(n, i, j));
            labels.push(format!("T[{i},{j}]"));
        }
    }
    GeneratorSet::new(ops, labels)
}

/// Center generators of a direct sum, grouped by Darboux class.
#[derive(Debug, Clone)]
pub struct DirectSumCenter {
    pub gens: GeneratorSet,
    /// Component indices of each Darboux class, in first-appearance order.
    pub classes: Vec<Vec<usize>>,
    /// Concatenation of the classes: the reordering that makes them
    /// contiguous.
    pub permutation: Vec<usize>,
}

/// The center of the algebra of w_1 ⊕ … ⊕ w_N: one diagonal operator
/// Δ_c = Σ_{j∈c} δ_jE_jj per Darboux class c, plus the class idempotents
/// when more than one class is present (a single class's idempotent is the
/// global identity and is omitted).
pub fn directsum_center(w: &WeightSpec) -> Result<DirectSumCenter> {
    w.validate()?;
    let comps = classical_components(w)?;
    let n = comps.len();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (j, f) in comps.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|c| darboux_equivalent(&comps[c[0]], f))
        {
            Some(c) => c.push(j),
            None => classes.push(vec![j]),
        }
    }
    let permutation: Vec<usize> = classes.iter().flatten().copied().collect();
    let mut ops = Vec::new();
    let mut labels = Vec::new();
    for (c, members) in classes.iter().enumerate() {
        let mut delta = MatDiffOp::zero(n, n);
        for &j in members {
            delta = delta.add(&comps[j].delta().embed(n, j, j));
        }
        ops.push(delta);
        labels.push(format!("Delta[{c}]"));
    }
    if classes.len() > 1 {
        for (c, members) in classes.iter().enumerate() {
            let mut p = MatDiffOp::zero(n, n);
            for &j in members {
                p = p.add(&MatDiffOp::identity(1).embed(n, j, j));
            }
            ops.push(p);
            labels.push(format!("P[{c}]"));
        }
    }
    Ok(DirectSumCenter {
        gens: GeneratorSet::new(ops, labels)?,
        classes,
        permutation,
    })
}

// ---- Reconstruction from eigenvalue data ----

/// Express q(n) as a polynomial in λ(n). Exact inversion for a linear λ;
/// greedy even-degree descent for a quadratic λ (the remainder's degree
/// drops each round, and an odd-degree remainder certifies failure).
pub fn rewrite_in_eigenvalue(q: &Poly, lambda: &Poly) -> Result<Poly> {
    match lambda.degree() {
        Some(1) => {
            let a = lambda.coeff(1);
            let c = lambda.coeff(0);
            let ainv = a.inv().expect("degree-1 leading coefficient");
            let inverse = Poly::from_coeffs(vec![-c * &ainv, ainv]);
            Ok(q.compose(&inverse))
        }
        Some(2) => {
            let lc = lambda.coeff(2);
            let mut rem = q.clone();
            let mut out: Vec<Rat> = Vec::new();
            while let Some(d) = rem.degree() {
                if d == 0 {
                    set_coeff(&mut out, 0, rem.coeff(0));
                    break;
                }
                if d % 2 == 1 {
                    return Err(Error::NotRepresentable(format!(
                        "odd-degree remainder {} cannot be a polynomial in {}",
                        rem.fmt_var("n"),
                        lambda.fmt_var("n")
                    )));
                }
                let e = d / 2;
                let mut lc_pow = rat_int(1);
                for _ in 0..e {
                    lc_pow *= &lc;
                }
                let coef = rem.coeff(d) / lc_pow;
                set_coeff(&mut out, e, coef.clone());
                rem = rem.sub(&lambda.pow(e).scale(&coef));
            }
            Ok(Poly::from_coeffs(out))
        }
        _ => Err(Error::NotRepresentable(format!(
            "cannot invert eigenvalue map of degree {:?}",
            lambda.degree()
        ))),
    }
}

fn set_coeff(v: &mut Vec<Rat>, k: usize, c: Rat) {
    if v.len() <= k {
        v.resize(k + 1, rat_int(0));
    }
    v[k] = c;
}

/// Σ_k q_k·δ^k as a 1×1 operator.
fn polynomial_in_delta(f: &ScalarFamily, q: &Poly) -> Result<MatDiffOp> {
    let delta = f.delta();
    let mut acc = MatDiffOp::zero(1, 1);
    for (k, c) in q.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&delta.pow(k).scale(c));
    }
    Ok(acc)
}

/// Rebuild the operator with a prescribed eigenvalue matrix over a direct sum
/// of classical weights: entry (i,j) must factor as Λ(T_{w_i,w_j})·q(Λ(δ_j)),
/// and the result is Σ T_{ij}·q(δ_j) embedded at (i,j).
pub fn operator_from_eigenvalue(target: &EigMat, w: &WeightSpec) -> Result<MatDiffOp> {
    let comps = classical_components(w)?;
    let n = comps.len();
    if target.rows() != n || target.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalue matrix is {}×{} over a {n}-component sum",
            target.rows(),
            target.cols()
        )));
    }
    let mut acc = MatDiffOp::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let entry = target.at(i, j);
            if entry.is_zero() {
                continue;
            }
            let lam_t = crate::weights::t_eigenvalue(&comps[i], &comps[j])?;
            if lam_t.is_zero() {
                return Err(Error::NotRepresentable(format!(
                    "entry ({i},{j}) is nonzero but the weights are not linked"
                )));
            }
            let q_raw = entry.div_exact(&lam_t).ok_or_else(|| {
                Error::NotRepresentable(format!(
                    "entry ({i},{j}) = {} is not divisible by the ladder eigenvalue {}",
                    entry.fmt_var("n"),
                    lam_t.fmt_var("n")
                ))
            })?;
            let q = rewrite_in_eigenvalue(&q_raw, &comps[j].delta_eigenvalue())?;
            let t = t_operator(&comps[i], &comps[j])?;
            let op = compose(&t, &polynomial_in_delta(&comps[j], &q)?)?;
            acc = acc.add(&op.embed(n, i, j));
        }
    }
    Ok(acc)
}

/// Cofactor 𝒜 with Λ(𝒜) = blockwise adjugate of Λ(D) over the Darboux
/// classes, so that Λ(𝒜D) = det(Λ(D_c))·I on each class — a central operator.
pub fn centralizing_cofactor(d: &MatDiffOp, w: &WeightSpec) -> Result<MatDiffOp> {
    let comps = classical_components(w)?;
    let n = comps.len();
    if d.rows() != n || d.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}×{} over a {n}-component sum",
            d.rows(),
            d.cols()
        )));
    }
    let lam = eigenvalue_poly(d)?;
    let classes = directsum_center(w)?.classes;
    // the eigenvalue matrix must not couple distinct classes
    for (a, ca) in classes.iter().enumerate() {
        for (b, cb) in classes.iter().enumerate() {
            if a == b {
                continue;
            }
            for &i in ca {
                for &j in cb {
                    if !lam.at(i, j).is_zero() {
                        return Err(Error::NotRepresentable(format!(
                            "eigenvalue matrix couples components {i} and {j} \
                             from different classes"
                        )));
                    }
                }
            }
        }
    }
    let mut target = Mat::<Poly>::zeros(n, n);
    for members in &classes {
        let block = Mat::from_fn(members.len(), members.len(), |a, b| {
            lam.at(members[a], members[b]).clone()
        });
        if block.det().is_zero() {
            return Err(Error::SingularEigenvalue(format!(
                "class {members:?} has identically singular eigenvalue block"
            )));
        }
        let adj = block.adjugate();
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate() {
                *target.at_mut(i, j) = adj.at(a, b).clone();
            }
        }
    }
    operator_from_eigenvalue(&target, w)
}

// ---- Darboux verification ----

/// Evidence that V links two weights: the polynomial adjoint N, the
/// eigenvalue A_n with its all-n invertibility certificate, eigenfunction
/// reports for VN and NV, the intertwining identity P_n·V = A_n·P̃_n, and the
/// adjoint norm identity Ã_n‖P_n‖² = ‖P̃_n‖²A_nᵀ (units included).
#[derive(Debug, Clone)]
pub struct DarbouxReport {
    pub adjoint: MatDiffOp,
    pub eig: EigMat,
    pub certificate: DegreeCertificate,
    pub invertible_for_all_n: bool,
    pub vn_report: EigenReport,
    pub nv_report: EigenReport,
    pub intertwining_pass: bool,
    pub intertwining_first_failure: Option<usize>,
    pub norm_identity_pass: bool,
    pub norm_identity_first_failure: Option<usize>,
    pub pass: bool,
}

/// Verify that V carries src-polynomials to tgt-polynomials as a Darboux
/// link: N is the adjoint W_tgt·V*·W_src⁻¹, and all five conditions are
/// checked exactly for n ≤ n_max.
pub fn darboux_verify(
    v: &MatDiffOp,
    src: &WeightSpec,
    tgt: &WeightSpec,
    n_max: usize,
) -> Result<DarbouxReport> {
    if v.rows() != src.size() || v.cols() != tgt.size() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}×{} between weights of sizes {} and {}",
            v.rows(),
            v.cols(),
            src.size(),
            tgt.size()
        )));
    }
    let src_form = src.weight_form()?;
    let tgt_form = tgt.weight_form()?;
    let adjoint = adjoint_pair(v, &src_form, &tgt_form)?;

    let (invertible, certificate) = is_degree_preserving(v)?;
    let a_poly = eigenvalue_poly(v)?;
    let at_poly = eigenvalue_poly(&adjoint)?;

    let src_mops = monic_mops(src, n_max)?;
    let tgt_mops = monic_mops(tgt, n_max)?;

    let vn = compose(v, &adjoint)?;
    let nv = compose(&adjoint, v)?;
    let vn_report = check_eigenfunction(&vn, &src_mops)?;
    let nv_report = check_eigenfunction(&nv, &tgt_mops)?;

    let mut intertwining_first_failure = None;
    for k in 0..=n_max {
        let a_k = eig_at(&a_poly, k as u64);
        let lhs = apply(&src_mops.polys[k], v)?;
        let rhs = lift_to_poly(&a_k).mul(&tgt_mops.polys[k]);
        if lhs != rhs {
            intertwining_first_failure = Some(k);
            break;
        }
    }

    let mut norm_identity_first_failure = None;
    for k in 0..=n_max {
        let a_k = eig_at(&a_poly, k as u64);
        let at_k = eig_at(&at_poly, k as u64);
        let lhs = lift_to_units(&at_k).mul(&src_mops.norms[k]);
        let rhs = tgt_mops.norms[k].mul(&lift_to_units(&a_k).transpose());
        if lhs != rhs {
            norm_identity_first_failure = Some(k);
            break;
        }
    }

    let pass = invertible
        && vn_report.pass
        && nv_report.pass
        && intertwining_first_failure.is_none()
        && norm_identity_first_failure.is_none();
    Ok(DarbouxReport {
        adjoint,
        eig: a_poly,
        certificate,
        invertible_for_all_n: invertible,
        vn_report,
        nv_report,
        intertwining_pass: intertwining_first_failure.is_none(),
        intertwining_first_failure,
        norm_identity_pass: norm_identity_first_failure.is_none(),
        norm_identity_first_failure,
        pass,
    })
}
