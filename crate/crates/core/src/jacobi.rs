//! The irreducible 2×2 Jacobi-type matrix weight and its complete operator
//! algebra: the first-order link V and its reverse N, the factorized diagonal
//! operator D = V∘N, the four corner generators D₁..D₄ with D₅ = D₁+D₄ = N∘V,
//! the centralizing cofactor A, and the central elements Z₁, Z₂.
//!
//! Everything is constructed twice — once by composition (N∘E_ij∘V and
//! friends) and once from expanded coefficient displays — and the two paths
//! must agree entrywise; a mismatch is an internal bug and panics. The
//! verification suites then re-derive every identity against the orthogonal
//! polynomials themselves and return structured reports.
//!
//! One normalization subtlety is handled explicitly: the exact adjoint of V
//! across the weight pair equals N times a constant diagonal matrix
//! K = −W₂/4, not N itself. The stored N is the algebraically convenient
//! normalization (V∘N lands exactly on the shifted scalar family operator);
//! the adjoint-sensitive identities use N·K and the reports state K.

use std::collections::BTreeMap;

use crate::diffop::{
    adjoint_pair, apply, compose, eig_at, eigenvalue_poly, is_degree_preserving, EigMat,
    MatDiffOp,
};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::mops::{
    check_eigenfunction, fmt_poly_mat, inner_product_with_moments, lift_to_poly, mat_degree,
    monic_mops,
};
use crate::poly::Poly;
use crate::report::Report;
use crate::ring::Ring;
use crate::scalar::{rat, rat_int, Rat};
use crate::structure::{
    center_check, centralizing_cofactor, commutativity_probe, darboux_verify, GeneratorSet,
};
use crate::weights::{matrix_jacobi_blocks, ScalarFamily, WeightSpec};

// ---- Parameters ----

/// Parameter triple (α, β, v) with |α−β| < |v| < α+β+2 and α, β > −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiParams {
    pub alpha: Rat,
    pub beta: Rat,
    pub v: Rat,
}

impl JacobiParams {
    pub fn new(alpha: Rat, beta: Rat, v: Rat) -> Result<Self> {
        WeightSpec::matrix_jacobi(alpha.clone(), beta.clone(), v.clone()).validate()?;
        Ok(JacobiParams { alpha, beta, v })
    }

    /// α + β.
    fn s(&self) -> Rat {
        &self.alpha + &self.beta
    }

    /// α − β.
    fn d(&self) -> Rat {
        &self.alpha - &self.beta
    }

    /// (α+β+4−v)(α+β+2+v)/4 — the constant split off the first diagonal entry.
    pub fn c1(&self) -> Rat {
        let s = self.s();
        (&s + rat_int(4) - &self.v) * (&s + rat_int(2) + &self.v) / rat_int(4)
    }

    /// (α+β+4+v)(α+β+2−v)/4 — the constant split off the second diagonal entry.
    pub fn c2(&self) -> Rat {
        let s = self.s();
        (&s + rat_int(4) + &self.v) * (&s + rat_int(2) - &self.v) / rat_int(4)
    }

    /// ((α+β+4)(α+β+2) − v²)/2 — the mixed coefficient of the cubic relation.
    pub fn cubic_k(&self) -> Rat {
        let s = self.s();
        ((&s + rat_int(4)) * (&s + rat_int(2)) - &self.v * &self.v) / rat_int(2)
    }

    /// The shifted scalar family attached to the diagonal side.
    pub fn shifted_family(&self) -> ScalarFamily {
        ScalarFamily::Jacobi {
            alpha: &self.alpha + rat_int(1),
            beta: &self.beta + rat_int(1),
        }
    }
}

// ---- Bundle ----

/// The weight pair and the named operator algebra of the 2×2 example.
#[derive(Debug, Clone)]
pub struct JacobiExampleBundle {
    pub params: JacobiParams,
    /// The irreducible matrix weight on (−1, 1).
    pub w: WeightSpec,
    /// The diagonal pair of shifted scalar weights it factors through.
    pub wtilde: WeightSpec,
    /// Named operators: V, N, D, A, D1..D5, Z1, Z2.
    pub ops: BTreeMap<String, MatDiffOp>,
}

impl JacobiExampleBundle {
    /// Fetch a stored operator by its fixed name.
    pub fn op(&self, name: &str) -> &MatDiffOp {
        self.ops
            .get(name)
            .unwrap_or_else(|| panic!("bundle has no operator named {name}"))
    }
}

// ---- Construction ----

fn e_op(i: usize, j: usize) -> MatDiffOp {
    MatDiffOp::identity(1).embed(2, i, j)
}

fn diag_const(a: Rat, b: Rat) -> Mat<Poly> {
    Mat::diag(vec![Poly::constant(a), Poly::constant(b)])
}

/// The first-order link V: maps the diagonal pair's polynomials into the
/// matrix-weight family.
fn displayed_v(p: &JacobiParams) -> MatDiffOp {
    let (s, cap_a) = (p.s(), p.d().neg() / &p.v);
    let f0 = diag_const(
        (&s + rat_int(2) + &p.v) / rat_int(2),
        (&s + rat_int(2) - &p.v) / rat_int(2),
    );
    let f1 = Mat::from_rows(vec![
        vec![
            Poly::from_coeffs(vec![cap_a.clone(), rat_int(1)]),
            Poly::constant(rat_int(1) + &cap_a),
        ],
        vec![
            Poly::constant(rat_int(1) - &cap_a),
            Poly::from_coeffs(vec![cap_a.neg(), rat_int(1)]),
        ],
    ]);
    MatDiffOp::new(2, 2, vec![f0, f1])
}

/// The reverse link N, normalized so that V∘N is exactly the shifted scalar
/// family operator plus constants.
fn displayed_n(p: &JacobiParams) -> MatDiffOp {
    let (s, cap_a) = (p.s(), p.d().neg() / &p.v);
    let f0 = diag_const(
        (&s + rat_int(4) - &p.v).neg() / rat_int(2),
        (&s + rat_int(4) + &p.v).neg() / rat_int(2),
    );
    let f1 = Mat::from_rows(vec![
        vec![
            Poly::from_coeffs(vec![cap_a.clone(), rat_int(-1)]),
            Poly::constant(rat_int(1) + &cap_a),
        ],
        vec![
            Poly::constant(rat_int(1) - &cap_a),
            Poly::from_coeffs(vec![cap_a.neg(), rat_int(-1)]),
        ],
    ]);
    MatDiffOp::new(2, 2, vec![f0, f1])
}

/// Expanded coefficient displays of the five second-order generators.
fn displayed_generators(p: &JacobiParams) -> [MatDiffOp; 5] {
    let (s, d, v) = (p.s(), p.d(), p.v.clone());
    let v2 = &v * &v;
    let two_v = rat_int(2) * &v;
    let dd = &d * &d;
    let zero = Poly::zero();
    let pc = Poly::constant;
    let lin = |c0: Rat, c1: Rat| Poly::from_coeffs(vec![c0, c1]);
    let quad = |c0: Rat, c1: Rat, c2: Rat| Poly::from_coeffs(vec![c0, c1, c2]);
    // recurring constants
    let dp = &v + &d; // v + α − β
    let dm = &v - &d; // v − α + β
    let s4 = &s + rat_int(4);
    let one_minus_x2 = quad(rat_int(1), rat_int(0), rat_int(-1));

    let d1 = MatDiffOp::new(
        2,
        2,
        vec![
            Mat::from_rows(vec![
                vec![pc(p.c1().neg()), zero.clone()],
                vec![zero.clone(), zero.clone()],
            ]),
            Mat::from_rows(vec![
                vec![
                    lin((&v - rat_int(2)).neg() * &d / &v, s4.clone().neg()),
                    pc(dm.clone().neg() * (&s - &v + rat_int(6)) / &two_v),
                ],
                vec![pc(&dp * (&v + &s + rat_int(2)) / &two_v), zero.clone()],
            ]),
            Mat::from_rows(vec![
                vec![
                    quad(&dd / &v2, rat_int(0), rat_int(-1)),
                    lin(&d * (&d - &v) / &v2, (&d - &v) / &v),
                ],
                vec![
                    lin((&d * &dp).neg() / &v2, &dp / &v),
                    pc(rat_int(1) - &dd / &v2),
                ],
            ]),
        ],
    );

    let d2 = MatDiffOp::new(
        2,
        2,
        vec![
            Mat::from_rows(vec![
                vec![
                    zero.clone(),
                    pc((&s4 - &v).neg() * (&s + rat_int(2) - &v) / rat_int(4)),
                ],
                vec![zero.clone(), zero.clone()],
            ]),
            Mat::from_rows(vec![
                vec![
                    pc(dp.clone().neg() * (&s - &v + rat_int(6)) / &two_v),
                    lin((&s4 - &v).neg() * &d / &v, (&s4 - &v).neg()),
                ],
                vec![
                    zero.clone(),
                    pc(&dp * (&s + rat_int(2) - &v) / &two_v),
                ],
            ]),
            Mat::from_rows(vec![
                vec![
                    lin((&d * &dp).neg() / &v2, dp.clone().neg() / &v),
                    quad(dd.clone().neg() / &v2, rat_int(-2) * &d / &v, rat_int(-1)),
                ],
                vec![
                    pc(&dp * &dp / &v2),
                    lin(&d * &dp / &v2, &dp / &v),
                ],
            ]),
        ],
    );

    let d3 = MatDiffOp::new(
        2,
        2,
        vec![
            Mat::from_rows(vec![
                vec![zero.clone(), zero.clone()],
                vec![
                    pc((&s + &v + rat_int(4)).neg() * (&s + &v + rat_int(2)) / rat_int(4)),
                    zero.clone(),
                ],
            ]),
            Mat::from_rows(vec![
                vec![
                    pc((&v + &s + rat_int(2)).neg() * (&d - &v) / &two_v),
                    zero.clone(),
                ],
                vec![
                    lin((&s + &v + rat_int(4)) * &d / &v, (&s + &v + rat_int(4)).neg()),
                    pc((&s + &v + rat_int(6)) * (&d - &v) / &two_v),
                ],
            ]),
            Mat::from_rows(vec![
                vec![
                    lin(&d * (&d - &v) / &v2, (&d - &v).neg() / &v),
                    pc((&d - &v) * (&d - &v) / &v2),
                ],
                vec![
                    quad(dd.clone().neg() / &v2, rat_int(2) * &d / &v, rat_int(-1)),
                    lin(&d * &dm / &v2, dm.clone().neg() / &v),
                ],
            ]),
        ],
    );

    let d4 = MatDiffOp::new(
        2,
        2,
        vec![
            Mat::from_rows(vec![
                vec![zero.clone(), zero.clone()],
                vec![zero.clone(), pc(p.c2().neg())],
            ]),
            Mat::from_rows(vec![
                vec![
                    zero.clone(),
                    pc(&dm * (&s + rat_int(2) - &v) / &two_v),
                ],
                vec![
                    pc(dp.clone().neg() * (&s + &v + rat_int(6)) / &two_v),
                    lin((&v + rat_int(2)).neg() * &d / &v, s4.clone().neg()),
                ],
            ]),
            Mat::from_rows(vec![
                vec![
                    pc(rat_int(1) - &dd / &v2),
                    lin(&d * &dm / &v2, &dm / &v),
                ],
                vec![
                    lin(&d * &dp / &v2, dp.clone().neg() / &v),
                    quad(&dd / &v2, rat_int(0), rat_int(-1)),
                ],
            ]),
        ],
    );

    let d5 = MatDiffOp::new(
        2,
        2,
        vec![
            diag_const(p.c1().neg(), p.c2().neg()),
            Mat::from_rows(vec![
                vec![
                    lin((&v - rat_int(2)).neg() * &d / &v, s4.clone().neg()),
                    pc(rat_int(2) * (&d - &v) / &v),
                ],
                vec![
                    pc(rat_int(-2) * &dp / &v),
                    lin((&v + rat_int(2)).neg() * &d / &v, s4.neg()),
                ],
            ]),
            Mat::diag(vec![one_minus_x2.clone(), one_minus_x2]),
        ],
    );

    [d1, d2, d3, d4, d5]
}

/// The four displayed eigenvalue matrices of D₁..D₄ as polynomials in n.
pub fn displayed_eigenvalues(p: &JacobiParams) -> [EigMat; 4] {
    let s = p.s();
    // 2n + α + β + u
    let f = |u: Rat| Poly::from_coeffs(vec![&s + u, rat_int(2)]);
    let quarter = rat(-1, 4);
    let l = |u1: Rat, u2: Rat| f(u1).mul(&f(u2)).scale(&quarter);
    let zero = Poly::zero();
    let four_m = rat_int(4) - &p.v;
    let four_p = rat_int(4) + &p.v;
    let two_m = rat_int(2) - &p.v;
    let two_p = rat_int(2) + &p.v;
    let corner = |i: usize, j: usize, entry: Poly| {
        Mat::from_fn(2, 2, |r, c| {
            if (r, c) == (i, j) {
                entry.clone()
            } else {
                zero.clone()
            }
        })
    };
    [
        corner(0, 0, l(four_m.clone(), two_p.clone())),
        corner(0, 1, l(four_m, two_m.clone())),
        corner(1, 0, l(four_p.clone(), two_p)),
        corner(1, 1, l(four_p, two_m)),
    ]
}

/// The scalar quartic q(n) with Λ(Z₁) = q(n)·I: the determinant of the
/// diagonal eigenvalue of the factorized operator.
pub fn central_quartic(p: &JacobiParams) -> Poly {
    let eigs = displayed_eigenvalues(p);
    eigs[1].at(0, 1).mul(eigs[2].at(1, 0))
}

/// K = −W₂/4: the constant diagonal factor between the stored N and the
/// exact adjoint of V.
pub fn adjoint_constant(p: &JacobiParams) -> Mat<Rat> {
    let (w2, _, _) = matrix_jacobi_blocks(&p.alpha, &p.beta, &p.v);
    w2.scale(&rat(-1, 4))
}

/// Build the full bundle at (α, β, v), cross-checking every composed
/// operator against its expanded coefficient display.
pub fn build_bundle(alpha: Rat, beta: Rat, v: Rat) -> Result<JacobiExampleBundle> {
    let params = JacobiParams::new(alpha, beta, v)?;
    let w = WeightSpec::matrix_jacobi(
        params.alpha.clone(),
        params.beta.clone(),
        params.v.clone(),
    );
    let shifted = WeightSpec::Classical(params.shifted_family());
    let wtilde = WeightSpec::direct_sum(vec![shifted.clone(), shifted]);

    let op_v = displayed_v(&params);
    let op_n = displayed_n(&params);

    // D: the shifted scalar family operator on both components, minus the
    // split constants; must agree with the composition V∘N.
    let dt = params.shifted_family().delta();
    let dt2 = dt.embed(2, 0, 0).add(&dt.embed(2, 1, 1));
    let op_d = dt2.add(&MatDiffOp::constant(diag_const(
        params.c1().neg(),
        params.c2().neg(),
    )));
    assert_eq!(
        compose(&op_v, &op_n)?,
        op_d,
        "internal: V∘N differs from its displayed diagonal form"
    );

    // corner generators by composition and by display
    let displays = displayed_generators(&params);
    let mut gens = Vec::with_capacity(4);
    for (k, (i, j)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        let composed = compose(&compose(&op_n, &e_op(i, j))?, &op_v)?;
        assert_eq!(
            composed,
            displays[k],
            "internal: corner generator {} differs from its display",
            k + 1
        );
        gens.push(composed);
    }
    let d5 = compose(&op_n, &op_v)?;
    assert_eq!(
        d5, displays[4],
        "internal: N∘V differs from its displayed form"
    );
    assert_eq!(
        d5,
        gens[0].add(&gens[3]),
        "internal: N∘V differs from the sum of the diagonal corner generators"
    );

    // centralizing cofactor display: the same scalar family operator with the
    // constants swapped
    let dt = params.shifted_family().delta();
    let op_a = dt
        .embed(2, 0, 0)
        .add(&dt.embed(2, 1, 1))
        .add(&MatDiffOp::constant(diag_const(
            params.c2().neg(),
            params.c1().neg(),
        )));

    // central elements
    let vv = params.v.clone();
    let sq = |x: &MatDiffOp| compose(x, x).expect("square");
    let z1 = sq(&gens[0])
        .add(&sq(&gens[3]))
        .add(&gens[0].sub(&gens[3]).scale(&vv));
    let cube = |x: &MatDiffOp| compose(x, &sq(x)).expect("cube");
    let z2 = cube(&gens[0])
        .add(&cube(&gens[3]))
        .add(&sq(&gens[0]).add(&gens[0].scale(&vv)).scale(&params.c1()))
        .add(&sq(&gens[3]).sub(&gens[3].scale(&vv)).scale(&params.c2()))
        .add(&sq(&gens[0]).sub(&sq(&gens[3])).scale(&vv));

    let mut ops = BTreeMap::new();
    ops.insert("V".to_string(), op_v);
    ops.insert("N".to_string(), op_n);
    ops.insert("D".to_string(), op_d);
    ops.insert("A".to_string(), op_a);
    for (k, g) in gens.into_iter().enumerate() {
        ops.insert(format!("D{}", k + 1), g);
    }
    ops.insert("D5".to_string(), d5);
    ops.insert("Z1".to_string(), z1);
    ops.insert("Z2".to_string(), z2);

    Ok(JacobiExampleBundle {
        params,
        w,
        wtilde,
        ops,
    })
}

fn base_report(b: &JacobiExampleBundle, title: &str, n_max: usize) -> Report {
    let mut r = Report::new(title);
    r.set_config("alpha", b.params.alpha.to_string());
    r.set_config("beta", b.params.beta.to_string());
    r.set_config("v", b.params.v.to_string());
    r.set_config("n_max", n_max.to_string());
    r
}

// ---- Verification: factorization ----

/// Check the product structure of the link pair: V∘N lands on the diagonal
/// family operator, the exact adjoint recovers N up to the constant K, the
/// two-weight link certificate passes, and N∘V is the sum of the diagonal
/// corner generators.
pub fn verify_factorization(b: &JacobiExampleBundle, n_max: usize) -> Result<Report> {
    let mut r = base_report(b, "factorization of the matrix-weight link", n_max);
    let (v_op, n_op, d_op) = (b.op("V"), b.op("N"), b.op("D"));
    let p = &b.params;

    let vn = compose(v_op, n_op)?;
    r.check(
        "product_is_diagonal_family_operator",
        &vn == d_op,
        format!(
            "V∘N equals the shifted scalar family operator plus diag({}, {})",
            p.c1().neg(),
            p.c2().neg()
        ),
    );
    r.check(
        "constant_term_entry_11",
        d_op.coeff(0).at(0, 0) == &Poly::constant(p.c1().neg()),
        format!("constant coefficient entry (1,1) is {}", p.c1().neg()),
    );

    let lam_d = eigenvalue_poly(d_op)?;
    r.check(
        "eigenvalue_at_zero_is_constant_term",
        lift_to_poly(&eig_at(&lam_d, 0)) == d_op.coeff(0),
        "the degree-zero eigenvalue matrix equals the operator's constant coefficient",
    );

    let k = adjoint_constant(p);
    let adjoint = adjoint_pair(v_op, &b.wtilde.weight_form()?, &b.w.weight_form()?)?;
    r.check(
        "adjoint_recovers_reverse_link",
        adjoint == n_op.right_mul(&k),
        format!(
            "the exact adjoint of V equals N scaled on the right by K = diag({}, {})",
            k.at(0, 0),
            k.at(1, 1)
        ),
    );

    let link = darboux_verify(v_op, &b.wtilde, &b.w, n_max.max(8))?;
    let witness = format!(
        "invertible: {:?}; eigenfunction failures: {:?}/{:?}; intertwining failure: {:?}; norm failure: {:?}",
        link.invertible_for_all_n,
        link.vn_report.first_failure_n,
        link.nv_report.first_failure_n,
        link.intertwining_first_failure,
        link.norm_identity_first_failure
    );
    r.check_witnessed(
        "two_weight_link_certificate",
        link.pass,
        format!("eigenvalue of the link is {}", fmt_poly_mat(&link.eig)),
        Some(witness),
    );

    let nv = compose(n_op, v_op)?;
    r.check(
        "reverse_product_is_corner_sum",
        &nv == b.op("D5") && b.op("D1").add(b.op("D4")) == nv,
        "N∘V equals D5 = D1 + D4",
    );

    let diag_mops = monic_mops(&b.wtilde, n_max)?;
    let eig = check_eigenfunction(d_op, &diag_mops)?;
    r.check_witnessed(
        "diagonal_family_eigenfunction",
        eig.pass,
        "the diagonal pair's monic polynomials are eigenfunctions of V∘N",
        eig.witness,
    );
    Ok(r)
}

// ---- Verification: generators and relations ----

/// Check the displayed eigenvalue matrices, the coefficient displays, the
/// twelve product relations among the corner generators, the eigenfunction
/// property of each against the matrix-weight polynomials, the even-order
/// parity of the whole algebra, and two module-decomposition round trips.
pub fn verify_generators_and_relations(
    b: &JacobiExampleBundle,
    n_max: usize,
) -> Result<Report> {
    let mut r = base_report(b, "generators and relations of the operator algebra", n_max);
    let p = &b.params;
    let [d1, d2, d3, d4, d5] = ["D1", "D2", "D3", "D4", "D5"].map(|k| b.op(k));

    let eigs = displayed_eigenvalues(p);
    for (k, display) in eigs.iter().enumerate() {
        let lam = eigenvalue_poly(b.op(&format!("D{}", k + 1)))?;
        r.check(
            format!("eigenvalue_display[D{}]", k + 1),
            &lam == display,
            format!("Λ_n(D{}) = {}", k + 1, fmt_poly_mat(display)),
        );
    }
    let (l1, l2, l3) = (
        eigenvalue_poly(d1)?,
        eigenvalue_poly(d2)?,
        eigenvalue_poly(d3)?,
    );
    r.check(
        "eigenvalue_level_precheck",
        l2.mul(&l3) == l1.mul(&l1).add(&l1.scale(&Poly::constant(p.v.clone()))),
        "Λ(D2)Λ(D3) = Λ(D1)² + vΛ(D1) in the spectral variable",
    );

    let displays = displayed_generators(p);
    for (k, display) in displays.iter().enumerate() {
        let name = if k == 4 {
            "D5".to_string()
        } else {
            format!("D{}", k + 1)
        };
        r.check(
            format!("coefficient_display[{name}]"),
            b.op(&name) == display,
            "the composed operator matches its expanded coefficient display",
        );
    }

    let minus_v = p.v.clone().neg();
    let relations: Vec<(String, MatDiffOp, MatDiffOp)> = vec![
        (
            "D2*D3 = D1^2 + v*D1".into(),
            compose(d2, d3)?,
            compose(d1, d1)?.add(&d1.scale(&p.v)),
        ),
        (
            "D3*D2 = D4^2 - v*D4".into(),
            compose(d3, d2)?,
            compose(d4, d4)?.sub(&d4.scale(&p.v)),
        ),
        (
            "D1*D2 - D2*D4 = -v*D2".into(),
            compose(d1, d2)?.sub(&compose(d2, d4)?),
            d2.scale(&minus_v),
        ),
        (
            "D4*D3 - D3*D1 = v*D3".into(),
            compose(d4, d3)?.sub(&compose(d3, d1)?),
            d3.scale(&p.v),
        ),
    ];
    for (name, lhs, rhs) in &relations {
        r.check(
            format!("relation[{name}]"),
            lhs == rhs,
            "exact identity of composed operators",
        );
    }
    let zero_products: [(&str, &MatDiffOp, &MatDiffOp); 8] = [
        ("D1*D4", d1, d4),
        ("D4*D1", d4, d1),
        ("D1*D3", d1, d3),
        ("D4*D2", d4, d2),
        ("D2*D1", d2, d1),
        ("D2*D2", d2, d2),
        ("D3*D4", d3, d4),
        ("D3*D3", d3, d3),
    ];
    for (name, x, y) in zero_products {
        r.check(
            format!("relation[{name} = 0]"),
            compose(x, y)?.is_zero(),
            "the composition vanishes identically",
        );
    }

    let mops = monic_mops(&b.w, n_max)?;
    for name in ["D1", "D2", "D3", "D4", "D5"] {
        let eig = check_eigenfunction(b.op(name), &mops)?;
        r.check_witnessed(
            format!("eigenfunction[{name}]"),
            eig.pass,
            "the matrix-weight monic polynomials are eigenfunctions",
            eig.witness,
        );
    }

    r.check(
        "even_orders",
        ["D", "A", "D1", "D2", "D3", "D4", "D5", "Z1", "Z2"]
            .iter()
            .all(|k| b.op(k).order() % 2 == 0),
        "every operator in the algebra has even order",
    );

    for (name, sample) in [
        ("D1", b.op("D1").clone()),
        ("D5*D5*D2", compose(d5, &compose(d5, d2)?)?),
    ] {
        let ok = match decompose_in_module_basis(b, &sample) {
            Ok(dec) => dec.reconstruct(b)? == sample,
            Err(_) => false,
        };
        r.check(
            format!("module_decomposition[{name}]"),
            ok,
            "decomposing over the central-coefficient module basis and re-assembling is the identity",
        );
    }
    Ok(r)
}

// ---- Verification: center ----

/// Check centrality of Z₁, Z₂, their leading coefficients, the cubic
/// relation, scalar eigenvalues, the centralizing cofactor, and the
/// transport of the center through the link pair.
pub fn verify_center(b: &JacobiExampleBundle) -> Result<Report> {
    let mut r = base_report(b, "center of the operator algebra", 0);
    let p = &b.params;
    let [d1, d2, d3, d4] = ["D1", "D2", "D3", "D4"].map(|k| b.op(k).clone());
    let (z1, z2) = (b.op("Z1"), b.op("Z2"));
    let gens = GeneratorSet::new(
        vec![d1, d2, d3, d4],
        ["D1", "D2", "D3", "D4"].map(String::from).to_vec(),
    )?;

    for (name, z) in [("Z1", z1), ("Z2", z2)] {
        r.check(
            format!("center_membership[{name}]"),
            center_check(z, &gens)?,
            "eigenvalue commutators with every generator vanish",
        );
    }

    let one_minus_x2 = Poly::from_coeffs(vec![rat_int(1), rat_int(0), rat_int(-1)]);
    let lead = |pow: usize| {
        let e = one_minus_x2.pow(pow);
        Mat::diag(vec![e.clone(), e])
    };
    r.check(
        "leading_coefficient[Z1]",
        z1.order() == 4 && z1.coeff(4) == lead(2),
        "Z1 has order 4 with leading coefficient (1−x²)²·I",
    );
    r.check(
        "leading_coefficient[Z2]",
        z2.order() == 6 && z2.coeff(6) == lead(3),
        "Z2 has order 6 with leading coefficient (1−x²)³·I",
    );

    let c1c2 = p.c1() * p.c2();
    let cubic = compose(z1, &compose(z1, z1)?)?
        .sub(&compose(z2, z2)?)
        .add(&compose(z1, z2)?.scale(&p.cubic_k()))
        .sub(&compose(z1, z1)?.scale(&c1c2));
    r.check(
        "cubic_relation",
        cubic.is_zero(),
        format!(
            "Z1³ − Z2² + k·Z1Z2 − c·Z1² = 0 with k = {} and c = {}",
            p.cubic_k(),
            c1c2
        ),
    );

    let q = central_quartic(p);
    let scalar = |e: &Poly| Mat::diag(vec![e.clone(), e.clone()]);
    r.check(
        "scalar_eigenvalue[Z1]",
        eigenvalue_poly(z1)? == scalar(&q),
        format!("Λ_n(Z1) = q(n)·I with q = {}", q.fmt_var("n")),
    );
    let mu = p.shifted_family().delta_eigenvalue();
    r.check(
        "scalar_eigenvalue[Z2]",
        eigenvalue_poly(z2)? == scalar(&mu.mul(&q)),
        "Λ_n(Z2) = μ(n)q(n)·I with μ the diagonal family's eigenvalue",
    );

    let cofactor = centralizing_cofactor(b.op("D"), &b.wtilde)?;
    r.check(
        "centralizing_cofactor",
        &cofactor == b.op("A"),
        "the blockwise-adjugate cofactor of V∘N is the displayed operator A",
    );
    let ad = compose(b.op("A"), b.op("D"))?;
    r.check(
        "cofactor_eigenvalue",
        eigenvalue_poly(&ad)? == scalar(&q),
        "Λ_n(A∘(V∘N)) = q(n)·I",
    );

    let (v_op, n_op, a_op) = (b.op("V"), b.op("N"), b.op("A"));
    r.check(
        "center_transport[Z1]",
        compose(&compose(n_op, a_op)?, v_op)? == *z1,
        "Z1 = N∘A∘V",
    );
    let dt = p.shifted_family().delta();
    let dt2 = dt.embed(2, 0, 0).add(&dt.embed(2, 1, 1));
    let da = compose(&dt2, a_op)?;
    r.check(
        "center_transport[Z2]",
        compose(&compose(n_op, &da)?, v_op)? == *z2,
        "Z2 = N∘(δ·A)∘V with δ the diagonal family operator",
    );

    r.check(
        "commutativity_probe",
        !commutativity_probe(&gens)?
            && commutativity_probe(&GeneratorSet::new(
                vec![z1.clone(), z2.clone()],
                vec!["Z1".into(), "Z2".into()],
            )?)?,
        "the corner generators do not commute; the center elements do",
    );
    Ok(r)
}

// ---- Verification: orthogonal family ----

/// Apply V to the diagonal pair's monic polynomials and verify the image is
/// a degree-preserving orthogonal family for the matrix weight.
pub fn orthogonal_family(
    b: &JacobiExampleBundle,
    n_max: usize,
) -> Result<(Vec<Mat<Poly>>, Report)> {
    let mut r = base_report(b, "orthogonal family produced by the link", n_max);
    let v_op = b.op("V");
    let diag_mops = monic_mops(&b.wtilde, n_max)?;
    let q: Vec<Mat<Poly>> = diag_mops
        .polys
        .iter()
        .map(|j| apply(j, v_op))
        .collect::<Result<_>>()?;

    let lam_v = eigenvalue_poly(v_op)?;
    r.check(
        "constant_member",
        q[0] == lift_to_poly(&eig_at(&lam_v, 0)),
        format!(
            "Q0 = diag({}, {})",
            q[0].at(0, 0).fmt_var("x"),
            q[0].at(1, 1).fmt_var("x")
        ),
    );

    let mut degree_ok = true;
    let mut leading_ok = true;
    let mut first_bad = None;
    for (n, qn) in q.iter().enumerate() {
        let lead = Mat::from_fn(2, 2, |i, j| qn.at(i, j).coeff(n));
        if mat_degree(qn) != n {
            degree_ok = false;
        }
        if lead != eig_at(&lam_v, n as u64) {
            leading_ok = false;
        }
        if !(degree_ok && leading_ok) && first_bad.is_none() {
            first_bad = Some(n);
        }
    }
    r.check_witnessed(
        "degrees_and_leading_coefficients",
        degree_ok && leading_ok,
        "deg Q_n = n and the leading coefficient of Q_n is Λ_n(V)",
        first_bad.map(|n| format!("first failure at n = {n}")),
    );

    let (invertible, cert) = is_degree_preserving(v_op)?;
    r.check(
        "link_is_degree_preserving",
        invertible,
        format!(
            "det Λ_n(V) = {} has no nonnegative integer roots",
            cert.det.fmt_var("n")
        ),
    );

    let moments = b.w.moments(2 * n_max)?;
    let mut orth_ok = true;
    let mut witness = None;
    'outer: for n in 0..=n_max {
        for m in 0..n {
            let ip = inner_product_with_moments(&q[n], &q[m], &moments)?;
            if !ip.is_zero() {
                orth_ok = false;
                witness = Some(format!("⟨Q_{n}, Q_{m}⟩ ≠ 0"));
                break 'outer;
            }
        }
    }
    r.check_witnessed(
        "pairwise_orthogonality",
        orth_ok,
        format!("⟨Q_n, Q_m⟩ = 0 for all 0 ≤ m < n ≤ {n_max} by exact moment expansion"),
        witness,
    );
    Ok((q, r))
}

// ---- Module decomposition over the center ----

/// One central word c·Z1^s·Z2^t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZWord {
    pub coeff: Rat,
    pub s: usize,
    pub t: usize,
}

/// A basis element together with its central coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleTerm {
    /// One of "I", "D1".."D4", "D5*D1".."D5*D4".
    pub basis: String,
    pub words: Vec<ZWord>,
}

/// A decomposition B = Σ (Σ c·Z1^s·Z2^t)·basis over the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDecomposition {
    pub terms: Vec<ModuleTerm>,
}

impl ModuleDecomposition {
    /// Re-assemble the operator the decomposition describes.
    pub fn reconstruct(&self, b: &JacobiExampleBundle) -> Result<MatDiffOp> {
        let mut acc = MatDiffOp::zero(2, 2);
        for term in &self.terms {
            let base = match term.basis.as_str() {
                "I" => MatDiffOp::identity(2),
                "D1" | "D2" | "D3" | "D4" => b.op(&term.basis).clone(),
                other => {
                    let gen = other.strip_prefix("D5*").ok_or_else(|| {
                        Error::NotDecomposable(format!("unknown basis element {other}"))
                    })?;
                    compose(b.op("D5"), b.op(gen))?
                }
            };
            for w in &term.words {
                let zw = compose(&b.op("Z1").pow(w.s), &b.op("Z2").pow(w.t))?;
                acc = acc.add(&compose(&zw, &base)?.scale(&w.coeff));
            }
        }
        Ok(acc)
    }

    /// The words attached to one basis element, if any.
    pub fn coefficient(&self, basis: &str) -> Option<&[ZWord]> {
        self.terms
            .iter()
            .find(|t| t.basis == basis)
            .map(|t| t.words.as_slice())
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for term in &self.terms {
            for w in &term.words {
                let mut piece = w.coeff.to_string();
                if w.s > 0 {
                    piece.push_str(&format!("·Z1^{}", w.s));
                }
                if w.t > 0 {
                    piece.push_str(&format!("·Z2^{}", w.t));
                }
                piece.push_str(&format!("·{}", term.basis));
                parts.push(piece);
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// 2s + 3t = m with t as large as possible.
fn split_exponents(m: usize) -> (usize, usize) {
    let mut t = m / 3;
    while (m - 3 * t) % 2 != 0 {
        t -= 1;
    }
    ((m - 3 * t) / 2, t)
}

/// Express an operator over the nine-element module basis
/// {I, D_j, D5∘D_j} with coefficients that are polynomial words in Z1, Z2,
/// by greedy leading-coefficient peeling: the order-2m top coefficient must
/// lie in (1−x²)^{m−1}·N₁·Mat₂(ℚ)·V₁, its constant matrix C is split off via
/// central words of matching order, and the remainder recurses.
pub fn decompose_in_module_basis(
    b: &JacobiExampleBundle,
    op: &MatDiffOp,
) -> Result<ModuleDecomposition> {
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "module decomposition needs a 2×2 operator, got {}×{}",
            op.rows(),
            op.cols()
        )));
    }
    let adj_n1 = b.op("N").coeff(1).adjugate();
    let adj_v1 = b.op("V").coeff(1).adjugate();
    let one_minus_x2 = Poly::from_coeffs(vec![rat_int(1), rat_int(0), rat_int(-1)]);
    let labels = ["I", "D1", "D2", "D3", "D4", "D5*D1", "D5*D2", "D5*D3", "D5*D4"];
    let mut words: Vec<Vec<ZWord>> = vec![Vec::new(); labels.len()];
    let gen_name = |k: usize| ["D1", "D2", "D3", "D4"][k];
    let zword = |s: usize, t: usize| -> Result<MatDiffOp> {
        compose(&b.op("Z1").pow(s), &b.op("Z2").pow(t))
    };

    let mut rem = op.clone();
    while !rem.is_zero() {
        let ord = rem.order();
        if ord == 0 {
            let f0 = rem.coeff(0);
            let r = f0.at(0, 0).clone();
            let expect = Mat::from_fn(2, 2, |i, j| if i == j { r.clone() } else { Poly::zero() });
            if !r.is_constant() || f0 != expect {
                return Err(Error::NotDecomposable(
                    "degree-zero remainder is not a constant multiple of the identity"
                        .to_string(),
                ));
            }
            words[0].push(ZWord {
                coeff: r.coeff(0),
                s: 0,
                t: 0,
            });
            break;
        }
        if ord % 2 == 1 {
            return Err(Error::NotDecomposable(format!(
                "remainder has odd order {ord}"
            )));
        }
        let m = ord / 2;
        let num = adj_n1.mul(&rem.coeff(ord)).mul(&adj_v1);
        let den = one_minus_x2.pow(m + 1);
        let mut cmat = Mat::<Rat>::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                let q = num.at(i, j).div_exact(&den).ok_or_else(|| {
                    Error::NotDecomposable(format!(
                        "top coefficient entry ({i},{j}) is not divisible by (1−x²)^{}",
                        m + 1
                    ))
                })?;
                if !q.is_constant() {
                    return Err(Error::NotDecomposable(format!(
                        "top coefficient entry ({i},{j}) does not reduce to a constant"
                    )));
                }
                *cmat.at_mut(i, j) = q.coeff(0);
            }
        }

        let scalar_top = cmat.at(0, 1).is_zero()
            && cmat.at(1, 0).is_zero()
            && cmat.at(0, 0) == cmat.at(1, 1);
        let subtract = if m >= 2 && scalar_top {
            let (s, t) = split_exponents(m);
            let g = cmat.at(0, 0).clone();
            words[0].push(ZWord {
                coeff: g.clone(),
                s,
                t,
            });
            zword(s, t)?.scale(&g)
        } else {
            let mut acc = MatDiffOp::zero(2, 2);
            for (k, (i, j)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                let c = cmat.at(i, j);
                if Ring::is_zero(c) {
                    continue;
                }
                if m == 2 {
                    // 2s+3t = 1 is infeasible: this is where the D5∘D_j
                    // basis elements are needed
                    let base = compose(b.op("D5"), b.op(gen_name(k)))?;
                    words[5 + k].push(ZWord {
                        coeff: c.clone(),
                        s: 0,
                        t: 0,
                    });
                    acc = acc.add(&base.scale(c));
                } else {
                    let (s, t) = split_exponents(m - 1);
                    words[1 + k].push(ZWord {
                        coeff: c.clone(),
                        s,
                        t,
                    });
                    acc = acc.add(&compose(&zword(s, t)?, b.op(gen_name(k)))?.scale(c));
                }
            }
            acc
        };
        let next = rem.sub(&subtract);
        if !next.is_zero() && next.order() >= ord {
            return Err(Error::NotDecomposable(
                "peeling made no progress; operator lies outside the module".to_string(),
            ));
        }
        rem = next;
    }

    Ok(ModuleDecomposition {
        terms: labels
            .iter()
            .zip(words)
            .filter(|(_, w)| !w.is_empty())
            .map(|(l, w)| ModuleTerm {
                basis: l.to_string(),
                words: w,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples() -> Vec<JacobiExampleBundle> {
        [
            (rat_int(0), rat_int(0), rat_int(1)),
            (rat_int(1), rat(1, 2), rat_int(2)),
            (rat_int(2), rat_int(1), rat(5, 2)),
        ]
        .into_iter()
        .map(|(a, b, v)| build_bundle(a, b, v).unwrap())
        .collect()
    }

    #[test]
    fn parameter_validation() {
        assert!(build_bundle(rat_int(0), rat_int(0), rat_int(1)).is_ok());
        assert!(build_bundle(rat_int(1), rat(1, 2), rat_int(2)).is_ok());
        assert!(matches!(
            build_bundle(rat_int(0), rat_int(0), rat_int(3)),
            Err(Error::ParameterConstraintViolated(_))
        ));
        assert!(matches!(
            build_bundle(rat_int(2), rat_int(0), rat_int(1)),
            Err(Error::ParameterConstraintViolated(_))
        ));
    }

    #[test]
    fn frozen_values_at_first_sample() {
        let b = build_bundle(rat_int(0), rat_int(0), rat_int(1)).unwrap();
        // constants split off the diagonal operator
        assert_eq!(b.params.c1(), rat(9, 4));
        assert_eq!(b.params.c2(), rat(5, 4));
        // adjoint constant K = diag(−3/4, −1/4)
        let k = adjoint_constant(&b.params);
        assert_eq!(k.at(0, 0), &rat(-3, 4));
        assert_eq!(k.at(1, 1), &rat(-1, 4));
        // quadratic block of the weight is diag(3, 1)
        let (w2, _, _) = matrix_jacobi_blocks(&rat_int(0), &rat_int(0), &rat_int(1));
        assert_eq!(w2, Mat::diag(vec![rat_int(3), rat_int(1)]));
        // central quartic q(n) = (1/16)(2n+1)(2n+3)²(2n+5)
        let q = central_quartic(&b.params);
        let f = |c: i64| Poly::from_coeffs(vec![rat_int(c), rat_int(2)]);
        let expect = f(1)
            .mul(&f(3))
            .mul(&f(3))
            .mul(&f(5))
            .scale(&rat(1, 16));
        assert_eq!(q, expect);
    }

    #[test]
    fn eigenvalue_entry_closed_form() {
        // Λ_n(D2) has the single entry −¼(2n−v+4+α+β)(2n−v+2+α+β)
        let p = JacobiParams::new(rat_int(1), rat(1, 2), rat_int(2)).unwrap();
        let b = build_bundle(p.alpha.clone(), p.beta.clone(), p.v.clone()).unwrap();
        let lam = eigenvalue_poly(b.op("D2")).unwrap();
        let f = |u: Rat| Poly::from_coeffs(vec![p.s() + u, rat_int(2)]);
        let expect = f(rat_int(4) - &p.v)
            .mul(&f(rat_int(2) - &p.v))
            .scale(&rat(-1, 4));
        assert_eq!(lam.at(0, 1), &expect);
        assert!(lam.at(0, 0).is_zero() && lam.at(1, 0).is_zero() && lam.at(1, 1).is_zero());
    }

    #[test]
    fn factorization_suite_passes() {
        for b in samples() {
            let r = verify_factorization(&b, 8).unwrap();
            assert!(r.pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn generator_suite_passes() {
        for b in samples() {
            let r = verify_generators_and_relations(&b, 6).unwrap();
            assert!(r.pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn center_suite_passes() {
        for b in samples() {
            let r = verify_center(&b).unwrap();
            assert!(r.pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn orthogonal_family_suite_passes() {
        for b in samples() {
            let (q, r) = orthogonal_family(&b, 6).unwrap();
            assert!(r.pass(), "{}", r.to_text());
            assert_eq!(q.len(), 7);
        }
        // Q0 at the first sample is diag(3/2, 1/2)
        let b = build_bundle(rat_int(0), rat_int(0), rat_int(1)).unwrap();
        let (q, _) = orthogonal_family(&b, 2).unwrap();
        assert_eq!(
            q[0],
            Mat::diag(vec![Poly::constant(rat(3, 2)), Poly::constant(rat(1, 2))])
        );
    }

    #[test]
    fn module_decomposition_examples() {
        let b = build_bundle(rat_int(1), rat(1, 2), rat_int(2)).unwrap();
        // a generator decomposes as itself
        let dec = decompose_in_module_basis(&b, b.op("D1")).unwrap();
        assert_eq!(
            dec.terms,
            vec![ModuleTerm {
                basis: "D1".to_string(),
                words: vec![ZWord {
                    coeff: rat_int(1),
                    s: 0,
                    t: 0
                }]
            }]
        );
        // the central elements decompose as central words on the identity
        let dec = decompose_in_module_basis(&b, b.op("Z1")).unwrap();
        assert_eq!(
            dec.coefficient("I").unwrap(),
            &[ZWord {
                coeff: rat_int(1),
                s: 1,
                t: 0
            }]
        );
        let dec = decompose_in_module_basis(&b, b.op("Z2")).unwrap();
        assert_eq!(
            dec.coefficient("I").unwrap(),
            &[ZWord {
                coeff: rat_int(1),
                s: 0,
                t: 1
            }]
        );
        // an order-6 product peels via Z1: D5∘D5∘D2 = Z1·D2 − v·(D5∘D2)
        let sample = compose(b.op("D5"), &compose(b.op("D5"), b.op("D2")).unwrap()).unwrap();
        let dec = decompose_in_module_basis(&b, &sample).unwrap();
        assert_eq!(
            dec.coefficient("D2").unwrap(),
            &[ZWord {
                coeff: rat_int(1),
                s: 1,
                t: 0
            }]
        );
        assert_eq!(
            dec.coefficient("D5*D2").unwrap(),
            &[ZWord {
                coeff: b.params.v.clone().neg(),
                s: 0,
                t: 0
            }]
        );
        assert_eq!(dec.reconstruct(&b).unwrap(), sample);
        assert!(dec.describe().contains("Z1"));
        // mixed orders accumulate several words on one basis element
        let mixed = compose(b.op("Z1"), b.op("D3"))
            .unwrap()
            .add(&b.op("D3").scale(&rat(2, 3)));
        let dec = decompose_in_module_basis(&b, &mixed).unwrap();
        assert_eq!(dec.coefficient("D3").unwrap().len(), 2);
        assert_eq!(dec.reconstruct(&b).unwrap(), mixed);
    }

    #[test]
    fn module_decomposition_rejects_outsiders() {
        let b = build_bundle(rat_int(0), rat_int(0), rat_int(1)).unwrap();
        // odd order
        assert!(matches!(
            decompose_in_module_basis(&b, &MatDiffOp::ddx(2)),
            Err(Error::NotDecomposable(_))
        ));
        // the bare diagonal family operator is not in the matrix algebra
        let dt = b.params.shifted_family().delta();
        let dt2 = dt.embed(2, 0, 0).add(&dt.embed(2, 1, 1));
        assert!(matches!(
            decompose_in_module_basis(&b, &dt2),
            Err(Error::NotDecomposable(_))
        ));
        // wrong shape
        assert!(matches!(
            decompose_in_module_basis(&b, &MatDiffOp::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
