//! End-to-end acceptance suite: ten exact-arithmetic criteria covering the
//! eigenvalue map, the 2×2 example's factorization, relations, center, and
//! orthogonal family, ladder algebras of direct sums, and randomized
//! functoriality / adjoint-involution / recursion checks.
//!
//! Every criterion is a plain equality of rationals, polynomials, matrices,
//! or operators — there are no tolerances anywhere. Each test prints one
//! summary line on success.

use mvop_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn samples() -> Vec<JacobiExampleBundle> {
    [
        (rat_int(0), rat_int(0), rat_int(1)),
        (rat_int(1), rat(1, 2), rat_int(2)),
        (rat_int(2), rat_int(1), rat(5, 2)),
    ]
    .into_iter()
    .map(|(a, b, v)| build_bundle(a, b, v).expect("valid sample parameters"))
    .collect()
}

fn scalar_eig(p: Poly) -> Mat<Poly> {
    Mat::diag(vec![p])
}

#[test]
fn criterion_01_eigenvalue_closed_forms() {
    // classical families: Λ_n(δ) matches the closed forms −2n, −n,
    // −n(n+α+β+1) for several parameter choices
    let n = Poly::x();
    let minus_n = n.neg();
    for b in [rat_int(0), rat(3, 4), rat_int(2)] {
        let fam = ScalarFamily::Hermite { b };
        let lam = eigenvalue_poly(&fam.delta()).unwrap();
        assert_eq!(lam, scalar_eig(minus_n.scale(&rat_int(2))));
        assert_eq!(fam.delta_eigenvalue(), minus_n.scale(&rat_int(2)));
    }
    for alpha in [rat(1, 2), rat_int(2), rat(7, 3)] {
        let fam = ScalarFamily::Laguerre { alpha };
        let lam = eigenvalue_poly(&fam.delta()).unwrap();
        assert_eq!(lam, scalar_eig(minus_n.clone()));
        assert_eq!(fam.delta_eigenvalue(), minus_n);
    }
    for (alpha, beta) in [
        (rat_int(0), rat_int(0)),
        (rat_int(1), rat(1, 2)),
        (rat_int(3), rat_int(2)),
    ] {
        let expect = n
            .mul(&Poly::from_coeffs(vec![
                &alpha + &beta + rat_int(1),
                rat_int(1),
            ]))
            .neg();
        let fam = ScalarFamily::Jacobi { alpha, beta };
        assert_eq!(eigenvalue_poly(&fam.delta()).unwrap(), scalar_eig(expect.clone()));
        assert_eq!(fam.delta_eigenvalue(), expect);
    }
    // 2×2 example: the four corner generators have the displayed one-entry
    // eigenvalue matrices at every sample
    for b in samples() {
        let displays = displayed_eigenvalues(&b.params);
        for (k, display) in displays.iter().enumerate() {
            let lam = eigenvalue_poly(b.op(&format!("D{}", k + 1))).unwrap();
            assert_eq!(&lam, display, "eigenvalue display D{}", k + 1);
        }
    }
    println!("criterion 01 (eigenvalue closed forms): PASS");
}

#[test]
fn criterion_02_factorization_and_adjoint() {
    for b in samples() {
        // V∘N equals the diagonal family operator coefficientwise
        let vn = compose(b.op("V"), b.op("N")).unwrap();
        assert_eq!(&vn, b.op("D"));
        for i in 0..=vn.order() {
            assert_eq!(vn.coeff(i), b.op("D").coeff(i));
        }
        // the exact adjoint of V recovers N up to the constant K = −W₂/4
        let adjoint = adjoint_pair(
            b.op("V"),
            &b.wtilde.weight_form().unwrap(),
            &b.w.weight_form().unwrap(),
        )
        .unwrap();
        let k = adjoint_constant(&b.params);
        assert_eq!(adjoint, b.op("N").right_mul(&k));
        // full report
        let r = verify_factorization(&b, 8).unwrap();
        assert!(r.pass(), "{}", r.to_text());
    }
    println!("criterion 02 (factorization V∘N and adjoint recovery): PASS");
}

#[test]
fn criterion_03_generator_relations() {
    for b in samples() {
        let v = &b.params.v;
        let [d1, d2, d3, d4] = ["D1", "D2", "D3", "D4"].map(|k| b.op(k));
        let prod = |x: &MatDiffOp, y: &MatDiffOp| compose(x, y).unwrap();
        assert_eq!(prod(d2, d3), prod(d1, d1).add(&d1.scale(v)));
        assert_eq!(prod(d3, d2), prod(d4, d4).sub(&d4.scale(v)));
        assert_eq!(
            prod(d1, d2).sub(&prod(d2, d4)),
            d2.scale(&v.clone().neg())
        );
        assert_eq!(prod(d4, d3).sub(&prod(d3, d1)), d3.scale(v));
        for (x, y) in [
            (d1, d4),
            (d4, d1),
            (d1, d3),
            (d4, d2),
            (d2, d1),
            (d2, d2),
            (d3, d4),
            (d3, d3),
        ] {
            assert!(prod(x, y).is_zero());
        }
        let r = verify_generators_and_relations(&b, 6).unwrap();
        assert!(r.pass(), "{}", r.to_text());
    }
    println!("criterion 03 (generator relations): PASS");
}

#[test]
fn criterion_04_central_elements() {
    for b in samples() {
        let p = &b.params;
        let (z1, z2) = (b.op("Z1"), b.op("Z2"));
        let gens = GeneratorSet::new(
            ["D1", "D2", "D3", "D4"].map(|k| b.op(k).clone()).to_vec(),
            ["D1", "D2", "D3", "D4"].map(String::from).to_vec(),
        )
        .unwrap();
        assert!(center_check(z1, &gens).unwrap());
        assert!(center_check(z2, &gens).unwrap());
        // leading coefficients
        let omx2 = Poly::from_coeffs(vec![rat_int(1), rat_int(0), rat_int(-1)]);
        assert_eq!(z1.order(), 4);
        assert_eq!(z1.coeff(4), Mat::diag(vec![omx2.pow(2), omx2.pow(2)]));
        assert_eq!(z2.order(), 6);
        assert_eq!(z2.coeff(6), Mat::diag(vec![omx2.pow(3), omx2.pow(3)]));
        // cubic relation with the displayed coefficient on Z1²
        let c = p.c1() * p.c2();
        let cubic = compose(z1, &compose(z1, z1).unwrap())
            .unwrap()
            .sub(&compose(z2, z2).unwrap())
            .add(&compose(z1, z2).unwrap().scale(&p.cubic_k()))
            .sub(&compose(z1, z1).unwrap().scale(&c));
        assert!(cubic.is_zero());
        let r = verify_center(&b).unwrap();
        assert!(r.pass(), "{}", r.to_text());
    }
    println!("criterion 04 (central elements Z1, Z2): PASS");
}

#[test]
fn criterion_05_centralizing_cofactor() {
    for b in samples() {
        let cof = centralizing_cofactor(b.op("D"), &b.wtilde).unwrap();
        assert_eq!(&cof, b.op("A"));
        let q = central_quartic(&b.params);
        let lam = eigenvalue_poly(&compose(&cof, b.op("D")).unwrap()).unwrap();
        assert_eq!(lam, Mat::diag(vec![q.clone(), q]));
    }
    println!("criterion 05 (centralizing cofactor with scalar eigenvalue): PASS");
}

#[test]
fn criterion_06_orthogonal_family() {
    for b in samples() {
        let n_max = 10;
        let diag_mops = monic_mops(&b.wtilde, n_max).unwrap();
        let q: Vec<Mat<Poly>> = diag_mops
            .polys
            .iter()
            .map(|j| apply(j, b.op("V")).unwrap())
            .collect();
        let moments = b.w.moments(2 * n_max).unwrap();
        for n in 0..=n_max {
            for m in 0..n {
                let ip = inner_product_with_moments(&q[n], &q[m], &moments).unwrap();
                assert!(ip.is_zero(), "⟨Q_{n}, Q_{m}⟩ ≠ 0");
            }
        }
    }
    println!("criterion 06 (orthogonality of the lifted family, n ≤ 10): PASS");
}

#[test]
fn criterion_07_darboux_certificate() {
    for b in samples() {
        let report = darboux_verify(b.op("V"), &b.wtilde, &b.w, 8).unwrap();
        assert!(report.invertible_for_all_n);
        assert!(report.vn_report.pass);
        assert!(report.nv_report.pass);
        assert!(report.intertwining_pass);
        assert!(report.norm_identity_pass);
        assert!(report.pass);
    }
    println!("criterion 07 (two-weight link certificate incl. norm identity): PASS");
}

#[test]
fn criterion_08_ladder_algebras() {
    // gap-1 and gap-2 Laguerre pairs: six generators, and the down∘up
    // composition is a polynomial in δ recovered by exact division
    let alpha = rat(1, 2);
    for k in [1u32, 2] {
        let w = WeightSpec::direct_sum(vec![
            WeightSpec::laguerre(alpha.clone()),
            WeightSpec::laguerre(&alpha + rat_int(k as i64)),
        ]);
        let gens = directsum_generators(&w).unwrap();
        assert_eq!(gens.len(), 6);
        let find = |label: &str| {
            let idx = gens.labels.iter().position(|l| l == label).unwrap();
            gens.ops[idx].clone()
        };
        let up = find("T[0,1]");
        let down = find("T[1,0]");
        let f = compose(&up, &down).unwrap();
        let lam = eigenvalue_poly(&f).unwrap();
        // q(n) = (n+α+1)⋯(n+α+k) sits in the (0,0) block
        let mut q = Poly::one();
        for j in 1..=k as i64 {
            q = q.mul(&Poly::from_coeffs(vec![&alpha + rat_int(j), rat_int(1)]));
        }
        assert_eq!(lam.at(0, 0), &q);
        let rebuilt = operator_from_eigenvalue(&lam, &w).unwrap();
        assert_eq!(rebuilt, f);
    }
    // every catalog ladder's operator matches its closed-form eigenvalue
    let ladders: Vec<(ScalarFamily, ScalarFamily)> = vec![
        (
            ScalarFamily::Hermite { b: rat(3, 4) },
            ScalarFamily::Hermite { b: rat(3, 4) },
        ),
        (
            ScalarFamily::Laguerre { alpha: rat(1, 2) },
            ScalarFamily::Laguerre { alpha: rat(3, 2) },
        ),
        (
            ScalarFamily::Laguerre { alpha: rat(3, 2) },
            ScalarFamily::Laguerre { alpha: rat(1, 2) },
        ),
        (
            ScalarFamily::Laguerre { alpha: rat_int(1) },
            ScalarFamily::Laguerre { alpha: rat_int(4) },
        ),
        (
            ScalarFamily::Laguerre { alpha: rat_int(4) },
            ScalarFamily::Laguerre { alpha: rat_int(1) },
        ),
        (
            ScalarFamily::Jacobi {
                alpha: rat_int(1),
                beta: rat_int(1),
            },
            ScalarFamily::Jacobi {
                alpha: rat_int(2),
                beta: rat_int(0),
            },
        ),
        (
            ScalarFamily::Jacobi {
                alpha: rat_int(2),
                beta: rat_int(0),
            },
            ScalarFamily::Jacobi {
                alpha: rat_int(1),
                beta: rat_int(1),
            },
        ),
        (
            ScalarFamily::Jacobi {
                alpha: rat(1, 2),
                beta: rat(5, 2),
            },
            ScalarFamily::Jacobi {
                alpha: rat(5, 2),
                beta: rat(1, 2),
            },
        ),
    ];
    for (src, tgt) in &ladders {
        let t = t_operator(src, tgt).unwrap();
        let lam = eigenvalue_poly(&t).unwrap();
        assert_eq!(lam.at(0, 0), &t_eigenvalue(src, tgt).unwrap());
    }
    // non-linked pairs give the zero module
    let unlinked = (
        ScalarFamily::Laguerre { alpha: rat(1, 2) },
        ScalarFamily::Laguerre { alpha: rat_int(1) },
    );
    assert!(t_operator(&unlinked.0, &unlinked.1).unwrap().is_zero());
    assert!(t_eigenvalue(&unlinked.0, &unlinked.1).unwrap().is_zero());
    println!("criterion 08 (ladder algebras of direct sums): PASS");
}

#[test]
fn criterion_09_directsum_centers() {
    // linked pair: the center is generated by the joint Δ alone
    let pair = WeightSpec::direct_sum(vec![
        WeightSpec::laguerre(rat(1, 2)),
        WeightSpec::laguerre(rat(3, 2)),
    ]);
    let gens = directsum_generators(&pair).unwrap();
    let center = directsum_center(&pair).unwrap();
    assert_eq!(center.gens.labels, vec!["Delta[0]"]);
    assert_eq!(center.classes, vec![vec![0, 1]]);
    for op in &center.gens.ops {
        assert!(center_check(op, &gens).unwrap());
    }
    // four summands in two linked classes: two Δ blocks and two idempotents
    let four = WeightSpec::direct_sum(vec![
        WeightSpec::laguerre(rat(1, 2)),
        WeightSpec::laguerre(rat_int(1)),
        WeightSpec::laguerre(rat_int(2)),
        WeightSpec::laguerre(rat(3, 2)),
    ]);
    let gens4 = directsum_generators(&four).unwrap();
    let center4 = directsum_center(&four).unwrap();
    assert_eq!(
        center4.gens.labels,
        vec!["Delta[0]", "Delta[1]", "P[0]", "P[1]"]
    );
    assert_eq!(center4.classes, vec![vec![0, 3], vec![1, 2]]);
    for op in &center4.gens.ops {
        assert!(center_check(op, &gens4).unwrap());
    }
    println!("criterion 09 (direct-sum centers): PASS");
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    Poly::from_coeffs(
        (0..=deg)
            .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
            .collect(),
    )
}

/// A random operator in the bounded class: ∂^i coefficients of degree ≤ i.
fn random_bounded_op(rng: &mut ChaCha8Rng, rows: usize, cols: usize, order: usize) -> MatDiffOp {
    let coeffs = (0..=order)
        .map(|i| {
            Mat::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| random_poly(rng, i)).collect())
                    .collect(),
            )
        })
        .collect();
    MatDiffOp::new(rows, cols, coeffs)
}

#[test]
fn criterion_10_randomized_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // (a) eigenvalue functoriality on 200 random composable pairs,
    // rectangular shapes included
    for _ in 0..200 {
        let (r, s, t) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
        );
        let (oa, ob) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let a = random_bounded_op(&mut rng, r, s, oa);
        let b = random_bounded_op(&mut rng, s, t, ob);
        let lhs = eigenvalue_poly(&compose(&a, &b).unwrap()).unwrap();
        let rhs = eigenvalue_poly(&a)
            .unwrap()
            .mul(&eigenvalue_poly(&b).unwrap());
        assert_eq!(lhs, rhs, "Λ(A∘B) = Λ(A)Λ(B)");
    }

    // (b) adjoint involution on 50 random elements of ladder-pair algebras
    let alphas = [rat_int(0), rat(1, 2), rat_int(1), rat(3, 2), rat_int(2)];
    for alpha in &alphas {
        let w = WeightSpec::direct_sum(vec![
            WeightSpec::laguerre(alpha.clone()),
            WeightSpec::laguerre(alpha + rat_int(1)),
        ]);
        let form = w.weight_form().unwrap();
        let gens = directsum_generators(&w).unwrap();
        for _ in 0..10 {
            // random rational combination of words of length ≤ 2
            let mut d = MatDiffOp::zero(2, 2);
            for g in &gens.ops {
                if rng.gen_bool(0.5) {
                    d = d.add(&g.scale(&rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))));
                }
            }
            for _ in 0..3 {
                let g1 = &gens.ops[rng.gen_range(0..gens.len())];
                let g2 = &gens.ops[rng.gen_range(0..gens.len())];
                let word = compose(g1, g2).unwrap();
                d = d.add(&word.scale(&rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))));
            }
            let dag = adjoint_pair(&d, &form, &form).unwrap();
            let dagdag = adjoint_pair(&dag, &form, &form).unwrap();
            assert_eq!(dagdag, d, "adjoint involution at α = {alpha}");
        }
    }

    // (c) three-term recursion residual vanishes for every catalog weight
    let catalog: Vec<WeightSpec> = vec![
        WeightSpec::hermite(rat_int(0)),
        WeightSpec::hermite(rat(3, 4)),
        WeightSpec::laguerre(rat(1, 2)),
        WeightSpec::laguerre(rat_int(2)),
        WeightSpec::jacobi(rat_int(0), rat_int(0)),
        WeightSpec::jacobi(rat_int(1), rat(1, 2)),
        WeightSpec::jacobi(rat_int(1), rat_int(1)),
        WeightSpec::direct_sum(vec![
            WeightSpec::laguerre(rat(1, 2)),
            WeightSpec::laguerre(rat(3, 2)),
        ]),
        WeightSpec::conjugated(
            Mat::from_rows(vec![
                vec![rat_int(1), rat_int(1)],
                vec![rat_int(0), rat_int(1)],
            ]),
            WeightSpec::direct_sum(vec![
                WeightSpec::jacobi(rat_int(1), rat_int(1)),
                WeightSpec::jacobi(rat_int(1), rat_int(1)),
            ]),
        ),
        WeightSpec::matrix_jacobi(rat_int(0), rat_int(0), rat_int(1)),
        WeightSpec::matrix_jacobi(rat_int(1), rat(1, 2), rat_int(2)),
        WeightSpec::matrix_jacobi(rat_int(2), rat_int(1), rat(5, 2)),
    ];
    for w in &catalog {
        let m = monic_mops(w, 12).unwrap();
        let rc = recursion_coeffs(&m).unwrap();
        for n in 0..12 {
            assert!(
                recursion_residual(&m, &rc, n).is_zero(),
                "recursion residual at n = {n}"
            );
        }
    }

    // (d) commutativity probes: the corner generators do not commute, a
    // single scalar operator does
    let b = build_bundle(rat_int(0), rat_int(0), rat_int(1)).unwrap();
    let corner = GeneratorSet::new(
        ["D1", "D2", "D3", "D4"].map(|k| b.op(k).clone()).to_vec(),
        ["D1", "D2", "D3", "D4"].map(String::from).to_vec(),
    )
    .unwrap();
    assert!(!commutativity_probe(&corner).unwrap());
    let single = GeneratorSet::new(
        vec![ScalarFamily::Jacobi {
            alpha: rat_int(1),
            beta: rat_int(1),
        }
        .delta()],
        vec!["delta".to_string()],
    )
    .unwrap();
    assert!(commutativity_probe(&single).unwrap());

    println!("criterion 10 (randomized functoriality, involution, recursion): PASS");
}
