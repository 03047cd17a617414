mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use nilcrystal::acg::catalog_group;
use nilcrystal::exactmath::{char_poly, det, real_root_count_in_interval, SpectralCertificate};
use nilcrystal::invariants::{averaging_invariants, classify_differential};
use nilcrystal::malcev::{builtin_lattice, LatticeElement};
use nilcrystal::scalar::{frac, int, is_integer};
use nilcrystal::unipotent::{bch_truncated, NilMatrix, UniMatrix};
use nilcrystal::{QMatrix, QPoly, Rational};

use common::*;

/// Fixed seed so every run explores the same cases.
fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x6e69_6c63),
        ..ProptestConfig::default()
    }
}

fn int_matrix(n: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(range, n * n).prop_map(move |v| {
        let rows: Vec<&[i64]> = v.chunks(n).collect();
        QMatrix::from_i64_rows(&rows)
    })
}

fn square_matrix() -> impl Strategy<Value = QMatrix> {
    (1usize..=4).prop_flat_map(|n| int_matrix(n, -4..=4))
}

fn nil_matrix(n: usize) -> impl Strategy<Value = NilMatrix> {
    prop::collection::vec((-4i64..=4, 1i64..=3), n * (n - 1) / 2).prop_map(move |v| {
        let mut m = QMatrix::zeros(n, n);
        let mut it = v.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let (p, q) = it.next().unwrap();
                m[(i, j)] = frac(p, q);
            }
        }
        NilMatrix::new(m).unwrap()
    })
}

fn lattice_point(rank: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = LatticeElement> {
    prop::collection::vec(range, rank).prop_map(|v| LatticeElement::from_i64(&v))
}

/// Factors with known root locations: (coefficients low to high, has a root
/// on the unit circle, all roots strictly outside the closed unit disk).
const FACTORS: &[(&[i64], bool, bool)] = &[
    (&[-1, 1], true, false),     // x - 1
    (&[1, 1], true, false),      // x + 1
    (&[1, 0, 1], true, false),   // x² + 1
    (&[1, 1, 1], true, false),   // x² + x + 1
    (&[1, -1, 1], true, false),  // x² - x + 1
    (&[-2, 1], false, true),     // x - 2
    (&[3, 1], false, true),      // x + 3
    (&[4, 0, 1], false, true),   // x² + 4
    (&[2, 2, 1], false, true),   // x² + 2x + 2, |root|² = 2
    (&[-1, 2], false, false),    // 2x - 1
    (&[1, 0, 2], false, false),  // 2x² + 1, |root|² = 1/2
    (&[0, 1], false, false),     // x
    (&[-3, 1, 1], false, true),  // x² + x - 3, roots ≈ 1.30 and -2.30
    (&[-1, 1, 1], false, false), // x² + x - 1, roots ≈ 0.62 and -1.62
];

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn char_poly_matches_cofactor_expansion(m in square_matrix()) {
        let p = char_poly(&m).unwrap();
        let n = m.rows();
        prop_assert_eq!(p.degree(), Some(n));
        prop_assert_eq!(det(&m).unwrap(), det_of(&m));
        for t in -3i64..=3 {
            let shifted = QMatrix::identity(n).scale(&int(t)).checked_sub(&m).unwrap();
            prop_assert_eq!(p.eval(&int(t)), det_of(&shifted));
        }
    }

    #[test]
    fn sturm_counts_match_known_roots(
        roots in prop::collection::btree_set(-6i64..=6, 0..5),
        doubled in any::<bool>(),
        complex_pair in any::<bool>(),
        a in -7i64..=6,
        width in 1i64..=8,
    ) {
        let b = a + width;
        let rs: Vec<Rational> = roots.iter().map(|&r| int(r)).collect();
        let mut p = QPoly::from_roots(&rs);
        if doubled {
            p = &p * &p;
        }
        if complex_pair {
            p = &p * &QPoly::from_i64(&[1, 0, 1]);
        }
        let expected = roots.iter().filter(|&&r| a < r && r < b).count();
        prop_assert_eq!(real_root_count_in_interval(&p, &int(a), &int(b)).unwrap(), expected);
    }

    #[test]
    fn unit_circle_and_disk_match_factor_moduli(picks in prop::collection::vec(0usize..FACTORS.len(), 1..4)) {
        let mut p = QPoly::one();
        for &i in &picks {
            p = &p * &QPoly::from_i64(FACTORS[i].0);
        }
        let on_circle = picks.iter().any(|&i| FACTORS[i].1);
        let outside = picks.iter().all(|&i| FACTORS[i].2);
        let cert = SpectralCertificate::for_poly(p).unwrap();
        prop_assert_eq!(cert.has_unit_circle_root, on_circle);
        prop_assert_eq!(cert.all_outside_unit_disk, outside);
    }

    #[test]
    fn exp_log_round_trip(x in (2usize..=6).prop_flat_map(nil_matrix)) {
        let g = x.exp();
        prop_assert_eq!(g.log(), x.clone());
        prop_assert_eq!(g.log().exp(), g.clone());
        prop_assert!(g.mul(&g.inverse()).unwrap().is_identity());
    }

    #[test]
    fn bch_reproduces_products(
        (x, y) in (2usize..=4).prop_flat_map(|n| (nil_matrix(n), nil_matrix(n))),
    ) {
        let class = x.dim() - 1;
        let z = bch_truncated(&x, &y, class.max(1)).unwrap();
        let direct = QMatrix::from_rows(naive_mul(x.exp().matrix(), y.exp().matrix())).unwrap();
        prop_assert_eq!(z.exp().into_matrix(), direct);
    }

    #[test]
    fn rational_powers_compose(x in nil_matrix(4), k in 1i64..=5) {
        let g = x.exp();
        let root = g.rational_power(&frac(1, k));
        prop_assert_eq!(root.int_pow(k), g);
    }

    #[test]
    fn float_eigenvalues_agree(m in int_matrix(3, -3..=3)) {
        let p = char_poly(&m).unwrap();
        prop_assume!(p.square_free().degree() == p.degree());
        let c = classify_differential(&m).unwrap();
        prop_assert_eq!((c.expanding, c.hyperbolic), float_verdicts(&m));
    }

    #[test]
    fn parity_identity(x in -1_000_000i64..=1_000_000, y in -1_000_000i64..=1_000_000) {
        let num = 3 * (x - y) - (x + y) * (x + y);
        prop_assert_eq!(num.rem_euclid(2), 0);
        prop_assert!((num / 2).rem_euclid(3) <= 1);
    }
}

const LATTICES: &[&str] = &[
    "free_abelian(3)",
    "heisenberg",
    "heisenberg_n(2)",
    "heisenberg_n(3)",
    "direct_product(heisenberg,free_abelian(1))",
    "direct_product(heisenberg,heisenberg)",
];

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn malcev_law_matches_matrix_model(
        which in 0..LATTICES.len(),
        seed in prop::collection::vec(-6i64..=6, 12),
        m in -4i64..=4,
    ) {
        let law = builtin_lattice(LATTICES[which]).unwrap().law;
        let k = law.rank();
        let u = LatticeElement::from_i64(&seed[..k]);
        let v = LatticeElement::from_i64(&seed[6..6 + k]);
        let (um, vm) = (law.matrix_from_coordinates(&u).unwrap(), law.matrix_from_coordinates(&v).unwrap());
        let product = law.mc_multiply(&u, &v).unwrap();
        prop_assert_eq!(&product, &law.coordinates_from_matrix(&um.mul(&vm).unwrap()).unwrap());
        prop_assert!(product.is_integral());
        let power = law.mc_power(&u, &int(m)).unwrap();
        prop_assert_eq!(&power, &law.coordinates_from_matrix(&um.int_pow(m)).unwrap());
        prop_assert!(power.is_integral());
        let inv = law.mc_inverse(&u).unwrap();
        prop_assert!(law.mc_multiply(&u, &inv).unwrap().is_identity());
        prop_assert!(law.lattice_contains(&um).unwrap());
    }

    #[test]
    fn heisenberg_n_closed_forms(n in 1u32..=4, u in lattice_point(3, -6..=6), v in lattice_point(3, -6..=6), m in -4i64..=4) {
        let law = builtin_lattice(&format!("heisenberg_n({n})")).unwrap().law;
        let (u, v) = (u.0, v.0);
        let nn = int(n as i64);
        let product = law.mc_multiply(&LatticeElement(u.clone()), &LatticeElement(v.clone())).unwrap();
        prop_assert_eq!(product.0, vec![&u[0] + &v[0], &u[1] + &v[1], &u[2] + &v[2] + &nn * &v[0] * &u[1]]);
        let m = int(m);
        let power = law.mc_power(&LatticeElement(u.clone()), &m).unwrap();
        let corr = &nn / int(2) * (&m * &m - &m) * &u[0] * &u[1];
        prop_assert_eq!(power.0, vec![&m * &u[0], &m * &u[1], &m * &u[2] + corr]);
    }

    #[test]
    fn isolator_matches_power_search(n in 1u32..=3, u in lattice_point(3, -2..=2)) {
        let law = builtin_lattice(&format!("heisenberg_n({n})")).unwrap().law;
        let g = law.matrix_from_coordinates(&u).unwrap();
        // some positive power lies in the commutator subgroup ⟨c⟩
        let oracle = (1..=n as i64).any(|m| {
            let p = g.int_pow(m).into_matrix();
            p[(0, 1)].is_zero() && p[(1, 2)].is_zero() && is_integer(&p[(0, 2)])
        });
        prop_assert_eq!(law.isolator_contains(2, &g).unwrap(), oracle);
        prop_assert!(law.isolator_contains(1, &g).unwrap());
    }

    #[test]
    fn psi_is_a_homomorphism(u in lattice_point(3, -5..=5), v in lattice_point(3, -5..=5)) {
        let (u, v) = (u.0, v.0);
        let prod = QMatrix::from_rows(naive_mul(&heis(&u[0], &u[1], &u[2]), &heis(&v[0], &v[1], &v[2]))).unwrap();
        let (x, y, z) = heis_coords(&prod);
        let lhs = psi(&x, &y, &z);
        let rhs = QMatrix::from_rows(naive_mul(&psi(&u[0], &u[1], &u[2]), &psi(&v[0], &v[1], &v[2]))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

const GROUPS: &[&str] = &["klein_bottle", "heis_abb", "heis_semidirect", "z2_extension(2)", "torus(2)"];

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn membership_is_closed(
        which in 0..GROUPS.len(),
        a in prop::collection::vec(-3i64..=3, 3),
        b in prop::collection::vec(-3i64..=3, 3),
        ka in 0usize..3,
        kb in 0usize..3,
    ) {
        let g = catalog_group(GROUPS[which]).unwrap();
        let k = g.lattice().rank();
        let (ka, kb) = (ka % g.coset_count(), kb % g.coset_count());
        let x = g.element(&LatticeElement::from_i64(&a[..k]), ka).unwrap();
        let y = g.element(&LatticeElement::from_i64(&b[..k]), kb).unwrap();
        let mx = g.membership(&x).unwrap();
        prop_assert!(mx.member);
        prop_assert_eq!(mx.coset, Some(ka));
        prop_assert_eq!(mx.lattice_part, Some(LatticeElement::from_i64(&a[..k])));
        let xy = x.mul(g.rep(), &y).unwrap();
        let m = g.membership(&xy).unwrap();
        prop_assert!(m.member);
        let rebuilt = g.element(m.lattice_part.as_ref().unwrap(), m.coset.unwrap()).unwrap();
        prop_assert_eq!(rebuilt.embedded(), xy.embedded());
        prop_assert!(g.membership(&x.inverse(g.rep()).unwrap()).unwrap().member);

        let mut half = LatticeElement::from_i64(&a[..k]);
        half.0[0] += frac(1, 2);
        let outside = g.affine_map(&half, &QMatrix::identity(g.dimension())).unwrap();
        prop_assert!(!g.membership(&outside).unwrap().member);
    }

    #[test]
    fn torsion_test_is_consistent(which in 0..GROUPS.len(), a in prop::collection::vec(-3i64..=3, 3), coset in 0usize..3) {
        let g = catalog_group(GROUPS[which]).unwrap();
        let k = g.lattice().rank();
        let x = g.element(&LatticeElement::from_i64(&a[..k]), coset % g.coset_count()).unwrap();
        let h = g.holonomy().order();
        match g.torsion_test(&x).unwrap() {
            Some(m) => {
                prop_assert!(matrix_pow(x.embedded(), m).is_identity());
                for j in 1..m {
                    prop_assert!(!matrix_pow(x.embedded(), j).is_identity());
                }
                prop_assert_eq!(h % m, 0);
            }
            None => prop_assert!(!matrix_pow(x.embedded(), h).is_identity()),
        }
    }

}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn lefschetz_and_nielsen_are_integers(
        p in -4i64..=4,
        q in -4i64..=4,
        j in 0usize..3,
        t in prop::collection::vec(-2i64..=2, 3),
        halves in prop::collection::vec(0i64..=1, 2),
    ) {
        let klein = catalog_group("klein_bottle").unwrap();
        let d = LatticeElement(vec![frac(halves[0], 2), frac(halves[1], 2)]);
        if let Ok(map) = klein.affine_map(&d, &q_diag(p, q)) {
            if !det(map.differential()).unwrap().is_zero() && klein.induces_self_map(&map).unwrap().holds {
                let r = averaging_invariants(&klein, &map).unwrap();
                prop_assert!(is_integer(&r.lefschetz) && is_integer(&r.nielsen));
                prop_assert_eq!(r.nielsen.clone() == r.lefschetz.abs(), r.anosov_relation);
            }
        }
        prop_assume!(p != 0 || q != 0);
        let abb = catalog_group("heis_abb").unwrap();
        let delta = QMatrix::from_rows(naive_mul(&abb_differential(p, q), &matrix_pow(&phi_star(), j))).unwrap();
        let map = abb.affine_map(&LatticeElement::from_i64(&t), &delta).unwrap();
        if abb.induces_self_map(&map).unwrap().holds {
            let r = averaging_invariants(&abb, &map).unwrap();
            prop_assert!(is_integer(&r.lefschetz) && is_integer(&r.nielsen));
            prop_assert_eq!(&r.nielsen, &r.lefschetz.abs());
        }
    }
}

fn q_diag(p: i64, q: i64) -> QMatrix {
    QMatrix::diagonal(&[int(p), int(q)])
}

#[test]
fn heisenberg_times_z_equivariance() {
    let lattice = builtin_lattice("direct_product(heisenberg,free_abelian(1))").unwrap();
    let rep = nilcrystal::affinerep::AffineRep::new(lattice.algebra().unwrap()).unwrap();
    assert_eq!(rep.dim(), 4);
    assert_eq!(rep.derived_dim(), 1);
    let t = rep.basis().basis()[3].clone();
    for v in rep.basis().basis() {
        assert!(t.bracket(v).unwrap().is_zero());
    }
    let alpha = QMatrix::from_rows(vec![
        vec![int(1), int(0), int(0), frac(1, 2)],
        vec![int(0), int(1), int(1), int(0)],
        vec![int(0), int(0), int(1), int(0)],
        vec![int(0), int(3), int(0), int(-1)],
    ])
    .unwrap();
    rep.check_automorphism(&alpha).unwrap();
    for coords in [[1, 2, 3, 4], [-1, 0, 2, 5], [0, 0, 0, 1]] {
        let g: UniMatrix = rep.element_from_log_coords(&coords.map(int)).unwrap();
        assert!(rep.verify_equivariance(&alpha, &g).unwrap().holds);
    }
}
