mod common;

use nalgebra::{DMatrix, DVector};
use ncvem::geometry::CellGeometry;
use ncvem::morley::{morley_local_stiffness, MorleyElement};
use ncvem::polybasis::monomial::exponents;
use ncvem::polybasis::{exact_bilinear_poly, plate_edge_operators, polygon_rule, ScaledPoly};
use ncvem::vem::{compute_dofs, default_quadrature_degree, LocalKernels};
use ncvem::{MaterialParams, Point2};
use proptest::prelude::*;

fn material() -> MaterialParams {
    MaterialParams::from_rigidity(2.5, 0.3).unwrap()
}

fn cell(seed: u64) -> CellGeometry {
    common::random_star_polygon(&mut common::rng(seed))
}

fn random_poly(k: &LocalKernels, seed: u64) -> ScaledPoly {
    let mut rng = common::rng(seed ^ 0x5eed);
    let coeffs = (0..k.basis.dim()).map(|_| common::uniform(&mut rng, -1.0, 1.0)).collect();
    ScaledPoly { basis: k.basis, coeffs }
}

fn monomial_dofs(k: &LocalKernels, cell: &CellGeometry) -> Vec<Vec<f64>> {
    let order = k.order();
    (0..k.basis.dim())
        .map(|a| compute_dofs(&k.basis.monomial(a), cell, order, default_quadrature_degree(order)))
        .collect()
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Largest deviation of `Π` from the identity on the monomials.
fn reproduction_error(k: &LocalKernels, cell: &CellGeometry) -> f64 {
    let mut worst = 0.0f64;
    for (a, d) in monomial_dofs(k, cell).iter().enumerate() {
        for (b, c) in k.project(d).iter().enumerate() {
            worst = worst.max((c - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let s = m.clone().singular_values();
    s.max() / s.min()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn projector_reproduces_polynomials(order in 2usize..=3, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let err = reproduction_error(&k, &cell);
        prop_assert!(err <= 1e-12, "error {err:.3e}");
    }

    /// At higher order the boundary-form right-hand side cancels in f64 and
    /// the error follows the conditioning of the projector matrix.
    #[test]
    fn high_order_reproduction_tracks_conditioning(order in 4usize..=5, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let bound = f64::EPSILON * condition_number(&k.gram) * k.basis.dim() as f64;
        let err = reproduction_error(&k, &cell);
        prop_assert!(err <= bound, "error {err:.3e} bound {bound:.3e}");
    }

    #[test]
    fn projector_is_idempotent(order in 2usize..=5, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let twice = &k.projector * &k.dof_matrix * &k.projector;
        prop_assert!(max_abs(&(twice - &k.projector)) <= 1e-12 * max_abs(&k.projector));
    }

    #[test]
    fn dof_matrix_has_full_column_rank(order in 2usize..=5, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let s = k.dof_matrix.clone().singular_values();
        prop_assert!(s.min() > 1e-10 * s.max());
    }

    #[test]
    fn stiffness_is_symmetric_semidefinite_with_rigid_kernel(order in 2usize..=5, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let norm = max_abs(&k.stiffness);
        prop_assert!(max_abs(&(&k.stiffness - k.stiffness.transpose())) <= 1e-13 * norm);
        let eig = k.stiffness.clone().symmetric_eigenvalues();
        let top = eig.iter().map(|v| v.abs()).fold(0.0, f64::max);
        prop_assert!(eig.min() >= -1e-10 * top);
        prop_assert_eq!(eig.iter().filter(|&&v| v <= 1e-10 * top).count(), 3);
        // the kernel holds the DOFs of the affine functions
        let dofs = monomial_dofs(&k, &cell);
        for d in dofs.iter().take(3) {
            let kd = &k.stiffness * DVector::from_column_slice(d);
            prop_assert!(kd.amax() <= 1e-10 * top * DVector::from_column_slice(d).amax());
        }
    }

    #[test]
    fn rayleigh_quotient_is_one_on_polynomials(order in 2usize..=4, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let p = random_poly(&k, seed);
        let d = DVector::from_vec(compute_dofs(&p, &cell, order, default_quadrature_degree(order)));
        let discrete = d.dot(&(&k.stiffness * &d));
        let exact = exact_bilinear_poly(&p, &p, &cell, &material());
        prop_assert!((discrete / exact - 1.0).abs() <= 1e-10, "{discrete} vs {exact}");
    }

    #[test]
    fn boundary_form_matches_volume_form(order in 2usize..=4, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let dofs = monomial_dofs(&k, &cell);
        let (mut worst, mut scale) = (0.0f64, 0.0f64);
        for beta in 3..k.basis.dim() {
            for (g, d) in dofs.iter().enumerate() {
                let volume = exact_bilinear_poly(&k.basis.monomial(beta), &k.basis.monomial(g), &cell, &material());
                let boundary: f64 = k.rhs.row(beta).iter().zip(d).map(|(b, v)| b * v).sum();
                scale = scale.max(volume.abs());
                worst = worst.max((volume - boundary).abs());
            }
        }
        prop_assert!(worst <= 1e-11 * scale);
    }

    #[test]
    fn exact_form_is_semidefinite_with_affine_kernel(order in 2usize..=5, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let np = k.basis.dim();
        let form = DMatrix::from_fn(np, np, |a, b| {
            exact_bilinear_poly(&k.basis.monomial(a), &k.basis.monomial(b), &cell, &material())
        });
        prop_assert!(max_abs(&(&form - form.transpose())) <= 1e-14 * max_abs(&form));
        for a in 0..3 {
            prop_assert!(form.row(a).amax() == 0.0);
        }
        let eig = form.symmetric_eigenvalues();
        prop_assert!(eig.min() >= -1e-12 * eig.max());
        prop_assert_eq!(eig.iter().filter(|&&v| v <= 1e-12 * eig.max()).count(), 3);
    }

    #[test]
    fn plate_traces_have_the_expected_degrees(order in 2usize..=5, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        let p = random_poly(&k, seed);
        for edge in &cell.edges {
            let t = plate_edge_operators(&p, edge, &material());
            for j in (order - 1)..=order {
                prop_assert_eq!(t.bending.coeff(j), 0.0);
            }
            for j in (order - 2)..=order {
                prop_assert_eq!(t.shear.coeff(j), 0.0);
            }
        }
    }

    #[test]
    fn load_vector_integrates_low_degree_data(order in 2usize..=5, seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, order, &material()).unwrap();
        // f in P^{ℓ-2}, v in P^ℓ: the load functional is exact
        let low = k.basis.with_order(order - 2);
        let mut rng = common::rng(seed);
        let f = ScaledPoly { basis: low, coeffs: (0..low.dim()).map(|_| common::uniform(&mut rng, -1.0, 1.0)).collect() };
        let v = random_poly(&k, seed.wrapping_add(1));
        let dofs = compute_dofs(&v, &cell, order, default_quadrature_degree(order));
        let load = k.load(&cell, &|p| f.eval(p), 2 * order);
        let discrete: f64 = load.iter().zip(&dofs).map(|(a, b)| a * b).sum();
        let exact = polygon_rule(&cell, 2 * order).integrate(|p| f.eval(p) * v.eval(p));
        let scale = polygon_rule(&cell, 2 * order).integrate(|p| (f.eval(p) * v.eval(p)).abs());
        prop_assert!((discrete - exact).abs() <= 1e-11 * scale);
    }

    #[test]
    fn lowest_order_layout_has_no_edge_value_moments(seed in any::<u64>()) {
        let cell = cell(seed);
        let k = LocalKernels::new(&cell, 2, &material()).unwrap();
        prop_assert_eq!(k.layout.n_edge_value(), 0);
        prop_assert_eq!(k.layout.n_cell(), 0);
        prop_assert_eq!(k.layout.len(), 2 * cell.num_vertices());
    }
}

fn random_triangle(seed: u64) -> [Point2; 3] {
    let mut rng = common::rng(seed);
    loop {
        let p: Vec<Point2> = (0..3)
            .map(|_| Point2::new(common::uniform(&mut rng, -2.0, 2.0), common::uniform(&mut rng, -2.0, 2.0)))
            .collect();
        let mut tri = [p[0], p[1], p[2]];
        if (tri[1] - tri[0]).cross(tri[2] - tri[0]) < 0.0 {
            tri.swap(1, 2);
        }
        if let Ok(g) = CellGeometry::new(tri.to_vec()) {
            if g.min_fan_angle() > 0.2 {
                return tri;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lowest_order_stabilization_vanishes_on_triangles(seed in any::<u64>()) {
        let tri = random_triangle(seed);
        let k = LocalKernels::new(&CellGeometry::new(tri.to_vec()).unwrap(), 2, &material()).unwrap();
        let s_norm = k.stabilization.clone().symmetric_eigenvalues().amax();
        prop_assert!(s_norm <= 1e-12 * max_abs(&k.stiffness));
    }

    #[test]
    fn lowest_order_stiffness_matches_morley(seed in any::<u64>()) {
        let tri = random_triangle(seed);
        let vem = LocalKernels::new(&CellGeometry::new(tri.to_vec()).unwrap(), 2, &material()).unwrap().stiffness;
        let morley = morley_local_stiffness(tri, &material()).unwrap();
        prop_assert!(max_abs(&(&vem - &morley)) <= 1e-11 * max_abs(&morley));
    }

    #[test]
    fn morley_basis_is_dual_to_its_dofs(seed in any::<u64>()) {
        let tri = random_triangle(seed);
        let el = MorleyElement::new(tri).unwrap();
        for i in 0..6 {
            for k in 0..3 {
                let expected = if i == k { 1.0 } else { 0.0 };
                prop_assert!((el.basis_value(i, tri[k]) - expected).abs() <= 1e-12);
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let d = b - a;
                let normal = [d.y / d.norm(), -d.x / d.norm()];
                let mid = (a + b) * 0.5;
                let g = el.basis_gradient(i, mid);
                let moment = (g[0] * normal[0] + g[1] * normal[1]) * d.norm();
                let expected = if i == 3 + k { 1.0 } else { 0.0 };
                prop_assert!((moment - expected).abs() <= 1e-11, "basis {i} edge {k}: {moment}");
            }
        }
    }
}

#[test]
fn exponent_ordering_starts_with_affine_monomials() {
    assert_eq!(&exponents(3)[..3], &[(0, 0), (1, 0), (0, 1)]);
}
