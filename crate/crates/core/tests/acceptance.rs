//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each, and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use ncvem::assembly::{Discretization, GlobalDofMap};
use ncvem::error_analysis::{convergence_study, patch_suite, solve_manufactured, windowed_slope};
use ncvem::fields::{PolyField, Polynomial2};
use ncvem::mesh::{MeshFamily, MeshOptions};
use ncvem::morley::{morley_local_stiffness, morley_solve};
use ncvem::polybasis::monomial::exponents;
use ncvem::polybasis::{exact_bilinear_poly, polygon_rule};
use ncvem::vem::{compute_dofs, default_quadrature_degree, LocalKernels};
use ncvem::{MaterialParams, PolygonMesh};

/// One row of reference mesh data: cells, edges, vertices and the DOF
/// counts for orders 2..=5 (`None` where no reference count exists).
type Row = (usize, usize, usize, [Option<usize>; 4]);

const fn row(np: usize, nf: usize, nv: usize, d: [usize; 4]) -> Row {
    (np, nf, nv, [Some(d[0]), Some(d[1]), Some(d[2]), if d[3] == 0 { None } else { Some(d[3]) }])
}

const CRISS_CROSS: [Row; 9] = [
    row(100, 160, 61, [221, 541, 961, 1481]),
    row(400, 620, 221, [841, 2081, 3721, 5761]),
    row(1600, 2440, 841, [3281, 8161, 14641, 22721]),
    row(3600, 5460, 1861, [7321, 18241, 32761, 50881]),
    row(6400, 9680, 3281, [12961, 32321, 58081, 90241]),
    row(10000, 15100, 5101, [20201, 50401, 90601, 0]),
    row(14400, 21720, 7321, [29041, 72481, 130321, 0]),
    row(19600, 29540, 9941, [39481, 98561, 177241, 0]),
    row(25600, 38560, 12961, [51521, 128641, 231361, 0]),
];

const HEXAGONAL: [Row; 9] = [
    row(36, 125, 90, [215, 465, 751, 1073]),
    row(121, 400, 280, [680, 1480, 2401, 3443]),
    row(441, 1400, 960, [2360, 5160, 8401, 12083]),
    row(961, 3000, 2040, [5040, 11040, 18001, 25923]),
    row(1681, 5200, 3520, [8720, 19120, 31201, 44963]),
    row(2601, 8000, 5400, [13400, 29400, 48001, 0]),
    row(3721, 11400, 7680, [19080, 41880, 68401, 0]),
    row(5041, 15400, 10360, [25760, 56560, 92401, 0]),
    row(6561, 20000, 13440, [33440, 73440, 120001, 0]),
];

const OCTAGONAL: [Row; 9] = [
    row(25, 120, 96, [216, 456, 721, 1011]),
    row(100, 440, 341, [781, 1661, 2641, 3721]),
    row(400, 1680, 1281, [2961, 6321, 10081, 14241]),
    row(900, 3720, 2821, [6541, 13981, 22321, 31561]),
    row(1600, 6560, 4961, [11521, 24641, 39361, 55681]),
    row(2500, 10200, 7701, [17901, 38301, 61201, 0]),
    row(3600, 14640, 11041, [25681, 54961, 87841, 0]),
    row(4900, 19880, 14981, [34861, 74621, 119281, 0]),
    row(6400, 25920, 19521, [45441, 97281, 155521, 0]),
];

const RANDOM_QUAD: [Row; 9] = [
    row(25, 60, 36, [96, 216, 361, 531]),
    row(100, 220, 121, [341, 781, 1321, 1961]),
    row(400, 840, 441, [1281, 2961, 5041, 7521]),
    row(900, 1860, 961, [2821, 6541, 11161, 16681]),
    row(1600, 3280, 1681, [4961, 11521, 19681, 29441]),
    row(2500, 5100, 2601, [7701, 17901, 30601, 0]),
    row(3600, 7320, 3721, [11041, 25681, 43921, 0]),
    row(4900, 9940, 5041, [14981, 34861, 59641, 0]),
    row(6400, 12960, 6561, [19521, 45441, 77761, 0]),
];

fn table(family: MeshFamily) -> &'static [Row; 9] {
    match family {
        MeshFamily::CrissCross => &CRISS_CROSS,
        MeshFamily::Hexagonal => &HEXAGONAL,
        MeshFamily::Octagonal => &OCTAGONAL,
        MeshFamily::RandomQuad => &RANDOM_QUAD,
    }
}

struct Outcome {
    passed: bool,
    summary: String,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Self { passed, summary: summary.into() }
    }
}

fn all_meshes() -> Vec<(MeshFamily, usize, PolygonMesh)> {
    let options = MeshOptions::default();
    let mut out = Vec::new();
    for family in MeshFamily::ALL {
        for n in 0..=8 {
            let mesh = family.build(n, &options).unwrap_or_else(|e| panic!("{family} n={n}: {e}"));
            out.push((family, n, mesh));
        }
    }
    out
}

fn dof_counts(meshes: &[(MeshFamily, usize, PolygonMesh)]) -> Outcome {
    let (mut checked, mut mismatches) = (0, Vec::new());
    for (family, n, mesh) in meshes {
        for (k, expected) in table(*family)[*n].3.iter().enumerate() {
            let Some(expected) = *expected else { continue };
            let order = k + 2;
            let got = GlobalDofMap::new(mesh, order).map(|m| m.total).unwrap_or(usize::MAX);
            checked += 1;
            if got != expected {
                mismatches.push(format!("{family} n={n} order={order}: {got} != {expected}"));
            }
        }
    }
    Outcome::new(mismatches.is_empty(), format!("{checked} entries, mismatches: {mismatches:?}"))
}

fn topology_counts(meshes: &[(MeshFamily, usize, PolygonMesh)]) -> Outcome {
    let mut mismatches = Vec::new();
    for (family, n, mesh) in meshes {
        let (np, nf, nv, _) = table(*family)[*n];
        let c = mesh.counts();
        if (c.cells, c.edges, c.vertices) != (np, nf, nv) {
            mismatches.push(format!("{family} n={n}: {:?} != {:?}", (c.cells, c.edges, c.vertices), (np, nf, nv)));
        }
    }
    Outcome::new(mismatches.is_empty(), format!("{} meshes, mismatches: {mismatches:?}", meshes.len()))
}

fn patch_tests() -> Outcome {
    let material = MaterialParams::default();
    let options = MeshOptions::default();
    let mut worst = (0.0f64, String::new());
    let mut count = 0;
    for family in MeshFamily::ALL {
        let mesh = family.build(0, &options).unwrap();
        for order in 2..=5 {
            let disc = Discretization::new(&mesh, order, material).unwrap();
            for r in patch_suite(&disc).unwrap() {
                count += 1;
                let m = r.metric();
                if !(m <= worst.0) {
                    worst = (m, format!("{family} order={order} x^{}y^{}", r.exponents.0, r.exponents.1));
                }
            }
        }
    }
    Outcome::new(worst.0 <= 1e-8, format!("{count} solves, worst Error_2h {:.3e} ({})", worst.0, worst.1))
}

fn slope_window(family: MeshFamily, order: usize) -> (f64, f64) {
    let target = (order - 1) as f64;
    match family {
        MeshFamily::CrissCross | MeshFamily::RandomQuad => (target - 0.25, target + 0.35),
        MeshFamily::Hexagonal | MeshFamily::Octagonal => (target - 0.35, target + 0.45),
    }
}

fn convergence_rates() -> Outcome {
    let material = MaterialParams::default();
    let options = MeshOptions::default();
    let mut failures = Vec::new();
    for family in MeshFamily::ALL {
        for order in 2..=4 {
            let records = convergence_study(family, order, 3, material, &options).unwrap();
            let slope = windowed_slope(&records);
            let (lo, hi) = slope_window(family, order);
            let ok = (lo..=hi).contains(&slope);
            println!("    {family} order={order}: slope {slope:.3} window [{lo:.2}, {hi:.2}]");
            if !ok {
                failures.push(format!("{family} order={order} slope {slope:.3}"));
            }
        }
    }
    Outcome::new(failures.is_empty(), format!("outside window: {failures:?}"))
}

fn morley_equivalence() -> Outcome {
    let material = MaterialParams::default();
    let u = PolyField::new(Polynomial2::clamped_bubble());
    let f = u.plate_load(material.rigidity);
    let (mut worst_dofs, mut worst_entry) = (0.0f64, 0.0f64);
    for n in 0..=1 {
        let mesh = MeshFamily::CrissCross.build(n, &MeshOptions::default()).unwrap();
        let vem = solve_manufactured(&mesh, 2, material).unwrap();
        let morley = morley_solve(&mesh, &material, &|p| f.eval(p), &u, default_quadrature_degree(2)).unwrap();
        let scale = morley.dofs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let diff = vem.solution.iter().zip(&morley.dofs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_dofs = worst_dofs.max(diff / scale);
        for cell in &mesh.cells {
            let g = &cell.geometry;
            let vem_k = LocalKernels::new(g, 2, &material).unwrap().stiffness;
            let morley_k = morley_local_stiffness([g.vertices[0], g.vertices[1], g.vertices[2]], &material).unwrap();
            worst_entry = worst_entry.max((vem_k - morley_k).abs().max());
        }
    }
    Outcome::new(
        worst_dofs <= 1e-9 && worst_entry <= 1e-11,
        format!("solution discrepancy {worst_dofs:.3e} (<= 1e-9), stiffness entry difference {worst_entry:.3e} (<= 1e-11)"),
    )
}

fn property_suites() -> Outcome {
    let material = MaterialParams::from_rigidity(2.5, 0.3).unwrap();
    let mut projector_err = [0.0f64; 4];
    let mut worst_psd = f64::INFINITY;
    let mut bad_kernel = Vec::new();
    let mut identity_err = 0.0f64;
    for order in 2..=5 {
        let mut rng = common::rng(1000 + order as u64);
        for trial in 0..100 {
            let cell = common::random_star_polygon(&mut rng);
            let k = LocalKernels::new(&cell, order, &material).unwrap();
            let degree = default_quadrature_degree(order);
            let np = k.basis.dim();
            let dofs: Vec<Vec<f64>> =
                (0..np).map(|a| compute_dofs(&k.basis.monomial(a), &cell, order, degree)).collect();
            for (a, d) in dofs.iter().enumerate() {
                let c = k.project(d);
                let e = c.iter().enumerate().map(|(b, v)| (v - if a == b { 1.0 } else { 0.0 }).abs()).fold(0.0, f64::max);
                projector_err[order - 2] = projector_err[order - 2].max(e);
            }

            let eig = k.stiffness.clone().symmetric_eigenvalues();
            let norm = eig.iter().map(|v| v.abs()).fold(0.0, f64::max);
            worst_psd = worst_psd.min(eig.min() / norm);
            let kernel = eig.iter().filter(|&&v| v <= 1e-10 * norm).count();
            if kernel != 3 {
                bad_kernel.push(format!("order={order} trial={trial}: {kernel}"));
            }

            let mut scale = 0.0f64;
            let mut worst = 0.0f64;
            for beta in 0..np {
                let mb = k.basis.monomial(beta);
                for (g, d) in dofs.iter().enumerate() {
                    let volume = exact_bilinear_poly(&mb, &k.basis.monomial(g), &cell, &material);
                    let boundary: f64 = if beta < 3 {
                        0.0
                    } else {
                        k.rhs.row(beta).iter().zip(d).map(|(b, v)| b * v).sum()
                    };
                    scale = scale.max(volume.abs());
                    worst = worst.max((volume - boundary).abs());
                }
            }
            identity_err = identity_err.max(worst / scale);
        }
    }

    let mut quadrature_err = 0.0f64;
    let mut rng = common::rng(77);
    for trial in 0..100 {
        let cell = common::random_convex_polygon(&mut rng, 3 + trial % 6);
        for degree in 0..=14 {
            let rule = polygon_rule(&cell, degree);
            for (a, b) in exponents(degree) {
                let exact = common::exact_scaled_monomial_integral(&cell.vertices, cell.centroid, cell.diameter, a, b);
                let got = rule.integrate(|p| {
                    ((p.x - cell.centroid.x) / cell.diameter).powi(a as i32)
                        * ((p.y - cell.centroid.y) / cell.diameter).powi(b as i32)
                });
                quadrature_err = quadrature_err.max((got - exact).abs() / cell.area);
            }
        }
    }

    let worst_projector = projector_err.iter().copied().fold(0.0, f64::max);
    let passed = worst_projector <= 1e-12
        && worst_psd >= -1e-10
        && bad_kernel.is_empty()
        && identity_err <= 1e-11
        && quadrature_err <= 1e-13;
    Outcome::new(
        passed,
        format!(
            "projector by order 2..=5 {:.2e} {:.2e} {:.2e} {:.2e} (<= 1e-12), min eig/norm {worst_psd:.2e} (>= -1e-10), \
             kernel != 3 on {:?}, identity {identity_err:.2e} (<= 1e-11), quadrature {quadrature_err:.2e} (<= 1e-13)",
            projector_err[0],
            projector_err[1],
            projector_err[2],
            projector_err[3],
            bad_kernel
        ),
    )
}

fn order_five_rates() -> Outcome {
    let material = MaterialParams::default();
    let options = MeshOptions::default();
    let mut failures = Vec::new();
    for family in MeshFamily::ALL {
        let records = convergence_study(family, 5, 2, material, &options).unwrap();
        let slope = windowed_slope(&records);
        println!("    {family} order=5: slope {slope:.3} window [3.50, 4.50]");
        if !(3.5..=4.5).contains(&slope) {
            failures.push(format!("{family} slope {slope:.3}"));
        }
    }
    Outcome::new(failures.is_empty(), format!("outside window: {failures:?}"))
}

fn main() -> ExitCode {
    let meshes = all_meshes();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 dof counts", Box::new(|| dof_counts(&meshes))),
        ("2 mesh topology", Box::new(|| topology_counts(&meshes))),
        ("3 patch tests", Box::new(patch_tests)),
        ("4 convergence rates", Box::new(convergence_rates)),
        ("5 morley equivalence", Box::new(morley_equivalence)),
        ("6 property suites", Box::new(property_suites)),
        ("7 order five rates", Box::new(order_five_rates)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {} [{:.1?}]", outcome.summary, t.elapsed());
        failed += usize::from(!outcome.passed);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
