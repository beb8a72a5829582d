use std::f64::consts::{PI, TAU};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{CellGeometry, Point2};
use crate::{Error, Result};

use super::topology::derive_topology;
use super::PolygonMesh;

/// Depth of the octagon notches relative to the grid spacing.
pub const DEFAULT_NOTCH_RATIO: f64 = 0.2;
/// Side of the random perturbation box relative to the grid spacing.
pub const DEFAULT_PERTURBATION: f64 = 0.8;

const MAX_REDRAWS: usize = 64;

/// Grid resolution of refinement level `n`: 5 for `n = 0`, else `10 n`.
pub fn resolution(n: usize) -> usize {
    if n == 0 {
        5
    } else {
        10 * n
    }
}

fn grid_points(r: usize) -> Vec<Point2> {
    let s = 1.0 / r as f64;
    let mut v = Vec::with_capacity((r + 1) * (r + 1));
    for j in 0..=r {
        for i in 0..=r {
            v.push(Point2::new(i as f64 * s, j as f64 * s));
        }
    }
    v
}

fn expect_valid(mesh: Result<PolygonMesh>) -> PolygonMesh {
    mesh.unwrap_or_else(|e| panic!("generated mesh failed validation: {e}"))
}

/// Square grid with every square split into four triangles through its centre.
pub fn build_criss_cross(n: usize) -> PolygonMesh {
    expect_valid(criss_cross_with_resolution(resolution(n)))
}

pub(crate) fn criss_cross_with_resolution(r: usize) -> Result<PolygonMesh> {
    let s = 1.0 / r as f64;
    let mut vertices = grid_points(r);
    let node = |i: usize, j: usize| j * (r + 1) + i;
    let mut cells = Vec::with_capacity(4 * r * r);
    for j in 0..r {
        for i in 0..r {
            let c = vertices.len();
            vertices.push(Point2::new((i as f64 + 0.5) * s, (j as f64 + 0.5) * s));
            let (a, b, d, e) = (node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1));
            cells.extend([vec![a, b, c], vec![b, d, c], vec![d, e, c], vec![e, a, c]]);
        }
    }
    derive_topology(vertices, cells)
}

/// Polygonal dual of a smoothly remapped triangulated grid. There is one
/// (mostly hexagonal) cell per primal vertex.
pub fn build_remapped_hexagonal(n: usize) -> PolygonMesh {
    expect_valid(hexagonal_with_resolution(resolution(n)))
}

fn remap(p: Point2) -> Point2 {
    let bump = 0.1 * (TAU * p.x).sin() * (TAU * p.y).sin();
    Point2::new(p.x + bump, p.y + bump)
}

pub(crate) fn hexagonal_with_resolution(r: usize) -> Result<PolygonMesh> {
    let primal: Vec<Point2> = grid_points(r).into_iter().map(remap).collect();
    let node = |i: usize, j: usize| j * (r + 1) + i;
    let on_boundary = |i: usize, j: usize| i == 0 || j == 0 || i == r || j == r;

    // each square is cut along its (i+1, j)–(i, j+1) diagonal
    let mut triangles: Vec<[usize; 3]> = Vec::with_capacity(2 * r * r);
    for j in 0..r {
        for i in 0..r {
            let (a, b, c, d) = (node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1));
            triangles.push([a, b, d]);
            triangles.push([b, c, d]);
        }
    }

    let mut vertices: Vec<Point2> = triangles
        .iter()
        .map(|t| (primal[t[0]] + primal[t[1]] + primal[t[2]]) * (1.0 / 3.0))
        .collect();

    // boundary primal edges, keyed by their sorted endpoints
    let mut boundary_mid = std::collections::HashMap::new();
    let mut incident_mids: Vec<Vec<usize>> = vec![Vec::new(); primal.len()];
    let mut add_boundary_edge = |a: usize, b: usize, vertices: &mut Vec<Point2>| {
        let id = vertices.len();
        vertices.push((primal[a] + primal[b]) * 0.5);
        boundary_mid.insert((a.min(b), a.max(b)), id);
        incident_mids[a].push(id);
        incident_mids[b].push(id);
    };
    for k in 0..r {
        add_boundary_edge(node(k, 0), node(k + 1, 0), &mut vertices);
        add_boundary_edge(node(r, k), node(r, k + 1), &mut vertices);
        add_boundary_edge(node(k, r), node(k + 1, r), &mut vertices);
        add_boundary_edge(node(0, k), node(0, k + 1), &mut vertices);
    }
    let mut corner_vertex = vec![usize::MAX; primal.len()];
    for j in 0..=r {
        for i in 0..=r {
            if on_boundary(i, j) {
                corner_vertex[node(i, j)] = vertices.len();
                vertices.push(primal[node(i, j)]);
            }
        }
    }

    let mut incident_tris: Vec<Vec<usize>> = vec![Vec::new(); primal.len()];
    for (t, tri) in triangles.iter().enumerate() {
        for &v in tri {
            incident_tris[v].push(t);
        }
    }

    let mut cells = Vec::with_capacity(primal.len());
    for j in 0..=r {
        for i in 0..=r {
            let p = node(i, j);
            let centre = primal[p];
            let mut ring: Vec<(f64, usize)> = incident_tris[p]
                .iter()
                .chain(&incident_mids[p])
                .map(|&d| {
                    let v = vertices[d] - centre;
                    (v.y.atan2(v.x), d)
                })
                .collect();
            ring.sort_by(|a, b| a.0.total_cmp(&b.0));
            if on_boundary(i, j) {
                // the primal vertex closes the ring across the widest angular gap
                let m = ring.len();
                let gap = |k: usize| {
                    let next = ring[(k + 1) % m].0 + if k + 1 == m { TAU } else { 0.0 };
                    next - ring[k].0
                };
                let widest = (0..m).max_by(|&a, &b| gap(a).total_cmp(&gap(b))).unwrap();
                ring.rotate_left((widest + 1) % m);
                ring.push((PI, corner_vertex[p]));
            }
            cells.push(ring.into_iter().map(|(_, d)| d).collect());
        }
    }
    derive_topology(vertices, cells)
}

/// Square grid with a midpoint on every edge. Interior midpoints are pushed
/// off their edge by `notch_ratio` times the spacing with alternating sign,
/// so every cell is a non-convex octagon and neighbours still tile.
pub fn build_nonconvex_octagonal(n: usize, notch_ratio: f64) -> Result<PolygonMesh> {
    octagonal_with_resolution(resolution(n), notch_ratio)
}

pub(crate) fn octagonal_with_resolution(r: usize, notch_ratio: f64) -> Result<PolygonMesh> {
    if !(notch_ratio > 0.0 && notch_ratio < 0.5) {
        return Err(Error::Config(format!("notch ratio {notch_ratio} outside (0, 0.5)")));
    }
    let s = 1.0 / r as f64;
    let delta = notch_ratio * s;
    let parity = |i: usize, j: usize| if (i + j) % 2 == 0 { 1.0 } else { -1.0 };

    let mut vertices = grid_points(r);
    let node = |i: usize, j: usize| j * (r + 1) + i;
    // midpoint of the horizontal edge in column i on grid line j
    let hbase = vertices.len();
    for j in 0..=r {
        for i in 0..r {
            let dy = if j == 0 || j == r { 0.0 } else { delta * parity(i, j) };
            vertices.push(Point2::new((i as f64 + 0.5) * s, j as f64 * s + dy));
        }
    }
    let hmid = |i: usize, j: usize| hbase + j * r + i;
    // midpoint of the vertical edge on grid line i in row j
    let vbase = vertices.len();
    for i in 0..=r {
        for j in 0..r {
            let dx = if i == 0 || i == r { 0.0 } else { -delta * parity(i, j) };
            vertices.push(Point2::new(i as f64 * s + dx, (j as f64 + 0.5) * s));
        }
    }
    let vmid = |i: usize, j: usize| vbase + i * r + j;

    let mut cells = Vec::with_capacity(r * r);
    for j in 0..r {
        for i in 0..r {
            cells.push(vec![
                node(i, j),
                hmid(i, j),
                node(i + 1, j),
                vmid(i + 1, j),
                node(i + 1, j + 1),
                hmid(i, j + 1),
                node(i, j + 1),
                vmid(i, j),
            ]);
        }
    }
    derive_topology(vertices, cells)
}

/// Uniform `[0, 1)` double from the top 53 bits of a word.
fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Square grid whose interior nodes are moved uniformly inside a box of side
/// `perturbation` times the spacing. Node `k` draws from its own ChaCha8
/// stream, so the result depends only on `(n, seed, perturbation)`.
pub fn build_randomized_quadrilateral(n: usize, seed: u64, perturbation: f64) -> Result<PolygonMesh> {
    randomized_with_resolution(resolution(n), seed, perturbation)
}

pub(crate) fn randomized_with_resolution(r: usize, seed: u64, perturbation: f64) -> Result<PolygonMesh> {
    if !(0.0..1.0).contains(&perturbation) {
        return Err(Error::Config(format!("perturbation {perturbation} outside [0, 1)")));
    }
    let s = 1.0 / r as f64;
    let base = grid_points(r);
    let node = |i: usize, j: usize| j * (r + 1) + i;
    let mut streams: Vec<Option<ChaCha8Rng>> = (0..base.len())
        .map(|k| {
            let (i, j) = (k % (r + 1), k / (r + 1));
            (i > 0 && j > 0 && i < r && j < r).then(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                rng
            })
        })
        .collect();
    let mut draw = |k: usize| -> Point2 {
        match streams[k].as_mut() {
            Some(rng) => {
                let dx = (unit_f64(rng.next_u64()) - 0.5) * perturbation * s;
                let dy = (unit_f64(rng.next_u64()) - 0.5) * perturbation * s;
                base[k] + Point2::new(dx, dy)
            }
            None => base[k],
        }
    };
    let mut vertices: Vec<Point2> = (0..base.len()).map(&mut draw).collect();

    let mut cells = Vec::with_capacity(r * r);
    for j in 0..r {
        for i in 0..r {
            cells.push(vec![node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)]);
        }
    }
    for _ in 0..MAX_REDRAWS {
        let bad: Vec<usize> = cells
            .iter()
            .filter(|c| CellGeometry::new(c.iter().map(|&v| vertices[v]).collect()).is_err())
            .flat_map(|c| c.iter().copied())
            .collect();
        if bad.is_empty() {
            return derive_topology(vertices, cells);
        }
        let mut redo = bad;
        redo.sort_unstable();
        redo.dedup();
        for k in redo {
            vertices[k] = draw(k);
        }
    }
    Err(Error::Mesh(format!("no valid randomized quadrilateral mesh after {MAX_REDRAWS} redraws")))
}
