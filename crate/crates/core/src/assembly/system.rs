use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::Result;

use super::dofmap::GlobalDofMap;

/// Reduced symmetric system on the free DOFs.
///
/// `entries` holds the matrix in coordinate form, sorted by `(row, col)`
/// with duplicates already summed, both triangles stored.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    pub size: usize,
    pub entries: Vec<(usize, usize, f64)>,
    pub rhs: Vec<f64>,
    /// Global index of each free DOF.
    pub free_to_global: Vec<usize>,
    /// Full-length vector holding the prescribed values of constrained DOFs
    /// (zero on free DOFs).
    pub prescribed: Vec<f64>,
}

impl SparseSystem {
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.size];
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let lookup: std::collections::HashMap<(usize, usize), f64> =
            self.entries.iter().map(|&(i, j, v)| ((i, j), v)).collect();
        self.entries
            .iter()
            .map(|&(i, j, v)| (v - lookup.get(&(j, i)).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.size, self.size);
        for &(i, j, v) in &self.entries {
            a[(i, j)] += v;
        }
        a
    }

    /// Full-length DOF vector from a solution on the free DOFs.
    pub fn expand(&self, free: &[f64]) -> Vec<f64> {
        let mut full = self.prescribed.clone();
        for (k, &g) in self.free_to_global.iter().enumerate() {
            full[g] = free[k];
        }
        full
    }

    /// One `row col value` line per stored entry, 17 significant digits.
    pub fn matrix_market_like(&self) -> String {
        let mut out = format!("% {} {} {}\n", self.size, self.size, self.nnz());
        for &(i, j, v) in &self.entries {
            writeln!(out, "{i} {j} {v:.16e}").unwrap();
        }
        out
    }

    pub fn write_coordinates(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.matrix_market_like())?;
        Ok(())
    }
}

/// Scatters signed local contributions and eliminates the constrained DOFs.
///
/// `prescribed` gives the values of constrained DOFs (all zero for
/// homogeneous data); `eliminate = false` keeps every DOF free.
pub fn assemble_contributions(
    map: &GlobalDofMap,
    stiffness: &[DMatrix<f64>],
    loads: &[Vec<f64>],
    prescribed: Vec<f64>,
    eliminate: bool,
) -> SparseSystem {
    let constrained = |g: usize| eliminate && map.constrained[g];
    let mut global_to_free = vec![usize::MAX; map.total];
    let mut free_to_global = Vec::new();
    for g in 0..map.total {
        if !constrained(g) {
            global_to_free[g] = free_to_global.len();
            free_to_global.push(g);
        }
    }
    let size = free_to_global.len();
    let mut rhs = vec![0.0; size];
    let mut triplets = Vec::with_capacity(stiffness.iter().map(|k| k.len()).sum());
    for (c, (k, f)) in stiffness.iter().zip(loads).enumerate() {
        let (ids, signs) = (&map.local_to_global[c], &map.signs[c]);
        for i in 0..ids.len() {
            let gi = ids[i];
            if constrained(gi) {
                continue;
            }
            let row = global_to_free[gi];
            rhs[row] += signs[i] * f[i];
            for j in 0..ids.len() {
                let gj = ids[j];
                let v = signs[i] * signs[j] * k[(i, j)];
                if constrained(gj) {
                    rhs[row] -= v * prescribed[gj];
                } else {
                    triplets.push((row, global_to_free[gj], v));
                }
            }
        }
    }
    triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len() / 2);
    for (i, j, v) in triplets {
        match entries.last_mut() {
            Some(last) if last.0 == i && last.1 == j => last.2 += v,
            _ => entries.push((i, j, v)),
        }
    }
    let mut prescribed = prescribed;
    for g in 0..map.total {
        if !constrained(g) {
            prescribed[g] = 0.0;
        }
    }
    SparseSystem { size, entries, rhs, free_to_global, prescribed }
}
