use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::geometry::Point2;
use crate::{Error, Result};

use super::topology::derive_topology;
use super::PolygonMesh;

/// On-disk layout: `{"vertices": [[x, y], ...], "cells": [[i0, i1, ...], ...]}`.
#[derive(Clone, Debug, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 2]>,
    pub cells: Vec<Vec<usize>>,
}

/// Serializes with 17 significant digits, so reading back is bit-exact.
pub fn mesh_to_json(mesh: &PolygonMesh) -> String {
    let mut out = String::from("{\n  \"vertices\": [\n");
    for (i, p) in mesh.vertices.iter().enumerate() {
        let sep = if i + 1 == mesh.vertices.len() { "" } else { "," };
        writeln!(out, "    [{:.16e}, {:.16e}]{sep}", p.x, p.y).unwrap();
    }
    out.push_str("  ],\n  \"cells\": [\n");
    for (i, c) in mesh.cells.iter().enumerate() {
        let sep = if i + 1 == mesh.cells.len() { "" } else { "," };
        let ids: Vec<String> = c.vertex_ids.iter().map(|v| v.to_string()).collect();
        writeln!(out, "    [{}]{sep}", ids.join(", ")).unwrap();
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn parse_mesh_json(text: &str) -> Result<PolygonMesh> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if file.cells.is_empty() {
        return Err(Error::Format("cell list is empty".into()));
    }
    let vertices = file.vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect();
    derive_topology(vertices, file.cells)
}

pub fn read_mesh(path: &Path) -> Result<PolygonMesh> {
    parse_mesh_json(&std::fs::read_to_string(path)?)
}

pub fn write_mesh(mesh: &PolygonMesh, path: &Path) -> Result<()> {
    std::fs::write(path, mesh_to_json(mesh))?;
    Ok(())
}
