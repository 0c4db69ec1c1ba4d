use super::CopInstance;
use crate::error::{Error, Result};

/// Maximum k-colorable subgraph as monochromatic-edge minimization:
/// `c2(i, j, v, v) = 1` for every edge and color.
pub fn mkcs_instance(edges: &[(usize, usize)], num_vertices: usize, k: usize) -> Result<CopInstance> {
    let mut inst = CopInstance::new(num_vertices, k)?;
    for &(i, j) in edges {
        if i == j || i >= num_vertices || j >= num_vertices {
            return Err(Error::InvalidPair(i, j));
        }
        for v in 0..k {
            inst.add_quadratic(i, j, v, v, 1.0)?;
        }
    }
    let labels = (0..k).map(|c| format!("color {c}")).collect();
    let vertices = (0..num_vertices).map(|v| format!("vertex {v}")).collect();
    Ok(inst
        .with_value_labels(labels)?
        .with_variable_labels(vertices)?
        .with_metadata(format!(
            "max-{k}-colorable subgraph: {num_vertices} vertices, {} edges",
            edges.len()
        )))
}

/// Five vertices, nine edges: the complete graph minus the edge (3, 4).
pub fn mkcs_benchmark_edges() -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(9);
    for i in 0..5 {
        for j in i + 1..5 {
            if (i, j) != (3, 4) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// The benchmark graph colored with four colors.
pub fn mkcs_benchmark_instance() -> CopInstance {
    mkcs_instance(&mkcs_benchmark_edges(), 5, 4).expect("benchmark graph is valid")
}
