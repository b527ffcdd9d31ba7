//! Lattice serialization: JSON (schema v1) and Graphviz DOT of the vertex-edge
//! graph. Both outputs are byte-stable: nodes, faces and object keys are sorted.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::FaceLattice;
use crate::partition::{Partition, SignedVector};

pub const LATTICE_SCHEMA: &str = "radon-lattice/v1";

/// JSON document of the lattice.
pub fn lattice_to_json(lat: &FaceLattice) -> Result<String> {
    let vertices: Vec<Value> = sorted_vertices(lat)
        .into_iter()
        .map(|(p, v)| {
            json!({
                "label": p.label(),
                "a": p.a(),
                "b": p.b(),
                "coords": v.coords(),
            })
        })
        .collect();
    let faces: Vec<Value> = lat
        .faces_by_dim
        .iter()
        .enumerate()
        .map(|(g, level)| {
            let mut labels: Vec<String> = level.iter().map(Partition::label).collect();
            labels.sort();
            json!({ "dim": g, "labels": labels })
        })
        .collect();
    let doc = json!({
        "schema": LATTICE_SCHEMA,
        "n": lat.n_total,
        "d": lat.d,
        "f_vector": lat.f_vector(),
        "vertices": vertices,
        "faces": faces,
        "edges": edge_labels(lat)?,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses a document written by [`lattice_to_json`].
pub fn lattice_from_json(text: &str) -> Result<FaceLattice> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = |k: &str| doc.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
    if field("schema")? != LATTICE_SCHEMA {
        return Err(Error::Parse(format!("expected schema {LATTICE_SCHEMA}")));
    }
    let as_usize = |v: &Value| {
        v.as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| Error::Parse(format!("expected an integer, got {v}")))
    };
    let n = as_usize(field("n")?)?;
    let d = as_usize(field("d")?)?;
    let parse_vec = |v: &Value| -> Result<Vec<usize>> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
    };
    let mut vertices = Vec::new();
    for v in array(field("vertices")?)? {
        let a = parse_vec(&v["a"])?;
        let b = parse_vec(&v["b"])?;
        let coords: Vec<f64> =
            serde_json::from_value(v["coords"].clone()).map_err(|e| Error::Parse(e.to_string()))?;
        vertices.push((Partition::new(n, &a, &b)?, SignedVector::new(coords)?));
    }
    vertices.sort_by_key(|x| x.0);
    let mut faces_by_dim = Vec::new();
    for level in array(field("faces")?)? {
        let mut parts = Vec::new();
        for label in array(&level["labels"])? {
            let label = label
                .as_str()
                .ok_or_else(|| Error::Parse("face label must be a string".into()))?;
            parts.push(Partition::parse_label(n, label)?);
        }
        parts.sort();
        faces_by_dim.push(parts);
    }
    Ok(FaceLattice {
        n_total: n,
        d,
        vertices,
        faces_by_dim,
    })
}

/// Undirected vertex-edge graph with `"A,B"` node labels.
pub fn lattice_to_dot(lat: &FaceLattice) -> Result<String> {
    let mut nodes: Vec<String> = lat.vertices.iter().map(|(p, _)| p.label()).collect();
    nodes.sort();
    let mut out = String::from("graph radon_polytope {\n");
    for node in &nodes {
        out.push_str(&format!("  \"{node}\";\n"));
    }
    for [u, v] in edge_labels(lat)? {
        out.push_str(&format!("  \"{u}\" -- \"{v}\";\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

fn array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array, got {v}")))
}

fn sorted_vertices(lat: &FaceLattice) -> Vec<&(Partition, SignedVector)> {
    let mut v: Vec<_> = lat.vertices.iter().collect();
    v.sort_by_key(|(p, _)| p.label());
    v
}

fn edge_labels(lat: &FaceLattice) -> Result<Vec<[String; 2]>> {
    let mut edges: Vec<[String; 2]> = lat
        .edges()?
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (lat.vertices[u].0.label(), lat.vertices[v].0.label());
            if a <= b {
                [a, b]
            } else {
                [b, a]
            }
        })
        .collect();
    edges.sort();
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::line;

    #[test]
    fn octagon_dot() {
        let lat = line(4).unwrap().face_lattice().unwrap();
        let dot = lattice_to_dot(&lat).unwrap();
        assert_eq!(dot.matches(" -- ").count(), 8);
        assert_eq!(dot.lines().filter(|l| l.ends_with("\";") && !l.contains("--")).count(), 8);
        assert_eq!(dot, lattice_to_dot(&lat).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let lat = line(5).unwrap().face_lattice().unwrap();
        let text = lattice_to_json(&lat).unwrap();
        assert!(text.contains("\"label\": \"14,3\""));
        let back = lattice_from_json(&text).unwrap();
        assert_eq!(back, lat);
        assert_eq!(lattice_to_json(&back).unwrap(), text);
    }
}
