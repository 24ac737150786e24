//! Covering poset of a commensurability class, emitted as DOT.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use qdc_core::commensurate::maximal_quotient;
use qdc_core::covering::{enumerate_covers, find_coverings};
use qdc_core::isomorphy::canonical_form;
use qdc_core::{Error, ExactField, Result, Surface};

#[derive(Clone, Debug)]
pub struct Node {
    pub label: String,
    pub surface: Surface,
    pub encoding: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct Poset {
    pub nodes: Vec<Node>,
    /// `(cover, covered, degree)`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl Poset {
    /// Nodes: the base, its minimal element, and the covers of the minimal
    /// element of degree `2..=bound`, one per conjugacy class. A bound of
    /// zero keeps only the base.
    pub fn build(base: &Surface, bound: usize, cap: usize) -> Result<Poset> {
        if bound > cap {
            return Err(Error::DegreeCapExceeded { degree: bound, cap });
        }
        let base_label = base.name().unwrap_or("base").to_string();
        let mut candidates = Vec::new();
        if bound == 0 {
            candidates.push((base_label, base.clone()));
        } else {
            let m = maximal_quotient(base)?;
            // the refined base shares cells with the covers of the minimal element
            candidates.push((base_label, m.refined.clone()));
            candidates.push(("minimal".to_string(), m.quotient().clone()));
            for d in 2..=bound {
                for (k, c) in enumerate_covers(m.quotient(), d, cap)?.into_iter().enumerate() {
                    candidates.push((format!("cover{d}.{k}"), c.source().clone()));
                }
            }
        }
        let mut seen = BTreeSet::new();
        let mut nodes = Vec::new();
        for (label, surface) in candidates {
            let encoding = canonical_form(&surface).encoding;
            if seen.insert(encoding.clone()) {
                nodes.push(Node { label, surface, encoding });
            }
        }
        let mut edges = Vec::new();
        for (i, a) in nodes.iter().enumerate() {
            for (j, b) in nodes.iter().enumerate() {
                if i == j {
                    continue;
                }
                if let Some(c) = find_coverings(&a.surface, &b.surface).first() {
                    edges.push((i, j, c.degree()));
                }
            }
        }
        Ok(Poset { nodes, edges })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph commensurability {\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let s = &n.surface;
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}\\narea {}, genus {}, chi_orb {}\"];",
                n.label,
                s.area().to_fraction_string(),
                s.genus(),
                s.orbifold_euler_characteristic().to_fraction_string()
            );
        }
        for &(i, j, d) in &self.edges {
            let _ = writeln!(out, "  n{i} -> n{j} [label=\"{d}\"];");
        }
        out.push_str("}\n");
        out
    }
}
