//! Abelian Rauzy graphs `G_{m,l}` of `t_m` and the sets `Y_{m,R}(l)`,
//! `Y_{m,L}(l)`.
//!
//! A factor `aUb` of length `l + 1` gives an edge `Psi(aU) -> Psi(Ub)` labelled
//! `(a, b)`. Edges are identified by source and label, so different witness
//! factors with the same abelianization give the same edge.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde_json::json;

use crate::error::{Error, Result};
use crate::factors::factor_set;
use crate::word::{Letter, ParikhVector};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: ParikhVector,
    pub a: u8,
    pub b: u8,
}

impl Edge {
    /// `src - e_a + e_b`.
    pub fn target(&self) -> ParikhVector {
        let m = self.src.alphabet_size();
        self.src
            .swap_letter(Letter::new(self.a as i64, m), Letter::new(self.b as i64, m))
            .expect("edge source contains its first label letter")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianRauzyGraph {
    pub m: usize,
    pub order: usize,
    pub vertices: BTreeSet<ParikhVector>,
    pub edges: BTreeSet<Edge>,
}

impl AbelianRauzyGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "m": self.m,
            "order": self.order,
            "vertices": self.vertices.iter().map(|v| v.counts().to_vec()).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "src": e.src.counts(),
                "a": e.a,
                "b": e.b,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<AbelianRauzyGraph> {
        let bad = |what: &str| Error::Parse {
            input: what.to_string(),
            reason: "malformed graph JSON".into(),
        };
        let int = |v: &serde_json::Value, what: &str| {
            v.as_u64().map(|x| x as usize).ok_or_else(|| bad(what))
        };
        let vector = |v: &serde_json::Value| -> Result<ParikhVector> {
            let arr = v.as_array().ok_or_else(|| bad("vector"))?;
            Ok(ParikhVector::new(
                arr.iter().map(|c| int(c, "count")).collect::<Result<_>>()?,
            ))
        };
        let m = int(&value["m"], "m")?;
        let order = int(&value["order"], "order")?;
        let vertices = value["vertices"]
            .as_array()
            .ok_or_else(|| bad("vertices"))?
            .iter()
            .map(vector)
            .collect::<Result<BTreeSet<_>>>()?;
        let edges = value["edges"]
            .as_array()
            .ok_or_else(|| bad("edges"))?
            .iter()
            .map(|e| {
                let letter = |key: &str| -> Result<u8> {
                    let a = int(&e[key], key)?;
                    if a >= m {
                        return Err(Error::LetterOutOfRange { letter: a, m });
                    }
                    Ok(a as u8)
                };
                Ok(Edge {
                    src: vector(&e["src"])?,
                    a: letter("a")?,
                    b: letter("b")?,
                })
            })
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(AbelianRauzyGraph {
            m,
            order,
            vertices,
            edges,
        })
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidArgument("graph order must be >= 1".into()));
    }
    Ok(())
}

pub fn build_graph(m: usize, order: usize) -> Result<AbelianRauzyGraph> {
    check_order(order)?;
    let longer = factor_set(m, order + 1)?;
    let mut vertices: BTreeSet<ParikhVector> = factor_set(m, order)?
        .factors()
        .iter()
        .map(crate::word::parikh)
        .collect();
    let mut edges = BTreeSet::new();
    for f in longer.factors() {
        let w = f.letters();
        let src = ParikhVector::of_slice(m, &w[..order]);
        vertices.insert(src.clone());
        edges.insert(Edge {
            src,
            a: w[0],
            b: w[order],
        });
    }
    Ok(AbelianRauzyGraph {
        m,
        order,
        vertices,
        edges,
    })
}

pub fn edge_count(m: usize, order: usize) -> Result<usize> {
    Ok(build_graph(m, order)?.edge_count())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YSets {
    pub right: BTreeSet<(ParikhVector, u8)>,
    pub left: BTreeSet<(u8, ParikhVector)>,
}

impl YSets {
    /// Size of the tagged disjoint union.
    pub fn total(&self) -> usize {
        self.right.len() + self.left.len()
    }
}

pub fn y_sets(m: usize, order: usize) -> Result<YSets> {
    check_order(order)?;
    let fs = factor_set(m, order + 1)?;
    let mut right = BTreeSet::new();
    let mut left = BTreeSet::new();
    for f in fs.factors() {
        let w = f.letters();
        right.insert((ParikhVector::of_slice(m, &w[..order]), w[order]));
        left.insert((w[0], ParikhVector::of_slice(m, &w[1..])));
    }
    Ok(YSets { right, left })
}

/// Balanced degrees at every vertex and strong connectivity.
pub fn eulerian_check(g: &AbelianRauzyGraph) -> bool {
    let mut balance: BTreeMap<&ParikhVector, i64> = g.vertices.iter().map(|v| (v, 0)).collect();
    let mut forward: BTreeMap<ParikhVector, Vec<ParikhVector>> = BTreeMap::new();
    let mut backward: BTreeMap<ParikhVector, Vec<ParikhVector>> = BTreeMap::new();
    for e in &g.edges {
        let t = e.target();
        if !g.vertices.contains(&t) {
            return false;
        }
        *balance.get_mut(&e.src).unwrap() += 1;
        *balance.get_mut(&t).unwrap() -= 1;
        forward.entry(e.src.clone()).or_default().push(t.clone());
        backward.entry(t).or_default().push(e.src.clone());
    }
    if balance.values().any(|&d| d != 0) {
        return false;
    }
    let Some(start) = g.vertices.iter().next() else {
        return true;
    };
    let reach = |adj: &BTreeMap<ParikhVector, Vec<ParikhVector>>| {
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(v) = queue.pop_front() {
            for t in adj.get(&v).into_iter().flatten() {
                if seen.insert(t.clone()) {
                    queue.push_back(t.clone());
                }
            }
        }
        seen.len()
    };
    reach(&forward) == g.vertices.len() && reach(&backward) == g.vertices.len()
}

/// Whether `v -> v + t(1, .., 1)` maps `G_{m,l}` onto `G_{m,l+tm}`,
/// preserving labels.
pub fn shift_isomorphism_check(m: usize, order: usize, t: usize) -> Result<bool> {
    if t == 0 || order < m || order >= 2 * m {
        return Err(Error::InvalidArgument(format!(
            "shift check needs m <= order < 2m and t >= 1 (m={m}, order={order}, t={t})"
        )));
    }
    let g = build_graph(m, order)?;
    let h = build_graph(m, order + t * m)?;
    let vertices: BTreeSet<ParikhVector> = g.vertices.iter().map(|v| v.shifted(t)).collect();
    let edges: BTreeSet<Edge> = g
        .edges
        .iter()
        .map(|e| Edge {
            src: e.src.shifted(t),
            ..e.clone()
        })
        .collect();
    Ok(vertices == h.vertices && edges == h.edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

const PALETTE: [&str; 8] = [
    "red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "gray40",
];

fn node_id(v: &ParikhVector) -> String {
    let parts: Vec<String> = v.counts().iter().map(|c| c.to_string()).collect();
    format!("v_{}", parts.join("_"))
}

fn tuple(v: &ParikhVector) -> String {
    let parts: Vec<String> = v.counts().iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn export_graph(g: &AbelianRauzyGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => {
            let mut s = serde_json::to_string_pretty(&g.to_json()).unwrap();
            s.push('\n');
            s
        }
        GraphFormat::Dot => {
            let mut s = String::new();
            let _ = writeln!(s, "digraph G_{}_{} {{", g.m, g.order);
            for v in &g.vertices {
                let _ = writeln!(s, "  {} [label=\"{}\"];", node_id(v), tuple(v));
            }
            for e in &g.edges {
                let _ = writeln!(
                    s,
                    "  {} -> {} [label=\"({},{})\", color=\"{}\"];",
                    node_id(&e.src),
                    node_id(&e.target()),
                    e.a,
                    e.b,
                    PALETTE[e.b as usize % PALETTE.len()]
                );
            }
            s.push_str("}\n");
            s
        }
    }
}
