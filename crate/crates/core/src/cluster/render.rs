//! Schematic Enriques diagrams.
//!
//! Edges from a point to its first-neighbourhood successors carry
//! `enriques="curved"` when the successor is free and `enriques="straight"`
//! when it is a satellite. A satellite's second proximity is drawn as a
//! dotted, non-constraining edge.

use std::fmt::Write;
use std::str::FromStr;

use super::{Cluster, PointKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Dot,
    Text,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(RenderFormat::Dot),
            "text" => Ok(RenderFormat::Text),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

pub fn render(cluster: &Cluster, format: RenderFormat) -> String {
    match format {
        RenderFormat::Dot => render_dot(cluster),
        RenderFormat::Text => render_text(cluster),
    }
}

fn render_text(cluster: &Cluster) -> String {
    let mut out = String::new();
    for p in cluster.points() {
        let label = |id: super::PointId| cluster.point(id).label.to_string();
        let parent = p.parent.map_or_else(|| "-".to_string(), label);
        let prox = if p.proximate_to.is_empty() {
            "-".to_string()
        } else {
            p.proximate_to.iter().map(|&q| label(q)).collect::<Vec<_>>().join(",")
        };
        writeln!(
            out,
            "{}\t{}\tv={}\tparent={}\tproximate={}",
            p.label,
            p.kind(),
            cluster.value(p.id),
            parent,
            prox
        )
        .unwrap();
    }
    out
}

fn render_dot(cluster: &Cluster) -> String {
    let mut out = String::from("digraph enriques {\n  node [shape=circle];\n");
    for p in cluster.points() {
        let l = p.label;
        writeln!(
            out,
            "  p{} [label=\"{},{},{}\\nv={}\", block={}, row={}, pos={}];",
            p.id.0,
            l.block,
            l.row,
            l.pos,
            cluster.value(p.id),
            l.block,
            l.row,
            l.pos
        )
        .unwrap();
    }
    for p in cluster.points() {
        let Some(parent) = p.parent else { continue };
        let shape = match p.kind() {
            PointKind::Free => "curved",
            PointKind::Satellite => "straight",
        };
        writeln!(out, "  p{} -> p{} [enriques=\"{shape}\"];", parent.0, p.id.0).unwrap();
    }
    for p in cluster.points() {
        for q in p.proximate_to.iter().skip(1) {
            writeln!(
                out,
                "  p{} -> p{} [enriques=\"proximity\", style=dotted, constraint=false];",
                p.id.0, q.0
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
