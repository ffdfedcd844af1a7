use super::{decide_exact, Budget, CombinatorialDrawing, ExactVerdict};
use crate::error::{Error, Result};
use crate::map::{Node, PlaneMap};
use crate::prescription::Prescription;
use std::f64::consts::TAU;
use std::fmt::Write;

/// Decide `p` exactly and return its drawing with coordinates attached.
pub fn extract_drawing(p: &Prescription, budget: Budget) -> Result<CombinatorialDrawing> {
    match decide_exact(p, budget) {
        (ExactVerdict::Realizable(d), _) => {
            let mut d = *d;
            attach_coordinates(&mut d)?;
            Ok(d)
        }
        (ExactVerdict::Unrealizable, _) => Err(Error::InvalidInput("prescription has no good drawing".into())),
        (ExactVerdict::BudgetExhausted, stats) => Err(Error::BudgetExhausted { nodes: stats.nodes }),
    }
}

pub fn attach_coordinates(d: &mut CombinatorialDrawing) -> Result<()> {
    let map = d
        .to_map()
        .ok_or_else(|| Error::Violation("rotation system is inconsistent with the segments".into()))?;
    d.coordinates = Some(layout(&map));
    Ok(())
}

/// Straight-line positions for every node of a plane map. Each component gets
/// its largest face on a circle and the rest placed by barycentric relaxation
/// after stellating the inner faces. Components sit side by side.
pub fn layout(map: &PlaneMap) -> Vec<[f64; 2]> {
    let n = map.node_count();
    let mut pos = vec![[0.0, 0.0]; n];
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for d in map.rotation(v) {
                let w = map.head(d);
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        comps.push(members);
    }
    let (face_of, face_count) = map.faces();
    let mut offset = 0.0;
    for members in &comps {
        let local = layout_component(map, members, &face_of, face_count);
        for (&v, p) in members.iter().zip(local) {
            pos[v] = [p[0] + offset, p[1]];
        }
        offset += 2.5;
    }
    pos
}

fn layout_component(map: &PlaneMap, members: &[usize], face_of: &[u32], face_count: usize) -> Vec<[f64; 2]> {
    if members.len() == 1 {
        return vec![[0.0, 0.0]];
    }
    let mut local = vec![usize::MAX; map.node_count()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    // Face walks of this component, by face id.
    let mut walks: Vec<Vec<u32>> = vec![Vec::new(); face_count];
    let mut seen = vec![false; face_count];
    for &v in members {
        for d in map.rotation(v) {
            let f = face_of[d as usize] as usize;
            if !seen[f] {
                seen[f] = true;
                walks[f] = map.face_walk(d);
            }
        }
    }
    let faces: Vec<&Vec<u32>> = walks.iter().filter(|w| !w.is_empty()).collect();
    let outer = faces
        .iter()
        .enumerate()
        .max_by_key(|(i, w)| (w.len(), std::cmp::Reverse(*i)))
        .map(|(i, _)| i)
        .unwrap();

    let k = members.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &v in members {
        for d in map.rotation(v) {
            adj[local[v]].push(local[map.head(d)]);
        }
    }
    for (i, w) in faces.iter().enumerate() {
        if i == outer {
            continue;
        }
        let centre = adj.len();
        adj.push(Vec::new());
        for &d in w.iter() {
            let v = local[map.origin(d)];
            adj[centre].push(v);
            adj[v].push(centre);
        }
    }

    let mut ring = Vec::new();
    for &d in faces[outer].iter() {
        let v = local[map.origin(d)];
        if !ring.contains(&v) {
            ring.push(v);
        }
    }
    let mut fixed = vec![false; adj.len()];
    let mut p = vec![[0.0, 0.0]; adj.len()];
    let r = ring.len() as f64;
    for (i, &v) in ring.iter().enumerate() {
        // Clockwise on screen so that the outer face walk reads naturally.
        let a = TAU * i as f64 / r;
        p[v] = [a.cos(), -a.sin()];
        fixed[v] = true;
    }
    for _ in 0..20_000 {
        let mut moved: f64 = 0.0;
        for v in 0..adj.len() {
            if fixed[v] || adj[v].is_empty() {
                continue;
            }
            let mut s = [0.0, 0.0];
            for &w in &adj[v] {
                s[0] += p[w][0];
                s[1] += p[w][1];
            }
            let m = adj[v].len() as f64;
            let q = [s[0] / m, s[1] / m];
            moved = moved.max((q[0] - p[v][0]).abs() + (q[1] - p[v][1]).abs());
            p[v] = q;
        }
        if moved < 1e-10 {
            break;
        }
    }
    p.truncate(k);
    p
}

/// SVG picture of a drawing with coordinates: edges as polylines, vertices as
/// labelled dots, crossings as small red marks, and a caption with the host
/// name and crossing count.
pub fn render_svg(d: &CombinatorialDrawing) -> Result<String> {
    let map = d
        .to_map()
        .ok_or_else(|| Error::Violation("rotation system is inconsistent with the segments".into()))?;
    let coords = match &d.coordinates {
        Some(c) if c.len() == d.nodes.len() => c.clone(),
        _ => layout(&map),
    };
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for c in &coords {
        for i in 0..2 {
            lo[i] = lo[i].min(c[i]);
            hi[i] = hi[i].max(c[i]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let size = 560.0;
    let margin = 30.0;
    let width = (hi[0] - lo[0]) / span * size + 2.0 * margin;
    let height = (hi[1] - lo[1]) / span * size + 2.0 * margin + 30.0;
    let at = |v: usize| {
        [
            margin + (coords[v][0] - lo[0]) / span * size,
            margin + (coords[v][1] - lo[1]) / span * size,
        ]
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let m = d.graph.edge_count().max(1);
    for (e, &(u, _)) in d.graph.edges().iter().enumerate() {
        let path = match map.edge_path(e, u) {
            Some(p) => p,
            None => continue,
        };
        let mut pts = vec![at(u)];
        for &dart in &path {
            pts.push(at(map.head(dart)));
        }
        let list: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", p[0], p[1])).collect();
        let hue = (e * 360 / m) as u32;
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="hsl({hue},70%,40%)" stroke-width="1.6"><title>edge {e}</title></polyline>"#,
            list.join(" ")
        );
    }
    for (v, node) in d.nodes.iter().enumerate() {
        let p = at(v);
        match node {
            Node::Crossing(..) => {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.2" fill="red"/>"#, p[0], p[1]);
            }
            Node::Vertex(x) => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="5" fill="black"/><text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{x}</text>"#,
                    p[0],
                    p[1],
                    p[0] + 6.0,
                    p[1] - 6.0
                );
            }
        }
    }
    let crossings = d.crossing_count();
    let noun = if crossings == 1 { "crossing" } else { "crossings" };
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="16" font-family="sans-serif" text-anchor="middle">{}: {crossings} {noun}</text>"#,
        width / 2.0,
        height - 12.0,
        escape(d.graph.name())
    );
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// True when no two segments of the planarization meet in the plane apart
/// from shared end nodes, and no two nodes coincide.
pub fn coordinates_are_plane(d: &CombinatorialDrawing) -> bool {
    let c = match &d.coordinates {
        Some(c) if c.len() == d.nodes.len() => c,
        _ => return false,
    };
    let eps = 1e-9;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if (c[i][0] - c[j][0]).abs() + (c[i][1] - c[j][1]).abs() < eps {
                return false;
            }
        }
    }
    let orient = |a: [f64; 2], b: [f64; 2], p: [f64; 2]| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    for (i, s) in d.segments.iter().enumerate() {
        for t in &d.segments[i + 1..] {
            let shared = [t.from, t.to].iter().filter(|x| **x == s.from || **x == s.to).count();
            let (a, b, p, q) = (c[s.from], c[s.to], c[t.from], c[t.to]);
            let (o1, o2, o3, o4) = (orient(a, b, p), orient(a, b, q), orient(p, q, a), orient(p, q, b));
            if shared == 0 {
                if o1 * o2 <= 0.0 && o3 * o4 <= 0.0 && !(o1 == 0.0 && o2 == 0.0 && !overlap(a, b, p, q)) {
                    return false;
                }
            } else if shared == 1 && o1.abs() < eps && o2.abs() < eps && o3.abs() < eps && o4.abs() < eps {
                // Collinear segments sharing an end must point in different directions.
                let s_end = if s.from == t.from || s.from == t.to { s.from } else { s.to };
                let s_other = if s_end == s.from { s.to } else { s.from };
                let t_other = if s_end == t.from { t.to } else { t.from };
                let u = [c[s_other][0] - c[s_end][0], c[s_other][1] - c[s_end][1]];
                let v = [c[t_other][0] - c[s_end][0], c[t_other][1] - c[s_end][1]];
                if u[0] * v[0] + u[1] * v[1] > 0.0 {
                    return false;
                }
            }
        }
    }
    true
}

fn overlap(a: [f64; 2], b: [f64; 2], p: [f64; 2], q: [f64; 2]) -> bool {
    let within = |x: [f64; 2], y: [f64; 2], z: [f64; 2]| {
        z[0] >= x[0].min(y[0]) && z[0] <= x[0].max(y[0]) && z[1] >= x[1].min(y[1]) && z[1] <= x[1].max(y[1])
    };
    within(a, b, p) || within(a, b, q) || within(p, q, a) || within(p, q, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_named;
    use crate::realize::verify_drawing;

    #[test]
    fn pentagram_has_coordinates_and_caption() {
        let g = build_named("cycle", &[5]).unwrap();
        let d = extract_drawing(&Prescription::full(&g), Budget::UNLIMITED).unwrap();
        let c = d.coordinates.as_ref().unwrap();
        assert_eq!(c.len(), 10);
        assert!(c.iter().all(|p| p[0].is_finite() && p[1].is_finite()));
        assert_eq!(verify_drawing(&d, &g).unwrap().count, 5);
        let svg = render_svg(&d).unwrap();
        assert!(svg.contains("5 crossings"));
        assert_eq!(svg.matches("<polyline").count(), 5);
    }

    #[test]
    fn unrealizable_input_is_rejected() {
        let g = build_named("cycle", &[4]).unwrap();
        assert!(extract_drawing(&Prescription::full(&g), Budget::UNLIMITED).is_err());
    }

    #[test]
    fn plane_drawing_of_a_planar_graph() {
        let g = build_named("prism", &[]).unwrap();
        let idx = crate::graph::PairIndex::new(&g);
        let all = crate::prescription::MissedPairSet::from_bits(&idx, crate::bits::PairSet::full(idx.len())).unwrap();
        let p = Prescription::from_missed(&g, &idx, &all).unwrap();
        let d = extract_drawing(&p, Budget::UNLIMITED).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert!(render_svg(&d).unwrap().contains("0 crossings"));
    }
}
