//! Half-edge representation of a planarized drawing.
//!
//! Nodes are original vertices (ids `0..n`) followed by crossing nodes. Every
//! segment of the planarization is a pair of darts `2s` and `2s + 1`; `next`
//! gives the counter-clockwise successor of a dart around its origin. A face
//! is traced by `d -> next[twin(d)]`, and the corner `(v, d)` is the angular
//! sector from `d` counter-clockwise to `next[d]`; it lies on the face that
//! contains `twin(d)` and `next[d]`.

use serde::{Deserialize, Serialize};

pub const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Vertex(usize),
    /// Crossing of two original edges, smaller index first.
    Crossing(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneMap {
    pub(crate) nodes: Vec<Node>,
    pub(crate) origin: Vec<u16>,
    pub(crate) next: Vec<u32>,
    pub(crate) prev: Vec<u32>,
    pub(crate) label: Vec<u8>,
    pub(crate) first: Vec<u32>,
    alive: Vec<bool>,
}

#[inline]
pub fn twin(d: u32) -> u32 {
    d ^ 1
}

impl PlaneMap {
    /// A map with `n` isolated original vertices.
    pub fn new(n: usize) -> PlaneMap {
        PlaneMap {
            nodes: (0..n).map(Node::Vertex).collect(),
            origin: Vec::new(),
            next: Vec::new(),
            prev: Vec::new(),
            label: Vec::new(),
            first: vec![NIL; n],
            alive: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, v: usize) -> Node {
        self.nodes[v]
    }

    pub fn dart_count(&self) -> usize {
        self.origin.len()
    }

    pub fn segment_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn origin(&self, d: u32) -> usize {
        self.origin[d as usize] as usize
    }

    pub fn head(&self, d: u32) -> usize {
        self.origin[twin(d) as usize] as usize
    }

    pub fn next(&self, d: u32) -> u32 {
        self.next[d as usize]
    }

    pub fn prev(&self, d: u32) -> u32 {
        self.prev[d as usize]
    }

    pub fn label(&self, d: u32) -> usize {
        self.label[d as usize] as usize
    }

    pub fn first_dart(&self, v: usize) -> Option<u32> {
        match self.first[v] {
            NIL => None,
            d => Some(d),
        }
    }

    pub fn is_alive(&self, d: u32) -> bool {
        self.alive[(d >> 1) as usize]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation(v).len()
    }

    /// Darts leaving `v` in counter-clockwise order.
    pub fn rotation(&self, v: usize) -> Vec<u32> {
        let mut out = Vec::new();
        if let Some(start) = self.first_dart(v) {
            let mut d = start;
            loop {
                out.push(d);
                d = self.next[d as usize];
                if d == start {
                    break;
                }
            }
        }
        out
    }

    #[inline]
    pub fn face_next(&self, d: u32) -> u32 {
        self.next[twin(d) as usize]
    }

    /// Darts of the face containing `d`, starting at `d`.
    pub fn face_walk(&self, d: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut x = d;
        loop {
            out.push(x);
            x = self.face_next(x);
            if x == d {
                break;
            }
        }
        out
    }

    /// Face containing the corner `(origin(d), d)`.
    pub fn corner_face(&self, d: u32) -> Vec<u32> {
        self.face_walk(self.next[d as usize])
    }

    pub fn add_node(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.first.push(NIL);
        self.nodes.len() - 1
    }

    fn link_after(&mut self, d: u32, v: usize, after: Option<u32>) {
        self.origin[d as usize] = v as u16;
        match after {
            None => {
                debug_assert_eq!(self.first[v], NIL);
                self.next[d as usize] = d;
                self.prev[d as usize] = d;
                self.first[v] = d;
            }
            Some(a) => {
                debug_assert_eq!(self.origin(a), v);
                let b = self.next[a as usize];
                self.next[a as usize] = d;
                self.prev[d as usize] = a;
                self.next[d as usize] = b;
                self.prev[b as usize] = d;
            }
        }
    }

    fn unlink(&mut self, d: u32) {
        let v = self.origin(d);
        let (p, n) = (self.prev[d as usize], self.next[d as usize]);
        if n == d {
            self.first[v] = NIL;
        } else {
            self.next[p as usize] = n;
            self.prev[n as usize] = p;
            if self.first[v] == d {
                self.first[v] = n;
            }
        }
    }

    /// Add a segment `u -> v` placed in corner `(u, after_u)` and `(v, after_v)`;
    /// `None` is only valid for an isolated endpoint. Returns the dart `u -> v`.
    pub fn add_segment(&mut self, u: usize, after_u: Option<u32>, v: usize, after_v: Option<u32>, label: usize) -> u32 {
        let d = self.origin.len() as u32;
        self.origin.extend([0, 0]);
        self.next.extend([NIL, NIL]);
        self.prev.extend([NIL, NIL]);
        self.label.extend([label as u8, label as u8]);
        self.alive.push(true);
        self.link_after(d, u, after_u);
        self.link_after(d + 1, v, after_v);
        d
    }

    /// Split the segment of `y` (`a -> b`) at a new node `c`. Afterwards `y` is
    /// `a -> c`; the returned dart is `c -> b`.
    pub fn subdivide(&mut self, y: u32, node: Node) -> (usize, u32) {
        let c = self.add_node(node);
        let ty = twin(y);
        let b = self.origin(ty);
        let label = self.label(y);
        // New segment z = c -> b, twin(z) = b -> c takes ty's place at b.
        let z = self.origin.len() as u32;
        self.origin.extend([c as u16, b as u16]);
        self.next.extend([NIL, NIL]);
        self.prev.extend([NIL, NIL]);
        self.label.extend([label as u8, label as u8]);
        self.alive.push(true);
        let tz = twin(z);
        // splice tz into ty's slot at b
        let (p, n) = (self.prev[ty as usize], self.next[ty as usize]);
        if n == ty {
            self.next[tz as usize] = tz;
            self.prev[tz as usize] = tz;
        } else {
            self.next[p as usize] = tz;
            self.prev[tz as usize] = p;
            self.next[tz as usize] = n;
            self.prev[n as usize] = tz;
        }
        if self.first[b] == ty {
            self.first[b] = tz;
        }
        // ty becomes c -> a; c's rotation is {ty, z}.
        self.origin[ty as usize] = c as u16;
        self.next[ty as usize] = z;
        self.prev[ty as usize] = z;
        self.next[z as usize] = ty;
        self.prev[z as usize] = ty;
        self.first[c] = ty;
        (c, z)
    }

    /// Ordered darts of the path drawn for original edge `e` from vertex `from`,
    /// or `None` if `e` is not drawn.
    pub fn edge_path(&self, e: usize, from: usize) -> Option<Vec<u32>> {
        let start = self.rotation(from).into_iter().find(|&d| self.label(d) == e)?;
        let mut path = vec![start];
        let mut d = start;
        while let Node::Crossing(..) = self.nodes[self.head(d)] {
            let back = twin(d);
            // Continue opposite the incoming dart: two steps around a degree-4 node.
            let cont = self.next[self.next[back as usize] as usize];
            let cont = if self.label(cont) == e {
                cont
            } else {
                // Degree-3 crossing node during insertion; find the other e-dart.
                self.rotation(self.head(d))
                    .into_iter()
                    .find(|&x| x != back && self.label(x) == e)?
            };
            path.push(cont);
            d = cont;
        }
        Some(path)
    }

    /// Face id per dart and the number of faces.
    pub fn faces(&self) -> (Vec<u32>, usize) {
        let mut face = vec![NIL; self.origin.len()];
        let mut count = 0;
        for d in 0..self.origin.len() as u32 {
            if !self.is_alive(d) || face[d as usize] != NIL {
                continue;
            }
            let mut x = d;
            loop {
                face[x as usize] = count as u32;
                x = self.face_next(x);
                if x == d {
                    break;
                }
            }
            count += 1;
        }
        (face, count)
    }

    /// Connected components among nodes that have at least one dart.
    pub fn component_count(&self) -> usize {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for s in 0..self.alive.len() {
            if self.alive[s] {
                let a = find(&mut parent, self.origin[2 * s] as usize);
                let b = find(&mut parent, self.origin[2 * s + 1] as usize);
                parent[a] = b;
            }
        }
        (0..n)
            .filter(|&v| self.first[v] != NIL)
            .filter(|&v| find(&mut parent, v) == v)
            .count()
    }

    /// Euler check per component: `V - E + F = 2C` over non-isolated nodes.
    pub fn euler_holds(&self) -> bool {
        let v = (0..self.nodes.len()).filter(|&v| self.first[v] != NIL).count() as i64;
        let e = self.segment_count() as i64;
        let f = self.faces().1 as i64;
        let c = self.component_count() as i64;
        v - e + f == 2 * c
    }

    /// Remove every segment of original edge `e` and smooth the crossing
    /// nodes it leaves behind. Node and dart ids are compacted afterwards.
    pub fn remove_edge(&mut self, e: usize) {
        let darts: Vec<u32> = (0..self.origin.len() as u32)
            .filter(|&d| d & 1 == 0 && self.is_alive(d) && self.label(d) == e)
            .collect();
        let mut touched = Vec::new();
        for d in darts {
            for x in [d, twin(d)] {
                let v = self.origin(x);
                if let Node::Crossing(..) = self.nodes[v] {
                    touched.push(v);
                }
                self.unlink(x);
            }
            self.alive[(d >> 1) as usize] = false;
        }
        touched.sort_unstable();
        touched.dedup();
        for c in touched {
            let rot = self.rotation(c);
            if rot.len() != 2 {
                continue;
            }
            // c -> x and c -> y become one segment x - y.
            let (a, b) = (rot[0], rot[1]);
            let (ta, tb) = (twin(a), twin(b));
            let (x, y) = (self.origin(ta), self.origin(tb));
            let label = self.label(a);
            let after_x = if self.next[ta as usize] == ta { None } else { Some(self.prev[ta as usize]) };
            let after_y = if self.next[tb as usize] == tb { None } else { Some(self.prev[tb as usize]) };
            for dd in [a, b, ta, tb] {
                self.unlink(dd);
            }
            self.alive[(a >> 1) as usize] = false;
            self.alive[(b >> 1) as usize] = false;
            if x == y {
                // Cannot happen in a good drawing: the two halves of an edge
                // would form a loop.
                unreachable!("smoothing produced a loop");
            }
            self.add_segment(x, after_x, y, after_y, label);
        }
        self.compact();
    }

    /// Drop dead segments and isolated crossing nodes, renumbering ids.
    pub fn compact(&mut self) {
        let seg_count = self.alive.len();
        let mut new_seg = vec![u32::MAX; seg_count];
        let mut k = 0u32;
        for s in 0..seg_count {
            if self.alive[s] {
                new_seg[s] = k;
                k += 1;
            }
        }
        let mut node_map = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (v, &node) in self.nodes.iter().enumerate() {
            let keep = matches!(node, Node::Vertex(_)) || self.first[v] != NIL;
            if keep {
                node_map[v] = nodes.len();
                nodes.push(node);
            }
        }
        let remap = |d: u32| -> u32 {
            if d == NIL {
                NIL
            } else {
                new_seg[(d >> 1) as usize] * 2 + (d & 1)
            }
        };
        let darts = (k as usize) * 2;
        let mut origin = vec![0u16; darts];
        let mut next = vec![NIL; darts];
        let mut prev = vec![NIL; darts];
        let mut label = vec![0u8; darts];
        for d in 0..self.origin.len() {
            if !self.alive[d >> 1] {
                continue;
            }
            let nd = remap(d as u32) as usize;
            origin[nd] = node_map[self.origin[d] as usize] as u16;
            next[nd] = remap(self.next[d]);
            prev[nd] = remap(self.prev[d]);
            label[nd] = self.label[d];
        }
        let mut first = vec![NIL; nodes.len()];
        for (v, &f) in self.first.iter().enumerate() {
            if node_map[v] != usize::MAX {
                first[node_map[v]] = remap(f);
            }
        }
        self.nodes = nodes;
        self.origin = origin;
        self.next = next;
        self.prev = prev;
        self.label = label;
        self.first = first;
        self.alive = vec![true; k as usize];
    }

    /// Disjoint union with another map over the same original vertex ids.
    /// The other map's drawn vertices must be isolated here.
    pub fn absorb(&mut self, other: &PlaneMap) {
        let node_offset = self.nodes.len();
        let dart_offset = self.origin.len() as u32;
        let node_map = |v: usize, nodes: &[Node]| -> usize {
            match nodes[v] {
                Node::Vertex(x) => x,
                Node::Crossing(..) => v,
            }
        };
        let mut crossing_ids = vec![usize::MAX; other.nodes.len()];
        let mut extra = 0;
        for (v, &node) in other.nodes.iter().enumerate() {
            if let Node::Crossing(..) = node {
                crossing_ids[v] = node_offset + extra;
                extra += 1;
                self.nodes.push(node);
                self.first.push(NIL);
            }
        }
        let map_node = |v: usize| -> usize {
            let x = node_map(v, &other.nodes);
            if crossing_ids[v] != usize::MAX {
                crossing_ids[v]
            } else {
                x
            }
        };
        for d in 0..other.origin.len() {
            self.origin.push(map_node(other.origin[d] as usize) as u16);
            self.next.push(other.next[d] + dart_offset);
            self.prev.push(other.prev[d] + dart_offset);
            self.label.push(other.label[d]);
        }
        self.alive.extend(other.alive.iter().copied());
        for (v, &f) in other.first.iter().enumerate() {
            if f != NIL {
                let t = map_node(v);
                debug_assert_eq!(self.first[t], NIL);
                self.first[t] = f + dart_offset;
            }
        }
    }

    /// Ordered crossings of each original edge, walking from its smaller endpoint.
    pub fn crossing_orders(&self, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        edges
            .iter()
            .enumerate()
            .map(|(e, &(u, _))| {
                self.edge_path(e, u)
                    .map(|path| {
                        path.iter()
                            .filter_map(|&d| match self.nodes[self.head(d)] {
                                Node::Crossing(a, b) => Some(if a == e { b } else { a }),
                                Node::Vertex(_) => None,
                            })
                            .collect()
                    })
                    .unwrap_or_default()
            })
            .collect()
    }

    /// Crossing pairs `(e, f)` with `e < f`, sorted.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(v, _)| self.first[*v] != NIL)
            .filter_map(|(_, n)| match *n {
                Node::Crossing(a, b) => Some((a, b)),
                Node::Vertex(_) => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_pairs().len()
    }

    /// Segments as `(origin, head, label)` in dart-pair order.
    pub fn segments(&self) -> Vec<(usize, usize, usize)> {
        (0..self.alive.len())
            .filter(|&s| self.alive[s])
            .map(|s| {
                let d = (2 * s) as u32;
                (self.origin(d), self.head(d), self.label(d))
            })
            .collect()
    }

    /// Rebuild from explicit segments and rotations (dart `2s` runs `from -> to`
    /// of segment `s`). Returns `None` if the rotation data are inconsistent.
    pub fn from_parts(
        nodes: Vec<Node>,
        segments: &[(usize, usize, usize)],
        rotation: &[Vec<usize>],
    ) -> Option<PlaneMap> {
        if rotation.len() != nodes.len() {
            return None;
        }
        let darts = segments.len() * 2;
        let mut origin = vec![0u16; darts];
        let mut label = vec![0u8; darts];
        for (s, &(a, b, l)) in segments.iter().enumerate() {
            if a >= nodes.len() || b >= nodes.len() || l > u8::MAX as usize {
                return None;
            }
            origin[2 * s] = a as u16;
            origin[2 * s + 1] = b as u16;
            label[2 * s] = l as u8;
            label[2 * s + 1] = l as u8;
        }
        let mut next = vec![NIL; darts];
        let mut prev = vec![NIL; darts];
        let mut first = vec![NIL; nodes.len()];
        let mut seen = vec![false; darts];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d >= darts || seen[d] || origin[d] as usize != v {
                    return None;
                }
                seen[d] = true;
                let n = rot[(i + 1) % rot.len()];
                if n >= darts {
                    return None;
                }
                next[d] = n as u32;
                prev[n] = d as u32;
            }
            if let Some(&d) = rot.first() {
                first[v] = d as u32;
            }
        }
        if seen.iter().any(|&s| !s) {
            return None;
        }
        Some(PlaneMap {
            nodes,
            origin,
            next,
            prev,
            label,
            first,
            alive: vec![true; segments.len()],
        })
    }

    /// Rotations in `from_parts` form; call after [`compact`](Self::compact).
    pub fn rotations(&self) -> Vec<Vec<usize>> {
        (0..self.nodes.len())
            .map(|v| self.rotation(v).into_iter().map(|d| d as usize).collect())
            .collect()
    }

    pub fn is_compact(&self) -> bool {
        self.alive.iter().all(|&a| a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Triangle 0-1-2 drawn planarly.
    fn triangle() -> PlaneMap {
        let mut m = PlaneMap::new(3);
        let a = m.add_segment(0, None, 1, None, 0);
        let b = m.add_segment(1, Some(twin(a)), 2, None, 1);
        m.add_segment(2, Some(twin(b)), 0, Some(a), 2);
        m
    }

    #[test]
    fn triangle_has_two_faces() {
        let m = triangle();
        assert_eq!(m.faces().1, 2);
        assert!(m.euler_holds());
        for v in 0..3 {
            assert_eq!(m.degree(v), 2);
        }
    }

    #[test]
    fn subdivide_keeps_faces() {
        let mut m = triangle();
        let (c, z) = m.subdivide(0, Node::Crossing(0, 5));
        assert_eq!(m.origin(z), c);
        assert_eq!(m.head(0), c);
        assert_eq!(m.head(z), 1);
        assert_eq!(m.degree(c), 2);
        assert_eq!(m.faces().1, 2);
        assert!(m.euler_holds());
        let path = m.edge_path(0, 0).unwrap();
        assert_eq!(path.len(), 2);
    }

    #[test]
    fn remove_edge_smooths_crossings() {
        // Path 0-1 crossed by a pendant edge 2-3.
        let mut m = PlaneMap::new(4);
        let a = m.add_segment(0, None, 1, None, 0);
        let (c, z) = m.subdivide(a, Node::Crossing(0, 1));
        m.add_segment(2, None, c, Some(twin(a)), 1);
        m.add_segment(c, Some(z), 3, None, 1);
        assert_eq!(m.degree(c), 4);
        assert_eq!(m.crossing_count(), 1);
        assert!(m.euler_holds());
        m.remove_edge(1);
        assert_eq!(m.node_count(), 4);
        assert_eq!(m.segment_count(), 1);
        assert_eq!(m.crossing_count(), 0);
        assert_eq!(m.degree(0), 1);
        assert_eq!(m.degree(1), 1);
        assert!(m.euler_holds());
    }

    #[test]
    fn parts_round_trip() {
        let mut m = triangle();
        m.compact();
        let back = PlaneMap::from_parts(m.nodes.clone(), &m.segments(), &m.rotations()).unwrap();
        assert_eq!(back, m);
        let mut rot = m.rotations();
        rot[0].push(0);
        assert!(PlaneMap::from_parts(m.nodes.clone(), &m.segments(), &rot).is_none());
    }
}
