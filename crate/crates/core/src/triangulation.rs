//! Closed (or bounded) 3-dimensional triangulations given by face gluings.
//!
//! Text format, one line per tetrahedron:
//!
//! ```text
//! tet <id>: <g0> <g1> <g2> <g3>
//! ```
//!
//! Face `i` is the face opposite vertex `i`. Each `g` is `-` for a boundary
//! face or `<tet>:<face>:<perm>`, where `perm` is a word such as `1032`
//! listing the images of vertices `0123`. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt;

use crate::error::{Error, Result};

/// The shipped two-tetrahedron triangulation of `S³`.
pub const S3_TWO_TET: &str = include_str!("../data/s3_two_tet.tri");

/// The six edges of a tetrahedron, in the order used for 6j tuples:
/// `(i, j, k, l, m, n) = (01, 02, 12, 23, 13, 03)`.
pub const TET_EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)];

/// Indices into [`TET_EDGES`] of the three edges of each face, face `f` opposite vertex `f`.
pub const FACE_EDGES: [[usize; 3]; 4] = [[2, 3, 4], [1, 3, 5], [0, 4, 5], [0, 1, 2]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: [u8; 4],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Option<Gluing>; 4]>,
    vertex_class: Vec<[usize; 4]>,
    edge_class: Vec<[usize; 6]>,
    face_class: Vec<[usize; 4]>,
    num_vertices: usize,
    num_edges: usize,
    num_faces: usize,
    boundary_vertices: Vec<bool>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut x = x;
        while self.0[x] != root {
            let next = self.0[x];
            self.0[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so numbering follows first occurrence
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }

    /// Class labels `0..k` in order of first occurrence.
    fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for (x, slot) in out.iter_mut().enumerate() {
            let root = self.find(x);
            if label[root] == usize::MAX {
                label[root] = next;
                next += 1;
            }
            *slot = label[root];
        }
        (out, next)
    }
}

fn edge_index(u: u8, v: u8) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    TET_EDGES
        .iter()
        .position(|&e| e == (a, b))
        .expect("distinct vertices")
}

fn parse_perm(word: &str) -> Option<[u8; 4]> {
    let bytes = word.as_bytes();
    if bytes.len() != 4 {
        return None;
    }
    let mut perm = [0u8; 4];
    let mut seen = [false; 4];
    for (slot, &b) in perm.iter_mut().zip(bytes) {
        let d = b.checked_sub(b'0').filter(|&d| d < 4)?;
        if std::mem::replace(&mut seen[d as usize], true) {
            return None;
        }
        *slot = d;
    }
    Some(perm)
}

fn inverse(p: [u8; 4]) -> [u8; 4] {
    let mut inv = [0u8; 4];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

impl Triangulation {
    pub fn parse(text: &str) -> Result<Self> {
        let mut gluings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::TriangulationParse {
                line: line_no,
                message,
            };
            let rest = line
                .strip_prefix("tet ")
                .ok_or_else(|| err("expected `tet <id>:`".into()))?;
            let (id, faces) = rest
                .split_once(':')
                .ok_or_else(|| err("missing `:` after id".into()))?;
            let id: usize = id
                .trim()
                .parse()
                .map_err(|_| err(format!("bad tetrahedron id `{}`", id.trim())))?;
            if id != gluings.len() {
                return Err(err(format!(
                    "expected tetrahedron {} but found {id}",
                    gluings.len()
                )));
            }
            let tokens: Vec<&str> = faces.split_whitespace().collect();
            if tokens.len() != 4 {
                return Err(err(format!(
                    "expected 4 face gluings, found {}",
                    tokens.len()
                )));
            }
            let mut row = [None; 4];
            for (f, tok) in tokens.iter().enumerate() {
                if *tok == "-" {
                    continue;
                }
                let parts: Vec<&str> = tok.split(':').collect();
                let bad = || err(format!("bad gluing `{tok}` on face {f}"));
                if parts.len() != 3 {
                    return Err(bad());
                }
                let tet = parts[0].parse().map_err(|_| bad())?;
                let face: u8 = parts[1]
                    .parse()
                    .ok()
                    .filter(|&x: &u8| x < 4)
                    .ok_or_else(bad)?;
                let perm = parse_perm(parts[2]).ok_or_else(bad)?;
                row[f] = Some(Gluing { tet, face, perm });
            }
            gluings.push(row);
        }
        Self::from_gluings(gluings)
    }

    pub fn from_gluings(gluings: Vec<[Option<Gluing>; 4]>) -> Result<Self> {
        let t = gluings.len();
        if t == 0 {
            return Err(Error::InvalidTriangulation("no tetrahedra".into()));
        }
        for (tet, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let Some(g) = g else { continue };
                let here = format!("tet {tet} face {f}");
                if g.tet >= t {
                    return Err(Error::InvalidTriangulation(format!(
                        "{here} refers to missing tet {}",
                        g.tet
                    )));
                }
                if g.perm[f] != g.face {
                    return Err(Error::InvalidTriangulation(format!(
                        "{here}: permutation sends vertex {f} to {} but the target face is {}",
                        g.perm[f], g.face
                    )));
                }
                if g.tet == tet && g.face as usize == f {
                    return Err(Error::InvalidTriangulation(format!(
                        "{here} is glued to itself"
                    )));
                }
                let back = gluings[g.tet][g.face as usize];
                let expected = Gluing {
                    tet,
                    face: f as u8,
                    perm: inverse(g.perm),
                };
                if back != Some(expected) {
                    return Err(Error::InvalidTriangulation(format!(
                        "{here}: gluing to tet {} face {} is not matched by its inverse",
                        g.tet, g.face
                    )));
                }
            }
        }

        let mut verts = UnionFind::new(4 * t);
        let mut edges = UnionFind::new(6 * t);
        let mut faces = UnionFind::new(4 * t);
        for (tet, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                let Some(g) = g else { continue };
                faces.union(4 * tet + f, 4 * g.tet + g.face as usize);
                for v in (0..4u8).filter(|&v| v as usize != f) {
                    verts.union(
                        4 * tet + v as usize,
                        4 * g.tet + g.perm[v as usize] as usize,
                    );
                }
                for &e in &FACE_EDGES[f] {
                    let (u, v) = TET_EDGES[e];
                    let image = edge_index(g.perm[u as usize], g.perm[v as usize]);
                    edges.union(6 * tet + e, 6 * g.tet + image);
                }
            }
        }
        let (vl, num_vertices) = verts.labels();
        let (el, num_edges) = edges.labels();
        let (fl, num_faces) = faces.labels();

        let mut boundary_vertices = vec![false; num_vertices];
        for (tet, row) in gluings.iter().enumerate() {
            for f in (0..4).filter(|&f| row[f].is_none()) {
                for v in (0..4).filter(|&v| v != f) {
                    boundary_vertices[vl[4 * tet + v]] = true;
                }
            }
        }

        let tri = Triangulation {
            vertex_class: (0..t)
                .map(|k| std::array::from_fn(|v| vl[4 * k + v]))
                .collect(),
            edge_class: (0..t)
                .map(|k| std::array::from_fn(|e| el[6 * k + e]))
                .collect(),
            face_class: (0..t)
                .map(|k| std::array::from_fn(|f| fl[4 * k + f]))
                .collect(),
            gluings,
            num_vertices,
            num_edges,
            num_faces,
            boundary_vertices,
        };
        if tri.is_closed() && tri.euler_characteristic() != 0 {
            return Err(Error::InvalidTriangulation(format!(
                "closed complex has V - E + F - T = {}",
                tri.euler_characteristic()
            )));
        }
        Ok(tri)
    }

    pub fn s3() -> Self {
        Self::parse(S3_TWO_TET).expect("shipped triangulation parses")
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.gluings.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_faces(&self) -> usize {
        self.num_faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges as i64 + self.num_faces as i64
            - self.num_tetrahedra() as i64
    }

    pub fn is_closed(&self) -> bool {
        self.gluings
            .iter()
            .all(|row| row.iter().all(Option::is_some))
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.gluings[tet][face]
    }

    pub fn is_boundary_vertex(&self, class: usize) -> bool {
        self.boundary_vertices[class]
    }

    /// Vertex classes of the four vertices of `tet`.
    pub fn tet_vertices(&self, tet: usize) -> [usize; 4] {
        self.vertex_class[tet]
    }

    /// Edge classes of `tet` in [`TET_EDGES`] order.
    pub fn tet_edges(&self, tet: usize) -> [usize; 6] {
        self.edge_class[tet]
    }

    pub fn tet_faces(&self, tet: usize) -> [usize; 4] {
        self.face_class[tet]
    }

    /// Edge classes of each face class, taken from its first occurrence.
    pub fn face_edge_classes(&self) -> Vec<[usize; 3]> {
        let mut out = vec![None; self.num_faces];
        for tet in 0..self.num_tetrahedra() {
            for f in 0..4 {
                let slot = &mut out[self.face_class[tet][f]];
                if slot.is_none() {
                    *slot = Some(FACE_EDGES[f].map(|e| self.edge_class[tet][e]));
                }
            }
        }
        out.into_iter()
            .map(|x| x.expect("every face class occurs"))
            .collect()
    }

    /// Two triangulations side by side, the tetrahedra of `other` renumbered after ours.
    pub fn disjoint_union(&self, other: &Triangulation) -> Triangulation {
        let shift = self.num_tetrahedra();
        let moved = other.gluings.iter().map(|row| {
            row.map(|g| {
                g.map(|g| Gluing {
                    tet: g.tet + shift,
                    ..g
                })
            })
        });
        let gluings = self.gluings.iter().copied().chain(moved).collect();
        Self::from_gluings(gluings).expect("union of valid triangulations is valid")
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tet, row) in self.gluings.iter().enumerate() {
            write!(f, "tet {tet}:")?;
            for g in row {
                match g {
                    None => write!(f, " -")?,
                    Some(g) => {
                        let p = g.perm;
                        write!(f, " {}:{}:{}{}{}{}", g.tet, g.face, p[0], p[1], p[2], p[3])?
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
