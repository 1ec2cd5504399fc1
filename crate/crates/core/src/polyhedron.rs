//! Trivalent spherical maps stored as rotation systems.
//!
//! Every vertex has exactly three neighbors, so darts are stored implicitly:
//! dart `3 * v + i` leaves vertex `v` toward its `i`-th neighbor in
//! counterclockwise order. `next` cycles through the three darts of a vertex
//! and `twin` reverses a dart. Faces are the orbits of `next ∘ twin`, which
//! walks each face with the face on its right-hand side.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub type Dart = usize;
pub type VertexId = usize;
pub type FaceId = usize;

/// An undirected edge, always stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn has_endpoint(&self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.has_endpoint(other.0) || self.has_endpoint(other.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("polyhedron has no vertices")]
    Empty,
    #[error("vertex {vertex} lists neighbor {neighbor}, which is out of range")]
    NeighborOutOfRange { vertex: VertexId, neighbor: usize },
    #[error("vertex {vertex} has a loop")]
    Loop { vertex: VertexId },
    #[error("vertex {vertex} lists neighbor {neighbor} more than once")]
    ParallelEdge { vertex: VertexId, neighbor: VertexId },
    #[error("vertex {vertex} lists {neighbor}, but {neighbor} does not list {vertex}")]
    Asymmetric { vertex: VertexId, neighbor: VertexId },
    #[error("graph is disconnected (vertex {vertex} unreachable from 0)")]
    Disconnected { vertex: VertexId },
    #[error("rotation system is not spherical: V - E + F = {euler}")]
    NotSpherical { euler: i64 },
    #[error("face {face} has size {size}; faces must have at least 5 sides")]
    SmallFace { face: FaceId, size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex {vertex} has degree {degree}, expected 3")]
    NotTrivalent {
        line: usize,
        vertex: VertexId,
        degree: usize,
    },
    #[error("line {line}: {source}")]
    Structure {
        line: usize,
        #[source]
        source: StructureError,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Malformed { line, .. }
            | ParseError::NotTrivalent { line, .. }
            | ParseError::Structure { line, .. } => *line,
        }
    }
}

/// A trivalent 3-connected planar graph together with its sphere embedding.
///
/// Immutable after construction. The constructor guarantees trivalence,
/// simplicity, connectivity and genus zero; Pogorelov validity is a separate
/// query (see [`crate::validity`]).
#[derive(Clone, PartialEq, Eq)]
pub struct CombinatorialPolyhedron {
    rotation: Vec<[VertexId; 3]>,
    twin: Vec<Dart>,
    face_of: Vec<FaceId>,
    faces: Vec<Vec<Dart>>,
}

impl fmt::Debug for CombinatorialPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CombinatorialPolyhedron")
            .field("vertices", &self.num_vertices())
            .field("faces", &self.num_faces())
            .finish()
    }
}

impl CombinatorialPolyhedron {
    /// Builds a polyhedron from counterclockwise neighbor lists.
    pub fn from_rotation(rotation: Vec<[VertexId; 3]>) -> Result<Self, StructureError> {
        let n = rotation.len();
        if n == 0 {
            return Err(StructureError::Empty);
        }
        for (v, nb) in rotation.iter().enumerate() {
            for (i, &w) in nb.iter().enumerate() {
                if w >= n {
                    return Err(StructureError::NeighborOutOfRange {
                        vertex: v,
                        neighbor: w,
                    });
                }
                if w == v {
                    return Err(StructureError::Loop { vertex: v });
                }
                if nb[..i].contains(&w) {
                    return Err(StructureError::ParallelEdge {
                        vertex: v,
                        neighbor: w,
                    });
                }
            }
        }
        let mut twin = vec![0; 3 * n];
        for v in 0..n {
            for i in 0..3 {
                let w = rotation[v][i];
                match rotation[w].iter().position(|&x| x == v) {
                    Some(j) => twin[3 * v + i] = 3 * w + j,
                    None => {
                        return Err(StructureError::Asymmetric {
                            vertex: v,
                            neighbor: w,
                        })
                    }
                }
            }
        }

        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &rotation[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(StructureError::Disconnected { vertex: v });
        }

        let mut face_of = vec![usize::MAX; 3 * n];
        let mut faces = Vec::new();
        for start in 0..3 * n {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut cycle = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = id;
                cycle.push(d);
                d = next_dart(twin[d]);
                if d == start {
                    break;
                }
            }
            faces.push(cycle);
        }

        let euler = n as i64 - (3 * n / 2) as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(StructureError::NotSpherical { euler });
        }

        Ok(CombinatorialPolyhedron {
            rotation,
            twin,
            face_of,
            faces,
        })
    }

    /// Builds a polyhedron from consistently oriented face boundary cycles.
    ///
    /// A cycle `.. u, v, w ..` makes `w` the counterclockwise successor of
    /// `u` around `v`.
    pub fn from_face_cycles(
        num_vertices: usize,
        cycles: &[Vec<VertexId>],
    ) -> Result<Self, StructureError> {
        let mut succ: Vec<Vec<(VertexId, VertexId)>> = vec![Vec::new(); num_vertices];
        for cycle in cycles {
            let k = cycle.len();
            for i in 0..k {
                let u = cycle[i];
                let v = cycle[(i + 1) % k];
                let w = cycle[(i + 2) % k];
                if v >= num_vertices {
                    return Err(StructureError::NeighborOutOfRange {
                        vertex: u,
                        neighbor: v,
                    });
                }
                succ[v].push((u, w));
            }
        }
        let mut rotation = Vec::with_capacity(num_vertices);
        for (v, pairs) in succ.iter().enumerate() {
            if pairs.len() != 3 {
                return Err(StructureError::Asymmetric {
                    vertex: v,
                    neighbor: pairs.first().map_or(v, |p| p.0),
                });
            }
            let start = pairs.iter().map(|p| p.0).min().unwrap_or(v);
            let step = |x: VertexId| pairs.iter().find(|p| p.0 == x).map(|p| p.1);
            let second = step(start).ok_or(StructureError::Asymmetric {
                vertex: v,
                neighbor: start,
            })?;
            let third = step(second).ok_or(StructureError::Asymmetric {
                vertex: v,
                neighbor: second,
            })?;
            rotation.push([start, second, third]);
        }
        Self::from_rotation(rotation)
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_edges(&self) -> usize {
        3 * self.rotation.len() / 2
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_darts(&self) -> usize {
        self.twin.len()
    }

    /// Counterclockwise neighbor order at `v`.
    pub fn rotation(&self, v: VertexId) -> [VertexId; 3] {
        self.rotation[v]
    }

    pub fn rotations(&self) -> &[[VertexId; 3]] {
        &self.rotation
    }

    pub fn origin(&self, d: Dart) -> VertexId {
        d / 3
    }

    pub fn target(&self, d: Dart) -> VertexId {
        self.rotation[d / 3][d % 3]
    }

    pub fn twin(&self, d: Dart) -> Dart {
        self.twin[d]
    }

    /// Next dart counterclockwise around the origin of `d`.
    pub fn next(&self, d: Dart) -> Dart {
        next_dart(d)
    }

    /// Next dart clockwise around the origin of `d`.
    pub fn prev(&self, d: Dart) -> Dart {
        3 * (d / 3) + (d % 3 + 2) % 3
    }

    /// Successor of `d` along its face.
    pub fn face_next(&self, d: Dart) -> Dart {
        next_dart(self.twin[d])
    }

    pub fn face_of(&self, d: Dart) -> FaceId {
        self.face_of[d]
    }

    /// Darts of a face in traversal order.
    pub fn face_darts(&self, f: FaceId) -> &[Dart] {
        &self.faces[f]
    }

    /// Vertices of a face in traversal order (the origins of its darts).
    pub fn face_vertices(&self, f: FaceId) -> Vec<VertexId> {
        self.faces[f].iter().map(|&d| d / 3).collect()
    }

    pub fn face_len(&self, f: FaceId) -> usize {
        self.faces[f].len()
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    /// The three faces around `v`, in the order of its darts.
    pub fn faces_at(&self, v: VertexId) -> [FaceId; 3] {
        [
            self.face_of[3 * v],
            self.face_of[3 * v + 1],
            self.face_of[3 * v + 2],
        ]
    }

    /// Dart from `u` to `v`, if they are adjacent.
    pub fn dart(&self, u: VertexId, v: VertexId) -> Option<Dart> {
        self.rotation
            .get(u)?
            .iter()
            .position(|&w| w == v)
            .map(|i| 3 * u + i)
    }

    pub fn edge_of(&self, d: Dart) -> Edge {
        Edge::new(self.origin(d), self.target(d))
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.dart(e.0, e.1).is_some()
    }

    /// All edges, sorted by (smaller endpoint, larger endpoint).
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (v, nb) in self.rotation.iter().enumerate() {
            for &w in nb {
                if v < w {
                    out.push(Edge(v, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The two faces containing `e`: the face of the dart `e.0 -> e.1` first.
    pub fn edge_faces(&self, e: Edge) -> Option<[FaceId; 2]> {
        let d = self.dart(e.0, e.1)?;
        Some([self.face_of[d], self.face_of[self.twin[d]]])
    }

    pub fn faces_adjacent(&self, f: FaceId, g: FaceId) -> bool {
        self.faces[f].iter().any(|&d| self.face_of[self.twin[d]] == g)
    }

    /// Edges shared by faces `f` and `g`.
    pub fn shared_edges(&self, f: FaceId, g: FaceId) -> Vec<Edge> {
        self.faces[f]
            .iter()
            .filter(|&&d| self.face_of[self.twin[d]] == g)
            .map(|&d| self.edge_of(d))
            .collect()
    }

    /// Neighboring faces of each face (the dual graph), with the shared edge.
    pub fn dual_adjacency(&self) -> Vec<Vec<(FaceId, Edge)>> {
        self.faces
            .iter()
            .map(|cycle| {
                cycle
                    .iter()
                    .map(|&d| (self.face_of[self.twin[d]], self.edge_of(d)))
                    .collect()
            })
            .collect()
    }

    /// The mirror image: every rotation reversed.
    pub fn mirror(&self) -> Self {
        let rotation = self.rotation.iter().map(|&[a, b, c]| [a, c, b]).collect();
        Self::from_rotation(rotation).expect("mirror of a valid map is valid")
    }

    /// Renames vertex `v` to `perm[v]`, keeping every rotation.
    pub fn relabel(&self, perm: &[VertexId]) -> Self {
        assert_eq!(perm.len(), self.num_vertices(), "permutation length");
        let mut rotation = vec![[0; 3]; self.num_vertices()];
        for (v, nb) in self.rotation.iter().enumerate() {
            rotation[perm[v]] = [perm[nb[0]], perm[nb[1]], perm[nb[2]]];
        }
        Self::from_rotation(rotation).expect("relabeling preserves validity")
    }

    /// Parses the `RAP1` text format.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut header: Option<(usize, usize)> = None;
        let mut rows: Vec<Option<([VertexId; 3], usize)>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((count, _)) = header else {
                let mut parts = content.split_whitespace();
                if parts.next() != Some("RAP1") {
                    return Err(malformed(line, "expected header `RAP1 <V>`"));
                }
                let count: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| malformed(line, "missing or invalid vertex count"))?;
                if parts.next().is_some() {
                    return Err(malformed(line, "trailing tokens after vertex count"));
                }
                if count == 0 {
                    return Err(malformed(line, "vertex count must be positive"));
                }
                if count > MAX_VERTICES {
                    return Err(malformed(line, "vertex count too large"));
                }
                header = Some((count, line));
                rows = vec![None; count];
                continue;
            };
            let (id_part, rest) = content
                .split_once(':')
                .ok_or_else(|| malformed(line, "expected `<v>: <a> <b> <c>`"))?;
            let v: usize = id_part
                .trim()
                .parse()
                .map_err(|_| malformed(line, "invalid vertex id"))?;
            if v >= count {
                return Err(malformed(line, &format!("vertex id {v} out of range")));
            }
            if rows[v].is_some() {
                return Err(malformed(line, &format!("vertex {v} listed twice")));
            }
            let nbrs: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| malformed(line, "invalid neighbor id"))?;
            if nbrs.len() != 3 {
                return Err(ParseError::NotTrivalent {
                    line,
                    vertex: v,
                    degree: nbrs.len(),
                });
            }
            rows[v] = Some(([nbrs[0], nbrs[1], nbrs[2]], line));
        }
        let Some((_, header_line)) = header else {
            return Err(malformed(1, "missing header `RAP1 <V>`"));
        };
        let mut rotation = Vec::with_capacity(rows.len());
        let mut line_of = Vec::with_capacity(rows.len());
        for (v, row) in rows.iter().enumerate() {
            let Some((nb, line)) = row else {
                return Err(malformed(header_line, &format!("vertex {v} is missing")));
            };
            rotation.push(*nb);
            line_of.push(*line);
        }
        Self::from_rotation(rotation).map_err(|source| {
            let line = match &source {
                StructureError::NeighborOutOfRange { vertex, .. }
                | StructureError::Loop { vertex }
                | StructureError::ParallelEdge { vertex, .. }
                | StructureError::Asymmetric { vertex, .. }
                | StructureError::Disconnected { vertex } => line_of[*vertex],
                _ => header_line,
            };
            ParseError::Structure { line, source }
        })
    }

    /// Writes the `RAP1` text format, neighbors exactly as stored.
    pub fn serialize(&self) -> String {
        let mut out = format!("RAP1 {}\n", self.num_vertices());
        for (v, [a, b, c]) in self.rotation.iter().enumerate() {
            out.push_str(&format!("{v}: {a} {b} {c}\n"));
        }
        out
    }
}

const MAX_VERTICES: usize = 1 << 16;

fn malformed(line: usize, message: &str) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.to_string(),
    }
}

#[inline]
fn next_dart(d: Dart) -> Dart {
    3 * (d / 3) + (d % 3 + 1) % 3
}

/// Counts of k-gonal faces for k ≥ 5, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FaceVector {
    counts: Vec<usize>,
}

impl FaceVector {
    pub fn from_counts(mut counts: Vec<usize>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        FaceVector { counts }
    }

    /// Index 0 holds the number of pentagons.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, sides: usize) -> usize {
        sides
            .checked_sub(5)
            .and_then(|i| self.counts.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Σ (6 − k) f_k; equals 12 for every trivalent sphere with faces ≥ 5.
    pub fn curvature_sum(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (1 - i as i64) * c as i64)
            .sum()
    }

    /// `5:16,8:2` style listing of the nonzero counts.
    pub fn to_sparse_string(&self) -> String {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, c)| format!("{}:{}", i + 5, c))
            .collect();
        parts.join(",")
    }

    /// Inverse of [`Self::to_sparse_string`]: sizes strictly increasing,
    /// counts positive.
    pub fn parse_sparse(s: &str) -> Option<Self> {
        let mut counts = Vec::new();
        for part in s.split(',') {
            let (k, c) = part.split_once(':')?;
            let k: usize = k.trim().parse().ok()?;
            let c: usize = c.trim().parse().ok()?;
            if !(5..=4096).contains(&k) || c == 0 || counts.len() > k - 5 {
                return None;
            }
            counts.resize(k - 4, 0);
            counts[k - 5] = c;
        }
        Some(Self::from_counts(counts))
    }
}

impl fmt::Display for FaceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Face sizes tallied from 5 upward; fails on any face with fewer sides.
pub fn face_vector(p: &CombinatorialPolyhedron) -> Result<FaceVector, StructureError> {
    let mut counts = Vec::new();
    for (f, cycle) in p.faces().iter().enumerate() {
        let k = cycle.len();
        if k < 5 {
            return Err(StructureError::SmallFace { face: f, size: k });
        }
        if counts.len() < k - 4 {
            counts.resize(k - 4, 0);
        }
        counts[k - 5] += 1;
    }
    Ok(FaceVector::from_counts(counts))
}
