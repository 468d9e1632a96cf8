//! Generalized triangulations of 3-manifolds with boundary.
//!
//! A triangulation is a list of abstract tetrahedra with face gluings: face
//! `f` of a tetrahedron is the face opposite vertex `f`, and a gluing names
//! the target tetrahedron, the target face, and a vertex correspondence
//! (a permutation of `{0,1,2,3}` carrying the source face onto the target
//! face and the opposite vertex to the opposite vertex). Tetrahedra may be
//! glued to themselves along distinct faces, so vertices, edges, and faces
//! are equivalence classes of their per-tetrahedron occurrences; the
//! [`Skeleton`] computes those classes together with edge valences and
//! boundary data.
//!
//! [`Triangulation::validate`] checks that the complex is a connected
//! orientable 3-manifold with (possibly empty) boundary: gluings are
//! involutive, no edge is identified with itself reversed, and every vertex
//! link is a sphere or a disk.
//!
//! The line-based serialization ([`Triangulation::serialize`]) is
//! bit-exact and [`Triangulation::hash_hex`] is its SHA-256; certificates
//! bind to this hash.

use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

mod complement;
mod embed;
mod markings;
mod simplify;

pub use complement::{build_complement, BuildMode};
pub use embed::{grid_embed, GridEmbedding};
pub use markings::{MarkedComplement, MarkingError};

/// Vertex pairs of the six edges of a tetrahedron, in index order.
pub const EDGE_VERTICES: [[u8; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Edge index of the edge joining vertices `a` and `b`.
pub fn edge_index(a: u8, b: u8) -> u8 {
    debug_assert!(a != b);
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => unreachable!(),
    }
}

/// A permutation of the four vertex labels of a tetrahedron.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub fn identity() -> Self {
        Perm4([0, 1, 2, 3])
    }

    pub fn new(images: [u8; 4]) -> Self {
        let mut seen = [false; 4];
        for &i in &images {
            assert!(i < 4 && !seen[i as usize], "not a permutation: {images:?}");
            seen[i as usize] = true;
        }
        Perm4(images)
    }

    pub fn apply(self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 4];
        for (v, &img) in self.0.iter().enumerate() {
            inv[img as usize] = v as u8;
        }
        Perm4(inv)
    }

    /// `self` after `other`: `(self.compose(other)).apply(v) = self.apply(other.apply(v))`.
    pub fn compose(self, other: Perm4) -> Self {
        Perm4([
            self.apply(other.apply(0)),
            self.apply(other.apply(1)),
            self.apply(other.apply(2)),
            self.apply(other.apply(3)),
        ])
    }

    pub fn is_even(self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 0
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }
}

/// One side of a face identification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FaceGluing {
    pub tet: usize,
    pub face: u8,
    /// Vertex correspondence from the source tetrahedron to `tet`; maps the
    /// source face onto face `face` and the source face index to `face`.
    pub perm: Perm4,
}

/// Errors for triangulation construction, validation, and parsing.
#[derive(Debug, Error)]
pub enum TriangulationError {
    #[error("face gluings are not involutive at tetrahedron {tet} face {face}")]
    NotInvolutive { tet: usize, face: u8 },
    #[error("tetrahedron {tet} glues face {face} to itself")]
    SelfGluedFace { tet: usize, face: u8 },
    #[error("gluing at tetrahedron {tet} face {face} does not carry the face onto the target face")]
    BadPermutation { tet: usize, face: u8 },
    #[error("an edge is identified with itself reversed (tetrahedron {tet}, edge {edge})")]
    ReversedEdge { tet: usize, edge: u8 },
    #[error("the link of a vertex is not a sphere or disk (tetrahedron {tet}, vertex {vertex})")]
    BadVertexLink { tet: usize, vertex: u8 },
    #[error("the complex is not connected")]
    Disconnected,
    #[error("the complex is not orientable")]
    NonOrientable,
    #[error("the complex has no tetrahedra")]
    EmptyComplex,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A triangulated 3-manifold, possibly with boundary.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triangulation {
    gluings: Vec<[Option<FaceGluing>; 4]>,
}

/// Skeleton of a triangulation: equivalence classes of vertices, edges, and
/// faces across the gluings, with valences and boundary flags.
pub struct Skeleton {
    /// Class id of each (tetrahedron, vertex).
    pub vertex_class: Vec<[usize; 4]>,
    pub vertex_class_count: usize,
    /// Occurrences of each vertex class as (tetrahedron, vertex).
    pub vertex_slots: Vec<Vec<(usize, u8)>>,
    pub vertex_on_boundary: Vec<bool>,
    /// Class id of each (tetrahedron, edge index).
    pub edge_class: Vec<[usize; 6]>,
    pub edge_class_count: usize,
    /// Occurrences of each edge class as (tetrahedron, edge index).
    pub edge_slots: Vec<Vec<(usize, u8)>>,
    pub edge_on_boundary: Vec<bool>,
    /// Class id of each (tetrahedron, face).
    pub face_class: Vec<[usize; 4]>,
    pub face_class_count: usize,
    pub face_on_boundary: Vec<bool>,
}

impl Skeleton {
    /// Valence of an edge class: the number of tetrahedron corners wrapped
    /// around it, counted with multiplicity.
    pub fn edge_valence(&self, class: usize) -> usize {
        self.edge_slots[class].len()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn unite(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Compact class ids in first-occurrence order; returns (ids, count).
    fn compress(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut count = 0;
        let mut out = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            out[x] = id[r];
        }
        (out, count)
    }
}

impl Triangulation {
    /// Build from explicit gluing tables, checking structural consistency
    /// (involutivity, no self-glued face, permutations carry face to face).
    pub fn new(
        gluings: Vec<[Option<FaceGluing>; 4]>,
    ) -> Result<Self, TriangulationError> {
        if gluings.is_empty() {
            return Err(TriangulationError::EmptyComplex);
        }
        let t = gluings.len();
        for (tet, faces) in gluings.iter().enumerate() {
            for (face, slot) in faces.iter().enumerate() {
                let face = face as u8;
                let Some(g) = slot else { continue };
                if g.tet >= t {
                    return Err(TriangulationError::Parse(format!(
                        "gluing target {} out of range",
                        g.tet
                    )));
                }
                if g.perm.apply(face) != g.face {
                    return Err(TriangulationError::BadPermutation { tet, face });
                }
                if g.tet == tet && g.face == face {
                    return Err(TriangulationError::SelfGluedFace { tet, face });
                }
                let back = gluings[g.tet][g.face as usize];
                let expected = FaceGluing {
                    tet,
                    face,
                    perm: g.perm.inverse(),
                };
                if back != Some(expected) {
                    return Err(TriangulationError::NotInvolutive { tet, face });
                }
            }
        }
        Ok(Triangulation { gluings })
    }

    /// Build a triangulation from tetrahedra given by global vertex ids, as
    /// in an honest simplicial complex: faces sharing the same three global
    /// vertices are glued by the vertex correspondence. Panics if more than
    /// two tetrahedra share a face or a tetrahedron repeats a vertex.
    pub fn from_simplicial(tets: &[[usize; 4]]) -> Result<Self, TriangulationError> {
        let mut face_map: BTreeMap<[usize; 3], Vec<(usize, u8)>> = BTreeMap::new();
        for (i, tet) in tets.iter().enumerate() {
            let mut sorted = *tet;
            sorted.sort_unstable();
            assert!(
                sorted.windows(2).all(|w| w[0] != w[1]),
                "degenerate tetrahedron {tet:?}"
            );
            for f in 0..4u8 {
                let mut tri: Vec<usize> = (0..4)
                    .filter(|&v| v != f as usize)
                    .map(|v| tet[v])
                    .collect();
                tri.sort_unstable();
                face_map
                    .entry([tri[0], tri[1], tri[2]])
                    .or_default()
                    .push((i, f));
            }
        }
        let mut gluings: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; tets.len()];
        for (tri, occ) in face_map {
            match occ.len() {
                1 => {}
                2 => {
                    let (t1, f1) = occ[0];
                    let (t2, f2) = occ[1];
                    // Vertex correspondence by matching global ids.
                    let mut images = [u8::MAX; 4];
                    for v in 0..4u8 {
                        if v == f1 {
                            images[v as usize] = f2;
                        } else {
                            let global = tets[t1][v as usize];
                            let img = (0..4u8)
                                .find(|&w| tets[t2][w as usize] == global)
                                .expect("face vertices match");
                            images[v as usize] = img;
                        }
                    }
                    let perm = Perm4::new(images);
                    gluings[t1][f1 as usize] = Some(FaceGluing {
                        tet: t2,
                        face: f2,
                        perm,
                    });
                    gluings[t2][f2 as usize] = Some(FaceGluing {
                        tet: t1,
                        face: f1,
                        perm: perm.inverse(),
                    });
                }
                n => panic!("face {tri:?} is shared by {n} tetrahedra"),
            }
        }
        Triangulation::new(gluings)
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Option<FaceGluing> {
        self.gluings[tet][face as usize]
    }

    pub fn is_boundary_face(&self, tet: usize, face: u8) -> bool {
        self.gluings[tet][face as usize].is_none()
    }

    pub fn boundary_face_count(&self) -> usize {
        self.gluings
            .iter()
            .map(|faces| faces.iter().filter(|g| g.is_none()).count())
            .sum()
    }

    /// Compute vertex, edge, and face classes.
    pub fn skeleton(&self) -> Skeleton {
        let t = self.gluings.len();

        // Vertices.
        let mut vuf = UnionFind::new(4 * t);
        // Ordered edges: index (tet * 4 + a) * 4 + b for a != b.
        let mut ouf = UnionFind::new(16 * t);
        for (tet, faces) in self.gluings.iter().enumerate() {
            for (face, slot) in faces.iter().enumerate() {
                let Some(g) = slot else { continue };
                for v in 0..4u8 {
                    if v as usize == face {
                        continue;
                    }
                    vuf.unite(4 * tet + v as usize, 4 * g.tet + g.perm.apply(v) as usize);
                    for w in 0..4u8 {
                        if w as usize == face || w == v {
                            continue;
                        }
                        ouf.unite(
                            (tet * 4 + v as usize) * 4 + w as usize,
                            (g.tet * 4 + g.perm.apply(v) as usize) * 4
                                + g.perm.apply(w) as usize,
                        );
                    }
                }
            }
        }
        let (vclass_flat, vertex_class_count) = vuf.compress();
        let mut vertex_class = vec![[0usize; 4]; t];
        for tet in 0..t {
            for v in 0..4 {
                vertex_class[tet][v] = vclass_flat[4 * tet + v];
            }
        }

        // Unordered edge classes, one gluing step at a time.
        let mut euf = UnionFind::new(6 * t);
        for (tet, faces) in self.gluings.iter().enumerate() {
            for (face, slot) in faces.iter().enumerate() {
                let Some(g) = slot else { continue };
                for (e, [a, b]) in EDGE_VERTICES.iter().enumerate() {
                    if *a as usize == face || *b as usize == face {
                        continue;
                    }
                    let ia = g.perm.apply(*a);
                    let ib = g.perm.apply(*b);
                    euf.unite(
                        6 * tet + e,
                        6 * g.tet + edge_index(ia, ib) as usize,
                    );
                }
            }
        }
        let (eclass_flat, edge_class_count) = euf.compress();
        let mut edge_class = vec![[0usize; 6]; t];
        let mut edge_slots = vec![Vec::new(); edge_class_count];
        for tet in 0..t {
            for e in 0..6 {
                let c = eclass_flat[6 * tet + e];
                edge_class[tet][e] = c;
                edge_slots[c].push((tet, e as u8));
            }
        }

        // Faces.
        let mut fuf = UnionFind::new(4 * t);
        for (tet, faces) in self.gluings.iter().enumerate() {
            for (face, slot) in faces.iter().enumerate() {
                if let Some(g) = slot {
                    fuf.unite(4 * tet + face, 4 * g.tet + g.face as usize);
                }
            }
        }
        let (fclass_flat, face_class_count) = fuf.compress();
        let mut face_class = vec![[0usize; 4]; t];
        let mut face_on_boundary = vec![false; face_class_count];
        for tet in 0..t {
            for f in 0..4 {
                let c = fclass_flat[4 * tet + f];
                face_class[tet][f] = c;
                if self.gluings[tet][f].is_none() {
                    face_on_boundary[c] = true;
                }
            }
        }

        // Boundary flags: an edge/vertex is on the boundary iff it occurs in
        // some boundary face.
        let mut edge_on_boundary = vec![false; edge_class_count];
        let mut vertex_on_boundary = vec![false; vertex_class_count];
        for tet in 0..t {
            for f in 0..4u8 {
                if self.gluings[tet][f as usize].is_some() {
                    continue;
                }
                for v in 0..4u8 {
                    if v != f {
                        vertex_on_boundary[vertex_class[tet][v as usize]] = true;
                    }
                }
                for (e, [a, b]) in EDGE_VERTICES.iter().enumerate() {
                    if *a != f && *b != f {
                        edge_on_boundary[edge_class[tet][e]] = true;
                    }
                }
            }
        }

        let mut vertex_slots = vec![Vec::new(); vertex_class_count];
        for tet in 0..t {
            for v in 0..4u8 {
                vertex_slots[vertex_class[tet][v as usize]].push((tet, v));
            }
        }

        Skeleton {
            vertex_class,
            vertex_class_count,
            vertex_slots,
            vertex_on_boundary,
            edge_class,
            edge_class_count,
            edge_slots,
            edge_on_boundary,
            face_class,
            face_class_count,
            face_on_boundary,
        }
    }

    /// Full validation: connected orientable 3-manifold with boundary.
    pub fn validate(&self) -> Result<(), TriangulationError> {
        let t = self.gluings.len();
        if t == 0 {
            return Err(TriangulationError::EmptyComplex);
        }

        // Edge reversal: identify ordered edges; an edge identified with its
        // own reversal gives a non-manifold midpoint.
        let mut ouf = UnionFind::new(16 * t);
        for (tet, faces) in self.gluings.iter().enumerate() {
            for (face, slot) in faces.iter().enumerate() {
                let Some(g) = slot else { continue };
                for v in 0..4u8 {
                    for w in 0..4u8 {
                        if v == w || v as usize == face || w as usize == face {
                            continue;
                        }
                        ouf.unite(
                            (tet * 4 + v as usize) * 4 + w as usize,
                            (g.tet * 4 + g.perm.apply(v) as usize) * 4
                                + g.perm.apply(w) as usize,
                        );
                    }
                }
            }
        }
        for tet in 0..t {
            for (e, [a, b]) in EDGE_VERTICES.iter().enumerate() {
                let fwd = (tet * 4 + *a as usize) * 4 + *b as usize;
                let rev = (tet * 4 + *b as usize) * 4 + *a as usize;
                if ouf.find(fwd) == ouf.find(rev) {
                    return Err(TriangulationError::ReversedEdge {
                        tet,
                        edge: e as u8,
                    });
                }
            }
        }

        self.check_vertex_links()?;

        // Connectedness over tetrahedra.
        let mut tuf = UnionFind::new(t);
        for (tet, faces) in self.gluings.iter().enumerate() {
            for slot in faces.iter().flatten() {
                tuf.unite(tet, slot.tet);
            }
        }
        let root = tuf.find(0);
        if (0..t).any(|x| tuf.find(x) != root) {
            return Err(TriangulationError::Disconnected);
        }

        // Orientability: walk gluings assigning signs; a gluing with an even
        // permutation flips orientation.
        let mut sign = vec![0i8; t];
        sign[0] = 1;
        let mut stack = vec![0usize];
        while let Some(tet) = stack.pop() {
            for slot in self.gluings[tet].iter().flatten() {
                let s = if slot.perm.is_even() {
                    -sign[tet]
                } else {
                    sign[tet]
                };
                if sign[slot.tet] == 0 {
                    sign[slot.tet] = s;
                    stack.push(slot.tet);
                } else if sign[slot.tet] != s {
                    return Err(TriangulationError::NonOrientable);
                }
            }
        }
        Ok(())
    }

    /// Vertex links must be spheres (interior vertices) or disks (boundary
    /// vertices).
    fn check_vertex_links(&self) -> Result<(), TriangulationError> {
        let t = self.gluings.len();
        let skeleton = self.skeleton();

        // Link faces are (tet, vertex) corners. Link edges are (tet, vertex,
        // face) triples with vertex != face, identified across gluings. Link
        // vertices are ordered-edge slots (tet, vertex, direction).
        let le_index = |tet: usize, v: u8, f: u8| (tet * 4 + v as usize) * 4 + f as usize;
        let mut leuf = UnionFind::new(16 * t);
        let mut ouf = UnionFind::new(16 * t);
        for (tet, faces) in self.gluings.iter().enumerate() {
            for (face, slot) in faces.iter().enumerate() {
                let Some(g) = slot else { continue };
                for v in 0..4u8 {
                    if v as usize == face {
                        continue;
                    }
                    leuf.unite(
                        le_index(tet, v, face as u8),
                        le_index(g.tet, g.perm.apply(v), g.face),
                    );
                    for w in 0..4u8 {
                        if w == v || w as usize == face {
                            continue;
                        }
                        ouf.unite(
                            (tet * 4 + v as usize) * 4 + w as usize,
                            (g.tet * 4 + g.perm.apply(v) as usize) * 4
                                + g.perm.apply(w) as usize,
                        );
                    }
                }
            }
        }

        // Group corners by vertex class and compute each link's Euler
        // characteristic and connectivity.
        for class in 0..skeleton.vertex_class_count {
            let corners: Vec<(usize, u8)> = skeleton.vertex_slots[class].clone();
            let faces_l = corners.len() as i64;

            // Connectivity of the link across interior link edges.
            let mut corner_id: BTreeMap<(usize, u8), usize> = BTreeMap::new();
            for (i, &c) in corners.iter().enumerate() {
                corner_id.insert(c, i);
            }
            let mut cuf = UnionFind::new(corners.len());
            let mut edge_roots: BTreeMap<usize, ()> = BTreeMap::new();
            let mut boundary_edges = 0i64;
            for &(tet, v) in &corners {
                for f in 0..4u8 {
                    if f == v {
                        continue;
                    }
                    if let Some(g) = self.gluings[tet][f as usize] {
                        let other = (g.tet, g.perm.apply(v));
                        cuf.unite(corner_id[&(tet, v)], corner_id[&other]);
                    } else {
                        boundary_edges += 1;
                    }
                    edge_roots.insert(leuf.find(le_index(tet, v, f)), ());
                }
            }
            let edges_l = edge_roots.len() as i64;

            let mut vert_roots: BTreeMap<usize, ()> = BTreeMap::new();
            for &(tet, v) in &corners {
                for w in 0..4u8 {
                    if w == v {
                        continue;
                    }
                    vert_roots.insert(ouf.find((tet * 4 + v as usize) * 4 + w as usize), ());
                }
            }
            let verts_l = vert_roots.len() as i64;

            let root = cuf.find(0);
            let connected = (0..corners.len()).all(|i| cuf.find(i) == root);
            let chi = verts_l - edges_l + faces_l;
            let ok = if boundary_edges == 0 {
                connected && chi == 2
            } else {
                connected && chi == 1
            };
            if !ok {
                let (tet, vertex) = corners[0];
                return Err(TriangulationError::BadVertexLink { tet, vertex });
            }
        }
        Ok(())
    }

    /// Boundary surface components. Each entry lists the component's faces
    /// as (tet, face), its Euler characteristic, and its edge classes.
    pub fn boundary_components(&self) -> Vec<BoundaryComponent> {
        let skeleton = self.skeleton();
        let boundary_faces: Vec<(usize, u8)> = (0..self.tet_count())
            .flat_map(|tet| (0..4u8).map(move |f| (tet, f)))
            .filter(|&(tet, f)| self.is_boundary_face(tet, f))
            .collect();
        if boundary_faces.is_empty() {
            return Vec::new();
        }
        let index: BTreeMap<(usize, u8), usize> = boundary_faces
            .iter()
            .enumerate()
            .map(|(i, &bf)| (bf, i))
            .collect();
        let mut uf = UnionFind::new(boundary_faces.len());
        for (i, &(tet, f)) in boundary_faces.iter().enumerate() {
            for v in 0..4u8 {
                if v == f {
                    continue;
                }
                // Walk around the edge of the face opposite corner v until
                // the next boundary face. The edge lies in faces f and v;
                // leave the starting tetrahedron through v.
                let (a, b) = {
                    let mut others = (0..4u8).filter(|&w| w != f && w != v);
                    (others.next().unwrap(), others.next().unwrap())
                };
                let partner = self.walk_to_boundary(tet, edge_index(a, b), v);
                uf.unite(i, index[&partner]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<(usize, u8)>> = BTreeMap::new();
        for (i, &bf) in boundary_faces.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(bf);
        }
        groups
            .into_values()
            .map(|faces| {
                let mut edge_classes: BTreeMap<usize, ()> = BTreeMap::new();
                let mut vertex_classes: BTreeMap<usize, ()> = BTreeMap::new();
                for &(tet, f) in &faces {
                    for v in 0..4u8 {
                        if v == f {
                            continue;
                        }
                        vertex_classes.insert(skeleton.vertex_class[tet][v as usize], ());
                    }
                    for (e, [a, b]) in EDGE_VERTICES.iter().enumerate() {
                        if *a != f && *b != f {
                            edge_classes.insert(skeleton.edge_class[tet][e], ());
                        }
                    }
                }
                let chi = vertex_classes.len() as i64 - edge_classes.len() as i64
                    + faces.len() as i64;
                BoundaryComponent {
                    faces,
                    euler_characteristic: chi,
                    edge_classes: edge_classes.into_keys().collect(),
                    vertex_classes: vertex_classes.into_keys().collect(),
                }
            })
            .collect()
    }

    /// From the edge `edge` of tetrahedron `tet`, leaving through the face
    /// `via` (a face containing the edge), pivot through gluings until an
    /// unglued face is reached; returns that boundary (tet, face).
    pub fn walk_to_boundary(&self, tet: usize, edge: u8, via: u8) -> (usize, u8) {
        let mut tet = tet;
        let mut edge = edge;
        let mut via = via;
        loop {
            match self.gluings[tet][via as usize] {
                None => return (tet, via),
                Some(g) => {
                    let [a, b] = EDGE_VERTICES[edge as usize];
                    let (ia, ib) = (g.perm.apply(a), g.perm.apply(b));
                    let entered = g.face;
                    tet = g.tet;
                    edge = edge_index(ia, ib);
                    // The next exit is the other face containing the edge.
                    via = (0..4u8)
                        .find(|&f| f != entered && f != ia && f != ib)
                        .expect("two faces contain an edge");
                }
            }
        }
    }

    /// All (tetrahedron, edge-slot) incidences around an edge in pivot
    /// order, and whether the walk closes up (true exactly for interior
    /// edges of the edge's class).
    pub fn edge_star(&self, tet: usize, edge: u8) -> (Vec<(usize, u8)>, bool) {
        let [a, b] = EDGE_VERTICES[edge as usize];
        let (via_first, via_second) = {
            let mut others = (0..4u8).filter(|&v| v != a && v != b);
            (others.next().unwrap(), others.next().unwrap())
        };
        let mut slots = vec![(tet, edge)];
        let mut closed = false;
        for (direction, start_via) in [(0, via_first), (1, via_second)] {
            let (mut cur_tet, mut cur_edge, mut via) = (tet, edge, start_via);
            loop {
                let g = match self.gluings[cur_tet][via as usize] {
                    None => break,
                    Some(g) => g,
                };
                let [x, y] = EDGE_VERTICES[cur_edge as usize];
                let (ix, iy) = (g.perm.apply(x), g.perm.apply(y));
                let entered = g.face;
                cur_tet = g.tet;
                cur_edge = edge_index(ix, iy);
                via = (0..4u8)
                    .find(|&f| f != entered && f != ix && f != iy)
                    .expect("two faces contain an edge");
                if (cur_tet, cur_edge) == (tet, edge) {
                    closed = true;
                    break;
                }
                slots.push((cur_tet, cur_edge));
            }
            if direction == 0 && closed {
                break; // the walk came all the way around
            }
        }
        (slots, closed)
    }

    /// Bit-exact line-based serialization: first line the tetrahedron
    /// count, then one line per tetrahedron with four entries, `-` for a
    /// boundary face or `g:f:p` with target tetrahedron, target face, and
    /// the face permutation encoded 0-5 in lexicographic order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.tet_count());
        for faces in self.gluings.iter() {
            let mut entries = Vec::new();
            for (face, slot) in faces.iter().enumerate() {
                match slot {
                    None => entries.push("-".to_string()),
                    Some(g) => {
                        let p = encode_face_perm(face as u8, g);
                        entries.push(format!("{}:{}:{}", g.tet, g.face, p));
                    }
                }
            }
            let _ = writeln!(out, "{}", entries.join(" "));
        }
        out
    }

    /// SHA-256 of [`Triangulation::serialize`], lowercase hex.
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.serialize().as_bytes());
        let mut s = String::with_capacity(64);
        for byte in digest {
            let _ = write!(s, "{byte:02x}");
        }
        s
    }

    /// Parse the line-based serialization.
    pub fn parse(text: &str) -> Result<Self, TriangulationError> {
        let mut lines = text.lines();
        let t: usize = lines
            .next()
            .ok_or_else(|| TriangulationError::Parse("empty input".into()))?
            .trim()
            .parse()
            .map_err(|e| TriangulationError::Parse(format!("bad count: {e}")))?;
        let mut gluings = Vec::with_capacity(t);
        for tet in 0..t {
            let line = lines
                .next()
                .ok_or_else(|| TriangulationError::Parse(format!("missing tetrahedron {tet}")))?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != 4 {
                return Err(TriangulationError::Parse(format!(
                    "tetrahedron {tet}: expected 4 entries"
                )));
            }
            let mut faces = [None; 4];
            for (face, entry) in entries.iter().enumerate() {
                if *entry == "-" {
                    continue;
                }
                let parts: Vec<&str> = entry.split(':').collect();
                if parts.len() != 3 {
                    return Err(TriangulationError::Parse(format!(
                        "tetrahedron {tet} face {face}: bad entry {entry:?}"
                    )));
                }
                let parse = |s: &str| -> Result<usize, TriangulationError> {
                    s.parse()
                        .map_err(|e| TriangulationError::Parse(format!("bad number {s:?}: {e}")))
                };
                let (g, f, p) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
                if f >= 4 || p >= 6 {
                    return Err(TriangulationError::Parse(format!(
                        "tetrahedron {tet} face {face}: entry out of range"
                    )));
                }
                faces[face] = Some(decode_face_perm(face as u8, g, f as u8, p as u8));
            }
            gluings.push(faces);
        }
        Triangulation::new(gluings)
    }

    /// Barycentric subdivision: each tetrahedron becomes 24, one per flag
    /// (vertex, edge, face, tetrahedron). Returns the subdivision and the
    /// provenance of every new vertex class.
    pub fn barycentric_subdivision(&self) -> (Triangulation, SubdivisionInfo) {
        let t = self.gluings.len();
        let perms = all_perms4();
        let perm_rank: BTreeMap<[u8; 4], usize> =
            perms.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let flag_tet = |tet: usize, images: [u8; 4]| 24 * tet + perm_rank[&images];

        let mut gluings: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; 24 * t];
        for tet in 0..t {
            for (i, &pi) in perms.iter().enumerate() {
                let me = 24 * tet + i;
                let [a, b, c, d] = pi;
                // Internal neighbors inside the same original tetrahedron:
                // swap the vertex with the edge (face 0), the edge's other
                // choice in the face (face 1), or the face (face 2).
                let neighbors = [
                    flag_tet(tet, [b, a, c, d]),
                    flag_tet(tet, [a, c, b, d]),
                    flag_tet(tet, [a, b, d, c]),
                ];
                for (face, &target) in neighbors.iter().enumerate() {
                    gluings[me][face] = Some(FaceGluing {
                        tet: target,
                        face: face as u8,
                        perm: Perm4::identity(),
                    });
                }
                // External: across the original face opposite d.
                if let Some(g) = self.gluings[tet][d as usize] {
                    let images = [
                        g.perm.apply(a),
                        g.perm.apply(b),
                        g.perm.apply(c),
                        g.perm.apply(d),
                    ];
                    gluings[me][3] = Some(FaceGluing {
                        tet: flag_tet(g.tet, images),
                        face: 3,
                        perm: Perm4::identity(),
                    });
                }
            }
        }
        let sub = Triangulation { gluings };

        // Provenance of each new vertex class: flag vertex 0 sits at an
        // original vertex, 1 at an edge midpoint, 2 at a face center, 3 at a
        // tetrahedron center.
        let old_skeleton = self.skeleton();
        let new_skeleton = sub.skeleton();
        let mut provenance = vec![None; new_skeleton.vertex_class_count];
        for tet in 0..t {
            for (i, &pi) in perms.iter().enumerate() {
                let me = 24 * tet + i;
                let [a, b, _, d] = pi;
                let items = [
                    VertexProvenance::Vertex(old_skeleton.vertex_class[tet][a as usize]),
                    VertexProvenance::Edge(
                        old_skeleton.edge_class[tet][edge_index(a, b) as usize],
                    ),
                    VertexProvenance::Face(old_skeleton.face_class[tet][d as usize]),
                    VertexProvenance::Tet(tet),
                ];
                for (v, item) in items.into_iter().enumerate() {
                    let class = new_skeleton.vertex_class[me][v];
                    match &provenance[class] {
                        None => provenance[class] = Some(item),
                        Some(existing) => debug_assert_eq!(*existing, item),
                    }
                }
            }
        }
        let provenance: Vec<VertexProvenance> =
            provenance.into_iter().map(|p| p.expect("covered")).collect();

        // Marked-curve transfer: each original marked edge {a,b} yields the
        // new edges from its endpoints to its midpoint; record for each
        // original edge class the new edge classes of those halves.
        let mut half_edges: Vec<Vec<usize>> = vec![Vec::new(); old_skeleton.edge_class_count];
        for tet in 0..t {
            for (i, &pi) in perms.iter().enumerate() {
                let me = 24 * tet + i;
                let [a, b, _, _] = pi;
                let old_class = old_skeleton.edge_class[tet][edge_index(a, b) as usize];
                // New edge between flag vertices 0 (corner a) and 1 (mid ab).
                let new_class = new_skeleton.edge_class[me][edge_index(0, 1) as usize];
                if !half_edges[old_class].contains(&new_class) {
                    half_edges[old_class].push(new_class);
                }
            }
        }
        for halves in &mut half_edges {
            halves.sort_unstable();
        }

        (
            sub,
            SubdivisionInfo {
                provenance,
                half_edges,
            },
        )
    }
}

/// Where a vertex class of a barycentric subdivision came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VertexProvenance {
    /// An original vertex class.
    Vertex(usize),
    /// The midpoint of an original edge class.
    Edge(usize),
    /// The center of an original face class.
    Face(usize),
    /// The center of an original tetrahedron.
    Tet(usize),
}

/// Provenance data accompanying a barycentric subdivision.
pub struct SubdivisionInfo {
    /// For each vertex class of the subdivision, its original carrier.
    pub provenance: Vec<VertexProvenance>,
    /// For each original edge class, the new edge classes of its two halves
    /// (endpoint to midpoint).
    pub half_edges: Vec<Vec<usize>>,
}

/// One boundary surface component.
pub struct BoundaryComponent {
    pub faces: Vec<(usize, u8)>,
    pub euler_characteristic: i64,
    pub edge_classes: Vec<usize>,
    pub vertex_classes: Vec<usize>,
}

fn all_perms4() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    let mut items = [0u8, 1, 2, 3];
    permute(&mut items, 0, &mut out);
    out.sort_unstable();
    out
}

fn permute(items: &mut [u8; 4], k: usize, out: &mut Vec<[u8; 4]>) {
    if k == 4 {
        out.push(*items);
        return;
    }
    for i in k..4 {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Arrangements of three items in lexicographic index order.
const TRIPLE_ARRANGEMENTS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Encode a face gluing's vertex correspondence as 0-5: the images of the
/// source face's sorted vertices, ranked among arrangements of the target
/// face's sorted vertices.
fn encode_face_perm(face: u8, g: &FaceGluing) -> u8 {
    let src: Vec<u8> = (0..4u8).filter(|&v| v != face).collect();
    let dst: Vec<u8> = (0..4u8).filter(|&v| v != g.face).collect();
    let images: Vec<u8> = src.iter().map(|&v| g.perm.apply(v)).collect();
    let positions: Vec<usize> = images
        .iter()
        .map(|img| dst.iter().position(|d| d == img).expect("face onto face"))
        .collect();
    TRIPLE_ARRANGEMENTS
        .iter()
        .position(|a| a == positions.as_slice())
        .expect("a permutation of three items") as u8
}

fn decode_face_perm(face: u8, target_tet: usize, target_face: u8, code: u8) -> FaceGluing {
    let src: Vec<u8> = (0..4u8).filter(|&v| v != face).collect();
    let dst: Vec<u8> = (0..4u8).filter(|&v| v != target_face).collect();
    let arrangement = TRIPLE_ARRANGEMENTS[code as usize];
    let mut images = [u8::MAX; 4];
    images[face as usize] = target_face;
    for (i, &s) in src.iter().enumerate() {
        images[s as usize] = dst[arrangement[i]];
    }
    FaceGluing {
        tet: target_tet,
        face: target_face,
        perm: Perm4::new(images),
    }
}

/// A single unglued tetrahedron (a 3-ball).
pub fn one_tetrahedron() -> Triangulation {
    Triangulation::new(vec![[None; 4]]).expect("valid")
}

/// Two tetrahedra glued along all four faces by the identity on vertex
/// labels: a triangulated 3-sphere.
pub fn pillow_sphere() -> Triangulation {
    let glue = |tet: usize| {
        let mut faces = [None; 4];
        for (f, slot) in faces.iter_mut().enumerate() {
            *slot = Some(FaceGluing {
                tet,
                face: f as u8,
                perm: Perm4::identity(),
            });
        }
        faces
    };
    Triangulation::new(vec![glue(1), glue(0)]).expect("valid")
}

/// A one-tetrahedron solid torus: face 0 is glued to face 1 of the same
/// tetrahedron by the vertex cycle 0→1→2→3→0, leaving a torus boundary
/// with one vertex class and three edge classes.
pub fn solid_torus() -> Triangulation {
    let faces = [
        Some(FaceGluing {
            tet: 0,
            face: 1,
            perm: Perm4::new([1, 2, 3, 0]),
        }),
        Some(FaceGluing {
            tet: 0,
            face: 0,
            perm: Perm4::new([3, 0, 1, 2]),
        }),
        None,
        None,
    ];
    Triangulation::new(vec![faces]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tetrahedron_skeleton() {
        let t = one_tetrahedron();
        let s = t.skeleton();
        assert_eq!(s.vertex_class_count, 4);
        assert_eq!(s.edge_class_count, 6);
        assert_eq!(s.face_class_count, 4);
        assert!(s.edge_on_boundary.iter().all(|&b| b));
        assert!(t.validate().is_ok());
        let boundary = t.boundary_components();
        assert_eq!(boundary.len(), 1);
        assert_eq!(boundary[0].euler_characteristic, 2);
    }

    #[test]
    fn two_tetrahedra_glued_along_one_face() {
        let perm = Perm4::identity();
        let g01 = FaceGluing {
            tet: 1,
            face: 0,
            perm,
        };
        let g10 = FaceGluing {
            tet: 0,
            face: 0,
            perm,
        };
        let t = Triangulation::new(vec![
            [Some(g01), None, None, None],
            [Some(g10), None, None, None],
        ])
        .unwrap();
        assert!(t.validate().is_ok());
        let s = t.skeleton();
        assert_eq!(s.vertex_class_count, 5);
        assert_eq!(s.edge_class_count, 9);
        assert_eq!(s.face_class_count, 7);
        let boundary = t.boundary_components();
        assert_eq!(boundary.len(), 1);
        assert_eq!(boundary[0].euler_characteristic, 2);
        assert_eq!(boundary[0].faces.len(), 6);
    }

    #[test]
    fn pillow_sphere_is_closed_and_valid() {
        let t = pillow_sphere();
        assert!(t.validate().is_ok());
        assert_eq!(t.boundary_face_count(), 0);
        let s = t.skeleton();
        assert_eq!(s.vertex_class_count, 4);
        assert_eq!(s.edge_class_count, 6);
        assert_eq!(s.face_class_count, 4);
        // chi = V - E + F - T = 4 - 6 + 4 - 2.
        assert_eq!(
            s.vertex_class_count as i64 - s.edge_class_count as i64
                + s.face_class_count as i64
                - t.tet_count() as i64,
            0
        );
    }

    #[test]
    fn self_glued_face_is_rejected() {
        // Glue face 0 of the only tetrahedron to its own face 0.
        let perm = Perm4::new([0, 2, 1, 3]);
        let g = FaceGluing {
            tet: 0,
            face: 0,
            perm,
        };
        assert!(matches!(
            Triangulation::new(vec![[Some(g), None, None, None]]),
            Err(TriangulationError::SelfGluedFace { .. })
        ));
    }

    #[test]
    fn reversed_edge_is_rejected() {
        // Glue face 0 to face 1 of the same tetrahedron reversing edge {2,3}.
        let perm = Perm4::new([1, 0, 3, 2]);
        let g0 = FaceGluing {
            tet: 0,
            face: 1,
            perm,
        };
        let g1 = FaceGluing {
            tet: 0,
            face: 0,
            perm: perm.inverse(),
        };
        let t = Triangulation::new(vec![[Some(g0), Some(g1), None, None]]).unwrap();
        assert!(matches!(
            t.validate(),
            Err(TriangulationError::ReversedEdge { .. })
        ));
    }

    #[test]
    fn involution_is_enforced() {
        let perm = Perm4::identity();
        let g01 = FaceGluing {
            tet: 1,
            face: 0,
            perm,
        };
        // Missing reverse gluing.
        assert!(matches!(
            Triangulation::new(vec![[Some(g01), None, None, None], [None; 4]]),
            Err(TriangulationError::NotInvolutive { .. })
        ));
    }

    #[test]
    fn from_simplicial_builds_gluings() {
        // Two tetrahedra sharing the face {1,2,3}.
        let t = Triangulation::from_simplicial(&[[0, 1, 2, 3], [4, 1, 2, 3]]).unwrap();
        assert!(t.validate().is_ok());
        assert_eq!(t.boundary_face_count(), 6);
        let s = t.skeleton();
        assert_eq!(s.vertex_class_count, 5);
    }

    #[test]
    fn serialization_round_trip() {
        for t in [one_tetrahedron(), pillow_sphere()] {
            let text = t.serialize();
            let back = Triangulation::parse(&text).unwrap();
            assert_eq!(back, t);
            assert_eq!(back.hash_hex(), t.hash_hex());
        }
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = pillow_sphere().hash_hex();
        let b = pillow_sphere().hash_hex();
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn perm_encoding_round_trip() {
        for code in 0..6u8 {
            for face in 0..4u8 {
                for target_face in 0..4u8 {
                    let g = decode_face_perm(face, 7, target_face, code);
                    assert_eq!(g.perm.apply(face), target_face);
                    assert_eq!(encode_face_perm(face, &g), code);
                }
            }
        }
    }

    #[test]
    fn barycentric_subdivision_counts() {
        let (sub, info) = one_tetrahedron().barycentric_subdivision();
        assert_eq!(sub.tet_count(), 24);
        assert!(sub.validate().is_ok());
        let s = sub.skeleton();
        // 4 corners + 6 midpoints + 4 face centers + 1 center.
        assert_eq!(s.vertex_class_count, 15);
        let mut by_kind = [0usize; 4];
        for p in &info.provenance {
            match p {
                VertexProvenance::Vertex(_) => by_kind[0] += 1,
                VertexProvenance::Edge(_) => by_kind[1] += 1,
                VertexProvenance::Face(_) => by_kind[2] += 1,
                VertexProvenance::Tet(_) => by_kind[3] += 1,
            }
        }
        assert_eq!(by_kind, [4, 6, 4, 1]);
        // Each original edge has exactly two halves.
        assert!(info.half_edges.iter().all(|h| h.len() == 2));

        let (sub2, _) = sub.barycentric_subdivision();
        assert_eq!(sub2.tet_count(), 576);
        assert!(sub2.validate().is_ok());
    }

    #[test]
    fn barycentric_subdivision_of_closed_manifold() {
        let (sub, _) = pillow_sphere().barycentric_subdivision();
        assert_eq!(sub.tet_count(), 48);
        assert!(sub.validate().is_ok());
        assert_eq!(sub.boundary_face_count(), 0);
    }

    #[test]
    fn boundary_of_subdivided_ball_is_a_sphere() {
        let (sub, _) = one_tetrahedron().barycentric_subdivision();
        let boundary = sub.boundary_components();
        assert_eq!(boundary.len(), 1);
        assert_eq!(boundary[0].euler_characteristic, 2);
        assert_eq!(boundary[0].faces.len(), 24);
    }
}
