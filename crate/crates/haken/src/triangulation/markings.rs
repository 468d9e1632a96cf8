//! Marked boundary curves on a drilled link complement.
//!
//! A complement carries one meridian per boundary torus and, when there are
//! several boundary components, a set of arcs joining them. Both are stored
//! as lists of (tetrahedron, edge-index) slots. A meridian is a simple
//! closed loop of boundary edges whose mod-2 homology class in the whole
//! complex is nonzero; such a loop crosses every compressing disk and every
//! spanning surface an odd number of times, which is exactly what the
//! decision procedures need. Arcs run through interior edges only, with
//! endpoints on two distinct boundary components.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{BoundaryComponent, Skeleton, Triangulation, EDGE_VERTICES};
use crate::linalg::{Gf2Span, Gf2Vec};

/// A structural defect in boundary markings.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarkingError {
    #[error("expected {expected} meridians for {expected} boundary components, found {found}")]
    MeridianCount { expected: usize, found: usize },
    #[error("meridian {index} leaves boundary component {index}")]
    MeridianOffTorus { index: usize },
    #[error("meridian {index} is not a closed edge loop")]
    MeridianNotClosed { index: usize },
    #[error("meridian {index} repeats an edge class")]
    MeridianRepeatsEdge { index: usize },
    #[error("expected {expected} arcs, found {found}")]
    ArcCount { expected: usize, found: usize },
    #[error("arc {index} runs along a boundary edge")]
    ArcOnBoundary { index: usize },
    #[error("arc {index} is not an open edge path")]
    ArcNotPath { index: usize },
    #[error("arc {index} repeats an edge class")]
    ArcRepeatsEdge { index: usize },
    #[error("arc {index} does not join boundary component 0 to component {target}")]
    ArcEndpoints { index: usize, target: usize },
}

/// A triangulated link complement together with its marked meridians and
/// connecting arcs. Meridians are listed in the canonical order of the
/// boundary components; arc `i` joins component 0 to component `i + 1`.
#[derive(Debug, Clone)]
pub struct MarkedComplement {
    pub triangulation: Triangulation,
    /// One closed loop of (tetrahedron, edge-index) slots per boundary torus.
    pub meridians: Vec<Vec<(usize, u8)>>,
    /// Interior edge paths joining boundary component 0 to each other one.
    pub arcs: Vec<Vec<(usize, u8)>>,
}

impl MarkedComplement {
    /// Mark a complement using only its combinatorics: on each boundary
    /// torus, take the first spanning-tree fundamental cycle that does not
    /// bound mod 2 in the complex.
    pub fn from_intrinsic(triangulation: Triangulation) -> MarkedComplement {
        let skeleton = triangulation.skeleton();
        let components = triangulation.boundary_components();
        let meridians = intrinsic_meridians(&skeleton, &components);
        let arcs = connecting_arcs(&skeleton, &components);
        MarkedComplement {
            triangulation,
            meridians,
            arcs,
        }
    }

    /// Mark a complement with externally supplied meridians, one per
    /// boundary torus in any order; arcs are computed here. Panics if the
    /// meridians do not land one on each torus.
    pub(crate) fn with_meridians(
        triangulation: Triangulation,
        meridians: Vec<Vec<(usize, u8)>>,
    ) -> MarkedComplement {
        let skeleton = triangulation.skeleton();
        let components = triangulation.boundary_components();
        assert_eq!(
            meridians.len(),
            components.len(),
            "one meridian per boundary component"
        );
        let mut ordered: Vec<Option<Vec<(usize, u8)>>> = vec![None; components.len()];
        for meridian in meridians {
            let (tet, e) = meridian[0];
            let class = skeleton.edge_class[tet][e as usize];
            let torus = components
                .iter()
                .position(|c| c.edge_classes.binary_search(&class).is_ok())
                .expect("meridian edge lies on a boundary component");
            assert!(
                ordered[torus].is_none(),
                "two meridians land on one boundary component"
            );
            ordered[torus] = Some(meridian);
        }
        let meridians = ordered.into_iter().map(|m| m.expect("filled")).collect();
        let arcs = connecting_arcs(&skeleton, &components);
        MarkedComplement {
            triangulation,
            meridians,
            arcs,
        }
    }

    /// Text form of the markings: one `meridian` line per boundary torus
    /// and one `arc` line per connecting arc, each listing `tet:edge`
    /// slots in walk order.
    pub fn markings_text(&self) -> String {
        let mut out = String::new();
        for meridian in &self.meridians {
            out.push_str("meridian");
            for &(tet, e) in meridian {
                let _ = write!(out, " {tet}:{e}");
            }
            out.push('\n');
        }
        for arc in &self.arcs {
            out.push_str("arc");
            for &(tet, e) in arc {
                let _ = write!(out, " {tet}:{e}");
            }
            out.push('\n');
        }
        out
    }

    /// SHA-256 over the triangulation serialization followed by the
    /// markings text, lowercase hex. This is the digest certificates bind.
    pub fn hash_hex(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.triangulation.serialize().as_bytes());
        hasher.update(self.markings_text().as_bytes());
        let digest = hasher.finalize();
        let mut s = String::with_capacity(64);
        for byte in digest {
            let _ = write!(s, "{byte:02x}");
        }
        s
    }

    /// Edge classes used by each meridian, in boundary-component order.
    pub fn meridian_edge_classes(&self, skeleton: &Skeleton) -> Vec<BTreeSet<usize>> {
        curve_classes(&self.meridians, skeleton)
    }

    /// Edge classes used by each arc.
    pub fn arc_edge_classes(&self, skeleton: &Skeleton) -> Vec<BTreeSet<usize>> {
        curve_classes(&self.arcs, skeleton)
    }

    /// Check every structural property of the markings: meridians are
    /// simple closed loops, one per boundary torus, staying on their torus;
    /// arcs are simple open interior-edge paths joining component 0 to each
    /// other component.
    pub fn validate(&self) -> Result<(), MarkingError> {
        let skeleton = self.triangulation.skeleton();
        let components = self.triangulation.boundary_components();
        if self.meridians.len() != components.len() {
            return Err(MarkingError::MeridianCount {
                expected: components.len(),
                found: self.meridians.len(),
            });
        }
        for (index, meridian) in self.meridians.iter().enumerate() {
            let classes = slot_classes(meridian, &skeleton);
            if classes.is_empty() {
                return Err(MarkingError::MeridianNotClosed { index });
            }
            let allowed: BTreeSet<usize> = components[index].edge_classes.iter().copied().collect();
            if classes.iter().any(|c| !allowed.contains(c)) {
                return Err(MarkingError::MeridianOffTorus { index });
            }
            let distinct: BTreeSet<usize> = classes.iter().copied().collect();
            if distinct.len() != classes.len() {
                return Err(MarkingError::MeridianRepeatsEdge { index });
            }
            match walk_ends(&endpoint_pairs(&classes, &skeleton)) {
                Some((s, t)) if s == t => {}
                _ => return Err(MarkingError::MeridianNotClosed { index }),
            }
        }
        let expected_arcs = components.len().saturating_sub(1);
        if self.arcs.len() != expected_arcs {
            return Err(MarkingError::ArcCount {
                expected: expected_arcs,
                found: self.arcs.len(),
            });
        }
        for (index, arc) in self.arcs.iter().enumerate() {
            let classes = slot_classes(arc, &skeleton);
            if classes.is_empty() {
                return Err(MarkingError::ArcNotPath { index });
            }
            if classes.iter().any(|&c| skeleton.edge_on_boundary[c]) {
                return Err(MarkingError::ArcOnBoundary { index });
            }
            let distinct: BTreeSet<usize> = classes.iter().copied().collect();
            if distinct.len() != classes.len() {
                return Err(MarkingError::ArcRepeatsEdge { index });
            }
            let (s, t) = match walk_ends(&endpoint_pairs(&classes, &skeleton)) {
                Some((s, t)) if s != t => (s, t),
                _ => return Err(MarkingError::ArcNotPath { index }),
            };
            let target = index + 1;
            let on = |component: &BoundaryComponent, v: usize| {
                component.vertex_classes.binary_search(&v).is_ok()
            };
            let joins = (on(&components[0], s) && on(&components[target], t))
                || (on(&components[0], t) && on(&components[target], s));
            if !joins {
                return Err(MarkingError::ArcEndpoints { index, target });
            }
        }
        Ok(())
    }
}

/// Edge classes of the slots of each curve, in order.
fn curve_classes(curves: &[Vec<(usize, u8)>], skeleton: &Skeleton) -> Vec<BTreeSet<usize>> {
    curves
        .iter()
        .map(|curve| slot_classes(curve, skeleton).into_iter().collect())
        .collect()
}

fn slot_classes(curve: &[(usize, u8)], skeleton: &Skeleton) -> Vec<usize> {
    curve
        .iter()
        .map(|&(tet, e)| skeleton.edge_class[tet][e as usize])
        .collect()
}

/// Endpoint vertex classes of an edge class.
fn edge_endpoints(skeleton: &Skeleton, class: usize) -> (usize, usize) {
    let (tet, e) = skeleton.edge_slots[class][0];
    let [a, b] = EDGE_VERTICES[e as usize];
    (
        skeleton.vertex_class[tet][a as usize],
        skeleton.vertex_class[tet][b as usize],
    )
}

fn endpoint_pairs(classes: &[usize], skeleton: &Skeleton) -> Vec<(usize, usize)> {
    classes
        .iter()
        .map(|&c| edge_endpoints(skeleton, c))
        .collect()
}

/// Endpoints of a walk whose edges are given by endpoint pairs in order;
/// `None` if consecutive edges do not share a vertex.
fn walk_ends(pairs: &[(usize, usize)]) -> Option<(usize, usize)> {
    let &(first_a, first_b) = pairs.first()?;
    for start in [first_a, first_b] {
        let mut current = if start == first_a { first_b } else { first_a };
        let mut consistent = true;
        for &(x, y) in &pairs[1..] {
            if x == current {
                current = y;
            } else if y == current {
                current = x;
            } else {
                consistent = false;
                break;
            }
        }
        if consistent {
            return Some((start, current));
        }
    }
    None
}

/// Mod-2 boundaries of all face classes, one vector per class over the
/// edge-class index space. Two edges of a face falling into one class
/// cancel, as they do in the simplicial boundary map.
fn face_boundary_span(skeleton: &Skeleton) -> Gf2Span {
    let mut span = Gf2Span::new(skeleton.edge_class_count);
    let mut seen = vec![false; skeleton.face_class_count];
    for (tet, faces) in skeleton.face_class.iter().enumerate() {
        for (f, &class) in faces.iter().enumerate() {
            if seen[class] {
                continue;
            }
            seen[class] = true;
            let support = EDGE_VERTICES
                .iter()
                .enumerate()
                .filter(|(_, [a, b])| *a as usize != f && *b as usize != f)
                .map(|(e, _)| skeleton.edge_class[tet][e]);
            span.insert(Gf2Vec::from_support(skeleton.edge_class_count, support));
        }
    }
    span
}

/// One meridian per boundary component: the first spanning-tree fundamental
/// cycle of the component's edge graph that does not bound mod 2.
fn intrinsic_meridians(
    skeleton: &Skeleton,
    components: &[BoundaryComponent],
) -> Vec<Vec<(usize, u8)>> {
    let span = face_boundary_span(skeleton);
    components
        .iter()
        .map(|component| torus_meridian(skeleton, component, &span))
        .collect()
}

fn torus_meridian(
    skeleton: &Skeleton,
    component: &BoundaryComponent,
    span: &Gf2Span,
) -> Vec<(usize, u8)> {
    // Spanning tree of the component's graph by breadth-first search from
    // its smallest vertex class, scanning edges in sorted order.
    let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &v in &component.vertex_classes {
        adjacency.insert(v, Vec::new());
    }
    for &e in &component.edge_classes {
        let (a, b) = edge_endpoints(skeleton, e);
        if a == b {
            continue; // a loop edge can never enter the tree
        }
        adjacency.get_mut(&a).expect("endpoint on torus").push((b, e));
        adjacency.get_mut(&b).expect("endpoint on torus").push((a, e));
    }
    let root = component.vertex_classes[0];
    let mut parent: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut tree_edges: BTreeSet<usize> = BTreeSet::new();
    let mut queue = VecDeque::from([root]);
    let mut visited: BTreeSet<usize> = BTreeSet::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adjacency[&v] {
            if visited.insert(w) {
                parent.insert(w, (v, e));
                tree_edges.insert(e);
                queue.push_back(w);
            }
        }
    }
    // Each non-tree edge closes one fundamental cycle. Some cycle must be
    // nonzero in mod-2 homology: the torus carries a class meeting the
    // removed loop once, that class is a sum of fundamental cycles, and the
    // bounding cycles form a subspace.
    for &chord in &component.edge_classes {
        if tree_edges.contains(&chord) {
            continue;
        }
        let (a, b) = edge_endpoints(skeleton, chord);
        let cycle = if a == b {
            vec![chord]
        } else {
            let ancestors_a = root_path(&parent, a);
            let ancestor_set: BTreeSet<usize> = ancestors_a.iter().map(|&(v, _)| v).collect();
            let mut up_b = Vec::new();
            let mut v = b;
            while !ancestor_set.contains(&v) {
                let (p, e) = parent[&v];
                up_b.push(e);
                v = p;
            }
            let meet = v;
            let mut cycle = vec![chord];
            cycle.extend(up_b);
            let down_a: Vec<usize> = ancestors_a
                .iter()
                .take_while(|&&(v, _)| v != meet)
                .map(|&(_, e)| e)
                .collect();
            cycle.extend(down_a.into_iter().rev());
            cycle
        };
        let vector = Gf2Vec::from_support(skeleton.edge_class_count, cycle.iter().copied());
        if !span.contains(&vector) {
            return cycle
                .into_iter()
                .map(|c| skeleton.edge_slots[c][0])
                .collect();
        }
    }
    panic!("every cycle on a boundary torus bounds mod 2");
}

/// Vertices above `start` on the way to the tree root, paired with the
/// tree edge leaving each; starts at `start` itself.
fn root_path(parent: &BTreeMap<usize, (usize, usize)>, start: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut v = start;
    while let Some(&(p, e)) = parent.get(&v) {
        out.push((v, e));
        v = p;
    }
    out.push((v, usize::MAX)); // the root, with no outgoing tree edge
    out
}

/// Arcs joining boundary component 0 to every other component, found by
/// breadth-first search through interior edges from the smallest vertex
/// class of component 0.
pub(crate) fn connecting_arcs(
    skeleton: &Skeleton,
    components: &[BoundaryComponent],
) -> Vec<Vec<(usize, u8)>> {
    if components.len() <= 1 {
        return Vec::new();
    }
    let mut adjacency: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for class in 0..skeleton.edge_class_count {
        if skeleton.edge_on_boundary[class] {
            continue;
        }
        let (a, b) = edge_endpoints(skeleton, class);
        if a == b {
            continue;
        }
        adjacency.entry(a).or_default().push((b, class));
        adjacency.entry(b).or_default().push((a, class));
    }
    let source = components[0].vertex_classes[0];
    let mut parent: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut visited: BTreeSet<usize> = BTreeSet::from([source]);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        if let Some(neighbors) = adjacency.get(&v) {
            for &(w, e) in neighbors {
                if visited.insert(w) {
                    parent.insert(w, (v, e));
                    queue.push_back(w);
                }
            }
        }
    }
    components[1..]
        .iter()
        .map(|component| {
            let target = component
                .vertex_classes
                .iter()
                .copied()
                .find(|v| visited.contains(v))
                .expect("boundary components connect through interior edges");
            let mut classes = Vec::new();
            let mut v = target;
            while let Some(&(p, e)) = parent.get(&v) {
                classes.push(e);
                v = p;
            }
            classes.reverse();
            classes
                .into_iter()
                .map(|c| skeleton.edge_slots[c][0])
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::solid_torus;
    use super::*;

    #[test]
    fn solid_torus_fixture_is_valid() {
        let t = solid_torus();
        assert!(t.validate().is_ok());
        let boundary = t.boundary_components();
        assert_eq!(boundary.len(), 1);
        assert_eq!(boundary[0].euler_characteristic, 0);
    }

    #[test]
    fn solid_torus_meridian() {
        let marked = MarkedComplement::from_intrinsic(solid_torus());
        assert_eq!(marked.meridians.len(), 1);
        assert!(marked.arcs.is_empty());
        assert!(!marked.meridians[0].is_empty());
        marked.validate().expect("markings check out");
    }

    #[test]
    fn markings_are_deterministic() {
        let a = MarkedComplement::from_intrinsic(solid_torus());
        let b = MarkedComplement::from_intrinsic(solid_torus());
        assert_eq!(a.markings_text(), b.markings_text());
        assert_eq!(a.hash_hex(), b.hash_hex());
        assert_eq!(a.hash_hex().len(), 64);
    }

    #[test]
    fn walk_end_detection() {
        // A triangle of edges closes up.
        assert_eq!(walk_ends(&[(0, 1), (1, 2), (2, 0)]), Some((0, 0)));
        // An open path reports its two ends.
        assert_eq!(walk_ends(&[(3, 1), (1, 4)]), Some((3, 4)));
        // A loop edge alone is a closed walk.
        assert_eq!(walk_ends(&[(5, 5)]), Some((5, 5)));
        // Disconnected edges are not a walk.
        assert_eq!(walk_ends(&[(0, 1), (2, 3)]), None);
    }

    #[test]
    fn meridian_class_is_essential() {
        let t = solid_torus();
        let skeleton = t.skeleton();
        let span = face_boundary_span(&skeleton);
        let marked = MarkedComplement::from_intrinsic(t);
        let classes = marked.meridian_edge_classes(&skeleton);
        let vector = Gf2Vec::from_support(
            skeleton.edge_class_count,
            classes[0].iter().copied(),
        );
        assert!(!span.contains(&vector));
    }
}
