//! Link diagrams: parsing, validation, and combinatorial structure.
//!
//! A link diagram is a 4-valent plane graph. Vertices are crossings; each
//! crossing has four edge-ends in counterclockwise cyclic order, with the
//! under-strand occupying positions 0 and 2 and the over-strand positions 1
//! and 3. Crossing-free circles cannot be expressed by crossings, so the
//! diagram also carries a count of such loops.
//!
//! Two encodings are accepted:
//!
//! * PD-code text `PD[X(a,b,c,d),...]` with 1-based arc labels listed
//!   counterclockwise starting at the incoming under-strand, optionally
//!   followed by `L[k]` to append `k` crossing-free loops (also accepted on
//!   its own);
//! * JSON, `{"crossings":[{"ends":[a,b,c,d]}],"loops":k}`, with the same
//!   label conventions.
//!
//! Validation checks that the arc labels knit the crossings into closed
//! circuits and that the rotation system given by the counterclockwise
//! conventions is planar (every connected component's face count satisfies
//! Euler's formula for the sphere). The embedding downstream construction
//! consumes is exactly this rotation system.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Errors produced while parsing or validating a link diagram.
#[derive(Debug, Error)]
pub enum DiagramError {
    /// The input text could not be tokenized as PD-code / loop tokens.
    #[error("syntax error: {0}")]
    Syntax(String),
    /// An arc label occurred more than twice.
    #[error("arc label {label} appears {count} times; labels may appear at most twice")]
    LabelOveruse { label: u32, count: usize },
    /// Arc labels did not resolve into a perfect matching of crossing ends.
    #[error("cannot resolve arc connections: {0}")]
    Connections(String),
    /// A diagram must contain at least one crossing or loop.
    #[error("diagram is empty: no crossings and no loops")]
    Empty,
    /// The rotation system does not embed in the plane.
    #[error("rotation system is not planar: a component has Euler characteristic {0}, expected 2")]
    NotPlanar(i64),
}

/// One of the four edge-ends around a crossing.
///
/// Positions run counterclockwise; 0 and 2 carry the under-strand (0 is the
/// incoming end in PD convention), 1 and 3 the over-strand.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct End {
    pub crossing: usize,
    pub position: u8,
}

impl End {
    pub fn new(crossing: usize, position: u8) -> Self {
        debug_assert!(position < 4);
        End { crossing, position }
    }

    /// Flat index in `0..4*crossings`.
    pub fn index(self) -> usize {
        4 * self.crossing + self.position as usize
    }

    fn from_index(i: usize) -> Self {
        End::new(i / 4, (i % 4) as u8)
    }

    /// Whether this end lies on the over-strand.
    pub fn is_over(self) -> bool {
        self.position % 2 == 1
    }

    /// The end through which the strand continues past the crossing.
    pub fn across(self) -> End {
        End::new(self.crossing, (self.position + 2) % 4)
    }
}

/// JSON encoding of a diagram.
#[derive(Serialize, Deserialize)]
pub struct DiagramJson {
    pub crossings: Vec<CrossingJson>,
    #[serde(default)]
    pub loops: usize,
}

/// JSON encoding of one crossing: its four arc labels in PD slot order.
#[derive(Serialize, Deserialize)]
pub struct CrossingJson {
    pub ends: [u32; 4],
}

/// A validated link diagram.
#[derive(Clone, Debug)]
pub struct LinkDiagram {
    crossing_count: usize,
    /// Each edge joins two crossing ends; ends are sorted within an edge and
    /// edges are sorted, so the representation is canonical for a given
    /// crossing order.
    edges: Vec<[End; 2]>,
    loops: usize,
    end_to_edge: Vec<usize>,
    components: usize,
    graph_components: usize,
}

impl LinkDiagram {
    /// Build and validate a diagram from crossings, explicit edges, and loops.
    pub fn from_parts(
        crossing_count: usize,
        mut edges: Vec<[End; 2]>,
        loops: usize,
    ) -> Result<Self, DiagramError> {
        if crossing_count == 0 && loops == 0 {
            return Err(DiagramError::Empty);
        }
        if edges.len() != 2 * crossing_count {
            return Err(DiagramError::Connections(format!(
                "{} crossings need {} edges, got {}",
                crossing_count,
                2 * crossing_count,
                edges.len()
            )));
        }
        for e in &mut edges {
            e.sort();
        }
        edges.sort();
        let mut end_to_edge = vec![usize::MAX; 4 * crossing_count];
        for (i, [a, b]) in edges.iter().enumerate() {
            for end in [a, b] {
                if end.position >= 4 || end.crossing >= crossing_count {
                    return Err(DiagramError::Connections(format!(
                        "edge end at crossing {} position {} is out of range",
                        end.crossing, end.position
                    )));
                }
                if end_to_edge[end.index()] != usize::MAX {
                    return Err(DiagramError::Connections(format!(
                        "crossing {} position {} is used by two edges",
                        end.crossing, end.position
                    )));
                }
                end_to_edge[end.index()] = i;
            }
        }
        // edges.len() == 2 * crossings and no double use imply full coverage.
        let mut d = LinkDiagram {
            crossing_count,
            edges,
            loops,
            end_to_edge,
            components: 0,
            graph_components: 0,
        };
        d.components = d.circuits().len() + loops;
        d.graph_components = d.count_graph_components() + loops;
        d.check_planarity()?;
        Ok(d)
    }

    /// Parse PD-code text, e.g. `PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]` or
    /// `L[2]` or `PD[...] L[1]`.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut crossings: Vec<[u32; 4]> = Vec::new();
        let mut saw_pd = false;
        let mut loops = 0usize;
        let mut rest = text.trim();
        while !rest.is_empty() {
            if let Some(tail) = rest.strip_prefix("PD[") {
                if saw_pd {
                    return Err(DiagramError::Syntax("multiple PD[...] blocks".into()));
                }
                saw_pd = true;
                rest = parse_pd_body(tail, &mut crossings)?;
            } else if let Some(tail) = rest.strip_prefix("L[") {
                let (k, tail) = parse_number(tail)?;
                let tail = expect_char(tail, ']')?;
                loops += k as usize;
                rest = tail.trim_start();
            } else {
                return Err(DiagramError::Syntax(format!(
                    "expected PD[...] or L[k], found {:?}",
                    rest.chars().take(12).collect::<String>()
                )));
            }
        }
        let edges = connect_labels(&crossings)?;
        Self::from_parts(crossings.len(), edges, loops)
    }

    /// Parse the JSON encoding.
    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        let json: DiagramJson = serde_json::from_str(text)
            .map_err(|e| DiagramError::Syntax(format!("invalid diagram JSON: {e}")))?;
        let crossings: Vec<[u32; 4]> = json.crossings.iter().map(|c| c.ends).collect();
        let edges = connect_labels(&crossings)?;
        Self::from_parts(crossings.len(), edges, json.loops)
    }

    /// Parse either encoding, sniffing JSON by its leading brace.
    pub fn parse_any(text: &str) -> Result<Self, DiagramError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::parse(text)
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_count
    }

    pub fn loop_count(&self) -> usize {
        self.loops
    }

    /// Number of link components (closed circuits plus loops).
    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Crossings plus diagram-connected components minus one. This is the
    /// size parameter all complexity bounds are phrased in.
    pub fn crossing_measure(&self) -> usize {
        self.crossing_count + self.graph_components - 1
    }

    /// True iff tracing yields exactly one link component.
    pub fn is_knot_diagram(&self) -> bool {
        self.components == 1
    }

    pub fn edges(&self) -> &[[End; 2]] {
        &self.edges
    }

    /// The other end of the edge at `e`.
    pub fn end_partner(&self, e: End) -> End {
        let [a, b] = self.edges[self.end_to_edge[e.index()]];
        if a == e {
            b
        } else {
            a
        }
    }

    pub fn edge_of_end(&self, e: End) -> usize {
        self.end_to_edge[e.index()]
    }

    /// The mirror diagram: each crossing's rotation is reversed while
    /// over/under data is kept.
    pub fn reflected(&self) -> LinkDiagram {
        let flip = |e: End| End::new(e.crossing, [0u8, 3, 2, 1][e.position as usize]);
        let edges = self.edges.iter().map(|&[a, b]| [flip(a), flip(b)]).collect();
        LinkDiagram::from_parts(self.crossing_count, edges, self.loops)
            .expect("reflection preserves validity")
    }

    /// Directed circuits: each link component (other than loops) once, as
    /// its sequence of arrival ends.
    pub fn circuits(&self) -> Vec<Vec<End>> {
        let n_ends = 4 * self.crossing_count;
        let mut visited = vec![false; n_ends];
        let mut out = Vec::new();
        for start in 0..n_ends {
            if visited[start] {
                continue;
            }
            let mut seq = Vec::new();
            let mut e = End::from_index(start);
            loop {
                visited[e.index()] = true;
                // The reverse traversal arrives through the paired end.
                visited[e.across().index()] = true;
                seq.push(e);
                e = self.end_partner(e.across());
                if e.index() == start {
                    break;
                }
            }
            out.push(seq);
        }
        out
    }

    fn count_graph_components(&self) -> usize {
        if self.crossing_count == 0 {
            return 0;
        }
        let mut parent: Vec<usize> = (0..self.crossing_count).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for [a, b] in &self.edges {
            let (ra, rb) = (find(&mut parent, a.crossing), find(&mut parent, b.crossing));
            parent[ra] = rb;
        }
        (0..self.crossing_count)
            .filter(|&c| find(&mut parent, c) == c)
            .count()
    }

    /// Number of darts (directed edges): two per edge. Dart `2e` runs from
    /// the smaller end of edge `e` to the larger, dart `2e+1` back.
    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn dart_from(&self, dart: usize) -> End {
        let [a, b] = self.edges[dart / 2];
        if dart % 2 == 0 {
            a
        } else {
            b
        }
    }

    pub fn dart_to(&self, dart: usize) -> End {
        let [a, b] = self.edges[dart / 2];
        if dart % 2 == 0 {
            b
        } else {
            a
        }
    }

    /// The dart leaving through end `e`.
    pub fn dart_leaving(&self, e: End) -> usize {
        let edge = self.end_to_edge[e.index()];
        if self.edges[edge][0] == e {
            2 * edge
        } else {
            2 * edge + 1
        }
    }

    /// The next dart along the face to the left, for the counterclockwise
    /// rotation system.
    pub fn face_next(&self, dart: usize) -> usize {
        let t = self.dart_to(dart);
        self.dart_leaving(End::new(t.crossing, (t.position + 1) % 4))
    }

    /// All faces of the embedding as dart cycles. Deterministic: each face
    /// starts at its smallest dart and faces are listed by that dart.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut visited = vec![false; self.dart_count()];
        let mut out = Vec::new();
        for start in 0..self.dart_count() {
            if visited[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            loop {
                visited[d] = true;
                face.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            out.push(face);
        }
        out
    }

    fn check_planarity(&self) -> Result<(), DiagramError> {
        if self.crossing_count == 0 {
            return Ok(());
        }
        let mut parent: Vec<usize> = (0..self.crossing_count).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for [a, b] in &self.edges {
            let (ra, rb) = (find(&mut parent, a.crossing), find(&mut parent, b.crossing));
            parent[ra] = rb;
        }
        let mut verts: BTreeMap<usize, i64> = BTreeMap::new();
        let mut edge_cnt: BTreeMap<usize, i64> = BTreeMap::new();
        let mut face_cnt: BTreeMap<usize, i64> = BTreeMap::new();
        for c in 0..self.crossing_count {
            *verts.entry(find(&mut parent, c)).or_default() += 1;
        }
        for [a, _] in &self.edges {
            *edge_cnt.entry(find(&mut parent, a.crossing)).or_default() += 1;
        }
        for face in self.faces() {
            let c = self.dart_from(face[0]).crossing;
            *face_cnt.entry(find(&mut parent, c)).or_default() += 1;
        }
        for (&root, &v) in &verts {
            let chi = v - edge_cnt.get(&root).unwrap_or(&0) + face_cnt.get(&root).unwrap_or(&0);
            if chi != 2 {
                return Err(DiagramError::NotPlanar(chi));
            }
        }
        Ok(())
    }

    /// Canonical PD-code serialization. Arc labels are assigned by tracing
    /// circuits from the smallest unvisited end, and each crossing is
    /// rotated (by two positions, preserving the cyclic order) so that its
    /// printed first slot is the incoming under-strand of that trace.
    pub fn pd_string(&self) -> String {
        let mut edge_label = vec![0u32; self.edges.len()];
        let mut rotate = vec![false; self.crossing_count];
        let mut next_label = 1u32;
        for circuit in self.circuits() {
            for &arrival in &circuit {
                if arrival.position == 2 {
                    rotate[arrival.crossing] = true;
                }
                // Label the edge the strand departs along.
                let depart = arrival.across();
                let edge = self.end_to_edge[depart.index()];
                if edge_label[edge] == 0 {
                    edge_label[edge] = next_label;
                    next_label += 1;
                }
            }
        }
        let mut s = String::new();
        if self.crossing_count > 0 {
            s.push_str("PD[");
            for c in 0..self.crossing_count {
                if c > 0 {
                    s.push(',');
                }
                let base = if rotate[c] { 2u8 } else { 0u8 };
                let lab = |p: u8| {
                    let e = End::new(c, (base + p) % 4);
                    edge_label[self.end_to_edge[e.index()]]
                };
                let _ = write!(s, "X({},{},{},{})", lab(0), lab(1), lab(2), lab(3));
            }
            s.push(']');
        }
        if self.loops > 0 {
            if !s.is_empty() {
                s.push(' ');
            }
            let _ = write!(s, "L[{}]", self.loops);
        }
        s
    }

    /// JSON serialization mirroring `pd_string`'s labeling.
    pub fn to_json(&self) -> DiagramJson {
        let pd = self.pd_string();
        if self.crossing_count == 0 {
            return DiagramJson {
                crossings: Vec::new(),
                loops: self.loops,
            };
        }
        // Reuse the PD labeling by re-reading the canonical string.
        let mut crossings: Vec<[u32; 4]> = Vec::new();
        let body = pd.strip_prefix("PD[").expect("crossings present");
        let body = &body[..body.find(']').expect("closing bracket")];
        for item in body.split("),") {
            let item = item
                .trim_start_matches("X(")
                .trim_end_matches(')');
            let nums: Vec<u32> = item.split(',').map(|x| x.parse().unwrap()).collect();
            crossings.push([nums[0], nums[1], nums[2], nums[3]]);
        }
        DiagramJson {
            crossings: crossings.into_iter().map(|ends| CrossingJson { ends }).collect(),
            loops: self.loops,
        }
    }

    /// Add one twist to the diagram: a new crossing through which the strand
    /// passes twice. On a diagram with edges, the twist is inserted into
    /// `edge`; on a crossing-free loop, one loop is consumed. `over_first`
    /// selects which strand of the new crossing the incoming arc takes.
    pub fn with_kink(&self, edge: usize, over_first: bool) -> LinkDiagram {
        let nc = self.crossing_count;
        let mut edges = self.edges.clone();
        let mut loops = self.loops;
        if self.crossing_count == 0 || edges.is_empty() {
            assert!(loops > 0, "kink needs a loop or an edge");
            loops -= 1;
            if over_first {
                edges.push([End::new(nc, 3), End::new(nc, 0)]);
                edges.push([End::new(nc, 2), End::new(nc, 1)]);
            } else {
                edges.push([End::new(nc, 2), End::new(nc, 3)]);
                edges.push([End::new(nc, 1), End::new(nc, 0)]);
            }
        } else {
            let [a, b] = edges.swap_remove(edge);
            if over_first {
                edges.push([a, End::new(nc, 3)]);
                edges.push([End::new(nc, 1), End::new(nc, 0)]);
                edges.push([End::new(nc, 2), b]);
            } else {
                edges.push([a, End::new(nc, 0)]);
                edges.push([End::new(nc, 2), End::new(nc, 3)]);
                edges.push([End::new(nc, 1), b]);
            }
        }
        LinkDiagram::from_parts(nc + 1, edges, loops).expect("a twist preserves validity")
    }
}

/// An unknot diagram made of `k` successive twists on a round circle.
pub fn kinked_unknot(k: usize) -> LinkDiagram {
    let mut d = LinkDiagram::from_parts(0, Vec::new(), 1).expect("trivial loop");
    for i in 0..k {
        d = d.with_kink(i % d.edges.len().max(1), i % 2 == 1);
    }
    d
}

fn parse_number(s: &str) -> Result<(u32, &str), DiagramError> {
    let s = s.trim_start();
    let digits: String = s.chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return Err(DiagramError::Syntax(format!(
            "expected a number, found {:?}",
            s.chars().take(8).collect::<String>()
        )));
    }
    let n: u32 = digits
        .parse()
        .map_err(|_| DiagramError::Syntax(format!("number {digits} out of range")))?;
    Ok((n, &s[digits.len()..]))
}

fn expect_char(s: &str, c: char) -> Result<&str, DiagramError> {
    let s = s.trim_start();
    s.strip_prefix(c)
        .ok_or_else(|| DiagramError::Syntax(format!("expected {c:?}")))
}

fn parse_pd_body<'a>(
    mut s: &'a str,
    crossings: &mut Vec<[u32; 4]>,
) -> Result<&'a str, DiagramError> {
    loop {
        s = s.trim_start();
        if let Some(tail) = s.strip_prefix(']') {
            return Ok(tail.trim_start());
        }
        let tail = s
            .strip_prefix("X(")
            .or_else(|| s.strip_prefix("X["))
            .ok_or_else(|| DiagramError::Syntax("expected X(a,b,c,d) in PD[...]".into()))?;
        let mut ends = [0u32; 4];
        let mut t = tail;
        for (i, slot) in ends.iter_mut().enumerate() {
            if i > 0 {
                t = expect_char(t, ',')?;
            }
            let (n, rest) = parse_number(t)?;
            if n == 0 {
                return Err(DiagramError::Syntax("arc labels are 1-based".into()));
            }
            *slot = n;
            t = rest.trim_start();
        }
        t = t
            .strip_prefix(')')
            .or_else(|| t.strip_prefix(']'))
            .ok_or_else(|| DiagramError::Syntax("unterminated X(...)".into()))?;
        crossings.push(ends);
        s = t.trim_start();
        if let Some(tail) = s.strip_prefix(',') {
            s = tail;
        }
    }
}

/// Resolve arc labels into edges between crossing ends.
///
/// A label occurring twice names an arc with both endpoints at crossings;
/// the two ends are joined. Labels occurring once follow the half-edge
/// convention used for diagrams in which a strand leaves a crossing and
/// immediately returns: consecutive singleton labels alternate between
/// crossing passages (incoming and outgoing label of one strand at one
/// crossing) and actual arcs; the passages are recognized and skipped and
/// the remaining consecutive pairs become arcs.
fn connect_labels(crossings: &[[u32; 4]]) -> Result<Vec<[End; 2]>, DiagramError> {
    let mut occurrences: BTreeMap<u32, Vec<End>> = BTreeMap::new();
    for (c, ends) in crossings.iter().enumerate() {
        for (p, &label) in ends.iter().enumerate() {
            occurrences
                .entry(label)
                .or_default()
                .push(End::new(c, p as u8));
        }
    }
    let mut edges = Vec::new();
    let mut singles: Vec<(u32, End)> = Vec::new();
    for (&label, ends) in &occurrences {
        match ends.len() {
            1 => singles.push((label, ends[0])),
            2 => edges.push([ends[0], ends[1]]),
            count => return Err(DiagramError::LabelOveruse { label, count }),
        }
    }
    if singles.is_empty() {
        return Ok(edges);
    }
    // Classify cyclically consecutive singleton pairs: a passage stays
    // inside one crossing (under-strand entering at position 0, or the two
    // over positions); anything else must be an arc.
    let k = singles.len();
    let mut arc_count = vec![0usize; k];
    let mut passage_count = vec![0usize; k];
    for i in 0..k {
        let j = (i + 1) % k;
        let (_, a) = singles[i];
        let (_, b) = singles[j];
        let passage = a.crossing == b.crossing
            && matches!(
                (a.position, b.position),
                (0, 2) | (1, 3) | (3, 1)
            );
        if passage {
            passage_count[i] += 1;
            passage_count[j] += 1;
        } else {
            arc_count[i] += 1;
            arc_count[j] += 1;
            edges.push([a, b]);
        }
    }
    for i in 0..k {
        if arc_count[i] != 1 || passage_count[i] != 1 {
            return Err(DiagramError::Connections(format!(
                "singleton arc label {} does not alternate between a crossing \
                 passage and an arc",
                singles[i].0
            )));
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]";
    const FIGURE_EIGHT: &str = "PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]";
    const HOPF: &str = "PD[X(1,3,2,4),X(3,1,4,2)]";

    #[test]
    fn trivial_loop() {
        let d = LinkDiagram::parse("L[1]").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.crossing_measure(), 0);
        assert!(d.is_knot_diagram());
    }

    #[test]
    fn two_loops() {
        let d = LinkDiagram::parse("L[2]").unwrap();
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.crossing_measure(), 1);
        assert!(!d.is_knot_diagram());
    }

    #[test]
    fn empty_is_rejected() {
        assert!(matches!(LinkDiagram::parse("L[0]"), Err(DiagramError::Empty)));
        assert!(LinkDiagram::parse("").is_err());
    }

    #[test]
    fn single_crossing_half_edge_code() {
        let d = LinkDiagram::parse("PD[X(1,4,2,3)]").unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.crossing_measure(), 1);
        assert!(d.is_knot_diagram());
    }

    #[test]
    fn trefoil_traces_one_component() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.crossing_measure(), 3);
        assert!(d.is_knot_diagram());
        // 4-valent planar graph: V=3, E=6, so F=5.
        assert_eq!(d.faces().len(), 5);
    }

    #[test]
    fn figure_eight_traces_one_component() {
        let d = LinkDiagram::parse(FIGURE_EIGHT).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.crossing_measure(), 4);
    }

    #[test]
    fn hopf_link_has_two_components() {
        let d = LinkDiagram::parse(HOPF).unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.component_count(), 2);
        assert!(!d.is_knot_diagram());
        assert_eq!(d.crossing_measure(), 2);
    }

    #[test]
    fn trefoil_with_loops() {
        let d = LinkDiagram::parse("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)] L[2]").unwrap();
        assert_eq!(d.component_count(), 3);
        assert_eq!(d.crossing_measure(), 3 + 3 - 1);
    }

    #[test]
    fn virtual_style_code_is_rejected() {
        // Opposite-position loops force a torus embedding.
        match LinkDiagram::parse("PD[X(1,2,1,2)]") {
            Err(DiagramError::NotPlanar(chi)) => assert_eq!(chi, 0),
            other => panic!("expected planarity failure, got {other:?}"),
        }
    }

    #[test]
    fn over_loop_kink_code_is_planar() {
        let d = LinkDiagram::parse("PD[X(1,1,2,2)]").unwrap();
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.faces().len(), 3);
    }

    #[test]
    fn label_overuse_is_rejected() {
        assert!(matches!(
            LinkDiagram::parse("PD[X(1,1,1,2)]"),
            Err(DiagramError::LabelOveruse { label: 1, count: 3 })
        ));
    }

    #[test]
    fn syntax_errors() {
        assert!(LinkDiagram::parse("PD[X(1,2,3)]").is_err());
        assert!(LinkDiagram::parse("PD[Y(1,2,3,4)]").is_err());
        assert!(LinkDiagram::parse("PD[X(0,1,2,3)]").is_err());
        assert!(LinkDiagram::parse("garbage").is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        let json = serde_json::to_string(&d.to_json()).unwrap();
        let d2 = LinkDiagram::from_json(&json).unwrap();
        assert_eq!(d2.crossing_count(), 3);
        assert_eq!(d2.component_count(), 1);
        assert_eq!(d2.pd_string(), d.pd_string());
    }

    #[test]
    fn json_loops_default() {
        let d = LinkDiagram::from_json(r#"{"crossings":[],"loops":2}"#).unwrap();
        assert_eq!(d.component_count(), 2);
    }

    #[test]
    fn pd_serialization_is_a_fixpoint() {
        for text in [TREFOIL, FIGURE_EIGHT, HOPF, "PD[X(1,4,2,3)]", "L[3]"] {
            let d = LinkDiagram::parse(text).unwrap();
            let s1 = d.pd_string();
            let d2 = LinkDiagram::parse(&s1).unwrap();
            let s2 = d2.pd_string();
            assert_eq!(s1, s2, "serialization stabilizes for {text}");
            assert_eq!(d.component_count(), d2.component_count());
            assert_eq!(d.crossing_count(), d2.crossing_count());
        }
    }

    #[test]
    fn reflection_preserves_structure() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        let r = d.reflected();
        assert_eq!(r.component_count(), 1);
        assert_eq!(r.crossing_measure(), 3);
        assert_eq!(r.faces().len(), 5);
    }

    #[test]
    fn kinked_unknots_are_valid() {
        for k in 0..=6 {
            let d = kinked_unknot(k);
            assert_eq!(d.crossing_count(), k, "kink count");
            assert_eq!(d.component_count(), 1, "one component at {k} kinks");
            assert!(d.is_knot_diagram());
        }
    }

    #[test]
    fn circuits_cover_each_passage_once() {
        let d = LinkDiagram::parse(FIGURE_EIGHT).unwrap();
        let circuits = d.circuits();
        assert_eq!(circuits.len(), 1);
        // Each crossing is passed exactly twice: once under, once over.
        let mut under = vec![0; 4];
        let mut over = vec![0; 4];
        for e in &circuits[0] {
            if e.is_over() {
                over[e.crossing] += 1;
            } else {
                under[e.crossing] += 1;
            }
        }
        assert_eq!(under, vec![1; 4]);
        assert_eq!(over, vec![1; 4]);
    }
}
