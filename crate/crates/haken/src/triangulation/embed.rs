//! Straight-line grid embedding of the diagram's underlying planar graph.
//!
//! The diagram graph (4-valent crossings plus free loops) is subdivided so
//! that it is simple and every link cycle has length at least four, merged
//! into one connected plane graph, triangulated face by face, and drawn on
//! an integer grid using a three-tree (Schnyder) decomposition derived from
//! a canonical vertex order. The output also carries the link polyline: the
//! cycle of graph vertices (with an up/down level per node) traversed by
//! each link component, with over-strands at level `+1` and under-strands
//! at level `-1`.
//!
//! All geometric claims are verified exactly: faces of the final drawing
//! are consistently oriented triangles, no two edge segments cross, and
//! coordinates fit in the `(m-2) x (m-2)` grid for `m` vertices.

use crate::diagram::{End, LinkDiagram};
use std::collections::{BTreeMap, BTreeSet};

/// A node of the link polyline.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PolyNode {
    /// A graph vertex at level `-1` (under) or `+1` (over).
    Level { vertex: usize, level: i8 },
    /// The center of the level-changing rectangle over the graph edge
    /// `{a, b}` (stored with `a < b`).
    Rect { a: usize, b: usize },
}

/// A triangulated straight-line drawing of the augmented diagram graph.
pub struct GridEmbedding {
    /// Grid coordinates per graph vertex.
    pub coords: Vec<(i64, i64)>,
    /// The triangles of the disk (every face except the outer one).
    pub triangles: Vec<[usize; 3]>,
    /// All graph edges as sorted vertex pairs.
    pub segments: Vec<(usize, usize)>,
    /// The link polyline, one closed cycle of nodes per link component.
    pub polyline: Vec<Vec<PolyNode>>,
    /// Vertices at crossings (graph vertex ids 0..crossing_count).
    pub crossing_count: usize,
}

impl GridEmbedding {
    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Dart {
    to: usize,
    edge: usize,
}

/// A connected-or-not plane graph given by counterclockwise rotations.
struct PlaneGraph {
    rot: Vec<Vec<Dart>>,
    edge_count: usize,
}

type DartRef = (usize, usize); // (vertex, slot in rotation)

impl PlaneGraph {
    fn new() -> Self {
        PlaneGraph {
            rot: Vec::new(),
            edge_count: 0,
        }
    }

    fn add_vertex(&mut self) -> usize {
        self.rot.push(Vec::new());
        self.rot.len() - 1
    }

    fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    /// Append an edge with both darts at the end of their rotations; only
    /// used while building paths and cycles, where rotation order is the
    /// insertion order.
    fn push_edge(&mut self, u: usize, v: usize) -> usize {
        let id = self.edge_count;
        self.edge_count += 1;
        self.rot[u].push(Dart { to: v, edge: id });
        self.rot[v].push(Dart { to: u, edge: id });
        id
    }

    /// Add an edge with explicit corner positions: the new dart is inserted
    /// at `slot_u` in `u`'s rotation and at `slot_v` in `v`'s.
    fn insert_edge(&mut self, u: usize, slot_u: usize, v: usize, slot_v: usize) -> usize {
        let id = self.edge_count;
        self.edge_count += 1;
        self.rot[u].insert(slot_u, Dart { to: v, edge: id });
        self.rot[v].insert(slot_v, Dart { to: u, edge: id });
        id
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rot[u].iter().any(|d| d.to == v)
    }

    fn twin(&self, d: DartRef) -> DartRef {
        let Dart { to, edge } = self.rot[d.0][d.1];
        let slot = self.rot[to]
            .iter()
            .position(|x| x.edge == edge)
            .expect("twin dart");
        (to, slot)
    }

    /// Next dart of the face to the left: rotation successor of the twin.
    fn face_next(&self, d: DartRef) -> DartRef {
        let (v, slot) = self.twin(d);
        (v, (slot + 1) % self.rot[v].len())
    }

    /// All faces as dart cycles, deterministically ordered.
    fn faces(&self) -> Vec<Vec<DartRef>> {
        let mut seen: BTreeSet<DartRef> = BTreeSet::new();
        let mut out = Vec::new();
        for v in 0..self.rot.len() {
            for slot in 0..self.rot[v].len() {
                if seen.contains(&(v, slot)) {
                    continue;
                }
                let mut walk = Vec::new();
                let mut d = (v, slot);
                loop {
                    seen.insert(d);
                    walk.push(d);
                    d = self.face_next(d);
                    if d == (v, slot) {
                        break;
                    }
                }
                out.push(walk);
            }
        }
        out
    }

    /// The corner insertion slot for a face occurrence: the slot of the
    /// dart leaving that corner. Inserting there pushes the leaving dart
    /// one position up, so the new dart sits between the corner's arriving
    /// and leaving edges — inside the face.
    fn corner_slot(&self, leaving: DartRef) -> (usize, usize) {
        (leaving.0, leaving.1)
    }

    fn assert_euler_disk(&self) {
        let v = self.rot.len() as i64;
        let e = self.edge_count as i64;
        let f = self.faces().len() as i64;
        assert_eq!(v - e + f, 2, "rotation system is not a sphere embedding");
    }
}

/// Subdivision data: which graph vertices each diagram edge runs through.
struct Augmented {
    graph: PlaneGraph,
    /// Interior path vertices per diagram edge (1 for ordinary edges, 3
    /// for loop edges at a crossing), oriented from the edge's first end.
    edge_path: Vec<Vec<usize>>,
    /// Vertex 4-cycles of the free loops.
    free_loops: Vec<[usize; 4]>,
}

fn augment(d: &LinkDiagram) -> Augmented {
    let n = d.crossing_count();
    let mut g = PlaneGraph::new();
    for _ in 0..n {
        g.add_vertex();
    }
    // Reserve rotation slots 0..3 at each crossing for positions 0..3; fill
    // by building the subdivided paths in position order per crossing would
    // interleave badly, so create path vertices first, then wire rotations.
    let mut edge_path: Vec<Vec<usize>> = Vec::with_capacity(d.edges().len());
    for [a, b] in d.edges() {
        let count = if a.crossing == b.crossing { 3 } else { 1 };
        let path: Vec<usize> = (0..count).map(|_| g.add_vertex()).collect();
        edge_path.push(path);
    }
    // Crossing rotations in position order (counterclockwise, matching the
    // diagram's face tracing); each dart goes to the nearest path vertex.
    for c in 0..n {
        for p in 0..4u8 {
            let end = End::new(c, p);
            let e = d.edge_of_end(end);
            let [a, _] = d.edges()[e];
            let path = &edge_path[e];
            let target = if a == end {
                path[0]
            } else {
                *path.last().expect("nonempty path")
            };
            g.push_edge(c, target);
            // Loop edges at positions of the same crossing: push_edge added
            // the dart pair; nothing more needed because path endpoints of a
            // loop are distinct vertices.
            let _ = target;
        }
    }
    // Interior path edges.
    for path in &edge_path {
        for w in path.windows(2) {
            g.push_edge(w[0], w[1]);
        }
    }
    // Free loops as 4-cycles.
    let mut free_loops = Vec::new();
    for _ in 0..d.loop_count() {
        let vs = [g.add_vertex(), g.add_vertex(), g.add_vertex(), g.add_vertex()];
        for i in 0..4 {
            g.push_edge(vs[i], vs[(i + 1) % 4]);
        }
        free_loops.push(vs);
    }
    // Rotation sanity: crossings carry their four position darts first, in
    // order; path vertices have degree two; loop vertices degree two.
    for c in 0..n {
        assert_eq!(g.rot[c].len(), 4);
    }
    Augmented {
        graph: g,
        edge_path,
        free_loops,
    }
}

/// Build the polyline from the diagram circuits and the subdivision paths.
fn build_polyline(d: &LinkDiagram, aug: &Augmented) -> Vec<Vec<PolyNode>> {
    let level_of = |e: End| if e.is_over() { 1i8 } else { -1 };
    let rect = |a: usize, b: usize| PolyNode::Rect {
        a: a.min(b),
        b: a.max(b),
    };
    let mut out = Vec::new();
    for circuit in d.circuits() {
        let mut nodes: Vec<PolyNode> = Vec::new();
        let len = circuit.len();
        for i in 0..len {
            let arrive = circuit[i];
            let next = circuit[(i + 1) % len];
            let za = level_of(arrive);
            let zb = level_of(next);
            nodes.push(PolyNode::Level {
                vertex: arrive.crossing,
                level: za,
            });
            let exit = arrive.across();
            let e = d.edge_of_end(exit);
            let [first, _] = d.edges()[e];
            let mut path = aug.edge_path[e].clone();
            if first != exit {
                path.reverse();
            }
            match (path.len(), za == zb) {
                (1, true) => nodes.push(PolyNode::Level {
                    vertex: path[0],
                    level: za,
                }),
                (1, false) => {
                    nodes.push(PolyNode::Level {
                        vertex: path[0],
                        level: za,
                    });
                    nodes.push(rect(path[0], next.crossing));
                }
                (3, true) => {
                    for &m in &path {
                        nodes.push(PolyNode::Level {
                            vertex: m,
                            level: za,
                        });
                    }
                }
                (3, false) => {
                    nodes.push(PolyNode::Level {
                        vertex: path[0],
                        level: za,
                    });
                    nodes.push(PolyNode::Level {
                        vertex: path[1],
                        level: za,
                    });
                    nodes.push(rect(path[1], path[2]));
                    nodes.push(PolyNode::Level {
                        vertex: path[2],
                        level: zb,
                    });
                }
                other => unreachable!("path shape {other:?}"),
            }
        }
        out.push(nodes);
    }
    for cycle in &aug.free_loops {
        out.push(
            cycle
                .iter()
                .map(|&v| PolyNode::Level {
                    vertex: v,
                    level: -1,
                })
                .collect(),
        );
    }
    // Embeddedness: every node is traversed exactly once over all cycles.
    let mut seen = BTreeSet::new();
    for cycle in &out {
        assert!(cycle.len() >= 4, "link cycle shorter than four nodes");
        for node in cycle {
            assert!(seen.insert(*node), "polyline revisits {node:?}");
        }
    }
    out
}

/// Join all connected components into one by adding degree-two bridge
/// vertices inside a fixed face of the first component.
fn merge_components(g: &mut PlaneGraph) {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = count;
        while let Some(v) = stack.pop() {
            for d in &g.rot[v] {
                if comp[d.to] == usize::MAX {
                    comp[d.to] = count;
                    stack.push(d.to);
                }
            }
        }
        count += 1;
    }
    if count <= 1 {
        return;
    }
    // One trace of the disconnected graph: faces per component.
    let faces = g.faces();
    let mut anchor: Vec<Option<DartRef>> = vec![None; count];
    for face in &faces {
        let d0 = face[0];
        let c = comp[d0.0];
        if anchor[c].is_none() {
            anchor[c] = Some(d0);
        }
    }
    // All corners are taken from the single initial trace. Inserting a dart
    // at a corner slot does not disturb other vertices' slots, and reusing
    // the primary corner slot keeps stacking bridge spurs inside the same
    // (growing) face.
    let primary = anchor[comp[0]].expect("component has a face");
    for c in 0..count {
        if c == comp[0] {
            continue;
        }
        let secondary = anchor[c].expect("component has a face");
        let w = g.add_vertex();
        let (pu, pslot) = g.corner_slot(primary);
        g.insert_edge(pu, pslot, w, 0);
        let (su, sslot) = g.corner_slot(secondary);
        g.insert_edge(su, sslot, w, 1);
    }
    g.assert_euler_disk();
}

/// Split faces whose walks repeat a vertex by adding a two-vertex path
/// between corners of the two occurrences, until every face walk is simple.
fn split_nonsimple_faces(g: &mut PlaneGraph) {
    loop {
        let faces = g.faces();
        let mut target = None;
        'scan: for face in &faces {
            let verts: Vec<usize> = face.iter().map(|d| d.0).collect();
            let mut first_at: BTreeMap<usize, usize> = BTreeMap::new();
            for (i, &v) in verts.iter().enumerate() {
                if let Some(&i0) = first_at.get(&v) {
                    target = Some((face.clone(), i0, i));
                    break 'scan;
                }
                first_at.insert(v, i);
            }
        }
        let Some((face, i, j)) = target else { break };
        let len = face.len();
        // Corners strictly between the two occurrences on either side.
        let p = (i + 1) % len;
        let q = (j + 1) % len;
        assert!(p != j && q != i, "adjacent repeated occurrences");
        let x1 = g.add_vertex();
        let x2 = g.add_vertex();
        g.push_edge(x1, x2);
        let (pu, pslot) = g.corner_slot(face[p]);
        let (qu, qslot) = g.corner_slot(face[q]);
        // Insert the higher slot first when both corners are at one vertex.
        if pu == qu && pslot < qslot {
            g.insert_edge(qu, qslot, x2, 1);
            g.insert_edge(pu, pslot, x1, 1);
        } else {
            g.insert_edge(pu, pslot, x1, 1);
            g.insert_edge(qu, qslot, x2, 1);
        }
        g.assert_euler_disk();
    }
}

/// Triangulate every face of size four or more: fan from a suitable walk
/// vertex when possible, otherwise from a new center vertex.
fn triangulate_faces(g: &mut PlaneGraph) {
    loop {
        let faces = g.faces();
        let Some(face) = faces.into_iter().find(|f| f.len() > 3) else {
            break;
        };
        let s = face.len();
        let verts: Vec<usize> = face.iter().map(|d| d.0).collect();
        // Fan apex: a walk vertex adjacent to no other walk vertex except
        // its two walk neighbors.
        let apex = (0..s).find(|&k| {
            (0..s).all(|j| {
                let dist_ok = j == k || j == (k + 1) % s || (j + 1) % s == k;
                dist_ok || !g.has_edge(verts[k], verts[j])
            })
        });
        match apex {
            Some(k) => {
                // Chords from verts[k] to verts[k+2..k+s-1]. Inserting each
                // chord at the apex corner slot pushes earlier chords toward
                // the walk successor, which is exactly the angular order the
                // fan needs; far corners keep their traced slots because each
                // far vertex is distinct and receives exactly one chord.
                let (au, base) = g.corner_slot(face[k]);
                for step in 2..s - 1 {
                    let j = (k + step) % s;
                    let (fu, fslot) = g.corner_slot(face[j]);
                    g.insert_edge(au, base, fu, fslot);
                }
            }
            None => {
                let z = g.add_vertex();
                // Corner slots stay valid because each walk vertex occurs
                // once and receives one insertion; the center sees the walk
                // in reversed rotation order.
                for occ in face.iter().rev() {
                    let (fu, fslot) = g.corner_slot(*occ);
                    let zslot = g.rot[z].len();
                    g.insert_edge(fu, fslot, z, zslot);
                }
            }
        }
        g.assert_euler_disk();
    }
}

/// One step of the incremental construction: `vertex` is added with its
/// neighbors on the current outer cycle running from `left` (on the `v1`
/// side) to `right` (on the `v2` side); `middles` are the covered cycle
/// vertices strictly between them.
struct InsertionStep {
    vertex: usize,
    left: usize,
    right: usize,
    middles: Vec<usize>,
}

struct CanonicalOrder {
    /// All vertices: the two base vertices, then insertion order.
    order: Vec<usize>,
    /// One step per vertex of `order[2..]`, in insertion order.
    steps: Vec<InsertionStep>,
}

/// Canonical vertex order by reverse removal from the outer cycle.
///
/// Maintains the outer cycle in outer-face-walk orientation. For a cycle
/// vertex `u` between `prev` and `next`, the rotation at `u` has `next`
/// immediately after `prev` (the sector between them is the outer face), and
/// the interior fan read the other way from `prev` is exactly the path the
/// boundary sags through when `u` is removed.
fn canonical_order(g: &PlaneGraph) -> CanonicalOrder {
    let n = g.vertex_count();
    assert!(n > 3);
    let rot: Vec<Vec<usize>> = g
        .rot
        .iter()
        .map(|ds| ds.iter().map(|d| d.to).collect())
        .collect();
    let faces = g.faces();
    let outer = faces[0].clone();
    assert_eq!(outer.len(), 3, "outer face must be a triangle");
    let v1 = outer[0].0;
    let v2 = outer[1].0;

    let mut cycle: Vec<usize> = outer.iter().map(|d| d.0).collect();
    let mut alive = vec![true; n];
    let mut alive_count = n;
    let mut removed_steps: Vec<InsertionStep> = Vec::new();

    while alive_count > 3 {
        let on_cycle: BTreeSet<usize> = cycle.iter().copied().collect();
        assert_eq!(on_cycle.len(), cycle.len(), "outer cycle not simple");
        let candidate = cycle
            .iter()
            .copied()
            .filter(|&u| u != v1 && u != v2)
            .filter(|&u| {
                rot[u]
                    .iter()
                    .filter(|&&x| alive[x] && on_cycle.contains(&x))
                    .count()
                    == 2
            })
            .min()
            .expect("a removable vertex exists in a plane triangulation");

        let idx = cycle.iter().position(|&x| x == candidate).unwrap();
        let prev = cycle[(idx + cycle.len() - 1) % cycle.len()];
        let next = cycle[(idx + 1) % cycle.len()];
        let neighbors: Vec<usize> = rot[candidate]
            .iter()
            .copied()
            .filter(|&x| alive[x])
            .collect();
        let deg = neighbors.len();
        let p_prev = neighbors.iter().position(|&x| x == prev).unwrap();
        assert_eq!(
            neighbors[(p_prev + 1) % deg],
            next,
            "outer sector of a cycle vertex must be empty"
        );
        // Interior fan clockwise from prev, ending just before next.
        let mut fan = Vec::new();
        let mut i = (p_prev + deg - 1) % deg;
        while neighbors[i] != next {
            fan.push(neighbors[i]);
            i = (i + deg - 1) % deg;
        }
        assert_eq!(fan.len(), deg - 2);
        assert!(
            fan.iter().all(|x| !on_cycle.contains(x)),
            "candidate had a chord to the outer cycle"
        );
        alive[candidate] = false;
        alive_count -= 1;
        // In insertion terms the candidate's cycle successor sits on the
        // `v1` side of its covered arc and its predecessor on the `v2` side.
        removed_steps.push(InsertionStep {
            vertex: candidate,
            left: next,
            right: prev,
            middles: fan.clone(),
        });
        let mut new_cycle = Vec::with_capacity(cycle.len() - 1 + fan.len());
        new_cycle.extend(cycle[..idx].iter().copied());
        new_cycle.extend(fan.iter().copied());
        new_cycle.extend(cycle[idx + 1..].iter().copied());
        cycle = new_cycle;
    }

    let third = (0..n)
        .find(|&v| alive[v] && v != v1 && v != v2)
        .expect("three survivors");
    let mut order = vec![v1, v2, third];
    let mut steps = vec![InsertionStep {
        vertex: third,
        left: v1,
        right: v2,
        middles: Vec::new(),
    }];
    for step in removed_steps.into_iter().rev() {
        order.push(step.vertex);
        steps.push(step);
    }
    assert_eq!(order.len(), n);
    CanonicalOrder { order, steps }
}

/// Placement from a three-tree decomposition; returns grid coordinates with
/// both axes in `[0, m-2]`.
///
/// Every inserted vertex keeps one pointer toward the `v1` side of its
/// covered arc, one toward the `v2` side, and each covered vertex points up
/// at its coverer. Chasing the pointers gives three trees rooted at the
/// outer vertices; the three root paths of an interior vertex cut the disk
/// into three regions, and region vertex counts give barycentric-style
/// coordinates. The caller re-verifies the drawing exactly, so none of this
/// is trusted blindly.
fn schnyder_placement(g: &PlaneGraph, canon: &CanonicalOrder) -> Vec<(i64, i64)> {
    let n = canon.order.len();
    let roots = [canon.order[0], canon.order[1], *canon.order.last().unwrap()];

    // Tree pointers per vertex: [0] toward v1, [1] toward v2, [2] upward.
    let mut out: [Vec<Option<usize>>; 3] = [vec![None; n], vec![None; n], vec![None; n]];
    for step in &canon.steps {
        out[0][step.vertex] = Some(step.left);
        out[1][step.vertex] = Some(step.right);
        for &w in &step.middles {
            assert!(out[2][w].is_none(), "a vertex was covered twice");
            out[2][w] = Some(step.vertex);
        }
    }
    for v in 0..n {
        let base = v == roots[0] || v == roots[1];
        assert_eq!(out[0][v].is_none(), base);
        assert_eq!(out[1][v].is_none(), base);
        assert_eq!(out[2][v].is_none(), base || v == roots[2]);
    }

    let chase = |tree: usize, v: usize| -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(next) = out[tree][cur] {
            cur = next;
            path.push(cur);
            assert!(path.len() <= n, "tree pointer chase does not terminate");
        }
        assert_eq!(cur, roots[tree], "tree path ends at the wrong root");
        path
    };

    // Interior faces and their edge incidences.
    let faces = g.faces();
    let outer_set: BTreeSet<usize> = roots.iter().copied().collect();
    let face_sets: Vec<BTreeSet<usize>> =
        faces.iter().map(|f| f.iter().map(|d| d.0).collect()).collect();
    assert_eq!(face_sets[0], outer_set, "first face is not the outer triangle");
    let interior: Vec<usize> = (1..faces.len()).collect();
    let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &fi in &interior {
        let vs: Vec<usize> = faces[fi].iter().map(|d| d.0).collect();
        for i in 0..vs.len() {
            let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
            edge_faces.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    // The unique interior face incident to each outer edge seeds the region
    // on the far side of the corresponding root.
    let outer_edge_face = |a: usize, b: usize| -> usize {
        let list = &edge_faces[&(a.min(b), a.max(b))];
        assert_eq!(list.len(), 1, "outer edge with two interior faces");
        list[0]
    };
    let seeds = [
        outer_edge_face(roots[1], roots[2]),
        outer_edge_face(roots[2], roots[0]),
        outer_edge_face(roots[0], roots[1]),
    ];

    let mut coords = vec![(0i64, 0i64); n];
    let far = n as i64 - 2;
    // Base placements follow the same region accounting as the formula
    // below, with the degenerate root paths taken along the outer edges.
    let f_root = [[far, 0, 1], [1, far, 0], [0, 1, far]];
    for (r, &root) in roots.iter().enumerate() {
        coords[root] = (f_root[r][1], f_root[r][0]);
    }

    for v in 0..n {
        if outer_set.contains(&v) {
            continue;
        }
        let paths = [chase(0, v), chase(1, v), chase(2, v)];
        let mut path_vertices: BTreeSet<usize> = BTreeSet::new();
        let mut path_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for path in &paths {
            path_vertices.extend(path.iter().copied());
            for w in path.windows(2) {
                path_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }

        // Group interior faces; path edges are walls.
        let mut group = vec![usize::MAX; faces.len()];
        let mut group_count = 0;
        for &start in &interior {
            if group[start] != usize::MAX {
                continue;
            }
            let id = group_count;
            group_count += 1;
            let mut queue = vec![start];
            group[start] = id;
            while let Some(fi) = queue.pop() {
                let vs: Vec<usize> = faces[fi].iter().map(|d| d.0).collect();
                for i in 0..vs.len() {
                    let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
                    let key = (a.min(b), a.max(b));
                    if path_edges.contains(&key) {
                        continue;
                    }
                    for &other in &edge_faces[&key] {
                        if group[other] == usize::MAX {
                            group[other] = id;
                            queue.push(other);
                        }
                    }
                }
            }
        }
        assert_eq!(group_count, 3, "root paths must cut the disk into three regions");
        let region_of = [group[seeds[0]], group[seeds[1]], group[seeds[2]]];
        {
            let mut sorted = region_of;
            sorted.sort_unstable();
            assert_eq!(sorted, [0, 1, 2], "outer-edge seed faces must lie in distinct regions");
        }

        // Interior vertex count per region.
        let mut int_count = [0i64; 3];
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for &fi in &interior {
            let k = region_of.iter().position(|&gid| gid == group[fi]).unwrap();
            for d in &faces[fi] {
                if !path_vertices.contains(&d.0) && seen.insert(d.0) {
                    int_count[k] += 1;
                }
            }
        }
        assert_eq!(
            int_count.iter().sum::<i64>() as usize + path_vertices.len(),
            n,
            "every vertex belongs to a region or a path"
        );

        // Each region claims the root path preceding it cyclically.
        let mut f = [0i64; 3];
        for k in 0..3 {
            f[k] = int_count[k] + (paths[(k + 2) % 3].len() as i64 - 1);
        }
        assert_eq!(f[0] + f[1] + f[2], n as i64 - 1, "region counts must sum to m-1");
        coords[v] = (f[1], f[0]);
    }

    for &(x, y) in &coords {
        assert!(x >= 0 && x <= far && y >= 0 && y <= far, "coordinate out of grid");
    }
    coords
}

/// Exact segment-crossing and orientation validation of the drawing.
fn validate_drawing(g: &PlaneGraph, coords: &[(i64, i64)]) -> Vec<[usize; 3]> {
    let n = g.vertex_count();
    let distinct: BTreeSet<(i64, i64)> = coords.iter().copied().collect();
    assert_eq!(distinct.len(), n, "coincident vertices");

    // Collect segments.
    let mut segments: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        for d in &g.rot[v] {
            if v < d.to {
                segments.push((v, d.to));
            }
        }
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| -> i64 {
        let v1 = (a.0 - o.0, a.1 - o.1);
        let v2 = (b.0 - o.0, b.1 - o.1);
        v1.0 * v2.1 - v1.1 * v2.0
    };
    let on_segment = |a: (i64, i64), b: (i64, i64), p: (i64, i64)| -> bool {
        cross(a, b, p) == 0
            && p.0 >= a.0.min(b.0)
            && p.0 <= a.0.max(b.0)
            && p.1 >= a.1.min(b.1)
            && p.1 <= a.1.max(b.1)
    };
    for (i, &(a, b)) in segments.iter().enumerate() {
        for &(c, d) in &segments[i + 1..] {
            let shared = [a, b].iter().filter(|v| **v == c || **v == d).count();
            let (pa, pb, pc, pd) = (coords[a], coords[b], coords[c], coords[d]);
            if shared == 2 {
                panic!("duplicate edge in drawing");
            }
            if shared == 1 {
                // Sharing one endpoint: the other endpoints must not lie on
                // the opposite closed segment.
                let (su, ou) = if a == c || a == d { (a, b) } else { (b, a) };
                let other2 = if c == su { d } else { c };
                assert!(
                    !on_segment(pc, pd, coords[ou]) || coords[ou] == coords[su],
                    "edge overlaps adjacent edge"
                );
                assert!(
                    !on_segment(pa, pb, coords[other2]) || coords[other2] == coords[su],
                    "edge overlaps adjacent edge"
                );
                continue;
            }
            // Disjoint endpoints: proper or improper intersection forbidden.
            let d1 = cross(pc, pd, pa);
            let d2 = cross(pc, pd, pb);
            let d3 = cross(pa, pb, pc);
            let d4 = cross(pa, pb, pd);
            let proper = ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0))
                && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
            let touching = on_segment(pc, pd, pa)
                || on_segment(pc, pd, pb)
                || on_segment(pa, pb, pc)
                || on_segment(pa, pb, pd);
            assert!(!proper && !touching, "edge segments cross in the drawing");
        }
    }

    // Faces must be consistently oriented triangles with exactly one
    // reversed face (the outer face).
    let faces = g.faces();
    let mut triangles = Vec::new();
    let mut negative = 0usize;
    for face in &faces {
        assert_eq!(face.len(), 3, "non-triangular face after triangulation");
        let vs = [face[0].0, face[1].0, face[2].0];
        let (p0, p1, p2) = (coords[vs[0]], coords[vs[1]], coords[vs[2]]);
        let area2 = cross(p0, p1, p2);
        assert_ne!(area2, 0, "degenerate face");
        if area2 < 0 {
            negative += 1;
        } else {
            triangles.push(vs);
        }
    }
    assert_eq!(negative, 1, "exactly one face must be the outer face");
    triangles
}

/// Compute the full grid embedding of a diagram.
pub fn grid_embed(d: &LinkDiagram) -> GridEmbedding {
    let mut aug = augment(d);
    let polyline = build_polyline(d, &aug);
    merge_components(&mut aug.graph);
    split_nonsimple_faces(&mut aug.graph);
    triangulate_faces(&mut aug.graph);
    let g = &aug.graph;

    // Simplicity of the final graph.
    let mut pairs = BTreeSet::new();
    for v in 0..g.vertex_count() {
        for dart in &g.rot[v] {
            assert_ne!(v, dart.to, "self-loop in final graph");
            if v < dart.to {
                assert!(pairs.insert((v, dart.to)), "parallel edges in final graph");
            }
        }
    }

    let coords;
    let triangles;
    if g.vertex_count() == 3 {
        coords = vec![(0, 0), (2, 0), (1, 1)];
        triangles = validate_drawing(g, &coords);
    } else {
        let canon = canonical_order(g);
        coords = schnyder_placement(g, &canon);
        triangles = validate_drawing(g, &coords);
    }
    let segments: Vec<(usize, usize)> = pairs.into_iter().collect();
    GridEmbedding {
        coords,
        triangles,
        segments,
        polyline,
        crossing_count: d.crossing_count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::kinked_unknot;

    fn embed_str(pd: &str) -> GridEmbedding {
        grid_embed(&LinkDiagram::parse(pd).unwrap())
    }

    #[test]
    fn free_loop_embeds() {
        let g = embed_str("L[1]");
        assert!(g.vertex_count() >= 4);
        assert_eq!(g.polyline.len(), 1);
        assert_eq!(g.polyline[0].len(), 4);
        assert_eq!(g.triangles.len(), 2 * g.vertex_count() - 5);
    }

    #[test]
    fn two_free_loops_embed_connected() {
        let g = embed_str("L[2]");
        assert_eq!(g.polyline.len(), 2);
        assert_eq!(g.triangles.len(), 2 * g.vertex_count() - 5);
    }

    #[test]
    fn trefoil_embeds() {
        let g = embed_str("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]");
        assert_eq!(g.polyline.len(), 1);
        // 3 crossings * 2 passages + 6 subdivided edges with one interior
        // vertex each; level changes add rectangle nodes.
        let levels = g.polyline[0]
            .iter()
            .filter(|n| matches!(n, PolyNode::Level { .. }))
            .count();
        assert_eq!(levels, 12);
        assert_eq!(g.triangles.len(), 2 * g.vertex_count() - 5);
    }

    #[test]
    fn figure_eight_embeds() {
        let g = embed_str("PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]");
        assert_eq!(g.polyline.len(), 1);
        assert_eq!(g.triangles.len(), 2 * g.vertex_count() - 5);
    }

    #[test]
    fn hopf_link_embeds() {
        // Four parallel diagram edges between two crossings; subdivision
        // makes the graph simple.
        let g = embed_str("PD[X(1,3,2,4),X(3,1,4,2)]");
        assert_eq!(g.polyline.len(), 2);
        assert_eq!(g.triangles.len(), 2 * g.vertex_count() - 5);
    }

    #[test]
    fn kinks_embed() {
        for k in 1..=3 {
            let g = grid_embed(&kinked_unknot(k));
            assert_eq!(g.polyline.len(), 1);
            assert_eq!(g.triangles.len(), 2 * g.vertex_count() - 5);
        }
    }

    #[test]
    fn small_diagrams_fit_small_grids() {
        // Coordinates stay within a 10-cells-per-unit-of-crossing-measure
        // grid for the smallest inputs.
        for (d, measure) in [
            (LinkDiagram::parse("L[1]").unwrap(), 0usize),
            (kinked_unknot(1), 1),
        ] {
            let g = grid_embed(&d);
            let bound = 10 * measure.max(1) as i64 - 1;
            for &(x, y) in &g.coords {
                assert!(x >= 0 && x <= bound && y >= 0 && y <= bound);
            }
        }
    }

    #[test]
    fn knot_with_free_loop_embeds() {
        let g = embed_str("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)] L[1]");
        assert_eq!(g.polyline.len(), 2);
        assert_eq!(g.triangles.len(), 2 * g.vertex_count() - 5);
    }

    #[test]
    fn levels_follow_over_under() {
        let g = embed_str("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]");
        // Each crossing is visited once at level -1 and once at +1.
        let mut per_crossing: BTreeMap<usize, Vec<i8>> = BTreeMap::new();
        for node in &g.polyline[0] {
            if let PolyNode::Level { vertex, level } = node {
                if *vertex < g.crossing_count {
                    per_crossing.entry(*vertex).or_default().push(*level);
                }
            }
        }
        assert_eq!(per_crossing.len(), 3);
        for (_, mut levels) in per_crossing {
            levels.sort_unstable();
            assert_eq!(levels, vec![-1, 1]);
        }
    }
}
