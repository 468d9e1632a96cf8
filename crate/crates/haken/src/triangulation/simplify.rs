//! Local moves that shrink a triangulation without changing its manifold.
//!
//! The shrinking moves: shellings peel a boundary tetrahedron off when it
//! meets the boundary in an embedded disk of one, two, or three faces;
//! the pillow squash flattens two tetrahedra wrapped around an interior
//! valence-two edge; the bipyramid merge retriangulates the star of an
//! interior valence-three edge with two tetrahedra; an edge collapse
//! contracts an interior edge with distinct endpoint classes, dropping
//! every tetrahedron around it; and a snapped pop absorbs a tetrahedron
//! glued to itself around a valence-one edge into a neighbour. Boundary
//! book closings, boundary edge pinches, layerings, pillow rotations, and
//! three-way face splits restructure without shrinking, either unlocking
//! a blocked move or perturbing the search off a plateau.
//!
//! Most moves rewire face gluings positionally: the replacement is wired
//! to the old region boundary slot by slot with composed vertex
//! correspondences, so the identifications lost with the removed
//! tetrahedra are regenerated exactly and the underlying space is
//! unchanged. Every candidate checks its structural preconditions and is
//! dropped rather than applied when any fails.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{edge_index, FaceGluing, Perm4, Triangulation, EDGE_VERTICES};

/// A local rewrite: tetrahedra to remove, local ids for their corners, and
/// replacement tetrahedra written over the same ids.
struct Patch {
    removed: Vec<usize>,
    corner_ids: Vec<[usize; 4]>,
    replacement: Vec<[usize; 4]>,
}

/// Greedily shrink `t` with local moves, escaping plateaus through seeded
/// random face splits; returns the smallest triangulation found. The
/// result is always validated.
pub(crate) fn simplify(t: &Triangulation, seed: u64) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = t.clone();
    let mut alive = vec![true; current.tet_count()];
    let mut best: Option<Triangulation> = None;
    let mut stale = 0usize;
    let mut budget = 400_000usize;
    loop {
        greedy(&mut current, &mut alive, &mut budget);
        let compacted = compact(&current, &alive);
        compacted
            .validate()
            .expect("local moves must preserve validity");
        let improved = best
            .as_ref()
            .map_or(true, |b| compacted.tet_count() < b.tet_count());
        if improved {
            best = Some(compacted);
            stale = 0;
        } else {
            stale += 1;
        }
        let settled = best.as_ref().expect("set above");
        if settled.tet_count() <= 2 || stale >= 40 || budget == 0 {
            return best.expect("set above");
        }
        current = settled.clone();
        alive = vec![true; current.tet_count()];
        escape(&mut current, &mut alive, &mut rng, &mut budget);
    }
}

/// Shrink to a local minimum: full shrinking sweeps until none applies,
/// then close one boundary book, lay a tetrahedron over the one edge
/// blocking a pillow collapse, rotate the pillows whose collapse is
/// blocked by their equatorial classes, or contract a boundary edge, and
/// start over. Folds strictly reduce boundary faces, each unlock is
/// followed by a two-for-one collapse, and a rotation sweep is allowed
/// only after the count dropped below the last sweep's, so the
/// alternation terminates.
fn greedy(t: &mut Triangulation, alive: &mut Vec<bool>, budget: &mut usize) {
    let mut last_rotation_size = usize::MAX;
    loop {
        while shrink_pass(t, alive, budget) {
            if *budget == 0 {
                return;
            }
        }
        if *budget == 0 {
            return;
        }
        if close_one_book(t, alive) {
            *budget -= 1;
            continue;
        }
        if unlock_one_squash(t, alive) {
            *budget -= 1;
            continue;
        }
        let size = alive.iter().filter(|&&a| a).count();
        if size < last_rotation_size && rotate_locked_pillows(t, alive, budget) {
            last_rotation_size = size;
            continue;
        }
        if pinch_one(t, alive) {
            *budget -= 1;
            continue;
        }
        return;
    }
}

/// Rotate every pillow whose squash is blocked by its equatorial edge
/// classes: split one of the two shared faces three ways, then merge the
/// three resulting tetrahedra back around the old central edge. The
/// rotated pillow wraps the transverse axis and has different equatorial
/// edges, so a follow-up squash sweep may go through where the original
/// was stuck.
fn rotate_locked_pillows(t: &mut Triangulation, alive: &mut Vec<bool>, budget: &mut usize) -> bool {
    let mut any = false;
    let mut seen = BTreeSet::new();
    for tet in 0..alive.len() {
        if !alive[tet] {
            continue;
        }
        for edge in 0..6u8 {
            if *budget == 0 {
                return any;
            }
            if !matches!(
                squash_pillow_plan(t, tet, edge),
                Err(SquashBlock::EquatorClass)
            ) {
                continue;
            }
            let Some(walk) = star_walk(t, tet, edge) else {
                continue;
            };
            let (t0, t1) = (walk[0].tet, walk[1].tet);
            if !seen.insert((t0.min(t1), t0.max(t1))) {
                continue;
            }
            if rotate_pillow(t, alive, &walk) {
                *budget -= 1;
                any = true;
            }
        }
    }
    any
}

/// Rotate one pillow: a three-way split of a shared face followed by a
/// merge around the old central edge, which now has valence three. The
/// merge skips the apex edge of the split so the rotation cannot undo
/// itself; if no merge applies the split alone stands as a perturbation.
fn rotate_pillow(t: &mut Triangulation, alive: &mut Vec<bool>, walk: &[StarWedge]) -> bool {
    let fresh = t.gluings.len();
    if !try_split_face(t, alive, walk[0].tet, walk[0].exit)
        && !try_split_face(t, alive, walk[1].tet, walk[1].exit)
    {
        return false;
    }
    for j in 0..3 {
        if alive[fresh + j] && try_merge_bipyramid(t, alive, fresh + j, edge_index(2, 3)) {
            break;
        }
    }
    true
}

/// Contract one boundary edge with distinct endpoint classes, shrinking
/// the boundary by two triangles and one vertex.
fn pinch_one(t: &mut Triangulation, alive: &mut Vec<bool>) -> bool {
    for tet in 0..alive.len() {
        if !alive[tet] {
            continue;
        }
        for edge in 0..6u8 {
            let (_, closed) = t.edge_star(tet, edge);
            if !closed && pinch_boundary_edge(t, alive, tet, edge) {
                return true;
            }
        }
    }
    false
}

/// Find a pillow squash blocked only by a boundary equatorial edge and
/// layer over that edge to make it interior.
fn unlock_one_squash(t: &mut Triangulation, alive: &mut Vec<bool>) -> bool {
    for tet in 0..alive.len() {
        if !alive[tet] {
            continue;
        }
        for edge in 0..6u8 {
            if let Err(SquashBlock::BoundaryEquator(r, e)) = squash_pillow_plan(t, tet, edge) {
                if try_layer(t, alive, r, e) {
                    return true;
                }
            }
        }
    }
    false
}

/// One sweep over all live tetrahedra, trying every shrinking move; since
/// a move can change applicability anywhere through its class
/// identifications, progress is re-checked by whole passes rather than a
/// worklist.
fn shrink_pass(t: &mut Triangulation, alive: &mut Vec<bool>, budget: &mut usize) -> bool {
    let mut any = false;
    for tet in 0..alive.len() {
        if *budget == 0 {
            return any;
        }
        if !alive[tet] {
            continue;
        }
        if try_shrink_at(t, alive, tet).is_some() {
            any = true;
            *budget -= 1;
        }
    }
    any
}

fn close_one_book(t: &mut Triangulation, alive: &[bool]) -> bool {
    for tet in 0..alive.len() {
        if !alive[tet] {
            continue;
        }
        for edge in 0..6u8 {
            if try_close_book(t, tet, edge).is_some() {
                return true;
            }
        }
    }
    false
}

fn try_shrink_at(t: &mut Triangulation, alive: &mut Vec<bool>, tet: usize) -> Option<Vec<usize>> {
    if let Some(p) = shell_patch(t, tet) {
        if let Some(affected) = apply_patch(t, alive, &p) {
            return Some(affected);
        }
    }
    for edge in 0..6u8 {
        if try_squash_pillow(t, alive, tet, edge) {
            return Some(vec![]);
        }
    }
    for edge in 0..6u8 {
        if try_merge_bipyramid(t, alive, tet, edge) {
            return Some(vec![]);
        }
    }
    for edge in 0..6u8 {
        if try_collapse_edge(t, alive, tet, edge) {
            return Some(vec![]);
        }
    }
    for edge in 0..6u8 {
        if try_pop_snapped(t, alive, tet, edge) {
            return Some(vec![]);
        }
    }
    None
}

/// Absorb a tetrahedron glued to itself around an interior valence-one
/// edge into a neighbour, a net loss of one. A three-way split of one of
/// the two outer faces turns the loop edge into a valence-two edge of the
/// split, and flattening the pillow around it undoes the gain of the
/// split twice over. The whole sequence is probed on a copy and committed
/// only when the follow-up flattening goes through.
fn try_pop_snapped(t: &mut Triangulation, alive: &mut Vec<bool>, tet: usize, edge: u8) -> bool {
    let (star, closed) = t.edge_star(tet, edge);
    if !closed || star.len() != 1 {
        return false;
    }
    let Some(walk) = star_walk(t, tet, edge) else {
        return false;
    };
    for f in [walk[0].a, walk[0].b] {
        let mut probe = t.clone();
        let mut probe_alive = alive.clone();
        let fresh = probe.gluings.len();
        if !try_split_face(&mut probe, &mut probe_alive, tet, f) {
            continue;
        }
        for j in 0..3 {
            if !probe_alive[fresh + j] {
                continue;
            }
            for eg in 0..6u8 {
                if try_squash_pillow(&mut probe, &mut probe_alive, fresh + j, eg) {
                    *t = probe;
                    *alive = probe_alive;
                    return true;
                }
            }
        }
    }
    false
}

/// Walk around an edge away from one side until a boundary face stops the
/// walk; returns that face's slot and the images of the starting edge
/// endpoints there. Must only be called on boundary edges.
fn book_end(t: &Triangulation, tet: usize, edge: u8, first_side: bool) -> (usize, u8, u8, u8) {
    let [a, b] = EDGE_VERTICES[edge as usize];
    let mut others = (0..4u8).filter(|&v| v != a && v != b);
    let (via_first, via_second) = (
        others.next().expect("two other vertices"),
        others.next().expect("two other vertices"),
    );
    let mut via = if first_side { via_first } else { via_second };
    let (mut ct, mut ca, mut cb) = (tet, a, b);
    loop {
        match t.gluings[ct][via as usize] {
            None => return (ct, via, ca, cb),
            Some(g) => {
                let (na, nb) = (g.perm.apply(ca), g.perm.apply(cb));
                let entered = g.face;
                ct = g.tet;
                via = (0..4u8)
                    .find(|&f| f != entered && f != na && f != nb)
                    .expect("two faces contain an edge");
                ca = na;
                cb = nb;
            }
        }
    }
}

/// Contract an interior edge with distinct endpoints, removing every
/// tetrahedron wrapped around it. Each removed tetrahedron degenerates to
/// a triangle, folding its two faces away from the edge onto each other,
/// so their outer partners are glued together directly. Collapsing an
/// embedded interior arc preserves the manifold; the conditions below make
/// the rebuilt gluings generate exactly the same identifications.
fn try_collapse_edge(t: &mut Triangulation, alive: &mut [bool], tet: usize, edge: u8) -> bool {
    let (slots, closed) = t.edge_star(tet, edge);
    if !closed {
        return false;
    }
    let region: BTreeSet<usize> = slots.iter().map(|&(s, _)| s).collect();
    if region.len() != slots.len() {
        return false;
    }
    let [a0, b0] = EDGE_VERTICES[edge as usize];
    if corner_orbit(t, tet, a0).contains(&(tet, b0)) {
        return false;
    }
    // Collapsing an interior arc between two boundary vertices would
    // identify two boundary points through the interior, pinching the
    // merged vertex link into an annulus.
    if vertex_on_boundary(t, tet, a0) && vertex_on_boundary(t, tet, b0) {
        return false;
    }
    let mut plans = Vec::new();
    for &(s, e) in &slots {
        let [la, lb] = EDGE_VERTICES[e as usize];
        let (ga, gb) = match (t.gluings[s][la as usize], t.gluings[s][lb as usize]) {
            (Some(ga), Some(gb)) => (ga, gb),
            _ => return false,
        };
        // Both outer faces must lead outside the region so the fold's
        // direct regluing does not target a removed tetrahedron; one
        // neighbor receiving both sides is fine and ends up self-glued.
        if region.contains(&ga.tet) || region.contains(&gb.tet) {
            return false;
        }
        // Each vertical edge pair merges under the fold; the two classes
        // must be distinct and interior, each meeting the region exactly
        // in its one adjacent wedge pair, so the cut star arcs are rejoined
        // by the new gluings.
        for x in (0..4u8).filter(|&v| v != la && v != lb) {
            let (star_a, ca) = t.edge_star(s, edge_index(la, x));
            if !ca || star_a.iter().filter(|&&(r, _)| region.contains(&r)).count() != 2 {
                return false;
            }
            if star_a.contains(&(s, edge_index(lb, x))) {
                return false;
            }
            let (star_b, cb) = t.edge_star(s, edge_index(lb, x));
            if !cb || star_b.iter().filter(|&&(r, _)| region.contains(&r)).count() != 2 {
                return false;
            }
        }
        let swap = Perm4::new({
            let mut ims = [0u8, 1, 2, 3];
            ims.swap(la as usize, lb as usize);
            ims
        });
        let through = gb.perm.compose(swap).compose(ga.perm.inverse());
        plans.push((ga, gb, through));
    }
    let removed: Vec<usize> = region.iter().copied().collect();
    for &(s, _) in &slots {
        for v in 0..4u8 {
            if !vertex_orbit_stays_connected(t, &removed, s, v) {
                return false;
            }
        }
    }
    for (ga, gb, through) in plans {
        t.gluings[ga.tet][ga.face as usize] = Some(FaceGluing {
            tet: gb.tet,
            face: gb.face,
            perm: through,
        });
        t.gluings[gb.tet][gb.face as usize] = Some(FaceGluing {
            tet: ga.tet,
            face: ga.face,
            perm: through.inverse(),
        });
    }
    for &s in &removed {
        t.gluings[s] = [None; 4];
        alive[s] = false;
    }
    true
}

/// Lay a fresh tetrahedron across the two boundary triangles meeting along
/// a boundary edge. The edge becomes interior and the boundary is
/// retriangulated with the opposite diagonal of the square, leaving the
/// manifold unchanged. Costs one tetrahedron; used to turn a specific edge
/// interior when that is the only blocker for a shrinking move.
fn try_layer(t: &mut Triangulation, alive: &mut Vec<bool>, tet: usize, edge: u8) -> bool {
    let (_, closed) = t.edge_star(tet, edge);
    if closed {
        return false;
    }
    let (t1, f1, a1, b1) = book_end(t, tet, edge, true);
    let (t2, f2, a2, b2) = book_end(t, tet, edge, false);
    if (t1, f1) == (t2, f2) {
        return false;
    }
    let c1 = (0..4u8).find(|&v| v != f1 && v != a1 && v != b1).expect("third");
    let c2 = (0..4u8).find(|&v| v != f2 && v != a2 && v != b2).expect("third");
    // The fresh tetrahedron keeps the folded edge as its vertices 0 and 1;
    // face 3 covers one old boundary triangle, face 2 the other.
    let fresh = t.gluings.len();
    t.gluings.push([None; 4]);
    alive.push(true);
    let down = try_perm([a1, b1, c1, f1]).expect("distinct images");
    let up = try_perm([a2, b2, f2, c2]).expect("distinct images");
    t.gluings[fresh][3] = Some(FaceGluing {
        tet: t1,
        face: f1,
        perm: down,
    });
    t.gluings[t1][f1 as usize] = Some(FaceGluing {
        tet: fresh,
        face: 3,
        perm: down.inverse(),
    });
    t.gluings[fresh][2] = Some(FaceGluing {
        tet: t2,
        face: f2,
        perm: up,
    });
    t.gluings[t2][f2 as usize] = Some(FaceGluing {
        tet: fresh,
        face: 2,
        perm: up.inverse(),
    });
    true
}

/// Contract a boundary edge with distinct endpoints: layer a fresh
/// tetrahedron over the edge, then fold the two fresh boundary faces onto
/// each other. Collapsing an embedded boundary arc is a homeomorphism, the
/// boundary loses two triangles and one vertex, and the fresh tetrahedron
/// becomes snapped (two of its faces glued to each other), to be removed
/// later by flattening.
fn pinch_boundary_edge(
    t: &mut Triangulation,
    alive: &mut Vec<bool>,
    tet: usize,
    edge: u8,
) -> bool {
    let [a, b] = EDGE_VERTICES[edge as usize];
    if corner_orbit(t, tet, a).contains(&(tet, b)) {
        return false;
    }
    // The snapped tetrahedron left behind traps the diagonal between the
    // two opposite vertices; flattening it later must collapse that
    // diagonal, so those vertices must be distinct classes now or the
    // leftover can never be removed.
    let (end1, face1, a1, b1) = book_end(t, tet, edge, true);
    let (end2, face2, a2, b2) = book_end(t, tet, edge, false);
    let u1 = (0..4u8)
        .find(|&v| v != face1 && v != a1 && v != b1)
        .expect("third vertex");
    let u2 = (0..4u8)
        .find(|&v| v != face2 && v != a2 && v != b2)
        .expect("third vertex");
    if corner_orbit(t, end1, u1).contains(&(end2, u2)) {
        return false;
    }
    if !try_layer(t, alive, tet, edge) {
        return false;
    }
    let fresh = t.gluings.len() - 1;
    let fold = Perm4::new([1, 0, 2, 3]);
    t.gluings[fresh][0] = Some(FaceGluing {
        tet: fresh,
        face: 1,
        perm: fold,
    });
    t.gluings[fresh][1] = Some(FaceGluing {
        tet: fresh,
        face: 0,
        perm: fold,
    });
    true
}

/// Fold the two boundary triangles meeting along a boundary edge onto each
/// other, closing the book. The fold adds no tetrahedra but turns the edge
/// interior, unlocking shrinking moves; boundary faces strictly decrease,
/// so repeated folds terminate. Safe when the two triangles form an
/// embedded square: four distinct vertex classes and five distinct edge
/// classes, so that the fold merely closes a collar crease.
fn try_close_book(t: &mut Triangulation, tet: usize, edge: u8) -> Option<Vec<usize>> {
    let (_, closed) = t.edge_star(tet, edge);
    if closed {
        return None;
    }
    let (t1, f1, a1, b1) = book_end(t, tet, edge, true);
    let (t2, f2, a2, b2) = book_end(t, tet, edge, false);
    if t1 == t2 {
        // Folding a tetrahedron onto itself creates a self-gluing that no
        // shrinking move can later remove.
        return None;
    }
    let u1 = (0..4u8).find(|&v| v != f1 && v != a1 && v != b1)?;
    let u2 = (0..4u8).find(|&v| v != f2 && v != a2 && v != b2)?;
    let orbit_a = corner_orbit(t, t1, a1);
    if orbit_a.contains(&(t1, b1)) || orbit_a.contains(&(t1, u1)) || orbit_a.contains(&(t2, u2)) {
        return None;
    }
    let orbit_b = corner_orbit(t, t1, b1);
    if orbit_b.contains(&(t1, u1)) || orbit_b.contains(&(t2, u2)) {
        return None;
    }
    if corner_orbit(t, t1, u1).contains(&(t2, u2)) {
        return None;
    }
    let edges = [
        (t1, edge_index(a1, b1)),
        (t1, edge_index(a1, u1)),
        (t1, edge_index(b1, u1)),
        (t2, edge_index(a2, u2)),
        (t2, edge_index(b2, u2)),
    ];
    for (i, &(et, ee)) in edges.iter().enumerate() {
        let (star, _) = t.edge_star(et, ee);
        if edges[i + 1..].iter().any(|other| star.contains(other)) {
            return None;
        }
    }
    let mut images = [4u8; 4];
    images[a1 as usize] = a2;
    images[b1 as usize] = b2;
    images[u1 as usize] = u2;
    images[f1 as usize] = f2;
    let perm = try_perm(images)?;
    t.gluings[t1][f1 as usize] = Some(FaceGluing {
        tet: t2,
        face: f2,
        perm,
    });
    t.gluings[t2][f2 as usize] = Some(FaceGluing {
        tet: t1,
        face: f1,
        perm: perm.inverse(),
    });
    Some(vec![t1, t2])
}

/// Rearrange the complex with random size-neutral diagonal swaps, plus an
/// occasional face split, to push the search off a plateau.
fn escape(
    t: &mut Triangulation,
    alive: &mut Vec<bool>,
    rng: &mut ChaCha8Rng,
    budget: &mut usize,
) {
    let splits = rng.gen_range(2..=8);
    let mut done = 0;
    for _ in 0..400 {
        if done == splits || *budget == 0 {
            break;
        }
        let tet = rng.gen_range(0..alive.len());
        if !alive[tet] {
            continue;
        }
        let face = rng.gen_range(0..4u8);
        if try_split_face(t, alive, tet, face) {
            done += 1;
            *budget -= 1;
        }
    }
    // Occasionally rearrange the boundary pattern the same way: a few
    // random layerings over boundary edges, which later folds absorb.
    let layers = rng.gen_range(0..=2);
    let mut laid = 0;
    for _ in 0..200 {
        if laid == layers || *budget == 0 {
            break;
        }
        let tet = rng.gen_range(0..alive.len());
        if !alive[tet] {
            continue;
        }
        let edge = rng.gen_range(0..6u8);
        if try_layer(t, alive, tet, edge) {
            laid += 1;
            *budget -= 1;
        }
    }
}

/// Drop dead rows and renumber the survivors.
fn compact(t: &Triangulation, alive: &[bool]) -> Triangulation {
    let mut map = vec![usize::MAX; alive.len()];
    let mut next = 0usize;
    for (i, &a) in alive.iter().enumerate() {
        if a {
            map[i] = next;
            next += 1;
        }
    }
    let rows: Vec<[Option<FaceGluing>; 4]> = t
        .gluings
        .iter()
        .enumerate()
        .filter(|&(i, _)| alive[i])
        .map(|(_, faces)| {
            let mut row = [None; 4];
            for (f, slot) in faces.iter().enumerate() {
                row[f] = slot.map(|g| {
                    assert_ne!(map[g.tet], usize::MAX, "gluing into a removed tetrahedron");
                    FaceGluing {
                        tet: map[g.tet],
                        face: g.face,
                        perm: g.perm,
                    }
                });
            }
            row
        })
        .collect();
    Triangulation::new(rows).expect("compacted gluings stay involutive")
}

/// Slots of the vertex class at (tet, v), found by corner-chasing through
/// the gluings.
fn corner_orbit(t: &Triangulation, tet: usize, v: u8) -> BTreeSet<(usize, u8)> {
    let mut seen = BTreeSet::from([(tet, v)]);
    let mut queue = VecDeque::from([(tet, v)]);
    while let Some((ct, cv)) = queue.pop_front() {
        for f in 0..4u8 {
            if f == cv {
                continue;
            }
            if let Some(g) = t.gluings[ct][f as usize] {
                let next = (g.tet, g.perm.apply(cv));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// Whether the vertex class at (tet, v) lies on a boundary face anywhere.
fn vertex_on_boundary(t: &Triangulation, tet: usize, v: u8) -> bool {
    corner_orbit(t, tet, v)
        .iter()
        .any(|&(r, w)| (0..4u8).any(|f| f != w && t.gluings[r][f as usize].is_none()))
}

/// Whether the vertex class at (tet, v) keeps its remaining corners in one
/// piece once the listed tetrahedra are removed. Identifications that run
/// only through removed corners are lost with them, which would cut the
/// complex open at this vertex.
fn vertex_orbit_stays_connected(
    t: &Triangulation,
    removed: &[usize],
    tet: usize,
    v: u8,
) -> bool {
    let orbit = corner_orbit(t, tet, v);
    let outside: Vec<(usize, u8)> = orbit
        .iter()
        .copied()
        .filter(|(r, _)| !removed.contains(r))
        .collect();
    let Some(&start) = outside.first() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((ct, cv)) = queue.pop_front() {
        for f in 0..4u8 {
            if f == cv {
                continue;
            }
            if let Some(g) = t.gluings[ct][f as usize] {
                if removed.contains(&g.tet) {
                    continue;
                }
                let next = (g.tet, g.perm.apply(cv));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.len() == outside.len()
}

/// Whether the listed edge slots of one tetrahedron fall into pairwise
/// distinct edge classes.
fn distinct_edge_classes(t: &Triangulation, tet: usize, edges: &[u8]) -> bool {
    for (i, &e1) in edges.iter().enumerate() {
        let (star, _) = t.edge_star(tet, e1);
        for &e2 in &edges[i + 1..] {
            if star.contains(&(tet, e2)) {
                return false;
            }
        }
    }
    true
}

/// Whether the listed vertex slots of one tetrahedron fall into pairwise
/// distinct vertex classes.
fn distinct_vertex_classes(t: &Triangulation, tet: usize, verts: &[u8]) -> bool {
    for (i, &v1) in verts.iter().enumerate() {
        let orbit = corner_orbit(t, tet, v1);
        for &v2 in &verts[i + 1..] {
            if orbit.contains(&(tet, v2)) {
                return false;
            }
        }
    }
    true
}

/// Peel one tetrahedron off the boundary. The tetrahedron must meet the
/// boundary in an embedded disk of one, two, or three faces whose interior
/// simplices stay off the existing boundary, so that the removal is the
/// inverse of attaching a ball along a boundary disk. Without the
/// interiority conditions a removal can pinch the boundary at a vertex or
/// edge the region's interior shares with it.
fn shell_patch(t: &Triangulation, tet: usize) -> Option<Patch> {
    let free: Vec<u8> = (0..4u8)
        .filter(|&f| t.gluings[tet][f as usize].is_none())
        .collect();
    let ok = match free.len() {
        // Glued along three faces sharing the vertex opposite the free
        // face: every edge and vertex must be distinct, no two glued faces
        // may be glued to each other, and the apex vertex and its three
        // edges, interior to the glued disk, must be interior to the
        // manifold.
        1 => {
            let f = free[0];
            !vertex_on_boundary(t, tet, f)
                && (0..4u8)
                    .filter(|&x| x != f)
                    .all(|x| t.edge_star(tet, edge_index(f, x)).1)
                && (0..4u8)
                    .filter(|&x| x != f)
                    .all(|x| t.gluings[tet][x as usize].is_some_and(|g| g.tet != tet))
                && distinct_edge_classes(t, tet, &[0, 1, 2, 3, 4, 5])
                && distinct_vertex_classes(t, tet, &[0, 1, 2, 3])
                && (0..4u8)
                    .filter(|&x| x != f)
                    .all(|x| vertex_orbit_stays_connected(t, &[tet], tet, x))
        }
        // Glued along two faces sharing one edge: the glued region is a
        // square disk whose five edges and four vertices must be distinct
        // and whose diagonal, the edge shared by the glued faces, must be
        // interior to the manifold.
        2 => {
            let glued: Vec<u8> = (0..4u8).filter(|&x| !free.contains(&x)).collect();
            let ridge = edge_index(glued[0], glued[1]);
            let others: Vec<u8> = (0..6u8).filter(|&e| e != ridge).collect();
            t.edge_star(tet, edge_index(free[0], free[1])).1
                && t.gluings[tet][glued[0] as usize].is_some_and(|g| g.tet != tet)
                && distinct_edge_classes(t, tet, &others)
                && distinct_vertex_classes(t, tet, &[0, 1, 2, 3])
                && free
                    .iter()
                    .all(|&x| vertex_orbit_stays_connected(t, &[tet], tet, x))
        }
        // Glued along a single face: the spike's apex vertex and its three
        // edges must belong to this tetrahedron alone, and the glued face
        // must be an embedded triangle.
        3 => {
            let g = (0..4u8)
                .find(|&x| !free.contains(&x))
                .expect("one glued face");
            let apex_edges_private = (0..4u8).filter(|&x| x != g).all(|x| {
                let (star, closed) = t.edge_star(tet, edge_index(g, x));
                !closed && star.len() == 1
            });
            let base_edges: Vec<u8> = (0..6u8)
                .filter(|&e| {
                    let [a, b] = EDGE_VERTICES[e as usize];
                    a != g && b != g
                })
                .collect();
            let base_verts: Vec<u8> = (0..4u8).filter(|&v| v != g).collect();
            apex_edges_private
                && corner_orbit(t, tet, g).len() == 1
                && distinct_edge_classes(t, tet, &base_edges)
                && distinct_vertex_classes(t, tet, &base_verts)
        }
        _ => false,
    };
    ok.then(|| Patch {
        removed: vec![tet],
        corner_ids: vec![[0, 1, 2, 3]],
        replacement: vec![],
    })
}

/// One wedge of the closed star around an interior edge: the tetrahedron
/// it lives in, the local images of the edge endpoints, and the wing faces
/// through which the cyclic walk enters and leaves it.
struct StarWedge {
    tet: usize,
    a: u8,
    b: u8,
    entry: u8,
    exit: u8,
}

/// Walk once around an interior edge, recording each wedge in cyclic
/// order. Returns None for boundary edges and for degenerate stars whose
/// closing crossing fails to bring the edge endpoints back to themselves.
fn star_walk(t: &Triangulation, tet: usize, edge: u8) -> Option<Vec<StarWedge>> {
    let [la, lb] = EDGE_VERTICES[edge as usize];
    let closing_wing = (0..4u8)
        .find(|&v| v != la && v != lb)
        .expect("two wings");
    let limit = t.tet_count() * 6;
    let mut wedges = Vec::new();
    let (mut cur, mut a, mut b, mut entry) = (tet, la, lb, closing_wing);
    loop {
        let exit = (0..4u8)
            .find(|&v| v != a && v != b && v != entry)
            .expect("fourth label");
        wedges.push(StarWedge {
            tet: cur,
            a,
            b,
            entry,
            exit,
        });
        if wedges.len() > limit {
            return None;
        }
        let g = t.gluings[cur][exit as usize]?;
        if (g.tet, g.face) == (tet, closing_wing) {
            return (g.perm.apply(a) == la && g.perm.apply(b) == lb).then_some(wedges);
        }
        (cur, a, b, entry) = (g.tet, g.perm.apply(a), g.perm.apply(b), g.face);
    }
}

/// Why a pillow squash cannot be applied, split by what could unblock it.
enum SquashBlock {
    /// Structurally inapplicable; nothing local will change that.
    Blocked,
    /// Applicable except that an equatorial edge meets the pillow in more
    /// than one class slot; rotating the pillow may help.
    EquatorClass,
    /// Applicable except that this equatorial edge lies on the boundary;
    /// layering over it makes it interior.
    BoundaryEquator(usize, u8),
}

/// The rewiring that flattens a pillow: the two tetrahedra to drop and,
/// for each pair of outer faces, the outside slots to glue directly to
/// each other with the composed vertex correspondence.
struct SquashPlan {
    removed: [usize; 2],
    joins: [((usize, u8), (usize, u8), Perm4); 2],
}

/// Plan the flattening of two distinct tetrahedra wrapped around an
/// interior valence-two edge. The flattening maps one tetrahedron onto
/// the other by extending either wing gluing, so each outer face lands on
/// its opposite number and their outside partners get glued directly.
///
/// The equatorial edge of each tetrahedron (between the two wing
/// vertices) must be interior and meet the pillow once: flattening merges
/// the two equatorial classes, and a boundary equator would pinch the
/// boundary surface instead. A candidate blocked only by a boundary
/// equator reports that edge so the caller can layer over it and retry.
/// The outside partners behind each pair must lie outside the pillow so
/// they survive the rewiring; both partners of a pair landing on one
/// outside tetrahedron is fine and just leaves it glued to itself.
fn squash_pillow_plan(t: &Triangulation, tet: usize, edge: u8) -> Result<SquashPlan, SquashBlock> {
    let walk = star_walk(t, tet, edge).ok_or(SquashBlock::Blocked)?;
    if walk.len() != 2 || walk[0].tet == walk[1].tet {
        return Err(SquashBlock::Blocked);
    }
    let (t0, t1) = (walk[0].tet, walk[1].tet);
    let flatten = t.gluings[t0][walk[0].exit as usize]
        .expect("closed star wing")
        .perm;
    let mut boundary_equator = None;
    for w in &walk {
        let eq = edge_index(w.entry, w.exit);
        let (star, eq_closed) = t.edge_star(w.tet, eq);
        if star.iter().filter(|&&(s, _)| s == t0 || s == t1).count() != 1 {
            return Err(SquashBlock::EquatorClass);
        }
        if !eq_closed && boundary_equator.is_none() {
            boundary_equator = Some((w.tet, eq));
        }
    }
    let mut joins = Vec::with_capacity(2);
    for (f0, f1) in [(walk[0].a, walk[1].a), (walk[0].b, walk[1].b)] {
        let x = t.gluings[t0][f0 as usize].ok_or(SquashBlock::Blocked)?;
        let y = t.gluings[t1][f1 as usize].ok_or(SquashBlock::Blocked)?;
        if x.tet == t0 || x.tet == t1 || y.tet == t0 || y.tet == t1 {
            return Err(SquashBlock::Blocked);
        }
        joins.push((
            (x.tet, x.face),
            (y.tet, y.face),
            y.perm.compose(flatten).compose(x.perm.inverse()),
        ));
    }
    if let Some((r, e)) = boundary_equator {
        return Err(SquashBlock::BoundaryEquator(r, e));
    }
    Ok(SquashPlan {
        removed: [t0, t1],
        joins: [joins[0], joins[1]],
    })
}

/// Flatten a pillow around an interior valence-two edge, rewiring the
/// outside partners positionally; no conditions on vertex or edge class
/// distinctness are needed beyond the plan's own checks.
fn try_squash_pillow(t: &mut Triangulation, alive: &mut [bool], tet: usize, edge: u8) -> bool {
    let Ok(plan) = squash_pillow_plan(t, tet, edge) else {
        return false;
    };
    for &((xt, xf), (yt, yf), p) in &plan.joins {
        t.gluings[xt][xf as usize] = Some(FaceGluing {
            tet: yt,
            face: yf,
            perm: p,
        });
        t.gluings[yt][yf as usize] = Some(FaceGluing {
            tet: xt,
            face: xf,
            perm: p.inverse(),
        });
    }
    for &r in &plan.removed {
        t.gluings[r] = [None; 4];
        alive[r] = false;
    }
    true
}

/// Replace the star of an interior valence-three edge, a bipyramid of
/// three distinct tetrahedra, by two fresh tetrahedra sharing the
/// equatorial triangle. The fresh pair is wired to the old outer faces'
/// partners positionally, so the bipyramid shape is the only requirement:
/// the two triangulations of the solid bipyramid share their boundary
/// sphere, and every identification through the region is carried over
/// verbatim.
fn try_merge_bipyramid(
    t: &mut Triangulation,
    alive: &mut Vec<bool>,
    tet: usize,
    edge: u8,
) -> bool {
    let Some(walk) = star_walk(t, tet, edge) else {
        return false;
    };
    if walk.len() != 3 {
        return false;
    }
    let region = [walk[0].tet, walk[1].tet, walk[2].tet];
    if region[0] == region[1] || region[0] == region[2] || region[1] == region[2] {
        return false;
    }
    let fresh_a = t.gluings.len();
    let fresh_b = fresh_a + 1;
    // The fresh tetrahedra carry the apexes at label 3 and the equatorial
    // vertices at labels 0, 1, 2; wedge j spans equatorial vertices j and
    // j + 1, so its two outer faces become face (j + 2) % 3 of each fresh
    // tetrahedron. Each table entry maps an old outer face slot to its
    // fresh face and the label correspondence fresh -> old.
    let mut table: BTreeMap<(usize, u8), (usize, u8, Perm4)> = BTreeMap::new();
    for (j, w) in walk.iter().enumerate() {
        let k = (j + 2) % 3;
        let mut to_old = [0u8; 4];
        to_old[3] = w.a;
        to_old[j] = w.exit;
        to_old[(j + 1) % 3] = w.entry;
        to_old[k] = w.b;
        table.insert((w.tet, w.b), (fresh_a, k as u8, Perm4::new(to_old)));
        to_old[3] = w.b;
        to_old[k] = w.a;
        table.insert((w.tet, w.a), (fresh_b, k as u8, Perm4::new(to_old)));
    }
    // Gather all rewiring before mutating anything; outer faces glued
    // inside the region must land on other outer faces.
    let mut writes: Vec<((usize, u8), FaceGluing)> = Vec::new();
    for (&(ot, of), &(nt, nf, to_old)) in &table {
        match t.gluings[ot][of as usize] {
            None => {}
            Some(g) if !region.contains(&g.tet) => {
                let p = g.perm.compose(to_old);
                writes.push((
                    (nt, nf),
                    FaceGluing {
                        tet: g.tet,
                        face: g.face,
                        perm: p,
                    },
                ));
                writes.push((
                    (g.tet, g.face),
                    FaceGluing {
                        tet: nt,
                        face: nf,
                        perm: p.inverse(),
                    },
                ));
            }
            Some(g) => {
                let Some(&(nt2, nf2, to_old2)) = table.get(&(g.tet, g.face)) else {
                    return false;
                };
                writes.push((
                    (nt, nf),
                    FaceGluing {
                        tet: nt2,
                        face: nf2,
                        perm: to_old2.inverse().compose(g.perm).compose(to_old),
                    },
                ));
            }
        }
    }
    t.gluings.push([None; 4]);
    t.gluings.push([None; 4]);
    alive.push(true);
    alive.push(true);
    t.gluings[fresh_a][3] = Some(FaceGluing {
        tet: fresh_b,
        face: 3,
        perm: Perm4::identity(),
    });
    t.gluings[fresh_b][3] = Some(FaceGluing {
        tet: fresh_a,
        face: 3,
        perm: Perm4::identity(),
    });
    for ((st, sf), g) in writes {
        t.gluings[st][sf as usize] = Some(g);
    }
    for r in region {
        t.gluings[r] = [None; 4];
        alive[r] = false;
    }
    true
}

/// Split an interior face between two distinct tetrahedra into three
/// tetrahedra wrapped around a fresh edge joining the two apexes. The
/// inverse of the bipyramid merge; it grows the triangulation by one
/// tetrahedron and serves as the randomized stirring move when greedy
/// shrinking stalls. The two triangulations of the bipyramid share their
/// boundary sphere, so only the face shape is required; outside wiring,
/// including identifications between the two old tetrahedra themselves,
/// carries over positionally.
fn try_split_face(t: &mut Triangulation, alive: &mut Vec<bool>, tet: usize, face: u8) -> bool {
    let Some(g) = t.gluings[tet][face as usize] else {
        return false;
    };
    if g.tet == tet {
        return false;
    }
    let (ta, tb, fb) = (tet, g.tet, g.face);
    let tri: Vec<u8> = (0..4u8).filter(|&v| v != face).collect();
    let fresh = t.gluings.len();
    // Fresh tetrahedron j carries the apexes at labels 0 (this side) and 1
    // (far side) and spans triangle corners j and j + 1 at labels 2 and 3.
    // Its face 1 replaces this tetrahedron's face at corner j + 2, its
    // face 0 the far tetrahedron's counterpart.
    let mut table: BTreeMap<(usize, u8), (usize, u8, Perm4)> = BTreeMap::new();
    for j in 0..3 {
        let (u0, u1, u2) = (tri[j], tri[(j + 1) % 3], tri[(j + 2) % 3]);
        let mut to_a = [0u8; 4];
        to_a[0] = face;
        to_a[1] = u2;
        to_a[2] = u0;
        to_a[3] = u1;
        table.insert((ta, u2), (fresh + j, 1, Perm4::new(to_a)));
        let to_b = [g.perm.apply(u2), fb, g.perm.apply(u0), g.perm.apply(u1)];
        table.insert((tb, g.perm.apply(u2)), (fresh + j, 0, Perm4::new(to_b)));
    }
    let mut writes: Vec<((usize, u8), FaceGluing)> = Vec::new();
    for (&(ot, of), &(nt, nf, to_old)) in &table {
        match t.gluings[ot][of as usize] {
            None => {}
            Some(h) if h.tet != ta && h.tet != tb => {
                let p = h.perm.compose(to_old);
                writes.push((
                    (nt, nf),
                    FaceGluing {
                        tet: h.tet,
                        face: h.face,
                        perm: p,
                    },
                ));
                writes.push((
                    (h.tet, h.face),
                    FaceGluing {
                        tet: nt,
                        face: nf,
                        perm: p.inverse(),
                    },
                ));
            }
            Some(h) => {
                let Some(&(nt2, nf2, to_old2)) = table.get(&(h.tet, h.face)) else {
                    return false;
                };
                writes.push((
                    (nt, nf),
                    FaceGluing {
                        tet: nt2,
                        face: nf2,
                        perm: to_old2.inverse().compose(h.perm).compose(to_old),
                    },
                ));
            }
        }
    }
    let wing = Perm4::new([0, 1, 3, 2]);
    for _ in 0..3 {
        t.gluings.push([None; 4]);
        alive.push(true);
    }
    for j in 0..3 {
        let prev = fresh + (j + 2) % 3;
        t.gluings[fresh + j][3] = Some(FaceGluing {
            tet: prev,
            face: 2,
            perm: wing,
        });
        t.gluings[prev][2] = Some(FaceGluing {
            tet: fresh + j,
            face: 3,
            perm: wing,
        });
    }
    for ((st, sf), gl) in writes {
        t.gluings[st][sf as usize] = Some(gl);
    }
    for r in [ta, tb] {
        t.gluings[r] = [None; 4];
        alive[r] = false;
    }
    true
}

fn try_perm(images: [u8; 4]) -> Option<Perm4> {
    let mut seen = [false; 4];
    for &i in &images {
        if i >= 4 || seen[i as usize] {
            return None;
        }
        seen[i as usize] = true;
    }
    Some(Perm4::new(images))
}

/// Where an id sits in a tetrahedron's corner ids.
fn id_slot(ids: &[usize; 4], id: usize) -> Option<u8> {
    ids.iter().position(|&x| x == id).map(|p| p as u8)
}

struct Port {
    tet_pos: usize,
    outer: Option<FaceGluing>,
}

#[derive(Default)]
struct TripleUses {
    fresh: Vec<(usize, u8)>,
    ports: Vec<Port>,
}

/// Swap the removed region for the replacement. Boundary faces of the two
/// regions are matched by their sorted id triples: a replacement face
/// either meets another replacement face, takes over a removed face's
/// outer gluing, or stays a boundary face; with no replacement, outer
/// gluings pair up directly or are exposed. Returns the tetrahedra whose
/// gluings changed, or `None` if any matching is ambiguous.
fn apply_patch(
    t: &mut Triangulation,
    alive: &mut Vec<bool>,
    patch: &Patch,
) -> Option<Vec<usize>> {
    let pos: BTreeMap<usize, usize> = patch
        .removed
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, i))
        .collect();
    for nt in &patch.replacement {
        let distinct: BTreeSet<usize> = nt.iter().copied().collect();
        if distinct.len() != 4 {
            return None;
        }
    }
    let face_ids = |ids: &[usize; 4], f: u8| -> [usize; 3] {
        let mut triple = [0usize; 3];
        let mut k = 0;
        for v in 0..4u8 {
            if v != f {
                triple[k] = ids[v as usize];
                k += 1;
            }
        }
        triple.sort_unstable();
        triple
    };
    let mut uses: BTreeMap<[usize; 3], TripleUses> = BTreeMap::new();
    for (i, &r) in patch.removed.iter().enumerate() {
        for f in 0..4u8 {
            let slot = t.gluings[r][f as usize];
            if let Some(g) = slot {
                if pos.contains_key(&g.tet) {
                    continue; // internal to the removed region
                }
            }
            uses.entry(face_ids(&patch.corner_ids[i], f))
                .or_default()
                .ports
                .push(Port {
                    tet_pos: i,
                    outer: slot,
                });
        }
    }
    for (j, nt) in patch.replacement.iter().enumerate() {
        for f in 0..4u8 {
            uses.entry(face_ids(nt, f)).or_default().fresh.push((j, f));
        }
    }
    let base = t.gluings.len();
    let mut updates: Vec<(usize, u8, Option<FaceGluing>)> = Vec::new();
    for u in uses.values() {
        match (u.fresh.len(), u.ports.len()) {
            (2, 0) => {
                let ((j1, f1), (j2, f2)) = (u.fresh[0], u.fresh[1]);
                let (a, b) = (&patch.replacement[j1], &patch.replacement[j2]);
                let mut images = [4u8; 4];
                images[f1 as usize] = f2;
                for v in 0..4u8 {
                    if v != f1 {
                        images[v as usize] = id_slot(b, a[v as usize])?;
                    }
                }
                let perm = try_perm(images)?;
                updates.push((
                    base + j1,
                    f1,
                    Some(FaceGluing {
                        tet: base + j2,
                        face: f2,
                        perm,
                    }),
                ));
                updates.push((
                    base + j2,
                    f2,
                    Some(FaceGluing {
                        tet: base + j1,
                        face: f1,
                        perm: perm.inverse(),
                    }),
                ));
            }
            (1, 1) => {
                let (j, f) = u.fresh[0];
                let port = &u.ports[0];
                let outer = match port.outer {
                    None => continue, // replacement face stays boundary
                    Some(outer) => outer,
                };
                let rid = &patch.corner_ids[port.tet_pos];
                let nt = &patch.replacement[j];
                let mut images = [4u8; 4];
                images[f as usize] = outer.face;
                for v in 0..4u8 {
                    if v != f {
                        let l = id_slot(rid, nt[v as usize])?;
                        images[v as usize] = outer.perm.apply(l);
                    }
                }
                let perm = try_perm(images)?;
                updates.push((
                    base + j,
                    f,
                    Some(FaceGluing {
                        tet: outer.tet,
                        face: outer.face,
                        perm,
                    }),
                ));
                updates.push((
                    outer.tet,
                    outer.face,
                    Some(FaceGluing {
                        tet: base + j,
                        face: f,
                        perm: perm.inverse(),
                    }),
                ));
            }
            (0, 2) => {
                let (p1, p2) = (&u.ports[0], &u.ports[1]);
                let (g1, g2) = (p1.outer?, p2.outer?);
                let (r1, r2) = (
                    &patch.corner_ids[p1.tet_pos],
                    &patch.corner_ids[p2.tet_pos],
                );
                let back1 = g1.perm.inverse();
                let mut images = [4u8; 4];
                images[g1.face as usize] = g2.face;
                for v in 0..4u8 {
                    if v != g1.face {
                        let id = r1[back1.apply(v) as usize];
                        images[v as usize] = g2.perm.apply(id_slot(r2, id)?);
                    }
                }
                let perm = try_perm(images)?;
                updates.push((
                    g1.tet,
                    g1.face,
                    Some(FaceGluing {
                        tet: g2.tet,
                        face: g2.face,
                        perm,
                    }),
                ));
                updates.push((
                    g2.tet,
                    g2.face,
                    Some(FaceGluing {
                        tet: g1.tet,
                        face: g1.face,
                        perm: perm.inverse(),
                    }),
                ));
            }
            (0, 1) => {
                if let Some(g) = u.ports[0].outer {
                    updates.push((g.tet, g.face, None));
                }
            }
            _ => return None,
        }
    }
    let mut targets = BTreeSet::new();
    for &(tet, f, _) in &updates {
        if !targets.insert((tet, f)) {
            return None;
        }
    }
    for _ in 0..patch.replacement.len() {
        t.gluings.push([None; 4]);
        alive.push(true);
    }
    for &(tet, f, g) in &updates {
        t.gluings[tet][f as usize] = g;
    }
    for &r in &patch.removed {
        t.gluings[r] = [None; 4];
        alive[r] = false;
    }
    let mut affected: BTreeSet<usize> = updates.iter().map(|&(tet, _, _)| tet).collect();
    for j in 0..patch.replacement.len() {
        affected.insert(base + j);
    }
    Some(affected.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::super::{one_tetrahedron, pillow_sphere, solid_torus};
    use super::*;

    #[test]
    fn minimal_complexes_stay_put() {
        for t in [one_tetrahedron(), pillow_sphere(), solid_torus()] {
            let before = t.tet_count();
            let after = simplify(&t, 7);
            assert_eq!(after.tet_count(), before);
            assert!(after.validate().is_ok());
        }
    }

    #[test]
    fn subdivided_sphere_shrinks_back() {
        let (big, _) = pillow_sphere().barycentric_subdivision();
        assert_eq!(big.tet_count(), 48);
        let small = simplify(&big, 7);
        assert!(small.validate().is_ok());
        assert!(
            small.tet_count() <= 2,
            "sphere stuck at {} tetrahedra",
            small.tet_count()
        );
        assert!(small.boundary_components().is_empty());
    }

    #[test]
    fn subdivided_solid_torus_shrinks_back() {
        let (big, _) = solid_torus().barycentric_subdivision();
        assert_eq!(big.tet_count(), 24);
        let small = simplify(&big, 7);
        assert!(small.validate().is_ok());
        assert!(
            small.tet_count() <= 2,
            "solid torus stuck at {} tetrahedra",
            small.tet_count()
        );
        let boundary = small.boundary_components();
        assert_eq!(boundary.len(), 1);
        assert_eq!(boundary[0].euler_characteristic, 0);
    }

    #[test]
    fn simplification_is_deterministic() {
        let (big, _) = solid_torus().barycentric_subdivision();
        let a = simplify(&big, 99);
        let b = simplify(&big, 99);
        assert_eq!(a.serialize(), b.serialize());
    }

    #[test]
    fn face_split_then_merge_roundtrip() {
        // Split the pillow sphere across one face, then check the greedy
        // pass recovers a two-tetrahedron sphere.
        let mut t = pillow_sphere();
        let mut alive = vec![true; 2];
        assert!(try_split_face(&mut t, &mut alive, 0, 0));
        assert_eq!(alive.iter().filter(|&&a| a).count(), 3);
        let compacted = compact(&t, &alive);
        assert!(compacted.validate().is_ok());
        let small = simplify(&compacted, 7);
        assert_eq!(small.tet_count(), 2);
    }
}
