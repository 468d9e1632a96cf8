//! Independent diagram-level oracles used to cross-check the main engine.
//!
//! Nothing here touches triangulations or normal surfaces. Each function
//! computes a classical invariant straight from the diagram combinatorics:
//!
//! * the Alexander polynomial via the Wirtinger presentation and Fox
//!   calculus — `Δ ≠ 1` certifies knottedness, and `deg Δ / 2` bounds the
//!   genus from below;
//! * the Seifert-circle count, whose surface bounds the genus from above;
//! * the absolute linking number of a 2-component link — nonzero linking
//!   obstructs splitting;
//! * untwisting (repeatedly removing crossings through which an arc loops
//!   straight back), which recognizes the obviously-unknotted inputs.
//!
//! The decision procedures never consult these; tests assert agreement.

use crate::diagram::{End, LinkDiagram};

/// Per-crossing strand orientation data recovered by tracing.
struct Orientation {
    /// Position (0 or 2) of the end where the under-strand enters.
    under_in: Vec<u8>,
    /// Position (1 or 3) of the end where the over-strand enters.
    over_in: Vec<u8>,
    /// Circuit id of every end.
    circuit_of_end: Vec<usize>,
}

fn orient(d: &LinkDiagram) -> Orientation {
    let n = d.crossing_count();
    let mut under_in = vec![u8::MAX; n];
    let mut over_in = vec![u8::MAX; n];
    let mut circuit_of_end = vec![usize::MAX; 4 * n];
    for (id, circuit) in d.circuits().iter().enumerate() {
        for &e in circuit {
            circuit_of_end[e.index()] = id;
            circuit_of_end[e.across().index()] = id;
            if e.is_over() {
                over_in[e.crossing] = e.position;
            } else {
                under_in[e.crossing] = e.position;
            }
        }
    }
    Orientation {
        under_in,
        over_in,
        circuit_of_end,
    }
}

impl Orientation {
    /// Crossing handedness under the traced orientation. Only consistency
    /// matters to the callers: both chiralities of a diagram produce
    /// mirror-symmetric answers for everything derived here.
    fn sign(&self, c: usize) -> i64 {
        if self.over_in[c] == (self.under_in[c] + 3) % 4 {
            1
        } else {
            -1
        }
    }
}

// --- dense integer polynomials in one variable, coefficient of t^i at i ---

type Poly = Vec<i64>;

fn ptrim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn padd(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] += x;
    }
    ptrim(out)
}

fn pneg(a: &Poly) -> Poly {
    a.iter().map(|&x| -x).collect()
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ptrim(out)
}

/// Determinant by minor expansion; the matrices here are at most a handful
/// of rows wide.
fn pdet(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return vec![1];
    }
    let mut det: Poly = Vec::new();
    for j in 0..n {
        if m[0][j].is_empty() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = pmul(&m[0][j], &pdet(&minor));
        det = if j % 2 == 0 {
            padd(&det, &term)
        } else {
            padd(&det, &pneg(&term))
        };
    }
    det
}

/// The Alexander polynomial of a knot, normalized so the lowest power is
/// `t^0` and the value at `t = 1` is `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderPolynomial {
    /// Coefficients from constant term upward.
    pub coefficients: Vec<i64>,
}

impl AlexanderPolynomial {
    pub fn is_trivial(&self) -> bool {
        self.coefficients == [1]
    }

    /// Breadth of the polynomial: degree of the highest term.
    pub fn span(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// The Seifert genus is at least half the span.
    pub fn genus_lower_bound(&self) -> usize {
        self.span() / 2
    }
}

/// Alexander polynomial via Fox derivatives of the Wirtinger presentation.
/// Returns `None` unless the diagram is a knot diagram.
pub fn alexander_polynomial(d: &LinkDiagram) -> Option<AlexanderPolynomial> {
    if !d.is_knot_diagram() {
        return None;
    }
    let n = d.crossing_count();
    if n == 0 {
        return Some(AlexanderPolynomial {
            coefficients: vec![1],
        });
    }
    let or = orient(d);

    // Generators are the over-arcs: unify the two over-strand edges at
    // every crossing.
    let mut arc = UnionFind::new(d.edges().len());
    for c in 0..n {
        let e1 = d.edge_of_end(End::new(c, 1));
        let e3 = d.edge_of_end(End::new(c, 3));
        arc.unite(e1, e3);
    }
    let mut arc_index = vec![usize::MAX; d.edges().len()];
    let mut arcs = 0;
    for e in 0..d.edges().len() {
        let root = arc.find(e);
        if arc_index[root] == usize::MAX {
            arc_index[root] = arcs;
            arcs += 1;
        }
        arc_index[e] = arc_index[root];
    }
    assert_eq!(arcs, n, "a knot diagram has one over-arc per crossing");

    // One Wirtinger relation per crossing; entries accumulate because a
    // twist's over-arc can coincide with its under-arcs.
    let one_minus_t: Poly = vec![1, -1];
    let t: Poly = vec![0, 1];
    let one: Poly = vec![1];
    let mut matrix = vec![vec![Poly::new(); n]; n];
    for c in 0..n {
        let over = arc_index[d.edge_of_end(End::new(c, 1))];
        let under_in = arc_index[d.edge_of_end(End::new(c, or.under_in[c]))];
        let under_out = arc_index[d.edge_of_end(End::new(c, (or.under_in[c] + 2) % 4))];
        let (po, pi, pout) = if or.sign(c) > 0 {
            (one_minus_t.clone(), t.clone(), pneg(&one))
        } else {
            (pneg(&one_minus_t), one.clone(), pneg(&t))
        };
        matrix[c][over] = padd(&matrix[c][over], &po);
        matrix[c][under_in] = padd(&matrix[c][under_in], &pi);
        matrix[c][under_out] = padd(&matrix[c][under_out], &pout);
    }

    // Strike one row and one column; the determinant is Δ up to ±t^k.
    let minor: Vec<Vec<Poly>> = matrix[..n - 1]
        .iter()
        .map(|row| row[..n - 1].to_vec())
        .collect();
    let det = pdet(&minor);
    assert!(!det.is_empty(), "Alexander determinant of a knot is nonzero");
    let low = det.iter().position(|&x| x != 0).unwrap();
    let mut coefficients: Vec<i64> = det[low..].to_vec();
    let at_one: i64 = coefficients.iter().sum();
    assert_eq!(at_one.abs(), 1, "Δ(1) = ±1 for a knot");
    if at_one < 0 {
        coefficients.iter_mut().for_each(|x| *x = -*x);
    }
    Some(AlexanderPolynomial { coefficients })
}

/// Number of circles produced by orientation-respecting smoothing of every
/// crossing, counting crossing-free loops.
pub fn seifert_circle_count(d: &LinkDiagram) -> usize {
    let n = d.crossing_count();
    if n == 0 {
        return d.loop_count();
    }
    let or = orient(d);
    // Walk: follow an edge to its head, jump to the smoothed-out partner
    // end, continue. `next[e]` is the edge after `e` on its Seifert circle.
    let mut head = vec![End::new(0, 0); d.edges().len()];
    for c in 0..n {
        for p in 0..4u8 {
            let e = End::new(c, p);
            let arriving = p == or.under_in[c] || p == or.over_in[c];
            if arriving {
                head[d.edge_of_end(e)] = e;
            }
        }
    }
    let mut next = vec![usize::MAX; d.edges().len()];
    for (e, &h) in head.iter().enumerate() {
        let c = h.crossing;
        let out = if h.is_over() {
            (or.under_in[c] + 2) % 4
        } else {
            (or.over_in[c] + 2) % 4
        };
        next[e] = d.edge_of_end(End::new(c, out));
    }
    let mut seen = vec![false; d.edges().len()];
    let mut circles = 0;
    for start in 0..next.len() {
        if seen[start] {
            continue;
        }
        circles += 1;
        let mut e = start;
        while !seen[e] {
            seen[e] = true;
            e = next[e];
        }
    }
    circles + d.loop_count()
}

/// Genus of the Seifert surface built from the smoothed diagram; an upper
/// bound for the knot genus. `None` unless the diagram is a knot diagram.
pub fn seifert_genus_bound(d: &LinkDiagram) -> Option<usize> {
    if !d.is_knot_diagram() {
        return None;
    }
    let n = d.crossing_count();
    let s = seifert_circle_count(d);
    assert_eq!((n + 1 - s) % 2, 0, "n - s + 1 is even for knot diagrams");
    Some((n + 1 - s) / 2)
}

/// Absolute linking number of a 2-component link diagram: half the absolute
/// signed count of crossings between the two components. `None` unless the
/// diagram has exactly two components.
pub fn linking_number_abs(d: &LinkDiagram) -> Option<usize> {
    if d.component_count() != 2 {
        return None;
    }
    if d.crossing_count() == 0 {
        return Some(0);
    }
    let or = orient(d);
    let mut total: i64 = 0;
    for c in 0..d.crossing_count() {
        let under = or.circuit_of_end[End::new(c, 0).index()];
        let over = or.circuit_of_end[End::new(c, 1).index()];
        if under != over {
            total += or.sign(c);
        }
    }
    Some((total.unsigned_abs() / 2) as usize)
}

/// Remove one twist if some arc loops straight back to its own crossing at
/// cyclically adjacent positions; `None` when no such crossing exists.
pub fn untwist_once(d: &LinkDiagram) -> Option<LinkDiagram> {
    let kink = d.edges().iter().position(|&[a, b]| {
        a.crossing == b.crossing && (a.position + 1) % 4 == b.position % 4
            || a.crossing == b.crossing && (b.position + 1) % 4 == a.position
    })?;
    let [ka, kb] = d.edges()[kink];
    let c = ka.crossing;
    let survivors: Vec<u8> = (0..4u8)
        .filter(|&p| p != ka.position && p != kb.position)
        .collect();
    let e1 = d.edge_of_end(End::new(c, survivors[0]));
    let e2 = d.edge_of_end(End::new(c, survivors[1]));
    let relabel = |e: End| -> End {
        assert_ne!(e.crossing, c);
        End::new(e.crossing - usize::from(e.crossing > c), e.position)
    };
    let mut edges = Vec::new();
    let mut loops = d.loop_count();
    if e1 == e2 {
        // The surviving arc closes into a crossing-free circle.
        loops += 1;
    } else {
        let far1 = d.end_partner(End::new(c, survivors[0]));
        let far2 = d.end_partner(End::new(c, survivors[1]));
        edges.push([relabel(far1), relabel(far2)]);
    }
    for (i, &[a, b]) in d.edges().iter().enumerate() {
        if i == kink || i == e1 || i == e2 {
            continue;
        }
        edges.push([relabel(a), relabel(b)]);
    }
    Some(LinkDiagram::from_parts(d.crossing_count() - 1, edges, loops).expect("untwist is valid"))
}

/// Untwist until no removable twist remains.
pub fn untwist_fully(d: &LinkDiagram) -> LinkDiagram {
    let mut current = d.clone();
    while let Some(next) = untwist_once(&current) {
        current = next;
    }
    current
}

/// True iff untwisting alone reduces the diagram to a single crossing-free
/// loop — a sufficient (not necessary) test for the unknot.
pub fn untwists_to_trivial_loop(d: &LinkDiagram) -> bool {
    let r = untwist_fully(d);
    r.crossing_count() == 0 && r.loop_count() == 1
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
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn unite(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::kinked_unknot;

    const TREFOIL: &str = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]";
    const FIGURE_EIGHT: &str = "PD[X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)]";
    const HOPF: &str = "PD[X(1,3,2,4),X(3,1,4,2)]";

    #[test]
    fn alexander_of_trefoil() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        let p = alexander_polynomial(&d).unwrap();
        assert_eq!(p.coefficients, vec![1, -1, 1]);
        assert!(!p.is_trivial());
        assert_eq!(p.genus_lower_bound(), 1);
    }

    #[test]
    fn alexander_of_figure_eight() {
        let d = LinkDiagram::parse(FIGURE_EIGHT).unwrap();
        let p = alexander_polynomial(&d).unwrap();
        // -1 + 3t - t^2, the normalization with Δ(1) = +1.
        assert_eq!(p.coefficients, vec![-1, 3, -1]);
        assert!(!p.is_trivial());
        assert_eq!(p.genus_lower_bound(), 1);
    }

    #[test]
    fn alexander_of_twisted_unknots_is_trivial() {
        for k in 0..=6 {
            let d = kinked_unknot(k);
            let p = alexander_polynomial(&d).unwrap();
            assert!(p.is_trivial(), "{k}-twist unknot has Δ = 1");
            assert_eq!(p.genus_lower_bound(), 0);
        }
    }

    #[test]
    fn alexander_rejects_links() {
        let d = LinkDiagram::parse(HOPF).unwrap();
        assert!(alexander_polynomial(&d).is_none());
    }

    #[test]
    fn seifert_circles_and_genus_bounds() {
        let trefoil = LinkDiagram::parse(TREFOIL).unwrap();
        assert_eq!(seifert_circle_count(&trefoil), 2);
        assert_eq!(seifert_genus_bound(&trefoil), Some(1));

        let fig8 = LinkDiagram::parse(FIGURE_EIGHT).unwrap();
        assert_eq!(seifert_circle_count(&fig8), 3);
        assert_eq!(seifert_genus_bound(&fig8), Some(1));

        let loop0 = LinkDiagram::parse("L[1]").unwrap();
        assert_eq!(seifert_genus_bound(&loop0), Some(0));

        for k in 0..=4 {
            assert_eq!(seifert_genus_bound(&kinked_unknot(k)), Some(0), "{k} twists");
        }
    }

    #[test]
    fn genus_bounds_bracket_the_truth() {
        for text in [TREFOIL, FIGURE_EIGHT] {
            let d = LinkDiagram::parse(text).unwrap();
            let lower = alexander_polynomial(&d).unwrap().genus_lower_bound();
            let upper = seifert_genus_bound(&d).unwrap();
            assert!(lower <= upper);
            assert_eq!(lower, 1);
            assert_eq!(upper, 1);
        }
    }

    #[test]
    fn linking_numbers() {
        let hopf = LinkDiagram::parse(HOPF).unwrap();
        assert_eq!(linking_number_abs(&hopf), Some(1));

        let unlink = LinkDiagram::parse("L[2]").unwrap();
        assert_eq!(linking_number_abs(&unlink), Some(0));

        let trefoil = LinkDiagram::parse(TREFOIL).unwrap();
        assert_eq!(linking_number_abs(&trefoil), None);

        let split = LinkDiagram::parse(&format!("{TREFOIL} L[1]")).unwrap();
        assert_eq!(linking_number_abs(&split), Some(0));
    }

    #[test]
    fn untwisting_recognizes_twisted_unknots() {
        for k in 0..=6 {
            assert!(untwists_to_trivial_loop(&kinked_unknot(k)), "{k} twists");
        }
    }

    #[test]
    fn untwisting_leaves_the_trefoil_alone() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        assert!(untwist_once(&d).is_none());
        assert!(!untwists_to_trivial_loop(&d));
        let r = untwist_fully(&d);
        assert_eq!(r.crossing_count(), 3);
    }

    #[test]
    fn untwisting_spec_code() {
        let d = LinkDiagram::parse("PD[X(1,4,2,3)]").unwrap();
        assert!(untwists_to_trivial_loop(&d));
    }
}
