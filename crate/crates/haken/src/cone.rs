//! The cone of normal-surface coordinate vectors of a triangulation.
//!
//! A surface in normal position meets each tetrahedron in elementary
//! disks: four triangle types, one cutting off each vertex, and three
//! quadrilateral types, one separating each pair of opposite edges.  The
//! vector counting disks of each type lives in `Z^(7t)`, and the vectors
//! realized by embedded surfaces all lie in the polyhedral cone cut out
//! by nonnegativity together with the matching equations, which equate
//! normal-arc counts across each interior face.  This module builds that
//! cone, enumerates the minimal integer points of its extreme rays with
//! exact arithmetic, and provides a budget-guarded search for the full
//! set of minimal (fundamental) integer points at toy scales.
//!
//! Coordinates per tetrahedron are ordered: triangles cutting off
//! vertices 0–3, then quadrilaterals separating pairs {01|23}, {02|13},
//! {03|12}.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{primitive_part, rank};
use crate::triangulation::Triangulation;

/// Number of coordinates per tetrahedron: 4 triangle types then 3
/// quadrilateral types.
pub const COORDS_PER_TET: usize = 7;

/// Failures of cone operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConeError {
    /// A vector's length does not match the cone's coordinate count.
    #[error("vector has {got} coordinates, cone expects {expected}")]
    LengthMismatch { expected: usize, got: usize },
    /// A box search would enumerate more points than the given budget.
    #[error("box search needs {needed} points, budget allows {limit}")]
    BudgetExceeded { needed: BigInt, limit: u64 },
}

/// An integer vector of normal coordinates: 7 entries per tetrahedron.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalVector {
    coords: Vec<BigInt>,
}

impl NormalVector {
    /// Wraps a coordinate vector.
    pub fn new(coords: Vec<BigInt>) -> Self {
        NormalVector { coords }
    }

    /// The zero vector of the given length: the empty surface.
    pub fn zeros(len: usize) -> Self {
        NormalVector {
            coords: vec![BigInt::zero(); len],
        }
    }

    /// Builds a vector from machine integers, for fixtures and tests.
    pub fn from_i64(coords: &[i64]) -> Self {
        NormalVector {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Number of coordinates.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    /// Whether the vector has no coordinates at all.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// All coordinates in order.
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// The count of triangles cutting off `vertex` in `tet`.
    pub fn triangle(&self, tet: usize, vertex: u8) -> &BigInt {
        &self.coords[COORDS_PER_TET * tet + vertex as usize]
    }

    /// The count of quadrilaterals of type `quad` (0–2) in `tet`.
    pub fn quad(&self, tet: usize, quad: u8) -> &BigInt {
        &self.coords[COORDS_PER_TET * tet + 4 + quad as usize]
    }

    /// Whether every coordinate is zero.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Whether every coordinate is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// Coordinate-wise sum, the disk count of the represented surface.
    pub fn coord_sum(&self) -> BigInt {
        self.coords.iter().sum()
    }

    /// Coordinate-wise addition; both vectors must have equal length.
    pub fn add(&self, other: &NormalVector) -> NormalVector {
        assert_eq!(self.len(), other.len(), "adding vectors of unequal length");
        NormalVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// The vector scaled by a nonnegative integer.
    pub fn scaled(&self, k: u64) -> NormalVector {
        let k = BigInt::from(k);
        NormalVector {
            coords: self.coords.iter().map(|c| c * &k).collect(),
        }
    }

    /// Space-separated decimal coordinates, one vector per line in dumps.
    pub fn to_line(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(BigInt::to_string).collect();
        parts.join(" ")
    }
}

/// The quadrilateral type (0–2) separating vertices `a` and `b` from the
/// other two; `a` and `b` must be distinct vertex labels.
pub fn quad_separating(a: u8, b: u8) -> u8 {
    debug_assert!(a != b && a < 4 && b < 4);
    let pair = (a.min(b), a.max(b));
    match pair {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        (0, 3) | (1, 2) => 2,
        _ => unreachable!("distinct vertex labels"),
    }
}

/// The cone of nonnegative solutions to a triangulation's matching
/// equations, the ambient home of every normal-coordinate vector.
#[derive(Debug, Clone)]
pub struct HakenCone {
    tet_count: usize,
    matching: Vec<Vec<BigInt>>,
    dimension: usize,
}

/// Builds the matching equations of a triangulation: for each interior
/// face and each of its three corners, the two incident tetrahedra must
/// contribute equally many normal arcs cutting off that corner.  An arc
/// cutting off corner `v` on face `f` comes from either the triangle at
/// `v` or the quadrilateral separating `{v, f}`, so each equation has
/// coefficients in `{-1, 0, 1}`; a face glued to the same tetrahedron
/// can cancel terms, and equations cancelling entirely are dropped.
pub fn matching_equations(t: &Triangulation) -> HakenCone {
    let dim = COORDS_PER_TET * t.tet_count();
    let mut matching = Vec::new();
    for tet in 0..t.tet_count() {
        for face in 0..4u8 {
            let Some(g) = t.gluing(tet, face) else {
                continue;
            };
            // Visit each interior face once, from its lower slot.
            if (g.tet, g.face) < (tet, face) {
                continue;
            }
            for v in (0..4u8).filter(|&v| v != face) {
                let w = g.perm.apply(v);
                let mut row = vec![BigInt::zero(); dim];
                row[COORDS_PER_TET * tet + v as usize] += 1;
                row[COORDS_PER_TET * tet + 4 + quad_separating(v, face) as usize] += 1;
                row[COORDS_PER_TET * g.tet + w as usize] -= 1;
                row[COORDS_PER_TET * g.tet + 4 + quad_separating(w, g.face) as usize] -= 1;
                if row.iter().any(|c| !c.is_zero()) {
                    matching.push(row);
                }
            }
        }
    }
    let dimension = dim - rank(&matching);
    HakenCone {
        tet_count: t.tet_count(),
        matching,
        dimension,
    }
}

impl HakenCone {
    /// Number of tetrahedra underlying the cone.
    pub fn tet_count(&self) -> usize {
        self.tet_count
    }

    /// Number of coordinates: seven per tetrahedron.
    pub fn coord_len(&self) -> usize {
        COORDS_PER_TET * self.tet_count
    }

    /// The matching equations as rows over the coordinates.
    pub fn matching_rows(&self) -> &[Vec<BigInt>] {
        &self.matching
    }

    /// Dimension of the matching-equation solution space, which bounds
    /// the cone's dimension from above.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// The matrix-vector product of the matching rows with `v`.
    fn matching_residual(&self, v: &NormalVector) -> Vec<BigInt> {
        self.matching
            .iter()
            .map(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Whether `v` lies in the cone and satisfies the quadrilateral
    /// conditions: nonnegative, matching equations zero, and at most one
    /// quadrilateral type positive in each tetrahedron.
    pub fn is_admissible(&self, v: &NormalVector) -> Result<bool, ConeError> {
        if v.len() != self.coord_len() {
            return Err(ConeError::LengthMismatch {
                expected: self.coord_len(),
                got: v.len(),
            });
        }
        if !v.is_nonnegative() {
            return Ok(false);
        }
        if self.matching_residual(v).iter().any(|r| !r.is_zero()) {
            return Ok(false);
        }
        for tet in 0..self.tet_count {
            let positive_quads = (0..3u8).filter(|&q| v.quad(tet, q).is_positive()).count();
            if positive_quads > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The minimal integer point of every extreme ray of the cone, each
    /// scaled to coordinate gcd one, in lexicographic order.
    pub fn vertex_solutions(&self) -> Vec<NormalVector> {
        extreme_rays(&self.matching, self.coord_len())
            .into_iter()
            .map(NormalVector::new)
            .collect()
    }

    /// All minimal nonzero integer points of the cone: those that are
    /// not a sum of two nonzero integer points.  Enumerates a box
    /// bounded by the coordinate-wise sum of the extreme rays, which
    /// contains every minimal point; refuses boxes beyond `box_limit`
    /// points so callers fall back to vertex mode.
    pub fn hilbert_basis(&self, box_limit: u64) -> Result<Vec<NormalVector>, ConeError> {
        minimal_hilbert_points(&self.matching, self.coord_len(), box_limit)
            .map(|points| points.into_iter().map(NormalVector::new).collect())
    }

    /// Whether `v` is not a sum of two nonzero integer points of the
    /// cone, by exhaustive search over the box `0 <= w <= v`; refuses
    /// boxes beyond `box_limit` points.
    pub fn is_fundamental(&self, v: &NormalVector, box_limit: u64) -> Result<bool, ConeError> {
        if v.len() != self.coord_len() {
            return Err(ConeError::LengthMismatch {
                expected: self.coord_len(),
                got: v.len(),
            });
        }
        let needed = box_point_count(v.coords());
        if needed > BigInt::from(box_limit) {
            return Err(ConeError::BudgetExceeded {
                needed,
                limit: box_limit,
            });
        }
        let mut found = false;
        enumerate_box(v.coords(), &mut |w| {
            if found || w.iter().all(Zero::is_zero) || w == v.coords() {
                return;
            }
            let in_kernel = self
                .matching
                .iter()
                .all(|row| row.iter().zip(w).map(|(a, b)| a * b).sum::<BigInt>().is_zero());
            if in_kernel {
                found = true;
            }
        });
        Ok(!found)
    }

    /// Diagnostic dump: matching rows, then a blank line, then the
    /// vertex solutions, one integer vector per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.matching {
            let parts: Vec<String> = row.iter().map(BigInt::to_string).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out.push('\n');
        for v in self.vertex_solutions() {
            out.push_str(&v.to_line());
            out.push('\n');
        }
        out
    }
}

/// Extreme rays of `{x >= 0, equations . x = 0}` by the double
/// description method: start from the nonnegative orthant, whose rays
/// are the unit vectors, and intersect with one equation hyperplane at a
/// time.  Rays strictly on either side are replaced by the positive
/// combinations of adjacent opposite-side pairs, where adjacency holds
/// when no third ray vanishes on every coordinate the pair share as
/// zeros.  Output rays are primitive and lexicographically sorted.
pub fn extreme_rays(equations: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rays: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut unit = vec![BigInt::zero(); dim];
            unit[i] = BigInt::one();
            unit
        })
        .collect();
    for eq in equations {
        let values: Vec<BigInt> = rays
            .iter()
            .map(|r| eq.iter().zip(r).map(|(a, b)| a * b).sum())
            .collect();
        let positive: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let negative: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if positive.is_empty() && negative.is_empty() {
            continue;
        }
        let zero_sets: Vec<BTreeSet<usize>> = rays
            .iter()
            .map(|r| (0..dim).filter(|&i| r[i].is_zero()).collect())
            .collect();
        let mut next: BTreeSet<Vec<BigInt>> = (0..rays.len())
            .filter(|&i| values[i].is_zero())
            .map(|i| rays[i].clone())
            .collect();
        for &p in &positive {
            for &n in &negative {
                let shared: BTreeSet<usize> =
                    zero_sets[p].intersection(&zero_sets[n]).copied().collect();
                let blocked = (0..rays.len())
                    .any(|r| r != p && r != n && shared.is_subset(&zero_sets[r]));
                if blocked {
                    continue;
                }
                let combo: Vec<BigInt> = (0..dim)
                    .map(|i| &values[p] * &rays[n][i] - &values[n] * &rays[p][i])
                    .collect();
                next.insert(primitive_part(&combo));
            }
        }
        rays = next.into_iter().collect();
    }
    rays
}

/// Number of integer points in the box `0 <= w <= bounds`.
fn box_point_count(bounds: &[BigInt]) -> BigInt {
    bounds.iter().map(|b| b + 1).product()
}

/// Calls `visit` on every integer point of the box `0 <= w <= bounds`,
/// in lexicographic order.
fn enumerate_box(bounds: &[BigInt], visit: &mut impl FnMut(&[BigInt])) {
    let mut current = vec![BigInt::zero(); bounds.len()];
    fn recurse(
        bounds: &[BigInt],
        current: &mut Vec<BigInt>,
        at: usize,
        visit: &mut impl FnMut(&[BigInt]),
    ) {
        if at == bounds.len() {
            visit(current);
            return;
        }
        let mut value = BigInt::zero();
        while value <= bounds[at] {
            current[at] = value.clone();
            recurse(bounds, current, at + 1, visit);
            value += 1;
        }
        current[at] = BigInt::zero();
    }
    recurse(bounds, &mut current, 0, visit);
}

/// All minimal nonzero integer points of `{x >= 0, equations . x = 0}`:
/// the Hilbert basis of the cone.  Every minimal point is a sum of
/// extreme-ray generators with fractional weights, so the box bounded by
/// the coordinate-wise sum of the primitive rays contains them all; the
/// box is enumerated outright and pairwise dominated points are removed.
/// Refuses boxes beyond `box_limit` points.
pub fn minimal_hilbert_points(
    equations: &[Vec<BigInt>],
    dim: usize,
    box_limit: u64,
) -> Result<Vec<Vec<BigInt>>, ConeError> {
    let rays = extreme_rays(equations, dim);
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let mut bounds = vec![BigInt::zero(); dim];
    for ray in &rays {
        for (bound, c) in bounds.iter_mut().zip(ray) {
            *bound += c;
        }
    }
    let needed = box_point_count(&bounds);
    if needed > BigInt::from(box_limit) {
        return Err(ConeError::BudgetExceeded {
            needed,
            limit: box_limit,
        });
    }
    let mut members: Vec<Vec<BigInt>> = Vec::new();
    enumerate_box(&bounds, &mut |w| {
        if w.iter().all(Zero::is_zero) {
            return;
        }
        let in_kernel = equations
            .iter()
            .all(|row| row.iter().zip(w).map(|(a, b)| a * b).sum::<BigInt>().is_zero());
        if in_kernel {
            members.push(w.to_vec());
        }
    });
    let minimal: Vec<Vec<BigInt>> = members
        .iter()
        .filter(|v| {
            !members
                .iter()
                .any(|w| w != *v && w.iter().zip(v.iter()).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{one_tetrahedron, pillow_sphere, solid_torus};

    fn vec_i64(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn single_tetrahedron_has_no_equations_and_unit_rays() {
        let cone = matching_equations(&one_tetrahedron());
        assert_eq!(cone.matching_rows().len(), 0);
        assert_eq!(cone.dimension(), 7);
        let rays = cone.vertex_solutions();
        assert_eq!(rays.len(), 7);
        for (i, ray) in rays.iter().enumerate() {
            let mut unit = vec![0i64; 7];
            unit[i] = 1;
            assert_eq!(ray.coords(), &vec_i64(&unit)[..]);
        }
    }

    #[test]
    fn two_tetrahedra_one_gluing_make_three_equations() {
        // Glue face 0 of tet 0 to face 0 of tet 1, swapping nothing else.
        use crate::triangulation::{FaceGluing, Perm4};
        let bond = |tet| {
            Some(FaceGluing {
                tet,
                face: 0,
                perm: Perm4::identity(),
            })
        };
        let t = Triangulation::new(vec![
            [bond(1), None, None, None],
            [bond(0), None, None, None],
        ])
        .expect("valid gluing");
        let cone = matching_equations(&t);
        assert_eq!(cone.matching_rows().len(), 3);
        for row in cone.matching_rows() {
            let positives = row.iter().filter(|c| c.is_positive()).count();
            let negatives = row.iter().filter(|c| c.is_negative()).count();
            assert_eq!((positives, negatives), (2, 2));
            assert!(row.iter().all(|c| c.abs() <= BigInt::one()));
            assert!(row.iter().sum::<BigInt>().is_zero());
        }
    }

    #[test]
    fn closed_pillow_has_three_equations_per_interior_face() {
        let t = pillow_sphere();
        let cone = matching_equations(&t);
        // Four interior faces, three side-pairs each: six per tetrahedron.
        assert_eq!(cone.matching_rows().len(), 12);
    }

    #[test]
    fn admissibility_checks_sign_matching_and_quads() {
        let cone = matching_equations(&one_tetrahedron());
        let zero = NormalVector::zeros(7);
        assert_eq!(cone.is_admissible(&zero), Ok(true));
        let negative = NormalVector::from_i64(&[-1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(cone.is_admissible(&negative), Ok(false));
        let two_quads = NormalVector::from_i64(&[0, 0, 0, 0, 1, 1, 0]);
        assert_eq!(cone.is_admissible(&two_quads), Ok(false));
        let one_quad = NormalVector::from_i64(&[2, 0, 1, 0, 0, 1, 0]);
        assert_eq!(cone.is_admissible(&one_quad), Ok(true));
        let wrong_length = NormalVector::zeros(6);
        assert_eq!(
            cone.is_admissible(&wrong_length),
            Err(ConeError::LengthMismatch {
                expected: 7,
                got: 6
            })
        );
    }

    #[test]
    fn orthant_rays_are_unit_vectors() {
        let rays = extreme_rays(&[], 5);
        assert_eq!(rays.len(), 5);
        for (i, ray) in rays.iter().enumerate() {
            assert!(ray[i].is_one());
            assert_eq!(ray.iter().filter(|c| c.is_zero()).count(), 4);
        }
    }

    #[test]
    fn diagonal_toy_cone_has_one_ray() {
        // x1 = x2 in the plane: a single ray through (1, 1).
        let rays = extreme_rays(&[vec_i64(&[1, -1])], 2);
        assert_eq!(rays, vec![vec_i64(&[1, 1])]);
    }

    #[test]
    fn transport_toy_cone_has_four_rays_and_hilbert_elements() {
        // x1 + x2 = x3 + x4: the four indicator combinations.
        let eq = vec![vec_i64(&[1, 1, -1, -1])];
        let rays = extreme_rays(&eq, 4);
        let expected: Vec<Vec<BigInt>> = vec![
            vec_i64(&[0, 1, 0, 1]),
            vec_i64(&[0, 1, 1, 0]),
            vec_i64(&[1, 0, 0, 1]),
            vec_i64(&[1, 0, 1, 0]),
        ];
        assert_eq!(rays, expected);
        let hilbert = minimal_hilbert_points(&eq, 4, 100_000).expect("small box");
        assert_eq!(hilbert.len(), 4);
        for r in &expected {
            assert!(hilbert.contains(r));
        }
    }

    #[test]
    fn empty_cone_yields_no_rays() {
        // x1 + x2 = 0 with x >= 0 forces the origin.
        let rays = extreme_rays(&[vec_i64(&[1, 1])], 2);
        assert!(rays.is_empty());
    }

    #[test]
    fn hilbert_of_orthant_is_units_and_respects_budget() {
        let hilbert = minimal_hilbert_points(&[], 3, 100).expect("tiny box");
        assert_eq!(hilbert.len(), 3);
        let refused = minimal_hilbert_points(&[], 40, 100);
        assert!(matches!(refused, Err(ConeError::BudgetExceeded { .. })));
    }

    #[test]
    fn fundamental_detects_doubles_and_units() {
        let cone = matching_equations(&one_tetrahedron());
        let unit = NormalVector::from_i64(&[1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(cone.is_fundamental(&unit, 10_000), Ok(true));
        let double = unit.scaled(2);
        assert_eq!(cone.is_fundamental(&double, 10_000), Ok(false));
        let mixed = NormalVector::from_i64(&[1, 1, 0, 0, 0, 0, 0]);
        assert_eq!(cone.is_fundamental(&mixed, 10_000), Ok(false));
    }

    #[test]
    fn solid_torus_rays_satisfy_the_cone_conditions() {
        let t = solid_torus();
        let cone = matching_equations(&t);
        let rays = cone.vertex_solutions();
        assert!(!rays.is_empty());
        for ray in &rays {
            assert!(ray.is_nonnegative());
            assert!(!ray.is_zero());
            assert!(cone.matching_residual(ray).iter().all(Zero::is_zero));
            let gcd = ray
                .coords()
                .iter()
                .fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.abs()));
            assert!(gcd.is_one());
        }
        // Canonical order and determinism.
        let again = cone.vertex_solutions();
        assert_eq!(rays, again);
        let mut sorted = rays.clone();
        sorted.sort();
        assert_eq!(rays, sorted);
    }

    #[test]
    fn vertex_solutions_are_among_hilbert_points() {
        for t in [one_tetrahedron(), solid_torus()] {
            let cone = matching_equations(&t);
            let hilbert = cone.hilbert_basis(10_000_000).expect("toy scale");
            for ray in cone.vertex_solutions() {
                assert!(
                    hilbert.contains(&ray),
                    "ray {} missing from hilbert basis",
                    ray.to_line()
                );
            }
        }
    }
}
