//! Exact linear algebra over the integers, the rationals, and GF(2).
//!
//! Everything in this crate that touches a matrix goes through here: kernel
//! bases for the matching-equation system, rank tests for certificate
//! binding constraints, Smith normal form for integral homology, and GF(2)
//! span membership for mod-2 homology.  All arithmetic is exact; sizes stay
//! small enough (a few hundred rows) that dense representations win.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank over the rationals of an integer matrix given as dense rows.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    row_echelon(&mut m)
}

/// Reduce to row echelon form in place; returns the rank.
fn row_echelon(m: &mut [Vec<BigRational>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(src) = (pivot_row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, src);
        let inv = m[pivot_row][col].clone();
        for x in &mut m[pivot_row] {
            *x /= inv.clone();
        }
        for r in 0..nrows {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &m[pivot_row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == nrows {
            break;
        }
    }
    pivot_row
}

/// Integer basis of the right kernel `{x : A x = 0}` of an integer matrix.
///
/// Each basis vector is primitive (content 1) with its first nonzero entry
/// positive, and the list is ordered by the free column it corresponds to,
/// so the output is deterministic.
pub fn kernel_basis(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols);
            r.iter().map(|x| BigRational::from(x.clone())).collect()
        })
        .collect();
    row_echelon(&mut m);

    // Locate pivot columns of the reduced matrix.
    let mut pivot_col_of_row = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for row in &m {
        if let Some(c) = (0..ncols).find(|&c| !row[c].is_zero()) {
            pivot_col_of_row.push(c);
            is_pivot[c] = true;
        }
    }

    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row_idx, &pc) in pivot_col_of_row.iter().enumerate() {
            // Row reads x_pc + sum coeff * x_free = 0.
            v[pc] = -m[row_idx][free].clone();
        }
        basis.push(scale_to_primitive(&v));
    }
    basis
}

/// Clear denominators and divide by the content, fixing the sign so the
/// first nonzero entry is positive.
fn scale_to_primitive(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut content = BigInt::zero();
    for x in &out {
        content = content.gcd(x);
    }
    if !content.is_zero() && !content.is_one() {
        for x in &mut out {
            *x /= &content;
        }
    }
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut out {
                *x = -x.clone();
            }
        }
    }
    out
}

/// Divide a vector by its content and make the first nonzero entry positive.
pub fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let mut content = BigInt::zero();
    for x in v {
        content = content.gcd(x);
    }
    let mut out = v.to_vec();
    if !content.is_zero() && !content.is_one() {
        for x in &mut out {
            *x /= &content;
        }
    }
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut out {
                *x = -x.clone();
            }
        }
    }
    out
}

/// Nonzero diagonal entries of the Smith normal form of an integer matrix.
///
/// The entries are positive and each divides the next, so the cokernel of
/// the matrix is `Z^(cols - len) + sum Z/d_i`.
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut top = 0;
    let mut left = 0;
    while top < nrows && left < ncols {
        // Find a pivot with the smallest nonzero absolute value for speed.
        let mut best: Option<(usize, usize)> = None;
        for r in top..nrows {
            for c in left..ncols {
                if !m[r][c].is_zero()
                    && best
                        .map(|(br, bc)| m[r][c].abs() < m[br][bc].abs())
                        .unwrap_or(true)
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        m.swap(top, pr);
        for row in m.iter_mut() {
            row.swap(left, pc);
        }
        loop {
            // Clear the pivot column with division steps.
            let mut dirty = false;
            for r in top + 1..nrows {
                if !m[r][left].is_zero() {
                    let q = div_round(&m[r][left], &m[top][left]);
                    if !q.is_zero() {
                        for c in left..ncols {
                            let delta = &q * &m[top][c];
                            m[r][c] -= delta;
                        }
                    }
                    if !m[r][left].is_zero() {
                        m.swap(top, r);
                        dirty = true;
                    }
                }
            }
            for c in left + 1..ncols {
                if !m[top][c].is_zero() {
                    let q = div_round(&m[top][c], &m[top][left]);
                    if !q.is_zero() {
                        for r in top..nrows {
                            let delta = &q * &m[r][left];
                            m[r][c] -= delta;
                        }
                    }
                    if !m[top][c].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(left, c);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(m[top][left].abs());
        top += 1;
        left += 1;
    }
    // Enforce the divisibility chain d_1 | d_2 | ... .
    loop {
        let mut changed = false;
        for i in 0..diag.len().saturating_sub(1) {
            let (a, b) = (diag[i].clone(), diag[i + 1].clone());
            if !(&b % &a).is_zero() {
                let g = a.gcd(&b);
                let l = &a * &b / &g;
                diag[i] = g;
                diag[i + 1] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    diag
}

/// Quotient rounded to nearest, which keeps remainders at most half the
/// divisor and makes the Smith reduction terminate quickly.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let double_r: BigInt = &r * 2;
    if double_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Dense GF(2) vectors packed into machine words.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Vec {
    words: Vec<u64>,
    nbits: usize,
}

impl Gf2Vec {
    pub fn zero(nbits: usize) -> Self {
        Gf2Vec {
            words: vec![0; nbits.div_ceil(64)],
            nbits,
        }
    }

    pub fn from_support(nbits: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Gf2Vec::zero(nbits);
        for i in support {
            v.flip(i);
        }
        v
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.nbits);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn leading_bit(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

/// Row space over GF(2) with incremental insertion, kept in echelon form.
pub struct Gf2Span {
    nbits: usize,
    rows: Vec<Gf2Vec>, // each with a distinct leading bit, sorted
}

impl Gf2Span {
    pub fn new(nbits: usize) -> Self {
        Gf2Span {
            nbits,
            rows: Vec::new(),
        }
    }

    /// Reduce `v` against the span; the remainder is zero iff `v` is in it.
    pub fn reduce(&self, mut v: Gf2Vec) -> Gf2Vec {
        for row in &self.rows {
            let lead = row.leading_bit().expect("span rows are nonzero");
            if v.get(lead) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: Gf2Vec) -> bool {
        assert_eq!(v.nbits, self.nbits);
        let r = self.reduce(v);
        match r.leading_bit() {
            None => false,
            Some(lead) => {
                let pos = self
                    .rows
                    .binary_search_by_key(&lead, |row| row.leading_bit().unwrap())
                    .unwrap_err();
                self.rows.insert(pos, r);
                true
            }
        }
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| bi(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(rank(&mat(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        // Third row is the sum of the first two.
        assert_eq!(rank(&mat(&[&[2, 3, 5], &[7, 11, 13], &[9, 14, 18]])), 2);
        assert_eq!(rank(&mat(&[&[2, 3, 5], &[7, 11, 13], &[9, 14, 19]])), 3);
    }

    #[test]
    fn kernel_of_sum_equation() {
        // x1 + x2 - x3 - x4 = 0 has a rank-3 kernel.
        let b = kernel_basis(&mat(&[&[1, 1, -1, -1]]), 4);
        assert_eq!(b.len(), 3);
        for v in &b {
            assert_eq!(&v[0] + &v[1] - &v[2] - &v[3], bi(0));
        }
    }

    #[test]
    fn kernel_is_primitive_and_deterministic() {
        let rows = mat(&[&[2, -2, 0], &[0, 0, 3]]);
        let b = kernel_basis(&rows, 3);
        assert_eq!(b, vec![vec![bi(1), bi(1), bi(0)]]);
    }

    #[test]
    fn kernel_of_full_rank_matrix_is_empty() {
        let b = kernel_basis(&mat(&[&[1, 0], &[1, 1]]), 2);
        assert!(b.is_empty());
    }

    #[test]
    fn smith_diagonal_examples() {
        assert_eq!(smith_diagonal(mat(&[&[2, 0], &[0, 3]])), vec![bi(1), bi(6)]);
        assert_eq!(smith_diagonal(mat(&[&[1, 0], &[0, 1]])), vec![bi(1), bi(1)]);
        // Boundary map of the projective-plane style relation x + x = 0.
        assert_eq!(smith_diagonal(mat(&[&[2]])), vec![bi(2)]);
        assert_eq!(
            smith_diagonal(mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]])),
            vec![bi(2), bi(2), bi(156)]
        );
    }

    #[test]
    fn gf2_span_membership() {
        let mut span = Gf2Span::new(5);
        assert!(span.insert(Gf2Vec::from_support(5, [0, 1])));
        assert!(span.insert(Gf2Vec::from_support(5, [1, 2])));
        assert!(!span.insert(Gf2Vec::from_support(5, [0, 2])));
        assert_eq!(span.rank(), 2);
        assert!(span.contains(&Gf2Vec::from_support(5, [0, 1, 1, 2])));
        assert!(!span.contains(&Gf2Vec::from_support(5, [3])));
        assert!(span.contains(&Gf2Vec::zero(5)));
    }
}
