//! Dense linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words. Subspaces are kept in fully reduced
//! row echelon form where the pivot of a row is its lowest set index, rows are
//! sorted by increasing pivot and every pivot column is zero outside its own row.
//! That normal form makes bases canonical, so two equal subspaces always compare
//! equal bit for bit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector in F₂ⁿ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut row = Self::zeros(len);
        row.set(index, true);
        row
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in indices {
            row.flip(i);
        }
        row
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter()
                .enumerate()
                .filter(|(_, &b)| b & 1 == 1)
                .map(|(i, _)| i),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitRow) -> BitRow {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set index, the pivot under our echelon convention.
    pub fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the elementwise product.
    pub fn dot(&self, other: &BitRow) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + bit)
                }
            })
        })
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_bit_string())
    }
}

/// A dense `rows × cols` matrix over F₂ stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitRow>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitRow::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            data: (0..n).map(|i| BitRow::unit(n, i)).collect(),
        }
    }

    /// Panics if a row does not have exactly `cols` bits.
    pub fn from_rows(cols: usize, data: Vec<BitRow>) -> Self {
        for row in &data {
            assert_eq!(row.len(), cols, "row width does not match column count");
        }
        Self {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix from a row-major 0/1 table. All rows must have equal length.
    pub fn from_dense(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| BitRow::from_bits(r)).collect())
    }

    /// Builds a matrix column by column; `columns[j]` has length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitRow]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in col.ones() {
                m.data[i].set(j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitRow {
        &self.data[r]
    }

    pub fn row_slice(&self) -> &[BitRow] {
        &self.data
    }

    pub fn column(&self, c: usize) -> BitRow {
        BitRow::from_indices(self.rows, (0..self.rows).filter(|&r| self.data[r].get(c)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitRow::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    /// `M·v` for a column vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &BitRow) -> BitRow {
        assert_eq!(
            v.len(),
            self.cols,
            "vector length does not match column count"
        );
        BitRow::from_indices(
            self.rows,
            self.data
                .iter()
                .enumerate()
                .filter(|(_, row)| row.dot(v))
                .map(|(r, _)| r),
        )
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other`; the kernel of the result is the
    /// intersection of the two kernels.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::usage(format!(
                "cannot stack matrices with {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(BitMatrix::from_rows(self.cols, data))
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::span(self.cols, self.data.iter().cloned())
    }

    pub fn rank(&self) -> usize {
        self.row_space().dim()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let echelon = self.row_space();
        let pivots: Vec<usize> = echelon.pivots().collect();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors = (0..self.cols).filter(|&c| !is_pivot[c]).map(|free| {
            let mut v = BitRow::unit(self.cols, free);
            for (row, &p) in echelon.basis.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            v
        });
        Subspace::span(self.cols, vectors)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {}", row.to_bit_string())?;
        }
        Ok(())
    }
}

/// A linear subspace of F₂ⁿ in canonical reduced echelon form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitRow>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| BitRow::unit(ambient, i)).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = BitRow>) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitRow] {
        &self.basis
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis
            .iter()
            .map(|r| r.lowest_one().expect("echelon rows are nonzero"))
    }

    /// Reduces `v` modulo the subspace. The result is zero iff `v` is a member.
    pub fn reduce(&self, v: &BitRow) -> BitRow {
        assert_eq!(
            v.len(),
            self.ambient,
            "vector length does not match ambient dimension"
        );
        let mut out = v.clone();
        for row in &self.basis {
            let p = row.lowest_one().expect("echelon rows are nonzero");
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the spanning set, keeping the canonical form. Returns whether
    /// the dimension grew.
    pub fn insert(&mut self, v: BitRow) -> bool {
        let r = self.reduce(&v);
        let Some(p) = r.lowest_one() else {
            return false;
        };
        for row in &mut self.basis {
            if row.get(p) {
                row.xor_assign(&r);
            }
        }
        let at = self
            .basis
            .partition_point(|row| row.lowest_one().expect("nonzero") < p);
        self.basis.insert(at, r);
        true
    }

    /// Membership test together with the basis rows (by index) summing to `v`.
    pub fn solve(&self, v: &BitRow) -> Result<SpanSolution> {
        if v.len() != self.ambient {
            return Err(Error::usage(format!(
                "vector of length {} tested against subspace of F2^{}",
                v.len(),
                self.ambient
            )));
        }
        let mut rest = v.clone();
        let mut coordinates = Vec::new();
        for (k, row) in self.basis.iter().enumerate() {
            let p = row.lowest_one().expect("nonzero");
            if rest.get(p) {
                rest.xor_assign(row);
                coordinates.push(k);
            }
        }
        Ok(if rest.is_zero() {
            SpanSolution::Member(coordinates)
        } else {
            SpanSolution::NotMember
        })
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(v.clone());
        }
        Ok(s)
    }

    /// `A ∩ B`, computed as the combinations of A's basis annihilated by B's
    /// orthogonal complement.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        if other.dim() == self.ambient {
            return Ok(self.clone());
        }
        let complement = BitMatrix::from_rows(self.ambient, other.basis.clone()).kernel();
        let checks = BitMatrix::from_rows(self.ambient, complement.basis.clone());
        let images: Vec<BitRow> = self.basis.iter().map(|a| checks.mul_vec(a)).collect();
        let coefficients = BitMatrix::from_columns(checks.rows(), &images).kernel();
        Ok(Subspace::span(
            self.ambient,
            coefficients.basis.iter().map(|c| {
                let mut v = BitRow::zeros(self.ambient);
                for k in c.ones() {
                    v.xor_assign(&self.basis[k]);
                }
                v
            }),
        ))
    }

    /// Quotient `self / sub` with canonical representatives.
    ///
    /// Fails with a structural error when `sub` is not contained in `self`;
    /// in a chain complex that means the differential does not square to zero.
    pub fn quotient(&self, sub: &Subspace) -> Result<Quotient> {
        self.check_ambient(sub)?;
        if let Some(bad) = sub.basis.iter().find(|b| !self.contains(b)) {
            return Err(Error::structural(format!(
                "boundary {bad:?} is not contained in the cycle space"
            )));
        }
        let mut combined = sub.clone();
        let mut representatives = Vec::new();
        for z in &self.basis {
            let r = combined.reduce(z);
            if !r.is_zero() {
                combined.insert(r.clone());
                representatives.push(r);
            }
        }
        Ok(Quotient { representatives })
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::usage(format!(
                "subspaces live in F2^{} and F2^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanSolution {
    /// Indices of the basis rows whose sum is the vector.
    Member(Vec<usize>),
    NotMember,
}

impl SpanSolution {
    pub fn is_member(&self) -> bool {
        matches!(self, SpanSolution::Member(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub representatives: Vec<BitRow>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// Writes `target` as a sum of `generators`, returning the indices used, or
/// `None` when `target` is outside their span. The generators need not be
/// independent; the first solution found by elimination in input order is used.
pub fn express(generators: &[BitRow], target: &BitRow) -> Option<Vec<usize>> {
    let ambient = target.len();
    let g = generators.len();
    // Echelon rows paired with the generator combination that produced them.
    let mut rows: Vec<(usize, BitRow, BitRow)> = Vec::new();
    for (k, v) in generators.iter().enumerate() {
        assert_eq!(v.len(), ambient);
        let mut v = v.clone();
        let mut combo = BitRow::unit(g, k);
        for (p, row, c) in &rows {
            if v.get(*p) {
                v.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        if let Some(p) = v.lowest_one() {
            for (_, row, c) in rows.iter_mut() {
                if row.get(p) {
                    row.xor_assign(&v);
                    c.xor_assign(&combo);
                }
            }
            rows.push((p, v, combo));
        }
    }
    let mut rest = target.clone();
    let mut combo = BitRow::zeros(g);
    for (p, row, c) in &rows {
        if rest.get(*p) {
            rest.xor_assign(row);
            combo.xor_assign(c);
        }
    }
    rest.is_zero().then(|| combo.ones().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> BitMatrix {
        let data = (0..rows)
            .map(|_| BitRow::from_indices(cols, (0..cols).filter(|_| rng.gen_bool(0.5))))
            .collect();
        BitMatrix::from_rows(cols, data)
    }

    /// Every vector of the row span, by summing all 2^rows subsets.
    fn enumerate_span(rows: &[BitRow], cols: usize) -> std::collections::BTreeSet<BitRow> {
        let mut out = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut v = BitRow::zeros(cols);
            for (k, r) in rows.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    v.xor_assign(r);
                }
            }
            out.insert(v);
        }
        out
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(BitMatrix::identity(2).rank(), 2);
        assert_eq!(BitMatrix::from_dense(&[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn rank_matches_span_enumeration() {
        let mut rng = SplitMix64::seed_from_u64(6);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 6, 6);
            let span = enumerate_span(m.row_slice(), 6);
            // |span| = 2^rank, so the nonzero count is 2^rank - 1.
            assert_eq!(span.len() - 1, (1usize << m.rank()) - 1);
        }
    }

    #[test]
    fn kernel_cases() {
        assert_eq!(BitMatrix::zeros(3, 3).kernel(), Subspace::full(3));
        assert_eq!(BitMatrix::identity(3).kernel().dim(), 0);
        let m = BitMatrix::from_dense(&[&[1, 1, 0]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 2);
        for v in k.basis() {
            assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn rank_nullity_and_transpose() {
        let mut rng = SplitMix64::seed_from_u64(11);
        for _ in 0..40 {
            let rows = rng.gen_range(1..12);
            let cols = rng.gen_range(1..90);
            let m = random_matrix(&mut rng, rows, cols);
            assert_eq!(m.rank(), m.transpose().rank());
            assert_eq!(m.kernel().dim() + m.rank(), cols);
        }
    }

    #[test]
    fn intersect_cases() {
        let mut rng = SplitMix64::seed_from_u64(3);
        let b = Subspace::span(4, [BitRow::from_bits(&[1, 0, 1, 1])]);
        assert_eq!(Subspace::full(4).intersect(&b).unwrap(), b);
        let e1 = Subspace::span(2, [BitRow::unit(2, 0)]);
        let e2 = Subspace::span(2, [BitRow::unit(2, 1)]);
        assert_eq!(e1.intersect(&e2).unwrap().dim(), 0);
        assert!(e1.intersect(&Subspace::zero(3)).is_err());

        for _ in 0..25 {
            let a = random_matrix(&mut rng, 4, 8).row_space();
            let b = random_matrix(&mut rng, 5, 8).row_space();
            let expected: Vec<BitRow> = enumerate_span(a.basis(), 8)
                .into_iter()
                .filter(|v| b.contains(v))
                .collect();
            let got = a.intersect(&b).unwrap();
            assert_eq!(1usize << got.dim(), expected.len());
            for v in &expected {
                assert!(got.contains(v));
            }
        }
    }

    #[test]
    fn quotient_cases() {
        let z = Subspace::full(3);
        assert_eq!(z.quotient(&z).unwrap().dim(), 0);
        let q = z.quotient(&Subspace::zero(3)).unwrap();
        assert_eq!(Subspace::span(3, q.representatives.clone()), z);

        let mut rng = SplitMix64::seed_from_u64(10);
        for _ in 0..20 {
            let z = random_matrix(&mut rng, 7, 10).row_space();
            let b = Subspace::span(10, z.basis().iter().filter(|_| rng.gen_bool(0.4)).cloned());
            let q = z.quotient(&b).unwrap();
            assert_eq!(q.dim(), z.dim() - b.dim());
            let mut all: Vec<BitRow> = q.representatives.clone();
            all.extend(b.basis().iter().cloned());
            let joint = BitMatrix::from_rows(10, all.clone());
            assert_eq!(
                joint.rank(),
                all.len(),
                "representatives and B must be independent"
            );
            assert_eq!(Subspace::span(10, all), z);
        }
    }

    #[test]
    fn quotient_rejects_non_subspace() {
        let z = Subspace::span(3, [BitRow::unit(3, 0)]);
        let b = Subspace::span(3, [BitRow::unit(3, 1)]);
        assert!(matches!(z.quotient(&b), Err(Error::Structural(_))));
    }

    #[test]
    fn solve_cases() {
        let s = Subspace::span(
            4,
            [
                BitRow::from_bits(&[1, 1, 0, 0]),
                BitRow::from_bits(&[0, 0, 1, 1]),
            ],
        );
        assert_eq!(
            s.solve(&BitRow::zeros(4)).unwrap(),
            SpanSolution::Member(vec![])
        );
        assert_eq!(
            s.solve(&s.basis()[1]).unwrap(),
            SpanSolution::Member(vec![1])
        );
        let outside = BitRow::from_bits(&[1, 0, 0, 0]);
        assert_eq!(s.solve(&outside).unwrap(), SpanSolution::NotMember);
        let mut bigger = BitMatrix::from_rows(4, s.basis().to_vec());
        bigger = bigger
            .vstack(&BitMatrix::from_rows(4, vec![outside]))
            .unwrap();
        assert!(s.dim() < bigger.rank());
    }

    #[test]
    fn express_finds_combinations() {
        let gens = vec![
            BitRow::from_bits(&[1, 1, 0]),
            BitRow::from_bits(&[1, 1, 0]),
            BitRow::from_bits(&[0, 1, 1]),
        ];
        let target = BitRow::from_bits(&[1, 0, 1]);
        let used = express(&gens, &target).unwrap();
        let mut sum = BitRow::zeros(3);
        for k in used {
            sum.xor_assign(&gens[k]);
        }
        assert_eq!(sum, target);
        assert!(express(&gens, &BitRow::from_bits(&[1, 0, 0])).is_none());
    }

    #[test]
    fn canonical_form_is_order_independent() {
        let mut rng = SplitMix64::seed_from_u64(99);
        let m = random_matrix(&mut rng, 6, 20);
        let mut rows = m.row_slice().to_vec();
        let a = Subspace::span(20, rows.clone());
        rows.reverse();
        let b = Subspace::span(20, rows);
        assert_eq!(a, b);
    }
}
