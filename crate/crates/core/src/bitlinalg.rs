//! Dense bit-packed linear algebra over GF(2).
//!
//! Everything downstream (constraint matrices, module bases, cochain
//! differentials) is expressed with [`BitVector`] and [`BitMatrix`]. Gaussian
//! elimination always picks the leftmost available pivot so that kernels,
//! particular solutions and certificates come out in a reproducible order.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    /// Low `len` bits of `mask`, bit `i` of the mask giving entry `i`.
    pub fn from_u64(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 entries");
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    /// Inverse of [`BitVector::from_u64`]; panics above 64 entries.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD);
        self.words.first().copied().unwrap_or(0)
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

    /// Entry as 0/1.
    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        self.get(i) as u8
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

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc + (a & b).count_ones())
            % 2
            == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bools(self.iter().chain(other.iter()))
    }

    /// Entries at the listed positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        BitVector::from_bools(positions.iter().map(|&p| self.get(p)))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl serde::Serialize for BitVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(u8::from))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Row-major dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Solution set `particular + span(kernel)` of a consistent affine system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: BitVector,
    pub kernel: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self { cols: n, rows: (0..n).map(|i| BitVector::unit(n, i)).collect() }
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                context: "matrix row",
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    context: "matrix column",
                    expected: rows,
                    found: c.len(),
                });
            }
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(c < self.cols);
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(c < self.cols);
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "pushed row",
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bools(self.rows.iter().map(|r| r.get(c)))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// `M·v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(BitVector::from_bools(self.rows.iter().map(|r| r.dot(v))))
    }

    /// `vᵀ·M`.
    pub fn left_mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                context: "vector-matrix product",
                expected: self.rows.len(),
                found: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for i in v.ones() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| other.left_mul_vec(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix { cols: other.cols, rows })
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols || self.nrows() != other.nrows() {
            return Err(Error::DimensionMismatch {
                context: "matrix sum",
                expected: self.nrows() * self.cols,
                found: other.nrows() * other.cols,
            });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.xor(b)).collect();
        Ok(BitMatrix { cols: self.cols, rows })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Reduced row echelon form restricted to pivots in columns `< pivot_limit`.
    fn echelon_limited(&self, pivot_limit: usize) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..pivot_limit.min(self.cols) {
            if next == m.rows.len() {
                break;
            }
            let Some(found) = (next..m.rows.len()).find(|&r| m.rows[r].get(col)) else {
                continue;
            };
            m.rows.swap(next, found);
            let pivot_row = m.rows[next].clone();
            for (r, row) in m.rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn echelon(&self) -> Echelon {
        self.echelon_limited(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{v : M·v = 0}`, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<BitVector> {
        let ech = self.echelon();
        kernel_from_echelon(&ech, self.cols)
    }

    /// Basis of `{y : yᵀ·M = 0}`.
    pub fn left_kernel(&self) -> Vec<BitVector> {
        self.transpose().kernel()
    }

    /// Solves `M·x = b`. Returns `Ok(None)` when the system is inconsistent.
    pub fn solve_affine(&self, b: &BitVector) -> Result<Option<AffineSolution>> {
        if b.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                context: "affine right-hand side",
                expected: self.rows.len(),
                found: b.len(),
            });
        }
        let augmented = BitMatrix {
            cols: self.cols + 1,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.concat(&BitVector::from_bools([b.get(i)])))
                .collect(),
        };
        let ech = augmented.echelon_limited(self.cols);
        let rank = ech.rank();
        if ech.matrix.rows[rank..].iter().any(|r| r.get(self.cols)) {
            return Ok(None);
        }
        let mut particular = BitVector::zeros(self.cols);
        for (r, &p) in ech.pivots.iter().enumerate() {
            if ech.matrix.rows[r].get(self.cols) {
                particular.set(p, true);
            }
        }
        let coefficient_part = Echelon {
            matrix: BitMatrix {
                cols: self.cols,
                rows: ech.matrix.rows.iter().map(|r| r.select(&(0..self.cols).collect::<Vec<_>>())).collect(),
            },
            pivots: ech.pivots.clone(),
        };
        Ok(Some(AffineSolution {
            particular,
            kernel: kernel_from_echelon(&coefficient_part, self.cols),
        }))
    }

    /// A row combination `y` with `yᵀM = 0` and `yᵀb = 1`, if the system
    /// `M·x = b` is inconsistent. The first such left-kernel basis vector is
    /// returned; none exists exactly when the system is solvable.
    pub fn infeasibility_certificate(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows.len() {
            return Err(Error::DimensionMismatch {
                context: "certificate right-hand side",
                expected: self.rows.len(),
                found: b.len(),
            });
        }
        Ok(self.left_kernel().into_iter().find(|y| y.dot(b)))
    }
}

fn kernel_from_echelon(ech: &Echelon, cols: usize) -> Vec<BitVector> {
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVector::unit(cols, free);
            for (r, &p) in ech.pivots.iter().enumerate() {
                if ech.matrix.rows[r].get(free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

/// Span membership helper: reduces vectors against an echelonized basis.
#[derive(Clone, Debug)]
pub struct SpanReducer {
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl SpanReducer {
    pub fn new(len: usize, generators: &[BitVector]) -> Result<Self> {
        let m = BitMatrix::from_rows(len, generators.to_vec())?;
        let ech = m.echelon();
        let rank = ech.rank();
        Ok(Self { rows: ech.matrix.rows[..rank].to_vec(), pivots: ech.pivots })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Canonical representative of `v` modulo the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BitMatrix {
        let rows = (0..rows)
            .map(|_| BitVector::from_bools((0..cols).map(|_| rng.gen::<bool>())))
            .collect();
        BitMatrix::from_rows(cols, rows).unwrap()
    }

    #[test]
    fn identity_kernel_is_empty() {
        assert!(BitMatrix::identity(2).kernel().is_empty());
    }

    #[test]
    fn parity_row_kernel() {
        let m = BitMatrix::from_rows(2, vec![BitVector::from_bools([true, true])]).unwrap();
        assert_eq!(m.kernel(), vec![BitVector::from_bools([true, true])]);
    }

    #[test]
    fn random_kernel_matches_exhaustive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_matrix(&mut rng, 6, 10);
        let basis = m.kernel();
        // brute force: count all null vectors
        let null_count = (0..1u64 << 10)
            .filter(|&x| m.mul_vec(&BitVector::from_u64(10, x)).unwrap().is_zero())
            .count();
        assert_eq!(null_count, 1 << basis.len());
        for v in &basis {
            assert!(m.mul_vec(v).unwrap().is_zero());
        }
        let span = SpanReducer::new(10, &basis).unwrap();
        assert_eq!(span.rank(), basis.len());
        assert_eq!(m.rank() + basis.len(), 10);
    }

    #[test]
    fn solve_identity_zero() {
        let sol = BitMatrix::identity(3).solve_affine(&BitVector::zeros(3)).unwrap().unwrap();
        assert!(sol.particular.is_zero());
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn solve_parity_row() {
        let m = BitMatrix::from_rows(2, vec![BitVector::from_bools([true, true])]).unwrap();
        let sol = m.solve_affine(&BitVector::from_bools([true])).unwrap().unwrap();
        assert_eq!(sol.particular, BitVector::from_bools([true, false]));
        assert_eq!(sol.kernel, vec![BitVector::from_bools([true, true])]);
    }

    #[test]
    fn inconsistent_system_has_certificate() {
        let m = BitMatrix::from_rows(
            2,
            vec![BitVector::from_bools([true, true]), BitVector::from_bools([true, true])],
        )
        .unwrap();
        let b = BitVector::from_bools([true, false]);
        assert!(m.solve_affine(&b).unwrap().is_none());
        let y = m.infeasibility_certificate(&b).unwrap().unwrap();
        assert!(m.left_mul_vec(&y).unwrap().is_zero());
        assert!(y.dot(&b));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = BitMatrix::identity(3);
        assert!(matches!(
            m.solve_affine(&BitVector::zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    proptest::proptest! {
        #[test]
        fn solve_agrees_with_brute_force(rows in 1usize..7, cols in 1usize..10, seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let b = BitVector::from_bools((0..rows).map(|_| rng.gen::<bool>()));
            let brute: Vec<u64> = (0..1u64 << cols)
                .filter(|&x| m.mul_vec(&BitVector::from_u64(cols, x)).unwrap() == b)
                .collect();
            match m.solve_affine(&b).unwrap() {
                None => {
                    proptest::prop_assert!(brute.is_empty());
                    let y = m.infeasibility_certificate(&b).unwrap().unwrap();
                    proptest::prop_assert!(y.dot(&b));
                }
                Some(sol) => {
                    proptest::prop_assert_eq!(&m.mul_vec(&sol.particular).unwrap(), &b);
                    proptest::prop_assert_eq!(brute.len(), 1usize << sol.kernel.len());
                    for k in &sol.kernel {
                        proptest::prop_assert!(m.mul_vec(k).unwrap().is_zero());
                    }
                }
            }
        }

        #[test]
        fn rank_nullity(rows in 1usize..12, cols in 1usize..40, seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let basis = m.kernel();
            proptest::prop_assert_eq!(m.rank() + basis.len(), cols);
            for v in &basis {
                proptest::prop_assert!(m.mul_vec(v).unwrap().is_zero());
            }
        }
    }
}
