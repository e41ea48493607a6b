//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt`/`BigRational` or over `Z/p`; there is
//! no floating point anywhere in the crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("solution is not integral")]
    NonIntegral,
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
}

/// Dense integer matrix, row-major, with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have the
    /// same length; an empty slice gives a 0x0 matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    /// Entries as `i64`, or `None` if any entry overflows.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.cols != other.cols && self.rows != 0 && other.rows != 0 {
            return Err(LinAlgError::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::DimensionMismatch(format!(
                "determinant of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rational_rank(self.rows, self.cols, self.data.clone())
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * factor;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * factor;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_string_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_string_rows();
        let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
        for r in rows {
            let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

/// Serialized as `{"rows": r, "cols": c, "entries": [..row-major..]}`.
/// Entries that fit in `i64` are JSON numbers, larger ones are decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<IntEntry> = self
            .data
            .iter()
            .map(|x| match x.to_i64() {
                Some(v) => IntEntry::Small(v),
                None => IntEntry::Big(x.to_string()),
            })
            .collect();
        let mut st = s.serialize_struct("IntMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<IntEntry>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.entries.len() != raw.rows * raw.cols {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries, found {}",
                raw.rows * raw.cols,
                raw.entries.len()
            )));
        }
        let data = raw
            .entries
            .into_iter()
            .map(|e| match e {
                IntEntry::Small(v) => Ok(BigInt::from(v)),
                IntEntry::Big(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntMatrix::from_vec(raw.rows, raw.cols, data))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntEntry {
    Small(i64),
    Big(String),
}

/// Dense rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().cloned().map(BigRational::from_integer).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// The integer matrix with the same entries, if every entry is integral.
    pub fn to_integral(&self) -> Option<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_vec(self.rows, self.cols, data))
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Position of the entry with smallest nonzero absolute value among
/// `candidates`; ties go to the first candidate.
fn smallest_nonzero<I>(m: &IntMatrix, candidates: I) -> Option<(usize, usize)>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (i, j) in candidates {
        let a = m[(i, j)].abs();
        if a.is_zero() {
            continue;
        }
        if best.as_ref().map_or(true, |(_, b)| a < *b) {
            best = Some(((i, j), a));
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form with unimodular transforms.
///
/// Pivots are chosen as the smallest nonzero absolute value in the active
/// block (row-major tie break), so the transforms are reproducible.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let block = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
        let Some((pi, pj)) = smallest_nonzero(&d, block) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                let cross = (t..rows)
                    .map(|i| (i, t))
                    .chain((t + 1..cols).map(|j| (t, j)));
                let (pi, pj) = smallest_nonzero(&d, cross).expect("pivot survives reduction");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, v, d }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u * m == h`.
///
/// Nonzero rows of `h` come first with strictly increasing pivot columns,
/// positive pivots, and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let Some((pi, _)) = smallest_nonzero(&h, (r..rows).map(|i| (i, c))) else {
                break;
            };
            h.swap_rows(r, pi);
            u.swap_rows(r, pi);
            let pivot = h[(r, c)].clone();
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&pivot);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                clean &= h[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&pivot);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Solves `m * x = b` exactly over the rationals for square nonsingular `m`.
pub fn solve_rational(m: &IntMatrix, b: &IntMatrix) -> Result<RatMatrix, LinAlgError> {
    if !m.is_square() || m.rows != b.rows {
        return Err(LinAlgError::DimensionMismatch(format!(
            "solve {}x{} against {}x{}",
            m.rows, m.cols, b.rows, b.cols
        )));
    }
    let n = m.rows;
    let w = n + b.cols;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            m.row(i)
                .iter()
                .chain(b.row(i))
                .cloned()
                .map(BigRational::from_integer)
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(LinAlgError::Singular)?;
        a.swap(k, p);
        let inv = a[k][k].recip();
        for j in k..w {
            a[k][j] = &a[k][j] * &inv;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in k..w {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    let data = a.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
    Ok(RatMatrix {
        rows: n,
        cols: b.cols,
        data,
    })
}

/// Like [`solve_rational`] but demands an integral solution.
pub fn solve_integral(m: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
    solve_rational(m, b)?
        .to_integral()
        .ok_or(LinAlgError::NonIntegral)
}

/// Rank over Q of a row-major integer matrix.
///
/// Gaussian elimination with primitive-row normalization; rows with a zero in
/// the pivot column are left untouched, which keeps sparse inputs cheap.
fn rational_rank(rows: usize, cols: usize, data: Vec<BigInt>) -> usize {
    let mut a: Vec<Vec<BigInt>> = data.chunks(cols.max(1)).take(rows).map(<[_]>::to_vec).collect();
    if cols == 0 {
        return 0;
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = prow[c].gcd(&row[c]);
            let fp = &row[c] / &g;
            let fr = &prow[c] / &g;
            let mut content = BigInt::zero();
            for j in c..cols {
                row[j] = &row[j] * &fr - &prow[j] * &fp;
                if !row[j].is_zero() {
                    content = content.gcd(&row[j]);
                }
            }
            if !content.is_zero() && !content.is_one() {
                for x in row[c..].iter_mut() {
                    *x = &*x / &content;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over Q of a small integer matrix given as rows.
pub fn rank_rational_i64(rows: &[Vec<i64>], cols: usize) -> usize {
    let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
    rational_rank(rows.len(), cols, data)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending. Empty for `n` in {0, 1}.
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor fits in u64"));
    }
    out
}

fn check_prime(p: u64) -> Result<(), LinAlgError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(LinAlgError::NotPrime(p))
    }
}

/// Canonical representative in `[0, p)`.
pub fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime, a != 0
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    result as u64
}

/// Reduced row echelon form over Z/p, in place. Returns the pivot columns.
pub fn rref_mod_p(rows: &mut Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pi) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pi);
        let inv = inv_mod(rows[r][c], p) as u128;
        for x in rows[r].iter_mut() {
            *x = (*x as u128 * inv % p as u128) as u64;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let f = rows[i][c] as u128;
            for j in 0..cols {
                let sub = (f * rows[r][j] as u128 % p as u128) as u64;
                rows[i][j] = (rows[i][j] + p - sub) % p;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

fn reduce_rows(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| reduce_mod(x, p)).collect())
        .collect()
}

pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize, LinAlgError> {
    check_prime(p)?;
    let mut rows = reduce_rows(m, p);
    Ok(rref_mod_p(&mut rows, m.cols, p).len())
}

/// Rank over Z/p of a small integer matrix given as rows.
pub fn rank_mod_p_i64(rows: &[Vec<i64>], cols: usize, p: u64) -> usize {
    let mut r: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| row.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    rref_mod_p(&mut r, cols, p).len()
}

/// A subspace of `(Z/p)^ambient_dim`, stored as a reduced row echelon basis
/// (pivots equal to 1, pairwise distinct pivot columns).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPSubspace {
    pub p: u64,
    pub ambient_dim: usize,
    pub basis: Vec<Vec<u64>>,
}

impl ModPSubspace {
    /// Span of arbitrary vectors, canonicalized.
    pub fn span(p: u64, ambient_dim: usize, vectors: Vec<Vec<u64>>) -> Self {
        let mut rows = vectors;
        rref_mod_p(&mut rows, ambient_dim, p);
        ModPSubspace {
            p,
            ambient_dim,
            basis: rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.iter().map(|x| x % self.p).collect());
        rref_mod_p(&mut rows, self.ambient_dim, self.p).len() == self.dim()
    }

    /// Membership test for an integer vector, reduced mod p first.
    pub fn contains_int(&self, v: &[i64]) -> bool {
        let v: Vec<u64> = v.iter().map(|&x| x.rem_euclid(self.p as i64) as u64).collect();
        self.contains(&v)
    }
}

/// Null space `{x : m x = 0}` over Z/p.
pub fn modp_kernel(m: &IntMatrix, p: u64) -> Result<ModPSubspace, LinAlgError> {
    check_prime(p)?;
    let cols = m.cols;
    let mut rows = reduce_rows(m, p);
    let pivots = rref_mod_p(&mut rows, cols, p);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - rows[r][free]) % p;
        }
        basis.push(v);
    }
    Ok(ModPSubspace::span(p, cols, basis))
}

/// Complement of the column space of `m` in `(Z/p)^rows`, represented by the
/// standard basis vectors at the non-pivot coordinates of the column space's
/// echelon form.
pub fn modp_cokernel(m: &IntMatrix, p: u64) -> Result<ModPSubspace, LinAlgError> {
    check_prime(p)?;
    let mut image = reduce_rows(&m.transpose(), p);
    let pivots = rref_mod_p(&mut image, m.rows, p);
    let basis = (0..m.rows)
        .filter(|r| !pivots.contains(r))
        .map(|r| {
            let mut v = vec![0u64; m.rows];
            v[r] = 1;
            v
        })
        .collect();
    Ok(ModPSubspace {
        p,
        ambient_dim: m.rows,
        basis,
    })
}

/// Column space of `m` over Z/p.
pub fn modp_image(m: &IntMatrix, p: u64) -> Result<ModPSubspace, LinAlgError> {
    check_prime(p)?;
    Ok(ModPSubspace::span(p, m.rows, reduce_rows(&m.transpose(), p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn check_snf(input: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(input);
        assert_eq!(s.u.mul(input).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.is_unimodular(), "U not unimodular");
        assert!(s.v.is_unimodular(), "V not unimodular");
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag: Vec<BigInt> = (0..s.d.rows().min(s.d.cols())).map(|i| s.d[(i, i)].clone()).collect();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zeros must trail");
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken: {diag:?}");
            }
        }
        s
    }

    #[test]
    fn snf_identity() {
        let s = check_snf(&IntMatrix::identity(4));
        assert_eq!(s.d, IntMatrix::identity(4));
    }

    #[test]
    fn snf_a2_cartan() {
        let s = check_snf(&m(&[&[2, -1], &[-1, 2]]));
        assert_eq!(s.d, m(&[&[1, 0], &[0, 3]]));
    }

    #[test]
    fn snf_zero() {
        let s = check_snf(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn snf_rectangular() {
        let s = check_snf(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.invariant_factors(), vec![2.into(), 6.into(), 12.into()]);
        let s = check_snf(&m(&[&[1, 2], &[3, 4], &[5, 6]]));
        assert_eq!(s.invariant_factors(), vec![1.into(), 2.into()]);
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert!(u.is_unimodular());

        let input = m(&[&[2, 0], &[1, 1]]);
        let (h, u) = hermite_normal_form(&input);
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
        assert_eq!(u.mul(&input).unwrap(), h);

        let (h, _) = hermite_normal_form(&m(&[&[0]]));
        assert_eq!(h, m(&[&[0]]));
    }

    #[test]
    fn hnf_rank_deficient_rows_sink() {
        let input = m(&[&[0, 0, 0], &[2, 4, 6], &[1, 2, 3], &[0, 3, 1]]);
        let (h, u) = hermite_normal_form(&input);
        assert_eq!(u.mul(&input).unwrap(), h);
        assert_eq!(h, m(&[&[1, 2, 3], &[0, 3, 1], &[0, 0, 0], &[0, 0, 0]]));
    }

    #[test]
    fn solve_examples() {
        let b = m(&[&[1, -4], &[7, 0]]);
        let x = solve_rational(&IntMatrix::identity(2), &b).unwrap();
        assert_eq!(x.to_integral().unwrap(), b);

        let x = solve_rational(&m(&[&[2]]), &m(&[&[3]])).unwrap();
        assert_eq!(*x.get(0, 0), BigRational::new(3.into(), 2.into()));
        assert_eq!(solve_integral(&m(&[&[2]]), &m(&[&[3]])), Err(LinAlgError::NonIntegral));

        let x = solve_rational(&m(&[&[2, -1], &[-1, 2]]), &IntMatrix::identity(2)).unwrap();
        let third = |k: i64| BigRational::new(k.into(), 3.into());
        assert_eq!(*x.get(0, 0), third(2));
        assert_eq!(*x.get(0, 1), third(1));
        assert_eq!(*x.get(1, 0), third(1));
        assert_eq!(*x.get(1, 1), third(2));
    }

    #[test]
    fn solve_singular_is_distinct_signal() {
        let r = solve_rational(&m(&[&[1, 2], &[2, 4]]), &IntMatrix::identity(2));
        assert_eq!(r, Err(LinAlgError::Singular));
    }

    #[test]
    fn det_and_rank() {
        assert_eq!(m(&[&[2, -1], &[-1, 2]]).det().unwrap(), 3.into());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), (-1).into());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(IntMatrix::zeros(3, 2).rank(), 0);
    }

    #[test]
    fn modp_identity_trivial() {
        for p in [2, 3, 5, 7] {
            assert!(modp_kernel(&IntMatrix::identity(3), p).unwrap().is_trivial());
            assert!(modp_cokernel(&IntMatrix::identity(3), p).unwrap().is_trivial());
        }
    }

    #[test]
    fn modp_two_is_zero_mod_two() {
        let k = modp_kernel(&m(&[&[2]]), 2).unwrap();
        let c = modp_cokernel(&m(&[&[2]]), 2).unwrap();
        assert_eq!(k.basis, vec![vec![1]]);
        assert_eq!(c.basis, vec![vec![1]]);
    }

    #[test]
    fn modp_c2_chain() {
        // Linear map t -> w for adjoint C2, column convention.
        let map = m(&[&[2, -2], &[-1, 2]]);
        let k = modp_kernel(&map, 2).unwrap();
        assert_eq!(k.basis, vec![vec![0, 1]]);
    }

    #[test]
    fn modp_rejects_composite() {
        assert_eq!(modp_kernel(&IntMatrix::identity(1), 4), Err(LinAlgError::NotPrime(4)));
        assert_eq!(modp_cokernel(&IntMatrix::identity(1), 1), Err(LinAlgError::NotPrime(1)));
        assert_eq!(rank_mod_p(&IntMatrix::identity(1), 0), Err(LinAlgError::NotPrime(0)));
    }

    #[test]
    fn prime_divisor_lists() {
        assert_eq!(prime_divisors(&BigInt::from(12)), vec![2, 3]);
        assert_eq!(prime_divisors(&BigInt::from(-7)), vec![7]);
        assert!(prime_divisors(&BigInt::from(1)).is_empty());
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect())
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn snf_properties(a in small_matrix()) {
            check_snf(&a);
        }

        #[test]
        fn hnf_agrees_with_snf(a in small_matrix()) {
            let (h, u) = hermite_normal_form(&a);
            prop_assert_eq!(u.mul(&a).unwrap(), h.clone());
            prop_assert!(u.is_unimodular());
            let s = smith_normal_form(&a);
            prop_assert_eq!(h.rank(), s.rank());
            prop_assert_eq!(a.rank(), s.rank());
            if a.is_square() && s.rank() == a.rows() {
                let prod: BigInt = s.invariant_factors().iter().product();
                prop_assert_eq!(a.det().unwrap().abs(), prod.clone());
                let hdiag: BigInt = (0..h.rows()).map(|i| h[(i, i)].clone()).product();
                prop_assert_eq!(hdiag, prod);
            }
        }

        #[test]
        fn modp_rank_nullity(a in small_matrix(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let r = rank_mod_p(&a, p).unwrap();
            let k = modp_kernel(&a, p).unwrap();
            let c = modp_cokernel(&a, p).unwrap();
            prop_assert_eq!(r + k.dim(), a.cols());
            prop_assert_eq!(c.dim(), a.rows() - r);
            // kernel vectors really are annihilated
            for v in &k.basis {
                for i in 0..a.rows() {
                    let s: BigInt = a.row(i).iter().zip(v).map(|(x, &y)| x * BigInt::from(y)).sum();
                    prop_assert_eq!(reduce_mod(&s, p), 0);
                }
            }
            // image + cokernel representatives span everything
            let mut all = modp_image(&a, p).unwrap().basis;
            all.extend(c.basis.iter().cloned());
            prop_assert_eq!(ModPSubspace::span(p, a.rows(), all).dim(), a.rows());
        }
    }
}
