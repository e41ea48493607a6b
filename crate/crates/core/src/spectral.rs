//! The Leray-Serre E2 page of `G -> G/T` and its d2 homology.
//!
//! `H*(G/T)` is modelled on the Schubert basis `sigma_w` (degree `2 l(w)`),
//! multiplied by degree-2 classes through the Chevalley rule, and `H*(T)` is
//! the exterior algebra on `t_1..t_n`. The differential is
//! `d2(x ⊗ t) = (x · tau(t)) ⊗ 1`, extended with Koszul signs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{rank_mod_p_i64, rank_rational_i64};
use crate::lattices::GroupSpec;
use crate::rootdata::{RootSystem, WeightVector};
use crate::transgression::{transgression_matrix, TransgressionError};

pub const DEFAULT_WEYL_CAP: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("Weyl group of {lie_type} has {order} elements, above the cap of {cap}")]
    CapExceeded { lie_type: String, order: u128, cap: usize },
    #[error("max total degree {requested} exceeds dim G = {dim}")]
    DegreeTooLarge { requested: usize, dim: usize },
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
    #[error("length generating function does not factor into q-integers")]
    Factorization,
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Transgression(#[from] TransgressionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// Lexicographically least reduced word, 1-based generator indices.
    pub word: Vec<usize>,
    /// Matrix of the action on weight coordinates (column vectors).
    pub action: Vec<Vec<i64>>,
    pub length: usize,
}

impl WeylElement {
    pub fn apply(&self, v: &WeightVector) -> WeightVector {
        WeightVector(
            self.action
                .iter()
                .map(|row| row.iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "e".into();
        }
        self.word
            .iter()
            .map(|i| format!("s{i}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A Bruhat cover `w -> w s_beta` with `l(w s_beta) = l(w) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cover {
    root: usize,
    target: usize,
}

/// All elements of the Weyl group, ordered by length and then by reduced word.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    elements: Vec<WeylElement>,
    index: HashMap<WeightVector, usize>,
    level_starts: Vec<usize>,
    // positive roots (simple-root coefficients) used by the covers
    positive_coeffs: Vec<Vec<i64>>,
    covers: Vec<Vec<Cover>>,
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

fn simple_reflection_matrix(rs: &RootSystem, i: usize) -> Vec<Vec<i64>> {
    let n = rs.rank();
    let alpha = &rs.simple_roots()[i].0;
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| i64::from(r == c) - if c == i { alpha[r] } else { 0 })
                .collect()
        })
        .collect()
}

pub fn weyl_group(rs: &RootSystem, size_cap: usize) -> Result<WeylGroup, SpectralError> {
    let order = rs.lie_type().weyl_order();
    if order > size_cap as u128 {
        return Err(SpectralError::CapExceeded {
            lie_type: rs.lie_type().to_string(),
            order,
            cap: size_cap,
        });
    }
    let n = rs.rank();
    let rho = WeightVector(vec![1; n]);
    let gens: Vec<Vec<Vec<i64>>> = (0..n).map(|i| simple_reflection_matrix(rs, i)).collect();
    let identity: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();

    let mut elements = vec![WeylElement {
        word: vec![],
        action: identity,
        length: 0,
    }];
    let mut index = HashMap::from([(rho.clone(), 0usize)]);
    let mut level_starts = vec![0];
    let mut level = 0..1;
    loop {
        // candidates for the next level, keyed by w(rho); keep the least word
        let mut next: HashMap<WeightVector, WeylElement> = HashMap::new();
        for w in &elements[level.clone()] {
            for (i, s) in gens.iter().enumerate() {
                let image = w.apply(&rs.simple_roots()[i]);
                let ascent = rs.root(&image).is_some_and(|r| r.is_positive());
                if !ascent {
                    continue;
                }
                let action = mat_mul(&w.action, s);
                let mut word = w.word.clone();
                word.push(i + 1);
                let u = WeylElement {
                    word,
                    action,
                    length: w.length + 1,
                };
                let key = u.apply(&rho);
                match next.get(&key) {
                    Some(existing) if existing.word <= u.word => {}
                    _ => {
                        next.insert(key, u);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        let mut fresh: Vec<(WeightVector, WeylElement)> = next.into_iter().collect();
        fresh.sort_by(|a, b| a.1.word.cmp(&b.1.word));
        let start = elements.len();
        level_starts.push(start);
        for (key, u) in fresh {
            index.insert(key, elements.len());
            elements.push(u);
        }
        level = start..elements.len();
    }

    let positive: Vec<_> = rs.positive_roots().collect();
    let positive_coeffs = positive.iter().map(|r| r.simple_coeffs.clone()).collect();
    let reflected_rho: Vec<WeightVector> = positive.iter().map(|r| r.reflect(&rho)).collect();
    let covers = elements
        .iter()
        .map(|w| {
            reflected_rho
                .iter()
                .enumerate()
                .filter_map(|(root, v)| {
                    let target = index[&w.apply(v)];
                    (elements[target].length == w.length + 1).then_some(Cover { root, target })
                })
                .collect()
        })
        .collect();

    Ok(WeylGroup {
        rank: n,
        elements,
        index,
        level_starts,
        positive_coeffs,
        covers,
    })
}

impl WeylGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &WeylElement {
        &self.elements[idx]
    }

    pub fn max_length(&self) -> usize {
        self.level_starts.len() - 1
    }

    /// Indices of the elements of length `l`.
    pub fn of_length(&self, l: usize) -> std::ops::Range<usize> {
        match self.level_starts.get(l) {
            Some(&start) => start..self.level_starts.get(l + 1).copied().unwrap_or(self.elements.len()),
            None => 0..0,
        }
    }

    /// Coefficients of the length generating function `sum_w q^l(w)`.
    pub fn length_counts(&self) -> Vec<usize> {
        (0..=self.max_length()).map(|l| self.of_length(l).len()).collect()
    }

    /// Looks up an element by its reduced word (1-based letters).
    pub fn find_word(&self, word: &[usize]) -> Option<usize> {
        let rho = WeightVector(vec![1; self.rank]);
        let mut v = rho;
        // w(rho) for w = s_{a1} ... s_{ak}: apply from the right
        for &i in word.iter().rev() {
            let w = &self.elements[self.level_starts[1] + self.position_of_generator(i)?];
            v = w.apply(&v);
        }
        self.index.get(&v).copied()
    }

    fn position_of_generator(&self, i: usize) -> Option<usize> {
        self.of_length(1)
            .position(|k| self.elements[k].word == [i])
    }
}

/// `w_class · sigma_w` by the Chevalley rule, as `(coefficient, element)`
/// pairs sorted by element index. `class` is zero-based.
///
/// The coefficient of `sigma_{w s_beta}` is the coefficient of the simple
/// root `class` in the positive root `beta` (roots live in the torus Lie
/// algebra, so this is the fundamental-weight/coroot pairing).
pub fn chevalley_multiply(wg: &WeylGroup, class: usize, w: usize) -> Vec<(i64, usize)> {
    let mut out: Vec<(i64, usize)> = wg.covers[w]
        .iter()
        .filter_map(|c| {
            let k = wg.positive_coeffs[c.root][class];
            assert!(k >= 0, "Chevalley coefficient must be nonnegative");
            (k != 0).then_some((k, c.target))
        })
        .collect();
    out.sort_by_key(|&(_, t)| t);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Rational,
    ModP(u64),
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Rational => write!(f, "Q"),
            Coefficients::ModP(p) => write!(f, "Z/{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PageOptions {
    pub weyl_cap: usize,
    /// Worker threads for cell construction; 0 lets rayon decide.
    pub jobs: usize,
}

impl Default for PageOptions {
    fn default() -> Self {
        PageOptions {
            weyl_cap: DEFAULT_WEYL_CAP,
            jobs: 0,
        }
    }
}

/// Basis of `E2^{s,t}`: Weyl elements of length `s/2` times `t`-subsets,
/// Weyl-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub s: usize,
    pub t: usize,
    pub weyl: Vec<usize>,
    pub monomials: Vec<Vec<usize>>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.weyl.len() * self.monomials.len()
    }

    fn position(&self, w_pos: usize, mono: usize) -> usize {
        w_pos * self.monomials.len() + mono
    }
}

/// Dense matrix of `d2: E2^{s,t} -> E2^{s+2,t-1}`, rows indexed by the
/// target basis, columns by the source basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D2Matrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct E2Page {
    pub group_label: String,
    pub coefficients: Coefficients,
    pub max_total_degree: usize,
    pub rank: usize,
    pub cells: BTreeMap<(usize, usize), Cell>,
    pub d2: BTreeMap<(usize, usize), D2Matrix>,
    jobs: usize,
}

/// `t`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, t, &mut Vec::new(), &mut out);
    out
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, SpectralError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SpectralError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}

pub fn build_e2(
    g: &GroupSpec,
    coefficients: Coefficients,
    max_total_degree: Option<usize>,
    options: PageOptions,
) -> Result<E2Page, SpectralError> {
    if let Coefficients::ModP(p) = coefficients {
        if !crate::exactlin::is_prime(p) {
            return Err(SpectralError::NotPrime(p));
        }
    }
    let rs = g.root_system();
    let dim = rs.lie_type().group_dimension();
    let max_total_degree = max_total_degree.unwrap_or(dim);
    if max_total_degree > dim {
        return Err(SpectralError::DegreeTooLarge {
            requested: max_total_degree,
            dim,
        });
    }
    let wg = weyl_group(rs, options.weyl_cap)?;
    let tau = transgression_matrix(g)?;
    let tau_rows = tau.matrix.to_i64_rows().expect("small transgression entries");
    let n = rs.rank();

    let mut cells = BTreeMap::new();
    for l in 0..=wg.max_length() {
        for t in 0..=n {
            let s = 2 * l;
            if s + t > max_total_degree + 1 {
                continue;
            }
            cells.insert(
                (s, t),
                Cell {
                    s,
                    t,
                    weyl: wg.of_length(l).collect(),
                    monomials: subsets(n, t),
                },
            );
        }
    }

    let sources: Vec<(usize, usize)> = cells
        .keys()
        .copied()
        .filter(|&(s, t)| t > 0 && s + t <= max_total_degree && cells.contains_key(&(s + 2, t - 1)))
        .collect();
    let d2: BTreeMap<_, _> = with_pool(options.jobs, || {
        sources
            .par_iter()
            .map(|&(s, t)| {
                let m = d2_matrix(&wg, &tau_rows, &cells[&(s, t)], &cells[&(s + 2, t - 1)], coefficients);
                ((s, t), m)
            })
            .collect()
    })?;

    Ok(E2Page {
        group_label: g.label(),
        coefficients,
        max_total_degree,
        rank: n,
        cells,
        d2,
        jobs: options.jobs,
    })
}

fn d2_matrix(wg: &WeylGroup, tau: &[Vec<i64>], src: &Cell, dst: &Cell, coeff: Coefficients) -> D2Matrix {
    let n = tau.len();
    let dst_weyl: HashMap<usize, usize> = dst.weyl.iter().enumerate().map(|(k, &w)| (w, k)).collect();
    let dst_mono: HashMap<&[usize], usize> = dst
        .monomials
        .iter()
        .enumerate()
        .map(|(k, m)| (m.as_slice(), k))
        .collect();
    let mut entries = vec![vec![0i64; src.dim()]; dst.dim()];
    for (wp, &w) in src.weyl.iter().enumerate() {
        // sigma_w · w_k for every k
        let products: Vec<Vec<(i64, usize)>> = (0..n).map(|k| chevalley_multiply(wg, k, w)).collect();
        for (mp, mono) in src.monomials.iter().enumerate() {
            let col = src.position(wp, mp);
            for (j, &ij) in mono.iter().enumerate() {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = mono.iter().copied().filter(|&x| x != ij).collect();
                let rest_pos = dst_mono[rest.as_slice()];
                for (k, &c) in tau[ij].iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for &(coef, target) in &products[k] {
                        let row = dst.position(dst_weyl[&target], rest_pos);
                        entries[row][col] += sign * c * coef;
                    }
                }
            }
        }
    }
    if let Coefficients::ModP(p) = coeff {
        for row in entries.iter_mut() {
            for x in row.iter_mut() {
                *x = x.rem_euclid(p as i64);
            }
        }
    }
    D2Matrix {
        rows: dst.dim(),
        cols: src.dim(),
        entries,
    }
}

impl D2Matrix {
    pub fn rank(&self, coeff: Coefficients) -> usize {
        match coeff {
            Coefficients::Rational => rank_rational_i64(&self.entries, self.cols),
            Coefficients::ModP(p) => rank_mod_p_i64(&self.entries, self.cols, p),
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &D2Matrix) -> D2Matrix {
        assert_eq!(self.cols, other.rows);
        let entries = self
            .entries
            .iter()
            .map(|row| {
                (0..other.cols)
                    .map(|j| row.iter().zip(&other.entries).map(|(a, orow)| a * orow[j]).sum())
                    .collect()
            })
            .collect();
        D2Matrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    pub fn is_zero_in(&self, coeff: Coefficients) -> bool {
        self.entries.iter().flatten().all(|&x| match coeff {
            Coefficients::Rational => x == 0,
            Coefficients::ModP(p) => x.rem_euclid(p as i64) == 0,
        })
    }
}

impl E2Page {
    pub fn cell_dim(&self, s: usize, t: usize) -> usize {
        self.cells.get(&(s, t)).map_or(0, Cell::dim)
    }

    /// `d2_{s+2,t-1} ∘ d2_{s,t}` for every composable pair.
    pub fn d2_squares(&self) -> Vec<((usize, usize), D2Matrix)> {
        self.d2
            .iter()
            .filter_map(|(&(s, t), first)| {
                let second = self.d2.get(&(s + 2, t.checked_sub(1)?))?;
                Some(((s, t), second.compose(first)))
            })
            .collect()
    }

    pub fn d2_squares_zero(&self) -> bool {
        self.d2_squares().iter().all(|(_, m)| m.is_zero_in(self.coefficients))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRanks {
    /// Total degree -> rank, for every degree `0..=max_total_degree`.
    pub ranks: BTreeMap<usize, usize>,
    /// Nonzero ranks per bidegree `(s, t)`.
    pub bidegrees: BTreeMap<(usize, usize), usize>,
}

impl GradedRanks {
    pub fn as_vec(&self) -> Vec<usize> {
        self.ranks.values().copied().collect()
    }
}

pub fn e3_ranks(page: &E2Page) -> Result<GradedRanks, SpectralError> {
    let rank_of: BTreeMap<(usize, usize), usize> = with_pool(page.jobs, || {
        page.d2
            .par_iter()
            .map(|(&k, m)| (k, m.rank(page.coefficients)))
            .collect()
    })?;
    let mut ranks: BTreeMap<usize, usize> = (0..=page.max_total_degree).map(|d| (d, 0)).collect();
    let mut bidegrees = BTreeMap::new();
    for (&(s, t), cell) in &page.cells {
        if s + t > page.max_total_degree {
            continue;
        }
        let out = rank_of.get(&(s, t)).copied().unwrap_or(0);
        let incoming = if s >= 2 {
            rank_of.get(&(s - 2, t + 1)).copied().unwrap_or(0)
        } else {
            0
        };
        let h = cell.dim() - out - incoming;
        if h > 0 {
            bidegrees.insert((s, t), h);
            *ranks.get_mut(&(s + t)).unwrap() += h;
        }
    }
    Ok(GradedRanks { ranks, bidegrees })
}

/// Degrees `d_i` with `prod (1 + q + ... + q^{d_i - 1}) = sum_w q^l(w)`,
/// ascending.
pub fn weyl_degrees(wg: &WeylGroup) -> Result<Vec<u32>, SpectralError> {
    let counts: Vec<i128> = wg.length_counts().into_iter().map(|c| c as i128).collect();
    // multiply by (1 - q)^n to get prod (1 - q^{d_i})
    let mut poly = counts;
    for _ in 0..wg.rank() {
        let mut next = vec![0i128; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c;
        }
        poly = next;
    }
    let mut degrees = Vec::new();
    loop {
        while poly.last() == Some(&0) {
            poly.pop();
        }
        if poly == [1] {
            break;
        }
        let d = (1..poly.len()).find(|&k| poly[k] != 0).ok_or(SpectralError::Factorization)?;
        if poly[d] >= 0 {
            return Err(SpectralError::Factorization);
        }
        // P = Q (1 - q^d)  <=>  Q[k] = P[k] + Q[k - d]
        let qlen = poly.len() - d;
        let mut quotient = vec![0i128; qlen];
        for k in 0..qlen {
            quotient[k] = poly[k] + if k >= d { quotient[k - d] } else { 0 };
        }
        let mut check = vec![0i128; poly.len()];
        for (k, &c) in quotient.iter().enumerate() {
            check[k] += c;
            check[k + d] -= c;
        }
        if check != poly {
            return Err(SpectralError::Factorization);
        }
        poly = quotient;
        degrees.push(d as u32);
        if degrees.len() > wg.rank() {
            return Err(SpectralError::Factorization);
        }
    }
    if degrees.len() != wg.rank() {
        return Err(SpectralError::Factorization);
    }
    let product: u128 = degrees.iter().map(|&d| d as u128).product();
    if product != wg.len() as u128 {
        return Err(SpectralError::Factorization);
    }
    degrees.sort_unstable();
    Ok(degrees)
}

/// Poincaré series of an exterior algebra on generators of degrees
/// `2 d_i - 1`, padded to `max_degree`.
pub fn exterior_poincare(weyl_degrees: &[u32], max_degree: usize) -> Vec<usize> {
    let mut poly = vec![0usize; max_degree + 1];
    poly[0] = 1;
    for &d in weyl_degrees {
        let g = 2 * d as usize - 1;
        for k in (g..=max_degree).rev() {
            poly[k] += poly[k - g];
        }
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{Family, LieType};
    use std::sync::Arc;

    fn rs(f: Family, n: usize) -> Arc<RootSystem> {
        Arc::new(RootSystem::new(LieType::new(f, n).unwrap()))
    }

    fn sc(f: Family, n: usize) -> GroupSpec {
        GroupSpec::simply_connected(rs(f, n))
    }

    fn adj(f: Family, n: usize) -> GroupSpec {
        GroupSpec::adjoint(rs(f, n))
    }

    fn e3(g: &GroupSpec, c: Coefficients) -> Vec<usize> {
        let page = build_e2(g, c, None, PageOptions::default()).unwrap();
        e3_ranks(&page).unwrap().as_vec()
    }

    fn exterior_for(g: &GroupSpec) -> Vec<usize> {
        let wg = weyl_group(g.root_system(), DEFAULT_WEYL_CAP).unwrap();
        exterior_poincare(&weyl_degrees(&wg).unwrap(), g.root_system().lie_type().group_dimension())
    }

    // one-line notation of s_{a1} ... s_{ak} in S_{n+1}
    fn permutation(word: &[usize], n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..=n).collect();
        for &a in word {
            p.swap(a - 1, a);
        }
        p
    }

    fn inversions(p: &[usize]) -> usize {
        (0..p.len())
            .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count()
    }

    #[test]
    fn weyl_orders_and_lengths() {
        for t in LieType::all_up_to(4) {
            let r = RootSystem::new(t);
            let wg = weyl_group(&r, DEFAULT_WEYL_CAP).unwrap();
            assert_eq!(wg.len() as u128, t.weyl_order(), "{t}");
            assert_eq!(wg.max_length(), t.root_count() / 2, "{t}");
            assert_eq!(wg.of_length(wg.max_length()).len(), 1, "{t}");
            let counts = wg.length_counts();
            let rev: Vec<_> = counts.iter().rev().copied().collect();
            assert_eq!(counts, rev, "{t}");
        }
    }

    #[test]
    fn words_are_lex_least_and_reduced() {
        let r = rs(Family::B, 3);
        let wg = weyl_group(&r, DEFAULT_WEYL_CAP).unwrap();
        for (k, w) in wg.elements().iter().enumerate() {
            assert_eq!(w.word.len(), w.length);
            assert_eq!(wg.find_word(&w.word), Some(k));
        }
        let a2 = weyl_group(&rs(Family::A, 2), DEFAULT_WEYL_CAP).unwrap();
        let words: Vec<_> = a2.elements().iter().map(|w| w.word.clone()).collect();
        assert_eq!(words, vec![vec![], vec![1], vec![2], vec![1, 2], vec![2, 1], vec![1, 2, 1]]);
    }

    #[test]
    fn cap_refusal_names_order() {
        let err = weyl_group(&rs(Family::E, 6), DEFAULT_WEYL_CAP).unwrap_err();
        assert_eq!(
            err,
            SpectralError::CapExceeded {
                lie_type: "E6".into(),
                order: 51840,
                cap: 2000
            }
        );
        assert!(err.to_string().contains("51840"));
    }

    #[test]
    fn a2_chevalley() {
        let wg = weyl_group(&rs(Family::A, 2), DEFAULT_WEYL_CAP).unwrap();
        let s1 = wg.find_word(&[1]).unwrap();
        let s2 = wg.find_word(&[2]).unwrap();
        let s12 = wg.find_word(&[1, 2]).unwrap();
        let s21 = wg.find_word(&[2, 1]).unwrap();
        assert_eq!(chevalley_multiply(&wg, 0, s1), vec![(1, s21)]);
        let mut both = vec![(1, s12), (1, s21)];
        both.sort_by_key(|&(_, t)| t);
        assert_eq!(chevalley_multiply(&wg, 0, s2), both);
        assert_eq!(chevalley_multiply(&wg, 0, 0), vec![(1, s1)]);
    }

    #[test]
    fn type_a_matches_monk() {
        for n in 1..=4 {
            let wg = weyl_group(&rs(Family::A, n), DEFAULT_WEYL_CAP).unwrap();
            let perms: Vec<Vec<usize>> = wg.elements().iter().map(|w| permutation(&w.word, n)).collect();
            for (w, p) in perms.iter().enumerate() {
                assert_eq!(inversions(p), wg.element(w).length);
                for k in 0..n {
                    let mut expected = Vec::new();
                    for i in 0..=k {
                        for j in k + 1..=n {
                            let mut q = p.clone();
                            q.swap(i, j);
                            if inversions(&q) == inversions(p) + 1 {
                                expected.push(q);
                            }
                        }
                    }
                    expected.sort();
                    let mut got: Vec<Vec<usize>> = chevalley_multiply(&wg, k, w)
                        .into_iter()
                        .map(|(c, t)| {
                            assert_eq!(c, 1);
                            perms[t].clone()
                        })
                        .collect();
                    got.sort();
                    assert_eq!(got, expected, "A{n} k={k} w={:?}", wg.element(w).word);
                }
            }
        }
    }

    #[test]
    fn degrees() {
        let cases: [(Family, usize, &[u32]); 7] = [
            (Family::A, 1, &[2]),
            (Family::A, 3, &[2, 3, 4]),
            (Family::B, 3, &[2, 4, 6]),
            (Family::C, 4, &[2, 4, 6, 8]),
            (Family::D, 4, &[2, 4, 4, 6]),
            (Family::G, 2, &[2, 6]),
            (Family::F, 4, &[2, 6, 8, 12]),
        ];
        for (f, n, d) in cases {
            let wg = weyl_group(&rs(f, n), DEFAULT_WEYL_CAP).unwrap();
            assert_eq!(weyl_degrees(&wg).unwrap(), d, "{f}{n}");
        }
    }

    #[test]
    fn su2_and_pso3() {
        assert_eq!(e3(&sc(Family::A, 1), Coefficients::Rational), vec![1, 0, 0, 1]);
        assert_eq!(e3(&adj(Family::A, 1), Coefficients::Rational), vec![1, 0, 0, 1]);
        // d2 vanishes mod 2 for SO(3)
        assert_eq!(e3(&adj(Family::A, 1), Coefficients::ModP(2)), vec![1, 1, 1, 1]);
        assert_eq!(e3(&sc(Family::A, 1), Coefficients::ModP(2)), vec![1, 0, 0, 1]);
    }

    #[test]
    fn page_dimensions() {
        for g in [sc(Family::A, 2), adj(Family::B, 2), sc(Family::G, 2), adj(Family::A, 3)] {
            let page = build_e2(&g, Coefficients::Rational, None, PageOptions::default()).unwrap();
            let total: usize = page
                .cells
                .iter()
                .filter(|(&(s, t), _)| s + t <= page.max_total_degree)
                .map(|(_, c)| c.dim())
                .sum();
            let n = g.rank();
            assert_eq!(total as u128, g.root_system().lie_type().weyl_order() << n);
        }
    }

    #[test]
    fn d2_squares_to_zero() {
        let groups = [
            sc(Family::A, 3),
            adj(Family::A, 3),
            adj(Family::B, 3),
            adj(Family::C, 3),
            sc(Family::G, 2),
            adj(Family::D, 4),
        ];
        for g in &groups {
            for c in [Coefficients::Rational, Coefficients::ModP(2), Coefficients::ModP(3)] {
                let page = build_e2(g, c, None, PageOptions::default()).unwrap();
                assert!(page.d2_squares_zero(), "{} {c}", g.label());
                // the composite is zero over Z before reduction, too
                if c == Coefficients::Rational {
                    assert!(!page.d2.is_empty());
                }
            }
        }
    }

    #[test]
    fn rational_e3_is_exterior() {
        let groups = [
            sc(Family::A, 1),
            sc(Family::A, 2),
            sc(Family::A, 3),
            sc(Family::C, 2),
            sc(Family::G, 2),
            adj(Family::A, 1),
            adj(Family::A, 2),
            adj(Family::B, 3),
        ];
        for g in &groups {
            assert_eq!(e3(g, Coefficients::Rational), exterior_for(g), "{}", g.label());
        }
    }

    #[test]
    fn sp3_mod_2_is_exterior() {
        let g = sc(Family::C, 3);
        let expected = exterior_poincare(&[2, 4, 6], 21);
        assert_eq!(e3(&g, Coefficients::ModP(2)), expected);
    }

    #[test]
    fn su_n_mod_p_is_exterior() {
        for p in [2, 3, 5] {
            assert_eq!(e3(&sc(Family::A, 3), Coefficients::ModP(p)), exterior_for(&sc(Family::A, 3)));
        }
    }

    #[test]
    fn bottom_row_rank_is_tau_rank() {
        for (g, p) in [(adj(Family::C, 3), 2), (adj(Family::A, 2), 3), (adj(Family::B, 3), 2)] {
            let page = build_e2(&g, Coefficients::ModP(p), Some(3), PageOptions::default()).unwrap();
            let kernel = crate::transgression::modp_analysis(&g, p).unwrap().kernel.dim();
            let r = page.d2[&(0, 1)].rank(page.coefficients);
            assert_eq!(r, g.rank() - kernel, "{}", g.label());
        }
    }

    #[test]
    fn euler_characteristic_preserved() {
        for (g, c) in [
            (adj(Family::C, 3), Coefficients::ModP(2)),
            (adj(Family::A, 2), Coefficients::ModP(3)),
            (sc(Family::B, 3), Coefficients::Rational),
        ] {
            let page = build_e2(&g, c, None, PageOptions::default()).unwrap();
            let chi2: i64 = page
                .cells
                .iter()
                .filter(|(&(s, t), _)| s + t <= page.max_total_degree)
                .map(|(&(s, t), cell)| if (s + t) % 2 == 0 { cell.dim() as i64 } else { -(cell.dim() as i64) })
                .sum();
            let chi3: i64 = e3_ranks(&page)
                .unwrap()
                .ranks
                .iter()
                .map(|(&d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
                .sum();
            assert_eq!(chi2, chi3);
            assert_eq!(chi2, 0);
        }
    }

    #[test]
    fn truncation_agrees_with_full_page() {
        let g = adj(Family::B, 3);
        let full = e3_ranks(&build_e2(&g, Coefficients::ModP(2), None, PageOptions::default()).unwrap()).unwrap();
        let cut = e3_ranks(&build_e2(&g, Coefficients::ModP(2), Some(7), PageOptions::default()).unwrap()).unwrap();
        assert_eq!(&full.as_vec()[..8], cut.as_vec().as_slice());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let g = adj(Family::C, 3);
        let run = |jobs| {
            let opts = PageOptions { jobs, ..Default::default() };
            e3_ranks(&build_e2(&g, Coefficients::ModP(2), None, opts).unwrap()).unwrap()
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn input_errors() {
        let g = sc(Family::A, 2);
        assert_eq!(
            build_e2(&g, Coefficients::ModP(4), None, PageOptions::default()).unwrap_err(),
            SpectralError::NotPrime(4)
        );
        assert_eq!(
            build_e2(&g, Coefficients::Rational, Some(9), PageOptions::default()).unwrap_err(),
            SpectralError::DegreeTooLarge { requested: 9, dim: 8 }
        );
    }
}
