//! Truncated Fock-basis linear algebra for one- and two-mode states.
//!
//! Two-mode basis kets `|m, n>` (mode A first) are addressed by the composite
//! index `m * n_max + n`. Every module in the crate uses this convention.
//!
//! Two-mode states are stored sparsely. The states handled here couple only
//! small subsets of basis kets (the `|m, m>` ladder, or `{|m, n>, |n, m>}`
//! pairs after a partial transpose), so the eigensolver splits the matrix
//! into connected blocks and diagonalizes each block densely.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues in `[-NEG_EIGENVALUE_TOL, 0)` are treated as truncation noise
/// and clipped to zero; anything more negative is rejected.
pub const NEG_EIGENVALUE_TOL: f64 = 1e-10;

/// Absolute tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Slack allowed in the partial-sum comparisons of [`is_more_mixed`].
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Single-mode basis dimension of a truncated Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidCutoff { n_max });
        }
        Ok(FockCutoff(n_max))
    }

    pub fn n_max(self) -> usize {
        self.0
    }

    pub fn two_mode_dim(self) -> usize {
        self.0 * self.0
    }

    /// Composite index of `|m, n>`.
    #[inline]
    pub fn index(self, m: usize, n: usize) -> usize {
        debug_assert!(m < self.0 && n < self.0);
        m * self.0 + n
    }

    /// Inverse of [`FockCutoff::index`].
    #[inline]
    pub fn labels(self, index: usize) -> (usize, usize) {
        (index / self.0, index % self.0)
    }
}

/// Which mode an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
}

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts `values` descending after clipping entries in `[-1e-10, 0)` to zero.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        for v in values.iter_mut() {
            if !v.is_finite() || *v < -NEG_EIGENVALUE_TOL {
                return Err(Error::InvalidSpectrum { value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }

    /// Spectrum with trailing zeros dropped.
    pub fn nonzero(&self) -> Spectrum {
        Spectrum {
            values: self.values.iter().copied().filter(|&v| v > 0.0).collect(),
        }
    }
}

/// `-x ln x` with `0 ln 0 = 0`.
#[inline]
pub fn entropy_term(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(spectrum: &Spectrum) -> f64 {
    spectrum
        .values
        .iter()
        .map(|&v| entropy_term(v))
        .sum::<f64>()
        .max(0.0)
}

/// Shannon entropy of a probability table in nats.
pub fn shannon_entropy(probabilities: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for (index, &value) in probabilities.iter().enumerate() {
        if value < 0.0 || !value.is_finite() {
            return Err(Error::InvalidProbability { index, value });
        }
        h += entropy_term(value);
    }
    Ok(h)
}

/// Eigenvalues of the mixture `z1 |phi1><phi1| + z2 |phi2><phi2|` of two
/// normalized pure states with squared overlap `overlap_sq`.
pub fn two_component_mixture_spectrum(z1: f64, z2: f64, overlap_sq: f64) -> Result<(f64, f64)> {
    crate::error::check_domain("zeta1", z1, z1 >= 0.0, "[0, 1]")?;
    crate::error::check_domain("zeta2", z2, z2 >= 0.0, "[0, 1]")?;
    crate::error::check_domain(
        "zeta1 + zeta2",
        z1 + z2,
        ((z1 + z2) - 1.0).abs() <= 1e-12,
        "1 within 1e-12",
    )?;
    crate::error::check_domain(
        "overlap_sq",
        overlap_sq,
        (-1e-12..=1.0 + 1e-12).contains(&overlap_sq),
        "[0, 1]",
    )?;
    Ok(mixture_eigenvalues(
        z1 * z2,
        1.0 - overlap_sq.clamp(0.0, 1.0),
    ))
}

/// `(nu1, nu2)` from the product `z1 z2` and `1 - |<phi1|phi2>|^2`.
///
/// The small eigenvalue is evaluated as `d / (2 (1 + sqrt(1 - d)))` to avoid
/// cancellation when `d = 4 z1 z2 (1 - overlap)` is tiny.
#[inline]
pub(crate) fn mixture_eigenvalues(z1z2: f64, one_minus_overlap: f64) -> (f64, f64) {
    let d = (4.0 * z1z2 * one_minus_overlap).clamp(0.0, 1.0);
    let root = (1.0 - d).sqrt();
    let small = d / (2.0 * (1.0 + root));
    (1.0 - small, small)
}

/// `true` iff `a` is more mixed than `b`: every partial sum of the
/// descending eigenvalues of `a` is at most the matching partial sum of `b`.
pub fn is_more_mixed(a: &Spectrum, b: &Spectrum) -> bool {
    let len = a.len().max(b.len());
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    for k in 0..len {
        sum_a += a.values.get(k).copied().unwrap_or(0.0);
        sum_b += b.values.get(k).copied().unwrap_or(0.0);
        if sum_a > sum_b + MAJORIZATION_TOL {
            return false;
        }
    }
    true
}

fn check_hermitian(m: &DMatrix<Complex64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotHermitian {
            row: m.nrows(),
            col: m.ncols(),
            deviation: f64::INFINITY,
        });
    }
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            let deviation = (m[(i, j)] - m[(j, i)].conj()).norm();
            if deviation > HERMITIAN_TOL {
                return Err(Error::NotHermitian {
                    row: i,
                    col: j,
                    deviation,
                });
            }
        }
    }
    Ok(())
}

/// Raw (unclipped) eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut values = dense_eigenvalues(m);
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Spectrum of a dense Hermitian matrix.
pub fn eig_spectrum(m: &DMatrix<Complex64>) -> Result<Spectrum> {
    Spectrum::new(hermitian_eigenvalues(m)?)
}

fn dense_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    if n == 1 {
        return vec![m[(0, 0)].re];
    }
    if m.iter().all(|z| z.im == 0.0) {
        let real = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
        SymmetricEigen::new(real)
            .eigenvalues
            .iter()
            .copied()
            .collect()
    } else {
        let herm = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }
}

/// Single-mode density matrix on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OneModeState {
    matrix: DMatrix<Complex64>,
}

impl OneModeState {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        check_hermitian(&matrix)?;
        Ok(OneModeState { matrix })
    }

    pub fn from_diagonal(diagonal: &[f64]) -> Self {
        let n = diagonal.len();
        let mut matrix = DMatrix::zeros(n, n);
        for (i, &d) in diagonal.iter().enumerate() {
            matrix[(i, i)] = Complex64::new(d, 0.0);
        }
        OneModeState { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        if self.is_diagonal(0.0) {
            return Spectrum::new(self.diagonal());
        }
        eig_spectrum(&self.matrix)
    }

    pub fn entropy(&self) -> Result<f64> {
        Ok(self.spectrum()?.entropy())
    }
}

/// Two-mode density matrix on the truncated basis `|m, n>`, `m, n < n_max`.
///
/// Only nonzero entries are stored, keyed by composite `(row, col)` indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    cutoff: FockCutoff,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl TwoModeState {
    pub fn zeros(cutoff: FockCutoff) -> Self {
        TwoModeState {
            cutoff,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a state from composite-index entries; duplicate keys are summed.
    pub fn from_entries<I>(cutoff: FockCutoff, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Complex64)>,
    {
        let dim = cutoff.two_mode_dim();
        let mut state = TwoModeState::zeros(cutoff);
        for ((row, col), value) in entries {
            if row >= dim || col >= dim {
                return Err(Error::Domain {
                    name: "composite index",
                    value: row.max(col) as f64,
                    domain: "< n_max^2",
                });
            }
            state.add(row, col, value);
        }
        state.check_hermitian()?;
        Ok(state)
    }

    pub(crate) fn add(&mut self, row: usize, col: usize, value: Complex64) {
        if value == Complex64::new(0.0, 0.0) {
            return;
        }
        *self
            .entries
            .entry((row, col))
            .or_insert(Complex64::new(0.0, 0.0)) += value;
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn n_max(&self) -> usize {
        self.cutoff.n_max()
    }

    pub fn dim(&self) -> usize {
        self.cutoff.two_mode_dim()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Entry `<m1, n1| rho |m2, n2>`.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> Complex64 {
        let row = self.cutoff.index(bra.0, bra.1);
        let col = self.cutoff.index(ket.0, ket.1);
        self.get(row, col)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .get(&(row, col))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|((r, c), _)| r == c)
            .map(|(_, v)| v.re)
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> TwoModeState {
        TwoModeState {
            cutoff: self.cutoff,
            entries: self
                .entries
                .iter()
                .map(|(&k, &v)| (k, v * factor))
                .collect(),
        }
    }

    fn check_hermitian(&self) -> Result<()> {
        for (&(row, col), &value) in &self.entries {
            let deviation = (value - self.get(col, row).conj()).norm();
            if deviation > HERMITIAN_TOL {
                return Err(Error::NotHermitian {
                    row,
                    col,
                    deviation,
                });
            }
        }
        Ok(())
    }

    /// Checks Hermiticity, a trace within `eps_tail` of one and eigenvalues
    /// no lower than `-1e-10`.
    pub fn validate(&self, eps_tail: f64) -> Result<()> {
        self.check_hermitian()?;
        let deficit = (self.trace() - 1.0).abs();
        if deficit > eps_tail {
            return Err(Error::Truncation {
                context: "state trace",
                deviation: deficit,
                tolerance: eps_tail,
                n_max: self.n_max(),
            });
        }
        let min = self.min_eigenvalue()?;
        if min < -NEG_EIGENVALUE_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (&(r, c), &v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Groups of composite indices connected by nonzero off-diagonal entries.
    fn blocks(&self) -> Vec<Vec<usize>> {
        let dim = self.dim();
        let mut parent: Vec<usize> = (0..dim).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut touched = vec![false; dim];
        for &(r, c) in self.entries.keys() {
            touched[r] = true;
            touched[c] = true;
            if r != c {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in (0..dim).filter(|&i| touched[i]) {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Raw eigenvalues (negative values kept), sorted descending, one per
    /// basis ket of the truncated space.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.check_hermitian()?;
        let mut values = Vec::with_capacity(self.dim());
        let mut covered = 0;
        for block in self.blocks() {
            covered += block.len();
            if block.len() == 1 {
                values.push(self.get(block[0], block[0]).re);
                continue;
            }
            let n = block.len();
            let sub = DMatrix::from_fn(n, n, |i, j| self.get(block[i], block[j]));
            values.extend(dense_eigenvalues(&sub));
        }
        values.extend(std::iter::repeat_n(0.0, self.dim() - covered));
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.last().copied().unwrap_or(0.0))
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::new(self.eigenvalues()?)
    }

    pub fn entropy(&self) -> Result<f64> {
        Ok(self.spectrum()?.entropy())
    }

    /// Reduced state of the mode that is kept after tracing out `traced`.
    pub fn partial_trace(&self, traced: Mode) -> OneModeState {
        let n = self.n_max();
        let mut m = DMatrix::zeros(n, n);
        for (&(r, c), &v) in &self.entries {
            let (ra, rb) = self.cutoff.labels(r);
            let (ca, cb) = self.cutoff.labels(c);
            match traced {
                Mode::A if ra == ca => m[(rb, cb)] += v,
                Mode::B if rb == cb => m[(ra, ca)] += v,
                _ => {}
            }
        }
        OneModeState { matrix: m }
    }

    /// Partial transpose with respect to `mode`.
    pub fn partial_transpose(&self, mode: Mode) -> TwoModeState {
        let cutoff = self.cutoff;
        let entries = self
            .entries
            .iter()
            .map(|(&(r, c), &v)| {
                let (ra, rb) = cutoff.labels(r);
                let (ca, cb) = cutoff.labels(c);
                let key = match mode {
                    Mode::A => (cutoff.index(ca, rb), cutoff.index(ra, cb)),
                    Mode::B => (cutoff.index(ra, cb), cutoff.index(ca, rb)),
                };
                (key, v)
            })
            .collect();
        TwoModeState { cutoff, entries }
    }

    /// Exchanges the roles of modes A and B.
    pub fn swap_modes(&self) -> TwoModeState {
        let cutoff = self.cutoff;
        let swap = |i: usize| {
            let (a, b) = cutoff.labels(i);
            cutoff.index(b, a)
        };
        TwoModeState {
            cutoff,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), &v)| ((swap(r), swap(c)), v))
                .collect(),
        }
    }

    /// Joint photon-number distribution `p_AB(m, n) = <m n| rho |m n>`,
    /// laid out by composite index.
    pub fn joint_photon_distribution(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.dim()];
        for (&(r, c), &v) in &self.entries {
            if r == c {
                p[r] = v.re;
            }
        }
        p
    }

    /// Unnormalized conditional state of mode A after detecting `m` photons
    /// in mode B: `<m|_B rho |m>_B`.
    pub fn conditional_block_b(&self, m: usize) -> DMatrix<Complex64> {
        let n = self.n_max();
        let mut block = DMatrix::zeros(n, n);
        for (&(r, c), &v) in &self.entries {
            let (ra, rb) = self.cutoff.labels(r);
            let (ca, cb) = self.cutoff.labels(c);
            if rb == m && cb == m {
                block[(ra, ca)] += v;
            }
        }
        block
    }

    /// Maximum entrywise distance to `other` (same cutoff assumed).
    pub fn max_abs_diff(&self, other: &TwoModeState) -> f64 {
        let mut keys: Vec<_> = self.entries.keys().copied().collect();
        keys.extend(other.entries.keys().copied());
        keys.into_iter()
            .map(|(r, c)| (self.get(r, c) - other.get(r, c)).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn entropy_of_pure_and_mixed_qubit() {
        assert_eq!(von_neumann_entropy(&Spectrum::new(vec![1.0]).unwrap()), 0.0);
        let half = Spectrum::new(vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(
            von_neumann_entropy(&half),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn entropy_of_rho0_eigenvalues() {
        // -sum nu ln nu evaluated by hand for nu = (1 +- sqrt(0.75)) / 2
        let s = Spectrum::new(vec![0.9330127, 0.0669873]).unwrap();
        let expected = -(0.9330127f64 * 0.9330127f64.ln() + 0.0669873f64 * 0.0669873f64.ln());
        assert_abs_diff_eq!(von_neumann_entropy(&s), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(von_neumann_entropy(&s), 0.2457753667, epsilon = 1e-8);
    }

    #[test]
    fn small_negative_eigenvalues_are_clipped() {
        let s = Spectrum::new(vec![1.0, -5e-11]).unwrap();
        assert_eq!(s.values(), &[1.0, 0.0]);
        assert!(matches!(
            Spectrum::new(vec![1.0, -1e-9]),
            Err(Error::InvalidSpectrum { .. })
        ));
    }

    #[test]
    fn shannon_entropy_cases() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(
            shannon_entropy(&[0.25; 4]).unwrap(),
            4f64.ln(),
            epsilon = 1e-15
        );
        assert!(shannon_entropy(&[1.1, -0.1]).is_err());
    }

    #[test]
    fn mixture_spectrum_examples() {
        assert_eq!(
            two_component_mixture_spectrum(1.0, 0.0, 0.3).unwrap(),
            (1.0, 0.0)
        );
        let (a, b) = two_component_mixture_spectrum(0.5, 0.5, 1.0).unwrap();
        assert_eq!((a, b), (1.0, 0.0));
        let (a, b) = two_component_mixture_spectrum(0.5, 0.5, 0.25).unwrap();
        assert_abs_diff_eq!(a, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.25, epsilon = 1e-15);
        assert!(two_component_mixture_spectrum(0.7, 0.7, 0.5).is_err());
        assert!(two_component_mixture_spectrum(0.5, 0.5, 1.5).is_err());
        assert!(two_component_mixture_spectrum(-0.1, 1.1, 0.5).is_err());
    }

    #[test]
    fn majorization_examples() {
        let a = Spectrum::new(vec![0.5, 0.5]).unwrap();
        let b = Spectrum::new(vec![1.0, 0.0]).unwrap();
        assert!(is_more_mixed(&a, &a));
        assert!(is_more_mixed(&a, &b));
        assert!(!is_more_mixed(&b, &a));
    }

    #[test]
    fn eig_spectrum_diagonal_and_non_hermitian() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.1), c(0.6), c(0.3)]));
        assert_eq!(eig_spectrum(&m).unwrap().values(), &[0.6, 0.3, 0.1]);
        let mut bad = m.clone();
        bad[(0, 1)] = c(0.2);
        assert!(matches!(
            eig_spectrum(&bad),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eig_reconstruction_residual() {
        let n = 12;
        let m = DMatrix::from_fn(n, n, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            let im = if i < j {
                0.1 * (a - b)
            } else if i > j {
                0.1 * (b - a)
            } else {
                0.0
            };
            Complex64::new(1.0 / (1.0 + a + b), im)
        });
        let eig = SymmetricEigen::new(m.clone());
        let rebuilt = eig.recompose();
        let residual = (&rebuilt - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(residual < 1e-9 * n as f64);
        let values = hermitian_eigenvalues(&m).unwrap();
        let trace: f64 = m.diagonal().iter().map(|z| z.re).sum();
        assert_abs_diff_eq!(values.iter().sum::<f64>(), trace, epsilon = 1e-12);
    }

    fn vacuum(cutoff: FockCutoff) -> TwoModeState {
        TwoModeState::from_entries(cutoff, [((0, 0), c(1.0))]).unwrap()
    }

    #[test]
    fn partial_trace_of_vacuum() {
        let cutoff = FockCutoff::new(3).unwrap();
        let reduced = vacuum(cutoff).partial_trace(Mode::A);
        assert_eq!(reduced.diagonal(), vec![1.0, 0.0, 0.0]);
        assert!(reduced.is_diagonal(0.0));
    }

    #[test]
    fn partial_transpose_of_product_keeps_spectrum() {
        let cutoff = FockCutoff::new(3).unwrap();
        // (|0>+|1>)/sqrt2 on A times |1> on B
        let a = [(0usize, 0usize, 0.5), (0, 1, 0.5), (1, 0, 0.5), (1, 1, 0.5)];
        let entries = a
            .iter()
            .map(|&(i, j, v)| ((cutoff.index(i, 1), cutoff.index(j, 1)), c(v)));
        let rho = TwoModeState::from_entries(cutoff, entries).unwrap();
        let pt = rho.partial_transpose(Mode::A);
        assert_eq!(rho.eigenvalues().unwrap(), pt.eigenvalues().unwrap());
    }

    #[test]
    fn cutoff_rejects_small_values() {
        assert!(FockCutoff::new(1).is_err());
        let c = FockCutoff::new(4).unwrap();
        assert_eq!(c.labels(c.index(3, 2)), (3, 2));
    }

    /// Random Hermitian positive matrix on a 3x3 two-mode space, as sparse entries.
    fn random_state(seed_entries: &[f64]) -> TwoModeState {
        let cutoff = FockCutoff::new(3).unwrap();
        let dim = 9;
        let g = DMatrix::from_fn(dim, dim, |i, j| {
            let k = (i * dim + j) % seed_entries.len();
            Complex64::new(
                seed_entries[k],
                seed_entries[(k + 7) % seed_entries.len()] * 0.5,
            )
        });
        let mut rho = &g * g.adjoint();
        let tr: f64 = rho.diagonal().iter().map(|z| z.re).sum();
        rho /= Complex64::new(tr, 0.0);
        let entries = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), rho[(i, j)]));
        TwoModeState::from_entries(cutoff, entries).unwrap()
    }

    proptest! {
        #[test]
        fn entropy_invariant_under_label_permutation(
            seed in prop::collection::vec(-1.0f64..1.0, 11),
            perm in Just((0..9usize).collect::<Vec<_>>()).prop_shuffle(),
        ) {
            let rho = random_state(&seed);
            let permuted = TwoModeState::from_entries(
                rho.cutoff(),
                rho.entries().map(|((r, c), v)| ((perm[r], perm[c]), v)),
            ).unwrap();
            let s1 = rho.entropy().unwrap();
            let s2 = permuted.entropy().unwrap();
            prop_assert!((s1 - s2).abs() < 1e-9);
        }

        #[test]
        fn partial_trace_preserves_trace(seed in prop::collection::vec(-1.0f64..1.0, 11)) {
            let rho = random_state(&seed);
            for mode in [Mode::A, Mode::B] {
                let reduced = rho.partial_trace(mode);
                prop_assert!((reduced.trace() - rho.trace()).abs() < 1e-12);
                prop_assert!(OneModeState::from_matrix(reduced.matrix().clone()).is_ok());
            }
        }

        #[test]
        fn partial_transpose_is_an_involution(seed in prop::collection::vec(-1.0f64..1.0, 11)) {
            let rho = random_state(&seed);
            let twice = rho.partial_transpose(Mode::A).partial_transpose(Mode::A);
            prop_assert!(rho.max_abs_diff(&twice) <= 1e-14);
            let pt = rho.partial_transpose(Mode::A);
            prop_assert!((pt.trace() - rho.trace()).abs() < 1e-14);
            prop_assert!(OneModeState::from_matrix(pt.to_dense()).is_ok());
        }

        #[test]
        fn majorization_implies_entropy_order(
            raw_a in prop::collection::vec(0.0f64..1.0, 1..8),
            raw_b in prop::collection::vec(0.0f64..1.0, 1..8),
        ) {
            let norm = |v: Vec<f64>| {
                let s: f64 = v.iter().sum::<f64>().max(1e-300);
                Spectrum::new(v.into_iter().map(|x| x / s).collect()).unwrap()
            };
            let (a, b) = (norm(raw_a), norm(raw_b));
            if is_more_mixed(&a, &b) {
                prop_assert!(a.entropy() >= b.entropy() - 1e-12);
            }
        }

        #[test]
        fn mixture_spectrum_matches_gram_construction(
            z1 in 0.0f64..1.0,
            theta in 0.0f64..std::f64::consts::FRAC_PI_2,
        ) {
            let z2 = 1.0 - z1;
            // phi1 = |0>, phi2 = cos(theta)|0> + sin(theta)|1>
            let (ct, st) = (theta.cos(), theta.sin());
            let m = DMatrix::from_row_slice(2, 2, &[
                c(z1 + z2 * ct * ct), c(z2 * ct * st),
                c(z2 * ct * st), c(z2 * st * st),
            ]);
            let direct = hermitian_eigenvalues(&m).unwrap();
            let (n1, n2) = two_component_mixture_spectrum(z1, z2, ct * ct).unwrap();
            prop_assert!((direct[0] - n1).abs() < 1e-12);
            prop_assert!((direct[1] - n2).abs() < 1e-12);
        }
    }
}
