//! Exact-diagonalization oracle for small rings.
//!
//! Works directly in the spin basis, independent of the fermion mapping used
//! by [`crate::chain`]. The Hamiltonian is restricted to the sector of even
//! spin-flip parity `Π σz = +1`, which contains the state described by the
//! antiperiodic mode product. All off-diagonal elements are `-1`, so the
//! sector ground state is non-degenerate with a positive amplitude on every
//! basis state; a uniform Lanczos start vector therefore always overlaps it.

use crate::error::{FidelityError, Result};
use nalgebra::{DMatrix, SymmetricEigen};

pub const MAX_ED_SIZE: usize = 12;
pub const MIN_ED_FIELD: f64 = 0.3;

const DEGENERACY_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-13;
const MAX_KRYLOV: usize = 200;
const MAX_RESTARTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdSolver {
    /// Matrix-free Lanczos with full reorthogonalisation.
    #[default]
    Lanczos,
    /// Dense symmetric eigendecomposition of the whole sector.
    Dense,
}

/// The even-parity block of `H(g) = -Σ σx_i σx_{i+1} - g Σ σz_i` on a ring.
#[derive(Debug, Clone)]
pub struct EvenSector {
    n: usize,
    states: Vec<u32>,
    index: Vec<u32>,
}

impl EvenSector {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(FidelityError::domain(format!(
                "system size must be even and at least 2, got N = {n}"
            )));
        }
        if n > MAX_ED_SIZE {
            return Err(FidelityError::Resource(format!(
                "exact diagonalization is limited to N ≤ {MAX_ED_SIZE}, got N = {n}"
            )));
        }
        let full = 1u32 << n;
        let states: Vec<u32> = (0..full).filter(|s| s.count_ones() % 2 == 0).collect();
        let mut index = vec![u32::MAX; full as usize];
        for (i, &s) in states.iter().enumerate() {
            index[s as usize] = i as u32;
        }
        Ok(Self { n, states, index })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// `out = H(g) v`.
    pub fn apply(&self, g: f64, v: &[f64], out: &mut [f64]) {
        let n = self.n;
        for (i, &s) in self.states.iter().enumerate() {
            // Bit set = spin down, σz = -1.
            let mz = n as f64 - 2.0 * s.count_ones() as f64;
            out[i] = -g * mz * v[i];
        }
        for (i, &s) in self.states.iter().enumerate() {
            let vi = v[i];
            for site in 0..n {
                let flip = (1u32 << site) | (1u32 << ((site + 1) % n));
                let j = self.index[(s ^ flip) as usize] as usize;
                out[j] -= vi;
            }
        }
    }

    pub fn dense(&self, g: f64) -> DMatrix<f64> {
        let d = self.dim();
        let mut h = DMatrix::zeros(d, d);
        let mut e = vec![0.0; d];
        let mut col = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            self.apply(g, &e, &mut col);
            h.set_column(j, &nalgebra::DVector::from_column_slice(&col));
            e[j] = 0.0;
        }
        h
    }

    /// Lowest eigenpair of the sector at field `g`.
    pub fn ground_state(&self, g: f64, solver: EdSolver) -> Result<(f64, Vec<f64>)> {
        match solver {
            EdSolver::Dense => self.ground_state_dense(g),
            EdSolver::Lanczos => self.ground_state_lanczos(g),
        }
    }

    fn ground_state_dense(&self, g: f64) -> Result<(f64, Vec<f64>)> {
        let eig = SymmetricEigen::new(self.dense(g));
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let e0 = eig.eigenvalues[order[0]];
        if order.len() > 1 && (eig.eigenvalues[order[1]] - e0).abs() < DEGENERACY_TOL {
            return Err(degenerate(g));
        }
        Ok((e0, eig.eigenvectors.column(order[0]).iter().copied().collect()))
    }

    fn ground_state_lanczos(&self, g: f64) -> Result<(f64, Vec<f64>)> {
        let d = self.dim();
        let mut start = vec![1.0 / (d as f64).sqrt(); d];
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_RESTARTS {
            let (e0, vec, gap) = self.lanczos_pass(g, &start)?;
            if gap < DEGENERACY_TOL {
                return Err(degenerate(g));
            }
            let mut hv = vec![0.0; d];
            self.apply(g, &vec, &mut hv);
            residual = hv
                .iter()
                .zip(&vec)
                .map(|(a, b)| (a - e0 * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= RESIDUAL_TOL * e0.abs().max(1.0) {
                return Ok((e0, vec));
            }
            start = vec;
        }
        Err(FidelityError::numerical("Lanczos did not converge", residual))
    }

    /// One Krylov cycle. Returns the lowest Ritz pair and the distance to the
    /// next Ritz value.
    fn lanczos_pass(&self, g: f64, start: &[f64]) -> Result<(f64, Vec<f64>, f64)> {
        let d = self.dim();
        let m_max = MAX_KRYLOV.min(d);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_max);
        let mut alpha = Vec::with_capacity(m_max);
        let mut beta: Vec<f64> = Vec::with_capacity(m_max);

        let mut q = start.to_vec();
        normalize(&mut q);
        let mut w = vec![0.0; d];
        let mut best = None;

        for j in 0..m_max {
            self.apply(g, &q, &mut w);
            let a = dot(&q, &w);
            alpha.push(a);
            basis.push(q.clone());
            // Full reorthogonalisation, twice.
            for _ in 0..2 {
                for b in &basis {
                    let p = dot(b, &w);
                    w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= p * bi);
                }
            }
            let b_next = norm(&w);
            let exhausted = b_next < 1e-14;
            if !(exhausted || j % 4 == 3 || j + 1 == m_max) {
                beta.push(b_next);
                q = w.iter().map(|x| x / b_next).collect();
                continue;
            }

            let t = tridiagonal(&alpha, &beta);
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..=j).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
            let lo = order[0];
            let e0 = eig.eigenvalues[lo];
            let gap = order.get(1).map_or(f64::INFINITY, |&i| eig.eigenvalues[i] - e0);
            let y = eig.eigenvectors.column(lo);
            let estimate = (b_next * y[j]).abs();
            best = Some((e0, y.iter().copied().collect::<Vec<_>>(), gap));

            let done = estimate <= 0.1 * RESIDUAL_TOL * e0.abs().max(1.0) || exhausted;
            if done || j + 1 == m_max {
                break;
            }
            beta.push(b_next);
            q = w.iter().map(|x| x / b_next).collect();
        }

        let (e0, y, gap) = best.expect("at least one Lanczos step");
        let mut v = vec![0.0; d];
        for (coef, b) in y.iter().zip(&basis) {
            v.iter_mut().zip(b).for_each(|(vi, bi)| *vi += coef * bi);
        }
        normalize(&mut v);
        Ok((e0, v, gap))
    }
}

fn degenerate(g: f64) -> FidelityError {
    FidelityError::Precision(format!(
        "lowest even-sector levels at g = {g} are degenerate within {DEGENERACY_TOL:e}"
    ))
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    t
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    a.iter_mut().for_each(|x| *x /= n);
}

/// `|⟨g-δ|g+δ⟩|` from exact diagonalization of the even-parity sector.
pub fn ed_oracle_fidelity(n: usize, g: f64, delta: f64) -> Result<f64> {
    ed_oracle_fidelity_with(n, g, delta, EdSolver::Lanczos)
}

pub fn ed_oracle_fidelity_with(n: usize, g: f64, delta: f64, solver: EdSolver) -> Result<f64> {
    if !(g.is_finite() && delta.is_finite()) {
        return Err(FidelityError::domain("g and δ must be finite"));
    }
    if g.abs() < MIN_ED_FIELD {
        return Err(FidelityError::domain(format!(
            "ED oracle requires |g| ≥ {MIN_ED_FIELD}, got g = {g}"
        )));
    }
    let sector = EvenSector::new(n)?;
    if delta == 0.0 {
        return Ok(1.0);
    }
    let (_, lo) = sector.ground_state(g - delta, solver)?;
    let (_, hi) = sector.ground_state(g + delta, solver)?;
    Ok(dot(&lo, &hi).abs().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_dimension() {
        assert_eq!(EvenSector::new(8).unwrap().dim(), 128);
        assert!(matches!(EvenSector::new(14), Err(FidelityError::Resource(_))));
        assert!(matches!(EvenSector::new(5), Err(FidelityError::Domain(_))));
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let h = EvenSector::new(6).unwrap().dense(0.8);
        assert_eq!(h.clone(), h.transpose());
    }

    #[test]
    fn two_site_ring_closed_form() {
        // Even sector {|↑↑⟩, |↓↓⟩}: H = [[-2g, -2], [-2, 2g]].
        let (e0, _) = EvenSector::new(2)
            .unwrap()
            .ground_state(0.7, EdSolver::Lanczos)
            .unwrap();
        assert!((e0 + 2.0 * (0.49f64 + 1.0).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let sector = EvenSector::new(8).unwrap();
        for g in [0.4, 1.0, 2.3] {
            let (el, vl) = sector.ground_state(g, EdSolver::Lanczos).unwrap();
            let (ed, vd) = sector.ground_state(g, EdSolver::Dense).unwrap();
            assert!((el - ed).abs() < 1e-11 * ed.abs());
            assert!((dot(&vl, &vd).abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_fields_give_unit_overlap() {
        assert_eq!(ed_oracle_fidelity(6, 2.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            ed_oracle_fidelity(14, 1.0, 0.1),
            Err(FidelityError::Resource(_))
        ));
        assert!(matches!(
            ed_oracle_fidelity(8, 0.1, 0.05),
            Err(FidelityError::Domain(_))
        ));
    }
}
