//! Dense density-matrix reference engine.
//!
//! Everything here is built from explicit matrices: ladder operators,
//! matrix exponentials of the beamsplitter and squeezing generators, Kraus
//! sets written with `a^m T^{N/2}`, and diagonal click projectors. None of
//! it touches the sparse engine, so agreement between the two is a real
//! cross-check.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{math, Error, Result};

/// Largest Hilbert dimension the oracle will allocate a density matrix for.
pub const DENSE_DIM_LIMIT: usize = 2048;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: alloc::vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    #[inline]
    fn add_at(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] += v;
    }

    /// `self * rhs`, skipping zero entries of `self`.
    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * d..(k + 1) * d];
                let dst = &mut out.data[i * d..(i + 1) * d];
                for (o, b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        DenseMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, c: Complex64) -> DenseMatrix {
        DenseMatrix { dim: self.dim, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| math::sqrt((a - b).norm_sqr()))
            .fold(0.0, f64::max)
    }

    /// `U rho U^†` for Hermitian `rho`, as `U (U rho)^†`.
    pub fn conjugate_hermitian(&self, rho: &DenseMatrix) -> DenseMatrix {
        self.mul(&self.mul(rho).adjoint())
    }

    /// `exp(self)` by scaling and squaring with a Taylor core.
    pub fn exp(&self) -> DenseMatrix {
        let norm: f64 = self.data.iter().map(|a| math::sqrt(a.norm_sqr())).fold(0.0, f64::max) * self.dim as f64;
        let mut squarings = 0;
        let mut scale = 1.0;
        while norm * scale > 0.5 {
            scale *= 0.5;
            squarings += 1;
        }
        let a = self.scale(Complex64::new(scale, 0.0));
        let mut term = Self::identity(self.dim);
        let mut sum = Self::identity(self.dim);
        for k in 1..30 {
            term = term.mul(&a).scale(Complex64::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum);
        }
        sum
    }

    /// `|v><v|` of a vector.
    pub fn outer(v: &[Complex64]) -> DenseMatrix {
        let d = v.len();
        let mut m = Self::zeros(d);
        for i in 0..d {
            if v[i] == ZERO {
                continue;
            }
            for j in 0..d {
                m.data[i * d + j] = v[i] * v[j].conj();
            }
        }
        m
    }
}

/// Tensor-product layout: local dimensions per mode, first mode most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSpace {
    dims: Vec<usize>,
}

impl DenseSpace {
    /// `cutoffs[i]` is the largest occupation of mode `i`.
    pub fn new(cutoffs: &[usize]) -> Result<Self> {
        let dims: Vec<usize> = cutoffs.iter().map(|c| c + 1).collect();
        let dim = dims.iter().product::<usize>();
        if dim > DENSE_DIM_LIMIT {
            return Err(Error::DimensionOverflow { dim, limit: DENSE_DIM_LIMIT });
        }
        Ok(Self { dims })
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn modes(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn index(&self, occupation: &[usize]) -> usize {
        occupation.iter().zip(&self.dims).fold(0, |acc, (n, d)| {
            debug_assert!(n < d);
            acc * d + n
        })
    }

    pub fn occupation(&self, mut index: usize) -> Vec<usize> {
        let mut occ = alloc::vec![0; self.dims.len()];
        for (k, d) in self.dims.iter().enumerate().rev() {
            occ[k] = index % d;
            index /= d;
        }
        occ
    }

    /// Density matrix of `sum_k c_k |occ_k>`; occupations outside the space
    /// are rejected.
    pub fn pure_density(&self, terms: &[(Vec<usize>, Complex64)]) -> Result<DenseMatrix> {
        let mut v = alloc::vec![ZERO; self.dim()];
        for (occ, c) in terms {
            if occ.len() != self.modes() || occ.iter().zip(&self.dims).any(|(n, d)| n >= d) {
                return Err(Error::InvalidParameter(alloc::format!("occupation {occ:?} outside dense space")));
            }
            v[self.index(occ)] += *c;
        }
        Ok(DenseMatrix::outer(&v))
    }

    /// Embeds an operator acting on `modes` (local layout in that order,
    /// local dims equal to the space's) into the full space.
    pub fn embed(&self, local: &DenseMatrix, modes: &[usize]) -> DenseMatrix {
        let local_dims: Vec<usize> = modes.iter().map(|&m| self.dims[m]).collect();
        let local_space = DenseSpace { dims: local_dims };
        debug_assert_eq!(local.dim(), local_space.dim());
        let d = self.dim();
        let mut out = DenseMatrix::zeros(d);
        for col in 0..d {
            let occ = self.occupation(col);
            let lc = local_space.index(&modes.iter().map(|&m| occ[m]).collect::<Vec<_>>());
            for lr in 0..local_space.dim() {
                let v = local.get(lr, lc);
                if v == ZERO {
                    continue;
                }
                let mut target = occ.clone();
                for (k, n) in local_space.occupation(lr).into_iter().enumerate() {
                    target[modes[k]] = n;
                }
                out.set(self.index(&target), col, v);
            }
        }
        out
    }

    /// Partial trace over `traced`; returns the reduced space and matrix.
    pub fn partial_trace(&self, rho: &DenseMatrix, traced: &[usize]) -> (DenseSpace, DenseMatrix) {
        let kept: Vec<usize> = (0..self.modes()).filter(|m| !traced.contains(m)).collect();
        let kept_space = DenseSpace { dims: kept.iter().map(|&m| self.dims[m]).collect() };
        let mut out = DenseMatrix::zeros(kept_space.dim());
        let d = self.dim();
        for i in 0..d {
            let oi = self.occupation(i);
            for j in 0..d {
                let v = rho.get(i, j);
                if v == ZERO {
                    continue;
                }
                let oj = self.occupation(j);
                if traced.iter().any(|&t| oi[t] != oj[t]) {
                    continue;
                }
                let ki = kept_space.index(&kept.iter().map(|&m| oi[m]).collect::<Vec<_>>());
                let kj = kept_space.index(&kept.iter().map(|&m| oj[m]).collect::<Vec<_>>());
                out.add_at(ki, kj, v);
            }
        }
        (kept_space, out)
    }
}

/// Annihilation operator on a `dim`-level mode.
fn annihilation(dim: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(dim);
    for n in 1..dim {
        a.set(n - 1, n, Complex64::new(math::sqrt(n as f64), 0.0));
    }
    a
}

/// Kronecker product.
fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = DenseMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let x = a.get(i, j);
            if x == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out.set(i * db + k, j * db + l, x * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Two-mode operator `exp(generator)` built on enlarged local spaces (so
/// that every total-excitation block reachable from the physical cutoffs
/// is complete) and then restricted to the physical cutoffs.
fn two_mode_exp(d1: usize, d2: usize, big: usize, generator: impl Fn(&DenseMatrix, &DenseMatrix) -> DenseMatrix) -> DenseMatrix {
    let a = annihilation(big);
    let id = DenseMatrix::identity(big);
    let a1 = kron(&a, &id);
    let a2 = kron(&id, &a);
    let u_big = generator(&a1, &a2).exp();
    let mut u = DenseMatrix::zeros(d1 * d2);
    for r1 in 0..d1 {
        for r2 in 0..d2 {
            for c1 in 0..d1 {
                for c2 in 0..d2 {
                    u.set(r1 * d2 + r2, c1 * d2 + c2, u_big.get(r1 * big + r2, c1 * big + c2));
                }
            }
        }
    }
    u
}

/// Local 50/50 beamsplitter: `a1^† -> (a1^† + a2^†)/sqrt2`,
/// `a2^† -> (a1^† - a2^†)/sqrt2`. Built as the rotation
/// `exp(-pi/4 (a1^† a2 - a2^† a1))` after a `pi` phase on mode 2.
pub fn beamsplitter_matrix(d1: usize, d2: usize) -> DenseMatrix {
    let big = d1 + d2 - 1;
    let rot = two_mode_exp(d1, d2, big, |a1, a2| {
        let g = a1.adjoint().mul(a2).add(&a2.adjoint().mul(a1).scale(Complex64::new(-1.0, 0.0)));
        g.scale(Complex64::new(-core::f64::consts::FRAC_PI_4, 0.0))
    });
    let mut parity = DenseMatrix::zeros(d1 * d2);
    for n1 in 0..d1 {
        for n2 in 0..d2 {
            let i = n1 * d2 + n2;
            parity.set(i, i, Complex64::new(if n2 % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
        }
    }
    rot.mul(&parity)
}

/// Local `exp(r (a^† b^† - a b))`, truncated to the given local dims.
pub fn squeezer_matrix(d1: usize, d2: usize, r: f64) -> DenseMatrix {
    let big = d1.max(d2) + 12;
    two_mode_exp(d1, d2, big, |a, b| {
        let ad_bd = a.adjoint().mul(&b.adjoint());
        let ab = a.mul(b);
        ad_bd.add(&ab.scale(Complex64::new(-1.0, 0.0))).scale(Complex64::new(r, 0.0))
    })
}

/// Kraus set `K_m = sqrt((R/T)^m / m!) a^m T^{N/2}` of a pure-loss
/// beamsplitter with transmittance `t`, on a `dim`-level mode.
pub fn loss_kraus(dim: usize, t: f64) -> Vec<DenseMatrix> {
    let mut t_half_n = DenseMatrix::zeros(dim);
    for n in 0..dim {
        t_half_n.set(n, n, Complex64::new(math::powi(math::sqrt(t), n as i32), 0.0));
    }
    if t >= 1.0 {
        return alloc::vec![t_half_n];
    }
    let r = 1.0 - t;
    let a = annihilation(dim);
    let mut a_m = DenseMatrix::identity(dim);
    let mut out = Vec::new();
    for m in 0..dim {
        let c = math::sqrt(math::powi(r / t, m as i32) / math::factorial(m));
        out.push(a_m.mul(&t_half_n).scale(Complex64::new(c, 0.0)));
        a_m = a.mul(&a_m);
    }
    out
}

/// Gate list entry; mode arguments index the [`DenseSpace`].
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Beamsplitter { mode1: usize, mode2: usize },
    Phase { mode: usize, phi: f64 },
    Swap { mode_x: usize, mode_y: usize },
    Loss { mode: usize, transmittance: f64 },
    Squeeze { optical: usize, mech: usize, r: f64 },
}

/// Runs `circuit` on `rho` by explicit matrix multiplication.
pub fn dense_oracle(space: &DenseSpace, circuit: &[Gate], rho: &DenseMatrix) -> Result<DenseMatrix> {
    if rho.dim() != space.dim() {
        return Err(Error::InvalidParameter("density matrix does not match the dense space".into()));
    }
    let mut rho = rho.clone();
    for gate in circuit {
        rho = match *gate {
            Gate::Beamsplitter { mode1, mode2 } => {
                let u = beamsplitter_matrix(space.dims[mode1], space.dims[mode2]);
                space.embed(&u, &[mode1, mode2]).conjugate_hermitian(&rho)
            }
            Gate::Phase { mode, phi } => {
                let d = space.dims[mode];
                let mut u = DenseMatrix::zeros(d);
                for n in 0..d {
                    u.set(n, n, math::cis(phi * n as f64));
                }
                space.embed(&u, &[mode]).conjugate_hermitian(&rho)
            }
            Gate::Swap { mode_x, mode_y } => {
                let (dx, dy) = (space.dims[mode_x], space.dims[mode_y]);
                if dx != dy {
                    return Err(Error::InvalidParameter("swap needs equal local dimensions".into()));
                }
                let mut u = DenseMatrix::zeros(dx * dy);
                for x in 0..dx {
                    for y in 0..dy {
                        u.set(y * dy + x, x * dy + y, ONE);
                    }
                }
                space.embed(&u, &[mode_x, mode_y]).conjugate_hermitian(&rho)
            }
            Gate::Loss { mode, transmittance } => {
                let mut acc = DenseMatrix::zeros(space.dim());
                for k in loss_kraus(space.dims[mode], transmittance) {
                    acc = acc.add(&space.embed(&k, &[mode]).conjugate_hermitian(&rho));
                }
                acc
            }
            Gate::Squeeze { optical, mech, r } => {
                let u = squeezer_matrix(space.dims[optical], space.dims[mech], r);
                space.embed(&u, &[optical, mech]).conjugate_hermitian(&rho)
            }
        };
    }
    Ok(rho)
}

/// Projector of a threshold-click pattern on `detectors`:
/// `|0><0|` for silent detectors, `I - |0><0|` for clicking ones.
pub fn click_projector(space: &DenseSpace, detectors: &[usize], clicks: &[bool]) -> DenseMatrix {
    let mut p = DenseMatrix::identity(space.dim());
    for (&det, &click) in detectors.iter().zip(clicks) {
        let d = space.dims[det];
        let mut local = DenseMatrix::zeros(d);
        if click {
            for n in 1..d {
                local.set(n, n, ONE);
            }
        } else {
            local.set(0, 0, ONE);
        }
        p = space.embed(&local, &[det]).mul(&p);
    }
    p
}

/// Weight and unnormalized reduced state for one click pattern.
pub fn measure_pattern(
    space: &DenseSpace,
    rho: &DenseMatrix,
    detectors: &[usize],
    clicks: &[bool],
) -> (f64, DenseSpace, DenseMatrix) {
    let p = click_projector(space, detectors, clicks);
    let projected = p.conjugate_hermitian(rho);
    let weight = projected.trace().re;
    let (reduced_space, reduced) = space.partial_trace(&projected, detectors);
    (weight, reduced_space, reduced)
}

/// Unnormalized mechanical state heralded by `M+` when the blue pulse
/// carries two photons, the resonant pulse one, and both Stokes modes pass
/// a loss of transmittance `t` (input phase zero). Evaluated entry by entry
/// on `(mechA, mechB)` with cutoff 2.
pub fn two_photon_loss_density(theta: f64, t: f64) -> (DenseSpace, DenseMatrix) {
    let space = DenseSpace { dims: alloc::vec![3, 3] };
    let r = 1.0 - t;
    let (c2, s2) = (math::powi(math::cos(theta), 2), math::powi(math::sin(theta), 2));
    let x = math::sin(2.0 * theta) / 2.0;
    let (i20, i02, i11) = (space.index(&[2, 0]), space.index(&[0, 2]), space.index(&[1, 1]));
    let mut m = DenseMatrix::zeros(space.dim());
    let mut put = |i: usize, j: usize, v: f64| m.add_at(i, j, Complex64::new(v / 4.0, 0.0));
    put(i20, i20, c2 * (t * t + 2.0 * r * t));
    put(i11, i11, c2 * 2.0 * r * t);
    put(i02, i02, s2 * (t * t + 2.0 * r * t));
    put(i11, i11, s2 * 2.0 * r * t);
    put(i20, i02, x * t * t);
    put(i20, i11, x * 2.0 * r * t);
    put(i11, i02, x * 2.0 * r * t);
    put(i02, i20, x * t * t);
    put(i02, i11, x * 2.0 * r * t);
    put(i11, i20, x * 2.0 * r * t);
    (space, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::prelude::v1::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn loss_on_single_photon() {
        let space = DenseSpace::new(&[2]).unwrap();
        let rho = space.pure_density(&[(vec![1], c(1.0))]).unwrap();
        let out = dense_oracle(&space, &[Gate::Loss { mode: 0, transmittance: 0.7 }], &rho).unwrap();
        assert!((out.get(1, 1).re - 0.7).abs() < 1e-14);
        assert!((out.get(0, 0).re - 0.3).abs() < 1e-14);
        assert!((out.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_circuit_is_bit_exact() {
        let space = DenseSpace::new(&[1, 2]).unwrap();
        let rho = space.pure_density(&[(vec![0, 1], c(0.6)), (vec![1, 2], c(0.8))]).unwrap();
        assert_eq!(dense_oracle(&space, &[], &rho).unwrap(), rho);
    }

    #[test]
    fn beamsplitter_convention() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let u = beamsplitter_matrix(3, 3);
        let space = DenseSpace::new(&[2, 2]).unwrap();
        // |10> -> (|10> + |01>)/sqrt2
        let col = space.index(&[1, 0]);
        assert!((u.get(space.index(&[1, 0]), col).re - h).abs() < 1e-12);
        assert!((u.get(space.index(&[0, 1]), col).re - h).abs() < 1e-12);
        // |01> -> (|10> - |01>)/sqrt2
        let col = space.index(&[0, 1]);
        assert!((u.get(space.index(&[1, 0]), col).re - h).abs() < 1e-12);
        assert!((u.get(space.index(&[0, 1]), col).re + h).abs() < 1e-12);
        // |11> -> (|20> - |02>)/sqrt2
        let col = space.index(&[1, 1]);
        assert!((u.get(space.index(&[2, 0]), col).re - h).abs() < 1e-12);
        assert!((u.get(space.index(&[0, 2]), col).re + h).abs() < 1e-12);
        assert!(u.get(space.index(&[1, 1]), col).norm_sqr() < 1e-24);
    }

    #[test]
    fn squeezer_on_vacuum_is_geometric() {
        let r = 0.1f64.atanh();
        let u = squeezer_matrix(4, 4, r);
        let a0 = u.get(0, 0).re;
        assert!((a0 - 1.0 / r.cosh()).abs() < 1e-12);
        for n in 1..4 {
            let an = u.get(n * 4 + n, 0).re;
            assert!((an / a0 - 0.1f64.powi(n as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn kraus_set_is_complete() {
        for t in [0.2, 0.5, 0.9, 1.0] {
            let ks = loss_kraus(4, t);
            let mut sum = DenseMatrix::zeros(4);
            for k in &ks {
                sum = sum.add(&k.adjoint().mul(k));
            }
            assert!(sum.max_abs_diff(&DenseMatrix::identity(4)) < 1e-13, "t={t}");
        }
    }

    #[test]
    fn two_photon_loss_density_is_hermitian_with_expected_trace() {
        let (_, m) = two_photon_loss_density(0.4, 0.3);
        assert!(m.max_abs_diff(&m.adjoint()) < 1e-16);
        let (t, r) = (0.3, 0.7);
        assert!((m.trace().re - (t * t + 4.0 * r * t) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_limit() {
        assert!(matches!(DenseSpace::new(&[2; 8]), Err(Error::DimensionOverflow { .. })));
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let space = DenseSpace::new(&[1, 1]).unwrap();
        let rho = space.pure_density(&[(vec![0, 1], c(h)), (vec![1, 0], c(h))]).unwrap();
        let (s, red) = space.partial_trace(&rho, &[1]);
        assert_eq!(s.dim(), 2);
        assert!((red.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((red.get(1, 1).re - 0.5).abs() < 1e-15);
        assert!(red.get(0, 1).norm_sqr() < 1e-30);
    }

    #[test]
    fn click_projectors_resolve_identity() {
        let space = DenseSpace::new(&[2, 1, 2]).unwrap();
        let mut sum = DenseMatrix::zeros(space.dim());
        for bits in 0..4u8 {
            let clicks = [bits & 1 == 1, bits & 2 == 2];
            sum = sum.add(&click_projector(&space, &[0, 2], &clicks));
        }
        assert!(sum.max_abs_diff(&DenseMatrix::identity(space.dim())) < 1e-15);
    }
}
