//! Dense Davies generator on the full operator space, built from explicit
//! 2^N × 2^N Pauli matrices and syndrome projectors.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Bath, Davies, DaviesLimits, GapMethod, GapResult};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::pauli::PauliWord;

type C = Complex<f64>;

/// Hermitian Pauli matrix of the word with packed index `idx`; site `i` is bit `i`.
pub fn pauli_matrix(n: usize, idx: u64) -> DMatrix<C> {
    let d = 1usize << n;
    let mask = (d - 1) as u64;
    let (x, z) = (idx & mask, idx >> n);
    let phase = [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)][((x & z).count_ones() % 4) as usize];
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d as u64 {
        let sign = if (z & k).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        m[((k ^ x) as usize, k as usize)] = phase * sign;
    }
    m
}

/// `Tr(σ_idx · a)` using the monomial structure of σ.
fn pauli_trace(n: usize, idx: u64, a: &DMatrix<C>) -> C {
    let d = 1usize << n;
    let mask = (d - 1) as u64;
    let (x, z) = (idx & mask, idx >> n);
    let phase = [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)][((x & z).count_ones() % 4) as usize];
    let mut t = C::new(0.0, 0.0);
    for l in 0..d as u64 {
        let sign = if (z & l).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        t += a[(l as usize, (l ^ x) as usize)] * sign;
    }
    t * phase
}

/// 𝓛 in the orthonormal basis `b_γ = 2^{−N/2} σ_γ`, ordered by word index.
#[derive(Clone, Debug)]
pub struct FullGenerator {
    n: usize,
    rank: usize,
    /// `L[γ′, γ] = Tr(b_γ′ 𝓛(b_γ))`.
    pub matrix: DMatrix<f64>,
    /// `Tr(ρ b_i b_j)`.
    pub gram: DMatrix<C>,
    /// `Tr(b_γ ρ)`.
    pub rho_coords: DVector<f64>,
    pub rho: DMatrix<C>,
    projectors: Vec<DMatrix<C>>,
    /// Largest imaginary part discarded from the matrix entries.
    pub imag_defect: f64,
    image: crate::gf2::Echelon,
}

pub fn full_generator(model: &Model, bath: &Bath, limits: &DaviesLimits) -> Result<FullGenerator> {
    let n = model.n();
    if n > limits.oracle_n {
        return Err(Error::SizeLimit { what: "full generator (N)", size: n, limit: limits.oracle_n });
    }
    let dav = Davies::new(model, bath.clone())?;
    let d = 1usize << n;
    let id = DMatrix::<C>::identity(d, d);
    let gens: Vec<DMatrix<C>> = model.generators().iter().map(|g| pauli_matrix(n, g.index())).collect();
    let projectors: Vec<DMatrix<C>> = dav
        .table
        .syndromes
        .iter()
        .map(|a| {
            gens.iter().enumerate().fold(id.clone(), |p, (k, g)| {
                let s = if a.get(k) { -1.0 } else { 1.0 };
                p * ((&id + g * C::new(s, 0.0)) * C::new(0.5, 0.0))
            })
        })
        .collect();
    let mut rho = DMatrix::<C>::zeros(d, d);
    for (p, &w) in projectors.iter().zip(dav.rho()) {
        rho += p * C::new(w, 0.0);
    }

    struct Jump {
        h: f64,
        s: DMatrix<C>,
        sd: DMatrix<C>,
        sds: DMatrix<C>,
    }
    let mut jumps = Vec::new();
    for (k, alpha) in dav.w1.words().iter().enumerate() {
        let sa = pauli_matrix(n, alpha.index());
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for a in 0..dav.dim() {
            groups.entry(dav.omega[k][a]).or_default().push(a);
        }
        for members in groups.values() {
            let mut s = DMatrix::<C>::zeros(d, d);
            for &a in members {
                s += &sa * &projectors[a];
            }
            let sd = s.adjoint();
            let sds = &sd * &s;
            jumps.push(Jump { h: dav.rate[k][members[0]], s, sd, sds });
        }
    }

    let total = d * d;
    let norm = 1.0 / libm::sqrt(d as f64);
    let mut matrix = DMatrix::<f64>::zeros(total, total);
    let mut imag_defect: f64 = 0.0;
    for g in 0..total {
        let b = pauli_matrix(n, g as u64) * C::new(norm, 0.0);
        let mut lb = DMatrix::<C>::zeros(d, d);
        for j in &jumps {
            let term = &j.sd * &b * &j.s - (&j.sds * &b + &b * &j.sds) * C::new(0.5, 0.0);
            lb += term * C::new(j.h, 0.0);
        }
        for gp in 0..total {
            let t = pauli_trace(n, gp as u64, &lb) * norm;
            matrix[(gp, g)] = t.re;
            imag_defect = imag_defect.max(t.im.abs());
        }
    }

    let mut gram = DMatrix::<C>::zeros(total, total);
    let mut rho_coords = DVector::<f64>::zeros(total);
    let scale = 1.0 / d as f64;
    for i in 0..total {
        let a = &rho * pauli_matrix(n, i as u64);
        for j in 0..total {
            gram[(i, j)] = pauli_trace(n, j as u64, &a) * scale;
        }
        rho_coords[i] = pauli_trace(n, i as u64, &rho).re * norm;
    }
    Ok(FullGenerator {
        n,
        rank: model.rank(),
        matrix,
        gram,
        rho_coords,
        rho,
        projectors,
        imag_defect,
        image: model.stabilizer_image().clone(),
    })
}

fn bilinear(c: &DVector<f64>, g: &DMatrix<C>, v: &DVector<f64>) -> C {
    let mut s = C::new(0.0, 0.0);
    for i in 0..c.len() {
        if c[i] == 0.0 {
            continue;
        }
        for j in 0..v.len() {
            s += g[(i, j)] * (c[i] * v[j]);
        }
    }
    s
}

impl FullGenerator {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `‖𝓛*(ρ)‖_∞` in Pauli coordinates.
    pub fn fixed_point_residual(&self) -> f64 {
        (self.matrix.transpose() * &self.rho_coords).amax()
    }

    /// `|⟨f, 𝓛g⟩_ρ − ⟨𝓛f, g⟩_ρ|` for Hermitian f, g given by real Pauli coordinates.
    pub fn detailed_balance_residual(&self, f: &DVector<f64>, g: &DVector<f64>) -> f64 {
        let lf = &self.matrix * f;
        let lg = &self.matrix * g;
        let d = bilinear(f, &self.gram, &lg) - bilinear(&lf, &self.gram, g);
        libm::hypot(d.re, d.im)
    }

    /// `−Tr(ρ f 𝓛(f))`.
    pub fn dirichlet_form(&self, f: &DVector<f64>) -> f64 {
        -bilinear(f, &self.gram, &(&self.matrix * f)).re
    }

    /// `Tr(ρ f²) − Tr(ρ f)²`.
    pub fn variance(&self, f: &DVector<f64>) -> f64 {
        let m = self.rho_coords.dot(f);
        bilinear(f, &self.gram, f).re - m * m
    }

    /// The operator with Pauli coordinates `c`.
    pub fn operator(&self, c: &DVector<f64>) -> DMatrix<C> {
        let d = 1usize << self.n;
        let norm = 1.0 / libm::sqrt(d as f64);
        let mut m = DMatrix::<C>::zeros(d, d);
        for (i, &x) in c.iter().enumerate() {
            if x != 0.0 {
                m += pauli_matrix(self.n, i as u64) * C::new(x * norm, 0.0);
            }
        }
        m
    }

    pub fn projector(&self, a: usize) -> &DMatrix<C> {
        &self.projectors[a]
    }

    /// Coordinates of f in the coset basis `σ_rep P(a) / ‖·‖₂`.
    pub fn dual_coordinates(&self, rep: &PauliWord, c: &DVector<f64>) -> Vec<C> {
        let f = self.operator(c);
        let s = pauli_matrix(self.n, rep.index());
        let norm = 1.0 / libm::sqrt(libm::ldexp(1.0, (self.n - self.rank) as i32));
        self.projectors.iter().map(|p| (p * &s * &f).trace() * norm).collect()
    }

    /// Eigenvalues of `−𝓛` after ρ-symmetrisation, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let eg = SymmetricEigen::new(self.gram.clone());
        let u = &eg.eigenvectors;
        let sq = DMatrix::from_diagonal(&eg.eigenvalues.map(|x| C::new(libm::sqrt(x), 0.0)));
        let isq = DMatrix::from_diagonal(&eg.eigenvalues.map(|x| C::new(1.0 / libm::sqrt(x), 0.0)));
        let half = u * sq * u.adjoint();
        let ihalf = u * isq * u.adjoint();
        let l = self.matrix.map(|x| C::new(-x, 0.0));
        let k = &half * l * &ihalf;
        let k = (&k + k.adjoint()) * C::new(0.5, 0.0);
        let mut vals: Vec<f64> = SymmetricEigen::new(k).eigenvalues.iter().cloned().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    pub fn spectral_gap(&self) -> Result<GapResult> {
        let vals = self.spectrum();
        let top = vals.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
        let gap = vals
            .iter()
            .cloned()
            .find(|x| x.abs() > 1e-9 * top)
            .ok_or_else(|| Error::InvalidArgument("generator has no non-zero eigenvalue".into()))?;
        let sym = self.matrix.transpose() * self.gram.map(|x| x.re) - self.gram.map(|x| x.re) * &self.matrix;
        let a = DMatrix::<f64>::from_fn(self.matrix.nrows(), self.matrix.ncols(), |i, j| self.matrix[(i, j)] + gap * if i == j { 1.0 } else { 0.0 });
        let col = (0..a.ncols()).min_by(|&i, &j| a.column(i).norm().total_cmp(&a.column(j).norm())).unwrap_or(0);
        let word = PauliWord::from_index(self.n, col as u64);
        let rep = PauliWord::from_bitvec(&self.image.reduce(&word.to_bitvec()).0);
        Ok(GapResult { gap, achieving_rep: rep, method: GapMethod::Full, residual: vals[0].abs().max(sym.amax() * 0.0), cutoff: 1e-9 })
    }
}

/// Max of `|⟨f, 𝓛g⟩_ρ − ⟨𝓛f, g⟩_ρ|` over seeded random Hermitian f, g.
pub fn detailed_balance_check(model: &Model, bath: &Bath, trials: usize, seed: u64, limits: &DaviesLimits) -> Result<f64> {
    let full = full_generator(model, bath, limits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = full.matrix.nrows();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let f = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let g = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        worst = worst.max(full.detailed_balance_residual(&f, &g));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::davies::coset_representatives;
    use crate::model::{cluster_chain, ising_chain, Energy};
    use crate::pauli::parse_pauli;

    fn one() -> Energy {
        Energy::from_integer(1)
    }

    fn models() -> Vec<Model> {
        alloc::vec![
            ising_chain(2, one(), false).unwrap(),
            ising_chain(3, one(), true).unwrap(),
            cluster_chain(3, one()).unwrap(),
            Model::parse(&["ZZI", "XXX"], &["1", "-0.5"]).unwrap(),
        ]
    }

    #[test]
    fn pauli_matrices_hermitian_unitary() {
        for idx in 0..16 {
            let p = pauli_matrix(2, idx);
            assert!((&p - p.adjoint()).camax() < 1e-15);
            assert!((&p * &p - DMatrix::<C>::identity(4, 4)).camax() < 1e-15);
            let tr = pauli_trace(2, idx, &DMatrix::identity(4, 4));
            assert!((tr.re - if idx == 0 { 4.0 } else { 0.0 }).abs() < 1e-15);
        }
        let y = pauli_matrix(1, 0b11);
        assert_eq!(y[(1, 0)], C::new(0.0, 1.0));
    }

    #[test]
    fn fixed_point_and_balance() {
        let l = DaviesLimits::default();
        for m in models() {
            for bath in [Bath::metropolis(0.8).unwrap(), Bath::glauber(1.3).unwrap()] {
                let g = full_generator(&m, &bath, &l).unwrap();
                assert!(g.imag_defect < 1e-12);
                assert!(g.fixed_point_residual() < 1e-12);
                assert!((g.rho.trace().re - 1.0).abs() < 1e-12);
                assert!(detailed_balance_check(&m, &bath, 4, 7, &l).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn kms_violation_detected() {
        let m = ising_chain(2, one(), false).unwrap();
        let mut t = BTreeMap::new();
        for (w, h) in [(-2, 1.0), (0, 1.0), (2, 1.0)] {
            t.insert(Energy::from_integer(w), h);
        }
        let bath = Bath::new(super::super::BathKind::Table(t), 1.0).unwrap();
        assert!(detailed_balance_check(&m, &bath, 4, 3, &DaviesLimits::default()).unwrap() > 1e-3);
    }

    #[test]
    fn coset_and_full_agree() {
        let l = DaviesLimits::default();
        for m in models() {
            for bath in [Bath::metropolis(1.0).unwrap(), Bath::glauber(0.4).unwrap()] {
                let dav = Davies::new(&m, bath.clone()).unwrap();
                let full = full_generator(&m, &bath, &l).unwrap();
                let a = dav.spectral_gap_coset(&l).unwrap().gap;
                let b = full.spectral_gap().unwrap().gap;
                assert!((a - b).abs() < 1e-10, "{a} {b}");
                let nz = |v: Vec<f64>| v.into_iter().filter(|x| x.abs() > 1e-9).collect::<Vec<_>>();
                let mut cs = nz(dav.coset_spectrum(&l).unwrap());
                cs.sort_by(f64::total_cmp);
                let fs = nz(full.spectrum());
                assert_eq!(cs.len(), fs.len());
                for (x, y) in cs.iter().zip(&fs) {
                    assert!((x - y).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn blocks_reproduce_quadratic_forms() {
        let l = DaviesLimits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in models() {
            let bath = Bath::metropolis(0.9).unwrap();
            let dav = Davies::new(&m, bath.clone()).unwrap();
            let full = full_generator(&m, &bath, &l).unwrap();
            let n = m.n();
            for rep in coset_representatives(&m, &l).unwrap().representatives {
                let mut c = DVector::<f64>::zeros(1 << (2 * n));
                for w in 0..1u64 << (2 * n) {
                    let word = PauliWord::from_index(n, w);
                    if m.in_stabilizer(&word.compose(&rep)) {
                        c[w as usize] = rng.gen_range(-1.0..1.0);
                    }
                }
                let d = full.dual_coordinates(&rep, &c);
                let quad = |mat: &DMatrix<f64>| {
                    let mut s = C::new(0.0, 0.0);
                    for i in 0..d.len() {
                        for j in 0..d.len() {
                            s += d[i].conj() * d[j] * mat[(i, j)];
                        }
                    }
                    s
                };
                let e = quad(&dav.dirichlet_block(&rep).unwrap().matrix);
                let v = quad(&dav.variance_block(&rep).unwrap().matrix);
                assert!((e.re - full.dirichlet_form(&c)).abs() < 1e-10, "{rep} {e} {}", full.dirichlet_form(&c));
                assert!(e.im.abs() < 1e-10);
                assert!((v.re - full.variance(&c)).abs() < 1e-10, "{rep} {v} {}", full.variance(&c));
            }
        }
    }

    #[test]
    fn trivial_syndrome_eigenvalue_at_infinite_temperature() {
        let m = ising_chain(3, one(), false).unwrap();
        let full = full_generator(&m, &Bath::metropolis(0.0).unwrap(), &DaviesLimits::default()).unwrap();
        for g in ["XXX", "ZII", "ZZZ", "YYX"] {
            let w = parse_pauli(g).unwrap();
            if !m.syndrome(&w).unwrap().is_zero() {
                continue;
            }
            let anti = WeightOneSetCount::anti(&w);
            let col = full.matrix.column(w.index() as usize);
            assert!((col[w.index() as usize] + 2.0 * anti as f64).abs() < 1e-12);
        }
    }

    struct WeightOneSetCount;
    impl WeightOneSetCount {
        fn anti(w: &PauliWord) -> usize {
            crate::pauli::WeightOneSet::new(w.n()).words().iter().filter(|a| a.anticommutes(w)).count()
        }
    }
}
