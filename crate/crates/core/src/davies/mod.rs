//! Davies generator: coset-block Dirichlet and variance matrices, the full
//! operator-space oracle, and the spectral gap.

mod bath;
mod full;
mod support;

pub use bath::{Bath, BathKind};
pub use full::{detailed_balance_check, full_generator, FullGenerator};
pub use support::support_bound_canonical;

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{Energy, GibbsTable, Model, SyndromeTable};
use crate::par;
use crate::pauli::{PauliWord, WeightOneSet};

/// Size gates for the generator computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DaviesLimits {
    /// Max N for [`full_generator`].
    pub oracle_n: usize,
    /// Max number of coset representatives.
    pub max_cosets: usize,
    /// Max N for [`support_bound_canonical`].
    pub support_n: usize,
}

impl Default for DaviesLimits {
    fn default() -> Self {
        Self { oracle_n: 4, max_cosets: 1 << 16, support_n: 3 }
    }
}

/// Relative cutoff used when restricting a pencil to the range of V̂.
pub const RANGE_CUTOFF: f64 = 1e-12;

/// Right cosets of `Im(G)` in Z₂^{2N}.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    pub representatives: Vec<PauliWord>,
    /// Syndrome index of each representative.
    pub rep_syndromes: Vec<usize>,
}

impl CosetDecomposition {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Combinations of unit vectors completing a basis of `Im(G)`; the first
/// representative is the identity.
pub fn coset_representatives(model: &Model, limits: &DaviesLimits) -> Result<CosetDecomposition> {
    let free = model.stabilizer_image().free_positions();
    let n = model.n();
    let count = 1usize.checked_shl(free.len() as u32).filter(|&c| c <= limits.max_cosets && free.len() < 63);
    let Some(count) = count else {
        return Err(Error::SizeLimit { what: "coset count (log2)", size: free.len(), limit: limits.max_cosets.ilog2() as usize });
    };
    let space = model.syndrome_space();
    let mut representatives = Vec::with_capacity(count);
    let mut rep_syndromes = Vec::with_capacity(count);
    for c in 0..count {
        let mut v = crate::bits::BitVec::zeros(2 * n);
        for (k, &pos) in free.iter().enumerate() {
            if (c >> k) & 1 == 1 {
                v.set(pos, true);
            }
        }
        let w = PauliWord::from_bitvec(&v);
        rep_syndromes.push(space.index_of(&model.syndrome_unchecked(&w)).expect("syndromes lie in Im(E)"));
        representatives.push(w);
    }
    Ok(CosetDecomposition { representatives, rep_syndromes })
}

/// Per-coset Dirichlet block Ê_γ₀.
#[derive(Clone, Debug)]
pub struct DirichletBlock {
    pub rep: PauliWord,
    pub matrix: DMatrix<f64>,
}

/// Per-coset variance block V̂_γ₀.
#[derive(Clone, Debug)]
pub struct VarianceBlock {
    pub rep: PauliWord,
    pub matrix: DMatrix<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapMethod {
    Coset,
    Full,
}

#[derive(Clone, Debug)]
pub struct GapResult {
    pub gap: f64,
    pub achieving_rep: PauliWord,
    pub method: GapMethod,
    pub residual: f64,
    /// Relative range cutoff (coset method).
    pub cutoff: f64,
}

/// Model, bath and Gibbs data precomputed for block assembly.
#[derive(Clone, Debug)]
pub struct Davies<'m> {
    model: &'m Model,
    pub bath: Bath,
    pub table: SyndromeTable,
    pub gibbs: GibbsTable,
    w1: WeightOneSet,
    /// Syndrome index of each α ∈ W₁.
    e_alpha: Vec<usize>,
    /// `ω^α(a)·den`, indexed `[α][a]`.
    omega: Vec<Vec<i64>>,
    /// `h(ω^α(a))`, indexed `[α][a]`.
    rate: Vec<Vec<f64>>,
}

impl<'m> Davies<'m> {
    pub fn new(model: &'m Model, bath: Bath) -> Result<Self> {
        let table = model.syndrome_table()?;
        let gibbs = GibbsTable::new(model, &table, bath.beta)?;
        let w1 = WeightOneSet::new(model.n());
        let space = model.syndrome_space();
        let mut e_alpha = Vec::new();
        let mut omega = Vec::new();
        let mut rate = Vec::new();
        for a in w1.words() {
            let e = model.syndrome_unchecked(a);
            e_alpha.push(space.index_of(&e).expect("valid"));
            let om: Vec<i64> = table.syndromes.iter().map(|s| model.bohr_num(&e, s)).collect();
            let hs = om.iter().map(|&w| bath.rate(&Energy::new(w, model.den()))).collect::<Result<Vec<_>>>()?;
            omega.push(om);
            rate.push(hs);
        }
        Ok(Self { model, bath, table, gibbs, w1, e_alpha, omega, rate })
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn rho(&self) -> &[f64] {
        &self.gibbs.weights
    }

    /// `h(ω^α(a))` for α at position `alpha` of W₁ and syndrome index `a`.
    pub fn rate_at(&self, alpha: usize, a: usize) -> f64 {
        self.rate[alpha][a]
    }

    pub fn omega_at(&self, alpha: usize, a: usize) -> Energy {
        Energy::new(self.omega[alpha][a], self.model.den())
    }

    pub fn alpha_syndrome(&self, alpha: usize) -> usize {
        self.e_alpha[alpha]
    }

    /// Every realized Bohr frequency, with repetition.
    pub fn realized_frequencies(&self) -> impl Iterator<Item = Energy> + '_ {
        self.omega.iter().flatten().map(|&w| Energy::new(w, self.model.den()))
    }

    /// `min_{α,a} h(ω^α(a))`.
    pub fn h_star(&self) -> f64 {
        self.rate.iter().flatten().cloned().fold(f64::INFINITY, f64::min)
    }

    fn rep_index(&self, rep: &PauliWord) -> Result<usize> {
        if rep.n() != self.model.n() {
            return Err(Error::LengthMismatch(self.model.n(), rep.n()));
        }
        Ok(self.model.syndrome_space().index_of(&self.model.syndrome_unchecked(rep)).expect("valid"))
    }

    pub fn dirichlet_block(&self, rep: &PauliWord) -> Result<DirichletBlock> {
        let er = self.rep_index(rep)?;
        let d = self.dim();
        let rho = self.rho();
        let mut m = DMatrix::<f64>::zeros(d, d);
        for (k, alpha) in self.w1.words().iter().enumerate() {
            let ea = self.e_alpha[k];
            let theta = if alpha.anticommutes(rep) { -1.0 } else { 1.0 };
            let (om, h) = (&self.omega[k], &self.rate[k]);
            for a in 0..d {
                m[(a, a)] += 0.5 * (h[a] + h[a ^ er]) * rho[a];
                if om[a] == om[a ^ er] {
                    m[(a, a ^ ea)] -= h[a] * rho[a] * theta;
                }
            }
        }
        Ok(DirichletBlock { rep: rep.clone(), matrix: m })
    }

    /// `V̂_γ₀` from the n± counts on each fibre `{η : Eη = b}`.
    pub fn variance_block(&self, rep: &PauliWord) -> Result<VarianceBlock> {
        self.rep_index(rep)?;
        let d = self.dim();
        let rho = self.rho();
        let n = self.model.n();
        let r = self.model.rank();
        let space = self.model.syndrome_space();
        let scale = libm::ldexp(1.0, n as i32 - r as i32);
        let stab = self.model.in_stabilizer(rep);
        let mut m = DMatrix::<f64>::zeros(d, d);
        for b in 0..d {
            let diff = if stab {
                if space.preimage(b).anticommutes(rep) {
                    -scale
                } else {
                    scale
                }
            } else {
                0.0
            };
            for a in 0..d {
                let w = rho[a] * rho[a ^ b];
                m[(a, a)] += scale * w;
                m[(a, a ^ b)] -= diff * w;
            }
        }
        Ok(VarianceBlock { rep: rep.clone(), matrix: m })
    }

    /// Direct summation over all 4^N words.
    pub fn variance_block_bruteforce(&self, rep: &PauliWord, limits: &DaviesLimits) -> Result<VarianceBlock> {
        let n = self.model.n();
        if n > limits.oracle_n {
            return Err(Error::SizeLimit { what: "variance oracle (N)", size: n, limit: limits.oracle_n });
        }
        self.rep_index(rep)?;
        let idx = self.model.word_syndrome_indices()?;
        let d = self.dim();
        let rho = self.rho();
        let f = libm::ldexp(1.0, -(n as i32));
        let mut m = DMatrix::<f64>::zeros(d, d);
        for (w, &b) in idx.iter().enumerate() {
            let theta = if PauliWord::from_index(n, w as u64).anticommutes(rep) { -1.0 } else { 1.0 };
            for a in 0..d {
                let x = f * rho[a] * rho[a ^ b];
                m[(a, a)] += x;
                m[(a, a ^ b)] -= theta * x;
            }
        }
        Ok(VarianceBlock { rep: rep.clone(), matrix: m })
    }

    /// Pencil eigenvalues of one coset, ascending.
    pub fn coset_pencil(&self, rep: &PauliWord) -> Result<(Vec<f64>, f64)> {
        let e = self.dirichlet_block(rep)?.matrix;
        let v = self.variance_block(rep)?.matrix;
        let p = linalg::pencil(&e, &v, RANGE_CUTOFF);
        let scale = linalg::max_abs(&e).max(1.0);
        if let Some(&lo) = p.values.first() {
            if lo < -1e-9 * scale {
                return Err(Error::NonPositivePencil(lo));
            }
        }
        Ok((p.values, p.residual))
    }

    /// Union of all coset pencil spectra, ascending.
    pub fn coset_spectrum(&self, limits: &DaviesLimits) -> Result<Vec<f64>> {
        let cosets = coset_representatives(self.model, limits)?;
        let parts = par::map(cosets.len(), |i| self.coset_pencil(&cosets.representatives[i]).map(|p| p.0));
        let mut all = Vec::new();
        for p in parts {
            all.extend(p?);
        }
        all.sort_by(f64::total_cmp);
        Ok(all)
    }

    pub fn spectral_gap_coset(&self, limits: &DaviesLimits) -> Result<GapResult> {
        let cosets = coset_representatives(self.model, limits)?;
        let parts = par::map(cosets.len(), |i| {
            self.coset_pencil(&cosets.representatives[i]).map(|(v, res)| (v.first().copied(), res))
        });
        let mut best: Option<(f64, usize)> = None;
        let mut residual: f64 = 0.0;
        for (i, p) in parts.into_iter().enumerate() {
            let (lo, res) = p?;
            residual = residual.max(res);
            if let Some(lo) = lo {
                if best.is_none_or(|(b, _)| lo < b) {
                    best = Some((lo, i));
                }
            }
        }
        let (gap, i) = best.ok_or_else(|| Error::InvalidArgument("no non-trivial coset".into()))?;
        Ok(GapResult {
            gap,
            achieving_rep: cosets.representatives[i].clone(),
            method: GapMethod::Coset,
            residual,
            cutoff: RANGE_CUTOFF,
        })
    }
}

pub fn dirichlet_block(rep: &PauliWord, model: &Model, bath: &Bath) -> Result<DirichletBlock> {
    Davies::new(model, bath.clone())?.dirichlet_block(rep)
}

pub fn variance_block(rep: &PauliWord, model: &Model, beta: f64) -> Result<VarianceBlock> {
    Davies::new(model, Bath::metropolis(beta)?)?.variance_block(rep)
}

pub fn rate(bath: &Bath, omega: &Energy) -> Result<f64> {
    bath.rate(omega)
}

pub fn spectral_gap(model: &Model, bath: &Bath, method: GapMethod, limits: &DaviesLimits) -> Result<GapResult> {
    match method {
        GapMethod::Coset => Davies::new(model, bath.clone())?.spectral_gap_coset(limits),
        GapMethod::Full => full_generator(model, bath, limits)?.spectral_gap(),
    }
}
