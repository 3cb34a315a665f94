//! Commuting Pauli Hamiltonians `H = −Σ_k J_k g_k`: parity check, syndromes,
//! spectrum and Gibbs weights.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gf2::{self, Echelon};
use crate::pauli::{parse_pauli, Letter, PauliWord, WeightOneSet};

/// Exact energies and couplings.
pub type Energy = Ratio<i64>;

/// Syndrome bit vector of length M.
pub type Syndrome = BitVec;

/// Largest syndrome rank that [`Model::syndrome_table`] will enumerate.
pub const MAX_TABLE_RANK: usize = 24;

/// Parse `"-1.25"`, `"3"`, `"1e-2"` or `"1/3"` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Energy> {
    let bad = || Error::InvalidCoupling(text.to_string());
    let t = text.trim();
    if let Some((a, b)) = t.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| bad())?;
        let den: i64 = b.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: String = int.chars().chain(frac.chars()).collect();
    let mut num: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let mut scale = exp - frac.len() as i32;
    let mut den: i64 = 1;
    while scale > 0 {
        num = num.checked_mul(10).ok_or_else(bad)?;
        scale -= 1;
    }
    while scale < 0 {
        den = den.checked_mul(10).ok_or_else(bad)?;
        scale += 1;
    }
    if neg {
        num = -num;
    }
    Ok(Ratio::new(num, den))
}

pub fn energy_to_f64(e: &Energy) -> f64 {
    e.to_f64().unwrap_or(f64::NAN)
}

/// Rows of `E = (G_Z^T, G_X^T)`, each of length 2N.
#[derive(Clone, Debug)]
pub struct ParityCheck {
    rows: Vec<BitVec>,
}

impl ParityCheck {
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Column `j` of E: the syndrome of the unit word at position `j` of `(x | z)`.
    pub fn column(&self, j: usize) -> Syndrome {
        let mut s = BitVec::zeros(self.rows.len());
        for (k, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                s.set(k, true);
            }
        }
        s
    }
}

/// `Im(E)` with coordinates relative to a fixed basis.
#[derive(Clone, Debug)]
pub struct SyndromeSpace {
    echelon: Echelon,
    preimages: Vec<PauliWord>,
    n: usize,
}

impl SyndromeSpace {
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn basis(&self) -> &[Syndrome] {
        self.echelon.basis()
    }

    /// `log₂` of the trace of each projector P(a): N − r.
    pub fn multiplicity_log2(&self) -> usize {
        self.n - self.rank()
    }

    pub fn is_valid(&self, a: &Syndrome) -> bool {
        self.echelon.contains(a)
    }

    /// Index of a valid syndrome in the enumeration; XOR of syndromes is XOR of indices.
    pub fn index_of(&self, a: &Syndrome) -> Option<usize> {
        assert!(self.rank() < 64);
        self.echelon.coords(a).map(|c| c.to_u64() as usize)
    }

    pub fn syndrome_at(&self, index: usize) -> Syndrome {
        let mut s = BitVec::zeros(self.echelon.len());
        for (k, b) in self.basis().iter().enumerate() {
            if (index >> k) & 1 == 1 {
                s.xor_assign(b);
            }
        }
        s
    }

    /// A word whose syndrome is `syndrome_at(index)`.
    pub fn preimage(&self, index: usize) -> PauliWord {
        let mut w = PauliWord::identity(self.n);
        for (k, p) in self.preimages.iter().enumerate() {
            if (index >> k) & 1 == 1 {
                w.compose_assign(p);
            }
        }
        w
    }
}

/// Enumerated valid syndromes with integer-scaled energies.
#[derive(Clone, Debug)]
pub struct SyndromeTable {
    pub syndromes: Vec<Syndrome>,
    /// `ε_a · den`.
    pub energy_num: Vec<i64>,
    pub den: i64,
}

impl SyndromeTable {
    pub fn len(&self) -> usize {
        self.syndromes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syndromes.is_empty()
    }

    pub fn energy(&self, index: usize) -> Energy {
        Ratio::new(self.energy_num[index], self.den)
    }
}

#[derive(Clone, Debug)]
pub struct GibbsTable {
    pub beta: f64,
    pub energies: Vec<Energy>,
    /// `ρ_a`, indexed like the syndrome enumeration.
    pub weights: Vec<f64>,
    /// `ln Z` for the unshifted energies.
    pub ln_partition: f64,
    pub multiplicity_log2: usize,
    /// `ln ‖ρ^{−1}‖ = ln Z + β ε_max`.
    pub ln_inv_min: f64,
}

impl GibbsTable {
    pub fn partition(&self) -> f64 {
        libm::exp(self.ln_partition)
    }

    /// `Σ_a ρ_a 2^{N−r}`; equals one.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum::<f64>() * libm::ldexp(1.0, self.multiplicity_log2 as i32)
    }
}

/// A validated set of commuting generators with couplings.
#[derive(Clone, Debug)]
pub struct Model {
    name: Option<String>,
    n: usize,
    generators: Vec<PauliWord>,
    couplings: Vec<Energy>,
    den: i64,
    scaled: Vec<i64>,
    parity: ParityCheck,
    space: SyndromeSpace,
    image: Echelon,
}

impl Model {
    pub fn new(generators: Vec<PauliWord>, couplings: Vec<Energy>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        if generators.len() != couplings.len() {
            return Err(Error::CountMismatch { generators: generators.len(), couplings: couplings.len() });
        }
        let n = generators[0].n();
        for g in &generators {
            if g.n() != n {
                return Err(Error::LengthMismatch(n, g.n()));
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_identity() {
                return Err(Error::IdentityGenerator(i));
            }
            for (j, h) in generators.iter().enumerate().skip(i + 1) {
                if g.anticommutes(h) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        check_signs(&generators)?;

        let m = generators.len();
        let den = couplings.iter().fold(1i64, |acc, j| acc.lcm(j.denom()));
        let scaled = couplings.iter().map(|j| j.numer() * (den / j.denom())).collect();

        let rows = generators.iter().map(|g| g.z().concat(g.x())).collect();
        let parity = ParityCheck { rows };
        let mut echelon = Echelon::new(m, m.min(2 * n));
        let mut preimages = Vec::new();
        for j in 0..2 * n {
            if echelon.insert(&parity.column(j)) {
                preimages.push(PauliWord::from_bitvec(&unit(2 * n, j)));
            }
        }
        let mut image = Echelon::new(2 * n, m.min(2 * n));
        for g in &generators {
            image.insert(&g.to_bitvec());
        }
        let model = Self {
            name: None,
            n,
            generators,
            couplings,
            den,
            scaled,
            parity,
            space: SyndromeSpace { echelon, preimages, n },
            image,
        };
        debug_assert!(model.eg_is_zero());
        Ok(model)
    }

    /// `build_model` from letter strings and decimal couplings.
    pub fn parse(generators: &[&str], couplings: &[&str]) -> Result<Self> {
        let gs = generators.iter().map(|g| parse_pauli(g)).collect::<Result<Vec<_>>>()?;
        let js = couplings.iter().map(|j| parse_decimal(j)).collect::<Result<Vec<_>>>()?;
        Self::new(gs, js)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.generators
    }

    pub fn couplings(&self) -> &[Energy] {
        &self.couplings
    }

    /// Common denominator of the couplings.
    pub fn den(&self) -> i64 {
        self.den
    }

    /// `J_k · den`.
    pub fn scaled_couplings(&self) -> &[i64] {
        &self.scaled
    }

    pub fn parity_check(&self) -> &ParityCheck {
        &self.parity
    }

    pub fn syndrome_space(&self) -> &SyndromeSpace {
        &self.space
    }

    /// Row space of G inside Z₂^{2N}.
    pub fn stabilizer_image(&self) -> &Echelon {
        &self.image
    }

    pub fn in_stabilizer(&self, w: &PauliWord) -> bool {
        self.image.contains(&w.to_bitvec())
    }

    /// `E·G = 0`, checked entrywise.
    pub fn eg_is_zero(&self) -> bool {
        self.generators.iter().all(|g| self.parity.rows.iter().all(|r| !r.dot(&g.to_bitvec())))
    }

    pub fn syndrome(&self, w: &PauliWord) -> Result<Syndrome> {
        if w.n() != self.n {
            return Err(Error::LengthMismatch(self.n, w.n()));
        }
        Ok(self.syndrome_unchecked(w))
    }

    pub(crate) fn syndrome_unchecked(&self, w: &PauliWord) -> Syndrome {
        let mut s = BitVec::zeros(self.m());
        for (k, g) in self.generators.iter().enumerate() {
            if g.anticommutes(w) {
                s.set(k, true);
            }
        }
        s
    }

    fn check_valid(&self, a: &Syndrome) -> Result<()> {
        if a.len() != self.m() {
            return Err(Error::LengthMismatch(self.m(), a.len()));
        }
        if !self.space.is_valid(a) {
            return Err(Error::InvalidSyndrome);
        }
        Ok(())
    }

    pub(crate) fn energy_num(&self, a: &Syndrome) -> i64 {
        self.scaled.iter().enumerate().map(|(k, &j)| if a.get(k) { j } else { -j }).sum()
    }

    /// `ε_a = −Σ_k J_k (−1)^{a_k}`.
    pub fn energy(&self, a: &Syndrome) -> Result<Energy> {
        self.check_valid(a)?;
        Ok(Ratio::new(self.energy_num(a), self.den))
    }

    /// `ω^α(a) · den`.
    pub(crate) fn bohr_num(&self, alpha_syndrome: &Syndrome, a: &Syndrome) -> i64 {
        -2 * alpha_syndrome.iter_ones().map(|k| if a.get(k) { -self.scaled[k] } else { self.scaled[k] }).sum::<i64>()
    }

    /// `ω^α(a) = ε_a − ε_{a⊕e(α)}`.
    pub fn bohr_frequency(&self, alpha: &PauliWord, a: &Syndrome) -> Result<Energy> {
        self.check_valid(a)?;
        let e = self.syndrome(alpha)?;
        Ok(Ratio::new(self.bohr_num(&e, a), self.den))
    }

    /// `Δ = max_{α∈W₁, a valid} |ω^α(a)|`. With independent generators this is
    /// `max_α 2 Σ_k |J_k| e_k(α)`; otherwise the syndrome table is scanned,
    /// falling back to that closed form (an upper bound) past the table limit.
    pub fn max_bohr(&self) -> Energy {
        let w1 = WeightOneSet::new(self.n);
        let closed = || {
            w1.words()
                .iter()
                .map(|a| self.syndrome_unchecked(a).iter_ones().map(|k| 2 * self.scaled[k].abs()).sum::<i64>())
                .max()
                .unwrap_or(0)
        };
        let best = if self.rank() == self.generators.len() {
            closed()
        } else {
            match self.syndrome_table() {
                Ok(t) => w1
                    .words()
                    .iter()
                    .map(|a| {
                        let e = self.syndrome_unchecked(a);
                        t.syndromes.iter().map(|s| self.bohr_num(&e, s).abs()).max().unwrap_or(0)
                    })
                    .max()
                    .unwrap_or(0),
                Err(_) => closed(),
            }
        };
        Ratio::new(best, self.den)
    }

    /// `max_k |J_k|`.
    pub fn max_coupling(&self) -> Energy {
        self.couplings.iter().map(|j| j.abs()).max().unwrap_or_else(Energy::zero)
    }

    pub fn syndrome_table(&self) -> Result<SyndromeTable> {
        let r = self.rank();
        if r > MAX_TABLE_RANK {
            return Err(Error::SizeLimit { what: "syndrome enumeration rank", size: r, limit: MAX_TABLE_RANK });
        }
        let mut syndromes = Vec::with_capacity(1 << r);
        syndromes.push(BitVec::zeros(self.m()));
        for k in 0..r {
            let b = &self.space.basis()[k];
            for i in 0..(1usize << k) {
                let s = syndromes[i].xor(b);
                syndromes.push(s);
            }
        }
        let energy_num = syndromes.iter().map(|s| self.energy_num(s)).collect();
        Ok(SyndromeTable { syndromes, energy_num, den: self.den })
    }

    /// Syndrome index of every word, indexed by [`PauliWord::index`]; `N ≤ 12`.
    pub fn word_syndrome_indices(&self) -> Result<Vec<usize>> {
        let n = self.n;
        if n > 12 {
            return Err(Error::SizeLimit { what: "word table (N)", size: n, limit: 12 });
        }
        let space = &self.space;
        let units: Vec<usize> = (0..2 * n)
            .map(|j| space.index_of(&self.syndrome_unchecked(&PauliWord::from_index(n, 1u64 << j))).expect("image"))
            .collect();
        let total = 1usize << (2 * n);
        let mut out = alloc::vec![0usize; total];
        for idx in 1..total {
            let low = idx.trailing_zeros() as usize;
            out[idx] = out[idx & (idx - 1)] ^ units[low];
        }
        Ok(out)
    }

    pub fn gibbs(&self, beta: f64) -> Result<GibbsTable> {
        let table = self.syndrome_table()?;
        GibbsTable::new(self, &table, beta)
    }
}

impl GibbsTable {
    pub fn new(model: &Model, table: &SyndromeTable, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!("beta must be finite and >= 0, got {beta}")));
        }
        let den = table.den as f64;
        let e: Vec<f64> = table.energy_num.iter().map(|&x| x as f64 / den).collect();
        let emin = e.iter().cloned().fold(f64::INFINITY, f64::min);
        let emax = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = e.iter().map(|&x| libm::exp(-beta * (x - emin))).collect();
        let mult = model.space.multiplicity_log2();
        let shifted_z = w.iter().sum::<f64>() * libm::ldexp(1.0, mult as i32);
        let weights = w.iter().map(|x| x / shifted_z).collect();
        let ln_z = libm::log(shifted_z) - beta * emin;
        Ok(Self {
            beta,
            energies: (0..table.len()).map(|i| table.energy(i)).collect(),
            weights,
            ln_partition: ln_z,
            multiplicity_log2: mult,
            ln_inv_min: libm::log(shifted_z) + beta * (emax - emin),
        })
    }
}

fn unit(len: usize, j: usize) -> BitVec {
    let mut v = BitVec::zeros(len);
    v.set(j, true);
    v
}

/// Exponent of `i` in `σ(a)σ(b) = i^k σ(a⊕b)` for Hermitian Paulis.
fn product_phase(a: &PauliWord, b: &PauliWord) -> u32 {
    let mut k = 0u32;
    for s in 0..a.n() {
        let (x1, z1) = a.letter(s).bits();
        let (x2, z2) = b.letter(s).bits();
        let (x3, z3) = (x1 ^ x2, z1 ^ z2);
        let t = (x1 & z1) as i32 + (x2 & z2) as i32 + 2 * (z1 & x2) as i32 - (x3 & z3) as i32;
        k += t.rem_euclid(4) as u32;
    }
    k % 4
}

/// Dependent products of generators must equal +1, otherwise no valid
/// syndrome enumeration by `Im(E)` exists.
fn check_signs(generators: &[PauliWord]) -> Result<()> {
    let n = generators[0].n();
    let cols: Vec<BitVec> = generators.iter().map(|g| g.to_bitvec()).collect();
    for rel in gf2::kernel(&cols, 2 * n) {
        let mut acc = PauliWord::identity(n);
        let mut phase = 0u32;
        for i in rel.iter_ones() {
            phase += product_phase(&acc, &generators[i]);
            acc.compose_assign(&generators[i]);
        }
        debug_assert!(acc.is_identity());
        if !phase.is_multiple_of(4) {
            return Err(Error::InconsistentSigns(rel.iter_ones().last().unwrap_or(0)));
        }
    }
    Ok(())
}

/// Open (`periodic = false`) or closed Ising chain `−J Σ Z_i Z_{i+1}`.
pub fn ising_chain(n: usize, j: Energy, periodic: bool) -> Result<Model> {
    if n < 2 {
        return Err(Error::TooSmall("ising chain"));
    }
    let mut gens = Vec::new();
    let bonds = if periodic && n > 2 { n } else { n - 1 };
    for i in 0..bonds {
        let mut w = PauliWord::identity(n);
        w.set(i, Letter::Z);
        w.set((i + 1) % n, Letter::Z);
        gens.push(w);
    }
    let m = gens.len();
    let kind = if periodic { "pbc" } else { "obc" };
    Ok(Model::new(gens, alloc::vec![j; m])?.with_name(format!("ising_{kind}_{n}")))
}

/// Open cluster chain `−J Σ Z_{i−1} X_i Z_{i+1}`.
pub fn cluster_chain(n: usize, j: Energy) -> Result<Model> {
    if n < 3 {
        return Err(Error::TooSmall("cluster chain"));
    }
    let gens: Vec<PauliWord> = (1..n - 1)
        .map(|i| {
            let mut w = PauliWord::identity(n);
            w.set(i - 1, Letter::Z);
            w.set(i, Letter::X);
            w.set(i + 1, Letter::Z);
            w
        })
        .collect();
    let m = gens.len();
    Ok(Model::new(gens, alloc::vec![j; m])?.with_name(format!("cluster_{n}")))
}

/// Edge qubits of an `lx × ly` torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusLayout {
    pub lx: usize,
    pub ly: usize,
}

impl TorusLayout {
    pub fn n(&self) -> usize {
        2 * self.lx * self.ly
    }

    /// Horizontal edge leaving vertex `(row, col)` to the right.
    pub fn horizontal(&self, row: usize, col: usize) -> usize {
        (row % self.ly) * self.lx + col % self.lx
    }

    /// Vertical edge leaving vertex `(row, col)` downward.
    pub fn vertical(&self, row: usize, col: usize) -> usize {
        self.lx * self.ly + (row % self.ly) * self.lx + col % self.lx
    }

    pub fn plaquette(&self, row: usize, col: usize) -> [usize; 4] {
        [self.horizontal(row, col), self.horizontal(row + 1, col), self.vertical(row, col), self.vertical(row, col + 1)]
    }

    pub fn vertex(&self, row: usize, col: usize) -> [usize; 4] {
        let (r, c) = (row + self.ly, col + self.lx);
        [self.horizontal(row, col), self.horizontal(row, c - 1), self.vertical(row, col), self.vertical(r - 1, col)]
    }

    /// Plaquettes (X type) then vertices (Z type), row-major.
    pub fn generators(&self) -> Vec<PauliWord> {
        let n = self.n();
        let mut out = Vec::new();
        for (letter, star) in [(Letter::X, false), (Letter::Z, true)] {
            for row in 0..self.ly {
                for col in 0..self.lx {
                    let mut w = PauliWord::identity(n);
                    let sites = if star { self.vertex(row, col) } else { self.plaquette(row, col) };
                    for s in sites {
                        w.set(s, letter);
                    }
                    out.push(w);
                }
            }
        }
        out
    }
}

pub fn toric_code(lx: usize, ly: usize, j: Energy) -> Result<Model> {
    if lx < 2 || ly < 2 {
        return Err(Error::TooSmall("toric code"));
    }
    let gens = TorusLayout { lx, ly }.generators();
    let m = gens.len();
    Ok(Model::new(gens, alloc::vec![j; m])?.with_name(format!("toric_{lx}x{ly}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli;
    use proptest::prelude::*;

    fn r(n: i64) -> Energy {
        Ratio::from_integer(n)
    }

    fn syn(bits: &[bool]) -> Syndrome {
        BitVec::from_bools(bits)
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("1").unwrap(), r(1));
        assert_eq!(parse_decimal("-1.25").unwrap(), Ratio::new(-5, 4));
        assert_eq!(parse_decimal(".5").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_decimal("2e-1").unwrap(), Ratio::new(1, 5));
        assert_eq!(parse_decimal("1/3").unwrap(), Ratio::new(1, 3));
        assert!(parse_decimal("1.x").is_err());
        assert!(parse_decimal("").is_err());
    }

    #[test]
    fn ising_two() {
        let m = Model::parse(&["ZZ"], &["1"]).unwrap();
        assert_eq!((m.m(), m.rank()), (1, 1));
        assert_eq!(m.syndrome_space().multiplicity_log2(), 1);
        let t = m.syndrome_table().unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(m.energy(&syn(&[false])).unwrap(), r(-1));
        assert_eq!(m.energy(&syn(&[true])).unwrap(), r(1));
        let x1 = parse_pauli("XI").unwrap();
        assert_eq!(m.bohr_frequency(&x1, &syn(&[false])).unwrap(), r(-2));
        assert_eq!(m.max_bohr(), r(2));
    }

    #[test]
    fn anticommuting_rejected() {
        assert_eq!(Model::parse(&["XX", "ZI"], &["1", "1"]).unwrap_err(), Error::NonCommuting(0, 1));
        assert_eq!(Model::parse(&["II"], &["1"]).unwrap_err(), Error::IdentityGenerator(0));
        assert_eq!(Model::parse(&["XX", "ZZ", "YY"], &["1", "1", "1"]).unwrap_err(), Error::InconsistentSigns(2));
        assert!(Model::parse(&["XX", "ZZ", "YY"], &["1", "1", "-1"]).is_err());
        assert!(Model::parse(&["XX", "ZZ"], &["1", "1"]).is_ok());
        assert!(Model::parse(&["ZZ", "ZZ"], &["1", "1"]).is_ok());
    }

    #[test]
    fn ising_three() {
        let m = ising_chain(3, r(1), false).unwrap();
        let names: Vec<_> = m.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["ZZI", "IZZ"]);
        assert_eq!(m.syndrome(&parse_pauli("IXI").unwrap()).unwrap(), syn(&[true, true]));
        assert!(m.syndrome(&parse_pauli("III").unwrap()).unwrap().is_zero());
        assert!(m.syndrome(&parse_pauli("XXX").unwrap()).unwrap().is_zero());
        assert_eq!(m.energy(&syn(&[true, false])).unwrap(), r(0));
        assert_eq!(m.energy(&syn(&[false, false])).unwrap(), r(-2));
        assert_eq!(m.bohr_frequency(&parse_pauli("IXI").unwrap(), &syn(&[false, false])).unwrap(), r(-4));
        assert_eq!(m.bohr_frequency(&parse_pauli("ZII").unwrap(), &syn(&[true, false])).unwrap(), r(0));
        assert_eq!(m.max_bohr(), r(4));
    }

    #[test]
    fn builtins() {
        let c = cluster_chain(4, r(1)).unwrap();
        let names: Vec<_> = c.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["ZXZI", "IZXZ"]);
        let t = toric_code(2, 2, r(1)).unwrap();
        assert_eq!((t.n(), t.m(), t.rank()), (8, 8, 6));
        let t3 = toric_code(3, 2, r(1)).unwrap();
        assert_eq!((t3.n(), t3.rank()), (12, 10));
        assert!(ising_chain(1, r(1), false).is_err());
        assert!(cluster_chain(2, r(1)).is_err());
        assert!(toric_code(1, 2, r(1)).is_err());
        assert_eq!(ising_chain(4, r(1), true).unwrap().m(), 4);
        let zero = Model::parse(&["ZZ"], &["0"]).unwrap();
        assert_eq!(zero.max_bohr(), r(0));
    }

    #[test]
    fn invalid_syndrome() {
        let m = Model::parse(&["ZZ", "ZZ"], &["1", "2"]).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.energy(&syn(&[true, false])), Err(Error::InvalidSyndrome));
        assert_eq!(m.energy(&syn(&[true, true])).unwrap(), r(3));
    }

    #[test]
    fn gibbs_values() {
        let m = ising_chain(2, r(1), false).unwrap();
        let g0 = m.gibbs(0.0).unwrap();
        assert!(g0.weights.iter().all(|&w| (w - 0.25).abs() < 1e-15));
        assert!((g0.partition() - 4.0).abs() < 1e-12);
        let g1 = m.gibbs(1.0).unwrap();
        assert!((g1.weights[0] / g1.weights[1] - libm::exp(2.0)).abs() < 1e-12);
        assert!(m.gibbs(-1.0).is_err());
        let big = m.gibbs(400.0).unwrap();
        assert!((big.total() - 1.0).abs() < 1e-12);
        assert!(big.weights[1] >= 0.0);
    }

    #[test]
    fn builtin_invariants() {
        let j = r(1);
        let models =
            [ising_chain(2, j, false), ising_chain(5, j, false), ising_chain(4, j, true), cluster_chain(5, j), toric_code(2, 2, j)];
        for m in models {
            let m = m.unwrap();
            assert!(m.eg_is_zero());
            let t = m.syndrome_table().unwrap();
            for beta in [0.0, 0.5, 1.0, 2.0] {
                let g = GibbsTable::new(&m, &t, beta).unwrap();
                assert!((g.total() - 1.0).abs() < 1e-12);
                let bound: Energy = m.couplings().iter().map(|c| c.abs()).sum();
                assert!(g.energies.iter().all(|e| e.abs() <= bound));
            }
            if m.n() > 5 {
                continue;
            }
            let w1 = WeightOneSet::new(m.n());
            for alpha in w1.words() {
                let e = m.syndrome(alpha).unwrap();
                for a in &t.syndromes {
                    let lhs = m.energy(a).unwrap() - m.energy(&a.xor(&e)).unwrap();
                    assert_eq!(lhs, m.bohr_frequency(alpha, a).unwrap());
                    assert_eq!(m.bohr_frequency(alpha, &a.xor(&e)).unwrap(), -lhs);
                }
            }
        }
    }

    #[test]
    fn indices_are_linear() {
        let m = toric_code(2, 2, r(1)).unwrap();
        let s = m.syndrome_space();
        for i in 0..(1 << s.rank()) {
            let a = s.syndrome_at(i);
            assert_eq!(s.index_of(&a), Some(i));
            assert_eq!(m.syndrome(&s.preimage(i)).unwrap(), a);
        }
    }

    fn word(n: usize) -> impl Strategy<Value = PauliWord> {
        proptest::collection::vec(0u8..4, n).prop_map(|v| {
            let ls: Vec<Letter> = v.into_iter().map(|k| [Letter::I, Letter::X, Letter::Y, Letter::Z][k as usize]).collect();
            PauliWord::from_letters(&ls)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn syndrome_linear(a in word(8), b in word(8)) {
            let m = toric_code(2, 2, r(1)).unwrap();
            let lhs = m.syndrome(&a.compose(&b)).unwrap();
            prop_assert_eq!(lhs, m.syndrome(&a).unwrap().xor(&m.syndrome(&b).unwrap()));
            prop_assert!(m.syndrome_space().is_valid(&m.syndrome(&a).unwrap()));
        }
    }

    #[test]
    fn max_bohr_uses_realized_frequencies() {
        assert_eq!(ising_chain(3, Energy::from_integer(1), false).unwrap().max_bohr(), Energy::from_integer(4));
        assert_eq!(ising_chain(2, Energy::from_integer(1), false).unwrap().max_bohr(), Energy::from_integer(2));
        let dup = Model::parse(&["Y", "Y"], &["1/2", "-1/2"]).unwrap();
        assert_eq!(dup.max_bohr(), Energy::from_integer(0));
        let dup = Model::parse(&["Y", "Y"], &["1", "1/2"]).unwrap();
        assert_eq!(dup.max_bohr(), Energy::from_integer(3));
    }
}
