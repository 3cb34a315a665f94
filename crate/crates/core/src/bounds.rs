//! Analytic lower bounds on the Davies gap and the resulting mixing times,
//! checked against exact coset gaps.

use alloc::vec::Vec;

use crate::barrier::{generalized_barrier_exact, heuristic_barrier, BarrierReport, Limits, PathFamily, PathTable, Targets};
use crate::davies::{Bath, BathKind, Davies, DaviesLimits};
use crate::error::{Error, Result};
use crate::model::{energy_to_f64, Energy, Model};
use crate::par;

/// Absolute tolerance for `λ ≥ bound` checks.
pub const VERIFY_TOL: f64 = 1e-9;

/// One β row of bound evaluations.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub beta: f64,
    pub epsilon_bar: Energy,
    /// ε̄ is exact rather than the cost of a fixed family.
    pub exact: bool,
    pub eta_star: usize,
    pub h_star: f64,
    pub delta_max: Energy,
    pub gen_bound: f64,
    pub special_bound: Option<f64>,
    pub c_beta: Option<f64>,
    /// `h*/(4C(β))·e^{−2βε̄}`.
    pub c_bound: Option<f64>,
    pub beta_zero_floor: f64,
    /// `(OBC, PBC)`.
    pub one_d_bounds: Option<(f64, f64)>,
    pub periodic: bool,
    pub lambda_exact: Option<f64>,
    pub mixing_time: Option<f64>,
    pub pass: bool,
}

impl BoundReport {
    /// `λ_exact − bound` for every emitted bound that is a theorem for this row.
    pub fn margins(&self) -> Vec<(&'static str, f64)> {
        let Some(l) = self.lambda_exact else { return Vec::new() };
        let mut out = alloc::vec![("gen_bound", l - self.gen_bound)];
        if let Some(s) = self.special_bound {
            out.push(("special_bound", l - s));
        }
        if let Some(c) = self.c_bound {
            out.push(("c_bound", l - c));
        }
        if let Some((obc, pbc)) = self.one_d_bounds {
            out.push(if self.periodic { ("one_d_pbc", l - pbc) } else { ("one_d_obc", l - obc) });
        }
        if self.beta == 0.0 {
            out.push(("beta_zero_floor", l - self.beta_zero_floor));
        }
        out
    }
}

pub fn h_star(model: &Model, bath: &Bath) -> Result<f64> {
    Ok(Davies::new(model, bath.clone())?.h_star())
}

/// `h*/(4η*)·e^{−2βε̄}`.
pub fn gen_bound(model: &Model, bath: &Bath, report: &BarrierReport) -> Result<f64> {
    if report.eta_star == 0 {
        return Err(Error::InvalidArgument("barrier report has η* = 0".into()));
    }
    let h = h_star(model, bath)?;
    Ok(h / (4.0 * report.eta_star as f64) * libm::exp(-2.0 * bath.beta * energy_to_f64(&report.barrier)))
}

/// `(h*/4)·e^{−2βε̄′}`; only for families that touch every site at most once.
pub fn special_bound(model: &Model, bath: &Bath, report: &BarrierReport) -> Result<f64> {
    if !report.single_visit {
        return Err(Error::NotSingleVisit);
    }
    let h = h_star(model, bath)?;
    Ok(h / 4.0 * libm::exp(-2.0 * bath.beta * energy_to_f64(&report.barrier)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CBeta {
    pub value: f64,
    /// `h*/(4C)·e^{−2βε̄′}` with ε̄′ the family's own barrier.
    pub bound: f64,
    pub epsilon_bar: f64,
}

/// `C(β) = max_{(a,μ)} Σ_{ξ̂∈μ̂_a} 2^{−N} Σ_{η̂ through ξ̂} ρ_{a^{η⊕ξ}}`.
pub fn c_beta(model: &Model, bath: &Bath, family: &PathFamily, limits: &Limits) -> Result<CBeta> {
    let n = model.n();
    let table = PathTable::new(model, family, limits)?;
    let dav = Davies::new(model, bath.clone())?;
    let syn = model.word_syndrome_indices()?;
    let rho = dav.rho();
    let scale = libm::ldexp(1.0, -(n as i32));
    let mut worst: f64 = 0.0;
    for a in 0..dav.dim() {
        for path in &table.paths {
            let mut node = 0u64;
            let mut total = 0.0;
            for &k in path {
                let through = &table.through[node as usize * 3 * n + k as usize];
                total += scale * through.iter().map(|&eta| rho[a ^ syn[(eta as u64 ^ node) as usize]]).sum::<f64>();
                node ^= table.step_word(k);
            }
            worst = worst.max(total);
        }
    }
    let eps = energy_to_f64(&heuristic_barrier(model, family, Targets::All, limits)?.barrier);
    let h = dav.h_star();
    Ok(CBeta { value: worst, bound: h / (4.0 * worst) * libm::exp(-2.0 * bath.beta * eps), epsilon_bar: eps })
}

/// `(3/4)·h*` at β = 0.
pub fn beta_zero_floor(kind: &BathKind) -> Result<f64> {
    Ok(0.75 * Bath::new(kind.clone(), 0.0)?.rate_at_zero()?)
}

/// `(½ ln‖ρ^{−1}‖ + ln(1/ε))/λ`.
pub fn mixing_time_bound(model: &Model, beta: f64, lambda: f64, epsilon: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("gap must be positive, got {lambda}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(alloc::format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    let g = model.gibbs(beta)?;
    Ok((0.5 * g.ln_inv_min - libm::log(epsilon)) / lambda)
}

/// Max number of generators straddling a bond of the ring `0..N`; generators
/// may wrap around.
pub fn cyclic_width(model: &Model) -> Result<usize> {
    Ok(ring_spans(model)?.0)
}

/// Width on the ring, and whether some generator crosses the bond `N−1 → 0`.
fn ring_spans(model: &Model) -> Result<(usize, bool)> {
    let n = model.n();
    let mut bonds = alloc::vec![0usize; n];
    for (k, g) in model.generators().iter().enumerate() {
        let occ: Vec<bool> = (0..n).map(|s| g.letter(s) != crate::pauli::Letter::I).collect();
        let starts: Vec<usize> = (0..n).filter(|&s| occ[s] && !occ[(s + n - 1) % n]).collect();
        if starts.len() > 1 {
            return Err(Error::NotOneDimensional(k));
        }
        let len = occ.iter().filter(|&&o| o).count();
        let s = starts.first().copied().unwrap_or(0);
        for i in 0..len.saturating_sub(1) {
            bonds[(s + i) % n] += 1;
        }
    }
    let wraps = n > 1 && bonds[n - 1] > 0;
    Ok((bonds.into_iter().max().unwrap_or(0), wraps))
}

/// `((h*/4)e^{−4βJ*wd}, (h*/4)e^{−8βJ*wd})`, or `None` when the generators do
/// not sit on contiguous stretches of the chain.
pub fn one_d_bounds(model: &Model, bath: &Bath) -> Result<Option<(f64, f64)>> {
    let wd = match cyclic_width(model) {
        Ok(w) => w as f64,
        Err(Error::NotOneDimensional(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let h = h_star(model, bath)?;
    let j = energy_to_f64(&model.max_coupling());
    let b = bath.beta;
    Ok(Some((h / 4.0 * libm::exp(-4.0 * b * j * wd), h / 4.0 * libm::exp(-8.0 * b * j * wd))))
}

/// Whether the chain closes into a ring, i.e. the PBC entry of [`one_d_bounds`] applies.
pub fn is_periodic(model: &Model) -> bool {
    matches!(ring_spans(model), Ok((_, true)))
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// `None` uses the exact barrier.
    pub family: Option<PathFamily>,
    pub targets: Targets,
    pub epsilon: f64,
    pub c_beta: bool,
    /// Absolute slack allowed in `λ ≥ bound`.
    pub tol: f64,
    pub limits: Limits,
    pub davies: DaviesLimits,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            family: None,
            targets: Targets::All,
            epsilon: 0.01,
            c_beta: true,
            tol: VERIFY_TOL,
            limits: Limits::default(),
            davies: DaviesLimits::default(),
        }
    }
}

/// The barrier a verification run uses: exact, or the given family's ε̄′.
pub fn barrier_for(model: &Model, config: &VerifyConfig) -> Result<BarrierReport> {
    match &config.family {
        None => generalized_barrier_exact(model, &config.limits),
        Some(f) => heuristic_barrier(model, f, config.targets, &config.limits),
    }
}

/// Evaluates one row; `lambda` is computed when `None`.
pub fn report(model: &Model, bath: &Bath, barrier: &BarrierReport, config: &VerifyConfig, lambda: Option<f64>) -> Result<BoundReport> {
    let beta = bath.beta;
    let h = h_star(model, bath)?;
    let gen = gen_bound(model, bath, barrier)?;
    let special = if barrier.single_visit { Some(special_bound(model, bath, barrier)?) } else { None };
    let c = if config.c_beta && model.n() <= config.limits.path_table_n {
        let fam = config.family.clone().unwrap_or_else(|| PathFamily::fixed_natural(model.n()));
        Some(c_beta(model, bath, &fam, &config.limits)?)
    } else {
        None
    };
    let lambda = match lambda {
        Some(l) => l,
        None => Davies::new(model, bath.clone())?.spectral_gap_coset(&config.davies)?.gap,
    };
    let mut row = BoundReport {
        beta,
        epsilon_bar: barrier.barrier,
        exact: barrier.exact,
        eta_star: barrier.eta_star,
        h_star: h,
        delta_max: model.max_bohr(),
        gen_bound: gen,
        special_bound: special,
        c_beta: c.map(|c| c.value),
        c_bound: c.map(|c| c.bound),
        beta_zero_floor: beta_zero_floor(&bath.kind)?,
        one_d_bounds: one_d_bounds(model, bath)?,
        periodic: is_periodic(model),
        lambda_exact: Some(lambda),
        mixing_time: Some(mixing_time_bound(model, beta, lambda, config.epsilon)?),
        pass: true,
    };
    row.pass = row.margins().iter().all(|&(_, m)| m >= -config.tol);
    Ok(row)
}

/// One row per β, in grid order; the barrier is computed once.
pub fn verify(model: &Model, kind: &BathKind, betas: &[f64], config: &VerifyConfig) -> Result<Vec<BoundReport>> {
    let barrier = barrier_for(model, config)?;
    let rows = par::map(betas.len(), |i| {
        let bath = Bath::new(kind.clone(), betas[i])?;
        report(model, &bath, &barrier, config, None)
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barrier::PauliPath;
    use crate::model::{cluster_chain, ising_chain, toric_code, TorusLayout};
    use crate::pauli::PauliWord;

    fn one() -> Energy {
        Energy::from_integer(1)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn h_star_examples() {
        let m3 = ising_chain(3, one(), false).unwrap();
        assert!(close(h_star(&m3, &Bath::metropolis(1.0).unwrap()).unwrap(), libm::exp(-4.0), 1e-15));
        assert_eq!(h_star(&m3, &Bath::metropolis(0.0).unwrap()).unwrap(), 1.0);
        let m2 = ising_chain(2, one(), false).unwrap();
        assert!(close(h_star(&m2, &Bath::glauber(1.0).unwrap()).unwrap(), 1.0 / (1.0 + libm::exp(2.0)), 1e-15));
    }

    #[test]
    fn gen_and_special_examples() {
        let l = Limits::default();
        let m3 = ising_chain(3, one(), false).unwrap();
        let fam = PathFamily::fixed_natural(3);
        let rep = heuristic_barrier(&m3, &fam, Targets::All, &l).unwrap();
        assert_eq!(rep.eta_star, 3);
        let b = Bath::metropolis(1.0).unwrap();
        assert!(close(gen_bound(&m3, &b, &rep).unwrap(), libm::exp(-8.0) / 12.0, 1e-14));
        assert!(close(gen_bound(&m3, &Bath::metropolis(0.0).unwrap(), &rep).unwrap(), 1.0 / 12.0, 1e-15));

        let m4 = ising_chain(4, one(), false).unwrap();
        let rep4 = heuristic_barrier(&m4, &PathFamily::fixed_natural(4), Targets::All, &l).unwrap();
        let h = h_star(&m4, &b).unwrap();
        assert!(close(special_bound(&m4, &b, &rep4).unwrap(), h / 4.0 * libm::exp(-4.0), 1e-14));
        assert!(special_bound(&m4, &b, &rep4).unwrap() >= gen_bound(&m4, &b, &rep4).unwrap());

        let c4 = cluster_chain(4, one()).unwrap();
        let repc = heuristic_barrier(&c4, &PathFamily::fixed_natural(4), Targets::All, &l).unwrap();
        let hc = h_star(&c4, &b).unwrap();
        assert!(special_bound(&c4, &b, &repc).unwrap() >= hc / 4.0 * libm::exp(-8.0) * (1.0 - 1e-14));
    }

    #[test]
    fn special_bound_refuses_double_visits() {
        let t = toric_code(2, 2, one()).unwrap();
        let rep = heuristic_barrier(&t, &PathFamily::CssString(TorusLayout { lx: 2, ly: 2 }), Targets::Sample { count: 64, seed: 1 }, &Limits::default()).unwrap();
        assert!(!rep.single_visit);
        assert!(matches!(special_bound(&t, &Bath::metropolis(1.0).unwrap(), &rep), Err(Error::NotSingleVisit)));
    }

    #[test]
    fn floors_and_mixing() {
        assert_eq!(beta_zero_floor(&BathKind::Metropolis).unwrap(), 0.75);
        assert_eq!(beta_zero_floor(&BathKind::Glauber).unwrap(), 0.375);
        let m2 = ising_chain(2, one(), false).unwrap();
        let t = mixing_time_bound(&m2, 0.0, 4.0, libm::exp(-0.5)).unwrap();
        assert!(close(t, (core::f64::consts::LN_2 + 0.5) / 4.0, 1e-14));
        let t2 = mixing_time_bound(&m2, 0.7, 2.0, 0.1).unwrap();
        let t4 = mixing_time_bound(&m2, 0.7, 4.0, 0.1).unwrap();
        assert!(close(t2, 2.0 * t4, 1e-15));
        let near = mixing_time_bound(&m2, 0.0, 1.0, 1.0 - 1e-15).unwrap();
        assert!(close(near, 2.0 * core::f64::consts::LN_2 / 2.0, 1e-12));
        assert!(mixing_time_bound(&m2, 0.0, 0.0, 0.5).is_err());
        assert!(mixing_time_bound(&m2, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn widths_on_rings() {
        assert_eq!(cyclic_width(&ising_chain(5, one(), false).unwrap()).unwrap(), 1);
        assert_eq!(cyclic_width(&ising_chain(5, one(), true).unwrap()).unwrap(), 1);
        assert_eq!(cyclic_width(&cluster_chain(5, one()).unwrap()).unwrap(), 2);
        assert_eq!(cyclic_width(&ising_chain(2, one(), false).unwrap()).unwrap(), 1);
        assert!(is_periodic(&ising_chain(4, one(), true).unwrap()));
        assert!(!is_periodic(&ising_chain(4, one(), false).unwrap()));
        assert!(one_d_bounds(&toric_code(2, 2, one()).unwrap(), &Bath::metropolis(1.0).unwrap()).unwrap().is_none());
    }

    /// Direct evaluation of C(β) from explicit paths, without the edge index.
    fn c_beta_oracle(model: &Model, bath: &Bath, family: &PathFamily) -> f64 {
        let n = model.n();
        let dav = Davies::new(model, bath.clone()).unwrap();
        let space = model.syndrome_space();
        let idx = |w: &PauliWord| space.index_of(&model.syndrome(w).unwrap()).unwrap();
        let paths: Vec<PauliPath> = (0..1u64 << (2 * n)).map(|i| family.path(&PauliWord::from_index(n, i)).unwrap()).collect();
        let mut worst: f64 = 0.0;
        for a in 0..dav.dim() {
            for mu in &paths {
                let pre = mu.prefixes();
                let mut total = 0.0;
                for (t, step) in mu.steps().iter().enumerate() {
                    for eta in &paths {
                        let ep = eta.prefixes();
                        let hit = eta.steps().iter().enumerate().any(|(s, st)| st == step && ep[s] == pre[t]);
                        if hit {
                            let w = eta.target().compose(&pre[t]);
                            total += dav.rho()[a ^ idx(&w)] / libm::ldexp(1.0, n as i32);
                        }
                    }
                }
                worst = worst.max(total);
            }
        }
        worst
    }

    #[test]
    fn c_beta_matches_direct_sum() {
        let l = Limits::default();
        for (m, beta) in [(ising_chain(2, one(), false).unwrap(), 1.0), (cluster_chain(3, one()).unwrap(), 0.4)] {
            let fam = PathFamily::fixed_natural(m.n());
            let b = Bath::metropolis(beta).unwrap();
            let c = c_beta(&m, &b, &fam, &l).unwrap();
            assert!(close(c.value, c_beta_oracle(&m, &b, &fam), 1e-13));
        }
    }

    #[test]
    fn c_beta_geometric_at_infinite_temperature() {
        let l = Limits::default();
        for m in [ising_chain(2, one(), false).unwrap(), ising_chain(3, one(), true).unwrap(), cluster_chain(3, one()).unwrap()] {
            let fam = PathFamily::fixed_natural(m.n());
            let c0 = c_beta(&m, &Bath::glauber(0.0).unwrap(), &fam, &l).unwrap();
            assert!(c0.value > 0.0 && c0.value <= 1.0 / 3.0 + 1e-12, "{}", c0.value);
            for beta in [0.5, 2.0] {
                let c = c_beta(&m, &Bath::metropolis(beta).unwrap(), &fam, &l).unwrap();
                assert!(c.value > 0.0 && c.value <= m.n() as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn verify_ising_three() {
        let m = ising_chain(3, one(), false).unwrap();
        let rows = verify(&m, &BathKind::Metropolis, &[0.0, 0.5, 1.0, 2.0], &VerifyConfig::default()).unwrap();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert!(r.pass, "{r:?}");
            assert!(r.exact);
            assert_eq!(r.epsilon_bar, Energy::from_integer(2));
        }
        assert!(close(rows[0].lambda_exact.unwrap(), 4.0, 1e-9));
    }

    #[test]
    fn inflated_barrier_only_weakens() {
        let m = ising_chain(3, one(), false).unwrap();
        let mut rep = generalized_barrier_exact(&m, &Limits::default()).unwrap();
        let b = Bath::metropolis(1.0).unwrap();
        let base = gen_bound(&m, &b, &rep).unwrap();
        rep.barrier = Energy::from_integer(5);
        let weak = gen_bound(&m, &b, &rep).unwrap();
        assert!(weak < base);
        let lam = Davies::new(&m, b).unwrap().spectral_gap_coset(&DaviesLimits::default()).unwrap().gap;
        assert!(lam >= weak);
    }

    #[test]
    fn mixing_scaling_ratio() {
        let l = Limits::default();
        let eps: f64 = 0.01;
        for beta in [0.0, 0.5, 1.0] {
            for n in 2..=4 {
                let m = ising_chain(n, one(), false).unwrap();
                let rep = heuristic_barrier(&m, &PathFamily::fixed_natural(n), Targets::All, &l).unwrap();
                let b = Bath::metropolis(beta).unwrap();
                let h = h_star(&m, &b).unwrap();
                let t = mixing_time_bound(&m, beta, gen_bound(&m, &b, &rep).unwrap(), eps).unwrap();
                let ratio = t * h / ((n * n) as f64 * libm::exp(2.0 * beta * 2.0));
                let cap = 4.0 * ((core::f64::consts::LN_2 + 2.0 * beta) / 2.0 + libm::log(1.0 / eps) / 2.0);
                assert!(ratio <= cap, "n={n} β={beta}: {ratio} > {cap}");
            }
        }
    }
}
