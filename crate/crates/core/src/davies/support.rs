//! Canonical-path support number bound.

use crate::barrier::{Limits, PathFamily, PathTable};
use crate::error::{Error, Result};
use crate::model::Model;

use super::{Bath, Davies, DaviesLimits};

/// `max_{(a,μ)} Σ_{edges ξ̂ of μ̂_a} 4 / (2^N h ρ_{a^ξ}) · Σ_{η̂_a through ξ̂} ρ_a ρ_{a^η}`,
/// an upper bound on `1/λ`.
pub fn support_bound_canonical(model: &Model, bath: &Bath, family: &PathFamily, limits: &DaviesLimits) -> Result<f64> {
    let n = model.n();
    if n > limits.support_n {
        return Err(Error::SizeLimit { what: "support bound (N)", size: n, limit: limits.support_n });
    }
    let table = PathTable::new(model, family, &Limits { path_table_n: limits.support_n, ..Limits::default() })?;
    let dav = Davies::new(model, bath.clone())?;
    let syn = model.word_syndrome_indices()?;
    let rho = dav.rho();
    let pref = 4.0 / libm::ldexp(1.0, n as i32);
    let mut worst: f64 = 0.0;
    for a in 0..dav.dim() {
        for path in &table.paths {
            let mut node = 0u64;
            let mut total = 0.0;
            for &k in path {
                let axi = a ^ syn[node as usize];
                let h = dav.rate_at(k as usize, axi);
                let through = &table.through[node as usize * 3 * n + k as usize];
                let s: f64 = through.iter().map(|&eta| rho[a] * rho[a ^ syn[eta as usize]]).sum();
                total += pref / (h * rho[axi]) * s;
                node ^= table.step_word(k);
            }
            worst = worst.max(total);
        }
    }
    Ok(worst)
}
