//! Number formatting and the sweep CSV schema.

use stabgap_core::bounds::BoundReport;
use stabgap_core::model::energy_to_f64;
use stabgap_core::Energy;

pub const CSV_COLUMNS: [&str; 11] = [
    "beta",
    "lambda_exact",
    "gen_bound",
    "special_bound",
    "epsilon_bar",
    "exact_flag",
    "eta_star",
    "h_star",
    "delta_max",
    "c_beta",
    "t_mix_bound",
];

/// 12 significant digits, trailing zeros trimmed, `%g`-style exponent switch.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{exp}", trim(mant.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_g).unwrap_or_default()
}

/// Exact rational as `p` or `p/q`.
pub fn fmt_energy(e: &Energy) -> String {
    if *e.denom() == 1 {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

pub fn csv_record(r: &BoundReport) -> Vec<String> {
    vec![
        fmt_g(r.beta),
        fmt_opt(r.lambda_exact),
        fmt_g(r.gen_bound),
        fmt_opt(r.special_bound),
        fmt_g(energy_to_f64(&r.epsilon_bar)),
        r.exact.to_string(),
        r.eta_star.to_string(),
        fmt_g(r.h_star),
        fmt_g(energy_to_f64(&r.delta_max)),
        fmt_opt(r.c_beta),
        fmt_opt(r.mixing_time),
    ]
}

/// Header comment lines, then the column row, then one row per report.
pub fn write_csv(header: &[(String, String)], rows: &[BoundReport]) -> Result<Vec<u8>, csv::Error> {
    let mut out = Vec::new();
    for (k, v) in header {
        out.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record(csv_record(r))?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_g(4.0), "4");
        assert_eq!(fmt_g(0.25), "0.25");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(fmt_g(123456.789), "123456.789");
        assert_eq!(fmt_g(1.5e-9), "1.5e-9");
        assert_eq!(fmt_g(6.02214076e23), "6.02214076e23");
        assert_eq!(fmt_g((-8.0f64).exp() / 12.0), "2.79552189919e-5");
    }

    #[test]
    fn energies() {
        assert_eq!(fmt_energy(&Energy::from_integer(2)), "2");
        assert_eq!(fmt_energy(&Energy::new(-3, 6)), "-1/2");
    }
}
