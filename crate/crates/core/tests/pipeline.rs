use stabgap_core::barrier::{heuristic_barrier, Limits, PathFamily, Targets};
use stabgap_core::bounds::{verify, VerifyConfig};
use stabgap_core::davies::{spectral_gap, Bath, BathKind, DaviesLimits, GapMethod};
use stabgap_core::model::{cluster_chain, ising_chain, toric_code, TorusLayout};
use stabgap_core::{Energy, Error};

#[test]
fn coset_and_full_gaps_agree() {
    let l = DaviesLimits::default();
    for m in [ising_chain(2, Energy::from_integer(1), false).unwrap(), cluster_chain(3, Energy::new(3, 4)).unwrap()] {
        for bath in [Bath::metropolis(1.0).unwrap(), Bath::glauber(0.25).unwrap()] {
            let a = spectral_gap(&m, &bath, GapMethod::Coset, &l).unwrap();
            let b = spectral_gap(&m, &bath, GapMethod::Full, &l).unwrap();
            assert!((a.gap - b.gap).abs() < 1e-10);
        }
    }
}

#[test]
fn toric_css_family_verifies() {
    let t = toric_code(2, 2, Energy::from_integer(1)).unwrap();
    let config = VerifyConfig { family: Some(PathFamily::CssString(TorusLayout { lx: 2, ly: 2 })), ..VerifyConfig::default() };
    let rows = verify(&t, &BathKind::Metropolis, &[0.0, 0.5, 1.0], &config).unwrap();
    assert!(rows.iter().all(|r| r.pass && r.special_bound.is_none() && !r.exact));
    assert_eq!(rows[0].eta_star, 16);
    let lam = rows[0].lambda_exact.unwrap();
    assert!((lam - 8.0).abs() < 1e-9, "{lam}");
}

#[test]
fn size_limits_are_refusals() {
    let t = toric_code(2, 2, Energy::from_integer(1)).unwrap();
    let err = verify(&t, &BathKind::Metropolis, &[1.0], &VerifyConfig::default()).unwrap_err();
    assert!(matches!(err, Error::SizeLimit { .. }));
    let big = ising_chain(11, Energy::from_integer(1), false).unwrap();
    let err = heuristic_barrier(&big, &PathFamily::fixed_natural(11), Targets::All, &Limits::default()).unwrap_err();
    assert!(matches!(err, Error::SizeLimit { .. }));
    assert!(heuristic_barrier(&big, &PathFamily::fixed_natural(11), Targets::Sample { count: 50, seed: 1 }, &Limits::default()).is_ok());
}
