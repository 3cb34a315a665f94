//! β grids: `start:stop:step`, a comma list, or a single value.

use crate::error::CliError;

fn number(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::Input(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(CliError::Input(format!("not finite: {s:?}")));
    }
    Ok(v)
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Input(format!("beta grid {text:?}: {m}"));
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, s] = parts[..] else { return Err(bad("expected start:stop:step")) };
        let (a, b, s) = (number(a)?, number(b)?, number(s)?);
        if s <= 0.0 {
            return Err(bad("step must be positive"));
        }
        if b < a {
            return Err(bad("stop is below start"));
        }
        let count = ((b - a) / s + 1e-9).floor() as usize + 1;
        (0..count).map(|i| a + i as f64 * s).collect()
    } else {
        text.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(bad("empty"));
    }
    if values.iter().any(|&b| b < 0.0) {
        return Err(bad("beta must be non-negative"));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0:1:0.3").unwrap().len(), 4);
        assert_eq!(parse_grid("0,0.5,1,2").unwrap(), vec![0.0, 0.5, 1.0, 2.0]);
        assert_eq!(parse_grid("1.5").unwrap(), vec![1.5]);
        for bad in ["", "1:0:0.1", "0:1:0", "0:1", "a", "-1", "0,,1"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
