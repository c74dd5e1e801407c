//! Beta-grid parsing: comma lists and `lo:hi:N[log]` ranges.

use crate::CliError;

/// Accepts "a,b,c", "lo:hi:N" (linear), or "lo:hi:Nlog" (log-spaced).
pub fn parse_beta_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |detail: &str| CliError::new(2, format!("bad beta grid {spec:?}: {detail}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected lo:hi:N or lo:hi:Nlog"));
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = parts[1].parse().map_err(|_| bad("hi is not a number"))?;
        let (count_str, log) = match parts[2].strip_suffix("log") {
            Some(rest) => (rest, true),
            None => (parts[2], false),
        };
        let count: usize = count_str.parse().map_err(|_| bad("N is not an integer"))?;
        if count < 2 {
            return Err(bad("N must be at least 2"));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(bad("need finite lo < hi"));
        }
        if log && lo <= 0.0 {
            return Err(bad("log spacing needs lo > 0"));
        }
        let betas = (0..count)
            .map(|i| {
                let s = i as f64 / (count - 1) as f64;
                if log {
                    lo * (hi / lo).powf(s)
                } else {
                    lo + s * (hi - lo)
                }
            })
            .collect();
        Ok(betas)
    } else {
        parse_beta_list(spec)
    }
}

/// A plain comma-separated list of exponents.
pub fn parse_beta_list(spec: &str) -> Result<Vec<f64>, CliError> {
    let betas: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::new(2, format!("bad beta list {spec:?}")))?;
    if betas.is_empty() {
        return Err(CliError::new(2, "empty beta list"));
    }
    Ok(betas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comma_list() {
        assert_eq!(parse_beta_grid("2, 5,10").unwrap(), vec![2.0, 5.0, 10.0]);
    }

    #[test]
    fn linear_range() {
        assert_eq!(parse_beta_grid("1:3:3").unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn log_range_hits_endpoints() {
        let grid = parse_beta_grid("4:100:20log").unwrap();
        assert_eq!(grid.len(), 20);
        assert!((grid[0] - 4.0).abs() < 1e-12);
        assert!((grid[19] - 100.0).abs() < 1e-12);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_malformed() {
        for spec in ["", "1:2", "2:1:5", "0:10:5log", "1:9:1", "a,b"] {
            assert_eq!(parse_beta_grid(spec).unwrap_err().code, 2, "{spec}");
        }
    }
}
