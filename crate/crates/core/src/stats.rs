//! Inequality and dispersion primitives shared by the measure modules.

/// Arithmetic mean; `None` for an empty slice.
pub fn mean(x: &[f64]) -> Option<f64> {
    if x.is_empty() {
        None
    } else {
        Some(x.iter().sum::<f64>() / x.len() as f64)
    }
}

/// Population standard deviation; `None` for an empty slice.
pub fn population_sd(x: &[f64]) -> Option<f64> {
    let mu = mean(x)?;
    let var = x.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / x.len() as f64;
    Some(var.sqrt())
}

/// Gini index `sum (2j - N - 1) x_j / (N sum x)` over values sorted ascending.
/// `None` when the values sum to zero or the slice is empty.
pub fn gini(x: &[f64]) -> Option<f64> {
    let n = x.len();
    let total: f64 = x.iter().sum();
    if n == 0 || total <= 0.0 {
        return None;
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let nf = n as f64;
    let num: f64 = sorted
        .iter()
        .enumerate()
        .map(|(j, v)| (2.0 * (j + 1) as f64 - nf - 1.0) * v)
        .sum();
    Some(num / (nf * total))
}

/// Weighted equally-distributed-equivalent level of the Atkinson index.
pub fn ede(x: &[f64], w: &[f64], epsilon: f64) -> f64 {
    let wsum: f64 = w.iter().sum();
    if (epsilon - 1.0).abs() < 1e-15 {
        if x.iter().zip(w).any(|(&v, &wt)| v <= 0.0 && wt > 0.0) {
            return 0.0;
        }
        let s: f64 = x.iter().zip(w).map(|(v, wt)| wt / wsum * v.ln()).sum();
        s.exp()
    } else {
        let e = 1.0 - epsilon;
        let s: f64 = x.iter().zip(w).map(|(v, wt)| wt / wsum * v.powf(e)).sum();
        s.powf(1.0 / e)
    }
}

/// Weighted Atkinson index `1 - ede / weighted mean`; 0 when every value is 0.
pub fn atkinson_weighted(x: &[f64], w: &[f64], epsilon: f64) -> f64 {
    let wsum: f64 = w.iter().sum();
    let mu: f64 = x.iter().zip(w).map(|(v, wt)| v * wt).sum::<f64>() / wsum;
    if mu <= 0.0 {
        return 0.0;
    }
    1.0 - ede(x, w, epsilon) / mu
}

/// Atkinson index with equal weights.
pub fn atkinson(x: &[f64], epsilon: f64) -> f64 {
    atkinson_weighted(x, &vec![1.0; x.len()], epsilon)
}

/// Value at quantile `q` with inclusive linear interpolation between order statistics.
pub fn quantile_inclusive(x: &[f64], q: f64) -> Option<f64> {
    if x.is_empty() {
        return None;
    }
    let mut s = x.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let h = (s.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Some(s[lo] + (h - lo as f64) * (s[hi] - s[lo]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gini_hand_values() {
        assert_eq!(gini(&[0.0, 0.0, 1.0, 1.0]), Some(0.5));
        assert_eq!(gini(&[0.0, 1.0]), Some(0.5));
        assert_eq!(gini(&[3.0, 3.0]), Some(0.0));
        assert_eq!(gini(&[0.0, 0.0]), None);
    }

    #[test]
    fn sd_hand_values() {
        assert_eq!(population_sd(&[0.0, 1.0]), Some(0.5));
        assert!((population_sd(&[0.2, 0.4]).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn atkinson_basics() {
        assert_eq!(atkinson(&[1.0, 1.0], 0.5), 0.0);
        assert_eq!(atkinson(&[0.0, 0.0], 0.5), 0.0);
        // ede of {0, 1} at eps 0.5 is (0.5 * 1)^2 = 0.25, mean 0.5
        assert!((atkinson(&[0.0, 1.0], 0.5) - 0.5).abs() < 1e-15);
        assert!((atkinson(&[1.0, 4.0], 1.0) - (1.0 - 2.0 / 2.5)).abs() < 1e-15);
    }

    #[test]
    fn quartile() {
        assert_eq!(quantile_inclusive(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.25), Some(2.0));
        assert_eq!(quantile_inclusive(&[4.0, 1.0], 0.25), Some(1.75));
    }
}
