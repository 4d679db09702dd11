//! Small numerical helpers shared across the crate.

/// log(sum(exp(v))) with the usual max shift. Empty or all -inf input
/// yields -inf.
pub fn logsumexp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = v.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// Composite trapezoid rule on an equally spaced grid with spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        _ => {
            let interior: f64 = values[1..values.len() - 1].iter().sum();
            h * (0.5 * (values[0] + values[values.len() - 1]) + interior)
        }
    }
}

/// log of the trapezoid integral of exp(log_values) on spacing `h`,
/// computed with a max shift so the result survives values far below
/// the representable range. Returns -inf when nothing contributes.
pub fn log_trapezoid_exp(log_values: &[f64], h: f64) -> f64 {
    let m = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() || log_values.len() < 2 {
        return f64::NEG_INFINITY;
    }
    let shifted: Vec<f64> = log_values.iter().map(|&x| (x - m).exp()).collect();
    let t = trapezoid(&shifted, h);
    if t > 0.0 {
        m + t.ln()
    } else {
        f64::NEG_INFINITY
    }
}

pub fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation with the n-1 divisor; 0 for fewer than two
/// observations.
pub fn sample_sd(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    let ss: f64 = v.iter().map(|&x| (x - m) * (x - m)).sum();
    (ss / (v.len() - 1) as f64).sqrt()
}

/// Equal-tailed quantile of unsorted data, linear interpolation between
/// order statistics (the same convention most stats packages default to).
pub fn quantile(v: &[f64], q: f64) -> f64 {
    assert!((0.0..=1.0).contains(&q), "quantile level out of range");
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("NaN in quantile input"));
    let pos = q * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        s[lo]
    } else {
        let w = pos - lo as f64;
        s[lo] * (1.0 - w) + s[hi] * w
    }
}

/// Deterministic sub-seed derivation: splitmix64 folded over the master
/// seed and each part in order. Used so replicate r of cell (i, j) gets
/// the same stream no matter how work is scheduled.
pub fn seed_mix(master: u64, parts: &[u64]) -> u64 {
    let mut state = master;
    for &p in parts {
        state = splitmix64(state ^ splitmix64(p));
    }
    splitmix64(state)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
