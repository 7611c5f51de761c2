use crate::error::{bail, Result};

fn check(r: &[f64], s: &[f64]) -> Result<()> {
    if r.len() != s.len() {
        bail!(Argument, "vectors differ in length: {} vs {}", r.len(), s.len());
    }
    if r.len() < 2 {
        bail!(Argument, "rank correlation needs at least two observations");
    }
    if r.iter().chain(s).any(|x| x.is_nan()) {
        bail!(Argument, "NaN observation");
    }
    Ok(())
}

/// Twice the 1-based average rank of each entry. Always an integer.
pub fn doubled_ranks(x: &[f64]) -> Vec<i64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // positions i..j share the rank ((i+1) + j) / 2
        for &k in &order[i..j] {
            out[k] = (i + 1 + j) as i64;
        }
        i = j;
    }
    out
}

/// Pearson correlation of integer data computed with exact integer sums.
fn pearson_exact(a: &[i64], b: &[i64]) -> Result<f64> {
    let n = a.len() as i128;
    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0i128, 0i128, 0i128, 0i128, 0i128);
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (x as i128, y as i128);
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    let cov = n * sab - sa * sb;
    let va = n * saa - sa * sa;
    let vb = n * sbb - sb * sb;
    if va == 0 || vb == 0 {
        bail!(Numeric, "rank correlation undefined for a constant vector");
    }
    let denom = if va == vb { va as f64 } else { (va as f64).sqrt() * (vb as f64).sqrt() };
    Ok(cov as f64 / denom)
}

/// Spearman's ρ: Pearson correlation of average ranks. Equals
/// `1 − 6Σd²/(n(n²−1))` when there are no ties.
pub fn spearman(r: &[f64], s: &[f64]) -> Result<f64> {
    check(r, s)?;
    pearson_exact(&doubled_ranks(r), &doubled_ranks(s))
}

/// Kendall's τ-a: `2/(n(n−1)) Σ_{i<j} sign(r_i − r_j)·sign(s_i − s_j)`.
pub fn kendall(r: &[f64], s: &[f64]) -> Result<f64> {
    check(r, s)?;
    let n = r.len();
    let mut sum: i64 = 0;
    for i in 0..n {
        for j in i + 1..n {
            let a = sign(r[i] - r[j]);
            let b = sign(s[i] - s[j]);
            sum += a * b;
        }
    }
    Ok((2 * sum) as f64 / (n * (n - 1)) as f64)
}

fn sign(x: f64) -> i64 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}
