use crate::error::{domain, Result};

/// Payoff law of `n` independent ±1 games won with probability `p`:
/// `(2x − n, C(n,x) pˣ (1−p)^{n−x})` for `x = 0..=n`, by ascending payoff.
pub fn repeated_payoff_distribution(n: u32, p: f64) -> Result<Vec<(i64, f64)>> {
    if n == 0 {
        return domain("need at least one game");
    }
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("win probability {p} outside [0, 1]"));
    }
    let q = 1.0 - p;
    let mut out = Vec::with_capacity(n as usize + 1);
    if n <= 1000 {
        // C(n, x) stays finite in f64 up to n ≈ 1020
        let mut c = 1.0f64;
        for x in 0..=n {
            if x > 0 {
                c = c * (n - x + 1) as f64 / x as f64;
            }
            out.push((2 * x as i64 - n as i64, c * p.powi(x as i32) * q.powi((n - x) as i32)));
        }
    } else {
        let mut ln_c = 0.0f64;
        for x in 0..=n {
            if x > 0 {
                ln_c += ((n - x + 1) as f64).ln() - (x as f64).ln();
            }
            let prob = if (p == 0.0 && x > 0) || (q == 0.0 && x < n) {
                0.0
            } else {
                let lp = if x == 0 { 0.0 } else { x as f64 * p.ln() };
                let lq = if x == n { 0.0 } else { (n - x) as f64 * q.ln() };
                (ln_c + lp + lq).exp()
            };
            out.push((2 * x as i64 - n as i64, prob));
        }
    }
    Ok(out)
}
