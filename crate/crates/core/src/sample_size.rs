//! Sample sizes sufficient for robust ERM learners. All logarithms are natural.

use crate::error::{Error, Result};

fn check_unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must lie in (0, 1)")))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1]")))
    }
}

/// `⌈(ln|H| + ln(1/δ)) / ε⌉` for a finite hypothesis class. `ε = 1` and
/// `δ = 1` are accepted as degenerate limits.
pub fn occam_sample_size(eps: f64, delta: f64, log_class_size: f64) -> Result<usize> {
    check_eps(eps)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must lie in (0, 1]")));
    }
    if !(log_class_size >= 0.0) {
        return Err(Error::InvalidParameter("log class size must be >= 0".into()));
    }
    Ok(((log_class_size + (1.0 / delta).ln()) / eps).ceil() as usize)
}

/// `⌈(RVC · ln(1/ε) + ln(1/δ)) / ε⌉`.
pub fn rvc_sample_size(eps: f64, delta: f64, rvc: usize) -> Result<usize> {
    check_unit_open("eps", eps)?;
    check_unit_open("delta", delta)?;
    Ok(((rvc as f64 * (1.0 / eps).ln() + (1.0 / delta).ln()) / eps).ceil() as usize)
}

/// `ln` of the number of conjunctions on `n` variables, `n ln 3`.
pub fn conjunction_log_class_size(n: usize) -> f64 {
    n as f64 * 3f64.ln()
}

/// `ln` of the stars-and-bars bound `2^n (n+W)^{min(n,W)}` on the size of
/// the bounded-weight LTF class.
pub fn ltf_log_class_size_bound(n: usize, budget: u64) -> f64 {
    let w = budget as f64;
    let nf = n as f64;
    nf * 2f64.ln() + nf.min(w) * (nf + w).ln()
}
