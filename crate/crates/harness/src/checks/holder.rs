//! Holder-type inequalities for weak Lorentz norms with change of measures:
//! the indicator form (constant exactly 1) and the delta-weakened form for
//! bounded factors, with its explicit constant C(p, delta).

use mfold_core::{lorentz_pinf_norm, Error, Result};

use crate::instance::Instance;
use crate::report::VerificationReport;

/// C(p, delta) = inf over 0 < q < p of
///   2 * (p / (ln 2 * (1 - delta) * q * (p - q)))^{1/q}.
///
/// The infimum is located by a 2048-point log-spaced scan of q refined by
/// golden-section search, working on the logarithm of the objective. A
/// second evaluation through the theta = q/p substitution,
///   2 * (inf over 0 < theta < 1 of
///        (ln 2 * (1 - delta) * p * theta * (1 - theta))^{-1/theta})^{1/p},
/// must agree to 1e-8 relative; disagreement would mean a scan bug.
pub fn weak_holder_constant(p: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::BadExponent {
            bound: "p > 0",
            got: p,
        });
    }
    let c = std::f64::consts::LN_2 * (1.0 - delta);
    // log of the objective as a function of q
    let log_obj = |q: f64| -> f64 { (p / (c * q * (p - q))).ln() / q };
    let q_exponent = scan_and_refine(|t| log_obj(p * t));
    let from_q = 2.0 * q_exponent.exp();

    // theta substitution: log objective (1/p) * (-1/theta) ln(c p theta (1-theta))
    let log_obj_theta = |t: f64| -> f64 { -(c * p * t * (1.0 - t)).ln() / (t * p) };
    let from_theta = 2.0 * scan_and_refine(log_obj_theta).exp();

    let rel = (from_q - from_theta).abs() / from_q.abs().max(from_theta.abs());
    assert!(
        rel <= 1e-8,
        "q-form {from_q} and theta-form {from_theta} disagree: rel {rel}"
    );
    Ok(from_q)
}

/// Minimum of `f` over t in (0, 1): log-spaced scan then golden-section on
/// the bracketing interval.
fn scan_and_refine(f: impl Fn(f64) -> f64) -> f64 {
    const POINTS: usize = 2048;
    let (lo, hi): (f64, f64) = (1e-6, 1.0 - 1e-6);
    let step = (hi.ln() - lo.ln()) / (POINTS - 1) as f64;
    let t_at = |i: usize| (lo.ln() + step * i as f64).exp();
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..POINTS {
        let v = f(t_at(i));
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let mut a = t_at(best_i.saturating_sub(1));
    let mut b = t_at((best_i + 1).min(POINTS - 1));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    best.min(f1).min(f2)
}

/// || chi_E g ||_{L^{p,inf}(w)} <= || chi_E ||_{L^{p1,inf}(w1)}
///                                  * || g ||_{L^{p2,inf}(w2)}
/// with constant exactly 1. `inst.f` is ignored; the set E stands in for it.
pub fn check_char_holder(
    e: &[usize],
    g_override: Option<&mfold_core::ScalarField>,
    inst: &Instance,
) -> Result<VerificationReport> {
    let g = g_override.unwrap_or(&inst.g);
    let w = inst.combined_weight()?;
    let p = inst.p();
    let lhs = lorentz_pinf_norm(&g.masked(e)?, &w, p)?;
    let chi = mfold_core::ScalarField::indicator(inst.grid, e)?;
    let rhs =
        lorentz_pinf_norm(&chi, &inst.w1, inst.p1)? * lorentz_pinf_norm(g, &inst.w2, inst.p2)?;
    Ok(VerificationReport::new(
        "char_holder",
        inst.seed,
        lhs,
        rhs,
        1.0,
        format!("p1={:.6} p2={:.6} |E|={}", inst.p1, inst.p2, e.len()),
    ))
}

/// || f g ||_{L^{p,inf}(w)} <= C(p,delta) || f^delta ||_{L^{p1,inf}(w1)}
///                                        * || g ||_{L^{p2,inf}(w2)},
/// with f rescaled to sup f = 1 beforehand.
pub fn check_weak_holder(inst: &Instance, delta: f64) -> Result<VerificationReport> {
    let p = inst.p();
    let constant = weak_holder_constant(p, delta)?;
    let max = inst.f.max_value();
    let f = if max > 0.0 {
        inst.f.scale(1.0 / max)?
    } else {
        inst.f.clone()
    };
    let w = inst.combined_weight()?;
    let lhs = lorentz_pinf_norm(&f.product(&inst.g)?, &w, p)?;
    let rhs = lorentz_pinf_norm(&f.powf(delta)?, &inst.w1, inst.p1)?
        * lorentz_pinf_norm(&inst.g, &inst.w2, inst.p2)?;
    Ok(VerificationReport::new(
        "weak_holder",
        inst.seed,
        lhs,
        rhs,
        constant,
        format!("p1={:.6} p2={:.6} delta={delta}", inst.p1, inst.p2),
    ))
}
