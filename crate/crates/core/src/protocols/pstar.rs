use crate::error::{Error, Result};
use crate::scalar::Real;

/// `Σ_{k=κ}^{J} binom(J, k) p^k`, the probability-weighted count of ways to
/// reach `κ` discoveries when each of `J` independent tests has size `p`.
pub fn pstar_polynomial<T: Real>(j: usize, kappa: usize, p: T) -> T {
    if kappa == 0 {
        // the k = 0 term is 1
        return pstar_polynomial(j, 1, p) + T::one();
    }
    if kappa > j || p <= T::zero() {
        return T::zero();
    }
    if kappa == 1 {
        // (1 + p)^J - 1 without cancellation
        return (T::from_usize_lossy(j) * p.ln_1p()).exp_m1();
    }
    // binom(J, κ) p^κ as a running product, then the ratio recursion
    let mut term = T::one();
    for i in 0..kappa {
        term = term * T::from_usize_lossy(j - i) / T::from_usize_lossy(i + 1) * p;
    }
    let mut sum = term;
    for k in kappa..j {
        term = term * T::from_usize_lossy(j - k) / T::from_usize_lossy(k + 1) * p;
        sum = sum + term;
        let ratio = T::from_usize_lossy(j - k) * p / T::from_usize_lossy(k + 1);
        if ratio < T::one() && term < sum * T::epsilon() * T::lit(0.01) {
            break;
        }
    }
    sum
}

/// Common per-test size `p*` solving `Σ_{k=κ}^{J} binom(J, k) p^k = target`.
///
/// `κ = 1` and `κ = J` have closed forms. Otherwise bisection on `[0, 1]`,
/// where the left side is strictly increasing.
pub fn solve_pstar<T: Real>(j: usize, kappa: usize, target: T) -> Result<T> {
    check_feasible(j, kappa, target)?;
    if kappa == 1 {
        return Ok((target.ln_1p() / T::from_usize_lossy(j)).exp_m1());
    }
    if kappa == j {
        return Ok(target.powf(T::one() / T::from_usize_lossy(j)));
    }
    Ok(bisect(j, kappa, target))
}

/// [`solve_pstar`] forced through bisection for every `κ`.
pub fn solve_pstar_bisection<T: Real>(j: usize, kappa: usize, target: T) -> Result<T> {
    check_feasible(j, kappa, target)?;
    Ok(bisect(j, kappa, target))
}

fn check_feasible<T: Real>(j: usize, kappa: usize, target: T) -> Result<()> {
    if j == 0 || kappa == 0 || kappa > j {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= kappa <= J, got kappa = {kappa}, J = {j}"
        )));
    }
    let upper = pstar_polynomial(j, kappa, T::one());
    if !(target > T::zero() && target < upper) {
        return Err(Error::InfeasiblePStar {
            target: target.as_f64(),
            lower: 0.0,
            upper: upper.as_f64(),
        });
    }
    Ok(())
}

/// At most 200 halvings; stops early once the bracket no longer splits.
fn bisect<T: Real>(j: usize, kappa: usize, target: T) -> T {
    let (mut lo, mut hi) = (T::zero(), T::one());
    let two = T::lit(2.0);
    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if pstar_polynomial(j, kappa, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rl = (pstar_polynomial(j, kappa, lo) - target).abs();
    let rh = (pstar_polynomial(j, kappa, hi) - target).abs();
    if rl <= rh {
        lo
    } else {
        hi
    }
}
