//! Reference computations for tests. Nothing here calls into `tod-credal`;
//! each routine takes a different route to the quantity it checks.

use rand::Rng;

/// Adaptive Simpson quadrature of `f` on `[lo, hi]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, eps: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }
    if hi <= lo {
        return 0.0;
    }
    let (fa, fb, fm) = (f(lo), f(hi), f(0.5 * (lo + hi)));
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, lo, hi, fa, fm, fb, whole, eps, 60)
}

/// `∫_0^s x^(p-1) (1-x)^(q-1) dx` for `s <= 1/2`. For `p < 1` the
/// substitution `u = x^p` removes the singularity at zero; otherwise the
/// density is integrated directly.
fn lower_piece(p: f64, q: f64, s: f64) -> f64 {
    let (g, upper, factor): (Box<dyn Fn(f64) -> f64>, f64, f64) = if p < 1.0 {
        (Box::new(move |u: f64| (1.0 - u.powf(1.0 / p)).powf(q - 1.0)), s.powf(p), 1.0 / p)
    } else {
        (Box::new(move |x: f64| x.powf(p - 1.0) * (1.0 - x).powf(q - 1.0)), s, 1.0)
    };
    // Tolerance relative to a coarse midpoint estimate of the integral.
    let coarse: f64 = (0..256).map(|i| g(upper * (i as f64 + 0.5) / 256.0)).sum::<f64>() * upper / 256.0;
    factor * adaptive_simpson(&g, 0.0, upper, 1e-14 * coarse.max(f64::MIN_POSITIVE))
}

/// Regularized incomplete beta `I_t(a, b)` by numerical integration of the
/// Beta density. The normalizer is integrated too, so no gamma function is
/// involved.
pub fn incomplete_beta_quadrature(a: f64, b: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let total = lower_piece(a, b, 0.5) + lower_piece(b, a, 0.5);
    if t <= 0.5 {
        lower_piece(a, b, t) / total
    } else {
        1.0 - lower_piece(b, a, 1.0 - t) / total
    }
}

/// Every assignment of a mixed-radix odometer, last digit fastest, paired
/// with `weight(assignment)`.
pub fn enumerate_odometer<F: Fn(&[usize]) -> f64>(radices: &[usize], weight: F) -> Vec<(Vec<usize>, f64)> {
    let mut digits = vec![0; radices.len()];
    let mut out = Vec::new();
    loop {
        out.push((digits.clone(), weight(&digits)));
        let mut i = radices.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Uniform draw from the simplex of dimension `k` (flat Dirichlet).
pub fn random_simplex<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

/// Simplex draw bounded away from zero in every entry.
pub fn random_interior_simplex<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw = random_simplex(rng, k);
    let floor = 0.01 / k as f64;
    let total: f64 = raw.iter().map(|p| p + floor).sum();
    raw.into_iter().map(|p| (p + floor) / total).collect()
}

/// Multinomial counts by `n` categorical draws.
pub fn random_counts<R: Rng>(rng: &mut R, probs: &[f64], n: u64) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..n {
        let mut u = rng.gen::<f64>();
        let mut pick = probs.len() - 1;
        for (i, p) in probs.iter().enumerate() {
            if u < *p {
                pick = i;
                break;
            }
            u -= p;
        }
        counts[pick] += 1;
    }
    counts
}
