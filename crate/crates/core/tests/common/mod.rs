//! Test oracles kept deliberately independent of the library's own numerics:
//! adaptive Simpson quadrature for the incomplete-gamma integral form of the
//! Poisson cdf, and a small double-double accumulator for extended-precision
//! sums and products.

#![allow(dead_code)]

/// ln(r!) by direct summation; independent of any lgamma implementation.
pub fn ln_factorial(r: u32) -> f64 {
    (1..=u64::from(r)).map(|k| (k as f64).ln()).sum()
}

fn integrand(r: f64, ln_fact: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    (r * t.ln() - t - ln_fact).exp()
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
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
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + adapt(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// Regularized upper incomplete gamma: integral of e^{-t} t^r / r! dt over
/// (mu, infinity), by adaptive Simpson on a finite window that provably
/// captures the mass to below the quadrature tolerance.
pub fn quad_poisson_cdf(r: u32, mu: f64) -> f64 {
    let rf = f64::from(r);
    let ln_fact = ln_factorial(r);
    let f = |t: f64| integrand(rf, ln_fact, t);
    // Past max(mu, r) the integrand decays at least like e^{-t/2}; this upper
    // limit puts the discarded tail far below 1e-13.
    let upper = mu.max(rf) + 80.0 + 12.0 * mu.max(rf).sqrt();
    let fa = f(mu);
    let fb = f(upper);
    let m = 0.5 * (mu + upper);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, upper - mu);
    adapt(&f, mu, upper, fa, fm, fb, whole, 1e-13, 48)
}

/// Double-double value (~32 significant digits) built on error-free
/// transformations; `mul_add` supplies the exact product residual.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn add(self, other: Dd) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Self { hi, lo }
    }

    pub fn add_f64(self, x: f64) -> Self {
        self.add(Dd::from_f64(x))
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        let e = e + self.lo * x;
        let (hi, lo) = two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div_f64(self, x: f64) -> Self {
        let q1 = self.hi / x;
        let (p, e) = two_prod(q1, x);
        let r = (self.hi - p - e + self.lo) / x;
        let (hi, lo) = two_sum(q1, r);
        Self { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Poisson survival P(X > r) as the tail sum of pmf terms, accumulated in
/// double-double with the term recurrence also carried in double-double.
/// Every term inherits the same relative error from the e^{-mu} seed, so the
/// sum's relative error stays at the ~1e-16 level.
pub fn dd_poisson_survival(r: u32, mu: f64) -> f64 {
    let mut term = Dd::from_f64((-mu).exp());
    for k in 1..=u64::from(r) + 1 {
        term = term.mul_f64(mu).div_f64(k as f64);
    }
    // term now holds pmf(r + 1)
    let mut sum = Dd::from_f64(0.0);
    let mut k = u64::from(r) + 1;
    loop {
        sum = sum.add(term);
        k += 1;
        term = term.mul_f64(mu).div_f64(k as f64);
        if term.hi < sum.hi * 1e-25 {
            break;
        }
    }
    sum.value()
}

/// Poisson cdf by ascending double-double summation.
pub fn dd_poisson_cdf(r: u32, mu: f64) -> f64 {
    let mut term = Dd::from_f64((-mu).exp());
    let mut sum = term;
    for k in 1..=u64::from(r) {
        term = term.mul_f64(mu).div_f64(k as f64);
        sum = sum.add(term);
    }
    sum.value()
}
