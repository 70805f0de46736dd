//! Mixed Poisson distributions `Y = MPo(ρX)`.

use std::cell::RefCell;

use num_traits::ToPrimitive;

use crate::error::{domain, Error, Result};
use crate::laws::{LawKind, MixingLaw};
use crate::numerics::{binomial, integrate_to_infinity, ln_bigint, ln_gamma_ratio, log_gamma, stirling2, upper_incomplete_gamma, Compensated, Real};
use crate::Rational;

/// Series terms below this fraction of the running sum count as negligible.
const SERIES_REL_TOL: f64 = 1e-15;
const SERIES_SMALL_RUN: usize = 5;
/// Consecutive growing terms that signal a divergent series.
const SERIES_GROWTH_RUN: usize = 30;
const SERIES_MAX_TERMS: usize = 20_000;

/// Anything with the distributional interface of a mixed Poisson law.
pub trait MixedPoissonLike<T: Real>: Send + Sync {
    fn pmf(&self, ell: usize) -> Result<T>;
    /// `E (Y)_s`.
    fn factorial_moment(&self, s: usize) -> T;
    /// `E Y^s`.
    fn power_moment(&self, s: usize) -> T {
        let mut acc = Compensated::new();
        for j in 1..=s {
            acc.add(stirling_f::<T>(s, j) * self.factorial_moment(j));
        }
        if s == 0 {
            T::one()
        } else {
            acc.value()
        }
    }
    /// `E e^{zY}`.
    fn mgf(&self, z: T) -> Result<T>;
    /// `Σ_{ℓ ≤ L} P{Y = ℓ}`.
    fn pmf_normalization(&self, max_ell: usize) -> Result<T> {
        let mut acc = Compensated::new();
        for ell in 0..=max_ell {
            acc.add(self.pmf(ell)?);
        }
        Ok(acc.value())
    }
}

fn stirling_f<T: Real>(s: usize, j: usize) -> T {
    T::from_f64(stirling2(s, j).to_f64().unwrap_or(f64::INFINITY)).expect("finite")
}

fn ln_factorial<T: Real>(n: usize) -> T {
    log_gamma(T::from_usize(n + 1).expect("int")).expect("positive argument")
}

fn f64_of<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Which PMF evaluator [`MixedPoisson::pmf`] picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfMethod {
    Closed,
    Series,
    Quadrature,
}

/// `MPo(ρX)` for a mixing law `X` and scale `ρ > 0`.
#[derive(Clone)]
pub struct MixedPoisson<T> {
    law: MixingLaw<T>,
    rho: T,
}

impl<T: Real> std::fmt::Debug for MixedPoisson<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MPo({} · {})", f64_of(self.rho), self.law.name())
    }
}

impl<T: Real> MixedPoisson<T> {
    /// `ρ = 0` is rejected; the degenerate limit is `degenerate(0)` mixing.
    pub fn new(law: MixingLaw<T>, rho: T) -> Result<Self> {
        if !(rho > T::zero()) || !rho.is_finite() {
            return domain(format!("mixed Poisson scale must be positive and finite, got {rho:?}"));
        }
        Ok(Self { law, rho })
    }

    pub fn law(&self) -> &MixingLaw<T> {
        &self.law
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    fn is_point_mass_at_zero(&self) -> bool {
        matches!(self.law.kind(), LawKind::Degenerate { c } if *c == T::zero())
    }

    /// Preferred evaluator: closed form if there is one, the moment series for
    /// `ρ ≤ 1` (its cancellation grows like `e^ρ`), quadrature otherwise.
    pub fn pmf_method(&self) -> PmfMethod {
        if self.has_closed_form() {
            PmfMethod::Closed
        } else if self.rho <= T::one() || !self.law.has_density() {
            PmfMethod::Series
        } else {
            PmfMethod::Quadrature
        }
    }

    pub fn has_closed_form(&self) -> bool {
        matches!(
            self.law.kind(),
            LawKind::Degenerate { .. } | LawKind::Gamma { .. } | LawKind::Rayleigh { .. } | LawKind::Poisson { .. } | LawKind::Weibull { .. }
        )
    }

    /// `P{Y = ℓ}` from the alternating moment series
    /// `Σ_{s≥ℓ} (-1)^{s-ℓ} C(s,ℓ) μ_s ρ^s / s!`.
    ///
    /// When the mixing law has exact rational moments the series is summed
    /// in rationals, so its cancellation costs nothing. If in addition the
    /// mixing mgf has a finite radius `R` and `ρ ≥ R/2`, the plain series
    /// converges slowly or not at all and is Euler-transformed instead (see
    /// [`Self::pmf_series_euler`]). Otherwise the terms are summed in
    /// floating point with compensated summation.
    pub fn pmf_series(&self, ell: usize) -> Result<T> {
        if self.is_point_mass_at_zero() {
            return Ok(if ell == 0 { T::one() } else { T::zero() });
        }
        if self.law.exact_moment(ell).is_some() {
            let radius = self.law.mgf_radius();
            return if radius.is_finite() && self.rho >= radius / T::lit(2.0) {
                self.pmf_series_euler(ell)
            } else {
                self.pmf_series_exact(ell)
            };
        }
        let lr = self.rho.ln();
        let lead = T::from_usize(ell).expect("int") * lr - ln_factorial::<T>(ell);
        alternating_sum(self.run_name("pmf_series", ell), |m| {
            let s = ell + m;
            lead + self.law.ln_moment(s) + T::from_usize(m).expect("int") * lr - ln_factorial::<T>(m)
        })
        .map(|(v, _)| clamp_probability(v))
    }

    fn run_name(&self, what: &str, ell: usize) -> String {
        format!("{what}({}, ρ={}, ℓ={ell})", self.law.name(), f64_of(self.rho))
    }

    fn exact_rho(&self) -> Result<Rational> {
        Rational::from_float(f64_of(self.rho)).ok_or_else(|| Error::Domain(format!("ρ = {:?} is not finite", self.rho)))
    }

    /// `b_m = μ_{ℓ+m} / m!` as exact rationals.
    fn exact_shifted(&self, ell: usize, m: usize) -> Result<Rational> {
        let mu = self
            .law
            .exact_moment(ell + m)
            .ok_or_else(|| Error::Domain(format!("{} has no exact moments", self.law.name())))?;
        Ok(mu / Rational::from_integer(crate::numerics::factorial(m as u64)))
    }

    fn finish_exact(&self, ell: usize, sum: &Rational) -> Result<T> {
        let rho = self.exact_rho()?;
        let lead = rho.pow(ell as i32) / Rational::from_integer(crate::numerics::factorial(ell as u64));
        let v = (lead * sum).to_f64().unwrap_or(f64::NAN);
        Ok(clamp_probability(T::from_f64(v).expect("finite")))
    }

    /// Moment series summed exactly: `ρ^ℓ/ℓ! Σ_m (-ρ)^m b_m`.
    fn pmf_series_exact(&self, ell: usize) -> Result<T> {
        let rho = self.exact_rho()?;
        let mut sum = Rational::from_integer(0.into());
        let mut pow = Rational::from_integer(1.into());
        // the series converges here (entire mgf or ρ < R/2) and exact sums do not
        // lose accuracy to a long rise of the terms, so only the term cap applies
        let mut tracker = StopRule { growth_limit: usize::MAX, ..StopRule::default() };
        for m in 0..SERIES_MAX_TERMS {
            let term = self.exact_shifted(ell, m)? * &pow;
            sum += &term;
            pow *= -&rho;
            match tracker.step(term.to_f64().unwrap_or(f64::INFINITY).abs(), sum.to_f64().unwrap_or(0.0).abs()) {
                Step::Done => return self.finish_exact(ell, &sum),
                Step::Diverged => return Err(Error::Divergence { run: self.run_name("pmf_series", ell), at: m }),
                Step::More => {}
            }
        }
        Err(Error::Divergence { run: self.run_name("pmf_series", ell), at: SERIES_MAX_TERMS })
    }

    /// Euler transform of the moment series about `w = -R`, with
    /// `u = ρ/(ρ+R)`: `P{Y=ℓ} = ρ^ℓ/ℓ! Σ_k e_k u^k`, where
    /// `e_0 = b_0`, `e_k = Σ_{s=1}^k C(k-1,s-1) b_s (-R)^s` and
    /// `b_s = μ_{s+ℓ}/s!`. The transformed series converges for every `ρ > 0`
    /// and is summed in exact rationals.
    pub fn pmf_series_euler(&self, ell: usize) -> Result<T> {
        let radius = Rational::from_float(f64_of(self.law.mgf_radius()))
            .ok_or_else(|| Error::Domain("Euler transform needs a finite mgf radius".into()))?;
        let rho = self.exact_rho()?;
        let u = rho.clone() / (rho + &radius);
        let mut b = vec![self.exact_shifted(ell, 0)?];
        let mut neg_r_pow = vec![Rational::from_integer(1.into())];
        let mut sum = b[0].clone();
        let mut u_pow = Rational::from_integer(1.into());
        let mut tracker = StopRule::default();
        for k in 1..SERIES_MAX_TERMS {
            b.push(self.exact_shifted(ell, k)?);
            neg_r_pow.push(&neg_r_pow[k - 1] * -&radius);
            u_pow *= &u;
            let mut e = Rational::from_integer(0.into());
            for s in 1..=k {
                e += Rational::from_integer(binomial((k - 1) as u64, (s - 1) as u64)) * &b[s] * &neg_r_pow[s];
            }
            let term = e * &u_pow;
            sum += &term;
            match tracker.step(term.to_f64().unwrap_or(f64::INFINITY).abs(), sum.to_f64().unwrap_or(0.0).abs()) {
                Step::Done => return self.finish_exact(ell, &sum),
                Step::Diverged => break,
                Step::More => {}
            }
        }
        Err(Error::Divergence { run: self.run_name("pmf_series_euler", ell), at: b.len() })
    }

    /// `P{Y=ℓ} = ∫ (ρx)^ℓ e^{-ρx}/ℓ! dF(x)` by adaptive quadrature.
    pub fn pmf_quadrature(&self, ell: usize) -> Result<T> {
        if !self.law.has_density() {
            return Err(Error::DensityUnavailable(self.law.name()));
        }
        let rho = self.rho;
        let ellf = T::from_usize(ell).expect("int");
        let lf = ln_factorial::<T>(ell);
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let integrand = |x: T| {
            if x <= T::zero() {
                return T::zero();
            }
            let density = match self.law.density(x) {
                Ok(d) => d,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    return T::zero();
                }
            };
            if density == T::zero() {
                return T::zero();
            }
            (ellf * (rho * x).ln() - rho * x - lf + density.ln()).exp()
        };
        let start = (ellf / rho).max(self.law.moment(1)) * T::lit(2.0);
        // relative accuracy matters in the far tail, where the mass is tiny
        let rough = integrate_to_infinity(&integrand, start, T::lit(1e-13)).value;
        let q = integrate_to_infinity(&integrand, start, (T::lit(1e-13) * rough).max(T::min_positive_value()));
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(q.value)
    }

    /// Closed-form PMF for Poisson, negative binomial, Poisson-Rayleigh,
    /// Neyman type A and Weibull mixing.
    pub fn pmf_closed(&self, ell: usize) -> Result<T> {
        let rho = self.rho;
        let ellf = T::from_usize(ell).expect("int");
        let lf = ln_factorial::<T>(ell);
        match self.law.kind() {
            LawKind::Degenerate { c } => {
                let mean = rho * *c;
                if mean == T::zero() {
                    return Ok(if ell == 0 { T::one() } else { T::zero() });
                }
                Ok((ellf * mean.ln() - mean - lf).exp())
            }
            LawKind::Gamma { shape, scale } => {
                let q = rho * *scale;
                Ok((ln_gamma_ratio(*shape + ellf, *shape)? - lf + ellf * q.ln() - (*shape + ellf) * q.ln_1p()).exp())
            }
            LawKind::Rayleigh { sigma } => poisson_rayleigh(rho * *sigma, ell),
            LawKind::Poisson { lambda } => Ok(neyman_a(*lambda, rho, ell)),
            LawKind::Weibull { shape } => {
                if *shape == T::one() {
                    Ok((ellf * rho.ln() - (ellf + T::one()) * rho.ln_1p()).exp())
                } else if *shape > T::one() {
                    self.pmf_series(ell)
                } else {
                    // the dual series cancels like e^{(ℓ/ρ)^κ}; past 1e4 hand over to quadrature
                    match weibull_dual_series(*shape, rho, ell) {
                        Ok((v, largest)) if largest <= T::lit(1e4) * v.max(T::lit(1e-300)) => Ok(clamp_probability(v)),
                        _ => self.pmf_quadrature(ell),
                    }
                }
            }
            _ => Err(Error::NoClosedForm(self.law.name())),
        }
    }

    /// `P{Y=ℓ}` by the method of [`Self::pmf_method`].
    pub fn pmf_with(&self, method: PmfMethod, ell: usize) -> Result<T> {
        match method {
            PmfMethod::Closed => self.pmf_closed(ell),
            PmfMethod::Series => self.pmf_series(ell),
            PmfMethod::Quadrature => self.pmf_quadrature(ell),
        }
    }

    /// Independent sum with another mixed Poisson law.
    pub fn convolve(&self, other: &MixedPoisson<T>) -> MixedPoissonSum<T> {
        MixedPoissonSum { parts: vec![self.clone(), other.clone()] }
    }
}

impl<T: Real> MixedPoissonLike<T> for MixedPoisson<T> {
    fn pmf(&self, ell: usize) -> Result<T> {
        self.pmf_with(self.pmf_method(), ell)
    }

    /// `ρ^s μ_s`.
    fn factorial_moment(&self, s: usize) -> T {
        if s == 0 {
            return T::one();
        }
        self.rho.powi(s as i32) * self.law.moment(s)
    }

    /// `ψ(ρ(e^z − 1))` with `ψ` the mixing mgf.
    fn mgf(&self, z: T) -> Result<T> {
        self.law.mgf(self.rho * z.exp_m1())
    }
}

/// Sum of independent mixed Poisson variables; its mixing law is
/// `ρ₁X₁ + ρ₂X₂ + …` (with unit scale).
#[derive(Clone)]
pub struct MixedPoissonSum<T> {
    parts: Vec<MixedPoisson<T>>,
}

impl<T: Real> std::fmt::Debug for MixedPoissonSum<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.parts).finish()
    }
}

impl<T: Real> MixedPoissonSum<T> {
    pub fn parts(&self) -> &[MixedPoisson<T>] {
        &self.parts
    }

    pub fn convolve(mut self, other: &MixedPoisson<T>) -> Self {
        self.parts.push(other.clone());
        self
    }

    /// PMF of the sum at `0..=max_ell` by discrete convolution.
    pub fn pmf_table(&self, max_ell: usize) -> Result<Vec<T>> {
        let mut table = vec![T::zero(); max_ell + 1];
        table[0] = T::one();
        for part in &self.parts {
            let p: Vec<T> = (0..=max_ell).map(|l| part.pmf(l)).collect::<Result<_>>()?;
            table = (0..=max_ell)
                .map(|l| (0..=l).map(|i| table[i] * p[l - i]).collect::<Compensated<T>>().value())
                .collect();
        }
        Ok(table)
    }
}

impl<T: Real> MixedPoissonLike<T> for MixedPoissonSum<T> {
    fn pmf(&self, ell: usize) -> Result<T> {
        Ok(self.pmf_table(ell)?[ell])
    }

    /// Binomial convolution of the parts' factorial moments.
    fn factorial_moment(&self, s: usize) -> T {
        let mut acc: Vec<T> = (0..=s).map(|i| if i == 0 { T::one() } else { T::zero() }).collect();
        for part in &self.parts {
            let f: Vec<T> = (0..=s).map(|i| part.factorial_moment(i)).collect();
            acc = (0..=s)
                .map(|n| {
                    (0..=n)
                        .map(|i| T::from_f64(binomial(n as u64, i as u64).to_f64().expect("finite")).expect("finite") * acc[i] * f[n - i])
                        .collect::<Compensated<T>>()
                        .value()
                })
                .collect();
        }
        acc[s]
    }

    fn mgf(&self, z: T) -> Result<T> {
        self.parts.iter().try_fold(T::one(), |acc, p| Ok(acc * p.mgf(z)?))
    }
}

fn clamp_probability<T: Real>(p: T) -> T {
    p.max(T::zero()).min(T::one())
}

enum Step {
    More,
    Done,
    Diverged,
}

/// Stopping rule shared by the PMF series: done after
/// [`SERIES_SMALL_RUN`] consecutive non-increasing terms below
/// [`SERIES_REL_TOL`] of the running sum, diverged after
/// [`SERIES_GROWTH_RUN`] consecutive growing terms.
struct StopRule {
    small: usize,
    growth: usize,
    growth_limit: usize,
    prev: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { small: 0, growth: 0, growth_limit: SERIES_GROWTH_RUN, prev: f64::INFINITY }
    }
}

impl StopRule {
    fn step(&mut self, mag: f64, sum: f64) -> Step {
        if !mag.is_finite() {
            return Step::Diverged;
        }
        if mag <= SERIES_REL_TOL * sum && mag <= self.prev {
            self.small += 1;
        } else {
            self.small = 0;
        }
        self.growth = if mag > self.prev { self.growth + 1 } else { 0 };
        let both_zero = mag == 0.0 && self.prev == 0.0;
        self.prev = mag;
        if self.small >= SERIES_SMALL_RUN || both_zero {
            Step::Done
        } else if self.growth >= self.growth_limit {
            Step::Diverged
        } else {
            Step::More
        }
    }
}

/// `Σ_m (-1)^m exp(ln_term(m))`, with the largest term magnitude.
fn alternating_sum<T: Real>(run: String, ln_term: impl Fn(usize) -> T) -> Result<(T, T)> {
    let mut acc = Compensated::new();
    let mut tracker = StopRule::default();
    let mut largest = T::zero();
    for m in 0..SERIES_MAX_TERMS {
        let mag = ln_term(m).exp();
        acc.add(if m % 2 == 0 { mag } else { -mag });
        largest = largest.max(mag);
        match tracker.step(f64_of(mag), f64_of(acc.value()).abs()) {
            Step::Done => return Ok((acc.value(), largest)),
            Step::Diverged => return Err(Error::Divergence { run, at: m }),
            Step::More => {}
        }
    }
    Err(Error::Divergence { run, at: SERIES_MAX_TERMS })
}

/// Poisson-Rayleigh PMF for unit Rayleigh scale and scale parameter `r`:
/// `r^ℓ/ℓ! e^{r²/2} Σ_{i=0}^{ℓ+1} C(ℓ+1,i) (-r)^{ℓ+1-i} 2^{(i-1)/2} Γ((i+1)/2, r²/2)`.
fn poisson_rayleigh<T: Real>(r: T, ell: usize) -> Result<T> {
    let half = r * r / T::lit(2.0);
    let mut acc = Compensated::new();
    for i in 0..=ell + 1 {
        let a = T::from_usize(i + 1).expect("int") / T::lit(2.0);
        let c = T::from_f64(binomial((ell + 1) as u64, i as u64).to_f64().expect("finite")).expect("finite");
        let sign = if (ell + 1 - i) % 2 == 0 { T::one() } else { -T::one() };
        let pw = r.powi((ell + 1 - i) as i32);
        let tail = upper_incomplete_gamma(a, half)?;
        acc.add(sign * c * pw * T::lit(2.0).powf((T::from_usize(i).expect("int") - T::one()) / T::lit(2.0)) * tail);
    }
    let lead = (T::from_usize(ell).expect("int") * r.ln() - ln_factorial::<T>(ell) + half).exp();
    Ok(clamp_probability(lead * acc.value()))
}

/// Neyman type A via the finite form
/// `e^{-λ(1-e^{-ρ})} ρ^ℓ/ℓ! Σ_k S(ℓ,k) (λe^{-ρ})^k`, summed in log space.
fn neyman_a<T: Real>(lambda: T, rho: T, ell: usize) -> T {
    let base = -lambda * (-rho).exp_m1().neg();
    if ell == 0 {
        return base.exp();
    }
    if lambda == T::zero() {
        return T::zero();
    }
    let lw = lambda.ln() - rho;
    let logs: Vec<T> = (1..=ell)
        .map(|k| T::from_f64(ln_bigint(&stirling2(ell, k))).expect("finite") + T::from_usize(k).expect("int") * lw)
        .collect();
    let top = logs.iter().copied().fold(T::neg_infinity(), T::max);
    let lse = top + logs.iter().map(|&l| (l - top).exp()).collect::<Compensated<T>>().value().ln();
    (base + T::from_usize(ell).expect("int") * rho.ln() - ln_factorial::<T>(ell) + lse).exp()
}

/// Weibull mixing with shape `κ < 1` (heavy tail), expanding `e^{-t^κ}` in the
/// mixing integral:
/// `κ Σ_j (-1)^j C(j+ℓ,ℓ) ρ^{-κ(j+1)} Γ(κ(j+1)+ℓ)/(j+ℓ)!`.
fn weibull_dual_series<T: Real>(shape: T, rho: T, ell: usize) -> Result<(T, T)> {
    let ellf = T::from_usize(ell).expect("int");
    let run = format!("weibull_dual_series(κ={}, ρ={}, ℓ={ell})", f64_of(shape), f64_of(rho));
    alternating_sum(run, |j| {
        let jf = T::from_usize(j).expect("int");
        let a = shape * (jf + T::one());
        shape.ln() + ln_binomial::<T>(j + ell, ell) - a * rho.ln() + log_gamma(a + ellf).expect("positive") - ln_factorial::<T>(j + ell)
    })
}

fn ln_binomial<T: Real>(n: usize, k: usize) -> T {
    ln_factorial::<T>(n) - ln_factorial::<T>(k) - ln_factorial::<T>(n - k)
}
