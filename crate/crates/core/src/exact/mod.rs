//! Exact factorial moments, scale parameters and limiting mixing laws for the
//! model catalog.

mod cayley;
mod formulas;
mod params;

use std::f64::consts::SQRT_2;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

pub use cayley::{
    edgecut_fm, edgecut_fm_f64, edgecut_fm_with_order, mapping_fm, mapping_fm_f64, parking_fm, parking_fm_f64,
    records_fm, records_fm_f64, tree_kernel, DEFAULT_SERIES_ORDER, EDGECUT_MAX_ORDER,
};
pub use formulas::{
    blocks_fm, branch_weight, branches_fm, bridge_fm, crp_fm, crp_params, descendants_fm, dimurn_fm,
    inversions_fm, nodedeg_fm, triangular_fm, triangular_fm_seq, triangular_rising_fm,
};
pub use params::{parse_rational, Param, Params};

use crate::error::{Error, Result};
use crate::laws::MixingLaw;
use crate::numerics::{gen_binomial, Scalar};
use crate::{MixingLaw64, Rational};

/// Every model tag, in catalog order.
pub const MODEL_TAGS: [&str; 13] = [
    "blocks",
    "dimurn",
    "descendants",
    "nodedeg",
    "branches",
    "crp",
    "triangular",
    "inversions",
    "records",
    "edgecut",
    "parking",
    "bridge",
    "mapping",
];

/// Below this scale the statistic vanishes in the limit; above
/// [`REGIME_INFINITE`] it is read as growing.
pub const REGIME_DEGENERATE: f64 = 0.1;
pub const REGIME_INFINITE: f64 = 10.0;

/// Increasing-tree family used by the descendants model.
#[derive(Clone, Debug, PartialEq)]
pub enum TreeFamily {
    /// Recursive trees: every node attracts equally.
    Rect,
    /// Generalized plane recursive trees: affinity `outdegree + alpha`.
    Gport(Rational),
    /// `d`-ary increasing trees: affinity `d - outdegree`.
    Dary(u32),
}

impl TreeFamily {
    /// Ratio `c₂/c₁` of the degree-weight parameters.
    pub fn weight_ratio(&self) -> Rational {
        match self {
            TreeFamily::Rect => Rational::zero(),
            TreeFamily::Gport(alpha) => -(Rational::one() / (alpha + Rational::one())),
            TreeFamily::Dary(d) => Rational::new(1.into(), (i64::from(*d) - 1).into()),
        }
    }

    /// Inverse of [`TreeFamily::weight_ratio`].
    pub fn from_weight_ratio(r: &Rational) -> Result<Self> {
        if r.is_zero() {
            return Ok(TreeFamily::Rect);
        }
        let inv = r.recip();
        if r.is_negative() {
            let alpha = -inv - Rational::one();
            if !alpha.is_positive() {
                return Err(bad("descendants", "a negative r needs -1 < r < 0"));
            }
            return Ok(TreeFamily::Gport(alpha));
        }
        let d = inv + Rational::one();
        match (d.is_integer(), d.to_integer().to_u32()) {
            (true, Some(d)) => Ok(TreeFamily::Dary(d)),
            _ => Err(bad("descendants", format!("r = {r} is not 1/(d-1) for an integer d"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            TreeFamily::Rect => "rect".into(),
            TreeFamily::Gport(a) => format!("gport({a})"),
            TreeFamily::Dary(d) => format!("dary({d})"),
        }
    }
}

/// A model together with its parameters; construct through [`ModelSpec::from_params`]
/// or the variants directly and call [`ModelSpec::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Blocks { n: u64, k: u32, ell: u64 },
    Dimurn { n: u64, m: u64, alpha: u64, delta: u64 },
    Descendants { n: u64, j: u64, family: TreeFamily },
    Nodedeg { n: u64, j: u64, alpha: Rational },
    Branches { n: u64, j: u64, k: u64, alpha: Rational },
    Crp { n: u64, j: u64, a: Rational, theta: Rational },
    Triangular { n: u64, w0: u64, b0: u64, alpha: u64, beta: u64 },
    Inversions { n: u64, j: u64, kappa: f64 },
    Records { n: u64, j: u64 },
    Edgecut { n: u64, j: u64 },
    Parking { n: u64, j: u64 },
    Bridge { n: u64, j: u64 },
    Mapping { n: u64, j: u64 },
}

/// How the limit of the scaled statistic behaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `λ → ∞`: the statistic over `λ` tends to the mixing law.
    ToInfinity,
    /// `λ → ρ ∈ (0, ∞)`: mixed Poisson limit.
    FiniteRho,
    /// `λ → 0`: the statistic tends to zero.
    Degenerate,
}

impl Regime {
    pub fn classify(lambda: f64) -> Self {
        if lambda < REGIME_DEGENERATE {
            Regime::Degenerate
        } else if lambda > REGIME_INFINITE {
            Regime::ToInfinity
        } else {
            Regime::FiniteRho
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::ToInfinity => "to-infinity",
            Regime::FiniteRho => "finite-rho",
            Regime::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scale parameter, limiting mixing law and regime of a model instance.
#[derive(Clone, Debug)]
pub struct ScaleInfo {
    pub lambda: f64,
    pub mixing: MixingLaw64,
    pub regime: Regime,
}

/// A factorial moment, exact unless the model only has an asymptotic form.
#[derive(Clone, Debug, PartialEq)]
pub enum MomentValue {
    Exact(Rational),
    Asymptotic(f64),
}

impl MomentValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            MomentValue::Exact(r) => Scalar::to_f64(r),
            MomentValue::Asymptotic(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            MomentValue::Exact(r) => Some(r),
            MomentValue::Asymptotic(_) => None,
        }
    }

    pub fn is_asymptotic(&self) -> bool {
        matches!(self, MomentValue::Asymptotic(_))
    }
}

fn to_f64(r: &Rational) -> f64 {
    Scalar::to_f64(r)
}

fn bad(model: &str, msg: impl fmt::Display) -> Error {
    Error::Domain(format!("{model}: {msg}"))
}

impl ModelSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            ModelSpec::Blocks { .. } => "blocks",
            ModelSpec::Dimurn { .. } => "dimurn",
            ModelSpec::Descendants { .. } => "descendants",
            ModelSpec::Nodedeg { .. } => "nodedeg",
            ModelSpec::Branches { .. } => "branches",
            ModelSpec::Crp { .. } => "crp",
            ModelSpec::Triangular { .. } => "triangular",
            ModelSpec::Inversions { .. } => "inversions",
            ModelSpec::Records { .. } => "records",
            ModelSpec::Edgecut { .. } => "edgecut",
            ModelSpec::Parking { .. } => "parking",
            ModelSpec::Bridge { .. } => "bridge",
            ModelSpec::Mapping { .. } => "mapping",
        }
    }

    /// Process size `n`.
    pub fn size(&self) -> u64 {
        match self {
            ModelSpec::Blocks { n, .. }
            | ModelSpec::Dimurn { n, .. }
            | ModelSpec::Descendants { n, .. }
            | ModelSpec::Nodedeg { n, .. }
            | ModelSpec::Branches { n, .. }
            | ModelSpec::Crp { n, .. }
            | ModelSpec::Triangular { n, .. }
            | ModelSpec::Inversions { n, .. }
            | ModelSpec::Records { n, .. }
            | ModelSpec::Edgecut { n, .. }
            | ModelSpec::Parking { n, .. }
            | ModelSpec::Bridge { n, .. }
            | ModelSpec::Mapping { n, .. } => *n,
        }
    }

    /// The part index reported in the `j` column: the counted part size, or the
    /// node label for per-node statistics. Zero for models without one.
    pub fn part(&self) -> u64 {
        match self {
            ModelSpec::Blocks { ell, .. } => *ell,
            ModelSpec::Branches { k, .. } => *k,
            ModelSpec::Dimurn { .. } | ModelSpec::Triangular { .. } => 0,
            ModelSpec::Descendants { j, .. }
            | ModelSpec::Nodedeg { j, .. }
            | ModelSpec::Crp { j, .. }
            | ModelSpec::Inversions { j, .. }
            | ModelSpec::Records { j, .. }
            | ModelSpec::Edgecut { j, .. }
            | ModelSpec::Parking { j, .. }
            | ModelSpec::Bridge { j, .. }
            | ModelSpec::Mapping { j, .. } => *j,
        }
    }

    /// The same model with the part index replaced (see [`ModelSpec::part`]).
    pub fn with_part(&self, part: u64) -> Self {
        let mut out = self.clone();
        match &mut out {
            ModelSpec::Blocks { ell, .. } => *ell = part,
            ModelSpec::Branches { k, .. } => *k = part,
            ModelSpec::Dimurn { .. } | ModelSpec::Triangular { .. } => {}
            ModelSpec::Descendants { j, .. }
            | ModelSpec::Nodedeg { j, .. }
            | ModelSpec::Crp { j, .. }
            | ModelSpec::Inversions { j, .. }
            | ModelSpec::Records { j, .. }
            | ModelSpec::Edgecut { j, .. }
            | ModelSpec::Parking { j, .. }
            | ModelSpec::Bridge { j, .. }
            | ModelSpec::Mapping { j, .. } => *j = part,
        }
        out
    }

    /// The valid part indices for this size, in increasing order.
    pub fn parts(&self) -> Vec<u64> {
        let n = self.size();
        match self {
            ModelSpec::Dimurn { .. } | ModelSpec::Triangular { .. } => vec![0],
            ModelSpec::Nodedeg { .. } => (2..=n).collect(),
            ModelSpec::Edgecut { .. } => (1..n).collect(),
            ModelSpec::Branches { j, .. } => (1..=n.saturating_sub(*j)).collect(),
            _ => (1..=n).collect(),
        }
    }

    /// Named parameters as display strings, in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        let s = |v: &dyn fmt::Display| v.to_string();
        match self {
            ModelSpec::Blocks { n, k, ell } => vec![("n", s(n)), ("k", s(k)), ("ell", s(ell))],
            ModelSpec::Dimurn { n, m, alpha, delta } => {
                vec![("n", s(n)), ("m", s(m)), ("alpha", s(alpha)), ("delta", s(delta))]
            }
            ModelSpec::Descendants { n, j, family } => {
                let mut v = vec![("n", s(n)), ("j", s(j)), ("family", family.name())];
                match family {
                    TreeFamily::Rect => {}
                    TreeFamily::Gport(a) => v.push(("alpha", s(a))),
                    TreeFamily::Dary(d) => v.push(("d", s(d))),
                }
                v
            }
            ModelSpec::Nodedeg { n, j, alpha } => vec![("n", s(n)), ("j", s(j)), ("alpha", s(alpha))],
            ModelSpec::Branches { n, j, k, alpha } => {
                vec![("n", s(n)), ("j", s(j)), ("k", s(k)), ("alpha", s(alpha))]
            }
            ModelSpec::Crp { n, j, a, theta } => vec![("n", s(n)), ("j", s(j)), ("a", s(a)), ("theta", s(theta))],
            ModelSpec::Triangular { n, w0, b0, alpha, beta } => vec![
                ("n", s(n)),
                ("w0", s(w0)),
                ("b0", s(b0)),
                ("alpha", s(alpha)),
                ("beta", s(beta)),
            ],
            ModelSpec::Inversions { n, j, kappa } => vec![("n", s(n)), ("j", s(j)), ("kappa", s(kappa))],
            ModelSpec::Records { n, j }
            | ModelSpec::Edgecut { n, j }
            | ModelSpec::Parking { n, j }
            | ModelSpec::Bridge { n, j }
            | ModelSpec::Mapping { n, j } => vec![("n", s(n)), ("j", s(j))],
        }
    }

    /// Builds a model from a tag and loosely typed parameters.
    pub fn from_params(tag: &str, p: &Params) -> Result<Self> {
        let spec = match tag {
            "blocks" => ModelSpec::Blocks {
                n: p.uint("n")?,
                k: p.small("k")?,
                ell: p.uint_or("ell", "j")?,
            },
            "dimurn" => ModelSpec::Dimurn {
                n: p.uint("n")?,
                m: p.uint("m")?,
                alpha: p.uint_default("alpha", 1)?,
                delta: p.uint_default("delta", 1)?,
            },
            "descendants" => {
                let family = match (p.get("d"), p.get("alpha"), p.get("r")) {
                    (Some(_), None, None) => TreeFamily::Dary(p.small("d")?),
                    (None, Some(a), None) => TreeFamily::Gport(a.clone()),
                    (None, None, None) => TreeFamily::Rect,
                    (None, None, Some(r)) => TreeFamily::from_weight_ratio(r)?,
                    _ => return Err(bad(tag, "give at most one of d (d-ary), alpha (gport) or r")),
                };
                ModelSpec::Descendants { n: p.uint("n")?, j: p.uint("j")?, family }
            }
            "nodedeg" => ModelSpec::Nodedeg { n: p.uint("n")?, j: p.uint("j")?, alpha: p.rational("alpha")? },
            "branches" => ModelSpec::Branches {
                n: p.uint("n")?,
                j: p.uint("j")?,
                k: p.uint("k")?,
                alpha: p.rational("alpha")?,
            },
            "crp" => {
                let (a, theta) = match (p.get("a"), p.get("theta"), p.get("alpha"), p.get("beta")) {
                    (Some(a), Some(t), None, None) => (a.clone(), t.clone()),
                    (None, None, Some(al), Some(be)) => {
                        let a = Rational::one() / (al + Rational::one());
                        (a.clone(), be * a)
                    }
                    _ => return Err(bad(tag, "give (a, theta) or (alpha, beta)")),
                };
                ModelSpec::Crp { n: p.uint("n")?, j: p.uint("j")?, a, theta }
            }
            "triangular" => {
                let alpha = p.uint("alpha")?;
                let beta = p.uint("beta")?;
                if let Some(g) = p.get("gamma") {
                    if *g != Rational::from_integer((alpha + beta).into()) {
                        return Err(bad(tag, format!("gamma must equal alpha + beta = {}", alpha + beta)));
                    }
                }
                ModelSpec::Triangular { n: p.uint("n")?, w0: p.uint("w0")?, b0: p.uint("b0")?, alpha, beta }
            }
            "inversions" => ModelSpec::Inversions {
                n: p.uint("n")?,
                j: p.uint("j")?,
                kappa: to_f64(&p.rational("kappa")?),
            },
            "records" => ModelSpec::Records { n: p.uint("n")?, j: p.uint("j")? },
            "edgecut" => ModelSpec::Edgecut { n: p.uint("n")?, j: p.uint("j")? },
            "parking" => ModelSpec::Parking { n: p.uint("n")?, j: p.uint("j")? },
            "bridge" => ModelSpec::Bridge { n: p.uint("n")?, j: p.uint("j")? },
            "mapping" => ModelSpec::Mapping { n: p.uint("n")?, j: p.uint("j")? },
            other => return Err(Error::UnknownModel(other.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the parameter ranges of the model.
    pub fn validate(&self) -> Result<()> {
        let tag = self.tag();
        let n = self.size();
        let need = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(bad(tag, msg)) };
        match self {
            ModelSpec::Blocks { k, ell, .. } => {
                need(n >= 1, "need n >= 1")?;
                need(*k >= 1, "need k >= 1")?;
                need(*ell >= 1, "need ell >= 1")
            }
            ModelSpec::Dimurn { alpha, delta, .. } => need(*alpha >= 1 && *delta >= 1, "need alpha, delta >= 1"),
            ModelSpec::Descendants { j, family, .. } => {
                need(*j >= 1 && *j <= n, "need 1 <= j <= n")?;
                match family {
                    TreeFamily::Rect => Ok(()),
                    TreeFamily::Gport(a) => need(a.is_positive(), "gport needs alpha > 0"),
                    TreeFamily::Dary(d) => need(*d >= 2, "d-ary trees need d >= 2"),
                }
            }
            ModelSpec::Nodedeg { j, alpha, .. } => {
                need(*j >= 2 && *j <= n, "need 2 <= j <= n")?;
                need(alpha.is_positive(), "need alpha > 0")
            }
            ModelSpec::Branches { j, k, alpha, .. } => {
                need(*j >= 1 && *k >= 1 && j + k <= n, "need j >= 1 and 1 <= k <= n - j")?;
                need(alpha.is_positive(), "need alpha > 0")
            }
            ModelSpec::Crp { j, a, theta, .. } => {
                need(*j >= 1 && *j <= n, "need 1 <= j <= n")?;
                need(a.is_positive() && *a < Rational::one(), "need 0 < a < 1")?;
                need(*theta > -a.clone(), "need theta > -a")?;
                need(theta.is_positive(), "need beta = theta/a > 0")
            }
            ModelSpec::Triangular { w0, alpha, .. } => {
                need(*w0 >= 1, "need w0 >= 1")?;
                need(*alpha >= 1, "need alpha >= 1")
            }
            ModelSpec::Inversions { j, kappa, .. } => {
                need(*j >= 1 && *j <= n, "need 1 <= j <= n")?;
                need(*kappa > 0.0 && kappa.is_finite(), "need kappa > 0")
            }
            ModelSpec::Edgecut { j, .. } => need(n >= 2 && *j >= 1 && *j < n, "need 1 <= j <= n - 1"),
            ModelSpec::Records { j, .. }
            | ModelSpec::Parking { j, .. }
            | ModelSpec::Bridge { j, .. }
            | ModelSpec::Mapping { j, .. } => need(*j >= 1 && *j <= n, "need 1 <= j <= n"),
        }
    }

    /// Tree-growth parameters `(alpha, beta)` of a restaurant model.
    pub fn crp_growth(&self) -> Option<(Rational, Rational)> {
        match self {
            ModelSpec::Crp { a, theta, .. } => Some(crp_params(a, theta)),
            _ => None,
        }
    }

    /// Exact factorial moment of order `s` (asymptotic for inversions).
    pub fn factorial_moment(&self, s: u32) -> Result<MomentValue> {
        self.validate()?;
        if s == 0 {
            return Ok(MomentValue::Exact(Rational::one()));
        }
        let v = match self {
            ModelSpec::Inversions { n, j, kappa } => return Ok(MomentValue::Asymptotic(inversions_fm(*n, *j, s, *kappa))),
            ModelSpec::Records { n, j } => records_fm(*n, *j, s)?,
            ModelSpec::Edgecut { n, j } => edgecut_fm(*n, *j, s)?,
            ModelSpec::Parking { n, j } => parking_fm(*n, *j, s)?,
            ModelSpec::Mapping { n, j } => mapping_fm(*n, *j, s)?,
            ModelSpec::Triangular { n, w0, b0, alpha, beta } => triangular_fm(*n, *w0, *b0, *alpha, *beta, s)?,
            other => other.generic_moment::<Rational>(s),
        };
        Ok(MomentValue::Exact(v))
    }

    /// Factorial moment in double precision, using the fast paths for large
    /// sizes where exact arithmetic gets expensive.
    pub fn factorial_moment_f64(&self, s: u32) -> Result<f64> {
        self.validate()?;
        if s == 0 {
            return Ok(1.0);
        }
        Ok(match self {
            ModelSpec::Inversions { n, j, kappa } => inversions_fm(*n, *j, s, *kappa),
            ModelSpec::Records { n, j } => records_fm_f64(*n, *j, s)?,
            ModelSpec::Mapping { n, j } => mapping_fm_f64(*n, *j, s)?,
            ModelSpec::Edgecut { n, j } => edgecut_fm_f64(*n, *j, s)?,
            ModelSpec::Parking { n, j } => parking_fm_f64(*n, *j, s)?,
            ModelSpec::Triangular { n, w0, b0, alpha, beta } => triangular_fm::<f64>(*n, *w0, *b0, *alpha, *beta, s)?,
            other => other.generic_moment::<f64>(s),
        })
    }

    fn generic_moment<T: Scalar>(&self, s: u32) -> T {
        let r = |x: &Rational| T::from_rational(x);
        match self {
            ModelSpec::Blocks { n, k, ell } => blocks_fm(*n, *k, *ell, s),
            ModelSpec::Dimurn { n, m, alpha, delta } => dimurn_fm(*n, *m, *alpha, *delta, s),
            ModelSpec::Descendants { n, j, family } => descendants_fm(*n, *j, s, &r(&family.weight_ratio())),
            ModelSpec::Nodedeg { n, j, alpha } => nodedeg_fm(*n, *j, s, &r(alpha)),
            ModelSpec::Branches { n, j, k, alpha } => branches_fm(*n, *j, *k, s, &r(alpha)),
            ModelSpec::Crp { n, j, a, theta } => {
                let (alpha, beta) = crp_params(a, theta);
                crp_fm(*n, *j, s, &r(&alpha), &r(&beta))
            }
            ModelSpec::Bridge { n, j } => bridge_fm(*n, *j, s),
            _ => unreachable!("{} has a dedicated moment path", self.tag()),
        }
    }

    /// Scale parameter, mixing law and regime.
    pub fn scale(&self) -> Result<ScaleInfo> {
        self.validate()?;
        let nf = self.size() as f64;
        let rayleigh = || MixingLaw::rayleigh(1.0);
        let tree_scale = |j: u64| {
            let jf = j as f64;
            let ln = (jf - 1.0) * jf.ln() - crate::numerics::log_gamma(jf + 1.0).unwrap_or(f64::NAN) - jf;
            nf.sqrt() * ln.exp()
        };
        let (lambda, mixing) = match self {
            ModelSpec::Blocks { n, k, ell } => {
                let kf = f64::from(*k);
                let head: f64 = gen_binomial(&((*ell as f64) - 1.0 - 1.0 / kf), ell - 1) / (kf * *ell as f64);
                (head * (*n as f64).powf(1.0 / kf), MixingLaw::block_law(*k)?)
            }
            ModelSpec::Dimurn { n, m, alpha, delta } => {
                let ratio = *alpha as f64 / *delta as f64;
                (*n as f64 / (*m as f64).powf(ratio), MixingLaw::weibull(1.0 / ratio)?)
            }
            ModelSpec::Descendants { n, j, family } => {
                let r = to_f64(&family.weight_ratio());
                ((n - j) as f64 / *j as f64, MixingLaw::gamma(1.0 + r, 1.0)?)
            }
            ModelSpec::Nodedeg { n, j, alpha } => {
                let a = to_f64(alpha);
                ((*n as f64 / *j as f64).powf(1.0 / (a + 1.0)) - 1.0, MixingLaw::gamma(a, 1.0)?)
            }
            ModelSpec::Branches { j, k, alpha, .. } => {
                let a = to_f64(alpha);
                let w: f64 = branch_weight(*k, &a);
                let j = u32::try_from(*j).map_err(|_| bad("branches", "j too large"))?;
                (nf.powf(1.0 / (a + 1.0)) * w, MixingLaw::branch_law(j, a)?)
            }
            ModelSpec::Crp { j, a, theta, .. } => {
                let (alpha, beta) = crp_params(a, theta);
                let (al, be) = (to_f64(&alpha), to_f64(&beta));
                let w: f64 = branch_weight(*j, &al);
                (nf.powf(1.0 / (al + 1.0)) * w, MixingLaw::crp_law(al, be)?)
            }
            ModelSpec::Triangular { n, w0, b0, alpha, beta } => {
                let gamma = (alpha + beta) as f64;
                let lambda = if *b0 == 0 {
                    f64::INFINITY
                } else {
                    let base = *b0 as f64 / gamma;
                    ((*n as f64 + base) / base).powf(*alpha as f64 / gamma) - 1.0
                };
                (lambda, MixingLaw::gamma(*w0 as f64 / *alpha as f64, 1.0)?)
            }
            ModelSpec::Inversions { n, j, kappa } => ((n - j) as f64 / (kappa * *n as f64).sqrt(), rayleigh()?),
            ModelSpec::Records { j, .. }
            | ModelSpec::Edgecut { j, .. }
            | ModelSpec::Parking { j, .. }
            | ModelSpec::Mapping { j, .. } => (tree_scale(*j), rayleigh()?),
            ModelSpec::Bridge { j, .. } => {
                let jf = *j as f64;
                // C(2(j-1), j-1)/4^j through the bounded half-integer binomial.
                let central: f64 = gen_binomial(&(jf - 1.5), j - 1) / 4.0;
                (2.0 * SQRT_2 * central * nf.sqrt() / jf, rayleigh()?)
            }
        };
        Ok(ScaleInfo { lambda, mixing, regime: Regime::classify(lambda) })
    }

    /// Scale parameter as an exact rational when it is one, for reports.
    pub fn lambda_exact(&self) -> Option<Rational> {
        match self {
            ModelSpec::Descendants { n, j, .. } => Some(Rational::new((n - j).into(), (*j).into())),
            ModelSpec::Dimurn { n, m, alpha, delta } if alpha == delta => {
                (*m > 0).then(|| Rational::new((*n).into(), (*m).into()))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests;
