//! Continuous t-norms, their automorphism transforms, n-ary folds and residuals.
//!
//! Every t-norm here is one of the three base norms optionally conjugated by
//! a power automorphism `φ(x) = x^p`:
//!
//! ```text
//! T_φ(a, b)      = φ⁻¹(T(φ(a), φ(b)))
//! y Δ_{T_φ} x    = φ⁻¹(φ(y) Δ_T φ(x))
//! ```
//!
//! The residual `y Δ_T x = sup{z : T(z, x) ≤ y}` is the conditioning
//! operator used throughout the crate. Note that `y Δ_T 0 = 1` for every
//! t-norm.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Supported exponent range for power automorphisms.
pub const POWER_RANGE: (f64, f64) = (0.1, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Godel,
    Product,
    Lukasiewicz,
}

impl Base {
    pub const ALL: [Base; 3] = [Base::Godel, Base::Product, Base::Lukasiewicz];

    pub fn name(self) -> &'static str {
        match self {
            Base::Godel => "godel",
            Base::Product => "product",
            Base::Lukasiewicz => "lukasiewicz",
        }
    }

    fn apply<V: Scalar>(self, a: &V, b: &V) -> V {
        match self {
            Base::Godel => a.min_of(b),
            Base::Product => a.mul(b),
            // lo - (1 - hi): `1 - hi` is exact in binary floating point for
            // hi >= 1/2, which keeps T(z, 1) = z bit-exact.
            Base::Lukasiewicz => {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                lo.sub(&V::one().sub(hi)).max_of(&V::zero())
            }
        }
    }

    fn residual<V: Scalar>(self, y: &V, x: &V) -> V {
        if x <= y {
            return V::one();
        }
        match self {
            Base::Godel => y.clone(),
            Base::Product => y.div(x),
            Base::Lukasiewicz => y.add(&V::one().sub(x)),
        }
    }
}

impl std::str::FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "godel" | "gödel" | "min" | "minimum" => Ok(Base::Godel),
            "product" | "prod" => Ok(Base::Product),
            "lukasiewicz" | "łukasiewicz" | "luk" => Ok(Base::Lukasiewicz),
            other => Err(Error::TNorm(format!("unknown t-norm base `{other}`"))),
        }
    }
}

/// A `[0,1]`-automorphism from the power family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Automorphism {
    /// `φ(x) = x^p`.
    Power { p: f64 },
    /// `φ = φ_n ∘ … ∘ φ_1`, applied first to last.
    Composition { of: Vec<Automorphism> },
}

impl Automorphism {
    pub fn power(p: f64) -> Self {
        Automorphism::Power { p }
    }

    /// Exponents in application order.
    pub fn exponents(&self) -> Vec<f64> {
        match self {
            Automorphism::Power { p } => vec![*p],
            Automorphism::Composition { of } => of.iter().flat_map(|a| a.exponents()).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let exps = self.exponents();
        if exps.is_empty() {
            return Err(Error::TNorm("empty automorphism composition".into()));
        }
        let (lo, hi) = POWER_RANGE;
        for p in exps.iter().copied().chain(std::iter::once(exps.iter().product())) {
            if !(p.is_finite() && (lo..=hi).contains(&p)) {
                return Err(Error::TNorm(format!(
                    "power exponent {p} outside the supported range [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    pub fn forward(&self, x: f64) -> f64 {
        self.exponents().into_iter().fold(x, f64::powf)
    }

    pub fn inverse(&self, x: f64) -> f64 {
        self.exponents().into_iter().rev().fold(x, |acc, p| acc.powf(1.0 / p))
    }
}

/// Algebraic class of a continuous t-norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Class {
    Strict,
    Nilpotent,
    NonArchimedean,
}

/// A continuous t-norm: a base norm, optionally transformed by an
/// automorphism.
///
/// A transform of the Gödel norm is the Gödel norm again, so
/// [`TNorm::new`] drops it (with a warning).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TNormRepr")]
pub struct TNorm {
    pub base: Base,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<Automorphism>,
}

/// Either the object form or the compact string form (`"product@2"`).
#[derive(Deserialize)]
#[serde(untagged)]
enum TNormRepr {
    Text(String),
    Object {
        base: Base,
        #[serde(default)]
        automorphism: Option<Automorphism>,
    },
}

impl TryFrom<TNormRepr> for TNorm {
    type Error = Error;

    fn try_from(r: TNormRepr) -> Result<Self> {
        match r {
            TNormRepr::Text(s) => s.parse(),
            TNormRepr::Object { base, automorphism } => TNorm::new(base, automorphism),
        }
    }
}

impl TNorm {
    pub fn new(base: Base, automorphism: Option<Automorphism>) -> Result<Self> {
        if let Some(a) = &automorphism {
            a.validate()?;
            if base == Base::Godel {
                log::warn!("automorphism transforms of the Gödel t-norm are the Gödel t-norm; transform ignored");
                return Ok(TNorm { base, automorphism: None });
            }
        }
        Ok(TNorm { base, automorphism })
    }

    pub fn godel() -> Self {
        TNorm { base: Base::Godel, automorphism: None }
    }

    pub fn product() -> Self {
        TNorm { base: Base::Product, automorphism: None }
    }

    pub fn lukasiewicz() -> Self {
        TNorm { base: Base::Lukasiewicz, automorphism: None }
    }

    pub fn from_base(base: Base) -> Self {
        TNorm { base, automorphism: None }
    }

    /// `base` conjugated by `φ(x) = x^p`.
    pub fn with_power(base: Base, p: f64) -> Result<Self> {
        TNorm::new(base, Some(Automorphism::power(p)))
    }

    pub fn classify(&self) -> Class {
        match self.base {
            Base::Godel => Class::NonArchimedean,
            Base::Product => Class::Strict,
            Base::Lukasiewicz => Class::Nilpotent,
        }
    }

    pub fn is_archimedean(&self) -> bool {
        self.classify() != Class::NonArchimedean
    }

    /// Errors if values of type `V` cannot be evaluated under this t-norm
    /// (exact scalars with a transform).
    pub fn ensure_supported<V: Scalar>(&self) -> Result<()> {
        if V::EXACT && self.automorphism.is_some() {
            return Err(Error::Inexact(format!("the transformed t-norm {self}")));
        }
        Ok(())
    }

    /// `T(a, b)`.
    pub fn apply<V: Scalar>(&self, a: &V, b: &V) -> Result<V> {
        self.ensure_supported::<V>()?;
        check_unit(a, "t-norm argument")?;
        check_unit(b, "t-norm argument")?;
        Ok(self.eval(a, b))
    }

    /// `T^n(values)`; the empty fold is 1.
    pub fn fold<'a, V: Scalar, I>(&self, values: I) -> Result<V>
    where
        I: IntoIterator<Item = &'a V>,
    {
        self.ensure_supported::<V>()?;
        let mut acc = V::one();
        for v in values {
            check_unit(v, "fold argument")?;
            acc = self.eval(&acc, v);
        }
        Ok(acc)
    }

    /// `y Δ_T x = sup{z ∈ [0,1] : T(z, x) ≤ y}`.
    pub fn residual<V: Scalar>(&self, y: &V, x: &V) -> Result<V> {
        self.ensure_supported::<V>()?;
        check_unit(y, "residual numerator")?;
        check_unit(x, "residual denominator")?;
        Ok(self.eval_residual(y, x))
    }

    /// Unchecked `T(a, b)`. Callers must have run [`ensure_supported`].
    ///
    /// [`ensure_supported`]: TNorm::ensure_supported
    pub(crate) fn eval<V: Scalar>(&self, a: &V, b: &V) -> V {
        match &self.automorphism {
            None => self.base.apply(a, b),
            Some(phi) => {
                let (a, b) = (phi.forward(a.to_f64()), phi.forward(b.to_f64()));
                let mut r = self.base.apply(&a, &b);
                // Cancellation in lo - (1 - hi) leaves a few ulps of noise,
                // which φ⁻¹ with p > 1 inflates (1e-17 becomes 3e-9).
                let hi = a.max(b);
                if self.base == Base::Lukasiewicz && hi < 1.0 && r <= 4.0 * f64::EPSILON * hi {
                    r = 0.0;
                }
                V::from_f64(phi.inverse(r).clamp(0.0, 1.0)).expect("transform on exact scalar")
            }
        }
    }

    pub(crate) fn eval_residual<V: Scalar>(&self, y: &V, x: &V) -> V {
        match &self.automorphism {
            None => self.base.residual(y, x),
            Some(phi) => {
                let (y, x) = (y.to_f64(), x.to_f64());
                if x <= y {
                    return V::one();
                }
                let r = self.base.residual(&phi.forward(y), &phi.forward(x));
                V::from_f64(phi.inverse(r).clamp(0.0, 1.0)).expect("transform on exact scalar")
            }
        }
    }

    pub(crate) fn eval_fold<'a, V: Scalar + 'a>(&self, values: impl IntoIterator<Item = &'a V>) -> V {
        values.into_iter().fold(V::one(), |acc, v| self.eval(&acc, v))
    }
}

impl Default for TNorm {
    fn default() -> Self {
        TNorm::godel()
    }
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.name())?;
        if let Some(a) = &self.automorphism {
            let exps: Vec<String> = a.exponents().iter().map(|p| p.to_string()).collect();
            write!(f, "@{}", exps.join("@"))?;
        }
        Ok(())
    }
}

/// Parses `godel`, `product@2`, `lukasiewicz@2@0.5`, or a JSON object.
impl std::str::FromStr for TNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::TNorm(e.to_string()));
        }
        let mut parts = s.split('@');
        let base: Base = parts.next().unwrap_or_default().parse()?;
        let exps = parts
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::TNorm(format!("bad power exponent `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let automorphism = match exps.len() {
            0 => None,
            1 => Some(Automorphism::power(exps[0])),
            _ => Some(Automorphism::Composition {
                of: exps.into_iter().map(Automorphism::power).collect(),
            }),
        };
        TNorm::new(base, automorphism)
    }
}

fn check_unit<V: Scalar>(v: &V, context: &str) -> Result<()> {
    if v.is_unit() {
        Ok(())
    } else {
        Err(Error::Domain { value: v.to_string(), context: context.to_string() })
    }
}
