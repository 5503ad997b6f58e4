use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Declared behaviour of a function as `|Re z| → ∞` inside its strip.
///
/// Envelopes (up to a constant):
///
/// | class                | envelope           |
/// |----------------------|--------------------|
/// | `ExponentialDecay(δ)`| `e^{-δ|x|}`        |
/// | `Asymptotic`         | faster than any power of `|x|` |
/// | `Tempered(γ)`        | `|x|^γ`            |
/// | `InfraExponential`   | `e^{ε|x|}` for every `ε > 0` |
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GrowthClass {
    Asymptotic,
    Tempered(f64),
    InfraExponential,
    ExponentialDecay(f64),
}

impl GrowthClass {
    fn rank(&self) -> u8 {
        match self {
            GrowthClass::ExponentialDecay(_) => 0,
            GrowthClass::Asymptotic => 1,
            GrowthClass::Tempered(_) => 2,
            GrowthClass::InfraExponential => 3,
        }
    }

    /// Whether every function of class `self` also belongs to `other`.
    pub fn fits_within(&self, other: &GrowthClass) -> bool {
        use GrowthClass::*;
        match (self, other) {
            (ExponentialDecay(a), ExponentialDecay(b)) => a >= b,
            (Tempered(a), Tempered(b)) => a <= b,
            _ => self.rank() <= other.rank(),
        }
    }

    /// The weaker (larger) of two classes; the class of a sum.
    pub fn weakest(self, other: GrowthClass) -> GrowthClass {
        if self.fits_within(&other) {
            other
        } else if other.fits_within(&self) {
            self
        } else {
            // incomparable only for classes of equal rank with parameters
            match (self, other) {
                (GrowthClass::ExponentialDecay(a), GrowthClass::ExponentialDecay(b)) => {
                    GrowthClass::ExponentialDecay(a.min(b))
                }
                (GrowthClass::Tempered(a), GrowthClass::Tempered(b)) => {
                    GrowthClass::Tempered(a.max(b))
                }
                _ => GrowthClass::InfraExponential,
            }
        }
    }

    /// Whether hyperfunctions of this class admit moments of every order.
    pub fn is_asymptotic(&self) -> bool {
        matches!(
            self,
            GrowthClass::Asymptotic | GrowthClass::ExponentialDecay(_)
        )
    }

    /// Unit-constant envelope used by growth spot checks. `Asymptotic` is
    /// checked against `|x|^{-2}`, `InfraExponential` against `e^{|x|/10}`.
    pub fn envelope(&self, x: f64) -> f64 {
        let r = x.abs().max(1.0);
        match self {
            GrowthClass::ExponentialDecay(d) => (-d * x.abs()).exp(),
            GrowthClass::Asymptotic => r.powi(-2),
            GrowthClass::Tempered(g) => r.powf(*g),
            GrowthClass::InfraExponential => (0.1 * x.abs()).exp(),
        }
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthClass::Asymptotic => f.write_str("asymptotic"),
            GrowthClass::Tempered(g) => write!(f, "tempered({g})"),
            GrowthClass::InfraExponential => f.write_str("infra-exponential"),
            GrowthClass::ExponentialDecay(d) => write!(f, "exp-decay({d})"),
        }
    }
}

impl FromStr for GrowthClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let param = |prefix: &str| -> Option<Result<f64, String>> {
            let rest = s.strip_prefix(prefix)?;
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .or_else(|| rest.strip_prefix(':'));
            Some(
                inner
                    .ok_or_else(|| format!("malformed growth class `{s}`"))
                    .and_then(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| format!("bad parameter in `{s}`: {e}"))
                    }),
            )
        };
        match s {
            "asymptotic" => return Ok(GrowthClass::Asymptotic),
            "infra-exponential" | "infraexponential" => return Ok(GrowthClass::InfraExponential),
            _ => {}
        }
        if let Some(g) = param("tempered") {
            return Ok(GrowthClass::Tempered(g?));
        }
        if let Some(d) = param("exp-decay") {
            let d = d?;
            if d <= 0.0 {
                return Err(format!("exponential decay rate must be positive in `{s}`"));
            }
            return Ok(GrowthClass::ExponentialDecay(d));
        }
        Err(format!("unknown growth class `{s}`"))
    }
}

impl Serialize for GrowthClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GrowthClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
