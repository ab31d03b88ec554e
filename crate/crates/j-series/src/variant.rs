use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::JSeriesError;

/// Which closed-form series a [`crate::JSeries`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SeriesVariant {
    /// Toric J-function of `Y`: the `Λ`-dependent denominators only.
    UntwistedY,
    /// `y`-twisted J-function of `Y`.
    TwY,
    /// Small J-function of `X`.
    XSmall,
    /// `X` twisted by `Eu` of `V_i^∨`, parameter `mu`.
    EuDualTaut { i: usize },
    /// `X` twisted by `Eu` of `V_i`, parameter `mu`.
    EuTaut { i: usize },
    /// `X` twisted by the cotangent bundle, parameter `hbar`.
    Cotangent,
    /// Level `l` structure on `V_i`.
    Level { i: usize, l: i64 },
}

impl SeriesVariant {
    /// Variants whose degrees live on the abelian lattice of `Y`.
    pub fn is_y_side(&self) -> bool {
        matches!(self, SeriesVariant::UntwistedY | SeriesVariant::TwY)
    }

    /// Level index used by the variant, if any.
    pub fn level_index(&self) -> Option<usize> {
        match *self {
            SeriesVariant::EuDualTaut { i } | SeriesVariant::EuTaut { i } | SeriesVariant::Level { i, .. } => Some(i),
            _ => None,
        }
    }

    /// Parses the CLI names `x-small`, `tw-y`, `untwisted-y`, `cotangent`,
    /// `eu-dual-taut`, `eu-taut` and `level`, with the level data supplied
    /// separately.
    pub fn from_name(name: &str, i: Option<usize>, l: Option<i64>) -> Result<Self, JSeriesError> {
        let need_i = || i.ok_or_else(|| JSeriesError::Parse(format!("variant {name} needs a level index")));
        Ok(match name {
            "x-small" => SeriesVariant::XSmall,
            "tw-y" => SeriesVariant::TwY,
            "untwisted-y" => SeriesVariant::UntwistedY,
            "cotangent" => SeriesVariant::Cotangent,
            "eu-dual-taut" => SeriesVariant::EuDualTaut { i: need_i()? },
            "eu-taut" => SeriesVariant::EuTaut { i: need_i()? },
            "level" => SeriesVariant::Level {
                i: need_i()?,
                l: l.ok_or_else(|| JSeriesError::Parse("variant level needs an exponent".into()))?,
            },
            _ => return Err(JSeriesError::Parse(format!("unknown variant {name:?}"))),
        })
    }
}

impl fmt::Display for SeriesVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesVariant::UntwistedY => write!(f, "untwisted-y"),
            SeriesVariant::TwY => write!(f, "tw-y"),
            SeriesVariant::XSmall => write!(f, "x-small"),
            SeriesVariant::EuDualTaut { i } => write!(f, "eu-dual-taut({i})"),
            SeriesVariant::EuTaut { i } => write!(f, "eu-taut({i})"),
            SeriesVariant::Cotangent => write!(f, "cotangent"),
            SeriesVariant::Level { i, l } => write!(f, "level({i},{l})"),
        }
    }
}

impl FromStr for SeriesVariant {
    type Err = JSeriesError;

    /// Accepts the `Display` form, e.g. `level(1,-1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || JSeriesError::Parse(format!("bad variant {s:?}"));
        match s.split_once('(') {
            None => SeriesVariant::from_name(s, None, None),
            Some((name, rest)) => {
                let args: Vec<&str> = rest.strip_suffix(')').ok_or_else(bad)?.split(',').collect();
                let i = args.first().and_then(|x| x.trim().parse().ok()).ok_or_else(bad)?;
                let l = match args.get(1) {
                    Some(x) => Some(x.trim().parse().map_err(|_| bad())?),
                    None => None,
                };
                SeriesVariant::from_name(name, Some(i), l)
            }
        }
    }
}
