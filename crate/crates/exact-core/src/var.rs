use std::fmt;
use std::str::FromStr;

use crate::CoreError;

/// Auxiliary scalar parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuxKind {
    Y,
    Mu,
    Hbar,
    Alpha,
    Beta,
}

/// A variable of the coefficient ring.
///
/// `Lambda(a, r)` is the torus character on the `r`-th coordinate of the
/// `a`-th level (`a = n + 1` is the ambient space). `Cover(a, r)` is an
/// m-th root of `Lambda(a, r)`, introduced when a specialization needs
/// rational m-th roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    Q,
    Lambda(u16, u16),
    P(u16, u16),
    Aux(AuxKind),
    Cover(u16, u16),
}

impl VarId {
    pub const Y: VarId = VarId::Aux(AuxKind::Y);
    pub const MU: VarId = VarId::Aux(AuxKind::Mu);
    pub const HBAR: VarId = VarId::Aux(AuxKind::Hbar);
    pub const ALPHA: VarId = VarId::Aux(AuxKind::Alpha);
    pub const BETA: VarId = VarId::Aux(AuxKind::Beta);

    pub fn lambda(a: usize, r: usize) -> VarId {
        VarId::Lambda(a as u16, r as u16)
    }

    pub fn p(i: usize, s: usize) -> VarId {
        VarId::P(i as u16, s as u16)
    }

    pub fn cover(a: usize, r: usize) -> VarId {
        VarId::Cover(a as u16, r as u16)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Q => write!(f, "q"),
            VarId::Lambda(a, r) => write!(f, "L_{a}_{r}"),
            VarId::P(i, s) => write!(f, "P_{i}_{s}"),
            VarId::Cover(a, r) => write!(f, "C_{a}_{r}"),
            VarId::Aux(k) => f.write_str(match k {
                AuxKind::Y => "y",
                AuxKind::Mu => "mu",
                AuxKind::Hbar => "hbar",
                AuxKind::Alpha => "alpha",
                AuxKind::Beta => "beta",
            }),
        }
    }
}

impl FromStr for VarId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" => return Ok(VarId::Q),
            "y" => return Ok(VarId::Y),
            "mu" => return Ok(VarId::MU),
            "hbar" => return Ok(VarId::HBAR),
            "alpha" => return Ok(VarId::ALPHA),
            "beta" => return Ok(VarId::BETA),
            _ => {}
        }
        let bad = || CoreError::Parse(format!("unknown variable name {s:?}"));
        let mut parts = s.split('_');
        let head = parts.next().ok_or_else(bad)?;
        let a: u16 = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let b: u16 = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        match head {
            "L" => Ok(VarId::Lambda(a, b)),
            "P" => Ok(VarId::P(a, b)),
            "C" => Ok(VarId::Cover(a, b)),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let vars = [
            VarId::Q,
            VarId::lambda(3, 2),
            VarId::p(1, 1),
            VarId::Y,
            VarId::MU,
            VarId::HBAR,
            VarId::ALPHA,
            VarId::BETA,
            VarId::cover(2, 1),
        ];
        for v in vars {
            assert_eq!(v.to_string().parse::<VarId>().unwrap(), v);
        }
        assert_eq!(VarId::lambda(2, 1).to_string(), "L_2_1");
        assert!("Z_1_1".parse::<VarId>().is_err());
        assert!("P_1".parse::<VarId>().is_err());
    }
}
