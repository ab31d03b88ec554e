use exact_core::{Monomial, VarId};
use flag_geometry::FlagShape;
use j_series::SeriesVariant;

use crate::VariantArgs;

pub fn shape(s: &str) -> Result<FlagShape, String> {
    s.parse().map_err(|e: flag_geometry::GeometryError| e.to_string())
}

pub fn triple(s: &str) -> Result<(usize, usize, usize), String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| format!("expected i,r,s, got {s:?}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [i, r, s] => Ok((i, r, s)),
        _ => Err(format!("expected i,r,s, got {s:?}")),
    }
}

/// `L_2_2^3*L_2_1^-1`, `q/L_2_1`, or `1`.
pub fn monomial(s: &str) -> Result<Monomial, String> {
    let mut m = Monomial::one();
    if s.trim() == "1" {
        return Ok(m);
    }
    let mut sign = 1;
    let mut rest = s.trim();
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let (tok, tail) = rest.split_at(end);
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (n, e.trim().parse::<i64>().map_err(|_| format!("bad exponent in {tok:?}"))?),
            None => (tok, 1),
        };
        let v: VarId = name.trim().parse().map_err(|e: exact_core::CoreError| e.to_string())?;
        m.mul_var(v, sign * exp);
        if tail.is_empty() {
            return Ok(m);
        }
        sign = if tail.starts_with('/') { -1 } else { 1 };
        rest = &tail[1..];
    }
}

pub fn variant(a: &VariantArgs, default: &str) -> Result<SeriesVariant, String> {
    let name = a.variant.as_deref().unwrap_or(default);
    SeriesVariant::from_name(name, a.level_i, a.level_l).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials() {
        let m = monomial("L_2_2^3*L_2_1^-1").unwrap();
        assert_eq!(m.exponent(VarId::lambda(2, 2)), 3);
        assert_eq!(m.exponent(VarId::lambda(2, 1)), -1);
        let m = monomial("q/L_2_1").unwrap();
        assert_eq!(m.exponent(VarId::Q), 1);
        assert_eq!(m.exponent(VarId::lambda(2, 1)), -1);
        assert!(monomial("1").unwrap().is_one());
        assert!(monomial("z").is_err());
    }

    #[test]
    fn triples() {
        assert_eq!(triple("1,2,1").unwrap(), (1, 2, 1));
        assert!(triple("1,2").is_err());
    }
}
