//! Text syntax for polynomials: `+`-separated terms, `*`-separated factors,
//! `name^k` powers, literal `0` and `1`.

use super::poly::{Monomial, Polynomial};
use super::{AlgebraError, Generator};

fn err(input: &str, reason: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse { input: input.to_string(), reason: reason.into() }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(super) fn parse_polynomial(s: &str, gens: &[Generator], weights: &[u32]) -> Result<Polynomial, AlgebraError> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(err(s, "empty expression"));
    }
    let mut out = Polynomial::zero();
    for term in trimmed.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(err(s, "empty term"));
        }
        if term == "0" {
            continue;
        }
        let mut exps = vec![0u16; gens.len()];
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor == "1" {
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => {
                    let p: u16 = p.trim().parse().map_err(|_| err(s, format!("bad exponent in `{factor}`")))?;
                    (n.trim(), p)
                }
                None => (factor, 1),
            };
            if name.is_empty() || !name.chars().all(is_ident_char) {
                return Err(err(s, format!("bad factor `{factor}`")));
            }
            let idx = gens
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
            exps[idx] += power;
        }
        out.toggle(Monomial::new(exps, weights));
    }
    Ok(out)
}

pub(super) fn format_monomial(m: &Monomial, gens: &[Generator]) -> String {
    let factors: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { gens[i].name.clone() } else { format!("{}^{}", gens[i].name, e) })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

/// Terms are printed in decreasing monomial order.
pub(super) fn format_polynomial(p: &Polynomial, gens: &[Generator]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.terms().rev().map(|m| format_monomial(m, gens)).collect::<Vec<_>>().join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens() -> Vec<Generator> {
        vec![Generator::new("c1", 2), Generator::new("cb1", 2), Generator::new("c2", 4)]
    }

    #[test]
    fn parses_products_and_powers() {
        let g = gens();
        let w = [2, 2, 4];
        let p = parse_polynomial("c1*cb1 + c2 + cb1^2", &g, &w).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.degree(), Some(4));
        let q = parse_polynomial(&format_polynomial(&p, &g), &g, &w).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn constants_and_errors() {
        let g = gens();
        let w = [2, 2, 4];
        assert!(parse_polynomial("0", &g, &w).unwrap().is_zero());
        assert_eq!(format_polynomial(&parse_polynomial("1", &g, &w).unwrap(), &g), "1");
        assert!(matches!(parse_polynomial("x", &g, &w), Err(AlgebraError::UnknownGenerator(_))));
        assert!(matches!(parse_polynomial("c1 + ", &g, &w), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_polynomial("c1^x", &g, &w), Err(AlgebraError::Parse { .. })));
    }
}
