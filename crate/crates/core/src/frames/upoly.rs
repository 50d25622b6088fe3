use std::fmt;

use crate::algebra::{GradedAlgebra, Polynomial};

/// A homogeneous element of `B[u]` with `deg u = 1`.
///
/// `coeffs[i]` is the coefficient of `u^i`; it lies in `B` in degree
/// `degree - i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    degree: u32,
    coeffs: Vec<Polynomial>,
}

impl UPoly {
    pub fn zero(degree: u32) -> Self {
        UPoly { degree, coeffs: vec![Polynomial::zero(); degree as usize + 1] }
    }

    /// `c * u^0` for a homogeneous `c` of the given degree.
    pub fn constant(c: Polynomial, degree: u32) -> Self {
        let mut p = UPoly::zero(degree);
        p.coeffs[0] = c;
        p
    }

    pub fn u_power(j: u32, ring: &GradedAlgebra) -> Self {
        let mut p = UPoly::zero(j);
        p.coeffs[j as usize] = ring.one();
        p
    }

    /// Builds from `(u exponent, coefficient)` pairs; coefficients at equal
    /// exponents are summed.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (u32, Polynomial)>) -> Self {
        let mut p = UPoly::zero(degree);
        for (i, c) in terms {
            if i <= degree {
                p.coeffs[i as usize] += &c;
            }
        }
        p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, i: u32) -> &Polynomial {
        static ZERO: std::sync::OnceLock<Polynomial> = std::sync::OnceLock::new();
        self.coeffs.get(i as usize).unwrap_or_else(|| ZERO.get_or_init(Polynomial::zero))
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    /// Largest `i` with a nonzero `u^i` coefficient.
    pub fn u_degree(&self) -> Option<u32> {
        self.coeffs.iter().rposition(|c| !c.is_zero()).map(|i| i as u32)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Polynomial)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u32, c))
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        assert_eq!(self.degree, other.degree, "adding u-polynomials of different degree");
        UPoly { degree: self.degree, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn mul(&self, other: &UPoly, ring: &GradedAlgebra) -> UPoly {
        let mut out = UPoly::zero(self.degree + other.degree);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                let prod = ring.mul(a, b);
                out.coeffs[(i + j) as usize] += &prod;
            }
        }
        out
    }

    pub fn shift(&self, j: u32) -> UPoly {
        let mut coeffs = vec![Polynomial::zero(); j as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { degree: self.degree + j, coeffs }
    }

    pub fn map_coeffs(&self, degree: u32, f: impl Fn(&Polynomial) -> Polynomial) -> UPoly {
        let mut out = UPoly::zero(degree);
        for (i, c) in self.terms() {
            if i <= degree {
                out.coeffs[i as usize] = f(c);
            }
        }
        out
    }

    pub fn reduce(&self, ring: &GradedAlgebra) -> UPoly {
        UPoly { degree: self.degree, coeffs: self.coeffs.iter().map(|c| ring.reduce(c)).collect() }
    }

    /// Index of the first coefficient that is not homogeneous of the right degree.
    pub fn shape_defect(&self) -> Option<u32> {
        self.coeffs.iter().enumerate().find_map(|(i, c)| {
            let want = self.degree - i as u32;
            (!c.is_zero() && c.degree() != Some(want)).then_some(i as u32)
        })
    }

    /// Value at `u = 1` and every generator of `B` equal to 1: the parity of
    /// the number of monomials.
    pub fn evaluate_at_ones(&self) -> bool {
        self.coeffs.iter().map(Polynomial::len).sum::<usize>() % 2 == 1
    }

    pub fn display<'a>(&'a self, ring: &'a GradedAlgebra) -> UPolyDisplay<'a> {
        UPolyDisplay { poly: self, ring }
    }
}

pub struct UPolyDisplay<'a> {
    poly: &'a UPoly,
    ring: &'a GradedAlgebra,
}

impl fmt::Display for UPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .poly
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(i, c)| {
                let cs = self.ring.format(c);
                let upart = match i {
                    0 => String::new(),
                    1 => "u".to_string(),
                    i => format!("u^{i}"),
                };
                match (cs.as_str(), upart.is_empty()) {
                    ("1", false) => upart,
                    (_, true) => cs,
                    (s, false) if c.len() == 1 => format!("{s}*{upart}"),
                    (s, false) => format!("({s})*{upart}"),
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
