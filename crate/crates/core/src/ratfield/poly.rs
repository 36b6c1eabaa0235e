use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, Sign};

/// Univariate polynomial in `K` with rational coefficients.
///
/// `coeffs[i]` is the coefficient of `K^i`; the last stored coefficient is
/// nonzero, so the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyK {
    coeffs: Vec<Rational>,
}

impl PolyK {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyK { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| super::rat(c)).collect())
    }

    pub fn zero() -> Self {
        PolyK { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The parameter `K` itself.
    pub fn k() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `K + offset`.
    pub fn k_plus(offset: i64) -> Self {
        Self::new(vec![super::rat(offset), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `K^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The constant value if `degree() ≤ 0`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Sign of the polynomial for all sufficiently large `K`.
    pub fn sign_at_infinity(&self) -> Sign {
        self.leading_coeff().map_or(Sign::Zero, Sign::of)
    }

    pub fn eval(&self, k: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * k + c)
    }

    pub fn scale(&self, c: &Rational) -> PolyK {
        if c.is_zero() {
            return PolyK::zero();
        }
        PolyK {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division over the rationals. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &PolyK) -> (PolyK, PolyK) {
        let lead = divisor.leading_coeff().expect("polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (PolyK::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let c = &rem[shift + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * d;
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        (PolyK::new(quot), PolyK::new(rem))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &PolyK) -> PolyK {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Splits `self = content · primitive` where `primitive` has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn primitive_split(&self) -> (Rational, PolyK) {
        if self.is_zero() {
            return (Rational::zero(), PolyK::zero());
        }
        let (content, ints) = integer_primitive(&self.coeffs);
        (content, from_int_coeffs(ints))
    }

    /// Greatest common divisor, normalized to a primitive integer polynomial
    /// with positive leading coefficient. Computed by a primitive
    /// pseudo-remainder sequence so no rational coefficients appear.
    pub fn gcd(&self, other: &PolyK) -> PolyK {
        if self.is_zero() {
            return other.primitive_split().1;
        }
        if other.is_zero() {
            return self.primitive_split().1;
        }
        if self.is_constant() || other.is_constant() {
            return PolyK::one();
        }
        let mut a = integer_primitive(&self.coeffs).1;
        let mut b = integer_primitive(&other.coeffs).1;
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = if r.is_empty() {
                r
            } else {
                integer_primitive_ints(r)
            };
        }
        from_int_coeffs(a)
    }

    /// Cauchy bound `1 + max_{i<deg} |c_i| / |c_deg|`: every real root is
    /// strictly below it in absolute value. `None` for constants.
    pub fn cauchy_bound(&self) -> Option<Rational> {
        if self.degree() < 1 {
            return None;
        }
        let lead = self.leading_coeff()?.abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        Some(Rational::one() + max)
    }

    /// Formats with a caller-chosen variable name.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

fn from_int_coeffs(ints: Vec<BigInt>) -> PolyK {
    PolyK::new(ints.into_iter().map(Rational::from_integer).collect())
}

fn integer_primitive(coeffs: &[Rational]) -> (Rational, Vec<BigInt>) {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if ints.last().is_some_and(Signed::is_negative) {
        g = -g;
    }
    let prim = ints.into_iter().map(|c| c / &g).collect();
    (Rational::new(g, lcm), prim)
}

fn integer_primitive_ints(ints: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if ints.last().is_some_and(Signed::is_negative) {
        g = -g;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn trim_ints(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Sparse pseudo-remainder of `a` by `b` over the integers: the result is
/// `λ·a mod b` for some nonzero integer `λ`, which is all a primitive PRS needs.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let lr = r[r.len() - 1].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &lr * bc;
        }
        trim_ints(&mut r);
    }
    r
}

impl fmt::Display for PolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("K"))
    }
}

impl fmt::Debug for PolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyK({self})")
    }
}

impl<'a> Add<&'a PolyK> for &'a PolyK {
    type Output = PolyK;
    fn add(self, rhs: &PolyK) -> PolyK {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyK::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a PolyK> for &'a PolyK {
    type Output = PolyK;
    fn sub(self, rhs: &PolyK) -> PolyK {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyK::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a PolyK> for &'a PolyK {
    type Output = PolyK;
    fn mul(self, rhs: &PolyK) -> PolyK {
        if self.is_zero() || rhs.is_zero() {
            return PolyK::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyK::new(out)
    }
}

impl Neg for &PolyK {
    type Output = PolyK;
    fn neg(self) -> PolyK {
        PolyK {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PolyK> for PolyK {
            type Output = PolyK;
            fn $m(self, rhs: PolyK) -> PolyK {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PolyK {
    type Output = PolyK;
    fn neg(self) -> PolyK {
        -&self
    }
}

impl std::iter::Sum for PolyK {
    fn sum<I: Iterator<Item = PolyK>>(iter: I) -> PolyK {
        iter.fold(PolyK::zero(), |acc, p| &acc + &p)
    }
}

impl std::iter::Product for PolyK {
    fn product<I: Iterator<Item = PolyK>>(iter: I) -> PolyK {
        iter.fold(PolyK::one(), |acc, p| &acc * &p)
    }
}
