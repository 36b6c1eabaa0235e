use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ArithError, PolyK, Rational, Sign};

/// Rational function `num / den` in `K`, kept in canonical form:
/// `gcd(num, den)` is constant and `den` is a primitive integer polynomial
/// with positive leading coefficient. The zero function is `0 / 1`.
///
/// The only order exposed is the one at `K → +∞` ([`RatFuncK::sign_at_infinity`]
/// and [`RatFuncK::compare`]); there is deliberately no pointwise comparison.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFuncK {
    num: PolyK,
    den: PolyK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: &RatFuncK, b: &RatFuncK, op: ArithOp) -> Result<RatFuncK, ArithError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl RatFuncK {
    pub fn new(num: PolyK, den: PolyK) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn zero() -> Self {
        RatFuncK {
            num: PolyK::zero(),
            den: PolyK::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFuncK {
            num: PolyK::constant(c),
            den: PolyK::one(),
        }
    }

    pub fn from_poly(p: PolyK) -> Self {
        RatFuncK {
            num: p,
            den: PolyK::one(),
        }
    }

    pub fn num(&self) -> &PolyK {
        &self.num
    }

    pub fn den(&self) -> &PolyK {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The constant value, if the function does not depend on `K`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_constant() {
            self.num.as_constant()
        } else {
            None
        }
    }

    // den is canonical, so its leading coefficient is positive
    pub fn sign_at_infinity(&self) -> Sign {
        self.num.sign_at_infinity()
    }

    /// Order at infinity: `sign_at_infinity(self - other)`.
    pub fn compare(&self, other: &RatFuncK) -> Ordering {
        match (self - other).sign_at_infinity() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn eval_at(&self, k0: &Rational) -> Result<Rational, ArithError> {
        let d = self.den.eval(k0);
        if d.is_zero() {
            return Err(ArithError::Pole(k0.clone()));
        }
        Ok(self.num.eval(k0) / d)
    }

    pub fn checked_div(&self, other: &RatFuncK) -> Result<RatFuncK, ArithError> {
        if other.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let inv = RatFuncK {
            num: other.den.clone(),
            den: other.num.clone(),
        };
        Ok(self.mul_parts(&inv))
    }

    /// Maximum Cauchy bound over `num` and `den`: past it neither has a real
    /// root, so the sign of any specialization equals the sign at infinity.
    pub fn root_bound(&self) -> Option<Rational> {
        match (self.num.cauchy_bound(), self.den.cauchy_bound()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    fn canonical(num: PolyK, den: PolyK) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() || num.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.exact_div(&g), den.exact_div(&g))
            }
        };
        let (content, den) = den.primitive_split();
        RatFuncK {
            num: num.scale(&(Rational::one() / content)),
            den,
        }
    }

    // `self * other` where either operand may be non-canonical in sign only;
    // cross-cancels before multiplying to keep degrees small.
    fn mul_parts(&self, other: &RatFuncK) -> RatFuncK {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        let num = &a * &c;
        let den = &b * &d;
        let (content, den) = den.primitive_split();
        RatFuncK {
            num: num.scale(&(Rational::one() / content)),
            den,
        }
    }
}

fn cancel(n: &PolyK, d: &PolyK) -> (PolyK, PolyK) {
    if n.is_constant() || d.is_constant() {
        return (n.clone(), d.clone());
    }
    let g = n.gcd(d);
    if g.is_constant() {
        (n.clone(), d.clone())
    } else {
        (n.exact_div(&g), d.exact_div(&g))
    }
}

impl fmt::Display for RatFuncK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &PolyK| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFuncK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFuncK({self})")
    }
}

impl<'a> Add<&'a RatFuncK> for &'a RatFuncK {
    type Output = RatFuncK;
    fn add(self, rhs: &RatFuncK) -> RatFuncK {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFuncK::canonical(&self.num + &rhs.num, self.den.clone());
        }
        RatFuncK::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RatFuncK> for &'a RatFuncK {
    type Output = RatFuncK;
    fn sub(self, rhs: &RatFuncK) -> RatFuncK {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFuncK> for &'a RatFuncK {
    type Output = RatFuncK;
    fn mul(self, rhs: &RatFuncK) -> RatFuncK {
        self.mul_parts(rhs)
    }
}

impl Neg for &RatFuncK {
    type Output = RatFuncK;
    fn neg(self) -> RatFuncK {
        RatFuncK {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl From<PolyK> for RatFuncK {
    fn from(p: PolyK) -> Self {
        RatFuncK::from_poly(p)
    }
}

impl From<Rational> for RatFuncK {
    fn from(c: Rational) -> Self {
        RatFuncK::constant(c)
    }
}

impl super::OrderedField for RatFuncK {
    fn zero() -> Self {
        RatFuncK::zero()
    }
    fn one() -> Self {
        RatFuncK::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn sign(&self) -> Sign {
        self.sign_at_infinity()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self.checked_div(other).expect("division by the zero function")
    }
    fn neg(&self) -> Self {
        -self
    }
    fn stability_bound(&self) -> Option<Rational> {
        self.root_bound()
    }
}
