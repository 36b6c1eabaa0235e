//! Non-triviality certificate for a finite set of scalars.
//!
//! For scalars `x_1 … x_N` the weighted sum `Σ x_i / (K + i)` vanishes for
//! every `K` past a computable bound `γ` exactly when all `x_i` are zero. The
//! numerator of that sum is `Σ_i B_i K^i` with
//! `B_i = Σ_j x_j · e_{N-i-1}({1..N} \ {j})`, where `e_m` is the elementary
//! symmetric sum. The coefficient matrix of the `B_i` (the Ω matrix) is
//! nonsingular, which is what forces triviality; [`reduce_omega_chain`]
//! reproduces the column-differencing argument for that and
//! [`omega_determinant`] checks it independently.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ratfield::{PolyK, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("a scalar set needs at least one value")]
    EmptySet,
    #[error("elementary symmetric sum e_{m} undefined on a set of {size} elements")]
    CombDomain { m: usize, size: usize },
    #[error("Ω matrices need N ≥ 2, got {0}")]
    OmegaTooSmall(usize),
    #[error("root bound needs a polynomial of degree ≥ 1, got degree {0}")]
    ConstantPolynomial(isize),
    #[error("expansion and closed-form numerators disagree: {expanded} vs {closed_form}")]
    ConstructionMismatch { expanded: Box<PolyK>, closed_form: Box<PolyK> },
    #[error("Ω_{level} has non-uniform first row")]
    NonUniformFirstRow { level: usize },
    #[error("Ω_{level} entry ({row}, {col}) is {found}, closed form gives {expected}")]
    ChainMismatch {
        level: usize,
        row: usize,
        col: usize,
        expected: Box<Rational>,
        found: Box<Rational>,
    },
    #[error("Ω_{level} has dimension {found}, expected {expected}")]
    ChainShape {
        level: usize,
        expected: usize,
        found: usize,
    },
}

/// The scalars `x_1 … x_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarSet {
    values: Vec<Rational>,
}

impl ScalarSet {
    pub fn new(values: Vec<Rational>) -> Result<Self, CertificateError> {
        if values.is_empty() {
            return Err(CertificateError::EmptySet);
        }
        Ok(ScalarSet { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, CertificateError> {
        Self::new(values.iter().map(|&v| crate::ratfield::rat(v)).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn all_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

/// Numerator and denominator of `Σ x_i / (K + i)` together with the
/// coefficients `B_0 … B_{N-1}` of the numerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificatePoly {
    pub numerator: PolyK,
    pub denominator: PolyK,
    pub b_coeffs: Vec<Rational>,
}

/// One matrix of the Ω family. `level` is 1-based; `Ω_level` of an `N`-scalar
/// certificate has dimension `N - level + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaMatrix {
    entries: Vec<Vec<Rational>>,
    n: usize,
    level: usize,
}

impl OmegaMatrix {
    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }
}

impl fmt::Display for OmegaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join("  "))?;
        }
        Ok(())
    }
}

/// Every matrix produced while reducing `Ω_1`, ending with the `1×1` matrix
/// whose entry is `terminal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaChain {
    pub levels: Vec<OmegaMatrix>,
    pub terminal: Rational,
}

/// All elementary symmetric sums `e_0 … e_{|s|}` of `s`.
fn elementary_symmetric_all(s: &[u64]) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); s.len() + 1];
    e[0] = BigInt::one();
    for (count, &x) in s.iter().enumerate() {
        for m in (1..=count + 1).rev() {
            let add = &e[m - 1] * x;
            e[m] += add;
        }
    }
    e
}

/// `e_m(s)`: the sum over all `m`-element subsets of `s` of their product.
pub fn elementary_symmetric(s: &[u64], m: usize) -> Result<Rational, CertificateError> {
    if m > s.len() {
        return Err(CertificateError::CombDomain { m, size: s.len() });
    }
    Ok(Rational::from_integer(
        elementary_symmetric_all(s).swap_remove(m),
    ))
}

fn complement(n: usize, exclude: impl Fn(u64) -> bool) -> Vec<u64> {
    (1..=n as u64).filter(|&v| !exclude(v)).collect()
}

/// `B_i` as a linear form in the scalars: `weights[i][j]` is the
/// coefficient of `x_{j+1}` in `B_i`.
pub fn b_coefficient_weights(n: usize) -> Vec<Vec<Rational>> {
    let per_column: Vec<Vec<BigInt>> = (1..=n as u64)
        .map(|j| elementary_symmetric_all(&complement(n, |v| v == j)))
        .collect();
    (0..n)
        .map(|i| {
            per_column
                .iter()
                .map(|e| Rational::from_integer(e[n - i - 1].clone()))
                .collect()
        })
        .collect()
}

/// `Π_{i=1..n} (K + i)`.
pub fn certificate_denominator(n: usize) -> PolyK {
    (1..=n as i64).map(PolyK::k_plus).product()
}

fn expanded_numerator(x: &ScalarSet) -> PolyK {
    let n = x.n() as i64;
    x.values
        .iter()
        .zip(1..=n)
        .map(|(xi, i)| {
            (1..=n)
                .filter(|&j| j != i)
                .map(PolyK::k_plus)
                .product::<PolyK>()
                .scale(xi)
        })
        .sum()
}

/// Builds the certificate numerator twice, by direct expansion of
/// `Σ x_i Π_{j≠i}(K+j)` and from the closed-form `B_i`, and insists they agree.
pub fn build_certificate(x: &ScalarSet) -> Result<CertificatePoly, CertificateError> {
    let weights = b_coefficient_weights(x.n());
    let b_coeffs: Vec<Rational> = weights
        .iter()
        .map(|row| row.iter().zip(&x.values).map(|(w, v)| w * v).sum())
        .collect();
    let closed_form = PolyK::new(b_coeffs.clone());
    let expanded = expanded_numerator(x);
    if expanded != closed_form {
        return Err(CertificateError::ConstructionMismatch {
            expanded: Box::new(expanded),
            closed_form: Box::new(closed_form),
        });
    }
    Ok(CertificatePoly {
        numerator: closed_form,
        denominator: certificate_denominator(x.n()),
        b_coeffs,
    })
}

/// `Ω_1`: first row all ones, row `r`, column `j` holds
/// `e_r({1..n} \ {j+1})`. Its rows are the linear forms `B_{n-1}, …, B_0`.
pub fn build_omega(n: usize) -> Result<OmegaMatrix, CertificateError> {
    if n < 2 {
        return Err(CertificateError::OmegaTooSmall(n));
    }
    Ok(OmegaMatrix {
        entries: closed_form_omega(n, 1),
        n,
        level: 1,
    })
}

/// Closed-form entries of `Ω_level`. For `level ≥ 2` column `i` (0-based) is
/// `(level-1) · e_r` over the complement of the window
/// `{i+1, …, i+level}` of consecutive integers.
fn closed_form_omega(n: usize, level: usize) -> Vec<Vec<Rational>> {
    let dim = n - level + 1;
    let columns: Vec<Vec<BigInt>> = (0..dim as u64)
        .map(|i| {
            let lo = i + 1;
            let hi = i + level as u64;
            elementary_symmetric_all(&complement(n, |v| (lo..=hi).contains(&v)))
        })
        .collect();
    let scale = BigInt::from(level.saturating_sub(1).max(1));
    (0..dim)
        .map(|r| {
            columns
                .iter()
                .map(|e| Rational::from_integer(&scale * &e[r]))
                .collect()
        })
        .collect()
}

fn check_closed_form(m: &OmegaMatrix) -> Result<(), CertificateError> {
    let expected = closed_form_omega(m.n, m.level);
    if m.dim() != expected.len() {
        return Err(CertificateError::ChainShape {
            level: m.level,
            expected: expected.len(),
            found: m.dim(),
        });
    }
    for (r, (got_row, want_row)) in m.entries.iter().zip(&expected).enumerate() {
        for (c, (got, want)) in got_row.iter().zip(want_row).enumerate() {
            if got != want {
                return Err(CertificateError::ChainMismatch {
                    level: m.level,
                    row: r,
                    col: c,
                    expected: Box::new(want.clone()),
                    found: Box::new(got.clone()),
                });
            }
        }
    }
    Ok(())
}

/// One reduction step: divide by the common first-row value, replace each
/// column by its difference with the next, drop the first row (now zero) and
/// the last column.
fn reduce_once(m: &OmegaMatrix) -> Result<OmegaMatrix, CertificateError> {
    let lead = m.entries[0][0].clone();
    if lead.is_zero() || m.entries[0].iter().any(|v| *v != lead) {
        return Err(CertificateError::NonUniformFirstRow { level: m.level });
    }
    let d = m.dim();
    let entries: Vec<Vec<Rational>> = m.entries[1..]
        .iter()
        .map(|row| {
            (0..d - 1)
                .map(|i| (&row[i] - &row[i + 1]) / &lead)
                .collect()
        })
        .collect();
    Ok(OmegaMatrix {
        entries,
        n: m.n,
        level: m.level + 1,
    })
}

/// Runs the full reduction `Ω_1 → Ω_2 → … → 1×1`, checking every
/// intermediate matrix against its closed form.
pub fn omega_chain(omega1: &OmegaMatrix) -> Result<OmegaChain, CertificateError> {
    let mut current = omega1.clone();
    check_closed_form(&current)?;
    let mut levels = vec![current.clone()];
    while current.dim() > 1 {
        current = reduce_once(&current)?;
        check_closed_form(&current)?;
        levels.push(current.clone());
    }
    let terminal = current.entries[0][0].clone();
    Ok(OmegaChain { levels, terminal })
}

/// The single entry left after reducing `Ω_1` down to `1×1`; equals `N - 1`.
pub fn reduce_omega_chain(omega1: &OmegaMatrix) -> Result<Rational, CertificateError> {
    omega_chain(omega1).map(|c| c.terminal)
}

/// Exact determinant by fraction-free (Bareiss) elimination. Rows are
/// first cleared of denominators so the elimination runs over the integers.
pub fn omega_determinant(m: &OmegaMatrix) -> Rational {
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = m
        .entries
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    Rational::new(bareiss_det(&mut a), scale)
}

fn bareiss_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn omega_det_nonzero(omega1: &OmegaMatrix) -> bool {
    !omega_determinant(omega1).is_zero()
}

/// Upper bound on the real roots of `p`: the Cauchy bound
/// `1 + max_{i<deg} |c_i| / |c_deg|`.
pub fn root_upper_bound(p: &PolyK) -> Result<Rational, CertificateError> {
    p.cauchy_bound()
        .ok_or(CertificateError::ConstantPolynomial(p.degree()))
}

/// `γ` such that for every `K > γ` the certificate numerator vanishes only if
/// it is identically zero. Constant numerators get `γ = 1`.
pub fn certificate_gamma(x: &ScalarSet) -> Result<Rational, CertificateError> {
    let cert = build_certificate(x)?;
    if cert.numerator.degree() < 1 {
        return Ok(Rational::one());
    }
    root_upper_bound(&cert.numerator)
}

/// `Σ x_i / (k0 + i)` evaluated exactly. `k0` must avoid `-1 … -N`.
pub fn certificate_value(x: &ScalarSet, k0: &Rational) -> Rational {
    x.values
        .iter()
        .zip(1i64..)
        .map(|(xi, i)| xi / (k0 + crate::ratfield::rat(i)))
        .sum()
}

/// Triviality read off the certificate at a chosen `k0`.
pub fn is_trivial_at(x: &ScalarSet, k0: &Rational) -> bool {
    certificate_value(x, k0).is_zero()
}

/// Decides whether every scalar is zero by evaluating the certificate at
/// `γ + 1`. A single scalar is decided directly.
pub fn is_trivial_via_certificate(x: &ScalarSet) -> Result<bool, CertificateError> {
    if x.n() == 1 {
        return Ok(x.values[0].is_zero());
    }
    let k0 = certificate_gamma(x)? + Rational::one();
    Ok(is_trivial_at(x, &k0))
}

/// Sign pattern of the numerator at three points past `γ`; used to spot-check
/// that `γ` really bounds the real roots.
pub fn numerator_sign_constant_past(p: &PolyK, gamma: &Rational) -> bool {
    let two = crate::ratfield::rat(2);
    let samples = [
        gamma + Rational::one(),
        gamma + &two,
        gamma * &two + crate::ratfield::rat(10),
    ];
    let signs: Vec<bool> = samples.iter().map(|k| p.eval(k).is_positive()).collect();
    let nonzero = samples.iter().all(|k| !p.eval(k).is_zero());
    nonzero && signs.windows(2).all(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfield::{rat, ratio};

    #[test]
    fn comb_values_from_the_five_scalar_example() {
        assert_eq!(elementary_symmetric(&[2, 3, 4, 5], 1).unwrap(), rat(14));
        assert_eq!(elementary_symmetric(&[2, 3, 4, 5], 4).unwrap(), rat(120));
        assert_eq!(elementary_symmetric(&[2, 3, 4, 5], 0).unwrap(), rat(1));
        assert_eq!(elementary_symmetric(&[], 0).unwrap(), rat(1));
        assert_eq!(
            elementary_symmetric(&[1, 2], 3),
            Err(CertificateError::CombDomain { m: 3, size: 2 })
        );
    }

    #[test]
    fn two_scalar_numerator_is_constant_one() {
        let x = ScalarSet::from_ints(&[1, -1]).unwrap();
        let cert = build_certificate(&x).unwrap();
        assert_eq!(cert.numerator, PolyK::one());
        assert_eq!(cert.denominator, PolyK::from_ints(&[2, 3, 1]));
        assert_eq!(certificate_gamma(&x).unwrap(), rat(1));
        assert!(!is_trivial_via_certificate(&x).unwrap());
    }

    #[test]
    fn zero_scalars_give_zero_numerator() {
        let x = ScalarSet::from_ints(&[0, 0, 0]).unwrap();
        assert!(build_certificate(&x).unwrap().numerator.is_zero());
        assert_eq!(certificate_gamma(&x).unwrap(), rat(1));
        assert!(is_trivial_via_certificate(&x).unwrap());
    }

    #[test]
    fn small_omegas() {
        let o2 = build_omega(2).unwrap();
        assert_eq!(o2.entries, vec![vec![rat(1), rat(1)], vec![rat(2), rat(1)]]);
        let o3 = build_omega(3).unwrap();
        let want: Vec<Vec<Rational>> = [[1, 1, 1], [5, 4, 3], [6, 3, 2]]
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        assert_eq!(o3.entries, want);
        assert_eq!(build_omega(1), Err(CertificateError::OmegaTooSmall(1)));
    }

    #[test]
    fn chain_terminals() {
        assert_eq!(reduce_omega_chain(&build_omega(2).unwrap()).unwrap(), rat(1));
        assert_eq!(reduce_omega_chain(&build_omega(5).unwrap()).unwrap(), rat(4));
        assert_eq!(reduce_omega_chain(&build_omega(8).unwrap()).unwrap(), rat(7));
    }

    #[test]
    fn chain_rejects_a_tampered_matrix() {
        let mut o = build_omega(4).unwrap();
        o.entries[2][1] += rat(1);
        assert!(matches!(
            omega_chain(&o),
            Err(CertificateError::ChainMismatch { level: 1, .. })
        ));
    }

    #[test]
    fn determinant_of_two_by_two() {
        assert_eq!(omega_determinant(&build_omega(2).unwrap()), rat(-1));
        assert!(omega_det_nonzero(&build_omega(5).unwrap()));
    }

    #[test]
    fn determinant_handles_zero_pivot_and_singular() {
        let m = OmegaMatrix {
            entries: vec![vec![rat(0), rat(2)], vec![rat(3), ratio(1, 2)]],
            n: 2,
            level: 1,
        };
        assert_eq!(omega_determinant(&m), rat(-6));
        let s = OmegaMatrix {
            entries: vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]],
            n: 2,
            level: 1,
        };
        assert!(!omega_det_nonzero(&s));
    }

    #[test]
    fn root_bounds() {
        assert_eq!(root_upper_bound(&PolyK::from_ints(&[-5, 1])).unwrap(), rat(6));
        assert_eq!(root_upper_bound(&PolyK::from_ints(&[1, 0, 1])).unwrap(), rat(2));
        assert_eq!(root_upper_bound(&PolyK::from_ints(&[2, -3, 1])).unwrap(), rat(4));
        assert_eq!(
            root_upper_bound(&PolyK::from_ints(&[3])),
            Err(CertificateError::ConstantPolynomial(0))
        );
        assert!(root_upper_bound(&PolyK::zero()).is_err());
    }

    #[test]
    fn gamma_for_quadratic_numerator() {
        // (K+2)(K+3) - 3(K+1)(K+3) + (K+1)(K+2) = -K^2 - 4K - 1
        let x = ScalarSet::from_ints(&[1, -3, 1]).unwrap();
        let cert = build_certificate(&x).unwrap();
        assert_eq!(cert.numerator, PolyK::from_ints(&[-1, -4, -1]));
        let gamma = certificate_gamma(&x).unwrap();
        assert_eq!(gamma, rat(5));
        assert!(!cert.numerator.eval(&(gamma + rat(1))).is_zero());
    }

    #[test]
    fn fractional_scalars_are_not_trivial() {
        let x = ScalarSet::new(vec![ratio(7, 3), rat(0), ratio(-7, 3)]).unwrap();
        assert!(!is_trivial_via_certificate(&x).unwrap());
        let single = ScalarSet::from_ints(&[0]).unwrap();
        assert!(is_trivial_via_certificate(&single).unwrap());
    }

    #[test]
    fn empty_set_rejected() {
        assert_eq!(ScalarSet::new(vec![]), Err(CertificateError::EmptySet));
    }
}
