//! Truncated power series with exact rational coefficients, and the
//! generating-function identities satisfied by
//! `f(X) = Σ_{n>=1} B_n / (2n-1)! X^n` and
//! `u(X) = Σ_{n>=0} P_n / (4^n (2n)!) X^n`.
//!
//! A series of order `N` knows its coefficients of degree `0..=N`; binary
//! operations on series of different orders produce the smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::factorial;
use crate::chocolate::{chocolate2_prefix, ChocolateError, ChocolateTable};

pub type Rational = BigRational;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    ZeroConstantTerm,
    #[error("cannot divide by X: constant term is {0}")]
    NonzeroConstantTerm(Rational),
    #[error("operation needs order >= {need}, series has order {got}")]
    OrderTooSmall { need: usize, got: usize },
    #[error(transparent)]
    Chocolate(#[from] ChocolateError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    /// `coeffs[k]` is the coefficient of `X^k`; length is order + 1.
    coeffs: Vec<Rational>,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl RationalSeries {
    /// Series of the given order; missing coefficients are zero and extra
    /// ones are dropped.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Rational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Degree of the first nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Same series known only through `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Formal derivative; the order drops by one.
    pub fn differentiate(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::OrderTooSmall { need: 1, got: 0 });
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        })
    }

    /// Multiplication by `X`; the order rises by one.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Division by `X`, which needs a zero constant term; order drops by one.
    pub fn div_x(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm(self.coeffs[0].clone()));
        }
        if self.order() == 0 {
            return Err(SeriesError::OrderTooSmall { need: 1, got: 0 });
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `self / divisor`, requiring a nonzero constant term in `divisor`.
    pub fn divide(&self, divisor: &Self) -> Result<Self, SeriesError> {
        let b0 = &divisor.coeffs[0];
        if b0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let order = self.order().min(divisor.order());
        let mut q: Vec<Rational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc -= &divisor.coeffs[j] * &q[k - j];
            }
            q.push(acc / b0);
        }
        Ok(Self { coeffs: q })
    }
}

impl fmt::Display for RationalSeries {
    /// One `degree numerator/denominator` line per coefficient.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(f, "{k} {}/{}", c.numer(), c.denom())?;
        }
        Ok(())
    }
}

impl Add for &RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: Self) -> RationalSeries {
        let order = self.order().min(rhs.order());
        RationalSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: Self) -> RationalSeries {
        let order = self.order().min(rhs.order());
        RationalSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for &RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: Self) -> RationalSeries {
        let order = self.order().min(rhs.order());
        RationalSeries {
            coeffs: (0..=order)
                .map(|k| {
                    (0..=k).fold(Rational::zero(), |acc, j| acc + &self.coeffs[j] * &rhs.coeffs[k - j])
                })
                .collect(),
        }
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        RationalSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

fn need_order(got: usize, need: usize) -> Result<(), SeriesError> {
    if got < need {
        Err(SeriesError::OrderTooSmall { need, got })
    } else {
        Ok(())
    }
}

/// `f` from supplied `B_1..=B_N` (`b[0]` is `B_1`); order `b.len()`.
pub fn f_series_from(b: &[BigUint]) -> RationalSeries {
    let mut coeffs = vec![Rational::zero()];
    for (idx, bn) in b.iter().enumerate() {
        let n = idx as u64 + 1;
        coeffs.push(Rational::new(BigInt::from(bn.clone()), BigInt::from(factorial(2 * n - 1))));
    }
    let order = b.len();
    RationalSeries::new(coeffs, order)
}

/// `f(X) = Σ B_n/(2n-1)! X^n` through order `n`.
pub fn f_series(n: usize, table: &mut ChocolateTable) -> Result<RationalSeries, SeriesError> {
    need_order(n, 1)?;
    let b = chocolate2_prefix(n as u32, table)?;
    Ok(f_series_from(&b))
}

/// `f' - [1/(2(1-X)) + f/(2X) + f^2/(2X)]`, of order one less than `f`.
pub fn riccati_residual_of(f: &RationalSeries) -> Result<RationalSeries, SeriesError> {
    need_order(f.order(), 1)?;
    let lhs = f.differentiate()?;
    let order = lhs.order();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let geometric = RationalSeries::new(vec![half.clone(); order + 1], order);
    let f_over_x = f.div_x()?;
    let f2_over_x = (f * f).div_x()?;
    let rhs = &geometric + &(&f_over_x + &f2_over_x).scalar_mul(&half);
    Ok(&lhs - &rhs)
}

/// Riccati residual for the exact `f` of order `n`; zero through `n - 1`.
pub fn riccati_residual(n: usize, table: &mut ChocolateTable) -> Result<RationalSeries, SeriesError> {
    need_order(n, 3)?;
    riccati_residual_of(&f_series(n, table)?)
}

/// `P_0..=P_n` with `P_0 = 1` and `P_n = Π_{i=1}^{n} ((4i-5)^2 - 5)`.
pub fn p_numerators(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for i in 1..=n as i64 {
        let x = 4 * i - 5;
        acc *= x * x - 5;
        out.push(acc.clone());
    }
    out
}

/// `u` from supplied numerators (`p[k]` is `P_k`); order `p.len() - 1`.
pub fn u_series_from(p: &[BigInt]) -> RationalSeries {
    let coeffs: Vec<Rational> = p
        .iter()
        .enumerate()
        .map(|(n, pn)| {
            let denom = BigInt::from(4u32).pow(n as u32) * BigInt::from(factorial(2 * n as u64));
            Rational::new(pn.clone(), denom)
        })
        .collect();
    let order = coeffs.len() - 1;
    RationalSeries::new(coeffs, order)
}

/// `u(X) = Σ P_n / (4^n (2n)!) X^n` through order `n`.
pub fn u_series(n: usize) -> RationalSeries {
    u_series_from(&p_numerators(n))
}

/// `2X u' + f u`, which vanishes exactly when `f = -2X u'/u`.
pub fn log_derivative_residual(f: &RationalSeries, u: &RationalSeries) -> Result<RationalSeries, SeriesError> {
    let two = rat(2);
    let x_du = u.differentiate()?.mul_x().scalar_mul(&two);
    Ok(&x_du + &(f * u))
}

/// Checks `f = -2X (log u)'` through order `n`; returns the residual too.
pub fn verify_log_derivative(n: usize, table: &mut ChocolateTable) -> Result<(bool, RationalSeries), SeriesError> {
    need_order(n, 3)?;
    let residual = log_derivative_residual(&f_series(n, table)?, &u_series(n))?;
    Ok((residual.is_zero(), residual))
}

/// `4X(1-X) u'' + (2 - 2X) u' + u`, of order one less than `u`.
pub fn linear_ode_residual(u: &RationalSeries) -> Result<RationalSeries, SeriesError> {
    need_order(u.order(), 2)?;
    let du = u.differentiate()?;
    let d2u = du.differentiate()?;
    let order = du.order();
    let one_minus_x = RationalSeries::from_integers(&[1, -1], order);
    let second = (&one_minus_x * &d2u.mul_x()).scalar_mul(&rat(4));
    let first = (&one_minus_x * &du).scalar_mul(&rat(2));
    Ok(&(&second + &first) + &u.truncate(order))
}

/// Checks the linear ODE for the exact `u` through order `n - 1`.
pub fn verify_linear_ode(n: usize) -> Result<(bool, RationalSeries), SeriesError> {
    need_order(n, 4)?;
    let residual = linear_ode_residual(&u_series(n))?;
    Ok((residual.is_zero(), residual))
}

/// Term-ratio test for a Gauss series with `c = 1/2`, `a + b = -1/2`,
/// `ab = -1/4`: `(n+1)(n+1/2) u_{n+1} - (n^2 - n/2 - 1/4) u_n` for
/// `n = 0..order-1`. Rational throughout, though `a` and `b` are not.
pub fn hypergeometric_ratio_residual(u: &RationalSeries) -> Result<RationalSeries, SeriesError> {
    need_order(u.order(), 1)?;
    let order = u.order() - 1;
    let coeffs = (0..=order)
        .map(|n| {
            let nn = rat(n as i64);
            let left = (&nn + rat(1)) * (&nn + Rational::new(BigInt::one(), BigInt::from(2)));
            let right = &nn * &nn - &nn / rat(2) - Rational::new(BigInt::one(), BigInt::from(4));
            left * u.coeff(n + 1) - right * u.coeff(n)
        })
        .collect();
    Ok(RationalSeries::new(coeffs, order))
}

/// Lowest-terms check used by tests: numerator and denominator coprime and
/// denominator positive.
pub fn is_canonical(r: &Rational) -> bool {
    r.denom() > &BigInt::zero() && r.numer().gcd(r.denom()).is_one()
}
