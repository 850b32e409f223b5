use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Arithmetic shared by the floating-point and exact code paths.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed {
    /// Whether comparisons in this type are exact.
    const EXACT: bool;
    fn from_u64(v: u64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(v: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn from_rational(v: &BigRational) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_u64(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact value of a finite double.
pub fn rat_from_f64(v: f64) -> BigRational {
    BigRational::from_f64(v).expect("finite value")
}

/// Symmetric-matrix PSD test. Returns `(min eigenvalue, threshold, pass)`.
///
/// Floating point: passes when the smallest eigenvalue is at least
/// `-tol (1 + ‖M‖_F)`. Exact: symmetric elimination on `M + tol I`, with the
/// eigenvalue reported for information only.
pub fn psd_check<T: Scalar>(m: &[Vec<T>], tol: &T) -> (f64, f64, bool) {
    let n = m.len();
    let dense = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j].to_f64());
    let min_eig = if n == 0 { 0.0 } else { nalgebra::SymmetricEigen::new(dense.clone()).eigenvalues.min() };
    let threshold = -tol.to_f64() * (1.0 + dense.norm());
    if !T::EXACT {
        return (min_eig, threshold, min_eig >= threshold);
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = row[i].clone() + tol.clone();
    }
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_negative() {
            return (min_eig, threshold, false);
        }
        if p.is_zero() {
            if a[k][k + 1..].iter().any(|v| !v.is_zero()) {
                return (min_eig, threshold, false);
            }
            continue;
        }
        for i in k + 1..n {
            let f = a[i][k].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let d = f.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - d;
            }
        }
    }
    (min_eig, threshold, true)
}
