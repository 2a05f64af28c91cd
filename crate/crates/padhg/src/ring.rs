//! The coefficient-ring abstraction used by series and matrices.

use std::fmt::Debug;

use crate::error::Result;
use crate::padic::PAdic;

/// A commutative ring of p-adic coefficients with precision tracking.
///
/// Constructors take `&self` as a template so that rings carrying runtime
/// parameters (the prime, the cyclotomic modulus) need no global context.
pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn from_padic_like(&self, x: &PAdic) -> Self;
    fn add_s(&self, other: &Self) -> Self;
    fn sub_s(&self, other: &Self) -> Self;
    fn mul_s(&self, other: &Self) -> Self;
    fn neg_s(&self) -> Self;
    fn inverse_s(&self) -> Result<Self>;
    /// Whether no nonzero digit is certified.
    fn is_zero_s(&self) -> bool;
    /// Smallest valuation among the p-adic components (`None` when every
    /// component is the exact zero).
    fn min_valuation(&self) -> Option<i64>;
    /// Smallest absolute precision among the p-adic components (`None` when
    /// the value is exact).
    fn min_abs_precision(&self) -> Option<i64>;
    fn prime(&self) -> u64;
}

impl Scalar for PAdic {
    fn zero_like(&self) -> Self {
        PAdic::zero(self.prime())
    }
    fn one_like(&self) -> Self {
        PAdic::from_int(self.prime(), 1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        PAdic::from_int(self.prime(), n)
    }
    fn from_padic_like(&self, x: &PAdic) -> Self {
        *x
    }
    fn add_s(&self, other: &Self) -> Self {
        self.add_p(other)
    }
    fn sub_s(&self, other: &Self) -> Self {
        self.sub_p(other)
    }
    fn mul_s(&self, other: &Self) -> Self {
        self.mul_p(other)
    }
    fn neg_s(&self) -> Self {
        self.neg_p()
    }
    fn inverse_s(&self) -> Result<Self> {
        self.inverse()
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn min_valuation(&self) -> Option<i64> {
        self.valuation()
    }
    fn min_abs_precision(&self) -> Option<i64> {
        self.abs_precision()
    }
    fn prime(&self) -> u64 {
        PAdic::prime(self)
    }
}

/// Minimum of two optional bounds where `None` means "unbounded".
pub fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}
