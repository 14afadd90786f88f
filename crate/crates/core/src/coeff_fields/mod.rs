//! Exact arithmetic in F_q, in the perfect field F_p(λ^{1/p^∞}), and exact
//! linear algebra over both.

pub mod field;
pub mod lambda;
pub mod linalg;
pub mod poly;

pub use field::{Field, FieldDesc, FqElement};
pub use lambda::{Exp, LambdaElement, LambdaRational};
pub use linalg::{nullspace_fq, solve_homogeneous, FqMat};
pub use poly::{Poly, RatFn};

/// Frobenius x ↦ x^{p^k} on either supported coefficient field.
pub trait Frobenius {
    fn frobenius(&self, k: i64) -> Self;
}

impl Frobenius for FqElement {
    fn frobenius(&self, k: i64) -> Self {
        FqElement::frobenius(self, k)
    }
}

impl Frobenius for LambdaElement {
    fn frobenius(&self, k: i64) -> Self {
        LambdaElement::frobenius(self, k)
    }
}

pub fn frobenius<T: Frobenius>(x: &T, k: i64) -> T {
    x.frobenius(k)
}
