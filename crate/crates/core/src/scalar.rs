//! Scalar traits shared by the exact and modular code paths.
//!
//! Matrix arithmetic, the Gram recurrence and the completion engine are
//! written against these traits so the same code runs over the Laurent
//! ring (exact answers) and over prime fields (fast evaluation).

use std::fmt::Debug;

use num_traits::{One, Zero};

/// A commutative ring with identity.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + Zero + One {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }

    fn sub_assign_ref(&mut self, other: &Self) {
        *self = self.sub_ref(other);
    }

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        self.add_assign_ref(&a.mul_ref(b));
    }

    fn from_i64(v: i64) -> Self;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

/// A ring in which every non-zero element is invertible.
pub trait Field: Ring + Copy {
    fn inv(&self) -> Option<Self>;
}

macro_rules! impl_ring_for_float {
    ($t:ty) => {
        impl Ring for $t {
            fn add_ref(&self, o: &Self) -> Self {
                self + o
            }
            fn sub_ref(&self, o: &Self) -> Self {
                self - o
            }
            fn mul_ref(&self, o: &Self) -> Self {
                self * o
            }
            fn neg_ref(&self) -> Self {
                -self
            }
            fn from_i64(v: i64) -> Self {
                v as $t
            }
        }

        impl Field for $t {
            fn inv(&self) -> Option<Self> {
                if *self == 0.0 {
                    None
                } else {
                    Some(1.0 / self)
                }
            }
        }
    };
}

impl_ring_for_float!(f32);
impl_ring_for_float!(f64);

/// Machine integers, for small exact data such as specialised tables.
impl Ring for i64 {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        v
    }
}
