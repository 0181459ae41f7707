use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Float;

/// Default bits of mantissa carried by [`Mp`].
pub const MP_PRECISION: u32 = 256;

thread_local! {
    static PRECISION: Cell<u32> = const { Cell::new(MP_PRECISION) };
}

/// Precision of [`Mp`] values created on this thread.
pub fn mp_precision() -> u32 {
    PRECISION.with(Cell::get)
}

/// Runs `f` with [`Mp`] values created at `bits` of precision on the current thread.
///
/// Arithmetic keeps the precision of its left operand, so values built outside the
/// scope keep theirs.
pub fn with_mp_precision<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    struct Restore(u32);
    impl Drop for Restore {
        fn drop(&mut self) {
            PRECISION.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(PRECISION.with(|c| c.replace(bits.max(64))));
    f()
}

/// Scalar field the solvers are generic over.
///
/// Implemented for `f64` and for [`Mp`]. Mixed arithmetic with `f64` keeps the
/// formulas readable without a conversion at every literal.
pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;
    /// Spacing of representable values just above 1.
    fn epsilon() -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn is_sign_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
}

/// MPFR float, by default at [`MP_PRECISION`] bits.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Mp(Float);

impl Mp {
    pub fn new(v: f64) -> Self {
        Mp(Float::with_val(mp_precision(), v))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }
}

impl fmt::Display for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<f64> for Mp {
    fn from(v: f64) -> Self {
        Mp::new(v)
    }
}

macro_rules! mp_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Mp {
            type Output = Mp;
            fn $method(self, rhs: Mp) -> Mp {
                Mp($tr::$method(self.0, rhs.0))
            }
        }

        impl $tr<f64> for Mp {
            type Output = Mp;
            fn $method(self, rhs: f64) -> Mp {
                Mp($tr::$method(self.0, rhs))
            }
        }
    };
}

mp_binop!(Add, add);
mp_binop!(Sub, sub);
mp_binop!(Mul, mul);
mp_binop!(Div, div);

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Real for Mp {
    fn from_f64(v: f64) -> Self {
        Mp::new(v)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn sqrt(&self) -> Self {
        Mp(self.0.clone().sqrt())
    }
    fn powi(&self, n: i32) -> Self {
        Mp(self.0.clone().pow(n))
    }
    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn epsilon() -> Self {
        let bits = mp_precision();
        Mp(Float::with_val(bits, Float::i_exp(1, 1 - bits as i32)))
    }
}
