//! Integer fast path for the exponential kernels.
//!
//! Kernels only add, subtract and compare table values, so a whole computation
//! can run over `i128` after multiplying every input by the lcm of the input
//! denominators. When the common scale or the scaled magnitudes would be too
//! large, the same generic kernel runs directly over [`Rat`].

use std::fmt::Debug;
use std::ops::{Add, Sub};

use crate::rat::Rat;

const MAX_SCALE: i128 = 1 << 40;
const MAX_SCALED: i128 = 1 << 80;

pub(crate) trait Scalar: Copy + Ord + Add<Output = Self> + Sub<Output = Self> + Debug {
    const ZERO: Self;
    fn lift(r: Rat, scale: i128) -> Self;
    fn lower(self, scale: i128) -> Rat;
}

impl Scalar for i128 {
    const ZERO: i128 = 0;

    #[inline]
    fn lift(r: Rat, scale: i128) -> i128 {
        r.numer() * (scale / r.denom())
    }

    #[inline]
    fn lower(self, scale: i128) -> Rat {
        Rat::new(self, scale)
    }
}

impl Scalar for Rat {
    const ZERO: Rat = Rat::ZERO;

    #[inline]
    fn lift(r: Rat, _scale: i128) -> Rat {
        r
    }

    #[inline]
    fn lower(self, _scale: i128) -> Rat {
        self
    }
}

/// Common denominator of `values` if every value fits comfortably in `i128` after scaling.
pub(crate) fn common_scale<'a, I>(values: I) -> Option<i128>
where
    I: IntoIterator<Item = &'a Rat>,
{
    let mut scale: i128 = 1;
    let mut max_abs: i128 = 0;
    for v in values {
        let d = v.denom();
        if scale % d != 0 {
            scale = Rat::lcm_denom(scale, d)?;
            if scale > MAX_SCALE {
                return None;
            }
        }
        max_abs = max_abs.max(v.numer().unsigned_abs().min(i128::MAX as u128) as i128 / d + 1);
    }
    max_abs.checked_mul(scale).filter(|m| *m <= MAX_SCALED).map(|_| scale)
}

pub(crate) fn lift_all<S: Scalar>(table: &[Rat], scale: i128) -> Vec<S> {
    table.iter().map(|&r| S::lift(r, scale)).collect()
}

pub(crate) fn lower_all<S: Scalar>(table: &[S], scale: i128) -> Vec<Rat> {
    table.iter().map(|&s| s.lower(scale)).collect()
}

/// Runs `$body` with `$T` bound to `i128` when the values admit a common
/// scale, otherwise to [`Rat`]; `$scale` is the scale to pass to `lift`/`lower`.
macro_rules! with_scalar {
    ($values:expr, |$scale:ident : $T:ident| $body:expr) => {{
        match $crate::exact::common_scale($values) {
            Some($scale) => {
                #[allow(dead_code)]
                type $T = i128;
                $body
            }
            None => {
                let $scale: i128 = 1;
                #[allow(dead_code)]
                type $T = $crate::rat::Rat;
                $body
            }
        }
    }};
}

pub(crate) use with_scalar;

/// Min-plus subset convolution: `out[U] = min_{P ⊆ U} left[U \ P] + right[P]`
/// over all masks of an `n`-point ground set.
pub(crate) fn min_plus_convolve<S: Scalar>(left: &[S], right: &[S]) -> Vec<S> {
    let size = left.len();
    let mut out = Vec::with_capacity(size);
    for u in 0..size {
        // P = ∅ term
        let mut best = left[u] + right[0];
        let mut p = u;
        while p != 0 {
            let cand = left[u & !p] + right[p];
            if cand < best {
                best = cand;
            }
            p = (p - 1) & u;
        }
        out.push(best);
    }
    out
}
