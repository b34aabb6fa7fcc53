//! Float helpers that are not available in `core`.

pub const TWO_PI: f64 = core::f64::consts::TAU;
pub const PI: f64 = core::f64::consts::PI;

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// `sign` with the convention `sign(0) = +1`.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = libm::fmod(x, TWO_PI);
    if y < 0.0 {
        y += TWO_PI;
    }
    if y >= TWO_PI {
        y = 0.0;
    }
    y
}
