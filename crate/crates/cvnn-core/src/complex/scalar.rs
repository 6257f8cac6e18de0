use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

/// A complex number `re + im*i` as two `f64` components.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ComplexScalar {
    pub re: f64,
    pub im: f64,
}

/// Polar form `radius * e^(i * angle)` with the angle kept in `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polar {
    pub radius: f64,
    pub angle: f64,
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU); // [0, 2*pi)
    if w > PI {
        w - TAU
    } else {
        w
    }
}

impl ComplexScalar {
    pub const ZERO: ComplexScalar = ComplexScalar { re: 0.0, im: 0.0 };
    pub const ONE: ComplexScalar = ComplexScalar { re: 1.0, im: 0.0 };
    pub const I: ComplexScalar = ComplexScalar { re: 0.0, im: 1.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn conj(self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    /// `|z| = sqrt(re^2 + im^2)`.
    pub fn magnitude(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `|z|^2 = re^2 + im^2`.
    pub fn intensity(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// Magnitude/phase form. The phase of `0` is `0` by convention, otherwise
    /// it is `atan2(im, re)` in `(-pi, pi]`.
    pub fn to_polar(self) -> Polar {
        let radius = self.magnitude();
        let angle = if radius == 0.0 {
            0.0
        } else {
            self.im.atan2(self.re)
        };
        Polar { radius, angle }
    }

    pub fn from_polar(p: Polar) -> Self {
        Self {
            re: p.radius * p.angle.cos(),
            im: p.radius * p.angle.sin(),
        }
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(self, factor: f64) -> Self {
        Self {
            re: self.re * factor,
            im: self.im * factor,
        }
    }
}

impl Add for ComplexScalar {
    type Output = ComplexScalar;

    /// `(a+ib) + (c+id) = (a+c) + i(b+d)`
    fn add(self, rhs: ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ComplexScalar {
    fn sub(self, rhs: ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }

    type Output = ComplexScalar;
}

impl Mul for ComplexScalar {
    type Output = ComplexScalar;

    /// `(a+ib)(c+id) = (ac - bd) + i(ad + bc)`
    fn mul(self, rhs: ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Neg for ComplexScalar {
    type Output = ComplexScalar;

    fn neg(self) -> ComplexScalar {
        ComplexScalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for Polar {
    type Output = Polar;

    /// `(r1 e^(i p1)) (r2 e^(i p2)) = r1 r2 e^(i (p1 + p2))`, phase wrapped
    /// back into `(-pi, pi]`.
    fn mul(self, rhs: Polar) -> Polar {
        Polar {
            radius: self.radius * rhs.radius,
            angle: wrap_phase(self.angle + rhs.angle),
        }
    }
}

impl std::fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}
