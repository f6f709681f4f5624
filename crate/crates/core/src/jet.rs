//! Truncated Taylor arithmetic to third order.
//!
//! A `Jet` carries `f(x0 + h) = c0 + c1 h + c2 h^2 + c3 h^3 + O(h^4)`. The
//! analytic curve families are written once against this type and yield
//! exact derivatives up to `c'''`; the germ builder uses the same arithmetic
//! to differentiate products like `k sin(theta)` along the curve.

use std::ops::{Add, Div, Mul, Neg, Sub};

const ORDER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; ORDER + 1],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Self {
            c: [v, 0.0, 0.0, 0.0],
        }
    }

    /// Independent variable at `x`.
    pub fn variable(x: f64) -> Self {
        Self {
            c: [x, 1.0, 0.0, 0.0],
        }
    }

    /// Builds a jet from derivative values `[f, f', f'', f''']`.
    pub fn from_derivatives(d: [f64; ORDER + 1]) -> Self {
        Self {
            c: [d[0], d[1], d[2] / 2.0, d[3] / 6.0],
        }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `n`-th derivative, `n <= 3`.
    pub fn derivative(&self, n: usize) -> f64 {
        const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];
        self.c[n] * FACT[n]
    }

    pub fn derivatives(&self) -> [f64; ORDER + 1] {
        [0, 1, 2, 3].map(|n| self.derivative(n))
    }

    /// Jet of `f'`; the top coefficient is unknown and set to zero.
    pub fn differentiate(&self) -> Self {
        Self {
            c: [self.c[1], 2.0 * self.c[2], 3.0 * self.c[3], 0.0],
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            c: self.c.map(|x| x * k),
        }
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = [0.0; ORDER + 1];
        let mut c = [0.0; ORDER + 1];
        (s[0], c[0]) = self.c[0].sin_cos();
        for k in 1..=ORDER {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let ju = j as f64 * self.c[j];
                ds += ju * c[k - j];
                dc -= ju * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (Self { c: s }, Self { c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn sqrt(&self) -> Self {
        let mut r = [0.0; ORDER + 1];
        r[0] = self.c[0].sqrt();
        for k in 1..=ORDER {
            let cross: f64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (self.c[k] - cross) / (2.0 * r[0]);
        }
        Self { c: r }
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Jet::constant(1.0), |acc, _| acc * *self)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; ORDER + 1];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = (0..=k).map(|j| self.c[j] * rhs.c[k - j]).sum();
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let mut q = [0.0; ORDER + 1];
        for k in 0..=ORDER {
            let cross: f64 = (0..k).map(|j| q[j] * rhs.c[k - j]).sum();
            q[k] = (self.c[k] - cross) / rhs.c[0];
        }
        Jet { c: q }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        self + Jet::constant(rhs)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self - Jet::constant(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}
