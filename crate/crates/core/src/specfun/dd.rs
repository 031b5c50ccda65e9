//! Minimal double-double (compensated) arithmetic.
//!
//! A value is carried as an unevaluated sum `hi + lo` of two `f64`s with
//! `|lo| <= ulp(hi) / 2`, giving roughly 32 significant decimal digits.
//! Only the operations needed to refine quartic roots past plain `f64`
//! accuracy (complex Horner evaluation plus Newton steps) are provided.
//! The error-free transformations are the classical Dekker/Knuth ones;
//! products lean on `f64::mul_add` for the exact low part.

use crate::types::ComplexValue;

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Error-free sum assuming `|a| >= |b|` (or `a == 0`).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free product: returns `(p, e)` with `p = fl(a * b)` and `a * b = p + e`.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// A double-double real number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    /// Pi to double-double accuracy (~1e-32 absolute error).
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Renormalizing constructor: folds an arbitrary `(hi, lo)` pair into
    /// canonical form.
    #[inline]
    pub fn renorm(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    /// Accurate double-double addition (two-level renormalization).
    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Dd::renorm(s1, s2 + t2)
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    pub fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        Dd::renorm(p1, p2)
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        self.mul(Dd::from_f64(x))
    }

    /// Long division with two correction terms.
    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::renorm(s, e + q3)
    }

    /// Square root of a non-negative value via one compensated Newton step
    /// on the `f64` seed.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        let x = self.hi.sqrt();
        let err = self.sub(Dd::from_f64(x).mul(Dd::from_f64(x)));
        Dd::renorm(x, err.value() / (2.0 * x))
    }
}

/// A complex number with double-double real and imaginary parts.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> Cdd {
        Cdd { re, im }
    }

    #[inline]
    pub fn from_complex(z: ComplexValue) -> Cdd {
        Cdd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    #[inline]
    pub fn to_complex(self) -> ComplexValue {
        ComplexValue::new(self.re.value(), self.im.value())
    }

    pub fn add(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re.add(rhs.re),
            im: self.im.add(rhs.im),
        }
    }

    pub fn sub(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re.sub(rhs.re),
            im: self.im.sub(rhs.im),
        }
    }

    pub fn mul(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    /// Division via the conjugate: `self * conj(rhs) / |rhs|^2`.
    pub fn div(self, rhs: Cdd) -> Cdd {
        let denom = rhs.re.mul(rhs.re).add(rhs.im.mul(rhs.im));
        let num = self.mul(Cdd {
            re: rhs.re,
            im: rhs.im.neg(),
        });
        Cdd {
            re: num.re.div(denom),
            im: num.im.div(denom),
        }
    }

    /// Modulus evaluated through `f64` (adequate for residual reporting:
    /// the relative error of the final square root is a plain `f64` ulp).
    pub fn modulus(self) -> f64 {
        let sq = self.re.mul(self.re).add(self.im.mul(self.im));
        sq.value().sqrt()
    }
}

/// Evaluates a polynomial with double-double complex coefficients
/// (highest degree first) at `z` by Horner's rule.
pub(crate) fn horner(coeffs: &[Cdd], z: Cdd) -> Cdd {
    let mut acc = Cdd::ZERO;
    for &c in coeffs {
        acc = acc.mul(z).add(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_constant_squares_consistently() {
        // (pi)^2 in double-double vs the best f64 approximation of pi^2:
        // the dd product must sit within one f64 ulp of the true value.
        let pi2 = Dd::PI.mul(Dd::PI);
        let reference = 9.869_604_401_089_358; // round(pi^2) in f64
        assert!((pi2.value() - reference).abs() <= 4.0 * f64::EPSILON * reference);
        // The low part must genuinely extend the precision.
        assert!(pi2.lo.abs() > 0.0 && pi2.lo.abs() < 1e-15 * pi2.hi.abs());
    }

    #[test]
    fn sqrt_round_trips_to_dd_accuracy() {
        for &x in &[2.0, 3.0, 0.017, 4.9e4] {
            let s = Dd::from_f64(x).sqrt();
            let back = s.mul(s).sub(Dd::from_f64(x));
            assert!(
                back.value().abs() < 1e-30 * x,
                "sqrt({x}) round-trip error {}",
                back.value()
            );
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Dd::renorm(1.0 / 3.0, 1.850_371_707_708_594_3e-17);
        let b = Dd::from_f64(7.0);
        let q = a.mul(b).div(b).sub(a);
        assert!(q.value().abs() < 1e-31);
    }

    #[test]
    fn complex_product_matches_hand_expansion() {
        let z = Cdd::from_complex(ComplexValue::new(1.5, -2.25));
        let w = Cdd::from_complex(ComplexValue::new(-0.5, 3.0));
        let p = z.mul(w).to_complex();
        // Inputs are exactly representable, so the product is exact.
        assert_eq!(p, ComplexValue::new(1.5 * -0.5 - -2.25 * 3.0, 1.5 * 3.0 + -2.25 * -0.5));
    }

    #[test]
    fn complex_division_round_trips() {
        let z = Cdd::from_complex(ComplexValue::new(0.3, -1.7));
        let w = Cdd::from_complex(ComplexValue::new(-2.1, 0.9));
        let r = z.mul(w).div(w).sub(z);
        assert!(r.modulus() < 1e-30);
    }

    #[test]
    fn horner_evaluates_known_cubic() {
        // p(z) = z^3 - 2z + 4 at z = 1 + i: (1+i)^3 = -2 + 2i, so
        // p = -2 + 2i - 2 - 2i + 4 = 0.
        let coeffs = [
            Cdd::from_complex(ComplexValue::new(1.0, 0.0)),
            Cdd::ZERO,
            Cdd::from_complex(ComplexValue::new(-2.0, 0.0)),
            Cdd::from_complex(ComplexValue::new(4.0, 0.0)),
        ];
        let v = horner(&coeffs, Cdd::from_complex(ComplexValue::new(1.0, 1.0)));
        assert!(v.modulus() < 1e-30);
    }
}
