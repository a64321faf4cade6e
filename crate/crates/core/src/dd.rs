//! Minimal double-double arithmetic for one job: summing the Maclaurin series
//! of the Airy–Fock function, whose terms cancel by a factor up to
//! exp((4/3)|z|^{3/2}) ~ 1e11 at the series/asymptotic handover radius.
//! Plain f64 summation would lose five digits there; double-double keeps the
//! result at full f64 accuracy.
//!
//! Only the operations the series needs are provided. Algorithms are the
//! classic error-free transforms (two_sum, and two_prod via fused
//! multiply-add).

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(Dd { hi: -rhs.hi, lo: -rhs.lo })
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        // remainder computed exactly via fma
        let (p, pe) = two_prod(q1, d);
        let r = ((self.hi - p) - pe) + self.lo;
        let q2 = r / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.hi.abs()
    }
}

/// Complex double-double: the series needs add, complex multiply, and scalar
/// divide only.
#[derive(Clone, Copy, Debug, Default)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex { re: Dd::ZERO, im: Dd::ZERO };

    pub fn from_f64(re: f64, im: f64) -> DdComplex {
        DdComplex { re: Dd::from_f64(re), im: Dd::from_f64(im) }
    }

    pub fn new(re: Dd, im: Dd) -> DdComplex {
        DdComplex { re, im }
    }

    #[inline]
    pub fn add(self, rhs: DdComplex) -> DdComplex {
        DdComplex { re: self.re.add(rhs.re), im: self.im.add(rhs.im) }
    }

    #[inline]
    pub fn sub(self, rhs: DdComplex) -> DdComplex {
        DdComplex { re: self.re.sub(rhs.re), im: self.im.sub(rhs.im) }
    }

    #[inline]
    pub fn mul(self, rhs: DdComplex) -> DdComplex {
        let re = self.re.mul(rhs.re).sub(self.im.mul(rhs.im));
        let im = self.re.mul(rhs.im).add(self.im.mul(rhs.re));
        DdComplex { re, im }
    }

    #[inline]
    pub fn mul_dd(self, s: Dd) -> DdComplex {
        DdComplex { re: self.re.mul(s), im: self.im.mul(s) }
    }

    #[inline]
    pub fn div_f64(self, d: f64) -> DdComplex {
        DdComplex { re: self.re.div_f64(d), im: self.im.div_f64(d) }
    }

    /// Cheap magnitude proxy, enough for termination tests.
    #[inline]
    pub fn abs_est(self) -> f64 {
        self.re.hi.abs() + self.im.hi.abs()
    }
}
