use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Element `a + b*sqrt(d)` of a real quadratic field, or a plain rational when `b = 0`.
///
/// Canonical form: `d == 0` exactly when `b == 0`, so derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    d: u32,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_squarefree(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u32;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::zero(), d: 0 }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(n: i64) -> Self {
        Scalar { a: rat(n), b: BigRational::zero(), d: 0 }
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rational(a: BigRational) -> Self {
        Scalar { a, b: BigRational::zero(), d: 0 }
    }

    /// `a + b*sqrt(d)`; `d` must be squarefree and at least 2.
    pub fn quadratic(a: BigRational, b: BigRational, d: u32) -> Self {
        assert!(is_squarefree(d), "sqrt({d}) is not a valid extension");
        let mut s = Scalar { a, b, d };
        s.normalize();
        s
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: u32) -> Self {
        Self::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.d = 0;
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// Radicand in use, 0 for rationals.
    pub fn radicand(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    fn join(x: u32, y: u32) -> u32 {
        match (x, y) {
            (0, y) => y,
            (x, 0) => x,
            (x, y) => {
                assert_eq!(x, y, "mixed quadratic fields sqrt({x}) and sqrt({y})");
                x
            }
        }
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with d b^2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * rat(self.d as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        if self.b.is_zero() {
            return Scalar::rational(self.a.recip());
        }
        let norm = &self.a * &self.a - &self.b * &self.b * rat(self.d as i64);
        Scalar::quadratic(&self.a / &norm, -(&self.b / &norm), self.d)
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Rational bracket `lo <= self <= hi` using a rational enclosure of sqrt(d)
    /// with denominator `2^bits`. Used only to cross-check `signum`.
    pub fn bracket(&self, bits: u32) -> (BigRational, BigRational) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let scale = BigInt::one() << bits;
        let target = BigInt::from(self.d) * &scale * &scale;
        let lo_int = target.sqrt();
        let lo = BigRational::new(lo_int.clone(), scale.clone());
        let hi = BigRational::new(lo_int + 1, scale);
        let x = &self.a + &self.b * &lo;
        let y = &self.a + &self.b * &hi;
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Parse a canonical string such as `-3/2`, `1/2+1/3*sqrt2`, `sqrt2`, `-2*sqrt` (the
    /// bare `sqrt` uses `field_d`).
    pub fn parse(text: &str, field_d: Option<u32>) -> Result<Scalar> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.replace('\u{2212}', "-");
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        // split into signed terms
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' && bytes[i - 1] != b'*' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut total = Scalar::zero();
        for t in terms {
            total = &total + &parse_term(t, field_d)?;
        }
        Ok(total)
    }
}

fn sign_of(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn parse_rational(t: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{t}'"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn parse_term(t: &str, field_d: Option<u32>) -> Result<Scalar> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let value = if let Some(pos) = body.find("sqrt") {
        let coeff = body[..pos].trim_end_matches('*');
        let radicand = &body[pos + 4..];
        let d = if radicand.is_empty() {
            field_d.ok_or_else(|| Error::Parse(format!("'{t}' needs a field radicand")))?
        } else {
            radicand
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad radicand in '{t}'")))?
        };
        if !is_squarefree(d) {
            return Err(Error::Parse(format!("radicand {d} is not squarefree")));
        }
        if let Some(fd) = field_d {
            if fd != d {
                return Err(Error::Parse(format!("sqrt{d} outside field sqrt{fd}")));
            }
        }
        let c = if coeff.is_empty() { BigRational::one() } else { parse_rational(coeff)? };
        Scalar::quadratic(BigRational::zero(), c, d)
    } else {
        Scalar::rational(parse_rational(body)?)
    };
    Ok(if neg { -value } else { value })
}

fn fmt_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let bpart = if self.b.is_one() {
            format!("sqrt{}", self.d)
        } else if (-&self.b).is_one() {
            format!("-sqrt{}", self.d)
        } else {
            format!("{}*sqrt{}", fmt_rat(&self.b), self.d)
        };
        if self.a.is_zero() {
            write!(f, "{bpart}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", fmt_rat(&self.a), bpart)
        } else {
            write!(f, "{}+{}", fmt_rat(&self.a), bpart)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(a: BigRational) -> Self {
        Scalar::rational(a)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.b.is_zero() && o.b.is_zero() {
            return Scalar::rational(&self.a + &o.a);
        }
        let d = Scalar::join(self.d, o.d);
        let mut s = Scalar { a: &self.a + &o.a, b: &self.b + &o.b, d };
        s.normalize();
        s
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        if self.b.is_zero() && o.b.is_zero() {
            return Scalar::rational(&self.a - &o.a);
        }
        let d = Scalar::join(self.d, o.d);
        let mut s = Scalar { a: &self.a - &o.a, b: &self.b - &o.b, d };
        s.normalize();
        s
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.b.is_zero() && o.b.is_zero() {
            return Scalar::rational(&self.a * &o.a);
        }
        let d = Scalar::join(self.d, o.d);
        let a = &self.a * &o.a + &self.b * &o.b * rat(d as i64);
        let b = &self.a * &o.b + &self.b * &o.a;
        let mut s = Scalar { a, b, d };
        s.normalize();
        s
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        if self.b.is_zero() && o.b.is_zero() {
            assert!(!o.a.is_zero(), "division by zero");
            return Scalar::rational(&self.a / &o.a);
        }
        self * &o.inv()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

/// Factorial as a scalar.
pub fn factorial(n: usize) -> Scalar {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= BigInt::from(i);
    }
    Scalar::rational(BigRational::from_integer(f))
}

/// Binomial coefficient as an integer.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        Scalar::parse(&text, None).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_and_parses() {
        let x = Scalar::parse("1/2+1/3*sqrt2", None).unwrap();
        assert_eq!(x.to_string(), "1/2+1/3*sqrt2");
        assert_eq!(Scalar::parse("-3/2", None).unwrap().to_string(), "-3/2");
        let y = Scalar::parse("-sqrt", Some(2)).unwrap();
        assert_eq!(y.to_string(), "-sqrt2");
        assert_eq!(Scalar::parse("2/4", None).unwrap(), Scalar::ratio(1, 2));
        assert!(Scalar::parse("1/0", None).is_err());
        assert!(Scalar::parse("sqrt4", None).is_err());
        assert!(Scalar::parse("sqrt3", Some(2)).is_err());
    }

    #[test]
    fn quadratic_arithmetic() {
        let r2 = Scalar::sqrt(2);
        assert_eq!(&r2 * &r2, Scalar::int(2));
        let x = Scalar::int(1) + &r2;
        let y = Scalar::int(1) - &r2;
        assert_eq!(&x * &y, Scalar::int(-1));
        assert_eq!(&x * &x.inv(), Scalar::one());
        assert!((Scalar::int(3) - Scalar::int(2) * &r2).is_positive());
        assert!((Scalar::int(1) - &r2).is_negative());
        assert!(Scalar::int(3) > Scalar::int(2) * &r2);
    }
}
