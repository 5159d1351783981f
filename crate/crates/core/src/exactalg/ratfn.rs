use std::fmt;

use super::{Poly, Scalar};

/// Quotient `num / prod(factors)` with every factor monic. Factors are kept separately so
/// that sums can use a least common multiple instead of the full product, and reduction is
/// trial division by the known factors.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    factors: Vec<Poly>,
}

impl RationalFn {
    pub fn from_poly(p: Poly) -> Self {
        RationalFn { num: p, factors: Vec::new() }
    }

    /// `num / prod(den)`; factors are normalized to be monic.
    pub fn new(num: Poly, den: Vec<Poly>) -> Self {
        let mut num = num;
        let mut factors = Vec::with_capacity(den.len());
        for f in den {
            assert!(!f.is_zero(), "zero denominator factor");
            let (c, m) = f.monic();
            num = num.scale(&c.inv());
            if m.degree() == Some(0) {
                continue;
            }
            factors.push(m);
        }
        let mut r = RationalFn { num, factors };
        r.reduce();
        r
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn denominator(&self) -> Poly {
        self.factors.iter().fold(Poly::one(self.num.nvars()), |acc, f| &acc * f)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator has cancelled.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.factors.is_empty().then_some(&self.num)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.factors.clear();
            return;
        }
        let mut kept = Vec::new();
        for f in std::mem::take(&mut self.factors) {
            match self.num.div_exact(&f) {
                Some(q) => self.num = q,
                None => kept.push(f),
            }
        }
        kept.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
        self.factors = kept;
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut r = RationalFn { num: self.num.scale(c), factors: self.factors.clone() };
        r.reduce();
        r
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut r = RationalFn { num: &self.num * p, factors: self.factors.clone() };
        r.reduce();
        r
    }
}

/// Sum of fractions over the least common multiple of their factor multisets.
pub fn ratfn_sum_reduce(terms: &[RationalFn]) -> RationalFn {
    let nvars = match terms.first() {
        Some(t) => t.num.nvars(),
        None => return RationalFn::from_poly(Poly::zero(0)),
    };
    // lcm of factor multisets
    let mut lcm: Vec<(Poly, usize)> = Vec::new();
    for t in terms {
        let mut counts: Vec<(Poly, usize)> = Vec::new();
        for f in &t.factors {
            match counts.iter_mut().find(|(g, _)| g == f) {
                Some(e) => e.1 += 1,
                None => counts.push((f.clone(), 1)),
            }
        }
        for (f, k) in counts {
            match lcm.iter_mut().find(|(g, _)| *g == f) {
                Some(e) => e.1 = e.1.max(k),
                None => lcm.push((f, k)),
            }
        }
    }
    let mut num = Poly::zero(nvars);
    for t in terms {
        let mut missing: Vec<(Poly, usize)> = lcm.clone();
        for f in &t.factors {
            let e = missing.iter_mut().find(|(g, _)| g == f).unwrap();
            e.1 -= 1;
        }
        let mut cofactor = Poly::one(nvars);
        for (f, k) in &missing {
            cofactor = &cofactor * &f.pow(*k as u32);
        }
        num = &num + &(&t.num * &cofactor);
    }
    let mut factors = Vec::new();
    for (f, k) in lcm {
        for _ in 0..k {
            factors.push(f.clone());
        }
    }
    let mut r = RationalFn { num, factors };
    r.reduce();
    r
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self.factors.iter().map(|p| format!("({p})")).collect();
        write!(f, "({})/{}", self.num, den.join("*"))
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let a = RationalFn::new(x.clone(), vec![x.clone()]);
        let b = RationalFn::new(-&x, vec![-&x]);
        assert_eq!(ratfn_sum_reduce(&[a, b]).as_poly().unwrap(), &Poly::constant(2, Scalar::int(2)));
        let s = ratfn_sum_reduce(&[
            RationalFn::new(Poly::one(2), vec![x.clone()]),
            RationalFn::new(Poly::one(2), vec![y.clone()]),
        ]);
        assert_eq!(s.numerator(), &(&x + &y));
        assert_eq!(s.denominator(), &x * &y);
        assert_eq!(RationalFn::new(x.pow(2), vec![x.clone()]).as_poly().unwrap(), &x);
    }
}
