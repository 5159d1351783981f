use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Scalar;

/// Exponent vector. Ordered graded-lexicographically: total degree first, then a larger
/// exponent of an earlier variable wins.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// All monomials of total degree `deg` in `n` variables, largest first.
pub fn monomials(n: usize, deg: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        return if deg == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(n, 0, deg, &mut vec![0; n], &mut out);
    out
}

/// Multivariate polynomial with exact coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, i), Scalar::one())
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(n, i), c.clone());
            }
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Largest total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Grading in which linear forms have degree 2.
    pub fn doubled_degree(&self) -> Option<u32> {
        self.degree().map(|d| 2 * d)
    }

    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == deg).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars);
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &xi.pow(e);
                }
            }
            total += &t;
        }
        total
    }

    /// Substitute `x_i = forms[i]` where each form is a linear form in `new_nvars` variables
    /// given by its coefficient row.
    pub fn substitute_linear(&self, forms: &[Vec<Scalar>], new_nvars: usize) -> Poly {
        assert_eq!(forms.len(), self.nvars);
        let lin: Vec<Poly> = forms
            .iter()
            .map(|row| {
                assert_eq!(row.len(), new_nvars);
                Poly::linear(row)
            })
            .collect();
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(new_nvars)]; self.nvars];
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(new_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &lin[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Substitute arbitrary polynomials for the variables.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let n = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &subs[i].pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Embed into a larger variable set: variable `i` becomes variable `offset + i`.
    pub fn embed(&self, new_nvars: usize, offset: usize) -> Poly {
        assert!(offset + self.nvars <= new_nvars);
        let mut p = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_nvars];
            e[offset..offset + self.nvars].copy_from_slice(&m.0);
            p.terms.insert(Monomial(e), c.clone());
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, &(c * &Scalar::int(e as i64)));
        }
        out
    }

    /// Apply the differential operator `sum c_a d^a` encoded by `op` (same variables).
    pub fn apply_operator(&self, op: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &op.terms {
            let mut t = self.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.derivative(i);
                }
            }
            out = &out + &t.scale(c);
        }
        out
    }

    /// Exact quotient by a nonzero polynomial `divisor`, or `None` when it does not divide.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        // Graded-lex is a monomial order, so the leading term of rem must be divisible by lm.
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = Monomial(m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect());
            let qc = &c / &lc;
            let t = Poly::monomial(self.nvars, qm, qc);
            rem = &rem - &(&t * divisor);
            q = &q + &t;
        }
        Some(q)
    }

    /// Scale so that the leading coefficient is one; returns the factor removed.
    pub fn monic(&self) -> (Scalar, Poly) {
        match self.leading() {
            None => (Scalar::one(), self.clone()),
            Some((_, c)) => {
                let c = c.clone();
                (c.clone(), self.scale(&c.inv()))
            }
        }
    }

    /// Coefficient vector of a homogeneous polynomial of degree `deg` against `monomials`.
    pub fn coords(&self, basis: &[Monomial]) -> Vec<Scalar> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "polynomial dimension mismatch");
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c);
        }
        p
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "polynomial dimension mismatch");
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), &(-c));
        }
        p
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "polynomial dimension mismatch");
        let mut p = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Scalar::int(-1))
    }
}

macro_rules! owned_poly_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
    };
}
owned_poly_ops!(Add, add);
owned_poly_ops!(Sub, sub);
owned_poly_ops!(Mul, mul);

const VARS: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

fn var_name(n: usize, i: usize) -> String {
    if n <= VARS.len() {
        VARS[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&var_name(self.nvars, i));
                if e > 1 {
                    mono.push_str(&format!("^{e}"));
                }
            }
            let cs = c.to_string();
            let body = if mono.is_empty() {
                cs.clone()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else if c.is_rational() {
                format!("{cs}*{mono}")
            } else {
                format!("({cs})*{mono}")
            };
            if !first && !body.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(2, 0)
    }
    fn y() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn ring_identities() {
        let p = (x() + y()) * (x() - y());
        assert_eq!(p, &x().pow(2) - &y().pow(2));
        assert!((&x() * &Poly::zero(2)).is_zero());
        let r2 = Scalar::sqrt(2);
        let a = Poly::one(1) + Poly::var(1, 0).scale(&r2);
        let b = Poly::one(1) - Poly::var(1, 0).scale(&r2);
        assert_eq!(a * b, Poly::one(1) - Poly::var(1, 0).pow(2).scale(&Scalar::int(2)));
    }

    #[test]
    fn exact_division() {
        let p = &x().pow(2) - &y().pow(2);
        assert_eq!(p.div_exact(&(x() - y())).unwrap(), x() + y());
        assert!(x().div_exact(&y()).is_none());
        assert!((x() + Poly::one(2)).div_exact(&x()).is_none());
    }

    #[test]
    fn monomial_order() {
        let ms = monomials(2, 2);
        assert_eq!(ms, vec![Monomial(vec![2, 0]), Monomial(vec![1, 1]), Monomial(vec![0, 2])]);
        assert_eq!((x() + y()).leading().unwrap().0, &Monomial(vec![1, 0]));
        assert_eq!(monomials(0, 0).len(), 1);
        assert_eq!(monomials(3, 2).len(), 6);
    }

    #[test]
    fn display() {
        let p = &x().pow(2) - &y().scale(&Scalar::ratio(3, 2));
        assert_eq!(p.to_string(), "x^2-3/2*y");
    }
}
