//! Sparse bivariate polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Polynomial in `x, y`; keys are `(deg_x, deg_y)`, zero coefficients never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c.into());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * x.pow(i) * y.pow(j))
            .sum()
    }

    /// Substitutes `x -> x + 1, y -> y + 1`, i.e. rewrites in the shifted
    /// variables `X = x - 1, Y = y - 1`. The result is keyed by powers of
    /// `X` and `Y`.
    pub fn shift(&self, dx: i64, dy: i64) -> Self {
        let x = &Self::x() + &Self::constant(dx);
        let y = &Self::y() + &Self::constant(dy);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let t = &(&x.pow(i) * &y.pow(j)) * &Self::constant(c.clone());
            out = &out + &t;
        }
        out
    }

    /// Renders in the shifted variables `(x-1)` and `(y-1)`.
    pub fn display_shifted(&self) -> String {
        render(&self.shift(1, 1), "(x-1)", "(y-1)")
    }
}

fn render(p: &Poly2, xs: &str, ys: &str) -> String {
    if p.terms.is_empty() {
        return "0".into();
    }
    let mut keys: Vec<_> = p.terms.keys().copied().collect();
    keys.sort_by(|a, b| (b.0 + b.1).cmp(&(a.0 + a.1)).then(b.0.cmp(&a.0)));
    let mut out = String::new();
    for (k, &(i, j)) in keys.iter().enumerate() {
        let c = &p.terms[&(i, j)];
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mut factors = Vec::new();
        let power = |v: &str, e: u32| if e == 1 { v.to_string() } else { format!("{v}^{e}") };
        if i > 0 {
            factors.push(power(xs, i));
        }
        if j > 0 {
            factors.push(power(ys, j));
        }
        if factors.is_empty() {
            out.push_str(&a.to_string());
        } else {
            if !a.is_one() {
                out.push_str(&format!("{a}*"));
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl fmt::Display for Poly2 {
    /// Terms by descending total degree, then descending power of `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, "x", "y"))
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &rhs.terms {
                out.add_term(i + k, j + l, c * d);
            }
        }
        out
    }
}
