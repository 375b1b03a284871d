//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Polynomial in `nvars` variables `y0, y1, ...`. Terms are keyed by
/// exponent vectors; the map order is lexicographic, so the last key is the
/// leading monomial for the lex order with `y0 > y1 > ...`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `sum_i v_i y_i`.
    pub fn linear(v: &[i64]) -> Self {
        let mut p = Self::zero(v.len());
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                p = p + Self::var(v.len(), i).scale(&rat(c));
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `y_i -> images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let n = images.first().map_or(self.nvars, |p| p.nvars);
        let mut out = Poly::zero(n);
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(n), p.clone()]).collect();
        for (e, c) in &self.terms {
            let mut m = Poly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap() * &images[i];
                    cache[i].push(next);
                }
                if k > 0 {
                    m = &m * &cache[i][k as usize];
                }
            }
            out = out + m;
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quo = Poly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let t = Poly::monomial(e, c);
            rem = rem - &t * d;
            quo = quo + t;
        }
        Some(quo)
    }

    /// Homogeneous component of the given degree.
    pub fn component(&self, degree: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == degree).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars.max(rhs.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("y{i}") } else { format!("y{i}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Square matrix with polynomial entries.
pub type PolyMatrix = Vec<Vec<Poly>>;

pub fn mat_identity(n: usize, nvars: usize) -> PolyMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Poly::one(nvars) } else { Poly::zero(nvars) }).collect()).collect()
}

pub fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let nv = a.first().and_then(|r| r.first()).map_or(0, |p| p.nvars());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Poly::zero(nv), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free Bareiss elimination with exact division.
pub fn determinant(m: &PolyMatrix) -> Poly {
    let n = m.len();
    let nv = m.first().and_then(|r| r.first()).map_or(0, |p| p.nvars());
    if n == 0 {
        return Poly::one(nv);
    }
    let mut a = m.clone();
    let mut prev = Poly::one(nv);
    let mut sign = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Poly::zero(nv),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn arithmetic_and_display() {
        let p = y(0) + y(1);
        let q = y(0) - y(1);
        let pq = &p * &q;
        assert_eq!(pq, y(0).pow(2) - y(1).pow(2));
        assert_eq!(pq.to_string(), "y0^2 - y1^2");
        assert_eq!(pq.div_exact(&p).unwrap(), q);
        assert!(pq.div_exact(&(y(0) + Poly::one(2))).is_none());
        assert_eq!(Poly::linear(&[-2, 0]).to_string(), "-2*y0");
        assert_eq!(pq.degree(), Some(2));
        assert!(pq.is_homogeneous());
    }

    #[test]
    fn substitution() {
        let p = y(0).pow(2) + y(1);
        let swapped = p.substitute(&[y(1), y(0)]);
        assert_eq!(swapped, y(1).pow(2) + y(0));
    }

    #[test]
    fn bareiss_matches_expansion() {
        let m = vec![vec![Poly::one(2), y(0)], vec![Poly::one(2), -y(0)]];
        assert_eq!(determinant(&m), Poly::linear(&[-2, 0]));
        let m3 = vec![
            vec![y(0), y(1), Poly::one(2)],
            vec![Poly::zero(2), y(0), y(1)],
            vec![y(1), Poly::zero(2), y(0)],
        ];
        // cofactor expansion along the first row
        let minor = |r: [usize; 2], c: [usize; 2]| &m3[r[0]][c[0]] * &m3[r[1]][c[1]] - &m3[r[0]][c[1]] * &m3[r[1]][c[0]];
        let expected = &m3[0][0] * &minor([1, 2], [1, 2]) - &m3[0][1] * &minor([1, 2], [0, 2]) + &m3[0][2] * &minor([1, 2], [0, 1]);
        assert_eq!(determinant(&m3), expected);
    }
}
