//! Graded polynomial model of the monodromy ring, Demazure operators,
//! invariant subrings and Bott-Samelson bimodules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::blocks::Block;
use crate::poly::{determinant, mat_mul, rat, Poly, PolyMatrix, Rational};
use crate::rootdata::{pair, CartanType, RootDatum, RootDatumError};
use crate::sspoints::{coroot_eval, SemisimplePoint};
use crate::weyl::{Side, WeylError, WeylGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SoergelError {
    #[error("Demazure numerator not divisible by the coroot of root {0}")]
    DivisionFailure(usize),
    #[error("not a reflection subgroup: {0}")]
    NotReflectionSubgroup(String),
    #[error("no Steinberg basis found for {0}")]
    BasisNotSteinberg(String),
    #[error("endpoint mismatch: right point {right} against left point {left}")]
    EndpointMismatch { right: String, left: String },
    #[error("bimodule is not free of rank {0} on the right")]
    SideFreenessFailure(usize),
    #[error("graph check failed: {0}")]
    GraphCheckFailure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Datum(#[from] RootDatumError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

impl SoergelError {
    pub fn code(&self) -> &'static str {
        match self {
            SoergelError::DivisionFailure(_) => "soergel.division_failure",
            SoergelError::NotReflectionSubgroup(_) => "soergel.not_reflection_subgroup",
            SoergelError::BasisNotSteinberg(_) => "soergel.basis_not_steinberg",
            SoergelError::EndpointMismatch { .. } => "soergel.endpoint_mismatch",
            SoergelError::SideFreenessFailure(_) => "soergel.side_freeness_failure",
            SoergelError::GraphCheckFailure(_) => "soergel.graph_check_failure",
            SoergelError::Unsupported(_) => "soergel.unsupported",
            SoergelError::Datum(e) => e.code(),
            SoergelError::Weyl(e) => e.code(),
        }
    }
}

type Result<T> = std::result::Result<T, SoergelError>;

/// `Sym(X_* (x) Q)` with variables the standard basis of `X_*`.
#[derive(Clone, Debug)]
pub struct GradedRing {
    nvars: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
}

impl GradedRing {
    pub fn new(rd: &RootDatum) -> Self {
        GradedRing { nvars: rd.rank(), roots: rd.roots().to_vec(), coroots: rd.coroots().to_vec() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars, i)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.nvars)
    }

    pub fn coroot(&self, i: usize) -> Poly {
        Poly::linear(&self.coroots[i])
    }

    /// `s_alpha` for root `i`: `y -> y - <alpha, y> alpha^vee`.
    pub fn reflect(&self, i: usize, f: &Poly) -> Poly {
        let c = self.coroot(i);
        let images: Vec<Poly> =
            (0..self.nvars).map(|j| self.var(j) - c.scale(&rat(self.roots[i][j]))).collect();
        f.substitute(&images)
    }

    /// Left action of `w`, linear on `X_*`.
    pub fn act(&self, w: &WeylGroup, x: usize, f: &Poly) -> Poly {
        let m = w.action_matrix(x, Side::Cocharacter);
        let images: Vec<Poly> =
            (0..self.nvars).map(|i| Poly::linear(&(0..self.nvars).map(|j| m[(j, i)]).collect::<Vec<_>>())).collect();
        f.substitute(&images)
    }

    /// `(f - s_alpha f) / alpha^vee`.
    pub fn demazure(&self, i: usize, f: &Poly) -> Result<Poly> {
        let num = f.clone() - self.reflect(i, f);
        num.div_exact(&self.coroot(i)).ok_or(SoergelError::DivisionFailure(i))
    }

    /// Demazure operator of a word, rightmost letter applied first.
    pub fn demazure_word(&self, word: &[usize], f: &Poly) -> Result<Poly> {
        word.iter().rev().try_fold(f.clone(), |g, &i| self.demazure(i, &g))
    }
}

/// Exponent vectors of total degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Rank of a rational matrix given by rows.
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = &rows[r][c] / &pivot;
                for k in c..cols {
                    let v = &rows[rank][k] * &factor;
                    rows[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantRank {
    pub rank: usize,
    pub degrees: Vec<u64>,
    pub types: String,
    /// Molien series agrees with the degree product up to this order.
    pub molien_checked_to: usize,
}

/// Power series coefficients of `1 / c(t)` up to `t^n`, with `c(0) = 1`.
fn invert_series(c: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n + 1];
    out[0] = Rational::one() / &c[0];
    for k in 1..=n {
        let mut acc = Rational::zero();
        for j in 1..=k.min(c.len() - 1) {
            acc += &c[j] * &out[k - j];
        }
        out[k] = -acc / &c[0];
    }
    out
}

fn univariate_coeffs(p: &Poly) -> Vec<Rational> {
    let d = p.degree().unwrap_or(0) as usize;
    (0..=d).map(|k| p.coefficient(&[k as u32])).collect()
}

/// Rank of `R` over the invariants of the reflection subgroup with the given
/// simple roots, certified against the Molien series.
pub fn invariant_rank(rd: &RootDatum, w: &WeylGroup, simple: &[usize]) -> Result<InvariantRank> {
    for (a, &i) in simple.iter().enumerate() {
        if i >= rd.num_roots() {
            return Err(SoergelError::NotReflectionSubgroup(format!("no root {i}")));
        }
        for &j in &simple[a + 1..] {
            if i == j || pair(rd.root(i), rd.coroot(j)) > 0 {
                return Err(SoergelError::NotReflectionSubgroup(format!("roots {i} and {j} are not simple for a common system")));
            }
        }
    }
    let sub = rd.subdatum(simple)?;
    let class = sub.classify()?;
    let mut degrees: Vec<u64> = class.types().iter().flat_map(|t| t.degrees()).collect();
    degrees.sort_unstable();
    let gens: Vec<usize> = simple.iter().map(|&i| w.reflection(i)).collect();
    let group = w.generate_subgroup(&gens);
    let prod: u64 = degrees.iter().product();
    if prod as usize != group.len() {
        return Err(SoergelError::NotReflectionSubgroup(format!("degree product {prod} against order {}", group.len())));
    }

    let n = rd.rank();
    let order = degrees.iter().sum::<u64>() as usize + 4;
    let mut molien = vec![Rational::zero(); order + 1];
    for &x in &group {
        let m = w.matrix(x);
        let charm: PolyMatrix = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let id = if r == c { Poly::one(1) } else { Poly::zero(1) };
                        id - Poly::linear(&[m[(r, c)]])
                    })
                    .collect()
            })
            .collect();
        let series = invert_series(&univariate_coeffs(&determinant(&charm)), order);
        for (acc, v) in molien.iter_mut().zip(series) {
            *acc += v;
        }
    }
    let g = rat(group.len() as i64);
    let molien: Vec<Rational> = molien.into_iter().map(|v| v / &g).collect();

    // prod 1/(1 - t^d) * 1/(1 - t)^(n - k)
    let mut denom = vec![Rational::one()];
    let free = n - simple.len();
    let factors: Vec<u64> = degrees.iter().copied().chain(std::iter::repeat(1).take(free)).collect();
    for d in factors {
        let mut next = vec![Rational::zero(); denom.len() + d as usize];
        for (k, v) in denom.iter().enumerate() {
            next[k] += v;
            next[k + d as usize] -= v;
        }
        denom = next;
    }
    let expected = invert_series(&denom, order);
    if expected != molien {
        return Err(SoergelError::NotReflectionSubgroup("Molien series disagrees with the degrees".into()));
    }
    Ok(InvariantRank { rank: group.len(), degrees, types: class.label(), molien_checked_to: order })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SteinbergType {
    A1,
    A1A1,
    A2,
    B2,
}

impl SteinbergType {
    pub fn datum(self) -> RootDatum {
        match self {
            SteinbergType::A1 => RootDatum::sl(2),
            SteinbergType::A1A1 => RootDatum::sl2_x_sl2(),
            SteinbergType::A2 => RootDatum::sl(3),
            SteinbergType::B2 => RootDatum::simply_connected(CartanType::C(2)),
        }
    }
}

impl FromStr for SteinbergType {
    type Err = SoergelError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace(['x', 'X', '×'], "").as_str() {
            "A1" => Ok(SteinbergType::A1),
            "A1A1" => Ok(SteinbergType::A1A1),
            "A2" => Ok(SteinbergType::A2),
            "B2" | "C2" => Ok(SteinbergType::B2),
            _ => Err(SoergelError::Unsupported(format!("Steinberg type {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SteinbergBasis {
    /// `e_w` = product of the positive coroots inverted by `w`.
    DescentProducts,
    /// `e_w = d_{w^-1 w0}` applied to the product of all positive coroots.
    Schubert,
}

#[derive(Clone, Debug, Serialize)]
pub struct SteinbergReport {
    pub basis: SteinbergBasis,
    pub fallback_used: bool,
    pub order: usize,
    pub determinant: Poly,
    pub degree: u32,
}

pub fn steinberg_basis(ring: &GradedRing, rd: &RootDatum, w: &WeylGroup, basis: SteinbergBasis) -> Result<Vec<Poly>> {
    match basis {
        SteinbergBasis::DescentProducts => Ok((0..w.order())
            .map(|x| w.inversions(x).iter().fold(ring.one(), |acc, &b| &acc * &ring.coroot(b)))
            .collect()),
        SteinbergBasis::Schubert => {
            let top = (0..rd.num_positive()).fold(ring.one(), |acc, b| &acc * &ring.coroot(b));
            let w0 = w.longest_element();
            (0..w.order())
                .map(|x| {
                    let y = w.mul(w.inverse(x), w0);
                    ring.demazure_word(w.word(y), &top)
                })
                .collect()
        }
    }
}

/// `det(v(e_w))_{v,w}` for a datum of semisimple rank at most 2, falling
/// back to the Schubert basis when the requested one degenerates.
pub fn steinberg_det(rd: &RootDatum, basis: SteinbergBasis) -> Result<SteinbergReport> {
    if rd.simple_count() > 2 {
        return Err(SoergelError::Unsupported("Steinberg determinant beyond semisimple rank 2".into()));
    }
    let w = WeylGroup::enumerate(rd)?;
    let ring = GradedRing::new(rd);
    let order = [basis, SteinbergBasis::Schubert];
    for (k, &b) in order.iter().enumerate() {
        if k == 1 && basis == SteinbergBasis::Schubert {
            break;
        }
        let e = steinberg_basis(&ring, rd, &w, b)?;
        let m: PolyMatrix = (0..w.order()).map(|v| e.iter().map(|f| ring.act(&w, v, f)).collect()).collect();
        let det = determinant(&m);
        if !det.is_zero() {
            return Ok(SteinbergReport {
                basis: b,
                fallback_used: k == 1,
                order: w.order(),
                degree: det.degree().unwrap_or(0),
                determinant: det,
            });
        }
    }
    Err(SoergelError::BasisNotSteinberg(rd.name().to_string()))
}

/// Left-free graded `R`-bimodule with explicit right action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBimodule {
    nvars: usize,
    pub degrees: Vec<u32>,
    /// For each variable `y_j`, the matrix `P` with `b_a y_j = sum_c P[c][a] b_c`.
    pub right_action: Vec<PolyMatrix>,
    pub left_point: SemisimplePoint,
    pub right_point: SemisimplePoint,
    /// Weyl elements whose graphs support the module.
    pub twist_record: Vec<usize>,
    pub fixing_letters: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BimoduleSummary {
    pub rank: usize,
    pub degrees: Vec<u32>,
    pub left_point: SemisimplePoint,
    pub right_point: SemisimplePoint,
    pub twist_record: Vec<Vec<usize>>,
    pub graph_twist: Option<Vec<usize>>,
    pub fixing_letters: usize,
    pub right_free: bool,
    pub denominator_primes: Vec<u64>,
}

impl GradedBimodule {
    /// Graph of `x` with both endpoints at `s`-translates.
    pub fn graph(ring: &GradedRing, w: &WeylGroup, x: usize, left: SemisimplePoint, right: SemisimplePoint) -> Self {
        let right_action = (0..ring.nvars()).map(|j| vec![vec![ring.act(w, x, &ring.var(j))]]).collect();
        GradedBimodule {
            nvars: ring.nvars(),
            degrees: vec![0],
            right_action,
            left_point: left,
            right_point: right,
            twist_record: vec![x],
            fixing_letters: 0,
        }
    }

    pub fn unit(ring: &GradedRing, w: &WeylGroup, s: &SemisimplePoint) -> Self {
        Self::graph(ring, w, w.identity(), s.clone(), s.clone())
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn graph_twist(&self) -> Option<usize> {
        match (self.rank(), self.twist_record.as_slice()) {
            (1, [x]) => Some(*x),
            _ => None,
        }
    }

    /// Matrix of right multiplication by `g`.
    pub fn right_matrix(&self, g: &Poly) -> PolyMatrix {
        let n = self.rank();
        let mut out: PolyMatrix = vec![vec![Poly::zero(self.nvars); n]; n];
        let mut powers: Vec<Vec<PolyMatrix>> =
            self.right_action.iter().map(|p| vec![crate::poly::mat_identity(n, self.nvars), p.clone()]).collect();
        for (e, c) in g.terms() {
            let mut m = crate::poly::mat_identity(n, self.nvars);
            for (j, &k) in e.iter().enumerate() {
                while powers[j].len() <= k as usize {
                    let next = mat_mul(powers[j].last().unwrap(), &self.right_action[j]);
                    powers[j].push(next);
                }
                if k > 0 {
                    m = mat_mul(&m, &powers[j][k as usize]);
                }
            }
            for r in 0..n {
                for s in 0..n {
                    let add = m[r][s].scale(c);
                    out[r][s] = std::mem::replace(&mut out[r][s], Poly::zero(self.nvars)) + add;
                }
            }
        }
        out
    }

    pub fn actions_commute(&self) -> bool {
        let k = self.right_action.len();
        (0..k).all(|i| {
            (i + 1..k).all(|j| mat_mul(&self.right_action[i], &self.right_action[j]) == mat_mul(&self.right_action[j], &self.right_action[i]))
        })
    }

    /// Graded Nakayama test: the module is right-free of its left rank iff
    /// `M / M R_+` has Hilbert series `sum_a t^{deg b_a}`.
    pub fn is_right_free(&self) -> bool {
        let n = self.nvars;
        let rank = self.rank();
        let top = self.degrees.iter().copied().max().unwrap_or(0) + 1;
        for d in 0..=top {
            let mut index: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
            for (a, &da) in self.degrees.iter().enumerate() {
                if da <= d {
                    for m in monomials(n, d - da) {
                        let k = index.len();
                        index.insert((a, m), k);
                    }
                }
            }
            let mut rows = Vec::new();
            for p in &self.right_action {
                for (a, &da) in self.degrees.iter().enumerate() {
                    if da + 1 > d {
                        continue;
                    }
                    for m in monomials(n, d - da - 1) {
                        let mono = Poly::monomial(m, Rational::one());
                        let mut row = vec![Rational::zero(); index.len()];
                        for c in 0..rank {
                            let entry = &mono * &p[c][a];
                            for (e, v) in entry.terms() {
                                match index.get(&(c, e.clone())) {
                                    Some(&k) => row[k] += v,
                                    None => return false,
                                }
                            }
                        }
                        rows.push(row);
                    }
                }
            }
            let quotient = index.len() - if rows.is_empty() { 0 } else { rational_rank(rows) };
            let expected = self.degrees.iter().filter(|&&x| x == d).count();
            if quotient != expected {
                return false;
            }
        }
        true
    }

    pub fn denominator_primes(&self) -> Vec<u64> {
        let mut primes = BTreeSet::new();
        for p in &self.right_action {
            for row in p {
                for f in row {
                    for (_, c) in f.terms() {
                        let mut d = c.denom().to_u64().unwrap_or(0);
                        let mut q = 2;
                        while d > 1 {
                            if d % q == 0 {
                                primes.insert(q);
                                d /= q;
                            } else {
                                q += 1;
                            }
                        }
                    }
                }
            }
        }
        primes.into_iter().collect()
    }

    pub fn summary(&self, w: &WeylGroup) -> BimoduleSummary {
        BimoduleSummary {
            rank: self.rank(),
            degrees: self.degrees.clone(),
            left_point: self.left_point.clone(),
            right_point: self.right_point.clone(),
            twist_record: self.twist_record.iter().map(|&x| w.word(x).to_vec()).collect(),
            graph_twist: self.graph_twist().map(|x| w.word(x).to_vec()),
            fixing_letters: self.fixing_letters,
            right_free: self.is_right_free(),
            denominator_primes: self.denominator_primes(),
        }
    }
}

/// `BS(s_i, t)`: `R (x)_{R^{s_i}} R` when the root lies in `Phi_t`, otherwise
/// the graph of `s_i`.
pub fn bs_elementary(rd: &RootDatum, ring: &GradedRing, w: &WeylGroup, i: usize, t: &SemisimplePoint) -> GradedBimodule {
    let x = w.simple_reflection(i);
    let left = t.act(w.matrix(x));
    if !coroot_eval(t, rd.coroot(i)).is_zero() {
        return GradedBimodule::graph(ring, w, x, left, t.clone());
    }
    let half = Rational::new(1.into(), 2.into());
    let basis = [ring.one(), ring.coroot(i)];
    let right_action = (0..ring.nvars())
        .map(|j| {
            let mut p = vec![vec![Poly::zero(ring.nvars()); 2]; 2];
            for (a, g) in basis.iter().enumerate() {
                let h = g * &ring.var(j);
                let inv = (h.clone() + ring.reflect(i, &h)).scale(&half);
                let odd = ring.demazure(i, &h).expect("Demazure division is exact").scale(&half);
                p[0][a] = inv;
                p[1][a] = odd;
            }
            p
        })
        .collect();
    GradedBimodule {
        nvars: ring.nvars(),
        degrees: vec![0, 1],
        right_action,
        left_point: left,
        right_point: t.clone(),
        twist_record: vec![w.identity(), x],
        fixing_letters: 1,
    }
}

/// `M (x)_R N` with basis `b_a (x) c_b` at index `a * rank(N) + b`.
pub fn bs_convolve(w: &WeylGroup, m: &GradedBimodule, n: &GradedBimodule) -> Result<GradedBimodule> {
    if m.right_point != n.left_point {
        return Err(SoergelError::EndpointMismatch { right: m.right_point.to_string(), left: n.left_point.to_string() });
    }
    let (rm, rn) = (m.rank(), n.rank());
    let size = rm * rn;
    let nv = m.nvars;
    let mut cache: BTreeMap<(usize, usize, usize), PolyMatrix> = BTreeMap::new();
    let right_action: Vec<PolyMatrix> = n
        .right_action
        .iter()
        .enumerate()
        .map(|(j, pn)| {
            let mut out = vec![vec![Poly::zero(nv); size]; size];
            for d in 0..rn {
                for b in 0..rn {
                    if pn[d][b].is_zero() {
                        continue;
                    }
                    let pm = cache.entry((j, d, b)).or_insert_with(|| m.right_matrix(&pn[d][b]));
                    for c in 0..rm {
                        for a in 0..rm {
                            out[c * rn + d][a * rn + b] = pm[c][a].clone();
                        }
                    }
                }
            }
            out
        })
        .collect();
    let degrees = m.degrees.iter().flat_map(|&x| n.degrees.iter().map(move |&y| x + y)).collect();
    let twist: BTreeSet<usize> = m.twist_record.iter().flat_map(|&a| n.twist_record.iter().map(move |&b| w.mul(a, b))).collect();
    let out = GradedBimodule {
        nvars: nv,
        degrees,
        right_action,
        left_point: m.left_point.clone(),
        right_point: n.right_point.clone(),
        twist_record: twist.into_iter().collect(),
        fixing_letters: m.fixing_letters + n.fixing_letters,
    };
    if !out.actions_commute() || !out.is_right_free() {
        return Err(SoergelError::SideFreenessFailure(out.rank()));
    }
    Ok(out)
}

/// Elementary factors of `BS(w_1, ..., w_n, s)`, left to right.
pub fn bs_factors(rd: &RootDatum, ring: &GradedRing, w: &WeylGroup, word: &[usize], s: &SemisimplePoint) -> Vec<GradedBimodule> {
    let mut running = s.clone();
    let mut out = Vec::with_capacity(word.len());
    for &i in word.iter().rev() {
        let b = bs_elementary(rd, ring, w, i, &running);
        running = b.left_point.clone();
        out.push(b);
    }
    out.reverse();
    out
}

/// `BS(w_1, ..., w_n, s)`, convolved left to right.
pub fn bs_word(rd: &RootDatum, ring: &GradedRing, w: &WeylGroup, word: &[usize], s: &SemisimplePoint) -> Result<GradedBimodule> {
    let factors = bs_factors(rd, ring, w, word, s);
    let mut iter = factors.into_iter();
    let Some(first) = iter.next() else { return Ok(GradedBimodule::unit(ring, w, s)) };
    iter.try_fold(first, |acc, b| bs_convolve(w, &acc, &b))
}

/// Same module convolved right to left.
pub fn bs_word_right_nested(rd: &RootDatum, ring: &GradedRing, w: &WeylGroup, word: &[usize], s: &SemisimplePoint) -> Result<GradedBimodule> {
    let factors = bs_factors(rd, ring, w, word, s);
    let mut iter = factors.into_iter().rev();
    let Some(last) = iter.next() else { return Ok(GradedBimodule::unit(ring, w, s)) };
    iter.try_fold(last, |acc, b| bs_convolve(w, &b, &acc))
}

/// Number of letters of the word whose root lies in the running point's
/// root system.
pub fn fixing_count(rd: &RootDatum, w: &WeylGroup, word: &[usize], s: &SemisimplePoint) -> usize {
    let mut running = s.clone();
    let mut count = 0;
    for &i in word.iter().rev() {
        if coroot_eval(&running, rd.coroot(i)).is_zero() {
            count += 1;
        }
        running = running.act(w.matrix(w.simple_reflection(i)));
    }
    count
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphCheck {
    pub word: Vec<usize>,
    pub rank: usize,
    pub right_free: bool,
    pub twist_matches: bool,
}

/// The Bott-Samelson bimodule along a reduced word of the minimal element of
/// the block is the graph of that element.
pub fn graph_block_check(rd: &RootDatum, ring: &GradedRing, w: &WeylGroup, block: &Block) -> Result<GraphCheck> {
    let s_prime = &block.target;
    let word = w.word(block.w_min).to_vec();
    if fixing_count(rd, w, &word, s_prime) != 0 {
        return Err(SoergelError::GraphCheckFailure(format!("a letter of {word:?} fixes its running point")));
    }
    let m = bs_word(rd, ring, w, &word, s_prime)?;
    if m.left_point != block.source {
        return Err(SoergelError::GraphCheckFailure(format!("lands at {} instead of {}", m.left_point, block.source)));
    }
    let graph = GradedBimodule::graph(ring, w, block.w_min, block.source.clone(), s_prime.clone());
    let twist_matches = m.right_action == graph.right_action && m.graph_twist() == Some(block.w_min);
    let right_free = m.is_right_free();
    if m.rank() != 1 || !twist_matches || !right_free {
        return Err(SoergelError::GraphCheckFailure(format!("word {word:?} gives rank {} twist {:?}", m.rank(), m.twist_record)));
    }
    Ok(GraphCheck { word, rank: m.rank(), right_free, twist_matches })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducednessReport {
    pub root: usize,
    /// Characteristic polynomial of right multiplication by the coroot, in
    /// the left variables and a last variable `t`.
    pub char_poly: Poly,
    pub discriminant: Poly,
    pub factors: [Poly; 2],
    pub squarefree: bool,
    pub requires_ell_not: u64,
}

fn extend(p: &Poly, n: usize) -> Poly {
    p.terms().fold(Poly::zero(n), |acc, (e, c)| {
        let mut e = e.clone();
        e.resize(n, 0);
        acc + Poly::monomial(e, c.clone())
    })
}

/// `R (x)_{R^s} R = R[t]/(t^2 - x^2)` for the reflection of a simple root,
/// with `x` the coroot on the left and `t` on the right; certifies that the
/// relation is squarefree.
pub fn reducedness_toy(rd: &RootDatum, ring: &GradedRing, w: &WeylGroup, i: usize) -> Result<ReducednessReport> {
    if i >= rd.simple_count() {
        return Err(SoergelError::Unsupported(format!("{i} is not a simple root")));
    }
    let s = SemisimplePoint::zero(rd.rank());
    let m = bs_elementary(rd, ring, w, i, &s);
    let p = m.right_matrix(&ring.coroot(i));
    let n = ring.nvars() + 1;
    let t = Poly::var(n, n - 1);
    let e = |r: usize, c: usize| extend(&p[r][c], n);
    let trace = e(0, 0) + e(1, 1);
    let det = &e(0, 0) * &e(1, 1) - &e(0, 1) * &e(1, 0);
    let char_poly = &t * &t - &trace * &t + det.clone();
    let discriminant = &trace * &trace - det.scale(&rat(4));
    let x = extend(&ring.coroot(i), n);
    let factors = [t.clone() - x.clone(), t + x];
    let squarefree = !discriminant.is_zero()
        && &factors[0] * &factors[1] == char_poly
        && factors[0] != factors[1]
        && factors[0] != -factors[1].clone();
    Ok(ReducednessReport { root: i, char_poly, discriminant, factors, squarefree, requires_ell_not: 2 })
}

/// Summary certificates used by the report.
#[derive(Clone, Debug, Serialize)]
pub struct SoergelCertificate {
    pub invariant_rank: InvariantRank,
    pub steinberg_degree: Option<u32>,
    pub elementary: Vec<BimoduleSummary>,
    pub reducedness: Vec<bool>,
}

pub fn certificate(rd: &RootDatum, w: &WeylGroup, s: &SemisimplePoint) -> Result<SoergelCertificate> {
    let ring = GradedRing::new(rd);
    let simple: Vec<usize> = rd.simple_indices().collect();
    let invariant_rank = invariant_rank(rd, w, &simple)?;
    let steinberg_degree = if rd.simple_count() <= 2 { Some(steinberg_det(rd, SteinbergBasis::DescentProducts)?.degree) } else { None };
    let elementary = simple.iter().map(|&i| bs_elementary(rd, &ring, w, i, s).summary(w)).collect();
    let reducedness = simple.iter().map(|&i| reducedness_toy(rd, &ring, w, i).map(|r| r.squarefree)).collect::<Result<_>>()?;
    Ok(SoergelCertificate { invariant_rank, steinberg_degree, elementary, reducedness })
}

impl fmt::Display for SteinbergType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SteinbergType::A1 => "A1",
            SteinbergType::A1A1 => "A1A1",
            SteinbergType::A2 => "A2",
            SteinbergType::B2 => "B2",
        };
        write!(f, "{s}")
    }
}
