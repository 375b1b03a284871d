//! Frobenius data `F = q tau`, fixed points of `wF`, geometric and rational
//! classes of semisimple points, prime tables and `ell`-parts.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{self, BlockError};
use crate::lattice::{self, FiniteAbelianGroup, IntMatrix};
use crate::rootdata::{FundamentalGroupMode, RootDatum, RootDatumError};
use crate::sspoints::{self, abelian_invariants, CoefficientMode, PointError, SemisimplePoint, StabilizerData};
use crate::weyl::WeylGroup;

/// Largest accepted order of `tau`.
pub const TAU_ORDER_BOUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalityError {
    #[error("q = {0} is not a prime power")]
    QNotPrimePower(u64),
    #[error("very twisted Frobenius (q = {0}) is not supported")]
    VeryTwisted(String),
    #[error("cannot parse q from {0:?}")]
    QParse(String),
    #[error("tau is not an automorphism of the based datum: {0}")]
    TauNotDatumAutomorphism(String),
    #[error("cannot parse tau from {0:?}")]
    TauParse(String),
    #[error("wF - 1 is singular for w = {0:?}")]
    SingularFixedLocus(Vec<usize>),
    #[error("the orbit of {0} is not F-stable")]
    NotStableClass(String),
    #[error("count mismatch: {0}")]
    CountMismatch(String),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Block(#[from] BlockError),
}

impl RationalityError {
    pub fn code(&self) -> &'static str {
        match self {
            RationalityError::QNotPrimePower(_) => "rationality.q_not_prime_power",
            RationalityError::VeryTwisted(_) => "rationality.very_twisted",
            RationalityError::QParse(_) => "rationality.q_parse",
            RationalityError::TauNotDatumAutomorphism(_) => "rationality.tau_not_datum_automorphism",
            RationalityError::TauParse(_) => "rationality.tau_parse",
            RationalityError::SingularFixedLocus(_) => "rationality.singular_fixed_locus",
            RationalityError::NotStableClass(_) => "rationality.not_stable_class",
            RationalityError::CountMismatch(_) => "rationality.count_mismatch",
            RationalityError::Point(e) => e.code(),
            RationalityError::Block(e) => e.code(),
        }
    }
}

type Result<T> = std::result::Result<T, RationalityError>;

/// Parses `q` given as `"9"` or `"3^2"`. Fractional exponents and square
/// roots describe Suzuki and Ree isogenies and are rejected.
pub fn parse_q(text: &str) -> Result<u64> {
    let t = text.trim();
    if t.contains('/') || t.contains('.') || t.to_lowercase().contains("sqrt") {
        return Err(RationalityError::VeryTwisted(t.to_string()));
    }
    let q = match t.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.trim().parse().map_err(|_| RationalityError::QParse(t.to_string()))?;
            let e: u32 = e.trim().parse().map_err(|_| RationalityError::QParse(t.to_string()))?;
            b.checked_pow(e).ok_or_else(|| RationalityError::QParse(t.to_string()))?
        }
        None => t.parse().map_err(|_| RationalityError::QParse(t.to_string()))?,
    };
    if lattice::prime_power(q).is_none() {
        return Err(RationalityError::QNotPrimePower(q));
    }
    Ok(q)
}

/// The automorphism `-w_0` of the based datum (the opposition involution).
pub fn opposition(w: &WeylGroup) -> IntMatrix {
    w.matrix(w.longest_element()).scale(-1)
}

/// Resolves `"id"`, `"swap"` (the opposition involution `-w_0`) or a JSON
/// integer matrix.
pub fn parse_tau(rd: &RootDatum, w: &WeylGroup, text: &str) -> Result<IntMatrix> {
    match text.trim() {
        "id" | "identity" => Ok(IntMatrix::identity(rd.rank())),
        "swap" | "opposition" => Ok(opposition(w)),
        other => {
            let rows: Vec<Vec<i64>> =
                serde_json::from_str(other).map_err(|_| RationalityError::TauParse(other.to_string()))?;
            if rows.len() != rd.rank() || rows.iter().any(|r| r.len() != rd.rank()) {
                return Err(RationalityError::TauParse(format!("{other} is not a {0}x{0} matrix", rd.rank())));
            }
            Ok(IntMatrix::from_rows(&rows))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusDatum {
    pub q: u64,
    pub p: u64,
    pub tau: IntMatrix,
    pub tau_order: usize,
    /// `q tau` on `X*`.
    pub f_char: IntMatrix,
    /// `q (tau^{-1})^T` on `X_*`.
    pub f_cochar: IntMatrix,
    #[serde(skip)]
    tau_inverse: IntMatrix,
    /// `F(w) = tau w tau^{-1}` on Weyl element indices.
    #[serde(skip)]
    on_weyl: Vec<usize>,
}

pub fn build_frobenius(rd: &RootDatum, w: &WeylGroup, q: u64, tau: &IntMatrix) -> Result<FrobeniusDatum> {
    let (p, _) = lattice::prime_power(q).ok_or(RationalityError::QNotPrimePower(q))?;
    let bad = |m: String| RationalityError::TauNotDatumAutomorphism(m);
    let n = rd.rank();
    if tau.rows() != n || tau.cols() != n {
        return Err(bad(format!("tau must be {n}x{n}")));
    }
    let tau_order = tau.finite_order(TAU_ORDER_BOUND).ok_or_else(|| bad(format!("tau has no order <= {TAU_ORDER_BOUND}")))?;
    let tau_inverse = tau.unimodular_inverse().ok_or_else(|| bad("tau is not invertible over Z".into()))?;
    let tau_cochar = tau_inverse.transpose();
    for i in 0..rd.num_roots() {
        let image = tau.apply(rd.root(i));
        let j = rd.root_index(&image).ok_or_else(|| bad(format!("tau sends root {:?} outside Phi", rd.root(i))))?;
        if tau_cochar.apply(rd.coroot(i)) != rd.coroot(j) {
            return Err(bad(format!("tau does not respect the coroot of {:?}", rd.root(i))));
        }
        if i < rd.simple_count() && j >= rd.simple_count() {
            return Err(bad(format!("tau sends simple root {:?} to a non-simple root", rd.root(i))));
        }
    }
    let on_weyl = (0..w.order())
        .map(|x| {
            w.index_of(&tau.mul(w.matrix(x)).mul(&tau_inverse))
                .ok_or_else(|| bad("tau does not normalize W".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrobeniusDatum {
        q,
        p,
        tau: tau.clone(),
        tau_order,
        f_char: tau.scale(q as i64),
        f_cochar: tau_cochar.scale(q as i64),
        tau_inverse,
        on_weyl,
    })
}

impl FrobeniusDatum {
    pub fn apply(&self, s: &SemisimplePoint) -> SemisimplePoint {
        s.act(&self.f_char)
    }

    /// `tau w tau^{-1}`.
    pub fn on_weyl(&self, w: usize) -> usize {
        self.on_weyl[w]
    }

    pub fn tau_inverse(&self) -> &IntMatrix {
        &self.tau_inverse
    }

    /// `w F` on `X*`.
    pub fn wf_char(&self, w: &WeylGroup, x: usize) -> IntMatrix {
        w.matrix(x).mul(&self.f_char)
    }

    /// `w F` on `X_*`, i.e. the inverse transpose of `w` composed with
    /// `F` on cocharacters.
    pub fn wf_cochar(&self, w: &WeylGroup, x: usize) -> IntMatrix {
        w.matrix(w.inverse(x)).transpose().mul(&self.f_cochar)
    }
}

/// Points `s` with `w F(s) = s`, sorted, obtained from the Smith form of
/// `wF - 1`.
pub fn fixed_points(w: &WeylGroup, fr: &FrobeniusDatum, x: usize) -> Result<Vec<SemisimplePoint>> {
    let n = w.rank();
    let a = fr.wf_char(w, x).sub(&IntMatrix::identity(n));
    let (_, d, v) = lattice::smith_normal_form(&a);
    let diag: Vec<i64> = (0..n).map(|i| d[(i, i)]).collect();
    if diag.iter().any(|&e| e == 0) {
        return Err(RationalityError::SingularFixedLocus(w.word(x).to_vec()));
    }
    let den = diag.iter().fold(1i64, |l, &e| l.lcm(&e));
    let mut out = Vec::new();
    let mut t = vec![0i64; n];
    loop {
        // s = V t with t_i = k_i / d_i, written over the common denominator
        let scaled: Vec<i64> = (0..n).map(|i| t[i] * (den / diag[i])).collect();
        out.push(SemisimplePoint::new(den as u64, &v.apply(&scaled)));
        let mut k = n;
        loop {
            if k == 0 {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            k -= 1;
            t[k] += 1;
            if t[k] < diag[k] {
                break;
            }
            t[k] = 0;
        }
    }
}

/// `(s_ell', s_ell)` with `s = s_ell' + s_ell`, the first of order prime to
/// `ell` and the second of `ell`-power order.
pub fn ell_part(s: &SemisimplePoint, ell: u64) -> (SemisimplePoint, SemisimplePoint) {
    let n = s.order();
    let mut n_ell = 1;
    let mut m = n;
    while m % ell == 0 {
        m /= ell;
        n_ell *= ell;
    }
    let n_prime = m;
    let inv_ell = lattice::mod_inverse(n_ell as i64, n_prime as i64).unwrap();
    let inv_prime = lattice::mod_inverse(n_prime as i64, n_ell as i64).unwrap();
    let a: Vec<i64> = s.numerators().iter().map(|&x| x as i64).collect();
    let b: Vec<i64> = a.iter().map(|x| (x % n_prime as i64) * inv_ell % n_prime as i64).collect();
    let c: Vec<i64> = a.iter().map(|x| (x % n_ell as i64) * inv_prime % n_ell as i64).collect();
    (SemisimplePoint::new(n_prime, &b), SemisimplePoint::new(n_ell, &c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricClass {
    pub representative: SemisimplePoint,
    pub members: Vec<SemisimplePoint>,
    /// In integral mode, the representatives of the `Qbar_ell` classes whose
    /// `ell'`-parts lie in this class.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub merged: Vec<SemisimplePoint>,
}

/// The union of all `Fix(wF)`, sorted.
pub fn x_points(w: &WeylGroup, fr: &FrobeniusDatum) -> Result<Vec<SemisimplePoint>> {
    let mut set = BTreeSet::new();
    for x in 0..w.order() {
        set.extend(fixed_points(w, fr, x)?);
    }
    Ok(set.into_iter().collect())
}

fn orbits_of(w: &WeylGroup, points: impl IntoIterator<Item = SemisimplePoint>) -> Vec<GeometricClass> {
    let mut classes: BTreeMap<SemisimplePoint, Vec<SemisimplePoint>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for s in points {
        if seen.contains(&s) {
            continue;
        }
        let orbit = sspoints::orbit(w, &s);
        seen.extend(orbit.iter().cloned());
        classes.insert(orbit[0].clone(), orbit);
    }
    classes
        .into_iter()
        .map(|(representative, members)| GeometricClass { representative, members, merged: vec![] })
        .collect()
}

/// `F`-stable `W`-orbits of semisimple points, from the fixed points of all
/// `wF`. In integral mode points are first replaced by their `ell'`-parts.
pub fn geometric_classes(w: &WeylGroup, fr: &FrobeniusDatum, mode: CoefficientMode) -> Result<Vec<GeometricClass>> {
    let qbar = orbits_of(w, x_points(w, fr)?);
    match mode.ell() {
        None => Ok(qbar),
        Some(ell) => {
            let mut merged: BTreeMap<SemisimplePoint, Vec<SemisimplePoint>> = BTreeMap::new();
            for c in &qbar {
                let prime_part = ell_part(&c.representative, ell).0;
                let rep = sspoints::canonical_representative(w, &prime_part);
                merged.entry(rep).or_default().push(c.representative.clone());
            }
            Ok(merged
                .into_iter()
                .map(|(representative, m)| GeometricClass {
                    members: sspoints::orbit(w, &representative),
                    representative,
                    merged: m,
                })
                .collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalClassReport {
    pub geometric_class: SemisimplePoint,
    pub frobenius_image: SemisimplePoint,
    pub stable: bool,
    pub rational_count: usize,
    /// `H^1(F, Gamma_s)` when `F(s) = s`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_structure: Option<FiniteAbelianGroup>,
    pub twisted_orbit_count: usize,
}

/// Orbits of `gamma . x = gamma x f(gamma)^{-1}` on a finite abelian group
/// given by its table, where `f` is an endomorphism. Returns the orbit label
/// of every element (the smallest element of its orbit).
fn twisted_orbits(gamma: &sspoints::ComponentGroup, f: &[usize]) -> Vec<usize> {
    let k = gamma.order();
    let mut label = vec![usize::MAX; k];
    for x in 0..k {
        if label[x] != usize::MAX {
            continue;
        }
        for d in 0..k {
            let y = gamma.mul(gamma.mul(d, x), gamma.inverse(f[d]));
            if label[y] == usize::MAX {
                label[y] = x;
            }
        }
    }
    label
}

/// `H^1` of the automorphism `f` on the abelian group: the quotient by
/// `{d f(d)^{-1}}`, with its structure.
fn h1(gamma: &sspoints::ComponentGroup, f: &[usize]) -> (usize, FiniteAbelianGroup) {
    let label = twisted_orbits(gamma, f);
    let reps: Vec<usize> = label.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let pos = |x: usize| reps.iter().position(|&r| r == label[x]).unwrap();
    let table: Vec<Vec<usize>> = reps.iter().map(|&a| reps.iter().map(|&b| pos(gamma.mul(a, b))).collect()).collect();
    (reps.len(), abelian_invariants(&table))
}

/// `F` on `Gamma_s` when `F(s) = s`, as a map of coset indices.
fn frobenius_on_gamma(fr: &FrobeniusDatum, stab: &StabilizerData) -> Result<Vec<usize>> {
    stab.gamma
        .reps
        .iter()
        .map(|&r| {
            stab.gamma.coset_of(fr.on_weyl(r)).ok_or_else(|| {
                RationalityError::CountMismatch(format!("F does not preserve W_s at {}", stab.point))
            })
        })
        .collect()
}

/// Counts rational classes in the geometric class of `s` in two ways: by
/// `F`-twisted `Gamma_s`-orbits on the blocks from `F(s)` to `s`, and, when
/// `F(s) = s`, by `H^1(F, Gamma_s)`.
pub fn rational_classes(rd: &RootDatum, w: &WeylGroup, fr: &FrobeniusDatum, s: &SemisimplePoint) -> Result<RationalClassReport> {
    let fs = fr.apply(s);
    let orbit = sspoints::orbit(w, s);
    if orbit.binary_search(&fs).is_err() {
        return Err(RationalityError::NotStableClass(s.to_string()));
    }
    let st = sspoints::stabilizer_data(rd, w, s)?;
    let st_f = sspoints::stabilizer_data(rd, w, &fs)?;
    let endo = blocks::block_decomposition(w, &st, &st)?;
    let trans = blocks::block_decomposition(w, &st, &st_f)?;
    let block_of = |x: usize| trans.iter().position(|b| b.contains(x));
    let mut label = vec![usize::MAX; trans.len()];
    let mut count = 0;
    for b in 0..trans.len() {
        if label[b] != usize::MAX {
            continue;
        }
        count += 1;
        for g in &endo {
            let gi = w.inverse(g.w_min);
            let y = w.mul(w.mul(g.w_min, trans[b].w_min), fr.on_weyl(gi));
            let c = block_of(y).ok_or_else(|| {
                RationalityError::CountMismatch(format!("twisted product leaves the transporter at {s}"))
            })?;
            label[c] = b;
        }
    }
    let mut h1_structure = None;
    if fs == *s {
        let f = frobenius_on_gamma(fr, &st)?;
        let (n, g) = h1(&st.gamma, &f);
        if n != count {
            return Err(RationalityError::CountMismatch(format!(
                "H^1(F, Gamma_s) has {n} classes but the block quotient has {count} at {s}"
            )));
        }
        h1_structure = Some(g);
    }
    Ok(RationalClassReport {
        geometric_class: s.clone(),
        frobenius_image: fs,
        stable: true,
        rational_count: count,
        h1_structure,
        twisted_orbit_count: count,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InnerForm {
    /// Representative of the class in `H^1(F_beta, Gamma_s)` (coset index).
    pub cocycle: usize,
    /// Reduced word of the shortest Weyl element in that coset.
    pub cocycle_word: Vec<usize>,
    /// Reduced word of `gamma w_beta`, the twist of the Frobenius of the
    /// inner form.
    pub frobenius_word: Vec<usize>,
}

/// Inner forms of the endoscopic group at `s`, labelled by `H^1(F_beta,
/// Gamma_s)` for the base block `beta` containing the shortest element of
/// the transporter from `F(s)` to `s`.
pub fn inner_forms(rd: &RootDatum, w: &WeylGroup, fr: &FrobeniusDatum, s: &SemisimplePoint) -> Result<Vec<InnerForm>> {
    let report = rational_classes(rd, w, fr, s)?;
    let fs = report.frobenius_image.clone();
    let st = sspoints::stabilizer_data(rd, w, s)?;
    let st_f = sspoints::stabilizer_data(rd, w, &fs)?;
    let trans = blocks::block_decomposition(w, &st, &st_f)?;
    let base = trans
        .iter()
        .flat_map(|b| b.members.iter().copied())
        .min_by_key(|&x| (w.length(x), x))
        .expect("stable class has a nonempty transporter");
    let beta = trans.iter().find(|b| b.contains(base)).unwrap();
    let wb = beta.w_min;
    let wbi = w.inverse(wb);
    // F_beta(gamma) = beta F(gamma) beta^{-1}
    let f_beta: Vec<usize> = st
        .gamma
        .reps
        .iter()
        .map(|&r| {
            st.gamma
                .coset_of(w.mul(w.mul(wb, fr.on_weyl(r)), wbi))
                .ok_or_else(|| RationalityError::CountMismatch(format!("F_beta leaves W_s at {s}")))
        })
        .collect::<Result<_>>()?;
    let k = st.gamma.order();
    for a in 0..k {
        for b in 0..k {
            if f_beta[st.gamma.mul(a, b)] != st.gamma.mul(f_beta[a], f_beta[b]) {
                return Err(RationalityError::CountMismatch(format!("F_beta is not a homomorphism at {s}")));
            }
        }
    }
    let label = twisted_orbits(&st.gamma, &f_beta);
    let reps: BTreeSet<usize> = label.iter().copied().collect();
    if reps.len() != report.rational_count {
        return Err(RationalityError::CountMismatch(format!(
            "{} inner forms but {} rational classes at {s}",
            reps.len(),
            report.rational_count
        )));
    }
    Ok(reps
        .into_iter()
        .map(|c| {
            let g = st.gamma.reps[c];
            InnerForm { cocycle: c, cocycle_word: w.word(g).to_vec(), frobenius_word: w.word(w.mul(g, wb)).to_vec() }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTables {
    pub types: String,
    pub bad_primes: Vec<u64>,
    pub torsion_primes: Vec<u64>,
    pub pi1_torsion_order: u64,
}

pub fn prime_tables(rd: &RootDatum) -> std::result::Result<PrimeTables, RootDatumError> {
    let c = rd.classify()?;
    let mut bad = BTreeSet::new();
    let mut torsion = BTreeSet::new();
    for t in c.types() {
        bad.extend(t.bad_primes());
        torsion.extend(t.torsion_primes());
    }
    Ok(PrimeTables {
        types: c.label(),
        bad_primes: bad.into_iter().collect(),
        torsion_primes: torsion.into_iter().collect(),
        pi1_torsion_order: rd.fundamental_group(FundamentalGroupMode::Full).torsion().order(),
    })
}

impl PrimeTables {
    /// `ell` is not a torsion prime and does not divide the torsion of `pi_1`.
    pub fn condition_l(&self, ell: u64) -> bool {
        !self.torsion_primes.contains(&ell) && self.pi1_torsion_order % ell != 0
    }

    pub fn is_bad(&self, ell: u64) -> bool {
        self.bad_primes.contains(&ell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[&str]) -> SemisimplePoint {
        SemisimplePoint::parse(c).unwrap()
    }

    fn setup(rd: &RootDatum, q: u64, tau: &str) -> (WeylGroup, FrobeniusDatum) {
        let w = WeylGroup::enumerate(rd).unwrap();
        let t = parse_tau(rd, &w, tau).unwrap();
        let fr = build_frobenius(rd, &w, q, &t).unwrap();
        (w, fr)
    }

    #[test]
    fn q_parsing() {
        assert_eq!(parse_q("9").unwrap(), 9);
        assert_eq!(parse_q("3^2").unwrap(), 9);
        assert_eq!(parse_q("6"), Err(RationalityError::QNotPrimePower(6)));
        assert!(matches!(parse_q("2^(1/2)"), Err(RationalityError::VeryTwisted(_))));
        assert!(matches!(parse_q("sqrt2"), Err(RationalityError::VeryTwisted(_))));
        assert!(matches!(parse_q("x"), Err(RationalityError::QParse(_))));
    }

    #[test]
    fn frobenius_examples() {
        let rd = RootDatum::gl(2);
        let (_, fr) = setup(&rd, 3, "id");
        assert_eq!(fr.f_char, IntMatrix::scalar(2, 3));
        let (_, fr) = setup(&rd, 2, "swap");
        assert_eq!(fr.f_char.mul(&fr.f_char), IntMatrix::scalar(2, 4));
        assert_eq!(fr.tau_order, 2);
        assert_eq!(fr.f_char.det().abs(), 4);
        // a 3-cycle on GL3 permutes the roots but not the simple roots
        let gl3 = RootDatum::gl(3);
        let w = WeylGroup::enumerate(&gl3).unwrap();
        let cyc = IntMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(matches!(build_frobenius(&gl3, &w, 2, &cyc), Err(RationalityError::TauNotDatumAutomorphism(_))));
        assert!(matches!(build_frobenius(&gl3, &w, 6, &IntMatrix::identity(3)), Err(RationalityError::QNotPrimePower(6))));
    }

    #[test]
    fn fixed_point_examples() {
        let gl2 = RootDatum::gl(2);
        let (w, fr) = setup(&gl2, 3, "id");
        let f1 = fixed_points(&w, &fr, 0).unwrap();
        assert_eq!(f1.len(), 4);
        assert!(f1.iter().all(|s| s.order() <= 2));
        let fs = fixed_points(&w, &fr, 1).unwrap();
        assert_eq!(fs.len(), 8);
        for s in &fs {
            let n = s.numerators();
            let d = s.order() as i64;
            // (3b, b) with 8b = 0
            assert_eq!(n[0] as i64 % d, (3 * n[1] as i64) % d);
            assert_eq!(8 % d, 0);
        }
        let sl2 = RootDatum::sl(2);
        let (w, fr) = setup(&sl2, 3, "id");
        assert_eq!(fixed_points(&w, &fr, 1).unwrap(), vec![pt(&["0"]), pt(&["1/4"]), pt(&["1/2"]), pt(&["3/4"])]);
    }

    #[test]
    fn fixed_points_match_brute_force() {
        for rd in [RootDatum::gl(2), RootDatum::sl(2), RootDatum::sp4(), RootDatum::sl(3)] {
            for q in [2, 3, 4] {
                let (w, fr) = setup(&rd, q, "id");
                for x in 0..w.order() {
                    let fix = fixed_points(&w, &fr, x).unwrap();
                    let m = fr.wf_char(&w, x);
                    let det = m.sub(&IntMatrix::identity(rd.rank())).det().unsigned_abs();
                    assert_eq!(fix.len() as u64, det);
                    let brute: Vec<SemisimplePoint> = sspoints::enumerate_points_with_cap(&rd, det, CoefficientMode::Qlbar { p: 1 }, u64::MAX)
                        .unwrap()
                        .into_iter()
                        .filter(|s| s.act(&m) == *s)
                        .collect();
                    assert_eq!(fix, brute);
                }
            }
        }
    }

    #[test]
    fn ell_parts() {
        assert_eq!(ell_part(&pt(&["1/2"]), 2), (pt(&["0"]), pt(&["1/2"])));
        assert_eq!(ell_part(&pt(&["1/6"]), 2), (pt(&["2/3"]), pt(&["1/2"])));
        assert_eq!(ell_part(&pt(&["1/3"]), 2), (pt(&["1/3"]), pt(&["0"])));
        let s = pt(&["5/12", "1/4"]);
        let (a, b) = ell_part(&s, 2);
        assert_eq!(a.add(&b), s);
        assert_eq!((a.order(), b.order()), (3, 4));
    }

    #[test]
    fn sl2_classes() {
        let sl2 = RootDatum::sl(2);
        let (w, fr) = setup(&sl2, 3, "id");
        let classes = geometric_classes(&w, &fr, CoefficientMode::Qlbar { p: 3 }).unwrap();
        let reps: Vec<SemisimplePoint> = classes.iter().map(|c| c.representative.clone()).collect();
        assert_eq!(reps, vec![pt(&["0"]), pt(&["1/4"]), pt(&["1/2"])]);
        let counts: Vec<usize> =
            reps.iter().map(|s| rational_classes(&sl2, &w, &fr, s).unwrap().rational_count).collect();
        assert_eq!(counts, vec![1, 1, 2]);
        let half = rational_classes(&sl2, &w, &fr, &pt(&["1/2"])).unwrap();
        assert_eq!(half.h1_structure.unwrap().invariant_factors, vec![2]);
        let quarter = rational_classes(&sl2, &w, &fr, &pt(&["1/4"])).unwrap();
        assert_eq!(quarter.frobenius_image, pt(&["3/4"]));
        assert!(quarter.h1_structure.is_none());
        assert_eq!(inner_forms(&sl2, &w, &fr, &pt(&["1/2"])).unwrap().len(), 2);
        assert_eq!(inner_forms(&sl2, &w, &fr, &pt(&["0"])).unwrap().len(), 1);
        let z = geometric_classes(&w, &fr, CoefficientMode::Zlbar { p: 3, ell: 2 }).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].representative, pt(&["0"]));
        assert_eq!(z[0].merged.len(), 3);
    }

    #[test]
    fn unstable_class_rejected() {
        let gl2 = RootDatum::gl(2);
        let (w, fr) = setup(&gl2, 3, "id");
        assert!(matches!(
            rational_classes(&gl2, &w, &fr, &pt(&["1/5", "0"])),
            Err(RationalityError::NotStableClass(_))
        ));
    }

    #[test]
    fn prime_table_examples() {
        assert!(prime_tables(&RootDatum::gl(3)).unwrap().bad_primes.is_empty());
        assert_eq!(prime_tables(&RootDatum::sp4()).unwrap().bad_primes, vec![2]);
        assert_eq!(prime_tables(&RootDatum::so5()).unwrap().bad_primes, vec![2]);
        assert_eq!(prime_tables(&RootDatum::g2()).unwrap().bad_primes, vec![2, 3]);
        let dual = prime_tables(&RootDatum::sl(2).dual()).unwrap();
        assert!(!dual.condition_l(2));
        assert!(dual.condition_l(3) && dual.condition_l(5));
    }
}
