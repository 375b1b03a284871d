//! Finite tori `T^{wF}`, the point-level spectral Curtis maps, and the
//! comparison between `X // W` and `F`-stable orbits.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

pub use crate::lattice::{smith_normal_form, FiniteAbelianGroup};
use crate::lattice::{self, IntMatrix};
use crate::rationality::{self, FrobeniusDatum, GeometricClass, RationalityError};
use crate::rootdata::RootDatum;
use crate::sspoints::{self, CoefficientMode, PointError, SemisimplePoint};
use crate::weyl::WeylGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurtisError {
    #[error("count mismatch: {0}")]
    CountMismatch(String),
    #[error("spectral Curtis map is not injective: class {0} meets no Fix(wF)")]
    InjectivityFailure(String),
    #[error("orbit bijection fails: {0}")]
    BijectionFailure(String),
    #[error(transparent)]
    Rationality(#[from] RationalityError),
    #[error(transparent)]
    Point(#[from] PointError),
}

impl CurtisError {
    pub fn code(&self) -> &'static str {
        match self {
            CurtisError::CountMismatch(_) => "curtis.count_mismatch",
            CurtisError::InjectivityFailure(_) => "curtis.injectivity_failure",
            CurtisError::BijectionFailure(_) => "curtis.bijection_failure",
            CurtisError::Rationality(e) => e.code(),
            CurtisError::Point(e) => e.code(),
        }
    }
}

type Result<T> = std::result::Result<T, CurtisError>;

/// `coker(wF - 1)` on `X_*`, after checking that its order equals
/// `|det(wF - 1)|` and the number of points fixed by `wF` on `X* ⊗ Q/Z`.
pub fn fixed_torus(w: &WeylGroup, fr: &FrobeniusDatum, x: usize) -> Result<FiniteAbelianGroup> {
    let n = w.rank();
    let a = fr.wf_cochar(w, x).sub(&IntMatrix::identity(n));
    let g = FiniteAbelianGroup::cokernel(&a);
    let det = a.det().unsigned_abs();
    let fix = rationality::fixed_points(w, fr, x)?.len() as u64;
    if !g.is_finite() || g.order() != det || det != fix {
        return Err(CurtisError::CountMismatch(format!(
            "w = {:?}: |coker| = {}, |det| = {det}, |Fix| = {fix}",
            w.word(x),
            g.order()
        )));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusEntry {
    pub word: Vec<usize>,
    pub length: usize,
    pub invariant_factors: Vec<u64>,
    pub order: u64,
}

pub fn torus_table(w: &WeylGroup, fr: &FrobeniusDatum) -> Result<Vec<TorusEntry>> {
    (0..w.order())
        .map(|x| {
            let g = fixed_torus(w, fr, x)?;
            Ok(TorusEntry { word: w.word(x).to_vec(), length: w.length(x), order: g.order(), invariant_factors: g.invariant_factors })
        })
        .collect()
}

/// `(|T^{wF}|, l(w))`: the rank of the free module `Lambda[T^{wF}]` and the
/// magnitude of the cohomological shift of the restricted Gelfand-Graev
/// module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GgShadow {
    pub rank: u64,
    pub shift: usize,
}

pub fn gg_restriction_shadow(w: &WeylGroup, fr: &FrobeniusDatum, x: usize) -> Result<GgShadow> {
    Ok(GgShadow { rank: fixed_torus(w, fr, x)?.order(), shift: w.length(x) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurtisRow {
    pub word: Vec<usize>,
    /// For each class (in table order) the fixed points of `wF` in it.
    pub images: Vec<Vec<SemisimplePoint>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurtisTable {
    pub classes: Vec<SemisimplePoint>,
    pub per_w_images: Vec<CurtisRow>,
    pub injectivity_certificate: bool,
    /// For each class, the first `w` (reduced word) whose fixed points meet it.
    pub witnesses: Vec<Vec<usize>>,
    /// Sending each image point back to its class recovers the class.
    pub commuting_square: bool,
}

/// Restriction along point-to-class for every `w`, with the injectivity
/// certificate for the sum over `w`.
pub fn curtis_spectral(w: &WeylGroup, fr: &FrobeniusDatum) -> Result<CurtisTable> {
    let classes = rationality::geometric_classes(w, fr, CoefficientMode::Qlbar { p: fr.p })?;
    let reps: Vec<SemisimplePoint> = classes.iter().map(|c| c.representative.clone()).collect();
    let mut class_of: BTreeMap<SemisimplePoint, usize> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        for m in &c.members {
            class_of.insert(m.clone(), i);
        }
    }
    let mut rows = Vec::with_capacity(w.order());
    let mut witnesses: Vec<Option<Vec<usize>>> = vec![None; classes.len()];
    let mut square = true;
    for x in 0..w.order() {
        let fix = rationality::fixed_points(w, fr, x)?;
        let mut images = vec![Vec::new(); classes.len()];
        for p in &fix {
            let c = *class_of
                .get(p)
                .ok_or_else(|| CurtisError::CountMismatch(format!("fixed point {p} lies in no class")))?;
            images[c].push(p.clone());
        }
        let total: usize = images.iter().map(|v| v.len()).sum();
        if total != fix.len() {
            return Err(CurtisError::CountMismatch(format!("images do not partition Fix(wF) for {:?}", w.word(x))));
        }
        for (c, img) in images.iter().enumerate() {
            if !img.is_empty() && witnesses[c].is_none() {
                witnesses[c] = Some(w.word(x).to_vec());
            }
            square &= img.iter().all(|p| sspoints::canonical_representative(w, p) == reps[c]);
        }
        if x == w.identity() {
            // diagonal classes meet Fix(F) exactly in their F-fixed points
            for (c, img) in images.iter().enumerate() {
                let fixed: Vec<SemisimplePoint> =
                    classes[c].members.iter().filter(|m| fr.apply(m) == **m).cloned().collect();
                square &= *img == fixed;
            }
        }
        rows.push(CurtisRow { word: w.word(x).to_vec(), images });
    }
    let witnesses = witnesses
        .into_iter()
        .enumerate()
        .map(|(c, wit)| wit.ok_or_else(|| CurtisError::InjectivityFailure(reps[c].to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurtisTable { classes: reps, per_w_images: rows, injectivity_certificate: true, witnesses, commuting_square: square })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitBijectionReport {
    /// `W`-orbits of `X = ∪_w Fix(wF)`.
    pub x_orbits: usize,
    /// `F`-stable `W`-orbits found by an independent sweep over all points
    /// of order dividing `sweep_modulus`.
    pub stable_orbits: usize,
    pub geometric_classes: usize,
    pub sweep_modulus: u64,
}

/// Compares the orbits of `X` with the `F`-stable orbits of torsion points.
pub fn x_orbit_bijection(rd: &RootDatum, w: &WeylGroup, fr: &FrobeniusDatum, cap: u64) -> Result<OrbitBijectionReport> {
    let n = rd.rank();
    let mut modulus = 1u64;
    for x in 0..w.order() {
        let d = fr.wf_char(w, x).sub(&IntMatrix::identity(n)).det().unsigned_abs();
        modulus = lattice::lcm_all([modulus, d]);
    }
    let x_reps: BTreeSet<SemisimplePoint> =
        rationality::x_points(w, fr)?.iter().map(|s| sspoints::canonical_representative(w, s)).collect();
    let sweep = sspoints::enumerate_points_with_cap(rd, modulus, CoefficientMode::Qlbar { p: fr.p }, cap)?;
    let mut stable = BTreeSet::new();
    let mut done = BTreeSet::new();
    for s in sweep {
        if done.contains(&s) {
            continue;
        }
        let orbit = sspoints::orbit(w, &s);
        let fs = fr.apply(&s);
        if orbit.binary_search(&fs).is_ok() {
            stable.insert(orbit[0].clone());
        }
        done.extend(orbit);
    }
    let geo: BTreeSet<SemisimplePoint> = rationality::geometric_classes(w, fr, CoefficientMode::Qlbar { p: fr.p })?
        .into_iter()
        .map(|c: GeometricClass| c.representative)
        .collect();
    if x_reps != stable || stable != geo {
        return Err(CurtisError::BijectionFailure(format!(
            "{} orbits of X, {} F-stable orbits, {} geometric classes",
            x_reps.len(),
            stable.len(),
            geo.len()
        )));
    }
    Ok(OrbitBijectionReport { x_orbits: x_reps.len(), stable_orbits: stable.len(), geometric_classes: geo.len(), sweep_modulus: modulus })
}
