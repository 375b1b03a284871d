//! Centralizer root data and endoscopic data of semisimple points.
//!
//! For a point `s`, the roots `Phi_s` with `<s, alpha^vee> = 0` and their
//! coroots form a sub-datum `(X*, X_*, Phi_s, Phi_s^vee)` of the datum of `G`
//! based by `Delta_s`. This is the datum of the endoscopic group `H_s°`; its
//! dual `(X_*, X*, Phi_s^vee, Phi_s)` is the datum of the connected
//! centralizer of `s` in the dual group.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{FiniteAbelianGroup, IntMatrix};
use crate::rootdata::{RootDatum, RootDatumError};
use crate::sspoints::{self, PointError, SemisimplePoint, StabilizerData};
use crate::weyl::{WeylError, WeylGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndoscopyError {
    #[error("compatibility failure: {0}")]
    CompatibilityFailure(String),
    #[error(transparent)]
    Datum(#[from] RootDatumError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

impl EndoscopyError {
    pub fn code(&self) -> &'static str {
        match self {
            EndoscopyError::CompatibilityFailure(_) => "endoscopy.compatibility_failure",
            EndoscopyError::Datum(e) => e.code(),
            EndoscopyError::Point(e) => e.code(),
            EndoscopyError::Weyl(e) => e.code(),
        }
    }
}

type Result<T> = std::result::Result<T, EndoscopyError>;

/// `(X*, X_*, Phi_s, Phi_s^vee)` based by `Delta_s`; equal to `rd` at `s = 0`.
pub fn centralizer_datum(rd: &RootDatum, stab: &StabilizerData) -> Result<RootDatum> {
    let sub = rd.subdatum(&stab.delta_s)?;
    let got: BTreeSet<&[i64]> = sub.roots().iter().map(|v| v.as_slice()).collect();
    let want: BTreeSet<&[i64]> = stab.phi_s.iter().map(|&i| rd.root(i)).collect();
    if got != want {
        return Err(EndoscopyError::CompatibilityFailure(format!(
            "Delta_s at {} does not generate Phi_s",
            stab.point
        )));
    }
    Ok(sub)
}

#[derive(Clone, Debug)]
pub struct EndoscopicDatum {
    pub point: SemisimplePoint,
    /// `(X*, X_*, Phi_s, Phi_s^vee)`: the endoscopic group `H_s°`, pinned
    /// relative to `G`.
    pub h_datum: RootDatum,
    /// `(X_*, X*, Phi_s^vee, Phi_s)`: the connected centralizer of `s` in the
    /// dual group.
    pub centralizer_datum: RootDatum,
    pub gamma: FiniteAbelianGroup,
    /// Root of `G` (index) for each simple root of `H`, in order.
    pub relative_pinning: Vec<usize>,
    /// For each element of `Gamma_s` (in coset order), the permutation it
    /// induces on the simple roots of `H`.
    pub gamma_action: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoscopySummary {
    pub point: SemisimplePoint,
    pub h_type: String,
    pub centralizer_type: String,
    pub h_weyl_order: usize,
    pub pi0: String,
    pub pi0_order: u64,
    pub relative_pinning: Vec<Vec<i64>>,
}

impl EndoscopicDatum {
    pub fn summary(&self, rd: &RootDatum) -> EndoscopySummary {
        let label = |d: &RootDatum| d.classify().map(|c| c.label()).unwrap_or_else(|e| e.to_string());
        EndoscopySummary {
            point: self.point.clone(),
            h_type: label(&self.h_datum),
            centralizer_type: label(&self.centralizer_datum),
            h_weyl_order: WeylGroup::enumerate(&self.h_datum).map(|w| w.order()).unwrap_or(0),
            pi0: self.gamma.to_string(),
            pi0_order: self.gamma.order(),
            relative_pinning: self.relative_pinning.iter().map(|&i| rd.root(i).to_vec()).collect(),
        }
    }
}

pub fn endoscopic_group(rd: &RootDatum, w: &WeylGroup, stab: &StabilizerData) -> Result<EndoscopicDatum> {
    let h = centralizer_datum(rd, stab)?;
    let z = h.dual();
    let relative_pinning = stab.delta_s.clone();
    let mut gamma_action = Vec::with_capacity(stab.gamma.order());
    for &rep in &stab.gamma.reps {
        let perm: Option<Vec<usize>> = stab
            .delta_s
            .iter()
            .map(|&a| {
                let image = w.act_on_root(rep, a);
                stab.delta_s.iter().position(|&b| b == image)
            })
            .collect();
        let perm = perm.ok_or_else(|| {
            EndoscopyError::CompatibilityFailure(format!(
                "component representative {:?} does not preserve Delta_s at {}",
                w.word(rep),
                stab.point
            ))
        })?;
        gamma_action.push(perm);
    }
    // the action must be a homomorphism Gamma_s -> Sym(Delta_s)
    let k = stab.gamma.order();
    for a in 0..k {
        for b in 0..k {
            let ab = stab.gamma.mul(a, b);
            let composed: Vec<usize> = gamma_action[b].iter().map(|&i| gamma_action[a][i]).collect();
            if composed != gamma_action[ab] {
                return Err(EndoscopyError::CompatibilityFailure(format!(
                    "Gamma_s action on Delta_s is not multiplicative at {}",
                    stab.point
                )));
            }
        }
    }
    Ok(EndoscopicDatum {
        point: stab.point.clone(),
        h_datum: h,
        centralizer_datum: z,
        gamma: stab.gamma.structure.clone(),
        relative_pinning,
        gamma_action,
    })
}

/// Checks the two structural identities relating the endoscopic datum to the
/// stabilizer: the dual of `h_datum` is the centralizer datum, and the Weyl
/// group of `h_datum` is `W_s°` (same matrices on `X*`).
pub fn check_duality(w: &WeylGroup, stab: &StabilizerData, e: &EndoscopicDatum) -> Result<()> {
    if e.h_datum.dual() != e.centralizer_datum || !e.centralizer_datum.dual().same_as(&e.h_datum) {
        return Err(EndoscopyError::CompatibilityFailure(format!("dual(h_datum) differs at {}", stab.point)));
    }
    let wh = WeylGroup::enumerate(&e.h_datum)?;
    if wh.order() != stab.w_s_circ.len() {
        return Err(EndoscopyError::CompatibilityFailure(format!(
            "|W(H)| = {} but |W_s°| = {} at {}",
            wh.order(),
            stab.w_s_circ.len(),
            stab.point
        )));
    }
    let from_h: BTreeSet<usize> = wh
        .elements()
        .iter()
        .map(|x| w.index_of(&x.matrix).ok_or_else(|| EndoscopyError::CompatibilityFailure("W(H) not inside W".into())))
        .collect::<Result<_>>()?;
    let circ: BTreeSet<usize> = stab.w_s_circ.iter().copied().collect();
    if from_h != circ {
        return Err(EndoscopyError::CompatibilityFailure(format!("W(H) differs from W_s° at {}", stab.point)));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeviReport {
    pub subset: Vec<usize>,
    pub levi_type: String,
    pub phi_s_levi: usize,
    pub phi_s_group: usize,
    pub gamma_levi_order: usize,
    pub gamma_group_order: usize,
    /// Image in `Gamma_s^G` of each element of `Gamma_s^L`.
    pub gamma_map: Vec<usize>,
    pub h_levi_type: String,
}

/// Compares the data of `s` in the standard Levi on `subset` with the data in
/// the whole group.
pub fn levi_compatibility(rd: &RootDatum, s: &SemisimplePoint, subset: &[usize]) -> Result<LeviReport> {
    let fail = |m: String| EndoscopyError::CompatibilityFailure(m);
    let w = WeylGroup::enumerate(rd)?;
    let l = rd.levi(subset)?;
    let wl = WeylGroup::enumerate(&l)?;
    let sg = sspoints::stabilizer_data(rd, &w, s)?;
    let sl = sspoints::stabilizer_data(&l, &wl, s)?;

    let phi_l: BTreeSet<&[i64]> = l.roots().iter().map(|v| v.as_slice()).collect();
    let lhs: BTreeSet<&[i64]> = sl.phi_s.iter().map(|&i| l.root(i)).collect();
    let rhs: BTreeSet<&[i64]> =
        sg.phi_s.iter().map(|&i| rd.root(i)).filter(|v| phi_l.contains(v)).collect();
    if lhs != rhs {
        return Err(fail(format!("Phi_s(L) != Phi_s(G) ∩ Phi(L) at {s}")));
    }

    let to_g = |x: usize| -> Result<usize> {
        w.index_of(wl.matrix(x)).ok_or_else(|| fail("W_L is not inside W".into()))
    };
    let mut gamma_map = Vec::with_capacity(sl.gamma.order());
    for &rep in &sl.gamma.reps {
        let c = sg.gamma.coset_of(to_g(rep)?).ok_or_else(|| fail(format!("W_s(L) not inside W_s(G) at {s}")))?;
        gamma_map.push(c);
    }
    // coset compatibility: every member of an L-coset lands in the same G-coset
    for &x in &sl.w_s {
        let cl = sl.gamma.coset_of(x).unwrap();
        if sg.gamma.coset_of(to_g(x)?) != Some(gamma_map[cl]) {
            return Err(fail(format!("Gamma_s(L) -> Gamma_s(G) is not well defined at {s}")));
        }
    }
    let k = sl.gamma.order();
    for a in 0..k {
        for b in 0..k {
            if gamma_map[sl.gamma.mul(a, b)] != sg.gamma.mul(gamma_map[a], gamma_map[b]) {
                return Err(fail(format!("Gamma_s(L) -> Gamma_s(G) is not a homomorphism at {s}")));
            }
        }
    }

    // Levi-type: Phi_s(G) ∩ Q-span(Phi_s(L)) = Phi_s(L)
    let span_rank = |vs: &[Vec<i64>]| if vs.is_empty() { 0 } else { IntMatrix::from_rows(vs).rank() };
    let base: Vec<Vec<i64>> = lhs.iter().map(|v| v.to_vec()).collect();
    let r0 = span_rank(&base);
    for &i in &sg.phi_s {
        let mut ext = base.clone();
        ext.push(rd.root(i).to_vec());
        let in_span = span_rank(&ext) == r0;
        if in_span != lhs.contains(rd.root(i)) {
            return Err(fail(format!("H_s(L) is not a Levi of H_s(G) at {s}")));
        }
    }
    let label = |d: &RootDatum| d.classify().map(|c| c.label()).unwrap_or_default();
    Ok(LeviReport {
        subset: subset.to_vec(),
        levi_type: label(&l),
        phi_s_levi: sl.phi_s.len(),
        phi_s_group: sg.phi_s.len(),
        gamma_levi_order: sl.gamma.order(),
        gamma_group_order: sg.gamma.order(),
        gamma_map,
        h_levi_type: label(&centralizer_datum(&l, &sl)?),
    })
}
