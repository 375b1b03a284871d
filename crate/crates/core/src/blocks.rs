//! Transporters between semisimple points, their blocks, and the block
//! groupoid of a Weyl orbit.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::rootdata::RootDatum;
use crate::sspoints::{self, PointError, SemisimplePoint, StabilizerData};
use crate::weyl::WeylGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("block {0} has no unique Bruhat {1}")]
    NoUniqueExtremum(String, &'static str),
    #[error("left and right cosets differ in the transporter from {0} to {1}")]
    CosetMismatch(String, String),
    #[error("cannot compose: target {0} differs from source {1}")]
    NotComposable(String, String),
    #[error("products of {0} and {1} do not form a block")]
    ProductNotBlock(String, String),
    #[error("extremal elements do not multiply: {0}")]
    ExtremumMismatch(String),
    #[error("composition is not associative: {0}")]
    AssociativityFailure(String),
    #[error("hom-set {0} is not a simply transitive biset")]
    NotBitorsor(String),
    #[error(transparent)]
    Point(#[from] PointError),
}

impl BlockError {
    pub fn code(&self) -> &'static str {
        match self {
            BlockError::NoUniqueExtremum(..) => "blocks.no_unique_extremum",
            BlockError::CosetMismatch(..) => "blocks.coset_mismatch",
            BlockError::NotComposable(..) => "blocks.not_composable",
            BlockError::ProductNotBlock(..) => "blocks.product_not_block",
            BlockError::ExtremumMismatch(_) => "blocks.extremum_mismatch",
            BlockError::AssociativityFailure(_) => "blocks.associativity_failure",
            BlockError::NotBitorsor(_) => "blocks.not_bitorsor",
            BlockError::Point(e) => e.code(),
        }
    }
}

/// One `W_s°`-coset inside `{w : w s' = s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub source: SemisimplePoint,
    pub target: SemisimplePoint,
    /// Sorted Weyl element indices.
    pub members: Vec<usize>,
    pub w_min: usize,
    pub w_max: usize,
    source_circ: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSummary {
    pub source: SemisimplePoint,
    pub target: SemisimplePoint,
    pub size: usize,
    pub w_min: Vec<usize>,
    pub w_max: Vec<usize>,
}

impl Block {
    pub fn contains(&self, w: usize) -> bool {
        self.members.binary_search(&w).is_ok()
    }

    pub fn summary(&self, w: &WeylGroup) -> BlockSummary {
        BlockSummary {
            source: self.source.clone(),
            target: self.target.clone(),
            size: self.members.len(),
            w_min: w.word(self.w_min).to_vec(),
            w_max: w.word(self.w_max).to_vec(),
        }
    }

    fn label(&self, w: &WeylGroup) -> String {
        format!("{} <- {} at {:?}", self.source, self.target, w.word(self.w_min))
    }
}

/// `{w : w s' = s}`, sorted.
pub fn transporter(w: &WeylGroup, s: &SemisimplePoint, s_prime: &SemisimplePoint) -> Vec<usize> {
    (0..w.order()).filter(|&x| s_prime.act(w.matrix(x)) == *s).collect()
}

fn unique_extremum(w: &WeylGroup, members: &[usize], minimum: bool) -> Option<usize> {
    let found: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&c| {
            members.iter().all(|&x| if minimum { w.bruhat_leq(c, x) } else { w.bruhat_leq(x, c) })
        })
        .collect();
    match found.as_slice() {
        [one] => Some(*one),
        _ => None,
    }
}

/// Splits the transporter from `s'` to `s` into left `W_s°`-cosets and
/// checks that these are also the right `W_{s'}°`-cosets.
pub fn block_decomposition(w: &WeylGroup, src: &StabilizerData, tgt: &StabilizerData) -> Result<Vec<Block>, BlockError> {
    let (s, s_prime) = (&src.point, &tgt.point);
    let trans = transporter(w, s, s_prime);
    let mut seen = BTreeSet::new();
    let mut blocks = Vec::new();
    for &x in &trans {
        if seen.contains(&x) {
            continue;
        }
        let mut left: Vec<usize> = src.w_s_circ.iter().map(|&h| w.mul(h, x)).collect();
        left.sort_unstable();
        let mut right: Vec<usize> = tgt.w_s_circ.iter().map(|&h| w.mul(x, h)).collect();
        right.sort_unstable();
        if left != right {
            return Err(BlockError::CosetMismatch(s.to_string(), s_prime.to_string()));
        }
        seen.extend(left.iter().copied());
        let name = || format!("{s} <- {s_prime} containing {:?}", w.word(x));
        let w_min = unique_extremum(w, &left, true).ok_or_else(|| BlockError::NoUniqueExtremum(name(), "minimum"))?;
        let w_max = unique_extremum(w, &left, false).ok_or_else(|| BlockError::NoUniqueExtremum(name(), "maximum"))?;
        for &m in &left {
            let lengths_ok = w.length(m) >= w.length(w_min) && w.length(m) <= w.length(w_max);
            let strict = (m == w_min || w.length(m) > w.length(w_min)) && (m == w_max || w.length(m) < w.length(w_max));
            if !lengths_ok || !strict {
                return Err(BlockError::NoUniqueExtremum(name(), "length extremum"));
            }
        }
        blocks.push(Block {
            source: s.clone(),
            target: s_prime.clone(),
            members: left,
            w_min,
            w_max,
            source_circ: src.w_s_circ.clone(),
        });
    }
    blocks.sort_by_key(|b| b.w_min);
    Ok(blocks)
}

/// The block containing all products `x y` with `x` in `beta` and `y` in
/// `gamma`, after checking the product identities for the extremal elements.
pub fn compose_blocks(w: &WeylGroup, beta: &Block, gamma: &Block) -> Result<Block, BlockError> {
    if beta.target != gamma.source {
        return Err(BlockError::NotComposable(beta.target.to_string(), gamma.source.to_string()));
    }
    let products: BTreeSet<usize> =
        beta.members.iter().flat_map(|&x| gamma.members.iter().map(move |&y| w.mul(x, y))).collect();
    let base = w.mul(beta.w_min, gamma.w_min);
    let mut coset: Vec<usize> = beta.source_circ.iter().map(|&h| w.mul(h, base)).collect();
    coset.sort_unstable();
    let products: Vec<usize> = products.into_iter().collect();
    if products != coset {
        return Err(BlockError::ProductNotBlock(beta.label(w), gamma.label(w)));
    }
    let ok_target = products.iter().all(|&x| gamma.target.act(w.matrix(x)) == beta.source);
    if !ok_target {
        return Err(BlockError::ProductNotBlock(beta.label(w), gamma.label(w)));
    }
    let w_min = unique_extremum(w, &products, true)
        .ok_or_else(|| BlockError::NoUniqueExtremum(format!("{} * {}", beta.label(w), gamma.label(w)), "minimum"))?;
    let w_max = unique_extremum(w, &products, false)
        .ok_or_else(|| BlockError::NoUniqueExtremum(format!("{} * {}", beta.label(w), gamma.label(w)), "maximum"))?;
    if w_min != base {
        return Err(BlockError::ExtremumMismatch(format!(
            "w_beta w_gamma = {:?} but w_(beta gamma) = {:?}",
            w.word(base),
            w.word(w_min)
        )));
    }
    let top = w.mul(beta.w_min, gamma.w_max);
    if w_max != top {
        return Err(BlockError::ExtremumMismatch(format!(
            "w_beta w^gamma = {:?} but w^(beta gamma) = {:?}",
            w.word(top),
            w.word(w_max)
        )));
    }
    Ok(Block {
        source: beta.source.clone(),
        target: gamma.target.clone(),
        members: products,
        w_min,
        w_max,
        source_circ: beta.source_circ.clone(),
    })
}

/// Blocks between the points of one Weyl orbit with their composition.
#[derive(Clone, Debug)]
pub struct BlockGroupoid {
    pub objects: Vec<SemisimplePoint>,
    pub stabilizers: Vec<StabilizerData>,
    /// Every block, with `(source object, target object)` indices.
    pub blocks: Vec<(usize, usize, Block)>,
    /// `compose[(a, b)]` for composable block indices.
    pub compose: HashMap<(usize, usize), usize>,
    /// Block indices of each hom-set `(source, target)`.
    pub homs: HashMap<(usize, usize), Vec<usize>>,
    pub identities: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupoidSummary {
    pub objects: Vec<SemisimplePoint>,
    pub hom_size: usize,
    pub block_count: usize,
    pub composable_pairs: usize,
}

impl BlockGroupoid {
    pub fn summary(&self) -> GroupoidSummary {
        GroupoidSummary {
            objects: self.objects.clone(),
            hom_size: self.homs.get(&(0, 0)).map_or(0, |h| h.len()),
            block_count: self.blocks.len(),
            composable_pairs: self.compose.len(),
        }
    }

    /// Endomorphism blocks of object `i` form a group; true if it is `Gamma`.
    pub fn endomorphism_order(&self, i: usize) -> usize {
        self.homs[&(i, i)].len()
    }
}

/// Builds the groupoid on the orbit of `s`, checking associativity, units and
/// the biset property of every hom-set.
pub fn build_groupoid(rd: &RootDatum, w: &WeylGroup, s: &SemisimplePoint) -> Result<BlockGroupoid, BlockError> {
    let objects = sspoints::orbit(w, s);
    let stabilizers = objects
        .iter()
        .map(|t| sspoints::stabilizer_data(rd, w, t))
        .collect::<Result<Vec<_>, _>>()?;
    let m = objects.len();
    let mut blocks = Vec::new();
    let mut homs = HashMap::new();
    for i in 0..m {
        for j in 0..m {
            let list = block_decomposition(w, &stabilizers[i], &stabilizers[j])?;
            let ids: Vec<usize> = (blocks.len()..blocks.len() + list.len()).collect();
            blocks.extend(list.into_iter().map(|b| (i, j, b)));
            homs.insert((i, j), ids);
        }
    }
    let find = |i: usize, j: usize, x: usize| -> Option<usize> {
        homs[&(i, j)].iter().copied().find(|&b| blocks[b].2.contains(x))
    };
    let mut compose = HashMap::new();
    for a in 0..blocks.len() {
        for b in 0..blocks.len() {
            let (i, j, ref ba) = blocks[a];
            let (j2, k, ref bb) = blocks[b];
            if j != j2 {
                continue;
            }
            let prod = compose_blocks(w, ba, bb)?;
            let c = find(i, k, prod.w_min).ok_or_else(|| BlockError::ProductNotBlock(ba.label(w), bb.label(w)))?;
            if blocks[c].2.members != prod.members {
                return Err(BlockError::ProductNotBlock(ba.label(w), bb.label(w)));
            }
            compose.insert((a, b), c);
        }
    }
    let identities: Vec<usize> = (0..m)
        .map(|i| find(i, i, w.identity()).expect("identity lies in the stabilizer"))
        .collect();
    for (id_obj, &e) in identities.iter().enumerate() {
        for (x, (i, j, _)) in blocks.iter().enumerate() {
            if *i == id_obj && compose[&(e, x)] != x {
                return Err(BlockError::AssociativityFailure(format!("left unit fails at object {id_obj}")));
            }
            if *j == id_obj && compose[&(x, e)] != x {
                return Err(BlockError::AssociativityFailure(format!("right unit fails at object {id_obj}")));
            }
        }
    }
    for (&(a, b), &ab) in &compose {
        for c in 0..blocks.len() {
            if let (Some(&abc), Some(&bc)) = (compose.get(&(ab, c)), compose.get(&(b, c))) {
                if compose[&(a, bc)] != abc {
                    return Err(BlockError::AssociativityFailure(format!("blocks {a}, {b}, {c}")));
                }
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            let hom = &homs[&(i, j)];
            let gamma_i = stabilizers[i].gamma.order();
            let gamma_j = stabilizers[j].gamma.order();
            let label = || format!("{} <- {}", objects[i], objects[j]);
            if hom.len() != gamma_i || hom.len() != gamma_j || homs[&(i, i)].len() != gamma_i {
                return Err(BlockError::NotBitorsor(label()));
            }
            let base = hom[0];
            let left: BTreeSet<usize> = homs[&(i, i)].iter().map(|&g| compose[&(g, base)]).collect();
            let right: BTreeSet<usize> = homs[&(j, j)].iter().map(|&g| compose[&(base, g)]).collect();
            let all: BTreeSet<usize> = hom.iter().copied().collect();
            if left != all || right != all {
                return Err(BlockError::NotBitorsor(label()));
            }
        }
    }
    Ok(BlockGroupoid { objects, stabilizers, blocks, compose, homs, identities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sspoints::stabilizer_data;

    fn pt(c: &[&str]) -> SemisimplePoint {
        SemisimplePoint::parse(c).unwrap()
    }

    #[test]
    fn sl2_blocks() {
        let rd = RootDatum::sl(2);
        let w = WeylGroup::enumerate(&rd).unwrap();
        let half = stabilizer_data(&rd, &w, &pt(&["1/2"])).unwrap();
        let bl = block_decomposition(&w, &half, &half).unwrap();
        assert_eq!(bl.len(), 2);
        assert_eq!(bl[0].members, vec![0]);
        assert_eq!(bl[1].members, vec![1]);
        assert_eq!(compose_blocks(&w, &bl[1], &bl[1]).unwrap().members, vec![0]);
        let zero = stabilizer_data(&rd, &w, &pt(&["0"])).unwrap();
        let bl = block_decomposition(&w, &zero, &zero).unwrap();
        assert_eq!(bl.len(), 1);
        assert_eq!((bl[0].w_min, bl[0].w_max), (0, 1));
        let g = build_groupoid(&rd, &w, &pt(&["1/2"])).unwrap();
        assert_eq!(g.objects.len(), 1);
        assert_eq!(g.blocks.len(), 2);
        assert_eq!(g.compose[&(1, 1)], 0);
        assert_eq!(build_groupoid(&rd, &w, &pt(&["0"])).unwrap().blocks.len(), 1);
    }

    #[test]
    fn gl2_offdiagonal_blocks() {
        let rd = RootDatum::gl(2);
        let w = WeylGroup::enumerate(&rd).unwrap();
        let a = stabilizer_data(&rd, &w, &pt(&["1/3", "2/3"])).unwrap();
        let b = stabilizer_data(&rd, &w, &pt(&["2/3", "1/3"])).unwrap();
        let bl = block_decomposition(&w, &a, &b).unwrap();
        assert_eq!(bl.len(), 1);
        assert_eq!(bl[0].members, vec![1]);
        let g = build_groupoid(&rd, &w, &pt(&["1/3", "2/3"])).unwrap();
        assert_eq!(g.objects.len(), 2);
        assert!(g.homs.values().all(|h| h.len() == 1));
        let c = stabilizer_data(&rd, &w, &pt(&["1/3", "0"])).unwrap();
        assert!(block_decomposition(&w, &a, &c).unwrap().is_empty());
    }

    #[test]
    fn identity_block_is_unit() {
        let rd = RootDatum::sl(3);
        let w = WeylGroup::enumerate(&rd).unwrap();
        let s = pt(&["1/3", "1/3"]);
        let g = build_groupoid(&rd, &w, &s).unwrap();
        for (i, &e) in g.identities.iter().enumerate() {
            assert!(g.blocks[e].2.contains(0));
            assert_eq!(g.blocks[e].2.members, g.stabilizers[i].w_s_circ);
        }
    }

    #[test]
    fn not_composable() {
        let rd = RootDatum::gl(2);
        let w = WeylGroup::enumerate(&rd).unwrap();
        let a = stabilizer_data(&rd, &w, &pt(&["1/3", "2/3"])).unwrap();
        let b = stabilizer_data(&rd, &w, &pt(&["2/3", "1/3"])).unwrap();
        let ab = &block_decomposition(&w, &a, &b).unwrap()[0];
        assert!(matches!(compose_blocks(&w, ab, ab), Err(BlockError::NotComposable(..))));
    }
}
