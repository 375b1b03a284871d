//! Torsion points of `X* ⊗ Q/Z`, their root subsystems, stabilizers and
//! component groups.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{FiniteAbelianGroup, IntMatrix};
use crate::rootdata::{FundamentalGroupMode, RootDatum};
use crate::weyl::WeylGroup;

/// Default bound on the size of a point search grid.
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointError {
    #[error("component group is not abelian at {0}")]
    NonAbelianComponentGroup(String),
    #[error("W_s° is not normal in W_s at {0}")]
    NotNormal(String),
    #[error("|Gamma_s| = {gamma} does not divide |pi_1| = {pi1}")]
    BoundViolated { gamma: u64, pi1: u64 },
    #[error("search space of {0} points exceeds the cap")]
    SearchTooLarge(u64),
    #[error("order {order} is not prime to {prime}")]
    OrderNotCoprime { order: u64, prime: u64 },
    #[error("cannot parse point coordinate {0:?}")]
    Parse(String),
    #[error("point has {got} coordinates, expected {expected}")]
    Dimension { got: usize, expected: usize },
}

impl PointError {
    pub fn code(&self) -> &'static str {
        match self {
            PointError::NonAbelianComponentGroup(_) => "sspoints.non_abelian_component_group",
            PointError::NotNormal(_) => "sspoints.not_normal",
            PointError::BoundViolated { .. } => "sspoints.bound_violated",
            PointError::SearchTooLarge(_) => "sspoints.search_too_large",
            PointError::OrderNotCoprime { .. } => "sspoints.order_not_coprime",
            PointError::Parse(_) => "sspoints.parse",
            PointError::Dimension { .. } => "sspoints.dimension",
        }
    }
}

/// An element of `Q/Z`, stored as a reduced fraction `num/den` with
/// `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QmodZ {
    pub num: u64,
    pub den: u64,
}

impl QmodZ {
    pub fn new(num: i64, den: u64) -> Self {
        let d = den as i64;
        let n = num.rem_euclid(d);
        let g = n.gcd(&d).max(1);
        QmodZ { num: (n / g) as u64, den: (d / g) as u64 }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Where coefficients live: `Qbar_ell` needs orders prime to `p`; `Zbar_ell`
/// additionally prime to `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoefficientMode {
    Qlbar { p: u64 },
    Zlbar { p: u64, ell: u64 },
}

impl CoefficientMode {
    pub fn p(&self) -> u64 {
        match *self {
            CoefficientMode::Qlbar { p } | CoefficientMode::Zlbar { p, .. } => p,
        }
    }

    pub fn ell(&self) -> Option<u64> {
        match *self {
            CoefficientMode::Qlbar { .. } => None,
            CoefficientMode::Zlbar { ell, .. } => Some(ell),
        }
    }

    pub fn admits(&self, order: u64) -> Result<(), PointError> {
        let p = self.p();
        if order.gcd(&p) != 1 {
            return Err(PointError::OrderNotCoprime { order, prime: p });
        }
        if let Some(ell) = self.ell() {
            if order.gcd(&ell) != 1 {
                return Err(PointError::OrderNotCoprime { order, prime: ell });
            }
        }
        Ok(())
    }
}

/// A torsion point of `X* ⊗ Q/Z`, stored as `nums / order` with every
/// numerator in `[0, order)` and `order` minimal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SemisimplePoint {
    order: u64,
    nums: Vec<u64>,
}

impl SemisimplePoint {
    pub fn zero(rank: usize) -> Self {
        SemisimplePoint { order: 1, nums: vec![0; rank] }
    }

    /// The point `nums / den` (numerators taken modulo `den`).
    pub fn new(den: u64, nums: &[i64]) -> Self {
        assert!(den >= 1);
        let d = den as i64;
        let reduced: Vec<i64> = nums.iter().map(|x| x.rem_euclid(d)).collect();
        let g = reduced.iter().fold(d, |g, x| g.gcd(x));
        SemisimplePoint { order: (d / g) as u64, nums: reduced.iter().map(|x| (x / g) as u64).collect() }
    }

    pub fn from_fractions(fracs: &[QmodZ]) -> Self {
        let den = crate::lattice::lcm_all(fracs.iter().map(|f| f.den));
        let nums: Vec<i64> = fracs.iter().map(|f| (f.num * (den / f.den)) as i64).collect();
        Self::new(den, &nums)
    }

    /// Parses coordinates such as `"1/3"`, `"0"`, `"-1/2"`.
    pub fn parse(coords: &[&str]) -> Result<Self, PointError> {
        let fracs = coords.iter().map(|c| parse_fraction(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_fractions(&fracs))
    }

    pub fn rank(&self) -> usize {
        self.nums.len()
    }

    /// Least common multiple of the coordinate denominators.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn numerators(&self) -> &[u64] {
        &self.nums
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1
    }

    pub fn coord(&self, i: usize) -> QmodZ {
        QmodZ::new(self.nums[i] as i64, self.order)
    }

    pub fn coords(&self) -> Vec<QmodZ> {
        (0..self.rank()).map(|i| self.coord(i)).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords().iter().map(|c| c.to_string()).collect()
    }

    /// Applies an integer matrix acting on `X*`.
    pub fn act(&self, m: &IntMatrix) -> Self {
        let nums: Vec<i64> = self.nums.iter().map(|&x| x as i64).collect();
        Self::new(self.order, &m.apply(&nums))
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = self.order.lcm(&other.order);
        let (a, b) = (den / self.order, den / other.order);
        let nums: Vec<i64> = self.nums.iter().zip(&other.nums).map(|(x, y)| (x * a + y * b) as i64).collect();
        Self::new(den, &nums)
    }

    pub fn neg(&self) -> Self {
        let nums: Vec<i64> = self.nums.iter().map(|&x| -(x as i64)).collect();
        Self::new(self.order, &nums)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        let nums: Vec<i64> = self.nums.iter().map(|&x| (x as i64).wrapping_mul(k).rem_euclid(self.order as i64)).collect();
        Self::new(self.order, &nums)
    }

    /// `<s, y>` for a cocharacter `y`, reduced modulo `Z`.
    pub fn pair(&self, y: &[i64]) -> QmodZ {
        let d = self.order as i128;
        let s: i128 = self.nums.iter().zip(y).map(|(&a, &b)| a as i128 * b as i128).sum();
        QmodZ::new(s.rem_euclid(d) as i64, self.order)
    }
}

fn parse_fraction(s: &str) -> Result<QmodZ, PointError> {
    let err = || PointError::Parse(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| err())?, d.trim().parse::<u64>().map_err(|_| err())?),
        None => (t.parse::<i64>().map_err(|_| err())?, 1),
    };
    if d == 0 {
        return Err(err());
    }
    Ok(QmodZ::new(n, d))
}

impl Ord for SemisimplePoint {
    /// Lexicographic on the coordinates as rationals in `[0, 1)`.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.nums.iter().zip(&other.nums) {
            let l = *a as u128 * other.order as u128;
            let r = *b as u128 * self.order as u128;
            match l.cmp(&r) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.nums.len().cmp(&other.nums.len())
    }
}

impl PartialOrd for SemisimplePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SemisimplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl fmt::Display for SemisimplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for SemisimplePoint {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SemisimplePoint {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(de)?;
        let refs: Vec<&str> = v.iter().map(|s| s.as_str()).collect();
        SemisimplePoint::parse(&refs).map_err(serde::de::Error::custom)
    }
}

/// `<s, alpha^vee>` in `Q/Z`.
pub fn coroot_eval(s: &SemisimplePoint, coroot: &[i64]) -> QmodZ {
    s.pair(coroot)
}

/// A finite group given as the cosets of a normal subgroup, with a
/// multiplication table on coset indices. Coset 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentGroup {
    /// Shortest (then lexicographically least) Weyl element of each coset.
    pub reps: Vec<usize>,
    pub table: Vec<Vec<usize>>,
    pub structure: FiniteAbelianGroup,
    #[serde(skip)]
    coset_of: HashMap<usize, usize>,
}

impl ComponentGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("group table has inverses")
    }

    /// Coset containing the Weyl element `w` (which must lie in `W_s`).
    pub fn coset_of(&self, w: usize) -> Option<usize> {
        self.coset_of.get(&w).copied()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = self.table[x][a];
            k += 1;
        }
        k
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Quotient `big / normal` where both are sorted index lists of Weyl
    /// elements and `normal` is a normal subgroup of `big`.
    pub fn quotient(w: &WeylGroup, big: &[usize], normal: &[usize]) -> Result<ComponentGroup, String> {
        let normal_set: BTreeSet<usize> = normal.iter().copied().collect();
        for &g in big {
            let gi = w.inverse(g);
            for &n in normal {
                if !normal_set.contains(&w.mul(w.mul(g, n), gi)) {
                    return Err(format!("conjugate of {:?} by {:?} leaves the subgroup", w.word(n), w.word(g)));
                }
            }
        }
        let mut coset_of = HashMap::new();
        let mut reps = Vec::new();
        // `big` is sorted by index, i.e. by length then word.
        for &g in big {
            if coset_of.contains_key(&g) {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &n in normal {
                coset_of.insert(w.mul(g, n), c);
            }
        }
        let k = reps.len();
        let table: Vec<Vec<usize>> = (0..k)
            .map(|a| (0..k).map(|b| coset_of[&w.mul(reps[a], reps[b])]).collect())
            .collect();
        let mut g = ComponentGroup { reps, table, structure: FiniteAbelianGroup::trivial(), coset_of };
        if g.is_commutative() {
            g.structure = abelian_invariants(&g.table);
        }
        Ok(g)
    }
}

/// Invariant factors of a finite abelian group from its multiplication table.
pub fn abelian_invariants(table: &[Vec<usize>]) -> FiniteAbelianGroup {
    let n = table.len();
    let power = |a: usize, k: u64| -> usize {
        let mut x = 0;
        for _ in 0..k {
            x = table[x][a];
        }
        x
    };
    let mut cyclic: Vec<u64> = Vec::new();
    let mut m = n as u64;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            // n_j = log_p #{x : p^j x = 0}; factors of order >= p^j number n_j - n_{j-1}
            let mut logs = vec![0u32];
            let mut pj = 1u64;
            loop {
                pj *= p;
                let count = (0..n).filter(|&a| power(a, pj) == 0).count() as u64;
                let mut l = 0;
                let mut c = count;
                while c > 1 {
                    c /= p;
                    l += 1;
                }
                if l == *logs.last().unwrap() {
                    break;
                }
                logs.push(l);
            }
            let top = logs.len() - 1;
            for j in 1..=top {
                let at_least_j = logs[j] - logs[j - 1];
                let at_least_next = if j < top { logs[j + 1] - logs[j] } else { 0 };
                for _ in 0..(at_least_j - at_least_next) {
                    cyclic.push(p.pow(j as u32));
                }
            }
        }
        p += 1;
    }
    FiniteAbelianGroup::from_cyclic_orders(&cyclic)
}

/// The root subsystem of a point and its Weyl-group data.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerData {
    pub point: SemisimplePoint,
    /// Roots `alpha` with `<s, alpha^vee> = 0`.
    pub phi_s: Vec<usize>,
    pub delta_s: Vec<usize>,
    pub w_s: Vec<usize>,
    pub w_s_circ: Vec<usize>,
    pub gamma: ComponentGroup,
}

impl StabilizerData {
    pub fn positive_roots(&self, rd: &RootDatum) -> Vec<usize> {
        self.phi_s.iter().copied().filter(|&i| rd.is_positive(i)).collect()
    }

    pub fn contains_root(&self, i: usize) -> bool {
        self.phi_s.binary_search(&i).is_ok()
    }

    pub fn in_w_s_circ(&self, w: usize) -> bool {
        self.w_s_circ.binary_search(&w).is_ok()
    }
}

pub fn stabilizer_data(rd: &RootDatum, w: &WeylGroup, s: &SemisimplePoint) -> Result<StabilizerData, PointError> {
    if s.rank() != rd.rank() {
        return Err(PointError::Dimension { got: s.rank(), expected: rd.rank() });
    }
    let phi_s: Vec<usize> = (0..rd.num_roots()).filter(|&i| coroot_eval(s, rd.coroot(i)).is_zero()).collect();
    let delta_s = simple_subsystem(rd, &phi_s);
    let w_s: Vec<usize> = (0..w.order()).filter(|&x| s.act(w.matrix(x)) == *s).collect();
    let refl: Vec<usize> = delta_s.iter().map(|&i| w.reflection(i)).collect();
    let w_s_circ = w.generate_subgroup(&refl);
    let gamma = ComponentGroup::quotient(w, &w_s, &w_s_circ).map_err(|e| PointError::NotNormal(format!("{s}: {e}")))?;
    if !gamma.is_commutative() {
        return Err(PointError::NonAbelianComponentGroup(s.to_string()));
    }
    Ok(StabilizerData { point: s.clone(), phi_s, delta_s, w_s, w_s_circ, gamma })
}

/// Positive roots of the subsystem that are not a sum of two positive roots
/// of the subsystem.
pub fn simple_subsystem(rd: &RootDatum, subsystem: &[usize]) -> Vec<usize> {
    let pos: Vec<usize> = subsystem.iter().copied().filter(|&i| rd.is_positive(i)).collect();
    let set: BTreeSet<&[i64]> = pos.iter().map(|&i| rd.root(i)).collect();
    pos.iter()
        .copied()
        .filter(|&i| {
            !pos.iter().any(|&j| {
                let diff: Vec<i64> = rd.root(i).iter().zip(rd.root(j)).map(|(a, b)| a - b).collect();
                j != i && set.contains(diff.as_slice())
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaBound {
    pub gamma_order: u64,
    pub pi1_order: u64,
}

/// Checks that `|Gamma_s|` divides `|pi_1|` of the derived group of the dual.
pub fn check_gamma_bound(stab: &StabilizerData, rd: &RootDatum) -> Result<GammaBound, PointError> {
    let pi1 = rd.dual().fundamental_group(FundamentalGroupMode::Derived).order();
    let gamma = stab.gamma.order() as u64;
    if pi1 % gamma != 0 {
        return Err(PointError::BoundViolated { gamma, pi1 });
    }
    Ok(GammaBound { gamma_order: gamma, pi1_order: pi1 })
}

/// All points of order dividing `n`, sorted.
pub fn enumerate_points(rd: &RootDatum, n: u64, mode: CoefficientMode) -> Result<Vec<SemisimplePoint>, PointError> {
    enumerate_points_with_cap(rd, n, mode, DEFAULT_SEARCH_CAP)
}

pub fn enumerate_points_with_cap(
    rd: &RootDatum,
    n: u64,
    mode: CoefficientMode,
    cap: u64,
) -> Result<Vec<SemisimplePoint>, PointError> {
    mode.admits(n)?;
    let dim = rd.rank();
    let total = (n as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(PointError::SearchTooLarge(total.min(u64::MAX as u128) as u64));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut nums = vec![0i64; dim];
    loop {
        out.push(SemisimplePoint::new(n, &nums));
        let mut k = dim;
        loop {
            if k == 0 {
                out.sort();
                return Ok(out);
            }
            k -= 1;
            nums[k] += 1;
            if nums[k] < n as i64 {
                break;
            }
            nums[k] = 0;
        }
    }
}

/// All points of order at most `bound` (prime to the mode's primes).
pub fn points_up_to_order(rd: &RootDatum, bound: u64, mode: CoefficientMode) -> Result<Vec<SemisimplePoint>, PointError> {
    let mut set = BTreeSet::new();
    for n in 1..=bound {
        if mode.admits(n).is_err() {
            continue;
        }
        for s in enumerate_points(rd, n, mode)? {
            if s.order() == n {
                set.insert(s);
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// The `W`-orbit of `s`, sorted.
pub fn orbit(w: &WeylGroup, s: &SemisimplePoint) -> Vec<SemisimplePoint> {
    let set: BTreeSet<SemisimplePoint> = (0..w.order()).map(|x| s.act(w.matrix(x))).collect();
    set.into_iter().collect()
}

/// Lexicographically least point of the orbit.
pub fn canonical_representative(w: &WeylGroup, s: &SemisimplePoint) -> SemisimplePoint {
    (0..w.order()).map(|x| s.act(w.matrix(x))).min().unwrap()
}

/// Canonical representatives of the orbits met by `points`, sorted.
pub fn orbit_representatives(w: &WeylGroup, points: &[SemisimplePoint]) -> Vec<SemisimplePoint> {
    let set: BTreeSet<SemisimplePoint> = points.iter().map(|s| canonical_representative(w, s)).collect();
    set.into_iter().collect()
}
