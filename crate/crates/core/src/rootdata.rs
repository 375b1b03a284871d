//! Based root data over the standard lattice `Z^n` with the dot-product
//! pairing.
//!
//! Characters and cocharacters are both written in the coordinates of `Z^n`;
//! the pairing `<x, y>` is the dot product. A datum is built from its simple
//! roots and coroots, and the full root system is the closure under simple
//! reflections.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{FiniteAbelianGroup, IntMatrix};

/// Twice the number of roots of E8.
pub const MAX_ROOTS: usize = 480;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDatumError {
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("not of finite type: {0}")]
    NotFiniteType(String),
    #[error("unrecognized Cartan type: {0}")]
    UnrecognizedType(String),
    #[error("invalid root datum: {0}")]
    Invalid(String),
    #[error("unknown datum name {0:?}")]
    UnknownName(String),
}

impl RootDatumError {
    pub fn code(&self) -> &'static str {
        match self {
            RootDatumError::InvalidPairing(_) => "rootdata.invalid_pairing",
            RootDatumError::NotFiniteType(_) => "rootdata.not_finite_type",
            RootDatumError::UnrecognizedType(_) => "rootdata.unrecognized_type",
            RootDatumError::Invalid(_) => "rootdata.invalid",
            RootDatumError::UnknownName(_) => "rootdata.unknown_name",
        }
    }
}

type Result<T> = std::result::Result<T, RootDatumError>;

pub fn pair(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// A based root datum `(X*, X_*, Phi, Phi^vee, Delta, Delta^vee)`.
///
/// Roots are stored positive ones first, ordered by height and then by their
/// coordinates in the simple roots; the negative roots follow in the same
/// order. The simple roots are therefore the indices `0..simple_count()`, in
/// the order they were supplied.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootDatum {
    rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    /// Coordinates of each root in the simple roots.
    #[serde(skip)]
    heights: Vec<Vec<i64>>,
    #[serde(skip)]
    index: HashMap<Vec<i64>, usize>,
    simple: usize,
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.roots == other.roots && self.coroots == other.coroots && self.simple == other.simple
    }
}

impl Eq for RootDatum {}

/// On-disk description of a root datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumFile {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    #[serde(default)]
    pub name: String,
}

impl RootDatum {
    /// Builds the based datum generated by the given simple roots and coroots.
    pub fn build(rank: usize, simple_roots: &[Vec<i64>], simple_coroots: &[Vec<i64>]) -> Result<Self> {
        if simple_roots.len() != simple_coroots.len() {
            return Err(RootDatumError::InvalidPairing(format!(
                "{} simple roots but {} simple coroots",
                simple_roots.len(),
                simple_coroots.len()
            )));
        }
        if simple_roots.iter().chain(simple_coroots).any(|v| v.len() != rank) {
            return Err(RootDatumError::InvalidPairing(format!("vector length differs from rank {rank}")));
        }
        let r = simple_roots.len();
        let cartan: Vec<Vec<i64>> =
            (0..r).map(|i| (0..r).map(|j| pair(&simple_roots[i], &simple_coroots[j])).collect()).collect();
        check_cartan(&cartan)?;
        if IntMatrix::from_rows(&cartan).det() == 0 && r > 0 {
            return Err(RootDatumError::NotFiniteType("singular Cartan matrix".into()));
        }

        // Reflection closure, carrying coroots and simple coordinates along.
        let mut found: HashMap<Vec<i64>, (Vec<i64>, Vec<i64>)> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..r {
            let mut h = vec![0; r];
            h[i] = 1;
            if found.insert(simple_roots[i].clone(), (simple_coroots[i].clone(), h.clone())).is_some() {
                return Err(RootDatumError::InvalidPairing("repeated simple root".into()));
            }
            queue.push_back(simple_roots[i].clone());
        }
        while let Some(root) = queue.pop_front() {
            let (coroot, h) = found[&root].clone();
            for i in 0..r {
                let c = pair(&root, &simple_coroots[i]);
                let d = pair(&simple_roots[i], &coroot);
                let nr: Vec<i64> = root.iter().zip(&simple_roots[i]).map(|(x, a)| x - c * a).collect();
                let nc: Vec<i64> = coroot.iter().zip(&simple_coroots[i]).map(|(y, a)| y - d * a).collect();
                let mut nh = h.clone();
                nh[i] -= c;
                match found.get(&nr) {
                    Some((oc, oh)) => {
                        if *oc != nc {
                            return Err(RootDatumError::InvalidPairing(format!(
                                "root {nr:?} reached with coroots {oc:?} and {nc:?}"
                            )));
                        }
                        if *oh != nh {
                            return Err(RootDatumError::NotFiniteType("simple roots are linearly dependent".into()));
                        }
                    }
                    None => {
                        if found.len() >= MAX_ROOTS {
                            return Err(RootDatumError::NotFiniteType(format!(
                                "reflection closure exceeds {MAX_ROOTS} roots"
                            )));
                        }
                        found.insert(nr.clone(), (nc, nh));
                        queue.push_back(nr);
                    }
                }
            }
        }

        let mut positive: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = Vec::new();
        for (root, (coroot, h)) in &found {
            let pos = h.iter().all(|&x| x >= 0);
            let neg = h.iter().all(|&x| x <= 0);
            if !pos && !neg {
                return Err(RootDatumError::NotFiniteType(format!("root {root:?} is neither positive nor negative")));
            }
            if pos {
                positive.push((root.clone(), coroot.clone(), h.clone()));
            }
        }
        if positive.len() * 2 != found.len() {
            return Err(RootDatumError::Invalid("roots are not closed under negation".into()));
        }
        positive.sort_by(|a, b| {
            let ha: i64 = a.2.iter().sum();
            let hb: i64 = b.2.iter().sum();
            ha.cmp(&hb).then_with(|| b.2.cmp(&a.2))
        });
        let mut roots = Vec::with_capacity(found.len());
        let mut coroots = Vec::with_capacity(found.len());
        let mut heights = Vec::with_capacity(found.len());
        for (a, c, h) in &positive {
            roots.push(a.clone());
            coroots.push(c.clone());
            heights.push(h.clone());
        }
        for (a, c, h) in &positive {
            roots.push(a.iter().map(|x| -x).collect());
            coroots.push(c.iter().map(|x| -x).collect());
            heights.push(h.iter().map(|x| -x).collect());
        }
        let index = roots.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let rd = RootDatum { rank, name: None, roots, coroots, heights, index, simple: r };
        rd.validate()?;
        Ok(rd)
    }

    pub fn from_file(file: &DatumFile) -> Result<Self> {
        let rd = Self::build(file.rank, &file.simple_roots, &file.simple_coroots)?;
        Ok(if file.name.is_empty() { rd } else { rd.with_name(&file.name) })
    }

    pub fn to_file(&self) -> DatumFile {
        DatumFile {
            rank: self.rank,
            simple_roots: self.simple_roots(),
            simple_coroots: self.simple_coroots(),
            name: self.name.clone().unwrap_or_default(),
        }
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("")
    }

    /// Rank of the lattices `X*` and `X_*`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of simple roots (semisimple rank).
    pub fn simple_count(&self) -> usize {
        self.simple
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &[i64] {
        &self.coroots[i]
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    /// Coordinates of root `i` in the simple roots.
    pub fn height_vector(&self, i: usize) -> &[i64] {
        &self.heights[i]
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive()
    }

    pub fn negative_of(&self, i: usize) -> usize {
        let p = self.num_positive();
        if i < p {
            i + p
        } else {
            i - p
        }
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn simple_indices(&self) -> std::ops::Range<usize> {
        0..self.simple
    }

    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        self.roots[..self.simple].to_vec()
    }

    pub fn simple_coroots(&self) -> Vec<Vec<i64>> {
        self.coroots[..self.simple].to_vec()
    }

    /// `a_ij = <alpha_i, alpha_j^vee>` on the simple roots.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.simple)
            .map(|i| (0..self.simple).map(|j| pair(&self.roots[i], &self.coroots[j])).collect())
            .collect()
    }

    /// Matrix of the reflection `s_alpha` on `X*` for root `i`:
    /// `x -> x - <x, alpha^vee> alpha`.
    pub fn reflection_matrix(&self, i: usize) -> IntMatrix {
        let n = self.rank;
        let mut m = IntMatrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] -= self.roots[i][r] * self.coroots[i][c];
            }
        }
        m
    }

    /// `s_alpha` applied to a character.
    pub fn reflect(&self, i: usize, x: &[i64]) -> Vec<i64> {
        let c = pair(x, &self.coroots[i]);
        x.iter().zip(&self.roots[i]).map(|(a, b)| a - c * b).collect()
    }

    /// `s_alpha` applied to a cocharacter: `y -> y - <alpha, y> alpha^vee`.
    pub fn reflect_cochar(&self, i: usize, y: &[i64]) -> Vec<i64> {
        let c = pair(&self.roots[i], y);
        y.iter().zip(&self.coroots[i]).map(|(a, b)| a - c * b).collect()
    }

    /// Exhaustive check of the datum axioms.
    pub fn validate(&self) -> Result<()> {
        for (i, (a, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
            if pair(a, c) != 2 {
                return Err(RootDatumError::InvalidPairing(format!("<alpha, alpha^vee> != 2 for root {i}")));
            }
            let doubled: Vec<i64> = a.iter().map(|x| 2 * x).collect();
            if self.index.contains_key(&doubled) {
                return Err(RootDatumError::Invalid(format!("root system is not reduced at {a:?}")));
            }
            let h = &self.heights[i];
            if !(h.iter().all(|&x| x >= 0) || h.iter().all(|&x| x <= 0)) {
                return Err(RootDatumError::Invalid(format!("root {a:?} is not a signed sum of simple roots")));
            }
        }
        for i in 0..self.roots.len() {
            for j in 0..self.roots.len() {
                let image = self.reflect(i, &self.roots[j]);
                let Some(k) = self.root_index(&image) else {
                    return Err(RootDatumError::Invalid(format!("s_{i} does not preserve the roots")));
                };
                if self.reflect_cochar(i, &self.coroots[j]) != self.coroots[k] {
                    return Err(RootDatumError::Invalid(format!("s_{i} does not preserve the root-coroot bijection")));
                }
            }
        }
        Ok(())
    }

    /// The dual datum `(X_*, X*, Phi^vee, Phi, Delta^vee, Delta)`.
    pub fn dual(&self) -> RootDatum {
        let d = Self::build(self.rank, &self.simple_coroots(), &self.simple_roots())
            .expect("dual of a valid datum is valid");
        match &self.name {
            Some(n) => d.with_name(&format!("dual({n})")),
            None => d,
        }
    }

    /// Same lattice, same set of (root, coroot) pairs and same simple roots,
    /// ignoring list order and names.
    pub fn same_as(&self, other: &RootDatum) -> bool {
        let pairs = |rd: &RootDatum| -> BTreeSet<(Vec<i64>, Vec<i64>)> {
            rd.roots.iter().cloned().zip(rd.coroots.iter().cloned()).collect()
        };
        let simple = |rd: &RootDatum| -> BTreeSet<Vec<i64>> { rd.simple_roots().into_iter().collect() };
        self.rank == other.rank && pairs(self) == pairs(other) && simple(self) == simple(other)
    }

    /// `pi_1` computed from the coroot lattice.
    ///
    /// `Derived` gives `(X_* ∩ Q Phi^vee) / Z Phi^vee`, computed from a basis
    /// of the saturation of the coroot lattice. `Full` gives all of
    /// `X_* / Z Phi^vee` (torsion invariant factors plus free rank) read off
    /// the Smith form of the coroot matrix. The torsion parts agree.
    pub fn fundamental_group(&self, mode: FundamentalGroupMode) -> FiniteAbelianGroup {
        let cols = self.simple_coroots();
        let c = IntMatrix::from_cols(self.rank, &cols);
        match mode {
            FundamentalGroupMode::Full => FiniteAbelianGroup::cokernel(&c),
            FundamentalGroupMode::Derived => {
                // Saturation basis: the first r columns of U^{-1} span
                // X_* ∩ Q Phi^vee; express the coroots in that basis.
                let r = cols.len();
                if r == 0 {
                    return FiniteAbelianGroup::trivial();
                }
                let (u, _, _) = crate::lattice::smith_normal_form(&c);
                let uc = u.mul(&c);
                let top: Vec<Vec<i64>> = (0..r).map(|i| uc.row(i).to_vec()).collect();
                let mut g = FiniteAbelianGroup::cokernel(&IntMatrix::from_rows(&top));
                g.basis_change = None;
                g
            }
        }
    }

    pub fn classify(&self) -> Result<CartanClassification> {
        classify_cartan(&self.cartan_matrix()).map(|components| CartanClassification {
            central_torus_rank: self.rank - self.simple,
            components,
        })
    }

    /// Standard Levi sub-datum on the simple roots `subset` (indices into the
    /// simple roots). The result has the same lattices.
    pub fn levi(&self, subset: &[usize]) -> Result<RootDatum> {
        let mut idx: Vec<usize> = subset.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.simple) {
            return Err(RootDatumError::Invalid(format!("{bad} is not a simple root index")));
        }
        let roots: Vec<Vec<i64>> = idx.iter().map(|&i| self.roots[i].clone()).collect();
        let coroots: Vec<Vec<i64>> = idx.iter().map(|&i| self.coroots[i].clone()).collect();
        let l = Self::build(self.rank, &roots, &coroots)?;
        Ok(match &self.name {
            Some(n) => l.with_name(&format!("levi({n}, {idx:?})")),
            None => l,
        })
    }

    /// Sub-datum with the given roots (indices into this datum) as simple
    /// system.
    pub fn subdatum(&self, simple: &[usize]) -> Result<RootDatum> {
        let roots: Vec<Vec<i64>> = simple.iter().map(|&i| self.roots[i].clone()).collect();
        let coroots: Vec<Vec<i64>> = simple.iter().map(|&i| self.coroots[i].clone()).collect();
        Self::build(self.rank, &roots, &coroots)
    }

    pub fn torus(n: usize) -> RootDatum {
        Self::build(n, &[], &[]).unwrap().with_name(&format!("T{n}"))
    }

    pub fn gl(n: usize) -> RootDatum {
        assert!(n >= 1);
        let simple: Vec<Vec<i64>> = (0..n - 1)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect();
        Self::build(n, &simple, &simple).unwrap().with_name(&format!("GL{n}"))
    }

    pub fn sl(n: usize) -> RootDatum {
        assert!(n >= 2);
        Self::simply_connected(CartanType::A(n - 1)).with_name(&format!("SL{n}"))
    }

    pub fn pgl(n: usize) -> RootDatum {
        assert!(n >= 2);
        Self::adjoint(CartanType::A(n - 1)).with_name(&format!("PGL{n}"))
    }

    /// Simply connected C2: coroots are the standard basis.
    pub fn sp4() -> RootDatum {
        Self::simply_connected(CartanType::C(2)).with_name("Sp4")
    }

    /// Adjoint B2, the dual of `sp4`.
    pub fn so5() -> RootDatum {
        Self::adjoint(CartanType::B(2)).with_name("SO5")
    }

    pub fn sl2_x_sl2() -> RootDatum {
        Self::build(2, &[vec![2, 0], vec![0, 2]], &[vec![1, 0], vec![0, 1]]).unwrap().with_name("SL2xSL2")
    }

    pub fn g2() -> RootDatum {
        Self::simply_connected(CartanType::G2).with_name("G2")
    }

    /// Coroots are the standard basis of `X_*`; roots are the rows of the
    /// Cartan matrix.
    pub fn simply_connected(t: CartanType) -> RootDatum {
        let a = t.cartan_matrix();
        let n = a.len();
        let coroots: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
        Self::build(n, &a, &coroots).unwrap().with_name(&format!("sc:{t}"))
    }

    /// Roots are the standard basis of `X*`; coroots are the columns of the
    /// Cartan matrix.
    pub fn adjoint(t: CartanType) -> RootDatum {
        let a = t.cartan_matrix();
        let n = a.len();
        let roots: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
        let coroots: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| a[i][j]).collect()).collect();
        Self::build(n, &roots, &coroots).unwrap().with_name(&format!("ad:{t}"))
    }

    /// Built-in data by name: `GL<n>`, `SL<n>`, `PGL<n>`, `T<n>`, `Sp4`,
    /// `SO5`, `SL2xSL2`, `G2`, `sc:<type>`, `ad:<type>`.
    pub fn by_name(name: &str) -> Result<RootDatum> {
        let unknown = || RootDatumError::UnknownName(name.to_string());
        let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
        let rd = match name {
            "Sp4" => Self::sp4(),
            "SO5" => Self::so5(),
            "SL2xSL2" => Self::sl2_x_sl2(),
            "G2" => Self::g2(),
            _ => {
                if let Some(t) = name.strip_prefix("sc:") {
                    Self::simply_connected(t.parse().map_err(|_| unknown())?)
                } else if let Some(t) = name.strip_prefix("ad:") {
                    Self::adjoint(t.parse().map_err(|_| unknown())?)
                } else if let Some(n) = name.strip_prefix("PGL") {
                    let n = num(n)?;
                    if n < 2 {
                        return Err(unknown());
                    }
                    Self::pgl(n)
                } else if let Some(n) = name.strip_prefix("GL") {
                    let n = num(n)?;
                    if n < 1 {
                        return Err(unknown());
                    }
                    Self::gl(n)
                } else if let Some(n) = name.strip_prefix("SL") {
                    let n = num(n)?;
                    if n < 2 {
                        return Err(unknown());
                    }
                    Self::sl(n)
                } else if let Some(n) = name.strip_prefix('T') {
                    Self::torus(num(n)?)
                } else {
                    return Err(unknown());
                }
            }
        };
        Ok(rd)
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn check_cartan(a: &[Vec<i64>]) -> Result<()> {
    for i in 0..a.len() {
        if a[i][i] != 2 {
            return Err(RootDatumError::InvalidPairing(format!("<alpha_{i}, alpha_{i}^vee> = {} != 2", a[i][i])));
        }
        for j in 0..a.len() {
            if i == j {
                continue;
            }
            if a[i][j] > 0 {
                return Err(RootDatumError::InvalidPairing(format!("positive off-diagonal entry a_{i}{j} = {}", a[i][j])));
            }
            if (a[i][j] == 0) != (a[j][i] == 0) {
                return Err(RootDatumError::InvalidPairing(format!("a_{i}{j} and a_{j}{i} vanish asymmetrically")));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FundamentalGroupMode {
    Full,
    Derived,
}

/// Irreducible finite Cartan types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E(n) => write!(f, "E{n}"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl std::str::FromStr for CartanType {
    type Err = RootDatumError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || RootDatumError::UnrecognizedType(s.to_string());
        let (letter, rest) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let n: usize = rest.parse().map_err(|_| bad())?;
        let t = match (letter, n) {
            ("A", n) if n >= 1 => CartanType::A(n),
            ("B", n) if n >= 2 => CartanType::B(n),
            ("C", n) if n >= 2 => CartanType::C(n),
            ("D", n) if n >= 4 => CartanType::D(n),
            ("E", n) if (6..=8).contains(&n) => CartanType::E(n),
            ("F", 4) => CartanType::F4,
            ("G", 2) => CartanType::G2,
            _ => return Err(bad()),
        };
        Ok(t)
    }
}

impl CartanType {
    pub fn letter(self) -> char {
        match self {
            CartanType::A(_) => 'A',
            CartanType::B(_) => 'B',
            CartanType::C(_) => 'C',
            CartanType::D(_) => 'D',
            CartanType::E(_) => 'E',
            CartanType::F4 => 'F',
            CartanType::G2 => 'G',
        }
    }

    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) | CartanType::D(n) | CartanType::E(n) => n,
            CartanType::F4 => 4,
            CartanType::G2 => 2,
        }
    }

    /// Bourbaki-numbered Cartan matrix, `a_ij = <alpha_i, alpha_j^vee>`.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut bond = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self {
            CartanType::A(_) | CartanType::B(_) | CartanType::C(_) => (0..n - 1).for_each(|i| bond(i, i + 1)),
            CartanType::D(_) => {
                (0..n - 2).for_each(|i| bond(i, i + 1));
                bond(n - 3, n - 1);
            }
            CartanType::E(_) => {
                bond(0, 2);
                bond(1, 3);
                (2..n - 1).for_each(|i| bond(i, i + 1));
            }
            CartanType::F4 => (0..3).for_each(|i| bond(i, i + 1)),
            CartanType::G2 => bond(0, 1),
        }
        match self {
            CartanType::B(_) => a[n - 2][n - 1] = -2,
            CartanType::C(_) => a[n - 1][n - 2] = -2,
            CartanType::F4 => a[1][2] = -2,
            CartanType::G2 => a[1][0] = -3,
            _ => {}
        }
        a
    }

    /// Degrees of the basic polynomial invariants of the Weyl group.
    pub fn degrees(self) -> Vec<u64> {
        match self {
            CartanType::A(n) => (2..=n as u64 + 1).collect(),
            CartanType::B(n) | CartanType::C(n) => (1..=n as u64).map(|i| 2 * i).collect(),
            CartanType::D(n) => {
                let mut d: Vec<u64> = (1..n as u64).map(|i| 2 * i).collect();
                d.push(n as u64);
                d.sort_unstable();
                d
            }
            CartanType::E(6) => vec![2, 5, 6, 8, 9, 12],
            CartanType::E(7) => vec![2, 6, 8, 10, 12, 14, 18],
            CartanType::E(_) => vec![2, 8, 12, 14, 18, 20, 24, 30],
            CartanType::F4 => vec![2, 6, 8, 12],
            CartanType::G2 => vec![2, 6],
        }
    }

    pub fn weyl_order(self) -> u64 {
        self.degrees().iter().product()
    }

    pub fn num_roots(self) -> usize {
        // |Phi| = sum of (d_i - 1) * 2
        self.degrees().iter().map(|d| 2 * (*d as usize - 1)).sum()
    }

    /// Bad primes of the type.
    pub fn bad_primes(self) -> Vec<u64> {
        match self {
            CartanType::A(_) => vec![],
            CartanType::B(_) | CartanType::C(_) | CartanType::D(_) => vec![2],
            CartanType::F4 | CartanType::G2 | CartanType::E(6) | CartanType::E(7) => vec![2, 3],
            CartanType::E(_) => vec![2, 3, 5],
        }
    }

    /// Torsion primes of the type. Rank two `B2 = C2` is classified as `C2`
    /// and has none.
    pub fn torsion_primes(self) -> Vec<u64> {
        match self {
            CartanType::A(_) | CartanType::C(_) => vec![],
            CartanType::B(_) | CartanType::D(_) | CartanType::G2 => vec![2],
            CartanType::F4 | CartanType::E(6) | CartanType::E(7) => vec![2, 3],
            CartanType::E(_) => vec![2, 3, 5],
        }
    }
}

/// One irreducible factor of a classified datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanComponent {
    pub cartan_type: CartanType,
    /// `B2` for `C2`; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    /// Simple-root indices of the datum, listed in catalogue (Bourbaki) order.
    pub simple_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanClassification {
    pub components: Vec<CartanComponent>,
    pub central_torus_rank: usize,
}

impl CartanClassification {
    pub fn types(&self) -> Vec<CartanType> {
        self.components.iter().map(|c| c.cartan_type).collect()
    }

    /// e.g. `A1xA1`, `C2`, `T1` for a rank-one torus, `A2+T1` for GL3.
    pub fn label(&self) -> String {
        let mut s: String = self.components.iter().map(|c| c.cartan_type.to_string()).collect::<Vec<_>>().join("x");
        if self.central_torus_rank > 0 {
            if !s.is_empty() {
                s.push('+');
            }
            s.push_str(&format!("T{}", self.central_torus_rank));
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    pub fn semisimple_rank(&self) -> usize {
        self.components.iter().map(|c| c.cartan_type.rank()).sum()
    }
}

/// Splits a Cartan matrix into irreducible blocks and names each block.
pub fn classify_cartan(a: &[Vec<i64>]) -> Result<Vec<CartanComponent>> {
    let r = a.len();
    let mut seen = vec![false; r];
    let mut out = Vec::new();
    for start in 0..r {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..r {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        let sub: Vec<Vec<i64>> = comp.iter().map(|&i| comp.iter().map(|&j| a[i][j]).collect()).collect();
        let t = identify(&sub)?;
        let perm = match_catalogue(&sub, &t.cartan_matrix())
            .ok_or_else(|| RootDatumError::UnrecognizedType(format!("block {sub:?} does not match {t}")))?;
        let aliases = if t == CartanType::C(2) { vec!["B2".to_string()] } else { vec![] };
        out.push(CartanComponent { cartan_type: t, aliases, simple_indices: perm.iter().map(|&p| comp[p]).collect() });
    }
    Ok(out)
}

fn identify(a: &[Vec<i64>]) -> Result<CartanType> {
    let k = a.len();
    let unknown = || RootDatumError::UnrecognizedType(format!("{a:?}"));
    if k == 1 {
        return Ok(CartanType::A(1));
    }
    let mut degree = vec![0usize; k];
    let mut doubles = Vec::new();
    let mut edges = 0;
    for i in 0..k {
        for j in i + 1..k {
            if a[i][j] != 0 {
                edges += 1;
                degree[i] += 1;
                degree[j] += 1;
                match a[i][j] * a[j][i] {
                    1 => {}
                    2 => doubles.push((i, j)),
                    3 if k == 2 => return Ok(CartanType::G2),
                    _ => return Err(unknown()),
                }
            }
        }
    }
    if edges != k - 1 {
        return Err(unknown());
    }
    match doubles.as_slice() {
        [] => {
            let branch: Vec<usize> = (0..k).filter(|&i| degree[i] >= 3).collect();
            match branch.as_slice() {
                [] => Ok(CartanType::A(k)),
                [b] if degree[*b] == 3 => {
                    let mut arms: Vec<usize> = (0..k)
                        .filter(|&j| j != *b && a[*b][j] != 0)
                        .map(|j| arm_length(a, *b, j))
                        .collect();
                    arms.sort_unstable();
                    match arms.as_slice() {
                        [1, 1, _] => Ok(CartanType::D(k)),
                        [1, 2, 2] => Ok(CartanType::E(6)),
                        [1, 2, 3] => Ok(CartanType::E(7)),
                        [1, 2, 4] => Ok(CartanType::E(8)),
                        _ => Err(unknown()),
                    }
                }
                _ => Err(unknown()),
            }
        }
        [(u, v)] => {
            if degree.iter().any(|&d| d > 2) {
                return Err(unknown());
            }
            if k == 2 {
                return Ok(CartanType::C(2));
            }
            if k == 4 && degree[*u] == 2 && degree[*v] == 2 {
                return Ok(CartanType::F4);
            }
            // the end node of the double bond decides B vs C
            let (end, other) = if degree[*u] == 1 {
                (*u, *v)
            } else if degree[*v] == 1 {
                (*v, *u)
            } else {
                return Err(unknown());
            };
            let end_is_long = a[end][other] == -2;
            Ok(if end_is_long { CartanType::C(k) } else { CartanType::B(k) })
        }
        _ => Err(unknown()),
    }
}

fn arm_length(a: &[Vec<i64>], from: usize, first: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, first, 1);
    loop {
        let next: Vec<usize> = (0..a.len()).filter(|&j| j != prev && j != cur && a[cur][j] != 0).collect();
        match next.as_slice() {
            [n] => {
                prev = cur;
                cur = *n;
                len += 1;
            }
            _ => return len,
        }
    }
}

/// Permutation `p` with `a[p[i]][p[j]] == c[i][j]`.
fn match_catalogue(a: &[Vec<i64>], c: &[Vec<i64>]) -> Option<Vec<usize>> {
    fn go(a: &[Vec<i64>], c: &[Vec<i64>], p: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = p.len();
        if i == c.len() {
            return true;
        }
        for cand in 0..a.len() {
            if used[cand] {
                continue;
            }
            let ok = (0..i).all(|j| a[cand][p[j]] == c[i][j] && a[p[j]][cand] == c[j][i]) && a[cand][cand] == c[i][i];
            if ok {
                used[cand] = true;
                p.push(cand);
                if go(a, c, p, used) {
                    return true;
                }
                p.pop();
                used[cand] = false;
            }
        }
        false
    }
    let mut p = Vec::new();
    let mut used = vec![false; a.len()];
    go(a, c, &mut p, &mut used).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_and_gl2() {
        let sl2 = RootDatum::sl(2);
        assert_eq!(sl2.roots(), &[vec![2], vec![-2]]);
        assert_eq!(sl2.coroot(0), &[1]);
        let gl2 = RootDatum::gl(2);
        assert_eq!(gl2.roots(), &[vec![1, -1], vec![-1, 1]]);
    }

    #[test]
    fn sp4_has_eight_roots() {
        // Brute-force closure of the simple roots under all reflections.
        let sp4 = RootDatum::sp4();
        let mut set: BTreeSet<Vec<i64>> = sp4.simple_roots().into_iter().collect();
        loop {
            let mut next = set.clone();
            for x in &set {
                for i in 0..2 {
                    next.insert(sp4.reflect(i, x));
                }
            }
            if next == set {
                break;
            }
            set = next;
        }
        assert_eq!(set.len(), 8);
        assert_eq!(sp4.num_roots(), 8);
    }

    #[test]
    fn catalogue_root_counts() {
        for t in [CartanType::A(3), CartanType::B(3), CartanType::C(3), CartanType::D(4), CartanType::G2, CartanType::F4, CartanType::E(6)] {
            let rd = RootDatum::simply_connected(t);
            assert_eq!(rd.num_roots(), t.num_roots(), "{t}");
            assert_eq!(rd.classify().unwrap().types(), vec![t]);
        }
    }

    #[test]
    fn dual_examples() {
        let pgl2 = RootDatum::sl(2).dual();
        assert_eq!(pgl2.root(0), &[1]);
        assert_eq!(pgl2.coroot(0), &[2]);
        assert!(pgl2.same_as(&RootDatum::pgl(2)));
        let gl3 = RootDatum::gl(3);
        assert!(gl3.dual().same_as(&gl3));
        let sp4 = RootDatum::sp4();
        assert_eq!(sp4.dual().dual(), sp4);
        assert!(sp4.dual().same_as(&RootDatum::so5()));
    }

    #[test]
    fn fundamental_groups() {
        let pgl2 = RootDatum::pgl(2);
        assert_eq!(pgl2.fundamental_group(FundamentalGroupMode::Derived).invariant_factors, vec![2]);
        assert!(RootDatum::sl(2).fundamental_group(FundamentalGroupMode::Derived).is_trivial());
        let full = RootDatum::gl(2).fundamental_group(FundamentalGroupMode::Full);
        assert!(full.invariant_factors.is_empty());
        assert_eq!(full.free_rank, 1);
        assert_eq!(RootDatum::pgl(3).fundamental_group(FundamentalGroupMode::Derived).order(), 3);
        assert_eq!(RootDatum::so5().fundamental_group(FundamentalGroupMode::Full).order(), 2);
        // torsion parts of the two modes agree
        for rd in [RootDatum::gl(3), RootDatum::pgl(4), RootDatum::so5(), RootDatum::adjoint(CartanType::D(4))] {
            assert_eq!(
                rd.fundamental_group(FundamentalGroupMode::Derived).invariant_factors,
                rd.fundamental_group(FundamentalGroupMode::Full).invariant_factors
            );
        }
        assert_eq!(RootDatum::adjoint(CartanType::D(4)).fundamental_group(FundamentalGroupMode::Derived).invariant_factors, vec![2, 2]);
    }

    #[test]
    fn classify_examples() {
        let gl3 = RootDatum::gl(3).classify().unwrap();
        assert_eq!(gl3.types(), vec![CartanType::A(2)]);
        assert_eq!(gl3.central_torus_rank, 1);
        let sp4 = RootDatum::sp4().classify().unwrap();
        assert_eq!(sp4.types(), vec![CartanType::C(2)]);
        assert_eq!(sp4.components[0].aliases, vec!["B2".to_string()]);
        let a1a1 = RootDatum::sl2_x_sl2().classify().unwrap();
        assert_eq!(a1a1.types(), vec![CartanType::A(1), CartanType::A(1)]);
        assert_eq!(RootDatum::g2().classify().unwrap().types(), vec![CartanType::G2]);
        assert_eq!(RootDatum::torus(2).classify().unwrap().label(), "T2");
    }

    #[test]
    fn b_versus_c_in_rank_three() {
        assert_eq!(RootDatum::simply_connected(CartanType::B(3)).classify().unwrap().types(), vec![CartanType::B(3)]);
        assert_eq!(RootDatum::simply_connected(CartanType::C(3)).classify().unwrap().types(), vec![CartanType::C(3)]);
        // permuted simple roots still classify
        let c = CartanType::B(3).cartan_matrix();
        let perm = [2, 0, 1];
        let p: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| c[perm[i]][perm[j]]).collect()).collect();
        assert_eq!(classify_cartan(&p).unwrap()[0].cartan_type, CartanType::B(3));
    }

    #[test]
    fn levi_examples() {
        let gl3 = RootDatum::gl(3);
        let l = gl3.levi(&[0]).unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(l.roots(), &[vec![1, -1, 0], vec![-1, 1, 0]]);
        assert_eq!(l.classify().unwrap().label(), "A1+T2");
        assert_eq!(gl3.levi(&[]).unwrap().num_roots(), 0);
        assert_eq!(gl3.levi(&[0, 1]).unwrap(), gl3);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(RootDatum::build(1, &[vec![1]], &[vec![1]]), Err(RootDatumError::InvalidPairing(_))));
        // affine A1~ Cartan matrix
        let r = RootDatum::build(2, &[vec![2, 0], vec![-2, 0]], &[vec![1, 0], vec![-1, 0]]);
        assert!(matches!(r, Err(RootDatumError::NotFiniteType(_)) | Err(RootDatumError::InvalidPairing(_))), "{r:?}");
        let affine = RootDatum::build(3, &[vec![2, -2, 0], vec![-2, 2, 0]], &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(matches!(affine, Err(RootDatumError::NotFiniteType(_))), "{affine:?}");
        assert!(matches!(RootDatum::by_name("XY9"), Err(RootDatumError::UnknownName(_))));
    }

    #[test]
    fn names_resolve() {
        for n in ["GL1", "GL2", "SL3", "PGL2", "Sp4", "SO5", "SL2xSL2", "G2", "T1", "sc:B3", "ad:E6"] {
            let rd = RootDatum::by_name(n).unwrap();
            rd.validate().unwrap();
        }
    }

    #[test]
    fn datum_file_round_trip() {
        let f = RootDatum::sp4().to_file();
        let json = serde_json::to_string(&f).unwrap();
        let back: DatumFile = serde_json::from_str(&json).unwrap();
        assert_eq!(RootDatum::from_file(&back).unwrap(), RootDatum::sp4());
    }
}
