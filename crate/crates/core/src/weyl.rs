//! Weyl group enumeration, reduced words, Bruhat order and lattice actions.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::IntMatrix;
use crate::rootdata::RootDatum;

/// Order of the Weyl group of E6.
pub const DEFAULT_CAP: usize = 51840;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("Weyl group has more than {0} elements")]
    GroupTooLarge(usize),
    #[error("invalid word: {0}")]
    InvalidWord(String),
}

impl WeylError {
    pub fn code(&self) -> &'static str {
        match self {
            WeylError::GroupTooLarge(_) => "weyl.group_too_large",
            WeylError::InvalidWord(_) => "weyl.invalid_word",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylElement {
    /// Action on `X*`.
    pub matrix: IntMatrix,
    /// Lexicographically least reduced word, in simple-root indices.
    pub word: Vec<usize>,
    pub length: usize,
}

/// Which lattice a Weyl element acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Character,
    Cocharacter,
}

/// A fully enumerated Weyl group. Elements are referred to by index; the
/// identity has index 0 and elements are sorted by length, then by word.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    rank: usize,
    gens: usize,
    elements: Vec<WeylElement>,
    index: HashMap<IntMatrix, usize>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// `root_perm[w][i]` is the index of `w(alpha_i)`.
    root_perm: Vec<Vec<usize>>,
    /// Index of the reflection `s_alpha` for each root.
    reflections: Vec<usize>,
    num_positive: usize,
}

impl WeylGroup {
    pub fn enumerate(rd: &RootDatum) -> Result<WeylGroup, WeylError> {
        Self::enumerate_with_cap(rd, DEFAULT_CAP)
    }

    pub fn enumerate_with_cap(rd: &RootDatum, cap: usize) -> Result<WeylGroup, WeylError> {
        let n = rd.rank();
        let r = rd.simple_count();
        let gens: Vec<IntMatrix> = (0..r).map(|i| rd.reflection_matrix(i)).collect();
        let mut elements = vec![WeylElement { matrix: IntMatrix::identity(n), word: vec![], length: 0 }];
        let mut index = HashMap::new();
        index.insert(IntMatrix::identity(n), 0usize);
        let mut right: Vec<Vec<usize>> = Vec::new();
        // FIFO order over a queue sorted by word gives lex-least reduced words.
        let mut head = 0;
        while head < elements.len() {
            let mut row = Vec::with_capacity(r);
            for (g, m) in gens.iter().enumerate() {
                let prod = elements[head].matrix.mul(m);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= cap {
                            return Err(WeylError::GroupTooLarge(cap));
                        }
                        let mut word = elements[head].word.clone();
                        word.push(g);
                        let length = word.len();
                        elements.push(WeylElement { matrix: prod.clone(), word, length });
                        index.insert(prod, elements.len() - 1);
                        elements.len() - 1
                    }
                };
                row.push(idx);
            }
            right.push(row);
            head += 1;
        }
        let size = elements.len();
        let mut left = vec![vec![0; r]; size];
        for (w, e) in elements.iter().enumerate() {
            for (g, m) in gens.iter().enumerate() {
                left[w][g] = index[&m.mul(&e.matrix)];
            }
        }
        let mut inverse = vec![0; size];
        for w in 0..size {
            let mut x = 0;
            for &g in elements[w].word.iter().rev() {
                x = right[x][g];
            }
            inverse[w] = x;
        }
        let root_perm: Vec<Vec<usize>> = elements
            .iter()
            .map(|e| {
                (0..rd.num_roots())
                    .map(|i| rd.root_index(&e.matrix.apply(rd.root(i))).expect("Weyl group permutes the roots"))
                    .collect()
            })
            .collect();
        let reflections = (0..rd.num_roots()).map(|i| index[&rd.reflection_matrix(i)]).collect();
        Ok(WeylGroup {
            rank: n,
            gens: r,
            elements,
            index,
            right,
            left,
            inverse,
            root_perm,
            reflections,
            num_positive: rd.num_positive(),
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_generators(&self) -> usize {
        self.gens
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, w: usize) -> &WeylElement {
        &self.elements[w]
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn matrix(&self, w: usize) -> &IntMatrix {
        &self.elements[w].matrix
    }

    pub fn length(&self, w: usize) -> usize {
        self.elements[w].length
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.elements[w].word
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn simple_reflection(&self, i: usize) -> usize {
        self.right[0][i]
    }

    /// `s_alpha` for root index `i`.
    pub fn reflection(&self, root: usize) -> usize {
        self.reflections[root]
    }

    pub fn mul_simple(&self, w: usize, g: usize) -> usize {
        self.right[w][g]
    }

    pub fn simple_mul(&self, g: usize, w: usize) -> usize {
        self.left[w][g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.elements[b].word.iter().fold(a, |x, &g| self.right[x][g])
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    /// Element represented by an arbitrary (not necessarily reduced) word.
    pub fn from_word(&self, word: &[usize]) -> Result<usize, WeylError> {
        if let Some(&g) = word.iter().find(|&&g| g >= self.gens) {
            return Err(WeylError::InvalidWord(format!("generator {g} out of range 0..{}", self.gens)));
        }
        Ok(word.iter().fold(0, |x, &g| self.right[x][g]))
    }

    /// Index of `w(alpha_i)`.
    pub fn act_on_root(&self, w: usize, i: usize) -> usize {
        self.root_perm[w][i]
    }

    /// Number of positive roots made negative by `w`.
    pub fn inversion_count(&self, w: usize) -> usize {
        (0..self.num_positive).filter(|&i| self.root_perm[w][i] >= self.num_positive).count()
    }

    /// Positive roots `alpha` with `w(alpha) < 0`.
    pub fn inversions(&self, w: usize) -> Vec<usize> {
        (0..self.num_positive).filter(|&i| self.root_perm[w][i] >= self.num_positive).collect()
    }

    pub fn is_right_descent(&self, w: usize, g: usize) -> bool {
        self.elements[self.right[w][g]].length < self.elements[w].length
    }

    /// `u <= w` in the Bruhat order, by the lifting property along a reduced
    /// word of `w`.
    pub fn bruhat_leq(&self, u: usize, w: usize) -> bool {
        let (mut u, mut w) = (u, w);
        loop {
            let (lu, lw) = (self.length(u), self.length(w));
            if lu > lw {
                return false;
            }
            if lw == 0 {
                return u == 0;
            }
            if lu == lw {
                return u == w;
            }
            let s = *self.elements[w].word.last().unwrap();
            let ws = self.right[w][s];
            if self.is_right_descent(u, s) {
                u = self.right[u][s];
            }
            w = ws;
        }
    }

    pub fn longest_element(&self) -> usize {
        // elements are sorted by length
        self.elements.len() - 1
    }

    /// Matrix of `w` acting on the chosen lattice (inverse transpose on
    /// cocharacters).
    pub fn action_matrix(&self, w: usize, side: Side) -> IntMatrix {
        match side {
            Side::Character => self.elements[w].matrix.clone(),
            Side::Cocharacter => self.elements[self.inverse[w]].matrix.transpose(),
        }
    }

    pub fn act(&self, w: usize, v: &[i64], side: Side) -> Vec<i64> {
        self.action_matrix(w, side).apply(v)
    }

    /// Subgroup generated by the given elements, as a sorted index list.
    pub fn generate_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }
}
