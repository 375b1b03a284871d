use std::collections::BTreeSet;

use dualgroup::rationality::{build_frobenius, geometric_classes, rational_classes};
use dualgroup::lattice::IntMatrix;
use dualgroup::rootdata::RootDatum;
use dualgroup::sspoints::CoefficientMode;
use dualgroup::weyl::WeylGroup;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduce(num: u64, den: u64) -> (u64, u64) {
    let num = num % den;
    let g = gcd(num, den);
    (num / g, den / g)
}

/// Frobenius orbits of `x -> q x` on the torsion of `Q/Z` of order dividing
/// `q^d - 1` for some `d <= n`, each as a sorted list of reduced fractions.
fn frobenius_orbits(n: u32, q: u64) -> Vec<Vec<(u64, u64)>> {
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for d in 1..=n {
        let m = q.pow(d) - 1;
        for a in 0..m {
            let x = reduce(a, m);
            if seen.contains(&x) {
                continue;
            }
            let mut orbit = vec![x];
            let mut y = reduce(x.0 * q, x.1);
            while y != x {
                orbit.push(y);
                y = reduce(y.0 * q, y.1);
            }
            seen.extend(orbit.iter().copied());
            if orbit.len() as u32 <= n {
                orbit.sort();
                orbits.push(orbit);
            }
        }
    }
    orbits
}

/// Multisets of total size `n` built from whole Frobenius orbits.
fn stable_multisets(n: u32, q: u64) -> BTreeSet<Vec<(u64, u64)>> {
    fn go(orbits: &[Vec<(u64, u64)>], start: usize, left: usize, acc: &mut Vec<(u64, u64)>, out: &mut BTreeSet<Vec<(u64, u64)>>) {
        if left == 0 {
            let mut v = acc.clone();
            v.sort();
            out.insert(v);
            return;
        }
        for i in start..orbits.len() {
            if orbits[i].len() <= left {
                let k = acc.len();
                acc.extend(orbits[i].iter().copied());
                go(orbits, i, left - orbits[i].len(), acc, out);
                acc.truncate(k);
            }
        }
    }
    let orbits = frobenius_orbits(n, q);
    let mut out = BTreeSet::new();
    go(&orbits, 0, n as usize, &mut Vec::new(), &mut out);
    out
}

fn parse_fraction(s: &str) -> (u64, u64) {
    let (a, b) = s.split_once('/').unwrap();
    reduce(a.parse().unwrap(), b.parse().unwrap())
}

#[test]
fn gl_n_classes_match_orbit_multisets() {
    for n in [2usize, 3] {
        for q in [2u64, 3] {
            let rd = RootDatum::gl(n);
            let w = WeylGroup::enumerate(&rd).unwrap();
            let fr = build_frobenius(&rd, &w, q, &IntMatrix::identity(n)).unwrap();
            let classes = geometric_classes(&w, &fr, CoefficientMode::Qlbar { p: q }).unwrap();
            let computed: BTreeSet<Vec<(u64, u64)>> = classes
                .iter()
                .map(|c| {
                    let mut v: Vec<(u64, u64)> = c.representative.to_strings().iter().map(|s| parse_fraction(s)).collect();
                    v.sort();
                    v
                })
                .collect();
            let oracle = stable_multisets(n as u32, q);
            assert_eq!(computed.len(), classes.len(), "distinct multisets for GL{n} q={q}");
            assert_eq!(computed, oracle, "GL{n} q={q}");
            // monic degree-n polynomials with nonzero constant term
            assert_eq!(oracle.len() as u64, q.pow(n as u32) - q.pow(n as u32 - 1));
            let rational: usize =
                classes.iter().map(|c| rational_classes(&rd, &w, &fr, &c.representative).unwrap().rational_count).sum();
            assert_eq!(rational, classes.len());
        }
    }
}
