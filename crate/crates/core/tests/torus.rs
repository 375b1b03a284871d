use dualgroup::curtis::{fixed_torus, torus_table};
use dualgroup::rationality::{build_frobenius, parse_tau};
use dualgroup::rootdata::RootDatum;
use dualgroup::weyl::WeylGroup;

#[test]
fn twisted_conjugacy_invariance() {
    for (rd, tau) in [
        (RootDatum::gl(3), "id"),
        (RootDatum::gl(3), "swap"),
        (RootDatum::sl(3), "swap"),
        (RootDatum::sp4(), "id"),
        (RootDatum::g2(), "id"),
    ] {
        let w = WeylGroup::enumerate(&rd).unwrap();
        let t = parse_tau(&rd, &w, tau).unwrap();
        for q in [2, 3] {
            let fr = build_frobenius(&rd, &w, q, &t).unwrap();
            let table = torus_table(&w, &fr).unwrap();
            for x in 0..w.order() {
                for v in 0..w.order() {
                    // v x F(v)^{-1}
                    let y = w.mul(w.mul(v, x), w.inverse(fr.on_weyl(v)));
                    assert_eq!(table[x].invariant_factors, table[y].invariant_factors, "{} q={q} tau={tau}", rd.name());
                }
            }
        }
    }
}

#[test]
fn identity_torus_is_split() {
    for n in 1..=3 {
        let rd = RootDatum::gl(n);
        let w = WeylGroup::enumerate(&rd).unwrap();
        let fr = build_frobenius(&rd, &w, 4, &dualgroup::lattice::IntMatrix::identity(n)).unwrap();
        let g = fixed_torus(&w, &fr, w.identity()).unwrap();
        assert_eq!(g.invariant_factors, vec![3; n]);
    }
}
