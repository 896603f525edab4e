use qeslab::algebra::{MatDiffOp, Scalar};
use qeslab::elliptic::PrefTag;
use qeslab::lame::three::*;
use qeslab::spaces::{check_invariance, DressedSpace, Tower};

fn main() {
    let n = 2i64;
    let paper = closed_form_all_ones(n);
    let op = paper.operator();
    let vals: Vec<Scalar> = vec![
        Scalar::from_int(0), Scalar::from_int(1), Scalar::from_int(-1),
        Scalar::from_int(2), Scalar::from_int(-2),
        Scalar::from_ratio(1, 2), Scalar::from_ratio(-1, 2),
        Scalar::from_ratio(1, 3), Scalar::from_ratio(-1, 3),
        Scalar::from_ratio(3, 2), Scalar::from_ratio(-3, 2),
        Scalar::from_int(3), Scalar::from_int(-3),
    ];
    let towers = [vec![n - 2, n - 1, n], vec![n, n - 1, n - 2]];
    let pref_sets = [
        [PrefTag::Cn, PrefTag::Dn, PrefTag::Cn],
        [PrefTag::Dn, PrefTag::Cn, PrefTag::Dn],
    ];
    let mut hits = 0;
    for a in &vals {
        for b in &vals {
            for g in &vals {
                for (ti, tow) in towers.iter().enumerate() {
                    for (pi, prefs) in pref_sets.iter().enumerate() {
                        // upper triangular placement as displayed
                        let rows = vec![
                            vec![Scalar::one(), a.clone(), b.clone()],
                            vec![Scalar::zero(), Scalar::one(), g.clone()],
                            vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
                        ];
                        let dress = MatDiffOp::from_scalar_rows(&rows);
                        let alg = op.to_algebraic(&prefs.to_vec(), &dress).unwrap();
                        let space = DressedSpace::plain(Tower::new(tow.clone()));
                        if check_invariance(&alg, &space).invariant {
                            println!("HIT alpha={a} beta={b} gamma={g} tower#{ti} prefs#{pi}");
                            hits += 1;
                        }
                    }
                }
            }
        }
    }
    println!("scan done, {hits} hits");
}
