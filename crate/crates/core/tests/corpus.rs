use looijenga::corpus;
use looijenga::lattice::LatticeIsometry;
use looijenga::roots::{default_bound, find_roots};
use looijenga::torelli::{check_global_torelli, mw_rank, torsor_group};

#[test]
fn cycle8_has_no_roots() {
    let p = corpus::cycle8();
    let b = default_bound(p.pic());
    let rd = find_roots(&p, b).unwrap();
    assert!(rd.roots.is_empty() && rd.undetermined.is_empty());
    assert_eq!(mw_rank(&p).unwrap(), 1);
}

#[test]
fn cycle7_identity_is_yes_with_finite_torsor() {
    let p = corpus::cycle7();
    let b = default_bound(p.pic());
    let rd = find_roots(&p, b).unwrap();
    eprintln!(
        "cycle7 bound {b}: {} roots, {} undetermined, phi_y {}, delta_y {}",
        rd.roots.len(),
        rd.undetermined.len(),
        rd.phi_y.len(),
        rd.delta_y.len()
    );
    let v = check_global_torelli(&p, &p, &LatticeIsometry::identity(p.pic()), b).unwrap();
    assert!(v.is_yes(), "{v:?}");
    let t = torsor_group(&p);
    assert!(t.iter().all(|&d| d != 0), "{t:?}");
}
