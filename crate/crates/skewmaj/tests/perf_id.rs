use skewmaj::hypergeom::*;
use std::time::Instant;

#[test]
#[ignore]
fn probe_one_verification() {
    let p = QPowerParams { b: 2, f: 6, m: 3, r: 2, ..Default::default() };
    let t0 = Instant::now();
    for _ in 0..20 {
        let rep = verify_product_case(&p);
        assert!(rep.passed());
    }
    println!("product_case m=3 r=2: {:?}/verification", t0.elapsed() / 20);

    let p = QPowerParams { b: -10, f: 9, m: 3, r: 3, s: 3, ..Default::default() };
    let t0 = Instant::now();
    for _ in 0..5 {
        let _ = verify_symmetric(&p, Terminating::B);
    }
    println!("symmetric m=3 r=3 s=3: {:?}/verification", t0.elapsed() / 5);

    let p = QPowerParams { b: 9, c: 10, d: -9, f: 10, m: 3, r: 3, ..Default::default() };
    let t0 = Instant::now();
    for _ in 0..5 {
        let _ = verify_product_case(&p);
    }
    println!("product_case extreme exps: {:?}/verification", t0.elapsed() / 5);
}

#[test]
#[ignore]
fn probe_sweep() {
    let cfg = SweepConfig { seed: 7, trials: 5, ..Default::default() };
    let t0 = std::time::Instant::now();
    let out = sweep(Identity::ProductCase, &cfg).unwrap();
    println!("sweep product_case: {:?} ({} samples, {} rejected)", t0.elapsed(), out.samples, out.rejected);
}
