use ppcalc_bench::{family, modules, right, ring};

#[test]
fn benchmark_inputs_build() {
    let r = ring("f2e");
    assert!(family(&r).len() > 20);
    assert_eq!(modules(&r, 16).len(), 9);
    assert_eq!(right(&r, "x*e = 0").free_sorts(), [0]);
}
