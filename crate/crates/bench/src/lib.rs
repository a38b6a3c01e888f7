//! Fixtures shared by the benchmarks.

use prosep_core::io::{catalog, FpPresentation, Group};
use prosep_core::pc::{PcElement, PcPresentation};
use prosep_core::FiniteGroup;

pub fn perm(name: &str) -> FiniteGroup {
    match catalog(name).expect("catalog entry").group {
        Group::Perm(g) => g,
        g => panic!("{name} is a {} group", g.kind()),
    }
}

pub fn pc(name: &str) -> PcPresentation {
    match catalog(name).expect("catalog entry").group {
        Group::Pc(p) => p,
        g => panic!("{name} is a {} group", g.kind()),
    }
}

pub fn fp(name: &str) -> FpPresentation {
    match catalog(name).expect("catalog entry").group {
        Group::Fp(f) => f,
        g => panic!("{name} is a {} group", g.kind()),
    }
}

/// `count` elements of `p` with exponents cycling through `-span..=span`.
pub fn elements(p: &PcPresentation, count: usize, span: i64) -> Vec<PcElement> {
    let width = 2 * span + 1;
    (0..count)
        .map(|k| {
            let exps = (0..p.len()).map(|i| ((k as i64 * (2 * i as i64 + 3)) % width) - span).collect();
            p.element(exps).expect("valid exponents")
        })
        .collect()
}
