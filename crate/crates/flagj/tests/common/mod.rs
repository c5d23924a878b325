//! Shared helpers for the randomized suites.  The generator seed comes
//! from `FLAGJ_SEED` when set, so failing cases can be replayed.

#![allow(dead_code)]

use flagj::classify::{self, Seeds};
use flagj::gacs::{RootJ, Structure};
use flagj::liealg::{RegularElement, StructureConstants};
use flagj::rootsystem::{AlgebraSpec, RootSystem};
use flagj::scalar::{rat, Gauss, Rat};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

pub fn rng() -> ChaCha8Rng {
    let seed = std::env::var("FLAGJ_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(0xF1A6);
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn setup(name: &str) -> (RootSystem, StructureConstants, RegularElement) {
    let rs = RootSystem::build(AlgebraSpec::parse(name).unwrap()).unwrap();
    let sc = StructureConstants::build(&rs).unwrap();
    let h = RegularElement::ones(rs.rank());
    (rs, sc, h)
}

pub fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn rand_rat_nonzero(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let r = rand_rat(rng);
        if !num::Zero::is_zero(&r) {
            return r;
        }
    }
}

pub fn rand_rat_positive(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(1..=5), rng.gen_range(1..=3))
}

pub fn rand_gauss(rng: &mut ChaCha8Rng) -> Gauss {
    Gauss::new(rand_rat(rng), rand_rat(rng))
}

pub fn rand_gauss_nonzero(rng: &mut ChaCha8Rng) -> Gauss {
    loop {
        let g = rand_gauss(rng);
        if !g.is_zero() {
            return g;
        }
    }
}

/// Valid random block; non-complex parameters via the `(a, x) → y`
/// generator, so the constraint holds by construction.
pub fn rand_block(rng: &mut ChaCha8Rng) -> RootJ {
    match rng.gen_range(0..4u8) {
        0 => RootJ::complex(true),
        1 => RootJ::complex(false),
        _ => RootJ::from_ax(rand_rat(rng), rand_rat_nonzero(rng)).unwrap(),
    }
}

/// Fully random valid structure (mixed block types).
pub fn rand_structure(rng: &mut ChaCha8Rng, rs: &RootSystem) -> Structure {
    let mut s = Structure::all_complex(rs, true);
    for idx in 0..rs.num_positive() {
        s.set_block(idx, rand_block(rng));
    }
    s
}

/// Random integrable structure: a random Θ with random positive seeds and
/// a random admissible sign assignment, sometimes globally negated.
pub fn rand_integrable(rng: &mut ChaCha8Rng, rs: &RootSystem) -> Structure {
    let rank = rs.rank();
    'outer: for _ in 0..400 {
        let mask: u32 = rng.gen_range(0..(1u32 << rank));
        let theta: BTreeSet<usize> = (0..rank).filter(|i| mask & (1 << i) != 0).collect();
        let mut seeds = Seeds::new();
        for &i in &theta {
            seeds.insert(i, (rand_rat(rng), rand_rat_positive(rng)));
        }
        let closure = rs.theta_closure(&theta);
        let mut signs = BTreeMap::new();
        for idx in 0..rs.num_positive() {
            if !closure.contains(&idx) {
                signs.insert(idx, rng.gen_bool(0.5));
            }
        }
        let s = match classify::construct_from_theta(rs, &theta, &seeds, Some(&signs)) {
            Ok(s) => s,
            Err(_) => continue 'outer,
        };
        return if rng.gen_bool(0.5) { s.negated() } else { s };
    }
    // all-complex(+) is always integrable
    Structure::all_complex(rs, true)
}
