//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (`cargo test --test acceptance -- --nocapture` shows them all).

mod common;

use common::*;
use flagj::classify::{self, Seeds, TripleStatus};
use flagj::gacs::{self, RootJ, Structure};
use flagj::liealg::{bracket_u, p_value, RegularElement, StructureConstants, UElement, USym};
use flagj::nijenhuis::{self, eigenbasis_of, BruteOptions, DualSym, GeneralizedVector};
use flagj::rootsystem::{RootSystem, SignedRoot};
use flagj::scalar::{rat, rat_i, Gauss, Rat, Scalar};
use flagj::twisted::{self, InvariantThreeForm, SolveResult};
use num::{One, Zero};
use rand::Rng;
use std::collections::BTreeSet;
use std::time::Instant;

fn report(number: u32, name: &str, pass: bool, detail: &str, started: Instant) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {number} ({name}): {status} [{:.2}s] {detail}",
        started.elapsed().as_secs_f64()
    );
}

fn brute(
    rs: &RootSystem,
    sc: &StructureConstants,
    h: &RegularElement,
    s: &Structure,
) -> bool {
    nijenhuis::is_integrable_bruteforce(rs, sc, h, s, BruteOptions::default())
        .expect("valid structure")
        .integrable
}

/// 1. Classifier vs brute-force oracle on 500 random structures per
/// algebra, plus an exhaustive type-pattern sweep with fixed generic
/// parameters.
#[test]
fn acceptance_1_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = rng();
    let mut checked = 0u64;
    let mut disagreements = Vec::new();

    for name in ["A2", "A3", "B2", "G2"] {
        let (rs, sc, h) = setup(name);
        for trial in 0..500 {
            // mix plain random structures with integrable ones so both
            // verdicts appear
            let s = if trial % 3 == 0 {
                rand_integrable(&mut rng, &rs)
            } else {
                rand_structure(&mut rng, &rs)
            };
            let fast = classify::is_integrable(&rs, &s).unwrap().integrable;
            let slow = brute(&rs, &sc, &h, &s);
            checked += 1;
            if fast != slow {
                disagreements.push(format!("{name} trial {trial}: table={fast} brute={slow}"));
            }
        }

        // exhaustive sweep over block-type patterns, generic parameters
        let n = rs.num_positive();
        let generic: Vec<RootJ> = (0..n)
            .map(|i| RootJ::from_ax(rat_i(i as i64 + 1), rat(i as i64 + 2, 1)).unwrap())
            .collect();
        let mut pattern = vec![0u8; n];
        loop {
            let mut s = Structure::all_complex(&rs, true);
            for (idx, &p) in pattern.iter().enumerate() {
                s.set_block(
                    idx,
                    match p {
                        0 => RootJ::complex(true),
                        1 => RootJ::complex(false),
                        _ => generic[idx].clone(),
                    },
                );
            }
            let fast = classify::is_integrable(&rs, &s).unwrap().integrable;
            let slow = brute(&rs, &sc, &h, &s);
            checked += 1;
            if fast != slow {
                disagreements.push(format!("{name} pattern {pattern:?}"));
            }
            // next ternary pattern
            let mut carry = true;
            for digit in pattern.iter_mut() {
                if carry {
                    *digit += 1;
                    if *digit == 3 {
                        *digit = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
    }

    let pass = disagreements.is_empty();
    report(
        1,
        "oracle equivalence",
        pass,
        &format!("{checked} structures, {} disagreements", disagreements.len()),
        started,
    );
    assert!(pass, "{disagreements:?}");
}

/// 2. All 8 complex sign patterns on the A2 triple: 6 integrable, the two
/// obstructed ones have equal summand signs differing from the sum.
#[test]
fn acceptance_2_sign_pattern_table() {
    let started = Instant::now();
    let (rs, sc, h) = setup("A2");
    let mut integrable = 0;
    let mut obstructed = Vec::new();
    let mut agree = true;
    for bits in 0..8u8 {
        let signs = [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0];
        let mut s = Structure::all_complex(&rs, true);
        for (idx, &pos) in signs.iter().enumerate() {
            s.set_block(idx, RootJ::complex(pos));
        }
        let fast = classify::is_integrable(&rs, &s).unwrap().integrable;
        let slow = brute(&rs, &sc, &h, &s);
        agree &= fast == slow;
        if fast {
            integrable += 1;
        } else {
            obstructed.push(signs);
        }
    }
    let expected_obstructed =
        |s: &[bool; 3]| s[0] == s[1] && s[0] != s[2];
    let pass = agree
        && integrable == 6
        && obstructed.len() == 2
        && obstructed.iter().all(expected_obstructed);
    report(
        2,
        "sign-pattern table",
        pass,
        &format!("{integrable} integrable, obstructed = {obstructed:?}"),
        started,
    );
    assert!(pass);
}

/// 3. The printed basic Nijenhuis values on A2 and G2, with every other
/// single-dual pattern, all-vector, two-dual and two-root pattern zero.
#[test]
fn acceptance_3_basic_nijenhuis_values() {
    let started = Instant::now();
    let mut failures = Vec::new();

    #[derive(Clone, Copy)]
    enum Arg {
        VecA,
        VecS,
        DualA,
        DualS,
    }
    use Arg::*;

    let build = |arg: Arg, root: usize| -> GeneralizedVector {
        match arg {
            VecA => GeneralizedVector::vec_a(root, Scalar::one()),
            VecS => GeneralizedVector::vec_s(root, Scalar::one()),
            DualA => GeneralizedVector::dual(DualSym::A(root), Scalar::one()),
            DualS => GeneralizedVector::dual(DualSym::S(root), Scalar::one()),
        }
    };

    for name in ["A2", "G2"] {
        let (rs, sc, h) = setup(name);
        let i6 = Scalar::i().scale_rat(&rat(1, 6));
        for t in rs.zero_sum_triples() {
            let (a, b, g) = (t.a, t.b, t.sum);
            let m_ab = sc.get(SignedRoot::pos(a), SignedRoot::pos(b));
            let m_ga = sc.get(SignedRoot::minus(g), SignedRoot::pos(a));
            let m_bg = sc.get(SignedRoot::pos(b), SignedRoot::minus(g));

            // (pattern, expected multiple of i/6)
            let cases: Vec<([Arg; 3], Scalar)> = vec![
                // dual at the sum: ±(i/6) m_{α,β}
                ([VecA, VecS, DualA], m_ab.clone()),
                ([VecA, VecA, DualS], -&m_ab),
                ([VecS, VecS, DualS], m_ab.clone()),
                ([VecS, VecA, DualA], m_ab.clone()),
                ([VecA, VecA, DualA], Scalar::zero()),
                ([VecS, VecS, DualA], Scalar::zero()),
                ([VecA, VecS, DualS], Scalar::zero()),
                ([VecS, VecA, DualS], Scalar::zero()),
                // dual at β: ±(i/6) m_{-(α+β),α}
                ([VecA, DualS, VecA], -&m_ga),
                ([VecA, DualA, VecS], m_ga.clone()),
                ([VecS, DualS, VecS], -&m_ga),
                ([VecS, DualA, VecA], -&m_ga),
                ([VecA, DualA, VecA], Scalar::zero()),
                ([VecA, DualS, VecS], Scalar::zero()),
                ([VecS, DualA, VecS], Scalar::zero()),
                ([VecS, DualS, VecA], Scalar::zero()),
                // dual at α: ±(i/6) m_{β,-(α+β)}
                ([DualA, VecS, VecA], -&m_bg),
                ([DualA, VecA, VecS], m_bg.clone()),
                ([DualS, VecS, VecS], -&m_bg),
                ([DualS, VecA, VecA], -&m_bg),
                ([DualA, VecA, VecA], Scalar::zero()),
                ([DualA, VecS, VecS], Scalar::zero()),
                ([DualS, VecA, VecS], Scalar::zero()),
                ([DualS, VecS, VecA], Scalar::zero()),
            ];
            for (pattern, unit) in cases {
                let v1 = build(pattern[0], a);
                let v2 = build(pattern[1], b);
                let v3 = build(pattern[2], g);
                let got = nijenhuis::nij(&rs, &sc, &h, &v1, &v2, &v3);
                let expect = &i6 * &unit;
                if got != expect {
                    failures.push(format!("{name} {}", rs.triple_name(t)));
                }
            }

            // all-vector patterns vanish
            for bits in 0..8u8 {
                let pick = |k: u8| if bits & (1 << k) != 0 { VecS } else { VecA };
                let v1 = build(pick(0), a);
                let v2 = build(pick(1), b);
                let v3 = build(pick(2), g);
                if !nijenhuis::nij(&rs, &sc, &h, &v1, &v2, &v3).is_zero() {
                    failures.push(format!("{name} all-vector {}", rs.triple_name(t)));
                }
            }
            // two-dual patterns vanish
            for (p1, p2, p3) in [
                (DualA, DualS, VecA),
                (DualS, DualA, VecS),
                (DualA, DualA, DualA),
                (VecS, DualS, DualA),
            ] {
                let v1 = build(p1, a);
                let v2 = build(p2, b);
                let v3 = build(p3, g);
                if !nijenhuis::nij(&rs, &sc, &h, &v1, &v2, &v3).is_zero() {
                    failures.push(format!("{name} two-dual {}", rs.triple_name(t)));
                }
            }
            // two-root patterns vanish (tags α, α, β)
            for (p1, p2, p3) in [
                (VecA, VecS, DualA),
                (VecA, VecS, DualS),
                (VecA, DualA, VecA),
                (VecA, DualA, VecS),
                (VecA, DualS, VecA),
                (VecA, DualS, VecS),
                (VecS, DualA, VecA),
                (VecS, DualA, VecS),
                (VecS, DualS, VecA),
                (VecS, DualS, VecS),
            ] {
                let v1 = build(p1, a);
                let v2 = build(p2, a);
                let v3 = build(p3, b);
                if !nijenhuis::nij(&rs, &sc, &h, &v1, &v2, &v3).is_zero() {
                    failures.push(format!("{name} two-root {}", rs.triple_name(t)));
                }
            }
        }
    }

    let pass = failures.is_empty();
    report(
        3,
        "basic Nijenhuis values",
        pass,
        &format!("A2 and G2, all printed patterns; {} failures", failures.len()),
        started,
    );
    assert!(pass, "{failures:?}");
}

/// 4. On A3 with Θ = Σ: the closed forms equal height-inductive
/// propagation for 100 random positive seed vectors, including the
/// highest root with its two decompositions.
#[test]
fn acceptance_4_closed_forms() {
    let started = Instant::now();
    let mut rng = rng();
    let (rs, _, _) = setup("A3");
    let theta: BTreeSet<usize> = (0..3).collect();
    let top = rs.parse_root("a1+a2+a3").unwrap();
    let mut pass = true;

    for _ in 0..100 {
        let mut seeds = Seeds::new();
        for i in 0..3 {
            seeds.insert(i, (rand_rat(&mut rng), rand_rat_positive(&mut rng)));
        }
        let built = classify::construct_from_theta(&rs, &theta, &seeds, None).unwrap();
        // propagate asserts internally that every decomposition agrees
        let propagated = classify::propagate(&rs, &theta, &seeds).unwrap();
        pass &= built == propagated;

        // closed forms for the highest root, spelled out
        let (a1, x1) = seeds[&0].clone();
        let (a2, x2) = seeds[&1].clone();
        let (a3, x3) = seeds[&2].clone();
        let den = &x1 * &x2 + &x1 * &x3 + &x2 * &x3;
        let x_top = &x1 * &x2 * &x3 / &den;
        let a_top = (&a3 * &x1 * &x2 + &a2 * &x1 * &x3 + &a1 * &x2 * &x3) / &den;
        match built.block(top) {
            RootJ::NonComplex { a, x, .. } => {
                pass &= *a == a_top && *x == x_top;
            }
            _ => pass = false,
        }
        pass &= classify::is_integrable(&rs, &built).unwrap().integrable;
    }

    report(4, "closed-form propagation", pass, "100 random seeds on A3", started);
    assert!(pass);
}

/// 5. The golden worked example: untwisted-obstructed with second
/// residual -1, the twist Ω = (i-1)/24 with recovered potential, and
/// exhaustive twisted vanishing.
#[test]
fn acceptance_5_golden_example() {
    let started = Instant::now();
    let (rs, sc, h) = setup("A2");
    let mut s = Structure::all_complex(&rs, true);
    s.set_block(0, RootJ::noncomplex(rat_i(1), rat_i(1), rat_i(2)));
    s.set_block(1, RootJ::noncomplex(rat_i(1), rat_i(2), rat_i(1)));
    s.set_block(2, RootJ::noncomplex(rat_i(1), rat_i(1), rat_i(2)));

    let mut pass = true;
    let out = classify::is_integrable(&rs, &s).unwrap();
    pass &= !out.integrable;
    pass &= out.failures.len() == 1;
    let (_, verdict) = &out.failures[0];
    pass &= verdict.status == TripleStatus::Obstructed;
    pass &= verdict.residuals.as_ref().map(|r| r.1 == rat_i(-1)) == Some(true);

    let solved = twisted::solve_omega(&rs, &sc, &s).unwrap();
    let golden = Scalar::from_gauss(Gauss::new(rat(-1, 24), rat(1, 24)));
    match solved {
        SolveResult::Feasible { omega3, potential } => {
            let t = rs.zero_sum_triples()[0];
            pass &= omega3.value(&t) == golden;
            match potential {
                Some(w) => {
                    pass &= w.value(0) == Gauss::new(rat(-1, 12), rat(1, 12));
                    pass &= w.value(1) == Gauss::new(rat(-1, 24), rat(1, 24));
                    pass &= w.value(2) == Gauss::new(rat(-1, 12), rat(1, 12));
                    pass &= twisted::d_omega(&rs, &sc, &w) == omega3;
                }
                None => pass = false,
            }
            // twisted Nijenhuis vanishes on every eigenbasis triple
            let basis = eigenbasis_of(&s, &rs);
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    for k in j + 1..basis.len() {
                        let v = twisted::nij_twisted(
                            &rs, &sc, &h, &omega3, &basis[i].1, &basis[j].1, &basis[k].1,
                        );
                        pass &= v.is_zero();
                    }
                }
            }
            pass &= twisted::is_omega_integrable(&rs, &sc, &s, &omega3).unwrap().ok;
        }
        SolveResult::Infeasible { .. } => pass = false,
    }

    report(
        5,
        "golden twisted example",
        pass,
        "residual -1, omega (i-1)/24, potential recovered, twisted Nij = 0",
        started,
    );
    assert!(pass);
}

/// 6. Untwisted-integrable all-non-complex structures are Ω-integrable
/// exactly for Ω ≡ 0 (50 random instances on A2/A3).
#[test]
fn acceptance_6_zero_omega_corollary() {
    let started = Instant::now();
    let mut rng = rng();
    let mut pass = true;
    for trial in 0..50 {
        let name = if trial % 2 == 0 { "A2" } else { "A3" };
        let (rs, sc, _) = setup(name);
        let theta: BTreeSet<usize> = (0..rs.rank()).collect();
        let mut seeds = Seeds::new();
        for i in 0..rs.rank() {
            seeds.insert(i, (rand_rat(&mut rng), rand_rat_positive(&mut rng)));
        }
        let s = classify::construct_from_theta(&rs, &theta, &seeds, None).unwrap();
        assert!(classify::is_integrable(&rs, &s).unwrap().integrable);

        pass &= twisted::is_omega_integrable(&rs, &sc, &s, &InvariantThreeForm::zero())
            .unwrap()
            .ok;

        // any nonzero invariant 3-form breaks it
        let triples = rs.zero_sum_triples();
        let t = triples[rng.gen_range(0..triples.len())];
        let mut omega3 = InvariantThreeForm::zero();
        omega3.set(&t, Scalar::from_gauss(rand_gauss_nonzero(&mut rng)));
        pass &= !twisted::is_omega_integrable(&rs, &sc, &s, &omega3).unwrap().ok;
    }
    report(6, "zero-twist corollary", pass, "50 instances on A2/A3", started);
    assert!(pass);
}

/// 7. Structure-constant identities on A3, B3, C3, G2: antisymmetry, the
/// negation rule, the cyclic identity, |m| = p+1, and the Jacobi identity,
/// exhaustively.
#[test]
fn acceptance_7_structure_constant_identities() {
    let started = Instant::now();
    let mut failures: Vec<String> = Vec::new();

    for name in ["A3", "B3", "C3", "G2"] {
        let (rs, sc, _) = setup(name);
        let n = rs.num_positive();

        let signed = |i: usize, neg: bool| SignedRoot { idx: i, neg };
        for i in 0..n {
            for &si in &[false, true] {
                for j in 0..n {
                    for &sj in &[false, true] {
                        let u = signed(i, si);
                        let v = signed(j, sj);
                        if rs.root_add(u, v).is_none() {
                            if !sc.get(u, v).is_zero() {
                                failures.push(format!("{name}: nonzero m off roots"));
                            }
                            continue;
                        }
                        let m = sc.get(u, v);
                        if m.is_zero() {
                            failures.push(format!("{name}: zero m on a root pair"));
                        }
                        if sc.get(v, u) != -m.clone() {
                            failures.push(format!("{name}: antisymmetry"));
                        }
                        if sc.get(u.negated(), v.negated()) != -m.clone() {
                            failures.push(format!("{name}: negation rule"));
                        }
                        // |m| = p+1
                        let p = p_value(&rs, u, v);
                        let expected_sq = Scalar::from_int(((p + 1) * (p + 1)) as i64);
                        if &m * &m != expected_sq {
                            failures.push(format!(
                                "{name}: |m({},{})| != p+1 = {} (m^2 = {})",
                                rs.signed_name(u),
                                rs.signed_name(v),
                                p + 1,
                                &m * &m,
                            ));
                        }
                    }
                }
            }
        }

        // cyclic identity on zero-sum triples
        for t in rs.zero_sum_triples() {
            let a = SignedRoot::pos(t.a);
            let b = SignedRoot::pos(t.b);
            let g = SignedRoot::minus(t.sum);
            let (m1, m2, m3) = (sc.get(a, b), sc.get(b, g), sc.get(g, a));
            if m1 != m2 || m2 != m3 {
                failures.push(format!("{name}: cyclic identity at {}", rs.triple_name(t)));
            }
        }

        // Jacobi identity over the whole compact-form basis
        let mut basis: Vec<UElement> = Vec::new();
        for i in 0..n {
            basis.push(UElement::a(i));
            basis.push(UElement::s(i));
        }
        for k in 0..rs.rank() {
            basis.push(UElement::sym(USym::IH(k)));
        }
        let dim = basis.len();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let t1 = bracket_u(&rs, &sc, &basis[i], &bracket_u(&rs, &sc, &basis[j], &basis[k]));
                    let t2 = bracket_u(&rs, &sc, &basis[j], &bracket_u(&rs, &sc, &basis[k], &basis[i]));
                    let t3 = bracket_u(&rs, &sc, &basis[k], &bracket_u(&rs, &sc, &basis[i], &basis[j]));
                    if !t1.add(&t2).add(&t3).is_zero() {
                        failures.push(format!("{name}: Jacobi at ({i},{j},{k})"));
                    }
                }
            }
        }
    }

    let pass = failures.is_empty();
    let mut detail = String::from("antisymmetry, negation, cyclic, |m|=p+1, Jacobi on A3/B3/C3/G2");
    if !pass {
        detail.push_str(&format!(
            "; {} failures, first: {}",
            failures.len(),
            failures[0]
        ));
    }
    report(7, "structure-constant identities", pass, &detail, started);
    assert!(pass, "{}", failures.join("\n"));
}

/// 8. H-independence of eigenbasis Nijenhuis values across 5 random
/// regular elements, and verdict invariance under eigenvector rescaling.
#[test]
fn acceptance_8_h_independence_and_scaling() {
    let started = Instant::now();
    let mut rng = rng();
    let mut pass = true;

    for name in ["A2", "B2"] {
        let (rs, sc, _) = setup(name);
        for trial in 0..6 {
            let s = if trial % 2 == 0 {
                rand_integrable(&mut rng, &rs)
            } else {
                rand_structure(&mut rng, &rs)
            };
            let basis = eigenbasis_of(&s, &rs);
            let nvec = basis.len();

            let mut reference: Option<Vec<Scalar>> = None;
            for _ in 0..5 {
                let c: Vec<Rat> = (0..rs.rank()).map(|_| rand_rat_positive(&mut rng)).collect();
                let h = RegularElement::new(c).unwrap();
                let mut vals = Vec::new();
                for i in 0..nvec {
                    for j in i + 1..nvec {
                        for k in j + 1..nvec {
                            vals.push(nijenhuis::nij(&rs, &sc, &h, &basis[i].1, &basis[j].1, &basis[k].1));
                        }
                    }
                }
                match &reference {
                    None => reference = Some(vals),
                    Some(r) => pass &= r == &vals,
                }
            }

            // rescaling eigenvectors never changes the verdict
            let h = RegularElement::ones(rs.rank());
            let scaled: Vec<GeneralizedVector> = basis
                .iter()
                .map(|(_, v)| v.scaled(&Scalar::from_gauss(rand_gauss_nonzero(&mut rng))))
                .collect();
            let vanish = |vs: &[GeneralizedVector]| -> bool {
                for i in 0..vs.len() {
                    for j in i + 1..vs.len() {
                        for k in j + 1..vs.len() {
                            if !nijenhuis::nij(&rs, &sc, &h, &vs[i], &vs[j], &vs[k]).is_zero() {
                                return false;
                            }
                        }
                    }
                }
                true
            };
            let plain: Vec<GeneralizedVector> = basis.iter().map(|(_, v)| v.clone()).collect();
            pass &= vanish(&plain) == vanish(&scaled);
        }
    }

    report(
        8,
        "H-independence and scale invariance",
        pass,
        "A2/B2, 6 structures each, 5 regular elements",
        started,
    );
    assert!(pass);
}

/// 9. The positive selection of 200 random integrable structures is a
/// closed system.
#[test]
fn acceptance_9_positive_system() {
    let started = Instant::now();
    let mut rng = rng();
    let mut pass = true;
    for trial in 0..200 {
        let name = match trial % 3 {
            0 => "A2",
            1 => "A3",
            _ => "B2",
        };
        let (rs, _, _) = setup(name);
        let s = rand_integrable(&mut rng, &rs);
        match classify::positive_system(&rs, &s) {
            Ok(sel) => pass &= rs.check_positive_system(&sel).unwrap(),
            Err(_) => pass = false,
        }
    }
    report(9, "positive-system property", pass, "200 integrable structures", started);
    assert!(pass);
}

/// The brute-force oracle also certifies structures built by
/// `construct_from_theta` (cross-path witness for criterion 1).
#[test]
fn constructed_structures_pass_the_oracle() {
    let mut rng = rng();
    for name in ["A2", "B2", "G2"] {
        let (rs, sc, h) = setup(name);
        for _ in 0..10 {
            let s = rand_integrable(&mut rng, &rs);
            assert!(brute(&rs, &sc, &h, &s), "{name}");
        }
    }
}

/// Twisted-oracle equivalence: the Ω-integrability verdict equals
/// exhaustive vanishing of the twisted form on the eigenbasis.
#[test]
fn twisted_oracle_equivalence() {
    let mut rng = rng();
    for name in ["A2", "A3", "B2"] {
        let (rs, sc, h) = setup(name);
        for trial in 0..100 {
            let s = if trial % 2 == 0 {
                rand_integrable(&mut rng, &rs)
            } else {
                rand_structure(&mut rng, &rs)
            };
            // random 3-form, sometimes the solved one
            let omega3 = if trial % 5 == 0 {
                match twisted::solve_omega(&rs, &sc, &s).unwrap() {
                    SolveResult::Feasible { omega3, .. } => omega3,
                    SolveResult::Infeasible { .. } => InvariantThreeForm::zero(),
                }
            } else {
                let mut o = InvariantThreeForm::zero();
                for t in rs.zero_sum_triples() {
                    if rng.gen_bool(0.5) {
                        o.set(t, Scalar::from_gauss(rand_gauss(&mut rng)));
                    }
                }
                o
            };

            let verdict = twisted::is_omega_integrable(&rs, &sc, &s, &omega3).unwrap().ok;

            let basis = eigenbasis_of(&s, &rs);
            let mut vanish = true;
            'outer: for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    for k in j + 1..basis.len() {
                        if !twisted::nij_twisted(&rs, &sc, &h, &omega3, &basis[i].1, &basis[j].1, &basis[k].1)
                            .is_zero()
                        {
                            vanish = false;
                            break 'outer;
                        }
                    }
                }
            }
            assert_eq!(verdict, vanish, "{name} trial {trial}");
        }
    }
}

/// solve_omega output always verifies (round trip).
#[test]
fn solve_omega_round_trip() {
    let mut rng = rng();
    for name in ["A2", "A3", "B2"] {
        let (rs, sc, _) = setup(name);
        for _ in 0..60 {
            let s = rand_structure(&mut rng, &rs);
            if let SolveResult::Feasible { omega3, .. } = twisted::solve_omega(&rs, &sc, &s).unwrap() {
                assert!(
                    twisted::is_omega_integrable(&rs, &sc, &s, &omega3).unwrap().ok,
                    "{name}"
                );
            }
        }
    }
}

/// extract_theta inverts construct_from_theta.
#[test]
fn extract_theta_inverts_construction() {
    let mut rng = rng();
    for name in ["A2", "A3", "B3"] {
        let (rs, _, _) = setup(name);
        let rank = rs.rank();
        for _ in 0..40 {
            let mask: u32 = rng.gen_range(0..(1u32 << rank));
            let theta: BTreeSet<usize> = (0..rank).filter(|i| mask & (1 << i) != 0).collect();
            let mut seeds = Seeds::new();
            for &i in &theta {
                seeds.insert(i, (rand_rat(&mut rng), rand_rat_positive(&mut rng)));
            }
            let s = classify::construct_from_theta(&rs, &theta, &seeds, None).unwrap();
            let td = classify::extract_theta(&rs, &s).unwrap();
            assert_eq!(td.theta, theta, "{name}");
            assert_eq!(td.noncomplex, rs.theta_closure(&theta), "{name}");
        }
    }
}

/// Positive seeds propagate to positive x on the whole closure.
#[test]
fn positivity_closure() {
    let mut rng = rng();
    for name in ["A3", "B3", "G2"] {
        let (rs, _, _) = setup(name);
        let theta: BTreeSet<usize> = (0..rs.rank()).collect();
        for _ in 0..25 {
            let mut seeds = Seeds::new();
            for i in 0..rs.rank() {
                seeds.insert(i, (rand_rat(&mut rng), rand_rat_positive(&mut rng)));
            }
            let s = classify::construct_from_theta(&rs, &theta, &seeds, None).unwrap();
            for idx in 0..rs.num_positive() {
                match s.block(idx) {
                    RootJ::NonComplex { x, .. } => {
                        assert!(x > &Rat::zero(), "{name} {}", rs.root_name(idx))
                    }
                    _ => panic!("all blocks must be non-complex"),
                }
            }
        }
    }
}

/// Structures stay valid under gacs validation after construction.
#[test]
fn constructed_structures_validate() {
    let mut rng = rng();
    let (rs, _, _) = setup("B3");
    for _ in 0..30 {
        let s = rand_integrable(&mut rng, &rs);
        assert!(gacs::validate(&s, &rs).is_ok());
    }
}
