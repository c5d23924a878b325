//! Theorem-level integrability: the per-triple decision table, Θ
//! extraction, and closed-form parameter propagation for the non-complex
//! part.
//!
//! For a zero-sum triple with all three blocks non-complex, integrability
//! is the exact system
//!
//! ```text
//! a_{α+β} x_α x_β - a_β x_α x_{α+β} - a_α x_β x_{α+β} = 0
//! x_α x_β - x_α x_{α+β} - x_β x_{α+β} = 0
//! ```
//!
//! whose unique solution given the summand parameters is the weighted
//! harmonic recombination `x_{α+β} = x_α x_β/(x_α + x_β)`,
//! `a_{α+β} = (a_β x_α + a_α x_β)/(x_α + x_β)`.

use crate::gacs::{validate_or_err, RootJ, Structure};
use crate::rootsystem::{RootSystem, Triple};
use crate::scalar::{Rat, rat_i};
use crate::FlagError;
use num::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TripleStatus {
    Integrable,
    Obstructed,
}

#[derive(Clone, PartialEq, Debug)]
pub struct TripleVerdict {
    pub status: TripleStatus,
    /// Case tag, e.g. "complex-sign-clash" or "system-violated".
    pub case: &'static str,
    /// Residuals of the two-equation system, for all-non-complex triples.
    pub residuals: Option<(Rat, Rat)>,
}

impl TripleVerdict {
    fn ok(case: &'static str) -> Self {
        TripleVerdict {
            status: TripleStatus::Integrable,
            case,
            residuals: None,
        }
    }

    fn bad(case: &'static str) -> Self {
        TripleVerdict {
            status: TripleStatus::Obstructed,
            case,
            residuals: None,
        }
    }

    pub fn is_integrable(&self) -> bool {
        self.status == TripleStatus::Integrable
    }
}

fn sign_of(j: &RootJ) -> Option<bool> {
    match j {
        RootJ::Complex { pos } => Some(*pos),
        RootJ::NonComplex { .. } => None,
    }
}

/// Residuals of the non-complex system on `(jα, jβ, j_{α+β})`.
pub fn system_residuals(ja: &RootJ, jb: &RootJ, jsum: &RootJ) -> Option<(Rat, Rat)> {
    match (ja, jb, jsum) {
        (
            RootJ::NonComplex { a: aa, x: xa, .. },
            RootJ::NonComplex { a: ab, x: xb, .. },
            RootJ::NonComplex { a: ag, x: xg, .. },
        ) => {
            let r1 = ag * xa * xb - ab * xa * xg - aa * xb * xg;
            let r2 = xa * xb - xa * xg - xb * xg;
            Some((r1, r2))
        }
        _ => None,
    }
}

/// Complete decision table for one zero-sum triple.  Positions: `ja`, `jb`
/// at the summands, `jsum` at the sum.
pub fn triple_status(ja: &RootJ, jb: &RootJ, jsum: &RootJ) -> Result<TripleVerdict, FlagError> {
    for j in [ja, jb, jsum] {
        j.check()
            .map_err(FlagError::InvalidStructure)?;
    }
    let v = match (sign_of(ja), sign_of(jb), sign_of(jsum)) {
        (Some(sa), Some(sb), Some(ss)) => {
            if sa == sb && sa != ss {
                TripleVerdict::bad("complex-sign-clash")
            } else {
                TripleVerdict::ok("all-complex")
            }
        }
        (None, Some(sb), Some(ss)) => {
            if sb == ss {
                TripleVerdict::ok("one-noncomplex")
            } else {
                TripleVerdict::bad("one-noncomplex-sign-clash")
            }
        }
        (Some(sa), None, Some(ss)) => {
            if sa == ss {
                TripleVerdict::ok("one-noncomplex")
            } else {
                TripleVerdict::bad("one-noncomplex-sign-clash")
            }
        }
        (Some(sa), Some(sb), None) => {
            if sa != sb {
                TripleVerdict::ok("one-noncomplex")
            } else {
                TripleVerdict::bad("one-noncomplex-sign-clash")
            }
        }
        (None, None, Some(_)) | (None, Some(_), None) | (Some(_), None, None) => {
            TripleVerdict::bad("two-noncomplex-one-complex")
        }
        (None, None, None) => {
            let (r1, r2) = system_residuals(ja, jb, jsum).unwrap();
            let ok = r1.is_zero() && r2.is_zero();
            TripleVerdict {
                status: if ok {
                    TripleStatus::Integrable
                } else {
                    TripleStatus::Obstructed
                },
                case: if ok { "all-noncomplex" } else { "system-violated" },
                residuals: Some((r1, r2)),
            }
        }
    };
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct ClassifyOutcome {
    pub integrable: bool,
    pub failures: Vec<(Triple, TripleVerdict)>,
}

/// Apply the decision table to every zero-sum triple.
pub fn is_integrable(rs: &RootSystem, s: &Structure) -> Result<ClassifyOutcome, FlagError> {
    validate_or_err(s, rs)?;
    let mut failures = Vec::new();
    for t in rs.zero_sum_triples() {
        let v = triple_status(s.block(t.a), s.block(t.b), s.block(t.sum))?;
        if !v.is_integrable() {
            failures.push((*t, v));
        }
    }
    Ok(ClassifyOutcome {
        integrable: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaData {
    /// Simple-root indices carrying non-complex blocks.
    pub theta: BTreeSet<usize>,
    /// All positive roots with non-complex blocks; equals `⟨Θ⟩⁺`.
    pub noncomplex: BTreeSet<usize>,
}

/// For an integrable structure: Θ = simple roots with non-complex blocks.
/// Verifies that the non-complex set is exactly the closure `⟨Θ⟩⁺`.
pub fn extract_theta(rs: &RootSystem, s: &Structure) -> Result<ThetaData, FlagError> {
    let outcome = is_integrable(rs, s)?;
    if !outcome.integrable {
        return Err(FlagError::NotIntegrable);
    }
    let noncomplex: BTreeSet<usize> = (0..rs.num_positive())
        .filter(|&i| !s.block(i).is_complex())
        .collect();
    let theta: BTreeSet<usize> = noncomplex
        .iter()
        .copied()
        .filter(|&i| rs.is_simple(i))
        .collect();
    let closure = rs.theta_closure(&theta);
    if closure != noncomplex {
        return Err(FlagError::Internal(format!(
            "non-complex support {:?} is not the closure of its simple part {:?}",
            noncomplex, theta
        )));
    }
    Ok(ThetaData { theta, noncomplex })
}

/// The signed selection of Prop.-style positivity: `+γ` when the block is
/// `+J₀` or non-complex with `x > 0`, else `-γ`.  Always closed for an
/// integrable structure.
pub fn positive_system(rs: &RootSystem, s: &Structure) -> Result<Vec<bool>, FlagError> {
    let outcome = is_integrable(rs, s)?;
    if !outcome.integrable {
        return Err(FlagError::NotIntegrable);
    }
    let sel: Vec<bool> = s
        .blocks()
        .iter()
        .map(|j| match j {
            RootJ::Complex { pos } => *pos,
            RootJ::NonComplex { x, .. } => x.is_positive(),
        })
        .collect();
    if !rs.check_positive_system(&sel)? {
        return Err(FlagError::Internal(
            "positive selection of an integrable structure is not closed".into(),
        ));
    }
    Ok(sel)
}

/// Seeds for the non-complex part: `(a, x)` per simple root in Θ.
pub type Seeds = BTreeMap<usize, (Rat, Rat)>;

fn check_seeds(rs: &RootSystem, theta: &BTreeSet<usize>, seeds: &Seeds) -> Result<(), FlagError> {
    for &i in theta {
        if !rs.is_simple(i) {
            return Err(FlagError::UnknownRoot(format!(
                "'{}' is not a simple root",
                rs.root_name(i)
            )));
        }
    }
    for &i in theta {
        match seeds.get(&i) {
            None => {
                return Err(FlagError::InvalidStructure(format!(
                    "missing seed for '{}'",
                    rs.root_name(i)
                )))
            }
            Some((_, x)) if x.is_zero() => {
                return Err(FlagError::InvalidStructure(format!(
                    "seed x for '{}' must be nonzero",
                    rs.root_name(i)
                )))
            }
            Some(_) => {}
        }
    }
    for i in seeds.keys() {
        if !theta.contains(i) {
            return Err(FlagError::InvalidStructure(format!(
                "seed given for '{}' outside theta",
                rs.root_name(*i)
            )));
        }
    }
    Ok(())
}

/// Closed-form parameters at `γ = Σ n_i α_i`:
/// `1/x_γ = Σ n_i/x_i` and `a_γ/x_γ = Σ n_i a_i/x_i`.
fn closed_form(
    rs: &RootSystem,
    gamma: usize,
    seeds: &Seeds,
) -> Result<(Rat, Rat), FlagError> {
    let coeffs = &rs.root(gamma).coeffs;
    let mut inv_x = Rat::zero();
    let mut a_over_x = Rat::zero();
    for (i, &n) in coeffs.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let (a, x) = &seeds[&i];
        inv_x += rat_i(n) / x;
        a_over_x += rat_i(n) * a / x;
    }
    if inv_x.is_zero() {
        return Err(FlagError::ZeroDenominator(rs.root_name(gamma)));
    }
    let x = inv_x.recip();
    let a = a_over_x * &x;
    Ok((a, x))
}

/// Build the integrable structure attached to Θ: non-complex blocks on
/// `⟨Θ⟩⁺` with parameters propagated from the seeds by the closed forms,
/// complex blocks elsewhere (sign `+` unless overridden).  Sign overrides
/// are validated against the decision table.
pub fn construct_from_theta(
    rs: &RootSystem,
    theta: &BTreeSet<usize>,
    seeds: &Seeds,
    signs: Option<&BTreeMap<usize, bool>>,
) -> Result<Structure, FlagError> {
    check_seeds(rs, theta, seeds)?;
    let closure = rs.theta_closure(theta);
    if let Some(signs) = signs {
        for idx in signs.keys() {
            if *idx >= rs.num_positive() || closure.contains(idx) {
                return Err(FlagError::InvalidStructure(format!(
                    "sign override for root outside the complex part: index {idx}"
                )));
            }
        }
    }

    let mut s = Structure::all_complex(rs, true);
    for &gamma in &closure {
        let (a, x) = closed_form(rs, gamma, seeds)?;
        s.set_block(gamma, RootJ::from_ax(a, x)?);
    }
    if let Some(signs) = signs {
        for (&idx, &pos) in signs {
            s.set_block(idx, RootJ::complex(pos));
        }
    }

    let outcome = is_integrable(rs, &s)?;
    if let Some((t, _)) = outcome.failures.first() {
        return Err(FlagError::SignTable(rs.triple_name(t)));
    }
    Ok(s)
}

/// Height-inductive two-root recombination; must agree with the closed
/// forms on every decomposition of every root.
pub fn propagate(
    rs: &RootSystem,
    theta: &BTreeSet<usize>,
    seeds: &Seeds,
) -> Result<Structure, FlagError> {
    check_seeds(rs, theta, seeds)?;
    let closure = rs.theta_closure(theta);

    let mut params: BTreeMap<usize, (Rat, Rat)> = BTreeMap::new();
    // closure is sorted by root index, hence by height
    for &gamma in &closure {
        if rs.is_simple(gamma) {
            params.insert(gamma, seeds[&gamma].clone());
            continue;
        }
        let mut value: Option<(Rat, Rat)> = None;
        for t in rs.zero_sum_triples().iter().filter(|t| t.sum == gamma) {
            if !(closure.contains(&t.a) && closure.contains(&t.b)) {
                continue;
            }
            let (aa, xa) = params[&t.a].clone();
            let (ab, xb) = params[&t.b].clone();
            let den = &xa + &xb;
            if den.is_zero() {
                return Err(FlagError::ZeroDenominator(rs.root_name(gamma)));
            }
            let x = &xa * &xb / &den;
            let a = (&ab * &xa + &aa * &xb) / &den;
            match &value {
                None => value = Some((a, x)),
                Some(prev) => {
                    if *prev != (a, x) {
                        return Err(FlagError::Internal(format!(
                            "decompositions of '{}' disagree during propagation",
                            rs.root_name(gamma)
                        )));
                    }
                }
            }
        }
        let (a, x) = value.ok_or_else(|| {
            FlagError::Internal(format!(
                "no decomposition found for '{}' inside the closure",
                rs.root_name(gamma)
            ))
        })?;
        params.insert(gamma, (a, x));
    }

    let mut s = Structure::all_complex(rs, true);
    for (&gamma, (a, x)) in &params {
        s.set_block(gamma, RootJ::from_ax(a.clone(), x.clone())?);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::AlgebraSpec;
    use crate::scalar::rat;

    fn rs(name: &str) -> RootSystem {
        RootSystem::build(AlgebraSpec::parse(name).unwrap()).unwrap()
    }

    fn c(pos: bool) -> RootJ {
        RootJ::complex(pos)
    }

    fn nc(a: i64, x: i64, y: i64) -> RootJ {
        RootJ::noncomplex(rat_i(a), rat_i(x), rat_i(y))
    }

    #[test]
    fn all_complex_table() {
        // obstructed exactly when the summand signs agree and differ
        // from the sum
        let rows = [
            ((true, true, true), true),
            ((true, false, true), true),
            ((false, true, false), true),
            ((false, false, false), true),
            ((true, true, false), false),
            ((false, false, true), false),
            ((true, false, false), true),
            ((false, true, true), true),
        ];
        for ((sa, sb, ss), ok) in rows {
            let v = triple_status(&c(sa), &c(sb), &c(ss)).unwrap();
            assert_eq!(v.is_integrable(), ok, "({sa},{sb},{ss})");
        }
    }

    #[test]
    fn mixed_table() {
        let n = nc(0, 1, 1);
        // non-complex at a summand: other two must share a sign
        assert!(triple_status(&n, &c(true), &c(true)).unwrap().is_integrable());
        assert!(!triple_status(&n, &c(true), &c(false)).unwrap().is_integrable());
        assert!(triple_status(&c(false), &n, &c(false)).unwrap().is_integrable());
        assert!(!triple_status(&c(false), &n, &c(true)).unwrap().is_integrable());
        // non-complex at the sum: summands must differ
        assert!(triple_status(&c(true), &c(false), &n).unwrap().is_integrable());
        assert!(!triple_status(&c(true), &c(true), &n).unwrap().is_integrable());
        // two non-complex always obstructed
        let v = triple_status(&n, &n, &c(true)).unwrap();
        assert!(!v.is_integrable());
        assert_eq!(v.case, "two-noncomplex-one-complex");
    }

    #[test]
    fn noncomplex_system() {
        // x = (1, 2, 2/3), a = (1, 1, 1): both residuals vanish
        let ja = RootJ::from_ax(rat_i(1), rat_i(1)).unwrap();
        let jb = RootJ::from_ax(rat_i(1), rat_i(2)).unwrap();
        let jg = RootJ::from_ax(rat_i(1), rat(2, 3)).unwrap();
        let v = triple_status(&ja, &jb, &jg).unwrap();
        assert!(v.is_integrable());
        assert_eq!(v.residuals, Some((Rat::zero(), Rat::zero())));

        // the worked example x = (1, 2, 1): second residual -1
        let jg = nc(1, 1, 2);
        let v = triple_status(&ja, &jb, &jg).unwrap();
        assert!(!v.is_integrable());
        assert_eq!(v.case, "system-violated");
        assert_eq!(v.residuals.unwrap().1, rat_i(-1));
    }

    #[test]
    fn structure_level() {
        let r = rs("A3");
        let s = Structure::all_complex(&r, true);
        assert!(is_integrable(&r, &s).unwrap().integrable);

        let mut s = Structure::all_complex(&r, true);
        let idx = r.parse_root("a1+a2").unwrap();
        s.set_block(idx, c(false));
        let out = is_integrable(&r, &s).unwrap();
        assert!(!out.integrable);
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].1.case, "complex-sign-clash");
    }

    #[test]
    fn theta_extraction() {
        let r = rs("A3");
        let all_c = Structure::all_complex(&r, true);
        let td = extract_theta(&r, &all_c).unwrap();
        assert!(td.theta.is_empty());

        // non-complex exactly on {a1, a2, a1+a2}
        let theta: BTreeSet<usize> = [0, 1].into_iter().collect();
        let seeds: Seeds = [(0, (rat_i(0), rat_i(1))), (1, (rat_i(2), rat_i(3)))]
            .into_iter()
            .collect();
        let s = construct_from_theta(&r, &theta, &seeds, None).unwrap();
        let td = extract_theta(&r, &s).unwrap();
        assert_eq!(td.theta, theta);
        assert_eq!(td.noncomplex, r.theta_closure(&theta));

        // all non-complex
        let theta: BTreeSet<usize> = (0..3).collect();
        let seeds: Seeds = (0..3).map(|i| (i, (rat_i(0), rat_i(1 + i as i64)))).collect();
        let s = construct_from_theta(&r, &theta, &seeds, None).unwrap();
        let td = extract_theta(&r, &s).unwrap();
        assert_eq!(td.theta.len(), 3);

        // not integrable → rejected
        let mut bad = Structure::all_complex(&r, true);
        bad.set_block(r.parse_root("a1+a2").unwrap(), c(false));
        assert!(matches!(
            extract_theta(&r, &bad),
            Err(FlagError::NotIntegrable)
        ));
    }

    #[test]
    fn positive_systems() {
        let r = rs("A2");
        let s = Structure::all_complex(&r, true);
        assert_eq!(positive_system(&r, &s).unwrap(), vec![true; 3]);
        let s = Structure::all_complex(&r, false);
        assert_eq!(positive_system(&r, &s).unwrap(), vec![false; 3]);

        // mixed-sign x: integrable with x = (-1, 2, -2)
        let theta: BTreeSet<usize> = [0, 1].into_iter().collect();
        let seeds: Seeds = [(0, (rat_i(0), rat_i(-1))), (1, (rat_i(0), rat_i(2)))]
            .into_iter()
            .collect();
        let s = construct_from_theta(&r, &theta, &seeds, None).unwrap();
        let sel = positive_system(&r, &s).unwrap();
        assert_eq!(sel, vec![false, true, false]);
        assert!(r.check_positive_system(&sel).unwrap());
    }

    #[test]
    fn construction_closed_forms() {
        let r = rs("A3");
        let theta: BTreeSet<usize> = (0..3).collect();
        let seeds: Seeds = (0..3).map(|i| (i, (rat_i(0), rat_i(1)))).collect();
        let s = construct_from_theta(&r, &theta, &seeds, None).unwrap();
        let top = r.parse_root("a1+a2+a3").unwrap();
        match s.block(top) {
            RootJ::NonComplex { a, x, .. } => {
                assert_eq!(*x, rat(1, 3));
                assert_eq!(*a, Rat::zero());
            }
            _ => panic!("expected non-complex block"),
        }
        assert!(is_integrable(&r, &s).unwrap().integrable);

        // Θ = ∅ → all complex +
        let s = construct_from_theta(&r, &BTreeSet::new(), &Seeds::new(), None).unwrap();
        assert_eq!(&s, &Structure::all_complex(&r, true));
    }

    #[test]
    fn construction_zero_denominator() {
        let r = rs("A2");
        let theta: BTreeSet<usize> = [0, 1].into_iter().collect();
        let seeds: Seeds = [(0, (rat_i(0), rat_i(1))), (1, (rat_i(0), rat_i(-1)))]
            .into_iter()
            .collect();
        let err = construct_from_theta(&r, &theta, &seeds, None);
        assert!(matches!(err, Err(FlagError::ZeroDenominator(root)) if root == "a1+a2"));
    }

    #[test]
    fn construction_sign_table() {
        let r = rs("A2");
        // flipping only the sum root to -J₀ violates the table
        let signs: BTreeMap<usize, bool> = [(2, false)].into_iter().collect();
        let err = construct_from_theta(&r, &BTreeSet::new(), &Seeds::new(), Some(&signs));
        assert!(matches!(err, Err(FlagError::SignTable(_))));

        // a consistent non-default assignment passes
        let signs: BTreeMap<usize, bool> = [(0, false), (1, true), (2, false)]
            .into_iter()
            .collect();
        let s = construct_from_theta(&r, &BTreeSet::new(), &Seeds::new(), Some(&signs)).unwrap();
        assert!(is_integrable(&r, &s).unwrap().integrable);
    }

    #[test]
    fn propagation_matches_closed_forms() {
        let r = rs("A3");
        let theta: BTreeSet<usize> = (0..3).collect();
        let seeds: Seeds = [
            (0, (rat_i(1), rat_i(1))),
            (1, (rat(1, 2), rat_i(2))),
            (2, (rat_i(-1), rat(3, 2))),
        ]
        .into_iter()
        .collect();
        let a = construct_from_theta(&r, &theta, &seeds, None).unwrap();
        let b = propagate(&r, &theta, &seeds).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_root_recombination() {
        let r = rs("A2");
        let theta: BTreeSet<usize> = [0, 1].into_iter().collect();
        let seeds: Seeds = [(0, (rat_i(5), rat_i(1))), (1, (rat_i(5), rat_i(2)))]
            .into_iter()
            .collect();
        let s = propagate(&r, &theta, &seeds).unwrap();
        match s.block(2) {
            RootJ::NonComplex { a, x, .. } => {
                assert_eq!(*x, rat(2, 3));
                // equal a's propagate unchanged
                assert_eq!(*a, rat_i(5));
            }
            _ => panic!(),
        }
    }
}
