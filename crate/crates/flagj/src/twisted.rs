//! Invariant 2-forms, their exterior derivatives, and Ω-twisted
//! integrability.
//!
//! An invariant 2-form enters only through its diagonal values
//! `ω_γ = ω(X_γ, X_{-γ})`; its differential on a zero-sum triple is
//! `Ω(X_α, X_β, X_{-(α+β)}) = m_{α,β}(ω_α + ω_β - ω_{α+β})` with no
//! additional prefactor.  A closed 3-form twists the Nijenhuis form by
//! `Nij_Ω = Nij + Ω(vector parts)`, and on an all-non-complex triple
//! `Nij_Ω|_L = 0` pins Ω to
//!
//! ```text
//! Ω₀ = m_{α,β}/12 · ( (a_{α+β}-i)/x_{α+β} - (a_β-i)/x_β - (a_α-i)/x_α )
//! ```

use crate::classify::{self, TripleVerdict};
use crate::gacs::{validate_or_err, RootJ, Structure};
use crate::liealg::{RegularElement, StructureConstants, USym};
use crate::nijenhuis::{self, GeneralizedVector};
use crate::rootsystem::{RootSystem, SignedRoot, Triple};
use crate::scalar::{rat, Gauss, Rat, Scalar};
use crate::FlagError;
use num::One;
use std::collections::BTreeMap;

/// Invariant 2-form through its diagonal values `ω_γ`; absent roots are 0.
#[derive(Clone, Default, PartialEq, Debug)]
pub struct InvariantTwoForm {
    diag: BTreeMap<usize, Gauss>,
}

impl InvariantTwoForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn set(&mut self, idx: usize, value: Gauss) {
        if value.is_zero() {
            self.diag.remove(&idx);
        } else {
            self.diag.insert(idx, value);
        }
    }

    pub fn value(&self, idx: usize) -> Gauss {
        self.diag.get(&idx).cloned().unwrap_or_else(Gauss::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&usize, &Gauss)> {
        self.diag.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.diag.is_empty()
    }
}

/// Invariant 3-form through its values `Ω(X_α, X_β, X_{-(α+β)})` on the
/// canonically ordered zero-sum triples.
#[derive(Clone, Default, PartialEq, Debug)]
pub struct InvariantThreeForm {
    vals: BTreeMap<(usize, usize), Scalar>,
}

impl InvariantThreeForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn set(&mut self, t: &Triple, value: Scalar) {
        if value.is_zero() {
            self.vals.remove(&(t.a, t.b));
        } else {
            self.vals.insert((t.a, t.b), value);
        }
    }

    pub fn value(&self, t: &Triple) -> Scalar {
        self.vals
            .get(&(t.a, t.b))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// Evaluate on `X`-basis elements at arbitrary signed roots, using
    /// antisymmetry and `Ω(X_{-α},X_{-β},X_{-γ}) = Ω(X_α,X_β,X_γ)`.
    pub fn on_x(&self, rs: &RootSystem, d: [SignedRoot; 3]) -> Scalar {
        let mut sum = vec![0i64; rs.rank()];
        for r in &d {
            for (acc, v) in sum.iter_mut().zip(rs.signed_coeffs(*r)) {
                *acc += v;
            }
        }
        if sum.iter().any(|&c| c != 0) {
            return Scalar::zero();
        }
        let mut dd = d;
        let pos_count = dd.iter().filter(|r| !r.neg).count();
        if pos_count == 1 {
            for r in &mut dd {
                *r = r.negated();
            }
        }
        let mut positives: Vec<usize> = dd.iter().filter(|r| !r.neg).map(|r| r.idx).collect();
        positives.sort_unstable();
        let (a, b) = (positives[0], positives[1]);
        let k = dd.iter().find(|r| r.neg).map(|r| r.idx).unwrap();
        let stored = match self.vals.get(&(a, b)) {
            Some(v) => v.clone(),
            None => return Scalar::zero(),
        };
        let target = [
            SignedRoot::pos(a),
            SignedRoot::pos(b),
            SignedRoot::minus(k),
        ];
        if permutation_parity(&dd, &target) {
            stored
        } else {
            -stored
        }
    }
}

/// True for an even permutation taking `from` to `to` (three distinct
/// entries).
fn permutation_parity(from: &[SignedRoot; 3], to: &[SignedRoot; 3]) -> bool {
    let perm: Vec<usize> = to
        .iter()
        .map(|t| from.iter().position(|f| f == t).expect("permuted entries"))
        .collect();
    let mut inversions = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Exterior differential of an invariant 2-form, on zero-sum triples.
pub fn d_omega(
    rs: &RootSystem,
    sc: &StructureConstants,
    omega: &InvariantTwoForm,
) -> InvariantThreeForm {
    let mut out = InvariantThreeForm::zero();
    for t in rs.zero_sum_triples() {
        let m = sc.get(SignedRoot::pos(t.a), SignedRoot::pos(t.b));
        let g = omega.value(t.a) + omega.value(t.b) - omega.value(t.sum);
        out.set(t, m.scale_gauss(&g));
    }
    out
}

/// `A`/`S` letter for the compact-form expansion of 3-form values.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ASym {
    A,
    S,
}

/// Evaluate a 3-form on compact-form elements `A_γ`/`S_γ` by expanding
/// into the `X` basis.
pub fn omega_as(
    omega3: &InvariantThreeForm,
    rs: &RootSystem,
    args: [(usize, ASym); 3],
) -> Scalar {
    let expand = |(idx, letter): (usize, ASym)| -> [(SignedRoot, Gauss); 2] {
        match letter {
            ASym::A => [
                (SignedRoot::pos(idx), Gauss::one()),
                (SignedRoot::minus(idx), -Gauss::one()),
            ],
            ASym::S => [
                (SignedRoot::pos(idx), Gauss::i()),
                (SignedRoot::minus(idx), Gauss::i()),
            ],
        }
    };
    let e1 = expand(args[0]);
    let e2 = expand(args[1]);
    let e3 = expand(args[2]);
    let mut acc = Scalar::zero();
    for (r1, c1) in &e1 {
        for (r2, c2) in &e2 {
            for (r3, c3) in &e3 {
                let v = omega3.on_x(rs, [*r1, *r2, *r3]);
                if !v.is_zero() {
                    let coeff = &(c1 * c2) * c3;
                    acc = &acc + &v.scale_gauss(&coeff);
                }
            }
        }
    }
    acc
}

/// 3-form value on one triple in a given `A`/`S` pattern, arguments in
/// triple order `(α, β, α+β)`.
pub fn omega_on_as(
    omega3: &InvariantThreeForm,
    rs: &RootSystem,
    t: &Triple,
    pattern: [ASym; 3],
) -> Scalar {
    omega_as(
        omega3,
        rs,
        [
            (t.a, pattern[0]),
            (t.b, pattern[1]),
            (t.sum, pattern[2]),
        ],
    )
}

/// Twisted Nijenhuis form: `nij` plus the 3-form on the vector parts.
pub fn nij_twisted(
    rs: &RootSystem,
    sc: &StructureConstants,
    h: &RegularElement,
    omega3: &InvariantThreeForm,
    a: &GeneralizedVector,
    b: &GeneralizedVector,
    c: &GeneralizedVector,
) -> Scalar {
    let mut acc = nijenhuis::nij(rs, sc, h, a, b, c);
    for (s1, c1) in a.vec.terms() {
        for (s2, c2) in b.vec.terms() {
            for (s3, c3) in c.vec.terms() {
                let args = match (as_letter(s1), as_letter(s2), as_letter(s3)) {
                    (Some(l1), Some(l2), Some(l3)) => [l1, l2, l3],
                    _ => continue,
                };
                let v = omega_as(omega3, rs, args);
                if !v.is_zero() {
                    acc = &acc + &(&(&v * c1) * &(c2 * c3));
                }
            }
        }
    }
    acc
}

fn as_letter(sym: &USym) -> Option<(usize, ASym)> {
    match sym {
        USym::A(i) => Some((*i, ASym::A)),
        USym::S(i) => Some((*i, ASym::S)),
        USym::IH(_) => None,
    }
}

/// The unique 3-form value making an all-non-complex triple Ω-integrable.
pub fn required_omega(
    sc: &StructureConstants,
    t: &Triple,
    ja: &RootJ,
    jb: &RootJ,
    jsum: &RootJ,
) -> Scalar {
    let term = |j: &RootJ| -> Gauss {
        match j {
            RootJ::NonComplex { a, x, .. } => Gauss::new(a / x, -(Rat::one() / x)),
            RootJ::Complex { .. } => unreachable!("required_omega needs non-complex blocks"),
        }
    };
    let g = term(jsum) - term(ja) - term(jb);
    let m = sc.get(SignedRoot::pos(t.a), SignedRoot::pos(t.b));
    m.scale_gauss(&g).scale_rat(&rat(1, 12))
}

#[derive(Clone, Debug)]
pub enum OmegaIssue {
    /// The triple is not all non-complex and fails the untwisted table.
    Untwisted(TripleVerdict),
    /// All-non-complex triple whose Ω value differs from the forced one.
    Mismatch { required: Scalar, given: Scalar },
}

#[derive(Clone, Debug)]
pub struct OmegaOutcome {
    pub ok: bool,
    pub failures: Vec<(Triple, OmegaIssue)>,
}

/// Ω-integrability of a structure: triples that are not all non-complex
/// must pass the untwisted table (the twist cannot help or hurt there);
/// all-non-complex triples need Ω to equal the forced value exactly.
pub fn is_omega_integrable(
    rs: &RootSystem,
    sc: &StructureConstants,
    s: &Structure,
    omega3: &InvariantThreeForm,
) -> Result<OmegaOutcome, FlagError> {
    validate_or_err(s, rs)?;
    let mut failures = Vec::new();
    for t in rs.zero_sum_triples() {
        let (ja, jb, jsum) = (s.block(t.a), s.block(t.b), s.block(t.sum));
        let all_nc = !ja.is_complex() && !jb.is_complex() && !jsum.is_complex();
        if all_nc {
            let required = required_omega(sc, t, ja, jb, jsum);
            let given = omega3.value(t);
            if required != given {
                failures.push((*t, OmegaIssue::Mismatch { required, given }));
            }
        } else {
            let v = classify::triple_status(ja, jb, jsum)?;
            if !v.is_integrable() {
                failures.push((*t, OmegaIssue::Untwisted(v)));
            }
        }
    }
    Ok(OmegaOutcome {
        ok: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug)]
pub enum SolveResult {
    Feasible {
        omega3: InvariantThreeForm,
        /// 2-form potential with `dω = Ω`, when the candidate recovers Ω.
        potential: Option<InvariantTwoForm>,
    },
    /// Some obstructed triple is not all non-complex; no twist can help.
    Infeasible { triple: Triple, verdict: TripleVerdict },
}

/// Synthesize the twisting 3-form making `s` Ω-integrable, when one
/// exists, together with a candidate potential `ω_γ = (i - a_γ)/(12 x_γ)`
/// on the non-complex roots.
pub fn solve_omega(
    rs: &RootSystem,
    sc: &StructureConstants,
    s: &Structure,
) -> Result<SolveResult, FlagError> {
    validate_or_err(s, rs)?;
    let mut omega3 = InvariantThreeForm::zero();
    for t in rs.zero_sum_triples() {
        let (ja, jb, jsum) = (s.block(t.a), s.block(t.b), s.block(t.sum));
        let all_nc = !ja.is_complex() && !jb.is_complex() && !jsum.is_complex();
        if all_nc {
            omega3.set(t, required_omega(sc, t, ja, jb, jsum));
        } else {
            let v = classify::triple_status(ja, jb, jsum)?;
            if !v.is_integrable() {
                return Ok(SolveResult::Infeasible {
                    triple: *t,
                    verdict: v,
                });
            }
        }
    }

    let mut omega = InvariantTwoForm::zero();
    for idx in 0..rs.num_positive() {
        if let RootJ::NonComplex { a, x, .. } = s.block(idx) {
            // (i - a)/(12x)
            let g = Gauss::new(-a / (rat(12, 1) * x), Rat::one() / (rat(12, 1) * x));
            omega.set(idx, g);
        }
    }
    let potential = if d_omega(rs, sc, &omega) == omega3 {
        Some(omega)
    } else {
        None
    };
    Ok(SolveResult::Feasible { omega3, potential })
}
