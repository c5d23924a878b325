//! Brute-force integrability oracle.
//!
//! `nij` evaluates the root-space Nijenhuis form
//!
//! ```text
//! Nij(A,B,C) = 1/12 ( k_γ⟨H,[C₂,[A₁,B₁]]⟩ + k_α⟨H,[A₂,[B₁,C₁]]⟩
//!                     + k_β⟨H,[B₂,[C₁,A₁]]⟩ )
//! ```
//!
//! on exact generalized vectors (a vector part over `{A_γ, S_γ}` plus a
//! dual part over `{A*_γ, S*_γ}`), and `is_integrable_bruteforce` decides
//! integrability of a whole structure by exhaustive vanishing on its
//! `i`-eigenbasis.

use crate::gacs::{self, Structure};
use crate::liealg::{bracket_u, killing_h, RegularElement, StructureConstants, UElement, USym};
use crate::rootsystem::RootSystem;
use crate::scalar::{rat_i, Gauss, Scalar};
use crate::FlagError;
use std::collections::BTreeMap;

/// Dual basis symbol `A*_γ` / `S*_γ` for a positive root.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum DualSym {
    A(usize),
    S(usize),
}

impl DualSym {
    pub fn root(&self) -> usize {
        match self {
            DualSym::A(i) | DualSym::S(i) => *i,
        }
    }

    /// The element of the compact form underlying the dual symbol.
    pub fn underlying(&self) -> UElement {
        match self {
            DualSym::A(i) => UElement::a(*i),
            DualSym::S(i) => UElement::s(*i),
        }
    }
}

/// Exact element of `m ⊕ m*`: vector part over `{A_γ, S_γ}` and dual part
/// over `{A*_γ, S*_γ}`, positive-root symbols only.
#[derive(Clone, Default, PartialEq, Debug)]
pub struct GeneralizedVector {
    pub vec: UElement,
    pub dual: BTreeMap<DualSym, Scalar>,
}

impl GeneralizedVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vec_a(idx: usize, c: Scalar) -> Self {
        let mut v = Self::default();
        v.add_vec_a(idx, c);
        v
    }

    pub fn vec_s(idx: usize, c: Scalar) -> Self {
        let mut v = Self::default();
        v.add_vec_s(idx, c);
        v
    }

    pub fn dual(sym: DualSym, c: Scalar) -> Self {
        let mut v = Self::default();
        v.add_dual(sym, c);
        v
    }

    pub fn add_vec_a(&mut self, idx: usize, c: Scalar) {
        self.vec.add_term(USym::A(idx), c);
    }

    pub fn add_vec_s(&mut self, idx: usize, c: Scalar) {
        self.vec.add_term(USym::S(idx), c);
    }

    pub fn add_dual(&mut self, sym: DualSym, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.dual.entry(sym).or_insert_with(Scalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.dual.remove(&sym);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.vec = out.vec.add(&other.vec);
        for (sym, c) in &other.dual {
            out.add_dual(*sym, c.clone());
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::default();
        out.vec = self.vec.scaled(c);
        for (sym, v) in &self.dual {
            out.add_dual(*sym, v * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero() && self.dual.is_empty()
    }

    /// Coordinates at one root in the ordered basis `{A, S, -S*, A*}`,
    /// for blocks whose coefficients are Gaussian.
    pub fn coords_b_basis(&self, gamma: usize) -> [Gauss; 4] {
        let g = |s: Scalar| {
            s.as_gauss()
                .expect("coordinates requested for a non-Gaussian vector")
                .clone()
        };
        let dual_a = self.dual.get(&DualSym::A(gamma)).cloned().unwrap_or_else(Scalar::zero);
        let dual_s = self.dual.get(&DualSym::S(gamma)).cloned().unwrap_or_else(Scalar::zero);
        [
            g(self.vec.coeff(USym::A(gamma))),
            g(self.vec.coeff(USym::S(gamma))),
            g(-dual_s),
            g(dual_a),
        ]
    }
}

/// Trilinear Nijenhuis form.
pub fn nij(
    rs: &RootSystem,
    sc: &StructureConstants,
    h: &RegularElement,
    a: &GeneralizedVector,
    b: &GeneralizedVector,
    c: &GeneralizedVector,
) -> Scalar {
    let t1 = dual_term_scalar(rs, sc, h, &a.dual, &b.vec, &c.vec);
    let t2 = dual_term_scalar(rs, sc, h, &b.dual, &c.vec, &a.vec);
    let t3 = dual_term_scalar(rs, sc, h, &c.dual, &a.vec, &b.vec);
    (&(&t1 + &t2) + &t3).scale_rat(&rat_i(12).recip())
}

/// `Σ coeff·k_γ ⟨H, [D, [u, v]]⟩` over the dual symbols of `dual`.
fn dual_term_scalar(
    rs: &RootSystem,
    sc: &StructureConstants,
    h: &RegularElement,
    dual: &BTreeMap<DualSym, Scalar>,
    u: &UElement,
    v: &UElement,
) -> Scalar {
    if dual.is_empty() || u.is_zero() || v.is_zero() {
        return Scalar::zero();
    }
    let inner = bracket_u(rs, sc, u, v);
    if inner.is_zero() {
        return Scalar::zero();
    }
    let mut acc = Scalar::zero();
    for (sym, coeff) in dual {
        let outer = bracket_u(rs, sc, &sym.underlying(), &inner);
        let paired = killing_h(rs, h, &outer);
        if paired.is_zero() {
            continue;
        }
        let k = h.k(rs, sym.root());
        acc = &acc + &(&paired.scale_rat(&k) * coeff);
    }
    acc
}

/// Label of an eigenbasis vector: which root block and which of its two
/// basis vectors.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EigLabel {
    pub root: usize,
    pub member: usize,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub labels: [EigLabel; 3],
    pub value: Scalar,
}

#[derive(Clone, Debug)]
pub struct BruteOutcome {
    pub integrable: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug)]
pub struct BruteOptions {
    /// Refuse to run above this rank unless raised explicitly.
    pub max_rank: usize,
}

impl Default for BruteOptions {
    fn default() -> Self {
        BruteOptions { max_rank: 4 }
    }
}

/// The full eigenbasis of a structure, two labelled vectors per root.
pub fn eigenbasis_of(s: &Structure, rs: &RootSystem) -> Vec<(EigLabel, GeneralizedVector)> {
    let mut out = Vec::with_capacity(2 * rs.num_positive());
    for idx in 0..rs.num_positive() {
        let [v1, v2] = gacs::eigenbasis(s.block(idx), idx);
        out.push((EigLabel { root: idx, member: 0 }, v1));
        out.push((EigLabel { root: idx, member: 1 }, v2));
    }
    out
}

/// Exhaustive vanishing of `nij` on all unordered distinct triples of the
/// eigenbasis; on failure reports the first nonvanishing triple in
/// canonical order.
pub fn is_integrable_bruteforce(
    rs: &RootSystem,
    sc: &StructureConstants,
    h: &RegularElement,
    s: &Structure,
    opts: BruteOptions,
) -> Result<BruteOutcome, FlagError> {
    gacs::validate_or_err(s, rs)?;
    if rs.rank() > opts.max_rank {
        return Err(FlagError::RankCap {
            rank: rs.rank(),
            cap: opts.max_rank,
        });
    }
    let basis = eigenbasis_of(s, rs);
    let n = basis.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let value = nij(rs, sc, h, &basis[i].1, &basis[j].1, &basis[k].1);
                if !value.is_zero() {
                    return Ok(BruteOutcome {
                        integrable: false,
                        witness: Some(Witness {
                            labels: [basis[i].0, basis[j].0, basis[k].0],
                            value,
                        }),
                    });
                }
            }
        }
    }
    Ok(BruteOutcome {
        integrable: true,
        witness: None,
    })
}
