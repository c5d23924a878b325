//! Exact structure constants and the compact-real-form bracket.
//!
//! The constants `m_{α,β}` are those of a Weyl basis: `⟨X_α, X_{-α}⟩ = 1`,
//! `m_{-α,-β} = -m_{α,β}`, and `m_{α,β} = m_{β,γ} = m_{γ,α}` whenever
//! `α+β+γ = 0`.  Signs are fixed by making the constant of each
//! extraspecial pair positive; every other value is forced by the Jacobi
//! identity.  In this normalization `m_{α,β}² = q(p+1)(α,α)/2` where
//! `β - pα, …, β + qα` is the α-string through β, so the magnitudes leave
//! the rationals exactly when the algebra is not simply laced.

use crate::rootsystem::{RootSystem, SignedRoot, Triple};
use crate::scalar::{rat_i, Gauss, Rat, Scalar};
use crate::FlagError;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Regular element `H`, stored through the values `c_i = α_i(H) > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularElement {
    c: Vec<Rat>,
}

impl RegularElement {
    pub fn ones(rank: usize) -> Self {
        RegularElement {
            c: vec![Rat::one(); rank],
        }
    }

    pub fn new(c: Vec<Rat>) -> Result<Self, FlagError> {
        if c.iter().any(|v| !v.is_positive()) {
            return Err(FlagError::InvalidStructure(
                "regular element entries must be positive".into(),
            ));
        }
        Ok(RegularElement { c })
    }

    pub fn values(&self) -> &[Rat] {
        &self.c
    }

    /// `α(H) = Σ n_i c_i` for a signed root.
    pub fn alpha_of(&self, rs: &RootSystem, sr: SignedRoot) -> Rat {
        let coeffs = rs.signed_coeffs(sr);
        let mut acc = Rat::zero();
        for (i, &n) in coeffs.iter().enumerate() {
            if n != 0 {
                acc += rat_i(n) * &self.c[i];
            }
        }
        acc
    }

    /// `k_γ = 1/γ(H)` for a positive root.
    pub fn k(&self, rs: &RootSystem, idx: usize) -> Rat {
        let v = self.alpha_of(rs, SignedRoot::pos(idx));
        Rat::one() / v
    }
}

/// Symmetric pairing `(a, b)` on (signed) roots, from the symmetrized
/// Cartan matrix with short roots of squared length 2.
pub fn pairing(rs: &RootSystem, a: SignedRoot, b: SignedRoot) -> Rat {
    let v = rs.pair_pos(a.idx, b.idx);
    if a.neg != b.neg {
        -v
    } else {
        v
    }
}

/// Length of the descending `a`-string through `b`:
/// `p = max{k ≥ 0 : b - k·a ∈ Π}`.
pub fn p_value(rs: &RootSystem, a: SignedRoot, b: SignedRoot) -> u32 {
    let va = rs.signed_coeffs(a);
    let mut probe = rs.signed_coeffs(b);
    let mut p = 0;
    loop {
        for (x, y) in probe.iter_mut().zip(&va) {
            *x -= y;
        }
        if probe.iter().all(|&c| c == 0) || rs.lookup(&probe).is_none() {
            break;
        }
        p += 1;
    }
    p
}

/// Length of the ascending `a`-string through `b`.
pub fn q_value(rs: &RootSystem, a: SignedRoot, b: SignedRoot) -> u32 {
    p_value(rs, a.negated(), b)
}

type Key = (usize, bool);

fn key(sr: SignedRoot) -> Key {
    (sr.idx, sr.neg)
}

/// The table of Weyl-basis constants `m_{α,β}` over signed root pairs.
pub struct StructureConstants {
    table: BTreeMap<(Key, Key), Scalar>,
}

struct Builder<'a> {
    rs: &'a RootSystem,
    /// values on positive pairs (i, j), i < j, γ_i + γ_j ∈ Π⁺
    special: BTreeMap<(usize, usize), Scalar>,
}

impl<'a> Builder<'a> {
    /// Reduce an arbitrary signed pair to the positive special table.
    fn resolve(&self, u: SignedRoot, v: SignedRoot) -> Scalar {
        let sum = match self.rs.root_add(u, v) {
            Some(s) => s,
            None => return Scalar::zero(),
        };
        if sum.neg {
            return -self.resolve(u.negated(), v.negated());
        }
        match (u.neg, v.neg) {
            (false, false) => self.lookup_pos(u.idx, v.idx),
            (false, true) => {
                // m_{u,-w} = -m_{w, u-w}  (cyclic identity + sign rule)
                -self.lookup_pos(v.idx, sum.idx)
            }
            (true, false) => -self.resolve(v, u),
            (true, true) => unreachable!("two negative roots cannot have a positive sum"),
        }
    }

    fn lookup_pos(&self, i: usize, j: usize) -> Scalar {
        if i < j {
            self.special
                .get(&(i, j))
                .cloned()
                .expect("special pair missing from table")
        } else {
            -self
                .special
                .get(&(j, i))
                .cloned()
                .expect("special pair missing from table")
        }
    }
}

impl StructureConstants {
    pub fn build(rs: &RootSystem) -> Result<Self, FlagError> {
        let mut b = Builder {
            rs,
            special: BTreeMap::new(),
        };

        // special pairs grouped by their sum, in root order (sums are
        // visited in increasing height)
        let mut by_sum: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for t in rs.zero_sum_triples() {
            by_sum.entry(t.sum).or_default().push((t.a, t.b));
        }

        for (&sum, pairs) in &by_sum {
            // extraspecial pair: minimal first member in root order
            let (a0, b0) = pairs[0];
            let p = p_value(rs, SignedRoot::pos(a0), SignedRoot::pos(b0));
            let ratio = rs.half_len(a0) * rs.half_len(b0) / rs.half_len(sum);
            let mag = Scalar::sqrt_rat(&ratio).ok_or_else(|| {
                FlagError::Internal(format!(
                    "length ratio {ratio} has no square root in the extension ring"
                ))
            })?;
            let extra = mag.scale_rat(&rat_i(p as i64 + 1));
            b.special.insert((a0, b0), extra.clone());

            for &(a, bb) in &pairs[1..] {
                // Jacobi on (X_{a0}, X_{b0}, X_{-a}) paired against X_{-b}:
                //   m_{a0,b0} m_{sum,-a} + m_{b0,-a} m_{b0-a,a0}
                //     + m_{-a,a0} m_{a0-a,b0} = 0
                // and m_{sum,-a} = -m_{a,b}.
                let mut acc = Scalar::zero();
                if let Some(d) = rs.root_add(SignedRoot::pos(b0), SignedRoot::minus(a)) {
                    let f1 = b.resolve(SignedRoot::pos(b0), SignedRoot::minus(a));
                    let f2 = b.resolve(d, SignedRoot::pos(a0));
                    acc = &acc + &(&f1 * &f2);
                }
                if let Some(d) = rs.root_add(SignedRoot::minus(a), SignedRoot::pos(a0)) {
                    let f1 = b.resolve(SignedRoot::minus(a), SignedRoot::pos(a0));
                    let f2 = b.resolve(d, SignedRoot::pos(b0));
                    acc = &acc + &(&f1 * &f2);
                }
                let val = acc.div(&extra);
                b.special.insert((a, bb), val);
            }
        }

        // expand to the full signed table
        let n = rs.num_positive();
        let mut table = BTreeMap::new();
        for i in 0..n {
            for &si in &[false, true] {
                for j in 0..n {
                    for &sj in &[false, true] {
                        let u = SignedRoot { idx: i, neg: si };
                        let v = SignedRoot { idx: j, neg: sj };
                        if i == j && si != sj {
                            continue;
                        }
                        if rs.root_add(u, v).is_some() {
                            let val = b.resolve(u, v);
                            if val.is_zero() {
                                return Err(FlagError::Internal(format!(
                                    "vanishing constant on the root pair ({}, {})",
                                    rs.signed_name(u),
                                    rs.signed_name(v)
                                )));
                            }
                            table.insert((key(u), key(v)), val);
                        }
                    }
                }
            }
        }

        let sc = StructureConstants { table };
        sc.verify(rs)?;
        Ok(sc)
    }

    /// `m_{a,b}`; zero when `a+b` is not a root.
    pub fn get(&self, a: SignedRoot, b: SignedRoot) -> Scalar {
        self.table
            .get(&(key(a), key(b)))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Constants on positive special pairs, for reports.
    pub fn positive_pairs<'a>(
        &'a self,
        rs: &'a RootSystem,
    ) -> impl Iterator<Item = (&'a Triple, Scalar)> + 'a {
        rs.zero_sum_triples().iter().map(move |t| {
            (
                t,
                self.get(SignedRoot::pos(t.a), SignedRoot::pos(t.b)),
            )
        })
    }

    /// Re-check the defining identities of the table.
    fn verify(&self, rs: &RootSystem) -> Result<(), FlagError> {
        let fail = |msg: String| Err(FlagError::Internal(msg));
        for (&((i, si), (j, sj)), val) in &self.table {
            let u = SignedRoot { idx: i, neg: si };
            let v = SignedRoot { idx: j, neg: sj };
            if self.get(v, u) != -val.clone() {
                return fail(format!(
                    "antisymmetry fails at ({}, {})",
                    rs.signed_name(u),
                    rs.signed_name(v)
                ));
            }
            if self.get(u.negated(), v.negated()) != -val.clone() {
                return fail(format!(
                    "sign rule fails at ({}, {})",
                    rs.signed_name(u),
                    rs.signed_name(v)
                ));
            }
        }
        for t in rs.zero_sum_triples() {
            let a = SignedRoot::pos(t.a);
            let bb = SignedRoot::pos(t.b);
            let g = SignedRoot::minus(t.sum);
            let m1 = self.get(a, bb);
            let m2 = self.get(bb, g);
            let m3 = self.get(g, a);
            if m1 != m2 || m2 != m3 {
                return fail(format!("cyclic identity fails at {}", rs.triple_name(t)));
            }
        }
        Ok(())
    }
}

/// Basis symbols of the compact real form: `A_γ`, `S_γ` for positive roots
/// and `iH_{α_k}` for simple roots (the Cartan part is kept in the simple
/// coroot coordinates so representations are canonical).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum USym {
    A(usize),
    S(usize),
    IH(usize),
}

/// Finitely supported exact combination of basis symbols.
#[derive(Clone, Default, PartialEq, Debug)]
pub struct UElement {
    terms: BTreeMap<USym, Scalar>,
}

impl UElement {
    pub fn zero() -> Self {
        UElement::default()
    }

    pub fn sym(s: USym) -> Self {
        let mut e = UElement::default();
        e.add_term(s, Scalar::one());
        e
    }

    pub fn a(idx: usize) -> Self {
        UElement::sym(USym::A(idx))
    }

    pub fn s(idx: usize) -> Self {
        UElement::sym(USym::S(idx))
    }

    /// `iH_γ` for an arbitrary signed root, decomposed over simple roots.
    pub fn ih_root(rs: &RootSystem, sr: SignedRoot) -> Self {
        let mut e = UElement::default();
        for (k, &n) in rs.signed_coeffs(sr).iter().enumerate() {
            if n != 0 {
                e.add_term(USym::IH(k), Scalar::from_int(n));
            }
        }
        e
    }

    pub fn add_term(&mut self, sym: USym, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(sym).or_insert_with(Scalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&sym);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return UElement::zero();
        }
        let mut out = UElement::default();
        for (sym, coeff) in &self.terms {
            out.add_term(*sym, coeff * c);
        }
        out
    }

    pub fn add(&self, other: &UElement) -> UElement {
        let mut out = self.clone();
        for (sym, coeff) in &other.terms {
            out.add_term(*sym, coeff.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, sym: USym) -> Scalar {
        self.terms.get(&sym).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&USym, &Scalar)> {
        self.terms.iter()
    }
}

/// Add `c · Z_{sr}` to `out`, normalizing `A_{-γ} = -A_γ`, `S_{-γ} = S_γ`.
fn push_a(out: &mut UElement, c: Scalar, sr: SignedRoot) {
    let c = if sr.neg { -c } else { c };
    out.add_term(USym::A(sr.idx), c);
}

fn push_s(out: &mut UElement, c: Scalar, sr: SignedRoot) {
    out.add_term(USym::S(sr.idx), c);
}

fn basis_bracket(rs: &RootSystem, sc: &StructureConstants, x: USym, y: USym) -> UElement {
    use USym::*;
    let mut out = UElement::zero();
    match (x, y) {
        (IH(_), IH(_)) => {}
        (IH(i), A(b)) => {
            // [iH_α, A_β] = β(H_α) S_β
            let c = pairing(rs, SignedRoot::pos(b), SignedRoot::pos(rs.simple_index(i)));
            out.add_term(S(b), Scalar::from_rat(c));
        }
        (IH(i), S(b)) => {
            let c = pairing(rs, SignedRoot::pos(b), SignedRoot::pos(rs.simple_index(i)));
            out.add_term(A(b), Scalar::from_rat(-c));
        }
        (A(_), IH(_)) | (S(_), IH(_)) => {
            let mut sw = basis_bracket(rs, sc, y, x);
            sw = sw.scaled(&-Scalar::one());
            out = sw;
        }
        (A(a), A(b)) => {
            if a != b {
                let pa = SignedRoot::pos(a);
                let pb = SignedRoot::pos(b);
                if let Some(s) = rs.root_add(pa, pb) {
                    push_a(&mut out, sc.get(pa, pb), s);
                }
                if let Some(d) = rs.root_add(pa, pb.negated()) {
                    push_a(&mut out, sc.get(pa.negated(), pb), d);
                }
            }
        }
        (S(a), S(b)) => {
            if a != b {
                let pa = SignedRoot::pos(a);
                let pb = SignedRoot::pos(b);
                if let Some(s) = rs.root_add(pa, pb) {
                    push_a(&mut out, -sc.get(pa, pb), s);
                }
                if let Some(d) = rs.root_add(pa, pb.negated()) {
                    push_a(&mut out, -sc.get(pa, pb.negated()), d);
                }
            }
        }
        (A(a), S(b)) => {
            if a == b {
                // [A_α, S_α] = 2iH_α
                out = UElement::ih_root(rs, SignedRoot::pos(a)).scaled(&Scalar::from_int(2));
            } else {
                let pa = SignedRoot::pos(a);
                let pb = SignedRoot::pos(b);
                if let Some(s) = rs.root_add(pa, pb) {
                    push_s(&mut out, sc.get(pa, pb), s);
                }
                if let Some(d) = rs.root_add(pa, pb.negated()) {
                    push_s(&mut out, sc.get(pa, pb.negated()), d);
                }
            }
        }
        (S(a), A(b)) => {
            let sw = basis_bracket(rs, sc, A(b), S(a));
            out = sw.scaled(&-Scalar::one());
        }
    }
    out
}

/// Bilinear extension of the compact-form bracket table.
pub fn bracket_u(
    rs: &RootSystem,
    sc: &StructureConstants,
    x: &UElement,
    y: &UElement,
) -> UElement {
    let mut out = UElement::zero();
    for (sx, cx) in x.terms() {
        for (sy, cy) in y.terms() {
            let b = basis_bracket(rs, sc, *sx, *sy);
            if !b.is_zero() {
                out = out.add(&b.scaled(&(cx * cy)));
            }
        }
    }
    out
}

/// `⟨H, x⟩`: only `iH` components contribute, `⟨H, iH_γ⟩ = i·γ(H)`.
pub fn killing_h(rs: &RootSystem, h: &RegularElement, x: &UElement) -> Scalar {
    let mut acc = Scalar::zero();
    for (sym, coeff) in x.terms() {
        if let USym::IH(k) = sym {
            let val = h.alpha_of(rs, SignedRoot::pos(rs.simple_index(*k)));
            acc = &acc + &coeff.scale_gauss(&Gauss::new(Rat::zero(), val));
        }
    }
    acc
}
