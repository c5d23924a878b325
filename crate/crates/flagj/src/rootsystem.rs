//! Root systems of the semi-simple Lie algebras, built from Cartan data.
//!
//! Roots are stored as integer coefficient vectors over the simple roots;
//! only positive roots are stored, negatives are carried as a sign flag.
//! The positive roots are ordered by height and then by descending
//! lexicographic comparison of the coefficient vector, so the simple roots
//! come out as `a1 < a2 < …` and reports are deterministic.

use crate::scalar::{rat_i, Rat};
use crate::FlagError;
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl std::str::FromStr for Family {
    type Err = FlagError;
    fn from_str(s: &str) -> Result<Self, FlagError> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(FlagError::InvalidAlgebra(format!(
                "unknown family '{other}'"
            ))),
        }
    }
}

/// A Dynkin type `(family, rank)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AlgebraSpec {
    pub family: Family,
    pub rank: usize,
}

impl AlgebraSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self, FlagError> {
        let ok = match family {
            Family::A => (1..=8).contains(&rank),
            Family::B | Family::C | Family::D => (2..=8).contains(&rank),
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(AlgebraSpec { family, rank })
        } else {
            Err(FlagError::InvalidAlgebra(format!(
                "unsupported Dynkin type {family}{rank}"
            )))
        }
    }

    /// Parse a name like `"A3"` or `"g2"`.
    pub fn parse(s: &str) -> Result<Self, FlagError> {
        let s = s.trim();
        if s.len() < 2 {
            return Err(FlagError::InvalidAlgebra(format!("bad algebra name '{s}'")));
        }
        let family: Family = s[..1].parse()?;
        let rank: usize = s[1..]
            .parse()
            .map_err(|_| FlagError::InvalidAlgebra(format!("bad rank in '{s}'")))?;
        AlgebraSpec::new(family, rank)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    /// Cartan matrix, rows indexed by coroots:
    /// `cartan[i][j] = 2(α_i, α_j)/(α_i, α_i)`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let chain = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match self.family {
            Family::A => {
                for i in 0..n - 1 {
                    chain(&mut c, i, i + 1);
                }
            }
            Family::B => {
                // α_1..α_{n-1} long, α_n short
                for i in 0..n - 1 {
                    chain(&mut c, i, i + 1);
                }
                c[n - 1][n - 2] = -2;
            }
            Family::C => {
                // α_1..α_{n-1} short, α_n long
                for i in 0..n - 1 {
                    chain(&mut c, i, i + 1);
                }
                c[n - 2][n - 1] = -2;
            }
            Family::D => {
                for i in 0..n.saturating_sub(2) {
                    chain(&mut c, i, i + 1);
                }
                if n >= 3 {
                    chain(&mut c, n - 3, n - 1);
                }
            }
            Family::E => {
                // Bourbaki: chain 1-3-4-5-6(-7-8), node 2 attached to 4.
                let edges: &[(usize, usize)] = match n {
                    6 => &[(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
                    7 => &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
                    8 => &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)],
                    _ => unreachable!(),
                };
                for &(i, j) in edges {
                    chain(&mut c, i - 1, j - 1);
                }
            }
            Family::F => {
                // α_1, α_2 long; α_3, α_4 short
                chain(&mut c, 0, 1);
                chain(&mut c, 2, 3);
                c[1][2] = -1;
                c[2][1] = -2;
            }
            Family::G => {
                // α_1 short, α_2 long
                c[0][1] = -3;
                c[1][0] = -1;
            }
        }
        c
    }
}

/// Positive root as a coefficient vector over the simple roots.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Root {
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

/// `±γ` for a positive root `γ` referenced by index.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub struct SignedRoot {
    pub idx: usize,
    pub neg: bool,
}

impl SignedRoot {
    pub fn pos(idx: usize) -> Self {
        SignedRoot { idx, neg: false }
    }

    pub fn minus(idx: usize) -> Self {
        SignedRoot { idx, neg: true }
    }

    pub fn negated(self) -> Self {
        SignedRoot {
            idx: self.idx,
            neg: !self.neg,
        }
    }
}

/// Unordered pair of positive roots whose sum is again a positive root.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Triple {
    pub a: usize,
    pub b: usize,
    pub sum: usize,
}

pub struct RootSystem {
    pub spec: AlgebraSpec,
    pub cartan: Vec<Vec<i64>>,
    /// `d_i = (α_i, α_i)/2`, normalized so the minimum is 1.
    pub symmetrizer: Vec<Rat>,
    positive: Vec<Root>,
    index: BTreeMap<Vec<i64>, usize>,
    triples: Vec<Triple>,
}

/// Classical positive-root counts.
pub fn positive_root_count(spec: &AlgebraSpec) -> usize {
    let n = spec.rank;
    match spec.family {
        Family::A => n * (n + 1) / 2,
        Family::B | Family::C => n * n,
        Family::D => n * (n - 1),
        Family::E => match n {
            6 => 36,
            7 => 63,
            8 => 120,
            _ => unreachable!(),
        },
        Family::F => 24,
        Family::G => 6,
    }
}

fn order_key(r: &Root) -> (i64, Vec<i64>) {
    // descending coefficient comparison: negate so a1 sorts before a2
    (r.height(), r.coeffs.iter().map(|&c| -c).collect())
}

impl RootSystem {
    pub fn build(spec: AlgebraSpec) -> Result<Self, FlagError> {
        let cartan = spec.cartan();
        let n = spec.rank;

        let symmetrizer = symmetrizer(&cartan)?;

        // Inductive string construction: γ + α_i is a root iff
        // p - <γ, α_i^∨> > 0 with p the length of the descending α_i-string.
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        for i in 0..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            set.insert(v);
        }
        let mut frontier: Vec<Vec<i64>> = set.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for gamma in &frontier {
                for i in 0..n {
                    let pairing: i64 = (0..n).map(|j| gamma[j] * cartan[i][j]).sum();
                    let mut p = 0i64;
                    let mut probe = gamma.clone();
                    loop {
                        probe[i] -= 1;
                        if probe.iter().all(|&c| c == 0) || !set.contains(&probe) {
                            break;
                        }
                        p += 1;
                    }
                    if p - pairing > 0 {
                        let mut up = gamma.clone();
                        up[i] += 1;
                        if set.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            frontier = next;
        }

        let mut positive: Vec<Root> = set.into_iter().map(|coeffs| Root { coeffs }).collect();
        positive.sort_by_key(order_key);

        let expected = positive_root_count(&spec);
        if positive.len() != expected {
            return Err(FlagError::Internal(format!(
                "{} closure produced {} positive roots, expected {expected}",
                spec.name(),
                positive.len()
            )));
        }

        let index: BTreeMap<Vec<i64>, usize> = positive
            .iter()
            .enumerate()
            .map(|(k, r)| (r.coeffs.clone(), k))
            .collect();

        let mut triples = Vec::new();
        for i in 0..positive.len() {
            for j in i + 1..positive.len() {
                let sum: Vec<i64> = positive[i]
                    .coeffs
                    .iter()
                    .zip(&positive[j].coeffs)
                    .map(|(a, b)| a + b)
                    .collect();
                if let Some(&k) = index.get(&sum) {
                    triples.push(Triple { a: i, b: j, sum: k });
                }
            }
        }

        Ok(RootSystem {
            spec,
            cartan,
            symmetrizer,
            positive,
            index,
            triples,
        })
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.positive[idx]
    }

    pub fn height(&self, idx: usize) -> i64 {
        self.positive[idx].height()
    }

    /// Simple root `α_k` (0-based) as a positive-root index.  The ordering
    /// guarantees these are the indices `0..rank`.
    pub fn simple_index(&self, k: usize) -> usize {
        debug_assert_eq!(self.positive[k].height(), 1);
        debug_assert_eq!(self.positive[k].coeffs[k], 1);
        k
    }

    pub fn is_simple(&self, idx: usize) -> bool {
        idx < self.rank()
    }

    pub fn signed_coeffs(&self, sr: SignedRoot) -> Vec<i64> {
        let sign = if sr.neg { -1 } else { 1 };
        self.positive[sr.idx].coeffs.iter().map(|&c| sign * c).collect()
    }

    /// Look up an arbitrary coefficient vector as `±(positive root)`.
    pub fn lookup(&self, coeffs: &[i64]) -> Option<SignedRoot> {
        if let Some(&k) = self.index.get(coeffs) {
            return Some(SignedRoot::pos(k));
        }
        let negated: Vec<i64> = coeffs.iter().map(|&c| -c).collect();
        self.index.get(&negated).map(|&k| SignedRoot::minus(k))
    }

    /// `a + b` when the sum is a root.
    pub fn root_add(&self, a: SignedRoot, b: SignedRoot) -> Option<SignedRoot> {
        let va = self.signed_coeffs(a);
        let vb = self.signed_coeffs(b);
        let sum: Vec<i64> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
        if sum.iter().all(|&c| c == 0) {
            return None;
        }
        self.lookup(&sum)
    }

    /// Every unordered pair `{a, b}` of positive roots with `a + b` positive.
    pub fn zero_sum_triples(&self) -> &[Triple] {
        &self.triples
    }

    /// `⟨Θ⟩⁺`: positive roots supported inside the given set of simple roots.
    pub fn theta_closure(&self, theta: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.positive
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                r.coeffs
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| c == 0 || theta.contains(&i))
            })
            .map(|(k, _)| k)
            .collect()
    }

    /// Closedness of a signed selection (one of `±γ` per positive root,
    /// `true` = `+γ`): whenever two selected roots sum to a root, the
    /// selection at the sum must match.
    pub fn check_positive_system(&self, sel: &[bool]) -> Result<bool, FlagError> {
        if sel.len() != self.positive.len() {
            return Err(FlagError::InvalidStructure(format!(
                "selection covers {} roots, expected {}",
                sel.len(),
                self.positive.len()
            )));
        }
        for i in 0..self.positive.len() {
            for j in i + 1..self.positive.len() {
                let a = SignedRoot { idx: i, neg: !sel[i] };
                let b = SignedRoot { idx: j, neg: !sel[j] };
                if let Some(sum) = self.root_add(a, b) {
                    if sel[sum.idx] != !sum.neg {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Inner product `(γ_i, γ_j)` from the symmetrized Cartan matrix,
    /// short roots normalized to squared length 2.
    pub fn pair_pos(&self, i: usize, j: usize) -> Rat {
        let a = &self.positive[i].coeffs;
        let b = &self.positive[j].coeffs;
        let mut acc = Rat::zero();
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0 {
                continue;
            }
            for (l, &bl) in b.iter().enumerate() {
                if bl == 0 || self.cartan[k][l] == 0 {
                    continue;
                }
                acc += &self.symmetrizer[k] * rat_i(self.cartan[k][l]) * rat_i(ak * bl);
            }
        }
        acc
    }

    pub fn len_sq(&self, idx: usize) -> Rat {
        self.pair_pos(idx, idx)
    }

    /// `(γ, γ)/2` — the per-root scale entering the Weyl-basis constants.
    pub fn half_len(&self, idx: usize) -> Rat {
        self.len_sq(idx) / rat_i(2)
    }

    pub fn root_name(&self, idx: usize) -> String {
        format_root_name(&self.positive[idx].coeffs)
    }

    pub fn signed_name(&self, sr: SignedRoot) -> String {
        if sr.neg {
            format!("-({})", self.root_name(sr.idx))
        } else {
            self.root_name(sr.idx)
        }
    }

    pub fn triple_name(&self, t: &Triple) -> String {
        format!(
            "{}|{}|{}",
            self.root_name(t.a),
            self.root_name(t.b),
            self.root_name(t.sum)
        )
    }

    /// Parse a root name against this system; the root must exist.
    pub fn parse_root(&self, s: &str) -> Result<usize, FlagError> {
        let coeffs = parse_root_name(s, self.rank())?;
        match self.index.get(&coeffs) {
            Some(&k) => Ok(k),
            None => Err(FlagError::UnknownRoot(format!(
                "'{s}' is not a positive root of {}",
                self.spec.name()
            ))),
        }
    }

    /// Parse a simple-root name, returning the simple index.
    pub fn parse_simple(&self, s: &str) -> Result<usize, FlagError> {
        let idx = self.parse_root(s)?;
        if self.is_simple(idx) {
            Ok(idx)
        } else {
            Err(FlagError::UnknownRoot(format!("'{s}' is not a simple root")))
        }
    }
}

fn symmetrizer(cartan: &[Vec<i64>]) -> Result<Vec<Rat>, FlagError> {
    let n = cartan.len();
    let mut d: Vec<Option<Rat>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Rat::from_integer(1.into()));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                // d_i c_ij = d_j c_ji
                let dj = &di * rat_i(cartan[i][j]) / rat_i(cartan[j][i]);
                match &d[j] {
                    Some(old) if *old != dj => {
                        return Err(FlagError::Internal(
                            "Cartan matrix is not symmetrizable".into(),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                }
            }
        }
    }
    let mut d: Vec<Rat> = d.into_iter().map(Option::unwrap).collect();
    let min = d.iter().min().cloned().unwrap();
    for v in &mut d {
        *v /= min.clone();
    }
    Ok(d)
}

/// Render coefficients as `"2a1+a2"` style names.
pub fn format_root_name(coeffs: &[i64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        match c {
            0 => {}
            1 => parts.push(format!("a{}", i + 1)),
            c => parts.push(format!("{}a{}", c, i + 1)),
        }
    }
    parts.join("+")
}

/// Parse `"2a1+a2"` style names into a coefficient vector.
pub fn parse_root_name(s: &str, rank: usize) -> Result<Vec<i64>, FlagError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(FlagError::Parse("empty root name".into()));
    }
    let mut coeffs = vec![0i64; rank];
    for term in s.split('+') {
        let term = term.trim();
        let apos = term
            .find('a')
            .ok_or_else(|| FlagError::Parse(format!("bad root term '{term}'")))?;
        let mult: i64 = if apos == 0 {
            1
        } else {
            term[..apos]
                .parse()
                .map_err(|_| FlagError::Parse(format!("bad multiplier in '{term}'")))?
        };
        let idx: usize = term[apos + 1..]
            .parse()
            .map_err(|_| FlagError::Parse(format!("bad simple-root index in '{term}'")))?;
        if idx == 0 || idx > rank {
            return Err(FlagError::UnknownRoot(format!(
                "'a{idx}' out of range for rank {rank}"
            )));
        }
        if mult <= 0 {
            return Err(FlagError::Parse(format!(
                "multiplier must be positive in '{term}'"
            )));
        }
        coeffs[idx - 1] += mult;
    }
    Ok(coeffs)
}
