//! Invariant generalized almost complex structures, one 4-dimensional
//! block per positive root.
//!
//! A block is either of complex type (`±J₀`) or of non-complex type with
//! parameters `(a, x, y)` satisfying `a² - xy = -1` exactly.  Matrices are
//! written in the ordered basis `{A_γ, S_γ, -S*_γ, A*_γ}`, in which the
//! split pairing has the block form `Q = [[0, I], [I, 0]]`.

use crate::nijenhuis::{DualSym, GeneralizedVector};
use crate::rootsystem::RootSystem;
use crate::scalar::{Gauss, Rat, Scalar};
use crate::FlagError;
use num::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Debug)]
pub enum RootJ {
    /// `+J₀` (`pos = true`) or `-J₀`.
    Complex { pos: bool },
    NonComplex { a: Rat, x: Rat, y: Rat },
}

impl RootJ {
    pub fn complex(pos: bool) -> Self {
        RootJ::Complex { pos }
    }

    pub fn noncomplex(a: Rat, x: Rat, y: Rat) -> Self {
        RootJ::NonComplex { a, x, y }
    }

    /// Non-complex block from `(a, x)`, with `y` forced by the constraint.
    pub fn from_ax(a: Rat, x: Rat) -> Result<Self, FlagError> {
        if x.is_zero() {
            return Err(FlagError::InvalidStructure("x must be nonzero".into()));
        }
        let y = (&a * &a + Rat::one()) / &x;
        Ok(RootJ::NonComplex { a, x, y })
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, RootJ::Complex { .. })
    }

    pub fn check(&self) -> Result<(), String> {
        match self {
            RootJ::Complex { .. } => Ok(()),
            RootJ::NonComplex { a, x, y } => {
                if x.is_zero() {
                    return Err("x = 0".into());
                }
                if y.is_zero() {
                    return Err("y = 0".into());
                }
                if a * a - x * y != -Rat::one() {
                    return Err(format!("a^2 - x*y = {} != -1", a * a - x * y));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for RootJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootJ::Complex { pos: true } => write!(f, "complex(+)"),
            RootJ::Complex { pos: false } => write!(f, "complex(-)"),
            RootJ::NonComplex { a, x, y } => write!(f, "noncomplex(a={a}, x={x}, y={y})"),
        }
    }
}

/// A structure assigns a block to every positive root.
#[derive(Clone, PartialEq, Debug)]
pub struct Structure {
    blocks: Vec<RootJ>,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub root: String,
    pub constraint: String,
}

impl Structure {
    pub fn new(blocks: Vec<RootJ>, rs: &RootSystem) -> Result<Self, FlagError> {
        if blocks.len() != rs.num_positive() {
            return Err(FlagError::InvalidStructure(format!(
                "{} blocks given, {} expected",
                blocks.len(),
                rs.num_positive()
            )));
        }
        Ok(Structure { blocks })
    }

    /// All blocks complex with the given sign.
    pub fn all_complex(rs: &RootSystem, pos: bool) -> Self {
        Structure {
            blocks: vec![RootJ::complex(pos); rs.num_positive()],
        }
    }

    pub fn block(&self, idx: usize) -> &RootJ {
        &self.blocks[idx]
    }

    pub fn blocks(&self) -> &[RootJ] {
        &self.blocks
    }

    pub fn set_block(&mut self, idx: usize, j: RootJ) {
        self.blocks[idx] = j;
    }

    /// Negate every block (the same structure read off the opposite
    /// positivity choice).
    pub fn negated(&self) -> Self {
        Structure {
            blocks: self.blocks.iter().map(negate_basis).collect(),
        }
    }
}

/// Validate all block constraints; returns the violations.
pub fn validate(s: &Structure, rs: &RootSystem) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    for (idx, b) in s.blocks().iter().enumerate() {
        if let Err(constraint) = b.check() {
            out.push(Violation {
                root: rs.root_name(idx),
                constraint,
            });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

pub fn validate_or_err(s: &Structure, rs: &RootSystem) -> Result<(), FlagError> {
    validate(s, rs).map_err(|v| {
        let items: Vec<String> = v
            .iter()
            .map(|x| format!("{}: {}", x.root, x.constraint))
            .collect();
        FlagError::InvalidStructure(items.join("; "))
    })
}

/// 4×4 matrix of a block in the basis `{A, S, -S*, A*}`.
pub fn matrix4(j: &RootJ) -> Vec<Vec<Rat>> {
    let z = Rat::zero;
    let o = Rat::one;
    match j {
        RootJ::Complex { pos } => {
            let s = if *pos { o() } else { -o() };
            vec![
                vec![z(), -s.clone(), z(), z()],
                vec![s.clone(), z(), z(), z()],
                vec![z(), z(), z(), -s.clone()],
                vec![z(), z(), s, z()],
            ]
        }
        RootJ::NonComplex { a, x, y } => vec![
            vec![a.clone(), z(), z(), -x.clone()],
            vec![z(), a.clone(), x.clone(), z()],
            vec![z(), -y.clone(), -a.clone(), z()],
            vec![y.clone(), z(), z(), -a.clone()],
        ],
    }
}

/// Basis vectors of the `i`-eigenspace `L_γ` of a block.
pub fn eigenbasis(j: &RootJ, gamma: usize) -> [GeneralizedVector; 2] {
    let i = Scalar::i();
    match j {
        RootJ::Complex { pos } => {
            let s = if *pos { -&i } else { i };
            // A ∓ iS, A* ∓ iS*
            let mut v1 = GeneralizedVector::vec_a(gamma, Scalar::one());
            v1.add_vec_s(gamma, s.clone());
            let mut v2 = GeneralizedVector::dual(DualSym::A(gamma), Scalar::one());
            v2.add_dual(DualSym::S(gamma), s);
            [v1, v2]
        }
        RootJ::NonComplex { a, x, .. } => {
            let xs = Scalar::from_rat(x.clone());
            let am_i = Scalar::from_gauss(Gauss::new(a.clone(), -Rat::one()));
            let mut v1 = GeneralizedVector::vec_a(gamma, xs.clone());
            v1.add_dual(DualSym::A(gamma), am_i.clone());
            let mut v2 = GeneralizedVector::vec_s(gamma, xs);
            v2.add_dual(DualSym::S(gamma), am_i);
            [v1, v2]
        }
    }
}

/// The block rewritten in the basis attached to the opposite root.
pub fn negate_basis(j: &RootJ) -> RootJ {
    match j {
        RootJ::Complex { pos } => RootJ::Complex { pos: !pos },
        RootJ::NonComplex { a, x, y } => RootJ::NonComplex {
            a: a.clone(),
            x: -x.clone(),
            y: -y.clone(),
        },
    }
}

/// `ε_γ` of a complex-type block: `J₀ ↦ -1`, `-J₀ ↦ +1`.
pub fn epsilon(j: &RootJ) -> Option<i8> {
    match j {
        RootJ::Complex { pos: true } => Some(-1),
        RootJ::Complex { pos: false } => Some(1),
        RootJ::NonComplex { .. } => None,
    }
}
