//! Exact scalar arithmetic.
//!
//! Everything downstream is decidable arithmetic: rationals, Gaussian
//! rationals, and a small real quadratic extension `Q(i)[√2, √3]`.  The
//! extension is needed because the Weyl-basis structure constants of the
//! non-simply-laced algebras have squared magnitude `q(p+1)(α,α)/2`, which
//! is not a rational square in general.  For the simply-laced families all
//! values stay inside the Gaussian rationals.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"p"`, `"p/q"` (optionally signed, arbitrary precision).
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad numerator in rational '{s}'"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator in rational '{s}'"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in rational '{s}'"));
    }
    Ok(Rat::new(n, d))
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Gauss {
    pub re: Rat,
    pub im: Rat,
}

impl Gauss {
    pub fn new(re: Rat, im: Rat) -> Self {
        Gauss { re, im }
    }

    pub fn zero() -> Self {
        Gauss::default()
    }

    pub fn one() -> Self {
        Gauss::new(Rat::one(), Rat::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Gauss::new(Rat::zero(), Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        Gauss::new(r, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus `re² + im²` (a rational).
    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Gauss {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero Gaussian rational");
        Gauss::new(&self.re / &n, -&self.im / &n)
    }
}

impl Add for Gauss {
    type Output = Gauss;
    fn add(self, rhs: Gauss) -> Gauss {
        Gauss::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Gauss {
    type Output = Gauss;
    fn sub(self, rhs: Gauss) -> Gauss {
        Gauss::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss::new(-self.re, -self.im)
    }
}

impl Mul for Gauss {
    type Output = Gauss;
    fn mul(self, rhs: Gauss) -> Gauss {
        &self * &rhs
    }
}

impl Mul for &Gauss {
    type Output = Gauss;
    fn mul(self, rhs: &Gauss) -> Gauss {
        Gauss::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Parse `"p/q"`, `"p/q+r/si"`, `"r/si"` (signs allowed inside either part).
pub fn parse_gauss(s: &str) -> Result<Gauss, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty value".into());
    }
    // Locate a '+' or '-' separator between the real and imaginary parts.
    // A sign right after '/', at position 0, or after another sign is part
    // of a number, not a separator.
    let bytes = s.as_bytes();
    let mut split = None;
    for (k, &b) in bytes.iter().enumerate().skip(1) {
        if b == b'+' || b == b'-' {
            let prev = bytes[k - 1];
            if prev.is_ascii_digit() {
                split = Some(k);
                break;
            }
        }
    }
    let (re_str, im_str) = match split {
        Some(k) => {
            let (l, r) = s.split_at(k);
            let r = r.strip_prefix('+').unwrap_or(r);
            (Some(l), Some(r))
        }
        None => {
            if s.ends_with('i') {
                (None, Some(s))
            } else {
                (Some(s), None)
            }
        }
    };
    let re = match re_str {
        Some(t) => parse_rat(t)?,
        None => Rat::zero(),
    };
    let im = match im_str {
        Some(t) => {
            let t = t
                .strip_suffix('i')
                .ok_or_else(|| format!("imaginary part of '{s}' must end in 'i'"))?;
            if t.is_empty() || t == "-" || t == "+" {
                // allow "i" / "-i"
                if t == "-" {
                    -Rat::one()
                } else {
                    Rat::one()
                }
            } else {
                parse_rat(t)?
            }
        }
        None => Rat::zero(),
    };
    Ok(Gauss::new(re, im))
}

/// Radicands of the extension basis `{1, √2, √3, √6}`.
pub const RADICANDS: [u64; 4] = [1, 2, 3, 6];

fn radicand_slot(r: u64) -> usize {
    match r {
        1 => 0,
        2 => 1,
        3 => 2,
        6 => 3,
        _ => unreachable!("radicand {r} outside extension basis"),
    }
}

/// Split `n > 0` as `s²·f` with `f` squarefree.
fn squarefree_split(mut n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    free *= n; // leftover prime
    (square, free)
}

/// Element of `Q(i)[√2, √3]` stored as Gaussian-rational coordinates over
/// the basis `{1, √2, √3, √6}`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Scalar {
    parts: [Gauss; 4],
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_gauss(Gauss::one())
    }

    pub fn i() -> Self {
        Scalar::from_gauss(Gauss::i())
    }

    pub fn from_gauss(g: Gauss) -> Self {
        let mut s = Scalar::default();
        s.parts[0] = g;
        s
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::from_gauss(Gauss::from_rat(r))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(rat_i(n))
    }

    /// Coefficient `g` on the basis element `√radicand`.
    pub fn radical(g: Gauss, radicand: u64) -> Self {
        let mut s = Scalar::default();
        s.parts[radicand_slot(radicand)] = g;
        s
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Gauss::is_zero)
    }

    /// True when the value lies in `Q(i)`.
    pub fn is_gaussian(&self) -> bool {
        self.parts[1..].iter().all(Gauss::is_zero)
    }

    pub fn as_gauss(&self) -> Option<&Gauss> {
        if self.is_gaussian() {
            Some(&self.parts[0])
        } else {
            None
        }
    }

    /// Exact square root of a positive rational, as `(s)·√f`.
    /// Fails if the squarefree part is not in `{1, 2, 3, 6}`.
    pub fn sqrt_rat(r: &Rat) -> Option<Scalar> {
        use num::ToPrimitive;
        if !r.is_positive() {
            return None;
        }
        let p = r.numer().to_u64()?;
        let q = r.denom().to_u64()?;
        let (s, f) = squarefree_split(p.checked_mul(q)?);
        if !RADICANDS.contains(&f) {
            return None;
        }
        // √(p/q) = √(pq)/q = s√f / q
        let coeff = Rat::new(BigInt::from(s), BigInt::from(q));
        Some(Scalar::radical(Gauss::from_rat(coeff), f))
    }

    pub fn scale_rat(&self, r: &Rat) -> Scalar {
        self.scale_gauss(&Gauss::from_rat(r.clone()))
    }

    pub fn scale_gauss(&self, g: &Gauss) -> Scalar {
        let mut out = Scalar::default();
        for k in 0..4 {
            if !self.parts[k].is_zero() {
                out.parts[k] = &self.parts[k] * g;
            }
        }
        out
    }

    fn conj_sqrt2(&self) -> Scalar {
        let mut s = self.clone();
        s.parts[1] = -s.parts[1].clone();
        s.parts[3] = -s.parts[3].clone();
        s
    }

    fn conj_sqrt3(&self) -> Scalar {
        let mut s = self.clone();
        s.parts[2] = -s.parts[2].clone();
        s.parts[3] = -s.parts[3].clone();
        s
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero scalar");
        let c2 = self.conj_sqrt2();
        let c3 = self.conj_sqrt3();
        let c23 = c2.conj_sqrt3();
        let prod = &(&c2 * &c3) * &c23;
        let norm = self * &prod;
        let g = norm
            .as_gauss()
            .expect("norm of extension element must be Gaussian")
            .clone();
        prod.scale_gauss(&g.inv())
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::default();
        for k in 0..4 {
            out.parts[k] = self.parts[k].clone() + rhs.parts[k].clone();
        }
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::default();
        for k in 0..4 {
            out.parts[k] = self.parts[k].clone() - rhs.parts[k].clone();
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let mut out = Scalar::default();
        for k in 0..4 {
            out.parts[k] = -self.parts[k].clone();
        }
        out
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::default();
        for a in 0..4 {
            if self.parts[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if rhs.parts[b].is_zero() {
                    continue;
                }
                let (s, f) = squarefree_split(RADICANDS[a] * RADICANDS[b]);
                let slot = radicand_slot(f);
                let mut g = &self.parts[a] * &rhs.parts[b];
                if s != 1 {
                    g = g * Gauss::from_rat(rat_i(s as i64));
                }
                out.parts[slot] = out.parts[slot].clone() + g;
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in 0..4 {
            if self.parts[k].is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", self.parts[k])?;
            } else {
                write!(f, "({})*sqrt({})", self.parts[k], RADICANDS[k])?;
            }
        }
        Ok(())
    }
}
