//! Exact real algebraic scalars living in towers of real quadratic extensions.
//!
//! A [`Real`] is either a rational or `a + b*sqrt(r)` with `b != 0`, where
//! `a`, `b`, and the radicand `r > 0` live strictly lower in a canonical
//! radical order. All arithmetic is exact; comparisons go through [`Real::sign`],
//! which decides the sign of any tower element in finitely many steps.
//!
//! Canonical form is maintained by construction:
//! - rational radicands are split into prime radicals (`sqrt(12) = 2*sqrt(3)`),
//!   so distinct rational radicals are multiplicatively independent;
//! - tower radicands have their rational content extracted before adjunction,
//!   so `sqrt(4 + 4*sqrt(2))` and `sqrt(1 + sqrt(2))` share one radical key;
//! - perfect squares are detected (relative to the operand's own tower) and
//!   never adjoined.
//!
//! Square-root detection is relative to the operand's representation, not to
//! every radical in the ambient computation, so a dependent radical is not
//! impossible in principle. [`Real::sign`] stays sound even then (a vanishing
//! norm in the mixed-sign branch forces the value itself to vanish); the only
//! failure mode is a loud panic in [`Real::inv`] on a zero norm.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat, sign_of_rat, Rat};

/// A square root adjoined to the tower. Ordered by depth, then by the
/// structure of the radicand; the order is what makes nesting canonical.
#[derive(Debug)]
pub struct Radical {
    depth: u32,
    radicand: Real,
}

impl Radical {
    pub fn radicand(&self) -> &Real {
        &self.radicand
    }
}

impl PartialEq for Radical {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Radical {}

impl PartialOrd for Radical {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Radical {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth
            .cmp(&other.depth)
            .then_with(|| structural_cmp(&self.radicand, &other.radicand))
    }
}

/// Exact real algebraic number in a square-root tower.
///
/// Structural equality coincides with numeric equality on canonical forms.
/// There is deliberately no `PartialOrd`: use [`Real::sign`] or
/// [`Real::cmp_value`] to compare by value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Rat(Rat),
    Quad {
        ext: Arc<Radical>,
        a: Box<Real>,
        b: Box<Real>,
    },
}

/// Structural (not numeric) order; only used to keep radical nesting canonical.
fn structural_cmp(x: &Real, y: &Real) -> Ordering {
    match (x, y) {
        (Real::Rat(a), Real::Rat(b)) => a.cmp(b),
        (Real::Rat(_), Real::Quad { .. }) => Ordering::Less,
        (Real::Quad { .. }, Real::Rat(_)) => Ordering::Greater,
        (
            Real::Quad {
                ext: e1,
                a: a1,
                b: b1,
            },
            Real::Quad {
                ext: e2,
                a: a2,
                b: b2,
            },
        ) => e1
            .cmp(e2)
            .then_with(|| structural_cmp(a1, a2))
            .then_with(|| structural_cmp(b1, b2)),
    }
}

fn cmp_top(x: Option<&Arc<Radical>>, y: Option<&Arc<Radical>>) -> Ordering {
    match (x, y) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(a), Some(b)) => {
            if Arc::ptr_eq(a, b) {
                Ordering::Equal
            } else {
                a.cmp(b)
            }
        }
    }
}

impl Real {
    pub fn zero() -> Real {
        Real::Rat(Rat::zero())
    }

    pub fn one() -> Real {
        Real::Rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Real {
        Real::Rat(Rat::from(BigInt::from(n)))
    }

    pub fn from_rat(q: Rat) -> Real {
        Real::Rat(q)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Real::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Real::Rat(q) if q.is_one())
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Real::Rat(q) => Some(q),
            Real::Quad { .. } => None,
        }
    }

    /// Height of the radical tower this value lives in (0 for rationals).
    pub fn tower_depth(&self) -> u32 {
        match self {
            Real::Rat(_) => 0,
            Real::Quad { ext, .. } => ext.depth,
        }
    }

    fn top_radical(&self) -> Option<&Arc<Radical>> {
        match self {
            Real::Rat(_) => None,
            Real::Quad { ext, .. } => Some(ext),
        }
    }

    fn quad_parts(&self) -> (&Arc<Radical>, &Real, &Real) {
        match self {
            Real::Quad { ext, a, b } => (ext, a, b),
            Real::Rat(_) => unreachable!("quad_parts on a rational"),
        }
    }

    /// `a + b*sqrt(ext)`, collapsing to `a` when `b` is zero.
    fn quad(a: Real, b: Real, ext: Arc<Radical>) -> Real {
        if b.is_zero() {
            a
        } else {
            Real::Quad {
                ext,
                a: Box::new(a),
                b: Box::new(b),
            }
        }
    }

    /// `sqrt(radicand)` as a fresh radical on top of the radicand's tower.
    /// The caller is responsible for having ruled out exact square roots.
    fn adjoin_sqrt(radicand: Real) -> Real {
        let depth = radicand.tower_depth() + 1;
        Real::quad(
            Real::zero(),
            Real::one(),
            Arc::new(Radical { depth, radicand }),
        )
    }

    /// Sign of the value: -1, 0, or 1. Total and exact.
    pub fn sign(&self) -> i8 {
        match self {
            Real::Rat(q) => sign_of_rat(q),
            Real::Quad { ext, a, b } => {
                let sa = a.sign();
                let sb = b.sign();
                if sb == 0 {
                    return sa;
                }
                if sa == 0 {
                    return sb;
                }
                if sa == sb {
                    return sa;
                }
                // a and b*sqrt(r) pull in opposite directions: the winner is
                // decided by a^2 vs b^2 * r, one level down the tower.
                let d = &(a.as_ref() * a.as_ref())
                    - &(&(b.as_ref() * b.as_ref()) * &ext.radicand);
                sa * d.sign()
            }
        }
    }

    pub fn abs(&self) -> Real {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Numeric comparison (structural order would be meaningless here).
    pub fn cmp_value(&self, other: &Real) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Exact reciprocal.
    ///
    /// Panics on zero, and on a vanishing norm, which can only happen if a
    /// dependent radical slipped past canonicalization.
    pub fn inv(&self) -> Real {
        match self {
            Real::Rat(q) => {
                assert!(!q.is_zero(), "inversion of exact zero");
                Real::Rat(q.recip())
            }
            Real::Quad { ext, a, b } => {
                let n = &(a.as_ref() * a.as_ref())
                    - &(&(b.as_ref() * b.as_ref()) * &ext.radicand);
                assert!(
                    n.sign() != 0,
                    "zero norm in inversion: zero or dependent radical"
                );
                let ni = n.inv();
                Real::quad(a.as_ref() * &ni, -&(b.as_ref() * &ni), ext.clone())
            }
        }
    }

    /// Exact square root, staying inside the tower representation.
    ///
    /// Rationals factor into a rational part times prime radicals; tower
    /// elements are first tested for being perfect squares, then have their
    /// rational content pulled out, and only then is a new radical adjoined.
    pub fn sqrt(&self) -> Result<Real> {
        match self.sign() {
            -1 => Err(Error::NegativeRadicand),
            0 => Ok(Real::zero()),
            _ => match self {
                Real::Rat(q) => Ok(sqrt_rat_factored(q)),
                quad => {
                    if let Some(u) = quad.try_sqrt_exact() {
                        return Ok(u);
                    }
                    let (c, y) = quad.split_content();
                    let sc = sqrt_rat_factored(&c);
                    if let Some(u) = y.try_sqrt_exact() {
                        return Ok(&sc * &u);
                    }
                    Ok(&sc * &Real::adjoin_sqrt(y))
                }
            },
        }
    }

    /// Detects perfect squares relative to this value's own tower.
    ///
    /// For `x = a + b*sqrt(r)` with `b != 0`: any square root `u + v*sqrt(r)`
    /// of `x` in the same field has `u^2` equal to `(a + w)/2` or `(a - w)/2`
    /// where `w = sqrt(a^2 - b^2 r)`, so it suffices to recurse on the norm
    /// and on those two candidates. Returns the nonnegative root.
    pub fn try_sqrt_exact(&self) -> Option<Real> {
        match self {
            Real::Rat(q) => {
                match sign_of_rat(q) {
                    -1 => return None,
                    0 => return Some(Real::zero()),
                    _ => {}
                }
                let ns = q.numer().sqrt();
                if &(&ns * &ns) != q.numer() {
                    return None;
                }
                let ds = q.denom().sqrt();
                if &(&ds * &ds) != q.denom() {
                    return None;
                }
                Some(Real::Rat(Rat::new(ns, ds)))
            }
            Real::Quad { ext, a, b } => {
                let d = &(a.as_ref() * a.as_ref())
                    - &(&(b.as_ref() * b.as_ref()) * &ext.radicand);
                if d.sign() < 0 {
                    return None;
                }
                let w = d.try_sqrt_exact()?;
                let half = Real::from_rat(rat(1, 2));
                let lo = &(a.as_ref() - &w) * &half;
                let hi = &(a.as_ref() + &w) * &half;
                for cand in [hi, lo] {
                    if cand.sign() <= 0 {
                        continue;
                    }
                    if let Some(alpha) = cand.try_sqrt_exact() {
                        let beta = b.as_ref() * &(&alpha + &alpha).inv();
                        // alpha + beta*sqrt(r) squares to self but may land on
                        // the negative branch when beta dominates.
                        let root = Real::quad(alpha, beta, ext.clone()).abs();
                        debug_assert_eq!(&(&root * &root), self);
                        return Some(root);
                    }
                }
                None
            }
        }
    }

    /// Greatest common rational content of all coefficients, nonnegative.
    fn content(&self) -> Rat {
        match self {
            Real::Rat(q) => q.abs(),
            Real::Quad { a, b, .. } => gcd_rat(&a.content(), &b.content()),
        }
    }

    /// Writes a nonzero value as `c * y` with `c` a positive rational and
    /// `y` of content one, so radicands differing by rational squares
    /// normalize to a shared radical key.
    fn split_content(&self) -> (Rat, Real) {
        let c = self.content();
        debug_assert!(!c.is_zero(), "content of zero");
        let y = self * &Real::Rat(c.recip());
        (c, y)
    }
}

fn gcd_rat(x: &Rat, y: &Rat) -> Rat {
    if x.is_zero() {
        return y.clone();
    }
    if y.is_zero() {
        return x.clone();
    }
    Rat::new(x.numer().gcd(y.numer()), x.denom().lcm(y.denom()))
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        const N: usize = 1 << 16;
        let mut sieve = vec![true; N];
        sieve[0] = false;
        sieve[1] = false;
        let mut p = 2;
        while p * p < N {
            if sieve[p] {
                let mut m = p * p;
                while m < N {
                    sieve[m] = false;
                    m += p;
                }
            }
            p += 1;
        }
        (0..N).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

/// `sqrt(q)` for `q > 0`: extracts the square part and splits the rest into
/// prime radicals, so `sqrt(6)` becomes `sqrt(2)*sqrt(3)` and never a
/// composite radical. A cofactor surviving trial division (all prime factors
/// above 2^16) that is not a perfect square is kept as one atomic radicand.
fn sqrt_rat_factored(q: &Rat) -> Real {
    debug_assert!(sign_of_rat(q) > 0);
    let mut n = q.numer() * q.denom();
    let mut square_root = BigInt::one();
    let mut odd_part: Vec<BigInt> = Vec::new();
    for &p in small_primes() {
        if n.is_one() {
            break;
        }
        let p = BigInt::from(p);
        if &p * &p > n {
            break;
        }
        let mut e = 0u32;
        loop {
            let (d, r) = n.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            n = d;
            e += 1;
        }
        if e > 0 {
            square_root *= p.pow(e / 2);
            if e % 2 == 1 {
                odd_part.push(p);
            }
        }
    }
    if !n.is_one() {
        let s = n.sqrt();
        if &s * &s == n {
            square_root *= s;
        } else {
            odd_part.push(n);
        }
    }
    let mut out = Real::Rat(Rat::new(square_root, q.denom().clone()));
    for p in odd_part {
        out = &out * &Real::adjoin_sqrt(Real::Rat(Rat::from(p)));
    }
    out
}

impl<'a, 'b> Add<&'b Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &'b Real) -> Real {
        match (self, rhs) {
            (Real::Rat(x), Real::Rat(y)) => Real::Rat(x + y),
            _ => match cmp_top(self.top_radical(), rhs.top_radical()) {
                Ordering::Equal => {
                    let (e, a1, b1) = self.quad_parts();
                    let (_, a2, b2) = rhs.quad_parts();
                    Real::quad(a1 + a2, b1 + b2, e.clone())
                }
                Ordering::Greater => {
                    let (e, a, b) = self.quad_parts();
                    Real::quad(a + rhs, b.clone(), e.clone())
                }
                Ordering::Less => {
                    let (e, a, b) = rhs.quad_parts();
                    Real::quad(self + a, b.clone(), e.clone())
                }
            },
        }
    }
}

impl<'a, 'b> Sub<&'b Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &'b Real) -> Real {
        match (self, rhs) {
            (Real::Rat(x), Real::Rat(y)) => Real::Rat(x - y),
            _ => match cmp_top(self.top_radical(), rhs.top_radical()) {
                Ordering::Equal => {
                    let (e, a1, b1) = self.quad_parts();
                    let (_, a2, b2) = rhs.quad_parts();
                    Real::quad(a1 - a2, b1 - b2, e.clone())
                }
                Ordering::Greater => {
                    let (e, a, b) = self.quad_parts();
                    Real::quad(a - rhs, b.clone(), e.clone())
                }
                Ordering::Less => {
                    let (e, a, b) = rhs.quad_parts();
                    Real::quad(self - a, -b, e.clone())
                }
            },
        }
    }
}

impl<'a, 'b> Mul<&'b Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &'b Real) -> Real {
        if self.is_zero() || rhs.is_zero() {
            return Real::zero();
        }
        match (self, rhs) {
            (Real::Rat(x), Real::Rat(y)) => Real::Rat(x * y),
            _ => match cmp_top(self.top_radical(), rhs.top_radical()) {
                Ordering::Equal => {
                    // (a1 + b1 s)(a2 + b2 s) with s^2 = r, in four products.
                    let (e, a1, b1) = self.quad_parts();
                    let (_, a2, b2) = rhs.quad_parts();
                    let ac = a1 * a2;
                    let bd = b1 * b2;
                    let s = &(a1 + b1) * &(a2 + b2);
                    let cross = &(&s - &ac) - &bd;
                    let rat_part = &ac + &(&bd * &e.radicand);
                    Real::quad(rat_part, cross, e.clone())
                }
                Ordering::Greater => {
                    let (e, a, b) = self.quad_parts();
                    Real::quad(a * rhs, b * rhs, e.clone())
                }
                Ordering::Less => {
                    let (e, a, b) = rhs.quad_parts();
                    Real::quad(self * a, self * b, e.clone())
                }
            },
        }
    }
}

impl<'a, 'b> Div<&'b Real> for &'a Real {
    type Output = Real;
    fn div(self, rhs: &'b Real) -> Real {
        self * &rhs.inv()
    }
}

impl<'a> Neg for &'a Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Rat(q) => Real::Rat(-q),
            Real::Quad { ext, a, b } => Real::quad(-a.as_ref(), -b.as_ref(), ext.clone()),
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rat(q) => write!(f, "{}", q),
            Real::Quad { ext, a, b } => {
                if !a.is_zero() {
                    write!(f, "{} ", a)?;
                    match b.as_ref() {
                        Real::Rat(q) if sign_of_rat(q) < 0 => {
                            write!(f, "- ")?;
                            return fmt_radical_term(f, &Real::Rat(-q), &ext.radicand);
                        }
                        _ => write!(f, "+ ")?,
                    }
                }
                fmt_radical_term(f, b, &ext.radicand)
            }
        }
    }
}

fn fmt_radical_term(f: &mut fmt::Formatter<'_>, b: &Real, radicand: &Real) -> fmt::Result {
    match b {
        Real::Rat(q) if q.is_one() => write!(f, "sqrt({})", radicand),
        Real::Rat(q) => write!(f, "{}*sqrt({})", q, radicand),
        quad => write!(f, "({})*sqrt({})", quad, radicand),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn sqrt_i(n: i64) -> Real {
        Real::from_int(n).sqrt().unwrap()
    }

    #[test]
    fn conjugate_product_is_rational() {
        let one = Real::one();
        let r2 = sqrt_i(2);
        let x = &one + &r2;
        let y = &one - &r2;
        assert_eq!(&x * &y, Real::from_int(-1));
    }

    #[test]
    fn rational_squares_stay_rational() {
        assert_eq!(Real::from_rat(rat(9, 4)).sqrt().unwrap(), Real::from_rat(rat(3, 2)));
        assert_eq!(sqrt_i(49), Real::from_int(7));
    }

    #[test]
    fn square_part_is_extracted() {
        // sqrt(8) = 2*sqrt(2), sharing the radical key with sqrt(2).
        let r8 = sqrt_i(8);
        let r2 = sqrt_i(2);
        assert_eq!(&r8 - &(&r2 + &r2), Real::zero());
        assert_eq!(&r8 * &r8, Real::from_int(8));
    }

    #[test]
    fn composite_radicands_split_into_primes() {
        let r6 = sqrt_i(6);
        let r2 = sqrt_i(2);
        let r3 = sqrt_i(3);
        assert!((&r6 - &(&r2 * &r3)).is_zero());
        assert_eq!(&r6 * &r6, Real::from_int(6));
        // sqrt(1/2) = sqrt(2)/2.
        let h = Real::from_rat(rat(1, 2)).sqrt().unwrap();
        assert_eq!(&h * &h, Real::from_rat(rat(1, 2)));
        assert!((&(&h + &h) - &r2).is_zero());
    }

    #[test]
    fn nested_square_detection() {
        // 3 + 2*sqrt(2) = (1 + sqrt(2))^2.
        let x = &Real::from_int(3) + &(&Real::from_int(2) * &sqrt_i(2));
        let root = x.sqrt().unwrap();
        assert_eq!(root, &Real::one() + &sqrt_i(2));
        // epsilon (1 + sqrt(epsilon))^2 at epsilon = 1/2 is detected too.
        let eps = Real::from_rat(rat(1, 2));
        let se = eps.sqrt().unwrap();
        let f = &eps * &(&(&Real::one() + &se) * &(&Real::one() + &se));
        let y = f.sqrt().unwrap();
        assert_eq!(&y * &y, f);
        assert!(y.sign() > 0);
    }

    #[test]
    fn content_normalizes_radical_keys() {
        // sqrt(2 + 2*sqrt(2)) = sqrt(2) * sqrt(1 + sqrt(2)).
        let base = &Real::one() + &sqrt_i(2);
        let doubled = &Real::from_int(2) * &base;
        let a = doubled.sqrt().unwrap();
        let b = &sqrt_i(2) * &base.sqrt().unwrap();
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn signs_across_the_tower() {
        let r2 = sqrt_i(2);
        let r3 = sqrt_i(3);
        assert_eq!((&Real::one() - &r2).sign(), -1);
        assert_eq!((&r3 - &r2).sign(), 1);
        assert_eq!((&(&r2 * &r3) - &sqrt_i(6)).sign(), 0);
        // 2^(1/4): fourth root via nested sqrt.
        let q = sqrt_i(2).sqrt().unwrap();
        assert_eq!(&q * &q, r2);
        assert_eq!((&q - &Real::from_rat(rat(6, 5))).sign(), -1);
        assert_eq!((&q - &Real::from_rat(rat(11, 10))).sign(), 1);
    }

    #[test]
    fn inversion_round_trips() {
        let x = &(&Real::from_rat(rat(3, 4)) + &sqrt_i(2)) + &(&Real::from_int(5) * &sqrt_i(3));
        let y = x.inv();
        assert_eq!(&x * &y, Real::one());
        assert_eq!(Real::from_rat(rat(-7, 3)).inv(), Real::from_rat(rat(-3, 7)));
    }

    #[test]
    fn negative_radicand_is_rejected() {
        assert_eq!(Real::from_int(-2).sqrt(), Err(Error::NegativeRadicand));
        assert_eq!(Real::zero().sqrt().unwrap(), Real::zero());
    }

    #[test]
    fn value_comparisons() {
        let vals = [sqrt_i(2), Real::from_rat(rat(3, 2)), sqrt_i(3)];
        for w in vals.windows(2) {
            assert_eq!(w[0].cmp_value(&w[1]), Ordering::Less);
        }
        assert_eq!(sqrt_i(2).cmp_value(&sqrt_i(2)), Ordering::Equal);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(rat_int(3).to_string(), "3");
        assert_eq!(sqrt_i(2).to_string(), "sqrt(2)");
        assert_eq!((&Real::one() - &sqrt_i(2)).to_string(), "1 - sqrt(2)");
        let x = &Real::from_rat(rat(1, 2)) + &(&Real::from_rat(rat(1, 2)) * &sqrt_i(2));
        assert_eq!(x.to_string(), "1/2 + 1/2*sqrt(2)");
    }
}
