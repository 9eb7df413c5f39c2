//! Truncated Puiseux series over exact real-algebraic coefficients.
//!
//! A [`PuiseuxNumber`] represents an element of a real closed field extending
//! the reals by a positive infinitesimal `t`: a finite sum of terms
//! `c * t^e` with rational exponents, plus a horizon marking where knowledge
//! stops. `horizon == Infinite` means the sum is the exact value; a finite
//! horizon `h` means the value is the sum plus an unknown `O(t^h)` tail.
//!
//! Every operation tracks horizons honestly: queries whose answer would
//! depend on the unknown tail return [`Error::IndeterminateAtHorizon`]
//! instead of guessing. Addition and multiplication never lose precision
//! beyond what the operands' horizons force; inversion and square root work
//! to a relative precision window from [`PrecisionConfig`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_int, sign_of_rat, Rat};
use crate::real::Real;

/// Exponent bound: a finite rational or plus infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtRat {
    Finite(Rat),
    Infinite,
}

impl ExtRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRat::Infinite)
    }
}

fn ext_add(a: &ExtRat, b: &ExtRat) -> ExtRat {
    match (a, b) {
        (ExtRat::Finite(x), ExtRat::Finite(y)) => ExtRat::Finite(x + y),
        _ => ExtRat::Infinite,
    }
}

fn ext_add_rat(a: &ExtRat, e: &Rat) -> ExtRat {
    match a {
        ExtRat::Finite(x) => ExtRat::Finite(x + e),
        ExtRat::Infinite => ExtRat::Infinite,
    }
}

fn ext_min(a: ExtRat, b: ExtRat) -> ExtRat {
    if a <= b {
        a
    } else {
        b
    }
}

/// Precision policy: `window` is the relative precision (in powers of `t`)
/// that inversion and square root aim for; `denom_cap_log2` bounds the
/// ramification allowed when a root extraction halves an exponent.
#[derive(Clone, Copy, Debug)]
pub struct PrecisionConfig {
    pub window: u32,
    pub denom_cap_log2: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            window: 16,
            denom_cap_log2: 8,
        }
    }
}

impl PrecisionConfig {
    pub fn with_window(window: u32) -> Self {
        PrecisionConfig {
            window,
            ..Default::default()
        }
    }

    fn window_rat(&self) -> Rat {
        rat_int(self.window as i64)
    }

    /// Rejects exponents whose denominator exceeds the ramification cap.
    pub fn check_denom(&self, e: &Rat) -> Result<()> {
        let cap = BigInt::one() << self.denom_cap_log2;
        if e.denom() > &cap {
            Err(Error::DenominatorCapExceeded)
        } else {
            Ok(())
        }
    }
}

/// A truncated Puiseux series: strictly ascending exponents, nonzero
/// coefficients, all exponents strictly below the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxNumber {
    terms: Vec<(Rat, Real)>,
    horizon: ExtRat,
}

impl PuiseuxNumber {
    /// The exact zero (empty sum, nothing unknown).
    pub fn zero() -> Self {
        PuiseuxNumber {
            terms: Vec::new(),
            horizon: ExtRat::Infinite,
        }
    }

    pub fn one() -> Self {
        Self::constant(Real::one())
    }

    /// `O(t^h)`: zero terms known, tail unknown from `h` on.
    pub fn unknown_tail(h: Rat) -> Self {
        PuiseuxNumber {
            terms: Vec::new(),
            horizon: ExtRat::Finite(h),
        }
    }

    pub fn constant(c: Real) -> Self {
        Self::monomial(c, Rat::zero())
    }

    pub fn from_rat(q: Rat) -> Self {
        Self::constant(Real::from_rat(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Real::from_int(n))
    }

    /// `c * t^e`, exact.
    pub fn monomial(c: Real, e: Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PuiseuxNumber {
            terms: vec![(e, c)],
            horizon: ExtRat::Infinite,
        }
    }

    /// The infinitesimal `t` itself.
    pub fn t() -> Self {
        Self::monomial(Real::one(), Rat::one())
    }

    /// Sorts, merges duplicate exponents, drops zero coefficients and terms
    /// at or past the horizon, and enforces the exponent denominator cap.
    pub fn from_terms_checked(
        terms: Vec<(Rat, Real)>,
        horizon: ExtRat,
        cfg: &PrecisionConfig,
    ) -> Result<Self> {
        let mut map: BTreeMap<Rat, Real> = BTreeMap::new();
        for (e, c) in terms {
            cfg.check_denom(&e)?;
            match map.entry(e) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get() + &c;
                    *o.get_mut() = sum;
                }
            }
        }
        let terms = map
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && ExtRat::Finite(e.clone()) < horizon)
            .collect();
        Ok(PuiseuxNumber { terms, horizon })
    }

    pub fn terms(&self) -> &[(Rat, Real)] {
        &self.terms
    }

    pub fn horizon(&self) -> &ExtRat {
        &self.horizon
    }

    pub fn leading(&self) -> Option<(&Rat, &Real)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// Exactly zero: the empty sum with nothing hidden.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.horizon.is_infinite()
    }

    /// No known terms, but an unknown tail: zero as far as we can see.
    pub fn is_truncated_zero(&self) -> bool {
        self.terms.is_empty() && !self.horizon.is_infinite()
    }

    /// Zero as far as the horizon shows, exactly or by truncation.
    pub fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lower bound for the valuation: leading exponent, or the horizon when
    /// no term is known (infinite for the exact zero).
    pub fn lbv(&self) -> ExtRat {
        match self.terms.first() {
            Some((e, _)) => ExtRat::Finite(e.clone()),
            None => self.horizon.clone(),
        }
    }

    /// Exact valuation, when a leading term pins it down.
    pub fn valuation(&self) -> Option<&Rat> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Compares the valuation against a rational threshold, failing only
    /// when the horizon genuinely leaves the answer open.
    pub fn val_cmp(&self, theta: &Rat) -> Result<std::cmp::Ordering> {
        use std::cmp::Ordering;
        if let Some((e, _)) = self.terms.first() {
            return Ok(e.cmp(theta));
        }
        match &self.horizon {
            ExtRat::Infinite => Ok(Ordering::Greater),
            ExtRat::Finite(h) if h > theta => Ok(Ordering::Greater),
            _ => Err(Error::IndeterminateAtHorizon),
        }
    }

    /// Sign of the value: the leading coefficient decides; a truncated zero
    /// has indeterminate sign.
    pub fn sign_of(&self) -> Result<i8> {
        match self.terms.first() {
            Some((_, c)) => Ok(c.sign()),
            None => {
                if self.horizon.is_infinite() {
                    Ok(0)
                } else {
                    Err(Error::IndeterminateAtHorizon)
                }
            }
        }
    }

    pub fn compare(&self, other: &Self) -> Result<std::cmp::Ordering> {
        use std::cmp::Ordering;
        match self.sub(other).sign_of()? {
            -1 => Ok(Ordering::Less),
            0 => Ok(Ordering::Equal),
            _ => Ok(Ordering::Greater),
        }
    }

    /// Standard part: the real number infinitely close to this value.
    /// Fails with [`Error::NotFinite`] on unbounded values and with
    /// [`Error::IndeterminateAtHorizon`] if the constant term is hidden.
    pub fn standard_part(&self) -> Result<Real> {
        let zero = Rat::zero();
        match &self.horizon {
            ExtRat::Finite(h) if *h <= zero => return Err(Error::IndeterminateAtHorizon),
            _ => {}
        }
        match self.terms.first() {
            None => Ok(Real::zero()),
            Some((e, _)) if *e < zero => Err(Error::NotFinite),
            _ => Ok(self
                .terms
                .iter()
                .find(|(e, _)| e.is_zero())
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Real::zero)),
        }
    }

    /// Drops all terms at exponent `h` or beyond and caps the horizon.
    pub fn truncate_to(&self, h: ExtRat) -> Self {
        let horizon = ext_min(self.horizon.clone(), h);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| ExtRat::Finite(e.clone()) < horizon)
            .cloned()
            .collect();
        PuiseuxNumber { terms, horizon }
    }

    pub fn neg(&self) -> Self {
        PuiseuxNumber {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            horizon: self.horizon.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let horizon = ext_min(self.horizon.clone(), other.horizon.clone());
        let mut terms: Vec<(Rat, Real)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = match (self.terms.get(i), other.terms.get(j)) {
                (Some((ea, _)), Some((eb, _))) => {
                    if ea == eb {
                        let c = &self.terms[i].1 + &other.terms[j].1;
                        if !c.is_zero() {
                            terms.push((ea.clone(), c));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    ea < eb
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!(),
            };
            if take_left {
                terms.push(self.terms[i].clone());
                i += 1;
            } else {
                terms.push(other.terms[j].clone());
                j += 1;
            }
        }
        terms.retain(|(e, _)| ExtRat::Finite(e.clone()) < horizon);
        PuiseuxNumber { terms, horizon }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplication; the horizon is the best bound the factors justify:
    /// `min(lbv(a) + h(b), lbv(b) + h(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let horizon = ext_min(
            ext_add(&self.lbv(), &other.horizon),
            ext_add(&other.lbv(), &self.horizon),
        );
        let mut map: BTreeMap<Rat, Real> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if ExtRat::Finite(e.clone()) >= horizon {
                    continue;
                }
                let p = ca * cb;
                match map.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let sum = o.get() + &p;
                        *o.get_mut() = sum;
                    }
                }
            }
        }
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        PuiseuxNumber { terms, horizon }
    }

    /// Multiplies by the exact monomial `c * t^e`.
    pub fn mul_monomial(&self, c: &Real, e: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PuiseuxNumber {
            terms: self
                .terms
                .iter()
                .map(|(te, tc)| (te + e, tc * c))
                .collect(),
            horizon: ext_add_rat(&self.horizon, e),
        }
    }

    pub fn scale(&self, c: &Real) -> Self {
        self.mul_monomial(c, &Rat::zero())
    }

    /// Exact reciprocal of a single exact monomial; general inversion runs
    /// a Newton iteration to the precision window.
    pub fn invert(&self, cfg: &PrecisionConfig) -> Result<Self> {
        let (e0, c0) = match self.leading() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => {
                return Err(if self.horizon.is_infinite() {
                    Error::DivisionByZero
                } else {
                    Error::IndeterminateAtHorizon
                });
            }
        };
        let m_inv = Self::monomial(c0.inv(), -&e0);
        if self.terms.len() == 1 {
            // Relative precision survives inversion untouched.
            let horizon = match &self.horizon {
                ExtRat::Infinite => ExtRat::Infinite,
                ExtRat::Finite(h) => ExtRat::Finite(&(h - &e0) - &e0),
            };
            return Ok(PuiseuxNumber {
                terms: m_inv.terms,
                horizon,
            });
        }
        let (u, w, g) = self.normalized_unit(&e0, &m_inv, cfg);
        // r <- r(2 - u r) doubles the precision of r ~ 1/u each step.
        let two = Self::from_int(2);
        let mut r = Self::one();
        let mut delta = g;
        while delta < w {
            let correction = two.sub(&u.mul(&r));
            r = r.mul(&correction).truncate_to(ExtRat::Finite(w.clone()));
            delta = &delta + &delta;
        }
        // The reciprocal is only known to relative precision w, even when no
        // correction step ran.
        Ok(r.truncate_to(ExtRat::Finite(w)).mul(&m_inv))
    }

    pub fn div(&self, other: &Self, cfg: &PrecisionConfig) -> Result<Self> {
        Ok(self.mul(&other.invert(cfg)?))
    }

    /// Square root of a nonnegative value. The leading coefficient's root is
    /// taken exactly in the scalar tower; the series part runs a
    /// division-free Newton iteration for the inverse square root.
    pub fn sqrt(&self, cfg: &PrecisionConfig) -> Result<Self> {
        match self.sign_of()? {
            -1 => return Err(Error::NegativeRadicand),
            0 => return Ok(Self::zero()),
            _ => {}
        }
        let (e0, c0) = self.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let e_half = &e0 / &rat_int(2);
        cfg.check_denom(&e_half)?;
        let s0 = c0.sqrt()?;
        if self.terms.len() == 1 {
            let horizon = match &self.horizon {
                ExtRat::Infinite => ExtRat::Infinite,
                ExtRat::Finite(h) => ExtRat::Finite(&(h - &e0) + &e_half),
            };
            return Ok(PuiseuxNumber {
                terms: vec![(e_half, s0)],
                horizon,
            });
        }
        let m_inv = Self::monomial(c0.inv(), -&e0);
        let (u, w, g) = self.normalized_unit(&e0, &m_inv, cfg);
        // r ~ u^(-1/2); r <- r(3 - u r^2)/2 doubles precision per step.
        let three = Self::from_int(3);
        let half = Real::from_rat(Rat::new(BigInt::one(), BigInt::from(2)));
        let mut r = Self::one();
        let mut delta = g;
        while delta < w {
            let ur2 = u.mul(&r).mul(&r);
            r = r
                .mul(&three.sub(&ur2))
                .scale(&half)
                .truncate_to(ExtRat::Finite(w.clone()));
            delta = &delta + &delta;
        }
        let root_rel = u.mul(&r).truncate_to(ExtRat::Finite(w.clone()));
        Ok(root_rel.mul_monomial(&s0, &e_half))
    }

    /// Normalizes to `u = 1 + z` with `lbv(z) = g > 0`, and picks the working
    /// precision `w` from the window and the input's relative horizon.
    fn normalized_unit(&self, e0: &Rat, m_inv: &Self, cfg: &PrecisionConfig) -> (Self, Rat, Rat) {
        debug_assert!(cfg.window >= 1);
        let rel = match &self.horizon {
            ExtRat::Infinite => None,
            ExtRat::Finite(h) => Some(h - e0),
        };
        let w = match rel {
            Some(r) if r < cfg.window_rat() => r,
            _ => cfg.window_rat(),
        };
        let u = self.mul(m_inv).truncate_to(ExtRat::Finite(w.clone()));
        // A tail that starts at or beyond the working precision leaves u = 1
        // as far as we compute; gap w means no correction steps are needed.
        let g = u
            .terms
            .iter()
            .find(|(e, _)| !e.is_zero())
            .map(|(e, _)| e.clone())
            .unwrap_or_else(|| w.clone());
        (u, w, g)
    }
}

impl fmt::Display for PuiseuxNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let (lead, coeff) = match c {
                Real::Rat(q) if sign_of_rat(q) < 0 && !first => (" - ", Real::Rat(-q)),
                _ => {
                    if first {
                        ("", c.clone())
                    } else {
                        (" + ", c.clone())
                    }
                }
            };
            write!(f, "{}", lead)?;
            fmt_term(f, &coeff, e)?;
            first = false;
        }
        if let ExtRat::Finite(h) = &self.horizon {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(t^{})", ExpFmt(h))?;
        }
        Ok(())
    }
}

struct ExpFmt<'a>(&'a Rat);

impl fmt::Display for ExpFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() && sign_of_rat(self.0) >= 0 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, c: &Real, e: &Rat) -> fmt::Result {
    let coeff_str = match c {
        Real::Rat(q) => {
            if q.is_one() && !e.is_zero() {
                String::new()
            } else if (-q).is_one() && !e.is_zero() {
                "-".to_string()
            } else {
                format!("{}", q)
            }
        }
        quad => format!("({})", quad),
    };
    if e.is_zero() {
        return write!(f, "{}", if coeff_str.is_empty() { "1" } else { &coeff_str });
    }
    if !coeff_str.is_empty() && coeff_str != "-" {
        write!(f, "{}*", coeff_str)?;
    } else {
        write!(f, "{}", coeff_str)?;
    }
    if e.is_one() {
        write!(f, "t")
    } else {
        write!(f, "t^{}", ExpFmt(e))
    }
}
