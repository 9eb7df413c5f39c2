//! Seeded samplers for the verification suites.
//!
//! Every sampler draws from a `ChaCha8Rng` derived from (seed, trial), so a
//! reported failure replays from its seed alone. Abscissas are built so that
//! the leading coefficient of x(x+1)(x+eps) is a rational square whenever
//! the regime allows it, keeping the square roots of sampled ordinates
//! inside the rationals instead of spawning radical towers.

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::puiseux::{ExtRat, PrecisionConfig, PuiseuxNumber};
use crate::rational::{rat, rat_int, Rat};
use crate::real::Real;

/// Per-trial generator: trials are decorrelated by a fixed odd multiplier,
/// and trial 0 replays the bare seed.
pub fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn small_positive_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=9))
}

pub fn small_nonzero_rat(rng: &mut ChaCha8Rng) -> Rat {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    small_positive_rat(rng) * rat_int(sign)
}

/// A unit-height abscissa c = m^2 - 1 with m = 1 + 1/k, so that the leading
/// coefficient c^2 (c+1) = c^2 m^2 of the cubic is a rational square. Values
/// with k >= 3 lie below 1; k = 2 gives 5/4, useful for the region pinned to
/// 1 by f*.
pub fn square_unit_abscissa(rng: &mut ChaCha8Rng, below_one: bool) -> Rat {
    let k = if below_one {
        rng.gen_range(3..=9)
    } else {
        rng.gen_range(2..=9)
    };
    let m = Rat::one() + rat(1, k);
    m.clone() * m - Rat::one()
}

/// An infinitesimal curve parameter: leading monomial c t^v with v in small
/// halves, optionally followed by one tail term.
pub fn split_epsilon(rng: &mut ChaCha8Rng, cfg: &PrecisionConfig) -> PuiseuxNumber {
    let v = rat(rng.gen_range(1..=4), 2);
    let coeffs = [rat(1, 1), rat(2, 1), rat(3, 1), rat(1, 2), rat(9, 4)];
    let c = coeffs[rng.gen_range(0..coeffs.len())].clone();
    let mut terms = vec![(v.clone(), Real::from_rat(c))];
    if rng.gen_bool(0.5) {
        let tail_exp = v + rat(rng.gen_range(1..=3), 2);
        terms.push((tail_exp, Real::from_rat(small_nonzero_rat(rng))));
    }
    PuiseuxNumber::from_terms_checked(terms, ExtRat::Infinite, cfg)
        .expect("sampled exponents respect the denominator cap")
}

/// A bounded curve parameter eps = r^2 with rational r in (0, 1), so the
/// first halving abscissa sqrt(eps) = r stays rational. An optional
/// infinitesimal tail does not change the reduction type.
pub fn good_epsilon(rng: &mut ChaCha8Rng, cfg: &PrecisionConfig) -> PuiseuxNumber {
    let roots = [rat(1, 2), rat(1, 3), rat(2, 3), rat(3, 4), rat(2, 5)];
    let r = roots[rng.gen_range(0..roots.len())].clone();
    let mut terms = vec![(Rat::zero(), Real::from_rat(r.clone() * r))];
    if rng.gen_bool(0.5) {
        terms.push((
            rat(rng.gen_range(1..=3), 1),
            Real::from_rat(small_nonzero_rat(rng)),
        ));
    }
    PuiseuxNumber::from_terms_checked(terms, ExtRat::Infinite, cfg)
        .expect("sampled exponents respect the denominator cap")
}

/// A curve parameter infinitesimally below 1.
pub fn nonsplit_epsilon(rng: &mut ChaCha8Rng, cfg: &PrecisionConfig) -> PuiseuxNumber {
    PuiseuxNumber::one().sub(&split_epsilon(rng, cfg))
}

/// A random exact series: ascending exponents on the grid Z/den starting
/// near `start`, nonzero rational coefficients, infinite horizon.
pub fn exact_series(
    rng: &mut ChaCha8Rng,
    len: usize,
    start: Rat,
    den: i64,
    cfg: &PrecisionConfig,
) -> PuiseuxNumber {
    let mut terms = Vec::with_capacity(len);
    let mut e = start;
    for _ in 0..len.max(1) {
        terms.push((e.clone(), Real::from_rat(small_nonzero_rat(rng))));
        e += rat(rng.gen_range(1..=3), den);
    }
    PuiseuxNumber::from_terms_checked(terms, ExtRat::Infinite, cfg)
        .expect("sampled exponents respect the denominator cap")
}

/// An interior abscissa for a split curve: valuation k/8 of v(eps) with
/// k in 1..8, so the point sits strictly between the unit region and the
/// two-torsion region. Any positive coefficient works: the cubic's leading
/// coefficient is its square.
pub fn interior_abscissa(rng: &mut ChaCha8Rng, veps: &Rat) -> PuiseuxNumber {
    let k = rng.gen_range(1..=7);
    interior_eighth(rng, veps, k)
}

/// Interior abscissa at the fixed eighth k/8 of v(eps).
pub fn interior_eighth(rng: &mut ChaCha8Rng, veps: &Rat, k: i64) -> PuiseuxNumber {
    debug_assert!((1..8).contains(&k));
    PuiseuxNumber::monomial(
        Real::from_rat(small_positive_rat(rng)),
        veps.clone() * rat(k, 8),
    )
}

/// An abscissa beyond the two-torsion scale: valuation above v(eps), with
/// the coefficient chosen as c_eps m^2 so the cubic's leading coefficient
/// c_x c_eps is again a square.
pub fn deep_abscissa(rng: &mut ChaCha8Rng, eps: &PuiseuxNumber) -> PuiseuxNumber {
    let (e, c) = eps.leading().expect("epsilon has a leading term");
    let c = c.as_rat().expect("sampled epsilon has rational leading");
    let m = rat_int(rng.gen_range(1..=3));
    let v = e.clone() * rat(rng.gen_range(5..=8), 4);
    PuiseuxNumber::monomial(Real::from_rat(c * m.clone() * m), v)
}

/// An unbounded abscissa, for arcs truncated far from two-torsion and for
/// points reducing to the identity.
pub fn far_abscissa(rng: &mut ChaCha8Rng) -> PuiseuxNumber {
    let v = rat(-rng.gen_range(1..=4), 2);
    PuiseuxNumber::monomial(Real::from_rat(small_positive_rat(rng)), v)
}
