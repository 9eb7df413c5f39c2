use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used throughout: arbitrary precision, always reduced.
pub type Rat = BigRational;

/// `p/q` as a [`Rat`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer shorthand.
pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Sign of a rational as -1, 0, or 1.
pub fn sign_of_rat(r: &Rat) -> i8 {
    use num_traits::Zero;
    if r.is_zero() {
        0
    } else if r.numer().sign() == num_bigint::Sign::Minus {
        -1
    } else {
        1
    }
}
