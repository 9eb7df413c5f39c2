//! Reduction of the minimal family at the infinitesimal place.
//!
//! Sending `t -> 0` maps `y^2 = x(x+1)(x+eps)` onto a cubic over the exact
//! real scalars. Which cubic depends only on where `eps` sits relative to
//! the valuation: `v(eps) > 0` degenerates to a node at the origin with
//! rational tangent slopes (split multiplicative), `v(eps - 1) > 0` to a
//! node at `(-1, 0)` with no real tangents (nonsplit multiplicative), and
//! otherwise the limit curve stays smooth (good reduction).

use num_traits::Zero;

use crate::curve::{CurvePoint, MinimalCurve};
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxNumber;
use crate::rational::Rat;
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionType {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
}

impl ReductionType {
    pub fn label(&self) -> &'static str {
        match self {
            ReductionType::Good => "good",
            ReductionType::SplitMultiplicative => "split",
            ReductionType::NonsplitMultiplicative => "nonsplit",
        }
    }
}

impl std::fmt::Display for ReductionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub fn reduction_type(curve: &MinimalCurve) -> Result<ReductionType> {
    let zero = Rat::zero();
    match curve.epsilon().val_cmp(&zero)? {
        std::cmp::Ordering::Greater => Ok(ReductionType::SplitMultiplicative),
        _ => {
            let gap = PuiseuxNumber::one().sub(curve.epsilon());
            match gap.val_cmp(&zero)? {
                std::cmp::Ordering::Greater => Ok(ReductionType::NonsplitMultiplicative),
                _ => Ok(ReductionType::Good),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedPoint {
    Infinity,
    Affine { x: Real, y: Real },
}

impl ReducedPoint {
    pub fn affine(x: Real, y: Real) -> Self {
        ReducedPoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ReducedPoint::Infinity)
    }

    pub fn neg(&self) -> Self {
        match self {
            ReducedPoint::Infinity => ReducedPoint::Infinity,
            ReducedPoint::Affine { x, y } => ReducedPoint::affine(x.clone(), -y),
        }
    }
}

impl std::fmt::Display for ReducedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReducedPoint::Infinity => write!(f, "O"),
            ReducedPoint::Affine { x, y } => write!(f, "({}, {})", x, y),
        }
    }
}

/// Same point, decided by exact arithmetic rather than representation.
pub fn reduced_points_agree(p: &ReducedPoint, q: &ReducedPoint) -> bool {
    match (p, q) {
        (ReducedPoint::Infinity, ReducedPoint::Infinity) => true,
        (ReducedPoint::Affine { x: xa, y: ya }, ReducedPoint::Affine { x: xb, y: yb }) => {
            (xa - xb).is_zero() && (ya - yb).is_zero()
        }
        _ => false,
    }
}

/// The limit cubic `y^2 = x(x+1)(x+eps)` over the exact real scalars;
/// `eps` may be 0 or 1, in which case the curve carries a node.
#[derive(Clone, Debug)]
pub struct ReducedCurve {
    epsilon: Real,
}

impl ReducedCurve {
    pub fn new(epsilon: Real) -> Self {
        ReducedCurve { epsilon }
    }

    pub fn epsilon(&self) -> &Real {
        &self.epsilon
    }

    /// The singular point, when there is one.
    pub fn node(&self) -> Option<ReducedPoint> {
        if self.epsilon.is_zero() {
            Some(ReducedPoint::affine(Real::zero(), Real::zero()))
        } else if self.epsilon.is_one() {
            Some(ReducedPoint::affine(Real::from_int(-1), Real::zero()))
        } else {
            None
        }
    }

    pub fn is_node(&self, p: &ReducedPoint) -> bool {
        self.node().map(|n| reduced_points_agree(&n, p)).unwrap_or(false)
    }

    pub fn rhs(&self, x: &Real) -> Real {
        x * &((x + &Real::one()) * &(x + &self.epsilon))
    }

    fn rhs_prime(&self, x: &Real) -> Real {
        let one_plus_eps = &Real::one() + &self.epsilon;
        let three_x2 = &Real::from_int(3) * &(x * x);
        &three_x2 + &(&(&Real::from_int(2) * &(&one_plus_eps * x)) + &self.epsilon)
    }

    pub fn contains(&self, p: &ReducedPoint) -> bool {
        match p {
            ReducedPoint::Infinity => true,
            ReducedPoint::Affine { x, y } => (&(y * y) - &self.rhs(x)).is_zero(),
        }
    }

    /// Chord-tangent addition on the smooth locus.
    pub fn add_points(&self, p: &ReducedPoint, q: &ReducedPoint) -> Result<ReducedPoint> {
        if self.is_node(p) || self.is_node(q) {
            return Err(Error::SingularOperand);
        }
        let (xp, yp) = match p {
            ReducedPoint::Infinity => return Ok(q.clone()),
            ReducedPoint::Affine { x, y } => (x, y),
        };
        let (xq, yq) = match q {
            ReducedPoint::Infinity => return Ok(p.clone()),
            ReducedPoint::Affine { x, y } => (x, y),
        };
        let dx = xq - xp;
        if dx.is_zero() {
            return if (yp + yq).is_zero() {
                Ok(ReducedPoint::Infinity)
            } else {
                self.double_point(p)
            };
        }
        let m = &(yq - yp) / &dx;
        Ok(self.chord_result(&m, xp, yp, xq))
    }

    pub fn double_point(&self, p: &ReducedPoint) -> Result<ReducedPoint> {
        if self.is_node(p) {
            return Err(Error::SingularOperand);
        }
        let (xp, yp) = match p {
            ReducedPoint::Infinity => return Ok(ReducedPoint::Infinity),
            ReducedPoint::Affine { x, y } => (x, y),
        };
        if yp.is_zero() {
            return Ok(ReducedPoint::Infinity);
        }
        let m = &self.rhs_prime(xp) / &(yp + yp);
        Ok(self.chord_result(&m, xp, yp, xp))
    }

    pub fn sub_points(&self, p: &ReducedPoint, q: &ReducedPoint) -> Result<ReducedPoint> {
        self.add_points(p, &q.neg())
    }

    fn chord_result(&self, m: &Real, xp: &Real, yp: &Real, xq: &Real) -> ReducedPoint {
        let one_plus_eps = &Real::one() + &self.epsilon;
        let xr = &(&(m * m) - &one_plus_eps) - &(xp + xq);
        let yr = &(m * &(xp - &xr)) - yp;
        ReducedPoint::affine(xr, yr)
    }
}

/// The reduced curve under `t -> 0`.
pub fn reduce_curve(curve: &MinimalCurve) -> Result<ReducedCurve> {
    Ok(ReducedCurve::new(curve.epsilon().standard_part()?))
}

/// Reduction of a point: unbounded points go to the point at infinity,
/// bounded points reduce coordinatewise.
pub fn reduce_point(p: &CurvePoint) -> Result<ReducedPoint> {
    match p {
        CurvePoint::Infinity => Ok(ReducedPoint::Infinity),
        CurvePoint::Affine { x, y } => {
            if x.val_cmp(&Rat::zero())? == std::cmp::Ordering::Less {
                return Ok(ReducedPoint::Infinity);
            }
            Ok(ReducedPoint::affine(x.standard_part()?, y.standard_part()?))
        }
    }
}

/// Kernel of reduction: the point reduces to the identity.
pub fn reduces_to_identity(p: &CurvePoint) -> Result<bool> {
    Ok(reduce_point(p)?.is_infinity())
}

/// The subgroup with nonsingular reduction: the point misses the node.
pub fn reduces_to_smooth_point(rc: &ReducedCurve, p: &CurvePoint) -> Result<bool> {
    Ok(!rc.is_node(&reduce_point(p)?))
}
