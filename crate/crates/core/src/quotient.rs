//! Quotients of the identity component by its infinitesimal neighborhoods.
//!
//! Two scopes are studied. The full scope takes the whole identity component
//! E0. The truncated scope fixes a point S on E0 with y_S > 0 and keeps the
//! closed-open arc G = [-S, S) around the origin; addition wraps by [2]S so G
//! stays a group. In both scopes G00 denotes the subgroup of points
//! infinitesimally close to the identity, with level-n refinements where the
//! scope admits them.
//!
//! The quotient G / G00 lands on exactly one of two sides, and the case is
//! decided by the reduction type together with the valuation of x_S:
//!
//! * value-group side: the quotient is an interval in the value group. This
//!   happens for split multiplicative reduction over the full component, and
//!   for split reduction truncated at an infinitesimal x_S. The witness is
//!   f*, a piecewise coordinate into a multiplicative truncation, read
//!   through its valuation.
//! * residue-field side: the quotient is carried by the residue field. This
//!   covers good and nonsplit reduction (any scope), truncation at unbounded
//!   x_S, and split reduction truncated at an x_S of valuation zero. The
//!   witnesses are reduced points, residue coordinate pairs, or standard
//!   parts of f*.
//!
//! The flag `one_based` records which side a case is on: true exactly for the
//! value-group cases, where the level filtration G00_n is strictly
//! decreasing; on the residue side every level collapses to the same kernel.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::curve::{points_agree, CurvePoint, MinimalCurve};
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxNumber;
use crate::rational::{rat_int, Rat};
use crate::real::Real;
use crate::reduction::{
    reduce_curve, reduce_point, reduction_type, ReducedCurve, ReducedPoint, ReductionType,
};

const OUTSIDE_GROUP: &str = "operand outside the truncated component";

/// Which of the six quotient cases a scope falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseLabel {
    /// Full component, split multiplicative reduction.
    FullSplit,
    /// Full component, good or nonsplit multiplicative reduction.
    FullGoodOrNonsplit,
    /// Truncated, good or nonsplit reduction, x_S bounded.
    TruncReductionLike,
    /// Truncated at unbounded x_S; the arc hugs the identity.
    TruncNearIdentity,
    /// Truncated, split reduction, x_S infinitesimal.
    TruncSplitDeep,
    /// Truncated, split reduction, x_S a unit below 1.
    TruncSplitUnit,
}

/// Where the quotient group lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Internality {
    ValueGroup,
    ResidueField,
}

/// Which witness map separates the classes of G / G00.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessMap {
    FStar,
    ReductionRepresentative,
    ResidueCoordinates,
    FStarToMultTruncation,
}

impl CaseLabel {
    pub fn label(&self) -> &'static str {
        match self {
            CaseLabel::FullSplit => "full-split",
            CaseLabel::FullGoodOrNonsplit => "full-good-or-nonsplit",
            CaseLabel::TruncReductionLike => "trunc-reduction-like",
            CaseLabel::TruncNearIdentity => "trunc-near-identity",
            CaseLabel::TruncSplitDeep => "trunc-split-deep",
            CaseLabel::TruncSplitUnit => "trunc-split-unit",
        }
    }

    /// True exactly for the value-group cases.
    pub fn one_based(&self) -> bool {
        matches!(self, CaseLabel::FullSplit | CaseLabel::TruncSplitDeep)
    }

    pub fn internality(&self) -> Internality {
        if self.one_based() {
            Internality::ValueGroup
        } else {
            Internality::ResidueField
        }
    }

    pub fn witness_map(&self) -> WitnessMap {
        match self {
            CaseLabel::FullSplit | CaseLabel::TruncSplitDeep => WitnessMap::FStar,
            CaseLabel::FullGoodOrNonsplit | CaseLabel::TruncReductionLike => {
                WitnessMap::ReductionRepresentative
            }
            CaseLabel::TruncNearIdentity => WitnessMap::ResidueCoordinates,
            CaseLabel::TruncSplitUnit => WitnessMap::FStarToMultTruncation,
        }
    }
}

impl Internality {
    pub fn label(&self) -> &'static str {
        match self {
            Internality::ValueGroup => "value-group",
            Internality::ResidueField => "residue-field",
        }
    }
}

impl WitnessMap {
    pub fn label(&self) -> &'static str {
        match self {
            WitnessMap::FStar => "f-star",
            WitnessMap::ReductionRepresentative => "reduction-representative",
            WitnessMap::ResidueCoordinates => "residue-coordinates",
            WitnessMap::FStarToMultTruncation => "f-star-mult-truncation",
        }
    }
}

/// The resolved classification of one scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub case: CaseLabel,
    pub reduction: ReductionType,
    pub one_based: bool,
    pub internality: Internality,
    pub witness: WitnessMap,
}

/// The multiplicative group truncated to [1/b, b) for a bound b > 1.
///
/// Multiplication folds overflow back by b^2, so the square of the boundary
/// class 1/b is the identity: 1/b is the unique class of order two.
#[derive(Clone, Debug)]
pub struct MultTruncation {
    b: PuiseuxNumber,
    b_inv: PuiseuxNumber,
}

impl MultTruncation {
    /// Builds the truncation from the lower boundary 1/b, which must lie
    /// strictly between 0 and 1. Passing the inverse keeps b_inv exact when
    /// the caller owns it exactly.
    pub fn from_inverse(b_inv: PuiseuxNumber, cfg: &crate::puiseux::PrecisionConfig) -> Result<Self> {
        if b_inv.sign_of()? != 1 || b_inv.compare(&PuiseuxNumber::one())? != Ordering::Less {
            return Err(Error::InvalidTruncationBound);
        }
        let b = b_inv.invert(cfg)?;
        Ok(MultTruncation { b, b_inv })
    }

    pub fn bound(&self) -> &PuiseuxNumber {
        &self.b
    }

    /// The unique class of order two, the lower boundary 1/b.
    pub fn two_torsion_rep(&self) -> &PuiseuxNumber {
        &self.b_inv
    }

    pub fn member(&self, x: &PuiseuxNumber) -> Result<bool> {
        Ok(x.compare(&self.b_inv)? != Ordering::Less && x.compare(&self.b)? == Ordering::Less)
    }

    /// Folds a product of two members back into [1/b, b).
    fn fold(&self, z: PuiseuxNumber) -> Result<PuiseuxNumber> {
        let folded = if z.compare(&self.b)? != Ordering::Less {
            z.mul(&self.b_inv).mul(&self.b_inv)
        } else if z.compare(&self.b_inv)? == Ordering::Less {
            z.mul(&self.b).mul(&self.b)
        } else {
            z
        };
        if !self.member(&folded)? {
            return Err(Error::InvalidTruncationPoint(OUTSIDE_GROUP));
        }
        Ok(folded)
    }

    pub fn mul(&self, x: &PuiseuxNumber, y: &PuiseuxNumber) -> Result<PuiseuxNumber> {
        if !self.member(x)? || !self.member(y)? {
            return Err(Error::InvalidTruncationPoint(OUTSIDE_GROUP));
        }
        self.fold(x.mul(y))
    }

    pub fn inv(&self, x: &PuiseuxNumber, cfg: &crate::puiseux::PrecisionConfig) -> Result<PuiseuxNumber> {
        if !self.member(x)? {
            return Err(Error::InvalidTruncationPoint(OUTSIDE_GROUP));
        }
        self.fold(x.invert(cfg)?)
    }

    /// Level-n neighborhood of 1: members with |v(x)| < |v(b)| / n.
    ///
    /// When v(b) = 0 every level is empty; the multiplicative structure near
    /// 1 is then residue-field structure, which is the dichotomy in
    /// miniature.
    pub fn h00_member(&self, x: &PuiseuxNumber, n: u32) -> Result<bool> {
        assert!(n >= 1, "levels are indexed from 1");
        let vx = match x.valuation() {
            Some(v) => v.abs(),
            None => return Err(Error::IndeterminateAtHorizon),
        };
        let vb = self.b_inv.valuation().map(|v| v.abs()).unwrap_or_else(Rat::zero);
        Ok(vx < vb / rat_int(n as i64))
    }
}

/// A validated truncation point S together with the cached doubling [2]S.
///
/// S must be an affine point of the identity component with y_S > 0; the
/// truncated group is the arc G = [-S, S), which always contains the
/// identity and never contains S itself or the two-torsion point.
pub struct TruncationContext<'a> {
    curve: &'a MinimalCurve,
    s: CurvePoint,
    double_s: CurvePoint,
    key_s: PuiseuxNumber,
}

impl<'a> TruncationContext<'a> {
    pub fn new(curve: &'a MinimalCurve, s: CurvePoint) -> Result<Self> {
        let (x, y) = match (s.x(), s.y()) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(Error::InvalidTruncationPoint(
                    "truncation point must be affine",
                ))
            }
        };
        if !curve.contains(&s) {
            return Err(Error::InvalidTruncationPoint(
                "truncation point must lie on the curve",
            ));
        }
        if x.sign_of()? < 0 {
            return Err(Error::InvalidTruncationPoint(
                "truncation point must lie on the identity component",
            ));
        }
        if y.sign_of()? != 1 {
            return Err(Error::InvalidTruncationPoint(
                "truncation point must have positive ordinate",
            ));
        }
        let double_s = curve.double_point(&s)?;
        let key_s = curve.orientation_key(&s)?;
        Ok(TruncationContext {
            curve,
            s,
            double_s,
            key_s,
        })
    }

    pub fn point(&self) -> &CurvePoint {
        &self.s
    }

    pub fn double_point(&self) -> &CurvePoint {
        &self.double_s
    }

    pub fn trunc_x(&self) -> &PuiseuxNumber {
        self.s.x().expect("truncation point is affine")
    }

    /// Membership in the arc [-S, S). The upper endpoint is excluded, so S
    /// itself is out while -S is in.
    pub fn member(&self, p: &CurvePoint) -> Result<bool> {
        // Endpoints first, by coordinate agreement: at the boundary the key
        // comparison is a difference of identical truncated series, which no
        // sign test can decide.
        if points_agree(p, &self.s) {
            return Ok(false);
        }
        if points_agree(p, &self.s.neg()) {
            return Ok(true);
        }
        let key = match self.curve.orientation_key(p) {
            Ok(k) => k,
            Err(Error::NotOnComponent) => return Ok(false),
            Err(e) => return Err(e),
        };
        Ok(key.compare(&self.key_s.neg())? != Ordering::Less
            && key.compare(&self.key_s)? == Ordering::Less)
    }

    /// Group law of G: add on the curve, then wrap by [2]S when the sum
    /// leaves the arc.
    ///
    /// Wrap detection needs the operand orientations, not just the sum: when
    /// both operands sit strictly above the x-axis their angular sum can pass
    /// the two-torsion point, landing at a position whose key looks interior
    /// even though the true sum left the arc. That case is recognized by the
    /// sum crossing into the opposite half (or hitting two-torsion exactly)
    /// while both inputs share a half.
    pub fn truncated_add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        if !self.member(p)? || !self.member(q)? {
            return Err(Error::InvalidTruncationPoint(OUTSIDE_GROUP));
        }
        let r = self.curve.add_points(p, q)?;
        let t2 = self.curve.t2();
        let sp = y_half(p)?;
        let sq = y_half(q)?;
        let at_t2 = points_agree(&r, &t2);
        let sr = if at_t2 { Some(0) } else { y_half(&r)? };
        if sp == Some(1) && sq == Some(1) && (at_t2 || sr == Some(-1)) {
            return self.curve.sub_points(&r, &self.double_s);
        }
        if sp == Some(-1) && sq == Some(-1) && (at_t2 || sr == Some(1)) {
            return self.curve.add_points(&r, &self.double_s);
        }
        let key = self.curve.orientation_key(&r)?;
        if key.compare(&self.key_s)? != Ordering::Less {
            self.curve.sub_points(&r, &self.double_s)
        } else if key.compare(&self.key_s.neg())? == Ordering::Less {
            self.curve.add_points(&r, &self.double_s)
        } else {
            Ok(r)
        }
    }
}

fn y_half(p: &CurvePoint) -> Result<Option<i8>> {
    match p.y() {
        None => Ok(None),
        Some(y) => Ok(Some(y.sign_of()?)),
    }
}

/// A witness separating the classes of G / G00.
#[derive(Clone, Debug)]
pub enum WitnessValue {
    /// Signed valuation coordinate in [-1, 1]; value-group cases.
    CircleCoordinate(Rat),
    /// Image on the reduced curve; good and nonsplit cases.
    Reduced(ReducedPoint),
    /// Orientation sign and leading-coefficient ratio against x_S; the
    /// near-identity truncation. The identity class is (0, 0).
    Residue(i8, Real),
    /// Standard part of f*; the unit-height split truncation.
    MultiplicativeResidue(Real),
}

impl std::fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessValue::CircleCoordinate(c) => write!(f, "{}", c),
            WitnessValue::Reduced(p) => write!(f, "{}", p),
            WitnessValue::Residue(s, r) => write!(f, "({}, {})", s, r),
            WitnessValue::MultiplicativeResidue(r) => write!(f, "{}", r),
        }
    }
}

/// One scope (full or truncated) with everything needed to compute
/// witnesses: the classification, the reduced curve, and the multiplicative
/// truncation where the case uses one.
pub struct QuotientSetting<'a> {
    curve: &'a MinimalCurve,
    reduction: ReductionType,
    case: CaseLabel,
    trunc: Option<TruncationContext<'a>>,
    mult: Option<MultTruncation>,
    reduced: ReducedCurve,
}

impl<'a> QuotientSetting<'a> {
    /// The full identity component.
    pub fn full(curve: &'a MinimalCurve) -> Result<Self> {
        let reduction = reduction_type(curve)?;
        let case = match reduction {
            ReductionType::SplitMultiplicative => CaseLabel::FullSplit,
            _ => CaseLabel::FullGoodOrNonsplit,
        };
        let mult = match case {
            CaseLabel::FullSplit => Some(MultTruncation::from_inverse(
                curve.epsilon().clone(),
                curve.config(),
            )?),
            _ => None,
        };
        let reduced = reduce_curve(curve)?;
        Ok(QuotientSetting {
            curve,
            reduction,
            case,
            trunc: None,
            mult,
            reduced,
        })
    }

    /// The arc [-S, S) for a truncation point S.
    pub fn truncated(curve: &'a MinimalCurve, s: CurvePoint) -> Result<Self> {
        let reduction = reduction_type(curve)?;
        let ctx = TruncationContext::new(curve, s)?;
        let vxs = ctx.trunc_x().val_cmp(&Rat::zero())?;
        let case = match (vxs, reduction) {
            (Ordering::Less, _) => CaseLabel::TruncNearIdentity,
            (_, ReductionType::Good) | (_, ReductionType::NonsplitMultiplicative) => {
                CaseLabel::TruncReductionLike
            }
            (Ordering::Greater, ReductionType::SplitMultiplicative) => CaseLabel::TruncSplitDeep,
            (Ordering::Equal, ReductionType::SplitMultiplicative) => {
                if ctx.trunc_x().compare(&PuiseuxNumber::one())? != Ordering::Less {
                    return Err(Error::InvalidTruncationPoint(
                        "split truncation at height one or above gives a trivial quotient",
                    ));
                }
                CaseLabel::TruncSplitUnit
            }
        };
        let mult = match case {
            CaseLabel::TruncSplitDeep | CaseLabel::TruncSplitUnit => Some(
                MultTruncation::from_inverse(ctx.trunc_x().clone(), curve.config())?,
            ),
            _ => None,
        };
        let reduced = reduce_curve(curve)?;
        Ok(QuotientSetting {
            curve,
            reduction,
            case,
            trunc: Some(ctx),
            mult,
            reduced,
        })
    }

    pub fn curve(&self) -> &MinimalCurve {
        self.curve
    }

    pub fn case(&self) -> CaseLabel {
        self.case
    }

    pub fn reduction(&self) -> ReductionType {
        self.reduction
    }

    pub fn truncation(&self) -> Option<&TruncationContext<'a>> {
        self.trunc.as_ref()
    }

    pub fn mult_truncation(&self) -> Option<&MultTruncation> {
        self.mult.as_ref()
    }

    pub fn reduced_curve(&self) -> &ReducedCurve {
        &self.reduced
    }

    pub fn classification(&self) -> Classification {
        Classification {
            case: self.case,
            reduction: self.reduction,
            one_based: self.case.one_based(),
            internality: self.case.internality(),
            witness: self.case.witness_map(),
        }
    }

    /// Group law of the scope: plain addition on the full component,
    /// wrapped addition on an arc.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        match &self.trunc {
            Some(ctx) => ctx.truncated_add(p, q),
            None => {
                if !self.member(p)? || !self.member(q)? {
                    return Err(Error::NotOnComponent);
                }
                self.curve.add_points(p, q)
            }
        }
    }

    /// Membership of a point in the scope's group.
    pub fn member(&self, p: &CurvePoint) -> Result<bool> {
        match &self.trunc {
            Some(ctx) => ctx.member(p),
            None => {
                if p.is_infinity() {
                    Ok(true)
                } else {
                    self.curve.is_on_identity_component(p)
                }
            }
        }
    }

    /// The piecewise coordinate f* into the multiplicative truncation.
    ///
    /// On the region between the floor and 1 the upper half maps to 1/x and
    /// the lower half to x; at or beyond 1 the value is pinned to 1, and at
    /// or below the floor it is pinned to the floor. The floor is epsilon on
    /// the full component and x_S on a split truncation, so two-torsion
    /// (full scope) and the arc boundary -S (truncated scope) both land on
    /// the order-two class 1/b.
    pub fn f_star(&self, p: &CurvePoint) -> Result<PuiseuxNumber> {
        let floor = match self.case {
            CaseLabel::FullSplit => self.curve.epsilon(),
            CaseLabel::TruncSplitDeep | CaseLabel::TruncSplitUnit => {
                self.trunc.as_ref().expect("truncated case").trunc_x()
            }
            _ => return Err(Error::WrongCase),
        };
        let (x, y) = match (p.x(), p.y()) {
            (Some(x), Some(y)) => (x, y),
            _ => return Ok(PuiseuxNumber::one()),
        };
        if x.sign_of()? < 0 {
            return Err(Error::NotOnComponent);
        }
        let one = PuiseuxNumber::one();
        if x.compare(&one)? != Ordering::Less {
            return Ok(one);
        }
        if x.compare(floor)? != Ordering::Greater {
            return Ok(floor.clone());
        }
        if y.sign_of()? >= 0 {
            x.invert(self.curve.config())
        } else {
            Ok(x.clone())
        }
    }

    /// The witness value of a point's class in G / G00.
    pub fn quotient_coordinate(&self, p: &CurvePoint) -> Result<WitnessValue> {
        if !self.member(p)? {
            return Err(Error::InvalidTruncationPoint(OUTSIDE_GROUP));
        }
        match self.case {
            CaseLabel::FullSplit | CaseLabel::TruncSplitDeep => {
                let f = self.f_star(p)?;
                let vf = f
                    .valuation()
                    .cloned()
                    .ok_or(Error::IndeterminateAtHorizon)?;
                let scale = match self.case {
                    CaseLabel::FullSplit => self
                        .curve
                        .epsilon()
                        .valuation()
                        .cloned()
                        .expect("split epsilon is infinitesimal"),
                    _ => self
                        .trunc
                        .as_ref()
                        .expect("truncated case")
                        .trunc_x()
                        .valuation()
                        .cloned()
                        .expect("deep truncation abscissa is infinitesimal"),
                };
                let c = vf.abs() / scale;
                let sign = match p.y() {
                    None => return Ok(WitnessValue::CircleCoordinate(Rat::zero())),
                    Some(y) => y.sign_of()?,
                };
                Ok(WitnessValue::CircleCoordinate(if sign < 0 { -c } else { c }))
            }
            CaseLabel::FullGoodOrNonsplit | CaseLabel::TruncReductionLike => {
                Ok(WitnessValue::Reduced(reduce_point(p)?))
            }
            CaseLabel::TruncNearIdentity => {
                let x = match p.x() {
                    None => return Ok(WitnessValue::Residue(0, Real::zero())),
                    Some(x) => x,
                };
                let ctx = self.trunc.as_ref().expect("truncated case");
                let (e, c) = ctx.trunc_x().leading().expect("x_S is unbounded");
                let vxs = e.clone();
                if x.val_cmp(&vxs)? == Ordering::Less {
                    return Ok(WitnessValue::Residue(0, Real::zero()));
                }
                let ratio = x.mul_monomial(&c.inv(), &(-vxs));
                let sign = p.y().expect("affine point").sign_of()?;
                Ok(WitnessValue::Residue(sign, ratio.standard_part()?))
            }
            CaseLabel::TruncSplitUnit => {
                let f = self.f_star(p)?;
                Ok(WitnessValue::MultiplicativeResidue(f.standard_part()?))
            }
        }
    }

    /// Level-n infinitesimal neighborhood of the identity within the scope.
    ///
    /// Value-group cases shrink strictly with n: v(x) < v(epsilon) / n.
    /// Residue-field cases ignore n, which is the collapse that puts them on
    /// the other side of the dichotomy.
    pub fn g00_member(&self, p: &CurvePoint, n: u32) -> Result<bool> {
        assert!(n >= 1, "levels are indexed from 1");
        let x = match p.x() {
            None => return Ok(true),
            Some(x) => x,
        };
        match self.case {
            CaseLabel::FullSplit | CaseLabel::TruncSplitDeep => {
                let veps = self
                    .curve
                    .epsilon()
                    .valuation()
                    .cloned()
                    .expect("split epsilon is infinitesimal");
                Ok(x.val_cmp(&(veps / rat_int(n as i64)))? == Ordering::Less)
            }
            CaseLabel::FullGoodOrNonsplit
            | CaseLabel::TruncReductionLike
            | CaseLabel::TruncSplitUnit => Ok(x.val_cmp(&Rat::zero())? == Ordering::Less),
            CaseLabel::TruncNearIdentity => {
                let vxs = self
                    .trunc
                    .as_ref()
                    .expect("truncated case")
                    .trunc_x()
                    .valuation()
                    .cloned()
                    .expect("x_S is unbounded");
                Ok(x.val_cmp(&vxs)? == Ordering::Less)
            }
        }
    }

    /// The intersection of all levels: v(x) <= 0 in the value-group cases,
    /// and the unchanged kernel in the residue-field cases.
    pub fn g00_collapsed(&self, p: &CurvePoint) -> Result<bool> {
        let x = match p.x() {
            None => return Ok(true),
            Some(x) => x,
        };
        match self.case {
            CaseLabel::FullSplit | CaseLabel::TruncSplitDeep => {
                Ok(x.val_cmp(&Rat::zero())? != Ordering::Greater)
            }
            _ => self.g00_member(p, 1),
        }
    }

    /// Level-n class of two-torsion, the far end of the value-group
    /// interval: v(x) >= v(epsilon) (n-1) / n. Only split scopes have it.
    pub fn t2_class_member(&self, p: &CurvePoint, n: u32) -> Result<bool> {
        assert!(n >= 1, "levels are indexed from 1");
        match self.reduction {
            ReductionType::SplitMultiplicative => {}
            _ => return Err(Error::WrongCase),
        }
        let x = match p.x() {
            None => return Ok(false),
            Some(x) => x,
        };
        let veps = self
            .curve
            .epsilon()
            .valuation()
            .cloned()
            .expect("split epsilon is infinitesimal");
        let theta = veps * rat_int(n as i64 - 1) / rat_int(n as i64);
        Ok(x.val_cmp(&theta)? != Ordering::Less)
    }
}

/// A serializable summary of one scope's classification.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub epsilon: String,
    pub reduction_type: String,
    pub scope: String,
    pub trunc_x: Option<String>,
    pub case_label: String,
    pub one_based: bool,
    pub internality: String,
    pub witness: String,
    pub torsion_valuations: Vec<String>,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    /// Renders the classification, computing the bounding torsion chain down
    /// to the given halving depth (entries T_4 .. T_{2^depth}).
    pub fn build(setting: &QuotientSetting<'_>, torsion_depth: u32) -> Result<Self> {
        let c = setting.classification();
        let torsion_valuations = if torsion_depth >= 2 {
            setting
                .curve()
                .bounding_torsion_chain(torsion_depth)?
                .iter()
                .map(|p| {
                    p.x()
                        .and_then(|x| x.valuation())
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "0".to_string())
                })
                .collect()
        } else {
            Vec::new()
        };
        let notes = match c.case {
            CaseLabel::FullSplit => vec![
                "two-torsion represents the order-two boundary class of the multiplicative truncation".to_string(),
            ],
            CaseLabel::TruncSplitDeep => vec![
                "coordinate normalized by the valuation of the truncation abscissa".to_string(),
            ],
            CaseLabel::TruncSplitUnit => vec![
                "levels collapse: the bound has valuation zero".to_string(),
            ],
            _ => Vec::new(),
        };
        Ok(ClassificationReport {
            epsilon: setting.curve().epsilon().to_string(),
            reduction_type: c.reduction.label().to_string(),
            scope: if setting.truncation().is_some() {
                "truncated".to_string()
            } else {
                "full".to_string()
            },
            trunc_x: setting.truncation().map(|ctx| ctx.trunc_x().to_string()),
            case_label: c.case.label().to_string(),
            one_based: c.one_based,
            internality: c.internality.label().to_string(),
            witness: c.witness.label().to_string(),
            torsion_valuations,
            notes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::YBranch;
    use crate::puiseux::PrecisionConfig;
    use crate::rational::rat;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn split_curve() -> MinimalCurve {
        MinimalCurve::new(PuiseuxNumber::t(), cfg()).unwrap()
    }

    fn good_curve() -> MinimalCurve {
        MinimalCurve::new(PuiseuxNumber::from_rat(rat(1, 2)), cfg()).unwrap()
    }

    fn pt(curve: &MinimalCurve, x: PuiseuxNumber, branch: YBranch) -> CurvePoint {
        curve.point_from_x(x, branch).unwrap()
    }

    fn tpow(num: i64, den: i64) -> PuiseuxNumber {
        PuiseuxNumber::monomial(Real::one(), rat(num, den))
    }

    #[test]
    fn full_scope_routing() {
        let c = split_curve();
        let s = QuotientSetting::full(&c).unwrap();
        let cl = s.classification();
        assert_eq!(cl.case, CaseLabel::FullSplit);
        assert!(cl.one_based);
        assert_eq!(cl.internality, Internality::ValueGroup);
        assert_eq!(cl.witness, WitnessMap::FStar);

        let g = good_curve();
        let s = QuotientSetting::full(&g).unwrap();
        let cl = s.classification();
        assert_eq!(cl.case, CaseLabel::FullGoodOrNonsplit);
        assert_eq!(cl.reduction, ReductionType::Good);
        assert!(!cl.one_based);
        assert_eq!(cl.internality, Internality::ResidueField);
        assert_eq!(cl.witness, WitnessMap::ReductionRepresentative);

        let ns = MinimalCurve::new(
            PuiseuxNumber::one().sub(&PuiseuxNumber::t()),
            cfg(),
        )
        .unwrap();
        let s = QuotientSetting::full(&ns).unwrap();
        assert_eq!(s.reduction(), ReductionType::NonsplitMultiplicative);
        assert_eq!(s.case(), CaseLabel::FullGoodOrNonsplit);
    }

    #[test]
    fn truncated_scope_routing() {
        let c = split_curve();
        let far = pt(&c, tpow(-1, 1), YBranch::Plus);
        let s = QuotientSetting::truncated(&c, far).unwrap();
        assert_eq!(s.case(), CaseLabel::TruncNearIdentity);
        assert!(!s.classification().one_based);

        let deep = pt(&c, tpow(1, 4), YBranch::Plus);
        let s = QuotientSetting::truncated(&c, deep).unwrap();
        assert_eq!(s.case(), CaseLabel::TruncSplitDeep);
        assert!(s.classification().one_based);
        assert_eq!(s.classification().witness, WitnessMap::FStar);

        let unit = pt(&c, PuiseuxNumber::from_rat(rat(9, 16)), YBranch::Plus);
        let s = QuotientSetting::truncated(&c, unit).unwrap();
        assert_eq!(s.case(), CaseLabel::TruncSplitUnit);
        assert!(!s.classification().one_based);
        assert_eq!(s.classification().witness, WitnessMap::FStarToMultTruncation);

        let g = good_curve();
        let bounded = pt(&g, PuiseuxNumber::one(), YBranch::Plus);
        let s = QuotientSetting::truncated(&g, bounded).unwrap();
        assert_eq!(s.case(), CaseLabel::TruncReductionLike);
        assert_eq!(s.classification().witness, WitnessMap::ReductionRepresentative);
    }

    #[test]
    fn truncation_point_validation() {
        let g = good_curve();
        assert!(matches!(
            QuotientSetting::truncated(&g, CurvePoint::Infinity),
            Err(Error::InvalidTruncationPoint(_))
        ));
        assert!(matches!(
            QuotientSetting::truncated(&g, g.t2()),
            Err(Error::InvalidTruncationPoint(_))
        ));
        let below = pt(&g, PuiseuxNumber::one(), YBranch::Minus);
        assert!(matches!(
            QuotientSetting::truncated(&g, below),
            Err(Error::InvalidTruncationPoint(_))
        ));
        let oval = pt(&g, PuiseuxNumber::from_rat(rat(-3, 4)), YBranch::Plus);
        assert!(matches!(
            QuotientSetting::truncated(&g, oval),
            Err(Error::InvalidTruncationPoint(_))
        ));
    }

    #[test]
    fn arc_membership() {
        let g = good_curve();
        let s = pt(&g, PuiseuxNumber::one(), YBranch::Plus);
        let ctx = TruncationContext::new(&g, s.clone()).unwrap();
        assert!(ctx.member(&CurvePoint::Infinity).unwrap());
        let two = pt(&g, PuiseuxNumber::from_int(2), YBranch::Plus);
        assert!(ctx.member(&two).unwrap());
        assert!(ctx.member(&two.neg()).unwrap());
        assert!(!ctx.member(&s).unwrap());
        assert!(ctx.member(&s.neg()).unwrap());
        assert!(!ctx.member(&g.t2()).unwrap());
        let half = pt(&g, PuiseuxNumber::from_rat(rat(1, 2)), YBranch::Plus);
        assert!(!ctx.member(&half).unwrap());
    }

    #[test]
    fn truncated_add_group_identities() {
        let g = good_curve();
        let s = pt(&g, PuiseuxNumber::one(), YBranch::Plus);
        let setting = QuotientSetting::truncated(&g, s).unwrap();
        let p = pt(&g, PuiseuxNumber::from_int(2), YBranch::Plus);

        let o = setting.add(&p, &p.neg()).unwrap();
        assert!(o.is_infinity());
        let same = setting.add(&CurvePoint::Infinity, &p).unwrap();
        assert!(points_agree(&same, &p));

        // Doubling near the boundary wraps; the wrapped sum still satisfies
        // the group identity (P + P) - P = P.
        let r = setting.add(&p, &p).unwrap();
        assert!(setting.member(&r).unwrap());
        let back = setting.add(&r, &p.neg()).unwrap();
        assert!(points_agree(&back, &p));

        // Negation is an automorphism of the wrapped law.
        let rn = setting.add(&p.neg(), &p.neg()).unwrap();
        assert!(points_agree(&rn, &r.neg()));
    }

    #[test]
    fn truncated_add_wraps_through_two_torsion() {
        // epsilon = 1/4: T4 = (1/2, 3/4) doubles to exactly two-torsion,
        // which lies outside every arc and must wrap by [2]S.
        let c = MinimalCurve::new(PuiseuxNumber::from_rat(rat(1, 4)), cfg()).unwrap();
        let s = pt(&c, PuiseuxNumber::from_rat(rat(1, 8)), YBranch::Plus);
        let setting = QuotientSetting::truncated(&c, s.clone()).unwrap();
        let t4 = CurvePoint::affine(
            PuiseuxNumber::from_rat(rat(1, 2)),
            PuiseuxNumber::from_rat(rat(3, 4)),
        );
        assert!(setting.member(&t4).unwrap());

        let r = setting.add(&t4, &t4).unwrap();
        let two_s = c.double_point(&s).unwrap();
        let expected = c.sub_points(&c.t2(), &two_s).unwrap();
        assert!(points_agree(&r, &expected));
        assert!(setting.member(&r).unwrap());
    }

    #[test]
    fn f_star_piecewise_values() {
        let c = split_curve();
        let setting = QuotientSetting::full(&c).unwrap();

        let one = PuiseuxNumber::one();
        assert_eq!(
            setting
                .f_star(&CurvePoint::Infinity)
                .unwrap()
                .compare(&one)
                .unwrap(),
            Ordering::Equal
        );

        let big = pt(&c, tpow(-1, 1), YBranch::Plus);
        assert_eq!(setting.f_star(&big).unwrap().compare(&one).unwrap(), Ordering::Equal);

        let upper = pt(&c, tpow(1, 2), YBranch::Plus);
        let expect = tpow(-1, 2);
        assert_eq!(
            setting.f_star(&upper).unwrap().compare(&expect).unwrap(),
            Ordering::Equal
        );

        let lower = pt(&c, tpow(1, 2), YBranch::Minus);
        assert_eq!(
            setting.f_star(&lower).unwrap().compare(&tpow(1, 2)).unwrap(),
            Ordering::Equal
        );

        assert_eq!(
            setting.f_star(&c.t2()).unwrap().compare(c.epsilon()).unwrap(),
            Ordering::Equal
        );

        // Below the floor the value pins to the floor.
        let tiny = pt(&c, tpow(2, 1), YBranch::Plus);
        assert_eq!(
            setting.f_star(&tiny).unwrap().compare(c.epsilon()).unwrap(),
            Ordering::Equal
        );
    }

    fn circle(setting: &QuotientSetting<'_>, p: &CurvePoint) -> Rat {
        match setting.quotient_coordinate(p).unwrap() {
            WitnessValue::CircleCoordinate(c) => c,
            other => panic!("expected a circle coordinate, got {}", other),
        }
    }

    #[test]
    fn circle_coordinate_is_odd_and_additive() {
        let c = split_curve();
        let setting = QuotientSetting::full(&c).unwrap();

        let p = pt(&c, tpow(1, 2), YBranch::Plus);
        assert_eq!(circle(&setting, &p), rat(1, 2));
        assert_eq!(circle(&setting, &p.neg()), rat(-1, 2));
        assert_eq!(circle(&setting, &c.t2()), rat(1, 1));
        assert_eq!(circle(&setting, &CurvePoint::Infinity), rat(0, 1));

        // Interior sum without wrap: 1/2 + 1/4 = 3/4.
        let q = pt(&c, tpow(1, 4), YBranch::Plus);
        let r = setting.add(&p, &q).unwrap();
        assert_eq!(circle(&setting, &r), rat(3, 4));

        // Sum past two-torsion wraps mod 2: 3/4 + 3/4 = 3/2 = -1/2.
        let d = pt(&c, tpow(3, 4), YBranch::Plus);
        let dd = setting.add(&d, &d).unwrap();
        assert_eq!(circle(&setting, &dd), rat(-1, 2));
    }

    #[test]
    fn deep_truncation_coordinate() {
        let c = split_curve();
        let s = pt(&c, tpow(1, 4), YBranch::Plus);
        let setting = QuotientSetting::truncated(&c, s.clone()).unwrap();

        assert_eq!(circle(&setting, &CurvePoint::Infinity), rat(0, 1));
        // The arc boundary -S is the order-two class.
        assert_eq!(circle(&setting, &s.neg()), rat(-1, 1));
        let p = pt(&c, tpow(1, 8), YBranch::Plus);
        assert_eq!(circle(&setting, &p), rat(1, 2));
        // S itself is outside the arc.
        assert!(matches!(
            setting.quotient_coordinate(&s),
            Err(Error::InvalidTruncationPoint(_))
        ));
    }

    #[test]
    fn near_identity_residue_witness() {
        let g = good_curve();
        let s = pt(&g, tpow(-1, 1), YBranch::Plus);
        let setting = QuotientSetting::truncated(&g, s.clone()).unwrap();

        let p = pt(&g, PuiseuxNumber::monomial(Real::from_int(2), rat(-1, 1)), YBranch::Plus);
        match setting.quotient_coordinate(&p).unwrap() {
            WitnessValue::Residue(sign, r) => {
                assert_eq!(sign, 1);
                assert_eq!(r, Real::from_int(2));
            }
            other => panic!("unexpected witness {}", other),
        }

        match setting.quotient_coordinate(&s.neg()).unwrap() {
            WitnessValue::Residue(sign, r) => {
                assert_eq!(sign, -1);
                assert_eq!(r, Real::one());
            }
            other => panic!("unexpected witness {}", other),
        }

        // Deeper points and the identity share the identity class (0, 0).
        let deep = pt(&g, tpow(-2, 1), YBranch::Plus);
        match setting.quotient_coordinate(&deep).unwrap() {
            WitnessValue::Residue(sign, r) => {
                assert_eq!(sign, 0);
                assert!(r.is_zero());
            }
            other => panic!("unexpected witness {}", other),
        }
        match setting.quotient_coordinate(&CurvePoint::Infinity).unwrap() {
            WitnessValue::Residue(0, r) => assert!(r.is_zero()),
            other => panic!("unexpected witness {}", other),
        }
    }

    #[test]
    fn unit_truncation_residue_witness() {
        let c = split_curve();
        let s = pt(&c, PuiseuxNumber::from_rat(rat(9, 16)), YBranch::Plus);
        let setting = QuotientSetting::truncated(&c, s.clone()).unwrap();

        match setting.quotient_coordinate(&s.neg()).unwrap() {
            WitnessValue::MultiplicativeResidue(r) => {
                assert_eq!(r, Real::from_rat(rat(9, 16)))
            }
            other => panic!("unexpected witness {}", other),
        }
        match setting.quotient_coordinate(&CurvePoint::Infinity).unwrap() {
            WitnessValue::MultiplicativeResidue(r) => assert_eq!(r, Real::one()),
            other => panic!("unexpected witness {}", other),
        }
        let lower = pt(&c, PuiseuxNumber::from_rat(rat(3, 4)), YBranch::Minus);
        match setting.quotient_coordinate(&lower).unwrap() {
            WitnessValue::MultiplicativeResidue(r) => {
                assert_eq!(r, Real::from_rat(rat(3, 4)))
            }
            other => panic!("unexpected witness {}", other),
        }
    }

    #[test]
    fn reduction_witness_for_good_curves() {
        let g = good_curve();
        let setting = QuotientSetting::full(&g).unwrap();
        let p = pt(&g, PuiseuxNumber::from_int(2), YBranch::Plus);
        match setting.quotient_coordinate(&p).unwrap() {
            WitnessValue::Reduced(rp) => {
                assert!(!rp.is_infinity());
                assert!(setting.reduced_curve().contains(&rp));
            }
            other => panic!("unexpected witness {}", other),
        }
    }

    #[test]
    fn g00_levels_and_collapse() {
        let c = split_curve();
        let setting = QuotientSetting::full(&c).unwrap();
        let quarter = pt(&c, tpow(1, 4), YBranch::Plus);
        let half = pt(&c, tpow(1, 2), YBranch::Plus);
        let unit = pt(&c, PuiseuxNumber::from_int(3), YBranch::Plus);

        assert!(setting.g00_member(&quarter, 2).unwrap());
        assert!(!setting.g00_member(&half, 2).unwrap());
        assert!(setting.g00_member(&half, 1).unwrap());
        assert!(setting.g00_member(&CurvePoint::Infinity, 7).unwrap());

        assert!(setting.g00_collapsed(&unit).unwrap());
        assert!(!setting.g00_collapsed(&quarter).unwrap());

        // Residue side: levels do not move.
        let g = good_curve();
        let gs = QuotientSetting::full(&g).unwrap();
        let far = pt(&g, tpow(-1, 1), YBranch::Plus);
        let near = pt(&g, PuiseuxNumber::from_int(2), YBranch::Plus);
        for n in [1, 2, 5, 32] {
            assert!(gs.g00_member(&far, n).unwrap());
            assert!(!gs.g00_member(&near, n).unwrap());
        }
    }

    #[test]
    fn two_torsion_class_levels() {
        let c = split_curve();
        let setting = QuotientSetting::full(&c).unwrap();
        assert!(setting.t2_class_member(&c.t2(), 5).unwrap());
        let high = pt(&c, tpow(9, 10), YBranch::Plus);
        assert!(setting.t2_class_member(&high, 5).unwrap());
        let mid = pt(&c, tpow(1, 2), YBranch::Plus);
        assert!(!setting.t2_class_member(&mid, 5).unwrap());
        assert!(!setting.t2_class_member(&CurvePoint::Infinity, 5).unwrap());

        let g = good_curve();
        let gs = QuotientSetting::full(&g).unwrap();
        assert!(matches!(
            gs.t2_class_member(&g.t2(), 2),
            Err(Error::WrongCase)
        ));
    }

    #[test]
    fn mult_truncation_group_ops() {
        let cfg = cfg();
        let m = MultTruncation::from_inverse(PuiseuxNumber::t(), &cfg).unwrap();

        assert!(m.member(&PuiseuxNumber::one()).unwrap());
        assert!(m.member(&PuiseuxNumber::t()).unwrap());
        assert!(!m.member(m.bound()).unwrap());

        // t^(1/2) * t^(3/4) overflows the floor and folds by b^2.
        let a = tpow(1, 2);
        let b = tpow(3, 4);
        let prod = m.mul(&a, &b).unwrap();
        assert_eq!(prod.compare(&tpow(-3, 4)).unwrap(), Ordering::Equal);

        // The boundary class squares to the identity.
        let sq = m.mul(&PuiseuxNumber::t(), &PuiseuxNumber::t()).unwrap();
        assert_eq!(sq.compare(&PuiseuxNumber::one()).unwrap(), Ordering::Equal);

        // ... and is its own inverse.
        let inv = m.inv(&PuiseuxNumber::t(), &cfg).unwrap();
        assert_eq!(inv.compare(&PuiseuxNumber::t()).unwrap(), Ordering::Equal);

        assert!(m.h00_member(&PuiseuxNumber::one(), 3).unwrap());
        assert!(!m.h00_member(&tpow(1, 2), 3).unwrap());
        assert!(m.h00_member(&tpow(1, 4), 3).unwrap());

        assert!(matches!(
            MultTruncation::from_inverse(PuiseuxNumber::from_int(2), &cfg),
            Err(Error::InvalidTruncationBound)
        ));
    }

    #[test]
    fn report_shape() {
        let c = split_curve();
        let setting = QuotientSetting::full(&c).unwrap();
        let report = ClassificationReport::build(&setting, 3).unwrap();
        assert_eq!(report.case_label, "full-split");
        assert_eq!(report.reduction_type, "split");
        assert_eq!(report.scope, "full");
        assert!(report.one_based);
        assert_eq!(report.internality, "value-group");
        assert_eq!(report.torsion_valuations, vec!["1/2", "1/4"]);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"case_label\":\"full-split\""));

        let s = pt(&c, tpow(-1, 1), YBranch::Plus);
        let ts = QuotientSetting::truncated(&c, s).unwrap();
        let report = ClassificationReport::build(&ts, 0).unwrap();
        assert_eq!(report.scope, "truncated");
        assert_eq!(report.case_label, "trunc-near-identity");
        assert!(report.trunc_x.is_some());
        assert!(report.torsion_valuations.is_empty());
    }
}
