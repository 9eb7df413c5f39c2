//! The minimal family `y^2 = x(x+1)(x+eps)` with `0 < eps < 1`, over the
//! ordered field of truncated Puiseux series.
//!
//! The real locus has two connected components: the unbounded identity
//! component (all points with `x >= 0`, including the two-torsion point
//! `(0,0)`) and an oval between `x = -1` and `x = -eps`. Chord-tangent
//! arithmetic, point halving, and the orientation key along the identity
//! component are everything the quotient constructions need.

use crate::error::{Error, Result};
use crate::puiseux::{PrecisionConfig, PuiseuxNumber};
use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: PuiseuxNumber, y: PuiseuxNumber },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YBranch {
    Plus,
    Minus,
}

impl CurvePoint {
    pub fn affine(x: PuiseuxNumber, y: PuiseuxNumber) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&PuiseuxNumber> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&PuiseuxNumber> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: y.neg(),
            },
        }
    }
}

impl std::fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({}, {})", x, y),
        }
    }
}

fn coords_agree(a: &PuiseuxNumber, b: &PuiseuxNumber) -> bool {
    let d = a.sub(b);
    d.vanishes()
}

/// No visible difference between the points: coordinates agree below the
/// common horizon. Exact equality when both sides are exact.
pub fn points_agree(p: &CurvePoint, q: &CurvePoint) -> bool {
    match (p, q) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => true,
        (CurvePoint::Affine { x: xa, y: ya }, CurvePoint::Affine { x: xb, y: yb }) => {
            coords_agree(xa, xb) && coords_agree(ya, yb)
        }
        _ => false,
    }
}

#[derive(Clone, Debug)]
pub struct MinimalCurve {
    epsilon: PuiseuxNumber,
    one_plus_eps: PuiseuxNumber,
    cfg: PrecisionConfig,
}

impl MinimalCurve {
    pub fn new(epsilon: PuiseuxNumber, cfg: PrecisionConfig) -> Result<Self> {
        if epsilon.sign_of()? != 1 {
            return Err(Error::InvalidEpsilon);
        }
        if PuiseuxNumber::one().sub(&epsilon).sign_of()? != 1 {
            return Err(Error::InvalidEpsilon);
        }
        let one_plus_eps = PuiseuxNumber::one().add(&epsilon);
        Ok(MinimalCurve {
            epsilon,
            one_plus_eps,
            cfg,
        })
    }

    pub fn epsilon(&self) -> &PuiseuxNumber {
        &self.epsilon
    }

    pub fn config(&self) -> &PrecisionConfig {
        &self.cfg
    }

    /// Right-hand side `x(x+1)(x+eps)`.
    pub fn rhs(&self, x: &PuiseuxNumber) -> PuiseuxNumber {
        let one = PuiseuxNumber::one();
        x.mul(&x.add(&one)).mul(&x.add(&self.epsilon))
    }

    /// Derivative of the right-hand side: `3x^2 + 2(1+eps)x + eps`.
    fn rhs_prime(&self, x: &PuiseuxNumber) -> PuiseuxNumber {
        let three_x2 = x.mul(x).scale(&Real::from_int(3));
        let lin = x.mul(&self.one_plus_eps).scale(&Real::from_int(2));
        three_x2.add(&lin).add(&self.epsilon)
    }

    /// The two-torsion point `(0, 0)` on the identity component.
    pub fn t2(&self) -> CurvePoint {
        CurvePoint::affine(PuiseuxNumber::zero(), PuiseuxNumber::zero())
    }

    /// All affine two-torsion: `(0,0)`, `(-eps,0)`, `(-1,0)`.
    pub fn two_torsion(&self) -> [CurvePoint; 3] {
        [
            self.t2(),
            CurvePoint::affine(self.epsilon.neg(), PuiseuxNumber::zero()),
            CurvePoint::affine(PuiseuxNumber::from_int(-1), PuiseuxNumber::zero()),
        ]
    }

    /// Lifts an x-coordinate onto the curve, picking the y branch.
    pub fn point_from_x(&self, x: PuiseuxNumber, branch: YBranch) -> Result<CurvePoint> {
        let y = self.rhs(&x).sqrt(&self.cfg)?;
        let y = match branch {
            YBranch::Plus => y,
            YBranch::Minus => y.neg(),
        };
        Ok(CurvePoint::affine(x, y))
    }

    /// `y^2 - f(x)` shows no visible discrepancy.
    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => coords_agree(&y.mul(y), &self.rhs(x)),
        }
    }

    /// Identity component membership: `x >= 0` (the oval sits in `x < 0`).
    pub fn is_on_identity_component(&self, p: &CurvePoint) -> Result<bool> {
        match p {
            CurvePoint::Infinity => Ok(true),
            CurvePoint::Affine { x, .. } => Ok(x.sign_of()? >= 0),
        }
    }

    pub fn add_points(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        let (xp, yp) = match p {
            CurvePoint::Infinity => return Ok(q.clone()),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let (xq, yq) = match q {
            CurvePoint::Infinity => return Ok(p.clone()),
            CurvePoint::Affine { x, y } => (x, y),
        };
        // Abscissas that agree to the horizon follow the equal-x rule: a
        // vertical chord when the ordinates cancel, a tangent otherwise.
        let dx = xq.sub(xp);
        if dx.vanishes() {
            return if yp.add(yq).vanishes() {
                Ok(CurvePoint::Infinity)
            } else {
                self.double_point(p)
            };
        }
        let m = yq.sub(yp).mul(&dx.invert(&self.cfg)?);
        self.chord_result(&m, xp, yp, xq)
    }

    pub fn double_point(&self, p: &CurvePoint) -> Result<CurvePoint> {
        let (xp, yp) = match p {
            CurvePoint::Infinity => return Ok(CurvePoint::Infinity),
            CurvePoint::Affine { x, y } => (x, y),
        };
        if yp.vanishes() {
            return Ok(CurvePoint::Infinity);
        }
        let two_y = yp.add(yp);
        let m = self.rhs_prime(xp).mul(&two_y.invert(&self.cfg)?);
        self.chord_result(&m, xp, yp, xp)
    }

    fn chord_result(
        &self,
        m: &PuiseuxNumber,
        xp: &PuiseuxNumber,
        yp: &PuiseuxNumber,
        xq: &PuiseuxNumber,
    ) -> Result<CurvePoint> {
        let xr = m
            .mul(m)
            .sub(&self.one_plus_eps)
            .sub(xp)
            .sub(xq);
        let yr = m.mul(&xp.sub(&xr)).sub(yp);
        Ok(CurvePoint::affine(xr, yr))
    }

    pub fn sub_points(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.add_points(p, &q.neg())
    }

    pub fn mul_small(&self, p: &CurvePoint, n: u32) -> Result<CurvePoint> {
        let mut acc = CurvePoint::Infinity;
        for _ in 0..n {
            acc = self.add_points(&acc, p)?;
        }
        Ok(acc)
    }

    /// All points `Q` with `2Q = P`, found through the square roots of
    /// `x_P`, `x_P + 1`, `x_P + eps`.
    ///
    /// The third root is recovered as `|y_P| / (s0 s1)` instead of a fresh
    /// radical: the product of the three shifted coordinates is `y_P^2`, so
    /// this keeps the scalar tower two levels shorter per halving and never
    /// adjoins a radical dependent on the other two. Points on the oval have
    /// no halves (doubling lands on the identity component).
    pub fn halve_point(&self, p: &CurvePoint) -> Result<Vec<CurvePoint>> {
        let (xp, yp) = match p {
            CurvePoint::Infinity => {
                let mut out = vec![CurvePoint::Infinity];
                out.extend(self.two_torsion());
                return Ok(out);
            }
            CurvePoint::Affine { x, y } => (x, y),
        };
        if xp.sign_of()? < 0 {
            return Ok(Vec::new());
        }
        let one = PuiseuxNumber::one();
        let s0 = xp.sqrt(&self.cfg)?;
        let s1 = xp.add(&one).sqrt(&self.cfg)?;
        let s2 = match yp.sign_of()? {
            0 => xp.add(&self.epsilon).sqrt(&self.cfg)?,
            s => {
                let y_abs = if s < 0 { yp.neg() } else { yp.clone() };
                y_abs.mul(&s0.mul(&s1).invert(&self.cfg)?)
            }
        };
        let p01 = s0.mul(&s1);
        let p02 = s0.mul(&s2);
        let p12 = s1.mul(&s2);
        let mut out: Vec<CurvePoint> = Vec::new();
        // Sign classes up to a global flip; the flip is recovered by the
        // doubling check below.
        for (g0, g1, g2) in [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)] {
            let signed = |s: &PuiseuxNumber, g: i32| if g < 0 { s.neg() } else { s.clone() };
            let xc = xp
                .add(&signed(&p01, g0 * g1))
                .add(&signed(&p02, g0 * g2))
                .add(&signed(&p12, g1 * g2));
            let lambda = signed(&s0, g0).add(&signed(&s1, g1)).add(&signed(&s2, g2));
            if !matches!(lambda.sign_of(), Ok(1) | Ok(-1)) {
                continue;
            }
            let two_lambda = lambda.add(&lambda);
            let yc = match two_lambda.invert(&self.cfg) {
                Ok(inv) => self.rhs_prime(&xc).mul(&inv),
                Err(_) => continue,
            };
            let cand = CurvePoint::affine(xc, yc);
            if !self.contains(&cand) {
                continue;
            }
            let doubled = match self.double_point(&cand) {
                Ok(d) => d,
                Err(_) => continue,
            };
            let verified = if points_agree(&doubled, p) {
                cand
            } else if points_agree(&doubled, &p.neg()) {
                cand.neg()
            } else {
                continue;
            };
            if !out.iter().any(|q| points_agree(q, &verified)) {
                out.push(verified);
            }
        }
        Ok(out)
    }

    /// Position of a point along the identity component: zero at infinity,
    /// `(1+x)^(-1)` on the upper half, its negative on the lower half.
    /// Strictly increasing along the component's circle orientation.
    pub fn orientation_key(&self, p: &CurvePoint) -> Result<PuiseuxNumber> {
        match p {
            CurvePoint::Infinity => Ok(PuiseuxNumber::zero()),
            CurvePoint::Affine { x, y } => {
                if x.sign_of()? < 0 {
                    return Err(Error::NotOnComponent);
                }
                let key = PuiseuxNumber::one()
                    .add(x)
                    .invert(&self.cfg)?;
                match y.sign_of()? {
                    1 => Ok(key),
                    -1 => Ok(key.neg()),
                    _ => Err(Error::NotOnComponent),
                }
            }
        }
    }

    /// `[T_4, T_8, ..., T_{2^depth}]`: at each level the unique half of the
    /// previous point that sits on the upper half of the identity component,
    /// starting from the two-torsion point `(0,0)`. The minimal orientation
    /// key breaks ties, though geometrically the half is already unique.
    pub fn bounding_torsion_chain(&self, depth: u32) -> Result<Vec<CurvePoint>> {
        let mut chain = Vec::new();
        if depth < 2 {
            return Ok(chain);
        }
        let mut current = self.t2();
        for _ in 2..=depth {
            let halves = self.halve_point(&current)?;
            let mut best: Option<(CurvePoint, PuiseuxNumber)> = None;
            for q in halves {
                let on_e0 = matches!(self.is_on_identity_component(&q), Ok(true));
                let upper = matches!(q.y().map(|y| y.sign_of()), Some(Ok(1)));
                if !(on_e0 && upper) {
                    continue;
                }
                let key = self.orientation_key(&q)?;
                best = match best {
                    None => Some((q, key)),
                    Some((bq, bk)) => {
                        if key.compare(&bk)? == std::cmp::Ordering::Less {
                            Some((q, key))
                        } else {
                            Some((bq, bk))
                        }
                    }
                };
            }
            let (next, _) = best.ok_or(Error::HalvingFailed)?;
            chain.push(next.clone());
            current = next;
        }
        Ok(chain)
    }
}

/// Change of variables carrying `y^2 = (x-e1)(x-e2)(x-e3)` with distinct
/// ordered roots to the minimal form: the largest root goes to 0, the
/// smallest to -1.
#[derive(Clone, Debug)]
pub struct LegendreMap {
    shift: PuiseuxNumber,
    scale_inv: PuiseuxNumber,
    y_scale_inv: PuiseuxNumber,
}

impl LegendreMap {
    pub fn map_point(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(
                x.sub(&self.shift).mul(&self.scale_inv),
                y.mul(&self.y_scale_inv),
            ),
        }
    }
}

/// Normalizes a cubic with three distinct roots to the minimal family.
/// Returns the curve together with the point map.
pub fn legendre_to_minimal(
    roots: [PuiseuxNumber; 3],
    cfg: PrecisionConfig,
) -> Result<(MinimalCurve, LegendreMap)> {
    let [a, b, c] = roots;
    let mut sorted = vec![a, b, c];
    // Three elements: a couple of compare-and-swap passes, each exact.
    for i in 0..2 {
        for j in 0..2 - i {
            if sorted[j].compare(&sorted[j + 1])? == std::cmp::Ordering::Greater {
                sorted.swap(j, j + 1);
            }
        }
    }
    let (e1, e2, e3) = (&sorted[0], &sorted[1], &sorted[2]);
    if e1.sub(e2).sign_of()? == 0 || e2.sub(e3).sign_of()? == 0 {
        return Err(Error::DegenerateRoots);
    }
    let scale = e3.sub(e1);
    let scale_inv = scale.invert(&cfg)?;
    let epsilon = e3.sub(e2).mul(&scale_inv);
    let curve = MinimalCurve::new(epsilon, cfg)?;
    let sqrt_scale = scale.sqrt(&cfg)?;
    let y_scale_inv = scale.mul(&sqrt_scale).invert(&cfg)?;
    let map = LegendreMap {
        shift: e3.clone(),
        scale_inv,
        y_scale_inv,
    };
    Ok((curve, map))
}
