//! Randomized verification suites.
//!
//! Each suite runs independent seeded trials; a trial is a pure function of
//! (seed, trial index), so results are identical in sequential and parallel
//! execution. Failures carry the trial index and a description exact enough
//! to replay.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{points_agree, CurvePoint, MinimalCurve, YBranch};
use crate::error::{Error, Result};
use crate::exec::{map_trials, ExecMode};
use crate::puiseux::{PrecisionConfig, PuiseuxNumber};
use crate::quotient::{
    CaseLabel, ClassificationReport, Internality, QuotientSetting, WitnessMap, WitnessValue,
};
use crate::rational::{rat, rat_int, Rat};
use crate::reduction::{
    reduce_point, reduced_points_agree, reduces_to_identity, reduces_to_smooth_point,
    ReductionType,
};
use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteId {
    ValuationAxioms,
    GroupLaw,
    ReductionHom,
    TorsionChain,
    FStar,
    RemMinus,
    ClassificationTable,
}

impl SuiteId {
    pub fn all() -> [SuiteId; 7] {
        [
            SuiteId::ValuationAxioms,
            SuiteId::GroupLaw,
            SuiteId::ReductionHom,
            SuiteId::TorsionChain,
            SuiteId::FStar,
            SuiteId::RemMinus,
            SuiteId::ClassificationTable,
        ]
    }

    pub fn label(&self) -> &'static str {
        match self {
            SuiteId::ValuationAxioms => "valuation-axioms",
            SuiteId::GroupLaw => "group-law",
            SuiteId::ReductionHom => "reduction-hom",
            SuiteId::TorsionChain => "torsion-chain",
            SuiteId::FStar => "fstar",
            SuiteId::RemMinus => "remminus",
            SuiteId::ClassificationTable => "classification-table",
        }
    }
}

impl std::str::FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::all()
            .into_iter()
            .find(|id| id.label() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl std::fmt::Display for SuiteId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub trials: u32,
    pub seed: u64,
    pub mode: ExecMode,
    pub precision: PrecisionConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 16,
            seed: 0x5eed,
            mode: ExecMode::Parallel,
            precision: PrecisionConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub suite: SuiteId,
    pub trials: u32,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_suite(id: SuiteId, config: &SuiteConfig) -> SuiteOutcome {
    let trial = |i: u32| -> Vec<String> {
        let mut rng = sample::trial_rng(config.seed, i);
        let mut fails = Vec::new();
        let body = match id {
            SuiteId::ValuationAxioms => valuation_axioms_trial,
            SuiteId::GroupLaw => group_law_trial,
            SuiteId::ReductionHom => reduction_hom_trial,
            SuiteId::TorsionChain => torsion_chain_trial,
            SuiteId::FStar => fstar_trial,
            SuiteId::RemMinus => remminus_trial,
            SuiteId::ClassificationTable => classification_table_trial,
        };
        if let Err(e) = body(&mut rng, i, &config.precision, &mut fails) {
            fails.push(format!("unexpected error: {}", e));
        }
        fails.into_iter().map(|m| format!("trial {}: {}", i, m)).collect()
    };
    let failures = map_trials(config.mode, config.trials, trial)
        .into_iter()
        .flatten()
        .collect();
    SuiteOutcome {
        suite: id,
        trials: config.trials,
        failures,
    }
}

pub fn run_all(config: &SuiteConfig) -> Vec<SuiteOutcome> {
    SuiteId::all()
        .into_iter()
        .map(|id| run_suite(id, config))
        .collect()
}

type Trial = fn(&mut ChaCha8Rng, u32, &PrecisionConfig, &mut Vec<String>) -> Result<()>;

// Keeps the trial bodies honest about which functions they may use.
const _: [Trial; 7] = [
    valuation_axioms_trial,
    group_law_trial,
    reduction_hom_trial,
    torsion_chain_trial,
    fstar_trial,
    remminus_trial,
    classification_table_trial,
];

fn check(fails: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        fails.push(msg());
    }
}

fn agrees_zero(d: &PuiseuxNumber) -> bool {
    d.vanishes()
}

fn valuation_axioms_trial(
    rng: &mut ChaCha8Rng,
    _trial: u32,
    cfg: &PrecisionConfig,
    fails: &mut Vec<String>,
) -> Result<()> {
    let start_a = rat(rng.gen_range(-4..=4), 2);
    let start_b = rat(rng.gen_range(-4..=4), 2);
    let a = sample::exact_series(rng, 3, start_a, 2, cfg);
    let b = sample::exact_series(rng, 3, start_b, 2, cfg);
    let va = a.valuation().cloned().expect("a is nonzero");
    let vb = b.valuation().cloned().expect("b is nonzero");

    let prod = a.mul(&b);
    check(fails, prod.valuation() == Some(&(va.clone() + vb.clone())), || {
        format!("v(ab) != v(a) + v(b) for a = {}, b = {}", a, b)
    });

    let sum = a.add(&b);
    let vmin = va.clone().min(vb.clone());
    if let Some(vs) = sum.valuation() {
        check(fails, vs >= &vmin, || {
            format!("v(a+b) below min for a = {}, b = {}", a, b)
        });
        if va != vb {
            check(fails, vs == &vmin, || {
                format!("v(a+b) != min at distinct valuations, a = {}, b = {}", a, b)
            });
        }
    }

    // Ordering agrees with the sign of the difference.
    let ord = a.compare(&b)?;
    let sign = a.sub(&b).sign_of().unwrap_or(0);
    let expected = match sign {
        1 => Ordering::Greater,
        -1 => Ordering::Less,
        _ => Ordering::Equal,
    };
    check(fails, ord == expected, || {
        format!("compare disagrees with difference sign for a = {}, b = {}", a, b)
    });

    // Inversion: a * a^(-1) is indistinguishable from 1 below the horizon.
    let inv = a.invert(cfg)?;
    let residual = a.mul(&inv).sub(&PuiseuxNumber::one());
    check(fails, agrees_zero(&residual), || {
        format!("a * inv(a) - 1 = {} for a = {}", residual, a)
    });

    // Square root of a square recovers the square below the horizon.
    let sq = a.mul(&a);
    let root = sq.sqrt(cfg)?;
    let residual = root.mul(&root).sub(&sq);
    check(fails, agrees_zero(&residual), || {
        format!("sqrt(a^2)^2 - a^2 = {} for a = {}", residual, a)
    });
    check(fails, root.sign_of()? == 1, || {
        format!("sqrt returned a non-positive branch for a^2, a = {}", a)
    });

    // Standard part of a unit-leading series is its constant coefficient.
    let u = sample::exact_series(rng, 3, Rat::zero(), 2, cfg);
    let st = u.standard_part()?;
    check(fails, &st == u.leading().expect("u is nonzero").1, || {
        format!("standard part mismatch for u = {}", u)
    });
    Ok(())
}

fn split_pool_point(
    rng: &mut ChaCha8Rng,
    curve: &MinimalCurve,
    veps: &Rat,
) -> Result<CurvePoint> {
    let branch = if rng.gen_bool(0.5) {
        YBranch::Plus
    } else {
        YBranch::Minus
    };
    match rng.gen_range(0..6) {
        0 => Ok(CurvePoint::Infinity),
        1 => Ok(curve.t2()),
        2 | 3 => curve.point_from_x(sample::interior_abscissa(rng, veps), branch),
        4 => curve.point_from_x(sample::deep_abscissa(rng, curve.epsilon()), branch),
        _ => curve.point_from_x(
            PuiseuxNumber::from_rat(sample::square_unit_abscissa(rng, false)),
            branch,
        ),
    }
}

fn bounded_pool_point(rng: &mut ChaCha8Rng, curve: &MinimalCurve) -> Result<CurvePoint> {
    let branch = if rng.gen_bool(0.5) {
        YBranch::Plus
    } else {
        YBranch::Minus
    };
    match rng.gen_range(0..4) {
        0 => Ok(CurvePoint::Infinity),
        1 => curve.point_from_x(sample::far_abscissa(rng), branch),
        _ => {
            let below_one = rng.gen_bool(0.5);
            curve.point_from_x(
                PuiseuxNumber::from_rat(sample::square_unit_abscissa(rng, below_one)),
                branch,
            )
        }
    }
}

fn trial_curve(rng: &mut ChaCha8Rng, kind: u32, cfg: &PrecisionConfig) -> Result<MinimalCurve> {
    let eps = match kind % 3 {
        0 => sample::split_epsilon(rng, cfg),
        1 => sample::good_epsilon(rng, cfg),
        _ => sample::nonsplit_epsilon(rng, cfg),
    };
    MinimalCurve::new(eps, cfg.clone())
}

fn group_law_trial(
    rng: &mut ChaCha8Rng,
    trial: u32,
    cfg: &PrecisionConfig,
    fails: &mut Vec<String>,
) -> Result<()> {
    let curve = trial_curve(rng, trial, cfg)?;
    let split = trial % 3 == 0;
    let veps = curve.epsilon().valuation().cloned().unwrap_or_else(Rat::zero);
    let point = |rng: &mut ChaCha8Rng| -> Result<CurvePoint> {
        if split {
            split_pool_point(rng, &curve, &veps)
        } else {
            bounded_pool_point(rng, &curve)
        }
    };
    let p = point(rng)?;
    let q = point(rng)?;
    let r = point(rng)?;

    let pq = curve.add_points(&p, &q)?;
    let qp = curve.add_points(&q, &p)?;
    check(fails, points_agree(&pq, &qp), || {
        format!("commutativity failed at P = {}, Q = {}", p, q)
    });
    check(fails, curve.contains(&pq), || {
        format!("sum left the curve at P = {}, Q = {}", p, q)
    });

    let left = curve.add_points(&pq, &r)?;
    let right = curve.add_points(&p, &curve.add_points(&q, &r)?)?;
    check(fails, points_agree(&left, &right), || {
        format!("associativity failed at P = {}, Q = {}, R = {}", p, q, r)
    });

    let id = curve.add_points(&p, &CurvePoint::Infinity)?;
    check(fails, points_agree(&id, &p), || format!("P + O != P at P = {}", p));

    let o = curve.add_points(&p, &p.neg())?;
    check(fails, o.is_infinity(), || format!("P - P != O at P = {}", p));

    let twice = curve.add_points(&p, &p)?;
    let doubled = curve.double_point(&p)?;
    check(fails, points_agree(&twice, &doubled), || {
        format!("doubling disagrees with addition at P = {}", p)
    });

    let nsum = curve.add_points(&p.neg(), &q.neg())?;
    check(fails, points_agree(&nsum, &pq.neg()), || {
        format!("negation is not a homomorphism at P = {}, Q = {}", p, q)
    });
    Ok(())
}

fn reduction_hom_trial(
    rng: &mut ChaCha8Rng,
    trial: u32,
    cfg: &PrecisionConfig,
    fails: &mut Vec<String>,
) -> Result<()> {
    let curve = trial_curve(rng, trial, cfg)?;
    let setting = QuotientSetting::full(&curve)?;
    let rc = setting.reduced_curve();

    let p = bounded_pool_point(rng, &curve)?;
    let q = bounded_pool_point(rng, &curve)?;

    // Reduction is a homomorphism on points reducing to the smooth locus.
    let sum = curve.add_points(&p, &q)?;
    let reduced_sum = reduce_point(&sum)?;
    let expected = rc.add_points(&reduce_point(&p)?, &reduce_point(&q)?)?;
    check(fails, reduced_points_agree(&reduced_sum, &expected), || {
        format!("reduction does not commute with addition at P = {}, Q = {}", p, q)
    });

    let rneg = reduce_point(&p.neg())?;
    check(
        fails,
        reduced_points_agree(&rneg, &reduce_point(&p)?.neg()),
        || format!("reduction does not commute with negation at P = {}", p),
    );

    // Points with unbounded x reduce to the identity, bounded ones do not.
    let far = curve.point_from_x(sample::far_abscissa(rng), YBranch::Plus)?;
    check(fails, reduces_to_identity(&far)?, || {
        format!("unbounded point did not reduce to the identity: {}", far)
    });
    check(fails, reduces_to_smooth_point(rc, &far)?, || {
        format!("identity reduction not counted smooth: {}", far)
    });
    let unit = curve.point_from_x(
        PuiseuxNumber::from_rat(sample::square_unit_abscissa(rng, false)),
        YBranch::Minus,
    )?;
    check(fails, !reduces_to_identity(&unit)?, || {
        format!("bounded point reduced to the identity: {}", unit)
    });

    // The split node sits at the origin, so two-torsion hits it exactly in
    // the split case; the nonsplit node is at x = -1 and misses it.
    let t2_smooth = reduces_to_smooth_point(rc, &curve.t2())?;
    let expect_smooth = setting.reduction() != ReductionType::SplitMultiplicative;
    check(fails, t2_smooth == expect_smooth, || {
        format!(
            "two-torsion smoothness {} does not match reduction type {}",
            t2_smooth,
            setting.reduction().label()
        )
    });
    Ok(())
}

fn torsion_chain_trial(
    rng: &mut ChaCha8Rng,
    trial: u32,
    cfg: &PrecisionConfig,
    fails: &mut Vec<String>,
) -> Result<()> {
    let split = trial % 2 == 0;
    let (eps, depth) = if split {
        // Square leading coefficients keep the halving towers shallow.
        let v = rat(rng.gen_range(1..=2), 1);
        let coeffs = [rat(1, 1), rat(1, 4), rat(9, 4)];
        let c = coeffs[rng.gen_range(0..coeffs.len())].clone();
        let mut terms = vec![(v.clone(), crate::real::Real::from_rat(c))];
        if rng.gen_bool(0.5) {
            terms.push((
                v + rat_int(1),
                crate::real::Real::from_rat(sample::small_nonzero_rat(rng)),
            ));
        }
        (
            PuiseuxNumber::from_terms_checked(terms, crate::puiseux::ExtRat::Infinite, cfg)?,
            4u32,
        )
    } else if trial % 4 == 1 {
        (sample::good_epsilon(rng, cfg), 3u32)
    } else {
        (sample::nonsplit_epsilon(rng, cfg), 3u32)
    };
    let curve = MinimalCurve::new(eps, cfg.clone())?;
    let chain = curve.bounding_torsion_chain(depth)?;
    check(fails, chain.len() as u32 == depth - 1, || {
        format!("chain length {} at depth {}", chain.len(), depth)
    });

    let veps = curve.epsilon().valuation().cloned().expect("epsilon is nonzero");
    for (i, tn) in chain.iter().enumerate() {
        let n = i as u32 + 2;
        let x = tn.x().expect("torsion points are affine");
        let y = tn.y().expect("torsion points are affine");
        check(fails, curve.contains(tn), || {
            format!("T_{} is off the curve", 1u64 << n)
        });
        check(fails, y.sign_of().unwrap_or(0) == 1, || {
            format!("T_{} is not on the upper half", 1u64 << n)
        });
        if split {
            let expected = veps.clone() / rat_int(1 << (n - 1));
            check(
                fails,
                x.val_cmp(&expected).map(|o| o == Ordering::Equal).unwrap_or(false),
                || format!("v(x(T_{})) != v(eps)/2^{}", 1u64 << n, n - 1),
            );
            // Lower bound against the collapsing scale, meaningful from n = 3.
            if n >= 3 {
                let floor = curve.epsilon().scale(&crate::real::Real::from_rat(rat(
                    1,
                    1 << (2 * (n as i64 - 3)),
                )));
                check(
                    fails,
                    x.compare(&floor).map(|o| o == Ordering::Greater).unwrap_or(false),
                    || format!("x(T_{}) not above eps/4^{}", 1u64 << n, n - 3),
                );
            }
        } else {
            check(
                fails,
                x.val_cmp(&Rat::zero()).map(|o| o == Ordering::Equal).unwrap_or(false),
                || format!("v(x(T_{})) != 0 under bounded reduction", 1u64 << n),
            );
        }
        // Each entry doubles to the previous one, ending at two-torsion.
        let doubled = curve.double_point(tn)?;
        let target = if i == 0 { curve.t2() } else { chain[i - 1].clone() };
        check(fails, points_agree(&doubled, &target), || {
            format!("[2] T_{} missed its target", 1u64 << n)
        });
    }
    Ok(())
}

/// Folds a coordinate sum into (-1, 1], the fundamental domain of the
/// circle classes with two-torsion at 1.
fn wrap_coord(mut c: Rat) -> Rat {
    let two = rat_int(2);
    while c > Rat::one() {
        c -= two.clone();
    }
    while c <= -Rat::one() {
        c += two.clone();
    }
    c
}

fn circle_coord(setting: &QuotientSetting<'_>, p: &CurvePoint) -> Result<Rat> {
    match setting.quotient_coordinate(p)? {
        WitnessValue::CircleCoordinate(c) => Ok(wrap_coord(c)),
        _ => Err(Error::WrongCase),
    }
}

fn fstar_trial(
    rng: &mut ChaCha8Rng,
    _trial: u32,
    cfg: &PrecisionConfig,
    fails: &mut Vec<String>,
) -> Result<()> {
    let curve = MinimalCurve::new(sample::split_epsilon(rng, cfg), cfg.clone())?;
    let setting = QuotientSetting::full(&curve)?;
    let veps = curve.epsilon().valuation().cloned().expect("split epsilon");
    let m = setting.mult_truncation().expect("split scope carries a truncation");

    // The coordinate is an odd homomorphism into the wrapped interval.
    for _ in 0..3 {
        let p = split_pool_point(rng, &curve, &veps)?;
        let q = split_pool_point(rng, &curve, &veps)?;
        let cp = circle_coord(&setting, &p)?;
        let cq = circle_coord(&setting, &q)?;
        let sum = setting.add(&p, &q)?;
        let cs = circle_coord(&setting, &sum)?;
        check(fails, cs == wrap_coord(cp.clone() + cq.clone()), || {
            format!(
                "coordinate not additive: {} + {} gave {} at P = {}, Q = {}",
                cp, cq, cs, p, q
            )
        });
        let codd = circle_coord(&setting, &p.neg())?;
        check(fails, codd == wrap_coord(-cp.clone()), || {
            format!("coordinate not odd at P = {}", p)
        });
    }

    // Two-torsion lands on the order-two class of the truncation.
    let ft2 = setting.f_star(&curve.t2())?;
    check(
        fails,
        agrees_zero(&ft2.sub(m.two_torsion_rep())),
        || "f*(T2) is not the boundary class".to_string(),
    );
    // The inverse of a tailed epsilon is truncated, so the square of the
    // boundary class equals one only as far as the horizon shows.
    let sq = m.mul(m.two_torsion_rep(), m.two_torsion_rep())?;
    check(
        fails,
        agrees_zero(&sq.sub(&PuiseuxNumber::one())),
        || "boundary class does not square to 1".to_string(),
    );

    // Level membership agrees on both sides of f*.
    let k = rng.gen_range(1..=7);
    let p = curve.point_from_x(sample::interior_eighth(rng, &veps, k), YBranch::Plus)?;
    let fp = setting.f_star(&p)?;
    for n in 1..=4 {
        let on_curve = setting.g00_member(&p, n)?;
        let on_trunc = m.h00_member(&fp, n)?;
        check(fails, on_curve == on_trunc, || {
            format!("level {} disagrees between G00 and H00 at P = {}", n, p)
        });
    }
    Ok(())
}

fn remminus_trial(
    rng: &mut ChaCha8Rng,
    _trial: u32,
    cfg: &PrecisionConfig,
    fails: &mut Vec<String>,
) -> Result<()> {
    let curve = MinimalCurve::new(sample::split_epsilon(rng, cfg), cfg.clone())?;
    let setting = QuotientSetting::full(&curve)?;
    let veps = curve.epsilon().valuation().cloned().expect("split epsilon");

    // Same-half interior points with distinct valuations.
    let k1 = rng.gen_range(1..=7);
    let mut k2 = rng.gen_range(1..=7);
    if k2 == k1 {
        k2 = k1 % 7 + 1;
    }
    let branch = if rng.gen_bool(0.5) {
        YBranch::Plus
    } else {
        YBranch::Minus
    };
    let p = curve.point_from_x(sample::interior_eighth(rng, &veps, k1), branch)?;
    let q = curve.point_from_x(sample::interior_eighth(rng, &veps, k2), branch)?;

    // The difference has valuation |v(x_P) - v(x_Q)|.
    let d = curve.sub_points(&p, &q)?;
    let expected = (veps.clone() * rat(k1, 8) - veps.clone() * rat(k2, 8)).abs();
    let x = d.x().expect("difference of distinct points is affine");
    check(
        fails,
        x.val_cmp(&expected).map(|o| o == Ordering::Equal).unwrap_or(false),
        || {
            format!(
                "v(x(P-Q)) expected {}, got {:?}, at P = {}, Q = {}",
                expected,
                x.valuation(),
                p,
                q
            )
        },
    );

    // Swapping the operands keeps the abscissa.
    let swapped = curve.sub_points(&q, &p)?;
    check(fails, points_agree(&swapped, &d.neg()), || {
        format!("Q - P != -(P - Q) at P = {}, Q = {}", p, q)
    });

    // Coordinates subtract, wrapped.
    let cp = circle_coord(&setting, &p)?;
    let cq = circle_coord(&setting, &q)?;
    let cd = circle_coord(&setting, &d)?;
    check(fails, cd == wrap_coord(cp.clone() - cq.clone()), || {
        format!("coordinate of P - Q is not cp - cq at P = {}, Q = {}", p, q)
    });
    Ok(())
}

fn expect_case(
    fails: &mut Vec<String>,
    setting: &QuotientSetting<'_>,
    case: CaseLabel,
    scenario: &str,
) {
    let c = setting.classification();
    check(fails, c.case == case, || {
        format!("{}: case {} != {}", scenario, c.case.label(), case.label())
    });
    check(fails, c.one_based == case.one_based(), || {
        format!("{}: one_based flag drifted", scenario)
    });
    let value_side = c.internality == Internality::ValueGroup;
    check(fails, c.one_based == value_side, || {
        format!("{}: one_based does not track value-group internality", scenario)
    });
    let valuation_witness = c.witness == WitnessMap::FStar;
    check(fails, c.one_based == valuation_witness, || {
        format!("{}: witness map does not track the dichotomy", scenario)
    });
}

fn identity_witness_ok(setting: &QuotientSetting<'_>) -> Result<bool> {
    let w = setting.quotient_coordinate(&CurvePoint::Infinity)?;
    Ok(match (setting.case().witness_map(), w) {
        (WitnessMap::FStar, WitnessValue::CircleCoordinate(c)) => c.is_zero(),
        (WitnessMap::ReductionRepresentative, WitnessValue::Reduced(p)) => p.is_infinity(),
        (WitnessMap::ResidueCoordinates, WitnessValue::Residue(s, r)) => s == 0 && r.is_zero(),
        (WitnessMap::FStarToMultTruncation, WitnessValue::MultiplicativeResidue(r)) => r.is_one(),
        _ => false,
    })
}

fn classification_table_trial(
    rng: &mut ChaCha8Rng,
    _trial: u32,
    cfg: &PrecisionConfig,
    fails: &mut Vec<String>,
) -> Result<()> {
    let split = MinimalCurve::new(sample::split_epsilon(rng, cfg), cfg.clone())?;
    let good = MinimalCurve::new(sample::good_epsilon(rng, cfg), cfg.clone())?;
    let nonsplit = MinimalCurve::new(sample::nonsplit_epsilon(rng, cfg), cfg.clone())?;
    let veps = split.epsilon().valuation().cloned().expect("split epsilon");

    let s = QuotientSetting::full(&split)?;
    expect_case(fails, &s, CaseLabel::FullSplit, "split full");
    let s = QuotientSetting::full(&good)?;
    expect_case(fails, &s, CaseLabel::FullGoodOrNonsplit, "good full");
    let s = QuotientSetting::full(&nonsplit)?;
    expect_case(fails, &s, CaseLabel::FullGoodOrNonsplit, "nonsplit full");

    let far = split.point_from_x(sample::far_abscissa(rng), YBranch::Plus)?;
    let s = QuotientSetting::truncated(&split, far)?;
    expect_case(fails, &s, CaseLabel::TruncNearIdentity, "split far truncation");
    check(fails, identity_witness_ok(&s)?, || {
        "split far truncation: identity witness".to_string()
    });

    let deep = split.point_from_x(sample::interior_abscissa(rng, &veps), YBranch::Plus)?;
    let s = QuotientSetting::truncated(&split, deep)?;
    expect_case(fails, &s, CaseLabel::TruncSplitDeep, "split deep truncation");
    check(fails, identity_witness_ok(&s)?, || {
        "split deep truncation: identity witness".to_string()
    });

    let unit = split.point_from_x(
        PuiseuxNumber::from_rat(sample::square_unit_abscissa(rng, true)),
        YBranch::Plus,
    )?;
    let s = QuotientSetting::truncated(&split, unit)?;
    expect_case(fails, &s, CaseLabel::TruncSplitUnit, "split unit truncation");
    check(fails, identity_witness_ok(&s)?, || {
        "split unit truncation: identity witness".to_string()
    });

    let bounded = good.point_from_x(
        PuiseuxNumber::from_rat(sample::square_unit_abscissa(rng, false)),
        YBranch::Plus,
    )?;
    let s = QuotientSetting::truncated(&good, bounded)?;
    expect_case(fails, &s, CaseLabel::TruncReductionLike, "good bounded truncation");
    check(fails, identity_witness_ok(&s)?, || {
        "good bounded truncation: identity witness".to_string()
    });

    let far = good.point_from_x(sample::far_abscissa(rng), YBranch::Plus)?;
    let s = QuotientSetting::truncated(&good, far)?;
    expect_case(fails, &s, CaseLabel::TruncNearIdentity, "good far truncation");

    // Reports render and carry the dichotomy fields.
    let full = QuotientSetting::full(&split)?;
    let report = ClassificationReport::build(&full, 2)?;
    check(fails, report.one_based && report.internality == "value-group", || {
        "split report lost the dichotomy fields".to_string()
    });
    check(
        fails,
        report.torsion_valuations == vec![(veps.clone() / rat_int(2)).to_string()],
        || "split report torsion valuations drifted".to_string(),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    // A narrow window keeps the coefficient towers small; the checks only
    // ever look at leading behaviour.
    fn quick(trials: u32) -> SuiteConfig {
        SuiteConfig {
            trials,
            seed: 11,
            mode: ExecMode::Sequential,
            precision: PrecisionConfig::with_window(6),
        }
    }

    #[test]
    fn suite_ids_roundtrip() {
        for id in SuiteId::all() {
            assert_eq!(id.label().parse::<SuiteId>().unwrap(), id);
        }
        assert!(matches!(
            "bogus".parse::<SuiteId>(),
            Err(Error::UnknownSuite(s)) if s == "bogus"
        ));
    }

    #[test]
    fn valuation_axioms_pass() {
        let out = run_suite(SuiteId::ValuationAxioms, &quick(8));
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn group_law_passes() {
        let out = run_suite(SuiteId::GroupLaw, &quick(6));
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn reduction_hom_passes() {
        let out = run_suite(SuiteId::ReductionHom, &quick(6));
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn torsion_chain_passes() {
        let out = run_suite(SuiteId::TorsionChain, &quick(4));
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn fstar_passes() {
        let out = run_suite(SuiteId::FStar, &quick(6));
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn remminus_passes() {
        let out = run_suite(SuiteId::RemMinus, &quick(8));
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn classification_table_passes() {
        let out = run_suite(SuiteId::ClassificationTable, &quick(4));
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn modes_agree() {
        let mut cfg = quick(4);
        let seq = run_suite(SuiteId::RemMinus, &cfg);
        cfg.mode = ExecMode::Parallel;
        let par = run_suite(SuiteId::RemMinus, &cfg);
        assert_eq!(seq.failures, par.failures);
    }
}
