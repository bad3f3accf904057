//! Classification of Hermitian orderings in the `(ξ, ζ)` plane.
//!
//! The allowed region is `1/4 ≥ −ξ/2 ≥ ζ ≥ 0`. Inside it four closed classes
//! overlap along shared boundary curves:
//!
//! | class | region                                   | two-term representative                         |
//! |-------|------------------------------------------|-------------------------------------------------|
//! | vR    | `ζ ≤ ξ²`                                 | `½[m^α p m^β p m^γ + m^γ p m^β p m^α]`          |
//! | I     | `ξ² ≤ ζ ≤ min((ξ+½)² + ξ², 2ξ²)`         | `½[MB(α) + MB(γ)]`                              |
//! | II    | `2ξ² ≤ ζ ≤ −ξ/2`                         | `w MB(α) + (1−w) BDD`                           |
//! | III   | `(ξ+½)² + ξ² ≤ ζ ≤ −ξ/2`                 | `w MB(α) + (1−w) ZK`                            |
//!
//! where `MB(a)` is the symmetric single term `m^a p m^(−1−2a) p m^a`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::ClassifyError;
use crate::ordering::{BuildingBlock, OrderingSpec};
use crate::scalar::{le, Rational, Scalar};
use crate::surd::SqrtField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeoClass {
    VonRoos,
    I,
    II,
    III,
}

impl KeoClass {
    pub const ALL: [KeoClass; 4] = [KeoClass::VonRoos, KeoClass::I, KeoClass::II, KeoClass::III];

    pub fn label(self) -> &'static str {
        match self {
            KeoClass::VonRoos => "vR",
            KeoClass::I => "I",
            KeoClass::II => "II",
            KeoClass::III => "III",
        }
    }

    pub fn parse(text: &str) -> Option<KeoClass> {
        match text.trim().to_ascii_lowercase().as_str() {
            "vr" | "vonroos" | "von-roos" => Some(KeoClass::VonRoos),
            "i" | "1" => Some(KeoClass::I),
            "ii" | "2" => Some(KeoClass::II),
            "iii" | "3" => Some(KeoClass::III),
            _ => None,
        }
    }

    /// The boundary curves that border this class's region.
    fn borders(self) -> &'static [Boundary] {
        match self {
            KeoClass::VonRoos => &[Boundary::Mb, Boundary::Lower],
            KeoClass::I => &[Boundary::Mb, Boundary::IOverII, Boundary::IOverIII],
            KeoClass::II => &[Boundary::IOverII, Boundary::Upper],
            KeoClass::III => &[Boundary::IOverIII, Boundary::Upper],
        }
    }
}

impl fmt::Display for KeoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Boundary curves of the class regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Boundary {
    /// `ζ = ξ²`, single symmetric terms; shared by vR and I.
    Mb,
    /// `ζ = 2ξ²`, shared by I and II.
    IOverII,
    /// `ζ = (ξ+½)² + ξ²`, shared by I and III.
    IOverIII,
    /// `ζ = −ξ/2`.
    Upper,
    /// `ζ = 0`.
    Lower,
}

impl Boundary {
    pub fn label(self) -> &'static str {
        match self {
            Boundary::Mb => "MB",
            Boundary::IOverII => "I/II",
            Boundary::IOverIII => "I/III",
            Boundary::Upper => "upper",
            Boundary::Lower => "lower",
        }
    }

    /// The curve's `ζ` value at `ξ`.
    pub fn zeta_at<S: Scalar>(self, xi: &S) -> S {
        let half = S::half();
        match self {
            Boundary::Mb => xi.clone() * xi.clone(),
            Boundary::IOverII => S::from_i64(2) * xi.clone() * xi.clone(),
            Boundary::IOverIII => {
                let s = xi.clone() + half;
                s.clone() * s + xi.clone() * xi.clone()
            }
            Boundary::Upper => -xi.clone() * S::half(),
            Boundary::Lower => S::zero(),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Class membership plus the boundary curves of that class the point lies on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLabel {
    pub class: KeoClass,
    pub boundaries: BTreeSet<Boundary>,
}

impl ClassLabel {
    pub fn on(&self, b: Boundary) -> bool {
        self.boundaries.contains(&b)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.class)?;
        if !self.boundaries.is_empty() {
            let b: Vec<_> = self.boundaries.iter().map(|b| b.label()).collect();
            write!(f, "[{}]", b.join(","))?;
        }
        Ok(())
    }
}

/// Which inequality of the allowed region fails, if any.
fn allowed_violation<S: Scalar>(xi: &S, zeta: &S) -> Option<&'static str> {
    let quarter = S::half() * S::half();
    let upper = Boundary::Upper.zeta_at(xi);
    if !le(&upper, &quarter) {
        Some("-xi/2 > 1/4")
    } else if !le(zeta, &upper) {
        Some("zeta > -xi/2")
    } else if !le(&S::zero(), zeta) {
        Some("zeta < 0")
    } else {
        None
    }
}

fn outside<S: Scalar>(xi: &S, zeta: &S, violated: &'static str) -> ClassifyError {
    ClassifyError::OutsideAllowedRegion {
        xi: xi.to_string(),
        zeta: zeta.to_string(),
        violated,
    }
}

/// `1/4 ≥ −ξ/2 ≥ ζ ≥ 0`.
pub fn in_allowed_region<S: Scalar>(xi: &S, zeta: &S) -> bool {
    allowed_violation(xi, zeta).is_none()
}

fn class_bounds<S: Scalar>(class: KeoClass, xi: &S) -> (S, S) {
    let mb = Boundary::Mb.zeta_at(xi);
    let i_ii = Boundary::IOverII.zeta_at(xi);
    let i_iii = Boundary::IOverIII.zeta_at(xi);
    let upper = Boundary::Upper.zeta_at(xi);
    match class {
        KeoClass::VonRoos => (Boundary::Lower.zeta_at(xi), mb),
        KeoClass::I => {
            let cap = if i_iii < i_ii { i_iii } else { i_ii };
            (mb, cap)
        }
        KeoClass::II => (i_ii, upper),
        KeoClass::III => (i_iii, upper),
    }
}

fn in_class<S: Scalar>(class: KeoClass, xi: &S, zeta: &S) -> bool {
    let (lo, hi) = class_bounds(class, xi);
    le(&lo, zeta) && le(zeta, &hi)
}

/// Every class whose closed region contains the point, with boundary flags.
pub fn classify<S: Scalar>(xi: &S, zeta: &S) -> Result<Vec<ClassLabel>, ClassifyError> {
    if let Some(v) = allowed_violation(xi, zeta) {
        return Err(outside(xi, zeta, v));
    }
    Ok(KeoClass::ALL
        .iter()
        .filter(|c| in_class(**c, xi, zeta))
        .map(|&class| ClassLabel {
            class,
            boundaries: class
                .borders()
                .iter()
                .copied()
                .filter(|b| b.zeta_at(xi).coincides(zeta))
                .collect(),
        })
        .collect())
}

fn constraint_text(class: KeoClass) -> &'static str {
    match class {
        KeoClass::VonRoos => "xi^2 >= zeta",
        KeoClass::I => "min((xi+1/2)^2 + xi^2, 2 xi^2) >= zeta >= xi^2",
        KeoClass::II => "-xi/2 >= zeta >= 2 xi^2",
        KeoClass::III => "-xi/2 >= zeta >= (xi+1/2)^2 + xi^2",
    }
}

/// Two-term ordering of the requested class with the given `(ξ, ζ)`.
///
/// vR and I need `√|ξ² − ζ|`; for rationals the result is an exact
/// [`Surd`](crate::Surd), for floats a plain float. The first term carries
/// `α = ξ + √…`, the second `γ = ξ − √…`.
///
/// Two points have a `0/0` weight formula and get a fixed convention: the
/// class-II point `(0, 0)` returns BDD (`w = 1`, `α = 0`) and the class-III
/// point `(−1/2, 1/4)` returns ZK (`w = 1`, `α = −1/2`).
pub fn invert<S: SqrtField>(
    xi: &S,
    zeta: &S,
    class: KeoClass,
) -> Result<OrderingSpec<S::Root>, ClassifyError> {
    let bad = || ClassifyError::ConstraintUnsatisfied {
        class: class.label(),
        constraint: constraint_text(class),
        xi: xi.to_string(),
        zeta: zeta.to_string(),
    };
    match class {
        KeoClass::VonRoos => {
            if !le(zeta, &Boundary::Mb.zeta_at(xi)) {
                return Err(bad());
            }
        }
        KeoClass::I | KeoClass::II | KeoClass::III => {
            if !in_class(class, xi, zeta) {
                return Err(bad());
            }
        }
    }
    let half = <S::Root as Scalar>::half();
    let one = <S::Root as One>::one();
    let xi2 = xi.clone() * xi.clone();
    let root = |disc: S| -> S::Root {
        let disc = if disc.coincides(&S::zero()) { S::zero() } else { disc };
        disc.sqrt_root()
            .expect("discriminant is non-negative inside the class region")
    };
    let name = format!("{}-inverse({xi},{zeta})", class.label());
    let terms = match class {
        KeoClass::VonRoos => {
            let r = root(xi2 - zeta.clone());
            let a = xi.lift() + r.clone();
            let g = xi.lift() - r;
            vec![
                BuildingBlock::closed(half.clone(), a.clone(), g.clone()),
                BuildingBlock::closed(half, g, a),
            ]
        }
        KeoClass::I => {
            let r = root(zeta.clone() - xi2);
            vec![
                BuildingBlock::mirrored(half.clone(), xi.lift() + r.clone()),
                BuildingBlock::mirrored(half, xi.lift() - r),
            ]
        }
        KeoClass::II => {
            if xi.is_zero() {
                if !zeta.is_zero() {
                    return Err(ClassifyError::DegenerateDenominator {
                        reason: format!("xi = 0 with zeta = {zeta} in class II"),
                    });
                }
                two_term(one.clone(), <S::Root as Zero>::zero(), <S::Root as Zero>::zero())
            } else {
                let w = xi2 / zeta.clone();
                let a = zeta.clone() / xi.clone();
                check_weight(class, &w)?;
                two_term(w.lift(), a.lift(), <S::Root as Zero>::zero())
            }
        }
        KeoClass::III => {
            let s = xi.clone() + S::half();
            let den = xi.clone() + zeta.clone() + S::half() * S::half();
            if s.is_zero() || den.is_zero() {
                let corner = s.is_zero() && zeta.coincides(&(S::half() * S::half()));
                if !corner {
                    return Err(ClassifyError::DegenerateDenominator {
                        reason: format!("xi = {xi} off the class-III locus"),
                    });
                }
                two_term(one.clone(), -half.clone(), -half)
            } else {
                let w = s.clone() * s.clone() / den;
                let a = (xi.clone() + S::from_i64(2) * zeta.clone())
                    / (S::from_i64(2) * xi.clone() + S::one());
                check_weight(class, &w)?;
                two_term(w.lift(), a.lift(), -half)
            }
        }
    };
    Ok(OrderingSpec::named(name, terms))
}

/// `w MB(α) + (1 − w) MB(fixed)`.
fn two_term<R: Scalar>(w: R, alpha: R, fixed: R) -> Vec<BuildingBlock<R>> {
    vec![
        BuildingBlock::mirrored(w.clone(), alpha),
        BuildingBlock::mirrored(R::one() - w, fixed),
    ]
}

fn check_weight<S: Scalar>(class: KeoClass, w: &S) -> Result<(), ClassifyError> {
    if le(&S::zero(), w) && le(w, &S::half()) {
        Ok(())
    } else {
        Err(ClassifyError::WeightOutOfRange {
            class: class.label(),
            weight: w.to_string(),
        })
    }
}

/// [`invert`] restricted to rational output: errors with
/// `IrrationalSquareRoot` when the vR/I square root is not rational.
pub fn invert_rational(
    xi: &Rational,
    zeta: &Rational,
    class: KeoClass,
) -> Result<OrderingSpec<Rational>, ClassifyError> {
    let spec = invert(xi, zeta, class)?;
    let rational = spec
        .terms()
        .iter()
        .all(|t| [&t.weight, &t.alpha, &t.beta, &t.gamma].iter().all(|v| v.is_rational()));
    if rational {
        return Ok(spec.map(|v| v.to_rational().expect("checked rational")));
    }
    let disc = if class == KeoClass::VonRoos {
        xi * xi - zeta
    } else {
        zeta - xi * xi
    };
    Err(ClassifyError::IrrationalSquareRoot {
        value: disc.to_string(),
    })
}

/// `(ξ, θ)` with `θ = ζ − ξ²`: vR points have `θ ≤ 0`, class-I points `θ ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityParams<S> {
    pub xi: S,
    pub theta: S,
}

impl<S: Scalar> DualityParams<S> {
    pub fn zeta(&self) -> S {
        self.theta.clone() + self.xi.clone() * self.xi.clone()
    }

    pub fn is_self_dual(&self) -> bool {
        self.theta.is_zero()
    }
}

pub fn to_duality<S: Scalar>(xi: &S, zeta: &S) -> Result<DualityParams<S>, ClassifyError> {
    if let Some(v) = allowed_violation(xi, zeta) {
        return Err(outside(xi, zeta, v));
    }
    Ok(DualityParams {
        xi: xi.clone(),
        theta: zeta.clone() - xi.clone() * xi.clone(),
    })
}

/// `(ξ, θ) ↦ (ξ, −θ)`, defined where the image is also allowed.
pub fn dual<S: Scalar>(d: &DualityParams<S>) -> Result<DualityParams<S>, ClassifyError> {
    let image = DualityParams {
        xi: d.xi.clone(),
        theta: -d.theta.clone(),
    };
    let zeta = image.zeta();
    if !in_allowed_region(&image.xi, &zeta) {
        return Err(ClassifyError::DualOutsideAllowedRegion {
            xi: image.xi.to_string(),
            zeta: zeta.to_string(),
        });
    }
    Ok(image)
}

/// One classified grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionSample {
    pub xi: Rational,
    pub zeta: Rational,
    pub labels: Vec<ClassLabel>,
}

/// Classifies the uniform rational grid `ξ ∈ [−1/2, 0]`, `ζ ∈ [0, 1/4]` with
/// `resolution` points per axis, skipping points outside the allowed region.
/// Rows are ordered by `ξ`, then `ζ`.
pub fn region_samples(resolution: usize) -> Result<Vec<RegionSample>, ClassifyError> {
    if resolution < 2 {
        return Err(ClassifyError::BadResolution(resolution));
    }
    let steps = Rational::from_integer((resolution - 1).into());
    let half = Rational::new(1.into(), 2.into());
    let quarter = Rational::new(1.into(), 4.into());
    let mut out = Vec::new();
    for i in 0..resolution {
        let xi = -&half + &half * Rational::from_integer(i.into()) / &steps;
        for j in 0..resolution {
            let zeta = &quarter * Rational::from_integer(j.into()) / &steps;
            if let Ok(labels) = classify(&xi, &zeta) {
                out.push(RegionSample {
                    xi: xi.clone(),
                    zeta,
                    labels,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::surd::Surd;

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn classes(xi: Rational, zeta: Rational) -> Vec<KeoClass> {
        classify(&xi, &zeta).unwrap().iter().map(|l| l.class).collect()
    }

    fn alpha_gamma(spec: &OrderingSpec<Surd>) -> (Surd, Surd) {
        (spec.terms()[0].alpha.clone(), spec.terms()[1].alpha.clone())
    }

    #[test]
    fn allowed_region_examples() {
        assert!(in_allowed_region(&r(-1, 2), &r(1, 4)));
        assert!(in_allowed_region(&r(0, 1), &r(0, 1)));
        assert!(!in_allowed_region(&r(-1, 2), &r(1, 2)));
        assert!(!in_allowed_region(&r(-3, 4), &r(0, 1)));
        assert!(!in_allowed_region(&r(-1, 4), &r(-1, 100)));
    }

    #[test]
    fn yan_yee_point_is_class_three_on_the_upper_boundary() {
        let labels = classify(&r(-1, 3), &r(1, 6)).unwrap();
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].class, KeoClass::III);
        assert_eq!(labels[0].boundaries, BTreeSet::from([Boundary::Upper]));
    }

    #[test]
    fn corner_belongs_to_three_classes() {
        let labels = classify(&r(-1, 2), &r(1, 4)).unwrap();
        let got: Vec<_> = labels.iter().map(|l| l.class).collect();
        assert_eq!(got, vec![KeoClass::VonRoos, KeoClass::I, KeoClass::III]);
        assert!(labels[0].on(Boundary::Mb));
        assert!(labels[1].on(Boundary::Mb) && labels[1].on(Boundary::IOverIII));
        assert!(labels[2].on(Boundary::IOverIII) && labels[2].on(Boundary::Upper));
    }

    #[test]
    fn interior_class_two_point() {
        assert_eq!(classes(r(-1, 8), r(3, 64)), vec![KeoClass::II]);
    }

    #[test]
    fn origin_sits_on_every_boundary_but_i_iii() {
        let labels = classify(&r(0, 1), &r(0, 1)).unwrap();
        let got: Vec<_> = labels.iter().map(|l| l.class).collect();
        assert_eq!(got, vec![KeoClass::VonRoos, KeoClass::I, KeoClass::II]);
        let flags: BTreeSet<_> = labels.iter().flat_map(|l| l.boundaries.clone()).collect();
        assert_eq!(
            flags,
            BTreeSet::from([Boundary::Mb, Boundary::IOverII, Boundary::Upper, Boundary::Lower])
        );
    }

    #[test]
    fn outside_point_is_rejected_with_the_failing_inequality() {
        let err = classify(&r(-1, 2), &r(1, 2)).unwrap_err();
        assert!(err.to_string().contains("zeta > -xi/2"), "{err}");
    }

    #[test]
    fn von_roos_inverse_of_gw_point() {
        let spec = invert_rational(&r(-1, 2), &r(0, 1), KeoClass::VonRoos).unwrap();
        let t = spec.terms();
        assert_eq!((t[0].alpha.clone(), t[0].gamma.clone()), (r(0, 1), r(-1, 1)));
        assert_eq!(t[0].beta, r(0, 1));
        assert_eq!(
            spec.canonical().terms(),
            crate::catalog("GW").unwrap().canonical().terms()
        );
    }

    #[test]
    fn class_three_inverse_reproduces_yan_yee() {
        let spec = invert_rational(&r(-1, 3), &r(1, 6), KeoClass::III).unwrap();
        assert_eq!(spec.terms()[0].weight, r(1, 3));
        assert_eq!(spec.terms()[0].alpha, r(0, 1));
        assert_eq!(spec.terms()[1].weight, r(2, 3));
        assert_eq!(
            spec.canonical().terms(),
            crate::catalog("YY").unwrap().canonical().terms()
        );
    }

    #[test]
    fn class_two_inverse() {
        let spec = invert_rational(&r(-1, 8), &r(3, 64), KeoClass::II).unwrap();
        assert_eq!(spec.terms()[0].weight, r(1, 3));
        assert_eq!(spec.terms()[0].alpha, r(-3, 8));
        let p = spec.linear_params().unwrap();
        assert_eq!((p.xi, p.zeta, p.eta), (r(-1, 8), r(3, 64), r(0, 1)));
    }

    #[test]
    fn class_one_inverse() {
        let spec = invert(&r(-1, 4), &r(1, 8), KeoClass::I).unwrap();
        let (a, g) = alpha_gamma(&spec);
        assert_eq!(a.to_rational(), Some(r(0, 1)));
        assert_eq!(g.to_rational(), Some(r(-1, 2)));
        let p = spec.linear_params().unwrap();
        assert_eq!(p.xi, Surd::from(r(-1, 4)));
        assert_eq!(p.zeta, Surd::from(r(1, 8)));
    }

    #[test]
    fn irrational_inverse_is_an_exact_surd() {
        // xi^2 - zeta = 1/16 - 1/32 = 1/32, sqrt = sqrt(2)/8
        let spec = invert(&r(-1, 4), &r(1, 32), KeoClass::VonRoos).unwrap();
        let (a, _) = alpha_gamma(&spec);
        assert!(!a.is_rational());
        let p = spec.linear_params().unwrap();
        assert_eq!(p.xi.to_rational(), Some(r(-1, 4)));
        assert_eq!(p.zeta.to_rational(), Some(r(1, 32)));
        assert!(p.eta.is_zero());
        assert!(matches!(
            invert_rational(&r(-1, 4), &r(1, 32), KeoClass::VonRoos),
            Err(ClassifyError::IrrationalSquareRoot { .. })
        ));
    }

    #[test]
    fn float_mode_inverse() {
        let spec = invert(&-0.25f64, &(1.0 / 32.0), KeoClass::VonRoos).unwrap();
        let expect = -0.25 + (2.0f64).sqrt() / 8.0;
        assert!((spec.terms()[0].alpha - expect).abs() <= 1e-15 * expect.abs());
        let p = spec.linear_params().unwrap();
        assert!((p.zeta - 1.0 / 32.0).abs() < 1e-16);
    }

    #[test]
    fn von_roos_rejects_points_above_the_mb_line() {
        assert!(matches!(
            invert(&r(-1, 3), &r(1, 6), KeoClass::VonRoos),
            Err(ClassifyError::ConstraintUnsatisfied { class: "vR", .. })
        ));
    }

    #[test]
    fn degenerate_points_use_fixed_conventions() {
        let bdd = invert_rational(&r(0, 1), &r(0, 1), KeoClass::II).unwrap();
        assert_eq!(bdd.canonical().terms(), crate::catalog("BDD").unwrap().terms());
        let zk = invert_rational(&r(-1, 2), &r(1, 4), KeoClass::III).unwrap();
        assert_eq!(zk.canonical().terms(), crate::catalog("ZK").unwrap().terms());
    }

    #[test]
    fn zk_is_self_dual() {
        let d = to_duality(&r(-1, 2), &r(1, 4)).unwrap();
        assert!(d.is_self_dual());
        assert_eq!(dual(&d).unwrap(), d);
    }

    #[test]
    fn dual_of_a_von_roos_point_inverts_to_the_same_exponents() {
        let d = to_duality(&r(-1, 4), &r(0, 1)).unwrap();
        assert_eq!(d.theta, r(-1, 16));
        let image = dual(&d).unwrap();
        assert_eq!((image.xi.clone(), image.zeta()), (r(-1, 4), r(1, 8)));
        let vr = invert(&r(-1, 4), &r(0, 1), KeoClass::VonRoos).unwrap();
        let one = invert(&image.xi, &image.zeta(), KeoClass::I).unwrap();
        assert_eq!(alpha_gamma(&vr), alpha_gamma(&one));
    }

    #[test]
    fn gw_has_no_dual() {
        let d = to_duality(&r(-1, 2), &r(0, 1)).unwrap();
        assert!(matches!(
            dual(&d),
            Err(ClassifyError::DualOutsideAllowedRegion { .. })
        ));
    }

    #[test]
    fn region_grid_at_resolution_three() {
        let samples = region_samples(3).unwrap();
        let pts: Vec<_> = samples.iter().map(|s| (s.xi.clone(), s.zeta.clone())).collect();
        assert_eq!(
            pts,
            vec![
                (r(-1, 2), r(0, 1)),
                (r(-1, 2), r(1, 8)),
                (r(-1, 2), r(1, 4)),
                (r(-1, 4), r(0, 1)),
                (r(-1, 4), r(1, 8)),
                (r(0, 1), r(0, 1)),
            ]
        );
        assert!(region_samples(1).is_err());
    }
}
