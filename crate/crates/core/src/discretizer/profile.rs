use std::fmt;
use std::sync::Arc;

use nalgebra::RealField;
use num_traits::{One, Signed, Zero};

use crate::error::DiscretizeError;
use crate::scalar::{Rational, Scalar};

use super::Grid;

/// `x ↦ [1/m, (1/m)', (1/m)'']`.
pub type InverseMassFn = dyn Fn(f64) -> [f64; 3] + Send + Sync;

/// A smooth, strictly positive mass `m(x)`, described through `u = 1/m` and
/// its first two derivatives.
#[derive(Clone)]
pub enum MassProfile {
    /// `m = m0`.
    Constant { m0: Rational },
    /// `m = m0 / (1 + λx²)`, so `1/m` is a parabola.
    LorentzianInverse { m0: Rational, lambda: Rational },
    /// `m = m0 (1 + λ exp(−x²/σ²))`.
    GaussianBump {
        m0: Rational,
        lambda: Rational,
        sigma: Rational,
    },
    /// `m = m0 (1 + λ tanh(x/σ))`, `|λ| < 1`.
    SmoothedStep {
        m0: Rational,
        lambda: Rational,
        sigma: Rational,
    },
    /// User-supplied closed forms, evaluated in `f64`.
    Custom { name: String, eval: Arc<InverseMassFn> },
}

impl fmt::Debug for MassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MassProfile({self})")
    }
}

impl fmt::Display for MassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.parameters();
        if params.is_empty() {
            return f.write_str(self.name());
        }
        let args: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.name(), args.join(","))
    }
}

fn invalid(profile: &str, reason: impl Into<String>) -> DiscretizeError {
    DiscretizeError::InvalidProfile {
        profile: profile.to_string(),
        reason: reason.into(),
    }
}

fn positive(profile: &str, key: &str, v: &Rational) -> Result<(), DiscretizeError> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(invalid(profile, format!("{key} must be positive, got {v}")))
    }
}

impl MassProfile {
    pub const NAMES: [&'static str; 4] = ["constant", "lorentzian", "gaussian", "step"];

    pub fn constant(m0: Rational) -> Result<Self, DiscretizeError> {
        positive("constant", "m0", &m0)?;
        Ok(MassProfile::Constant { m0 })
    }

    /// `λ ≥ 0` keeps the mass positive everywhere.
    pub fn lorentzian(m0: Rational, lambda: Rational) -> Result<Self, DiscretizeError> {
        positive("lorentzian", "m0", &m0)?;
        if lambda.is_negative() {
            return Err(invalid("lorentzian", format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(MassProfile::LorentzianInverse { m0, lambda })
    }

    pub fn gaussian(m0: Rational, lambda: Rational, sigma: Rational) -> Result<Self, DiscretizeError> {
        positive("gaussian", "m0", &m0)?;
        positive("gaussian", "sigma", &sigma)?;
        if lambda <= -Rational::one() {
            return Err(invalid("gaussian", format!("lambda must be > -1, got {lambda}")));
        }
        Ok(MassProfile::GaussianBump { m0, lambda, sigma })
    }

    pub fn step(m0: Rational, lambda: Rational, sigma: Rational) -> Result<Self, DiscretizeError> {
        positive("step", "m0", &m0)?;
        positive("step", "sigma", &sigma)?;
        if lambda.abs() >= Rational::one() {
            return Err(invalid("step", format!("|lambda| must be < 1, got {lambda}")));
        }
        Ok(MassProfile::SmoothedStep { m0, lambda, sigma })
    }

    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static,
    ) -> Self {
        MassProfile::Custom {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    /// Builds a built-in profile from `key=value` pairs. Missing keys default
    /// to `m0 = 1`, `lambda = 1`, `sigma = 1`.
    pub fn from_name(name: &str, params: &[(String, Rational)]) -> Result<Self, DiscretizeError> {
        let name = name.trim().to_ascii_lowercase();
        let allowed: &[&str] = match name.as_str() {
            "constant" => &["m0"],
            "lorentzian" => &["m0", "lambda"],
            "gaussian" | "step" => &["m0", "lambda", "sigma"],
            _ => return Err(invalid(&name, format!("unknown profile; expected one of {:?}", Self::NAMES))),
        };
        for (k, _) in params {
            if !allowed.contains(&k.as_str()) {
                return Err(invalid(&name, format!("unknown parameter {k:?}; expected {allowed:?}")));
            }
        }
        let get = |key: &str| {
            params
                .iter()
                .rev()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Rational::one)
        };
        match name.as_str() {
            "constant" => Self::constant(get("m0")),
            "lorentzian" => Self::lorentzian(get("m0"), get("lambda")),
            "gaussian" => Self::gaussian(get("m0"), get("lambda"), get("sigma")),
            _ => Self::step(get("m0"), get("lambda"), get("sigma")),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            MassProfile::Constant { .. } => "constant",
            MassProfile::LorentzianInverse { .. } => "lorentzian",
            MassProfile::GaussianBump { .. } => "gaussian",
            MassProfile::SmoothedStep { .. } => "step",
            MassProfile::Custom { name, .. } => name,
        }
    }

    pub fn parameters(&self) -> Vec<(&'static str, Rational)> {
        match self {
            MassProfile::Constant { m0 } => vec![("m0", m0.clone())],
            MassProfile::LorentzianInverse { m0, lambda } => {
                vec![("m0", m0.clone()), ("lambda", lambda.clone())]
            }
            MassProfile::GaussianBump { m0, lambda, sigma }
            | MassProfile::SmoothedStep { m0, lambda, sigma } => vec![
                ("m0", m0.clone()),
                ("lambda", lambda.clone()),
                ("sigma", sigma.clone()),
            ],
            MassProfile::Custom { .. } => vec![],
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            MassProfile::Constant { .. } => true,
            MassProfile::LorentzianInverse { lambda, .. }
            | MassProfile::GaussianBump { lambda, .. }
            | MassProfile::SmoothedStep { lambda, .. } => lambda.is_zero(),
            MassProfile::Custom { .. } => false,
        }
    }

    /// `[1/m, (1/m)', (1/m)'']` at `x`.
    pub fn eval<T: RealField + Copy>(&self, x: T) -> [T; 3] {
        let r = |v: &Rational| -> T { nalgebra::convert(v.to_f64()) };
        let two: T = nalgebra::convert(2.0);
        match self {
            MassProfile::Constant { m0 } => [T::one() / r(m0), T::zero(), T::zero()],
            MassProfile::LorentzianInverse { m0, lambda } => {
                let (m0, l) = (r(m0), r(lambda));
                [(T::one() + l * x * x) / m0, two * l * x / m0, two * l / m0]
            }
            MassProfile::GaussianBump { m0, lambda, sigma } => {
                let (m0, l, s) = (r(m0), r(lambda), r(sigma));
                let s2 = s * s;
                let g = (-x * x / s2).exp();
                let g1 = -two * x / s2 * g;
                let g2 = (two * two * x * x / (s2 * s2) - two / s2) * g;
                reciprocal(m0, T::one() + l * g, l * g1, l * g2)
            }
            MassProfile::SmoothedStep { m0, lambda, sigma } => {
                let (m0, l, s) = (r(m0), r(lambda), r(sigma));
                let t = (x / s).tanh();
                let sech2 = T::one() - t * t;
                reciprocal(m0, T::one() + l * t, l * sech2 / s, -two * l * t * sech2 / (s * s))
            }
            MassProfile::Custom { eval, .. } => {
                let xf: f64 = nalgebra::try_convert(x).unwrap_or(f64::NAN);
                eval(xf).map(|v| nalgebra::convert(v))
            }
        }
    }

    pub fn inv_m<T: RealField + Copy>(&self, x: T) -> T {
        self.eval(x)[0]
    }

    pub fn d_inv_m<T: RealField + Copy>(&self, x: T) -> T {
        self.eval(x)[1]
    }

    pub fn dd_inv_m<T: RealField + Copy>(&self, x: T) -> T {
        self.eval(x)[2]
    }

    /// Positivity on every grid node (boundaries included) and agreement of
    /// the analytic derivatives with central differences on a probe grid.
    pub fn check<T: RealField + Copy>(&self, grid: &Grid<T>) -> Result<(), DiscretizeError> {
        for (index, x) in grid.nodes().into_iter().enumerate() {
            let u = self.inv_m(x);
            if !(u > T::zero()) || !u.is_finite() {
                return Err(DiscretizeError::NonPositiveMass {
                    index,
                    x: nalgebra::try_convert(x).unwrap_or(f64::NAN),
                });
            }
        }
        let (a, b) = (grid.x_min_f64(), grid.x_max_f64());
        self.probe_derivatives(a, b)
    }

    fn probe_derivatives(&self, a: f64, b: f64) -> Result<(), DiscretizeError> {
        const PROBES: usize = 33;
        let span = b - a;
        let delta = 1e-4 * span.max(1e-3);
        for i in 0..PROBES {
            let x = a + span * i as f64 / (PROBES - 1) as f64;
            let [_, d, dd] = self.eval(x);
            let [um, dm, _] = self.eval(x - delta);
            let [up, dp, _] = self.eval(x + delta);
            let fd = (up - um) / (2.0 * delta);
            let fdd = (dp - dm) / (2.0 * delta);
            let scale = 1.0 + self.inv_m(x).abs() / span.min(1.0).powi(2);
            if !((fd - d).abs() <= 1e-5 * (scale + d.abs())) {
                return Err(DiscretizeError::DerivativeMismatch { x, which: "first" });
            }
            if !((fdd - dd).abs() <= 1e-5 * (scale + dd.abs())) {
                return Err(DiscretizeError::DerivativeMismatch { x, which: "second" });
            }
        }
        Ok(())
    }
}

/// `1/(m0 F)` and its derivatives from `F, F', F''`.
fn reciprocal<T: RealField + Copy>(m0: T, f: T, f1: T, f2: T) -> [T; 3] {
    let two: T = nalgebra::convert(2.0);
    [
        T::one() / (m0 * f),
        -f1 / (m0 * f * f),
        -(f2 * f - two * f1 * f1) / (m0 * f * f * f),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn fd(p: &MassProfile, x: f64) -> (f64, f64) {
        let h = 1e-4;
        let u = |x| p.inv_m::<f64>(x);
        (
            (u(x + h) - u(x - h)) / (2.0 * h),
            (u(x + h) - 2.0 * u(x) + u(x - h)) / (h * h),
        )
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let profiles = [
            MassProfile::lorentzian(ratio(2, 1), ratio(3, 2)).unwrap(),
            MassProfile::gaussian(ratio(1, 1), ratio(1, 2), ratio(1, 2)).unwrap(),
            MassProfile::step(ratio(1, 1), ratio(-1, 2), ratio(1, 3)).unwrap(),
        ];
        for p in &profiles {
            for x in [-0.9, -0.3, 0.0, 0.41, 0.8] {
                let [_, d, dd] = p.eval(x);
                let (fd1, fd2) = fd(p, x);
                assert!((d - fd1).abs() < 1e-6, "{p} d at {x}: {d} vs {fd1}");
                assert!((dd - fd2).abs() < 1e-4, "{p} dd at {x}: {dd} vs {fd2}");
            }
        }
    }

    #[test]
    fn lorentzian_values() {
        let p = MassProfile::lorentzian(ratio(1, 1), ratio(1, 1)).unwrap();
        assert_eq!(p.eval(0.5f64), [1.25, 1.0, 2.0]);
        assert_eq!(p.to_string(), "lorentzian(m0=1,lambda=1)");
    }

    #[test]
    fn evaluates_in_single_precision() {
        let p = MassProfile::gaussian(ratio(1, 1), ratio(1, 2), ratio(1, 2)).unwrap();
        let lo = p.eval(0.3f32);
        let hi = p.eval(0.3f64);
        for i in 0..3 {
            assert!((lo[i] as f64 - hi[i]).abs() < 1e-5 * (1.0 + hi[i].abs()));
        }
    }

    #[test]
    fn parameter_domains() {
        assert!(MassProfile::constant(ratio(0, 1)).is_err());
        assert!(MassProfile::lorentzian(ratio(1, 1), ratio(-1, 1)).is_err());
        assert!(MassProfile::gaussian(ratio(1, 1), ratio(-1, 1), ratio(1, 1)).is_err());
        assert!(MassProfile::step(ratio(1, 1), ratio(1, 1), ratio(1, 1)).is_err());
        assert!(MassProfile::from_name("parabolic", &[]).is_err());
        assert!(MassProfile::from_name("constant", &[("lambda".into(), ratio(1, 1))]).is_err());
        let p = MassProfile::from_name("Gaussian", &[("sigma".into(), ratio(1, 2))]).unwrap();
        assert_eq!(p.to_string(), "gaussian(m0=1,lambda=1,sigma=1/2)");
    }

    #[test]
    fn probe_rejects_inconsistent_or_negative_custom_profiles() {
        let grid = Grid::new(-1.0, 1.0, 20).unwrap();
        let wrong = MassProfile::custom("wrong", |x: f64| [1.0 + x * x, 3.0 * x, 2.0]);
        assert!(matches!(
            wrong.check(&grid),
            Err(DiscretizeError::DerivativeMismatch { which: "first", .. })
        ));
        let negative = MassProfile::custom("negative", |x: f64| [x, 1.0, 0.0]);
        assert!(matches!(
            negative.check(&grid),
            Err(DiscretizeError::NonPositiveMass { index: 0, .. })
        ));
        let jump = MassProfile::custom("jump", |x: f64| {
            [if x < 0.0 { 1.0 } else { 2.0 }, 0.0, 0.0]
        });
        assert!(jump.check(&grid).is_err());
        let good = MassProfile::custom("good", |x: f64| [1.0 + x * x, 2.0 * x, 2.0]);
        good.check(&grid).unwrap();
    }
}
