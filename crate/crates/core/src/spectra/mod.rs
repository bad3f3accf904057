//! Bound states of `H = T + V` and comparisons between orderings.

mod eigen;
mod potential;

use serde_json::{json, Value};

use crate::classifier::{invert, to_duality, KeoClass};
use crate::discretizer::{assemble_terms, grid_json, Grid, MassProfile, Provenance, Stencil};
use crate::error::SpectrumError;
use crate::ordering::OrderingSpec;
use crate::scalar::{Rational, Scalar};
use crate::surd::Surd;
use crate::Operator;

pub use eigen::{lowest_eigenpairs, EigenPair};
pub use potential::PotentialProfile;

/// Largest grid accepted by [`solve`].
pub const MAX_DENSE: usize = 4000;

/// Relative asymmetry `max|A − Aᵀ| / ‖A‖∞` above which [`solve`] refuses.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Target for `‖Hψ − Eψ‖/‖ψ‖`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// `keo + diag(V)`.
pub fn hamiltonian(keo: &Operator, v: &PotentialProfile) -> Result<Operator, SpectrumError> {
    let values = v.sample(&keo.grid)?;
    let mut h = keo.clone();
    for (i, value) in values.into_iter().enumerate() {
        h.matrix[(i, i)] += value;
    }
    h.potential = Some(v.to_string());
    Ok(h)
}

/// Lowest eigenvalues with their residuals.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub count_requested: usize,
    pub grid: Grid<f64>,
    pub hbar: f64,
    pub stencil: Stencil,
    pub provenance: Provenance,
    pub profile: String,
    pub potential: String,
}

impl SpectrumResult {
    pub fn ground(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": self.provenance.to_json(),
            "profile": self.profile,
            "potential": self.potential,
            "stencil": self.stencil,
            "hbar": self.hbar,
            "grid": grid_json(&self.grid),
            "count_requested": self.count_requested,
            "eigenvalues": self.eigenvalues,
            "residuals": self.residuals,
        })
    }

    /// `index,eigenvalue,residual` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,residual\n");
        for (i, (e, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            out.push_str(&format!("{i},{e},{r}\n"));
        }
        out
    }
}

/// Lowest `k` eigenvalues of a symmetric operator.
///
/// The residual bound is [`RESIDUAL_TOLERANCE`], relaxed to `64 ε ‖H‖∞`
/// when that is larger: on the finest grids the matrix entries reach
/// `~1/h²` and a single product `Hψ` already rounds at that level.
pub fn solve(h: &Operator, k: usize) -> Result<SpectrumResult, SpectrumError> {
    let n = h.n();
    if k == 0 {
        return Err(SpectrumError::ZeroCount);
    }
    if k > n {
        return Err(SpectrumError::TooManyEigenvalues { k, n });
    }
    if n > MAX_DENSE {
        return Err(SpectrumError::GridTooLarge { n, max: MAX_DENSE });
    }
    let norm = h.norm_inf();
    let asymmetry = h.asymmetry();
    if asymmetry > SYMMETRY_TOLERANCE * norm {
        return Err(SpectrumError::NotSymmetric { asymmetry });
    }
    let sym = (&h.matrix + h.matrix.transpose()) * 0.5;
    let pairs = lowest_eigenpairs(&sym, k);
    let bound = RESIDUAL_TOLERANCE.max(64.0 * f64::EPSILON * norm);
    if let Some(bad) = pairs.iter().find(|p| !(p.residual <= bound)) {
        return Err(SpectrumError::NoConvergence(bad.value));
    }
    Ok(SpectrumResult {
        eigenvalues: pairs.iter().map(|p| p.value).collect(),
        residuals: pairs.iter().map(|p| p.residual).collect(),
        count_requested: k,
        grid: h.grid,
        hbar: h.hbar,
        stencil: h.stencil,
        provenance: h.provenance.clone(),
        profile: h.profile.clone(),
        potential: h.potential.clone().unwrap_or_else(|| "zero".into()),
    })
}

/// Term-pathway Hamiltonian for `spec` and its lowest `k` eigenvalues.
pub fn spectrum<S: Scalar>(
    spec: &OrderingSpec<S>,
    profile: &MassProfile,
    v: &PotentialProfile,
    grid: &Grid<f64>,
    hbar: f64,
    stencil: Stencil,
    k: usize,
) -> Result<SpectrumResult, SpectrumError> {
    let keo = assemble_terms(spec, profile, grid, hbar, stencil)?;
    solve(&hamiltonian(&keo, v)?, k)
}

/// Spectra on `h`, `h/2`, `h/4` with Richardson extrapolation for a
/// second-order scheme.
#[derive(Clone, Debug)]
pub struct RefinementStudy {
    pub levels: Vec<SpectrumResult>,
    /// `(4E(h/4) − E(h/2))/3`.
    pub extrapolated: Vec<f64>,
    /// Distance between the two extrapolants from consecutive level pairs.
    pub error_estimate: Vec<f64>,
    /// `(E(h) − E(h/2)) / (E(h/2) − E(h/4))`, about 4 for a second-order scheme.
    pub observed_ratio: Vec<f64>,
}

impl RefinementStudy {
    pub fn to_json(&self) -> Value {
        json!({
            "levels": self.levels.iter().map(|l| json!({
                "n": l.grid.n(),
                "h": l.grid.h(),
                "eigenvalues": l.eigenvalues,
            })).collect::<Vec<_>>(),
            "extrapolated": self.extrapolated,
            "error_estimate": self.error_estimate,
            "observed_ratio": self.observed_ratio,
        })
    }
}

pub fn refinement_study(
    grid: &Grid<f64>,
    mut solve_on: impl FnMut(&Grid<f64>) -> Result<SpectrumResult, SpectrumError>,
) -> Result<RefinementStudy, SpectrumError> {
    let g2 = grid.refined();
    let g3 = g2.refined();
    let levels = vec![solve_on(grid)?, solve_on(&g2)?, solve_on(&g3)?];
    let k = levels.iter().map(|l| l.eigenvalues.len()).min().unwrap_or(0);
    let mut extrapolated = Vec::with_capacity(k);
    let mut error_estimate = Vec::with_capacity(k);
    let mut observed_ratio = Vec::with_capacity(k);
    for i in 0..k {
        let [e1, e2, e3] = [0, 1, 2].map(|l| levels[l].eigenvalues[i]);
        let r1 = (4.0 * e2 - e1) / 3.0;
        let r2 = (4.0 * e3 - e2) / 3.0;
        extrapolated.push(r2);
        error_estimate.push((r2 - r1).abs());
        observed_ratio.push((e1 - e2) / (e2 - e3));
    }
    Ok(RefinementStudy {
        levels,
        extrapolated,
        error_estimate,
        observed_ratio,
    })
}

/// One side of a θ-dual pair.
#[derive(Clone, Debug)]
pub struct DualSide {
    pub class: KeoClass,
    pub zeta: Rational,
    pub spec: OrderingSpec<Surd>,
    /// `ξ + √|θ|`.
    pub alpha: Surd,
    /// `ξ − √|θ|`.
    pub gamma: Surd,
    pub spectrum: SpectrumResult,
}

impl DualSide {
    fn to_json(&self) -> Value {
        json!({
            "class": self.class.label(),
            "zeta": self.zeta.to_string(),
            "alpha": self.alpha.to_string(),
            "gamma": self.gamma.to_string(),
            "spec": self.spec.canonical().to_string(),
            "eigenvalues": self.spectrum.eigenvalues,
            "residuals": self.spectrum.residuals,
        })
    }
}

/// Spectra of the von Roos ordering at `(ξ, ξ² − |θ|)` and the class-I
/// ordering at `(ξ, ξ² + |θ|)`, side by side. Both share `{α, γ}`; their
/// spectra are reported, not compared.
#[derive(Clone, Debug)]
pub struct DualPairReport {
    pub xi: Rational,
    pub theta: Rational,
    pub von_roos: DualSide,
    pub class_one: DualSide,
    pub exponents_identical: bool,
}

impl DualPairReport {
    pub fn to_json(&self) -> Value {
        json!({
            "params": {"xi": self.xi.to_string(), "theta": self.theta.to_string()},
            "grid": grid_json(&self.von_roos.spectrum.grid),
            "profile": self.von_roos.spectrum.profile,
            "potential": self.von_roos.spectrum.potential,
            "stencil": self.von_roos.spectrum.stencil,
            "exponents_identical": self.exponents_identical,
            "von_roos": self.von_roos.to_json(),
            "class_one": self.class_one.to_json(),
        })
    }
}

#[allow(clippy::too_many_arguments)]
pub fn dual_pair_report(
    xi: &Rational,
    theta: &Rational,
    profile: &MassProfile,
    v: &PotentialProfile,
    grid: &Grid<f64>,
    hbar: f64,
    stencil: Stencil,
    k: usize,
) -> Result<DualPairReport, SpectrumError> {
    let spread = if *theta < Rational::from_integer(0.into()) {
        -theta.clone()
    } else {
        theta.clone()
    };
    let side = |class: KeoClass, zeta: Rational| -> Result<DualSide, SpectrumError> {
        to_duality(xi, &zeta)?;
        let spec = invert(xi, &zeta, class)?;
        let t = spec.terms();
        let (alpha, gamma) = match class {
            KeoClass::VonRoos => (t[0].alpha.clone(), t[0].gamma.clone()),
            _ => (t[0].alpha.clone(), t[1].alpha.clone()),
        };
        let spectrum = spectrum(&spec, profile, v, grid, hbar, stencil, k)?;
        Ok(DualSide {
            class,
            zeta,
            spec,
            alpha,
            gamma,
            spectrum,
        })
    };
    let xi2 = xi * xi;
    let von_roos = side(KeoClass::VonRoos, &xi2 - &spread)?;
    let class_one = side(KeoClass::I, &xi2 + &spread)?;
    let exponents_identical =
        von_roos.alpha == class_one.alpha && von_roos.gamma == class_one.gamma;
    Ok(DualPairReport {
        xi: xi.clone(),
        theta: theta.clone(),
        von_roos,
        class_one,
        exponents_identical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::discretizer::assemble_linear;
    use crate::scalar::ratio;
    use std::f64::consts::PI;

    fn constant() -> MassProfile {
        MassProfile::constant(ratio(1, 1)).unwrap()
    }

    fn lorentzian() -> MassProfile {
        MassProfile::lorentzian(ratio(1, 1), ratio(1, 1)).unwrap()
    }

    #[test]
    fn square_well_levels() {
        let g = Grid::new(0.0, PI, 400).unwrap();
        let s = spectrum(&catalog("BDD").unwrap(), &constant(), &PotentialProfile::Zero, &g, 1.0, Stencil::Staggered, 4)
            .unwrap();
        for (j, e) in s.eigenvalues.iter().enumerate() {
            let exact = 0.5 * ((j + 1) * (j + 1)) as f64;
            assert!((e - exact).abs() < 1e-3 * exact, "{j}: {e}");
        }
        assert!(s.residuals.iter().all(|r| *r <= RESIDUAL_TOLERANCE));
    }

    #[test]
    fn central_stencil_matches_dense_decomposition() {
        let g = Grid::new(-1.0, 1.0, 41).unwrap();
        let keo = assemble_terms(&catalog("ZK").unwrap(), &lorentzian(), &g, 1.0, Stencil::Central).unwrap();
        let s = solve(&keo, 6).unwrap();
        let dense = nalgebra::SymmetricEigen::new((&keo.matrix + keo.matrix.transpose()) * 0.5);
        let mut all: Vec<f64> = dense.eigenvalues.iter().copied().collect();
        all.sort_by(f64::total_cmp);
        for (a, b) in s.eigenvalues.iter().zip(&all) {
            assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn non_symmetric_operator_is_refused() {
        let g = Grid::new(-1.0, 1.0, 20).unwrap();
        let params = crate::ordering::LinearParams::new(ratio(-1, 2), ratio(0, 1), ratio(1, 1));
        let keo = assemble_linear(&params, &lorentzian(), &g, 1.0, Stencil::Staggered).unwrap();
        assert!(matches!(solve(&keo, 1), Err(SpectrumError::NotSymmetric { .. })));
    }

    #[test]
    fn argument_checks() {
        let g = Grid::new(0.0, 1.0, 5).unwrap();
        let keo = assemble_terms(&catalog("BDD").unwrap(), &constant(), &g, 1.0, Stencil::Staggered).unwrap();
        assert!(matches!(solve(&keo, 0), Err(SpectrumError::ZeroCount)));
        assert!(matches!(solve(&keo, 6), Err(SpectrumError::TooManyEigenvalues { k: 6, n: 5 })));
        assert_eq!(solve(&keo, 5).unwrap().eigenvalues.len(), 5);
        let big = Grid::new(0.0, 1.0, MAX_DENSE + 1).unwrap();
        let keo = assemble_terms(&catalog("BDD").unwrap(), &constant(), &big, 1.0, Stencil::Staggered).unwrap();
        assert!(matches!(solve(&keo, 1), Err(SpectrumError::GridTooLarge { .. })));
    }

    #[test]
    fn zero_potential_leaves_the_matrix_alone() {
        let g = Grid::new(-1.0, 1.0, 10).unwrap();
        let keo = assemble_terms(&catalog("W").unwrap(), &lorentzian(), &g, 1.0, Stencil::Staggered).unwrap();
        let h = hamiltonian(&keo, &PotentialProfile::Zero).unwrap();
        assert_eq!(h.matrix, keo.matrix);
        let v = PotentialProfile::Sampled {
            name: "t".into(),
            values: vec![0.0; 9],
        };
        assert!(matches!(hamiltonian(&keo, &v), Err(SpectrumError::GridMismatch { .. })));
    }

    #[test]
    fn harmonic_hamiltonian_stays_symmetric() {
        let g = Grid::new(-1.0, 1.0, 50).unwrap();
        let keo = assemble_terms(&catalog("BDD").unwrap(), &lorentzian(), &g, 1.0, Stencil::Staggered).unwrap();
        let h = hamiltonian(&keo, &PotentialProfile::Harmonic { k: 3.0, x0: 0.0 }).unwrap();
        assert_eq!(h.asymmetry(), 0.0);
    }

    #[test]
    fn richardson_on_the_square_well() {
        let g = Grid::new(0.0, PI, 50).unwrap();
        let bdd = catalog("BDD").unwrap();
        let study = refinement_study(&g, |g| {
            spectrum(&bdd, &constant(), &PotentialProfile::Zero, g, 1.0, Stencil::Staggered, 2)
        })
        .unwrap();
        assert!((study.extrapolated[0] - 0.5).abs() <= study.error_estimate[0].max(1e-12));
        assert!((study.observed_ratio[0] - 4.0).abs() < 0.05);
    }

    #[test]
    fn self_dual_pair_has_identical_spectra() {
        let g = Grid::new(-1.0, 1.0, 40).unwrap();
        let r = dual_pair_report(&ratio(-1, 4), &ratio(0, 1), &lorentzian(), &PotentialProfile::Zero, &g, 1.0, Stencil::Staggered, 3)
            .unwrap();
        assert!(r.exponents_identical);
        assert_eq!(r.von_roos.spectrum.eigenvalues, r.class_one.spectrum.eigenvalues);
    }

    #[test]
    fn dual_pair_shares_exponents() {
        let g = Grid::new(-1.0, 1.0, 40).unwrap();
        let r = dual_pair_report(&ratio(-1, 4), &ratio(1, 16), &lorentzian(), &PotentialProfile::Zero, &g, 1.0, Stencil::Staggered, 3)
            .unwrap();
        assert!(r.exponents_identical);
        assert_eq!(r.von_roos.alpha.to_rational(), Some(ratio(0, 1)));
        assert_eq!(r.von_roos.gamma.to_rational(), Some(ratio(-1, 2)));
        assert_eq!(r.von_roos.zeta, ratio(0, 1));
        assert_eq!(r.class_one.zeta, ratio(1, 8));
        for side in [&r.von_roos, &r.class_one] {
            let e = &side.spectrum.eigenvalues;
            assert_eq!(e.len(), 3);
            assert!(e.windows(2).all(|w| w[0] <= w[1]));
        }
        let j = r.to_json();
        assert_eq!(j["von_roos"]["alpha"], "0");
        assert_eq!(j["class_one"]["gamma"], "-1/2");
    }

    #[test]
    fn dual_pair_outside_the_region_errors() {
        let g = Grid::new(-1.0, 1.0, 40).unwrap();
        let r = dual_pair_report(&ratio(-1, 2), &ratio(1, 4), &lorentzian(), &PotentialProfile::Zero, &g, 1.0, Stencil::Staggered, 1);
        assert!(matches!(r, Err(SpectrumError::Classify(_))));
    }

    #[test]
    fn outputs() {
        let g = Grid::new(0.0, 1.0, 5).unwrap();
        let s = spectrum(&catalog("BDD").unwrap(), &constant(), &PotentialProfile::Zero, &g, 1.0, Stencil::Staggered, 2)
            .unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("index,eigenvalue,residual\n0,"));
        assert_eq!(csv.lines().count(), 3);
        let j = s.to_json();
        assert_eq!(j["eigenvalues"].as_array().unwrap().len(), 2);
        assert_eq!(j["params"]["pathway"], "terms");
    }
}
