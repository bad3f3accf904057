use nalgebra::{DMatrix, DVector, RealField};
use serde_json::{json, Value};

use crate::error::DiscretizeError;
use crate::ordering::{LinearParams, OrderingSpec};
use crate::scalar::Scalar;

use super::grid::to_f64;
use super::{Grid, MassProfile, Stencil};

/// How an operator matrix was built.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// Term-by-term composition of the building blocks.
    Terms { spec: String },
    /// Second-order part `p (1/m) p` plus first-order and multiplicative
    /// corrections from `(ξ, ζ, η)`.
    Linear { xi: f64, zeta: f64, eta: f64 },
}

impl Provenance {
    pub fn to_json(&self) -> Value {
        match self {
            Provenance::Terms { spec } => json!({"pathway": "terms", "spec": spec}),
            Provenance::Linear { xi, zeta, eta } => {
                json!({"pathway": "linear", "xi": xi, "zeta": zeta, "eta": eta})
            }
        }
    }
}

/// Dense real matrix of a discretized kinetic (or full) Hamiltonian.
///
/// The matrix is always real: the first-order term carried by a
/// non-Hermitian ordering is `(ħ²/2) η (1/m)' d/dx`, which has real
/// coefficients, so `η ≠ 0` shows up as a non-symmetric matrix.
#[derive(Clone, Debug)]
pub struct AssembledOperator<T: RealField> {
    pub matrix: DMatrix<T>,
    pub hbar: T,
    pub grid: Grid<T>,
    pub stencil: Stencil,
    pub provenance: Provenance,
    pub profile: String,
    /// Set once a potential has been added.
    pub potential: Option<String>,
}

impl<T: RealField + Copy> AssembledOperator<T> {
    pub fn n(&self) -> usize {
        self.grid.n()
    }

    /// `max |A − Aᵀ|`.
    pub fn asymmetry(&self) -> T {
        let a = &self.matrix;
        let mut worst = T::zero();
        for i in 0..a.nrows() {
            for j in i + 1..a.ncols() {
                worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
            }
        }
        worst
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        self.matrix
            .row_iter()
            .map(|r| r.iter().fold(T::zero(), |s, v| s + v.abs()))
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn apply(&self, psi: &DVector<T>) -> DVector<T> {
        &self.matrix * psi
    }

    /// Row-major dense CSV, shortest round-trip decimal per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.matrix.row_iter() {
            let cells: Vec<String> = row.iter().map(|v| format!("{}", to_f64(*v))).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// `{grid, hbar, stencil, profile, potential, provenance, matrix}`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<f64>> = self
            .matrix
            .row_iter()
            .map(|r| r.iter().map(|v| to_f64(*v)).collect())
            .collect();
        json!({
            "grid": grid_json(&self.grid),
            "hbar": to_f64(self.hbar),
            "stencil": self.stencil,
            "profile": self.profile,
            "potential": self.potential,
            "provenance": self.provenance.to_json(),
            "matrix": rows,
        })
    }
}

pub fn grid_json<T: RealField + Copy>(grid: &Grid<T>) -> Value {
    json!({
        "x_min": grid.x_min_f64(),
        "x_max": grid.x_max_f64(),
        "n": grid.n(),
        "h": to_f64(grid.h()),
    })
}

fn t<T: RealField>(v: f64) -> T {
    nalgebra::convert(v)
}

/// Central-difference `d/dx` on the interior points: `1/(2h)` above the
/// diagonal, `−1/(2h)` below, rows truncated at the Dirichlet ends.
pub fn derivative_matrix<T: RealField + Copy>(grid: &Grid<T>) -> DMatrix<T> {
    let n = grid.n();
    let c = T::one() / (t::<T>(2.0) * grid.h());
    DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            c
        } else if i == j + 1 {
            -c
        } else {
            T::zero()
        }
    })
}

/// Forward difference from the `n` interior points (plus the zero boundary
/// values) to the `n + 1` midpoints.
pub fn staggered_difference<T: RealField + Copy>(grid: &Grid<T>) -> DMatrix<T> {
    let n = grid.n();
    let c = T::one() / grid.h();
    DMatrix::from_fn(n + 1, n, |k, j| {
        if j == k {
            c
        } else if j + 1 == k {
            -c
        } else {
            T::zero()
        }
    })
}

/// `m^s` from `u = 1/m`. The exponents `0` and `−1` are exact so that a
/// `p (1/m) p` term built from the ordering terms matches the one built from `u`.
fn mass_power<T: RealField + Copy>(u: T, s: T) -> T {
    if s == T::zero() {
        T::one()
    } else if s == -T::one() {
        u
    } else {
        u.powf(-s)
    }
}

/// `1/m` sampled where the stencil needs it.
struct Samples<T> {
    /// Interior nodes.
    u: Vec<T>,
    /// Midpoints `k + 1/2`, `0 ≤ k ≤ n`, averaged from the neighbouring nodes.
    u_half: Vec<T>,
}

impl<T: RealField + Copy> Samples<T> {
    fn new(profile: &MassProfile, grid: &Grid<T>) -> Result<Self, DiscretizeError> {
        profile.check(grid)?;
        let nodes: Vec<T> = grid.nodes().into_iter().map(|x| profile.inv_m(x)).collect();
        let half = t::<T>(0.5);
        Ok(Samples {
            u: nodes[1..=grid.n()].to_vec(),
            u_half: nodes.windows(2).map(|w| (w[0] + w[1]) * half).collect(),
        })
    }

    fn middle(&self, stencil: Stencil, beta: T) -> Vec<T> {
        let src = match stencil {
            Stencil::Central => &self.u,
            Stencil::Staggered => &self.u_half,
        };
        src.iter().map(|&u| mass_power(u, beta)).collect()
    }
}

/// Adds `scale · ` (discretized `−d/dx · X · d/dx` between diagonal factors
/// `left` and `right`) to `a`. `scale = (ħ²/2) w` for a term `w m^α p m^β p m^γ`.
fn accumulate<T: RealField + Copy>(
    a: &mut DMatrix<T>,
    scale: T,
    left: &[T],
    mid: &[T],
    right: &[T],
    stencil: Stencil,
    h: T,
) {
    let n = left.len();
    match stencil {
        Stencil::Central => {
            // −D X D
            let c = -scale / (t::<T>(4.0) * h * h);
            for i in 0..n {
                let mut diag = T::zero();
                if i + 1 < n {
                    diag += mid[i + 1];
                }
                if i >= 1 {
                    diag += mid[i - 1];
                }
                a[(i, i)] -= c * left[i] * diag * right[i];
                if i + 2 < n {
                    a[(i, i + 2)] += c * left[i] * mid[i + 1] * right[i + 2];
                }
                if i >= 2 {
                    a[(i, i - 2)] += c * left[i] * mid[i - 1] * right[i - 2];
                }
            }
        }
        Stencil::Staggered => {
            // D₋ᵀ X D₋
            let c = scale / (h * h);
            for i in 0..n {
                a[(i, i)] += c * left[i] * (mid[i] + mid[i + 1]) * right[i];
                if i + 1 < n {
                    a[(i, i + 1)] -= c * left[i] * mid[i + 1] * right[i + 1];
                }
                if i >= 1 {
                    a[(i, i - 1)] -= c * left[i] * mid[i] * right[i - 1];
                }
            }
        }
    }
}

fn half_hbar2<T: RealField + Copy>(hbar: T) -> T {
    hbar * hbar * t::<T>(0.5)
}

/// Discretizes `½ Σ wᵢ m^αᵢ p m^βᵢ p m^γᵢ` term by term, every `p` replaced
/// by `−iħ` times the stencil's difference operator.
pub fn assemble_terms<S: Scalar, T: RealField + Copy>(
    spec: &OrderingSpec<S>,
    profile: &MassProfile,
    grid: &Grid<T>,
    hbar: T,
    stencil: Stencil,
) -> Result<AssembledOperator<T>, DiscretizeError> {
    spec.validate()?;
    let samples = Samples::new(profile, grid)?;
    let n = grid.n();
    let mut a = DMatrix::zeros(n, n);
    let k = half_hbar2(hbar);
    for term in spec.terms() {
        let [w, al, be, ga] = [&term.weight, &term.alpha, &term.beta, &term.gamma]
            .map(|v| t::<T>(v.to_f64()));
        let left: Vec<T> = samples.u.iter().map(|&u| mass_power(u, al)).collect();
        let right: Vec<T> = samples.u.iter().map(|&u| mass_power(u, ga)).collect();
        let mid = samples.middle(stencil, be);
        accumulate(&mut a, k * w, &left, &mid, &right, stencil, grid.h());
    }
    Ok(AssembledOperator {
        matrix: a,
        hbar,
        grid: *grid,
        stencil,
        provenance: Provenance::Terms {
            spec: spec.to_string(),
        },
        profile: profile.to_string(),
        potential: None,
    })
}

/// `(ħ²/2)[ξ (1/m)'' + ζ ((1/m)')² m]` at `x`.
pub fn effective_potential<S: Scalar, T: RealField + Copy>(
    params: &LinearParams<S>,
    profile: &MassProfile,
    x: T,
    hbar: T,
) -> Result<T, DiscretizeError> {
    let [u, d, dd] = profile.eval(x);
    if !(u > T::zero()) {
        return Err(DiscretizeError::NonPositiveMass {
            index: 0,
            x: to_f64(x),
        });
    }
    let xi: T = t(params.xi.to_f64());
    let zeta: T = t(params.zeta.to_f64());
    Ok(half_hbar2(hbar) * (xi * dd + zeta * d * d / u))
}

/// Discretizes `½ p (1/m) p + η (iħ/2)(1/m)' p + (ħ²/2)[ξ (1/m)'' + ζ ((1/m)')² m]`.
/// The first-order term always uses the central difference.
pub fn assemble_linear<S: Scalar, T: RealField + Copy>(
    params: &LinearParams<S>,
    profile: &MassProfile,
    grid: &Grid<T>,
    hbar: T,
    stencil: Stencil,
) -> Result<AssembledOperator<T>, DiscretizeError> {
    let samples = Samples::new(profile, grid)?;
    let n = grid.n();
    let mut a = DMatrix::zeros(n, n);
    let k = half_hbar2(hbar);
    let ones = vec![T::one(); n];
    let mid = samples.middle(stencil, -T::one());
    accumulate(&mut a, k, &ones, &mid, &ones, stencil, grid.h());

    let eta: T = t(params.eta.to_f64());
    let first = k * eta / (t::<T>(2.0) * grid.h());
    for (i, x) in grid.points().into_iter().enumerate() {
        a[(i, i)] += effective_potential(params, profile, x, hbar)?;
        if eta != T::zero() {
            let c = first * profile.d_inv_m(x);
            if i + 1 < n {
                a[(i, i + 1)] += c;
            }
            if i >= 1 {
                a[(i, i - 1)] -= c;
            }
        }
    }
    Ok(AssembledOperator {
        matrix: a,
        hbar,
        grid: *grid,
        stencil,
        provenance: Provenance::Linear {
            xi: params.xi.to_f64(),
            zeta: params.zeta.to_f64(),
            eta: params.eta.to_f64(),
        },
        profile: profile.to_string(),
        potential: None,
    })
}

/// `‖(A_terms − A_linear) ψ‖₂ / ‖ψ‖₂` for `ψ` sampled from `test_function`.
pub fn equivalence_defect<S: Scalar, T: RealField + Copy>(
    spec: &OrderingSpec<S>,
    profile: &MassProfile,
    grid: &Grid<T>,
    hbar: T,
    stencil: Stencil,
    test_function: impl Fn(T) -> T,
) -> Result<T, DiscretizeError> {
    let params = spec.linear_params()?;
    let terms = assemble_terms(spec, profile, grid, hbar, stencil)?;
    let linear = assemble_linear(&params, profile, grid, hbar, stencil)?;
    let psi = DVector::from_iterator(grid.n(), grid.points().into_iter().map(test_function));
    let diff = (terms.matrix - linear.matrix) * &psi;
    Ok(diff.norm() / psi.norm())
}

/// `‖(A − B) ψ‖₂ / ‖ψ‖₂` for two operators on the same grid.
pub fn action_difference<T: RealField + Copy>(
    a: &AssembledOperator<T>,
    b: &AssembledOperator<T>,
    test_function: impl Fn(T) -> T,
) -> T {
    let psi = DVector::from_iterator(a.n(), a.grid.points().into_iter().map(test_function));
    let diff = (&a.matrix - &b.matrix) * &psi;
    diff.norm() / psi.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ordering::BuildingBlock;
    use crate::scalar::{ratio, Rational};

    fn lorentzian() -> MassProfile {
        MassProfile::lorentzian(ratio(1, 1), ratio(1, 1)).unwrap()
    }

    fn constant() -> MassProfile {
        MassProfile::constant(ratio(1, 1)).unwrap()
    }

    fn bump(x: f64) -> f64 {
        (1.0 - x * x).powi(2)
    }

    fn grid(n: usize) -> Grid<f64> {
        Grid::new(-1.0, 1.0, n).unwrap()
    }

    #[test]
    fn derivative_matrix_small_case() {
        let d = derivative_matrix(&Grid::new(0.0, 4.0, 3).unwrap());
        let expect = DMatrix::from_row_slice(3, 3, &[0.0, 0.5, 0.0, -0.5, 0.0, 0.5, 0.0, -0.5, 0.0]);
        assert_eq!(d, expect);
        let d = derivative_matrix(&grid(17));
        assert_eq!(&d + d.transpose(), DMatrix::zeros(17, 17));
    }

    #[test]
    fn derivative_matrix_is_second_order() {
        let err = |n: usize| {
            let g = Grid::new(0.0, std::f64::consts::PI, n).unwrap();
            let d = derivative_matrix(&g);
            let s = DVector::from_iterator(n, g.points().into_iter().map(f64::sin));
            let c = DVector::from_iterator(n, g.points().into_iter().map(f64::cos));
            (d * s - c).amax()
        };
        let ratio = err(100) / err(201);
        assert!((3.8..4.2).contains(&ratio), "{ratio}");
    }

    #[test]
    fn constant_mass_bdd_is_the_wide_laplacian() {
        let g = grid(9);
        let m0 = ratio(2, 1);
        let profile = MassProfile::constant(m0).unwrap();
        let a = assemble_terms(&catalog("BDD").unwrap(), &profile, &g, 1.0, Stencil::Central).unwrap();
        let d = derivative_matrix(&g);
        let expect = -(&d * &d) * (1.0 / 4.0);
        assert!((a.matrix - expect).amax() < 1e-12);
    }

    #[test]
    fn constant_mass_linear_is_bitwise_bdd() {
        for stencil in [Stencil::Central, Stencil::Staggered] {
            let g = grid(12);
            let terms = assemble_terms(&catalog("BDD").unwrap(), &constant(), &g, 1.0, stencil).unwrap();
            let params = catalog("YY").unwrap().linear_params().unwrap();
            let linear = assemble_linear(&params, &constant(), &g, 1.0, stencil).unwrap();
            assert_eq!(terms.matrix, linear.matrix);
        }
    }

    #[test]
    fn bdd_pathways_coincide_on_a_varying_mass() {
        for stencil in [Stencil::Central, Stencil::Staggered] {
            let bdd = catalog("BDD").unwrap();
            let d = equivalence_defect(&bdd, &lorentzian(), &grid(40), 1.0, stencil, bump).unwrap();
            assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn mirrored_specs_give_symmetric_matrices() {
        for stencil in [Stencil::Central, Stencil::Staggered] {
            for name in ["GW", "ZK", "W", "YY", "vR(-1/3,-1/5)"] {
                let a = assemble_terms(&catalog(name).unwrap(), &lorentzian(), &grid(60), 1.0, stencil)
                    .unwrap();
                assert!(a.asymmetry() <= 1e-13 * a.norm_inf(), "{name} {stencil}");
            }
        }
    }

    #[test]
    fn single_non_hermitian_term_is_not_symmetric() {
        let spec = OrderingSpec::new(vec![BuildingBlock::closed(
            Rational::from_integer(1.into()),
            ratio(-1, 1),
            ratio(0, 1),
        )]);
        let a = assemble_terms(&spec, &lorentzian(), &grid(30), 1.0, Stencil::Staggered).unwrap();
        assert!(a.asymmetry() > 1e-3 * a.norm_inf());
    }

    fn ratio_for<S: Scalar>(spec: &OrderingSpec<S>, profile: &MassProfile, stencil: Stencil, n: usize) -> (f64, f64) {
        let e1 = equivalence_defect(spec, profile, &grid(n), 1.0, stencil, bump).unwrap();
        let e2 = equivalence_defect(spec, profile, &grid(2 * n + 1), 1.0, stencil, bump).unwrap();
        (e1, e1 / e2)
    }

    #[test]
    fn staggered_pathways_agree_to_second_order() {
        let profiles = [
            MassProfile::gaussian(ratio(1, 1), ratio(1, 2), ratio(1, 2)).unwrap(),
            MassProfile::step(ratio(1, 1), ratio(1, 2), ratio(1, 2)).unwrap(),
        ];
        for p in &profiles {
            for name in ["ZK", "MM", "W", "LK", "Lal", "YY"] {
                let (_, r) = ratio_for(&catalog(name).unwrap(), p, Stencil::Staggered, 100);
                assert!((3.5..=4.5).contains(&r), "{name} on {p}: {r}");
            }
        }
    }

    #[test]
    fn non_hermitian_term_converges_including_first_order_part() {
        let spec = OrderingSpec::new(vec![BuildingBlock::closed(
            Rational::from_integer(1.into()),
            ratio(-1, 1),
            ratio(0, 1),
        )]);
        let (_, r) = ratio_for(&spec, &lorentzian(), Stencil::Staggered, 100);
        assert!((3.5..=4.5).contains(&r), "{r}");
    }

    #[test]
    fn central_stencil_loses_an_order_at_the_boundary() {
        // (1/m)' is non-zero at both ends of [-1, 1] for this profile; the
        // truncated rows of D D are first-order there and drag the global
        // rate below 2.
        let (_, r) = ratio_for(&catalog("ZK").unwrap(), &lorentzian(), Stencil::Central, 100);
        assert!((2.5..3.2).contains(&r), "{r}");
    }

    #[test]
    fn effective_potential_at_the_origin() {
        let params = LinearParams::hermitian(ratio(-1, 3), ratio(1, 6));
        let v: f64 = effective_potential(&params, &lorentzian(), 0.0, 1.0).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-15);
        let v: f64 = effective_potential(&params, &constant(), 0.7, 1.0).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn hbar_scales_quadratically() {
        let spec = catalog("YY").unwrap();
        let a = assemble_terms(&spec, &lorentzian(), &grid(20), 1.0, Stencil::Staggered).unwrap();
        let b = assemble_terms(&spec, &lorentzian(), &grid(20), 3.0, Stencil::Staggered).unwrap();
        assert!((a.matrix * 9.0 - b.matrix).amax() < 1e-11);
    }

    #[test]
    fn assembles_in_single_precision() {
        let g = Grid::new(-1.0f32, 1.0, 40).unwrap();
        let a = assemble_terms(&catalog("ZK").unwrap(), &lorentzian(), &g, 1.0f32, Stencil::Staggered).unwrap();
        assert!(a.asymmetry() <= 1e-5 * a.norm_inf());
    }

    #[test]
    fn rejects_invalid_specs_and_masses() {
        let bad = OrderingSpec::new(vec![BuildingBlock::new(ratio(1, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1))]);
        assert!(matches!(
            assemble_terms(&bad, &constant(), &grid(5), 1.0, Stencil::Central),
            Err(DiscretizeError::Validation(_))
        ));
        let neg = MassProfile::custom("neg", |x: f64| [x, 1.0, 0.0]);
        assert!(matches!(
            assemble_terms(&catalog("BDD").unwrap(), &neg, &grid(5), 1.0, Stencil::Central),
            Err(DiscretizeError::NonPositiveMass { .. })
        ));
    }

    #[test]
    fn exports() {
        let a = assemble_terms(&catalog("BDD").unwrap(), &constant(), &Grid::new(0.0, 4.0, 3).unwrap(), 1.0, Stencil::Staggered)
            .unwrap();
        assert_eq!(a.to_csv(), "1,-0.5,0\n-0.5,1,-0.5\n0,-0.5,1\n");
        let j = a.to_json();
        assert_eq!(j["grid"]["n"], 3);
        assert_eq!(j["provenance"]["pathway"], "terms");
        assert_eq!(j["stencil"], "staggered");
        assert_eq!(j["matrix"][1][1], 1.0);
    }
}
