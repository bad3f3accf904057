use keo_core::parser::render;
use keo_core::spectra::PotentialProfile;
use keo_core::{
    assemble_linear, assemble_terms, catalog, classify, dual, dual_pair_report, equivalence_defect,
    invert, parse, parse_rational, print_canonical, ratio, refinement_study, region_samples,
    spectrum, to_duality, ClassLabel, Grid, MassProfile, OrderingSpec, Rational, Scalar,
};
use serde::Serialize;

use crate::{CliError, Command, Discretization, Format, Pathway, Source};

/// Parameter samples for the one-parameter families in `table1`.
const FAMILY_SAMPLES: [(i64, i64); 5] = [(0, 1), (-1, 2), (-1, 3), (-1, 5), (2, 7)];
/// Second exponents paired with `FAMILY_SAMPLES` for the von Roos family.
const VON_ROOS_PARTNERS: [(i64, i64); 5] = [(-1, 2), (-1, 4), (0, 1), (-3, 5), (-1, 7)];

struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("serializable output");
    s.push('\n');
    s
}

fn emit(format: Format, value: &impl Serialize, table: impl FnOnce() -> Table) -> String {
    match format {
        Format::Json => json(value),
        Format::Csv => table().render(),
    }
}

#[derive(Serialize)]
struct Label {
    class: &'static str,
    boundaries: Vec<&'static str>,
}

impl From<&ClassLabel> for Label {
    fn from(l: &ClassLabel) -> Self {
        Label {
            class: l.class.label(),
            boundaries: l.boundaries.iter().map(|b| b.label()).collect(),
        }
    }
}

#[derive(Serialize)]
struct Params {
    xi: String,
    zeta: String,
    eta: String,
}

#[derive(Serialize)]
struct Term {
    weight: String,
    alpha: String,
    beta: String,
    gamma: String,
}

#[derive(Serialize)]
struct TableRow {
    name: String,
    parameters: Vec<String>,
    xi: String,
    zeta: String,
    eta: String,
    ordering: String,
}

#[derive(Serialize)]
struct DefectRow {
    name: String,
    profile: String,
    xi: String,
    zeta: String,
    n: usize,
    defect_n: f64,
    defect_2n: f64,
    ratio: f64,
}

/// Splits `name(k=v,k=v)` into its name and key/value pairs.
fn call(text: &str) -> Result<(String, Vec<(String, String)>), CliError> {
    let text = text.trim();
    let Some((name, rest)) = text.split_once('(') else {
        return Ok((text.to_string(), Vec::new()));
    };
    let inner = rest
        .strip_suffix(')')
        .ok_or_else(|| CliError::Usage(format!("{text:?}: missing closing parenthesis")))?;
    let mut pairs = Vec::new();
    for item in inner.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{text:?}: expected key=value, found {item:?}")))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok((name.trim().to_string(), pairs))
}

/// `p/q`, an integer, or a plain decimal such as `-0.25`, read exactly.
fn rational_or_decimal(text: &str) -> Option<Rational> {
    if let Ok(r) = parse_rational(text) {
        return Some(r);
    }
    let (int, frac) = text.trim().split_once('.')?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let negative = int.starts_with('-');
    let whole = parse_rational(if int.is_empty() || int == "-" { "0" } else { int }).ok()?;
    let scale: i64 = 10i64.checked_pow(frac.len() as u32)?;
    let part = ratio(frac.parse().ok()?, scale);
    Some(if negative { whole - part } else { whole + part })
}

fn mass_profile(text: &str) -> Result<MassProfile, CliError> {
    let (name, pairs) = call(text)?;
    let params = pairs
        .into_iter()
        .map(|(k, v)| match rational_or_decimal(&v) {
            Some(r) => Ok((k, r)),
            None => Err(CliError::Usage(format!("profile parameter {k}={v:?} is not a number"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MassProfile::from_name(&name, &params)?)
}

fn potential(text: &str) -> Result<PotentialProfile, CliError> {
    let (name, pairs) = call(text)?;
    let params = pairs
        .into_iter()
        .map(|(k, v)| match rational_or_decimal(&v) {
            Some(r) => Ok((k, Scalar::to_f64(&r))),
            None => v
                .parse::<f64>()
                .map(|x| (k.clone(), x))
                .map_err(|_| CliError::Usage(format!("potential parameter {k}={v:?} is not a number"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PotentialProfile::from_name(&name, &params)?)
}

fn ordering(source: &Source) -> Result<OrderingSpec<Rational>, CliError> {
    match (&source.name, &source.expr) {
        (Some(name), _) => Ok(catalog(name)?),
        (None, Some(expr)) => Ok(parse(expr)?),
        (None, None) => Err(CliError::Usage("one of --name or --expr is required".into())),
    }
}

fn grid(d: &Discretization) -> Result<Grid<f64>, CliError> {
    Ok(Grid::new(d.xmin, d.xmax, d.n)?)
}

fn params_of(spec: &OrderingSpec<Rational>) -> Result<Params, CliError> {
    let p = spec.linear_params()?;
    Ok(Params {
        xi: p.xi.to_string(),
        zeta: p.zeta.to_string(),
        eta: p.eta.to_string(),
    })
}

/// The literature orderings with their parameters: fixed entries, then
/// each family at its sample parameters.
fn table1_rows() -> Result<Vec<TableRow>, CliError> {
    let mut names: Vec<String> = ["BDD", "GW", "ZK", "MM", "W", "LK", "Lal"].map(String::from).to_vec();
    for family in ["DA", "MB", "LKDA"] {
        names.extend(FAMILY_SAMPLES.iter().map(|&(p, q)| format!("{family}({})", ratio(p, q))));
    }
    for (&(a, b), &(c, d)) in FAMILY_SAMPLES.iter().zip(&VON_ROOS_PARTNERS) {
        names.push(format!("vR({},{})", ratio(a, b), ratio(c, d)));
    }
    names
        .into_iter()
        .map(|full| {
            let named = keo_core::Named::parse(&full)?;
            let spec = named.spec()?;
            let p = params_of(&spec)?;
            Ok(TableRow {
                name: named.label().to_string(),
                parameters: named.parameters().iter().map(|r| r.to_string()).collect(),
                xi: p.xi,
                zeta: p.zeta,
                eta: p.eta,
                ordering: print_canonical(&spec),
            })
        })
        .collect()
}

fn bump(x_min: f64, x_max: f64) -> impl Fn(f64) -> f64 {
    move |x| {
        let s = (2.0 * x - x_min - x_max) / (x_max - x_min);
        (1.0 - s * s).powi(2)
    }
}

pub fn execute(command: &Command, format: Format) -> Result<String, CliError> {
    match command {
        Command::Classify(point) => {
            let labels = classify(&point.xi, &point.zeta)?;
            #[derive(Serialize)]
            struct Out {
                xi: String,
                zeta: String,
                labels: Vec<Label>,
            }
            let out = Out {
                xi: point.xi.to_string(),
                zeta: point.zeta.to_string(),
                labels: labels.iter().map(Label::from).collect(),
            };
            Ok(emit(format, &out, || Table {
                header: &["xi", "zeta", "class", "boundaries"],
                rows: out
                    .labels
                    .iter()
                    .map(|l| vec![out.xi.clone(), out.zeta.clone(), l.class.into(), l.boundaries.join(";")])
                    .collect(),
            }))
        }
        Command::Params(source) => {
            let p = params_of(&ordering(source)?)?;
            Ok(emit(format, &p, || Table {
                header: &["xi", "zeta", "eta"],
                rows: vec![vec![p.xi.clone(), p.zeta.clone(), p.eta.clone()]],
            }))
        }
        Command::Invert { point, class } => {
            let spec = invert(&point.xi, &point.zeta, *class)?.canonical();
            #[derive(Serialize)]
            struct Out {
                class: &'static str,
                xi: String,
                zeta: String,
                ordering: String,
                terms: Vec<Term>,
            }
            let out = Out {
                class: class.label(),
                xi: point.xi.to_string(),
                zeta: point.zeta.to_string(),
                ordering: render(&spec),
                terms: spec
                    .terms()
                    .iter()
                    .map(|t| Term {
                        weight: t.weight.to_string(),
                        alpha: t.alpha.to_string(),
                        beta: t.beta.to_string(),
                        gamma: t.gamma.to_string(),
                    })
                    .collect(),
            };
            Ok(emit(format, &out, || Table {
                header: &["weight", "alpha", "beta", "gamma"],
                rows: out
                    .terms
                    .iter()
                    .map(|t| vec![t.weight.clone(), t.alpha.clone(), t.beta.clone(), t.gamma.clone()])
                    .collect(),
            }))
        }
        Command::Dual(point) => {
            let d = to_duality(&point.xi, &point.zeta)?;
            let image = dual(&d)?;
            let labels = classify(&image.xi, &image.zeta())?;
            #[derive(Serialize)]
            struct Side {
                xi: String,
                zeta: String,
                theta: String,
            }
            #[derive(Serialize)]
            struct Out {
                point: Side,
                dual: Side,
                self_dual: bool,
                dual_labels: Vec<Label>,
            }
            let side = |p: &keo_core::DualityParams<Rational>| Side {
                xi: p.xi.to_string(),
                zeta: p.zeta().to_string(),
                theta: p.theta.to_string(),
            };
            let out = Out {
                point: side(&d),
                dual: side(&image),
                self_dual: d.is_self_dual(),
                dual_labels: labels.iter().map(Label::from).collect(),
            };
            Ok(emit(format, &out, || Table {
                header: &["xi", "zeta", "theta", "dual_zeta", "dual_theta", "self_dual"],
                rows: vec![vec![
                    out.point.xi.clone(),
                    out.point.zeta.clone(),
                    out.point.theta.clone(),
                    out.dual.zeta.clone(),
                    out.dual.theta.clone(),
                    out.self_dual.to_string(),
                ]],
            }))
        }
        Command::Table1 => {
            let rows = table1_rows()?;
            Ok(emit(format, &rows, || Table {
                header: &["name", "parameters", "xi", "zeta", "eta", "ordering"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.name.clone(),
                            r.parameters.join(";"),
                            r.xi.clone(),
                            r.zeta.clone(),
                            r.eta.clone(),
                            r.ordering.clone(),
                        ]
                    })
                    .collect(),
            }))
        }
        Command::Region { resolution } => {
            #[derive(Serialize)]
            struct Row {
                xi: String,
                zeta: String,
                class: &'static str,
                boundaries: Vec<&'static str>,
            }
            let mut rows = Vec::new();
            for s in region_samples(*resolution)? {
                let (xi, zeta) = (s.xi.to_string(), s.zeta.to_string());
                for l in &s.labels {
                    let l = Label::from(l);
                    rows.push(Row {
                        xi: xi.clone(),
                        zeta: zeta.clone(),
                        class: l.class,
                        boundaries: l.boundaries,
                    });
                }
            }
            Ok(emit(format, &rows, || Table {
                header: &["xi", "zeta", "class", "boundaries"],
                rows: rows
                    .iter()
                    .map(|r| vec![r.xi.clone(), r.zeta.clone(), r.class.into(), r.boundaries.join(";")])
                    .collect(),
            }))
        }
        Command::Assemble { source, grid: d, pathway } => {
            let spec = ordering(source)?;
            let profile = mass_profile(&d.profile)?;
            let g = grid(d)?;
            let op = match pathway {
                Pathway::Terms => assemble_terms(&spec, &profile, &g, d.hbar, d.stencil)?,
                Pathway::Linear => assemble_linear(&spec.linear_params()?, &profile, &g, d.hbar, d.stencil)?,
            };
            Ok(match format {
                Format::Json => json(&op.to_json()),
                Format::Csv => op.to_csv(),
            })
        }
        Command::Defect { names, profiles, n, xmin, xmax, hbar, stencil } => {
            let coarse = Grid::new(*xmin, *xmax, *n)?;
            let fine = Grid::new(*xmin, *xmax, 2 * n)?;
            let psi = bump(*xmin, *xmax);
            let mut rows = Vec::new();
            for name in names {
                let spec = catalog(name)?;
                let p = params_of(&spec)?;
                for text in profiles {
                    let profile = mass_profile(text)?;
                    let d1 = equivalence_defect(&spec, &profile, &coarse, *hbar, *stencil, &psi)?;
                    let d2 = equivalence_defect(&spec, &profile, &fine, *hbar, *stencil, &psi)?;
                    rows.push(DefectRow {
                        name: name.clone(),
                        profile: profile.to_string(),
                        xi: p.xi.clone(),
                        zeta: p.zeta.clone(),
                        n: *n,
                        defect_n: d1,
                        defect_2n: d2,
                        ratio: d1 / d2,
                    });
                }
            }
            Ok(emit(format, &rows, || Table {
                header: &["name", "profile", "xi", "zeta", "n", "defect_n", "defect_2n", "ratio"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.name.clone(),
                            r.profile.clone(),
                            r.xi.clone(),
                            r.zeta.clone(),
                            r.n.to_string(),
                            r.defect_n.to_string(),
                            r.defect_2n.to_string(),
                            r.ratio.to_string(),
                        ]
                    })
                    .collect(),
            }))
        }
        Command::Spectrum { source, grid: d, potential: v, k, refine } => {
            let spec = ordering(source)?;
            let profile = mass_profile(&d.profile)?;
            let v = potential(v)?;
            let g = grid(d)?;
            if *refine {
                let study = refinement_study(&g, |g| spectrum(&spec, &profile, &v, g, d.hbar, d.stencil, *k))?;
                return Ok(emit(format, &study.to_json(), || Table {
                    header: &["index", "extrapolated", "error_estimate", "observed_ratio"],
                    rows: (0..study.extrapolated.len())
                        .map(|i| {
                            vec![
                                i.to_string(),
                                study.extrapolated[i].to_string(),
                                study.error_estimate[i].to_string(),
                                study.observed_ratio[i].to_string(),
                            ]
                        })
                        .collect(),
                }));
            }
            let s = spectrum(&spec, &profile, &v, &g, d.hbar, d.stencil, *k)?;
            Ok(match format {
                Format::Json => json(&s.to_json()),
                Format::Csv => s.to_csv(),
            })
        }
        Command::Dualpair { xi, theta, grid: d, potential: v, k } => {
            let profile = mass_profile(&d.profile)?;
            let v = potential(v)?;
            let g = grid(d)?;
            let r = dual_pair_report(xi, theta, &profile, &v, &g, d.hbar, d.stencil, *k)?;
            Ok(emit(format, &r.to_json(), || Table {
                header: &["side", "class", "zeta", "index", "eigenvalue"],
                rows: [("von_roos", &r.von_roos), ("class_one", &r.class_one)]
                    .iter()
                    .flat_map(|(side, s)| {
                        s.spectrum.eigenvalues.iter().enumerate().map(move |(i, e)| {
                            vec![
                                side.to_string(),
                                s.class.label().to_string(),
                                s.zeta.to_string(),
                                i.to_string(),
                                e.to_string(),
                            ]
                        })
                    })
                    .collect(),
            }))
        }
    }
}
