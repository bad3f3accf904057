//! Named orderings from the position-dependent-mass literature.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::CatalogError;
use crate::ordering::{BuildingBlock, OrderingSpec};
use crate::scalar::{parse_rational, ratio, Rational};

/// A catalog entry, with its parameters for the families.
#[derive(Clone, Debug, PartialEq)]
pub enum Named {
    /// BenDaniel–Duke, `½ p (1/m) p`.
    Bdd,
    /// Gora–Williams.
    Gw,
    /// Zhu–Kroemer.
    Zk,
    /// Mustafa–Mazharimousavi, MB at `α = −1/4`.
    Mm,
    Weyl,
    /// Li–Kuhn, LKDA at `α = −1/2`.
    Lk,
    /// Lima et al., equal-weight three-term form.
    Lal,
    /// Yan–Yee: `½[⅓ p (1/m) p + ⅔ m^(−½) p² m^(−½)]`.
    Yy,
    /// Dutra–Almeida four-term form, `α ≠ −1`.
    Da(Rational),
    /// Morrow–Brownstein `m^α p m^β p m^α`, `2α + β = −1`.
    Mb(Rational),
    /// Li–Kuhn/Dutra–Almeida `¼[m^α p m^β p + p m^β p m^α]`.
    Lkda(Rational),
    /// von Roos `¼[m^α p m^β p m^γ + m^γ p m^β p m^α]`.
    VonRoos(Rational, Rational),
}

/// Names accepted by [`Named::parse`], fixed entries first.
pub const CATALOG_NAMES: [&str; 12] = [
    "BDD", "GW", "ZK", "MM", "W", "LK", "Lal", "YY", "DA", "MB", "LKDA", "vR",
];

impl Named {
    /// Every entry without parameters.
    pub fn fixed() -> Vec<Named> {
        vec![
            Named::Bdd,
            Named::Gw,
            Named::Zk,
            Named::Mm,
            Named::Weyl,
            Named::Lk,
            Named::Lal,
            Named::Yy,
        ]
    }

    pub fn label(&self) -> &'static str {
        match self {
            Named::Bdd => "BDD",
            Named::Gw => "GW",
            Named::Zk => "ZK",
            Named::Mm => "MM",
            Named::Weyl => "W",
            Named::Lk => "LK",
            Named::Lal => "Lal",
            Named::Yy => "YY",
            Named::Da(_) => "DA",
            Named::Mb(_) => "MB",
            Named::Lkda(_) => "LKDA",
            Named::VonRoos(..) => "vR",
        }
    }

    pub fn parameters(&self) -> Vec<Rational> {
        match self {
            Named::Da(a) | Named::Mb(a) | Named::Lkda(a) => vec![a.clone()],
            Named::VonRoos(a, g) => vec![a.clone(), g.clone()],
            _ => vec![],
        }
    }

    /// Parses `BDD`, `W`, `DA(1/2)`, `vR(0,-1/2)`, ... Names are
    /// case-insensitive; `Weyl` and `L al.` are accepted aliases.
    pub fn parse(text: &str) -> Result<Named, CatalogError> {
        let text = text.trim();
        let (head, args) = match text.split_once('(') {
            Some((h, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| CatalogError::UnknownName(text.to_string()))?;
                let args = inner
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()?;
                (h.trim(), args)
            }
            None => (text, vec![]),
        };
        let key: String = head
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '.')
            .collect::<String>()
            .to_ascii_lowercase();
        let arity = |name: &'static str, expected: usize| {
            if args.len() == expected {
                Ok(())
            } else {
                Err(CatalogError::Arity {
                    name,
                    expected,
                    got: args.len(),
                })
            }
        };
        let named = match key.as_str() {
            "bdd" => arity("BDD", 0).map(|_| Named::Bdd)?,
            "gw" => arity("GW", 0).map(|_| Named::Gw)?,
            "zk" => arity("ZK", 0).map(|_| Named::Zk)?,
            "mm" => arity("MM", 0).map(|_| Named::Mm)?,
            "w" | "weyl" => arity("W", 0).map(|_| Named::Weyl)?,
            "lk" => arity("LK", 0).map(|_| Named::Lk)?,
            "lal" => arity("Lal", 0).map(|_| Named::Lal)?,
            "yy" => arity("YY", 0).map(|_| Named::Yy)?,
            "da" => arity("DA", 1).map(|_| Named::Da(args[0].clone()))?,
            "mb" => arity("MB", 1).map(|_| Named::Mb(args[0].clone()))?,
            "lkda" => arity("LKDA", 1).map(|_| Named::Lkda(args[0].clone()))?,
            "vr" => arity("vR", 2).map(|_| Named::VonRoos(args[0].clone(), args[1].clone()))?,
            _ => return Err(CatalogError::UnknownName(text.to_string())),
        };
        Ok(named)
    }

    /// The exact weighted-term spec.
    pub fn spec(&self) -> Result<OrderingSpec<Rational>, CatalogError> {
        let z = Rational::zero;
        let one = Rational::one;
        let half = || ratio(1, 2);
        let third = || ratio(1, 3);
        let b = |w: Rational, a: Rational, g: Rational| BuildingBlock::closed(w, a, g);
        let terms = match self {
            Named::Bdd => vec![b(one(), z(), z())],
            Named::Gw => vec![b(half(), -one(), z()), b(half(), z(), -one())],
            Named::Zk => vec![BuildingBlock::mirrored(one(), -half())],
            Named::Mm => vec![BuildingBlock::mirrored(one(), ratio(-1, 4))],
            Named::Weyl => vec![
                b(ratio(1, 4), -one(), z()),
                b(half(), z(), z()),
                b(ratio(1, 4), z(), -one()),
            ],
            Named::Lk => lkda(-half()),
            Named::Lal => vec![
                b(third(), -one(), z()),
                b(third(), z(), z()),
                b(third(), z(), -one()),
            ],
            Named::Yy => vec![
                b(third(), z(), z()),
                BuildingBlock::mirrored(ratio(2, 3), -half()),
            ],
            Named::Da(a) => {
                if *a == -one() {
                    return Err(CatalogError::OutOfDomain {
                        name: "DA",
                        reason: "alpha = -1 makes the normalization 1/(4(alpha+1)) singular"
                            .into(),
                    });
                }
                let norm = Rational::from_integer(2.into()) * (a + one());
                let wa = a / &norm;
                let w1 = one() / &norm;
                vec![
                    b(wa.clone(), -one(), z()),
                    b(wa, z(), -one()),
                    b(w1.clone(), a.clone(), z()),
                    b(w1, z(), a.clone()),
                ]
            }
            Named::Mb(a) => vec![BuildingBlock::mirrored(one(), a.clone())],
            Named::Lkda(a) => lkda(a.clone()),
            Named::VonRoos(a, g) => vec![
                b(half(), a.clone(), g.clone()),
                b(half(), g.clone(), a.clone()),
            ],
        };
        Ok(OrderingSpec::named(self.to_string(), terms))
    }
}

fn lkda(a: Rational) -> Vec<BuildingBlock<Rational>> {
    vec![
        BuildingBlock::closed(ratio(1, 2), a.clone(), Rational::zero()),
        BuildingBlock::closed(ratio(1, 2), Rational::zero(), a),
    ]
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.parameters();
        if params.is_empty() {
            return f.write_str(self.label());
        }
        let args: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}({})", self.label(), args.join(","))
    }
}

/// Looks up a catalog entry by name, e.g. `catalog("DA(1/2)")`.
pub fn catalog(name: &str) -> Result<OrderingSpec<Rational>, CatalogError> {
    Named::parse(name)?.spec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::LinearParams;

    fn params(name: &str) -> LinearParams<Rational> {
        catalog(name).unwrap().linear_params().unwrap()
    }

    #[test]
    fn every_entry_validates() {
        for name in [
            "BDD", "GW", "ZK", "MM", "W", "LK", "Lal", "YY", "DA(1/2)", "DA(-1/2)", "MB(-1/3)",
            "LKDA(-1/4)", "vR(0,-1/2)",
        ] {
            catalog(name).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn weyl_has_three_terms() {
        let w = catalog("W").unwrap();
        let weights: Vec<_> = w.terms().iter().map(|t| t.weight.clone()).collect();
        assert_eq!(weights, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
    }

    #[test]
    fn da_at_zero_degenerates_to_bdd() {
        let da = catalog("DA(0)").unwrap();
        let weights: Vec<_> = da.terms().iter().map(|t| t.weight.clone()).collect();
        assert_eq!(
            weights,
            vec![Rational::zero(), Rational::zero(), ratio(1, 2), ratio(1, 2)]
        );
        assert_eq!(da.canonical().terms(), catalog("BDD").unwrap().terms());
    }

    #[test]
    fn yan_yee_parameters() {
        assert_eq!(params("YY"), LinearParams::hermitian(ratio(-1, 3), ratio(1, 6)));
    }

    #[test]
    fn da_minus_one_is_out_of_domain() {
        assert!(matches!(
            catalog("DA(-1)"),
            Err(CatalogError::OutOfDomain { name: "DA", .. })
        ));
    }

    #[test]
    fn name_parsing() {
        assert_eq!(Named::parse("weyl").unwrap(), Named::Weyl);
        assert_eq!(Named::parse("L al.").unwrap(), Named::Lal);
        assert_eq!(
            Named::parse("vR(0, -1/2)").unwrap(),
            Named::VonRoos(ratio(0, 1), ratio(-1, 2))
        );
        assert!(matches!(Named::parse("XYZ"), Err(CatalogError::UnknownName(_))));
        assert!(matches!(Named::parse("DA"), Err(CatalogError::Arity { .. })));
        assert!(matches!(Named::parse("MB(0.5)"), Err(CatalogError::BadArgument(_))));
        assert_eq!(Named::VonRoos(ratio(0, 1), ratio(-1, 2)).to_string(), "vR(0,-1/2)");
    }
}
