//! JSON documents for every value the toolkit reads or writes.
//!
//! Each document type mirrors a library type field-for-field but stays
//! purely textual: expressions travel as source text, rationals as exact
//! `"p/q"` strings, multi-indices as 1-based axis lists.  Conversion
//! *into* library types revalidates everything, so a hand-edited file
//! gets the same error messages as API misuse.  Unknown fields are
//! rejected to catch typos early.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{ChainError, CochainComplex, RationalMatrix};
use crate::expr::{Expr, ParseError};
use crate::forms::{DifferentialForm, FormError, MultiIndex, SmoothMap};
use crate::periods::{PeriodError, SingularChain, SmoothSimplex};
use crate::spaces::{BettiProfile, CoverSpec, SimplicialComplex, SpaceError};
use crate::Rational;

/// Anything that can go wrong reading a document.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad expression {text:?}: {source}")]
    BadExpr {
        text: String,
        #[source]
        source: ParseError,
    },
    #[error("bad rational constant {text:?}")]
    BadRational { text: String },
    #[error("document shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Period(#[from] PeriodError),
}

/// Shared (de)serialization surface: pretty JSON out, validated JSON in.
pub trait Document: Serialize + DeserializeOwned {
    fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

fn parse_expr(text: &str) -> Result<Expr, IoError> {
    Expr::parse(text).map_err(|source| IoError::BadExpr {
        text: text.to_string(),
        source,
    })
}

/// Parses `"p"` or `"p/q"` with arbitrary-precision integers.
pub fn parse_rational(text: &str) -> Result<Rational, IoError> {
    let bad = || IoError::BadRational {
        text: text.to_string(),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

// ---------------------------------------------------------------------
// Forms and maps
// ---------------------------------------------------------------------

/// One term of a form: coefficient text and the 1-based axes of its
/// `dx` wedge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: String,
    pub dx: Vec<usize>,
}

/// A differential form: `{"coords": ["x","y"], "degree": 1,
/// "terms": [{"coeff": "x*y", "dx": [1]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub coords: Vec<String>,
    pub degree: usize,
    pub terms: Vec<TermDoc>,
}

impl Document for FormDoc {}

impl FormDoc {
    pub fn of(form: &DifferentialForm) -> Self {
        FormDoc {
            coords: form.coords().to_vec(),
            degree: form.degree(),
            terms: form
                .terms()
                .map(|(index, coeff)| TermDoc {
                    coeff: coeff.to_string(),
                    dx: index.indices().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_form(&self) -> Result<DifferentialForm, IoError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let index = MultiIndex::new(term.dx.clone())?;
            terms.push((index, parse_expr(&term.coeff)?));
        }
        Ok(DifferentialForm::new(
            self.coords.clone(),
            self.degree,
            terms,
        )?)
    }
}

/// A smooth map between coordinate spaces: `{"source": ["t"],
/// "target": ["x","y"], "components": ["cos(t)","sin(t)"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub components: Vec<String>,
}

impl Document for MapDoc {}

impl MapDoc {
    pub fn of(map: &SmoothMap) -> Self {
        MapDoc {
            source: map.source().to_vec(),
            target: map.target().to_vec(),
            components: map.components().iter().map(Expr::to_string).collect(),
        }
    }

    pub fn to_map(&self) -> Result<SmoothMap, IoError> {
        let components = self
            .components
            .iter()
            .map(|text| parse_expr(text))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SmoothMap::new(
            self.source.clone(),
            self.target.clone(),
            components,
        )?)
    }
}

// ---------------------------------------------------------------------
// Cochain complexes
// ---------------------------------------------------------------------

/// A complex of exact-rational matrices.  `differentials[k]` is the
/// degree-`k` map as rows of `"p/q"` strings, `dims[k+1] × dims[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub dims: Vec<usize>,
    pub differentials: Vec<Vec<Vec<String>>>,
}

impl Document for ComplexDoc {}

impl ComplexDoc {
    pub fn of(complex: &CochainComplex) -> Self {
        let dims = complex.dims().to_vec();
        let differentials = (0..dims.len().saturating_sub(1))
            .map(|k| {
                let d = complex.differential(k).expect("differential exists");
                (0..d.rows())
                    .map(|i| (0..d.cols()).map(|j| d[(i, j)].to_string()).collect())
                    .collect()
            })
            .collect();
        ComplexDoc {
            dims,
            differentials,
        }
    }

    pub fn to_complex(&self) -> Result<CochainComplex, IoError> {
        let expected = self.dims.len().saturating_sub(1);
        if self.differentials.len() != expected {
            return Err(IoError::Shape(format!(
                "{} dims require {} differentials, found {}",
                self.dims.len(),
                expected,
                self.differentials.len()
            )));
        }
        let mut diffs = Vec::with_capacity(expected);
        for (k, rows) in self.differentials.iter().enumerate() {
            let (nrows, ncols) = (self.dims[k + 1], self.dims[k]);
            if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
                return Err(IoError::Shape(format!(
                    "differential {k} must be {nrows}×{ncols}"
                )));
            }
            let mut m = RationalMatrix::zeros(nrows, ncols);
            for (i, row) in rows.iter().enumerate() {
                for (j, text) in row.iter().enumerate() {
                    m[(i, j)] = parse_rational(text)?;
                }
            }
            diffs.push(m);
        }
        Ok(CochainComplex::new(self.dims.clone(), diffs)?)
    }
}

// ---------------------------------------------------------------------
// Simplicial complexes and Betti profiles
// ---------------------------------------------------------------------

/// Compactness/orientedness markers.  Defaults to compact (every finite
/// simplicial model is) and *not* oriented, since orientability is never
/// detected — it must be declared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsDoc {
    pub compact: bool,
    pub oriented: bool,
}

impl Default for FlagsDoc {
    fn default() -> Self {
        FlagsDoc {
            compact: true,
            oriented: false,
        }
    }
}

/// A simplicial complex by vertex count and simplex list; faces may be
/// omitted (the closure is computed): `{"n": 3, "simplices":
/// [[0,1],[1,2],[0,2]], "flags": {"compact": true, "oriented": true}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub n: usize,
    pub simplices: Vec<Vec<usize>>,
    #[serde(default)]
    pub flags: FlagsDoc,
}

impl Document for SpaceDoc {}

impl SpaceDoc {
    pub fn to_space(&self) -> Result<SimplicialComplex, IoError> {
        Ok(SimplicialComplex::from_maximal(self.n, &self.simplices)?)
    }

    /// Betti numbers of the complex together with the declared flags.
    pub fn to_profile(&self) -> Result<BettiProfile, IoError> {
        let space = self.to_space()?;
        Ok(BettiProfile::new(
            space.betti(),
            self.flags.compact,
            self.flags.oriented,
        ))
    }
}

/// A Betti profile given directly rather than computed from a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub betti: Vec<usize>,
    #[serde(default)]
    pub flags: FlagsDoc,
}

impl Document for ProfileDoc {}

impl ProfileDoc {
    pub fn of(profile: &BettiProfile) -> Self {
        ProfileDoc {
            betti: profile.numbers().to_vec(),
            flags: FlagsDoc {
                compact: profile.compact,
                oriented: profile.oriented,
            },
        }
    }

    pub fn to_profile(&self) -> BettiProfile {
        BettiProfile::new(self.betti.clone(), self.flags.compact, self.flags.oriented)
    }
}

// ---------------------------------------------------------------------
// Covers
// ---------------------------------------------------------------------

/// Cohomology of one piece of a cover.  Either a full Betti list or one
/// of two shorthands justified by contractibility: a single contractible
/// piece, or a disjoint union of `p` contractible components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatchDoc {
    Contractible { contractible: bool },
    DisjointContractibles { disjoint_contractibles: usize },
    Betti { betti: Vec<usize> },
}

impl PatchDoc {
    pub fn to_betti(&self) -> Result<Vec<usize>, IoError> {
        match self {
            PatchDoc::Contractible { contractible: true } => Ok(vec![1]),
            PatchDoc::Contractible {
                contractible: false,
            } => Err(IoError::Shape(
                "\"contractible\": false says nothing; give \"betti\" instead".into(),
            )),
            PatchDoc::DisjointContractibles {
                disjoint_contractibles: p,
            } => Ok(vec![*p]),
            PatchDoc::Betti { betti } => Ok(betti.clone()),
        }
    }
}

/// A two-piece cover for the Mayer–Vietoris solver.  `incidence` lists,
/// per intersection component, the containing component of each piece;
/// `j_ranks` optionally supplies comparison ranks at degrees ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    pub u: PatchDoc,
    pub v: PatchDoc,
    pub intersection: PatchDoc,
    pub incidence: Vec<(usize, usize)>,
    #[serde(default)]
    pub j_ranks: BTreeMap<usize, usize>,
}

impl Document for CoverDoc {}

impl CoverDoc {
    pub fn to_cover(&self) -> Result<CoverSpec, IoError> {
        let mut spec = CoverSpec::new(
            self.u.to_betti()?,
            self.v.to_betti()?,
            self.intersection.to_betti()?,
            self.incidence.clone(),
        )?;
        for (&degree, &rank) in &self.j_ranks {
            spec = spec.with_j_rank(degree, rank)?;
        }
        Ok(spec)
    }
}

// ---------------------------------------------------------------------
// Simplices and chains
// ---------------------------------------------------------------------

/// A parameterized smooth simplex: `{"degree": 1, "target": ["x","y"],
/// "components": ["cos(2*pi*t1)","sin(2*pi*t1)"]}` (parameters are
/// `t1..tk`; `pi` is built in).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexDoc {
    pub degree: usize,
    pub target: Vec<String>,
    pub components: Vec<String>,
}

impl Document for SimplexDoc {}

impl SimplexDoc {
    pub fn of(simplex: &SmoothSimplex) -> Self {
        SimplexDoc {
            degree: simplex.dim(),
            target: simplex.target().to_vec(),
            components: simplex
                .map()
                .components()
                .iter()
                .map(Expr::to_string)
                .collect(),
        }
    }

    pub fn to_simplex(&self) -> Result<SmoothSimplex, IoError> {
        let components = self
            .components
            .iter()
            .map(|text| parse_expr(text))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SmoothSimplex::from_components(
            self.degree,
            self.target.clone(),
            components,
        )?)
    }
}

/// One weighted term of a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainTermDoc {
    pub coeff: String,
    pub simplex: SimplexDoc,
}

/// A singular chain as a list of weighted simplices, all of one degree
/// over one target space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainDoc(pub Vec<ChainTermDoc>);

impl Document for ChainDoc {}

impl ChainDoc {
    pub fn of(chain: &SingularChain) -> Self {
        ChainDoc(
            chain
                .terms()
                .map(|(coeff, simplex)| ChainTermDoc {
                    coeff: coeff.to_string(),
                    simplex: SimplexDoc::of(simplex),
                })
                .collect(),
        )
    }

    pub fn to_chain(&self) -> Result<SingularChain, IoError> {
        let first = self.0.first().ok_or_else(|| {
            IoError::Shape("empty chain document: degree and target unknown".into())
        })?;
        let mut chain = SingularChain::zero(first.simplex.degree, first.simplex.target.clone());
        for term in &self.0 {
            let coeff = parse_rational(&term.coeff)?;
            chain = chain.add_scaled(coeff, term.simplex.to_simplex()?)?;
        }
        Ok(chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::angular_form;
    use crate::periods::{integrate_chain, winding_circle, QuadratureSpec};

    #[test]
    fn rational_strings_round_trip() {
        for text in ["3", "-3", "3/4", "-22/7", "0"] {
            assert_eq!(parse_rational(text).unwrap().to_string(), text);
        }
        assert_eq!(parse_rational("6/8").unwrap(), parse_rational("3/4").unwrap());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn form_documents_round_trip() {
        let form = angular_form();
        let doc = FormDoc::of(&form);
        let back = FormDoc::from_json(&doc.to_json()).unwrap();
        assert_eq!(back.to_form().unwrap(), form);

        let literal = r#"{"coords": ["x","y"], "degree": 1,
                          "terms": [{"coeff": "x*y", "dx": [2]}]}"#;
        let w = FormDoc::from_json(literal).unwrap().to_form().unwrap();
        assert_eq!(w.degree(), 1);

        // Axes are 1-based; 0 is rejected by the multi-index check.
        let bad = r#"{"coords": ["x"], "degree": 1,
                      "terms": [{"coeff": "1", "dx": [0]}]}"#;
        assert!(FormDoc::from_json(bad).unwrap().to_form().is_err());

        // Typos in field names fail at the JSON layer.
        assert!(FormDoc::from_json(r#"{"coordinates": [], "degree": 0, "terms": []}"#).is_err());
    }

    #[test]
    fn map_documents_round_trip() {
        let literal = r#"{"source": ["t"], "target": ["x","y"],
                          "components": ["cos(t)","sin(t)"]}"#;
        let map = MapDoc::from_json(literal).unwrap().to_map().unwrap();
        assert_eq!(map.source(), ["t".to_string()]);
        let doc = MapDoc::of(&map);
        assert_eq!(doc.to_map().unwrap(), map);
    }

    #[test]
    fn complex_documents_round_trip() {
        let literal = r#"{"dims": [2, 2],
                          "differentials": [[["-1", "1"], ["-1", "1"]]]}"#;
        let complex = ComplexDoc::from_json(literal).unwrap().to_complex().unwrap();
        assert_eq!(complex.betti(), vec![1, 1]);
        let doc = ComplexDoc::of(&complex);
        assert_eq!(doc.to_complex().unwrap(), complex);

        let short = r#"{"dims": [2, 2], "differentials": []}"#;
        assert!(matches!(
            ComplexDoc::from_json(short).unwrap().to_complex(),
            Err(IoError::Shape(_))
        ));
        let ragged = r#"{"dims": [2, 2], "differentials": [[["1"], ["0", "1"]]]}"#;
        assert!(ComplexDoc::from_json(ragged).unwrap().to_complex().is_err());
    }

    #[test]
    fn space_documents_compute_closure_and_flags() {
        let literal = r#"{"n": 3, "simplices": [[0,1],[1,2],[0,2]]}"#;
        let doc = SpaceDoc::from_json(literal).unwrap();
        let space = doc.to_space().unwrap();
        assert_eq!(space.betti(), vec![1, 1]);
        let profile = doc.to_profile().unwrap();
        assert!(profile.compact && !profile.oriented, "default flags");

        let flagged = r#"{"n": 3, "simplices": [[0,1],[1,2],[0,2]],
                          "flags": {"compact": true, "oriented": true}}"#;
        let profile = SpaceDoc::from_json(flagged).unwrap().to_profile().unwrap();
        assert!(profile.oriented);
    }

    #[test]
    fn cover_documents_accept_contractibility_shorthand() {
        let literal = r#"{
            "u": {"contractible": true},
            "v": {"contractible": true},
            "intersection": {"disjoint_contractibles": 2},
            "incidence": [[0, 0], [0, 0]]
        }"#;
        let spec = CoverDoc::from_json(literal).unwrap().to_cover().unwrap();
        assert_eq!(spec.solve().betti_numbers(), Some(vec![1, 1]));

        let with_ranks = r#"{
            "u": {"betti": [1, 1]},
            "v": {"betti": [1, 1]},
            "intersection": {"betti": [2, 2]},
            "incidence": [[0, 0], [0, 0]],
            "j_ranks": {"1": 1}
        }"#;
        let spec = CoverDoc::from_json(with_ranks).unwrap().to_cover().unwrap();
        assert_eq!(spec.solve().betti_numbers(), Some(vec![1, 2, 1]));

        let vacuous = r#"{
            "u": {"contractible": false},
            "v": {"contractible": true},
            "intersection": {"contractible": true},
            "incidence": [[0, 0]]
        }"#;
        assert!(CoverDoc::from_json(vacuous).unwrap().to_cover().is_err());
    }

    #[test]
    fn chain_documents_integrate() {
        let literal = r#"[{"coeff": "1", "simplex":
            {"degree": 1, "target": ["x","y"],
             "components": ["cos(2*pi*t1)","sin(2*pi*t1)"]}}]"#;
        let chain = ChainDoc::from_json(literal).unwrap().to_chain().unwrap();
        let period =
            integrate_chain(&angular_form(), &chain, &QuadratureSpec::default()).unwrap();
        assert!((period - 2.0 * std::f64::consts::PI).abs() < 1e-9);

        let doc = ChainDoc::of(&chain);
        assert_eq!(doc.to_chain().unwrap(), chain);

        assert!(ChainDoc(vec![]).to_chain().is_err());
    }

    #[test]
    fn simplex_documents_round_trip() {
        let circle = winding_circle(2);
        let doc = SimplexDoc::of(&circle);
        assert_eq!(doc.to_simplex().unwrap(), circle);
        let json = doc.to_json();
        assert_eq!(SimplexDoc::from_json(&json).unwrap(), doc);
    }
}
