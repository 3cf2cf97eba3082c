//! File formats shared with the command-line tool.
//!
//! - complex documents: `{"n": <int>, "facets": [[<int>, ..], ..]}`
//! - bigraded tables: `{"n": .., "field": .., "entries": [{"i", "j", "beta"}, ..]}`
//! - polynomials: `{"d", "j", "kind", "m", "field", "coeffs"}`
//! - experiment tables: CSV plus a JSON mirror
//!
//! Every floating value is serialized with 17 significant digits
//! (`{:.16e}`), and polynomial coefficients are emitted as exact JSON
//! integers whatever their size.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex};
use crate::experiments::{ConvergenceRow, CovarianceCheck, VarianceScaling};
use crate::field::FieldSpec;
use crate::hochster::BigradedTable;
use crate::poly::IntPolynomial;
use crate::subsets::vertices_of;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot parse document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// On-disk form of a simplicial complex.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub n: usize,
    pub facets: Vec<Vec<usize>>,
}

/// Parses a complex document and applies the facet constructor.
pub fn complex_from_json(text: &str) -> Result<SimplicialComplex, IoError> {
    let doc: ComplexDoc = serde_json::from_str(text)?;
    Ok(SimplicialComplex::from_facets(doc.n, &doc.facets)?)
}

/// Serializes a complex as its maximal simplices, dimension-major then
/// lexicographic, so equal complexes dump to identical bytes.
pub fn complex_to_json(complex: &SimplicialComplex) -> String {
    let doc = ComplexDoc {
        n: complex.vertex_count(),
        facets: complex.facets().into_iter().map(vertices_of).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("complex doc serializes")
}

pub fn table_to_json(table: &BigradedTable) -> String {
    serde_json::to_string_pretty(table).expect("table serializes")
}

/// CSV rendering of a table: `i,j,beta` per nonzero entry, sorted by
/// `(j, i)`.
pub fn table_to_csv(table: &BigradedTable) -> String {
    let mut out = String::from("i,j,beta\n");
    for (i, j, beta) in table.iter() {
        out.push_str(&format!("{i},{j},{beta}\n"));
    }
    out
}

/// Kinds of limit polynomials emitted by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyKind {
    F,
    G,
    Var,
    Cov,
}

/// On-disk form of an exact polynomial.
#[derive(Debug, Serialize, Deserialize)]
pub struct PolyDoc {
    pub d: usize,
    pub j: usize,
    pub kind: PolyKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    pub field: FieldSpec,
    #[serde(
        serialize_with = "serialize_bigints",
        deserialize_with = "deserialize_bigints"
    )]
    pub coeffs: Vec<BigInt>,
}

impl PolyDoc {
    pub fn new(
        d: usize,
        j: usize,
        kind: PolyKind,
        m: Option<usize>,
        field: FieldSpec,
        poly: &IntPolynomial,
    ) -> Self {
        PolyDoc {
            d,
            j,
            kind,
            m,
            field,
            coeffs: poly.coeffs().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("poly doc serializes")
    }

    pub fn poly(&self) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.clone())
    }
}

fn serialize_bigints<S: Serializer>(coeffs: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(coeffs.len()))?;
    for c in coeffs {
        let number =
            serde_json::Number::from_str(&c.to_string()).map_err(serde::ser::Error::custom)?;
        seq.serialize_element(&number)?;
    }
    seq.end()
}

fn deserialize_bigints<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> Result<Vec<BigInt>, D::Error> {
    let numbers = Vec::<serde_json::Number>::deserialize(deserializer)?;
    numbers
        .into_iter()
        .map(|n| BigInt::from_str(&n.to_string()).map_err(serde::de::Error::custom))
        .collect()
}

/// `{:.16e}`: one leading digit plus sixteen more, 17 significant digits.
pub fn fmt_f64_17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes an `f64` as a raw JSON number carrying 17 significant
/// digits.
pub fn json_f64_17<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    serde_json::Number::from_str(&fmt_f64_17(*x))
        .map_err(serde::ser::Error::custom)?
        .serialize(serializer)
}

pub fn json_opt_f64_17<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => json_f64_17(v, serializer),
        None => serializer.serialize_none(),
    }
}

pub const CONVERGENCE_CSV_HEADER: &str = "d,j,i,p,n,trials,mean,std_err,limit,abs_dev";

pub fn convergence_to_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from(CONVERGENCE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.d,
            r.j,
            r.i,
            fmt_f64_17(r.p),
            r.n,
            r.trials,
            fmt_f64_17(r.mean),
            fmt_f64_17(r.std_err),
            fmt_f64_17(r.limit),
            fmt_f64_17(r.abs_dev),
        ));
    }
    out
}

pub const VARSCALE_CSV_HEADER: &str = "d,j,i,p,n,trials,mean,variance,excluded";

/// CSV rows plus a trailing comment line with the fitted slope.
pub fn variance_scaling_to_csv(out: &VarianceScaling) -> String {
    let mut text = String::from(VARSCALE_CSV_HEADER);
    text.push('\n');
    for r in &out.rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.d,
            r.j,
            r.i,
            fmt_f64_17(r.p),
            r.n,
            r.trials,
            fmt_f64_17(r.mean),
            fmt_f64_17(r.variance),
            r.excluded,
        ));
    }
    text.push_str(&format!(
        "# fitted_slope={} over {} cells\n",
        fmt_f64_17(out.slope),
        out.fitted_cells
    ));
    text
}

pub const COVCHECK_CSV_HEADER: &str = "d,j,i,m,n,p,trials,covariance,std_err,radius,exact";

pub fn covariance_check_to_csv(c: &CovarianceCheck) -> String {
    let exact = c.exact.map(fmt_f64_17).unwrap_or_default();
    format!(
        "{}\n{},{},{},{},{},{},{},{},{},{},{}\n",
        COVCHECK_CSV_HEADER,
        c.d,
        c.j,
        c.i,
        c.m,
        c.n,
        fmt_f64_17(c.p),
        c.trials,
        fmt_f64_17(c.covariance),
        fmt_f64_17(c.std_err),
        fmt_f64_17(c.radius),
        exact,
    )
}
