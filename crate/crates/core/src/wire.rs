//! JSON input formats.
//!
//! Rationals are strings `"num/den"` (or plain integers as strings). A series
//! carries no ring of its own; the ring comes from the enclosing document or
//! from the command line.
//!
//! ```json
//! {"n": 1, "D": 5, "coeffs": [[[0], "3/1"], [[1], "2/1"]],
//!  "tail": {"C": "1/1", "sigma": ["2/1"]}}
//! ```

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::localization::LocalizationSpec;
use crate::normed::{ModuleMap, NormFlavor, WeightedFreeModule};
use crate::poly::{Exponent, Poly};
use crate::scalars::{format_rational, parse_rational, BanachRing, Rational};
use crate::series::{DaggerPresentation, PolyRadius, Tail, TruncatedSeries};
use crate::tensor::TensorElement;

/// Parses `text`, reporting the JSON path of the first offending value.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            Error::invalid(e.into_inner().to_string())
        } else {
            Error::invalid(format!("at `{path}`: {}", e.into_inner()))
        }
    })
}

fn rationals(v: &[String], what: &str) -> Result<Vec<Rational>> {
    v.iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| Error::invalid(format!("at `{what}[{i}]`: {}", detail(e)))))
        .collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn radius(v: &[String], what: &str) -> Result<PolyRadius> {
    PolyRadius::new(rationals(v, what)?)
}

/// The message of `e` without a repeated "invalid input" prefix.
fn detail(e: Error) -> String {
    match e {
        Error::InvalidInput(msg) => msg,
        e => e.to_string(),
    }
}

fn context(what: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| {
        let msg = detail(e);
        match msg.strip_prefix("at `") {
            Some(rest) => Error::invalid(format!("at `{what}.{rest}")),
            None => Error::invalid(format!("at `{what}`: {msg}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailJson {
    #[serde(rename = "C")]
    pub c: String,
    pub sigma: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub n: usize,
    #[serde(rename = "D")]
    pub degree: u32,
    pub coeffs: Vec<(Exponent, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailJson>,
}

impl SeriesJson {
    pub fn to_series(&self, ring: &BanachRing) -> Result<TruncatedSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, (e, c))| Ok((e.clone(), parse_rational(c).map_err(context(&format!("coeffs[{i}]")))?)))
            .collect::<Result<Vec<_>>>()?;
        let tail = match &self.tail {
            None => None,
            Some(t) => Some(Tail {
                c: parse_rational(&t.c).map_err(context("tail.C"))?,
                sigma: radius(&t.sigma, "tail.sigma")?,
            }),
        };
        TruncatedSeries::new(ring.clone(), self.n, self.degree, coeffs, tail)
    }

    pub fn from_series(f: &TruncatedSeries) -> Self {
        SeriesJson {
            n: f.nvars(),
            degree: f.degree_bound(),
            coeffs: f.coeffs().iter().map(|(e, c)| (e.clone(), format_rational(c))).collect(),
            tail: f.tail().map(|t| TailJson {
                c: format_rational(&t.c),
                sigma: strings(t.sigma.components()),
            }),
        }
    }
}

/// A standalone series file: a [`SeriesJson`] that may also name its ring.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<BanachRing>,
    pub n: usize,
    #[serde(rename = "D")]
    pub degree: u32,
    pub coeffs: Vec<(Exponent, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailJson>,
}

impl SeriesFile {
    pub fn series(&self) -> SeriesJson {
        SeriesJson {
            n: self.n,
            degree: self.degree,
            coeffs: self.coeffs.clone(),
            tail: self.tail.clone(),
        }
    }

    /// The series over its own ring, or over `default` if none is named.
    pub fn to_series(&self, default: &BanachRing) -> Result<TruncatedSeries> {
        self.series().to_series(self.ring.as_ref().unwrap_or(default))
    }
}

/// `{"ring": ..., "weights": ["2/1", "3/1"], "flavor": "sum"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub ring: BanachRing,
    pub weights: Vec<String>,
    pub flavor: NormFlavor,
}

impl ModuleJson {
    pub fn to_module(&self) -> Result<WeightedFreeModule> {
        WeightedFreeModule::new(self.ring.clone(), rationals(&self.weights, "weights")?, self.flavor)
    }

    pub fn from_module(m: &WeightedFreeModule) -> Self {
        ModuleJson {
            ring: m.ring().clone(),
            weights: strings(m.weights()),
            flavor: m.flavor(),
        }
    }
}

/// A map between weighted free modules; the matrix is row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub source: ModuleJson,
    pub target: ModuleJson,
    pub matrix: Vec<Vec<String>>,
}

pub fn matrix_from_rows(rows: &[Vec<String>], cols: usize) -> Result<Matrix> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| rationals(r, &format!("matrix[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows, cols)
}

impl MapJson {
    pub fn to_map(&self) -> Result<ModuleMap> {
        let source = self.source.to_module()?;
        let target = self.target.to_module()?;
        let matrix = matrix_from_rows(&self.matrix, source.rank())?;
        ModuleMap::new(source, target, matrix)
    }
}

/// `{"terms": [[m, n], ...]}` for `Σ m ⊗ n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorElementJson {
    pub terms: Vec<(Vec<String>, Vec<String>)>,
}

impl TensorElementJson {
    pub fn to_element(&self, left: &WeightedFreeModule, right: &WeightedFreeModule) -> Result<TensorElement> {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, (m, n))| {
                Ok((
                    rationals(m, &format!("terms[{k}].0"))?,
                    rationals(n, &format!("terms[{k}].1"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        TensorElement::new(left.clone(), right.clone(), terms)
    }
}

/// `{"ring": ..., "rho": ["1"], "relations": [series, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub ring: BanachRing,
    pub rho: Vec<String>,
    #[serde(default)]
    pub relations: Vec<SeriesJson>,
}

fn series_list(v: &[SeriesJson], ring: &BanachRing, what: &str) -> Result<Vec<TruncatedSeries>> {
    v.iter()
        .enumerate()
        .map(|(i, s)| s.to_series(ring).map_err(context(&format!("{what}[{i}]"))))
        .collect()
}

impl AlgebraJson {
    pub fn to_presentation(&self) -> Result<DaggerPresentation> {
        let rho = radius(&self.rho, "rho")?;
        let relations = series_list(&self.relations, &self.ring, "relations")?;
        DaggerPresentation::new(self.ring.clone(), rho, relations)
    }

    pub fn from_presentation(a: &DaggerPresentation) -> Self {
        AlgebraJson {
            ring: a.ring().clone(),
            rho: strings(a.rho().components()),
            relations: a.relations().iter().map(SeriesJson::from_series).collect(),
        }
    }
}

/// A localization datum; series are over the algebra's ring and variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpecJson {
    Weierstrass {
        f: Vec<SeriesJson>,
        r: Vec<String>,
    },
    Laurent {
        #[serde(default)]
        f: Vec<SeriesJson>,
        #[serde(default)]
        r: Vec<String>,
        g: Vec<SeriesJson>,
        s: Vec<String>,
    },
    Rational {
        f: Vec<SeriesJson>,
        h: SeriesJson,
        r: Vec<String>,
        #[serde(default)]
        witness: Option<Vec<SeriesJson>>,
    },
}

impl SpecJson {
    pub fn to_spec(&self, ring: &BanachRing) -> Result<LocalizationSpec> {
        Ok(match self {
            SpecJson::Weierstrass { f, r } => LocalizationSpec::Weierstrass {
                f: series_list(f, ring, "f")?,
                r: radius(r, "r")?,
            },
            SpecJson::Laurent { f, r, g, s } => LocalizationSpec::Laurent {
                f: series_list(f, ring, "f")?,
                r: radius(r, "r")?,
                g: series_list(g, ring, "g")?,
                s: radius(s, "s")?,
            },
            SpecJson::Rational { f, h, r, witness } => LocalizationSpec::Rational {
                f: series_list(f, ring, "f")?,
                h: h.to_series(ring).map_err(context("h"))?,
                r: radius(r, "r")?,
                witness: witness.as_deref().map(|w| series_list(w, ring, "witness")).transpose()?,
            },
        })
    }
}

/// A target algebra `B` with the images of the variables of `A`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraMapJson {
    pub algebra: AlgebraJson,
    pub images: Vec<SeriesJson>,
}

impl AlgebraMapJson {
    pub fn to_parts(&self) -> Result<(DaggerPresentation, Vec<Poly>)> {
        let b = self.algebra.to_presentation()?;
        let images = series_list(&self.images, b.ring(), "images")?;
        Ok((b, images.iter().map(TruncatedSeries::to_poly).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn series_round_trip() {
        let text = r#"{"n":1,"D":5,"coeffs":[[[0],"3/1"],[[1],"2/1"]],"tail":{"C":"1/1","sigma":["2/1"]}}"#;
        let js: SeriesJson = parse(text).unwrap();
        let f = js.to_series(&BanachRing::integers()).unwrap();
        assert_eq!(f.coeff(&[1]), int(2));
        assert_eq!(f.tail().unwrap().sigma.components(), &[int(2)]);
        assert_eq!(SeriesJson::from_series(&f), js);
    }

    #[test]
    fn errors_point_at_the_path() {
        let text = r#"{"ring":{"kind":"integers"},"rho":["1"],"relations":[{"n":1,"D":1,"coeffs":[[[0],7]]}]}"#;
        let err = parse::<AlgebraJson>(text).unwrap_err().to_string();
        assert!(err.contains("relations[0].coeffs[0]"), "{err}");
        let bad = r#"{"ring":{"kind":"integers"},"weights":["x"],"flavor":"sum"}"#;
        let err = parse::<ModuleJson>(bad).unwrap().to_module().unwrap_err().to_string();
        assert!(err.contains("weights[0]"), "{err}");
    }

    #[test]
    fn specs() {
        let text = r#"{"kind":"laurent","g":[{"n":1,"D":1,"coeffs":[[[1],"1"]]}],"s":["1"]}"#;
        let spec = parse::<SpecJson>(text).unwrap().to_spec(&BanachRing::rationals()).unwrap();
        assert_eq!(spec.added_vars(), 1);
        let file: SeriesFile = parse(r#"{"ring":{"kind":"padic","p":3},"n":1,"D":0,"coeffs":[[[0],"3"]]}"#).unwrap();
        let f = file.to_series(&BanachRing::integers()).unwrap();
        assert_eq!(f.ring(), &BanachRing::padic(3).unwrap());
    }
}
