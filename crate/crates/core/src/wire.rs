//! JSON interchange formats. Serialization is canonical: terms are emitted in
//! graded-lex order and residues as decimal strings in `[0, p^N)`, so equal
//! values always produce identical bytes.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mahler::InterpolatedFlow;
use crate::orbit::{OrbitQuery, ResidueClass, SolutionReport, Target};
use crate::padic::{parse_padic, parse_rational, PAdicInt, PrimeContext};
use crate::series::{AnalyticMap, MultiSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicJson {
    pub p: u64,
    pub precision: u32,
    pub residue: String,
}

impl From<&PAdicInt> for PAdicJson {
    fn from(x: &PAdicInt) -> Self {
        Self {
            p: x.ctx().p(),
            precision: x.known_precision(),
            residue: x.residue().to_string(),
        }
    }
}

impl TryFrom<&PAdicJson> for PAdicInt {
    type Error = Error;

    fn try_from(j: &PAdicJson) -> Result<Self> {
        let ctx = PrimeContext::new(j.p, j.precision)?;
        parse_padic(&ctx, &j.residue)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub nvars: usize,
    pub p: u64,
    pub precision: u32,
    pub terms: Vec<TermJson>,
}

impl From<&MultiSeries> for SeriesJson {
    fn from(s: &MultiSeries) -> Self {
        Self {
            nvars: s.nvars(),
            p: s.ctx().p(),
            precision: s.ctx().precision(),
            terms: s
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.exps().to_vec(),
                    coef: c.to_string(),
                })
                .collect(),
        }
    }
}

impl SeriesJson {
    /// Parse with an explicit degree cap (at least the largest degree present).
    pub fn to_series(&self, min_cap: u32) -> Result<MultiSeries> {
        let ctx = PrimeContext::new(self.p, self.precision)?;
        let cap = self
            .terms
            .iter()
            .map(|t| t.exp.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
            .max(min_cap);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let (num, den) = parse_rational(&t.coef)?;
                if den != BigInt::from(1) {
                    let x = PAdicInt::from_ratio(&ctx, &num, &den)?;
                    Ok((t.exp.clone(), BigInt::from(x.residue().clone())))
                } else {
                    Ok((t.exp.clone(), num))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        MultiSeries::from_terms(&ctx, self.nvars, cap, terms)
    }
}

impl TryFrom<&SeriesJson> for MultiSeries {
    type Error = Error;

    fn try_from(j: &SeriesJson) -> Result<Self> {
        j.to_series(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub d: usize,
    pub components: Vec<SeriesJson>,
}

impl From<&AnalyticMap> for MapJson {
    fn from(f: &AnalyticMap) -> Self {
        Self {
            d: f.dim(),
            components: f.components().iter().map(SeriesJson::from).collect(),
        }
    }
}

impl TryFrom<&MapJson> for AnalyticMap {
    type Error = Error;

    fn try_from(j: &MapJson) -> Result<Self> {
        if j.components.len() != j.d {
            return Err(Error::DimensionMismatch {
                expected: j.d,
                got: j.components.len(),
            });
        }
        let cap = j
            .components
            .iter()
            .flat_map(|c| c.terms.iter().map(|t| t.exp.iter().sum::<u32>()))
            .max()
            .unwrap_or(1)
            .max(1);
        let comps = j
            .components
            .iter()
            .map(|c| c.to_series(cap))
            .collect::<Result<Vec<_>>>()?;
        AnalyticMap::new(comps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowJson {
    pub d: usize,
    pub p: u64,
    pub guaranteed_precision: u32,
    pub n_degree: usize,
    /// `coefficients[i][k]` is the coefficient of `n^k` in component `i`.
    pub coefficients: Vec<Vec<SeriesJson>>,
}

impl From<&InterpolatedFlow> for FlowJson {
    fn from(flow: &InterpolatedFlow) -> Self {
        let d = flow.dim();
        Self {
            d,
            p: flow.ctx().p(),
            guaranteed_precision: flow.guaranteed_precision(),
            n_degree: flow.n_degree(),
            coefficients: (0..d)
                .map(|i| {
                    (0..=flow.n_degree() as u32)
                        .map(|k| SeriesJson::from(&flow.n_coefficient(i, k)))
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<&FlowJson> for InterpolatedFlow {
    type Error = Error;

    fn try_from(j: &FlowJson) -> Result<Self> {
        if j.coefficients.len() != j.d {
            return Err(Error::DimensionMismatch {
                expected: j.d,
                got: j.coefficients.len(),
            });
        }
        let ctx = PrimeContext::new(j.p, j.guaranteed_precision)?;
        let mut comps = Vec::with_capacity(j.d);
        for per_power in &j.coefficients {
            if per_power.len() > j.n_degree + 1 {
                return Err(Error::InvalidInput(format!(
                    "{} powers of n listed for n_degree {}",
                    per_power.len(),
                    j.n_degree
                )));
            }
            let mut terms = Vec::new();
            for (k, s) in per_power.iter().enumerate() {
                if s.nvars != j.d || s.p != j.p || s.precision != j.guaranteed_precision {
                    return Err(Error::InvalidInput(
                        "flow coefficient series disagree with the flow header".into(),
                    ));
                }
                for (m, c) in s.to_series(1)?.terms() {
                    let mut e = m.exps().to_vec();
                    e.push(k as u32);
                    terms.push((e, BigInt::from(c.clone())));
                }
            }
            let cap = terms
                .iter()
                .map(|(e, _)| e.iter().sum::<u32>())
                .max()
                .unwrap_or(1);
            comps.push(MultiSeries::from_terms(&ctx, j.d + 1, cap, terms)?);
        }
        InterpolatedFlow::from_parts(comps, j.guaranteed_precision, j.n_degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetJson {
    Point(Vec<String>),
    Coordinate { index: usize, value: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryJson {
    pub map: MapJson,
    pub x0: Vec<String>,
    pub target: TargetJson,
    pub precision: u32,
    #[serde(default)]
    pub search_bound: u64,
}

impl TryFrom<&QueryJson> for OrbitQuery {
    type Error = Error;

    fn try_from(j: &QueryJson) -> Result<Self> {
        let f = AnalyticMap::try_from(&j.map)?;
        let ctx = f.ctx().with_precision(j.precision)?;
        let parse_all = |v: &[String]| -> Result<Vec<PAdicInt>> {
            v.iter().map(|s| parse_padic(&ctx, s)).collect()
        };
        let target = match &j.target {
            TargetJson::Point(v) => Target::Point(parse_all(v)?),
            TargetJson::Coordinate { index, value } => Target::Coordinate {
                index: *index,
                value: parse_padic(&ctx, value)?,
            },
        };
        Ok(OrbitQuery {
            x0: parse_all(&j.x0)?,
            f,
            target,
            precision: j.precision,
            search_bound: j.search_bound,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub residue: String,
    pub modulus_exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub p: u64,
    pub precision: u32,
    pub verified: Vec<u64>,
    pub residue_classes: Vec<ClassJson>,
    pub obstruction: bool,
    pub note: String,
}

pub const CLASS_NOTE: &str =
    "residue classes are necessary conditions on n; a class may contain no actual hit";

impl From<&SolutionReport> for ReportJson {
    fn from(r: &SolutionReport) -> Self {
        Self {
            p: r.p,
            precision: r.precision,
            verified: r.verified.clone(),
            residue_classes: r
                .residue_classes
                .iter()
                .map(|c| ClassJson {
                    residue: c.residue.to_string(),
                    modulus_exponent: c.exponent,
                })
                .collect(),
            obstruction: r.obstruction,
            note: CLASS_NOTE.to_string(),
        }
    }
}

impl TryFrom<&ReportJson> for SolutionReport {
    type Error = Error;

    fn try_from(j: &ReportJson) -> Result<Self> {
        let residue_classes = j
            .residue_classes
            .iter()
            .map(|c| {
                Ok(ResidueClass {
                    residue: c
                        .residue
                        .parse::<BigUint>()
                        .map_err(|_| Error::InvalidInput(format!("bad residue {:?}", c.residue)))?,
                    exponent: c.modulus_exponent,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SolutionReport {
            p: j.p,
            precision: j.precision,
            verified: j.verified.clone(),
            residue_classes,
            obstruction: j.obstruction,
        })
    }
}

/// Pretty-printed canonical JSON followed by a newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("wire types always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padic_json_shape() {
        let ctx = PrimeContext::new(3, 4).unwrap();
        let x = PAdicInt::from_i64(&ctx, -1);
        let j = serde_json::to_value(PAdicJson::from(&x)).unwrap();
        assert_eq!(j, serde_json::json!({"p": 3, "precision": 4, "residue": "80"}));
        assert_eq!(PAdicInt::try_from(&PAdicJson::from(&x)).unwrap(), x);
    }

    #[test]
    fn map_accepts_signed_and_rational_coefficients() {
        let j: MapJson = serde_json::from_str(
            r#"{"d":1,"components":[{"nvars":1,"p":3,"precision":3,
                "terms":[{"exp":[1],"coef":"-2"},{"exp":[2],"coef":"3/2"}]}]}"#,
        )
        .unwrap();
        let f = AnalyticMap::try_from(&j).unwrap();
        let back = MapJson::from(&f);
        assert_eq!(back.components[0].terms[0].coef, "25");
        // 3/2 = 3 * 14 = 42 = 15 mod 27
        assert_eq!(back.components[0].terms[1].coef, "15");
    }

    #[test]
    fn map_rejects_mixed_contexts() {
        let j: MapJson = serde_json::from_str(
            r#"{"d":2,"components":[
                {"nvars":2,"p":3,"precision":3,"terms":[{"exp":[1,0],"coef":"1"}]},
                {"nvars":2,"p":3,"precision":4,"terms":[{"exp":[0,1],"coef":"1"}]}]}"#,
        )
        .unwrap();
        assert!(AnalyticMap::try_from(&j).is_err());
    }

    #[test]
    fn target_forms() {
        let t: TargetJson = serde_json::from_str(r#"["1","2"]"#).unwrap();
        assert_eq!(t, TargetJson::Point(vec!["1".into(), "2".into()]));
        let t: TargetJson = serde_json::from_str(r#"{"index":1,"value":"7"}"#).unwrap();
        assert_eq!(
            t,
            TargetJson::Coordinate {
                index: 1,
                value: "7".into()
            }
        );
    }
}
