//! JSON file formats. Rationals are `[numerator, denominator]` pairs with a
//! positive denominator in lowest terms; integers too large for 64 bits are
//! written as decimal strings.
use crate::error::{Error, Result};
use mhom_core::arith::Q;
use mhom_core::cech::Step;
use mhom_core::chains::{AffineSimplex, LipschitzChain};
use mhom_core::complex::{Ball, BallCover, MetricComplex};
use mhom_core::currents::PolyhedralCurrent;
use mhom_core::geometry::Point;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Q);

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Text(String),
}

impl IntRepr {
    fn value<E: de::Error>(self) -> std::result::Result<BigInt, E> {
        match self {
            IntRepr::Small(n) => Ok(BigInt::from(n)),
            IntRepr::Text(s) => s.parse().map_err(|_| E::custom(format!("`{s}` is not an integer"))),
        }
    }
}

fn int_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => v.into(),
        None => n.to_string().into(),
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [int_json(self.0.numer()), int_json(self.0.denom())].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [num, den] = <[IntRepr; 2]>::deserialize(d)?;
        let (num, den) = (num.value::<D::Error>()?, den.value::<D::Error>()?);
        if !den.is_positive() {
            return Err(de::Error::custom(format!("denominator {den} is not positive")));
        }
        let q = Q::new(num.clone(), den.clone());
        if q.denom() != &den {
            return Err(de::Error::custom(format!("{num}/{den} is not in lowest terms")));
        }
        Ok(Rational(q))
    }
}

pub fn point_json(p: &[Q]) -> Vec<Rational> {
    p.iter().map(|x| Rational(x.clone())).collect()
}

fn point_value(p: Vec<Rational>) -> Point {
    p.into_iter().map(|r| r.0).collect()
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<Rational>>,
    pub simplices: Vec<Vec<usize>>,
    #[serde(default)]
    pub subcomplexes: BTreeMap<String, Vec<Vec<usize>>>,
}

/// A complex together with the simplex list of its file, which cover files
/// index into.
#[derive(Clone, Debug)]
pub struct Space {
    pub name: String,
    pub simplices: Vec<Vec<usize>>,
    pub complex: MetricComplex,
}

impl Space {
    pub fn from_json(text: &str, fallback_name: &str) -> Result<Space> {
        let file: SpaceFile = parse(text, "space file")?;
        for (i, s) in file.simplices.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Parse(format!("space file: simplices[{i}] is empty")));
            }
        }
        let name = file.name.clone().unwrap_or_else(|| fallback_name.to_string());
        let vertices = file.vertices.into_iter().map(point_value).collect();
        let complex = MetricComplex::new(file.ambient_dim, vertices, file.simplices.clone(), file.subcomplexes)
            .map_err(|e| Error::Parse(format!("space file: {e}")))?;
        Ok(Space { name, simplices: file.simplices, complex })
    }

    pub fn load(path: &Path) -> Result<Space> {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("space");
        Space::from_json(&read_file(path)?, stem)
    }

    pub fn to_file(&self) -> SpaceFile {
        let subcomplexes = self
            .complex
            .subcomplex_names()
            .map(|n| (n.clone(), self.complex.subcomplex_faces(n).expect("listed name").to_vec()))
            .collect();
        SpaceFile {
            name: Some(self.name.clone()),
            ambient_dim: self.complex.ambient_dim(),
            vertices: self.complex.vertices().iter().map(|v| point_json(v)).collect(),
            simplices: self.simplices.clone(),
            subcomplexes,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallEntry {
    pub center_simplex: usize,
    pub barycentric: Vec<Rational>,
    pub radius: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub balls: Vec<BallEntry>,
}

/// Reads a cover whose centers are barycentric points of simplices of the
/// space file.
pub fn cover_from_json(text: &str, space: &Space) -> Result<BallCover> {
    let file: CoverFile = parse(text, "cover file")?;
    let mut balls = Vec::with_capacity(file.balls.len());
    for (i, b) in file.balls.into_iter().enumerate() {
        let at = |msg: String| Error::Parse(format!("cover file: balls[{i}]: {msg}"));
        let face = space
            .simplices
            .get(b.center_simplex)
            .ok_or_else(|| at(format!("center_simplex {} out of range", b.center_simplex)))?;
        if !b.radius.0.is_positive() {
            return Err(at("radius must be positive".into()));
        }
        let bary: Vec<Q> = b.barycentric.into_iter().map(|r| r.0).collect();
        balls.push(Ball::on_face(&space.complex, face, &bary, b.radius.0).map_err(|e| at(e.to_string()))?);
    }
    if balls.is_empty() {
        return Err(Error::Parse("cover file: no balls".into()));
    }
    Ok(BallCover::new(balls))
}

pub fn load_cover(path: &Path, space: &Space) -> Result<BallCover> {
    cover_from_json(&read_file(path)?, space)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceEntry {
    pub theta: i64,
    pub vertices: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentFile {
    pub degree: usize,
    pub pieces: Vec<PieceEntry>,
}

pub fn current_to_file(t: &PolyhedralCurrent) -> CurrentFile {
    CurrentFile {
        degree: t.degree(),
        pieces: t
            .pieces()
            .iter()
            .map(|p| PieceEntry { theta: p.theta, vertices: p.vertices.iter().map(|v| point_json(v)).collect() })
            .collect(),
    }
}

/// `ambient_dim` is only consulted for the zero current.
pub fn current_from_json(text: &str, ambient_dim: usize) -> Result<PolyhedralCurrent> {
    let file: CurrentFile = parse(text, "current file")?;
    let n = file.pieces.first().and_then(|p| p.vertices.first()).map_or(ambient_dim, |v| v.len());
    let mut raw = Vec::new();
    for (i, p) in file.pieces.into_iter().enumerate() {
        if p.vertices.len() != file.degree + 1 {
            return Err(Error::Parse(format!(
                "current file: pieces[{i}] has {} vertices, degree {} needs {}",
                p.vertices.len(),
                file.degree,
                file.degree + 1
            )));
        }
        if let Some(j) = p.vertices.iter().position(|v| v.len() != n) {
            return Err(Error::Parse(format!("current file: pieces[{i}].vertices[{j}] is not in dimension {n}")));
        }
        raw.push((p.theta, p.vertices.into_iter().map(point_value).collect()));
    }
    Ok(PolyhedralCurrent::from_pieces(file.degree, n, raw))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub coefficient: i64,
    pub vertices: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub degree: usize,
    #[serde(default)]
    pub level: usize,
    pub terms: Vec<TermEntry>,
}

pub fn chain_to_file(c: &LipschitzChain) -> ChainFile {
    ChainFile {
        degree: c.degree(),
        level: c.level(),
        terms: c
            .terms()
            .map(|(s, a)| TermEntry { coefficient: a, vertices: s.vertices().iter().map(|v| point_json(v)).collect() })
            .collect(),
    }
}

pub fn chain_from_json(text: &str) -> Result<LipschitzChain> {
    let file: ChainFile = parse(text, "chain file")?;
    let mut terms = Vec::new();
    for (i, t) in file.terms.into_iter().enumerate() {
        if t.vertices.len() != file.degree + 1 {
            return Err(Error::Parse(format!("chain file: terms[{i}] does not have {} vertices", file.degree + 1)));
        }
        terms.push((t.coefficient, AffineSimplex::new(t.vertices.into_iter().map(point_value).collect())));
    }
    Ok(LipschitzChain::from_terms(file.degree, terms).with_level(file.level))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StepEntry {
    pub stage: String,
    pub p: usize,
    pub q: usize,
    pub cover: usize,
    pub components: usize,
}

pub fn transcript(steps: &[Step]) -> Vec<StepEntry> {
    steps
        .iter()
        .map(|s| StepEntry { stage: s.stage.clone(), p: s.p, q: s.q, cover: s.cover, components: s.components })
        .collect()
}

/// Exact value as a fraction string, `-3/4` or `2`.
pub fn q_text(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_zero_q(x: &Q) -> bool {
    x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use mhom_core::arith::q;

    #[test]
    fn rationals_round_trip_and_reject_bad_input() {
        let r: Rational = serde_json::from_str("[-3, 4]").unwrap();
        assert_eq!(r.0, q(-3, 4));
        assert_eq!(serde_json::to_string(&r).unwrap(), "[-3,4]");
        assert!(serde_json::from_str::<Rational>("[2, 4]").is_err());
        assert!(serde_json::from_str::<Rational>("[1, 0]").is_err());
        assert!(serde_json::from_str::<Rational>("[1, -2]").is_err());
        let big: Rational = serde_json::from_str(r#"["123456789012345678901234567", 1]"#).unwrap();
        assert_eq!(serde_json::to_string(&big).unwrap(), r#"["123456789012345678901234567",1]"#);
    }

    #[test]
    fn parse_errors_carry_a_location() {
        let err = Space::from_json("{\n  \"ambient_dim\": 2,\n  \"vertices\": [[[1, 2], [3, 0]]],\n  \"simplices\": []\n}", "x")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
    }
}
