//! TOML documents for lattice maps, fans, polytopes, sections and jobs.
//!
//! Rays and points are arrays of inline tables `{ name = "v1'", v = [..] }`
//! so that their order is kept; cones refer to rays by name. Integers too
//! large for TOML are written as decimal strings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bundle::LaurentSection;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{LatticeMap, LatticeVector, Matrix};
use crate::polytope::{hull, Polytope};

pub const FORMAT_VERSION: &str = "1";

/// An integer that is written as a TOML integer when it fits and as a string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Int {
    Small(i64),
    Big(String),
}

impl Int {
    pub fn from_big(x: &BigInt) -> Int {
        match i64::try_from(x) {
            Ok(v) => Int::Small(v),
            Err(_) => Int::Big(x.to_string()),
        }
    }

    pub fn to_big(&self) -> Result<BigInt> {
        match self {
            Int::Small(v) => Ok(BigInt::from(*v)),
            Int::Big(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Syntax(format!("not an integer: {s}"))),
        }
    }
}

fn to_vector(v: &[Int]) -> Result<LatticeVector> {
    Ok(LatticeVector::new(v.iter().map(Int::to_big).collect::<Result<Vec<_>>>()?))
}

fn from_vector(v: &LatticeVector) -> Vec<Int> {
    v.coords().iter().map(Int::from_big).collect()
}

/// A coefficient: an integer or a string holding a rational such as `"-3/2"` or a symbolic label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Integer(i64),
    Text(String),
}

impl Coefficient {
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Coefficient::Integer(v) => Some(BigRational::from_integer(BigInt::from(*v))),
            Coefficient::Text(s) => BigRational::from_str(s.trim()).ok(),
        }
    }

    pub fn from_rational(x: &BigRational) -> Coefficient {
        if x.is_integer() {
            if let Ok(v) = i64::try_from(x.numer()) {
                return Coefficient::Integer(v);
            }
        }
        Coefficient::Text(x.to_string())
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Integer(v) => write!(f, "{v}"),
            Coefficient::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedVector {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub v: Vec<Int>,
}

impl NamedVector {
    pub fn new(name: Option<String>, v: &LatticeVector) -> NamedVector {
        NamedVector { name, v: from_vector(v) }
    }

    pub fn vector(&self) -> Result<LatticeVector> {
        to_vector(&self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSpec {
    pub rank: usize,
    #[serde(default)]
    pub rays: Vec<NamedVector>,
    /// Maximal cones as lists of ray names.
    #[serde(default)]
    pub cones: Vec<Vec<String>>,
}

impl FanSpec {
    pub fn to_fan(&self) -> Result<Fan> {
        let mut rays = Vec::new();
        let mut names = Vec::new();
        for (i, r) in self.rays.iter().enumerate() {
            let path = format!("rays[{i}]");
            let v = r.vector().map_err(|e| e.at(&path))?;
            if v.rank() != self.rank {
                return Err(Error::Dimension(format!("expected rank {}", self.rank)).at(path));
            }
            if !v.is_primitive() {
                return Err(Error::NonPrimitiveRay(v.to_string()).at(path));
            }
            let name = r.name.clone().unwrap_or_else(|| format!("r{i}"));
            if names.contains(&name) {
                return Err(Error::DuplicateRay(name).at(path));
            }
            rays.push(v);
            names.push(name);
        }
        let mut tops = Vec::new();
        for (j, c) in self.cones.iter().enumerate() {
            let idx = c
                .iter()
                .map(|n| {
                    names
                        .iter()
                        .position(|x| x == n)
                        .ok_or_else(|| Error::Dimension(format!("unknown ray {n}")).at(format!("cones[{j}]")))
                })
                .collect::<Result<Vec<_>>>()?;
            tops.push(idx);
        }
        Fan::build(self.rank, rays, names, tops)
    }

    pub fn from_fan(fan: &Fan) -> FanSpec {
        let names = fan.ray_names();
        FanSpec {
            rank: fan.rank(),
            rays: fan.rays().iter().zip(names).map(|(v, n)| NamedVector::new(Some(n.clone()), v)).collect(),
            cones: fan
                .maximal_cones()
                .filter(|c| !c.is_zero())
                .map(|c| c.rays.iter().map(|&i| names[i].clone()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub source_rank: usize,
    pub target_rank: usize,
    /// `target_rank` rows of `source_rank` entries.
    #[serde(default)]
    pub rows: Vec<Vec<Int>>,
}

impl MapSpec {
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.rows.len() != self.target_rank {
            return Err(Error::Dimension(format!("expected {} rows", self.target_rank)).at("rows"));
        }
        let mut rows = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let v = to_vector(r).map_err(|e| e.at(format!("rows[{i}]")))?;
            if v.rank() != self.source_rank {
                return Err(Error::Dimension(format!("expected {} entries", self.source_rank)).at(format!("rows[{i}]")));
            }
            rows.push(v);
        }
        let mut m = Matrix::from_rows(&rows, self.source_rank);
        if self.target_rank == 0 {
            m = Matrix::zeros(0, self.source_rank);
        }
        Ok(m)
    }

    pub fn to_map(&self) -> Result<LatticeMap> {
        Ok(LatticeMap::new(self.to_matrix()?))
    }

    pub fn from_matrix(m: &Matrix) -> MapSpec {
        MapSpec {
            source_rank: m.cols(),
            target_rank: m.rows(),
            rows: m.row_vectors().iter().map(from_vector).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    pub points: Vec<NamedVector>,
}

impl PolytopeSpec {
    pub fn to_polytope(&self) -> Result<Polytope> {
        hull(&self.vectors()?)
    }

    pub fn vectors(&self) -> Result<Vec<LatticeVector>> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| p.vector().map_err(|e| e.at(format!("points[{i}]"))))
            .collect()
    }

    pub fn from_polytope(p: &Polytope) -> PolytopeSpec {
        PolytopeSpec { points: p.vertices().iter().map(|v| NamedVector::new(None, v)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub exponent: Vec<Int>,
    pub coefficient: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionSpec {
    pub rank: usize,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
}

impl SectionSpec {
    /// Coefficients as given, rational or symbolic.
    pub fn to_section(&self) -> Result<LaurentSection<Coefficient>> {
        let mut s = LaurentSection::new(self.rank);
        for (i, t) in self.terms.iter().enumerate() {
            let m = to_vector(&t.exponent).map_err(|e| e.at(format!("terms[{i}]")))?;
            s.insert(m, t.coefficient.clone()).map_err(|e| e.at(format!("terms[{i}]")))?;
        }
        Ok(s)
    }

    pub fn to_rational_section(&self) -> Result<LaurentSection<BigRational>> {
        let mut s = LaurentSection::new(self.rank);
        for (i, t) in self.terms.iter().enumerate() {
            let path = format!("terms[{i}]");
            let m = to_vector(&t.exponent).map_err(|e| e.at(&path))?;
            let c = t
                .coefficient
                .to_rational()
                .ok_or_else(|| Error::Syntax(format!("not a rational: {}", t.coefficient)).at(&path))?;
            s.insert(m, c).map_err(|e| e.at(&path))?;
        }
        Ok(s)
    }

    pub fn from_section(s: &LaurentSection<Coefficient>) -> SectionSpec {
        SectionSpec {
            rank: s.rank(),
            terms: s
                .terms()
                .iter()
                .map(|(m, c)| TermSpec { exponent: from_vector(m), coefficient: c.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionSpec {
    pub rays: Vec<NamedVector>,
}

/// A complete analysis input: a map of fans with an optional polytope on the source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub source: FanSpec,
    pub target: FanSpec,
    pub map: MapSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    LatticeMap,
    Fan,
    Polytope,
    Section,
    Job,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub version: String,
    pub kind: DocumentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<SectionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub job: Option<JobSpec>,
}

impl Document {
    fn empty(kind: DocumentKind) -> Document {
        Document {
            version: FORMAT_VERSION.into(),
            kind,
            lattice_map: None,
            fan: None,
            polytope: None,
            section: None,
            job: None,
        }
    }

    pub fn of_fan(f: FanSpec) -> Document {
        Document { fan: Some(f), ..Document::empty(DocumentKind::Fan) }
    }

    pub fn of_map(m: MapSpec) -> Document {
        Document { lattice_map: Some(m), ..Document::empty(DocumentKind::LatticeMap) }
    }

    pub fn of_polytope(p: PolytopeSpec) -> Document {
        Document { polytope: Some(p), ..Document::empty(DocumentKind::Polytope) }
    }

    pub fn of_section(s: SectionSpec) -> Document {
        Document { section: Some(s), ..Document::empty(DocumentKind::Section) }
    }

    pub fn of_job(j: JobSpec) -> Document {
        Document { job: Some(j), ..Document::empty(DocumentKind::Job) }
    }

    /// The payload matching `kind`, with all semantic checks applied lazily by the `to_*` converters.
    fn check(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Syntax(format!("unsupported version {}", self.version)));
        }
        let present = match self.kind {
            DocumentKind::LatticeMap => self.lattice_map.is_some(),
            DocumentKind::Fan => self.fan.is_some(),
            DocumentKind::Polytope => self.polytope.is_some(),
            DocumentKind::Section => self.section.is_some(),
            DocumentKind::Job => self.job.is_some(),
        };
        if !present {
            return Err(Error::Syntax(format!("missing payload for kind {:?}", self.kind)));
        }
        Ok(())
    }

    pub fn fan(&self) -> Result<Fan> {
        match (&self.fan, &self.job) {
            (Some(f), _) => f.to_fan().map_err(|e| e.at("fan")),
            (None, Some(j)) => j.source.to_fan().map_err(|e| e.at("job.source")),
            _ => Err(Error::Syntax("document holds no fan".into())),
        }
    }

    pub fn polytope(&self) -> Result<Polytope> {
        match (&self.polytope, &self.job) {
            (Some(p), _) => p.to_polytope().map_err(|e| e.at("polytope")),
            (None, Some(JobSpec { polytope: Some(p), .. })) => p.to_polytope().map_err(|e| e.at("job.polytope")),
            _ => Err(Error::Syntax("document holds no polytope".into())),
        }
    }
}

/// Parses and validates the envelope of a document; syntax errors carry line and column.
pub fn parse(text: &str) -> Result<Document> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    doc.check()?;
    Ok(doc)
}

pub fn serialize(doc: &Document) -> Result<String> {
    toml::to_string(doc).map_err(|e| Error::Syntax(e.to_string()))
}
