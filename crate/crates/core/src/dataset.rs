//! The bundled example: an elliptic Calabi-Yau fourfold hypersurface whose
//! ambient toric fivefold fibres over a smooth toric threefold.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::io::{parse, Document, JobSpec};
use crate::lattice::LatticeVector;
use crate::morphism::FanMap;
use crate::polytope::Polytope;

pub const ELLIPTIC_FOURFOLD: &str = include_str!("../data/elliptic_fourfold.toml");

/// A job document turned into validated objects.
#[derive(Clone, Debug)]
pub struct Job {
    pub map: FanMap,
    pub polytope: Option<Polytope>,
    /// Named points of the polytope document, in file order.
    pub points: Vec<(Option<String>, LatticeVector)>,
    pub resolution: Vec<(String, LatticeVector)>,
}

impl Job {
    pub fn source(&self) -> &Fan {
        self.map.source()
    }

    pub fn target(&self) -> &Fan {
        self.map.target()
    }

    pub fn polytope(&self) -> Result<&Polytope> {
        self.polytope.as_ref().ok_or_else(|| Error::Syntax("job has no polytope".into()))
    }

    pub fn from_document(doc: &Document) -> Result<Job> {
        let spec: &JobSpec = doc.job.as_ref().ok_or_else(|| Error::Syntax("not a job document".into()))?;
        let source = spec.source.to_fan().map_err(|e| e.at("job.source"))?;
        let target = spec.target.to_fan().map_err(|e| e.at("job.target"))?;
        let phi = spec.map.to_map().map_err(|e| e.at("job.map"))?;
        let map = FanMap::new(phi, source, target).map_err(|e| e.at("job.map"))?;
        let (polytope, points) = match &spec.polytope {
            Some(p) => {
                let vs = p.vectors().map_err(|e| e.at("job.polytope"))?;
                let named = p.points.iter().zip(&vs).map(|(n, v)| (n.name.clone(), v.clone())).collect();
                (Some(p.to_polytope().map_err(|e| e.at("job.polytope"))?), named)
            }
            None => (None, Vec::new()),
        };
        let resolution = match &spec.resolution {
            Some(r) => r
                .rays
                .iter()
                .enumerate()
                .map(|(i, nv)| {
                    let v = nv.vector().map_err(|e| e.at(format!("job.resolution.rays[{i}]")))?;
                    Ok((nv.name.clone().unwrap_or_else(|| format!("s{}", i + 1)), v))
                })
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        Ok(Job { map, polytope, points, resolution })
    }
}

pub fn elliptic_fourfold_document() -> Document {
    parse(ELLIPTIC_FOURFOLD).expect("bundled document parses")
}

pub fn elliptic_fourfold() -> Job {
    Job::from_document(&elliptic_fourfold_document()).expect("bundled job is valid")
}
