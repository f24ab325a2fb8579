//! Double description: generators of `{x : ⟨a_i, x⟩ ≥ 0, ⟨e_j, x⟩ = 0}` in
//! exact integer arithmetic. Shared by cones, fans and polytopes.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::{dot, kernel_basis, LatticeMap, LatticeVector, Matrix};

/// Extreme rays (primitive, modulo lineality) and a lineality basis.
#[derive(Clone, Debug, Default)]
pub(crate) struct Generators {
    pub rays: Vec<LatticeVector>,
    pub lineality: Vec<LatticeVector>,
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    LatticeVector::new(v).primitive().into_coords()
}

/// Generators of the cone cut out by the inequalities and equations in `Z^dim`.
pub(crate) fn cone_generators(
    dim: usize,
    inequalities: &[LatticeVector],
    equations: &[LatticeVector],
) -> Generators {
    // Work inside the solution lattice of the equations.
    let basis: Vec<LatticeVector> = if equations.is_empty() {
        (0..dim).map(|i| LatticeVector::unit(dim, i)).collect()
    } else {
        kernel_basis(&LatticeMap::new(Matrix::from_rows(equations, dim)))
    };
    let k = basis.len();
    let b = Matrix::from_cols(&basis, dim);
    let local: Vec<Vec<BigInt>> = inequalities
        .iter()
        .map(|a| b.transpose().apply(a).into_coords())
        .filter(|a| a.iter().any(|x| !x.is_zero()))
        .collect();
    let g = dd_local(k, &local);
    let lift = |v: Vec<BigInt>| b.apply(&LatticeVector::new(v)).primitive();
    Generators {
        rays: g.0.into_iter().map(lift).collect(),
        lineality: g.1.into_iter().map(lift).collect(),
    }
}

/// Double description in `Z^k` starting from the whole space.
fn dd_local(k: usize, ineqs: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut lineality: Vec<Vec<BigInt>> =
        (0..k).map(|i| LatticeVector::unit(k, i).into_coords()).collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    // tight[r][i]: ray r satisfies inequality i with equality (processed ones only)
    let mut tight: Vec<Vec<bool>> = Vec::new();
    for (idx, a) in ineqs.iter().enumerate() {
        if let Some(p) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let l0 = lineality.remove(p);
            let s = dot(a, &l0);
            let sgn = if s.is_negative() { BigInt::from(-1) } else { BigInt::from(1) };
            let abs_s = s.abs();
            for l in lineality.iter_mut() {
                let t = dot(a, l);
                if !t.is_zero() {
                    let v: Vec<BigInt> =
                        l.iter().zip(&l0).map(|(x, y)| &s * x - &t * y).collect();
                    *l = primitive(v);
                }
            }
            for (r, z) in rays.iter_mut().zip(tight.iter_mut()) {
                let t = dot(a, r);
                if !t.is_zero() {
                    let v: Vec<BigInt> =
                        r.iter().zip(&l0).map(|(x, y)| &abs_s * x - &sgn * &t * y).collect();
                    *r = primitive(v);
                }
                z.push(true);
            }
            let mut z = vec![false; idx + 1];
            for (j, b) in ineqs[..idx].iter().enumerate() {
                z[j] = dot(b, &l0).is_zero();
            }
            z[idx] = false;
            rays.push(l0.iter().map(|x| x * &sgn).collect());
            tight.push(z);
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, z) in tight.iter_mut().enumerate() {
                z.push(vals[i].is_zero());
            }
            continue;
        }
        let mut new_rays = Vec::new();
        let mut new_tight = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<usize> =
                    (0..idx).filter(|&j| tight[p][j] && tight[n][j]).collect();
                let adjacent = (0..rays.len()).all(|r| {
                    r == p || r == n || !common.iter().all(|&j| tight[r][j])
                });
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(x, y)| &vals[p] * x - &vals[n] * y)
                    .collect();
                let v = primitive(v);
                let mut z: Vec<bool> = (0..idx).map(|j| dot(&ineqs[j], &v).is_zero()).collect();
                z.push(true);
                new_rays.push(v);
                new_tight.push(z);
            }
        }
        let mut kept_rays = Vec::new();
        let mut kept_tight = Vec::new();
        for i in 0..rays.len() {
            if !vals[i].is_negative() {
                let mut z = tight[i].clone();
                z.push(vals[i].is_zero());
                kept_rays.push(rays[i].clone());
                kept_tight.push(z);
            }
        }
        kept_rays.extend(new_rays);
        kept_tight.extend(new_tight);
        rays = kept_rays;
        tight = kept_tight;
    }
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for r in rays {
        if !out.contains(&r) {
            out.push(r);
        }
    }
    (out, lineality)
}

/// H-representation of `cone(generators)`: inward facet normals and the
/// equations of its linear span.
#[derive(Clone, Debug)]
pub struct ConeHRep {
    pub facets: Vec<LatticeVector>,
    pub equations: Vec<LatticeVector>,
}

impl ConeHRep {
    pub fn of_generators(dim: usize, generators: &[LatticeVector]) -> ConeHRep {
        let g = cone_generators(dim, generators, &[]);
        let mut facets = g.rays;
        facets.sort();
        ConeHRep { facets, equations: g.lineality }
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.equations.iter().all(|e| e.dot(v).is_zero())
            && self.facets.iter().all(|f| !f.dot(v).is_negative())
    }

    pub fn contains_relint(&self, v: &LatticeVector) -> bool {
        self.equations.iter().all(|e| e.dot(v).is_zero())
            && self.facets.iter().all(|f| f.dot(v).is_positive())
    }
}
