//! Numerics for the fibers of the bundled example: fixed discriminant
//! polynomials, intersection numbers on complete toric surfaces, the
//! adjunction genus, the polynomial moduli count of a reflexive polytope and
//! a sequential star-subdivision resolution.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{sort_ccw, Fan, SurfaceLabel};
use crate::lattice::LatticeVector;
use crate::morphism::{FanMap, RelativeStar};
use crate::polytope::Polytope;

/// The sections whose discriminants are tabulated, named after the fiber surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscriminantShape {
    Wcp2_123,
    X4,
    Cp2Conic,
    X5,
    Wcp2_113,
    F2,
}

// (coefficient, [(variable, power)])
type Term = (i64, &'static [(usize, u32)]);

// Variables: a00 a10 a20 a30 a01 a11 a02.
const WCP2_123_TERMS: &[Term] = &[
    (-432, &[(0, 2), (6, 3), (3, 2)]),
    (-64, &[(0, 1), (2, 3), (6, 3)]),
    (-64, &[(1, 3), (6, 3), (3, 1)]),
    (-27, &[(4, 4), (6, 1), (3, 2)]),
    (1, &[(0, 1), (5, 6)]),
    (16, &[(1, 2), (2, 2), (6, 3)]),
    (16, &[(4, 2), (2, 3), (6, 2)]),
    (1, &[(6, 1), (1, 2), (5, 4)]),
    (-1, &[(4, 1), (1, 1), (5, 5)]),
    (1, &[(4, 2), (5, 4), (2, 1)]),
    (-1, &[(4, 3), (5, 3), (3, 1)]),
    (288, &[(0, 1), (6, 3), (1, 1), (2, 1), (3, 1)]),
    (48, &[(0, 1), (6, 2), (5, 2), (2, 2)]),
    (216, &[(0, 1), (4, 2), (6, 2), (3, 2)]),
    (-72, &[(4, 2), (6, 2), (1, 1), (2, 1), (3, 1)]),
    (-72, &[(0, 1), (6, 2), (1, 1), (5, 2), (3, 1)]),
    (-16, &[(4, 1), (6, 2), (1, 1), (5, 1), (2, 2)]),
    (-8, &[(6, 2), (1, 2), (5, 2), (2, 1)]),
    (96, &[(4, 1), (6, 2), (1, 2), (5, 1), (3, 1)]),
    (-144, &[(0, 1), (4, 1), (6, 2), (5, 1), (2, 1), (3, 1)]),
    (-12, &[(0, 1), (6, 1), (5, 4), (2, 1)]),
    (8, &[(4, 1), (6, 1), (1, 1), (5, 2), (2, 1)]),
    (-8, &[(4, 2), (6, 1), (5, 2), (2, 2)]),
    (-30, &[(4, 2), (6, 1), (1, 1), (5, 2), (3, 1)]),
    (36, &[(4, 3), (6, 1), (5, 1), (2, 1), (3, 1)]),
    (36, &[(0, 1), (4, 1), (6, 1), (5, 3), (3, 1)]),
];

// Variables: a00 a10 a20 a01 a11 a02.
const CP2_CONIC_TERMS: &[Term] = &[
    (1, &[(2, 1), (3, 2)]),
    (1, &[(1, 2), (5, 1)]),
    (1, &[(4, 2), (0, 1)]),
    (-1, &[(4, 1), (1, 1), (3, 1)]),
    (-4, &[(2, 1), (5, 1), (0, 1)]),
];

// Variables: a0 a1 a2 a3.
const F2_TERMS: &[Term] = &[
    (27, &[(0, 2), (3, 2)]),
    (4, &[(0, 1), (2, 3)]),
    (4, &[(1, 3), (3, 1)]),
    (-1, &[(1, 2), (2, 2)]),
    (-18, &[(0, 1), (1, 1), (2, 1), (3, 1)]),
];

const ONE: &[Term] = &[(1, &[])];
const A1: &[Term] = &[(1, &[(1, 1)])];

impl DiscriminantShape {
    pub const ALL: [DiscriminantShape; 6] = [
        DiscriminantShape::Wcp2_123,
        DiscriminantShape::X4,
        DiscriminantShape::Cp2Conic,
        DiscriminantShape::X5,
        DiscriminantShape::Wcp2_113,
        DiscriminantShape::F2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiscriminantShape::Wcp2_123 => "WCP2_123",
            DiscriminantShape::X4 => "X4",
            DiscriminantShape::Cp2Conic => "CP2_conic",
            DiscriminantShape::X5 => "X5",
            DiscriminantShape::Wcp2_113 => "WCP2_113",
            DiscriminantShape::F2 => "F2",
        }
    }

    pub fn from_name(s: &str) -> Option<DiscriminantShape> {
        Self::ALL.iter().copied().find(|d| d.name().eq_ignore_ascii_case(s))
    }

    pub fn surface(self) -> SurfaceLabel {
        match self {
            DiscriminantShape::Wcp2_123 => SurfaceLabel::WCP2_123,
            DiscriminantShape::X4 => SurfaceLabel::X4,
            DiscriminantShape::Cp2Conic => SurfaceLabel::CP2,
            DiscriminantShape::X5 => SurfaceLabel::X5,
            DiscriminantShape::Wcp2_113 => SurfaceLabel::WCP2_113,
            DiscriminantShape::F2 => SurfaceLabel::F2,
        }
    }

    /// Exponents of the local section's monomials, in coefficient order.
    pub fn support(self) -> Vec<[u32; 2]> {
        let s: &[[u32; 2]] = match self {
            DiscriminantShape::Wcp2_123 => &[[0, 0], [1, 0], [2, 0], [3, 0], [0, 1], [1, 1], [0, 2]],
            DiscriminantShape::X4 => &[[0, 0], [1, 0], [2, 0], [0, 1]],
            DiscriminantShape::Cp2Conic => &[[0, 0], [1, 0], [2, 0], [0, 1], [1, 1], [0, 2]],
            DiscriminantShape::X5 => &[[0, 0], [1, 0]],
            DiscriminantShape::Wcp2_113 => &[[0, 0], [1, 0], [2, 0], [3, 0], [0, 1]],
            DiscriminantShape::F2 => &[[0, 0], [1, 0], [2, 0], [3, 0]],
        };
        s.to_vec()
    }

    /// Coefficient names `a_ij`, or `a_i` for the one-variable shapes.
    pub fn coefficient_names(self) -> Vec<String> {
        let one_var = matches!(self, DiscriminantShape::X5 | DiscriminantShape::F2);
        self.support()
            .iter()
            .map(|[i, j]| if one_var { format!("a{i}") } else { format!("a{i}{j}") })
            .collect()
    }

    fn terms(self) -> &'static [Term] {
        match self {
            DiscriminantShape::Wcp2_123 => WCP2_123_TERMS,
            DiscriminantShape::X4 | DiscriminantShape::Wcp2_113 => ONE,
            DiscriminantShape::Cp2Conic => CP2_CONIC_TERMS,
            DiscriminantShape::X5 => A1,
            DiscriminantShape::F2 => F2_TERMS,
        }
    }

    pub fn term_count(self) -> usize {
        self.terms().len()
    }

    /// Common total degree of the terms, `None` if they disagree.
    pub fn degree(self) -> Option<u32> {
        let degs: BTreeSet<u32> = self.terms().iter().map(|(_, m)| m.iter().map(|&(_, p)| p).sum()).collect();
        if degs.len() == 1 {
            degs.into_iter().next()
        } else {
            None
        }
    }

    pub fn evaluate(self, coefficients: &[BigRational]) -> Result<BigRational> {
        let n = self.support().len();
        if coefficients.len() != n {
            return Err(Error::CoefficientCount { expected: n, got: coefficients.len() });
        }
        let mut total = BigRational::zero();
        for (c, mono) in self.terms() {
            let mut t = BigRational::from_integer(BigInt::from(*c));
            for &(v, p) in mono.iter() {
                t *= num_traits::pow(coefficients[v].clone(), p as usize);
            }
            total += t;
        }
        Ok(total)
    }
}

/// Intersection numbers `D_i · D_j` of the torus-invariant divisors of a
/// complete simplicial toric surface, indexed by the fan's ray order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTable {
    rays: Vec<LatticeVector>,
    names: Vec<String>,
    /// Ray indices in counterclockwise order.
    cyclic: Vec<usize>,
    entries: Vec<Vec<BigRational>>,
}

fn det2(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    &a.coords()[0] * &b.coords()[1] - &a.coords()[1] * &b.coords()[0]
}

pub fn intersection_table(fan: &Fan) -> Result<IntersectionTable> {
    if fan.rank() != 2 || !fan.is_complete() || !fan.is_simplicial() {
        return Err(Error::NotCompleteSurface);
    }
    let rays = fan.rays().to_vec();
    let n = rays.len();
    let mut sorted = rays.clone();
    sort_ccw(&mut sorted);
    let cyclic: Vec<usize> = sorted.iter().map(|v| rays.iter().position(|r| r == v).unwrap()).collect();
    let mut e = vec![vec![BigRational::zero(); n]; n];
    for k in 0..n {
        let (i, j) = (cyclic[k], cyclic[(k + 1) % n]);
        if fan.cone_index(&sorted_pair(i, j)).is_none() {
            return Err(Error::NotCompleteSurface);
        }
        let x = BigRational::new(BigInt::one(), det2(&rays[i], &rays[j]).abs());
        e[i][j] = x.clone();
        e[j][i] = x;
    }
    for i in 0..n {
        // Σ_j <m, v_j> D_j·D_i = 0 with m a coordinate functional nonzero on v_i
        let k = if rays[i].coords()[0].is_zero() { 1 } else { 0 };
        let mut s = BigRational::zero();
        for j in (0..n).filter(|&j| j != i) {
            s += &e[j][i] * BigRational::from_integer(rays[j].coords()[k].clone());
        }
        e[i][i] = -s / BigRational::from_integer(rays[i].coords()[k].clone());
    }
    Ok(IntersectionTable { rays, names: fan.ray_names().to_vec(), cyclic, entries: e })
}

fn sorted_pair(i: usize, j: usize) -> Vec<usize> {
    vec![i.min(j), i.max(j)]
}

impl IntersectionTable {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn counterclockwise(&self) -> &[usize] {
        &self.cyclic
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// `C · C'` for divisors given by integer ray coefficients.
    pub fn intersect(&self, c: &[BigInt], d: &[BigInt]) -> Result<BigRational> {
        let n = self.len();
        for v in [c, d] {
            if v.len() != n {
                return Err(Error::CoefficientCount { expected: n, got: v.len() });
            }
        }
        let mut s = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                s += &self.entries[i][j] * BigRational::from_integer(&c[i] * &d[j]);
            }
        }
        Ok(s)
    }

    /// Ray coefficients of the canonical divisor `-Σ D_i`.
    pub fn canonical(&self) -> Vec<BigInt> {
        vec![-BigInt::one(); self.len()]
    }

    /// Whether `Σ_j <m, v_j> D_j·D_i = 0` holds for both coordinate functionals and every `i`.
    pub fn relations_hold(&self) -> bool {
        (0..2).all(|k| {
            (0..self.len()).all(|i| {
                let mut s = BigRational::zero();
                for (j, v) in self.rays.iter().enumerate() {
                    s += &self.entries[j][i] * BigRational::from_integer(v.coords()[k].clone());
                }
                s.is_zero()
            })
        })
    }
}

/// Arithmetic genus `1 + (K + C)·C / 2` of a curve class on a complete toric surface.
pub fn adjunction_genus(fan: &Fan, c: &[BigInt]) -> Result<BigRational> {
    let t = intersection_table(fan)?;
    let kc: Vec<BigInt> = t.canonical().iter().zip(c).map(|(k, x)| k + x).collect();
    let prod = t.intersect(&kc, c)?;
    Ok(BigRational::one() + prod / BigRational::from_integer(BigInt::from(2)))
}

/// `Σ_Θ l(Θ)` over the facets, `l` counting relative-interior lattice points.
pub fn facet_interior_total(p: &Polytope) -> Result<usize> {
    Ok(p.facet_vertex_incidence()?.iter().map(|f| p.face_interior_points(f).len()).sum())
}

/// `|P ∩ M| - (rank + 1) - Σ_Θ l(Θ)` for a reflexive polytope.
pub fn moduli_dimension(p: &Polytope) -> Result<BigInt> {
    if !p.is_reflexive()? {
        return Err(Error::NotReflexive);
    }
    let points = p.lattice_points().len();
    let facets = facet_interior_total(p)?;
    Ok(BigInt::from(points) - BigInt::from(p.ambient_rank() + 1) - BigInt::from(facets))
}

/// Primitive cones over one target cone after resolution.
#[derive(Clone, Debug)]
pub struct ResolvedStratum {
    pub sigma: usize,
    pub primitive: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub map: FanMap,
    pub smooth: bool,
    /// Multiplicities of the maximal cones created by the subdivisions.
    pub new_cone_multiplicities: Vec<BigInt>,
    pub strata: Vec<ResolvedStratum>,
    /// The fiber over the dense orbit.
    pub generic_fiber: RelativeStar,
}

/// Star-subdivides the source fan at each ray in turn and re-analyses the map.
pub fn resolve_pipeline(map: &FanMap, rays: &[(String, LatticeVector)]) -> Result<Resolution> {
    let mut fan = map.source().clone();
    for (name, r) in rays {
        fan = fan.star_subdivide(r, name).map_err(|e| e.at(name.clone()))?;
    }
    let old: BTreeSet<Vec<LatticeVector>> = map.source().maximal_cones().map(|c| ray_set(&c.generators)).collect();
    let new_cone_multiplicities = fan
        .maximal_cones()
        .filter(|c| !old.contains(&ray_set(&c.generators)))
        .map(|c| c.multiplicity())
        .collect::<Result<Vec<_>>>()?;
    let smooth = fan.is_smooth()?;
    let resolved = FanMap::new(map.phi().clone(), fan, map.target().clone())?;
    let strata = (0..resolved.target().cones().len())
        .map(|s| Ok(ResolvedStratum { sigma: s, primitive: resolved.primitive_cones(s)? }))
        .collect::<Result<Vec<_>>>()?;
    let zero_source = resolved.source().cone_index(&[]).ok_or(Error::ConeNotInFan)?;
    let zero_target = resolved.target().cone_index(&[]).ok_or(Error::ConeNotInFan)?;
    let generic_fiber = resolved.relative_star(zero_source, zero_target)?;
    Ok(Resolution { map: resolved, smooth, new_cone_multiplicities, strata, generic_fiber })
}

fn ray_set(g: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut v = g.to_vec();
    v.sort();
    v
}
