//! Maps of fans and the structure of the induced toric morphism: image fan,
//! the cones over each orbit, primitive cones, relative stars, indices, the
//! fibration criterion and the flattening stratification.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::fan::{identify_surface, Fan, SurfaceLabel};
use crate::lattice::{
    cokernel_index, coordinates_in, kernel_basis, left_inverse, quotient_lattice, rational_rank,
    saturation, Index, LatticeMap, LatticeVector, Matrix,
};
use crate::polyhedral::{cone_generators, ConeHRep};
use crate::polytope::{
    cone_weight, project_polytope, restriction_polytope, NormalFanRelation, Polytope, Projection,
    Restriction,
};

/// Whether every cone of `source` is carried by `phi` into some cone of `target`.
pub fn is_map_of_fans(phi: &LatticeMap, source: &Fan, target: &Fan) -> bool {
    first_bad_cone(phi, source, target).is_none()
}

fn first_bad_cone(phi: &LatticeMap, source: &Fan, target: &Fan) -> Option<usize> {
    if phi.source_rank() != source.rank() || phi.target_rank() != target.rank() {
        return source.maximal_indices().first().copied().or(Some(0));
    }
    source.maximal_indices().iter().copied().find(|&i| {
        let imgs: Vec<LatticeVector> = source.cone(i).generators.iter().map(|g| phi.apply(g)).collect();
        !(0..target.cones().len()).any(|t| imgs.iter().all(|v| target.hrep(t).contains(v)))
    })
}

/// A validated map of fans `φ: Σ' → Σ`.
#[derive(Clone, Debug)]
pub struct FanMap {
    phi: LatticeMap,
    source: Fan,
    target: Fan,
    home: Vec<usize>,
}

/// The relative star of a cone over a target cone, with the lattice data
/// needed to interpret its coordinates.
#[derive(Clone, Debug)]
pub struct RelativeStar {
    pub fan: Fan,
    /// Basis of `φ^{-1}(N_σ)` in `N'`.
    pub kernel: Vec<LatticeVector>,
    /// Lifts to `N'` of the basis of `φ^{-1}(N_σ) / N'_{τ'}` used for the coordinates.
    pub lifts: Vec<LatticeVector>,
}

/// One irreducible component of the fiber over an orbit.
#[derive(Clone, Debug)]
pub struct FiberComponent {
    pub primitive_cone: usize,
    pub relative_star: RelativeStar,
    pub dim: usize,
    /// Catalog label for complete surfaces, `None` in other dimensions.
    pub label: Option<SurfaceLabel>,
}

/// Intersection of the components attached to a set of primitive cones.
#[derive(Clone, Debug)]
pub struct ComponentIntersection {
    pub members: Vec<usize>,
    /// Smallest source cone having all members as faces, when it lies over `σ`.
    pub cone: Option<usize>,
    pub relative_star: Option<RelativeStar>,
}

#[derive(Clone, Debug)]
pub struct FiberReport {
    pub sigma: usize,
    pub sigma_prime_set: Vec<usize>,
    pub primitive: Vec<usize>,
    /// `None` when nothing lies over `σ`.
    pub index: Option<Index>,
    pub components: Vec<FiberComponent>,
    pub intersections: Vec<ComponentIntersection>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationCertificate {
    pub holds: bool,
    /// Pairs `(σ, τ')` where `τ'` does not map bijectively onto `σ`.
    pub violations: Vec<(usize, usize)>,
    /// Every component has dimension `rank N' - rank N`.
    pub dimensions_match: bool,
    /// Every ray maps to zero or into a ray, and every target ray is hit.
    pub rays_onto_rays: bool,
}

/// The dual-polytope face `Θ_{σ'}` and the cones selecting it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LightedFace {
    pub vertices: Vec<usize>,
    pub cones: Vec<usize>,
    pub primitive: bool,
}

#[derive(Clone, Debug)]
pub struct LightedPart {
    pub faces: Vec<LightedFace>,
    /// Primitive faces are exactly the faces selected by primitive cones, one each.
    pub consistent_with_cones: bool,
}

/// Restriction, projection and relative star for one `(τ', σ)` pair.
#[derive(Clone, Debug)]
pub struct FiberPolytope {
    pub restriction: Restriction,
    pub projection: Projection,
    pub star: RelativeStar,
    /// The relative star in the dual coordinates of the projected polytope.
    pub star_in_polytope_coords: Fan,
    pub relation: NormalFanRelation,
}

impl FanMap {
    pub fn new(phi: LatticeMap, source: Fan, target: Fan) -> Result<FanMap> {
        if phi.source_rank() != source.rank() || phi.target_rank() != target.rank() {
            return Err(Error::Dimension("map does not match the fan ranks".into()));
        }
        if let Some(bad) = first_bad_cone(&phi, &source, &target) {
            return Err(Error::NotMapOfFans(source.label(bad)));
        }
        let home = source
            .cones()
            .iter()
            .map(|c| target.locate(&phi.apply(&c.relint_point(source.rank()))).ok_or(Error::OutsideSupport))
            .collect::<Result<Vec<usize>>>()?;
        Ok(FanMap { phi, source, target, home })
    }

    pub fn phi(&self) -> &LatticeMap {
        &self.phi
    }

    pub fn source(&self) -> &Fan {
        &self.source
    }

    pub fn target(&self) -> &Fan {
        &self.target
    }

    /// The target cone whose relative interior contains the image of the relative interior of source cone `i`.
    pub fn home(&self, i: usize) -> usize {
        self.home[i]
    }

    /// Rank of `φ(N')`.
    pub fn image_rank(&self) -> usize {
        self.phi.matrix().rank()
    }

    /// `[N : φ(N')]`.
    pub fn lattice_index(&self) -> Index {
        cokernel_index(&self.phi)
    }

    fn image_basis(&self) -> Vec<LatticeVector> {
        saturation(&self.phi.matrix().col_vectors(), self.target.rank())
    }

    /// `Σ ∩ φ(N'_R)` in a basis of the saturated lattice `N ∩ φ(N'_R)`.
    pub fn image_fan(&self) -> Result<Fan> {
        let n = self.target.rank();
        if self.image_rank() == n {
            return Ok(self.target.clone());
        }
        let basis = self.image_basis();
        let r = basis.len();
        let b = Matrix::from_cols(&basis, n);
        let bt = b.transpose();
        let mut rays: Vec<LatticeVector> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut tops: Vec<Vec<usize>> = Vec::new();
        for &t in self.target.maximal_indices() {
            let h = self.target.hrep(t);
            let ineqs: Vec<LatticeVector> = h.facets.iter().map(|f| bt.apply(f)).collect();
            let eqs: Vec<LatticeVector> = h.equations.iter().map(|e| bt.apply(e)).collect();
            let g = cone_generators(r, &ineqs, &eqs);
            if !g.lineality.is_empty() {
                return Err(Error::Invariant("image cone contains a line".into()));
            }
            let mut top = Vec::new();
            for ray in g.rays {
                let pos = match rays.iter().position(|x| *x == ray) {
                    Some(p) => p,
                    None => {
                        let amb = b.apply(&ray);
                        let name = self
                            .target
                            .rays()
                            .iter()
                            .position(|x| *x == amb)
                            .map(|i| self.target.ray_names()[i].clone())
                            .unwrap_or_else(|| format!("w{}", rays.len() + 1));
                        rays.push(ray);
                        names.push(name);
                        rays.len() - 1
                    }
                };
                top.push(pos);
            }
            tops.push(top);
        }
        Fan::build(r, rays, names, tops)
    }

    /// The factorization through the image: `N' → N ∩ φ(N'_R)` onto the image fan.
    pub fn onto_image(&self) -> Result<FanMap> {
        if self.image_rank() == self.target.rank() {
            return Ok(self.clone());
        }
        let basis = self.image_basis();
        let inv = left_inverse(&Matrix::from_cols(&basis, self.target.rank()))?;
        let phi = LatticeMap::new(inv.mul(self.phi.matrix()));
        FanMap::new(phi, self.source.clone(), self.image_fan()?)
    }

    fn check_sigma(&self, sigma: usize) -> Result<()> {
        if sigma >= self.target.cones().len() {
            return Err(Error::ConeNotInFan);
        }
        Ok(())
    }

    /// Source cones whose relative interior maps into the relative interior of `sigma`.
    pub fn sigma_prime_of(&self, sigma: usize) -> Result<Vec<usize>> {
        self.check_sigma(sigma)?;
        Ok((0..self.home.len()).filter(|&i| self.home[i] == sigma).collect())
    }

    /// Members of `Σ'_σ` none of whose proper faces lie over `sigma`.
    pub fn primitive_cones(&self, sigma: usize) -> Result<Vec<usize>> {
        let set = self.sigma_prime_of(sigma)?;
        Ok(set
            .iter()
            .copied()
            .filter(|&c| !self.source.proper_faces(c).iter().any(|f| self.home[*f] == sigma))
            .collect())
    }

    // Projection N → N/N_σ.
    fn sigma_quotient(&self, sigma: usize) -> Result<Matrix> {
        let n = self.target.rank();
        let sub = saturation(&self.target.cone(sigma).generators, n);
        Ok(quotient_lattice(n, &sub)?.projection)
    }

    /// `Ind(σ)`, the index of the image of `N'/N'_{σ'}` in `N/N_σ`, checked to agree for every `σ'` over `σ`.
    pub fn index_of(&self, sigma: usize) -> Result<Index> {
        let set = self.sigma_prime_of(sigma)?;
        if set.is_empty() {
            return Err(Error::EmptyPreimage);
        }
        let p = self.sigma_quotient(sigma)?;
        let ps_phi = p.mul(self.phi.matrix());
        let mut first: Option<Index> = None;
        for &s in &set {
            let n1 = self.source.rank();
            let sub = saturation(&self.source.cone(s).generators, n1);
            let q = quotient_lattice(n1, &sub)?;
            let lifts = Matrix::from_cols(&q.quotient_basis, n1);
            let idx = cokernel_index(&LatticeMap::new(ps_phi.mul(&lifts)));
            match &first {
                None => first = Some(idx),
                Some(f) if *f != idx => {
                    return Err(Error::Invariant(format!(
                        "index over {} depends on the chosen cone",
                        self.target.label(sigma)
                    )))
                }
                _ => {}
            }
        }
        Ok(first.expect("nonempty"))
    }

    /// `[N_σ : N_σ ∩ φ(N')]`.
    pub fn sublattice_index(&self, sigma: usize) -> Result<Index> {
        self.check_sigma(sigma)?;
        let n = self.target.rank();
        let s = saturation(&self.target.cone(sigma).generators, n);
        let k = s.len();
        if k == 0 {
            return Ok(Index::Finite(BigInt::one()));
        }
        let n1 = self.source.rank();
        let mut joint = Matrix::zeros(n, n1 + k);
        for i in 0..n {
            for j in 0..n1 {
                joint.set(i, j, self.phi.matrix().get(i, j).clone());
            }
            for (j, v) in s.iter().enumerate() {
                joint.set(i, n1 + j, -v.coords()[i].clone());
            }
        }
        let ker = kernel_basis(&LatticeMap::new(joint));
        let gens: Vec<LatticeVector> = ker.iter().map(|v| LatticeVector::new(v.coords()[n1..].to_vec())).collect();
        if gens.is_empty() {
            return Ok(Index::Infinite);
        }
        Ok(cokernel_index(&LatticeMap::new(Matrix::from_cols(&gens, k))))
    }

    /// Checks `Ind(0) = Ind(σ) [N_σ : N_σ ∩ φ(N')]` for every `σ` over which something lies,
    /// when `[N : φ(N')]` is finite. Returns whether the identity was applicable.
    pub fn check_index_identity(&self) -> Result<bool> {
        let Index::Finite(total) = self.lattice_index() else { return Ok(false) };
        let zero = self.target.cone_index(&[]).ok_or(Error::ConeNotInFan)?;
        let i0 = match self.index_of(zero)? {
            Index::Finite(x) => x,
            Index::Infinite => return Err(Error::Invariant("infinite index over the zero cone".into())),
        };
        if i0 != total {
            return Err(Error::Invariant("index over the zero cone differs from the lattice index".into()));
        }
        for sigma in 0..self.target.cones().len() {
            if self.sigma_prime_of(sigma)?.is_empty() {
                continue;
            }
            let (Index::Finite(a), Index::Finite(b)) = (self.index_of(sigma)?, self.sublattice_index(sigma)?) else {
                return Err(Error::Invariant("infinite index with finite lattice index".into()));
            };
            if &a * &b != i0 {
                return Err(Error::Invariant(format!("index identity fails over {}", self.target.label(sigma))));
            }
        }
        Ok(true)
    }

    /// The relative star of `tau` over `sigma`.
    pub fn relative_star(&self, tau: usize, sigma: usize) -> Result<RelativeStar> {
        self.check_sigma(sigma)?;
        if tau >= self.home.len() || self.home[tau] != sigma {
            return Err(Error::NotOverSigma);
        }
        let n1 = self.source.rank();
        let p = self.sigma_quotient(sigma)?;
        let kernel = kernel_basis(&LatticeMap::new(p.mul(self.phi.matrix())));
        let r = kernel.len();
        let coords = |v: &LatticeVector| coordinates_in(&kernel, v).ok_or(Error::NotOverSigma);
        let t = self.source.cone(tau);
        let tau_coords = t.generators.iter().map(coords).collect::<Result<Vec<_>>>()?;
        let q = quotient_lattice(r, &saturation(&tau_coords, r))?;
        let kb = Matrix::from_cols(&kernel, n1);
        let lifts: Vec<LatticeVector> = q.quotient_basis.iter().map(|c| kb.apply(c)).collect();
        let mut rays: Vec<LatticeVector> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut tops: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.home.len() {
            if self.home[s] != sigma || !(s == tau || self.source.is_face(tau, s)) {
                continue;
            }
            let c = self.source.cone(s);
            let mut top = Vec::new();
            for (&ri, g) in c.rays.iter().zip(&c.generators) {
                if t.rays.contains(&ri) {
                    continue;
                }
                let img = q.project(&coords(g)?).primitive();
                let pos = match rays.iter().position(|x| *x == img) {
                    Some(pos) => pos,
                    None => {
                        rays.push(img);
                        names.push(self.source.ray_names()[ri].clone());
                        rays.len() - 1
                    }
                };
                top.push(pos);
            }
            tops.push(top);
        }
        let fan = Fan::build(q.free_rank(), rays, names, tops)?;
        Ok(RelativeStar { fan, kernel, lifts })
    }

    fn component(&self, tau: usize, sigma: usize) -> Result<FiberComponent> {
        let star = self.relative_star(tau, sigma)?;
        let dim = star.fan.rank();
        if self.image_rank() == self.target.rank() {
            let expected = (self.source.rank() - self.source.cone(tau).dim)
                .checked_sub(self.target.rank() - self.target.cone(sigma).dim);
            if expected != Some(dim) {
                return Err(Error::Invariant(format!(
                    "component of {} over {} has dimension {dim}",
                    self.source.label(tau),
                    self.target.label(sigma)
                )));
            }
        }
        let label = if dim == 2 && star.fan.is_complete() { Some(identify_surface(&star.fan)?) } else { None };
        Ok(FiberComponent { primitive_cone: tau, relative_star: star, dim, label })
    }

    // Smallest source cone having every listed cone as a face.
    fn join(&self, members: &[usize]) -> Option<usize> {
        (0..self.source.cones().len()).find(|&c| members.iter().all(|&m| m == c || self.source.is_face(m, c)))
    }

    pub fn fiber_report(&self, sigma: usize) -> Result<FiberReport> {
        let set = self.sigma_prime_of(sigma)?;
        let primitive = self.primitive_cones(sigma)?;
        let index = if set.is_empty() { None } else { Some(self.index_of(sigma)?) };
        let components = primitive.iter().map(|&t| self.component(t, sigma)).collect::<Result<Vec<_>>>()?;
        let mut intersections = Vec::new();
        // subsets in lexicographic order, extended only while a common cone exists
        let mut stack: Vec<Vec<usize>> = (0..primitive.len()).rev().map(|i| vec![i]).collect();
        while let Some(sub) = stack.pop() {
            let members: Vec<usize> = sub.iter().map(|&i| primitive[i]).collect();
            let Some(j) = self.join(&members) else { continue };
            if sub.len() >= 2 {
                let over = self.home[j] == sigma;
                let relative_star = if over { Some(self.relative_star(j, sigma)?) } else { None };
                intersections.push(ComponentIntersection {
                    members,
                    cone: over.then_some(j),
                    relative_star,
                });
            }
            let last = *sub.last().expect("nonempty");
            for next in (last + 1..primitive.len()).rev() {
                let mut s = sub.clone();
                s.push(next);
                stack.push(s);
            }
        }
        Ok(FiberReport { sigma, sigma_prime_set: set, primitive, index, components, intersections })
    }

    /// The fibration criterion for a surjective map.
    pub fn is_fibration(&self) -> Result<FibrationCertificate> {
        let n = self.target.rank();
        if self.image_rank() != n || (0..self.target.cones().len()).any(|s| !self.home.contains(&s)) {
            return Err(Error::NotSurjective);
        }
        let expected = self.source.rank() - n;
        let mut violations = Vec::new();
        let mut dimensions_match = true;
        for sigma in 0..self.target.cones().len() {
            let sc = self.target.cone(sigma);
            let hull = ConeHRep::of_generators(n, &sc.generators);
            for tau in self.primitive_cones(sigma)? {
                let tc = self.source.cone(tau);
                let imgs: Vec<LatticeVector> = tc.generators.iter().map(|g| self.phi.apply(g)).collect();
                let image = ConeHRep::of_generators(n, &imgs);
                let bijective = tc.dim == sc.dim
                    && rational_rank(&imgs, n) == tc.dim
                    && sc.generators.iter().all(|g| image.contains(g))
                    && imgs.iter().all(|v| hull.contains(v));
                if !bijective {
                    violations.push((sigma, tau));
                }
                if self.relative_star(tau, sigma)?.fan.rank() != expected {
                    dimensions_match = false;
                }
            }
        }
        let mut hit = BTreeSet::new();
        let mut rays_ok = true;
        for v in self.source.rays() {
            let w = self.phi.apply(v);
            if w.is_zero() {
                continue;
            }
            match self.target.rays().iter().position(|r| *r == w.primitive()) {
                Some(i) => {
                    hit.insert(i);
                }
                None => rays_ok = false,
            }
        }
        let rays_onto_rays = rays_ok && hit.len() == self.target.rays().len();
        Ok(FibrationCertificate { holds: violations.is_empty(), violations, dimensions_match, rays_onto_rays })
    }

    /// One report per target cone, by dimension then ray indices, with the
    /// divisibility `Ind(σ) | Ind(τ)` for faces `τ ≺ σ` verified.
    pub fn flattening_stratification(&self) -> Result<Vec<FiberReport>> {
        let reports = (0..self.target.cones().len()).map(|s| self.fiber_report(s)).collect::<Result<Vec<_>>>()?;
        for (s, rs) in reports.iter().enumerate() {
            let Some(Index::Finite(is)) = &rs.index else { continue };
            for &t in self.target.proper_faces(s) {
                match &reports[t].index {
                    Some(Index::Finite(it)) if !it.is_multiple_of(is) => {
                        return Err(Error::Invariant(format!(
                            "index over {} does not divide the index over its face {}",
                            self.target.label(s),
                            self.target.label(t)
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(reports)
    }

    /// Target cones over which the covering has fewer sheets than `[N : φ(N')]`.
    pub fn branch_locus(&self) -> Result<Vec<usize>> {
        let Index::Finite(total) = self.lattice_index() else {
            return self.onto_image()?.branch_locus();
        };
        let mut out = Vec::new();
        for s in 0..self.target.cones().len() {
            if self.sigma_prime_of(s)?.is_empty() {
                continue;
            }
            if let Index::Finite(i) = self.index_of(s)? {
                if i < total {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }

    /// Faces of `p` selected by the cones over `sigma`, with primitivity.
    pub fn lighted_part(&self, p: &Polytope, sigma: usize) -> Result<LightedPart> {
        if p.ambient_rank() != self.source.rank() {
            return Err(Error::Dimension("polytope and source fan ranks differ".into()));
        }
        for &m in self.source.maximal_indices() {
            cone_weight(p, &self.source, m)?;
        }
        let set = self.sigma_prime_of(sigma)?;
        let mut by_face: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for &s in &set {
            let face = p.minimizing_vertices(&self.source.cone(s).relint_point(self.source.rank()));
            by_face.entry(face).or_default().push(s);
        }
        let keys: Vec<Vec<usize>> = by_face.keys().cloned().collect();
        let proper_subset = |a: &Vec<usize>, b: &Vec<usize>| a.len() < b.len() && a.iter().all(|x| b.contains(x));
        let faces: Vec<LightedFace> = by_face
            .into_iter()
            .map(|(vertices, cones)| {
                let primitive = !keys.iter().any(|k| proper_subset(&vertices, k));
                LightedFace { vertices, cones, primitive }
            })
            .collect();
        let prim_cones = self.primitive_cones(sigma)?;
        let prim_faces: Vec<&LightedFace> = faces.iter().filter(|f| f.primitive).collect();
        let consistent_with_cones = prim_faces.len() == prim_cones.len()
            && prim_faces.iter().all(|f| f.cones.iter().filter(|c| prim_cones.contains(c)).count() == 1);
        Ok(LightedPart { faces, consistent_with_cones })
    }

    /// The fiber polytope of `τ'` over `σ` and its comparison with the relative star.
    pub fn fiber_polytope(&self, p: &Polytope, tau: usize, sigma: usize) -> Result<FiberPolytope> {
        let restriction = restriction_polytope(p, tau, &self.source)?;
        self.fiber_polytope_from(restriction, tau, sigma)
    }

    /// As [`FanMap::fiber_polytope`], starting from a given restriction polytope.
    pub fn fiber_polytope_from(&self, restriction: Restriction, tau: usize, sigma: usize) -> Result<FiberPolytope> {
        let star = self.relative_star(tau, sigma)?;
        let projection = project_polytope(&restriction, &self.phi, &self.target.cone(sigma).generators)?;
        let n1 = self.source.rank();
        let b = Matrix::from_cols(&restriction.basis, n1);
        let l = Matrix::from_cols(&star.lifts, n1);
        let k = restriction.basis.len();
        let qlift = Matrix::from_cols(&projection.quotient.quotient_basis, k);
        let h = qlift.transpose().mul(&b.transpose()).mul(&l);
        if h.rows() != h.cols() || !h.det().abs().is_one() {
            return Err(Error::Invariant("fiber lattice and relative star lattice are not dual".into()));
        }
        let rays: Vec<LatticeVector> = star.fan.rays().iter().map(|z| h.apply(z)).collect();
        let star_in_polytope_coords =
            Fan::build(h.rows(), rays, star.fan.ray_names().to_vec(), star.fan.maximal_ray_sets())?;
        let relation = projection.polytope.normal_fan_relation(&star_in_polytope_coords);
        Ok(FiberPolytope { restriction, projection, star, star_in_polytope_coords, relation })
    }
}

/// Parses a cone given by ray names, such as `v1',e2'`; `0` or the empty string is the zero cone.
pub fn cone_by_label(fan: &Fan, label: &str) -> Result<usize> {
    let label = label.trim();
    if label.is_empty() || label == "0" {
        return fan.cone_index(&[]).ok_or(Error::ConeNotInFan);
    }
    let names: Vec<&str> = label.split(',').map(str::trim).collect();
    fan.cone_by_names(&names).ok_or(Error::ConeNotInFan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::build_fan;
    use crate::lattice::lv;

    fn line() -> Fan {
        build_fan(1, vec![lv(&[1]), lv(&[-1])], vec![vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn doubling_map() {
        let m = FanMap::new(LatticeMap::new(Matrix::from_i64(1, 1, &[2])), line(), line()).unwrap();
        let zero = m.target().cone_index(&[]).unwrap();
        assert_eq!(m.index_of(zero).unwrap(), Index::Finite(2.into()));
        for s in 0..3 {
            if s != zero {
                assert_eq!(m.index_of(s).unwrap(), Index::Finite(1.into()));
            }
        }
        assert!(m.check_index_identity().unwrap());
        assert_eq!(m.flattening_stratification().unwrap().len(), 3);
        assert_eq!(m.branch_locus().unwrap().len(), 2);
    }

    #[test]
    fn straddling_cone_is_rejected() {
        let src = build_fan(2, vec![lv(&[1, 1]), lv(&[-1, 1])], vec![vec![0, 1]]).unwrap();
        let phi = LatticeMap::new(Matrix::from_i64(1, 2, &[1, 0]));
        assert!(!is_map_of_fans(&phi, &src, &line()));
        assert!(matches!(FanMap::new(phi, src, line()), Err(Error::NotMapOfFans(_))));
    }

    #[test]
    fn non_fibration() {
        let src = build_fan(2, vec![lv(&[1, 0]), lv(&[1, 2])], vec![vec![0, 1]]).unwrap();
        let phi = LatticeMap::new(Matrix::from_i64(1, 2, &[1, 0]));
        let m = FanMap::new(phi, src, line()).unwrap();
        // the negative half-line has nothing over it
        assert_eq!(m.is_fibration(), Err(Error::NotSurjective));
        let plus = m.target().cone_by_names(&["r0"]).unwrap();
        assert_eq!(m.primitive_cones(plus).unwrap().len(), 2);
        // blow-up of the plane at the origin: the exceptional ray sits over the 2-cone
        let blown = build_fan(2, vec![lv(&[1, 0]), lv(&[1, 1]), lv(&[0, 1])], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let quad = build_fan(2, vec![lv(&[1, 0]), lv(&[0, 1])], vec![vec![0, 1]]).unwrap();
        let m = FanMap::new(LatticeMap::identity(2), blown, quad).unwrap();
        let cert = m.is_fibration().unwrap();
        assert!(!cert.holds && !cert.dimensions_match);
        assert_eq!(cert.violations.len(), 1);
    }

    #[test]
    fn projection_of_product() {
        // P1 x P1 onto the first factor is a fibration with P1 fibers
        let src = build_fan(
            2,
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, 0]), lv(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap();
        let m = FanMap::new(LatticeMap::new(Matrix::from_i64(1, 2, &[1, 0])), src, line()).unwrap();
        let cert = m.is_fibration().unwrap();
        assert!(cert.holds && cert.dimensions_match && cert.rays_onto_rays);
        for r in m.flattening_stratification().unwrap() {
            assert_eq!(r.components.len(), 1);
            assert_eq!(r.components[0].dim, 1);
            assert_eq!(r.index, Some(Index::Finite(1.into())));
        }
    }

    #[test]
    fn image_of_a_line() {
        let p2 = build_fan(
            2,
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap();
        let m = FanMap::new(LatticeMap::new(Matrix::from_i64(2, 1, &[1, 0])), line(), p2).unwrap();
        let img = m.image_fan().unwrap();
        assert_eq!(img.rank(), 1);
        assert_eq!(img.rays().len(), 2);
        assert_eq!(img.cones().len(), 3);
        let onto = m.onto_image().unwrap();
        assert_eq!(onto.lattice_index(), Index::Finite(1.into()));
        let zero_map = FanMap::new(LatticeMap::new(Matrix::zeros(2, 1)), line(), m.target().clone()).unwrap();
        assert_eq!(zero_map.image_fan().unwrap().cones().len(), 1);
    }
}
