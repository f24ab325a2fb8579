//! Lattice polytopes: exact hulls with H-representations, lattice points,
//! duality, normal fans, and the restriction and projection polytopes
//! attached to cones of a refining fan.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{
    coordinates_in, left_inverse, orthogonal_complement, quotient_lattice, rational_rank,
    saturation, LatticeMap, LatticeVector, Matrix, QuotientLattice,
};
use crate::polyhedral::cone_generators;

/// The inequality `⟨normal, x⟩ ≥ -offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: BigInt,
}

impl Facet {
    pub fn value(&self, x: &LatticeVector) -> BigInt {
        self.normal.dot(x) + &self.offset
    }
}

/// A lattice polytope with its vertices and facet inequalities.
///
/// Lower-dimensional polytopes are handled in a chart `x = origin + B c` of
/// their affine span, where `B` is a lattice basis of the span's direction.
#[derive(Clone, Debug)]
pub struct Polytope {
    ambient_rank: usize,
    dim: usize,
    vertices: Vec<LatticeVector>,
    origin: LatticeVector,
    basis: Matrix,
    chart_inverse: Matrix,
    local_facets: Vec<Facet>,
    facets: Vec<Facet>,
    equations: Vec<(LatticeVector, BigInt)>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

/// Convex hull of a nonempty set of lattice points.
pub fn hull(points: &[LatticeVector]) -> Result<Polytope> {
    let mut pts: Vec<LatticeVector> = points.to_vec();
    pts.sort();
    pts.dedup();
    let Some(p0) = pts.first().cloned() else { return Err(Error::Empty) };
    let n = p0.rank();
    if pts.iter().any(|p| p.rank() != n) {
        return Err(Error::Dimension("points of different ranks".into()));
    }
    let diffs: Vec<LatticeVector> = pts.iter().map(|p| p.sub(&p0)).collect();
    let normals = orthogonal_complement(&diffs, n);
    let (origin, basis, chart_inverse) = if normals.is_empty() {
        (LatticeVector::zero(n), Matrix::identity(n), Matrix::identity(n))
    } else {
        let b = Matrix::from_cols(&orthogonal_complement(&normals, n), n);
        let inv = left_inverse(&b)?;
        (p0.clone(), b, inv)
    };
    let k = basis.cols();
    let local: Vec<LatticeVector> = pts.iter().map(|p| chart_inverse.apply(&p.sub(&origin))).collect();
    let local_facets = if k == 0 { Vec::new() } else { local_hull(k, &local) };
    let vertices: Vec<LatticeVector> = if k == 0 {
        vec![p0.clone()]
    } else {
        pts.iter()
            .zip(&local)
            .filter(|(_, c)| {
                let tight: Vec<LatticeVector> =
                    local_facets.iter().filter(|f| f.value(c).is_zero()).map(|f| f.normal.clone()).collect();
                rational_rank(&tight, k) == k
            })
            .map(|(p, _)| p.clone())
            .collect()
    };
    let lift = chart_inverse.transpose();
    let facets = local_facets
        .iter()
        .map(|f| {
            let normal = lift.apply(&f.normal);
            let offset = &f.offset - normal.dot(&origin);
            Facet { normal, offset }
        })
        .collect();
    let equations = normals.iter().map(|w| (w.clone(), w.dot(&p0))).collect();
    Ok(Polytope { ambient_rank: n, dim: k, vertices, origin, basis, chart_inverse, local_facets, facets, equations })
}

// Facets of the full-dimensional hull of points in Z^k, sorted.
fn local_hull(k: usize, pts: &[LatticeVector]) -> Vec<Facet> {
    let homog: Vec<LatticeVector> = pts
        .iter()
        .map(|p| {
            let mut v = vec![BigInt::one()];
            v.extend(p.coords().iter().cloned());
            LatticeVector::new(v)
        })
        .collect();
    let g = cone_generators(k + 1, &homog, &[]);
    debug_assert!(g.lineality.is_empty());
    let mut facets: Vec<Facet> = g
        .rays
        .into_iter()
        .map(|r| {
            let c = r.into_coords();
            let normal = LatticeVector::new(c[1..].to_vec());
            let gcd = normal.content();
            Facet { normal: normal.primitive(), offset: &c[0] / &gcd }
        })
        .filter(|f| !f.normal.is_zero())
        .collect();
    facets.sort();
    facets
}

impl Polytope {
    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_rank
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    /// Facet inequalities. For lower-dimensional polytopes the normals are
    /// representatives modulo the equations of the affine span.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[(LatticeVector, BigInt)] {
        &self.equations
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.equations.iter().all(|(w, c)| w.dot(x) == *c) && self.facets.iter().all(|f| !f.value(x).is_negative())
    }

    /// Coordinates in the chart of the affine span.
    pub fn to_local(&self, x: &LatticeVector) -> LatticeVector {
        self.chart_inverse.apply(&x.sub(&self.origin))
    }

    pub fn from_local(&self, c: &LatticeVector) -> LatticeVector {
        self.origin.add(&self.basis.apply(c))
    }

    /// Facets in chart coordinates.
    pub fn local_facets(&self) -> &[Facet] {
        &self.local_facets
    }

    pub fn facet_count(&self) -> Result<usize> {
        if !self.is_full_dimensional() {
            return Err(Error::Degenerate);
        }
        Ok(self.facets.len())
    }

    /// For each facet, the indices of the vertices on it.
    pub fn facet_vertex_incidence(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_full_dimensional() {
            return Err(Error::Degenerate);
        }
        Ok(self
            .facets
            .iter()
            .map(|f| (0..self.vertices.len()).filter(|&i| f.value(&self.vertices[i]).is_zero()).collect())
            .collect())
    }

    /// All lattice points, lexicographically ordered.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        let local: Vec<LatticeVector> = self.vertices.iter().map(|v| self.to_local(v)).collect();
        let mut out: Vec<LatticeVector> =
            enumerate_box(self.dim, &local, &self.local_facets).iter().map(|c| self.from_local(c)).collect();
        out.sort();
        out
    }

    /// Lattice points in the relative interior.
    pub fn relative_interior_points(&self) -> Vec<LatticeVector> {
        self.lattice_points()
            .into_iter()
            .filter(|x| {
                let c = self.to_local(x);
                self.local_facets.iter().all(|f| f.value(&c).is_positive())
            })
            .collect()
    }

    pub fn translate(&self, v: &LatticeVector) -> Polytope {
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|x| x.add(v)).collect();
        hull(&pts).expect("translate of a nonempty polytope")
    }

    /// Image under a lattice map.
    pub fn image(&self, f: &LatticeMap) -> Polytope {
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|x| f.apply(x)).collect();
        hull(&pts).expect("image of a nonempty polytope")
    }

    fn origin_interior(&self) -> Result<()> {
        if !self.is_full_dimensional() {
            return Err(Error::Degenerate);
        }
        if self.facets.iter().any(|f| !f.offset.is_positive()) {
            return Err(Error::OriginNotInterior);
        }
        Ok(())
    }

    /// `{y : ⟨y, x⟩ ≥ -1 for all x in P}`; fails unless the result is a lattice polytope.
    pub fn dual(&self) -> Result<Polytope> {
        self.origin_interior()?;
        let mut verts = Vec::new();
        for f in &self.facets {
            if !f.normal.content().is_multiple_of(&f.offset) {
                return Err(Error::NonIntegralDual);
            }
            verts.push(LatticeVector::new(f.normal.coords().iter().map(|c| c / &f.offset).collect()));
        }
        hull(&verts)
    }

    /// True iff every facet lies at lattice distance one from the origin.
    pub fn is_reflexive(&self) -> Result<bool> {
        self.origin_interior()?;
        Ok(self.facets.iter().all(|f| f.offset.is_one()))
    }

    /// Normal fan: inward facet normals as rays, one maximal cone per vertex.
    pub fn normal_fan(&self) -> Result<Fan> {
        if !self.is_full_dimensional() {
            return Err(Error::Degenerate);
        }
        let rays: Vec<LatticeVector> = self.facets.iter().map(|f| f.normal.clone()).collect();
        let names = (0..rays.len()).map(|i| format!("n{}", i + 1)).collect();
        let tops = self
            .vertices
            .iter()
            .map(|v| (0..self.facets.len()).filter(|&j| self.facets[j].value(v).is_zero()).collect())
            .collect();
        Fan::build(self.ambient_rank, rays, names, tops)
    }

    /// Vertices minimizing `⟨·, y⟩`, as indices.
    pub fn minimizing_vertices(&self, y: &LatticeVector) -> Vec<usize> {
        let vals: Vec<BigInt> = self.vertices.iter().map(|v| v.dot(y)).collect();
        let min = vals.iter().min().cloned().unwrap_or_default();
        (0..vals.len()).filter(|&i| vals[i] == min).collect()
    }

    /// Lattice points in the relative interior of the face spanned by the
    /// given vertices; empty for a vertex.
    pub fn face_interior_points(&self, face: &[usize]) -> Vec<LatticeVector> {
        let pts: Vec<LatticeVector> = face.iter().map(|&i| self.vertices[i].clone()).collect();
        match hull(&pts) {
            Ok(q) if q.dim() > 0 => q.relative_interior_points(),
            _ => Vec::new(),
        }
    }

    /// How this polytope's normal fan relates to `fan` in the dual lattice.
    pub fn normal_fan_relation(&self, fan: &Fan) -> NormalFanRelation {
        if fan.rank() != self.ambient_rank {
            return NormalFanRelation::Neither;
        }
        let refines = fan.maximal_cones().all(|c| {
            let best = self.minimizing_vertices(&c.relint_point(fan.rank()));
            best.len() == 1 && c.generators.iter().all(|g| self.minimizing_vertices(g).contains(&best[0]))
        });
        if !refines {
            return NormalFanRelation::Neither;
        }
        let Ok(nf) = self.normal_fan() else { return NormalFanRelation::Refines };
        let key = |f: &Fan| -> BTreeSet<BTreeSet<LatticeVector>> {
            f.maximal_cones().map(|c| c.generators.iter().cloned().collect()).collect()
        };
        if key(&nf) == key(fan) {
            NormalFanRelation::Equal
        } else {
            NormalFanRelation::Refines
        }
    }
}

/// Outcome of comparing a fan with the normal fan of a polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalFanRelation {
    Equal,
    /// Every cone of the fan lies in a normal cone, and the fans differ.
    Refines,
    Neither,
}

fn enumerate_box(k: usize, local: &[LatticeVector], facets: &[Facet]) -> Vec<LatticeVector> {
    if k == 0 {
        return vec![LatticeVector::zero(0)];
    }
    let lo: Vec<BigInt> = (0..k).map(|i| local.iter().map(|v| v.coords()[i].clone()).min().unwrap()).collect();
    let hi: Vec<BigInt> = (0..k).map(|i| local.iter().map(|v| v.coords()[i].clone()).max().unwrap()).collect();
    let small = |x: &BigInt| x.to_i64().is_some_and(|v| v.abs() < (1 << 40));
    let fits = lo.iter().chain(&hi).all(small)
        && facets.iter().all(|f| small(&f.offset) && f.normal.coords().iter().all(small));
    if fits {
        let lo: Vec<i64> = lo.iter().map(|x| x.to_i64().unwrap()).collect();
        let hi: Vec<i64> = hi.iter().map(|x| x.to_i64().unwrap()).collect();
        let fs: Vec<(Vec<i128>, i128)> = facets
            .iter()
            .map(|f| {
                (f.normal.coords().iter().map(|c| c.to_i64().unwrap() as i128).collect(), f.offset.to_i64().unwrap() as i128)
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if fs.iter().all(|(a, b)| a.iter().zip(&cur).map(|(x, &y)| x * y as i128).sum::<i128>() + b >= 0) {
                out.push(LatticeVector::from_i64(&cur));
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i];
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let c = LatticeVector::new(cur.clone());
        if facets.iter().all(|f| !f.value(&c).is_negative()) {
            out.push(c);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i].clone();
        }
    }
}

/// Weight of a maximal cone: the vertex minimizing the cone's interior point,
/// which must also minimize every generator.
pub fn cone_weight(p: &Polytope, fan: &Fan, cone: usize) -> Result<LatticeVector> {
    let c = fan.cone(cone);
    let best = p.minimizing_vertices(&c.relint_point(fan.rank()));
    if best.len() != 1 || !c.generators.iter().all(|g| p.minimizing_vertices(g).contains(&best[0])) {
        return Err(Error::NotRefinement);
    }
    Ok(p.vertices()[best[0]].clone())
}

/// The polytope of a bundle restricted to the orbit closure of a cone,
/// translated into `τ^⊥` and written in a basis of `τ^⊥ ∩ M`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub polytope: Polytope,
    /// Basis of `τ^⊥ ∩ M` in ambient coordinates.
    pub basis: Vec<LatticeVector>,
    /// The translation `m_τ`.
    pub anchor: LatticeVector,
    /// Indices of the vertices of the face of `P` selected by `τ`.
    pub face: Vec<usize>,
    coords: Matrix,
}

impl Restriction {
    /// Local coordinates of `m - m_τ`, if it lies in `τ^⊥`.
    pub fn to_local(&self, m: &LatticeVector) -> Option<LatticeVector> {
        let d = m.sub(&self.anchor);
        let c = self.coords.apply(&d);
        let back = Matrix::from_cols(&self.basis, m.rank()).apply(&c);
        (back == d).then_some(c)
    }

    pub fn to_ambient(&self, c: &LatticeVector) -> LatticeVector {
        self.anchor.add(&Matrix::from_cols(&self.basis, self.anchor.rank()).apply(c))
    }
}

/// Restriction polytope with the default anchor (weight of the
/// lexicographically smallest maximal cone containing `tau`) and basis.
pub fn restriction_polytope(p: &Polytope, tau: usize, fan: &Fan) -> Result<Restriction> {
    restriction_polytope_with(p, tau, fan, None, None)
}

/// Restriction polytope with an optional caller-chosen basis of `τ^⊥ ∩ M` and anchor.
pub fn restriction_polytope_with(
    p: &Polytope,
    tau: usize,
    fan: &Fan,
    basis: Option<&[LatticeVector]>,
    anchor: Option<&LatticeVector>,
) -> Result<Restriction> {
    if tau >= fan.cones().len() {
        return Err(Error::ConeNotInFan);
    }
    let n = p.ambient_rank();
    let t = fan.cone(tau);
    let face = p.minimizing_vertices(&t.relint_point(n));
    let anchor = match anchor {
        Some(a) => a.clone(),
        None => {
            let top = fan
                .maximal_indices()
                .iter()
                .copied()
                .find(|&m| fan.is_face(tau, m))
                .ok_or(Error::ConeNotInFan)?;
            cone_weight(p, fan, top)?
        }
    };
    if !face.iter().any(|&i| p.vertices()[i] == anchor) {
        return Err(Error::NotRefinement);
    }
    let basis: Vec<LatticeVector> = match basis {
        Some(b) => {
            let ok = b.len() == n - t.dim
                && b.iter().all(|v| t.generators.iter().all(|g| g.dot(v).is_zero()));
            if !ok {
                return Err(Error::Dimension("basis does not span the orthogonal lattice".into()));
            }
            b.to_vec()
        }
        None => orthogonal_complement(&t.generators, n),
    };
    let coords = left_inverse(&Matrix::from_cols(&basis, n))?;
    let local: Vec<LatticeVector> = face.iter().map(|&i| coords.apply(&p.vertices()[i].sub(&anchor))).collect();
    let polytope = hull(&local)?;
    Ok(Restriction { polytope, basis, anchor, face, coords })
}

/// A restriction polytope pushed to `τ^⊥ / φ†(σ^⊥)`.
#[derive(Clone, Debug)]
pub struct Projection {
    pub polytope: Polytope,
    /// Quotient of the local lattice of the restriction by the saturated span of `φ†(σ^⊥)`.
    pub quotient: QuotientLattice,
    /// Coordinates of `φ†` applied to a basis of `σ^⊥ ∩ M`, as columns (`k x s`).
    pub g: Matrix,
    /// Basis of `σ^⊥ ∩ M`.
    pub sigma_perp: Vec<LatticeVector>,
}

impl Projection {
    pub fn project(&self, c: &LatticeVector) -> LatticeVector {
        self.quotient.project(c)
    }
}

/// Projects a restriction polytope along `φ†(σ^⊥)`, where `sigma` is given by its generators in `N`.
pub fn project_polytope(r: &Restriction, phi: &LatticeMap, sigma: &[LatticeVector]) -> Result<Projection> {
    let n = phi.target_rank();
    let k = r.basis.len();
    let sigma_perp = orthogonal_complement(sigma, n);
    let dual = phi.matrix().transpose();
    let mut cols = Vec::new();
    for u in &sigma_perp {
        let img = dual.apply(u);
        cols.push(coordinates_in(&r.basis, &img).ok_or(Error::NotOverSigma)?);
    }
    let g = Matrix::from_cols(&cols, k);
    let sat = saturation(&cols, k);
    let quotient = quotient_lattice(k, &sat)?;
    let pts: Vec<LatticeVector> = r.polytope.vertices().iter().map(|c| quotient.project(c)).collect();
    Ok(Projection { polytope: hull(&pts)?, quotient, g, sigma_perp })
}

/// Whether some lattice automorphism plus translation carries `a` onto `b`.
pub fn affinely_equivalent(a: &[LatticeVector], b: &[LatticeVector]) -> bool {
    affine_equivalence(a, b).is_some()
}

/// An affine unimodular map `x ↦ A x + t` carrying the point set `a` onto `b`.
pub fn affine_equivalence(a: &[LatticeVector], b: &[LatticeVector]) -> Option<(Matrix, LatticeVector)> {
    let sa: BTreeSet<LatticeVector> = a.iter().cloned().collect();
    let sb: BTreeSet<LatticeVector> = b.iter().cloned().collect();
    if sa.len() != sb.len() || sa.is_empty() {
        return None;
    }
    let a: Vec<LatticeVector> = sa.iter().cloned().collect();
    let b: Vec<LatticeVector> = sb.iter().cloned().collect();
    let n = a[0].rank();
    if b[0].rank() != n {
        return None;
    }
    // affine frame of `a`
    let p0 = a[0].clone();
    let mut frame: Vec<usize> = Vec::new();
    let mut dirs: Vec<LatticeVector> = Vec::new();
    for (i, p) in a.iter().enumerate().skip(1) {
        let mut trial = dirs.clone();
        trial.push(p.sub(&p0));
        if rational_rank(&trial, n) == trial.len() {
            dirs = trial;
            frame.push(i);
        }
    }
    let d = dirs.len();
    let b_dirs_rank = rational_rank(&b.iter().map(|q| q.sub(&b[0])).collect::<Vec<_>>(), n);
    if b_dirs_rank != d {
        return None;
    }
    // Complete the frame directions to a rational basis using unit vectors.
    let mut full = dirs.clone();
    let mut extra = Vec::new();
    for i in 0..n {
        let e = LatticeVector::unit(n, i);
        let mut trial = full.clone();
        trial.push(e.clone());
        if rational_rank(&trial, n) == trial.len() {
            full = trial;
            extra.push(e);
        }
    }
    let u = Matrix::from_cols(&full, n);
    let det_u = u.det();
    let adj = crate::fan::adjugate(&u);
    let mut tuple = vec![0usize; d + 1];
    let total = b.len().pow((d + 1) as u32);
    for code in 0..total {
        let mut c = code;
        for t in tuple.iter_mut() {
            *t = c % b.len();
            c /= b.len();
        }
        let q0 = &b[tuple[0]];
        let mut w: Vec<LatticeVector> = tuple[1..].iter().map(|&j| b[j].sub(q0)).collect();
        // the complementary directions are sent to themselves
        w.extend(extra.iter().cloned());
        let num = Matrix::from_cols(&w, n).mul(&adj);
        let mut m = Matrix::zeros(n, n);
        let mut ok = true;
        'fill: for i in 0..n {
            for j in 0..n {
                let x = num.get(i, j);
                if !x.is_multiple_of(&det_u) {
                    ok = false;
                    break 'fill;
                }
                m.set(i, j, x / &det_u);
            }
        }
        if !ok {
            continue;
        }
        let t = q0.sub(&m.apply(&p0));
        let image: BTreeSet<LatticeVector> = a.iter().map(|x| m.apply(x).add(&t)).collect();
        if image == sb && lattice_preserving_on_span(&m, &dirs, n) {
            return Some((m, t));
        }
    }
    None
}

// The map must restrict to an isomorphism between the saturated lattices of
// the two affine spans; checked by comparing the indices of the direction
// lattices inside their saturations.
fn lattice_preserving_on_span(m: &Matrix, dirs: &[LatticeVector], n: usize) -> bool {
    if dirs.is_empty() {
        return true;
    }
    let img: Vec<LatticeVector> = dirs.iter().map(|v| m.apply(v)).collect();
    let sat_a = saturation(dirs, n);
    let sat_b = saturation(&img, n);
    let ia = index_in(&sat_a, dirs);
    let ib = index_in(&sat_b, &img);
    ia == ib && ia.is_some()
}

fn index_in(basis: &[LatticeVector], vs: &[LatticeVector]) -> Option<BigInt> {
    let cols: Option<Vec<LatticeVector>> = vs.iter().map(|v| coordinates_in(basis, v)).collect();
    let m = Matrix::from_cols(&cols?, basis.len());
    Some(m.det().abs())
}
