//! Rational polyhedral cones and fans: face closure, validation, multiplicity,
//! stars, star subdivision and recognition of complete toric surfaces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    quotient_lattice, rational_rank, saturation, smith_normal_form, solve_in_span, LatticeVector,
    Matrix,
};
use crate::polyhedral::{cone_generators, ConeHRep};

/// A cone of a fan, given by indices into the fan's ray table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub rays: Vec<usize>,
    pub generators: Vec<LatticeVector>,
    pub dim: usize,
}

impl Cone {
    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.generators.len() == self.dim
    }

    /// Sum of the primitive generators; the zero vector for the zero cone.
    pub fn relint_point(&self, rank: usize) -> LatticeVector {
        self.generators.iter().fold(LatticeVector::zero(rank), |acc, g| acc.add(g))
    }

    /// Index of the sublattice spanned by the generators inside `N_σ`.
    pub fn multiplicity(&self) -> Result<BigInt> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if self.generators.is_empty() {
            return Ok(BigInt::one());
        }
        let rank = self.generators[0].rank();
        let snf = smith_normal_form(&Matrix::from_cols(&self.generators, rank));
        Ok(snf.diagonal.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    /// Relative-interior test by a rational solve against the generators.
    pub fn contains_relint_simplicial(&self, v: &LatticeVector) -> Result<bool> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if self.generators.is_empty() {
            return Ok(v.is_zero());
        }
        Ok(match solve_in_span(&self.generators, v) {
            Some(lam) => lam.iter().all(|x| x.is_positive()),
            None => false,
        })
    }
}

/// A fan: primitive rays and a face-closed set of strongly convex cones.
#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    names: Vec<String>,
    cones: Vec<Cone>,
    maximal: Vec<usize>,
    lookup: HashMap<Vec<usize>, usize>,
    faces: Vec<Vec<usize>>,
    hreps: Vec<ConeHRep>,
}

/// Builds and validates a fan from rays and maximal cones (as ray-index lists).
pub fn build_fan(rank: usize, rays: Vec<LatticeVector>, maximal_cones: Vec<Vec<usize>>) -> Result<Fan> {
    let names = (0..rays.len()).map(|i| format!("r{i}")).collect();
    Fan::build(rank, rays, names, maximal_cones)
}

impl Fan {
    /// Like [`build_fan`], with display names for the rays.
    pub fn build(
        rank: usize,
        rays: Vec<LatticeVector>,
        names: Vec<String>,
        maximal_cones: Vec<Vec<usize>>,
    ) -> Result<Fan> {
        if names.len() != rays.len() {
            return Err(Error::Dimension("one name per ray expected".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.rank() != rank {
                return Err(Error::Dimension(format!("ray {} has rank {}", names[i], r.rank())));
            }
            if !r.is_primitive() {
                return Err(Error::NonPrimitiveRay(format!("{} = {}", names[i], r)));
            }
            if rays[..i].contains(r) {
                return Err(Error::DuplicateRay(format!("{} = {}", names[i], r)));
            }
        }
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        for c in maximal_cones {
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::Dimension(format!("cone refers to missing ray {bad}")));
            }
            let gens: Vec<LatticeVector> = c.iter().map(|&i| rays[i].clone()).collect();
            let label = || c.iter().map(|&i| names[i].clone()).collect::<Vec<_>>().join(",");
            let dual = cone_generators(rank, &gens, &[]);
            let mut span = dual.rays.clone();
            span.extend(dual.lineality.iter().cloned());
            if rational_rank(&span, rank) < rank {
                return Err(Error::NotStronglyConvex(label()));
            }
            let h = ConeHRep { facets: dual.rays, equations: dual.lineality };
            let dim = rank - h.equations.len();
            // every listed generator must span an extreme ray
            for g in &gens {
                let mut tight: Vec<LatticeVector> =
                    h.facets.iter().filter(|f| f.dot(g).is_zero()).cloned().collect();
                tight.extend(h.equations.iter().cloned());
                if rational_rank(&tight, rank) != rank - 1 {
                    return Err(Error::NotStronglyConvex(format!("{} (redundant generator)", label())));
                }
            }
            if gens.len() == dim {
                for mask in 0u64..(1u64 << c.len()) {
                    all.insert((0..c.len()).filter(|&b| mask >> b & 1 == 1).map(|b| c[b]).collect());
                }
            } else {
                let facet_sets: Vec<Vec<usize>> = h
                    .facets
                    .iter()
                    .map(|f| c.iter().copied().filter(|&i| f.dot(&rays[i]).is_zero()).collect())
                    .collect();
                let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
                faces.insert(c.clone());
                let mut frontier: Vec<Vec<usize>> = vec![c.clone()];
                while let Some(face) = frontier.pop() {
                    for fs in &facet_sets {
                        let sub: Vec<usize> = face.iter().copied().filter(|i| fs.contains(i)).collect();
                        if sub.len() < face.len() && faces.insert(sub.clone()) {
                            frontier.push(sub);
                        }
                    }
                }
                all.extend(faces);
            }
        }
        let mut ordered: Vec<Cone> = all
            .into_iter()
            .map(|rs| {
                let generators: Vec<LatticeVector> = rs.iter().map(|&i| rays[i].clone()).collect();
                let dim = rational_rank(&generators, rank);
                Cone { rays: rs, generators, dim }
            })
            .collect();
        ordered.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
        let lookup: HashMap<Vec<usize>, usize> =
            ordered.iter().enumerate().map(|(i, c)| (c.rays.clone(), i)).collect();
        let hreps: Vec<ConeHRep> =
            ordered.iter().map(|c| ConeHRep::of_generators(rank, &c.generators)).collect();
        let faces: Vec<Vec<usize>> = ordered
            .iter()
            .map(|c| {
                ordered
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| d.rays.len() < c.rays.len() && d.rays.iter().all(|r| c.rays.contains(r)))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let mut maximal: Vec<usize> = (0..ordered.len())
            .filter(|&i| {
                !ordered.iter().any(|d| {
                    d.rays.len() > ordered[i].rays.len() && ordered[i].rays.iter().all(|r| d.rays.contains(r))
                })
            })
            .collect();
        maximal.sort_by(|&a, &b| ordered[a].rays.cmp(&ordered[b].rays));
        let fan = Fan { rank, rays, names, cones: ordered, maximal, lookup, faces, hreps };
        fan.validate_intersections()?;
        Ok(fan)
    }

    fn validate_intersections(&self) -> Result<()> {
        for (a_pos, &a) in self.maximal.iter().enumerate() {
            for &b in &self.maximal[a_pos + 1..] {
                let (ca, cb) = (&self.cones[a], &self.cones[b]);
                let common: Vec<usize> = ca.rays.iter().copied().filter(|r| cb.rays.contains(r)).collect();
                let bad = || Error::BadIntersection(self.cone_label(ca), self.cone_label(cb));
                let Some(&face) = self.lookup.get(&common) else { return Err(bad()) };
                let (ha, hb) = (&self.hreps[a], &self.hreps[b]);
                if self.separated(ha, ca, cb, &common) || self.separated(hb, cb, ca, &common) {
                    continue;
                }
                let mut ineq = ha.facets.clone();
                ineq.extend(hb.facets.iter().cloned());
                let mut eqs = ha.equations.clone();
                eqs.extend(hb.equations.iter().cloned());
                let meet = cone_generators(self.rank, &ineq, &eqs);
                if !meet.lineality.is_empty() || !meet.rays.iter().all(|r| self.hreps[face].contains(r)) {
                    return Err(bad());
                }
            }
        }
        Ok(())
    }

    // Sum of the facet normals of `c` through the common face: it is nonnegative on `c` and
    // vanishes exactly on that face, so nonpositivity on `other` certifies the intersection.
    fn separated(&self, h: &ConeHRep, c: &Cone, other: &Cone, common: &[usize]) -> bool {
        let mut u = LatticeVector::zero(self.rank);
        for f in &h.facets {
            if common.iter().all(|&r| f.dot(&self.rays[r]).is_zero()) {
                u = u.add(f);
            }
        }
        let exact = c.rays.iter().all(|&r| common.contains(&r) || u.dot(&self.rays[r]).is_positive());
        exact && other.generators.iter().all(|g| !u.dot(g).is_positive())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray_names(&self) -> &[String] {
        &self.names
    }

    pub fn ray_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All cones, ordered by dimension then ray indices; index 0 is the zero cone.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn maximal_indices(&self) -> &[usize] {
        &self.maximal
    }

    pub fn maximal_cones(&self) -> impl Iterator<Item = &Cone> {
        self.maximal.iter().map(|&i| &self.cones[i])
    }

    pub fn cone_index(&self, rays: &[usize]) -> Option<usize> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        key.dedup();
        self.lookup.get(&key).copied()
    }

    pub fn cone_by_names(&self, names: &[&str]) -> Option<usize> {
        let idx: Option<Vec<usize>> = names.iter().map(|n| self.ray_index(n)).collect();
        self.cone_index(&idx?)
    }

    /// Indices of the proper faces of cone `i`.
    pub fn proper_faces(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    pub fn is_face(&self, face: usize, of: usize) -> bool {
        face == of || self.faces[of].contains(&face)
    }

    pub fn hrep(&self, i: usize) -> &ConeHRep {
        &self.hreps[i]
    }

    pub fn cone_label(&self, c: &Cone) -> String {
        if c.rays.is_empty() {
            return "0".into();
        }
        c.rays.iter().map(|&i| self.names[i].clone()).collect::<Vec<_>>().join(",")
    }

    pub fn label(&self, i: usize) -> String {
        self.cone_label(&self.cones[i])
    }

    pub fn contains_relint(&self, i: usize, v: &LatticeVector) -> bool {
        self.hreps[i].contains_relint(v)
    }

    /// The unique cone whose relative interior contains `v`, searching small cones first.
    pub fn locate(&self, v: &LatticeVector) -> Option<usize> {
        (0..self.cones.len()).find(|&i| self.hreps[i].contains_relint(v))
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    pub fn is_smooth(&self) -> Result<bool> {
        for c in self.maximal_cones() {
            if !c.multiplicity()?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Maximal cones are full-dimensional and every codimension-one cone lies in exactly two of them.
    pub fn is_complete(&self) -> bool {
        if self.maximal_cones().any(|c| c.dim != self.rank) {
            return false;
        }
        if self.rank == 0 {
            return true;
        }
        self.cones.iter().enumerate().filter(|(_, c)| c.dim + 1 == self.rank).all(|(i, _)| {
            self.maximal.iter().filter(|&&m| self.faces[m].contains(&i)).count() == 2
        })
    }

    /// Cones of multiplicity greater than one all of whose proper faces have multiplicity one.
    pub fn singular_locus_cones(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, c) in self.cones.iter().enumerate() {
            if c.multiplicity()?.is_one() {
                continue;
            }
            let mut minimal = true;
            for &f in &self.faces[i] {
                if !self.cones[f].multiplicity()?.is_one() {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// The star of cone `tau` as a fan in `N / N_tau`.
    pub fn star(&self, tau: usize) -> Result<Fan> {
        let t = self.cones.get(tau).ok_or(Error::ConeNotInFan)?;
        let sub = saturation(&t.generators, self.rank);
        let q = quotient_lattice(self.rank, &sub)?;
        let mut rays: Vec<LatticeVector> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut tops: Vec<Vec<usize>> = Vec::new();
        for &m in &self.maximal {
            let c = &self.cones[m];
            if !t.rays.iter().all(|r| c.rays.contains(r)) {
                continue;
            }
            let mut top = Vec::new();
            for &r in c.rays.iter().filter(|r| !t.rays.contains(r)) {
                let img = q.project(&self.rays[r]).primitive();
                let pos = match rays.iter().position(|x| *x == img) {
                    Some(p) => p,
                    None => {
                        rays.push(img);
                        names.push(self.names[r].clone());
                        rays.len() - 1
                    }
                };
                top.push(pos);
            }
            tops.push(top);
        }
        Fan::build(q.free_rank(), rays, names, tops)
    }

    /// Star subdivision at the primitive vector `r`.
    pub fn star_subdivide(&self, r: &LatticeVector, name: &str) -> Result<Fan> {
        if !r.is_primitive() {
            return Err(Error::NonPrimitiveRay(r.to_string()));
        }
        let host = self.locate(r).ok_or(Error::OutsideSupport)?;
        let f = &self.cones[host];
        if f.rays.len() == 1 && self.rays[f.rays[0]] == *r {
            return Ok(self.clone());
        }
        let mut rays = self.rays.clone();
        let mut names = self.names.clone();
        rays.push(r.clone());
        names.push(name.to_string());
        let new = rays.len() - 1;
        let mut tops = Vec::new();
        for &m in &self.maximal {
            let c = &self.cones[m];
            if !f.rays.iter().all(|x| c.rays.contains(x)) {
                tops.push(c.rays.clone());
                continue;
            }
            if !c.is_simplicial() {
                return Err(Error::NotSimplicial);
            }
            for &g in &f.rays {
                let mut rs: Vec<usize> = c.rays.iter().copied().filter(|&x| x != g).collect();
                rs.push(new);
                tops.push(rs);
            }
        }
        Fan::build(self.rank, rays, names, tops)
    }

    /// Maximal cones as ray-index lists.
    pub fn maximal_ray_sets(&self) -> Vec<Vec<usize>> {
        self.maximal_cones().map(|c| c.rays.clone()).collect()
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fan of rank {} with rays", self.rank)?;
        for (n, r) in self.names.iter().zip(&self.rays) {
            write!(f, " {n}={r}")?;
        }
        Ok(())
    }
}

/// Complete toric surfaces recognised by [`identify_surface`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceLabel {
    CP2,
    CP1xCP1,
    WCP2_123,
    WCP2_113,
    F2,
    X4,
    X5,
    Unknown,
}

impl SurfaceLabel {
    pub const CATALOG: [SurfaceLabel; 7] = [
        SurfaceLabel::CP2,
        SurfaceLabel::CP1xCP1,
        SurfaceLabel::WCP2_123,
        SurfaceLabel::WCP2_113,
        SurfaceLabel::F2,
        SurfaceLabel::X4,
        SurfaceLabel::X5,
    ];

    /// Rays of the reference fan, counterclockwise.
    pub fn catalog_rays(self) -> Vec<LatticeVector> {
        let pts: &[[i64; 2]] = match self {
            SurfaceLabel::CP2 => &[[1, 0], [0, 1], [-1, -1]],
            SurfaceLabel::CP1xCP1 => &[[1, 0], [0, 1], [-1, 0], [0, -1]],
            SurfaceLabel::WCP2_123 => &[[2, 3], [-1, 0], [0, -1]],
            SurfaceLabel::WCP2_113 => &[[1, 3], [-1, 0], [0, -1]],
            SurfaceLabel::F2 => &[[1, 0], [0, 1], [-1, 2], [0, -1]],
            SurfaceLabel::X4 => &[[2, 3], [-1, 0], [-1, -1], [0, -1]],
            SurfaceLabel::X5 => &[[2, 3], [-1, 0], [-2, -3], [-1, -2], [0, -1]],
            SurfaceLabel::Unknown => &[],
        };
        pts.iter().map(|p| LatticeVector::from_i64(p)).collect()
    }

    /// The complete fan with the catalog rays.
    pub fn catalog_fan(self) -> Fan {
        surface_fan(self.catalog_rays()).expect("catalog fans are valid")
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceLabel::CP2 => "CP2",
            SurfaceLabel::CP1xCP1 => "CP1xCP1",
            SurfaceLabel::WCP2_123 => "WCP2(1,2,3)",
            SurfaceLabel::WCP2_113 => "WCP2(1,1,3)",
            SurfaceLabel::F2 => "F2",
            SurfaceLabel::X4 => "X(4)",
            SurfaceLabel::X5 => "X(5)",
            SurfaceLabel::Unknown => "UNKNOWN",
        }
    }

    pub fn from_name(s: &str) -> Option<SurfaceLabel> {
        Self::CATALOG.iter().copied().find(|l| l.name() == s)
    }
}

impl fmt::Display for SurfaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// Upper half-plane (including the positive x-axis) sorts first.
fn half(v: &LatticeVector) -> u8 {
    let (x, y) = (&v.coords()[0], &v.coords()[1]);
    if y.is_positive() || (y.is_zero() && x.is_positive()) {
        0
    } else {
        1
    }
}

fn cross(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    &a.coords()[0] * &b.coords()[1] - &a.coords()[1] * &b.coords()[0]
}

/// Sorts plane vectors counterclockwise by angle from the positive x-axis.
pub fn sort_ccw(v: &mut [LatticeVector]) {
    v.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| BigInt::zero().cmp(&cross(a, b)))
    });
}

/// The complete two-dimensional fan whose maximal cones are consecutive rays in angular order.
pub fn surface_fan(rays: Vec<LatticeVector>) -> Result<Fan> {
    let mut rays = rays;
    sort_ccw(&mut rays);
    let n = rays.len();
    let tops = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Fan::build(2, rays, (0..n).map(|i| format!("r{i}")).collect(), tops)
}

/// Unimodular `A` with `A u_i = w_i` for the two given pairs, if one exists.
fn unimodular_2d(u: [&LatticeVector; 2], w: [&LatticeVector; 2]) -> Option<Matrix> {
    let d = cross(u[0], u[1]);
    if d.is_zero() {
        return None;
    }
    // A = W adj(U) / det U with U = [u0 u1] by columns
    let (a, b, c, e) = (&u[0].coords()[0], &u[1].coords()[0], &u[0].coords()[1], &u[1].coords()[1]);
    let adj = [[e.clone(), -b], [-c, a.clone()]];
    let wm = [[&w[0].coords()[0], &w[1].coords()[0]], [&w[0].coords()[1], &w[1].coords()[1]]];
    let mut m = Matrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let num = wm[i][0] * &adj[0][j] + wm[i][1] * &adj[1][j];
            if !num.is_multiple_of(&d) {
                return None;
            }
            m.set(i, j, num / &d);
        }
    }
    if m.det().abs().is_one() {
        Some(m)
    } else {
        None
    }
}

/// `GL(2,Z)` equivalence of two complete plane fans, reflections included.
pub fn surfaces_equivalent(a: &Fan, b: &Fan) -> bool {
    if a.rank() != 2 || b.rank() != 2 || a.rays().len() != b.rays().len() || a.rays().len() < 2 {
        return false;
    }
    let mut ra = a.rays().to_vec();
    let mut rb = b.rays().to_vec();
    sort_ccw(&mut ra);
    sort_ccw(&mut rb);
    let n = rb.len();
    let target: BTreeSet<LatticeVector> = rb.iter().cloned().collect();
    for j in 0..n {
        for (w0, w1) in [(&rb[j], &rb[(j + 1) % n]), (&rb[(j + 1) % n], &rb[j])] {
            if let Some(m) = unimodular_2d([&ra[0], &ra[1]], [w0, w1]) {
                let image: BTreeSet<LatticeVector> = ra.iter().map(|v| m.apply(v)).collect();
                if image == target {
                    return true;
                }
            }
        }
    }
    false
}

/// Catalog label of a complete two-dimensional fan, or `Unknown`.
pub fn identify_surface(f: &Fan) -> Result<SurfaceLabel> {
    if f.rank() != 2 || !f.is_complete() {
        return Err(Error::NotCompleteSurface);
    }
    Ok(SurfaceLabel::CATALOG
        .iter()
        .copied()
        .find(|l| surfaces_equivalent(f, &l.catalog_fan()))
        .unwrap_or(SurfaceLabel::Unknown))
}

/// Whether two fans differ by a lattice automorphism carrying cones to cones.
pub fn fans_isomorphic(a: &Fan, b: &Fan) -> bool {
    if a.rank() != b.rank() || a.rays().len() != b.rays().len() || a.cones().len() != b.cones().len() {
        return false;
    }
    let n = a.rank();
    if n == 0 {
        return true;
    }
    let Some(base) = a.maximal_cones().find(|c| c.dim == n && c.is_simplicial()) else {
        return false;
    };
    let u = Matrix::from_cols(&base.generators, n);
    let det_u = u.det();
    let adj = adjugate(&u);
    let b_tops: BTreeSet<Vec<LatticeVector>> = b
        .maximal_cones()
        .map(|c| {
            let mut g = c.generators.clone();
            g.sort();
            g
        })
        .collect();
    for cand in b.maximal_cones().filter(|c| c.dim == n && c.is_simplicial()) {
        for perm in permutations(n) {
            let w: Vec<LatticeVector> = perm.iter().map(|&i| cand.generators[i].clone()).collect();
            let wm = Matrix::from_cols(&w, n);
            let num = wm.mul(&adj);
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
            if !ok || !m.det().abs().is_one() {
                continue;
            }
            let tops: BTreeSet<Vec<LatticeVector>> = a
                .maximal_cones()
                .map(|c| {
                    let mut g: Vec<LatticeVector> = c.generators.iter().map(|v| m.apply(v)).collect();
                    g.sort();
                    g
                })
                .collect();
            if tops == b_tops {
                return true;
            }
        }
    }
    false
}

pub(crate) fn adjugate(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut adj = Matrix::zeros(n, n);
    if n == 1 {
        adj.set(0, 0, BigInt::one());
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let mut minor = Matrix::zeros(n - 1, n - 1);
            for (r, rr) in (0..n).filter(|&r| r != i).enumerate() {
                for (c, cc) in (0..n).filter(|&c| c != j).enumerate() {
                    minor.set(r, c, m.get(rr, cc).clone());
                }
            }
            let d = minor.det();
            let signed = if (i + j) % 2 == 0 { d } else { -d };
            adj.set(j, i, signed);
        }
    }
    adj
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
