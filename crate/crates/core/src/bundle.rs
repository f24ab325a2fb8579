//! Equivariant line bundles as piecewise linear functions, section bases,
//! restriction of sections to orbit closures and fibers, the fibred
//! regrouping of a section and its homogeneous-coordinate form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{section_of_surjection, LatticeMap, LatticeVector, Matrix};
use crate::morphism::FanMap;
use crate::polytope::{
    cone_weight, hull, project_polytope, restriction_polytope, restriction_polytope_with, Polytope,
    Projection, Restriction,
};

/// A function on the support of a fan, linear on each maximal cone.
#[derive(Clone, Debug)]
pub struct PLFunction {
    fan: Fan,
    weights: Vec<LatticeVector>,
}

impl PLFunction {
    /// Weights are given per maximal cone, in the order of `fan.maximal_indices()`.
    pub fn new(fan: Fan, weights: Vec<LatticeVector>) -> Result<PLFunction> {
        let tops = fan.maximal_indices().to_vec();
        if weights.len() != tops.len() || weights.iter().any(|w| w.rank() != fan.rank()) {
            return Err(Error::Dimension("one weight per maximal cone expected".into()));
        }
        for a in 0..tops.len() {
            for b in a + 1..tops.len() {
                let d = weights[a].sub(&weights[b]);
                let cb = &fan.cone(tops[b]).rays;
                let shared = fan.cone(tops[a]).rays.iter().filter(|r| cb.contains(r));
                if shared.map(|&r| d.dot(&fan.rays()[r])).any(|x| !x.is_zero()) {
                    return Err(Error::IncompatibleWeights);
                }
            }
        }
        Ok(PLFunction { fan, weights })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn weights(&self) -> &[LatticeVector] {
        &self.weights
    }

    /// `h(v) = ⟨m_σ, v⟩` for a maximal cone `σ` containing `v`.
    pub fn value(&self, v: &LatticeVector) -> Option<BigInt> {
        self.fan
            .maximal_indices()
            .iter()
            .position(|&m| self.fan.hrep(m).contains(v))
            .map(|i| self.weights[i].dot(v))
    }

    /// Values on the primitive rays, in ray order.
    pub fn ray_values(&self) -> Vec<BigInt> {
        self.fan.rays().iter().map(|v| self.value(v).expect("rays lie in the support")).collect()
    }

    pub fn is_principal(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }

    /// The linear function `u` with `other = self + u`, if the two differ by one.
    pub fn difference(&self, other: &PLFunction) -> Option<LatticeVector> {
        if self.weights.len() != other.weights.len() {
            return None;
        }
        let u = other.weights.first()?.sub(self.weights.first()?);
        self.weights.iter().zip(&other.weights).all(|(a, b)| b.sub(a) == u).then_some(u)
    }
}

pub fn plf_from_polytope(p: &Polytope, fan: &Fan) -> Result<PLFunction> {
    if p.ambient_rank() != fan.rank() {
        return Err(Error::Dimension("polytope and fan ranks differ".into()));
    }
    let weights = fan.maximal_indices().iter().map(|&m| cone_weight(p, fan, m)).collect::<Result<Vec<_>>>()?;
    PLFunction::new(fan.clone(), weights)
}

pub fn polytope_from_plf(h: &PLFunction) -> Polytope {
    hull(h.weights()).expect("a fan has at least one maximal cone")
}

/// A monomial `χ^m` of a section basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SectionBasisElement {
    pub exponent: LatticeVector,
}

pub fn sections_basis(p: &Polytope) -> Vec<SectionBasisElement> {
    p.lattice_points().into_iter().map(|exponent| SectionBasisElement { exponent }).collect()
}

/// A Laurent polynomial `Σ c_m χ^m` with coefficients of type `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSection<C> {
    rank: usize,
    terms: BTreeMap<LatticeVector, C>,
}

impl<C: Clone> LaurentSection<C> {
    pub fn new(rank: usize) -> Self {
        LaurentSection { rank, terms: BTreeMap::new() }
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (LatticeVector, C)>) -> Result<Self> {
        let mut s = Self::new(rank);
        for (m, c) in terms {
            s.insert(m, c)?;
        }
        Ok(s)
    }

    /// Sets the coefficient of `χ^m`, replacing any previous one.
    pub fn insert(&mut self, m: LatticeVector, c: C) -> Result<()> {
        if m.rank() != self.rank {
            return Err(Error::Dimension(format!("exponent {m} has the wrong rank")));
        }
        self.terms.insert(m, c);
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVector, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, m: &LatticeVector) -> Option<&C> {
        self.terms.get(m)
    }
}

impl LaurentSection<BigRational> {
    /// Value at a torus point; `None` when a coordinate is zero.
    pub fn evaluate(&self, t: &[BigRational]) -> Option<BigRational> {
        if t.len() != self.rank || t.iter().any(Zero::is_zero) {
            return None;
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            total += c * monomial(t, m.coords());
        }
        Some(total)
    }
}

pub(crate) fn power(x: &BigRational, e: &BigInt) -> BigRational {
    let k: i32 = e.try_into().expect("exponent fits in i32");
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

pub(crate) fn monomial(t: &[BigRational], e: &[BigInt]) -> BigRational {
    t.iter().zip(e).fold(BigRational::one(), |acc, (x, k)| acc * power(x, k))
}

/// A section restricted to an orbit closure, in local coordinates of the restriction polytope.
#[derive(Clone, Debug)]
pub struct RestrictedSection<C> {
    pub restriction: Restriction,
    pub section: LaurentSection<C>,
}

fn check_support<C: Clone>(s: &LaurentSection<C>, p: &Polytope) -> Result<()> {
    match s.terms().keys().find(|m| !p.contains(m)) {
        Some(m) => Err(Error::BadSection(format!("exponent {m} lies outside the polytope"))),
        None => Ok(()),
    }
}

/// Drops the terms outside the restriction polytope of `tau` and rewrites the rest locally.
pub fn restrict_section_to_orbit_closure<C: Clone>(
    s: &LaurentSection<C>,
    tau: usize,
    p: &Polytope,
    fan: &Fan,
) -> Result<RestrictedSection<C>> {
    let r = restriction_polytope(p, tau, fan)?;
    restrict_with(s, p, r)
}

fn restrict_with<C: Clone>(s: &LaurentSection<C>, p: &Polytope, r: Restriction) -> Result<RestrictedSection<C>> {
    check_support(s, p)?;
    let mut out = LaurentSection::new(r.basis.len());
    for (m, c) in s.terms() {
        if let Some(local) = r.to_local(m) {
            if r.polytope.contains(&local) {
                out.insert(local, c.clone())?;
            }
        }
    }
    Ok(RestrictedSection { restriction: r, section: out })
}

/// `f†(P2)`, the polytope of the pulled-back bundle.
pub fn pullback_bundle(f: &FanMap, p2: &Polytope) -> Result<Polytope> {
    if p2.ambient_rank() != f.target().rank() {
        return Err(Error::Dimension("polytope does not live on the target".into()));
    }
    for &m in f.target().maximal_indices() {
        cone_weight(p2, f.target(), m)?;
    }
    let dual = LatticeMap::new(f.phi().matrix().transpose());
    Ok(p2.image(&dual))
}

/// `f†(m)`.
pub fn pullback_section(f: &FanMap, m: &LatticeVector) -> LatticeVector {
    f.phi().matrix().transpose().apply(m)
}

/// One monomial of a fibred form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibredTerm<C> {
    /// The exponent in the ambient dual lattice.
    pub exponent: LatticeVector,
    /// The exponent in the coordinates of the restriction polytope.
    pub local: LatticeVector,
    /// `ξ†` of the local exponent.
    pub base: LatticeVector,
    pub coefficient: C,
}

/// A restricted section grouped by fiber exponent.
#[derive(Clone, Debug)]
pub struct FibredForm<C> {
    pub groups: BTreeMap<LatticeVector, Vec<FibredTerm<C>>>,
    pub xi: Matrix,
    pub restriction: Restriction,
    pub projection: Projection,
}

/// Options fixing the coordinates of a fibred form.
#[derive(Clone, Debug, Default)]
pub struct FibredOptions {
    /// Basis of `τ'^⊥ ∩ M'` and anchor to use for the restriction.
    pub basis: Option<Vec<LatticeVector>>,
    pub anchor: Option<LatticeVector>,
    /// Splitting `ξ` of the induced surjection, as a `k x s` matrix in the dual coordinates.
    pub xi: Option<Matrix>,
}

/// Restricts `s` to the fiber component of `tau` over `sigma`: exponents grouped by their fiber image.
pub fn restrict_to_fiber<C: Clone>(
    s: &LaurentSection<C>,
    tau: usize,
    sigma: usize,
    m: &FanMap,
    p: &Polytope,
) -> Result<FibredForm<C>> {
    fibred_form(s, tau, sigma, m, p, &FibredOptions::default())
}

/// The fibred form `Σ_q (Σ a_m χ^{ξ†(m)}) χ^q` of `s` over the orbit of `sigma`.
pub fn fibred_form<C: Clone>(
    s: &LaurentSection<C>,
    tau: usize,
    sigma: usize,
    m: &FanMap,
    p: &Polytope,
    opts: &FibredOptions,
) -> Result<FibredForm<C>> {
    if m.home(tau) != sigma {
        return Err(Error::NotOverSigma);
    }
    let r = restriction_polytope_with(p, tau, m.source(), opts.basis.as_deref(), opts.anchor.as_ref())?;
    let projection = project_polytope(&r, m.phi(), &m.target().cone(sigma).generators)?;
    let g = &projection.g;
    let induced = LatticeMap::new(g.transpose());
    let xi = match &opts.xi {
        Some(x) => {
            if x.rows() != g.rows() || x.cols() != g.cols() || !induced.matrix().mul(x).is_identity() {
                return Err(Error::BadSection("xi does not split the induced map".into()));
            }
            x.clone()
        }
        None => section_of_surjection(&induced)?.matrix().clone(),
    };
    let restricted = restrict_with(s, p, r)?;
    let xit = xi.transpose();
    let mut groups: BTreeMap<LatticeVector, Vec<FibredTerm<C>>> = BTreeMap::new();
    for (local, c) in restricted.section.terms() {
        let q = projection.project(local);
        groups.entry(q).or_default().push(FibredTerm {
            exponent: restricted.restriction.to_ambient(local),
            local: local.clone(),
            base: xit.apply(local),
            coefficient: c.clone(),
        });
    }
    Ok(FibredForm { groups, xi, restriction: restricted.restriction, projection })
}

impl<C: Clone> FibredForm<C> {
    pub fn term_count(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    /// The local exponent determined by a fiber exponent and a base exponent.
    pub fn reconstruct(&self, fiber: &LatticeVector, base: &LatticeVector) -> LatticeVector {
        let g = &self.projection.g;
        let k = g.rows();
        let lifts = Matrix::from_cols(&self.projection.quotient.quotient_basis, k);
        let lifted = lifts.apply(fiber);
        let correction = g.apply(&self.xi.transpose().apply(&lifted));
        lifted.sub(&correction).add(&g.apply(base))
    }

    /// Checks that every term is recovered from its fiber and base exponents.
    pub fn verify(&self) -> Result<()> {
        for (q, terms) in &self.groups {
            for t in terms {
                if self.reconstruct(q, &t.base) != t.local || self.projection.project(&t.local) != *q {
                    return Err(Error::Invariant(format!("fibred term {} does not reassemble", t.exponent)));
                }
            }
        }
        Ok(())
    }

    /// The torus point `t_j = Π u_i^{Q_ij} Π s_l^{ξ_jl}` in local coordinates.
    pub fn torus_point(&self, u: &[BigRational], s: &[BigRational]) -> Vec<BigRational> {
        let q = &self.projection.quotient.projection;
        (0..self.xi.rows())
            .map(|j| {
                let from_u = (0..q.rows()).fold(BigRational::one(), |acc, i| acc * power(&u[i], q.get(i, j)));
                (0..self.xi.cols()).fold(from_u, |acc, l| acc * power(&s[l], self.xi.get(j, l)))
            })
            .collect()
    }
}

impl FibredForm<BigRational> {
    /// `Σ_q u^q Σ a s^{base}`.
    pub fn evaluate(&self, u: &[BigRational], s: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (q, terms) in &self.groups {
            let mut b = BigRational::zero();
            for t in terms {
                b += &t.coefficient * monomial(s, t.base.coords());
            }
            total += b * monomial(u, q.coords());
        }
        total
    }

    /// The restricted section as an ordinary Laurent polynomial in local coordinates.
    pub fn restricted_section(&self) -> LaurentSection<BigRational> {
        let terms = self.groups.values().flatten().map(|t| (t.local.clone(), t.coefficient.clone()));
        LaurentSection::from_terms(self.xi.rows(), terms).expect("local exponents share a rank")
    }
}

/// Checks that two fibred forms of the same section differ only through `ξ`:
/// identical groups, and base exponents shifted by `(ξ₂† - ξ₁†)(m)`.
pub fn xi_transition<C: Clone + PartialEq>(a: &FibredForm<C>, b: &FibredForm<C>) -> Result<()> {
    if a.groups.len() != b.groups.len() {
        return Err(Error::Invariant("fiber groupings differ".into()));
    }
    let delta = b.xi.transpose();
    let da = a.xi.transpose();
    for ((qa, ta), (qb, tb)) in a.groups.iter().zip(&b.groups) {
        if qa != qb || ta.len() != tb.len() {
            return Err(Error::Invariant(format!("fiber group {qa} differs")));
        }
        for (x, y) in ta.iter().zip(tb) {
            let shift = delta.apply(&x.local).sub(&da.apply(&x.local));
            if x.local != y.local || x.coefficient != y.coefficient || y.base.sub(&x.base) != shift {
                return Err(Error::Invariant(format!("term {} does not transform by the character", x.exponent)));
            }
        }
    }
    Ok(())
}

/// One monomial `Π z_i^{⟨m, v_i⟩ + a_i}` in homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousTerm<C> {
    pub exponent: LatticeVector,
    /// Exponent of each ray variable, in ray order.
    pub ray_exponents: Vec<BigInt>,
    pub coefficient: C,
}

pub fn homogeneous_form<C: Clone>(
    s: &LaurentSection<C>,
    fan: &Fan,
    a: &[BigInt],
) -> Result<Vec<HomogeneousTerm<C>>> {
    if a.len() != fan.rays().len() || s.rank() != fan.rank() {
        return Err(Error::Dimension("one divisor coefficient per ray expected".into()));
    }
    s.terms()
        .iter()
        .map(|(m, c)| {
            let ray_exponents: Vec<BigInt> = fan.rays().iter().zip(a).map(|(v, ai)| m.dot(v) + ai).collect();
            if let Some(i) = ray_exponents.iter().position(|e| e.is_negative()) {
                return Err(Error::NegativeExponent(format!("{} on ray {}", m, fan.ray_names()[i])));
            }
            Ok(HomogeneousTerm { exponent: m.clone(), ray_exponents, coefficient: c.clone() })
        })
        .collect()
}

/// A homogeneous term split along `m = φ†(ξ†m) + κ(m)`: on each ray not in
/// the kernel of `φ` the exponent is `⟨ξ†m, φ(v)⟩ + ⟨κ(m), v⟩ + a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibredHomogeneousTerm<C> {
    pub term: HomogeneousTerm<C>,
    pub base_part: Vec<BigInt>,
    pub fiber_part: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct FibredHomogeneousForm<C> {
    /// Indices of the rays in the kernel of `φ`.
    pub fiber_rays: Vec<usize>,
    pub other_rays: Vec<usize>,
    /// Keyed by the exponents of the fiber-ray variables.
    pub groups: BTreeMap<Vec<BigInt>, Vec<FibredHomogeneousTerm<C>>>,
}

/// Groups the homogeneous form of `s` by the monomial in the fiber-ray variables,
/// using the splitting `ξ` of `φ` (computed when not given).
pub fn fibred_homogeneous_form<C: Clone>(
    s: &LaurentSection<C>,
    m: &FanMap,
    a: &[BigInt],
    xi: Option<&LatticeMap>,
) -> Result<FibredHomogeneousForm<C>> {
    let fan = m.source();
    let terms = homogeneous_form(s, fan, a)?;
    let xi = match xi {
        Some(x) => {
            if !m.phi().compose(x).matrix().is_identity() {
                return Err(Error::BadSection("xi does not split the map".into()));
            }
            x.clone()
        }
        None => section_of_surjection(m.phi())?,
    };
    let images: Vec<LatticeVector> = fan.rays().iter().map(|v| m.phi().apply(v)).collect();
    let fiber_rays: Vec<usize> = (0..images.len()).filter(|&i| images[i].is_zero()).collect();
    let other_rays: Vec<usize> = (0..images.len()).filter(|&i| !images[i].is_zero()).collect();
    let xi_dual = xi.matrix().transpose();
    let phi_dual = m.phi().matrix().transpose();
    let mut groups: BTreeMap<Vec<BigInt>, Vec<FibredHomogeneousTerm<C>>> = BTreeMap::new();
    for term in terms {
        let base = xi_dual.apply(&term.exponent);
        let kappa = term.exponent.sub(&phi_dual.apply(&base));
        let mut base_part = Vec::new();
        let mut fiber_part = Vec::new();
        for &k in &other_rays {
            let b = base.dot(&images[k]);
            let f = kappa.dot(&fan.rays()[k]);
            if &b + &f + &a[k] != term.ray_exponents[k] {
                return Err(Error::Invariant(format!("splitting fails for {}", term.exponent)));
            }
            base_part.push(b);
            fiber_part.push(f);
        }
        let key: Vec<BigInt> = fiber_rays.iter().map(|&i| term.ray_exponents[i].clone()).collect();
        groups.entry(key).or_default().push(FibredHomogeneousTerm { term, base_part, fiber_part });
    }
    Ok(FibredHomogeneousForm { fiber_rays, other_rays, groups })
}
