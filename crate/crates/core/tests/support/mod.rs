//! Randomised checks against independent oracles, shared by the property
//! suite and the acceptance run.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toricfib::bundle::{fibred_form, FibredOptions, LaurentSection};
use toricfib::dataset::{elliptic_fourfold, Job};
use toricfib::fan::Fan;
use toricfib::lattice::{smith_normal_form, Index, LatticeMap, LatticeVector, Matrix};
use toricfib::morphism::FanMap;
use toricfib::polytope::{hull, restriction_polytope};

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() }
}

fn matrix(rows: usize, cols: usize, e: &[i64]) -> Matrix {
    Matrix::from_i64(rows, cols, e)
}

fn matrix_strategy(max: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}


type Q = Ratio<i64>;

// Solves `Σ λ_i p_i = x, Σ λ_i = 1` and reports whether a nonnegative solution exists.
fn in_simplex(simplex: &[&Vec<i64>], x: &[i64]) -> bool {
    let k = simplex.len();
    let d = x.len();
    let mut rows: Vec<Vec<Q>> = (0..=d)
        .map(|i| {
            let mut r: Vec<Q> = simplex.iter().map(|p| Q::from(if i < d { p[i] } else { 1 })).collect();
            r.push(Q::from(if i < d { x[i] } else { 1 }));
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                let pr = rows[r].clone();
                for (v, w) in rows[i].iter_mut().zip(pr) {
                    *v -= f * w;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if pivot_cols.len() < k {
        return false;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return false;
    }
    (0..k).all(|i| rows[i][k] >= Q::zero())
}

fn affine_rank(points: &[Vec<i64>]) -> usize {
    let diffs: Vec<LatticeVector> =
        points.iter().map(|p| LatticeVector::from_i64(&p.iter().zip(&points[0]).map(|(a, b)| a - b).collect::<Vec<_>>())).collect();
    let m = Matrix::from_rows(&diffs, points[0].len());
    m.rank()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn point_set() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-2i64..=2, d), 1..=6))
}


// Products of elementary matrices, determinant 1.
fn unimodular(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2), 0..6).prop_map(move |ops| {
        let mut m = Matrix::identity(n);
        for (i, j, k) in ops {
            if i == j {
                continue;
            }
            let mut e = Matrix::identity(n);
            e.set(i, j, BigInt::from(k));
            m = e.mul(&m);
        }
        m
    })
}

fn reflexive_seed(kind: usize, n: usize) -> Vec<LatticeVector> {
    let unit = |i: usize, s: i64| {
        let mut v = vec![0; n];
        v[i] = s;
        LatticeVector::from_i64(&v)
    };
    match kind {
        // cross-polytope
        0 => (0..n).flat_map(|i| [unit(i, 1), unit(i, -1)]).collect(),
        // cube
        1 => (0..1usize << n)
            .map(|b| LatticeVector::from_i64(&(0..n).map(|i| if b >> i & 1 == 1 { 1 } else { -1 }).collect::<Vec<_>>()))
            .collect(),
        // simplex of projective space
        _ => {
            let mut v: Vec<LatticeVector> = (0..n).map(|i| unit(i, 1)).collect();
            v.push(LatticeVector::from_i64(&vec![-1; n]));
            v
        }
    }
}


fn target_fan(choice: usize) -> Fan {
    let f = |rank: usize, rays: &[&[i64]], cones: &[&[usize]]| {
        Fan::build(
            rank,
            rays.iter().map(|r| LatticeVector::from_i64(r)).collect(),
            (0..rays.len()).map(|i| format!("d{}", i + 1)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
        .unwrap()
    };
    match choice {
        0 => f(1, &[&[1], &[-1]], &[&[0], &[1]]),
        1 => f(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]),
        2 => f(2, &[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]),
        3 => f(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]], &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]),
        _ => f(2, &[&[1, 0], &[1, 1], &[0, 1]], &[&[0, 1], &[1, 2]]),
    }
}

fn adjugate_apply(a: &Matrix, v: &LatticeVector) -> LatticeVector {
    // A^{-1} v scaled by det A, by Cramer's rule
    let n = a.rows();
    let coords = (0..n)
        .map(|j| {
            let mut m = a.clone();
            for i in 0..n {
                m.set(i, j, v.coords()[i].clone());
            }
            m.det()
        })
        .collect();
    LatticeVector::new(coords)
}

/// The preimage of a target fan under a finite-index map `A`, times a line when `extra` is set.
fn random_map(choice: usize, g: &Matrix, diag: &[i64], extra: bool) -> FanMap {
    let target = target_fan(choice);
    let n = target.rank();
    let mut dm = Matrix::identity(n);
    for (i, &x) in diag.iter().take(n).enumerate() {
        dm.set(i, i, BigInt::from(x));
    }
    let a = g.mul(&dm);
    let sign = if a.det().is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rays: Vec<LatticeVector> = target.rays().iter().map(|v| adjugate_apply(&a, v).scale(&sign).primitive()).collect();
    let mut tops = target.maximal_ray_sets();
    let mut phi = a.clone();
    let mut rank = n;
    if extra {
        rank += 1;
        rays = rays.into_iter().map(|v| LatticeVector::new(v.coords().iter().cloned().chain([BigInt::zero()]).collect())).collect();
        let mut up = vec![0; rank];
        up[n] = 1;
        rays.push(LatticeVector::from_i64(&up));
        up[n] = -1;
        rays.push(LatticeVector::from_i64(&up));
        let (p, m) = (rays.len() - 2, rays.len() - 1);
        tops = tops.into_iter().flat_map(|c| [[c.clone(), vec![p]].concat(), [c, vec![m]].concat()]).collect();
        let mut wide = Matrix::zeros(n, rank);
        for i in 0..n {
            for j in 0..n {
                wide.set(i, j, a.get(i, j).clone());
            }
        }
        phi = wide;
    }
    let names = (0..rays.len()).map(|i| format!("s{i}")).collect();
    let source = Fan::build(rank, rays, names, tops).unwrap();
    FanMap::new(LatticeMap::new(phi), source, target).unwrap()
}


struct Pairs {
    job: Job,
    pairs: Vec<(usize, usize, Vec<LatticeVector>)>,
}

fn pairs() -> &'static Pairs {
    static P: OnceLock<Pairs> = OnceLock::new();
    P.get_or_init(|| {
        let job = elliptic_fourfold();
        let mut pairs = Vec::new();
        for rep in job.map.flattening_stratification().unwrap() {
            for &t in &rep.primitive {
                let r = restriction_polytope(job.polytope().unwrap(), t, job.source()).unwrap();
                let pts = r.polytope.lattice_points().iter().map(|c| r.to_ambient(c)).collect();
                pairs.push((t, rep.sigma, pts));
            }
        }
        Pairs { job, pairs }
    })
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-5i64..=-1, 1i64..=5], 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}


pub fn smith_case() -> impl Strategy<Value = Matrix> {
    matrix_strategy(5, 12)
}

pub fn smith_contract(a: &Matrix) -> Result<(), TestCaseError> {
    let d = smith_normal_form(a);
    prop_assert_eq!(&d.u.mul(&d.s).mul(&d.v), a);
    prop_assert!(d.u.mul(&d.u_inv).is_identity());
    prop_assert!(d.v.mul(&d.v_inv).is_identity());
    prop_assert!(d.u.det().abs().is_one());
    prop_assert!(d.v.det().abs().is_one());
    for i in 0..d.s.rows() {
        for j in 0..d.s.cols() {
            if i != j {
                prop_assert!(d.s.get(i, j).is_zero());
            }
        }
    }
    for (i, x) in d.diagonal.iter().enumerate() {
        prop_assert!(!x.is_negative());
        prop_assert_eq!(x, d.s.get(i, i));
        if let Some(next) = d.diagonal.get(i + 1) {
            let divides = if x.is_zero() { next.is_zero() } else { (next % x).is_zero() };
            prop_assert!(divides);
        }
    }
    Ok(())
}

pub fn lattice_case() -> impl Strategy<Value = Vec<Vec<i64>>> {
    point_set()
}

pub fn lattice_points_match_a_box_scan(points: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let d = points[0].len();
    let vs: Vec<LatticeVector> = points.iter().map(|p| LatticeVector::from_i64(p)).collect();
    let p = hull(&vs).unwrap();
    let r = affine_rank(points);
    let simplices: Vec<Vec<&Vec<i64>>> = subsets(points.len(), r + 1)
        .into_iter()
        .map(|s| s.into_iter().map(|i| &points[i]).collect())
        .collect();
    let lo: Vec<i64> = (0..d).map(|i| points.iter().map(|p| p[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|i| points.iter().map(|p| p[i]).max().unwrap()).collect();
    let mut expected = Vec::new();
    let mut x = lo.clone();
    loop {
        if simplices.iter().any(|s| in_simplex(s, &x)) {
            expected.push(LatticeVector::from_i64(&x));
        }
        let mut i = 0;
        while i < d && x[i] == hi[i] {
            x[i] = lo[i];
            i += 1;
        }
        if i == d {
            break;
        }
        x[i] += 1;
    }
    expected.sort();
    prop_assert_eq!(p.lattice_points(), expected);
    prop_assert_eq!(p.dim(), r);
    Ok(())
}

pub fn reflexive_case() -> impl Strategy<Value = (usize, Matrix)> {
    (0usize..3, 2usize..=3).prop_flat_map(|(k, n)| (Just(k), unimodular(n)))
}

pub fn duality_is_an_involution_on_reflexive_polytopes((kind, g): &(usize, Matrix)) -> Result<(), TestCaseError> {
    let n = g.rows();
    let pts: Vec<LatticeVector> = reflexive_seed(*kind, n).iter().map(|v| g.apply(v)).collect();
    let p = hull(&pts).unwrap();
    prop_assert!(p.is_reflexive().unwrap());
    let d = p.dual().unwrap();
    prop_assert!(d.is_reflexive().unwrap());
    prop_assert_eq!(d.dual().unwrap(), p);
    Ok(())
}

pub fn small_polytope_case() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-1i64..=1, 3), 4..=10)
}

pub fn dual_of_small_polytopes(points: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let vs: Vec<LatticeVector> = points.iter().map(|p| LatticeVector::from_i64(p)).collect();
    let p = hull(&vs).unwrap();
    if let Ok(d) = p.dual() {
        prop_assert_eq!(d.dual().unwrap(), p.clone());
        prop_assert_eq!(p.is_reflexive().unwrap(), d.is_reflexive().unwrap());
    }
    Ok(())
}

pub fn map_case() -> impl Strategy<Value = (usize, Matrix, Vec<i64>, bool)> {
    (0usize..5).prop_flat_map(|c| (Just(c), unimodular(target_fan(c).rank()), prop::collection::vec(1i64..=3, 3), any::<bool>()))
}

pub fn index_divides_along_faces((choice, g, diag, extra): &(usize, Matrix, Vec<i64>, bool)) -> Result<(), TestCaseError> {
    let map = random_map(*choice, g, diag, *extra);
    let t = map.target();
    let strata = map.flattening_stratification().unwrap();
    for (s, rep) in strata.iter().enumerate() {
        let Some(Index::Finite(is)) = &rep.index else { continue };
        for &f in t.proper_faces(s) {
            if let Some(Index::Finite(it)) = &strata[f].index {
                prop_assert!((it % is).is_zero(), "Ind {} does not divide {}", is, it);
            }
        }
    }
    prop_assert!(map.check_index_identity().unwrap());
    // over the zero cone the index is the full lattice index
    let zero = t.cone_index(&[]).unwrap();
    prop_assert_eq!(strata[zero].index.clone(), Some(map.lattice_index()));
    Ok(())
}

pub type FibredCase = (usize, Vec<i64>, Vec<BigRational>, Vec<BigRational>);

pub fn fibred_case() -> impl Strategy<Value = FibredCase> {
    (0usize..60, prop::collection::vec(-9i64..=9, 64), prop::collection::vec(small_rational(), 3), prop::collection::vec(small_rational(), 3))
}

pub fn fibred_form_evaluates_like_the_restriction((pick, coefficients, u, s): &FibredCase) -> Result<(), TestCaseError> {
    let data = pairs();
    let (tau, sigma, pts) = &data.pairs[*pick % data.pairs.len()];
    let terms = pts.iter().enumerate().map(|(i, m)| {
        (m.clone(), BigRational::from_integer(BigInt::from(coefficients[i % coefficients.len()] + i as i64)))
    });
    let section = LaurentSection::from_terms(5, terms).unwrap();
    let job = &data.job;
    let form = fibred_form(&section, *tau, *sigma, &job.map, job.polytope().unwrap(), &FibredOptions::default()).unwrap();
    form.verify().unwrap();
    let k = form.projection.quotient.free_rank();
    let b = form.xi.cols();
    let (u, s) = (&u[..k], &s[..b]);
    let t = form.torus_point(u, s);
    prop_assert_eq!(Some(form.evaluate(u, s)), form.restricted_section().evaluate(&t));
    Ok(())
}
