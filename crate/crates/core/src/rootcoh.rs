//! Cochains on the small root systems, their coboundaries, and the Lie
//! algebras over ℂ[𝕀₁, …, 𝕀_q] attached to symmetric 2-cocycles.
//!
//! 2-chains are pairs of roots (β, γ) whose sum lies in Φ ∪ {0}. Cochains are
//! normalised: every value involving the zero root vanishes, so only pairs of
//! nonzero roots are stored. Values are kept as signed integers so that
//! inadmissible cochains can be represented and rejected; the admissible ones
//! take values in ℕ₀^q.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RootSystemKind {
    A1,
    A1xA1,
    A2,
    B2,
    A3,
}

impl RootSystemKind {
    pub const ALL: [RootSystemKind; 5] = [
        RootSystemKind::A1,
        RootSystemKind::A1xA1,
        RootSystemKind::A2,
        RootSystemKind::B2,
        RootSystemKind::A3,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Self::A1),
            "A1XA1" | "A1A1" | "D2" => Ok(Self::A1xA1),
            "A2" => Ok(Self::A2),
            "B2" | "C2" => Ok(Self::B2),
            "A3" | "D3" => Ok(Self::A3),
            _ => Err(Error::InvalidInput(format!(
                "unsupported root system {s} (expected A1, A1xA1, A2, B2 or A3)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::A1 => "A1",
            Self::A1xA1 => "A1xA1",
            Self::A2 => "A2",
            Self::B2 => "B2",
            Self::A3 => "A3",
        }
    }

    /// The integers κ(Φ)_i for the coordinates (a, b, c).
    pub fn kappa(self) -> [u32; 3] {
        match self {
            Self::A1 => [1, 1, 1],
            Self::A1xA1 => [2, 2, 2],
            Self::A2 => [3, 3, 2],
            Self::B2 => [4, 3, 3],
            Self::A3 => [6, 5, 4],
        }
    }
}

impl fmt::Display for RootSystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which orbit carries the poles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PoleOrbit {
    A,
    B,
    C,
    Generic,
}

impl PoleOrbit {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            "c" => Ok(Self::C),
            "generic" => Ok(Self::Generic),
            _ => Err(Error::InvalidInput(format!(
                "unknown orbit {s} (expected a, b, c or generic)"
            ))),
        }
    }

    fn index(self) -> Option<usize> {
        match self {
            Self::A => Some(0),
            Self::B => Some(1),
            Self::C => Some(2),
            Self::Generic => None,
        }
    }
}

impl From<crate::forms::OrbitType> for PoleOrbit {
    fn from(t: crate::forms::OrbitType) -> Self {
        use crate::forms::OrbitType;
        match t {
            OrbitType::A => Self::A,
            OrbitType::B => Self::B,
            OrbitType::C => Self::C,
            OrbitType::Generic => Self::Generic,
        }
    }
}

/// Norm targets ‖ω¹‖_i: κ(Φ)_i, except 0 on the coordinate of the pole orbit.
pub fn kappa_constraint(kind: RootSystemKind, pole: PoleOrbit) -> [u32; 3] {
    let mut k = kind.kappa();
    if let Some(i) = pole.index() {
        k[i] = 0;
    }
    k
}

/// Result of adding two roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSum {
    Zero,
    Root(usize),
    Outside,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    kind: RootSystemKind,
    roots: Vec<Vec<i64>>,
    simple: Vec<usize>,
    simple_coords: Vec<Vec<i64>>,
    negation: Vec<usize>,
    sums: Vec<Vec<RootSum>>,
    pairs: Vec<(usize, usize)>,
    pair_index: Vec<Vec<Option<usize>>>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Solve A x = b over ℚ, returning None when A is singular or b is not in the
/// column span. A may have more rows than columns.
fn solve_rational(a: &[Vec<Ratio<i64>>], b: &[Ratio<i64>]) -> Option<Vec<Ratio<i64>>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Ratio<i64>>> = a
        .iter()
        .zip(b)
        .map(|(r, &x)| {
            let mut r = r.clone();
            r.push(x);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            return None;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col];
                for j in 0..=cols {
                    let d = m[row][j] * f;
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..rows).any(|i| !m[i][cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| m[c][cols]).collect())
}

impl RootSystem {
    pub fn build(kind: RootSystemKind) -> RootSystem {
        let v = |x: &[i64]| x.to_vec();
        // ambient lattices: e_i − e_j for type A, ±e_i ± e_j for the others
        let (roots, simple): (Vec<Vec<i64>>, Vec<Vec<i64>>) = match kind {
            RootSystemKind::A1 => (vec![v(&[1, -1]), v(&[-1, 1])], vec![v(&[1, -1])]),
            RootSystemKind::A1xA1 => {
                let r = [[1, 1], [1, -1], [-1, -1], [-1, 1]];
                (r.iter().map(|x| v(x)).collect(), vec![v(&[1, -1]), v(&[1, 1])])
            }
            RootSystemKind::A2 => {
                let mut r = Vec::new();
                for i in 0..3 {
                    for j in 0..3 {
                        if i != j {
                            let mut x = vec![0; 3];
                            x[i] = 1;
                            x[j] = -1;
                            r.push(x);
                        }
                    }
                }
                (r, vec![v(&[1, -1, 0]), v(&[0, 1, -1])])
            }
            RootSystemKind::B2 => {
                let r = [
                    [1, 0],
                    [0, 1],
                    [-1, 0],
                    [0, -1],
                    [1, 1],
                    [1, -1],
                    [-1, 1],
                    [-1, -1],
                ];
                (r.iter().map(|x| v(x)).collect(), vec![v(&[1, -1]), v(&[0, 1])])
            }
            RootSystemKind::A3 => {
                let mut r = Vec::new();
                for i in 0..3 {
                    for j in i + 1..3 {
                        for (s, t) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                            let mut x = vec![0; 3];
                            x[i] = s;
                            x[j] = t;
                            r.push(x);
                        }
                    }
                }
                (
                    r,
                    vec![v(&[1, -1, 0]), v(&[0, 1, -1]), v(&[0, 1, 1])],
                )
            }
        };
        let rank = simple.len();
        let gram: Vec<Vec<Ratio<i64>>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| Ratio::from_integer(dot(&simple[i], &simple[j])))
                    .collect()
            })
            .collect();
        let coords_of = |x: &[i64]| -> Vec<i64> {
            let rhs: Vec<Ratio<i64>> = simple
                .iter()
                .map(|s| Ratio::from_integer(dot(s, x)))
                .collect();
            solve_rational(&gram, &rhs)
                .expect("simple roots are independent")
                .into_iter()
                .map(|c| {
                    assert!(c.is_integer());
                    c.to_integer()
                })
                .collect()
        };
        // order: positive roots by height then by coordinates, then their negatives
        let mut positive: Vec<(Vec<i64>, Vec<i64>)> = roots
            .iter()
            .map(|r| (coords_of(r), r.clone()))
            .filter(|(c, _)| c.iter().all(|&x| x >= 0))
            .collect();
        positive.sort_by(|(a, _), (b, _)| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let mut ordered: Vec<Vec<i64>> = positive.iter().map(|(_, r)| r.clone()).collect();
        ordered.extend(positive.iter().map(|(_, r)| r.iter().map(|x| -x).collect::<Vec<_>>()));
        assert_eq!(ordered.len(), roots.len());
        let index: HashMap<Vec<i64>, usize> = ordered
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let n = ordered.len();
        let zero = vec![0; ordered[0].len()];
        let negation: Vec<usize> = ordered
            .iter()
            .map(|r| index[&r.iter().map(|x| -x).collect::<Vec<_>>()])
            .collect();
        let sums: Vec<Vec<RootSum>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s = add(&ordered[i], &ordered[j]);
                        if s == zero {
                            RootSum::Zero
                        } else if let Some(&k) = index.get(&s) {
                            RootSum::Root(k)
                        } else {
                            RootSum::Outside
                        }
                    })
                    .collect()
            })
            .collect();
        let mut pairs = Vec::new();
        let mut pair_index = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if sums[i][j] != RootSum::Outside {
                    pair_index[i][j] = Some(pairs.len());
                    pairs.push((i, j));
                }
            }
        }
        let simple_idx = simple.iter().map(|s| index[s]).collect();
        let simple_coords = ordered.iter().map(|r| coords_of(r)).collect();
        RootSystem {
            kind,
            roots: ordered,
            simple: simple_idx,
            simple_coords,
            negation,
            sums,
            pairs,
            pair_index,
        }
    }

    pub fn kind(&self) -> RootSystemKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn root(&self, k: usize) -> &[i64] {
        &self.roots[k]
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    /// Coordinates of a root on the simple roots.
    pub fn simple_coordinates(&self, k: usize) -> &[i64] {
        &self.simple_coords[k]
    }

    pub fn is_positive(&self, k: usize) -> bool {
        self.simple_coords[k].iter().all(|&c| c >= 0)
    }

    pub fn negative(&self, k: usize) -> usize {
        self.negation[k]
    }

    pub fn sum(&self, i: usize, j: usize) -> RootSum {
        self.sums[i][j]
    }

    pub fn find(&self, v: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == v)
    }

    pub fn inner(&self, i: usize, j: usize) -> i64 {
        dot(&self.roots[i], &self.roots[j])
    }

    /// ⟨β, α_i∨⟩ for the i-th simple root.
    pub fn cartan(&self, beta: usize, i: usize) -> i64 {
        let a = self.simple[i];
        let num = 2 * self.inner(beta, a);
        let den = self.inner(a, a);
        assert_eq!(num % den, 0);
        num / den
    }

    /// Coordinates of the coroot β∨ on the simple coroots.
    pub fn coroot_coordinates(&self, beta: usize) -> Vec<i64> {
        let bb = self.inner(beta, beta);
        self.simple_coords[beta]
            .iter()
            .zip(&self.simple)
            .map(|(&c, &a)| {
                let num = c * self.inner(a, a);
                assert_eq!(num % bb, 0);
                num / bb
            })
            .collect()
    }

    /// The largest r ≥ 0 with γ − rβ a root.
    pub fn string_below(&self, beta: usize, gamma: usize) -> i64 {
        let mut r = 0;
        let mut x = self.roots[gamma].clone();
        loop {
            x = sub(&x, &self.roots[beta]);
            if self.find(&x).is_some() {
                r += 1;
            } else {
                return r;
            }
        }
    }

    /// Ordered pairs (β, γ) of roots with β + γ ∈ Φ ∪ {0}.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_index(&self, i: usize, j: usize) -> Option<usize> {
        self.pair_index[i][j]
    }

    /// Unordered pairs {β, γ} of the 2-chain basis, returned with β < γ.
    pub fn unordered_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().copied().filter(|&(i, j)| i < j).collect()
    }

    /// Triples (α₀, α₁, α₂) of roots all of whose consecutive partial sums lie
    /// in Φ ∪ {0}.
    pub fn three_chains(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let ab = self.sums[a][b];
                if ab == RootSum::Outside {
                    continue;
                }
                for c in 0..n {
                    let bc = self.sums[b][c];
                    if bc == RootSum::Outside {
                        continue;
                    }
                    let total = add(&add(&self.roots[a], &self.roots[b]), &self.roots[c]);
                    if total.iter().all(|&x| x == 0) || self.find(&total).is_some() {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    pub fn label(&self, k: usize) -> String {
        let parts: Vec<String> = self.roots[k].iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

pub fn build_root_system(kind: RootSystemKind) -> RootSystem {
    RootSystem::build(kind)
}

/// A 1-cochain: one value in ℤ^q per root, with ω¹(0) = 0 implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cochain1 {
    pub values: Vec<Vec<i64>>,
}

impl Cochain1 {
    pub fn zero(rs: &RootSystem, q: usize) -> Self {
        Cochain1 {
            values: vec![vec![0; q]; rs.len()],
        }
    }

    /// The cochain equal to 1 in coordinate `coord` on the given roots.
    pub fn indicator(rs: &RootSystem, q: usize, coord: usize, support: &[usize]) -> Self {
        let mut c = Self::zero(rs, q);
        for &k in support {
            c.values[k][coord] = 1;
        }
        c
    }

    pub fn q(&self) -> usize {
        self.values.first().map_or(0, |v| v.len())
    }

    pub fn norm(&self) -> Vec<i64> {
        (0..self.q())
            .map(|i| self.values.iter().map(|v| v[i]).sum())
            .collect()
    }

    pub fn transformed(&self, perm: &[usize], coords: &[usize]) -> Self {
        Cochain1 {
            values: (0..self.values.len())
                .map(|k| coords.iter().map(|&c| self.values[perm[k]][c]).collect())
                .collect(),
        }
    }
}

/// A 2-cochain, one value in ℤ^q per ordered pair of the 2-chain basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cochain2 {
    pub values: Vec<Vec<i64>>,
}

impl Cochain2 {
    pub fn zero(rs: &RootSystem, q: usize) -> Self {
        Cochain2 {
            values: vec![vec![0; q]; rs.pairs().len()],
        }
    }

    pub fn q(&self) -> usize {
        self.values.first().map_or(0, |v| v.len())
    }

    /// Value on (β, γ); zero-root arguments give zero.
    pub fn get(&self, rs: &RootSystem, i: usize, j: usize) -> Option<&[i64]> {
        rs.pair_index(i, j).map(|p| self.values[p].as_slice())
    }

    pub fn set(&mut self, rs: &RootSystem, i: usize, j: usize, v: Vec<i64>) {
        let p = rs.pair_index(i, j).expect("not a 2-chain");
        self.values[p] = v;
    }

    /// First ordered pair on which ω²(β,γ) ≠ ω²(γ,β).
    pub fn asymmetry(&self, rs: &RootSystem) -> Option<(usize, usize)> {
        rs.pairs()
            .iter()
            .enumerate()
            .find(|&(p, &(i, j))| self.values[p] != self.values[rs.pair_index(j, i).unwrap()])
            .map(|(_, &pair)| pair)
    }

    pub fn is_symmetric(&self, rs: &RootSystem) -> bool {
        self.asymmetry(rs).is_none()
    }

    /// d²ω² on one 3-chain.
    pub fn coboundary_at(&self, rs: &RootSystem, a: usize, b: usize, c: usize) -> Vec<i64> {
        let q = self.q();
        let val = |x: RootSum, y: usize| -> Vec<i64> {
            match x {
                RootSum::Root(k) => self.get(rs, k, y).unwrap().to_vec(),
                _ => vec![0; q],
            }
        };
        let val2 = |x: usize, y: RootSum| -> Vec<i64> {
            match y {
                RootSum::Root(k) => self.get(rs, x, k).unwrap().to_vec(),
                _ => vec![0; q],
            }
        };
        let w_bc = self.get(rs, b, c).unwrap();
        let w_ab = self.get(rs, a, b).unwrap();
        let w_ab_c = val(rs.sum(a, b), c);
        let w_a_bc = val2(a, rs.sum(b, c));
        (0..q)
            .map(|i| w_bc[i] - w_ab_c[i] + w_a_bc[i] - w_ab[i])
            .collect()
    }

    /// First 3-chain on which d²ω² does not vanish.
    pub fn cocycle_defect(&self, rs: &RootSystem) -> Option<(usize, usize, usize)> {
        rs.three_chains()
            .into_iter()
            .find(|&(a, b, c)| self.coboundary_at(rs, a, b, c).iter().any(|&x| x != 0))
    }

    pub fn is_cocycle(&self, rs: &RootSystem) -> bool {
        self.cocycle_defect(rs).is_none()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().flatten().all(|&x| x >= 0)
    }

    pub fn norm(&self, rs: &RootSystem) -> Vec<i64> {
        (0..self.q())
            .map(|c| {
                rs.unordered_pairs()
                    .iter()
                    .map(|&(i, j)| self.get(rs, i, j).unwrap()[c])
                    .sum()
            })
            .collect()
    }

    pub fn transformed(&self, rs: &RootSystem, perm: &[usize], coords: &[usize]) -> Self {
        Cochain2 {
            values: rs
                .pairs()
                .iter()
                .map(|&(i, j)| {
                    let v = self.get(rs, perm[i], perm[j]).unwrap();
                    coords.iter().map(|&c| v[c]).collect()
                })
                .collect(),
        }
    }
}

/// d¹ω¹(β, γ) = ω¹(γ) − ω¹(β + γ) + ω¹(β).
pub fn coboundary1(rs: &RootSystem, w: &Cochain1) -> Cochain2 {
    let q = w.q();
    Cochain2 {
        values: rs
            .pairs()
            .iter()
            .map(|&(i, j)| {
                (0..q)
                    .map(|c| {
                        let mid = match rs.sum(i, j) {
                            RootSum::Root(k) => w.values[k][c],
                            _ => 0,
                        };
                        w.values[j][c] - mid + w.values[i][c]
                    })
                    .collect()
            })
            .collect(),
    }
}

pub fn is_admissible(rs: &RootSystem, w: &Cochain1, kappa: &[u32], cap01: bool) -> bool {
    if w.q() != kappa.len() {
        return false;
    }
    if w.norm().iter().zip(kappa).any(|(&n, &k)| n != k as i64) {
        return false;
    }
    if w.values.iter().flatten().any(|&x| x < 0 || (cap01 && x > 1)) {
        return false;
    }
    let d = coboundary1(rs, w);
    d.values
        .iter()
        .flatten()
        .all(|&x| x >= 0 && (!cap01 || x <= 1))
}

/// Largest norm accepted by the unrestricted integer search.
pub const UNRESTRICTED_NORM_LIMIT: u32 = 6;

fn compositions(total: u32, parts: usize) -> Vec<Vec<i64>> {
    fn go(total: u32, parts: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            cur.push(total as i64);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=total).rev() {
            cur.push(x as i64);
            go(total - x, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Admissible single-coordinate value vectors of norm k.
fn single_coordinate(rs: &RootSystem, k: u32, cap01: bool) -> Vec<Vec<i64>> {
    let n = rs.len();
    let candidates: Vec<Vec<i64>> = if cap01 {
        let mut masks: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() == k).collect();
        // larger masks first puts early roots first in the listing
        masks.sort_by(|a, b| b.reverse_bits().cmp(&a.reverse_bits()));
        masks
            .into_iter()
            .map(|m| (0..n).map(|i| ((m >> i) & 1) as i64).collect())
            .collect()
    } else {
        compositions(k, n)
    };
    candidates
        .into_par_iter()
        .filter(|vals| {
            let w = Cochain1 {
                values: vals.iter().map(|&x| vec![x]).collect(),
            };
            is_admissible(rs, &w, &[k], cap01)
        })
        .collect()
}

/// All admissible 1-cochains of norm κ. The conditions are componentwise, so
/// the result is the product of the single-coordinate solution sets.
pub fn enumerate_cochains(rs: &RootSystem, kappa: &[u32], cap01: bool) -> Result<Vec<Cochain1>> {
    if !cap01 {
        if let Some(&k) = kappa.iter().find(|&&k| k > UNRESTRICTED_NORM_LIMIT) {
            return Err(Error::InvalidInput(format!(
                "norm {k} exceeds the unrestricted search limit {UNRESTRICTED_NORM_LIMIT}; pass cap01"
            )));
        }
    }
    let per: Vec<Vec<Vec<i64>>> = kappa
        .iter()
        .map(|&k| single_coordinate(rs, k, cap01))
        .collect();
    let mut out = vec![Cochain1 {
        values: vec![Vec::new(); rs.len()],
    }];
    for sols in &per {
        let mut next = Vec::with_capacity(out.len() * sols.len());
        for prefix in &out {
            for s in sols {
                let mut c = prefix.clone();
                for (k, v) in c.values.iter_mut().enumerate() {
                    v.push(s[k]);
                }
                next.push(c);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Root permutations induced by linear maps of the ambient space that send Φ
/// onto itself; identity first, then lexicographic.
pub fn automorphism_group(rs: &RootSystem) -> Vec<Vec<usize>> {
    let n = rs.len();
    let rank = rs.rank();
    let mut images: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for pre in &images {
            for k in (0..n).filter(|k| !pre.contains(k)) {
                let mut v = pre.clone();
                v.push(k);
                next.push(v);
            }
        }
        images = next;
    }
    let mut perms: Vec<Vec<usize>> = images
        .par_iter()
        .filter_map(|img| {
            let mut perm = Vec::with_capacity(n);
            for k in 0..n {
                let mut v = vec![0; rs.root(0).len()];
                for (i, &c) in rs.simple_coordinates(k).iter().enumerate() {
                    for (x, y) in v.iter_mut().zip(rs.root(img[i])) {
                        *x += c * y;
                    }
                }
                perm.push(rs.find(&v)?);
            }
            let distinct: BTreeSet<usize> = perm.iter().copied().collect();
            if distinct.len() != n {
                return None;
            }
            let preserves = (0..n).all(|i| {
                (0..n).all(|j| match (rs.sum(i, j), rs.sum(perm[i], perm[j])) {
                    (RootSum::Root(a), RootSum::Root(b)) => perm[a] == b,
                    (x, y) => std::mem::discriminant(&x) == std::mem::discriminant(&y),
                })
            });
            preserves.then_some(perm)
        })
        .collect();
    perms.sort();
    perms.dedup();
    perms
}

/// Coordinate permutations generated by the given transpositions.
pub fn coordinate_permutations(q: usize, swaps: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut group: BTreeSet<Vec<usize>> = BTreeSet::new();
    let id: Vec<usize> = (0..q).collect();
    group.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for &(a, b) in swaps {
            if a >= q || b >= q {
                continue;
            }
            let mut r = p.clone();
            r.swap(a, b);
            if group.insert(r.clone()) {
                frontier.push(r);
            }
        }
    }
    group.into_iter().collect()
}

/// Transpositions between coordinates whose norm targets agree.
pub fn equal_kappa_swaps(kappa: &[u32]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..kappa.len() {
        for j in i + 1..kappa.len() {
            if kappa[i] == kappa[j] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Lexicographically smallest image of ω² under the automorphisms and the
/// allowed coordinate permutations, with the map that achieves it.
pub fn canonical_form(
    rs: &RootSystem,
    w: &Cochain2,
    group: &[Vec<usize>],
    coords: &[Vec<usize>],
) -> (Cochain2, usize, usize) {
    let mut best: Option<(Cochain2, usize, usize)> = None;
    for (g, perm) in group.iter().enumerate() {
        for (s, cp) in coords.iter().enumerate() {
            let t = w.transformed(rs, perm, cp);
            if best.as_ref().is_none_or(|(b, _, _)| t < *b) {
                best = Some((t, g, s));
            }
        }
    }
    best.expect("group contains the identity")
}

/// One isomorphism class of 2-cochains.
#[derive(Clone, Debug, Serialize)]
pub struct CoboundaryClass {
    pub representative: Cochain2,
    /// Positions of the input items in this class.
    pub members: Vec<usize>,
}

/// Orbits of the items under root-system automorphisms (and the permitted
/// coordinate swaps), ordered by canonical representative.
pub fn classify_up_to_iso(
    rs: &RootSystem,
    items: &[Cochain2],
    allow_coordinate_swap: &[(usize, usize)],
) -> Vec<CoboundaryClass> {
    let Some(first) = items.first() else {
        return Vec::new();
    };
    let group = automorphism_group(rs);
    let coords = coordinate_permutations(first.q(), allow_coordinate_swap);
    let canon: Vec<Cochain2> = items
        .par_iter()
        .map(|w| canonical_form(rs, w, &group, &coords).0)
        .collect();
    let mut classes: BTreeMap<Cochain2, Vec<usize>> = BTreeMap::new();
    for (i, c) in canon.into_iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    classes
        .into_iter()
        .map(|(representative, members)| CoboundaryClass {
            representative,
            members,
        })
        .collect()
}

/// A coboundary class together with a 1-cochain integrating its
/// representative.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifiedCoboundary {
    pub coboundary: Cochain2,
    pub cochain: Cochain1,
    pub cochains_in_class: usize,
}

pub fn classify_cochains(
    rs: &RootSystem,
    cochains: &[Cochain1],
    allow_coordinate_swap: &[(usize, usize)],
) -> Vec<ClassifiedCoboundary> {
    let Some(first) = cochains.first() else {
        return Vec::new();
    };
    let group = automorphism_group(rs);
    let coords = coordinate_permutations(first.q(), allow_coordinate_swap);
    let forms: Vec<(Cochain2, usize, usize)> = cochains
        .par_iter()
        .map(|w| canonical_form(rs, &coboundary1(rs, w), &group, &coords))
        .collect();
    let mut classes: BTreeMap<Cochain2, (Cochain1, usize)> = BTreeMap::new();
    for (w, (c, g, s)) in cochains.iter().zip(forms) {
        let e = classes
            .entry(c)
            .or_insert_with(|| (w.transformed(&group[g], &coords[s]), 0));
        e.1 += 1;
    }
    classes
        .into_iter()
        .map(|(coboundary, (cochain, n))| ClassifiedCoboundary {
            coboundary,
            cochain,
            cochains_in_class: n,
        })
        .collect()
}

/// Laurent monomial in 𝕀₁, …, 𝕀_q as an exponent vector.
pub type Monomial = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coefficient: i64,
    pub monomial: Monomial,
    pub generator: usize,
}

/// Element of the free ℤ[𝕀^±]-module on the generators.
type Element = BTreeMap<(usize, Monomial), i64>;

fn insert(e: &mut Element, generator: usize, monomial: Monomial, c: i64) {
    if c == 0 {
        return;
    }
    let key = (generator, monomial);
    let v = e.entry(key.clone()).or_insert(0);
    *v += c;
    if *v == 0 {
        e.remove(&key);
    }
}

fn mono_add(a: &[i64], b: &[i64]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Lie algebra over ℂ[𝕀] on generators h_i (simple coroots) and e_β.
/// Generator k < rank is h_{k}; generator rank + j is e for root j.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssocAlgebra {
    pub rank: usize,
    pub q: usize,
    pub names: Vec<String>,
    /// table[x][y] expands [x, y].
    pub table: Vec<Vec<Vec<Term>>>,
}

/// How a table fails to be a Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum JacobiWitness {
    /// [x, y] ≠ −[y, x].
    Antisymmetry { left: usize, right: usize },
    /// The Jacobi sum of the three generators is nonzero.
    Jacobi { triple: [usize; 3] },
}

impl JacobiWitness {
    pub fn describe(&self, names: &[String]) -> String {
        match self {
            Self::Antisymmetry { left, right } => format!(
                "[{0},{1}] != -[{1},{0}]",
                names[*left], names[*right]
            ),
            Self::Jacobi { triple: [x, y, z] } => format!(
                "Jacobi fails on ({}, {}, {})",
                names[*x], names[*y], names[*z]
            ),
        }
    }
}

/// Sign bicharacter on the root lattice: ε(α_i, α_i) = −1, ε(α_i, α_j) = −1
/// for i > j joined in the Dynkin diagram, +1 otherwise.
pub fn asymmetry_sign(rs: &RootSystem, beta: usize, gamma: usize) -> i64 {
    let cb = rs.simple_coordinates(beta);
    let cg = rs.simple_coordinates(gamma);
    let rank = rs.rank();
    let mut exponent = 0i64;
    for i in 0..rank {
        for j in 0..=i {
            let linked = i == j || rs.inner(rs.simple[i], rs.simple[j]) != 0;
            if linked {
                exponent += cb[i] * cg[j];
            }
        }
    }
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl AssocAlgebra {
    /// The bracket table of A^{ω²}(Φ) without any consistency check.
    pub fn from_cochain_unchecked(rs: &RootSystem, w: &Cochain2) -> AssocAlgebra {
        let rank = rs.rank();
        let n = rs.len();
        let q = w.q();
        let size = rank + n;
        let one: Monomial = vec![0; q];
        let sgn = |k: usize| if rs.is_positive(k) { 1 } else { -1 };
        let mut table = vec![vec![Vec::new(); size]; size];
        for i in 0..rank {
            for k in 0..n {
                let c = rs.cartan(k, i);
                if c != 0 {
                    table[i][rank + k] = vec![Term {
                        coefficient: c,
                        monomial: one.clone(),
                        generator: rank + k,
                    }];
                    table[rank + k][i] = vec![Term {
                        coefficient: -c,
                        monomial: one.clone(),
                        generator: rank + k,
                    }];
                }
            }
        }
        for (p, &(b, g)) in rs.pairs().iter().enumerate() {
            let mono = w.values[p].clone();
            // e_β = ±E_β in the lattice construction, + on positive roots
            let terms = match rs.sum(b, g) {
                RootSum::Zero => {
                    let s = asymmetry_sign(rs, b, g) * sgn(b) * sgn(g);
                    rs.coroot_coordinates(b)
                        .into_iter()
                        .enumerate()
                        .filter(|&(_, c)| c != 0)
                        .map(|(i, c)| Term {
                            coefficient: s * c,
                            monomial: mono.clone(),
                            generator: i,
                        })
                        .collect()
                }
                RootSum::Root(k) => {
                    let s = asymmetry_sign(rs, b, g) * sgn(b) * sgn(g) * sgn(k);
                    vec![Term {
                        coefficient: s * (rs.string_below(b, g) + 1),
                        monomial: mono,
                        generator: rank + k,
                    }]
                }
                RootSum::Outside => unreachable!(),
            };
            table[rank + b][rank + g] = terms;
        }
        let mut names: Vec<String> = (0..rank).map(|i| format!("h{}", i + 1)).collect();
        names.extend((0..n).map(|k| format!("e{}", rs.label(k))));
        AssocAlgebra {
            rank,
            q,
            names,
            table,
        }
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn bracket(&self, x: usize, y: usize) -> &[Term] {
        &self.table[x][y]
    }

    fn bracket_element(&self, x: usize, e: &Element) -> Element {
        let mut out = Element::new();
        for ((g, m), &c) in e {
            for t in &self.table[x][*g] {
                insert(&mut out, t.generator, mono_add(m, &t.monomial), c * t.coefficient);
            }
        }
        out
    }

    fn as_element(&self, x: usize, y: usize) -> Element {
        let mut e = Element::new();
        for t in &self.table[x][y] {
            insert(&mut e, t.generator, t.monomial.clone(), t.coefficient);
        }
        e
    }

    /// First failure of antisymmetry or of the Jacobi identity, checked
    /// exactly over the Laurent monomials.
    pub fn jacobi_witness(&self) -> Option<JacobiWitness> {
        let size = self.size();
        for x in 0..size {
            for y in x..size {
                let a = self.as_element(x, y);
                let mut b = self.as_element(y, x);
                for (k, v) in &a {
                    insert(&mut b, k.0, k.1.clone(), *v);
                }
                if !b.is_empty() {
                    return Some(JacobiWitness::Antisymmetry { left: x, right: y });
                }
            }
        }
        let triples: Vec<[usize; 3]> = (0..size)
            .flat_map(|x| (x + 1..size).flat_map(move |y| (y + 1..size).map(move |z| [x, y, z])))
            .collect();
        triples
            .par_iter()
            .find_first(|&&[x, y, z]| {
                let mut total = self.bracket_element(x, &self.as_element(y, z));
                for (k, v) in self.bracket_element(y, &self.as_element(z, x)) {
                    insert(&mut total, k.0, k.1, v);
                }
                for (k, v) in self.bracket_element(z, &self.as_element(x, y)) {
                    insert(&mut total, k.0, k.1, v);
                }
                !total.is_empty()
            })
            .map(|&triple| JacobiWitness::Jacobi { triple })
    }

    pub fn render_term_list(&self, terms: &[Term]) -> String {
        if terms.is_empty() {
            return "0".into();
        }
        let letters = ["Ia", "Ib", "Ic"];
        terms
            .iter()
            .map(|t| {
                let mut s = t.coefficient.to_string();
                for (i, &e) in t.monomial.iter().enumerate() {
                    let name = if self.q <= 3 {
                        letters[i].to_string()
                    } else {
                        format!("I{}", i + 1)
                    };
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{name}")),
                        _ => s.push_str(&format!("*{name}^{e}")),
                    }
                }
                format!("{s}*{}", self.names[t.generator])
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A^{ω²}(Φ), rejected with a witness unless the Jacobi identity holds.
pub fn assoc_lie_algebra(
    rs: &RootSystem,
    w: &Cochain2,
) -> std::result::Result<AssocAlgebra, JacobiWitness> {
    let alg = AssocAlgebra::from_cochain_unchecked(rs, w);
    match alg.jacobi_witness() {
        Some(wit) => Err(wit),
        None => Ok(alg),
    }
}

pub type IntMatrix = Vec<Vec<i64>>;

fn commutator(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for k in 0..n {
                s += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

/// Chevalley basis {H_α, E_β} of the base algebra, in the adjoint
/// representation of the 𝕀-free algebra.
pub fn chevalley_matrices(rs: &RootSystem) -> Vec<IntMatrix> {
    let alg = AssocAlgebra::from_cochain_unchecked(rs, &Cochain2::zero(rs, 0));
    let size = alg.size();
    (0..size)
        .map(|x| {
            let mut m = vec![vec![0; size]; size];
            for y in 0..size {
                for t in alg.bracket(x, y) {
                    m[t.generator][y] += t.coefficient;
                }
            }
            m
        })
        .collect()
}

/// {H_α, 𝕀^{ω¹(β)} E_β} for a given Chevalley basis of the base algebra.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalRepresentation {
    pub rank: usize,
    pub generators: Vec<(Monomial, IntMatrix)>,
}

pub fn canonical_representation(
    rs: &RootSystem,
    w: &Cochain1,
    base_matrices: &[IntMatrix],
) -> Result<CanonicalRepresentation> {
    let rank = rs.rank();
    if base_matrices.len() != rank + rs.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} base matrices, got {}",
            rank + rs.len(),
            base_matrices.len()
        )));
    }
    let q = w.q();
    let generators = base_matrices
        .iter()
        .enumerate()
        .map(|(x, m)| {
            let mono = if x < rank {
                vec![0; q]
            } else {
                w.values[x - rank].clone()
            };
            (mono, m.clone())
        })
        .collect();
    Ok(CanonicalRepresentation { rank, generators })
}

impl CanonicalRepresentation {
    /// Structure constants read off from matrix commutators.
    pub fn structure_constants(&self, rs: &RootSystem) -> Result<AssocAlgebra> {
        let size = self.generators.len();
        let q = self.generators[0].0.len();
        let flat: Vec<Vec<i64>> = self
            .generators
            .iter()
            .map(|(_, m)| m.iter().flatten().copied().collect())
            .collect();
        let len = flat[0].len();
        let a: Vec<Vec<Ratio<i64>>> = (0..len)
            .map(|r| (0..size).map(|c| Ratio::from_integer(flat[c][r])).collect())
            .collect();
        let mut table = vec![vec![Vec::new(); size]; size];
        for x in 0..size {
            for y in 0..size {
                let (mx, ax) = &self.generators[x];
                let (my, ay) = &self.generators[y];
                let br: Vec<Ratio<i64>> = commutator(ax, ay)
                    .into_iter()
                    .flatten()
                    .map(Ratio::from_integer)
                    .collect();
                let coeffs = solve_rational(&a, &br).ok_or_else(|| {
                    Error::Inconsistent(format!("commutator of {x} and {y} leaves the span"))
                })?;
                let mut terms = Vec::new();
                for (z, c) in coeffs.into_iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if !c.is_integer() {
                        return Err(Error::Inconsistent(
                            "non-integral structure constant".into(),
                        ));
                    }
                    let mz = &self.generators[z].0;
                    let mono: Monomial = (0..q).map(|i| mx[i] + my[i] - mz[i]).collect();
                    terms.push(Term {
                        coefficient: c.to_integer(),
                        monomial: mono,
                        generator: z,
                    });
                }
                table[x][y] = terms;
            }
        }
        let mut names: Vec<String> = (0..self.rank).map(|i| format!("h{}", i + 1)).collect();
        names.extend((0..rs.len()).map(|k| format!("e{}", rs.label(k))));
        Ok(AssocAlgebra {
            rank: self.rank,
            q,
            names,
            table,
        })
    }
}

const PALETTE: [&str; 3] = ["red", "green", "blue"];

fn colour(c: usize) -> String {
    PALETTE
        .get(c)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("gray{}", 30 + 10 * c))
}

/// Graphviz rendering: roots and 0 as nodes, the support of ω² as edges with
/// one colour per coordinate (red, green, blue for a, b, c). Opposite pairs
/// {β, −β} are drawn as two spokes through 0. Nodes where a coordinate of ω¹
/// equals 1 are filled in that coordinate's colour.
pub fn to_dot(rs: &RootSystem, w: &Cochain2, filled: Option<&Cochain1>, name: &str) -> String {
    let mut s = format!("graph \"{name}\" {{\n  node [shape=circle];\n  \"0\";\n");
    for k in 0..rs.len() {
        let label = rs.label(k);
        let fills: Vec<String> = filled
            .map(|c| {
                (0..c.q())
                    .filter(|&i| c.values[k][i] >= 1)
                    .map(colour)
                    .collect()
            })
            .unwrap_or_default();
        match fills.len() {
            0 => s.push_str(&format!("  \"{label}\";\n")),
            1 => s.push_str(&format!(
                "  \"{label}\" [style=filled, fillcolor={}];\n",
                fills[0]
            )),
            _ => s.push_str(&format!(
                "  \"{label}\" [style=wedged, fillcolor=\"{}\"];\n",
                fills.join(":")
            )),
        }
    }
    let edge = |s: &mut String, a: &str, b: &str, c: usize, v: i64| {
        if v == 1 {
            s.push_str(&format!("  \"{a}\" -- \"{b}\" [color={}];\n", colour(c)));
        } else {
            s.push_str(&format!(
                "  \"{a}\" -- \"{b}\" [color={}, label=\"{v}\"];\n",
                colour(c)
            ));
        }
    };
    for c in 0..w.q() {
        for (i, j) in rs.unordered_pairs() {
            let v = w.get(rs, i, j).unwrap()[c];
            if v == 0 {
                continue;
            }
            if rs.sum(i, j) == RootSum::Zero {
                edge(&mut s, &rs.label(i), "0", c, v);
                edge(&mut s, &rs.label(j), "0", c, v);
            } else {
                edge(&mut s, &rs.label(i), &rs.label(j), c, v);
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Read back a drawing in the format of [`to_dot`]. A spoke β–0 stands for
/// the opposite pair {β, −β}.
pub fn parse_dot(rs: &RootSystem, text: &str, q: usize) -> Result<(Cochain2, Cochain1)> {
    let lookup = |label: &str| -> Result<Option<usize>> {
        if label == "0" {
            return Ok(None);
        }
        (0..rs.len())
            .find(|&k| rs.label(k) == label)
            .map(Some)
            .ok_or_else(|| Error::InvalidInput(format!("unknown root {label}")))
    };
    let coord_of = |attrs: &str, key: &str| -> Vec<usize> {
        let Some(pos) = attrs.find(key) else {
            return Vec::new();
        };
        let rest = attrs[pos + key.len()..].trim_start_matches(['=', '"', ' ']);
        let end = rest.find([',', ']', '"']).unwrap_or(rest.len());
        rest[..end]
            .split(':')
            .filter_map(|c| PALETTE.iter().position(|p| *p == c.trim()))
            .collect()
    };
    let mut w = Cochain2::zero(rs, q);
    let mut filled = Cochain1::zero(rs, q);
    for line in text.lines() {
        let line = line.trim();
        let quoted: Vec<&str> = line.split('"').skip(1).step_by(2).collect();
        let attrs = line.find('[').map_or("", |p| &line[p..]);
        if line.contains("--") && quoted.len() >= 2 {
            let (a, b) = (lookup(quoted[0])?, lookup(quoted[1])?);
            let value = attrs
                .find("label=\"")
                .and_then(|p| attrs[p + 7..].split('"').next())
                .and_then(|v| v.parse::<i64>().ok())
                .unwrap_or(1);
            for c in coord_of(attrs, "color") {
                if c >= q {
                    return Err(Error::InvalidInput(format!("colour index {c} beyond q")));
                }
                let (i, j) = match (a, b) {
                    (Some(i), None) | (None, Some(i)) => (i, rs.negative(i)),
                    (Some(i), Some(j)) => (i, j),
                    (None, None) => continue,
                };
                if rs.pair_index(i, j).is_none() {
                    return Err(Error::InvalidInput(format!(
                        "{} and {} do not form a 2-chain",
                        rs.label(i),
                        rs.label(j)
                    )));
                }
                let p = rs.pair_index(i, j).unwrap();
                let r = rs.pair_index(j, i).unwrap();
                w.values[p][c] = value;
                w.values[r][c] = value;
            }
        } else if quoted.len() == 1 && !line.starts_with("graph") {
            if let Some(k) = lookup(quoted[0])? {
                for c in coord_of(attrs, "fillcolor") {
                    if c < q {
                        filled.values[k][c] = 1;
                    }
                }
            }
        }
    }
    Ok((w, filled))
}
