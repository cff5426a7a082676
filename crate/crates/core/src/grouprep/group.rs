use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::{GroupKind, GroupSpec};
use crate::exactnum::{Cyclotomic, Matrix};
use crate::{Error, Result};

/// How the abstract group is realised by 2×2 matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Realization {
    /// The binary polyhedral group inside SL₂, a double cover of G.
    Binary,
    /// Generated by diag(ω_M, ω_M⁻¹), plus the coordinate swap for dihedral
    /// groups.
    Standard { parameter: u32 },
}

type Key = Vec<(u32, Vec<BigInt>, BigInt)>;

fn key(m: &Matrix) -> Key {
    (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).key())
        .collect()
}

/// A finite group of 2×2 matrices over one cyclotomic field, together with
/// the distinguished generators g_a, g_b, g_c of the triangle presentation.
#[derive(Clone, Debug)]
pub struct BinaryGroup {
    spec: GroupSpec,
    realization: Realization,
    conductor: u32,
    elements: Vec<Matrix>,
    index: HashMap<Key, usize>,
    generators: Vec<usize>,
    identity: usize,
    central: usize,
    orders: Vec<u32>,
    inverses: Vec<usize>,
}

fn mat(n: u32, rows: [[Cyclotomic; 2]; 2]) -> Matrix {
    let [r0, r1] = rows;
    let to = |c: Cyclotomic| {
        c.lift_conductor(n)
            .expect("conductor divides group conductor")
    };
    let [a, b] = r0;
    let [c, d] = r1;
    Matrix::from_rows(vec![vec![to(a), to(b)], vec![to(c), to(d)]])
}

fn closure(seeds: &[Matrix], limit: usize) -> Result<Vec<Matrix>> {
    let n = seeds[0].conductor();
    let id = Matrix::identity(2, n);
    let mut index: HashMap<Key, usize> = HashMap::new();
    index.insert(key(&id), 0);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for s in seeds {
            let m = &elements[e] * s;
            let k = key(&m);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(k) {
                if elements.len() >= limit {
                    return Err(Error::Inconsistent(format!(
                        "group closure exceeds {limit} elements"
                    )));
                }
                e.insert(elements.len());
                queue.push_back(elements.len());
                elements.push(m);
            }
        }
    }
    Ok(elements)
}

impl BinaryGroup {
    fn assemble(
        spec: GroupSpec,
        realization: Realization,
        elements: Vec<Matrix>,
        gens: &[Matrix],
        central: &Matrix,
    ) -> Result<Self> {
        let conductor = spec.conductor();
        let index: HashMap<Key, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (key(m), i))
            .collect();
        let look = |m: &Matrix| {
            index
                .get(&key(m))
                .copied()
                .ok_or_else(|| Error::Inconsistent("generator outside the group".into()))
        };
        let generators = gens.iter().map(look).collect::<Result<Vec<_>>>()?;
        let identity = look(&Matrix::identity(2, conductor))?;
        let central = look(central)?;
        let mut orders = Vec::with_capacity(elements.len());
        let mut inverses = Vec::with_capacity(elements.len());
        for m in &elements {
            let mut p = m.clone();
            let mut k = 1u32;
            while !p.is_identity() {
                p = &p * m;
                k += 1;
            }
            orders.push(k);
            let inv = m.pow(k as u64 - 1);
            inverses.push(look(&inv)?);
        }
        Ok(BinaryGroup {
            spec,
            realization,
            conductor,
            elements,
            index,
            generators,
            identity,
            central,
            orders,
            inverses,
        })
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&key(m)).copied()
    }

    /// Element index of g_i, where i indexes the exceptional orbits.
    pub fn generator(&self, orbit: usize) -> usize {
        self.generators[orbit]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// The central element z = g_a^{ν_a}.
    pub fn central(&self) -> usize {
        self.central
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index_of(&(&self.elements[i] * &self.elements[j]))
            .expect("group is closed")
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn power(&self, i: usize, k: i64) -> usize {
        let ord = self.orders[i] as i64;
        let e = k.rem_euclid(ord) as u64;
        self.index_of(&self.elements[i].pow(e))
            .expect("group is closed")
    }

    pub fn element_order(&self, i: usize) -> u32 {
        self.orders[i]
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> u32 {
        self.orders.iter().fold(1, |acc, o| acc.lcm(o))
    }

    pub fn contains_minus_identity(&self) -> bool {
        self.index_of(&-&Matrix::identity(2, self.conductor))
            .is_some()
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .all(|&x| g.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Evaluate a word such as `a2`, `b`, `z`, `1`, or `a3b` in the
    /// distinguished generators.
    pub fn word(&self, w: &str) -> Result<usize> {
        let mut acc = self.identity;
        let chars: Vec<char> = w.chars().collect();
        let mut i = 0;
        if w == "1" {
            return Ok(acc);
        }
        while i < chars.len() {
            let base = match chars[i] {
                'a' => self.generators[0],
                'b' => self.generators[1],
                'c' if self.generators.len() > 2 => self.generators[2],
                'z' => self.central,
                ch => return Err(Error::InvalidInput(format!("bad word letter {ch:?}"))),
            };
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let e: i64 = if start == i {
                1
            } else {
                chars[start..i].iter().collect::<String>().parse().unwrap()
            };
            acc = self.mul(acc, self.power(base, e));
        }
        Ok(acc)
    }

    /// Partition of the elements into conjugacy classes, identity first,
    /// each class sorted, classes ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes = Vec::new();
        let gens: Vec<usize> = self.generators.clone();
        for start in 0..self.order() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![start];
            class_of[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.mul(self.mul(g, x), self.inverse(g));
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Elements of the subgroup generated by the given elements.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Dimension of the H-fixed vectors in the regular representation,
    /// computed by counting cosets and by a character sum; both must agree.
    pub fn regular_fixed_dim(&self, gens: &[usize]) -> Result<usize> {
        let h = self.subgroup(gens);
        let cosets = self.order() / h.len();
        // χ_reg(h) counts the x with hx = x.
        let mut total = 0usize;
        for &e in &h {
            total += (0..self.order()).filter(|&x| self.mul(e, x) == x).count();
        }
        if !total.is_multiple_of(h.len()) || total / h.len() != cosets {
            return Err(Error::Inconsistent(
                "coset count and character sum disagree".into(),
            ));
        }
        Ok(cosets)
    }

    /// Check g_a^{ν_a} = g_b^{ν_b} = g_c^{ν_c} = g_a g_b g_c = z.
    pub fn satisfies_presentation(&self) -> bool {
        let nu = self.spec.nu();
        if self.generators.len() < 3 {
            return self.power(self.generators[0], nu[0] as i64) == self.central;
        }
        let prod = self.mul(
            self.mul(self.generators[0], self.generators[1]),
            self.generators[2],
        );
        prod == self.central
            && (0..3).all(|i| self.power(self.generators[i], nu[i] as i64) == self.central)
    }
}

fn w(n: u32, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(n, k)
}

fn int(n: u32, v: i64) -> Cyclotomic {
    Cyclotomic::from_int(n, v)
}

/// Group generated by the standard matrices with parameter `m`, viewed as a
/// realisation of `spec`; the central element is g_a^{ν_a}.
fn standard(spec: GroupSpec, m: u32) -> Result<BinaryGroup> {
    let n = spec.conductor();
    let r = Matrix::diagonal(&[w(m, 1).lift_conductor(n)?, w(m, -1).lift_conductor(n)?]);
    let nu_a = spec.nu()[0] as u64;
    let z = r.pow(nu_a);
    match spec.kind {
        GroupKind::Cyclic => {
            let elements = closure(std::slice::from_ref(&r), m as usize)?;
            let rinv = r.pow(m as u64 - 1);
            BinaryGroup::assemble(
                spec,
                Realization::Standard { parameter: m },
                elements,
                &[r, rinv],
                &z,
            )
        }
        GroupKind::Dihedral => {
            let s = mat(n, [[int(n, 0), int(n, 1)], [int(n, 1), int(n, 0)]]);
            let elements = closure(&[r.clone(), s.clone()], 2 * m as usize)?;
            let gb = &r.pow(m as u64 - 1) * &s;
            BinaryGroup::assemble(
                spec,
                Realization::Standard { parameter: m },
                elements,
                &[r, gb, s],
                &z,
            )
        }
        _ => Err(Error::InvalidInput(
            "standard matrices exist only for cyclic and dihedral groups".into(),
        )),
    }
}

fn quaternion(n: u32, a: &Cyclotomic, b: &Cyclotomic, c: &Cyclotomic, d: &Cyclotomic) -> Matrix {
    // a + bi + cj + dk as [[a+bi, c+di], [−c+di, a−bi]]
    let i = w(n, n as i64 / 4);
    mat(
        n,
        [
            [a + &(b * &i), c + &(d * &i)],
            [&(d * &i) - c, a - &(b * &i)],
        ],
    )
}

fn binary_polyhedral(spec: GroupSpec) -> Result<BinaryGroup> {
    let n = spec.conductor();
    let zero = int(n, 0);
    let one = int(n, 1);
    let half = Cyclotomic::from_frac(n, 1, 2);
    let qi = quaternion(n, &zero, &one, &zero, &zero);
    let qj = quaternion(n, &zero, &zero, &one, &zero);
    let qw = quaternion(n, &half, &half, &half, &half);
    let mut seeds = vec![qi, qj, qw];
    match spec.kind {
        GroupKind::Tetrahedral => {}
        GroupKind::Octahedral => seeds.push(Matrix::diagonal(&[
            w(n, n as i64 / 8),
            w(n, -(n as i64) / 8),
        ])),
        GroupKind::Icosahedral => {
            // golden ratio φ = −(ω5² + ω5³)
            let phi = -(w(n, 2 * n as i64 / 5) + w(n, 3 * n as i64 / 5));
            let phi_inv = &phi - &one;
            seeds.push(quaternion(
                n,
                &(&phi * &half),
                &(&phi_inv * &half),
                &half,
                &zero,
            ));
        }
        _ => unreachable!(),
    }
    let size = 2 * spec.order() as usize;
    let elements = closure(&seeds, size)?;
    if elements.len() != size {
        return Err(Error::Inconsistent(format!(
            "expected {size} elements, closure has {}",
            elements.len()
        )));
    }
    let nu = spec.nu();
    let z = -&Matrix::identity(2, n);
    // g_i has eigenvalues ω_{2ν_i}^{±1}
    let target_trace =
        |v: u32| w(n, n as i64 / (2 * v as i64)) + w(n, -(n as i64) / (2 * v as i64));
    let order_of = |m: &Matrix| {
        let mut p = m.clone();
        let mut k = 1;
        while !p.is_identity() && k <= size {
            p = &p * m;
            k += 1;
        }
        k as u32
    };
    let candidates = |v: u32| -> Vec<usize> {
        let t = target_trace(v);
        (0..elements.len())
            .filter(|&i| elements[i].trace() == t && order_of(&elements[i]) == 2 * v)
            .collect()
    };
    let ca = candidates(nu[0]);
    let cc = candidates(nu[2]);
    let tb = target_trace(nu[1]);
    let mut found = None;
    'search: for &a in &ca {
        let ainv = elements[a].pow(2 * nu[0] as u64 - 1);
        for &c in &cc {
            let cinv = elements[c].pow(2 * nu[2] as u64 - 1);
            let b = &(&ainv * &z) * &cinv;
            if b.trace() != tb || order_of(&b) != 2 * nu[1] {
                continue;
            }
            if closure(&[elements[a].clone(), elements[c].clone()], size)?.len() == size {
                found = Some((elements[a].clone(), b, elements[c].clone()));
                break 'search;
            }
        }
    }
    let (ga, gb, gc) =
        found.ok_or_else(|| Error::Inconsistent("no triangle generators found".into()))?;
    // conjugate so that g_a = diag(ζ, ζ⁻¹)
    let zeta = w(n, n as i64 / (2 * nu[0] as i64));
    let vec_for = |ev: &Cyclotomic| {
        let shifted = &ga - &Matrix::identity(2, n).scale(ev);
        shifted.kernel().pop().expect("eigenvector exists")
    };
    let v1 = vec_for(&zeta);
    let v2 = vec_for(&zeta.conjugate());
    let p = Matrix::from_rows(vec![
        vec![v1[0].clone(), v2[0].clone()],
        vec![v1[1].clone(), v2[1].clone()],
    ]);
    let pinv = p
        .inverse()
        .ok_or_else(|| Error::Inconsistent("eigenvectors are dependent".into()))?;
    let conj = |m: &Matrix| &(&pinv * m) * &p;
    let elements: Vec<Matrix> = elements.iter().map(conj).collect();
    let gens = [conj(&ga), conj(&gb), conj(&gc)];
    BinaryGroup::assemble(spec, Realization::Binary, elements, &gens, &z)
}

fn dicyclic(spec: GroupSpec) -> Result<BinaryGroup> {
    let n = spec.conductor();
    let m = 2 * spec.n;
    let r = Matrix::diagonal(&[w(m, 1).lift_conductor(n)?, w(m, -1).lift_conductor(n)?]);
    let i = w(n, n as i64 / 4);
    let s = mat(n, [[int(n, 0), i.clone()], [i, int(n, 0)]]);
    let elements = closure(&[r.clone(), s.clone()], 4 * spec.n as usize)?;
    let gb = &r.pow(m as u64 - 1) * &s;
    let z = -&Matrix::identity(2, n);
    BinaryGroup::assemble(spec, Realization::Binary, elements, &[r, gb, s], &z)
}

/// The binary polyhedral group G♭ ⊂ SL₂ of order 2|G|: binary cyclic and
/// dicyclic groups in the cyclic and dihedral cases.
pub fn build_binary_group(spec: GroupSpec) -> Result<BinaryGroup> {
    spec.validate()?;
    let g = match spec.kind {
        GroupKind::Cyclic => {
            let mut g = standard(spec, 2 * spec.n)?;
            g.realization = Realization::Binary;
            g
        }
        GroupKind::Dihedral => dicyclic(spec)?,
        _ => binary_polyhedral(spec)?,
    };
    if g.order() != 2 * spec.order() as usize {
        return Err(Error::Inconsistent(format!(
            "binary group of {} has order {}",
            spec.label(),
            g.order()
        )));
    }
    Ok(g)
}

/// The group carrying the character table of `spec`: the standard matrix
/// group Z_N or D_N for cyclic and dihedral groups, the binary group
/// otherwise.
pub fn standard_group(spec: GroupSpec) -> Result<BinaryGroup> {
    spec.validate()?;
    match spec.kind {
        GroupKind::Cyclic | GroupKind::Dihedral => standard(spec, spec.n),
        _ => build_binary_group(spec),
    }
}

/// The cover used for invariant theory on the sphere: D_N itself for odd N,
/// D_{2N} for even N, and the binary group in all other cases.
pub fn preferred_cover(spec: GroupSpec) -> Result<BinaryGroup> {
    spec.validate()?;
    match spec.kind {
        GroupKind::Dihedral if spec.n % 2 == 1 => standard(spec, spec.n),
        GroupKind::Dihedral => standard(spec, 2 * spec.n),
        _ => build_binary_group(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_orders() {
        assert_eq!(
            build_binary_group(GroupSpec::dihedral(3)).unwrap().order(),
            12
        );
        assert_eq!(build_binary_group(GroupSpec::cyclic(1)).unwrap().order(), 2);
        for spec in [
            GroupSpec::tetrahedral(),
            GroupSpec::octahedral(),
            GroupSpec::icosahedral(),
        ] {
            let g = build_binary_group(spec).unwrap();
            assert_eq!(g.order(), 2 * spec.order() as usize);
            assert!(g.contains_minus_identity());
            assert!(g.satisfies_presentation());
            assert_eq!(g.exponent(), 2 * spec.exponent());
            assert!(g.element(g.generator(0)).get(0, 1).is_zero());
        }
    }

    #[test]
    fn class_counts() {
        let t = build_binary_group(GroupSpec::tetrahedral()).unwrap();
        assert_eq!(t.conjugacy_classes().len(), 7);
        let o = build_binary_group(GroupSpec::octahedral()).unwrap();
        assert_eq!(o.conjugacy_classes().len(), 8);
        let pm = build_binary_group(GroupSpec::cyclic(1)).unwrap();
        assert_eq!(pm.conjugacy_classes().len(), 2);
        assert_eq!(pm.exponent(), 2);
    }

    #[test]
    fn dicyclic_presentation() {
        for n in 2..7 {
            let g = build_binary_group(GroupSpec::dihedral(n)).unwrap();
            assert!(g.satisfies_presentation(), "D{n}");
            assert!(g.elements().iter().all(|m| m.det().is_one()));
        }
    }

    #[test]
    fn standard_dihedral() {
        let d3 = standard_group(GroupSpec::dihedral(3)).unwrap();
        assert_eq!(d3.order(), 6);
        assert!(d3.satisfies_presentation());
        let s = d3.generator(2);
        assert_eq!(d3.regular_fixed_dim(&[s]).unwrap(), 3);
        assert_eq!(d3.regular_fixed_dim(&[]).unwrap(), 6);
        assert_eq!(d3.regular_fixed_dim(d3.generators()).unwrap(), 1);
        let cover = preferred_cover(GroupSpec::dihedral(4)).unwrap();
        assert_eq!(cover.order(), 16);
        assert_eq!(
            cover.central(),
            cover
                .index_of(&-&Matrix::identity(2, cover.conductor()))
                .unwrap()
        );
    }
}
