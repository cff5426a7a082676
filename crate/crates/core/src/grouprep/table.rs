use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::group::{preferred_cover, standard_group, BinaryGroup, Realization};
use super::{GroupKind, GroupSpec};
use crate::exactnum::{Cyclotomic, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyClass {
    pub label: String,
    pub representative: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Character {
    pub name: String,
    /// One value per conjugacy class, in table order.
    pub values: Vec<Cyclotomic>,
    /// Indicator and determinant as printed in the reference tables, when
    /// the table is hard-coded rather than generated.
    pub listed_indicator: Option<i32>,
    pub listed_det: Option<String>,
}

impl Character {
    pub fn degree(&self) -> u32 {
        self.values[0].to_i64().expect("degree is an integer") as u32
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaVector(pub Vec<Rational>);

impl KappaVector {
    /// The products ν_i κ_i.
    pub fn scaled(&self, nu: &[u32]) -> Vec<Rational> {
        self.0
            .iter()
            .zip(nu)
            .map(|(k, &v)| k * Rational::from_integer(BigInt::from(v)))
            .collect()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, k| acc + k)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub passed: bool,
    pub centralisers: Vec<u32>,
    /// First failing row pair (χ, ψ) or column pair, if any.
    pub violation: Option<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetricPower {
    pub h: u32,
    pub values: Vec<Cyclotomic>,
    pub decomposition: Vec<(String, u32)>,
}

impl fmt::Display for SymmetricPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .decomposition
            .iter()
            .map(|(n, m)| {
                if *m == 1 {
                    n.clone()
                } else {
                    format!("{m}{n}")
                }
            })
            .collect();
        write!(
            f,
            "{}",
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join("+")
            }
        )
    }
}

/// Character table of a finite matrix group, with classes in table order.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: BinaryGroup,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    characters: Vec<Character>,
    listed_centralisers: Option<Vec<u32>>,
}

struct Listed {
    columns: &'static [&'static str],
    centralisers: &'static [u32],
    rows: &'static [(&'static str, &'static str, i32, &'static str)],
}

const TETRAHEDRAL: Listed = Listed {
    columns: &["1", "a2", "c", "z", "b2", "b", "a"],
    centralisers: &[24, 6, 4, 24, 6, 6, 6],
    rows: &[
        ("T1", "1 1 1 1 1 1 1", 1, "T1"),
        ("T2", "1 w3 1 1 w3^2 w3 w3^2", 0, "T2"),
        ("T3", "1 w3^2 1 1 w3 w3^2 w3", 0, "T3"),
        ("T4", "2 -1 0 -2 -1 1 1", -1, "T1"),
        ("T5", "2 -w3^2 0 -2 -w3 w3^2 w3", 0, "T2"),
        ("T6", "2 -w3 0 -2 -w3^2 w3 w3^2", 0, "T3"),
        ("T7", "3 0 -1 3 0 0 0", 1, "T1"),
    ],
};

const OCTAHEDRAL: Listed = Listed {
    columns: &["1", "c", "b2", "a2", "z", "a3", "b", "a"],
    centralisers: &[48, 4, 6, 8, 48, 8, 6, 8],
    rows: &[
        ("O1", "1 1 1 1 1 1 1 1", 1, "O1"),
        ("O2", "1 -1 1 1 1 -1 1 -1", 1, "O2"),
        ("O3", "2 0 -1 2 2 0 -1 0", 1, "O2"),
        ("O4", "2 0 -1 0 -2 -r2 1 r2", -1, "O1"),
        ("O5", "2 0 -1 0 -2 r2 1 -r2", -1, "O1"),
        ("O6", "3 1 0 -1 3 -1 0 -1", 1, "O2"),
        ("O7", "3 -1 0 -1 3 1 0 1", 1, "O1"),
        ("O8", "4 0 1 0 -4 0 -1 0", -1, "O1"),
    ],
};

const ICOSAHEDRAL: Listed = Listed {
    columns: &["1", "a2", "a4", "b", "c", "b2", "a3", "z", "a"],
    centralisers: &[120, 10, 10, 6, 4, 6, 10, 120, 10],
    rows: &[
        ("Y1", "1 1 1 1 1 1 1 1 1", 1, "Y1"),
        ("Y2", "2 -p- -p+ 1 0 -1 p- -2 p+", -1, "Y1"),
        ("Y3", "2 -p+ -p- 1 0 -1 p+ -2 p-", -1, "Y1"),
        ("Y4", "3 p+ p- 0 -1 0 p+ 3 p-", 1, "Y1"),
        ("Y5", "3 p- p+ 0 -1 0 p- 3 p+", 1, "Y1"),
        ("Y6", "4 -1 -1 1 0 1 -1 4 -1", 1, "Y1"),
        ("Y7", "4 -1 -1 -1 0 1 1 -4 1", -1, "Y1"),
        ("Y8", "5 0 0 -1 1 -1 0 5 0", 1, "Y1"),
        ("Y9", "6 1 1 0 0 0 -1 -6 -1", -1, "Y1"),
    ],
};

/// Parse a table entry: integers, `w3`, `w3^2`, `r2` (√2), `p+`/`p-`
/// (golden sections), each optionally negated.
fn parse_value(tok: &str, n: u32) -> Result<Cyclotomic> {
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let nn = n as i64;
    let w = |k: i64| Cyclotomic::root_of_unity(n, k);
    let sqrt5 = || w(nn / 5) + w(4 * nn / 5) - w(2 * nn / 5) - w(3 * nn / 5);
    let half = Rational::new(1.into(), 2.into());
    let v = match body {
        "w3" => w(nn / 3),
        "w3^2" => w(2 * nn / 3),
        "r2" => w(nn / 8) + w(-nn / 8),
        "p+" => (Cyclotomic::one(n) + sqrt5()).scale(&half),
        "p-" => (Cyclotomic::one(n) - sqrt5()).scale(&half),
        _ => Cyclotomic::from_int(
            n,
            body.parse()
                .map_err(|_| Error::InvalidInput(format!("bad table entry {tok:?}")))?,
        ),
    };
    Ok(if neg { -v } else { v })
}

fn listed_table(group: BinaryGroup, data: &Listed) -> Result<CharacterTable> {
    let n = group.conductor();
    let raw = group.conjugacy_classes();
    let mut class_of = vec![usize::MAX; group.order()];
    for (ci, members) in raw.iter().enumerate() {
        for &m in members {
            class_of[m] = ci;
        }
    }
    // map each column word to a computed class; must be a bijection
    let mut classes = Vec::with_capacity(data.columns.len());
    let mut used = vec![false; raw.len()];
    for &word in data.columns {
        let e = group.word(word)?;
        let ci = class_of[e];
        if used[ci] {
            return Err(Error::Inconsistent(format!(
                "column {word} repeats a class"
            )));
        }
        used[ci] = true;
        classes.push(ConjugacyClass {
            label: word.to_string(),
            representative: e,
            members: raw[ci].clone(),
        });
    }
    if raw.len() != classes.len() {
        return Err(Error::Inconsistent(
            "table columns do not cover all classes".into(),
        ));
    }
    let mut class_of = vec![usize::MAX; group.order()];
    for (ci, c) in classes.iter().enumerate() {
        for &m in &c.members {
            class_of[m] = ci;
        }
    }
    let characters = data
        .rows
        .iter()
        .map(|(name, vals, iota, det)| {
            let values = vals
                .split_whitespace()
                .map(|t| parse_value(t, n))
                .collect::<Result<Vec<_>>>()?;
            Ok(Character {
                name: name.to_string(),
                values,
                listed_indicator: Some(*iota),
                listed_det: Some(det.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CharacterTable {
        group,
        classes,
        class_of,
        characters,
        listed_centralisers: Some(data.centralisers.to_vec()),
    })
}

/// Decompose a diagonal or antidiagonal standard matrix as r^i or s r^i.
pub(crate) fn dihedral_word(group: &BinaryGroup, e: usize, m: u32) -> (bool, i64) {
    let mat = group.element(e);
    let n = group.conductor();
    let find = |v: &Cyclotomic| {
        (0..m as i64)
            .find(|&i| *v == Cyclotomic::root_of_unity(m, i).lift_conductor(n).unwrap())
            .expect("entry is an m-th root of unity")
    };
    if mat.get(0, 1).is_zero() {
        (false, find(mat.get(0, 0)))
    } else {
        (true, find(mat.get(1, 0)))
    }
}

fn generated_table(group: BinaryGroup) -> Result<CharacterTable> {
    let Realization::Standard { parameter: m } = group.realization() else {
        return Err(Error::InvalidInput(
            "closed-form tables need standard matrices".into(),
        ));
    };
    let n = group.conductor();
    let raw = group.conjugacy_classes();
    let kind = group.spec().kind;
    let mut classes = Vec::with_capacity(raw.len());
    for members in raw {
        let rep = members[0];
        let (refl, i) = dihedral_word(&group, rep, m);
        let label = match (refl, i) {
            (false, 0) => "1".to_string(),
            (false, 1) => "r".to_string(),
            (false, i) => format!("r^{i}"),
            (true, 0) => "s".to_string(),
            (true, 1) => "sr".to_string(),
            (true, i) => format!("sr^{i}"),
        };
        classes.push(ConjugacyClass {
            label,
            representative: rep,
            members,
        });
    }
    let mut class_of = vec![usize::MAX; group.order()];
    for (ci, c) in classes.iter().enumerate() {
        for &e in &c.members {
            class_of[e] = ci;
        }
    }
    let words: Vec<(bool, i64)> = classes
        .iter()
        .map(|c| dihedral_word(&group, c.representative, m))
        .collect();
    let w = |k: i64| Cyclotomic::root_of_unity(m, k).lift_conductor(n).unwrap();
    let sign = |b: bool| Cyclotomic::from_int(n, if b { -1 } else { 1 });
    let mut characters = Vec::new();
    let mut push = |name: String, f: &dyn Fn(bool, i64) -> Cyclotomic| {
        characters.push(Character {
            name,
            values: words.iter().map(|&(refl, i)| f(refl, i)).collect(),
            listed_indicator: None,
            listed_det: None,
        });
    };
    match kind {
        GroupKind::Cyclic => {
            for k in 0..m as i64 {
                push(format!("chi{k}"), &|_, i| w(k * i));
            }
        }
        GroupKind::Dihedral => {
            push("chi1".into(), &|_, _| sign(false));
            push("chi2".into(), &|refl, _| sign(refl));
            if m % 2 == 0 {
                push("chi3".into(), &|_, i| sign(i % 2 == 1));
                push("chi4".into(), &|refl, i| sign((i % 2 == 1) ^ refl));
            }
            for j in 1..((m as i64 + 1) / 2) {
                if 2 * j == m as i64 {
                    break;
                }
                push(format!("psi{j}"), &|refl, i| {
                    if refl {
                        Cyclotomic::zero(n)
                    } else {
                        w(j * i) + w(-j * i)
                    }
                });
            }
        }
        _ => unreachable!(),
    }
    Ok(CharacterTable {
        group,
        classes,
        class_of,
        characters,
        listed_centralisers: None,
    })
}

fn table_for(group: BinaryGroup) -> Result<CharacterTable> {
    match group.spec().kind {
        GroupKind::Tetrahedral => listed_table(group, &TETRAHEDRAL),
        GroupKind::Octahedral => listed_table(group, &OCTAHEDRAL),
        GroupKind::Icosahedral => listed_table(group, &ICOSAHEDRAL),
        GroupKind::Cyclic | GroupKind::Dihedral => generated_table(group),
    }
}

/// Character table of G♭ for 𝕋, 𝕆, 𝕐 and of the groups Z_N, D_N
/// themselves (standard matrices) for the cyclic and dihedral families.
pub fn character_table(spec: GroupSpec) -> Result<CharacterTable> {
    table_for(standard_group(spec)?)
}

/// Character table of the preferred cover (see [`preferred_cover`]).
pub fn cover_character_table(spec: GroupSpec) -> Result<CharacterTable> {
    table_for(preferred_cover(spec)?)
}

fn rat_to_int(r: &Cyclotomic) -> Option<i64> {
    r.to_i64()
}

impl CharacterTable {
    pub fn group(&self) -> &BinaryGroup {
        &self.group
    }

    pub fn spec(&self) -> GroupSpec {
        self.group.spec()
    }

    pub fn conductor(&self) -> u32 {
        self.group.conductor()
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn character(&self, chi: usize) -> &Character {
        &self.characters[chi]
    }

    pub fn listed_centralisers(&self) -> Option<&[u32]> {
        self.listed_centralisers.as_deref()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.characters
            .iter()
            .position(|c| c.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "no character {name} in the table of {}",
                    self.spec().label()
                ))
            })
    }

    pub fn name(&self, chi: usize) -> &str {
        &self.characters[chi].name
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn degree(&self, chi: usize) -> u32 {
        self.characters[chi].degree()
    }

    /// χ(g) for a group element index.
    pub fn value(&self, chi: usize, element: usize) -> &Cyclotomic {
        &self.characters[chi].values[self.class_of[element]]
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn centralisers(&self) -> Vec<u32> {
        let order = self.group.order();
        self.classes
            .iter()
            .map(|c| (order / c.members.len()) as u32)
            .collect()
    }

    /// (χ, ψ) = (1/|G|) Σ_g χ(g) conj(ψ(g)) for class functions.
    pub fn inner_product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let n = self.conductor();
        let mut acc = Cyclotomic::zero(n);
        for (ci, c) in self.classes.iter().enumerate() {
            acc += &(&a[ci] * &b[ci].conjugate()).scale_int(c.members.len() as i64);
        }
        acc.scale(&Rational::new(1.into(), BigInt::from(self.group.order())))
    }

    /// Multiplicities of the irreducibles in a class function; errors if
    /// they are not nonnegative integers.
    pub fn decompose(&self, f: &[Cyclotomic]) -> Result<Vec<u32>> {
        self.characters
            .iter()
            .map(|c| {
                let m = self.inner_product(f, &c.values);
                match rat_to_int(&m) {
                    Some(v) if v >= 0 => Ok(v as u32),
                    _ => Err(Error::Inconsistent(format!(
                        "multiplicity of {} is {m}",
                        c.name
                    ))),
                }
            })
            .collect()
    }

    pub fn decomposition_names(&self, mult: &[u32]) -> Vec<(String, u32)> {
        mult.iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (self.characters[i].name.clone(), m))
            .collect()
    }

    pub fn check_orthogonality(&self) -> OrthogonalityReport {
        let centralisers = self.centralisers();
        let mut violation = None;
        'rows: for (i, a) in self.characters.iter().enumerate() {
            for (j, b) in self.characters.iter().enumerate() {
                let ip = self.inner_product(&a.values, &b.values);
                let ok = if i == j { ip.is_one() } else { ip.is_zero() };
                if !ok {
                    violation = Some((a.name.clone(), b.name.clone()));
                    break 'rows;
                }
            }
        }
        if violation.is_none() {
            let n = self.conductor();
            'cols: for g in 0..self.classes.len() {
                for h in 0..self.classes.len() {
                    let mut s = Cyclotomic::zero(n);
                    for c in &self.characters {
                        s += &(&c.values[g] * &c.values[h].conjugate());
                    }
                    let expect = if g == h { centralisers[g] as i64 } else { 0 };
                    if s != Cyclotomic::from_int(n, expect) {
                        violation =
                            Some((self.classes[g].label.clone(), self.classes[h].label.clone()));
                        break 'cols;
                    }
                }
            }
        }
        if violation.is_none() && self.characters.len() != self.classes.len() {
            violation = Some(("characters".into(), "classes".into()));
        }
        if violation.is_none() {
            if let Some(listed) = &self.listed_centralisers {
                if let Some(k) = (0..listed.len()).find(|&k| listed[k] != centralisers[k]) {
                    violation = Some(("centraliser".into(), self.classes[k].label.clone()));
                }
            }
        }
        OrthogonalityReport {
            passed: violation.is_none(),
            centralisers,
            violation,
        }
    }

    /// Class of g² for each class.
    fn square_classes(&self) -> Vec<usize> {
        self.classes
            .iter()
            .map(|c| self.class_of[self.group.mul(c.representative, c.representative)])
            .collect()
    }

    /// Frobenius–Schur indicator (1/|G|) Σ_g χ(g²).
    pub fn frobenius_schur(&self, chi: usize) -> i32 {
        let sq = self.square_classes();
        let n = self.conductor();
        let mut acc = Cyclotomic::zero(n);
        for (ci, c) in self.classes.iter().enumerate() {
            acc += &self.characters[chi].values[sq[ci]].scale_int(c.members.len() as i64);
        }
        let v = acc.scale(&Rational::new(1.into(), BigInt::from(self.group.order())));
        v.to_i64().expect("indicator is an integer") as i32
    }

    /// Values of χ(g²) as a class function (the Adams operation ψ²χ).
    pub fn adams_square(&self, values: &[Cyclotomic]) -> Vec<Cyclotomic> {
        self.square_classes()
            .iter()
            .map(|&s| values[s].clone())
            .collect()
    }

    pub fn is_real_valued(&self, chi: usize) -> bool {
        self.characters[chi].values.iter().all(|v| v.is_real())
    }

    /// Index of the complex-conjugate character.
    pub fn dual(&self, chi: usize) -> usize {
        let conj: Vec<Cyclotomic> = self.characters[chi]
            .values
            .iter()
            .map(|v| v.conjugate())
            .collect();
        self.characters
            .iter()
            .position(|c| c.values == conj)
            .expect("conjugate of an irreducible is irreducible")
    }

    /// True iff χ(z) ≠ χ(1) at the central element z = g_a g_b g_c.
    pub fn is_spinorial(&self, chi: usize) -> Result<bool> {
        if self.group.is_abelian() {
            return Err(Error::InvalidInput(
                "spinoriality needs a non-abelian group".into(),
            ));
        }
        let z = self.group.central();
        Ok(*self.value(chi, z) != self.characters[chi].values[0])
    }

    /// dim V^{⟨g⟩} = (1/ord g) Σ_k χ(g^k).
    pub fn fixed_subspace_dim(&self, chi: usize, g: usize) -> Result<u32> {
        let ord = self.group.element_order(g);
        let n = self.conductor();
        let mut acc = Cyclotomic::zero(n);
        let mut p = self.group.identity();
        for _ in 0..ord {
            acc += self.value(chi, p);
            p = self.group.mul(p, g);
        }
        let v = acc.scale(&Rational::new(1.into(), BigInt::from(ord)));
        v.to_i64()
            .filter(|&x| x >= 0)
            .map(|x| x as u32)
            .ok_or_else(|| {
                Error::Inconsistent(format!("fixed dimension {v} is not a natural number"))
            })
    }

    /// κ(χ)_i = χ(1)/2 − (1/2ν_i) Σ_{k<ν_i} χ(g_i^k).
    pub fn kappa(&self, chi: usize) -> Result<KappaVector> {
        let spec = self.spec();
        if spec.is_cyclic() {
            return Err(Error::InvalidInput(
                "kappa is defined for non-cyclic groups".into(),
            ));
        }
        let n = self.conductor();
        let deg = Rational::from_integer(BigInt::from(self.degree(chi)));
        let half = Rational::new(1.into(), 2.into());
        let mut out = Vec::new();
        for (i, &nu) in spec.nu().iter().enumerate() {
            let g = self.group.generator(i);
            let mut acc = Cyclotomic::zero(n);
            let mut p = self.group.identity();
            for _ in 0..nu {
                acc += self.value(chi, p);
                p = self.group.mul(p, g);
            }
            let s = acc
                .to_rational()
                .ok_or_else(|| Error::Inconsistent("fixed-point sum is not rational".into()))?;
            out.push(&deg * &half - s / Rational::from_integer(BigInt::from(2 * nu)));
        }
        Ok(KappaVector(out))
    }

    /// Trace of the defining 2×2 matrices, as a class function.
    pub fn natural_character(&self) -> Vec<Cyclotomic> {
        self.classes
            .iter()
            .map(|c| self.group.element(c.representative).trace())
            .collect()
    }

    /// Index of the natural character when it is irreducible.
    pub fn natural_index(&self) -> Option<usize> {
        let nat = self.natural_character();
        self.characters.iter().position(|c| c.values == nat)
    }

    /// χ_h from χ_h = χ χ_{h−1} − det·χ_{h−2}, χ_{−1} = 0, χ_0 = ε.
    pub fn symmetric_power_character(&self, h: u32) -> Result<SymmetricPower> {
        let n = self.conductor();
        let nat = self.natural_character();
        let det: Vec<Cyclotomic> = self
            .classes
            .iter()
            .map(|c| self.group.element(c.representative).det())
            .collect();
        let mut prev = vec![Cyclotomic::zero(n); self.classes.len()];
        let mut cur = vec![Cyclotomic::one(n); self.classes.len()];
        for _ in 0..h {
            let next: Vec<Cyclotomic> = (0..cur.len())
                .map(|k| &(&nat[k] * &cur[k]) - &(&det[k] * &prev[k]))
                .collect();
            prev = cur;
            cur = next;
        }
        let mult = self.decompose(&cur)?;
        Ok(SymmetricPower {
            h,
            values: cur,
            decomposition: self.decomposition_names(&mult),
        })
    }

    /// Regular character of the group.
    pub fn regular_character(&self) -> Vec<Cyclotomic> {
        let n = self.conductor();
        self.classes
            .iter()
            .enumerate()
            .map(|(i, _)| {
                Cyclotomic::from_int(
                    n,
                    if i == self.class_of[self.group.identity()] {
                        self.group.order() as i64
                    } else {
                        0
                    },
                )
            })
            .collect()
    }

    /// Pull-back of the regular character of G = G♭/⟨z⟩.
    pub fn pulled_back_regular(&self) -> Vec<Cyclotomic> {
        let n = self.conductor();
        let id = self.class_of[self.group.identity()];
        let z = self.class_of[self.group.central()];
        let size = self.spec().order() as i64;
        (0..self.classes.len())
            .map(|i| Cyclotomic::from_int(n, if i == id || i == z { size } else { 0 }))
            .collect()
    }

    /// Eigenvalues of the representing matrix of `g` with multiplicities,
    /// from the power sums χ(g^l).
    pub fn eigenvalues(&self, chi: usize, g: usize) -> Result<Vec<(Cyclotomic, u32)>> {
        let m = self.group.element_order(g) as i64;
        let n = self.conductor();
        let powers: Vec<Cyclotomic> = (0..m)
            .map(|l| self.value(chi, self.group.power(g, l)).clone())
            .collect();
        let mut out = Vec::new();
        for k in 0..m {
            let mut acc = Cyclotomic::zero(n);
            for (l, v) in powers.iter().enumerate() {
                let root = Cyclotomic::root_of_unity(m as u32, -k * l as i64).lift_conductor(n)?;
                acc += &(v * &root);
            }
            let mult = acc.scale(&Rational::new(1.into(), BigInt::from(m)));
            let mult = mult.to_i64().filter(|&x| x >= 0).ok_or_else(|| {
                Error::Inconsistent(format!("eigenvalue multiplicity {mult} is not natural"))
            })?;
            if mult > 0 {
                out.push((
                    Cyclotomic::root_of_unity(m as u32, k).lift_conductor(n)?,
                    mult as u32,
                ));
            }
        }
        Ok(out)
    }

    /// The one-dimensional character det∘ρ_χ, computed from eigenvalues.
    pub fn det_character(&self, chi: usize) -> Result<usize> {
        let n = self.conductor();
        let mut values = Vec::with_capacity(self.classes.len());
        for c in &self.classes {
            let mut d = Cyclotomic::one(n);
            for (ev, mult) in self.eigenvalues(chi, c.representative)? {
                d = &d * &ev.pow(mult);
            }
            values.push(d);
        }
        self.characters
            .iter()
            .position(|c| c.values == values)
            .ok_or_else(|| Error::Inconsistent("determinant is not a linear character".into()))
    }

    pub fn product(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        a.iter().zip(b).map(|(x, y)| x * y).collect()
    }

    /// Table-order character values rendered in a compact form.
    pub fn to_json(&self) -> serde_json::Value {
        let classes: Vec<serde_json::Value> = self
            .classes
            .iter()
            .zip(self.centralisers())
            .map(|(c, z)| {
                serde_json::json!({
                    "label": c.label,
                    "size": c.members.len(),
                    "centraliser": z,
                    "order": self.group.element_order(c.representative),
                })
            })
            .collect();
        let chars: Vec<serde_json::Value> = (0..self.characters.len())
            .map(|i| {
                let c = &self.characters[i];
                serde_json::json!({
                    "name": c.name,
                    "values": c.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "indicator": self.frobenius_schur(i),
                    "spinorial": self.is_spinorial(i).ok(),
                    "det": self.det_character(i).ok().map(|d| self.characters[d].name.clone()),
                })
            })
            .collect();
        serde_json::json!({
            "group": self.spec().label(),
            "order": self.group.order(),
            "classes": classes,
            "characters": chars,
        })
    }
}

/// Render a rational as an integer when possible.
pub(crate) fn rational_string(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for KappaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;

    #[test]
    fn tables_are_orthogonal() {
        for spec in [
            GroupSpec::tetrahedral(),
            GroupSpec::octahedral(),
            GroupSpec::icosahedral(),
        ] {
            let t = character_table(spec).unwrap();
            let rep = t.check_orthogonality();
            assert!(rep.passed, "{}: {:?}", spec.label(), rep.violation);
            for (i, c) in t.characters().iter().enumerate() {
                assert_eq!(Some(t.frobenius_schur(i)), c.listed_indicator, "{}", c.name);
                let d = t.det_character(i).unwrap();
                assert_eq!(Some(t.name(d).to_string()), c.listed_det, "{}", c.name);
            }
        }
        for n in 2..=12 {
            assert!(
                character_table(GroupSpec::dihedral(n))
                    .unwrap()
                    .check_orthogonality()
                    .passed
            );
            assert!(
                character_table(GroupSpec::cyclic(n))
                    .unwrap()
                    .check_orthogonality()
                    .passed
            );
        }
        let pm = character_table(GroupSpec::cyclic(1)).unwrap();
        assert!(pm.check_orthogonality().passed);
    }

    #[test]
    fn natural_character_is_underlined_row() {
        let t = character_table(GroupSpec::tetrahedral()).unwrap();
        assert_eq!(t.natural_index(), Some(t.index("T4").unwrap()));
        let o = character_table(GroupSpec::octahedral()).unwrap();
        assert_eq!(o.natural_index(), Some(o.index("O4").unwrap()));
        let y = character_table(GroupSpec::icosahedral()).unwrap();
        assert_eq!(y.natural_index(), Some(y.index("Y2").unwrap()));
    }

    #[test]
    fn spinorial_and_fixed_dims() {
        let t = character_table(GroupSpec::tetrahedral()).unwrap();
        assert!(t.is_spinorial(t.index("T4").unwrap()).unwrap());
        assert!(!t.is_spinorial(t.index("T7").unwrap()).unwrap());
        let y = character_table(GroupSpec::icosahedral()).unwrap();
        let y8 = y.index("Y8").unwrap();
        assert_eq!(y.fixed_subspace_dim(y8, y.group().generator(2)).unwrap(), 3);
        assert_eq!(y.fixed_subspace_dim(y8, y.group().identity()).unwrap(), 5);
        let k = y.kappa(y.index("Y6").unwrap()).unwrap();
        assert_eq!(k.0, vec![q(2, 1), q(1, 1), q(1, 1)]);
        assert!(character_table(GroupSpec::cyclic(3))
            .unwrap()
            .is_spinorial(0)
            .is_err());
    }

    #[test]
    fn symmetric_powers_of_tetrahedral() {
        let t = character_table(GroupSpec::tetrahedral()).unwrap();
        assert_eq!(t.symmetric_power_character(2).unwrap().to_string(), "T7");
        assert_eq!(
            t.symmetric_power_character(12).unwrap().to_string(),
            "2T1+T2+T3+3T7"
        );
        assert_eq!(t.symmetric_power_character(0).unwrap().to_string(), "T1");
    }
}
