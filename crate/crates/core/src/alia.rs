//! Automorphic Lie Algebras: invariant matrices, their structure constants
//! over the ring of invariants, the dihedral Cartan-Weyl normal form and
//! matrices of invariants.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::{linalg::span_basis, Cyclotomic, Matrix};
use crate::forms::{act, action_matrix, ground_forms, molien, Form, GroundForms, Pole, ProjectivePoint};
use crate::grouprep::{BinaryGroup, GroupSpec, Representation};
use crate::invvec::{
    automorphic_function, automorphic_variable_at, express_homogenised, express_in_generators,
    form_determinant, homogenise, AutomorphicPoly, HomogenisedVector, VectorOfForms,
};
use crate::liebase::{basis_of_subalgebra, conjugation_action, coordinates, lie_character, LieSpec,
    ReductiveDescriptor, Summand};
use crate::{Error, Result};

/// A square matrix of forms of a common degree.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantMatrix {
    pub entries: Vec<Vec<Form>>,
    degree: u32,
    pub label: String,
}

impl InvariantMatrix {
    pub fn new(entries: Vec<Vec<Form>>, label: impl Into<String>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 || entries.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("invariant matrices are square".into()));
        }
        let mut degree = None;
        for f in entries.iter().flatten().filter(|f| !f.is_zero()) {
            match degree {
                None => degree = Some(f.degree()),
                Some(d) if d != f.degree() => {
                    return Err(Error::InvalidInput(
                        "matrix entries of different degree".into(),
                    ))
                }
                _ => {}
            }
        }
        let degree = degree.unwrap_or_else(|| entries[0][0].degree());
        let entries = entries
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|f| if f.is_zero() { Form::zero(degree, f.conductor()) } else { f })
                    .collect()
            })
            .collect();
        Ok(InvariantMatrix {
            entries,
            degree,
            label: label.into(),
        })
    }

    pub fn zero(dim: usize, degree: u32, n: u32) -> Self {
        InvariantMatrix {
            entries: vec![vec![Form::zero(degree, n); dim]; dim],
            degree,
            label: String::new(),
        }
    }

    /// Σ_k f_k B_k.
    pub fn from_coefficients(basis: &[Matrix], coeffs: &[Form], label: impl Into<String>) -> Result<Self> {
        let dim = basis.first().map(|b| b.rows()).unwrap_or(0);
        let degree = coeffs.first().map(|f| f.degree()).unwrap_or(0);
        let n = basis.first().map(|b| b.conductor()).unwrap_or(1);
        let mut out = InvariantMatrix::zero(dim, degree, n);
        for (b, f) in basis.iter().zip(coeffs) {
            for i in 0..dim {
                for j in 0..dim {
                    let c = b.get(i, j);
                    if !c.is_zero() {
                        out.entries[i][j] = &out.entries[i][j] + &f.scale(c);
                    }
                }
            }
        }
        out.label = label.into();
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn conductor(&self) -> u32 {
        self.entries.iter().flatten().map(|f| f.conductor()).max().unwrap_or(1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|f| f.is_zero())
    }

    fn map(&self, degree: u32, f: impl Fn(&Form) -> Form) -> Self {
        InvariantMatrix {
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
            degree,
            label: self.label.clone(),
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        self.map(self.degree, |f| f.scale(c))
    }

    pub fn times(&self, g: &Form) -> Self {
        self.map(self.degree + g.degree(), |f| f * g)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        if self.is_zero() {
            out.degree = other.degree;
        }
        for (i, row) in other.entries.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                out.entries[i][j] = &self.entries[i][j] + f;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-&Cyclotomic::one(other.conductor())))
    }

    fn product(&self, other: &Self) -> Self {
        let dim = self.dim();
        let n = self.conductor().max(other.conductor());
        let degree = self.degree + other.degree;
        let mut out = InvariantMatrix::zero(dim, degree, n);
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Form::zero(degree, n);
                for k in 0..dim {
                    acc = &acc + &(&self.entries[i][k] * &other.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> Form {
        let n = self.conductor();
        (0..self.dim()).fold(Form::zero(self.degree, n), |acc, i| &acc + &self.entries[i][i])
    }

    /// η·v for a vector of forms.
    pub fn apply(&self, v: &VectorOfForms) -> Result<VectorOfForms> {
        let n = self.conductor();
        let degree = self.degree + v.degree();
        let comps = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v.components)
                    .fold(Form::zero(degree, n), |acc, (a, b)| &acc + &(a * b))
            })
            .collect();
        VectorOfForms::new(comps, v.basis.clone())
    }

    /// ρ(g)·η(g⁻¹·)·ρ(g)⁻¹.
    pub fn transformed(&self, g: &Matrix, rho: &Matrix) -> Result<Self> {
        let inv = rho
            .inverse()
            .ok_or_else(|| Error::InvalidInput("singular representation matrix".into()))?;
        let moved = self.map(self.degree, |f| act(g, f));
        let dim = self.dim();
        let n = self.conductor().max(rho.conductor());
        let mut out = InvariantMatrix::zero(dim, self.degree, n);
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Form::zero(self.degree, n);
                for k in 0..dim {
                    for l in 0..dim {
                        let c = rho.get(i, k) * inv.get(l, j);
                        if !c.is_zero() {
                            acc = &acc + &moved.entries[k][l].scale(&c);
                        }
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        out.label = self.label.clone();
        Ok(out)
    }

    pub fn is_invariant(&self, group: &BinaryGroup, rep: &Representation) -> bool {
        group.generators().iter().all(|&g| {
            self.transformed(group.element(g), rep.matrix(g))
                .map(|t| t == *self)
                .unwrap_or(false)
        })
    }

    /// Entries in row-major order.
    pub fn to_vector(&self) -> VectorOfForms {
        VectorOfForms::new(self.entries.iter().flatten().cloned().collect(), self.label.clone())
            .expect("entries share a degree")
    }

    pub fn from_vector(v: &VectorOfForms, dim: usize) -> Result<Self> {
        if v.dim() != dim * dim {
            return Err(Error::InvalidInput("vector length is not a square".into()));
        }
        InvariantMatrix::new(
            v.components.chunks(dim).map(|r| r.to_vec()).collect(),
            v.basis.clone(),
        )
    }

    /// Coefficient forms on a basis of matrices.
    pub fn coefficients(&self, basis: &[Matrix]) -> Result<Vec<Form>> {
        let d = self.degree;
        let dim = self.dim();
        let n = self.conductor().max(basis.iter().map(|b| b.conductor()).max().unwrap_or(1));
        let slices: Vec<Matrix> = (0..=d)
            .map(|e| {
                let rows = (0..dim)
                    .map(|i| {
                        (0..dim)
                            .map(|j| self.entries[i][j].coeff(e).at_least(n))
                            .collect()
                    })
                    .collect();
                Matrix::from_rows(rows)
            })
            .collect();
        let c = coordinates(basis, &slices)
            .ok_or_else(|| Error::NoSolution(format!("{} is not in the span of the basis", self.label)))?;
        Ok((0..basis.len())
            .map(|k| Form::from_dense(&c.row(k)).with_degree(d))
            .collect())
    }

    pub fn eval(&self, p: &ProjectivePoint) -> Matrix {
        Matrix::from_rows(
            self.entries
                .iter()
                .map(|r| r.iter().map(|f| f.eval(p.x(), p.y())).collect())
                .collect(),
        )
    }
}

impl PartialEq for InvariantMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl fmt::Display for InvariantMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// [a, b] = ab − ba.
pub fn bracket(a: &InvariantMatrix, b: &InvariantMatrix) -> InvariantMatrix {
    let mut out = a.product(b).sub(&b.product(a));
    out.degree = a.degree + b.degree;
    out.label = format!("[{},{}]", a.label, b.label);
    out
}

/// Invariant matrices of degree |G| spanning the prehomogenised module of
/// g(V)-valued invariant forms over the ring of invariants.
pub fn polynomial_alia_generators(spec: &LieSpec, rep: &Representation) -> Result<Vec<InvariantMatrix>> {
    let table = spec.table;
    let group = table.group();
    let n = table.conductor();
    let basis = basis_of_subalgebra(spec, rep)?;
    let k = basis.len();
    let d = table.spec().order();
    let size = k * (d as usize + 1);
    let mut rows = Vec::new();
    for &g in group.generators() {
        let c = conjugation_action(&basis, rep.matrix(g))
            .ok_or_else(|| Error::Inconsistent("g(V) is not a submodule".into()))?;
        let op = &c.kron(&action_matrix(group.element(g), d)) - &Matrix::identity(size, n);
        rows.extend(op.to_rows());
    }
    let kernel = Matrix::from_rows(rows).kernel();
    // each irreducible summand χ of g(V) contributes molien(χ*, d)/χ(1)
    let character = lie_character(spec)?;
    let mut expected = 0u64;
    for (name, mult) in &character.decomposition {
        let chi = table.index(name)?;
        let dual = table.dual(chi);
        expected += *mult as u64 * molien(table, dual, d as usize)?.coefficient(d as usize)
            / table.degree(chi) as u64;
    }
    if kernel.len() as u64 != expected {
        return Err(Error::Inconsistent(format!(
            "{} invariant matrices in degree {d}, the character predicts {expected}",
            kernel.len()
        )));
    }
    if kernel.len() != spec.dimension() as usize {
        return Err(Error::Inconsistent(format!(
            "{} generators in degree {d} for {} of dimension {}",
            kernel.len(),
            spec.label(),
            spec.dimension()
        )));
    }
    kernel
        .iter()
        .enumerate()
        .map(|(r, v)| {
            let coeffs: Vec<Form> = v
                .chunks(d as usize + 1)
                .map(|c| Form::from_dense(c).with_degree(d))
                .collect();
            InvariantMatrix::from_coefficients(&basis, &coeffs, format!("eta{}", r + 1))
        })
        .collect()
}

/// Two algebraically independent invariants p, q; coefficients live in
/// C[p, q].
#[derive(Clone, Debug)]
pub struct PrimaryRing {
    pub generators: [Form; 2],
    pub names: [String; 2],
}

impl PrimaryRing {
    pub fn new(p: Form, q: Form, names: [&str; 2]) -> Self {
        PrimaryRing {
            generators: [p, q],
            names: [names[0].to_string(), names[1].to_string()],
        }
    }

    /// C[F_a^{ν_a}, F_b^{ν_b}].
    pub fn ground(gf: &GroundForms) -> Self {
        PrimaryRing {
            generators: [gf.power(0), gf.power(1)],
            names: [format!("Fa^{}", gf.nu[0]), format!("Fb^{}", gf.nu[1])],
        }
    }

    pub fn degrees(&self) -> (u32, u32) {
        (self.generators[0].degree(), self.generators[1].degree())
    }

    fn conductor(&self) -> u32 {
        self.generators[0].conductor().max(self.generators[1].conductor())
    }

    /// Monomials p^a q^b of weighted degree w.
    fn monomials(&self, w: u32) -> Vec<(u32, u32)> {
        let (e1, e2) = self.degrees();
        (0..=w / e1.max(1))
            .filter_map(|a| {
                let rest = w.checked_sub(a * e1)?;
                (rest % e2 == 0).then_some((a, rest / e2))
            })
            .collect()
    }

    fn monomial_form(&self, a: u32, b: u32) -> Form {
        &self.generators[0].pow(a) * &self.generators[1].pow(b)
    }
}

/// An element of C[p, q], stored by exponent pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingPoly {
    terms: BTreeMap<(u32, u32), Cyclotomic>,
}

impl RingPoly {
    pub fn zero() -> Self {
        RingPoly::default()
    }

    pub fn monomial(c: Cyclotomic, a: u32, b: u32) -> Self {
        let mut out = RingPoly::zero();
        if !c.is_zero() {
            out.terms.insert((a, b), c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Cyclotomic)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, key: (u32, u32), c: &Cyclotomic) {
        let v = match self.terms.get(&key) {
            Some(x) => x + c,
            None => c.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        RingPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = RingPoly::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                out.insert_add((a + c, b + d), &(x * y));
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = RingPoly::zero();
        for (k, x) in &self.terms {
            out.insert_add(*k, &(x * c));
        }
        out
    }

    /// The polynomial as a form of the given degree.
    pub fn to_form(&self, ring: &PrimaryRing, degree: u32) -> Form {
        self.terms.iter().fold(Form::zero(degree, ring.conductor()), |acc, ((a, b), c)| {
            &acc + &ring.monomial_form(*a, *b).scale(c)
        })
    }

    /// Homogeneous p^a q^b with a + b = m divided by F_Γ^{mν}, as a
    /// polynomial in one automorphic function. Needs p, q to be F_a^{ν_a},
    /// F_b^{ν_b}.
    pub fn to_automorphic(&self, pole: &Pole, n: u32) -> Result<AutomorphicPoly> {
        let Some(m) = self.terms.keys().map(|(a, b)| a + b).max() else {
            return Ok(AutomorphicPoly {
                generator: if pole.cb.is_zero() { 1 } else { 0 },
                coefficients: vec![],
            });
        };
        if self.terms.keys().any(|(a, b)| a + b != m) {
            return Err(Error::InvalidInput("inhomogeneous coefficient".into()));
        }
        let mut coeffs = vec![Cyclotomic::zero(n); m as usize + 1];
        for ((a, _), c) in &self.terms {
            coeffs[*a as usize] = c.clone();
        }
        crate::invvec::automorphic_from_homogeneous(&coeffs, pole, n)
    }

    pub fn display(&self, names: &[String; 2]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mono = |a: u32, b: u32| {
            let mut parts = Vec::new();
            for (e, name) in [(a, &names[0]), (b, &names[1])] {
                match e {
                    0 => {}
                    1 => parts.push(name.clone()),
                    _ => parts.push(format!("({name})^{e}")),
                }
            }
            parts.join("*")
        };
        self.terms
            .iter()
            .map(|((a, b), c)| {
                let m = mono(*a, *b);
                match (m.is_empty(), c.is_one()) {
                    (true, _) => format!("{c}"),
                    (false, true) => m,
                    (false, false) => format!("({c})*{m}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Solve target = Σ_s c_s·gen_s with c_s ∈ C[p, q], for component lists of
/// equal length with given degrees.
pub fn express_over_ring(
    target: &[Form],
    target_degree: u32,
    gens: &[(Vec<Form>, u32)],
    ring: &PrimaryRing,
) -> Result<Vec<RingPoly>> {
    let mut unknowns = Vec::new();
    let mut cols = Vec::new();
    for (s, (g, d)) in gens.iter().enumerate() {
        if g.len() != target.len() {
            return Err(Error::InvalidInput("component counts differ".into()));
        }
        let Some(w) = target_degree.checked_sub(*d) else {
            continue;
        };
        for (a, b) in ring.monomials(w) {
            let m = ring.monomial_form(a, b);
            let col: Vec<Cyclotomic> = g
                .iter()
                .flat_map(|f| (f * &m).with_degree(target_degree).to_dense())
                .collect();
            unknowns.push((s, a, b));
            cols.push(col);
        }
    }
    let rhs: Vec<Cyclotomic> = target
        .iter()
        .flat_map(|f| f.clone().with_degree(target_degree).to_dense())
        .collect();
    let mut out = vec![RingPoly::zero(); gens.len()];
    if rhs.iter().all(|c| c.is_zero()) {
        return Ok(out);
    }
    if cols.is_empty() {
        return Err(Error::NoSolution("no monomials of the required degree".into()));
    }
    let sol = Matrix::from_rows(cols)
        .transpose()
        .solve(&rhs)
        .ok_or_else(|| Error::NoSolution("not in the module spanned by the generators".into()))?;
    for ((s, a, b), c) in unknowns.into_iter().zip(sol) {
        if !c.is_zero() {
            out[s] = out[s].add(&RingPoly::monomial(c, a, b));
        }
    }
    Ok(out)
}

/// One bracket of the table, rendered.
#[derive(Clone, Debug, Serialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub expansion: String,
}

/// c^k_{ij} with [x_i, x_j] = Σ_k c^k_{ij} x_k, over C[p, q].
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub names: [String; 2],
    pub labels: Vec<String>,
    /// Indexed [i][j][k].
    pub constants: Vec<Vec<Vec<RingPoly>>>,
}

impl StructureConstants {
    pub fn size(&self) -> usize {
        self.constants.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &RingPoly {
        &self.constants[i][j][k]
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.constants[i][j][k] == self.constants[j][i][k].neg()))
        })
    }

    /// Σ_cyclic [[x_i,x_j],x_l] = 0 as polynomials in p, q.
    pub fn jacobi_holds(&self) -> bool {
        let n = self.size();
        let c = &self.constants;
        for i in 0..n {
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    for p in 0..n {
                        let mut acc = RingPoly::zero();
                        for m in 0..n {
                            acc = acc
                                .add(&c[i][j][m].mul(&c[m][l][p]))
                                .add(&c[j][l][m].mul(&c[m][i][p]))
                                .add(&c[l][i][m].mul(&c[m][j][p]));
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The constants of x_i/F^{d_i} with d_i = deg x_i/|G|, in C[𝕀].
    pub fn to_automorphic(&self, pole: &Pole, n: u32) -> Result<AutomorphicTable> {
        let constants = self
            .constants
            .iter()
            .map(|row| {
                row.iter()
                    .map(|ks| ks.iter().map(|c| c.to_automorphic(pole, n)).collect())
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(AutomorphicTable {
            labels: self.labels.clone(),
            constants,
        })
    }

    pub fn entries(&self) -> Vec<BracketEntry> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let terms: Vec<String> = (0..n)
                    .filter(|&k| !self.constants[i][j][k].is_zero())
                    .map(|k| format!("({})*{}", self.constants[i][j][k].display(&self.names), self.labels[k]))
                    .collect();
                out.push(BracketEntry {
                    left: self.labels[i].clone(),
                    right: self.labels[j].clone(),
                    expansion: if terms.is_empty() { "0".into() } else { terms.join(" + ") },
                });
            }
        }
        out
    }
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.entries() {
            writeln!(f, "[{},{}] = {}", e.left, e.right, e.expansion)?;
        }
        Ok(())
    }
}

/// Re-express every bracket of the generators over the ring.
pub fn structure_constants(gens: &[InvariantMatrix], ring: &PrimaryRing) -> Result<StructureConstants> {
    let k = gens.len();
    let flat: Vec<(Vec<Form>, u32)> = gens
        .iter()
        .map(|g| (g.to_vector().components, g.degree()))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
    let solved: Vec<Result<Vec<RingPoly>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = bracket(&gens[i], &gens[j]);
            express_over_ring(&b.to_vector().components, b.degree(), &flat, ring)
        })
        .collect();
    let mut constants = vec![vec![vec![RingPoly::zero(); k]; k]; k];
    for ((i, j), r) in pairs.into_iter().zip(solved) {
        let c = r.map_err(|e| Error::Inconsistent(format!("bracket not closed: {e}")))?;
        constants[j][i] = c.iter().map(|x| x.neg()).collect();
        constants[i][j] = c;
    }
    Ok(StructureConstants {
        names: ring.names.clone(),
        labels: gens.iter().map(|g| g.label.clone()).collect(),
        constants,
    })
}

/// Structure constants over C[𝕀].
#[derive(Clone, Debug, Serialize)]
pub struct AutomorphicTable {
    pub labels: Vec<String>,
    pub constants: Vec<Vec<Vec<AutomorphicPoly>>>,
}

impl AutomorphicTable {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &AutomorphicPoly {
        &self.constants[i][j][k]
    }

    /// Numerical structure constants of the evaluated algebra.
    pub fn eval(&self, x: &Cyclotomic) -> Vec<Vec<Vec<Cyclotomic>>> {
        self.constants
            .iter()
            .map(|row| row.iter().map(|ks| ks.iter().map(|c| c.eval(x)).collect()).collect())
            .collect()
    }

    pub fn jacobi_holds(&self) -> bool {
        let n = self.constants.len();
        let c = &self.constants;
        for i in 0..n {
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    for p in 0..n {
                        let mut acc = AutomorphicPoly {
                            generator: 0,
                            coefficients: vec![],
                        };
                        for m in 0..n {
                            acc = acc
                                .add(&c[i][j][m].mul(&c[m][l][p]))
                                .add(&c[j][l][m].mul(&c[m][i][p]))
                                .add(&c[l][i][m].mul(&c[m][j][p]));
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn entries(&self) -> Vec<BracketEntry> {
        let n = self.constants.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let terms: Vec<String> = (0..n)
                    .filter(|&k| !self.constants[i][j][k].is_zero())
                    .map(|k| format!("({})*{}", self.constants[i][j][k], self.labels[k]))
                    .collect();
                out.push(BracketEntry {
                    left: self.labels[i].clone(),
                    right: self.labels[j].clone(),
                    expansion: if terms.is_empty() { "0".into() } else { terms.join(" + ") },
                });
            }
        }
        out
    }
}

/// η/F_Γ^r.
#[derive(Clone, Debug, Serialize)]
pub struct HomogenisedMatrix {
    pub numerator: InvariantMatrix,
    pub pole: Pole,
    /// Power r of F_Γ in the denominator.
    pub pole_exponent: u32,
}

impl HomogenisedMatrix {
    /// η/(F_Γ^{ν_Γ})^k.
    pub fn over_power(numerator: InvariantMatrix, pole: &Pole, k: u32) -> Result<Self> {
        if numerator.degree() != k * pole.nu * pole.form.degree() {
            return Err(Error::InvalidInput(format!(
                "degree {} does not match the pole power {k}",
                numerator.degree()
            )));
        }
        Ok(HomogenisedMatrix {
            numerator,
            pole: pole.clone(),
            pole_exponent: k * pole.nu,
        })
    }

    pub fn to_vector(&self) -> HomogenisedVector {
        HomogenisedVector {
            numerator: self.numerator.to_vector(),
            pole: self.pole.clone(),
            pole_exponent: self.pole_exponent,
        }
    }

    pub fn eval(&self, mu: &ProjectivePoint) -> Result<Matrix> {
        let v = self.to_vector().eval(mu)?;
        let dim = self.numerator.dim();
        Ok(Matrix::from_rows(v.chunks(dim).map(|r| r.to_vec()).collect()))
    }

    pub fn bracket(&self, other: &Self) -> Self {
        HomogenisedMatrix {
            numerator: bracket(&self.numerator, &other.numerator),
            pole: self.pole.clone(),
            pole_exponent: self.pole_exponent + other.pole_exponent,
        }
    }
}

/// Structure constants of homogenised generators over C[𝕀].
pub fn homogenised_structure_constants(
    gens: &[HomogenisedMatrix],
    gf: &GroundForms,
    max_degree: u32,
) -> Result<AutomorphicTable> {
    let k = gens.len();
    let vecs: Vec<HomogenisedVector> = gens.iter().map(|g| g.to_vector()).collect();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
    let solved: Vec<Result<Vec<AutomorphicPoly>>> = pairs
        .par_iter()
        .map(|&(i, j)| express_homogenised(&gens[i].bracket(&gens[j]).to_vector(), &vecs, gf, max_degree))
        .collect();
    let generator = gens.first().map(|g| if g.pole.cb.is_zero() { 1 } else { 0 }).unwrap_or(0);
    let zero = AutomorphicPoly {
        generator,
        coefficients: vec![],
    };
    let mut constants = vec![vec![vec![zero; k]; k]; k];
    for ((i, j), r) in pairs.into_iter().zip(solved) {
        let c = r.map_err(|e| Error::Inconsistent(format!("bracket not closed: {e}")))?;
        let n = gf.forms[0].conductor();
        let minus = -&Cyclotomic::one(n);
        constants[j][i] = c.iter().map(|x| x.scale(&minus)).collect();
        constants[i][j] = c;
    }
    Ok(AutomorphicTable {
        labels: gens.iter().map(|g| g.numerator.label.clone()).collect(),
        constants,
    })
}

fn xy(c: Cyclotomic, i: u32, j: u32) -> Form {
    Form::monomial(c, i, j)
}

/// The unprehomogenised dihedral generators
/// η₁ = antidiag(X^{2j}, Y^{2j}), η₂ = antidiag(Y^{N−2j}, X^{N−2j}),
/// η₃ = ½(X^N − Y^N)·diag(1, −1); needs 2j ≤ N.
pub fn dihedral_polynomial_generators(n_order: u32, j: u32, n: u32) -> Result<[InvariantMatrix; 3]> {
    if 2 * j > n_order {
        return Err(Error::InvalidInput(format!("need 2j ≤ N, got j = {j}")));
    }
    let one = Cyclotomic::one(n);
    let half = Cyclotomic::from_frac(n, 1, 2);
    let z = |d: u32| Form::zero(d, n);
    let e1 = InvariantMatrix::new(
        vec![
            vec![z(2 * j), xy(one.clone(), 2 * j, 0)],
            vec![xy(one.clone(), 0, 2 * j), z(2 * j)],
        ],
        "eta1",
    )?;
    let m = n_order - 2 * j;
    let e2 = InvariantMatrix::new(
        vec![
            vec![z(m), xy(one.clone(), 0, m)],
            vec![xy(one.clone(), m, 0), z(m)],
        ],
        "eta2",
    )?;
    let fc = (&xy(one.clone(), n_order, 0) - &xy(one.clone(), 0, n_order)).scale(&half);
    let e3 = InvariantMatrix::new(
        vec![vec![fc.clone(), z(n_order)], vec![z(n_order), -&fc]],
        "eta3",
    )?;
    Ok([e1, e2, e3])
}

/// The prehomogenised dihedral generators of degree 2N:
/// η̃₁ = F_a^N·antidiag(λ^j, λ^{−j}), η̃₂ = ½F_a^N·antidiag(λ^j + λ^{j−N},
/// λ^{−j} + λ^{N−j}), η̃₃ = F_bF_c·diag(1, −1), with λ = X/Y.
pub fn dihedral_generators(gf: &GroundForms, j: u32) -> Result<[InvariantMatrix; 3]> {
    let nn = gf.spec.n;
    if gf.spec.kind != crate::grouprep::GroupKind::Dihedral || j == 0 || j >= nn {
        return Err(Error::InvalidInput(format!("need D_N and 0 < j < N, got j = {j}")));
    }
    let n = gf.forms[0].conductor();
    let one = Cyclotomic::one(n);
    let half = Cyclotomic::from_frac(n, 1, 2);
    let d = 2 * nn;
    let z = Form::zero(d, n);
    let e1 = InvariantMatrix::new(
        vec![
            vec![z.clone(), xy(one.clone(), nn + j, nn - j)],
            vec![xy(one.clone(), nn - j, nn + j), z.clone()],
        ],
        "eta1",
    )?;
    let up = (&xy(one.clone(), nn + j, nn - j) + &xy(one.clone(), j, d - j)).scale(&half);
    let down = (&xy(one.clone(), nn - j, nn + j) + &xy(one.clone(), d - j, j)).scale(&half);
    let e2 = InvariantMatrix::new(vec![vec![z.clone(), up], vec![down, z.clone()]], "eta2")?;
    let bc = gf.form(1) * gf.form(2);
    let e3 = InvariantMatrix::new(vec![vec![bc.clone(), z.clone()], vec![z, -&bc]], "eta3")?;
    Ok([e1, e2, e3])
}

/// Result of the dihedral normal-form construction.
#[derive(Clone, Debug, Serialize)]
pub struct NormalForm {
    pub n: u32,
    pub j: u32,
    pub pole: Pole,
    pub generators: Vec<InvariantMatrix>,
    /// Columns give h̃, ẽ₊, ẽ₋ in terms of the generators.
    pub transformation: Vec<Vec<Form>>,
    pub transformation_det: Form,
    pub h: HomogenisedMatrix,
    pub e_plus: HomogenisedMatrix,
    pub e_minus: HomogenisedMatrix,
    /// The coefficient of h in [e₊, e₋].
    pub cartan_factor: AutomorphicPoly,
    /// 𝕀_a𝕀_b𝕀_c in the same variable.
    pub ia_ib_ic: AutomorphicPoly,
    pub constants: AutomorphicTable,
}

impl NormalForm {
    pub fn basis(&self) -> Vec<HomogenisedMatrix> {
        vec![self.h.clone(), self.e_plus.clone(), self.e_minus.clone()]
    }
}

fn combine(gens: &[InvariantMatrix], coeffs: &[Form], label: &str) -> InvariantMatrix {
    let mut acc = gens[0].times(&coeffs[0]);
    for (g, c) in gens.iter().zip(coeffs).skip(1) {
        acc = acc.add(&g.times(c));
    }
    acc.label = label.to_string();
    acc
}

/// Cartan-Weyl normal form of the dihedral ALiA sl(V_ψj) with poles on
/// the orbit of F = c_aF_a^N + c_bF_b².
pub fn dihedral_normal_form(nn: u32, j: u32, ca: &Cyclotomic, cb: &Cyclotomic) -> Result<NormalForm> {
    if nn < 2 {
        return Err(Error::InvalidInput("dihedral groups need N ≥ 2".into()));
    }
    let gf = ground_forms(GroupSpec::dihedral(nn))?;
    let n = gf.forms[0].conductor();
    let n = n.max(ca.conductor()).max(cb.conductor());
    let ca = ca.lift_conductor(n)?;
    let cb = cb.lift_conductor(n)?;
    let pole = Pole::from_parameters(&gf, ca.clone(), cb.clone())?;
    let gens = dihedral_generators(&gf, j)?.to_vec();
    let pa = gf.power(0);
    let pb = gf.power(1);
    let pc = gf.power(2);
    let f = &pa.scale(&ca) + &pb.scale(&cb);
    let half = Cyclotomic::from_frac(n, 1, 2);
    let c = |x: &Cyclotomic| Form::constant(x.clone());
    let f2 = &f * &f;
    let t = vec![
        vec![
            c(&ca),
            pb.scale(&-&half),
            (&(&pa * &pc).scale(&(&ca * &ca)) + &f2).scale(&half),
        ],
        vec![
            c(&cb),
            pa.scale(&half),
            (&(&pb * &pc).scale(&-&(&cb * &cb)) - &f2).scale(&half),
        ],
        vec![
            c(&cb),
            pa.scale(&half),
            (&pa * &(&pc.scale(&(&ca * &cb)) + &f.scale(&(&ca + &cb)))).scale(&half),
        ],
    ];
    let det = form_determinant(&t)?;
    if det != (&f2 * &f).scale(&half) {
        return Err(Error::Inconsistent(format!("det T = {det}, expected F^3/2")));
    }
    let column = |k: usize| -> Vec<Form> { t.iter().map(|r| r[k].clone()).collect() };
    let ht = combine(&gens, &column(0), "h");
    let ep = combine(&gens, &column(1), "e+");
    let em = combine(&gens, &column(2), "e-");
    let two_f = f.scale(&Cyclotomic::from_int(n, 2));
    if bracket(&ht, &ep) != ep.times(&two_f) {
        return Err(Error::Inconsistent("[h, e+] ≠ 2F e+".into()));
    }
    if bracket(&ht, &em) != em.times(&-&two_f) {
        return Err(Error::Inconsistent("[h, e-] ≠ −2F e-".into()));
    }
    let cartan = &(&(&f * &pa) * &pb) * &pc;
    if bracket(&ep, &em) != ht.times(&cartan) {
        return Err(Error::Inconsistent("[e+, e-] ≠ F·Fa^N·Fb²·Fc² h".into()));
    }
    let h = HomogenisedMatrix::over_power(ht, &pole, 1)?;
    let e_plus = HomogenisedMatrix::over_power(ep, &pole, 2)?;
    let e_minus = HomogenisedMatrix::over_power(em, &pole, 3)?;
    let basis = vec![h.clone(), e_plus.clone(), e_minus.clone()];
    let constants = homogenised_structure_constants(&basis, &gf, 4)?;
    let ia_ib_ic = (0..3)
        .map(|i| automorphic_function(&gf, &pole, i))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .fold(AutomorphicPoly::constant(0, Cyclotomic::one(n)), |acc, p| acc.mul(p));
    let two = Cyclotomic::from_int(n, 2);
    let expect = |i: usize, j: usize, k: usize, c: &AutomorphicPoly| constants.get(i, j, k).same_as(c);
    let zero = AutomorphicPoly::constant(0, Cyclotomic::zero(n));
    let plus2 = AutomorphicPoly::constant(0, two.clone());
    let minus2 = AutomorphicPoly::constant(0, -&two);
    let ok = expect(0, 1, 1, &plus2)
        && expect(0, 1, 0, &zero)
        && expect(0, 1, 2, &zero)
        && expect(0, 2, 2, &minus2)
        && expect(0, 2, 0, &zero)
        && expect(0, 2, 1, &zero)
        && expect(1, 2, 0, &ia_ib_ic)
        && expect(1, 2, 1, &zero)
        && expect(1, 2, 2, &zero);
    if !ok {
        return Err(Error::Inconsistent(
            "normal-form brackets over the automorphic functions do not match".into(),
        ));
    }
    Ok(NormalForm {
        n: nn,
        j,
        pole,
        generators: gens,
        transformation: t,
        transformation_det: det,
        h,
        e_plus,
        e_minus,
        cartan_factor: constants.get(1, 2, 0).clone(),
        ia_ib_ic,
        constants,
    })
}

/// A matrix A with ηP = PA, entries in C[p, q].
#[derive(Clone, Debug)]
pub struct MatrixOfInvariants {
    pub entries: Vec<Vec<RingPoly>>,
    pub names: [String; 2],
    /// Degree of the invariant matrix it represents.
    pub degree: u32,
}

impl MatrixOfInvariants {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    fn product(&self, other: &Self) -> Vec<Vec<RingPoly>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(RingPoly::zero(), |acc, k| {
                            acc.add(&self.entries[i][k].mul(&other.entries[k][j]))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Vec<Vec<RingPoly>> {
        let a = self.product(other);
        let b = other.product(self);
        a.iter()
            .zip(&b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect())
            .collect()
    }

    pub fn to_forms(&self, ring: &PrimaryRing) -> Result<InvariantMatrix> {
        InvariantMatrix::new(
            self.entries
                .iter()
                .map(|r| r.iter().map(|c| c.to_form(ring, self.degree)).collect())
                .collect(),
            "A",
        )
    }

    pub fn rendered(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|c| c.display(&self.names)).collect())
            .collect()
    }
}

impl fmt::Display for MatrixOfInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rendered().iter().map(|r| r.join(", ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Solve ηP = PA for each generator, P having the invariant vectors as
/// columns.
pub fn matrices_of_invariants(
    gens: &[InvariantMatrix],
    vectors: &[VectorOfForms],
    ring: &PrimaryRing,
) -> Result<Vec<MatrixOfInvariants>> {
    let dim = vectors.len();
    if gens.iter().any(|g| g.dim() != dim) || vectors.iter().any(|v| v.dim() != dim) {
        return Err(Error::InvalidInput(
            "need dim V invariant vectors of length dim V".into(),
        ));
    }
    let cols: Vec<(Vec<Form>, u32)> = vectors.iter().map(|v| (v.components.clone(), v.degree())).collect();
    gens.par_iter()
        .map(|eta| {
            let mut entries = vec![vec![RingPoly::zero(); dim]; dim];
            for (s, v) in vectors.iter().enumerate() {
                let w = eta.apply(v)?;
                let c = express_over_ring(&w.components, w.degree(), &cols, ring).map_err(|e| {
                    Error::Inconsistent(format!("{}·v{} is not in the module: {e}", eta.label, s + 1))
                })?;
                for (r, x) in c.into_iter().enumerate() {
                    entries[r][s] = x;
                }
            }
            Ok(MatrixOfInvariants {
                entries,
                names: ring.names.clone(),
                degree: eta.degree(),
            })
        })
        .collect()
}

/// [A_i, A_j] = Σ_k c^k_{ij} A_k for every pair.
pub fn preserves_brackets(mois: &[MatrixOfInvariants], sc: &StructureConstants) -> bool {
    let k = mois.len();
    (0..k).all(|i| {
        ((i + 1)..k).all(|j| {
            let lhs = mois[i].commutator(&mois[j]);
            let dim = mois[i].dim();
            let mut rhs = vec![vec![RingPoly::zero(); dim]; dim];
            for (l, a) in mois.iter().enumerate() {
                let c = sc.get(i, j, l);
                for r in 0..dim {
                    for s in 0..dim {
                        rhs[r][s] = rhs[r][s].add(&c.mul(&a.entries[r][s]));
                    }
                }
            }
            lhs == rhs
        })
    })
}

/// det of the coefficient matrix of the generators on a basis of g(V).
pub fn total_determinant(gens: &[InvariantMatrix], basis: &[Matrix]) -> Result<Form> {
    if gens.len() != basis.len() {
        return Err(Error::InvalidInput(format!(
            "{} generators for a basis of size {}",
            gens.len(),
            basis.len()
        )));
    }
    let rows = gens.iter().map(|g| g.coefficients(basis)).collect::<Result<Vec<_>>>()?;
    form_determinant(&rows)
}

/// Total determinant of matrices of invariants, read as forms.
pub fn moi_total_determinant(
    mois: &[MatrixOfInvariants],
    ring: &PrimaryRing,
    basis: &[Matrix],
) -> Result<Form> {
    let as_forms = mois.iter().map(|a| a.to_forms(ring)).collect::<Result<Vec<_>>>()?;
    total_determinant(&as_forms, basis)
}

/// A finite-dimensional complex Lie algebra given by a matrix basis.
#[derive(Clone, Debug, Serialize)]
pub struct EvaluatedAlgebra {
    pub dimension: usize,
    pub derived_dimension: usize,
    pub is_abelian: bool,
    pub basis: Vec<Vec<Vec<Cyclotomic>>>,
    /// [b_i, b_j] = Σ_k c[i][j][k] b_k.
    pub constants: Vec<Vec<Vec<Cyclotomic>>>,
}

impl EvaluatedAlgebra {
    /// Same dimension and the same dimension of the derived algebra as the
    /// reductive algebra described.
    pub fn matches(&self, d: &ReductiveDescriptor) -> bool {
        let lines = d.summands.iter().filter(|s| matches!(s, Summand::Line)).count();
        self.dimension as u32 == d.dimension()
            && (self.derived_dimension as u32) == d.dimension() - lines as u32
    }
}

/// Evaluate the homogenised generators at μ and read off the Lie algebra
/// they span.
pub fn evaluate_alia(gens: &[HomogenisedMatrix], mu: &ProjectivePoint) -> Result<EvaluatedAlgebra> {
    let values = gens.iter().map(|g| g.eval(mu)).collect::<Result<Vec<_>>>()?;
    let flat = |m: &Matrix| -> Vec<Cyclotomic> { m.to_rows().into_iter().flatten().collect() };
    let dim = gens.first().map(|g| g.numerator.dim()).unwrap_or(0);
    let basis: Vec<Matrix> = span_basis(&values.iter().map(flat).collect::<Vec<_>>())
        .into_iter()
        .map(|v| Matrix::from_rows(v.chunks(dim).map(|r| r.to_vec()).collect()))
        .collect();
    let k = basis.len();
    let mut constants = Vec::with_capacity(k);
    let mut brackets = Vec::new();
    for a in &basis {
        let mut row = Vec::with_capacity(k);
        for b in &basis {
            let c = a.commutator(b);
            let coords = coordinates(&basis, std::slice::from_ref(&c))
                .ok_or_else(|| Error::Inconsistent("evaluated span is not closed".into()))?;
            row.push(coords.column(0));
            brackets.push(flat(&c));
        }
        constants.push(row);
    }
    let derived_dimension = span_basis(&brackets).len();
    Ok(EvaluatedAlgebra {
        dimension: k,
        derived_dimension,
        is_abelian: derived_dimension == 0,
        basis: basis.iter().map(|m| m.to_rows()).collect(),
        constants,
    })
}

/// The numerical structure constants of a C[𝕀] table at μ.
pub fn evaluate_constants(
    table: &AutomorphicTable,
    gf: &GroundForms,
    pole: &Pole,
    mu: &ProjectivePoint,
) -> Result<Vec<Vec<Vec<Cyclotomic>>>> {
    Ok(table.eval(&automorphic_variable_at(gf, pole, mu)?))
}

/// The six generators ζ₁..ζ₆ of the dicyclic polynomial ALiA together with
/// the primary invariants θ₁ = (XY)², θ₂ = X^{2N} + (−1)^N Y^{2N}.
pub fn dicyclic_generators(nn: u32, j: u32, n: u32) -> Result<(Vec<InvariantMatrix>, PrimaryRing)> {
    if j == 0 || j >= nn {
        return Err(Error::InvalidInput(format!("need 0 < j < N, got j = {j}")));
    }
    let one = Cyclotomic::one(n);
    let sign = if nn.is_multiple_of(2) { one.clone() } else { -&one };
    let m = |c: &Cyclotomic, i: u32, k: u32| xy(c.clone(), i, k);
    let d2 = 2 * nn;
    let theta1 = m(&one, 2, 2);
    let theta2 = &m(&one, d2, 0) + &m(&sign, 0, d2);
    let z = |d: u32| Form::zero(d, n);
    let diag = |f: Form, label: &str| {
        let d = f.degree();
        InvariantMatrix::new(vec![vec![f.clone(), z(d)], vec![z(d), -&f]], label)
    };
    let anti = |a: Form, b: Form, label: &str| {
        let d = a.degree();
        InvariantMatrix::new(vec![vec![z(d), a], vec![b, z(d)]], label)
    };
    let zetas = vec![
        diag(m(&one, 1, 1), "zeta1")?,
        diag(&m(&one, d2, 0) - &m(&sign, 0, d2), "zeta2")?,
        anti(m(&one, 2 * j, 0), m(&one, 0, 2 * j), "zeta3")?,
        anti(m(&one, 2 * j + 1, 1), m(&-&one, 1, 2 * j + 1), "zeta4")?,
        anti(m(&sign, 0, d2 - 2 * j), m(&one, d2 - 2 * j, 0), "zeta5")?,
        anti(m(&-&sign, 1, d2 - 2 * j + 1), m(&one, d2 - 2 * j + 1, 1), "zeta6")?,
    ];
    Ok((zetas, PrimaryRing::new(theta1, theta2, ["theta1", "theta2"])))
}

/// Whether v lies in the C[F_a^N, F_b^2]-module spanned by `gens`, all of
/// degree |G|, judged after homogenising at `pole`.
pub fn in_prehomogenised_module(v: &InvariantMatrix, gens: &[InvariantMatrix], gf: &GroundForms, pole: &Pole) -> Result<bool> {
    let hv = homogenise(&v.to_vector(), pole)?;
    let gv: Vec<VectorOfForms> = gens.iter().map(|g| g.to_vector()).collect();
    Ok(express_in_generators(&hv, &gv, gf).is_ok())
}

/// The prehomogenised modules obtained from D_N (when 2j ≤ N) and from D_2N
/// both equal the span of the η̃ generators.
pub fn dihedral_cover_modules_coincide(gf: &GroundForms, j: u32) -> Result<bool> {
    let nn = gf.spec.n;
    let n = gf.forms[0].conductor();
    let target = dihedral_generators(gf, j)?.to_vec();
    let pole = Pole::exceptional(gf, 0)?;
    let fa = gf.form(0);
    let fb = gf.form(1);
    let [w1, w2, w3] = dihedral_polynomial_generators(2 * nn, j, n)?;
    let mut modules = vec![vec![w1.times(&fa.pow(nn - j)), w2.times(&fa.pow(j)), w3]];
    if 2 * j <= nn {
        let [e1, e2, e3] = dihedral_polynomial_generators(nn, j, n)?;
        modules.push(vec![e1.times(&fa.pow(nn - j)), e2.times(&(&fa.pow(j) * fb)), e3.times(fb)]);
    }
    for m in &modules {
        for v in m {
            if !in_prehomogenised_module(v, &target, gf, &pole)? {
                return Ok(false);
            }
        }
        for v in &target {
            if !in_prehomogenised_module(v, m, gf, &pole)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Killing form tr(ad x_i ad x_j) of a table over C[𝕀].
pub fn killing_form(table: &AutomorphicTable) -> Vec<Vec<AutomorphicPoly>> {
    let c = &table.constants;
    let k = c.len();
    let mut out = vec![vec![AutomorphicPoly::constant(0, Cyclotomic::zero(1)); k]; k];
    for i in 0..k {
        for j in i..k {
            let mut acc = AutomorphicPoly::constant(0, Cyclotomic::zero(1));
            for a in 0..k {
                for b in 0..k {
                    acc = acc.add(&c[i][a][b].mul(&c[j][b][a]));
                }
            }
            out[j][i] = acc.clone();
            out[i][j] = acc;
        }
    }
    out
}

fn poly_determinant(m: &[Vec<AutomorphicPoly>]) -> AutomorphicPoly {
    match m.len() {
        0 => AutomorphicPoly::constant(0, Cyclotomic::one(1)),
        1 => m[0][0].clone(),
        k => {
            let minus = -&Cyclotomic::one(1);
            let mut acc = AutomorphicPoly::constant(0, Cyclotomic::zero(1));
            for col in 0..k {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<AutomorphicPoly>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = m[0][col].mul(&poly_determinant(&minor));
                acc = acc.add(&if col % 2 == 0 { term } else { term.scale(&minus) });
            }
            acc
        }
    }
}

/// Determinant of the Killing form on the generators of the table.
pub fn killing_determinant(table: &AutomorphicTable) -> AutomorphicPoly {
    poly_determinant(&killing_form(table))
}

/// Outcome of the exploratory search for a Cartan element.
#[derive(Clone, Debug, Serialize)]
pub struct CartanSearch {
    /// Coefficients of x in the generators, if one was found.
    pub coefficients: Option<Vec<AutomorphicPoly>>,
    /// The constant K(x, x).
    pub killing_value: Option<Cyclotomic>,
    pub tried: usize,
}

/// Look for x = Σ p_i(𝕀)·x_i with K(x, x) a nonzero constant, trying integer
/// coefficients in [−max_coeff, max_coeff] up to degree `max_degree` in 𝕀.
/// In sl2 the ad-spectrum of such an x is {0, ±sqrt(K(x,x)/2)}, so it can
/// serve as a Cartan element. Failure says nothing beyond the search box.
pub fn search_cartan_element(table: &AutomorphicTable, max_coeff: i64, max_degree: usize) -> CartanSearch {
    let kf = killing_form(table);
    let k = kf.len();
    let generator = table
        .constants
        .iter()
        .flatten()
        .flatten()
        .find(|p| p.degree().unwrap_or(0) > 0)
        .map(|p| p.generator)
        .unwrap_or(0);
    let width = max_degree + 1;
    let values: Vec<i64> = (0..=max_coeff).flat_map(|v| if v == 0 { vec![0] } else { vec![v, -v] }).collect();
    let mut digits = vec![0usize; k * width];
    let mut tried = 0;
    loop {
        // odometer over the coefficient box, small values first
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return CartanSearch { coefficients: None, killing_value: None, tried };
            }
            digits[pos] += 1;
            if digits[pos] < values.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        tried += 1;
        let coeffs: Vec<AutomorphicPoly> = (0..k)
            .map(|i| AutomorphicPoly {
                generator,
                coefficients: (0..width).map(|d| Cyclotomic::from_int(1, values[digits[i * width + d]])).collect(),
            }
            .trimmed())
            .collect();
        let mut kxx = AutomorphicPoly::constant(0, Cyclotomic::zero(1));
        for i in 0..k {
            for j in 0..k {
                kxx = kxx.add(&coeffs[i].mul(&coeffs[j]).mul(&kf[i][j]));
            }
        }
        if kxx.degree() == Some(0) {
            let value = kxx.eval(&Cyclotomic::zero(1));
            return CartanSearch { coefficients: Some(coeffs), killing_value: Some(value), tried };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::OrbitType;
    use crate::grouprep::{character_table, cover_character_table};
    use crate::liebase::{fixed_lie_subalgebra, lie_spec, LieFamily};

    fn sl2_basis(n: u32) -> Vec<Matrix> {
        let o = Cyclotomic::one(n);
        let z = Cyclotomic::zero(n);
        vec![
            Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]]),
            Matrix::from_rows(vec![vec![z.clone(), z.clone()], vec![o.clone(), z.clone()]]),
            Matrix::from_rows(vec![vec![o.clone(), z.clone()], vec![z, -&o]]),
        ]
    }

    fn rp(ring: &StructureConstants, i: usize, j: usize, k: usize) -> String {
        ring.get(i, j, k).display(&ring.names)
    }

    #[test]
    fn unprehomogenised_dihedral_brackets() {
        let n = 12;
        let [e1, e2, e3] = dihedral_polynomial_generators(5, 1, n).unwrap();
        assert_eq!(bracket(&e1, &e2), e3.scale(&Cyclotomic::from_int(n, 2)));
        assert!(bracket(&e1, &e1).is_zero());
    }

    #[test]
    fn prehomogenised_dihedral_table() {
        for nn in 2..6 {
            let gf = ground_forms(GroupSpec::dihedral(nn)).unwrap();
            let n = gf.forms[0].conductor();
            let ring = PrimaryRing::ground(&gf);
            for j in 1..nn {
                let gens = dihedral_generators(&gf, j).unwrap();
                let two = Cyclotomic::from_int(n, 2);
                assert_eq!(bracket(&gens[0], &gens[1]), gens[2].times(&gf.power(0)).scale(&two));
                let sc = structure_constants(&gens, &ring).unwrap();
                assert!(sc.is_antisymmetric() && sc.jacobi_holds());
                // [η̃₂,η̃₃] = 2(−F_b²η̃₁ + F_b²η̃₂), [η̃₃,η̃₁] = 2(F_b²η̃₁ − F_a^Nη̃₂)
                let pb = RingPoly::monomial(two.clone(), 0, 1);
                let pa = RingPoly::monomial(two.clone(), 1, 0);
                assert_eq!(sc.get(1, 2, 0), &pb.neg());
                assert_eq!(sc.get(1, 2, 1), &pb);
                assert_eq!(sc.get(2, 0, 0), &pb);
                assert_eq!(sc.get(2, 0, 1), &pa.neg());
                assert_eq!(rp(&sc, 0, 1, 2), format!("(2)*Fa^{nn}"));
            }
        }
    }

    #[test]
    fn generators_span_the_computed_module() {
        for nn in 2..6 {
            let spec = GroupSpec::dihedral(nn);
            let t = cover_character_table(spec).unwrap();
            let gf = ground_forms(spec).unwrap();
            for chi in 0..t.characters().len() {
                let Some(j) = t.name(chi).strip_prefix("psi").and_then(|s| s.parse::<u32>().ok()) else {
                    continue;
                };
                let (ls, rep) = lie_spec(&t, LieFamily::Sl, t.name(chi)).unwrap();
                let computed = polynomial_alia_generators(&ls, &rep).unwrap();
                assert_eq!(computed.len(), 3);
                let ours = dihedral_generators(&gf, j).unwrap();
                let flat: Vec<(Vec<Form>, u32)> =
                    computed.iter().map(|g| (g.to_vector().components, g.degree())).collect();
                let ring = PrimaryRing::ground(&gf);
                for g in &ours {
                    assert!(g.is_invariant(t.group(), &rep), "D{nn} psi{j} {}", g.label);
                    express_over_ring(&g.to_vector().components, g.degree(), &flat, &ring).unwrap();
                }
                let back: Vec<(Vec<Form>, u32)> =
                    ours.iter().map(|g| (g.to_vector().components, g.degree())).collect();
                for g in &computed {
                    express_over_ring(&g.to_vector().components, g.degree(), &back, &ring).unwrap();
                }
            }
        }
    }

    #[test]
    fn polyhedral_counts() {
        let t = character_table(GroupSpec::tetrahedral()).unwrap();
        let (ls, rep) = lie_spec(&t, LieFamily::Sl, "T4").unwrap();
        let g = polynomial_alia_generators(&ls, &rep).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|x| x.degree() == 12 && x.is_invariant(t.group(), &rep)));
        let gf = ground_forms(GroupSpec::tetrahedral()).unwrap();
        let sc = structure_constants(&g, &PrimaryRing::ground(&gf)).unwrap();
        assert!(sc.jacobi_holds());
    }

    #[test]
    fn total_determinants() {
        let gf = ground_forms(GroupSpec::dihedral(3)).unwrap();
        let n = gf.forms[0].conductor();
        let gens = dihedral_generators(&gf, 1).unwrap();
        let want = (&(&gf.power(0) * &gf.power(1)) * &gf.power(2)).scale(&Cyclotomic::from_int(n, 2));
        let det = total_determinant(&gens, &sl2_basis(n)).unwrap();
        assert!(det == want || det == -&want);
        let single = InvariantMatrix::new(vec![vec![gf.power(0)]], "x").unwrap();
        let one = Matrix::identity(1, n);
        assert_eq!(total_determinant(std::slice::from_ref(&single), &[one]).unwrap(), gf.power(0));
    }

    #[test]
    fn matrices_of_invariants_example() {
        // j = 2, N = 5: υ₁ = F_a^{N−j/2}(X^j, Y^j), υ₂ = F_a^{j/2}F_b(Y^{N−j}, X^{N−j})
        let (nn, j) = (5u32, 2u32);
        let gf = ground_forms(GroupSpec::dihedral(nn)).unwrap();
        let n = gf.forms[0].conductor();
        let one = Cyclotomic::one(n);
        let fa = gf.form(0);
        let v1 = VectorOfForms::new(
            vec![&fa.pow(nn - j / 2) * &xy(one.clone(), j, 0), &fa.pow(nn - j / 2) * &xy(one.clone(), 0, j)],
            "psi2",
        )
        .unwrap();
        let w = &fa.pow(j / 2) * gf.form(1);
        let v2 = VectorOfForms::new(
            vec![&w * &xy(one.clone(), 0, nn - j), &w * &xy(one.clone(), nn - j, 0)],
            "psi2",
        )
        .unwrap();
        let ring = PrimaryRing::ground(&gf);
        let gens = dihedral_generators(&gf, j).unwrap();
        let mois = matrices_of_invariants(&gens, &[v1, v2], &ring).unwrap();
        assert_eq!(mois[0].to_string(), "[Fa^5, (2)*Fb^2; 0, (-1)*Fa^5]");
        assert_eq!(mois[1].to_string(), "[0, Fb^2; Fa^5, 0]");
        assert_eq!(mois[2].to_string(), "[Fb^2, Fb^2; (-1)*Fa^5, (-1)*Fb^2]");
        let sc = structure_constants(&gens, &ring).unwrap();
        assert!(preserves_brackets(&mois, &sc));
        let basis = sl2_basis(n);
        assert_eq!(
            moi_total_determinant(&mois, &ring, &basis).unwrap(),
            total_determinant(&gens, &basis).unwrap()
        );
    }

    #[test]
    fn normal_form_at_exceptional_and_generic_poles() {
        let n = 1;
        let one = Cyclotomic::one(n);
        let zero = Cyclotomic::zero(n);
        for nn in 2..5 {
            for j in 1..nn {
                for (ca, cb) in [
                    (one.clone(), zero.clone()),
                    (zero.clone(), one.clone()),
                    (-&one, one.clone()),
                    (Cyclotomic::from_int(n, 2), Cyclotomic::from_int(n, 3)),
                ] {
                    let nf = dihedral_normal_form(nn, j, &ca, &cb).unwrap();
                    assert!(nf.constants.jacobi_holds());
                    let expect = if nf.pole.orbit_type == OrbitType::Generic { 3 } else { 2 };
                    assert_eq!(nf.cartan_factor.degree(), Some(expect), "N={nn} j={j}");
                }
            }
        }
        // row Γ_a of the table: h = antidiag(λ^j, λ^{−j})
        let nf = dihedral_normal_form(3, 1, &one, &zero).unwrap();
        let gf = ground_forms(GroupSpec::dihedral(3)).unwrap();
        assert_eq!(nf.h.numerator.entries, dihedral_generators(&gf, 1).unwrap()[0].entries);
        assert_eq!(nf.h.pole_exponent, 3);
    }

    #[test]
    fn evaluations() {
        let n = 1;
        let one = Cyclotomic::one(n);
        let zero = Cyclotomic::zero(n);
        let nf = dihedral_normal_form(3, 1, &zero, &one).unwrap();
        let gf = ground_forms(GroupSpec::dihedral(3)).unwrap();
        let nc = gf.forms[0].conductor();
        let generic = ProjectivePoint::finite(Cyclotomic::from_int(nc, 2));
        let e = evaluate_alia(&nf.basis(), &generic).unwrap();
        assert_eq!((e.dimension, e.derived_dimension), (3, 3));
        // μ = 0 lies on Γ_a, μ = 1 on Γ_c
        for mu in [ProjectivePoint::finite(Cyclotomic::zero(nc)), ProjectivePoint::finite(Cyclotomic::one(nc))] {
            let e = evaluate_alia(&nf.basis(), &mu).unwrap();
            assert_eq!(e.dimension, 1);
            assert!(e.is_abelian);
            let c = evaluate_constants(&nf.constants, &gf, &nf.pole, &mu).unwrap();
            assert!(c[1][2].iter().all(|x| x.is_zero()));
            assert_eq!(c[0][1][1], Cyclotomic::from_int(nc, 2));
        }
        let t = cover_character_table(GroupSpec::dihedral(3)).unwrap();
        let (ls, _) = lie_spec(&t, LieFamily::Sl, "psi1").unwrap();
        let d = fixed_lie_subalgebra(&ls, 0).unwrap();
        let e = evaluate_alia(&nf.basis(), &ProjectivePoint::finite(Cyclotomic::zero(nc))).unwrap();
        assert!(e.matches(&d));
        // the pole orbit itself
        let b = ProjectivePoint::finite(Cyclotomic::root_of_unity(6, 1).lift_conductor(nc).unwrap());
        assert!(evaluate_alia(&nf.basis(), &b).is_err());
    }

    #[test]
    fn dicyclic_table() {
        for (nn, j) in [(3u32, 1u32), (4, 1), (4, 2)] {
            let (z, ring) = dicyclic_generators(nn, j, 4).unwrap();
            let sc = structure_constants(&z, &ring).unwrap();
            assert!(sc.jacobi_holds());
            let t = |i: usize, j: usize| {
                (0..6)
                    .filter(|&k| !sc.get(i, j, k).is_zero())
                    .map(|k| format!("{}:{}", k + 1, sc.get(i, j, k).display(&sc.names)))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            assert_eq!(t(0, 1), "");
            assert_eq!(t(0, 2), "4:2");
            assert_eq!(t(0, 3), "3:(2)*theta1");
            assert_eq!(t(2, 4), "2:1");
            assert_eq!(t(0, 4), "6:-2");
            assert_eq!(t(3, 4), "1:theta2");
        }
    }

    #[test]
    fn abelian_pair_has_zero_constants() {
        let gf = ground_forms(GroupSpec::dihedral(3)).unwrap();
        let n = gf.forms[0].conductor();
        let a = InvariantMatrix::new(vec![vec![gf.power(0), Form::zero(6, n)], vec![Form::zero(6, n), gf.power(1)]], "a").unwrap();
        let b = a.scale(&Cyclotomic::from_int(n, 3));
        let sc = structure_constants(&[a, b], &PrimaryRing::ground(&gf)).unwrap();
        assert!(sc.constants.iter().flatten().flatten().all(|c| c.is_zero()));
    }

    fn dihedral_poles(n: u32) -> Vec<(Cyclotomic, Cyclotomic)> {
        let one = Cyclotomic::one(n);
        let zero = Cyclotomic::zero(n);
        vec![
            (one.clone(), zero.clone()),
            (zero, one.clone()),
            (-&one, one),
            (Cyclotomic::from_int(n, 2), Cyclotomic::from_int(n, 3)),
        ]
    }

    #[test]
    fn killing_determinant_is_a_power_of_the_automorphic_functions() {
        use crate::rootcoh::{kappa_constraint, RootSystemKind};
        for nn in 2..7 {
            let gf = ground_forms(GroupSpec::dihedral(nn)).unwrap();
            for j in 1..nn {
                for (ca, cb) in dihedral_poles(1) {
                    let nf = dihedral_normal_form(nn, j, &ca, &cb).unwrap();
                    let det = killing_determinant(&nf.constants);
                    let kappa = kappa_constraint(RootSystemKind::A1, nf.pole.orbit_type.into());
                    let mut expect = AutomorphicPoly::constant(0, Cyclotomic::one(1));
                    for (i, &k) in kappa.iter().enumerate() {
                        let f = automorphic_function(&gf, &nf.pole, i).unwrap();
                        for _ in 0..2 * k {
                            expect = expect.mul(&f);
                        }
                    }
                    let lead = |p: &AutomorphicPoly| p.coefficients.last().cloned().unwrap();
                    let c = &lead(&det) / &lead(&expect);
                    assert!(!c.is_zero());
                    assert!(det.same_as(&expect.scale(&c)), "N={nn} j={j} pole {:?}", nf.pole.orbit_type);
                    assert_eq!(c, Cyclotomic::from_int(1, -128));
                }
            }
        }
    }

    #[test]
    fn cartan_search_finds_an_element_of_constant_spectrum() {
        for nn in [3u32, 4] {
            let gf = ground_forms(GroupSpec::dihedral(nn)).unwrap();
            let n = gf.forms[0].conductor();
            for (ca, cb) in dihedral_poles(n) {
                let pole = Pole::from_parameters(&gf, ca, cb).unwrap();
                let basis: Vec<HomogenisedMatrix> = dihedral_generators(&gf, 1)
                    .unwrap()
                    .into_iter()
                    .map(|g| HomogenisedMatrix::over_power(g, &pole, 1).unwrap())
                    .collect();
                let table = homogenised_structure_constants(&basis, &gf, 4).unwrap();
                let found = search_cartan_element(&table, 3, 0);
                let coeffs = found.coefficients.expect("a Cartan element");
                assert!(coeffs.iter().all(|p| p.degree().unwrap_or(0) == 0));
                assert!(!found.killing_value.unwrap().is_zero());
            }
        }
        // an abelian table exhausts the box
        let zero = AutomorphicPoly::constant(0, Cyclotomic::zero(1));
        let flat = AutomorphicTable { labels: vec!["x".into(), "y".into()], constants: vec![vec![vec![zero; 2]; 2]; 2] };
        let r = search_cartan_element(&flat, 1, 1);
        assert!(r.coefficients.is_none());
        assert_eq!(r.tried, 3usize.pow(4) - 1);
    }

    #[test]
    fn prehomogenised_modules_from_both_covers_coincide() {
        for nn in 2..7u32 {
            let gf = ground_forms(GroupSpec::dihedral(nn)).unwrap();
            let n = gf.forms[0].conductor();
            let pole = Pole::exceptional(&gf, 0).unwrap();
            for j in 1..nn {
                assert!(dihedral_cover_modules_coincide(&gf, j).unwrap(), "N={nn} j={j}");
                // the degree-2N part of the dicyclic module, ζ_s·θ₁^a, agrees
                // only for even N and j
                let target = dihedral_generators(&gf, j).unwrap().to_vec();
                let (zetas, ring) = dicyclic_generators(nn, j, n).unwrap();
                let dicyclic: Vec<InvariantMatrix> = zetas
                    .iter()
                    .filter(|z| z.degree() <= 2 * nn && (2 * nn - z.degree()) % 4 == 0)
                    .map(|z| z.times(&ring.generators[0].pow((2 * nn - z.degree()) / 4)))
                    .collect();
                let inside = |v: &InvariantMatrix, gens: &[InvariantMatrix]| in_prehomogenised_module(v, gens, &gf, &pole).unwrap();
                let same = dicyclic.iter().all(|v| inside(v, &target)) && target.iter().all(|v| inside(v, &dicyclic));
                assert_eq!(same, nn % 2 == 0 && j % 2 == 0, "N={nn} j={j}");
            }
        }
    }
}
