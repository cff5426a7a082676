//! Invariant vectors in V⊗C[X,Y], their quotients by powers of a pole form,
//! free generators over the ring of automorphic functions, determinants and
//! evaluation at points of the projective line.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::exactnum::{Cyclotomic, Matrix, Rational};
use crate::forms::{action_matrix, molien, Form, GroundForms, Pole, ProjectivePoint};
use crate::grouprep::{representation, BinaryGroup, CharacterTable, Representation};
use crate::{Error, Result};

/// A column of forms of equal degree, one per basis vector of V.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorOfForms {
    pub components: Vec<Form>,
    /// Character name of the representation whose matrices define the basis.
    pub basis: String,
}

impl VectorOfForms {
    pub fn new(components: Vec<Form>, basis: impl Into<String>) -> Result<Self> {
        let d = components.first().map(|f| f.degree()).unwrap_or(0);
        if components.iter().any(|f| f.degree() != d && !f.is_zero()) {
            return Err(Error::InvalidInput(
                "components of different degrees".into(),
            ));
        }
        let components = components.into_iter().map(|f| f.with_degree(d)).collect();
        Ok(VectorOfForms {
            components,
            basis: basis.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> u32 {
        self.components.first().map(|f| f.degree()).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|f| f.is_zero())
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        self.map(|f| f.scale(c))
    }

    /// f·v for a form f.
    pub fn times(&self, f: &Form) -> Self {
        self.map(|c| c * f)
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorOfForms {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
            basis: self.basis.clone(),
        }
    }

    fn map(&self, f: impl Fn(&Form) -> Form) -> Self {
        VectorOfForms {
            components: self.components.iter().map(f).collect(),
            basis: self.basis.clone(),
        }
    }

    /// Kill all components when the degree is not divisible by d.
    pub fn prehomogenise(&self, d: u32) -> Self {
        self.map(|f| f.prehomogenise(d))
    }

    /// v is a scalar multiple of w, or w of v (zero vectors only match zero).
    pub fn is_proportional(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let flat = |v: &Self| -> Form {
            // concatenate components into one form for the ratio test
            let mut dense = Vec::new();
            for c in &v.components {
                dense.extend(c.to_dense());
            }
            Form::from_dense(&dense)
        };
        if self.degree() != other.degree() {
            return self.is_zero() && other.is_zero();
        }
        flat(self).is_proportional(&flat(other))
    }

    /// The components evaluated at (x : y).
    pub fn eval(&self, p: &ProjectivePoint) -> Vec<Cyclotomic> {
        self.components
            .iter()
            .map(|f| f.eval(p.x(), p.y()))
            .collect()
    }

    /// Σ_l ρ(g)_{kl}·(g·P_l) = P_k for every generator.
    pub fn is_invariant(&self, group: &BinaryGroup, rep: &Representation) -> bool {
        let d = self.degree();
        group.generators().iter().all(|&g| {
            let a = action_matrix(group.element(g), d);
            let moved: Vec<Vec<Cyclotomic>> = self
                .components
                .iter()
                .map(|f| a.apply(&f.to_dense()))
                .collect();
            let rho = rep.matrix(g);
            (0..self.dim()).all(|k| {
                let n = a.conductor().max(rho.conductor());
                let mut acc = vec![Cyclotomic::zero(n); d as usize + 1];
                for (l, m) in moved.iter().enumerate() {
                    let r = rho.get(k, l);
                    if r.is_zero() {
                        continue;
                    }
                    for (slot, v) in acc.iter_mut().zip(m) {
                        *slot += &(r * v);
                    }
                }
                Form::from_dense(&acc).with_degree(d) == self.components[k]
            })
        })
    }
}

impl fmt::Display for VectorOfForms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Is v a linear combination of the given vectors of the same degree?
pub fn in_span(vectors: &[VectorOfForms], v: &VectorOfForms) -> bool {
    let flat = |w: &VectorOfForms| -> Vec<Cyclotomic> {
        w.components.iter().flat_map(|c| c.to_dense()).collect()
    };
    if vectors
        .iter()
        .any(|w| w.degree() != v.degree() || w.dim() != v.dim())
    {
        return false;
    }
    let mut rows: Vec<Vec<Cyclotomic>> = vectors.iter().map(flat).collect();
    let before = Matrix::from_rows(rows.clone()).rank();
    rows.push(flat(v));
    (vectors.is_empty() && v.is_zero()) || Matrix::from_rows(rows).rank() == before
}

/// Invariant vectors for the irreducible χ together with the matrices of the
/// representation used.
#[derive(Clone, Debug)]
pub struct InvariantModule<'a> {
    pub table: &'a CharacterTable,
    pub chi: usize,
    pub rep: Representation,
}

impl<'a> InvariantModule<'a> {
    pub fn new(table: &'a CharacterTable, chi: usize) -> Result<Self> {
        Ok(InvariantModule {
            table,
            chi,
            rep: representation(table, chi)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Basis of (V⊗R_d)^G as the kernel of ρ(g)⊗M_g − 1 over the
    /// generators, cross-checked against the Molien series of the dual.
    pub fn invariant_vectors(&self, d: u32) -> Result<Vec<VectorOfForms>> {
        let group = self.table.group();
        let n = self.table.conductor();
        let dim = self.dim();
        let size = dim * (d as usize + 1);
        let mut rows = Vec::new();
        for &g in group.generators() {
            let op = &self.rep.matrix(g).kron(&action_matrix(group.element(g), d))
                - &Matrix::identity(size, n);
            rows.extend(op.to_rows());
        }
        let kernel = Matrix::from_rows(rows).kernel();
        let dual = self.table.dual(self.chi);
        let expected = molien(self.table, dual, d as usize)?.coefficient(d as usize)
            / self.table.degree(self.chi) as u64;
        if kernel.len() as u64 != expected {
            return Err(Error::Inconsistent(format!(
                "{} invariant vectors in degree {d}, Molien predicts {expected}",
                kernel.len()
            )));
        }
        let name = self.table.name(self.chi).to_string();
        kernel
            .into_iter()
            .map(|v| {
                let comps = v
                    .chunks(d as usize + 1)
                    .map(|c| Form::from_dense(c).with_degree(d))
                    .collect();
                VectorOfForms::new(comps, name.clone())
            })
            .collect()
    }

    /// Generators of degree |G| of the module of invariant vectors over the
    /// automorphic functions; exactly dim V of them.
    pub fn free_generators(&self) -> Result<Vec<VectorOfForms>> {
        let group = self.table.group();
        if !group.is_abelian() && self.table.is_spinorial(self.chi)? {
            return Err(Error::InvalidInput(format!(
                "{} is spinorial and has no invariant vectors in degree |G|",
                self.table.name(self.chi)
            )));
        }
        if self.chi == self.table.trivial() {
            return Err(Error::InvalidInput(
                "the trivial character is generated by 1".into(),
            ));
        }
        let d = self.table.spec().order();
        let gens = self.invariant_vectors(d)?;
        if gens.len() != self.dim() {
            return Err(Error::Inconsistent(format!(
                "expected {} generators in degree {d}, found {}",
                self.dim(),
                gens.len()
            )));
        }
        Ok(gens)
    }
}

/// Determinant of a square matrix of forms by cofactor expansion, memoised
/// on the set of columns still available.
pub fn form_determinant(m: &[Vec<Form>]) -> Result<Form> {
    let size = m.len();
    if m.iter().any(|r| r.len() != size) {
        return Err(Error::InvalidInput(
            "determinant of a non-square matrix".into(),
        ));
    }
    if size == 0 {
        return Ok(Form::one(1));
    }
    fn rec(m: &[Vec<Form>], row: usize, cols: u32, memo: &mut HashMap<(usize, u32), Form>) -> Form {
        if row == m.len() {
            return Form::one(m[0][0].conductor());
        }
        if let Some(f) = memo.get(&(row, cols)) {
            return f.clone();
        }
        let mut acc: Option<Form> = None;
        let mut sign = true;
        for c in 0..m.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            let entry = &m[row][c];
            if !entry.is_zero() {
                let minor = rec(m, row + 1, cols & !(1 << c), memo);
                if !minor.is_zero() {
                    let term = entry * &minor;
                    let term = if sign { term } else { -&term };
                    acc = Some(match acc {
                        Some(a) => &a + &term,
                        None => term,
                    });
                }
            }
            sign = !sign;
        }
        let degree: u32 = (row..m.len())
            .map(|r| m[r].iter().map(|f| f.degree()).max().unwrap_or(0))
            .sum();
        let out = acc.unwrap_or_else(|| Form::zero(degree, m[0][0].conductor()));
        memo.insert((row, cols), out.clone());
        out
    }
    Ok(rec(m, 0, (1u32 << size) - 1, &mut HashMap::new()))
}

/// det of the component matrix whose columns are the generators.
pub fn det_invariant_vectors(gens: &[VectorOfForms]) -> Result<Form> {
    let dim = gens.first().map(|v| v.dim()).unwrap_or(0);
    if gens.len() != dim {
        return Err(Error::InvalidInput(format!(
            "{} vectors for a {dim}-dimensional representation",
            gens.len()
        )));
    }
    let m: Vec<Vec<Form>> = (0..dim)
        .map(|k| gens.iter().map(|v| v.components[k].clone()).collect())
        .collect();
    let det = form_determinant(&m)?;
    if det.is_zero() {
        return Err(Error::Inconsistent("generators are dependent".into()));
    }
    Ok(det)
}

/// The monomial Π F_i^{e_i}.
pub fn ground_monomial(gf: &GroundForms, exps: &[u32]) -> Form {
    let n = gf.forms[0].conductor();
    gf.forms
        .iter()
        .zip(exps)
        .fold(Form::one(n), |acc, (f, &e)| &acc * &f.pow(e))
}

/// Exponents ν_iκ(χ)_i of the expected determinant, or an error when they
/// are not natural numbers.
pub fn kappa_exponents(table: &CharacterTable, chi: usize) -> Result<Vec<u32>> {
    let nu = table.spec().nu();
    table
        .kappa(chi)?
        .scaled(&nu)
        .iter()
        .map(|e| {
            if e.is_integer() && *e >= Rational::from_integer(BigInt::from(0)) {
                Ok(e.to_integer().try_into().unwrap_or(0))
            } else {
                Err(Error::Inconsistent(format!("exponent {e} is not natural")))
            }
        })
        .collect()
}

/// det = c·Π F_i^{ν_iκ_i}: returns c when the determinant has that shape.
pub fn determinant_constant(det: &Form, gf: &GroundForms, exps: &[u32]) -> Option<Cyclotomic> {
    det.ratio_to(&ground_monomial(gf, exps))
}

/// v/F_Γ^r with r·deg F_Γ = deg v, kept with no common factor F_Γ.
#[derive(Clone, Debug, Serialize)]
pub struct HomogenisedVector {
    pub numerator: VectorOfForms,
    pub pole: Pole,
    /// Power r of F_Γ in the denominator.
    pub pole_exponent: u32,
}

impl HomogenisedVector {
    /// Order of the pole at each point of Γ.
    pub fn pole_order(&self) -> u32 {
        self.pole_exponent
    }

    /// Value at μ ∉ Γ, up to the common scalar from the choice of
    /// homogeneous coordinates.
    pub fn eval(&self, mu: &ProjectivePoint) -> Result<Vec<Cyclotomic>> {
        let den = self.pole.form.eval(mu.x(), mu.y());
        if den.is_zero() && self.pole_exponent > 0 {
            return Err(Error::InvalidInput(format!(
                "{mu:?} lies on the pole orbit"
            )));
        }
        let inv = if self.pole_exponent == 0 {
            Cyclotomic::one(den.conductor())
        } else {
            den.pow(self.pole_exponent).invert()?
        };
        Ok(self.numerator.eval(mu).iter().map(|v| v * &inv).collect())
    }
}

/// h_Γ(v) = v/F_Γ^r.
pub fn homogenise(v: &VectorOfForms, pole: &Pole) -> Result<HomogenisedVector> {
    let k = pole.form.degree();
    if k == 0 || !v.degree().is_multiple_of(k) {
        return Err(Error::InvalidInput(format!(
            "degree {} is not a multiple of |Γ| = {k}",
            v.degree()
        )));
    }
    let mut numerator = v.clone();
    let mut r = v.degree() / k;
    while r > 0 && !numerator.is_zero() {
        let divided: Option<Vec<Form>> = numerator
            .components
            .iter()
            .map(|c| {
                if c.is_zero() {
                    Some(Form::zero(c.degree() - k, c.conductor()))
                } else {
                    c.divide(&pole.form)
                }
            })
            .collect();
        match divided {
            Some(comps) => {
                numerator = VectorOfForms::new(comps, v.basis.clone())?;
                r -= 1;
            }
            None => break,
        }
    }
    if numerator.is_zero() {
        r = 0;
    }
    Ok(HomogenisedVector {
        numerator,
        pole: pole.clone(),
        pole_exponent: r,
    })
}

/// Elements of the group fixing μ.
pub fn stabiliser(group: &BinaryGroup, mu: &ProjectivePoint) -> Vec<usize> {
    let n = group.conductor();
    let mu = mu.lift(n);
    (0..group.order())
        .filter(|&g| mu.apply(group.element(g)).lift(n) == mu)
        .collect()
}

/// dim V^{G_μ} = (1/|G_μ|) Σ_{g∈G_μ} χ(g).
pub fn stabiliser_fixed_dim(
    table: &CharacterTable,
    chi: usize,
    mu: &ProjectivePoint,
) -> Result<u32> {
    let stab = stabiliser(table.group(), mu);
    let n = table.conductor();
    let mut acc = Cyclotomic::zero(n);
    for &g in &stab {
        acc += table.value(chi, g);
    }
    let v = acc.scale(&Rational::new(1.into(), BigInt::from(stab.len())));
    v.to_i64()
        .filter(|&x| x >= 0)
        .map(|x| x as u32)
        .ok_or_else(|| Error::Inconsistent(format!("fixed dimension {v} is not natural")))
}

/// Subspace of V spanned by the values of the given quotients at μ.
#[derive(Clone, Debug, Serialize)]
pub struct Evaluation {
    pub dimension: usize,
    pub basis: Vec<Vec<Cyclotomic>>,
}

pub fn evaluate(span: &[HomogenisedVector], mu: &ProjectivePoint) -> Result<Evaluation> {
    let mut values = Vec::with_capacity(span.len());
    for v in span {
        values.push(v.eval(mu)?);
    }
    let basis = crate::exactnum::linalg::span_basis(&values);
    Ok(Evaluation {
        dimension: basis.len(),
        basis,
    })
}

/// All invariant vectors of degree |G| divided by F_Γ^{ν_Γ}, evaluated at μ.
pub fn evaluate_module(
    module: &InvariantModule,
    pole: &Pole,
    mu: &ProjectivePoint,
) -> Result<Evaluation> {
    let d = module.table.spec().order();
    let gens = module.invariant_vectors(d)?;
    let quotients: Vec<_> = gens
        .iter()
        .map(|v| homogenise(v, pole))
        .collect::<Result<_>>()?;
    evaluate(&quotients, mu)
}

/// A polynomial in a single automorphic function 𝕀_i.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutomorphicPoly {
    /// Index i of the exceptional orbit whose 𝕀_i is the variable.
    pub generator: usize,
    pub coefficients: Vec<Cyclotomic>,
}

impl AutomorphicPoly {
    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    pub(crate) fn trimmed(mut self) -> Self {
        while self.coefficients.last().is_some_and(|c| c.is_zero()) {
            self.coefficients.pop();
        }
        self
    }
}

impl fmt::Display for AutomorphicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = ["Ia", "Ib", "Ic"][self.generator];
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})*{var}"),
                _ => format!("({c})*{var}^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn poly_mul(a: &[Cyclotomic], b: &[Cyclotomic], n: u32) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

/// Write v = Σ_r p_r(𝕀)·h_Γ(gen_r), where the gens have degree |G| and v is
/// a quotient by a power of F_Γ^{ν_Γ}. The variable is 𝕀_b when Γ = Γ_a
/// and 𝕀_a otherwise.
pub fn express_in_generators(
    v: &HomogenisedVector,
    gens: &[VectorOfForms],
    gf: &GroundForms,
) -> Result<Vec<AutomorphicPoly>> {
    let pole = &v.pole;
    let step = pole.form.degree() * pole.nu;
    let order = gf.spec.order();
    if gens.iter().any(|g| g.degree() != order) || step != order {
        return Err(Error::InvalidInput(
            "generators and pole must have degree |G|".into(),
        ));
    }
    let dim = gens.first().map(|g| g.dim()).unwrap_or(0);
    let n = gf.forms[0].conductor();
    // bring the numerator over F_Γ^{kν_Γ}
    let mut num = v.numerator.clone();
    let mut r = v.pole_exponent;
    while !r.is_multiple_of(pole.nu) {
        num = num.times(&pole.form);
        r += 1;
    }
    let k = r / pole.nu;
    if k == 0 {
        return if num.is_zero() {
            Ok(vec![
                AutomorphicPoly {
                    generator: 0,
                    coefficients: vec![]
                };
                gens.len()
            ])
        } else {
            Err(Error::NoSolution(
                "a nonzero constant vector is not in the module".into(),
            ))
        };
    }
    // unknowns c_{r,a}: coefficient of P_a^a P_b^{k−1−a}·gen_r
    let pa = gf.power(0);
    let pb = gf.power(1);
    let mut columns: Vec<VectorOfForms> = Vec::new();
    for g in gens {
        for a in 0..k {
            let f = &pa.pow(a) * &pb.pow(k - 1 - a);
            columns.push(g.times(&f));
        }
    }
    let flat = |w: &VectorOfForms| -> Vec<Cyclotomic> {
        w.components.iter().flat_map(|c| c.to_dense()).collect()
    };
    let cols: Vec<Vec<Cyclotomic>> = columns.iter().map(flat).collect();
    let target = flat(&num);
    if target.len() != dim * (k * order) as usize + dim {
        return Err(Error::InvalidInput("numerator has the wrong degree".into()));
    }
    let m = Matrix::from_rows(cols).transpose();
    let sol = m
        .solve(&target)
        .ok_or_else(|| Error::NoSolution("vector is not in the span of the generators".into()))?;
    // P_a^a P_b^{k−1−a}/F_Γ^{(k−1)ν} = 𝕀_a^a 𝕀_b^{k−1−a}
    let ku = k as usize;
    (0..gens.len())
        .map(|rr| automorphic_from_homogeneous(&sol[rr * ku..(rr + 1) * ku], pole, n))
        .collect()
}

/// Σ_a coeffs[a]·𝕀_a^a·𝕀_b^{m−a} as a polynomial in one automorphic
/// function, eliminating the other with c_a𝕀_a + c_b𝕀_b = 1. The variable
/// is 𝕀_b when Γ = Γ_a and 𝕀_a otherwise.
pub fn automorphic_from_homogeneous(
    coeffs: &[Cyclotomic],
    pole: &Pole,
    n: u32,
) -> Result<AutomorphicPoly> {
    let m = coeffs.len().saturating_sub(1) as u32;
    let (generator, other_of) = if pole.cb.is_zero() {
        // Γ = Γ_a: 𝕀_a = (1 − c_b𝕀_b)/c_a
        let ca_inv = pole.ca.invert()?;
        (
            1usize,
            vec![&Cyclotomic::one(n) * &ca_inv, -&(&pole.cb * &ca_inv)],
        )
    } else {
        let cb_inv = pole.cb.invert()?;
        (
            0usize,
            vec![&Cyclotomic::one(n) * &cb_inv, -&(&pole.ca * &cb_inv)],
        )
    };
    let var = vec![Cyclotomic::zero(n), Cyclotomic::one(n)];
    let pow = |p: &[Cyclotomic], e: u32| {
        (0..e).fold(vec![Cyclotomic::one(n)], |acc, _| poly_mul(&acc, p, n))
    };
    let mut poly = vec![Cyclotomic::zero(n); m as usize + 1];
    for (a, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let a = a as u32;
        let (e_var, e_other) = if generator == 0 { (a, m - a) } else { (m - a, a) };
        let term = poly_mul(&pow(&var, e_var), &pow(&other_of, e_other), n);
        for (slot, t) in poly.iter_mut().zip(term) {
            *slot += &(&t * c);
        }
    }
    Ok(AutomorphicPoly {
        generator,
        coefficients: poly,
    }
    .trimmed())
}

/// 𝕀_i = F_i^{ν_i}/F_Γ^{ν_Γ} in the variable chosen for this pole.
pub fn automorphic_function(gf: &GroundForms, pole: &Pole, i: usize) -> Result<AutomorphicPoly> {
    let n = gf.forms[0].conductor();
    let zero = Cyclotomic::zero(n);
    let one = Cyclotomic::one(n);
    // coefficients of (𝕀_b, 𝕀_a)
    let coeffs = match i {
        0 => vec![zero, one],
        1 => vec![one, zero],
        2 if gf.relation.len() == 3 => {
            let rc = gf.relation[2].invert()?;
            vec![
                -&(&gf.relation[1] * &rc),
                -&(&gf.relation[0] * &rc),
            ]
        }
        _ => return Err(Error::InvalidInput(format!("no automorphic function {i}"))),
    };
    automorphic_from_homogeneous(&coeffs, pole, n)
}

/// Value at μ ∉ Γ of the variable of polynomials built for this pole.
pub fn automorphic_variable_at(
    gf: &GroundForms,
    pole: &Pole,
    mu: &ProjectivePoint,
) -> Result<Cyclotomic> {
    let i = if pole.cb.is_zero() { 1 } else { 0 };
    let den = pole.denominator().eval(mu.x(), mu.y());
    if den.is_zero() {
        return Err(Error::InvalidInput(format!("{mu:?} lies on the pole orbit")));
    }
    Ok(&gf.power(i).eval(mu.x(), mu.y()) / &den)
}

impl AutomorphicPoly {
    pub fn constant(generator: usize, c: Cyclotomic) -> Self {
        AutomorphicPoly {
            generator,
            coefficients: vec![c],
        }
        .trimmed()
    }

    fn conductor(&self, other: &Self) -> u32 {
        self.coefficients
            .iter()
            .chain(&other.coefficients)
            .map(|c| c.conductor())
            .max()
            .unwrap_or(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.conductor(other);
        let len = self.coefficients.len().max(other.coefficients.len());
        let zero = Cyclotomic::zero(n);
        let coefficients = (0..len)
            .map(|k| {
                let a = self.coefficients.get(k).unwrap_or(&zero);
                let b = other.coefficients.get(k).unwrap_or(&zero);
                a + b
            })
            .collect();
        AutomorphicPoly {
            generator: if self.is_zero() { other.generator } else { self.generator },
            coefficients,
        }
        .trimmed()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return AutomorphicPoly {
                generator: self.generator,
                coefficients: vec![],
            };
        }
        let n = self.conductor(other);
        AutomorphicPoly {
            generator: if self.coefficients.len() <= 1 { other.generator } else { self.generator },
            coefficients: poly_mul(&self.coefficients, &other.coefficients, n),
        }
        .trimmed()
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        AutomorphicPoly {
            generator: self.generator,
            coefficients: self.coefficients.iter().map(|x| x * c).collect(),
        }
        .trimmed()
    }

    pub fn degree(&self) -> Option<usize> {
        (!self.is_zero()).then(|| self.coefficients.len() - 1)
    }

    pub fn eval(&self, x: &Cyclotomic) -> Cyclotomic {
        let n = x.conductor();
        self.coefficients
            .iter()
            .rev()
            .fold(Cyclotomic::zero(n), |acc, c| &(&acc * x) + c)
    }

    /// Equality as functions; the variable index is ignored for constants.
    pub fn same_as(&self, other: &Self) -> bool {
        let a = self.clone().trimmed();
        let b = other.clone().trimmed();
        a.coefficients == b.coefficients
            && (a.coefficients.len() <= 1 || a.generator == b.generator)
    }
}

/// Write v = Σ_s p_s(𝕀)·g_s for quotients g_s = n_s/F_Γ^{r_s} sharing the
/// pole of v. The polynomial degree is raised until the system is solvable,
/// up to `max_degree`.
pub fn express_homogenised(
    v: &HomogenisedVector,
    gens: &[HomogenisedVector],
    gf: &GroundForms,
    max_degree: u32,
) -> Result<Vec<AutomorphicPoly>> {
    let pole = &v.pole;
    if gens
        .iter()
        .any(|g| g.pole.ca != pole.ca || g.pole.cb != pole.cb || g.numerator.dim() != v.numerator.dim())
    {
        return Err(Error::InvalidInput("generators have different poles".into()));
    }
    let n = gf.forms[0].conductor();
    let big_r = gens
        .iter()
        .map(|g| g.pole_exponent)
        .chain(std::iter::once(v.pole_exponent))
        .max()
        .unwrap_or(0);
    let pa = gf.power(0);
    let pb = gf.power(1);
    let fg = &pole.form;
    let flat = |w: &VectorOfForms| -> Vec<Cyclotomic> {
        w.components.iter().flat_map(|c| c.to_dense()).collect()
    };
    for m in 0..=max_degree {
        let lift = m * pole.nu + big_r - v.pole_exponent;
        let target = flat(&v.numerator.times(&fg.pow(lift)));
        let mut cols = Vec::new();
        for g in gens {
            let base = g.numerator.times(&fg.pow(big_r - g.pole_exponent));
            for a in 0..=m {
                cols.push(flat(&base.times(&(&pa.pow(a) * &pb.pow(m - a)))));
            }
        }
        if cols.iter().any(|c| c.len() != target.len()) {
            return Err(Error::InvalidInput("quotients of different degree".into()));
        }
        let Some(sol) = Matrix::from_rows(cols).transpose().solve(&target) else {
            continue;
        };
        let w = m as usize + 1;
        return (0..gens.len())
            .map(|s| automorphic_from_homogeneous(&sol[s * w..(s + 1) * w], pole, n))
            .collect();
    }
    Err(Error::NoSolution(format!(
        "not in the span of the generators with coefficients of degree ≤ {max_degree}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{ground_forms, ground_forms_on, OrbitType};
    use crate::grouprep::{character_table, cover_character_table, GroupSpec};

    fn xy(n: u32, i: u32, j: u32) -> Form {
        Form::monomial(Cyclotomic::one(n), i, j)
    }

    #[test]
    fn dihedral_pairs() {
        for m in 2..8u32 {
            let t = character_table(GroupSpec::dihedral(m)).unwrap();
            let n = t.conductor();
            for chi in 0..t.characters().len() {
                let name = t.name(chi).to_string();
                let Some(j) = name.strip_prefix("psi").and_then(|s| s.parse::<u32>().ok()) else {
                    continue;
                };
                let module = InvariantModule::new(&t, chi).unwrap();
                let low = module.invariant_vectors(j).unwrap();
                let want = VectorOfForms::new(vec![xy(n, j, 0), xy(n, 0, j)], &name).unwrap();
                assert_eq!(low.len(), 1);
                assert!(low[0].is_proportional(&want), "D{m} {name}: {}", low[0]);
                let high = module.invariant_vectors(m - j).unwrap();
                let want =
                    VectorOfForms::new(vec![xy(n, 0, m - j), xy(n, m - j, 0)], &name).unwrap();
                assert!(in_span(&high, &want), "D{m} {name}");
            }
        }
    }

    #[test]
    fn trivial_degree_zero() {
        let t = character_table(GroupSpec::tetrahedral()).unwrap();
        let module = InvariantModule::new(&t, t.trivial()).unwrap();
        let v = module.invariant_vectors(0).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].components[0].is_proportional(&Form::one(t.conductor())));
    }

    #[test]
    fn tetrahedral_generators_and_determinants() {
        let t = character_table(GroupSpec::tetrahedral()).unwrap();
        let gf = ground_forms_on(t.group()).unwrap();
        let t7 = t.index("T7").unwrap();
        let module = InvariantModule::new(&t, t7).unwrap();
        let gens = module.free_generators().unwrap();
        assert_eq!(gens.len(), 3);
        assert!(gens
            .iter()
            .all(|g| g.degree() == 12 && g.is_invariant(t.group(), &module.rep)));
        let det = det_invariant_vectors(&gens).unwrap();
        assert_eq!(det.degree(), 36);
        let exps = kappa_exponents(&t, t7).unwrap();
        assert!(determinant_constant(&det, &gf, &exps).is_some());
        let t4 = t.index("T4").unwrap();
        assert!(InvariantModule::new(&t, t4)
            .unwrap()
            .free_generators()
            .is_err());
        // T2 and T3 separately
        let mut prod = Form::one(t.conductor());
        for name in ["T2", "T3"] {
            let chi = t.index(name).unwrap();
            let g = InvariantModule::new(&t, chi)
                .unwrap()
                .free_generators()
                .unwrap();
            prod = &prod * &det_invariant_vectors(&g).unwrap();
        }
        assert!(determinant_constant(&prod, &gf, &[3, 3, 0]).is_some());
    }

    #[test]
    fn octahedral_sign_determinant() {
        let t = character_table(GroupSpec::octahedral()).unwrap();
        let gf = ground_forms_on(t.group()).unwrap();
        let o2 = t.index("O2").unwrap();
        let g = InvariantModule::new(&t, o2)
            .unwrap()
            .free_generators()
            .unwrap();
        let det = det_invariant_vectors(&g).unwrap();
        assert!(determinant_constant(&det, &gf, &[2, 0, 1]).is_some());
    }

    #[test]
    fn homogenisation() {
        let spec = GroupSpec::dihedral(3);
        let gf = ground_forms(spec).unwrap();
        let pole_a = Pole::exceptional(&gf, 0).unwrap();
        let fb2 = VectorOfForms::new(vec![gf.form(1).pow(2)], "chi1").unwrap();
        let h = homogenise(&fb2, &pole_a).unwrap();
        assert_eq!(h.pole_exponent, 3);
        let same = VectorOfForms::new(vec![gf.power(0)], "chi1").unwrap();
        let one = homogenise(&same, &pole_a).unwrap();
        assert_eq!(one.pole_exponent, 0);
        assert!(one.numerator.components[0].is_proportional(&Form::one(1)));
        let pole_b = Pole::exceptional(&gf, 1).unwrap();
        let zero = Form::zero(6, gf.forms[0].conductor());
        let v = VectorOfForms::new(vec![gf.power(0), zero], "psi1").unwrap();
        assert_eq!(homogenise(&v, &pole_b).unwrap().pole_order(), gf.nu[1]);
        assert!(
            homogenise(&v, &Pole::exceptional(&gf, 0).unwrap())
                .unwrap()
                .numerator
                .degree()
                == 0
        );
    }

    #[test]
    fn evaluation_examples() {
        let t = character_table(GroupSpec::dihedral(3)).unwrap();
        let gf = ground_forms_on(t.group()).unwrap();
        let n = t.conductor();
        let psi1 = t.index("psi1").unwrap();
        let module = InvariantModule::new(&t, psi1).unwrap();
        let pole = Pole::exceptional(&gf, 0).unwrap();
        let pt = |v: i64| ProjectivePoint::finite(Cyclotomic::from_int(n, v));
        assert_eq!(
            evaluate_module(&module, &pole, &pt(1)).unwrap().dimension,
            1
        );
        assert_eq!(
            evaluate_module(&module, &pole, &pt(2)).unwrap().dimension,
            2
        );
        let pole_b = Pole::exceptional(&gf, 1).unwrap();
        let fixed_r = ProjectivePoint::infinity(n);
        assert_eq!(gf.orbit_type_of(&fixed_r), OrbitType::A);
        assert_eq!(
            evaluate_module(&module, &pole_b, &fixed_r)
                .unwrap()
                .dimension,
            0
        );
        assert!(evaluate_module(&module, &pole, &fixed_r).is_err());
    }

    #[test]
    fn dihedral_generators_in_closed_form() {
        // N odd, j even: F_a^{N−j/2}(X^j,Y^j) and F_a^{j/2}F_b(Y^{N−j},X^{N−j})
        let t = character_table(GroupSpec::dihedral(5)).unwrap();
        let gf = ground_forms_on(t.group()).unwrap();
        let n = t.conductor();
        let chi = t.index("psi2").unwrap();
        let module = InvariantModule::new(&t, chi).unwrap();
        let gens = module.free_generators().unwrap();
        let u1 = VectorOfForms::new(vec![xy(n, 2, 0), xy(n, 0, 2)], "psi2")
            .unwrap()
            .times(&gf.form(0).pow(4));
        let u2 = VectorOfForms::new(vec![xy(n, 0, 3), xy(n, 3, 0)], "psi2")
            .unwrap()
            .times(&(gf.form(0) * gf.form(1)));
        let pole = Pole::exceptional(&gf, 1).unwrap();
        for u in [u1, u2] {
            let h = homogenise(&u, &pole).unwrap();
            assert!(express_in_generators(&h, &gens, &gf).is_ok());
        }
        let exps = kappa_exponents(&t, chi).unwrap();
        assert_eq!(exps, vec![5, 1, 1]);
        let det = det_invariant_vectors(&gens).unwrap();
        assert!(determinant_constant(&det, &gf, &exps).is_some());
    }

    #[test]
    fn expressing_generators() {
        let t = cover_character_table(GroupSpec::dihedral(3)).unwrap();
        let gf = ground_forms_on(t.group()).unwrap();
        let chi = t.index("psi1").unwrap();
        let module = InvariantModule::new(&t, chi).unwrap();
        let gens = module.free_generators().unwrap();
        let pole = Pole::exceptional(&gf, 0).unwrap();
        let n = t.conductor();
        let h = homogenise(&gens[0], &pole).unwrap();
        let c = express_in_generators(&h, &gens, &gf).unwrap();
        assert_eq!(c[0].coefficients, vec![Cyclotomic::one(n)]);
        assert!(c[1].is_zero());
        // 𝕀_b·gen₂ = F_b²·gen₂/F_a^{2N}
        let v = gens[1].times(&gf.power(1));
        let h = homogenise(&v, &pole).unwrap();
        let c = express_in_generators(&h, &gens, &gf).unwrap();
        assert!(c[0].is_zero());
        assert_eq!(c[1].generator, 1);
        assert_eq!(
            c[1].coefficients,
            vec![Cyclotomic::zero(n), Cyclotomic::one(n)]
        );
        let bad = homogenise(
            &gens[0].times(gf.form(0)),
            &Pole::exceptional(&gf, 2).unwrap(),
        );
        assert!(bad.is_err() || express_in_generators(&bad.unwrap(), &gens, &gf).is_err());
    }
}
