//! Homogeneous polynomials in X, Y over a cyclotomic field, the action of
//! a matrix group on them, isotypical projections, Poincaré series and the
//! ground forms of the polyhedral groups.

mod ground;
mod series;

pub use ground::{
    form_vanishing_on_orbit, ground_forms, ground_forms_on, GroundForms, OrbitForm, OrbitType,
    Pole, ProjectivePoint,
};
pub use series::{
    catalogued_ring, molien, stanley_check, CataloguedRing, ClosedForm, PoincareSeries,
    StanleyReport,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::exactnum::{Cyclotomic, Matrix};
use crate::grouprep::CharacterTable;

/// A homogeneous form of fixed degree. Coefficients are keyed by the
/// exponent of X; the exponent of Y is `degree - key`.
#[derive(Clone)]
pub struct Form {
    degree: u32,
    conductor: u32,
    coeffs: BTreeMap<u32, Cyclotomic>,
}

impl Form {
    pub fn zero(degree: u32, n: u32) -> Self {
        Form {
            degree,
            conductor: n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one(n: u32) -> Self {
        Self::constant(Cyclotomic::one(n))
    }

    /// c·X^i·Y^j.
    pub fn monomial(c: Cyclotomic, i: u32, j: u32) -> Self {
        let mut f = Form::zero(i + j, c.conductor());
        if !c.is_zero() {
            f.coeffs.insert(i, c);
        }
        f
    }

    pub fn x(n: u32) -> Self {
        Self::monomial(Cyclotomic::one(n), 1, 0)
    }

    pub fn y(n: u32) -> Self {
        Self::monomial(Cyclotomic::one(n), 0, 1)
    }

    /// The linear form a·X + b·Y.
    pub fn linear(a: Cyclotomic, b: Cyclotomic) -> Self {
        Self::from_dense(&[b, a])
    }

    /// Build from coefficients indexed by the exponent of X.
    pub fn from_dense(coeffs: &[Cyclotomic]) -> Self {
        let n = coeffs.iter().map(|c| c.conductor()).max().unwrap_or(1);
        let degree = coeffs.len().saturating_sub(1) as u32;
        let mut f = Form::zero(degree, n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                f.coeffs.insert(i as u32, c.clone());
            }
        }
        f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn conductor(&self) -> u32 {
        self.coeffs
            .values()
            .map(|c| c.conductor())
            .chain(std::iter::once(self.conductor))
            .max()
            .unwrap_or(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of X^i·Y^{degree−i}.
    pub fn coeff(&self, i: u32) -> Cyclotomic {
        self.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Cyclotomic::zero(self.conductor))
    }

    /// Nonzero terms as (exponent of X, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Cyclotomic)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Dense coefficient vector of length degree + 1.
    pub fn to_dense(&self) -> Vec<Cyclotomic> {
        (0..=self.degree).map(|i| self.coeff(i)).collect()
    }

    /// Largest exponent of X among nonzero terms.
    pub fn leading_exponent(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Cyclotomic) -> Form {
        if c.is_zero() {
            return Form::zero(self.degree, self.conductor);
        }
        Form {
            degree: self.degree,
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|(&i, v)| (i, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Form {
        let mut acc = Form::one(self.conductor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitute X ↦ m₀₀X + m₀₁Y, Y ↦ m₁₀X + m₁₁Y.
    pub fn substitute(&self, m: &Matrix) -> Form {
        let n = self.conductor.max(m.conductor());
        let d = self.degree as usize;
        let l1 = [m.get(0, 1).clone(), m.get(0, 0).clone()];
        let l2 = [m.get(1, 1).clone(), m.get(1, 0).clone()];
        let p1 = linear_powers(&l1, d, n);
        let p2 = linear_powers(&l2, d, n);
        let mut out = vec![Cyclotomic::zero(n); d + 1];
        for (&i, c) in &self.coeffs {
            let prod = dense_mul(&p1[i as usize], &p2[d - i as usize], n);
            for (k, v) in prod.iter().enumerate() {
                if !v.is_zero() {
                    out[k] += &(v * c);
                }
            }
        }
        let mut f = Form::from_dense(&out);
        f.degree = self.degree;
        f.conductor = n;
        f
    }

    /// P(x, y) for field elements x, y.
    pub fn eval(&self, x: &Cyclotomic, y: &Cyclotomic) -> Cyclotomic {
        let n = self.conductor.max(x.conductor()).max(y.conductor());
        let d = self.degree;
        let mut acc = Cyclotomic::zero(n);
        let xs = powers(x, d, n);
        let ys = powers(y, d, n);
        for (&i, c) in &self.coeffs {
            acc += &(&(c * &xs[i as usize]) * &ys[(d - i) as usize]);
        }
        acc
    }

    pub fn derivative_x(&self) -> Form {
        let mut f = Form::zero(self.degree.saturating_sub(1), self.conductor);
        for (&i, c) in &self.coeffs {
            if i > 0 {
                f.coeffs.insert(i - 1, c.scale_int(i as i64));
            }
        }
        f
    }

    pub fn derivative_y(&self) -> Form {
        let mut f = Form::zero(self.degree.saturating_sub(1), self.conductor);
        for (&i, c) in &self.coeffs {
            let j = self.degree - i;
            if j > 0 {
                f.coeffs.insert(i, c.scale_int(j as i64));
            }
        }
        f
    }

    /// Exact quotient self / d when d divides self.
    pub fn divide(&self, d: &Form) -> Option<Form> {
        if d.is_zero() {
            return None;
        }
        if d.degree > self.degree {
            return if self.is_zero() {
                Some(Form::zero(0, self.conductor))
            } else {
                None
            };
        }
        let qdeg = self.degree - d.degree;
        if self.is_zero() {
            return Some(Form::zero(qdeg, self.conductor));
        }
        // long division in X with Y homogenising
        let lead = d.leading_exponent()?;
        let lc = d.coeffs[&lead].invert().ok()?;
        let mut rem = self.clone();
        let mut q = Form::zero(qdeg, self.conductor);
        while let Some(top) = rem.leading_exponent() {
            if top < lead {
                return None;
            }
            let k = top - lead;
            if k > qdeg {
                return None;
            }
            let c = &rem.coeffs[&top] * &lc;
            let term = Form::monomial(c.clone(), k, qdeg - k);
            rem = &rem - &(&term * d);
            q.coeffs.insert(k, c);
        }
        Some(q)
    }

    /// Some c with self = c·other, if the forms are proportional.
    pub fn ratio_to(&self, other: &Form) -> Option<Cyclotomic> {
        if self.degree != other.degree || self.coeffs.len() != other.coeffs.len() {
            return None;
        }
        if other.is_zero() {
            return if self.is_zero() {
                Some(Cyclotomic::one(self.conductor))
            } else {
                None
            };
        }
        let (&k, v) = other.coeffs.iter().next()?;
        let c = self.coeffs.get(&k)? / v;
        if &other.scale(&c) == self {
            Some(c)
        } else {
            None
        }
    }

    pub fn is_proportional(&self, other: &Form) -> bool {
        self.ratio_to(other)
            .is_some_and(|c| !c.is_zero() || self.is_zero())
    }

    /// Keep the form if d divides its degree, else return zero.
    pub fn prehomogenise(&self, d: u32) -> Form {
        if d == 0 || self.degree.is_multiple_of(d) {
            self.clone()
        } else {
            Form::zero(self.degree, self.conductor)
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Cyclotomic) -> Cyclotomic) -> Form {
        let mut out = Form::zero(self.degree, self.conductor);
        for (&i, c) in &self.coeffs {
            let v = f(c);
            if !v.is_zero() {
                out.coeffs.insert(i, v);
            }
        }
        out
    }

    /// Force a degree on a zero form (used when summing graded pieces).
    pub fn with_degree(mut self, degree: u32) -> Form {
        assert!(self.is_zero() || self.degree == degree, "degree mismatch");
        self.degree = degree;
        self
    }
}

fn powers(x: &Cyclotomic, d: u32, n: u32) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::one(n)];
    for k in 1..=d as usize {
        let v = &out[k - 1] * x;
        out.push(v);
    }
    out
}

/// Dense powers of a linear form given as [coeff of Y, coeff of X].
fn linear_powers(l: &[Cyclotomic; 2], d: usize, n: u32) -> Vec<Vec<Cyclotomic>> {
    let mut out = vec![vec![Cyclotomic::one(n)]];
    for k in 1..=d {
        let v = dense_mul(&out[k - 1], l, n);
        out.push(v);
    }
    out
}

fn dense_mul(a: &[Cyclotomic], b: &[Cyclotomic], n: u32) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

impl PartialEq for Form {
    fn eq(&self, other: &Form) -> bool {
        (self.degree == other.degree || (self.is_zero() && other.is_zero()))
            && self.coeffs == other.coeffs
    }
}

impl Eq for Form {}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (&i, c) in &rhs.coeffs {
            let v = match out.coeffs.get(&i) {
                Some(a) => a + c,
                None => c.clone(),
            };
            if v.is_zero() {
                out.coeffs.remove(&i);
            } else {
                out.coeffs.insert(i, v);
            }
        }
        out
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map_coeffs(|c| -c)
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Form> for &'a Form {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        let n = self.conductor.max(rhs.conductor);
        let mut acc: BTreeMap<u32, Cyclotomic> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &rhs.coeffs {
                let p = a * b;
                acc.entry(i + j).and_modify(|v| *v += &p).or_insert(p);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Form {
            degree: self.degree + rhs.degree,
            conductor: n,
            coeffs: acc,
        }
    }
}

macro_rules! owned_form_op {
    ($tr:ident, $m:ident) => {
        impl $tr<Form> for Form {
            type Output = Form;
            fn $m(self, rhs: Form) -> Form {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_form_op!(Add, add);
owned_form_op!(Sub, sub);
owned_form_op!(Mul, mul);

fn coeff_text(c: &Cyclotomic) -> String {
    let s = c.to_string();
    if c.is_rational() {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, c) in self.coeffs.iter().rev() {
            let j = self.degree - i;
            let mut mono = Vec::new();
            if i > 0 {
                mono.push(if i == 1 {
                    "X".to_string()
                } else {
                    format!("X^{i}")
                });
            }
            if j > 0 {
                mono.push(if j == 1 {
                    "Y".to_string()
                } else {
                    format!("Y^{j}")
                });
            }
            let mono = mono.join("*");
            let (neg, body) = match c.to_rational() {
                Some(r) if r.is_negative() => (true, (-c).to_string()),
                _ => (false, coeff_text(c)),
            };
            let term = if mono.is_empty() {
                body
            } else if c.is_one() || (neg && (-c).is_one()) {
                mono
            } else {
                format!("{body}*{mono}")
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, term)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, term)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self)
    }
}

#[derive(Serialize)]
struct Term<'a> {
    x: u32,
    y: u32,
    coeff: &'a Cyclotomic,
}

impl Serialize for Form {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .coeffs
            .iter()
            .map(|(&i, c)| Term {
                x: i,
                y: self.degree - i,
                coeff: c,
            })
            .collect();
        let mut st = s.serialize_struct("Form", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Inverse of a 2×2 matrix via the adjugate.
pub(crate) fn inverse2(g: &Matrix) -> Matrix {
    let det = g.det();
    let inv = det.invert().expect("group element is invertible");
    Matrix::from_rows(vec![
        vec![g.get(1, 1) * &inv, -&(g.get(0, 1) * &inv)],
        vec![-&(g.get(1, 0) * &inv), g.get(0, 0) * &inv],
    ])
}

/// g·p = p∘g⁻¹.
pub fn act(g: &Matrix, p: &Form) -> Form {
    p.substitute(&inverse2(g))
}

/// Matrix of p ↦ g·p on the monomials X^iY^{d−i} (column i).
pub fn action_matrix(g: &Matrix, d: u32) -> Matrix {
    let n = g.conductor();
    let inv = inverse2(g);
    let d = d as usize;
    let l1 = [inv.get(0, 1).clone(), inv.get(0, 0).clone()];
    let l2 = [inv.get(1, 1).clone(), inv.get(1, 0).clone()];
    let p1 = linear_powers(&l1, d, n);
    let p2 = linear_powers(&l2, d, n);
    let mut m = Matrix::zeros(d + 1, d + 1, n);
    for i in 0..=d {
        let col = dense_mul(&p1[i], &p2[d - i], n);
        for (k, v) in col.into_iter().enumerate() {
            if !v.is_zero() {
                m.set(k, i, v);
            }
        }
    }
    m
}

/// Basis of the χ-isotypical component R^χ_d, obtained by projecting all
/// monomials with (χ(1)/|G|)Σ conj(χ(g))·g and row-reducing.
pub fn reynolds_basis(table: &CharacterTable, chi: usize, d: u32) -> Vec<Form> {
    let g = table.group();
    let n = table.conductor();
    let size = d as usize + 1;
    let mut proj = Matrix::zeros(size, size, n);
    for e in 0..g.order() {
        let c = table.value(chi, e).conjugate();
        if c.is_zero() {
            continue;
        }
        proj = &proj + &action_matrix(g.element(e), d).scale(&c);
    }
    let (rows, pivots) = proj.transpose().rref();
    (0..pivots.len())
        .map(|r| Form::from_dense(&rows.row(r)).with_degree(d))
        .collect()
}
