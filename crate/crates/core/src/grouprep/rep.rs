use num_bigint::BigInt;

use super::group::Realization;
use super::table::{dihedral_word, CharacterTable};
use super::GroupKind;
use crate::exactnum::{Cyclotomic, Matrix, Rational};
use crate::{Error, Result};

/// Explicit matrices of an irreducible representation, one per group
/// element. When possible the basis diagonalises ρ(g_a).
#[derive(Clone, Debug)]
pub struct Representation {
    pub character: usize,
    pub name: String,
    matrices: Vec<Matrix>,
}

impl Representation {
    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn matrix(&self, element: usize) -> &Matrix {
        &self.matrices[element]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// Apply the same change of basis P to all matrices: P⁻¹ρ(g)P.
    pub fn conjugated(&self, p: &Matrix) -> Result<Representation> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::InvalidInput("singular change of basis".into()))?;
        Ok(Representation {
            character: self.character,
            name: self.name.clone(),
            matrices: self.matrices.iter().map(|m| &(&pinv * m) * p).collect(),
        })
    }
}

/// Matrices of S^h of the 2×2 matrix g on the basis e₁^{h−k}e₂^k.
pub fn symmetric_power_matrix(g: &Matrix, h: usize) -> Matrix {
    let n = g.conductor();
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    // powers of (a + c t) and (b + d t) as coefficient lists in t
    let powers = |x: &Cyclotomic, y: &Cyclotomic| {
        let mut out = vec![vec![Cyclotomic::one(n)]];
        for k in 1..=h {
            let prev: &Vec<Cyclotomic> = &out[k - 1];
            let mut next = vec![Cyclotomic::zero(n); k + 1];
            for (i, p) in prev.iter().enumerate() {
                next[i] += &(p * x);
                next[i + 1] += &(p * y);
            }
            out.push(next);
        }
        out
    };
    let pa = powers(a, c);
    let pb = powers(b, d);
    let mut m = Matrix::zeros(h + 1, h + 1, n);
    for k in 0..=h {
        let u = &pa[h - k];
        let v = &pb[k];
        for (i, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in v.iter().enumerate() {
                let cur = m.get(i + j, k) + &(x * y);
                m.set(i + j, k, cur);
            }
        }
    }
    m
}

fn extract(table: &CharacterTable, chi: usize, big: &[Matrix]) -> Result<Vec<Matrix>> {
    let g = table.group();
    let n = table.conductor();
    let size = big[0].rows();
    let mut proj = Matrix::zeros(size, size, n);
    for e in 0..g.order() {
        let c = table.value(chi, e).conjugate();
        if c.is_zero() {
            continue;
        }
        proj = &proj + &big[e].scale(&c);
    }
    let scale = Rational::new(BigInt::from(table.degree(chi)), BigInt::from(g.order()));
    let proj = proj.scale(&Cyclotomic::from_rational(n, &scale));
    let (rows, pivots) = proj.transpose().rref();
    let d = pivots.len();
    if d != table.degree(chi) as usize {
        return Err(Error::Inconsistent(format!(
            "isotypic image of {} has dimension {d}",
            table.name(chi)
        )));
    }
    // columns of B are the basis; B restricted to the pivot rows is the identity
    let basis: Vec<Vec<Cyclotomic>> = (0..d).map(|i| rows.row(i)).collect();
    let b = Matrix::from_rows(basis).transpose();
    let mut out = Vec::with_capacity(g.order());
    for m in big {
        let img = m * &b;
        let mut r = Matrix::zeros(d, d, n);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..d {
                r.set(i, j, img.get(p, j).clone());
            }
        }
        out.push(r);
    }
    Ok(out)
}

fn diagonalise_ga(table: &CharacterTable, chi: usize, mats: Vec<Matrix>) -> Result<Vec<Matrix>> {
    let g = table.group();
    let ga = g.generator(0);
    let dim = mats[0].rows();
    let n = table.conductor();
    let mut cols: Vec<Vec<Cyclotomic>> = Vec::new();
    for (ev, _) in table.eigenvalues(chi, ga)? {
        let shifted = &mats[ga] - &Matrix::identity(dim, n).scale(&ev);
        cols.extend(shifted.kernel());
    }
    if cols.len() != dim {
        return Err(Error::Inconsistent(
            "generator g_a is not diagonalisable".into(),
        ));
    }
    let p = Matrix::from_rows(cols).transpose();
    let pinv = p
        .inverse()
        .ok_or_else(|| Error::Inconsistent("eigenvectors are dependent".into()))?;
    Ok(mats.iter().map(|m| &(&pinv * m) * &p).collect())
}

fn realise(table: &CharacterTable, chi: usize, depth: u32) -> Result<Vec<Matrix>> {
    let g = table.group();
    let n = table.conductor();
    if table.degree(chi) == 1 {
        return Ok((0..g.order())
            .map(|e| Matrix::diagonal(&[table.value(chi, e).clone()]))
            .collect());
    }
    if let Realization::Standard { parameter: m } = g.realization() {
        if g.spec().kind == GroupKind::Dihedral {
            let name = table.name(chi);
            let j: i64 = name
                .strip_prefix("psi")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| {
                    Error::Inconsistent(format!("unexpected dihedral character {name}"))
                })?;
            let w = |k: i64| Cyclotomic::root_of_unity(m, k).lift_conductor(n).unwrap();
            return Ok((0..g.order())
                .map(|e| {
                    let (refl, i) = dihedral_word(g, e, m);
                    let z = Cyclotomic::zero(n);
                    if refl {
                        Matrix::from_rows(vec![vec![z.clone(), w(-j * i)], vec![w(j * i), z]])
                    } else {
                        Matrix::diagonal(&[w(j * i), w(-j * i)])
                    }
                })
                .collect());
        }
    }
    // symmetric powers of the natural representation
    for h in 1..=16u32 {
        let sp = table.symmetric_power_character(h)?;
        let mult = table.inner_product(&sp.values, &table.character(chi).values);
        if mult.is_one() {
            let big: Vec<Matrix> = g
                .elements()
                .iter()
                .map(|m| symmetric_power_matrix(m, h as usize))
                .collect();
            return extract(table, chi, &big);
        }
    }
    // tensor products of smaller irreducibles
    if depth == 0 {
        let degs: Vec<usize> = (0..table.characters().len()).collect();
        for &x in &degs {
            for &y in &degs {
                if y < x || table.degree(x) == 1 || table.degree(y) == 1 {
                    continue;
                }
                if table.degree(x) * table.degree(y) > 36 {
                    continue;
                }
                let prod = table.product(&table.character(x).values, &table.character(y).values);
                if table
                    .inner_product(&prod, &table.character(chi).values)
                    .is_one()
                    && x != chi
                    && y != chi
                {
                    let (Ok(rx), Ok(ry)) =
                        (realise(table, x, depth + 1), realise(table, y, depth + 1))
                    else {
                        continue;
                    };
                    let big: Vec<Matrix> = rx.iter().zip(&ry).map(|(a, b)| a.kron(b)).collect();
                    return extract(table, chi, &big);
                }
            }
        }
    }
    Err(Error::Inconsistent(format!(
        "could not realise {}",
        table.name(chi)
    )))
}

/// Matrices for the irreducible χ: closed forms for dihedral and linear
/// characters, isotypic projection of symmetric or tensor powers otherwise.
pub fn representation(table: &CharacterTable, chi: usize) -> Result<Representation> {
    let mats = realise(table, chi, 0)?;
    let mats = if mats[0].rows() > 1 {
        diagonalise_ga(table, chi, mats)?
    } else {
        mats
    };
    for e in 0..table.group().order() {
        if mats[e].trace() != *table.value(chi, e) {
            return Err(Error::Inconsistent(format!(
                "trace mismatch for {}",
                table.name(chi)
            )));
        }
    }
    Ok(Representation {
        character: chi,
        name: table.name(chi).to_string(),
        matrices: mats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::{character_table, GroupSpec};

    #[test]
    fn all_irreducibles_realised() {
        for spec in [
            GroupSpec::tetrahedral(),
            GroupSpec::octahedral(),
            GroupSpec::dihedral(5),
        ] {
            let t = character_table(spec).unwrap();
            for chi in 0..t.characters().len() {
                let r = representation(&t, chi).unwrap();
                let g = t.group();
                let (a, b) = (g.generator(0), g.generator(1));
                assert_eq!(&(r.matrix(a) * r.matrix(b)), r.matrix(g.mul(a, b)));
                assert!(
                    r.matrix(a).is_zero() || {
                        let m = r.matrix(a);
                        (0..m.rows())
                            .all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j).is_zero()))
                    }
                );
            }
        }
    }
}
