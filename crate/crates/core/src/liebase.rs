//! The classical Lie algebras sl(V), so(V), sp(V) as modules over a finite
//! group acting on V, and their subalgebras fixed by single elements.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::exactnum::{Cyclotomic, Matrix, Rational};
use crate::grouprep::{representation, CharacterTable, Representation};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LieFamily {
    Sl,
    So,
    Sp,
}

impl LieFamily {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sl" => Ok(LieFamily::Sl),
            "so" => Ok(LieFamily::So),
            "sp" => Ok(LieFamily::Sp),
            _ => Err(Error::InvalidInput(format!("unknown Lie family {s:?}"))),
        }
    }

    /// Dimension of the algebra on an n-dimensional space.
    pub fn dimension(self, n: u32) -> u32 {
        match self {
            LieFamily::Sl => (n * n).saturating_sub(1),
            LieFamily::So => n * n.saturating_sub(1) / 2,
            LieFamily::Sp => n * (n + 1) / 2,
        }
    }

    /// Frobenius–Schur indicator required of the carrier.
    fn indicator(self) -> Option<i32> {
        match self {
            LieFamily::Sl => None,
            LieFamily::So => Some(1),
            LieFamily::Sp => Some(-1),
        }
    }
}

impl fmt::Display for LieFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LieFamily::Sl => "sl",
            LieFamily::So => "so",
            LieFamily::Sp => "sp",
        })
    }
}

/// g(V) for the irreducible χ of the table's group.
#[derive(Clone, Copy, Debug)]
pub struct LieSpec<'a> {
    pub family: LieFamily,
    pub table: &'a CharacterTable,
    pub chi: usize,
}

impl<'a> LieSpec<'a> {
    pub fn new(family: LieFamily, table: &'a CharacterTable, chi: usize) -> Result<Self> {
        if let Some(want) = family.indicator() {
            let got = table.frobenius_schur(chi);
            if got != want {
                return Err(Error::InvalidInput(format!(
                    "{family}({}) needs indicator {want}, found {got}",
                    table.name(chi)
                )));
            }
        }
        if table.degree(chi) < 2 {
            return Err(Error::InvalidInput(
                "the carrier must have dimension at least 2".into(),
            ));
        }
        Ok(LieSpec { family, table, chi })
    }

    pub fn carrier_dim(&self) -> u32 {
        self.table.degree(self.chi)
    }

    pub fn dimension(&self) -> u32 {
        self.family.dimension(self.carrier_dim())
    }

    pub fn label(&self) -> String {
        format!("{}({})", self.family, self.table.name(self.chi))
    }
}

/// Character of g(V) with its decomposition into irreducibles.
#[derive(Clone, Debug, Serialize)]
pub struct LieCharacter {
    pub values: Vec<Cyclotomic>,
    pub decomposition: Vec<(String, u32)>,
}

impl LieCharacter {
    pub fn decomposition_string(&self) -> String {
        self.decomposition
            .iter()
            .map(|(name, m)| {
                if *m == 1 {
                    name.clone()
                } else {
                    format!("{m}{name}")
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// χ_sl = χ·conj χ − 1, χ_so = ½(χ(g)² − χ(g²)), χ_sp = ½(χ(g)² + χ(g²)).
pub fn lie_character(spec: &LieSpec) -> Result<LieCharacter> {
    let t = spec.table;
    let g = t.group();
    let n = t.conductor();
    let half = Rational::new(1.into(), 2.into());
    let values: Vec<Cyclotomic> = t
        .classes()
        .iter()
        .map(|c| {
            let e = c.representative;
            let v = t.value(spec.chi, e);
            let sq = t.value(spec.chi, g.mul(e, e));
            match spec.family {
                LieFamily::Sl => &(v * &v.conjugate()) - &Cyclotomic::one(n),
                LieFamily::So => (&(v * v) - sq).scale(&half),
                LieFamily::Sp => (&(v * v) + sq).scale(&half),
            }
        })
        .collect();
    let mult = t.decompose(&values)?;
    Ok(LieCharacter {
        decomposition: t.decomposition_names(&mult),
        values,
    })
}

/// Eigenvalues of ρ_χ(g_i) with multiplicities, largest multiplicity first.
pub fn eigenvalues_at(
    table: &CharacterTable,
    chi: usize,
    orbit: usize,
) -> Result<Vec<(Cyclotomic, u32)>> {
    if orbit >= table.spec().omega() {
        return Err(Error::InvalidInput(format!("no exceptional orbit {orbit}")));
    }
    let g = table.group().generator(orbit);
    let mut ev = table.eigenvalues(chi, g)?;
    ev.sort_by(|a, b| b.1.cmp(&a.1));
    Ok(ev)
}

/// The partition of dim V given by the eigenvalue multiplicities of g_i.
pub fn eigenvalue_multiplicities(
    table: &CharacterTable,
    chi: usize,
    orbit: usize,
) -> Result<Vec<u32>> {
    Ok(eigenvalues_at(table, chi, orbit)?
        .into_iter()
        .map(|(_, m)| m)
        .collect())
}

/// Invariant bilinear form: the solution of ρ(g)ᵀBρ(g) = B, symmetric for
/// indicator 1 and antisymmetric for −1; none for complex characters.
pub fn invariant_bilinear_form(
    table: &CharacterTable,
    rep: &Representation,
) -> Result<Option<Matrix>> {
    let chi = rep.character;
    let ind = table.frobenius_schur(chi);
    if ind == 0 {
        return Ok(None);
    }
    let dim = rep.dim();
    let n = table.conductor();
    let mut rows = Vec::new();
    for &g in table.group().generators() {
        let rt = rep.matrix(g).transpose();
        rows.extend((&rt.kron(&rt) - &Matrix::identity(dim * dim, n)).to_rows());
    }
    let kernel = Matrix::from_rows(rows).kernel();
    if kernel.len() != 1 {
        return Err(Error::Inconsistent(format!(
            "{}-dimensional space of invariant bilinear forms",
            kernel.len()
        )));
    }
    let b = Matrix::from_rows(kernel[0].chunks(dim).map(|r| r.to_vec()).collect());
    let bt = b.transpose();
    let expected = if ind == 1 {
        b.clone()
    } else {
        b.scale(&Cyclotomic::from_int(n, -1))
    };
    if bt != expected || b.det().is_zero() {
        return Err(Error::Inconsistent(
            "invariant form has the wrong symmetry".into(),
        ));
    }
    Ok(Some(b))
}

/// A basis of g(V) ⊂ gl(V) in the given representation: traceless matrices
/// for sl, solutions of AᵀB + BA = 0 otherwise.
pub fn basis_of_subalgebra(spec: &LieSpec, rep: &Representation) -> Result<Vec<Matrix>> {
    let dim = rep.dim();
    let n = spec.table.conductor();
    let one = Cyclotomic::one(n);
    match spec.family {
        LieFamily::Sl => {
            let mut out = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    if i != j {
                        let mut m = Matrix::zeros(dim, dim, n);
                        m.set(i, j, one.clone());
                        out.push(m);
                    }
                }
            }
            for i in 0..dim - 1 {
                let mut m = Matrix::zeros(dim, dim, n);
                m.set(i, i, one.clone());
                m.set(i + 1, i + 1, -&one);
                out.push(m);
            }
            Ok(out)
        }
        _ => {
            let b = invariant_bilinear_form(spec.table, rep)?
                .ok_or_else(|| Error::InvalidInput("no invariant bilinear form".into()))?;
            // (AᵀB + BA)_{ij} = Σ_k A_{ki}B_{kj} + B_{ik}A_{kj}, unknowns A_{kl} row-major
            let mut rows = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    let mut row = vec![Cyclotomic::zero(n); dim * dim];
                    for k in 0..dim {
                        row[k * dim + i] += b.get(k, j);
                        row[k * dim + j] += b.get(i, k);
                    }
                    rows.push(row);
                }
            }
            let kernel = Matrix::from_rows(rows).kernel();
            let out: Vec<Matrix> = kernel
                .iter()
                .map(|v| Matrix::from_rows(v.chunks(dim).map(|r| r.to_vec()).collect()))
                .collect();
            if out.len() as u32 != spec.dimension() {
                return Err(Error::Inconsistent(format!(
                    "{} has a basis of size {}",
                    spec.label(),
                    out.len()
                )));
            }
            Ok(out)
        }
    }
}

/// Coordinates of the matrices in the span of a basis, as columns.
pub fn coordinates(basis: &[Matrix], ms: &[Matrix]) -> Option<Matrix> {
    let flat = |m: &Matrix| -> Vec<Cyclotomic> { m.to_rows().into_iter().flatten().collect() };
    let a = Matrix::from_rows(basis.iter().map(flat).collect()).transpose();
    let cols: Option<Vec<Vec<Cyclotomic>>> = ms.iter().map(|m| a.solve(&flat(m))).collect();
    Some(Matrix::from_rows(cols?).transpose())
}

/// Matrix of A ↦ ρ(g)Aρ(g)⁻¹ on the basis, or none if the span is not
/// preserved.
pub fn conjugation_action(basis: &[Matrix], rho: &Matrix) -> Option<Matrix> {
    let inv = rho.inverse()?;
    let images: Vec<Matrix> = basis.iter().map(|a| &(rho * a) * &inv).collect();
    coordinates(basis, &images)
}

/// dim g(V)^{⟨g_i⟩} computed directly as a kernel on the explicit basis.
pub fn fixed_dimension_direct(spec: &LieSpec, rep: &Representation, orbit: usize) -> Result<u32> {
    let basis = basis_of_subalgebra(spec, rep)?;
    let g = spec.table.group().generator(orbit);
    let act = conjugation_action(&basis, rep.matrix(g))
        .ok_or_else(|| Error::Inconsistent("g(V) is not a submodule".into()))?;
    let n = spec.table.conductor();
    Ok((&act - &Matrix::identity(basis.len(), n)).kernel().len() as u32)
}

/// dim g(V)^{⟨g_i⟩} = (1/ν)Σ_k χ_g(g_i^k) from the Lie character.
pub fn fixed_dimension_from_character(spec: &LieSpec, orbit: usize) -> Result<u32> {
    let t = spec.table;
    let ch = lie_character(spec)?;
    let g = t.group().generator(orbit);
    let ord = t.group().element_order(g);
    let mut acc = Cyclotomic::zero(t.conductor());
    let mut p = t.group().identity();
    for _ in 0..ord {
        acc += &ch.values[t.class_of(p)];
        p = t.group().mul(p, g);
    }
    let v = acc.scale(&Rational::new(1.into(), BigInt::from(ord)));
    v.to_i64()
        .filter(|&x| x >= 0)
        .map(|x| x as u32)
        .ok_or_else(|| Error::Inconsistent(format!("fixed dimension {v}")))
}

/// One summand of a reductive Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", content = "n", rename_all = "lowercase")]
pub enum Summand {
    Gl(u32),
    Sl(u32),
    So(u32),
    Sp(u32),
    /// The one-dimensional abelian algebra.
    Line,
}

impl Summand {
    pub fn dimension(self) -> u32 {
        match self {
            Summand::Gl(m) => m * m,
            Summand::Sl(m) => LieFamily::Sl.dimension(m),
            Summand::So(m) => LieFamily::So.dimension(m),
            Summand::Sp(m) => LieFamily::Sp.dimension(m),
            Summand::Line => 1,
        }
    }

    /// Simple summands (as sl/so/sp with the smallest usual name) and
    /// abelian lines after the low-rank isomorphisms.
    fn reduce(self, simple: &mut Vec<(LieFamily, u32)>, lines: &mut u32) {
        match self {
            Summand::Gl(m) => {
                Summand::Sl(m).reduce(simple, lines);
                *lines += u32::from(m > 0);
            }
            Summand::Sl(m) if m >= 2 => simple.push((LieFamily::Sl, m)),
            Summand::So(2) => *lines += 1,
            Summand::So(3) => simple.push((LieFamily::Sl, 2)),
            Summand::So(4) => simple.extend([(LieFamily::Sl, 2), (LieFamily::Sl, 2)]),
            Summand::So(5) => simple.push((LieFamily::Sp, 4)),
            Summand::So(6) => simple.push((LieFamily::Sl, 4)),
            Summand::So(m) if m > 6 => simple.push((LieFamily::So, m)),
            Summand::Sp(2) => simple.push((LieFamily::Sl, 2)),
            Summand::Sp(m) if m >= 4 => simple.push((LieFamily::Sp, m)),
            Summand::Line => *lines += 1,
            _ => {}
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Gl(m) => write!(f, "gl{m}"),
            Summand::Sl(m) => write!(f, "sl{m}"),
            Summand::So(m) => write!(f, "so{m}"),
            Summand::Sp(m) => write!(f, "sp{m}"),
            Summand::Line => write!(f, "C"),
        }
    }
}

/// A reductive Lie algebra as a direct sum of summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductiveDescriptor {
    pub summands: Vec<Summand>,
}

impl ReductiveDescriptor {
    pub fn dimension(&self) -> u32 {
        self.summands.iter().map(|s| s.dimension()).sum()
    }

    /// Simple parts sorted by decreasing size, followed by the abelian lines,
    /// e.g. "sl3+sl2+C".
    pub fn normal_form(&self) -> String {
        let mut simple = Vec::new();
        let mut lines = 0;
        for s in &self.summands {
            s.reduce(&mut simple, &mut lines);
        }
        simple.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut parts: Vec<String> = simple.iter().map(|(fam, m)| format!("{fam}{m}")).collect();
        parts.extend((0..lines).map(|_| "C".to_string()));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for ReductiveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.normal_form())
    }
}

/// Structure of g(V)^{⟨g_i⟩} from the eigenvalues of ρ(g_i): gl blocks per
/// eigenvalue for sl (modulo the identity); so/sp blocks on the ±1
/// eigenspaces and one gl block per conjugate pair otherwise.
pub fn fixed_lie_subalgebra(spec: &LieSpec, orbit: usize) -> Result<ReductiveDescriptor> {
    let ev = eigenvalues_at(spec.table, spec.chi, orbit)?;
    let n = spec.table.conductor();
    let one = Cyclotomic::one(n);
    let minus = Cyclotomic::from_int(n, -1);
    let mut summands = Vec::new();
    match spec.family {
        LieFamily::Sl => {
            for (_, m) in &ev {
                summands.push(Summand::Sl(*m));
            }
            summands.extend((1..ev.len()).map(|_| Summand::Line));
        }
        LieFamily::So | LieFamily::Sp => {
            let mult =
                |target: &Cyclotomic| ev.iter().find(|(e, _)| e == target).map_or(0, |(_, m)| *m);
            let (m1, m2) = (mult(&one), mult(&minus));
            let block = |m| {
                if spec.family == LieFamily::So {
                    Summand::So(m)
                } else {
                    Summand::Sp(m)
                }
            };
            for m in [m1, m2] {
                if m > 0 {
                    summands.push(block(m));
                }
            }
            let mut seen: Vec<Cyclotomic> = Vec::new();
            for (e, m) in &ev {
                if *e == one || *e == minus || seen.contains(e) {
                    continue;
                }
                let c = e.conjugate();
                if mult(&c) != *m {
                    return Err(Error::Inconsistent(
                        "eigenvalues do not pair with conjugates".into(),
                    ));
                }
                seen.push(c);
                seen.push(e.clone());
                summands.push(Summand::Gl(*m));
            }
        }
    }
    summands.retain(|s| s.dimension() > 0);
    summands.sort_by(|a, b| b.dimension().cmp(&a.dimension()).then(a.cmp(b)));
    Ok(ReductiveDescriptor { summands })
}

/// Fixed subalgebras at all exceptional orbits, which add up linearly to g(V).
pub fn evaluated_algebras(spec: &LieSpec) -> Result<Vec<ReductiveDescriptor>> {
    let out: Vec<ReductiveDescriptor> = (0..spec.table.spec().omega())
        .map(|i| fixed_lie_subalgebra(spec, i))
        .collect::<Result<_>>()?;
    let total: u32 = out.iter().map(|d| d.dimension()).sum();
    if spec.table.spec().omega() == 3 && total != spec.dimension() {
        return Err(Error::Inconsistent(format!(
            "fixed subalgebras of {} add up to {total}, not {}",
            spec.label(),
            spec.dimension()
        )));
    }
    Ok(out)
}

/// Convenience: the representation and spec for a named character.
pub fn lie_spec<'a>(
    table: &'a CharacterTable,
    family: LieFamily,
    chi_name: &str,
) -> Result<(LieSpec<'a>, Representation)> {
    let chi = table.index(chi_name)?;
    let spec = LieSpec::new(family, table, chi)?;
    Ok((spec, representation(table, chi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::{character_table, cover_character_table, GroupSpec};

    fn decomposition(spec: GroupSpec, fam: LieFamily, name: &str) -> String {
        let t = character_table(spec).unwrap();
        let s = LieSpec::new(fam, &t, t.index(name).unwrap()).unwrap();
        lie_character(&s).unwrap().decomposition_string()
    }

    #[test]
    fn character_decompositions() {
        assert_eq!(
            decomposition(GroupSpec::icosahedral(), LieFamily::So, "Y6"),
            "Y4+Y5"
        );
        assert_eq!(
            decomposition(GroupSpec::octahedral(), LieFamily::Sp, "O8"),
            "O2+O6+2O7"
        );
        assert_eq!(
            decomposition(GroupSpec::tetrahedral(), LieFamily::Sl, "T7"),
            "T2+T3+2T7"
        );
        assert_eq!(
            decomposition(GroupSpec::dihedral(5), LieFamily::Sl, "psi1"),
            "chi2+psi2"
        );
        assert!(LieSpec::new(
            LieFamily::So,
            &character_table(GroupSpec::octahedral()).unwrap(),
            7
        )
        .is_err());
    }

    #[test]
    fn multiplicities() {
        let t = character_table(GroupSpec::octahedral()).unwrap();
        let o8 = t.index("O8").unwrap();
        assert_eq!(eigenvalue_multiplicities(&t, o8, 1).unwrap(), vec![2, 1, 1]);
        let o7 = t.index("O7").unwrap();
        assert_eq!(eigenvalue_multiplicities(&t, o7, 2).unwrap(), vec![2, 1]);
        assert_eq!(eigenvalue_multiplicities(&t, 0, 0).unwrap(), vec![1]);
    }

    #[test]
    fn bilinear_forms() {
        let t = character_table(GroupSpec::dihedral(3)).unwrap();
        let rep = representation(&t, t.index("psi1").unwrap()).unwrap();
        let b = invariant_bilinear_form(&t, &rep).unwrap().unwrap();
        assert_eq!(b.transpose(), b);
        let t = character_table(GroupSpec::tetrahedral()).unwrap();
        let rep = representation(&t, t.index("T2").unwrap()).unwrap();
        assert!(invariant_bilinear_form(&t, &rep).unwrap().is_none());
        let t = character_table(GroupSpec::octahedral()).unwrap();
        let rep = representation(&t, t.index("O4").unwrap()).unwrap();
        let b = invariant_bilinear_form(&t, &rep).unwrap().unwrap();
        assert_eq!(
            b.transpose(),
            b.scale(&Cyclotomic::from_int(t.conductor(), -1))
        );
    }

    #[test]
    fn fixed_subalgebras() {
        let t = character_table(GroupSpec::icosahedral()).unwrap();
        let (sl5, _) = lie_spec(&t, LieFamily::Sl, "Y8").unwrap();
        let c = fixed_lie_subalgebra(&sl5, 2).unwrap();
        assert_eq!((c.normal_form().as_str(), c.dimension()), ("sl3+sl2+C", 12));
        let (sp6, _) = lie_spec(&t, LieFamily::Sp, "Y9").unwrap();
        let c = fixed_lie_subalgebra(&sp6, 2).unwrap();
        assert_eq!((c.normal_form().as_str(), c.dimension()), ("sl3+C", 9));
        let tt = character_table(GroupSpec::tetrahedral()).unwrap();
        let (so3, _) = lie_spec(&tt, LieFamily::So, "T7").unwrap();
        for i in 0..3 {
            assert_eq!(fixed_lie_subalgebra(&so3, i).unwrap().normal_form(), "C");
        }
    }

    #[test]
    fn bases_and_conjugation() {
        let cases = [
            (GroupSpec::dihedral(4), LieFamily::Sl, "psi1", 3),
            (GroupSpec::icosahedral(), LieFamily::So, "Y4", 3),
            (GroupSpec::tetrahedral(), LieFamily::Sp, "T4", 3),
            (GroupSpec::octahedral(), LieFamily::Sp, "O8", 10),
        ];
        for (g, fam, name, dim) in cases {
            let t = cover_character_table(g).unwrap();
            let (spec, rep) = lie_spec(&t, fam, name).unwrap();
            let basis = basis_of_subalgebra(&spec, &rep).unwrap();
            assert_eq!(basis.len(), dim);
            for &gen in t.group().generators() {
                let act = conjugation_action(&basis, rep.matrix(gen)).unwrap();
                assert!(act.det().is_one(), "{}", spec.label());
            }
            for i in 0..3 {
                let direct = fixed_dimension_direct(&spec, &rep, i).unwrap();
                let d = fixed_lie_subalgebra(&spec, i).unwrap().dimension();
                assert_eq!(direct, d);
                assert_eq!(fixed_dimension_from_character(&spec, i).unwrap(), d);
            }
        }
    }
}
