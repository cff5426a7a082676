use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::{act, Form};
use crate::exactnum::{Cyclotomic, Matrix};
use crate::grouprep::{preferred_cover, BinaryGroup, GroupKind, GroupSpec, ORBIT_NAMES};
use crate::{Error, Result};

/// A point (x : y) of the projective line; λ = x/y, ∞ = (1 : 0).
#[derive(Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    x: Cyclotomic,
    y: Cyclotomic,
}

type PointKey = ((u32, Vec<BigInt>, BigInt), (u32, Vec<BigInt>, BigInt));

impl ProjectivePoint {
    pub fn new(x: Cyclotomic, y: Cyclotomic) -> Result<Self> {
        if y.is_zero() {
            if x.is_zero() {
                return Err(Error::InvalidInput(
                    "(0 : 0) is not a projective point".into(),
                ));
            }
            let n = x.conductor();
            return Ok(ProjectivePoint {
                x: Cyclotomic::one(n),
                y: Cyclotomic::zero(n),
            });
        }
        let n = x.conductor().max(y.conductor());
        Ok(ProjectivePoint {
            x: &x / &y,
            y: Cyclotomic::one(n),
        })
    }

    pub fn infinity(n: u32) -> Self {
        ProjectivePoint {
            x: Cyclotomic::one(n),
            y: Cyclotomic::zero(n),
        }
    }

    /// The finite point λ = (λ : 1).
    pub fn finite(lambda: Cyclotomic) -> Self {
        let n = lambda.conductor();
        ProjectivePoint {
            x: lambda,
            y: Cyclotomic::one(n),
        }
    }

    pub fn x(&self) -> &Cyclotomic {
        &self.x
    }

    pub fn y(&self) -> &Cyclotomic {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    /// Image under the linear map g acting on the column (x, y)ᵀ.
    pub fn apply(&self, g: &Matrix) -> ProjectivePoint {
        let v = g.apply(&[self.x.clone(), self.y.clone()]);
        ProjectivePoint::new(v[0].clone(), v[1].clone()).expect("invertible map")
    }

    /// The linear form y·X − x·Y vanishing at this point.
    pub fn vanishing_form(&self) -> Form {
        Form::linear(self.y.clone(), -&self.x)
    }

    pub fn lift(&self, n: u32) -> ProjectivePoint {
        ProjectivePoint {
            x: self.x.at_least(n),
            y: self.y.at_least(n),
        }
    }

    fn key(&self, n: u32) -> PointKey {
        (self.x.at_least(n).key(), self.y.at_least(n).key())
    }

    pub fn is_zero_of(&self, f: &Form) -> bool {
        f.eval(&self.x, &self.y).is_zero()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.x)
        }
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.x, self.y)
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.x, &self.y].serialize(s)
    }
}

/// Orbit of a point under the group, in order of first appearance.
pub fn orbit(group: &BinaryGroup, p: &ProjectivePoint) -> Vec<ProjectivePoint> {
    let n = group.conductor();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in group.elements() {
        let q = p.apply(g).lift(n);
        if seen.insert(q.key(n)) {
            out.push(q);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitType {
    A,
    B,
    C,
    Generic,
}

impl OrbitType {
    pub fn exceptional(i: usize) -> Self {
        [OrbitType::A, OrbitType::B, OrbitType::C][i]
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            OrbitType::A => Some(0),
            OrbitType::B => Some(1),
            OrbitType::C => Some(2),
            OrbitType::Generic => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(OrbitType::A),
            "b" => Ok(OrbitType::B),
            "c" => Ok(OrbitType::C),
            "generic" => Ok(OrbitType::Generic),
            _ => Err(Error::InvalidInput(format!("unknown orbit type {s:?}"))),
        }
    }
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(i) => write!(f, "{}", ORBIT_NAMES[i]),
            None => write!(f, "generic"),
        }
    }
}

/// The forms F_i vanishing on the exceptional orbits, with the linear
/// relation Σ r_i F_i^{ν_i} = 0 among their powers.
#[derive(Clone, Debug, Serialize)]
pub struct GroundForms {
    pub spec: GroupSpec,
    pub forms: Vec<Form>,
    pub nu: Vec<u32>,
    /// Coefficients r_i; all ones when the scaling could be normalised.
    pub relation: Vec<Cyclotomic>,
    pub orbits: Vec<Vec<ProjectivePoint>>,
}

impl GroundForms {
    pub fn form(&self, i: usize) -> &Form {
        &self.forms[i]
    }

    /// F_i^{ν_i}, an invariant of degree |G|.
    pub fn power(&self, i: usize) -> Form {
        self.forms[i].pow(self.nu[i])
    }

    pub fn relation_residual(&self) -> Form {
        let mut acc = Form::zero(self.spec.order(), self.forms[0].conductor());
        for (i, r) in self.relation.iter().enumerate() {
            acc = &acc + &self.power(i).scale(r);
        }
        acc
    }

    /// Σ r_i F_i^{ν_i} = 0 (vacuous for cyclic groups).
    pub fn relation_holds(&self) -> bool {
        self.relation_residual().is_zero()
    }

    pub fn relation_is_plain_sum(&self) -> bool {
        self.relation.iter().all(|r| r.is_one())
    }

    /// F_i vanishes on Γ_i, has degree |Γ_i| and a nonzero gradient at every
    /// point of Γ_i, so its zeros are exactly Γ_i and all simple.
    pub fn has_simple_zeros_on_orbits(&self) -> bool {
        self.forms.iter().zip(&self.orbits).all(|(f, orb)| {
            let dx = f.derivative_x();
            let dy = f.derivative_y();
            f.degree() as usize == orb.len()
                && orb
                    .iter()
                    .all(|p| p.is_zero_of(f) && !(p.is_zero_of(&dx) && p.is_zero_of(&dy)))
        })
    }

    /// act(g, F_i^{ν_i}) = F_i^{ν_i} for all generators, checked as
    /// act(g, F_i) = λF_i with λ^{ν_i} = 1.
    pub fn powers_invariant(&self, group: &BinaryGroup) -> bool {
        self.forms.iter().zip(&self.nu).all(|(f, &v)| {
            group
                .generators()
                .iter()
                .all(|&g| match act(group.element(g), f).ratio_to(f) {
                    Some(l) => l.pow(v).is_one(),
                    None => false,
                })
        })
    }

    /// Exceptional orbit containing μ, if any.
    pub fn orbit_type_of(&self, mu: &ProjectivePoint) -> OrbitType {
        (0..self.forms.len())
            .find(|&i| mu.is_zero_of(&self.forms[i]))
            .map_or(OrbitType::Generic, OrbitType::exceptional)
    }
}

fn eigen_point(g: &Matrix, ev: &Cyclotomic) -> Option<ProjectivePoint> {
    let n = g.conductor();
    let shifted = g - &Matrix::identity(2, n).scale(ev);
    let k = shifted.kernel();
    let v = k.first()?;
    ProjectivePoint::new(v[0].clone(), v[1].clone()).ok()
}

fn product_form(points: &[ProjectivePoint], n: u32) -> Form {
    points
        .iter()
        .fold(Form::one(n), |acc, p| &acc * &p.vanishing_form())
}

fn disjoint(a: &[ProjectivePoint], b: &[ProjectivePoint], n: u32) -> bool {
    let ka: HashSet<_> = a.iter().map(|p| p.key(n)).collect();
    b.iter().all(|p| !ka.contains(&p.key(n)))
}

/// Ground forms for the group's natural representation.
pub fn ground_forms_on(group: &BinaryGroup) -> Result<GroundForms> {
    let spec = group.spec();
    let n = group.conductor();
    let nu = spec.nu();
    let one = Cyclotomic::one(n);
    match spec.kind {
        GroupKind::Cyclic => {
            let orbits = vec![
                vec![ProjectivePoint::infinity(n)],
                vec![ProjectivePoint::finite(Cyclotomic::zero(n))],
            ];
            Ok(GroundForms {
                spec,
                forms: vec![Form::y(n), Form::x(n)],
                nu,
                relation: vec![],
                orbits,
            })
        }
        GroupKind::Dihedral => {
            let m = spec.n;
            let half = Cyclotomic::from_frac(n, 1, 2);
            let xm = Form::x(n).pow(m);
            let ym = Form::y(n).pow(m);
            let forms = vec![
                &Form::x(n) * &Form::y(n),
                (&xm + &ym).scale(&half),
                (&xm - &ym).scale(&half),
            ];
            let seeds = [
                ProjectivePoint::infinity(n),
                ProjectivePoint::finite(Cyclotomic::root_of_unity(2 * m, 1).lift_conductor(n)?),
                ProjectivePoint::finite(one.clone()),
            ];
            let orbits: Vec<_> = seeds.iter().map(|p| orbit(group, p)).collect();
            let relation = vec![one.clone(), -&one, one];
            Ok(GroundForms {
                spec,
                forms,
                nu,
                relation,
                orbits,
            })
        }
        _ => {
            let orbits = exceptional_orbits(group)?;
            let forms: Vec<Form> = orbits.iter().map(|o| product_form(o, n)).collect();
            let mut gf = GroundForms {
                spec,
                forms,
                nu,
                relation: vec![],
                orbits,
            };
            let rel = relation_coefficients(&gf)?;
            match normalising_scalars(&rel, &gf.nu) {
                Some(scal) => {
                    gf.forms = gf
                        .forms
                        .iter()
                        .zip(&scal)
                        .map(|(f, s)| f.scale(s))
                        .collect();
                    gf.relation = vec![one.clone(), one.clone(), one];
                }
                None => gf.relation = rel,
            }
            if !gf.relation_holds() {
                return Err(Error::Inconsistent("ground form relation fails".into()));
            }
            Ok(gf)
        }
    }
}

/// Ground forms of the preferred cover of `spec`.
pub fn ground_forms(spec: GroupSpec) -> Result<GroundForms> {
    ground_forms_on(&preferred_cover(spec)?)
}

/// Orbits through the fixed points of g_a, g_b, g_c. Each seed is the
/// eigenline for e^{iπ/ν}; the other eigenline is tried when orbits collide.
fn exceptional_orbits(group: &BinaryGroup) -> Result<Vec<Vec<ProjectivePoint>>> {
    let spec = group.spec();
    let n = group.conductor();
    let sizes = spec.orbit_sizes();
    let mut candidates: Vec<Vec<Vec<ProjectivePoint>>> = Vec::new();
    for (i, &nu) in spec.nu().iter().enumerate() {
        let g = group.element(group.generator(i));
        let mut opts = Vec::new();
        for k in [1i64, -1] {
            let ev = Cyclotomic::root_of_unity(2 * nu, k).lift_conductor(n)?;
            if let Some(p) = eigen_point(g, &ev) {
                let o = orbit(group, &p);
                if o.len() == sizes[i] as usize {
                    opts.push(o);
                }
            }
        }
        candidates.push(opts);
    }
    for a in &candidates[0] {
        for b in &candidates[1] {
            if !disjoint(a, b, n) {
                continue;
            }
            for c in &candidates[2] {
                if disjoint(a, c, n) && disjoint(b, c, n) {
                    return Ok(vec![a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }
    Err(Error::Inconsistent(format!(
        "no disjoint exceptional orbits for {}",
        spec.label()
    )))
}

/// (r_a, r_b, 1) with r_a F_a^{ν_a} + r_b F_b^{ν_b} + F_c^{ν_c} = 0.
fn relation_coefficients(gf: &GroundForms) -> Result<Vec<Cyclotomic>> {
    let a = gf.power(0).to_dense();
    let b = gf.power(1).to_dense();
    let c = gf.power(2).to_dense();
    let m = Matrix::from_rows(
        a.iter()
            .zip(&b)
            .map(|(x, y)| vec![x.clone(), y.clone()])
            .collect(),
    );
    let rhs: Vec<Cyclotomic> = c.iter().map(|v| -v).collect();
    let sol = m
        .solve(&rhs)
        .ok_or_else(|| Error::Inconsistent("powers of ground forms are independent".into()))?;
    let one = Cyclotomic::one(gf.forms[0].conductor());
    Ok(vec![sol[0].clone(), sol[1].clone(), one])
}

/// Scalars s_i with s_i^{ν_i} = t·r_i for some t of the form r_a^p r_b^q;
/// then the rescaled forms satisfy Σ F_i^{ν_i} = 0. Exact ν_i-th powers are
/// pulled out first so root extraction only sees small exponents.
fn normalising_scalars(rel: &[Cyclotomic], nu: &[u32]) -> Option<Vec<Cyclotomic>> {
    let bound: u32 = nu
        .iter()
        .fold(1, |acc, &v| num_integer::Integer::lcm(&acc, &v));
    // a first pass with rational remainders only, where root extraction is cheap
    for rational_only in [true, false] {
        for total in 0..2 * bound {
            'split: for p in 0..=total {
                let q = total - p;
                let ex: Vec<[u32; 2]> = (0..nu.len())
                    .map(|i| [p + u32::from(i == 0), q + u32::from(i == 1)])
                    .collect();
                // roots of the small remainders first, the large outer powers only on success
                let mut roots = Vec::with_capacity(nu.len());
                for (i, &v) in nu.iter().enumerate() {
                    let mut inner = &rel[0].pow(ex[i][0] % v) * &rel[1].pow(ex[i][1] % v);
                    if i == 2 {
                        inner = &inner * &rel[2];
                    }
                    if rational_only && !inner.is_rational() {
                        continue 'split;
                    }
                    match inner.nth_root(v) {
                        Some(s) => roots.push(s),
                        None => continue 'split,
                    }
                }
                let out = roots
                    .iter()
                    .zip(nu)
                    .zip(&ex)
                    .map(|((s, &v), e)| &(&rel[0].pow(e[0] / v) * &rel[1].pow(e[1] / v)) * s)
                    .collect();
                return Some(out);
            }
        }
    }
    None
}

/// The orbit of μ, the form vanishing on it and its type.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitForm {
    pub form: Form,
    pub points: Vec<ProjectivePoint>,
    pub orbit_type: OrbitType,
}

pub fn form_vanishing_on_orbit(
    group: &BinaryGroup,
    gf: &GroundForms,
    mu: &ProjectivePoint,
) -> OrbitForm {
    let n = group.conductor();
    let points = orbit(group, &mu.lift(n));
    OrbitForm {
        form: product_form(&points, n),
        orbit_type: gf.orbit_type_of(mu),
        points,
    }
}

/// The orbit Γ carrying the poles, with F_Γ^{ν_Γ} = c_a F_a^{ν_a} + c_b F_b^{ν_b}.
#[derive(Clone, Debug, Serialize)]
pub struct Pole {
    pub orbit_type: OrbitType,
    pub ca: Cyclotomic,
    pub cb: Cyclotomic,
    /// F_Γ.
    pub form: Form,
    /// ν_Γ.
    pub nu: u32,
}

impl Pole {
    pub fn exceptional(gf: &GroundForms, i: usize) -> Result<Pole> {
        if i >= gf.forms.len() {
            return Err(Error::InvalidInput(format!("no exceptional orbit {i}")));
        }
        let n = gf.forms[0].conductor();
        let (ca, cb) = match i {
            0 => (Cyclotomic::one(n), Cyclotomic::zero(n)),
            1 => (Cyclotomic::zero(n), Cyclotomic::one(n)),
            _ => {
                if gf.relation.len() != 3 {
                    return Err(Error::InvalidInput(
                        "cyclic groups have two exceptional orbits".into(),
                    ));
                }
                let rc = &gf.relation[2];
                (-&(&gf.relation[0] / rc), -&(&gf.relation[1] / rc))
            }
        };
        Ok(Pole {
            orbit_type: OrbitType::exceptional(i),
            ca,
            cb,
            form: gf.forms[i].clone(),
            nu: gf.nu[i],
        })
    }

    /// Classify the parameters (c_a, c_b) and build the pole.
    pub fn from_parameters(gf: &GroundForms, ca: Cyclotomic, cb: Cyclotomic) -> Result<Pole> {
        if ca.is_zero() && cb.is_zero() {
            return Err(Error::InvalidInput("pole parameters (0, 0)".into()));
        }
        if gf.forms.len() != 3 {
            return Err(Error::InvalidInput(
                "pole parameters need a non-cyclic group".into(),
            ));
        }
        let f = &gf.power(0).scale(&ca) + &gf.power(1).scale(&cb);
        for i in 0..3 {
            let p = gf.power(i);
            if let Some(s) = f.ratio_to(&p) {
                let mut pole = Pole::exceptional(gf, i)?;
                // keep F_Γ^{ν_Γ} equal to the supplied combination
                let root = s.nth_root(pole.nu);
                pole.ca = ca;
                pole.cb = cb;
                match root {
                    Some(r) => pole.form = pole.form.scale(&r),
                    None => {
                        return Err(Error::InvalidInput(format!(
                            "pole scaling {s} has no {}-th root",
                            pole.nu
                        )))
                    }
                }
                return Ok(pole);
            }
        }
        Ok(Pole {
            orbit_type: OrbitType::Generic,
            ca,
            cb,
            form: f,
            nu: 1,
        })
    }

    /// F_Γ^{ν_Γ}, a degree-|G| invariant.
    pub fn denominator(&self) -> Form {
        self.form.pow(self.nu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::{build_binary_group, standard_group};

    fn check(spec: GroupSpec) -> GroundForms {
        let g = preferred_cover(spec).unwrap();
        let gf = ground_forms_on(&g).unwrap();
        let degs: Vec<u32> = gf.forms.iter().map(|f| f.degree()).collect();
        assert_eq!(degs, spec.orbit_sizes(), "{}", spec.label());
        assert!(gf.has_simple_zeros_on_orbits(), "{}", spec.label());
        assert!(gf.relation_holds());
        assert!(gf.powers_invariant(&g), "{}", spec.label());
        gf
    }

    #[test]
    fn polyhedral_ground_forms() {
        for spec in [
            GroupSpec::tetrahedral(),
            GroupSpec::octahedral(),
            GroupSpec::icosahedral(),
        ] {
            let gf = check(spec);
            assert!(
                gf.relation_is_plain_sum(),
                "{} relation {:?}",
                spec.label(),
                gf.relation
            );
        }
    }

    #[test]
    fn dihedral_ground_forms() {
        for m in 2..8 {
            let gf = check(GroupSpec::dihedral(m));
            assert_eq!(gf.form(0).to_string(), "X*Y");
        }
    }

    #[test]
    fn orbit_types() {
        let spec = GroupSpec::dihedral(3);
        let g = standard_group(spec).unwrap();
        let gf = ground_forms_on(&g).unwrap();
        let n = g.conductor();
        let o = form_vanishing_on_orbit(&g, &gf, &ProjectivePoint::finite(Cyclotomic::zero(n)));
        assert_eq!(o.orbit_type, OrbitType::A);
        assert!(o.form.is_proportional(gf.form(0)));
        let o = form_vanishing_on_orbit(&g, &gf, &ProjectivePoint::finite(Cyclotomic::one(n)));
        assert_eq!(o.points.len(), 3);
        let o = form_vanishing_on_orbit(
            &g,
            &gf,
            &ProjectivePoint::finite(Cyclotomic::from_int(n, 2)),
        );
        assert_eq!((o.orbit_type, o.form.degree()), (OrbitType::Generic, 6));
        let t = build_binary_group(GroupSpec::tetrahedral()).unwrap();
        let gt = ground_forms_on(&t).unwrap();
        let o = form_vanishing_on_orbit(
            &t,
            &gt,
            &ProjectivePoint::finite(Cyclotomic::from_int(12, 3)),
        );
        assert_eq!(o.form.degree(), 12);
    }

    #[test]
    fn dihedral_poles() {
        let gf = ground_forms(GroupSpec::dihedral(3)).unwrap();
        let n = gf.forms[0].conductor();
        let c = |v| Cyclotomic::from_int(n, v);
        assert_eq!(
            Pole::from_parameters(&gf, c(1), c(0)).unwrap().orbit_type,
            OrbitType::A
        );
        assert_eq!(
            Pole::from_parameters(&gf, c(0), c(1)).unwrap().orbit_type,
            OrbitType::B
        );
        let p = Pole::from_parameters(&gf, c(-1), c(1)).unwrap();
        assert_eq!(p.orbit_type, OrbitType::C);
        assert_eq!(p.denominator(), gf.power(2));
        assert_eq!(
            Pole::from_parameters(&gf, c(2), c(3)).unwrap().orbit_type,
            OrbitType::Generic
        );
    }
}
