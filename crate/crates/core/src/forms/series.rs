use num_bigint::BigInt;
use serde::Serialize;

use crate::exactnum::{Cyclotomic, Rational};
use crate::grouprep::{CharacterTable, GroupKind, GroupSpec};
use crate::{Error, Result};

/// A rational generating function N(t)/Π(1 − t^{e_k}).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub numerator: Vec<i64>,
    pub denominator: Vec<u32>,
}

impl ClosedForm {
    pub fn expand(&self, bound: usize) -> Vec<i64> {
        let mut c = vec![0i64; bound + 1];
        for (k, &v) in self.numerator.iter().enumerate() {
            if k <= bound {
                c[k] = v;
            }
        }
        for &e in &self.denominator {
            let e = e as usize;
            for k in e..=bound {
                c[k] += c[k - e];
            }
        }
        c
    }
}

impl std::fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let num: Vec<String> = self
            .numerator
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                _ if c == 1 => format!("t^{k}"),
                _ => format!("{c}*t^{k}"),
            })
            .collect();
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|e| format!("(1-t^{e})"))
            .collect();
        write!(f, "({})/({})", num.join("+"), den.join("*"))
    }
}

/// Truncated Poincaré series with an optional closed form.
#[derive(Clone, Debug, Serialize)]
pub struct PoincareSeries {
    pub coefficients: Vec<u64>,
    pub closed_form: Option<ClosedForm>,
}

impl PoincareSeries {
    pub fn coefficient(&self, d: usize) -> u64 {
        self.coefficients.get(d).copied().unwrap_or(0)
    }

    /// Does the closed form, if any, reproduce all stored coefficients?
    pub fn matches_closed_form(&self) -> Option<bool> {
        let cf = self.closed_form.as_ref()?;
        let e = cf.expand(self.coefficients.len().saturating_sub(1));
        Some(
            e.iter()
                .zip(&self.coefficients)
                .all(|(&a, &b)| a >= 0 && a as u64 == b),
        )
    }

    /// Keep only the degrees divisible by d.
    pub fn prehomogenise(&self, d: usize) -> Vec<u64> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % d == 0 { c } else { 0 })
            .collect()
    }
}

/// P(R^χ, t) = (χ(1)/|G|) Σ_g χ(g)/det(1 − t g), expanded to t^bound.
pub fn molien(table: &CharacterTable, chi: usize, bound: usize) -> Result<PoincareSeries> {
    let g = table.group();
    let n = table.conductor();
    let mut acc = vec![Cyclotomic::zero(n); bound + 1];
    for class in table.classes() {
        let m = g.element(class.representative);
        let tr = m.trace();
        let det = m.det();
        let weight = table
            .value(chi, class.representative)
            .scale_int(class.members.len() as i64);
        // 1/(1 − tr·t + det·t²) by its linear recurrence
        let mut prev = Cyclotomic::zero(n);
        let mut cur = Cyclotomic::one(n);
        for slot in acc.iter_mut() {
            *slot += &(&weight * &cur);
            let next = &(&tr * &cur) - &(&det * &prev);
            prev = cur;
            cur = next;
        }
    }
    let scale = Rational::new(BigInt::from(table.degree(chi)), BigInt::from(g.order()));
    let mut coefficients = Vec::with_capacity(bound + 1);
    for (d, v) in acc.iter().enumerate() {
        let v = v.scale(&scale);
        let k = v.to_i64().filter(|&k| k >= 0).ok_or_else(|| {
            Error::Inconsistent(format!(
                "Molien coefficient {v} at degree {d} is not a natural number"
            ))
        })?;
        coefficients.push(k as u64);
    }
    let closed_form = if chi == table.trivial() {
        catalogued_ring(table.spec()).map(|r| r.closed_form())
    } else {
        None
    };
    Ok(PoincareSeries {
        coefficients,
        closed_form,
    })
}

/// Known structure of an invariant ring: primary and secondary degrees.
#[derive(Clone, Debug, Serialize)]
pub struct CataloguedRing {
    pub primary: (u32, u32),
    pub secondary: Vec<u32>,
}

impl CataloguedRing {
    pub fn closed_form(&self) -> ClosedForm {
        let top = *self.secondary.iter().max().unwrap_or(&0) as usize;
        let mut numerator = vec![0i64; top + 1];
        for &s in &self.secondary {
            numerator[s as usize] += 1;
        }
        ClosedForm {
            numerator,
            denominator: vec![self.primary.0, self.primary.1],
        }
    }
}

/// Invariant rings of the standard cyclic and dihedral groups and of the
/// binary polyhedral groups.
pub fn catalogued_ring(spec: GroupSpec) -> Option<CataloguedRing> {
    let n = spec.n;
    let (primary, secondary) = match spec.kind {
        GroupKind::Cyclic => ((2, n), vec![0, n]),
        GroupKind::Dihedral => ((2, n), vec![0]),
        GroupKind::Tetrahedral => ((6, 8), vec![0, 12]),
        GroupKind::Octahedral => ((8, 12), vec![0, 18]),
        GroupKind::Icosahedral => ((12, 20), vec![0, 30]),
    };
    Some(CataloguedRing { primary, secondary })
}

#[derive(Clone, Debug, Serialize)]
pub struct StanleyReport {
    pub primary: (u32, u32),
    pub k: u64,
    pub secondary_degrees: Vec<u32>,
    pub first_identity: bool,
    /// `None` when the group is not contained in SL₂ and the identity does
    /// not apply.
    pub second_identity: Option<bool>,
    pub note: Option<String>,
}

impl StanleyReport {
    pub fn passed(&self) -> bool {
        self.first_identity && self.second_identity.unwrap_or(true)
    }
}

/// Check k/χ(1)² = e₁e₂/|G| and (2/k)Σ|ρ_i| = e₁+e₂−2, with the secondary
/// degrees read off from P(R^χ,t)(1−t^{e₁})(1−t^{e₂}).
pub fn stanley_check(
    table: &CharacterTable,
    chi: usize,
    primary: (u32, u32),
) -> Result<StanleyReport> {
    let (e1, e2) = primary;
    let order = table.group().order();
    let bound = (e1 + e2) as usize + order + 2;
    let series = molien(table, chi, bound)?;
    let mut num: Vec<i64> = series.coefficients.iter().map(|&c| c as i64).collect();
    for e in [e1 as usize, e2 as usize] {
        for k in (e..num.len()).rev() {
            num[k] -= num[k - e];
        }
    }
    let cut = (e1 + e2) as usize;
    if num.iter().any(|&c| c < 0) || num[cut..].iter().any(|&c| c != 0) {
        return Err(Error::InvalidInput(format!(
            "degrees ({e1},{e2}) do not give a free decomposition of {}",
            table.name(chi)
        )));
    }
    let mut secondary = Vec::new();
    for (d, &c) in num.iter().enumerate() {
        for _ in 0..c {
            secondary.push(d as u32);
        }
    }
    let k = secondary.len() as u64;
    let deg = table.degree(chi) as u64;
    let first_identity = k * order as u64 == deg * deg * (e1 as u64) * (e2 as u64);
    let in_sl2 = table.group().elements().iter().all(|m| m.det().is_one());
    let (second_identity, note) = if in_sl2 {
        let sum: u64 = secondary.iter().map(|&d| d as u64).sum();
        (Some(2 * sum == k * (e1 + e2 - 2) as u64), None)
    } else {
        (
            None,
            Some("group contains pseudoreflections; second identity skipped".to_string()),
        )
    };
    Ok(StanleyReport {
        primary,
        k,
        secondary_degrees: secondary,
        first_identity,
        second_identity,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::reynolds_basis;
    use crate::grouprep::character_table;

    #[test]
    fn closed_forms_match() {
        let mut specs = vec![
            GroupSpec::tetrahedral(),
            GroupSpec::octahedral(),
            GroupSpec::icosahedral(),
        ];
        specs.extend((1..7).map(GroupSpec::cyclic));
        specs.extend((2..7).map(GroupSpec::dihedral));
        for spec in specs {
            let t = character_table(spec).unwrap();
            let s = molien(&t, t.trivial(), 2 * spec.order() as usize).unwrap();
            assert_eq!(s.matches_closed_form(), Some(true), "{}", spec.label());
        }
    }

    #[test]
    fn tetrahedral_examples() {
        let t = character_table(GroupSpec::tetrahedral()).unwrap();
        let s = molien(&t, t.trivial(), 5).unwrap();
        assert_eq!(s.coefficients, vec![1, 0, 0, 0, 0, 0]);
        let rep = stanley_check(&t, t.trivial(), (6, 8)).unwrap();
        assert_eq!(rep.secondary_degrees, vec![0, 12]);
        assert!(rep.passed());
        let t2 = t.index("T2").unwrap();
        assert_eq!(reynolds_basis(&t, t2, 4).len(), 1);
    }

    #[test]
    fn dihedral_skips_second_identity() {
        let t = character_table(GroupSpec::dihedral(3)).unwrap();
        let rep = stanley_check(&t, t.trivial(), (2, 3)).unwrap();
        assert!(rep.first_identity);
        assert_eq!(rep.second_identity, None);
    }

    #[test]
    fn reynolds_dimension_is_molien_coefficient() {
        for spec in [GroupSpec::dihedral(4), GroupSpec::tetrahedral()] {
            let t = character_table(spec).unwrap();
            let bound = spec.order() as usize;
            for chi in 0..t.characters().len() {
                let s = molien(&t, chi, bound).unwrap();
                for d in 0..=bound {
                    assert_eq!(
                        reynolds_basis(&t, chi, d as u32).len() as u64,
                        s.coefficient(d)
                    );
                }
            }
        }
    }
}
