use alia_core::exactnum::Cyclotomic;
use alia_core::forms::{GroundForms, OrbitType, Pole, ProjectivePoint};
use alia_core::grouprep::{character_table, cover_character_table, CharacterTable, GroupSpec};
use anyhow::Result;

use crate::{GroupArgs, Usage};

pub fn group(kind: &str, n: Option<u32>) -> Result<GroupSpec> {
    Ok(GroupSpec::parse(kind, n)?)
}

pub fn table(args: &GroupArgs) -> Result<CharacterTable> {
    let spec = group(&args.group, args.n)?;
    Ok(if args.cover { cover_character_table(spec)? } else { character_table(spec)? })
}

pub fn character(t: &CharacterTable, name: &str) -> Result<usize> {
    t.index(name).map_err(|_| {
        let names: Vec<&str> = (0..t.characters().len()).map(|c| t.name(c)).collect();
        Usage(format!("{} has no character {name:?}; available: {}", t.spec().label(), names.join(", "))).into()
    })
}

/// "p" or "p/q".
pub fn rational(s: &str) -> Result<(i64, i64)> {
    let bad = || Usage(format!("expected a rational p or p/q, got {s:?}"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(Usage(format!("zero denominator in {s:?}")).into());
    }
    Ok((p, q))
}

/// Dihedral pole parameters: the exceptional orbits, or generic:CA,CB.
pub fn dihedral_pole(s: &str) -> Result<(Cyclotomic, Cyclotomic)> {
    let frac = |(p, q): (i64, i64)| Cyclotomic::from_frac(1, p, q);
    if let Some(rest) = s.strip_prefix("generic:") {
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| Usage(format!("expected generic:CA,CB, got {s:?}")))?;
        return Ok((frac(rational(a)?), frac(rational(b)?)));
    }
    match OrbitType::parse(s)? {
        OrbitType::A => Ok((frac((1, 1)), frac((0, 1)))),
        OrbitType::B => Ok((frac((0, 1)), frac((1, 1)))),
        OrbitType::C => Ok((frac((-1, 1)), frac((1, 1)))),
        OrbitType::Generic => Err(Usage("a generic pole needs parameters: generic:CA,CB".into()).into()),
    }
}

pub fn pole(s: &str, gf: &GroundForms) -> Result<Pole> {
    let n = gf.forms[0].conductor();
    if let Some(rest) = s.strip_prefix("generic:") {
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| Usage(format!("expected generic:CA,CB, got {s:?}")))?;
        let (a, b) = (rational(a)?, rational(b)?);
        return Ok(Pole::from_parameters(gf, Cyclotomic::from_frac(n, a.0, a.1), Cyclotomic::from_frac(n, b.0, b.1))?);
    }
    match OrbitType::parse(s)?.index() {
        Some(i) => Ok(Pole::exceptional(gf, i)?),
        None => Err(Usage("a generic pole needs parameters: generic:CA,CB".into()).into()),
    }
}

/// "inf", an exceptional orbit name (its first point), or a rational.
pub fn point(s: &str, gf: &GroundForms) -> Result<ProjectivePoint> {
    let n = gf.forms[0].conductor();
    let t = s.trim().to_ascii_lowercase();
    if t == "inf" || t == "infinity" {
        return Ok(ProjectivePoint::infinity(n));
    }
    if let Ok(o) = OrbitType::parse(&t) {
        if let Some(i) = o.index() {
            return gf
                .orbits
                .get(i)
                .and_then(|orb| orb.first().cloned())
                .ok_or_else(|| Usage(format!("{} has no orbit {t}", gf.spec.label())).into());
        }
    }
    let (p, q) = rational(s)?;
    Ok(ProjectivePoint::finite(Cyclotomic::from_frac(n, p, q)))
}

pub fn list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Usage(format!("expected a list like 3,3, got {s:?}")).into()))
        .collect()
}
