//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every check is exact.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use alia_core::alia::*;
use alia_core::exactnum::{q, Cyclotomic, Matrix, Rational};
use alia_core::forms::*;
use alia_core::grouprep::*;
use alia_core::invvec::*;
use alia_core::liebase::*;
use alia_core::rootcoh::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

trait Ctx<T> {
    fn ctx(self, what: impl Display) -> Result<T, String>;
}

impl<T, E: Display> Ctx<T> for Result<T, E> {
    fn ctx(self, what: impl Display) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn polyhedral() -> [GroupSpec; 3] {
    [
        GroupSpec::tetrahedral(),
        GroupSpec::octahedral(),
        GroupSpec::icosahedral(),
    ]
}

fn xy(n: u32, i: u32, j: u32) -> Form {
    Form::monomial(Cyclotomic::one(n), i, j)
}

fn psi_index(name: &str) -> Option<u32> {
    name.strip_prefix("psi").and_then(|s| s.parse().ok())
}

// 1 ------------------------------------------------------------------------

fn character_tables() -> Check {
    let mut specs: Vec<(GroupSpec, bool)> = polyhedral().into_iter().map(|s| (s, true)).collect();
    for n in 1..=12 {
        specs.push((GroupSpec::cyclic(n), false));
        if n >= 2 {
            specs.push((GroupSpec::dihedral(n), false));
        }
    }
    let mut listed = 0;
    for (spec, must_list) in &specs {
        let label = spec.label();
        let t = character_table(*spec).ctx(&label)?;
        let rep = t.check_orthogonality();
        ensure!(rep.passed, "{label}: orthogonality fails at {:?}", rep.violation);
        match t.listed_centralisers() {
            Some(c) => ensure!(c == rep.centralisers.as_slice(), "{label}: centralisers"),
            None => ensure!(!must_list, "{label}: no listed centralisers"),
        }
        for (i, c) in t.characters().iter().enumerate() {
            ensure!(
                !must_list || (c.listed_indicator.is_some() && c.listed_det.is_some()),
                "{label} {}: no listed data",
                c.name
            );
            if let Some(iota) = c.listed_indicator {
                ensure!(t.frobenius_schur(i) == iota, "{label} {}: indicator", c.name);
                listed += 1;
            }
            if let Some(det) = &c.listed_det {
                let d = t.det_character(i).ctx(&c.name)?;
                ensure!(t.name(d) == det, "{label} {}: det {} ≠ {det}", c.name, t.name(d));
            }
        }
    }
    Ok(format!("{} tables, {listed} listed characters", specs.len()))
}

// 2 ------------------------------------------------------------------------

fn molien_series() -> Check {
    let mut specs: Vec<GroupSpec> = polyhedral().to_vec();
    specs.extend((1..=12).map(GroupSpec::cyclic));
    specs.extend((2..=12).map(GroupSpec::dihedral));
    let mut stanley = 0;
    for spec in &specs {
        let label = spec.label();
        let t = character_table(*spec).ctx(&label)?;
        let s = molien(&t, t.trivial(), 2 * spec.order() as usize).ctx(&label)?;
        ensure!(s.matches_closed_form() == Some(true), "{label}: Molien ≠ closed form");
        if let Some(ring) = catalogued_ring(*spec) {
            let rep = stanley_check(&t, t.trivial(), ring.primary).ctx(&label)?;
            ensure!(rep.passed(), "{label}: Stanley identities {rep:?}");
            stanley += 1;
        }
    }
    let y = character_table(GroupSpec::icosahedral()).ctx("Y")?;
    let s = molien(&y, y.trivial(), 120).ctx("Y")?;
    let closed = s.closed_form.as_ref().ok_or("Y: no closed form")?;
    ensure!(
        closed.numerator.iter().enumerate().filter(|(_, &c)| c != 0).map(|(d, _)| d).collect::<Vec<_>>() == [0, 30]
            && closed.denominator == [12, 20],
        "Y closed form {closed:?}"
    );
    Ok(format!("{} groups, {stanley} catalogued rings", specs.len()))
}

// 3 ------------------------------------------------------------------------

fn ground_form_checks() -> Check {
    let mut specs: Vec<GroupSpec> = polyhedral().to_vec();
    specs.extend((2..=12).map(GroupSpec::dihedral));
    for spec in &specs {
        let label = spec.label();
        let g = preferred_cover(*spec).ctx(&label)?;
        let gf = ground_forms_on(&g).ctx(&label)?;
        let degs: Vec<u32> = gf.forms.iter().map(|f| f.degree()).collect();
        ensure!(degs == spec.orbit_sizes(), "{label}: degrees {degs:?}");
        ensure!(gf.has_simple_zeros_on_orbits(), "{label}: zeros");
        ensure!(gf.relation_holds(), "{label}: relation");
        ensure!(gf.powers_invariant(&g), "{label}: F_i^ν_i not invariant");
        if polyhedral().contains(spec) {
            ensure!(gf.relation_is_plain_sum(), "{label}: relation {:?}", gf.relation);
        }
    }
    for nn in 2..=12u32 {
        let gf = ground_forms(GroupSpec::dihedral(nn)).ctx(nn)?;
        let n = gf.forms[0].conductor();
        let half = Cyclotomic::from_frac(n, 1, 2);
        let fb = (&xy(n, nn, 0) + &xy(n, 0, nn)).scale(&half);
        let fc = (&xy(n, nn, 0) - &xy(n, 0, nn)).scale(&half);
        ensure!(gf.form(0) == &xy(n, 1, 1), "D{nn}: F_a = {}", gf.form(0));
        ensure!(gf.form(1) == &fb, "D{nn}: F_b = {}", gf.form(1));
        ensure!(gf.form(2) == &fc, "D{nn}: F_c = {}", gf.form(2));
        let residual = &(&gf.power(0) - &gf.power(1)) + &gf.power(2);
        ensure!(residual.is_zero(), "D{nn}: F_a^N − F_b² + F_c² = {residual}");
    }
    Ok(format!("{} groups", specs.len()))
}

// 4 ------------------------------------------------------------------------

fn dihedral_invariant_vectors() -> Check {
    let (mut pairs, mut free) = (0, 0);
    for nn in 2..=9u32 {
        let t = character_table(GroupSpec::dihedral(nn)).ctx(nn)?;
        let n = t.conductor();
        for chi in 0..t.characters().len() {
            let name = t.name(chi).to_string();
            let Some(j) = psi_index(&name) else { continue };
            let label = format!("D{nn} {name}");
            let module = InvariantModule::new(&t, chi).ctx(&label)?;
            let low = module.invariant_vectors(j).ctx(&label)?;
            let want = VectorOfForms::new(vec![xy(n, j, 0), xy(n, 0, j)], &name).ctx(&label)?;
            ensure!(
                low.len() == 1 && low[0].is_proportional(&want),
                "{label}: degree {j} vectors"
            );
            let high = module.invariant_vectors(nn - j).ctx(&label)?;
            let want =
                VectorOfForms::new(vec![xy(n, 0, nn - j), xy(n, nn - j, 0)], &name).ctx(&label)?;
            let found = if high.len() == 1 {
                high[0].is_proportional(&want)
            } else {
                in_span(&high, &want)
            };
            ensure!(found, "{label}: degree {} vectors", nn - j);
            pairs += 1;
        }
        // degree-|G| generators live on the cover used for the sphere action
        let cover = cover_character_table(GroupSpec::dihedral(nn)).ctx(nn)?;
        for chi in 0..cover.characters().len() {
            let name = cover.name(chi).to_string();
            if psi_index(&name).is_none() || cover.is_spinorial(chi).unwrap_or(false) {
                continue;
            }
            let label = format!("cover of D{nn} {name}");
            let gens = InvariantModule::new(&cover, chi)
                .and_then(|m| m.free_generators())
                .ctx(&label)?;
            ensure!(
                gens.len() == 2 && gens.iter().all(|g| g.degree() == 2 * nn),
                "{label}: free generators"
            );
            free += 1;
        }
    }
    Ok(format!("{pairs} (N, j) pairs, {free} free generating sets"))
}

// 5 ------------------------------------------------------------------------

fn kappa_row(t: &CharacterTable, name: &str, want: [(i64, i64); 3], scaled: [(i64, i64); 3]) -> Result<(), String> {
    let label = format!("{} {name}", t.spec().label());
    let k = t.kappa(t.index(name).ctx(&label)?).ctx(&label)?;
    let to_q = |v: [(i64, i64); 3]| -> Vec<Rational> { v.iter().map(|&(a, b)| q(a, b)).collect() };
    ensure!(k.0 == to_q(want), "{label}: κ = {:?}", k.0);
    ensure!(k.scaled(&t.spec().nu()) == to_q(scaled), "{label}: νκ");
    Ok(())
}

fn determinants_of_invariant_vectors() -> Check {
    let h = (1, 2);
    let z = (0, 1);
    let one = (1, 1);
    let mut rows = 0;
    for nn in 2..=9i64 {
        let t = character_table(GroupSpec::dihedral(nn as u32)).ctx(nn)?;
        kappa_row(&t, "chi2", [z, h, h], [z, one, one])?;
        rows += 1;
        if nn % 2 == 0 {
            kappa_row(&t, "chi3", [h, h, z], [(nn, 2), one, z])?;
            kappa_row(&t, "chi4", [h, z, h], [(nn, 2), z, one])?;
            rows += 2;
        }
        for chi in 0..t.characters().len() {
            let name = t.name(chi).to_string();
            if psi_index(&name).is_some() {
                kappa_row(&t, &name, [one, h, h], [(nn, 1), one, one])?;
                rows += 1;
            }
        }
    }
    let listed: [(GroupSpec, &str, [(i64, i64); 3], [(i64, i64); 3]); 11] = [
        (GroupSpec::tetrahedral(), "T2", [h, h, z], [(3, 2), (3, 2), z]),
        (GroupSpec::tetrahedral(), "T3", [h, h, z], [(3, 2), (3, 2), z]),
        (GroupSpec::tetrahedral(), "T7", [one, one, one], [(3, 1), (3, 1), (2, 1)]),
        (GroupSpec::octahedral(), "O2", [h, z, h], [(2, 1), z, one]),
        (GroupSpec::octahedral(), "O3", [h, one, h], [(2, 1), (3, 1), one]),
        (GroupSpec::octahedral(), "O6", [(3, 2), one, h], [(6, 1), (3, 1), one]),
        (GroupSpec::octahedral(), "O7", [one, one, one], [(4, 1), (3, 1), (2, 1)]),
        (GroupSpec::icosahedral(), "Y4", [one, one, one], [(5, 1), (3, 1), (2, 1)]),
        (GroupSpec::icosahedral(), "Y5", [one, one, one], [(5, 1), (3, 1), (2, 1)]),
        (GroupSpec::icosahedral(), "Y6", [(2, 1), one, one], [(10, 1), (3, 1), (2, 1)]),
        (GroupSpec::icosahedral(), "Y8", [(2, 1), (2, 1), one], [(10, 1), (6, 1), (2, 1)]),
    ];
    for (spec, name, k, s) in listed {
        kappa_row(&character_table(spec).ctx(spec.label())?, name, k, s)?;
        rows += 1;
    }

    let mut tables = (2..=9)
        .map(|nn| cover_character_table(GroupSpec::dihedral(nn)))
        .collect::<Result<Vec<_>, _>>()
        .ctx("D_N")?;
    tables.push(character_table(GroupSpec::tetrahedral()).ctx("T")?);
    tables.push(character_table(GroupSpec::octahedral()).ctx("O")?);
    let mut dets = 0;
    for t in tables {
        let spec = t.spec();
        let gf = ground_forms_on(t.group()).ctx(spec.label())?;
        for chi in 0..t.characters().len() {
            let label = format!("{} {}", spec.label(), t.name(chi));
            if chi == t.trivial() || !t.is_real_valued(chi) || t.is_spinorial(chi).unwrap_or(false) {
                continue;
            }
            let gens = InvariantModule::new(&t, chi)
                .and_then(|m| m.free_generators())
                .ctx(&label)?;
            let det = det_invariant_vectors(&gens).ctx(&label)?;
            let exps = kappa_exponents(&t, chi).ctx(&label)?;
            let scaled = t.kappa(chi).ctx(&label)?.scaled(&spec.nu());
            ensure!(
                exps.iter().zip(&scaled).all(|(&e, s)| q(e as i64, 1) == *s),
                "{label}: exponents {exps:?}"
            );
            ensure!(
                determinant_constant(&det, &gf, &exps).is_some(),
                "{label}: det is not c·ΠF_i^(ν_iκ_i)"
            );
            dets += 1;
        }
    }
    Ok(format!("{rows} κ rows, {dets} determinants"))
}

// 6 ------------------------------------------------------------------------

fn render(parts: &[(String, u32)]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    parts
        .iter()
        .map(|(n, m)| if *m == 1 { n.clone() } else { format!("{m}{n}") })
        .collect::<Vec<_>>()
        .join("+")
}

fn clebsch_gordan() -> Check {
    let powers = [
        "T1", "T4", "T7", "T5+T6", "T2+T3+T7", "T4+T5+T6", "T1+2T7", "2T4+T5+T6",
        "T1+T2+T3+2T7", "T4+2T5+2T6", "T2+T3+3T7", "2T4+2T5+2T6", "2T1+T2+T3+3T7",
    ];
    let tensored = [
        "T4", "T1+T7", "T4+T5+T6", "T2+T3+2T7", "T4+2T5+2T6", "T1+T2+T3+3T7", "3T4+2T5+2T6",
        "2T1+T2+T3+4T7", "3T4+3T5+3T6", "T1+2T2+2T3+5T7", "3T4+4T5+4T6", "2T1+2T2+2T3+6T7",
    ];
    let t = character_table(GroupSpec::tetrahedral()).ctx("T")?;
    let nat = t.natural_character();
    for (h, want) in powers.iter().enumerate() {
        let s = t.symmetric_power_character(h as u32).ctx(h)?;
        ensure!(s.to_string() == *want, "S^{h} = {s}, table has {want}");
        if let Some(want) = tensored.get(h) {
            let mult = t.decompose(&t.product(&nat, &s.values)).ctx(h)?;
            let got = render(&t.decomposition_names(&mult));
            ensure!(got == *want, "T4⊗S^{h} = {got}, table has {want}");
        }
    }
    let s12 = t.symmetric_power_character(12).ctx(12)?;
    let reg = t.pulled_back_regular();
    let triv = &t.character(t.trivial()).values;
    let sum: Vec<Cyclotomic> = reg.iter().zip(triv).map(|(a, b)| a + b).collect();
    ensure!(s12.values == sum, "χ₁₂ ≠ π*χ_reg + ε");
    Ok("h = 0..12, both columns".into())
}

// 7 ------------------------------------------------------------------------

fn sl2_basis(n: u32) -> Vec<Matrix> {
    let o = Cyclotomic::one(n);
    let z = Cyclotomic::zero(n);
    vec![
        Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]]),
        Matrix::from_rows(vec![vec![z.clone(), z.clone()], vec![o.clone(), z.clone()]]),
        Matrix::from_rows(vec![vec![o.clone(), z.clone()], vec![z, -&o]]),
    ]
}

fn dihedral_pipeline() -> Check {
    let one = Cyclotomic::one(1);
    let zero = Cyclotomic::zero(1);
    let poles = [
        (one.clone(), zero.clone()),
        (zero.clone(), one.clone()),
        (-&one, one.clone()),
        (Cyclotomic::from_int(1, 2), Cyclotomic::from_int(1, 3)),
    ];
    let (mut forms, mut mois) = (0, 0);
    for nn in 2..=7u32 {
        let spec = GroupSpec::dihedral(nn);
        let gf = ground_forms(spec).ctx(nn)?;
        let n = gf.forms[0].conductor();
        let ring = PrimaryRing::ground(&gf);
        let two = Cyclotomic::from_int(n, 2);
        let target = (&(&gf.power(0) * &gf.power(1)) * &gf.power(2)).scale(&two);
        let cover = cover_character_table(spec).ctx(nn)?;
        for j in 1..nn {
            let label = format!("D{nn} j={j}");
            for (ca, cb) in &poles {
                let nf = dihedral_normal_form(nn, j, ca, cb).ctx(&label)?;
                let f = &gf.power(0).scale(&ca.lift_conductor(n).ctx(&label)?)
                    + &gf.power(1).scale(&cb.lift_conductor(n).ctx(&label)?);
                let half_cube = (&(&f * &f) * &f).scale(&Cyclotomic::from_frac(n, 1, 2));
                ensure!(nf.transformation_det == half_cube, "{label}: det T ≠ F³/2");
                let c = |x: i64| AutomorphicPoly::constant(0, Cyclotomic::from_int(n, x));
                let k = &nf.constants;
                let brackets = [
                    (0, 1, [c(0), c(2), c(0)]),
                    (0, 2, [c(0), c(0), c(-2)]),
                    (1, 2, [nf.ia_ib_ic.clone(), c(0), c(0)]),
                ];
                for (a, b, want) in &brackets {
                    ensure!(
                        (0..3).all(|l| k.get(*a, *b, l).same_as(&want[l])),
                        "{label} pole ({ca},{cb}): bracket [{a},{b}]"
                    );
                }
                ensure!(k.jacobi_holds(), "{label}: Jacobi");
                forms += 1;
            }
            let gens = dihedral_generators(&gf, j).ctx(&label)?;
            let basis = sl2_basis(n);
            let det = total_determinant(&gens, &basis).ctx(&label)?;
            ensure!(det == target || det == -&target, "{label}: total det {det}");
            let Some(chi) = (0..cover.characters().len()).find(|&c| cover.name(c) == format!("psi{j}")) else {
                continue;
            };
            if cover.is_spinorial(chi).ctx(&label)? {
                continue;
            }
            let module = InvariantModule::new(&cover, chi).ctx(&label)?;
            ensure!(
                gens.iter().all(|g| g.is_invariant(cover.group(), &module.rep)),
                "{label}: generators not invariant"
            );
            let vectors = module.free_generators().ctx(&label)?;
            let a = matrices_of_invariants(&gens, &vectors, &ring).ctx(&label)?;
            let sc = structure_constants(&gens, &ring).ctx(&label)?;
            ensure!(preserves_brackets(&a, &sc), "{label}: matrices of invariants break brackets");
            let det = moi_total_determinant(&a, &ring, &basis).ctx(&label)?;
            ensure!(det == target || det == -&target, "{label}: matrix-of-invariants det {det}");
            mois += 1;
        }
    }
    Ok(format!("{forms} normal forms, {mois} (N, j) with matrices of invariants"))
}

// 8 ------------------------------------------------------------------------

fn multiplicity_row(dim: u32) -> Option<[&'static [u32]; 3]> {
    Some(match dim {
        1 => [&[1], &[1], &[1]],
        2 => [&[1, 1], &[1, 1], &[1, 1]],
        3 => [&[1, 1, 1], &[1, 1, 1], &[2, 1]],
        4 => [&[1, 1, 1, 1], &[2, 1, 1], &[2, 2]],
        5 => [&[1, 1, 1, 1, 1], &[2, 2, 1], &[3, 2]],
        6 => [&[2, 1, 1, 1, 1], &[2, 2, 2], &[3, 3]],
        _ => return None,
    })
}

/// Columns of the dimension table, keyed by family and n.
fn dimension_column(family: LieFamily, n: u32) -> Option<[u32; 3]> {
    Some(match (family, n) {
        (LieFamily::Sl, 2) => [1, 1, 1],
        (LieFamily::Sl, 3) => [2, 2, 4],
        (LieFamily::Sl, 4) => [3, 5, 7],
        (LieFamily::Sl, 5) => [4, 8, 12],
        (LieFamily::Sl, 6) => [7, 11, 17],
        (LieFamily::So, 3) => [1, 1, 1],
        (LieFamily::So, 4) => [2, 2, 2],
        (LieFamily::So, 5) => [2, 4, 4],
        (LieFamily::Sp, 2) => [1, 1, 1],
        (LieFamily::Sp, 4) => [2, 4, 4],
        (LieFamily::Sp, 6) => [5, 7, 9],
        _ => return None,
    })
}

fn summand_row(family: LieFamily, n: u32) -> Option<[String; 3]> {
    let s = |a: &str, b: &str, c: &str| Some([a.to_string(), b.to_string(), c.to_string()]);
    match (family, n) {
        (LieFamily::Sl, _) => {
            let row = multiplicity_row(n)?;
            let render = |m: &[u32]| {
                let mut parts: Vec<String> =
                    m.iter().filter(|&&x| x >= 2).map(|x| format!("sl{x}")).collect();
                parts.extend((1..m.len()).map(|_| "C".to_string()));
                parts.join("+")
            };
            Some([render(row[0]), render(row[1]), render(row[2])])
        }
        (LieFamily::So, 3) | (LieFamily::Sp, 2) => s("C", "C", "C"),
        (LieFamily::So, 4) => s("C+C", "C+C", "C+C"),
        (LieFamily::So, 5) | (LieFamily::Sp, 4) => s("C+C", "sl2+C", "sl2+C"),
        (LieFamily::Sp, 6) => s("sl2+C+C", "sl2+sl2+C", "sl3+C"),
        _ => None,
    }
}

fn evaluated_algebra_tables() -> Check {
    let mut specs: Vec<GroupSpec> = polyhedral().to_vec();
    specs.extend((2..=6).map(GroupSpec::dihedral));
    let mut columns = BTreeSet::new();
    let mut partitions = BTreeSet::new();
    for spec in &specs {
        let t = character_table(*spec).ctx(spec.label())?;
        for chi in 0..t.characters().len() {
            let label = format!("{} {}", spec.label(), t.name(chi));
            let dim = t.degree(chi);
            let row = multiplicity_row(dim).ok_or(format!("{label}: dimension {dim}"))?;
            for (i, want) in row.iter().enumerate() {
                let got = eigenvalue_multiplicities(&t, chi, i).ctx(&label)?;
                ensure!(got == *want, "{label} orbit {i}: multiplicities {got:?}");
            }
            partitions.insert(dim);
            for family in [LieFamily::Sl, LieFamily::So, LieFamily::Sp] {
                let Ok(ls) = LieSpec::new(family, &t, chi) else { continue };
                let (Some(dims), Some(names)) = (dimension_column(family, dim), summand_row(family, dim)) else {
                    continue;
                };
                let algebras = evaluated_algebras(&ls).ctx(&label)?;
                for (i, d) in algebras.iter().enumerate() {
                    ensure!(d.dimension() == dims[i], "{label} {family}: dim at {i} = {}", d.dimension());
                    ensure!(d.normal_form() == names[i], "{label} {family}: {} at {i}, table has {}", d, names[i]);
                }
                columns.insert(format!("{family}{dim}"));
            }
        }
    }
    ensure!(columns.len() == 11, "only columns {columns:?} realised");
    ensure!(partitions.len() == 6, "only dimensions {partitions:?} realised");
    // the same algebras from evaluating an actual ALiA
    for nn in 3..=5u32 {
        let nf = dihedral_normal_form(nn, 1, &Cyclotomic::from_int(1, 2), &Cyclotomic::from_int(1, 3))
            .ctx(nn)?;
        let cover = cover_character_table(GroupSpec::dihedral(nn)).ctx(nn)?;
        let gf = ground_forms(GroupSpec::dihedral(nn)).ctx(nn)?;
        let (ls, _) = lie_spec(&cover, LieFamily::Sl, "psi1").ctx(nn)?;
        for i in 0..3 {
            let e = evaluate_alia(&nf.basis(), &gf.orbits[i][0]).ctx(nn)?;
            let d = fixed_lie_subalgebra(&ls, i).ctx(nn)?;
            ensure!(e.matches(&d), "D{nn}: evaluation at orbit {i} gives dim {}", e.dimension);
        }
    }
    Ok(format!("{} columns, dimensions 1..6", columns.len()))
}

// 9 ------------------------------------------------------------------------

fn golden(name: &str) -> Result<String, String> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", &format!("{name}.dot")]
        .iter()
        .collect();
    std::fs::read_to_string(&path).ctx(path.display())
}

fn class_set(rs: &RootSystem, kappa: &[u32], cap01: bool) -> Result<BTreeSet<Cochain2>, String> {
    let sols = enumerate_cochains(rs, kappa, cap01).ctx(format!("{} {kappa:?}", rs.kind()))?;
    Ok(classify_cochains(rs, &sols, &equal_kappa_swaps(kappa))
        .into_iter()
        .map(|c| c.coboundary)
        .collect())
}

fn drawn(rs: &RootSystem, name: &str, kappa: &[u32], coords: &[usize]) -> Result<Cochain2, String> {
    let (w, _) = parse_dot(rs, &golden(name)?, 3).ctx(name)?;
    ensure!(w.is_symmetric(rs) && w.is_cocycle(rs), "{name}: not a symmetric cocycle");
    let w = w.transformed(rs, &(0..rs.len()).collect::<Vec<_>>(), coords);
    let group = automorphism_group(rs);
    let perms = coordinate_permutations(3, &equal_kappa_swaps(kappa));
    Ok(canonical_form(rs, &w, &group, &perms).0)
}

fn root_cohomology() -> Check {
    let a1 = build_root_system(RootSystemKind::A1);
    let a2 = build_root_system(RootSystemKind::A2);
    let b2 = build_root_system(RootSystemKind::B2);
    let a3 = build_root_system(RootSystemKind::A3);
    let count = |rs: &RootSystem, k: &[u32], cap01: bool| class_set(rs, k, cap01).map(|s| s.len());
    let expect = [
        (&a1, vec![1], true, 1),
        (&a2, vec![2], true, 1),
        (&a2, vec![3], true, 1),
        (&a2, vec![3, 2], true, 1),
        (&a2, vec![3, 3], true, 2),
        (&b2, vec![1], false, 0),
        (&b2, vec![2], false, 0),
        (&b2, vec![3], true, 2),
        (&b2, vec![3], false, 2),
        (&b2, vec![4], true, 1),
        (&a3, vec![4], true, 1),
        (&a3, vec![5], true, 1),
        (&a3, vec![6], true, 1),
    ];
    for (rs, k, cap01, n) in &expect {
        let got = count(rs, k, *cap01)?;
        ensure!(got == *n, "{} κ={k:?} cap01={cap01}: {got} classes, expected {n}", rs.kind());
    }
    for k in 1..=a3.len() as u32 / 2 {
        let nonempty = count(&a3, &[k], true)? > 0;
        ensure!(nonempty == (3..=6).contains(&k), "A3 κ={k}: nonempty = {nonempty}");
    }
    // the golden drawings, placed at the coordinate of their colour
    let figures: [(&RootSystem, &[&str], [u32; 3], [usize; 3]); 7] = [
        (&a2, &["a2_norm_2"], [0, 0, 2], [0, 1, 2]),
        (&a2, &["a2_norm_3"], [0, 3, 0], [0, 1, 2]),
        (&a2, &["a2_norm_3_2"], [0, 3, 2], [0, 1, 2]),
        (&a2, &["a2_norm_3_3_left", "a2_norm_3_3_right"], [3, 3, 0], [0, 1, 2]),
        (&a3, &["a3_norm_4"], [0, 0, 4], [0, 1, 2]),
        (&a3, &["a3_norm_5"], [0, 5, 0], [0, 1, 2]),
        (&a3, &["a3_norm_6"], [6, 0, 0], [0, 1, 2]),
    ];
    let mut matched = 0;
    for (rs, names, kappa, coords) in figures {
        let want = class_set(rs, &kappa, true)?;
        let got = names
            .iter()
            .map(|n| drawn(rs, n, &kappa, &coords))
            .collect::<Result<BTreeSet<_>, _>>()?;
        ensure!(got == want, "{names:?} do not match the classes at κ={kappa:?}");
        matched += names.len();
    }
    let want = class_set(&b2, &[0, 0, 3], true)?;
    let got: BTreeSet<Cochain2> = [
        drawn(&b2, "b2_norm_3_left", &[0, 0, 3], &[0, 1, 2])?,
        drawn(&b2, "b2_norm_3_middle", &[0, 0, 3], &[0, 2, 1])?,
    ]
    .into_iter()
    .collect();
    ensure!(got == want, "B2 norm 3 drawings do not match");
    let want = class_set(&b2, &[4, 0, 0], true)?;
    ensure!(
        BTreeSet::from([drawn(&b2, "b2_norm_4", &[4, 0, 0], &[0, 1, 2])?]) == want,
        "B2 norm 4 drawing does not match"
    );
    matched += 3;
    Ok(format!("{} counts, {matched} golden drawings", expect.len()))
}

// 10 -----------------------------------------------------------------------

fn enumerated(rs: &RootSystem) -> Result<Vec<Cochain1>, String> {
    let mut out = Vec::new();
    for k in 0..=rs.len() as u32 / 2 {
        out.extend(enumerate_cochains(rs, &[k], true).ctx(rs.kind())?);
    }
    out.extend(enumerate_cochains(rs, &rs.kind().kappa(), true).ctx(rs.kind())?);
    Ok(out)
}

fn property_suites() -> Check {
    let mut algebras = 0;
    let mut pools = Vec::new();
    for kind in RootSystemKind::ALL {
        let rs = build_root_system(kind);
        let cochains = enumerated(&rs)?;
        let base = chevalley_matrices(&rs);
        let mut pool = Vec::new();
        for w in &cochains {
            let d = coboundary1(&rs, w);
            let alg = assoc_lie_algebra(&rs, &d).map_err(|e| {
                format!("{kind}: {}", e.describe(&AssocAlgebra::from_cochain_unchecked(&rs, &d).names))
            })?;
            if matches!(kind, RootSystemKind::A1 | RootSystemKind::A2 | RootSystemKind::B2) {
                let rep = canonical_representation(&rs, w, &base).ctx(kind)?;
                ensure!(rep.structure_constants(&rs).ctx(kind)? == alg, "{kind}: canonical representation");
            }
            algebras += 1;
            pool.push(d);
        }
        pools.push((rs, pool));
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut witnesses = 0;
    while witnesses < 100 {
        let (rs, pool) = &pools[rng.gen_range(0..pools.len())];
        let mut w = pool[rng.gen_range(0..pool.len())].clone();
        let pairs = rs.unordered_pairs();
        let (i, j) = pairs[rng.gen_range(0..pairs.len())];
        let mut v = w.get(rs, i, j).unwrap().to_vec();
        let c = rng.gen_range(0..v.len());
        v[c] += rng.gen_range(1..4);
        w.set(rs, i, j, v.clone());
        w.set(rs, j, i, v);
        if w.is_cocycle(rs) {
            continue;
        }
        ensure!(
            matches!(assoc_lie_algebra(rs, &w), Err(JacobiWitness::Jacobi { .. })),
            "{}: perturbation without a Jacobi witness",
            rs.kind()
        );
        witnesses += 1;
    }

    let mut points = 0;
    let mut tables = Vec::new();
    for nn in 3..=5 {
        tables.push(character_table(GroupSpec::dihedral(nn)).ctx(nn)?);
        tables.push(cover_character_table(GroupSpec::dihedral(nn)).ctx(nn)?);
    }
    tables.push(character_table(GroupSpec::tetrahedral()).ctx("T")?);
    for t in &tables {
        let label = t.spec().label();
        let gf = ground_forms_on(t.group()).ctx(&label)?;
        let n = t.conductor();
        let generic = (2..)
            .map(|v| ProjectivePoint::finite(Cyclotomic::from_int(n, v)))
            .find(|p| gf.orbit_type_of(p) == OrbitType::Generic)
            .unwrap();
        let mut reps: Vec<(ProjectivePoint, usize)> =
            (0..3).map(|i| (gf.orbits[i][0].clone(), (i + 1) % 3)).collect();
        reps.push((generic, 0));
        for chi in 0..t.characters().len() {
            let module = InvariantModule::new(t, chi).ctx(&label)?;
            for (mu, pole_orbit) in &reps {
                let pole = Pole::exceptional(&gf, *pole_orbit).ctx(&label)?;
                let e = evaluate_module(&module, &pole, mu).ctx(format!("{label} {}", t.name(chi)))?;
                let fixed = stabiliser_fixed_dim(t, chi, mu).ctx(&label)?;
                ensure!(
                    e.dimension as u32 == fixed,
                    "{label} {}: span {} ≠ dim V^Gμ {fixed}",
                    t.name(chi),
                    e.dimension
                );
                points += 1;
            }
        }
    }
    Ok(format!("{algebras} algebras, {witnesses} witnesses, {points} evaluations"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("character tables", character_tables),
        ("Molien series and Stanley identities", molien_series),
        ("ground forms", ground_form_checks),
        ("dihedral invariant vectors", dihedral_invariant_vectors),
        ("determinants of invariant vectors", determinants_of_invariant_vectors),
        ("symmetric powers of the tetrahedral natural character", clebsch_gordan),
        ("dihedral ALiA pipeline", dihedral_pipeline),
        ("evaluated algebras and eigenvalue multiplicities", evaluated_algebra_tables),
        ("root cohomology classes", root_cohomology),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
