//! Regression suites over the reference tables. Each check has a stable id;
//! the report lists every check and the command fails if any of them does.

use alia_core::alia::*;
use alia_core::exactnum::{Cyclotomic, Matrix};
use alia_core::forms::*;
use alia_core::grouprep::*;
use alia_core::invvec::*;
use alia_core::liebase::*;
use alia_core::rootcoh::*;
use anyhow::Result;
use serde_json::json;

use crate::output::Report;

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Characters,
    Molien,
    GroundForms,
    Invariants,
    Dihedral,
    Evaluation,
    Rootcoh,
    All,
}

type Outcome = std::result::Result<(), String>;

struct Checks(Vec<(String, Outcome)>);

impl Checks {
    fn run(&mut self, id: impl Into<String>, f: impl FnOnce() -> Outcome) {
        self.0.push((id.into(), f()));
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn ok<T>(r: alia_core::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn polyhedral() -> [GroupSpec; 3] {
    [GroupSpec::tetrahedral(), GroupSpec::octahedral(), GroupSpec::icosahedral()]
}

pub fn run(suite: Suite) -> Result<Report> {
    let mut checks = Checks(Vec::new());
    let wanted = |s: Suite| suite == Suite::All || suite == s;
    if wanted(Suite::Characters) {
        characters(&mut checks);
    }
    if wanted(Suite::Molien) {
        molien_series(&mut checks);
    }
    if wanted(Suite::GroundForms) {
        ground_form_checks(&mut checks);
    }
    if wanted(Suite::Invariants) {
        determinants(&mut checks);
    }
    if wanted(Suite::Dihedral) {
        dihedral(&mut checks);
    }
    if wanted(Suite::Evaluation) {
        evaluation(&mut checks);
    }
    if wanted(Suite::Rootcoh) {
        root_classes(&mut checks);
    }
    let rows: Vec<_> = checks
        .0
        .iter()
        .map(|(id, r)| {
            json!({
                "id": id,
                "status": if r.is_ok() { "PASS" } else { "FAIL" },
                "detail": r.as_ref().err(),
            })
        })
        .collect();
    let failed: Vec<&str> = checks.0.iter().filter(|(_, r)| r.is_err()).map(|(id, _)| id.as_str()).collect();
    let value = json!({
        "checks": rows,
        "passed": checks.0.len() - failed.len(),
        "failed": failed.len(),
    });
    let mut report = Report::new(value, Some("checks"));
    if !failed.is_empty() {
        report.failed = Some(format!("{} of {} checks: {}", failed.len(), checks.0.len(), failed.join(", ")));
    }
    Ok(report)
}

fn characters(c: &mut Checks) {
    let mut specs: Vec<GroupSpec> = polyhedral().to_vec();
    specs.extend((1..=12).map(GroupSpec::cyclic));
    specs.extend((2..=12).map(GroupSpec::dihedral));
    for spec in specs {
        c.run(format!("character-table/{}", spec.label()), || {
            let t = ok(character_table(spec))?;
            let rep = t.check_orthogonality();
            ensure!(rep.passed, "orthogonality fails at {:?}", rep.violation);
            if let Some(z) = t.listed_centralisers() {
                ensure!(z == rep.centralisers.as_slice(), "centralisers {:?}", rep.centralisers);
            }
            for (i, ch) in t.characters().iter().enumerate() {
                if let Some(iota) = ch.listed_indicator {
                    ensure!(t.frobenius_schur(i) == iota, "{}: indicator", ch.name);
                }
                if let Some(det) = &ch.listed_det {
                    let d = ok(t.det_character(i))?;
                    ensure!(t.name(d) == det, "{}: det {}", ch.name, t.name(d));
                }
            }
            Ok(())
        });
    }
}

fn molien_series(c: &mut Checks) {
    let mut specs: Vec<GroupSpec> = polyhedral().to_vec();
    specs.extend((1..=12).map(GroupSpec::cyclic));
    specs.extend((2..=12).map(GroupSpec::dihedral));
    for spec in specs {
        c.run(format!("molien/{}", spec.label()), || {
            let t = ok(character_table(spec))?;
            let s = ok(molien(&t, t.trivial(), 2 * spec.order() as usize))?;
            ensure!(s.matches_closed_form() == Some(true), "series differs from its closed form");
            if let Some(ring) = catalogued_ring(spec) {
                let rep = ok(stanley_check(&t, t.trivial(), ring.primary))?;
                ensure!(rep.passed(), "Stanley identities fail: {rep:?}");
            }
            Ok(())
        });
    }
}

fn monomial(n: u32, i: u32, j: u32) -> Form {
    Form::monomial(Cyclotomic::one(n), i, j)
}

fn ground_form_checks(c: &mut Checks) {
    let mut specs: Vec<GroupSpec> = polyhedral().to_vec();
    specs.extend((2..=12).map(GroupSpec::dihedral));
    for spec in specs {
        c.run(format!("ground-forms/{}", spec.label()), || {
            let g = ok(preferred_cover(spec))?;
            let gf = ok(ground_forms_on(&g))?;
            let degs: Vec<u32> = gf.forms.iter().map(|f| f.degree()).collect();
            ensure!(degs == spec.orbit_sizes(), "degrees {degs:?}");
            ensure!(gf.has_simple_zeros_on_orbits(), "zeros are not simple or off the orbits");
            ensure!(gf.relation_holds(), "relation fails");
            ensure!(gf.powers_invariant(&g), "powers are not invariant");
            if spec.kind == GroupKind::Dihedral {
                let nn = spec.n;
                let n = gf.forms[0].conductor();
                let half = Cyclotomic::from_frac(n, 1, 2);
                let fb = (&monomial(n, nn, 0) + &monomial(n, 0, nn)).scale(&half);
                let fc = (&monomial(n, nn, 0) - &monomial(n, 0, nn)).scale(&half);
                ensure!(gf.form(0) == &monomial(n, 1, 1), "F_a = {}", gf.form(0));
                ensure!(gf.form(1) == &fb && gf.form(2) == &fc, "F_b, F_c = {}, {}", gf.form(1), gf.form(2));
                let residual = &(&gf.power(0) - &gf.power(1)) + &gf.power(2);
                ensure!(residual.is_zero(), "F_a^N - F_b^2 + F_c^2 = {residual}");
            } else {
                ensure!(gf.relation_is_plain_sum(), "relation {:?}", gf.relation);
            }
            Ok(())
        });
    }
}

fn determinants(c: &mut Checks) {
    let mut tables: Vec<Box<dyn Fn() -> alia_core::Result<CharacterTable>>> = Vec::new();
    for nn in 2..=9 {
        tables.push(Box::new(move || cover_character_table(GroupSpec::dihedral(nn))));
    }
    tables.push(Box::new(|| character_table(GroupSpec::tetrahedral())));
    tables.push(Box::new(|| character_table(GroupSpec::octahedral())));
    for make in tables {
        let t = match make() {
            Ok(t) => t,
            Err(e) => {
                c.run("determinant-of-invariants/table", || Err(e.to_string()));
                continue;
            }
        };
        let label = t.spec().label();
        let gf = ground_forms_on(t.group());
        for chi in 0..t.characters().len() {
            let eligible = chi != t.trivial() && t.is_real_valued(chi) && t.is_spinorial(chi) == Ok(false);
            if !eligible {
                continue;
            }
            c.run(format!("determinant-of-invariants/{label}/{}", t.name(chi)), || {
                let gf = gf.as_ref().map_err(|e| e.to_string())?;
                let module = ok(InvariantModule::new(&t, chi))?;
                let gens = ok(module.free_generators())?;
                let det = ok(det_invariant_vectors(&gens))?;
                let exps = ok(kappa_exponents(&t, chi))?;
                ensure!(
                    determinant_constant(&det, gf, &exps).is_some(),
                    "det {det} is not a multiple of the ground-form monomial {exps:?}"
                );
                Ok(())
            });
        }
    }
}

fn sl2_basis(n: u32) -> Vec<Matrix> {
    let o = Cyclotomic::one(n);
    let z = Cyclotomic::zero(n);
    vec![
        Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]]),
        Matrix::from_rows(vec![vec![z.clone(), z.clone()], vec![o.clone(), z.clone()]]),
        Matrix::from_rows(vec![vec![o.clone(), z.clone()], vec![z, -&o]]),
    ]
}

fn dihedral(c: &mut Checks) {
    let poles: [(&str, i64, i64); 4] = [("a", 1, 0), ("b", 0, 1), ("c", -1, 1), ("generic-2-3", 2, 3)];
    for nn in 2..=7u32 {
        let spec = GroupSpec::dihedral(nn);
        let setup = ground_forms(spec).and_then(|gf| Ok((cover_character_table(spec)?, gf)));
        let (cover, gf) = match setup {
            Ok(s) => s,
            Err(e) => {
                c.run(format!("dihedral/D{nn}"), || Err(e.to_string()));
                continue;
            }
        };
        let n = gf.forms[0].conductor();
        let ring = PrimaryRing::ground(&gf);
        let two = Cyclotomic::from_int(n, 2);
        let target = (&(&gf.power(0) * &gf.power(1)) * &gf.power(2)).scale(&two);
        for j in 1..nn {
            for (name, a, b) in poles {
                let (ca, cb) = (Cyclotomic::from_int(1, a), Cyclotomic::from_int(1, b));
                let nf = dihedral_normal_form(nn, j, &ca, &cb).map_err(|e| e.to_string());
                c.run(format!("dihedral/D{nn}/j{j}/pole-{name}/normal-form"), || {
                    let nf = nf.as_ref()?;
                    let f = &gf.power(0).scale(&Cyclotomic::from_int(n, a))
                        + &gf.power(1).scale(&Cyclotomic::from_int(n, b));
                    let half_cube = (&(&f * &f) * &f).scale(&Cyclotomic::from_frac(n, 1, 2));
                    ensure!(nf.transformation_det == half_cube, "det T = {}", nf.transformation_det);
                    let k = |x: i64| AutomorphicPoly::constant(0, Cyclotomic::from_int(n, x));
                    let brackets = [
                        (0, 1, [k(0), k(2), k(0)]),
                        (0, 2, [k(0), k(0), k(-2)]),
                        (1, 2, [nf.ia_ib_ic.clone(), k(0), k(0)]),
                    ];
                    for (x, y, want) in &brackets {
                        ensure!(
                            (0..3).all(|l| nf.constants.get(*x, *y, l).same_as(&want[l])),
                            "bracket [{x},{y}]"
                        );
                    }
                    ensure!(nf.constants.jacobi_holds(), "Jacobi identity");
                    Ok(())
                });
                c.run(format!("dihedral/D{nn}/j{j}/pole-{name}/killing-determinant"), || {
                    let nf = nf.as_ref()?;
                    let det = killing_determinant(&nf.constants);
                    let kappa = kappa_constraint(RootSystemKind::A1, nf.pole.orbit_type.into());
                    let mut want = AutomorphicPoly::constant(0, Cyclotomic::from_int(1, -128));
                    for (i, &k) in kappa.iter().enumerate() {
                        let f = ok(automorphic_function(&gf, &nf.pole, i))?;
                        for _ in 0..2 * k {
                            want = want.mul(&f);
                        }
                    }
                    ensure!(det.same_as(&want), "det K = {det}");
                    Ok(())
                });
            }
            c.run(format!("dihedral/D{nn}/j{j}/prehomogenised-module"), || {
                ensure!(ok(dihedral_cover_modules_coincide(&gf, j))?, "D_N and D_2N modules differ");
                Ok(())
            });
            let gens = dihedral_generators(&gf, j);
            c.run(format!("dihedral/D{nn}/j{j}/total-determinant"), || {
                let gens = gens.as_ref().map_err(|e| e.to_string())?;
                let det = ok(total_determinant(gens, &sl2_basis(n)))?;
                ensure!(det == target || det == -&target, "total determinant {det}");
                Ok(())
            });
            let Ok(chi) = cover.index(&format!("psi{j}")) else { continue };
            if cover.is_spinorial(chi) != Ok(false) {
                continue;
            }
            c.run(format!("dihedral/D{nn}/j{j}/matrices-of-invariants"), || {
                let gens = gens.as_ref().map_err(|e| e.to_string())?;
                let module = ok(InvariantModule::new(&cover, chi))?;
                ensure!(gens.iter().all(|g| g.is_invariant(cover.group(), &module.rep)), "generators not invariant");
                let vectors = ok(module.free_generators())?;
                let a = ok(matrices_of_invariants(gens, &vectors, &ring))?;
                let sc = ok(structure_constants(gens, &ring))?;
                ensure!(preserves_brackets(&a, &sc), "brackets not preserved");
                let det = ok(moi_total_determinant(&a, &ring, &sl2_basis(n)))?;
                ensure!(det == target || det == -&target, "determinant {det}");
                Ok(())
            });
        }
    }
}

/// Fixed-subalgebra dimensions at the three exceptional orbits.
const DIMENSIONS: [(LieFamily, u32, [u32; 3]); 11] = [
    (LieFamily::Sl, 2, [1, 1, 1]),
    (LieFamily::Sl, 3, [2, 2, 4]),
    (LieFamily::Sl, 4, [3, 5, 7]),
    (LieFamily::Sl, 5, [4, 8, 12]),
    (LieFamily::Sl, 6, [7, 11, 17]),
    (LieFamily::So, 3, [1, 1, 1]),
    (LieFamily::So, 4, [2, 2, 2]),
    (LieFamily::So, 5, [2, 4, 4]),
    (LieFamily::Sp, 2, [1, 1, 1]),
    (LieFamily::Sp, 4, [2, 4, 4]),
    (LieFamily::Sp, 6, [5, 7, 9]),
];

const SUMMANDS: [(LieFamily, u32, [&str; 3]); 11] = [
    (LieFamily::Sl, 2, ["C", "C", "C"]),
    (LieFamily::Sl, 3, ["C+C", "C+C", "sl2+C"]),
    (LieFamily::Sl, 4, ["C+C+C", "sl2+C+C", "sl2+sl2+C"]),
    (LieFamily::Sl, 5, ["C+C+C+C", "sl2+sl2+C+C", "sl3+sl2+C"]),
    (LieFamily::Sl, 6, ["sl2+C+C+C+C", "sl2+sl2+sl2+C+C", "sl3+sl3+C"]),
    (LieFamily::So, 3, ["C", "C", "C"]),
    (LieFamily::So, 4, ["C+C", "C+C", "C+C"]),
    (LieFamily::So, 5, ["C+C", "sl2+C", "sl2+C"]),
    (LieFamily::Sp, 2, ["C", "C", "C"]),
    (LieFamily::Sp, 4, ["C+C", "sl2+C", "sl2+C"]),
    (LieFamily::Sp, 6, ["sl2+C+C", "sl2+sl2+C", "sl3+C"]),
];

fn evaluation(c: &mut Checks) {
    let mut specs: Vec<GroupSpec> = polyhedral().to_vec();
    specs.extend((2..=6).map(GroupSpec::dihedral));
    let tables: Vec<CharacterTable> = specs.iter().filter_map(|s| character_table(*s).ok()).collect();
    for ((family, dim, dims), (_, _, names)) in DIMENSIONS.iter().zip(&SUMMANDS) {
        c.run(format!("evaluated-algebra/{family}{dim}"), || {
            let mut seen = 0;
            for t in &tables {
                for chi in 0..t.characters().len() {
                    if t.degree(chi) != *dim {
                        continue;
                    }
                    let Ok(ls) = LieSpec::new(*family, t, chi) else { continue };
                    let label = format!("{} {}", t.spec().label(), t.name(chi));
                    let algebras = ok(evaluated_algebras(&ls))?;
                    for (i, d) in algebras.iter().enumerate() {
                        ensure!(d.dimension() == dims[i], "{label}: dimension {} at orbit {i}", d.dimension());
                        ensure!(d.normal_form() == names[i], "{label}: {d} at orbit {i}");
                    }
                    seen += 1;
                }
            }
            ensure!(seen > 0, "no group realises {family}{dim}");
            Ok(())
        });
    }
    for nn in 3..=5u32 {
        c.run(format!("evaluated-algebra/D{nn}-sl2-alia"), || {
            let nf = ok(dihedral_normal_form(nn, 1, &Cyclotomic::from_int(1, 2), &Cyclotomic::from_int(1, 3)))?;
            let cover = ok(cover_character_table(GroupSpec::dihedral(nn)))?;
            let gf = ok(ground_forms(GroupSpec::dihedral(nn)))?;
            let (ls, _) = ok(lie_spec(&cover, LieFamily::Sl, "psi1"))?;
            for i in 0..3 {
                let e = ok(evaluate_alia(&nf.basis(), &gf.orbits[i][0]))?;
                let d = ok(fixed_lie_subalgebra(&ls, i))?;
                ensure!(e.matches(&d), "orbit {i}: dimension {} against {d}", e.dimension);
            }
            Ok(())
        });
    }
    let mut law: Vec<(String, alia_core::Result<CharacterTable>)> = Vec::new();
    for nn in 3..=5 {
        law.push((format!("D{nn}"), character_table(GroupSpec::dihedral(nn))));
        law.push((format!("D{nn}-cover"), cover_character_table(GroupSpec::dihedral(nn))));
    }
    law.push(("T".into(), character_table(GroupSpec::tetrahedral())));
    for (label, t) in law {
        c.run(format!("evaluation-law/{label}"), || {
            let t = ok(t)?;
            let gf = ok(ground_forms_on(t.group()))?;
            let n = t.conductor();
            let generic = (2..)
                .map(|v| ProjectivePoint::finite(Cyclotomic::from_int(n, v)))
                .find(|p| gf.orbit_type_of(p) == OrbitType::Generic)
                .expect("generic points are dense");
            let mut reps: Vec<(ProjectivePoint, usize)> =
                (0..3).map(|i| (gf.orbits[i][0].clone(), (i + 1) % 3)).collect();
            reps.push((generic, 0));
            for chi in 0..t.characters().len() {
                let module = ok(InvariantModule::new(&t, chi))?;
                for (mu, pole) in &reps {
                    let pole = ok(Pole::exceptional(&gf, *pole))?;
                    let e = ok(evaluate_module(&module, &pole, mu))?;
                    let fixed = ok(stabiliser_fixed_dim(&t, chi, mu))?;
                    ensure!(e.dimension as u32 == fixed, "{} at {mu}: {} against {fixed}", t.name(chi), e.dimension);
                }
            }
            Ok(())
        });
    }
}

fn root_classes(c: &mut Checks) {
    use RootSystemKind::*;
    let expect: [(RootSystemKind, &[u32], bool, usize); 13] = [
        (A1, &[1], true, 1),
        (A2, &[2], true, 1),
        (A2, &[3], true, 1),
        (A2, &[3, 2], true, 1),
        (A2, &[3, 3], true, 2),
        (B2, &[1], false, 0),
        (B2, &[2], false, 0),
        (B2, &[3], true, 2),
        (B2, &[3], false, 2),
        (B2, &[4], true, 1),
        (A3, &[4], true, 1),
        (A3, &[5], true, 1),
        (A3, &[6], true, 1),
    ];
    for (kind, kappa, cap01, n) in expect {
        let norm: Vec<String> = kappa.iter().map(u32::to_string).collect();
        let suffix = if cap01 { "" } else { "/unrestricted" };
        c.run(format!("root-classes/{}/{}{suffix}", kind.name(), norm.join(",")), || {
            let rs = build_root_system(kind);
            let sols = ok(enumerate_cochains(&rs, kappa, cap01))?;
            let got = classify_cochains(&rs, &sols, &equal_kappa_swaps(kappa)).len();
            ensure!(got == n, "{got} classes, expected {n}");
            Ok(())
        });
    }
    c.run("root-classes/A3/nonempty-norms", || {
        let rs = build_root_system(A3);
        for k in 1..=rs.len() as u32 / 2 {
            let nonempty = !ok(enumerate_cochains(&rs, &[k], true))?.is_empty();
            ensure!(nonempty == (3..=6).contains(&k), "norm {k}: nonempty = {nonempty}");
        }
        Ok(())
    });
}
