use std::path::PathBuf;

use alia_core::alia::*;
use alia_core::exactnum::{Cyclotomic, Matrix, Rational};
use alia_core::forms::*;
use alia_core::grouprep::*;
use alia_core::invvec::*;
use alia_core::liebase::*;
use alia_core::rootcoh::*;
use anyhow::Result;
use clap::Args;
use serde_json::{json, Value};

use crate::output::Report;
use crate::{parse, GroupArgs, Usage};

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn ratio(r: &Rational) -> String {
    if *r.denom() == 1.into() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn matrix_json(m: &InvariantMatrix) -> Value {
    let entries: Vec<Vec<String>> = m.entries.iter().map(|r| strings(r)).collect();
    json!({"label": m.label, "degree": m.degree(), "entries": entries})
}

fn homogenised_json(m: &HomogenisedMatrix) -> Value {
    json!({
        "numerator": matrix_json(&m.numerator),
        "pole_form": m.pole.form.to_string(),
        "pole_exponent": m.pole_exponent,
    })
}

fn brackets_json(entries: &[BracketEntry]) -> Value {
    entries
        .iter()
        .map(|b| json!({"left": b.left, "right": b.right, "bracket": b.expansion}))
        .collect()
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

// group ---------------------------------------------------------------------

pub fn group_info(kind: &str, n: Option<u32>) -> Result<Report> {
    let spec = parse::group(kind, n)?;
    let binary = build_binary_group(spec)?;
    let value = json!({
        "group": spec.label(),
        "order": spec.order(),
        "binary_order": binary.order(),
        "nu": spec.nu(),
        "ground_form_degrees": spec.orbit_sizes(),
        "exceptional_orbits": spec.omega(),
        "exponent": spec.exponent(),
        "schur_multiplier_order": spec.schur_multiplier_order(),
        "abelianisation": spec.abelianisation(),
        "conjugacy_classes": binary.conjugacy_classes().len(),
    });
    Ok(Report::new(value, None))
}

pub fn group_table(args: &GroupArgs) -> Result<Report> {
    let t = parse::table(args)?;
    let report = t.check_orthogonality();
    let mut value = t.to_json();
    value["orthogonality"] = json!(report.passed);
    let mut r = Report::new(value, Some("characters"));
    if !report.passed {
        r.failed = Some(format!("orthogonality of the {} table", t.spec().label()));
    }
    Ok(r)
}

pub fn group_sympow(args: &GroupArgs, max_h: u32) -> Result<Report> {
    let t = parse::table(args)?;
    let powers = (0..=max_h)
        .map(|h| {
            let s = t.symmetric_power_character(h)?;
            Ok(json!({
                "h": h,
                "decomposition": s.to_string(),
                "values": strings(&s.values),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(json!({"group": t.spec().label(), "powers": powers}), Some("powers")))
}

// invariants -----------------------------------------------------------------

pub fn molien(args: &GroupArgs, chi: Option<&str>, bound: Option<usize>) -> Result<Report> {
    let t = parse::table(args)?;
    let chi = match chi {
        Some(name) => parse::character(&t, name)?,
        None => t.trivial(),
    };
    let bound = bound.unwrap_or(2 * t.spec().order() as usize);
    let s = alia_core::forms::molien(&t, chi, bound)?;
    let series: Vec<Value> = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(d, c)| json!({"degree": d, "dimension": c}))
        .collect();
    let matches = s.matches_closed_form();
    let value = json!({
        "group": t.spec().label(),
        "character": t.name(chi),
        "bound": bound,
        "series": series,
        "closed_form": s.closed_form.as_ref().map(|c| json!({
            "numerator": c.numerator,
            "denominator_degrees": c.denominator,
        })),
        "matches_closed_form": matches,
    });
    let mut r = Report::new(value, Some("series"));
    if matches == Some(false) {
        r.failed = Some(format!("Molien series of {} against its closed form", t.name(chi)));
    }
    Ok(r)
}

pub fn ground_forms(kind: &str, n: Option<u32>) -> Result<Report> {
    let spec = parse::group(kind, n)?;
    let group = preferred_cover(spec)?;
    let gf = ground_forms_on(&group)?;
    let forms: Vec<Value> = gf
        .forms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            json!({
                "orbit": OrbitType::exceptional(i).to_string(),
                "degree": f.degree(),
                "nu": gf.nu[i],
                "orbit_size": gf.orbits.get(i).map(Vec::len),
                "form": f.to_string(),
            })
        })
        .collect();
    let checks = json!({
        "relation_holds": gf.relation_holds(),
        "simple_zeros_on_orbits": gf.has_simple_zeros_on_orbits(),
        "powers_invariant": gf.powers_invariant(&group),
    });
    let ok = checks.as_object().into_iter().flat_map(|m| m.values()).all(|v| v == &json!(true));
    let value = json!({
        "group": spec.label(),
        "cover_order": group.order(),
        "forms": forms,
        "relation": strings(&gf.relation),
        "checks": checks,
    });
    let mut r = Report::new(value, Some("forms"));
    if !ok {
        r.failed = Some(format!("ground forms of {}", spec.label()));
    }
    Ok(r)
}

fn vector_json(v: &VectorOfForms) -> Value {
    json!({"degree": v.degree(), "components": strings(&v.components)})
}

pub fn invariants(args: &GroupArgs, chi: &str, degree: u32) -> Result<Report> {
    let t = parse::table(args)?;
    let chi = parse::character(&t, chi)?;
    let module = InvariantModule::new(&t, chi)?;
    let vectors = module.invariant_vectors(degree)?;
    let value = json!({
        "group": t.spec().label(),
        "character": t.name(chi),
        "degree": degree,
        "count": vectors.len(),
        "vectors": vectors.iter().map(vector_json).collect::<Vec<_>>(),
    });
    Ok(Report::new(value, Some("vectors")))
}

pub fn det_invariants(args: &GroupArgs, chi: &str) -> Result<Report> {
    let t = parse::table(args)?;
    let chi = parse::character(&t, chi)?;
    let module = InvariantModule::new(&t, chi)?;
    let gens = module.free_generators()?;
    let det = det_invariant_vectors(&gens)?;
    let gf = ground_forms_on(t.group())?;
    let kappa = t.kappa(chi)?;
    let exps = kappa_exponents(&t, chi)?;
    let constant = determinant_constant(&det, &gf, &exps);
    let value = json!({
        "group": t.spec().label(),
        "character": t.name(chi),
        "generators": gens.iter().map(vector_json).collect::<Vec<_>>(),
        "determinant": det.to_string(),
        "kappa": kappa.0.iter().map(ratio).collect::<Vec<_>>(),
        "ground_form_exponents": exps,
        "constant": constant.as_ref().map(|c| c.to_string()),
    });
    let mut r = Report::new(value, Some("generators"));
    if constant.is_none() {
        r.failed = Some(format!(
            "determinant of the invariant vectors of {} is not the predicted ground-form monomial",
            t.name(chi)
        ));
    }
    Ok(r)
}

// alia -----------------------------------------------------------------------

/// Exploratory: look for an element of constant ad-spectrum among small
/// combinations of the homogenised dihedral generators.
pub fn alia_cartan_search(nn: u32, j: u32, orbit: &str, max_coeff: u32, max_degree: u32) -> Result<Report> {
    let gf = alia_core::forms::ground_forms(GroupSpec::dihedral(nn))?;
    let pole = parse::pole(orbit, &gf)?;
    let size = (2 * max_coeff as u64 + 1).checked_pow(3 * (max_degree + 1));
    if size.is_none_or(|s| s > 1_000_000) {
        return Err(Usage("search box too large; lower --max-coeff or --max-degree".into()).into());
    }
    let basis = dihedral_generators(&gf, j)?
        .into_iter()
        .map(|g| HomogenisedMatrix::over_power(g, &pole, 1))
        .collect::<alia_core::Result<Vec<_>>>()?;
    let table = homogenised_structure_constants(&basis, &gf, 4)?;
    let found = search_cartan_element(&table, max_coeff as i64, max_degree as usize);
    let value = json!({
        "N": nn,
        "j": j,
        "pole": {"orbit": pole.orbit_type.to_string(), "form": pole.form.to_string()},
        "generators": table.labels,
        "found": found.coefficients.is_some(),
        "coefficients": found.coefficients.as_ref().map(|c| c.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
        "killing_value": found.killing_value.as_ref().map(|c| c.to_string()),
        "tried": found.tried,
    });
    Ok(Report::new(value, None))
}

pub fn alia_dihedral(nn: u32, j: u32, orbit: &str, at: Option<&str>) -> Result<Report> {
    let (ca, cb) = parse::dihedral_pole(orbit)?;
    let nf = dihedral_normal_form(nn, j, &ca, &cb)?;
    let gf = alia_core::forms::ground_forms(GroupSpec::dihedral(nn))?;
    let ring = PrimaryRing::ground(&gf);
    let sc = structure_constants(&nf.generators, &ring)?;
    let transformation: Vec<Vec<String>> = nf.transformation.iter().map(|r| strings(r)).collect();
    let mut value = json!({
        "N": nn,
        "j": j,
        "pole": {
            "orbit": nf.pole.orbit_type.to_string(),
            "ca": ca.to_string(),
            "cb": cb.to_string(),
            "form": nf.pole.form.to_string(),
        },
        "generators": nf.generators.iter().map(matrix_json).collect::<Vec<_>>(),
        "structure_constants": brackets_json(&sc.entries()),
        "transformation": transformation,
        "transformation_det": nf.transformation_det.to_string(),
        "normal_form": {
            "h": homogenised_json(&nf.h),
            "e_plus": homogenised_json(&nf.e_plus),
            "e_minus": homogenised_json(&nf.e_minus),
            "cartan_factor": nf.cartan_factor.to_string(),
            "ia_ib_ic": nf.ia_ib_ic.to_string(),
        },
        "brackets": brackets_json(&nf.constants.entries()),
        "jacobi": nf.constants.jacobi_holds(),
    });
    if let Some(p) = at {
        let mu = parse::point(p, &gf)?;
        let e = evaluate_alia(&nf.basis(), &mu)?;
        value["evaluation"] = json!({
            "point": mu.to_string(),
            "orbit": gf.orbit_type_of(&mu).to_string(),
            "dimension": e.dimension,
            "derived_dimension": e.derived_dimension,
            "abelian": e.is_abelian,
        });
    }
    let mut r = Report::new(value, Some("brackets"));
    if !nf.constants.jacobi_holds() {
        r.failed = Some(format!("Jacobi identity for the D{nn} j={j} normal form"));
    }
    Ok(r)
}

pub fn alia_polynomial(args: &GroupArgs, chi: &str, lie: &str, cap: u32) -> Result<Report> {
    let t = parse::table(args)?;
    if t.spec().order() > cap {
        return Err(Usage(format!(
            "{} has order {} above --degree-cap {cap}; raise the cap to run it",
            t.spec().label(),
            t.spec().order()
        ))
        .into());
    }
    let family = LieFamily::parse(lie)?;
    parse::character(&t, chi)?;
    let (ls, rep) = lie_spec(&t, family, chi)?;
    let gens = polynomial_alia_generators(&ls, &rep)?;
    let ring = PrimaryRing::ground(&ground_forms_on(t.group())?);
    let sc = structure_constants(&gens, &ring)?;
    let value = json!({
        "group": t.spec().label(),
        "algebra": ls.label(),
        "ring_generators": ring.names,
        "generators": gens.iter().map(matrix_json).collect::<Vec<_>>(),
        "brackets": brackets_json(&sc.entries()),
        "antisymmetric": sc.is_antisymmetric(),
        "jacobi": sc.jacobi_holds(),
    });
    let mut r = Report::new(value, Some("brackets"));
    if !(sc.is_antisymmetric() && sc.jacobi_holds()) {
        r.failed = Some(format!("Lie structure of {}", ls.label()));
    }
    Ok(r)
}

pub fn moi(nn: u32, j: u32) -> Result<Report> {
    let spec = GroupSpec::dihedral(nn);
    let gf = alia_core::forms::ground_forms(spec)?;
    let cover = cover_character_table(spec)?;
    let chi = parse::character(&cover, &format!("psi{j}"))?;
    if cover.is_spinorial(chi)? {
        return Err(Usage(format!(
            "psi{j} of the D{nn} cover is spinorial: it has no invariant vectors of degree {}",
            cover.spec().order()
        ))
        .into());
    }
    let ring = PrimaryRing::ground(&gf);
    let gens = dihedral_generators(&gf, j)?;
    let module = InvariantModule::new(&cover, chi)?;
    let vectors = module.free_generators()?;
    let mois = matrices_of_invariants(&gens, &vectors, &ring)?;
    let sc = structure_constants(&gens, &ring)?;
    let preserves = preserves_brackets(&mois, &sc);
    let det = moi_total_determinant(&mois, &ring, &sl2_basis(gf.forms[0].conductor()))?;
    let matrices: Vec<Value> = gens
        .iter()
        .zip(&mois)
        .map(|(g, a)| json!({"generator": g.label, "degree": a.degree, "entries": a.rendered()}))
        .collect();
    let value = json!({
        "N": nn,
        "j": j,
        "ring_generators": ring.names,
        "vectors": vectors.iter().map(vector_json).collect::<Vec<_>>(),
        "matrices": matrices,
        "preserves_brackets": preserves,
        "total_determinant": det.to_string(),
    });
    let mut r = Report::new(value, Some("matrices"));
    if !preserves {
        r.failed = Some(format!("matrices of invariants of D{nn} j={j} preserve brackets"));
    }
    Ok(r)
}

// evaluate -------------------------------------------------------------------

#[derive(Args)]
pub struct EvaluateArgs {
    /// Group; the icosahedral group has irreducibles of every dimension up to 6.
    #[arg(long = "group", visible_alias = "kind", default_value = "Y")]
    group: String,
    #[arg(long = "N", visible_alias = "n")]
    n: Option<u32>,
    #[arg(long)]
    cover: bool,
    /// Character; with --lie it defaults to the first one of dimension --dim that fits.
    #[arg(long = "char")]
    chi: Option<String>,
    /// sl, so or sp: report the fixed subalgebra at exceptional orbits.
    #[arg(long)]
    lie: Option<String>,
    #[arg(long)]
    dim: Option<u32>,
    /// a, b, c, or all.
    #[arg(long, default_value = "all")]
    orbit: String,
    /// Pole of the invariant vectors: a, b, c or generic:CA,CB.
    #[arg(long)]
    pole: Option<String>,
    /// Evaluation point: inf, a, b, c or a rational.
    #[arg(long)]
    point: Option<String>,
}

pub fn evaluate(a: &EvaluateArgs) -> Result<Report> {
    let group = GroupArgs { group: a.group.clone(), n: a.n, cover: a.cover };
    let t = parse::table(&group)?;
    match (&a.lie, &a.pole, &a.point) {
        (Some(lie), None, None) => evaluate_lie(&t, a, lie),
        (None, Some(pole), Some(point)) => evaluate_module_at(&t, a.chi.as_deref(), pole, point),
        _ => Err(Usage("evaluate needs either --lie, or both --pole and --point".into()).into()),
    }
}

fn evaluate_lie(t: &CharacterTable, a: &EvaluateArgs, lie: &str) -> Result<Report> {
    let family = LieFamily::parse(lie)?;
    let chi = match (&a.chi, a.dim) {
        (Some(name), _) => parse::character(t, name)?,
        (None, Some(d)) => (0..t.characters().len())
            .find(|&c| t.degree(c) == d && LieSpec::new(family, t, c).is_ok())
            .ok_or_else(|| Usage(format!("{} has no character of dimension {d} carrying {family}", t.spec().label())))?,
        (None, None) => return Err(Usage("--lie needs --dim or --char".into()).into()),
    };
    let spec = LieSpec::new(family, t, chi)?;
    let orbits: Vec<usize> = match a.orbit.as_str() {
        "all" => (0..t.spec().omega()).collect(),
        o => match OrbitType::parse(o)?.index() {
            Some(i) => vec![i],
            None => return Err(Usage("--orbit must be a, b, c or all".into()).into()),
        },
    };
    let rows = orbits
        .iter()
        .map(|&i| {
            let d = fixed_lie_subalgebra(&spec, i)?;
            Ok(json!({
                "orbit": OrbitType::exceptional(i).to_string(),
                "subalgebra": d.normal_form(),
                "dimension": d.dimension(),
                "eigenvalue_multiplicities": eigenvalue_multiplicities(t, chi, i)?,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let value = json!({
        "group": t.spec().label(),
        "character": t.name(chi),
        "algebra": spec.label(),
        "dimension": spec.dimension(),
        "orbits": rows,
    });
    Ok(Report::new(value, Some("orbits")))
}

fn evaluate_module_at(t: &CharacterTable, chi: Option<&str>, pole: &str, point: &str) -> Result<Report> {
    let chi = parse::character(t, chi.ok_or_else(|| Usage("--pole needs --char".into()))?)?;
    let gf = ground_forms_on(t.group())?;
    let pole = parse::pole(pole, &gf)?;
    let mu = parse::point(point, &gf)?;
    let module = InvariantModule::new(t, chi)?;
    let e = evaluate_module(&module, &pole, &mu)?;
    let fixed = stabiliser_fixed_dim(t, chi, &mu)?;
    let value = json!({
        "group": t.spec().label(),
        "character": t.name(chi),
        "pole": pole.orbit_type.to_string(),
        "point": mu.to_string(),
        "point_orbit": gf.orbit_type_of(&mu).to_string(),
        "dimension": e.dimension,
        "stabiliser_fixed_dimension": fixed,
        "basis": e.basis.iter().map(|v| strings(v)).collect::<Vec<_>>(),
    });
    let mut r = Report::new(value, Some("basis"));
    if e.dimension as u32 != fixed {
        r.failed = Some(format!(
            "evaluated dimension {} against stabiliser-fixed dimension {fixed}",
            e.dimension
        ));
    }
    Ok(r)
}

// rootcoh --------------------------------------------------------------------

#[derive(Args)]
pub struct EnumerateArgs {
    /// A1, A1xA1, A2, B2 or A3.
    #[arg(long)]
    phi: String,
    /// Norm per coordinate, e.g. 3,3.
    #[arg(long, conflicts_with = "pole", required_unless_present = "pole")]
    kappa: Option<String>,
    /// Take the norm from a pole orbit instead of --kappa.
    #[arg(long)]
    pole: Option<String>,
    /// Only cochains with values in {0, 1}.
    #[arg(long)]
    cap01: bool,
    /// Group coboundaries up to root-system automorphisms.
    #[arg(long)]
    classify: bool,
    /// Also identify classes under swapping coordinates of equal norm.
    #[arg(long)]
    swap_equal_kappa: bool,
    /// Include the bracket table of each algebra.
    #[arg(long)]
    brackets: bool,
    /// Write one DOT graph per result to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
}

fn support_json(rs: &RootSystem, w: &Cochain1) -> Vec<Value> {
    (0..rs.len())
        .filter(|&k| w.values[k].iter().any(|&x| x != 0))
        .map(|k| json!({"root": rs.label(k), "value": w.values[k]}))
        .collect()
}

fn edges_json(rs: &RootSystem, w: &Cochain2) -> Vec<Value> {
    rs.unordered_pairs()
        .into_iter()
        .filter_map(|(i, j)| {
            let v = w.get(rs, i, j)?;
            v.iter()
                .any(|&x| x != 0)
                .then(|| json!({"roots": [rs.label(i), rs.label(j)], "value": v}))
        })
        .collect()
}

fn bracket_table(rs: &RootSystem, w: &Cochain2) -> std::result::Result<Vec<Value>, String> {
    let alg = match assoc_lie_algebra(rs, w) {
        Ok(a) => a,
        Err(witness) => {
            let names = AssocAlgebra::from_cochain_unchecked(rs, w).names;
            return Err(witness.describe(&names));
        }
    };
    let mut out = Vec::new();
    for x in 0..alg.size() {
        for y in x + 1..alg.size() {
            let terms = alg.bracket(x, y);
            if !terms.is_empty() {
                out.push(json!({
                    "left": alg.names[x],
                    "right": alg.names[y],
                    "bracket": alg.render_term_list(terms),
                }));
            }
        }
    }
    Ok(out)
}

pub fn rootcoh_enumerate(a: &EnumerateArgs) -> Result<Report> {
    let kind = RootSystemKind::parse(&a.phi)?;
    let kappa = match (&a.kappa, &a.pole) {
        (Some(k), _) => parse::list(k)?,
        (None, Some(p)) => kappa_constraint(kind, PoleOrbit::parse(p)?).to_vec(),
        (None, None) => unreachable!("clap requires one of --kappa, --pole"),
    };
    let rs = build_root_system(kind);
    let sols = enumerate_cochains(&rs, &kappa, a.cap01)?;
    let mut failed = None;
    let mut dots = Vec::new();
    let mut results = Vec::new();
    // (coboundary, integrating cochain, cochains represented)
    let items: Vec<(Cochain2, Cochain1, usize)> = if a.classify {
        let swaps = if a.swap_equal_kappa { equal_kappa_swaps(&kappa) } else { Vec::new() };
        classify_cochains(&rs, &sols, &swaps)
            .into_iter()
            .map(|c| (c.coboundary, c.cochain, c.cochains_in_class))
            .collect()
    } else {
        sols.iter().map(|w| (coboundary1(&rs, w), w.clone(), 1)).collect()
    };
    for (i, (d, w, count)) in items.iter().enumerate() {
        let mut entry = json!({
            "index": i,
            "cochain": support_json(&rs, w),
            "edges": edges_json(&rs, d),
        });
        if a.classify {
            entry["cochains_in_class"] = json!(count);
        }
        if a.brackets {
            match bracket_table(&rs, d) {
                Ok(b) => entry["brackets"] = json!(b),
                Err(why) => {
                    failed.get_or_insert(format!("Jacobi identity for result {i}: {why}"));
                }
            }
        }
        if a.dot.is_some() {
            dots.push(to_dot(&rs, d, Some(w), &format!("{}_{}", kind.name(), i)));
        }
        results.push(entry);
    }
    let key = if a.classify { "classes" } else { "cochains" };
    let mut value = json!({
        "phi": kind.name(),
        "kappa": kappa,
        "cap01": a.cap01,
        "roots": (0..rs.len()).map(|k| rs.label(k)).collect::<Vec<_>>(),
        "solutions": sols.len(),
    });
    if a.classify {
        value["swap_equal_kappa"] = json!(a.swap_equal_kappa);
        value["class_count"] = json!(items.len());
    }
    value[key] = json!(results);
    let mut r = Report::new(value, Some(key));
    r.dot = a.dot.clone().map(|p| (p, dots.concat()));
    r.failed = failed;
    Ok(r)
}

pub fn rootcoh_kappa(phi: &str, pole: &str) -> Result<Report> {
    let kind = RootSystemKind::parse(phi)?;
    let p = PoleOrbit::parse(pole)?;
    let kappa = kappa_constraint(kind, p);
    Ok(Report::new(json!({"phi": kind.name(), "pole": pole, "kappa": kappa}), None))
}
