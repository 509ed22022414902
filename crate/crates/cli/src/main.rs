mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cbhom::catalog::{builtin_catalog, find, load_catalog, GroupCatalogEntry};
use cbhom::cb::{CbBound, CbError, CbSettings};
use cbhom::lab::{
    approximate_diagonal, build_phi_alpha, cb_sandwich, classify, classify_partial, exhaustive_theorem_scan, extract_alpha,
    idempotent_report, range_characterization, LabError, LabSettings, PairContext, ScanSettings, Tolerances,
};
use cbhom::lattice::{covering_witness, expr, graph_decompose, Coverage, LatticeCoset};
use cbhom::mapfile::{parse_map_file, MapFile};
use cbhom::repr::{a_norm, a_norm_oracle, compute_irreps, FunctionOnGroup, ReprError, ORACLE_BOUND};
use cbhom::scalar::Cx;
use cbhom::sdp::SdpSettings;
use cbhom::ElementSet;

use report::{Budgets, Report, RunConfig, Status};

/// Largest group order for which `idempotent-scan` enumerates all subsets.
const SUBSET_SCAN_BOUND: usize = 14;
/// Half-width of the box on which lattice decompositions are checked.
const LATTICE_BOX: i64 = 12;

#[derive(Parser, Debug)]
#[command(name = "cbhom", version, about = "Fourier algebra homomorphisms of finite groups: norms, cb norms and classification")]
struct Cli {
    /// Seed for all randomised steps.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Solver tolerance used in contractivity and agreement checks.
    #[arg(long = "tol-solver", default_value_t = 1e-6, global = true)]
    tol_solver: f64,
    /// Largest number of partial maps a scan may enumerate.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    budget: u128,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Additional group catalog file.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fourier algebra norm of a function: comma-separated values, or `{a,b,...}` for an indicator.
    Norm { group: String, function: String },
    /// Norms of all idempotents `1_S` of one group, or of every catalog group with `all`.
    IdempotentScan { group: String },
    /// cb-norm sandwich of the map in a map file.
    Cbnorm { map_file: PathBuf },
    /// Builds `Φ_α` from a map file and checks it is a homomorphism.
    Phi { map_file: PathBuf },
    /// Classifies the homomorphism in a map file.
    Classify { map_file: PathBuf },
    /// Classifies every partial map `α: Y ⊆ H → G`.
    TheoremScan { g: String, h: String },
    /// Lattice coset-ring tools.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// The diagonal indicator on `G×G` from the regular representations.
    Diagonal { group: String },
}

#[derive(Subcommand, Debug)]
enum LatticeAction {
    /// Writes a graph set as a piecewise-affine map.
    Decompose { expr_file: PathBuf },
    /// Decides whether the cosets in a file cover the whole lattice.
    Cover { expr_file: PathBuf },
}

/// Failure carrying its exit status.
struct Failure(Status, String);

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        let status = match &e {
            LabError::Repr(r) => repr_status(r),
            LabError::Cb(c) => cb_status(c),
            LabError::Inconsistent(_) => Status::Inconsistent,
            _ => Status::InputError,
        };
        Failure(status, e.to_string())
    }
}

impl From<ReprError> for Failure {
    fn from(e: ReprError) -> Self {
        Failure(repr_status(&e), e.to_string())
    }
}

fn repr_status(e: &ReprError) -> Status {
    match e {
        ReprError::Solver(_) | ReprError::OracleDisagreement { .. } | ReprError::ToleranceNotMet { .. } => Status::SolverFailure,
        _ => Status::InputError,
    }
}

fn cb_status(e: &CbError) -> Status {
    match e {
        CbError::Solver(_) | CbError::NonConvergence { .. } => Status::SolverFailure,
        _ => Status::InputError,
    }
}

fn input(e: impl ToString) -> Failure {
    Failure(Status::InputError, e.to_string())
}

struct Ctx {
    catalog: Vec<GroupCatalogEntry>,
    lab: LabSettings,
    config: RunConfig,
}

impl Ctx {
    fn group(&self, name: &str) -> Result<&GroupCatalogEntry, Failure> {
        find(&self.catalog, name).ok_or_else(|| input(format!("unknown group {name}")))
    }

    fn map_file(&self, path: &PathBuf) -> Result<MapFile, Failure> {
        let src = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        parse_map_file(&src, &self.catalog).map_err(input)
    }
}

fn bound_json(b: &CbBound<f64>) -> Value {
    json!({ "lower": b.lower, "upper": b.upper, "level": b.level, "relative_gap": b.relative_gap() })
}

fn cx_json(z: Cx<f64>) -> Value {
    json!([z.re, z.im])
}

fn parse_value(tok: &str) -> Option<Cx<f64>> {
    let t: String = tok.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().ok().map(|re| Cx::new(re, 0.0));
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(k, c)| (c == '+' || c == '-') && !body[..k].ends_with(['e', 'E']))
        .map(|(k, _)| k)
        .last();
    let coeff = |s: &str| match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        s => s.parse().ok(),
    };
    match split {
        Some(k) => Some(Cx::new(body[..k].parse().ok()?, coeff(&body[k..])?)),
        None => Some(Cx::new(0.0, coeff(body)?)),
    }
}

fn parse_function(entry: &GroupCatalogEntry, spec: &str) -> Result<FunctionOnGroup<f64>, Failure> {
    let g = &entry.group;
    let spec = spec.trim();
    if let Some(inner) = spec.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let members = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| entry.element(t).ok_or_else(|| input(format!("'{t}' is not an element of {}", entry.name))))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(FunctionOnGroup::indicator(&ElementSet::new(g, members)));
    }
    let values = spec
        .split(',')
        .map(|t| parse_value(t).ok_or_else(|| input(format!("cannot read value '{}'", t.trim()))))
        .collect::<Result<Vec<_>, _>>()?;
    FunctionOnGroup::new(g, values).map_err(input)
}

fn cmd_norm(ctx: &Ctx, r: &mut Report, group: &str, function: &str) -> Result<(), Failure> {
    let entry = ctx.group(group)?;
    let u = parse_function(entry, function)?;
    let irreps = compute_irreps(&entry.group, ctx.config.tolerances.algebraic, ctx.lab.seed)?;
    let f = a_norm(&u, &irreps)?;
    let tol = ctx.config.tolerances.solver;
    let alg = ctx.config.tolerances.algebraic;
    r.say(format!("‖u‖_A on {} = {:.12}", entry.name, f.a_norm));
    let e = entry.group.identity();
    if f.is_positive_definite {
        r.check("positive-definite-norm", (f.a_norm - u.at(e).re).abs() <= alg, format!("‖u‖ = {} vs u(e) = {}", f.a_norm, u.at(e).re));
    }
    r.check("sup-bound", u.sup_norm() <= f.a_norm + alg, format!("sup {} ≤ ‖u‖ {}", u.sup_norm(), f.a_norm));
    let oracle = if entry.order() <= ORACLE_BOUND && 4 * entry.order() <= ctx.config.budgets.sdp_size {
        let o = a_norm_oracle(&u, &SdpSettings::default())?;
        r.check(
            "oracle-agreement",
            (o.primal - f.a_norm).abs() <= tol && (o.dual - f.a_norm).abs() <= tol,
            format!("formula {} primal {} dual {}", f.a_norm, o.primal, o.dual),
        );
        r.say(format!("trace-norm oracle: primal {:.12}, dual {:.12}", o.primal, o.dual));
        json!({ "primal": o.primal, "dual": o.dual, "iterations": o.iterations })
    } else {
        Value::Null
    };
    r.result = json!({
        "group": entry.name,
        "values": u.values().iter().map(|&z| cx_json(z)).collect::<Vec<_>>(),
        "a_norm": f.a_norm,
        "positive_definite": f.is_positive_definite,
        "oracle": oracle,
    });
    Ok(())
}

fn cmd_idempotent_scan(ctx: &Ctx, r: &mut Report, which: &str) -> Result<(), Failure> {
    let groups: Vec<&GroupCatalogEntry> = if which == "all" { ctx.catalog.iter().collect() } else { vec![ctx.group(which)?] };
    let mut out = Vec::new();
    for entry in groups {
        let g = &entry.group;
        if g.order() > SUBSET_SCAN_BOUND {
            return Err(input(format!("{} has order {}, above the subset scan bound {SUBSET_SCAN_BOUND}", entry.name, g.order())));
        }
        let irreps = compute_irreps(g, ctx.config.tolerances.algebraic, ctx.lab.seed)?;
        let (mut subsets, mut norm_one, mut cosets, mut subgroups, mut pd) = (0u64, 0u64, 0u64, 0u64, 0u64);
        let mut min_noncoset = f64::INFINITY;
        let mut violations = Vec::new();
        for mask in 1u64..1 << g.order() {
            let rep = idempotent_report(&ElementSet::from_mask(g, mask), &irreps)?;
            subsets += 1;
            norm_one += u64::from((rep.norm - 1.0).abs() <= 1e-6);
            cosets += u64::from(rep.is_coset);
            subgroups += u64::from(rep.is_subgroup);
            pd += u64::from(rep.is_positive_definite);
            if !rep.is_coset {
                min_noncoset = min_noncoset.min(rep.norm);
            }
            if !rep.consistent {
                violations.push(json!({ "support": rep.support.members(), "norm": rep.norm }));
            }
        }
        r.check(
            format!("idempotents/{}", entry.name),
            violations.is_empty(),
            format!("{subsets} subsets, {norm_one} of norm 1, {cosets} cosets, {} violations", violations.len()),
        );
        r.say(format!(
            "{}: {subsets} nonempty subsets, {norm_one} with norm 1, {cosets} cosets, {subgroups} subgroups, {pd} positive definite",
            entry.name
        ));
        out.push(json!({
            "group": entry.name,
            "order": g.order(),
            "abelian": g.is_abelian(),
            "subsets": subsets,
            "norm_one": norm_one,
            "cosets": cosets,
            "subgroups": subgroups,
            "positive_definite": pd,
            "min_noncoset_norm": if min_noncoset.is_finite() { json!(min_noncoset) } else { Value::Null },
            "violations": violations,
        }));
    }
    r.result = json!({ "groups": out });
    Ok(())
}

fn cmd_cbnorm(ctx: &Ctx, r: &mut Report, path: &PathBuf) -> Result<(), Failure> {
    let mf = ctx.map_file(path)?;
    let bound = match mf.partial_map() {
        Some(pm) => {
            let pc = PairContext::new(pm.source(), pm.target(), ctx.lab.seed, ctx.lab.tol)?;
            classify_partial(&pc, pm, &ctx.lab)?.cb
        }
        None => cb_sandwich(&mf.linear_map(), &ctx.lab)?,
    };
    r.say(format!("‖Φ‖_cb ∈ [{:.9}, {:.9}] ({} -> {})", bound.lower, bound.upper, mf.source, mf.target));
    r.check("sandwich-ordered", bound.lower <= bound.upper + ctx.config.tolerances.solver, format!("{} ≤ {}", bound.lower, bound.upper));
    r.result = json!({ "source": mf.source, "target": mf.target, "cb": bound_json(&bound) });
    if bound.relative_gap() > ctx.config.tolerances.cb_gap {
        return Err(Failure(Status::SolverFailure, format!("relative gap {} exceeds {}", bound.relative_gap(), ctx.config.tolerances.cb_gap)));
    }
    Ok(())
}

fn cmd_phi(ctx: &Ctx, r: &mut Report, path: &PathBuf) -> Result<(), Failure> {
    let mf = ctx.map_file(path)?;
    let phi = mf.linear_map();
    let alpha = extract_alpha(&phi)?;
    r.check("multiplicative", true, "Φ(δ_s δ_t) = Φδ_s · Φδ_t on the δ-basis");
    r.check("round-trip", build_phi_alpha::<f64>(&alpha) == phi, "build_phi_alpha(extract_alpha(Φ)) = Φ");
    let range = range_characterization(&phi)?;
    r.check("range", range.equal, format!("subspace dimension {} vs column rank {}", range.subspace_dimension, range.column_rank));
    let matrix: Vec<Vec<f64>> = (0..phi.matrix().nrows()).map(|h| phi.matrix().row(h).iter().map(|z| z.re).collect()).collect();
    r.say(format!("Φ_α: A({}) -> A({}), domain {:?}", mf.target, mf.source, alpha.domain().members()));
    r.result = json!({
        "source": mf.source,
        "target": mf.target,
        "alpha": alpha.pairs().collect::<Vec<_>>(),
        "matrix": matrix,
        "range": {
            "vanishing": range.vanishing,
            "classes": range.classes,
            "dimension": range.subspace_dimension,
            "column_rank": range.column_rank,
        },
    });
    Ok(())
}

fn cmd_classify(ctx: &Ctx, r: &mut Report, path: &PathBuf) -> Result<(), Failure> {
    let mf = ctx.map_file(path)?;
    let rep = classify(&mf.linear_map(), &ctx.lab)?;
    r.check("consistent", rep.consistent, "completely contractive ⟺ affine, completely positive ⟺ subgroup homomorphism");
    r.check(
        "decomposition-bounds",
        rep.bounds_hold,
        format!("upper {} vs singleton {} and greedy {}", rep.cb.upper, rep.singleton_bound, rep.decomposition_bound),
    );
    r.say(format!(
        "affine {}, subgroup homomorphism {}, completely positive {}, cb ∈ [{:.9}, {:.9}], {:?}",
        rep.is_affine, rep.is_subgroup_homomorphism, rep.completely_positive, rep.cb.lower, rep.cb.upper, rep.completely_contractive
    ));
    r.result = json!({
        "source": mf.source,
        "target": mf.target,
        "is_algebra_homomorphism": rep.is_algebra_homomorphism,
        "alpha": rep.alpha.as_ref().map(|a| a.pairs().collect::<Vec<_>>()),
        "domain": rep.domain.members(),
        "is_piecewise_affine": rep.is_piecewise_affine,
        "pieces": rep.pieces.iter().map(|p| p.members().to_vec()).collect::<Vec<_>>(),
        "is_affine": rep.is_affine,
        "is_subgroup_homomorphism": rep.is_subgroup_homomorphism,
        "degenerate": rep.degenerate,
        "cb": bound_json(&rep.cb),
        "completely_contractive": format!("{:?}", rep.completely_contractive),
        "completely_positive": rep.completely_positive,
        "singleton_bound": rep.singleton_bound,
        "decomposition_bound": rep.decomposition_bound,
        "consistent": rep.consistent,
    });
    Ok(())
}

fn cmd_theorem_scan(ctx: &Ctx, r: &mut Report, g: &str, h: &str) -> Result<(), Failure> {
    let (ge, he) = (ctx.group(g)?, ctx.group(h)?);
    let pc = PairContext::new(&he.group, &ge.group, ctx.lab.seed, ctx.lab.tol)?;
    let settings = ScanSettings { seed: ctx.lab.seed, budget: ctx.config.budgets.scan_budget, tol: ctx.lab.tol, extended_choi: true };
    let s = exhaustive_theorem_scan(&pc, &settings)?;
    r.check("consistent", s.inconsistent == 0, format!("{} of {} maps inconsistent", s.inconsistent, s.total));
    r.check("composition-bound", s.bound_violations == 0, format!("{} violations", s.bound_violations));
    r.check("affine-contractive", s.max_affine_upper <= 1.0 + 1e-3, format!("largest affine upper bound {}", s.max_affine_upper));
    r.check(
        "extended-choi",
        s.extended_choi_failures == 0,
        format!("{} of {} positive maps failed", s.extended_choi_failures, s.extended_choi_checked),
    );
    r.say(format!(
        "{} -> {}: {} maps, {} affine, {} subgroup homomorphisms, {} completely positive, {} completely contractive",
        he.name, ge.name, s.total, s.affine, s.subgroup_homomorphisms, s.completely_positive, s.completely_contractive
    ));
    let record = |m: &cbhom::lab::MapRecord| {
        json!({
            "alpha": m.dense,
            "cb": bound_json(&m.cb),
            "affine": m.affine,
            "subgroup_homomorphism": m.subgroup_homomorphism,
            "completely_positive": m.completely_positive,
            "contractivity": format!("{:?}", m.contractivity),
        })
    };
    r.result = json!({
        "g": ge.name,
        "h": he.name,
        "total": s.total,
        "degenerate": s.degenerate,
        "affine": s.affine,
        "subgroup_homomorphisms": s.subgroup_homomorphisms,
        "completely_positive": s.completely_positive,
        "completely_contractive": s.completely_contractive,
        "inconsistent": s.inconsistent,
        "inconsistent_examples": s.inconsistent_examples.iter().map(record).collect::<Vec<_>>(),
        "worst_gap": s.worst_gap,
        "worst_gap_map": s.worst_gap_map.as_ref().map(record),
        "max_affine_upper": s.max_affine_upper,
        "max_bound_ratio": s.max_bound_ratio,
        "min_nonaffine_lower": if s.min_nonaffine_lower.is_finite() { json!(s.min_nonaffine_lower) } else { Value::Null },
        "extended_choi_checked": s.extended_choi_checked,
        "min_noncoset_idempotent_norm": s.min_noncoset_idempotent_norm,
    });
    Ok(())
}

fn coset_json(c: &LatticeCoset<i64>) -> Value {
    json!({ "offset": c.offset(), "basis": c.lattice().basis() })
}

fn read_expr(path: &PathBuf) -> Result<expr::LatticeExpr, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    expr::parse(&src).map_err(input)
}

/// Calls `f` on every point of `[-r, r]^d`.
fn for_box(d: usize, r: i64, mut f: impl FnMut(&[i64]) -> bool) -> bool {
    let mut p = vec![-r; d];
    loop {
        if !f(&p) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == d {
                return true;
            }
            p[i] += 1;
            if p[i] <= r {
                break;
            }
            p[i] = -r;
            i += 1;
        }
    }
}

fn cmd_lattice_decompose(r: &mut Report, path: &PathBuf) -> Result<(), Failure> {
    let e = read_expr(path)?;
    let split = e.split.ok_or_else(|| input("decomposition needs a 'split' line"))?;
    let pw = graph_decompose(&e.set, split).map_err(input)?;
    let radius = (1..=LATTICE_BOX).rev().find(|&k| (2 * k + 1).pow(e.dim as u32) <= 200_000).unwrap_or(1);
    let agrees = for_box(e.dim, radius, |p| {
        let in_set = e.set.contains(p).unwrap_or(false);
        let from_map = pw.evaluate(&p[..split]).ok().flatten().is_some_and(|y| y == p[split..]);
        in_set == from_map
    });
    r.check("graph-round-trip", agrees, format!("pointwise equality on [-{radius}, {radius}]^{}", e.dim));
    r.say(format!("{} pieces", pw.pieces().len()));
    let pieces: Vec<Value> = pw
        .pieces()
        .iter()
        .map(|(piece, map)| {
            json!({
                "domain": coset_json(piece.base()),
                "holes": piece.holes().iter().map(coset_json).collect::<Vec<_>>(),
                "image_offset": map.image_offset(),
                "linear": map.linear(),
            })
        })
        .collect();
    r.result = json!({ "dim": e.dim, "split": split, "pieces": pieces });
    Ok(())
}

fn cmd_lattice_cover(r: &mut Report, path: &PathBuf) -> Result<(), Failure> {
    let e = read_expr(path)?;
    if e.set.pieces().iter().any(|p| !p.holes().is_empty()) {
        return Err(input("cover expects plain cosets without 'minus'"));
    }
    let cosets: Vec<LatticeCoset<i64>> = e.set.pieces().iter().map(|p| p.base().clone()).collect();
    let result = match covering_witness(&cosets, e.dim) {
        Coverage::Covered => {
            r.say("the cosets cover the lattice");
            json!({ "covered": true, "witness": Value::Null })
        }
        Coverage::Uncovered(x) => {
            let outside = cosets.iter().all(|c| !c.contains(&x).unwrap_or(true));
            r.check("witness-uncovered", outside, format!("{x:?} lies in no coset"));
            r.say(format!("uncovered point {x:?}"));
            json!({ "covered": false, "witness": x })
        }
    };
    r.result = result;
    Ok(())
}

fn cmd_diagonal(ctx: &Ctx, r: &mut Report, group: &str) -> Result<(), Failure> {
    let entry = ctx.group(group)?;
    let irreps = compute_irreps(&entry.group, ctx.config.tolerances.algebraic, ctx.lab.seed)?;
    let d = approximate_diagonal(&irreps)?;
    let alg = ctx.config.tolerances.algebraic;
    r.check("indicator-of-diagonal", d.is_diagonal_indicator && d.diagonal_is_subgroup, "w = 1_Δ and Δ is a subgroup");
    r.check("positive-definite", d.is_positive_definite, "Gram matrix of w is positive semidefinite");
    r.check("norm-one", (d.norm - 1.0).abs() <= alg, format!("‖w‖ = {}", d.norm));
    r.say(format!("{}: ‖1_Δ‖ = {:.12} on a group of order {}", entry.name, d.norm, d.w.group().order()));
    r.result = json!({ "group": entry.name, "product_order": d.w.group().order(), "norm": d.norm, "positive_definite": d.is_positive_definite });
    Ok(())
}

fn command_name(c: &Command) -> (&'static str, Vec<String>) {
    let p = |x: &PathBuf| x.display().to_string();
    match c {
        Command::Norm { group, function } => ("norm", vec![group.clone(), function.clone()]),
        Command::IdempotentScan { group } => ("idempotent-scan", vec![group.clone()]),
        Command::Cbnorm { map_file } => ("cbnorm", vec![p(map_file)]),
        Command::Phi { map_file } => ("phi", vec![p(map_file)]),
        Command::Classify { map_file } => ("classify", vec![p(map_file)]),
        Command::TheoremScan { g, h } => ("theorem-scan", vec![g.clone(), h.clone()]),
        Command::Lattice { action: LatticeAction::Decompose { expr_file } } => ("lattice decompose", vec![p(expr_file)]),
        Command::Lattice { action: LatticeAction::Cover { expr_file } } => ("lattice cover", vec![p(expr_file)]),
        Command::Diagonal { group } => ("diagonal", vec![group.clone()]),
    }
}

fn run(cli: &Cli, report: &mut Report) -> Result<(), Failure> {
    if !(cli.tol_solver > 0.0) {
        return Err(input("--tol-solver must be positive"));
    }
    let mut catalog = builtin_catalog();
    if let Some(path) = &cli.catalog {
        catalog.extend(load_catalog(path).map_err(input)?);
    }
    let max = report.config.budgets.max_group_order;
    if let Some(e) = catalog.iter().find(|e| e.order() > max) {
        return Err(input(format!("{} has order {}, above the limit {max}", e.name, e.order())));
    }
    let tol = Tolerances { algebraic: report.config.tolerances.algebraic, contractive: cli.tol_solver };
    let cb = CbSettings { seed: cli.seed, gap: report.config.tolerances.cb_gap, ..CbSettings::default() };
    let ctx = Ctx { catalog, lab: LabSettings { seed: cli.seed, tol, cb }, config: report.config.clone() };
    match &cli.command {
        Command::Norm { group, function } => cmd_norm(&ctx, report, group, function),
        Command::IdempotentScan { group } => cmd_idempotent_scan(&ctx, report, group),
        Command::Cbnorm { map_file } => cmd_cbnorm(&ctx, report, map_file),
        Command::Phi { map_file } => cmd_phi(&ctx, report, map_file),
        Command::Classify { map_file } => cmd_classify(&ctx, report, map_file),
        Command::TheoremScan { g, h } => cmd_theorem_scan(&ctx, report, g, h),
        Command::Lattice { action: LatticeAction::Decompose { expr_file } } => cmd_lattice_decompose(report, expr_file),
        Command::Lattice { action: LatticeAction::Cover { expr_file } } => cmd_lattice_cover(report, expr_file),
        Command::Diagonal { group } => cmd_diagonal(&ctx, report, group),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::InputError.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let config = RunConfig {
        tolerances: report::Tolerances { algebraic: 1e-9, solver: cli.tol_solver, cb_gap: 1e-3 },
        seed: cli.seed,
        budgets: Budgets { max_group_order: 24, scan_budget: cli.budget, sdp_size: 300 },
        output: cli.out.as_ref().map(|p| p.display().to_string()),
    };
    let (name, args) = command_name(&cli.command);
    let mut report = Report::new(name, args, config);
    if let Err(Failure(status, message)) = run(&cli, &mut report) {
        report.fail(status, message);
    }
    let report = report.finish();
    let json = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(Status::InputError.code() as u8);
            }
            for line in &report.summary {
                println!("{line}");
            }
        }
        None => {
            for line in &report.summary {
                eprintln!("{line}");
            }
            print!("{json}");
        }
    }
    ExitCode::from(report.exit_code as u8)
}
