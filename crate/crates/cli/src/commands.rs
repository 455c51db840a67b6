use std::path::{Path, PathBuf};

use roe_core::approx::{approx_relation, operator_to_map, ApproxParams, BoundedMode};
use roe_core::coarse_map::{transpose_inverse_check, InverseReport};
use roe_core::covering::{cover, CoveringVerification};
use roe_core::gen::{gen, SpaceKind};
use roe_core::io::{
    self, load_partition, operator_file, read_json, relative_path, resolve, Loader, ModuleFile,
    OperatorFile, SpaceFile,
};
use roe_core::locality::{app_profile, propagation, ql_profile, AppOptions, QlMode};
use roe_core::rigidity::{concentration_check, roundtrip, uniformization_probe, ConcentrationInputs, ProbeOptions};
use roe_core::{Dist, ModuleOperator, Profile};
use serde::Serialize;

use crate::{
    AnalyzeArgs, Command, ConcentrationArgs, CoverArgs, Failure, GenSpaceArgs, PhiArgs, PhiParams,
    ProbeArgs, RoundtripArgs,
};

type Res = Result<(), Failure>;

pub fn run(cmd: Command, tol: f64) -> Res {
    match cmd {
        Command::GenSpace(a) => gen_space(a),
        Command::Analyze(a) => analyze(a, tol),
        Command::Cover(a) => cover_cmd(a),
        Command::Phi(a) => phi(a),
        Command::Roundtrip(a) => roundtrip_cmd(a),
        Command::Concentration(a) => concentration(a),
        Command::ProbeUniformization(a) => probe(a),
    }
}

fn emit_text(out: &Option<PathBuf>, text: &str) -> Res {
    match out {
        Some(p) => io::write_text(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Res {
    emit_text(out, &io::to_json_string(value)?)
}

/// Directory against which paths written into the output are made relative.
fn out_dir(out: &Option<PathBuf>) -> PathBuf {
    match out.as_ref().and_then(|p| p.parent()) {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn params(p: &PhiParams) -> Result<ApproxParams, Failure> {
    let mode: BoundedMode = p.mode.parse()?;
    Ok(ApproxParams::new(p.delta, p.r.value(), p.big_r.value(), mode)?)
}

fn radii_or_grid(t: &ModuleOperator, given: &[Dist]) -> Vec<Dist> {
    if given.is_empty() {
        t.source().space().realized_distances().to_vec()
    } else {
        given.to_vec()
    }
}

fn gen_space(a: GenSpaceArgs) -> Res {
    let kind: SpaceKind = a.kind.parse()?;
    let space = gen(kind, &a.params, a.seed)?;
    emit(&a.o, &SpaceFile::from_space(&space))
}

#[derive(Serialize)]
struct AnalyzeReport {
    source_points: usize,
    target_points: usize,
    rows: usize,
    cols: usize,
    tol: f64,
    norm: f64,
    propagation: Dist,
    ql: Profile,
    app: Profile,
}

fn analyze(a: AnalyzeArgs, tol: f64) -> Res {
    let t = Loader::new().operator(&a.op)?;
    let radii = radii_or_grid(&t, &a.radii);
    let mode = if a.exact_ql { QlMode::Exact } else { QlMode::Bounds };
    let report = AnalyzeReport {
        source_points: t.source().space().len(),
        target_points: t.target().space().len(),
        rows: t.matrix().rows(),
        cols: t.matrix().cols(),
        tol,
        norm: t.norm(),
        propagation: propagation(&t, tol)?,
        ql: ql_profile(&t, &radii, mode)?,
        app: app_profile(&t, &radii, AppOptions::default())?,
    };
    emit(&a.o, &report)
}

#[derive(Serialize)]
struct CoverReport {
    #[serde(flatten)]
    operator: OperatorFile,
    spill: Dist,
    verification: CoveringVerification,
}

fn cover_cmd(a: CoverArgs) -> Res {
    let mut loader = Loader::new();
    let f = loader.map(&a.map)?;
    let m = loader.module(&a.src_mult)?;
    let n = loader.module(&a.tgt_mult)?;
    let res = cover(&f, &m, &n, a.spill, a.auto_spill, a.unitary)?;
    let dir = out_dir(&a.o);
    let report = CoverReport {
        operator: operator_file(
            &res.operator,
            &relative_path(&a.src_mult, &dir),
            &relative_path(&a.tgt_mult, &dir),
        ),
        spill: res.spill,
        verification: res.verification,
    };
    emit(&a.o, &report)
}

#[derive(Serialize)]
struct PhiReport {
    source: String,
    target: String,
    pairs: Vec<(usize, usize)>,
    params: ApproxParams,
    size: usize,
    /// Extracted map; `null` where a source point has an empty fiber.
    map: Vec<Option<usize>>,
    fiber_diameter: Dist,
    domain_covering_radius: Dist,
    /// Transpose-inverse gaps of the extracted map, when it is total and controlled.
    inverse: Option<InverseReport>,
}

fn module_space(module: &Path) -> Result<PathBuf, Failure> {
    let file: ModuleFile = read_json(module)?;
    Ok(resolve(module, &file.space))
}

fn phi(a: PhiArgs) -> Res {
    let p = params(&a.params)?;
    let t = Loader::new().operator(&a.op)?;
    let file: OperatorFile = read_json(&a.op)?;
    let src = module_space(&resolve(&a.op, &file.source))?;
    let tgt = module_space(&resolve(&a.op, &file.target))?;
    let rel = approx_relation(&t, &p)?;
    let g = operator_to_map(&t, &rel);
    let mut map = vec![None; t.source().space().len()];
    for &(y, x) in g.relation.pairs() {
        map[x] = Some(y);
    }
    let inverse = if map.iter().all(Option::is_some) {
        transpose_inverse_check(&g).ok()
    } else {
        None
    };
    let dir = out_dir(&a.o);
    let report = PhiReport {
        source: relative_path(&src, &dir),
        target: relative_path(&tgt, &dir),
        pairs: rel.pairs().iter().copied().collect(),
        params: p,
        size: rel.len(),
        map,
        fiber_diameter: g.fiber_diameter,
        domain_covering_radius: g.domain_covering_radius,
        inverse,
    };
    emit(&a.o, &report)
}

fn roundtrip_cmd(a: RoundtripArgs) -> Res {
    let p = params(&a.params)?;
    let mut loader = Loader::new();
    let f = loader.map(&a.map)?;
    let m = loader.module(&a.src_mult)?;
    let n = loader.module(&a.tgt_mult)?;
    let report = roundtrip(&f, &m, &n, a.spill, &p, a.tolerance)?;
    emit(&a.o, &report)
}

fn concentration(a: ConcentrationArgs) -> Res {
    let t = Loader::new().operator(&a.op)?;
    let partition = load_partition(&a.partition)?;
    let given = ConcentrationInputs {
        eta: a.eta,
        kappa: a.kappa,
        delta: a.delta,
    };
    let report = concentration_check(&t, &partition, &a.b, &a.c, a.eps, given)?;
    emit(&a.o, &report)?;
    if report.is_counterexample() {
        return Err(Failure::new(
            "counterexample",
            format!(
                "exhaustive search found no J beating eps = {} (best {})",
                report.eps, report.best_achieved
            ),
        ));
    }
    Ok(())
}

fn probe(a: ProbeArgs) -> Res {
    let u = Loader::new().operator(&a.op)?;
    let radii = radii_or_grid(&u, &a.r);
    let profile = uniformization_probe(&u, &ProbeOptions::new(a.eps, radii, a.samples, a.seed))?;
    emit_text(&a.o, &profile.to_csv())
}
