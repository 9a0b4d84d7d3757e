//! End-to-end runs: generating set → specialization → enumeration → Cayley
//! graph → spectrum, with on-disk caching of group tables.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cayley::{
    build_cayley, cache_file_name, enumerate, CayleyGraph, Encoder, GroupTable, DEFAULT_LIMIT,
};
use crate::ct::{
    build_generating_set, lift_transvection, solve_f, BasisVec, Form, GenSet, LiftRoute,
};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldTower, RootKind};
use crate::graph::Graph;
use crate::laurent::LaurentRing;
use crate::specialize::{
    bilinear_specialize_check, classical_order, specialize, FMat, Family, SpecContext,
};
use crate::spectral::{
    expansion_report, vertex_expansion_exact, SpectralConfig, SpectralReport, DEFAULT_DENSE_BOUND,
};
use crate::weyl::{
    covolume_closed_form, covolume_partial_sums, coxeter_growth_bfs, poincare_formula,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Lift,
    Specialize,
    Enumerate,
    Graph,
    Spectrum,
    Cheeger,
    Growth,
    Covolume,
    FullReport,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lift" => Mode::Lift,
            "specialize" => Mode::Specialize,
            "enumerate" => Mode::Enumerate,
            "graph" => Mode::Graph,
            "spectrum" => Mode::Spectrum,
            "cheeger" => Mode::Cheeger,
            "growth" => Mode::Growth,
            "covolume" => Mode::Covolume,
            "full-report" => Mode::FullReport,
            _ => return Err(Error::InvalidConfig(format!("unknown mode `{s}`"))),
        })
    }
}

/// Which specialization point to use.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Point {
    /// The root of unity of order `q^s + 1`.
    Root,
    PlusOne,
    MinusOne,
}

impl std::str::FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "root" => Ok(Point::Root),
            "1" | "+1" => Ok(Point::PlusOne),
            "-1" => Ok(Point::MinusOne),
            _ => Err(Error::InvalidConfig(format!(
                "unknown specialization point `{s}` (root, 1, -1)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub q: u64,
    pub s: u32,
    pub mode: Mode,
    pub point: Point,
    pub limit: usize,
    pub dense_bound: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Series truncation length.
    pub l: usize,
    /// Affine period for growth runs.
    pub m: Option<usize>,
    pub v: Option<BasisVec>,
    pub lambda: Option<String>,
    /// Edge-list input for `cheeger`.
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            q: 2,
            s: 1,
            mode: Mode::FullReport,
            point: Point::Root,
            limit: DEFAULT_LIMIT,
            dense_bound: DEFAULT_DENSE_BOUND,
            tol: 1e-8,
            max_iter: 20_000,
            seed: 0,
            l: 12,
            m: None,
            v: None,
            lambda: None,
            input: None,
            out: PathBuf::from("out"),
            cache_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let group_mode = !matches!(self.mode, Mode::Growth | Mode::Covolume)
            && !(self.mode == Mode::Cheeger && self.input.is_some());
        if group_mode && self.n < 2 {
            return Err(Error::InvalidHalfRank(self.n));
        }
        if self.limit == 0 || self.max_iter == 0 || self.dense_bound == 0 {
            return Err(Error::InvalidConfig("caps must be positive".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if group_mode || self.mode == Mode::Covolume {
            crate::field::prime_power(self.q)?;
        }
        if self.point == Point::Root && group_mode && self.s == 0 {
            return Err(Error::InvalidConfig("s must be positive".into()));
        }
        Ok(())
    }

    fn spectral(&self) -> SpectralConfig {
        SpectralConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
            dense_bound: self.dense_bound,
        }
    }
}

/// A named output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        Artifact {
            name: name.into(),
            bytes: bytes.into(),
        }
    }
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    artifacts
        .iter()
        .map(|a| {
            let p = dir.join(&a.name);
            write_atomic(&p, &a.bytes)?;
            Ok(p)
        })
        .collect()
}

/// Everything derived from `(n, q, s, point)` before enumeration.
pub struct Setup {
    pub form: Form,
    pub genset: GenSet,
    pub ctx: SpecContext,
    /// Specialized generators in `S` order, duplicates kept.
    pub images: Vec<(String, FMat)>,
}

pub fn tower_for(q: u64, s: u32, point: Point) -> Result<FieldTower> {
    match point {
        Point::Root => FieldTower::unitary(q, s),
        Point::PlusOne => FieldTower::split(q, RootKind::PlusOne),
        Point::MinusOne => FieldTower::split(q, RootKind::MinusOne),
    }
}

pub fn setup(n: usize, q: u64, s: u32, point: Point) -> Result<Setup> {
    let tower = tower_for(q, s, point)?;
    let form = Form::new(n, LaurentRing::new(tower.base().clone()))?;
    let genset = build_generating_set(&form)?;
    let ctx = SpecContext::new(n, tower)?;
    let images = genset
        .gens
        .iter()
        .map(|g| Ok((g.label.clone(), specialize(&g.mat, &ctx)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Setup {
        form,
        genset,
        ctx,
        images,
    })
}

fn cache_prefix(point: Point) -> &'static str {
    match point {
        Point::Root => "ctx",
        Point::PlusOne => "ctx-apos1",
        Point::MinusOne => "ctx-aneg1",
    }
}

fn distinct(images: &[(String, FMat)]) -> Vec<(String, FMat)> {
    let mut out: Vec<(String, FMat)> = Vec::new();
    for (l, m) in images {
        if !out.iter().any(|(_, x)| x == m) {
            out.push((l.clone(), m.clone()));
        }
    }
    out
}

/// Cache key: the context header followed by the generator encodings.
fn table_header(ctx: &SpecContext, gens: &[(String, FMat)]) -> Vec<u8> {
    let mut h = ctx.to_bytes();
    let enc = Encoder::new(ctx.field(), ctx.dim());
    h.extend_from_slice(&(gens.len() as u32).to_le_bytes());
    for (_, g) in gens {
        h.extend_from_slice(&enc.encode(g));
    }
    h
}

/// Enumerates `⟨gens⟩`, reading and refreshing the cache file when enabled.
pub fn enumerate_cached(
    ctx: &SpecContext,
    gens: &[(String, FMat)],
    limit: usize,
    cache: Option<&Path>,
) -> Result<GroupTable> {
    let header = table_header(ctx, gens);
    if let Some(path) = cache {
        if let Ok(bytes) = fs::read(path) {
            if let Ok((h, table)) = GroupTable::from_bytes(&bytes) {
                if h == header && table.len() <= limit {
                    return Ok(table);
                }
            }
        }
    }
    let mats: Vec<FMat> = gens.iter().map(|(_, m)| m.clone()).collect();
    let table = enumerate(&mats, ctx.field(), limit)?;
    if let Some(path) = cache {
        write_atomic(path, &table.to_bytes(&header))?;
    }
    Ok(table)
}

fn cache_path(cfg: &RunConfig, tower: &FieldTower, suffix: &str) -> Option<PathBuf> {
    cfg.cache_dir.as_ref().map(|d| {
        let prefix = format!("{}{suffix}", cache_prefix(cfg.point));
        d.join(cache_file_name(&prefix, cfg.n, tower.q(), tower.s()))
    })
}

fn stem(cfg: &RunConfig, tower: &FieldTower) -> String {
    let point = match cfg.point {
        Point::Root => String::new(),
        Point::PlusOne => "-apos1".into(),
        Point::MinusOne => "-aneg1".into(),
    };
    format!("n{}-q{}-s{}{point}", cfg.n, tower.q(), tower.s())
}

/// First 16 hex digits of the SHA-256 of `bytes`.
pub fn snapshot_id(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

/// Generators of the determinant-1 part of `⟨images⟩`.
pub struct SliceGenerators {
    pub gens: Vec<(String, FMat)>,
    pub method: String,
}

fn shift_of(images: &[(String, FMat)]) -> Result<&FMat> {
    images
        .iter()
        .find(|(l, _)| l == "s")
        .map(|(_, m)| m)
        .ok_or_else(|| Error::InternalIdentity("generating set has no shift".into()))
}

/// Prefers `s^{±1}` rescaled by a unitary scalar that makes its determinant 1
/// (kept only if the rescaled shift lies in `table`); otherwise Schreier generators.
pub fn slice_generators(
    ctx: &SpecContext,
    images: &[(String, FMat)],
    table: &GroupTable,
) -> Result<SliceGenerators> {
    let f = ctx.field();
    let one = f.one();
    if images.iter().all(|(_, m)| m.det(f) == one) {
        return Ok(SliceGenerators {
            gens: images.to_vec(),
            method: "all generators already have determinant 1".into(),
        });
    }
    let delta = shift_of(images)?.det(f);
    let tower = ctx.tower();
    let dim = ctx.dim() as u64;
    let scalar = f
        .elements()
        .filter(|c| !c.is_zero())
        .find(|&c| f.mul(c, tower.conj(c)) == one && f.mul(f.pow(c, dim), delta) == one);
    if let Some(c) = scalar {
        let cinv = f.inv(c).expect("nonzero scalar");
        let gens: Vec<(String, FMat)> = images
            .iter()
            .map(|(l, m)| match l.as_str() {
                "s" => (l.clone(), m.scale(f, c)),
                "s^-1" => (l.clone(), m.scale(f, cinv)),
                _ => (l.clone(), m.clone()),
            })
            .collect();
        if gens.iter().all(|(_, m)| table.membership(m).is_some()) {
            return Ok(SliceGenerators {
                gens,
                method: format!("shift rescaled by the scalar {}", f.format(c)),
            });
        }
    }
    schreier_slice_generators(ctx, images)
}

/// `s^i g s^{-i}` for the determinant-1 generators `g`, plus `s^{±d}` with `d` the order of `det(s)`.
pub fn schreier_slice_generators(
    ctx: &SpecContext,
    images: &[(String, FMat)],
) -> Result<SliceGenerators> {
    let f = ctx.field();
    let one = f.one();
    let s = shift_of(images)?;
    let d = f.order(s.det(f)) as usize;
    let s_inv = s.inverse(f)?;
    let mut gens: Vec<(String, FMat)> = Vec::new();
    let push = |label: String, m: FMat, gens: &mut Vec<(String, FMat)>| {
        if !m.is_identity(f) && !gens.iter().any(|(_, x)| *x == m) {
            gens.push((label, m));
        }
    };
    let mut left = ctx.identity();
    let mut right = ctx.identity();
    for i in 0..d {
        for (l, m) in images.iter().filter(|(_, m)| m.det(f) == one) {
            push(
                format!("s^{i} {l} s^-{i}"),
                left.mul(m, f).mul(&right, f),
                &mut gens,
            );
        }
        left = left.mul(s, f);
        right = s_inv.mul(&right, f);
    }
    let sd_inv = left.inverse(f)?;
    push(format!("s^{d}"), left, &mut gens);
    push(format!("s^-{d}"), sd_inv, &mut gens);
    Ok(SliceGenerators {
        gens,
        method: format!("Schreier generators for the transversal s^0..s^{}", d - 1),
    })
}

/// A group, its Cayley graph and spectral report.
pub struct GraphRun {
    /// Distinct generators the table was enumerated from.
    pub gens: Vec<(String, FMat)>,
    pub table: GroupTable,
    pub graph: CayleyGraph,
    pub report: SpectralReport,
}

fn graph_run(
    ctx: &SpecContext,
    gens: &[(String, FMat)],
    cfg: &RunConfig,
    cache: Option<PathBuf>,
) -> Result<GraphRun> {
    let unique = distinct(gens);
    let table = enumerate_cached(ctx, &unique, cfg.limit, cache.as_deref())?;
    let graph = build_cayley(&table, gens, ctx.field())?;
    let report = expansion_report(graph.graph(), &cfg.spectral())?;
    Ok(GraphRun {
        gens: unique,
        table,
        graph,
        report,
    })
}

fn report_json(run: &GraphRun) -> Value {
    let r = &run.report;
    json!({
        "N": r.n,
        "k": r.k,
        "lambda2": r.lambda2,
        "lambda_min": r.lambda_min,
        "residual": r.residual,
        "gap": r.gap,
        "two_sided_gap": r.two_sided_gap,
        "bipartite": r.bipartite,
        "edge_expansion_bound": r.edge_expansion_bound,
        "c_exact": r.c_exact,
        "method": r.method,
        "iterations": r.iterations,
        "generators": run.graph.labels(),
        "coincident_generators": run.graph.coincidences(),
        "connected": run.graph.graph().is_connected(),
        "layers": run.table.layer_sizes(),
        "snapshot_id": snapshot_id(run.table.data()),
    })
}

fn to_pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s.into_bytes()
}

/// Lift routes for every admissible parameter; lists any fallback activations.
pub fn lift_fallbacks(tower: &FieldTower) -> Result<Vec<String>> {
    if tower.kind() != RootKind::Unitary {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for lambda in tower.admissible_params() {
        if let LiftRoute::SolverFallback(why) = solve_f(tower, lambda)?.route {
            out.push(format!("{}: {why}", tower.ext().format(lambda)));
        }
    }
    Ok(out)
}

fn ambient_orders(ctx: &SpecContext) -> Result<Value> {
    let tower = ctx.tower();
    let dim = ctx.dim() as u32;
    Ok(match tower.kind() {
        RootKind::Unitary => {
            let qs = tower.qs();
            json!({
                "SU": classical_order(Family::SU, dim, qs)?.to_string(),
                "GU": classical_order(Family::GU, dim, qs)?.to_string(),
            })
        }
        RootKind::MinusOne | RootKind::PlusOne => json!({
            "Sp": classical_order(Family::Sp, dim, tower.q() as u64)?.to_string(),
        }),
    })
}

/// Parses `0`, `a`, `a^k` (powers of the specialization point) or a digit vector `[c0,c1,…]`.
pub fn parse_lambda(text: &str, tower: &FieldTower) -> Result<Fe> {
    let ext = tower.ext();
    let t = text.trim();
    if t == "0" {
        return Ok(ext.zero());
    }
    if t == "a" {
        return Ok(tower.a());
    }
    if let Some(e) = t.strip_prefix("a^") {
        let e: i64 = e
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad exponent in `{t}`")))?;
        return Ok(ext.pow_i(tower.a(), e));
    }
    ext.parse(t)
}

/// Runs one mode and returns its artifacts (nothing is written here except cache files).
pub fn execute(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Growth => growth(cfg),
        Mode::Covolume => covolume(cfg),
        Mode::Cheeger if cfg.input.is_some() => cheeger_file(cfg),
        Mode::Lift => lift(cfg),
        _ => group_mode(cfg),
    }
}

fn lift(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    if cfg.point != Point::Root {
        return Err(Error::InvalidConfig(
            "lifts need the root-of-unity point".into(),
        ));
    }
    let tower = FieldTower::unitary(cfg.q, cfg.s)?;
    let form = Form::new(cfg.n, LaurentRing::new(tower.base().clone()))?;
    let v = cfg
        .v
        .ok_or_else(|| Error::InvalidConfig("lift needs --v".into()))?;
    let lambda = parse_lambda(cfg.lambda.as_deref().unwrap_or("a"), &tower)?;
    let lift = lift_transvection(&form, v, lambda, &tower)?;
    let ring = form.ring();
    let member = form.membership(&lift.phi);
    let route = match &lift.route {
        LiftRoute::Chain => "chain".to_string(),
        LiftRoute::SolverFallback(why) => format!("solver fallback ({why})"),
    };
    let mut out = String::new();
    writeln!(out, "v = {v}").unwrap();
    writeln!(out, "lambda = {}", tower.ext().format(lambda)).unwrap();
    writeln!(out, "a = {}", tower.ext().format(tower.a())).unwrap();
    writeln!(out, "F = {}", ring.format(&lift.f)).unwrap();
    writeln!(out, "route = {route}").unwrap();
    writeln!(out, "form_preserving = {}", member.form_preserving).unwrap();
    writeln!(out, "det = {}", ring.format(&member.det)).unwrap();
    writeln!(out, "Phi =").unwrap();
    writeln!(out, "{}", lift.phi.format(ring)).unwrap();
    Ok(vec![Artifact::new(
        format!("lift-n{}-q{}-s{}-{v}.txt", cfg.n, cfg.q, cfg.s),
        out,
    )])
}

fn group_mode(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let st = setup(cfg.n, cfg.q, cfg.s, cfg.point)?;
    let ctx = &st.ctx;
    let tower = ctx.tower();
    let f = ctx.field();
    let name = stem(cfg, tower);

    if cfg.mode == Mode::Specialize {
        let mut out = String::new();
        writeln!(out, "a = {}", f.format(tower.a())).unwrap();
        for ((label, m), g) in st.images.iter().zip(&st.genset.gens) {
            let det = f.format(ctx.det(m));
            writeln!(
                out,
                "[{label}] unitary = {} det = {det}",
                ctx.is_unitary(m)?
            )
            .unwrap();
            if tower.kind() != RootKind::Unitary {
                let b = bilinear_specialize_check(&g.mat, ctx)?;
                writeln!(
                    out,
                    "  alternating = {} symmetric = {} preserved = {}",
                    b.alternating, b.symmetric, b.preserved
                )
                .unwrap();
            }
            writeln!(out, "{}", m.format(f)).unwrap();
        }
        return Ok(vec![Artifact::new(format!("specialize-{name}.txt"), out)]);
    }

    let full_cache = cache_path(cfg, tower, "");
    let gens = distinct(&st.images);
    let table = enumerate_cached(ctx, &gens, cfg.limit, full_cache.as_deref())?;
    let det1 = (0..table.len())
        .filter(|&i| ctx.det(&table.element(i)) == f.one())
        .count();

    match cfg.mode {
        Mode::Enumerate => {
            let summary = json!({
                "n": cfg.n, "q": tower.q(), "s": tower.s(),
                "a": f.format(tower.a()),
                "order": table.len(),
                "det1_order": det1,
                "layers": table.layer_sizes(),
                "ambient": ambient_orders(ctx)?,
                "snapshot_id": snapshot_id(table.data()),
            });
            Ok(vec![
                Artifact::new(
                    format!("group-{name}.grp"),
                    table.to_bytes(&table_header(ctx, &gens)),
                ),
                Artifact::new(format!("group-{name}.json"), to_pretty(&summary)),
            ])
        }
        Mode::Graph => {
            let g = build_cayley(&table, &st.images, f)?;
            Ok(vec![
                Artifact::new(format!("cayley-{name}.edges"), g.to_edge_list()),
                Artifact::new(format!("cayley-{name}.dot"), g.to_dot()),
            ])
        }
        Mode::Spectrum => {
            let g = build_cayley(&table, &st.images, f)?;
            let r = expansion_report(g.graph(), &cfg.spectral())?;
            let v = serde_json::to_value(&r).expect("report serializes");
            Ok(vec![Artifact::new(
                format!("spectrum-{name}.json"),
                to_pretty(&v),
            )])
        }
        Mode::Cheeger => {
            let g = build_cayley(&table, &st.images, f)?;
            let c = vertex_expansion_exact(g.graph())?;
            Ok(vec![Artifact::new(
                format!("cheeger-{name}.txt"),
                format!("{c}\n"),
            )])
        }
        Mode::FullReport => full_report(cfg, &st, table, det1),
        Mode::Lift | Mode::Specialize | Mode::Growth | Mode::Covolume => {
            unreachable!("handled earlier")
        }
    }
}

fn full_report(
    cfg: &RunConfig,
    st: &Setup,
    table: GroupTable,
    det1: usize,
) -> Result<Vec<Artifact>> {
    let ctx = &st.ctx;
    let tower = ctx.tower();
    let f = ctx.field();
    let name = stem(cfg, tower);

    let graph = build_cayley(&table, &st.images, f)?;
    let report = expansion_report(graph.graph(), &cfg.spectral())?;
    let full = GraphRun {
        gens: distinct(&st.images),
        table,
        graph,
        report,
    };

    let slice = slice_generators(ctx, &st.images, &full.table)?;
    let mut slice_run = graph_run(ctx, &slice.gens, cfg, cache_path(cfg, tower, "-det1"))?;
    if slice_run.table.len() != det1 {
        // the rescaled shift generated a proper subgroup; use Schreier generators
        let fallback = schreier_slice_generators(ctx, &st.images)?;
        slice_run = graph_run(ctx, &fallback.gens, cfg, cache_path(cfg, tower, "-det1s"))?;
    }
    let slice_all_det1 =
        (0..slice_run.table.len()).all(|i| ctx.det(&slice_run.table.element(i)) == f.one());
    if slice_run.table.len() != det1 || !slice_all_det1 {
        return Err(Error::InternalIdentity(
            "determinant-1 slice generators do not generate the slice".into(),
        ));
    }

    let r = &slice_run.report;
    let mut members = Vec::new();
    if tower.kind() == RootKind::Unitary {
        for v in BasisVec::all(cfg.n) {
            let params = tower.admissible_params();
            let present = params
                .iter()
                .filter(|l| !l.is_zero())
                .filter(|&&l| {
                    ctx.finite_transvection(v, l)
                        .ok()
                        .and_then(|t| full.table.membership(&t))
                        .is_some()
                })
                .count();
            members.push(
                json!({"v": v.to_string(), "present": present, "nontrivial": params.len() - 1}),
            );
        }
    }
    let report = json!({
        "n": cfg.n,
        "q": tower.q(),
        "s": tower.s(),
        "a": f.format(tower.a()),
        "N": r.n,
        "k": r.k,
        "lambda2": r.lambda2,
        "residual": r.residual,
        "gap": r.gap,
        "two_sided_gap": r.two_sided_gap,
        "bipartite": r.bipartite,
        "c_exact": r.c_exact,
        "snapshot_id": snapshot_id(slice_run.table.data()),
        "seed": cfg.seed,
        "det1_slice": report_json(&slice_run),
        "det1_generators": slice.method,
        "full_image": report_json(&full),
        "orders": {
            "image": full.table.len(),
            "det1_slice": det1,
            "ambient": ambient_orders(ctx)?,
        },
        "generating_set": {
            "labels": st.genset.labels(),
            "involution": st.genset.involution,
            "provenance": st.genset.provenance,
        },
        "transvection_membership": members,
        "lift_fallbacks": lift_fallbacks(tower)?,
    });
    Ok(vec![
        Artifact::new(format!("report-{name}.json"), to_pretty(&report)),
        Artifact::new(format!("cayley-{name}.edges"), full.graph.to_edge_list()),
        Artifact::new(
            format!("cayley-det1-{name}.edges"),
            slice_run.graph.to_edge_list(),
        ),
        Artifact::new(
            format!("group-{name}.grp"),
            full.table.to_bytes(&table_header(ctx, &full.gens)),
        ),
        Artifact::new(
            format!("group-det1-{name}.grp"),
            slice_run
                .table
                .to_bytes(&table_header(ctx, &slice_run.gens)),
        ),
    ])
}

fn growth(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let m = cfg.m.unwrap_or(cfg.n + 1);
    if m < 2 {
        return Err(Error::InvalidConfig(format!(
            "affine period must be at least 2, got {m}"
        )));
    }
    let bfs = coxeter_growth_bfs(m, cfg.l)?;
    let formula = poincare_formula(m - 1, cfg.l)?;
    let mut out = String::from("rank,degree,bfs_count,formula_count,match\n");
    for d in 0..=cfg.l {
        let (b, f) = (&bfs.coeffs[d], &formula.coeffs[d]);
        writeln!(out, "{},{d},{b},{f},{}", m - 1, b == f).unwrap();
    }
    Ok(vec![Artifact::new(
        format!("growth-m{m}-L{}.csv", cfg.l),
        out,
    )])
}

fn covolume(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let mut ranks = vec![cfg.n.max(1)];
    if cfg.n >= 2 {
        ranks.push(2 * cfg.n - 1);
    }
    let mut out = String::from("rank,degree,partial_sum,bound,below_bound\n");
    for rank in ranks {
        let bound = covolume_closed_form(rank, cfg.q)?;
        for (d, s) in covolume_partial_sums(rank, cfg.q, cfg.l)?
            .iter()
            .enumerate()
        {
            writeln!(out, "{rank},{d},{s},{bound},{}", s < &bound).unwrap();
        }
    }
    Ok(vec![Artifact::new(
        format!("covolume-n{}-q{}-L{}.csv", cfg.n, cfg.q, cfg.l),
        out,
    )])
}

fn cheeger_file(cfg: &RunConfig) -> Result<Vec<Artifact>> {
    let path = cfg.input.as_ref().expect("checked by caller");
    let text = fs::read_to_string(path)?;
    let n = text
        .split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Error::Format(format!("bad vertex `{t}`")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .map_or(0, |m| m as usize + 1);
    let g = Graph::from_edge_list(n, &text)?;
    let c = vertex_expansion_exact(&g)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
    Ok(vec![Artifact::new(
        format!("cheeger-{stem}.txt"),
        format!("{c}\n"),
    )])
}
