// SPDX-License-Identifier: Apache-2.0

//! One function per subcommand. Each returns a line-oriented report that
//! starts with the schema version and echoes the seed.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use removal_lab_core::construct::{
    behrend_set, c8_instance, homomorphic_instance, odd_cycle_blowup_instance, rs_graph,
    stray_layered_cycle, verify_convex_free, verify_layered, HardInstance,
};
use removal_lab_core::count::{
    automorphism_count, count_copies, count_embeddings, greedy_pair_disjoint_packing, CopyMode,
};
use removal_lab_core::homomorphism::{core, core_poset};
use removal_lab_core::partition::find_homogeneous_partition;
use removal_lab_core::recognize::check_family_conditions;
use removal_lab_core::tester::CurvePoint;
use removal_lab_core::{Graph, Limits, Rational, VertexSet};

use crate::cert::{self, Certificate, Sidecar, SCHEMA_VERSION};
use crate::family::read_family;
use crate::format::{encode_graph, format_rational, read_graph, to_graph6, GraphFormat};
use crate::{parallel, write_text, LabError, Result};

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads for trial execution; 0 means one per core.
    pub threads: usize,
    pub limits: Limits,
    pub format: GraphFormat,
    pub out: Option<PathBuf>,
}

/// A finished command: its report and, for `verify`, the reason it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub failure: Option<String>,
}

impl From<Report> for Outcome {
    fn from(r: Report) -> Self {
        Outcome {
            report: r.0,
            failure: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report(String);

impl Report {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        let mut r = Report(String::new());
        r.line("schema-version", SCHEMA_VERSION);
        r.line("command", command);
        r.line("seed", cfg.seed);
        r
    }

    pub fn line(&mut self, key: &str, value: impl Display) {
        self.0.push_str(key);
        self.0.push_str(": ");
        self.0.push_str(&value.to_string());
        self.0.push('\n');
    }

    pub fn text(&self) -> &str {
        &self.0
    }
}

fn list(xs: impl IntoIterator<Item = impl Display>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn rat(r: Rational) -> String {
    format_rational(r)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".cert.json");
    PathBuf::from(s)
}

fn require_out(cfg: &RunConfig, what: &str) -> Result<PathBuf> {
    cfg.out
        .clone()
        .ok_or_else(|| LabError::Usage(format!("{what} needs --out <path> for the graph file")))
}

/// Writes the graph to `out` and the sidecar next to it.
fn emit(cfg: &RunConfig, out: &Path, g: &Graph, sidecar: &Sidecar, r: &mut Report) -> Result<()> {
    write_text(out, &encode_graph(g, cfg.format))?;
    let side = sidecar_path(out);
    write_text(&side, &sidecar.to_json())?;
    r.line("graph-file", out.display());
    r.line("certificate-file", side.display());
    Ok(())
}

pub fn gen_behrend(cfg: &RunConfig, m: u64, k: u64) -> Result<Outcome> {
    let s = behrend_set(m, k)?;
    let v = verify_convex_free(&s.members, k, cfg.limits.convex_work);
    let mut r = Report::new("gen behrend", cfg);
    r.line("m", m);
    r.line("k", k);
    r.line("method", format!("{:?}", s.method));
    r.line("base", s.base);
    r.line("digits", s.digits);
    r.line("digit-cap", s.digit_cap);
    r.line("shell", s.shell);
    r.line("size", s.len());
    r.line(
        "size-over-m",
        rat(Rational::new(s.len() as i128, m as i128)),
    );
    r.line("convex-free", flag(v.passed()));
    r.line(
        "convex-check",
        if v.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        },
    );
    r.line("convex-tuples-checked", v.checked);
    r.line("members", list(&s.members));
    if let Some(out) = &cfg.out {
        let side = Sidecar {
            schema_version: SCHEMA_VERSION,
            generator: format!("behrend m={m} k={k}"),
            graph: None,
            certificates: vec![Certificate::ConvexFree {
                m,
                k,
                members: s.members.clone(),
            }],
        };
        write_text(out, &side.to_json())?;
        r.line("certificate-file", out.display());
    }
    Ok(r.into())
}

pub fn gen_rs(
    cfg: &RunConfig,
    h: usize,
    delta: Rational,
    m: Option<usize>,
    m_max: Option<usize>,
    check_cycles: bool,
) -> Result<Outcome> {
    let out = require_out(cfg, "gen rs")?;
    let rg = rs_graph(h, delta, m, m_max, &cfg.limits)?;
    let check = verify_layered(&rg, check_cycles)?;
    let mut r = Report::new("gen rs", cfg);
    r.line("h", h);
    r.line("delta", rat(delta));
    r.line("m", rg.m);
    r.line("n", rg.n());
    r.line("set-size", rg.set.len());
    r.line("cliques", rg.cliques.len());
    r.line("clique-density", rat(rg.clique_density()));
    r.line("layers-independent", flag(check.layers_independent));
    r.line("cliques-edge-disjoint", flag(check.cliques_edge_disjoint));
    if check_cycles {
        r.line("cycle-bound", flag(check.cycle_bound == Some(true)));
        r.line(
            "cycles-in-one-clique",
            flag(stray_layered_cycle(&rg)?.is_none()),
        );
    }
    let side = Sidecar {
        schema_version: SCHEMA_VERSION,
        generator: format!("rs h={h} delta={}", rat(delta)),
        graph: Some(cert::GraphRef::of(&rg.graph)),
        certificates: vec![cert::layered_certificate(&rg, Some(delta))],
    };
    emit(cfg, &out, &rg.graph, &side, &mut r)?;
    Ok(r.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum HardKind {
    #[value(alias = "thm4")]
    C8,
    #[value(alias = "thm13")]
    Homomorphic,
    Oddcycle,
}

pub fn gen_hard(
    cfg: &RunConfig,
    kind: HardKind,
    n: usize,
    eps: Option<Rational>,
    forbidden: Option<&Path>,
    k: Option<usize>,
) -> Result<Outcome> {
    let out = require_out(cfg, "gen hard")?;
    let need_eps = || eps.ok_or_else(|| LabError::Usage("this kind needs --eps".into()));
    let inst: HardInstance = match kind {
        HardKind::C8 => c8_instance(n, need_eps()?, &cfg.limits)?,
        HardKind::Homomorphic => {
            let path = forbidden.ok_or_else(|| {
                LabError::Usage("--kind homomorphic needs --forbidden <file>".into())
            })?;
            let spec = read_family(path)?;
            let h = match (&spec.members[..], &spec.cycles) {
                ([(g, _)], None) => g.clone(),
                _ => {
                    return Err(LabError::Usage(
                        "--forbidden must list exactly one graph for --kind homomorphic".into(),
                    ))
                }
            };
            homomorphic_instance(&h, need_eps()?, n, &cfg.limits)?
        }
        HardKind::Oddcycle => {
            let k = k.ok_or_else(|| LabError::Usage("--kind oddcycle needs --k".into()))?;
            odd_cycle_blowup_instance(k, n, &cfg.limits)?
        }
    };
    let mut r = Report::new("gen hard", cfg);
    r.line("kind", format!("{kind:?}").to_lowercase());
    r.line("requested-n", inst.requested_n);
    r.line("n", inst.n());
    r.line("blowup-factor", inst.blowup_factor);
    r.line("epsilon", rat(inst.epsilon));
    r.line(
        "forbidden",
        list(inst.forbidden.graphs().iter().map(to_graph6)),
    );
    if let Some(b) = &inst.base {
        r.line("base-h", b.h);
        r.line("base-m", b.m);
        r.line("base-cliques", b.cliques.len());
    }
    r.line("packing-copies", inst.packing.len());
    r.line(
        "packing-reaches-epsilon",
        flag(inst.packing_reaches_epsilon()),
    );
    let side = cert::instance_sidecar(&inst, format!("hard kind={kind:?} n={n}").to_lowercase());
    r.line("certificates", side.certificates.len());
    emit(cfg, &out, &inst.graph, &side, &mut r)?;
    Ok(r.into())
}

pub fn classify(cfg: &RunConfig, family: &Path, cap: usize) -> Result<Outcome> {
    let spec = read_family(family)?;
    let f = spec.materialize(cap)?;
    let rep = check_family_conditions(&f);
    let mut r = Report::new("classify", cfg);
    r.line("family", &spec.description);
    r.line("members", f.len());
    for (i, m) in f.entries().iter().enumerate() {
        r.line(
            "member",
            format!(
                "{i} {} {:?} bipartite={} cobipartite={} split={}",
                to_graph6(&m.graph),
                m.mode,
                flag(m.is_bipartite),
                flag(m.is_cobipartite),
                flag(m.is_split)
            )
            .to_lowercase(),
        );
    }
    r.line("has-bipartite", flag(rep.has_bipartite));
    r.line("has-cobipartite", flag(rep.has_cobipartite));
    r.line("has-split", flag(rep.has_split));
    r.line("sufficient", flag(rep.sufficient));
    r.line("necessary", flag(rep.necessary));
    Ok(r.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Induced,
    Subgraph,
}

impl From<ModeArg> for CopyMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Induced => CopyMode::Induced,
            ModeArg::Subgraph => CopyMode::Subgraph,
        }
    }
}

pub fn count(cfg: &RunConfig, graph: &Path, pattern: &Path, mode: ModeArg) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let h = read_graph(pattern)?;
    let mode = CopyMode::from(mode);
    let emb = count_embeddings(&g, &h, mode, &cfg.limits)?;
    let copies = count_copies(&g, &h, mode, &cfg.limits)?;
    let mut r = Report::new("count", cfg);
    r.line("mode", format!("{mode:?}").to_lowercase());
    r.line("n", g.n());
    r.line("pattern", to_graph6(&h));
    r.line("automorphisms", automorphism_count(&h));
    r.line("embeddings", emb);
    r.line("copies", copies);
    Ok(r.into())
}

pub fn pack(cfg: &RunConfig, graph: &Path, pattern: &Path, mode: ModeArg) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let h = read_graph(pattern)?;
    let p = greedy_pair_disjoint_packing(&g, &h, mode.into(), &cfg.limits)?;
    let mut r = Report::new("pack", cfg);
    r.line("mode", format!("{mode:?}").to_lowercase());
    r.line("n", g.n());
    r.line("pattern", to_graph6(&h));
    r.line("disjointness", "pair-disjoint");
    r.line("copies", p.len());
    r.line(
        "epsilon-equivalent",
        rat(Rational::new(
            p.len() as i128,
            (g.n() as i128).pow(2).max(1),
        )),
    );
    for c in &p.copies {
        r.line("copy", list(&c.vertices));
    }
    if let Some(out) = &cfg.out {
        let side = Sidecar {
            schema_version: SCHEMA_VERSION,
            generator: "pack".into(),
            graph: Some(cert::GraphRef::of(&g)),
            certificates: vec![cert::packing_certificate(&p, &[h], None)],
        };
        write_text(out, &side.to_json())?;
        r.line("certificate-file", out.display());
    }
    Ok(r.into())
}

pub fn core_cmd(cfg: &RunConfig, graph: &Path) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let c = core(&g, &cfg.limits)?;
    let mut r = Report::new("core", cfg);
    r.line("n", g.n());
    r.line("core-size", c.core.n());
    r.line("core", to_graph6(&c.core));
    r.line("embedding", list(c.embedding.members()));
    r.line("retraction", list(&c.retraction.assignment));
    Ok(r.into())
}

pub fn kf(cfg: &RunConfig, family: &Path, cap: usize) -> Result<Outcome> {
    let spec = read_family(family)?;
    let f = spec.materialize(cap)?;
    let p = core_poset(&f, &cfg.limits)?;
    let mut r = Report::new("kf", cfg);
    r.line("family", &spec.description);
    r.line("classes", p.classes.len());
    for (i, c) in p.classes.iter().enumerate() {
        r.line("class", format!("{i} {}", to_graph6(c)));
    }
    r.line("member-class", list(&p.member_class));
    for (i, row) in p.below.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            if b && i != j {
                r.line("maps-into", format!("{j} {i}"));
            }
        }
    }
    r.line("chosen-class", p.maximal);
    r.line("chosen", to_graph6(p.chosen()));
    Ok(r.into())
}

fn parts_line(parts: &[VertexSet]) -> String {
    parts
        .iter()
        .map(|p| list(p.members()))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn partition(
    cfg: &RunConfig,
    graph: &Path,
    delta: Rational,
    max_parts: usize,
) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let found = find_homogeneous_partition(&g, delta, max_parts)?;
    let mut r = Report::new("partition", cfg);
    r.line("n", g.n());
    r.line("delta", rat(delta));
    r.line("max-parts", max_parts);
    match found {
        None => r.line("found", "no"),
        Some((p, rep)) => {
            r.line("found", "yes");
            r.line("row-parts", p.rows.len());
            r.line("col-parts", p.cols.len());
            r.line("non-homogeneous-weight", rat(rep.non_homogeneous_weight));
            r.line("pass", flag(rep.pass));
            if let Some(w) = &rep.warning {
                r.line("warning", w);
            }
            r.line("rows", parts_line(&p.rows));
            r.line("cols", parts_line(&p.cols));
        }
    }
    Ok(r.into())
}

fn report_lines(r: &mut Report, t: &removal_lab_core::tester::TestReport) {
    let (lo, hi) = t.interval();
    r.line("q", t.q);
    r.line("trials", t.trials);
    r.line("rejections", t.rejections);
    r.line("frequency", format!("{:.6}", t.frequency()));
    r.line("wilson-lower", format!("{lo:.6}"));
    r.line("wilson-upper", format!("{hi:.6}"));
    r.line("detects", flag(t.detects()));
}

pub fn test(
    cfg: &RunConfig,
    graph: &Path,
    family: &Path,
    q: usize,
    trials: u64,
) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let spec = read_family(family)?;
    let f = spec.materialize(q)?;
    let pool = parallel::pool(cfg.threads)?;
    let mut t = parallel::detection_probability(&pool, &g, &f, q, trials, cfg.seed, &cfg.limits)?;
    t.family = spec.description.clone();
    t.instance = graph.display().to_string();
    let mut r = Report::new("test", cfg);
    r.line("instance", &t.instance);
    r.line("n", g.n());
    r.line("family", &t.family);
    r.line("family-members", f.len());
    report_lines(&mut r, &t);
    Ok(r.into())
}

/// Graph files in `dir`, sorted by name; sidecars are skipped.
fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|source| LabError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for e in entries {
        let e = e.map_err(|source| LabError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let p = e.path();
        let name = p.file_name().and_then(|s| s.to_str()).unwrap_or("");
        if p.is_file() && !name.ends_with(".json") && !name.starts_with('.') {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

pub fn curve(
    cfg: &RunConfig,
    instances: &Path,
    family: &Path,
    q_grid: &[usize],
    trials: u64,
) -> Result<Outcome> {
    let spec = read_family(family)?;
    let mut inst = Vec::new();
    for p in instance_files(instances)? {
        let g = read_graph(&p)?;
        let side = sidecar_path(&p);
        let eps = if side.exists() {
            cert::read_sidecar(&side)?.epsilon()
        } else {
            None
        };
        let label = p
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        inst.push((label, g, eps));
    }
    if inst.is_empty() {
        return Err(LabError::Usage(format!(
            "no graph files in {}",
            instances.display()
        )));
    }
    let pool = parallel::pool(cfg.threads)?;
    let points: Vec<CurvePoint> = parallel::tester_curve(
        &pool,
        &inst,
        |q| spec.materialize(q),
        q_grid,
        trials,
        cfg.seed,
        &cfg.limits,
    )?;
    let mut r = Report::new("curve", cfg);
    r.line("family", &spec.description);
    r.line("q-grid", list(q_grid));
    r.line("trials", trials);
    for p in &points {
        r.line("instance", &p.label);
        r.line("epsilon", p.epsilon.map_or("unknown".into(), rat));
        r.line(
            "q-star",
            p.q_star.map_or("censored".into(), |q| q.to_string()),
        );
        for t in &p.reports {
            let (lo, hi) = t.interval();
            r.line(
                "point",
                format!(
                    "q={} rejections={}/{} frequency={:.6} wilson=[{lo:.6},{hi:.6}] detects={}",
                    t.q,
                    t.rejections,
                    t.trials,
                    t.frequency(),
                    flag(t.detects())
                ),
            );
        }
    }
    Ok(r.into())
}

pub fn verify(cfg: &RunConfig, graph: Option<&Path>, certificate: &Path) -> Result<Outcome> {
    let side = cert::read_sidecar(certificate)?;
    let g = graph.map(read_graph).transpose()?;
    let v = cert::verify(g.as_ref(), &side, cfg.limits.convex_work);
    let mut r = Report::new("verify", cfg);
    r.line("generator", &side.generator);
    r.line("certificates", side.certificates.len());
    for w in &v.warnings {
        r.line("warning", w);
    }
    for l in &v.lines {
        r.line(
            "check",
            format!(
                "{} {} {} {}",
                l.index,
                l.kind,
                if l.passed { "pass" } else { "fail" },
                l.detail
            ),
        );
    }
    r.line("verdict", if v.passed() { "pass" } else { "fail" });
    let failure = v
        .lines
        .iter()
        .find(|l| !l.passed)
        .map(|l| format!("certificate {} ({}): {}", l.index, l.kind, l.detail));
    Ok(Outcome {
        report: r.0,
        failure,
    })
}
