use std::path::Path;

use serde::Serialize;
use serde_json::json;

use classext::correlations::{profile, MeasurementOptConfig};
use classext::extension::{
    ancilla_diagnostics, ancilla_diagnostics_of, bound_cc, bound_range, bound_report, liluo_extend,
    table1 as bound_table, verify_cq, AncillaDiagnostics, BoundReport, CcBound,
};
use classext::figures::{family_curve, param_grid, scatter as scatter_rows};
use classext::genuine::{correlation_matrix, is_genuinely_quantum};
use classext::linalg::Side;
use classext::mdss::{mub_family, rho_max_d, rho_tilde_max_d, sic_from_fiducial, sic_tetrahedron};
use classext::search::{anneal, assemble, AnnealConfig};
use classext::states::{family_state, w_set, z_set, DensityMatrix, Family, KetEnvelope, ProductEnsemble};
use classext::CMatrix;

use crate::output::{emit, read_input, to_json, Artifact, Cell, Csv, RunInfo};
use crate::{
    BoundArgs, BuiltinEnsemble, CliError, Construction, CurveArgs, DiscordArgs, ExtendArgs, GenuineArgs, MdssArgs,
    OptimizerArgs, ScatterArgs, SearchArgs, StateSource, Table1Args, TableFormat,
};

type CliResult = Result<(), CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8], path: &Path) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

impl OptimizerArgs {
    fn config(&self) -> Result<MeasurementOptConfig, CliError> {
        let cfg = MeasurementOptConfig {
            coarse_grid: self.coarse_grid,
            refine_iters: self.refine_iters,
            refine_shrink: self.refine_shrink,
            restarts: self.restarts,
            seed: self.opt_seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// The state and the raw bytes of its file, if any.
fn load_state(src: &StateSource) -> Result<(DensityMatrix, Vec<Vec<u8>>), CliError> {
    match (&src.family, &src.file) {
        (Some(name), None) => {
            let family: Family = name.parse()?;
            Ok((family_state(family, src.param)?, vec![]))
        }
        (None, Some(path)) => {
            let bytes = read_input(path)?;
            Ok((parse_json(&bytes, path)?, vec![bytes]))
        }
        _ => Err(invalid("exactly one of --family or --file is required")),
    }
}

fn source_config(src: &StateSource) -> serde_json::Value {
    json!({
        "family": src.family,
        "param": src.param,
        "file": src.file.as_ref().map(|p| p.display().to_string()),
    })
}

pub fn discord(args: DiscordArgs, argv: &[String]) -> CliResult {
    let side: Side = args.side.parse().map_err(invalid)?;
    let cfg = args.opt.config()?;
    let (rho, inputs) = load_state(&args.source)?;
    let p = profile(&rho, side, &cfg)?;
    let run = RunInfo {
        command: "discord",
        config: json!({"source": source_config(&args.source), "side": side, "optimizer": cfg}),
        seed: Some(cfg.seed),
        inputs,
    };
    emit(&run, argv, vec![Artifact::new(args.out, to_json(&p))])
}

pub fn scatter(args: ScatterArgs, argv: &[String]) -> CliResult {
    let cfg = args.opt.config()?;
    let rows = scatter_rows(args.n, &args.ranks, args.seed, &cfg)?;
    let mut csv = Csv::new(&["rank", "eof", "discord"]);
    for r in &rows {
        csv.row(&[r.rank.into(), r.eof.into(), r.discord.into()]);
    }
    let run = RunInfo {
        command: "scatter",
        config: json!({"n": args.n, "ranks": args.ranks, "optimizer": cfg}),
        seed: Some(args.seed),
        inputs: vec![],
    };
    emit(&run, argv, vec![Artifact::new(args.out, csv.finish())])
}

pub fn curve(args: CurveArgs, argv: &[String]) -> CliResult {
    let family: Family = args.family.parse()?;
    let cfg = args.opt.config()?;
    let grid = match &args.grid {
        Some(g) if !g.is_empty() => g.clone(),
        Some(_) => return Err(invalid("--grid is empty")),
        None => param_grid(family, args.points)?,
    };
    let rows = family_curve(family, &grid, &cfg)?;
    let with_analytic = family == Family::Alpha;
    let mut header = vec!["param", "discord", "eof"];
    if with_analytic {
        header.push("analytic_discord");
    }
    let mut csv = Csv::new(&header);
    for r in &rows {
        let mut cells: Vec<Cell> = vec![r.param.into(), r.discord.into(), r.eof.into()];
        if with_analytic {
            cells.push(r.analytic.map_or(Cell::Empty, Cell::Num));
        }
        csv.row(&cells);
    }
    let run = RunInfo {
        command: "curve",
        config: json!({"family": family.name(), "grid": grid, "optimizer": cfg}),
        seed: Some(cfg.seed),
        inputs: vec![],
    };
    emit(&run, argv, vec![Artifact::new(args.out, csv.finish())])
}

#[derive(Serialize)]
struct ExtendReport {
    ancilla_dim: usize,
    #[serde(flatten)]
    diagnostics: AncillaDiagnostics,
    cq_residual: f64,
    reduction_error: f64,
}

pub fn extend(args: ExtendArgs, argv: &[String]) -> CliResult {
    let (ensemble, inputs, label) = match (&args.ensemble, args.builtin) {
        (Some(path), None) => {
            let bytes = read_input(path)?;
            let e: ProductEnsemble = parse_json(&bytes, path)?;
            (e, vec![bytes], json!(path.display().to_string()))
        }
        (None, Some(b)) => {
            let e = match b {
                BuiltinEnsemble::ZSet => z_set(),
                BuiltinEnsemble::WSet => w_set(),
            };
            (e, vec![], json!(b))
        }
        _ => return Err(invalid("exactly one of --ensemble or --builtin is required")),
    };
    let ext = liluo_extend(&ensemble);
    let check = verify_cq(&ext.state, &ext.projectors(), 2)?;
    let report = ExtendReport {
        ancilla_dim: ext.ancilla_dim,
        diagnostics: ancilla_diagnostics(&ext),
        cq_residual: check.residual,
        reduction_error: ext.reduction().matrix().max_abs_diff(ensemble.to_state().matrix()),
    };
    let run = RunInfo {
        command: "extend",
        config: json!({"ensemble": label}),
        seed: None,
        inputs,
    };
    let mut artifacts = vec![Artifact::new(args.diagnostics_out, to_json(&report))];
    if let Some(path) = args.out {
        artifacts.push(Artifact::new(Some(path), to_json(&ext.state)));
    }
    emit(&run, argv, artifacts)
}

#[derive(Serialize)]
struct LengthBound {
    #[serde(flatten)]
    report: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    cc: Option<CcBound>,
}

#[derive(Serialize)]
struct RankBound {
    d_a: usize,
    d_b: usize,
    rank: usize,
    min_ancilla: [usize; 2],
    luo_ancilla: [usize; 2],
    low: BoundReport,
    high: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    cc: Option<[CcBound; 2]>,
}

pub fn bound(args: BoundArgs, argv: &[String]) -> CliResult {
    let (d_a, d_b) = (args.d_a, args.d_b);
    let text = match (args.length, args.rank) {
        (Some(l), None) => to_json(&LengthBound {
            report: bound_report(d_a, d_b, l)?,
            cc: if args.cc { Some(bound_cc(d_a, d_b, l)?) } else { None },
        }),
        (None, Some(r)) => {
            let (lo, hi) = bound_range(d_a, d_b, r)?;
            let r2 = r.checked_mul(r).ok_or_else(|| invalid("rank too large"))?;
            to_json(&RankBound {
                d_a,
                d_b,
                rank: r,
                min_ancilla: [lo, hi],
                luo_ancilla: [r, r2],
                low: bound_report(d_a, d_b, r)?,
                high: bound_report(d_a, d_b, r2)?,
                cc: if args.cc {
                    Some([bound_cc(d_a, d_b, r)?, bound_cc(d_a, d_b, r2)?])
                } else {
                    None
                },
            })
        }
        _ => return Err(invalid("exactly one of --length or --rank is required")),
    };
    let run = RunInfo {
        command: "bound",
        config: json!({"d_a": d_a, "d_b": d_b, "length": args.length, "rank": args.rank, "cc": args.cc}),
        seed: None,
        inputs: vec![],
    };
    emit(&run, argv, vec![Artifact::new(args.out, text)])
}

pub fn table1(args: Table1Args, argv: &[String]) -> CliResult {
    let rows = bound_table();
    let text = match args.format {
        TableFormat::Json => to_json(&rows),
        TableFormat::Csv => {
            let mut csv = Csv::new(&[
                "d", "rank", "min_low", "min_high", "luo_low", "luo_high", "f_low", "f_high",
            ]);
            for r in &rows {
                csv.row(&[
                    r.d.into(),
                    r.rank.into(),
                    r.min_low.into(),
                    r.min_high.into(),
                    r.luo_low.into(),
                    r.luo_high.into(),
                    r.f_low.into(),
                    r.f_high.into(),
                ]);
            }
            csv.finish()
        }
    };
    let format = match args.format {
        TableFormat::Csv => "csv",
        TableFormat::Json => "json",
    };
    let run = RunInfo {
        command: "table1",
        config: json!({ "format": format }),
        seed: None,
        inputs: vec![],
    };
    emit(&run, argv, vec![Artifact::new(args.out, text)])
}

fn search_config(args: &SearchArgs) -> Result<(AnnealConfig, Vec<Vec<u8>>), CliError> {
    let mut cfg = AnnealConfig::default();
    if let Some(preset) = &args.preset {
        cfg = match preset.as_str() {
            "desk" | "paper" | "paper-desk" => AnnealConfig::desk(args.d_ancilla.unwrap_or(cfg.d_ancilla)),
            other => return Err(invalid(format!("unknown preset `{other}` (expected desk)"))),
        };
    }
    let mut inputs = vec![];
    if let Some(path) = &args.config {
        let bytes = read_input(path)?;
        let text = String::from_utf8(bytes.clone()).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        let file_cfg: AnnealConfig = toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        cfg = file_cfg;
        inputs.push(bytes);
    }
    if let Some(v) = args.d_ancilla {
        cfg.d_ancilla = v;
    }
    if let Some(v) = args.d_a {
        cfg.d_a = v;
        cfg.d_b = v;
    }
    if let Some(v) = args.steps {
        cfg.steps_per_temp = v;
    }
    if let Some(v) = args.chains {
        cfg.chains = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = &args.temperatures {
        cfg.temperatures = v.clone();
    }
    if let Some(v) = args.step_eps {
        cfg.step_eps = v;
    }
    if let Some(v) = args.eps_decay {
        cfg.eps_decay = v;
    }
    cfg.validate()?;
    Ok((cfg, inputs))
}

#[derive(Serialize)]
struct SearchSummary {
    best_discord: f64,
    best_chain: usize,
    chain_best: Vec<f64>,
    trace_len: usize,
    diagnostics: AncillaDiagnostics,
    best_u: CMatrix,
    config: AnnealConfig,
}

pub fn search(args: SearchArgs, argv: &[String]) -> CliResult {
    let (cfg, inputs) = search_config(&args)?;
    let result = anneal(&cfg)?;
    let (sigma, _) = assemble(&result.best_u, cfg.d_ancilla, cfg.d_a, cfg.d_b)?;
    let summary = SearchSummary {
        best_discord: result.best_discord,
        best_chain: result.best_chain,
        chain_best: result.chain_best.clone(),
        trace_len: result.trace.len(),
        diagnostics: ancilla_diagnostics_of(&sigma)?,
        best_u: result.best_u.clone(),
        config: cfg.clone(),
    };
    let mut artifacts = vec![Artifact::new(args.out, to_json(&summary))];
    if let Some(path) = args.trace {
        let mut csv = Csv::new(&["chain", "step", "temperature", "current", "best"]);
        for t in &result.trace {
            csv.row(&[
                t.chain.into(),
                t.step.into(),
                t.temperature.into(),
                t.current.into(),
                t.best.into(),
            ]);
        }
        artifacts.push(Artifact::new(Some(path), csv.finish()));
    }
    let run = RunInfo {
        command: "search",
        config: serde_json::to_value(&cfg).expect("config serializes"),
        seed: Some(cfg.seed),
        inputs,
    };
    emit(&run, argv, artifacts)
}

#[derive(Serialize)]
struct MdssReport {
    d: usize,
    construction: Construction,
    structure_deviation: f64,
    discord: f64,
    mutual_info: f64,
    correlation_rank: usize,
    genuinely_quantum: bool,
}

pub fn mdss(args: MdssArgs, argv: &[String]) -> CliResult {
    let cfg = args.opt.config()?;
    let mut inputs = vec![];
    let (rho, deviation) = match args.construction {
        Construction::Mub => {
            let fam = mub_family(args.d)?;
            (rho_max_d(args.d)?, fam.max_deviation())
        }
        Construction::Sic => {
            let sic = match (&args.fiducial, args.d) {
                (Some(path), d) => {
                    let bytes = read_input(path)?;
                    let env: KetEnvelope = parse_json(&bytes, path)?;
                    inputs.push(bytes);
                    sic_from_fiducial(d, &env.to_ket()?)?
                }
                (None, 2) => sic_tetrahedron(),
                (None, d) => {
                    return Err(invalid(format!("a SIC in dimension {d} needs --fiducial")));
                }
            };
            (rho_tilde_max_d(&sic)?, sic.max_deviation())
        }
    };
    let p = profile(&rho, Side::A, &cfg)?;
    let g = is_genuinely_quantum(&rho)?;
    let report = MdssReport {
        d: args.d,
        construction: args.construction,
        structure_deviation: deviation,
        discord: p.discord,
        mutual_info: p.mutual_info,
        correlation_rank: g.rank,
        genuinely_quantum: g.genuine,
    };
    let mut artifacts = vec![Artifact::new(args.out, to_json(&report))];
    if let Some(path) = args.state_out {
        artifacts.push(Artifact::new(Some(path), to_json(&rho)));
    }
    let run = RunInfo {
        command: "mdss",
        config: json!({
            "d": args.d,
            "construction": args.construction,
            "fiducial": args.fiducial.as_ref().map(|p| p.display().to_string()),
            "optimizer": cfg,
        }),
        seed: Some(cfg.seed),
        inputs,
    };
    emit(&run, argv, artifacts)
}

#[derive(Serialize)]
struct GenuineOut {
    genuinely_quantum: bool,
    rank: usize,
    d_min: usize,
    singular_values: Vec<f64>,
}

pub fn genuine(args: GenuineArgs, argv: &[String]) -> CliResult {
    let (rho, inputs) = load_state(&args.source)?;
    let report = is_genuinely_quantum(&rho)?;
    let out = GenuineOut {
        genuinely_quantum: report.genuine,
        rank: report.rank,
        d_min: report.d_min,
        singular_values: report.singular_values,
    };
    let mut artifacts = vec![Artifact::new(args.out, to_json(&out))];
    if let Some(path) = args.matrix_out {
        let cm = correlation_matrix(&rho)?;
        let mut csv = Csv::new(&["row", "col", "value"]);
        for (m, row) in cm.entries.iter().enumerate() {
            for (n, &v) in row.iter().enumerate() {
                csv.row(&[m.into(), n.into(), v.into()]);
            }
        }
        artifacts.push(Artifact::new(Some(path), csv.finish()));
    }
    let run = RunInfo {
        command: "genuine",
        config: json!({"source": source_config(&args.source)}),
        seed: None,
        inputs,
    };
    emit(&run, argv, artifacts)
}
