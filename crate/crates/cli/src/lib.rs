//! `cellchan` command implementations.
//!
//! Each command reads one [`ScenarioConfig`], writes CSV/JSON files under
//! the output directory and returns their paths.

pub mod config;
pub mod error;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;

use cellchan_core::{
    activity_matrix, lattice_graph, ChannelKind, ChannelPlan, DomainName, DynamicAllocator,
    Evaluator, Lattice, LogicalChannel, Scheme, StaticAllocator, CONTROL_REUSE_METRIC,
    DATA_REUSE_METRIC,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::ScenarioConfig;
pub use error::CliError;
use output::{strings, OutputDir};

pub const DEFAULT_OUTPUT_DIR: &str = "cellchan-out";

/// Largest per-PAN channel counts observed for the reference 12-PAN scenario.
pub const REFERENCE_MAX_CHANNELS: [(&str, usize); 3] = [("US", 28), ("Japan", 18), ("Europe", 14)];

const REFERENCE_NOTE: &str = "reference_max_channels are published figures for the 12-PAN \
reference scenario; Japan computes 20 here because its table has 20 data channels";

#[derive(Debug, Parser)]
#[command(
    name = "cellchan",
    version,
    about = "Channel allocation for hexagonal-cell sensor networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cell centres and the control/data interference edge lists.
    Lattice(CommonArgs),
    /// Control channels plus fixed data-channel groups per cell.
    Static(CommonArgs),
    /// Data channels per PAN per elementary cycle.
    Dynamic(CommonArgs),
    /// Makespans of the single, static and dynamic schemes.
    Evaluate(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Regulatory domain (US, Europe, Japan); overrides `domain` in the config.
    #[arg(long, value_parser = parse_domain)]
    pub domain: Option<DomainName>,
}

fn parse_domain(s: &str) -> Result<DomainName, String> {
    s.parse()
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Lattice(a)
            | Command::Static(a)
            | Command::Dynamic(a)
            | Command::Evaluate(a) => a,
        }
    }
}

/// Runs one command and returns the files written.
pub fn run(command: &Command) -> Result<Vec<PathBuf>, CliError> {
    let args = command.args();
    let cfg = ScenarioConfig::load(&args.config)?;
    let root = args
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    let lattice = cfg.lattice()?;

    // Everything is computed before the directory is touched, so a failing
    // command leaves no partial output behind.
    let files = match command {
        Command::Lattice(_) => lattice_files(&lattice),
        Command::Static(_) => static_files(&cfg, args.domain, &lattice)?,
        Command::Dynamic(_) => dynamic_files(&cfg, args.domain, &lattice)?,
        Command::Evaluate(_) => evaluate_files(&cfg, args.domain, &lattice)?,
    };
    let mut out = OutputDir::create(&root)?;
    for file in files {
        match file {
            File::Csv { name, header, rows } => out.write_csv(name, &header, &rows)?,
            File::Text { name, text } => out.write_bytes(name, text.as_bytes())?,
        }
    }
    Ok(out.into_written())
}

enum File {
    Csv {
        name: &'static str,
        header: Vec<String>,
        rows: Vec<Vec<String>>,
    },
    Text {
        name: &'static str,
        text: String,
    },
}

fn json<T: Serialize>(name: &'static str, value: &T) -> File {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialize");
    text.push('\n');
    File::Text { name, text }
}

fn join_channels(channels: &[LogicalChannel]) -> String {
    channels
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn lattice_files(lattice: &Lattice) -> Vec<File> {
    let rows = lattice
        .cells()
        .iter()
        .map(|&c| {
            let p = lattice.center_of(c).expect("cell of this lattice");
            vec![
                c.i.to_string(),
                c.j.to_string(),
                format!("{:.6}", p.x),
                format!("{:.6}", p.y),
            ]
        })
        .collect();
    vec![
        File::Csv {
            name: "cells.csv",
            header: strings(["i", "j", "x", "y"]),
            rows,
        },
        File::Text {
            name: "edges_control.txt",
            text: lattice_graph(lattice, CONTROL_REUSE_METRIC).to_edge_list(),
        },
        File::Text {
            name: "edges_data.txt",
            text: lattice_graph(lattice, DATA_REUSE_METRIC).to_edge_list(),
        },
    ]
}

#[derive(Serialize)]
struct StaticSummary {
    domain: DomainName,
    cells: usize,
    control_channels: usize,
    data_channels: usize,
    coloring: &'static str,
    chi_control: usize,
    chi_data: usize,
    k_static: usize,
    unassigned: Vec<String>,
    flags: Vec<String>,
}

fn plan_for(
    cfg: &ScenarioConfig,
    domain: Option<DomainName>,
) -> Result<(DomainName, ChannelPlan), CliError> {
    let name = cfg.domain_name(domain)?;
    Ok((name, cfg.plan(name)?))
}

fn static_files(
    cfg: &ScenarioConfig,
    domain: Option<DomainName>,
    lattice: &Lattice,
) -> Result<Vec<File>, CliError> {
    let (name, plan) = plan_for(cfg, domain)?;
    let alloc = StaticAllocator::new(cfg.solver()).allocate(lattice, &plan)?;
    let k = alloc.k_static();

    let mut header = strings(["i", "j", "control_phy", "control_code"]);
    header.extend((1..=k).map(|n| format!("data_{n}")));
    let rows = lattice
        .cells()
        .iter()
        .map(|c| {
            let ctrl = alloc.control.channels[c];
            let mut row = vec![
                c.i.to_string(),
                c.j.to_string(),
                ctrl.phy_channel.to_string(),
                ctrl.code.to_string(),
            ];
            row.extend(alloc.data.groups[c].iter().map(ToString::to_string));
            row
        })
        .collect();

    let coloring_rows = |kind: ChannelKind| -> Vec<Vec<String>> {
        let col = match kind {
            ChannelKind::Control => &alloc.control.coloring,
            ChannelKind::Data => &alloc.data.coloring,
        };
        lattice
            .cells()
            .iter()
            .map(|&c| {
                strings([
                    c.i,
                    c.j,
                    col.color_of(c).expect("every cell colored") as i32,
                ])
            })
            .collect()
    };

    let mut flags = Vec::new();
    if cfg.us_28_reading(name) {
        flags.push(format!(
            "us_data_card=28: control limited to {} channels, k_static={k}",
            plan.control.len()
        ));
    }
    let summary = StaticSummary {
        domain: name,
        cells: lattice.len(),
        control_channels: plan.control.len(),
        data_channels: plan.data.len(),
        coloring: if lattice.len() <= cfg.solver.exact_vertex_cap {
            "exact"
        } else {
            "pattern"
        },
        chi_control: alloc.chi_control(),
        chi_data: alloc.chi_data(),
        k_static: k,
        unassigned: strings(&alloc.data.unassigned),
        flags,
    };

    Ok(vec![
        File::Csv {
            name: "static_allocation.csv",
            header,
            rows,
        },
        File::Csv {
            name: "control_coloring.csv",
            header: strings(["i", "j", "color"]),
            rows: coloring_rows(ChannelKind::Control),
        },
        File::Csv {
            name: "data_coloring.csv",
            header: strings(["i", "j", "color"]),
            rows: coloring_rows(ChannelKind::Data),
        },
        json("static_summary.json", &summary),
    ])
}

#[derive(Serialize)]
struct PanInfo {
    pan: usize,
    cell: cellchan_core::CellIndex,
    so: u32,
    bo: u32,
    phase: u64,
    max_channels: usize,
}

#[derive(Serialize)]
struct CycleInfo {
    cycle: usize,
    active_pans: Vec<usize>,
    chi: usize,
    k_min: Option<usize>,
    channels: BTreeMap<usize, Vec<String>>,
}

#[derive(Serialize)]
struct DynamicSummary {
    domain: DomainName,
    data_channels: usize,
    bi_maj: u64,
    sd_min: u64,
    u_cycles: u64,
    pans: Vec<PanInfo>,
    cycles: Vec<CycleInfo>,
}

fn dynamic_files(
    cfg: &ScenarioConfig,
    domain: Option<DomainName>,
    lattice: &Lattice,
) -> Result<Vec<File>, CliError> {
    let (name, plan) = plan_for(cfg, domain)?;
    let sfs = cfg.superframes()?;
    let alloc = DynamicAllocator::new(cfg.solver()).allocate(lattice, sfs, &plan)?;
    let activity = activity_matrix(sfs, &alloc.structure);
    let cycles = alloc.cycles();

    let mut act_header = strings(["pan", "pan_i", "pan_j", "so", "bo", "phase"]);
    act_header.extend((1..=cycles).map(|t| format!("c{t}")));
    let act_rows = sfs
        .iter()
        .zip(&activity.active)
        .enumerate()
        .map(|(p, (sf, row))| {
            let mut r = vec![
                (p + 1).to_string(),
                sf.cell.i.to_string(),
                sf.cell.j.to_string(),
                sf.so.to_string(),
                sf.bo.to_string(),
                sf.phase.to_string(),
            ];
            r.extend(row.iter().map(|&a| u8::from(a).to_string()));
            r
        })
        .collect();

    let mut alloc_rows = Vec::new();
    let mut cycle_rows = Vec::new();
    let mut cycle_info = Vec::new();
    for t in 0..cycles {
        let mut active_pans = Vec::new();
        let mut channels = BTreeMap::new();
        for (p, sf) in sfs.iter().enumerate() {
            let e = alloc.entry(p, t);
            alloc_rows.push(vec![
                (t + 1).to_string(),
                sf.cell.i.to_string(),
                sf.cell.j.to_string(),
                u8::from(e.active).to_string(),
                e.chi.to_string(),
                e.k.to_string(),
                join_channels(&e.channels),
            ]);
            if e.active {
                active_pans.push(p + 1);
                channels.insert(p + 1, strings(&e.channels));
            }
        }
        let k_min = alloc.per_cycle_k[t];
        cycle_rows.push(vec![
            (t + 1).to_string(),
            strings(&active_pans).join(" "),
            alloc.per_cycle_chi[t].to_string(),
            k_min.map_or_else(String::new, |k| k.to_string()),
        ]);
        cycle_info.push(CycleInfo {
            cycle: t + 1,
            active_pans,
            chi: alloc.per_cycle_chi[t],
            k_min,
            channels,
        });
    }

    let summary = DynamicSummary {
        domain: name,
        data_channels: plan.data.len(),
        bi_maj: alloc.structure.bi_maj,
        sd_min: alloc.structure.sd_min,
        u_cycles: alloc.structure.u_cycles,
        pans: sfs
            .iter()
            .enumerate()
            .map(|(p, sf)| PanInfo {
                pan: p + 1,
                cell: sf.cell,
                so: sf.so,
                bo: sf.bo,
                phase: sf.phase,
                max_channels: alloc.max_channels(p),
            })
            .collect(),
        cycles: cycle_info,
    };

    Ok(vec![
        File::Csv {
            name: "activity.csv",
            header: act_header,
            rows: act_rows,
        },
        File::Csv {
            name: "dynamic_allocation.csv",
            header: strings(["cycle", "pan_i", "pan_j", "active", "chi", "k", "channels"]),
            rows: alloc_rows,
        },
        File::Csv {
            name: "cycles.csv",
            header: strings(["cycle", "active_pans", "chi", "k_min"]),
            rows: cycle_rows,
        },
        json("dynamic_allocation.json", &summary),
    ])
}

#[derive(Serialize)]
struct SchemeSummary {
    scheme: Scheme,
    max_channels: usize,
    per_pan_max_channels: Vec<usize>,
    worst_makespan: u64,
    best_delay_decrease_percent: f64,
}

#[derive(Serialize)]
struct EvaluationSummary {
    domain: DomainName,
    k_static: usize,
    requested_slots: Vec<u64>,
    schemes: Vec<SchemeSummary>,
    reference_max_channels: BTreeMap<&'static str, usize>,
    note: &'static str,
}

fn evaluate_files(
    cfg: &ScenarioConfig,
    domain: Option<DomainName>,
    lattice: &Lattice,
) -> Result<Vec<File>, CliError> {
    let (name, plan) = plan_for(cfg, domain)?;
    let sfs = cfg.superframes()?;
    let workload = cfg.workload()?;
    let cmp = Evaluator::new(cfg.solver()).compare(lattice, sfs, &plan, &workload)?;

    let mut rows = Vec::new();
    let mut schemes = Vec::new();
    for report in &cmp.reports {
        for r in &report.rows {
            rows.push(vec![
                report.scheme.to_string(),
                (r.pan + 1).to_string(),
                r.cell.i.to_string(),
                r.cell.j.to_string(),
                (r.cycle + 1).to_string(),
                r.channels.to_string(),
                r.makespan.to_string(),
                format!("{:.2}", r.delay_decrease_percent),
            ]);
        }
        schemes.push(SchemeSummary {
            scheme: report.scheme,
            max_channels: report.max_channels.iter().copied().max().unwrap_or(0),
            per_pan_max_channels: report.max_channels.clone(),
            worst_makespan: report.rows.iter().map(|r| r.makespan).max().unwrap_or(0),
            best_delay_decrease_percent: report
                .rows
                .iter()
                .map(|r| r.delay_decrease_percent)
                .fold(0.0, f64::max),
        });
    }

    let summary = EvaluationSummary {
        domain: name,
        k_static: cmp.k_static,
        requested_slots: workload.per_pan.iter().map(|r| r.iter().sum()).collect(),
        schemes,
        reference_max_channels: REFERENCE_MAX_CHANNELS.into_iter().collect(),
        note: REFERENCE_NOTE,
    };
    Ok(vec![
        File::Csv {
            name: "evaluation.csv",
            header: strings([
                "scheme",
                "pan",
                "pan_i",
                "pan_j",
                "cycle",
                "channels",
                "makespan",
                "delay_decrease_percent",
            ]),
            rows,
        },
        json("evaluation_summary.json", &summary),
    ])
}
