use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::args::*;
use super::manifest::RunManifest;
use crate::decompose::{
    connectivity_aware_decompose_with, decomposition_stats, random_decompose, write_decomposition_dir,
    ConnectivityAware, Decomposition, PieceNormalization, SkeletonWeight, Strategy,
};
use crate::error::{Error, Result};
use crate::graph_core::{load_edge_list, Graph, Indexing};
use crate::partition::multilevel_partition;
use crate::propagate::{decay_curve, write_curve_csv, StackSpec};
use crate::train::{
    depth_sweep, generate_sbm, k_sweep, parse_schedule, train, Backbone, Dataset, ModelConfig, SbmSpec, SweepTable,
    TrainOptions,
};
use crate::verify::{run_suite, Suite, TrialSizes};

/// `1..8` and `1..=8` are inclusive ranges; items may be comma separated.
pub(crate) fn parse_list(s: &str) -> Result<Vec<u64>> {
    let bad = |t: &str| Error::domain(format!("invalid list item {t:?}"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let b = b.trim_start_matches('=');
            let lo: u64 = a.trim().parse().map_err(|_| bad(item))?;
            let hi: u64 = b.trim().parse().map_err(|_| bad(item))?;
            if lo > hi {
                return Err(bad(item));
            }
            out.extend(lo..=hi);
        } else {
            out.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    if out.is_empty() {
        return Err(Error::domain("empty list"));
    }
    Ok(out)
}

fn parse_usizes(s: &str) -> Result<Vec<usize>> {
    Ok(parse_list(s)?.into_iter().map(|v| v as usize).collect())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(m: &mut RunManifest, path: PathBuf, text: &str) -> Result<()> {
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    m.output(&path);
    Ok(())
}

fn write_with<F>(m: &mut RunManifest, path: PathBuf, f: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf)?;
    fs::write(&path, buf).map_err(|e| Error::io(&path, e))?;
    m.output(&path);
    Ok(())
}

fn load_graph(input: &GraphInput, m: &mut RunManifest) -> Result<Graph> {
    let indexing = if input.one_indexed { Indexing::One } else { Indexing::Zero };
    let g = load_edge_list(&input.edges, indexing)?;
    m.input(&input.edges)?;
    Ok(g)
}

pub fn partition(a: &PartitionArgs) -> Result<()> {
    let mut m = RunManifest::new("partition", format!("{a:?}"), a.common.seed);
    let g = load_graph(&a.graph, &mut m)?;
    let part = multilevel_partition(&g, a.p, a.common.seed, a.imbalance)?;
    let out = &a.common.out;
    ensure_dir(out)?;
    write_text(&mut m, out.join("partition.txt"), &part.to_text())?;
    let cut = crate::partition::cut_edges(&g, &part);
    let sizes: Vec<String> = part.sizes().iter().map(usize::to_string).collect();
    let stats = format!(
        "nodes={}\nedges={}\nparts={}\ncut_edges={}\ncut_weight={}\nsizes={}\nimbalance={}\n",
        g.node_count(),
        g.edge_count(),
        part.parts(),
        cut.len(),
        part.edge_cut(&g),
        sizes.join(","),
        part.imbalance()
    );
    write_text(&mut m, out.join("partition_stats.txt"), &stats)?;
    print!("{stats}");
    m.write(out)
}

pub fn decompose(a: &DecomposeArgs) -> Result<()> {
    let mut m = RunManifest::new("decompose", format!("{a:?}"), a.common.seed);
    if a.k == 0 {
        return Err(Error::domain("--k must be at least 1"));
    }
    let g = load_graph(&a.graph, &mut m)?;
    let seed = a.common.seed;
    let d = match a.strategy {
        StrategyArg::None if a.k > 1 => {
            return Err(Error::domain("strategy none cannot produce more than one piece"))
        }
        StrategyArg::None => Decomposition::identity(&g),
        StrategyArg::Random => random_decompose(&g, a.k, seed)?,
        StrategyArg::Ca => connectivity_aware_decompose_with(
            &g,
            &ConnectivityAware {
                parts: a.p,
                k: a.k,
                seed,
                skeleton: !a.no_skeleton,
                max_imbalance: a.imbalance,
            },
        )?,
    };
    let weight = if a.discount { SkeletonWeight::Discount } else { SkeletonWeight::Verbatim };
    let out = &a.common.out;
    write_decomposition_dir(&d, out, weight)?;
    for k in 0..d.k() {
        m.output(&out.join(format!("piece_{k}.txt")));
    }
    m.output(&out.join("skeleton.txt"));
    m.output(&out.join("meta.txt"));
    let s = decomposition_stats(&g, &d);
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let stats = format!(
        "k={}\npiece_edges={}\npiece_components={}\nskeleton_edges={}\nduplication_factor={}\ngraph_components={}\n",
        d.k(),
        join(&s.piece_edges),
        join(&s.piece_components),
        s.skeleton_edges,
        s.duplication_factor,
        s.graph_components
    );
    write_text(&mut m, out.join("stats.txt"), &stats)?;
    print!("{stats}");
    m.write(out)
}

pub fn verify(a: &VerifyArgs) -> Result<()> {
    let mut m = RunManifest::new("verify", format!("{a:?}"), a.common.seed);
    let suite: Suite = a.which.parse()?;
    let sizes = TrialSizes {
        max_nodes: a.max_nodes,
        max_dim: a.max_dim,
        max_depth: a.max_depth,
    };
    let report = run_suite(suite, a.trials, sizes, a.common.seed)?;
    let out = &a.common.out;
    ensure_dir(out)?;
    let line = format!("{report}\n");
    write_text(&mut m, out.join(format!("verify_{suite}.txt")), &line)?;
    print!("{line}");
    m.write(out)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Error::Numeric(format!("{} of {} trials failed", report.trials - report.passed, report.trials)))
    }
}

pub fn decay(a: &DecayArgs) -> Result<()> {
    let mut m = RunManifest::new("decay", format!("{a:?}"), a.common.seed);
    let spec = match a.stack {
        StackArg::Decay => {
            let g = match &a.edges {
                Some(path) => {
                    m.input(path)?;
                    load_edge_list(path, Indexing::Zero)?
                }
                None => {
                    let n = a.nodes.max(3);
                    Graph::unweighted(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())?
                }
            };
            StackSpec::decay(&g, a.dim, a.sigma_w, a.slope)?
        }
        StackArg::Preserve => StackSpec::preserve(a.nodes, a.dim, a.slope, a.gain),
        StackArg::Identity => StackSpec::identity(a.nodes, a.dim, a.slope),
    };
    let depths = parse_usizes(&a.depths)?;
    let rows = decay_curve(&spec, &depths, a.samples, a.epsilon, a.common.seed)?;
    let out = &a.common.out;
    ensure_dir(out)?;
    write_with(&mut m, out.join("decay.csv"), |buf| write_curve_csv(&rows, buf))?;
    if a.slope < 1.0 {
        let stack = spec.build(*depths.last().unwrap(), a.common.seed)?;
        write_text(&mut m, out.join("regime.txt"), &stack.regime()?.to_kv())?;
    }
    let mut summary = String::new();
    for r in &rows {
        let _ = writeln!(
            summary,
            "depth={} bound={:e} max_sv={:e} min_sv={:e} entropy_bits={}",
            r.depth, r.bound, r.max_sv, r.min_sv, r.entropy_bits
        );
    }
    print!("{summary}");
    m.write(out)
}

fn dataset(a: &DataArgs) -> Result<Dataset> {
    let spec = SbmSpec {
        nodes: a.nodes,
        blocks: a.blocks,
        p_in: a.p_in,
        p_out: a.p_out,
        dim: a.feature_dim,
        noise: a.noise,
        ..SbmSpec::default()
    };
    generate_sbm(&spec, a.data_seed)
}

/// Config file first, then explicit flags. A changed depth resets the K
/// schedule to all ones unless a schedule is given.
fn model_config(a: &ModelArgs, m: &mut RunManifest) -> Result<ModelConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            m.input(path)?;
            ModelConfig::load(path)?
        }
        None => ModelConfig::default(),
    };
    if let Some(b) = &a.backbone {
        cfg.backbone = b.parse()?;
    }
    if let Some(d) = a.depth {
        if d != cfg.depth {
            cfg.k_schedule = vec![1; d];
        }
        cfg.depth = d;
    }
    if let Some(h) = a.hidden {
        cfg.hidden = h;
    }
    if let Some(s) = a.slope {
        cfg.slope = s;
    }
    if let Some(lr) = a.lr {
        cfg.learning_rate = lr;
    }
    if let Some(wd) = a.weight_decay {
        cfg.weight_decay = wd;
    }
    if let Some(e) = a.epochs {
        cfg.max_epochs = e;
    }
    if let Some(p) = a.patience {
        cfg.patience = p;
    }
    Ok(cfg)
}

fn strategy(arg: StrategyArg, parts: usize, no_skeleton: bool) -> Strategy {
    match arg {
        StrategyArg::None => Strategy::None,
        StrategyArg::Random => Strategy::Random,
        StrategyArg::Ca => Strategy::ConnectivityAware {
            parts,
            skeleton: !no_skeleton,
        },
    }
}

fn seeds(list: &Option<String>, base: u64) -> Result<Vec<u64>> {
    match list {
        Some(s) => parse_list(s),
        None => Ok((base..base + 5).collect()),
    }
}

pub fn train_cmd(a: &TrainArgs) -> Result<()> {
    let mut m = RunManifest::new("train", format!("{a:?}"), a.common.seed);
    let mut cfg = model_config(&a.model, &mut m)?;
    if let Some(s) = &a.k_schedule {
        cfg.k_schedule = parse_schedule(s)?;
    }
    let d = &a.decomposition;
    if d.strategy != StrategyArg::None && !cfg.is_decomposed() {
        return Err(Error::domain("a decomposition strategy needs a K schedule with some entry above 1"));
    }
    cfg.validate()?;
    let options = TrainOptions {
        strategy: strategy(d.strategy, d.p, d.no_skeleton),
        normalization: match d.normalization {
            NormArg::PerPiece => PieceNormalization::PerPiece { self_loops: true },
            NormArg::Global => PieceNormalization::Global { self_loops: true },
            NormArg::Raw => PieceNormalization::Raw,
        },
        skeleton_weight: if d.discount { SkeletonWeight::Discount } else { SkeletonWeight::Verbatim },
    };
    let data = dataset(&a.data)?;
    let result = train(&cfg, &data, &options, a.common.seed)?;
    let out = &a.common.out;
    ensure_dir(out)?;
    write_with(&mut m, out.join("history.csv"), |buf| result.write_history_csv(buf))?;
    let summary = format!(
        "best_epoch={}\nbest_val_acc={}\ntest_acc={}\nepochs_run={}\nstopped_early={}\nseed={}\n{}",
        result.best_epoch,
        result.best_val_acc,
        result.test_acc,
        result.history.len(),
        result.stopped_early,
        result.seed,
        cfg.to_kv()
    );
    write_text(&mut m, out.join("result.txt"), &summary)?;
    print!("{summary}");
    m.write(out)
}

fn print_aggregates(t: &SweepTable) {
    println!("backbone,strategy,depth,k_schedule,mean,std,median");
    for a in &t.aggregates {
        println!(
            "{},{},{},{},{:.4},{:.4},{:.4}",
            a.backbone,
            a.strategy,
            a.depth,
            crate::train::format_schedule(&a.k_schedule),
            a.mean,
            a.std,
            a.median
        );
    }
}

pub fn ksweep(a: &KsweepArgs) -> Result<()> {
    let mut m = RunManifest::new("ksweep", format!("{a:?}"), a.common.seed);
    let template = model_config(&a.model, &mut m)?;
    let ks = parse_usizes(&a.k)?;
    let seeds = seeds(&a.seeds, a.common.seed)?;
    let data = dataset(&a.data)?;
    let table = k_sweep(&template, &data, &ks, &seeds, a.p, !a.no_skeleton)?;
    let out = &a.common.out;
    ensure_dir(out)?;
    write_with(&mut m, out.join("ksweep.csv"), |buf| table.write_csv(buf))?;
    print_aggregates(&table);
    m.write(out)
}

pub fn depthsweep(a: &DepthsweepArgs) -> Result<()> {
    let mut m = RunManifest::new("depthsweep", format!("{a:?}"), a.common.seed);
    let template = model_config(&a.model, &mut m)?;
    let depths = parse_usizes(&a.depths)?;
    let backbones = a
        .backbones
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<Backbone>>>()?;
    let variant = strategy(a.strategy, a.p, a.no_skeleton);
    let strategies = if variant == Strategy::None { vec![Strategy::None] } else { vec![Strategy::None, variant] };
    let seeds = seeds(&a.seeds, a.common.seed)?;
    let data = dataset(&a.data)?;
    let table = depth_sweep(&template, &data, &depths, &backbones, &strategies, a.k, &seeds)?;
    let out = &a.common.out;
    ensure_dir(out)?;
    write_with(&mut m, out.join("depthsweep.csv"), |buf| table.write_csv(buf))?;
    print_aggregates(&table);
    m.write(out)
}
