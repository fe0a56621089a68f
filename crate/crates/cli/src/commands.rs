use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use tgkit_core::baseline::chain_baseline;
use tgkit_core::communities::induced_subgraphs;
use tgkit_core::corpus::{
    build_dataset, read_corpus, read_jsonl, write_jsonl, AnnotatedDocument, BuiltDataset,
    MaskedSequence, PruneConfig, Split, SplitRatios, Task1Example, Task2Pair,
};
use tgkit_core::metrics::{evaluate_task1, evaluate_task2, Task1Prediction, Task2Prediction};
use tgkit_core::synth::{synth_corpus, SynthConfig};
use tgkit_core::{detect_communities, dot, TemporalGraph, UndirectedAdjacency};

use crate::args::{Cli, Command, Task};
use crate::error::CliError;

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    match cli.command {
        Command::Build {
            corpus,
            out,
            config,
            seed,
            ratios,
        } => build(&corpus, &out, config.as_deref(), seed, &ratios),
        Command::Baseline { pairs, out } => baseline(&pairs, &out),
        Command::Eval {
            gold,
            predictions,
            task,
            out,
        } => eval(&gold, &predictions, task, out.as_deref()),
        Command::Communities { dot, out } => communities(&dot, &out),
        Command::Encode { graph, out } => encode(&graph, out.as_deref()),
        Command::Decode { dot, out } => decode(&dot, out.as_deref()),
        Command::Stats {
            corpus,
            config,
            seed,
            out,
        } => stats(&corpus, config.as_deref(), seed, out.as_deref()),
        Command::Synth {
            out,
            docs,
            events_per_doc,
            edge_density,
            banned_verb_rate,
            seed,
        } => {
            for (name, p) in [
                ("edge density", edge_density),
                ("banned verb rate", banned_verb_rate),
            ] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::Input(format!("{name} {p} outside [0, 1]")));
                }
            }
            let cfg = SynthConfig {
                docs,
                events_per_doc,
                edge_density,
                banned_verb_rate,
                seed,
                ..SynthConfig::default()
            };
            write_records(&out, &synth_corpus(&cfg))
        }
        Command::Config => {
            print!("{}", PruneConfig::default_toml());
            Ok(())
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(CliError::io(path))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(CliError::io(path))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(CliError::io(path))
}

fn read_records<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    read_jsonl(open(path)?).map_err(|e| CliError::corpus(path, e))
}

fn write_records<'a, T: Serialize + 'a>(
    path: &Path,
    records: impl IntoIterator<Item = &'a T>,
) -> Result<(), CliError> {
    let file = File::create(path).map_err(CliError::io(path))?;
    write_jsonl(BufWriter::new(file), records).map_err(CliError::io(path))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    write_text(path, &text)
}

fn load_config(path: Option<&Path>) -> Result<PruneConfig, CliError> {
    match path {
        Some(p) => PruneConfig::from_path(p).map_err(|e| CliError::corpus(p, e)),
        None => Ok(PruneConfig::default()),
    }
}

fn load_corpus(path: &Path) -> Result<Vec<AnnotatedDocument>, CliError> {
    let docs = read_corpus(open(path)?).map_err(|e| CliError::corpus(path, e))?;
    if docs.is_empty() {
        return Err(CliError::Input(format!("{}: empty corpus", path.display())));
    }
    Ok(docs)
}

fn dataset(
    corpus: &Path,
    config: Option<&Path>,
    seed: u64,
    ratios: SplitRatios,
) -> Result<BuiltDataset, CliError> {
    ratios
        .validate()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let cfg = load_config(config)?;
    let docs = load_corpus(corpus)?;
    build_dataset(&docs, &cfg, ratios, seed).map_err(|e| CliError::corpus(corpus, e))
}

#[derive(Serialize)]
struct MaskRecord<'a> {
    doc_id: &'a str,
    prompt: &'a str,
    #[serde(flatten)]
    sequence: MaskedSequence,
}

#[derive(Serialize)]
struct StatsRecord<'a> {
    seed: u64,
    reduction: &'a tgkit_core::corpus::ReductionReport,
    relation_reduction_percent: f64,
    event_reduction_percent: f64,
    dataset: &'a tgkit_core::corpus::DatasetStats,
}

fn stats_record(data: &BuiltDataset, seed: u64) -> StatsRecord<'_> {
    StatsRecord {
        seed,
        reduction: &data.reduction,
        relation_reduction_percent: data.reduction.relation_reduction(),
        event_reduction_percent: data.reduction.event_reduction(),
        dataset: &data.stats,
    }
}

fn stats_text(data: &BuiltDataset) -> String {
    format!("{}\n{}", data.reduction.render(), data.stats.render())
}

fn build(
    corpus: &Path,
    out: &Path,
    config: Option<&Path>,
    seed: u64,
    ratios: &[f64],
) -> Result<(), CliError> {
    let &[train, valid, test] = ratios else {
        return Err(CliError::Input(format!(
            "--ratios takes 3 values, got {}",
            ratios.len()
        )));
    };
    let ratios = SplitRatios([train, valid, test]);
    if !corpus.is_file() {
        return Err(CliError::Io {
            path: corpus.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        });
    }
    let data = dataset(corpus, config, seed, ratios)?;
    fs::create_dir_all(out).map_err(CliError::io(out))?;

    for split in Split::ALL {
        let task2: Vec<&Task2Pair> = data.task2(split).collect();
        write_records(&out.join(format!("task2.{split}.jsonl")), task2)?;
        let task1: Vec<&Task1Example> = data.task1(split).collect();
        write_records(
            &out.join(format!("task1.{split}.jsonl")),
            task1.iter().copied(),
        )?;
        let minus: Vec<&Task1Example> = data.task1_minus_target(split).collect();
        write_records(&out.join(format!("task1_minus_c.{split}.jsonl")), minus)?;
        let masks: Vec<MaskRecord> = task1
            .iter()
            .map(|e| MaskRecord {
                doc_id: &e.doc_id,
                prompt: &e.prompt,
                sequence: e.masked_sequence(),
            })
            .collect();
        write_records(&out.join(format!("task1_masks.{split}.jsonl")), &masks)?;
    }
    write_json(&out.join("splits.json"), &data.assignment)?;
    write_json(&out.join("stats.json"), &stats_record(&data, seed))?;
    let text = stats_text(&data);
    write_text(&out.join("stats.txt"), &text)?;
    print!("{text}");
    Ok(())
}

fn stats(
    corpus: &Path,
    config: Option<&Path>,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let data = dataset(corpus, config, seed, SplitRatios::default())?;
    if let Some(out) = out {
        write_json(out, &stats_record(&data, seed))?;
    }
    print!("{}", stats_text(&data));
    Ok(())
}

fn baseline(pairs: &Path, out: &Path) -> Result<(), CliError> {
    let pairs: Vec<Task2Pair> = read_records(pairs)?;
    let preds = pairs
        .iter()
        .map(|p| {
            chain_baseline(p).map_err(|e| {
                CliError::Input(format!(
                    "{}/{}: gold graph does not parse: {e}",
                    p.doc_id, p.community_id
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_records(out, &preds)?;
    println!("wrote {} predictions", preds.len());
    Ok(())
}

fn report_alignment(missing: &[String], unmatched: &[String]) {
    if !missing.is_empty() {
        eprintln!(
            "{} gold records have no prediction: {}",
            missing.len(),
            missing.join(", ")
        );
    }
    if !unmatched.is_empty() {
        eprintln!(
            "{} predictions match no gold record and were ignored: {}",
            unmatched.len(),
            unmatched.join(", ")
        );
    }
}

/// Reads a prediction file. A gold pair file is accepted too, its DOT
/// standing in for the prediction, which gives the calibration run.
fn graph_predictions(path: &Path) -> Result<Vec<Task2Prediction>, CliError> {
    if let Ok(gold) = read_jsonl::<Task2Pair>(open(path)?) {
        return Ok(gold
            .into_iter()
            .map(|g| Task2Prediction {
                doc_id: g.doc_id,
                community_id: g.community_id,
                text: g.dot,
            })
            .collect());
    }
    read_records(path)
}

/// Like [`graph_predictions`]; for a gold file the first target of each
/// query is taken as its prediction.
fn event_predictions(path: &Path) -> Result<Vec<Task1Prediction>, CliError> {
    if let Ok(gold) = read_jsonl::<Task1Example>(open(path)?) {
        let mut seen = std::collections::BTreeSet::new();
        return Ok(gold
            .into_iter()
            .filter(|g| seen.insert((g.doc_id.clone(), g.prompt.clone())))
            .map(|g| Task1Prediction {
                doc_id: g.doc_id,
                prompt: g.prompt,
                text: g.target_event,
            })
            .collect());
    }
    read_records(path)
}

fn eval(gold: &Path, predictions: &Path, task: Task, out: Option<&Path>) -> Result<(), CliError> {
    match task {
        Task::Graph => {
            let g: Vec<Task2Pair> = read_records(gold)?;
            let p = graph_predictions(predictions)?;
            let report = evaluate_task2(&g, &p).map_err(CliError::eval)?;
            report_alignment(&report.missing_ids, &report.unmatched_ids);
            print!("{}", report.aggregate.render());
            if let Some(out) = out {
                write_json(out, &report)?;
            }
        }
        Task::Event => {
            let g: Vec<Task1Example> = read_records(gold)?;
            let p = event_predictions(predictions)?;
            let report = evaluate_task1(&g, &p).map_err(CliError::eval)?;
            report_alignment(&report.missing_ids, &report.unmatched_ids);
            print!("{}", report.aggregate.render());
            if let Some(out) = out {
                write_json(out, &report)?;
            }
        }
    }
    Ok(())
}

fn parse_dot(path: &Path) -> Result<TemporalGraph, CliError> {
    let text = read_text(path)?;
    dot::decode(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn communities(dot_path: &Path, out: &Path) -> Result<(), CliError> {
    let graph = parse_dot(dot_path)?;
    let adj = UndirectedAdjacency::from_graph(&graph);
    let detection = detect_communities(&adj)
        .map_err(|e| CliError::Input(format!("{}: {e}", dot_path.display())))?;
    fs::create_dir_all(out).map_err(CliError::io(out))?;
    let subgraphs = induced_subgraphs(&graph, &detection.partition);
    for (i, g) in subgraphs.iter().enumerate() {
        write_text(&out.join(format!("community_{i}.dot")), &dot::encode(g))?;
    }
    println!(
        "{} communities, modularity {:.6}",
        subgraphs.len(),
        detection.modularity
    );
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(CliError::io(Path::new("<stdout>")))
        }
    }
}

fn encode(graph: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let text = read_text(graph)?;
    let g: TemporalGraph = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", graph.display())))?;
    emit(out, &dot::encode(&g))
}

fn decode(dot_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let g = parse_dot(dot_path)?;
    let mut text = serde_json::to_string_pretty(&g).expect("graph serializes");
    text.push('\n');
    emit(out, &text)
}
