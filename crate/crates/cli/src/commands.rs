use std::path::Path;
use std::sync::Arc;

use dsrl::analysis::{downsample, partition, partitioned_scores, sense_counts};
use dsrl::codec::{decode_description, encode_input, encode_target, DecodeIssue, DescriptionSequence, IssueKind, ParsedStructure};
use dsrl::corpus::{corpus_stats, export_official, write_canonical, Corpus, OfficialFormat, TokenRange};
use dsrl::pipeline::{assemble_corpus, cast_records, decode_corpus, PredictionRecord};
use dsrl::registry::{self, BackendParams};
use dsrl::scorer::ScoreReport;
use dsrl::{Error, Result};
use serde::Serialize;

use crate::io::{create_dir, emit, jsonl, parse_jsonl, read_corpus, read_inventory, read_text, write_file};
use crate::{
    BackendArgs, CastArgs, Command, DecodeArgs, DownsampleArgs, EncodeArgs, Format, IoArgs, PartitionArgs,
    PipelineArgs, ScoreArgs, StatsArgs,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Convert(a) => convert(&a),
        Command::Export(a) => export(&a),
        Command::Encode(a) => encode(&a),
        Command::Decode(a) => decode(&a),
        Command::Cast(a) => cast(&a),
        Command::Score(a) => score(&a),
        Command::Partition(a) => partition_cmd(&a),
        Command::Stats(a) => stats(&a),
        Command::Downsample(a) => downsample_cmd(&a),
        Command::Pipeline(a) => pipeline(&a),
    }
}

fn convert(a: &IoArgs) -> Result<()> {
    let corpus = read_corpus(&a.input)?;
    emit(a.output.as_deref(), &write_canonical(&corpus))
}

fn export(a: &IoArgs) -> Result<()> {
    let corpus = read_corpus(&a.input)?;
    emit(a.output.as_deref(), &export_official(&corpus, OfficialFormat::Conll2009)?)
}

fn lines(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().map(|l| l + "\n").collect()
}

fn single_line(what: &str, index: usize, text: &str) -> Result<()> {
    if text.contains(['\n', '\r']) {
        return Err(Error::Contract(format!("{what} {index} contains a line break")));
    }
    Ok(())
}

fn encode(a: &EncodeArgs) -> Result<()> {
    let corpus = read_corpus(&a.input)?;
    let inv = read_inventory(&a.inventory)?;
    let prefix = a.prefix.prefix();
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    for (i, st) in corpus.structures().iter().enumerate() {
        let sentence = corpus.sentence_of(st);
        let target = encode_target(st, sentence, &inv, prefix)?;
        single_line("target", i, target.surface())?;
        inputs.push(encode_input(sentence, st.predicate())?);
        targets.push(target.surface().to_string());
    }
    create_dir(&a.output)?;
    write_file(&a.output.join("input.txt"), &lines(inputs))?;
    write_file(&a.output.join("target.txt"), &lines(targets))
}

#[derive(Serialize)]
struct IssueLine<'a> {
    line: usize,
    kind: IssueKind,
    offset: usize,
    note: &'a str,
}

#[derive(Serialize)]
struct ParsedLine<'a> {
    line: usize,
    parsed: &'a ParsedStructure,
    issues: &'a [DecodeIssue],
}

/// Sequence-file lines; an empty line stands for an empty model output.
fn read_sequences(path: &Path) -> Result<Vec<Option<DescriptionSequence>>> {
    Ok(read_text(path)?
        .lines()
        .map(|l| DescriptionSequence::new(l).ok())
        .collect())
}

fn empty_output_issue() -> DecodeIssue {
    DecodeIssue {
        kind: IssueKind::Truncated,
        position: 0,
        note: "empty sequence".into(),
    }
}

fn issue_log<'a>(per_line: impl IntoIterator<Item = &'a [DecodeIssue]>) -> String {
    jsonl(per_line.into_iter().enumerate().flat_map(|(i, issues)| {
        issues.iter().map(move |is| IssueLine {
            line: i + 1,
            kind: is.kind,
            offset: is.position,
            note: &is.note,
        })
    }))
}

/// Decodes against the corpus, one line per structure.
fn decode_against(corpus: &Corpus, seqs: &[Option<DescriptionSequence>]) -> Result<Vec<PredictionRecord>> {
    if seqs.len() != corpus.structures().len() {
        return Err(Error::Contract(format!(
            "{} sequences for {} structures",
            seqs.len(),
            corpus.structures().len()
        )));
    }
    // empty lines are decoded as a single space so the record layout stays uniform
    let filled: Vec<DescriptionSequence> = seqs
        .iter()
        .map(|s| s.clone().unwrap_or_else(|| DescriptionSequence::new(" ").expect("non-empty")))
        .collect();
    let mut records = decode_corpus(corpus, &filled)?;
    for (r, s) in records.iter_mut().zip(seqs) {
        if s.is_none() {
            r.parsed = ParsedStructure::default();
            r.issues = vec![empty_output_issue()];
        }
    }
    Ok(records)
}

fn decode(a: &DecodeArgs) -> Result<()> {
    let seqs = read_sequences(&a.input)?;
    let (parsed_text, log) = match &a.corpus {
        Some(path) => {
            let corpus = read_corpus(path)?;
            let records = decode_against(&corpus, &seqs)?;
            let log = issue_log(records.iter().map(|r| r.issues.as_slice()));
            (jsonl(&records), log)
        }
        None => {
            let decoded: Vec<(ParsedStructure, Vec<DecodeIssue>)> = seqs
                .iter()
                .map(|s| match s {
                    Some(seq) => decode_description(seq, None),
                    None => (ParsedStructure::default(), vec![empty_output_issue()]),
                })
                .collect();
            let text = jsonl(decoded.iter().enumerate().map(|(i, (p, is))| ParsedLine {
                line: i + 1,
                parsed: p,
                issues: is,
            }));
            (text, issue_log(decoded.iter().map(|(_, is)| is.as_slice())))
        }
    };
    if let Some(path) = &a.issues {
        write_file(path, &log)?;
    }
    emit(a.output.as_deref(), &parsed_text)
}

fn backend_params(b: &BackendArgs) -> BackendParams {
    BackendParams {
        endpoint: b.endpoint.clone(),
        ..BackendParams::default()
    }
}

fn cast(a: &CastArgs) -> Result<()> {
    let corpus = read_corpus(&a.corpus)?;
    let inv = read_inventory(&a.inventory)?;
    let embedder = registry::embedder(&a.backend.embedder, &backend_params(&a.backend))?;
    let mut records: Vec<PredictionRecord> = parse_jsonl(&a.input)?;
    cast_records(&mut records, &inv, embedder.as_ref())?;
    let (pred, _) = assemble_corpus(&corpus, &records)?;
    emit(a.output.as_deref(), &write_canonical(&pred))
}

fn render_report(report: &ScoreReport, scorer: &str, format: Format) -> String {
    match format {
        Format::Text => format!("scorer: {scorer}\n{report}"),
        Format::Json => format!("{}\n", report.to_json(scorer)),
    }
}

fn score(a: &ScoreArgs) -> Result<()> {
    let scorer = registry::scorer(&a.scorer)?;
    let gold = read_corpus(&a.gold)?;
    let pred = read_corpus(&a.input)?;
    let report = scorer.score(&gold, &pred)?;
    emit(a.output.as_deref(), &render_report(&report, scorer.name(), a.format))
}

#[derive(Serialize)]
struct TagLine<'a> {
    sentence_id: &'a str,
    predicate: TokenRange,
    lemma: &'a str,
    sense: Option<&'a str>,
    partition: &'static str,
}

fn partition_cmd(a: &PartitionArgs) -> Result<()> {
    let scorer = registry::scorer(&a.scorer)?;
    let counts = sense_counts(&read_corpus(&a.train)?);
    let gold = read_corpus(&a.gold)?;
    let text = match &a.input {
        Some(pred_path) => {
            let pred = read_corpus(pred_path)?;
            let table = partitioned_scores(&gold, &pred, &counts, scorer.as_ref())?;
            match a.format {
                Format::Text => table.to_string(),
                Format::Json => table.to_jsonl(),
            }
        }
        None => {
            let tags = partition(&gold, &counts);
            let rows: Vec<TagLine> = gold
                .structures()
                .iter()
                .map(|st| {
                    let p = st.predicate();
                    TagLine {
                        sentence_id: st.sentence_ref(),
                        predicate: p.range,
                        lemma: &p.lemma,
                        sense: p.sense_label.as_deref(),
                        partition: tags[&(st.sentence_ref().to_string(), p.range)].as_str(),
                    }
                })
                .collect();
            match a.format {
                Format::Text => lines(rows.iter().map(|r| {
                    format!(
                        "{}\t{}\t{}\t{}\t{}",
                        r.sentence_id,
                        r.predicate,
                        r.lemma,
                        r.sense.unwrap_or("_"),
                        r.partition
                    )
                })),
                Format::Json => jsonl(&rows),
            }
        }
    };
    emit(a.output.as_deref(), &text)
}

fn stats(a: &StatsArgs) -> Result<()> {
    let corpus = read_corpus(&a.input)?;
    let inv = a.inventory.as_deref().map(read_inventory).transpose()?;
    let report = corpus_stats(&corpus, inv.as_ref());
    let text = match a.format {
        Format::Text => report.to_string(),
        Format::Json => format!("{}\n", serde_json::to_string(&report).expect("stats serialize")),
    };
    emit(a.output.as_deref(), &text)
}

fn downsample_cmd(a: &DownsampleArgs) -> Result<()> {
    let corpus = read_corpus(&a.input)?;
    emit(a.output.as_deref(), &write_canonical(&downsample(&corpus, a.fraction, a.seed)?))
}

fn pipeline(a: &PipelineArgs) -> Result<()> {
    let gold = read_corpus(&a.input)?;
    let inv = Arc::new(read_inventory(&a.inventory)?);
    let counts = a.train.as_deref().map(read_corpus).transpose()?.map(|t| sense_counts(&t));
    let params = BackendParams {
        endpoint: a.backend.endpoint.clone(),
        inventory: Some(inv.clone()),
        counts,
    };
    let scorer = registry::scorer(&a.scorer)?;
    let generator = registry::generator(&a.generator, &params)?;
    let embedder = registry::embedder(&a.backend.embedder, &params)?;

    // line breaks inside generated text would break the one-per-line files
    let generated: Vec<Option<DescriptionSequence>> = generator
        .generate(&gold, a.prefix.prefix())?
        .into_iter()
        .map(|s| DescriptionSequence::new(s.surface().replace(['\n', '\r'], " ")).ok())
        .collect();
    let mut records = decode_against(&gold, &generated)?;
    let decoded = jsonl(&records);
    cast_records(&mut records, &inv, embedder.as_ref())?;
    let (pred, _) = assemble_corpus(&gold, &records)?;
    let report = render_report(&scorer.score(&gold, &pred)?, scorer.name(), a.format);

    if let Some(dir) = &a.output {
        create_dir(dir)?;
        let inputs = gold
            .structures()
            .iter()
            .map(|st| encode_input(gold.sentence_of(st), st.predicate()))
            .collect::<Result<Vec<_>>>()?;
        write_file(&dir.join("input.txt"), &lines(inputs))?;
        let targets = generated
            .iter()
            .map(|s| s.as_ref().map_or(String::new(), |s| s.surface().to_string()));
        write_file(&dir.join("target.txt"), &lines(targets))?;
        write_file(&dir.join("parsed.jsonl"), &decoded)?;
        write_file(&dir.join("issues.jsonl"), &issue_log(records.iter().map(|r| r.issues.as_slice())))?;
        write_file(&dir.join("pred.jsonl"), &write_canonical(&pred))?;
        let name = match a.format {
            Format::Text => "score.txt",
            Format::Json => "score.json",
        };
        write_file(&dir.join(name), &report)?;
    }
    emit(None, &report)
}
