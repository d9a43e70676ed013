use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use super::scale::ScoreScale;
use crate::error::{Error, Result};
use crate::kendall::PartialRanking;
use crate::model::{Dataset, Judge};

/// A dataset together with the labels it was read with.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub objects: Vec<String>,
    pub judges: Vec<String>,
    pub dataset: Dataset,
}

impl LabeledDataset {
    pub fn label(&self, object: usize) -> &str {
        &self.objects[object]
    }

    pub fn labels(&self, objects: &[usize]) -> Vec<String> {
        objects.iter().map(|&o| self.objects[o].clone()).collect()
    }
}

fn reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source)
}

fn csv_error(what: &str, e: csv::Error) -> Error {
    Error::Input(format!("{what}: {e}"))
}

struct ScoreTable {
    objects: Vec<String>,
    rows: Vec<(String, Vec<Option<u32>>)>,
}

fn read_scores<R: Read>(source: R, scale: &ScoreScale) -> Result<ScoreTable> {
    let mut rdr = reader(source);
    let header = rdr.headers().map_err(|e| csv_error("scores header", e))?.clone();
    if header.len() < 2 {
        return Err(Error::Input("scores header must be `judge,<object labels>`".into()));
    }
    let objects: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let mut seen = HashMap::new();
    for (k, label) in objects.iter().enumerate() {
        if label.is_empty() || seen.insert(label.as_str(), k).is_some() {
            return Err(Error::Input(format!("scores header: empty or repeated object label {label:?}")));
        }
    }
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_error("scores", e))?;
        let row = line + 2;
        if record.len() != header.len() {
            return Err(Error::Input(format!(
                "scores row {row}: expected {} fields, found {}",
                header.len(),
                record.len()
            )));
        }
        let id = record[0].to_owned();
        let scores = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(col, cell)| {
                if cell.is_empty() {
                    return Ok(None);
                }
                let raw: f64 = cell
                    .parse()
                    .map_err(|_| Error::Input(format!("scores row {row}, column {}: {cell:?} is not a number", objects[col])))?;
                scale
                    .to_canonical(raw)
                    .map(Some)
                    .map_err(|e| Error::Input(format!("scores row {row}, column {}: {e}", objects[col])))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((id, scores));
    }
    Ok(ScoreTable { objects, rows })
}

fn read_rankings<R: Read>(source: R) -> Result<Vec<(String, Vec<String>)>> {
    let mut rdr = reader(source);
    rdr.headers().map_err(|e| csv_error("rankings header", e))?;
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_error("rankings", e))?;
        let row = line + 2;
        let id = record.get(0).unwrap_or_default().to_owned();
        let cells: Vec<&str> = record.iter().skip(1).collect();
        let used = cells.iter().rposition(|c| !c.is_empty()).map_or(0, |k| k + 1);
        if let Some(k) = cells[..used].iter().position(|c| c.is_empty()) {
            return Err(Error::Input(format!("rankings row {row}: gap at rank {}", k + 1)));
        }
        rows.push((id, cells[..used].iter().map(|c| (*c).to_owned()).collect()));
    }
    Ok(rows)
}

/// Reads scores and/or rankings from CSV sources.
///
/// Object labels come from the scores header, or, without scores, from
/// their first appearance in the rankings. Judges are matched by id.
pub fn ingest_from<S: Read, R: Read>(scores: Option<S>, rankings: Option<R>, scale: &ScoreScale) -> Result<LabeledDataset> {
    if scores.is_none() && rankings.is_none() {
        return Err(Error::Input("at least one of scores or rankings is required".into()));
    }
    let table = scores.map(|s| read_scores(s, scale)).transpose()?;
    let ranking_rows = rankings.map(read_rankings).transpose()?.unwrap_or_default();

    let fixed_labels = table.is_some();
    let mut objects = table.as_ref().map(|t| t.objects.clone()).unwrap_or_default();
    let mut index: HashMap<String, usize> = objects.iter().enumerate().map(|(k, l)| (l.clone(), k)).collect();
    let mut parsed_rankings = Vec::new();
    for (row, (id, labels)) in ranking_rows.iter().enumerate() {
        let mut items = Vec::with_capacity(labels.len());
        for label in labels {
            let o = match index.get(label) {
                Some(&o) => o,
                None if !fixed_labels => {
                    objects.push(label.clone());
                    index.insert(label.clone(), objects.len() - 1);
                    objects.len() - 1
                }
                None => {
                    return Err(Error::Input(format!("rankings row {}: unknown object {label:?}", row + 2)));
                }
            };
            if items.contains(&o) {
                return Err(Error::Input(format!("rankings row {}: object {label:?} ranked twice", row + 2)));
            }
            items.push(o);
        }
        parsed_rankings.push((id.clone(), items));
    }
    let j = objects.len();
    if j == 0 {
        return Err(Error::Input("no objects found".into()));
    }

    let mut judge_ids: Vec<String> = Vec::new();
    let mut judge_index: HashMap<String, usize> = HashMap::new();
    let mut scores: Vec<Vec<Option<u32>>> = Vec::new();
    let mut rankings: Vec<Option<Vec<usize>>> = Vec::new();
    let mut slot = |id: &str, ids: &mut Vec<String>, scores: &mut Vec<Vec<Option<u32>>>, rankings: &mut Vec<Option<Vec<usize>>>| {
        *judge_index.entry(id.to_owned()).or_insert_with(|| {
            ids.push(id.to_owned());
            scores.push(vec![None; j]);
            rankings.push(None);
            ids.len() - 1
        })
    };
    if let Some(t) = &table {
        let mut seen = std::collections::HashSet::new();
        for (id, row) in &t.rows {
            if !seen.insert(id.clone()) {
                return Err(Error::Input(format!("scores: judge {id:?} appears twice")));
            }
            let k = slot(id, &mut judge_ids, &mut scores, &mut rankings);
            scores[k] = row.clone();
        }
    }
    for (id, items) in parsed_rankings {
        let k = slot(&id, &mut judge_ids, &mut scores, &mut rankings);
        if rankings[k].is_some() {
            return Err(Error::Input(format!("rankings: judge {id:?} appears twice")));
        }
        rankings[k] = Some(items);
    }

    let judges = scores
        .into_iter()
        .zip(rankings)
        .map(|(s, r)| {
            let s = if s.len() < j {
                let mut padded = s;
                padded.resize(j, None);
                padded
            } else {
                s
            };
            let ranking = r
                .filter(|items| !items.is_empty())
                .map(|items| PartialRanking::new(items, j))
                .transpose()?;
            Ok(Judge::new(s, ranking))
        })
        .collect::<Result<Vec<_>>>()?;
    let dataset = Dataset::new(j, scale.max_score(), judges).map_err(|e| Error::Input(e.to_string()))?;
    Ok(LabeledDataset {
        objects,
        judges: judge_ids,
        dataset,
    })
}

/// Reads the CSV files at the given paths.
pub fn ingest(scores: Option<&Path>, rankings: Option<&Path>, scale: &ScoreScale) -> Result<LabeledDataset> {
    let open = |p: &Path| std::fs::File::open(p).map_err(|e| Error::Input(format!("{}: {e}", p.display())));
    let s = scores.map(open).transpose()?;
    let r = rankings.map(open).transpose()?;
    ingest_from(s, r, scale)
}

fn write_error(e: impl std::fmt::Display) -> Error {
    Error::Input(format!("write failed: {e}"))
}

/// Writes the scores table; every judge gets a row.
pub fn write_scores<W: Write>(out: W, data: &LabeledDataset, scale: &ScoreScale) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("judge").chain(data.objects.iter().map(String::as_str)))
        .map_err(write_error)?;
    for (id, judge) in data.judges.iter().zip(data.dataset.judges()) {
        let mut record = vec![id.clone()];
        record.extend(judge.scores().iter().map(|s| s.map(|k| scale.format_raw(k)).unwrap_or_default()));
        w.write_record(&record).map_err(write_error)?;
    }
    w.flush().map_err(write_error)
}

/// Writes the rankings table, padded to the longest ranking.
pub fn write_rankings<W: Write>(out: W, data: &LabeledDataset) -> Result<()> {
    let width = data
        .dataset
        .judges()
        .iter()
        .filter_map(|j| j.ranking().map(PartialRanking::len))
        .max()
        .unwrap_or(1);
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = std::iter::once("judge".to_owned())
        .chain((1..=width).map(|k| format!("rank{k}")))
        .collect();
    w.write_record(&header).map_err(write_error)?;
    for (id, judge) in data.judges.iter().zip(data.dataset.judges()) {
        let mut record = vec![id.clone()];
        let items = judge.ranking().map(PartialRanking::items).unwrap_or_default();
        record.extend(items.iter().map(|&o| data.objects[o].clone()));
        record.resize(width + 1, String::new());
        w.write_record(&record).map_err(write_error)?;
    }
    w.flush().map_err(write_error)
}
