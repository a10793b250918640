//! Stratified sampling without replacement and the KDD attack-name grouping
//! used for per-category quotas.

use super::{Dataset, RawDataset};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Maps a KDD attack tag (with or without trailing dot) to its category
/// group. `normal` maps to NORMAL; unknown tags map to nothing.
pub fn kdd_attack_group(tag: &str) -> Option<&'static str> {
    let t = tag.trim_end_matches('.');
    let group = match t {
        "normal" => "NORMAL",
        "back" | "land" | "neptune" | "pod" | "smurf" | "teardrop" | "apache2" | "udpstorm"
        | "processtable" | "mailbomb" | "worm" => "DOS",
        "satan" | "ipsweep" | "nmap" | "portsweep" | "mscan" | "saint" => "PROB",
        "guess_passwd" | "ftp_write" | "imap" | "phf" | "multihop" | "warezmaster"
        | "warezclient" | "spy" | "xlock" | "xsnoop" | "snmpguess" | "snmpgetattack"
        | "httptunnel" | "sendmail" | "named" => "R2L",
        "buffer_overflow" | "loadmodule" | "rootkit" | "perl" | "sqlattack" | "xterm" | "ps" => {
            "U2R"
        }
        _ => return None,
    };
    Some(group)
}

/// Replaces every row's category with its KDD group (NORMAL / PROB / DOS /
/// U2R / R2L). Tags outside the known mapping keep their own name so that
/// quota errors surface instead of silently mixing categories.
pub fn map_kdd_groups(dataset: &RawDataset) -> RawDataset {
    let mut out = dataset.clone();
    for row in &mut out.rows {
        if let Some(group) = kdd_attack_group(&row.category) {
            row.category = group.to_string();
        }
    }
    out
}

/// Core index-level sampler: for each requested category, draws `count`
/// member indices uniformly without replacement. Returns (selected,
/// remainder), both ascending, together spanning `0..categories.len()`.
fn stratified_indices(
    categories: &[&str],
    counts: &BTreeMap<String, usize>,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selected = vec![false; categories.len()];
    for (cat, &want) in counts {
        let pool: Vec<usize> = categories
            .iter()
            .enumerate()
            .filter(|(_, c)| *c == cat)
            .map(|(i, _)| i)
            .collect();
        if want > pool.len() {
            return Err(Error::Quota {
                category: cat.clone(),
                available: pool.len(),
                requested: want,
            });
        }
        for k in rand::seq::index::sample(&mut rng, pool.len(), want) {
            selected[pool[k]] = true;
        }
    }
    let mut sel = Vec::new();
    let mut rem = Vec::new();
    for (i, &s) in selected.iter().enumerate() {
        if s {
            sel.push(i);
        } else {
            rem.push(i);
        }
    }
    Ok((sel, rem))
}

/// Stratified sampling over raw rows by their category tag.
pub fn stratified_sample_raw(
    dataset: &RawDataset,
    counts: &BTreeMap<String, usize>,
    seed: u64,
) -> Result<(RawDataset, RawDataset)> {
    let cats: Vec<&str> = dataset.rows.iter().map(|r| r.category.as_str()).collect();
    let (sel, rem) = stratified_indices(&cats, counts, seed)?;
    let pick = |idx: &[usize]| RawDataset {
        rows: idx.iter().map(|&i| dataset.rows[i].clone()).collect(),
        schema: dataset.schema.clone(),
        provenance: dataset.provenance.clone(),
    };
    Ok((pick(&sel), pick(&rem)))
}

/// Stratified sampling over preprocessed samples by their category tag.
pub fn stratified_sample(
    dataset: &Dataset,
    counts: &BTreeMap<String, usize>,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let cats: Vec<&str> = dataset
        .samples
        .iter()
        .map(|s| s.category.as_str())
        .collect();
    let (sel, rem) = stratified_indices(&cats, counts, seed)?;
    let pick = |idx: &[usize]| Dataset {
        samples: idx.iter().map(|&i| dataset.samples[i].clone()).collect(),
        schema: dataset.schema.clone(),
        provenance: dataset.provenance.clone(),
    };
    Ok((pick(&sel), pick(&rem)))
}

/// The Table-1 style quota map used by the experiment configs.
pub fn counts_from_pairs(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs
        .iter()
        .map(|(k, v)| ((*k).to_string(), *v))
        .collect()
}
