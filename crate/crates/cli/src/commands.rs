use std::path::Path;

use anticonc_core::analysis::compute_rank;
use anticonc_core::distribution::{exact_distribution, monte_carlo_histogram, Estimate};
use anticonc_core::slice::{extract_coefficients, permutation_from_json, random_permutation, unnormalized};
use anticonc_core::structure::{build_auxiliary_h, recognize_gabm};
use anticonc_core::{rng, Error, Hypergraph};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::output::Report;
use crate::{read_file, CliError};

pub fn load_graph(path: &Path) -> Result<Hypergraph, CliError> {
    Ok(Hypergraph::parse_text(&read_file(path)?)?)
}

fn f64_string(x: f64) -> String {
    format!("{x}")
}

pub fn distribution(path: &Path, k: usize, ell: Option<usize>, mc: Option<u64>, seed: u64) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let config = json!({"graph": path.display().to_string(), "k": k, "ell": ell, "mc": mc});
    let shape = json!({"n": g.n(), "r": g.r(), "k": k});
    match exact_distribution(&g, k) {
        Ok(table) => {
            let ells: Vec<usize> = match ell {
                Some(l) => vec![l],
                None => table.counts.keys().copied().collect(),
            };
            let rows = ells
                .iter()
                .map(|&l| {
                    let p = table.probability(l);
                    vec![l.to_string(), table.count(l).to_string(), p.to_string(), f64_string(p.to_f64().unwrap_or(f64::NAN))]
                })
                .collect();
            let mut result = json!({"method": "exact"});
            merge(&mut result, shape);
            merge(&mut result, table.to_json());
            if let Some(l) = ell {
                let p = table.probability(l);
                result["ell"] = json!(l);
                result["probability"] = json!(p.to_string());
                result["probability_f64"] = json!(p.to_f64());
            }
            Ok(Report {
                command: "distribution".into(),
                seed,
                config,
                result,
                columns: vec!["ell", "count", "probability", "value"],
                rows,
            })
        }
        Err(Error::Budget { .. }) if mc.is_some() => {
            let trials = mc.unwrap_or_default();
            let hist = monte_carlo_histogram(&g, k, trials, seed)?;
            let ells: Vec<usize> = match ell {
                Some(l) => vec![l],
                None => hist.keys().copied().collect(),
            };
            let estimates: Vec<(usize, Estimate)> =
                ells.iter().map(|&l| (l, Estimate::from_hits(hist.get(&l).copied().unwrap_or(0), trials))).collect();
            let rows = estimates
                .iter()
                .map(|(l, e)| vec![l.to_string(), e.hits.to_string(), f64_string(e.estimate), f64_string(e.stderr)])
                .collect();
            let mut result = json!({"method": "monte_carlo", "trials": trials});
            merge(&mut result, shape);
            result["estimates"] = estimates
                .iter()
                .map(|(l, e)| json!({"ell": l, "hits": e.hits, "estimate": e.estimate, "stderr": e.stderr}))
                .collect();
            Ok(Report {
                command: "distribution".into(),
                seed,
                config,
                result,
                columns: vec!["ell", "hits", "estimate", "stderr"],
                rows,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
}

pub fn coeffs(path: &Path, sigma_path: Option<&Path>, seed: u64) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let sigma = match sigma_path {
        Some(p) => {
            let v: Value = serde_json::from_str(&read_file(p)?)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            permutation_from_json(&v)?
        }
        None => random_permutation(&mut rng::stream(seed, 0), g.n()),
    };
    let config = json!({
        "graph": path.display().to_string(),
        "sigma": sigma_path.map(|p| p.display().to_string()),
    });
    let d = g.r();
    let coeffs = extract_coefficients(&g, &sigma)?;
    let integer = unnormalized(&coeffs, d);
    let terms = coeffs.terms_sorted();
    let rows: Vec<Vec<String>> = terms
        .iter()
        .map(|(idx, c)| {
            let mask = idx.iter().fold(0u128, |m, &i| m | 1 << (i - 1));
            let labels: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            vec![idx.len().to_string(), labels.join(" "), c.to_string(), integer.coefficient(mask).to_string()]
        })
        .collect();
    let rank = compute_rank(&coeffs, d);
    let auxiliary = match d {
        2 | 3 => build_auxiliary_h(&g, &sigma)?.to_json(),
        _ => Value::Null,
    };
    let result = json!({
        "n": g.n(),
        "r": d,
        "sigma": sigma.iter().map(|s| s + 1).collect::<Vec<_>>(),
        "coefficients": terms.iter().map(|(idx, c)| json!({"indices": idx, "coefficient": c.to_string()})).collect::<Vec<_>>(),
        "rank": {"degree": d, "rank": rank.rank_lower_bound(), "exact": rank.exact, "matching": rank.sets()},
        "auxiliary": auxiliary,
    });
    Ok(Report {
        command: "coeffs".into(),
        seed,
        config,
        result,
        columns: vec!["degree", "indices", "coefficient", "scaled"],
        rows,
    })
}

pub fn classify(path: &Path, seed: u64) -> Result<Report, CliError> {
    let g = load_graph(path)?;
    let report = recognize_gabm(&g)?;
    let result = report.to_json();
    let witness = match &result["witness"] {
        Value::Null => result["reason"].as_str().unwrap_or_default().to_string(),
        w => w.to_string(),
    };
    Ok(Report {
        command: "classify".into(),
        seed,
        config: json!({"graph": path.display().to_string()}),
        rows: vec![vec![report.n.to_string(), report.verdict_name().to_string(), witness]],
        result,
        columns: vec!["n", "verdict", "witness"],
    })
}
