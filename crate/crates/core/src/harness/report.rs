use std::fs;
use std::path::{Path, PathBuf};

use csv::Writer;

use super::{cell_q, cell_scalar, to_json_string, ExperimentReport};
use crate::error::Result;
use crate::num::format_sig;

fn col_profiles(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut w = Writer::from_path(path)?;
    w.write_record(["index", "n", "ordering", "c", "s", "s_prime", "k_prime", "delta", "r", "col", "argmax", "bound", "within_bound"])?;
    for inst in &report.instances {
        let Some(s) = &inst.summary else { continue };
        let k = s.constants.as_ref();
        let consts = k.map_or_else(
            || vec![String::new(); 5],
            |k| vec![k.c.to_string(), cell_q(&k.s), cell_q(&k.s_prime), cell_q(&k.k_prime), cell_q(&k.delta)],
        );
        for e in &s.profile.entries {
            let bound = k.map(|k| k.bound(e.r));
            let mut row = vec![inst.index.to_string(), s.n.to_string(), s.ordering.clone()];
            row.extend(consts.iter().cloned());
            row.extend([
                e.r.to_string(),
                e.value.to_string(),
                e.argmax.to_string(),
                bound.as_ref().map_or(String::new(), cell_q),
                bound.as_ref().map_or(String::new(), |_| (!s.bound_violations.contains(&e.r)).to_string()),
            ]);
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn scaling(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut w = Writer::from_path(path)?;
    w.write_record(["family", "d", "method", "n", "separator_size", "balanced", "calibrated_bound", "exponent_fit", "exponent_target", "beta_fit"])?;
    if let Some(f) = &report.scaling {
        for p in &f.points {
            w.write_record([
                f.family.clone(),
                f.d.to_string(),
                f.method.clone(),
                p.n.to_string(),
                p.size.to_string(),
                p.balanced.to_string(),
                format_sig(p.bound),
                format_sig(f.exponent_fit),
                format_sig(f.exponent_target),
                format_sig(f.beta_fit),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn tameness(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut w = Writer::from_path(path)?;
    w.write_record(["index", "n", "c", "s", "thinness", "s_star", "status", "certified", "failures", "undecided"])?;
    for inst in &report.instances {
        let Some(t) = inst.summary.as_ref().and_then(|s| s.tameness.as_ref()) else { continue };
        let status = serde_json::to_value(t.status)?;
        w.write_record([
            inst.index.to_string(),
            inst.summary.as_ref().map_or(0, |s| s.n).to_string(),
            t.c.to_string(),
            cell_scalar(&t.s),
            t.thinness.to_string(),
            t.s_star.as_ref().map_or(String::new(), cell_scalar),
            status.as_str().unwrap_or_default().to_string(),
            t.certified.to_string(),
            t.failures.len().to_string(),
            t.undecided.len().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn lemmas(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut w = Writer::from_path(path)?;
    w.write_record(["suite", "d", "checked", "premise_held", "passed", "violations", "errors"])?;
    for c in report.lemmas.iter().flat_map(|l| &l.counts) {
        w.write_record([
            c.suite.clone(),
            c.d.map_or(String::new(), |d| d.to_string()),
            c.checked.to_string(),
            c.premise_held.to_string(),
            c.passed().to_string(),
            c.violations.to_string(),
            c.errors.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `report.json` and the CSV tables under `dir`; returns the paths.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let json = dir.join("report.json");
    fs::write(&json, to_json_string(report)?)?;
    let mut out = vec![json];
    type Table = fn(&ExperimentReport, &Path) -> Result<()>;
    let tables: [(&str, Table); 4] = [
        ("col_profiles.csv", col_profiles),
        ("separator_scaling.csv", scaling),
        ("tameness.csv", tameness),
        ("lemmas.csv", lemmas),
    ];
    for (name, f) in tables {
        let p = dir.join(name);
        f(report, &p)?;
        out.push(p);
    }
    Ok(out)
}
