//! Renderers for study results: a per-level CSV, a one-object JSON
//! summary, and a two-column plot file.

use super::study::ConvergenceStudy;
use crate::scalar::Real;

/// Per-level CSV with columns `k,N,h,I_tilde,epsilon,pairwise_p`, plus the
/// four signed rotation errors when rotation averaging was on.
///
/// Pairwise rates land on the finer row of each consecutive kept pair;
/// the first kept row and every dropped row leave the cell empty.
pub fn study_csv<R: Real>(study: &ConvergenceStudy<R>) -> String {
    let rotations = study.levels.iter().any(|l| l.rotation_errors.is_some());
    let mut out = String::from("k,N,h,I_tilde,epsilon,pairwise_p");
    if rotations {
        out.push_str(",eps_rot0,eps_rot1,eps_rot2,eps_rot3");
    }
    out.push('\n');

    let mut rates = study.fitted_rate_pairwise.iter();
    let mut seen_kept = false;
    for level in &study.levels {
        let pairwise = if level.dropped {
            String::new()
        } else if seen_kept {
            rates.next().map(|p| format!("{p:.6}")).unwrap_or_default()
        } else {
            seen_kept = true;
            String::new()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            level.k,
            level.n,
            level.h.to_decimal_string(),
            level.i_tilde.to_decimal_string(),
            level.epsilon.to_decimal_string(),
            pairwise
        ));
        if rotations {
            match &level.rotation_errors {
                Some(errs) => {
                    for e in errs {
                        out.push(',');
                        out.push_str(&e.to_decimal_string());
                    }
                }
                None => out.push_str(",,,,"),
            }
        }
        out.push('\n');
    }
    out
}

/// The one-object JSON summary: the study configuration next to the fitted
/// and expected global rates.
pub fn study_summary_json<R: Real>(study: &ConvergenceStudy<R>) -> String {
    let mut config = serde_json::to_value(&study.plan).expect("plan serializes");
    config
        .as_object_mut()
        .expect("plan serializes to an object")
        .insert("precision".into(), study.precision.name().into());
    let summary = serde_json::json!({
        "config": config,
        "global_p": study.fitted_rate_global,
        "expected_p": study.expected_rate(),
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    text
}

/// Two space-separated columns, h then ε, one row per level, ready for
/// log-log plotting. Dropped levels are included; they draw the precision
/// floor.
pub fn study_plot<R: Real>(study: &ConvergenceStudy<R>) -> String {
    let mut out = String::from("# h epsilon\n");
    for level in &study.levels {
        out.push_str(&level.h.to_decimal_string());
        out.push(' ');
        out.push_str(&level.epsilon.to_decimal_string());
        out.push('\n');
    }
    out
}
