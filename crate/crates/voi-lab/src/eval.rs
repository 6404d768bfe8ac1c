//! Full interaction report + localization verdict at one belief.

use std::io::Write;
use std::path::Path;

use serde_json::json;
use voi_core::localization::classify_report;
use voi_core::value::value;
use voi_core::{parse_belief, Rational};

use crate::{get_channel, load_instance, CliError};

fn signed(x: &Rational) -> String {
    if x.is_positive() {
        format!("+{x}")
    } else {
        x.to_string()
    }
}

pub fn run(
    instance_path: &Path,
    belief_text: &str,
    name_i: &str,
    name_j: &str,
    json_output: bool,
    stdout: &mut impl Write,
) -> Result<(), CliError> {
    let inst = load_instance(Some(instance_path))?;
    let prob = inst.problem();
    let ch_i = get_channel(&inst, name_i)?;
    let ch_j = get_channel(&inst, name_j)?;
    let belief = parse_belief(belief_text, prob.num_states())?;

    let prior = value(prob, &belief)?;
    let (report, verdict) = classify_report(prob, ch_i, ch_j, &belief)?;

    if json_output {
        let doc = json!({
            "instance": instance_path.display().to_string(),
            "channel_i": name_i,
            "channel_j": name_j,
            "value": prior.value,
            "argmax_actions": prior.argmax_actions,
            "report": report,
            "verdict": verdict,
        });
        writeln!(stdout, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(());
    }

    let action_name = |a: usize| prob.action_name(a);
    let argmax_names: Vec<&str> = prior
        .argmax_actions
        .iter()
        .map(|&a| action_name(a))
        .collect();

    writeln!(stdout, "instance : {}", instance_path.display())?;
    writeln!(stdout, "channels : i = {name_i}, j = {name_j}")?;
    writeln!(stdout, "belief   : {}", report.belief)?;
    writeln!(stdout, "V(b)     : {}", prior.value)?;
    writeln!(stdout, "argmax   : {}", argmax_names.join(", "))?;
    writeln!(stdout)?;
    writeln!(stdout, "VoI(i)           : {}", report.voi_i)?;
    writeln!(stdout, "VoI(j)           : {}", report.voi_j)?;
    writeln!(stdout, "VoI(j|i)         : {}", report.voi_j_after_i)?;
    writeln!(stdout, "dVoI             : {}", signed(&report.delta_voi))?;
    writeln!(stdout, "complement force : {}", report.complement_force)?;
    writeln!(stdout, "substitute force : {}", report.substitute_force)?;
    writeln!(
        stdout,
        "prior on kink    : {}",
        if report.prior_on_kink { "yes" } else { "no" }
    )?;
    writeln!(stdout)?;
    writeln!(
        stdout,
        "outcomes of {name_i} (regret is for prior action {}):",
        action_name(report.prior_action)
    )?;
    for entry in &report.per_outcome {
        writeln!(
            stdout,
            "  o={}  p={}  posterior={}  V={}  VoI(j)={}  regret={}",
            entry.outcome,
            entry.marginal,
            entry.posterior,
            entry.value,
            entry.voi_j,
            entry.regret_prior_action,
        )?;
    }
    writeln!(stdout)?;
    writeln!(stdout, "verdict:")?;
    writeln!(stdout, "  regime            : {}", verdict.regime)?;
    writeln!(
        stdout,
        "  stays interior    : {}",
        if verdict.stays_interior { "yes" } else { "no" }
    )?;
    let crossings: Vec<String> = verdict
        .crossing_outcomes
        .iter()
        .map(|o| format!("o={o}"))
        .collect();
    writeln!(
        stdout,
        "  crossing outcomes : {}",
        if crossings.is_empty() {
            "none".to_string()
        } else {
            crossings.join(", ")
        }
    )?;
    writeln!(
        stdout,
        "  converse witness  : {}",
        match verdict.theorem3_witness {
            Some(o) => format!("o={o}"),
            None => "-".to_string(),
        }
    )?;
    Ok(())
}
