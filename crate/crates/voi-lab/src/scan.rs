//! CSV sweeps: barycentric grid scans and exact ray scans.
//!
//! CSV goes to stdout (or `--out`); a human summary with crossing locations
//! goes to stderr so piping the data stays clean.

use std::fs::File;
use std::io::{BufWriter, Write};

use voi_core::localization::Regime;
use voi_core::scanner::{grid_scan, ray_scan, write_grid_csv, write_ray_csv, RayScan};
use voi_core::{parse_belief, Rational};

use crate::args::ScanMode;
use crate::{get_channel, load_instance, CliError};

fn parse_direction(text: &str, k: usize) -> Result<Vec<Rational>, CliError> {
    let tokens: Vec<&str> = text.split(',').collect();
    if tokens.len() != k {
        return Err(CliError::Invalid(format!(
            "direction has {} entries, expected {k}",
            tokens.len()
        )));
    }
    tokens
        .iter()
        .map(|tok| {
            Rational::parse(tok).map_err(|e| CliError::Invalid(format!("bad direction entry: {e}")))
        })
        .collect()
}

fn emit<F>(out: Option<&std::path::Path>, stdout: &mut impl Write, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()?;
        }
        None => write(stdout)?,
    }
    Ok(())
}

fn join_ts(ts: &[Rational]) -> String {
    if ts.is_empty() {
        "none".to_string()
    } else {
        ts.iter()
            .map(Rational::to_fraction_string)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn ray_summary(scan: &RayScan) {
    eprintln!(
        "ray scan: {} segments over t in [0, {}]",
        scan.segments.len(),
        scan.t_max
    );
    eprintln!(
        "decision boundaries: t = {}",
        join_ts(&scan.decision_boundary_ts)
    );
    eprintln!(
        "interaction crossings: t = {}",
        join_ts(&scan.interaction_crossings)
    );
}

pub fn run(mode: ScanMode, stdout: &mut impl Write) -> Result<(), CliError> {
    match mode {
        ScanMode::Grid {
            instance,
            n,
            channel_i,
            channel_j,
            out,
        } => {
            let inst = load_instance(instance.as_deref())?;
            let ch_i = get_channel(&inst, &channel_i)?;
            let ch_j = get_channel(&inst, &channel_j)?;
            let scan = grid_scan(inst.problem(), ch_i, ch_j, n)?;
            let (mut complement, mut substitute, mut neutral) = (0usize, 0usize, 0usize);
            for row in &scan.rows {
                match row.regime {
                    Regime::Complement => complement += 1,
                    Regime::Substitute => substitute += 1,
                    Regime::Neutral => neutral += 1,
                }
            }
            emit(out.as_deref(), stdout, |w| write_grid_csv(&scan, w))?;
            eprintln!(
                "grid scan: N={n}, {} rows, regimes: complement={complement} substitute={substitute} neutral={neutral}",
                scan.rows.len()
            );
            Ok(())
        }
        ScanMode::Ray {
            instance,
            origin,
            dir,
            t_max,
            channel_i,
            channel_j,
            out,
        } => {
            let inst = load_instance(instance.as_deref())?;
            let k = inst.problem().num_states();
            let ch_i = get_channel(&inst, &channel_i)?;
            let ch_j = get_channel(&inst, &channel_j)?;
            let origin = parse_belief(&origin, k)?;
            let direction = parse_direction(&dir, k)?;
            let t_max = Rational::parse(&t_max)
                .map_err(|e| CliError::Invalid(format!("bad t-max: {e}")))?;
            let scan = ray_scan(inst.problem(), ch_i, ch_j, &origin, &direction, &t_max)?;
            emit(out.as_deref(), stdout, |w| write_ray_csv(&scan, w))?;
            ray_summary(&scan);
            Ok(())
        }
    }
}
