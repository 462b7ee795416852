//! CSV import and export of sampled signals.
//!
//! Layout: a `time` column followed by one column per channel, SI units
//! (seconds and radians). Floats are written with nine significant digits so
//! repeated exports are byte-identical.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::SignalError;
use crate::signal::{InputSignal, SignalMetadata};

/// Writes a signal as CSV.
pub fn write_signal_csv(signal: &InputSignal, path: &Path) -> Result<(), SignalError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "time,{}", signal.labels().join(","))?;
    for (k, t) in signal.times().iter().enumerate() {
        write!(out, "{t:.8e}")?;
        for channel in signal.samples() {
            write!(out, ",{:.8e}", channel[k])?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a signal from CSV written in the layout above.
///
/// The time column must be uniformly spaced starting at zero; the result
/// carries custom metadata.
pub fn read_signal_csv(path: &Path) -> Result<InputSignal, SignalError> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines.next().ok_or(SignalError::Parse {
        line: 1,
        message: "empty file".to_string(),
    })?;
    let header = header?;
    let mut columns = header.split(',').map(str::trim);
    if columns.next() != Some("time") {
        return Err(SignalError::Parse {
            line: 1,
            message: "first column must be `time`".to_string(),
        });
    }
    let labels: Vec<String> = columns.map(str::to_string).collect();
    if labels.is_empty() {
        return Err(SignalError::Parse {
            line: 1,
            message: "no channel columns".to_string(),
        });
    }

    let mut times = Vec::new();
    let mut samples: Vec<Vec<f64>> = vec![Vec::new(); labels.len()];
    for (index, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != labels.len() + 1 {
            return Err(SignalError::Parse {
                line: index + 1,
                message: format!(
                    "expected {} fields, found {}",
                    labels.len() + 1,
                    fields.len()
                ),
            });
        }
        let mut values = fields.iter().map(|f| {
            f.parse::<f64>().map_err(|e| SignalError::Parse {
                line: index + 1,
                message: format!("bad float {f:?}: {e}"),
            })
        });
        times.push(values.next().expect("time field")?);
        for channel in samples.iter_mut() {
            channel.push(values.next().expect("channel field")?);
        }
    }

    if times.len() < 2 {
        return Err(SignalError::Parse {
            line: times.len() + 1,
            message: "need at least two samples".to_string(),
        });
    }
    let h = times[1] - times[0];
    for (k, t) in times.iter().enumerate() {
        if (t - k as f64 * h).abs() > 1e-9 {
            return Err(SignalError::Parse {
                line: k + 2,
                message: format!("non-uniform time grid at t={t}"),
            });
        }
    }

    InputSignal::new(h, labels, samples, SignalMetadata::custom())
}
