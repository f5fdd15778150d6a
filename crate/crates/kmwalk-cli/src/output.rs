//! Output plumbing: stdout-or-file sink, CSV lines, JSON scalar encoding.

use kmwalk::Scalar;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

pub struct Sink {
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: &Option<PathBuf>) -> io::Result<Sink> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Sink { inner })
    }

    pub fn line(&mut self, text: &str) -> io::Result<()> {
        writeln!(self.inner, "{text}")
    }

    pub fn json(&mut self, value: &serde_json::Value) -> io::Result<()> {
        writeln!(self.inner, "{}", serde_json::to_string_pretty(value)?)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Scalars as JSON: exact rationals keep their exact decimal-free string
/// form, floats are plain numbers.
pub fn scalar_json<S: Scalar>(s: &S) -> serde_json::Value {
    if S::EXACT {
        serde_json::Value::String(s.to_string())
    } else {
        serde_json::json!(s.to_f64())
    }
}

/// CSV cell for a scalar: `3/4` on the rational backend, shortest
/// round-trip decimal on the float backend.
pub fn scalar_cell<S: Scalar>(s: &S) -> String {
    s.to_string()
}
