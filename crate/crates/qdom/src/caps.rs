//! Resource caps for the enumeration-heavy operations.

use crate::error::{Error, Result};

/// Limits that keep exhaustive searches tractable. Every cap is overridable
/// from the CLI (`--cap-*`) or the `QDOM_CAPS` environment variable.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Largest base category an instance file or gallery may supply.
    pub max_objects: usize,
    /// Largest quantale an instance file or gallery may supply.
    pub max_quantale: usize,
    /// Candidate columns (or functors) a single enumeration may produce.
    pub max_columns: usize,
    /// Down-sets the totally-below computation may visit.
    pub max_downsets: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 6,
            max_quantale: 6,
            max_columns: 20_000,
            max_downsets: 1 << 16,
        }
    }
}

impl Caps {
    /// Parses a `key=value` list such as `objects=6,columns=50000`.
    /// Unspecified keys keep their current value.
    pub fn apply_spec(&mut self, spec: &str) -> Result<()> {
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Shape(format!("cap entry `{part}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Shape(format!("cap value in `{part}` is not a number")))?;
            match key.trim() {
                "objects" => self.max_objects = value,
                "quantale" => self.max_quantale = value,
                "columns" => self.max_columns = value,
                "downsets" => self.max_downsets = value,
                other => return Err(Error::Shape(format!("unknown cap `{other}`"))),
            }
        }
        Ok(())
    }

    pub fn check_objects(&self, n: usize, what: &str) -> Result<()> {
        if n > self.max_objects {
            return Err(Error::Resource {
                what: format!("{what} objects"),
                attempted: n,
                cap: self.max_objects,
            });
        }
        Ok(())
    }

    pub fn check_quantale(&self, n: usize) -> Result<()> {
        if n > self.max_quantale {
            return Err(Error::Resource {
                what: "quantale elements".to_string(),
                attempted: n,
                cap: self.max_quantale,
            });
        }
        Ok(())
    }
}

/// Budget shared by one enumeration call. Counts completed candidates
/// against `max_columns` and visited search nodes against a generous
/// multiple, so pathological searches fail loudly instead of hanging.
pub(crate) struct SearchBudget {
    pub candidates: usize,
    pub nodes: usize,
    cap_candidates: usize,
    cap_nodes: usize,
    what: String,
}

impl SearchBudget {
    pub fn new(caps: &Caps, what: &str) -> Self {
        SearchBudget {
            candidates: 0,
            nodes: 0,
            cap_candidates: caps.max_columns,
            cap_nodes: caps.max_columns.saturating_mul(50).max(1_000_000),
            what: what.to_string(),
        }
    }

    pub fn visit_node(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap_nodes {
            return Err(Error::Resource {
                what: format!("{} search nodes", self.what),
                attempted: self.nodes,
                cap: self.cap_nodes,
            });
        }
        Ok(())
    }

    pub fn emit_candidate(&mut self) -> Result<()> {
        self.candidates += 1;
        if self.candidates > self.cap_candidates {
            return Err(Error::Resource {
                what: format!("{} candidates", self.what),
                attempted: self.candidates,
                cap: self.cap_candidates,
            });
        }
        Ok(())
    }
}
