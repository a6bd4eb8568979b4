use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pd_rings::{ArtinTestRing, RingElem, RingHandle};
use crate::series::{parse_series, Presentation, SeriesSpace};
use crate::witt::{is_prime, RingParams};

/// A presentation as read from disk.
///
/// ```json
/// { "p": 3, "vars": ["x", "y"], "generators": ["x*y"] }
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProblemFile {
    pub p: u64,
    /// Minimum working precision; commands raise it to what their rings need.
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<u32>,
    pub vars: Vec<String>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<i64>>,
    /// Base-map images for `t1check`, as `"T: 9*g1"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<String>>,
}

fn default_precision() -> u32 {
    1
}

fn input(message: impl Into<String>) -> Error {
    Error::Incompatible(message.into())
}

impl ProblemFile {
    pub fn from_json(src: &str) -> Result<ProblemFile> {
        let file: ProblemFile = serde_json::from_str(src).map_err(|e| {
            input(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(input(format!("p must be prime (got {})", self.p)));
        }
        if self.precision == 0 {
            return Err(input("precision must be at least 1"));
        }
        for (i, v) in self.vars.iter().enumerate() {
            let ident = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ident {
                return Err(input(format!("'{v}' is not a variable name")));
            }
            if self.vars[..i].contains(v) {
                return Err(input(format!("variable '{v}' is listed twice")));
            }
        }
        if let Some(pt) = &self.point {
            if pt.len() != self.vars.len() {
                return Err(input(format!("point has {} coordinates for {} variables", pt.len(), self.vars.len())));
            }
        }
        // parse once so that syntax errors surface before any work
        self.presentation(self.precision, self.degree_cap.unwrap_or(1)).map(|_| ())
    }

    pub fn presentation(&self, precision: u32, degree_cap: u32) -> Result<Arc<Presentation>> {
        let space = SeriesSpace::new(RingParams::new(self.p)?, precision, degree_cap, self.vars.clone())?;
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(j, src)| {
                parse_series(src, &space).map_err(|e| match e {
                    Error::Parse { column, message } => {
                        input(format!("generator {j} (\"{src}\"), column {column}: {message}"))
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Presentation::new(space, gens)?))
    }

    pub fn point(&self) -> Option<Vec<i128>> {
        self.point.as_ref().map(|pt| pt.iter().map(|&a| a as i128).collect())
    }
}

/// Read `var: element` lines into one image per variable.
pub fn parse_images(vars: &[String], lines: &[String], ring: &Arc<ArtinTestRing>) -> Result<Vec<RingElem>> {
    let mut images: Vec<Option<RingElem>> = vec![None; vars.len()];
    for line in lines {
        let (name, expr) = line
            .split_once(':')
            .ok_or_else(|| input(format!("image \"{line}\" should look like \"T: 9*g1\"")))?;
        let name = name.trim();
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| input(format!("image for unknown variable '{name}'")))?;
        if images[i].is_some() {
            return Err(input(format!("two images for '{name}'")));
        }
        let offset = line.len() - expr.len();
        let elem = ring.parse_element(expr).map_err(|e| match e {
            Error::Parse { column, message } => {
                input(format!("image \"{line}\", column {}: {message}", column + offset))
            }
            other => other,
        })?;
        images[i] = Some(elem);
    }
    images
        .into_iter()
        .zip(vars)
        .map(|(img, v)| img.ok_or_else(|| input(format!("no image given for '{v}'"))))
        .collect()
}

/// Problems shipped with the binary, by example name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("node", include_str!("../../problems/node.json")),
    ("free", include_str!("../../problems/free.json")),
    ("p-torsion", include_str!("../../problems/p-torsion.json")),
    ("cusp", include_str!("../../problems/cusp.json")),
    ("eliminable", include_str!("../../problems/eliminable.json")),
];

pub fn bundled(name: &str) -> Option<ProblemFile> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| ProblemFile::from_json(src).expect("bundled problems are valid"))
}
