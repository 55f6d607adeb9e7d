use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use simplexlab::{to_standard_form, CyclicSimplexSpec, GeneralSimplex, StandardForm};

/// Comma-separated integers, e.g. `1,-2,3,4`.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct IntList(pub Vec<i64>);

pub fn int_list(s: &str) -> std::result::Result<IntList, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(IntList)
}

/// A simplex given either as a cyclic spec or as a vertex file.
#[derive(Args, Debug, Clone, Serialize)]
pub struct SimplexInput {
    /// Determinant N of the cyclic spec.
    #[arg(long, requires = "gen", conflicts_with = "vertices")]
    pub det: Option<i64>,
    /// Generator residues a1,a2,a3,a4.
    #[arg(long, value_parser = int_list, allow_hyphen_values = true, requires = "det")]
    pub gen: Option<IntList>,
    /// File with five lines of four integer coordinates.
    #[arg(long)]
    pub vertices: Option<PathBuf>,
}

pub enum Parsed {
    Spec(CyclicSimplexSpec),
    Vertices(GeneralSimplex),
}

impl SimplexInput {
    pub fn parse(&self) -> Result<Parsed> {
        match (self.det, &self.gen, &self.vertices) {
            (Some(n), Some(IntList(g)), None) => {
                let g: [i64; 4] = g
                    .as_slice()
                    .try_into()
                    .map_err(|_| anyhow::anyhow!("--gen needs 4 integers, got {}", g.len()))?;
                Ok(Parsed::Spec(CyclicSimplexSpec::new(n, g)?))
            }
            (None, None, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(Parsed::Vertices(GeneralSimplex::parse(&text)?))
            }
            _ => bail!("give either --det N --gen a1,a2,a3,a4 or --vertices FILE"),
        }
    }

    pub fn standard_form(&self) -> Result<StandardForm> {
        Ok(match self.parse()? {
            Parsed::Spec(s) => StandardForm::Cyclic(s),
            Parsed::Vertices(v) => to_standard_form(&v, 0)?,
        })
    }
}
