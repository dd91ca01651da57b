//! JSON framework description read by the `framework` command.

use std::path::Path;

use auxetic_core::geom::SymMatrix;
use auxetic_core::quad::{
    lattice_config_from_quad, quad_framework_spec, trace_deformation, unit_cell_area, LinkLengths,
};
use auxetic_core::two_orbit::{validate_spec, FrameworkSpec, LatticeConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squared_lengths: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_config: Option<InitialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<QuadBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub q: Vec<f64>,
    /// Upper triangle of ω, row by row.
    pub omega: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadBlock {
    pub lengths: [f64; 4],
}

/// A validated spec and the configuration to start from, if one is known.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub spec: FrameworkSpec,
    pub config: Option<LatticeConfig>,
    pub lengths: Option<LinkLengths>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::Input(format!("spec file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// SHA-256 of the canonical re-serialization, so formatting of the
    /// input file does not matter.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("spec serializes");
        format!("{:x}", Sha256::digest(canonical.as_bytes()))
    }

    pub fn resolve(&self) -> Result<Resolved, Failure> {
        let lattice = self.offsets.is_some() || self.squared_lengths.is_some();
        match (lattice, &self.quad) {
            (true, Some(_)) => {
                Err(Failure::Input("give either offsets/squared_lengths or a quad block, not both".into()))
            }
            (false, None) => Err(Failure::Input("spec needs offsets and squared_lengths, or a quad block".into())),
            (false, Some(block)) => self.resolve_quad(block),
            (true, None) => self.resolve_lattice(),
        }
    }

    fn resolve_lattice(&self) -> Result<Resolved, Failure> {
        let (Some(offsets), Some(s)) = (&self.offsets, &self.squared_lengths) else {
            return Err(Failure::Input("offsets and squared_lengths must be given together".into()));
        };
        let dim = self.dimension.ok_or_else(|| Failure::Input("missing dimension".into()))?;
        let spec = validate_spec(dim, offsets.clone(), s.clone())?;
        let config = self.initial_config.as_ref().map(|c| to_config(c, dim)).transpose()?;
        Ok(Resolved { spec, config, lengths: None })
    }

    fn resolve_quad(&self, block: &QuadBlock) -> Result<Resolved, Failure> {
        if self.dimension.is_some_and(|d| d != 2) {
            return Err(Failure::Input("a quad block implies dimension 2".into()));
        }
        let lengths = LinkLengths::new(block.lengths)?;
        let spec = quad_framework_spec(&lengths);
        let config = match &self.initial_config {
            Some(c) => to_config(c, 2)?,
            None => well_conditioned_placement(&lengths)?,
        };
        Ok(Resolved { spec, config: Some(config), lengths: Some(lengths) })
    }
}

fn to_config(c: &InitialConfig, dim: usize) -> Result<LatticeConfig, Failure> {
    let omega = SymMatrix::from_upper(dim, c.omega.clone())?;
    Ok(LatticeConfig::new(c.q.clone(), omega)?)
}

/// The sample of a coarse trace whose diagonals are closest to orthogonal.
fn well_conditioned_placement(l: &LinkLengths) -> Result<LatticeConfig, Failure> {
    let path = trace_deformation(l, 1, 64)?;
    let best = path
        .quads
        .iter()
        .filter_map(|q| {
            let (ac, bd) = (q.ac(), q.bd());
            let r = unit_cell_area(q).ok()? / (ac[0].hypot(ac[1]) * bd[0].hypot(bd[1]));
            Some((r, q))
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Failure::Numerical("no placement with independent diagonals".into()))?;
    Ok(lattice_config_from_quad(best.1)?)
}

/// True when the offsets are those of the quadrilateral encoding.
pub fn is_quad_encoding(spec: &FrameworkSpec) -> bool {
    if spec.dim() != 2 || spec.edge_count() != 4 {
        return false;
    }
    let reference = quad_framework_spec(&LinkLengths::new([1.0; 4]).expect("unit rhombus"));
    let mut a = spec.offsets().to_vec();
    let mut b = reference.offsets().to_vec();
    a.sort();
    b.sort();
    a == b
}

pub fn read_spec(path: &Path) -> Result<(SpecFile, Resolved), Failure> {
    let file = SpecFile::load(path)?;
    let resolved = file.resolve()?;
    Ok((file, resolved))
}
