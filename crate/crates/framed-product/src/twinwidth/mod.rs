//! Trigraph contractions, the layer-by-layer contraction planners for planar
//! and h-framed graphs, and an independent replay auditor.

mod audit;
mod planner;
mod trigraph;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;

pub use audit::{audit_sequence, AuditReport};
pub use planner::{framed_sequence, planar_sequence, PlannerReport};
pub use trigraph::Trigraph;

/// One contraction. `layer` is set when both vertices lie in that BFS layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionStep {
    pub x1: VertexId,
    pub x2: VertexId,
    pub x0: VertexId,
    pub layer: Option<usize>,
    pub stage: String,
}

/// A contraction sequence with the planner's per-step maximum red degree.
/// `layer_of` and `span_bound` let the auditor check that the sequence only
/// contracts within layers and that edges stay between nearby layers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionSequence {
    pub n: usize,
    pub steps: Vec<ContractionStep>,
    pub per_step_max_red: Vec<usize>,
    pub width: usize,
    pub layer_of: Option<Vec<usize>>,
    pub span_bound: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwinMode {
    Planar,
    Framed { h: usize },
}

/// Bound on the red degree during the final pass that merges the surviving
/// layers into the root: `(4+2)+4+4−1` for planar inputs and `4(h+1)+h−1`
/// for h-framed ones. `survivors[j]` counts interior survivors in layer `j`.
pub fn finishing_width_bound(survivors: &[usize], mode: TwinMode) -> Result<usize> {
    if let Some((j, &c)) = survivors.iter().enumerate().find(|(_, &c)| c > 4) {
        return Err(Error::Precondition(format!("layer {j} keeps {c} survivors")));
    }
    Ok(match mode {
        TwinMode::Planar => (4 + 2) + 4 + 4 - 1,
        TwinMode::Framed { h } => 4 * (h + 1) + h - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finishing_bounds() {
        assert_eq!(finishing_width_bound(&[1, 4, 2], TwinMode::Planar).unwrap(), 13);
        assert_eq!(finishing_width_bound(&[], TwinMode::Framed { h: 4 }).unwrap(), 23);
        assert_eq!(finishing_width_bound(&[3], TwinMode::Framed { h: 6 }).unwrap(), 33);
        assert!(finishing_width_bound(&[5], TwinMode::Planar).is_err());
    }
}
