use serde::Serialize;

use crate::permgroup::PermGroup;

use super::report::MonodromyReport;

/// One candidate factorization `X -> Z -> P^n` read off a block system: the
/// first map has degree `block_size`, the second `num_blocks`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tower {
    pub block_size: usize,
    pub num_blocks: usize,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposabilityCertificate {
    pub degree: usize,
    pub primitive: bool,
    pub towers: Vec<Tower>,
    pub summary: String,
}

pub fn decomposability_report(report: &MonodromyReport) -> DecomposabilityCertificate {
    decomposability_of_group(&report.group)
}

/// Block systems of a transitive group as candidate factorizations.
pub fn decomposability_of_group(g: &PermGroup) -> DecomposabilityCertificate {
    let towers: Vec<Tower> = g
        .pair_block_systems()
        .into_iter()
        .map(|blocks| Tower {
            block_size: blocks[0].len(),
            num_blocks: blocks.len(),
            blocks,
        })
        .collect();
    let primitive = g.is_transitive() && towers.is_empty();
    let summary = if !g.is_transitive() {
        "intransitive group: no block analysis".to_string()
    } else if primitive {
        "primitive: the projection does not factor".to_string()
    } else {
        let parts: Vec<String> = towers
            .iter()
            .map(|t| format!("{}:1 then {}:1", t.block_size, t.num_blocks))
            .collect();
        format!("imprimitive: candidate factorizations {}", parts.join("; "))
    };
    DecomposabilityCertificate {
        degree: g.degree(),
        primitive,
        towers,
        summary,
    }
}
