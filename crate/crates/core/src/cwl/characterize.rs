use std::collections::BTreeMap;

use super::CwlWitness;
use crate::code::{
    build_global_table, joint_entropy, Variable, DEFAULT_ENUMERATION_CAP, ENTROPY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::group::{kernel, Subgroup};
use crate::group_codes::GroupCharacterization;
use crate::library::{star, STAR_EDGE};

/// Subgroup names are `s1, s2, ...` for the sources and [`EDGE_NAME`] for the edge.
pub const SOURCE_PREFIX: &str = "s";
pub const EDGE_NAME: &str = "e";

/// The group characterization of a CWL witness: `G' = ∏ G_i`, `G_i'` the
/// elements with identity in slot `i`, and `G_e'` the kernel. Every joint
/// entropy `H(X_alpha) = log2(|G'| / |∩_{f∈alpha} G_f'|)` is checked against
/// enumeration over the source tuples.
pub fn cwl_to_group_characterization(w: &CwlWitness) -> Result<GroupCharacterization> {
    let g = &w.domain;
    let k = w.sources.len();
    let mut subgroups = BTreeMap::new();
    for i in 0..k {
        let id = w.sources[i].group.identity();
        let members: Vec<usize> = g.elements().filter(|&x| g.components(x)[i] == id).collect();
        subgroups.insert(
            format!("{SOURCE_PREFIX}{}", i + 1),
            Subgroup::new(g, &members)?,
        );
    }
    subgroups.insert(EDGE_NAME.to_string(), kernel(&w.map, g, &w.edge.group)?);
    let gc = GroupCharacterization::new(g.clone(), subgroups)?;

    let edge_size = w.edge.labels.iter().max().map_or(1, |m| m + 1);
    let (inst, code) = star(&w.source_sizes(), edge_size, w.symbol_table());
    let table = build_global_table(&inst, &code, DEFAULT_ENUMERATION_CAP)?;
    let e = inst.edge_index(STAR_EDGE)?;
    let names: Vec<String> = (1..=k)
        .map(|i| format!("{SOURCE_PREFIX}{i}"))
        .chain([EDGE_NAME.to_string()])
        .collect();
    for mask in 0u32..1 << (k + 1) {
        let chosen: Vec<usize> = (0..=k).filter(|&b| mask >> b & 1 == 1).collect();
        let vars: Vec<Variable> = chosen
            .iter()
            .map(|&b| {
                if b < k {
                    Variable::Source(b)
                } else {
                    Variable::Edge(e)
                }
            })
            .collect();
        let alpha: Vec<&str> = chosen.iter().map(|&b| names[b].as_str()).collect();
        let measured = joint_entropy(&table, &vars);
        let predicted = gc.induced_entropy(&alpha)?;
        if (measured - predicted).abs() > ENTROPY_TOLERANCE {
            return Err(Error::internal(format!(
                "entropy of {alpha:?} is {measured} bits but the subgroups give {predicted}"
            )));
        }
    }
    Ok(gc)
}
