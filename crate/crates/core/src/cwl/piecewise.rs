use serde::{Deserialize, Serialize};

use super::{build_theorem2_partition, check_cwl, CwlWitness, LabeledGroup};
use crate::code::{GlobalCodeTable, NetworkCode};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::network::NetworkInstance;
use crate::radix;
use crate::removal::{restrict_with_divisor, Removal};

/// One declared piece: its sub-domain as a list of source tuples, a full CWL
/// function that must agree with `φ` there, and the group structures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSpec {
    pub domain: Vec<Vec<usize>>,
    pub function: Vec<usize>,
    pub sources: Vec<LabeledGroup>,
    pub edge: LabeledGroup,
}

#[derive(Clone, Debug)]
pub struct Piece {
    /// `S_i^(k)` for each source, sorted.
    pub sets: Vec<Vec<usize>>,
    /// Tuple indices of `S^(k)`, ascending.
    pub tuples: Vec<usize>,
    pub witness: CwlWitness,
}

#[derive(Clone, Debug)]
pub struct PiecewiseCwl {
    pub phi: Vec<usize>,
    pub source_sizes: Vec<usize>,
    pub pieces: Vec<Piece>,
}

fn listing(tuples: &[usize], sizes: &[usize]) -> String {
    let shown: Vec<String> = tuples
        .iter()
        .take(8)
        .map(|&k| format!("{:?}", radix::decode(k, sizes)))
        .collect();
    let more = tuples.len().saturating_sub(8);
    if more > 0 {
        format!("{} and {more} more", shown.join(", "))
    } else {
        shown.join(", ")
    }
}

/// Validates a piecewise-CWL description of `phi`.
///
/// Overlapping or non-covering pieces, and pieces over differing groups,
/// are errors. A piece whose domain is not a product set, whose function is
/// not CWL, or which disagrees with `phi` on its domain yields `None`.
pub fn check_piecewise(
    phi: &[usize],
    source_sizes: &[usize],
    specs: &[PieceSpec],
) -> Result<Option<PiecewiseCwl>> {
    let total = radix::size(source_sizes).ok_or_else(|| Error::domain("domain overflows"))?;
    if phi.len() != total {
        return Err(Error::domain(format!(
            "function has {} entries for {total} tuples",
            phi.len()
        )));
    }
    if specs.is_empty() {
        return Err(Error::InvalidArity("no pieces".into()));
    }
    let mut owner = vec![usize::MAX; total];
    let mut overlaps = Vec::new();
    let mut piece_tuples = Vec::with_capacity(specs.len());
    for (p, spec) in specs.iter().enumerate() {
        let mut ks = Vec::with_capacity(spec.domain.len());
        for x in &spec.domain {
            let k = radix::checked_encode(x, source_sizes)?;
            if owner[k] != usize::MAX {
                overlaps.push(k);
            }
            owner[k] = p;
            ks.push(k);
        }
        ks.sort_unstable();
        ks.dedup();
        piece_tuples.push(ks);
    }
    overlaps.sort_unstable();
    overlaps.dedup();
    if !overlaps.is_empty() {
        return Err(Error::Invalid(format!(
            "pieces overlap on {}",
            listing(&overlaps, source_sizes)
        )));
    }
    let uncovered: Vec<usize> = (0..total).filter(|&k| owner[k] == usize::MAX).collect();
    if !uncovered.is_empty() {
        return Err(Error::Invalid(format!(
            "pieces do not cover {}",
            listing(&uncovered, source_sizes)
        )));
    }
    if specs
        .iter()
        .any(|s| s.sources != specs[0].sources || s.edge.group != specs[0].edge.group)
    {
        return Err(Error::Invalid("pieces must share the same groups".into()));
    }

    let mut pieces = Vec::with_capacity(specs.len());
    for (spec, tuples) in specs.iter().zip(piece_tuples) {
        let mut marks: Vec<Vec<bool>> = source_sizes.iter().map(|&n| vec![false; n]).collect();
        for &k in &tuples {
            for (i, v) in radix::decode(k, source_sizes).into_iter().enumerate() {
                marks[i][v] = true;
            }
        }
        let sets: Vec<Vec<usize>> = marks
            .iter()
            .map(|m| (0..m.len()).filter(|&v| m[v]).collect())
            .collect();
        let product: usize = sets.iter().map(Vec::len).product();
        if product != tuples.len() {
            return Ok(None);
        }
        if tuples
            .iter()
            .any(|&k| spec.function.get(k) != Some(&phi[k]))
        {
            return Ok(None);
        }
        let Some(witness) = check_cwl(&spec.function, source_sizes, &spec.sources, &spec.edge)?
        else {
            return Ok(None);
        };
        pieces.push(Piece {
            sets,
            tuples,
            witness,
        });
    }
    Ok(Some(PiecewiseCwl {
        phi: phi.to_vec(),
        source_sizes: source_sizes.to_vec(),
        pieces,
    }))
}

/// Removal for a zero-error code whose edge function is piecewise CWL with
/// `K` product pieces. Picks the first piece covering at least a `1/K`
/// share of the tuples and, inside it, the largest per-source class of the
/// piece's partition (smallest class on ties). The promised cardinalities
/// are `⌈|X_i| / (|X_{e*}|·K)⌉`.
pub fn theorem3_remove(
    inst: &NetworkInstance,
    code: &NetworkCode,
    table: &GlobalCodeTable,
    edge_id: &str,
    pw: &PiecewiseCwl,
    cap: u128,
) -> Result<Removal> {
    if table.bad_count() != 0 {
        return Err(Error::precondition(
            "piecewise removal is only certified for zero-error codes",
        ));
    }
    let edge = inst.edge_index(edge_id)?;
    if pw.source_sizes != table.source_sizes() || pw.phi != table.column(edge) {
        return Err(Error::precondition(format!(
            "piecewise description differs from the code's function on edge {edge_id:?}"
        )));
    }
    let k = pw.pieces.len();
    let total = table.tuple_count();
    let piece = pw
        .pieces
        .iter()
        .find(|p| p.tuples.len() * k >= total)
        .ok_or_else(|| Error::internal("no piece reaches the average size"))?;
    let capacity = inst.edges[edge].alphabet_size;
    if piece.witness.edge.group.order() > capacity {
        return Err(Error::precondition(format!(
            "piece edge group of order {} exceeds the capacity {capacity} of edge {edge_id:?}",
            piece.witness.edge.group.order()
        )));
    }
    let t2 = build_theorem2_partition(&piece.witness);
    let sets: Vec<Vec<usize>> = piece
        .sets
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let classes = t2.classes[i].len();
            let mut count = vec![0usize; classes];
            for &x in s {
                count[t2.class_of[i][x]] += 1;
            }
            let best = (0..classes)
                .max_by(|&a, &b| count[a].cmp(&count[b]).then(b.cmp(&a)))
                .expect("at least one class");
            s.iter()
                .copied()
                .filter(|&x| t2.class_of[i][x] == best)
                .collect()
        })
        .collect();
    let divisor = capacity * k;
    restrict_with_divisor(
        inst,
        code,
        table,
        edge_id,
        &sets,
        Fraction::ZERO,
        divisor,
        cap,
    )
}
