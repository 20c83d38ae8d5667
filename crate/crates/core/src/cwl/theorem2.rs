use super::CwlWitness;
use crate::code::{GlobalCodeTable, NetworkCode};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::network::NetworkInstance;
use crate::radix;
use crate::removal::{
    check_condition_a, check_condition_b, restrict_code, AuxiliaryPartition, Removal,
};

/// The partition induced by a CWL witness: two symbols of source `i` are
/// equivalent when they give the same edge value with every other source at
/// the identity. A tuple's label is the mixed-radix index of its class tuple.
#[derive(Clone, Debug)]
pub struct Theorem2Partition {
    pub partition: AuxiliaryPartition,
    /// `classes[i][c]` lists the symbols of source `i` in class `c`,
    /// classes ordered by smallest symbol.
    pub classes: Vec<Vec<Vec<usize>>>,
    /// `class_of[i][symbol]`.
    pub class_of: Vec<Vec<usize>>,
}

pub fn build_theorem2_partition(w: &CwlWitness) -> Theorem2Partition {
    let sizes = w.source_sizes();
    let mut classes = Vec::new();
    let mut class_of = Vec::new();
    for (i, src) in w.sources.iter().enumerate() {
        let n = src.group.order();
        let mut key_of_symbol = vec![0; n];
        for a in src.group.elements() {
            key_of_symbol[src.labels[a]] = w.slot_image(i, a);
        }
        let mut seen: Vec<usize> = Vec::new();
        let mut of = vec![0; n];
        let mut cls: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let key = key_of_symbol[x];
            let c = match seen.iter().position(|&k| k == key) {
                Some(c) => c,
                None => {
                    seen.push(key);
                    cls.push(Vec::new());
                    seen.len() - 1
                }
            };
            of[x] = c;
            cls[c].push(x);
        }
        classes.push(cls);
        class_of.push(of);
    }
    let class_counts: Vec<usize> = classes.iter().map(Vec::len).collect();
    let total = radix::size(&sizes).expect("domain fits");
    let mut labels = Vec::with_capacity(total);
    let mut x = vec![0; sizes.len()];
    for _ in 0..total {
        let c: Vec<usize> = x.iter().enumerate().map(|(i, &v)| class_of[i][v]).collect();
        labels.push(radix::encode(&c, &class_counts));
        radix::increment(&mut x, &sizes);
    }
    Theorem2Partition {
        partition: AuxiliaryPartition::new(&sizes, labels).expect("labels cover the domain"),
        classes,
        class_of,
    }
}

/// All classes of each source have equal size.
pub fn lemma1_verify(p: &Theorem2Partition) -> bool {
    p.classes
        .iter()
        .all(|cls| cls.iter().all(|c| c.len() == cls[0].len()))
}

/// Removes `edge_id` using the witness's partition, choosing the fiber with
/// the most good tuples (smallest label on ties).
pub fn theorem2_remove(
    inst: &NetworkInstance,
    code: &NetworkCode,
    table: &GlobalCodeTable,
    edge_id: &str,
    w: &CwlWitness,
    eps: Fraction,
    cap: u128,
) -> Result<Removal> {
    let edge = inst.edge_index(edge_id)?;
    if w.source_sizes() != table.source_sizes() {
        return Err(Error::precondition(
            "witness and code have different source alphabets",
        ));
    }
    if w.symbol_table() != table.column(edge) {
        return Err(Error::precondition(format!(
            "witness function differs from the code's function on edge {edge_id:?}"
        )));
    }
    let t2 = build_theorem2_partition(w);
    let part = &t2.partition;
    if check_condition_a(table, edge, part).is_none() || !check_condition_b(part) {
        return Err(Error::internal("witness partition fails condition A or B"));
    }
    let y = part
        .used_labels()
        .map(|y| (part.good_bad(table, y).0, y))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .map(|(_, y)| y)
        .expect("nonempty domain");
    restrict_code(inst, code, table, edge_id, part, y, eps, cap)
}
