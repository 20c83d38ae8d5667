//! Bundled instances and codes, plus the permutation-code and decoding
//! identity case studies.

mod dougherty;
mod permutation;

pub use dougherty::{dougherty_identity_check, DoughertyReport, IdentityResult, IDENTITY_NAMES};
pub use permutation::{
    identity_reassignment, n2_code_check, n2_code_check_with, n2_permutations, n3_injectivity,
    n3_rotation, CopyReport, N2Report, N3Report, PermutationFamily,
};

use std::collections::BTreeMap;

use crate::code::NetworkCode;
use crate::network::{Edge, NetworkInstance, Source};

fn edge(id: &str, tail: &str, head: &str, size: usize) -> Edge {
    Edge {
        id: id.into(),
        tail: tail.into(),
        head: head.into(),
        alphabet_size: size,
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn butterfly_shape(
    source: usize,
    side: usize,
    bottleneck: usize,
    extra: Option<usize>,
    down: usize,
) -> NetworkInstance {
    let mut edges = vec![
        edge("s1-a", "s1", "a", side),
        edge("s2-b", "s2", "b", side),
        edge("a-t1", "a", "t1", side),
        edge("a-c", "a", "c", side),
        edge("b-c", "b", "c", side),
        edge("b-t2", "b", "t2", side),
        edge("bottleneck", "c", "d", bottleneck),
        edge("d-t1", "d", "t1", down),
        edge("d-t2", "d", "t2", down),
    ];
    if let Some(n) = extra {
        edges.push(edge("high", "c", "d", n));
    }
    NetworkInstance {
        nodes: names(&["s1", "s2", "a", "b", "c", "d", "t1", "t2"]),
        edges,
        sources: vec![
            Source {
                node: "s1".into(),
                alphabet_size: source,
            },
            Source {
                node: "s2".into(),
                alphabet_size: source,
            },
        ],
        terminals: names(&["t1", "t2"]),
        demands: vec![vec![1, 1], vec![1, 1]],
    }
}

fn alphabets(inst: &NetworkInstance) -> BTreeMap<String, usize> {
    inst.edges
        .iter()
        .map(|e| (e.id.clone(), e.alphabet_size))
        .collect()
}

/// The butterfly network with binary sources and the XOR code on the
/// bottleneck `c -> d`. Both terminals demand both sources.
pub fn butterfly() -> (NetworkInstance, NetworkCode) {
    let inst = butterfly_shape(2, 2, 2, None, 2);
    let id: Vec<usize> = vec![0, 1];
    let mut encoders = BTreeMap::new();
    for e in ["s1-a", "s2-b", "a-t1", "a-c", "b-c", "b-t2", "d-t1", "d-t2"] {
        encoders.insert(e.to_string(), id.clone());
    }
    // inputs (a-c, b-c)
    encoders.insert("bottleneck".into(), vec![0, 1, 1, 0]);
    let mut decoders = BTreeMap::new();
    // t1 reads (a-t1, d-t1) = (x1, x1 ^ x2)
    decoders.insert(
        "t1".into(),
        (0..4).map(|k| vec![k >> 1, (k >> 1) ^ (k & 1)]).collect(),
    );
    // t2 reads (b-t2, d-t2) = (x2, x1 ^ x2)
    decoders.insert(
        "t2".into(),
        (0..4).map(|k| vec![(k >> 1) ^ (k & 1), k >> 1]).collect(),
    );
    let code = NetworkCode {
        blocklength: 1,
        source_alphabets: vec![2, 2],
        edge_alphabets: alphabets(&inst),
        encoders,
        decoders,
    };
    (inst, code)
}

/// A butterfly with 4-symbol sources. The binary bottleneck carries the XOR
/// of the low bits; a parallel 4-symbol edge `high` carries both high bits,
/// and `d` forwards the pair as one 8-symbol message.
pub fn butterfly4() -> (NetworkInstance, NetworkCode) {
    let inst = butterfly_shape(4, 4, 2, Some(4), 8);
    let id: Vec<usize> = (0..4).collect();
    let mut encoders = BTreeMap::new();
    for e in ["s1-a", "s2-b", "a-t1", "a-c", "b-c", "b-t2"] {
        encoders.insert(e.to_string(), id.clone());
    }
    let pairs: Vec<(usize, usize)> = (0..16).map(|k| (k / 4, k % 4)).collect();
    encoders.insert(
        "bottleneck".into(),
        pairs.iter().map(|&(x1, x2)| (x1 & 1) ^ (x2 & 1)).collect(),
    );
    encoders.insert(
        "high".into(),
        pairs
            .iter()
            .map(|&(x1, x2)| (x1 >> 1) + 2 * (x2 >> 1))
            .collect(),
    );
    // d reads (bottleneck, high) and forwards bottleneck * 4 + high
    let fwd: Vec<usize> = (0..8).collect();
    encoders.insert("d-t1".into(), fwd.clone());
    encoders.insert("d-t2".into(), fwd);

    let unpack = |own: usize, msg: usize| {
        let (parity, high) = (msg / 4, msg % 4);
        let (h1, h2) = (high % 2, high / 2);
        (own, parity, h1, h2)
    };
    let mut decoders = BTreeMap::new();
    decoders.insert(
        "t1".into(),
        (0..32)
            .map(|k| {
                let (x1, parity, _, h2) = unpack(k / 8, k % 8);
                vec![x1, 2 * h2 + (parity ^ (x1 & 1))]
            })
            .collect(),
    );
    decoders.insert(
        "t2".into(),
        (0..32)
            .map(|k| {
                let (x2, parity, h1, _) = unpack(k / 8, k % 8);
                vec![2 * h1 + (parity ^ (x2 & 1)), x2]
            })
            .collect(),
    );
    let code = NetworkCode {
        blocklength: 1,
        source_alphabets: vec![4, 4],
        edge_alphabets: alphabets(&inst),
        encoders,
        decoders,
    };
    (inst, code)
}

/// A path `s -> v1 -> ... -> t` of `hops` edges, each forwarding its input.
pub fn relay_chain(size: usize, hops: usize) -> (NetworkInstance, NetworkCode) {
    let mut nodes = vec!["s".to_string()];
    nodes.extend((1..hops).map(|i| format!("v{i}")));
    nodes.push("t".into());
    let edges: Vec<Edge> = (0..hops)
        .map(|i| Edge {
            id: format!("e{i:03}"),
            tail: nodes[i].clone(),
            head: nodes[i + 1].clone(),
            alphabet_size: size,
        })
        .collect();
    let inst = NetworkInstance {
        nodes,
        sources: vec![Source {
            node: "s".into(),
            alphabet_size: size,
        }],
        terminals: vec!["t".into()],
        demands: vec![vec![1]],
        edges,
    };
    let id: Vec<usize> = (0..size).collect();
    let code = NetworkCode {
        blocklength: 1,
        source_alphabets: vec![size],
        edge_alphabets: alphabets(&inst),
        encoders: inst
            .edges
            .iter()
            .map(|e| (e.id.clone(), id.clone()))
            .collect(),
        decoders: BTreeMap::from([("t".to_string(), id.iter().map(|&v| vec![v]).collect())]),
    };
    (inst, code)
}

/// Id of the monitored edge in [`star`].
pub const STAR_EDGE: &str = "e*";

/// Sources `s1..sk` each with a direct edge to terminal `t_i` demanding it,
/// and an edge into a common node `u`. Edge `e*` from `u` to a sink `w`
/// carries `phi` of the source tuple (mixed-radix index over the sources).
/// The code is zero-error whatever `phi` is, so it isolates the function on
/// `e*` for removal checks.
pub fn star(
    source_sizes: &[usize],
    edge_size: usize,
    phi: Vec<usize>,
) -> (NetworkInstance, NetworkCode) {
    let k = source_sizes.len();
    let mut nodes: Vec<String> = (1..=k).map(|i| format!("s{i}")).collect();
    nodes.extend((1..=k).map(|i| format!("t{i}")));
    nodes.push("u".into());
    nodes.push("w".into());
    let mut edges = Vec::new();
    let mut encoders = BTreeMap::new();
    let mut decoders = BTreeMap::new();
    for (i, &n) in source_sizes.iter().enumerate() {
        let s = format!("s{}", i + 1);
        let t = format!("t{}", i + 1);
        let direct = format!("{s}-{t}");
        let up = format!("u{:03}", i + 1);
        edges.push(edge(&direct, &s, &t, n));
        edges.push(edge(&up, &s, "u", n));
        let id: Vec<usize> = (0..n).collect();
        encoders.insert(direct, id.clone());
        encoders.insert(up, id.clone());
        decoders.insert(t, id.iter().map(|&v| vec![v]).collect());
    }
    edges.push(edge(STAR_EDGE, "u", "w", edge_size));
    encoders.insert(STAR_EDGE.to_string(), phi);
    let inst = NetworkInstance {
        nodes,
        edges,
        sources: (1..=k)
            .map(|i| Source {
                node: format!("s{i}"),
                alphabet_size: source_sizes[i - 1],
            })
            .collect(),
        terminals: (1..=k).map(|i| format!("t{i}")).collect(),
        demands: (0..k)
            .map(|i| (0..k).map(|j| u8::from(i == j)).collect())
            .collect(),
    };
    let code = NetworkCode {
        blocklength: 1,
        source_alphabets: source_sizes.to_vec(),
        edge_alphabets: alphabets(&inst),
        encoders,
        decoders,
    };
    (inst, code)
}
