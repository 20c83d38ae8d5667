//! Random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use edgerm::code::{build_global_table, NetworkCode, DEFAULT_ENUMERATION_CAP};
use edgerm::cwl::LabeledGroup;
use edgerm::group::{FiniteGroup, Subgroup};
use edgerm::group_codes::GroupCharacterization;
use edgerm::network::{Edge, NetworkInstance, Source};
use edgerm::radix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid instance with at most 3 sources, source alphabets at most
/// 8, edge alphabets at most 4 and at most 10 edges, plus a random code on it
/// whose decoders pick the most frequent demanded tuple per input.
pub fn random_instance(seed: u64) -> (NetworkInstance, NetworkCode) {
    let mut r = rng(seed);
    loop {
        if let Some(pair) = try_instance(&mut r) {
            return pair;
        }
    }
}

fn try_instance(r: &mut ChaCha8Rng) -> Option<(NetworkInstance, NetworkCode)> {
    let k = r.gen_range(1..=3);
    let mids = r.gen_range(0..=3);
    let nt = r.gen_range(1..=2);
    let mut nodes: Vec<String> = (1..=k).map(|i| format!("s{i}")).collect();
    nodes.extend((1..=mids).map(|i| format!("v{i}")));
    nodes.extend((1..=nt).map(|i| format!("t{i}")));
    let n = nodes.len();
    let is_source = |i: usize| i < k;
    let is_terminal = |i: usize| i >= k + mids;

    let edge_count = r.gen_range(1..=10);
    let mut edges = Vec::new();
    for j in 0..edge_count {
        let tail = r.gen_range(0..k + mids);
        let lo = (tail + 1).max(k);
        if lo >= n {
            continue;
        }
        let head = r.gen_range(lo..n);
        debug_assert!(!is_source(head) && !is_terminal(tail));
        edges.push(Edge {
            id: format!("e{j:02}"),
            tail: nodes[tail].clone(),
            head: nodes[head].clone(),
            alphabet_size: r.gen_range(1..=4),
        });
    }
    if edges.is_empty() {
        return None;
    }
    let sources: Vec<Source> = (0..k)
        .map(|i| Source {
            node: nodes[i].clone(),
            alphabet_size: r.gen_range(1..=8),
        })
        .collect();
    let mut demands = vec![vec![0u8; nt]; k];
    for t in 0..nt {
        let s = r.gen_range(0..k);
        demands[s][t] = 1;
        for row in demands.iter_mut() {
            if r.gen_bool(0.3) {
                row[t] = 1;
            }
        }
    }
    let inst = NetworkInstance {
        nodes,
        edges,
        sources,
        terminals: (1..=nt).map(|i| format!("t{i}")).collect(),
        demands,
    };
    if !inst.validate().is_empty() {
        return None;
    }
    let code = random_code(&inst, r)?;
    Some((inst, code))
}

/// Random encoders, then decoders chosen to maximize per-input agreement.
pub fn random_code(inst: &NetworkInstance, r: &mut ChaCha8Rng) -> Option<NetworkCode> {
    let sizes = inst.source_sizes();
    let edge_alphabets: BTreeMap<String, usize> = inst
        .edges
        .iter()
        .map(|e| (e.id.clone(), e.alphabet_size))
        .collect();
    let mut encoders = BTreeMap::new();
    for e in &inst.edges {
        let domain = match inst.source_index(&e.tail) {
            Some(s) => sizes[s],
            None => inst
                .in_edges(&e.tail)
                .iter()
                .map(|&i| inst.edges[i].alphabet_size)
                .product(),
        };
        if domain > 1 << 16 {
            return None;
        }
        let table = match r.gen_range(0..4) {
            // forward the first input where possible, otherwise random
            0 => (0..domain).map(|v| v % e.alphabet_size).collect(),
            _ => (0..domain)
                .map(|_| r.gen_range(0..e.alphabet_size))
                .collect(),
        };
        encoders.insert(e.id.clone(), table);
    }
    let mut decoders = BTreeMap::new();
    for (t, name) in inst.terminals.iter().enumerate() {
        let ins = inst.in_edges(name);
        let n: usize = ins.iter().map(|&i| inst.edges[i].alphabet_size).product();
        let dem = inst.demanded_by(t);
        decoders.insert(name.clone(), vec![vec![0; dem.len()]; n]);
    }
    let mut code = NetworkCode {
        blocklength: 1,
        source_alphabets: sizes.clone(),
        edge_alphabets,
        encoders,
        decoders,
    };
    let table = build_global_table(inst, &code, DEFAULT_ENUMERATION_CAP).ok()?;
    for (t, name) in inst.terminals.iter().enumerate() {
        let ins = inst.in_edges(name);
        let radices: Vec<usize> = ins.iter().map(|&i| inst.edges[i].alphabet_size).collect();
        let dem = inst.demanded_by(t);
        let mut votes: BTreeMap<usize, BTreeMap<Vec<usize>, usize>> = BTreeMap::new();
        for k in 0..table.tuple_count() {
            let x = table.tuple(k);
            let vals: Vec<usize> = ins.iter().map(|&i| table.value(k, i)).collect();
            let idx = radix::encode(&vals, &radices);
            let want: Vec<usize> = dem.iter().map(|&s| x[s]).collect();
            *votes.entry(idx).or_default().entry(want).or_default() += 1;
        }
        let dec = code.decoders.get_mut(name).unwrap();
        for (idx, v) in votes {
            let best = v
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .unwrap();
            dec[idx] = best.0.clone();
        }
    }
    Some(code)
}

/// Labels for a random partition of the source tuples.
///
/// Kinds: 0 singletons, 1 the fibers of `edge`, 2 a random product-class
/// partition whose cells are split into singletons wherever `edge` is not
/// constant, 3 uniformly random labels.
pub fn random_partition(
    r: &mut ChaCha8Rng,
    sizes: &[usize],
    column: &[usize],
    kind: usize,
) -> Vec<usize> {
    let total = column.len();
    match kind {
        0 => (0..total).collect(),
        1 => column.to_vec(),
        2 => {
            let classes: Vec<Vec<usize>> = sizes
                .iter()
                .map(|&n| {
                    let c = r.gen_range(1..=n);
                    let mut lab: Vec<usize> = (0..n).map(|v| v % c).collect();
                    lab.shuffle(r);
                    lab
                })
                .collect();
            let class_radices: Vec<usize> = sizes.to_vec();
            let cell_of = |k: usize| {
                let x = radix::decode(k, sizes);
                let c: Vec<usize> = x.iter().enumerate().map(|(i, &v)| classes[i][v]).collect();
                radix::encode(&c, &class_radices)
            };
            let mut cell_value: BTreeMap<usize, Option<usize>> = BTreeMap::new();
            for (k, &v) in column.iter().enumerate() {
                let e = cell_value.entry(cell_of(k)).or_insert(Some(v));
                if *e != Some(v) {
                    *e = None;
                }
            }
            let base = total;
            (0..total)
                .map(|k| {
                    let c = cell_of(k);
                    match cell_value[&c] {
                        Some(_) => base + c,
                        None => k,
                    }
                })
                .collect()
        }
        _ => {
            let m = r.gen_range(1..=total.max(1));
            (0..total).map(|_| r.gen_range(0..m)).collect()
        }
    }
}

/// A CWL function built from a random homomorphism between products of
/// cyclic groups, with shuffled source labels.
pub struct RandomWitness {
    pub phi: Vec<usize>,
    pub sizes: Vec<usize>,
    pub sources: Vec<LabeledGroup>,
    pub edge: LabeledGroup,
    pub edge_alphabet: usize,
}

/// Domain order at most `max_order`. Generator images `h_j` satisfy
/// `n_j·h_j = 0`, so the map is a homomorphism; the edge group is its image.
pub fn random_witness(r: &mut ChaCha8Rng, max_order: usize) -> RandomWitness {
    let k = r.gen_range(1..=3);
    let mut sizes = Vec::with_capacity(k);
    let mut order = 1;
    for _ in 0..k {
        let n = r.gen_range(1..=(max_order / order).min(8));
        order *= n;
        sizes.push(n);
    }
    let cod = FiniteGroup::direct_product(
        (0..r.gen_range(1..=2))
            .map(|_| FiniteGroup::cyclic(r.gen_range(1..=6)).unwrap())
            .collect(),
    )
    .unwrap();
    let imgs: Vec<usize> = sizes
        .iter()
        .map(|&n| {
            let ok: Vec<usize> = cod
                .elements()
                .filter(|&h| cod.pow(h, n) == cod.identity())
                .collect();
            *ok.choose(r).unwrap()
        })
        .collect();
    let image = Subgroup::generated_by(&cod, &imgs).unwrap();
    let (edge_group, members) = FiniteGroup::from_subgroup(&image).unwrap();
    let edge = LabeledGroup::new(edge_group, members).unwrap();
    let sources: Vec<LabeledGroup> = sizes
        .iter()
        .map(|&n| {
            let mut labels: Vec<usize> = (0..n).collect();
            labels.shuffle(r);
            LabeledGroup::new(FiniteGroup::cyclic(n).unwrap(), labels).unwrap()
        })
        .collect();
    let inv: Vec<Vec<usize>> = sources
        .iter()
        .map(|s| {
            let mut v = vec![0; s.labels.len()];
            for (e, &l) in s.labels.iter().enumerate() {
                v[l] = e;
            }
            v
        })
        .collect();
    let phi = (0..order)
        .map(|k| {
            radix::decode(k, &sizes)
                .iter()
                .enumerate()
                .fold(cod.identity(), |acc, (j, &sym)| {
                    cod.op(acc, cod.pow(imgs[j], inv[j][sym]))
                })
        })
        .collect();
    RandomWitness {
        phi,
        sizes,
        sources,
        edge,
        edge_alphabet: cod.order(),
    }
}

/// An abelian characterization `G = A_1 × … × A_k` of order at most
/// `max_order`, sources `x{i}` with `G_i` the elements trivial in slot `i`,
/// and an edge subgroup `e` generated by one or two random elements.
pub fn random_abelian_characterization(
    r: &mut ChaCha8Rng,
    max_order: usize,
) -> (GroupCharacterization, Vec<String>) {
    let k = r.gen_range(1..=3);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut order = 1;
    for _ in 0..k {
        let mut block = Vec::new();
        for _ in 0..r.gen_range(1..=2) {
            let room = max_order / order;
            if room < 2 {
                break;
            }
            let n = r.gen_range(2..=room.min(6));
            order *= n;
            block.push(n);
        }
        if block.is_empty() {
            block.push(1);
        }
        blocks.push(block);
    }
    let radices: Vec<usize> = blocks.concat();
    let g = FiniteGroup::direct_product(
        radices
            .iter()
            .map(|&n| FiniteGroup::cyclic(n).unwrap())
            .collect(),
    )
    .unwrap();
    let mut subgroups = BTreeMap::new();
    let mut names = Vec::new();
    let mut offset = 0;
    for (i, block) in blocks.iter().enumerate() {
        let slots = offset..offset + block.len();
        let members: Vec<usize> = g
            .elements()
            .filter(|&x| {
                let c = g.components(x);
                slots.clone().all(|s| c[s] == 0)
            })
            .collect();
        let name = format!("x{}", i + 1);
        subgroups.insert(name.clone(), Subgroup::new(&g, &members).unwrap());
        names.push(name);
        offset += block.len();
    }
    let gens: Vec<usize> = (0..r.gen_range(1..=2))
        .map(|_| r.gen_range(0..g.order()))
        .collect();
    subgroups.insert("e".into(), Subgroup::generated_by(&g, &gens).unwrap());
    (GroupCharacterization::new(g, subgroups).unwrap(), names)
}
