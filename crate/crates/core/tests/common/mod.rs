#![allow(dead_code)]

pub mod fixtures;
pub mod oracle;
pub mod props;
pub mod sugar;

use translog::Model;

/// Domain {0,1}, variables x y, R = {1}, f swaps 0 and 1.
pub fn m2() -> Model {
    let mut m = Model::new(2, &["x", "y"]).unwrap();
    m.add_relation("R", 1, vec![vec![1]]).unwrap();
    m.add_function("f", 1, vec![(vec![0], 1), (vec![1], 0)]).unwrap();
    m
}

/// Domain-2 models over x y that differ in `R`, `S` and `f`.
pub fn domain2_fixtures() -> Vec<Model> {
    let rels: [&[usize]; 3] = [&[1], &[], &[0, 1]];
    let fs: [[usize; 2]; 2] = [[1, 0], [0, 0]];
    let mut out = Vec::new();
    for r in rels {
        for f in fs {
            let mut m = Model::new(2, &["x", "y"]).unwrap();
            m.add_relation("R", 1, r.iter().map(|&a| vec![a])).unwrap();
            m.add_relation("S", 2, vec![vec![0, 1], vec![1, 1]]).unwrap();
            m.add_function("f", 1, vec![(vec![0], f[0]), (vec![1], f[1])]).unwrap();
            m.add_constant("c", 1).unwrap();
            out.push(m);
        }
    }
    out
}
