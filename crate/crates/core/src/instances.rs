//! Small reference instances used by the verification suites.

use crate::codes::{
    bch_code, fixed_weight_subcode, kautz_singleton, load_design, rs_code, QaryCode, TestMatrix,
};
use crate::galois::FieldSpec;
use crate::Budgets;

/// A named test matrix, with its q-ary source code for Kautz-Singleton images.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub matrix: TestMatrix,
    pub source: Option<QaryCode>,
}

/// Blocks of the Fano plane on points `0..7`.
pub const FANO_BLOCKS: [[u32; 3]; 7] = [
    [0, 1, 3],
    [1, 2, 4],
    [2, 3, 5],
    [3, 4, 6],
    [0, 4, 5],
    [1, 5, 6],
    [0, 2, 6],
];

pub fn fano() -> TestMatrix {
    let blocks = FANO_BLOCKS.iter().map(|b| b.to_vec()).collect();
    TestMatrix::from_code(load_design(7, blocks).expect("valid design"))
}

/// Two columns, the first inside the second: `P_A(1, 2) = 1/2`.
pub fn nested_toy() -> TestMatrix {
    TestMatrix::from_supports(2, vec![vec![0], vec![0, 1]]).expect("valid supports")
}

pub fn ks_rs(q: u64, k: usize) -> Instance {
    let field = FieldSpec::with_order(q).expect("prime power");
    let code = rs_code(&field, k, &Budgets::default()).expect("small RS code");
    Instance {
        name: format!("ks-rs(q={q},k={k})"),
        matrix: kautz_singleton(&code).expect("nonempty code"),
        source: Some(code),
    }
}

pub fn bch_cw(m: u32, delta: usize, w: usize) -> Instance {
    let code = bch_code(m, delta).expect("valid BCH parameters");
    let sub = fixed_weight_subcode(&code, w, &Budgets::default()).expect("within budget");
    Instance {
        name: format!("bch-cw(m={m},delta={delta},w={w})"),
        matrix: TestMatrix::from_code(sub),
        source: None,
    }
}

/// The instances exercised by bound-dominance and decoding checks.
pub fn bundled() -> Vec<Instance> {
    vec![
        Instance {
            name: "fano".into(),
            matrix: fano(),
            source: None,
        },
        Instance {
            name: "nested-toy".into(),
            matrix: nested_toy(),
            source: None,
        },
        ks_rs(4, 2),
        ks_rs(5, 2),
        ks_rs(7, 2),
        ks_rs(8, 2),
        ks_rs(8, 3),
        bch_cw(4, 3, 3),
        bch_cw(5, 3, 3),
        bch_cw(6, 3, 3),
    ]
}
