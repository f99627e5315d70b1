//! JSON shapes emitted by each subcommand. Unknown fields are rejected when
//! reading them back, so these types double as the published schema.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileOut {
    pub n: u64,
    pub sigma: u64,
    pub s: u64,
    pub tau: u64,
    pub omega: u32,
    pub rad: u64,
    pub largest_prime: Option<u64>,
    pub smallest_prime: Option<u64>,
    pub squarefull_part: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SieveOut {
    pub x: u64,
    pub sum_sigma: u128,
    pub sum_s: u128,
    pub max_s: u64,
    /// Smallest n attaining `max_s`.
    pub argmax_s: u64,
    pub dump: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberOut {
    pub m: u64,
    pub x: u64,
    pub count: usize,
    pub preimages: Vec<u64>,
    pub complete_for_all_n: bool,
    pub infinite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiprimeOut {
    pub m: u64,
    pub count: usize,
    pub preimages: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UntouchableOut {
    pub y: u64,
    pub untouchables: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicityOut {
    pub x: u64,
    pub overall: Vec<[u64; 2]>,
    pub nontrivial: Vec<[u64; 2]>,
    pub even: Vec<[u64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionOut {
    pub k_value: i128,
    pub multiplicity: usize,
    pub pairs: Vec<[u64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnaOut {
    pub k: u64,
    pub a: i128,
    pub x: u64,
    pub n: u64,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SporadicOut {
    pub k: u64,
    pub a: i128,
    pub x: u64,
    pub sporadic: u64,
    pub regular: u64,
    pub within_envelope: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceOut {
    pub a: i128,
    pub x: u64,
    pub count: u64,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityOut {
    pub set: String,
    pub x: u64,
    pub count: u64,
    pub density: f64,
    pub max_s: u64,
    pub sample: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceptionalOut {
    pub x: u64,
    /// Exact, as `"p/q"`.
    pub epsilon: String,
    pub count: u64,
    pub density: f64,
    pub count_a: u64,
    pub count_b: u64,
    pub count_c: u64,
    pub count_d: u64,
}
