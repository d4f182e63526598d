use serde::{Deserialize, Serialize};

pub const DEFAULT_DEGREE_BUDGET: u64 = 1 << 20;
pub const DEFAULT_TAU_BUDGET: u64 = 4096;
pub const DEFAULT_ROOT_HEIGHT: u64 = 8;
pub const DEFAULT_ROOT_NODES: u64 = 200_000;
pub const DEFAULT_ORBIT_POINT_BYTES: u64 = 1 << 24;

/// Resource caps for symbolic expansion and root search.
///
/// `degree` bounds the x-degree of any expanded composition or iterate;
/// `tau` bounds the tau-degree of twisted products and powers;
/// `root_height` bounds the height of trial roots over `K` and `root_nodes`
/// the size of that search; `orbit_point_bytes` bounds the canonical
/// encoding of any single orbit point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budgets {
    pub degree: u64,
    pub tau: u64,
    pub root_height: u64,
    pub root_nodes: u64,
    pub orbit_point_bytes: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            degree: DEFAULT_DEGREE_BUDGET,
            tau: DEFAULT_TAU_BUDGET,
            root_height: DEFAULT_ROOT_HEIGHT,
            root_nodes: DEFAULT_ROOT_NODES,
            orbit_point_bytes: DEFAULT_ORBIT_POINT_BYTES,
        }
    }
}
