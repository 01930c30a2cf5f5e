use serde::{Deserialize, Serialize};

/// Work limits shared by every search in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Largest matrix order any constructor will build.
    pub max_order: usize,
    /// Largest quotient group `Z^n / L` the coset search will materialise.
    pub coset_budget: u64,
    /// Node limit for the pruned distance searches.
    pub node_budget: u64,
    /// Largest code that is enumerated word by word.
    pub enum_budget: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_order: 64,
            coset_budget: 1 << 22,
            node_budget: 1_000_000_000,
            enum_budget: 100_000_000,
        }
    }
}
