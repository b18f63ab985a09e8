//! Size caps shared by every exhaustive or matrix-building routine.

/// Upper bounds that guard enumerations and matrix sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Points (or assignments) an exhaustive scan may visit.
    pub enumeration: u64,
    /// Columns of any monomial-indexed matrix.
    pub monomials: usize,
    /// Candidate subsets tried by the functional search.
    pub subsets: usize,
    /// Largest degree a filtration may be pushed to.
    pub degree: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 1_000_000,
            monomials: 10_000,
            subsets: 10_000,
            degree: 32,
        }
    }
}
