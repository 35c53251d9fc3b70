/// Resource caps shared by the completion, enumeration and DP routines.
///
/// Every cap fails loudly with [`crate::Error::CapExceeded`] instead of
/// letting a computation thrash.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of stored elements during a completion.
    pub max_elements: usize,
    /// Maximum 1-norm of any element produced during a completion.
    pub max_norm: u64,
    /// Maximum number of points in an enumerated fiber.
    pub max_fiber: usize,
    /// Maximum number of live states in the layer dynamic program.
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_elements: 1_000_000,
            max_norm: 10_000,
            max_fiber: 1_000_000,
            max_states: 10_000_000,
        }
    }
}
