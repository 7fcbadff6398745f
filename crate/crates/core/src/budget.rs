/// Size limits for coset enumeration and code construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum `n` for which cosets are enumerated element by element.
    pub enumeration: u64,
    /// Maximum `s * n` (extension degree times length) for code construction.
    pub construction: u64,
}

impl Budget {
    pub const ENV_VAR: &'static str = "CCC_BUDGET";

    /// `CCC_BUDGET=<int>` replaces both limits.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .map_or_else(Self::default, |b| Budget {
                enumeration: b,
                construction: b,
            })
    }

    pub fn unlimited() -> Self {
        Budget {
            enumeration: u64::MAX,
            construction: u64::MAX,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: 10_000_000,
            construction: 20_000,
        }
    }
}
