//! Size guards for the exhaustive searches.
//!
//! Most operations in this crate enumerate an exponential space.  Each
//! entry point that does so consults a [`Guards`] value and refuses, with
//! a loud error, to start a search that would be hopeless.  Callers that
//! know what they are doing can raise the limits.

use thiserror::Error;

/// Limits applied before starting an exponential search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guards {
    /// Largest vertex count for which separations are enumerated.
    pub max_separation_vertices: usize,
    /// Largest vertex count for which tangles are enumerated.
    pub max_tangle_vertices: usize,
    /// Largest host vertex count for subdivision search.
    pub max_subdivision_vertices: usize,
    /// Upper bound on the number of rotation systems visited when
    /// enumerating embeddings of one graph.
    pub max_embedding_count: u128,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_separation_vertices: 12,
            max_tangle_vertices: 8,
            max_subdivision_vertices: 20,
            max_embedding_count: 10_000_000,
        }
    }
}

impl Guards {
    /// A guard set with every limit raised far enough that nothing in the
    /// test suite trips it.  Searches may then take their true cost.
    pub fn unbounded() -> Self {
        Guards {
            max_separation_vertices: usize::MAX,
            max_tangle_vertices: usize::MAX,
            max_subdivision_vertices: usize::MAX,
            max_embedding_count: u128::MAX,
        }
    }

    pub fn check_separation_vertices(&self, n: usize) -> Result<(), GuardError> {
        if n > self.max_separation_vertices {
            Err(GuardError::TooManyVertices {
                what: "separation enumeration",
                actual: n,
                limit: self.max_separation_vertices,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_tangle_vertices(&self, n: usize) -> Result<(), GuardError> {
        if n > self.max_tangle_vertices {
            Err(GuardError::TooManyVertices {
                what: "tangle enumeration",
                actual: n,
                limit: self.max_tangle_vertices,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_subdivision_vertices(&self, n: usize) -> Result<(), GuardError> {
        if n > self.max_subdivision_vertices {
            Err(GuardError::TooManyVertices {
                what: "subdivision search",
                actual: n,
                limit: self.max_subdivision_vertices,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_embedding_count(&self, estimate: u128) -> Result<(), GuardError> {
        if estimate > self.max_embedding_count {
            Err(GuardError::TooManyEmbeddings {
                estimate,
                limit: self.max_embedding_count,
            })
        } else {
            Ok(())
        }
    }
}

/// Raised when an input exceeds the configured search limits.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GuardError {
    #[error("{what} refused: {actual} vertices exceeds the limit of {limit}; raise the guard to force the search")]
    TooManyVertices {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("embedding enumeration refused: about {estimate} rotation systems exceeds the limit of {limit}; raise the guard to force the search")]
    TooManyEmbeddings { estimate: u128, limit: u128 },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_limits_reject_large_inputs() {
        let g = Guards::default();
        assert!(g.check_separation_vertices(12).is_ok());
        assert!(g.check_separation_vertices(13).is_err());
        assert!(g.check_tangle_vertices(8).is_ok());
        assert!(g.check_tangle_vertices(9).is_err());
        assert!(g.check_embedding_count(10_000_001).is_err());
    }

    #[test]
    fn unbounded_accepts_everything() {
        let g = Guards::unbounded();
        assert!(g.check_separation_vertices(1000).is_ok());
        assert!(g.check_tangle_vertices(1000).is_ok());
        assert!(g.check_embedding_count(u128::MAX).is_ok());
    }

    #[test]
    fn errors_mention_the_limit() {
        let g = Guards::default();
        let err = g.check_tangle_vertices(40).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("40"));
        assert!(msg.contains("8"));
    }
}
