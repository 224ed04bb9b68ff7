//! JSON group descriptions.
//!
//! ```json
//! {"type":"cyclic","n":12}
//! {"type":"product","factors":[{"type":"cyclic","n":2},{"type":"cyclic","n":4}]}
//! {"type":"dihedral","n":4}
//! {"type":"symmetric","n":4}
//! {"type":"permutation","generators":[[2,1,3],[2,3,1]]}
//! ```
//!
//! Permutations are written as 1-based image lists.

use serde::{Deserialize, Serialize};

use crate::group::{self, FiniteGroup, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Product { factors: Vec<GroupSpec> },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Permutation { generators: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::Cyclic { n } => group::build_cyclic(*n),
            GroupSpec::Product { factors } => {
                let built = factors.iter().map(GroupSpec::build).collect::<Result<Vec<_>, _>>()?;
                group::build_product(&built)
            }
            GroupSpec::Dihedral { n } => group::build_dihedral(*n),
            GroupSpec::Symmetric { n } => group::build_symmetric(*n),
            GroupSpec::Permutation { generators } => {
                let zero_based = generators
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|&i| {
                                i.checked_sub(1).ok_or_else(|| {
                                    GroupError::InvalidPermutation("images are 1-based".into())
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                group::build_from_permutations(&zero_based)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
