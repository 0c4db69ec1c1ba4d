use serde::{Deserialize, Serialize};

use super::CopInstance;
use crate::error::{Error, Result};

/// How one size step removes a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// Fix the highest-indexed variable to its value in a reference assignment.
    FixToReference,
    /// Drop the highest-indexed variable and everything touching it.
    Delete,
}

/// Instances with `1..=n` variables, smallest first, each obtained from the
/// next larger one by removing its highest-indexed variable.
///
/// `reference` is required for [`Reduction::FixToReference`]; fixing to an
/// optimal assignment keeps that assignment's restriction optimal at every
/// size.
pub fn size_ladder(
    inst: &CopInstance,
    reduction: Reduction,
    reference: Option<&[usize]>,
) -> Result<Vec<CopInstance>> {
    if reduction == Reduction::FixToReference {
        let r = reference.ok_or_else(|| Error::InvalidInstance("fixing needs a reference assignment".into()))?;
        inst.check_assignment(r)?;
    }
    let mut out = vec![inst.clone()];
    let mut current = inst.clone();
    while current.n() > 1 {
        let i = current.n() - 1;
        current = match reduction {
            Reduction::FixToReference => current.fix_variable(i, reference.unwrap()[i])?,
            Reduction::Delete => current.delete_variable(i)?,
        };
        out.push(current.clone());
    }
    out.reverse();
    Ok(out)
}
