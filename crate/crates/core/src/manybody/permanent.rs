use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use super::ManybodyError;

/// Longest register accepted (8! = 40320 terms).
pub const MAX_REGISTER: usize = 8;

/// Equal-weight formal sum over every ordering of a register's values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetrizedRegister {
    /// The values in ascending order.
    pub values: Vec<u32>,
    pub terms: BTreeMap<Vec<u32>, i64>,
}

impl SymmetrizedRegister {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn permanent_register(values: &[u32]) -> Result<SymmetrizedRegister, ManybodyError> {
    if values.is_empty() {
        return Err(ManybodyError::EmptyRegister);
    }
    if values.len() > MAX_REGISTER {
        return Err(ManybodyError::TooManyValues { max: MAX_REGISTER, got: values.len() });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(ManybodyError::DuplicateValue(w[0]));
    }
    let terms = values.iter().copied().permutations(values.len()).map(|p| (p, 1)).collect();
    Ok(SymmetrizedRegister { values: sorted, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = permanent_register(&[1, 4]).unwrap();
        assert_eq!(r.terms.keys().cloned().collect::<Vec<_>>(), vec![vec![1, 4], vec![4, 1]]);
        assert_eq!(permanent_register(&[2, 3, 7]).unwrap(), permanent_register(&[7, 2, 3]).unwrap());
        assert_eq!(permanent_register(&[2, 3, 7]).unwrap().len(), 6);
        assert_eq!(permanent_register(&[5]).unwrap().len(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(permanent_register(&[]), Err(ManybodyError::EmptyRegister));
        assert_eq!(
            permanent_register(&[1, 2, 3, 4, 5, 6, 7, 8, 9]),
            Err(ManybodyError::TooManyValues { max: 8, got: 9 })
        );
        assert_eq!(permanent_register(&[1, 1]), Err(ManybodyError::DuplicateValue(1)));
    }
}
