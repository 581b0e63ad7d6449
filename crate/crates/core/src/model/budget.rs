use serde::{Deserialize, Serialize};

use super::error::ModelError;

/// Caps on what grounding and satisfiability search may enumerate. Exceeding any of them is
/// an error; nothing is ever silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantifierBudget {
    /// Largest domain over which a function or predicate symbol may be quantified.
    pub max_domain_for_ho: usize,
    /// Largest arity of a quantified function or predicate symbol.
    pub max_ho_arity: usize,
    /// Most distinct ground atoms a satisfiability problem may contain.
    pub max_ground_atoms: usize,
    /// Most tables a single higher-order quantifier may enumerate.
    pub max_ho_tables: u128,
}

impl Default for QuantifierBudget {
    fn default() -> Self {
        QuantifierBudget {
            max_domain_for_ho: 4,
            max_ho_arity: 2,
            max_ground_atoms: 24,
            max_ho_tables: 1 << 16,
        }
    }
}

impl QuantifierBudget {
    pub fn with_ground_atoms(mut self, n: usize) -> Self {
        self.max_ground_atoms = n;
        self
    }

    pub fn with_ho_domain(mut self, n: usize) -> Self {
        self.max_domain_for_ho = n;
        self
    }

    /// Fails unless every cap is positive.
    pub fn validated(self) -> Result<Self, String> {
        if self.max_domain_for_ho == 0
            || self.max_ho_arity == 0
            || self.max_ground_atoms == 0
            || self.max_ho_tables == 0
        {
            return Err("budget values must be positive".into());
        }
        Ok(self)
    }

    /// Checks a higher-order quantifier over `symbol` before anything is enumerated.
    pub(crate) fn check_higher_order(
        &self,
        symbol: &str,
        is_predicate: bool,
        arity: usize,
        domain: usize,
    ) -> Result<u128, ModelError> {
        let count = table_count(is_predicate, arity, domain);
        let unit = if is_predicate { "relations" } else { "functions" };
        let over = domain > self.max_domain_for_ho
            || arity > self.max_ho_arity
            || count > self.max_ho_tables;
        if over {
            let (what, limit) = if domain > self.max_domain_for_ho {
                (
                    format!("quantifying `{symbol}` over a domain of {domain}"),
                    table_count(is_predicate, arity, self.max_domain_for_ho),
                )
            } else if arity > self.max_ho_arity {
                (
                    format!("quantifying `{symbol}` of arity {arity}"),
                    table_count(is_predicate, self.max_ho_arity, domain),
                )
            } else {
                (format!("quantifying `{symbol}`"), self.max_ho_tables)
            };
            return Err(ModelError::BudgetExceeded { what, count, unit, limit });
        }
        Ok(count)
    }

    pub(crate) fn check_atoms(&self, count: usize) -> Result<(), ModelError> {
        if count > self.max_ground_atoms {
            return Err(ModelError::BudgetExceeded {
                what: "grounding".into(),
                count: count as u128,
                unit: "ground atoms",
                limit: self.max_ground_atoms as u128,
            });
        }
        Ok(())
    }
}

/// Number of relations (`2^(d^n)`) or total functions (`d^(d^n)`) of arity `n` over a
/// domain of `d` elements, saturating at `u128::MAX`.
pub fn table_count(is_predicate: bool, arity: usize, domain: usize) -> u128 {
    let cells = (domain as u128).checked_pow(arity as u32);
    let base: u128 = if is_predicate { 2 } else { domain as u128 };
    match cells.and_then(|c| u32::try_from(c).ok()) {
        Some(c) => base.checked_pow(c).unwrap_or(u128::MAX),
        None if base <= 1 => base,
        None => u128::MAX,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unary_relations_over_five() {
        assert_eq!(table_count(true, 1, 5), 32);
        assert_eq!(table_count(false, 1, 3), 27);
        assert_eq!(table_count(true, 0, 9), 2);
        assert_eq!(table_count(true, 3, 10), u128::MAX);
    }

    #[test]
    fn oversized_domain_reports_count() {
        let err = QuantifierBudget::default()
            .check_higher_order("A1", true, 1, 5)
            .unwrap_err();
        match err {
            ModelError::BudgetExceeded { count, unit, .. } => {
                assert_eq!(count, 32);
                assert_eq!(unit, "relations");
            }
            other => panic!("{other:?}"),
        }
    }
}
