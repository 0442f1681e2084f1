use std::collections::BTreeSet;

use serde_json::json;

use super::{all_subsets, check_enumerable, complement, elements, full_set, Subset};
use crate::error::{Error, Result};

fn subset_json(s: Subset) -> serde_json::Value {
    json!(elements(s).collect::<Vec<_>>())
}

/// Recovers the subset `p` with `q ∈ F ⇔ p ∩ q ≠ ∅` from a family `F` of
/// nonempty subsets satisfying `⋃ q_λ ∈ F ⇔ some q_λ ∈ F`.
///
/// `p` is the complement of the union of all subsets outside `F`.
pub fn filter_to_support(n: usize, family: &[Subset]) -> Result<Subset> {
    check_enumerable(n)?;
    let fam: BTreeSet<Subset> = family.iter().copied().collect();
    if fam.contains(&0) {
        return Err(Error::validation(
            "the family contains the empty set",
            json!({"member": []}),
        ));
    }
    if let Some(&s) = fam.iter().find(|&&s| s & !full_set(n) != 0) {
        return Err(Error::Invalid(format!("subset {s:#b} is out of range")));
    }
    // Upward closure gives `some q_λ ∈ F ⇒ ⋃ q_λ ∈ F`; the converse reduces
    // to binary unions on a finite lattice.
    for &s in &fam {
        for x in elements(complement(n, s)) {
            let bigger = s | (1 << x);
            if !fam.contains(&bigger) {
                return Err(Error::validation(
                    "the family is not closed upward",
                    json!({"member": subset_json(s), "missing_superset": subset_json(bigger)}),
                ));
            }
        }
    }
    let outside: Vec<Subset> = all_subsets(n).filter(|s| !fam.contains(s)).collect();
    for (i, &a) in outside.iter().enumerate() {
        for &b in &outside[i..] {
            if fam.contains(&(a | b)) {
                return Err(Error::validation(
                    "a union of two non-members is a member",
                    json!({"family": [subset_json(a), subset_json(b)]}),
                ));
            }
        }
    }
    let p = complement(n, outside.iter().fold(0, |acc, s| acc | s));
    debug_assert!(all_subsets(n).all(|q| fam.contains(&q) == (p & q != 0)));
    Ok(p)
}
