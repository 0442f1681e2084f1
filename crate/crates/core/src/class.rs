use std::fmt;

use serde::{Deserialize, Serialize};

/// Most specific structural label of a (measurable or quantum) relation.
///
/// A relation that is both an equivalence and a partial order reports
/// `Equivalence`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationClass {
    Equivalence,
    PartialOrder,
    Preorder,
    Graph,
    Plain,
}

impl RelationClass {
    pub fn from_flags(reflexive: bool, symmetric: bool, antisymmetric: bool, transitive: bool) -> Self {
        match (reflexive, symmetric, antisymmetric, transitive) {
            (true, true, _, true) => RelationClass::Equivalence,
            (true, _, true, true) => RelationClass::PartialOrder,
            (true, _, _, true) => RelationClass::Preorder,
            (true, true, _, _) => RelationClass::Graph,
            _ => RelationClass::Plain,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RelationClass::Equivalence => "equivalence",
            RelationClass::PartialOrder => "partial_order",
            RelationClass::Preorder => "preorder",
            RelationClass::Graph => "graph",
            RelationClass::Plain => "plain",
        }
    }
}

impl fmt::Display for RelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
