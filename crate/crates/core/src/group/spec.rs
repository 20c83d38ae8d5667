use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::error::{Error, Result};

/// Serializable group description.
///
/// ```json
/// {"kind": "cyclic", "order": 4}
/// {"kind": "product", "factors": [{"kind": "cyclic", "order": 2}, {"kind": "cyclic", "order": 3}]}
/// {"kind": "table", "order": 2, "table": [[0, 1], [1, 0]]}
/// ```
///
/// `order` is optional for products and tables; when present it must match.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic {
        order: usize,
    },
    Product {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<usize>,
        factors: Vec<GroupSpec>,
    },
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<usize>,
        table: Vec<Vec<usize>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        let (g, declared) = match self {
            GroupSpec::Cyclic { order } => (FiniteGroup::cyclic(*order)?, None),
            GroupSpec::Product { order, factors } => (
                FiniteGroup::direct_product(
                    factors
                        .iter()
                        .map(GroupSpec::build)
                        .collect::<Result<_>>()?,
                )?,
                *order,
            ),
            GroupSpec::Table { order, table } => (FiniteGroup::from_table(table.clone())?, *order),
        };
        match declared {
            Some(n) if n != g.order() => Err(Error::Invalid(format!(
                "declared order {n} does not match actual order {}",
                g.order()
            ))),
            _ => Ok(g),
        }
    }
}

impl From<&FiniteGroup> for GroupSpec {
    fn from(g: &FiniteGroup) -> Self {
        match g {
            FiniteGroup::Cyclic(n) => GroupSpec::Cyclic { order: *n },
            FiniteGroup::Product(p) => GroupSpec::Product {
                order: Some(p.order),
                factors: p.factors.iter().map(GroupSpec::from).collect(),
            },
            FiniteGroup::Table(_) => GroupSpec::Table {
                order: Some(g.order()),
                table: g
                    .elements()
                    .map(|a| g.elements().map(|b| g.op(a, b)).collect())
                    .collect(),
            },
        }
    }
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GroupSpec::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let texts = [
            r#"{"kind":"cyclic","order":4}"#,
            r#"{"kind":"product","factors":[{"kind":"cyclic","order":2},{"kind":"cyclic","order":3}]}"#,
            r#"{"kind":"table","table":[[0,1],[1,0]]}"#,
        ];
        for t in texts {
            let g: FiniteGroup = serde_json::from_str(t).unwrap();
            let back: FiniteGroup =
                serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
            assert_eq!(g, back);
        }
    }

    #[test]
    fn rejects_bad_descriptions() {
        assert!(serde_json::from_str::<FiniteGroup>(r#"{"kind":"cyclic","order":0}"#).is_err());
        assert!(serde_json::from_str::<FiniteGroup>(
            r#"{"kind":"table","order":3,"table":[[0,1],[1,0]]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<FiniteGroup>(r#"{"kind":"product","factors":[]}"#).is_err());
    }
}
