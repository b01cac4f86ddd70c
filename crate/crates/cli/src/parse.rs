use anyhow::{anyhow, bail, Context, Result};
use robust_leq::experiments::{ClassSpec, PairSpec};

/// `disjoint:L`, `identical:L`, or a JSON `PairSpec` object.
pub fn pair(s: &str) -> Result<PairSpec> {
    if s.trim_start().starts_with('{') {
        return serde_json::from_str(s).context("bad pair JSON");
    }
    let (kind, len) = s.split_once(':').ok_or_else(|| anyhow!("expected KIND:LENGTH, got {s:?}"))?;
    let length: usize = len.parse().with_context(|| format!("bad length in {s:?}"))?;
    match kind {
        "disjoint" => Ok(PairSpec::DisjointConjunctions { length }),
        "identical" => Ok(PairSpec::Identical { length }),
        _ => bail!("unknown pair kind {kind:?} (disjoint, identical, or JSON)"),
    }
}

/// `conjunctions:N`, `monotone:N`, or `ltf:N:W`.
pub fn class(s: &str) -> Result<ClassSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<u64> {
        parts
            .get(i)
            .ok_or_else(|| anyhow!("missing field {i} in {s:?}"))?
            .parse()
            .with_context(|| format!("bad number in {s:?}"))
    };
    match (parts[0], parts.len()) {
        ("conjunctions", 2) => Ok(ClassSpec::Conjunctions { n: num(1)? as usize }),
        ("monotone", 2) => Ok(ClassSpec::MonotoneConjunctions { n: num(1)? as usize }),
        ("ltf", 3) => Ok(ClassSpec::BoundedLtfs {
            n: num(1)? as usize,
            budget: num(2)?,
        }),
        _ => bail!("unknown class {s:?} (conjunctions:N, monotone:N, ltf:N:W)"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_forms() {
        assert_eq!(pair("disjoint:4").unwrap(), PairSpec::DisjointConjunctions { length: 4 });
        assert_eq!(pair("identical:2").unwrap(), PairSpec::Identical { length: 2 });
        assert!(pair("disjoint").is_err());
        assert!(pair("other:3").is_err());
        let j = r#"{"kind": "explicit", "label": "p", "h": {"class": "conjunction", "n": 3, "pos": [1], "neg": []}, "c": {"class": "conjunction", "n": 3, "pos": [2], "neg": []}}"#;
        assert!(matches!(pair(j).unwrap(), PairSpec::Explicit { .. }));
    }

    #[test]
    fn class_forms() {
        assert_eq!(class("conjunctions:3").unwrap(), ClassSpec::Conjunctions { n: 3 });
        assert_eq!(class("monotone:4").unwrap(), ClassSpec::MonotoneConjunctions { n: 4 });
        assert_eq!(class("ltf:2:3").unwrap(), ClassSpec::BoundedLtfs { n: 2, budget: 3 });
        assert!(class("ltf:2").is_err());
        assert!(class("conjunctions:x").is_err());
    }
}
