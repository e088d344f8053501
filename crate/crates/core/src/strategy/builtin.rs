//! Strategy maps shipped with the crate, extracted from solved 3-white
//! spaces with G moving first.

use super::{ReductionStrategy, StrategyError, StrategyMap};
use crate::geometry::Dims;

const MAPS: [(&str, &str); 2] = [
    ("7x8w3", include_str!("../../strategies/7x8w3.strat")),
    ("6x9w3", include_str!("../../strategies/6x9w3.strat")),
];

/// Names of the shipped maps, e.g. `7x8w3`.
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    MAPS.iter().map(|(n, _)| *n)
}

pub fn builtin_map(name: &str) -> Result<StrategyMap, StrategyError> {
    let (_, text) = MAPS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| StrategyError::Unsupported(format!("no shipped strategy named {name}")))?;
    StrategyMap::from_text(text)
}

pub fn builtin_maps() -> Vec<StrategyMap> {
    MAPS.iter().map(|(_, t)| StrategyMap::from_text(t).expect("shipped maps parse")).collect()
}

/// The reduction strategy for a board larger than both shipped bases.
pub fn builtin_reduction(dims: Dims) -> ReductionStrategy {
    ReductionStrategy::new(dims, builtin_maps())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_maps_parse_with_their_headers() {
        let maps = builtin_maps();
        assert_eq!(maps.len(), 2);
        assert_eq!(maps[0].dims, Dims::new(7, 8).unwrap());
        assert_eq!(maps[1].dims, Dims::new(6, 9).unwrap());
        assert!(maps.iter().all(|m| m.inventory.whites == 3 && !m.is_empty()));
        assert!(builtin_map("9x9w3").is_err());
    }
}
