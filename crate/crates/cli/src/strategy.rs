use std::str::FromStr;

use nbsd::EnvelopeStrategy;

/// `--strategy` value; the seed is attached later.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyArg {
    Auto,
    Corners,
    Endpoints,
    Random(usize),
    Grid(usize),
}

impl StrategyArg {
    pub fn resolve(self, active_dims: usize, seed: u64) -> EnvelopeStrategy {
        match self {
            StrategyArg::Auto => EnvelopeStrategy::auto(active_dims, seed),
            StrategyArg::Corners => EnvelopeStrategy::Corners,
            StrategyArg::Endpoints => EnvelopeStrategy::Endpoints,
            StrategyArg::Random(samples) => EnvelopeStrategy::CornersPlusRandom { samples, seed },
            StrategyArg::Grid(k) => EnvelopeStrategy::Grid(k),
        }
    }
}

impl FromStr for StrategyArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let count = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| format!("expected a count after ':', got {v:?}"))
        };
        match s.split_once(':') {
            None => match s {
                "auto" => Ok(StrategyArg::Auto),
                "corners" => Ok(StrategyArg::Corners),
                "endpoints" => Ok(StrategyArg::Endpoints),
                _ => Err(format!("unknown strategy {s:?}")),
            },
            Some(("random", m)) => count(m).map(StrategyArg::Random),
            Some(("grid", k)) => match count(k)? {
                k if k >= 2 => Ok(StrategyArg::Grid(k)),
                _ => Err("grid needs at least 2 points per dimension".into()),
            },
            Some(_) => Err(format!("unknown strategy {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_form() {
        assert_eq!("corners".parse(), Ok(StrategyArg::Corners));
        assert_eq!("endpoints".parse(), Ok(StrategyArg::Endpoints));
        assert_eq!("random:64".parse(), Ok(StrategyArg::Random(64)));
        assert_eq!("grid:5".parse(), Ok(StrategyArg::Grid(5)));
        assert!("random:x".parse::<StrategyArg>().is_err());
        assert!("grid:1".parse::<StrategyArg>().is_err());
        assert!("everything".parse::<StrategyArg>().is_err());
    }

    #[test]
    fn auto_depends_on_dimension() {
        assert_eq!(StrategyArg::Auto.resolve(5, 1), EnvelopeStrategy::Corners);
        assert!(matches!(
            StrategyArg::Auto.resolve(40, 1),
            EnvelopeStrategy::CornersPlusRandom { seed: 1, .. }
        ));
    }
}
