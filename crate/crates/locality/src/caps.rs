//! Resource caps shared by the engine.

use crate::bits::MAX_ORDER;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest group order accepted by table builders and closures.
    pub group_order: usize,
    /// Largest number of morphisms a fusion system may store.
    pub morphisms: usize,
    /// Longest word checked exhaustively by the locality validator.
    pub depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { group_order: MAX_ORDER, morphisms: 2_000_000, depth: 4 }
    }
}

impl Caps {
    /// Parse `key=value` pairs separated by commas, e.g. `group=256,morphisms=1000,depth=3`.
    pub fn parse(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("cap `{part}` is not key=value")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("cap `{part}` has a non-numeric value")))?;
            if v == 0 {
                return Err(Error::Input(format!("cap `{part}` must be positive")));
            }
            match k.trim() {
                "group" | "group_order" => {
                    if v > MAX_ORDER {
                        return Err(Error::Input(format!("group cap above hard limit {MAX_ORDER}")));
                    }
                    caps.group_order = v
                }
                "morphisms" => caps.morphisms = v,
                "depth" => caps.depth = v,
                other => return Err(Error::Input(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }

    /// Defaults overridden by the `LOCTOOL_CAPS` environment variable when set.
    pub fn from_env() -> Result<Caps> {
        match std::env::var("LOCTOOL_CAPS") {
            Ok(s) => Caps::parse(&s),
            Err(_) => Ok(Caps::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides_selected_caps() {
        let c = Caps::parse("morphisms=10, depth=3").unwrap();
        assert_eq!(c.morphisms, 10);
        assert_eq!(c.depth, 3);
        assert_eq!(c.group_order, MAX_ORDER);
        assert!(Caps::parse("group=4096").is_err());
        assert!(Caps::parse("depth=0").is_err());
        assert!(Caps::parse("speed=3").is_err());
    }
}
