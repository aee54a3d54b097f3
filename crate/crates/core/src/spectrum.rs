//! Integer multisets `{value: count}` used for degree and thickness spectra.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum(BTreeMap<u32, u64>);

impl Spectrum {
    pub fn new() -> Spectrum {
        Spectrum::default()
    }

    pub fn add(&mut self, value: u32) {
        self.add_many(value, 1);
    }

    pub fn add_many(&mut self, value: u32, count: u64) {
        if count > 0 {
            *self.0.entry(value).or_insert(0) += count;
        }
    }

    pub fn count(&self, value: u32) -> u64 {
        self.0.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn max_value(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }

    pub fn min_value(&self) -> Option<u32> {
        self.0.keys().next().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn as_map(&self) -> &BTreeMap<u32, u64> {
        &self.0
    }
}

impl FromIterator<u32> for Spectrum {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Spectrum {
        let mut s = Spectrum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

impl From<&[(u32, u64)]> for Spectrum {
    fn from(pairs: &[(u32, u64)]) -> Spectrum {
        let mut s = Spectrum::new();
        for &(k, v) in pairs {
            s.add_many(k, v);
        }
        s
    }
}

impl<const N: usize> From<[(u32, u64); N]> for Spectrum {
    fn from(pairs: [(u32, u64); N]) -> Spectrum {
        Spectrum::from(&pairs[..])
    }
}

/// Renders as `{0: 1, 1: 511, 9: 512}`.
impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Spectrum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Spectrum, Error> {
        let bad = |offset: usize, message: &str| Error::Parse {
            offset,
            message: message.to_string(),
        };
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| bad(0, "spectrum must be wrapped in braces"))?;
        let mut out = Spectrum::new();
        for part in inner.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once(':')
                .ok_or_else(|| bad(0, "expected value: count"))?;
            let k = k.trim().parse().map_err(|_| bad(0, "bad value"))?;
            let v = v.trim().parse().map_err(|_| bad(0, "bad count"))?;
            out.add_many(k, v);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let s = Spectrum::from([(0, 1), (1, 511), (9, 512)]);
        assert_eq!(s.to_string(), "{0: 1, 1: 511, 9: 512}");
        assert_eq!(s.to_string().parse::<Spectrum>().unwrap(), s);
        assert_eq!(s.total(), 1024);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"0":1,"1":511,"9":512}"#);
    }
}
