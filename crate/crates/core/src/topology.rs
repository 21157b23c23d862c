//! Partially connected K-user interference network topologies.
//!
//! A topology is the per-receiver interferer sets `I_j`: transmitter `i` is
//! heard at receiver `j` iff `i ∈ I_j`. Direct links `i = j` are always
//! present and never listed. Indices are 1-based in all external formats;
//! the internal representation is 1-based too so nothing ever translates.
//!
//! Two interchangeable text forms exist. JSON:
//! `{"K": 4, "interferers": {"1": [3, 4], "2": [1]}}` (receivers with empty
//! `I_j` may be omitted). Compact text: a `K <int>` header line followed by
//! one `j <- i1 i2 ...` line per receiver with non-empty `I_j`.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::ratio::Rat;
use crate::seeds;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("malformed topology document: {0}")]
    MalformedDocument(String),
    #[error("index {index} out of range for K = {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("receiver {j} lists itself as an interferer")]
    SelfInterference { j: usize },
    #[error("duplicate entry for receiver {j}")]
    DuplicateReceiverEntry { j: usize },
    #[error("K = {k} exceeds the limit {limit} for this operation")]
    KTooLarge { k: usize, limit: usize },
}

/// A K-user topology: who interferes at whom. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkTopology {
    k: usize,
    interferers: Vec<BTreeSet<usize>>, // index 0 unused
}

impl NetworkTopology {
    /// Builds from explicit `(receiver, interferer list)` entries, validating
    /// ranges, self-interference, and duplicates.
    pub fn new(k: usize, entries: Vec<(usize, Vec<usize>)>) -> Result<Self, TopologyError> {
        if k == 0 {
            return Err(TopologyError::MalformedDocument("K must be positive".into()));
        }
        let mut interferers = vec![BTreeSet::new(); k + 1];
        let mut seen = BTreeSet::new();
        for (j, list) in entries {
            if j == 0 || j > k {
                return Err(TopologyError::IndexOutOfRange { index: j, k });
            }
            if !seen.insert(j) {
                return Err(TopologyError::DuplicateReceiverEntry { j });
            }
            for i in list {
                if i == 0 || i > k {
                    return Err(TopologyError::IndexOutOfRange { index: i, k });
                }
                if i == j {
                    return Err(TopologyError::SelfInterference { j });
                }
                if !interferers[j].insert(i) {
                    return Err(TopologyError::MalformedDocument(format!(
                        "interferer {i} listed twice for receiver {j}"
                    )));
                }
            }
        }
        Ok(NetworkTopology { k, interferers })
    }

    pub fn interference_free(k: usize) -> Self {
        NetworkTopology::new(k, Vec::new()).expect("K >= 1")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Interferer set of receiver `j`. Panics if `j` is out of range.
    pub fn interferers(&self, j: usize) -> &BTreeSet<usize> {
        assert!(j >= 1 && j <= self.k, "receiver {j} out of range");
        &self.interferers[j]
    }

    pub fn is_interferer(&self, i: usize, j: usize) -> bool {
        self.interferers(j).contains(&i)
    }

    pub fn has_interference(&self) -> bool {
        self.interferers.iter().any(|s| !s.is_empty())
    }

    /// All cross links as `(receiver, interferer)` pairs, ascending.
    pub fn cross_links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.k).flat_map(move |j| self.interferers[j].iter().map(move |&i| (j, i)))
    }

    /// Canonical single-line JSON form: numeric key order, empty sets omitted.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            #[serde(rename = "K")]
            k: usize,
            interferers: std::collections::BTreeMap<usize, &'a BTreeSet<usize>>,
        }
        let interferers = (1..=self.k)
            .filter(|&j| !self.interferers[j].is_empty())
            .map(|j| (j, &self.interferers[j]))
            .collect();
        serde_json::to_string(&Doc { k: self.k, interferers }).expect("serialization cannot fail")
    }

    /// Canonical compact text form, LF line endings.
    pub fn to_text(&self) -> String {
        let mut out = format!("K {}\n", self.k);
        for j in 1..=self.k {
            if self.interferers[j].is_empty() {
                continue;
            }
            let list: Vec<String> = self.interferers[j].iter().map(usize::to_string).collect();
            out.push_str(&format!("{} <- {}\n", j, list.join(" ")));
        }
        out
    }
}

/// Parses either text form, deciding by the first non-whitespace byte.
pub fn parse_topology(text: &str) -> Result<NetworkTopology, TopologyError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

fn parse_json(text: &str) -> Result<NetworkTopology, TopologyError> {
    let doc: JsonDoc =
        serde_json::from_str(text).map_err(|e| TopologyError::MalformedDocument(e.to_string()))?;
    let mut entries = Vec::with_capacity(doc.entries.len());
    for (key, list) in doc.entries {
        let j: usize = key.parse().map_err(|_| {
            TopologyError::MalformedDocument(format!("receiver key `{key}` is not an index"))
        })?;
        entries.push((j, list));
    }
    NetworkTopology::new(doc.k, entries)
}

/// Raw JSON document. Deserialized by hand so duplicate receiver keys are
/// seen rather than silently collapsed by a map.
struct JsonDoc {
    k: usize,
    entries: Vec<(String, Vec<usize>)>,
}

impl<'de> Deserialize<'de> for JsonDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct DocVisitor;

        impl<'de> Visitor<'de> for DocVisitor {
            type Value = JsonDoc;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object with fields `K` and `interferers`")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<JsonDoc, A::Error> {
                let mut k = None;
                let mut entries = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "K" => {
                            if k.is_some() {
                                return Err(de::Error::duplicate_field("K"));
                            }
                            k = Some(map.next_value()?);
                        }
                        "interferers" => {
                            if entries.is_some() {
                                return Err(de::Error::duplicate_field("interferers"));
                            }
                            entries = Some(map.next_value::<EntryList>()?.0);
                        }
                        other => {
                            return Err(de::Error::unknown_field(other, &["K", "interferers"]));
                        }
                    }
                }
                Ok(JsonDoc {
                    k: k.ok_or_else(|| de::Error::missing_field("K"))?,
                    entries: entries.unwrap_or_default(),
                })
            }
        }

        d.deserialize_map(DocVisitor)
    }
}

/// Interferer map kept as an entry list, duplicates included.
struct EntryList(Vec<(String, Vec<usize>)>);

impl<'de> Deserialize<'de> for EntryList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = EntryList;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from receiver index to interferer list")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<EntryList, A::Error> {
                let mut out = Vec::new();
                while let Some(pair) = map.next_entry::<String, Vec<usize>>()? {
                    out.push(pair);
                }
                Ok(EntryList(out))
            }
        }

        d.deserialize_map(EntriesVisitor)
    }
}

fn parse_text(text: &str) -> Result<NetworkTopology, TopologyError> {
    let malformed = |msg: &str| TopologyError::MalformedDocument(msg.to_owned());
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header: Vec<&str> =
        lines.next().ok_or_else(|| malformed("empty document"))?.split_whitespace().collect();
    let k = match header.as_slice() {
        ["K", n] => n.parse::<usize>().map_err(|_| malformed("K is not an integer"))?,
        _ => return Err(malformed("first line must be `K <int>`")),
    };
    let mut entries = Vec::new();
    for line in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 3 || tokens[1] != "<-" {
            return Err(malformed(&format!("expected `j <- i1 i2 ...`, got `{line}`")));
        }
        let j = tokens[0]
            .parse::<usize>()
            .map_err(|_| malformed(&format!("receiver `{}` is not an index", tokens[0])))?;
        let list = tokens[2..]
            .iter()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| malformed(&format!("interferer `{t}` is not an index")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        entries.push((j, list));
    }
    NetworkTopology::new(k, entries)
}

/// Flattened `(receiver, interferer)` pair order used by enumeration and
/// random generation: receiver-major, both ascending, `i != j`.
fn cross_pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|j| (1..=k).filter(move |&i| i != j).map(move |i| (j, i))).collect()
}

pub const ENUMERATION_K_LIMIT: usize = 5;

/// All `2^(K(K-1))` topologies over K users, in lexicographic order of the
/// flattened cross-link indicator vector (the empty topology first, the fully
/// connected one last). Lazy; K = 5 yields a million items.
pub fn enumerate_topologies(
    k: usize,
) -> Result<impl Iterator<Item = NetworkTopology>, TopologyError> {
    if k > ENUMERATION_K_LIMIT {
        return Err(TopologyError::KTooLarge { k, limit: ENUMERATION_K_LIMIT });
    }
    assert!(k >= 1, "K must be positive");
    let pairs = cross_pairs(k);
    let n = pairs.len();
    Ok((0..1u64 << n).map(move |mask| from_mask(k, &pairs, mask)))
}

fn from_mask(k: usize, pairs: &[(usize, usize)], mask: u64) -> NetworkTopology {
    let n = pairs.len();
    let mut interferers = vec![BTreeSet::new(); k + 1];
    for (p, &(j, i)) in pairs.iter().enumerate() {
        if mask >> (n - 1 - p) & 1 == 1 {
            interferers[j].insert(i);
        }
    }
    NetworkTopology { k, interferers }
}

/// Random topology where each cross link is present independently with the
/// given probability. Deterministic per seed; the comparison against the
/// density is exact. Panics unless `0 <= density <= 1`.
pub fn random_topology(k: usize, density: &Rat, seed: u64) -> NetworkTopology {
    use num_bigint::BigInt;
    use num_traits::Zero;
    assert!(k >= 1, "K must be positive");
    assert!(
        *density >= Rat::zero() && *density <= Rat::from_integer(BigInt::from(1)),
        "density must lie in [0, 1]"
    );
    let mut rng = seeds::rng_from(seed);
    let mut interferers = vec![BTreeSet::new(); k + 1];
    let threshold = density.numer() << 64u32;
    for (j, i) in cross_pairs(k) {
        let u: u64 = rng.gen();
        if BigInt::from(u) * density.denom() < threshold {
            interferers[j].insert(i);
        }
    }
    NetworkTopology { k, interferers }
}
