//! On-disk cache of intersection bases.
//!
//! File layout (UTF-8):
//!
//! ```text
//! arcmult-gb v1 <key>
//! <generator>
//! ...
//! sha256 <hex digest of all preceding lines>
//! ```
//!
//! Generators are printed with the fixed names `x, y, z, v3, ...` by base
//! index. Any mismatch (version, key, digest, parse) is a miss.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use arcmult::arcspace::{BasisCache, StageKey};
use arcmult::{DPoly, GBasis, Truncation, VarNames};
use sha2::{Digest, Sha256};

use crate::parse::parse_poly;

const HEADER: &str = "arcmult-gb v1";

#[derive(Clone, Debug)]
pub struct FileCache {
    dir: PathBuf,
}

/// Canonical, name-independent text of a polynomial.
fn canonical(p: &DPoly) -> String {
    VarNames::default().poly(p)
}

/// Names `x, y, z, v3, ...` up to `n` bases, matching `VarNames::default()`.
fn fixed_names(n: u32) -> VarNames {
    let d = VarNames::default();
    VarNames::new((0..n).map(|b| d.name(b)))
}

fn hex_digest(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Hash of the canonical generators, target order, `h` and `H`.
pub fn stage_key(key: &StageKey<'_>) -> String {
    let mut text = format!("order {}\nh {}\nH {}\n", key.order.name(), key.h, key.ambient);
    for (tag, gens) in [("d", &key.ideal.differential), ("a", &key.ideal.algebraic)] {
        let mut lines: Vec<String> = gens.iter().map(canonical).collect();
        lines.sort();
        for l in lines {
            text.push_str(&format!("{tag} {l}\n"));
        }
    }
    hex_digest(text.as_bytes())
}

impl FileCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FileCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.gb"))
    }

    fn encode(key: &str, basis: &GBasis) -> String {
        let mut body = format!("{HEADER} {key}\n");
        for g in basis.gens() {
            body.push_str(&canonical(g));
            body.push('\n');
        }
        let digest = hex_digest(body.as_bytes());
        body.push_str(&format!("sha256 {digest}\n"));
        body
    }

    fn decode(text: &str, key: &str, stage: &StageKey<'_>) -> Option<GBasis> {
        let body_end = text.trim_end_matches('\n').rfind('\n')? + 1;
        let (body, trailer) = text.split_at(body_end);
        if trailer.trim_end() != format!("sha256 {}", hex_digest(body.as_bytes())) {
            return None;
        }
        let mut lines = body.lines();
        if lines.next()? != format!("{HEADER} {key}") {
            return None;
        }
        let bases = stage.ideal.bases();
        let mut names = fixed_names(bases.iter().max().map_or(0, |b| b + 1));
        let mut gens = Vec::new();
        for l in lines {
            gens.push(parse_poly(l, &mut names).ok()?);
        }
        let trunc = Truncation::new(bases, stage.h);
        GBasis::from_reduced_parts(gens, stage.order, trunc).ok()
    }

    fn write_atomic(&self, key: &str, contents: &str) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path_for(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

impl BasisCache for FileCache {
    fn get(&self, stage: &StageKey<'_>) -> Option<GBasis> {
        let key = stage_key(stage);
        let text = fs::read_to_string(self.path_for(&key)).ok()?;
        FileCache::decode(&text, &key, stage)
    }

    /// Write failures are ignored; the value is simply recomputed next time.
    fn put(&self, stage: &StageKey<'_>, basis: &GBasis) {
        let key = stage_key(stage);
        let _ = self.write_atomic(&key, &FileCache::encode(&key, basis));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use arcmult::arcspace::DiffIdeal;
    use arcmult::groebner::eliminate_above;
    use arcmult::{DVar, OrderKind};

    fn setup() -> (DiffIdeal, GBasis) {
        let x = DPoly::var(DVar::new(0, 0));
        let ideal = DiffIdeal::differential(vec![x.pow(2)]);
        let gens = arcmult::arcspace::truncated_generators(&ideal.differential, 4);
        (ideal, eliminate_above(&gens, 2, 4).unwrap())
    }

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FileCache::new(dir.path());
        let (ideal, basis) = setup();
        let key = StageKey { ideal: &ideal, order: OrderKind::DegLex, h: 2, ambient: 4 };
        assert!(cache.get(&key).is_none());
        cache.put(&key, &basis);
        assert_eq!(cache.get(&key), Some(basis));
    }

    #[test]
    fn tampering_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FileCache::new(dir.path());
        let (ideal, basis) = setup();
        let key = StageKey { ideal: &ideal, order: OrderKind::DegLex, h: 2, ambient: 4 };
        cache.put(&key, &basis);
        let path = cache.path_for(&stage_key(&key));
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen("x^2", "x^3", 1)).unwrap();
        assert!(cache.get(&key).is_none());
        fs::write(&path, text.replacen("v1", "v2", 1)).unwrap();
        assert!(cache.get(&key).is_none());
        fs::write(&path, "garbage").unwrap();
        assert!(cache.get(&key).is_none());
    }

    #[test]
    fn keys_separate_orders_and_bounds() {
        let (ideal, _) = setup();
        let k = |order, h, ambient| stage_key(&StageKey { ideal: &ideal, order, h, ambient });
        let base = k(OrderKind::DegLex, 2, 4);
        assert_ne!(base, k(OrderKind::Lex, 2, 4));
        assert_ne!(base, k(OrderKind::DegLex, 1, 4));
        assert_ne!(base, k(OrderKind::DegLex, 2, 5));
        assert_eq!(base, k(OrderKind::DegLex, 2, 4));
    }
}
