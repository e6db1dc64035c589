//! The set of explicitly built finite-output machines, persisted as a text
//! file: a version header, then one decimal index per line.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::Path;

use num_bigint::BigUint;

pub const HEADER: &str = "tmlab-fregistry v1";

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FRegistry {
    members: BTreeSet<BigUint>,
}

impl FRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns whether the index was newly added.
    pub fn insert(&mut self, index: BigUint) -> bool {
        self.members.insert(index)
    }

    pub fn contains(&self, index: &BigUint) -> bool {
        self.members.contains(index)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BigUint> {
        self.members.iter()
    }

    pub fn parse(text: &str) -> Result<Self, RegistryError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == HEADER => {}
            _ => return Err(RegistryError::Format { line: 1, reason: format!("expected header {HEADER:?}") }),
        }
        let mut reg = FRegistry::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v = line
                .parse()
                .map_err(|_| RegistryError::Format { line: i + 1, reason: format!("not a natural number: {line:?}") })?;
            reg.insert(v);
        }
        Ok(reg)
    }

    pub fn render(&self) -> String {
        let mut s = format!("{HEADER}\n");
        for m in &self.members {
            s.push_str(&m.to_string());
            s.push('\n');
        }
        s
    }

    /// Loads `path`, or an empty registry if it does not exist.
    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        match fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes through a temporary file so readers never see a partial file.
    pub fn save(&self, path: &Path) -> Result<(), RegistryError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.render())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

impl FromIterator<BigUint> for FRegistry {
    fn from_iter<I: IntoIterator<Item = BigUint>>(iter: I) -> Self {
        FRegistry { members: iter.into_iter().collect() }
    }
}
