use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PUBLISHED_TRAIN_PAGES: usize = 320;
pub const PUBLISHED_TEST_PAGES: usize = 80;

/// Train/test page id lists, stored as JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

impl SplitManifest {
    pub fn new(train: Vec<String>, test: Vec<String>) -> Result<Self> {
        let m = Self { train, test };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let train: BTreeSet<&String> = self.train.iter().collect();
        let shared: Vec<String> = self.test.iter().filter(|id| train.contains(id)).cloned().collect();
        if shared.is_empty() {
            Ok(())
        } else {
            Err(Error::OverlappingSplit(shared))
        }
    }

    /// Whether the split has the sizes of the published corpus split.
    pub fn has_published_sizes(&self) -> bool {
        self.train.len() == PUBLISHED_TRAIN_PAGES && self.test.len() == PUBLISHED_TEST_PAGES
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let m: Self = serde_json::from_slice(bytes)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        Ok(serde_json::to_vec_pretty(self)?)
    }
}
