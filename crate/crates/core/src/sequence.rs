use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

/// Dense integer identifier of a page.
pub type PageId = u32;

/// A finite, ordered sequence of page requests.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PageSequence(Vec<PageId>);

impl PageSequence {
    pub fn new(pages: Vec<PageId>) -> Self {
        Self(pages)
    }

    /// Concatenates `times` copies of `block`.
    pub fn repeat(block: &[PageId], times: usize) -> Self {
        Self(block.repeat(times))
    }

    pub fn as_slice(&self) -> &[PageId] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<PageId> {
        self.0
    }

    pub fn push(&mut self, page: PageId) {
        self.0.push(page);
    }

    /// Number of distinct pages referenced.
    pub fn distinct_pages(&self) -> usize {
        let mut pages = self.0.clone();
        pages.sort_unstable();
        pages.dedup();
        pages.len()
    }
}

impl Deref for PageSequence {
    type Target = [PageId];

    fn deref(&self) -> &[PageId] {
        &self.0
    }
}

impl From<Vec<PageId>> for PageSequence {
    fn from(pages: Vec<PageId>) -> Self {
        Self(pages)
    }
}

impl FromIterator<PageId> for PageSequence {
    fn from_iter<I: IntoIterator<Item = PageId>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for PageSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, page) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{page}")?;
        }
        Ok(())
    }
}
