use std::fmt;

use serde::{Deserialize, Serialize};

/// A library file. Common files carry no group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FileId {
    Common { index: usize },
    Unique { group: usize, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileKind {
    Common,
    Unique,
}

impl FileId {
    pub fn common(index: usize) -> Self {
        FileId::Common { index }
    }

    pub fn unique(group: usize, index: usize) -> Self {
        FileId::Unique { group, index }
    }

    pub fn kind(self) -> FileKind {
        match self {
            FileId::Common { .. } => FileKind::Common,
            FileId::Unique { .. } => FileKind::Unique,
        }
    }

    pub fn index(self) -> usize {
        match self {
            FileId::Common { index } | FileId::Unique { index, .. } => index,
        }
    }

    pub fn is_common(self) -> bool {
        matches!(self, FileId::Common { .. })
    }
}

impl fmt::Display for FileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileId::Common { index } => write!(f, "W^c_{index}"),
            FileId::Unique { group, index } => write!(f, "W^u{group}_{index}"),
        }
    }
}
