//! JSON file input and output.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Raw bytes of an input file, kept for hashing.
pub struct Loaded<T> {
    pub value: T,
    pub bytes: Vec<u8>,
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Loaded<T>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let value = serde_json::from_slice(&bytes).map_err(|e| match Error::from(e) {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    Ok(Loaded { value, bytes })
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::SubsetOfCube;

    #[test]
    fn round_trip_and_located_errors() {
        let dir = std::env::temp_dir().join(format!("cubenorm-io-{}", std::process::id()));
        let path = dir.join("a.json");
        let s = SubsetOfCube::from_members(3, [1, 6]).unwrap();
        write_json(&path, &s).unwrap();
        let back: Loaded<SubsetOfCube> = read_json(&path).unwrap();
        assert_eq!(back.value, s);

        std::fs::write(&path, "{\"n\": 3,\n \"hex\": }").unwrap();
        match read_json::<SubsetOfCube>(&path) {
            Err(Error::Parse(msg)) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("{:?}", other.map(|l| l.value)),
        }
        assert!(matches!(read_json::<SubsetOfCube>(dir.join("missing.json")), Err(Error::Io(_))));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
