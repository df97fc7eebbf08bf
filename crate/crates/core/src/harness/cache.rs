//! On-disk digit caches, one `<constant>.digits` file per constant.

use std::path::{Path, PathBuf};

use crate::constdigits::{gen_digits, load_digit_file, save_digit_file, Constant, DigitStream};
use crate::error::{Error, Result};

pub fn cache_path(dir: impl AsRef<Path>, constant: Constant) -> PathBuf {
    dir.as_ref().join(format!("{}.digits", constant.name()))
}

/// Loads a cache holding at least `required` digits and trims it to exactly
/// that many. A missing or short cache is a capacity error.
pub fn load_cached_digits(dir: impl AsRef<Path>, constant: Constant, required: usize) -> Result<DigitStream> {
    let path = cache_path(dir, constant);
    if !path.exists() {
        return Err(Error::Capacity {
            what: format!("{constant} digit cache {} (missing; run gen-digits)", path.display()),
            required,
            available: 0,
        });
    }
    let stream = load_digit_file(&path)?;
    if stream.count() < required {
        return Err(Error::Capacity {
            what: format!("{constant} digit cache {}", path.display()),
            required,
            available: stream.count(),
        });
    }
    stream.prefix(required)
}

/// Like [`load_cached_digits`], but generates and saves the cache first when it
/// is missing or too short.
pub fn ensure_cached_digits(dir: impl AsRef<Path>, constant: Constant, required: usize) -> Result<DigitStream> {
    let dir = dir.as_ref();
    match load_cached_digits(dir, constant, required) {
        Err(Error::Capacity { .. }) => {
            log::info!("generating {required} digits of {constant} into {}", dir.display());
            let stream = gen_digits(constant, required)?;
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            save_digit_file(&stream, cache_path(dir, constant))?;
            Ok(stream)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_then_generated_then_trimmed() {
        let dir = tempfile::tempdir().unwrap();
        match load_cached_digits(dir.path(), Constant::E, 50) {
            Err(Error::Capacity { required: 50, available: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        let s = ensure_cached_digits(dir.path(), Constant::E, 50).unwrap();
        assert_eq!(s.count(), 50);
        let t = load_cached_digits(dir.path(), Constant::E, 20).unwrap();
        assert_eq!(t.digits(), &s.digits()[..20]);
        match load_cached_digits(dir.path(), Constant::E, 60) {
            Err(Error::Capacity { required: 60, available: 50, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(ensure_cached_digits(dir.path(), Constant::E, 60).unwrap().count(), 60);
    }
}
