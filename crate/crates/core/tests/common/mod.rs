#![allow(dead_code)]

use std::path::{Path, PathBuf};

use cartan::instance::{self, Instance};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixture_dir().join(format!("{name}.json"))
}

pub fn load(name: &str) -> Instance {
    instance::load(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every fixture file, by name.
pub fn all_fixtures() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "json").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

/// Fixtures that load without error.
pub fn valid_fixtures() -> Vec<(String, Instance)> {
    all_fixtures()
        .into_iter()
        .filter_map(|n| instance::load(&fixture(&n)).ok().map(|i| (n, i)))
        .collect()
}

/// Twist-backed fixtures that load without error.
pub fn twist_fixtures() -> Vec<(String, Instance)> {
    valid_fixtures().into_iter().filter(|(_, i)| i.twist().is_some()).collect()
}

/// Compares `actual` with a committed golden file, or rewrites it when
/// `UPDATE_GOLDEN` is set.
pub fn check_golden(rel: &str, actual: &str) -> Result<(), String> {
    let path = fixture_dir().join("golden").join(rel);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want == actual {
        Ok(())
    } else {
        Err(format!("{rel} differs from the golden file"))
    }
}
