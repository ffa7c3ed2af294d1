//! Built-in spaces and covers, shipped as data files and compiled in.
use crate::error::{Error, Result};
use crate::format::{cover_from_json, Space};
use mhom_core::complex::BallCover;
use std::path::Path;

const SPACES: &[(&str, &str)] = &[
    ("s1", include_str!("../data/s1.json")),
    ("s2", include_str!("../data/s2.json")),
    ("torus", include_str!("../data/torus.json")),
    ("rp2", include_str!("../data/rp2.json")),
    ("klein", include_str!("../data/klein.json")),
    ("disc", include_str!("../data/disc.json")),
    ("annulus", include_str!("../data/annulus.json")),
    ("wedge", include_str!("../data/wedge.json")),
];

/// (space, cover name, file); the first cover listed for a space is its default.
const COVERS: &[(&str, &str, &str)] = &[
    ("s1", "arcs3", include_str!("../data/s1_arcs3.json")),
    ("s1", "arcs2", include_str!("../data/s1_arcs2.json")),
    ("torus", "lattice", include_str!("../data/torus_lattice.json")),
];

pub fn space_names() -> impl Iterator<Item = &'static str> {
    SPACES.iter().map(|(n, _)| *n)
}

pub fn builtin_space(name: &str) -> Option<Space> {
    SPACES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| Space::from_json(text, n).expect("built-in space files are valid"))
}

pub fn builtin_cover(space: &Space, name: &str) -> Option<BallCover> {
    COVERS
        .iter()
        .find(|(s, n, _)| *s == space.name && *n == name)
        .map(|(_, _, text)| cover_from_json(text, space).expect("built-in cover files are valid"))
}

pub fn default_cover(space: &Space) -> Option<BallCover> {
    let (_, name, _) = COVERS.iter().find(|(s, _, _)| *s == space.name)?;
    builtin_cover(space, name)
}

/// A built-in name or a path to a space file.
pub fn resolve_space(arg: &str) -> Result<Space> {
    if let Some(s) = builtin_space(arg) {
        return Ok(s);
    }
    let path = Path::new(arg);
    if !path.exists() {
        let known: Vec<&str> = space_names().collect();
        return Err(Error::Input(format!("no space file `{arg}` and no built-in space of that name ({})", known.join(", "))));
    }
    Space::load(path)
}

/// A built-in cover name for the space, a path to a cover file, or the
/// space's default cover.
pub fn resolve_cover(arg: Option<&str>, space: &Space) -> Result<BallCover> {
    match arg {
        Some(a) => match builtin_cover(space, a) {
            Some(c) => Ok(c),
            None if Path::new(a).exists() => crate::format::load_cover(Path::new(a), space),
            None => Err(Error::Input(format!("no cover file `{a}` and no built-in cover of that name for {}", space.name))),
        },
        None => default_cover(space)
            .ok_or_else(|| Error::Usage(format!("space {} has no built-in cover; pass --cover", space.name))),
    }
}

/// Expected homology of the golden spaces and pairs, per degree; `None`
/// where no value is pinned.
pub struct GoldenCase {
    pub space: &'static str,
    pub pair: Option<&'static str>,
    pub expected: &'static [Option<&'static str>],
}

pub const GOLDEN: &[GoldenCase] = &[
    GoldenCase { space: "s1", pair: None, expected: &[Some("Z"), Some("Z")] },
    GoldenCase { space: "s2", pair: None, expected: &[Some("Z"), Some("0"), Some("Z")] },
    GoldenCase { space: "torus", pair: None, expected: &[Some("Z"), Some("Z^2"), Some("Z")] },
    GoldenCase { space: "rp2", pair: None, expected: &[Some("Z"), Some("Z/2"), Some("0")] },
    GoldenCase { space: "klein", pair: None, expected: &[Some("Z"), Some("Z + Z/2"), Some("0")] },
    GoldenCase { space: "wedge", pair: None, expected: &[Some("Z"), Some("Z^2")] },
    GoldenCase { space: "disc", pair: Some("boundary"), expected: &[None, None, Some("Z")] },
    GoldenCase { space: "annulus", pair: Some("outer"), expected: &[Some("0"), Some("0"), Some("0")] },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn built_in_data_loads() {
        for name in space_names() {
            let s = builtin_space(name).unwrap();
            assert_eq!(s.name, name);
        }
        let s1 = builtin_space("s1").unwrap();
        assert_eq!(builtin_cover(&s1, "arcs3").unwrap().len(), 3);
        assert_eq!(builtin_cover(&s1, "arcs2").unwrap().len(), 2);
        let torus = builtin_space("torus").unwrap();
        assert_eq!(default_cover(&torus).unwrap().len(), 36);
        assert!(default_cover(&builtin_space("s2").unwrap()).is_none());
    }
}
