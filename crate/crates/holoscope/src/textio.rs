//! Text formats for groups and matrices.
//!
//! Group spec file: a header line `kind p n` with kind one of
//! `affine | linear | perm`, then one generator per line. Affine generators
//! are the n*n linear entries row-major followed by the n translation
//! entries; linear generators are the n*n entries; permutation generators
//! are the n images (p is written as 0 and ignored for `perm`). Round trips
//! are bit-exact on canonical files.

use crate::affine::{parse_affine_line, write_affine_line, AffineElement};
use crate::gf::{GFMatrix, GfError};
use crate::perm::Permutation;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextIoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

#[derive(Debug)]
pub enum ParsedGroup {
    Affine {
        p: u8,
        n: usize,
        generators: Vec<AffineElement>,
    },
    Linear {
        p: u8,
        n: usize,
        generators: Vec<GFMatrix>,
    },
    Perm {
        n: usize,
        generators: Vec<Permutation>,
    },
}

pub fn write_affine_group(p: u8, n: usize, gens: &[AffineElement]) -> String {
    let mut s = format!("affine {p} {n}\n");
    for g in gens {
        s.push_str(&write_affine_line(g));
        s.push('\n');
    }
    s
}

pub fn write_linear_group(p: u8, n: usize, gens: &[GFMatrix]) -> String {
    let mut s = format!("linear {p} {n}\n");
    for g in gens {
        let entries: Vec<String> = (0..n)
            .flat_map(|i| (0..n).map(move |j| g.get(i, j).to_string()))
            .collect();
        s.push_str(&entries.join(" "));
        s.push('\n');
    }
    s
}

pub fn write_perm_group(n: usize, gens: &[Permutation]) -> String {
    let mut s = format!("perm 0 {n}\n");
    for g in gens {
        let images: Vec<String> = g.images().iter().map(|x| x.to_string()).collect();
        s.push_str(&images.join(" "));
        s.push('\n');
    }
    s
}

pub fn parse_group_file(text: &str) -> Result<ParsedGroup, TextIoError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| TextIoError::Parse("empty group file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(TextIoError::Parse(format!("bad header {header:?}")));
    }
    let kind = parts[0];
    let p: u8 = parts[1]
        .parse()
        .map_err(|_| TextIoError::Parse("bad modulus".into()))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| TextIoError::Parse("bad dimension".into()))?;
    match kind {
        "affine" => {
            let generators = lines
                .map(|l| parse_affine_line(p, n, l))
                .collect::<Result<Vec<_>, _>>()?;
            if generators.is_empty() {
                return Err(TextIoError::Parse("no generators".into()));
            }
            Ok(ParsedGroup::Affine { p, n, generators })
        }
        "linear" => {
            let mut generators = Vec::new();
            for l in lines {
                let nums: Result<Vec<u8>, _> =
                    l.split_whitespace().map(|t| t.parse::<u8>()).collect();
                let nums = nums.map_err(|_| TextIoError::Parse(format!("bad line {l:?}")))?;
                generators.push(GFMatrix::from_entries(p, n, n, &nums)?);
            }
            if generators.is_empty() {
                return Err(TextIoError::Parse("no generators".into()));
            }
            Ok(ParsedGroup::Linear { p, n, generators })
        }
        "perm" => {
            let mut generators = Vec::new();
            for l in lines {
                let nums: Result<Vec<u16>, _> =
                    l.split_whitespace().map(|t| t.parse::<u16>()).collect();
                let nums = nums.map_err(|_| TextIoError::Parse(format!("bad line {l:?}")))?;
                if nums.len() != n {
                    return Err(TextIoError::Parse(format!(
                        "permutation needs {n} images, got {}",
                        nums.len()
                    )));
                }
                generators
                    .push(Permutation::new(nums).map_err(|e| TextIoError::Parse(e.to_string()))?);
            }
            if generators.is_empty() {
                return Err(TextIoError::Parse("no generators".into()));
            }
            Ok(ParsedGroup::Perm { n, generators })
        }
        other => Err(TextIoError::Parse(format!("unknown kind {other:?}"))),
    }
}
