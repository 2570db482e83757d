//! Reference moment tables, transcribed in the c-notation and parsed with
//! [`substitute_c_form`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::polyalg::{substitute_c_form, MomentPoly};

/// The checked-in transcription.
pub const SOURCE: &str = include_str!("../data/tables.txt");

/// Highest tabulated orders.
pub const ADJACENCY_MAX: usize = 18;
pub const LAPLACIAN_MAX: usize = 10;
pub const DIAG_BLOCK_MAX: usize = 5;

/// Parses `name = expression` lines; `#` starts a comment line.
pub fn parse_tables(src: &str) -> Result<BTreeMap<String, MomentPoly>> {
    let mut out = BTreeMap::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, expr) =
            line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected `name = expr`", i + 1)))?;
        let poly = substitute_c_form(expr).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        out.insert(name.trim().to_string(), poly);
    }
    Ok(out)
}

fn tables() -> &'static BTreeMap<String, MomentPoly> {
    static TABLES: OnceLock<BTreeMap<String, MomentPoly>> = OnceLock::new();
    TABLES.get_or_init(|| parse_tables(SOURCE).expect("checked-in tables parse"))
}

/// Tabulated adjacency moment; odd orders are zero.
pub fn adjacency(n: usize) -> Option<MomentPoly> {
    match n {
        0 => Some(MomentPoly::one()),
        _ if n > ADJACENCY_MAX => None,
        _ if n % 2 == 1 => Some(MomentPoly::zero()),
        _ => tables().get(&format!("mu{n}")).cloned(),
    }
}

/// Tabulated Laplacian moment.
pub fn laplacian(n: usize) -> Option<MomentPoly> {
    if n == 0 {
        return Some(MomentPoly::one());
    }
    tables().get(&format!("nu{n}")).cloned()
}

/// Tabulated diagonal-block moment.
pub fn diag_block(s: usize) -> Option<MomentPoly> {
    if s == 0 {
        return Some(MomentPoly::one());
    }
    tables().get(&format!("m{s}")).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{int, Rational};

    #[test]
    fn all_lines_parse() {
        let t = parse_tables(SOURCE).unwrap();
        assert_eq!(t.len(), 9 + 10 + 5);
        assert!(adjacency(19).is_none());
        assert!(adjacency(7).unwrap().is_zero());
        assert!(laplacian(11).is_none());
    }

    #[test]
    fn single_sample_values() {
        let one = Rational::from(int(1));
        // every c_m = 1 at d = 1 and t = 1
        assert_eq!(laplacian(5).unwrap().eval(&one, &one).unwrap(), int(212));
        assert_eq!(adjacency(4).unwrap().eval(&one, &one).unwrap(), int(3));
    }

    #[test]
    fn bad_lines_are_reported() {
        assert!(matches!(parse_tables("mu2 t"), Err(Error::Parse(_))));
        assert!(matches!(parse_tables("mu2 = t + x"), Err(Error::Parse(_))));
    }
}
