//! Parsing of command-line values: residue lists, grids and polynomials.

use polymethod::{parse_polynomial, parse_polynomial_auto, PolyError, Polynomial, Ring};

/// Comma-separated nonnegative integers; empty or blank text is the empty set.
pub fn parse_list(text: &str) -> Result<Vec<u64>, String> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<u64>()
                .map_err(|_| format!("`{item}` is not a nonnegative integer in `{text}`"))
        })
        .collect()
}

/// `;`-separated coordinate sets, e.g. `0,1;0,1,2`.
pub fn parse_grid(text: &str) -> Result<Vec<Vec<u64>>, String> {
    text.split(';').map(parse_list).collect()
}

pub fn parse_exponents(text: &str) -> Result<Vec<u32>, String> {
    parse_list(text)?
        .into_iter()
        .map(|k| u32::try_from(k).map_err(|_| format!("exponent {k} is too large")))
        .collect()
}

/// Parses `text` with explicit `vars` when given, else by first appearance.
pub fn parse_poly(
    text: &str,
    ring: Ring,
    vars: Option<&[String]>,
) -> Result<(Polynomial, Vec<String>), String> {
    let parsed = match vars {
        Some(vars) => parse_polynomial(text, ring, vars).map(|p| (p, vars.to_vec())),
        None => parse_polynomial_auto(text, ring),
    };
    parsed.map_err(|e| diagnose(text, &e))
}

fn diagnose(text: &str, err: &PolyError) -> String {
    let offset = match err {
        PolyError::Syntax { offset, .. } | PolyError::UnknownVariable { offset, .. } => *offset,
        _ => return err.to_string(),
    };
    let caret = " ".repeat(text[..offset.min(text.len())].chars().count());
    format!("{err}\n  {text}\n  {caret}^")
}
