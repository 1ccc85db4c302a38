//! Text descriptors for rings and elements: `unram(l,N,f)`, `ram(l,N,g)`
//! with `cyclo(n)` sugar, `prod(...)`, `fiber(...)`; elements as coefficient
//! lists `[c0,c1,...]`.

use super::Ring;
use crate::error::{Error, Result};

/// Split a comma-separated argument list, respecting nested parens/brackets.
pub(crate) fn split_args(s: &str) -> Vec<&str> {
    let mut out = vec![];
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s[start..].trim().is_empty() || !out.is_empty() {
        out.push(s[start..].trim());
    }
    out
}

/// `name(body)` splitter; errors when the shape is wrong.
pub(crate) fn call_form<'a>(s: &'a str, what: &str) -> Result<(&'a str, &'a str)> {
    let s = s.trim();
    let open = s
        .find('(')
        .ok_or_else(|| Error::Parse(format!("{what}: expected name(...), got `{s}`")))?;
    if !s.ends_with(')') {
        return Err(Error::Parse(format!("{what}: unbalanced parens in `{s}`")));
    }
    Ok((&s[..open], &s[open + 1..s.len() - 1]))
}

pub fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: `{s}` is not a nonnegative integer")))
}

pub fn parse_i64(s: &str, what: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: `{s}` is not an integer")))
}

/// Integer coefficient list `[c0,c1,...]`.
pub fn parse_coeff_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if !s.starts_with('[') || !s.ends_with(']') {
        return Err(Error::Parse(format!("expected [c0,c1,...], got `{s}`")));
    }
    let inner = &s[1..s.len() - 1];
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    inner
        .split(',')
        .map(|c| parse_i64(c, "coefficient"))
        .collect()
}

/// Ring descriptor grammar.
pub fn parse_ring(s: &str) -> Result<Ring> {
    let (name, body) = call_form(s, "ring descriptor")?;
    let args = split_args(body);
    match name.trim() {
        "unram" => {
            if args.len() != 3 {
                return Err(Error::Parse("unram takes (ell, N, f)".into()));
            }
            Ring::unramified(
                parse_u64(args[0], "ell")?,
                parse_u64(args[1], "N")? as u32,
                parse_u64(args[2], "f")? as u32,
            )
        }
        "ram" => {
            if args.len() != 3 {
                return Err(Error::Parse("ram takes (ell, N, g)".into()));
            }
            let ell = parse_u64(args[0], "ell")?;
            let prec = parse_u64(args[1], "N")? as u32;
            let gtxt = args[2].trim();
            if let Ok((inner_name, inner_body)) = call_form(gtxt, "modulus") {
                if inner_name.trim() == "cyclo" {
                    let n = parse_u64(inner_body, "cyclo order")?;
                    return Ring::cyclotomic_local(ell, prec, n);
                }
            }
            let g = parse_coeff_list(gtxt)?;
            Ring::local(ell, prec, &g, None)
        }
        "prod" => {
            let parts: Result<Vec<Ring>> = args.iter().map(|a| parse_ring(a)).collect();
            Ring::product(parts?)
        }
        "fiber" => {
            if args.len() != 2 {
                return Err(Error::Parse("fiber takes (R1, R2)".into()));
            }
            Ring::fiber(parse_ring(args[0])?, parse_ring(args[1])?)
        }
        other => Err(Error::Parse(format!("unknown ring kind `{other}`"))),
    }
}
