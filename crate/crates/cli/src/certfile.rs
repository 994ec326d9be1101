//! Portable certificate files.
//!
//! A certificate stores, per canonical class digest, the image root
//! valuation of the two maps. Class tables are deterministic for a given
//! logic and width, so digests make the file checkable against a fresh
//! build of the same catalog.
//!
//! ```text
//! certificate { frames: R2; m: 3 }
//! sigma { vars 1; x1 := ~x1 }
//! g { 0:d41d8cd98f00b204 -> 000; ... }
//! f { ... }
//! ```

use crate::{from_logic_error, from_unif_error, usage, CliError, Ctx};
use std::fmt::Write as _;
use ultab_core::formulas::{parse_substitution, Substitution};
use ultab_core::logics::LogicSpec;
use ultab_core::morphisms;
use ultab_core::unification::{Certificate, SemSubst, UnifError};

fn block<'a>(src: &'a str, keyword: &str) -> Option<(&'a str, &'a str)> {
    let mut rest = src;
    loop {
        let at = rest.find(keyword)?;
        let before_ok = rest[..at]
            .chars()
            .last()
            .is_none_or(|c| !(c.is_alphanumeric() || c == '_'));
        let after = &rest[at + keyword.len()..];
        let after_ok = after
            .trim_start()
            .starts_with('{');
        if before_ok && after_ok {
            let open = after.find('{')?;
            let close = after[open + 1..].find('}')?;
            return Some((
                after[..open].trim(),
                &after[open + 1..open + 1 + close],
            ));
        }
        rest = &after[keyword.len().min(after.len())..];
        if at + keyword.len() >= src.len() {
            return None;
        }
    }
}

fn bits_to_mask(bits: &str) -> Result<u32, CliError> {
    let mut mask = 0u32;
    for (i, c) in bits.chars().enumerate() {
        match c {
            '1' => mask |= 1 << i,
            '0' => {}
            _ => return Err(usage(format!("bad bit-string `{bits}`"))),
        }
    }
    Ok(mask)
}

fn mask_to_bits(mask: u32, width: u32) -> String {
    (0..width)
        .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Renders one semantic substitution as a digest table.
pub fn render_sem_subst(
    logic: &LogicSpec,
    name: &str,
    h: &SemSubst,
) -> Result<String, UnifError> {
    let classes = logic.classes(h.k)?;
    let mut out = String::new();
    let _ = writeln!(out, "{name} {{");
    for (c, model) in classes.models.iter().enumerate() {
        let digest = morphisms::digest(&morphisms::canonical_form(model));
        let _ = writeln!(
            out,
            "  {c}:{digest} -> {};",
            mask_to_bits(h.assign[c], h.n)
        );
    }
    let _ = writeln!(out, "}}");
    Ok(out)
}

/// Renders a complete certificate file.
pub fn render(
    _ctx: &Ctx,
    frame_names: &[String],
    logic: &LogicSpec,
    sigma: &Substitution,
    cert: &Certificate,
) -> Result<String, UnifError> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "certificate {{ frames: {}; m: {} }}",
        frame_names.join(", "),
        cert.m
    );
    let _ = writeln!(out, "sigma {{ {sigma} }}");
    out.push_str(&render_sem_subst(logic, "g", &cert.g)?);
    out.push_str(&render_sem_subst(logic, "f", &cert.f)?);
    Ok(out)
}

fn parse_table(
    body: &str,
    logic: &LogicSpec,
    k: u32,
    n: u32,
) -> Result<SemSubst, CliError> {
    let classes = logic.classes(k).map_err(from_logic_error)?;
    let mut assign = vec![u32::MAX; classes.len()];
    for item in body.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (lhs, bits) = item
            .split_once("->")
            .ok_or_else(|| usage(format!("bad table entry `{item}`")))?;
        let (idx, digest) = lhs
            .trim()
            .split_once(':')
            .ok_or_else(|| usage(format!("bad class key `{lhs}`")))?;
        let c: usize = idx
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad class index `{idx}`")))?;
        if c >= classes.len() {
            return Err(usage(format!(
                "class index {c} out of range ({} classes at width {k})",
                classes.len()
            )));
        }
        let expect = morphisms::digest(&morphisms::canonical_form(&classes.models[c]));
        if digest.trim() != expect {
            return Err(usage(format!(
                "digest mismatch for class {c}: file has {}, catalog gives {expect}",
                digest.trim()
            )));
        }
        assign[c] = bits_to_mask(bits.trim())?;
    }
    if let Some(c) = assign.iter().position(|&a| a == u32::MAX) {
        return Err(usage(format!("class {c} missing from the table")));
    }
    let h = SemSubst { n, k, assign };
    h.validate(&classes).map_err(from_unif_error)?;
    Ok(h)
}

/// Parses a certificate file into its logic, substitution and maps.
pub fn parse(ctx: &Ctx, src: &str) -> Result<(LogicSpec, Substitution, Certificate), CliError> {
    let (_, head_body) =
        block(src, "certificate").ok_or_else(|| usage("missing certificate header"))?;
    let mut frames: Vec<String> = Vec::new();
    let mut m: Option<u32> = None;
    for item in head_body.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (key, value) = item
            .split_once(':')
            .ok_or_else(|| usage(format!("bad header field `{item}`")))?;
        match key.trim() {
            "frames" => {
                frames = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            "m" => {
                m = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| usage(format!("bad m `{value}`")))?,
                )
            }
            other => return Err(usage(format!("unknown header field `{other}`"))),
        }
    }
    let m = m.ok_or_else(|| usage("header lacks m"))?;
    if frames.is_empty() {
        return Err(usage("header lacks frames"));
    }
    let logic = ctx.logic(&frames)?;
    let (_, sigma_body) = block(src, "sigma").ok_or_else(|| usage("missing sigma block"))?;
    let sigma = parse_substitution(sigma_body).map_err(usage)?;
    let (_, g_body) = block(src, "g").ok_or_else(|| usage("missing g block"))?;
    let (_, f_body) = block(src, "f").ok_or_else(|| usage("missing f block"))?;
    let g = parse_table(g_body, &logic, m, sigma.domain)?;
    let f = parse_table(f_body, &logic, sigma.target, m)?;
    Ok((logic, sigma, Certificate { m, g, f }))
}
