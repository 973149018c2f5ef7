//! Text format for configuration files fed to `eval`.
//!
//! ```text
//! # three factors, seven points each
//! n: 3
//! factor1.angles: 0/7 1/7 2/7 3/7 4/7 5/7 6/7
//! factor2.ranks:  1 3 5 7 2 4 6
//! factor3.angles: 0/7 3/7 6/7 2/7 5/7 1/7 4/7
//! factor3.ranks:  1 4 7 3 6 2 5
//! ```
//!
//! Angles are exact fractions in `[0,1)`; ranks are 1-based with ties. A
//! factor may give either or both; when both appear they must agree.

use crate::cocycle::Configuration;
use crate::error::{Error, Result};
use crate::ordercomb::RankVector;
use crate::rat::Rat;

fn parse_err(line: usize, field: &str, message: String) -> Error {
    Error::Parse {
        line,
        field: field.to_string(),
        message,
    }
}

/// Parses the configuration file format.
pub fn parse_configuration(text: &str) -> Result<Configuration> {
    let mut n: Option<usize> = None;
    let mut angles: Vec<Option<Vec<Rat>>> = Vec::new();
    let mut ranks: Vec<Option<RankVector>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(lineno, "line", "expected `key: value`".into()))?;
        let key = key.trim();
        let value = value.trim();
        if key == "n" {
            let parsed = value
                .parse::<usize>()
                .map_err(|e| parse_err(lineno, "n", format!("`{value}`: {e}")))?;
            if !(1..=crate::cocycle::MAX_DIRECT_FACTORS).contains(&parsed) {
                return Err(parse_err(
                    lineno,
                    "n",
                    format!(
                        "factor count {parsed} outside 1..={}",
                        crate::cocycle::MAX_DIRECT_FACTORS
                    ),
                ));
            }
            n = Some(parsed);
            angles.resize(parsed, None);
            ranks.resize(parsed, None);
            continue;
        }
        let Some(rest) = key.strip_prefix("factor") else {
            return Err(parse_err(
                lineno,
                key,
                "unknown key (expected `n` or `factorK.angles`/`factorK.ranks`)".into(),
            ));
        };
        let n = n.ok_or_else(|| parse_err(lineno, key, "`n` must come first".into()))?;
        let (index_str, what) = rest
            .split_once('.')
            .ok_or_else(|| parse_err(lineno, key, "expected factorK.angles or factorK.ranks".into()))?;
        let k: usize = index_str
            .parse()
            .map_err(|e| parse_err(lineno, key, format!("bad factor index: {e}")))?;
        if k == 0 || k > n {
            return Err(parse_err(lineno, key, format!("factor index {k} outside 1..={n}")));
        }
        let m = 2 * n + 1;
        match what {
            "angles" => {
                let list = value
                    .split_whitespace()
                    .map(|tok| {
                        let a: Rat = tok
                            .parse()
                            .map_err(|e| parse_err(lineno, key, format!("{e}")))?;
                        if a < (0, 1) || a >= (1, 1) {
                            return Err(parse_err(
                                lineno,
                                key,
                                format!("angle {a} outside [0,1)"),
                            ));
                        }
                        Ok(a)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if list.len() != m {
                    return Err(parse_err(
                        lineno,
                        key,
                        format!("expected {m} angles, got {}", list.len()),
                    ));
                }
                angles[k - 1] = Some(list);
            }
            "ranks" => {
                let list = value
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<u8>()
                            .map_err(|e| parse_err(lineno, key, format!("`{tok}`: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if list.len() != m {
                    return Err(parse_err(
                        lineno,
                        key,
                        format!("expected {m} ranks, got {}", list.len()),
                    ));
                }
                let rv = RankVector::new(list)
                    .map_err(|e| parse_err(lineno, key, format!("{e}")))?;
                ranks[k - 1] = Some(rv);
            }
            other => {
                return Err(parse_err(
                    lineno,
                    key,
                    format!("unknown field `{other}` (expected angles or ranks)"),
                ))
            }
        }
    }

    let n = n.ok_or_else(|| parse_err(0, "n", "missing `n:` line".into()))?;
    let mut factors = Vec::with_capacity(n);
    let mut all_angles = Vec::with_capacity(n);
    let mut have_all_angles = true;
    for k in 0..n {
        let factor = match (&ranks[k], &angles[k]) {
            (Some(rv), _) => rv.clone(),
            (None, Some(list)) => RankVector::from_values(list)?,
            (None, None) => {
                return Err(Error::Validation(format!(
                    "factor {} has neither angles nor ranks",
                    k + 1
                )))
            }
        };
        factors.push(factor);
        match &angles[k] {
            Some(list) => all_angles.push(list.clone()),
            None => have_all_angles = false,
        }
    }
    let cfg = Configuration::new(factors)?;
    // per-factor consistency: angles must reproduce the given ranks
    for k in 0..n {
        if let (Some(list), Some(rv)) = (&angles[k], &ranks[k]) {
            let derived = RankVector::from_values(list)?;
            if derived != *rv {
                return Err(Error::Validation(format!(
                    "factor {}: angles imply ranks {derived:?}, file says {rv:?}",
                    k + 1
                )));
            }
        }
    }
    if have_all_angles {
        return cfg.with_angles(all_angles);
    }
    Ok(cfg)
}

/// Renders a configuration in the file format (angles included when known).
pub fn render_configuration(cfg: &Configuration) -> String {
    let mut out = String::new();
    out.push_str(&format!("n: {}\n", cfg.n()));
    for (k, factor) in cfg.factors().iter().enumerate() {
        if let Some(angles) = cfg.angles() {
            let list = angles[k]
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!("factor{}.angles: {list}\n", k + 1));
        }
        let list = factor
            .ranks()
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("factor{}.ranks: {list}\n", k + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_angle_rank_file() {
        let text = "\
# regular three-factor configuration
n: 3
factor1.angles: 0/7 1/7 2/7 3/7 4/7 5/7 6/7
factor2.ranks: 1 3 5 7 2 4 6
factor3.angles: 0/7 3/7 6/7 2/7 5/7 1/7 4/7
factor3.ranks: 1 4 7 3 6 2 5
";
        let cfg = parse_configuration(text).unwrap();
        assert_eq!(cfg, {
            let mut expected = Configuration::regular(3).unwrap();
            // the parsed file has no angles for factor 2, so compare ranks only
            expected = Configuration::new(expected.factors().to_vec()).unwrap();
            expected
        });
    }

    #[test]
    fn parse_errors_carry_line_and_field() {
        let bad = "n: 3\nfactor1.angles: 0/7 1/7\n";
        match parse_configuration(bad) {
            Err(Error::Parse { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, "factor1.angles");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad = "factor1.ranks: 1 2 3\n";
        assert!(matches!(parse_configuration(bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn inconsistent_ranks_rejected() {
        let text = "\
n: 1
factor1.angles: 0/3 1/3 2/3
factor1.ranks: 1 3 2
";
        assert!(matches!(
            parse_configuration(text),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn roundtrip_through_render() {
        let cfg = Configuration::regular(2).unwrap();
        let text = render_configuration(&cfg);
        let back = parse_configuration(&text).unwrap();
        assert_eq!(back.factors(), cfg.factors());
    }
}
