//! The `volume`, `principal`, `table` and `sv` verbs.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::{json, Value};
use strata_core::combinatorics::partitions_of_size;
use strata_core::siegel_veech::{SvContext, SvKind, SvResult};
use strata_core::volumes::{principal_volume, volume, VolumeOptions, VolumeResult};
use strata_core::Stratum;

use crate::render::{monomial_json, to_json_text, Format, Renderer};
use crate::CliError;

#[derive(Clone, Copy, Debug, Default)]
pub struct Settings {
    pub render: Renderer,
    pub volume_opts: VolumeOptions,
}

pub fn parse_stratum(spec: &str) -> Result<Stratum, CliError> {
    spec.parse::<Stratum>().map_err(CliError::from)
}

fn volume_json(r: &VolumeResult) -> Value {
    let mut v = monomial_json(&r.volume, 2 * r.stratum.genus() as i64);
    v["stratum"] = json!(r.stratum.to_string());
    v["prediction"] = json!(r.prediction.to_string());
    v["relative_error"] = json!(r.relative_error);
    v
}

pub fn cmd_volume(spec: &str, set: &Settings) -> Result<String, CliError> {
    let s = parse_stratum(spec)?;
    let r = volume(&s, set.volume_opts)?;
    Ok(match set.render.format {
        Format::Json => to_json_text(&volume_json(&r)),
        _ => format!("{}\n", set.render.value(&r.volume)),
    })
}

pub fn cmd_principal(g: u32, verify: bool, set: &Settings) -> Result<String, CliError> {
    let v = principal_volume(g)?;
    let matches = if verify {
        let general = volume(&Stratum::principal(g)?, set.volume_opts)?;
        Some(general.volume == v)
    } else {
        None
    };
    Ok(match set.render.format {
        Format::Json => {
            let mut out = monomial_json(&v, 2 * g as i64);
            out["genus"] = json!(g);
            if let Some(m) = matches {
                out["matches_general_pipeline"] = json!(m);
            }
            to_json_text(&out)
        }
        _ => {
            let mut out = format!("{}\n", set.render.value(&v));
            if let Some(m) = matches {
                writeln!(
                    out,
                    "matches general pipeline: {}",
                    if m { "yes" } else { "no" }
                )
                .unwrap();
            }
            out
        }
    })
}

/// Smallest and largest `|ε|` within one genus.
#[derive(Clone, Debug, PartialEq)]
pub struct Ordering {
    pub genus: u32,
    pub smallest: Stratum,
    pub largest: Stratum,
}

impl Ordering {
    /// Principal stratum smallest, minimal stratum largest.
    pub fn as_expected(&self) -> bool {
        self.smallest.is_principal() && self.largest.stripped() == [2 * self.genus - 2]
    }
}

/// Volumes of every stratum with `2g - 2 <= max_size`, grouped by genus.
pub fn table_rows(max_size: u32, opts: VolumeOptions) -> Result<Vec<VolumeResult>, CliError> {
    let mut rows = Vec::new();
    for size in (2..=max_size).step_by(2) {
        for p in partitions_of_size(size) {
            rows.push(volume(&Stratum::new(p.parts().to_vec())?, opts)?);
        }
    }
    Ok(rows)
}

pub fn orderings(rows: &[VolumeResult]) -> Vec<Ordering> {
    let mut by_genus: BTreeMap<u32, Vec<&VolumeResult>> = BTreeMap::new();
    for r in rows {
        by_genus.entry(r.stratum.genus()).or_default().push(r);
    }
    by_genus
        .into_iter()
        .filter(|(_, rs)| rs.len() > 1)
        .map(|(genus, rs)| {
            let key = |r: &&&VolumeResult| abs_error(r);
            let smallest = rs.iter().min_by(|a, b| key(a).total_cmp(&key(b))).unwrap();
            let largest = rs.iter().max_by(|a, b| key(a).total_cmp(&key(b))).unwrap();
            Ordering {
                genus,
                smallest: smallest.stratum.clone(),
                largest: largest.stratum.clone(),
            }
        })
        .collect()
}

fn abs_error(r: &VolumeResult) -> f64 {
    r.relative_error_f64().abs()
}

pub fn cmd_table(max_size: u32, set: &Settings) -> Result<String, CliError> {
    if max_size < 2 {
        return Err(CliError::Invalid("--max-size must be at least 2".into()));
    }
    let rows = table_rows(max_size, set.volume_opts)?;
    let obs = orderings(&rows);
    if set.render.format == Format::Json {
        let doc = json!({
            "rows": rows.iter().map(volume_json).collect::<Vec<_>>(),
            "orderings": obs.iter().map(|o| json!({
                "genus": o.genus,
                "smallest": o.smallest.to_string(),
                "largest": o.largest.to_string(),
                "as_expected": o.as_expected(),
            })).collect::<Vec<_>>(),
        });
        return Ok(to_json_text(&doc));
    }

    let header = ["stratum", "volume", "prediction", "relative error"];
    let cells: Vec<[String; 4]> = rows
        .iter()
        .map(|r| {
            [
                r.stratum.to_string(),
                set.render.value(&r.volume),
                r.prediction.to_string(),
                r.relative_error.clone(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: [&str; 4]| {
        let padded: Vec<String> = row
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
    };
    line(&mut out, header);
    for row in &cells {
        line(&mut out, [&row[0], &row[1], &row[2], &row[3]]);
    }
    out.push('\n');
    for o in &obs {
        writeln!(
            out,
            "genus {}: smallest |relative error| at {}, largest at {} ({})",
            o.genus,
            o.smallest,
            o.largest,
            if o.as_expected() {
                "principal smallest, minimal largest"
            } else {
                "differs from the principal/minimal ordering"
            }
        )
        .unwrap();
    }
    Ok(out)
}

/// One-based zero indices, as typed on the command line.
pub fn parse_zeros(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(CliError::Invalid(format!(
                "bad zero index `{}` (indices start at 1)",
                t.trim()
            ))),
        })
        .collect()
}

pub struct SvRequest<'a> {
    pub stratum: &'a str,
    pub kind: SvKind,
    pub zeros: Option<&'a str>,
    pub angle: Option<u32>,
}

pub fn sv_result(req: &SvRequest<'_>, set: &Settings) -> Result<SvResult, CliError> {
    let s = parse_stratum(req.stratum)?;
    let ctx = SvContext {
        volume_opts: set.volume_opts,
    };
    let default_zeros = match req.kind {
        SvKind::Sc | SvKind::Cyl => "1,2",
        _ => "1",
    };
    let zeros = parse_zeros(req.zeros.unwrap_or(default_zeros))?;
    let need = |n: usize| -> Result<(), CliError> {
        if zeros.len() == n {
            Ok(())
        } else {
            Err(CliError::Invalid(format!(
                "--kind {} takes {n} zero index(es)",
                req.kind
            )))
        }
    };
    let r = match req.kind {
        SvKind::Sc => {
            need(2)?;
            ctx.sc_constant(&s, zeros[0], zeros[1])?
        }
        SvKind::Cyl => {
            need(2)?;
            ctx.cyl_constant(&s, zeros[0], zeros[1])?
        }
        SvKind::Loop => {
            need(1)?;
            ctx.loop_constant(&s, zeros[0])?
        }
        SvKind::LoopPerAngle => {
            need(1)?;
            ctx.loop_per_angle(&s, zeros[0], req.angle.unwrap_or(1))?
        }
        SvKind::Handle => {
            need(1)?;
            ctx.handle_constant(&s, zeros[0])?
        }
        SvKind::Cyl1 => ctx.cyl1_total(&s)?,
        SvKind::Area1 => ctx.area1_constant(&s)?,
        SvKind::Sc2 => {
            if !s.is_principal() {
                return Err(CliError::Invalid(format!(
                    "--kind sc2 needs a principal stratum H(1,...,1), got {s}"
                )));
            }
            ctx.sc2_principal(s.genus())?
        }
    };
    Ok(r)
}

pub fn cmd_sv(req: &SvRequest<'_>, set: &Settings) -> Result<String, CliError> {
    let r = sv_result(req, set)?;
    let deviation = r.relative_deviation(15);
    let zeros: Vec<usize> = r.zeros.iter().map(|i| i + 1).collect();
    if set.render.format == Format::Json {
        let doc = json!({
            "kind": r.kind.name(),
            "stratum": r.stratum.to_string(),
            "zeros": zeros,
            "angle": r.angle,
            "value": monomial_json(&r.value, r.kind.pi_exponent()),
            "pi_exp_class": r.kind.pi_exponent(),
            "predictor": r.predictor.to_string(),
            "relative_deviation": deviation,
            "warnings": r.warnings,
        });
        return Ok(to_json_text(&doc));
    }
    let mut out = String::new();
    writeln!(out, "kind: {}", r.kind).unwrap();
    writeln!(out, "stratum: {}", r.stratum).unwrap();
    if !zeros.is_empty() {
        let z: Vec<String> = zeros.iter().map(usize::to_string).collect();
        writeln!(out, "zeros: {}", z.join(",")).unwrap();
    }
    if let Some(a) = r.angle {
        writeln!(out, "angle: {a}").unwrap();
    }
    writeln!(out, "value: {}", set.render.value(&r.value)).unwrap();
    let class = match r.kind.pi_exponent() {
        0 => "0 (rational)",
        _ => "-2 (rational / pi^2)",
    };
    writeln!(out, "pi exponent: {class}").unwrap();
    writeln!(out, "predictor: {}", r.predictor).unwrap();
    if let Some(d) = deviation {
        writeln!(out, "relative deviation: {d}").unwrap();
    }
    for w in &r.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact() -> Settings {
        Settings::default()
    }

    #[test]
    fn volume_verb() {
        assert_eq!(cmd_volume("2", &exact()).unwrap(), "1/120 * pi^4\n");
        assert_eq!(cmd_volume("H(1,1)", &exact()).unwrap(), "1/135 * pi^4\n");
        let err = cmd_volume("3", &exact()).unwrap_err();
        assert_eq!(err.exit_code(), crate::exit::INVALID);
        let tight = Settings {
            volume_opts: VolumeOptions { max_weight: 4 },
            ..exact()
        };
        assert_eq!(
            cmd_volume("1,1,1,1", &tight).unwrap_err().exit_code(),
            crate::exit::INFEASIBLE
        );
    }

    #[test]
    fn json_volume_parses_back() {
        let set = Settings {
            render: Renderer::new(Format::Json, 50).unwrap(),
            ..exact()
        };
        let v: Value = serde_json::from_str(&cmd_volume("1,1", &set).unwrap()).unwrap();
        assert_eq!(v["num"], "1");
        assert_eq!(v["den"], "135");
        assert_eq!(v["pi_exp"], 4);
        assert_eq!(v["prediction"], "1");
    }

    #[test]
    fn principal_verb() {
        let out = cmd_principal(3, true, &exact()).unwrap();
        assert_eq!(out, "1/4860 * pi^6\nmatches general pipeline: yes\n");
        assert!(cmd_principal(1, false, &exact()).is_err());
    }

    #[test]
    fn table_verb() {
        let out = cmd_table(4, &exact()).unwrap();
        assert!(out.starts_with("stratum"));
        assert!(out.contains("H(2,1,1)"));
        assert!(out.contains("genus 3: smallest |relative error| at H(1,1,1,1), largest at H(4)"));
    }

    #[test]
    fn zeros_are_one_based() {
        assert_eq!(parse_zeros("1,2").unwrap(), vec![0, 1]);
        assert!(parse_zeros("0").is_err());
        assert!(parse_zeros("x").is_err());
    }

    #[test]
    fn sv_verb() {
        let req = SvRequest {
            stratum: "1,1",
            kind: SvKind::Sc,
            zeros: None,
            angle: None,
        };
        let out = cmd_sv(&req, &exact()).unwrap();
        assert!(out.contains("value: 27/8\n"));
        assert!(out.contains("pi exponent: 0 (rational)"));
        let req = SvRequest {
            stratum: "1,1",
            kind: SvKind::Sc2,
            zeros: None,
            angle: None,
        };
        assert!(cmd_sv(&req, &exact()).unwrap().contains("value: 5/8\n"));
        let req = SvRequest {
            stratum: "2",
            kind: SvKind::Sc2,
            zeros: None,
            angle: None,
        };
        assert!(cmd_sv(&req, &exact()).is_err());
        let req = SvRequest {
            stratum: "2",
            kind: SvKind::LoopPerAngle,
            zeros: Some("1"),
            angle: Some(1),
        };
        assert!(cmd_sv(&req, &exact())
            .unwrap()
            .contains("value: 20 * pi^-2\n"));
    }
}
