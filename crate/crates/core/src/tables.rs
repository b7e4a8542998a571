//! Text tables of the code representation and the structural self-check suite.

use std::fmt::Write as _;

use crate::decoder::LlrVector;
use crate::error::{Error, Result};
use crate::fht;
use crate::gf2::{self, BitMatrix, BitVector, ConstraintSet};
use crate::golay::{self, CodeSpec};
use crate::oracle;
use crate::sc;

/// Section names, in output order.
pub const SECTIONS: [&str; 6] = ["G", "H", "V", "frozen", "constraints", "schedule"];

/// `u19 = u3 + u5 + u6 + u9`, or `u4 = 0` for a statically frozen symbol.
pub fn format_constraint(cs: &ConstraintSet, i: usize) -> Option<String> {
    let deps = cs.dependencies(i)?;
    let rhs = if deps.is_empty() {
        "0".to_string()
    } else {
        deps.iter().map(|j| format!("u{j}")).collect::<Vec<_>>().join(" + ")
    };
    Some(format!("u{i} = {rhs}"))
}

/// Renders every section as `# name` followed by its lines.
pub fn render_tables(spec: &CodeSpec) -> String {
    let g = golay::golay_generator();
    let mut out = String::new();
    let _ = write!(out, "# G\n{}", g.to_text());
    let _ = write!(out, "# H\n{}", spec.check.to_text());
    let _ = write!(out, "# V\n{}", spec.v.to_text());
    let _ = writeln!(out, "# frozen\n{}", golay::format_schedule(spec.cs.frozen()));
    out.push_str("# constraints\n");
    for &i in spec.cs.frozen() {
        let _ = writeln!(out, "{}", format_constraint(&spec.cs, i).expect("frozen"));
    }
    let _ = writeln!(out, "# schedule\n{}", golay::format_schedule(&spec.schedule));
    out
}

/// Parsed form of [`render_tables`] output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    pub g: BitMatrix,
    pub h: BitMatrix,
    pub v: BitMatrix,
    pub frozen: Vec<usize>,
    pub constraints: Vec<String>,
    pub schedule: Vec<usize>,
}

/// Reads back the output of [`render_tables`].
pub fn parse_tables(text: &str) -> Result<Tables> {
    let mut sections: Vec<(String, Vec<&str>)> = Vec::new();
    for line in text.lines() {
        if let Some(name) = line.strip_prefix("# ") {
            sections.push((name.trim().to_string(), Vec::new()));
        } else if !line.trim().is_empty() {
            let (_, body) = sections
                .last_mut()
                .ok_or_else(|| Error::Parse(format!("line {line:?} before any section header")))?;
            body.push(line);
        }
    }
    let section = |name: &str| -> Result<String> {
        sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, body)| body.join("\n"))
            .ok_or_else(|| Error::Parse(format!("missing section {name}")))
    };
    Ok(Tables {
        g: BitMatrix::parse(&section("G")?)?,
        h: BitMatrix::parse(&section("H")?)?,
        v: BitMatrix::parse(&section("V")?)?,
        frozen: golay::parse_schedule(&section("frozen")?)?,
        constraints: section("constraints")?.lines().map(str::to_string).collect(),
        schedule: golay::parse_schedule(&section("schedule")?)?,
    })
}

/// Text inputs of the structural suite; defaults to the bundled fixtures.
#[derive(Clone, Debug)]
pub struct VerifyInputs {
    pub g: String,
    pub v: String,
    pub schedule: String,
}

impl Default for VerifyInputs {
    fn default() -> Self {
        Self {
            g: golay::GOLAY_G_FIXTURE.to_string(),
            v: golay::GOLAY_V_FIXTURE.to_string(),
            schedule: golay::GOLAY_SCHEDULE_FIXTURE.to_string(),
        }
    }
}

/// Outcome of one structural check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, outcome: std::result::Result<String, String>) -> CheckResult {
    match outcome {
        Ok(detail) => CheckResult { name, passed: true, detail },
        Err(detail) => CheckResult { name, passed: false, detail },
    }
}

fn ensure(cond: bool, ok: impl Into<String>, fail: impl Into<String>) -> std::result::Result<String, String> {
    if cond {
        Ok(ok.into())
    } else {
        Err(fail.into())
    }
}

/// Runs the structural suite against `inputs`.
pub fn run_verify(inputs: &VerifyInputs) -> Vec<CheckResult> {
    let spec = golay::golay();
    let generated = golay::golay_generator();
    let mut results = Vec::new();

    let fixture_g = BitMatrix::parse(&inputs.g).map_err(|e| e.to_string());
    results.push(check(
        "generator row space",
        fixture_g.clone().and_then(|g| {
            ensure(
                g.rows() == 12 && g.cols() == 24 && g.same_row_space(&generated),
                "constructed G spans the fixture G",
                "constructed G and fixture G span different codes",
            )
        }),
    ));

    results.push(check(
        "self-duality",
        generated
            .mul(&generated.transpose())
            .map_err(|e| e.to_string())
            .and_then(|p| ensure(p.is_zero(), "G·Gᵀ = 0", "G·Gᵀ ≠ 0")),
    ));

    results.push(check(
        "weight distribution",
        oracle::weight_distribution(&generated).map_err(|e| e.to_string()).and_then(|d| {
            let expected = [(0usize, 1u64), (8, 759), (12, 2576), (16, 759), (24, 1)];
            ensure(d.into_iter().eq(expected), "A0=1 A8=759 A12=2576 A16=759 A24=1", "unexpected weight enumerator")
        }),
    ));

    let fixture_v = BitMatrix::parse(&inputs.v).map_err(|e| e.to_string());
    results.push(check(
        "constraint matrix",
        fixture_v.clone().and_then(|v| {
            let cs = ConstraintSet::from_constraint_matrix(&v).map_err(|e| e.to_string())?;
            ensure(
                v.same_row_space(&spec.v) && cs.frozen() == spec.cs.frozen(),
                "fixture V matches the derived constraints and frozen set",
                "fixture V disagrees with the derived constraints",
            )
        }),
    ));

    results.push(check(
        "constraint consistency",
        fixture_g.and_then(|g| {
            let a = gf2::mixed_transform_matrix(&spec.segment_orders);
            let ok = (0..g.rows()).all(|r| {
                let u = g.row(r).mul_matrix(&a).expect("24 columns");
                spec.cs.is_satisfied(u.as_slice())
            });
            ensure(ok, "every fixture codeword satisfies the freezing constraints", "a fixture codeword violates a constraint")
        }),
    ));

    results.push(check(
        "schedule",
        golay::parse_schedule(&inputs.schedule).map_err(|e| e.to_string()).and_then(|s| {
            golay::validate_schedule(&spec.cs, &spec.segment_orders, &s)?;
            ensure(s == spec.schedule, "valid and equal to the greedy schedule", "valid but differs from the greedy schedule")
        }),
    ));

    results.push(check("fast Hadamard transform", {
        let z: Vec<f64> = (0..8).map(|j| f64::from(j * 5 % 7) - 3.25).collect();
        let naive: Vec<f64> = (0..8usize)
            .map(|a| (0..8usize).map(|j| if (a & j).count_ones() % 2 == 0 { z[j] } else { -z[j] }).sum())
            .collect();
        ensure(fht::fht(&z).ok() == Some(naive), "matches the direct ±1 correlations", "differs from direct correlations")
    }));

    results.push(check("score identity", {
        let mut worst = 0.0f64;
        for t in 0..16u64 {
            let u = BitVector::from_mask(t.wrapping_mul(0x9E37_79B9) & 0xFF_FFFF, 24);
            let y = LlrVector::new((0..24).map(|j| ((j as u64 * 7 + t * 13) % 17) as f64 / 4.0 - 2.0).collect())
                .expect("finite");
            let (r, e) = sc::path_score_identity_check(&u, &y).expect("lengths match");
            worst = worst.max((r + e).abs());
        }
        ensure(worst < 1e-9, "R = −E on spot checks", format!("largest |R + E| = {worst}"))
    }));

    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golay::golay;

    #[test]
    fn tables_round_trip() {
        let spec = golay();
        let text = render_tables(spec);
        let t = parse_tables(&text).unwrap();
        assert!(t.g.same_row_space(&golay::golay_generator()));
        assert_eq!(t.h, spec.check);
        assert_eq!(t.v, spec.v);
        assert_eq!(t.frozen, spec.cs.frozen());
        assert_eq!(t.schedule, spec.schedule);
        assert_eq!(t.constraints.len(), 12);
        let rebuilt = CodeSpec::from_check_matrix(&t.h, &golay::GOLAY_SEGMENTS).unwrap();
        assert_eq!(&rebuilt, spec);
    }

    #[test]
    fn printed_lines() {
        let t = parse_tables(&render_tables(golay())).unwrap();
        assert_eq!(golay::format_schedule(&t.schedule), "0,1,2,16,3,17,4,5,18,6,7,8,9,19,20,10,21,11,12,22,13,14,15,23");
        assert_eq!(t.v.rows(), 12);
        assert_eq!(t.g.row(0).to_string(), "111100000000000011110000");
        assert!(t.constraints.contains(&"u17 = u3".to_string()));
        assert!(t.constraints.contains(&"u0 = 0".to_string()));
    }

    #[test]
    fn stock_suite_passes() {
        for r in run_verify(&VerifyInputs::default()) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn injected_faults_are_caught() {
        let mut inputs = VerifyInputs::default();
        let pos = inputs.g.find(['0', '1']).unwrap();
        let flipped = if &inputs.g[pos..=pos] == "0" { "1" } else { "0" };
        inputs.g.replace_range(pos..=pos, flipped);
        let failed: Vec<_> = run_verify(&inputs).into_iter().filter(|r| !r.passed).map(|r| r.name).collect();
        assert!(failed.contains(&"generator row space"));

        let mut inputs = VerifyInputs::default();
        let mut s = golay::parse_schedule(&inputs.schedule).unwrap();
        s.swap(4, 5);
        inputs.schedule = golay::format_schedule(&s);
        let failed: Vec<_> = run_verify(&inputs).into_iter().filter(|r| !r.passed).map(|r| r.name).collect();
        assert_eq!(failed, vec!["schedule"]);
    }
}
