//! One function per subcommand. Each returns an [`Outcome`]: a JSON value
//! plus whether every expected/actual pair in it matched.

use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::time::Instant;

use dps_lattice::basis::{lattice_by_closure, mu_points};
use dps_lattice::counts::{count_almost_special, count_irreducible_special_conv, count_special};
use dps_lattice::diagram::{enumerate_almost_special, enumerate_special, irreducible_special};
use dps_lattice::dps::{enumerate_lagrangians, line_count, point_count};
use dps_lattice::lattice::{relation_matrix_f2, BasisVerdict, LatticePresentation};
use dps_lattice::{mu, mu_closed_form, BigInt, CrossinglessDiagram, Geometry, PointIndex, Scalar, SpecialBasis};
use serde_json::{json, Value};

use crate::config::{Command, DiagramSet, Ring, RunConfig};
use crate::error::{CliError, Result};
use crate::report::{Check, GenusRecord, VerificationReport};

/// Genus from which lattice work needs `--allow-large`.
const LARGE_GENUS: usize = 5;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub value: Value,
    pub all_match: bool,
    /// Rows for CSV output, when the command has a tabular form.
    pub table: Option<Vec<Vec<String>>>,
}

impl Outcome {
    fn new(value: Value, all_match: bool) -> Self {
        Self {
            value,
            all_match,
            table: None,
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Counts { genus_max } => counts(*genus_max),
        Command::Enumerate {
            genus,
            set,
            irreducible_only,
        } => enumerate(*genus, *set, *irreducible_only),
        Command::Lagrangians { genus } => lagrangians(cfg, *genus),
        Command::Lines { genus } => lines(cfg, *genus),
        Command::Closure {
            genus,
            seed,
            seed_file,
            steps,
        } => closure(cfg, *genus, seed.as_deref(), seed_file.as_deref(), *steps),
        Command::Mu { genus, diagram } => mu_cmd(cfg, *genus, diagram),
        Command::Rank { genus, ring } => rank(cfg, *genus, *ring),
        Command::VerifyBasis { genus, points } => verify_basis(cfg, *genus, points.as_deref()),
        Command::Express { genus, diagram } => express(cfg, *genus, diagram),
        Command::Verify { genus, genus_max } => {
            let range = match (genus, genus_max) {
                (Some(g), None) => *g..=*g,
                (None, Some(m)) => 0..=*m,
                (None, None) => 0..=4,
                (Some(_), Some(_)) => return Err(CliError::Usage("give --genus or --genus-max, not both".into())),
            };
            let report = verify(cfg, range)?;
            let all_match = report.all_match;
            Ok(Outcome::new(serde_json::to_value(report)?, all_match))
        }
    }
}

/// Integers that fit `i64` become JSON numbers, anything else a string.
fn int_json<T: Scalar>(x: &T) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// Runs with `i64`, then again with `BigInt` if the first attempt overflowed.
fn with_fallback<R>(
    small: impl FnOnce() -> Result<R>,
    big: impl FnOnce() -> Result<R>,
) -> Result<R> {
    match small() {
        Err(CliError::Core(dps_lattice::Error::Overflow(_))) => big(),
        other => other,
    }
}

fn u(x: impl TryInto<u64>) -> u64 {
    x.try_into().ok().expect("count fits in u64")
}

fn counts(genus_max: usize) -> Result<Outcome> {
    let mut header = vec!["g".to_string()];
    let mut big = vec!["N(g)".to_string()];
    let mut small = vec!["n(g)".to_string()];
    let mut rows = Vec::new();
    for g in 0..=genus_max {
        let nn = with_fallback(
            || Ok(count_almost_special::<i64>(g)?.to_string()),
            || Ok(count_almost_special::<BigInt>(g)?.to_string()),
        )?;
        let n = with_fallback(
            || Ok(count_special::<i64>(g)?.to_string()),
            || Ok(count_special::<BigInt>(g)?.to_string()),
        )?;
        header.push(g.to_string());
        big.push(nn.clone());
        small.push(n.clone());
        rows.push(json!({"genus": g, "N": nn, "n": n}));
    }
    Ok(Outcome {
        value: json!({"counts": rows}),
        all_match: true,
        table: Some(vec![header, big, small]),
    })
}

fn enumerate(genus: usize, set: DiagramSet, irreducible_only: bool) -> Result<Outcome> {
    let (diagrams, expected): (Vec<CrossinglessDiagram>, u64) = match (set, irreducible_only) {
        (DiagramSet::Special, true) => (irreducible_special(genus), u(count_irreducible_special_conv::<i64>(genus)?)),
        (DiagramSet::Special, false) => (enumerate_special(genus), u(count_special::<i64>(genus)?)),
        (DiagramSet::AlmostSpecial, false) => {
            (enumerate_almost_special(genus), u(count_almost_special::<i64>(genus)?))
        }
        (DiagramSet::AlmostSpecial, true) => {
            return Err(CliError::Usage("--irreducible-only applies to the special set".into()))
        }
    };
    let check = Check::new(expected, diagrams.len() as u64);
    let listed: Vec<String> = diagrams.iter().map(ToString::to_string).collect();
    let value = json!({
        "genus": genus,
        "set": set,
        "irreducible_only": irreducible_only,
        "count": check,
        "diagrams": listed,
    });
    Ok(Outcome {
        value,
        all_match: check.matches,
        table: Some(listed.into_iter().map(|d| vec![d]).collect()),
    })
}

fn lagrangians(cfg: &RunConfig, genus: usize) -> Result<Outcome> {
    let points = enumerate_lagrangians(genus, &cfg.limits())?;
    let check = Check::new(u(point_count(genus)), points.len() as u64);
    let rows: Vec<Vec<String>> = points.iter().map(|p| p.to_strings()).collect();
    Ok(Outcome {
        value: json!({"genus": genus, "count": check, "points": rows}),
        all_match: check.matches,
        table: Some(
            rows.iter()
                .enumerate()
                .map(|(i, r)| vec![i.to_string(), r.join(" ")])
                .collect(),
        ),
    })
}

fn lines(cfg: &RunConfig, genus: usize) -> Result<Outcome> {
    let geo = Geometry::new(genus, &cfg.limits())?;
    let check = Check::new(u(line_count(genus)), geo.lines.len() as u64);
    let triples: Vec<[usize; 3]> = geo.lines.iter().map(|l| l.points).collect();
    Ok(Outcome {
        value: json!({"genus": genus, "points": geo.space.len(), "count": check, "lines": triples}),
        all_match: check.matches,
        table: Some(
            triples
                .iter()
                .map(|t| t.iter().map(ToString::to_string).collect())
                .collect(),
        ),
    })
}

/// Seed tokens: point indices, diagrams, or a JSON array of indices.
fn parse_seed(geo: &Geometry, text: &str) -> Result<Vec<PointIndex>> {
    let text = text.trim();
    if text.starts_with('[') {
        return Ok(serde_json::from_str(text)?);
    }
    let mut out = Vec::new();
    for token in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        if token.starts_with('(') {
            let d = CrossinglessDiagram::parse(token, geo.genus())?;
            out.push(diagram_point(geo, &d)?);
        } else {
            out.push(
                token
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad seed entry {token:?}")))?,
            );
        }
    }
    Ok(out)
}

fn diagram_point(geo: &Geometry, d: &CrossinglessDiagram) -> Result<PointIndex> {
    geo.space
        .index_of(&mu(d)?.point)
        .ok_or(CliError::Core(dps_lattice::Error::UnknownPoint))
}

fn closure(
    cfg: &RunConfig,
    genus: usize,
    seed: Option<&str>,
    seed_file: Option<&Path>,
    steps: bool,
) -> Result<Outcome> {
    let geo = Geometry::new(genus, &cfg.limits())?;
    let seed = match (seed, seed_file) {
        (_, Some(path)) => parse_seed(&geo, &fs::read_to_string(path)?)?,
        (Some("special") | None, None) => mu_points(&geo, &enumerate_special(genus))?,
        (Some("almost-special"), None) => mu_points(&geo, &enumerate_almost_special(genus))?,
        (Some(list), None) => parse_seed(&geo, list)?,
    };
    let cl = geo.closure(&seed)?;
    let mut value = json!({
        "genus": genus,
        "seed": cl.seed,
        "closure_size": cl.len(),
        "total": geo.space.len(),
        "spans": cl.is_everything(),
    });
    if steps {
        value["steps"] = cl
            .steps
            .iter()
            .map(|s| json!({"point": s.point, "line": s.line, "from": s.from}))
            .collect();
    }
    Ok(Outcome::new(value, true))
}

fn mu_cmd(cfg: &RunConfig, genus: usize, diagram: &str) -> Result<Outcome> {
    let d = CrossinglessDiagram::parse(diagram, genus)?;
    let class = mu(&d)?;
    let closed = Check::new(class.point.to_strings(), mu_closed_form(&d).to_strings());
    // Index lookup only where the point set is small enough to enumerate.
    let index = if (point_count(genus)) <= cfg.max_points as u128 {
        let space = dps_lattice::dps::DualPolarSpace::new(genus, &cfg.limits())?;
        space.index_of(&class.point).map(Value::from).unwrap_or(Value::Null)
    } else {
        Value::Null
    };
    Ok(Outcome::new(
        json!({
            "diagram": d.to_string(),
            "genus": genus,
            "weight": int_json(&class.weight::<i64>()?),
            "lagrangian": class.point.to_strings(),
            "point_index": index,
            "closed_form": closed,
        }),
        closed.matches,
    ))
}

struct Stopwatch {
    start: Instant,
    cap: std::time::Duration,
}

impl Stopwatch {
    fn new(cfg: &RunConfig) -> Self {
        Self {
            start: Instant::now(),
            cap: cfg.time_limit,
        }
    }

    fn check(&self, stage: &'static str) -> Result<()> {
        if self.start.elapsed() > self.cap {
            return Err(CliError::TimeCap {
                stage,
                secs: self.cap.as_secs(),
            });
        }
        Ok(())
    }

    fn millis(&self) -> u64 {
        self.start.elapsed().as_millis() as u64
    }
}

/// Rough peak bytes for building the lattice at genus `g`.
fn lattice_memory_estimate(g: usize) -> u128 {
    let points = point_count(g);
    let lines = line_count(g);
    let generators = count_almost_special::<i128>(g).map_or(u128::MAX, |v| v as u128);
    let rank = count_special::<i128>(g).map_or(u128::MAX, |v| v as u128);
    if g >= LARGE_GENUS {
        points.saturating_mul(generators + rank).saturating_mul(16) + lines * 64
    } else {
        lines * 96 + points.saturating_mul(rank) * 16
    }
}

fn guard_lattice(cfg: &RunConfig, genus: usize) -> Result<()> {
    if genus >= LARGE_GENUS && !cfg.allow_large {
        return Err(CliError::NeedsAllowLarge { genus });
    }
    let needed = lattice_memory_estimate(genus);
    let cap = cfg.memory_mb as u128 * 1024 * 1024;
    if needed > cap {
        return Err(CliError::MemoryCap {
            what: "lattice presentation",
            needed_mb: (needed / (1024 * 1024)) as u64,
            cap_mb: cfg.memory_mb,
        });
    }
    Ok(())
}

/// Smith form of the full relation matrix up to genus 4, closure reduction
/// from there on.
fn build<T: Scalar>(geo: &Geometry) -> Result<LatticePresentation<T>> {
    if geo.genus() >= LARGE_GENUS {
        Ok(lattice_by_closure(geo)?)
    } else {
        let triples: Vec<[usize; 3]> = geo.lines.iter().map(|l| l.points).collect();
        Ok(LatticePresentation::from_relations(geo.space.len(), &triples)?)
    }
}

fn rank(cfg: &RunConfig, genus: usize, ring: Ring) -> Result<Outcome> {
    let geo = Geometry::new(genus, &cfg.limits())?;
    let expected_n = u(count_special::<i64>(genus)?);
    let points = geo.space.len() as u64;
    if ring == Ring::F2 && genus < LARGE_GENUS {
        let triples: Vec<[usize; 3]> = geo.lines.iter().map(|l| l.points).collect();
        let f2 = relation_matrix_f2(geo.space.len(), &triples).rank() as u64;
        let check = Check::new(points - expected_n, f2);
        return Ok(Outcome::new(
            json!({"genus": genus, "ring": ring, "points": points, "lines": geo.lines.len(), "f2_rank": check, "expected_n": expected_n, "match": check.matches}),
            check.matches,
        ));
    }
    guard_lattice(cfg, genus)?;
    let (free, torsion, f2) = with_fallback(
        || summary::<i64>(&geo),
        || summary::<BigInt>(&geo),
    )?;
    let (value, ok) = match ring {
        Ring::Z => {
            let ok = free == expected_n && torsion.is_empty();
            let v = json!({"genus": genus, "ring": ring, "points": points, "lines": geo.lines.len(), "free_rank": free, "torsion": torsion, "expected_n": expected_n, "match": ok});
            (v, ok)
        }
        Ring::F2 => {
            let check = Check::new(points - expected_n, f2);
            let v = json!({"genus": genus, "ring": ring, "points": points, "lines": geo.lines.len(), "f2_rank": check, "expected_n": expected_n, "match": check.matches});
            (v, check.matches)
        }
    };
    Ok(Outcome::new(value, ok))
}

fn summary<T: Scalar>(geo: &Geometry) -> Result<(u64, Vec<String>, u64)> {
    let lat = build::<T>(geo)?;
    Ok((
        lat.free_rank() as u64,
        lat.torsion().iter().map(ToString::to_string).collect(),
        lat.f2_rank() as u64,
    ))
}

fn parse_indices(list: &str) -> Result<Vec<PointIndex>> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad point index {t:?}"))))
        .collect()
}

fn verdict_json<T: Scalar>(v: &BasisVerdict<T>) -> Value {
    match v {
        BasisVerdict::Unimodular => json!({"verdict": "unimodular"}),
        BasisVerdict::RankDeficient => json!({"verdict": "rank-deficient", "determinant": 0}),
        BasisVerdict::NonIntegralInverse { determinant } => {
            json!({"verdict": "non-integral-inverse", "determinant": int_json(determinant)})
        }
    }
}

fn verify_basis(cfg: &RunConfig, genus: usize, points: Option<&str>) -> Result<Outcome> {
    let geo = Geometry::new(genus, &cfg.limits())?;
    guard_lattice(cfg, genus)?;
    let candidate = match points {
        Some(list) => parse_indices(list)?,
        None => mu_points(&geo, &enumerate_special(genus))?,
    };
    fn go<T: Scalar>(geo: &Geometry, candidate: &[PointIndex]) -> Result<Value> {
        let lat = build::<T>(geo)?;
        Ok(verdict_json(&lat.verify_basis(candidate)?))
    }
    let mut value = with_fallback(|| go::<i64>(&geo, &candidate), || go::<BigInt>(&geo, &candidate))?;
    let ok = value["verdict"] == "unimodular";
    value["genus"] = genus.into();
    value["points"] = json!(candidate);
    value["match"] = ok.into();
    Ok(Outcome::new(value, ok))
}

fn express(cfg: &RunConfig, genus: usize, diagram: &str) -> Result<Outcome> {
    let d = CrossinglessDiagram::parse(diagram, genus)?;
    let geo = Geometry::new(genus, &cfg.limits())?;
    guard_lattice(cfg, genus)?;
    fn go<T: Scalar>(geo: &Geometry, d: &CrossinglessDiagram) -> Result<Value> {
        let lat = build::<T>(geo)?;
        let special = enumerate_special(geo.genus());
        let pts = mu_points(geo, &special)?;
        let verdict = lat.verify_basis(&pts)?;
        if verdict != BasisVerdict::Unimodular {
            return Ok(json!({
                "diagram": d.to_string(),
                "basis": verdict_json(&verdict),
                "coefficients": Value::Null,
                "residual_zero": false,
            }));
        }
        let basis = SpecialBasis::with_lattice(geo, lat)?;
        let coeffs = basis.express(geo, d)?;
        let terms: Vec<Value> = basis
            .diagrams
            .iter()
            .zip(&coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| json!({"diagram": m.to_string(), "coefficient": int_json(c)}))
            .collect();
        // `express` re-substitutes and errors on a nonzero residual.
        Ok(json!({
            "diagram": d.to_string(),
            "basis": verdict_json(&verdict),
            "coefficients": terms,
            "residual_zero": true,
        }))
    }
    let mut value = with_fallback(|| go::<i64>(&geo, &d), || go::<BigInt>(&geo, &d))?;
    let ok = value["residual_zero"] == true;
    value["genus"] = genus.into();
    value["match"] = ok.into();
    Ok(Outcome::new(value, ok))
}

pub fn verify(cfg: &RunConfig, range: std::ops::RangeInclusive<usize>) -> Result<VerificationReport> {
    let mut records = Vec::new();
    for g in range {
        records.push(with_fallback(|| genus_record::<i64>(cfg, g), || genus_record::<BigInt>(cfg, g))?);
    }
    Ok(VerificationReport::new(records))
}

fn genus_record<T: Scalar>(cfg: &RunConfig, g: usize) -> Result<GenusRecord> {
    let clock = Stopwatch::new(cfg);
    let almost = enumerate_almost_special(g);
    let special = enumerate_special(g);
    let irreducible = irreducible_special(g);
    let n = u(count_special::<i64>(g)?);
    clock.check("diagram enumeration")?;

    let geo = Geometry::new(g, &cfg.limits())?;
    clock.check("geometry")?;
    guard_lattice(cfg, g)?;
    let lat = build::<T>(&geo)?;
    clock.check("lattice")?;

    let images = mu_points(&geo, &special)?;
    let distinct: HashSet<_> = images.iter().collect();
    let unimodular = lat.verify_basis(&images)? == BasisVerdict::Unimodular;
    let spans = geo.closure(&images)?.is_everything();
    clock.check("basis checks")?;

    let points = geo.space.len() as u64;
    Ok(GenusRecord {
        genus: g,
        almost_special: Check::new(u(count_almost_special::<i64>(g)?), almost.len() as u64),
        special: Check::new(n, special.len() as u64),
        irreducible: Check::new(u(count_irreducible_special_conv::<i64>(g)?), irreducible.len() as u64),
        points: Check::new(u(point_count(g)), points),
        lines: Check::new(u(line_count(g)), geo.lines.len() as u64),
        f2_rank: Check::new(points - n, lat.f2_rank() as u64),
        z_free_rank: Check::new(n, lat.free_rank() as u64),
        torsion: Check::new(Vec::new(), lat.torsion().iter().map(ToString::to_string).collect()),
        mu_injective: Check::new(true, distinct.len() == images.len()),
        basis_unimodular: Check::new(true, unimodular),
        closure_spans: Check::new(true, spans),
        elapsed_ms: cfg.timings.then(|| clock.millis()),
    })
}
