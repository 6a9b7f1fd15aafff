//! Build-and-certify over a range of q, in parallel.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::families::{build, Construction, FamilyError, FamilyId, FamilyKind};
use crate::surgery::check_amalgam_hypotheses;
use crate::verify::{certify, CageCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("empty q range: q-min {min} > q-max {max}")]
    InvalidRange { min: u32, max: u32 },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("{id}: {source}")]
    Build { id: FamilyId, source: FamilyError },
}

/// Certifies a construction against its own target degree set and girth.
pub fn certify_construction(c: &Construction) -> CageCertificate {
    let (degrees, girth) = c.id.target();
    let start = Instant::now();
    let mut cert = certify(c.graph.graph(), &degrees, girth)
        .with_family(c.id.to_string())
        .with_labels(c.graph.labels());
    cert.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    cert
}

/// Amalgam hypothesis check for surgery-built instances, as text lines.
pub fn hypothesis_lines(c: &Construction) -> Vec<String> {
    let Some(record) = &c.surgery else {
        return Vec::new();
    };
    match check_amalgam_hypotheses(&record.plan, c.graph.field()) {
        Ok(report) if report.passed() => std::iter::once("amalgam girth hypotheses hold".to_string())
            .chain(report.notes)
            .collect(),
        Ok(report) => report
            .violations
            .into_iter()
            .map(|v| format!("hypothesis violated: {v}"))
            .collect(),
        Err(e) => vec![format!("hypothesis check failed: {e}")],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    pub order: usize,
    pub girth: Option<usize>,
    pub degree_set: Vec<usize>,
    pub downs_bound: Option<u64>,
    pub minimal: bool,
    /// Build plus certification time.
    pub wall_time_ms: f64,
    pub certificate: CageCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub q: u32,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepReport {
    /// Sorted by (family, q, t).
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<Skipped>,
}

fn run_one(id: FamilyId) -> Result<SweepRow, SweepError> {
    let start = Instant::now();
    let c = build(id).map_err(|source| SweepError::Build { id, source })?;
    let certificate = certify_construction(&c);
    let t = match id.family {
        crate::families::Family::Gt { t } => Some(t),
        _ => None,
    };
    Ok(SweepRow {
        family: id.family.name().to_string(),
        q: id.q,
        t,
        order: certificate.order,
        girth: certificate.girth,
        degree_set: certificate.degree_set.clone(),
        downs_bound: certificate.downs_bound,
        minimal: certificate.minimal,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        certificate,
    })
}

/// Builds and certifies every admissible q in `q_min..=q_max`. G_t is swept
/// over all `0 <= t <= q`. `jobs = None` uses rayon's default pool size.
pub fn run_sweep(kind: FamilyKind, q_min: u32, q_max: u32, jobs: Option<usize>) -> Result<SweepReport, SweepError> {
    if q_min > q_max {
        return Err(SweepError::InvalidRange { min: q_min, max: q_max });
    }
    let mut ids = Vec::new();
    let mut skipped = Vec::new();
    for q in q_min..=q_max {
        match kind.inadmissible(q) {
            Some(reason) => skipped.push(Skipped { q, reason }),
            None if kind == FamilyKind::Gt => ids.extend((0..=q).map(|t| FamilyId::new(kind.with_t(t), q))),
            None => ids.push(FamilyId::new(kind.with_t(0), q)),
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| SweepError::Pool(e.to_string()))?;
    let mut rows = pool.install(|| ids.into_par_iter().map(run_one).collect::<Result<Vec<_>, _>>())?;
    rows.sort_by(|a, b| (&a.family, a.q, a.t).cmp(&(&b.family, b.q, b.t)));
    Ok(SweepReport { rows, skipped })
}

fn degree_text(d: &[usize]) -> String {
    let inner: Vec<String> = d.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl SweepReport {
    pub fn all_minimal(&self) -> bool {
        self.rows.iter().all(|r| r.minimal)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<8} {:>4} {:>4} {:>7} {:>5} {:<10} {:>7} {:<7} {:>10}\n",
            "family", "q", "t", "order", "girth", "degrees", "bound", "minimal", "time_ms"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<8} {:>4} {:>4} {:>7} {:>5} {:<10} {:>7} {:<7} {:>10.2}",
                r.family,
                r.q,
                opt(r.t),
                r.order,
                opt(r.girth),
                degree_text(&r.degree_set),
                opt(r.downs_bound),
                r.minimal,
                r.wall_time_ms
            );
        }
        for s in &self.skipped {
            let _ = writeln!(out, "# skipped q={}: {}", s.q, s.reason);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,q,t,order,girth,degree_set,downs_bound,minimal,wall_time_ms\n");
        for r in &self.rows {
            let degrees: Vec<String> = r.degree_set.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:.3}",
                r.family,
                r.q,
                r.t.map_or(String::new(), |t| t.to_string()),
                r.order,
                r.girth.map_or(String::new(), |g| g.to_string()),
                degrees.join(";"),
                r.downs_bound.map_or(String::new(), |b| b.to_string()),
                r.minimal,
                r.wall_time_ms
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rq_small_range() {
        let report = run_sweep(FamilyKind::Rq, 2, 6, Some(2)).unwrap();
        let qs: Vec<u32> = report.rows.iter().map(|r| r.q).collect();
        assert_eq!(qs, vec![2, 3, 4, 5]);
        assert!(report.all_minimal());
        assert_eq!(
            report.skipped,
            vec![Skipped {
                q: 6,
                reason: "q = 6 is not a prime power".into()
            }]
        );
        assert_eq!(report.to_csv().lines().count(), 5);
    }

    #[test]
    fn gt_rows_per_t() {
        let report = run_sweep(FamilyKind::Gt, 3, 4, None).unwrap();
        let ts: Vec<Option<u32>> = report.rows.iter().map(|r| r.t).collect();
        assert_eq!(ts, (0..=4).map(Some).collect::<Vec<_>>());
        assert_eq!(report.skipped.len(), 1);
    }

    #[test]
    fn empty_and_reversed_ranges() {
        let report = run_sweep(FamilyKind::R2Rm5, 8, 10, None).unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.skipped.len(), 3);
        assert!(matches!(
            run_sweep(FamilyKind::Bq, 5, 3, None),
            Err(SweepError::InvalidRange { .. })
        ));
    }

    #[test]
    fn surgery_certificate_notes() {
        let c = build(FamilyId::new(crate::families::Family::Cage67, 5)).unwrap();
        let cert = certify_construction(&c);
        assert!(cert.minimal);
        assert!(cert.structural_notes.is_empty());
        assert!(hypothesis_lines(&c)[0].contains("hypotheses hold"));
        assert_eq!(cert.witness_labels.as_ref().map(Vec::len), Some(5));
    }
}
