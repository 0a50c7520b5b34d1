//! Central values `L(1/2, χ_{8d})` over odd squarefree `d`, where `8d` is the
//! discriminant of `Q(sqrt(2d))`.

use std::io::Write;

use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{domain, Result};
use crate::hurwitz::HurwitzEvaluator;
use crate::lfunc::{l_with_evaluator, QuadraticCharacter};
use crate::mpreal::{render_err, render_value, PrecisionContext};

/// Odd squarefree `d` with `1 ≤ d ≤ limit`, ascending.
pub fn enumerate_odd_squarefree(limit: u64) -> Vec<u64> {
    (1..=limit)
        .step_by(2)
        .filter(|&d| arith::is_squarefree(d as i64).expect("d ≥ 1"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub d: u64,
    pub disc: i64,
    pub l_value: String,
    pub err: String,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub limit: u64,
    pub total: u64,
    pub certified_nonzero: u64,
    pub undetermined: u64,
    /// `certified_nonzero / total` in lowest terms, e.g. `"810/810"`.
    pub proportion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub summary: SurveySummary,
    pub records: Vec<SurveyRecord>,
}

impl SurveyReport {
    pub fn proportion(&self) -> Rational {
        let s = &self.summary;
        if s.total == 0 {
            return Rational::new();
        }
        Rational::from((s.certified_nonzero, s.total))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }
}

fn evaluate(d: u64, eval: &HurwitzEvaluator, digits: u32) -> SurveyRecord {
    let disc = 8 * d as i64;
    let half = Rational::from((1, 2));
    let value = QuadraticCharacter::new(disc)
        .and_then(|chi| l_with_evaluator(&chi, eval, &half, false))
        .map(|(v, _)| v);
    match value {
        Ok(v) => SurveyRecord {
            d,
            disc,
            l_value: render_value(v.value(), digits),
            err: render_err(v.err()),
            certified: v.is_certified_nonzero(),
        },
        Err(_) => SurveyRecord {
            d,
            disc,
            l_value: "NaN".into(),
            err: "inf".into(),
            certified: false,
        },
    }
}

/// Evaluates `L(1/2, χ_{8d})` for every odd squarefree `d ≤ limit` on a pool
/// of `workers` threads. Records come back in ascending `d` regardless of
/// scheduling, so the report does not depend on `workers`.
pub fn run_survey(limit: u64, ctx: &PrecisionContext, workers: usize) -> Result<SurveyReport> {
    if limit == 0 {
        return domain("survey limit must be at least 1");
    }
    if workers == 0 {
        return domain("worker count must be at least 1");
    }
    if 8 * limit > crate::lfunc::MAX_MODULUS {
        return domain(format!("8·limit exceeds {}", crate::lfunc::MAX_MODULUS));
    }
    let ds = enumerate_odd_squarefree(limit);
    // One evaluator sized for the largest modulus serves every d.
    let guard = ((8 * limit) as f64).log10().ceil() as u32 + 2;
    let eval = HurwitzEvaluator::new(&Rational::from((1, 2)), &ctx.raised(guard))?;
    let digits = ctx.digits();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::error::Error::Domain(format!("thread pool: {e}")))?;
    let records: Vec<SurveyRecord> =
        pool.install(|| ds.par_iter().map(|&d| evaluate(d, &eval, digits)).collect());

    let certified = records.iter().filter(|r| r.certified).count() as u64;
    let total = records.len() as u64;
    let q = Rational::from((certified, total));
    Ok(SurveyReport {
        summary: SurveySummary {
            limit,
            total,
            certified_nonzero: certified,
            undetermined: total - certified,
            proportion: format!("{}/{}", q.numer(), q.denom()),
        },
        records,
    })
}
