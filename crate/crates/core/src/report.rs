//! One structured document per CLI run.
//!
//! Serialization is deterministic: maps are ordered and wall-clock timings
//! are only included when asked for, so identical inputs give identical bytes.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::complex::{order_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::FieldParams;
use crate::filtration::{choose_pivot, degenerate_pivot, verify_filtration, FiltrationReport};
use crate::homology::{
    cohen_macaulay_check, reduced_homology, verdict_from_report, CmReport, HomologyReport,
    Pi1Status, SphericityVerdict,
};
use crate::linalg::Subspace;
use crate::phan::io::family_digest;
use crate::phan::{vertices, BoundVerdict, PhanFamily};
use crate::verify::SuiteReport;

pub const REPORT_SCHEMA: &str = "phan-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
    NotRun,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub sphericity: Verdict,
    pub pi1: Verdict,
    pub cohen_macaulay: Verdict,
    pub filtration: Verdict,
    pub lemma_suites: Verdict,
    /// `fail` if any verdict fails; an unknown fundamental group does not fail a run
    pub overall: Verdict,
}

impl Default for Verdicts {
    fn default() -> Self {
        Verdicts {
            sphericity: Verdict::NotRun,
            pi1: Verdict::NotRun,
            cohen_macaulay: Verdict::NotRun,
            filtration: Verdict::NotRun,
            lemma_suites: Verdict::NotRun,
            overall: Verdict::NotRun,
        }
    }
}

impl Verdicts {
    fn settle(&mut self) {
        let all = [
            self.sphericity,
            self.pi1,
            self.cohen_macaulay,
            self.filtration,
            self.lemma_suites,
        ];
        self.overall = if all.contains(&Verdict::Fail) {
            Verdict::Fail
        } else if all.iter().any(|v| *v == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::NotRun
        };
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometryStats {
    pub vertices: usize,
    pub vertices_by_dimension: BTreeMap<usize, usize>,
    pub complex_dimension: isize,
    pub facets: usize,
    /// entry `i` counts `i`-simplices
    pub simplex_counts: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub spec_digest: Option<String>,
    pub field: Option<FieldParams>,
    pub dim: Option<usize>,
    pub m: Option<usize>,
    pub bound: Option<BoundVerdict>,
    /// the run went ahead although the bound fails
    pub forced: bool,
    pub stats: Option<GeometryStats>,
    pub homology: Option<HomologyReport>,
    pub sphericity: Option<SphericityVerdict>,
    pub cohen_macaulay: Option<CmReport>,
    pub filtration: Option<FiltrationReport>,
    pub lemma_suites: Option<Vec<SuiteReport>>,
    pub verdicts: Verdicts,
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            schema: REPORT_SCHEMA.into(),
            command: command.into(),
            spec_digest: None,
            field: None,
            dim: None,
            m: None,
            bound: None,
            forced: false,
            stats: None,
            homology: None,
            sphericity: None,
            cohen_macaulay: None,
            filtration: None,
            lemma_suites: None,
            verdicts: Verdicts::default(),
            timings_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn passed(&self) -> bool {
        self.verdicts.overall != Verdict::Fail
    }

    /// A few lines for standard output.
    pub fn summary(&self) -> String {
        let mut out = Vec::new();
        out.push(format!("command: {}", self.command));
        if let Some(d) = &self.spec_digest {
            out.push(format!("spec digest: {d}"));
        }
        if let Some(b) = &self.bound {
            let forced = if self.forced { " (forced)" } else { "" };
            out.push(format!("bound: {}{forced}", b.describe()));
        }
        if let Some(s) = &self.stats {
            out.push(format!(
                "geometry: {} vertices {:?} by dimension, simplices {:?}",
                s.vertices, s.vertices_by_dimension, s.simplex_counts
            ));
        }
        if let Some(h) = &self.homology {
            let torsion: Vec<Vec<String>> = h
                .torsion
                .iter()
                .map(|t| t.iter().map(ToString::to_string).collect())
                .collect();
            out.push(format!(
                "reduced betti (from degree -1): {:?}, torsion {:?}",
                h.reduced_betti, torsion
            ));
        }
        if let Some(v) = &self.sphericity {
            out.push(format!(
                "sphericity in dimension {}: {} ({} spheres, pi1 {:?})",
                v.target_dimension, v.spherical, v.sphere_count, v.pi1
            ));
        }
        if let Some(c) = &self.cohen_macaulay {
            out.push(format!(
                "cohen-macaulay: {} ({} simplices, {} failures)",
                c.passed,
                c.simplices_checked,
                c.failures.len()
            ));
        }
        if let Some(fr) = &self.filtration {
            out.push(format!(
                "filtration pivot {} (valid: {})",
                fr.pivot, fr.pivot_valid
            ));
            out.push(format!(
                "  Y_0: {} vertices, acyclic {}",
                fr.y0.size, fr.y0.acyclic
            ));
            for s in &fr.stages {
                out.push(format!(
                    "  stage {}: {} added, pairwise {}, betti {} -> {} (+{}), passed {}",
                    s.stage,
                    s.added,
                    s.pairwise_in_base,
                    s.betti_before,
                    s.betti_after,
                    s.intersection_sum,
                    s.passed
                ));
                for v in s.vertices.iter().filter(|v| !v.passed) {
                    out.push(format!("    {}: {}", v.vertex, v.witnesses.join("; ")));
                }
            }
            out.push(format!(
                "  spheres predicted {} direct {}",
                fr.predicted_sphere_count, fr.direct_sphere_count
            ));
        }
        if let Some(suites) = &self.lemma_suites {
            for s in suites {
                out.push(format!(
                    "suite {}: {} instances, {} failures {:?}",
                    s.name,
                    s.instances,
                    s.failures.len(),
                    s.counters
                ));
                for w in s.failures.iter().take(5) {
                    out.push(format!("  {w}"));
                }
            }
        }
        out.push(format!("verdict: {:?}", self.verdicts.overall).to_lowercase());
        out.join("\n")
    }
}

/// Runs the pipelines for one family and collects everything into a report.
pub struct Pipeline {
    family: PhanFamily,
    report: RunReport,
    gamma: Vec<Subspace>,
    complex: SimplicialComplex,
    timings: Option<BTreeMap<String, u128>>,
}

impl Pipeline {
    /// Builds the geometry; refuses when the bound fails unless `force` is set.
    pub fn new(command: &str, family: PhanFamily, force: bool, timings: bool) -> Result<Self> {
        let bound = family.bound();
        if !bound.satisfied && !force {
            return Err(Error::BoundViolated(bound.describe()));
        }
        let mut report = RunReport::new(command);
        report.spec_digest = Some(family_digest(&family));
        report.field = Some(family.field().params());
        report.dim = Some(family.dim());
        report.m = Some(family.m());
        report.forced = !bound.satisfied;
        report.bound = Some(bound);
        let mut timings = timings.then(BTreeMap::new);
        let start = Instant::now();
        let vs = vertices(&family);
        let counts = vs.counts_by_dimension();
        let gamma = vs.into_vertices();
        let complex = order_complex(family.field(), &gamma);
        if let Some(t) = timings.as_mut() {
            t.insert("build".into(), start.elapsed().as_millis());
        }
        report.stats = Some(GeometryStats {
            vertices: gamma.len(),
            vertices_by_dimension: counts,
            complex_dimension: complex.dim(),
            facets: complex.facets().len(),
            simplex_counts: complex.face_counts(),
        });
        Ok(Pipeline {
            family,
            report,
            gamma,
            complex,
            timings,
        })
    }

    pub fn family(&self) -> &PhanFamily {
        &self.family
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.gamma
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    fn timed<T>(&mut self, key: &str, run: impl FnOnce(&Self) -> T) -> T {
        let start = Instant::now();
        let out = run(self);
        if let Some(t) = self.timings.as_mut() {
            t.insert(key.into(), start.elapsed().as_millis());
        }
        out
    }

    /// Homology and sphericity in dimension `d` (default `n - 1`); sphericity
    /// passes only with at least one sphere.
    pub fn homology(&mut self, d: Option<isize>, pi1: bool) {
        let d = d.unwrap_or(self.family.n() as isize - 1);
        let (h, v) = self.timed("homology", |s| {
            let h = reduced_homology(&s.complex);
            let v = verdict_from_report(&s.complex, &h, d, pi1);
            (h, v)
        });
        self.report.verdicts.sphericity = Verdict::from_bool(v.spherical && v.sphere_count >= 1);
        self.report.verdicts.pi1 = match v.pi1 {
            Pi1Status::Trivial => Verdict::Pass,
            Pi1Status::Unknown => Verdict::Unknown,
            Pi1Status::NotApplicable | Pi1Status::NotRequested => Verdict::NotRun,
        };
        self.report.homology = Some(h);
        self.report.sphericity = Some(v);
    }

    pub fn cohen_macaulay(&mut self) -> Result<()> {
        let cm = self.timed("cohen_macaulay", |s| cohen_macaulay_check(&s.complex))?;
        self.report.verdicts.cohen_macaulay = Verdict::from_bool(cm.passed);
        self.report.cohen_macaulay = Some(cm);
        Ok(())
    }

    /// The filtration from the canonical pivot, or from an isotropic point
    /// when `negative_control` is set.
    pub fn filtration(&mut self, negative_control: bool) -> Result<()> {
        let p = if negative_control {
            degenerate_pivot(&self.family)
                .ok_or_else(|| Error::NotFound("every point is non-isotropic".into()))?
        } else {
            choose_pivot(&self.family)?
        };
        let fr = self.timed("filtration", |s| verify_filtration(&s.family, &p))?;
        self.report.verdicts.filtration = Verdict::from_bool(fr.passed);
        self.report.filtration = Some(fr);
        Ok(())
    }

    pub fn finish(mut self) -> RunReport {
        self.report.timings_ms = self.timings;
        self.report.verdicts.settle();
        self.report
    }
}

/// Report for a `lemma-tests` run.
pub fn suites_report(suites: Vec<SuiteReport>) -> RunReport {
    let mut report = RunReport::new("lemma-tests");
    report.verdicts.lemma_suites = Verdict::from_bool(suites.iter().all(|s| s.passed));
    report.lemma_suites = Some(suites);
    report.verdicts.settle();
    report
}
