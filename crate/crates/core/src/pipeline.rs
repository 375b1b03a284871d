//! Run configuration, the series report and the exhaustive verifier.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{self, BlockSummary, GroupoidSummary};
use crate::curtis::{self, CurtisTable, GgShadow, OrbitBijectionReport, TorusEntry};
use crate::endoscopy::{self, EndoscopySummary};
use crate::error::{Error, Result};
use crate::poly::{rat, Poly};
use crate::rationality::{self, FrobeniusDatum, InnerForm, PrimeTables};
use crate::rootdata::{DatumFile, FundamentalGroupMode, RootDatum, RootDatumError};
use crate::soergel::{self, SoergelCertificate};
use crate::sspoints::{self, CoefficientMode, SemisimplePoint};
use crate::weyl::WeylGroup;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    #[default]
    Qlbar,
    Zlbar,
}

/// Everything a run depends on. Serializes back to an equivalent document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Catalogue name (`GL2`, `sc:B3`, ...) or path to a datum JSON file.
    pub datum: String,
    #[serde(default = "default_q")]
    pub q: u64,
    /// `id`, `swap` or a JSON integer matrix.
    #[serde(default = "default_tau")]
    pub tau: String,
    #[serde(default)]
    pub coefficients: Coefficients,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(default = "default_order_bound")]
    pub order_bound: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<usize>>,
}

fn default_q() -> u64 {
    3
}

fn default_tau() -> String {
    "id".into()
}

fn default_order_bound() -> u64 {
    6
}

fn default_seed() -> u64 {
    0x5eed
}

impl RunConfig {
    pub fn new(datum: &str) -> Self {
        RunConfig {
            datum: datum.to_string(),
            q: default_q(),
            tau: default_tau(),
            coefficients: Coefficients::Qlbar,
            ell: None,
            order_bound: default_order_bound(),
            seed: default_seed(),
            out: None,
            point: None,
            word: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn mode(&self) -> Result<CoefficientMode> {
        let q = rationality::parse_q(&self.q.to_string())?;
        let p = crate::lattice::prime_power(q).map(|(p, _)| p).expect("checked prime power");
        match (self.coefficients, self.ell) {
            (Coefficients::Qlbar, _) => Ok(CoefficientMode::Qlbar { p }),
            (Coefficients::Zlbar, Some(ell)) => {
                if !crate::lattice::is_prime(ell) || ell == p {
                    return Err(Error::Config(format!("ell = {ell} must be a prime different from p = {p}")));
                }
                Ok(CoefficientMode::Zlbar { p, ell })
            }
            (Coefficients::Zlbar, None) => Err(Error::Config("zlbar coefficients need ell".into())),
        }
    }

    pub fn parsed_point(&self, rd: &RootDatum) -> Result<SemisimplePoint> {
        match &self.point {
            None => Ok(SemisimplePoint::zero(rd.rank())),
            Some(coords) => {
                let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
                let s = SemisimplePoint::parse(&refs)?;
                if s.rank() != rd.rank() {
                    return Err(sspoints::PointError::Dimension { got: s.rank(), expected: rd.rank() }.into());
                }
                self.mode()?.admits(s.order())?;
                Ok(s)
            }
        }
    }
}

/// Resolves a catalogue name, falling back to a datum file on disk.
pub fn load_datum(spec: &str) -> Result<RootDatum> {
    match RootDatum::by_name(spec) {
        Ok(rd) => Ok(rd),
        Err(RootDatumError::UnknownName(n)) => {
            let path = Path::new(spec);
            if !path.exists() {
                return Err(RootDatumError::UnknownName(n).into());
            }
            let text = std::fs::read_to_string(path)?;
            let file: DatumFile =
                serde_json::from_str(&text).map_err(|e| RootDatumError::Invalid(format!("{spec}: {e}")))?;
            Ok(RootDatum::from_file(&file)?)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DatumSummary {
    pub name: String,
    pub rank: usize,
    pub semisimple_rank: usize,
    pub types: String,
    pub dual_types: String,
    pub num_roots: usize,
    pub weyl_order: usize,
    pub fundamental_group: String,
    pub dual_derived_fundamental_group: String,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
}

pub fn datum_summary(rd: &RootDatum, w: &WeylGroup) -> Result<DatumSummary> {
    let c = rd.classify()?;
    Ok(DatumSummary {
        name: rd.name().to_string(),
        rank: rd.rank(),
        semisimple_rank: c.semisimple_rank(),
        types: c.label(),
        dual_types: rd.dual().classify()?.label(),
        num_roots: rd.num_roots(),
        weyl_order: w.order(),
        fundamental_group: rd.fundamental_group(FundamentalGroupMode::Full).to_string(),
        dual_derived_fundamental_group: rd.dual().fundamental_group(FundamentalGroupMode::Derived).to_string(),
        simple_roots: rd.simple_roots(),
        simple_coroots: rd.simple_coroots(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusSummary {
    pub q: u64,
    pub p: u64,
    pub tau: Vec<Vec<i64>>,
    pub tau_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSummary {
    #[serde(flatten)]
    pub tables: PrimeTables,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_l: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCurtis {
    /// Reduced word of the first `w` whose `Fix(wF)` meets the class.
    pub witness: Vec<usize>,
    /// Number of `w` whose fixed points meet the class.
    pub meeting_w: usize,
    /// Fixed points in the class, summed over `w`.
    pub image_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub representative: SemisimplePoint,
    pub size: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub merged: Vec<SemisimplePoint>,
    pub phi_s_type: String,
    pub gamma: String,
    pub endoscopic_type: String,
    pub rational_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1: Option<String>,
    pub inner_forms: Vec<InnerForm>,
    pub curtis: ClassCurtis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub geometric: usize,
    pub rational: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurtisSummary {
    pub injective: bool,
    pub commuting_square: bool,
    pub orbit_bijection: OrbitBijectionReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GgRow {
    pub word: Vec<usize>,
    #[serde(flatten)]
    pub shadow: GgShadow,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub config: RunConfig,
    pub datum: DatumSummary,
    pub primes: PrimeSummary,
    pub frobenius: FrobeniusSummary,
    pub mode: CoefficientMode,
    pub geometric_classes: Vec<ClassEntry>,
    pub totals: Totals,
    pub torus_table: Vec<TorusEntry>,
    pub gelfand_graev: Vec<GgRow>,
    pub curtis: CurtisSummary,
    pub soergel: SoergelCertificate,
}

impl SeriesReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Datum, Weyl group and Frobenius for a config.
pub fn setup(cfg: &RunConfig) -> Result<(RootDatum, WeylGroup, FrobeniusDatum)> {
    let rd = load_datum(&cfg.datum)?;
    let w = WeylGroup::enumerate(&rd)?;
    let q = rationality::parse_q(&cfg.q.to_string())?;
    let tau = rationality::parse_tau(&rd, &w, &cfg.tau)?;
    let fr = rationality::build_frobenius(&rd, &w, q, &tau)?;
    Ok((rd, w, fr))
}

fn type_label(rd: &RootDatum, delta: &[usize]) -> Result<String> {
    let types = rd.subdatum(delta)?.classify()?.types();
    Ok(if types.is_empty() { "1".into() } else { types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("x") })
}

pub fn run_report(cfg: &RunConfig) -> Result<SeriesReport> {
    let mode = cfg.mode()?;
    let (rd, w, fr) = setup(cfg)?;
    let datum = datum_summary(&rd, &w)?;
    let tables = rationality::prime_tables(&rd)?;
    let primes = PrimeSummary { condition_l: cfg.ell.map(|l| tables.condition_l(l)), ell: cfg.ell, tables };
    let frobenius = FrobeniusSummary { q: fr.q, p: fr.p, tau: fr.tau.row_vecs(), tau_order: fr.tau_order };

    let table: CurtisTable = curtis::curtis_spectral(&w, &fr)?;
    let qbar_index: BTreeMap<&SemisimplePoint, usize> = table.classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let classes = rationality::geometric_classes(&w, &fr, mode)?;
    let mut entries = Vec::with_capacity(classes.len());
    for c in &classes {
        let s = &c.representative;
        let stab = sspoints::stabilizer_data(&rd, &w, s)?;
        let endo = endoscopy::endoscopic_group(&rd, &w, &stab)?;
        endoscopy::check_duality(&w, &stab, &endo)?;
        let es = endo.summary(&rd);
        let rc = rationality::rational_classes(&rd, &w, &fr, s)?;
        let forms = rationality::inner_forms(&rd, &w, &fr, s)?;
        let qbar: Vec<usize> = if c.merged.is_empty() {
            vec![qbar_index[s]]
        } else {
            c.merged.iter().map(|m| qbar_index[m]).collect()
        };
        let mut meeting_w = 0;
        let mut image_points = 0;
        let mut witness = None;
        for row in &table.per_w_images {
            let n: usize = qbar.iter().map(|&i| row.images[i].len()).sum();
            if n > 0 {
                meeting_w += 1;
                image_points += n;
                witness.get_or_insert_with(|| row.word.clone());
            }
        }
        entries.push(ClassEntry {
            representative: s.clone(),
            size: c.members.len(),
            merged: c.merged.clone(),
            phi_s_type: type_label(&rd, &stab.delta_s)?,
            gamma: es.pi0,
            endoscopic_type: es.h_type,
            rational_count: rc.rational_count,
            h1: rc.h1_structure.map(|g| g.to_string()),
            inner_forms: forms,
            curtis: ClassCurtis { witness: witness.unwrap_or_default(), meeting_w, image_points },
        });
    }
    let totals = Totals { geometric: entries.len(), rational: entries.iter().map(|e| e.rational_count).sum() };

    let torus_table = curtis::torus_table(&w, &fr)?;
    let gelfand_graev = (0..w.order())
        .map(|x| Ok(GgRow { word: w.word(x).to_vec(), shadow: curtis::gg_restriction_shadow(&w, &fr, x)? }))
        .collect::<Result<Vec<_>>>()?;
    let orbit_bijection = curtis::x_orbit_bijection(&rd, &w, &fr, sspoints::DEFAULT_SEARCH_CAP)?;
    let curtis = CurtisSummary {
        injective: table.injectivity_certificate,
        commuting_square: table.commuting_square,
        orbit_bijection,
    };
    let soergel = soergel::certificate(&rd, &w, &SemisimplePoint::zero(rd.rank()))?;
    let mut config = cfg.clone();
    config.out = None;
    Ok(SeriesReport {
        config,
        datum,
        primes,
        frobenius,
        mode,
        geometric_classes: entries,
        totals,
        torus_table,
        gelfand_graev,
        curtis,
        soergel,
    })
}

/// Report JSON, read from and written to the cache directory when one is set.
pub fn cached_report_json(cfg: &RunConfig, cache_dir: Option<&Path>) -> Result<String> {
    let key = {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        let mut keyed = cfg.clone();
        keyed.out = None;
        keyed.to_json().hash(&mut h);
        format!("report-{:016x}.json", h.finish())
    };
    if let Some(dir) = cache_dir {
        let path = dir.join(&key);
        if let Ok(text) = std::fs::read_to_string(&path) {
            return Ok(text);
        }
    }
    let text = run_report(cfg)?.to_json();
    if let Some(dir) = cache_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(&key), &text)?;
    }
    Ok(text)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub datum: String,
    pub order_bound: u64,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Check {
    name: &'static str,
    cases: usize,
    failure: Option<(String, String)>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, cases: 0, failure: None }
    }

    fn record(&mut self, outcome: std::result::Result<(), String>, reproducer: impl FnOnce() -> String) {
        self.cases += 1;
        if let Err(e) = outcome {
            if self.failure.is_none() {
                self.failure = Some((e, reproducer()));
            }
        }
    }

    fn finish(self) -> CheckResult {
        let passed = self.failure.is_none();
        let (failure, reproducer) = match self.failure {
            Some((f, r)) => (Some(f), Some(r)),
            None => (None, None),
        };
        CheckResult { name: self.name.into(), passed, cases: self.cases, failure, reproducer }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Poly {
    let terms = rng.gen_range(1..6);
    (0..terms).fold(Poly::zero(nvars), |acc, _| {
        let mut e = vec![0u32; nvars];
        for _ in 0..rng.gen_range(0..=max_degree) {
            e[rng.gen_range(0..nvars)] += 1;
        }
        acc + Poly::monomial(e, rat(rng.gen_range(-5..=5)))
    })
}

/// Exhaustive invariant checks on all points up to the configured order.
pub fn verify(cfg: &RunConfig) -> VerifyReport {
    let mut checks = Vec::new();
    let datum_flag = format!("--datum {}", cfg.datum);
    let finish = |checks: Vec<CheckResult>| VerifyReport {
        datum: cfg.datum.clone(),
        order_bound: cfg.order_bound,
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    };

    let mut c = Check::new("datum");
    let loaded = load_datum(&cfg.datum).and_then(|rd| {
        rd.validate()?;
        if !rd.dual().dual().same_as(&rd) {
            return Err(Error::Config("dual is not an involution".into()));
        }
        let w = WeylGroup::enumerate(&rd)?;
        let degrees: u64 = rd.classify()?.types().iter().map(|t| t.weyl_order()).product();
        if degrees != w.order() as u64 || w.length(w.longest_element()) != rd.num_positive() {
            return Err(Error::Config("Weyl group order or longest length disagrees with the catalogue".into()));
        }
        Ok((rd, w))
    });
    let (rd, w) = match loaded {
        Ok(v) => {
            c.record(Ok(()), String::new);
            checks.push(c.finish());
            v
        }
        Err(e) => {
            c.record(Err(format!("{}: {e}", e.code())), || format!("dualgroup validate {datum_flag}"));
            checks.push(c.finish());
            return finish(checks);
        }
    };

    let mode = match cfg.mode() {
        Ok(m) => m,
        Err(e) => {
            let mut c = Check::new("config");
            c.record(Err(e.to_string()), || format!("dualgroup verify {datum_flag} --q {}", cfg.q));
            checks.push(c.finish());
            return finish(checks);
        }
    };
    let points = match sspoints::points_up_to_order(&rd, cfg.order_bound, mode) {
        Ok(p) => p,
        Err(e) => {
            let mut c = Check::new("points");
            c.record(Err(e.to_string()), || format!("dualgroup verify {datum_flag} --order-bound {}", cfg.order_bound));
            checks.push(c.finish());
            return finish(checks);
        }
    };
    let point_flag = |s: &SemisimplePoint| s.to_strings().join(",");

    let mut gamma = Check::new("gamma_bound");
    let mut duality = Check::new("endoscopic_duality");
    for s in &points {
        let repro = || format!("dualgroup endoscopy {datum_flag} --point {}", point_flag(s));
        match sspoints::stabilizer_data(&rd, &w, s) {
            Ok(stab) => {
                gamma.record(sspoints::check_gamma_bound(&stab, &rd).map(|_| ()).map_err(|e| e.to_string()), repro);
                let d = endoscopy::endoscopic_group(&rd, &w, &stab)
                    .and_then(|e| endoscopy::check_duality(&w, &stab, &e))
                    .map_err(|e| e.to_string());
                duality.record(d, repro);
            }
            Err(e) => gamma.record(Err(e.to_string()), repro),
        }
    }
    checks.push(gamma.finish());
    checks.push(duality.finish());

    let mut blocks_check = Check::new("block_lemma");
    for s in sspoints::orbit_representatives(&w, &points) {
        let r = blocks::build_groupoid(&rd, &w, &s).map(|_| ()).map_err(|e| e.to_string());
        blocks_check.record(r, || format!("dualgroup blocks {datum_flag} --point {}", point_flag(&s)));
    }
    checks.push(blocks_check.finish());

    let mut torus = Check::new("torus_counts");
    let mut curtis_check = Check::new("curtis_injectivity");
    match setup(cfg) {
        Ok((_, _, fr)) => {
            for x in 0..w.order() {
                let r = curtis::fixed_torus(&w, &fr, x).map(|_| ()).map_err(|e| e.to_string());
                torus.record(r, || format!("dualgroup torus {datum_flag} --q {} --tau {}", cfg.q, cfg.tau));
            }
            let r = curtis::curtis_spectral(&w, &fr).map(|_| ()).map_err(|e| e.to_string());
            curtis_check.record(r, || format!("dualgroup curtis {datum_flag} --q {} --tau {}", cfg.q, cfg.tau));
        }
        Err(e) => torus.record(Err(e.to_string()), || format!("dualgroup torus {datum_flag} --q {} --tau {}", cfg.q, cfg.tau)),
    }
    checks.push(torus.finish());
    checks.push(curtis_check.finish());

    let mut demazure = Check::new("demazure_calculus");
    let ring = soergel::GradedRing::new(&rd);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if rd.rank() > 0 {
        for case in 0..100 {
            let f = random_poly(&mut rng, rd.rank(), 6);
            let g = random_poly(&mut rng, rd.rank(), 6);
            for i in rd.simple_indices() {
                let r = (|| -> std::result::Result<(), String> {
                    let d = |h: &Poly| ring.demazure(i, h).map_err(|e| e.to_string());
                    if !d(&d(&f)?)?.is_zero() {
                        return Err(format!("d_{i}^2 f != 0 for f = {f}"));
                    }
                    let lhs = d(&(&f * &g))?;
                    let rhs = &d(&f)? * &g + &ring.reflect(i, &f) * &d(&g)?;
                    if lhs != rhs {
                        return Err(format!("twisted Leibniz fails for root {i}, f = {f}, g = {g}"));
                    }
                    Ok(())
                })();
                demazure.record(r, || format!("dualgroup verify {datum_flag} --seed {} (case {case})", cfg.seed));
            }
        }
    }
    checks.push(demazure.finish());

    let mut bs = Check::new("bott_samelson");
    let reps: BTreeSet<SemisimplePoint> = sspoints::orbit_representatives(&w, &points).into_iter().collect();
    for s in reps.iter().take(8) {
        for i in rd.simple_indices() {
            for j in rd.simple_indices() {
                let word = [i, j];
                let r = soergel::bs_word(&rd, &ring, &w, &word, s).map_err(|e| e.to_string()).and_then(|m| {
                    let k = soergel::fixing_count(&rd, &w, &word, s);
                    if m.rank() == 1 << k {
                        Ok(())
                    } else {
                        Err(format!("rank {} but {k} fixing letters", m.rank()))
                    }
                });
                bs.record(r, || {
                    format!("dualgroup soergel bs {datum_flag} --word {i},{j} --point {}", point_flag(s))
                });
            }
        }
    }
    checks.push(bs.finish());
    finish(checks)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlocksOutput {
    pub groupoid: GroupoidSummary,
    pub blocks: Vec<BlockSummary>,
}

pub fn blocks_output(rd: &RootDatum, w: &WeylGroup, s: &SemisimplePoint) -> Result<BlocksOutput> {
    let g = blocks::build_groupoid(rd, w, s)?;
    Ok(BlocksOutput { groupoid: g.summary(), blocks: g.blocks.iter().map(|(_, _, b)| b.summary(w)).collect() })
}

#[derive(Clone, Debug, Serialize)]
pub struct EndoscopyOutput {
    #[serde(flatten)]
    pub summary: EndoscopySummary,
    pub phi_s_type: String,
    pub gamma_bound: sspoints::GammaBound,
    pub duality_checked: bool,
}

pub fn endoscopy_output(rd: &RootDatum, w: &WeylGroup, s: &SemisimplePoint) -> Result<EndoscopyOutput> {
    let stab = sspoints::stabilizer_data(rd, w, s)?;
    let e = endoscopy::endoscopic_group(rd, w, &stab)?;
    endoscopy::check_duality(w, &stab, &e)?;
    Ok(EndoscopyOutput {
        summary: e.summary(rd),
        phi_s_type: type_label(rd, &stab.delta_s)?,
        gamma_bound: sspoints::check_gamma_bound(&stab, rd)?,
        duality_checked: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let mut cfg = RunConfig::new("SL2");
        cfg.coefficients = Coefficients::Zlbar;
        cfg.ell = Some(2);
        cfg.point = Some(vec!["1/2".into()]);
        let text = cfg.to_json();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
        let minimal = RunConfig::from_json(r#"{"datum": "GL2"}"#).unwrap();
        assert_eq!(minimal, RunConfig::new("GL2"));
        assert!(RunConfig::from_json(r#"{"datum": "GL2", "bogus": 1}"#).is_err());
    }

    #[test]
    fn gl2_report_counts() {
        let r = run_report(&RunConfig::new("GL2")).unwrap();
        assert_eq!(r.totals, Totals { geometric: 6, rational: 6 });
        assert!(r.geometric_classes.iter().all(|c| c.gamma == "1"));
    }

    #[test]
    fn sl2_report_counts() {
        let r = run_report(&RunConfig::new("SL2")).unwrap();
        assert_eq!(r.totals, Totals { geometric: 3, rational: 4 });
    }

    #[test]
    fn torus_report() {
        let mut cfg = RunConfig::new("T1");
        cfg.q = 2;
        let r = run_report(&cfg).unwrap();
        assert_eq!(r.totals.geometric, 1);
    }

    #[test]
    fn mode_errors() {
        let mut cfg = RunConfig::new("SL2");
        cfg.coefficients = Coefficients::Zlbar;
        assert_eq!(cfg.mode().unwrap_err().code(), "cli.config");
        cfg.q = 6;
        cfg.ell = Some(5);
        assert_eq!(cfg.mode().unwrap_err().code(), "rationality.q_not_prime_power");

        let rd = RootDatum::sl(2);
        let mut cfg = RunConfig::new("SL2");
        cfg.point = Some(vec!["1/3".into()]);
        assert_eq!(cfg.parsed_point(&rd).unwrap_err().code(), "sspoints.order_not_coprime");
        cfg.point = Some(vec!["1/2".into()]);
        assert!(cfg.parsed_point(&rd).is_ok());
        cfg.coefficients = Coefficients::Zlbar;
        cfg.ell = Some(2);
        assert_eq!(cfg.parsed_point(&rd).unwrap_err().code(), "sspoints.order_not_coprime");
    }

    #[test]
    fn verify_small() {
        let mut cfg = RunConfig::new("SL2");
        cfg.order_bound = 4;
        let r = verify(&cfg);
        assert!(r.passed, "{r:?}");
        let bad = verify(&RunConfig::new("/nonexistent/datum.json"));
        assert!(!bad.passed);
        assert!(bad.checks[0].reproducer.as_deref().unwrap().starts_with("dualgroup validate"));
    }
}
