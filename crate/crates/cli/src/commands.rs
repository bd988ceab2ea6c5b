//! Command implementations. Each returns the process exit code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use lfunlab::constants::{self as cn, Constants};
use lfunlab::eval::convexity_check;
use lfunlab::identities::{
    plancherel_check, power_saving_check, repulsion_scan, repulsion_to_csv, EulerHadamard,
    RepulsionRecord, RepulsionSummary,
};
use lfunlab::instances::{instance_by_name, verify_weak_ramanujan, InstanceDescriptor, LFunctionInstance};
use lfunlab::meanvalue::{
    cosine_sum, halasz_ratio, lipschitz_defect, mertens_sums, select_phi, twist_phi,
};
use lfunlab::report::{merge_reports, reports_to_csv, IdentityReport, RunReport, REPORT_SCHEMA_VERSION};
use lfunlab::special::BumpKernel;
use lfunlab::zeros::{find_zeros, ZeroSet};
use lfunlab::{Complex64, Error};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{exit, CliError};
use crate::grid::Grid;

/// Rows carrying this flag record a grid point where no check applies.
pub const UNDEFINED_N: &str = "undefined-N";

pub struct Session {
    cfg: RunConfig,
    params: BTreeMap<String, String>,
}

impl Session {
    pub fn new(cfg: RunConfig) -> Self {
        let mut params = BTreeMap::new();
        params.insert("instance".to_string(), cfg.instance.clone());
        params.insert("constants.overridden".to_string(), cfg.overridden.join(","));
        Session { cfg, params }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) {
        self.params.insert(name.to_string(), value.to_string());
    }

    pub fn constants(&self) -> &Constants {
        &self.cfg.constants
    }

    pub fn instance(&self) -> Result<LFunctionInstance, CliError> {
        Ok(instance_by_name(&self.cfg.instance, self.cfg.delta_cache)?)
    }

    fn out_prefix(&self, default: &str) -> PathBuf {
        self.cfg
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("lfunlab-{default}")))
    }

    fn load_zeros(&self, explicit: Option<&Path>) -> Result<ZeroSet, CliError> {
        let path = explicit
            .map(Path::to_path_buf)
            .or_else(|| self.cfg.zeroset.clone())
            .unwrap_or_else(|| self.cfg.cached_zeroset(&self.cfg.instance));
        if !path.exists() {
            return Err(CliError::MissingZeroSet(path));
        }
        ZeroSet::load(&path).map_err(|e| CliError::Read {
            path,
            message: e.to_string(),
        })
    }

    fn run_report(&self, command: &str, instances: Vec<InstanceDescriptor>, reports: Vec<IdentityReport>) -> RunReport {
        let mut run = RunReport::new(command);
        run.constants = self.cfg.constants.as_map().clone();
        run.parameters = self.params.clone();
        run.instances = instances;
        run.reports = reports;
        run
    }
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Write {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn exit_for(reports: &[IdentityReport]) -> u8 {
    let failed = reports
        .iter()
        .any(|r| !r.pass && !r.has_flag(UNDEFINED_N));
    if failed {
        exit::CHECK_FAILED
    } else {
        exit::OK
    }
}

fn emit(session: &Session, run: &RunReport, default_prefix: &str) -> Result<u8, CliError> {
    let prefix = session.out_prefix(default_prefix);
    let (json, csv) = (with_suffix(&prefix, "json"), with_suffix(&prefix, "csv"));
    write_file(&json, &run.to_json()?)?;
    write_file(&csv, &reports_to_csv(&run.reports)?)?;
    let undefined = run.reports.iter().filter(|r| r.has_flag(UNDEFINED_N)).count();
    let failed = run.reports.iter().filter(|r| !r.pass).count() - undefined;
    println!(
        "{}: {} rows, {} failed, {} undefined; wrote {} and {}",
        run.command,
        run.reports.len(),
        failed,
        undefined,
        json.display(),
        csv.display()
    );
    Ok(exit_for(&run.reports))
}

pub fn zeros(session: &mut Session, tmax: f64) -> Result<u8, CliError> {
    let inst = session.instance()?;
    let set = find_zeros(&inst, tmax)?;
    let path = match &session.cfg.out {
        Some(p) => p.clone(),
        None => {
            std::fs::create_dir_all(&session.cfg.cache_dir).map_err(Error::from)?;
            session.cfg.cached_zeroset(inst.name())
        }
    };
    write_file(&path, &set.to_json()?)?;
    println!(
        "zeros: {} zeros of {} with 0 <= t <= {}, argument principle count {}; wrote {}",
        set.zeros.len(),
        inst.name(),
        tmax,
        set.argument_count,
        path.display()
    );
    Ok(exit::OK)
}

pub struct EulerHadamardArgs<'a> {
    pub sigma: &'a Grid,
    pub t: &'a Grid,
    pub log_x: f64,
    pub k: Option<f64>,
    pub big_k: Option<&'a Grid>,
    pub tail_height: f64,
    pub zeroset: Option<&'a Path>,
}

pub enum IdentityCmd<'a> {
    Plancherel { phi: &'a Grid, lambda: &'a Grid, t_param: &'a Grid },
    EulerHadamard(EulerHadamardArgs<'a>),
    PowerSaving { x: &'a Grid },
    Convexity { sigma: &'a Grid, t: &'a Grid },
}

pub fn identity(session: &mut Session, cmd: IdentityCmd) -> Result<u8, CliError> {
    let inst = session.instance()?;
    let c = session.constants().clone();
    let (name, reports) = match cmd {
        IdentityCmd::Plancherel { phi, lambda, t_param } => {
            session.param("phi", phi);
            session.param("lambda", lambda);
            session.param("T", t_param);
            let mut reports = Vec::new();
            for &p in phi.values() {
                for &l in lambda.values() {
                    for &t in t_param.values() {
                        reports.push(plancherel_check(&inst, p, l, t, &c)?);
                    }
                }
            }
            ("plancherel", reports)
        }
        IdentityCmd::EulerHadamard(a) => {
            let zeros = session.load_zeros(a.zeroset)?;
            let k = a.k.unwrap_or_else(|| c.get(cn::EH_K));
            session.param("sigma", a.sigma);
            session.param("t", a.t);
            session.param("X_log", a.log_x);
            session.param("k", k);
            session.param("tail_height", a.tail_height);
            if let Some(g) = a.big_k {
                session.param("K", g);
            }
            let points: Vec<Complex64> = a
                .sigma
                .values()
                .iter()
                .flat_map(|&s| a.t.values().iter().map(move |&t| Complex64::new(s, t)))
                .collect();
            let c = c.clone().with_overrides(&BTreeMap::from([(cn::EH_K.to_string(), k)]))?;
            let eh = EulerHadamard::new(&inst, &zeros, BumpKernel::shared(), a.log_x, &points, &c)?;
            let mut reports = Vec::new();
            for i in 0..eh.len() {
                reports.push(eh.full(i, a.tail_height)?);
                for &big_k in a.big_k.map(Grid::values).unwrap_or_default() {
                    reports.push(eh.truncated(i, big_k, k)?);
                }
            }
            ("euler-hadamard", reports)
        }
        IdentityCmd::PowerSaving { x } => {
            session.param("x", x);
            let reports = x
                .values()
                .iter()
                .map(|&x| power_saving_check(&inst, x, &c))
                .collect::<Result<Vec<_>, _>>()?;
            ("power-saving", reports)
        }
        IdentityCmd::Convexity { sigma, t } => {
            session.param("sigma", sigma);
            session.param("t", t);
            let ceiling = c.get(cn::CONVEXITY_CEILING);
            let mut reports = Vec::new();
            for &s in sigma.values() {
                for &t in t.values() {
                    reports.push(convexity_check(&inst, s, t, ceiling)?);
                }
            }
            ("convexity", reports)
        }
    };
    let run = session.run_report(&format!("identity {name}"), vec![inst.descriptor()], reports);
    emit(session, &run, &format!("identity-{name}"))
}

pub enum MeanValueCmd<'a> {
    Halasz { x: &'a Grid },
    Lipschitz { x: &'a Grid, omega: &'a Grid },
    Twist { y0: &'a Grid },
    Mertens { y0: &'a Grid },
    Cosine { tau: &'a Grid, x: &'a Grid },
    WeakRamanujan { x_max: f64 },
}

fn twist_row(inst: &LFunctionInstance, y0: f64, c: &Constants) -> Result<IdentityReport, CliError> {
    let t_cap = c.get(cn::T_CAP);
    let ceiling = c.get(cn::RATIO_CEILING);
    let row = match twist_phi(inst, y0, t_cap) {
        Ok(tw) => {
            let mut row = IdentityReport::new(
                "twist",
                inst.name(),
                Complex64::new(tw.defect, 0.0),
                Complex64::new(tw.rhs_budget, 0.0),
                tw.defect / tw.rhs_budget,
                ceiling,
            )
            .extra("N", tw.n)
            .extra("phi", tw.phi)
            .extra("M", tw.m)
            .extra("defect", tw.defect)
            .extra("partial_sum_abs", tw.partial_sum.norm());
            if let Some(r) = tw.phi_real_ratio {
                row = row.extra("phi_real_ratio", r);
            }
            if !tw.in_hypothesis {
                row = row.flag("outside-hypothesis");
            }
            row
        }
        Err(Error::UndefinedN(_)) => {
            let scan = select_phi(inst, y0, t_cap)?;
            IdentityReport::new("twist", inst.name(), Complex64::default(), Complex64::default(), f64::NAN, ceiling)
                .extra("phi", scan.t)
                .extra("partial_sum_abs", 0.0)
                .flag(UNDEFINED_N)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(row
        .input("y0", y0)
        .constant("t_cap", t_cap)
        .constant("ratio_ceiling", ceiling))
}

pub fn meanvalue(session: &mut Session, cmd: MeanValueCmd) -> Result<u8, CliError> {
    let c = session.constants().clone();
    let t_cap = c.get(cn::T_CAP);
    let ceiling = c.get(cn::RATIO_CEILING);
    // The cosine sum involves no L-function.
    let inst = match cmd {
        MeanValueCmd::Cosine { .. } => None,
        _ => Some(session.instance()?),
    };
    let inst_ref = || inst.as_ref().expect("instance built");
    let (name, reports) = match cmd {
        MeanValueCmd::Halasz { x } => {
            session.param("x", x);
            let reports = x
                .values()
                .iter()
                .map(|&x| halasz_ratio(inst_ref(), x, t_cap, ceiling))
                .collect::<Result<Vec<_>, _>>()?;
            ("halasz", reports)
        }
        MeanValueCmd::Lipschitz { x, omega } => {
            session.param("x", x);
            session.param("omega", omega);
            let mut reports = Vec::new();
            for &x in x.values() {
                for &w in omega.values() {
                    reports.push(lipschitz_defect(inst_ref(), x, w, t_cap, ceiling)?);
                }
            }
            ("lipschitz", reports)
        }
        MeanValueCmd::Twist { y0 } => {
            session.param("y0", y0);
            let reports = y0
                .values()
                .iter()
                .map(|&y| twist_row(inst_ref(), y, &c))
                .collect::<Result<Vec<_>, _>>()?;
            ("twist", reports)
        }
        MeanValueCmd::Mertens { y0 } => {
            session.param("y0", y0);
            let inst = inst_ref();
            let kappa = inst.kappa() as f64;
            let mut reports = Vec::new();
            for &y in y0.values() {
                let m = mertens_sums(inst, y)?;
                reports.push(
                    IdentityReport::new(
                        "mertens",
                        inst.name(),
                        Complex64::new(m.sum_a2, 0.0),
                        Complex64::new(kappa * kappa * y.ln(), 0.0),
                        m.excess_a2.abs(),
                        ceiling,
                    )
                    .input("y0", y)
                    .constant("ratio_ceiling", ceiling)
                    .extra("excess_a2", m.excess_a2)
                    .extra("sum_plain", m.sum_plain)
                    .extra("excess_plain", m.excess_plain),
                );
            }
            ("mertens", reports)
        }
        MeanValueCmd::Cosine { tau, x } => {
            session.param("tau", tau);
            session.param("x", x);
            let (cc, slack) = (c.get(cn::COSINE_C), c.get(cn::COSINE_SLACK));
            let mut reports = Vec::new();
            for &t in tau.values() {
                for &x in x.values() {
                    reports.push(cosine_sum(t, x, cc, slack)?);
                }
            }
            ("cosine", reports)
        }
        MeanValueCmd::WeakRamanujan { x_max } => {
            session.param("x_max", x_max);
            let inst = inst_ref();
            let report = verify_weak_ramanujan(inst, x_max)?;
            let kappa2 = (inst.kappa() * inst.kappa()) as f64;
            let a0 = inst.a0();
            let reports = report
                .rows
                .iter()
                .map(|row| {
                    let log_ex = 1.0 + row.x.ln();
                    IdentityReport::new(
                        "weak-ramanujan",
                        inst.name(),
                        Complex64::new(row.d, 0.0),
                        Complex64::new(kappa2 + a0 / log_ex, 0.0),
                        row.a0_needed,
                        a0,
                    )
                    .input("x", row.x)
                    .extra("a0_measured", report.a0)
                })
                .collect();
            ("weak-ramanujan", reports)
        }
    };
    let instances = inst.iter().map(LFunctionInstance::descriptor).collect();
    let run = session.run_report(&format!("meanvalue {name}"), instances, reports);
    emit(session, &run, &format!("meanvalue-{name}"))
}

/// JSON form of a repulsion run: the records plus summary and manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepulsionRun {
    pub schema_version: u32,
    pub command: String,
    pub constants: BTreeMap<String, f64>,
    pub parameters: BTreeMap<String, String>,
    pub instances: Vec<InstanceDescriptor>,
    pub records: Vec<RepulsionRecord>,
    pub summary: RepulsionSummary,
}

pub fn repulsion(
    session: &mut Session,
    delta: f64,
    y0: &Grid,
    lambda: &Grid,
    zeroset: Option<&Path>,
) -> Result<u8, CliError> {
    let inst = session.instance()?;
    let zeros = session.load_zeros(zeroset)?;
    session.param("delta", delta);
    session.param("y0", y0);
    session.param("lambda", lambda);
    let (records, summary) = repulsion_scan(&inst, delta, y0.values(), lambda.values(), &zeros, session.constants())?;
    let run = RepulsionRun {
        schema_version: REPORT_SCHEMA_VERSION,
        command: "repulsion".to_string(),
        constants: session.constants().as_map().clone(),
        parameters: session.params.clone(),
        instances: vec![inst.descriptor()],
        records,
        summary,
    };
    let prefix = session.out_prefix("repulsion");
    let (json, csv) = (with_suffix(&prefix, "json"), with_suffix(&prefix, "csv"));
    write_file(&json, &serde_json::to_string_pretty(&run).map_err(Error::from)?)?;
    write_file(&csv, &repulsion_to_csv(&run.records)?)?;
    println!(
        "repulsion: {} records ({} in hypothesis, {} with undefined N), {} zeros in discs; wrote {} and {}",
        run.summary.records,
        run.summary.in_hypothesis,
        run.summary.undefined_n,
        run.summary.total_disc_count,
        json.display(),
        csv.display()
    );
    Ok(exit::OK)
}

pub fn report_merge(session: &mut Session, inputs: &[PathBuf]) -> Result<u8, CliError> {
    let runs = inputs
        .iter()
        .map(|p| {
            RunReport::read_json(p).map_err(|e| CliError::Read {
                path: p.clone(),
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let merged = merge_reports(&runs)?;
    emit(session, &merged, "merged")
}
