use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use smdecouple::design::{example_design, reference_u, reference_v, Design, ExampleDesign};
use smdecouple::freq::{
    bode_export, bound_curve, crossovers_hz, curves_csv, essential_bound_check, performance_check_original,
    phase_margin_deg, sigma_curve, FrequencyGrid,
};
use smdecouple::io::{
    parse_json, polymatrix_from_json, polymatrix_to_json, ratfunc_from_json, tfm_from_json, tfm_to_json,
    to_json_string,
};
use smdecouple::loops::gang_of_six;
use smdecouple::polymat::{smith_mcmillan, PolyMatrix, SmDecomposition};
use smdecouple::sim::{step_response_all, time_grid};
use smdecouple::stability::check_internal_stability;
use smdecouple::tfm::{properness_min_reldeg, TransferMatrix};

use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_json(&text)?)
}

fn read_tfm(path: &Path) -> Result<TransferMatrix> {
    Ok(tfm_from_json(&read_json(path)?)?)
}

fn read_polymatrix(path: &Path) -> Result<PolyMatrix> {
    Ok(polymatrix_from_json(&read_json(path)?)?)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

fn write_decomposition(dir: &Path, p: &TransferMatrix, dec: &SmDecomposition) -> Result<bool> {
    let cert = dec.certify(p)?;
    write(&dir.join("U.json"), &to_json_string(&polymatrix_to_json(dec.u())))?;
    write(&dir.join("V.json"), &to_json_string(&polymatrix_to_json(dec.v())))?;
    write(&dir.join("psm.json"), &to_json_string(&tfm_to_json(&dec.psm())))?;
    let cert_json = serde_json::to_value(&cert).expect("certificate serializes");
    write(&dir.join("certificate.json"), &to_json_string(&cert_json))?;
    Ok(cert.is_valid())
}

pub fn smith(plant: &Path, out: &Path) -> Result<bool> {
    let p = read_tfm(plant)?;
    let dec = smith_mcmillan(&p)?;
    create_dir(out)?;
    let ok = write_decomposition(out, &p, &dec)?;
    print!("{}", to_json_string(&tfm_to_json(&dec.psm())));
    Ok(ok)
}

pub fn stability(plant: &Path, controller: &Path, pole_tol: f64, out: Option<&Path>) -> Result<bool> {
    let p = read_tfm(plant)?;
    let c = read_tfm(controller)?;
    let report = check_internal_stability(&p, &c, pole_tol)?;
    let text = to_json_string(&report.to_json());
    match out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(report.is_stable())
}

pub struct PerfJob<'a> {
    pub plant: &'a Path,
    pub controller: &'a Path,
    pub weight: &'a Path,
    pub complementary: bool,
    pub essential: bool,
    pub transforms: Option<(&'a Path, &'a Path)>,
    pub grid: FrequencyGrid,
    pub out: Option<&'a Path>,
}

pub fn perf(job: &PerfJob) -> Result<bool> {
    let p = read_tfm(job.plant)?;
    let c = read_tfm(job.controller)?;
    let w = ratfunc_from_json(&read_json(job.weight)?)?;
    let name = if job.complementary { "T" } else { "S" };
    let grid = &job.grid;
    let (pass, summary, csv) = if job.essential {
        let dec = match job.transforms {
            Some((u, v)) => SmDecomposition::from_transforms(&p, read_polymatrix(u)?, read_polymatrix(v)?)?,
            None => smith_mcmillan(&p)?,
        };
        // C^SM = V^-1 C U^-1
        let vi = TransferMatrix::from(&dec.v().unimodular_inverse()?);
        let ui = TransferMatrix::from(&dec.u().unimodular_inverse()?);
        let csm = vi.mul(&c)?.mul(&ui)?;
        let ess = gang_of_six(&dec.psm(), &csm)?;
        let m = if job.complementary { &ess.t } else { &ess.s };
        let chk = essential_bound_check(m, &w, dec.u(), grid)?;
        let hz = grid.hz();
        let violations: Vec<f64> = chk.violations().iter().map(|&k| hz[k]).collect();
        let summary = json!({
            "bound": "essential",
            "sensitivity": name,
            "pass": chk.pass,
            "violations": violations.len(),
            "first_violation_hz": violations.first(),
        });
        let csv = curves_csv(grid, &[(&format!("sigma_{name}sm"), &chk.lhs.values), ("bound", &chk.rhs.values)]);
        (chk.pass, summary, csv)
    } else {
        let loops = gang_of_six(&p, &c)?;
        let m = if job.complementary { &loops.t } else { &loops.s };
        let chk = performance_check_original(m, &w, grid)?;
        let summary = json!({
            "bound": "original",
            "sensitivity": name,
            "pass": chk.pass,
            "worst_margin": chk.worst_margin,
            "worst_freq_hz": chk.worst_omega / (2.0 * std::f64::consts::PI),
        });
        let csv = curves_csv(grid, &[(&format!("sigma_w{name}"), &chk.curve.values)]);
        (chk.pass, summary, csv)
    };
    if let Some(path) = job.out {
        write(path, &csv)?;
    }
    print!("{}", to_json_string(&summary));
    Ok(pass)
}

fn design_artifacts(dir: &Path, ex: &ExampleDesign, grid: &FrequencyGrid, pole_tol: f64) -> Result<(bool, Value)> {
    create_dir(dir)?;
    write(&dir.join("Csm.json"), &to_json_string(&tfm_to_json(&ex.csm)))?;
    write(&dir.join("C.json"), &to_json_string(&tfm_to_json(&ex.controller)))?;

    let report = check_internal_stability(&ex.plant, &ex.controller, pole_tol)?;
    write(&dir.join("stability.json"), &to_json_string(&report.to_json()))?;

    let gains = ex.essential_loop_gains();
    write(&dir.join("bode_Lsm.csv"), &bode_export(&TransferMatrix::diag(gains.clone()), grid)?)?;
    let t = ex.original_loops()?.t;
    write(&dir.join("bode_T.csv"), &bode_export(&t, grid)?)?;

    let mut loops = Vec::new();
    for l in &gains {
        loops.push(json!({
            "crossovers_hz": crossovers_hz(l, grid)?,
            "phase_margin_deg": phase_margin_deg(l, grid)?,
        }));
    }
    let mut peaks = Map::new();
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            let peak = sigma_curve(&TransferMatrix::scalar(t.get(i, j).clone()), grid)?.max();
            peaks.insert(format!("{}_{}", i + 1, j + 1), json!(peak));
        }
    }

    let stable = report.is_stable();
    if stable {
        let times = time_grid(10.0, 1001)?;
        write(&dir.join("step.csv"), &step_response_all(&t, &times)?.to_csv())?;
    }
    let summary = json!({
        "internally_stable": stable,
        "essential_loops": loops,
        "t_peak_magnitude": peaks,
        "t12_identically_zero": t.get(0, 1).is_zero(),
    });
    Ok((stable, summary))
}

pub fn example(outdir: &Path, grid: &FrequencyGrid, pole_tol: f64) -> Result<bool> {
    create_dir(outdir)?;
    let d1 = example_design(Design::One)?;
    write(&outdir.join("P.json"), &to_json_string(&tfm_to_json(&d1.plant)))?;
    let certified = write_decomposition(outdir, &d1.plant, &d1.decomposition)?;

    let w = smdecouple::polyrat::RatFunc::constant(smdecouple::polyrat::rat(4, 5));
    let bound = bound_curve(&w, &reference_u(), grid)?;
    write(&outdir.join("bound.csv"), &curves_csv(grid, &[("bound", &bound.values)]))?;

    let (s1, j1) = design_artifacts(&outdir.join("design1"), &d1, grid, pole_tol)?;
    let d2 = example_design(Design::Two)?;
    let (s2, j2) = design_artifacts(&outdir.join("design2"), &d2, grid, pole_tol)?;

    let summary = json!({
        "certificate_valid": certified,
        "properness_min_reldeg": properness_min_reldeg(&reference_u(), &reference_v())?,
        "bound_at_lowest_freq": bound.values[0],
        "design1": j1,
        "design2": j2,
    });
    let text = to_json_string(&summary);
    write(&outdir.join("summary.json"), &text)?;
    print!("{text}");
    Ok(certified && s1 && s2)
}
