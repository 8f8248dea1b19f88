use std::fmt::Write;
use std::path::Path;

use nbsd::interval::format_real;
use nbsd::sim::CSV_HEADER;
use nbsd::{
    curve_bands, fit_competitor, fit_neutro, neutro_gof, run_simulation, time_grid, Criteria, Dataset, FitReport,
    GofResult, Interval, ModelKind, NbsParams, NeutroSample, Result, SimConfig,
};
use serde::Serialize;

use crate::{Format, SearchArgs};

fn load(file: &Path) -> Result<NeutroSample> {
    Dataset::read(file)?.to_sample()
}

fn criteria(search: &SearchArgs) -> Criteria {
    if search.paper_compat_bic {
        Criteria::PAPER_COMPAT
    } else {
        Criteria::STANDARD
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn push_iv(fields: &mut Vec<String>, iv: Interval) {
    fields.push(format_real(iv.lo()));
    fields.push(format_real(iv.hi()));
}

const FIT_HEADER: &str = "model,n,alpha_hat_lo,alpha_hat_hi,beta_hat_lo,beta_hat_hi,\
loglik_lo,loglik_hi,aic_lo,aic_hi,bic_lo,bic_hi";

fn fit_fields(r: &FitReport) -> Vec<String> {
    let mut f = vec![r.model.tag().to_string(), r.n.to_string()];
    for iv in [r.alpha_hat, r.beta_hat, r.loglik, r.aic, r.bic] {
        push_iv(&mut f, iv);
    }
    f
}

const GOF_HEADER: &str = "ks_star_lo,ks_star_hi,p_value_lo,p_value_hi,mc_reps,seed";

fn gof_fields(g: &GofResult) -> Vec<String> {
    let mut f = Vec::new();
    push_iv(&mut f, g.ks_star);
    push_iv(&mut f, g.p_value);
    f.push(g.mc_reps.to_string());
    f.push(g.seed.to_string());
    f
}

fn warn_clamped(g: &GofResult, kind: ModelKind) {
    if g.clamped > 0 {
        eprintln!(
            "warning: {kind}: {} fitted CDF values were clamped away from 0 or 1",
            g.clamped
        );
    }
}

pub fn fit(file: &Path, model: ModelKind, search: &SearchArgs, format: Format) -> Result<String> {
    let d = load(file)?;
    let strategy = search.strategy.resolve(d.nondegenerate(), search.seed);
    let report = fit_neutro(&d, model, strategy, criteria(search))?;
    Ok(match format {
        Format::Json => json(&report),
        Format::Csv => format!("{FIT_HEADER}\n{}\n", fit_fields(&report).join(",")),
    })
}

pub fn gof(file: &Path, model: ModelKind, reps: usize, seed: u64, format: Format) -> Result<String> {
    let d = load(file)?;
    let g = neutro_gof(&d, model, reps, seed)?;
    warn_clamped(&g, model);
    Ok(match format {
        Format::Json => json(&g),
        Format::Csv => format!("model,{GOF_HEADER}\n{},{}\n", model.tag(), gof_fields(&g).join(",")),
    })
}

#[derive(Serialize)]
struct CompareRow {
    fit: FitReport,
    gof: GofResult,
}

pub fn compare(file: &Path, search: &SearchArgs, reps: usize, format: Format) -> Result<String> {
    let d = load(file)?;
    let strategy = search.strategy.resolve(d.nondegenerate(), search.seed);
    let mut rows = Vec::new();
    for kind in ModelKind::ALL {
        let (fit, gof) = fit_competitor(&d, kind, strategy, criteria(search), reps, search.seed)?;
        warn_clamped(&gof, kind);
        rows.push(CompareRow { fit, gof });
    }
    Ok(match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = format!("{FIT_HEADER},{GOF_HEADER}\n");
            for r in &rows {
                let mut f = fit_fields(&r.fit);
                f.extend(gof_fields(&r.gof));
                writeln!(out, "{}", f.join(",")).unwrap();
            }
            out
        }
    })
}

pub fn curves(alpha: Interval, beta: Interval, t_min: f64, t_max: f64, points: usize, format: Format) -> Result<String> {
    let params = NbsParams::new(alpha, beta)?;
    let rows = curve_bands(&params, &time_grid(t_min, t_max, points)?)?;
    Ok(match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = String::from("t,f_lo,f_hi,F_lo,F_hi,h_lo,h_hi\n");
            for r in &rows {
                let mut f = vec![format_real(r.t)];
                for iv in [r.pdf, r.cdf, r.hazard] {
                    push_iv(&mut f, iv);
                }
                writeln!(out, "{}", f.join(",")).unwrap();
            }
            out
        }
    })
}

#[derive(Serialize)]
struct SimRow {
    config: SimConfig,
    summary: nbsd::SimSummary,
}

pub fn simulate(
    alpha: f64,
    beta: f64,
    sizes: &[usize],
    epss: &[f64],
    reps: usize,
    seed: u64,
    format: Format,
) -> Result<String> {
    let mut rows = Vec::new();
    for &eps in epss {
        for &n in sizes {
            let config = SimConfig {
                alpha_true: alpha,
                beta_true: beta,
                n,
                eps,
                reps,
                seed,
            };
            let summary = run_simulation(&config)?;
            if summary.failures > 0 || summary.redraws > 0 {
                eprintln!(
                    "note: eps {eps}, n {n}: {} failed replicates, {} redrawn observations",
                    summary.failures, summary.redraws
                );
            }
            rows.push(SimRow { config, summary });
        }
    }
    Ok(match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            for r in &rows {
                writeln!(out, "{}", r.summary.csv_row(&r.config)).unwrap();
            }
            out
        }
    })
}
