//! Command implementations.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};
use strongconverse::capacity::{
    alpha_holevo, holevo_information, information_radius, strong_converse_exponent, ExponentOptions,
};
use strongconverse::divergence::{relative_entropy, sandwiched_renyi, AscentBudget};
use strongconverse::io::{eb_summary, load_state, ChannelSource};
use strongconverse::protocol::{
    random_protocol, simulate, verify_strong_converse_bound, verify_weak_converse_chain, DecoderStrategy,
    FeedbackProtocol, ProtocolDims,
};
use strongconverse::state::PPT_TOLERANCE;
use strongconverse::verify::{run_suite, Suite, SuiteOptions};
use strongconverse::Error;

use crate::args::{Command, Common, Decoder};
use crate::report::{CliError, Outcome};

/// Allowed `|χ − K|` beyond the optimizers' own gap estimates.
const MINIMAX_TOLERANCE: f64 = 2e-4;
/// Allowed decrease of `χ̃_α` along the grid beyond the gap estimate.
const MONOTONE_TOLERANCE: f64 = 1e-6;

/// 15 significant digits.
fn num(v: f64) -> String {
    format!("{v:.14e}")
}

fn budget(c: &Common) -> AscentBudget {
    AscentBudget {
        restarts: c.budget as usize,
        seed: c.seed,
        ..AscentBudget::default()
    }
}

fn to_value(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

fn reject_unit_order(alpha: f64) -> Result<(), CliError> {
    if alpha == 1.0 {
        return Err(CliError::Usage(
            "α = 1 is the relative entropy; omit --alpha to compute it".into(),
        ));
    }
    Ok(())
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Divergence {
            rho,
            sigma,
            alpha,
            grid,
            ..
        } => divergence(rho, sigma, *alpha, grid.as_deref()),
        Command::Capacity { channel, alpha, common } => capacity(channel, *alpha, common),
        Command::Exponent {
            channel,
            rate,
            grid,
            common,
        } => exponent(channel, *rate, grid.as_deref(), common),
        Command::EbCheck { channel, .. } => eb_check(channel),
        Command::Simulate {
            channel,
            protocol,
            rounds,
            messages,
            decoder,
            common,
        } => simulate_cmd(channel, protocol.as_deref(), *rounds, *messages, *decoder, common),
        Command::Verify { suite, common } => verify(suite, common),
    }
}

fn divergence(rho: &str, sigma: &str, alpha: Option<f64>, grid: Option<&[f64]>) -> Result<Outcome, CliError> {
    let orders: Vec<Option<f64>> = match (alpha, grid) {
        (Some(a), _) => vec![Some(a)],
        (None, Some(g)) if !g.is_empty() => g.iter().copied().map(Some).collect(),
        _ => vec![None],
    };
    for a in orders.iter().flatten() {
        reject_unit_order(*a)?;
    }
    let (rho, sigma) = (load_state(rho)?, load_state(sigma)?);
    let mut values = Vec::new();
    let mut csv = String::from("alpha,value\n");
    for a in orders {
        let v = match a {
            Some(a) => sandwiched_renyi(&rho, &sigma, a)?,
            None => relative_entropy(&rho, &sigma)?,
        };
        values.push(json!({
            "alpha": a,
            "kind": if a.is_some() { "sandwiched_renyi" } else { "relative_entropy" },
            "value": v,
        }));
        let _ = writeln!(csv, "{},{}", num(a.unwrap_or(1.0)), num(v));
    }
    Ok(Outcome::ok(json!({ "values": values }), csv))
}

fn capacity(channel: &str, alpha: Option<f64>, common: &Common) -> Result<Outcome, CliError> {
    let ch = ChannelSource::parse(channel)?.load()?;
    let k = ch.kraus();
    let b = budget(common);
    match alpha {
        Some(a) => {
            reject_unit_order(a)?;
            let r = alpha_holevo(k, a, &b, None)?;
            let csv = format!(
                "quantity,value\nalpha,{}\nalpha_holevo,{}\ngap_estimate,{}\nensemble_lower_bound,{}\nbest_ensemble_bound,{}\n",
                num(a),
                num(r.value()),
                num(r.radius.gap_estimate),
                num(r.ensemble_lower_bound),
                num(r.best_ensemble_bound)
            );
            let mut o = Outcome::ok(to_value(&r), csv);
            if !r.consistent {
                o.passed = false;
                o.failures.push(format!(
                    "ensemble route {:e} exceeds the radius {:e}",
                    r.ensemble_lower_bound,
                    r.value()
                ));
            }
            Ok(o)
        }
        None => {
            let chi = holevo_information(k, &b)?;
            let rad = information_radius(k, &b)?;
            let diff = (chi.value - rad.value).abs();
            let csv = format!(
                "quantity,value\nholevo,{}\nholevo_gap,{}\nradius,{}\nradius_gap,{}\n",
                num(chi.value),
                num(chi.gap_estimate),
                num(rad.value),
                num(rad.gap_estimate)
            );
            let allowed = MINIMAX_TOLERANCE + chi.gap_estimate + rad.gap_estimate;
            let mut o = Outcome::ok(json!({ "holevo": chi, "radius": rad, "difference": diff }), csv);
            if diff > allowed {
                o.passed = false;
                o.failures.push(format!("|χ − K| = {diff:e} exceeds {allowed:e}"));
            }
            Ok(o)
        }
    }
}

fn exponent(channel: &str, rate: f64, grid: Option<&[f64]>, common: &Common) -> Result<Outcome, CliError> {
    let ch = ChannelSource::parse(channel)?.load()?;
    let mut opts = ExponentOptions {
        budget: budget(common),
        ..ExponentOptions::default()
    };
    if let Some(g) = grid {
        opts.alphas = g.to_vec();
        opts.refine_iterations = 0;
        opts.extend = false;
    }
    let curve = strong_converse_exponent(ch.kraus(), rate, &opts)?;
    let defect = curve.monotonicity_defect();
    let mut o = Outcome::ok(to_value(&curve), curve.to_csv());
    if defect > MONOTONE_TOLERANCE + curve.gap_estimate {
        o.passed = false;
        o.failures.push(format!("χ̃_α decreases by {defect:e} along the grid"));
    }
    Ok(o)
}

fn eb_check(channel: &str) -> Result<Outcome, CliError> {
    let source = ChannelSource::parse(channel)?;
    let ch = source.load()?;
    let s = eb_summary(&ch, &source, PPT_TOLERANCE)?;
    let mut csv = format!(
        "quantity,value\nverdict,{}\nmin_eigenvalue,{}\n",
        s.verdict,
        num(s.min_eigenvalue)
    );
    if let Some(b) = s.boundary_estimate {
        let _ = writeln!(csv, "boundary_estimate,{}", num(b));
    }
    Ok(Outcome::ok(to_value(&s), csv))
}

fn strategy(d: Decoder) -> DecoderStrategy {
    match d {
        Decoder::Pgm => DecoderStrategy::Pgm,
        Decoder::Helstrom => DecoderStrategy::Helstrom,
        Decoder::Basis => DecoderStrategy::Basis,
        Decoder::Given => DecoderStrategy::Given,
        Decoder::Best => DecoderStrategy::Best,
    }
}

fn simulate_cmd(
    channel: &str,
    protocol: Option<&std::path::Path>,
    rounds: usize,
    messages: usize,
    decoder: Decoder,
    common: &Common,
) -> Result<Outcome, CliError> {
    let ch = ChannelSource::parse(channel)?.load()?;
    let k = ch.kraus();
    let p = match protocol {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            FeedbackProtocol::from_json(&text)?
        }
        None => random_protocol(k, rounds, messages, ProtocolDims::default(), common.seed)?,
    };
    let b = budget(common);
    let opts = ExponentOptions {
        budget: b,
        ..ExponentOptions::default()
    };
    let r = verify_strong_converse_bound(&p, k, strategy(decoder), &opts)?;
    let chain = verify_weak_converse_chain(&simulate(&p, k)?, k, &b)?;

    let mut csv = r.to_csv();
    for c in &chain.rounds {
        let _ = writeln!(csv, "{},chain_mi_output,{}", c.round, num(c.mi_output));
        let _ = writeln!(csv, "{},chain_mi_memory,{}", c.round, num(c.mi_memory));
    }
    let _ = writeln!(csv, "0,chain_chi,{}", num(chain.chi));

    let mut failures = Vec::new();
    if !r.bound_holds {
        failures.push(format!("p_succ = {:e} exceeds the bound {:e}", r.p_succ, r.bound));
    }
    if !r.separability.all_ppt {
        failures.push(format!(
            "trajectory state with partial-transpose eigenvalue {:e}",
            r.separability.min_eigenvalue
        ));
    }
    if !chain.passed {
        failures.push("mutual-information chain violated".to_string());
    }
    Ok(Outcome {
        result: json!({
            "n_rounds": p.n_rounds,
            "message_count": p.message_count,
            "rate": p.rate(),
            "bound": r,
            "chain": chain,
        }),
        csv,
        passed: failures.is_empty(),
        failures,
    })
}

fn verify(suite: &str, common: &Common) -> Result<Outcome, CliError> {
    let suite = Suite::from_str(suite).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = run_suite(suite, &SuiteOptions::new(common.seed, common.budget as usize))?;
    let mut csv = String::from("check,quantity,value\n");
    for c in &report.checks {
        let _ = writeln!(csv, "{},cases,{}", c.name, c.cases);
        let _ = writeln!(csv, "{},violations,{}", c.name, c.violations);
        let _ = writeln!(csv, "{},passed,{}", c.name, u8::from(c.passed));
        for (k, v) in &c.metrics {
            let _ = writeln!(csv, "{},{k},{}", c.name, num(*v));
        }
    }
    Ok(Outcome {
        failures: report.failures(),
        passed: report.passed,
        result: to_value(&report),
        csv,
    })
}
