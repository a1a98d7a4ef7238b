//! The four subcommands, each producing a JSON report.

use std::path::PathBuf;

use channel_gauge::bounds::{
    c_phi_with, fixed_input_distance, helstrom_measurement, sandwich_report_with, succ_probability,
    tensor_bound_from, uhlmann_mixture, CPhiOptions, LambdaOptions, SandwichOptions, SANDWICH_SLACK, SCHUR_TOL,
};
use channel_gauge::diamond::{diamond_distance, TP_TOL};
use channel_gauge::schur::is_schur_map;
use channel_gauge::channels::LinearMap;
use channel_gauge::{builtin, DensityOperator, KrausChannel};
use serde_json::{json, Value};

use crate::io::{rows_of, ChannelFile};
use crate::CliError;

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_BUDGET: usize = 50;

pub const VERDICT_CERTIFIED: &str = "counterexample-to-AQBC certified";
pub const VERDICT_SINGLE_COPY: &str = "c_phi positive; distance bound applies at n = 1 only";
pub const VERDICT_NOT: &str = "not a counterexample";
pub const VERDICT_INCONCLUSIVE: &str = "inconclusive";

const Z5_NOTE: &str = "Z_5 taken as Diag(exp(2 pi i k / 5)), k = 0..4, the unitary reading consistent with Z_5^5 = I";

/// Where a channel comes from.
#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    Builtin(String),
}

/// A loaded channel with a label and any provenance notes for the report.
pub struct Loaded {
    pub id: String,
    pub file: ChannelFile,
    pub notes: Vec<String>,
}

pub fn load(src: &Source) -> Result<Loaded, CliError> {
    match src {
        Source::File(p) => {
            let file = ChannelFile::read(p)?;
            let id = file
                .metadata
                .get("name")
                .cloned()
                .unwrap_or_else(|| p.display().to_string());
            Ok(Loaded { id, file, notes: vec![] })
        }
        Source::Builtin(name) => {
            let ch = builtin::by_name(name)
                .ok_or_else(|| CliError::Parse(format!("unknown builtin {name:?}; expected example1 or example2")))?;
            let notes = if name == "example2" { vec![Z5_NOTE.to_string()] } else { vec![] };
            Ok(Loaded {
                id: name.clone(),
                file: ChannelFile::from_kraus(&ch).with_metadata("name", name),
                notes,
            })
        }
    }
}

fn require_channel(ch: &KrausChannel, label: &str, unital: bool) -> Result<(), CliError> {
    let v = ch.validation();
    if v.defect_tp > TP_TOL {
        return Err(channel_gauge::Error::Precondition(format!(
            "{label} is not trace preserving (defect {:.3e})",
            v.defect_tp
        ))
        .into());
    }
    if unital && v.defect_unital > TP_TOL {
        return Err(channel_gauge::Error::Precondition(format!(
            "{label} is not unital (defect {:.3e})",
            v.defect_unital
        ))
        .into());
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CertifyArgs {
    pub source: Source,
    pub tol: f64,
    pub n: usize,
    pub budget: usize,
    pub seed: u64,
}

pub fn certify(args: &CertifyArgs) -> Result<Value, CliError> {
    if !(args.tol > 0.0) || args.n == 0 || args.budget == 0 {
        return Err(CliError::Parse("--tol, --n and --budget must be positive".into()));
    }
    let loaded = load(&args.source)?;
    let ch = loaded.file.channel()?;
    require_channel(&ch, "channel", true)?;
    if !ch.is_square() {
        return Err(channel_gauge::Error::Precondition("channel must have equal input and output dimension".into()).into());
    }
    let cphi_opts = CPhiOptions {
        seed: args.seed,
        ..CPhiOptions::default()
    };
    let cphi = c_phi_with(&ch, &cphi_opts)?;
    let unitary = cphi.unitary(args.tol);
    let schur = is_schur_map(&ch, SCHUR_TOL);

    let sandwich = if schur {
        let s = builtin::schur_of(&ch);
        let opts = SandwichOptions {
            cphi: cphi_opts,
            lambda: LambdaOptions {
                budget: args.budget,
                seed: args.seed,
                ..LambdaOptions::default()
            },
        };
        Some(sandwich_report_with(&s, &loaded.id, &opts)?)
    } else {
        None
    };

    let (tensor, tensor_note) = match tensor_bound_from(&ch, &cphi, 1, args.n) {
        Ok(t) => (serde_json::to_value(t).expect("tensor bound serializes"), Value::Null),
        Err(channel_gauge::Error::Precondition(msg)) => (Value::Null, Value::String(msg)),
        Err(e) => return Err(e.into()),
    };

    let positive = cphi.value > args.tol;
    let verdict = if positive && schur {
        VERDICT_CERTIFIED
    } else if positive {
        VERDICT_SINGLE_COPY
    } else if unitary.is_some() {
        VERDICT_NOT
    } else {
        VERDICT_INCONCLUSIVE
    };

    let v = ch.validation();
    Ok(json!({
        "command": "certify",
        "channel_id": loaded.id,
        "dim": ch.dim_in(),
        "kraus_rank": ch.kraus().len(),
        "tp_defect": v.defect_tp,
        "unital_defect": v.defect_unital,
        "is_schur": schur,
        "c_phi": cphi.value,
        "c_phi_minimizer": {
            "coeffs": cphi.coeffs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "l": rows_of(&cphi.l),
        },
        "unitary_in_span": unitary.as_ref().map(rows_of),
        "sandwich": sandwich.map(|r| serde_json::to_value(r).expect("bound report serializes")),
        "tensor_bound": tensor,
        "tensor_bound_note": tensor_note,
        "verdict": verdict,
        "notes": loaded.notes,
        "tolerances": {
            "tol": args.tol,
            "tp_tol": TP_TOL,
            "schur_tol": SCHUR_TOL,
            "sandwich_slack": SANDWICH_SLACK,
            "c_phi_stop": cphi_opts.tol,
        },
        "diagnostics": {
            "seed": args.seed,
            "n": args.n,
            "budget": args.budget,
            "c_phi_starts": cphi.starts,
            "c_phi_best_start": cphi.best_start,
            "c_phi_iterations": cphi.iterations,
            "c_phi_evaluations": cphi.evaluations,
        },
    }))
}

pub fn diamond(a: &Source, b: &Source) -> Result<Value, CliError> {
    let (la, lb) = (load(a)?, load(b)?);
    let (ca, cb) = (la.file.channel()?, lb.file.channel()?);
    require_channel(&ca, "first channel", false)?;
    require_channel(&cb, "second channel", false)?;
    let r = diamond_distance(&ca, &cb)?;
    let notes = [la.notes, lb.notes].concat();
    let value = r.value.clamp(0.0, 2.0);
    Ok(json!({
        "command": "diamond",
        "channel_a": la.id,
        "channel_b": lb.id,
        "value": value,
        "p_succ": succ_probability(value)?,
        "optimal_input": rows_of(r.rho.matrix()),
        "notes": notes,
        "diagnostics": {
            "status": r.info.status.to_string(),
            "iterations": r.info.iterations,
            "primal_value": r.info.primal_value,
            "dual_value": r.info.dual_value,
            "gap": r.info.gap,
            "primal_residual": r.info.primal_residual,
        },
        "tolerances": {
            "tp_tol": TP_TOL,
            "sdp_gap_tol": channel_gauge::sdp::SdpOptions::default().gap_tol,
            "sdp_feas_tol": channel_gauge::sdp::SdpOptions::default().feas_tol,
        },
    }))
}

pub fn bound(src: &Source, budget: usize, seed: u64) -> Result<Value, CliError> {
    if budget == 0 {
        return Err(CliError::Parse("--budget must be positive".into()));
    }
    let loaded = load(src)?;
    let s = loaded.file.schur()?;
    if !s.is_channel() {
        return Err(channel_gauge::Error::Precondition("input is not a Schur channel".into()).into());
    }
    let opts = SandwichOptions {
        cphi: CPhiOptions {
            seed,
            ..CPhiOptions::default()
        },
        lambda: LambdaOptions {
            budget,
            seed,
            ..LambdaOptions::default()
        },
    };
    let report = sandwich_report_with(&s, &loaded.id, &opts)?;
    let mut v = serde_json::to_value(report).expect("bound report serializes");
    let obj = v.as_object_mut().expect("report is an object");
    obj.insert("command".into(), json!("bound"));
    obj.insert("notes".into(), json!(loaded.notes));
    Ok(v)
}

fn helstrom_json(rho0: &DensityOperator, rho1: &DensityOperator) -> Result<Value, CliError> {
    let h = helstrom_measurement(rho0, rho1)?;
    Ok(json!({
        "e0": rows_of(&h.e0),
        "e1": rows_of(&h.e1),
        "p_succ": h.p_succ,
        "achieved": h.achieved,
    }))
}

/// Two states, two channels at a fixed input, or one unital channel against
/// the mixed-unitary channel reproducing it at that input.
pub fn discriminate(a: &Source, b: Option<&Source>, state: Option<&Source>) -> Result<Value, CliError> {
    let la = load(a)?;
    if la.file.kind == crate::io::Kind::State {
        let lb = load(b.ok_or_else(|| CliError::Parse("two states needed: pass --input-b".into()))?)?;
        let (r0, r1) = (la.file.state()?, lb.file.state()?);
        let d = channel_gauge::matcore::trace_distance(&r0, &r1)?;
        return Ok(json!({
            "command": "discriminate",
            "mode": "states",
            "trace_distance": d,
            "helstrom": helstrom_json(&r0, &r1)?,
            "p_succ": succ_probability(d.min(2.0))?,
        }));
    }
    let rho = load(state.ok_or_else(|| CliError::Parse("channel discrimination needs --state".into()))?)?
        .file
        .state()?;
    let ca = la.file.channel()?;
    require_channel(&ca, "first channel", false)?;
    let (cb, mode, extra) = match b {
        Some(b) => {
            let cb = load(b)?.file.channel()?;
            require_channel(&cb, "second channel", false)?;
            (cb, "channels", Value::Null)
        }
        None => {
            let m = uhlmann_mixture(&ca, &rho)?;
            let extra = json!({
                "weights": m.weights,
                "unitaries": m.unitaries.iter().map(rows_of).collect::<Vec<_>>(),
                "doubly_stochastic": m.doubly_stochastic.row_iter().map(|r| r.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>(),
            });
            (m.to_channel()?, "uhlmann", extra)
        }
    };
    let d = fixed_input_distance(&ca, &cb, &rho)?;
    let out0 = DensityOperator::new(channel_gauge::matcore::hermitian_part(&ca.apply(rho.matrix())?))?;
    let out1 = DensityOperator::new(channel_gauge::matcore::hermitian_part(&cb.apply(rho.matrix())?))?;
    Ok(json!({
        "command": "discriminate",
        "mode": mode,
        "fixed_input_distance": d,
        "p_succ": succ_probability(d.min(2.0))?,
        "helstrom": helstrom_json(&out0, &out1)?,
        "mixture": extra,
    }))
}
