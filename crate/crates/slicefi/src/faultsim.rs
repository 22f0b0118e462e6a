//! Single-fault injection runs and whole campaigns.
//!
//! Every fault is an XOR of one stored bit at the start of one cycle,
//! re-simulated from cycle 0 against the shared golden trace. A fault is
//! Detected at the first cycle where any observed output differs from
//! the golden run, and the re-simulation stops there.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::frontend::{ElaboratedDesign, SignalId};
use crate::sim::{
    step_cycle, ActiveFault, FaultSemantics, GoldenTrace, SimError, SimState, StepOptions,
    Stimulus, StorageBit,
};
use crate::slicer::{FaultDescriptor, FaultList};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FaultError {
    #[error("fault out of bounds: {0}")]
    FaultOutOfBounds(String),
    #[error("golden trace does not match the campaign: {0}")]
    TraceMismatchHorizon(String),
    #[error("campaign fault list is empty")]
    EmptyFaultList,
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaultClass {
    Detected,
    Undetected,
}

impl fmt::Display for FaultClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultClass::Detected => f.write_str("detected"),
            FaultClass::Undetected => f.write_str("undetected"),
        }
    }
}

/// Outcome of injecting one fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultOutcome {
    pub classification: FaultClass,
    /// First cycle with an observation mismatch.
    pub detection_cycle: Option<u32>,
    /// detection_cycle - injection cycle.
    pub latency: Option<u32>,
}

impl FaultOutcome {
    pub fn is_detected(&self) -> bool {
        self.classification == FaultClass::Detected
    }
}

/// Per-fault outcomes in fault-list order, plus totals and timing.
#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub outcomes: Vec<FaultOutcome>,
    pub injected: usize,
    pub detected: usize,
    pub undetected: usize,
    /// End-to-end campaign time.
    pub wall_seconds: f64,
    /// Summed per-fault simulation time across workers.
    pub cpu_seconds: f64,
}

impl CampaignResult {
    pub fn to_csv_string(&self, design: &ElaboratedDesign, faults: &FaultList) -> String {
        let mut out = String::from("signal,row,bit,cycle,outcome,detection_cycle,latency\n");
        for (f, o) in faults.faults.iter().zip(&self.outcomes) {
            let (dc, lat) = match (o.detection_cycle, o.latency) {
                (Some(d), Some(l)) => (d.to_string(), l.to_string()),
                _ => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                design.signal(f.target).name,
                f.row,
                f.bit,
                f.cycle,
                o.classification,
                dc,
                lat
            ));
        }
        out
    }
}

fn storage_bit(
    design: &ElaboratedDesign,
    fault: &FaultDescriptor,
) -> Result<StorageBit, FaultError> {
    let decl = design.signal(fault.target);
    if !decl.kind.is_storage() {
        return Err(FaultError::FaultOutOfBounds(format!(
            "`{}` is not a register or memory",
            decl.name
        )));
    }
    if fault.bit >= decl.width {
        return Err(FaultError::FaultOutOfBounds(format!(
            "bit {} of `{}` (width {})",
            fault.bit, decl.name, decl.width
        )));
    }
    if fault.row >= decl.rows() {
        return Err(FaultError::FaultOutOfBounds(format!(
            "row {} of `{}` (depth {})",
            fault.row,
            decl.name,
            decl.rows()
        )));
    }
    Ok(StorageBit {
        signal: fault.target,
        mem_slot: design.mem_slot(fault.target),
        row: fault.row,
        bit: fault.bit,
    })
}

fn check_horizon(
    stimulus: &Stimulus,
    observation: &[SignalId],
    golden: &GoldenTrace,
) -> Result<(), FaultError> {
    if golden.n_cycles() != stimulus.n_cycles() {
        return Err(FaultError::TraceMismatchHorizon(format!(
            "golden spans {} cycles, stimulus {}",
            golden.n_cycles(),
            stimulus.n_cycles()
        )));
    }
    if golden.observation() != observation {
        return Err(FaultError::TraceMismatchHorizon(
            "golden observation list differs".into(),
        ));
    }
    Ok(())
}

/// Re-simulate from cycle 0 with one bit flipped at `fault.cycle` and
/// classify against the golden trace. Stops at the first mismatch.
pub fn inject_and_simulate(
    design: &ElaboratedDesign,
    stimulus: &Stimulus,
    observation: &[SignalId],
    fault: &FaultDescriptor,
    golden: &GoldenTrace,
) -> Result<FaultOutcome, FaultError> {
    check_horizon(stimulus, observation, golden)?;
    if fault.cycle as usize >= stimulus.n_cycles() {
        return Err(FaultError::FaultOutOfBounds(format!(
            "cycle {} beyond horizon {}",
            fault.cycle,
            stimulus.n_cycles()
        )));
    }
    let location = storage_bit(design, fault)?;
    let active = ActiveFault {
        location,
        semantics: fault.semantics,
    };

    let mut state = SimState::new(design);
    for cycle in 0..stimulus.n_cycles() {
        let opts = StepOptions {
            fault: (cycle == fault.cycle as usize).then_some(active),
            ..Default::default()
        };
        step_cycle(design, &mut state, stimulus.inputs(), stimulus.row(cycle), &opts)?;
        if cycle >= fault.cycle as usize {
            let mismatch = observation
                .iter()
                .zip(golden.row(cycle))
                .any(|(sig, gold)| state.value(*sig) != *gold);
            if mismatch {
                return Ok(FaultOutcome {
                    classification: FaultClass::Detected,
                    detection_cycle: Some(cycle as u32),
                    latency: Some(cycle as u32 - fault.cycle),
                });
            }
        }
    }
    Ok(FaultOutcome {
        classification: FaultClass::Undetected,
        detection_cycle: None,
        latency: None,
    })
}

/// Run the whole fault list. Outcomes are ordered as the list regardless
/// of worker count; totals and per-fault results are identical for any
/// parallelism degree.
pub fn run_campaign(
    design: &ElaboratedDesign,
    stimulus: &Stimulus,
    observation: &[SignalId],
    faults: &FaultList,
    golden: &GoldenTrace,
    workers: usize,
) -> Result<CampaignResult, FaultError> {
    if faults.is_empty() {
        return Err(FaultError::EmptyFaultList);
    }
    check_horizon(stimulus, observation, golden)?;
    let workers = workers.max(1);
    let wall_start = Instant::now();

    let n = faults.len();
    let mut slots: Vec<Option<Result<FaultOutcome, FaultError>>> = vec![None; n];
    let mut cpu = Duration::ZERO;

    if workers == 1 {
        for (i, f) in faults.faults.iter().enumerate() {
            let started = Instant::now();
            let r = inject_and_simulate(design, stimulus, observation, f, golden);
            cpu += started.elapsed();
            slots[i] = Some(r);
        }
    } else {
        let next = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel::<(usize, Result<FaultOutcome, FaultError>, Duration)>();
        std::thread::scope(|scope| {
            for _ in 0..workers {
                let tx = tx.clone();
                let next = &next;
                scope.spawn(move || loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        break;
                    }
                    let started = Instant::now();
                    let r = inject_and_simulate(
                        design,
                        stimulus,
                        observation,
                        &faults.faults[i],
                        golden,
                    );
                    let elapsed = started.elapsed();
                    if tx.send((i, r, elapsed)).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            for (i, r, elapsed) in rx {
                slots[i] = Some(r);
                cpu += elapsed;
            }
        });
    }

    // abort on the first structural error, in fault-list order
    let mut outcomes = Vec::with_capacity(n);
    for slot in slots {
        match slot.expect("every fault produced a result") {
            Ok(o) => outcomes.push(o),
            Err(e) => return Err(e),
        }
    }

    let detected = outcomes.iter().filter(|o| o.is_detected()).count();
    Ok(CampaignResult {
        injected: n,
        detected,
        undetected: n - detected,
        outcomes,
        wall_seconds: wall_start.elapsed().as_secs_f64(),
        cpu_seconds: cpu.as_secs_f64(),
    })
}
