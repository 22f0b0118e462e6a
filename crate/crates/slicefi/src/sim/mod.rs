//! Two-state cycle-based simulation: golden runs, per-cycle statement
//! coverage, and memory access recording.

mod engine;
mod stimulus;

use std::collections::BTreeSet;

use thiserror::Error;

pub use engine::{FaultSemantics, SimState, StorageBit};
pub(crate) use engine::{step_cycle, StepOptions};
#[allow(unused_imports)]
pub(crate) use engine::ActiveFault;
pub use stimulus::{Stimulus, StimulusError};

use crate::bits::BitVector;
use crate::frontend::{ElaboratedDesign, SignalId, SignalKind, StatementId};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("cycle {cycle}: index {index} out of range for memory `{signal}` (depth {depth})")]
    MemoryIndexOutOfRange {
        signal: String,
        index: u64,
        depth: u32,
        cycle: u32,
    },
    #[error("stimulus has no cycles")]
    EmptyStimulus,
    #[error("inputs do not cover `{0}`")]
    MissingInput(String),
    #[error("memory `{0}` cannot be observed directly; observe a read port instead")]
    MemoryObservation(String),
}

/// Executed-statement sets, one per cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageTrace {
    executed: Vec<BTreeSet<StatementId>>,
}

impl CoverageTrace {
    pub fn n_cycles(&self) -> usize {
        self.executed.len()
    }

    pub fn executed(&self, cycle: usize) -> &BTreeSet<StatementId> {
        &self.executed[cycle]
    }

    pub fn cycles(&self) -> impl Iterator<Item = &BTreeSet<StatementId>> {
        self.executed.iter()
    }

    /// Run-length-encoded listing: one `start-end: id id ...` line per
    /// maximal run of cycles with identical executed sets.
    pub fn to_rle_string(&self) -> String {
        let mut out = String::new();
        let mut c = 0;
        while c < self.executed.len() {
            let mut end = c;
            while end + 1 < self.executed.len() && self.executed[end + 1] == self.executed[c] {
                end += 1;
            }
            let ids: Vec<String> = self.executed[c].iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("{}-{}: {}\n", c, end, ids.join(" ")));
            c = end + 1;
        }
        out
    }
}

/// End-of-cycle observation values from the fault-free run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenTrace {
    observation: Vec<SignalId>,
    widths: Vec<u32>,
    rows: Vec<Vec<u64>>,
}

impl GoldenTrace {
    pub fn observation(&self) -> &[SignalId] {
        &self.observation
    }

    pub fn n_cycles(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, cycle: usize) -> &[u64] {
        &self.rows[cycle]
    }

    pub fn value(&self, cycle: usize, obs_index: usize) -> BitVector {
        BitVector::new(self.widths[obs_index], self.rows[cycle][obs_index])
    }

    pub fn to_csv_string(&self, design: &ElaboratedDesign) -> String {
        let mut out = String::from("cycle");
        for s in &self.observation {
            out.push(',');
            out.push_str(&design.signal(*s).name);
        }
        out.push('\n');
        for (c, row) in self.rows.iter().enumerate() {
            out.push_str(&c.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Memory rows touched per cycle during the golden run. Reads are split
/// by phase: in-cycle reads see pre-edge storage, post-commit reads feed
/// end-of-cycle observation sampling.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MemAccess {
    pub reads_during: Vec<(StatementId, SignalId, u32)>,
    pub reads_post: Vec<(StatementId, SignalId, u32)>,
    pub writes: Vec<(SignalId, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryAccessTrace {
    cycles: Vec<MemAccess>,
}

impl MemoryAccessTrace {
    pub fn n_cycles(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycle(&self, c: usize) -> &MemAccess {
        &self.cycles[c]
    }
}

/// Everything the golden run produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenRun {
    pub golden: GoldenTrace,
    pub coverage: CoverageTrace,
    pub mem_access: MemoryAccessTrace,
}

/// Result of stepping one cycle: what ran, and the post-edge values of
/// every wire and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleOutput {
    pub executed: BTreeSet<StatementId>,
    pub wires: Vec<(SignalId, BitVector)>,
}

/// Advance one clock cycle: apply inputs, evaluate combinational logic,
/// run the sequential processes, commit nonblocking writes. A register
/// written by no executed statement keeps its value.
pub fn evaluate_cycle(
    design: &ElaboratedDesign,
    state: &mut SimState,
    inputs: &[(SignalId, u64)],
) -> Result<CycleOutput, SimError> {
    for s in design.stimulus_inputs() {
        if !inputs.iter().any(|(i, _)| *i == s) {
            return Err(SimError::MissingInput(design.signal(s).name.clone()));
        }
    }
    let ids: Vec<SignalId> = inputs.iter().map(|(s, _)| *s).collect();
    let row: Vec<u64> = inputs.iter().map(|(_, v)| *v).collect();
    let record = step_cycle(
        design,
        state,
        &ids,
        &row,
        &StepOptions {
            record: true,
            ..Default::default()
        },
    )?;
    let wires = design
        .signals()
        .iter()
        .filter(|s| matches!(s.kind, SignalKind::Wire | SignalKind::Output))
        .map(|s| (s.id, BitVector::new(s.width, state.value(s.id))))
        .collect();
    Ok(CycleOutput {
        executed: record.executed.into_iter().collect(),
        wires,
    })
}

/// Fault-free reference simulation. All storage starts at zero; the
/// observation row is sampled at end of cycle, after the commit.
pub fn simulate_golden(
    design: &ElaboratedDesign,
    stimulus: &Stimulus,
    observation: &[SignalId],
) -> Result<GoldenRun, SimError> {
    if stimulus.n_cycles() == 0 {
        return Err(SimError::EmptyStimulus);
    }
    for s in observation {
        if design.signal(*s).kind == SignalKind::Memory {
            return Err(SimError::MemoryObservation(design.signal(*s).name.clone()));
        }
    }
    let widths: Vec<u32> = observation.iter().map(|s| design.signal(*s).width).collect();
    let mut state = SimState::new(design);
    let mut executed = Vec::with_capacity(stimulus.n_cycles());
    let mut rows = Vec::with_capacity(stimulus.n_cycles());
    let mut accesses = Vec::with_capacity(stimulus.n_cycles());
    for cycle in 0..stimulus.n_cycles() {
        let record = step_cycle(
            design,
            &mut state,
            stimulus.inputs(),
            stimulus.row(cycle),
            &StepOptions {
                record: true,
                ..Default::default()
            },
        )?;
        executed.push(record.executed.iter().copied().collect());
        rows.push(observation.iter().map(|s| state.value(*s)).collect());
        accesses.push(MemAccess {
            reads_during: record.mem_reads_during,
            reads_post: record.mem_reads_post,
            writes: record.mem_writes,
        });
    }
    Ok(GoldenRun {
        golden: GoldenTrace {
            observation: observation.to_vec(),
            widths,
            rows,
        },
        coverage: CoverageTrace { executed },
        mem_access: MemoryAccessTrace { cycles: accesses },
    })
}

/// Golden-style run with selected statements' effects forced to zero.
/// Used to test that statements outside a slice cannot influence the
/// observed outputs.
#[cfg(test)]
pub(crate) fn simulate_with_suppression(
    design: &ElaboratedDesign,
    stimulus: &Stimulus,
    observation: &[SignalId],
    suppress: &[bool],
) -> Result<GoldenTrace, SimError> {
    if stimulus.n_cycles() == 0 {
        return Err(SimError::EmptyStimulus);
    }
    let widths: Vec<u32> = observation.iter().map(|s| design.signal(*s).width).collect();
    let mut state = SimState::new(design);
    let mut rows = Vec::with_capacity(stimulus.n_cycles());
    for cycle in 0..stimulus.n_cycles() {
        step_cycle(
            design,
            &mut state,
            stimulus.inputs(),
            stimulus.row(cycle),
            &StepOptions {
                suppress: Some(suppress),
                ..Default::default()
            },
        )?;
        rows.push(observation.iter().map(|s| state.value(*s)).collect());
    }
    Ok(GoldenTrace {
        observation: observation.to_vec(),
        widths,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::load_design;

    const TOY: &str = "\
module toy(clk, rst, in_a, out);
  input clk;
  input rst;
  input in_a;
  output out;
  reg r1;
  reg r2;
  reg dead;

  always @(posedge clk) begin
    if (rst)
      r1 <= 0;
    else
      r1 <= in_a;
    r2 <= r1 ^ r2;
    dead <= in_a;
  end

  assign out = r2;
endmodule
";

    fn toy_stimulus(design: &ElaboratedDesign) -> Stimulus {
        // rst high only at cycle 0, in_a high afterwards
        Stimulus::new(
            design,
            design.stimulus_inputs(),
            vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 1]],
        )
    }

    fn stmt_ids(raw: &[u32]) -> BTreeSet<StatementId> {
        raw.iter().map(|r| StatementId(*r)).collect()
    }

    #[test]
    fn toy_executed_sets_follow_the_taken_branch() {
        let design = load_design(TOY).unwrap();
        let run = simulate_golden(&design, &toy_stimulus(&design), &[design.lookup_signal("out").unwrap()]).unwrap();
        // ids: 0 block, 1 if, 2 r1<=0, 3 r1<=in_a, 4 r2, 5 dead, 6 assign
        assert_eq!(run.coverage.executed(0), &stmt_ids(&[1, 2, 4, 5, 6]));
        assert_eq!(run.coverage.executed(1), &stmt_ids(&[1, 3, 4, 5, 6]));
    }

    #[test]
    fn toy_golden_trace_matches_hand_execution() {
        let design = load_design(TOY).unwrap();
        let out = design.lookup_signal("out").unwrap();
        let run = simulate_golden(&design, &toy_stimulus(&design), &[out]).unwrap();
        let values: Vec<u64> = (0..4).map(|c| run.golden.row(c)[0]).collect();
        assert_eq!(values, vec![0, 0, 1, 0]);
    }

    #[test]
    fn empty_design_cycle_is_a_no_op() {
        let design = load_design("module m(); endmodule").unwrap();
        let mut state = SimState::new(&design);
        let before = state.clone();
        let out = evaluate_cycle(&design, &mut state, &[]).unwrap();
        assert!(out.executed.is_empty());
        assert!(out.wires.is_empty());
        assert_eq!(state.cycle(), before.cycle() + 1);
    }

    #[test]
    fn empty_stimulus_is_rejected() {
        let design = load_design(TOY).unwrap();
        let stim = Stimulus::new(&design, design.stimulus_inputs(), vec![]);
        let err = simulate_golden(&design, &stim, &[design.lookup_signal("out").unwrap()])
            .unwrap_err();
        assert_eq!(err, SimError::EmptyStimulus);
    }

    #[test]
    fn constant_design_reaches_steady_state() {
        let design = load_design(
            "module m(clk, out); input clk; output [3:0] out; reg [3:0] r;
             always @(posedge clk) r <= 4'd5;
             assign out = r;
             endmodule",
        )
        .unwrap();
        let stim = Stimulus::new(&design, vec![], vec![vec![]; 5]);
        let out = design.lookup_signal("out").unwrap();
        let run = simulate_golden(&design, &stim, &[out]).unwrap();
        for c in 0..5 {
            assert_eq!(run.golden.row(c)[0], 5);
            assert_eq!(run.coverage.executed(c), run.coverage.executed(0));
        }
    }

    #[test]
    fn dynamic_memory_index_out_of_range_is_reported_with_cycle() {
        // depth 3 memory addressed by a 2-bit counter reaches row 3
        let design = load_design(
            "module m(clk, out); input clk; output [3:0] out;
             reg [1:0] ptr;
             reg [3:0] mem [0:2];
             assign out = mem[0];
             always @(posedge clk) begin
               mem[ptr] <= 4'd1;
               ptr <= ptr + 2'd1;
             end
             endmodule",
        )
        .unwrap();
        let stim = Stimulus::new(&design, vec![], vec![vec![]; 6]);
        let out = design.lookup_signal("out").unwrap();
        let err = simulate_golden(&design, &stim, &[out]).unwrap_err();
        match err {
            SimError::MemoryIndexOutOfRange {
                signal,
                index,
                cycle,
                ..
            } => {
                assert_eq!(signal, "mem");
                assert_eq!(index, 3);
                assert_eq!(cycle, 3);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let design = load_design(TOY).unwrap();
        let out = design.lookup_signal("out").unwrap();
        let a = simulate_golden(&design, &toy_stimulus(&design), &[out]).unwrap();
        let b = simulate_golden(&design, &toy_stimulus(&design), &[out]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn straight_line_designs_execute_every_statement_every_cycle() {
        let design = load_design(
            "module m(clk, a, out); input clk; input [3:0] a; output [3:0] out;
             reg [3:0] x; reg [3:0] y;
             always @(posedge clk) begin
               x <= a;
               y <= x + a;
             end
             assign out = y;
             endmodule",
        )
        .unwrap();
        let stim = Stimulus::new(&design, design.stimulus_inputs(), vec![vec![3], vec![9]]);
        let out = design.lookup_signal("out").unwrap();
        let run = simulate_golden(&design, &stim, &[out]).unwrap();
        let all: BTreeSet<StatementId> =
            design.sliceable_statements().iter().copied().collect();
        for c in 0..2 {
            assert_eq!(run.coverage.executed(c), &all);
        }
    }

    #[test]
    fn partial_writes_read_modify_write_at_commit() {
        let design = load_design(
            "module m(clk, out); input clk; output [7:0] out;
             reg [7:0] r;
             always @(posedge clk) begin
               r[3:0] <= 4'd10;
               r[7] <= 1;
             end
             assign out = r;
             endmodule",
        )
        .unwrap();
        let stim = Stimulus::new(&design, vec![], vec![vec![], vec![]]);
        let out = design.lookup_signal("out").unwrap();
        let run = simulate_golden(&design, &stim, &[out]).unwrap();
        assert_eq!(run.golden.row(0)[0], 0x8a);
        assert_eq!(run.golden.row(1)[0], 0x8a);
    }

    #[test]
    fn stimulus_csv_round_trip() {
        let design = load_design(TOY).unwrap();
        let stim = toy_stimulus(&design);
        let text = stim.to_csv_string(&design);
        let back = Stimulus::from_csv_str(&design, &text).unwrap();
        assert_eq!(stim, back);
    }

    #[test]
    fn stimulus_csv_rejects_unknown_and_missing_columns() {
        let design = load_design(TOY).unwrap();
        let err = Stimulus::from_csv_str(&design, "rst,bogus\n1,0\n").unwrap_err();
        assert!(matches!(err, StimulusError::UnknownColumn(c) if c == "bogus"));
        let err = Stimulus::from_csv_str(&design, "rst\n1\n").unwrap_err();
        assert!(matches!(err, StimulusError::MissingInput(c) if c == "in_a"));
    }

    #[test]
    fn stimulus_csv_accepts_hex_and_checks_width() {
        let design = load_design(
            "module m(clk, a, o); input clk; input [7:0] a; output [7:0] o;
             assign o = a; endmodule",
        )
        .unwrap();
        let stim = Stimulus::from_csv_str(&design, "cycle,a\n0,0xff\n1,3\n").unwrap();
        assert_eq!(stim.row(0), &[255]);
        let err = Stimulus::from_csv_str(&design, "a\n0x1ff\n").unwrap_err();
        assert!(matches!(err, StimulusError::ValueTooWide { .. }));
    }
}
