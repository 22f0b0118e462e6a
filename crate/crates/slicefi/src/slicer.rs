//! Per-cycle dynamic slices and critical-fault-list generation.
//!
//! The dynamic slice of cycle c is the intersection of the static slice
//! with the statements executed at c. Fault-list pruning keeps a
//! (storage bit, cycle) pair only when the flipped bit can still reach
//! an observed output:
//!
//! * `StaticPrune` keeps every bit of every storage signal the static
//!   slice touches, for every cycle. This is the cycle-independent
//!   static-cone baseline.
//! * `DynamicPrune` (transient faults) keeps (r, t) only when some
//!   statement in the dynamic slice at t reads r. A transient flip that
//!   nobody reads during its one live cycle is either overwritten by the
//!   cycle's commit or restored at the cycle edge, so end-of-cycle state
//!   is exactly the golden state.
//! * `DynamicLivePrune` (persistent faults) extends the window: (r, t)
//!   is kept when some later in-slice read happens before any committed
//!   write covers the flipped bit, or when r is observed directly and no
//!   write covers the bit in the injection cycle.
//!
//! Memory faults prune at row granularity when the golden run's access
//! trace is available: only rows actually read (at the recorded
//! addresses) keep their faults. Golden addresses are valid for the
//! faulty run too, because until the first read of the flipped row both
//! runs agree on everything outside that row.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::{ElaboratedDesign, SignalId, SignalKind, StatementId};
use crate::sim::{CoverageTrace, FaultSemantics, MemoryAccessTrace};

use crate::depgraph::StaticSlice;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SlicerError {
    #[error("no storage signal matches target spec `{0}`")]
    NoMatchingTargets(String),
    #[error("prune mode `{0}` requires the dynamic slice series")]
    ModeRequiresDynamicSlice(PruneMode),
    #[error("coverage spans {coverage} cycles but the campaign runs {expected}")]
    CoverageHorizon { coverage: usize, expected: usize },
    #[error("fault CSV: {0}")]
    BadFaultCsv(String),
    #[error("fault CSV row {row}: {message}")]
    BadFaultRow { row: usize, message: String },
}

/// How the fault universe is collapsed before injection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PruneMode {
    Exhaustive,
    StaticPrune,
    DynamicPrune,
    DynamicLivePrune,
}

impl PruneMode {
    pub const ALL: [PruneMode; 4] = [
        PruneMode::Exhaustive,
        PruneMode::StaticPrune,
        PruneMode::DynamicPrune,
        PruneMode::DynamicLivePrune,
    ];

    /// Human label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            PruneMode::Exhaustive => "Exhaustive",
            PruneMode::StaticPrune => "Static Slice",
            PruneMode::DynamicPrune => "Dynamic Slice",
            PruneMode::DynamicLivePrune => "Dynamic Slice (live)",
        }
    }
}

impl fmt::Display for PruneMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PruneMode::Exhaustive => "exhaustive",
            PruneMode::StaticPrune => "static",
            PruneMode::DynamicPrune => "dynamic",
            PruneMode::DynamicLivePrune => "dynamic-live",
        };
        f.write_str(s)
    }
}

impl FromStr for PruneMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(PruneMode::Exhaustive),
            "static" => Ok(PruneMode::StaticPrune),
            "dynamic" => Ok(PruneMode::DynamicPrune),
            "dynamic-live" => Ok(PruneMode::DynamicLivePrune),
            other => Err(format!(
                "unknown prune mode `{other}` (expected exhaustive|static|dynamic|dynamic-live)"
            )),
        }
    }
}

pub fn semantics_name(s: FaultSemantics) -> &'static str {
    match s {
        FaultSemantics::Transient => "transient",
        FaultSemantics::Persistent => "persistent",
    }
}

pub fn semantics_from_str(s: &str) -> Result<FaultSemantics, String> {
    match s {
        "transient" => Ok(FaultSemantics::Transient),
        "persistent" => Ok(FaultSemantics::Persistent),
        other => Err(format!(
            "unknown fault semantics `{other}` (expected transient|persistent)"
        )),
    }
}

/// Storage-signal selection: `all`, or a comma-separated list of names
/// with `*` wildcards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    raw: String,
    patterns: Vec<String>,
}

impl TargetSpec {
    pub fn all() -> Self {
        "all".parse().unwrap()
    }

    pub fn matches(&self, name: &str) -> bool {
        self.patterns.iter().any(|p| glob_match(p, name))
    }

    /// Matching Reg/Memory signals in declaration order.
    pub fn select(&self, design: &ElaboratedDesign) -> Vec<SignalId> {
        design
            .signals()
            .iter()
            .filter(|s| s.kind.is_storage() && self.matches(&s.name))
            .map(|s| s.id)
            .collect()
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl FromStr for TargetSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = s.trim().to_string();
        if raw.is_empty() {
            return Err("target spec is empty".into());
        }
        let patterns = if raw == "all" {
            vec!["*".to_string()]
        } else {
            raw.split(',').map(|p| p.trim().to_string()).collect()
        };
        if patterns.iter().any(|p| p.is_empty()) {
            return Err(format!("target spec `{raw}` has an empty pattern"));
        }
        Ok(Self { raw, patterns })
    }
}

fn glob_match(pattern: &str, name: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let n: Vec<char> = name.chars().collect();
    let (mut pi, mut ni) = (0usize, 0usize);
    let (mut star, mut mark) = (None, 0usize);
    while ni < n.len() {
        if pi < p.len() && (p[pi] == n[ni]) {
            pi += 1;
            ni += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some(pi);
            mark = ni;
            pi += 1;
        } else if let Some(s) = star {
            pi = s + 1;
            mark += 1;
            ni = mark;
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == '*' {
        pi += 1;
    }
    pi == p.len()
}

/// Per-cycle dynamic slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicSliceSeries {
    slices: Vec<BTreeSet<StatementId>>,
}

impl DynamicSliceSeries {
    pub fn n_cycles(&self) -> usize {
        self.slices.len()
    }

    pub fn slice(&self, cycle: usize) -> &BTreeSet<StatementId> {
        &self.slices[cycle]
    }

    pub fn cycles(&self) -> impl Iterator<Item = &BTreeSet<StatementId>> {
        self.slices.iter()
    }
}

/// slice(c) = static.statements ∩ executed(c), for every cycle.
pub fn dynamic_slice(
    static_slice: &StaticSlice,
    coverage: &CoverageTrace,
) -> DynamicSliceSeries {
    let slices = coverage
        .cycles()
        .map(|executed| {
            executed
                .iter()
                .filter(|s| static_slice.statements.contains(s))
                .copied()
                .collect()
        })
        .collect();
    DynamicSliceSeries { slices }
}

/// One single-bit flip at one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaultDescriptor {
    pub target: SignalId,
    /// Memory row; 0 for registers.
    pub row: u32,
    pub bit: u32,
    pub cycle: u32,
    pub semantics: FaultSemantics,
}

/// Ordered, deduplicated fault list plus the universe it was drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultList {
    pub mode: PruneMode,
    pub faults: Vec<FaultDescriptor>,
    pub universe_size: u64,
}

impl FaultList {
    pub fn len(&self) -> usize {
        self.faults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faults.is_empty()
    }

    pub fn to_csv_string(&self, design: &ElaboratedDesign) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for f in &self.faults {
            w.serialize(FaultRow {
                signal: design.signal(f.target).name.clone(),
                row: f.row,
                bit: f.bit,
                cycle: f.cycle,
                mode: self.mode.to_string(),
                semantics: semantics_name(f.semantics).to_string(),
            })
            .expect("csv write");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
    }

    /// Parse and validate a fault CSV against a design. Rows are sorted
    /// and deduplicated; `universe_size` is recomputed over the named
    /// signals and the given horizon.
    pub fn from_csv_str(
        design: &ElaboratedDesign,
        text: &str,
        n_cycles: u32,
    ) -> Result<Self, SlicerError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut faults = Vec::new();
        let mut mode: Option<PruneMode> = None;
        let mut targets = BTreeSet::new();
        for (i, row) in reader.deserialize::<FaultRow>().enumerate() {
            let row: FaultRow = row.map_err(|e| SlicerError::BadFaultCsv(e.to_string()))?;
            let signal = design.lookup_signal(&row.signal).ok_or_else(|| {
                SlicerError::BadFaultRow {
                    row: i,
                    message: format!("unknown signal `{}`", row.signal),
                }
            })?;
            let decl = design.signal(signal);
            if !decl.kind.is_storage() {
                return Err(SlicerError::BadFaultRow {
                    row: i,
                    message: format!("`{}` is not a register or memory", row.signal),
                });
            }
            if row.bit >= decl.width || row.row >= decl.rows() || row.cycle >= n_cycles {
                return Err(SlicerError::BadFaultRow {
                    row: i,
                    message: "fault indices out of bounds".into(),
                });
            }
            let row_mode =
                PruneMode::from_str(&row.mode).map_err(|message| SlicerError::BadFaultRow {
                    row: i,
                    message,
                })?;
            match mode {
                None => mode = Some(row_mode),
                Some(m) if m != row_mode => {
                    return Err(SlicerError::BadFaultRow {
                        row: i,
                        message: "mixed prune modes in one list".into(),
                    })
                }
                _ => {}
            }
            let semantics = semantics_from_str(&row.semantics).map_err(|message| {
                SlicerError::BadFaultRow { row: i, message }
            })?;
            targets.insert(signal);
            faults.push(FaultDescriptor {
                target: signal,
                row: row.row,
                bit: row.bit,
                cycle: row.cycle,
                semantics,
            });
        }
        faults.sort();
        faults.dedup();
        let universe_size = targets
            .iter()
            .map(|s| {
                let d = design.signal(*s);
                d.width as u64 * d.rows() as u64 * n_cycles as u64
            })
            .sum();
        Ok(Self {
            mode: mode.unwrap_or(PruneMode::Exhaustive),
            faults,
            universe_size,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FaultRow {
    signal: String,
    row: u32,
    bit: u32,
    cycle: u32,
    mode: String,
    semantics: String,
}

/// The uncollapsed universe: every bit of every selected storage signal
/// at every cycle.
pub fn fault_universe(
    design: &ElaboratedDesign,
    n_cycles: u32,
    target_spec: &TargetSpec,
    semantics: FaultSemantics,
) -> Result<FaultList, SlicerError> {
    let targets = target_spec.select(design);
    if targets.is_empty() {
        return Err(SlicerError::NoMatchingTargets(target_spec.to_string()));
    }
    let mut faults = Vec::new();
    for &t in &targets {
        let decl = design.signal(t);
        for row in 0..decl.rows() {
            for bit in 0..decl.width {
                for cycle in 0..n_cycles {
                    faults.push(FaultDescriptor {
                        target: t,
                        row,
                        bit,
                        cycle,
                        semantics,
                    });
                }
            }
        }
    }
    let universe_size = faults.len() as u64;
    Ok(FaultList {
        mode: PruneMode::Exhaustive,
        faults,
        universe_size,
    })
}

/// Collapse the fault universe for the selected mode. `dynamic` is
/// required for the dynamic modes; `mem_access` enables row-precise
/// memory pruning.
#[allow(clippy::too_many_arguments)]
pub fn generate_fault_list(
    design: &ElaboratedDesign,
    static_slice: &StaticSlice,
    dynamic: Option<&DynamicSliceSeries>,
    coverage: &CoverageTrace,
    n_cycles: u32,
    mode: PruneMode,
    semantics: FaultSemantics,
    target_spec: &TargetSpec,
    mem_access: Option<&MemoryAccessTrace>,
) -> Result<FaultList, SlicerError> {
    if coverage.n_cycles() != n_cycles as usize {
        return Err(SlicerError::CoverageHorizon {
            coverage: coverage.n_cycles(),
            expected: n_cycles as usize,
        });
    }
    let universe = fault_universe(design, n_cycles, target_spec, semantics)?;
    if mode == PruneMode::Exhaustive {
        return Ok(FaultList { mode, ..universe });
    }
    if mode == PruneMode::StaticPrune {
        let faults = universe
            .faults
            .into_iter()
            .filter(|f| static_slice.registers.contains(&f.target))
            .collect();
        return Ok(FaultList {
            mode,
            faults,
            universe_size: universe.universe_size,
        });
    }

    let dynamic = dynamic.ok_or(SlicerError::ModeRequiresDynamicSlice(mode))?;
    if dynamic.n_cycles() != n_cycles as usize {
        return Err(SlicerError::CoverageHorizon {
            coverage: dynamic.n_cycles(),
            expected: n_cycles as usize,
        });
    }

    let keep = PruneAnalysis::new(
        design,
        static_slice,
        dynamic,
        coverage,
        n_cycles as usize,
        mem_access,
    );
    let faults = universe
        .faults
        .into_iter()
        .filter(|f| match mode {
            PruneMode::DynamicPrune => keep.keep_transient(f),
            PruneMode::DynamicLivePrune => keep.keep_live(f),
            _ => unreachable!(),
        })
        .collect();
    Ok(FaultList {
        mode,
        faults,
        universe_size: universe.universe_size,
    })
}

/// Precomputed per-cycle read/write facts shared by the dynamic prune
/// rules.
struct PruneAnalysis<'a> {
    design: &'a ElaboratedDesign,
    static_slice: &'a StaticSlice,
    coverage: &'a CoverageTrace,
    n_cycles: usize,
    /// used_storage[c] = storage signals read by any statement of the
    /// dynamic slice at c.
    used_storage: Vec<BTreeSet<SignalId>>,
    mem_access: Option<&'a MemoryAccessTrace>,
}

impl<'a> PruneAnalysis<'a> {
    fn new(
        design: &'a ElaboratedDesign,
        static_slice: &'a StaticSlice,
        dynamic: &'a DynamicSliceSeries,
        coverage: &'a CoverageTrace,
        n_cycles: usize,
        mem_access: Option<&'a MemoryAccessTrace>,
    ) -> Self {
        let used_storage = dynamic
            .cycles()
            .map(|slice| {
                let mut used = BTreeSet::new();
                for &sid in slice {
                    for &u in design.uses_of(sid) {
                        if design.signal(u).kind.is_storage() {
                            used.insert(u);
                        }
                    }
                }
                used
            })
            .collect();
        Self {
            design,
            static_slice,
            coverage,
            n_cycles,
            used_storage,
            mem_access,
        }
    }

    /// Rows of `mem` read at cycle c by static-slice statements, split
    /// into in-cycle and post-commit reads.
    fn rows_read(&self, mem: SignalId, c: usize) -> (BTreeSet<u32>, BTreeSet<u32>) {
        let access = self.mem_access.expect("refined analysis needs the trace");
        let cycle = access.cycle(c);
        let in_slice = |stmt: &StatementId| self.static_slice.statements.contains(stmt);
        let during = cycle
            .reads_during
            .iter()
            .filter(|(stmt, sig, _)| *sig == mem && in_slice(stmt))
            .map(|(_, _, row)| *row)
            .collect();
        let post = cycle
            .reads_post
            .iter()
            .filter(|(stmt, sig, _)| *sig == mem && in_slice(stmt))
            .map(|(_, _, row)| *row)
            .collect();
        (during, post)
    }

    fn row_written(&self, mem: SignalId, row: u32, c: usize) -> bool {
        self.mem_access
            .expect("refined analysis needs the trace")
            .cycle(c)
            .writes
            .iter()
            .any(|(sig, r)| *sig == mem && *r == row)
    }

    /// An executed statement at cycle c commits a write to `signal`
    /// covering `bit` (partial writes kill only the bits they cover).
    fn covering_write(&self, signal: SignalId, bit: u32, c: usize) -> bool {
        use crate::frontend::StatementKind;
        self.coverage.executed(c).iter().any(|sid| {
            match &self.design.statement(*sid).kind {
                StatementKind::NonBlockingAssign { target, .. } if target.signal == signal => {
                    match target.range {
                        None => true,
                        Some((msb, lsb)) => bit >= lsb && bit <= msb,
                    }
                }
                _ => false,
            }
        })
    }

    /// Transient rule: keep (r, t) only if the flip is readable while it
    /// lives, i.e. some dynamic-slice statement at t reads r. For
    /// memories with an access trace, only rows read in-cycle count;
    /// post-commit reads see the restored value.
    fn keep_transient(&self, f: &FaultDescriptor) -> bool {
        let c = f.cycle as usize;
        if self.design.signal(f.target).kind == SignalKind::Memory && self.mem_access.is_some()
        {
            let (during, _) = self.rows_read(f.target, c);
            return during.contains(&f.row);
        }
        self.used_storage[c].contains(&f.target)
    }

    /// Persistent rule: keep (r, t) if the flip survives (no covering
    /// committed write) until some in-slice read, or r is observed
    /// directly and nothing overwrites the bit in the injection cycle.
    fn keep_live(&self, f: &FaultDescriptor) -> bool {
        let is_mem = self.design.signal(f.target).kind == SignalKind::Memory;
        if is_mem && self.mem_access.is_some() {
            return self.keep_live_memory_refined(f);
        }
        let t = f.cycle as usize;
        // directly observed storage: the flip is sampled at the end of
        // the injection cycle unless a commit covers the bit first
        if self.static_slice.criterion.contains(&f.target)
            && !self.covering_write(f.target, f.bit, t)
        {
            return true;
        }
        // scan forward: read before covering write
        for c in t..self.n_cycles {
            if self.used_storage[c].contains(&f.target) {
                return true;
            }
            if self.covering_write(f.target, f.bit, c) {
                return false;
            }
        }
        false
    }

    fn keep_live_memory_refined(&self, f: &FaultDescriptor) -> bool {
        let t = f.cycle as usize;
        for c in t..self.n_cycles {
            let (during, post) = self.rows_read(f.target, c);
            // in-cycle reads happen before this cycle's writes commit
            if during.contains(&f.row) {
                return true;
            }
            if self.row_written(f.target, f.row, c) {
                return false;
            }
            // post-commit reads feed end-of-cycle sampling and require
            // the row to survive this cycle's writes, checked above
            if post.contains(&f.row) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depgraph::{build_pdg, static_slice};
    use crate::frontend::load_design;
    use crate::sim::{simulate_golden, Stimulus};

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

    struct Fixture {
        design: ElaboratedDesign,
        slice: StaticSlice,
        run: crate::sim::GoldenRun,
    }

    fn toy_fixture() -> Fixture {
        let design = load_design(TOY).unwrap();
        let pdg = build_pdg(&design);
        let obs: BTreeSet<SignalId> = [design.lookup_signal("out").unwrap()].into();
        let slice = static_slice(&pdg, &design, &obs).unwrap();
        let stim = Stimulus::new(
            &design,
            design.stimulus_inputs(),
            vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 1]],
        );
        let observation: Vec<SignalId> = obs.iter().copied().collect();
        let run = simulate_golden(&design, &stim, &observation).unwrap();
        Fixture { design, slice, run }
    }

    #[test]
    fn dynamic_slice_is_the_per_cycle_intersection() {
        let fx = toy_fixture();
        let dyn_slices = dynamic_slice(&fx.slice, &fx.run.coverage);
        let expect_c0: BTreeSet<StatementId> =
            [1, 2, 4, 6].map(StatementId).into_iter().collect();
        assert_eq!(dyn_slices.slice(0), &expect_c0);
        for c in 0..dyn_slices.n_cycles() {
            for s in dyn_slices.slice(c) {
                assert!(fx.slice.statements.contains(s));
                assert!(fx.run.coverage.executed(c).contains(s));
            }
        }
    }

    #[test]
    fn full_static_slice_makes_dynamic_equal_coverage() {
        let fx = toy_fixture();
        let mut full = fx.slice.clone();
        full.statements = fx.design.sliceable_statements().iter().copied().collect();
        let dyn_slices = dynamic_slice(&full, &fx.run.coverage);
        for c in 0..dyn_slices.n_cycles() {
            assert_eq!(dyn_slices.slice(c), fx.run.coverage.executed(c));
        }
    }

    #[test]
    fn universe_counts_are_width_by_rows_by_cycles() {
        let fx = toy_fixture();
        let all = TargetSpec::all();
        let u = fault_universe(&fx.design, 4, &all, FaultSemantics::Transient).unwrap();
        assert_eq!(u.len(), 12); // 3 one-bit regs x 4 cycles
        assert_eq!(u.universe_size, 12);

        let design = load_design(
            "module m(clk, a, o); input clk; input [7:0] a; output [7:0] o;
             reg [7:0] r;
             always @(posedge clk) r <= a;
             assign o = r; endmodule",
        )
        .unwrap();
        let u = fault_universe(&design, 1, &all, FaultSemantics::Transient).unwrap();
        assert_eq!(u.len(), 8);

        let design = load_design(
            "module m(clk, a, o); input clk; input [2:0] a; output [7:0] o;
             reg [7:0] mem [0:3];
             assign o = mem[a[1:0]];
             always @(posedge clk) mem[a[1:0]] <= o + 8'd1;
             endmodule",
        )
        .unwrap();
        let u = fault_universe(&design, 10, &all, FaultSemantics::Transient).unwrap();
        assert_eq!(u.len(), 320); // 4 rows x 8 bits x 10 cycles
    }

    #[test]
    fn no_matching_targets_is_an_error() {
        let fx = toy_fixture();
        let spec: TargetSpec = "nonexistent*".parse().unwrap();
        let err =
            fault_universe(&fx.design, 4, &spec, FaultSemantics::Transient).unwrap_err();
        assert!(matches!(err, SlicerError::NoMatchingTargets(_)));
    }

    fn toy_list(fx: &Fixture, mode: PruneMode, semantics: FaultSemantics) -> FaultList {
        let dyn_slices = dynamic_slice(&fx.slice, &fx.run.coverage);
        generate_fault_list(
            &fx.design,
            &fx.slice,
            Some(&dyn_slices),
            &fx.run.coverage,
            4,
            mode,
            semantics,
            &TargetSpec::all(),
            Some(&fx.run.mem_access),
        )
        .unwrap()
    }

    #[test]
    fn toy_prune_counts_match_hand_analysis() {
        let fx = toy_fixture();
        let exhaustive = toy_list(&fx, PruneMode::Exhaustive, FaultSemantics::Transient);
        let stat = toy_list(&fx, PruneMode::StaticPrune, FaultSemantics::Transient);
        let dynamic = toy_list(&fx, PruneMode::DynamicPrune, FaultSemantics::Transient);
        assert_eq!(exhaustive.len(), 12);
        // dead is outside the slice; r1 and r2 are read every cycle by
        // the xor statement
        assert_eq!(stat.len(), 8);
        assert_eq!(dynamic.len(), 8);
        assert_eq!(stat.faults, dynamic.faults);
        let dead = fx.design.lookup_signal("dead").unwrap();
        assert!(dynamic.faults.iter().all(|f| f.target != dead));
    }

    #[test]
    fn containment_chain_holds_on_the_toy() {
        let fx = toy_fixture();
        for semantics in [FaultSemantics::Transient, FaultSemantics::Persistent] {
            let exhaustive: BTreeSet<_> = toy_list(&fx, PruneMode::Exhaustive, semantics)
                .faults
                .into_iter()
                .collect();
            let stat: BTreeSet<_> = toy_list(&fx, PruneMode::StaticPrune, semantics)
                .faults
                .into_iter()
                .collect();
            let dynamic: BTreeSet<_> = toy_list(&fx, PruneMode::DynamicPrune, semantics)
                .faults
                .into_iter()
                .collect();
            let live: BTreeSet<_> = toy_list(&fx, PruneMode::DynamicLivePrune, semantics)
                .faults
                .into_iter()
                .collect();
            assert!(dynamic.is_subset(&stat));
            assert!(stat.is_subset(&exhaustive));
            assert!(dynamic.is_subset(&live), "live prune extends the window");
        }
    }

    #[test]
    fn dynamic_modes_require_the_slice_series() {
        let fx = toy_fixture();
        let err = generate_fault_list(
            &fx.design,
            &fx.slice,
            None,
            &fx.run.coverage,
            4,
            PruneMode::DynamicPrune,
            FaultSemantics::Transient,
            &TargetSpec::all(),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, SlicerError::ModeRequiresDynamicSlice(_)));
    }

    #[test]
    fn fault_list_is_sorted_and_deterministic() {
        let fx = toy_fixture();
        let a = toy_list(&fx, PruneMode::DynamicPrune, FaultSemantics::Transient);
        let b = toy_list(&fx, PruneMode::DynamicPrune, FaultSemantics::Transient);
        assert_eq!(a, b);
        let mut sorted = a.faults.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(a.faults, sorted);
    }

    #[test]
    fn fault_csv_round_trips() {
        let fx = toy_fixture();
        let list = toy_list(&fx, PruneMode::DynamicPrune, FaultSemantics::Transient);
        let text = list.to_csv_string(&fx.design);
        let back = FaultList::from_csv_str(&fx.design, &text, 4).unwrap();
        assert_eq!(list.faults, back.faults);
        assert_eq!(list.mode, back.mode);
    }

    #[test]
    fn fault_csv_rejects_out_of_bounds_rows() {
        let fx = toy_fixture();
        let text = "signal,row,bit,cycle,mode,semantics\nr1,0,3,0,exhaustive,transient\n";
        let err = FaultList::from_csv_str(&fx.design, text, 4).unwrap_err();
        assert!(matches!(err, SlicerError::BadFaultRow { .. }));
    }

    #[test]
    fn memory_rows_prune_to_golden_read_addresses() {
        // reads walk the memory one row per cycle: row c is read only at
        // cycle c (plus the post-commit re-read one cycle earlier)
        let design = load_design(
            "module m(clk, out); input clk; output [3:0] out;
             reg [1:0] ptr;
             reg [3:0] mem [0:3];
             assign out = mem[ptr];
             always @(posedge clk)
               ptr <= ptr + 2'd1;
             endmodule",
        )
        .unwrap();
        let pdg = build_pdg(&design);
        let obs: BTreeSet<SignalId> = [design.lookup_signal("out").unwrap()].into();
        let slice = static_slice(&pdg, &design, &obs).unwrap();
        let stim = Stimulus::new(&design, vec![], vec![vec![]; 4]);
        let observation: Vec<SignalId> = obs.iter().copied().collect();
        let run = simulate_golden(&design, &stim, &observation).unwrap();
        let dyn_slices = dynamic_slice(&slice, &run.coverage);
        let spec: TargetSpec = "mem".parse().unwrap();
        let list = generate_fault_list(
            &design,
            &slice,
            Some(&dyn_slices),
            &run.coverage,
            4,
            PruneMode::DynamicPrune,
            FaultSemantics::Transient,
            &spec,
            Some(&run.mem_access),
        )
        .unwrap();
        // in-cycle reads see ptr = 0,1,2,3 over the four cycles
        for f in &list.faults {
            assert_eq!(f.row, f.cycle, "only the row under the pointer is kept");
        }
        assert_eq!(list.len(), 4 * 4); // 4 cycles x 4 bits, one row each
        assert_eq!(list.universe_size, 4 * 4 * 4);
    }

    #[test]
    fn glob_patterns_select_targets() {
        let fx = toy_fixture();
        let spec: TargetSpec = "r*".parse().unwrap();
        let names: Vec<String> = spec
            .select(&fx.design)
            .iter()
            .map(|s| fx.design.signal(*s).name.clone())
            .collect();
        assert_eq!(names, ["r1", "r2"]);
        let spec: TargetSpec = "dead,r1".parse().unwrap();
        assert_eq!(spec.select(&fx.design).len(), 2);
    }
}
