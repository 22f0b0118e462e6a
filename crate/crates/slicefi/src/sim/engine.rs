//! Cycle-stepping core shared by the golden run and fault injection.
//!
//! Cycle semantics: apply inputs, evaluate continuous assigns in
//! dependency order, walk each sequential process with start-of-cycle
//! register values, then commit all nonblocking writes at once. After the
//! commit (and any transient-fault restore) the combinational fabric is
//! re-evaluated so observation sampling sees post-edge values.

use crate::bits::mask;
use crate::frontend::{
    ElaboratedDesign, ExprId, ExprKind, Ref, SignalId, StatementId, StatementKind, UnaryOp,
};

use super::SimError;

/// Mutable simulation state. One owner per running simulation; the
/// design and stimulus are shared immutably.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    /// Current value of every non-memory signal, indexed by SignalId.
    values: Vec<u64>,
    /// Memory contents, indexed by memory slot then row.
    mems: Vec<Vec<u64>>,
    cycle: u32,
}

impl SimState {
    /// Fresh state with every register, memory and wire at zero.
    pub fn new(design: &ElaboratedDesign) -> Self {
        let mems = design
            .memories()
            .iter()
            .map(|m| vec![0u64; design.signal(*m).depth as usize])
            .collect();
        Self {
            values: vec![0; design.signals().len()],
            mems,
            cycle: 0,
        }
    }

    pub fn cycle(&self) -> u32 {
        self.cycle
    }

    pub fn value(&self, signal: SignalId) -> u64 {
        self.values[signal.index()]
    }

    pub fn mem_row(&self, slot: usize, row: u32) -> u64 {
        self.mems[slot][row as usize]
    }

    pub(crate) fn set_value(&mut self, signal: SignalId, value: u64) {
        self.values[signal.index()] = value;
    }

    pub(crate) fn xor_storage_bit(&mut self, loc: &StorageBit) {
        match loc.mem_slot {
            Some(slot) => self.mems[slot][loc.row as usize] ^= 1u64 << loc.bit,
            None => self.values[loc.signal.index()] ^= 1u64 << loc.bit,
        }
    }
}

/// One addressable stored bit (a register bit or a memory row bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StorageBit {
    pub signal: SignalId,
    pub mem_slot: Option<usize>,
    pub row: u32,
    pub bit: u32,
}

/// Fault behaviour over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaultSemantics {
    /// The flip lives for one cycle: unless the target storage is
    /// committed-written during the injection cycle, the original bit is
    /// restored at the end of it. Writes computed from the faulty value
    /// legitimately persist.
    Transient,
    /// The flip stays until overwritten by a normal write.
    Persistent,
}

/// Fault to apply while stepping its injection cycle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ActiveFault {
    pub location: StorageBit,
    pub semantics: FaultSemantics,
}

/// Per-cycle recording sinks for the golden run.
#[derive(Debug, Default)]
pub(crate) struct CycleRecord {
    pub executed: Vec<StatementId>,
    /// Memory rows read while the cycle executes (statement, memory, row).
    pub mem_reads_during: Vec<(StatementId, SignalId, u32)>,
    /// Memory rows read by the post-commit combinational re-evaluation.
    pub mem_reads_post: Vec<(StatementId, SignalId, u32)>,
    /// Memory rows committed this cycle.
    pub mem_writes: Vec<(SignalId, u32)>,
}

#[derive(Debug, Default)]
pub(crate) struct StepOptions<'a> {
    pub fault: Option<ActiveFault>,
    /// Statements whose committed effect is forced to zero (slice
    /// soundness testing).
    pub suppress: Option<&'a [bool]>,
    pub record: bool,
}

struct PendingWrite {
    signal: SignalId,
    mem_slot: Option<usize>,
    row: u32,
    range: Option<(u32, u32)>,
    value: u64,
}

pub(crate) fn step_cycle(
    design: &ElaboratedDesign,
    state: &mut SimState,
    input_ids: &[SignalId],
    input_row: &[u64],
    opts: &StepOptions,
) -> Result<CycleRecord, SimError> {
    debug_assert_eq!(input_ids.len(), input_row.len());
    let mut record = CycleRecord::default();
    let mut executed = vec![false; design.statements().len()];

    // fault flip precedes everything in the cycle
    if let Some(fault) = &opts.fault {
        state.xor_storage_bit(&fault.location);
    }

    for (sig, val) in input_ids.iter().zip(input_row) {
        let w = design.signal(*sig).width;
        state.values[sig.index()] = val & mask(w);
    }

    // continuous assigns, dependency order; always counted as executed
    for &sid in design.comb_order() {
        let (target, rhs) = match &design.statement(sid).kind {
            StatementKind::ContinuousAssign { target, rhs } => (target, rhs),
            _ => unreachable!(),
        };
        let mut value = eval(
            design,
            state,
            *rhs,
            sid,
            if opts.record {
                Some(&mut record.mem_reads_during)
            } else {
                None
            },
        )?;
        if suppressed(opts, sid) {
            value = 0;
        }
        state.values[target.signal.index()] = value;
        executed[sid.index()] = true;
    }

    // sequential processes: conditions see start-of-cycle registers and
    // the wire values just computed; writes are queued
    let mut pending: Vec<PendingWrite> = Vec::new();
    for proc_def in design.processes() {
        exec_statement(
            design,
            state,
            proc_def.body,
            opts,
            &mut executed,
            &mut pending,
            &mut record,
        )?;
    }

    // commit all nonblocking writes at once (source order within the
    // queue: later writes win, partial writes read-modify-write)
    let mut written_signal = vec![false; design.signals().len()];
    for w in &pending {
        written_signal[w.signal.index()] = true;
        match w.mem_slot {
            Some(slot) => {
                state.mems[slot][w.row as usize] = w.value;
                if opts.record {
                    record.mem_writes.push((w.signal, w.row));
                }
            }
            None => {
                let cur = state.values[w.signal.index()];
                state.values[w.signal.index()] = match w.range {
                    None => w.value,
                    Some((msb, lsb)) => {
                        let m = mask(msb - lsb + 1) << lsb;
                        (cur & !m) | ((w.value << lsb) & m)
                    }
                };
            }
        }
    }

    // transient restore: if the fault target storage was not committed
    // this cycle, put the original bit back before anything can observe
    // the post-edge state
    if let Some(fault) = &opts.fault {
        if fault.semantics == FaultSemantics::Transient {
            let written = match fault.location.mem_slot {
                Some(_) => pending.iter().any(|w| {
                    w.signal == fault.location.signal && w.row == fault.location.row
                }),
                None => written_signal[fault.location.signal.index()],
            };
            if !written {
                state.xor_storage_bit(&fault.location);
            }
        }
    }

    // post-commit combinational re-evaluation for end-of-cycle sampling
    for &sid in design.comb_order() {
        let (target, rhs) = match &design.statement(sid).kind {
            StatementKind::ContinuousAssign { target, rhs } => (target, rhs),
            _ => unreachable!(),
        };
        let mut value = eval(
            design,
            state,
            *rhs,
            sid,
            if opts.record {
                Some(&mut record.mem_reads_post)
            } else {
                None
            },
        )?;
        if suppressed(opts, sid) {
            value = 0;
        }
        state.values[target.signal.index()] = value;
    }

    if opts.record {
        record.executed = executed
            .iter()
            .enumerate()
            .filter(|(_, e)| **e)
            .map(|(i, _)| StatementId(i as u32))
            .collect();
    }
    state.cycle += 1;
    Ok(record)
}

fn suppressed(opts: &StepOptions, sid: StatementId) -> bool {
    opts.suppress.is_some_and(|s| s[sid.index()])
}

#[allow(clippy::too_many_arguments)]
fn exec_statement(
    design: &ElaboratedDesign,
    state: &SimState,
    sid: StatementId,
    opts: &StepOptions,
    executed: &mut [bool],
    pending: &mut Vec<PendingWrite>,
    record: &mut CycleRecord,
) -> Result<(), SimError> {
    let stmt = design.statement(sid);
    macro_rules! log {
        () => {
            if opts.record {
                Some(&mut record.mem_reads_during)
            } else {
                None
            }
        };
    }
    match &stmt.kind {
        StatementKind::Block { body } => {
            for &child in body {
                exec_statement(design, state, child, opts, executed, pending, record)?;
            }
        }
        StatementKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            executed[sid.index()] = true;
            let c = eval(design, state, *cond, sid, log!())?;
            let taken = if c != 0 {
                Some(*then_branch)
            } else {
                *else_branch
            };
            if let Some(branch) = taken {
                exec_statement(design, state, branch, opts, executed, pending, record)?;
            }
        }
        StatementKind::Case {
            selector,
            arms,
            default,
        } => {
            executed[sid.index()] = true;
            let v = eval(design, state, *selector, sid, log!())?;
            let taken = arms
                .iter()
                .find(|(label, _)| label.value == v)
                .map(|(_, body)| *body)
                .or(*default);
            if let Some(branch) = taken {
                exec_statement(design, state, branch, opts, executed, pending, record)?;
            }
        }
        StatementKind::NonBlockingAssign { target, rhs } => {
            executed[sid.index()] = true;
            let row = match target.index {
                Some(index_expr) => {
                    let decl = design.signal(target.signal);
                    let idx = eval(design, state, index_expr, sid, log!())?;
                    if idx >= decl.depth as u64 {
                        return Err(SimError::MemoryIndexOutOfRange {
                            signal: decl.name.clone(),
                            index: idx,
                            depth: decl.depth,
                            cycle: state.cycle,
                        });
                    }
                    idx as u32
                }
                None => 0,
            };
            let mut value = eval(design, state, *rhs, sid, log!())?;
            if suppressed(opts, sid) {
                value = 0;
            }
            pending.push(PendingWrite {
                signal: target.signal,
                mem_slot: design.mem_slot(target.signal),
                row,
                range: target.range,
                value,
            });
        }
        StatementKind::ContinuousAssign { .. } => unreachable!("not reachable from a process"),
    }
    Ok(())
}

/// Expression evaluation against current state. Ternaries evaluate both
/// arms (mux semantics), so memory reads on either side are real reads.
fn eval(
    design: &ElaboratedDesign,
    state: &SimState,
    expr: ExprId,
    stmt: StatementId,
    mut mem_log: Option<&mut Vec<(StatementId, SignalId, u32)>>,
) -> Result<u64, SimError> {
    eval_inner(design, state, expr, stmt, &mut mem_log)
}

fn eval_inner(
    design: &ElaboratedDesign,
    state: &SimState,
    expr: ExprId,
    stmt: StatementId,
    mem_log: &mut Option<&mut Vec<(StatementId, SignalId, u32)>>,
) -> Result<u64, SimError> {
    let width = design.expr_width(expr);
    let value = match &design.expr(expr).kind {
        ExprKind::Const(lit) => lit.value,
        ExprKind::Ref(r) => eval_ref(design, state, r, stmt, mem_log)?,
        ExprKind::Unary { op, operand } => {
            let v = eval_inner(design, state, *operand, stmt, mem_log)?;
            match op {
                UnaryOp::BitNot => !v,
                UnaryOp::LogicNot => (v == 0) as u64,
            }
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let a = eval_inner(design, state, *lhs, stmt, mem_log)?;
            let b = eval_inner(design, state, *rhs, stmt, mem_log)?;
            use crate::frontend::BinaryOp::*;
            match op {
                And => a & b,
                Or => a | b,
                Xor => a ^ b,
                Add => a.wrapping_add(b),
                Sub => a.wrapping_sub(b),
                Eq => (a == b) as u64,
                Neq => (a != b) as u64,
                Lt => (a < b) as u64,
            }
        }
        ExprKind::Ternary {
            cond,
            then_val,
            else_val,
        } => {
            let c = eval_inner(design, state, *cond, stmt, mem_log)?;
            let t = eval_inner(design, state, *then_val, stmt, mem_log)?;
            let e = eval_inner(design, state, *else_val, stmt, mem_log)?;
            if c != 0 {
                t
            } else {
                e
            }
        }
        ExprKind::Concat(parts) => {
            let mut acc = 0u64;
            for p in parts {
                let pw = design.expr_width(*p);
                let v = eval_inner(design, state, *p, stmt, mem_log)?;
                acc = (acc << pw) | v;
            }
            acc
        }
    };
    Ok(value & mask(width))
}

fn eval_ref(
    design: &ElaboratedDesign,
    state: &SimState,
    r: &Ref,
    stmt: StatementId,
    mem_log: &mut Option<&mut Vec<(StatementId, SignalId, u32)>>,
) -> Result<u64, SimError> {
    match r {
        Ref::Signal(s) => Ok(state.values[s.index()]),
        Ref::MemRow { signal, index } => {
            let decl = design.signal(*signal);
            let idx = eval_inner(design, state, *index, stmt, mem_log)?;
            if idx >= decl.depth as u64 {
                return Err(SimError::MemoryIndexOutOfRange {
                    signal: decl.name.clone(),
                    index: idx,
                    depth: decl.depth,
                    cycle: state.cycle,
                });
            }
            if let Some(log) = mem_log.as_deref_mut() {
                log.push((stmt, *signal, idx as u32));
            }
            let slot = design.mem_slot(*signal).expect("memory has a slot");
            Ok(state.mems[slot][idx as usize])
        }
        Ref::BitSelect { base, bit } => {
            let v = eval_ref(design, state, base, stmt, mem_log)?;
            Ok((v >> bit) & 1)
        }
        Ref::RangeSelect { base, msb, lsb } => {
            let v = eval_ref(design, state, base, stmt, mem_log)?;
            Ok((v >> lsb) & mask(msb - lsb + 1))
        }
    }
}
