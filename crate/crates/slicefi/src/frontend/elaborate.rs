//! Semantic elaboration: width resolution, def/use tables, driver and
//! loop checks.
//!
//! Width rules are strict: operands of a binary operator and both arms of
//! a ternary must have equal widths, and an assignment's right-hand side
//! must match its target width. Unsized literals adapt to the width of
//! their context; everything else must match exactly.

use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::*;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ElabError {
    #[error("combinational loop: {}", .0.join(" -> "))]
    CombinationalLoop(Vec<String>),
    #[error("signal `{0}` has multiple drivers")]
    MultipleDrivers(String),
    #[error("line {line}: width mismatch: expected {expected} bits, found {found}")]
    WidthMismatch {
        line: u32,
        expected: u32,
        found: u32,
    },
    #[error("line {line}: width of expression cannot be inferred; size a literal explicitly")]
    CannotInferWidth { line: u32 },
    #[error("line {line}: unsized literal in concatenation")]
    UnsizedInConcat { line: u32 },
    #[error("line {line}: select [{index}] out of range for `{signal}`")]
    SelectOutOfRange {
        line: u32,
        signal: String,
        index: u32,
    },
    #[error("line {line}: row {index} out of range for memory `{signal}` (depth {depth})")]
    MemoryIndexOutOfRange {
        line: u32,
        signal: String,
        index: u64,
        depth: u32,
    },
    #[error("line {line}: case label {value} does not fit the selector width")]
    CaseLabelTooWide { line: u32, value: u64 },
    #[error("line {line}: duplicate case label {value}")]
    DuplicateCaseLabel { line: u32, value: u64 },
    #[error("output `{0}` is never driven")]
    UndrivenOutput(String),
    #[error("wire `{0}` is never driven")]
    UndrivenWire(String),
    #[error("concatenation wider than 64 bits at line {line}")]
    ConcatTooWide { line: u32 },
}

/// Def/use sets of one statement.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefUse {
    pub def: Option<SignalId>,
    pub uses: BTreeSet<SignalId>,
}

/// A width-resolved design with dependency tables, ready for simulation
/// and slicing.
#[derive(Debug, Clone)]
pub struct ElaboratedDesign {
    design: Design,
    expr_widths: Vec<u32>,
    defuse: Vec<DefUse>,
    /// Continuous assigns in dependency order (drivers before readers).
    comb_order: Vec<StatementId>,
    sliceable: Vec<StatementId>,
    /// Per-signal dense memory slot; `None` for non-memories.
    mem_slot: Vec<Option<usize>>,
    memories: Vec<SignalId>,
}

impl ElaboratedDesign {
    pub fn ast(&self) -> &Design {
        &self.design
    }

    pub fn name(&self) -> &str {
        &self.design.name
    }

    pub fn signals(&self) -> &[SignalDecl] {
        &self.design.signals
    }

    pub fn signal(&self, id: SignalId) -> &SignalDecl {
        self.design.signal(id)
    }

    pub fn statements(&self) -> &[Statement] {
        &self.design.statements
    }

    pub fn statement(&self, id: StatementId) -> &Statement {
        self.design.statement(id)
    }

    pub fn expr(&self, id: ExprId) -> &Expr {
        self.design.expr(id)
    }

    pub fn expr_width(&self, id: ExprId) -> u32 {
        self.expr_widths[id.index()]
    }

    pub fn processes(&self) -> &[ProcessDef] {
        &self.design.processes
    }

    pub fn cont_assigns(&self) -> &[StatementId] {
        &self.design.cont_assigns
    }

    /// Continuous assigns in evaluation (dependency) order.
    pub fn comb_order(&self) -> &[StatementId] {
        &self.comb_order
    }

    /// Sliceable statements: assigns and If/Case headers, ascending.
    pub fn sliceable_statements(&self) -> &[StatementId] {
        &self.sliceable
    }

    pub fn memories(&self) -> &[SignalId] {
        &self.memories
    }

    pub fn mem_slot(&self, id: SignalId) -> Option<usize> {
        self.mem_slot[id.index()]
    }

    /// Def/use sets of an elaborated statement. Headers define nothing;
    /// a partial-width write both defines and uses its target.
    pub fn def_use(&self, stmt: StatementId) -> (BTreeSet<SignalId>, BTreeSet<SignalId>) {
        let du = &self.defuse[stmt.index()];
        (du.def.into_iter().collect(), du.uses.clone())
    }

    pub fn def_of(&self, stmt: StatementId) -> Option<SignalId> {
        self.defuse[stmt.index()].def
    }

    pub fn uses_of(&self, stmt: StatementId) -> &BTreeSet<SignalId> {
        &self.defuse[stmt.index()].uses
    }

    pub fn lookup_signal(&self, name: &str) -> Option<SignalId> {
        self.design.lookup_signal(name)
    }

    pub fn stimulus_inputs(&self) -> Vec<SignalId> {
        self.design.stimulus_inputs()
    }

    /// Storage signals (regs and memories) in declaration order.
    pub fn storage_signals(&self) -> Vec<SignalId> {
        self.design
            .signals
            .iter()
            .filter(|s| s.kind.is_storage())
            .map(|s| s.id)
            .collect()
    }
}

pub fn elaborate(design: Design) -> Result<ElaboratedDesign, ElabError> {
    let mut widths = Widths {
        design: &design,
        widths: vec![0; design.exprs.len()],
    };

    // width-check every statement
    for stmt in &design.statements {
        widths.check_statement(stmt)?;
    }

    // def/use tables
    let mut defuse = vec![DefUse::default(); design.statements.len()];
    for stmt in &design.statements {
        defuse[stmt.id.index()] = statement_defuse(&design, stmt);
    }

    check_drivers(&design)?;
    let comb_order = order_continuous_assigns(&design, &defuse)?;

    let sliceable = design.sliceable_statements();
    let mut mem_slot = vec![None; design.signals.len()];
    let mut memories = Vec::new();
    for s in &design.signals {
        if s.kind == SignalKind::Memory {
            mem_slot[s.id.index()] = Some(memories.len());
            memories.push(s.id);
        }
    }

    Ok(ElaboratedDesign {
        expr_widths: widths.widths,
        design,
        defuse,
        comb_order,
        sliceable,
        mem_slot,
        memories,
    })
}

// ---- width inference ----

struct Widths<'a> {
    design: &'a Design,
    widths: Vec<u32>,
}

impl<'a> Widths<'a> {
    fn check_statement(&mut self, stmt: &Statement) -> Result<(), ElabError> {
        let line = stmt.loc.line;
        match &stmt.kind {
            StatementKind::NonBlockingAssign { target, rhs }
            | StatementKind::ContinuousAssign { target, rhs } => {
                let tw = self.target_width(target, line)?;
                self.infer(*rhs, Some(tw))?;
                Ok(())
            }
            StatementKind::If { cond, .. } => {
                self.infer(*cond, None)?;
                Ok(())
            }
            StatementKind::Case {
                selector, arms, ..
            } => {
                let sw = self.infer(*selector, None)?;
                let mut seen = BTreeSet::new();
                for (label, _) in arms {
                    if let Some(w) = label.width {
                        if w != sw {
                            return Err(ElabError::WidthMismatch {
                                line,
                                expected: sw,
                                found: w,
                            });
                        }
                    } else if sw < 64 && label.value >= (1u64 << sw) {
                        return Err(ElabError::CaseLabelTooWide {
                            line,
                            value: label.value,
                        });
                    }
                    if !seen.insert(label.value) {
                        return Err(ElabError::DuplicateCaseLabel {
                            line,
                            value: label.value,
                        });
                    }
                }
                Ok(())
            }
            StatementKind::Block { .. } => Ok(()),
        }
    }

    fn target_width(&mut self, target: &Target, line: u32) -> Result<u32, ElabError> {
        let decl = self.design.signal(target.signal);
        if let Some(index) = target.index {
            self.infer(index, None)?;
            self.check_const_mem_index(decl, index)?;
            return Ok(decl.width);
        }
        if let Some((msb, lsb)) = target.range {
            if msb >= decl.width {
                return Err(ElabError::SelectOutOfRange {
                    line,
                    signal: decl.name.clone(),
                    index: msb,
                });
            }
            return Ok(msb - lsb + 1);
        }
        Ok(decl.width)
    }

    fn check_const_mem_index(
        &self,
        decl: &SignalDecl,
        index: ExprId,
    ) -> Result<(), ElabError> {
        let e = self.design.expr(index);
        if let ExprKind::Const(lit) = &e.kind {
            if lit.value >= decl.depth as u64 {
                return Err(ElabError::MemoryIndexOutOfRange {
                    line: e.loc.line,
                    signal: decl.name.clone(),
                    index: lit.value,
                    depth: decl.depth,
                });
            }
        }
        Ok(())
    }

    /// Width an expression would take with no context, if determinable.
    fn det_width(&self, id: ExprId) -> Option<u32> {
        match &self.design.expr(id).kind {
            ExprKind::Const(lit) => lit.width,
            ExprKind::Ref(r) => self.ref_width(r).ok(),
            ExprKind::Unary { op, operand } => match op {
                UnaryOp::LogicNot => Some(1),
                UnaryOp::BitNot => self.det_width(*operand),
            },
            ExprKind::Binary { op, lhs, rhs } => {
                if op.is_comparison() {
                    Some(1)
                } else {
                    self.det_width(*lhs).or_else(|| self.det_width(*rhs))
                }
            }
            ExprKind::Ternary {
                then_val, else_val, ..
            } => self
                .det_width(*then_val)
                .or_else(|| self.det_width(*else_val)),
            ExprKind::Concat(parts) => {
                let mut sum = 0u32;
                for p in parts {
                    sum = sum.checked_add(self.det_width(*p)?)?;
                }
                Some(sum)
            }
        }
    }

    fn ref_width(&self, r: &Ref) -> Result<u32, ElabError> {
        match r {
            Ref::Signal(s) => Ok(self.design.signal(*s).width),
            Ref::MemRow { signal, .. } => Ok(self.design.signal(*signal).width),
            Ref::BitSelect { .. } => Ok(1),
            Ref::RangeSelect { msb, lsb, .. } => Ok(msb - lsb + 1),
        }
    }

    /// Resolve and record the width of `id` under an optional expected
    /// width, checking every sub-expression.
    fn infer(&mut self, id: ExprId, ctx: Option<u32>) -> Result<u32, ElabError> {
        let expr = self.design.expr(id).clone();
        let line = expr.loc.line;
        let w = match &expr.kind {
            ExprKind::Const(lit) => match (lit.width, ctx) {
                (Some(w), Some(c)) => {
                    if w != c {
                        return Err(ElabError::WidthMismatch {
                            line,
                            expected: c,
                            found: w,
                        });
                    }
                    w
                }
                (Some(w), None) => w,
                (None, Some(c)) => {
                    if c < 64 && lit.value >= (1u64 << c) {
                        return Err(ElabError::WidthMismatch {
                            line,
                            expected: c,
                            found: 64 - lit.value.leading_zeros(),
                        });
                    }
                    c
                }
                (None, None) => minimal_width(lit.value),
            },
            ExprKind::Ref(r) => {
                self.check_ref(r, line)?;
                let w = self.ref_width(r)?;
                if let Some(c) = ctx {
                    if w != c {
                        return Err(ElabError::WidthMismatch {
                            line,
                            expected: c,
                            found: w,
                        });
                    }
                }
                w
            }
            ExprKind::Unary { op, operand } => match op {
                UnaryOp::LogicNot => {
                    self.infer(*operand, None)?;
                    self.expect_ctx(1, ctx, line)?
                }
                UnaryOp::BitNot => {
                    let w = match ctx {
                        Some(c) => self.infer(*operand, Some(c))?,
                        None => {
                            let w = self
                                .det_width(*operand)
                                .ok_or(ElabError::CannotInferWidth { line })?;
                            self.infer(*operand, Some(w))?
                        }
                    };
                    w
                }
            },
            ExprKind::Binary { op, lhs, rhs } => {
                if op.is_comparison() {
                    let w = self
                        .det_width(*lhs)
                        .or_else(|| self.det_width(*rhs))
                        .ok_or(ElabError::CannotInferWidth { line })?;
                    self.infer(*lhs, Some(w))?;
                    self.infer(*rhs, Some(w))?;
                    self.expect_ctx(1, ctx, line)?
                } else {
                    let w = match ctx {
                        Some(c) => c,
                        None => self
                            .det_width(*lhs)
                            .or_else(|| self.det_width(*rhs))
                            .ok_or(ElabError::CannotInferWidth { line })?,
                    };
                    self.infer(*lhs, Some(w))?;
                    self.infer(*rhs, Some(w))?;
                    w
                }
            }
            ExprKind::Ternary {
                cond,
                then_val,
                else_val,
            } => {
                self.infer(*cond, None)?;
                let w = match ctx {
                    Some(c) => c,
                    None => self
                        .det_width(*then_val)
                        .or_else(|| self.det_width(*else_val))
                        .ok_or(ElabError::CannotInferWidth { line })?,
                };
                self.infer(*then_val, Some(w))?;
                self.infer(*else_val, Some(w))?;
                w
            }
            ExprKind::Concat(parts) => {
                let mut sum = 0u32;
                for p in parts {
                    let pw = self
                        .det_width(*p)
                        .ok_or(ElabError::UnsizedInConcat { line })?;
                    self.infer(*p, Some(pw))?;
                    sum = sum
                        .checked_add(pw)
                        .filter(|s| *s <= 64)
                        .ok_or(ElabError::ConcatTooWide { line })?;
                }
                self.expect_ctx(sum, ctx, line)?
            }
        };
        self.widths[id.index()] = w;
        Ok(w)
    }

    fn expect_ctx(&self, w: u32, ctx: Option<u32>, line: u32) -> Result<u32, ElabError> {
        match ctx {
            Some(c) if c != w => Err(ElabError::WidthMismatch {
                line,
                expected: c,
                found: w,
            }),
            _ => Ok(w),
        }
    }

    fn check_ref(&mut self, r: &Ref, line: u32) -> Result<(), ElabError> {
        match r {
            Ref::Signal(_) => Ok(()),
            Ref::MemRow { signal, index } => {
                self.infer(*index, None)?;
                self.check_const_mem_index(self.design.signal(*signal), *index)
            }
            Ref::BitSelect { base, bit } => {
                self.check_ref(base, line)?;
                let bw = self.ref_width(base)?;
                if *bit >= bw {
                    return Err(ElabError::SelectOutOfRange {
                        line,
                        signal: self.design.signal(base.signal()).name.clone(),
                        index: *bit,
                    });
                }
                Ok(())
            }
            Ref::RangeSelect { base, msb, .. } => {
                self.check_ref(base, line)?;
                let bw = self.ref_width(base)?;
                if *msb >= bw {
                    return Err(ElabError::SelectOutOfRange {
                        line,
                        signal: self.design.signal(base.signal()).name.clone(),
                        index: *msb,
                    });
                }
                Ok(())
            }
        }
    }
}

fn minimal_width(value: u64) -> u32 {
    (64 - value.leading_zeros()).max(1)
}

// ---- def/use ----

fn statement_defuse(design: &Design, stmt: &Statement) -> DefUse {
    let mut du = DefUse::default();
    let mut reads = Vec::new();
    match &stmt.kind {
        StatementKind::NonBlockingAssign { target, rhs }
        | StatementKind::ContinuousAssign { target, rhs } => {
            du.def = Some(target.signal);
            design.expr_reads(*rhs, &mut reads);
            if let Some(index) = target.index {
                design.expr_reads(index, &mut reads);
            }
            // a partial write reads the untouched bits of its target
            if target.range.is_some() {
                reads.push(target.signal);
            }
        }
        StatementKind::If { cond, .. } => design.expr_reads(*cond, &mut reads),
        StatementKind::Case { selector, .. } => design.expr_reads(*selector, &mut reads),
        StatementKind::Block { .. } => {}
    }
    du.uses = reads.into_iter().collect();
    du
}

// ---- driver discipline ----

fn check_drivers(design: &Design) -> Result<(), ElabError> {
    // each reg/memory written in at most one process
    let n = design.signals.len();
    let mut seq_driver: Vec<Option<usize>> = vec![None; n];
    for (pidx, proc_def) in design.processes.iter().enumerate() {
        let mut stack = vec![proc_def.body];
        while let Some(sid) = stack.pop() {
            let stmt = design.statement(sid);
            if let StatementKind::NonBlockingAssign { target, .. } = &stmt.kind {
                let slot = &mut seq_driver[target.signal.index()];
                match slot {
                    Some(owner) if *owner != pidx => {
                        return Err(ElabError::MultipleDrivers(
                            design.signal(target.signal).name.clone(),
                        ))
                    }
                    _ => *slot = Some(pidx),
                }
            }
            stack.extend(stmt.children());
        }
    }

    // each wire/output driven by exactly one continuous assign
    let mut cont_driver = vec![0u32; n];
    for &sid in &design.cont_assigns {
        if let StatementKind::ContinuousAssign { target, .. } = &design.statement(sid).kind {
            cont_driver[target.signal.index()] += 1;
        }
    }
    for decl in &design.signals {
        let drivers = cont_driver[decl.id.index()];
        match decl.kind {
            SignalKind::Wire | SignalKind::Output => {
                if drivers > 1 {
                    return Err(ElabError::MultipleDrivers(decl.name.clone()));
                }
                if drivers == 0 {
                    return Err(match decl.kind {
                        SignalKind::Output => ElabError::UndrivenOutput(decl.name.clone()),
                        _ => ElabError::UndrivenWire(decl.name.clone()),
                    });
                }
            }
            _ => {}
        }
    }
    Ok(())
}

// ---- combinational ordering ----

/// Topologically order continuous assigns so drivers evaluate before
/// readers; reports any wire-to-wire cycle. Registers, memories, and
/// inputs break cycles by construction.
fn order_continuous_assigns(
    design: &Design,
    defuse: &[DefUse],
) -> Result<Vec<StatementId>, ElabError> {
    // assign index per combinationally-driven signal
    let mut driver_of: Vec<Option<usize>> = vec![None; design.signals.len()];
    for (i, &sid) in design.cont_assigns.iter().enumerate() {
        if let StatementKind::ContinuousAssign { target, .. } = &design.statement(sid).kind {
            driver_of[target.signal.index()] = Some(i);
        }
    }

    let n = design.cont_assigns.len();
    // deps[i] = assigns whose targets assign i reads
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &sid) in design.cont_assigns.iter().enumerate() {
        for &used in &defuse[sid.index()].uses {
            let kind = design.signal(used).kind;
            if matches!(kind, SignalKind::Wire | SignalKind::Output) {
                if let Some(j) = driver_of[used.index()] {
                    deps[i].push(j);
                }
            }
        }
    }

    // DFS with cycle detection, visiting in source order for determinism
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let mut mark = vec![Mark::White; n];
    let mut order = Vec::with_capacity(n);

    fn visit(
        i: usize,
        design: &Design,
        deps: &[Vec<usize>],
        mark: &mut [Mark],
        order: &mut Vec<StatementId>,
        trail: &mut Vec<usize>,
    ) -> Result<(), ElabError> {
        match mark[i] {
            Mark::Black => return Ok(()),
            Mark::Grey => {
                // close the loop from the first occurrence of i
                let start = trail.iter().position(|t| *t == i).unwrap_or(0);
                let mut names: Vec<String> = trail[start..]
                    .iter()
                    .map(|&t| target_name(design, t))
                    .collect();
                names.push(target_name(design, i));
                return Err(ElabError::CombinationalLoop(names));
            }
            Mark::White => {}
        }
        mark[i] = Mark::Grey;
        trail.push(i);
        for &j in &deps[i] {
            visit(j, design, deps, mark, order, trail)?;
        }
        trail.pop();
        mark[i] = Mark::Black;
        order.push(design.cont_assigns[i]);
        Ok(())
    }

    fn target_name(design: &Design, assign_idx: usize) -> String {
        let sid = design.cont_assigns[assign_idx];
        match &design.statement(sid).kind {
            StatementKind::ContinuousAssign { target, .. } => {
                design.signal(target.signal).name.clone()
            }
            _ => unreachable!(),
        }
    }

    let mut trail = Vec::new();
    for i in 0..n {
        visit(i, design, &deps, &mut mark, &mut order, &mut trail)?;
    }
    Ok(order)
}
