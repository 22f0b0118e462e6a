//! Name-resolved syntax tree for MiniRTL designs.
//!
//! Identifiers are dense and deterministic: signals are numbered in
//! declaration order, statements in source (preorder) order, expressions
//! in the order the parser builds them. Parsing identical bytes always
//! yields identical ids.

use std::fmt;

/// Dense, design-unique signal identifier (declaration order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignalId(pub u32);

/// Dense, design-unique statement identifier (source preorder).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StatementId(pub u32);

/// Index into the design's expression arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExprId(pub u32);

impl SignalId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl StatementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ExprId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SignalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Source position, 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceLoc {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for SourceLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignalKind {
    Input,
    Output,
    Wire,
    Reg,
    Memory,
}

impl SignalKind {
    pub fn is_storage(self) -> bool {
        matches!(self, SignalKind::Reg | SignalKind::Memory)
    }
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SignalKind::Input => "input",
            SignalKind::Output => "output",
            SignalKind::Wire => "wire",
            SignalKind::Reg => "reg",
            SignalKind::Memory => "memory",
        };
        f.write_str(s)
    }
}

/// A declared signal. `depth` is 0 for everything but memories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalDecl {
    pub id: SignalId,
    pub name: String,
    pub kind: SignalKind,
    pub width: u32,
    pub depth: u32,
    pub loc: SourceLoc,
}

impl SignalDecl {
    /// Number of storage rows: `depth` for memories, 1 otherwise.
    pub fn rows(&self) -> u32 {
        if self.kind == SignalKind::Memory {
            self.depth
        } else {
            1
        }
    }
}

/// Integer literal. `width` is `None` for bare (unsized) literals, whose
/// width is inferred from context during elaboration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub value: u64,
    pub width: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    /// Bitwise complement `~`, width-preserving.
    BitNot,
    /// Logical negation `!`, 1-bit result.
    LogicNot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    And,
    Or,
    Xor,
    Add,
    Sub,
    Eq,
    Neq,
    Lt,
}

impl BinaryOp {
    /// Comparison operators produce a 1-bit result.
    pub fn is_comparison(self) -> bool {
        matches!(self, BinaryOp::Eq | BinaryOp::Neq | BinaryOp::Lt)
    }
}

/// A readable reference: a signal, a memory row, or a constant bit/part
/// select of either. Selects apply only to references, not to arbitrary
/// expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ref {
    Signal(SignalId),
    /// `mem[index]`
    MemRow { signal: SignalId, index: ExprId },
    /// `base[bit]` with a constant bit index.
    BitSelect { base: Box<Ref>, bit: u32 },
    /// `base[msb:lsb]` with constant bounds, msb >= lsb.
    RangeSelect { base: Box<Ref>, msb: u32, lsb: u32 },
}

impl Ref {
    pub fn signal(&self) -> SignalId {
        match self {
            Ref::Signal(s) => *s,
            Ref::MemRow { signal, .. } => *signal,
            Ref::BitSelect { base, .. } | Ref::RangeSelect { base, .. } => base.signal(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Const(Literal),
    Ref(Ref),
    Unary {
        op: UnaryOp,
        operand: ExprId,
    },
    Binary {
        op: BinaryOp,
        lhs: ExprId,
        rhs: ExprId,
    },
    /// `cond ? then_val : else_val`. Both arms are evaluated eagerly,
    /// like a hardware mux.
    Ternary {
        cond: ExprId,
        then_val: ExprId,
        else_val: ExprId,
    },
    /// `{a, b, ...}` most-significant part first.
    Concat(Vec<ExprId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub loc: SourceLoc,
}

/// Assignment destination: whole signal, memory row, or constant part of
/// a register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Target {
    pub signal: SignalId,
    /// Memory row index expression (memories only).
    pub index: Option<ExprId>,
    /// Constant bit range `(msb, lsb)`; a single-bit select is `(b, b)`.
    pub range: Option<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    /// `target <= rhs;` inside a sequential process.
    NonBlockingAssign { target: Target, rhs: ExprId },
    /// Top-level `assign target = rhs;`.
    ContinuousAssign { target: Target, rhs: ExprId },
    If {
        cond: ExprId,
        then_branch: StatementId,
        else_branch: Option<StatementId>,
    },
    Case {
        selector: ExprId,
        /// `(label, body)` pairs in source order. Labels are constants.
        arms: Vec<(Literal, StatementId)>,
        default: Option<StatementId>,
    },
    /// `begin ... end`. Transparent for slicing and coverage.
    Block { body: Vec<StatementId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub id: StatementId,
    pub kind: StatementKind,
    pub loc: SourceLoc,
}

impl Statement {
    /// Assigns and If/Case headers are the units of coverage and slicing.
    pub fn is_sliceable(&self) -> bool {
        !matches!(self.kind, StatementKind::Block { .. })
    }

    /// Child statement ids, in source order.
    pub fn children(&self) -> Vec<StatementId> {
        match &self.kind {
            StatementKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                let mut v = vec![*then_branch];
                v.extend(else_branch.iter().copied());
                v
            }
            StatementKind::Case { arms, default, .. } => {
                let mut v: Vec<StatementId> = arms.iter().map(|(_, s)| *s).collect();
                v.extend(default.iter().copied());
                v
            }
            StatementKind::Block { body } => body.clone(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessKind {
    /// `always @(posedge clk)`.
    Sequential,
    /// Reserved for combinational always blocks; MiniRTL expresses
    /// combinational logic with continuous assigns instead.
    Combinational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessDef {
    pub kind: ProcessKind,
    /// Root of the process body statement tree.
    pub body: StatementId,
    pub loc: SourceLoc,
}

/// A parsed, name-resolved design. Widths and semantic checks are applied
/// by [`super::elaborate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    pub name: String,
    /// Port names in header order (each resolves to an input or output).
    pub ports: Vec<SignalId>,
    pub signals: Vec<SignalDecl>,
    /// Sequential processes, in source order.
    pub processes: Vec<ProcessDef>,
    /// Continuous assign statements, in source order.
    pub cont_assigns: Vec<StatementId>,
    pub statements: Vec<Statement>,
    pub exprs: Vec<Expr>,
}

impl Design {
    pub fn signal(&self, id: SignalId) -> &SignalDecl {
        &self.signals[id.index()]
    }

    pub fn statement(&self, id: StatementId) -> &Statement {
        &self.statements[id.index()]
    }

    pub fn expr(&self, id: ExprId) -> &Expr {
        &self.exprs[id.index()]
    }

    pub fn lookup_signal(&self, name: &str) -> Option<SignalId> {
        self.signals.iter().find(|s| s.name == name).map(|s| s.id)
    }

    /// Non-clock inputs in declaration order.
    pub fn stimulus_inputs(&self) -> Vec<SignalId> {
        self.signals
            .iter()
            .filter(|s| s.kind == SignalKind::Input && s.name != "clk")
            .map(|s| s.id)
            .collect()
    }

    /// Sliceable statement ids (assigns and If/Case headers), ascending.
    pub fn sliceable_statements(&self) -> Vec<StatementId> {
        self.statements
            .iter()
            .filter(|s| s.is_sliceable())
            .map(|s| s.id)
            .collect()
    }

    /// Signals read by an expression, in first-read order (deduplicated).
    pub fn expr_reads(&self, expr: ExprId, out: &mut Vec<SignalId>) {
        match &self.expr(expr).kind {
            ExprKind::Const(_) => {}
            ExprKind::Ref(r) => self.ref_reads(r, out),
            ExprKind::Unary { operand, .. } => self.expr_reads(*operand, out),
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr_reads(*lhs, out);
                self.expr_reads(*rhs, out);
            }
            ExprKind::Ternary {
                cond,
                then_val,
                else_val,
            } => {
                self.expr_reads(*cond, out);
                self.expr_reads(*then_val, out);
                self.expr_reads(*else_val, out);
            }
            ExprKind::Concat(parts) => {
                for p in parts {
                    self.expr_reads(*p, out);
                }
            }
        }
    }

    fn ref_reads(&self, r: &Ref, out: &mut Vec<SignalId>) {
        match r {
            Ref::Signal(s) => {
                if !out.contains(s) {
                    out.push(*s);
                }
            }
            Ref::MemRow { signal, index } => {
                if !out.contains(signal) {
                    out.push(*signal);
                }
                self.expr_reads(*index, out);
            }
            Ref::BitSelect { base, .. } | Ref::RangeSelect { base, .. } => {
                self.ref_reads(base, out)
            }
        }
    }
}
