//! Recursive-descent parser and name resolution for MiniRTL.
//!
//! All declarations must precede continuous assigns and processes, so
//! references are resolved as they are parsed. The parser aborts at the
//! first error; resolution errors carry the offending location.

use std::collections::HashMap;

use super::ast::*;
use super::diag::Diagnostic;
use super::token::{lex, Keyword, Token, TokenKind};

const MAX_MEMORY_DEPTH: u32 = 65536;

pub fn parse_design(source: &str) -> Result<Design, Vec<Diagnostic>> {
    let tokens = lex(source).map_err(|d| vec![d])?;
    let mut p = Parser::new(tokens);
    match p.parse_module() {
        Ok(design) => Ok(design),
        Err(d) => Err(vec![d]),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    signals: Vec<SignalDecl>,
    symbols: HashMap<String, SignalId>,
    statements: Vec<Statement>,
    exprs: Vec<Expr>,
    processes: Vec<ProcessDef>,
    cont_assigns: Vec<StatementId>,
}

/// One bracket suffix on a reference or target, before semantic
/// disambiguation (memory row index vs. constant select).
enum Suffix {
    Index(ExprId),
    Range(u32, u32),
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Self {
            tokens,
            pos: 0,
            signals: Vec::new(),
            symbols: HashMap::new(),
            statements: Vec::new(),
            exprs: Vec::new(),
            processes: Vec::new(),
            cont_assigns: Vec::new(),
        }
    }

    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn loc(&self) -> SourceLoc {
        self.tokens[self.pos].loc
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, Diagnostic> {
        if self.peek() == &kind {
            Ok(self.advance())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> Diagnostic {
        Diagnostic::error(
            self.loc(),
            format!("expected {what}, found {}", describe(self.peek())),
        )
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, SourceLoc), Diagnostic> {
        let loc = self.loc();
        match self.peek().clone() {
            TokenKind::Ident(name) => {
                self.advance();
                Ok((name, loc))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_number(&mut self, what: &str) -> Result<(u64, SourceLoc), Diagnostic> {
        let loc = self.loc();
        match *self.peek() {
            TokenKind::Number(n) => {
                self.advance();
                Ok((n, loc))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_keyword(&mut self, kw: Keyword, what: &str) -> Result<Token, Diagnostic> {
        self.expect(TokenKind::Keyword(kw), what)
    }

    fn add_expr(&mut self, kind: ExprKind, loc: SourceLoc) -> ExprId {
        let id = ExprId(self.exprs.len() as u32);
        self.exprs.push(Expr { kind, loc });
        id
    }

    /// Reserve a statement id (preorder) and patch the kind in later.
    fn reserve_statement(&mut self, loc: SourceLoc) -> StatementId {
        let id = StatementId(self.statements.len() as u32);
        self.statements.push(Statement {
            id,
            kind: StatementKind::Block { body: Vec::new() },
            loc,
        });
        id
    }

    fn set_statement(&mut self, id: StatementId, kind: StatementKind) {
        self.statements[id.index()].kind = kind;
    }

    fn lookup(&self, name: &str, loc: SourceLoc) -> Result<SignalId, Diagnostic> {
        self.symbols.get(name).copied().ok_or_else(|| {
            Diagnostic::error(loc, format!("unknown signal `{name}`"))
        })
    }

    fn is_clock(&self, id: SignalId) -> bool {
        self.signals[id.index()].name == "clk"
    }

    // ---- module structure ----

    fn parse_module(&mut self) -> Result<Design, Diagnostic> {
        self.expect_keyword(Keyword::Module, "`module`")?;
        let (name, _) = self.expect_ident("module name")?;
        self.expect(TokenKind::LParen, "`(`")?;
        let mut port_names: Vec<(String, SourceLoc)> = Vec::new();
        if self.peek() != &TokenKind::RParen {
            loop {
                let (p, ploc) = self.expect_ident("port name")?;
                if port_names.iter().any(|(q, _)| *q == p) {
                    return Err(Diagnostic::error(ploc, format!("duplicate port `{p}`")));
                }
                port_names.push((p, ploc));
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen, "`)`")?;
        self.expect(TokenKind::Semi, "`;`")?;

        let mut seen_non_decl = false;
        loop {
            match self.peek().clone() {
                TokenKind::Keyword(Keyword::Endmodule) => {
                    self.advance();
                    break;
                }
                TokenKind::Keyword(
                    kw @ (Keyword::Input | Keyword::Output | Keyword::Wire | Keyword::Reg),
                ) => {
                    if seen_non_decl {
                        return Err(Diagnostic::error(
                            self.loc(),
                            "declarations must precede assigns and processes",
                        ));
                    }
                    self.advance();
                    self.parse_decl(kw)?;
                }
                TokenKind::Keyword(Keyword::Assign) => {
                    seen_non_decl = true;
                    self.advance();
                    self.parse_cont_assign()?;
                }
                TokenKind::Keyword(Keyword::Always) => {
                    seen_non_decl = true;
                    self.advance();
                    self.parse_process()?;
                }
                TokenKind::Eof => return Err(self.unexpected("`endmodule`")),
                _ => return Err(self.unexpected("a declaration, `assign`, or `always`")),
            }
        }
        self.expect(TokenKind::Eof, "end of file after `endmodule`")?;

        let ports = self.resolve_ports(&port_names)?;
        Ok(Design {
            name,
            ports,
            signals: std::mem::take(&mut self.signals),
            processes: std::mem::take(&mut self.processes),
            cont_assigns: std::mem::take(&mut self.cont_assigns),
            statements: std::mem::take(&mut self.statements),
            exprs: std::mem::take(&mut self.exprs),
        })
    }

    fn resolve_ports(
        &self,
        port_names: &[(String, SourceLoc)],
    ) -> Result<Vec<SignalId>, Diagnostic> {
        let mut ports = Vec::with_capacity(port_names.len());
        for (name, loc) in port_names {
            let id = self.symbols.get(name).copied().ok_or_else(|| {
                Diagnostic::error(*loc, format!("port `{name}` is not declared"))
            })?;
            let decl = &self.signals[id.index()];
            if !matches!(decl.kind, SignalKind::Input | SignalKind::Output) {
                return Err(Diagnostic::error(
                    *loc,
                    format!("port `{name}` must be declared input or output"),
                ));
            }
            ports.push(id);
        }
        for decl in &self.signals {
            if matches!(decl.kind, SignalKind::Input | SignalKind::Output)
                && !ports.contains(&decl.id)
            {
                return Err(Diagnostic::error(
                    decl.loc,
                    format!("`{}` is declared {} but missing from the port list", decl.name, decl.kind),
                ));
            }
        }
        Ok(ports)
    }

    fn parse_decl(&mut self, kw: Keyword) -> Result<(), Diagnostic> {
        let base_kind = match kw {
            Keyword::Input => SignalKind::Input,
            Keyword::Output => SignalKind::Output,
            Keyword::Wire => SignalKind::Wire,
            Keyword::Reg => SignalKind::Reg,
            _ => unreachable!(),
        };
        let width = if self.peek() == &TokenKind::LBracket {
            self.advance();
            let (msb, mloc) = self.expect_number("msb")?;
            self.expect(TokenKind::Colon, "`:`")?;
            let (lsb, lloc) = self.expect_number("lsb")?;
            self.expect(TokenKind::RBracket, "`]`")?;
            if lsb != 0 {
                return Err(Diagnostic::error(lloc, "vector ranges must end at bit 0"));
            }
            if msb > 63 {
                return Err(Diagnostic::error(mloc, "widths above 64 bits are not supported"));
            }
            msb as u32 + 1
        } else {
            1
        };

        loop {
            let (name, nloc) = self.expect_ident("signal name")?;
            // optional memory dimension, single-name declarations only
            let depth = if self.peek() == &TokenKind::LBracket {
                self.advance();
                let (lo, lloc) = self.expect_number("first row index")?;
                self.expect(TokenKind::Colon, "`:`")?;
                let (hi, hloc) = self.expect_number("last row index")?;
                self.expect(TokenKind::RBracket, "`]`")?;
                if lo != 0 {
                    return Err(Diagnostic::error(lloc, "memory ranges must start at row 0"));
                }
                if base_kind != SignalKind::Reg {
                    return Err(Diagnostic::error(nloc, "only `reg` may declare a memory"));
                }
                if hi + 1 > MAX_MEMORY_DEPTH as u64 {
                    return Err(Diagnostic::error(hloc, "memory depth too large"));
                }
                Some(hi as u32 + 1)
            } else {
                None
            };
            if self.symbols.contains_key(&name) {
                return Err(Diagnostic::error(nloc, format!("duplicate name `{name}`")));
            }
            let id = SignalId(self.signals.len() as u32);
            let (kind, depth) = match depth {
                Some(d) => (SignalKind::Memory, d),
                None => (base_kind, 0),
            };
            self.symbols.insert(name.clone(), id);
            self.signals.push(SignalDecl {
                id,
                name,
                kind,
                width,
                depth,
                loc: nloc,
            });
            if kind == SignalKind::Memory {
                // no comma-continuation after a memory declarator
                break;
            }
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::Semi, "`;`")?;
        Ok(())
    }

    fn parse_cont_assign(&mut self) -> Result<(), Diagnostic> {
        let loc = self.tokens[self.pos - 1].loc;
        let id = self.reserve_statement(loc);
        let target = self.parse_target(false)?;
        self.expect(TokenKind::Assign, "`=`")?;
        let rhs = self.parse_expr()?;
        self.expect(TokenKind::Semi, "`;`")?;
        self.set_statement(id, StatementKind::ContinuousAssign { target, rhs });
        self.cont_assigns.push(id);
        Ok(())
    }

    fn parse_process(&mut self) -> Result<(), Diagnostic> {
        let loc = self.tokens[self.pos - 1].loc;
        self.expect(TokenKind::At, "`@`")?;
        self.expect(TokenKind::LParen, "`(`")?;
        self.expect_keyword(Keyword::Posedge, "`posedge`")?;
        let (clk_name, cloc) = self.expect_ident("clock name")?;
        if clk_name != "clk" {
            return Err(Diagnostic::error(
                cloc,
                "the only supported sensitivity list is `posedge clk`",
            ));
        }
        let clk = self.lookup(&clk_name, cloc)?;
        if self.signals[clk.index()].kind != SignalKind::Input {
            return Err(Diagnostic::error(cloc, "`clk` must be declared as an input"));
        }
        self.expect(TokenKind::RParen, "`)`")?;
        let body = self.parse_statement()?;
        self.processes.push(ProcessDef {
            kind: ProcessKind::Sequential,
            body,
            loc,
        });
        Ok(())
    }

    // ---- statements ----

    fn parse_statement(&mut self) -> Result<StatementId, Diagnostic> {
        match self.peek().clone() {
            TokenKind::Keyword(Keyword::Begin) => {
                let loc = self.loc();
                self.advance();
                let id = self.reserve_statement(loc);
                let mut body = Vec::new();
                while self.peek() != &TokenKind::Keyword(Keyword::End) {
                    if self.peek() == &TokenKind::Eof {
                        return Err(self.unexpected("`end`"));
                    }
                    body.push(self.parse_statement()?);
                }
                self.advance(); // end
                self.set_statement(id, StatementKind::Block { body });
                Ok(id)
            }
            TokenKind::Keyword(Keyword::If) => {
                let loc = self.loc();
                self.advance();
                let id = self.reserve_statement(loc);
                self.expect(TokenKind::LParen, "`(`")?;
                let cond = self.parse_expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                let then_branch = self.parse_statement()?;
                let else_branch = if self.eat(&TokenKind::Keyword(Keyword::Else)) {
                    Some(self.parse_statement()?)
                } else {
                    None
                };
                self.set_statement(
                    id,
                    StatementKind::If {
                        cond,
                        then_branch,
                        else_branch,
                    },
                );
                Ok(id)
            }
            TokenKind::Keyword(Keyword::Case) => {
                let loc = self.loc();
                self.advance();
                let id = self.reserve_statement(loc);
                self.expect(TokenKind::LParen, "`(`")?;
                let selector = self.parse_expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                let mut arms = Vec::new();
                let mut default = None;
                loop {
                    match self.peek().clone() {
                        TokenKind::Keyword(Keyword::Endcase) => {
                            self.advance();
                            break;
                        }
                        TokenKind::Keyword(Keyword::Default) => {
                            let dloc = self.loc();
                            self.advance();
                            self.expect(TokenKind::Colon, "`:`")?;
                            if default.is_some() {
                                return Err(Diagnostic::error(dloc, "duplicate `default` arm"));
                            }
                            default = Some(self.parse_statement()?);
                        }
                        TokenKind::Number(value) => {
                            self.advance();
                            self.expect(TokenKind::Colon, "`:`")?;
                            let body = self.parse_statement()?;
                            arms.push((Literal { value, width: None }, body));
                        }
                        TokenKind::SizedNumber { width, value } => {
                            self.advance();
                            self.expect(TokenKind::Colon, "`:`")?;
                            let body = self.parse_statement()?;
                            arms.push((
                                Literal {
                                    value,
                                    width: Some(width),
                                },
                                body,
                            ));
                        }
                        _ => return Err(self.unexpected("a case label, `default`, or `endcase`")),
                    }
                }
                self.set_statement(
                    id,
                    StatementKind::Case {
                        selector,
                        arms,
                        default,
                    },
                );
                Ok(id)
            }
            TokenKind::Ident(_) => {
                let loc = self.loc();
                let id = self.reserve_statement(loc);
                let target = self.parse_target(true)?;
                self.expect(TokenKind::NonBlocking, "`<=`")?;
                let rhs = self.parse_expr()?;
                self.expect(TokenKind::Semi, "`;`")?;
                self.set_statement(id, StatementKind::NonBlockingAssign { target, rhs });
                Ok(id)
            }
            _ => Err(self.unexpected("a statement")),
        }
    }

    /// Assignment destination. Sequential targets are regs or memories;
    /// continuous targets are whole wires or outputs.
    fn parse_target(&mut self, sequential: bool) -> Result<Target, Diagnostic> {
        let (name, loc) = self.expect_ident("assignment target")?;
        let signal = self.lookup(&name, loc)?;
        if self.is_clock(signal) {
            return Err(Diagnostic::error(loc, "`clk` cannot be assigned"));
        }
        let kind = self.signals[signal.index()].kind;
        let suffixes = self.parse_suffixes()?;
        if sequential {
            match kind {
                SignalKind::Reg => {
                    let range = match suffixes.as_slice() {
                        [] => None,
                        [Suffix::Range(m, l)] => Some((*m, *l)),
                        [Suffix::Index(e)] => match &self.exprs[e.index()].kind {
                            ExprKind::Const(lit) => Some((lit.value as u32, lit.value as u32)),
                            _ => {
                                return Err(Diagnostic::error(
                                    loc,
                                    "bit select on an assignment target must be constant",
                                ))
                            }
                        },
                        _ => {
                            return Err(Diagnostic::error(
                                loc,
                                format!("too many selects on target `{name}`"),
                            ))
                        }
                    };
                    Ok(Target {
                        signal,
                        index: None,
                        range,
                    })
                }
                SignalKind::Memory => {
                    let index = match suffixes.as_slice() {
                        [Suffix::Index(e)] => *e,
                        _ => {
                            return Err(Diagnostic::error(
                                loc,
                                format!("memory `{name}` must be written one full row at a time"),
                            ))
                        }
                    };
                    Ok(Target {
                        signal,
                        index: Some(index),
                        range: None,
                    })
                }
                _ => Err(Diagnostic::error(
                    loc,
                    format!("`{name}` is {kind}; nonblocking targets must be reg or memory"),
                )),
            }
        } else {
            if !matches!(kind, SignalKind::Wire | SignalKind::Output) {
                return Err(Diagnostic::error(
                    loc,
                    format!("`{name}` is {kind}; continuous assigns drive wires and outputs"),
                ));
            }
            if !suffixes.is_empty() {
                return Err(Diagnostic::error(
                    loc,
                    "continuous assigns drive whole signals only",
                ));
            }
            Ok(Target {
                signal,
                index: None,
                range: None,
            })
        }
    }

    // ---- expressions ----

    fn parse_expr(&mut self) -> Result<ExprId, Diagnostic> {
        self.parse_ternary()
    }

    fn parse_ternary(&mut self) -> Result<ExprId, Diagnostic> {
        let cond = self.parse_or()?;
        if self.peek() == &TokenKind::Question {
            let loc = self.loc();
            self.advance();
            let then_val = self.parse_ternary()?;
            self.expect(TokenKind::Colon, "`:`")?;
            let else_val = self.parse_ternary()?;
            Ok(self.add_expr(
                ExprKind::Ternary {
                    cond,
                    then_val,
                    else_val,
                },
                loc,
            ))
        } else {
            Ok(cond)
        }
    }

    fn parse_binary_chain<F>(
        &mut self,
        next: F,
        table: &[(TokenKind, BinaryOp)],
    ) -> Result<ExprId, Diagnostic>
    where
        F: Fn(&mut Self) -> Result<ExprId, Diagnostic>,
    {
        let mut lhs = next(self)?;
        'outer: loop {
            for (tok, op) in table {
                if self.peek() == tok {
                    let loc = self.loc();
                    self.advance();
                    let rhs = next(self)?;
                    lhs = self.add_expr(ExprKind::Binary { op: *op, lhs, rhs }, loc);
                    continue 'outer;
                }
            }
            return Ok(lhs);
        }
    }

    fn parse_or(&mut self) -> Result<ExprId, Diagnostic> {
        self.parse_binary_chain(Self::parse_xor, &[(TokenKind::Pipe, BinaryOp::Or)])
    }

    fn parse_xor(&mut self) -> Result<ExprId, Diagnostic> {
        self.parse_binary_chain(Self::parse_and, &[(TokenKind::Caret, BinaryOp::Xor)])
    }

    fn parse_and(&mut self) -> Result<ExprId, Diagnostic> {
        self.parse_binary_chain(Self::parse_equality, &[(TokenKind::Amp, BinaryOp::And)])
    }

    fn parse_equality(&mut self) -> Result<ExprId, Diagnostic> {
        self.parse_binary_chain(
            Self::parse_relational,
            &[
                (TokenKind::EqEq, BinaryOp::Eq),
                (TokenKind::NotEq, BinaryOp::Neq),
            ],
        )
    }

    fn parse_relational(&mut self) -> Result<ExprId, Diagnostic> {
        self.parse_binary_chain(Self::parse_additive, &[(TokenKind::Lt, BinaryOp::Lt)])
    }

    fn parse_additive(&mut self) -> Result<ExprId, Diagnostic> {
        self.parse_binary_chain(
            Self::parse_unary,
            &[
                (TokenKind::Plus, BinaryOp::Add),
                (TokenKind::Minus, BinaryOp::Sub),
            ],
        )
    }

    fn parse_unary(&mut self) -> Result<ExprId, Diagnostic> {
        let loc = self.loc();
        if self.eat(&TokenKind::Tilde) {
            let operand = self.parse_unary()?;
            Ok(self.add_expr(
                ExprKind::Unary {
                    op: UnaryOp::BitNot,
                    operand,
                },
                loc,
            ))
        } else if self.eat(&TokenKind::Bang) {
            let operand = self.parse_unary()?;
            Ok(self.add_expr(
                ExprKind::Unary {
                    op: UnaryOp::LogicNot,
                    operand,
                },
                loc,
            ))
        } else {
            self.parse_primary()
        }
    }

    fn parse_primary(&mut self) -> Result<ExprId, Diagnostic> {
        let loc = self.loc();
        match self.peek().clone() {
            TokenKind::Number(value) => {
                self.advance();
                Ok(self.add_expr(ExprKind::Const(Literal { value, width: None }), loc))
            }
            TokenKind::SizedNumber { width, value } => {
                self.advance();
                Ok(self.add_expr(
                    ExprKind::Const(Literal {
                        value,
                        width: Some(width),
                    }),
                    loc,
                ))
            }
            TokenKind::LParen => {
                self.advance();
                let e = self.parse_expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            TokenKind::LBrace => {
                self.advance();
                let mut parts = Vec::new();
                loop {
                    parts.push(self.parse_expr()?);
                    if !self.eat(&TokenKind::Comma) {
                        break;
                    }
                }
                self.expect(TokenKind::RBrace, "`}`")?;
                Ok(self.add_expr(ExprKind::Concat(parts), loc))
            }
            TokenKind::Ident(name) => {
                self.advance();
                let signal = self.lookup(&name, loc)?;
                if self.is_clock(signal) {
                    return Err(Diagnostic::error(
                        loc,
                        "`clk` may only appear in a sensitivity list",
                    ));
                }
                let suffixes = self.parse_suffixes()?;
                let r = self.build_ref(signal, &name, suffixes, loc)?;
                Ok(self.add_expr(ExprKind::Ref(r), loc))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn parse_suffixes(&mut self) -> Result<Vec<Suffix>, Diagnostic> {
        let mut suffixes = Vec::new();
        while self.peek() == &TokenKind::LBracket {
            self.advance();
            // range needs one-token lookahead after a number
            if let TokenKind::Number(msb) = *self.peek() {
                if self.tokens[self.pos + 1].kind == TokenKind::Colon {
                    let mloc = self.loc();
                    self.advance();
                    self.advance();
                    let (lsb, lloc) = self.expect_number("lsb")?;
                    self.expect(TokenKind::RBracket, "`]`")?;
                    if msb > u32::MAX as u64 || lsb > msb {
                        return Err(Diagnostic::error(
                            if lsb > msb { lloc } else { mloc },
                            "bad part-select range",
                        ));
                    }
                    suffixes.push(Suffix::Range(msb as u32, lsb as u32));
                    continue;
                }
            }
            let e = self.parse_expr()?;
            self.expect(TokenKind::RBracket, "`]`")?;
            suffixes.push(Suffix::Index(e));
        }
        Ok(suffixes)
    }

    /// Disambiguate bracket suffixes by signal kind: memories take a row
    /// index first; any remaining select must be a constant bit or range.
    fn build_ref(
        &mut self,
        signal: SignalId,
        name: &str,
        suffixes: Vec<Suffix>,
        loc: SourceLoc,
    ) -> Result<Ref, Diagnostic> {
        let kind = self.signals[signal.index()].kind;
        let mut rest = suffixes.as_slice();
        let base = if kind == SignalKind::Memory {
            match rest.first() {
                Some(Suffix::Index(e)) => {
                    let b = Ref::MemRow {
                        signal,
                        index: *e,
                    };
                    rest = &rest[1..];
                    b
                }
                _ => {
                    return Err(Diagnostic::error(
                        loc,
                        format!("memory `{name}` must be read through a row index"),
                    ))
                }
            }
        } else {
            Ref::Signal(signal)
        };
        match rest {
            [] => Ok(base),
            [Suffix::Range(m, l)] => Ok(Ref::RangeSelect {
                base: Box::new(base),
                msb: *m,
                lsb: *l,
            }),
            [Suffix::Index(e)] => match &self.exprs[e.index()].kind {
                ExprKind::Const(lit) => Ok(Ref::BitSelect {
                    base: Box::new(base),
                    bit: lit.value as u32,
                }),
                _ => Err(Diagnostic::error(
                    loc,
                    "bit select index must be a constant",
                )),
            },
            _ => Err(Diagnostic::error(
                loc,
                format!("too many selects on `{name}`"),
            )),
        }
    }
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Ident(s) => format!("`{s}`"),
        TokenKind::Number(n) => format!("`{n}`"),
        TokenKind::SizedNumber { width, value } => format!("`{width}'d{value}`"),
        TokenKind::Keyword(k) => format!("keyword `{k:?}`").to_lowercase(),
        TokenKind::Eof => "end of file".to_string(),
        other => format!("`{}`", punct(other)),
    }
}

fn punct(kind: &TokenKind) -> &'static str {
    match kind {
        TokenKind::LParen => "(",
        TokenKind::RParen => ")",
        TokenKind::LBracket => "[",
        TokenKind::RBracket => "]",
        TokenKind::LBrace => "{",
        TokenKind::RBrace => "}",
        TokenKind::Semi => ";",
        TokenKind::Colon => ":",
        TokenKind::Comma => ",",
        TokenKind::Question => "?",
        TokenKind::At => "@",
        TokenKind::Assign => "=",
        TokenKind::NonBlocking => "<=",
        TokenKind::EqEq => "==",
        TokenKind::NotEq => "!=",
        TokenKind::Lt => "<",
        TokenKind::Bang => "!",
        TokenKind::Tilde => "~",
        TokenKind::Caret => "^",
        TokenKind::Amp => "&",
        TokenKind::Pipe => "|",
        TokenKind::Plus => "+",
        TokenKind::Minus => "-",
        _ => "?",
    }
}
