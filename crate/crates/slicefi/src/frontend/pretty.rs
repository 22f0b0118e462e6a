//! Canonical MiniRTL printer.
//!
//! Output preserves declaration and item order, so reparsing printed text
//! reproduces the same signal and statement ids. Printing is a fixed
//! point: `print(parse(print(d))) == print(d)`.

use super::ast::*;

pub fn pretty_print(design: &Design) -> String {
    let mut out = String::new();
    let ports: Vec<&str> = design
        .ports
        .iter()
        .map(|p| design.signal(*p).name.as_str())
        .collect();
    out.push_str(&format!("module {}({});\n", design.name, ports.join(", ")));

    for decl in &design.signals {
        let range = if decl.width > 1 {
            format!(" [{}:0]", decl.width - 1)
        } else {
            String::new()
        };
        match decl.kind {
            SignalKind::Memory => {
                out.push_str(&format!(
                    "  reg{range} {} [0:{}];\n",
                    decl.name,
                    decl.depth - 1
                ));
            }
            kind => {
                let kw = match kind {
                    SignalKind::Input => "input",
                    SignalKind::Output => "output",
                    SignalKind::Wire => "wire",
                    SignalKind::Reg => "reg",
                    SignalKind::Memory => unreachable!(),
                };
                out.push_str(&format!("  {kw}{range} {};\n", decl.name));
            }
        }
    }

    // items in original source order: roots sorted by statement id
    enum Item {
        Assign(StatementId),
        Process(usize),
    }
    let mut items: Vec<(StatementId, Item)> = design
        .cont_assigns
        .iter()
        .map(|&s| (s, Item::Assign(s)))
        .chain(
            design
                .processes
                .iter()
                .enumerate()
                .map(|(i, p)| (p.body, Item::Process(i))),
        )
        .collect();
    items.sort_by_key(|(root, _)| *root);

    for (_, item) in items {
        out.push('\n');
        match item {
            Item::Assign(sid) => {
                if let StatementKind::ContinuousAssign { target, rhs } =
                    &design.statement(sid).kind
                {
                    out.push_str(&format!(
                        "  assign {} = {};\n",
                        print_target(design, target),
                        print_expr(design, *rhs, 0)
                    ));
                }
            }
            Item::Process(i) => {
                let body = design.processes[i].body;
                out.push_str("  always @(posedge clk)");
                print_statement_after_header(design, body, 1, &mut out);
            }
        }
    }

    out.push_str("endmodule\n");
    out
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

/// Print a statement that follows a construct header (`always`, `if`,
/// `else`, case label). Blocks open on the same line; single statements
/// go on their own indented line.
fn print_statement_after_header(
    design: &Design,
    sid: StatementId,
    level: usize,
    out: &mut String,
) {
    match &design.statement(sid).kind {
        StatementKind::Block { .. } => {
            out.push(' ');
            print_statement(design, sid, level, true, out);
        }
        _ => {
            out.push('\n');
            indent(level + 1, out);
            print_statement(design, sid, level + 1, false, out);
        }
    }
}

/// `inline_open` means the statement's first token continues the current
/// line (used for blocks after headers).
fn print_statement(
    design: &Design,
    sid: StatementId,
    level: usize,
    inline_open: bool,
    out: &mut String,
) {
    let _ = inline_open;
    match &design.statement(sid).kind {
        StatementKind::Block { body } => {
            out.push_str("begin\n");
            for &child in body {
                indent(level + 1, out);
                print_statement(design, child, level + 1, false, out);
            }
            indent(level, out);
            out.push_str("end\n");
        }
        StatementKind::NonBlockingAssign { target, rhs } => {
            out.push_str(&format!(
                "{} <= {};\n",
                print_target(design, target),
                print_expr(design, *rhs, 0)
            ));
        }
        StatementKind::ContinuousAssign { target, rhs } => {
            out.push_str(&format!(
                "assign {} = {};\n",
                print_target(design, target),
                print_expr(design, *rhs, 0)
            ));
        }
        StatementKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            out.push_str(&format!("if ({})", print_expr(design, *cond, 0)));
            print_statement_after_header(design, *then_branch, level, out);
            if let Some(else_id) = else_branch {
                // `end else` hugs the block close; otherwise new line
                if matches!(
                    design.statement(*then_branch).kind,
                    StatementKind::Block { .. }
                ) {
                    // replace trailing newline to join `else`
                    out.pop();
                    out.push(' ');
                } else {
                    indent(level, out);
                }
                match &design.statement(*else_id).kind {
                    StatementKind::If { .. } => {
                        out.push_str("else ");
                        print_statement(design, *else_id, level, true, out);
                    }
                    _ => {
                        out.push_str("else");
                        print_statement_after_header(design, *else_id, level, out);
                    }
                }
            }
        }
        StatementKind::Case {
            selector,
            arms,
            default,
        } => {
            out.push_str(&format!("case ({})\n", print_expr(design, *selector, 0)));
            for (label, body) in arms {
                indent(level + 1, out);
                out.push_str(&format!("{}:", print_literal(label)));
                print_statement_after_header(design, *body, level + 1, out);
            }
            if let Some(d) = default {
                indent(level + 1, out);
                out.push_str("default:");
                print_statement_after_header(design, *d, level + 1, out);
            }
            indent(level, out);
            out.push_str("endcase\n");
        }
    }
}

fn print_target(design: &Design, target: &Target) -> String {
    let name = &design.signal(target.signal).name;
    if let Some(index) = target.index {
        return format!("{name}[{}]", print_expr(design, index, 0));
    }
    match target.range {
        Some((m, l)) if m == l => format!("{name}[{m}]"),
        Some((m, l)) => format!("{name}[{m}:{l}]"),
        None => name.clone(),
    }
}

fn print_literal(lit: &Literal) -> String {
    match lit.width {
        Some(w) => format!("{w}'d{}", lit.value),
        None => format!("{}", lit.value),
    }
}

fn precedence(design: &Design, id: ExprId) -> u8 {
    match &design.expr(id).kind {
        ExprKind::Ternary { .. } => 0,
        ExprKind::Binary { op, .. } => match op {
            BinaryOp::Or => 1,
            BinaryOp::Xor => 2,
            BinaryOp::And => 3,
            BinaryOp::Eq | BinaryOp::Neq => 4,
            BinaryOp::Lt => 5,
            BinaryOp::Add | BinaryOp::Sub => 6,
        },
        ExprKind::Unary { .. } => 7,
        ExprKind::Const(_) | ExprKind::Ref(_) | ExprKind::Concat(_) => 8,
    }
}

fn print_expr(design: &Design, id: ExprId, min_prec: u8) -> String {
    let prec = precedence(design, id);
    let body = match &design.expr(id).kind {
        ExprKind::Const(lit) => print_literal(lit),
        ExprKind::Ref(r) => print_ref(design, r),
        ExprKind::Unary { op, operand } => {
            let sym = match op {
                UnaryOp::BitNot => "~",
                UnaryOp::LogicNot => "!",
            };
            format!("{sym}{}", print_expr(design, *operand, 7))
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let sym = match op {
                BinaryOp::And => "&",
                BinaryOp::Or => "|",
                BinaryOp::Xor => "^",
                BinaryOp::Add => "+",
                BinaryOp::Sub => "-",
                BinaryOp::Eq => "==",
                BinaryOp::Neq => "!=",
                BinaryOp::Lt => "<",
            };
            format!(
                "{} {sym} {}",
                print_expr(design, *lhs, prec),
                print_expr(design, *rhs, prec + 1)
            )
        }
        ExprKind::Ternary {
            cond,
            then_val,
            else_val,
        } => format!(
            "{} ? {} : {}",
            print_expr(design, *cond, 1),
            print_expr(design, *then_val, 0),
            print_expr(design, *else_val, 0)
        ),
        ExprKind::Concat(parts) => {
            let inner: Vec<String> = parts
                .iter()
                .map(|p| print_expr(design, *p, 0))
                .collect();
            format!("{{{}}}", inner.join(", "))
        }
    };
    if prec < min_prec {
        format!("({body})")
    } else {
        body
    }
}

fn print_ref(design: &Design, r: &Ref) -> String {
    match r {
        Ref::Signal(s) => design.signal(*s).name.clone(),
        Ref::MemRow { signal, index } => format!(
            "{}[{}]",
            design.signal(*signal).name,
            print_expr(design, *index, 0)
        ),
        Ref::BitSelect { base, bit } => format!("{}[{bit}]", print_ref(design, base)),
        Ref::RangeSelect { base, msb, lsb } => {
            format!("{}[{msb}:{lsb}]", print_ref(design, base))
        }
    }
}
