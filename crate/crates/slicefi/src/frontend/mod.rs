//! MiniRTL frontend: lexer, parser, elaboration, and printing.
//!
//! MiniRTL is a small synthesizable Verilog subset: one module, a single
//! implicit clock `clk`, nonblocking assigns inside `always @(posedge
//! clk)` processes, continuous assigns for combinational logic, `if`/
//! `case` control flow, 2-state vectors up to 64 bits, and
//! one-dimensional memories. The grammar is documented in
//! `docs/minirtl.md`.

pub mod ast;
mod diag;
mod elaborate;
mod parser;
mod pretty;
mod token;

pub use ast::{
    BinaryOp, Design, Expr, ExprId, ExprKind, Literal, ProcessDef, ProcessKind, Ref,
    SignalDecl, SignalId, SignalKind, SourceLoc, Statement, StatementId, StatementKind,
    Target, UnaryOp,
};
pub use diag::{Diagnostic, Severity};
pub use elaborate::{elaborate, DefUse, ElabError, ElaboratedDesign};
pub use parser::parse_design;
pub use pretty::pretty_print;

/// Parse and elaborate in one step.
pub fn load_design(source: &str) -> Result<ElaboratedDesign, LoadError> {
    let design = parse_design(source).map_err(LoadError::Parse)?;
    elaborate(design).map_err(LoadError::Elab)
}

#[derive(Debug, Clone)]
pub enum LoadError {
    Parse(Vec<Diagnostic>),
    Elab(ElabError),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Parse(diags) => {
                for (i, d) in diags.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            LoadError::Elab(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Six-statement reference design used across the test suite:
    /// ids 1..=6 are the `if` header, both `r1` assigns, the `r2` xor,
    /// the dead register write, and the output assign (id 0 is the
    /// process body block).
    pub(crate) const TOY: &str = "\
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

    fn ids(raw: &[u32]) -> BTreeSet<SignalId> {
        raw.iter().map(|r| SignalId(*r)).collect()
    }

    #[test]
    fn parses_minimal_design() {
        let d = parse_design(
            "module m(clk, out); input clk; output out; reg r; \
             always @(posedge clk) r <= !r; assign out = r; endmodule",
        )
        .unwrap();
        assert_eq!(d.processes.len(), 1);
        assert_eq!(d.cont_assigns.len(), 1);
        assert_eq!(d.signals.len(), 3);
        assert_eq!(d.statements.len(), 2);
    }

    #[test]
    fn parses_empty_design() {
        let d = parse_design("module m(); endmodule").unwrap();
        assert_eq!(d.signals.len(), 0);
        assert_eq!(d.statements.len(), 0);
    }

    #[test]
    fn unknown_signal_is_reported_with_location() {
        let err = parse_design("module m(clk); input clk; assign x = 1; endmodule")
            .unwrap_err();
        assert_eq!(err.len(), 1);
        assert!(err[0].message.contains("unknown signal `x`"));
        assert_eq!(err[0].loc.line, 1);
    }

    #[test]
    fn duplicate_name_is_rejected() {
        let err =
            parse_design("module m(a); input a; wire a; endmodule").unwrap_err();
        assert!(err[0].message.contains("duplicate name `a`"));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_design("module m(clk);\ninput clk;\nalways @(clk) x;\nendmodule")
            .unwrap_err();
        assert_eq!(err[0].loc.line, 3);
    }

    #[test]
    fn toy_design_shape() {
        let d = parse_design(TOY).unwrap();
        assert_eq!(d.signals.len(), 7);
        assert_eq!(d.statements.len(), 7); // block + 6 sliceable
        assert_eq!(d.sliceable_statements().len(), 6);
        let elab = elaborate(d).unwrap();
        // S4: r2 <= r1 ^ r2
        let (def, uses) = elab.def_use(StatementId(4));
        assert_eq!(def, ids(&[5]));
        assert_eq!(uses, ids(&[4, 5]));
        // S1: if (rst) header only
        let (def, uses) = elab.def_use(StatementId(1));
        assert!(def.is_empty());
        assert_eq!(uses, ids(&[1]));
    }

    #[test]
    fn memory_write_defuse() {
        let elab = load_design(
            "module m(clk, wr, addr, din, out);
  input clk; input wr;
  input [1:0] addr;
  input [3:0] din;
  output [3:0] out;
  reg [3:0] mem [0:3];
  assign out = mem[addr];
  always @(posedge clk)
    if (wr)
      mem[addr] <= din;
endmodule",
        )
        .unwrap();
        let mem = elab.lookup_signal("mem").unwrap();
        let addr = elab.lookup_signal("addr").unwrap();
        let din = elab.lookup_signal("din").unwrap();
        // find the memory write statement
        let write = elab
            .statements()
            .iter()
            .find(|s| matches!(&s.kind, StatementKind::NonBlockingAssign { target, .. } if target.signal == mem))
            .unwrap();
        let (def, uses) = elab.def_use(write.id);
        assert_eq!(def.into_iter().collect::<Vec<_>>(), vec![mem]);
        assert_eq!(uses, [addr, din].into_iter().collect());
        // the read side uses mem and addr
        let read = elab
            .statements()
            .iter()
            .find(|s| matches!(&s.kind, StatementKind::ContinuousAssign { .. }))
            .unwrap();
        let (_, uses) = elab.def_use(read.id);
        assert_eq!(uses, [mem, addr].into_iter().collect());
    }

    #[test]
    fn combinational_loop_detected() {
        let err = load_design(
            "module m(); wire a; wire b; assign a = b; assign b = a; endmodule",
        )
        .unwrap_err();
        match err {
            LoadError::Elab(ElabError::CombinationalLoop(cycle)) => {
                assert!(cycle.len() >= 3);
                assert_eq!(cycle.first(), cycle.last());
            }
            other => panic!("expected combinational loop, got {other}"),
        }
    }

    #[test]
    fn multiple_sequential_drivers_rejected() {
        let err = load_design(
            "module m(clk); input clk; reg r;
             always @(posedge clk) r <= 0;
             always @(posedge clk) r <= 1;
             endmodule",
        )
        .unwrap_err();
        match err {
            LoadError::Elab(ElabError::MultipleDrivers(name)) => assert_eq!(name, "r"),
            other => panic!("expected multiple drivers, got {other}"),
        }
    }

    #[test]
    fn width_mismatch_rejected() {
        let err = load_design(
            "module m(clk, a, out); input clk; input [3:0] a; output [7:0] out;
             assign out = a; endmodule",
        )
        .unwrap_err();
        match err {
            LoadError::Elab(ElabError::WidthMismatch {
                expected, found, ..
            }) => {
                assert_eq!((expected, found), (8, 4));
            }
            other => panic!("expected width mismatch, got {other}"),
        }
    }

    #[test]
    fn constant_memory_index_checked_at_elaboration() {
        let err = load_design(
            "module m(clk, din, out); input clk; input [3:0] din; output [3:0] out;
             reg [3:0] mem [0:3];
             assign out = mem[0];
             always @(posedge clk) mem[7] <= din;
             endmodule",
        )
        .unwrap_err();
        match err {
            LoadError::Elab(ElabError::MemoryIndexOutOfRange { index, depth, .. }) => {
                assert_eq!((index, depth), (7, 4));
            }
            other => panic!("expected memory index error, got {other}"),
        }
    }

    #[test]
    fn parse_is_deterministic() {
        let a = parse_design(TOY).unwrap();
        let b = parse_design(TOY).unwrap();
        assert_eq!(a, b);
        let ea = elaborate(a).unwrap();
        let eb = elaborate(b).unwrap();
        for s in ea.sliceable_statements() {
            assert_eq!(ea.def_use(*s), eb.def_use(*s));
        }
    }

    #[test]
    fn pretty_print_is_a_fixed_point() {
        for src in [
            TOY,
            "module m(); endmodule",
            "module m(clk, out); input clk; output [3:0] out; reg [3:0] r;
             always @(posedge clk)
               case (r[1:0])
                 2'd0: r <= r + 4'd1;
                 2'd1: begin r <= r - 4'd1; end
                 default: r[3:2] <= 2'd3;
               endcase
             assign out = r == 4'd godot ? 4'd1 : ~r; endmodule"
                .replace("4'd godot", "4'd7")
                .as_str(),
        ] {
            let once = pretty_print(&parse_design(src).unwrap());
            let twice = pretty_print(&parse_design(&once).unwrap());
            assert_eq!(once, twice, "printer not a fixed point for:\n{src}");
            // ids survive the round trip
            let d1 = parse_design(src).unwrap();
            let d2 = parse_design(&once).unwrap();
            assert_eq!(d1.statements.len(), d2.statements.len());
        }
    }

    #[test]
    fn undriven_output_rejected() {
        let err = load_design("module m(o); output o; endmodule").unwrap_err();
        assert!(matches!(
            err,
            LoadError::Elab(ElabError::UndrivenOutput(_))
        ));
    }
}
