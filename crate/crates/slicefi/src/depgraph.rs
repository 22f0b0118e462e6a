//! Program dependence graph over statements and backward static slices.
//!
//! Data dependence: an edge a -> b exists exactly when def(a) and use(b)
//! share a signal. Over registers and memories the dependence crosses
//! clock cycles; over wires it is intra-cycle. Control dependence is
//! structural: every sliceable statement inside a branch of an If/Case
//! header depends on that header. A static slice is the backward closure
//! over both edge kinds from the statements defining the observed
//! signals.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::frontend::{ElaboratedDesign, SignalId, StatementId, StatementKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Data,
    Control,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKind::Data => f.write_str("data"),
            EdgeKind::Control => f.write_str("control"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SliceError {
    #[error("observation list is empty or names no defined signal")]
    EmptyCriterion,
    #[error("unknown observation signal `{0}`")]
    UnknownObservationSignal(String),
}

/// Statement-level program dependence graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdg {
    nodes: Vec<StatementId>,
    edges: BTreeSet<(StatementId, EdgeKind, StatementId)>,
    /// Predecessors over both edge kinds, for backward traversal.
    reverse: BTreeMap<StatementId, Vec<StatementId>>,
    defining: Vec<Vec<StatementId>>,
    using: Vec<Vec<StatementId>>,
}

impl Pdg {
    /// Sliceable statements (assigns and If/Case headers), ascending.
    pub fn nodes(&self) -> &[StatementId] {
        &self.nodes
    }

    pub fn edges(
        &self,
    ) -> impl Iterator<Item = (StatementId, EdgeKind, StatementId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn defining_statements(&self, signal: SignalId) -> &[StatementId] {
        &self.defining[signal.index()]
    }

    pub fn using_statements(&self, signal: SignalId) -> &[StatementId] {
        &self.using[signal.index()]
    }

    /// Line-oriented export, one `from kind to` triple per line.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::new();
        for (from, kind, to) in &self.edges {
            out.push_str(&format!("{from} {kind} {to}\n"));
        }
        out
    }
}

/// Backward static slice: the statements that could ever influence the
/// criterion signals, plus the storage signals those statements touch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticSlice {
    pub criterion: BTreeSet<SignalId>,
    pub statements: BTreeSet<StatementId>,
    /// Reg/Memory signals defined or used by any slice statement.
    pub registers: BTreeSet<SignalId>,
}

impl StaticSlice {
    pub fn contains(&self, stmt: StatementId) -> bool {
        self.statements.contains(&stmt)
    }
}

pub fn build_pdg(design: &ElaboratedDesign) -> Pdg {
    let nodes: Vec<StatementId> = design.sliceable_statements().to_vec();

    let n_signals = design.signals().len();
    let mut defining: Vec<Vec<StatementId>> = vec![Vec::new(); n_signals];
    let mut using: Vec<Vec<StatementId>> = vec![Vec::new(); n_signals];
    for &sid in &nodes {
        if let Some(def) = design.def_of(sid) {
            defining[def.index()].push(sid);
        }
        for &used in design.uses_of(sid) {
            using[used.index()].push(sid);
        }
    }

    let mut edges = BTreeSet::new();
    // data edges via the signal index: every definer feeds every user
    for signal in 0..n_signals {
        for &a in &defining[signal] {
            for &b in &using[signal] {
                edges.insert((a, EdgeKind::Data, b));
            }
        }
    }
    // structural control edges: header -> every sliceable statement in
    // its guarded subtree (nested headers included)
    for &sid in &nodes {
        let stmt = design.statement(sid);
        if matches!(
            stmt.kind,
            StatementKind::If { .. } | StatementKind::Case { .. }
        ) {
            let mut stack = stmt.children();
            while let Some(child) = stack.pop() {
                let child_stmt = design.statement(child);
                if child_stmt.is_sliceable() {
                    edges.insert((sid, EdgeKind::Control, child));
                }
                stack.extend(child_stmt.children());
            }
        }
    }

    let mut reverse: BTreeMap<StatementId, Vec<StatementId>> = BTreeMap::new();
    for (from, _, to) in &edges {
        reverse.entry(*to).or_default().push(*from);
    }

    Pdg {
        nodes,
        edges,
        reverse,
        defining,
        using,
    }
}

/// Reverse-reachability closure from the statements defining any
/// criterion signal.
pub fn static_slice(
    pdg: &Pdg,
    design: &ElaboratedDesign,
    observation: &BTreeSet<SignalId>,
) -> Result<StaticSlice, SliceError> {
    if observation.is_empty() {
        return Err(SliceError::EmptyCriterion);
    }
    for s in observation {
        if s.index() >= design.signals().len() {
            return Err(SliceError::UnknownObservationSignal(format!("#{s}")));
        }
    }

    let mut worklist: VecDeque<StatementId> = VecDeque::new();
    let mut statements = BTreeSet::new();
    for &obs in observation {
        for &root in pdg.defining_statements(obs) {
            if statements.insert(root) {
                worklist.push_back(root);
            }
        }
    }
    if statements.is_empty() {
        return Err(SliceError::EmptyCriterion);
    }

    while let Some(sid) = worklist.pop_front() {
        if let Some(preds) = pdg.reverse.get(&sid) {
            for &p in preds {
                if statements.insert(p) {
                    worklist.push_back(p);
                }
            }
        }
    }

    let mut registers = BTreeSet::new();
    for &sid in &statements {
        if let Some(def) = design.def_of(sid) {
            if design.signal(def).kind.is_storage() {
                registers.insert(def);
            }
        }
        for &used in design.uses_of(sid) {
            if design.signal(used).kind.is_storage() {
                registers.insert(used);
            }
        }
    }

    Ok(StaticSlice {
        criterion: observation.clone(),
        statements,
        registers,
    })
}

/// Render a slice as sorted statement ids with their source lines.
pub fn slice_listing(design: &ElaboratedDesign, slice: &StaticSlice) -> String {
    let mut out = String::new();
    for &sid in &slice.statements {
        let stmt = design.statement(sid);
        out.push_str(&format!("s{sid} line {}\n", stmt.loc.line));
    }
    out
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

    fn sid(raw: u32) -> StatementId {
        StatementId(raw)
    }

    fn obs(design: &ElaboratedDesign, names: &[&str]) -> BTreeSet<SignalId> {
        names
            .iter()
            .map(|n| design.lookup_signal(n).unwrap())
            .collect()
    }

    /// Independent edge oracle: brute-force pairwise def/use scan plus a
    /// direct subtree walk, bypassing the signal-index construction.
    fn brute_force_edges(
        design: &ElaboratedDesign,
    ) -> BTreeSet<(StatementId, EdgeKind, StatementId)> {
        let nodes = design.sliceable_statements();
        let mut edges = BTreeSet::new();
        for &a in nodes {
            for &b in nodes {
                let (def_a, _) = design.def_use(a);
                let (_, use_b) = design.def_use(b);
                if def_a.intersection(&use_b).next().is_some() {
                    edges.insert((a, EdgeKind::Data, b));
                }
            }
        }
        for &h in nodes {
            let stmt = design.statement(h);
            if matches!(
                stmt.kind,
                StatementKind::If { .. } | StatementKind::Case { .. }
            ) {
                let mut stack = stmt.children();
                while let Some(c) = stack.pop() {
                    let cs = design.statement(c);
                    if cs.is_sliceable() {
                        edges.insert((h, EdgeKind::Control, c));
                    }
                    stack.extend(cs.children());
                }
            }
        }
        edges
    }

    /// Brute-force reverse reachability through transitive closure
    /// (Floyd-Warshall), independent of the worklist implementation.
    pub(crate) fn closure_slice(
        design: &ElaboratedDesign,
        pdg: &Pdg,
        observation: &BTreeSet<SignalId>,
    ) -> BTreeSet<StatementId> {
        let nodes = pdg.nodes();
        let index: std::collections::HashMap<StatementId, usize> =
            nodes.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let n = nodes.len();
        let mut reach = vec![vec![false; n]; n];
        for (from, _, to) in pdg.edges() {
            reach[index[&from]][index[&to]] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut roots = Vec::new();
        for &o in observation {
            for &r in pdg.defining_statements(o) {
                roots.push(index[&r]);
            }
        }
        let mut out = BTreeSet::new();
        for (i, &stmt) in nodes.iter().enumerate() {
            if roots.iter().any(|&r| i == r || reach[i][r]) {
                out.insert(stmt);
            }
        }
        let _ = design;
        out
    }

    #[test]
    fn toy_pdg_edges_match_brute_force() {
        let design = load_design(TOY).unwrap();
        let pdg = build_pdg(&design);
        let expected: BTreeSet<_> = [
            (sid(2), EdgeKind::Data, sid(4)),
            (sid(3), EdgeKind::Data, sid(4)),
            (sid(4), EdgeKind::Data, sid(4)),
            (sid(4), EdgeKind::Data, sid(6)),
            (sid(1), EdgeKind::Control, sid(2)),
            (sid(1), EdgeKind::Control, sid(3)),
        ]
        .into_iter()
        .collect();
        let actual: BTreeSet<_> = pdg.edges().collect();
        assert_eq!(actual, expected);
        assert_eq!(actual, brute_force_edges(&design));
    }

    #[test]
    fn single_statement_design_has_no_edges() {
        let design = load_design(
            "module m(a, out); input a; output out; assign out = a; endmodule",
        )
        .unwrap();
        let pdg = build_pdg(&design);
        assert_eq!(pdg.nodes().len(), 1);
        assert_eq!(pdg.n_edges(), 0);
    }

    #[test]
    fn independent_chains_stay_disconnected() {
        let design = load_design(
            "module m(clk, a, b, x, y); input clk; input a; input b;
             output x; output y; reg p; reg q;
             always @(posedge clk) begin
               p <= a;
               q <= b;
             end
             assign x = p;
             assign y = q;
             endmodule",
        )
        .unwrap();
        let pdg = build_pdg(&design);
        // p-chain and q-chain share no edge endpoints
        let p_side = static_slice(&pdg, &design, &obs(&design, &["x"])).unwrap();
        let q_side = static_slice(&pdg, &design, &obs(&design, &["y"])).unwrap();
        assert!(p_side.statements.is_disjoint(&q_side.statements));
    }

    #[test]
    fn toy_slice_of_out_excludes_dead_register() {
        let design = load_design(TOY).unwrap();
        let pdg = build_pdg(&design);
        let slice = static_slice(&pdg, &design, &obs(&design, &["out"])).unwrap();
        let expected: BTreeSet<_> = [1, 2, 3, 4, 6].map(sid).into_iter().collect();
        assert_eq!(slice.statements, expected);
        assert_eq!(slice.statements, closure_slice(&design, &pdg, &slice.criterion));
        assert_eq!(slice.registers, obs(&design, &["r1", "r2"]));
    }

    #[test]
    fn toy_slice_of_dead_is_only_its_write() {
        let design = load_design(TOY).unwrap();
        let pdg = build_pdg(&design);
        let slice = static_slice(&pdg, &design, &obs(&design, &["dead"])).unwrap();
        let expected: BTreeSet<_> = [5].map(sid).into_iter().collect();
        assert_eq!(slice.statements, expected);
        assert_eq!(slice.statements, closure_slice(&design, &pdg, &slice.criterion));
    }

    #[test]
    fn undefined_criterion_is_rejected() {
        let design = load_design(TOY).unwrap();
        let pdg = build_pdg(&design);
        // in_a is an input: it exists but nothing defines it
        let err = static_slice(&pdg, &design, &obs(&design, &["in_a"])).unwrap_err();
        assert_eq!(err, SliceError::EmptyCriterion);
        let err = static_slice(&pdg, &design, &BTreeSet::new()).unwrap_err();
        assert_eq!(err, SliceError::EmptyCriterion);
    }

    #[test]
    fn slice_is_monotone_in_the_criterion() {
        let design = load_design(TOY).unwrap();
        let pdg = build_pdg(&design);
        let a = static_slice(&pdg, &design, &obs(&design, &["out"])).unwrap();
        let b = static_slice(&pdg, &design, &obs(&design, &["dead"])).unwrap();
        let ab = static_slice(&pdg, &design, &obs(&design, &["out", "dead"])).unwrap();
        let union: BTreeSet<_> = a.statements.union(&b.statements).copied().collect();
        assert_eq!(ab.statements, union);
    }

    #[test]
    fn suppressing_out_of_slice_statements_preserves_observations() {
        use crate::sim::{simulate_golden, simulate_with_suppression, Stimulus};
        let design = load_design(TOY).unwrap();
        let pdg = build_pdg(&design);
        let criterion = obs(&design, &["out"]);
        let slice = static_slice(&pdg, &design, &criterion).unwrap();
        let stim = Stimulus::new(
            &design,
            design.stimulus_inputs(),
            vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 0], vec![0, 1]],
        );
        let observation: Vec<SignalId> = criterion.iter().copied().collect();
        let baseline = simulate_golden(&design, &stim, &observation).unwrap();
        let mut suppress = vec![false; design.statements().len()];
        for s in design.sliceable_statements() {
            if !slice.contains(*s) {
                suppress[s.index()] = true;
            }
        }
        let forced = simulate_with_suppression(&design, &stim, &observation, &suppress).unwrap();
        assert_eq!(baseline.golden, forced);
    }
}
