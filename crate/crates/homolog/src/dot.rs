//! DOT emission for the diagrams the tool produces: normal factorisations,
//! Hasse diagrams of normal-subobject lattices, the bicartesian square of a
//! subquotient, and spectral-page grids with their differentials.
//!
//! All emitters go through one deterministic renderer: nodes and edges are
//! written in the order given, labels are escaped, and no timestamps or
//! addresses appear, so repeated runs are byte-identical.

use crate::finite::FinLattice;

#[derive(Clone, Debug, Default)]
pub struct Dot {
    pub name: String,
    /// (id, label)
    pub nodes: Vec<(String, String)>,
    /// (from id, to id, label)
    pub edges: Vec<(String, String, String)>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Dot {
    pub fn new(name: &str) -> Dot {
        Dot { name: name.into(), ..Dot::default() }
    }

    pub fn node(&mut self, id: &str, label: &str) {
        self.nodes.push((id.into(), label.into()));
    }

    pub fn edge(&mut self, from: &str, to: &str, label: &str) {
        self.edges.push((from.into(), to.into(), label.into()));
    }

    pub fn render(&self) -> String {
        let mut out = format!("digraph \"{}\" {{\n", escape(&self.name));
        out.push_str("  rankdir=LR;\n  node [shape=box];\n");
        for (id, label) in &self.nodes {
            out.push_str(&format!("  \"{}\" [label=\"{}\"];\n", escape(id), escape(label)));
        }
        for (from, to, label) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                escape(from),
                escape(to),
                escape(label)
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Hasse diagram of a finite lattice: one node per element, one edge per
/// cover relation (x < y with nothing strictly between).
pub fn hasse(l: &FinLattice, labels: &[String]) -> Dot {
    assert_eq!(labels.len(), l.size, "one label per lattice element");
    let mut d = Dot::new("hasse");
    for (i, lab) in labels.iter().enumerate() {
        d.node(&format!("n{i}"), lab);
    }
    for x in 0..l.size {
        for y in 0..l.size {
            if x == y || !l.leq[x][y] {
                continue;
            }
            let covered = (0..l.size)
                .any(|z| z != x && z != y && l.leq[x][z] && l.leq[z][y]);
            if !covered {
                d.edge(&format!("n{x}"), &format!("n{y}"), "");
            }
        }
    }
    d
}

/// The five morphisms of a normal factorisation
/// `f = nim ∘ central ∘ ncm` with its kernel and cokernel:
///
/// ```text
/// Ker → A → B → Cok
///       ↓       ↑
///      A/K  →  Nim
/// ```
pub fn factorisation(labels: &FactorisationLabels) -> Dot {
    let mut d = Dot::new("factorisation");
    d.node("ker", &labels.ker);
    d.node("dom", &labels.dom);
    d.node("cod", &labels.cod);
    d.node("cok", &labels.cok);
    d.node("coim", &labels.coim);
    d.node("nim", &labels.nim);
    d.edge("ker", "dom", "ker f");
    d.edge("dom", "cod", "f");
    d.edge("cod", "cok", "cok f");
    d.edge("dom", "coim", "ncm f");
    d.edge("coim", "nim", "g");
    d.edge("nim", "cod", "nim f");
    d
}

#[derive(Clone, Debug)]
pub struct FactorisationLabels {
    pub ker: String,
    pub dom: String,
    pub cod: String,
    pub cok: String,
    pub coim: String,
    pub nim: String,
}

/// The bicartesian square of a subquotient: m and q on the outside, the
/// induced h and k closing the square.
pub fn bicartesian(m_dom: &str, ambient: &str, object: &str, quotient: &str) -> Dot {
    let mut d = Dot::new("bicartesian");
    d.node("m_dom", m_dom);
    d.node("ambient", ambient);
    d.node("object", object);
    d.node("quotient", quotient);
    d.edge("m_dom", "ambient", "m");
    d.edge("ambient", "quotient", "q");
    d.edge("m_dom", "object", "h");
    d.edge("object", "quotient", "k");
    d
}

/// A spectral-page grid: one node per surviving cell at page `r`, one arrow
/// per differential, of bidegree (−1, −r).
pub fn page_grid(r: usize, cells: &[(i64, i64, String)], diffs: &[((i64, i64), (i64, i64))]) -> Dot {
    let mut d = Dot::new(&format!("page-{r}"));
    for (n, p, label) in cells {
        d.node(&format!("e_{n}_{p}"), &format!("E^{r}({n},{p}) {label}"));
    }
    for ((n, p), (tn, tp)) in diffs {
        assert_eq!((*tn, *tp), (n - 1, p - r as i64), "differential bidegree must be (-1,-r)");
        d.edge(&format!("e_{n}_{p}"), &format!("e_{tn}_{tp}"), &format!("d{r}"));
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_chain_gives_three_nodes_and_two_cover_edges() {
        let l = FinLattice::chain(3);
        let labels: Vec<String> = (0..3).map(|i| format!("x{i}")).collect();
        let d = hasse(&l, &labels);
        assert_eq!(d.nodes.len(), 3);
        assert_eq!(d.edges.len(), 2);
        let text = d.render();
        assert!(text.starts_with("digraph"));
        assert!(text.contains("\"n0\" -> \"n1\""));
        assert!(text.contains("\"n1\" -> \"n2\""));
        assert!(!text.contains("\"n0\" -> \"n2\""), "transitive edge must be omitted");
    }

    #[test]
    fn bicartesian_square_has_four_nodes_and_four_edges() {
        let d = bicartesian("M", "A", "M/N", "A/N");
        assert_eq!(d.nodes.len(), 4);
        assert_eq!(d.edges.len(), 4);
        let text = d.render();
        for lab in ["m", "q", "h", "k"] {
            assert!(text.contains(&format!("label=\"{lab}\"")));
        }
    }

    #[test]
    fn page_grid_checks_differential_bidegree() {
        let cells = vec![(1i64, 0i64, "Z/2".to_string()), (0, -2, "Z/2".to_string())];
        let diffs = vec![((1i64, 0i64), (0i64, -2i64))];
        let d = page_grid(2, &cells, &diffs);
        assert_eq!(d.nodes.len(), 2);
        assert_eq!(d.edges.len(), 1);
        assert!(d.render().contains("label=\"d2\""));
    }

    #[test]
    #[should_panic]
    fn page_grid_rejects_wrong_bidegree() {
        let cells = vec![(1i64, 0i64, String::new()), (0, -1, String::new())];
        page_grid(2, &cells, &[((1, 0), (0, -1))]);
    }

    #[test]
    fn rendering_is_deterministic() {
        let l = FinLattice::chain(3);
        let labels: Vec<String> = (0..3).map(|i| format!("x{i}")).collect();
        assert_eq!(hasse(&l, &labels).render(), hasse(&l, &labels).render());
    }
}
