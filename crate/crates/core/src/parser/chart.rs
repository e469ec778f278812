//! Bottom-up active chart parser. Every distinct analysis is kept as its
//! own passive edge, so the complete edges over the whole input are
//! exactly the set of parse trees.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Cat, Feats, Node};

pub type Check = fn(&[Arc<Node>]) -> Option<Feats>;

pub struct Rule {
    pub lhs: Cat,
    pub rhs: Vec<Cat>,
    pub check: Check,
}

#[derive(Clone)]
struct Active {
    rule: usize,
    start: usize,
    end: usize,
    kids: Vec<Arc<Node>>,
}

/// Hard ceiling on passive edges; a runaway grammar fails closed.
const EDGE_LIMIT: usize = 200_000;

pub struct Chart<'g> {
    rules: &'g [Rule],
    by_first: HashMap<Cat, Vec<usize>>,
    passive: Vec<Vec<Arc<Node>>>,
    actives_at: Vec<Vec<Active>>,
    agenda: Vec<Arc<Node>>,
    edges: usize,
}

impl<'g> Chart<'g> {
    pub fn new(rules: &'g [Rule], len: usize) -> Chart<'g> {
        let mut by_first: HashMap<Cat, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            by_first.entry(r.rhs[0]).or_default().push(i);
        }
        Chart {
            rules,
            by_first,
            passive: vec![Vec::new(); len + 1],
            actives_at: vec![Vec::new(); len + 1],
            agenda: Vec::new(),
            edges: 0,
        }
    }

    pub fn seed(&mut self, node: Node) {
        self.agenda.push(Arc::new(node));
    }

    /// Runs to fixpoint and returns every passive edge of `cat` covering
    /// `start..end`.
    pub fn run(mut self, cat: Cat, start: usize, end: usize) -> Vec<Arc<Node>> {
        while let Some(node) = self.agenda.pop() {
            self.edges += 1;
            if self.edges > EDGE_LIMIT {
                return Vec::new();
            }
            self.passive[node.start].push(node.clone());
            if let Some(rules) = self.by_first.get(&node.cat).cloned() {
                for r in rules {
                    self.process(Active {
                        rule: r,
                        start: node.start,
                        end: node.end,
                        kids: vec![node.clone()],
                    });
                }
            }
            let waiting: Vec<Active> = self.actives_at[node.start]
                .iter()
                .filter(|a| self.rules[a.rule].rhs[a.kids.len()] == node.cat)
                .cloned()
                .collect();
            for a in waiting {
                self.process(extend(&a, &node));
            }
        }
        self.passive[start]
            .iter()
            .filter(|n| n.cat == cat && n.end == end)
            .cloned()
            .collect()
    }

    fn process(&mut self, a: Active) {
        let rule = &self.rules[a.rule];
        if a.kids.len() == rule.rhs.len() {
            if let Some(feats) = (rule.check)(&a.kids) {
                self.agenda.push(Arc::new(Node {
                    cat: rule.lhs,
                    start: a.start,
                    end: a.end,
                    feats,
                    kids: a.kids,
                    leaf: None,
                }));
            }
            return;
        }
        let want = rule.rhs[a.kids.len()];
        let next: Vec<Arc<Node>> = self.passive[a.end]
            .iter()
            .filter(|p| p.cat == want)
            .cloned()
            .collect();
        self.actives_at[a.end].push(a.clone());
        for p in next {
            self.process(extend(&a, &p));
        }
    }
}

fn extend(a: &Active, n: &Arc<Node>) -> Active {
    let mut kids = a.kids.clone();
    kids.push(n.clone());
    Active {
        rule: a.rule,
        start: a.start,
        end: n.end,
        kids,
    }
}
