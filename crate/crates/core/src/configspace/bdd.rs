//! Node store for reduced ordered binary decision diagrams.
//!
//! Variable `i` is feature `i`; the order is fixed to declaration order and
//! never changes. Nodes are hash-consed, so two functions are equal iff their
//! root ids are equal. Terminals carry `var == num_vars`.

use std::collections::HashMap;

pub(crate) type NodeId = u32;

pub(crate) const FALSE: NodeId = 0;
pub(crate) const TRUE: NodeId = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Node {
    pub var: u32,
    pub lo: NodeId,
    pub hi: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Diff,
    Xor,
}

pub(crate) struct Store {
    num_vars: u32,
    nodes: Vec<Node>,
    unique: HashMap<Node, NodeId>,
    apply_cache: HashMap<(Op, NodeId, NodeId), NodeId>,
    not_cache: HashMap<NodeId, NodeId>,
    count_cache: HashMap<NodeId, u128>,
}

impl Store {
    pub fn new(num_vars: usize) -> Store {
        let num_vars = num_vars as u32;
        let terminal = |id| Node {
            var: num_vars,
            lo: id,
            hi: id,
        };
        Store {
            num_vars,
            nodes: vec![terminal(FALSE), terminal(TRUE)],
            unique: HashMap::new(),
            apply_cache: HashMap::new(),
            not_cache: HashMap::new(),
            count_cache: HashMap::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    pub fn var(&self, id: NodeId) -> u32 {
        self.nodes[id as usize].var
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn mk(&mut self, var: u32, lo: NodeId, hi: NodeId) -> NodeId {
        if lo == hi {
            return lo;
        }
        debug_assert!(var < self.var(lo) && var < self.var(hi));
        let node = Node { var, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    /// Cofactors of `id` with respect to `var`, which must not lie below the
    /// top variable of `id`.
    fn cofactors(&self, id: NodeId, var: u32) -> (NodeId, NodeId) {
        let n = self.node(id);
        if n.var == var {
            (n.lo, n.hi)
        } else {
            (id, id)
        }
    }

    pub fn literal(&mut self, var: u32, value: bool) -> NodeId {
        if value {
            self.mk(var, FALSE, TRUE)
        } else {
            self.mk(var, TRUE, FALSE)
        }
    }

    pub fn cube(&mut self, support: u64, values: u64) -> NodeId {
        let mut node = TRUE;
        for var in (0..self.num_vars).rev() {
            let bit = 1u64 << var;
            if support & bit != 0 {
                node = if values & bit != 0 {
                    self.mk(var, FALSE, node)
                } else {
                    self.mk(var, node, FALSE)
                };
            }
        }
        node
    }

    /// Builds the set of the given assignments. `sorted` must be strictly
    /// increasing in bit-string order (feature 0 most significant).
    pub fn build_members(&mut self, sorted: &[u64]) -> NodeId {
        self.build_sorted(0, sorted)
    }

    fn build_sorted(&mut self, var: u32, slice: &[u64]) -> NodeId {
        if slice.is_empty() {
            return FALSE;
        }
        if var == self.num_vars {
            return TRUE;
        }
        let bit = 1u64 << var;
        let split = slice.partition_point(|&b| b & bit == 0);
        let lo = self.build_sorted(var + 1, &slice[..split]);
        let hi = self.build_sorted(var + 1, &slice[split..]);
        self.mk(var, lo, hi)
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        match a {
            FALSE => TRUE,
            TRUE => FALSE,
            _ => {
                if let Some(&r) = self.not_cache.get(&a) {
                    return r;
                }
                let n = self.node(a);
                let lo = self.not(n.lo);
                let hi = self.not(n.hi);
                let r = self.mk(n.var, lo, hi);
                self.not_cache.insert(a, r);
                r
            }
        }
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::Or, a, b)
    }

    pub fn diff(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::Diff, a, b)
    }

    pub fn xor(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::Xor, a, b)
    }

    fn apply(&mut self, op: Op, a: NodeId, b: NodeId) -> NodeId {
        let terminal = match op {
            Op::And => match (a, b) {
                (FALSE, _) | (_, FALSE) => Some(FALSE),
                (TRUE, x) | (x, TRUE) => Some(x),
                _ if a == b => Some(a),
                _ => None,
            },
            Op::Or => match (a, b) {
                (TRUE, _) | (_, TRUE) => Some(TRUE),
                (FALSE, x) | (x, FALSE) => Some(x),
                _ if a == b => Some(a),
                _ => None,
            },
            Op::Diff => match (a, b) {
                (FALSE, _) | (_, TRUE) => Some(FALSE),
                (x, FALSE) => Some(x),
                (TRUE, x) => Some(self.not(x)),
                _ if a == b => Some(FALSE),
                _ => None,
            },
            Op::Xor => match (a, b) {
                _ if a == b => Some(FALSE),
                (FALSE, x) | (x, FALSE) => Some(x),
                (TRUE, x) | (x, TRUE) => Some(self.not(x)),
                _ => None,
            },
        };
        if let Some(r) = terminal {
            return r;
        }
        let key = match op {
            Op::Diff => (op, a, b),
            _ => (op, a.min(b), a.max(b)),
        };
        if let Some(&r) = self.apply_cache.get(&key) {
            return r;
        }
        let var = self.var(a).min(self.var(b));
        let (a0, a1) = self.cofactors(a, var);
        let (b0, b1) = self.cofactors(b, var);
        let lo = self.apply(op, a0, b0);
        let hi = self.apply(op, a1, b1);
        let r = self.mk(var, lo, hi);
        self.apply_cache.insert(key, r);
        r
    }

    /// Number of satisfying assignments over all variables.
    pub fn count(&mut self, root: NodeId) -> u128 {
        let below = self.count_below(root);
        below << self.var(root)
    }

    /// Satisfying assignments over the variables `var(id)..num_vars`.
    fn count_below(&mut self, id: NodeId) -> u128 {
        match id {
            FALSE => 0,
            TRUE => 1,
            _ => {
                if let Some(&c) = self.count_cache.get(&id) {
                    return c;
                }
                let n = self.node(id);
                let lo = self.count_below(n.lo) << (self.var(n.lo) - n.var - 1);
                let hi = self.count_below(n.hi) << (self.var(n.hi) - n.var - 1);
                let c = lo + hi;
                self.count_cache.insert(id, c);
                c
            }
        }
    }

    pub fn contains(&self, root: NodeId, bits: u64) -> bool {
        let mut id = root;
        while id > TRUE {
            let n = self.node(id);
            id = if bits & (1u64 << n.var) != 0 { n.hi } else { n.lo };
        }
        id == TRUE
    }

    /// Lexicographically least member (free variables set to false).
    pub fn min_member(&self, root: NodeId) -> Option<u64> {
        if root == FALSE {
            return None;
        }
        let mut bits = 0u64;
        let mut id = root;
        while id > TRUE {
            let n = self.node(id);
            if n.lo != FALSE {
                id = n.lo;
            } else {
                bits |= 1u64 << n.var;
                id = n.hi;
            }
        }
        Some(bits)
    }

    /// Visits all members in increasing bit-string order.
    pub fn for_each_member(&self, root: NodeId, f: &mut dyn FnMut(u64)) {
        self.walk(root, 0, 0, f);
    }

    fn walk(&self, id: NodeId, var: u32, bits: u64, f: &mut dyn FnMut(u64)) {
        if id == FALSE {
            return;
        }
        if var == self.num_vars {
            f(bits);
            return;
        }
        let n = self.node(id);
        if n.var > var {
            self.walk(id, var + 1, bits, f);
            self.walk(id, var + 1, bits | (1u64 << var), f);
        } else {
            self.walk(n.lo, var + 1, bits, f);
            self.walk(n.hi, var + 1, bits | (1u64 << var), f);
        }
    }

    /// Nodes reachable from `root`, internal ones only, ordered by variable.
    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![root];
        let mut out = Vec::new();
        while let Some(id) = stack.pop() {
            if id <= TRUE || !seen.insert(id) {
                continue;
            }
            out.push(id);
            let n = self.node(id);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        out.sort_by_key(|&id| (self.var(id), id));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_consing_gives_canonical_ids() {
        let mut s = Store::new(3);
        let x = s.literal(0, true);
        let y = s.literal(1, true);
        let a = s.and(x, y);
        let nx = s.not(x);
        let ny = s.not(y);
        let o = s.or(nx, ny);
        let b = s.not(o);
        assert_eq!(a, b);
        assert_eq!(s.count(a), 2);
        let t = s.or(x, nx);
        assert_eq!(t, TRUE);
        assert_eq!(s.xor(a, a), FALSE);
    }

    #[test]
    fn build_members_matches_unions() {
        let mut s = Store::new(4);
        let configs = [0b0000u64, 0b0101, 0b0011, 0b1110];
        let mut sorted = configs.to_vec();
        sorted.sort_by_key(|&b| crate::configspace::space::lex_key(b, 4));
        let built = s.build_members(&sorted);
        let mut union = FALSE;
        for &c in &configs {
            let cube = s.cube(0b1111, c);
            union = s.or(union, cube);
        }
        assert_eq!(built, union);
        let mut seen = Vec::new();
        s.for_each_member(built, &mut |b| seen.push(b));
        assert_eq!(seen, sorted);
    }
}
