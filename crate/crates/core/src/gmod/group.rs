//! Finite groups as validated multiplication tables, with subgroup and coset
//! machinery.

use alloc::string::String;
use alloc::vec::Vec;

use super::GmodError;

/// A finite group on indices `0..order`, stored as a full multiplication
/// table. Construction validates the group axioms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteGroup {
    order: usize,
    // row-major: table[a * order + b] = a * b
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Build from labels and a full multiplication table, checking closure,
    /// associativity, identity, and inverses.
    pub fn from_table(labels: Vec<String>, table: Vec<usize>) -> Result<Self, GmodError> {
        let n = labels.len();
        if n == 0 || table.len() != n * n {
            return Err(GmodError::InvalidGroupTable("table shape mismatch"));
        }
        if table.iter().any(|&x| x >= n) {
            return Err(GmodError::InvalidGroupTable("entry out of range"));
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(GmodError::InvalidGroupTable("associativity fails"));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or(GmodError::InvalidGroupTable("no identity element"))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or(GmodError::InvalidGroupTable("missing inverse"))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup {
            order: n,
            table,
            identity,
            inverse,
            labels,
        })
    }

    /// Cyclic group of order `n`, elements `e, g, g^2, ...` in power order.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "empty group");
        let labels: Vec<String> = (0..n)
            .map(|i| match i {
                0 => String::from("e"),
                1 => String::from("g"),
                _ => alloc::format!("g^{i}"),
            })
            .collect();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push((a + b) % n);
            }
        }
        FiniteGroup::from_table(labels, table).expect("cyclic table is a group")
    }

    /// Direct product; element `(a, b)` has index `a * |right| + b` and label
    /// `(la,lb)`.
    pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup) -> Self {
        let n = left.order * right.order;
        let mut labels = Vec::with_capacity(n);
        for a in 0..left.order {
            for b in 0..right.order {
                labels.push(alloc::format!("({},{})", left.labels[a], right.labels[b]));
            }
        }
        let idx = |a: usize, b: usize| a * right.order + b;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let (a1, b1) = (x / right.order, x % right.order);
            for y in 0..n {
                let (a2, b2) = (y / right.order, y % right.order);
                table.push(idx(left.mul(a1, a2), right.mul(b1, b2)));
            }
        }
        FiniteGroup::from_table(labels, table).expect("product table is a group")
    }

    /// Build from a closed list of permutations of `0..points`, composing as
    /// `(p * q)(x) = p(q(x))`. The element list must be closed under
    /// composition.
    pub fn from_permutations(labels: Vec<String>, perms: Vec<Vec<usize>>) -> Result<Self, GmodError> {
        let n = labels.len();
        if perms.len() != n || n == 0 {
            return Err(GmodError::InvalidGroupTable("label/permutation count mismatch"));
        }
        let points = perms[0].len();
        for p in &perms {
            let mut seen = alloc::vec![false; points];
            if p.len() != points {
                return Err(GmodError::InvalidGroupTable("permutation length mismatch"));
            }
            for &x in p {
                if x >= points || seen[x] {
                    return Err(GmodError::InvalidGroupTable("not a permutation"));
                }
                seen[x] = true;
            }
        }
        let mut table = Vec::with_capacity(n * n);
        for p in &perms {
            for q in &perms {
                let composite: Vec<usize> = (0..points).map(|x| p[q[x]]).collect();
                let idx = perms
                    .iter()
                    .position(|r| *r == composite)
                    .ok_or(GmodError::InvalidGroupTable("composition leaves the list"))?;
                table.push(idx);
            }
        }
        FiniteGroup::from_table(labels, table)
    }

    /// Replace element labels, keeping the table.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order, "label count mismatch");
        self.labels = labels;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of_label(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|a| self.element_order(a) == self.order)
    }

    /// Whether the sorted index set is closed under product and inverse and
    /// contains the identity.
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        if !subset.contains(&self.identity) {
            return false;
        }
        if subset.iter().any(|&a| a >= self.order) {
            return false;
        }
        for &a in subset {
            if !subset.contains(&self.inverse[a]) {
                return false;
            }
            for &b in subset {
                if !subset.contains(&self.mul(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Every subgroup, each as a sorted index list, enumerated by checking
    /// all subsets. Deterministic: ascending bitmask order.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        assert!(self.order <= 16, "subgroup enumeration capped at order 16");
        let mut out = Vec::new();
        for mask in 0u32..(1 << self.order) {
            if mask & (1 << self.identity) == 0 {
                continue;
            }
            let subset: Vec<usize> = (0..self.order).filter(|&i| mask & (1 << i) != 0).collect();
            if self.is_subgroup(&subset) {
                out.push(subset);
            }
        }
        out
    }

    /// Left cosets of `h`, each sorted ascending, cosets ordered by least
    /// element. The identity coset (i.e. `h` itself) always comes first.
    pub fn left_cosets(&self, h: &[usize]) -> Vec<Vec<usize>> {
        debug_assert!(self.is_subgroup(h));
        let mut seen = alloc::vec![false; self.order];
        let mut cosets = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = h.iter().map(|&x| self.mul(g, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// `g h g^{-1}`, sorted.
    /// The subgroup as a standalone group on indices `0..h.len()` in the
    /// order of `h` (which must be sorted), with labels inherited.
    pub fn subgroup_as_group(&self, h: &[usize]) -> Result<FiniteGroup, GmodError> {
        if !self.is_subgroup(h) {
            return Err(GmodError::NotASubgroup);
        }
        let pos = |x: usize| h.iter().position(|&y| y == x).expect("subgroup is closed");
        let labels = h.iter().map(|&x| self.labels[x].clone()).collect();
        let mut table = Vec::with_capacity(h.len() * h.len());
        for &a in h {
            for &b in h {
                table.push(pos(self.mul(a, b)));
            }
        }
        FiniteGroup::from_table(labels, table)
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &[usize]) -> Vec<usize> {
        let gi = self.inverse[g];
        let mut out: Vec<usize> = h.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        out.sort_unstable();
        out
    }

    /// All distinct conjugates of `h`, sorted lexicographically.
    pub fn subgroup_conjugacy_class(&self, h: &[usize]) -> Vec<Vec<usize>> {
        let mut class: Vec<Vec<usize>> = (0..self.order)
            .map(|g| self.conjugate_subgroup(g, h))
            .collect();
        class.sort();
        class.dedup();
        class
    }
}

/// A homomorphism between finite groups, stored as the image list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    map: Vec<usize>,
    source_order: usize,
    target_order: usize,
}

impl GroupHom {
    pub fn new(
        source: &FiniteGroup,
        target: &FiniteGroup,
        map: Vec<usize>,
    ) -> Result<Self, GmodError> {
        if map.len() != source.order() || map.iter().any(|&x| x >= target.order()) {
            return Err(GmodError::NotAHomomorphism);
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GmodError::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom {
            map,
            source_order: source.order(),
            target_order: target.order(),
        })
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = alloc::vec![false; self.target_order];
        for &x in &self.map {
            hit[x] = true;
        }
        hit.iter().all(|&b| b)
    }

    /// Sorted kernel index list.
    pub fn kernel(&self, target_identity: usize) -> Vec<usize> {
        (0..self.source_order)
            .filter(|&a| self.map[a] == target_identity)
            .collect()
    }

    /// Image of a subgroup, sorted and deduplicated.
    pub fn image_of(&self, subset: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = subset.iter().map(|&a| self.map[a]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
