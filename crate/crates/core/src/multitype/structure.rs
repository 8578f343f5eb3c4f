//! The bipartite graph of an allocation and the checks built on it.
//!
//! Row nodes are types `0..s`, column nodes are classes `s..s+m`, and
//! `(i, j)` is an edge when class `j` holds a student of type `i`.

use serde::Serialize;

use super::{objective_unchecked, AllocationMatrix, MultiTypeInstance};
use crate::error::{Error, Result};
use crate::solver::max_paired_classes;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartiteStructure {
    pub types: usize,
    pub classes: usize,
    /// `(type, class)` pairs with a positive entry.
    pub edges: Vec<(usize, usize)>,
    pub mixed: Vec<usize>,
    /// Connected components of the graph restricted to mixed classes,
    /// counting every type node.
    pub mixed_trees: usize,
}

struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// False when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl BipartiteStructure {
    pub fn of(alloc: &AllocationMatrix) -> Self {
        let s = alloc.types();
        let m = alloc.classes();
        let edges: Vec<(usize, usize)> = (0..m)
            .flat_map(|j| {
                (0..s)
                    .filter(move |&i| alloc.entry(i, j) > 0)
                    .map(move |i| (i, j))
            })
            .collect();
        let mixed = alloc.mixed_classes();
        let mut comp = Components::new(s + m);
        let mut merges = 0;
        for &(i, j) in &edges {
            if mixed.contains(&j) && comp.union(i, s + j) {
                merges += 1;
            }
        }
        let mixed_trees = s + mixed.len() - merges;
        Self {
            types: s,
            classes: m,
            edges,
            mixed,
            mixed_trees,
        }
    }

    pub fn is_forest(&self) -> bool {
        let mut comp = Components::new(self.types + self.classes);
        self.edges
            .iter()
            .all(|&(i, j)| comp.union(i, self.types + j))
    }

    fn mixed_edges(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .filter(|(_, j)| self.mixed.contains(j))
            .collect()
    }

    /// The mixed-class graph is a single path through every type node.
    pub fn mixed_is_path(&self) -> bool {
        let edges = self.mixed_edges();
        let nodes = self.types + self.mixed.len();
        if edges.len() + 1 != nodes || self.mixed_trees != 1 {
            return false;
        }
        let mut degree = vec![0usize; self.types + self.classes];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[self.types + j] += 1;
        }
        degree.iter().all(|&d| d <= 2)
    }

    /// A cycle as alternating `(type, class)` steps: `rows[k]` and
    /// `rows[k + 1]` (cyclically) both meet `classes[k]`.
    pub fn find_cycle(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let s = self.types;
        let n = s + self.classes;
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in &self.edges {
            adj[i].push(s + j);
            adj[s + j].push(i);
        }
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                if *next == adj[u].len() {
                    stack.pop();
                    continue;
                }
                let v = adj[u][*next];
                *next += 1;
                if v == parent[u] {
                    continue;
                }
                if depth[v] == usize::MAX {
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    stack.push((v, 0));
                } else if depth[v] < depth[u] {
                    let mut path = vec![u];
                    let mut x = u;
                    while x != v {
                        x = parent[x];
                        path.push(x);
                    }
                    return Some(split_cycle(&path, s));
                }
            }
        }
        None
    }
}

/// Rotates a node cycle to start at a type node and splits it into the
/// alternating type and class sequences.
fn split_cycle(path: &[usize], s: usize) -> (Vec<usize>, Vec<usize>) {
    let start = path
        .iter()
        .position(|&x| x < s)
        .expect("bipartite cycle has a type node");
    let nodes: Vec<usize> = path[start..]
        .iter()
        .chain(&path[..start])
        .copied()
        .collect();
    let rows = nodes.iter().step_by(2).copied().collect();
    let classes = nodes.iter().skip(1).step_by(2).map(|&c| c - s).collect();
    (rows, classes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub structure: BipartiteStructure,
    pub forest: bool,
    pub mixed_classes: usize,
    /// At most `s - 1` mixed classes.
    pub within_bound: bool,
    /// With exactly `s - 1` mixed classes: the mixed-class graph is a path
    /// with `2(s - 1)` edges.
    pub path: Option<bool>,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.forest && self.within_bound && self.path != Some(false)
    }
}

pub fn verify_structure(alloc: &AllocationMatrix, types: usize) -> Result<StructureReport> {
    if types != alloc.types() || types == 0 {
        return Err(Error::invalid(format!(
            "allocation has {} types, expected {types}",
            alloc.types()
        )));
    }
    let structure = BipartiteStructure::of(alloc);
    let mixed = structure.mixed.len();
    let path = (mixed == types - 1)
        .then(|| structure.mixed_is_path() && structure.mixed_edges().len() == 2 * (types - 1));
    Ok(StructureReport {
        forest: structure.is_forest(),
        mixed_classes: mixed,
        within_bound: mixed < types,
        path,
        structure,
    })
}

/// Shifts one student along a cycle of the allocation graph in whichever
/// direction raises the objective. `None` when the graph is a forest.
pub fn cycle_break_improve(
    inst: &MultiTypeInstance,
    alloc: &AllocationMatrix,
) -> Result<Option<AllocationMatrix>> {
    alloc.check_feasible(inst)?;
    let Some((rows, classes)) = BipartiteStructure::of(alloc).find_cycle() else {
        return Ok(None);
    };
    let t = rows.len();
    for k in 0..t {
        let (a, b) = (rows[k], rows[(k + 1) % t]);
        if inst.probs()[a] == inst.probs()[b] {
            return Err(Error::ImprovementNotGuaranteed(format!(
                "types {a} and {b} share a class on the cycle and have equal p"
            )));
        }
    }
    let shifted = |sign: i64| -> AllocationMatrix {
        let mut cols = alloc.columns().to_vec();
        for k in 0..t {
            let j = classes[k];
            cols[j][rows[k]] = (cols[j][rows[k]] as i64 + sign) as usize;
            let next = rows[(k + 1) % t];
            cols[j][next] = (cols[j][next] as i64 - sign) as usize;
        }
        AllocationMatrix::from_columns(alloc.types(), cols).expect("column sums are unchanged")
    };
    let base = objective_unchecked(inst, alloc);
    let (plus, minus) = (shifted(1), shifted(-1));
    let (fp, fm) = (
        objective_unchecked(inst, &plus),
        objective_unchecked(inst, &minus),
    );
    let (best, value) = if fp >= fm { (plus, fp) } else { (minus, fm) };
    if value > base {
        Ok(Some(best))
    } else {
        Err(Error::ImprovementNotGuaranteed(format!(
            "neither shift beat {base} in floating point ({fp}, {fm})"
        )))
    }
}

/// Applies [`cycle_break_improve`] until the graph is a forest; returns the
/// result and the number of shifts.
pub fn improve_to_forest(
    inst: &MultiTypeInstance,
    alloc: &AllocationMatrix,
) -> Result<(AllocationMatrix, usize)> {
    let mut current = alloc.clone();
    let mut steps = 0;
    while let Some(next) = cycle_break_improve(inst, &current)? {
        current = next;
        steps += 1;
    }
    Ok((current, steps))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingletonReport {
    /// `max_{i,j} p_i + p_j - 2 p_i p_j`, pairs with `i = j` included.
    pub threshold: f64,
    pub hypothesis_met: bool,
    pub singletons: usize,
    pub classes: usize,
    pub profitable: bool,
    /// `m = Z` or `m <= ceil(Z / 2)`.
    pub gap_ok: bool,
    /// `None` when `W` is below the threshold.
    pub holds: Option<bool>,
}

pub fn singleton_threshold(probs: &[f64]) -> f64 {
    let mut t = f64::NEG_INFINITY;
    for &a in probs {
        for &b in probs {
            t = t.max(a + b - 2.0 * a * b);
        }
    }
    t
}

/// For an optimum: at most one singleton class and the class-count gap,
/// both conditional on `W` reaching the pairwise merge threshold.
pub fn singleton_bound_check(
    inst: &MultiTypeInstance,
    alloc: &AllocationMatrix,
) -> Result<SingletonReport> {
    alloc.check_feasible(inst)?;
    let threshold = singleton_threshold(inst.probs());
    let hypothesis_met = inst.teacher_cost() >= threshold;
    let z = inst.students();
    let m = alloc.classes();
    let singletons = alloc.singleton_classes();
    let profitable = objective_unchecked(inst, alloc) > 0.0;
    let gap_ok = m == z || m <= max_paired_classes(z);
    let holds = hypothesis_met.then_some(singletons <= 1 && (gap_ok || !profitable));
    Ok(SingletonReport {
        threshold,
        hypothesis_met,
        singletons,
        classes: m,
        profitable,
        gap_ok,
        holds,
    })
}

/// Classes holding only one type, for a type none of whose students mix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegregatedBlock {
    pub type_index: usize,
    pub sizes: Vec<usize>,
    /// `V sum n p^n - k W` over the block.
    pub profit: f64,
    /// Sizes differ by at most one, or the block does not pay for itself.
    pub nearly_equal: bool,
}

pub fn segregated_blocks_check(
    inst: &MultiTypeInstance,
    alloc: &AllocationMatrix,
) -> Result<Vec<SegregatedBlock>> {
    alloc.check_feasible(inst)?;
    let mixed = alloc.mixed_classes();
    let mut out = Vec::new();
    for i in 0..inst.types() {
        let mixes = mixed.iter().any(|&j| alloc.entry(i, j) > 0);
        if mixes {
            continue;
        }
        let sizes: Vec<usize> = (0..alloc.classes())
            .map(|j| alloc.entry(i, j))
            .filter(|&n| n > 0)
            .collect();
        let p = inst.probs()[i];
        let output: f64 = sizes.iter().map(|&n| n as f64 * p.powi(n as i32)).sum();
        let profit = inst.unit_value() * output - sizes.len() as f64 * inst.teacher_cost();
        let spread = sizes.iter().max().unwrap_or(&0) - sizes.iter().min().unwrap_or(&0);
        out.push(SegregatedBlock {
            type_index: i,
            nearly_equal: spread <= 1 || profit <= 0.0,
            sizes,
            profit,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multitype::{evaluate_multitype, solve_multitype_bruteforce};
    use petgraph::graph::UnGraph;
    use proptest::prelude::*;

    fn has_cycle_oracle(alloc: &AllocationMatrix) -> bool {
        let s = alloc.types();
        let edges: Vec<(u32, u32)> = BipartiteStructure::of(alloc)
            .edges
            .iter()
            .map(|&(i, j)| (i as u32, (s + j) as u32))
            .collect();
        let mut g = UnGraph::<(), ()>::from_edges(&edges);
        while g.node_count() < s + alloc.classes() {
            g.add_node(());
        }
        petgraph::algo::is_cyclic_undirected(&g)
    }

    #[test]
    fn example_structure() {
        let inst = MultiTypeInstance::new(vec![0.8, 0.5], vec![3, 3], 0.51).unwrap();
        let best = solve_multitype_bruteforce(&inst).unwrap().best;
        let r = verify_structure(&best, 2).unwrap();
        assert!(r.forest);
        assert_eq!(r.mixed_classes, 1);
        assert_eq!(r.path, Some(true));
        assert!(r.holds());
    }

    #[test]
    fn four_cycle_improves() {
        let inst = MultiTypeInstance::new(vec![0.9, 0.6], vec![3, 3], 0.3).unwrap();
        let alloc = AllocationMatrix::from_rows(&[vec![1, 2], vec![2, 1]]).unwrap();
        let s = BipartiteStructure::of(&alloc);
        assert!(!s.is_forest());
        let (rows, classes) = s.find_cycle().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(classes.len(), 2);
        let better = cycle_break_improve(&inst, &alloc).unwrap().unwrap();
        let plus = AllocationMatrix::from_rows(&[vec![0, 3], vec![3, 0]]).unwrap();
        let minus = AllocationMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let base = evaluate_multitype(&inst, &alloc).unwrap();
        let fp = evaluate_multitype(&inst, &plus).unwrap();
        let fm = evaluate_multitype(&inst, &minus).unwrap();
        assert!(fp.max(fm) > base);
        assert_eq!(better, if fp >= fm { plus } else { minus });
    }

    #[test]
    fn forest_returns_none_and_equal_p_is_flagged() {
        let inst = MultiTypeInstance::new(vec![0.9, 0.6], vec![3, 3], 0.3).unwrap();
        let tree = AllocationMatrix::from_rows(&[vec![3, 0], vec![1, 2]]).unwrap();
        assert_eq!(cycle_break_improve(&inst, &tree).unwrap(), None);
        let tied = MultiTypeInstance::new(vec![0.7, 0.7], vec![3, 3], 0.3).unwrap();
        let cyc = AllocationMatrix::from_rows(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(matches!(
            cycle_break_improve(&tied, &cyc),
            Err(Error::ImprovementNotGuaranteed(_))
        ));
    }

    #[test]
    fn single_type_has_no_mixing() {
        let inst = MultiTypeInstance::new(vec![0.8], vec![9], 0.4).unwrap();
        let best = solve_multitype_bruteforce(&inst).unwrap().best;
        let r = verify_structure(&best, 1).unwrap();
        assert_eq!(r.mixed_classes, 0);
        assert!(r.holds());
        let threshold = singleton_threshold(&[0.8]);
        assert!((threshold - 2.0 * 0.8 * 0.2).abs() < 1e-15);
    }

    #[test]
    fn singleton_bound_example() {
        let inst = MultiTypeInstance::new(vec![0.6, 0.7], vec![3, 4], 0.5).unwrap();
        let best = solve_multitype_bruteforce(&inst).unwrap().best;
        let r = singleton_bound_check(&inst, &best).unwrap();
        // same-type pair: 2(0.6)(0.4)
        assert!((r.threshold - 0.48).abs() < 1e-12);
        assert!(r.hypothesis_met);
        assert_eq!(r.holds, Some(true));
        let cheap = MultiTypeInstance::new(vec![0.6, 0.7], vec![3, 4], 0.01).unwrap();
        let best = solve_multitype_bruteforce(&cheap).unwrap().best;
        assert_eq!(singleton_bound_check(&cheap, &best).unwrap().holds, None);
    }

    #[test]
    fn segregated_blocks_are_nearly_equal() {
        let inst = MultiTypeInstance::new(vec![0.95, 0.5], vec![8, 2], 0.6).unwrap();
        let best = solve_multitype_bruteforce(&inst).unwrap().best;
        for b in segregated_blocks_check(&inst, &best).unwrap() {
            assert!(b.nearly_equal, "{b:?} in {best}");
        }
    }

    fn allocation() -> impl Strategy<Value = AllocationMatrix> {
        (1usize..=3, 1usize..=4).prop_flat_map(|(s, m)| {
            proptest::collection::vec(proptest::collection::vec(0usize..=2, s), m).prop_map(
                move |mut cols| {
                    for c in &mut cols {
                        if c.iter().all(|&n| n == 0) {
                            c[0] = 1;
                        }
                    }
                    for i in 0..s {
                        if cols.iter().all(|c| c[i] == 0) {
                            cols[0][i] = 1;
                        }
                    }
                    AllocationMatrix::from_columns(s, cols).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn cycle_finder_agrees_with_graph_library(alloc in allocation()) {
            let s = BipartiteStructure::of(&alloc);
            prop_assert_eq!(!s.is_forest(), has_cycle_oracle(&alloc));
            prop_assert_eq!(s.find_cycle().is_some(), has_cycle_oracle(&alloc));
            if let Some((rows, classes)) = s.find_cycle() {
                let t = rows.len();
                for k in 0..t {
                    prop_assert!(alloc.entry(rows[k], classes[k]) > 0);
                    prop_assert!(alloc.entry(rows[(k + 1) % t], classes[k]) > 0);
                }
            }
        }

        #[test]
        fn repeated_shifts_end_in_a_forest(alloc in allocation()) {
            let probs = [0.9, 0.6, 0.35];
            let inst = MultiTypeInstance::new(probs[..alloc.types()].to_vec(), alloc.row_sums(), 0.4).unwrap();
            let before = evaluate_multitype(&inst, &alloc).unwrap();
            let (after, steps) = improve_to_forest(&inst, &alloc).unwrap();
            prop_assert!(BipartiteStructure::of(&after).is_forest());
            let value = evaluate_multitype(&inst, &after).unwrap();
            let improved = if steps == 0 { value == before } else { value > before };
            prop_assert!(improved);
        }
    }
}
