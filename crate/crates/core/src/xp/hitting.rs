//! Minimal hitting sets subject to blocking constraints.
//!
//! `minimal_hs(targets, blocked)` looks for a set that intersects every target
//! and contains no blocked set, then shrinks it to a minimal hitting set.
//! A greedy construction is tried first; when it paints itself into a corner an
//! exhaustive DPLL search over the same constraints decides the question.

use crate::features::FeatureSet;

/// A set hitting every member of `targets`, not a superset of any member of
/// `blocked`, and minimal among hitting sets; `None` if no such set exists.
pub fn minimal_hs(targets: &[FeatureSet], blocked: &[FeatureSet], m: usize) -> Option<FeatureSet> {
    if targets.iter().any(FeatureSet::is_empty) || blocked.iter().any(FeatureSet::is_empty) {
        return None;
    }
    let found = greedy(targets, blocked, m).or_else(|| Dpll::new(targets, blocked, m).solve())?;
    Some(shrink(found, targets))
}

fn hits_all(y: &FeatureSet, targets: &[FeatureSet]) -> bool {
    targets.iter().all(|t| t.intersects(y))
}

/// Drops members in ascending id order while every target stays hit.
/// Subsets of a set avoiding all blocked supersets avoid them too.
fn shrink(mut y: FeatureSet, targets: &[FeatureSet]) -> FeatureSet {
    for i in y.to_vec() {
        let smaller = y.without(i);
        if hits_all(&smaller, targets) {
            y = smaller;
        }
    }
    y
}

fn incidence(sets: &[FeatureSet], m: usize) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); m];
    for (k, s) in sets.iter().enumerate() {
        for i in s.iter() {
            inc[i].push(k);
        }
    }
    inc
}

fn greedy(targets: &[FeatureSet], blocked: &[FeatureSet], m: usize) -> Option<FeatureSet> {
    let t_inc = incidence(targets, m);
    let b_inc = incidence(blocked, m);
    let mut hit = vec![false; targets.len()];
    let mut remaining = targets.len();
    let mut inside = vec![0usize; blocked.len()];
    let b_len: Vec<usize> = blocked.iter().map(FeatureSet::len).collect();
    let mut y = FeatureSet::empty(m);
    while remaining > 0 {
        let mut best: Option<(usize, usize)> = None;
        for f in 0..m {
            if y.contains(f) || b_inc[f].iter().any(|&b| inside[b] + 1 == b_len[b]) {
                continue;
            }
            let gain = t_inc[f].iter().filter(|&&t| !hit[t]).count();
            if gain > 0 && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, f));
            }
        }
        let (_, f) = best?;
        y.insert(f);
        for &t in &t_inc[f] {
            if !hit[t] {
                hit[t] = true;
                remaining -= 1;
            }
        }
        for &b in &b_inc[f] {
            inside[b] += 1;
        }
    }
    Some(y)
}

const UNSET: i8 = -1;

/// Satisfiability of: every target has a true member, every blocked set has a
/// false member.
struct Dpll<'a> {
    targets: &'a [FeatureSet],
    blocked: &'a [FeatureSet],
    m: usize,
}

impl<'a> Dpll<'a> {
    fn new(targets: &'a [FeatureSet], blocked: &'a [FeatureSet], m: usize) -> Self {
        Dpll {
            targets,
            blocked,
            m,
        }
    }

    fn solve(&self) -> Option<FeatureSet> {
        let mut assign = vec![UNSET; self.m];
        if self.search(&mut assign) {
            Some(FeatureSet::from_ids(
                self.m,
                (0..self.m).filter(|&i| assign[i] == 1),
            ))
        } else {
            None
        }
    }

    /// Unit propagation. Returns false on conflict; assigned variables are
    /// appended to `trail`.
    fn propagate(&self, assign: &mut [i8], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for (clauses, want) in [(self.targets, 1i8), (self.blocked, 0i8)] {
                for c in clauses {
                    let mut open = None;
                    let mut n_open = 0;
                    let mut satisfied = false;
                    for i in c.iter() {
                        match assign[i] {
                            UNSET => {
                                n_open += 1;
                                open = Some(i);
                            }
                            v if v == want => {
                                satisfied = true;
                                break;
                            }
                            _ => {}
                        }
                    }
                    if satisfied {
                        continue;
                    }
                    match n_open {
                        0 => return false,
                        1 => {
                            let i = open.unwrap();
                            assign[i] = want;
                            trail.push(i);
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&self, assign: &mut [i8]) -> bool {
        let mut trail = Vec::new();
        if !self.propagate(assign, &mut trail) {
            undo(assign, &trail);
            return false;
        }
        // Branch on the free variable occurring in most unsatisfied targets.
        let mut score = vec![0usize; self.m];
        let mut any_open = false;
        for t in self.targets {
            if t.iter().any(|i| assign[i] == 1) {
                continue;
            }
            any_open = true;
            for i in t.iter().filter(|&i| assign[i] == UNSET) {
                score[i] += 1;
            }
        }
        if !any_open {
            // Remaining variables default to false, which only helps the
            // blocked clauses.
            for a in assign.iter_mut() {
                if *a == UNSET {
                    *a = 0;
                }
            }
            return true;
        }
        let var = (0..self.m)
            .filter(|&i| assign[i] == UNSET)
            .max_by(|&a, &b| score[a].cmp(&score[b]).then(b.cmp(&a)))
            .expect("an unsatisfied target has an unassigned member after propagation");
        for value in [1i8, 0] {
            assign[var] = value;
            if self.search(assign) {
                return true;
            }
            assign[var] = UNSET;
        }
        undo(assign, &trail);
        false
    }
}

fn undo(assign: &mut [i8], trail: &[usize]) {
    for &i in trail {
        assign[i] = UNSET;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[usize]) -> FeatureSet {
        FeatureSet::from_ids(6, ids.iter().copied())
    }

    #[test]
    fn empty_problem_gives_empty_set() {
        assert_eq!(minimal_hs(&[], &[], 6), Some(set(&[])));
    }

    #[test]
    fn singletons_are_forced() {
        assert_eq!(minimal_hs(&[set(&[1]), set(&[2])], &[], 6), Some(set(&[1, 2])));
    }

    #[test]
    fn blocking_redirects_the_candidate() {
        // Education=0, Status=1, Hours/w=5.
        let targets = [set(&[0, 5]), set(&[0, 1])];
        assert_eq!(minimal_hs(&targets, &[], 6), Some(set(&[0])));
        assert_eq!(minimal_hs(&targets, &[set(&[0])], 6), Some(set(&[1, 5])));
        assert_eq!(minimal_hs(&targets, &[set(&[0]), set(&[1, 5])], 6), None);
    }

    #[test]
    fn empty_target_cannot_be_hit() {
        assert_eq!(minimal_hs(&[set(&[])], &[], 6), None);
    }

    #[test]
    fn dpll_recovers_when_greedy_fails() {
        // Greedy picks 0 (hits three targets), after which {1,2} and {3,4}
        // cannot both be hit without completing a blocked set.
        let targets = [set(&[0, 1]), set(&[0, 3]), set(&[0, 5]), set(&[1, 3, 5])];
        let blocked = [set(&[0, 1]), set(&[0, 3]), set(&[0, 5])];
        assert!(greedy(&targets, &blocked, 6).is_none());
        let y = minimal_hs(&targets, &blocked, 6).unwrap();
        assert!(hits_all(&y, &targets));
        assert!(!blocked.iter().any(|b| b.is_subset(&y)));
        assert_eq!(y, set(&[1, 3, 5]));
    }
}
