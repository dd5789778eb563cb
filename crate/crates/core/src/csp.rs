//! Finite-domain backtracking search with forward checking.
//!
//! Variables are plain indices with ascending integer domains. Search picks
//! the unassigned variable with the fewest consistent values (ties to the
//! lowest index) and tries values in ascending order, so the first solution
//! is a deterministic function of the problem.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    AllDifferent(Vec<usize>),
    NotEqual(usize, usize),
    Equal(usize, usize),
    /// Values taken by `sub` form a subset of values taken by `sup`.
    ImageSubset { sub: Vec<usize>, sup: Vec<usize> },
}

impl Constraint {
    fn vars(&self) -> Vec<usize> {
        match self {
            Constraint::AllDifferent(v) => v.clone(),
            Constraint::NotEqual(a, b) | Constraint::Equal(a, b) => vec![*a, *b],
            Constraint::ImageSubset { sub, sup } => sub.iter().chain(sup).copied().collect(),
        }
    }

    fn consistent(&self, asg: &[Option<u32>]) -> bool {
        match self {
            Constraint::AllDifferent(vars) => {
                let mut seen = BTreeSet::new();
                vars.iter().filter_map(|&v| asg[v]).all(|x| seen.insert(x))
            }
            Constraint::NotEqual(a, b) => match (asg[*a], asg[*b]) {
                (Some(x), Some(y)) => x != y,
                _ => true,
            },
            Constraint::Equal(a, b) => match (asg[*a], asg[*b]) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            },
            Constraint::ImageSubset { sub, sup } => {
                let have: BTreeSet<u32> = sup.iter().filter_map(|&v| asg[v]).collect();
                let open = sup.iter().filter(|&&v| asg[v].is_none()).count();
                let missing: BTreeSet<u32> = sub
                    .iter()
                    .filter_map(|&v| asg[v])
                    .filter(|x| !have.contains(x))
                    .collect();
                missing.len() <= open
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Problem {
    domains: Vec<Vec<u32>>,
    constraints: Vec<Constraint>,
}

impl Problem {
    pub fn new(domains: Vec<Vec<u32>>) -> Self {
        let domains = domains
            .into_iter()
            .map(|d| d.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        Problem {
            domains,
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, c: Constraint) -> usize {
        self.constraints.push(c);
        self.constraints.len() - 1
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// First solution, `Ok(None)` if none exists, or a budget error after
    /// `budget` assignments.
    pub fn solve(&self, budget: u64) -> Result<Option<Vec<u32>>> {
        let active = vec![true; self.constraints.len()];
        self.solve_subset(&active, budget)
    }

    fn solve_subset(&self, active: &[bool], budget: u64) -> Result<Option<Vec<u32>>> {
        let mut watch = vec![Vec::new(); self.domains.len()];
        for (k, c) in self.constraints.iter().enumerate() {
            if active[k] {
                for v in c.vars() {
                    watch[v].push(k);
                }
            }
        }
        let mut search = Search {
            problem: self,
            watch,
            asg: vec![None; self.domains.len()],
            nodes: 0,
            budget,
        };
        if search.run()? {
            Ok(Some(search.asg.into_iter().map(|x| x.expect("complete")).collect()))
        } else {
            Ok(None)
        }
    }

    /// Deletion filter: indices of a subset of constraints that is still
    /// unsatisfiable and becomes satisfiable when any member is dropped.
    /// Returns `Ok(None)` if the full problem is satisfiable.
    pub fn minimal_conflict(&self, budget: u64) -> Result<Option<Vec<usize>>> {
        let mut active = vec![true; self.constraints.len()];
        if self.solve_subset(&active, budget)?.is_some() {
            return Ok(None);
        }
        for k in 0..active.len() {
            active[k] = false;
            if self.solve_subset(&active, budget)?.is_some() {
                active[k] = true;
            }
        }
        Ok(Some((0..active.len()).filter(|&k| active[k]).collect()))
    }
}

struct Search<'a> {
    problem: &'a Problem,
    watch: Vec<Vec<usize>>,
    asg: Vec<Option<u32>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn live_values(&mut self, var: usize) -> Vec<u32> {
        let mut out = Vec::new();
        for &x in &self.problem.domains[var] {
            self.asg[var] = Some(x);
            if self.watch[var]
                .iter()
                .all(|&k| self.problem.constraints[k].consistent(&self.asg))
            {
                out.push(x);
            }
        }
        self.asg[var] = None;
        out
    }

    fn run(&mut self) -> Result<bool> {
        let mut pick: Option<(usize, Vec<u32>)> = None;
        for var in 0..self.asg.len() {
            if self.asg[var].is_some() {
                continue;
            }
            let live = self.live_values(var);
            if live.is_empty() {
                return Ok(false);
            }
            if pick.as_ref().is_none_or(|(_, best)| live.len() < best.len()) {
                pick = Some((var, live));
            }
        }
        let Some((var, values)) = pick else {
            return Ok(true);
        };
        for x in values {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                });
            }
            self.asg[var] = Some(x);
            if self.run()? {
                return Ok(true);
            }
        }
        self.asg[var] = None;
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_different_pigeonhole() {
        let mut p = Problem::new(vec![vec![1, 2], vec![1, 2], vec![1, 2]]);
        p.add(Constraint::AllDifferent(vec![0, 1, 2]));
        assert_eq!(p.solve(1000).unwrap(), None);
        assert_eq!(p.minimal_conflict(1000).unwrap(), Some(vec![0]));
    }

    #[test]
    fn first_solution_is_ascending() {
        let mut p = Problem::new(vec![vec![3, 1, 2], vec![1, 2, 3]]);
        p.add(Constraint::NotEqual(0, 1));
        assert_eq!(p.solve(1000).unwrap(), Some(vec![1, 2]));
    }

    #[test]
    fn image_subset() {
        // sub var can only be 4; sup vars must then include 4.
        let mut p = Problem::new(vec![vec![4], vec![1, 4], vec![1, 4]]);
        p.add(Constraint::AllDifferent(vec![1, 2]));
        p.add(Constraint::ImageSubset {
            sub: vec![0],
            sup: vec![1, 2],
        });
        let s = p.solve(1000).unwrap().unwrap();
        assert_eq!(s[0], 4);
        assert!(s[1] == 4 || s[2] == 4);
    }

    #[test]
    fn equal_conflict_certificate() {
        let mut p = Problem::new(vec![vec![1], vec![2], vec![1, 2]]);
        let a = p.add(Constraint::Equal(0, 2));
        let b = p.add(Constraint::Equal(1, 2));
        p.add(Constraint::NotEqual(0, 1));
        assert_eq!(p.minimal_conflict(1000).unwrap(), Some(vec![a, b]));
    }

    #[test]
    fn budget_is_reported() {
        let n = 9;
        let mut p = Problem::new(vec![(0..(n as u32 - 1)).collect(); n]);
        p.add(Constraint::AllDifferent((0..n).collect()));
        assert!(matches!(p.solve(50), Err(Error::BudgetExceeded { budget: 50 })));
    }
}
