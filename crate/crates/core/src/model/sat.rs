//! Propositional satisfiability: Tseitin encoding of ground formulas and a DPLL search with
//! unit propagation and a fixed branching order.

use std::collections::BTreeMap;

use super::ground::{Ground, GroundAtom};

/// Literals are non-zero integers; variable `v` is `v` positive and `-v` negated.
pub(crate) type Lit = i32;

#[derive(Debug, Clone, Default)]
pub(crate) struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn fresh(&mut self) -> Lit {
        self.num_vars += 1;
        self.num_vars as Lit
    }

    pub fn add(&mut self, clause: Vec<Lit>) {
        self.clauses.push(clause);
    }
}

/// Encodes ground formulas over a fixed atom numbering. Atoms are numbered first, so that
/// branching on variables `1..=atoms` in order decides every Tseitin variable by propagation.
pub(crate) struct Encoder {
    pub cnf: Cnf,
    pub atoms: BTreeMap<GroundAtom, Lit>,
    truth: Option<Lit>,
}

impl Encoder {
    /// `atoms` must already be in branching order.
    pub fn new(atoms: Vec<GroundAtom>) -> Self {
        let mut cnf = Cnf::default();
        let mut map = BTreeMap::new();
        for a in atoms {
            let v = cnf.fresh();
            map.insert(a, v);
        }
        Encoder { cnf, atoms: map, truth: None }
    }

    fn truth(&mut self) -> Lit {
        if let Some(t) = self.truth {
            return t;
        }
        let t = self.cnf.fresh();
        self.cnf.add(vec![t]);
        self.truth = Some(t);
        t
    }

    /// A literal equivalent to `g`.
    fn lit(&mut self, g: &Ground) -> Lit {
        match g {
            Ground::True => self.truth(),
            Ground::False => -self.truth(),
            Ground::Atom(a) => *self.atoms.get(a).expect("atom numbered before encoding"),
            Ground::Not(a) => -self.lit(a),
            Ground::And(items) => {
                let ls: Vec<Lit> = items.iter().map(|i| self.lit(i)).collect();
                let v = self.cnf.fresh();
                for &l in &ls {
                    self.cnf.add(vec![-v, l]);
                }
                let mut back: Vec<Lit> = ls.iter().map(|l| -l).collect();
                back.push(v);
                self.cnf.add(back);
                v
            }
            Ground::Or(items) => {
                let ls: Vec<Lit> = items.iter().map(|i| self.lit(i)).collect();
                let v = self.cnf.fresh();
                for &l in &ls {
                    self.cnf.add(vec![v, -l]);
                }
                let mut fwd = ls;
                fwd.push(-v);
                self.cnf.add(fwd);
                v
            }
            Ground::Implies(a, b) => {
                let (a, b) = (self.lit(a), self.lit(b));
                let v = self.cnf.fresh();
                self.cnf.add(vec![-v, -a, b]);
                self.cnf.add(vec![v, a]);
                self.cnf.add(vec![v, -b]);
                v
            }
            Ground::Iff(a, b) => {
                let (a, b) = (self.lit(a), self.lit(b));
                let v = self.cnf.fresh();
                self.cnf.add(vec![-v, -a, b]);
                self.cnf.add(vec![-v, a, -b]);
                self.cnf.add(vec![v, a, b]);
                self.cnf.add(vec![v, -a, -b]);
                v
            }
        }
    }

    /// Adds `g` as a hard constraint.
    pub fn assert(&mut self, g: &Ground) {
        match g {
            Ground::True => {}
            Ground::False => self.cnf.add(vec![]),
            Ground::And(items) => items.iter().for_each(|i| self.assert(i)),
            Ground::Or(items) => {
                let clause = items.iter().map(|i| self.lit(i)).collect();
                self.cnf.add(clause);
            }
            other => {
                let l = self.lit(other);
                self.cnf.add(vec![l]);
            }
        }
    }

    /// Exactly one of `lits` is true.
    pub fn exactly_one(&mut self, lits: &[Lit]) {
        self.cnf.add(lits.to_vec());
        for (i, &a) in lits.iter().enumerate() {
            for &b in &lits[i + 1..] {
                self.cnf.add(vec![-a, -b]);
            }
        }
    }
}

struct Dpll<'a> {
    clauses: &'a [Vec<Lit>],
    /// 0 unassigned, 1 true, -1 false; index by variable.
    value: Vec<i8>,
    trail: Vec<usize>,
}

impl Dpll<'_> {
    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.unsigned_abs() as usize];
        if l > 0 {
            v
        } else {
            -v
        }
    }

    fn set(&mut self, l: Lit) {
        let var = l.unsigned_abs() as usize;
        self.value[var] = if l > 0 { 1 } else { -1 };
        self.trail.push(var);
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            self.value[var] = 0;
        }
    }

    /// Unit propagation to a fixed point; false on a falsified clause.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for c in self.clauses {
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for &l in c {
                    match self.lit_value(l) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {
                            open_count += 1;
                            open = Some(l);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match open_count {
                    0 => return false,
                    1 => {
                        self.set(open.unwrap());
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self) -> bool {
        if !self.propagate() {
            return false;
        }
        let Some(var) = (1..self.value.len()).find(|&v| self.value[v] == 0) else {
            return true;
        };
        let mark = self.trail.len();
        for l in [-(var as Lit), var as Lit] {
            self.set(l);
            if self.search() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// A satisfying assignment indexed by variable (index 0 unused), or `None`. Branches on the
/// lowest unassigned variable, false before true.
pub(crate) fn solve(cnf: &Cnf) -> Option<Vec<bool>> {
    if cnf.clauses.iter().any(Vec::is_empty) {
        return None;
    }
    let mut d = Dpll {
        clauses: &cnf.clauses,
        value: vec![0; cnf.num_vars + 1],
        trail: Vec::new(),
    };
    if d.search() {
        Some(d.value.iter().map(|&v| v == 1).collect())
    } else {
        None
    }
}
