use super::System;

/// Path-equivalence classes (strongly connected components) of a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathComponentReport {
    /// Each class sorted ascending; classes ordered by their smallest vertex.
    pub classes: Vec<Vec<usize>>,
    /// Class index of every vertex.
    pub class_of: Vec<usize>,
    pub core_arrows: Vec<usize>,
    pub bridge_arrows: Vec<usize>,
}

impl PathComponentReport {
    /// Arrows with both ends in class `c`, in arrow order.
    pub fn core_arrows_of(&self, system: &System, c: usize) -> Vec<usize> {
        self.core_arrows
            .iter()
            .copied()
            .filter(|&a| self.class_of[system.arrow(a).src()] == c)
            .collect()
    }
}

pub fn path_components(system: &System) -> PathComponentReport {
    let n = system.vertices().len();
    let mut succ = vec![Vec::new(); n];
    for a in system.arrows() {
        succ[a.src()].push(a.dst());
    }
    let mut tarjan = Tarjan {
        succ: &succ,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        classes: Vec::new(),
    };
    for v in 0..n {
        if tarjan.index[v].is_none() {
            tarjan.visit(v);
        }
    }
    let mut classes = tarjan.classes;
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v] = i;
        }
    }
    let (core_arrows, bridge_arrows) = (0..system.arrows().len())
        .partition(|&a| class_of[system.arrow(a).src()] == class_of[system.arrow(a).dst()]);
    PathComponentReport {
        classes,
        class_of,
        core_arrows,
        bridge_arrows,
    }
}

struct Tarjan<'a> {
    succ: &'a [Vec<usize>],
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    next: usize,
    classes: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.index[v] = Some(self.next);
        self.low[v] = self.next;
        self.next += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.succ[v] {
            match self.index[w] {
                None => {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(self.low[v]) == self.index[v] {
            let mut class = Vec::new();
            loop {
                let w = self.stack.pop().unwrap();
                self.on_stack[w] = false;
                class.push(w);
                if w == v {
                    break;
                }
            }
            self.classes.push(class);
        }
    }
}
