//! Raw per-class measures: size, function count and LCOM4 cohesion.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::frontend::ExtractionConfig;
use crate::model::{ClassNode, FunctionNode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub qualified_name: String,
    pub ncloc: u32,
    pub f: u32,
    /// Connected components of the function usage graph; at least 1.
    pub lcom4: u32,
}

fn counted<'a>(
    class: &'a ClassNode,
    config: &ExtractionConfig,
) -> impl Iterator<Item = &'a FunctionNode> {
    let constructors = config.count_constructors_as_functions;
    class
        .functions
        .iter()
        .filter(move |f| constructors || !f.is_constructor)
}

pub fn count_functions(class: &ClassNode, config: &ExtractionConfig) -> u32 {
    counted(class, config).count() as u32
}

/// LCOM4 over every function of the class.
///
/// Two functions are joined when they touch a common field of the class or
/// one calls the other; the result is the number of connected components,
/// with 1 for a class without functions.
pub fn compute_lcom4(class: &ClassNode) -> u32 {
    lcom4_of(&class.functions)
}

fn lcom4_of<'a, I>(functions: I) -> u32
where
    I: IntoIterator<Item = &'a FunctionNode>,
{
    let functions: Vec<&FunctionNode> = functions.into_iter().collect();
    if functions.is_empty() {
        return 1;
    }
    connect(&functions).count() as u32
}

/// The function keys of each LCOM4 component, in declaration order.
pub fn lcom4_components(class: &ClassNode, config: &ExtractionConfig) -> Vec<Vec<String>> {
    let functions: Vec<&FunctionNode> = counted(class, config).collect();
    let mut sets = connect(&functions);
    let mut groups: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, f) in functions.iter().enumerate() {
        let root = sets.find(i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, keys)) => keys.push(f.key.clone()),
            None => groups.push((root, vec![f.key.clone()])),
        }
    }
    groups.into_iter().map(|(_, keys)| keys).collect()
}

fn connect(functions: &[&FunctionNode]) -> DisjointSets {
    let index: HashMap<&str, usize> = functions
        .iter()
        .enumerate()
        .map(|(i, f)| (f.key.as_str(), i))
        .collect();
    let mut sets = DisjointSets::new(functions.len());
    let mut first_user: HashMap<&str, usize> = HashMap::new();
    for (i, function) in functions.iter().enumerate() {
        for field in &function.accessed_fields {
            match first_user.get(field.as_str()) {
                Some(&j) => sets.union(i, j),
                None => {
                    first_user.insert(field, i);
                }
            }
        }
        for callee in &function.called_functions {
            if let Some(&j) = index.get(callee.as_str()) {
                sets.union(i, j);
            }
        }
    }
    sets
}

pub fn class_metrics(class: &ClassNode, config: &ExtractionConfig) -> ClassMetrics {
    ClassMetrics {
        qualified_name: class.qualified_name.clone(),
        ncloc: class.ncloc,
        f: count_functions(class, config),
        lcom4: lcom4_of(counted(class, config)),
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
            self.components -= 1;
        }
    }

    fn count(&self) -> usize {
        self.components
    }
}
