//! Variables, assignments, words and input/output partitions.

use rustc_hash::FxHashMap;

use super::formula::Formula;
use crate::{Error, Result, VarId};

/// An ordered set of named atomic propositions. Index order is the default
/// decision-diagram variable order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    names: Vec<String>,
    index: FxHashMap<String, VarId>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut v = Self::new();
        for name in names {
            let name = name.as_ref();
            if v.get(name).is_some() {
                return Err(Error::Partition(format!("variable `{name}` listed twice")));
            }
            v.intern(name);
        }
        Ok(v)
    }

    /// Returns the id of `name`, declaring it if needed.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = VarId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<VarId> {
        self.get(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_owned()))
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.names.len() as u32).map(VarId)
    }
}

/// A total valuation of a vocabulary, indexed by [`VarId`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn all(value: bool, len: usize) -> Self {
        Assignment(vec![value; len])
    }

    /// Bit `k` of `bits` gives the value of variable `k`.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        Assignment((0..len).map(|k| bits >> k & 1 == 1).collect())
    }

    pub fn to_bits(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &b)| acc | (b as u64) << k)
    }

    pub fn get(&self, var: VarId) -> bool {
        self.0[var.index()]
    }

    pub fn set(&mut self, var: VarId, value: bool) {
        self.0[var.index()] = value;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// Every assignment over `len` variables, in increasing bit order.
    pub fn enumerate(len: usize) -> impl Iterator<Item = Assignment> {
        assert!(len < 64, "too many variables to enumerate");
        (0..1u64 << len).map(move |bits| Assignment::from_bits(bits, len))
    }
}

/// A finite word over assignments.
pub type Word = Vec<Assignment>;

pub(crate) fn check_word(word: &[Assignment], vocab_len: usize) -> Result<()> {
    for a in word {
        if a.len() != vocab_len {
            return Err(Error::AssignmentMismatch {
                got: a.len(),
                expected: vocab_len,
            });
        }
    }
    Ok(())
}

/// Realization semantics: whether outputs may react to the current input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Mealy,
    Moore,
}

/// Split of the variables between the environment and the controller.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl Partition {
    pub fn new<S: Into<String>>(
        inputs: impl IntoIterator<Item = S>,
        outputs: impl IntoIterator<Item = S>,
    ) -> Self {
        Partition {
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
        }
    }

    /// Checks disjointness, absence of duplicates and that every atom of `f`
    /// is declared.
    pub fn validate(&self, f: Formula) -> Result<()> {
        let mut seen = rustc_hash::FxHashSet::default();
        for name in self.inputs.iter().chain(&self.outputs) {
            if !seen.insert(name.as_str()) {
                return Err(Error::Partition(format!(
                    "variable `{name}` declared more than once"
                )));
            }
        }
        for atom in f.atoms() {
            if !seen.contains(atom) {
                return Err(Error::Partition(format!(
                    "variable `{atom}` is neither an input nor an output"
                )));
            }
        }
        Ok(())
    }

    pub fn is_input(&self, name: &str) -> bool {
        self.inputs.iter().any(|n| n == name)
    }

    pub fn is_output(&self, name: &str) -> bool {
        self.outputs.iter().any(|n| n == name)
    }

    /// Vocabulary listing the variables in decision order: inputs first for
    /// Mealy semantics, outputs first for Moore.
    pub fn vocabulary(&self, sem: Semantics) -> Result<Vocabulary> {
        match sem {
            Semantics::Mealy => Vocabulary::from_names(self.inputs.iter().chain(&self.outputs)),
            Semantics::Moore => Vocabulary::from_names(self.outputs.iter().chain(&self.inputs)),
        }
    }

    /// Restriction to the variables occurring in `f`.
    pub fn restrict_to(&self, f: Formula) -> Partition {
        let atoms = f.atoms();
        let keep = |n: &&String| atoms.binary_search(&n.as_str()).is_ok();
        Partition {
            inputs: self.inputs.iter().filter(keep).cloned().collect(),
            outputs: self.outputs.iter().filter(keep).cloned().collect(),
        }
    }

    /// Splits the atoms of `f` by name prefix: `i…` inputs, `o…` outputs.
    pub fn infer_from_prefix(f: Formula) -> Result<Partition> {
        let mut p = Partition::default();
        for atom in f.atoms() {
            if atom.starts_with('i') {
                p.inputs.push(atom.to_owned());
            } else if atom.starts_with('o') {
                p.outputs.push(atom.to_owned());
            } else {
                return Err(Error::Partition(format!(
                    "cannot infer the role of `{atom}` from its name"
                )));
            }
        }
        Ok(p)
    }
}
