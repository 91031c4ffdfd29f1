//! Finite first-order models, assignments and teams.
//!
//! Domain elements are the integers `0..domain_size`. An assignment is a total
//! map from the model's team variables to elements and is stored as its index
//! in the mixed-radix enumeration of `dom^tvar` (first variable most
//! significant), so index order is the lexicographic order on value tuples.
//! A team is a bitset over those indices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A domain element.
pub type Element = usize;

/// Largest supported `|dom|^|tvar|`; teams are 128-bit sets.
pub const MAX_ASSIGNMENTS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain must be nonempty")]
    EmptyDomain,
    #[error("model declares no team variables")]
    NoTeamVariables,
    #[error("{0}^{1} assignments exceed the supported maximum of {MAX_ASSIGNMENTS}")]
    TooManyAssignments(usize, usize),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("element {element} out of range for domain of size {domain}")]
    OutOfRange { element: Element, domain: usize },
    #[error("tuple {tuple:?} has length {len}, expected arity {arity} for `{name}`")]
    ArityMismatch {
        name: String,
        tuple: Vec<Element>,
        len: usize,
        arity: usize,
    },
    #[error("function {name} not total: missing input {missing:?}")]
    NotTotal { name: String, missing: Vec<Element> },
    #[error("function {name} defined twice on input {input:?}")]
    Redefined { name: String, input: Vec<Element> },
}

/// An interpreted relation symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Element>>,
}

/// An interpreted function symbol, tabulated over `dom^arity` in mixed-radix order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Function {
    pub arity: usize,
    table: Vec<Element>,
}

impl Function {
    pub fn apply(&self, args: &[Element], domain_size: usize) -> Element {
        let idx = args.iter().fold(0, |acc, &a| acc * domain_size + a);
        self.table[idx]
    }

    /// The table as `(arguments, value)` rows in lexicographic order of arguments.
    pub fn rows(&self, domain_size: usize) -> Vec<(Vec<Element>, Element)> {
        self.table
            .iter()
            .enumerate()
            .map(|(idx, &v)| (decode(idx, domain_size, self.arity), v))
            .collect()
    }
}

/// A finite first-order structure together with its declared team variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    domain_size: usize,
    team_vars: Vec<String>,
    relations: BTreeMap<String, Relation>,
    functions: BTreeMap<String, Function>,
    constants: BTreeMap<String, Element>,
    strides: Vec<usize>,
    assignment_count: usize,
}

/// Words with a fixed meaning in the formula grammar.
pub const RESERVED_WORDS: &[&str] = &[
    "eps", "top", "bot", "E", "A", "delta", "dep", "inc", "exc", "indep", "sub",
];

pub(crate) fn valid_name(name: &str) -> bool {
    if RESERVED_WORDS.contains(&name) {
        return false;
    }
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Model {
    pub fn new<S: AsRef<str>>(domain_size: usize, team_vars: &[S]) -> Result<Self, ModelError> {
        if domain_size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        if team_vars.is_empty() {
            return Err(ModelError::NoTeamVariables);
        }
        let k = team_vars.len();
        let count = domain_size
            .checked_pow(k as u32)
            .filter(|&c| c <= MAX_ASSIGNMENTS)
            .ok_or(ModelError::TooManyAssignments(domain_size, k))?;
        let mut seen = BTreeSet::new();
        let mut vars = Vec::with_capacity(k);
        for v in team_vars {
            let v = v.as_ref();
            if !valid_name(v) {
                return Err(ModelError::InvalidName(v.to_string()));
            }
            if !seen.insert(v) {
                return Err(ModelError::DuplicateSymbol(v.to_string()));
            }
            vars.push(v.to_string());
        }
        let strides = (0..k).map(|i| domain_size.pow((k - 1 - i) as u32)).collect();
        Ok(Model {
            domain_size,
            team_vars: vars,
            relations: BTreeMap::new(),
            functions: BTreeMap::new(),
            constants: BTreeMap::new(),
            strides,
            assignment_count: count,
        })
    }

    fn check_fresh(&self, name: &str) -> Result<(), ModelError> {
        if !valid_name(name) {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        if self.team_vars.iter().any(|v| v == name)
            || self.relations.contains_key(name)
            || self.functions.contains_key(name)
            || self.constants.contains_key(name)
        {
            return Err(ModelError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    fn check_tuple(&self, name: &str, tuple: &[Element], arity: usize) -> Result<(), ModelError> {
        if tuple.len() != arity {
            return Err(ModelError::ArityMismatch {
                name: name.to_string(),
                tuple: tuple.to_vec(),
                len: tuple.len(),
                arity,
            });
        }
        self.check_elements(tuple)
    }

    fn check_elements(&self, elems: &[Element]) -> Result<(), ModelError> {
        match elems.iter().find(|&&e| e >= self.domain_size) {
            Some(&element) => Err(ModelError::OutOfRange {
                element,
                domain: self.domain_size,
            }),
            None => Ok(()),
        }
    }

    pub fn add_relation<I>(&mut self, name: &str, arity: usize, tuples: I) -> Result<(), ModelError>
    where
        I: IntoIterator<Item = Vec<Element>>,
    {
        self.check_fresh(name)?;
        let mut set = BTreeSet::new();
        for t in tuples {
            self.check_tuple(name, &t, arity)?;
            set.insert(t);
        }
        self.relations
            .insert(name.to_string(), Relation { arity, tuples: set });
        Ok(())
    }

    /// Adds a function from `(arguments, value)` rows; the rows must cover `dom^arity` exactly once.
    pub fn add_function<I>(&mut self, name: &str, arity: usize, rows: I) -> Result<(), ModelError>
    where
        I: IntoIterator<Item = (Vec<Element>, Element)>,
    {
        self.check_fresh(name)?;
        let n = self.domain_size;
        let size = n.pow(arity as u32);
        let mut table: Vec<Option<Element>> = vec![None; size];
        for (args, value) in rows {
            self.check_tuple(name, &args, arity)?;
            self.check_elements(&[value])?;
            let idx = args.iter().fold(0, |acc, &a| acc * n + a);
            if table[idx].replace(value).is_some() {
                return Err(ModelError::Redefined {
                    name: name.to_string(),
                    input: args,
                });
            }
        }
        let mut full = Vec::with_capacity(size);
        for (idx, v) in table.into_iter().enumerate() {
            match v {
                Some(v) => full.push(v),
                None => {
                    return Err(ModelError::NotTotal {
                        name: name.to_string(),
                        missing: decode(idx, n, arity),
                    })
                }
            }
        }
        self.functions
            .insert(name.to_string(), Function { arity, table: full });
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str, value: Element) -> Result<(), ModelError> {
        self.check_fresh(name)?;
        self.check_elements(&[value])?;
        self.constants.insert(name.to_string(), value);
        Ok(())
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn domain(&self) -> std::ops::Range<Element> {
        0..self.domain_size
    }

    pub fn team_vars(&self) -> &[String] {
        &self.team_vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.team_vars.iter().position(|v| v == name)
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn function(&self, name: &str) -> Option<&Function> {
        self.functions.get(name)
    }

    pub fn functions(&self) -> &BTreeMap<String, Function> {
        &self.functions
    }

    pub fn constant(&self, name: &str) -> Option<Element> {
        self.constants.get(name).copied()
    }

    pub fn constants(&self) -> &BTreeMap<String, Element> {
        &self.constants
    }

    /// `|Ass_M| = |dom|^|tvar|`.
    pub fn assignment_count(&self) -> usize {
        self.assignment_count
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> {
        (0..self.assignment_count).map(|i| Assignment(i as u8))
    }

    /// The team of all assignments.
    pub fn full_team(&self) -> Team {
        Team::from_bits(low_bits(self.assignment_count))
    }

    pub fn assignment(&self, values: &[Element]) -> Result<Assignment, ModelError> {
        if values.len() != self.team_vars.len() {
            return Err(ModelError::ArityMismatch {
                name: "assignment".to_string(),
                tuple: values.to_vec(),
                len: values.len(),
                arity: self.team_vars.len(),
            });
        }
        self.check_elements(values)?;
        let idx = values
            .iter()
            .zip(&self.strides)
            .map(|(v, s)| v * s)
            .sum::<usize>();
        Ok(Assignment(idx as u8))
    }

    /// Value of the team variable with position `var` under `s`.
    #[inline]
    pub fn value(&self, s: Assignment, var: usize) -> Element {
        (s.index() / self.strides[var]) % self.domain_size
    }

    pub fn values(&self, s: Assignment) -> Vec<Element> {
        (0..self.team_vars.len()).map(|v| self.value(s, v)).collect()
    }

    /// `s[m/v]`.
    #[inline]
    pub fn extend(&self, s: Assignment, var: usize, m: Element) -> Assignment {
        let old = self.value(s, var);
        let idx = s.index() - old * self.strides[var] + m * self.strides[var];
        Assignment(idx as u8)
    }

    /// `s[M/v]` as a team.
    pub fn extend_all(&self, s: Assignment, var: usize) -> Team {
        let base = self.extend(s, var, 0).index();
        let stride = self.strides[var];
        let mut team = Team::EMPTY;
        for m in 0..self.domain_size {
            team.insert(Assignment((base + m * stride) as u8));
        }
        team
    }

    /// `s ≡_W s'`: agreement on every team variable outside `hidden`.
    pub fn equiv_mod(&self, s: Assignment, t: Assignment, hidden: &VarSet) -> bool {
        (0..self.team_vars.len())
            .filter(|v| !hidden.contains(*v))
            .all(|v| self.value(s, v) == self.value(t, v))
    }

    /// Key identifying the `≡_W` class of `s`: its values with hidden positions zeroed.
    pub(crate) fn class_key(&self, s: Assignment, hidden: &VarSet) -> usize {
        let mut idx = s.index();
        for v in hidden.iter() {
            idx -= self.value(s, v) * self.strides[v];
        }
        idx
    }

    pub fn display_assignment(&self, s: Assignment) -> String {
        self.team_vars
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}={}", v, self.value(s, i)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn display_team(&self, team: Team) -> String {
        let body = team
            .iter()
            .map(|s| self.display_assignment(s))
            .collect::<Vec<_>>()
            .join("; ");
        format!("{{{}}}", body)
    }
}

fn decode(mut idx: usize, n: usize, arity: usize) -> Vec<Element> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

fn low_bits(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// An assignment over a model's team variables.
///
/// Only meaningful together with the model it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(u8);

impl Assignment {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(idx: usize) -> Self {
        assert!(idx < MAX_ASSIGNMENTS, "assignment index out of range");
        Assignment(idx as u8)
    }
}

/// A set of team-variable positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VarSet(u64);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn singleton(v: usize) -> Self {
        VarSet(1 << v)
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&v| self.contains(v))
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VarSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

/// A team: a finite set of assignments.
///
/// Teams are ordered lexicographically by their ascending member lists, so
/// `{} < {s0} < {s0, s1} < {s1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Team(u128);

impl Team {
    pub const EMPTY: Team = Team(0);

    pub fn from_bits(bits: u128) -> Self {
        Team(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(s: Assignment) -> Self {
        Team(1 << s.0)
    }

    pub fn contains(self, s: Assignment) -> bool {
        self.0 >> s.0 & 1 == 1
    }

    pub fn insert(&mut self, s: Assignment) {
        self.0 |= 1 << s.0;
    }

    pub fn remove(&mut self, s: Assignment) {
        self.0 &= !(1 << s.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Team) -> Team {
        Team(self.0 | other.0)
    }

    pub fn intersection(self, other: Team) -> Team {
        Team(self.0 & other.0)
    }

    pub fn difference(self, other: Team) -> Team {
        Team(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Team) -> bool {
        self.0 & !other.0 == 0
    }

    /// Position of `s` among the members, counting from zero.
    #[inline]
    pub(crate) fn rank(self, s: Assignment) -> usize {
        (self.0 & ((1u128 << s.0) - 1)).count_ones() as usize
    }

    pub fn iter(self) -> TeamIter {
        TeamIter(self.0)
    }

    /// Every `Y ⊆ self`, starting from `self` and ending with the empty team.
    pub fn subteams(self) -> Subteams {
        Subteams {
            mask: self.0,
            next: Some(self.0),
        }
    }
}

impl Ord for Team {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Team {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|s| s.0)).finish()
    }
}

impl FromIterator<Assignment> for Team {
    fn from_iter<I: IntoIterator<Item = Assignment>>(iter: I) -> Self {
        let mut t = Team::EMPTY;
        for s in iter {
            t.insert(s);
        }
        t
    }
}

impl IntoIterator for Team {
    type Item = Assignment;
    type IntoIter = TeamIter;
    fn into_iter(self) -> TeamIter {
        self.iter()
    }
}

pub struct TeamIter(u128);

impl Iterator for TeamIter {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.0 == 0 {
            return None;
        }
        let low = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Assignment(low as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for TeamIter {}

pub struct Subteams {
    mask: u128,
    next: Option<u128>,
}

impl Iterator for Subteams {
    type Item = Team;

    fn next(&mut self) -> Option<Team> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & self.mask)
        };
        Some(Team(cur))
    }
}

/// Bindings for parameter variables. Later bindings shadow earlier ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamEnv {
    bindings: Vec<(String, Element)>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<Element> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|&(_, m)| m)
    }

    pub fn bind(&self, name: &str, m: Element) -> ParamEnv {
        let mut bindings = self.bindings.clone();
        bindings.push((name.to_string(), m));
        ParamEnv { bindings }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}
