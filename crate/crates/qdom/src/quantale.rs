//! Finite commutative unital quantales as explicit tables.
//!
//! A quantale here is a finite complete lattice together with a commutative,
//! associative, join-preserving multiplication whose unit is the top element
//! (and whose bottom is distinct from the unit). Everything downstream —
//! categories, modules, completions, the duality checks — reduces to exact
//! lookups in the tables built by this module. There is no floating point
//! anywhere.

use std::sync::Arc;

use crate::caps::Caps;
use crate::error::{Error, Result};

/// A validated finite quantale. Elements are dense indices `0..size`.
///
/// Construction goes through [`QuantaleTable::build`], which refuses invalid
/// tables; once built, the derived structure (binary joins and meets, the
/// internal hom, bottom) is available as exact tables.
#[derive(Debug, Clone)]
pub struct QuantaleTable {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    tensor: Vec<Vec<usize>>,
    unit: usize,
    bottom: usize,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    hom: Vec<Vec<usize>>,
}

/// One violated axiom, with a witness when there is a meaningful one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub witness: String,
}

impl Violation {
    fn new(axiom: &str, witness: String) -> Self {
        Violation {
            axiom: axiom.to_string(),
            witness,
        }
    }
}

/// Result of validating a raw table: the empty list means valid.
#[derive(Debug, Clone, Default)]
pub struct QuantaleVerdict {
    pub violations: Vec<Violation>,
}

impl QuantaleVerdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for QuantaleVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let items: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} [{}]", v.axiom, v.witness))
            .collect();
        write!(f, "{}", items.join("; "))
    }
}

/// The standard quantales the engine ships with. `ChPlus(n)` is the chain
/// `{0,1,…,n,∞}` in reverse numeric order with truncated addition (the
/// finite stand-in for the metric quantale), `ChMax(n)` the same carrier
/// with numeric maximum (the ultrametric stand-in).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardQuantale {
    Q2,
    ChPlus(usize),
    ChMax(usize),
}

fn shape_check(
    names: &[String],
    leq: &[Vec<bool>],
    tensor: &[Vec<usize>],
    unit: usize,
) -> Result<()> {
    let n = names.len();
    if n == 0 {
        return Err(Error::Shape("quantale has no elements".to_string()));
    }
    if leq.len() != n {
        return Err(Error::Shape(format!(
            "leq has {} rows, expected {n}",
            leq.len()
        )));
    }
    for (i, row) in leq.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Shape(format!(
                "leq row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
    }
    if tensor.len() != n {
        return Err(Error::Shape(format!(
            "tensor has {} rows, expected {n}",
            tensor.len()
        )));
    }
    for (i, row) in tensor.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Shape(format!(
                "tensor row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &e) in row.iter().enumerate() {
            if e >= n {
                return Err(Error::Shape(format!(
                    "tensor entry ({i},{j}) = {e} out of range 0..{n}"
                )));
            }
        }
    }
    if unit >= n {
        return Err(Error::Shape(format!("unit index {unit} out of range 0..{n}")));
    }
    Ok(())
}

/// Least upper bound of `a` and `b` in a finite poset, if it exists.
fn lub(leq: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = leq.len();
    let uppers: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
    uppers
        .iter()
        .copied()
        .find(|&u| uppers.iter().all(|&v| leq[u][v]))
}

fn glb(leq: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = leq.len();
    let lowers: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
    lowers
        .iter()
        .copied()
        .find(|&l| lowers.iter().all(|&v| leq[v][l]))
}

/// Checks every axiom of the raw tables. Shape problems are errors; axiom
/// failures are collected into the verdict.
pub fn validate_quantale(
    names: &[String],
    leq: &[Vec<bool>],
    tensor: &[Vec<usize>],
    unit: usize,
) -> Result<QuantaleVerdict> {
    shape_check(names, leq, tensor, unit)?;
    let n = names.len();
    let mut v = QuantaleVerdict::default();

    let mut order_ok = true;
    for a in 0..n {
        if !leq[a][a] {
            v.violations
                .push(Violation::new("order.reflexive", format!("a={}", names[a])));
            order_ok = false;
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && leq[a][b] && leq[b][a] {
                v.violations.push(Violation::new(
                    "order.antisymmetric",
                    format!("a={},b={}", names[a], names[b]),
                ));
                order_ok = false;
            }
            for c in 0..n {
                if leq[a][b] && leq[b][c] && !leq[a][c] {
                    v.violations.push(Violation::new(
                        "order.transitive",
                        format!("a={},b={},c={}", names[a], names[b], names[c]),
                    ));
                    order_ok = false;
                }
            }
        }
    }
    if !order_ok {
        return Ok(v);
    }

    // Finite lattice: bottom, top, and all binary bounds; arbitrary joins
    // and meets then exist by finiteness.
    let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b][x]));
    let top = (0..n).find(|&t| (0..n).all(|x| leq[x][t]));
    if bottom.is_none() {
        v.violations
            .push(Violation::new("lattice.bottom", "no least element".to_string()));
    }
    if top.is_none() {
        v.violations
            .push(Violation::new("lattice.top", "no greatest element".to_string()));
    }
    let mut lattice_ok = bottom.is_some() && top.is_some();
    for a in 0..n {
        for b in 0..n {
            if lub(leq, a, b).is_none() {
                v.violations.push(Violation::new(
                    "lattice.join",
                    format!("a={},b={}", names[a], names[b]),
                ));
                lattice_ok = false;
            }
            if glb(leq, a, b).is_none() {
                v.violations.push(Violation::new(
                    "lattice.meet",
                    format!("a={},b={}", names[a], names[b]),
                ));
                lattice_ok = false;
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            if tensor[a][b] != tensor[b][a] {
                v.violations.push(Violation::new(
                    "tensor.commutative",
                    format!("a={},b={}", names[a], names[b]),
                ));
            }
            for c in 0..n {
                if tensor[tensor[a][b]][c] != tensor[a][tensor[b][c]] {
                    v.violations.push(Violation::new(
                        "tensor.associative",
                        format!("a={},b={},c={}", names[a], names[b], names[c]),
                    ));
                }
            }
        }
        if tensor[a][unit] != a {
            v.violations
                .push(Violation::new("tensor.unit", format!("a={}", names[a])));
        }
        if !leq[a][unit] {
            v.violations
                .push(Violation::new("unit.greatest", format!("a={}", names[a])));
        }
    }

    if lattice_ok {
        let bot = bottom.unwrap();
        for a in 0..n {
            if tensor[a][bot] != bot {
                v.violations.push(Violation::new(
                    "tensor.preserves_bottom",
                    format!("a={}", names[a]),
                ));
            }
            for b in 0..n {
                for c in 0..n {
                    let j = lub(leq, b, c).unwrap();
                    let lhs = tensor[a][j];
                    let rhs = lub(leq, tensor[a][b], tensor[a][c]).unwrap();
                    if lhs != rhs {
                        v.violations.push(Violation::new(
                            "tensor.preserves_joins",
                            format!("a={},b={},c={}", names[a], names[b], names[c]),
                        ));
                    }
                }
            }
        }
        if bot == unit {
            v.violations.push(Violation::new(
                "bottom_ne_unit",
                "quantale is degenerate".to_string(),
            ));
        }
    }

    Ok(v)
}

impl QuantaleTable {
    /// Builds a quantale from raw tables, validating every axiom.
    pub fn build(
        names: Vec<String>,
        leq: Vec<Vec<bool>>,
        tensor: Vec<Vec<usize>>,
        unit: usize,
    ) -> Result<Arc<QuantaleTable>> {
        let verdict = validate_quantale(&names, &leq, &tensor, unit)?;
        if !verdict.is_valid() {
            return Err(Error::InvalidQuantale(verdict.to_string()));
        }
        let n = names.len();
        let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b][x])).unwrap();
        let mut join = vec![vec![0usize; n]; n];
        let mut meet = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = lub(&leq, a, b).unwrap();
                meet[a][b] = glb(&leq, a, b).unwrap();
            }
        }
        // hom(a,b) = ⋁{c : a⊗c ≤ b}; the adjunction a⊗c ≤ b ⇔ c ≤ hom(a,b)
        // follows because ⊗ preserves joins.
        let mut hom = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = bottom;
                for c in 0..n {
                    if leq[tensor[a][c]][b] {
                        acc = join[acc][c];
                    }
                }
                hom[a][b] = acc;
            }
        }
        Ok(Arc::new(QuantaleTable {
            names,
            leq,
            tensor,
            unit,
            bottom,
            join,
            meet,
            hom,
        }))
    }

    /// The standard quantale of the given kind.
    pub fn standard(kind: StandardQuantale) -> Result<Arc<QuantaleTable>> {
        match kind {
            StandardQuantale::Q2 => QuantaleTable::q2(),
            StandardQuantale::ChPlus(n) => QuantaleTable::ch_plus(n),
            StandardQuantale::ChMax(n) => QuantaleTable::ch_max(n),
        }
    }

    /// The two-element quantale `{⊥,𝟏}` with `⊗ = ∧`.
    pub fn q2() -> Result<Arc<QuantaleTable>> {
        QuantaleTable::build(
            vec!["bot".to_string(), "one".to_string()],
            vec![vec![true, true], vec![false, true]],
            vec![vec![0, 0], vec![0, 1]],
            1,
        )
    }

    /// `{0,1,…,n,∞}` in reverse numeric order with truncated addition.
    /// Index `i ≤ n` stands for the number `i`; index `n+1` is `∞`.
    pub fn ch_plus(n: usize) -> Result<Arc<QuantaleTable>> {
        Self::chain(n, |a, b| a + b)
    }

    /// `{0,1,…,n,∞}` in reverse numeric order with numeric maximum.
    pub fn ch_max(n: usize) -> Result<Arc<QuantaleTable>> {
        Self::chain(n, |a, b| a.max(b))
    }

    fn chain(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Arc<QuantaleTable>> {
        let size = n + 2;
        let inf = n + 1;
        let mut names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        names.push("inf".to_string());
        // a ≤ b in the quantale iff a ≥ b numerically; ∞ is the bottom.
        let value = |i: usize| -> Option<usize> { (i != inf).then_some(i) };
        let mut leq = vec![vec![false; size]; size];
        for a in 0..size {
            for b in 0..size {
                leq[a][b] = match (value(a), value(b)) {
                    (None, _) => true,
                    (_, None) => value(a).is_none(),
                    (Some(x), Some(y)) => x >= y,
                };
            }
        }
        let mut tensor = vec![vec![0usize; size]; size];
        for a in 0..size {
            for b in 0..size {
                tensor[a][b] = match (value(a), value(b)) {
                    (Some(x), Some(y)) => {
                        let t = op(x, y);
                        if t <= n {
                            t
                        } else {
                            inf
                        }
                    }
                    _ => inf,
                };
            }
        }
        QuantaleTable::build(names, leq, tensor, 0)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn tensor(&self, a: usize, b: usize) -> usize {
        self.tensor[a][b]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn join2(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet2(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    /// Join of an arbitrary (possibly empty) family; empty join is `⊥`.
    pub fn join(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join[acc][x])
    }

    /// Meet of an arbitrary (possibly empty) family; empty meet is `𝟏` (the top).
    pub fn meet(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.unit, |acc, x| self.meet[acc][x])
    }

    /// Internal hom: `hom(a,b) = ⋁{c : a⊗c ≤ b}`.
    pub fn hom(&self, a: usize, b: usize) -> usize {
        self.hom[a][b]
    }

    /// Structural equality; display names are ignored.
    pub fn same_structure(&self, other: &QuantaleTable) -> bool {
        self.leq == other.leq && self.tensor == other.tensor && self.unit == other.unit
    }

    /// Totally-below relation `a ≺ b`: for every subset `S` with `b ≤ ⋁S`
    /// there is `s ∈ S` with `a ≤ s`. Checked over down-closed subsets,
    /// which suffices by monotonicity.
    pub fn totally_below(&self, caps: &Caps) -> Result<Vec<Vec<bool>>> {
        let n = self.size();
        if n > 24 || (1usize << n) > caps.max_downsets.saturating_mul(64) {
            return Err(Error::Resource {
                what: "down-set enumeration space".to_string(),
                attempted: n,
                cap: caps.max_downsets,
            });
        }
        let mut downsets: Vec<(u32, usize)> = Vec::new();
        'mask: for mask in 0u32..(1u32 << n) {
            for a in 0..n {
                if mask & (1 << a) != 0 {
                    for b in 0..n {
                        if self.leq[b][a] && mask & (1 << b) == 0 {
                            continue 'mask;
                        }
                    }
                }
            }
            let join = self.join((0..n).filter(|&a| mask & (1 << a) != 0));
            downsets.push((mask, join));
            if downsets.len() > caps.max_downsets {
                return Err(Error::Resource {
                    what: "down-sets".to_string(),
                    attempted: downsets.len(),
                    cap: caps.max_downsets,
                });
            }
        }
        let mut tb = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                tb[a][b] = downsets.iter().all(|&(mask, join)| {
                    !self.leq[b][join]
                        || (0..n).any(|s| mask & (1 << s) != 0 && self.leq[a][s])
                });
            }
        }
        Ok(tb)
    }
}
