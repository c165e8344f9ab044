//! Finite Q-categories and Q-functors.
//!
//! A Q-category is a finite set with a Q-valued structure matrix that is
//! reflexive (`𝟏 ≤ X(x,x)`) and transitive (`X(x,y)⊗X(y,z) ≤ X(x,z)`).
//! Because the unit is the top element, reflexivity forces `X(x,x) = 𝟏`.
//! This module also provides the constructions of the basic calculus:
//! opposites, tensor products, functor categories, the Yoneda embedding,
//! exhaustive functor enumeration, and equivalence search.

use std::sync::Arc;

use crate::caps::{Caps, SearchBudget};
use crate::error::{Error, Result};
use crate::quantale::{QuantaleTable, Violation};

/// Shared handle to a category. Categories are immutable after validation.
pub type Cat = Arc<QCategory>;

#[derive(Debug)]
pub struct QCategory {
    quantale: Arc<QuantaleTable>,
    names: Vec<String>,
    structure: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Default)]
pub struct CategoryVerdict {
    pub violations: Vec<Violation>,
}

impl CategoryVerdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for CategoryVerdict {
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

/// Validates a raw structure matrix against a quantale. Shape problems are
/// errors; reflexivity/transitivity failures land in the verdict.
pub fn validate_category(
    quantale: &QuantaleTable,
    names: &[String],
    structure: &[Vec<usize>],
) -> Result<CategoryVerdict> {
    let n = names.len();
    if structure.len() != n {
        return Err(Error::Shape(format!(
            "structure has {} rows, expected {n}",
            structure.len()
        )));
    }
    for (i, row) in structure.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Shape(format!(
                "structure row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &e) in row.iter().enumerate() {
            if e >= quantale.size() {
                return Err(Error::Shape(format!(
                    "structure entry ({i},{j}) = {e} outside the quantale"
                )));
            }
        }
    }
    let mut verdict = CategoryVerdict::default();
    for x in 0..n {
        if !quantale.leq(quantale.unit(), structure[x][x]) {
            verdict.violations.push(Violation {
                axiom: "reflexivity".to_string(),
                witness: format!("x={}", names[x]),
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let comp = quantale.tensor(structure[x][y], structure[y][z]);
                if !quantale.leq(comp, structure[x][z]) {
                    verdict.violations.push(Violation {
                        axiom: "transitivity".to_string(),
                        witness: format!("x={},y={},z={}", names[x], names[y], names[z]),
                    });
                }
            }
        }
    }
    Ok(verdict)
}

impl QCategory {
    pub fn new(
        quantale: Arc<QuantaleTable>,
        names: Vec<String>,
        structure: Vec<Vec<usize>>,
    ) -> Result<Cat> {
        let verdict = validate_category(&quantale, &names, &structure)?;
        if !verdict.is_valid() {
            return Err(Error::InvalidCategory(verdict.to_string()));
        }
        Ok(Arc::new(QCategory {
            quantale,
            names,
            structure,
        }))
    }

    /// The one-object category `1` over a quantale. A canonical shared
    /// shape: any two copies are structurally equal.
    pub fn unit(quantale: &Arc<QuantaleTable>) -> Cat {
        let u = quantale.unit();
        QCategory::new(quantale.clone(), vec!["*".to_string()], vec![vec![u]])
            .expect("one-object category is always valid")
    }

    /// The empty category over a quantale.
    pub fn empty(quantale: &Arc<QuantaleTable>) -> Cat {
        QCategory::new(quantale.clone(), vec![], vec![]).expect("empty category is valid")
    }

    /// The quantale as a category over itself via its internal hom.
    pub fn from_quantale(quantale: &Arc<QuantaleTable>) -> Cat {
        let n = quantale.size();
        let structure = (0..n)
            .map(|a| (0..n).map(|b| quantale.hom(a, b)).collect())
            .collect();
        QCategory::new(
            quantale.clone(),
            quantale.names().to_vec(),
            structure,
        )
        .expect("a quantale is a category under its internal hom")
    }

    pub fn quantale(&self) -> &Arc<QuantaleTable> {
        &self.quantale
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// Structure entry `X(x,y)`.
    pub fn s(&self, x: usize, y: usize) -> usize {
        self.structure[x][y]
    }

    pub fn structure(&self) -> &Vec<Vec<usize>> {
        &self.structure
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn opposite(self: &Arc<Self>) -> Cat {
        let n = self.size();
        let structure = (0..n)
            .map(|x| (0..n).map(|y| self.structure[y][x]).collect())
            .collect();
        QCategory::new(self.quantale.clone(), self.names.clone(), structure)
            .expect("the opposite of a valid category is valid")
    }

    /// Tensor product: `X⊗Y((x,y),(z,w)) = X(x,z)⊗Y(y,w)`.
    pub fn tensor(a: &Cat, b: &Cat) -> Result<Cat> {
        if !a.quantale.same_structure(&b.quantale) {
            return Err(Error::QuantaleMismatch(
                "tensor product requires a shared quantale".to_string(),
            ));
        }
        let q = &a.quantale;
        let mut names = Vec::with_capacity(a.size() * b.size());
        let mut structure = Vec::with_capacity(a.size() * b.size());
        for x in 0..a.size() {
            for y in 0..b.size() {
                names.push(format!("({},{})", a.name(x), b.name(y)));
            }
        }
        for x in 0..a.size() {
            for y in 0..b.size() {
                let mut row = Vec::with_capacity(a.size() * b.size());
                for z in 0..a.size() {
                    for w in 0..b.size() {
                        row.push(q.tensor(a.s(x, z), b.s(y, w)));
                    }
                }
                structure.push(row);
            }
        }
        QCategory::new(q.clone(), names, structure)
    }

    /// The preorder `x ≤ y iff 𝟏 ≤ X(x,y)`.
    pub fn underlying_preorder(&self) -> Vec<Vec<bool>> {
        let n = self.size();
        let u = self.quantale.unit();
        (0..n)
            .map(|x| (0..n).map(|y| self.quantale.leq(u, self.structure[x][y])).collect())
            .collect()
    }

    pub fn is_separated(&self) -> bool {
        let pre = self.underlying_preorder();
        for x in 0..self.size() {
            for y in 0..self.size() {
                if x != y && pre[x][y] && pre[y][x] {
                    return false;
                }
            }
        }
        true
    }

    /// `x ≅ y` in the underlying preorder.
    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        let u = self.quantale.unit();
        self.quantale.leq(u, self.structure[x][y]) && self.quantale.leq(u, self.structure[y][x])
    }

    /// Structural equality over structurally equal quantales; names ignored.
    pub fn same_structure(&self, other: &QCategory) -> bool {
        self.structure == other.structure && self.quantale.same_structure(&other.quantale)
    }
}

/// A Q-functor: a map of objects with `X(x,z) ≤ Y(fx,fz)`.
#[derive(Debug, Clone)]
pub struct QFunctor {
    source: Cat,
    target: Cat,
    map: Vec<usize>,
}

pub fn validate_functor(source: &Cat, target: &Cat, map: &[usize]) -> Result<CategoryVerdict> {
    if !source.quantale().same_structure(target.quantale()) {
        return Err(Error::QuantaleMismatch(
            "functor endpoints live over different quantales".to_string(),
        ));
    }
    if map.len() != source.size() {
        return Err(Error::Shape(format!(
            "functor map has {} entries, expected {}",
            map.len(),
            source.size()
        )));
    }
    for (x, &fx) in map.iter().enumerate() {
        if fx >= target.size() {
            return Err(Error::Shape(format!(
                "functor sends object {x} to {fx}, outside the target"
            )));
        }
    }
    let q = source.quantale();
    let mut verdict = CategoryVerdict::default();
    for x in 0..source.size() {
        for z in 0..source.size() {
            if !q.leq(source.s(x, z), target.s(map[x], map[z])) {
                verdict.violations.push(Violation {
                    axiom: "functoriality".to_string(),
                    witness: format!("x={},z={}", source.name(x), source.name(z)),
                });
            }
        }
    }
    Ok(verdict)
}

impl QFunctor {
    pub fn new(source: Cat, target: Cat, map: Vec<usize>) -> Result<QFunctor> {
        let verdict = validate_functor(&source, &target, &map)?;
        if !verdict.is_valid() {
            return Err(Error::InvalidFunctor(verdict.to_string()));
        }
        Ok(QFunctor { source, target, map })
    }

    pub fn identity(c: &Cat) -> QFunctor {
        QFunctor {
            source: c.clone(),
            target: c.clone(),
            map: (0..c.size()).collect(),
        }
    }

    pub fn source(&self) -> &Cat {
        &self.source
    }

    pub fn target(&self) -> &Cat {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn compose(&self, then: &QFunctor) -> Result<QFunctor> {
        if !self.target.same_structure(&then.source) {
            return Err(Error::EndpointMismatch(
                "functor composition endpoints do not match".to_string(),
            ));
        }
        QFunctor::new(
            self.source.clone(),
            then.target.clone(),
            self.map.iter().map(|&x| then.map[x]).collect(),
        )
    }
}

/// All Q-functors `source → target`, in lexicographic order of their object
/// maps. Backtracking assigns the most constrained object first and prunes
/// partial maps that already violate functoriality.
pub fn enumerate_functors(source: &Cat, target: &Cat, caps: &Caps) -> Result<Vec<QFunctor>> {
    if !source.quantale().same_structure(target.quantale()) {
        return Err(Error::QuantaleMismatch(
            "functor enumeration endpoints live over different quantales".to_string(),
        ));
    }
    let ns = source.size();
    let nt = target.size();
    if ns == 0 {
        return Ok(vec![QFunctor {
            source: source.clone(),
            target: target.clone(),
            map: vec![],
        }]);
    }
    if nt == 0 {
        return Ok(vec![]);
    }
    let q = source.quantale();
    let mut budget = SearchBudget::new(caps, "functor enumeration");
    let mut assignment: Vec<Option<usize>> = vec![None; ns];
    // candidates[x] starts as the targets compatible with x's self-hom
    let base_candidates: Vec<Vec<usize>> = (0..ns)
        .map(|x| {
            (0..nt)
                .filter(|&t| q.leq(source.s(x, x), target.s(t, t)))
                .collect()
        })
        .collect();
    let mut results: Vec<Vec<usize>> = Vec::new();
    search(
        q,
        source,
        target,
        &base_candidates,
        &mut assignment,
        &mut results,
        &mut budget,
    )?;
    results.sort();
    results
        .into_iter()
        .map(|map| {
            Ok(QFunctor {
                source: source.clone(),
                target: target.clone(),
                map,
            })
        })
        .collect()
}

fn compatible(
    q: &QuantaleTable,
    source: &QCategory,
    target: &QCategory,
    assignment: &[Option<usize>],
    x: usize,
    t: usize,
) -> bool {
    for (y, fy) in assignment.iter().enumerate() {
        if let Some(fy) = fy {
            if !q.leq(source.s(x, y), target.s(t, *fy)) || !q.leq(source.s(y, x), target.s(*fy, t))
            {
                return false;
            }
        }
    }
    true
}

fn search(
    q: &QuantaleTable,
    source: &Cat,
    target: &Cat,
    base_candidates: &[Vec<usize>],
    assignment: &mut Vec<Option<usize>>,
    results: &mut Vec<Vec<usize>>,
    budget: &mut SearchBudget,
) -> Result<()> {
    budget.visit_node()?;
    // pick the unassigned object with the fewest viable targets
    let mut best: Option<(usize, Vec<usize>)> = None;
    for x in 0..assignment.len() {
        if assignment[x].is_some() {
            continue;
        }
        let viable: Vec<usize> = base_candidates[x]
            .iter()
            .copied()
            .filter(|&t| compatible(q, source, target, assignment, x, t))
            .collect();
        let better = match &best {
            None => true,
            Some((_, v)) => viable.len() < v.len(),
        };
        if better {
            let exhausted = viable.is_empty();
            best = Some((x, viable));
            if exhausted {
                return Ok(());
            }
        }
    }
    match best {
        None => {
            budget.emit_candidate()?;
            results.push(assignment.iter().map(|a| a.unwrap()).collect());
            Ok(())
        }
        Some((x, viable)) => {
            for t in viable {
                assignment[x] = Some(t);
                search(q, source, target, base_candidates, assignment, results, budget)?;
                assignment[x] = None;
            }
            Ok(())
        }
    }
}

/// A functor category `Y^X` realized as a Q-category whose objects are the
/// enumerated functors, with structure `Y^X(f,g) = ⋀_x Y(fx,gx)`.
#[derive(Debug)]
pub struct ExponentialCategory {
    pub category: Cat,
    /// Object maps, in the same (lexicographic) order as the objects.
    pub maps: Vec<Vec<usize>>,
}

impl ExponentialCategory {
    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.maps.binary_search_by(|m| m.as_slice().cmp(map)).ok()
    }
}

pub fn functor_category(source: &Cat, target: &Cat, caps: &Caps) -> Result<ExponentialCategory> {
    let functors = enumerate_functors(source, target, caps)?;
    let q = source.quantale();
    let maps: Vec<Vec<usize>> = functors.into_iter().map(|f| f.map).collect();
    let names: Vec<String> = (0..maps.len()).map(|i| format!("f{i}")).collect();
    let structure: Vec<Vec<usize>> = maps
        .iter()
        .map(|f| {
            maps.iter()
                .map(|g| q.meet((0..f.len()).map(|x| q.hom(f[x], g[x]))))
                .collect()
        })
        .collect();
    let category = QCategory::new(q.clone(), names, structure)?;
    Ok(ExponentialCategory { category, maps })
}

/// The presheaf category `X̂ = Q^(X^op)`. Its objects are exactly the
/// modules `X ⇸ 1`, stored as columns indexed by the objects of `X`.
pub fn presheaf_category(c: &Cat, caps: &Caps) -> Result<ExponentialCategory> {
    functor_category(&c.opposite(), &QCategory::from_quantale(c.quantale()), caps)
}

/// The Yoneda embedding `X → X̂`, `x ↦ X(−,x)`, as an object map into the
/// presheaf category. This is also the exponential mate of the structure.
pub fn yoneda_embedding(c: &Cat, presheaves: &ExponentialCategory) -> Result<QFunctor> {
    let mut map = Vec::with_capacity(c.size());
    for x in 0..c.size() {
        let column: Vec<usize> = (0..c.size()).map(|y| c.s(y, x)).collect();
        let idx = presheaves.index_of(&column).ok_or_else(|| {
            Error::CrossCheck(format!(
                "representable presheaf of object {} missing from X̂",
                c.name(x)
            ))
        })?;
        map.push(idx);
    }
    QFunctor::new(c.clone(), presheaves.category.clone(), map)
}

/// Searches for an equivalence of categories: a pair of functors whose
/// composites are pointwise equivalent to the identities. Works on the
/// quotients by `≅`, where an equivalence must restrict to a structure
/// preserving bijection of representatives.
pub fn find_equivalence(c: &Cat, d: &Cat) -> Result<Option<(QFunctor, QFunctor)>> {
    if !c.quantale().same_structure(d.quantale()) {
        return Err(Error::QuantaleMismatch(
            "equivalence search endpoints live over different quantales".to_string(),
        ));
    }
    let reps_c = quotient_representatives(c);
    let reps_d = quotient_representatives(d);
    if reps_c.len() != reps_d.len() {
        return Ok(None);
    }
    let k = reps_c.len();
    let mut used = vec![false; k];
    let mut assignment = vec![usize::MAX; k];

    fn backtrack(
        c: &QCategory,
        d: &QCategory,
        reps_c: &[usize],
        reps_d: &[usize],
        i: usize,
        used: &mut Vec<bool>,
        assignment: &mut Vec<usize>,
    ) -> bool {
        if i == reps_c.len() {
            return true;
        }
        for j in 0..reps_d.len() {
            if used[j] {
                continue;
            }
            let ok = (0..i + 1).all(|p| {
                let (a, b) = (reps_c[p], reps_c[i]);
                let (fa, fb) = (
                    reps_d[if p == i { j } else { assignment[p] }],
                    reps_d[j],
                );
                c.s(a, b) == d.s(fa, fb) && c.s(b, a) == d.s(fb, fa)
            });
            if ok {
                used[j] = true;
                assignment[i] = j;
                if backtrack(c, d, reps_c, reps_d, i + 1, used, assignment) {
                    return true;
                }
                used[j] = false;
                assignment[i] = usize::MAX;
            }
        }
        false
    }

    if !backtrack(c, d, &reps_c, &reps_d, 0, &mut used, &mut assignment) {
        return Ok(None);
    }
    let class_of = |cat: &QCategory, reps: &[usize], x: usize| -> usize {
        reps.iter()
            .position(|&r| cat.equivalent(r, x))
            .expect("every object is equivalent to a representative")
    };
    let fwd: Vec<usize> = (0..c.size())
        .map(|x| reps_d[assignment[class_of(c, &reps_c, x)]])
        .collect();
    let inverse_assignment: Vec<usize> = (0..k)
        .map(|j| assignment.iter().position(|&a| a == j).unwrap())
        .collect();
    let bwd: Vec<usize> = (0..d.size())
        .map(|y| reps_c[inverse_assignment[class_of(d, &reps_d, y)]])
        .collect();
    let f = QFunctor::new(c.clone(), d.clone(), fwd)?;
    let g = QFunctor::new(d.clone(), c.clone(), bwd)?;
    Ok(Some((f, g)))
}

/// Least-index representatives of the `≅`-classes.
pub fn quotient_representatives(c: &QCategory) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..c.size() {
        if !reps.iter().any(|&r| c.equivalent(r, x)) {
            reps.push(x);
        }
    }
    reps
}

/// Searches for a right adjoint to `f`: a functor `g` with
/// `Y(fx,y) = X(x,gy)` for all `x,y`. Returns the least such `g`.
pub fn right_adjoint(f: &QFunctor, caps: &Caps) -> Result<Option<QFunctor>> {
    let x_cat = f.source();
    let y_cat = f.target();
    for g in enumerate_functors(y_cat, x_cat, caps)? {
        let adjoint = (0..x_cat.size()).all(|x| {
            (0..y_cat.size()).all(|y| y_cat.s(f.apply(x), y) == x_cat.s(x, g.apply(y)))
        });
        if adjoint {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::QuantaleTable;

    pub(crate) fn chain2(q: &Arc<QuantaleTable>) -> Cat {
        // a ≤ b over Q2
        QCategory::new(
            q.clone(),
            vec!["a".to_string(), "b".to_string()],
            vec![vec![1, 1], vec![0, 1]],
        )
        .unwrap()
    }

    pub(crate) fn antichain2(q: &Arc<QuantaleTable>) -> Cat {
        QCategory::new(
            q.clone(),
            vec!["a".to_string(), "b".to_string()],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap()
    }

    /// `{0,…,n}` with the truncated ultrametric over CH_MAX(n).
    pub(crate) fn ntrunc(n: usize) -> Cat {
        let q = QuantaleTable::ch_max(n).unwrap();
        let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let structure: Vec<Vec<usize>> = (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|j| if i == j { 0 } else { i.max(j) })
                    .collect()
            })
            .collect();
        QCategory::new(q, names, structure).unwrap()
    }

    #[test]
    fn poset_chain_is_valid_over_q2() {
        let q = QuantaleTable::q2().unwrap();
        let c = chain2(&q);
        assert!(c.is_separated());
    }

    #[test]
    fn ntrunc3_is_valid() {
        let c = ntrunc(3);
        assert_eq!(c.size(), 4);
        assert!(c.is_separated());
    }

    #[test]
    fn broken_reflexivity_is_reported() {
        let q = QuantaleTable::q2().unwrap();
        let verdict = validate_category(
            &q,
            &["a".to_string(), "b".to_string()],
            &[vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        assert!(verdict
            .violations
            .iter()
            .any(|v| v.axiom == "reflexivity" && v.witness == "x=a"));
    }

    #[test]
    fn opposite_of_chain_reverses() {
        let q = QuantaleTable::q2().unwrap();
        let c = chain2(&q);
        let op = c.opposite();
        assert_eq!(op.s(0, 1), 0);
        assert_eq!(op.s(1, 0), 1);
        assert!(op.opposite().same_structure(&c));
    }

    #[test]
    fn opposite_of_ntrunc_is_ntrunc() {
        let c = ntrunc(3);
        assert!(c.opposite().same_structure(&c));
    }

    #[test]
    fn tensor_of_one_object_categories() {
        let q = QuantaleTable::q2().unwrap();
        let one = QCategory::unit(&q);
        let t = QCategory::tensor(&one, &one).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(t.s(0, 0), q.unit());
    }

    #[test]
    fn tensor_is_associative_up_to_reindexing() {
        let q = QuantaleTable::q2().unwrap();
        let a = chain2(&q);
        let b = antichain2(&q);
        let c = QCategory::unit(&q);
        let left = QCategory::tensor(&QCategory::tensor(&a, &b).unwrap(), &c).unwrap();
        let right = QCategory::tensor(&a, &QCategory::tensor(&b, &c).unwrap()).unwrap();
        // the canonical bijection is the identity on flattened indices
        assert_eq!(left.structure(), right.structure());
    }

    #[test]
    fn underlying_preorder_of_quantale_category_is_quantale_order() {
        let q = QuantaleTable::ch_plus(2).unwrap();
        let c = QCategory::from_quantale(&q);
        let pre = c.underlying_preorder();
        for a in 0..q.size() {
            for b in 0..q.size() {
                assert_eq!(pre[a][b], q.leq(a, b));
            }
        }
        assert!(c.is_separated());
    }

    #[test]
    fn indiscrete_two_points_not_separated() {
        let q = QuantaleTable::q2().unwrap();
        let c = QCategory::new(
            q.clone(),
            vec!["x".to_string(), "y".to_string()],
            vec![vec![1, 1], vec![1, 1]],
        )
        .unwrap();
        assert!(!c.is_separated());
        let pre = c.underlying_preorder();
        assert!(pre[0][1] && pre[1][0]);
    }

    /// Oracle: filter all |Y|^|X| maps by the functor law directly.
    fn functors_brute_force(source: &Cat, target: &Cat) -> Vec<Vec<usize>> {
        let ns = source.size();
        let nt = target.size();
        let mut out = Vec::new();
        let total = nt.pow(ns as u32);
        for code in 0..total {
            let mut map = Vec::with_capacity(ns);
            let mut c = code;
            for _ in 0..ns {
                map.push(c % nt);
                c /= nt;
            }
            if validate_functor(source, target, &map).unwrap().is_valid() {
                out.push(map);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn functors_from_unit_are_objects() {
        let q = QuantaleTable::q2().unwrap();
        let one = QCategory::unit(&q);
        let c = chain2(&q);
        let fs = enumerate_functors(&one, &c, &Caps::default()).unwrap();
        assert_eq!(fs.len(), c.size());
    }

    #[test]
    fn monotone_maps_chain2_to_chain2() {
        let q = QuantaleTable::q2().unwrap();
        let c = chain2(&q);
        let fs = enumerate_functors(&c, &c, &Caps::default()).unwrap();
        let maps: Vec<_> = fs.iter().map(|f| f.map().to_vec()).collect();
        assert_eq!(maps, functors_brute_force(&c, &c));
        assert_eq!(maps.len(), 3);
    }

    #[test]
    fn enumeration_matches_brute_force_on_ntrunc() {
        let c = ntrunc(3);
        let qcat = QCategory::from_quantale(c.quantale());
        let fs = enumerate_functors(&c, &qcat, &Caps::default()).unwrap();
        let maps: Vec<_> = fs.iter().map(|f| f.map().to_vec()).collect();
        assert_eq!(maps, functors_brute_force(&c, &qcat));
    }

    #[test]
    fn enumeration_cap_is_loud() {
        let c = ntrunc(3);
        let qcat = QCategory::from_quantale(c.quantale());
        let caps = Caps {
            max_columns: 5,
            ..Caps::default()
        };
        assert!(matches!(
            enumerate_functors(&c, &qcat, &caps),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn presheaves_of_chain2_form_a_three_chain() {
        let q = QuantaleTable::q2().unwrap();
        let c = chain2(&q);
        let ps = presheaf_category(&c, &Caps::default()).unwrap();
        // ∅ ⊂ ↓a ⊂ ↓b as columns (entries indexed by a,b)
        assert_eq!(ps.maps, vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        let cat = &ps.category;
        assert!(cat.s(0, 1) == 1 && cat.s(1, 2) == 1 && cat.s(2, 0) == 0);
    }

    #[test]
    fn presheaves_of_unit_are_the_quantale() {
        let q = QuantaleTable::ch_plus(2).unwrap();
        let one = QCategory::unit(&q);
        let ps = presheaf_category(&one, &Caps::default()).unwrap();
        assert_eq!(ps.maps.len(), q.size());
        assert!(ps.category.same_structure(&QCategory::from_quantale(&q)));
    }

    #[test]
    fn functor_category_order_is_pointwise() {
        let q = QuantaleTable::q2().unwrap();
        let c = chain2(&q);
        let qc = QCategory::from_quantale(&q);
        let fc = functor_category(&c, &qc, &Caps::default()).unwrap();
        let pre = fc.category.underlying_preorder();
        for (i, f) in fc.maps.iter().enumerate() {
            for (j, g) in fc.maps.iter().enumerate() {
                let pointwise = f.iter().zip(g).all(|(&a, &b)| q.leq(a, b));
                assert_eq!(pre[i][j], pointwise);
            }
        }
    }

    #[test]
    fn yoneda_lemma_exhaustive() {
        let q = QuantaleTable::q2().unwrap();
        for c in [chain2(&q), antichain2(&q)] {
            let ps = presheaf_category(&c, &Caps::default()).unwrap();
            let y = yoneda_embedding(&c, &ps).unwrap();
            for x in 0..c.size() {
                for (fi, fmap) in ps.maps.iter().enumerate() {
                    // X̂(y x, f) = f(x)
                    assert_eq!(ps.category.s(y.apply(x), fi), fmap[x]);
                }
            }
            // full faithfulness: X̂(y x, y z) = X(x,z)
            for x in 0..c.size() {
                for z in 0..c.size() {
                    assert_eq!(ps.category.s(y.apply(x), y.apply(z)), c.s(x, z));
                }
            }
        }
    }

    #[test]
    fn yoneda_lemma_on_ntrunc() {
        let c = ntrunc(2);
        let ps = presheaf_category(&c, &Caps::default()).unwrap();
        let y = yoneda_embedding(&c, &ps).unwrap();
        for x in 0..c.size() {
            for (fi, fmap) in ps.maps.iter().enumerate() {
                assert_eq!(ps.category.s(y.apply(x), fi), fmap[x]);
            }
        }
    }

    #[test]
    fn equivalence_search_finds_isos_and_rejects() {
        let q = QuantaleTable::q2().unwrap();
        let c = chain2(&q);
        let op = c.opposite();
        // a 2-chain is isomorphic to its opposite
        let (f, g) = find_equivalence(&c, &op).unwrap().unwrap();
        for x in 0..c.size() {
            assert!(c.equivalent(g.apply(f.apply(x)), x));
        }
        assert!(find_equivalence(&c, &antichain2(&q)).unwrap().is_none());
    }

    #[test]
    fn equivalence_search_quotients_non_separated() {
        let q = QuantaleTable::q2().unwrap();
        let indiscrete = QCategory::new(
            q.clone(),
            vec!["x".to_string(), "y".to_string()],
            vec![vec![1, 1], vec![1, 1]],
        )
        .unwrap();
        let one = QCategory::unit(&q);
        assert!(find_equivalence(&indiscrete, &one).unwrap().is_some());
    }

    #[test]
    fn right_adjoint_of_identity_exists() {
        let q = QuantaleTable::q2().unwrap();
        let c = chain2(&q);
        let id = QFunctor::identity(&c);
        let g = right_adjoint(&id, &Caps::default()).unwrap().unwrap();
        assert_eq!(g.map(), &[0, 1]);
    }

    #[test]
    fn constant_top_map_on_chain_has_no_right_adjoint() {
        let q = QuantaleTable::q2().unwrap();
        let c = chain2(&q);
        // constant-b does not preserve the empty join, so it is not left adjoint
        let f = QFunctor::new(c.clone(), c.clone(), vec![1, 1]).unwrap();
        assert!(right_adjoint(&f, &Caps::default()).unwrap().is_none());
        // constant-a preserves all joins and has the constant-b right adjoint
        let f = QFunctor::new(c.clone(), c.clone(), vec![0, 0]).unwrap();
        let g = right_adjoint(&f, &Caps::default()).unwrap().unwrap();
        assert_eq!(g.map(), &[1, 1]);
    }
}
