//! The bimodule calculus: composition, graphs, extension, lifting,
//! adjunction, and the pointwise lattice of modules.
//!
//! A module `φ: X ⇸ Y` is a Q-valued matrix indexed by objects of `X`
//! (rows) and `Y` (columns) satisfying `X(x′,x) ⊗ φ(x,y) ⊗ Y(y,y′) ≤
//! φ(x′,y′)`, equivalently a Q-functor `X^op ⊗ Y → Q`. Modules of type
//! `X ⇸ 1` carry the same data as presheaves `X^op → Q`, and modules
//! `1 ⇸ X` the same data as Q-functors `X → Q`; conversions between the
//! two views are explicit casts, never silent identifications.

use crate::category::{Cat, QCategory, QFunctor};
use crate::error::{Error, Result};
use crate::quantale::Violation;

#[derive(Debug, Clone)]
pub struct ModuleMatrix {
    source: Cat,
    target: Cat,
    entries: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Default)]
pub struct ModuleVerdict {
    pub violations: Vec<Violation>,
}

impl ModuleVerdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ModuleVerdict {
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

/// Checks the bimodule law `X(x′,x) ⊗ φ(x,y) ⊗ Y(y,y′) ≤ φ(x′,y′)`.
pub fn validate_module(source: &Cat, target: &Cat, entries: &[Vec<usize>]) -> Result<ModuleVerdict> {
    if !source.quantale().same_structure(target.quantale()) {
        return Err(Error::QuantaleMismatch(
            "module endpoints live over different quantales".to_string(),
        ));
    }
    let q = source.quantale();
    if entries.len() != source.size() {
        return Err(Error::Shape(format!(
            "module has {} rows, expected {}",
            entries.len(),
            source.size()
        )));
    }
    for (i, row) in entries.iter().enumerate() {
        if row.len() != target.size() {
            return Err(Error::Shape(format!(
                "module row {i} has {} entries, expected {}",
                row.len(),
                target.size()
            )));
        }
        for (j, &e) in row.iter().enumerate() {
            if e >= q.size() {
                return Err(Error::Shape(format!(
                    "module entry ({i},{j}) = {e} outside the quantale"
                )));
            }
        }
    }
    let mut verdict = ModuleVerdict::default();
    for xp in 0..source.size() {
        for x in 0..source.size() {
            for y in 0..target.size() {
                for yp in 0..target.size() {
                    let lhs = q.tensor(q.tensor(source.s(xp, x), entries[x][y]), target.s(y, yp));
                    if !q.leq(lhs, entries[xp][yp]) {
                        verdict.violations.push(Violation {
                            axiom: "bimodule".to_string(),
                            witness: format!(
                                "x'={},x={},y={},y'={}",
                                source.name(xp),
                                source.name(x),
                                target.name(y),
                                target.name(yp)
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(verdict)
}

impl ModuleMatrix {
    pub fn new(source: Cat, target: Cat, entries: Vec<Vec<usize>>) -> Result<ModuleMatrix> {
        let verdict = validate_module(&source, &target, &entries)?;
        if !verdict.is_valid() {
            return Err(Error::InvalidModule(verdict.to_string()));
        }
        Ok(ModuleMatrix {
            source,
            target,
            entries,
        })
    }

    pub fn source(&self) -> &Cat {
        &self.source
    }

    pub fn target(&self) -> &Cat {
        &self.target
    }

    pub fn entry(&self, x: usize, y: usize) -> usize {
        self.entries[x][y]
    }

    pub fn entries(&self) -> &Vec<Vec<usize>> {
        &self.entries
    }

    /// The underlying column of a module `X ⇸ 1`.
    pub fn as_column(&self) -> Result<Vec<usize>> {
        if self.target.size() != 1 {
            return Err(Error::EndpointMismatch(
                "module is not of type X ⇸ 1".to_string(),
            ));
        }
        Ok(self.entries.iter().map(|row| row[0]).collect())
    }

    /// The underlying row of a module `1 ⇸ X`.
    pub fn as_row(&self) -> Result<Vec<usize>> {
        if self.source.size() != 1 {
            return Err(Error::EndpointMismatch(
                "module is not of type 1 ⇸ X".to_string(),
            ));
        }
        Ok(self.entries[0].clone())
    }

    pub fn same_type(&self, other: &ModuleMatrix) -> bool {
        self.source.same_structure(&other.source) && self.target.same_structure(&other.target)
    }
}

/// The structure of `X` as the identity module `X ⇸ X`.
pub fn structure_module(c: &Cat) -> ModuleMatrix {
    ModuleMatrix::new(c.clone(), c.clone(), c.structure().clone())
        .expect("the structure matrix is a module")
}

/// The everywhere-`𝟏` module (the top of the module lattice).
pub fn top_module(source: &Cat, target: &Cat) -> Result<ModuleMatrix> {
    let u = source.quantale().unit();
    ModuleMatrix::new(
        source.clone(),
        target.clone(),
        vec![vec![u; target.size()]; source.size()],
    )
}

/// The everywhere-`⊥` module (the bottom of the module lattice).
pub fn bottom_module(source: &Cat, target: &Cat) -> Result<ModuleMatrix> {
    let b = source.quantale().bottom();
    ModuleMatrix::new(
        source.clone(),
        target.clone(),
        vec![vec![b; target.size()]; source.size()],
    )
}

/// Casts a presheaf column (a Q-functor `X^op → Q`) to the module `X ⇸ 1`.
pub fn column_module(c: &Cat, column: &[usize]) -> Result<ModuleMatrix> {
    let one = QCategory::unit(c.quantale());
    ModuleMatrix::new(c.clone(), one, column.iter().map(|&e| vec![e]).collect())
}

/// Casts a covariant functor row (a Q-functor `X → Q`) to the module `1 ⇸ X`.
pub fn row_module(c: &Cat, row: &[usize]) -> Result<ModuleMatrix> {
    let one = QCategory::unit(c.quantale());
    ModuleMatrix::new(one, c.clone(), vec![row.to_vec()])
}

/// Composition in diagram order: `phi: X ⇸ Y` then `psi: Y ⇸ Z` gives
/// `ψ·φ : X ⇸ Z` with `(ψ·φ)(x,z) = ⋁_y φ(x,y) ⊗ ψ(y,z)`.
pub fn compose(phi: &ModuleMatrix, psi: &ModuleMatrix) -> Result<ModuleMatrix> {
    if !phi.target.same_structure(&psi.source) {
        return Err(Error::EndpointMismatch(
            "module composition: middle categories differ".to_string(),
        ));
    }
    let q = phi.source.quantale();
    let entries: Vec<Vec<usize>> = (0..phi.source.size())
        .map(|x| {
            (0..psi.target.size())
                .map(|z| {
                    q.join(
                        (0..phi.target.size()).map(|y| q.tensor(phi.entry(x, y), psi.entry(y, z))),
                    )
                })
                .collect()
        })
        .collect();
    ModuleMatrix::new(phi.source.clone(), psi.target.clone(), entries)
}

/// The graph `f_* : X ⇸ Y`, `f_*(x,y) = Y(fx,y)`.
pub fn lower_star(f: &QFunctor) -> ModuleMatrix {
    let entries: Vec<Vec<usize>> = (0..f.source().size())
        .map(|x| {
            (0..f.target().size())
                .map(|y| f.target().s(f.apply(x), y))
                .collect()
        })
        .collect();
    ModuleMatrix::new(f.source().clone(), f.target().clone(), entries)
        .expect("f_* of a functor is a module")
}

/// The graph `f^* : Y ⇸ X`, `f^*(y,x) = Y(y,fx)`.
pub fn upper_star(f: &QFunctor) -> ModuleMatrix {
    let entries: Vec<Vec<usize>> = (0..f.target().size())
        .map(|y| {
            (0..f.source().size())
                .map(|x| f.target().s(y, f.apply(x)))
                .collect()
        })
        .collect();
    ModuleMatrix::new(f.target().clone(), f.source().clone(), entries)
        .expect("f^* of a functor is a module")
}

/// The representable `x^* = X(−,x)` as a module `X ⇸ 1`.
pub fn yoneda_presheaf(c: &Cat, x: usize) -> ModuleMatrix {
    let column: Vec<usize> = (0..c.size()).map(|y| c.s(y, x)).collect();
    column_module(c, &column).expect("representables are modules")
}

/// The corepresentable `x_* = X(x,−)` as a module `1 ⇸ X`.
pub fn co_yoneda(c: &Cat, x: usize) -> ModuleMatrix {
    let row: Vec<usize> = (0..c.size()).map(|y| c.s(x, y)).collect();
    row_module(c, &row).expect("corepresentables are modules")
}

/// Extension `ψ •− φ : Y ⇸ Z` of `ψ: X ⇸ Z` along `φ: X ⇸ Y`:
/// `(ψ•−φ)(y,z) = ⋀_x Q(φ(x,y), ψ(x,z))`. Right adjoint to `−·φ`.
pub fn extension(psi: &ModuleMatrix, phi: &ModuleMatrix) -> Result<ModuleMatrix> {
    if !psi.source.same_structure(&phi.source) {
        return Err(Error::EndpointMismatch(
            "extension: the two modules must share their source".to_string(),
        ));
    }
    let q = psi.source.quantale();
    let entries: Vec<Vec<usize>> = (0..phi.target.size())
        .map(|y| {
            (0..psi.target.size())
                .map(|z| {
                    q.meet(
                        (0..psi.source.size()).map(|x| q.hom(phi.entry(x, y), psi.entry(x, z))),
                    )
                })
                .collect()
        })
        .collect();
    ModuleMatrix::new(phi.target.clone(), psi.target.clone(), entries)
}

/// Lifting `φ −• ψ : Z ⇸ X` of `ψ: Z ⇸ Y` along `φ: X ⇸ Y`:
/// `(φ−•ψ)(z,x) = ⋀_y Q(φ(x,y), ψ(z,y))`. Right adjoint to `φ·−`.
pub fn lifting(phi: &ModuleMatrix, psi: &ModuleMatrix) -> Result<ModuleMatrix> {
    if !phi.target.same_structure(&psi.target) {
        return Err(Error::EndpointMismatch(
            "lifting: the two modules must share their target".to_string(),
        ));
    }
    let q = phi.source.quantale();
    let entries: Vec<Vec<usize>> = (0..psi.source.size())
        .map(|z| {
            (0..phi.source.size())
                .map(|x| {
                    q.meet(
                        (0..phi.target.size()).map(|y| q.hom(phi.entry(x, y), psi.entry(z, y))),
                    )
                })
                .collect()
        })
        .collect();
    ModuleMatrix::new(psi.source.clone(), phi.source.clone(), entries)
}

/// Hom of two presheaves (or two functors into Q) of a common type:
/// `[α,β] = ⋀_x Q(α(x), β(x))`.
pub fn presheaf_hom(alpha: &ModuleMatrix, beta: &ModuleMatrix) -> Result<usize> {
    if !alpha.same_type(beta) {
        return Err(Error::EndpointMismatch(
            "presheaf hom needs modules of one type".to_string(),
        ));
    }
    let q = alpha.source.quantale();
    Ok(q.meet(
        alpha
            .entries
            .iter()
            .flatten()
            .zip(beta.entries.iter().flatten())
            .map(|(&a, &b)| q.hom(a, b)),
    ))
}

/// Hom of two raw columns over one category.
pub fn column_hom(c: &Cat, alpha: &[usize], beta: &[usize]) -> usize {
    let q = c.quantale();
    q.meet(alpha.iter().zip(beta).map(|(&a, &b)| q.hom(a, b)))
}

/// `left ⊣ right` for `left: Z ⇸ X`, `right: X ⇸ Z`: the counit
/// `compose(right, left) ≤ X` and the unit `compose(left, right) ≥ Z`,
/// both entrywise in the quantale order.
pub fn check_adjoint(left: &ModuleMatrix, right: &ModuleMatrix) -> Result<bool> {
    if !left.target.same_structure(&right.source) || !right.target.same_structure(&left.source) {
        return Err(Error::EndpointMismatch(
            "adjunction check: modules must be typed Z ⇸ X and X ⇸ Z".to_string(),
        ));
    }
    let q = left.source.quantale();
    let counit = compose(right, left)?; // X ⇸ X
    let x_cat = &right.source;
    for x in 0..x_cat.size() {
        for y in 0..x_cat.size() {
            if !q.leq(counit.entry(x, y), x_cat.s(x, y)) {
                return Ok(false);
            }
        }
    }
    let unit = compose(left, right)?; // Z ⇸ Z
    let z_cat = &left.source;
    for x in 0..z_cat.size() {
        for y in 0..z_cat.size() {
            if !q.leq(z_cat.s(x, y), unit.entry(x, y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Pointwise order on modules of one type.
pub fn module_leq(a: &ModuleMatrix, b: &ModuleMatrix) -> Result<bool> {
    if !a.same_type(b) {
        return Err(Error::EndpointMismatch(
            "module order needs modules of one type".to_string(),
        ));
    }
    let q = a.source.quantale();
    Ok(a.entries
        .iter()
        .flatten()
        .zip(b.entries.iter().flatten())
        .all(|(&x, &y)| q.leq(x, y)))
}

/// Pointwise join; the empty family gives the `⊥`-constant module.
pub fn module_join(source: &Cat, target: &Cat, parts: &[&ModuleMatrix]) -> Result<ModuleMatrix> {
    let q = source.quantale();
    let mut entries = vec![vec![q.bottom(); target.size()]; source.size()];
    for part in parts {
        if !part.source.same_structure(source) || !part.target.same_structure(target) {
            return Err(Error::EndpointMismatch(
                "module join over mixed types".to_string(),
            ));
        }
        for x in 0..source.size() {
            for y in 0..target.size() {
                entries[x][y] = q.join2(entries[x][y], part.entry(x, y));
            }
        }
    }
    ModuleMatrix::new(source.clone(), target.clone(), entries)
}

/// Pointwise meet; the empty family gives the `𝟏`-constant module.
pub fn module_meet(source: &Cat, target: &Cat, parts: &[&ModuleMatrix]) -> Result<ModuleMatrix> {
    let q = source.quantale();
    let mut entries = vec![vec![q.unit(); target.size()]; source.size()];
    for part in parts {
        if !part.source.same_structure(source) || !part.target.same_structure(target) {
            return Err(Error::EndpointMismatch(
                "module meet over mixed types".to_string(),
            ));
        }
        for x in 0..source.size() {
            for y in 0..target.size() {
                entries[x][y] = q.meet2(entries[x][y], part.entry(x, y));
            }
        }
    }
    ModuleMatrix::new(source.clone(), target.clone(), entries)
}
