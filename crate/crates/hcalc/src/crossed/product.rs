use std::collections::BTreeMap;

use super::group::IsometryElement;
use super::CrossedError;
use crate::residue::wres;
use crate::scalar::ExactScalar;
use crate::symbols::{FoliationShape, HSymbol};

/// Σ_g a_g U_g with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedSymbol {
    shape: FoliationShape,
    support: BTreeMap<IsometryElement, HSymbol>,
}

impl CrossedSymbol {
    pub fn zero(shape: FoliationShape) -> Self {
        CrossedSymbol {
            shape,
            support: BTreeMap::new(),
        }
    }

    /// a U_g.
    pub fn single(g: IsometryElement, a: HSymbol) -> Self {
        let mut s = Self::zero(a.shape());
        s.insert(g, a);
        s
    }

    pub fn shape(&self) -> FoliationShape {
        self.shape
    }

    pub fn support(&self) -> &BTreeMap<IsometryElement, HSymbol> {
        &self.support
    }

    pub fn component(&self, g: &IsometryElement) -> Option<&HSymbol> {
        self.support.get(g)
    }

    /// Adds a U_g to the sum.
    pub fn insert(&mut self, g: IsometryElement, a: HSymbol) {
        assert_eq!(a.shape(), self.shape);
        let merged = match self.support.remove(&g) {
            Some(b) => b.add(&a).expect("same shape"),
            None => a,
        };
        if !merged.is_zero() {
            self.support.insert(g, merged);
        }
    }

    pub fn add(&self, other: &CrossedSymbol) -> Result<CrossedSymbol, CrossedError> {
        if self.shape != other.shape {
            return Err(CrossedError::ShapeMismatch);
        }
        let mut s = self.clone();
        for (g, a) in &other.support {
            s.insert(g.clone(), a.clone());
        }
        Ok(s)
    }

    pub fn neg(&self) -> CrossedSymbol {
        CrossedSymbol {
            shape: self.shape,
            support: self
                .support
                .iter()
                .map(|(g, a)| (g.clone(), a.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &CrossedSymbol) -> Result<CrossedSymbol, CrossedError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> CrossedSymbol {
        let mut s = Self::zero(self.shape);
        for (g, a) in &self.support {
            s.insert(g.clone(), a.scale(c));
        }
        s
    }

    /// α_h applied to every coefficient.
    pub fn act(&self, h: &IsometryElement) -> CrossedSymbol {
        CrossedSymbol {
            shape: self.shape,
            support: self
                .support
                .iter()
                .map(|(g, a)| (g.clone(), h.act_on_symbol(a)))
                .collect(),
        }
    }
}

/// (a U_g)(b U_h) = (a ⋆ α_g(b)) U_{gh}.
pub fn crossed_star(a: &CrossedSymbol, b: &CrossedSymbol) -> Result<CrossedSymbol, CrossedError> {
    if a.shape != b.shape {
        return Err(CrossedError::ShapeMismatch);
    }
    let mut out = CrossedSymbol::zero(a.shape);
    for (g, x) in &a.support {
        for (h, y) in &b.support {
            out.insert(g.compose(h), x.star(&g.act_on_symbol(y))?);
        }
    }
    Ok(out)
}

/// wres of the unit component.
pub fn localized_residue(a: &CrossedSymbol) -> Result<ExactScalar, CrossedError> {
    match a.support.get(&IsometryElement::identity(a.shape.n())) {
        Some(x) => Ok(wres(x)?),
        None => Ok(ExactScalar::zero()),
    }
}
