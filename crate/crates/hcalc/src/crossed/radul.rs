use super::group::IsometryElement;
use super::product::CrossedSymbol;
use super::CrossedError;
use crate::residue::wres;
use crate::scalar::ExactScalar;
use crate::symbols::{log_commutator, HSymbol, SymbolError};

/// φ(aU_g, bU_h) = ∮ aU_g [log Δ^{1/4}, bU_h], zero unless gh = e.
pub fn radul_cocycle(a: &CrossedSymbol, b: &CrossedSymbol) -> Result<ExactScalar, CrossedError> {
    if a.shape() != b.shape() {
        return Err(CrossedError::ShapeMismatch);
    }
    let mut acc = ExactScalar::zero();
    for (g, x) in a.support() {
        for (h, y) in b.support() {
            if !g.compose(h).is_identity() {
                continue;
            }
            // α_h(L) = L for isometries, so [L, bU_h] = [L, b]_⋆ U_h.
            let c = log_commutator(y)?;
            acc.add_assign_ref(&wres(&x.star(&g.act_on_symbol(&c))?)?);
        }
    }
    Ok(acc)
}

/// Canonical lift of degree-0 data: the symbol whose lower components vanish.
pub fn leading_lift(f: &HSymbol, floor: i64) -> Result<HSymbol, CrossedError> {
    if f.iter().any(|(d, k, _)| d != 0 || k.mono.log_pow != 0) {
        return Err(SymbolError::NotDegreeZero.into());
    }
    let mut s = HSymbol::zero(f.shape(), 0, floor.min(0));
    for (_, k, c) in f.iter() {
        s.add_term(c.clone(), k.mono.clone(), k.word);
    }
    Ok(s)
}

/// Convenience: a U_e.
pub fn at_unit(a: HSymbol) -> CrossedSymbol {
    let n = a.shape().n();
    CrossedSymbol::single(IsometryElement::identity(n), a)
}
